"""Tests for jordanstrata.serialization module.

Tests cover:
- Strata, report and diff documents
- JSON, markdown and CSV rendering
- Atomic writes
"""

import json

import pytest

from jordanstrata.affine_diagram import extended_diagram, isogeny_actions
from jordanstrata.classify import classify
from jordanstrata.coxclass import Stratum, enumerate_strata
from jordanstrata.models import CartanType
from jordanstrata.serialization import (
    diff_document,
    format_nodes,
    render,
    report_document,
    reports_document,
    strata_document,
    write_document,
)
from jordanstrata.tables import diff_table


def _setup(name: str, selector: str = "sc"):
    cartan_type = CartanType.parse(name)
    return extended_diagram(cartan_type), isogeny_actions(cartan_type, selector)


@pytest.fixture
def a1_document():
    """Strata document of extended A1."""
    extdiag, K = _setup("A1")
    return strata_document(extdiag, K, enumerate_strata(extdiag, K))


class TestFormatNodes:
    """Tests for format_nodes."""

    def test_braces(self):
        """Node sets render in braces without spaces."""
        assert format_nodes((1, 3)) == "{1,3}"
        assert format_nodes(()) == "{}"


class TestStrataDocument:
    """Tests for strata_document."""

    def test_rows(self, a1_document):
        """Extended A1 has the torus and two points."""
        rows = a1_document["rows"]
        assert [r["id"] for r in rows] == ["c0", "c1", "c2"]
        assert [r["rep"] for r in rows] == ["{}", "{0}", "{1}"]
        assert [r["pattern"] for r in rows] == ["empty", "A1", "A1"]
        assert [r["dimension"] for r in rows] == [1, 0, 0]

    def test_meta_and_details(self, a1_document):
        """Meta names the type; details list the members."""
        assert a1_document["kind"] == "strata"
        assert a1_document["meta"] == {"type": "A1", "isogeny": "sc", "strata": 3}
        assert a1_document["details"]["members"]["c1"] == [[0]]


class TestReportDocument:
    """Tests for report_document and reports_document."""

    def test_short_wall_of_g2(self):
        """The report row carries the flags of the stratum."""
        extdiag, K = _setup("G2")
        document = report_document(classify(Stratum(extdiag, K, (1,))))
        row = document["rows"][0]
        assert row["pattern"] == "~A1"
        assert row["unibranch"] == "yes"
        assert row["normal_generic"] == "yes"
        assert row["normal_bytype"] is True
        assert [c["vertex"] for c in document["details"]["counterparts"]] == [0, 2]

    def test_several_reports(self):
        """reports_document keys details by representative."""
        extdiag, K = _setup("A2")
        reports = [classify(Stratum(extdiag, K, rep)) for rep in [(), (0,)]]
        document = reports_document(reports)
        assert document["meta"]["matches"] == 2
        assert set(document["details"]) == {"{}", "{0}"}


class TestDiffDocument:
    """Tests for diff_document."""

    def test_g2_all_ok(self):
        """Every row of the G2 normal table is ok."""
        extdiag, K = _setup("G2")
        document = diff_document(diff_table(extdiag, K, "normal"), extdiag)
        assert {r["status"] for r in document["rows"]} == {"ok"}
        assert document["meta"]["exact"] is True
        assert document["meta"]["source"] == "normal-list.G2"


class TestRender:
    """Tests for render."""

    def test_json(self, a1_document):
        """JSON has sorted keys and a trailing newline."""
        text = render(a1_document, "json")
        assert text.endswith("\n")
        assert json.loads(text) == a1_document
        assert text.index('"details"') < text.index('"kind"') < text.index('"meta"')

    def test_csv(self, a1_document):
        """CSV starts with the row columns."""
        lines = render(a1_document, "csv").splitlines()
        assert lines[0] == "id,rep,pattern,dimension,classes,members"
        assert len(lines) == 4

    def test_markdown(self, a1_document):
        """Markdown has a heading and a table."""
        text = render(a1_document, "markdown")
        assert text.startswith("## strata")
        assert "| id | rep | pattern | dimension | classes | members |" in text

    def test_unknown_format(self, a1_document):
        """An unknown format raises ValueError."""
        with pytest.raises(ValueError):
            render(a1_document, "yaml")


class TestWriteDocument:
    """Tests for write_document."""

    def test_writes_atomically(self, tmp_path, a1_document):
        """The file is written and no temp file remains."""
        path = tmp_path / "out" / "strata.json"
        write_document(path, a1_document)
        assert json.loads(path.read_text()) == a1_document
        assert not list(path.parent.glob("*.tmp"))

    def test_failed_write_removes_temp_file(self, tmp_path, a1_document):
        """A failure while writing leaves neither the target nor a temp file."""
        from unittest.mock import patch

        def failing_fdopen(*args, **kwargs):
            raise OSError("disk full")

        path = tmp_path / "strata.json"
        with patch("jordanstrata.serialization.os.fdopen", failing_fdopen):
            with pytest.raises(OSError):
                write_document(path, a1_document)
        assert not path.exists()
        assert list(tmp_path.iterdir()) == []

    def test_failed_rename_keeps_old_file(self, tmp_path, a1_document):
        """A failed rename keeps the previous content and cleans up."""
        from unittest.mock import patch

        path = tmp_path / "strata.json"
        path.write_text("old\n")

        def failing_rename(src, dst):
            raise OSError("read-only")

        with patch("jordanstrata.serialization.os.rename", failing_rename):
            with pytest.raises(OSError):
                write_document(path, a1_document)
        assert path.read_text() == "old\n"
        assert [p.name for p in tmp_path.iterdir()] == ["strata.json"]
