"""Tests for jordanstrata.cli module.

Tests cover:
- Subset argument resolution
- Each command and its exit code
- Usage errors
"""

import json

import pytest

from jordanstrata.affine_diagram import extended_diagram, isogeny_actions
from jordanstrata.cli import EXIT_DIFF, EXIT_OK, EXIT_USAGE, main, resolve_subsets
from jordanstrata.errors import MalformedSubsetError
from jordanstrata.models import CartanType


def _setup(name: str, selector: str = "sc"):
    cartan_type = CartanType.parse(name)
    return extended_diagram(cartan_type), isogeny_actions(cartan_type, selector)


class TestResolveSubsets:
    """Tests for resolve_subsets."""

    def test_indices_are_canonicalized(self):
        """Explicit indices map to the canonical representative."""
        extdiag, K = _setup("A2")
        assert resolve_subsets(extdiag, K, "{2}") == [(0,)]
        assert resolve_subsets(extdiag, K, "1, 2") == [(1, 2)]
        _, adjoint = _setup("A2", "adjoint")
        assert resolve_subsets(extdiag, adjoint, "1, 2") == [(0, 1)]

    def test_class_id(self):
        """Class ids follow the enumerate order."""
        extdiag, K = _setup("A2")
        assert resolve_subsets(extdiag, K, "c1") == [(0,)]

    def test_pattern(self):
        """Patterns resolve to every matching stratum."""
        extdiag, K = _setup("G2")
        assert resolve_subsets(extdiag, K, "tildeA1") == [(1,)]
        assert resolve_subsets(extdiag, K, "A1") == [(0,)]

    def test_unknown_class_id(self):
        """An out-of-range class id raises MalformedSubsetError."""
        extdiag, K = _setup("A2")
        with pytest.raises(MalformedSubsetError):
            resolve_subsets(extdiag, K, "c99")


class TestCommands:
    """Tests for the commands run through main."""

    def test_enumerate_to_stdout(self, capsys):
        """enumerate prints the strata document."""
        assert main(["enumerate", "--type", "A2", "--isogeny", "adjoint"]) == EXIT_OK
        document = json.loads(capsys.readouterr().out)
        assert document["meta"]["strata"] == 3

    def test_enumerate_to_file(self, tmp_path, capsys):
        """--output writes a file and says so."""
        path = tmp_path / "strata.json"
        assert main(["enumerate", "--type", "A1", "--output", str(path)]) == EXIT_OK
        assert "Written to" in capsys.readouterr().out
        assert json.loads(path.read_text())["kind"] == "strata"

    def test_classify(self, capsys):
        """classify resolves a pattern and prints the report."""
        assert main(["classify", "--type", "G2", "--subset", "tildeA1"]) == EXIT_OK
        document = json.loads(capsys.readouterr().out)
        assert document["rows"][0]["normal_bytype"] is True

    def test_tables(self, capsys):
        """tables exits 0 when the regenerated set is exact."""
        assert main(["tables", "--type", "F4"]) == EXIT_OK
        assert json.loads(capsys.readouterr().out)["meta"]["exact"] is True

    def test_tables_csv(self, capsys):
        """tables honours --format."""
        assert main(["tables", "--type", "G2", "--format", "csv"]) == EXIT_OK
        assert capsys.readouterr().out.startswith("rep,pattern,expected,regenerated,status")

    def test_oracle_check_all_subsets(self, capsys):
        """oracle-check agrees on extended A1."""
        assert main(["oracle-check", "--type", "A1", "--max-len", "6"]) == EXIT_OK
        document = json.loads(capsys.readouterr().out)
        assert document["meta"]["agree"] is True
        assert document["meta"]["geometric_strata"] == 3
        assert document["meta"]["arrangement"] is True

    def test_oracle_check_one_subset(self, capsys):
        """oracle-check with a subset adds the Omega rows."""
        assert main(["oracle-check", "--type", "A2", "--subset", "1", "--max-len", "6"]) == EXIT_OK
        rows = json.loads(capsys.readouterr().out)["rows"]
        assert [r["check"] for r in rows] == ["sigma", "omega", "omega", "omega"]

    def test_invariants_check(self, capsys):
        """invariants-check finds no contradiction for G2."""
        assert main(["invariants-check", "--type", "G2", "--degree", "6"]) == EXIT_OK
        assert json.loads(capsys.readouterr().out)["meta"]["consistent"] is True

    def test_invariants_check_rank_budget(self, capsys):
        """invariants-check refuses ranks above the budget."""
        assert main(["invariants-check", "--type", "E6"]) == EXIT_DIFF
        assert "Error" in capsys.readouterr().err


class TestUsageErrors:
    """Tests for exit code 2."""

    @pytest.mark.parametrize(
        "argv",
        [
            ["enumerate", "--type", "H3"],
            ["enumerate", "--type", "A3", "--isogeny", "Z5"],
            ["classify", "--type", "A2", "--subset", "0,1,2"],
            ["classify", "--type", "A2", "--subset", "c99"],
            ["classify", "--type", "A2", "--subset", "E8"],
        ],
    )
    def test_usage_errors(self, argv, capsys):
        """Bad types, selectors and subsets exit with 2."""
        assert main(argv) == EXIT_USAGE
        assert capsys.readouterr().err.startswith("Error:")
