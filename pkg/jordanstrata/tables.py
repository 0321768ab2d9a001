"""Regenerate the classification tables and diff them against the expected lists.

This module provides:
- TableEntry: one stratum with its regenerated verdict
- TableDiff: expected versus regenerated sets
- expected_strata: the strata listed by the transcribed tables or closed forms
- regenerate_table: the strata the generic pipeline puts in a table
- diff_table: both, compared
"""

import logging
from dataclasses import dataclass

from jordanstrata.affine_diagram import ExtendedDiagram, IsogenyAction
from jordanstrata.bytype import classify_bytype, listed_subsets, supports
from jordanstrata.classify import classify_generic
from jordanstrata.config import TableProperty
from jordanstrata.coxclass import Stratum, strata
from jordanstrata.datafile import load_table_data
from jordanstrata.errors import UnsupportedCaseError
from jordanstrata.finite_kb import FiniteNormalityKB
from jordanstrata.models import NodeSet, Verdict
from jordanstrata.subdiagram import marks_short_roots, pattern_of

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TableEntry:
    """A stratum and whether the generic pipeline puts it in the table.

    Attributes:
        rep: Canonical representative.
        pattern: Component pattern of the representative.
        verdict: YES if listed, NO if not, UNKNOWN if undecided.
    """

    rep: NodeSet
    pattern: str
    verdict: Verdict


@dataclass(frozen=True)
class TableDiff:
    """Comparison of a regenerated table with its expected list.

    Attributes:
        cartan_type: Type name, e.g. "F4".
        selector: Isogeny selector.
        prop: "codim1" or "normal".
        source: Provenance of the expected list.
        expected: Representatives listed by the expected table.
        regenerated: Representatives the generic pipeline lists.
        missing: Expected but not regenerated (and not undecided).
        unexpected: Regenerated but not expected.
        undecided: Strata left unknown by the generic pipeline.
    """

    cartan_type: str
    selector: str
    prop: str
    source: str
    expected: tuple[NodeSet, ...]
    regenerated: tuple[NodeSet, ...]
    missing: tuple[NodeSet, ...]
    unexpected: tuple[NodeSet, ...]
    undecided: tuple[NodeSet, ...]

    @property
    def matches(self) -> bool:
        """True if every decided stratum agrees with the expected list."""
        return not self.missing and not self.unexpected

    @property
    def exact(self) -> bool:
        """True if the regenerated set equals the expected set."""
        return set(self.regenerated) == set(self.expected)


def _source(extdiag: ExtendedDiagram, K: IsogenyAction, prop: str) -> str:
    base = extdiag.base_type
    if not K.is_trivial:
        return f"closed-form.{base}.{K.selector}"
    if base.is_classical:
        return f"classical-list.{base}"
    table = load_table_data().affine_table(base, prop)
    return table.source if table is not None else f"{prop}-list.{base}"


def _expected(stratum: Stratum, prop: str) -> bool:
    extdiag = stratum.diagram
    if prop != "normal" or not supports(stratum):
        raise UnsupportedCaseError(
            f"No expected {prop} table for {extdiag.base_type} with K={stratum.K.selector}"
        )
    return classify_bytype(stratum).normal


def expected_strata(
    extdiag: ExtendedDiagram, K: IsogenyAction, prop: TableProperty = "normal"
) -> tuple[NodeSet, ...]:
    """Return the canonical representatives the expected table lists.

    Raises:
        UnsupportedCaseError: If no expected list exists for (type, K, prop).
    """
    found = strata(extdiag, K)
    if K.is_trivial:
        return tuple(listed_subsets(extdiag, prop, [s.rep for s in found]))
    return tuple(s.rep for s in found if _expected(s, prop))


def regenerate_table(
    extdiag: ExtendedDiagram,
    K: IsogenyAction,
    prop: TableProperty = "normal",
    kb: FiniteNormalityKB | None = None,
) -> list[TableEntry]:
    """Run the generic pipeline on every stratum.

    For "codim1" the verdict is the codimension-1 condition; for "normal"
    it is the generic normality verdict.
    """
    kb = kb or FiniteNormalityKB.default()
    mark_short = marks_short_roots(extdiag.base_type)
    entries = []
    for stratum in strata(extdiag, K):
        report = classify_generic(stratum, kb)
        if prop == "codim1":
            verdict = Verdict.YES if report.normal_codim1 else Verdict.NO
        else:
            verdict = report.normal_generic or Verdict.UNKNOWN
        pattern = pattern_of(extdiag.diagram, stratum.rep, mark_short)
        entries.append(TableEntry(stratum.rep, pattern, verdict))
    return entries


def diff_table(
    extdiag: ExtendedDiagram,
    K: IsogenyAction,
    prop: TableProperty = "normal",
    kb: FiniteNormalityKB | None = None,
) -> TableDiff:
    """Compare the regenerated table with the expected list.

    Raises:
        UnsupportedCaseError: If no expected list exists for (type, K, prop).
    """
    expected = expected_strata(extdiag, K, prop)
    entries = regenerate_table(extdiag, K, prop, kb)
    regenerated = tuple(e.rep for e in entries if e.verdict is Verdict.YES)
    undecided = tuple(e.rep for e in entries if e.verdict is Verdict.UNKNOWN)
    missing = tuple(r for r in expected if r not in regenerated and r not in undecided)
    unexpected = tuple(r for r in regenerated if r not in expected)
    diff = TableDiff(
        cartan_type=str(extdiag.base_type),
        selector=K.selector,
        prop=prop,
        source=_source(extdiag, K, prop),
        expected=expected,
        regenerated=regenerated,
        missing=missing,
        unexpected=unexpected,
        undecided=undecided,
    )
    if not diff.matches:
        logger.warning(
            "%s table of %s (K=%s): %d missing, %d unexpected",
            prop,
            extdiag.base_type,
            K.selector,
            len(missing),
            len(unexpected),
        )
    return diff
