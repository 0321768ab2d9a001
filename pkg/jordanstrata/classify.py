"""Classification of strata: unibranch, normal in codimension 1, normal, smooth.

This module provides:
- FiniteCounterpart / finite_counterpart: the finite stratum at a vertex
- CounterpartReport: the verdict of one finite counterpart
- StratumReport: flags plus the evidence trail
- classify_generic: the vertex-by-vertex pipeline with the finite knowledge base
- classify_bytype: the closed forms wrapped into a report
- classify: both classifiers in one report

The combinatorial conditions (vertex_condition, codim1_condition,
node_condition) and the finite rules (finite_normality, dim1_shortcut) are
re-exported here.
"""

import logging
from dataclasses import dataclass, replace

from jordanstrata.affine_diagram import node_stabilizer
from jordanstrata.bytype import classify_bytype as bytype_verdict
from jordanstrata.bytype import supports
from jordanstrata.conditions import (
    codim1_condition,
    containment_holds,
    minimal_vertices,
    node_condition,
    vertex_condition,
)
from jordanstrata.coxclass import Stratum
from jordanstrata.errors import NotAVertexError
from jordanstrata.finite_kb import FiniteNormalityKB, FiniteResult, dim1_shortcut, finite_normality
from jordanstrata.models import (
    FiniteVerdict,
    NodeSet,
    PermutationGroup,
    Smoothness,
    UnibranchVerdict,
    Verdict,
    node_set,
)
from jordanstrata.rootsys import DynkinDiagram
from jordanstrata.subdiagram import marks_short_roots, pattern_of

__all__ = [
    "CounterpartReport",
    "FiniteCounterpart",
    "StratumReport",
    "classify",
    "classify_bytype",
    "classify_generic",
    "codim1_condition",
    "dim1_shortcut",
    "finite_counterpart",
    "finite_normality",
    "node_condition",
    "vertex_condition",
]

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FiniteCounterpart:
    """The finite stratum X(H_{x_j}, K^{x_j}, L) at a vertex.

    Attributes:
        vertex: The node j (vertex x_j).
        diagram: The extended diagram with node j deleted.
        subset: A member of sigma avoiding j (lexicographically least).
        group: node_stabilizer(K, j) restricted to the remaining nodes.
    """

    vertex: int
    diagram: DynkinDiagram
    subset: NodeSet
    group: PermutationGroup


@dataclass(frozen=True)
class CounterpartReport:
    """A finite counterpart together with its verdict."""

    counterpart: FiniteCounterpart
    result: FiniteResult


@dataclass(frozen=True)
class StratumReport:
    """Classification of a stratum with its evidence.

    Attributes:
        stratum: The stratum, with its canonical representative.
        sigma: Sigma(H,K,L), sorted.
        class_size: Size of the K = 1 Coxeter class of the representative.
        pattern: Component pattern of the representative, e.g. "D4+A1".
        normal_codim1: Whether the codimension-1 condition holds.
        unibranch_minimal: Unibranch answer at the minimal strata.
        normal_generic: Verdict of the generic pipeline (None if not run).
        normal_bytype: Verdict of the closed forms (None if not run or unsupported).
        smooth: Smoothness where a statement is available.
        minimal_vertices: Nodes j with x_j a vertex of some face in sigma.
        vertex_conditions: (j, holds) for every minimal vertex.
        counterparts: Finite counterparts examined.
        rules: Rule ids fired, in order.
    """

    stratum: Stratum
    sigma: tuple[NodeSet, ...]
    class_size: int
    pattern: str
    normal_codim1: bool
    unibranch_minimal: UnibranchVerdict
    normal_generic: Verdict | None
    normal_bytype: bool | None
    smooth: Smoothness
    minimal_vertices: NodeSet
    vertex_conditions: tuple[tuple[int, bool], ...]
    counterparts: tuple[CounterpartReport, ...] = ()
    rules: tuple[str, ...] = ()

    @property
    def sigma_size(self) -> int:
        """Number of faces in sigma."""
        return len(self.sigma)

    @property
    def rep(self) -> NodeSet:
        """Canonical representative."""
        return self.stratum.rep


def finite_counterpart(stratum: Stratum, j: int) -> FiniteCounterpart:
    """Build the finite counterpart of a stratum at the vertex x_j.

    Args:
        stratum: The stratum.
        j: The vertex node.

    Returns:
        The finite diagram, subset and stabilizer group.

    Raises:
        NotAVertexError: If x_j is not a vertex of any face in sigma.
    """
    extdiag = stratum.diagram
    extdiag.check_nodes((j,))
    avoiding = [s for s in stratum.sigma() if j not in s]
    if not avoiding:
        raise NotAVertexError(f"x_{j} is not a vertex of any face of {stratum.rep}")
    remaining = node_set(i for i in extdiag.nodes if i != j)
    group = node_stabilizer(stratum.K, j).group.restrict(remaining)
    return FiniteCounterpart(j, extdiag.diagram.induced(remaining), min(avoiding), group)


def _unibranch(containment: bool, conditions: list[bool]) -> UnibranchVerdict:
    passed = all(conditions)
    if containment:
        return UnibranchVerdict.YES if passed else UnibranchVerdict.NO
    return UnibranchVerdict.SUFFICIENT_ONLY_YES if passed else UnibranchVerdict.UNDETERMINED


def _smoothness(stratum: Stratum, normal: bool | None) -> Smoothness:
    K = stratum.K
    odd_orthogonal = stratum.diagram.base_type.family == "B" and not K.is_trivial
    if normal is None or not (K.is_trivial or odd_orthogonal):
        return Smoothness.UNDEFINED
    return Smoothness.YES if normal else Smoothness.NO


def _evaluate(
    counterpart: FiniteCounterpart, kb: FiniteNormalityKB, stratum: Stratum, verify_choices: bool
) -> FiniteResult:
    result = finite_normality(counterpart.diagram, counterpart.subset, counterpart.group, kb)
    if not verify_choices:
        return result
    for member in stratum.sigma():
        if counterpart.vertex in member or member == counterpart.subset:
            continue
        other = finite_normality(counterpart.diagram, member, counterpart.group, kb)
        decisive = {result.verdict, other.verdict} - {FiniteVerdict.UNKNOWN}
        if len(decisive) > 1:
            logger.warning(
                "Counterpart choices disagree at x_%d: %s vs %s",
                counterpart.vertex,
                counterpart.subset,
                member,
            )
            return FiniteResult(FiniteVerdict.UNKNOWN, "choice-mismatch")
    return result


def _skeleton(stratum: Stratum) -> StratumReport:
    """Combinatorial part of a report, shared by both classifiers."""
    canonical = stratum.canonical()
    sigma = canonical.sigma()
    extdiag = canonical.diagram
    K = canonical.K
    vertices = minimal_vertices(sigma, K)
    conditions = tuple((j, vertex_condition(sigma, K, j)) for j in vertices)
    unibranch = _unibranch(containment_holds(K, canonical.rep), [ok for _, ok in conditions])
    return StratumReport(
        stratum=canonical,
        sigma=sigma,
        class_size=canonical.coxeter_class().size,
        pattern=pattern_of(extdiag.diagram, canonical.rep, marks_short_roots(extdiag.base_type)),
        normal_codim1=codim1_condition(sigma, K),
        unibranch_minimal=unibranch,
        normal_generic=None,
        normal_bytype=None,
        smooth=Smoothness.UNDEFINED,
        minimal_vertices=vertices,
        vertex_conditions=conditions,
    )


def classify_generic(
    stratum: Stratum, kb: FiniteNormalityKB | None = None, verify_choices: bool = False
) -> StratumReport:
    """Classify a stratum vertex by vertex.

    Normal iff the codimension-1 condition holds, the vertex condition holds
    at every minimal vertex, and every finite counterpart is normal.

    Args:
        stratum: The stratum.
        kb: Finite normality knowledge base; the bundled one when omitted.
        verify_choices: Evaluate every member avoiding each vertex and treat
            disagreeing choices as unknown.

    Returns:
        The report with normal_generic set.
    """
    kb = kb or FiniteNormalityKB.default()
    report = _skeleton(stratum)
    canonical = report.stratum
    rep = canonical.rep

    if not rep or len(rep) == canonical.diagram.rank:
        rule = "whole-torus" if not rep else "point"
        return replace(
            report,
            normal_generic=Verdict.YES,
            smooth=_smoothness(canonical, True),
            rules=(rule,),
        )

    if not report.normal_codim1:
        return replace(
            report,
            normal_generic=Verdict.NO,
            smooth=_smoothness(canonical, False),
            rules=("codim1-condition",),
        )
    failing = [j for j, ok in report.vertex_conditions if not ok]
    if failing:
        return replace(
            report,
            normal_generic=Verdict.NO,
            smooth=_smoothness(canonical, False),
            rules=(f"vertex-condition@x{failing[0]}",),
        )

    counterparts = []
    for j in report.minimal_vertices:
        counterpart = finite_counterpart(canonical, j)
        result = _evaluate(counterpart, kb, canonical, verify_choices)
        counterparts.append(CounterpartReport(counterpart, result))

    verdicts = {c.result.verdict for c in counterparts}
    if FiniteVerdict.NOT_NORMAL in verdicts:
        verdict = Verdict.NO
    elif FiniteVerdict.UNKNOWN in verdicts:
        verdict = Verdict.UNKNOWN
        logger.debug("Generic verdict unknown for %s", rep)
    else:
        verdict = Verdict.YES
    normal = None if verdict is Verdict.UNKNOWN else verdict is Verdict.YES
    return replace(
        report,
        normal_generic=verdict,
        smooth=_smoothness(canonical, normal),
        counterparts=tuple(counterparts),
        rules=tuple(f"x{c.counterpart.vertex}:{c.result.rule}" for c in counterparts),
    )


def classify_bytype(stratum: Stratum) -> StratumReport:
    """Classify a stratum with the closed form of its type and isogeny.

    Raises:
        UnsupportedCaseError: If no closed form covers the (type, K) pair.
    """
    report = _skeleton(stratum)
    result = bytype_verdict(report.stratum)
    return replace(report, normal_bytype=result.normal, smooth=result.smooth, rules=(result.rule,))


def classify(stratum: Stratum, kb: FiniteNormalityKB | None = None) -> StratumReport:
    """Run both classifiers and merge their verdicts into one report.

    The closed forms are skipped for unsupported (type, K) pairs. Where both
    decide, a disagreement is logged as a warning.
    """
    report = classify_generic(stratum, kb)
    if not supports(report.stratum):
        return report
    result = bytype_verdict(report.stratum)
    generic = report.normal_generic
    if generic is not None and generic is not Verdict.UNKNOWN and (generic is Verdict.YES) != result.normal:
        logger.warning(
            "Classifiers disagree on %s: generic %s, closed form %s",
            report.rep,
            generic.value,
            result.normal,
        )
    smooth = result.smooth if result.smooth is not Smoothness.UNDEFINED else report.smooth
    return replace(
        report,
        normal_bytype=result.normal,
        smooth=smooth,
        rules=(*report.rules, result.rule),
    )
