"""Closed-form classification per type and isogeny.

This module provides:
- k1_normal / k1_codim1: the K = 1 lists (classical closed forms, exceptional
  lists from the bundled table data)
- row_matches: whether a subset is covered by a transcribed table row
- so_wall_condition: the D_{m0} + dA_h (h even) condition of SO_{2n}
- ByTypeResult / classify_bytype: the verdict for a stratum
- supports: which (type, selector) pairs have a closed form
"""

import logging
from dataclasses import dataclass

from jordanstrata.affine_diagram import ExtendedDiagram, isogeny_actions
from jordanstrata.conditions import node_condition, vertex_condition
from jordanstrata.coxclass import Stratum
from jordanstrata.datafile import TableRow, load_table_data
from jordanstrata.errors import UnsupportedCaseError
from jordanstrata.models import NodePermutation, NodeSet, Smoothness, complement, node_set
from jordanstrata.subdiagram import classical_profile, marks_short_roots, parse_pattern, pattern_counter

logger = logging.getLogger(__name__)

# Types excluded from positive-dimensional E7-adjoint normality despite K = 1 normality
_E7_EXCLUDED_PATTERNS: frozenset[str] = frozenset({"D4+A1", "3A1"})
# Types whose unstable strata are normal for E7-adjoint when avoiding N2
_E7_EXTRA_PATTERNS: frozenset[str] = frozenset({"A6", "A5+A1"})


@dataclass(frozen=True)
class ByTypeResult:
    """Verdict of the closed-form classifier.

    Attributes:
        normal: Whether the stratum is normal.
        smooth: Smoothness, where a statement is available.
        rule: Descriptive id of the closed form applied.
    """

    normal: bool
    smooth: Smoothness
    rule: str


def _classical_k1(family: str, n: int, subset: NodeSet) -> bool:
    profile = classical_profile(family, n, subset, extended=True)
    if not profile.equal_blocks:
        return False
    size = profile.block_size
    flexible = size is None or size == 1 or size % 2 == 0
    if family == "B":
        return profile.head >= 2 or flexible
    if family == "D":
        return (profile.head >= 2 and profile.tail >= 2) or flexible
    return True


def row_matches(extdiag: ExtendedDiagram, row: TableRow, subset: NodeSet) -> bool:
    """True if a transcribed table row covers the subset."""
    if row.kind == "empty":
        return not subset
    if row.kind == "point":
        return len(subset) == extdiag.rank
    if row.kind == "nodes":
        return subset == row.nodes
    mark_short = marks_short_roots(extdiag.base_type)
    return pattern_counter(extdiag.diagram, subset, mark_short) == parse_pattern(row.pattern)


def _listed(extdiag: ExtendedDiagram, subset: NodeSet, prop: str) -> bool:
    table = load_table_data().affine_table(extdiag.base_type, prop)
    if table is None:
        raise UnsupportedCaseError(f"No {prop} table for {extdiag.base_type}")
    return any(row_matches(extdiag, row, subset) for row in table.rows)


def k1_normal(extdiag: ExtendedDiagram, subset: NodeSet) -> bool:
    """Normality of X(H,L) (K = 1) for the face with wall set subset."""
    if not subset or len(subset) == extdiag.rank:
        return True
    base = extdiag.base_type
    if base.is_classical:
        return _classical_k1(base.family, base.rank, subset)
    return _listed(extdiag, subset, "normal")


def k1_codim1(extdiag: ExtendedDiagram, subset: NodeSet) -> bool:
    """Normality in codimension 1 of X(H,L) (K = 1); equal to normality for classical types."""
    if not subset or len(subset) == extdiag.rank:
        return True
    base = extdiag.base_type
    if base.is_classical:
        return _classical_k1(base.family, base.rank, subset)
    return _listed(extdiag, subset, "codim1")


def so_wall_condition(n: int, subset: NodeSet) -> bool:
    """D_{m0} + dA_h with m0 >= 2 at one end of the extended D_n diagram and h even."""
    profile = classical_profile("D", n, subset, extended=True)
    ends = sorted((profile.head, profile.tail))
    if ends[0] != 0 or ends[1] < 2 or not profile.equal_blocks:
        return False
    size = profile.block_size
    return size is None or size % 2 == 1


def _bool_smooth(value: bool) -> Smoothness:
    return Smoothness.YES if value else Smoothness.NO


def _odd_orthogonal(stratum: Stratum, sigma: tuple[NodeSet, ...]) -> ByTypeResult:
    """SO_{2n+1}: translate to the extended C_n alcove and use the C_n list."""
    n = stratum.diagram.rank
    if not stratum.rep or len(stratum.rep) == n:
        return ByTypeResult(True, Smoothness.YES, "odd-orthogonal.trivial")
    for member in sigma:
        over_both = not (0 in member and 1 not in member)
        if over_both and classical_profile("C", n, member, extended=True).equal_blocks:
            return ByTypeResult(True, Smoothness.YES, "odd-orthogonal.translation")
    return ByTypeResult(False, Smoothness.NO, "odd-orthogonal.translation")


def _d_epsilon(n: int) -> NodePermutation:
    return NodePermutation.from_cycles(range(n + 1), ((n - 1, n),))


def supports(stratum: Stratum) -> bool:
    """True if classify_bytype has a closed form for the stratum's type and isogeny."""
    base = stratum.diagram.base_type
    K = stratum.K
    if K.is_trivial:
        return True
    family = base.family
    if family in ("A", "B", "C"):
        return True
    if family == "D":
        return K.selector in ("SO", "PSO", "HSpin", "HSpin'", "adjoint", "full", "ad")
    return family == "E" and base.rank in (6, 7)


def classify_bytype(stratum: Stratum) -> ByTypeResult:
    """Decide normality from the closed form of the stratum's type and isogeny.

    Args:
        stratum: The stratum.

    Returns:
        The verdict with smoothness where it is known.

    Raises:
        UnsupportedCaseError: If no closed form covers the (type, K) pair.
    """
    if not supports(stratum):
        raise UnsupportedCaseError(
            f"No closed form for {stratum.diagram.base_type} with K={stratum.K.selector}"
        )
    extdiag = stratum.diagram
    base = extdiag.base_type
    K = stratum.K
    sigma = stratum.sigma()
    rep = sigma[0]
    listing = "classical-list" if base.is_classical else "normal-list"
    plain = k1_normal(extdiag, rep)

    if K.is_trivial:
        return ByTypeResult(plain, _bool_smooth(plain), f"{listing}.{base}")
    family, n = base.family, base.rank
    if family == "A":
        return ByTypeResult(plain, Smoothness.UNDEFINED, "special-linear.quotient")
    if family == "B":
        return _odd_orthogonal(stratum, sigma)
    if family == "C":
        normal = plain and node_condition(K, rep)
        return ByTypeResult(normal, Smoothness.UNDEFINED, "symplectic.nodes")
    if family == "E" and n == 6:
        return ByTypeResult(plain, Smoothness.UNDEFINED, "e6-adjoint.list")
    if family == "E":
        mark_short = marks_short_roots(base)
        pattern = pattern_counter(extdiag.diagram, rep, mark_short)
        excluded = any(pattern == parse_pattern(p) for p in _E7_EXCLUDED_PATTERNS)
        extra = any(pattern == parse_pattern(p) for p in _E7_EXTRA_PATTERNS) and any(
            2 not in member for member in sigma
        )
        normal = (plain and not excluded) or extra
        return ByTypeResult(normal, Smoothness.UNDEFINED, "e7-adjoint.list")

    wall = any(so_wall_condition(n, member) for member in sigma)
    if K.selector == "SO":
        return ByTypeResult(plain or wall, Smoothness.UNDEFINED, "even-orthogonal.wall")
    if K.selector == "HSpin":
        normal = plain and node_condition(K, rep)
        return ByTypeResult(normal, Smoothness.UNDEFINED, "half-spin.nodes")
    if K.selector == "HSpin'":
        epsilon = _d_epsilon(n)
        mirrored = Stratum(extdiag, isogeny_actions(base, "HSpin"), epsilon.apply(rep))
        inner = classify_bytype(mirrored)
        return ByTypeResult(inner.normal, Smoothness.UNDEFINED, f"half-spin-mirror>{inner.rule}")

    vertices = complement(rep, extdiag.nodes)
    orbit_ok = all(vertex_condition(sigma, K, j) for j in vertices)
    normal = orbit_ok and (plain or wall)
    logger.debug("PSO %s: orbit condition %s, wall %s", rep, orbit_ok, wall)
    return ByTypeResult(normal, Smoothness.UNDEFINED, "projective-orthogonal.orbits")


def listed_subsets(extdiag: ExtendedDiagram, prop: str, subsets: list[NodeSet]) -> list[NodeSet]:
    """Return the subsets covered by the K = 1 list for a property."""
    check = k1_normal if prop == "normal" else k1_codim1
    return [node_set(s) for s in subsets if check(extdiag, node_set(s))]
