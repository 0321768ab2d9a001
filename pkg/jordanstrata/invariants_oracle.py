"""Invariant-theoretic check of finite counterparts.

A finite stratum X(H,K,L) is normal iff restricting invariants of
W_{H,K} to L is onto the invariants of the setwise stabilizer acting on L.
This module compares both sides degree by degree; a shortfall refutes
normality, agreement up to a bound is only evidence.

This module provides:
- MatrixGroup / generate_group / finite_group: finite groups in coweight coordinates
- stabilizer_group: the setwise stabilizer of the flat of a subset
- GradedDimProfile / molien: dimensions of invariants per degree
- averaged_dimensions: the same dimensions by brute-force averaging
- RestrictionReport / restriction_surjective_up_to: the per-degree comparison
"""

import logging
from collections import Counter
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from itertools import combinations_with_replacement

import numpy as np
import sympy as sp
from sympy.polys.matrices import DomainMatrix

from jordanstrata.config import (
    GROUP_ORDER_LIMIT,
    INVARIANTS_DEFAULT_DEGREE,
    INVARIANTS_MAX_DEGREE,
    INVARIANTS_MAX_RANK,
    MOLIEN_MAX_DEGREE,
)
from jordanstrata.errors import BudgetExceededError, MalformedSubsetError, NotFiniteTypeError
from jordanstrata.models import NodeSet, PermutationGroup, node_set
from jordanstrata.rootsys import DynkinDiagram

logger = logging.getLogger(__name__)


class DegreeVerdict(Enum):
    """Outcome of the comparison in one degree."""

    SURJECTIVE = "surjective"
    DEFICIENT = "deficient"


@dataclass(frozen=True, eq=False)
class MatrixGroup:
    """A finite group of integer matrices.

    Attributes:
        matrices: All elements, identity first.
    """

    matrices: tuple[np.ndarray, ...]

    @property
    def order(self) -> int:
        """Number of elements."""
        return len(self.matrices)

    @property
    def dimension(self) -> int:
        """Size of the matrices."""
        return self.matrices[0].shape[0]

    def restrict(self, coordinates: Sequence[int]) -> "MatrixGroup":
        """Return the distinct blocks on a subset of coordinates, assumed invariant."""
        index = np.array(coordinates, dtype=np.intp)
        seen: dict[bytes, np.ndarray] = {}
        for matrix in self.matrices:
            block = matrix[np.ix_(index, index)]
            seen.setdefault(block.tobytes(), block)
        return MatrixGroup(tuple(seen.values()))


def generate_group(
    generators: Sequence[np.ndarray], limit: int = GROUP_ORDER_LIMIT
) -> MatrixGroup:
    """Close a set of integer matrices under multiplication.

    Raises:
        ValueError: If no generator is given.
        BudgetExceededError: If the group has more than limit elements.
    """
    if not generators:
        raise ValueError("At least one generator is required")
    identity = np.eye(generators[0].shape[0], dtype=np.int64)
    elements = {identity.tobytes(): identity}
    frontier = [identity]
    while frontier:
        layer = []
        for element in frontier:
            for generator in generators:
                product = element @ generator
                key = product.tobytes()
                if key not in elements:
                    elements[key] = product
                    layer.append(product)
        if len(elements) > limit:
            raise BudgetExceededError(f"Group order exceeds {limit}")
        frontier = layer
    return MatrixGroup(tuple(elements.values()))


def _reflection(diagram: DynkinDiagram, node: int) -> np.ndarray:
    size = len(diagram.nodes)
    matrix = np.eye(size, dtype=np.int64)
    i = diagram.index(node)
    for j, other in enumerate(diagram.nodes):
        matrix[j, i] -= diagram.cartan_entry(node, other)
    return matrix


def _automorphism(diagram: DynkinDiagram, images: dict[int, int]) -> np.ndarray:
    size = len(diagram.nodes)
    matrix = np.zeros((size, size), dtype=np.int64)
    for node, image in images.items():
        matrix[diagram.index(image), diagram.index(node)] = 1
    return matrix


def finite_group(
    diagram: DynkinDiagram, group: PermutationGroup | None = None
) -> MatrixGroup:
    """Return W semidirect K' acting on fundamental coweight coordinates.

    Args:
        diagram: A finite diagram of rank at most INVARIANTS_MAX_RANK.
        group: Diagram automorphisms K' (trivial when omitted).

    Raises:
        NotFiniteTypeError: If the diagram is not of finite type.
        BudgetExceededError: If the rank or the group order is too large.
    """
    if not diagram.is_finite():
        raise NotFiniteTypeError("Invariant checks need a finite diagram")
    if len(diagram.nodes) > INVARIANTS_MAX_RANK:
        raise BudgetExceededError(f"Rank {len(diagram.nodes)} exceeds {INVARIANTS_MAX_RANK}")
    generators = [_reflection(diagram, node) for node in diagram.nodes]
    if group is not None:
        for element in group.elements:
            if not element.is_identity:
                generators.append(_automorphism(diagram, element.as_dict()))
    return generate_group(generators)


def _flat_coordinates(diagram: DynkinDiagram, subset: NodeSet) -> list[int]:
    return [diagram.index(node) for node in diagram.nodes if node not in subset]


def _checked_subset(diagram: DynkinDiagram, subset: Iterable[int]) -> NodeSet:
    chosen = node_set(subset)
    bad = [node for node in chosen if node not in diagram.nodes]
    if bad:
        raise MalformedSubsetError(f"Nodes {bad} are not in {diagram.nodes}")
    return chosen


def stabilizer_group(
    diagram: DynkinDiagram, subset: Iterable[int], group: PermutationGroup | None = None
) -> MatrixGroup:
    """Return the elements of W semidirect K' mapping the flat of subset to itself.

    The flat is {c_i = 0 for i in subset}, spanned by the fundamental
    coweights of the other nodes.

    Raises:
        MalformedSubsetError: If a node is outside the diagram.
        BudgetExceededError: If the rank or the group order is too large.
    """
    chosen = _checked_subset(diagram, subset)
    full = finite_group(diagram, group)
    inside = _flat_coordinates(diagram, chosen)
    outside = [diagram.index(node) for node in chosen]
    if not inside or not outside:
        return full
    keeps = [g for g in full.matrices if not np.any(g[np.ix_(outside, inside)])]
    return MatrixGroup(tuple(keeps))


@dataclass(frozen=True)
class GradedDimProfile:
    """Dimensions of a graded vector space in degrees 0..N."""

    dims: tuple[int, ...]

    def __getitem__(self, degree: int) -> int:
        return self.dims[degree]

    @property
    def max_degree(self) -> int:
        """The bound N."""
        return len(self.dims) - 1


def _series_inverse(coefficients: Sequence[int], degree: int) -> list[int]:
    inverse = [1]
    for d in range(1, degree + 1):
        top = min(d, len(coefficients) - 1)
        total = sum(coefficients[k] * inverse[d - k] for k in range(1, top + 1))
        inverse.append(-total)
    return inverse


def molien(group: MatrixGroup, degree: int) -> GradedDimProfile:
    """Expand (1/|G|) sum 1/det(1 - tg) up to t^degree.

    Raises:
        ValueError: If degree exceeds MOLIEN_MAX_DEGREE or the series is not integral.
    """
    if degree > MOLIEN_MAX_DEGREE:
        raise ValueError(f"Molien degree {degree} exceeds {MOLIEN_MAX_DEGREE}")
    if group.dimension == 0:
        return GradedDimProfile((1,) + (0,) * degree)
    # charpoly coefficients of g are those of det(1 - tg) read upwards
    polynomials = Counter(
        tuple(int(c) for c in sp.Matrix(g.tolist()).charpoly().all_coeffs()) for g in group.matrices
    )
    totals = [Fraction(0)] * (degree + 1)
    for coefficients, count in polynomials.items():
        for d, value in enumerate(_series_inverse(coefficients, degree)):
            totals[d] += count * value
    dims = [total / group.order for total in totals]
    if any(d.denominator != 1 for d in dims):
        raise ValueError("Molien series is not integral")
    return GradedDimProfile(tuple(int(d) for d in dims))


def _exponents(size: int, degree: int) -> list[tuple[int, ...]]:
    result = []
    for choice in combinations_with_replacement(range(size), degree):
        counts = Counter(choice)
        result.append(tuple(counts[i] for i in range(size)))
    return result


def _averaged_rank(
    matrices: Sequence[np.ndarray], columns: Sequence[int], degree: int
) -> int:
    """Rank of the Reynolds images of all monomials of a degree, restricted to columns."""
    if not columns:
        return int(degree == 0)
    if degree == 0:
        return 1
    variables = sp.symbols(f"y0:{len(columns)}")
    index = list(columns)
    forms = [
        [sp.Poly(sum(int(c) * v for c, v in zip(row[index], variables)), *variables) for row in g]
        for g in matrices
    ]
    basis = {e: k for k, e in enumerate(_exponents(len(columns), degree))}
    powers: dict[tuple[int, int, int], sp.Poly] = {}

    def power(g: int, i: int, e: int) -> sp.Poly:
        key = (g, i, e)
        if key not in powers:
            powers[key] = forms[g][i] ** e
        return powers[key]

    rows = set()
    for exponents in _exponents(matrices[0].shape[0], degree):
        total = sp.Poly(0, *variables)
        for g in range(len(forms)):
            term = sp.Poly(1, *variables)
            for i, e in enumerate(exponents):
                if e:
                    term *= power(g, i, e)
            total += term
        if total.is_zero:
            continue
        row = [0] * len(basis)
        for monomial, coefficient in total.as_dict().items():
            row[basis[monomial]] = int(coefficient)
        rows.add(tuple(row))
    if not rows:
        return 0
    matrix = DomainMatrix.from_list_sympy(len(rows), len(basis), [list(r) for r in rows])
    return int(matrix.to_field().rank())


def averaged_dimensions(group: MatrixGroup, degree: int) -> GradedDimProfile:
    """Dimensions of invariants per degree by averaging every monomial."""
    columns = list(range(group.dimension))
    return GradedDimProfile(
        tuple(_averaged_rank(group.matrices, columns, d) for d in range(degree + 1))
    )


@dataclass(frozen=True)
class RestrictionReport:
    """Degree-by-degree comparison of restricted invariants with invariants of the flat.

    Attributes:
        subset: The wall set of the flat.
        group_order: Order of W semidirect K'.
        stabilizer_order: Order of the setwise stabilizer acting on the flat.
        image: Dimension of the restriction image per degree.
        target: Molien dimensions of the flat's invariants per degree.
    """

    subset: NodeSet
    group_order: int
    stabilizer_order: int
    image: GradedDimProfile
    target: GradedDimProfile

    @property
    def verdicts(self) -> tuple[DegreeVerdict, ...]:
        """Per-degree verdicts."""
        return tuple(
            DegreeVerdict.SURJECTIVE if a == b else DegreeVerdict.DEFICIENT
            for a, b in zip(self.image.dims, self.target.dims)
        )

    @property
    def first_deficiency(self) -> int | None:
        """Least degree where the restriction misses invariants."""
        for degree, verdict in enumerate(self.verdicts):
            if verdict is DegreeVerdict.DEFICIENT:
                return degree
        return None

    @property
    def surjective_up_to(self) -> bool:
        """True if no degree up to the bound is deficient (evidence, not proof)."""
        return self.first_deficiency is None


def restriction_surjective_up_to(
    diagram: DynkinDiagram,
    subset: Iterable[int],
    group: PermutationGroup | None = None,
    degree: int = INVARIANTS_DEFAULT_DEGREE,
) -> RestrictionReport:
    """Compare the restriction image with the invariants of the flat in degrees 0..degree.

    Args:
        diagram: The finite diagram of a counterpart.
        subset: Wall set J of the flat.
        group: Diagram automorphisms K'.
        degree: Bound N, at most INVARIANTS_MAX_DEGREE.

    Returns:
        The report; any deficient degree refutes normality.

    Raises:
        ValueError: If the degree bound is too large.
        BudgetExceededError: If the rank or the group order is too large.
    """
    if degree > INVARIANTS_MAX_DEGREE:
        raise ValueError(f"Degree {degree} exceeds {INVARIANTS_MAX_DEGREE}")
    chosen = _checked_subset(diagram, subset)
    full = finite_group(diagram, group)
    columns = _flat_coordinates(diagram, chosen)
    stabilizer = stabilizer_group(diagram, chosen, group).restrict(columns)
    target = molien(stabilizer, degree)
    image = GradedDimProfile(
        tuple(_averaged_rank(full.matrices, columns, d) for d in range(degree + 1))
    )
    report = RestrictionReport(chosen, full.order, stabilizer.order, image, target)
    if report.first_deficiency is not None:
        logger.info("Restriction for %s deficient at degree %d", chosen, report.first_deficiency)
    return report
