"""Extended Dynkin diagrams and isogeny groups.

This module provides:
- ExtendedDiagram: the affine diagram with its marks (node N_i <-> vertex x_i)
- extended_diagram: build it from the highest root of the finite type
- fundamental_group: cyclic decomposition of P/Q (coweight mod coroot lattice)
- isogeny_actions: subgroups of P/Q realized as node permutations
- node_stabilizer / face_stabilizer: K^{x_j} and pointwise face stabilizers
- parabolic_is_finite: finiteness of the parabolic generated by a node subset
"""

import logging
from collections.abc import Iterable
from dataclasses import dataclass
from functools import lru_cache

from jordanstrata.errors import InvalidSubgroupError, MalformedSubsetError
from jordanstrata.models import (
    CartanType,
    NodePermutation,
    NodeSet,
    PermutationGroup,
    node_set,
)
from jordanstrata.rootsys import DynkinDiagram, finite_diagram, marks

logger = logging.getLogger(__name__)

# Selector aliases accepted by every type
TRIVIAL_SELECTORS: frozenset[str] = frozenset({"sc", "trivial", "simply-connected"})
FULL_SELECTORS: frozenset[str] = frozenset({"adjoint", "full", "ad"})


@dataclass(frozen=True)
class ExtendedDiagram:
    """The extended Dynkin diagram of a finite type.

    Attributes:
        base_type: The finite type.
        diagram: Nodes 0..n, node 0 being the affine node alpha_0 = -theta.
        marks: d_0..d_n with d_0 = 1; vertex x_i of the alcove is w_i/d_i.
    """

    base_type: CartanType
    diagram: DynkinDiagram
    marks: tuple[int, ...]

    @property
    def nodes(self) -> NodeSet:
        """All node indices 0..n."""
        return self.diagram.nodes

    @property
    def rank(self) -> int:
        """Rank of the finite type (number of nodes minus one)."""
        return self.base_type.rank

    def mark(self, node: int) -> int:
        """Return d_i of a node."""
        return self.marks[node]

    def check_nodes(self, nodes: Iterable[int]) -> NodeSet:
        """Validate a node subset and return it canonically.

        Raises:
            MalformedSubsetError: If a node is outside 0..n.
        """
        subset = node_set(nodes)
        bad = [i for i in subset if i not in self.nodes]
        if bad:
            raise MalformedSubsetError(f"Nodes {bad} outside 0..{self.rank} for {self.base_type}")
        return subset

    def edges(self) -> tuple[tuple[int, int, int], ...]:
        """Return (i, j, m_ij) for every joined pair i < j."""
        return tuple(
            (i, j, self.diagram.bond(i, j))
            for i in self.nodes
            for j in self.nodes
            if i < j and self.diagram.bond(i, j) != 2
        )

    def __str__(self) -> str:
        return f"~{self.base_type}"


@lru_cache(maxsize=64)
def extended_diagram(cartan_type: CartanType) -> ExtendedDiagram:
    """Attach the affine node -theta to the Bourbaki diagram of a finite type.

    Args:
        cartan_type: The finite type.

    Returns:
        The extended diagram, nodes 0..n, with marks (1, d_1, ..., d_n).
    """
    finite = finite_diagram(cartan_type)
    highest = marks(cartan_type)
    n = cartan_type.rank
    # (alpha_0, alpha_j) = -(theta, alpha_j); (alpha_0, alpha_0) = (theta, theta)
    pairing = [sum(highest[i] * finite.gram[i][j] for i in range(n)) for j in range(n)]
    theta_norm = sum(highest[j] * pairing[j] for j in range(n))
    rows = [(theta_norm, *(-p for p in pairing))]
    for j in range(n):
        rows.append((-pairing[j], *finite.gram[j]))
    diagram = DynkinDiagram(tuple(range(n + 1)), tuple(rows))
    logger.debug("Extended diagram of %s: edges %s", cartan_type, diagram.neighbours(0))
    return ExtendedDiagram(cartan_type, diagram, (1, *highest))


def parabolic_is_finite(extdiag: ExtendedDiagram, nodes: Iterable[int]) -> bool:
    """True iff the subset omits at least one node of every affine component.

    Args:
        extdiag: The extended diagram.
        nodes: Node subset J.

    Returns:
        Whether W_J is finite.
    """
    subset = set(extdiag.check_nodes(nodes))
    for component in extdiag.diagram.components():
        if not extdiag.diagram.is_finite(component) and set(component) <= subset:
            return False
    return True


def fundamental_group(cartan_type: CartanType) -> tuple[int, ...]:
    """Return the orders of the cyclic factors of P/Q for a finite type.

    Returns:
        (n+1,) for A_n; (2,) for B_n, C_n, E7; (4,) for D_n with n odd;
        (2, 2) for D_n with n even; (3,) for E6; () for E8, F4, G2.
    """
    family, n = cartan_type.family, cartan_type.rank
    if family == "A":
        return (n + 1,)
    if family in ("B", "C") or (family == "E" and n == 7):
        return (2,)
    if family == "D":
        return (2, 2) if n % 2 == 0 else (4,)
    if family == "E" and n == 6:
        return (3,)
    return ()


def fundamental_group_order(cartan_type: CartanType) -> int:
    """Return |P/Q|."""
    order = 1
    for factor in fundamental_group(cartan_type):
        order *= factor
    return order


@dataclass(frozen=True)
class IsogenyAction:
    """A subgroup K of P/Q acting on the extended diagram by node permutations.

    Attributes:
        diagram: The extended diagram acted on.
        group: The permutations, identity first.
        selector: The selector this subgroup was built from.
    """

    diagram: ExtendedDiagram
    group: PermutationGroup
    selector: str = "sc"

    @property
    def elements(self) -> tuple[NodePermutation, ...]:
        """All elements of K."""
        return self.group.elements

    @property
    def order(self) -> int:
        """|K|."""
        return self.group.order

    @property
    def is_trivial(self) -> bool:
        """True if K acts as the identity."""
        return self.group.is_trivial

    def orbit(self, nodes: Iterable[int]) -> frozenset[NodeSet]:
        """Return the K-orbit of a node subset."""
        return self.group.orbit(nodes)

    def with_group(self, group: PermutationGroup, selector: str) -> "IsogenyAction":
        """Return a copy acting through a different (sub)group."""
        return IsogenyAction(self.diagram, group, selector)


def _rotation(n: int, step: int) -> NodePermutation:
    return NodePermutation.from_mapping({i: (i + step) % (n + 1) for i in range(n + 1)})


def _flip(n: int, start: int = 0) -> NodePermutation:
    mapping = {i: i for i in range(n + 1)}
    for j in range(start, n + 1 - start):
        mapping[j] = n - j
    return NodePermutation.from_mapping(mapping)


def d_type_generators(n: int) -> dict[str, NodePermutation]:
    """Return the named automorphisms of the extended D_n diagram.

    "tau1" swaps N0, N1 and N_{n-1}, N_n; "tau2" maps N_j to N_{n-j};
    "sigma" (n odd) is the order-4 generator 0 -> n -> 1 -> n-1 -> 0 with
    N_j <-> N_{n-j} for 2 <= j <= n-2; "epsilon" swaps N_{n-1} and N_n only.
    """
    nodes = range(n + 1)
    tau1 = NodePermutation.from_cycles(nodes, ((0, 1), (n - 1, n)))
    named = {
        "tau1": tau1,
        "tau2": _flip(n),
        "epsilon": NodePermutation.from_cycles(nodes, ((n - 1, n),)),
    }
    if n % 2 == 1:
        mapping = {0: n, n: 1, 1: n - 1, n - 1: 0}
        for j in range(2, n - 1):
            mapping[j] = n - j
        named["sigma"] = NodePermutation.from_mapping(mapping)
    named["tau1tau2"] = tau1.compose(named["tau2"])
    return named


def _generators(cartan_type: CartanType, selector: str) -> list[NodePermutation]:
    family, n = cartan_type.family, cartan_type.rank
    nodes = range(n + 1)
    full = selector in FULL_SELECTORS

    if family == "A":
        if full or selector in ("PGL", "PSL"):
            return [_rotation(n, 1)]
        if selector.startswith("Z") and selector[1:].isdigit():
            order = int(selector[1:])
            if order >= 1 and (n + 1) % order == 0:
                return [_rotation(n, (n + 1) // order)]
    elif family == "B" and (full or selector == "SO"):
        return [NodePermutation.from_cycles(nodes, ((0, 1),))]
    elif family == "C" and (full or selector == "PSp"):
        return [_flip(n)]
    elif family == "D":
        named = d_type_generators(n)
        if selector == "SO":
            return [named["tau1"]]
        if full or selector == "PSO":
            return [named["sigma"]] if n % 2 == 1 else [named["tau1"], named["tau2"]]
        if n % 2 == 0 and selector == "HSpin":
            return [named["tau2"]]
        if n % 2 == 0 and selector == "HSpin'":
            return [named["tau1tau2"]]
    elif family == "E" and n == 6 and full:
        return [NodePermutation.from_cycles(nodes, ((1, 6, 0), (3, 5, 2)))]
    elif family == "E" and n == 7 and full:
        return [NodePermutation.from_cycles(nodes, ((0, 7), (1, 6), (3, 5)))]
    elif full:
        return []
    choices = ", ".join(selectors_for(cartan_type))
    raise InvalidSubgroupError(
        f"Isogeny selector {selector!r} is not valid for {cartan_type} (choose from {choices})"
    )


def isogeny_actions(cartan_type: CartanType, selector: str = "sc") -> IsogenyAction:
    """Build the subgroup K of P/Q named by a selector.

    Selectors: "sc"/"trivial" and "adjoint"/"full" for every type; "Z<d>"
    for A_n with d dividing n+1; "SO" for B_n and D_n; "PSp" for C_n;
    "PSO" for D_n; "HSpin" and "HSpin'" for D_n with n even.

    Args:
        cartan_type: The finite type.
        selector: Subgroup selector.

    Returns:
        The isogeny action; every element is validated as a mark-preserving
        automorphism of the extended diagram.

    Raises:
        InvalidSubgroupError: If the selector names no subgroup for the type.
    """
    extdiag = extended_diagram(cartan_type)
    generators = [] if selector in TRIVIAL_SELECTORS else _generators(cartan_type, selector)
    group = PermutationGroup.generated(extdiag.nodes, generators)
    for element in group.elements:
        if not extdiag.diagram.is_automorphism(element):
            raise InvalidSubgroupError(f"{element.images} is not an automorphism of {extdiag}")
        if any(extdiag.mark(element(i)) != extdiag.mark(i) for i in extdiag.nodes):
            raise InvalidSubgroupError(f"{element.images} does not preserve the marks")
    if fundamental_group_order(cartan_type) % group.order != 0:
        raise InvalidSubgroupError(f"Order {group.order} does not divide |P/Q| of {cartan_type}")
    return IsogenyAction(extdiag, group, selector)


def selectors_for(cartan_type: CartanType) -> tuple[str, ...]:
    """List the selectors naming distinct subgroups for a type."""
    family, n = cartan_type.family, cartan_type.rank
    if family == "A":
        return tuple(["sc"] + [f"Z{d}" for d in range(2, n + 1) if (n + 1) % d == 0] + ["adjoint"])
    if family == "B":
        return ("sc", "SO")
    if family == "C":
        return ("sc", "PSp")
    if family == "D":
        extra = ("HSpin", "HSpin'") if n % 2 == 0 else ()
        return ("sc", "SO", *extra, "PSO")
    if family == "E" and n in (6, 7):
        return ("sc", "adjoint")
    return ("sc",)


def node_stabilizer(K: IsogenyAction, j: int) -> IsogenyAction:
    """Return K^{x_j}, the elements fixing node j."""
    K.diagram.check_nodes((j,))
    return K.with_group(K.group.pointwise_stabilizer((j,)), f"{K.selector}@x{j}")


def face_stabilizer(K: IsogenyAction, vertices: Iterable[int]) -> IsogenyAction:
    """Return the elements fixing every listed vertex (hence the face pointwise).

    Raises:
        ValueError: If no vertex is given.
    """
    fixed = K.diagram.check_nodes(vertices)
    if not fixed:
        raise ValueError("A face needs at least one vertex")
    return K.with_group(K.group.pointwise_stabilizer(fixed), f"{K.selector}@{fixed}")
