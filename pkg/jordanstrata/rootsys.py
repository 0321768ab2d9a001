"""Exact root-system arithmetic for the finite types A-G.

This module provides:
- DynkinDiagram: nodes with an integer Gram matrix (short roots have norm 2)
- finite_diagram: the Bourbaki-labelled diagram of a finite Cartan type
- build_root_system / marks: positive roots, Cartan matrix, highest root
- longest_conjugation: the node permutation induced by the longest element
  of a finite parabolic subgroup (greedy descent, works at rank 8)
"""

import logging
from collections.abc import Iterable
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import sympy as sp

from jordanstrata.errors import NotFiniteTypeError
from jordanstrata.models import CartanType, NodePermutation, NodeSet, node_set

logger = logging.getLogger(__name__)

# Bond label used for the infinite bond of the affine A1 diagram
INFINITE_BOND: int = 0

# Coxeter bond label m_ij from the product a_ij * a_ji of Cartan entries
_BOND_FROM_PRODUCT: dict[int, int] = {0: 2, 1: 3, 2: 4, 3: 6, 4: INFINITE_BOND}

Gram = tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class DynkinDiagram:
    """A (possibly reducible, possibly affine) Dynkin diagram.

    The Gram matrix is the symmetrized Cartan form, scaled so that short
    roots have norm 2; long roots then have norm 4 (B, C, F) or 6 (G).

    Attributes:
        nodes: Node labels, in the order of the Gram matrix rows.
        gram: Integer Gram matrix of the simple roots.
    """

    nodes: NodeSet
    gram: Gram

    def __post_init__(self) -> None:
        size = len(self.nodes)
        if len(self.gram) != size or any(len(row) != size for row in self.gram):
            raise ValueError("Gram matrix does not match the node count")

    def index(self, node: int) -> int:
        """Return the Gram row of a node."""
        return self.nodes.index(node)

    def norm(self, node: int) -> int:
        """Return the squared length of a node's root."""
        k = self.index(node)
        return self.gram[k][k]

    def cartan_entry(self, i: int, j: int) -> int:
        """Return a_ij = 2(alpha_i, alpha_j)/(alpha_i, alpha_i) for nodes i, j."""
        return 2 * self.gram[self.index(i)][self.index(j)] // self.norm(i)

    def bond(self, i: int, j: int) -> int:
        """Return the Coxeter bond label m_ij (2 when i, j are not joined)."""
        if i == j:
            return 1
        return _BOND_FROM_PRODUCT[self.cartan_entry(i, j) * self.cartan_entry(j, i)]

    def neighbours(self, node: int, within: Iterable[int] | None = None) -> NodeSet:
        """Return the nodes joined to node, optionally restricted to a subset."""
        pool = self.nodes if within is None else node_set(within)
        row = self.gram[self.index(node)]
        return tuple(j for j in pool if j != node and row[self.index(j)] != 0)

    def induced(self, nodes: Iterable[int]) -> "DynkinDiagram":
        """Return the subdiagram induced on a node subset."""
        sub = node_set(nodes)
        rows = [self.index(i) for i in sub]
        return DynkinDiagram(sub, tuple(tuple(self.gram[r][c] for c in rows) for r in rows))

    def components(self, nodes: Iterable[int] | None = None) -> tuple[NodeSet, ...]:
        """Return the connected components of the subdiagram on nodes."""
        remaining = set(self.nodes if nodes is None else nodes)
        found: list[NodeSet] = []
        while remaining:
            start = min(remaining)
            stack, seen = [start], {start}
            while stack:
                current = stack.pop()
                for other in self.neighbours(current, remaining):
                    if other not in seen:
                        seen.add(other)
                        stack.append(other)
            remaining -= seen
            found.append(node_set(seen))
        return tuple(sorted(found))

    def is_finite(self, nodes: Iterable[int] | None = None) -> bool:
        """True if the subset generates a finite reflection group."""
        sub = self if nodes is None else self.induced(nodes)
        return _is_positive_definite(sub.gram)

    def is_automorphism(self, perm: NodePermutation) -> bool:
        """True if perm preserves every Gram entry (bonds and root lengths)."""
        if perm.domain != self.nodes:
            return False
        mapping = perm.as_dict()
        return all(
            self.gram[self.index(i)][self.index(j)]
            == self.gram[self.index(mapping[i])][self.index(mapping[j])]
            for i in self.nodes
            for j in self.nodes
        )

    def cartan_matrix(self) -> np.ndarray:
        """Return the integer Cartan matrix (rows indexed like nodes)."""
        return np.array(
            [[self.cartan_entry(i, j) for j in self.nodes] for i in self.nodes], dtype=np.int64
        )


@lru_cache(maxsize=4096)
def _is_positive_definite(gram: Gram) -> bool:
    if not gram:
        return True
    matrix = sp.Matrix(gram)
    return all(int(matrix[:k, :k].det()) > 0 for k in range(1, len(gram) + 1))


def _chain_gram(norms: list[int], edges: list[tuple[int, int, int]]) -> Gram:
    size = len(norms)
    rows = [[0] * size for _ in range(size)]
    for k, value in enumerate(norms):
        rows[k][k] = value
    for i, j, value in edges:
        rows[i - 1][j - 1] = value
        rows[j - 1][i - 1] = value
    return tuple(tuple(row) for row in rows)


def finite_diagram(cartan_type: CartanType) -> DynkinDiagram:
    """Return the Bourbaki-labelled Dynkin diagram of a finite type.

    Nodes are numbered 1..n. B_n has its short root at node n, C_n its long
    root at node n, D_n forks at node n-2, E_n branches at node 4 with node 2
    attached there, F4 has long roots at 1 and 2, and G2 has its short root
    at node 1.

    Args:
        cartan_type: The finite type.

    Returns:
        The diagram with its integer Gram matrix.
    """
    family, n = cartan_type.family, cartan_type.rank
    path = [(k, k + 1) for k in range(1, n)]
    if family == "A":
        gram = _chain_gram([2] * n, [(i, j, -1) for i, j in path])
    elif family == "B":
        gram = _chain_gram([4] * (n - 1) + [2], [(i, j, -2) for i, j in path])
    elif family == "C":
        gram = _chain_gram(
            [2] * (n - 1) + [4], [(i, j, -2 if j == n else -1) for i, j in path]
        )
    elif family == "D":
        edges = [(k, k + 1, -1) for k in range(1, n - 1)] + [(n - 2, n, -1)]
        gram = _chain_gram([2] * n, edges)
    elif family == "E":
        edges = [(1, 3, -1), (2, 4, -1)] + [(k, k + 1, -1) for k in range(3, n)]
        gram = _chain_gram([2] * n, edges)
    elif family == "F":
        gram = _chain_gram([4, 4, 2, 2], [(1, 2, -2), (2, 3, -2), (3, 4, -1)])
    else:
        gram = _chain_gram([2, 6], [(1, 2, -3)])
    return DynkinDiagram(tuple(range(1, n + 1)), gram)


@dataclass(frozen=True)
class RootSystem:
    """Positive system of a finite type in simple-root coordinates.

    Attributes:
        cartan_type: The finite type.
        simple_roots: Unit vectors, one per simple root.
        positive_roots: All positive roots, sorted by height then coordinates.
        cartan_matrix: Rows a_ij = <alpha_j, alpha_i coroot>.
        highest_root: The unique root of maximal height.
    """

    cartan_type: CartanType
    simple_roots: tuple[tuple[int, ...], ...]
    positive_roots: tuple[tuple[int, ...], ...]
    cartan_matrix: tuple[tuple[int, ...], ...]
    highest_root: tuple[int, ...]

    @property
    def coxeter_number(self) -> int:
        """Height of the highest root plus one."""
        return sum(self.highest_root) + 1


def _reflect(root: tuple[int, ...], i: int, cartan: np.ndarray) -> tuple[int, ...]:
    vector = np.array(root, dtype=np.int64)
    vector[i] -= int(cartan[i] @ vector)
    return tuple(int(x) for x in vector)


@lru_cache(maxsize=64)
def build_root_system(cartan_type: CartanType) -> RootSystem:
    """Enumerate the positive roots by closing the simple roots under reflections.

    Args:
        cartan_type: The finite type.

    Returns:
        The complete positive system with its highest root.
    """
    diagram = finite_diagram(cartan_type)
    cartan = diagram.cartan_matrix()
    rank = cartan_type.rank
    simple = tuple(tuple(int(i == k) for i in range(rank)) for k in range(rank))

    seen = set(simple)
    frontier = list(simple)
    while frontier:
        root = frontier.pop()
        for i in range(rank):
            image = _reflect(root, i, cartan)
            if all(x >= 0 for x in image) and any(image) and image not in seen:
                seen.add(image)
                frontier.append(image)

    positive = tuple(sorted(seen, key=lambda r: (sum(r), r)))
    highest = max(positive, key=sum)
    system = RootSystem(
        cartan_type=cartan_type,
        simple_roots=simple,
        positive_roots=positive,
        cartan_matrix=tuple(tuple(int(x) for x in row) for row in cartan),
        highest_root=highest,
    )
    logger.debug("Root system %s: %d positive roots", cartan_type, len(positive))
    return system


def marks(cartan_type: CartanType) -> tuple[int, ...]:
    """Return the coefficients d_i of the highest root on the simple roots."""
    return build_root_system(cartan_type).highest_root


@lru_cache(maxsize=8192)
def _longest_permutation(gram: Gram) -> tuple[int, ...]:
    size = len(gram)
    if size == 0:
        return ()
    cartan = np.array(
        [[2 * gram[i][j] // gram[i][i] for j in range(size)] for i in range(size)], dtype=np.int64
    )
    reflections = []
    for i in range(size):
        s = np.eye(size, dtype=np.int64)
        s[i, :] -= cartan[i]
        reflections.append(s)

    # Columns hold the images of the simple roots; multiply on the right by
    # s_i while some image is still positive (each step raises the length).
    current = np.eye(size, dtype=np.int64)
    while True:
        ascent = next((i for i in range(size) if (current[:, i] >= 0).all()), None)
        if ascent is None:
            break
        current = current @ reflections[ascent]

    images = []
    for i in range(size):
        column = -current[:, i]
        targets = np.flatnonzero(column)
        if len(targets) != 1 or column[targets[0]] != 1:
            raise NotFiniteTypeError("Longest element does not permute the simple roots")
        images.append(int(targets[0]))
    return tuple(images)


def longest_conjugation(diagram: DynkinDiagram, nodes: Iterable[int]) -> NodePermutation:
    """Return the permutation pi with w0(J) s_i w0(J) = s_pi(i) on J.

    Args:
        diagram: Ambient diagram.
        nodes: The subset J, which must generate a finite parabolic subgroup.

    Returns:
        The -w0 permutation of J (an involutive diagram automorphism of J).

    Raises:
        NotFiniteTypeError: If J is not of finite type.
    """
    sub = diagram.induced(nodes)
    if not sub.is_finite():
        raise NotFiniteTypeError(f"Subset {sub.nodes} is not of finite type")
    local = _longest_permutation(sub.gram)
    return NodePermutation(sub.nodes, tuple(sub.nodes[k] for k in local))
