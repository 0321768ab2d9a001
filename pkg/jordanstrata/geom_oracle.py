"""Brute-force geometric model of the fundamental alcove.

Points are written in fundamental coweight coordinates c_i = <alpha_i, x>
with an extra homogeneous coordinate, so every affine Weyl group element is
an integer matrix and every wall test is an exact integer comparison.

This module provides:
- EuclideanModel / build_euclidean_model: alcove vertices, walls, generators
- AffineIsometry / group_ball: all elements of word length <= max_len
- Flat / flat_of: flats with a canonical equation form
- sigma_geometric: Sigma(H,L) (or Sigma(H,K,L)) read off the ball
- omega_at_vertex: the Omega-set unibranch test at a vertex
- geometric_strata_count: orbits of flats of alcove faces
- maps_walls_into_arrangement: sanity check of a ball element against the roots
"""

import logging
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from functools import lru_cache
from math import lcm

import numpy as np
import sympy as sp

from jordanstrata.affine_diagram import (
    ExtendedDiagram,
    IsogenyAction,
    extended_diagram,
    parabolic_is_finite,
)
from jordanstrata.config import BALL_SIZE_LIMIT, STABILITY_STEP
from jordanstrata.coxclass import finite_subsets
from jordanstrata.errors import BudgetExceededError, NotAVertexError, NotFiniteTypeError
from jordanstrata.models import CartanType, NodePermutation, NodeSet, complement, node_set
from jordanstrata.rootsys import build_root_system

logger = logging.getLogger(__name__)

Row = tuple[sp.Rational, ...]


@dataclass(frozen=True, eq=False)
class EuclideanModel:
    """The closed alcove of an affine Weyl group in homogeneous coweight coordinates.

    Attributes:
        extdiag: The extended diagram; node i is the wall opposite vertex x_i.
        generators: Homogeneous integer matrices of s_0, ..., s_n.
        vertices: Column j is D * (x_j, 1), with D = lcm of the marks.
        walls: Row i is the functional vanishing exactly on wall i.
        scale: D.
    """

    extdiag: ExtendedDiagram
    generators: tuple[np.ndarray, ...]
    vertices: np.ndarray
    walls: np.ndarray
    scale: int

    @property
    def cartan_type(self) -> CartanType:
        """The finite type."""
        return self.extdiag.base_type

    @property
    def dimension(self) -> int:
        """Ambient dimension n."""
        return self.extdiag.rank


def build_euclidean_model(cartan_type: CartanType) -> EuclideanModel:
    """Build the alcove with vertices x_0 = 0 and x_i = w_i/d_i.

    Args:
        cartan_type: The finite type.

    Returns:
        The model; every generator is an integer matrix.
    """
    extdiag = extended_diagram(cartan_type)
    system = build_root_system(cartan_type)
    n = cartan_type.rank
    cartan = np.array(system.cartan_matrix, dtype=np.int64)
    d = np.array(extdiag.marks[1:], dtype=np.int64)

    gram = np.array(extdiag.diagram.gram, dtype=np.int64)[1:, 1:]
    theta_pairing = d @ gram
    theta_norm = int(theta_pairing @ d)
    coroot = 2 * theta_pairing
    if np.any(coroot % theta_norm):
        raise ValueError(f"Highest coroot of {cartan_type} is not integral")
    coroot //= theta_norm

    generators = []
    s0 = np.eye(n + 1, dtype=np.int64)
    s0[:n, :n] -= np.outer(coroot, d)
    s0[:n, n] = coroot
    generators.append(s0)
    for i in range(n):
        s = np.eye(n + 1, dtype=np.int64)
        s[:n, i] -= cartan[i]
        generators.append(s)

    scale = lcm(*extdiag.marks)
    vertices = np.zeros((n + 1, n + 1), dtype=np.int64)
    vertices[n, :] = scale
    for i in range(1, n + 1):
        vertices[i - 1, i] = scale // extdiag.mark(i)

    walls = np.zeros((n + 1, n + 1), dtype=np.int64)
    walls[0, :n] = d
    walls[0, n] = -1
    for i in range(1, n + 1):
        walls[i, i - 1] = 1
    return EuclideanModel(extdiag, tuple(generators), vertices, walls, scale)


@dataclass(frozen=True, eq=False)
class AffineIsometry:
    """An element of the affine Weyl group.

    Attributes:
        matrix: Homogeneous integer matrix.
        inverse: Its inverse.
        word: Generator indices, applied right to left.
    """

    matrix: np.ndarray
    inverse: np.ndarray
    word: tuple[int, ...]

    @property
    def length(self) -> int:
        """Length of the stored (shortest) word."""
        return len(self.word)

    @property
    def linear(self) -> np.ndarray:
        """The linear part, acting on coweight coordinates."""
        return self.matrix[:-1, :-1]

    @property
    def translation(self) -> np.ndarray:
        """The image of the origin, in coweight coordinates."""
        return self.matrix[:-1, -1]


def group_ball(
    model: EuclideanModel, max_len: int, limit: int = BALL_SIZE_LIMIT
) -> list[AffineIsometry]:
    """Enumerate the distinct elements of word length at most max_len.

    Args:
        model: The alcove model.
        max_len: Maximal word length (>= 0).
        limit: Maximal number of elements.

    Returns:
        Elements in order of increasing length.

    Raises:
        ValueError: If max_len is negative.
        BudgetExceededError: If more than limit elements would be kept.
    """
    if max_len < 0:
        raise ValueError("max_len must be non-negative")
    size = model.dimension + 1
    identity = np.eye(size, dtype=np.int64)
    ball = [AffineIsometry(identity, identity, ())]
    seen = {identity.tobytes()}
    frontier = ball[:]
    for _ in range(max_len):
        layer = []
        for element in frontier:
            for index, generator in enumerate(model.generators):
                product = element.matrix @ generator
                key = product.tobytes()
                if key in seen:
                    continue
                seen.add(key)
                layer.append(
                    AffineIsometry(product, generator @ element.inverse, (*element.word, index))
                )
        if len(seen) > limit:
            raise BudgetExceededError(f"Ball of {model.extdiag} exceeds {limit} elements")
        ball.extend(layer)
        frontier = layer
        if not layer:
            break
    logger.debug("Ball of %s at length %d: %d elements", model.extdiag, max_len, len(ball))
    return ball


def _rref_rows(rows: Sequence[Sequence[int]]) -> tuple[Row, ...]:
    if len(rows) == 0:
        return ()
    reduced, pivots = sp.Matrix(rows).rref()
    return tuple(tuple(reduced.row(k)) for k in range(len(pivots)))


@dataclass(frozen=True)
class Flat:
    """An affine subspace cut out by arrangement hyperplanes.

    Attributes:
        equations: Reduced row echelon form of its homogeneous equations.
        dimension: Its dimension.
        anchor: A point of the flat in coweight coordinates.
    """

    equations: tuple[Row, ...]
    dimension: int
    anchor: tuple[sp.Rational, ...] = field(compare=False, default=())

    def contains(self, point: Iterable[int], scale: int = 1) -> bool:
        """True if the homogeneous point (coordinates..., scale) lies on the flat."""
        vector = (*point, scale)
        return all(sum(a * b for a, b in zip(row, vector)) == 0 for row in self.equations)


def flat_of(model: EuclideanModel, subset: Iterable[int]) -> Flat:
    """Return the flat |F| cut out by the walls in S'.

    Raises:
        NotFiniteTypeError: If S' is not of finite type.
    """
    nodes = model.extdiag.check_nodes(subset)
    if not parabolic_is_finite(model.extdiag, nodes):
        raise NotFiniteTypeError(f"{nodes} is not of finite type in {model.extdiag}")
    equations = _rref_rows(model.walls[list(nodes)].tolist())
    j = complement(nodes, model.extdiag.nodes)[0]
    column = model.vertices[:, j]
    anchor = tuple(sp.Rational(int(c), model.scale) for c in column[:-1])
    return Flat(equations, model.dimension - len(equations), anchor)


@dataclass(frozen=True)
class GeometricSigma:
    """Sigma read off a finite ball.

    Attributes:
        members: Wall sets of the faces found.
        stable: Whether the ball of length max_len - STABILITY_STEP finds the same set.
        ball_size: Number of group elements examined.
    """

    members: frozenset[NodeSet]
    stable: bool
    ball_size: int


def _lying_over(
    model: EuclideanModel, ball: list[AffineIsometry], subset: NodeSet
) -> list[tuple[int, NodeSet]]:
    """(length, T) for each element w with wL lying over the alcove."""
    spanning = model.vertices[:, list(complement(subset, model.extdiag.nodes))]
    stack = np.stack([e.matrix for e in ball])
    images = stack @ spanning
    vanishing = np.all((model.walls @ images) == 0, axis=2)
    found = []
    for element, row in zip(ball, vanishing):
        walls = node_set(int(i) for i in np.flatnonzero(row))
        if len(walls) == len(subset):
            found.append((element.length, walls))
    return found


def _saturate(members: Iterable[NodeSet], K: IsogenyAction | None) -> frozenset[NodeSet]:
    if K is None:
        return frozenset(members)
    return frozenset(k.apply(m) for m in members for k in K.elements)


def sigma_geometric(
    model: EuclideanModel,
    subset: Iterable[int],
    max_len: int,
    K: IsogenyAction | None = None,
    ball: list[AffineIsometry] | None = None,
) -> GeometricSigma:
    """Collect the wall sets T of the faces wL meeting the alcove in full dimension.

    Args:
        model: The alcove model.
        subset: S_F, of finite type.
        max_len: Word length of the ball.
        K: Optional isogeny action; the result is then K . Sigma(H,L).
        ball: A precomputed ball of length max_len.

    Returns:
        The members with a stability flag.

    Raises:
        NotFiniteTypeError: If S_F is not of finite type.
    """
    nodes = model.extdiag.check_nodes(subset)
    if not parabolic_is_finite(model.extdiag, nodes):
        raise NotFiniteTypeError(f"{nodes} is not of finite type in {model.extdiag}")
    ball = ball if ball is not None else group_ball(model, max_len)
    found = _lying_over(model, ball, nodes)
    full = _saturate((t for _, t in found), K)
    short = _saturate((t for length, t in found if length <= max_len - STABILITY_STEP), K)
    if full != short:
        logger.warning("Sigma of %s in %s not stable at length %d", nodes, model.extdiag, max_len)
    return GeometricSigma(full, full == short, len(ball))


def isogeny_matrices(
    model: EuclideanModel, K: IsogenyAction
) -> list[tuple[NodePermutation, np.ndarray, np.ndarray]]:
    """Realize each k in K as the affine map sending x_i to x_{k(i)}, with its inverse.

    Raises:
        ValueError: If some map is not integral in coweight coordinates.
    """
    X = sp.Matrix(model.vertices.tolist())
    inverse = X.inv()
    result = []
    for k in K.elements:
        permuted = sp.Matrix.hstack(*[X[:, k(i)] for i in model.extdiag.nodes])
        product = permuted * inverse
        if any(not entry.is_integer for entry in product):
            raise ValueError(f"Isogeny {k.images} is not integral on {model.extdiag}")
        result.append(
            (
                k,
                np.array(product.tolist(), dtype=np.int64),
                np.array(product.inv().tolist(), dtype=np.int64),
            )
        )
    return result


@dataclass(frozen=True)
class OmegaResult:
    """The Omega-set test at a vertex.

    Attributes:
        vertex: The node j.
        omega: Flats through x_j in the orbit of L.
        stabilizer_images: Images of L under the stabilizer of x_j.
        unibranch: Whether the two sets agree.
        stable: Whether the verdict is unchanged at length max_len - STABILITY_STEP.
    """

    vertex: int
    omega: frozenset[Flat]
    stabilizer_images: frozenset[Flat]
    unibranch: bool
    stable: bool


def _omega_sets(
    model: EuclideanModel,
    elements: list[tuple[int, np.ndarray, np.ndarray]],
    subset: NodeSet,
    j: int,
) -> tuple[frozenset[Flat], frozenset[Flat]]:
    equations = model.walls[list(subset)]
    vertex = model.vertices[:, j]
    anchor = tuple(sp.Rational(int(c), model.scale) for c in vertex[:-1])
    canonical: dict[bytes, Flat] = {}
    omega, fixed = set(), set()
    for _, matrix, inverse in elements:
        moved = equations @ inverse
        if np.any(moved @ vertex):
            continue
        key = moved.tobytes()
        if key not in canonical:
            rows = _rref_rows(moved.tolist())
            canonical[key] = Flat(rows, model.dimension - len(rows), anchor)
        flat = canonical[key]
        omega.add(flat)
        if np.array_equal(matrix @ vertex, vertex):
            fixed.add(flat)
    return frozenset(omega), frozenset(fixed)


def omega_at_vertex(
    model: EuclideanModel,
    K: IsogenyAction,
    subset: Iterable[int],
    j: int,
    max_len: int,
    ball: list[AffineIsometry] | None = None,
) -> OmegaResult:
    """Compare Omega at x_j with the images of L under the stabilizer of x_j.

    L is the flat of S_F when x_j is one of its vertices, and otherwise
    the flat of the least face of Sigma having x_j as a vertex.

    Raises:
        NotAVertexError: If x_j is not a vertex of any face found.
    """
    nodes = model.extdiag.check_nodes(subset)
    ball = ball if ball is not None else group_ball(model, max_len)
    if j in nodes:
        sigma = sigma_geometric(model, nodes, max_len, K, ball)
        avoiding = sorted(m for m in sigma.members if j not in m)
        if not avoiding:
            raise NotAVertexError(f"x_{j} is not a vertex of any face of {nodes}")
        nodes = avoiding[0]

    maps = isogeny_matrices(model, K)
    elements = [(g.length, g.matrix @ m, m_inv @ g.inverse) for g in ball for _, m, m_inv in maps]
    omega, fixed = _omega_sets(model, elements, nodes, j)
    short = [e for e in elements if e[0] <= max_len - STABILITY_STEP]
    short_omega, short_fixed = _omega_sets(model, short, nodes, j)
    unibranch = omega == fixed
    stable = unibranch == (short_omega == short_fixed)
    return OmegaResult(j, omega, fixed, unibranch, stable)


def geometric_strata_count(
    model: EuclideanModel, K: IsogenyAction, max_len: int
) -> tuple[int, bool]:
    """Count the orbits of flats of alcove faces under the ball and K.

    Returns:
        (number of orbits, whether every Sigma used was stable).
    """
    ball = group_ball(model, max_len)
    parent: dict[NodeSet, NodeSet] = {}

    def find(s: NodeSet) -> NodeSet:
        while parent[s] != s:
            parent[s] = parent[parent[s]]
            s = parent[s]
        return s

    subsets = finite_subsets(model.extdiag)
    for s in subsets:
        parent[s] = s
    stable = True
    for s in subsets:
        sigma = sigma_geometric(model, s, max_len, K, ball)
        stable = stable and sigma.stable
        for member in sigma.members:
            parent[find(member)] = find(s)
    return len({find(s) for s in subsets}), stable


def _on_root_hyperplane(functional: np.ndarray, root: np.ndarray) -> bool:
    """True if functional = c (root, -m) for some integer m and c != 0."""
    linear, offset = functional[:-1], int(functional[-1])
    pivot = int(np.flatnonzero(root)[0])
    factor, rest = divmod(int(linear[pivot]), int(root[pivot]))
    if rest or factor == 0 or not np.array_equal(linear, factor * root):
        return False
    return offset % factor == 0


@lru_cache(maxsize=32)
def _positive_roots(cartan_type: CartanType) -> tuple[np.ndarray, ...]:
    system = build_root_system(cartan_type)
    return tuple(np.array(r, dtype=np.int64) for r in system.positive_roots)


def maps_walls_into_arrangement(model: EuclideanModel, element: AffineIsometry) -> bool:
    """True if every alcove wall is carried onto a hyperplane {alpha = m}."""
    roots = _positive_roots(model.cartan_type)
    for functional in model.walls @ element.inverse:
        if not any(_on_root_hyperplane(functional, root) for root in roots):
            return False
    return True
