"""Coxeter classes of alcove faces and the strata they parametrize.

This module provides:
- coxeter_closure: iterated longest-element conjugation on any diagram
- CoxeterClass / coxeter_class: the class [S_F] of a finite-type wall set
- Stratum: a stratum X(H,K,L) identified by (diagram, K, representative)
- sigma_with_K: the K-saturation of a class
- enumerate_strata: all K-orbits of classes of an extended diagram
"""

import logging
from collections.abc import Iterable
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

from jordanstrata.affine_diagram import ExtendedDiagram, IsogenyAction, parabolic_is_finite
from jordanstrata.errors import NotFiniteTypeError
from jordanstrata.models import NodeSet, node_set
from jordanstrata.rootsys import DynkinDiagram, longest_conjugation

logger = logging.getLogger(__name__)


@lru_cache(maxsize=65536)
def coxeter_closure(diagram: DynkinDiagram, subset: NodeSet) -> tuple[NodeSet, ...]:
    """Close a finite-type subset under longest-element conjugation.

    For each member S' and each node j outside it with S' + {j} of finite
    type, the image of S' under the -w0 permutation of S' + {j} is a member.
    Expansion nodes making S' + {j} infinite (the point case) are skipped.

    Args:
        diagram: Any diagram (finite or extended).
        subset: Canonical finite-type subset.

    Returns:
        All members, sorted.

    Raises:
        NotFiniteTypeError: If subset is not of finite type.
    """
    if not diagram.is_finite(subset):
        raise NotFiniteTypeError(f"Subset {subset} is not of finite type")
    members = {subset}
    worklist = [subset]
    while worklist:
        worklist.sort()
        current = worklist.pop(0)
        for j in diagram.nodes:
            if j in current:
                continue
            enlarged = node_set((*current, j))
            if not diagram.is_finite(enlarged):
                continue
            image = longest_conjugation(diagram, enlarged).apply(current)
            if image not in members:
                members.add(image)
                worklist.append(image)
    return tuple(sorted(members))


@dataclass(frozen=True)
class CoxeterClass:
    """The Coxeter class [S_F] of a wall set.

    Attributes:
        diagram: The extended diagram.
        members: All members, sorted; members[0] is the representative.
    """

    diagram: ExtendedDiagram
    members: tuple[NodeSet, ...]

    @property
    def rep(self) -> NodeSet:
        """Lexicographically least member."""
        return self.members[0]

    @property
    def size(self) -> int:
        """Number of members."""
        return len(self.members)

    def __contains__(self, subset: object) -> bool:
        return subset in self.members


def coxeter_class(extdiag: ExtendedDiagram, subset: Iterable[int]) -> CoxeterClass:
    """Compute the Coxeter class of a finite-type wall set.

    Raises:
        NotFiniteTypeError: If the subset does not generate a finite parabolic.
    """
    nodes = extdiag.check_nodes(subset)
    if not parabolic_is_finite(extdiag, nodes):
        raise NotFiniteTypeError(f"{nodes} is not of finite type in {extdiag}")
    members = coxeter_closure(extdiag.diagram, nodes)
    logger.debug("Class of %s in %s has %d members", nodes, extdiag, len(members))
    return CoxeterClass(extdiag, members)


def sigma_with_K(cls: CoxeterClass, K: IsogenyAction) -> tuple[NodeSet, ...]:
    """Return K . [S_F], sorted.

    Raises:
        ValueError: If K acts on a different diagram.
    """
    if K.diagram != cls.diagram:
        raise ValueError("Isogeny action and class live on different diagrams")
    return tuple(sorted({k.apply(s) for k in K.elements for s in cls.members}))


@dataclass(frozen=True)
class Stratum:
    """A stratum X(H,K,L), identified by a representative wall set.

    Attributes:
        diagram: The extended diagram.
        K: The isogeny action.
        rep: A representative S_F (any member of sigma).

    Raises:
        NotFiniteTypeError: If rep does not generate a finite parabolic.
    """

    diagram: ExtendedDiagram
    K: IsogenyAction
    rep: NodeSet

    def __post_init__(self) -> None:
        if not parabolic_is_finite(self.diagram, self.rep):
            raise NotFiniteTypeError(f"{self.rep} is not of finite type in {self.diagram}")

    def coxeter_class(self) -> CoxeterClass:
        """Return [S_F] of the representative."""
        return coxeter_class(self.diagram, self.rep)

    def sigma(self) -> tuple[NodeSet, ...]:
        """Return Sigma(H,K,L) = K . [S_F]."""
        return sigma_with_K(self.coxeter_class(), self.K)

    def canonical(self) -> "Stratum":
        """Return the same stratum represented by the least member of sigma."""
        return Stratum(self.diagram, self.K, self.sigma()[0])

    @property
    def dimension(self) -> int:
        """Dimension of the flat L."""
        return self.diagram.rank - len(self.rep)


@dataclass(frozen=True)
class StratumOrbit:
    """A K-orbit of Coxeter classes, i.e. one stratum.

    Attributes:
        classes: The classes in the orbit, sorted by representative.
    """

    classes: tuple[CoxeterClass, ...]

    @property
    def members(self) -> tuple[NodeSet, ...]:
        """Union of all class members, sorted."""
        return tuple(sorted({s for c in self.classes for s in c.members}))

    @property
    def rep(self) -> NodeSet:
        """Least member over the whole orbit."""
        return self.members[0]


def finite_subsets(extdiag: ExtendedDiagram) -> list[NodeSet]:
    """List every finite-type subset, by size then lexicographically."""
    found = []
    for size in range(len(extdiag.nodes)):
        for combo in combinations(extdiag.nodes, size):
            if parabolic_is_finite(extdiag, combo):
                found.append(combo)
    return found


def enumerate_strata(extdiag: ExtendedDiagram, K: IsogenyAction) -> list[StratumOrbit]:
    """Partition the finite-type subsets into K-orbits of Coxeter classes.

    Returns:
        Orbits in order of their least member (by size, then lexicographic).
    """
    seen: set[NodeSet] = set()
    orbits = []
    for subset in finite_subsets(extdiag):
        if subset in seen:
            continue
        base = coxeter_class(extdiag, subset)
        classes = {}
        for k in K.elements:
            image = coxeter_class(extdiag, k.apply(base.rep))
            classes[image.rep] = image
        orbit = StratumOrbit(tuple(classes[r] for r in sorted(classes)))
        seen.update(orbit.members)
        orbits.append(orbit)
    logger.debug("%s with K=%s: %d strata", extdiag, K.selector, len(orbits))
    return orbits


def strata(extdiag: ExtendedDiagram, K: IsogenyAction) -> list[Stratum]:
    """Return one canonical Stratum per orbit of enumerate_strata."""
    return [Stratum(extdiag, K, orbit.rep) for orbit in enumerate_strata(extdiag, K)]
