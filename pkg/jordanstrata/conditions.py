"""Combinatorial conditions on the faces of a stratum.

This module provides:
- minimal_vertices: vertices of the faces in Sigma(H,K,L)
- vertex_condition: the single-orbit condition at a vertex
- codim1_condition: the single-orbit condition at every codimension-1 subflat
- node_condition: the trivial-stabilizer node test
- containment_holds: whether the vertex condition is also necessary
- allbutone_condition: the necessary condition for |K| = 2
"""

import logging
from collections.abc import Iterable

from jordanstrata.affine_diagram import IsogenyAction, face_stabilizer, node_stabilizer
from jordanstrata.errors import VacuousVertexError
from jordanstrata.models import NodeSet, complement, node_set
from jordanstrata.rootsys import longest_conjugation

logger = logging.getLogger(__name__)


def _single_orbit(members: set[NodeSet], K: IsogenyAction) -> bool:
    if not members:
        return True
    start = min(members)
    return {k.apply(start) for k in K.elements} == members


def minimal_vertices(sigma: Iterable[NodeSet], K: IsogenyAction) -> NodeSet:
    """Return every node j with x_j a vertex of some face of sigma."""
    nodes = K.diagram.nodes
    return node_set(j for s in sigma for j in complement(s, nodes))


def vertex_condition(sigma: Iterable[NodeSet], K: IsogenyAction, j: int) -> bool:
    """Check that the faces of sigma having x_j as a vertex form one K^{x_j}-orbit.

    Args:
        sigma: Sigma(H,K,L) as wall sets.
        K: The isogeny action.
        j: The vertex node.

    Returns:
        True iff {S in sigma : j not in S} is a single node_stabilizer(K, j) orbit.

    Raises:
        VacuousVertexError: If j lies in every member.
    """
    avoiding = {s for s in sigma if j not in s}
    if not avoiding:
        raise VacuousVertexError(f"Node {j} lies in every member of sigma")
    return _single_orbit(avoiding, node_stabilizer(K, j))


def codim1_condition(sigma: Iterable[NodeSet], K: IsogenyAction) -> bool:
    """Check the single-orbit condition at every codimension-1 subflat.

    For each finite-type S' with |S'| = |S| + 1 containing a member, the
    members inside S' must form one orbit of the pointwise stabilizer of
    the face S'.

    Raises:
        ValueError: If sigma is empty.
    """
    members = set(sigma)
    if not members:
        raise ValueError("sigma must not be empty")
    nodes = K.diagram.nodes
    checked: set[NodeSet] = set()
    for member in sorted(members):
        for j in complement(member, nodes):
            larger = node_set((*member, j))
            if larger in checked or len(larger) == len(nodes):
                continue
            checked.add(larger)
            inside = {s for s in members if set(s) <= set(larger)}
            stabilizer = face_stabilizer(K, complement(larger, nodes))
            if not _single_orbit(inside, stabilizer):
                logger.debug("Codim-1 condition fails at %s", larger)
                return False
    return True


def node_condition(K: IsogenyAction, subset: Iterable[int]) -> bool:
    """Check the trivial-stabilizer node test for a wall set.

    If x_j has trivial stabilizer in K and N_j lies in both S^ and kS^ for
    some k in K, then kS^ must equal S^.
    """
    nodes = K.diagram.nodes
    hat = set(complement(node_set(subset), nodes))
    lonely = {j for orbit in K.group.node_orbits() if len(orbit) == K.order for j in orbit}
    for k in K.elements:
        moved = {k(j) for j in hat}
        if moved != hat and hat & moved & lonely:
            return False
    return True


def containment_holds(K: IsogenyAction, subset: Iterable[int]) -> bool:
    """Check that every wall reflection of L is realized inside the face stabilizers.

    For each j outside S (when at least two vertices remain), some k
    fixing the face S + {j} pointwise must satisfy k(iota(S)) = S, where
    iota is the -w0 involution of S + {j}. When this holds the vertex
    condition is necessary as well as sufficient for unibranchedness.
    """
    extdiag = K.diagram
    nodes = extdiag.nodes
    chosen = node_set(subset)
    hat = complement(chosen, nodes)
    if len(hat) < 2:
        return True
    for j in hat:
        larger = node_set((*chosen, j))
        iota = longest_conjugation(extdiag.diagram, larger)
        image = iota.apply(chosen)
        stabilizer = face_stabilizer(K, complement(larger, nodes))
        if not any(k.apply(image) == chosen for k in stabilizer.elements):
            return False
    return True


def allbutone_condition(
    K: IsogenyAction, subset: Iterable[int], class_size: int, unibranch: bool
) -> bool:
    """Necessary condition for normality when |K| = 2.

    Either the K = 1 class is a singleton (normal in codimension 1), or
    exactly one vertex of the face is moved by K and the K = 1 stratum is
    unibranch.

    Raises:
        ValueError: If |K| != 2.
    """
    if K.order != 2:
        raise ValueError(f"allbutone needs |K| = 2, got {K.order}")
    if class_size == 1:
        return True
    fixed = K.elements[1].fixed_nodes()
    moved = [j for j in complement(node_set(subset), K.diagram.nodes) if j not in fixed]
    return len(moved) == 1 and unibranch

