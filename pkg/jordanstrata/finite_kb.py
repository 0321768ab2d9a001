"""Normality of strata of finite reflection arrangements.

This module provides:
- FiniteResult: a verdict together with the rule id that produced it
- FiniteNormalityKB: closed-form classical rules plus the exceptional table
- finite_class: the Coxeter class of a subset of a finite diagram
- dim1_shortcut: the line criterion for subsets of size rank - 1
- finite_normality: evaluation of X(H_J, K', L) with K' acting on the diagram
"""

import logging
from collections.abc import Iterable
from dataclasses import dataclass
from functools import lru_cache

from jordanstrata.coxclass import coxeter_closure
from jordanstrata.datafile import FiniteTableEntry, load_table_data
from jordanstrata.errors import DimensionMismatchError, MalformedSubsetError, NotFiniteTypeError
from jordanstrata.models import FiniteVerdict, NodeSet, PermutationGroup, node_set
from jordanstrata.rootsys import DynkinDiagram, longest_conjugation
from jordanstrata.subdiagram import (
    ComponentType,
    classical_profile,
    diagram_automorphisms,
    recognize_component,
)

logger = logging.getLogger(__name__)

NORMAL = FiniteVerdict.NORMAL
NOT_NORMAL = FiniteVerdict.NOT_NORMAL
UNKNOWN = FiniteVerdict.UNKNOWN


@dataclass(frozen=True)
class FiniteResult:
    """Normality verdict of a finite counterpart.

    Attributes:
        verdict: Normal, not normal or unknown.
        rule: Id of the rule that decided, nested rules joined by ">".
    """

    verdict: FiniteVerdict
    rule: str

    def via(self, prefix: str) -> "FiniteResult":
        """Return the same verdict with a reduction step prefixed to the rule."""
        return FiniteResult(self.verdict, f"{prefix}>{self.rule}")


def _combine(results: Iterable[FiniteResult]) -> FiniteResult:
    """Product rule: a product is normal iff every factor is."""
    collected = list(results)
    for wanted in (NOT_NORMAL, UNKNOWN):
        for result in collected:
            if result.verdict is wanted:
                return result
    if len(collected) == 1:
        return collected[0]
    rules = list(dict.fromkeys(r.rule for r in collected))
    return FiniteResult(NORMAL, "product(" + ",".join(rules) + ")")


def finite_class(diagram: DynkinDiagram, subset: Iterable[int]) -> tuple[NodeSet, ...]:
    """Return the Coxeter class of a subset of a finite diagram.

    Raises:
        NotFiniteTypeError: If the diagram is not of finite type.
    """
    if not diagram.is_finite():
        raise NotFiniteTypeError(f"Diagram on {diagram.nodes} is not of finite type")
    return coxeter_closure(diagram, node_set(subset))


def dim1_shortcut(diagram: DynkinDiagram, subset: Iterable[int], group: PermutationGroup) -> bool:
    """Decide normality of a one-dimensional stratum.

    X(H_J, K', L) with dim L = 1 is normal iff some k in K' satisfies
    k(iota(J)) = J, where iota is the -w0 involution of the whole diagram.

    Args:
        diagram: Finite diagram.
        subset: J, of size rank - 1.
        group: K' acting on the diagram nodes.

    Returns:
        Whether the stratum is normal.

    Raises:
        DimensionMismatchError: If |J| != rank - 1.
    """
    nodes = node_set(subset)
    if len(nodes) != len(diagram.nodes) - 1:
        raise DimensionMismatchError(
            f"Line shortcut needs {len(diagram.nodes) - 1} nodes, got {len(nodes)}"
        )
    iota = longest_conjugation(diagram, diagram.nodes)
    image = iota.apply(nodes)
    return any(g.apply(image) == nodes for g in group.elements)


def _classical_verdict(component: ComponentType, labels: NodeSet) -> FiniteResult:
    family, n = component.cartan_type.family, component.cartan_type.rank
    profile = classical_profile(family, n, labels, extended=False)
    if family == "D" and profile.tail == 0:
        size = profile.block_size
        normal = size is not None and (size == 1 or size % 2 == 0)
    else:
        normal = profile.equal_blocks
    return FiniteResult(NORMAL if normal else NOT_NORMAL, f"classical.{family}")


@dataclass(frozen=True)
class FiniteNormalityKB:
    """Normality rules for finite strata.

    Attributes:
        entries: Exceptional-type table for singleton classes of E6, E7,
            E8 and F4 that no general rule decides.
    """

    entries: tuple[FiniteTableEntry, ...]

    @classmethod
    def default(cls) -> "FiniteNormalityKB":
        """Return the knowledge base backed by the bundled data file."""
        return cls(load_table_data().finite_entries)

    def exceptional_lookup(self, component: ComponentType, labels: NodeSet) -> FiniteResult | None:
        """Look up a Bourbaki-labelled subset, up to diagram automorphisms."""
        cartan_type = component.cartan_type
        for automorphism in diagram_automorphisms(cartan_type):
            image = node_set(automorphism[k - 1] for k in labels)
            for entry in self.entries:
                if entry.cartan_type == cartan_type and entry.nodes == image:
                    return FiniteResult(entry.verdict, entry.source)
        return None

    def component_normality(self, diagram: DynkinDiagram, component: NodeSet, subset: NodeSet) -> FiniteResult:
        """Normality for K' = 1 on one component, J known to have a singleton class."""
        chosen = [i for i in component if i in subset]
        if not chosen:
            return FiniteResult(NORMAL, "empty-set")
        if len(chosen) == len(component):
            return FiniteResult(NORMAL, "full-set")
        if len(chosen) == len(component) - 1:
            return FiniteResult(NORMAL, "line-singleton")
        ctype = recognize_component(diagram, component)
        labels = node_set(ctype.bourbaki_index(i) for i in chosen)
        if ctype.cartan_type.is_classical:
            return _classical_verdict(ctype, labels)
        found = self.exceptional_lookup(ctype, labels)
        if found is not None:
            return found
        logger.debug("No table entry for %s %s", ctype.cartan_type, labels)
        return FiniteResult(UNKNOWN, f"exceptional-missing.{ctype.cartan_type}")

    def trivial_normality(self, diagram: DynkinDiagram, subset: NodeSet) -> FiniteResult:
        """Normality of X(H_J, L) with no diagram automorphisms."""
        return _trivial_normality(self, diagram, subset)

    def normality(
        self, diagram: DynkinDiagram, subset: NodeSet, group: PermutationGroup | None = None
    ) -> FiniteResult:
        """Normality of X(H_J, K', L); group defaults to the trivial K'."""
        if group is None:
            group = PermutationGroup.trivial(diagram.nodes)
        return _normality(self, diagram, subset, group)


@lru_cache(maxsize=16384)
def _trivial_normality(kb: FiniteNormalityKB, diagram: DynkinDiagram, subset: NodeSet) -> FiniteResult:
    if not subset:
        return FiniteResult(NORMAL, "empty-set")
    if len(subset) == len(diagram.nodes):
        return FiniteResult(NORMAL, "full-set")
    if len(finite_class(diagram, subset)) > 1:
        return FiniteResult(NOT_NORMAL, "non-singleton-class")
    if len(subset) == len(diagram.nodes) - 1:
        return FiniteResult(NORMAL, "line-singleton")
    return _combine(kb.component_normality(diagram, c, subset) for c in diagram.components())


def _wall_swap_labels(diagram: DynkinDiagram, component: NodeSet, moved: NodeSet) -> NodeSet | None:
    """Bourbaki D labels of a component whose only symmetry used swaps two fork leaves.

    An A3 component with its flip is read as D3 (middle node first).
    """
    ctype = recognize_component(diagram, component)
    family, n = ctype.cartan_type.family, ctype.cartan_type.rank
    if family == "A" and n == 3:
        ends = (ctype.labels[0], ctype.labels[2])
        if node_set(moved) == node_set(ends):
            return (ctype.labels[1], *ends)
        return None
    if family != "D" or len(moved) != 2:
        return None
    centre = ctype.labels[n - 3]
    leaves = [i for i in component if diagram.neighbours(i, component) == (centre,)]
    if not set(moved) <= set(leaves):
        return None
    if n == 4:
        fixed = next(i for i in leaves if i not in moved)
        return (fixed, centre, *moved)
    if node_set(moved) != node_set(ctype.labels[-2:]):
        return None
    return ctype.labels


def _orbit_verdict(
    kb: FiniteNormalityKB,
    diagram: DynkinDiagram,
    components: list[NodeSet],
    subset: NodeSet,
    group: PermutationGroup,
) -> FiniteResult:
    nodes = node_set(i for c in components for i in c)
    chosen = node_set(i for i in subset if i in nodes)
    if group.is_trivial:
        return kb.trivial_normality(diagram.induced(nodes), chosen)
    if not chosen:
        return FiniteResult(NORMAL, "empty-set")
    if len(chosen) == len(nodes):
        return FiniteResult(NORMAL, "full-set")

    if len(components) >= 2 and group.order == len(components):
        partial = [c for c in components if not set(c) <= set(chosen)]
        if len(partial) <= 1:
            target = partial[0] if partial else components[0]
            inner = kb.trivial_normality(
                diagram.induced(target), node_set(i for i in chosen if i in target)
            )
            return inner.via("component-swap")

    if len(components) == 1 and group.order == 2:
        swap = group.elements[1]
        moved = node_set(i for i in nodes if swap(i) != i)
        labels = _wall_swap_labels(diagram, components[0], moved)
        if labels is not None:
            indices = [labels.index(i) + 1 for i in chosen]
            profile = classical_profile("D", len(labels), indices, extended=False)
            verdict = NORMAL if profile.equal_blocks else NOT_NORMAL
            return FiniteResult(verdict, "wall-swap")
    return FiniteResult(UNKNOWN, "no-rule")


def _orbit_product(
    kb: FiniteNormalityKB, diagram: DynkinDiagram, subset: NodeSet, group: PermutationGroup
) -> FiniteResult | None:
    """Evaluate orbit by orbit when K' is the direct product of its orbit images."""
    components = diagram.components()
    owner = {i: c for c in components for i in c}
    orbits: list[list[NodeSet]] = []
    placed: set[NodeSet] = set()
    for component in components:
        if component in placed:
            continue
        orbit = sorted({owner[g(component[0])] for g in group.elements})
        placed.update(orbit)
        orbits.append(orbit)

    images = [group.restrict(i for c in orbit for i in c) for orbit in orbits]
    total = 1
    for image in images:
        total *= image.order
    if total != group.order:
        return None
    return _combine(
        _orbit_verdict(kb, diagram, orbit, subset, image) for orbit, image in zip(orbits, images)
    )


@lru_cache(maxsize=16384)
def _normality(
    kb: FiniteNormalityKB, diagram: DynkinDiagram, subset: NodeSet, group: PermutationGroup
) -> FiniteResult:
    nodes = diagram.nodes
    if not subset:
        return FiniteResult(NORMAL, "empty-set")
    if len(subset) == len(nodes):
        return FiniteResult(NORMAL, "full-set")

    full = [c for c in diagram.components() if set(c) <= set(subset)]
    if full and not group.is_trivial:
        rest = node_set(i for i in nodes if not any(i in c for c in full))
        if group.setwise_stabilizer(rest).order == group.order:
            inner = _normality(
                kb,
                diagram.induced(rest),
                node_set(i for i in subset if i in rest),
                group.restrict(rest),
            )
            return inner.via("point-factor")

    if group.is_trivial:
        return kb.trivial_normality(diagram, subset)

    if len(subset) == len(nodes) - 1:
        normal = dim1_shortcut(diagram, subset, group)
        return FiniteResult(NORMAL if normal else NOT_NORMAL, "line-shortcut")

    product = _orbit_product(kb, diagram, subset, group)
    if product is not None and product.verdict is not UNKNOWN:
        return product

    base = kb.trivial_normality(diagram, subset)
    members = finite_class(diagram, subset)
    if group.setwise_stabilizer(subset).order == group.order:
        if base.verdict is NORMAL:
            return base.via("stable-face")
        if len(members) > 1:
            return FiniteResult(NOT_NORMAL, "stable-face>non-singleton-class")

    member_set = set(members)
    inertia = [g for g in group.elements if {g.apply(s) for s in members} == member_set]
    if all(g.is_identity for g in inertia) and base.verdict is NOT_NORMAL:
        return base.via("trivial-inertia")

    logger.debug("No finite rule for %s on %s", subset, nodes)
    return product if product is not None else FiniteResult(UNKNOWN, "no-rule")


def finite_normality(
    diagram: DynkinDiagram,
    subset: Iterable[int],
    group: PermutationGroup | None = None,
    kb: FiniteNormalityKB | None = None,
) -> FiniteResult:
    """Decide normality of the finite stratum X(H_J, K', L).

    Args:
        diagram: A finite (possibly reducible) diagram.
        subset: The wall set J.
        group: K' as permutations of the diagram nodes; trivial when omitted.
        kb: Knowledge base; the bundled one when omitted.

    Returns:
        The verdict with its rule id.

    Raises:
        MalformedSubsetError: If J or K' do not live on the diagram nodes.
        NotFiniteTypeError: If the diagram is not of finite type.
    """
    nodes = node_set(subset)
    if not set(nodes) <= set(diagram.nodes):
        raise MalformedSubsetError(f"{nodes} is not a subset of {diagram.nodes}")
    if group is not None and group.domain != diagram.nodes:
        raise MalformedSubsetError(f"Group acts on {group.domain}, diagram has {diagram.nodes}")
    if not diagram.is_finite():
        raise NotFiniteTypeError(f"Diagram on {diagram.nodes} is not of finite type")
    return (kb or FiniteNormalityKB.default()).normality(diagram, nodes, group)
