"""Data models for jordanstrata.

This module contains the core value types:
- CartanType: A finite crystallographic Cartan type such as E7 or B5
- NodeSet: Canonical sorted tuple of diagram nodes (wall sets S_F)
- NodePermutation: A bijection on a node set
- Verdict, UnibranchVerdict, Smoothness, FiniteVerdict: Tri-state answers
"""

import re
from collections.abc import Iterable, Mapping
from dataclasses import dataclass
from enum import Enum

from jordanstrata.errors import InvalidCartanTypeError, MalformedSubsetError

# Canonical representation of a subset of diagram nodes
NodeSet = tuple[int, ...]

_TYPE_PATTERN = re.compile(r"^\s*([A-Ga-g])\s*_?\s*(\d+)\s*$")


def node_set(nodes: Iterable[int]) -> NodeSet:
    """Build the canonical NodeSet of an iterable of node indices.

    Args:
        nodes: Node indices, in any order, possibly repeated.

    Returns:
        Sorted tuple of the distinct indices.
    """
    return tuple(sorted(set(nodes)))


def complement(nodes: NodeSet, universe: Iterable[int]) -> NodeSet:
    """Return the nodes of universe that are not in nodes."""
    present = set(nodes)
    return tuple(sorted(i for i in universe if i not in present))


def _rank_is_valid(family: str, rank: int) -> bool:
    if family == "A":
        return rank >= 1
    if family in ("B", "C"):
        return rank >= 2
    if family == "D":
        return rank >= 4
    if family == "E":
        return rank in (6, 7, 8)
    if family == "F":
        return rank == 4
    if family == "G":
        return rank == 2
    return False


@dataclass(frozen=True, order=True)
class CartanType:
    """A finite crystallographic Cartan type.

    Attributes:
        family: One of "A", "B", "C", "D", "E", "F", "G".
        rank: Number of simple roots.

    Raises:
        InvalidCartanTypeError: If the rank is not valid for the family.
    """

    family: str
    rank: int

    def __post_init__(self) -> None:
        if not _rank_is_valid(self.family, self.rank):
            raise InvalidCartanTypeError(
                f"Invalid Cartan type: family {self.family!r} with rank {self.rank}"
            )

    @classmethod
    def parse(cls, text: str) -> "CartanType":
        """Parse a type name such as "E7", "b5" or "D_4".

        Args:
            text: The type name.

        Returns:
            The parsed CartanType.

        Raises:
            InvalidCartanTypeError: If the name cannot be parsed or is invalid.
        """
        match = _TYPE_PATTERN.match(text)
        if match is None:
            raise InvalidCartanTypeError(f"Cannot parse Cartan type: {text!r}")
        return cls(match.group(1).upper(), int(match.group(2)))

    @property
    def is_classical(self) -> bool:
        """True for the families A, B, C and D."""
        return self.family in ("A", "B", "C", "D")

    def __str__(self) -> str:
        return f"{self.family}{self.rank}"


@dataclass(frozen=True)
class NodePermutation:
    """A bijection of a node set onto itself.

    Attributes:
        domain: The nodes the permutation acts on (canonical NodeSet).
        images: images[k] is the image of domain[k].

    Raises:
        ValueError: If images is not a rearrangement of domain.
    """

    domain: NodeSet
    images: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.domain) != len(self.images) or sorted(self.images) != list(self.domain):
            raise ValueError(f"Not a permutation of {self.domain}: {self.images}")

    @classmethod
    def identity(cls, domain: Iterable[int]) -> "NodePermutation":
        """Return the identity permutation of domain."""
        nodes = node_set(domain)
        return cls(nodes, nodes)

    @classmethod
    def from_mapping(cls, mapping: Mapping[int, int]) -> "NodePermutation":
        """Build a permutation from an explicit node-to-node mapping."""
        domain = node_set(mapping)
        return cls(domain, tuple(mapping[i] for i in domain))

    @classmethod
    def from_cycles(cls, domain: Iterable[int], cycles: Iterable[Iterable[int]]) -> "NodePermutation":
        """Build a permutation from disjoint cycles, fixing the other nodes.

        Args:
            domain: All nodes the permutation acts on.
            cycles: Cycles such as ((0, 7), (1, 6)); each maps an entry to the next.

        Returns:
            The permutation.

        Raises:
            MalformedSubsetError: If a cycle mentions a node outside domain.
        """
        nodes = node_set(domain)
        mapping = {i: i for i in nodes}
        for cycle in cycles:
            entries = tuple(cycle)
            for k, node in enumerate(entries):
                if node not in mapping:
                    raise MalformedSubsetError(f"Cycle node {node} outside {nodes}")
                mapping[node] = entries[(k + 1) % len(entries)]
        return cls.from_mapping(mapping)

    def as_dict(self) -> dict[int, int]:
        """Return the permutation as a dictionary."""
        return dict(zip(self.domain, self.images))

    def __call__(self, node: int) -> int:
        return self.images[self.domain.index(node)]

    def apply(self, nodes: Iterable[int]) -> NodeSet:
        """Return the canonical image of a node set."""
        mapping = self.as_dict()
        return node_set(mapping[i] for i in nodes)

    def compose(self, other: "NodePermutation") -> "NodePermutation":
        """Return self after other (first other, then self)."""
        if other.domain != self.domain:
            raise ValueError("Cannot compose permutations of different domains")
        mapping = self.as_dict()
        return NodePermutation(self.domain, tuple(mapping[i] for i in other.images))

    def inverse(self) -> "NodePermutation":
        """Return the inverse permutation."""
        return NodePermutation.from_mapping({j: i for i, j in zip(self.domain, self.images)})

    def restrict(self, nodes: Iterable[int]) -> "NodePermutation":
        """Restrict to a subset that the permutation maps onto itself.

        Raises:
            ValueError: If the subset is not stable.
        """
        sub = node_set(nodes)
        mapping = self.as_dict()
        if node_set(mapping[i] for i in sub) != sub:
            raise ValueError(f"{sub} is not stable under {self.images}")
        return NodePermutation.from_mapping({i: mapping[i] for i in sub})

    @property
    def is_identity(self) -> bool:
        """True if every node is fixed."""
        return self.domain == self.images

    def fixed_nodes(self) -> NodeSet:
        """Return the nodes fixed by the permutation."""
        return tuple(i for i, j in zip(self.domain, self.images) if i == j)


@dataclass(frozen=True)
class PermutationGroup:
    """A finite group of permutations of a node set.

    Attributes:
        domain: The nodes acted on.
        elements: All group elements, identity first, then in canonical order.
    """

    domain: NodeSet
    elements: tuple[NodePermutation, ...]

    @classmethod
    def generated(
        cls, domain: Iterable[int], generators: Iterable[NodePermutation] = ()
    ) -> "PermutationGroup":
        """Close a set of generators under composition.

        Args:
            domain: The nodes acted on.
            generators: Permutations of domain.

        Returns:
            The generated group.
        """
        nodes = node_set(domain)
        identity = NodePermutation.identity(nodes)
        gens = [g for g in generators if not g.is_identity]
        found = {identity.images: identity}
        frontier = [identity]
        while frontier:
            current = frontier.pop()
            for g in gens:
                product = g.compose(current)
                if product.images not in found:
                    found[product.images] = product
                    frontier.append(product)
        others = sorted(
            (p for key, p in found.items() if key != nodes), key=lambda p: p.images
        )
        return cls(nodes, (identity, *others))

    @classmethod
    def trivial(cls, domain: Iterable[int]) -> "PermutationGroup":
        """Return the trivial group on domain."""
        return cls.generated(domain)

    @property
    def order(self) -> int:
        """Number of elements."""
        return len(self.elements)

    @property
    def is_trivial(self) -> bool:
        """True if the group acts as the identity on its domain."""
        return all(g.is_identity for g in self.elements)

    def orbit(self, nodes: Iterable[int]) -> frozenset[NodeSet]:
        """Return the orbit of a node set."""
        subset = node_set(nodes)
        return frozenset(g.apply(subset) for g in self.elements)

    def node_orbits(self) -> tuple[NodeSet, ...]:
        """Return the orbits of the group on single nodes."""
        seen: set[int] = set()
        orbits = []
        for i in self.domain:
            if i not in seen:
                orbit = node_set(g(i) for g in self.elements)
                seen.update(orbit)
                orbits.append(orbit)
        return tuple(orbits)

    def pointwise_stabilizer(self, nodes: Iterable[int]) -> "PermutationGroup":
        """Return the subgroup fixing every node of a subset."""
        fixed = node_set(nodes)
        kept = tuple(g for g in self.elements if all(g(i) == i for i in fixed))
        return PermutationGroup(self.domain, kept)

    def setwise_stabilizer(self, nodes: Iterable[int]) -> "PermutationGroup":
        """Return the subgroup mapping a subset onto itself."""
        subset = node_set(nodes)
        kept = tuple(g for g in self.elements if g.apply(subset) == subset)
        return PermutationGroup(self.domain, kept)

    def restrict(self, nodes: Iterable[int]) -> "PermutationGroup":
        """Return the image of the group on a stable subset, duplicates removed.

        Raises:
            ValueError: If some element does not map the subset onto itself.
        """
        sub = node_set(nodes)
        return PermutationGroup.generated(sub, (g.restrict(sub) for g in self.elements))


class Verdict(Enum):
    """Tri-state verdict of the generic pipeline."""

    YES = "yes"
    NO = "no"
    UNKNOWN = "unknown"  # Some finite counterpart has no applicable rule


class UnibranchVerdict(Enum):
    """Unibranch answer at the minimal strata."""

    YES = "yes"  # Containment and every vertex condition hold
    NO = "no"  # Containment holds and some vertex condition fails
    SUFFICIENT_ONLY_YES = "sufficient-only-yes"  # Vertex conditions pass, containment fails
    UNDETERMINED = "undetermined"  # Neither criterion applies


class Smoothness(Enum):
    """Smoothness flag; undefined where no statement is available."""

    YES = "yes"
    NO = "no"
    UNDEFINED = "undefined"


class FiniteVerdict(Enum):
    """Normality of a finite counterpart stratum."""

    NORMAL = "normal"
    NOT_NORMAL = "not_normal"
    UNKNOWN = "unknown"
