"""Recognition of induced subdiagrams.

This module provides:
- ComponentType: Cartan type of a connected subdiagram with its Bourbaki labels
- recognize_component / components_of: type recognition of node subsets
- pattern_of / parse_pattern / subsets_matching: pattern strings like "D4+2A1"
- ClassicalProfile / classical_profile: the coordinate block structure of a
  subset of a classical (finite or extended) diagram
"""

import logging
import re
from collections import Counter
from collections.abc import Iterable
from dataclasses import dataclass
from itertools import combinations, permutations

from jordanstrata.config import SHORT_PREFIX_FAMILIES
from jordanstrata.errors import InvalidCartanTypeError, MalformedSubsetError, NotFiniteTypeError
from jordanstrata.models import CartanType, NodeSet, node_set
from jordanstrata.rootsys import DynkinDiagram

logger = logging.getLogger(__name__)

# Canonical order of families inside pattern strings
_FAMILY_ORDER: dict[str, int] = {"E": 0, "F": 1, "D": 2, "C": 3, "B": 4, "G": 5, "A": 6}

_TERM_PATTERN = re.compile(r"^(\d*)(~|tilde)?([A-Ga-g])(\d+)$")

EMPTY_PATTERN_NAMES: frozenset[str] = frozenset({"", "empty", "0", "∅"})


@dataclass(frozen=True)
class ComponentType:
    """Cartan type of a connected subdiagram.

    Attributes:
        cartan_type: The finite type of the component.
        labels: labels[k] is the ambient node carrying Bourbaki index k + 1.
        short: True for a type A component made of short roots of a
            non-simply-laced diagram.
    """

    cartan_type: CartanType
    labels: NodeSet
    short: bool = False

    def name(self, mark_short: bool = False) -> str:
        """Return the component name, e.g. "D4" or "~A2"."""
        prefix = "~" if mark_short and self.short else ""
        return f"{prefix}{self.cartan_type}"

    def bourbaki_index(self, node: int) -> int:
        """Return the Bourbaki index (1-based) of an ambient node."""
        return self.labels.index(node) + 1


def diagram_automorphisms(cartan_type: CartanType) -> list[tuple[int, ...]]:
    """Automorphisms of the Bourbaki diagram as maps on 1..n (index k -> a[k-1])."""
    family, n = cartan_type.family, cartan_type.rank
    identity = tuple(range(1, n + 1))
    if family == "A" and n >= 2:
        return [identity, tuple(reversed(identity))]
    if family == "D" and n == 4:
        result = []
        for image in permutations((1, 3, 4)):
            mapping = {1: image[0], 2: 2, 3: image[1], 4: image[2]}
            result.append(tuple(mapping[k] for k in identity))
        return result
    if family == "D":
        return [identity, (*identity[:-2], n, n - 1)]
    if family == "E" and n == 6:
        return [identity, (6, 2, 5, 4, 3, 1)]
    return [identity]


def _arm(diagram: DynkinDiagram, within: set[int], start: int, previous: int) -> list[int]:
    arm = [start]
    while True:
        onward = [j for j in diagram.neighbours(arm[-1], within) if j not in (previous, *arm)]
        if not onward:
            return arm
        previous = arm[-1]
        arm.append(onward[0])


def _path_order(diagram: DynkinDiagram, nodes: NodeSet, start: int) -> list[int]:
    return _arm(diagram, set(nodes), start, -1)


def _raw_labelling(diagram: DynkinDiagram, nodes: NodeSet) -> tuple[CartanType, list[int]]:
    within = set(nodes)
    size = len(nodes)
    if size == 1:
        return CartanType("A", 1), list(nodes)

    degrees = {i: len(diagram.neighbours(i, within)) for i in nodes}
    bonds = {(i, j): diagram.bond(i, j) for i, j in combinations(nodes, 2) if diagram.bond(i, j) != 2}
    labels = set(bonds.values())

    if 6 in labels:
        short, long_ = sorted(nodes, key=diagram.norm)
        return CartanType("G", 2), [short, long_]
    if 4 in labels:
        if size == 2:
            long_, short = sorted(nodes, key=lambda i: -diagram.norm(i))
            return CartanType("B", 2), [long_, short]
        u, v = next(pair for pair, m in bonds.items() if m == 4)
        ends = [i for i in nodes if degrees[i] == 1]
        end_in_double = [e for e in ends if e in (u, v)]
        if end_in_double:
            end = end_in_double[0]
            other = next(e for e in ends if e != end)
            order = _path_order(diagram, nodes, other)
            family = "B" if diagram.norm(end) < max(diagram.norm(i) for i in nodes) else "C"
            return CartanType(family, size), order
        longest = max(diagram.norm(i) for i in nodes)
        start = next(e for e in ends if diagram.norm(e) == longest)
        return CartanType("F", 4), _path_order(diagram, nodes, start)

    branch = [i for i in nodes if degrees[i] == 3]
    if not branch:
        start = min(i for i in nodes if degrees[i] == 1)
        return CartanType("A", size), _path_order(diagram, nodes, start)

    centre = branch[0]
    arms = sorted(
        (_arm(diagram, within, j, centre) for j in diagram.neighbours(centre, within)),
        key=len,
    )
    lengths = tuple(len(a) for a in arms)
    if lengths[0] == 1 and lengths[1] == 1:
        long_arm = list(reversed(arms[2]))
        return CartanType("D", size), [*long_arm, centre, arms[0][0], arms[1][0]]
    if lengths in ((1, 2, 2), (1, 2, 3), (1, 2, 4)):
        short_arm, middle, far = arms
        return CartanType("E", size), [
            middle[1], short_arm[0], middle[0], centre, *far,
        ]
    raise NotFiniteTypeError(f"Subdiagram on {nodes} is not of finite type")


def recognize_component(diagram: DynkinDiagram, nodes: Iterable[int]) -> ComponentType:
    """Identify the type of a connected finite subdiagram.

    Among equivalent Bourbaki labellings the lexicographically least tuple of
    ambient nodes is returned, so the result is canonical.

    Args:
        diagram: Ambient diagram.
        nodes: A connected node subset of finite type.

    Returns:
        The component type and labelling.

    Raises:
        NotFiniteTypeError: If the subdiagram is not of finite type.
    """
    subset = node_set(nodes)
    cartan_type, raw = _raw_labelling(diagram, subset)
    candidates = [tuple(raw[k - 1] for k in aut) for aut in diagram_automorphisms(cartan_type)]
    labels = min(candidates)
    norms = {diagram.norm(i) for i in diagram.nodes}
    short = cartan_type.family == "A" and len(norms) > 1 and diagram.norm(subset[0]) == min(norms)
    return ComponentType(cartan_type, labels, short)


def components_of(diagram: DynkinDiagram, nodes: Iterable[int]) -> tuple[ComponentType, ...]:
    """Recognize every connected component of the subdiagram on nodes."""
    return tuple(recognize_component(diagram, c) for c in diagram.components(nodes))


def _term_key(name: str) -> tuple[int, int, int]:
    short = name.startswith("~")
    body = name.lstrip("~")
    return (_FAMILY_ORDER[body[0]], -int(body[1:]), int(short))


def format_pattern(counts: Counter[str]) -> str:
    """Render a component multiset as a pattern string ("empty" for none)."""
    terms = []
    for name in sorted(counts, key=_term_key):
        multiplicity = counts[name]
        terms.append(f"{multiplicity if multiplicity > 1 else ''}{name}")
    return "+".join(terms) if terms else "empty"


def pattern_counter(
    diagram: DynkinDiagram, nodes: Iterable[int], mark_short: bool = False
) -> Counter[str]:
    """Return the multiset of component names of a subset."""
    return Counter(c.name(mark_short) for c in components_of(diagram, nodes))


def marks_short_roots(cartan_type: CartanType) -> bool:
    """True if patterns for this ambient type carry the "~" prefix."""
    return cartan_type.family in SHORT_PREFIX_FAMILIES


def pattern_of(diagram: DynkinDiagram, nodes: Iterable[int], mark_short: bool = False) -> str:
    """Return the pattern string of a subset, e.g. "D4+2A1" or "2A1+~A1"."""
    return format_pattern(pattern_counter(diagram, nodes, mark_short))


def parse_pattern(text: str) -> Counter[str]:
    """Parse a pattern string into a component multiset.

    Accepts "+"-separated terms such as "2A1", "~A2" or "tildeA1"; "empty"
    denotes the empty subset. C2 is read as B2.

    Raises:
        MalformedSubsetError: If a term cannot be parsed.
    """
    cleaned = text.strip()
    if cleaned.lower() in EMPTY_PATTERN_NAMES:
        return Counter()
    counts: Counter[str] = Counter()
    for raw in cleaned.split("+"):
        match = _TERM_PATTERN.match(raw.strip())
        if match is None:
            raise MalformedSubsetError(f"Cannot parse pattern term {raw!r} in {text!r}")
        multiplicity = int(match.group(1)) if match.group(1) else 1
        family, rank = match.group(3).upper(), int(match.group(4))
        if (family, rank) == ("C", 2):
            family = "B"
        try:
            CartanType(family, rank)
        except InvalidCartanTypeError as exc:
            raise MalformedSubsetError(f"Invalid component {raw!r}: {exc}") from exc
        prefix = "~" if match.group(2) else ""
        counts[f"{prefix}{family}{rank}"] += multiplicity
    return counts


def subsets_matching(
    diagram: DynkinDiagram,
    candidates: Iterable[NodeSet],
    pattern: str | Counter[str],
    mark_short: bool = False,
) -> list[NodeSet]:
    """Return the candidate subsets whose pattern equals the given one."""
    wanted = parse_pattern(pattern) if isinstance(pattern, str) else pattern
    return [s for s in candidates if pattern_counter(diagram, s, mark_short) == wanted]


@dataclass(frozen=True)
class ClassicalProfile:
    """Coordinate block structure of a subset of a classical diagram.

    In the usual e_1..e_N coordinates the roots of the subset link
    coordinates into blocks. A block is special when it is cut down by a
    root 2e_i, e_i, the affine roots 1 - 2e_1, or both roots e_i - e_j,
    e_i + e_j of a fork.

    Attributes:
        head: Size of the special block at coordinate 1 (extended B, C, D only).
        tail: Size of the special block at coordinate N.
        blocks: Sizes of the ordinary blocks, in coordinate order.
    """

    head: int
    tail: int
    blocks: tuple[int, ...]

    @property
    def equal_blocks(self) -> bool:
        """True when all ordinary blocks have the same size."""
        return len(set(self.blocks)) <= 1

    @property
    def block_size(self) -> int | None:
        """The common block size, or None when blocks are absent or unequal."""
        if not self.blocks or not self.equal_blocks:
            return None
        return self.blocks[0]


def _classical_roots(
    family: str, n: int, extended: bool
) -> tuple[int, dict[int, tuple[str, tuple[int, ...]]], list[tuple[int, int]]]:
    """Root shapes per node: ("link", (i, j)) or ("kill", (i,)), plus fork pairs."""
    size = n + 1 if family == "A" else n
    roots: dict[int, tuple[str, tuple[int, ...]]] = {
        k: ("link", (k, k + 1)) for k in range(1, n)
    }
    forks: list[tuple[int, int]] = []
    if family == "A":
        roots[n] = ("link", (n, n + 1))
    elif family in ("B", "C"):
        roots[n] = ("kill", (n,))
    else:
        roots[n] = ("link", (n - 1, n))
        forks.append((n - 1, n))
    if extended:
        if family == "A":
            roots[0] = ("link", (size, 1))
        elif family == "C":
            roots[0] = ("kill", (1,))
        else:
            roots[0] = ("link", (1, 2))
            forks.append((0, 1))
    return size, roots, forks


def classical_profile(
    family: str, n: int, subset: Iterable[int], extended: bool = True
) -> ClassicalProfile:
    """Compute the block structure of a subset of a Bourbaki-labelled classical diagram.

    Args:
        family: "A", "B", "C" or "D".
        n: Rank of the finite type.
        subset: Node indices (0..n when extended, 1..n otherwise).
        extended: Whether node 0 is the affine node.

    Returns:
        The profile.
    """
    size, roots, forks = _classical_roots(family, n, extended)
    chosen = set(subset)
    parent = list(range(size + 1))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    special: set[int] = set()
    for node in sorted(chosen):
        kind, coords = roots[node]
        if kind == "link":
            parent[find(coords[0])] = find(coords[1])
        else:
            special.add(coords[0])
    for a, b in forks:
        if a in chosen and b in chosen:
            special.add(roots[b][1][0])

    groups: dict[int, list[int]] = {}
    for coord in range(1, size + 1):
        groups.setdefault(find(coord), []).append(coord)
    special_roots = {find(c) for c in special}

    head = tail = 0
    blocks = []
    for root, coords in sorted(groups.items(), key=lambda item: item[1][0]):
        if root not in special_roots:
            blocks.append(len(coords))
        elif extended and family != "A" and 1 in coords:
            head = len(coords)
        else:
            tail = len(coords)
    return ClassicalProfile(head, tail, tuple(blocks))
