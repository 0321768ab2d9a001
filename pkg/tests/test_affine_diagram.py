"""Tests for jordanstrata.affine_diagram module.

Tests cover:
- Attachment of the affine node and the marks
- Finiteness of parabolic subsets
- P/Q and the isogeny selectors
- Node and face stabilizers
"""

import pytest

from jordanstrata.affine_diagram import (
    d_type_generators,
    extended_diagram,
    face_stabilizer,
    fundamental_group,
    fundamental_group_order,
    isogeny_actions,
    node_stabilizer,
    parabolic_is_finite,
    selectors_for,
)
from jordanstrata.errors import InvalidSubgroupError, MalformedSubsetError
from jordanstrata.models import CartanType
from jordanstrata.rootsys import INFINITE_BOND


def _ext(name: str):
    return extended_diagram(CartanType.parse(name))


class TestExtendedDiagram:
    """Tests for extended_diagram."""

    def test_nodes_and_marks(self):
        """Node 0 is added with mark 1."""
        extdiag = _ext("G2")
        assert extdiag.nodes == (0, 1, 2)
        assert extdiag.marks == (1, 3, 2)
        assert extdiag.mark(1) == 3
        assert extdiag.rank == 2

    @pytest.mark.parametrize(
        "name,neighbours",
        [
            ("A2", (1, 2)),
            ("B3", (2,)),
            ("C3", (1,)),
            ("D5", (2,)),
            ("E6", (2,)),
            ("E7", (1,)),
            ("E8", (8,)),
            ("F4", (1,)),
            ("G2", (2,)),
        ],
    )
    def test_affine_node_attachment(self, name, neighbours):
        """The affine node attaches where the highest root pairs nontrivially."""
        assert _ext(name).diagram.neighbours(0) == neighbours

    def test_affine_c_has_long_affine_node(self):
        """In extended C_n the affine node is long and doubly bonded to node 1."""
        diagram = _ext("C3").diagram
        assert diagram.norm(0) == 4
        assert diagram.bond(0, 1) == 4

    def test_affine_a1_has_infinite_bond(self):
        """Extended A1 has two nodes joined by an infinite bond."""
        extdiag = _ext("A1")
        assert extdiag.diagram.bond(0, 1) == INFINITE_BOND
        assert not parabolic_is_finite(extdiag, (0, 1))
        assert parabolic_is_finite(extdiag, (0,))

    def test_edges(self):
        """Extended A2 is a triangle of simple bonds."""
        assert _ext("A2").edges() == ((0, 1, 3), (0, 2, 3), (1, 2, 3))

    def test_str(self):
        """str should prefix the type with a tilde."""
        assert str(_ext("A2")) == "~A2"

    def test_check_nodes(self):
        """check_nodes should canonicalize and reject out-of-range nodes."""
        extdiag = _ext("A2")
        assert extdiag.check_nodes([2, 0, 2]) == (0, 2)
        with pytest.raises(MalformedSubsetError):
            extdiag.check_nodes((0, 5))


class TestParabolicIsFinite:
    """Tests for parabolic_is_finite."""

    def test_all_nodes_infinite(self):
        """The full node set never generates a finite group."""
        for name in ("A2", "B3", "G2", "E6"):
            extdiag = _ext(name)
            assert not parabolic_is_finite(extdiag, extdiag.nodes)

    def test_proper_subsets_finite(self):
        """Every proper subset of an irreducible affine diagram is finite."""
        extdiag = _ext("B3")
        assert parabolic_is_finite(extdiag, (0, 1, 2))
        assert parabolic_is_finite(extdiag, ())


class TestFundamentalGroup:
    """Tests for fundamental_group."""

    @pytest.mark.parametrize(
        "name,factors",
        [("A3", (4,)), ("B4", (2,)), ("C3", (2,)), ("D4", (2, 2)), ("D5", (4,)),
         ("E6", (3,)), ("E7", (2,)), ("E8", ()), ("F4", ()), ("G2", ())],
    )
    def test_factors(self, name, factors):
        """P/Q should have the known cyclic decomposition."""
        assert fundamental_group(CartanType.parse(name)) == factors

    def test_order(self):
        """fundamental_group_order multiplies the factors."""
        assert fundamental_group_order(CartanType("D", 6)) == 4
        assert fundamental_group_order(CartanType("E", 8)) == 1


class TestIsogenyActions:
    """Tests for isogeny_actions and selectors_for."""

    @pytest.mark.parametrize(
        "name,selector,order",
        [
            ("A3", "sc", 1),
            ("A3", "Z2", 2),
            ("A3", "adjoint", 4),
            ("A3", "PGL", 4),
            ("B3", "SO", 2),
            ("C3", "PSp", 2),
            ("D4", "SO", 2),
            ("D4", "HSpin", 2),
            ("D4", "HSpin'", 2),
            ("D4", "PSO", 4),
            ("D5", "PSO", 4),
            ("E6", "adjoint", 3),
            ("E7", "adjoint", 2),
            ("E8", "adjoint", 1),
            ("G2", "adjoint", 1),
        ],
    )
    def test_orders(self, name, selector, order):
        """Each selector should build a subgroup of the expected order."""
        K = isogeny_actions(CartanType.parse(name), selector)
        assert K.order == order
        assert K.selector == selector

    @pytest.mark.parametrize(
        "name,selector",
        [("A3", "Z3"), ("D5", "HSpin"), ("F4", "SO"), ("B3", "PSp"), ("E6", "bogus")],
    )
    def test_invalid_selectors(self, name, selector):
        """Selectors naming no subgroup should raise InvalidSubgroupError."""
        with pytest.raises(InvalidSubgroupError):
            isogeny_actions(CartanType.parse(name), selector)

    def test_invalid_selector_lists_choices(self):
        """The error names the selectors valid for the type."""
        with pytest.raises(InvalidSubgroupError, match="choose from sc, SO, PSO"):
            isogeny_actions(CartanType("D", 5), "HSpin")

    def test_sc_is_trivial(self):
        """The simply connected selector gives the trivial action."""
        K = isogeny_actions(CartanType("E", 7), "sc")
        assert K.is_trivial
        assert K.orbit((1, 3)) == frozenset({(1, 3)})

    def test_e6_adjoint_rotates(self):
        """The E6 adjoint action is the order-3 rotation (1 6 0)(3 5 2)."""
        K = isogeny_actions(CartanType("E", 6), "adjoint")
        generator = K.elements[1]
        images = {generator(0), generator(1), generator(6)}
        assert images == {0, 1, 6}
        assert generator(4) == 4

    def test_e7_adjoint_swaps_ends(self):
        """The E7 adjoint action swaps the affine node with node 7."""
        K = isogeny_actions(CartanType("E", 7), "adjoint")
        assert K.elements[1].as_dict() == {0: 7, 1: 6, 2: 2, 3: 5, 4: 4, 5: 3, 6: 1, 7: 0}

    def test_selectors_for(self):
        """selectors_for lists the distinct subgroups."""
        assert selectors_for(CartanType("A", 5)) == ("sc", "Z2", "Z3", "adjoint")
        assert selectors_for(CartanType("D", 4)) == ("sc", "SO", "HSpin", "HSpin'", "PSO")
        assert selectors_for(CartanType("D", 5)) == ("sc", "SO", "PSO")
        assert selectors_for(CartanType("F", 4)) == ("sc",)

    def test_every_listed_selector_builds(self):
        """Every selector from selectors_for should pass validation."""
        for name in ("A1", "A3", "A5", "B3", "C3", "D4", "D5", "D6", "E6", "E7", "G2"):
            cartan_type = CartanType.parse(name)
            for selector in selectors_for(cartan_type):
                K = isogeny_actions(cartan_type, selector)
                assert fundamental_group_order(cartan_type) % K.order == 0

    def test_d_type_generators(self):
        """sigma exists only for odd n and has order 4."""
        assert "sigma" not in d_type_generators(4)
        sigma = d_type_generators(5)["sigma"]
        assert sigma.as_dict() == {0: 5, 1: 4, 2: 3, 3: 2, 4: 0, 5: 1}
        assert sigma.compose(sigma).compose(sigma).compose(sigma).is_identity
        assert not sigma.compose(sigma).is_identity


class TestStabilizers:
    """Tests for node_stabilizer and face_stabilizer."""

    def test_node_stabilizer_of_rotation(self):
        """No nontrivial rotation of extended A2 fixes a node."""
        K = isogeny_actions(CartanType("A", 2), "adjoint")
        assert node_stabilizer(K, 0).order == 1

    def test_node_stabilizer_of_branch(self):
        """Every element of the D4 action fixes the branch node."""
        K = isogeny_actions(CartanType("D", 4), "PSO")
        assert node_stabilizer(K, 2).order == 4

    def test_face_stabilizer(self):
        """Fixing node 0 of extended D4 leaves only the identity."""
        K = isogeny_actions(CartanType("D", 4), "PSO")
        assert face_stabilizer(K, (0,)).order == 1
        assert face_stabilizer(K, (2,)).order == 4

    def test_face_stabilizer_needs_a_vertex(self):
        """An empty vertex list should raise ValueError."""
        K = isogeny_actions(CartanType("D", 4), "PSO")
        with pytest.raises(ValueError):
            face_stabilizer(K, ())
