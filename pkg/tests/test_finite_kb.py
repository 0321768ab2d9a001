"""Tests for jordanstrata.finite_kb module.

Tests cover:
- Closed-form rules for finite strata with trivial K'
- The one-dimensional shortcut
- Rules with diagram automorphisms
- Table lookups and input validation
"""

import pytest

from jordanstrata.affine_diagram import extended_diagram
from jordanstrata.errors import DimensionMismatchError, MalformedSubsetError, NotFiniteTypeError
from jordanstrata.finite_kb import (
    FiniteNormalityKB,
    FiniteResult,
    dim1_shortcut,
    finite_class,
    finite_normality,
)
from jordanstrata.models import CartanType, FiniteVerdict, NodePermutation, PermutationGroup
from jordanstrata.rootsys import finite_diagram
from jordanstrata.subdiagram import recognize_component


def _diagram(name: str):
    return finite_diagram(CartanType.parse(name))


def _flip_a2() -> PermutationGroup:
    flip = NodePermutation.from_cycles((1, 2), ((1, 2),))
    return PermutationGroup.generated((1, 2), [flip])


class TestFiniteResult:
    """Tests for FiniteResult."""

    def test_via_prefixes_rule(self):
        """via should record a reduction step."""
        result = FiniteResult(FiniteVerdict.NORMAL, "empty-set").via("point-factor")
        assert result.rule == "point-factor>empty-set"
        assert result.verdict is FiniteVerdict.NORMAL


class TestFiniteClass:
    """Tests for finite_class."""

    def test_a3_single_node(self):
        """The single nodes of A3 form one class."""
        assert finite_class(_diagram("A3"), (2,)) == ((1,), (2,), (3,))

    def test_infinite_diagram_raises(self):
        """An affine diagram raises NotFiniteTypeError."""
        diagram = extended_diagram(CartanType("A", 2)).diagram
        with pytest.raises(NotFiniteTypeError):
            finite_class(diagram, (0,))


class TestTrivialK:
    """Tests for finite_normality with K' trivial."""

    def test_empty_subset(self):
        """The whole space is normal."""
        result = finite_normality(_diagram("A3"), ())
        assert result.verdict is FiniteVerdict.NORMAL
        assert result.rule == "empty-set"

    def test_full_subset(self):
        """The origin is normal."""
        result = finite_normality(_diagram("A3"), (1, 2, 3))
        assert result.verdict is FiniteVerdict.NORMAL
        assert result.rule == "full-set"

    def test_non_singleton_class(self):
        """A subset with a non-singleton class is not normal."""
        result = finite_normality(_diagram("A3"), (1, 2))
        assert result.verdict is FiniteVerdict.NOT_NORMAL
        assert result.rule == "non-singleton-class"

    def test_line_singleton(self):
        """A line with a singleton class is normal."""
        result = finite_normality(_diagram("A3"), (1, 3))
        assert result.verdict is FiniteVerdict.NORMAL
        assert result.rule == "line-singleton"

    def test_classical_equal_blocks(self):
        """{1, 3, 5} in A5 splits the coordinates into equal pairs."""
        result = finite_normality(_diagram("A5"), (1, 3, 5))
        assert result.verdict is FiniteVerdict.NORMAL
        assert result.rule == "classical.A"

    def test_exceptional_table(self):
        """D4 inside E6 is not normal."""
        result = finite_normality(_diagram("E6"), (2, 3, 4, 5))
        assert result.verdict is FiniteVerdict.NOT_NORMAL


class TestDim1Shortcut:
    """Tests for dim1_shortcut."""

    def test_trivial_group_on_a2(self):
        """-w0 moves {1} to {2} and nothing moves it back."""
        assert not dim1_shortcut(_diagram("A2"), (1,), PermutationGroup.trivial((1, 2)))

    def test_flip_on_a2(self):
        """The diagram flip undoes -w0."""
        assert dim1_shortcut(_diagram("A2"), (1,), _flip_a2())

    def test_dimension_mismatch_raises(self):
        """Only subsets of size rank - 1 are accepted."""
        with pytest.raises(DimensionMismatchError):
            dim1_shortcut(_diagram("A3"), (1,), PermutationGroup.trivial((1, 2, 3)))


class TestWithAutomorphisms:
    """Tests for finite_normality with nontrivial K'."""

    def test_line_shortcut(self):
        """A line of A2 becomes normal under the flip."""
        result = finite_normality(_diagram("A2"), (1,), _flip_a2())
        assert result.verdict is FiniteVerdict.NORMAL
        assert result.rule == "line-shortcut"

    def test_without_flip_not_normal(self):
        """Without the flip the two walls of A2 are a non-singleton class."""
        result = finite_normality(_diagram("A2"), (1,))
        assert result.verdict is FiniteVerdict.NOT_NORMAL

    def test_component_swap(self):
        """Swapping two A2 factors reduces to the factor left partial."""
        diagram = _diagram("A5").induced((1, 2, 4, 5))
        swap = NodePermutation.from_cycles((1, 2, 4, 5), ((1, 4), (2, 5)))
        group = PermutationGroup.generated((1, 2, 4, 5), [swap])
        result = finite_normality(diagram, (1, 2), group)
        assert result.verdict is FiniteVerdict.NORMAL
        assert result.rule == "component-swap>empty-set"


class TestValidation:
    """Tests for input validation."""

    def test_subset_outside_diagram(self):
        """Nodes outside the diagram raise MalformedSubsetError."""
        with pytest.raises(MalformedSubsetError):
            finite_normality(_diagram("A2"), (7,))

    def test_group_on_other_nodes(self):
        """K' must act on the diagram nodes."""
        with pytest.raises(MalformedSubsetError):
            finite_normality(_diagram("A3"), (1,), _flip_a2())

    def test_affine_diagram_raises(self):
        """An affine diagram raises NotFiniteTypeError."""
        diagram = extended_diagram(CartanType("A", 2)).diagram
        with pytest.raises(NotFiniteTypeError):
            finite_normality(diagram, (0,))


class TestKnowledgeBase:
    """Tests for FiniteNormalityKB."""

    def test_default_has_entries(self):
        """The bundled knowledge base is not empty."""
        assert FiniteNormalityKB.default().entries

    def test_exceptional_lookup(self):
        """exceptional_lookup finds Bourbaki-labelled entries."""
        kb = FiniteNormalityKB.default()
        diagram = _diagram("E6")
        component = recognize_component(diagram, diagram.nodes)
        result = kb.exceptional_lookup(component, (2, 3, 4, 5))
        assert result is not None
        assert result.verdict is FiniteVerdict.NOT_NORMAL
        assert result.rule == "finite-table.E6.D4"

    def test_lookup_miss(self):
        """An empty knowledge base finds nothing."""
        diagram = _diagram("F4")
        component = recognize_component(diagram, diagram.nodes)
        assert FiniteNormalityKB(()).exceptional_lookup(component, (1, 2)) is None
