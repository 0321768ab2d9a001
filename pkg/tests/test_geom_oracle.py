"""Tests for jordanstrata.geom_oracle module.

Tests cover:
- The alcove model and word-length balls
- Flats of alcove faces
- Sigma read off the ball, compared with Coxeter classes
- Isogeny matrices, the Omega test and strata counts
"""

import logging
from functools import lru_cache

import numpy as np
import pytest

from jordanstrata.affine_diagram import extended_diagram, isogeny_actions, selectors_for
from jordanstrata.classify import classify_generic
from jordanstrata.conditions import vertex_condition
from jordanstrata.config import BALL_SIZE_LIMIT, DEFAULT_MAX_LEN
from jordanstrata.coxclass import coxeter_class, finite_subsets, strata
from jordanstrata.errors import BudgetExceededError, NotFiniteTypeError
from jordanstrata.geom_oracle import (
    AffineIsometry,
    build_euclidean_model,
    flat_of,
    geometric_strata_count,
    group_ball,
    isogeny_matrices,
    maps_walls_into_arrangement,
    omega_at_vertex,
    sigma_geometric,
)
from jordanstrata.models import CartanType


def _model(name: str):
    return build_euclidean_model(CartanType.parse(name))


SMALL_TYPES = ["A1", "A2", "A3", "C2", "B3", "C3", "G2"]


@lru_cache(maxsize=None)
def _default_ball(name: str) -> list[AffineIsometry]:
    return group_ball(_model(name), DEFAULT_MAX_LEN)


def _isogenies(names: list[str]) -> list[tuple[str, str]]:
    return [(name, s) for name in names for s in selectors_for(CartanType.parse(name))]


class TestEuclideanModel:
    """Tests for build_euclidean_model."""

    def test_generators_are_involutions(self):
        """Every generator squares to the identity."""
        model = _model("G2")
        identity = np.eye(3, dtype=np.int64)
        for generator in model.generators:
            assert np.array_equal(generator @ generator, identity)

    def test_walls_vanish_on_opposite_vertices(self):
        """Wall i contains every vertex except x_i."""
        model = _model("B3")
        values = model.walls @ model.vertices
        for i in range(4):
            for j in range(4):
                assert (values[i, j] == 0) == (i != j)

    def test_generators_fix_their_walls(self):
        """s_i fixes the vertices on wall i."""
        model = _model("A2")
        for i, generator in enumerate(model.generators):
            for j in range(3):
                if j != i:
                    column = model.vertices[:, j]
                    assert np.array_equal(generator @ column, column)


class TestGroupBall:
    """Tests for group_ball."""

    def test_affine_a1_length_3(self):
        """The infinite dihedral group has 7 elements of length at most 3."""
        assert len(group_ball(_model("A1"), 3)) == 7

    def test_length_zero(self):
        """Length 0 gives the identity only."""
        ball = group_ball(_model("A2"), 0)
        assert len(ball) == 1
        assert ball[0].word == ()

    def test_negative_length_raises(self):
        """A negative length raises ValueError."""
        with pytest.raises(ValueError):
            group_ball(_model("A1"), -1)

    def test_limit_raises(self):
        """A ball over the limit raises BudgetExceededError."""
        with pytest.raises(BudgetExceededError):
            group_ball(_model("A2"), 10, limit=20)

    def test_inverse_is_stored(self):
        """Each element carries its inverse."""
        model = _model("B2")
        for element in group_ball(model, 4):
            assert np.array_equal(element.matrix @ element.inverse, np.eye(3, dtype=np.int64))


class TestFlat:
    """Tests for flat_of."""

    def test_dimensions(self):
        """A wall is a line, a vertex is a point, no wall is the plane."""
        model = _model("A2")
        assert flat_of(model, (1,)).dimension == 1
        assert flat_of(model, (0, 1)).dimension == 0
        assert flat_of(model, ()).dimension == 2

    def test_infinite_raises(self):
        """All walls together raise NotFiniteTypeError."""
        with pytest.raises(NotFiniteTypeError):
            flat_of(_model("A2"), (0, 1, 2))

    def test_contains(self):
        """The wall opposite x_0 contains x_1 and its own anchor, but not x_0."""
        flat = flat_of(_model("A2"), (0,))
        assert flat.contains((1, 0))
        assert flat.contains(flat.anchor)
        assert not flat.contains((0, 0))


class TestSigmaGeometric:
    """Tests for sigma_geometric."""

    def test_walls_of_affine_a2(self):
        """Every wall of extended A2 lies over the alcove in the orbit of wall 1."""
        sigma = sigma_geometric(_model("A2"), (1,), 6)
        assert sigma.members == frozenset({(0,), (1,), (2,)})
        assert sigma.stable

    def test_short_wall_of_affine_g2(self):
        """The short wall of extended G2 is alone."""
        sigma = sigma_geometric(_model("G2"), (1,), 8)
        assert sigma.members == frozenset({(1,)})

    def test_unstable_warns(self, caplog):
        """A ball too short to compare logs a warning."""
        with caplog.at_level(logging.WARNING):
            sigma = sigma_geometric(_model("G2"), (1,), 1)
        assert not sigma.stable
        assert "not stable" in caplog.text

    def test_infinite_raises(self):
        """All walls together raise NotFiniteTypeError."""
        with pytest.raises(NotFiniteTypeError):
            sigma_geometric(_model("A1"), (0, 1), 2)

    def test_isogeny_saturates(self):
        """With the rotation of extended A2 the vertices merge."""
        cartan_type = CartanType("A", 2)
        K = isogeny_actions(cartan_type, "adjoint")
        sigma = sigma_geometric(build_euclidean_model(cartan_type), (0, 1), 4, K)
        assert sigma.members == frozenset({(0, 1), (0, 2), (1, 2)})

    @pytest.mark.parametrize("name", SMALL_TYPES)
    def test_matches_coxeter_class(self, name):
        """The geometric Sigma at the default length is stable and equals the Coxeter class."""
        model = _model(name)
        for subset in finite_subsets(model.extdiag):
            sigma = sigma_geometric(model, subset, DEFAULT_MAX_LEN, ball=_default_ball(name))
            assert sigma.members == frozenset(coxeter_class(model.extdiag, subset).members)
            assert sigma.stable, subset


class TestArrangement:
    """Tests for maps_walls_into_arrangement."""

    def test_ball_elements_preserve_arrangement(self):
        """Affine Weyl group elements carry walls onto root hyperplanes."""
        model = _model("B2")
        assert all(maps_walls_into_arrangement(model, e) for e in group_ball(model, 5))

    def test_shear_is_rejected(self):
        """A shear moves wall 0 off the arrangement."""
        matrix = np.array([[1, -1, 0], [0, 1, 0], [0, 0, 1]], dtype=np.int64)
        inverse = np.array([[1, 1, 0], [0, 1, 0], [0, 0, 1]], dtype=np.int64)
        shear = AffineIsometry(matrix, inverse, ())
        assert not maps_walls_into_arrangement(_model("A2"), shear)


class TestIsogenyMatrices:
    """Tests for isogeny_matrices."""

    def test_vertices_permuted(self):
        """Each matrix sends x_i to x_k(i)."""
        cartan_type = CartanType("A", 2)
        model = build_euclidean_model(cartan_type)
        K = isogeny_actions(cartan_type, "adjoint")
        realized = isogeny_matrices(model, K)
        assert len(realized) == 3
        for k, matrix, inverse in realized:
            for i in range(3):
                assert np.array_equal(matrix @ model.vertices[:, i], model.vertices[:, k(i)])
            assert np.array_equal(matrix @ inverse, np.eye(3, dtype=np.int64))


class TestOmega:
    """Tests for omega_at_vertex."""

    def test_unibranch_without_vertex_condition(self):
        """At x_0 the walls of extended A2 give one branch although two faces meet there."""
        cartan_type = CartanType("A", 2)
        model = build_euclidean_model(cartan_type)
        K = isogeny_actions(cartan_type)
        result = omega_at_vertex(model, K, (1,), 0, 6)
        assert result.unibranch
        assert result.stable
        assert len(result.omega) == 3
        assert not vertex_condition(((0,), (1,), (2,)), K, 0)


class TestStrataCount:
    """Tests for geometric_strata_count."""

    def test_affine_a1(self):
        """Extended A1 has 3 strata, 2 for the adjoint group."""
        cartan_type = CartanType("A", 1)
        model = build_euclidean_model(cartan_type)
        assert geometric_strata_count(model, isogeny_actions(cartan_type), 6) == (3, True)
        count, _ = geometric_strata_count(model, isogeny_actions(cartan_type, "adjoint"), 6)
        assert count == 2

    def test_affine_a2(self):
        """Extended A2 has 5 strata, 3 for the adjoint group."""
        cartan_type = CartanType("A", 2)
        model = build_euclidean_model(cartan_type)
        count, _ = geometric_strata_count(model, isogeny_actions(cartan_type), 6)
        assert count == 5
        count, _ = geometric_strata_count(model, isogeny_actions(cartan_type, "adjoint"), 6)
        assert count == 3

    @pytest.mark.parametrize("name,selector", _isogenies(SMALL_TYPES))
    def test_every_isogeny_matches_strata(self, name, selector):
        """Orbits of flats under the ball and K are exactly the enumerated strata."""
        cartan_type = CartanType.parse(name)
        K = isogeny_actions(cartan_type, selector)
        expected = len(strata(extended_diagram(cartan_type), K))
        assert geometric_strata_count(_model(name), K, DEFAULT_MAX_LEN) == (expected, True)


class TestOmegaSweep:
    """Omega at every minimal vertex against the combinatorial vertex condition."""

    @pytest.mark.parametrize("name,selector", _isogenies(SMALL_TYPES))
    def test_agrees_with_vertex_condition(self, name, selector):
        """Equal when codimension 1 holds; the vertex condition always implies unibranch."""
        cartan_type = CartanType.parse(name)
        extdiag = extended_diagram(cartan_type)
        K = isogeny_actions(cartan_type, selector)
        model = _model(name)
        for stratum in strata(extdiag, K):
            report = classify_generic(stratum)
            for j, holds in report.vertex_conditions:
                omega = omega_at_vertex(
                    model, K, report.rep, j, DEFAULT_MAX_LEN, ball=_default_ball(name)
                )
                if holds:
                    assert omega.unibranch, (report.rep, j)
                if report.normal_codim1:
                    assert omega.unibranch == holds, (report.rep, j)


class TestBallBudget:
    """The default ball length stays inside the default budget."""

    @pytest.mark.parametrize("name", ["A1", "A2", "A3", "B2", "B3", "C2", "C3", "G2"])
    def test_default_length_fits(self, name):
        """Ranks up to 3 at the default length keep fewer elements than the limit."""
        ball = _default_ball(name)
        assert len(ball) <= BALL_SIZE_LIMIT
        lengths = [element.length for element in ball]
        assert lengths == sorted(lengths)
        assert lengths[-1] <= DEFAULT_MAX_LEN
