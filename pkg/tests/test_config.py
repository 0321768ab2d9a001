"""Tests for jordanstrata.config module.

Tests cover:
- Budget constants
- Data file locations
"""


class TestConstants:
    """Tests for configuration constants."""

    def test_stability_step_below_default_length(self):
        """The stability check needs a shorter ball than the default one."""
        from jordanstrata.config import DEFAULT_MAX_LEN, STABILITY_STEP

        assert 0 < STABILITY_STEP < DEFAULT_MAX_LEN

    def test_invariant_bounds(self):
        """The default degree must be within the maximal degree."""
        from jordanstrata.config import (
            INVARIANTS_DEFAULT_DEGREE,
            INVARIANTS_MAX_DEGREE,
            INVARIANTS_MAX_RANK,
            MOLIEN_MAX_DEGREE,
        )

        assert INVARIANTS_DEFAULT_DEGREE <= INVARIANTS_MAX_DEGREE
        assert INVARIANTS_MAX_DEGREE <= MOLIEN_MAX_DEGREE
        assert INVARIANTS_MAX_RANK == 4

    def test_group_order_limit_covers_f4(self):
        """The Weyl group of F4 (order 1152) must fit the group budget."""
        from jordanstrata.config import GROUP_ORDER_LIMIT

        assert GROUP_ORDER_LIMIT >= 1152


class TestPaths:
    """Tests for data file locations."""

    def test_data_dir_is_inside_package(self):
        """get_data_dir should point at jordanstrata/data."""
        from jordanstrata.config import get_data_dir

        data_dir = get_data_dir()
        assert data_dir.name == "data"
        assert data_dir.parent.name == "jordanstrata"

    def test_expected_tables_file_exists(self):
        """The bundled tables should ship with the package."""
        from jordanstrata.config import get_expected_tables_file

        path = get_expected_tables_file()
        assert path.name == "expected_tables.json"
        assert path.is_file()
