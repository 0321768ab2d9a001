"""Configuration constants and data locations for jordanstrata."""

from pathlib import Path
from typing import Literal

# Geometric oracle
DEFAULT_MAX_LEN: int = 15  # Word length of the affine Weyl group ball
STABILITY_STEP: int = 2  # Results must agree with the ball of max_len - 2
BALL_SIZE_LIMIT: int = 200_000  # Elements kept before giving up

# Invariant-theory oracle
INVARIANTS_MAX_RANK: int = 4
INVARIANTS_DEFAULT_DEGREE: int = 12
INVARIANTS_MAX_DEGREE: int = 12
MOLIEN_MAX_DEGREE: int = 30
GROUP_ORDER_LIMIT: int = 2000  # F4 has 1152 elements

# Families whose short-root type A components carry the "~" prefix
SHORT_PREFIX_FAMILIES: tuple[str, ...] = ("F", "G")

# Schema version of the expected tables data file
EXPECTED_TABLES_VERSION: int = 1

# Output formats accepted by the CLI
OutputFormat = Literal["json", "markdown", "csv"]

# Properties a table can be regenerated for
TableProperty = Literal["codim1", "normal"]


def get_data_dir() -> Path:
    """Get the directory holding packaged data files.

    Returns:
        Path to jordanstrata/data/
    """
    return Path(__file__).resolve().parent / "data"


def get_expected_tables_file() -> Path:
    """Get the path of the transcribed expected tables.

    Returns:
        Path to jordanstrata/data/expected_tables.json
    """
    return get_data_dir() / "expected_tables.json"
