"""Typed access to the bundled table data.

This module provides:
- FiniteTableEntry: one row of the exceptional finite normality table
- TableRow / AffineTable: transcribed lists of codim-1 and normal strata
- TableData / load_table_data: the parsed data file
"""

import json
import logging
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Any

from jordanstrata.config import EXPECTED_TABLES_VERSION, get_expected_tables_file
from jordanstrata.errors import InvalidCartanTypeError, TableDataError
from jordanstrata.models import CartanType, FiniteVerdict, NodeSet, node_set

logger = logging.getLogger(__name__)

ROW_KINDS: frozenset[str] = frozenset({"empty", "point", "pattern", "nodes"})
TABLE_PROPERTIES: frozenset[str] = frozenset({"codim1", "normal"})


@dataclass(frozen=True)
class FiniteTableEntry:
    """Normality of a finite stratum X(H_J, L) with a singleton Coxeter class.

    Attributes:
        cartan_type: Finite type of the (irreducible) diagram.
        nodes: The subset J in Bourbaki labels.
        verdict: Normal or not normal.
        source: Provenance rule id.
    """

    cartan_type: CartanType
    nodes: NodeSet
    verdict: FiniteVerdict
    source: str


@dataclass(frozen=True)
class TableRow:
    """One row of a transcribed table.

    Attributes:
        kind: "empty", "point", "pattern" or "nodes".
        pattern: Component pattern for kind "pattern".
        nodes: Explicit subset for kind "nodes".
        note: Free text kept from the transcription.
    """

    kind: str
    pattern: str = ""
    nodes: NodeSet = ()
    note: str = ""


@dataclass(frozen=True)
class AffineTable:
    """Transcribed list of strata with a property, for K = 1.

    Attributes:
        cartan_type: Exceptional finite type.
        prop: "codim1" or "normal".
        rows: The rows; a subset is listed when some row matches it.
        source: Provenance rule id.
    """

    cartan_type: CartanType
    prop: str
    rows: tuple[TableRow, ...]
    source: str


@dataclass(frozen=True)
class TableData:
    """Everything in the data file."""

    finite_entries: tuple[FiniteTableEntry, ...]
    affine_tables: tuple[AffineTable, ...]

    def affine_table(self, cartan_type: CartanType, prop: str) -> AffineTable | None:
        """Return the table for a type and property, if transcribed."""
        for table in self.affine_tables:
            if table.cartan_type == cartan_type and table.prop == prop:
                return table
        return None

    def transcribed_types(self) -> tuple[CartanType, ...]:
        """Return the types having at least one affine table, sorted."""
        return tuple(sorted({t.cartan_type for t in self.affine_tables}))


def _cartan(raw: Any) -> CartanType:
    try:
        return CartanType.parse(str(raw))
    except InvalidCartanTypeError as e:
        raise TableDataError(f"Bad type in table data: {e}") from e


def _parse_row(raw: dict[str, Any]) -> TableRow:
    kind = raw.get("kind")
    if kind not in ROW_KINDS:
        raise TableDataError(f"Unknown row kind: {kind!r}")
    if kind == "pattern" and not raw.get("pattern"):
        raise TableDataError("Pattern row without a pattern")
    if kind == "nodes" and not raw.get("nodes"):
        raise TableDataError("Nodes row without nodes")
    return TableRow(
        kind=kind,
        pattern=str(raw.get("pattern", "")),
        nodes=node_set(int(i) for i in raw.get("nodes", ())),
        note=str(raw.get("note", "")),
    )


def parse_table_data(data: dict[str, Any]) -> TableData:
    """Validate and convert the decoded JSON document.

    Args:
        data: Decoded contents of the data file.

    Returns:
        The typed table data.

    Raises:
        TableDataError: If the version or any entry is invalid.
    """
    if data.get("version") != EXPECTED_TABLES_VERSION:
        raise TableDataError(f"Unsupported table data version: {data.get('version')!r}")
    try:
        finite = tuple(
            FiniteTableEntry(
                cartan_type=_cartan(item["type"]),
                nodes=node_set(int(i) for i in item["nodes"]),
                verdict=FiniteVerdict(item["verdict"]),
                source=str(item["source"]),
            )
            for item in data.get("finite_normality", [])
        )
        tables = []
        for item in data.get("affine_tables", []):
            if item["property"] not in TABLE_PROPERTIES:
                raise TableDataError(f"Unknown table property: {item['property']!r}")
            tables.append(
                AffineTable(
                    cartan_type=_cartan(item["type"]),
                    prop=item["property"],
                    rows=tuple(_parse_row(row) for row in item["rows"]),
                    source=str(item["source"]),
                )
            )
    except (KeyError, TypeError) as e:
        raise TableDataError(f"Malformed table data: {e}") from e
    except ValueError as e:
        if isinstance(e, TableDataError):
            raise
        raise TableDataError(f"Malformed table data: {e}") from e
    return TableData(finite, tuple(tables))


def read_table_data(path: Path) -> TableData:
    """Read and validate a table data file.

    Raises:
        TableDataError: If the file cannot be read or parsed.
    """
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as e:
        raise TableDataError(f"Cannot read table data {path}: {e}") from e
    return parse_table_data(data)


@lru_cache(maxsize=1)
def load_table_data() -> TableData:
    """Load the bundled data file (cached)."""
    data = read_table_data(get_expected_tables_file())
    logger.debug(
        "Loaded %d finite entries and %d affine tables",
        len(data.finite_entries),
        len(data.affine_tables),
    )
    return data
