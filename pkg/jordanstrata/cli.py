"""Command-line interface for jordanstrata.

Provides enumerate, classify, tables, oracle-check and invariants-check.
Exit codes: 0 on success or agreement, 1 on a diff or disagreement, 2 on
a usage error.
"""

import argparse
import logging
import re
import sys
from collections.abc import Sequence
from pathlib import Path
from typing import Any

from jordanstrata.affine_diagram import (
    ExtendedDiagram,
    IsogenyAction,
    extended_diagram,
    isogeny_actions,
)
from jordanstrata.classify import classify, classify_generic
from jordanstrata.conditions import vertex_condition
from jordanstrata.config import (
    DEFAULT_MAX_LEN,
    INVARIANTS_DEFAULT_DEGREE,
    INVARIANTS_MAX_RANK,
    OutputFormat,
    TableProperty,
)
from jordanstrata.coxclass import Stratum, enumerate_strata, finite_subsets, strata
from jordanstrata.errors import (
    BudgetExceededError,
    InvalidCartanTypeError,
    InvalidSubgroupError,
    MalformedSubsetError,
    NotFiniteTypeError,
    UnsupportedCaseError,
)
from jordanstrata.geom_oracle import (
    AffineIsometry,
    EuclideanModel,
    build_euclidean_model,
    geometric_strata_count,
    group_ball,
    maps_walls_into_arrangement,
    omega_at_vertex,
    sigma_geometric,
)
from jordanstrata.invariants_oracle import restriction_surjective_up_to
from jordanstrata.models import CartanType, FiniteVerdict, NodeSet, UnibranchVerdict
from jordanstrata.serialization import (
    Document,
    diff_document,
    format_nodes,
    invariants_document,
    oracle_document,
    render,
    reports_document,
    strata_document,
    write_document,
)
from jordanstrata.subdiagram import marks_short_roots, subsets_matching
from jordanstrata.tables import diff_table

logger = logging.getLogger(__name__)

EXIT_OK: int = 0
EXIT_DIFF: int = 1
EXIT_USAGE: int = 2

_CLASS_ID = re.compile(r"^c(\d+)$")
_INDICES = re.compile(r"^[\[{(]?\s*(\d+(\s*[, ]\s*\d+)*)?\s*[\]})]?$")

USAGE_ERRORS = (
    InvalidCartanTypeError,
    InvalidSubgroupError,
    MalformedSubsetError,
    NotFiniteTypeError,
    UnsupportedCaseError,
)


def resolve_subsets(extdiag: ExtendedDiagram, K: IsogenyAction, text: str) -> list[NodeSet]:
    """Resolve a subset argument to canonical stratum representatives.

    Accepts node indices ("1,3" or "{1,3}"), a class id from enumerate
    output ("c4"), or a pattern ("D4+A1", "tildeA1"). A pattern may match
    several strata; all of them are returned.

    Raises:
        MalformedSubsetError: If nothing matches or an index is out of range.
        NotFiniteTypeError: If explicit indices are not of finite type.
    """
    cleaned = text.strip()
    match = _CLASS_ID.match(cleaned)
    if match:
        orbits = enumerate_strata(extdiag, K)
        index = int(match.group(1))
        if index >= len(orbits):
            raise MalformedSubsetError(f"Class id {cleaned} out of range (0..{len(orbits) - 1})")
        return [orbits[index].rep]
    if _INDICES.match(cleaned):
        nodes = extdiag.check_nodes(int(n) for n in re.findall(r"\d+", cleaned))
        return [Stratum(extdiag, K, nodes).canonical().rep]
    mark_short = marks_short_roots(extdiag.base_type)
    matching = subsets_matching(extdiag.diagram, finite_subsets(extdiag), cleaned, mark_short)
    if not matching:
        raise MalformedSubsetError(f"No subset of {extdiag} has pattern {cleaned!r}")
    reps = sorted({Stratum(extdiag, K, s).canonical().rep for s in matching})
    if len(reps) > 1:
        logger.info("Pattern %s matches %d strata", cleaned, len(reps))
    return reps


def _setup(type_name: str, selector: str) -> tuple[ExtendedDiagram, IsogenyAction]:
    cartan_type = CartanType.parse(type_name)
    return extended_diagram(cartan_type), isogeny_actions(cartan_type, selector)


def _emit(document: Document, fmt: OutputFormat, output: Path | None) -> None:
    if output is None:
        sys.stdout.write(render(document, fmt))
        return
    write_document(output, document, fmt)
    print(f"Written to {output}")


def cmd_enumerate(type_name: str, selector: str, fmt: OutputFormat, output: Path | None) -> int:
    """List the strata of a type and isogeny.

    Returns:
        Exit code (0 for success).
    """
    extdiag, K = _setup(type_name, selector)
    _emit(strata_document(extdiag, K, enumerate_strata(extdiag, K)), fmt, output)
    return EXIT_OK


def cmd_classify(
    type_name: str, selector: str, subset: str, fmt: OutputFormat, output: Path | None
) -> int:
    """Classify the strata named by a subset argument.

    Returns:
        Exit code (0 for success).
    """
    extdiag, K = _setup(type_name, selector)
    reports = [classify(Stratum(extdiag, K, rep)) for rep in resolve_subsets(extdiag, K, subset)]
    _emit(reports_document(reports), fmt, output)
    return EXIT_OK


def cmd_tables(
    type_name: str, selector: str, prop: TableProperty, fmt: OutputFormat, output: Path | None
) -> int:
    """Regenerate a table and diff it against the expected list.

    Returns:
        Exit code (0 if the regenerated set equals the expected set, 1 otherwise).
    """
    extdiag, K = _setup(type_name, selector)
    diff = diff_table(extdiag, K, prop)
    _emit(diff_document(diff, extdiag), fmt, output)
    return EXIT_OK if diff.exact else EXIT_DIFF


def _omega_rows(
    model: EuclideanModel,
    K: IsogenyAction,
    rep: NodeSet,
    max_len: int,
    ball: list[AffineIsometry],
) -> list[dict[str, Any]]:
    extdiag = model.extdiag
    report = classify_generic(Stratum(extdiag, K, rep))
    rows = []
    for j in report.minimal_vertices:
        omega = omega_at_vertex(model, K, rep, j, max_len, ball)
        combinatorial = vertex_condition(report.sigma, K, j)
        if report.unibranch_minimal in (UnibranchVerdict.YES, UnibranchVerdict.NO):
            agree = omega.unibranch == combinatorial
        else:
            agree = omega.unibranch or not combinatorial
        rows.append(
            {
                "check": "omega",
                "subset": format_nodes(rep),
                "vertex": j,
                "combinatorial": combinatorial,
                "geometric": omega.unibranch,
                "stable": omega.stable,
                "agree": agree,
            }
        )
    return rows


def cmd_oracle_check(
    type_name: str,
    selector: str,
    subset: str | None,
    max_len: int,
    fmt: OutputFormat,
    output: Path | None,
) -> int:
    """Cross-check Coxeter classes (and vertex conditions) against the geometric model.

    Returns:
        Exit code (0 on agreement, 1 on any disagreement).
    """
    extdiag, K = _setup(type_name, selector)
    model = build_euclidean_model(extdiag.base_type)
    ball = group_ball(model, max_len)
    arrangement = all(maps_walls_into_arrangement(model, element) for element in ball)
    if not arrangement:
        logger.warning("Some element of the ball moves a wall off the arrangement")
    targets = resolve_subsets(extdiag, K, subset) if subset else finite_subsets(extdiag)
    rows: list[dict[str, Any]] = []
    for target in targets:
        combinatorial = set(Stratum(extdiag, K, target).sigma())
        geometric = sigma_geometric(model, target, max_len, K, ball)
        rows.append(
            {
                "check": "sigma",
                "subset": format_nodes(target),
                "combinatorial": len(combinatorial),
                "geometric": len(geometric.members),
                "stable": geometric.stable,
                "agree": geometric.members == combinatorial,
            }
        )
        if subset:
            rows.extend(_omega_rows(model, K, target, max_len, ball))
    meta: dict[str, Any] = {
        "type": str(extdiag.base_type),
        "isogeny": K.selector,
        "max_len": max_len,
        "ball_size": len(ball),
        "arrangement": arrangement,
    }
    if not subset:
        count, stable = geometric_strata_count(model, K, max_len)
        meta["strata"] = len(strata(extdiag, K))
        meta["geometric_strata"] = count
        meta["geometric_stable"] = stable
        rows.append(
            {
                "check": "count",
                "subset": "",
                "combinatorial": meta["strata"],
                "geometric": count,
                "stable": stable,
                "agree": count == meta["strata"],
            }
        )
    agree = arrangement and all(row["agree"] for row in rows)
    meta["agree"] = agree
    _emit(oracle_document(meta, rows), fmt, output)
    return EXIT_OK if agree else EXIT_DIFF


def cmd_invariants_check(
    type_name: str,
    selector: str,
    subset: str | None,
    degree: int,
    fmt: OutputFormat,
    output: Path | None,
) -> int:
    """Compare knowledge-base verdicts of finite counterparts with restricted invariants.

    Returns:
        Exit code (0 if no deficiency contradicts a normal verdict, 1 otherwise).
    """
    extdiag, K = _setup(type_name, selector)
    if extdiag.rank > INVARIANTS_MAX_RANK:
        raise BudgetExceededError(f"Invariant checks stop at rank {INVARIANTS_MAX_RANK}")
    reps = resolve_subsets(extdiag, K, subset) if subset else [s.rep for s in strata(extdiag, K)]
    rows = []
    for rep in reps:
        report = classify_generic(Stratum(extdiag, K, rep))
        for entry in report.counterparts:
            counterpart = entry.counterpart
            check = restriction_surjective_up_to(
                counterpart.diagram, counterpart.subset, counterpart.group, degree
            )
            deficient = check.first_deficiency
            rows.append(
                {
                    "rep": format_nodes(rep),
                    "vertex": counterpart.vertex,
                    "subset": format_nodes(counterpart.subset),
                    "group_order": check.group_order,
                    "kb_verdict": entry.result.verdict.value,
                    "first_deficiency": deficient,
                    "consistent": not (
                        entry.result.verdict is FiniteVerdict.NORMAL and deficient is not None
                    ),
                }
            )
    consistent = all(row["consistent"] for row in rows)
    meta = {
        "type": str(extdiag.base_type),
        "isogeny": K.selector,
        "degree": degree,
        "consistent": consistent,
    }
    _emit(invariants_document(meta, rows), fmt, output)
    return EXIT_OK if consistent else EXIT_DIFF


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="jordan-strata",
        description="Classify Jordan strata modulo extended affine Weyl groups",
    )
    parser.add_argument("--verbose", "-v", action="store_true", help="Log debug output to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(name: str, help_text: str) -> argparse.ArgumentParser:
        command = sub.add_parser(name, help=help_text)
        command.add_argument("--type", required=True, help='Finite type, e.g. "E7" or "B5"')
        command.add_argument(
            "--isogeny",
            default="sc",
            help='Isogeny selector: "sc", "adjoint", or per type "Z3", "SO", "PSp", "PSO", "HSpin"',
        )
        command.add_argument(
            "--format", choices=["json", "markdown", "csv"], default="json", help="Output format"
        )
        command.add_argument("--output", type=Path, default=None, help="Write to a file instead")
        return command

    common("enumerate", "List the strata")
    classify_cmd = common("classify", "Classify one stratum")
    classify_cmd.add_argument(
        "--subset", required=True, help='Node indices "1,3", class id "c4" or pattern "D4+A1"'
    )
    tables_cmd = common("tables", "Regenerate and diff a table")
    tables_cmd.add_argument("--property", choices=["normal", "codim1"], default="normal")
    oracle_cmd = common("oracle-check", "Cross-check against the geometric model")
    oracle_cmd.add_argument("--subset", default=None)
    oracle_cmd.add_argument("--max-len", type=int, default=DEFAULT_MAX_LEN)
    invariants_cmd = common("invariants-check", "Check finite counterparts with invariants")
    invariants_cmd.add_argument("--subset", default=None)
    invariants_cmd.add_argument("--degree", type=int, default=INVARIANTS_DEFAULT_DEGREE)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    """Parse arguments, run one command and return its exit code."""
    parser = _build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        if args.command == "enumerate":
            return cmd_enumerate(args.type, args.isogeny, args.format, args.output)
        if args.command == "classify":
            return cmd_classify(args.type, args.isogeny, args.subset, args.format, args.output)
        if args.command == "tables":
            return cmd_tables(args.type, args.isogeny, args.property, args.format, args.output)
        if args.command == "oracle-check":
            return cmd_oracle_check(
                args.type, args.isogeny, args.subset, args.max_len, args.format, args.output
            )
        return cmd_invariants_check(
            args.type, args.isogeny, args.subset, args.degree, args.format, args.output
        )
    except USAGE_ERRORS as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (BudgetExceededError, ValueError) as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_DIFF
    except OSError as e:
        print(f"Error: Failed to write output: {e}", file=sys.stderr)
        return EXIT_DIFF


if __name__ == "__main__":
    sys.exit(main())
