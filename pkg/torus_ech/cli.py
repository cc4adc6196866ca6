"""torus-ech command line.

Commands:
  - gens: admissible generators with degree and ECH index
  - index: ECH index of one current, optionally with its components
  - spectrum: ECH spectrum c_k with witnesses
  - knot: knot-filtered rank and threshold in one grading
  - verify: the full consistency suite for a list of q (exit 1 on any failure)
  - ellipsoid / unknot / capacities: the irrational ellipsoid cross-check surface
  - schema: JSON schema of the output record

Usage:
    torus-ech gens --q 3 --max-degree 18
    torus-ech --verbose verify --q 3,5,7 --max-degree 400 --max-m 100 --count 1000
"""

import asyncio
import json
from contextlib import contextmanager

import click
from loguru import logger

from torus_ech.config import OUTPUT_FORMATS, Settings, configure_logging, load_settings
from torus_ech.core.ellipsoid import (
    EllipsoidParams,
    ellipsoid_capacities,
    ellipsoid_generators,
    unknot_filtered_group,
    unknot_threshold,
)
from torus_ech.core.exact import parse_perturbed
from torus_ech.core.harness import SuiteOptions, verify_all
from torus_ech.core.index import ech_index, ech_index_components
from torus_ech.core.orbits import FibrationParams, ReebCurrent, degree, enumerate_generators
from torus_ech.core.spectral import RotMode, ech_spectrum, knot_filtered_group, knot_threshold
from torus_ech.errors import EchError, RangeError, RejectedInputError, VerificationError
from torus_ech.output import (
    ExitCode,
    OutputRecord,
    emit,
    generator_cell,
    perturbed_cell,
    rational_cell,
    resolve_format,
)

NON_ADMISSIBLE = "non-admissible"


# =============================================================================
# Option helpers
# =============================================================================


def _parse_q(value: int) -> FibrationParams:
    try:
        return FibrationParams(value)
    except RejectedInputError as e:
        raise click.BadParameter(str(e), param_hint="--q")


def _validate_q(ctx, param, value):
    if value is None:
        return None
    return _parse_q(value)


def _validate_q_list(ctx, param, value):
    pieces = [piece.strip() for piece in value.split(",") if piece.strip()]
    if not pieces:
        raise click.BadParameter("expected a comma-separated list of odd q >= 3")
    params = []
    for piece in pieces:
        try:
            q = int(piece)
        except ValueError:
            raise click.BadParameter(f"{piece!r} is not an integer")
        params.append(_parse_q(q))
    return params


def _validate_perturbed(ctx, param, value):
    if value is None:
        return None
    try:
        return parse_perturbed(value)
    except RejectedInputError as e:
        raise click.BadParameter(str(e))


def _validate_current(ctx, param, value):
    try:
        return ReebCurrent.parse(value)
    except RejectedInputError as e:
        raise click.BadParameter(str(e))


def _format_option(func):
    return click.option(
        "--format",
        "output_format",
        type=click.Choice(OUTPUT_FORMATS),
        default=None,
        help="Output format (default: ECH_FORMAT, then tsv).",
    )(func)


def _q_option(func):
    return click.option(
        "--q", "params", type=int, required=True, callback=_validate_q, help="Odd q >= 3."
    )(func)


@contextmanager
def _usage_errors():
    """Report library input errors as click usage errors (exit 2)."""
    try:
        yield
    except (RejectedInputError, RangeError) as e:
        raise click.UsageError(str(e))


def _emit(ctx: click.Context, record: OutputRecord, output_format: str | None, columns):
    settings: Settings = ctx.obj
    with _usage_errors():
        chosen = resolve_format(output_format, settings.output_format)
    emit(record, chosen, columns)


# =============================================================================
# Commands
# =============================================================================


@click.group()
@click.option("--verbose", is_flag=True, help="Debug logging on stderr.")
@click.pass_context
def cli(ctx: click.Context, verbose: bool):
    """Exact ECH data of the T(2,q) torus-knot fibration of S3."""
    try:
        settings = load_settings()
    except RejectedInputError as e:
        configure_logging()
        raise click.UsageError(str(e))
    configure_logging("DEBUG" if verbose else settings.log_level)
    ctx.obj = settings


@cli.command()
@_q_option
@click.option("--max-degree", type=click.IntRange(min=0), required=True)
@click.option("--limit", type=click.IntRange(min=0), default=None, help="Keep the first N rows.")
@_format_option
@click.pass_context
def gens(ctx, params: FibrationParams, max_degree: int, limit: int | None, output_format):
    """Admissible generators up to a degree, in enumeration order.

    Every generator of degree <= --max-degree is listed, so a degree bound can yield more rows
    than a printed table stopping at that degree: the published T(2,3) and T(2,5) tables are
    the first 35 rows (--limit 35) of --max-degree 18 and 23.
    """
    generators = enumerate_generators(params, max_degree)
    if limit is not None:
        generators = generators[:limit]
    logger.info(f"gens: {len(generators)} rows for q={params.q}, degree <= {max_degree}")

    rows = [
        {
            "degree": degree(params, current),
            "generator": generator_cell(current),
            "index": ech_index(params, current),
        }
        for current in generators
    ]
    record = OutputRecord(
        command="gens",
        params={"q": params.q, "max_degree": max_degree, "limit": limit},
        rows=rows,
    )
    _emit(ctx, record, output_format, ["degree", "generator", "index"])


@cli.command()
@_q_option
@click.option("--gen", "current", required=True, callback=_validate_current, help="B,H,E")
@click.option("--components", is_flag=True, help="Also print c, Q and CZ^I in the orb frame.")
@_format_option
@click.pass_context
def index(ctx, params: FibrationParams, current: ReebCurrent, components: bool, output_format):
    """ECH index of b^B h^H e^E relative to the empty current."""
    row = {
        "generator": generator_cell(current),
        "index": ech_index(params, current),
        "warning": None,
    }
    columns = ["generator", "index"]
    if not current.admissible:
        logger.warning(f"{current.render()} carries h more than once and is not a generator")
        row["warning"] = NON_ADMISSIBLE
    if components:
        parts = ech_index_components(params, current)
        row.update({"chern": parts.chern, "pairing": parts.pairing, "cz_total": parts.cz_total})
        columns += ["chern", "pairing", "cz_total"]
    columns.append("warning")

    record = OutputRecord(
        command="index",
        params={
            "q": params.q,
            "gen": [current.B, current.H, current.E],
            "components": components,
        },
        rows=[row],
    )
    _emit(ctx, record, output_format, columns)


@cli.command()
@_q_option
@click.option("--count", type=click.IntRange(min=1), default=10, show_default=True)
@_format_option
@click.pass_context
def spectrum(ctx, params: FibrationParams, count: int, output_format):
    """ECH spectrum c_0, ..., c_{count-1} with the generator realizing each value."""
    entries = ech_spectrum(params, count)
    rows = [
        {
            "k": entry.k,
            "c_k": rational_cell(entry.c_k),
            "generator": generator_cell(entry.witness.current),
        }
        for entry in entries
    ]
    record = OutputRecord(
        command="spectrum", params={"q": params.q, "count": count}, rows=rows
    )
    _emit(ctx, record, output_format, ["k", "c_k", "generator"])


@cli.command()
@_q_option
@click.option("--grading", type=int, required=True)
@click.option("--K", "K", required=True, callback=_validate_perturbed, help='e.g. "6" or "6+δ"')
@click.option(
    "--rot",
    "rot_mode",
    type=click.Choice([mode.value for mode in RotMode]),
    default=RotMode.PERTURBED.value,
    show_default=True,
)
@_format_option
@click.pass_context
def knot(ctx, params: FibrationParams, grading: int, K, rot_mode: str, output_format):
    """Rank of knot-filtered ECH in one grading at level K, with the threshold."""
    threshold = None
    if grading >= 0 and grading % 2 == 0:
        threshold = perturbed_cell(knot_threshold(params, grading // 2, rot_mode))
    row = {
        "grading": grading,
        "K": perturbed_cell(K),
        "rot": rot_mode,
        "rank": knot_filtered_group(params, grading, K, rot_mode),
        "threshold": threshold,
    }
    record = OutputRecord(
        command="knot",
        params={"q": params.q, "grading": grading, "K": perturbed_cell(K), "rot": rot_mode},
        rows=[row],
    )
    _emit(ctx, record, output_format, ["grading", "K", "rot", "rank", "threshold"])


@cli.command()
@click.option("--q", "q_params", default="3,5,7", show_default=True, callback=_validate_q_list)
@click.option("--max-degree", type=click.IntRange(min=0), default=400, show_default=True)
@click.option("--max-m", type=click.IntRange(min=1), default=100, show_default=True)
@click.option("--count", type=click.IntRange(min=1), default=1000, show_default=True)
@click.option("--max-b", type=click.IntRange(min=1), default=100, show_default=True)
@click.option("--self-test-corrupt", is_flag=True, help="Inject known errors; must fail.")
@_format_option
@click.pass_context
def verify(
    ctx,
    q_params: list[FibrationParams],
    max_degree: int,
    max_m: int,
    count: int,
    max_b: int,
    self_test_corrupt: bool,
    output_format,
):
    """Run every consistency check for each q; exit 1 if any fails."""
    settings: Settings = ctx.obj
    options = SuiteOptions(
        max_degree=max_degree,
        max_m=max_m,
        count=count,
        max_b=max_b,
        corrupt=self_test_corrupt,
    )
    q_values = [params.q for params in q_params]
    try:
        reports = asyncio.run(verify_all(q_values, options, settings.verify_workers))
    except VerificationError as e:
        logger.error(f"Verification aborted: {e} (offending: {e.offending})")
        ctx.exit(ExitCode.VERIFICATION_FAILED)

    rows = []
    for report in reports:
        row = report.to_row()
        row["first_failure"] = report.failures[0].message if report.failures else None
        rows.append(row)
        for failure in report.failures:
            logger.error(
                f"[q={report.q}] {report.name}/{failure.check}: {failure.message} "
                f"{failure.operands}"
            )

    record = OutputRecord(
        command="verify",
        params={
            "q": q_values,
            "max_degree": max_degree,
            "max_m": max_m,
            "count": count,
            "max_b": max_b,
            "self_test_corrupt": self_test_corrupt,
        },
        rows=rows,
    )
    columns = ["check", "q", "checked", "failures", "status", "first_failure"]
    _emit(ctx, record, output_format, columns)

    code = ExitCode.from_reports(reports)
    if not ExitCode.is_success(code):
        failed = sum(1 for report in reports if not report.passed)
        logger.error(f"{failed} of {len(reports)} checks failed")
        ctx.exit(code)
    logger.info(f"✅ All {len(reports)} checks passed for q in {q_values}")


@cli.command()
@click.option("--a", "a", required=True, callback=_validate_perturbed, help="Action of gamma1.")
@click.option("--b", "b", required=True, callback=_validate_perturbed, help='e.g. "3+δ"')
@click.option("--max-k", type=click.IntRange(min=0), default=10, show_default=True)
@_format_option
@click.pass_context
def ellipsoid(ctx, a, b, max_k: int, output_format):
    """Generators of E(a, b) in grading order."""
    with _usage_errors():
        params = EllipsoidParams(a, b)
        generators = ellipsoid_generators(params, max_k)
    rows = [
        {
            "k": g.k,
            "grading": g.grading,
            "m1": g.m1,
            "m2": g.m2,
            "action": perturbed_cell(g.action),
        }
        for g in generators
    ]
    record = OutputRecord(
        command="ellipsoid",
        params={"a": perturbed_cell(a), "b": perturbed_cell(b), "max_k": max_k},
        rows=rows,
    )
    _emit(ctx, record, output_format, ["k", "grading", "m1", "m2", "action"])


@cli.command()
@click.option("--k", "k", type=click.IntRange(min=0), default=None)
@click.option("--rot", "rot", required=True, callback=_validate_perturbed, help='e.g. "3/2+δ"')
@click.option("--grading", type=int, default=None, help="Grading for the filtered rank.")
@click.option("--K", "K", default=None, callback=_validate_perturbed, help="Filtration level.")
@_format_option
@click.pass_context
def unknot(ctx, k: int | None, rot, grading: int | None, K, output_format):
    """Knot-filtered threshold N_k(1, rot) of the unknot, and the rank at level K."""
    if k is None and grading is None:
        raise click.UsageError("pass --k or --grading")
    if (grading is None) != (K is None):
        raise click.UsageError("--grading and --K go together")
    if k is None:
        k = grading // 2 if grading >= 0 else 0

    with _usage_errors():
        threshold = unknot_threshold(k, rot)
        row = {"k": k, "rot": perturbed_cell(rot), "threshold": perturbed_cell(threshold)}
        columns = ["k", "rot", "threshold"]
        if grading is not None:
            row.update(
                {
                    "grading": grading,
                    "K": perturbed_cell(K),
                    "rank": unknot_filtered_group(grading, K, rot),
                }
            )
            columns += ["grading", "K", "rank"]

    record = OutputRecord(
        command="unknot",
        params={
            "k": k,
            "rot": perturbed_cell(rot),
            "grading": grading,
            "K": perturbed_cell(K) if K is not None else None,
        },
        rows=[row],
    )
    _emit(ctx, record, output_format, columns)


@cli.command()
@click.option("--a", "a", required=True, callback=_validate_perturbed)
@click.option("--b", "b", required=True, callback=_validate_perturbed)
@click.option("--count", type=click.IntRange(min=1), default=10, show_default=True)
@_format_option
@click.pass_context
def capacities(ctx, a, b, count: int, output_format):
    """ECH capacities c_0, ..., c_{count-1} of the ellipsoid E(a, b)."""
    with _usage_errors():
        values = ellipsoid_capacities(a, b, count)
    record = OutputRecord(
        command="capacities",
        params={"a": perturbed_cell(a), "b": perturbed_cell(b), "count": count},
        rows=[{"k": k, "capacity": perturbed_cell(value)} for k, value in enumerate(values)],
    )
    _emit(ctx, record, output_format, ["k", "capacity"])


@cli.command()
def schema():
    """Print the JSON schema of the output record."""
    click.echo(json.dumps(OutputRecord.model_json_schema(), ensure_ascii=False, indent=2))


def main():
    """Console script entry point."""
    try:
        cli(prog_name="torus-ech")
    except VerificationError as e:
        logger.error(f"torus-ech: {e}")
        raise SystemExit(ExitCode.VERIFICATION_FAILED)
    except EchError as e:
        logger.error(f"torus-ech: {e}")
        raise SystemExit(ExitCode.USAGE_ERROR)


if __name__ == "__main__":
    main()
