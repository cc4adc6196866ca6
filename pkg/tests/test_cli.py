import json

import pytest
from click.testing import CliRunner

from torus_ech.cli import cli
from torus_ech.config import configure_logging
from torus_ech.output import ExitCode, OutputRecord, render_json

from .tables import TABLE_T23, TABLE_T25

QUIET_ENV = {"ECH_FORMAT": None, "ECH_LOG_LEVEL": "CRITICAL", "ECH_VERIFY_WORKERS": None}

SMALL_VERIFY = ["--max-degree", "40", "--max-m", "3", "--count", "30", "--max-b", "5"]


@pytest.fixture
def run():
    runner = CliRunner()

    def invoke(*args, **env):
        return runner.invoke(cli, list(args), env={**QUIET_ENV, **env})

    yield invoke
    configure_logging()


def _tsv(header: str, *rows: str) -> str:
    return "\n".join([header, *rows]) + "\n"


def _json(result) -> dict:
    return json.loads(result.stdout)


# =============================================================================
# gens
# =============================================================================


@pytest.mark.parametrize("q, max_degree, table", [(3, 18, TABLE_T23), (5, 23, TABLE_T25)])
def test_gens_reproduces_printed_tables(run, q, max_degree, table):
    result = run("gens", "--q", str(q), "--max-degree", str(max_degree), "--limit", "35")
    assert result.exit_code == ExitCode.SUCCESS
    rows = [f"{d}\t{name}\t{index}" for d, name, index in table]
    assert result.stdout == _tsv("degree\tgenerator\tindex", *rows)


def test_gens_small_table(run):
    result = run("gens", "--q", "3", "--max-degree", "6")
    lines = result.stdout.splitlines()
    assert len(lines) == 1 + 7
    assert lines[-1] == "6\tb\t12"


def test_gens_degree_zero(run):
    result = run("gens", "--q", "5", "--max-degree", "0")
    assert result.stdout == _tsv("degree\tgenerator\tindex", "0\t∅\t0")


def test_gens_full_enumeration_past_printed_rows(run):
    result = run("gens", "--q", "5", "--max-degree", "23", "--format", "json")
    rows = _json(result)["rows"]
    assert len(rows) == 36
    assert rows[34] == {"degree": 23, "generator": {"b": None, "h": 1, "e": 9}, "index": 68}
    assert rows[35]["index"] == 70


def test_gens_help_names_printed_table_prefix(run):
    result = run("gens", "--help")
    assert result.exit_code == ExitCode.SUCCESS
    assert "first 35 rows (--limit 35)" in " ".join(result.stdout.split())


def test_gens_markdown(run):
    result = run("gens", "--q", "3", "--max-degree", "2", "--format", "md")
    assert result.stdout.splitlines() == [
        "| degree | generator | index |",
        "|---|---|---|",
        "| 0 | ∅ | 0 |",
        "| 2 | e | 2 |",
    ]


@pytest.mark.parametrize("q", ["4", "1", "0", "three"])
def test_gens_rejects_bad_q(run, q):
    result = run("gens", "--q", q, "--max-degree", "6")
    assert result.exit_code == ExitCode.USAGE_ERROR


def test_json_round_trip_is_byte_identical(run):
    first = run("gens", "--q", "3", "--max-degree", "18", "--format", "json")
    second = run("gens", "--q", "3", "--max-degree", "18", "--format", "json")
    assert first.stdout == second.stdout
    record = OutputRecord.model_validate(_json(first))
    assert render_json(record) + "\n" == first.stdout
    assert list(_json(first)) == ["format_version", "command", "params", "rows"]


# =============================================================================
# index, spectrum, knot
# =============================================================================


@pytest.mark.parametrize(
    "q, gen, expected",
    [("3", "1,0,0", "b\t12\t"), ("5", "0,1,0", "h\t6\t"), ("3", "0,0,0", "∅\t0\t")],
)
def test_index(run, q, gen, expected):
    result = run("index", "--q", q, "--gen", gen)
    assert result.stdout == _tsv("generator\tindex\twarning", expected)


def test_index_components(run):
    result = run("index", "--q", "5", "--gen", "1,1,0", "--components")
    assert result.stdout == _tsv(
        "generator\tindex\tchern\tpairing\tcz_total\twarning", "bh\t34\t0\t12\t22\t"
    )


def test_index_non_admissible_warning(run):
    result = run("index", "--q", "3", "--gen", "0,2,0", "--format", "json")
    assert result.exit_code == ExitCode.SUCCESS
    assert _json(result)["rows"][0]["warning"] == "non-admissible"


def test_index_rejects_malformed_current(run):
    assert run("index", "--q", "3", "--gen", "1,0").exit_code == ExitCode.USAGE_ERROR


def test_spectrum(run):
    result = run("spectrum", "--q", "3", "--count", "2")
    assert result.stdout == _tsv("k\tc_k\tgenerator", "0\t0\t∅", "1\t1/3\te")
    result = run("spectrum", "--q", "3", "--count", "7")
    assert result.stdout.splitlines()[-1] == "6\t1\tb"
    result = run("spectrum", "--q", "5", "--count", "1")
    assert result.stdout == _tsv("k\tc_k\tgenerator", "0\t0\t∅")


@pytest.mark.parametrize(
    "grading, K, rot, row",
    [
        ("12", "6", "exact", "12\t6\texact\t1\t6"),
        ("12", "6", "perturbed", "12\t6\tperturbed\t0\t6+δ"),
        ("12", "6+d", "perturbed", "12\t6+δ\tperturbed\t1\t6+δ"),
        ("7", "100", "perturbed", "7\t100\tperturbed\t0\t"),
    ],
)
def test_knot(run, grading, K, rot, row):
    result = run("knot", "--q", "3", "--grading", grading, "--K", K, "--rot", rot)
    assert result.stdout == _tsv("grading\tK\trot\trank\tthreshold", row)


def test_knot_defaults_to_perturbed(run):
    result = run("knot", "--q", "3", "--grading", "12", "--K", "6", "--format", "json")
    assert _json(result)["rows"][0]["rank"] == 0


def test_knot_rejects_malformed_level(run):
    result = run("knot", "--q", "3", "--grading", "12", "--K", "six")
    assert result.exit_code == ExitCode.USAGE_ERROR


# =============================================================================
# verify
# =============================================================================


def test_verify_passes(run):
    result = run("verify", "--q", "3,5", *SMALL_VERIFY)
    assert result.exit_code == ExitCode.SUCCESS
    lines = result.stdout.splitlines()
    assert lines[0] == "check\tq\tchecked\tfailures\tstatus\tfirst_failure"
    assert len(lines) == 1 + 2 * 15
    assert all("\tpass\t" in line for line in lines[1:])


def test_verify_self_test_corrupt_fails(run):
    result = run("verify", "--q", "3", *SMALL_VERIFY, "--self-test-corrupt", "--format", "json")
    assert result.exit_code == ExitCode.VERIFICATION_FAILED
    failed = {row["check"] for row in _json(result)["rows"] if row["status"] == "FAIL"}
    assert "identities" in failed


@pytest.mark.parametrize("q_list", ["4", "3,4", "3,x", ""])
def test_verify_rejects_bad_q(run, q_list):
    result = run("verify", "--q", q_list, *SMALL_VERIFY)
    assert result.exit_code == ExitCode.USAGE_ERROR


@pytest.mark.slow
def test_verify_acceptance_run(run):
    result = run(
        "verify", "--q", "3,5,7", "--max-degree", "400", "--max-m", "100", "--count", "1000"
    )
    assert result.exit_code == ExitCode.SUCCESS


# =============================================================================
# ellipsoid, unknot, capacities, schema
# =============================================================================


def test_ellipsoid(run):
    result = run("ellipsoid", "--a", "2", "--b", "3+d", "--max-k", "5", "--format", "json")
    rows = _json(result)["rows"]
    assert rows[5] == {"k": 5, "grading": 10, "m1": 3, "m2": 0, "action": "6"}
    assert rows[2]["action"] == "3+δ"


def test_ellipsoid_rejects_rational_ratio(run):
    assert run("ellipsoid", "--a", "1", "--b", "1").exit_code == ExitCode.USAGE_ERROR


def test_unknot(run):
    result = run("unknot", "--k", "3", "--rot", "3/2+δ")
    assert result.stdout == _tsv("k\trot\tthreshold", "3\t3/2+δ\t2")
    result = run("unknot", "--rot", "3/2+d", "--grading", "6", "--K", "2", "--format", "json")
    row = _json(result)["rows"][0]
    assert (row["k"], row["threshold"], row["rank"]) == (3, "2", 1)


def test_unknot_needs_a_grading_or_k(run):
    assert run("unknot", "--rot", "5+d").exit_code == ExitCode.USAGE_ERROR
    assert run("unknot", "--rot", "5+d", "--grading", "2").exit_code == ExitCode.USAGE_ERROR


def test_capacities(run):
    result = run("capacities", "--a", "1", "--b", "2", "--count", "5", "--format", "json")
    assert [row["capacity"] for row in _json(result)["rows"]] == ["0", "1", "2", "2", "3"]


def test_schema(run):
    result = run("schema")
    schema = json.loads(result.stdout)
    assert list(schema["properties"]) == ["format_version", "command", "params", "rows"]


# =============================================================================
# configuration
# =============================================================================


def test_format_from_environment(run):
    result = run("spectrum", "--q", "3", "--count", "1", ECH_FORMAT="md")
    assert result.stdout.startswith("| k | c_k | generator |")
    result = run("spectrum", "--q", "3", "--count", "1", "--format", "tsv", ECH_FORMAT="json")
    assert result.stdout.startswith("k\tc_k\tgenerator")


def test_bad_environment_is_a_usage_error(run):
    assert run("schema", ECH_FORMAT="xml").exit_code == ExitCode.USAGE_ERROR
    assert run("schema", ECH_VERIFY_WORKERS="0").exit_code == ExitCode.USAGE_ERROR


def test_verbose_flag(run):
    result = run("--verbose", "spectrum", "--q", "3", "--count", "1")
    assert result.exit_code == ExitCode.SUCCESS
