"""Top-level command-line interface.

Main CLI entry point that defines all top-level commands and command groups. Uses
Typer for argument parsing and command routing. All numerical work is delegated
to utility modules; this file only handles CLI concerns.

Command Structure:
    plandet                 # Show help and version
    plandet verify          # Identity sweeps (JSON-lines reports)
    plandet plancherel      # Row CDF tables and joint CDFs
    plandet moments         # Scaled row moments, optionally against the oracle
    plandet tail            # Tail decay probes
    plandet oracle          # Exact combinatorial values and fixtures
    plandet matrix          # Export a discretized operator as JSON
    plandet version         # Version info

    plandet config ...      # Configuration commands (sub-app)

Design Philosophy:
    Commands are thin wrappers around utility functions. Each command:
    1. Parses and normalizes its options
    2. Resolves a RunConfig against the configuration file
    3. Maps a pure function over the parameter tuples (utils.sweep)
    4. Writes records to stdout or --out (utils.serialize)

Exit Codes:
    0: success, every identity passed
    1: at least one identity failed
    2: configuration or input error

Examples:
    $ plandet verify --identity single --symbol '{"kind":"bessel","t":1}' --n 0..6
    $ plandet plancherel --t 1 --k 1 --n 0..8
    $ plandet plancherel --joint --t 1 --a 3,1
    $ plandet oracle --plancherel --N 4 --pred 'l1<=2'
"""

from __future__ import annotations

import json
import math
from collections.abc import Callable, Iterator
from contextlib import contextmanager
from fractions import Fraction
from pathlib import Path
from typing import Any

import typer

from .cli_config import app_config
from .constants import ENV_CONFIG, ENV_THREADS, MAX_EXACT_N
from .utils.console import (
    console,
    plain_option,
    print_and_raise,
    print_info,
    print_ok,
    print_warn,
)
from .utils.errors import PlandetError
from .utils.identities import (
    IdentityReport,
    verify_colored,
    verify_conjectured,
    verify_gessel_chain,
    verify_limit,
    verify_multi,
    verify_single,
)
from .utils.kernels import DiscreteKernel, QuadratureGrid, nystrom_matrix, toeplitz
from .utils.normalizers import (
    normalize_complex_list,
    normalize_float_list,
    normalize_int_range,
    normalize_partition,
    normalize_predicate,
    normalize_thresholds,
)
from .utils.oracle import (
    colored_poissonized_prob,
    dim_syt,
    enumerate_partitions,
    plancherel_prob,
    poissonized_prob,
    poissonized_row_moment,
    q_monotone,
    q_table,
    row_predicate,
)
from .utils.plancherel import (
    JointQuery,
    PoissonizedModel,
    colored_poissonized_moment,
    colored_row_cdf,
    default_colored_moment_window,
    default_moment_window,
    joint_cdf,
    lambda2_crosscheck,
    poissonized_moment,
    row_cdf,
    tail_probe,
    tail_samples,
)
from .utils.serialize import matrix_to_json, report_record, write_records
from .utils.sweep import RunConfig, parallel_map
from .utils.symbol import Symbol, parse_symbol
from .version import __version__

app_plandet = typer.Typer(
    help="Fredholm determinant identities and Plancherel row statistics"
)
app_plandet.add_typer(app_config, name="config")

IDENTITIES = ["single", "multi", "colored", "gessel", "limit", "conjectured", "lambda2"]
DEFAULT_SYMBOL = '{"kind":"bessel","t":1}'
DEFAULT_INDICES = "0..6"
# The Gessel chain starts at n = 1.
IDENTITY_INDICES = {"gessel": "1..6"}
FIXTURE_MAX_N = 8

config_option = typer.Option(
    None, "--config", "-c", envvar=ENV_CONFIG, help="Configuration file (TOML)."
)
threads_option = typer.Option(
    None, "--threads", envvar=ENV_THREADS, help="Worker threads for the sweep."
)
tol_option = typer.Option(None, "--tol", help="Tolerance. Defaults to the config.")
output_option = typer.Option(
    None, "--output", "-o", help="Output format: json or csv."
)
out_option = typer.Option(None, "--out", help="Write records to this file.")


@contextmanager
def _input_errors() -> Iterator[None]:
    """Turn library errors into a diagnostic on stderr and exit code 2."""
    try:
        yield
    except (PlandetError, ValueError) as e:
        print_and_raise(str(e), raise_from=e, code=2)


def _descriptor(text: str) -> dict[str, Any]:
    with _input_errors():
        spec = json.loads(text)

    if not isinstance(spec, dict):
        print_and_raise(
            f"Symbol descriptor must be a JSON object, got {text!r}.", code=2
        )

    return spec


def _symbol(text: str, run: RunConfig) -> Symbol:
    with _input_errors():
        return parse_symbol(text, run.settings.fft_resolution)


def _forms(form: str) -> list[str]:
    forms = [part.strip().upper() for part in form.split(",")]

    if not forms or any(part not in ("S", "R") for part in forms):
        print_and_raise(f"Invalid form '{form}'. Use S, R or S,R.", code=2)

    return forms


def _run(
    fn: Callable[[Any], Any],
    items: list[Any],
    run: RunConfig,
    description: str,
    plain: bool,
) -> list[Any]:
    with _input_errors():
        return parallel_map(fn, items, run.threads, description, plain)


def _summarize(reports: list[IdentityReport]):
    failed = [report for report in reports if not report.passed]

    for report in reports:
        alternative = report.notes.get("residual_with_m_winding")

        if alternative is not None and not report.passed and alternative < 1e-8:
            print_warn(
                f"{report.identity_id} {report.params}: passes only with the "
                "exponent m·#(φ)."
            )

    if failed:
        worst = max(report.residual for report in failed)
        print_warn(
            f"{len(failed)} of {len(reports)} identity checks failed "
            f"(largest residual {worst:.3g})."
        )
        raise typer.Exit(1)

    print_ok(f"All {len(reports)} identity checks passed.")


@app_plandet.command()
def verify(
    identity: str = typer.Option(
        "single", "--identity", "-i", help=f"One of: {', '.join(IDENTITIES)}."
    ),
    symbol: str = typer.Option(
        DEFAULT_SYMBOL, "--symbol", help="Symbol descriptor as JSON."
    ),
    n: str = typer.Option(
        None,
        "--n",
        help="Indices, e.g. '0..6' or '-4..8' (default 0..6, 1..6 for 'gessel'). "
        "For 'multi' the breakpoints n_1..n_k.",
    ),
    s: str = typer.Option(
        "0.5", "--s", help="Spectral parameters. For 'multi' the weights s_1..s_k."
    ),
    t: str = typer.Option("1", "--t", help="Bessel parameters for gessel/lambda2."),
    m: str = typer.Option("2", "--m", help="Color counts for 'colored'."),
    form: str = typer.Option("S,R", "--form", help="Identity forms: S, R or S,R."),
    tol: float = tol_option,
    output: str = output_option,
    out: Path = out_option,
    threads: int = threads_option,
    config: Path = config_option,
    plain: bool = plain_option,
):
    """Run an identity sweep and report one JSON record per check.

    Exits with 0 if every identity passes and 1 otherwise.
    """
    if identity not in IDENTITIES:
        print_and_raise(
            f"Unknown identity '{identity}'. Use one of: {', '.join(IDENTITIES)}.",
            code=2,
        )

    if n is None:
        n = IDENTITY_INDICES.get(identity, DEFAULT_INDICES)

    grids: dict[str, list[Any]] = {"n": normalize_int_range(n)}

    if identity in ("gessel", "lambda2"):
        grids["t"] = normalize_float_list(t)
    else:
        grids["s"] = normalize_complex_list(s)

    if identity in ("single", "colored", "limit"):
        grids["form"] = _forms(form)

    if identity == "colored":
        grids["m"] = normalize_int_range(m)

    run = RunConfig.from_config(
        "verify",
        grids,
        _descriptor(symbol) if identity not in ("gessel", "lambda2") else None,
        tol,
        output,
        threads,
        config,
    )
    sym = _symbol(symbol, run) if run.symbol is not None else None
    tol_ = run.tol

    if identity == "multi":
        items: list[Any] = [(run.grids["n"], run.grids["s"])]
        fn: Callable[[Any], IdentityReport] = lambda p: verify_multi(  # noqa: E731
            sym, p[0], p[1], tol_
        )
    elif identity == "single":
        items = run.tuples(["n", "s", "form"])
        fn = lambda p: verify_single(sym, p[0], p[1], p[2], tol_)  # noqa: E731
    elif identity == "colored":
        items = run.tuples(["m", "n", "s", "form"])
        fn = lambda p: verify_colored(  # noqa: E731
            sym, p[0], p[1], p[2], tol_, p[3]
        )
    elif identity == "limit":
        items = run.tuples(["n", "s", "form"])
        fn = lambda p: verify_limit(sym, p[0], p[1], p[2], tol_)  # noqa: E731
    elif identity == "conjectured":
        items = run.tuples(["n", "s"])
        fn = lambda p: verify_conjectured(sym, p[0], p[1], tol_)  # noqa: E731
    elif identity == "gessel":
        items = run.tuples(["t", "n"])
        fn = lambda p: verify_gessel_chain(p[0], p[1], tol_)  # noqa: E731
    else:
        items = run.tuples(["t", "n"])
        fn = lambda p: lambda2_crosscheck(  # noqa: E731
            PoissonizedModel.from_t(p[0], run.settings.lattice_cap), p[1], tol_
        )

    reports = _run(fn, items, run, f"Verifying {identity}", plain)
    write_records([report_record(report) for report in reports], run.output, out)
    _summarize(reports)


@app_plandet.command()
def plancherel(
    t: str = typer.Option("1", "--t", help="Parameters t (mean size t²)."),
    k: int = typer.Option(1, "--k", help="Row index."),
    n: str = typer.Option("0..8", "--n", help="Thresholds, e.g. '0..8'."),
    joint: bool = typer.Option(False, "--joint", help="Joint CDF of the first rows."),
    a: str = typer.Option(
        "3,1", "--a", help="Joint thresholds a_1 ≥ a_2 ≥ …; 'inf' allowed."
    ),
    m: int = typer.Option(1, "--m", help="Colors; m > 1 gives the colored λ₁ CDF."),
    cross_check: bool = typer.Option(
        False, "--cross-check", help="Also evaluate counts by a Cauchy contour."
    ),
    tol: float = tol_option,
    output: str = output_option,
    out: Path = out_option,
    threads: int = threads_option,
    config: Path = config_option,
    plain: bool = plain_option,
):
    """Tabulate Prob(λ_k ≤ n) or a joint CDF under Poissonized Plancherel measure.

    Row CDFs are written as CSV and joint CDFs as JSON unless --output says
    otherwise.
    """
    grids: dict[str, list[Any]] = {"t": normalize_float_list(t)}

    if joint:
        thresholds = normalize_thresholds(a)
        grids["a"] = [thresholds]
    else:
        grids["n"] = normalize_int_range(n)

    if output is None:
        output = "json" if joint else "csv"

    run = RunConfig.from_config(
        "plancherel", grids, None, tol, output, threads, config
    )
    cap = run.settings.lattice_cap
    tol_ = run.tol

    def table_row(params: tuple[Any, ...]) -> dict[str, Any]:
        t_value, last = params

        if joint:
            model = PoissonizedModel.from_t(t_value, cap)
            query = JointQuery(tuple(last))
            probability = joint_cdf(model, query, tol_)
            return {
                "t": t_value,
                "a": list(last),
                "k": query.k,
                "prob": probability,
            }

        if m > 1:
            value = colored_row_cdf(t_value, m, last, tol_)
            return {"t": t_value, "m": m, "n": last, "phi": value}

        model = PoissonizedModel.from_t(t_value, cap)
        value = row_cdf(model, k, last, tol_, cross_check)
        return {"t": t_value, "k": k, "n": last, "phi": value}

    items = run.tuples(["t", "a" if joint else "n"])
    records = _run(table_row, items, run, "Computing row CDFs", plain)
    write_records(records, run.output, out)


@app_plandet.command()
def moments(
    t: str = typer.Option("4,6,8", "--t", help="Parameters t."),
    k: int = typer.Option(1, "--k", help="Row index."),
    a: str = typer.Option("1,2", "--a", help="Moment orders."),
    m: int = typer.Option(
        1, "--m", help="Colors; m > 1 gives moments of the colored λ₁."
    ),
    oracle: bool = typer.Option(
        False, "--oracle", help="Compare with the exact enumeration (small t only)."
    ),
    tol: float = tol_option,
    output: str = output_option,
    out: Path = out_option,
    threads: int = threads_option,
    config: Path = config_option,
    plain: bool = plain_option,
):
    """Moments of ξ_k = (λ_k - 2t)/t^{1/3} under Poissonized Plancherel measure.

    With --m > 1 the moments are those of the colored λ₁ scaled as
    (λ₁ - 2mt)/(m t^{1/3}); --k must then be 1.
    """
    if m < 1:
        print_and_raise(f"Color count must be positive, got {m}.", code=2)

    if m > 1 and k != 1:
        print_and_raise("Colored moments are available for --k 1 only.", code=2)

    if m > 1 and oracle:
        print_and_raise("The oracle comparison covers m = 1 only.", code=2)

    grids = {"t": normalize_float_list(t), "a": normalize_int_range(a)}
    run = RunConfig.from_config("moments", grids, None, tol, output, threads, config)
    cap = run.settings.lattice_cap
    tol_ = run.tol

    def moment_row(params: tuple[float, int]) -> dict[str, Any]:
        t_value, order = params

        if m > 1:
            n_lo, n_hi = default_colored_moment_window(t_value, m)
            value = colored_poissonized_moment(t_value, m, order, n_lo, n_hi, tol_)
            return {"t": t_value, "m": m, "k": 1, "a": order, "moment": value}

        n_lo, n_hi = default_moment_window(t_value)
        model = PoissonizedModel.from_t(t_value, cap)
        record: dict[str, Any] = {
            "t": t_value,
            "k": k,
            "a": order,
            "moment": poissonized_moment(model, k, order, n_lo, n_hi, tol_),
        }

        if oracle:
            exact = poissonized_row_moment(t_value, k, order)
            record["oracle"] = exact.value
            record["oracle_tail"] = exact.tail_bound

        return record

    records = _run(moment_row, run.tuples(["t", "a"]), run, "Computing moments", plain)
    write_records(records, run.output, out)


@app_plandet.command()
def tail(
    t: str = typer.Option("10", "--t", help="Parameters t."),
    k: str = typer.Option("1,2", "--k", help="Row indices."),
    regime: str = typer.Option(
        "upper", "--regime", help="upper (x > 0), lower (x < 0) or far (t varies)."
    ),
    x_lo: float = typer.Option(None, "--x-lo", help="Smallest scaled threshold."),
    x_hi: float = typer.Option(None, "--x-hi", help="Largest scaled threshold."),
    n: int = typer.Option(None, "--n", help="Fixed threshold for the far regime."),
    tol: float = tol_option,
    output: str = output_option,
    out: Path = out_option,
    threads: int = threads_option,
    config: Path = config_option,
    plain: bool = plain_option,
):
    """Sample tail probabilities and fit their log-decay slope.

    The slope of log tail against |x|^{3/2} (or t in the far regime) is printed to
    stderr and repeated in every record.
    """
    if regime not in ("upper", "lower", "far"):
        print_and_raise(f"Unknown regime '{regime}'. Use upper, lower or far.", code=2)

    if regime == "far" and n is None:
        print_and_raise("The far regime needs a fixed threshold --n.", code=2)

    lo, hi = (1.0, 6.0) if regime == "upper" else (-6.0, -1.0)
    lo = lo if x_lo is None else x_lo
    hi = hi if x_hi is None else x_hi
    grids = {"k": normalize_int_range(k), "t": normalize_float_list(t)}
    run = RunConfig.from_config("tail", grids, None, tol, output, threads, config)

    if regime == "far":
        samples = [(n, t_value) for t_value in run.grids["t"]]
    else:
        samples = [
            sample
            for t_value in run.grids["t"]
            for sample in tail_samples(t_value, lo, hi)
        ]

    if not samples:
        print_and_raise(f"No thresholds with x in [{lo:g}, {hi:g}].", code=2)

    probes = _run(
        lambda k_value: tail_probe(k_value, regime, samples, run.tol),
        run.grids["k"],
        run,
        "Probing tails",
        plain,
    )
    records = []

    for probe in probes:
        print_info(f"k={probe.k} {regime} tail: slope {probe.slope:.4g}")
        records.extend(
            {
                "regime": probe.regime,
                "k": probe.k,
                "n": sample.n,
                "t": sample.t,
                "x": sample.x,
                "tail": sample.tail,
                "underflow": sample.underflow,
                "slope": probe.slope,
            }
            for sample in probe.rows
        )

    write_records(records, run.output, out)


def _partition_record(parts: tuple[int, ...]) -> dict[str, Any]:
    N = sum(parts)
    d = dim_syt(parts)
    return {
        "N": N,
        "partition": list(parts),
        "dim": d,
        "prob": Fraction(d * d, math.factorial(N)),
    }


def _fixture_records() -> list[dict[str, Any]]:
    records: list[dict[str, Any]] = []

    for N in range(FIXTURE_MAX_N + 1):
        records.extend(
            {"fixture": "plancherel", **_partition_record(parts)}
            for parts in enumerate_partitions(N)
        )

    for k in (1, 2, 3):
        table = q_table(FIXTURE_MAX_N, k)
        records.append(
            {"fixture": "q_table", "k": k, "q": table, "monotone": q_monotone(table)}
        )

    for t in (0.5, 1.0, 1.5):
        for n in range(1, 7):
            result = poissonized_prob(t, row_predicate(1, n))
            records.append(
                {
                    "fixture": "poissonized_lambda1",
                    "t": t,
                    "n": n,
                    "prob": result.value,
                    "tail_bound": result.tail_bound,
                }
            )

    return records


@app_plandet.command()
def oracle(
    plancherel_: bool = typer.Option(
        False, "--plancherel", help="Exact Plancherel probability of --pred."
    ),
    N: int = typer.Option(None, "--N", help="Partition size."),
    pred: str = typer.Option(None, "--pred", help="Row predicate, e.g. 'l1<=2'."),
    t: float = typer.Option(
        None, "--t", help="Poissonized probability of --pred at parameter t."
    ),
    m: int = typer.Option(1, "--m", help="Colors for the Poissonized probability."),
    dim: str = typer.Option(
        None, "--dim", help="Number of SYT of a shape, e.g. '2,1'."
    ),
    fixtures: bool = typer.Option(
        False, "--fixtures", help="Regenerate the oracle fixture set."
    ),
    output: str = output_option,
    out: Path = out_option,
    config: Path = config_option,
):
    """Exact combinatorial values: probabilities, dimensions and fixtures.

    Exact rationals are written as 'numerator/denominator' strings.
    """
    run = RunConfig.from_config("oracle", {}, None, None, output, 1, config)

    with _input_errors():
        if fixtures:
            records = _fixture_records()
        elif dim is not None:
            parts = normalize_partition(dim)
            records = [_partition_record(parts)]
        elif pred is not None and t is not None:
            predicate = normalize_predicate(pred)
            result = (
                colored_poissonized_prob(t, m, predicate)
                if m > 1
                else poissonized_prob(t, predicate)
            )
            records = [
                {
                    "t": t,
                    "m": m,
                    "pred": predicate.text,
                    "prob": result.value,
                    "tail_bound": result.tail_bound,
                    "n_max": result.n_max,
                }
            ]
        elif plancherel_:
            if N is None or pred is None:
                print_and_raise("--plancherel needs --N and --pred.", code=2)
            if N > MAX_EXACT_N:
                print_and_raise(f"--N must be at most {MAX_EXACT_N}.", code=2)
            predicate = normalize_predicate(pred)
            records = [
                {"N": N, "pred": predicate.text, "prob": plancherel_prob(N, predicate)}
            ]
        elif N is not None:
            records = [_partition_record(parts) for parts in enumerate_partitions(N)]
        else:
            print_and_raise(
                "Nothing to do. Use --plancherel, --dim, --N, --t with --pred or "
                "--fixtures.",
                code=2,
            )

    write_records(records, run.output, out)


@app_plandet.command()
def matrix(
    kind: str = typer.Option(
        "nystrom", "--kind", help="nystrom, lattice or toeplitz."
    ),
    symbol: str = typer.Option(
        DEFAULT_SYMBOL, "--symbol", help="Symbol descriptor as JSON."
    ),
    n: int = typer.Option(0, "--n", help="Operator index."),
    points: int = typer.Option(32, "--points", help="Nyström grid size."),
    size: int = typer.Option(16, "--size", help="Lattice window size."),
    side: str = typer.Option("S", "--side", help="Lattice side: S or R."),
    m: int = typer.Option(1, "--m", help="Colors for the lattice kernel."),
    out: Path = out_option,
    config: Path = config_option,
):
    """Export K_n (Nyström), a lattice window of S/R or T_n as a JSON matrix."""
    if kind not in ("nystrom", "lattice", "toeplitz"):
        print_and_raise(
            f"Unknown matrix kind '{kind}'. Use nystrom, lattice or toeplitz.", code=2
        )

    run = RunConfig.from_config(
        "matrix", {}, _descriptor(symbol), None, None, 1, config
    )
    sym = _symbol(symbol, run)

    with _input_errors():
        if kind == "nystrom":
            values = nystrom_matrix(sym, n, QuadratureGrid.trapezoid(points))
        elif kind == "lattice":
            if side not in ("S", "R"):
                raise ValueError(f"side must be 'S' or 'R', got {side!r}.")
            values = DiscreteKernel(side, sym, m).window(n, size)
        else:
            values = toeplitz(sym, n).entries

    text = matrix_to_json(values)

    if out is None:
        print(text)
    else:
        out.write_text(text + "\n", encoding="utf-8")
        print_ok(f"Written {values.shape[0]}×{values.shape[1]} matrix to '{out}'.")


@app_plandet.command()
def version():
    "Print version."
    console.print(f"plandet {__version__}")


@app_plandet.callback(invoke_without_command=True)
def main_callback(ctx: typer.Context):
    """Show help when no command is provided."""
    if ctx.invoked_subcommand is None:
        console.print("")
        console.print(f" Version: {__version__}", style="bright_yellow")
        console.print(ctx.get_help())
        raise typer.Exit()
