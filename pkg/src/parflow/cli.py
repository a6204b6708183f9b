"""Command-line frontend.

Every operation of the library is reachable as a subcommand with
deterministic output: identical invocations produce byte-identical
payloads.  ``--format json|csv|table`` selects the emission; domain
errors exit 1 with a JSON body carrying an ``error`` field; usage errors
exit 2.  The scan path can additionally render a matplotlib figure next
to the delimited output.
"""

from __future__ import annotations

import functools
import json
import sys
from fractions import Fraction

import click

from . import serialize as ser
from .arith import frac_part, is_prime
from .characters import (
    ResidueBlockAssembly,
    assemble_pushforward_residue,
    check_adjusted,
    chars_to_weights,
    frobenius_on_chars,
    pullback_residue_eigenvalues,
    weights_to_chars,
)
from .flow import (
    EquivarianceDefects,
    TerminationReason,
    flow_trajectory,
    global_period_bound,
    katz_period_bound,
    katz_period_params,
    minimal_equivariance_period,
    minimal_geometric_period,
    prime_scan,
    rank_one_period,
    weight_orbit,
)
from .parabolic import (
    CurveShape,
    ParabolicLineBundleSpec,
    ParabolicShape,
    WeightSystem,
    cartier_weights,
    inverse_cartier_weights,
    line_bundle_shape,
    pardeg,
)

FORMATS = click.Choice(["json", "csv", "table"])


def format_option(fn):
    return click.option("--format", "fmt", type=FORMATS, default="table", show_default=True,
                        help="Output emission format.")(fn)


def domain_errors(fn):
    """Map domain violations to exit 1 with a structured JSON error."""

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except ValueError as exc:
            click.echo(ser.canonical_json({"error": str(exc)}))
            sys.exit(1)

    return wrapper


def emit(fmt: str, payload, table_lines, csv_text: str | None = None) -> None:
    if fmt == "json":
        click.echo(ser.canonical_json(payload))
    elif fmt == "csv":
        if csv_text is None:
            rows = ser.flatten_for_csv(payload)
            csv_text = "key,value\n" + "\n".join(f"{k},{v}" for k, v in rows)
        click.echo(csv_text)
    else:
        click.echo("\n".join(table_lines))


def warn_composite(p: int) -> None:
    if p >= 2 and not is_prime(p):
        click.echo(f"warning: p={p} is composite; formulas use p only as a unit mod N", err=True)


def load_weight_system(n: int | None, weights: str | None, input_path: str | None) -> WeightSystem:
    if (weights is None) == (input_path is None):
        raise click.UsageError("provide exactly one of --weights or --input")
    if input_path is not None:
        with open(input_path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
        ws = WeightSystem.from_json_dict(data)
        if n is not None and n != ws.N:
            raise ValueError(f"--N {n} contradicts the input file's N={ws.N}")
        return ws
    if n is None:
        raise click.UsageError("--N is required with inline --weights")
    return ser.parse_weight_system(weights, n)


def build_shape(rank: int, deg0: int, genus: int, ws: WeightSystem) -> ParabolicShape:
    curve = CurveShape(genus, ws.punctures, ws.N)
    return ParabolicShape(rank, deg0, ws, curve)


@click.group()
def main() -> None:
    """Exact invariants of parabolic weight dynamics in characteristic p."""


@main.command("frac")
@click.argument("value")
@format_option
@domain_errors
def frac_cmd(value: str, fmt: str) -> None:
    """Fractional part of an exact rational."""
    result = frac_part(ser.parse_fraction(value))
    emit(fmt, {"frac": str(result)}, [str(result)])


@main.command("pardeg")
@click.option("--rank", type=int, required=True)
@click.option("--deg0", type=int, required=True)
@click.option("--N", "n", type=int, default=None)
@click.option("--weights", default=None, help="Inline weight system, e.g. 'D:1/2x2'.")
@click.option("--input", "input_path", type=click.Path(exists=True), default=None)
@click.option("--genus", type=int, default=0, show_default=True)
@format_option
@domain_errors
def pardeg_cmd(rank: int, deg0: int, n: int | None, weights: str | None, input_path: str | None,
               genus: int, fmt: str) -> None:
    """Parabolic degree of a shape."""
    shape = build_shape(rank, deg0, genus, load_weight_system(n, weights, input_path))
    value = pardeg(shape)
    payload = {"pardeg": str(value), "periodicity_candidate": value == 0}
    emit(fmt, payload, [f"pardeg: {value}", f"periodicity candidate: {value == 0}"])


@main.command("linebundle")
@click.option("--degree", type=int, required=True, help="Degree of the underlying line bundle.")
@click.option("--N", "n", type=int, required=True)
@click.option("--twists", required=True, help="Rational twists, e.g. 'D:3/2;E:-1/4'.")
@click.option("--genus", type=int, default=0, show_default=True)
@format_option
@domain_errors
def linebundle_cmd(degree: int, n: int, twists: str, genus: int, fmt: str) -> None:
    """Invariant shape of a rational-divisor twist of a line bundle."""
    twist_map = ser.parse_twists(twists)
    curve = CurveShape(genus, tuple(sorted(twist_map)), n)
    shape = line_bundle_shape(ParabolicLineBundleSpec(degree, twist_map), curve)
    table = [
        f"rank: {shape.rank}",
        f"deg0: {shape.deg0}",
        f"weights: {ser.format_weight_system(shape.weights)}",
    ]
    emit(fmt, shape.to_json_dict(), table)


@main.group("weights")
def weights_group() -> None:
    """Weight maps of the Cartier and inverse Cartier transforms."""


def _weights_map_command(name: str, mapper, doc: str):
    @weights_group.command(name, help=doc)
    @click.option("--N", "n", type=int, default=None)
    @click.option("--p", type=int, required=True)
    @click.option("--weights", default=None)
    @click.option("--input", "input_path", type=click.Path(exists=True), default=None)
    @format_option
    @domain_errors
    def cmd(n: int | None, p: int, weights: str | None, input_path: str | None, fmt: str) -> None:
        warn_composite(p)
        ws = load_weight_system(n, weights, input_path)
        result = mapper(ws, p)
        emit(fmt, result.to_json_dict(), [ser.format_weight_system(result)])

    return cmd


_weights_map_command("icartier", inverse_cartier_weights,
                     "Inverse Cartier on weights: m/N maps to <p*m/N>.")
_weights_map_command("cartier", cartier_weights,
                     "Cartier on weights: multiply by the inverse of p mod N.")


@main.group("flow")
def flow_group() -> None:
    """Orbits of the flow on weight systems and shapes."""


@flow_group.command("weights")
@click.option("--N", "n", type=int, default=None)
@click.option("--p", type=int, required=True)
@click.option("--weights", default=None)
@click.option("--input", "input_path", type=click.Path(exists=True), default=None)
@click.option("--cap", type=int, default=10_000, show_default=True)
@click.option("--trace", is_flag=True, help="Print intermediate orbit states to stderr.")
@format_option
@domain_errors
def flow_weights_cmd(n: int | None, p: int, weights: str | None, input_path: str | None,
                     cap: int, trace: bool, fmt: str) -> None:
    """Orbit of a weight system under the inverse Cartier map."""
    warn_composite(p)
    ws = load_weight_system(n, weights, input_path)
    traj = weight_orbit(ws, p, cap)
    if trace:
        for i, state in enumerate(traj.states):
            click.echo(f"step {i}: {ser.format_weight_system(state)}", err=True)
    payload = {
        "N": ws.N,
        "p": p,
        "preperiod": traj.preperiod,
        "period": traj.period,
        "terminated": traj.terminated.value,
        "states": [state.to_json_dict()["weights"] for state in traj.states],
    }
    table = [f"step {i}: {ser.format_weight_system(s)}" for i, s in enumerate(traj.states)]
    table.append(f"period: {traj.period}" if traj.found else f"terminated: {traj.terminated.value}")
    emit(fmt, payload, table)


@flow_group.command("shape")
@click.option("--rank", type=int, required=True)
@click.option("--deg0", type=int, required=True)
@click.option("--N", "n", type=int, default=None)
@click.option("--p", type=int, required=True)
@click.option("--weights", default=None)
@click.option("--input", "input_path", type=click.Path(exists=True), default=None)
@click.option("--genus", type=int, default=0, show_default=True)
@click.option("--cap", type=int, default=10_000, show_default=True)
@click.option("--trace", is_flag=True, help="Print intermediate states to stderr.")
@format_option
@domain_errors
def flow_shape_cmd(rank: int, deg0: int, n: int | None, p: int, weights: str | None,
                   input_path: str | None, genus: int, cap: int, trace: bool, fmt: str) -> None:
    """Trajectory of a parabolic shape under the flow step."""
    warn_composite(p)
    shape = build_shape(rank, deg0, genus, load_weight_system(n, weights, input_path))
    traj = flow_trajectory(shape, p, cap)
    if trace:
        for i, state in enumerate(traj.states):
            click.echo(f"step {i}: deg0={state.deg0} {ser.format_weight_system(state.weights)}", err=True)
    payload = {
        "p": p,
        "pardeg": str(pardeg(shape)),
        "preperiod": traj.preperiod,
        "period": traj.period,
        "terminated": traj.terminated.value,
        "states": [state.to_json_dict() for state in traj.states],
    }
    table = [f"step {i}: deg0={s.deg0} {ser.format_weight_system(s.weights)}" for i, s in enumerate(traj.states)]
    if traj.terminated is TerminationReason.NEVER_PERIODIC:
        table.append(f"never periodic: pardeg {pardeg(shape)} is nonzero and scales by p={p} every step")
    elif traj.found:
        table.append(f"period: {traj.period}")
    else:
        table.append(f"terminated: {traj.terminated.value}")
    emit(fmt, payload, table)


@main.group("period")
def period_group() -> None:
    """Explicit period computations and bounds."""


@period_group.command("bound")
@click.option("--N", "n", type=int, required=True)
@click.option("--p", type=int, required=True)
@click.option("--details", is_flag=True, help="Include the gcd-tower integers.")
@format_option
@domain_errors
def period_bound_cmd(n: int, p: int, details: bool, fmt: str) -> None:
    """f with N dividing 1 + p + ... + p**(f-1), plus the verified remainder."""
    warn_composite(p)
    f = katz_period_bound(n, p)
    payload = {"f": f, "sum_mod_N": 0}
    table = [f"f: {f}", "sum_mod_N: 0"]
    if details:
        params = katz_period_params(n, p)
        payload.update({"q": params.q, "d": params.d, "N_prime": params.nprime,
                        "q_prime": params.qprime, "k": params.k})
        table += [f"q: {params.q}", f"d: {params.d}", f"N': {params.nprime}",
                  f"q': {params.qprime}", f"k: {params.k}"]
    emit(fmt, payload, table)


@period_group.command("minimal")
@click.option("--N", "n", type=int, required=True)
@click.option("--p", type=int, required=True)
@click.option("--l", "defect", type=int, required=True)
@format_option
@domain_errors
def period_minimal_cmd(n: int, p: int, defect: int, fmt: str) -> None:
    """Minimal f with N dividing l * (1 + p + ... + p**(f-1))."""
    warn_composite(p)
    f = minimal_geometric_period(n, p, defect)
    emit(fmt, {"f": f}, [f"f: {f}"])


@period_group.command("equivariance")
@click.option("--N", "n", type=int, required=True)
@click.option("--p", type=int, required=True)
@click.option("--defects", required=True, help="Comma-separated defects, e.g. '4,6'.")
@format_option
@domain_errors
def period_equivariance_cmd(n: int, p: int, defects: str, fmt: str) -> None:
    """Minimal f clearing every equivariance defect simultaneously."""
    warn_composite(p)
    f = minimal_equivariance_period(EquivarianceDefects(n, ser.parse_defects(defects)), p)
    emit(fmt, {"f": f}, [f"f: {f}"])


@period_group.command("global")
@click.option("--N", "n", type=int, required=True)
@format_option
@domain_errors
def period_global_cmd(n: int, fmt: str) -> None:
    """The p-independent bound phi(N * (N-2)!)."""
    bound = global_period_bound(n)
    emit(fmt, {"bound": bound}, [f"bound: {bound}"])


@period_group.command("rankone")
@click.option("--m", type=int, required=True, help="Torsion order of the line bundle.")
@click.option("--p", type=int, required=True)
@format_option
@domain_errors
def period_rankone_cmd(m: int, p: int, fmt: str) -> None:
    """Flow period of a torsion line bundle: the order of p mod m."""
    warn_composite(p)
    period = rank_one_period(m, p)
    emit(fmt, {"period": period}, [f"period: {period}"])


@main.command("scan")
@click.option("--N", "n", type=int, default=None)
@click.option("--weights", default=None)
@click.option("--input", "input_path", type=click.Path(exists=True), default=None)
@click.option("--p-max", type=int, required=True)
@click.option("--plot", "plot_path", type=click.Path(), default=None,
              help="Render a period/bound figure to this file.")
@format_option
@domain_errors
def scan_cmd(n: int | None, weights: str | None, input_path: str | None, p_max: int,
             plot_path: str | None, fmt: str) -> None:
    """Weight period, explicit bound and witness for every prime up to p-max."""
    ws = load_weight_system(n, weights, input_path)
    rows = prime_scan(ws, p_max)
    payload = [{"p": r.p, "period": r.period, "bound": r.bound, "sum_mod_N": r.sum_mod_n} for r in rows]
    csv_text = "p,period,bound,sum_mod_N\n" + "\n".join(
        f"{r.p},{r.period},{r.bound},{r.sum_mod_n}" for r in rows
    )
    header = f"{'p':>6} {'period':>8} {'bound':>8} {'sum_mod_N':>10}"
    table = [header] + [f"{r.p:>6} {r.period:>8} {r.bound:>8} {r.sum_mod_n:>10}" for r in rows]
    if plot_path is not None:
        _render_scan_figure(rows, ws.N, plot_path)
        click.echo(f"figure written to {plot_path}", err=True)
    emit(fmt, payload, table, csv_text)


def _render_scan_figure(rows, n: int, path: str) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6, 4))
    ps = [r.p for r in rows]
    ax.scatter(ps, [r.period for r in rows], marker="o", label="weight period", zorder=3)
    ax.scatter(ps, [r.bound for r in rows], marker="x", label="divisibility bound", zorder=2)
    ax.set_xlabel("prime p")
    ax.set_ylabel("flow steps")
    ax.set_title(f"weight periods mod N={n}")
    ax.set_yscale("log")
    ax.legend()
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)


@main.group("bis")
def bis_group() -> None:
    """The local dictionary between equivariant characters and weights."""


@bis_group.command("push")
@click.option("--N", "n", type=int, required=True)
@click.option("--chars", required=True, help="Inline character system, e.g. 'D:1x2,3x1'.")
@format_option
@domain_errors
def bis_push_cmd(n: int, chars: str, fmt: str) -> None:
    """Characters to parabolic weights (pushforward direction)."""
    ws = chars_to_weights(ser.parse_character_system(chars, n))
    emit(fmt, ws.to_json_dict(), [ser.format_weight_system(ws)])


@bis_group.command("pull")
@click.option("--N", "n", type=int, default=None)
@click.option("--weights", default=None)
@click.option("--input", "input_path", type=click.Path(exists=True), default=None)
@format_option
@domain_errors
def bis_pull_cmd(n: int | None, weights: str | None, input_path: str | None, fmt: str) -> None:
    """Parabolic weights to characters (pullback direction)."""
    cs = weights_to_chars(load_weight_system(n, weights, input_path))
    emit(fmt, cs.to_json_dict(), [ser.format_character_system(cs)])


@bis_group.command("frob")
@click.option("--N", "n", type=int, required=True)
@click.option("--p", type=int, required=True)
@click.option("--chars", required=True)
@format_option
@domain_errors
def bis_frob_cmd(n: int, p: int, chars: str, fmt: str) -> None:
    """Frobenius pullback on characters: multiply by p mod N."""
    warn_composite(p)
    cs = frobenius_on_chars(ser.parse_character_system(chars, n), p)
    emit(fmt, cs.to_json_dict(), [ser.format_character_system(cs)])


@main.group("residue")
def residue_group() -> None:
    """Residue matrices and their exact eigenvalues."""


@residue_group.command("assemble")
@click.option("--input", "input_path", type=click.Path(exists=True), required=True,
              help="JSON file with the block assembly.")
@format_option
@domain_errors
def residue_assemble_cmd(input_path: str, fmt: str) -> None:
    """Assemble the pushforward residue matrix and report its eigenvalues."""
    with open(input_path, "r", encoding="utf-8") as fh:
        asm = ResidueBlockAssembly.from_json_dict(json.load(fh))
    matrix, eigenvalues = assemble_pushforward_residue(asm)
    payload = {
        "size": len(matrix),
        "eigenvalues": [str(v) for v in eigenvalues],
        "matrix": [[str(v) for v in row] for row in matrix],
    }
    table = [f"eigenvalues: {', '.join(str(v) for v in eigenvalues)}"]
    table += ["[" + "  ".join(str(v) for v in row) + "]" for row in matrix]
    emit(fmt, payload, table)


@residue_group.command("pullback")
@click.option("--N", "n", type=int, required=True)
@click.option("--lam", required=True, help="The lambda of the lambda-connection.")
@click.option("--levels", required=True, help="Level/size pairs, e.g. '2x1,4x3'.")
@format_option
@domain_errors
def residue_pullback_cmd(n: int, lam: str, levels: str, fmt: str) -> None:
    """Eigenvalues of the pullback residue (identically zero)."""
    values = pullback_residue_eigenvalues(ser.parse_levels(levels), ser.parse_fraction(lam), n)
    payload = {"eigenvalues": [str(v) for v in values]}
    emit(fmt, payload, [f"eigenvalues: {', '.join(str(v) for v in values)}"])


@main.group("adjusted")
def adjusted_group() -> None:
    """The residue-eigenvalue compatibility of a lambda-connection."""


@adjusted_group.command("check")
@click.option("--lam", required=True)
@click.option("--data", required=True, help="Per-puncture 'weight=eigenvalue' pairs.")
@format_option
@domain_errors
def adjusted_check_cmd(lam: str, data: str, fmt: str) -> None:
    """Check eigenvalue = lambda * weight at every listed graded level."""
    ok, violations = check_adjusted(ser.parse_adjusted_data(data), ser.parse_fraction(lam))
    payload = {
        "adjusted": ok,
        "violations": [
            {"puncture": label, "weight": str(w), "eigenvalue": str(e), "expected": str(x)}
            for label, w, e, x in violations
        ],
    }
    table = [f"adjusted: {ok}"]
    table += [f"violation at {label}: weight {w} has eigenvalue {e}, expected {x}"
              for label, w, e, x in violations]
    emit(fmt, payload, table)


if __name__ == "__main__":
    main()
