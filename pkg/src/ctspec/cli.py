"""Command-line front end.

Subcommands: gamma (spectral profiles), classify (boundedness verdicts),
verify (discretized-operator suites), laguerre (basis evaluation), and
means (iterated-mean tables).  Exit code 0 means every requested
computation completed within its budget; parse and domain errors exit
nonzero with a message on standard error.
"""

import json
import sys

import click
import numpy as np

from .boundedness import classify as classify_symbol
from .gamma import gamma_profile
from .harness import decay_report, equivalence_report, isometry_report, report_to_json
from .laguerre import ell_eval, laguerre_eval
from .symbols import SymbolError, SymbolParseError, iterated_mean, parse_symbol


def _parse_ks(k, k_range, default):
    if k is not None and k_range is not None:
        raise click.UsageError("use either --k or --k-range, not both")
    if k is not None:
        return [k]
    if k_range is None:
        return list(default)
    text = k_range.strip()
    try:
        if ".." in text:
            lo, hi = text.split("..")
            lo, hi = int(lo), int(hi)
            if hi < lo:
                raise ValueError
            return list(range(lo, hi + 1))
        return [int(p) for p in text.split(",")]
    except ValueError:
        raise click.UsageError(f"cannot parse k range {text!r}; use N, N..M, or N,M,...")


def _parse_symbol_arg(text):
    try:
        return parse_symbol(text)
    except (SymbolParseError, SymbolError) as exc:
        raise click.ClickException(str(exc))


def _emit(text, out):
    if out is None:
        click.echo(text)
    else:
        with open(out, "w") as fh:
            fh.write(text)
            if not text.endswith("\n"):
                fh.write("\n")


@click.group()
def main():
    """Spectral profiles and boundedness analysis for vertical-symbol
    Toeplitz operators on wavelet subspaces."""


@main.command("gamma")
@click.option("--symbol", required=True, help="symbol expression, e.g. 'sininvpow(1, 0.5)'")
@click.option("--k", type=int, default=None, help="subspace level (default 0)")
@click.option("--k-range", default=None, help="levels as N..M or comma list")
@click.option("--xi-min", type=float, default=1e-4, show_default=True)
@click.option("--xi-max", type=float, default=1e4, show_default=True)
@click.option("--points", type=int, default=200, show_default=True)
@click.option("--tol", type=float, default=1e-10, show_default=True)
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv", show_default=True)
@click.option("--out", default=None, help="output path (default: standard output)")
def cmd_gamma(symbol, k, k_range, xi_min, xi_max, points, tol, fmt, out):
    """Tabulate the spectral function gamma_{a,k} on a log grid."""
    s = _parse_symbol_arg(symbol)
    ks = _parse_ks(k, k_range, [0])
    try:
        profiles = [gamma_profile(s, kk, xi_min, xi_max, points, tol) for kk in ks]
    except (SymbolError, ValueError) as exc:
        raise click.ClickException(str(exc))
    if fmt == "csv":
        if len(profiles) == 1:
            body = profiles[0].to_csv()
        else:
            lines = ["k,xi,re,im,abs"]
            for kk, prof in zip(ks, profiles):
                for row in prof.to_csv().splitlines()[1:]:
                    lines.append(f"{kk},{row}")
            body = "\n".join(lines)
    else:
        docs = [json.loads(prof.to_json()) for prof in profiles]
        body = json.dumps(docs[0] if len(docs) == 1 else docs, indent=2)
    _emit(body, out)
    summary = sys.stdout if out is not None else sys.stderr
    for kk, prof in zip(ks, profiles):
        print(
            f"k={kk}: sup |gamma| ~ {prof.sup_estimate:.6g} at xi={prof.argmax_xi:.6g}; "
            f"limit at 0: {prof.limit_at_zero.kind}; limit at infinity: {prof.limit_at_infinity.kind}",
            file=summary,
        )


@main.command("classify")
@click.option("--symbol", required=True)
@click.option("--max-mean-order", type=int, default=4, show_default=True)
@click.option("--out", default=None)
def cmd_classify(symbol, max_mean_order, out):
    """Classify a symbol's Toeplitz family as bounded or unbounded."""
    s = _parse_symbol_arg(symbol)
    try:
        verdict = classify_symbol(s, max_mean_order=max_mean_order)
    except (SymbolError, ValueError) as exc:
        raise click.ClickException(str(exc))
    _emit(verdict.to_json(), out)


@main.command("verify")
@click.option("--suite", type=click.Choice(["isometry", "equivalence", "decay"]), required=True)
@click.option("--k", type=int, default=None)
@click.option("--k-range", default=None)
@click.option("--symbol", default=None, help="equivalence suite: restrict to one symbol")
@click.option("--alpha", type=float, default=1.0, show_default=True, help="decay suite")
@click.option("--beta", type=float, default=0.5, show_default=True, help="decay suite")
@click.option("--n-list", default="4,8,16,32,64", show_default=True, help="decay suite")
@click.option("--seed", type=int, default=7, show_default=True)
@click.option("--out", default=None, help="JSON report path (default: standard output)")
def cmd_verify(suite, k, k_range, symbol, alpha, beta, n_list, seed, out):
    """Run a discretized-operator verification suite; exit 1 on violation."""
    try:
        if suite == "isometry":
            ks = _parse_ks(k, k_range, range(6))
            report = isometry_report(k_max=max(ks), seed=seed)
        elif suite == "equivalence":
            ks = tuple(_parse_ks(k, k_range, (0, 2)))
            symbols = None
            if symbol is not None:
                symbols = [(symbol, _parse_symbol_arg(symbol))]
            report = equivalence_report(symbols=symbols, ks=ks)
        else:
            ks = tuple(_parse_ks(k, k_range, (0, 1, 2)))
            ns = tuple(int(p) for p in n_list.split(","))
            report = decay_report(alpha=alpha, beta=beta, ks=ks, n_list=ns)
    except (SymbolError, ValueError) as exc:
        raise click.ClickException(str(exc))
    _emit(report_to_json(report), out)
    if not report["pass"]:
        for t in report["tests"]:
            if not t["pass"]:
                detail = f"error {t['error']:.3e}" if "error" in t else f"slope {t['slope']:.4f}"
                print(f"budget exceeded: {t['name']} ({detail}, budget {t['budget']:.3g})", file=sys.stderr)
        sys.exit(1)


@main.command("laguerre")
@click.option("--k", type=int, required=True, help="degree")
@click.option("--alpha", type=float, default=None, help="generalized parameter (plain polynomial)")
@click.option("--x", "xs", default=None, help="comma list of evaluation points")
@click.option("--x-min", type=float, default=0.0, show_default=True)
@click.option("--x-max", type=float, default=20.0, show_default=True)
@click.option("--points", type=int, default=41, show_default=True)
@click.option("--weighted/--plain", default=True, help="weighted ell_k vs bare polynomial")
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv", show_default=True)
@click.option("--out", default=None)
def cmd_laguerre(k, alpha, xs, x_min, x_max, points, weighted, fmt, out):
    """Evaluate the Laguerre basis directly."""
    if k < 0:
        raise click.ClickException("k must be >= 0")
    if xs is not None:
        try:
            grid = np.array([float(p) for p in xs.split(",")])
        except ValueError:
            raise click.ClickException(f"cannot parse --x {xs!r}")
    else:
        grid = np.linspace(x_min, x_max, points)
    if alpha is not None:
        vals = laguerre_eval(k, alpha, grid)
    elif weighted:
        vals = ell_eval(k, grid)
    else:
        vals = laguerre_eval(k, 0.0, grid)
    if fmt == "csv":
        lines = ["x,value"]
        lines += [f"{x:.17g},{v:.17g}" for x, v in zip(grid, vals)]
        _emit("\n".join(lines), out)
    else:
        _emit(json.dumps({"k": k, "x": list(grid), "value": list(vals)}, indent=2), out)


@main.command("means")
@click.option("--symbol", required=True)
@click.option("--order", type=int, default=1, show_default=True, help="iterated-mean order m")
@click.option("--v-min", type=float, default=1e-3, show_default=True)
@click.option("--v-max", type=float, default=1e3, show_default=True)
@click.option("--points", type=int, default=60, show_default=True)
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv", show_default=True)
@click.option("--out", default=None)
def cmd_means(symbol, order, v_min, v_max, points, fmt, out):
    """Tabulate the iterated mean C_a^(m) on a log grid."""
    s = _parse_symbol_arg(symbol)
    if order < 1:
        raise click.ClickException("order must be >= 1")
    if not (0 < v_min < v_max):
        raise click.ClickException("need 0 < v-min < v-max")
    grid = np.geomspace(v_min, v_max, points)
    try:
        vals = [complex(iterated_mean(s, order, v)) for v in grid]
    except (SymbolError, ValueError) as exc:
        raise click.ClickException(str(exc))
    if fmt == "csv":
        lines = ["v,re,im"]
        lines += [f"{v:.17g},{c.real:.17g},{c.imag:.17g}" for v, c in zip(grid, vals)]
        _emit("\n".join(lines), out)
    else:
        _emit(
            json.dumps(
                {
                    "symbol": symbol,
                    "order": order,
                    "v": list(grid),
                    "re": [c.real for c in vals],
                    "im": [c.imag for c in vals],
                },
                indent=2,
            ),
            out,
        )


if __name__ == "__main__":
    main()
