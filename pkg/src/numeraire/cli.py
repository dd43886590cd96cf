"""Command-line front end.

Exit codes: 0 success, 2 bad flags, 3 arbitrage or configuration errors,
4 payoff parse errors. Output is buffered and written only on success.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import dataclass, field

import numpy as np

from . import analytic, lattice, one_period, payoff_expr
from .errors import PayoffSyntaxError, PricingError

FORMAT_ENV = "NUMERAIRE_FORMAT"
FORMATS = ("table", "csv", "json")

DEFAULT_CONVERGE_GRID = [2**k for k in range(13)]  # 1 .. 4096
DEFAULT_MOMENT_LAMBDAS = [-1.0, 0.0, 0.5, 1.0, 2.0, 3.0]
DEFAULT_MOMENT_STEPS = [1, 100, 1000, 10000, 100000]


class FlagError(Exception):
    pass


@dataclass
class Table:
    name: str
    columns: list[str]
    rows: list[list]
    # per-column formatter for table/csv output; None means full precision
    display: list | None = None


@dataclass
class Report:
    tables: list[Table] = field(default_factory=list)
    data: dict = field(default_factory=dict)


def _full(v) -> str:
    if isinstance(v, float):
        return format(v, ".17g")
    return str(v)


def _cell(v, fmt) -> str:
    if v is None:
        return ""
    if fmt is not None and isinstance(v, (float, np.floating)):
        return format(v, fmt)
    return _full(v)


def render(report: Report, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report.data, indent=2, sort_keys=True) + "\n"
    out = io.StringIO()
    for i, t in enumerate(report.tables):
        disp = t.display or [None] * len(t.columns)
        if fmt == "csv":
            if i:
                out.write("\n")
            w = csv.writer(out, lineterminator="\n")
            w.writerow(t.columns)
            for row in t.rows:
                w.writerow([_cell(v, f) for v, f in zip(row, disp)])
            continue
        # human table: paper-facing tables carry explicit display formats
        tdisp = [f if f is not None else ".8g" for f in disp]
        cells = [[_cell(v, f) for v, f in zip(row, tdisp)] for row in t.rows]
        widths = [max([len(c)] + [len(r[j]) for r in cells]) for j, c in enumerate(t.columns)]
        if i:
            out.write("\n")
        out.write(f"{t.name}\n")
        out.write("  ".join(c.rjust(w) for c, w in zip(t.columns, widths)).rstrip() + "\n")
        out.write("  ".join("-" * w for w in widths) + "\n")
        for r in cells:
            out.write("  ".join(c.rjust(w) for c, w in zip(r, widths)).rstrip() + "\n")
    return out.getvalue()


def _float_list(text) -> list[float]:
    if isinstance(text, (list, tuple)):
        return [float(v) for v in text]
    try:
        return [float(v) for v in str(text).split(",") if v.strip()]
    except ValueError as exc:
        raise FlagError(f"invalid number list {text!r}") from exc


def _int_list(text) -> list[int]:
    vals = _float_list(text)
    if any(v != int(v) or v < 1 for v in vals):
        raise FlagError(f"step grid must contain positive integers, got {text!r}")
    return [int(v) for v in vals]


def _read_payoff(text: str) -> payoff_expr.Node:
    if text == "-":
        text = sys.stdin.read().strip()
    return payoff_expr.parse(text)


def _df_arg(text) -> float | list[float]:
    vals = _float_list(text)
    if not vals:
        raise FlagError("--df needs at least one value")
    return vals[0] if len(vals) == 1 else vals


def _kv_report(title: str, values: dict) -> Report:
    rows = [[k, v] for k, v in values.items()]
    return Report([Table(title, ["quantity", "value"], rows)], dict(values))


def cmd_one_step(a) -> Report:
    if a.x_fwd is None and a.spot is None:
        raise FlagError("one-step needs --x-fwd or --spot")
    df = a.df if a.df is not None else math.exp(-a.rate * a.tau)
    x_fwd = a.x_fwd if a.x_fwd is not None else a.spot / df
    m = one_period.OneStepMarket(x_fwd, a.x_up, a.x_dn, df)
    if a.payoff is not None:
        node = _read_payoff(a.payoff)
        claim = one_period.BinaryClaim(payoff_expr.evaluate(node, a.x_up), payoff_expr.evaluate(node, a.x_dn))
    elif a.v_up is not None and a.v_dn is not None:
        claim = one_period.BinaryClaim(a.v_up, a.v_dn)
    else:
        raise FlagError("one-step needs --v-up and --v-dn, or --payoff")
    p_up, p_dn = one_period.martingale_probs(m)
    a_x, a_rf = one_period.replication_weights(m, claim)
    return _kv_report("one-step", {
        "x_fwd": x_fwd, "df": df, "p_up": p_up, "p_dn": p_dn,
        "a_x": a_x, "a_rf": a_rf, "price": one_period.price_one_step(m, claim),
    })


def _tree_spec(a) -> lattice.TreeSpec:
    return lattice.TreeSpec(a.x0, a.u, a.d, a.steps, _df_arg(a.df))


def cmd_tree(a) -> Report:
    node = _read_payoff(a.payoff)
    if a.y0 is not None:
        price = lattice.numeraire_tree_price(a.x0, a.y0, a.u, a.d, a.steps, node)
        return _kv_report("two-asset tree", {"payoff": payoff_expr.render(node), "price": price})
    spec = _tree_spec(a)
    vals = payoff_expr.evaluate(node, lattice.terminal_values(spec))
    out = {
        "payoff": payoff_expr.render(node),
        "total_df": lattice.mma_discount(spec.discount_schedule),
        "price_backward": lattice.rollback(spec, vals),
    }
    if spec.constant_df:
        out["p_hat"] = float(spec.step_probs()[0])
        out["expected_payoff"] = lattice.expected_payoff(spec, vals)
        out["price_forward"] = lattice.price_forward(spec, vals)
    return _kv_report("tree", out)


def _exchange_inputs(a) -> analytic.ExchangeOptionInputs:
    if a.strike is not None:
        if a.x0 is None:
            raise FlagError("--strike needs --x0 (spot)")
        y0 = a.strike * math.exp(-a.rate * a.T)
    elif a.y0 is not None:
        y0 = a.y0
    else:
        raise FlagError("need --y0, or --strike with --rate")
    if a.x0 is None:
        raise FlagError("need --x0")
    return analytic.ExchangeOptionInputs(a.x0, y0, a.sigma, a.T)


def cmd_closed_form(a) -> Report:
    inp = _exchange_inputs(a)
    call, d_plus, d_minus = analytic.margrabe_price(inp)
    dx, dy = analytic.exchange_delta(inp)
    return _kv_report("closed-form", {
        "x0": inp.x0, "y0": inp.y0, "call": call, "put": analytic.exchange_put(inp),
        "d_plus": d_plus, "d_minus": d_minus, "delta_x": dx, "delta_y": dy,
    })


def cmd_converge(a) -> Report:
    inp = _exchange_inputs(a)
    grid = _int_list(a.grid) if a.grid is not None else DEFAULT_CONVERGE_GRID
    closed = analytic.margrabe_price(inp)[0]
    rows = []
    for n in grid:
        tree = analytic.exchange_tree_price(inp, n)
        rows.append([n, tree, closed, abs(tree - closed)])
    cols = ["n", "tree_price", "closed_form", "abs_error"]
    return Report([Table("converge", cols, rows)], {"rows": [dict(zip(cols, r)) for r in rows]})


def cmd_moments(a) -> Report:
    lams = _float_list(a.lambdas) if a.lambdas is not None else DEFAULT_MOMENT_LAMBDAS
    grid = _int_list(a.grid) if a.grid is not None else DEFAULT_MOMENT_STEPS
    rows = []
    for lam in lams:
        residual = analytic.moment_relation_residual(lam, a.sigma, a.T)
        for n in grid:
            ms = analytic.MomentSpec(lam, a.sigma, a.T, n)
            fin = analytic.finite_n_moment(ms)
            lim = analytic.limit_moment(ms)
            rows.append([lam, n, fin, lim, abs(fin - lim) / lim, residual])
    cols = ["lambda", "n", "finite_moment", "limit_moment", "rel_error", "relation_residual"]
    return Report([Table("moments", cols, rows)], {"rows": [dict(zip(cols, r)) for r in rows]})


def tableau_tables(spec: lattice.TreeSpec, node: payoff_expr.Node) -> tuple[Table, Table, dict]:
    prices = lattice.build_lattice(spec)
    terminal = prices.terminal
    pay = payoff_expr.evaluate(node, terminal)
    dist = lattice.forward_induction(spec)
    root, values = lattice.backward_induction(spec, pay)
    n = spec.steps
    steps = [str(k) for k in range(n + 1)]
    fwd_rows, bwd_rows = [], []
    for i in range(n + 1):
        fwd_rows.append([prices.levels[k][i] if i <= k else None for k in range(n + 1)]
                        + [pay[i], dist.probabilities[i]])
        bwd_rows.append([values.levels[k][i] if i <= k else None for k in range(n + 1)])
    fwd = Table("forward", steps + ["Payoff", "Prob"], fwd_rows, [".2f"] * (n + 2) + [".4f"])
    bwd = Table("backward", steps, bwd_rows, [".2f"] * (n + 1))
    data = {
        "prices": [lv.tolist() for lv in prices.levels],
        "payoff": pay.tolist(),
        "probabilities": dist.probabilities.tolist(),
        "values": [lv.tolist() for lv in values.levels],
        "expected_payoff": dist.expectation(pay),
        "total_df": lattice.mma_discount(spec.discount_schedule),
        "root": root,
    }
    return fwd, bwd, data


def cmd_tableau(a) -> Report:
    node = _read_payoff(a.payoff)
    fwd, bwd, data = tableau_tables(_tree_spec(a), node)
    tables = {"forward": [fwd], "backward": [bwd], "both": [fwd, bwd]}[a.which]
    return Report(tables, data)


COMMANDS = {
    "one-step": (cmd_one_step, ["x_up", "x_dn"]),
    "tree": (cmd_tree, ["x0", "u", "d", "steps", "payoff"]),
    "closed-form": (cmd_closed_form, ["sigma", "T"]),
    "converge": (cmd_converge, ["sigma", "T"]),
    "moments": (cmd_moments, ["sigma", "T"]),
    "tableau": (cmd_tableau, ["x0", "u", "d", "steps", "payoff"]),
}


def build_parser() -> tuple[argparse.ArgumentParser, dict[str, argparse.ArgumentParser]]:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=FORMATS, default=None,
                        help=f"output format (default: ${FORMAT_ENV} or 'table')")
    common.add_argument("--output", "-o", default=None, help="write to this file instead of stdout")
    common.add_argument("--config", default=None, help="JSON file of flag defaults")

    parser = argparse.ArgumentParser(prog="numeraire", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    subs = {}

    p = subs["one-step"] = sub.add_parser("one-step", parents=[common], help="single-period replication")
    p.add_argument("--x-fwd", type=float)
    p.add_argument("--spot", type=float)
    p.add_argument("--rate", type=float, default=0.0)
    p.add_argument("--tau", type=float, default=1.0)
    p.add_argument("--x-up", type=float)
    p.add_argument("--x-dn", type=float)
    p.add_argument("--df", type=float)
    p.add_argument("--v-up", type=float)
    p.add_argument("--v-dn", type=float)
    p.add_argument("--payoff", help="expression in X; '-' reads standard input")

    for name, helptext in (("tree", "price a payoff on a binomial tree"),
                           ("tableau", "forward and backward tableaus")):
        p = subs[name] = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("--x0", type=float)
        p.add_argument("--u", type=float)
        p.add_argument("--d", type=float)
        p.add_argument("--steps", type=int)
        p.add_argument("--df", default="1", help="per-step discount factor or comma-separated schedule")
        p.add_argument("--payoff", help="payoff expression; '-' reads standard input")
    subs["tree"].add_argument("--y0", type=float,
                              help="price a homothetic claim on (X, Y); u and d then move X/Y")
    subs["tableau"].add_argument("--which", choices=("forward", "backward", "both"), default="both")

    for name, helptext in (("closed-form", "exchange option / Black-Scholes closed form"),
                           ("converge", "tree price versus closed form over a step grid")):
        p = subs[name] = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("--x0", type=float)
        p.add_argument("--y0", type=float)
        p.add_argument("--strike", type=float, help="price a call on cash: y0 = strike*exp(-rate*T)")
        p.add_argument("--rate", type=float, default=0.0)
        p.add_argument("--sigma", type=float)
        p.add_argument("--T", type=float)
    subs["converge"].add_argument("--grid", help="comma-separated step counts")

    p = subs["moments"] = sub.add_parser("moments", parents=[common], help="finite-n vs limit moments")
    p.add_argument("--sigma", type=float)
    p.add_argument("--T", type=float)
    p.add_argument("--lambdas", help="comma-separated exponents")
    p.add_argument("--grid", help="comma-separated step counts")
    return parser, subs


def _apply_config(argv, subs) -> None:
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    pre.add_argument("command", nargs="?")
    known, _ = pre.parse_known_args(argv)
    if not known.config or known.command not in subs:
        return
    try:
        with open(known.config) as fh:
            cfg = json.load(fh)
    except (OSError, ValueError) as exc:
        raise FlagError(f"cannot read config {known.config!r}: {exc}") from exc
    if not isinstance(cfg, dict):
        raise FlagError("config must be a JSON object")
    if isinstance(cfg.get(known.command), dict):
        cfg = cfg[known.command]
    p = subs[known.command]
    dests = {a.dest for a in p._actions}
    cfg = {k.replace("-", "_"): v for k, v in cfg.items() if k not in COMMANDS}
    unknown = set(cfg) - dests
    if unknown:
        raise FlagError(f"unknown config keys: {', '.join(sorted(unknown))}")
    p.set_defaults(**cfg)


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser, subs = build_parser()
    try:
        _apply_config(argv, subs)
    except FlagError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    fmt = args.format or os.environ.get(FORMAT_ENV, "table")
    if fmt not in FORMATS:
        print(f"error: unknown output format {fmt!r}", file=sys.stderr)
        return 2
    func, required = COMMANDS[args.command]
    missing = [r for r in required if getattr(args, r) is None]
    if missing:
        subs[args.command].print_usage(sys.stderr)
        print(f"error: missing required flags: {', '.join('--' + m.replace('_', '-') for m in missing)}",
              file=sys.stderr)
        return 2

    try:
        text = render(func(args), fmt)
    except FlagError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except PayoffSyntaxError as exc:
        print(f"error: {exc.message} at offset {exc.offset}", file=sys.stderr)
        return 4
    except PricingError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3

    if args.output:
        with open(args.output, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
