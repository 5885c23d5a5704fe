"""Command-line front end.

Exit status is 0 on success, 1 on a domain error (bad model inputs, failed
oracle check) and 2 on a usage error.
"""

import argparse
import json
import sys
from contextlib import contextmanager

from . import __version__
from .exceptions import ConfigError, DomainError
from .game import (
    DEFAULT_EPS,
    LiabilityStructure,
    classify_regime,
    is_snnr_cb_only,
    is_snnr_fire_sale_only,
    is_snnr_mixed,
    max_feasible_liquidity,
    payoff_matrix_cb_only,
)
from .model import (
    LiquidityParams,
    calibrate_delta_from_average_haircut,
    calibrate_theta_from_default_cost,
)
from .optimizer import FundingRates, solve_analytic, solve_bruteforce
from .policy import DELTA_MAX, TABLE_PRECISION, Shock, policy_report
from .sweep import Axis, SweepRow, SweepSpec, format_number, run_sweep, write_csv


class UsageError(Exception):
    pass


def load_config(path):
    """Read a flat ``key = value`` file; ``#`` starts a comment."""
    values = {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise UsageError(f"cannot read config file {path!r}: {exc.strerror}") from exc
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        sep = "=" if "=" in line else ":"
        if sep not in line:
            raise UsageError(f"{path}:{lineno}: expected 'key = value'")
        key, value = line.split(sep, 1)
        values[key.strip().lstrip("-").replace("-", "_")] = value.strip()
    return values


@contextmanager
def _output(path):
    if path in (None, "-"):
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            yield fh


def _print_pairs(pairs, stream=None):
    stream = stream or sys.stdout
    for key, value in pairs:
        if isinstance(value, float):
            value = format_number(value)
        elif isinstance(value, bool):
            value = "true" if value else "false"
        print(f"{key}={value}", file=stream)


def _params(args):
    return LiquidityParams(args.theta, args.delta)


def _rates(args):
    return FundingRates(args.rt, args.re)


def cmd_solve(args):
    if args.method == "bruteforce":
        opt = solve_bruteforce(_params(args), _rates(args), args.step)
    else:
        opt = solve_analytic(_params(args), _rates(args))
    row = SweepRow.from_solution(opt)
    with _output(args.output) as out:
        if args.json:
            json.dump(
                {k: getattr(row, k) for k in row.__dataclass_fields__}, out, indent=2
            )
            out.write("\n")
        else:
            write_csv([row], out)
    return 0


def cmd_check_snnr(args):
    params = _params(args)
    liab = LiabilityStructure.from_equity_term(args.equity, args.term)
    regime = classify_regime(liab, params)
    z_opt, y_max = max_feasible_liquidity(liab.equity, params)
    pairs = [
        ("equity", liab.equity),
        ("term", liab.term),
        ("deposits", liab.deposits),
        ("regime", regime.regime.value),
        ("reason", regime.reason),
        ("z_opt", z_opt),
        ("y_max", y_max),
        ("withdrawal", liab.per_depositor),
        ("snnr", is_snnr_mixed(liab, params)),
        ("snnr_cb_only", is_snnr_cb_only(liab, params)),
    ]
    if params.delta == 0.0:
        pairs.append(("snnr_fire_sale_only", is_snnr_fire_sale_only(liab, params)))
    if params.theta == 0.0 and liab.deposits > 20 * args.eps:
        pay = payoff_matrix_cb_only(liab, params, args.eps)
        pairs += [
            ("payoff_case", pay.case),
            ("u_kk", pay.u_kk),
            ("u_rk", pay.u_rk),
            ("u_kr", pay.u_kr),
            ("u_rr", pay.u_rr),
        ]
    if liab.exceeds_equity_cap(params):
        pairs.append(("equity_cap_warning", True))
    _print_pairs(pairs)
    return 0


def cmd_policy(args):
    shock = Shock(args.theta_pre, args.theta_post, args.delta, _rates(args))
    rep = policy_report(
        shock, grid=args.grid, delta_max=args.delta_max, precision=args.precision
    )
    b = rep.baseline
    _print_pairs(
        [
            ("baseline_t", b.t_opt),
            ("baseline_e", b.e_opt),
            ("baseline_s", b.s_opt),
            ("baseline_z", b.z_opt),
            ("baseline_r", b.r_opt),
            ("baseline_regime", b.winning_candidate.value),
            ("crisis_cost_unmitigated", rep.crisis_cost_unmitigated),
            ("baseline_run_proof_after_shock", rep.baseline_run_proof_after_shock),
            ("delta2", rep.delta2),
            ("delta3", rep.delta3),
            ("delta4", rep.delta4),
        ]
    )
    return 0


def cmd_sweep(args):
    if not args.axis:
        raise UsageError("sweep needs at least one --axis")
    if len(args.axis) > 2:
        raise UsageError("sweep takes at most two --axis options")
    axes = [Axis.parse(a) for a in args.axis]
    supplied = {"theta": args.theta, "delta": args.delta, "r_t": args.rt, "r_e": args.re}
    swept = {a.name for a in axes}
    fixed = {k: v for k, v in supplied.items() if v is not None and k not in swept}
    spec = SweepSpec(axes[0], axes[1] if len(axes) > 1 else None, fixed)
    rows = run_sweep(spec)
    with _output(args.output) as out:
        write_csv(rows, out)
    return 0


def cmd_calibrate(args):
    if args.avg_haircut is None and args.default_cost is None:
        raise UsageError("calibrate needs --avg-haircut and/or --default-cost")
    pairs = []
    if args.avg_haircut is not None:
        pairs.append(("delta", calibrate_delta_from_average_haircut(args.avg_haircut)))
    if args.default_cost is not None:
        pairs.append(("theta", calibrate_theta_from_default_cost(args.default_cost)))
    _print_pairs(pairs)
    return 0


def cmd_oracle(args):
    params, rates = _params(args), _rates(args)
    exact = solve_analytic(params, rates)
    grid = solve_bruteforce(params, rates, args.step)
    diff = abs(exact.r_opt - grid.r_opt)
    bound = 2.0 * (rates.r_t + rates.r_e) * args.step
    ok = diff <= bound
    _print_pairs(
        [
            ("r_analytic", exact.r_opt),
            ("r_bruteforce", grid.r_opt),
            ("abs_diff", diff),
            ("bound", bound),
            ("agree", ok),
        ]
    )
    return 0 if ok else 1


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}\n\n{self.format_help()}")


REQUIRED = {
    "solve": ("theta", "delta", "rt", "re"),
    "check-snnr": ("theta", "delta", "equity", "term"),
    "policy": ("theta_pre", "theta_post", "delta", "rt", "re"),
    "sweep": (),
    "calibrate": (),
    "oracle": ("theta", "delta", "rt", "re"),
}


def build_parser():
    common = _Parser(add_help=False)
    common.add_argument("--config", help="flat key = value file; flags override it")

    parser = _Parser(prog="fundstab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    def liquidity(p):
        p.add_argument("--theta", type=float, help="fire-sale exponent")
        p.add_argument("--delta", type=float, help="collateral exponent")

    def rates(p):
        p.add_argument("--rt", type=float, help="term funding rate")
        p.add_argument("--re", type=float, help="equity rate")

    p = sub.add_parser("solve", parents=[common], help="optimal liability structure")
    liquidity(p)
    rates(p)
    p.add_argument("--method", choices=("analytic", "bruteforce"), default="analytic")
    p.add_argument("--step", type=float, default=1e-3, help="bruteforce grid step")
    p.add_argument("--output", "-o", help="CSV path (default: stdout)")
    p.add_argument("--json", action="store_true", help="emit JSON instead of CSV")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("check-snnr", parents=[common], help="is a structure run-proof?")
    liquidity(p)
    p.add_argument("--equity", type=float)
    p.add_argument("--term", type=float)
    p.add_argument("--eps", type=float, default=DEFAULT_EPS)
    p.set_defaults(func=cmd_check_snnr)

    p = sub.add_parser("policy", parents=[common], help="collateral response to a shock")
    p.add_argument("--theta-pre", type=float)
    p.add_argument("--theta-post", type=float)
    p.add_argument("--delta", type=float, help="pre-crisis collateral exponent")
    rates(p)
    p.add_argument("--grid", type=float, help="delta lattice spacing (table mode)")
    p.add_argument("--precision", type=float, default=TABLE_PRECISION,
                   help="share rounding used in table mode")
    p.add_argument("--delta-max", type=float, default=DELTA_MAX)
    p.set_defaults(func=cmd_policy)

    p = sub.add_parser("sweep", parents=[common], help="grid of optimal structures as CSV")
    p.add_argument("--axis", action="append",
                   help="name:start:stop:step with name in theta, delta, r_t, r_e")
    liquidity(p)
    rates(p)
    p.add_argument("--output", "-o", help="CSV path (default: stdout)")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("calibrate", parents=[common], help="exponents from observables")
    p.add_argument("--avg-haircut", type=float)
    p.add_argument("--default-cost", type=float)
    p.set_defaults(func=cmd_calibrate)

    p = sub.add_parser("oracle", parents=[common], help="analytic vs bruteforce check")
    liquidity(p)
    rates(p)
    p.add_argument("--step", type=float, default=1e-3)
    p.set_defaults(func=cmd_oracle)

    return parser, sub


def _config_defaults(path, subparser):
    """Translate config entries into defaults for ``subparser``."""
    actions = {a.dest: a for a in subparser._actions}
    aliases = {"r_t": "rt", "r_e": "re"}
    defaults = {}
    for key, raw in load_config(path).items():
        dest = aliases.get(key, key)
        action = actions.get(dest)
        # keys meant for other subcommands are ignored
        if action is None or dest in ("help", "config", "func"):
            continue
        if action.nargs == 0:
            value = raw.lower() in ("1", "true", "yes", "on")
        elif isinstance(action, argparse._AppendAction):
            value = [part.strip() for part in raw.split(";") if part.strip()]
        else:
            try:
                value = action.type(raw) if action.type else raw
            except ValueError as exc:
                raise UsageError(f"config key {key!r}: invalid value {raw!r}") from exc
        defaults[dest] = value
    return defaults


def main(argv=None):
    parser, sub = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError(parser.format_help())
        if args.config:
            subparser = sub.choices[args.command]
            subparser.set_defaults(**_config_defaults(args.config, subparser))
            args = parser.parse_args(argv)
        missing = [d for d in REQUIRED[args.command] if getattr(args, d) is None]
        if missing:
            flags = ", ".join("--" + m.replace("_", "-") for m in missing)
            raise UsageError(f"{args.command}: missing required {flags}")
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 1
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except SystemExit as exc:  # --help / --version
        return exc.code if isinstance(exc.code, int) else 0


def run():
    sys.exit(main())


if __name__ == "__main__":
    run()
