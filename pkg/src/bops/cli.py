"""Command-line front end.

Exit codes: 0 success, 1 a verification check failed, 2 bad input.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import dynsim, oracle
from .equilibrium import (
    Axis,
    global_equilibrium,
    region_map,
    region_of_wait,
    verify_re_equilibrium,
)
from .errors import BopsError
from .inventory import profit, stock_probability
from .scenario import Scenario, parse_scenario

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2
FIXED_POINT_TOL = 1e-9


def _write(out: str, text: str) -> None:
    if out == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        Path(out).write_text(text, encoding="utf-8", newline="\n")


def _load(path: str) -> Scenario:
    return parse_scenario(Path(path).read_text(encoding="utf-8"))


def _grid(scenario: Scenario, spec: str | None) -> oracle.GridSpec:
    params = scenario.params
    q_steps = scenario.get("q_steps", 400)
    mu_steps = scenario.get("mu_steps", 400)
    if spec:
        try:
            q_raw, mu_raw = spec.split(":")
            q_steps, mu_steps = int(q_raw), int(mu_raw)
        except ValueError:
            raise BopsError(f"--grid must be q_steps:mu_steps, got {spec!r}") from None
    return oracle.GridSpec(scenario.get("q_max", 2.0 * params.c_o), q_steps, mu_steps)


def cmd_solve(args) -> int:
    scenario = _load(args.scenario)
    params = scenario.params
    eq = global_equilibrium(params)
    report = verify_re_equilibrium(params, eq.q, eq.mu_bar, eq.xi, _grid(scenario, None))
    payload = {
        "region": eq.region.value,
        "q": eq.q,
        "mu_bar": eq.mu_bar,
        "xi": eq.xi,
        "demand": eq.demand,
        "profit": eq.profit,
        "verification": {
            "consumer_ok": report.consumer_ok,
            "argmax_ok": report.argmax_ok,
            "fixed_point_residual": report.fixed_point_residual,
        },
    }
    _write(args.out, json.dumps(payload, indent=2) + "\n")
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_region_map(args) -> int:
    scenario = _load(args.scenario)
    grid = region_map(scenario.params, Axis.parse(args.x), Axis.parse(args.y))
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["x", "y", "region"])
    for x, y, label in grid.rows():
        writer.writerow([repr(float(x)), repr(float(y)), label])
    _write(args.out, buf.getvalue())
    return EXIT_OK


def _parse_overrides(items: list[str]) -> dict[str, float]:
    out = {}
    for item in items or []:
        key, sep, value = item.partition("=")
        key = key.strip()
        if not sep or key not in ("q", "mu_bar"):
            raise BopsError(f"--override takes q=<value> or mu_bar=<value>, got {item!r}")
        try:
            out[key] = float(value)
        except ValueError:
            raise BopsError(f"bad number in --override {item!r}") from None
    return out


def cmd_verify(args) -> int:
    scenario = _load(args.scenario)
    params = scenario.params
    grid = _grid(scenario, args.grid)
    overrides = _parse_overrides(args.override)

    eq = global_equilibrium(params)
    q = overrides.get("q", eq.q)
    mu_bar = overrides.get("mu_bar", eq.mu_bar)
    if q < 0 or not 0 <= mu_bar <= params.M:
        raise BopsError("override puts the candidate outside q >= 0, 0 <= mu_bar <= M")
    xi = stock_probability(params, q, mu_bar)
    candidate_profit = profit(params, q, mu_bar)

    best = oracle.brute_force_optimum(params, grid)
    slack = oracle.grid_slack(params, grid)
    gap = best.profit - candidate_profit
    gap_ok = abs(gap) <= slack

    fp_candidate = abs(oracle.fixed_point_xi(params, q, mu_bar) - xi)
    fp_sweep = 0.0
    for qq in np.linspace(0.0, grid.q_max, 21):
        for mm in np.linspace(0.0, params.M, 21):
            diff = abs(oracle.fixed_point_xi(params, qq, mm) - stock_probability(params, qq, mm))
            fp_sweep = max(fp_sweep, diff)
    fp_ok = fp_candidate <= FIXED_POINT_TOL and fp_sweep <= FIXED_POINT_TOL

    label = "candidate (overridden)" if overrides else "closed form"
    region = region_of_wait(params, mu_bar) if overrides else eq.region
    lines = [
        f"{label}: region={region.value} q={q!r} mu_bar={mu_bar!r} xi={xi!r} profit={candidate_profit!r}",
        f"grid optimum: q={best.q!r} mu_bar={best.mu_bar!r} profit={best.profit!r}",
        f"grid: {grid.q_steps}x{grid.mu_steps} q_max={grid.q_max!r} slack={slack!r}",
        f"profit gap: {gap!r} [{'ok' if gap_ok else 'FAIL'}]",
        f"fixed-point residual at candidate: {fp_candidate!r} [{'ok' if fp_candidate <= FIXED_POINT_TOL else 'FAIL'}]",
        f"fixed-point max residual over 21x21 sweep: {fp_sweep!r} [{'ok' if fp_sweep <= FIXED_POINT_TOL else 'FAIL'}]",
    ]
    passed = gap_ok and fp_ok
    lines.append("PASS" if passed else "FAIL")
    _write(args.out, "\n".join(lines) + "\n")
    return EXIT_OK if passed else EXIT_FAIL


def cmd_simulate(args) -> int:
    defaults = _load(args.scenario) if args.scenario else None

    def pick(flag, key, fallback):
        if flag is not None:
            return flag
        if defaults is not None and key in defaults.overrides:
            return defaults.get(key)
        return fallback

    seed = pick(args.seed, "seed", 0)
    env_seed = os.environ.get("BOPS_SEED")
    if env_seed:
        try:
            seed = int(env_seed)
        except ValueError:
            raise BopsError(f"BOPS_SEED must be an integer, got {env_seed!r}") from None
    r = pick(args.r, "r", None)
    if r is None:
        raise BopsError("--r is required (or set r in the scenario)")
    config = dynsim.SimConfig(
        r=float(r),
        weeks=pick(args.weeks, "weeks", 20),
        seed=seed,
        rule=dynsim.LeftoverRule.parse(pick(args.rule, "rule", "leftover-from-store")),
        replications=pick(args.reps, "replications", 1),
    )
    if config.replications == 1:
        _write(args.out, dynsim.simulate(config).to_csv())
    else:
        stats = dynsim.replicate_stats(config)
        _write(args.out, json.dumps(stats.to_json_dict(), indent=2) + "\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    # argparse already exits with 2 on usage errors
    parser = argparse.ArgumentParser(prog="bops", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="equilibrium for a scenario, as JSON")
    p.add_argument("scenario")
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("region-map", help="classify a 2-D parameter grid, as CSV")
    p.add_argument("scenario")
    p.add_argument("--x", required=True, metavar="PARAM:LO:HI:STEPS")
    p.add_argument("--y", required=True, metavar="PARAM:LO:HI:STEPS")
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_region_map)

    p = sub.add_parser("verify", help="check the closed form against brute force")
    p.add_argument("scenario")
    p.add_argument("--grid", metavar="Q_STEPS:MU_STEPS")
    p.add_argument("--override", action="append", metavar="KEY=VALUE",
                   help="replace q or mu_bar of the candidate point (repeatable)")
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("simulate", help="two-store weekly simulation")
    p.add_argument("--scenario", help="optional scenario supplying simulation defaults")
    p.add_argument("--r", type=float)
    p.add_argument("--weeks", type=int)
    p.add_argument("--seed", type=int, help="overridden by BOPS_SEED when set")
    p.add_argument("--rule", help="leftover-from-store (default) or independent-weekly")
    p.add_argument("--reps", type=int)
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_simulate)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (BopsError, OSError) as exc:
        print(f"bops {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
