"""Command-line front end."""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

from .bernoulli_eq import bl_equilibrium_strategy, bl_payoff_nocost, region_label
from .commander import (
    CommanderInstance,
    det_assign_fixed_budget,
    det_assign_per_unit,
    fixed_budget_equality,
    general_setting_performance,
    rand_assign_fixed_budget,
    rand_assign_per_unit,
)
from .core import (
    GameSpec,
    LottoError,
    SettingMismatch,
    ValidationError,
    format_number,
    parse_budget,
    spec_from_dict,
)
from .cost_eq import bl_optimal_investment, bl_payoff_cost, classify_regime, cost_equilibrium_strategy
from .lotto_ci import ci_payoff_cost
from .oracle import DEFAULT_GRID, monte_carlo_payoff, verify_equilibrium
from .randomizer import optimal_payoff, optimal_randomization, optimal_randomization_fixed_p
from .strategies import StrategyProfile

EXIT_OK, EXIT_VALIDATION, EXIT_SETTING, EXIT_IO, EXIT_CERTIFY = 0, 2, 3, 4, 5


class InputOutputError(Exception):
    pass


def _rounded(obj):
    if isinstance(obj, dict):
        return {k: _rounded(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_rounded(v) for v in obj]
    if isinstance(obj, float):
        return format_number(obj)
    return obj


def _fmt(x: float) -> str:
    return "nan" if math.isnan(x) else f"{x:.9g}"


def _load_json(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputOutputError(f"cannot read {path}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"malformed JSON in {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ValidationError(f"{path} must hold a JSON object")
    return data


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    try:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise InputOutputError(f"cannot write {out}: {exc}") from exc


def _emit_json(payload: dict, out: str | None) -> None:
    _emit(json.dumps(_rounded(payload), indent=2) + "\n", out)


def _load_spec(path: str) -> GameSpec:
    return spec_from_dict(_load_json(path))


def _equilibrium_profile(spec: GameSpec) -> StrategyProfile:
    e, opp, phi = spec.endowment, spec.opponent, spec.phi
    if opp.unit_cost == 0:
        return bl_equilibrium_strategy(e, opp.budget)
    return cost_equilibrium_strategy(e, opp.budget, opp.unit_cost, phi)


def payoff_report(spec: GameSpec) -> dict:
    e, opp, phi = spec.endowment, spec.opponent, spec.phi
    if opp.unit_cost == 0:
        pay = bl_payoff_nocost(e, opp.budget, phi)
        return {"region": region_label(e, opp.budget), "pi_A": pay.player_a,
                "pi_B": pay.player_b, "spend": opp.budget}
    out = bl_payoff_cost(e, opp.budget, opp.unit_cost, phi)
    return {
        "region": region_label(e, out.opponent_spend) if out.opponent_spend > 0 else "none",
        "regime": classify_regime(e, opp.unit_cost, phi),
        "pi_A": out.payoffs.player_a,
        "pi_B": out.payoffs.player_b,
        "spend": out.opponent_spend,
        "lambda": out.lambda_threshold,
    }


def cmd_payoff(args) -> int:
    _emit_json(payoff_report(_load_spec(args.spec)), args.out)
    return EXIT_OK


def cmd_strategy(args) -> int:
    spec = _load_spec(args.spec)
    payload = payoff_report(spec)
    payload["profile"] = _equilibrium_profile(spec).to_dict()
    _emit_json(payload, args.out)
    return EXIT_OK


def cmd_invest(args) -> int:
    spec = _load_spec(args.spec)
    e, opp, phi = spec.endowment, spec.opponent, spec.phi
    spend = bl_optimal_investment(e, opp.budget, opp.unit_cost, phi)
    _emit_json({"spend": spend, "regime": classify_regime(e, opp.unit_cost, phi)}, args.out)
    return EXIT_OK


def cmd_randomize(args) -> int:
    spec = _load_spec(args.spec)
    e, opp, phi = spec.endowment, spec.opponent, spec.phi
    if args.p is None:
        res = optimal_randomization(e.mean, opp.budget, opp.unit_cost, phi)
    else:
        res = optimal_randomization_fixed_p(e.mean, opp.budget, opp.unit_cost, args.p, phi)
    end = res.endowment
    _emit_json({
        "A1": end.high, "A2": end.low, "p": end.p_high,
        "pi_A": res.payoff_a, "pi_B": res.payoff_b,
    }, args.out)
    return EXIT_OK


def solve_commander(inst: CommanderInstance, mode: str) -> dict:
    if mode == "general":
        perf = general_setting_performance(inst)
        return {"setting": inst.setting, "W_det": perf.w_det, "W_rand": perf.w_rand,
                "grid_points": perf.grid_points, "grid_tolerance": perf.delta}
    if inst.setting == "per_unit":
        res = det_assign_per_unit(inst) if mode == "det" else rand_assign_per_unit(inst)
    elif inst.setting == "fixed_budget":
        comp = fixed_budget_equality(inst)
        return {"setting": inst.setting, "W": comp.w_det if mode == "det" else comp.w_rand,
                "split": comp.split}
    else:
        res = det_assign_fixed_budget(inst) if mode == "det" else rand_assign_fixed_budget(inst)
    return {
        "setting": inst.setting,
        "W": res.performance,
        "expected_spend": res.expected_spend,
        "case": res.case,
        "support": res.distribution.to_list(),
    }


def cmd_commander(args) -> int:
    inst = CommanderInstance.from_dict(_load_json(args.instance))
    _emit_json(solve_commander(inst, args.mode), args.out)
    return EXIT_OK


def _sweep_values(spec: dict) -> list[float]:
    try:
        lo, hi, steps = spec["range"]
        lo, hi, steps = parse_budget(lo), parse_budget(hi), int(steps)
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"sweep needs range [lo, hi, steps]: {exc}") from exc
    if not lo < hi or steps < 2:
        raise ValidationError("sweep range needs lo < hi and steps >= 2")
    return [lo + (hi - lo) * i / (steps - 1) for i in range(steps)]


def commander_rows(inst: CommanderInstance, costs: list[float]) -> list[list]:
    rows = []
    for c in costs:
        at = inst.with_cost(c)
        setting = at.setting
        if setting == "per_unit":
            w_det = det_assign_per_unit(at).performance
            w_rand = rand_assign_per_unit(at).performance
        elif setting == "fixed_budget":
            w_det, w_rand, _ = fixed_budget_equality(at)
        else:
            w_det, w_rand = general_setting_performance(at)
        ratio = w_rand / w_det if w_det > 0 else math.nan
        rows.append([c, w_det, w_rand, ratio, setting])
    return rows


def opponent_cost_rows(spec: GameSpec, costs: list[float]) -> list[list]:
    e, b, phi = spec.endowment, spec.opponent.budget, spec.phi
    rows = []
    for c in costs:
        if c == 0 and math.isinf(b):
            # an unlimited free opponent takes everything: the c -> 0 limit
            rows.append([c, 0.0, 0.0, 0.0])
            continue
        if c == 0:
            fixed = bl_payoff_nocost(e, b, phi).player_a
        else:
            fixed = bl_payoff_cost(e, b, c, phi).payoffs.player_a
        rows.append([c, fixed, optimal_payoff(e.mean, b, c, phi), ci_payoff_cost(e.mean, b, c, phi).payoffs.player_a])
    return rows


def sweep_csv(sweep: dict) -> str:
    costs = _sweep_values(sweep)
    parameter = sweep.get("parameter")
    instance = sweep.get("instance")
    if not isinstance(instance, dict):
        raise ValidationError("sweep needs an instance object")
    if parameter == "commander_cost":
        header = ["c", "W_det", "W_rand", "ratio", "setting"]
        rows = commander_rows(CommanderInstance.from_dict({"c": 0.0, **instance}), costs)
    elif parameter == "opponent_cost":
        header = ["c", "pi_A_fixed", "pi_A_optimal", "pi_A_ci"]
        rows = opponent_cost_rows(spec_from_dict(instance), costs)
    else:
        raise ValidationError(f"unknown sweep parameter {parameter!r}")
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(x) if isinstance(x, float) else x for x in row])
    return buf.getvalue()


def cmd_sweep(args) -> int:
    _emit(sweep_csv(_load_json(args.sweep)), args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    spec = _load_spec(args.spec)
    profile = _equilibrium_profile(spec)
    if args.perturb:
        profile = StrategyProfile(profile.f_a_high.scaled(0.9), profile.f_a_low, profile.f_b)
    report = verify_equilibrium(profile, spec, args.grid)
    threshold = args.tolerance if args.tolerance is not None else 1e-4 * spec.phi
    payload = report.to_dict()
    payload["threshold"] = threshold
    certified = report.epsilon <= threshold and report.budget_excess <= 1e-9
    if args.mc:
        mean, stderr = monte_carlo_payoff(profile, spec, args.mc, args.seed)
        within = abs(mean - report.value_a) <= 3.0 * stderr + 1e-12
        payload["monte_carlo"] = {"samples": args.mc, "seed": args.seed, "pi_A": mean,
                                  "stderr": stderr, "within_3se": within}
        certified = certified and within
    payload["certified"] = certified
    _emit_json(payload, args.out)
    return EXIT_OK if certified else EXIT_CERTIFY


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bernoulli-lotto", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, target, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument(target)
        p.add_argument("--out", help="write output here instead of stdout")
        p.set_defaults(func=func)
        return p

    add("payoff", cmd_payoff, "spec", "equilibrium payoffs and region")
    add("strategy", cmd_strategy, "spec", "equilibrium strategy profile")
    add("invest", cmd_invest, "spec", "opponent's optimal investment")
    p = add("randomize", cmd_randomize, "spec", "best randomization of A's mean budget")
    p.add_argument("--p", type=float, help="fix the probability of the high budget")
    p = add("commander", cmd_commander, "instance", "solve a two-front assignment problem")
    p.add_argument("--mode", choices=("det", "rand", "general"), default="rand")
    add("sweep", cmd_sweep, "sweep", "CSV sweep over a cost parameter")
    p = add("verify", cmd_verify, "spec", "certify the equilibrium with the oracle")
    p.add_argument("--grid", type=int, default=DEFAULT_GRID)
    p.add_argument("--mc", type=int, default=0, help="Monte Carlo samples (0 to skip)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tolerance", type=float, help="epsilon threshold (default 1e-4 * phi)")
    p.add_argument("--perturb", action="store_true", help=argparse.SUPPRESS)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SettingMismatch as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SETTING
    except InputOutputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except LottoError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
