"""Command-line front end: tables, curves and checks as CSV or JSON files.

Exit codes: 0 success, 1 ``--check`` mismatch, 2 bad input (arguments,
config, files), 3 computation error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import re
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__, reference
from .analysis import (
    COMPARED,
    Comparison,
    alpha_threshold,
    empirical_bars,
    q_grid,
    region_boundary,
    sweep_q,
    table3,
    tie_probability,
)
from .complexity import DEFAULT_HORIZON, MAX_SEARCH_DEPTH, min_depth, verify_plan
from .engine import GENERATOR, MAX_ROUNDS, overall_win_prob, simulate
from .errors import ResourceError, ShootoutError
from .mechanisms import (
    ADJUSTED_CATCH_UP,
    ALTERNATING,
    CATCH_UP,
    STANDARD,
    Mechanism,
    TeamId,
    parse_mechanism,
    replay_schedule,
)
from .model import PRESETS, ScoringModel, format_probability, load_model, to_probability
from .strategy import check_strategy_proofness

EXIT_OK, EXIT_MISMATCH, EXIT_INPUT, EXIT_COMPUTE = 0, 1, 2, 3


class InputError(Exception):
    """Bad arguments, config or files."""


class CheckFailed(Exception):
    pass


# -- formatting --------------------------------------------------------------------


def exact_text(x) -> str:
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    return ""


def _slug(text: str) -> str:
    text = re.sub(r"[^A-Za-z0-9._]+", "-", text)
    return re.sub(r"-*_-*", "_", text).strip("-")


def _pair_text(pair) -> str:
    return f"{pair[0]}:{pair[1]}"


class Output:
    """Collects tables for one command and writes them with a manifest."""

    def __init__(self, args, model: ScoringModel | None, mode: str):
        self.args = args
        self.model = model
        self.mode = mode
        self.tables: list[tuple[str, list[str], list[list], object]] = []

    def add(self, stem: str, header: list[str], rows: list[list], payload=None):
        self.tables.append((_slug(stem), header, rows, payload))

    def _render(self, header, rows, payload, manifest_name) -> str:
        if self.args.format == "json":
            body = payload if payload is not None else [dict(zip(header, r)) for r in rows]
            doc = {"manifest": manifest_name, "data": body}
            return json.dumps(doc, indent=2, sort_keys=True) + "\n"
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
        return buf.getvalue()

    def write(self) -> None:
        ext = self.args.format
        if self.args.out is None:
            for _, header, rows, payload in self.tables:
                sys.stdout.write(self._render(header, rows, payload, None))
            return
        out = Path(self.args.out)
        try:
            out.mkdir(parents=True, exist_ok=True)
        except OSError as exc:
            raise InputError(f"cannot create output directory {out}: {exc}") from None
        command = self.args.command
        manifest_name = f"{command}.manifest.json"
        names = []
        for stem, header, rows, payload in self.tables:
            name = f"{stem}.{ext}"
            (out / name).write_text(self._render(header, rows, payload, manifest_name))
            names.append(name)
        manifest = {
            "tool": "shootout",
            "version": __version__,
            "command": command,
            "argv": self.args.argv,
            "config_digest": self.model.digest() if self.model is not None else None,
            "arithmetic": self.mode,
            "seed": self.args.seed,
            "generator": GENERATOR if command == "simulate" else None,
            "outputs": names,
        }
        (out / manifest_name).write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")


def _prob_cols(x) -> list[str]:
    return [format_probability(x), exact_text(x)]


def _report_check(failures: list[str], compared: int) -> None:
    if compared == 0:
        raise InputError("no reference values match these inputs")
    for line in failures:
        print(f"check: MISMATCH {line}", file=sys.stderr)
    print(f"check: {compared - len(failures)}/{compared} values within tolerance", file=sys.stderr)
    if failures:
        raise CheckFailed()


# -- argument helpers --------------------------------------------------------------


def _model(args, default: str) -> ScoringModel:
    source = args.model or default
    try:
        return load_model(source)
    except FileNotFoundError:
        raise InputError(f"model config not found: {source}") from None
    except OSError as exc:
        raise InputError(f"cannot read model config {source}: {exc}") from None
    except (ShootoutError, ValueError) as exc:
        raise InputError(f"bad model config {source}: {exc}") from None


def _model_label(args, default: str) -> str:
    source = args.model or default
    return source if source in PRESETS else Path(source).stem


def _mechanism(text: str) -> Mechanism:
    try:
        return parse_mechanism(text)
    except ValueError as exc:
        raise InputError(str(exc)) from None


def _mechanisms(text: str) -> list[Mechanism]:
    return [_mechanism(t) for t in _split_top(text)]


def _split_top(text: str) -> list[str]:
    # commas inside composite(...) do not separate
    parts, depth, cur = [], 0, ""
    for ch in text:
        if ch == "," and depth == 0:
            parts.append(cur)
            cur = ""
            continue
        depth += ch == "("
        depth -= ch == ")"
        cur += ch
    parts.append(cur)
    return [p.strip() for p in parts if p.strip()]


def _prob(text: str):
    try:
        return to_probability(text)
    except ValueError as exc:
        raise InputError(str(exc)) from None


def _pairs(text: str) -> list[tuple]:
    out = []
    for item in text.split(","):
        if not item.strip():
            continue
        bits = item.split(":")
        if len(bits) != 2:
            raise InputError(f"expected p:q, got {item!r}")
        out.append((bits[0].strip(), bits[1].strip()))
    return out


def _key(mech: Mechanism) -> str:
    return str(mech)


# -- commands ----------------------------------------------------------------------


def cmd_table3(args) -> None:
    model = _model(args, "brams")
    if not 1 <= args.max_rounds <= MAX_ROUNDS:
        raise ResourceError(f"--max-rounds must be in 1..{MAX_ROUNDS}")
    exact = not args.float
    if not exact:
        model = model.as_float()
    rounds = range(1, args.max_rounds + 1)
    reports = table3(model, rounds)
    rows = [
        [r.rounds, _key(r.mechanism), *_prob_cols(r.win_prob_a), format_probability(r.bias)]
        for r in reports
    ]
    out = Output(args, model, "exact" if model.is_exact else "float64")
    stem = f"table3_{_model_label(args, 'brams')}_r1-{args.max_rounds}"
    out.add(stem, ["rounds", "mechanism", "win_prob_a", "win_prob_a_exact", "bias"], rows)
    out.write()
    if args.check:
        failures, n = [], 0
        for r in reports:
            ref = reference.TABLE3.get(r.rounds)
            if ref is None:
                continue
            want = ref[list(COMPARED).index(r.mechanism)]
            n += 1
            if abs(float(r.win_prob_a) - want) > reference.TABLE3_TOLERANCE:
                failures.append(f"rounds={r.rounds} {r.mechanism}: {float(r.win_prob_a):.6f} vs {want}")
        _report_check(failures, n)


def cmd_sweep(args) -> None:
    p = _prob(args.p)
    stop = _prob(args.q_stop) if args.q_stop is not None else p
    if Fraction(stop) > Fraction(p):
        raise InputError("q range must not exceed p")
    try:
        grid = q_grid(stop, args.q_start, args.q_step)
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"bad q range: {exc}") from None
    mechs = _mechanisms(args.mechanisms)
    sd = None
    if args.sd_fixed:
        pair = _pairs(args.sd_fixed)
        if len(pair) != 1:
            raise InputError("--sd-fixed takes one p:q pair")
        sd = pair[0]
    exact = args.exact
    q_values = grid if exact else [float(q) for q in grid]
    base = ScoringModel.uniform(p, p, sd)
    out = Output(args, base, "exact" if exact else "float64")
    curves = {}
    for mech in mechs:
        curve = sweep_q(
            mech, args.rounds, p if exact else float(p), q_values,
            sd_follows=sd is None, sudden_death=sd, exact=exact,
        )
        curves[mech] = curve
        rows = [[format_probability(p), format_probability(q), *_prob_cols(v)] for q, v in curve]
        stem = f"sweep_{_key(mech)}_p{float(p):g}_r{args.rounds}"
        if sd is not None:
            stem += f"_sd{_pair_text(sd)}"
        out.add(stem, ["p", "q", "win_prob_a", "win_prob_a_exact"], rows)
    out.write()
    if args.check:
        ref = reference.SWEEP_CURVES.get(f"{float(p):g}", {}) if sd is None and args.rounds == 5 else {}
        failures, n = [], 0
        for mech, curve in curves.items():
            points = {round(x, 10): y for x, y in ref.get(_key(mech), [])}
            for q, v in curve:
                want = points.get(round(float(q), 10))
                if want is None:
                    continue
                n += 1
                if abs(float(v) - want) > reference.FIGURE_TOLERANCE:
                    failures.append(f"{mech} q={float(q):g}: {float(v)!r} vs {want!r}")
        _report_check(failures, n)


def cmd_empirical(args) -> None:
    model = _model(args, "apesteguia2010")
    pairs = _pairs(args.sd_pairs)
    try:
        bars = empirical_bars(pairs, model, args.rounds)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    rows = [[sd[0], sd[1], _key(m), *_prob_cols(v)] for sd, m, v in bars]
    out = Output(args, model, "exact" if model.is_exact else "float64")
    out.add(
        f"empirical_{_model_label(args, 'apesteguia2010')}_r{args.rounds}",
        ["p_sd", "q_sd", "mechanism", "win_prob_a", "win_prob_a_exact"], rows,
    )
    out.write()
    if args.check:
        failures, n = [], 0
        for sd, m, v in bars:
            want = reference.EMPIRICAL_BARS.get(tuple(sd), {}).get(_key(m))
            if want is None or args.rounds != 5:
                continue
            n += 1
            if abs(float(v) - want) > reference.FIGURE_TOLERANCE:
                failures.append(f"sd={_pair_text(sd)} {m}: {float(v)!r} vs {want!r}")
        _report_check(failures, n)


def _frange(start: str, stop: str, step: str) -> list[Fraction]:
    a, b, s = Fraction(start), Fraction(stop), Fraction(step)
    if s <= 0:
        raise InputError("step must be positive")
    out = []
    while a <= b:
        out.append(a)
        a += s
    return out


def cmd_region(args) -> None:
    model = _model(args, "apesteguia2010")
    comparisons = [Comparison(c) for c in _split_top(args.comparisons)]
    p_values = _frange(args.p_start, args.p_stop, args.p_step)
    out = Output(args, model, "float64")
    results = {}
    for comp in comparisons:
        res = alpha_threshold(comp, model, args.rounds)
        results[comp] = res
        rows = []
        if res.found:
            for p in p_values:
                rows.append([comp.value, format_probability(res.alpha_star),
                             format_probability(p), format_probability(region_boundary(float(p), res.alpha_star))])
        out.add(
            f"region_{comp.value}_{_model_label(args, 'apesteguia2010')}_r{args.rounds}",
            ["comparison", "alpha_star", "p", "q_min"], rows,
        )
    out.write()
    for comp, res in results.items():
        if res.found:
            print(f"alpha({comp.value}) = {format_probability(res.alpha_star)}", file=sys.stderr)
        else:
            print(f"alpha({comp.value}): no crossing in [1/2, 1]", file=sys.stderr)
    if args.check:
        failures, n = [], 0
        for comp, res in results.items():
            want = reference.ALPHA_THRESHOLDS.get(comp.value)
            n += 1
            if not res.found or abs(res.alpha_star - want) > reference.ALPHA_TOLERANCE:
                got = "none" if not res.found else f"{res.alpha_star:.6f}"
                failures.append(f"alpha({comp.value}): {got} vs {want}")
                continue
            for p, q_ref in reference.REGION_CURVES.get(comp.value, []):
                n += 1
                q = region_boundary(p, res.alpha_star)
                if abs(q - q_ref) > reference.REGION_TOLERANCE:
                    failures.append(f"q_min({comp.value}, p={p:g}): {q:.6f} vs {q_ref:.6f}")
        _report_check(failures, n)


def cmd_ties(args) -> None:
    configs = [(_pair_text(pr), ScoringModel.uniform(*pr)) for pr in _pairs(args.pairs)]
    if not args.no_empirical:
        configs.append(("empirical", _model(args, "apesteguia2010")))
    mechs = _mechanisms(args.mechanisms)
    rows, values = [], []
    for label, model in configs:
        for mech in mechs:
            v = tie_probability(mech, args.rounds, model)
            values.append((label, mech, v))
            rows.append([label, _key(mech), *_prob_cols(v)])
    out = Output(args, None, "exact")
    out.add(f"ties_r{args.rounds}", ["config", "mechanism", "p_tie", "p_tie_exact"], rows)
    out.write()
    if args.check:
        failures, n = [], 0
        for label, mech, v in values:
            key = label if label == "empirical" else tuple(label.split(":"))
            # both Catch-Up variants share one bar
            name = "catchup" if mech == ADJUSTED_CATCH_UP else _key(mech)
            want = reference.TIE_BARS.get(key, {}).get(name)
            if want is None or args.rounds != 5:
                continue
            n += 1
            if abs(float(v) - want) > reference.FIGURE_TOLERANCE:
                failures.append(f"{label} {mech}: {float(v)!r} vs {want!r}")
        _report_check(failures, n)


def cmd_complexity(args) -> None:
    mech = _mechanism(args.mechanism)
    result = min_depth(mech, horizon=args.horizon, max_depth=args.max_depth,
                       regular=args.regular_rounds)
    verified = result.found and verify_plan(result.witness_plan, mech, args.horizon,
                                            args.regular_rounds)
    payload = dict(result.as_dict(), verified=verified)
    out = Output(args, None, "exact")
    out.add(
        f"complexity_{_key(mech)}_h{args.horizon}",
        ["mechanism", "horizon", "worst_case_depth", "best_case_leaf_depth", "verified", "plan"],
        [[_key(mech), args.horizon, result.worst_case_depth, result.best_case_leaf_depth,
          verified, result.witness_plan.to_json() if result.found else ""]],
        payload,
    )
    out.write()
    if args.check:
        want = reference.COMPLEXITY.get(_key(mech))
        if want is None or args.horizon != DEFAULT_HORIZON:
            _report_check([], 0)
        got = (result.worst_case_depth, result.best_case_leaf_depth)
        failures = [] if got == want and verified else [f"{mech}: {got} vs {want}"]
        _report_check(failures, 1)


def _strategy_model(args) -> ScoringModel:
    if args.p is not None or args.q is not None:
        if args.p is None or args.q is None:
            raise InputError("--p and --q go together")
        try:
            return ScoringModel.uniform(args.p, args.q)
        except ValueError as exc:
            raise InputError(str(exc)) from None
    return _model(args, "brams")


def cmd_strategy(args) -> None:
    mech = _mechanism(args.mechanism)
    model = _strategy_model(args)
    report = check_strategy_proofness(mech, args.rounds, model)
    rows = [
        [v.state.round, v.state.kicks_taken_this_round + 1, v.state.kicker.value,
         v.state.kick_string, *_prob_cols(v.honest_value), *_prob_cols(v.miss_value)]
        for v in report.violations
    ]
    out = Output(args, model, "exact" if model.is_exact else "float64")
    out.add(
        f"strategy_{_key(mech)}_p{_slug(str(model.p))}_q{_slug(str(model.q))}_r{args.rounds}",
        ["round", "kick", "kicker", "history", "honest_value", "honest_value_exact",
         "miss_value", "miss_value_exact"],
        rows, report.as_dict(),
    )
    out.write()
    print(f"strategy_proof = {str(report.strategy_proof).lower()} "
          f"({len(report.violations)} violations, {report.states_checked} kicks)",
          file=sys.stderr)
    if args.check:
        order_free = mech in (STANDARD, ALTERNATING)
        claimed = order_free or (
            mech in (CATCH_UP, ADJUSTED_CATCH_UP) and model.p - model.q <= Fraction(1, 2)
        )
        if not claimed:
            _report_check([], 0)
        failures = [] if report.strategy_proof else [f"{mech}: {len(report.violations)} violations"]
        _report_check(failures, 1)


def cmd_simulate(args) -> None:
    mech = _mechanism(args.mechanism)
    model = _model(args, "brams")
    if args.trials < 1:
        raise InputError("--trials must be positive")
    res = simulate(mech, args.rounds, model, args.seed, args.trials, workers=args.workers)
    header = ["trials", "seed", "a_wins", "b_wins", "ties_a_first_sd", "ties_b_first_sd",
              "kicks", "p_a_win", "p_tie", "mean_kicks"]
    row = [res.trials, res.seed, res.a_wins, res.b_wins, res.ties_a_first_sd,
           res.ties_b_first_sd, res.kicks, format_probability(res.p_a_win),
           format_probability(res.p_tie), format_probability(res.mean_kicks)]
    payload = res.as_dict()
    payload.pop("generator")
    out = Output(args, model, "monte-carlo")
    out.add(
        f"simulate_{_key(mech)}_{_model_label(args, 'brams')}_r{args.rounds}"
        f"_s{args.seed}_n{args.trials}",
        header, [row], payload,
    )
    out.write()
    if args.check:
        exact = overall_win_prob(mech, args.rounds, model)
        se = res.standard_error(float(exact))
        ok = abs(res.p_a_win - float(exact)) <= 3 * se
        _report_check([] if ok else [f"p_a_win {res.p_a_win} vs exact {float(exact)} (3 SE = {3 * se:.2e})"], 1)


def cmd_replay(args) -> None:
    mech = _mechanism(args.mechanism)
    try:
        rows = replay_schedule(mech, args.kicks, args.regular_rounds)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    out_rows = []
    sa = sb = 0
    for r in rows:
        goals_first = r.first_result.scored
        goals_second = r.second_result.scored
        if r.first_kicker is TeamId.A:
            sa, sb = sa + goals_first, sb + goals_second
        else:
            sa, sb = sa + goals_second, sb + goals_first
        out_rows.append([r.round, r.first_kicker.value, r.first_result.value,
                         r.first_kicker.other.value, r.second_result.value, sa, sb])
    out = Output(args, None, "exact")
    out.add(
        f"replay_{_key(mech)}",
        ["round", "first_kicker", "first_result", "second_kicker", "second_result",
         "score_a", "score_b"],
        out_rows,
    )
    out.write()
    if args.check:
        ref = reference.TABLE1.get(_key(mech))
        kicks = ".".join(r[2] + r[4] for r in out_rows)
        if ref is None or ref[0] != kicks:
            _report_check([], 0)
        schedule = "".join(r[1] for r in out_rows)
        _report_check([] if schedule == ref[1] else [f"{schedule} vs {ref[1]}"], 1)


# -- parser ------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="output directory (default: print to stdout)")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--check", action="store_true",
                        help="compare against bundled published values; exit 1 on mismatch")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--model", help="preset name (brams, apesteguia2010) or config file")
    common.add_argument("--error-json", action="store_true",
                        help="print errors as a JSON object on stderr")

    parser = argparse.ArgumentParser(prog="shootout", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("table3", parents=[common], help="win probability grid, rounds 1..n")
    p.add_argument("--max-rounds", type=int, default=8)
    p.add_argument("--float", action="store_true", help="float64 instead of exact rationals")
    p.set_defaults(func=cmd_table3)

    p = sub.add_parser("sweep", parents=[common], help="win probability along a q grid")
    p.add_argument("--p", default="0.75")
    p.add_argument("--q-start", default="0.5")
    p.add_argument("--q-stop", help="last q (default: p)")
    p.add_argument("--q-step", default="0.01")
    p.add_argument("--mechanisms", default="catchup,adj-catchup,abba")
    p.add_argument("--rounds", type=int, default=5)
    p.add_argument("--sd-fixed", help="fixed sudden-death p:q instead of following (p, q)")
    p.add_argument("--exact", action="store_true")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("empirical", parents=[common], help="per-round model bars")
    p.add_argument("--sd-pairs", default="2/3:3/5,3/4:2/3,3/4:3/5")
    p.add_argument("--rounds", type=int, default=5)
    p.set_defaults(func=cmd_empirical)

    p = sub.add_parser("region", parents=[common], help="alpha thresholds and q_min(p) curves")
    p.add_argument("--comparisons", default="catchup,abba")
    p.add_argument("--p-start", default="0.5")
    p.add_argument("--p-stop", default="1")
    p.add_argument("--p-step", default="0.01")
    p.add_argument("--rounds", type=int, default=5)
    p.set_defaults(func=cmd_region)

    p = sub.add_parser("ties", parents=[common], help="probability of reaching sudden death")
    p.add_argument("--pairs", default="2/3:3/5,3/4:2/3,3/4:3/5")
    p.add_argument("--no-empirical", action="store_true",
                   help="skip the per-round model configuration")
    p.add_argument("--mechanisms", default="catchup,abba")
    p.add_argument("--rounds", type=int, default=5)
    p.set_defaults(func=cmd_ties)

    p = sub.add_parser("complexity", parents=[common], help="minimal question-plan depth")
    p.add_argument("mechanism")
    p.add_argument("--horizon", type=int, default=DEFAULT_HORIZON)
    p.add_argument("--max-depth", type=int, default=MAX_SEARCH_DEPTH)
    p.add_argument("--regular-rounds", type=int, default=5)
    p.set_defaults(func=cmd_complexity)

    p = sub.add_parser("strategy", parents=[common], help="search for profitable deliberate misses")
    p.add_argument("mechanism")
    p.add_argument("--p")
    p.add_argument("--q")
    p.add_argument("--rounds", type=int, default=5)
    p.set_defaults(func=cmd_strategy)

    p = sub.add_parser("simulate", parents=[common], help="seeded Monte Carlo play")
    p.add_argument("mechanism")
    p.add_argument("--rounds", type=int, default=5)
    p.add_argument("--trials", type=int, default=100_000)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("replay", parents=[common], help="schedule for a kick string")
    p.add_argument("mechanism")
    p.add_argument("kicks", help='per-round groups, e.g. "SS.MM.SS"')
    p.add_argument("--regular-rounds", type=int, default=5)
    p.set_defaults(func=cmd_replay)
    return parser


def _fail(args, code: int, kind: str, message: str) -> int:
    if getattr(args, "error_json", False):
        print(json.dumps({"error": kind, "message": message, "exit_code": code}), file=sys.stderr)
    else:
        print(f"shootout: {kind}: {message}", file=sys.stderr)
    return code


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(argv)
    args.argv = argv
    try:
        args.func(args)
    except CheckFailed:
        return EXIT_MISMATCH
    except InputError as exc:
        return _fail(args, EXIT_INPUT, "input", str(exc))
    except OSError as exc:
        return _fail(args, EXIT_INPUT, "io", str(exc))
    except (ShootoutError, ValueError, ZeroDivisionError) as exc:
        return _fail(args, EXIT_COMPUTE, type(exc).__name__, str(exc))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
