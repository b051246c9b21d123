"""Command line front end.

Every verification and computation in the library is reachable as a
subcommand that prints one JSON record (schema "qkly/1") on standard
output. Exact values are emitted as reduced rational strings; the only
floats are the explicitly marked Monte Carlo estimate fields. Exit code
0 means success, 1 means a mathematical check failed, 2 means the
invocation itself was unusable. Identical invocations with identical
seeds produce byte-identical output; the optional --timing field is off
by default for that reason.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from fractions import Fraction

from .absorption import LEFTMOST, RIGHTMOST, random_rule, simulate_mc
from .algebra import monomial_degree, prob_exact, structure_constants
from .chow import (ChowRing, enumerate_flats, verify_gamma_L,
                   verify_klyachko_relation, verify_L_relation, verify_theorem1)
from .fan import (check_ample, check_complete, check_fan, iter_walls,
                  normalization_probe, sr_presentation, toric_top_integral,
                  wall_relation)
from .kahler import (LefschetzClass, check_hl, check_hr, check_log_concavity,
                     check_poincare, probability_polynomial, volume_polynomial)
from .qcartan import QContext

SCHEMA = "qkly/1"


class UsageError(ValueError):
    pass


def _rat(x) -> str:
    return str(Fraction(x))


def _parse_q(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"cannot read {text!r} as a rational") from exc


def _parse_ints(text: str, what: str):
    try:
        return tuple(int(p) for p in text.split(","))
    except ValueError as exc:
        raise UsageError(f"cannot read {text!r} as comma-separated {what}") from exc


def _parse_rats(text: str):
    return tuple(_parse_q(p) for p in text.split(","))


def _rule_from_args(args):
    if args.rule == "leftmost":
        return LEFTMOST
    if args.rule == "rightmost":
        return RIGHTMOST
    if args.rule_seed is None:
        raise UsageError("--rule random requires --rule-seed")
    return random_rule(args.rule_seed)


def _emit(args, command, parameters, results, ok, t0):
    record = {"schema": SCHEMA, "command": command, "parameters": parameters,
              "results": results, "ok": bool(ok)}
    if getattr(args, "timing", False):
        record["timing_ms"] = round((time.time() - t0) * 1000.0, 3)
    json.dump(record, sys.stdout, sort_keys=True, allow_nan=False)
    sys.stdout.write("\n")
    return 0 if ok else 1


def _emit_csv(lines):
    for line in lines:
        sys.stdout.write(line + "\n")
    return 0


def _cmd_prob(args, t0):
    ctx = QContext(args.n, _parse_q(args.q))
    eta = _parse_ints(args.eta, "multiplicities")
    p = prob_exact(ctx, eta)
    return _emit(args, "prob",
                 {"n": ctx.n, "q": _rat(ctx.q), "eta": list(eta)},
                 {"p": _rat(p)}, True, t0)


def _cmd_mc(args, t0):
    if args.q is not None:
        q = _parse_q(args.q)
        q_right = 1 / (q + 1)
        q_left = q / (q + 1)
    elif args.q_left is not None and args.q_right is not None:
        q_left = _parse_q(args.q_left)
        q_right = _parse_q(args.q_right)
    else:
        raise UsageError("give either --q or both --q-left and --q-right")
    eta = _parse_ints(args.eta, "multiplicities")
    target = _parse_ints(args.target, "multiplicities")
    rule = _rule_from_args(args)
    res = simulate_mc(q_left, q_right,
                      {i + 1: c for i, c in enumerate(eta)},
                      {i + 1: c for i, c in enumerate(target)},
                      trials=args.trials, seed=args.seed, window=args.window,
                      max_steps=args.max_steps, rule=rule)
    results = {
        "hits": res.hits,
        "completed": res.completed,
        "timed_out": res.timed_out,
        "estimate": _rat(res.estimate),
        "estimate_float": float(res.estimate),
        "stderr_float": None if math.isnan(res.stderr) else res.stderr,
    }
    return _emit(args, "mc",
                 {"q_left": _rat(q_left), "q_right": _rat(q_right),
                  "eta": list(eta), "target": list(target), "trials": args.trials,
                  "seed": args.seed, "window": args.window,
                  "max_steps": args.max_steps, "rule": args.rule},
                 results, True, t0)


def _cmd_degree(args, t0):
    ctx = QContext(args.n, _parse_q(args.q))
    eta = _parse_ints(args.eta, "multiplicities")
    value = monomial_degree(ctx, eta)
    return _emit(args, "degree",
                 {"n": ctx.n, "q": _rat(ctx.q), "eta": list(eta)},
                 {"degree": _rat(value)}, True, t0)


def _cmd_structconst(args, t0):
    ctx = QContext(args.n, _parse_q(args.q))
    s = _parse_ints(args.s, "sites")
    t = _parse_ints(args.t, "sites")
    product = structure_constants(ctx, s, t)
    terms = sorted((tuple(sorted(supp)), c) for supp, c in product.terms.items())
    if args.format == "csv":
        lines = ["support,coefficient"]
        lines += [f"{' '.join(str(i) for i in supp)},{_rat(c)}" for supp, c in terms]
        return _emit_csv(lines)
    return _emit(args, "structconst",
                 {"n": ctx.n, "q": _rat(ctx.q), "s": sorted(s), "t": sorted(t)},
                 {"terms": [{"support": list(supp), "coefficient": _rat(c)}
                            for supp, c in terms]}, True, t0)


def _cmd_kahler(args, t0):
    ctx = QContext(args.n, _parse_q(args.q))
    ell = LefschetzClass(_parse_rats(args.ell))
    pd = check_poincare(ctx)
    hl = check_hl(ctx, ell)
    hr = check_hr(ctx, ell)
    ok = all(pd.values()) and all(hl.values()) and all(hr.values())
    results = {
        "poincare": {str(k): v for k, v in sorted(pd.items())},
        "hard_lefschetz": {str(k): v for k, v in sorted(hl.items())},
        "hodge_riemann": {str(k): v for k, v in sorted(hr.items())},
        "all_pass": ok,
    }
    return _emit(args, "kahler",
                 {"n": ctx.n, "q": _rat(ctx.q),
                  "ell": [_rat(c) for c in ell.coefficients]},
                 results, ok, t0)


def _cmd_volume(args, t0):
    ctx = QContext(args.n, _parse_q(args.q))
    poly = volume_polynomial(ctx) if args.kind == "volume" else probability_polynomial(ctx)
    terms = sorted(poly.items())
    if args.format == "csv":
        lines = ["eta,coefficient"]
        lines += [f"{' '.join(str(e) for e in eta)},{_rat(c)}" for eta, c in terms]
        return _emit_csv(lines)
    return _emit(args, "volume",
                 {"n": ctx.n, "q": _rat(ctx.q), "kind": args.kind},
                 {"terms": [{"eta": list(eta), "coefficient": _rat(c)}
                            for eta, c in terms]}, True, t0)


def _cmd_logconcavity(args, t0):
    ctx = QContext(args.n, _parse_q(args.q))
    violations = check_log_concavity(ctx)
    results = {
        "violations": [{"eta": list(v.eta), "site": v.site,
                        "lhs": _rat(v.lhs), "rhs": _rat(v.rhs)}
                       for v in violations],
        "violation_count": len(violations),
    }
    return _emit(args, "logconcavity",
                 {"n": ctx.n, "q": _rat(ctx.q)}, results, not violations, t0)


def _fan_check(args, t0):
    ctx = QContext(args.n, _parse_q(args.q))
    rep = check_fan(ctx)
    results = {"simplicial": rep.simplicial, "dimension_law": rep.dimension_law,
               "intersection_law": rep.intersection_law}
    ok = rep.ok
    params = {"n": ctx.n, "q": _rat(ctx.q), "samples": args.samples}
    if args.samples > 0:
        if args.seed is None:
            raise UsageError("coverage sampling requires --seed")
        comp = check_complete(ctx, samples=args.samples, seed=args.seed)
        params["seed"] = args.seed
        results.update({"wall_count_ok": comp.wall_count_ok,
                        "coverage_ok": comp.coverage_ok})
        ok = ok and comp.ok
    else:
        comp = check_complete(ctx, samples=0, seed=0)
        results["wall_count_ok"] = comp.wall_count_ok
        ok = ok and comp.wall_count_ok
    return _emit(args, "fan.check", params, results, ok, t0)


def _fan_walls(args, t0):
    ctx = QContext(args.n, _parse_q(args.q))
    walls = []
    all_signs = True
    for wall, missing in iter_walls(ctx):
        data = wall_relation(ctx, wall, missing)
        coeffs = {f"{kind}:{idx}": _rat(v)
                  for (kind, idx), v in sorted(data.coefficients.items())}
        walls.append({"J": sorted(wall.J), "K": sorted(wall.K),
                      "missing": missing, "coefficients": coeffs,
                      "sign_ok": data.sign_ok})
        all_signs = all_signs and data.sign_ok
    walls.sort(key=lambda w: (w["J"], w["K"], w["missing"]))
    return _emit(args, "fan.walls", {"n": ctx.n, "q": _rat(ctx.q)},
                 {"walls": walls, "all_sign_ok": all_signs}, all_signs, t0)


def _fan_ample(args, t0):
    ctx = QContext(args.n, _parse_q(args.q))
    weights = _parse_rats(args.a)
    rep = check_ample(ctx, weights)
    failures = [{"J": sorted(w.J), "K": sorted(w.K), "missing": m, "sum": _rat(s)}
                for w, m, s in rep.failures]
    return _emit(args, "fan.ample",
                 {"n": ctx.n, "q": _rat(ctx.q), "a": [_rat(w) for w in weights]},
                 {"ample": rep.ok, "failures": failures}, rep.ok, t0)


def _fan_sr(args, t0):
    ctx = QContext(args.n, _parse_q(args.q))
    rep = sr_presentation(ctx)
    quadrics = [{f"{i},{j}": _rat(c) for (i, j), c in sorted(quad.items())}
                for quad in rep.quadrics]
    return _emit(args, "fan.sr", {"n": ctx.n, "q": _rat(ctx.q)},
                 {"relations_match": rep.relations_match,
                  "graded_dims": rep.graded_dims,
                  "dims_ok": rep.dims_ok,
                  "quadrics": quadrics}, rep.ok, t0)


def _cmd_integral(args, t0):
    ctx = QContext(args.n, _parse_q(args.q))
    if args.probe == (args.eta is not None):
        raise UsageError("give exactly one of --eta or --probe")
    if args.probe:
        rep = normalization_probe(ctx)
        results = {
            "constant": None if rep.constant is None else _rat(rep.constant),
            "constant_ok": rep.constant_ok,
            "det_scaled_value": _rat(rep.det_scaled_value),
            "factorial_squared_value": _rat(rep.factorial_squared_value),
            "matches_det_scaled": rep.matches_det_scaled,
            "matches_factorial_squared": rep.matches_factorial_squared,
        }
        return _emit(args, "integral", {"n": ctx.n, "q": _rat(ctx.q), "probe": True},
                     results, rep.constant_ok, t0)
    eta = _parse_ints(args.eta, "multiplicities")
    value = toric_top_integral(ctx, eta)
    return _emit(args, "integral",
                 {"n": ctx.n, "q": _rat(ctx.q), "eta": list(eta)},
                 {"integral": _rat(value)}, True, t0)


def _chow_flats(args, t0):
    lattice = enumerate_flats(args.n, args.chow_q)
    counts = {str(r): len(ids) for r, ids in sorted(lattice.by_rank.items())}
    labels = {str(r): [lattice.flats[i].label() for i in ids]
              for r, ids in sorted(lattice.by_rank.items())}
    ok = lattice.counts_ok()
    return _emit(args, "chow.flats", {"n": args.n, "q": args.chow_q},
                 {"counts": counts, "counts_ok": ok, "flats": labels}, ok, t0)


def _chow_verify(args, t0):
    lattice = enumerate_flats(args.n, args.chow_q)
    ring = ChowRing(lattice)
    counts_ok = lattice.counts_ok()
    dims = [ring.graded_dim(k) for k in range(ring.n + 1)]
    alpha_ok = ring.alpha_hyperplane_independent()
    gamma_l = verify_gamma_L(ring)
    gamma_rel = verify_klyachko_relation(ring)
    l_rel = verify_L_relation(ring)
    thm = verify_theorem1(ring)
    candidates = [{
        "name": c.name,
        "relations_ok": c.relations_ok,
        "graded_dims": c.graded_dims,
        "dims_ok": c.dims_ok,
        "degree_constant": None if c.degree_constant is None else _rat(c.degree_constant),
        "degrees_ok": c.degrees_ok,
    } for c in thm.candidates]
    ok = (counts_ok and alpha_ok and all(gamma_l.values())
          and all(gamma_rel.values()) and all(l_rel.values()) and thm.unique)
    results = {
        "counts_ok": counts_ok,
        "graded_dims": dims,
        "dims_symmetric": dims == dims[::-1],
        "alpha_hyperplane_independent": alpha_ok,
        "gamma_equals_qi_L": {str(i): v for i, v in sorted(gamma_l.items())},
        "gamma_relation": {str(i): v for i, v in sorted(gamma_rel.items())},
        "L_relation": {str(i): v for i, v in sorted(l_rel.items())},
        "generator_assignment": {"passing": thm.passing, "unique": thm.unique,
                                 "candidates": candidates},
    }
    return _emit(args, "chow.verify", {"n": args.n, "q": args.chow_q},
                 results, ok, t0)


def _cmd_report(args, t0):
    from .report import run_report

    summary = run_report(args.outdir, args.n, _parse_q(args.q), args.seed,
                         samples=args.samples)
    return _emit(args, "report",
                 {"n": args.n, "q": _rat(_parse_q(args.q)), "outdir": args.outdir,
                  "seed": args.seed, "samples": args.samples},
                 summary, summary["ok"], t0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qkly",
        description="Exact checks and computations for the displacement algebra, "
                    "its toric fan, and the projective-space Chow ring.")
    parser.add_argument("--timing", action="store_true",
                        help="include a timing_ms field (breaks byte-identical output)")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_nq(p):
        p.add_argument("--n", type=int, required=True)
        p.add_argument("--q", required=True, help="rational, e.g. 2 or 1/2")

    p = sub.add_parser("prob", help="exact absorption probability of the all-ones state")
    add_nq(p)
    p.add_argument("--eta", required=True, help="comma-separated multiplicities")
    p.set_defaults(func=_cmd_prob)

    p = sub.add_parser("mc", help="seeded Monte Carlo estimate of a target hit")
    p.add_argument("--q", help="rational bias q = q_left/q_right")
    p.add_argument("--q-left", dest="q_left")
    p.add_argument("--q-right", dest="q_right")
    p.add_argument("--eta", required=True)
    p.add_argument("--target", required=True)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--window", type=int, default=0)
    p.add_argument("--max-steps", dest="max_steps", type=int, default=100000)
    p.add_argument("--rule", choices=("leftmost", "rightmost", "random"),
                   default="leftmost")
    p.add_argument("--rule-seed", dest="rule_seed", type=int)
    p.set_defaults(func=_cmd_mc)

    p = sub.add_parser("degree", help="degree of a monomial in the displacement algebra")
    add_nq(p)
    p.add_argument("--eta", required=True)
    p.set_defaults(func=_cmd_degree)

    p = sub.add_parser("structconst", help="squarefree-basis expansion of a product")
    add_nq(p)
    p.add_argument("--s", required=True, help="comma-separated sites of the left factor")
    p.add_argument("--t", required=True, help="comma-separated sites of the right factor")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(func=_cmd_structconst)

    p = sub.add_parser("kahler", help="Poincare duality, hard Lefschetz, Hodge-Riemann")
    add_nq(p)
    p.add_argument("--ell", required=True, help="comma-separated positive coefficients")
    p.set_defaults(func=_cmd_kahler)

    p = sub.add_parser("volume", help="volume or probability polynomial coefficients")
    add_nq(p)
    p.add_argument("--kind", choices=("volume", "probability"), default="volume")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(func=_cmd_volume)

    p = sub.add_parser("logconcavity", help="site-shift log-concavity scan")
    add_nq(p)
    p.set_defaults(func=_cmd_logconcavity)

    fan = sub.add_parser("fan", help="fan-side checks")
    fan_sub = fan.add_subparsers(dest="fan_command", required=True)

    p = fan_sub.add_parser("check", help="simpliciality, intersections, completeness")
    add_nq(p)
    p.add_argument("--samples", type=int, default=0,
                   help="rational coverage samples (requires --seed)")
    p.add_argument("--seed", type=int)
    p.set_defaults(func=_fan_check)

    p = fan_sub.add_parser("walls", help="all wall relations with sign checks")
    add_nq(p)
    p.set_defaults(func=_fan_walls)

    p = fan_sub.add_parser("ample", help="Kleiman positivity for a weight vector")
    add_nq(p)
    p.add_argument("--a", required=True, help="comma-separated positive weights")
    p.set_defaults(func=_fan_ample)

    p = fan_sub.add_parser("sr", help="eliminated quadrics vs algebra relations")
    add_nq(p)
    p.set_defaults(func=_fan_sr)

    p = sub.add_parser("integral", help="normalized top intersection numbers")
    add_nq(p)
    p.add_argument("--eta")
    p.add_argument("--probe", action="store_true",
                   help="report the integral/degree ratio and compare closed forms")
    p.set_defaults(func=_cmd_integral)

    chow = sub.add_parser("chow", help="projective-space Chow ring")
    chow_sub = chow.add_subparsers(dest="chow_command", required=True)

    p = chow_sub.add_parser("flats", help="enumerate subspaces")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--q", dest="chow_q", type=int, required=True,
                   help="field size in {2,3,4,5}")
    p.set_defaults(func=_chow_flats)

    p = chow_sub.add_parser("verify", help="divisor identities and generator assignments")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--q", dest="chow_q", type=int, required=True,
                   help="field size in {2,3,4,5}")
    p.set_defaults(func=_chow_verify)

    p = sub.add_parser("report", help="write delimited tables and figures to a directory")
    add_nq(p)
    p.add_argument("--outdir", required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--samples", type=int, default=2000)
    p.set_defaults(func=_cmd_report)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    t0 = time.time()
    try:
        return args.func(args, t0)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"qkly: error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        parser.print_usage(sys.stderr)
        print(f"qkly: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
