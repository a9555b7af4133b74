"""Command line entry point (``apne``).

Exit status: 0 on success, 1 when a verification fails, 2 on usage or input
errors (including an exceeded profile budget).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

from . import circuit as circ
from . import game as gm
from .circuit_game import KINDS, compile_circuit, decide, select_params, thm2_instance
from .general import build_general_gadget, frontier_general, merge_general
from .merge import merge, restore, verify_parsimony
from .nonexistence import GadgetParams, build_gadget, optimize_alpha
from .oracle import BudgetExceeded, enumerate_pne, improving_dynamics, threshold_with_profile


class VerificationFailed(Exception):
    pass


def rational(text: str) -> Fraction:
    try:
        return gm.parse_rational(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"expected an exact rational like 3/2: {exc}")


def positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def decimal(x, digits: int = 18) -> str:
    """Display-only decimal of an exact rational, truncated to ``digits`` places."""
    if isinstance(x, float):
        return repr(x)
    x = Fraction(x)
    sign = "-" if x < 0 else ""
    x = abs(x)
    whole = x.numerator // x.denominator
    frac = (x - whole) * 10 ** digits
    return f"{sign}{whole}.{frac.numerator // frac.denominator:0{digits}d}"


def exact(x) -> str:
    return "inf" if isinstance(x, float) else gm.format_rational(x)


# -- output helpers ----------------------------------------------------------

def emit(args, record: dict, rows: list[dict] | None = None, text: str | None = None):
    """Write a report in the requested format to --out (or stdout)."""
    fmt = args.format
    if fmt == "json":
        body = json.dumps(record, indent=1) + "\n"
    elif fmt == "csv":
        rows = rows if rows is not None else [record]
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=list(rows[0]) if rows else [], lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
        body = buf.getvalue()
    else:
        body = text if text is not None else "\n".join(f"{k}: {v}" for k, v in record.items()) + "\n"
    out = getattr(args, "report", None)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(body)
    else:
        sys.stdout.write(body)


def save_game(game, path):
    if path:
        gm.save(game, path)
    else:
        sys.stdout.write(gm.serialize(game))


# -- oracle ------------------------------------------------------------------

def cmd_oracle(args):
    game = gm.read(args.game)
    if args.action == "enumerate":
        rep = enumerate_pne(game, args.alpha, budget=args.budget, workers=args.workers)
        rows = [{"profile": " ".join(map(str, p))} for p in rep.pne_profiles]
        record = {"alpha": exact(rep.alpha), "count": rep.count,
                  "profiles": [list(p) for p in rep.pne_profiles]}
        text = f"{rep.count} alpha-PNE at alpha={exact(rep.alpha)}\n" + "".join(
            r["profile"] + "\n" for r in rows)
        emit(args, record, rows, text)
    elif args.action == "threshold":
        value, profile = threshold_with_profile(game, budget=args.budget, workers=args.workers)
        record = {"threshold": exact(value), "decimal": decimal(value),
                  "profile": list(profile) if profile else None}
        emit(args, record)
    else:
        start = tuple(int(s) for s in args.start.split(",")) if args.start else (0,) * game.n
        trace = improving_dynamics(game, start, args.alpha, args.max_steps)
        rows = [{"step": j, "player": s.player, "strategy": s.strategy, "factor": exact(s.factor)}
                for j, s in enumerate(trace.steps)]
        record = {"converged": trace.converged, "steps": len(trace.steps),
                  "terminal": list(trace.terminal), "moves": rows}
        emit(args, record, rows or [{"step": "", "player": "", "strategy": "", "factor": ""}])
        if not trace.converged:
            raise VerificationFailed(f"no convergence within {args.max_steps} steps")


# -- frontier / gadget -------------------------------------------------------

def cmd_frontier(args):
    rows = []
    if args.family == "poly":
        for d in range(args.d_min, args.d_max + 1):
            fp = optimize_alpha(d, n_max=args.n_max)
            p = fp.argmax
            rows.append({"d": d, "alpha_lower": decimal(fp.alpha_lower),
                         "alpha_lower_exact": exact(fp.alpha_lower), "n": p.n, "k": p.k,
                         "w": exact(p.w), "beta": exact(p.beta), "evaluations": fp.evaluations})
    else:
        for n, ph in frontier_general(args.n_max):
            rows.append({"n": n, "xi_lower": decimal(ph.lower), "xi_lower_exact": exact(ph.lower),
                         "xi_upper_exact": exact(ph.upper)})
    args.format = args.format or "csv"
    emit(args, {"rows": rows}, rows,
         "".join(" ".join(str(v) for v in r.values()) + "\n" for r in rows))


def cmd_gadget(args):
    if args.family == "poly":
        p = GadgetParams(args.d, args.n, args.k, args.w, args.beta)
        save_game(build_gadget(p), args.out)
    else:
        save_game(build_general_gadget(args.n).game, args.out)


# -- circuits ----------------------------------------------------------------

def cmd_circuit(args):
    c = circ.load(args.file)
    if args.action == "eval":
        print(circ.evaluate(c, args.input))
        return
    if not circ.is_valid(c):
        if not args.make_valid:
            raise ValueError("circuit is not valid; pass --make-valid to add input buffers")
        c = circ.make_valid(c)
    text = circ.serialize(circ.canonicalize(c))
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _canonical(c):
    if circ.is_canonical(c):
        return c
    return circ.canonicalize(c if circ.is_valid(c) else circ.make_valid(c))


def cmd_compile(args):
    c = _canonical(circ.load(args.file))
    cg = compile_circuit(c, select_params(args.d, args.alpha))
    save_game(cg.game, args.out)


def cmd_decision(args):
    raw = circ.load(args.file)
    inst = thm2_instance(args.kind, raw, args.d, args.alpha, args.z)
    save_game(inst.game, args.out)
    if args.query:
        with open(args.query, "w", encoding="utf-8") as fh:
            fh.write(inst.descriptor())
    if args.check:
        rep = enumerate_pne(inst.game, args.alpha, budget=args.budget, workers=args.workers)
        answer = decide(inst, rep.pne_profiles)
        print(f"expected={inst.expected} oracle={answer}", file=sys.stderr)
        if answer != inst.expected:
            raise VerificationFailed("oracle answer differs from circuit satisfiability")


def cmd_merge(args):
    raw = circ.load(args.circuit)
    core = gm.read(args.core_game)
    threshold, profile = threshold_with_profile(core, budget=args.budget, workers=args.workers)
    if not threshold > args.alpha:
        raise VerificationFailed(f"core game has an alpha-PNE {list(profile)} "
                                 f"(threshold {exact(threshold)})")
    merged = merge(raw, args.d, args.alpha, core, threshold=threshold)
    save_game(merged.game, args.out)


def cmd_merge_general(args):
    merged = merge_general(circ.load(args.circuit), args.n, args.alpha)
    save_game(merged.game, args.out)


def cmd_verify(args):
    game = gm.read(args.merged)
    raw = circ.load(args.circuit)
    merged = restore(game, raw)
    alpha = args.alpha if args.alpha is not None else merged.alpha
    rep = verify_parsimony(merged, raw, alpha, budget=args.budget, workers=args.workers)
    general = merged.info.get("construction") == "merge-general"
    ok = (rep.decides_sat and rep.projection_matches and rep.gap_holds) if general else rep.ok
    record = {"alpha": exact(alpha), "sat_count": rep.sat_count, "pne_count": rep.pne_count,
              "exact_pne_count": rep.exact_pne_count, "matches_expected": rep.matches_expected,
              "projection_matches": rep.projection_matches, "gap_holds": rep.gap_holds, "ok": ok}
    emit(args, record)
    if not ok:
        raise VerificationFailed("merged game does not match the circuit's satisfying assignments")


# -- parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv", "text"), default=None)
    common.add_argument("--workers", type=positive_int, default=1)
    common.add_argument("--budget", type=positive_int, default=None,
                        help="maximum number of profiles to enumerate (default: $APNE_BUDGET or 2^24)")
    common.add_argument("--report", help="write the report here instead of stdout")

    parser = argparse.ArgumentParser(prog="apne", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    oracle = sub.add_parser("oracle", help="brute-force equilibrium queries")
    osub = oracle.add_subparsers(dest="action", required=True)
    for name in ("enumerate", "threshold", "dynamics"):
        p = osub.add_parser(name, parents=[common])
        p.add_argument("--game", required=True)
        if name != "threshold":
            p.add_argument("--alpha", type=rational, default=Fraction(1))
        if name == "dynamics":
            p.add_argument("--start", help="comma-separated strategy indices")
            p.add_argument("--max-steps", type=positive_int, default=10_000)
    oracle.set_defaults(func=cmd_oracle)

    frontier = sub.add_parser("frontier", help="tables of nonexistence bounds")
    fsub = frontier.add_subparsers(dest="family", required=True)
    p = fsub.add_parser("poly", parents=[common])
    p.add_argument("--d-min", type=int, default=2)
    p.add_argument("--d-max", type=int, default=10)
    p.add_argument("--n-max", type=positive_int, default=None)
    p.add_argument("--out", dest="report")
    p = fsub.add_parser("general", parents=[common])
    p.add_argument("--n-max", type=int, default=20)
    p.add_argument("--out", dest="report")
    frontier.set_defaults(func=cmd_frontier)

    gadget = sub.add_parser("gadget", help="write a nonexistence gadget game")
    gsub = gadget.add_subparsers(dest="family", required=True)
    p = gsub.add_parser("poly", parents=[common])
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--n", type=positive_int, required=True)
    p.add_argument("--k", type=positive_int, required=True)
    p.add_argument("--w", type=rational, required=True)
    p.add_argument("--beta", type=rational, required=True)
    p.add_argument("--out")
    p = gsub.add_parser("general", parents=[common])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--out")
    gadget.set_defaults(func=cmd_gadget)

    circuit = sub.add_parser("circuit", help="evaluate or canonicalize a netlist")
    csub = circuit.add_subparsers(dest="action", required=True)
    p = csub.add_parser("eval", parents=[common])
    p.add_argument("--file", required=True)
    p.add_argument("--input", required=True, help="bit string, one bit per INPUT")
    p = csub.add_parser("canon", parents=[common])
    p.add_argument("--file", required=True)
    p.add_argument("--out")
    p.add_argument("--make-valid", action="store_true")
    circuit.set_defaults(func=cmd_circuit)

    comp = sub.add_parser("compile", help="compile a circuit into a congestion game")
    compsub = comp.add_subparsers(dest="what", required=True)
    p = compsub.add_parser("circuit", parents=[common])
    p.add_argument("--file", required=True)
    p.add_argument("--d", type=positive_int, required=True)
    p.add_argument("--alpha", type=rational, required=True)
    p.add_argument("--out")
    comp.set_defaults(func=cmd_compile)

    p = sub.add_parser("thm2", aliases=["decision"], parents=[common],
                       help="decision-problem instances from a circuit")
    p.add_argument("--kind", choices=KINDS, required=True)
    p.add_argument("--file", required=True)
    p.add_argument("--d", type=positive_int, required=True)
    p.add_argument("--alpha", type=rational, required=True)
    p.add_argument("--z", type=rational)
    p.add_argument("--out")
    p.add_argument("--query", help="write the query descriptor (JSON) here")
    p.add_argument("--check", action="store_true", help="answer the query with the oracle")
    p.set_defaults(func=cmd_decision)

    p = sub.add_parser("merge", parents=[common], help="merge a circuit with a nonexistence game")
    p.add_argument("--circuit", required=True)
    p.add_argument("--core-game", required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--alpha", type=rational, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_merge)

    p = sub.add_parser("merge-general", parents=[common], help="merge with the step-cost gadget")
    p.add_argument("--circuit", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--alpha", type=rational, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_merge_general)

    verify = sub.add_parser("verify", help="re-check a merged game")
    vsub = verify.add_subparsers(dest="what", required=True)
    p = vsub.add_parser("parsimony", parents=[common])
    p.add_argument("--merged", required=True)
    p.add_argument("--circuit", required=True)
    p.add_argument("--alpha", type=rational, default=None,
                   help="defaults to the alpha recorded in the game file")
    verify.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.format is None and args.func is not cmd_frontier:
        args.format = "text"
    try:
        args.func(args)
    except VerificationFailed as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return 1
    except (ValueError, TypeError, KeyError, OSError, BudgetExceeded, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
