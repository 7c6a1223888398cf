"""Command line front end.

Exit codes: 0 affirmative verdict, 1 negative verdict, 2 usage or input
error, 3 a search limit was exceeded.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

from .oracle import compare, corpus_signature, random_corpus
from .parser import DalSyntaxError, load_theory, parse_formula
from .scenario import (SCHEMA, Scenario, ScenarioError, report_records, run_all_cases,
                       summary_table, write_records)
from .semantics import (BoundsTooLarge, EvalError, evaluate, explain, find_counterexample,
                        load_model, render_model, validate_model)
from .syntax import Signature, render
from .tableau import LimitExceeded, TableauError, check_sat, entails, prove_valid

OK, NEGATIVE, USAGE, LIMIT = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _env_int(name, default):
    value = os.environ.get(name)
    if value is None:
        return default
    try:
        return int(value)
    except ValueError:
        raise UsageError(f"{name} must be an integer, got {value!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "structured"), default="text",
                        help="structured: one JSON record per line")
    common.add_argument("--trace", action="store_true", help="print numbered proof traces")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--max-worlds", type=int, default=None,
                        help="model search bound (default $DAL_MAX_WORLDS or 4)")
    common.add_argument("--domain", type=int, default=None,
                        help="object constants to add when a signature has none "
                             "(default $DAL_DOMAIN or 2)")
    common.add_argument("--max-prefixes", type=int, default=None,
                        help="tableau prefix limit (default $DAL_MAX_PREFIXES or 500)")

    p = argparse.ArgumentParser(prog="dal", description="Parse, check and prove Dal formulas.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("parse", parents=[common], help="parse a theory file or formula")
    s.add_argument("file", nargs="?")
    s.add_argument("--formula")

    s = sub.add_parser("render", parents=[common], help="print the canonical form")
    s.add_argument("file", nargs="?")
    s.add_argument("--formula")

    s = sub.add_parser("model-check", parents=[common], help="evaluate a formula in a model file")
    s.add_argument("model")
    s.add_argument("--formula", required=True)
    s.add_argument("--world", help="evaluate at this world only (default: all worlds)")
    s.add_argument("--close", action="store_true",
                   help="replace R by the reflexive-transitive closure of R and the transitions")

    s = sub.add_parser("prove", parents=[common], help="validity (or satisfiability with --sat)")
    s.add_argument("--theory", help="file whose declarations give the signature")
    s.add_argument("--formula", action="append", required=True)
    s.add_argument("--sat", action="store_true",
                   help="decide satisfiability of the conjunction of the formulas")

    s = sub.add_parser("entail", parents=[common], help="does a theory entail a formula")
    s.add_argument("--theory", required=True)
    s.add_argument("--formula", required=True)
    s.add_argument("--case")

    s = sub.add_parser("oracle-compare", parents=[common],
                       help="tableau against bounded model search on a random corpus")
    s.add_argument("--count", type=int, default=500)
    s.add_argument("--max-depth", type=int, default=2)

    s = sub.add_parser("scenario", parents=[common], help="run scenario cases")
    s.add_argument("file")
    s.add_argument("--case")
    s.add_argument("--query")
    s.add_argument("--no-persistency", action="store_true")
    return p


def _emit(args, out, record):
    record = {"schema": SCHEMA, "command": args.command, **record}
    out.write(json.dumps(record, ensure_ascii=False, default=str) + "\n")


def _domain(args):
    return args.domain if args.domain is not None else _env_int("DAL_DOMAIN", 2)


def _max_worlds(args):
    return args.max_worlds if args.max_worlds is not None else _env_int("DAL_MAX_WORLDS", 4)


def _read(path):
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _signature(args, formulas_text):
    if getattr(args, "theory", None):
        sig = load_theory(args.theory).signature
        return sig, [parse_formula(t, sig) for t in formulas_text]
    sig = Signature()
    formulas = [parse_formula(t, sig, strict=False) for t in formulas_text]
    if not sig.objects:
        sig = sig.with_domain(_domain(args))
    return sig, formulas


# ------------------------------------------------------------------ commands


def cmd_parse(args, out):
    from .parser import parse_theory
    if args.formula is not None:
        phi = parse_formula(args.formula)
        if args.format == "structured":
            _emit(args, out, {"verdict": "ok", "formula": render(phi), "ast": repr(phi)})
        else:
            out.write(f"ok: {render(phi)}\n")
        return OK
    if not args.file:
        raise UsageError("give a file or --formula")
    th = parse_theory(_read(args.file))
    counts = {}
    for st in th.statements:
        counts[st.kind] = counts.get(st.kind, 0) + 1
    if args.format == "structured":
        _emit(args, out, {"verdict": "ok", "statements": counts, "cases": [c.name for c in th.cases]})
    else:
        parts = ", ".join(f"{n} {k}" for k, n in counts.items())
        out.write(f"ok: {parts}; {len(th.cases)} case(s)\n")
    return OK


def cmd_render(args, out):
    from .parser import parse_theory
    if args.formula is not None:
        text = render(parse_formula(args.formula)) + "\n"
    elif args.file:
        text = parse_theory(_read(args.file)).render()
    else:
        raise UsageError("give a file or --formula")
    if args.format == "structured":
        _emit(args, out, {"verdict": "ok", "text": text})
    else:
        out.write(text)
    return OK


def cmd_model_check(args, out):
    m = load_model(args.model, close=args.close)
    problems = validate_model(m)
    if problems:
        raise UsageError("invalid model: " + "; ".join(map(str, problems)))
    sig = m.signature
    phi = parse_formula(args.formula, sig, strict=False)
    if args.world is not None:
        if args.world not in m.worlds:
            raise UsageError(f"no world {args.world!r} in the model")
        value = evaluate(m, args.world, phi)
        witness = None if value else explain(m, args.world, phi)
    else:
        bad = find_counterexample(m, phi)
        value = bad is None
        witness = None if value else explain(m, bad[0], bad[1])
    verdict = "true" if value else "false"
    where = args.world if args.world is not None else "all worlds"
    if args.format == "structured":
        rec = {"verdict": verdict, "formula": render(phi), "world": args.world}
        if witness:
            rec["witness"] = {"world": witness[0], "subformula": render(witness[1])}
        _emit(args, out, rec)
    else:
        out.write(f"{verdict}: {render(phi)} at {where}\n")
        if witness:
            out.write(f"  fails at {witness[0]}: {render(witness[1])}\n")
    return OK if value else NEGATIVE


def _result_out(args, out, r, formula_text):
    if args.format == "structured":
        rec = {"verdict": r.verdict, "formula": formula_text, "used": r.used_labels,
               "rules": r.rules, "stats": r.stats}
        if args.trace or r.closed:
            rec["trace"] = r.trace_lines()
        if r.model is not None:
            rec["model"] = render_model(r.model)
            rec["verified"] = r.verified
        _emit(args, out, rec)
        return
    out.write(f"{r.verdict}: {formula_text}\n")
    if r.closed and r.justification():
        out.write(f"  {r.justification()}\n")
    if args.trace and r.closed:
        out.write(r.trace() + "\n")
    if r.model is not None:
        out.write(f"model ({len(r.model.worlds)} worlds, root 0"
                  f"{', verified' if r.verified else ''}):\n")
        out.write(render_model(r.model))


def cmd_prove(args, out):
    sig, formulas = _signature(args, args.formula)
    text = " ; ".join(render(f) for f in formulas)
    if args.sat:
        r = check_sat(formulas, sig, max_prefixes=args.max_prefixes)
    else:
        if len(formulas) != 1:
            raise UsageError("give one --formula (or use --sat)")
        r = prove_valid(formulas[0], sig, max_prefixes=args.max_prefixes)
    _result_out(args, out, r, text)
    return OK if r.affirmative else NEGATIVE


def cmd_entail(args, out):
    th = load_theory(args.theory)
    s = Scenario(th, args.case)
    phi = parse_formula(args.formula, th.signature)
    points = s.time_points((phi,))
    r = entails(s.base((phi,)), phi, th.signature, bindings=s.bindings,
                constraints=s.constraints, time_points=points, max_prefixes=args.max_prefixes)
    _result_out(args, out, r, render(phi))
    return OK if r.affirmative else NEGATIVE


def cmd_oracle(args, out):
    sig = corpus_signature()
    formulas = random_corpus(args.count, seed=args.seed, max_depth=args.max_depth)
    rep = compare(formulas, sig, max_worlds=_max_worlds(args), domain=_domain(args),
                  max_prefixes=args.max_prefixes)
    if args.format == "structured":
        _emit(args, out, {"verdict": "agree" if rep.ok else "disagree", "seed": args.seed,
                          "total": rep.total, "sat": rep.sat, "unsat": rep.unsat,
                          "verified": rep.verified, "beyond_bounds": rep.beyond_bounds,
                          "disagreements": [str(d) for d in rep.disagreements],
                          "seconds": round(rep.seconds, 3)})
    else:
        out.write(rep.summary() + "\n")
        for d in rep.disagreements:
            out.write(f"  {d}\n")
    return OK if rep.ok else NEGATIVE


def cmd_scenario(args, out):
    th = load_theory(args.file)
    persistency = not args.no_persistency
    if args.query is not None:
        case = args.case
        if case is None and th.cases:
            if len(th.cases) > 1:
                raise UsageError("the file has several cases; pick one with --case")
            case = th.cases[0].name
        s = Scenario(th, case)
        problems = s.problems()
        if problems:
            raise ScenarioError("; ".join(problems))
        query = parse_formula(args.query, th.signature)
        steps = s.run_case(until=query, persistency=persistency)
        final = steps[-1]
        if args.format == "structured":
            for d in steps:
                rec = d.record(s.name)
                if d is not final:
                    rec["trace"] = []
                out.write(json.dumps(rec, ensure_ascii=False) + "\n")
        else:
            for d in steps:
                out.write(d.line() + "\n")
            if final.derived and args.trace:
                out.write("\n".join(final.trace) + "\n")
            elif not final.derived:
                out.write(f"not derived; countermodel with {final.countermodel}\n")
        return OK if final.derived else NEGATIVE
    theory = th
    if args.case:
        theory.cases = [th.case(args.case)]
    reports = run_all_cases(theory, persistency=persistency)
    if args.format == "structured":
        write_records(report_records(reports), out)
    else:
        for r in reports:
            out.write(r.text() + "\n")
            if args.trace:
                for d in r.derivations:
                    if d.derived:
                        out.write(f"  -- ({d.label})\n")
                        out.write("\n".join("    " + l for l in d.trace) + "\n")
        out.write(summary_table(reports) + "\n")
    return OK if all(r.ok for r in reports) else NEGATIVE


COMMANDS = {"parse": cmd_parse, "render": cmd_render, "model-check": cmd_model_check,
            "prove": cmd_prove, "entail": cmd_entail, "oracle-compare": cmd_oracle,
            "scenario": cmd_scenario}


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code else OK
    try:
        return COMMANDS[args.command](args, out)
    except (LimitExceeded, BoundsTooLarge) as exc:
        err.write(f"limit exceeded: {exc}\n")
        return LIMIT
    except DalSyntaxError as exc:
        err.write(f"parse error: {exc}\n")
        return USAGE
    except (UsageError, TableauError, ScenarioError, EvalError, OSError, KeyError,
            ValueError) as exc:
        err.write(f"error: {exc}\n")
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
