"""Command line entry points: navarro, weyl, hc and hecke.

Exit codes: 0 success, 1 disagreement or failed verification,
2 bad input or resource limit.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

from .perm import DEFAULT_MAX_ORDER, SizeGuardError

OK, DISAGREE, BAD_INPUT = 0, 1, 2


def _write_json(obj, out: Optional[str]) -> None:
    text = json.dumps(obj, indent=2, default=str)
    if out:
        Path(out).write_text(text + "\n")
    else:
        print(text)


def _setup_logging(verbose: bool) -> None:
    logging.basicConfig(level=logging.DEBUG if verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")


# -- navarro -----------------------------------------------------------------

def _cmd_check(args) -> int:
    from .oracle import check_theorem_A, load_group
    try:
        spec = json.loads(Path(args.group).read_text())
        G = load_group(spec, max_order=args.max_order)
        verdict = check_theorem_A(G, spec.get("name", Path(args.group).stem))
    except (OSError, json.JSONDecodeError, KeyError, ValueError, TypeError, SizeGuardError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return BAD_INPUT
    _write_json(verdict.to_json(), args.json)
    return OK if verdict.agree else DISAGREE


def _cmd_corpus(args) -> int:
    from .oracle import builtin_corpus, corpus_ok, load_group, run_corpus
    corpus = []
    if args.builtin or not args.files:
        corpus += builtin_corpus()
    for f in args.files:
        try:
            spec = json.loads(Path(f).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            print(f"error: {f}: {exc}", file=sys.stderr)
            return BAD_INPUT
        corpus.append((spec.get("name", Path(f).stem),
                       lambda spec=spec: load_group(spec, max_order=args.max_order)))
    entries = run_corpus(corpus, threads=args.threads)
    report = [e.to_json() for e in entries]
    if args.json:
        _write_json(report, args.json)
    for e in entries:
        if e.verdict is None:
            print(f"{e.name:>16}  error  {e.error}")
        else:
            v = e.verdict
            flag = "agree" if v.agree else "DISAGREE"
            print(f"{v.name:>16}  |G|={v.order:<8} group={v.group_verdict!s:<5} "
                  f"table={v.table_verdict!s:<5} {flag}")
    if any(e.verdict is None for e in entries):
        return BAD_INPUT
    return OK if corpus_ok(entries) else DISAGREE


def navarro_main(argv: Optional[Sequence[str]] = None) -> int:
    ap = argparse.ArgumentParser(prog="navarro",
                                 description="Self-normalizing Sylow 2 vs sigma-fixed odd-degree characters")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="cmd", required=True)
    c = sub.add_parser("check", help="check one group given as JSON")
    c.add_argument("--group", required=True)
    c.add_argument("--max-order", type=int, default=DEFAULT_MAX_ORDER)
    c.add_argument("--json", help="write the verdict here instead of stdout")
    c.set_defaults(func=_cmd_check)
    k = sub.add_parser("corpus", help="run the builtin corpus and/or JSON group files")
    k.add_argument("files", nargs="*")
    k.add_argument("--builtin", action="store_true")
    k.add_argument("--json")
    k.add_argument("--threads", type=int, default=1)
    k.add_argument("--max-order", type=int, default=DEFAULT_MAX_ORDER)
    k.set_defaults(func=_cmd_corpus)
    args = ap.parse_args(argv)
    _setup_logging(args.verbose)
    return args.func(args)


# -- weyl --------------------------------------------------------------------

def _cmd_survey(args) -> int:
    from .weyl import survey_odd_index
    try:
        res = survey_odd_index(args.type, args.rank, args.q)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return BAD_INPUT
    if args.json:
        _write_json(res, args.json)
    print(f"{args.type}{args.rank} q={args.q}: {res['characters']} characters, "
          f"{res['odd_index']} with odd [W:W(lam)], {res['odd_length_in_C']} with an "
          f"odd-length element in C(lam), {res['violations']} violations")
    return OK if res["violations"] == 0 else DISAGREE


def weyl_main(argv: Optional[Sequence[str]] = None) -> int:
    ap = argparse.ArgumentParser(prog="weyl", description="Relative Weyl group surveys")
    sub = ap.add_subparsers(dest="cmd", required=True)
    s = sub.add_parser("survey")
    s.add_argument("--type", required=True, choices=["B", "C", "D"])
    s.add_argument("--rank", required=True, type=int)
    s.add_argument("--q", required=True, type=int)
    s.add_argument("--json")
    s.set_defaults(func=_cmd_survey)
    args = ap.parse_args(argv)
    return args.func(args)


# -- hc ----------------------------------------------------------------------

def _cmd_verify(args) -> int:
    from .hecke import ConsistencyError, build_instance, named_character, verify_galois_act
    try:
        inst = build_instance(args.family.upper(), args.q)
        report = verify_galois_act(inst, named_character(inst, args.lam))
    except (ValueError, SizeGuardError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return BAD_INPUT
    except ConsistencyError as exc:
        print(f"consistency failure: {exc}", file=sys.stderr)
        return DISAGREE
    if args.json:
        _write_json(report.to_json(), args.json)
    for d in report.quadratic:
        print(f"root {tuple(d['root'])}: Ind={d['Ind']} p={d['p']} eps={d['eps']:+d}")
    moved = {r: s for r, s in report.sigma_image.items() if r != s}
    print(f"{inst.family}({inst.q}) lambda={args.lam}: constituents "
          f"{[(r, deg, m) for r, deg, m in report.constituents]}")
    print(f"sigma moves {moved or 'nothing'}; fixed {report.fixed_count}, "
          f"predicted {report.predicted_fixed_count}; "
          f"{'agree' if report.agree else 'DISAGREE'}")
    return OK if report.agree else DISAGREE


def hc_main(argv: Optional[Sequence[str]] = None) -> int:
    ap = argparse.ArgumentParser(prog="hc", description="Harish-Chandra series checks")
    sub = ap.add_subparsers(dest="cmd", required=True)
    v = sub.add_parser("verify")
    v.add_argument("--family", required=True, choices=["sl2", "gl2", "sp4", "SL2", "GL2", "SP4"])
    v.add_argument("--q", required=True, type=int)
    v.add_argument("--lambda", dest="lam", required=True, choices=["trivial", "quadratic"])
    v.add_argument("--json")
    v.set_defaults(func=_cmd_verify)
    args = ap.parse_args(argv)
    return args.func(args)


# -- hecke -------------------------------------------------------------------

def _cmd_hecke_check(args) -> int:
    from .generic_hecke import compare_with_t_basis, generic_hecke
    from .hecke import build_instance, induced_module, t_basis, trivial_character
    family = {"A1": "SL2", "B2": "SP4"}[args.type]
    try:
        inst = build_instance(family, args.q)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return BAD_INPUT
    H = generic_hecke(args.type)
    g_ok = H.g_is_group_algebra()
    f_ok = compare_with_t_basis(H, t_basis(induced_module(inst, trivial_character(inst))))
    print(f"{args.type}: g-specialization is the group algebra: {g_ok}")
    print(f"{args.type}: f-specialization u -> {args.q} matches {family}({args.q}): {f_ok}")
    return OK if g_ok and f_ok else DISAGREE


def hecke_main(argv: Optional[Sequence[str]] = None) -> int:
    ap = argparse.ArgumentParser(prog="hecke", description="Generic Hecke algebra checks")
    sub = ap.add_subparsers(dest="cmd", required=True)
    c = sub.add_parser("check")
    c.add_argument("--type", required=True, choices=["A1", "B2"])
    c.add_argument("--q", required=True, type=int)
    c.set_defaults(func=_cmd_hecke_check)
    args = ap.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(navarro_main())
