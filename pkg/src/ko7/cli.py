"""Command-line surface for the KO7 engine.

Terms are quoted S-expressions.  Exit status: 0 for success and expected
verdicts, 1 for check violations or exhausted fuel, 2 for usage or parse
errors.  `--json` switches any subcommand to its documented JSON form.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import confluence, measure, nogo, normalize, rewrite, terms
from .workers import resolve_workers

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_USAGE = 2

_RELATIONS = {
    "safe": rewrite.RelationKind.SAFE_ROOT,
    "full": rewrite.RelationKind.FULL_ROOT,
    "safe-ctx": rewrite.RelationKind.SAFE_CTX,
    "full-ctx": rewrite.RelationKind.FULL_CTX,
}


def _emit(args, payload: dict, text: str) -> None:
    if args.json:
        print(json.dumps(payload, sort_keys=True))
    else:
        print(text)


def _read_terms(args) -> list[terms.Term]:
    if getattr(args, "file", None):
        with open(args.file) as handle:
            return [terms.parse(line) for line in handle if line.strip()]
    return [terms.parse(args.term)]


def _cmd_parse(args) -> int:
    for t in _read_terms(args):
        _emit(args, {"term": terms.term_to_json(t)}, terms.render(t))
    return EXIT_OK


def _cmd_step(args) -> int:
    relation = _RELATIONS[args.relation]
    for t in _read_terms(args):
        witnesses = rewrite.steps(t, relation)
        if args.json:
            print(json.dumps({"steps": [w.to_json() for w in witnesses]}, sort_keys=True))
        else:
            for w in witnesses:
                pos = "[" + ",".join(str(i) for i in w.position) + "]"
                print(f"{w.rule.value} @ {pos} -> {terms.render(w.result)}")
            if not witnesses:
                print("(no steps)")
    return EXIT_OK


def _cmd_normalize(args) -> int:
    status = EXIT_OK
    for t in _read_terms(args):
        if args.relation == "safe":
            trace = normalize.normalize_safe(t)
            if args.json:
                print(json.dumps(trace.to_json(), sort_keys=True))
            else:
                if args.trace:
                    for s in trace.steps:
                        print(
                            f"{s.witness.rule.value}: "
                            f"{terms.render(s.witness.source)} -> "
                            f"{terms.render(s.witness.result)}   "
                            f"{s.before} -> {s.after}"
                        )
                print(terms.render(trace.final_term))
        else:
            run = normalize.normalize_full(t, args.fuel)
            if args.json:
                print(json.dumps(run.to_json(), sort_keys=True))
            else:
                if args.trace:
                    for w in run.steps:
                        pos = "[" + ",".join(str(i) for i in w.position) + "]"
                        print(f"{w.rule.value} @ {pos} -> {terms.render(w.result)}")
                if run.normalized:
                    print(terms.render(run.term))
                else:
                    print(
                        f"fuel exhausted after {run.steps_taken} steps at: "
                        f"{terms.render(run.term)}"
                    )
            if not run.normalized:
                status = EXIT_VIOLATION
    return status


def _cmd_measure(args) -> int:
    for t in _read_terms(args):
        m = measure.measure3(t)
        if args.json:
            print(json.dumps({"measure": m.to_json()}, sort_keys=True))
        else:
            ms = "{" + ", ".join(str(v) for v in sorted(m.kappa.elements())) + "}"
            print(f"dflag: {m.dflag}")
            print(f"kappaM: {ms}")
            print(f"tau: {m.tau}")
    return EXIT_OK


def _cmd_reaches(args) -> int:
    t = terms.parse(args.term)
    target = terms.parse(args.target)
    try:
        verdict = normalize.reaches_target(t, target)
    except normalize.TargetNotNormalError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE
    _emit(args, {"reaches": verdict}, "true" if verdict else "false")
    return EXIT_OK


def _cmd_witness_nonjoin(args) -> int:
    witness = confluence.non_join_witness(budget=args.budget, fuel=args.fuel)
    if args.json:
        print(json.dumps(witness.to_json(), sort_keys=True))
    else:
        print(f"source: {terms.render(witness.source)}")
        print(f"reduct A [eq_refl]: {terms.render(witness.reduct_refl)}")
        print(f"reduct B [eq_diff]: {terms.render(witness.reduct_diff)}")
        print(f"normal form A: {terms.render(witness.normal_refl)}")
        print(f"normal form B: {terms.render(witness.normal_diff)}")
        print(f"verdict: not joinable (budget {args.budget})")
    return EXIT_OK if witness.ok else EXIT_VIOLATION


def _cmd_check_decrease(args) -> int:
    report = measure.decrease_sweep(args.max_size, workers=resolve_workers())
    if args.json:
        print(json.dumps(report.to_json(), sort_keys=True))
    else:
        print(f"checked: {report.checked} guarded root instances (size <= {args.max_size})")
        print(f"violations: {len(report.violations)}")
        d = report.decided_by
        print(f"decided by: dflag={d['dflag']} kappaM={d['kappaM']} tau={d['tau']}")
        for rule, counts in sorted(report.by_rule.items()):
            parts = " ".join(f"{k}={v}" for k, v in sorted(counts.items()))
            print(f"  {rule}: {parts}")
        print("PASS" if report.ok else "FAIL")
    return EXIT_OK if report.ok else EXIT_VIOLATION


def _cmd_check_local_join(args) -> int:
    relation = _RELATIONS[args.relation]
    report = confluence.local_join_sweep(
        args.max_size, relation, args.budget, workers=resolve_workers()
    )
    if args.json:
        print(json.dumps(report.to_json(), sort_keys=True))
    else:
        print(f"relation: {report.relation}")
        print(f"forks checked: {report.forks_checked} (size <= {args.max_size})")
        print(f"joined: {report.joined}")
        print(f"inconclusive: {len(report.inconclusive)}")
        print(f"violations: {len(report.violations)}")
        print("PASS" if report.ok else "FAIL")
    return EXIT_OK if report.ok else EXIT_VIOLATION


def _cmd_check_unique_nf(args) -> int:
    report = confluence.unique_nf_sweep(args.max_size, workers=resolve_workers())
    if args.json:
        print(json.dumps(report.to_json(), sort_keys=True))
    else:
        print(f"terms checked: {report.terms_checked} (size <= {args.max_size})")
        print(f"violations: {len(report.violations)}")
        print("PASS" if report.ok else "FAIL")
    return EXIT_OK if report.ok else EXIT_VIOLATION


def _cmd_check_coverage(args) -> int:
    report = confluence.root_coverage_sweep(args.max_size)
    if args.json:
        print(json.dumps(report.to_json(), sort_keys=True))
    else:
        for shape, count in report.to_json()["instances"].items():
            print(f"{shape}: {count} instance(s)")
        print(f"target mismatches: {len(report.mismatches)}")
        print(
            f"guard-blocked eqw instances checked: {report.vacuous_checked}, "
            f"violations: {len(report.vacuous_violations)}"
        )
        print("PASS" if report.ok else "FAIL")
    return EXIT_OK if report.ok else EXIT_VIOLATION


def _format_counterexample(report: nogo.CounterexampleReport) -> str:
    w = report.witness
    before = nogo.render_value(report.value_kind, report.value_before)
    after = nogo.render_value(report.value_kind, report.value_after)
    return (
        f"{w.rule.value} on {terms.render(w.source)}: "
        f"{before} -> {after} ({report.verdict})"
    )


def _check_one_family(args, family: nogo.MeasureFamily) -> int:
    hunt = nogo.find_violation(family, max_size=args.max_size)
    if args.json:
        print(json.dumps(hunt.to_json(), sort_keys=True))
        return EXIT_OK if hunt.found else EXIT_VIOLATION
    print(f"family: {family.name}")
    if hunt.found:
        print(f"counterexample: {_format_counterexample(hunt.counterexample)}")
        print("PASS (counterexample found, as expected for this family)")
        return EXIT_OK
    print(f"no counterexample found over {hunt.scanned} instances")
    print("FAIL")
    return EXIT_VIOLATION


def _cmd_check_nogo(args) -> int:
    if args.family:
        try:
            family = nogo.catalog_family(args.family)
        except KeyError:
            names = ", ".join(f.name for f in nogo.catalog())
            print(f"error: unknown family {args.family!r} (one of: {names})", file=sys.stderr)
            return EXIT_USAGE
        return _check_one_family(args, family)

    status = EXIT_OK
    results = []
    for family in nogo.catalog():
        hunt = nogo.find_violation(family, max_size=args.max_size)
        results.append(hunt)
        if not hunt.found:
            status = EXIT_VIOLATION
        if not args.json:
            mark = "counterexample" if hunt.found else "NO COUNTEREXAMPLE"
            detail = (
                _format_counterexample(hunt.counterexample) if hunt.found else "-"
            )
            print(f"{family.name}: {mark}: {detail}")
    canonical = nogo.find_violation(
        nogo.canonical_family(), rewrite.RelationKind.SAFE_ROOT, args.max_size
    )
    if canonical.found:
        status = EXIT_VIOLATION
    if args.json:
        print(
            json.dumps(
                {
                    "families": [h.to_json() for h in results],
                    "canonical": canonical.to_json(),
                },
                sort_keys=True,
            )
        )
    else:
        verdict = "no violation" if not canonical.found else "VIOLATION"
        print(f"canonical-triple on guarded relation: {verdict} over {canonical.scanned} instances")
        print("PASS" if status == EXIT_OK else "FAIL")
    return status


def _cmd_check_lpo(args) -> int:
    report = nogo.lpo_boundary_report(max_size=args.max_size)
    if args.json:
        print(json.dumps(report.to_json(), sort_keys=True))
    else:
        print(f"orienting precedences: {report.orienting_count} of {report.precedences_checked}")
        print(f"first: {' < '.join(report.precedence)}")
        print(f"instances checked: {report.instances_checked}")
        if report.rank_only.found:
            print(
                "precedence rank alone: counterexample: "
                f"{_format_counterexample(report.rank_only.counterexample)}"
            )
        print("PASS" if report.ok else "FAIL")
    return EXIT_OK if report.ok else EXIT_VIOLATION


def _cmd_check_stress(args) -> int:
    report = nogo.duplication_stress(args.max_size)
    if args.json:
        print(json.dumps(report.to_json(), sort_keys=True))
    else:
        print(f"rec_succ instances: {report.instances} (size <= {args.max_size})")
        print(f"fitted identity: {report.identity}")
        print(f"identity failures: {len(report.failures)}")
        print(f"strict size drops: {report.strict_drops}")
        print("PASS" if report.ok else "FAIL")
    return EXIT_OK if report.ok else EXIT_VIOLATION


def _add_term_argument(parser: argparse.ArgumentParser) -> None:
    group = parser.add_mutually_exclusive_group(required=True)
    group.add_argument("term", nargs="?", help="term as a quoted S-expression")
    group.add_argument("--file", help="read one term per line instead")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ko7", description="KO7 rewrite calculus engine"
    )
    parser.add_argument("--json", action="store_true", help="machine-readable output")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", help="echo the canonical form of a term")
    _add_term_argument(p)
    p.set_defaults(func=_cmd_parse)

    p = sub.add_parser("step", help="list one-step successors")
    _add_term_argument(p)
    p.add_argument("--relation", choices=sorted(_RELATIONS), default="safe")
    p.set_defaults(func=_cmd_step)

    p = sub.add_parser("normalize", help="reduce to a normal form")
    _add_term_argument(p)
    p.add_argument("--relation", choices=["safe", "full"], default="safe")
    p.add_argument("--trace", action="store_true", help="print each step")
    p.add_argument("--fuel", type=int, default=normalize.DEFAULT_FUEL)
    p.set_defaults(func=_cmd_normalize)

    p = sub.add_parser("measure", help="print the termination measure")
    _add_term_argument(p)
    p.set_defaults(func=_cmd_measure)

    p = sub.add_parser("reaches", help="decide fixed-target reachability")
    p.add_argument("term")
    p.add_argument("target")
    p.set_defaults(func=_cmd_reaches)

    p = sub.add_parser("witness", help="exhibit built-in witnesses")
    wsub = p.add_subparsers(dest="witness", required=True)
    w = wsub.add_parser("nonjoin", help="the full-relation non-join witness")
    w.add_argument("--budget", type=int, default=1000)
    w.add_argument("--fuel", type=int, default=1000)
    w.set_defaults(func=_cmd_witness_nonjoin)

    p = sub.add_parser("check", help="run a sweep or catalog check")
    csub = p.add_subparsers(dest="check", required=True)

    c = csub.add_parser("decrease", help="per-step measure decrease sweep")
    c.add_argument("--max-size", type=int, default=6)
    c.set_defaults(func=_cmd_check_decrease)

    c = csub.add_parser("local-join", help="single-step fork joinability sweep")
    c.add_argument("--relation", choices=["safe", "safe-ctx"], default="safe")
    c.add_argument("--max-size", type=int, default=6)
    c.add_argument("--budget", type=int, default=200)
    c.set_defaults(func=_cmd_check_local_join)

    c = csub.add_parser("unique-nf", help="unique normal form sweep")
    c.add_argument("--max-size", type=int, default=6)
    c.set_defaults(func=_cmd_check_unique_nf)

    c = csub.add_parser("coverage", help="root shape and target coverage sweep")
    c.add_argument("--max-size", type=int, default=6)
    c.set_defaults(func=_cmd_check_coverage)

    c = csub.add_parser("nogo", help="failed-measure catalog hunt")
    c.add_argument("--family", help="check one catalog family by name")
    c.add_argument("--max-size", type=int, default=6)
    c.set_defaults(func=_cmd_check_nogo)

    c = csub.add_parser("lpo", help="path-order boundary demonstration")
    c.add_argument("--max-size", type=int, default=5)
    c.set_defaults(func=_cmd_check_lpo)

    c = csub.add_parser("stress", help="duplication size identity")
    c.add_argument("--max-size", type=int, default=6)
    c.set_defaults(func=_cmd_check_stress)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors and 0 on --help
        return int(exc.code or 0)
    try:
        return args.func(args)
    except terms.ParseError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE
    except terms.TermError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
