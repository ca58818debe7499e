"""Command-line front end.

Machine output is JSON with sorted keys; human tables are derived views.
Corpus mode streams one JSON object per input line, in input order, fanning
out across at most PARITY_THREADS workers.

Virtual crossings are never represented in Gauss codes, so the detour move
is the identity here: two codes equal after canonicalization describe
detour-equivalent diagrams.

Exit codes: 0 success / suite passed; 1 violation found; 2 input error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor

from .diagrams import parse_code, to_dot
from .errors import KnotParityError, ParseError
from .invariants import minimality_certificate, parity_bracket
from .moves import MoveTrace, replay_trace
from .parity import (
    AbelianGroup,
    ParityAssignment,
    assignment_family,
    gaussian_parity,
    verify_axioms,
)
from .search import SearchBounds, fuzz_trace
from .surface import carter_surface, homological_parity, surface_report
from .universal import (
    collect_relations,
    explore,
    factor_check,
    local_universal_group,
    region_assignments,
)

_JSON_KW = {"sort_keys": True, "separators": (",", ":")}


def _dumps(obj) -> str:
    return json.dumps(obj, **_JSON_KW)


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("PARITY_THREADS", "1")))
    except ValueError:
        return 1


def cmd_canon(args) -> int:
    d = parse_code(args.code, args.level, args.oriented)
    canon = d.canonical_form()
    if args.dot:
        print(to_dot(canon.base))
    else:
        print(canon.code())
    return 0


def invariant_report(code: str, level: str, oriented: bool, bracket_cap: int) -> dict:
    d = parse_code(code, level, oriented)
    canon = d.canonical_form()
    gp = gaussian_parity(canon)
    report = {
        "input": code,
        "level": level,
        "canonical": canon.code(),
        "gp": [gp.value(canon.id_of(c)) for c in range(canon.n)],
        "bracket": parity_bracket(canon.base, even_cap=bracket_cap).to_json(),
    }
    if level in ("flat", "virtual"):
        S = carter_surface(canon)
        hp = homological_parity(canon, S)
        block = surface_report(S)
        block["hp"] = [list(hp.value(canon.id_of(c))) for c in range(canon.n)]
        report["surface"] = block
    cert = minimality_certificate(canon.base)
    report["certificate"] = cert.to_json() if cert else None
    return report


def cmd_invariants(args) -> int:
    if args.corpus:
        with open(args.corpus) as fh:
            lines = [ln.strip() for ln in fh if ln.strip()]
        def work(idx_line):
            idx, line = idx_line
            try:
                return idx, _dumps(invariant_report(line, args.level, args.oriented, args.bracket_cap))
            except KnotParityError as exc:
                return idx, _dumps({"input": line, "error": str(exc)})
        with ThreadPoolExecutor(max_workers=_threads()) as ex:
            results = list(ex.map(work, enumerate(lines)))
        for _, out in sorted(results):
            print(out)
        return 0
    report = invariant_report(args.code, args.level, args.oriented, args.bracket_cap)
    if args.dot:
        print(to_dot(parse_code(args.code, args.level, args.oriented).canonical_form().base))
    elif args.json:
        print(_dumps(report))
    else:
        print(f"canonical: {report['canonical']}")
        print(f"gp: {report['gp']}")
        print(f"bracket: {report['bracket']}")
        if "surface" in report:
            s = report["surface"]
            print(
                f"surface: genus {s['genus']}, chi {s['chi']}, faces {s['F']}, "
                f"colourable {s['colourable']}, h1 dim {s['h1_dim']}"
            )
            print(f"hp: {s['hp']}")
        if report["certificate"]:
            print(f"certificate: {report['certificate']}")
    return 0


def cmd_certify(args) -> int:
    d = parse_code(args.code, "free", False)
    bounds = SearchBounds(args.depth, args.cap if args.cap else d.n + 2)
    cert = minimality_certificate(d.base, bounds)
    if cert is None:
        print(_dumps({"certificate": None, "reason": "not all-odd or a second move applies"}))
        return 1
    print(_dumps({"certificate": cert.to_json()}))
    return 0


def cmd_universal(args) -> int:
    d = parse_code(args.code, args.level, False)
    region = explore(d, args.radius, args.cap)
    rs = collect_relations(region)
    pres = local_universal_group(rs, region)
    fc = factor_check(rs, region_assignments(region, gaussian_parity))
    out = pres.to_json()
    out["nodes"] = len(region.nodes)
    out["edges"] = len(region.edges)
    out["gp_factors"] = {"ok": fc.ok, "induced": list(fc.induced)}
    print(_dumps(out))
    return 0 if fc.ok else 1


def _fault_parity(diagram) -> ParityAssignment:
    # deliberately broken labeling: constant 1
    return ParityAssignment(
        AbelianGroup.z2(), {v: 1 for v in diagram.vertex_ids}, diagram
    )


def _check_bracket_trace(trace: MoveTrace, parity_fn) -> dict | None:
    values = []
    for d in trace.diagrams:
        values.append(parity_bracket(d.base, parity_fn(d)))
    first = values[0]
    for i, v in enumerate(values[1:], 1):
        if v.terms != first.terms:
            return {"step": i, "kind": "bracket_changed", "before": first.to_json(), "after": v.to_json()}
    return None


def _check_axioms_trace(trace: MoveTrace, parity_fn) -> dict | None:
    report = verify_axioms(trace, assignment_family(trace, parity_fn))
    if report.ok:
        return None
    return {"kind": "axiom_violation", "violations": report.to_json()}


def cmd_fuzz(args) -> int:
    from .invariants import all_diagrams_upto

    seeds = [d for d in all_diagrams_upto(args.max_chords)]
    parity_fn = _fault_parity if args.inject_fault else gaussian_parity
    checker = _check_bracket_trace if args.suite == "bracket-invariance" else _check_axioms_trace
    failures = 0
    for i in range(args.seeds):
        seed_diagram = seeds[i % len(seeds)]
        trace = fuzz_trace(seed_diagram, args.length, args.seed + i, crossing_cap=args.cap)
        problem = checker(trace, parity_fn)
        if problem is None:
            continue
        failures += 1
        payload = {
            "suite": args.suite,
            "seed": args.seed + i,
            "violation": problem,
            "trace": trace.to_json(),
        }
        # counterexamples must replay to the same violation before reporting
        replayed = replay_trace(payload["trace"])
        assert checker(replayed, parity_fn) is not None, "counterexample failed to replay"
        print(_dumps(payload))
        if not args.all:
            break
    summary = {"suite": args.suite, "traces": args.seeds, "failures": failures}
    print(_dumps(summary), file=sys.stderr)
    return 1 if failures else 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="knotparity", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    def add_level(sp):
        sp.add_argument("--level", choices=("free", "flat", "virtual"), default="free")
        sp.add_argument("--oriented", action="store_true")

    sp = sub.add_parser("canon", help="canonical form of a code")
    sp.add_argument("code")
    add_level(sp)
    sp.add_argument("--dot", action="store_true")
    sp.set_defaults(func=cmd_canon)

    sp = sub.add_parser("invariants", help="invariant report for a code")
    sp.add_argument("code", nargs="?", default="")
    add_level(sp)
    sp.add_argument("--bracket-cap", type=int, default=20)
    sp.add_argument("--json", action="store_true")
    sp.add_argument("--dot", action="store_true")
    sp.add_argument("--corpus", help="file with one code per line; emits JSON lines")
    sp.set_defaults(func=cmd_invariants)

    sp = sub.add_parser("certify", help="minimality certificate for a free code")
    sp.add_argument("code")
    sp.add_argument("--depth", type=int, default=2)
    sp.add_argument("--cap", type=int, default=0)
    sp.set_defaults(func=cmd_certify)

    sp = sub.add_parser("universal", help="presentation of a move-graph region")
    sp.add_argument("code")
    add_level(sp)
    sp.add_argument("--radius", type=int, default=2)
    sp.add_argument("--cap", type=int, default=6)
    sp.set_defaults(func=cmd_universal)

    sp = sub.add_parser("fuzz", help="randomized invariance suites")
    sp.add_argument("suite", choices=("bracket-invariance", "parity-axioms"))
    sp.add_argument("--seeds", type=int, default=50)
    sp.add_argument("--length", type=int, default=4)
    sp.add_argument("--cap", type=int, default=8)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--max-chords", type=int, default=3)
    sp.add_argument("--inject-fault", action="store_true")
    sp.add_argument("--all", action="store_true", help="report every failure, not just the first")
    sp.set_defaults(func=cmd_fuzz)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    except KnotParityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
