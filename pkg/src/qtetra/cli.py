"""Command-line front end.

Exit status: 0 when every check passes, 1 when a verification fails,
2 on usage errors (bad arguments, negative occupations, slot mismatches).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from typing import Sequence

from . import birat, verify
from .kmat import comb_k, k_elem, k_param_exponents, k_slice, kb_elem
from .rmat import comb_r, r_elem, r_param_exponents, r_slice, s_elem
from .tensorop import INTERTWINING, SlotError, check_intertwining, parse_ket
from .verify import EQUATIONS, F4_STATE, FactorPool, VerifyReport, default_jobs, reports_to_csv

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _state(text: str | None, n: int | None, what: str) -> tuple[int, ...]:
    if text is None:
        raise UsageError(f"{what} is required")
    try:
        st = parse_ket(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if n is not None and len(st) != n:
        raise UsageError(f"{what} needs {n} occupations, got {len(st)}")
    return st


# -- element queries -------------------------------------------------------

def _elem_report(command, inputs, rows) -> VerifyReport:
    return VerifyReport(command=command, inputs=inputs, mode="exact", passed=True,
                        counts={"nonzero": sum(1 for r in rows if r["value"])},
                        details=rows)


def cmd_r_elem(args) -> list[VerifyReport]:
    inp = _state(args.inp, 3, "--in")
    elem = s_elem if args.variant == "S" else r_elem
    outs = [_state(args.out, 3, "--out")] if args.out else r_slice(inp)
    rows = []
    for out in outs:
        v = elem(inp, out)
        row = {"in": list(inp), "out": list(out), "value": v.to_json(), "text": str(v)}
        if v and args.variant == "R":
            row["param_exponents"] = r_param_exponents(inp, out, args.gauge)._asdict()
        rows.append(row)
    if not args.out:
        rows = [r for r in rows if r["value"]]
    return [_elem_report(f"{args.variant.lower()}-elem", {"in": list(inp), "gauge": args.gauge}, rows)]


def cmd_k_elem(args) -> list[VerifyReport]:
    inp = _state(args.inp, 4, "--in")
    elem = kb_elem if args.reversed else k_elem
    if args.out:
        outs = [_state(args.out, 4, "--out")]
    else:
        outs = [o[::-1] for o in k_slice(inp[::-1])] if args.reversed else k_slice(inp)
    rows = []
    for out in outs:
        v = elem(inp, out)
        row = {"in": list(inp), "out": list(out), "value": v.to_json(), "text": str(v)}
        if v and not args.reversed:
            row["param_exponents"] = k_param_exponents(inp, out)._asdict()
        rows.append(row)
    if not args.out:
        rows = [r for r in rows if r["value"]]
    return [_elem_report("k-elem", {"in": list(inp), "reversed": args.reversed}, rows)]


def cmd_comb(args, which: str) -> list[VerifyReport]:
    n, fn = (3, comb_r) if which == "r" else (4, comb_k)
    st = _state(args.state, n, "--state")
    img = fn(st)
    return [VerifyReport(command=f"comb-{which}", inputs={"state": list(st)}, mode="comb",
                         passed=True, details=[{"image": list(img)}])]


# -- verification ----------------------------------------------------------

def _run_suite(name_bound):
    name, bound = name_bound
    return verify.SUITES[name](bound)


def _run_intertwining(rel_bound):
    rel, bound = rel_bound
    rep = check_intertwining(rel, bound)
    return VerifyReport(command=f"intertwining {rep['relation']}", inputs={"bound": bound},
                        mode="exact", passed=rep["pass"],
                        counts={"checked": rep["checked"], "failures": len(rep["mismatches"])},
                        details=rep["mismatches"][:20])


def _map(fn, items, jobs: int):
    if jobs <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(fn, items))


def _dict_report(command: str, rep: dict, mode: str, inputs: dict) -> VerifyReport:
    counts = {}
    for key in ("checked", "samples"):
        if key in rep:
            counts[key] = rep[key]
    details = {k: v for k, v in rep.items() if k not in ("pass", "elapsed_ms")}
    return VerifyReport(command=command, inputs=inputs, mode=mode, passed=rep["pass"],
                        counts=counts, elapsed_ms=rep.get("elapsed_ms", 0.0), details=[details])


def verify_birational(args) -> list[VerifyReport]:
    reports = [
        _dict_report("birational matrix-identities", birat.check_matrix_identities(), "symbolic", {}),
        _dict_report("birational involutions", birat.check_involutions(), "symbolic", {}),
        _dict_report("birational te", birat.verify_birational_equations("te", "symbolic"),
                     "symbolic", {"equation": "te"}),
    ]
    for eq in ("te", "re"):
        rep = birat.verify_birational_equations(eq, args.strategy, samples=args.samples, seed=args.seed)
        inputs = {"equation": eq}
        if args.strategy == "sampled":
            inputs.update(seed=args.seed, samples=args.samples)
        reports.append(_dict_report(f"birational {eq}", rep, args.strategy, inputs))
    bound = args.bound if args.bound is not None else 6
    for which in ("R", "K"):
        reports.append(_dict_report(f"tropical {which}", birat.tropicalize_and_compare(which, bound),
                                    "tropical", {"bound": bound}))
    return reports


def cmd_verify(args) -> list[VerifyReport]:
    target = args.target
    jobs = args.jobs
    if target in EQUATIONS:
        spec = EQUATIONS[target]
        if args.state is None and target == "f4":
            state = F4_STATE
        else:
            state = _state(args.state, spec.nslots, "--state")
        mode = args.mode or "quantum"
        trunc = args.trunc
        if target == "f4":
            if mode == "comb":
                raise UsageError("f4 is verified in truncated quantum mode only")
            trunc = 6 if trunc is None else trunc
        elif trunc is not None and mode == "comb":
            raise UsageError("--trunc applies to quantum mode only")
        if trunc is not None and trunc < 1:
            raise UsageError("--trunc must be >= 1")
        if jobs > 1:
            with FactorPool(jobs) as pool:
                rep = verify.verify_equation(spec, state, mode, trunc, pool)
        else:
            rep = verify.verify_equation(spec, state, mode, trunc)
        reports = [rep]
        if args.plot_dir:
            from .plotting import plot_equation_steps
            rep.details.append({"figure": plot_equation_steps(rep, args.plot_dir)})
        return reports
    if args.trunc is not None:
        raise UsageError(f"--trunc is not valid for verify {target}")
    if args.mode is not None:
        raise UsageError(f"--mode is not valid for verify {target}")
    if target == "suites":
        if args.bound is not None and args.bound < 1:
            raise UsageError("--bound must be >= 1")
        names = list(verify.SUITES)
        bounds = [verify.SUITE_BOUNDS[n] if args.bound is None else
                  (2 * args.bound if n.startswith("comb-") else args.bound) for n in names]
        reports = _map(_run_suite, list(zip(names, bounds)), jobs)
        if args.plot_dir:
            from .plotting import plot_suite_counts
            reports[-1].details.append({"figure": plot_suite_counts(reports, args.plot_dir)})
        return reports
    if target == "intertwining":
        bound = 2 if args.bound is None else args.bound
        if bound < 1:
            raise UsageError("--bound must be >= 1")
        if args.rel:
            try:
                rels = [(int(args.rel[0]), int(args.rel[1]))]
            except (ValueError, IndexError):
                raise UsageError(f"--rel expects two digits such as 25, got {args.rel!r}") from None
            if rels[0] not in INTERTWINING:
                raise UsageError(f"no relation <{args.rel}>; need 2 <= r, s <= 5")
        else:
            rels = list(INTERTWINING)
        return _map(_run_intertwining, [(r, bound) for r in rels], jobs)
    if target == "birational":
        if args.samples < 1:
            raise UsageError("--samples must be >= 1")
        return verify_birational(args)
    raise UsageError(f"unknown verify target {target!r}")


# -- output ----------------------------------------------------------------

def _text(reports: Sequence[VerifyReport]) -> str:
    lines = []
    for r in reports:
        if r.command in ("r-elem", "s-elem", "k-elem"):
            for row in r.details:
                lines.append(f"{''.join(map(str, row['in']))} -> {''.join(map(str, row['out']))}: {row['text']}")
            continue
        if r.command.startswith("comb-"):
            lines.append(" ".join(map(str, r.details[0]["image"])))
            continue
        counts = " ".join(f"{k}={v}" for k, v in r.counts.items())
        inputs = " ".join(f"{k}={v}" for k, v in r.inputs.items())
        lines.append(f"{'PASS' if r.passed else 'FAIL'} {r.command} {inputs} mode={r.mode} "
                     f"{counts} {r.elapsed_ms:.1f}ms".replace("  ", " "))
        for d in r.details:
            if "final" in d:
                lines.append(f"  final |{d['final']}>")
            if "figure" in d:
                lines.append(f"  figure {d['figure']}")
    return "\n".join(lines) + "\n"


def render(reports: Sequence[VerifyReport], fmt: str) -> str:
    if fmt == "json":
        docs = [r.to_dict() for r in reports]
        return json.dumps(docs[0] if len(docs) == 1 else docs, indent=2) + "\n"
    if fmt == "csv":
        return reports_to_csv(reports)
    return _text(reports)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv", "text"), default="json")
    common.add_argument("--jobs", type=int, default=None,
                        help="worker processes (default: $QTETRA_JOBS or 1)")
    common.add_argument("--no-timing", action="store_true",
                        help="report elapsed_ms as 0 so output is byte-reproducible")

    p = argparse.ArgumentParser(prog="qtetra", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("r-elem", parents=[common], help="3D R (or S) matrix elements")
    r.add_argument("--in", dest="inp", required=True, help="i,j,k")
    r.add_argument("--out", help="a,b,c (omit to list the whole slice)")
    r.add_argument("--variant", choices=("R", "S"), default="R")
    r.add_argument("--gauge", choices=("SL", "Sp"), default="SL")

    k = sub.add_parser("k-elem", parents=[common], help="3D K matrix elements")
    k.add_argument("--in", dest="inp", required=True, help="a,i,b,j")
    k.add_argument("--out", help="c,m,d,n (omit to list the whole slice)")
    k.add_argument("--reversed", action="store_true", help="type-B K (indices reversed)")

    for which in ("r", "k"):
        c = sub.add_parser(f"comb-{which}", parents=[common], help=f"combinatorial {which.upper()}")
        c.add_argument("--state", required=True)

    v = sub.add_parser("verify", parents=[common], help="verify an equation or run a suite")
    v.add_argument("target", choices=("te", "rc", "rb", "f4", "suites", "birational", "intertwining"))
    v.add_argument("--state", help="occupations, e.g. 3,1,4,5,1,6 or 314516")
    v.add_argument("--mode", choices=("quantum", "comb"))
    v.add_argument("--trunc", type=int, help="work mod q^N (f4 defaults to 6)")
    v.add_argument("--bound", type=int, help="index bound for suites/intertwining/tropical grids")
    v.add_argument("--rel", help="single intertwining relation, e.g. 25")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--samples", type=int, default=32)
    v.add_argument("--strategy", choices=("sampled", "symbolic"), default="sampled",
                   help="birational reflection equation check")
    v.add_argument("--plot-dir", help="write figures and a CSV report here")
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)      # argparse exits with 2 on its own errors
    try:
        if args.jobs is None:
            args.jobs = default_jobs()
        if args.jobs < 1:
            raise UsageError("--jobs must be >= 1")
        if args.command == "r-elem":
            reports = cmd_r_elem(args)
        elif args.command == "k-elem":
            reports = cmd_k_elem(args)
        elif args.command == "comb-r":
            reports = cmd_comb(args, "r")
        elif args.command == "comb-k":
            reports = cmd_comb(args, "k")
        else:
            reports = cmd_verify(args)
    except (UsageError, SlotError, ValueError) as exc:
        print(f"qtetra: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.no_timing:
        for r in reports:
            r.elapsed_ms = 0.0
    if getattr(args, "plot_dir", None):
        os.makedirs(args.plot_dir, exist_ok=True)
        with open(os.path.join(args.plot_dir, "report.csv"), "w") as fh:
            fh.write(reports_to_csv(reports))
    sys.stdout.write(render(reports, args.format))
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
