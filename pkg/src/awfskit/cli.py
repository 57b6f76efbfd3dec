"""Batch command line: factor, lift, verify, oracle, validate.

Every run is one job: read UTF-8 JSON inputs, compute, write JSON
artifacts (with ``--out``/``--trace``) and a short human summary on
stdout.  Exit codes: 0 all checks passed; 1 a verification, validation,
or input error (the report names what failed); 2 the chain did not
stabilise within ``--max-stage`` (the summary lists the per-stage
carrier sizes); 3 an enumeration or carrier exceeded the size budget.
"""

from __future__ import annotations

import argparse
import sys
from typing import Optional

from .chain import extract, run_chain
from .errors import (
    EngineError,
    InvalidPresentation,
    NotStabilised,
    ParseError,
    SizeBudgetExceeded,
)
from .serialize import (
    decode_certificate,
    decode_map_or_arrow,
    decode_presentation,
    dumps,
    encode_certificate,
    encode_map,
    read_json,
    trace_summary,
    write_json,
)
from .step import SizeBudget
from .verify import Certificate, Report, oracle_initiality, oracle_kappa, verify_certificate

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_NOT_STABILISED = 2
EXIT_BUDGET = 3


def _parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="awfskit",
        description="Factorise maps of finite sets with certified lifting structure.",
    )
    sub = top.add_subparsers(dest="command", required=True)

    def common(p, mode=False, chain=False):
        p.add_argument("--presentation", required=True, help="presentation JSON file")
        if mode:
            p.add_argument("--mode", choices=("plain", "special"), default="plain")
        if chain:
            p.add_argument("--max-stage", type=int, default=16, metavar="N")
        p.add_argument("--budget", type=int, default=None, metavar="N",
                       help="problem-count budget for enumerations")
        p.add_argument("--out", default=None, metavar="PATH", help="write the JSON artifact here")

    p = sub.add_parser("factor", help="compute the factorisation and its certificate")
    common(p, mode=True, chain=True)
    p.add_argument("--map", required=True, help="the map to factorise (map or arrow JSON)")
    p.add_argument("--trace", default=None, metavar="PATH",
                   help="write the per-stage trace summary here")

    p = sub.add_parser("lift", help="answer one lifting problem from a certificate")
    common(p)
    p.add_argument("--certificate", required=True)
    p.add_argument("--problem", required=True,
                   help='problem JSON: {"generator", "top", "bot"}')

    p = sub.add_parser("verify", help="re-check every defining equation of a certificate")
    common(p)
    p.add_argument("--certificate", required=True)

    p = sub.add_parser("oracle", help="run an independent cross-check")
    p.add_argument("kind", choices=("kappa", "initiality"))
    common(p)
    p.add_argument("--map", default=None, help="kappa: the map whose extension is probed")
    p.add_argument("--target-map", default=None, help="kappa: the map lifted against")
    p.add_argument("--certificate", default=None, help="initiality: the certificate to check")
    p.add_argument("--bound", type=int, default=2, metavar="N",
                   help="kappa: maximum carrier size accepted")
    p.add_argument("--seed", type=int, default=0, metavar="N",
                   help="kappa: seed for the sampled regime")

    p = sub.add_parser("validate", help="check a presentation against the axioms")
    common(p)
    return top


def _print_report(report: Report) -> None:
    for e in report.entries:
        status = "ok" if e.ok else "FAIL"
        detail = f": {e.detail}" if e.detail else ""
        print(f"{status} {e.label}{detail}")


def _finish_report(report: Report, out: Optional[str]) -> int:
    if out:
        write_json(out, report.to_payload())
    _print_report(report)
    return EXIT_OK if report.ok else EXIT_FAIL


def _load_presentation(path: str):
    pres = decode_presentation(read_json(path), path)
    pres.ensure_valid()
    return pres


def _budget(args) -> Optional[SizeBudget]:
    return SizeBudget(max_problems=args.budget) if args.budget is not None else None


def _cmd_factor(args) -> int:
    pres = _load_presentation(args.presentation)
    if args.mode == "special" and pres.kind != "double":
        print("special mode needs a presentation with vertical composition", file=sys.stderr)
        return EXIT_FAIL
    f = decode_map_or_arrow(read_json(args.map), args.map)
    trace = run_chain(pres, f, mode=args.mode, max_stage=args.max_stage, budget=_budget(args))
    if args.trace:
        write_json(args.trace, trace_summary(trace))
    result = extract(trace)
    cert = Certificate.from_result(pres, result)
    if args.out:
        write_json(args.out, encode_certificate(cert))
    sizes = trace.carrier_sizes
    print(
        f"stabilised at stage {result.stage}; middle carrier {result.right.top.size}; "
        f"stage carriers {sizes}; lift table {len(cert.lift_table)} fillers"
    )
    return EXIT_OK


def _cmd_lift(args) -> int:
    pres = _load_presentation(args.presentation)
    cert = decode_certificate(read_json(args.certificate), pres, args.certificate)
    obj = read_json(args.problem)
    if (
        not isinstance(obj, dict)
        or set(obj) != {"generator", "top", "bot"}
        or not isinstance(obj["generator"], str)
        or not all(
            isinstance(v, int) and not isinstance(v, bool)
            for part in (obj["top"], obj["bot"])
            if isinstance(part, list)
            for v in part
        )
        or not isinstance(obj["top"], list)
        or not isinstance(obj["bot"], list)
    ):
        raise ParseError(f'{args.problem}: expected {{"generator", "top", "bot"}} with integer tables')
    key = (obj["generator"], tuple(obj["top"]), tuple(obj["bot"]))
    gens = dict(pres.lifting_generators())
    if key[0] not in gens:
        print(f"unknown generator {key[0]!r}", file=sys.stderr)
        return EXIT_FAIL
    u = gens[key[0]]
    top = list(key[1])
    bot = list(key[2])
    if len(top) != u.top.size or len(bot) != u.bot.size:
        print(f"problem tables do not match the boundary of {key[0]}", file=sys.stderr)
        return EXIT_FAIL
    if not all(0 <= v < cert.right.top.size for v in top) or not all(
        0 <= v < cert.right.bot.size for v in bot
    ):
        print("problem table entries lie outside the extracted arrow", file=sys.stderr)
        return EXIT_FAIL
    rt = cert.right.map.table
    if any(rt[top[a]] != bot[u.map.table[a]] for a in range(u.top.size)):
        print("problem square does not commute against the extracted arrow", file=sys.stderr)
        return EXIT_FAIL
    filler = cert.lift_table.get(key)
    if filler is None:
        print(f"no lift-table entry for problem {key}", file=sys.stderr)
        return EXIT_FAIL
    payload = encode_map(filler)
    if args.out:
        write_json(args.out, payload)
    print(f"filler for {key}: {list(filler.table)}")
    return EXIT_OK


def _cmd_verify(args) -> int:
    pres = _load_presentation(args.presentation)
    cert = decode_certificate(read_json(args.certificate), pres, args.certificate)
    return _finish_report(verify_certificate(cert, budget=_budget(args)), args.out)


def _cmd_oracle(args) -> int:
    pres = _load_presentation(args.presentation)
    if args.kind == "kappa":
        if not args.map or not args.target_map:
            print("oracle kappa needs --map and --target-map", file=sys.stderr)
            return EXIT_FAIL
        f = decode_map_or_arrow(read_json(args.map), args.map)
        g = decode_map_or_arrow(read_json(args.target_map), args.target_map)
        report = oracle_kappa(
            pres, f, g, bound=args.bound, budget=_budget(args), seed=args.seed
        )
    else:
        if not args.certificate:
            print("oracle initiality needs --certificate", file=sys.stderr)
            return EXIT_FAIL
        cert = decode_certificate(read_json(args.certificate), pres, args.certificate)
        report = oracle_initiality(cert, budget=_budget(args))
    return _finish_report(report, args.out)


def _cmd_validate(args) -> int:
    pres = decode_presentation(read_json(args.presentation), args.presentation)
    report = pres.validate()
    if args.out:
        write_json(
            args.out,
            {
                "ok": report.ok,
                "violations": [
                    {"axiom": v.axiom, "witness": v.witness} for v in report.violations
                ],
            },
        )
    if report.ok:
        print("valid")
        return EXIT_OK
    for v in report.violations:
        print(f"FAIL {v.axiom}: {v.witness}")
    return EXIT_FAIL


_COMMANDS = {
    "factor": _cmd_factor,
    "lift": _cmd_lift,
    "verify": _cmd_verify,
    "oracle": _cmd_oracle,
    "validate": _cmd_validate,
}


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except NotStabilised as e:
        print(f"not stabilised: {e}", file=sys.stderr)
        if getattr(args, "out", None):
            write_json(
                args.out,
                {"error": "not-stabilised", "carrier_sizes": e.sizes, "detail": str(e)},
            )
        return EXIT_NOT_STABILISED
    except SizeBudgetExceeded as e:
        print(f"size budget exceeded: {e}", file=sys.stderr)
        return EXIT_BUDGET
    except (ParseError, InvalidPresentation) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_FAIL
    except EngineError as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
