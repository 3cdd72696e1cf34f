"""``fml``: run scenarios and the example checks from the command line.

Exit codes: 0 success, 1 malformed input, 2 refusal (a failed precondition
such as F being a zero divisor).  Reports are JSON with sorted keys; the
``report`` member is canonical and the ``timing`` member is not.
"""

from __future__ import annotations

import argparse
import json
import sys

from .drinfeld import DrinfeldModule, sharp_scenario, survey_report
from .errors import InputError, RefusalError
from .runner import run_scenario, validation_report
from .scenario import load_scenario


def _int_list(text: str) -> list:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc


def dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _emit(payload, out):
    text = dump(payload)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _run(args, expect_kind=None):
    sc = load_scenario(args.scenario)
    if expect_kind and sc.kind != expect_kind:
        raise InputError(f"expected a {expect_kind} scenario, got {sc.kind}")
    try:
        report, timing = run_scenario(sc, nmax=getattr(args, "nmax", None),
                                      sieve=getattr(args, "sieve", None), box=args.box)
    except RefusalError as exc:
        _emit({"report": {"kind": sc.kind, "scenario": sc.echo(),
                          "refusal": {"message": str(exc), "diagnostic": exc.diagnostic}}}, args.out)
        return 2
    _emit({"report": report, "timing": timing}, args.out)
    return 0


def _drinfeld(args):
    if args.which == "survey":
        D = DrinfeldModule.make(args.q, args.phi, args.field_degree)
        report = survey_report(D, args.deg)
    else:
        report = sharp_scenario(args.q, args.deg)
    _emit({"report": report}, args.out)
    return 0


def _check(args):
    from .checks import run_checks

    results = run_checks(args.seed, quick=args.quick)
    _emit({"report": {"seed": args.seed, "suites": results}}, args.out)
    return 0 if all(r["failures"] == 0 for r in results) else 1


def _validate(args):
    _emit({"report": validation_report(load_scenario(args.scenario))}, args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="fml", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="cmd", required=True)

    def common(p):
        p.add_argument("--out", help="write the report here instead of stdout")

    run = sub.add_parser("run", help="run a scenario file")
    run.add_argument("scenario")
    run.add_argument("--nmax", type=int, help="search bound for growing exponents")
    run.add_argument("--sieve", type=_int_list, help="sieve moduli, e.g. 2,3,4,5")
    run.add_argument("--box", type=int, help="box size (oracle check, fset bound or gm box)")
    common(run)
    run.set_defaults(func=_run)

    dr = sub.add_parser("drinfeld", help="two-term survey or the twisted-square example")
    dr.add_argument("which", choices=["survey", "sharp"])
    dr.add_argument("--q", type=int, required=True)
    dr.add_argument("--deg", type=int, required=True, help="degree bound")
    dr.add_argument("--phi", type=_int_list, default=[0, 1, 1], help="phi_t coefficients, F^0 first")
    dr.add_argument("--field-degree", type=int, default=1)
    common(dr)
    dr.set_defaults(func=_drinfeld)

    gm = sub.add_parser("gm", help="torus subgroup against a linear relation")
    gm.add_argument("which", choices=["intersect"])
    gm.add_argument("scenario")
    gm.add_argument("--box", type=int)
    common(gm)
    gm.set_defaults(func=lambda a: _run(a, "gm-intersect"))

    va = sub.add_parser("validate", help="Frobenius-ring checks for a scenario's module")
    va.add_argument("scenario")
    common(va)
    va.set_defaults(func=_validate)

    ck = sub.add_parser("check", help="seeded random property suites")
    ck.add_argument("--seed", type=int, default=0)
    ck.add_argument("--quick", action="store_true")
    common(ck)
    ck.set_defaults(func=_check)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InputError, OSError) as exc:
        print(f"fml: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
