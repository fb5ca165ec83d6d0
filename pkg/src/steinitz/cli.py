"""Command-line front end.

Every subcommand prints one JSON envelope on stdout::

    {"command": ..., "input": {...}, "result": {...}, "certificate": ...,
     "error": null, "timing": null, "version": "..."}

Exit codes: 0 success, 1 property violation, 2 invalid input,
3 sampling/search exhaustion, 4 invalid ramification data.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from importlib import resources

from . import __version__
from .classgroup import Field, Form, enumerate_class_group
from .engine import (
    RamData,
    RamDatum,
    membership,
    realizable,
    steinitz_class,
    validate_ram_data,
    witness_search,
)
from .errors import (
    SamplingExhaustedError,
    SearchExhaustedError,
    SteinitzError,
)
from .lgroups import GroupSpec
from .verify import SUITES, run_suite
from .wgroups import w_group

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_INVALID = 2
EXIT_EXHAUSTED = 3
EXIT_RAMIFICATION = 4


class CommandFailed(Exception):
    def __init__(self, code: int, kind: str, message: str, result=None):
        super().__init__(message)
        self.code = code
        self.kind = kind
        self.result = result


def _forms(forms) -> list[list[int]]:
    return [list(f) for f in forms]


def _field(d: int) -> Field:
    try:
        return Field(d)
    except SteinitzError as exc:
        raise CommandFailed(EXIT_INVALID, "invalid_input", str(exc))


def _spec(args) -> GroupSpec:
    try:
        if args.group == "semidirect":
            if args.n is None:
                raise CommandFailed(EXIT_INVALID, "invalid_input", "--n is required for the semidirect family")
            return GroupSpec.semidirect(args.l, args.n)
        return GroupSpec.heisenberg(args.l)
    except SteinitzError as exc:
        raise CommandFailed(EXIT_INVALID, "invalid_input", str(exc))


def parse_ram(text: str) -> list[RamDatum]:
    """Parse "p:e,p:e:1,..." where a trailing ":1" selects the conjugate prime."""
    out = []
    for chunk in filter(None, (c.strip() for c in text.split(","))):
        parts = chunk.split(":")
        if len(parts) not in (2, 3):
            raise ValueError(f"cannot parse ramification datum {chunk!r}")
        p, e = int(parts[0]), int(parts[1])
        conj = len(parts) == 3 and parts[2] not in ("0", "")
        out.append(RamDatum(p, e, conj))
    return out


def parse_form(text: str) -> Form:
    parts = [int(x) for x in text.replace("(", "").replace(")", "").split(",")]
    if len(parts) != 3:
        raise ValueError(f"expected a,b,c, got {text!r}")
    return Form(*parts)


def cmd_classgroup(args):
    field = _field(args.d)
    group = enumerate_class_group(field)
    result = {
        "d": field.d,
        "D": field.D,
        "h": group.h,
        "invariants": list(group.invariants),
        "forms": _forms(group.elements),
        "generators": _forms(group.generators),
    }
    return {"d": args.d}, result, None


def cmd_wgroup(args):
    field = _field(args.d)
    if args.m < 1:
        raise CommandFailed(EXIT_INVALID, "invalid_input", "--m must be >= 1")
    try:
        w = w_group(field, args.m)
    except SamplingExhaustedError as exc:
        raise CommandFailed(EXIT_EXHAUSTED, "sampling_exhausted", str(exc))
    result = w.as_dict()
    result["class_number"] = w.result.group.h
    return {"d": args.d, "m": args.m}, result, w.certificate.value


def _realizable_payload(field: Field, spec: GroupSpec) -> tuple[dict, str]:
    rt = realizable(field, spec)
    return {
        "group": spec.label(),
        "family": spec.family.value,
        "l": spec.l,
        "n": spec.n if spec.family.value == "semidirect" else None,
        "w_modulus": rt.w_modulus,
        "exponent": rt.exponent,
        "w_elements": _forms(rt.w.result.elements),
        "elements": _forms(rt.result.elements),
        "order": rt.result.order,
        "class_number": rt.result.group.h,
    }, rt.certificate.value


def _group_input(args) -> dict:
    return {"d": args.d, "group": args.group, "l": args.l, "n": args.n}


def cmd_realizable(args):
    field = _field(args.d)
    spec = _spec(args)
    try:
        result, cert = _realizable_payload(field, spec)
    except SamplingExhaustedError as exc:
        raise CommandFailed(EXIT_EXHAUSTED, "sampling_exhausted", str(exc))
    return _group_input(args), result, cert


def cmd_steinitz(args):
    field = _field(args.d)
    spec = _spec(args)
    inp = {**_group_input(args), "ram": args.ram}
    try:
        data = parse_ram(args.ram)
    except ValueError as exc:
        raise CommandFailed(EXIT_INVALID, "invalid_input", str(exc))
    ram = RamData(field, spec, tuple(data))
    report = validate_ram_data(ram)
    if not report.ok:
        bad = report.failures[0]
        raise CommandFailed(
            EXIT_RAMIFICATION,
            "invalid_ramification",
            f"clause ({bad.clause}): {bad.reason}",
            {"validation": report.as_dict()},
        )
    cls = steinitz_class(ram, validate=False)
    rt = realizable(field, spec)
    result = {
        "validation": report.as_dict(),
        "steinitz_class": list(cls),
        "member": cls in rt.result,
        "realizable": _forms(rt.result.elements),
    }
    return inp, result, rt.certificate.value


def cmd_verify(args):
    results = run_suite(args.suite, seed=args.seed, d=args.d)
    payload = {
        "suites": [r.as_dict() for r in results],
        "cases": sum(r.cases for r in results),
        "violations": sum(r.violations for r in results),
    }
    inp = {"suite": args.suite, "seed": args.seed, "d": args.d}
    if payload["violations"]:
        raise CommandFailed(EXIT_VIOLATION, "property_violation", f"{payload['violations']} violations", payload)
    return inp, payload, None


def cmd_witness(args):
    field = _field(args.d)
    spec = _spec(args)
    inp = {**_group_input(args), "target": args.target, "avoid": args.avoid}
    try:
        target = parse_form(args.target)
        group = enumerate_class_group(field)
        target = group.element(target)
    except (ValueError, SteinitzError) as exc:
        raise CommandFailed(EXIT_INVALID, "invalid_input", str(exc))
    if not membership(field, spec, target):
        raise CommandFailed(EXIT_INVALID, "not_realizable", f"{target} is not realizable for {spec.label()}")
    try:
        ram = witness_search(field, spec, target, args.avoid)
    except SearchExhaustedError as exc:
        raise CommandFailed(EXIT_EXHAUSTED, "search_exhausted", str(exc))
    result = {
        "target": list(target),
        "witness": ram.as_list(),
        "steinitz_class": list(steinitz_class(ram)),
    }
    return inp, result, realizable(field, spec).certificate.value


COMMANDS = {
    "classgroup": cmd_classgroup,
    "wgroup": cmd_wgroup,
    "realizable": cmd_realizable,
    "steinitz": cmd_steinitz,
    "verify": cmd_verify,
    "witness": cmd_witness,
}


def _add_group_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--d", type=int, required=True, help="squarefree negative integer")
    p.add_argument("--group", choices=["semidirect", "heisenberg"], required=True)
    p.add_argument("--l", type=int, required=True, help="odd prime")
    p.add_argument("--n", type=int, default=None, help="exponent of the cyclic factor (semidirect only)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="steinitz", description=__doc__.splitlines()[0])
    parser.add_argument("--timing", action="store_true", help="include wall-clock timing in the envelope")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classgroup", help="class group of Q(sqrt(d))")
    p.add_argument("--d", type=int, required=True)

    p = sub.add_parser("wgroup", help="W(k, m)")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--m", type=int, required=True)

    p = sub.add_parser("realizable", help="realizable Steinitz classes R_t(k, G)")
    _add_group_args(p)

    p = sub.add_parser("steinitz", help="Steinitz class of ramification data")
    _add_group_args(p)
    p.add_argument("--ram", default="", help='comma separated "p:e" or "p:e:1" (conjugate prime)')

    p = sub.add_parser("verify", help="run property suites")
    p.add_argument("--suite", choices=[*SUITES, "all"], default="all")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--d", type=int, default=None, help="restrict field-dependent suites to one field")

    p = sub.add_parser("witness", help="ramification data realizing a class")
    _add_group_args(p)
    p.add_argument("--target", required=True, help='reduced form "a,b,c"')
    p.add_argument("--avoid", type=int, default=1)
    return parser


def load_schema() -> dict:
    """JSON Schema (draft 2020-12) for the envelope printed by every command."""
    return json.loads(resources.files("steinitz").joinpath("schemas/envelope.json").read_text())


def dumps(envelope: dict) -> str:
    return json.dumps(envelope, sort_keys=True, indent=2)


def run(argv=None) -> tuple[int, dict]:
    args = build_parser().parse_args(argv)
    start = time.perf_counter()
    envelope = {
        "command": args.command,
        "input": {},
        "result": None,
        "certificate": None,
        "error": None,
        "timing": None,
        "version": __version__,
    }
    code = EXIT_OK
    try:
        inp, result, cert = COMMANDS[args.command](args)
        envelope.update(input=inp, result=result, certificate=cert)
    except CommandFailed as exc:
        code = exc.code
        envelope["input"] = {k: v for k, v in vars(args).items() if k not in ("command", "timing")}
        envelope["result"] = exc.result
        envelope["error"] = {"kind": exc.kind, "message": str(exc)}
    except SteinitzError as exc:
        code = EXIT_INVALID
        envelope["input"] = {k: v for k, v in vars(args).items() if k not in ("command", "timing")}
        envelope["error"] = {"kind": "invalid_input", "message": str(exc)}
    if args.timing:
        envelope["timing"] = {"seconds": round(time.perf_counter() - start, 6)}
    return code, envelope


def main(argv=None) -> int:
    code, envelope = run(argv)
    print(dumps(envelope))
    if envelope["error"]:
        print(f"steinitz: {envelope['error']['message']}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
