"""Command-line front end.

Machine-readable JSON goes to stdout (or ``--out``), a short human
summary to stderr.  Exit codes: 0 valid/feasible/noncontextual,
1 violation/infeasible/contextual/disturbing, 2 bad input or refusal.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path
from typing import Sequence

from . import formats
from .bundle import SampleBundle, enumerate_sections, is_trivializable, pushforward, twist_report
from .decide import DEFAULT_LIMIT, check_extends, is_noncontextual
from .errors import InputError, TooLargeError, UnsupportedError
from .fixtures import FIXTURES, gen_fixture
from .model import EmpiricalModel, check_no_disturbance
from .scenario import Scenario, betti_numbers, validate_scenario
from .subscenario import check_sequence

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


def _limit(args: argparse.Namespace) -> int:
    if args.limit is not None:
        return args.limit
    env = os.environ.get("CTXKIT_LIMIT")
    if env:
        try:
            return int(env)
        except ValueError:
            raise InputError(f"CTXKIT_LIMIT must be an integer, got {env!r}") from None
    return DEFAULT_LIMIT


def _emit(args: argparse.Namespace, doc) -> None:
    text = formats.dumps(doc)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _say(msg: str) -> None:
    print(msg, file=sys.stderr)


def cmd_validate(args) -> int:
    s = formats.load_scenario(args.scenario)
    violations = validate_scenario(s, strict=args.strict)
    _emit(args, {"valid": not violations, "violations": violations})
    _say("valid scenario" if not violations else f"{len(violations)} violation(s)")
    return EXIT_OK if not violations else EXIT_FAIL


def cmd_nodisturbance(args) -> int:
    m = formats.load_model(args.model)
    violations = check_no_disturbance(m)
    _emit(args, {"no_disturbance": not violations, "violations": [formats.violation_to_doc(v) for v in violations]})
    _say("marginal condition holds" if not violations else f"disturbing: {len(violations)} overlap(s) disagree")
    return EXIT_OK if not violations else EXIT_FAIL


def cmd_noncontextual(args) -> int:
    m = formats.load_model(args.model)
    v = is_noncontextual(m, _limit(args))
    _emit(args, formats.verdict_to_doc(v))
    _say(f"status: {v.status}")
    return EXIT_OK if v.status == "noncontextual" else EXIT_FAIL


def cmd_homology(args) -> int:
    s = formats.load_scenario(args.scenario)
    b0, b1 = betti_numbers(s)
    _emit(args, {"b0": b0, "b1": b1})
    _say(f"b0={b0} b1={b1}")
    return EXIT_OK


def cmd_bundle_twists(args) -> int:
    b = formats.load_bundle(args.bundle)
    r = twist_report(b)
    _emit(args, formats.twist_report_to_doc(r))
    odd = sum(c.parity for c in r.cycles)
    _say(f"{len(r.twisted_incidences)} twist(s), {odd} odd cycle(s) of {len(r.cycles)}")
    return EXIT_OK


def cmd_bundle_trivialize(args) -> int:
    b = formats.load_bundle(args.bundle)
    ok, gauge = is_trivializable(b)
    doc = {"trivializable": ok}
    if gauge is not None:
        doc["gauge"] = formats.gauge_to_doc(gauge)
    _emit(args, doc)
    _say("trivializable" if ok else "not trivializable: odd holonomy")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_bundle_sections(args) -> int:
    b = formats.load_bundle(args.bundle)
    sections = enumerate_sections(b, _limit(args))
    _emit(args, formats.sections_to_doc(sections))
    _say(f"{len(sections)} section(s)")
    return EXIT_OK


def cmd_pushforward(args) -> int:
    b = formats.load_bundle(args.bundle)
    base = formats.base_from_doc(formats.load_json(args.base), b)
    m = pushforward(b, base)
    violations = check_no_disturbance(m)
    doc = {
        "model": formats.model_to_doc(m),
        "no_disturbance": not violations,
        "violations": [formats.violation_to_doc(v) for v in violations],
    }
    _emit(args, doc)
    _say("pushforward satisfies the marginal condition" if not violations else "pushforward is disturbing")
    return EXIT_OK if not violations else EXIT_FAIL


def cmd_extend(args) -> int:
    m = formats.load_model(args.model)
    sup = formats.load_scenario(args.super)
    r = check_extends(m, sup, _limit(args))
    _emit(args, formats.extension_to_doc(r))
    _say(f"status: {r.status}")
    return EXIT_OK if r.feasible else EXIT_FAIL


def cmd_sequence(args) -> int:
    m = formats.load_model(args.model)
    chain = [formats.load_scenario(p) for p in args.chain]
    rep = check_sequence(m, chain, _limit(args))
    _emit(args, formats.sequence_to_doc(rep))
    if rep.failure_step is None:
        _say("extends to every scenario of the chain")
    else:
        _say(f"first failure at step {rep.failure_step}")
    return EXIT_OK if rep.failure_step is None else EXIT_FAIL


def cmd_gen(args) -> int:
    flips = [int(x) for x in args.flips.split(",") if x.strip()] if args.flips else []
    outcomes = tuple(args.outcomes.split(","))
    obj = gen_fixture(args.name, n=args.n, outcomes=outcomes, flips=flips, width=args.width)
    if isinstance(obj, Scenario):
        doc = formats.scenario_to_doc(obj)
    elif isinstance(obj, EmpiricalModel):
        doc = formats.model_to_doc(obj)
    elif isinstance(obj, SampleBundle):
        doc = formats.bundle_to_doc(obj)
    else:  # pragma: no cover
        raise AssertionError(type(obj))
    _emit(args, doc)
    _say(f"generated {args.name}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--limit", type=int, default=None, help="enumeration cap (default: $CTXKIT_LIMIT or 10^6)")
    common.add_argument("--strict", action="store_true", help="also require a maximal (antichain) cover")
    common.add_argument("--out", default=None, help="write JSON here instead of stdout")

    parser = argparse.ArgumentParser(prog="ctxkit", description="Contextuality scenarios, models and sample bundles.")
    sub = parser.add_subparsers(dest="verb", required=True)

    def verb(name, fn, help_text):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.set_defaults(fn=fn)
        return p

    verb("validate", cmd_validate, "check cover (and maximality with --strict)").add_argument("--scenario", required=True)
    verb("nodisturbance", cmd_nodisturbance, "check the marginal condition").add_argument("--model", required=True)
    verb("noncontextual", cmd_noncontextual, "decide noncontextuality with a certificate").add_argument(
        "--model", required=True
    )
    verb("homology", cmd_homology, "GF(2) Betti numbers b0, b1").add_argument("--scenario", required=True)
    verb("bundle-twists", cmd_bundle_twists, "twisted incidences and cycle parities").add_argument(
        "--bundle", required=True
    )
    verb("bundle-trivialize", cmd_bundle_trivialize, "find a trivialising gauge").add_argument("--bundle", required=True)
    verb("bundle-sections", cmd_bundle_sections, "enumerate global sections").add_argument("--bundle", required=True)
    p = verb("pushforward", cmd_pushforward, "push a base distribution through a bundle")
    p.add_argument("--bundle", required=True)
    p.add_argument("--base", required=True)
    p = verb("extend", cmd_extend, "check extension to a larger scenario")
    p.add_argument("--model", required=True)
    p.add_argument("--super", required=True)
    p = verb("sequence", cmd_sequence, "check extension along a chain of scenarios")
    p.add_argument("--model", required=True)
    p.add_argument("--chain", nargs="+", required=True)
    p = verb("gen", cmd_gen, "emit a built-in fixture")
    p.add_argument("name", choices=FIXTURES)
    p.add_argument("--n", type=int, default=5)
    p.add_argument("--outcomes", default="0,1")
    p.add_argument("--flips", default="")
    p.add_argument("--width", type=int, default=2, help="context width for n-cycle (2 = plain cycle)")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_INPUT if e.code else EXIT_OK
    try:
        return args.fn(args)
    except TooLargeError as e:
        _emit(args, {"status": "too-large", "cardinality": e.cardinality, "limit": e.limit})
        _say(f"error: {e}")
        return EXIT_INPUT
    except (InputError, UnsupportedError) as e:
        _say(f"error: {e}")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
