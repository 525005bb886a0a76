"""
fsplit command line.

    python fsplit.py core --ring "p=2; vars=x; I=x^2" --ideal "x^2"
    python fsplit.py sr-atlas --facets path.txt --p 3 --dot atlas.dot

JSON goes to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

from colorama import Fore, Style, just_fix_windows_console

from config import (
    APP_NAME,
    APP_VERSION,
    DEFAULT_E_MAX,
    DEFAULT_WINDOW,
    EXIT_ENGINE,
    EXIT_INPUT,
    EXIT_OK,
    EXIT_RESOURCE,
    resolve_degree_cap,
)
from features.property_suite import PROPERTY_NAMES, check_radical, run_property_suite
from features.reports import atlas_result, core_payload, envelope, ideal_payload, properties_result
from models.cartier import (
    CartierPair,
    cartier_contraction,
    cartier_core,
    classify_strong_F_regularity,
    f_pure_locus,
    is_compatible,
    is_F_pure,
    is_F_pure_along,
    pair_core,
    pair_is_F_pure,
    splitting_prime,
)
from models.errors import DegreeCapExceeded, EngineInvariantError, FsplitError, ParseError, ValidationError
from models.frobenius import FrobeniusLevel
from models.ideal_engine import Ideal, PresentedRing
from models.polyring import TermOrder, parse_element
from models.stanley_reisner import (
    SimplicialComplex,
    core_map_atlas,
    sr_ring,
    sums_of_minimal_primes,
)
from utils.app_logging import get_logger, set_console_level
from utils.helpers import parse_rational, parse_ring_description, split_generators
from utils.io import dump_json, read_facet_file, write_json_file, write_text_file

LOG = get_logger("cli")


# -------------------- parsing --------------------

def build_ring(text: str, degree_cap: Optional[int]) -> PresentedRing:
    desc = parse_ring_description(text)
    order = TermOrder(desc.order) if desc.order else None
    return PresentedRing.from_strings(desc.p, desc.variables, desc.generators, degree_cap=degree_cap, order=order)


def build_ideal(ring: PresentedRing, text: Optional[str], what: str = "--ideal") -> Ideal:
    if text is None:
        raise ValidationError(f"{what} is required for this command")
    return ring.parse_ideal(split_generators(text))


def _require_ring(args) -> PresentedRing:
    if not args.ring:
        raise ValidationError("--ring is required for this command")
    return build_ring(args.ring, args.degree_cap)


# -------------------- commands --------------------

def cmd_core(args) -> tuple[dict, int]:
    ring = _require_ring(args)
    J = build_ideal(ring, args.ideal)
    report = cartier_core(ring, J, args.e_max, args.window)
    return core_payload(ring, report, radical=check_radical(report.core)), EXIT_OK


def cmd_contraction(args) -> tuple[dict, int]:
    ring = _require_ring(args)
    J = ring.normalize(build_ideal(ring, args.ideal))
    level = FrobeniusLevel.of(ring.ambient, args.e)
    A = cartier_contraction(ring, J, level)
    result = {
        "e": level.e,
        "q": level.q,
        "contraction": ideal_payload(A),
        "compatible": is_compatible(ring, J, level),
    }
    return envelope(ring, result, levels_computed=level.e), EXIT_OK


def cmd_fpure(args) -> tuple[dict, int]:
    ring = _require_ring(args)
    return envelope(ring, {"f_pure": is_F_pure(ring)}, levels_computed=1), EXIT_OK


def cmd_fpure_locus(args) -> tuple[dict, int]:
    ring = _require_ring(args)
    locus = f_pure_locus(ring)
    result = {"locus": ideal_payload(locus), "f_pure": locus.is_unit()}
    return envelope(ring, result, levels_computed=1), EXIT_OK


def cmd_split_along(args) -> tuple[dict, int]:
    ring = _require_ring(args)
    c = parse_element(args.c, ring.ambient)
    found = is_F_pure_along(ring, c, args.e_max)
    warnings = [] if found else [f"no splitting along c found up to e_max={args.e_max}"]
    result = {"c": args.c, "f_pure_along": found}
    return envelope(ring, result, levels_computed=args.e_max, warnings=warnings), EXIT_OK


def cmd_splitting_prime(args) -> tuple[dict, int]:
    ring = _require_ring(args)
    report = splitting_prime(ring, args.e_max, args.window)
    return core_payload(ring, report), EXIT_OK


def cmd_sfr(args) -> tuple[dict, int]:
    ring = _require_ring(args)
    verdict, report = classify_strong_F_regularity(ring, args.e_max, args.window)
    payload = core_payload(ring, report)
    payload["result"] = {
        "strongly_F_regular": verdict.value,
        "splitting_prime": ideal_payload(report.core),
        "upper_bound": ideal_payload(report.upper_bound),
        "f_pure": report.f_pure,
    }
    return payload, EXIT_OK


def cmd_pair_core(args) -> tuple[dict, int]:
    ring = _require_ring(args)
    J = build_ideal(ring, args.ideal)
    a = build_ideal(ring, args.a, "-a")
    pair = CartierPair(a, parse_rational(args.t))
    report = pair_core(ring, J, pair, args.e_max, args.window)
    extra = {"a": ideal_payload(a), "t": str(pair.t), "pair_f_pure": pair_is_F_pure(ring, pair, args.e_max)}
    return core_payload(ring, report, **extra), EXIT_OK


def cmd_sr_atlas(args) -> tuple[dict, int]:
    if args.facets:
        facets, vertices = read_facet_file(Path(args.facets))
        ring = sr_ring(SimplicialComplex.from_facets(facets, vertices), args.p, degree_cap=resolve_degree_cap(args.degree_cap))
    else:
        ring = _require_ring(args)
    graph = core_map_atlas(ring, args.e_max, args.window, strict=args.strict)
    result = atlas_result(graph)
    result["sums_of_minimal_primes"] = [P.label() for P in sorted(sums_of_minimal_primes(ring))]
    if args.dot:
        write_text_file(Path(args.dot), graph.to_dot())
        LOG.info("wrote %s", args.dot)
    warnings = [] if graph.all_agree() else ["computed cores disagree with the closed form"]
    return envelope(ring, result, certification="closed_form_exact" if graph.all_agree() else None,
                    levels_computed=args.e_max, warnings=warnings), EXIT_OK


def cmd_check_props(args) -> tuple[dict, int]:
    ring = _require_ring(args)
    results = run_property_suite(ring, args.e_max, args.window, names=args.only, seed=args.seed)
    result = properties_result(results)
    code = EXIT_OK if result["passed"] else EXIT_ENGINE
    return envelope(ring, result, levels_computed=args.e_max), code


COMMANDS = {
    "core": cmd_core,
    "contraction": cmd_contraction,
    "fpure": cmd_fpure,
    "fpure-locus": cmd_fpure_locus,
    "split-along": cmd_split_along,
    "splitting-prime": cmd_splitting_prime,
    "sfr": cmd_sfr,
    "pair-core": cmd_pair_core,
    "sr-atlas": cmd_sr_atlas,
    "check-props": cmd_check_props,
}


# -------------------- argparse --------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--ring", help='ring description, e.g. "p=2; vars=x,y; I=x*y"')
    common.add_argument("--ideal", help="comma-separated generators of the target ideal")
    common.add_argument("--degree-cap", type=int, default=None, help="total-degree cap (env FSPLIT_DEGREE_CAP)")
    common.add_argument("--e-max", type=int, default=DEFAULT_E_MAX, help="largest Frobenius level computed")
    common.add_argument("--window", type=int, default=DEFAULT_WINDOW, help="equal partial intersections needed to stop")
    common.add_argument("--out", help="also write the JSON payload to this path")
    verbosity = common.add_mutually_exclusive_group()
    verbosity.add_argument("--verbose", action="store_true", help="log INFO to stderr")
    verbosity.add_argument("--debug", action="store_true", help="log DEBUG to stderr")

    parser = argparse.ArgumentParser(prog=APP_NAME, description="Cartier cores, contractions and F-singularity classifiers.")
    parser.add_argument("--version", action="version", version=f"{APP_NAME} {APP_VERSION}")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("core", parents=[common], help="Cartier core of --ideal")
    p = sub.add_parser("contraction", parents=[common], help="e-th Cartier contraction of --ideal")
    p.add_argument("-e", type=int, required=True, help="Frobenius level (>= 1)")
    sub.add_parser("fpure", parents=[common], help="Fedder's criterion")
    sub.add_parser("fpure-locus", parents=[common], help="ideal of the non-F-pure locus")
    p = sub.add_parser("split-along", parents=[common], help="F-purity along an element (graded rings)")
    p.add_argument("-c", required=True, help="the element c")
    sub.add_parser("splitting-prime", parents=[common], help="core of the homogeneous maximal ideal")
    sub.add_parser("sfr", parents=[common], help="strong F-regularity (graded rings)")
    p = sub.add_parser("pair-core", parents=[common], help="core for the pair algebra C^{a^t}")
    p.add_argument("-a", required=True, help="comma-separated generators of a")
    p.add_argument("-t", required=True, help="positive rational exponent, e.g. 3/2")
    p = sub.add_parser("sr-atlas", parents=[common], help="core map on monomial primes of a Stanley–Reisner ring")
    p.add_argument("--facets", help="facet file (one facet per line)")
    p.add_argument("--p", type=int, default=2, help="characteristic for --facets (default 2)")
    p.add_argument("--dot", help="also write the graph as DOT to this path")
    p.add_argument("--strict", action="store_true", help="fail on any closed-form disagreement")
    p = sub.add_parser("check-props", parents=[common], help="structural property suite")
    p.add_argument("--only", action="append", choices=PROPERTY_NAMES, help="run only this property (repeatable)")
    p.add_argument("--seed", type=int, default=0, help="seed for sampled checks")
    return parser


def _diagnostic(kind: str, message: str) -> None:
    if sys.stderr.isatty():
        print(f"{Fore.RED}{kind}:{Style.RESET_ALL} {message}", file=sys.stderr)
    else:
        print(f"{kind}: {message}", file=sys.stderr)


def run(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if args.debug:
        set_console_level(logging.DEBUG)
    elif args.verbose:
        set_console_level(logging.INFO)

    try:
        payload, code = COMMANDS[args.command](args)
    except DegreeCapExceeded as e:
        _diagnostic("degree cap", str(e))
        return EXIT_RESOURCE
    except (ParseError, ValidationError) as e:
        _diagnostic("input error", str(e))
        return EXIT_INPUT
    except EngineInvariantError as e:
        LOG.error("engine invariant failed: %s", e)
        _diagnostic("engine error", str(e))
        return EXIT_ENGINE
    except FsplitError as e:
        _diagnostic("error", str(e))
        return EXIT_ENGINE

    print(dump_json(payload))
    if args.out:
        write_json_file(Path(args.out), payload)
    LOG.info("%s finished with exit code %d", args.command, code)
    return code


def main() -> int:
    just_fix_windows_console()
    return run()


if __name__ == "__main__":
    sys.exit(main())
