"""Command-line surface: deterministic text output, machine mirror behind --machine.

Exit status: 0 on success, 1 when a requested check finds a violation,
2 on usage or parse errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import constructions, iso, norms, spreading
from .core import (ExplicitFamily, FamilyParseError, downward_closure,
                   family_to_text, format_permutation, format_set,
                   is_hereditary, maximal_elements, parse_set, read_family)
from .lazy import DEFAULT_RANK_BUDGET, AtLeast, parse_ordinal


def _load_family(arg: str) -> ExplicitFamily:
    return read_family(arg)


def _family_or_descriptor(arg: str, window_hint=None):
    """A path to a family file, or a descriptor expression."""
    if os.path.exists(arg):
        return read_family(arg)
    return constructions.parse_descriptor(arg)


def _emit(text: str, out):
    if out:
        with open(out, "w", encoding="ascii") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cmd_gen(args) -> int:
    fam = constructions.parse_descriptor(args.descriptor)
    trunc = fam.truncate(args.window)
    _emit(family_to_text(trunc), args.output)
    return 0


def _cmd_check(args) -> int:
    fam = _load_family(args.family)
    failures = 0
    ran = False
    if args.hereditary:
        ran = True
        ok = is_hereditary(fam)
        print("hereditary: %s" % ("ok" if ok else "VIOLATION"))
        failures += not ok
    if args.spreading is not None:
        ran = True
        witness = spreading.spreading_violation(fam, args.spreading)
        if witness is None:
            print("spreading(%d): ok" % args.spreading)
        else:
            print("spreading(%d): VIOLATION %s misses spread %s"
                  % (args.spreading, format_set(witness[0]), format_set(witness[1])))
            failures += 1
    if args.singletons:
        ran = True
        missing = [i for i in range(fam.base, fam.window) if (i,) not in fam]
        if missing:
            print("singletons: VIOLATION missing %s"
                  % " ".join(format_set((i,)) for i in missing))
            failures += 1
        else:
            print("singletons: ok")
    if not ran:
        print("nothing checked (use --hereditary / --spreading M / --singletons)",
              file=sys.stderr)
        return 2
    return 1 if failures else 0


def _cmd_maximal(args) -> int:
    _emit(family_to_text(maximal_elements(_load_family(args.family))), args.output)
    return 0


def _cmd_closure(args) -> int:
    _emit(family_to_text(downward_closure(_load_family(args.family))), args.output)
    return 0


def _cmd_norm(args) -> int:
    fam = _family_or_descriptor(args.family)
    vec = norms.read_vector(args.vector)
    value = norms.norm(fam, vec)
    print(value.numerator if value.denominator == 1 else value)
    return 0


def _cmd_extremes(args) -> int:
    fam = _load_family(args.family)
    points = norms.extreme_points(fam)
    if args.machine:
        print(json.dumps([norms.format_functional(f) for f in points]))
        return 0
    print("extreme points: %d" % len(points))
    for f in points:
        print(norms.format_functional(f))
    return 0


def _cmd_rank(args) -> int:
    fam = constructions.parse_descriptor(args.descriptor)
    budget = parse_ordinal(args.budget) if args.budget else DEFAULT_RANK_BUDGET
    if args.point is None:
        value = fam.family_rank(budget)
    else:
        value = fam.cb_rank(parse_set(args.point), budget)
    print(value)
    return 0


def _cmd_iso(args) -> int:
    fam_f = _load_family(args.family_f)
    fam_g = _load_family(args.family_g)
    pi = iso.find_pi_homeomorphism(fam_f, fam_g)
    print("none" if pi is None else format_permutation(pi))
    return 0


def _cmd_auto(args) -> int:
    fam = _load_family(args.family)
    sup_autos, free = iso.automorphism_summary(fam)
    total = len(sup_autos)
    for k in range(2, len(free) + 1):
        total *= k
    if args.machine:
        print(json.dumps({
            "support_automorphisms": [format_permutation(p) for p in sup_autos],
            "free_points": free,
            "total": total,
        }, sort_keys=True))
        return 0
    print("support automorphisms: %d" % len(sup_autos))
    for p in sup_autos:
        print(format_permutation(p))
    print("free points: %d" % len(free))
    print("total: %d" % total)
    return 0


def _cmd_census(args) -> int:
    report = iso.census(args.members, args.window, base=args.base,
                        require_singletons=not args.relax_singletons,
                        workers=args.workers)
    if args.machine:
        print(json.dumps(report.machine(), sort_keys=True))
    else:
        sys.stdout.write(report.text())
    return 1 if report.counterexamples else 0


def _cmd_strata(args) -> int:
    fam = _load_family(args.family)
    shown = False
    for k in range(fam.window + 1):
        members = iso.stratum(fam, args.n, k, args.headroom).members
        if not members and not shown:
            continue
        line = "k=%d: %s" % (k, " ".join(format_set(s) for s in members) or "(none)")
        print(line)
        shown = True
        if len(members) == sum(1 for s in fam.members if len(s) == args.n):
            break
    if not shown:
        print("(no members of size %d)" % args.n)
    return 0


def _cmd_claim_scan(args) -> int:
    fam = _load_family(args.family)
    pairs = checked = 0
    violations = []
    members = fam.members
    for s in members:
        for t in members:
            if len(s) != len(t) or s == t:
                continue
            if not spreading.is_spread_of(s, t):
                continue
            pairs += 1
            rec = iso.spread_exclusion_check(fam, s, t, args.headroom)
            checked += 1
            if not (rec.ok and rec.outside_inclusion and rec.crossing_bound):
                violations.append(rec)
    print("spread pairs: %d, violations: %d" % (pairs, len(violations)))
    for rec in violations:
        print("violation: %s -> %s (|I_s|=%d, |I_t|=%d)"
              % (format_set(rec.source), format_set(rec.target),
                 rec.source_count, rec.target_count))
    return 1 if violations else 0


def _cmd_reconstruct(args) -> int:
    fam = _load_family(args.family)
    rebuilt = iso.reconstruct_level(fam, args.n, args.headroom)
    actual = iso.level_slice(fam, args.n + 1)
    if rebuilt == actual:
        print("level %d: ok (%d members)" % (args.n + 1, len(actual)))
        return 0
    extra = sorted(set(rebuilt.members) - set(actual.members))
    missing = sorted(set(actual.members) - set(rebuilt.members))
    print("level %d: MISMATCH" % (args.n + 1))
    for s in extra:
        print("spurious: %s" % format_set(s))
    for s in missing:
        print("missing: %s" % format_set(s))
    return 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="combfam",
        description="Compact hereditary families of finite sets: norms, ranks, "
                    "spreads and permutation search.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="truncate a descriptor to a family file")
    p.add_argument("descriptor")
    p.add_argument("--window", type=int, required=True)
    p.add_argument("-o", "--output")
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("check", help="verify properties of a family file")
    p.add_argument("family")
    p.add_argument("--hereditary", action="store_true")
    p.add_argument("--spreading", type=int, metavar="HEADROOM")
    p.add_argument("--singletons", action="store_true")
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("maximal", help="maximal members")
    p.add_argument("family")
    p.add_argument("-o", "--output")
    p.set_defaults(func=_cmd_maximal)

    p = sub.add_parser("closure", help="downward closure")
    p.add_argument("family")
    p.add_argument("-o", "--output")
    p.set_defaults(func=_cmd_closure)

    p = sub.add_parser("norm", help="norm of a vector against a family")
    p.add_argument("family", help="family file or descriptor")
    p.add_argument("vector", help="vector file")
    p.set_defaults(func=_cmd_norm)

    p = sub.add_parser("extremes", help="extreme points of the dual ball")
    p.add_argument("family")
    p.add_argument("--machine", action="store_true")
    p.set_defaults(func=_cmd_extremes)

    p = sub.add_parser("rank", help="point rank or family rank of a descriptor")
    p.add_argument("descriptor")
    p.add_argument("--point", help="set literal like {4}; omit for the family rank")
    p.add_argument("--budget", help="ordinal literal, default w*2")
    p.set_defaults(func=_cmd_rank)

    p = sub.add_parser("iso", help="permutation carrying one family onto another")
    p.add_argument("family_f")
    p.add_argument("family_g")
    p.set_defaults(func=_cmd_iso)

    p = sub.add_parser("auto", help="automorphism report")
    p.add_argument("family")
    p.add_argument("--machine", action="store_true")
    p.set_defaults(func=_cmd_auto)

    p = sub.add_parser("census", help="pairwise permutation census of "
                                      "hereditary spreading families")
    p.add_argument("--members", type=int, required=True)
    p.add_argument("--window", type=int, required=True)
    p.add_argument("--base", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--relax-singletons", action="store_true")
    p.add_argument("--machine", action="store_true")
    p.set_defaults(func=_cmd_census)

    p = sub.add_parser("strata", help="exclusion-count strata of one size level")
    p.add_argument("family")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--headroom", type=int)
    p.set_defaults(func=_cmd_strata)

    p = sub.add_parser("claim-scan", help="exclusion monotonicity over all "
                                          "equal-size spread pairs")
    p.add_argument("family")
    p.add_argument("--headroom", type=int)
    p.set_defaults(func=_cmd_claim_scan)

    p = sub.add_parser("reconstruct", help="rebuild one size level from the "
                                           "previous one")
    p.add_argument("family")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--headroom", type=int)
    p.set_defaults(func=_cmd_reconstruct)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        return args.func(args)
    except FamilyParseError as exc:
        print("parse error: %s" % exc, file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
