"""Command-line front end.

Exit status: 0 on success, 2 when input fails validation (an error object is
printed as JSON), 1 when a guaranteed property fails on valid input.
"""

import argparse
import json
import random
import sys

from . import io
from .contagion import cascade_trace, merge, phenome_of
from .dynamical import commuting_square_check, timed_interpret
from ._config import enumeration_budget
from .errors import LatticeEffectsError, PropositionViolation, SchemaError, ValidationError
from .galois import detect_effects, factorize
from .lifts import (
    factor,
    g_is_veil,
    injective_criterion,
    lift_map,
    lift_preserves_effects,
    surjective_criterion,
)
from .order import hasse_cover

MAX_SEED = (1 << 64) - 1
LIFT_PAIR_LIMIT = 10_000


def _seed(text):
    try:
        value = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"seed must be an integer, got {text!r}") from None
    if not 0 <= value <= MAX_SEED:
        raise argparse.ArgumentTypeError("seed must fit in 64 unsigned bits")
    return value


def _nonneg(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError("expected a non-negative integer")
    return value


def _labels(p, indices):
    return [p.label(i) for i in indices]


def _initial(d, text):
    if text is None or text == "":
        return 0
    return d.mask([t.strip() for t in text.split(",") if t.strip()])


def _no_dot(args):
    if args.format == "dot":
        raise SchemaError(f"{args.command} has no DOT output")


# -- commands -------------------------------------------------------------------------------


def cmd_check_poset(args):
    p = io.parse_preorder(io.load_path(args.path))
    if args.format == "dot":
        return io.poset_to_dot(p.as_poset())
    out = {"elements": p.n, "antisymmetric": p.is_antisymmetric()}
    if not out["antisymmetric"]:
        out["antisymmetry_violations"] = [
            [p.label(x), p.label(y)] for x, y in p.antisymmetry_violations()
        ]
        return out
    p = p.as_poset()
    out["finitely_cocomplete"] = p.is_finitely_cocomplete()
    out["lattice"] = p.is_lattice()
    out["hasse"] = [[p.label(x), p.label(y)] for x, y in hasse_cover(p)]
    return out


def cmd_simulate(args):
    d = io.parse_description(io.load_path(args.path))
    trace = cascade_trace(d, _initial(d, args.initial))
    if args.format == "dot":
        return io.trace_to_dot(trace)
    out = {
        "initial": d.subset(trace.states[0]),
        "final": d.subset(trace.final),
        "converged_at": trace.converged_at,
    }
    if args.trace:
        out["trace"] = trace.labels()[: trace.converged_at + 1]
    return out


def cmd_simulate_timed(args):
    _no_dot(args)
    td = io.parse_timed(io.load_path(args.path))
    f = timed_interpret(td, args.horizon)
    x = f.eval()
    return {
        "horizon": f.horizon,
        "trajectory": [td.carrier.label(s) for s in x.states],
        "colim": td.carrier.label(x.states[-1]),
    }


def cmd_phenome(args):
    _no_dot(args)
    d = io.parse_description(io.load_path(args.path))
    return {"phenome": d.subset(phenome_of(d))}


def cmd_merge(args):
    _no_dot(args)
    d1 = io.parse_description(io.load_path(args.first), "first description")
    d2 = io.parse_description(io.load_path(args.second), "second description")
    return io.description_to_json(merge(d1, d2))


def cmd_check_veil(args):
    _no_dot(args)
    v = io.parse_veil(io.load_path(args.path))
    return {
        "veil": True,
        "system_size": v.system.n,
        "phenome_size": v.phenome.n,
        "left_adjoint": [[v.phenome.label(p), v.system.label(s)] for p, s in enumerate(v.left)],
    }


def cmd_detect_effects(args):
    _no_dot(args)
    v = io.parse_veil(io.load_path(args.path))
    if args.samples is None:
        found = detect_effects(v, "exhaustive")
        out = {"mode": "exhaustive"}
    else:
        found = detect_effects(v, "sampled", samples=args.samples, seed=args.seed)
        out = {"mode": "sampled", "samples": args.samples, "seed": args.seed}
    out["count"] = len(found)
    out["witnesses"] = [w.to_record(v) for w in found]
    return out


def cmd_factorize(args):
    _no_dot(args)
    v = io.parse_veil(io.load_path(args.path))
    pi, iota = factorize(v)
    q = pi.phenome
    return {
        "image": list(q.labels),
        "pi": [[v.system.label(s), q.label(x)] for s, x in enumerate(pi.phi.assignment)],
        "iota": [[q.label(x), v.phenome.label(p)] for x, p in enumerate(iota.phi.assignment)],
        "pi_is_veil": True,
        "iota_is_veil": True,
    }


def cmd_factor(args):
    _no_dot(args)
    f = io.parse_map(io.load_path(args.path))
    fac = factor(f)
    dom = f.domain
    inj = injective_criterion(f) if f.is_injective() else None
    surj = None
    if f.is_surjective():
        surj = surjective_criterion(f)
    return {
        "classes": [_labels(dom, cl) for cl in fac.congruence.classes],
        "quotient": io.poset_to_json(fac.quotient),
        "image": list(fac.image.labels),
        "g": [
            [fac.quotient.label(k), fac.image.label(v)] for k, v in enumerate(fac.g.assignment)
        ],
        "g_is_veil": g_is_veil(fac),
        "is_veil_injective_criterion": inj,
        "is_veil_surjective_criterion": surj,
    }


def _pairs(n, rng):
    total = n * (n + 1) // 2
    if total <= LIFT_PAIR_LIMIT:
        return [(i, j) for i in range(n) for j in range(i, n)], True
    picked = sorted({tuple(sorted((rng.randrange(n), rng.randrange(n)))) for _ in range(LIFT_PAIR_LIMIT)})
    return picked, False


def cmd_lift(args):
    _no_dot(args)
    f = io.parse_map(io.load_path(args.path))
    v = lift_map(f)
    out = {
        "domain_filters": v.system.n,
        "codomain_filters": v.phenome.n,
        "veil": True,
    }
    dom, cod = f.domain, f.codomain
    if not (dom.is_finitely_cocomplete() and cod.is_finitely_cocomplete()):
        out["effect_checks"] = None
        return out
    pairs, exhaustive = _pairs(dom.n, random.Random(args.seed))
    witnesses = []
    for p, q in pairs:
        map_effect, _ = lift_preserves_effects(f, p, q)
        if map_effect:
            witnesses.append([dom.label(p), dom.label(q)])
    out["effect_checks"] = {
        "pairs_checked": len(pairs),
        "exhaustive": exhaustive,
        "effects": len(witnesses),
        "lift_agrees": True,
        "witnesses": witnesses[:10],
    }
    return out


def cmd_check_commute(args):
    _no_dot(args)
    td = io.parse_timed(io.load_path(args.path))
    r = commuting_square_check(td, args.horizon)
    out = {
        "pass": r.passed,
        "lhs": td.carrier.label(r.lhs),
        "rhs": td.carrier.label(r.rhs),
        "horizon": r.horizon,
    }
    if not r.passed:
        raise PropositionViolation(io.dumps(out))
    return out


def cmd_export_dot(args):
    doc = io.load_path(args.path)
    if isinstance(doc, dict) and "nodes" in doc:
        d = io.parse_description(doc)
        return io.trace_to_dot(cascade_trace(d, _initial(d, args.initial)))
    p = io.parse_preorder(doc)
    return io.poset_to_dot(p.as_poset())


# -- parser and dispatch --------------------------------------------------------------------


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=_seed, default=0, help="seed for every random choice (default 0)")
    common.add_argument("--format", choices=("json", "dot", "text"), default="json")

    parser = argparse.ArgumentParser(
        prog="lattice-effects",
        description="Veils, closure operators and generative effects on finite lattices.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, help_text):
        sp = sub.add_parser(name, parents=[common], help=help_text)
        sp.set_defaults(handler=fn)
        return sp

    sp = add("check-poset", cmd_check_poset, "validate a poset and report its structure")
    sp.add_argument("path")

    sp = add("simulate", cmd_simulate, "run a cascade")
    sp.add_argument("path")
    sp.add_argument("--initial", help="comma-separated initially infected nodes")
    sp.add_argument("--trace", action="store_true", help="include every state")

    sp = add("simulate-timed", cmd_simulate_timed, "evaluate a timed description")
    sp.add_argument("path")
    sp.add_argument("--horizon", type=_nonneg)

    sp = add("phenome", cmd_phenome, "final infected set from the empty start")
    sp.add_argument("path")

    sp = add("merge", cmd_merge, "interconnect two descriptions")
    sp.add_argument("first")
    sp.add_argument("second")

    sp = add("check-veil", cmd_check_veil, "validate a map as a veil and print its left adjoint")
    sp.add_argument("path")

    sp = add("detect-effects", cmd_detect_effects, "list generative-effect witnesses")
    sp.add_argument("path")
    mode = sp.add_mutually_exclusive_group()
    mode.add_argument("--exhaustive", action="store_true", help="check every pair (default)")
    mode.add_argument("--samples", type=_nonneg, help="check this many seeded random pairs")

    sp = add("factorize", cmd_factorize, "split a veil through its image")
    sp.add_argument("path")

    sp = add("factor", cmd_factor, "factor a monotone map through its quotient and image")
    sp.add_argument("path")

    sp = add("lift", cmd_lift, "lift a monotone map to filter lattices")
    sp.add_argument("path")

    sp = add("check-commute", cmd_check_commute, "compare timed and untimed outcomes")
    sp.add_argument("path")
    sp.add_argument("--horizon", type=_nonneg)

    sp = add("export-dot", cmd_export_dot, "Graphviz output for a poset or a cascade")
    sp.add_argument("path")
    sp.add_argument("--initial", help="initial nodes when exporting a cascade")
    return parser


def _to_text(obj):
    if isinstance(obj, str):
        return obj
    lines = []
    for key, value in obj.items():
        if isinstance(value, (dict, list)):
            value = json.dumps(value, ensure_ascii=False)
        lines.append(f"{key}: {value}")
    return "\n".join(lines) + "\n"


def _emit(result, fmt, stream):
    if isinstance(result, str):
        stream.write(result)
    elif fmt == "text":
        stream.write(_to_text(io.to_jsonable(result)))
    else:
        stream.write(io.dumps(result) + "\n")


def main(argv=None, stdout=None):
    stdout = stdout or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        enumeration_budget()
    except ValueError as exc:
        stdout.write(io.dumps({"error": "ConfigError", "message": str(exc)}) + "\n")
        return 2
    try:
        result = args.handler(args)
    except ValidationError as exc:
        stdout.write(io.dumps(exc.to_dict()) + "\n")
        return 2
    except PropositionViolation as exc:
        stdout.write(io.dumps(exc.to_dict()) + "\n")
        return 1
    except LatticeEffectsError as exc:
        stdout.write(io.dumps(exc.to_dict()) + "\n")
        return 2
    _emit(result, args.format, stdout)
    return 0


def main_entry():
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
