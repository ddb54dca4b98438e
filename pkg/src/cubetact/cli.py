"""Command-line surface: generate instances, analyze complexes, run suites.

Exit codes: 0 success, 1 verification found violations, 2 invalid input.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import contact as _contact
from . import median as _median
from . import ragroups as _rg
from . import reconstruction as _rec
from . import verify as _verify
from .errors import CubetactError, NotMedian

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_INVALID = 2


def _emit(doc, out):
    text = json.dumps(doc, indent=2, sort_keys=True, default=_jsonable) + "\n"
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _jsonable(obj):
    if isinstance(obj, (set, frozenset)):
        return sorted(obj, key=str)
    if isinstance(obj, tuple):
        return list(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _load_graph(source):
    name = source.upper()
    if name in _rg.BUILTIN_GRAPHS:
        return _rg.builtin_defining_graph(name)
    with open(source, encoding="utf-8") as fh:
        return _rg.graph_from_json(json.load(fh))


def cmd_generate(args):
    if args.builtin:
        name = args.builtin.upper()
        if name in _median.BUILTIN_COMPLEXES:
            doc = _median.complex_to_json(_median.builtin_complex(name))
        elif name in _rg.BUILTIN_GRAPHS:
            doc = _rg.graph_to_json(_rg.builtin_defining_graph(name))
        else:
            raise CubetactError(f"unknown builtin {args.builtin!r}")
    elif args.random:
        dim, seeds, seed = args.random
        X = _median.random_median_complex(dim, seeds, seed)
        doc = _median.complex_to_json(X)
    elif args.ball:
        graph, kind, radius = args.ball
        ball = _rg.build_ball(_load_graph(graph), kind, int(radius))
        doc = _rg.ball_to_json(ball)
    else:
        raise CubetactError("one of --builtin, --random, --ball is required")
    _emit(doc, args.out)
    return EXIT_OK


def cmd_analyze(args):
    with open(args.infile, encoding="utf-8") as fh:
        doc = json.load(fh)
    X = _median.complex_from_json(doc)
    F = _contact.build_contact_family(X, mode=args.reduced_mode)
    atlas = _rec.clique_atlas(X, F)
    isets = _contact.all_interaction_sets(X)
    rec = _rec.reconstruct(F.contact)
    out = {
        "complex": _median.complex_to_json(X),
        "dimension": X.dimension,
        "hyperplanes": _median.hyperplane_report(X),
        "contact_family": _contact.family_to_json(F),
        "atlas": {
            str(v): {
                "extremal": atlas.extremal[v],
                "clique": sorted(atlas.clique_of[v]),
            }
            for v in X.vertices
        },
        "interaction": {
            str(h): {"I": sorted(s.I), "I0": sorted(s.I0)}
            for h, s in isets.items()
        },
        "reconstruction": {
            "vertices": [list(cl) for cl in rec["vertices"]],
            "edges": sorted(
                sorted(map(list, e)) for e in rec["edges"]
            ),
            "diagnostics": {
                "extremal_vertices": sorted(
                    str(v) for v in X.vertices if atlas.extremal[v]
                ),
            },
        },
    }
    if args.dot:
        out["dot"] = {
            "skeleton": _median.complex_to_dot(X),
            "contact": _contact.graph_to_dot(F.contact, "contact"),
            "crossing": _contact.graph_to_dot(F.crossing, "crossing"),
        }
    _emit(out, args.out)
    return EXIT_OK


def _verify_instances(args):
    instances = []
    if args.builtin:
        for name in args.builtin:
            instances.append((name, _median.builtin_complex(name)))
    if args.infile:
        with open(args.infile, encoding="utf-8") as fh:
            instances.append((args.infile, _median.complex_from_json(json.load(fh))))
    for seed in range(1, (args.random_count or 0) + 1):
        instances.append(
            (f"random-{seed}", _median.random_median_complex(args.dim, args.seeds, seed))
        )
    return instances


def cmd_verify(args):
    suites = args.suite or list(_verify.SUITES)
    gamma = _load_graph(args.graph) if args.graph else None
    instances = _verify_instances(args)
    balls = []
    if gamma is not None and any(s == "roundtrip" for s in suites):
        balls.append(
            (args.graph, _rg.build_ball(gamma, args.kind, args.radius or 3))
        )
    needs_gamma = {"davis", "twist", "extension-graph", "roundtrip"}
    if needs_gamma & set(suites) and gamma is None:
        raise CubetactError("--graph is required for the selected suites")
    report = {
        "suites": _verify.run_suites(
            suites,
            instances=instances,
            balls=balls,
            gamma=gamma,
            radius=args.radius,
        ),
    }
    violations = sum(len(e["violations"]) for e in report["suites"])
    report["pass"] = violations == 0
    _emit(report, args.out)
    return EXIT_OK if violations == 0 else EXIT_VIOLATION


def build_parser():
    parser = argparse.ArgumentParser(
        prog="cubetact",
        description="hyperplane graphs of finite median complexes and "
        "right-angled group balls",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write an instance as JSON")
    g.add_argument("--builtin", help="builtin complex or defining graph name")
    g.add_argument("--random", nargs=3, type=int,
                   metavar=("DIM", "SEEDS", "SEED"))
    g.add_argument("--ball", nargs=3, metavar=("GRAPH", "KIND", "RADIUS"))
    g.add_argument("--out")
    g.set_defaults(func=cmd_generate)

    a = sub.add_parser("analyze", help="full hyperplane analysis of a complex")
    a.add_argument("--in", dest="infile", required=True)
    a.add_argument("--out")
    a.add_argument("--dot", action="store_true")
    a.add_argument("--reduced-mode", default="self-exclusive",
                   choices=_contact.REDUCED_MODES)
    a.set_defaults(func=cmd_analyze)

    v = sub.add_parser("verify", help="run verification suites")
    v.add_argument("--suite", action="append", choices=_verify.SUITES)
    v.add_argument("--builtin", action="append")
    v.add_argument("--in", dest="infile")
    v.add_argument("--random-count", type=int, default=0)
    v.add_argument("--dim", type=int, default=6)
    v.add_argument("--seeds", type=int, default=5)
    v.add_argument("--graph")
    v.add_argument("--kind", default=_rg.COXETER,
                   choices=(_rg.ARTIN, _rg.COXETER))
    v.add_argument("--radius", type=int)
    v.add_argument("--out")
    v.set_defaults(func=cmd_verify)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except NotMedian as ex:
        print(f"error: not a median graph: {ex}", file=sys.stderr)
        return EXIT_INVALID
    except (CubetactError, OSError, ValueError, KeyError, json.JSONDecodeError) as ex:
        print(f"error: {ex}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
