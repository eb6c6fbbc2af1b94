"""Command-line surface.

One binary, subcommand style.  Standard output is a single JSON document by
default (compact; --pretty indents it) and always echoes the fully resolved
configuration of the run, defaults and seeds included, so any output can be
reproduced from itself.  --format text switches to a terse one-line answer
for human eyes; complex files written with -o use the text or structured
formats from the complexes module.

Exit status: 0 on success, 1 when a check-style command reaches a negative
verdict (not ample, not isomorphic, loop not fillable), 2 on usage or
validation errors, 3 when a resource guard trips.  Guards are surfaced as
flags with safe defaults; going past them needs an explicit --force.
"""

import argparse
import json
import sys
from typing import List, Optional

from . import __version__
from .ampleness import (
    dedekind_reduced,
    is_r_ample,
    is_r_conic,
    AMPLE_R_GUARD,
)
from .complexes import (
    SimplicialComplex,
    is_isomorphic,
    read_complex,
    to_json_obj as complex_to_json,
    write_complex,
)
from .constructions import (
    DEFAULT_TOWER_BUDGET,
    PrimeFieldSpec,
    barmak_tower,
    example_thirteen,
    medial_sample,
    paley_complex,
    projective_plane,
    rado_tower,
    search_ample,
    sphere_join,
)
from .errors import (
    AmplekitError,
    InvalidParametersError,
    NotAmpleEnoughError,
    ResourceLimitError,
)
from .experiments import (
    ExperimentConfig,
    empirical_dimension_and_betti,
    partition_experiment,
    resilience_experiment,
    witness_census,
)
from .topology import (
    DEFAULT_TORSION_GUARD,
    betti_numbers,
    fill_loop,
    integral_torsion,
    medial_tc_calculator,
    tc_upper_bound,
)

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_USAGE = 2
EXIT_RESOURCE = 3

_BUILTIN_HELP = (
    "a complex: builtin name (example13, projective-plane, octahedron, "
    "sphere-join:<k>) or a path to a text/structured complex file"
)


# --------------------------------------------------------------------------
# shared parsing helpers


def _load_complex(token: str) -> SimplicialComplex:
    if token == "example13":
        return example_thirteen()
    if token == "projective-plane":
        return projective_plane()
    if token == "octahedron":
        return sphere_join(3)
    if token.startswith("sphere-join:"):
        try:
            k = int(token.split(":", 1)[1])
        except ValueError:
            raise InvalidParametersError(f"unreadable sphere-join parameter in {token!r}")
        return sphere_join(k)
    try:
        return read_complex(token)
    except OSError as exc:
        raise InvalidParametersError(
            f"{token!r} is neither a builtin complex name nor a readable file: {exc}"
        )


def _parse_vertex_list(text: str) -> tuple:
    text = text.strip()
    if not text:
        return ()
    try:
        return tuple(int(tok) for tok in text.split(","))
    except ValueError:
        raise InvalidParametersError(f"unreadable vertex list {text!r}")


def _parse_inline_complex(token: str) -> SimplicialComplex:
    """'empty', a file path, or inline simplexes like '0,1|2' (comma inside
    a simplex, bar between simplexes)."""
    if token == "empty":
        return SimplicialComplex()
    if "|" in token or "," in token or token.isdigit():
        simplexes = []
        for part in token.split("|"):
            part = part.strip()
            if part:
                simplexes.append(_parse_vertex_list(part))
        return SimplicialComplex(simplexes)
    return _load_complex(token)


def _emit(payload: dict, args) -> None:
    if args.pretty:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(json.dumps(payload, sort_keys=True, separators=(",", ":")))


def _text_or_emit(args, text_line: str, payload: dict) -> None:
    if getattr(args, "format", "structured") == "text":
        print(text_line)
    else:
        _emit(payload, args)


# --------------------------------------------------------------------------
# gen


def _cmd_gen(args) -> int:
    meta: dict
    if args.family == "paley":
        if args.q is None or args.p is None:
            raise InvalidParametersError("gen paley needs --q and --p")
        spec = PrimeFieldSpec(args.q, args.p, args.g)
        max_dim = args.max_dim if args.max_dim is not None else 2
        x = paley_complex(spec, max_dim=max_dim)
        meta = {
            "generator": "paley",
            "q": spec.q,
            "p": spec.p,
            "g": spec.g,
            "max_dim": max_dim,
        }
    elif args.family == "medial":
        if args.n is None:
            raise InvalidParametersError("gen medial needs --n")
        sample = medial_sample(args.n, args.seed, max_dim=args.max_dim)
        x = sample.complex
        meta = {
            "generator": "medial",
            "n": args.n,
            "seed": args.seed,
            "max_dim": args.max_dim,
            "flip_count": sample.h,
        }
    elif args.family == "rado":
        stages = rado_tower(args.levels, budget=args.budget)
        x = stages[-1].complex
        meta = {
            "generator": "rado",
            "levels": args.levels,
            "budget": args.budget,
            "budget_exhausted": False,
            "stage_vertex_counts": [s.complex.vertex_count for s in stages],
        }
    elif args.family == "barmak":
        if args.n is None:
            raise InvalidParametersError("gen barmak needs --n")
        stages = barmak_tower(
            args.n,
            args.iterations,
            budget=args.budget,
            include_empty=args.include_empty,
        )
        x = stages[-1].complex
        meta = {
            "generator": "barmak",
            "n": args.n,
            "iterations": args.iterations,
            "budget": args.budget,
            "include_empty": args.include_empty,
            "stage_vertex_counts": [s.complex.vertex_count for s in stages],
        }
    elif args.family == "search":
        if args.n is None or args.r is None:
            raise InvalidParametersError("gen search needs --n and --r")
        result = search_ample(args.n, args.r, args.trials, args.seed, threads=args.threads)
        if not result.found:
            payload = {
                "command": "gen",
                "config": _gen_config(args),
                "found": False,
                "trials": args.trials,
            }
            _text_or_emit(args, "no ample complex found", payload)
            return EXIT_NEGATIVE
        x = result.complex
        meta = {
            "generator": "search",
            "n": args.n,
            "r": args.r,
            "trials_used": result.trials_used,
            "winning_seed": result.winning_seed(),
        }
    elif args.family == "example13":
        x = example_thirteen()
        meta = {"generator": "example13"}
    elif args.family == "sphere-join":
        if args.k is None:
            raise InvalidParametersError("gen sphere-join needs --k")
        x = sphere_join(args.k)
        meta = {"generator": "sphere-join", "k": args.k}
    elif args.family == "projective-plane":
        x = projective_plane()
        meta = {"generator": "projective-plane"}
    else:  # pragma: no cover - argparse restricts choices
        raise InvalidParametersError(f"unknown family {args.family!r}")

    meta["f_vector"] = list(x.f_vector())
    meta["vertex_count"] = x.vertex_count
    payload = {"command": "gen", "config": _gen_config(args), "metadata": meta}
    if args.output:
        write_complex(x, args.output, fmt=args.format)
        if read_complex(args.output, fmt=args.format) != x:
            raise AmplekitError("round-trip mismatch after writing output file")
        payload["output"] = args.output
        _emit(payload, args)
    else:
        payload["complex"] = complex_to_json(x)
        _emit(payload, args)
    return EXIT_OK


def _gen_config(args) -> dict:
    keys = (
        "family",
        "q",
        "p",
        "g",
        "n",
        "r",
        "k",
        "levels",
        "iterations",
        "max_dim",
        "seed",
        "trials",
        "threads",
        "budget",
        "include_empty",
        "output",
        "format",
    )
    return {k: getattr(args, k, None) for k in keys if getattr(args, k, None) is not None}


# --------------------------------------------------------------------------
# verify / iso / homology


def _cmd_verify(args) -> int:
    x = _load_complex(args.complex)
    if (args.ample is None) == (args.conic is None):
        raise InvalidParametersError("pass exactly one of --ample R or --conic R")
    if args.ample is not None:
        verdict = is_r_ample(x, args.ample, force=args.force)
        positive = verdict.is_ample
    else:
        verdict = is_r_conic(x, args.conic)
        positive = verdict.is_conic
    payload = {
        "command": "verify",
        "config": {
            "complex": args.complex,
            "ample": args.ample,
            "conic": args.conic,
            "expect": args.expect,
            "force": args.force,
        },
        "verdict": verdict.to_json_obj(),
    }
    _text_or_emit(args, verdict.result, payload)
    if args.expect is not None:
        expected_positive = args.expect in ("ample", "conic")
        return EXIT_OK if positive == expected_positive else EXIT_NEGATIVE
    return EXIT_OK if positive else EXIT_NEGATIVE


def _cmd_iso(args) -> int:
    x = _load_complex(args.complex_a)
    y = _load_complex(args.complex_b)
    mapping = is_isomorphic(x, y, max_vertices=args.max_vertices, force=args.force)
    payload = {
        "command": "iso",
        "config": {
            "complex_a": args.complex_a,
            "complex_b": args.complex_b,
            "max_vertices": args.max_vertices,
            "force": args.force,
        },
        "isomorphic": mapping is not None,
        "mapping": None if mapping is None else {str(k): v for k, v in sorted(mapping.items())},
    }
    _text_or_emit(args, "isomorphic" if mapping else "not isomorphic", payload)
    return EXIT_OK if mapping is not None else EXIT_NEGATIVE


def _cmd_homology(args) -> int:
    x = _load_complex(args.complex)
    fields = ["gf2", "rationals"] if args.field == "both" else [args.field]
    reports = {f: betti_numbers(x, field=f).to_json_obj() for f in fields}
    payload = {
        "command": "homology",
        "config": {
            "complex": args.complex,
            "field": args.field,
            "torsion": args.torsion,
            "guard": args.guard,
        },
        "betti": reports,
    }
    if args.torsion:
        payload["torsion"] = integral_torsion(x, guard=args.guard)
    line = "; ".join(f"{f}: {reports[f]['betti']}" for f in fields)
    _text_or_emit(args, line, payload)
    return EXIT_OK


# --------------------------------------------------------------------------
# fill-loop


def _cmd_fill_loop(args) -> int:
    x = _load_complex(args.complex)
    loop = list(_parse_vertex_list(args.loop))
    try:
        disc = fill_loop(x, loop, args.r)
    except NotAmpleEnoughError as exc:
        payload = {
            "command": "fill-loop",
            "config": {"complex": args.complex, "loop": loop, "r": args.r},
            "filled": False,
            "missing_witness": {
                "vertex_set": list(exc.vertex_set or ()),
                "target_link": None
                if exc.target_link is None
                else complex_to_json(exc.target_link),
            },
        }
        _text_or_emit(args, "no disc: missing witness", payload)
        return EXIT_NEGATIVE
    payload = {
        "command": "fill-loop",
        "config": {"complex": args.complex, "loop": loop, "r": args.r},
        "filled": True,
        "disc": disc.to_json_obj(),
    }
    _text_or_emit(
        args,
        f"disc: {disc.internal_vertex_count} internal vertices, {disc.triangle_count} triangles",
        payload,
    )
    return EXIT_OK


# --------------------------------------------------------------------------
# experiments


def _cmd_resilience(args) -> int:
    if args.config:
        with open(args.config, "r", encoding="utf-8") as fh:
            cfg = ExperimentConfig.from_json_obj(json.load(fh))
    else:
        if args.n is None or args.r is None:
            raise InvalidParametersError("resilience needs --n and --r (or --config)")
        cfg = ExperimentConfig(
            n=args.n,
            r=args.r,
            k=args.k,
            bases=args.bases,
            trials_per_base=args.trials_per_base,
            search_trials=args.search_trials,
            seed=args.seed,
            include_control=not args.no_control,
        )
    report = resilience_experiment(cfg, threads=args.threads)
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(report.csv_text())
    payload = report.to_json_obj()
    payload["command"] = "resilience"
    if args.output:
        payload["output"] = args.output
    hyp = report.aggregates["hypothesis"]
    _text_or_emit(
        args,
        f"hypothesis arm: {hyp['passed']}/{hyp['trials']} passed",
        payload,
    )
    return EXIT_OK if hyp["failures"] == 0 else EXIT_NEGATIVE


def _cmd_census(args) -> int:
    x = _load_complex(args.complex)
    u = _parse_vertex_list(args.u)
    a = _parse_inline_complex(args.a)
    count = witness_census(x, u, a)
    payload = {
        "command": "census",
        "config": {
            "complex": args.complex,
            "u": list(u),
            "a": complex_to_json(a),
        },
        "count": count,
    }
    _text_or_emit(args, str(count), payload)
    return EXIT_OK


def _cmd_partition(args) -> int:
    x = _load_complex(args.complex)
    report = partition_experiment(x, args.parts, args.seed, args.r, trials=args.trials)
    payload = report.to_json_obj()
    payload["command"] = "partition"
    dist = report.aggregates["max_over_parts_distribution"]
    _text_or_emit(args, f"max-over-parts distribution: {dist}", payload)
    return EXIT_OK


def _cmd_medial_stats(args) -> int:
    n_list = [int(tok) for tok in args.n_list.split(",") if tok.strip()]
    report = empirical_dimension_and_betti(n_list, args.trials, args.seed)
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(report.csv_text())
    payload = report.to_json_obj()
    payload["command"] = "medial-stats"
    if args.output:
        payload["output"] = args.output
    per = report.aggregates["per_n"]
    line = "; ".join(
        f"n={n}: window {per[n]['window_fraction']:.2f}, b1=0 rate {per[n]['b1_zero_rate']:.2f}"
        for n in per
    )
    _text_or_emit(args, line, payload)
    return EXIT_OK


# --------------------------------------------------------------------------
# arithmetic commands


def _cmd_dedekind(args) -> int:
    value = dedekind_reduced(args.r, force=args.force)
    payload = {
        "command": "dedekind",
        "config": {"r": args.r, "force": args.force},
        "value": value,
    }
    _text_or_emit(args, str(value), payload)
    return EXIT_OK


def _cmd_tc_bound(args) -> int:
    if args.log_log_n is not None:
        bounds = medial_tc_calculator(args.log_log_n)
        payload = {
            "command": "tc-bound",
            "config": {"log_log_n": args.log_log_n},
            "dim_bound": bounds.dim_bound,
            "conn_bound": bounds.conn_bound,
            "tc_bound": bounds.tc_bound,
        }
        _text_or_emit(args, str(bounds.tc_bound), payload)
        return EXIT_OK
    if args.dim is None or args.conn is None:
        raise InvalidParametersError("tc-bound needs --dim and --conn, or --log-log-n")
    value = tc_upper_bound(args.dim, args.conn)
    payload = {
        "command": "tc-bound",
        "config": {"dim": args.dim, "conn": args.conn},
        "tc_bound": value,
    }
    _text_or_emit(args, str(value), payload)
    return EXIT_OK


# --------------------------------------------------------------------------
# parser assembly


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="amplekit",
        description="Build and stress-test ample and conic simplicial complexes.",
    )
    parser.add_argument("--version", action="version", version=f"amplekit {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--format",
        choices=("text", "structured"),
        default="structured",
        help="structured JSON (default) or a terse text answer",
    )
    common.add_argument("--pretty", action="store_true", help="indent JSON output")

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", parents=[common], help="generate a complex")
    p.add_argument(
        "family",
        choices=(
            "paley",
            "medial",
            "rado",
            "barmak",
            "search",
            "example13",
            "sphere-join",
            "projective-plane",
        ),
    )
    p.add_argument("--q", type=int, help="field size for paley (prime)")
    p.add_argument("--p", type=int, help="residue modulus for paley (odd prime dividing q-1)")
    p.add_argument("--g", type=int, help="primitive root override for paley")
    p.add_argument("--n", type=int, help="ambient size (medial, barmak, search)")
    p.add_argument("--r", type=int, help="target ampleness (search)")
    p.add_argument("--k", type=int, help="join factor count (sphere-join)")
    p.add_argument("--levels", type=int, default=2, help="tower levels (rado)")
    p.add_argument("--iterations", type=int, default=1, help="tower iterations (barmak)")
    p.add_argument(
        "--max-dim",
        type=int,
        default=None,
        dest="max_dim",
        help="dimension cap (default: 2 for paley, uncapped for medial)",
    )
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=100, help="search trials")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--budget", type=int, default=DEFAULT_TOWER_BUDGET)
    p.add_argument("--include-empty", action="store_true", dest="include_empty")
    p.add_argument("-o", "--output", help="write the complex to this file")
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("verify", parents=[common], help="check ampleness or conicity")
    p.add_argument("complex", help=_BUILTIN_HELP)
    p.add_argument("--ample", type=int, help="verify r-ampleness")
    p.add_argument("--conic", type=int, help="verify r-conicity")
    p.add_argument(
        "--expect",
        choices=("ample", "not-ample", "conic", "not-conic"),
        help="exit 0 only when the verdict matches this expectation",
    )
    p.add_argument("--force", action="store_true", help=f"allow r past the guard {AMPLE_R_GUARD}")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("homology", parents=[common], help="Betti numbers and torsion")
    p.add_argument("complex", help=_BUILTIN_HELP)
    p.add_argument("--field", choices=("gf2", "rationals", "both"), default="both")
    p.add_argument("--torsion", action="store_true", help="also compute integer torsion")
    p.add_argument("--guard", type=int, default=DEFAULT_TORSION_GUARD)
    p.set_defaults(func=_cmd_homology)

    p = sub.add_parser("fill-loop", parents=[common], help="fill a cycle with a bounded disc")
    p.add_argument("complex", help=_BUILTIN_HELP)
    p.add_argument("--loop", required=True, help="comma-separated vertex cycle")
    p.add_argument("--r", type=int, required=True, help="verified ampleness to rely on (>= 4)")
    p.set_defaults(func=_cmd_fill_loop)

    p = sub.add_parser("resilience", parents=[common], help="removal-guarantee experiment")
    p.add_argument("--config", help="JSON config file; overrides the flags below")
    p.add_argument("--n", type=int)
    p.add_argument("--r", type=int)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--bases", type=int, default=2)
    p.add_argument("--trials-per-base", type=int, default=100, dest="trials_per_base")
    p.add_argument("--search-trials", type=int, default=2000, dest="search_trials")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--no-control", action="store_true", dest="no_control")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("-o", "--output", help="write the per-trial table to this CSV file")
    p.set_defaults(func=_cmd_resilience)

    p = sub.add_parser("census", parents=[common], help="count witnesses for a (U, A) pair")
    p.add_argument("complex", help=_BUILTIN_HELP)
    p.add_argument("--u", required=True, help="comma-separated vertex list (empty string for none)")
    p.add_argument(
        "--a",
        required=True,
        help="target link: 'empty', inline simplexes like '0,1|2', or a complex file",
    )
    p.set_defaults(func=_cmd_census)

    p = sub.add_parser("partition", parents=[common], help="equipartition ampleness experiment")
    p.add_argument("complex", help=_BUILTIN_HELP)
    p.add_argument("--parts", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--r", type=int, required=True, help="verified ampleness of the input")
    p.add_argument("--trials", type=int, default=1)
    p.set_defaults(func=_cmd_partition)

    p = sub.add_parser("medial-stats", parents=[common], help="dimension and Betti statistics")
    p.add_argument("--n-list", required=True, dest="n_list", help="comma-separated ambient sizes")
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output", help="write the per-trial table to this CSV file")
    p.set_defaults(func=_cmd_medial_stats)

    p = sub.add_parser("dedekind", parents=[common], help="reduced Dedekind number")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--force", action="store_true", help="allow r past the guard")
    p.set_defaults(func=_cmd_dedekind)

    p = sub.add_parser("tc-bound", parents=[common], help="topological-complexity bound")
    p.add_argument("--dim", type=int)
    p.add_argument("--conn", type=int)
    p.add_argument(
        "--log-log-n",
        type=float,
        dest="log_log_n",
        help="evaluate the medial calculator at this doubly logarithmic size",
    )
    p.set_defaults(func=_cmd_tc_bound)

    p = sub.add_parser("iso", parents=[common], help="isomorphism test")
    p.add_argument("complex_a", help=_BUILTIN_HELP)
    p.add_argument("complex_b", help=_BUILTIN_HELP)
    p.add_argument("--max-vertices", type=int, default=20, dest="max_vertices")
    p.add_argument("--force", action="store_true")
    p.set_defaults(func=_cmd_iso)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except ResourceLimitError as exc:
        error = {"error": {"type": type(exc).__name__, "message": str(exc)}}
        stages = getattr(exc, "stages", None)
        if stages is not None:
            error["error"]["completed_stages"] = len(stages)
        print(json.dumps(error, sort_keys=True), file=sys.stderr)
        return EXIT_RESOURCE
    except AmplekitError as exc:
        error = {"error": {"type": type(exc).__name__, "message": str(exc)}}
        print(json.dumps(error, sort_keys=True), file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
