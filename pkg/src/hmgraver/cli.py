"""Command-line front end.

Models are JSON objects::

    {"vertices": ["1", "2", "3"], "facets": [["1", "2"], ["2", "3"]],
     "weights": {"1": 3}}

read from a file argument or from stdin ("-").  Omitted weights default to 2.

Exit codes: 0 success / unimodular, 1 not unimodular, 2 input error,
3 size guard exceeded, 4 internal inconsistency.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from typing import Optional, Sequence

from .complex_core import (ComplexError, HMPair, SimplicialComplex,
                           alexander_dual, enumerate_pairs, maximal_faces)
from .design_matrix import build_design_matrix
from .graver_engine import (DEFAULT_ORACLE_COLUMNS, GuardError, graver_for_unimodular_pair,
                            graver_oracle_pair, sample_graver)
from .unimodularity import (DEFAULT_SAMPLE_COLUMNS, InconsistencyError,
                            certify_nonunimodular_by_submatrix,
                            classify, is_unimodular_pair_by_graver, validate_verdict)

log = logging.getLogger("hmgraver")

EXIT_OK, EXIT_NOT_UNIMODULAR, EXIT_INPUT, EXIT_GUARD, EXIT_INTERNAL = 0, 1, 2, 3, 4


class InputError(ValueError):
    pass


# ---------------------------------------------------------------------------
# model files


def parse_model(text) -> HMPair:
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise InputError(f"model is not UTF-8: {exc}") from exc
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON: {exc}") from exc
    if not isinstance(obj, dict):
        raise InputError("model must be a JSON object")
    facets = obj.get("facets", [])
    if not isinstance(facets, list) or not all(isinstance(f, list) for f in facets):
        raise InputError("facets must be a list of vertex lists")
    facets = [[str(v) for v in f] for f in facets]
    if "vertices" in obj:
        vertices = [str(v) for v in obj["vertices"]]
    else:
        vertices = sorted({v for f in facets for v in f})
    if len(set(vertices)) != len(vertices):
        raise InputError("repeated vertex label")
    known = set(vertices)
    for f in facets:
        unknown = [v for v in f if v not in known]
        if unknown:
            raise InputError(f"facet {f} uses unknown vertices {unknown}")
    given = [frozenset(f) for f in facets]
    kept = maximal_faces(given)
    if len(kept) != len(set(given)):
        dropped = sorted(sorted(f) for f in set(given) - set(kept))
        log.warning("dropping non-maximal facets %s", dropped)
    weights = obj.get("weights", {})
    if not isinstance(weights, dict):
        raise InputError("weights must be an object mapping vertex to integer")
    for v in weights:
        if str(v) not in known:
            raise InputError(f"weight given for unknown vertex {v!r}")
    wm = {}
    for v in vertices:
        x = weights.get(v, 2)
        if isinstance(x, bool) or not isinstance(x, int):
            raise InputError(f"weight of vertex {v!r} must be an integer")
        if x < 2:
            raise InputError(f"weight of vertex {v!r} is {x}, must be at least 2")
        wm[v] = x
    try:
        return HMPair(SimplicialComplex(tuple(vertices), kept), wm)
    except ComplexError as exc:
        raise InputError(str(exc)) from exc


def model_to_json(pair: HMPair) -> dict:
    C = pair.complex
    return {
        "vertices": list(C.ground),
        "facets": [list(C.sort_face(f)) for f in C.sorted_facets()],
        "weights": pair.weight_map(),
    }


def _read_model(path: str) -> HMPair:
    if path == "-":
        data = sys.stdin.buffer.read()
    else:
        try:
            with open(path, "rb") as fh:
                data = fh.read()
        except OSError as exc:
            raise InputError(str(exc)) from exc
    return parse_model(data)


# ---------------------------------------------------------------------------
# commands


def _emit(out, obj):
    out.write(json.dumps(obj, sort_keys=False) + "\n")


def cmd_matrix(args, out) -> int:
    pair = _read_model(args.model)
    D = build_design_matrix(pair)
    if args.format == "json":
        out.write(D.to_json() + "\n")
    else:
        out.write(D.to_csv())              # no trailing separator
    return EXIT_OK


def cmd_classify(args, out) -> int:
    pair = _read_model(args.model)
    verdict = classify(pair)
    if not validate_verdict(pair, verdict):
        raise InconsistencyError("verdict does not replay")
    obj = verdict.to_json()
    if verdict.unimodular and args.format == "text":
        out.write(f"unimodular: {verdict.certificate.describe()}\n")
    elif args.format == "text":
        w = verdict.witness
        out.write(f"not unimodular: minor {w.forbidden_id} (item {w.item})\n")
    else:
        _emit(out, obj)
    return EXIT_OK if verdict.unimodular else EXIT_NOT_UNIMODULAR


def cmd_graver(args, out) -> int:
    pair = _read_model(args.model)
    verdict = classify(pair)
    if not verdict.unimodular:
        log.error("graver needs a unimodular pair; use graver-oracle instead")
        _emit(out, verdict.to_json())
        return EXIT_NOT_UNIMODULAR
    B = graver_for_unimodular_pair(pair)
    if B:
        out.write(B.to_jsonl() + "\n")
    return EXIT_OK


def cmd_graver_oracle(args, out) -> int:
    pair = _read_model(args.model)
    B = graver_oracle_pair(pair, max_columns=args.max_columns)
    if B:
        out.write(B.to_jsonl() + "\n")
    return EXIT_OK if B.max_abs() <= 1 else EXIT_NOT_UNIMODULAR


def cmd_sample(args, out) -> int:
    pair = _read_model(args.model)
    verdict = classify(pair)
    if not verdict.unimodular:
        _emit(out, verdict.to_json())
        return EXIT_NOT_UNIMODULAR
    try:
        v = sample_graver(pair, args.seed, verdict.certificate)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    out.write(v.to_json() + "\n")
    return EXIT_OK


def cmd_complex_op(args, out) -> int:
    pair = _read_model(args.model)
    try:
        if args.command == "dual":
            C = alexander_dual(pair.complex)
            result = HMPair(C, pair.weights)
        elif args.command == "link":
            result = pair.link(args.vertex)
        else:
            result = pair.delete(args.vertex)
    except (ComplexError, KeyError) as exc:
        raise InputError(str(exc)) from exc
    _emit(out, model_to_json(result))
    return EXIT_OK


def cmd_certify(args, out) -> int:
    pair = _read_model(args.model)
    v = certify_nonunimodular_by_submatrix(pair, seed=args.seed, budget=args.budget,
                                           sample_size=args.sample_size)
    if v is None:
        _emit(out, {"certificate": None})
        return EXIT_OK
    _emit(out, {"certificate": json.loads(v.to_json())})
    return EXIT_NOT_UNIMODULAR


def cmd_verify(args, out) -> int:
    """Classification against the Graver test on every pair in range."""
    weights = tuple(range(2, args.sweep_max_weight + 1))
    start = time.time()
    total = disagree = unimodular = 0
    for pair in enumerate_pairs(args.sweep_vertices, weights, args.max_columns):
        verdict = classify(pair)
        if not validate_verdict(pair, verdict):
            raise InconsistencyError(f"verdict for {pair!r} does not replay")
        by_graver = is_unimodular_pair_by_graver(pair, max_columns=args.max_columns)
        total += 1
        unimodular += verdict.unimodular
        if by_graver != verdict.unimodular:
            disagree += 1
            _emit(out, {"disagreement": model_to_json(pair),
                        "classify": verdict.unimodular, "graver": by_graver})
    _emit(out, {"pairs": total, "unimodular": unimodular, "disagreements": disagree,
                "seconds": round(time.time() - start, 2)})
    return EXIT_OK if disagree == 0 else EXIT_INTERNAL


# ---------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hmgraver",
                                description="Unimodularity and Graver bases of hierarchical models.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def with_model(name, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("model", nargs="?", default="-", help="model JSON file, or - for stdin")
        return sp

    sp = with_model("matrix", "design matrix")
    sp.add_argument("--format", choices=["csv", "json"], default="csv")
    sp.set_defaults(func=cmd_matrix)

    sp = with_model("classify", "unimodularity verdict with certificate or forbidden minor")
    sp.add_argument("--format", choices=["json", "text"], default="json")
    sp.set_defaults(func=cmd_classify)

    sp = with_model("graver", "Graver basis from the combinatorial construction")
    sp.set_defaults(func=cmd_graver)

    sp = with_model("graver-oracle", "Graver basis by completion")
    sp.add_argument("--max-columns", type=int, default=DEFAULT_ORACLE_COLUMNS)
    sp.set_defaults(func=cmd_graver_oracle)

    sp = with_model("sample", "one random Graver element")
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(func=cmd_sample)

    sp = with_model("dual", "Alexander dual of the complex")
    sp.set_defaults(func=cmd_complex_op)
    for name in ("link", "delete"):
        sp = with_model(name, f"{name} a vertex")
        sp.add_argument("--vertex", required=True)
        sp.set_defaults(func=cmd_complex_op)

    sp = with_model("certify-nonuni", "search column samples for a Graver element with a large entry")
    sp.add_argument("--budget", type=int, default=200)
    sp.add_argument("--sample-size", type=int, default=DEFAULT_SAMPLE_COLUMNS)
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(func=cmd_certify)

    sp = sub.add_parser("verify", help="compare classification with the Graver test on all small pairs")
    sp.add_argument("--sweep-vertices", type=int, default=3)
    sp.add_argument("--sweep-max-weight", type=int, default=3)
    sp.add_argument("--max-columns", type=int, default=144)
    sp.set_defaults(func=cmd_verify)
    return p


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        return args.func(args, out)
    except InputError as exc:
        log.error("%s", exc)
        return EXIT_INPUT
    except GuardError as exc:
        log.error("%s", exc)
        return EXIT_GUARD
    except (InconsistencyError, AssertionError) as exc:
        log.error("internal inconsistency: %s", exc)
        return EXIT_INTERNAL


def main_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
