"""Command line interface.

Exit codes: 0 success, 2 unreadable or malformed input, 3 input violating a
domain invariant (e.g. a correlation outside [-1, 1]), 4 eigensolver
non-convergence.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

import numpy as np

from . import __version__
from .completion import decide_hilbert_model, exercise_search
from .corrmodel import CorrelationBlock, assemble_full, chsh_report, is_local, r_certificate
from .errors import ConvergenceError, OutOfRange
from .generators import (
    LhvModel,
    QubitModel,
    VectorModel,
    correlations_from_lhv,
    correlations_from_qubit,
    correlations_from_vectors,
    pr_box,
)
from .matcore import DEFAULT_PSD_TOL, min_eigenvalue

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_DOMAIN = 3
EXIT_NUMERIC = 4

CLASSIFICATIONS = ("local", "hilbert_nonlocal", "supra_quantum")
SCAN_COLUMNS = ("t", "b_value", "feasible", "lambda_star")


class ParseError(Exception):
    pass


def _load_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc


def _field(obj, name):
    if not isinstance(obj, dict) or name not in obj:
        raise ParseError(f"missing field {name!r}")
    return obj[name]


def _real_array(value, shape, name) -> np.ndarray:
    try:
        arr = np.array(value, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"field {name!r} is not numeric") from exc
    if arr.shape != shape:
        raise ParseError(f"field {name!r} must have shape {shape}, got {arr.shape}")
    return arr


def _complex_array(value, n, name) -> np.ndarray:
    # entries are plain numbers or [re, im] pairs
    if not isinstance(value, list) or len(value) != n:
        raise ParseError(f"field {name!r} must be a list of {n} numbers")
    out = []
    for v in value:
        if isinstance(v, list):
            re, im = _real_array(v, (2,), name)
            out.append(complex(re, im))
        elif isinstance(v, (int, float)) and not isinstance(v, bool):
            out.append(complex(v))
        else:
            raise ParseError(f"field {name!r} has a non-numeric entry")
    return np.array(out)


def parse_block(obj) -> CorrelationBlock:
    return CorrelationBlock(_real_array(_field(obj, "c"), (2, 2), "c"))


def parse_model(kind: str, obj):
    if kind == "lhv":
        return LhvModel(_real_array(_field(obj, "weights"), (16,), "weights"))
    if kind == "qubit":
        amps = _complex_array(_field(obj, "amplitudes"), 4, "amplitudes")
        a_dirs = _real_array(_field(obj, "a_dirs"), (2, 3), "a_dirs")
        b_dirs = _real_array(_field(obj, "b_dirs"), (2, 3), "b_dirs")
        return QubitModel(amps, tuple(a_dirs), tuple(b_dirs))
    if kind == "vectors":
        raw = [_field(obj, k) for k in ("u1", "u2", "v1", "v2")]
        dim = len(raw[0]) if isinstance(raw[0], list) else -1
        vecs = [_real_array(v, (dim,), k) for v, k in zip(raw, ("u1", "u2", "v1", "v2"))]
        return VectorModel(*vecs)
    if kind == "prbox":
        if not isinstance(obj, dict):
            raise ParseError("prbox spec must be an object")
        return obj.get("sign", "+")
    raise ParseError(f"unknown model kind {kind!r}")


def _matrix_json(m: np.ndarray) -> dict:
    out = {"full": np.real(m).tolist()}
    if np.iscomplexobj(m):
        out["full_imag"] = np.imag(m).tolist()
    return out


def classify(block, completion) -> str:
    if is_local(block):
        return "local"
    return "hilbert_nonlocal" if completion.feasible else "supra_quantum"


def analyze(block: CorrelationBlock, mode: str = "real", tol: float = DEFAULT_PSD_TOL) -> dict:
    real = decide_hilbert_model(block, "real", tol)
    chosen = real
    report = {
        "input": {"c": block.to_list()},
        "chsh": chsh_report(block).to_dict(),
        "r_certificate": dict(zip(("R+", "R-"), r_certificate(block))),
        "completion": real.to_dict(),
    }
    if mode == "hermitian":
        chosen = decide_hilbert_model(block, "hermitian", tol)
        report["completion_hermitian"] = chosen.to_dict()
    report["classification"] = classify(block, chosen)
    return report


def generate(kind: str, spec) -> dict:
    model = parse_model(kind, spec)
    if kind == "prbox":
        block = pr_box(model)
        return {"c": block.to_list()}
    gen = {
        "lhv": correlations_from_lhv,
        "qubit": correlations_from_qubit,
        "vectors": correlations_from_vectors,
    }[kind]
    block, full = gen(model)
    out = {"c": block.to_list()}
    out.update(_matrix_json(full.assembled.entries))
    return out


def scan_rows(steps: int, mode: str = "real", tol: float = DEFAULT_PSD_TOL):
    base = np.array([[1.0, 1.0], [1.0, -1.0]])
    for k in range(steps):
        t = k / (steps - 1)
        block = CorrelationBlock(t * base)
        res = decide_hilbert_model(block, mode, tol)
        yield t, chsh_report(block).b_canonical, res.feasible, res.lambda_star


def realize(block: CorrelationBlock, tol: float = DEFAULT_PSD_TOL) -> dict:
    res = decide_hilbert_model(block, "real", tol)
    out = {"status": res.status.value, "lambda_star": res.lambda_star}
    if res.feasible:
        out["x"] = res.x_star
        out["y"] = res.y_star
        out["vectors"] = res.to_dict()["gram_vectors"]
    elif res.analytic_certificate is not None:
        out["analytic_certificate"] = res.analytic_certificate.to_dict()
    return out


def exercise_verdict(b_value: float, feasible: bool) -> str:
    return "disproved" if feasible and b_value > 2.0 + 1e-6 else "not disproved"


def exercise(samples: int, seed: int) -> dict:
    res = exercise_search(samples, seed)
    full = res.completion
    witness = assemble_full(res.block, full.x_star, full.y_star)
    return {
        "verdict": exercise_verdict(res.b_value, full.feasible),
        "b_value": res.b_value,
        "block": {"c": res.block.to_list()},
        "source": res.source,
        "vectors": {k: getattr(res.vectors, k).tolist() for k in ("u1", "u2", "v1", "v2")},
        "completion": full.to_dict(),
        "witness_min_eigenvalue": min_eigenvalue(witness.assembled),
        "best_sampled_b": res.best_sampled_b,
        "samples": samples,
        "seed": seed,
    }


def _dump_json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _positive_int(minimum):
    def conv(text):
        v = int(text)
        if v < minimum:
            raise argparse.ArgumentTypeError(f"must be >= {minimum}")
        return v
    return conv


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--mode", choices=("real", "hermitian"), default="real")
    common.add_argument("--tol", type=float, default=DEFAULT_PSD_TOL)
    common.add_argument("--out", default=None, help="output path (default stdout)")

    parser = argparse.ArgumentParser(
        prog="chshkit",
        description="Hilbert-space models for CHSH correlation data.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", parents=[common], help="classify a correlation block")
    p.add_argument("file")

    p = sub.add_parser("generate", parents=[common], help="correlations from a model spec")
    p.add_argument("--kind", required=True, choices=("lhv", "qubit", "vectors", "prbox"))
    p.add_argument("spec")

    p = sub.add_parser("scan", parents=[common], help="sweep t * PR box for t in [0, 1]")
    p.add_argument("--family", choices=("prbox_mix",), default="prbox_mix")
    p.add_argument("--steps", type=_positive_int(2), default=101)

    p = sub.add_parser("realize", parents=[common], help="Gram vectors or infeasibility certificate")
    p.add_argument("file")

    p = sub.add_parser("exercise", parents=[common], help="search real models with CHSH value above 2")
    p.add_argument("--samples", type=_positive_int(1), default=10_000)
    p.add_argument("--seed", type=int, default=0)
    return parser


def _run(args) -> str:
    if args.command == "analyze":
        return _dump_json(analyze(parse_block(_load_json(args.file)), args.mode, args.tol))
    if args.command == "generate":
        return _dump_json(generate(args.kind, _load_json(args.spec)))
    if args.command == "scan":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(SCAN_COLUMNS)
        for t, b, feasible, lam in scan_rows(args.steps, args.mode, args.tol):
            writer.writerow([repr(t), repr(b), "true" if feasible else "false", repr(lam)])
        return buf.getvalue()
    if args.command == "realize":
        return _dump_json(realize(parse_block(_load_json(args.file)), args.tol))
    if args.command == "exercise":
        return _dump_json(exercise(args.samples, args.seed))
    raise AssertionError(args.command)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        text = _run(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except OutOfRange as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
