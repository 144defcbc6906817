"""Command line interface.

Exit codes: 0 success, 1 unreadable input, 2 infeasible or invalid, 3 algorithm abort.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import bench
from .chain_complex import Thresholds, exact_homology, ranks_from_homology, validate
from .complex_svd import (
    make_special_orthogonal,
    project_to_complex,
    svd_by_laplacian,
    svd_by_projection,
)
from .documents import (
    DocumentError,
    complex_to_dict,
    load_complex,
    pinv_to_dict,
    svd_to_dict,
)
from .errors import (
    DiagonalityError,
    IllConditionedRankError,
    NumericalFailure,
    PenroseConditionError,
    RankConditionError,
    RankDecisionError,
    RepeatedEigenvalueError,
    SignFreedomError,
)
from .generators import (
    GeneratorConfig,
    random_complex,
    stanley_reisner_chain,
    stanley_reisner_from_generators,
)
from .pseudoinverse import penrose_residuals, pinv_complex, pinv_exact_complex

EXIT_OK, EXIT_PARSE, EXIT_INVALID, EXIT_ABORT = 0, 1, 2, 3


def _int_list(text):
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _emit(doc, output):
    text = json.dumps(doc)
    if output:
        Path(output).write_text(text + "\n", encoding="utf-8")
    else:
        print(text)


def _fmt(values):
    return ", ".join(f"{x:.6g}" for x in values)


def _err(msg):
    print(msg, file=sys.stderr)


def cmd_validate(args):
    C = load_complex(args.input)
    res = validate(C)
    tol = Thresholds().compose_tol
    ok = res == 0 if C.is_exact else res <= tol
    what = "nonzero entries in compositions" if C.is_exact else "normalized residual"
    print(f"field {C.field}; dims {','.join(map(str, C.ranks))}")
    print(f"{what}: {res:.3g}")
    print("PASS" if ok else "FAIL")
    return EXIT_OK if ok else EXIT_INVALID


def cmd_svd(args):
    C = load_complex(args.input)
    if C.is_exact:
        _err(f"note: converting {C.field} input to double precision")
    F = C.to_float()
    t = Thresholds(rank_threshold=args.threshold, eigen_match_rel_tol=args.threshold)
    method = svd_by_projection if args.method == "projection" else svd_by_laplacian
    try:
        d = method(F, t)
    except RepeatedEigenvalueError as exc:
        _err(f"abort: {exc}")
        _err("colliding eigenvalues: " + _fmt(exc.values))
        return EXIT_ABORT
    except (DiagonalityError, RankDecisionError, NumericalFailure) as exc:
        _err(f"abort: {exc}")
        return EXIT_ABORT
    if args.special_orthogonal:
        try:
            d = make_special_orthogonal(d)
        except SignFreedomError as exc:
            _err(f"warning: {exc}; bases left unchanged")
    print(f"method: {d.method}")
    print("r = " + ",".join(map(str, d.ranks)))
    print("h = " + ",".join(map(str, d.homology)))
    for i, s in enumerate(d.sigma, start=1):
        print(f"Sigma_{i} = {_fmt(s)}")
    print(f"normal-form residual = {d.normal_form_residual:.3g}")
    if args.special_orthogonal:
        print("det U = " + _fmt(np.linalg.det(U) if U.size else 1.0 for U in d.U))
    if args.output:
        _emit(svd_to_dict(d), args.output)
    return EXIT_OK


def cmd_pinv(args):
    C = load_complex(args.input)
    if args.exact:
        if not C.is_exact:
            _err("--exact needs a QQ or Fp document")
            return EXIT_INVALID
        try:
            P = pinv_exact_complex(C)
        except PenroseConditionError as exc:
            _err(f"abort: {exc}")
            return EXIT_ABORT
    else:
        if C.field == "Fp":
            _err("Fp documents need --exact")
            return EXIT_INVALID
        F = C.to_float()
        try:
            d = svd_by_projection(F, Thresholds(rank_threshold=args.threshold))
            P = pinv_complex(F, d.profile)
        except (RankDecisionError, IllConditionedRankError, NumericalFailure) as exc:
            _err(f"abort: {exc}")
            return EXIT_ABORT
        C = F
    for i, (A, Ap) in enumerate(zip(C.differentials, P.maps), start=1):
        res = penrose_residuals(A, Ap)
        print(f"A_{i}^+ Penrose residuals: " + " ".join(f"{x:.3g}" for x in res))
    print(f"composition residual of pseudoinverse complex: {P.composition_residual():.3g}")
    _emit(pinv_to_dict(P), args.output)
    return EXIT_OK


def cmd_project(args):
    C = load_complex(args.input)
    F = C.to_float()
    try:
        A = project_to_complex(F, args.homology)
    except RankConditionError as exc:
        _err(str(exc))
        return EXIT_INVALID
    except ValueError as exc:
        _err(str(exc))
        return EXIT_INVALID
    print(f"ranks r = {','.join(map(str, ranks_from_homology(F.ranks, args.homology)))}")
    print(f"composition residual: {validate(A):.3g}")
    _emit(complex_to_dict(A), args.output)
    return EXIT_OK


def _parse_monomials(text, k):
    """Either a count or a comma list of monomials such as ``x1x2x3`` (1-based variables)."""
    if text.strip().isdigit():
        return int(text)
    gens = []
    for mono in text.split(","):
        idx = [int(v) for v in mono.strip().lower().split("x") if v]
        if not idx or min(idx) < 1 or max(idx) > k:
            raise ValueError(f"bad monomial {mono!r} for {k} variables")
        gens.append(tuple(v - 1 for v in idx))
    return gens


def cmd_generate(args):
    if args.kind == "random":
        if args.homology is None or args.ranks is None:
            _err("random needs --homology and --ranks")
            return EXIT_INVALID
        try:
            C = random_complex(args.homology, args.ranks, GeneratorConfig(seed=args.seed))
        except ValueError as exc:
            _err(str(exc))
            return EXIT_INVALID
    else:
        try:
            mono = _parse_monomials(args.monomials, args.vars)
            if isinstance(mono, int):
                C = stanley_reisner_chain(args.vars, mono, GeneratorConfig(seed=args.seed))
            else:
                C = stanley_reisner_from_generators(args.vars, mono)
        except (ValueError, RuntimeError) as exc:
            _err(str(exc))
            return EXIT_INVALID
    h = exact_homology(C)
    summary = f"c = {','.join(map(str, C.ranks))}\nh = {','.join(map(str, h))}"
    if args.output:
        _emit(complex_to_dict(C), args.output)
        print(summary)
    else:
        _emit(complex_to_dict(C), None)
        _err(summary)
    return EXIT_OK


def cmd_bench(args):
    if args.suite == "table1":
        rows = bench.run_table1(args.repeats, args.seed)
    else:
        rows = bench.run_table2(args.repeats, args.seed)
    print(bench.format_rows(rows))
    return EXIT_OK if all(r.passed for r in rows) else EXIT_INVALID


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="svdcomplex", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("validate", help="check that the differentials compose to zero")
    s.add_argument("--input", required=True)
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("svd", help="singular value decomposition of a complex")
    s.add_argument("--input", required=True)
    s.add_argument("--method", choices=("projection", "laplacian"), default="projection")
    s.add_argument("--threshold", type=float, default=1e-4)
    s.add_argument("--special-orthogonal", action="store_true")
    s.add_argument("--output")
    s.set_defaults(func=cmd_svd)

    s = sub.add_parser("pinv", help="pseudoinverse complex")
    s.add_argument("--input", required=True)
    s.add_argument("--output")
    s.add_argument("--exact", action="store_true")
    s.add_argument("--threshold", type=float, default=1e-4)
    s.set_defaults(func=cmd_pinv)

    s = sub.add_parser("project", help="project matrices onto a complex with given homology")
    s.add_argument("--input", required=True)
    s.add_argument("--homology", type=_int_list, required=True)
    s.add_argument("--output")
    s.set_defaults(func=cmd_project)

    s = sub.add_parser("generate", help="write a test complex")
    s.add_argument("kind", choices=("random", "stanley-reisner"))
    s.add_argument("--homology", type=_int_list)
    s.add_argument("--ranks", type=_int_list)
    s.add_argument("--vars", type=int, default=8)
    s.add_argument("--monomials", default="20")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--output")
    s.set_defaults(func=cmd_generate)

    s = sub.add_parser("bench", help="run a benchmark suite against the exact oracle")
    s.add_argument("--suite", choices=("table1", "table2"), default="table1")
    s.add_argument("--repeats", type=int, default=1)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except DocumentError as exc:
        _err(f"error: {exc}")
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
