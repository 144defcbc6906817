"""Benchmark suites: random integer complexes and Stanley-Reisner complexes.

Each case is checked against exact ranks over Q; wall times are informational.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from .chain_complex import exact_homology, ranks_from_homology
from .complex_svd import svd_by_laplacian, svd_by_projection
from .errors import (
    DiagonalityError,
    NumericalFailure,
    RankDecisionError,
    RepeatedEigenvalueError,
)
from .generators import GeneratorConfig, random_complex, stanley_reisner_chain

# (dims, homology) pairs of the random-complex suite
TABLE1_SHAPES = (
    ((7, 21, 28, 14), (2, 3, 2, 1)),
    ((8, 27, 35, 17), (3, 6, 4, 2)),
    ((9, 33, 42, 20), (4, 9, 6, 3)),
    ((10, 39, 49, 23), (5, 12, 8, 4)),
    ((11, 45, 56, 26), (6, 15, 10, 5)),
    ((12, 51, 63, 29), (7, 18, 12, 6)),
)

# (variables, monomials) of the Stanley-Reisner suite
TABLE2_SHAPES = ((8, 20), (9, 21), (10, 23))

_ABORTS = (RepeatedEigenvalueError, DiagonalityError, RankDecisionError, NumericalFailure)


@dataclass
class BenchRow:
    label: str
    dims: tuple
    oracle: tuple
    times: dict = field(default_factory=dict)      # method -> best wall time (s)
    homology: dict = field(default_factory=dict)   # method -> homology found (None on abort)

    @property
    def passed(self) -> bool:
        return all(h == self.oracle for h in self.homology.values())


def _time_method(fn, F, repeats):
    best, seen = float("inf"), set()
    for _ in range(max(1, repeats)):
        t0 = time.perf_counter()
        try:
            h = fn(F).homology
        except _ABORTS:
            h = None
        best = min(best, time.perf_counter() - t0)
        seen.add(h)
    # repeats must agree; a disagreement is reported as a failed run
    return best, seen.pop() if len(seen) == 1 else None


def run_case(label, C, methods, repeats=1) -> BenchRow:
    oracle = exact_homology(C)
    F = C.to_float()
    row = BenchRow(label, C.ranks, oracle)
    for name in methods:
        fn = {"projection": svd_by_projection, "laplacian": svd_by_laplacian}[name]
        row.times[name], row.homology[name] = _time_method(fn, F, repeats)
    return row


def table1_case(index: int, seed: int = 0):
    c, h = TABLE1_SHAPES[index]
    r = ranks_from_homology(c, h)
    return random_complex(h, r, GeneratorConfig(seed=seed))


def run_table1(repeats=1, seed=0) -> list[BenchRow]:
    rows = []
    for idx, (c, h) in enumerate(TABLE1_SHAPES):
        C = table1_case(idx, seed + idx)
        rows.append(run_case(f"random {idx + 1}", C, ("projection", "laplacian"), repeats))
    return rows


def run_table2(repeats=1, seed=0, shapes=TABLE2_SHAPES) -> list[BenchRow]:
    rows = []
    for idx, (k, N) in enumerate(shapes):
        C = stanley_reisner_chain(k, N, GeneratorConfig(seed=seed + idx))
        rows.append(run_case(f"k={k} N={N}", C, ("projection",), repeats))
    return rows


def format_rows(rows: list[BenchRow]) -> str:
    methods = []
    for row in rows:
        methods += [m for m in row.times if m not in methods]
    head = ["case", "dims", "homology (exact)"] + [f"{m} (s)" for m in methods] + ["status"]
    lines = [head]
    for row in rows:
        cells = [row.label, ",".join(map(str, row.dims)), ",".join(map(str, row.oracle))]
        for m in methods:
            cells.append(f"{row.times[m]:.5f}" if m in row.times else "n/a")
        cells.append("PASS" if row.passed else "FAIL")
        lines.append(cells)
    widths = [max(len(r[j]) for r in lines) for j in range(len(head))]
    return "\n".join("  ".join(cell.ljust(w) for cell, w in zip(r, widths)).rstrip() for r in lines)
