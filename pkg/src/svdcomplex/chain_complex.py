"""Chain complexes ``0 <- C_0 <-A_1- C_1 <- ... <-A_n- C_n <- 0`` and rank bookkeeping.

Indexing: dimensions ``c`` and homology ``h`` have length ``n + 1`` (positions
``0..n``); ranks ``r`` have length ``n`` (``r[0]`` is the rank of ``A_1``).
The boundary maps ``A_0`` and ``A_{n+1}`` are zero and never materialised.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ComplexStructureError, InconsistentRanksError, RankConditionError
from .matrix_kernel import (
    PrimeFieldMatrix,
    RationalMatrix,
    as_dense,
    exact_rank,
    exact_rank_mod_p,
)

FIELDS = ("R53", "QQ", "Fp")

# eigenvalues of a Laplacian below this fraction of its largest one count as zero
KERNEL_REL_CUTOFF = 1e-8


@dataclass(frozen=True)
class Thresholds:
    rank_threshold: float = 1e-4
    eigen_match_rel_tol: float = 1e-4
    compose_tol: float = 1e-8

    def __post_init__(self):
        for name in ("rank_threshold", "eigen_match_rel_tol", "compose_tol"):
            v = getattr(self, name)
            if not 0 < v < 1:
                raise ValueError(f"{name} must lie in (0, 1), got {v}")


@dataclass(frozen=True)
class RankProfile:
    ranks: tuple[int, ...]
    homology: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "ranks", tuple(int(x) for x in self.ranks))
        object.__setattr__(self, "homology", tuple(int(x) for x in self.homology))
        if len(self.homology) != len(self.ranks) + 1:
            raise ValueError("need len(homology) == len(ranks) + 1")
        if min(self.ranks, default=0) < 0 or min(self.homology) < 0:
            raise ValueError("ranks and homology must be non-negative")

    @property
    def dims(self) -> tuple[int, ...]:
        r = (0, *self.ranks, 0)
        return tuple(r[i] + r[i + 1] + h for i, h in enumerate(self.homology))

    @classmethod
    def from_ranks(cls, c, r):
        return cls(tuple(r), homology_from_ranks(c, r))

    @classmethod
    def from_homology(cls, c, h):
        return cls(ranks_from_homology(c, h), tuple(h))


def _coerce(M, field_name, modulus, rows, cols):
    if field_name == "R53":
        A = as_dense(M, rows=rows, cols=cols)
        A.setflags(write=False)
        return A
    if field_name == "QQ":
        if isinstance(M, RationalMatrix):
            return M
        if isinstance(M, PrimeFieldMatrix):
            raise TypeError("prime field matrix in a rational complex")
        if rows * cols == 0:
            return RationalMatrix.zeros(rows, cols)
        return RationalMatrix.from_rows(np.asarray(M, dtype=object).tolist(), shape=(rows, cols))
    if isinstance(M, PrimeFieldMatrix):
        if M.modulus != modulus:
            raise ValueError(f"matrix modulus {M.modulus} differs from complex modulus {modulus}")
        return M
    if isinstance(M, RationalMatrix):
        return M.mod(modulus)
    if rows * cols == 0:
        return PrimeFieldMatrix.zeros(rows, cols, modulus)
    return PrimeFieldMatrix.from_rows(np.asarray(M, dtype=object).tolist(), modulus, shape=(rows, cols))


def _shape(M):
    if hasattr(M, "rows") and not isinstance(M, np.ndarray):
        return (M.rows, M.cols)
    a = np.asarray(M)
    if a.ndim == 2:
        return a.shape
    if a.size == 0:
        return None
    raise ComplexStructureError(f"differential is not 2-D (shape {a.shape})")


@dataclass(frozen=True)
class ChainComplex:
    """A finite complex over ``R53`` (float64), ``QQ`` or ``Fp``.

    ``differentials[i - 1]`` is ``A_i`` of shape ``c_{i-1} x c_i``.
    """

    ranks: tuple[int, ...]
    differentials: tuple
    field: str = "R53"
    modulus: int | None = None

    def __post_init__(self):
        c = tuple(int(x) for x in self.ranks)
        if len(c) < 2:
            raise ComplexStructureError("a complex needs at least one differential")
        if min(c) < 0:
            raise ComplexStructureError("negative dimension")
        if self.field not in FIELDS:
            raise ValueError(f"unknown field {self.field!r}")
        if self.field == "Fp" and self.modulus is None:
            raise ValueError("Fp complex needs a modulus")
        if self.field != "Fp" and self.modulus is not None:
            raise ValueError("modulus given for a non-Fp field")
        diffs = tuple(self.differentials)
        if len(diffs) != len(c) - 1:
            raise ComplexStructureError(
                f"{len(c)} spaces need {len(c) - 1} differentials, got {len(diffs)}")
        out = []
        for i, M in enumerate(diffs, start=1):
            shp = _shape(M)
            if shp is not None and tuple(shp) != (c[i - 1], c[i]):
                raise ComplexStructureError(
                    f"A_{i} has shape {tuple(shp)}, expected {(c[i - 1], c[i])}", index=i)
            out.append(_coerce(M, self.field, self.modulus, c[i - 1], c[i]))
        object.__setattr__(self, "ranks", c)
        object.__setattr__(self, "differentials", tuple(out))

    @property
    def n(self) -> int:
        return len(self.differentials)

    @property
    def is_exact(self) -> bool:
        return self.field != "R53"

    def __getitem__(self, i):
        """``A_i`` for ``1 <= i <= n``."""
        if not 1 <= i <= self.n:
            raise IndexError(i)
        return self.differentials[i - 1]

    def float_differentials(self) -> list[np.ndarray]:
        if self.field == "R53":
            return [np.array(A) for A in self.differentials]
        return [A.to_float() for A in self.differentials]

    def to_float(self) -> "ChainComplex":
        if self.field == "R53":
            return self
        return ChainComplex(self.ranks, self.float_differentials())

    def to_rational(self) -> "ChainComplex":
        """Exact rational copy; float entries are converted exactly (binary fractions)."""
        if self.field == "QQ":
            return self
        if self.field == "Fp":
            raise ValueError("cannot lift an Fp complex to QQ")
        diffs = [RationalMatrix(A.shape[0], A.shape[1], tuple(float(x) for x in A.ravel()))
                 for A in self.differentials]
        return ChainComplex(self.ranks, diffs, field="QQ")

    def mod(self, p) -> "ChainComplex":
        if self.field != "QQ":
            raise ValueError("only rational complexes can be reduced mod p")
        return ChainComplex(self.ranks, [A.mod(p) for A in self.differentials], field="Fp", modulus=p)

    @classmethod
    def from_matrices(cls, mats: Sequence, field="R53", modulus=None):
        """Infer dimensions from the matrices; all shapes must be non-degenerate."""
        shapes = [_shape(M) for M in mats]
        if not shapes or any(s is None for s in shapes):
            raise ComplexStructureError("cannot infer dimensions; pass ranks explicitly")
        c = [shapes[0][0]] + [s[1] for s in shapes]
        for i in range(1, len(shapes)):
            if shapes[i][0] != shapes[i - 1][1]:
                raise ComplexStructureError(
                    f"A_{i + 1} has {shapes[i][0]} rows but C_{i} has dimension {shapes[i - 1][1]}",
                    index=i + 1)
        return cls(tuple(c), tuple(mats), field=field, modulus=modulus)


def validate(C: ChainComplex) -> float:
    """Largest composition residual of consecutive differentials.

    For float complexes this is ``max ||A_i A_{i+1}||_max / max(1, ||A_i||_F ||A_{i+1}||_F)``.
    For exact complexes it is the number of nonzero entries in all products
    (so ``0`` means an honest complex).
    """
    c = C.ranks
    for i, A in enumerate(C.differentials, start=1):
        if _shape(A) not in (None, (c[i - 1], c[i])):
            raise ComplexStructureError(f"A_{i} has the wrong shape", index=i)
    worst = 0.0
    for i in range(1, C.n):
        A, B = C[i], C[i + 1]
        if C.is_exact:
            worst += (A @ B).nnz()
            continue
        if A.size == 0 or B.size == 0:
            continue
        res = np.abs(A @ B).max()
        worst = max(worst, res / max(1.0, np.linalg.norm(A) * np.linalg.norm(B)))
    return float(worst)


def is_complex(C: ChainComplex, thresholds: Thresholds = Thresholds()) -> bool:
    r = validate(C)
    return r == 0 if C.is_exact else r <= thresholds.compose_tol


def laplacian(C, i: int) -> np.ndarray:
    """``A_i^t A_i + A_{i+1} A_{i+1}^t`` on ``C_i`` (float64)."""
    if isinstance(C, ChainComplex):
        mats, c = C.float_differentials(), C.ranks
    else:
        mats = [as_dense(B) for B in C]
        c = [mats[0].shape[0]] + [B.shape[1] for B in mats]
    n = len(mats)
    if not 0 <= i <= n:
        raise IndexError(f"Laplacian index {i} outside 0..{n}")
    L = np.zeros((c[i], c[i]))
    if i >= 1:
        L += mats[i - 1].T @ mats[i - 1]
    if i < n:
        L += mats[i] @ mats[i].T
    return L


def homology_from_ranks(c: Sequence[int], r: Sequence[int]) -> tuple[int, ...]:
    if len(c) != len(r) + 1:
        raise ValueError(f"{len(c)} dimensions need {len(c) - 1} ranks, got {len(r)}")
    rr = (0, *r, 0)
    h = tuple(int(ci) - rr[i] - rr[i + 1] for i, ci in enumerate(c))
    bad = [i for i, x in enumerate(h) if x < 0]
    if bad or min(r, default=0) < 0:
        raise InconsistentRanksError(
            f"ranks {tuple(r)} exceed dimensions {tuple(c)} (h = {h})")
    return h


def ranks_from_homology(c: Sequence[int], h: Sequence[int]) -> tuple[int, ...]:
    """Solve ``c_i = r_i + r_{i+1} + h_i`` for the ranks, starting from ``r_0 = 0``."""
    if len(c) != len(h):
        raise ValueError("dimension and homology lists differ in length")
    r = [0]
    for ci, hi in zip(c, h):
        r.append(ci - r[-1] - hi)
        if r[-1] < 0:
            raise RankConditionError()
    if r[-1] != 0:
        raise RankConditionError()
    return tuple(r[1:-1])


def exact_ranks(C: ChainComplex) -> tuple[int, ...]:
    if C.field == "QQ":
        return tuple(exact_rank(A) for A in C.differentials)
    if C.field == "Fp":
        return tuple(exact_rank_mod_p(A) for A in C.differentials)
    raise ValueError("exact ranks need a QQ or Fp complex")


def exact_homology(C: ChainComplex) -> tuple[int, ...]:
    """Homology dimensions from exact ranks; the reference answer for float pipelines."""
    if not C.is_exact:
        raise ValueError("exact homology needs a QQ or Fp complex (see ChainComplex.to_rational)")
    if validate(C) != 0:
        raise ComplexStructureError("differentials do not compose to zero")
    return homology_from_ranks(C.ranks, exact_ranks(C))


def exact_profile(C: ChainComplex) -> RankProfile:
    r = exact_ranks(C)
    return RankProfile(r, exact_homology(C))


def kernel_dimension(L: np.ndarray, rel=KERNEL_REL_CUTOFF) -> int:
    if L.shape[0] == 0:
        return 0
    w = np.linalg.eigvalsh(0.5 * (L + L.T))
    top = w.max()
    if top <= 0:
        return L.shape[0]
    return int(np.count_nonzero(w < rel * top))
