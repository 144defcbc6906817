"""Dense matrices over R (float64), Q (exact fractions) and F_p.

Real matrices are plain ``numpy`` float64 arrays. Exact matrices are small
immutable value types; their arithmetic runs on Python integers so nothing
overflows.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt
from typing import NamedTuple

import numpy as np

from .errors import NumericalFailure


# ---------------------------------------------------------------------------
# float64


def as_dense(M, *, rows=None, cols=None) -> np.ndarray:
    """Return ``M`` as a finite 2-D float64 array (copying if needed)."""
    A = np.array(M, dtype=np.float64)
    if A.ndim != 2:
        if A.size == 0 and rows is not None and cols is not None:
            A = A.reshape(rows, cols)
        else:
            raise ValueError(f"expected a 2-D matrix, got shape {A.shape}")
    if rows is not None and cols is not None and A.shape != (rows, cols):
        if A.size == 0 and rows * cols == 0:
            A = A.reshape(rows, cols)
        else:
            raise ValueError(f"expected shape {(rows, cols)}, got {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix has non-finite entries")
    return A


class PlainSVD(NamedTuple):
    """Full SVD ``M = U @ diag(singular_values) @ V.T`` with square ``U`` and ``V``."""

    U: np.ndarray
    singular_values: np.ndarray
    V: np.ndarray

    @property
    def Vt(self):
        return self.V.T


def svd_plain(M) -> PlainSVD:
    M = as_dense(M)
    m, k = M.shape
    if m == 0 or k == 0:
        return PlainSVD(np.eye(m), np.zeros(0), np.eye(k))
    try:
        U, s, Vt = np.linalg.svd(M, full_matrices=True)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure(f"SVD did not converge: {exc}") from exc
    return PlainSVD(U, s, Vt.T)


def sym_eig(S, *, sym_tol=1e-10):
    """Eigen-decomposition of a symmetric matrix.

    Returns ``(eigenvalues, Q)`` with eigenvalues non-increasing and the
    columns of ``Q`` the matching orthonormal eigenvectors.
    """
    S = as_dense(S)
    if S.shape[0] != S.shape[1]:
        raise ValueError(f"expected a square matrix, got {S.shape}")
    if S.shape[0] == 0:
        return np.zeros(0), np.zeros((0, 0))
    scale = np.abs(S).max()
    if np.abs(S - S.T).max() > sym_tol * scale:
        raise ValueError("matrix is not symmetric")
    S = 0.5 * (S + S.T)
    try:
        w, Q = np.linalg.eigh(S)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure(f"eigensolver did not converge: {exc}") from exc
    return w[::-1].copy(), Q[:, ::-1].copy()


def numerical_rank(s, rel=1e-9) -> int:
    s = np.asarray(s)
    if s.size == 0 or s[0] == 0:
        return 0
    return int(np.count_nonzero(s > rel * s[0]))


# ---------------------------------------------------------------------------
# exact fields


class _Rationals:
    zero = Fraction(0)
    one = Fraction(1)

    @staticmethod
    def reduce(x):
        return Fraction(x)

    @staticmethod
    def inv(x):
        return 1 / x


class _PrimeField:
    zero = 0
    one = 1

    def __init__(self, p):
        self.p = p

    def reduce(self, x):
        return int(x) % self.p

    def inv(self, x):
        return pow(x, -1, self.p)


QQ = _Rationals()


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0 or p % 3 == 0:
        return p in (2, 3)
    for f in range(5, isqrt(p) + 1, 6):
        if p % f == 0 or p % (f + 2) == 0:
            return False
    return True


def _parse_fraction(x) -> Fraction:
    if isinstance(x, float):
        if not np.isfinite(x):
            raise ValueError("non-finite entry")
        return Fraction(x)
    if isinstance(x, np.integer):
        return Fraction(int(x))
    return Fraction(x)


class _ExactMatrix:
    """Row-major exact matrix; subclasses fix the scalar field."""

    rows: int
    cols: int
    entries: tuple

    def _field(self):
        raise NotImplementedError

    def _new(self, rows, cols, entries):
        raise NotImplementedError

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError("negative dimension")
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"{len(self.entries)} entries for a {self.rows}x{self.cols} matrix")

    @property
    def shape(self):
        return (self.rows, self.cols)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def row_lists(self) -> list[list]:
        c = self.cols
        return [list(self.entries[i * c:(i + 1) * c]) for i in range(self.rows)]

    @property
    def T(self):
        c = self.cols
        ent = tuple(self.entries[i * c + j] for j in range(c) for i in range(self.rows))
        return self._new(self.cols, self.rows, ent)

    def __matmul__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        F = self._field()
        a, b = self.row_lists(), other.T.row_lists()
        ent = []
        for row in a:
            for col in b:
                s = F.zero
                for x, y in zip(row, col):
                    if x and y:
                        s += x * y
                ent.append(F.reduce(s))
        return self._new(self.rows, other.cols, tuple(ent))

    def __add__(self, other):
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        F = self._field()
        return self._new(self.rows, self.cols,
                         tuple(F.reduce(x + y) for x, y in zip(self.entries, other.entries)))

    def __sub__(self, other):
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        F = self._field()
        return self._new(self.rows, self.cols,
                         tuple(F.reduce(x - y) for x, y in zip(self.entries, other.entries)))

    def nnz(self) -> int:
        return sum(1 for x in self.entries if x)

    def is_zero(self) -> bool:
        return not any(self.entries)

    def submatrix(self, rows, cols):
        rows, cols = list(rows), list(cols)
        c = self.cols
        ent = tuple(self.entries[i * c + j] for i in rows for j in cols)
        return self._new(len(rows), len(cols), ent)

    def rref(self):
        """Reduced row echelon form and pivot columns."""
        return _rref(self.row_lists(), self.cols, self._field())

    def rank(self) -> int:
        return len(self.rref()[1])

    def inverse(self):
        if self.rows != self.cols:
            raise ValueError("inverse of a non-square matrix")
        n = self.rows
        F = self._field()
        aug = [row + [F.one if i == j else F.zero for j in range(n)]
               for i, row in enumerate(self.row_lists())]
        R, piv = _rref(aug, n, F)
        if len(piv) < n or piv[-1] >= n:
            raise ZeroDivisionError("matrix is singular")
        return self._new(n, n, tuple(x for row in R for x in row[n:]))

    def full_rank_factorization(self):
        """``M = F @ G`` with ``F`` the pivot columns of ``M`` and ``G`` the nonzero RREF rows."""
        R, piv = self.rref()
        r = len(piv)
        G = self._new(r, self.cols, tuple(x for row in R[:r] for x in row))
        F = self.submatrix(range(self.rows), piv)
        return F, G


def _rref(rows, ncols, F):
    """In-place Gauss-Jordan on a list of row lists; pivots searched in the first ``ncols`` columns."""
    m = len(rows)
    pivots = []
    pr = 0
    for col in range(ncols):
        if pr == m:
            break
        sel = next((r for r in range(pr, m) if rows[r][col]), None)
        if sel is None:
            continue
        rows[pr], rows[sel] = rows[sel], rows[pr]
        inv = F.inv(rows[pr][col])
        prow = [F.reduce(x * inv) for x in rows[pr]]
        rows[pr] = prow
        for r in range(m):
            if r != pr and rows[r][col]:
                f = rows[r][col]
                rows[r] = [F.reduce(x - f * y) if y else x for x, y in zip(rows[r], prow)]
        pivots.append(col)
        pr += 1
    return rows, pivots


@dataclass(frozen=True, eq=True)
class RationalMatrix(_ExactMatrix):
    rows: int
    cols: int
    entries: tuple

    def __post_init__(self):
        super().__post_init__()
        object.__setattr__(self, "entries", tuple(_parse_fraction(x) for x in self.entries))

    def _field(self):
        return QQ

    def _new(self, rows, cols, entries):
        return RationalMatrix(rows, cols, entries)

    @classmethod
    def from_rows(cls, rows, *, shape=None):
        rows = [list(r) for r in rows]
        if shape is None:
            shape = (len(rows), len(rows[0]) if rows else 0)
        if len(rows) != shape[0] or any(len(r) != shape[1] for r in rows):
            raise ValueError("ragged or mis-shaped rows")
        return cls(shape[0], shape[1], tuple(x for r in rows for x in r))

    @classmethod
    def zeros(cls, rows, cols):
        return cls(rows, cols, (Fraction(0),) * (rows * cols))

    @classmethod
    def identity(cls, n):
        return cls(n, n, tuple(Fraction(int(i == j)) for i in range(n) for j in range(n)))

    def to_float(self) -> np.ndarray:
        return np.array([float(x) for x in self.entries], dtype=np.float64).reshape(self.rows, self.cols)

    def mod(self, p: int) -> "PrimeFieldMatrix":
        """Reduce modulo ``p``; every denominator must be a unit mod ``p``."""
        ent = []
        for x in self.entries:
            if x.denominator % p == 0:
                raise ZeroDivisionError(f"denominator {x.denominator} vanishes mod {p}")
            ent.append(x.numerator * pow(x.denominator, -1, p) % p)
        return PrimeFieldMatrix(self.rows, self.cols, p, tuple(ent))


@dataclass(frozen=True, eq=True)
class PrimeFieldMatrix(_ExactMatrix):
    rows: int
    cols: int
    modulus: int
    entries: tuple

    def __post_init__(self):
        super().__post_init__()
        if not is_prime(self.modulus):
            raise ValueError(f"modulus {self.modulus} is not prime")
        object.__setattr__(self, "entries", tuple(int(x) % self.modulus for x in self.entries))

    def _field(self):
        return _PrimeField(self.modulus)

    def _new(self, rows, cols, entries):
        return PrimeFieldMatrix(rows, cols, self.modulus, entries)

    def __matmul__(self, other):
        if isinstance(other, PrimeFieldMatrix) and other.modulus != self.modulus:
            raise ValueError("moduli differ")
        return super().__matmul__(other)

    @classmethod
    def from_rows(cls, rows, p, *, shape=None):
        rows = [list(r) for r in rows]
        if shape is None:
            shape = (len(rows), len(rows[0]) if rows else 0)
        if len(rows) != shape[0] or any(len(r) != shape[1] for r in rows):
            raise ValueError("ragged or mis-shaped rows")
        return cls(shape[0], shape[1], p, tuple(x for r in rows for x in r))

    @classmethod
    def zeros(cls, rows, cols, p):
        return cls(rows, cols, p, (0,) * (rows * cols))

    @classmethod
    def identity(cls, n, p):
        return cls(n, n, p, tuple(int(i == j) for i in range(n) for j in range(n)))

    def to_float(self) -> np.ndarray:
        return np.array(self.entries, dtype=np.float64).reshape(self.rows, self.cols)


# ---------------------------------------------------------------------------
# exact ranks


def _integer_rows(M: RationalMatrix) -> np.ndarray:
    """Scale every row by the lcm of its denominators."""
    out = np.empty((M.rows, M.cols), dtype=object)
    for i, row in enumerate(M.row_lists()):
        l = 1
        for x in row:
            l = l * x.denominator // gcd(l, x.denominator)
        out[i, :] = [x.numerator * (l // x.denominator) for x in row]
    return out


def bareiss_rank(A: np.ndarray) -> int:
    """Rank of an integer object array by fraction-free (Bareiss) elimination."""
    A = A.copy()
    m, n = A.shape
    prev = 1
    r = 0
    for col in range(n):
        if r == m:
            break
        nz = np.flatnonzero(A[r:, col] != 0)
        if nz.size == 0:
            continue
        p = r + int(nz[0])
        if p != r:
            A[[r, p]] = A[[p, r]]
        piv = A[r, col]
        if r + 1 < m and col + 1 < n:
            # every update is an exact division by the previous pivot
            A[r + 1:, col + 1:] = (A[r + 1:, col + 1:] * piv
                                   - A[r + 1:, col:col + 1] * A[r:r + 1, col + 1:]) // prev
        A[r + 1:, col] = 0
        prev = piv
        r += 1
    return r


def exact_rank(M: RationalMatrix) -> int:
    if M.rows == 0 or M.cols == 0:
        return 0
    return bareiss_rank(_integer_rows(M))


def exact_rank_mod_p(M: PrimeFieldMatrix) -> int:
    if M.rows == 0 or M.cols == 0:
        return 0
    p = M.modulus
    A = np.array(M.entries, dtype=np.int64).reshape(M.rows, M.cols)
    if p >= 2**31:
        # int64 products would overflow; fall back to Python ints
        return M.rank()
    m, n = A.shape
    r = 0
    for col in range(n):
        if r == m:
            break
        nz = np.flatnonzero(A[r:, col])
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            A[[r, piv]] = A[[piv, r]]
        A[r] = A[r] * pow(int(A[r, col]), -1, p) % p
        f = A[r + 1:, col:col + 1].copy()
        A[r + 1:] = (A[r + 1:] - f * A[r]) % p
        r += 1
    return r
