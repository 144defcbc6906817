"""Moore-Penrose pseudoinverses of matrices and complexes over R53, Q and F_p."""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .chain_complex import ChainComplex, RankProfile
from .errors import IllConditionedRankError, PenroseConditionError
from .matrix_kernel import PrimeFieldMatrix, RationalMatrix, as_dense, svd_plain

RANK_FLOOR = 1e-13


@dataclass(frozen=True)
class PseudoinverseComplex:
    """Maps ``A_i^+ : C_{i-1} -> C_i`` running up the complex (``maps[i-1]`` is ``c_i x c_{i-1}``)."""

    ranks: tuple[int, ...]
    maps: tuple
    field: str = "R53"
    modulus: int | None = None

    def __getitem__(self, i):
        return self.maps[i - 1]

    def composition_residual(self) -> float:
        """``max ||A_{i+1}^+ A_i^+||_max / (||A_{i+1}^+||_F ||A_i^+||_F)``, or a nonzero count when exact."""
        worst = 0.0
        for lo, hi in zip(self.maps, self.maps[1:]):
            P = hi @ lo
            if self.field != "R53":
                worst += P.nnz()
            elif P.size:
                den = np.linalg.norm(hi) * np.linalg.norm(lo)
                worst = max(worst, np.abs(P).max() / den if den else 0.0)
        return float(worst)


def pinv_float(M, r: int) -> np.ndarray:
    """Pseudoinverse inverting exactly the ``r`` largest singular values of ``M``."""
    M = as_dense(M)
    m, k = M.shape
    if not 0 <= r <= min(m, k):
        raise ValueError(f"rank {r} impossible for a {m}x{k} matrix")
    if r == 0:
        return np.zeros((k, m))
    U, s, V = svd_plain(M)
    if s[r - 1] < RANK_FLOOR * s[0]:
        raise IllConditionedRankError(
            f"singular value {r} is {s[r - 1]:.3g}, below {RANK_FLOOR:g} of the largest ({s[0]:.3g})")
    return (V[:, :r] / s[:r]) @ U[:, :r].T


def pinv_complex(C: ChainComplex, profile: RankProfile) -> PseudoinverseComplex:
    if len(profile.ranks) != C.n:
        raise ValueError("profile does not match the complex")
    mats = C.float_differentials()
    maps = tuple(pinv_float(A, r) for A, r in zip(mats, profile.ranks))
    return PseudoinverseComplex(C.ranks, maps)


def _pinv_exact(M):
    if M.rows == 0 or M.cols == 0 or M.is_zero():
        return M.T
    F, G = M.full_rank_factorization()
    GGt, FtF = G @ G.T, F.T @ F
    try:
        GGt_inv = GGt.inverse()
    except ZeroDivisionError:
        raise PenroseConditionError("kernel") from None
    try:
        FtF_inv = FtF.inverse()
    except ZeroDivisionError:
        raise PenroseConditionError("image") from None
    return G.T @ GGt_inv @ FtF_inv @ F.T


def pinv_exact_rational(M: RationalMatrix) -> RationalMatrix:
    """Exact pseudoinverse over Q from a full-rank factorisation ``M = F G``:
    ``M^+ = G^t (G G^t)^{-1} (F^t F)^{-1} F^t``."""
    return _pinv_exact(M)


def pinv_prime_field(M: PrimeFieldMatrix) -> PrimeFieldMatrix:
    """Pseudoinverse over F_p with respect to the standard dot product.

    Exists iff ``ker M`` and ``im M`` each meet their orthogonal complements
    only in zero, which is the same as ``G G^t`` and ``F^t F`` being invertible.
    """
    return _pinv_exact(M)


def pinv_exact_complex(C: ChainComplex) -> PseudoinverseComplex:
    if C.field == "QQ":
        maps = tuple(pinv_exact_rational(A) for A in C.differentials)
    elif C.field == "Fp":
        maps = tuple(pinv_prime_field(A) for A in C.differentials)
    else:
        raise ValueError("exact pseudoinverses need a QQ or Fp complex")
    return PseudoinverseComplex(C.ranks, maps, C.field, C.modulus)


class PenroseResiduals(NamedTuple):
    """Residuals of ``M M+ M = M``, ``M+ M M+ = M+``, ``(M M+)^t = M M+`` and ``(M+ M)^t = M+ M``.

    Float inputs give Frobenius norms relative to the reference term; exact
    inputs give the number of entries where the relation fails.
    """

    mpm: float
    pmp: float
    sym_left: float
    sym_right: float

    def worst(self):
        return max(self)


def _rel(D, ref):
    den = np.linalg.norm(ref)
    return float(np.linalg.norm(D) / (den if den > 0 else 1.0))


def penrose_residuals(M, Mp) -> PenroseResiduals:
    if isinstance(M, (RationalMatrix, PrimeFieldMatrix)):
        if Mp.shape != (M.cols, M.rows):
            raise ValueError("pseudoinverse must have the transposed shape")
        L, R = M @ Mp, Mp @ M
        return PenroseResiduals((L @ M - M).nnz(), (R @ Mp - Mp).nnz(),
                                (L.T - L).nnz(), (R.T - R).nnz())
    M, Mp = as_dense(M), as_dense(Mp)
    if Mp.shape != M.shape[::-1]:
        raise ValueError("pseudoinverse must have the transposed shape")
    L, R = M @ Mp, Mp @ M
    return PenroseResiduals(_rel(L @ M - M, M), _rel(R @ Mp - Mp, Mp),
                            _rel(L.T - L, L), _rel(R.T - R, R))


def homology_projector(C: ChainComplex, profile: RankProfile | None, i: int):
    """Orthogonal projector ``id - (A_i^+ A_i + A_{i+1} A_{i+1}^+)`` of ``C_i`` onto homology.

    Float complexes need ``profile`` for the ranks; QQ complexes are handled
    exactly and return a ``RationalMatrix``.
    """
    n = C.n
    if not 0 <= i <= n:
        raise IndexError(f"position {i} outside 0..{n}")
    if C.field == "QQ":
        P = RationalMatrix.identity(C.ranks[i])
        if i >= 1:
            P = P - pinv_exact_rational(C[i]) @ C[i]
        if i < n:
            P = P - C[i + 1] @ pinv_exact_rational(C[i + 1])
        return P
    if C.field != "R53":
        raise ValueError("homology projector over F_p is not orthogonal; use QQ or R53")
    if profile is None:
        raise ValueError("float complexes need a rank profile")
    mats = C.float_differentials()
    P = np.eye(C.ranks[i])
    if i >= 1:
        P -= pinv_float(mats[i - 1], profile.ranks[i - 1]) @ mats[i - 1]
    if i < n:
        P -= mats[i] @ pinv_float(mats[i], profile.ranks[i])
    return P
