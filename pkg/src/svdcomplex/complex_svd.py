"""Singular value decomposition of a complex.

Given floating point approximations ``B_1, ..., B_n`` of a complex, find
orthogonal ``U_0, ..., U_n`` such that every ``U_{i-1}^t B_i U_i`` is close to
the block matrix

    rows r_{i-1} | 0        0 0
    rows r_i     | Sigma_i  0 0
    rows h_{i-1} | 0        0 0

with columns split ``r_i | r_{i+1} | h_i``. Two routes are provided: successive
projection onto approximate kernels, and simultaneous diagonalisation of the
Laplacians. ``project_to_complex`` reuses the projection sweep with prescribed
ranks to snap near-complexes onto exact ones.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from .chain_complex import (
    KERNEL_REL_CUTOFF,
    ChainComplex,
    RankProfile,
    Thresholds,
    homology_from_ranks,
    laplacian,
    ranks_from_homology,
)
from .errors import (
    DiagonalityError,
    InconsistentRanksError,
    RankDecisionError,
    RepeatedEigenvalueError,
    SignFreedomError,
)
from .matrix_kernel import PrimeFieldMatrix, as_dense, svd_plain, sym_eig

DEFAULT_THRESHOLDS = Thresholds()


@dataclass(frozen=True)
class ComplexSVD:
    U: tuple            # U_0 .. U_n, square orthogonal
    sigma: tuple        # Sigma_1 .. Sigma_n as 1-D arrays of length r_i
    profile: RankProfile
    method: str
    normal_form_residual: float
    spectra: tuple = ()  # raw singular values (projection) or eigenvalues (laplacian)

    @property
    def dims(self):
        return tuple(U.shape[0] for U in self.U)

    @property
    def ranks(self):
        return self.profile.ranks

    @property
    def homology(self):
        return self.profile.homology

    def block(self, i):
        return normal_form_block(self.dims, self.profile, self.sigma[i - 1], i)

    def sigma_max(self) -> float:
        return max((float(s[0]) for s in self.sigma if len(s)), default=0.0)


def _float_maps(B) -> tuple[list[np.ndarray], tuple[int, ...]]:
    if isinstance(B, ChainComplex):
        return B.float_differentials(), B.ranks
    mats = [as_dense(M) for M in B]
    if not mats:
        raise ValueError("need at least one matrix")
    c = (mats[0].shape[0], *(M.shape[1] for M in mats))
    for i in range(1, len(mats)):
        if mats[i].shape[0] != c[i]:
            raise ValueError(f"B_{i + 1} has {mats[i].shape[0]} rows, expected {c[i]}")
    return mats, c


def _composition_residual(mats) -> float:
    worst = 0.0
    for A, B in zip(mats, mats[1:]):
        if A.size and B.size:
            den = max(1.0, np.linalg.norm(A) * np.linalg.norm(B))
            worst = max(worst, np.abs(A @ B).max() / den)
    return worst


def normal_form_block(dims, profile: RankProfile, sigma, i) -> np.ndarray:
    """The ``c_{i-1} x c_i`` matrix with ``Sigma_i`` at rows ``r_{i-1}..`` and columns ``0..r_i``."""
    r = (0, *profile.ranks)
    S = np.zeros((dims[i - 1], dims[i]))
    for k, s in enumerate(sigma):
        S[r[i - 1] + k, k] = s
    return S


def normal_form_residual(B, d: ComplexSVD) -> float:
    """``max_i ||U_{i-1}^t B_i U_i - block_i||_max`` divided by the largest singular value."""
    mats, _ = _float_maps(B)
    smax = d.sigma_max() or 1.0
    worst = 0.0
    for i, M in enumerate(mats, start=1):
        if M.size == 0:
            continue
        D = d.U[i - 1].T @ M @ d.U[i] - d.block(i)
        worst = max(worst, float(np.abs(D).max()))
    return worst / smax


def rank_decision(sigma: Sequence[float], cap: int, b: float) -> int:
    """Gap rule: the first 1-based ``j < cap`` with ``b * sigma_j >= sigma_{j+1}``, else ``cap``."""
    s = np.asarray(sigma, dtype=float)[:cap]
    cap = min(cap, len(s))
    if cap == 0 or s[0] == 0:
        return 0
    for j in range(1, cap):
        if b * s[j - 1] >= s[j]:
            return j
    return cap


def stable_singular_values(sigma_a, sigma_b, rel_tol: float) -> int:
    """Length of the leading run of positive values that agree to relative ``rel_tol``."""
    m = 0
    for a, b in zip(sigma_a, sigma_b):
        if a <= 0 or b <= 0 or abs(a - b) > rel_tol * max(a, b):
            break
        m += 1
    return m


def _profile_or_raise(c, ranks, spectra) -> RankProfile:
    try:
        return RankProfile.from_ranks(c, ranks)
    except InconsistentRanksError as exc:
        raise RankDecisionError(f"rank decisions {tuple(ranks)} are inconsistent: {exc}",
                                spectra) from exc


# ---------------------------------------------------------------------------
# successive projection


def _projection_sweep(mats, c, decide):
    """Shared loop of the projection method; ``decide(i, s)`` returns ``r_i``."""
    n = len(mats)
    P = np.eye(c[0])
    Q = np.zeros((0, c[0]))
    Ut = [None] * (n + 1)
    ranks, spectra, sigma = [], [], []
    for i in range(1, n + 1):
        Bt = P @ mats[i - 1]
        svd = svd_plain(Bt)
        s = svd.singular_values
        r = decide(i, s, min(Bt.shape))
        Vt = svd.V.T
        Ut[i - 1] = np.vstack([Q, svd.U.T @ P])
        Q, P = Vt[:r], Vt[r:]
        ranks.append(r)
        spectra.append(s)
        sigma.append(s[:r].copy())
    Ut[n] = np.vstack([Q, P])
    return [M.T.copy() for M in Ut], ranks, sigma, spectra


def svd_by_projection(B, thresholds: Thresholds = DEFAULT_THRESHOLDS) -> ComplexSVD:
    """SVD of a complex by projecting each map onto the approximate kernel of the previous one."""
    mats, c = _float_maps(B)
    res = _composition_residual(mats)
    if res > thresholds.compose_tol:
        warnings.warn(f"input is not a complex to tolerance (residual {res:.3g})", stacklevel=2)
    b = thresholds.rank_threshold
    U, ranks, sigma, spectra = _projection_sweep(
        mats, c, lambda i, s, cap: rank_decision(s, cap, b))
    profile = _profile_or_raise(c, ranks, spectra)
    d = ComplexSVD(tuple(U), tuple(sigma), profile, "projection", 0.0, tuple(spectra))
    return replace(d, normal_form_residual=normal_form_residual(mats, d))


SINGLE_UNIT_ROUNDOFF = 2.0 ** -24


def single_precision_shadow(B, seed=0) -> list[np.ndarray]:
    """A copy of ``B`` carrying single-precision-sized relative errors.

    Plain rounding to float32 leaves small integers untouched, which would make
    the two runs identical, so every entry also gets a seeded relative jitter
    of one single-precision unit roundoff.
    """
    mats, _ = _float_maps(B)
    rng = np.random.default_rng(seed)
    out = []
    for M in mats:
        jitter = rng.uniform(-SINGLE_UNIT_ROUNDOFF, SINGLE_UNIT_ROUNDOFF, M.shape)
        out.append((M * (1 + jitter)).astype(np.float32).astype(np.float64))
    return out


def svd_two_precision(B, shadow=None, rel_tol: float = 1e-3) -> ComplexSVD:
    """Projection method whose ranks are the counts of singular values stable across two inputs.

    ``shadow`` is a second approximation of the same complex; by default the
    input rounded to single precision. The decomposition returned is that of
    ``B`` itself.
    """
    mats, c = _float_maps(B)
    other = _float_maps(shadow)[0] if shadow is not None else single_precision_shadow(mats)
    if [M.shape for M in other] != [M.shape for M in mats]:
        raise ValueError("shadow complex has different shapes")
    state = {"P": np.eye(c[0])}

    def decide(i, s, cap):
        shadow_svd = svd_plain(state["P"] @ other[i - 1])
        r = min(cap, stable_singular_values(s, shadow_svd.singular_values, rel_tol))
        state["P"] = shadow_svd.V.T[r:]
        return r

    U, ranks, sigma, spectra = _projection_sweep(mats, c, decide)
    profile = _profile_or_raise(c, ranks, spectra)
    d = ComplexSVD(tuple(U), tuple(sigma), profile, "projection", 0.0, tuple(spectra))
    return replace(d, normal_form_residual=normal_form_residual(mats, d))


def project_to_complex(B, homology: Sequence[int]) -> ChainComplex:
    """Replace approximate maps by an exact complex with the requested homology.

    Raises ``RankConditionError`` when the dimensions cannot carry ``homology``.
    """
    mats, c = _float_maps(B)
    ranks = ranks_from_homology(c, homology)
    U, _, sigma, _ = _projection_sweep(mats, c, lambda i, s, cap: ranks[i - 1])
    profile = RankProfile(ranks, homology)
    out = [U[i - 1] @ normal_form_block(c, profile, sigma[i - 1], i) @ U[i].T
           for i in range(1, len(mats) + 1)]
    return ChainComplex(c, out)


# ---------------------------------------------------------------------------
# Laplacian method


def _nonzero_count(w) -> int:
    if len(w) == 0 or w[0] <= 0:
        return 0
    return int(np.count_nonzero(w > KERNEL_REL_CUTOFF * w[0]))


def _match(a, b, tol):
    """Greedy two-pointer matching of two descending lists; returns index pairs."""
    close = lambda x, y: abs(x - y) <= tol * max(abs(x), abs(y))
    pairs = []
    i = j = 0
    while i < len(a) and j < len(b):
        if close(a[i], b[j]):
            # prefer a nearer partner for either side if one is also in range
            if i + 1 < len(a) and close(a[i + 1], b[j]) and abs(a[i + 1] - b[j]) < abs(a[i] - b[j]):
                i += 1
                continue
            if j + 1 < len(b) and close(a[i], b[j + 1]) and abs(a[i] - b[j + 1]) < abs(a[i] - b[j]):
                j += 1
                continue
            pairs.append((i, j))
            i += 1
            j += 1
        elif a[i] > b[j]:
            i += 1
        else:
            j += 1
    return pairs


def svd_by_laplacian(B, thresholds: Thresholds = DEFAULT_THRESHOLDS) -> ComplexSVD:
    """SVD of a complex by diagonalising the Laplacians and pairing shared eigenvalues.

    Requires every Laplacian to have simple nonzero spectrum; otherwise raises
    ``RepeatedEigenvalueError``.
    """
    mats, c = _float_maps(B)
    n = len(mats)
    tol = thresholds.eigen_match_rel_tol
    eig = [sym_eig(laplacian(mats, i)) for i in range(n + 1)]
    spectra = tuple(w for w, _ in eig)
    nonzero = []
    for i, (w, _) in enumerate(eig):
        k = _nonzero_count(w)
        for a, b in zip(w[:k - 1], w[1:k]):
            if a - b <= tol * a:
                raise RepeatedEigenvalueError(i, (a, b))
        nonzero.append(w[:k])

    # left[i]: eigen-indices of D_i shared with D_{i-1}; right[i]: shared with D_{i+1}
    left = [[] for _ in range(n + 1)]
    right = [[] for _ in range(n + 1)]
    for i in range(1, n + 1):
        for p, q in _match(nonzero[i - 1], nonzero[i], tol):
            right[i - 1].append(p)
            left[i].append(q)
    for i in range(n + 1):
        both = set(left[i]) & set(right[i])
        if both:
            raise RankDecisionError(
                f"eigenvalue {eig[i][0][min(both)]:.10g} of Laplacian {i} is shared with both neighbours",
                spectra)
    ranks = [len(left[i]) for i in range(1, n + 1)]
    profile = _profile_or_raise(c, ranks, spectra)

    U = []
    for i, (w, Q) in enumerate(eig):
        used = set(left[i]) | set(right[i])
        rest = [k for k in range(len(w)) if k not in used]
        U.append(Q[:, left[i] + right[i] + rest].copy())

    r = (0, *ranks)
    sigma = []
    for i in range(1, n + 1):
        lo = r[i - 1]
        S = (U[i - 1].T @ mats[i - 1] @ U[i])[lo:lo + r[i], :r[i]]
        diag = np.abs(np.diag(S)).copy()
        order = np.argsort(-diag, kind="stable")
        if np.any(order != np.arange(r[i])):
            U[i][:, :r[i]] = U[i][:, order]
            U[i - 1][:, lo:lo + r[i]] = U[i - 1][:, lo + order]
            S = S[np.ix_(order, order)]
            diag = diag[order]
        sigma.append(diag)
    smax = max((float(s[0]) for s in sigma if len(s)), default=0.0)
    for i in range(1, n + 1):
        lo = r[i - 1]
        S = (U[i - 1].T @ mats[i - 1] @ U[i])[lo:lo + r[i], :r[i]]
        off = np.abs(S - np.diag(np.diag(S))).max() if r[i] > 1 else 0.0
        if off > 1e-6 * smax:
            raise DiagonalityError(i, off)
        # fix signs left to right; U_{i-1} is already final here
        neg = np.diag(S) < 0
        U[i][:, :r[i]][:, neg] *= -1

    d = ComplexSVD(tuple(U), tuple(sigma), profile, "laplacian", 0.0, spectra)
    return replace(d, normal_form_residual=normal_form_residual(mats, d))


# ---------------------------------------------------------------------------
# determinant normalisation


def make_special_orthogonal(d: ComplexSVD) -> ComplexSVD:
    """Flip column signs so that every ``det U_i = +1`` without changing the normal form.

    Admissible moves: column ``k`` of ``U_i`` together with column ``r_{i-1}+k``
    of ``U_{i-1}`` (for ``k < r_i``), and any homology column of ``U_i`` on its own.
    """
    n = len(d.sigma)
    r = (0, *d.ranks, 0)
    h = d.homology
    need = [int(U.shape[0] > 0 and np.linalg.det(U) < 0) for U in d.U]
    if not any(need):
        return d

    moves = []  # (list of (level, column))
    for i in range(1, n + 1):
        if r[i] > 0:
            moves.append([(i, 0), (i - 1, r[i - 1])])
    for i in range(n + 1):
        if h[i] > 0:
            moves.append([(i, d.U[i].shape[1] - 1)])
    # GF(2) system: for each level, the moves touching it must sum to need[level]
    rows = [[int(any(lvl == i for lvl, _ in mv)) for mv in moves] + [need[i]] for i in range(n + 1)]
    R, piv = PrimeFieldMatrix.from_rows(rows, 2).rref()
    if piv and piv[-1] == len(moves):
        raise SignFreedomError("no admissible sign flips reach det U_i = +1 for all i", d)

    choose = [0] * len(moves)
    for row, p in zip(R, piv):
        choose[p] = row[-1]
    U = [M.copy() for M in d.U]
    for mv, on in zip(moves, choose):
        if on:
            for lvl, col in mv:
                U[lvl][:, col] *= -1
    return replace(d, U=tuple(U))
