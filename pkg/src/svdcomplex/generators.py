"""Test complexes: integer complexes with prescribed ranks and homology,
Stanley-Reisner chain complexes, and relative perturbations."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

import numpy as np

from .chain_complex import ChainComplex, KERNEL_REL_CUTOFF, laplacian


@dataclass(frozen=True)
class GeneratorConfig:
    seed: int = 0
    unimodular_steps: int | None = None   # per space; None means c_i
    coefficient_bound: int = 2
    simple_spectra: bool = True           # redraw until Laplacian spectra are well separated
    max_redraws: int = 50

    def __post_init__(self):
        if self.coefficient_bound < 1:
            raise ValueError("coefficient_bound must be at least 1")
        if self.unimodular_steps is not None and self.unimodular_steps < 0:
            raise ValueError("unimodular_steps must be non-negative")


def _unimodular_pair(n, steps, bound, rng):
    """A random unimodular integer matrix and its inverse, built from elementary row operations.

    Operations are applied in rounds over disjoint row pairs (a random
    matching), which keeps the condition number near ``(1 + bound)^rounds``
    instead of letting long dependency chains blow it up.
    """
    perm = rng.permutation(n)
    signs = rng.choice([-1, 1], size=n)
    M = np.zeros((n, n), dtype=object)
    M[np.arange(n), perm] = signs
    Minv = M.T.copy()                     # signed permutations are orthogonal
    if n < 2:
        return M, Minv
    coeffs = [a for a in range(-bound, bound + 1) if a]
    done = 0
    while done < steps:
        p = rng.permutation(n)
        for t in range(min(n // 2, steps - done)):
            j, k = int(p[2 * t]), int(p[2 * t + 1])
            a = int(rng.choice(coeffs))
            M[j, :] = M[j, :] + a * M[k, :]
            Minv[:, k] = Minv[:, k] - a * Minv[:, j]
            done += 1
    return M, Minv


def dims_from_ranks(h: Sequence[int], r: Sequence[int]) -> tuple[int, ...]:
    if len(h) != len(r) + 1:
        raise ValueError("need len(h) == len(r) + 1")
    rr = (0, *r, 0)
    c = tuple(rr[i] + rr[i + 1] + hi for i, hi in enumerate(h))
    if min(c) < 0 or min(r, default=0) < 0 or min(h) < 0:
        raise ValueError(f"infeasible ranks {tuple(r)} / homology {tuple(h)}")
    return c


def spectral_separation(C: ChainComplex) -> float:
    """Smallest relative gap between distinct-level nonzero eigenvalues of neighbouring Laplacians.

    Combines gaps inside each Laplacian spectrum and gaps between eigenvalues
    of ``Delta_{i-1}`` and ``Delta_{i+1}`` (which must not be mistaken for shared
    values of ``Delta_i``). Returns ``inf`` when there is nothing to compare.
    """
    mats = C.float_differentials()
    spectra = []
    for i in range(C.n + 1):
        w = np.linalg.eigvalsh(laplacian(mats, i)) if C.ranks[i] else np.zeros(0)
        w = np.sort(w)[::-1]
        if len(w) and w[0] > 0:
            w = w[w > KERNEL_REL_CUTOFF * w[0]]
        else:
            w = w[:0]
        spectra.append(w)
    gap = np.inf
    for w in spectra:
        if len(w) > 1:
            gap = min(gap, float(np.min((w[:-1] - w[1:]) / w[:-1])))
    for a, b in zip(spectra, spectra[2:]):
        if len(a) and len(b):
            d = np.abs(a[:, None] - b[None, :]) / np.maximum(a[:, None], b[None, :])
            gap = min(gap, float(d.min()))
    return gap


def _draw_complex(h, r, cfg, rng):
    c = dims_from_ranks(h, r)
    n = len(r)
    Ms = []
    for ci in c:
        steps = ci if cfg.unimodular_steps is None else cfg.unimodular_steps
        Ms.append(_unimodular_pair(ci, steps, cfg.coefficient_bound, rng))
    rr = (0, *r)
    offset = 0
    diffs = []
    for i in range(1, n + 1):
        S = np.zeros((c[i - 1], c[i]), dtype=object)
        for k in range(r[i - 1]):
            S[rr[i - 1] + k, k] = offset + k + 1
        offset += r[i - 1]
        A = Ms[i - 1][0].dot(S).dot(Ms[i][1])
        diffs.append(A.astype(object))
    return ChainComplex(c, [A.tolist() if A.size else A for A in diffs], field="QQ")


def random_complex(h: Sequence[int], r: Sequence[int], cfg: GeneratorConfig = GeneratorConfig()) -> ChainComplex:
    """Integer complex with ``rank A_i = r_i`` and ``dim H_i = h_i`` exactly.

    Starts from the normal form with distinct positive integer singular values
    (consecutive across levels) and conjugates each space by a random
    unimodular matrix. With ``simple_spectra`` the draw is repeated until all
    Laplacian eigenvalues are separated by more than 1e-3 relative, so the
    Laplacian method applies.
    """
    if len(r) < 1:
        raise ValueError("need at least one differential")
    h, r = tuple(int(x) for x in h), tuple(int(x) for x in r)
    dims_from_ranks(h, r)
    rng = np.random.default_rng(cfg.seed)
    C = _draw_complex(h, r, cfg, rng)
    if cfg.simple_spectra:
        for _ in range(cfg.max_redraws):
            if spectral_separation(C) > 1e-3:
                break
            C = _draw_complex(h, r, cfg, rng)
    return C


# ---------------------------------------------------------------------------
# Stanley-Reisner complexes


def _minimalize(monomials):
    gens = sorted(set(frozenset(m) for m in monomials), key=len)
    out = []
    for g in gens:
        if not any(o <= g for o in out):
            out.append(g)
    return out


def sample_squarefree_monomials(k: int, N: int, seed: int, max_attempts: int = 100):
    """``N`` distinct square-free monomials in ``k`` variables with degrees in ``[2, min(5, k-1)]``.

    Monomials are returned as sorted tuples of 0-based variable indices.
    """
    if not 3 <= k <= 16:
        raise ValueError("k must lie in [3, 16]")
    if N < 1:
        raise ValueError("N must be positive")
    top = min(5, k - 1)
    for attempt in range(max_attempts):
        rng = np.random.default_rng([seed, attempt])
        found = set()
        for _ in range(50 * N):
            deg = int(rng.integers(2, top + 1))
            found.add(tuple(sorted(int(v) for v in rng.choice(k, size=deg, replace=False))))
            if len(found) == N:
                return sorted(found)
    raise RuntimeError(f"could not draw {N} distinct monomials in {k} variables")


def faces_from_generators(k: int, generators) -> list[tuple[int, ...]]:
    """All nonempty faces: vertex sets containing no generator's support."""
    gens = [frozenset(g) for g in _minimalize(generators)]
    masks = [sum(1 << v for v in g) for g in gens]
    faces = []
    for S in range(1, 1 << k):
        if any(S & m == m for m in masks):
            continue
        faces.append(tuple(v for v in range(k) if S >> v & 1))
    return faces


def simplicial_chain_complex(faces) -> ChainComplex:
    """Non-reduced simplicial chain complex with lexicographically ordered faces.

    ``C_d`` is spanned by the ``d``-faces; ``d[v_0..v_d] = sum_j (-1)^j [.. omit v_j ..]``.
    The face list is closed under taking nonempty subsets first. A complex of
    isolated points gets an empty ``C_1`` so that it has one differential.
    """
    closed = set()
    for f in faces:
        f = tuple(sorted(set(f)))
        if f in closed:
            continue
        for d in range(1, len(f) + 1):
            closed.update(combinations(f, d))
    faces = sorted(closed)
    if not faces:
        raise ValueError("empty simplicial complex")
    top = max(len(f) for f in faces) - 1
    by_dim = [sorted(f for f in faces if len(f) == d + 1) for d in range(max(top, 1) + 1)]
    index = [{f: j for j, f in enumerate(fs)} for fs in by_dim]
    c = tuple(len(fs) for fs in by_dim)
    diffs = []
    for d in range(1, len(by_dim)):
        D = [[0] * c[d] for _ in range(c[d - 1])]
        for col, f in enumerate(by_dim[d]):
            for j in range(len(f)):
                face = f[:j] + f[j + 1:]
                D[index[d - 1][face]][col] = -1 if j % 2 else 1
        diffs.append(D)
    return ChainComplex(c, diffs, field="QQ")


def stanley_reisner_from_generators(k: int, generators) -> ChainComplex:
    return simplicial_chain_complex(faces_from_generators(k, generators))


def stanley_reisner_chain(k: int, N: int, cfg: GeneratorConfig = GeneratorConfig()) -> ChainComplex:
    """Chain complex of the Stanley-Reisner complex of ``N`` random square-free monomials."""
    gens = sample_squarefree_monomials(k, N, cfg.seed)
    return stanley_reisner_from_generators(k, gens)


# ---------------------------------------------------------------------------
# perturbation


def perturb(C, rel_eps: float, seed=0) -> ChainComplex:
    """Multiply every entry by ``1 + delta`` with ``delta`` uniform in ``[-rel_eps, rel_eps]``."""
    if not 0 < rel_eps < 1:
        raise ValueError("rel_eps must lie in (0, 1)")
    if isinstance(C, ChainComplex):
        dims, mats = C.ranks, C.float_differentials()
    else:
        mats = [np.asarray(M, dtype=float) for M in C]
        dims = (mats[0].shape[0], *(M.shape[1] for M in mats))
    rng = np.random.default_rng(seed)
    out = [M * (1 + rng.uniform(-rel_eps, rel_eps, M.shape)) for M in mats]
    return ChainComplex(dims, out)
