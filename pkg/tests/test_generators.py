import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from svdcomplex.chain_complex import ChainComplex, exact_homology, validate
from svdcomplex.complex_svd import svd_by_projection
from svdcomplex.generators import (
    GeneratorConfig,
    dims_from_ranks,
    faces_from_generators,
    perturb,
    random_complex,
    sample_squarefree_monomials,
    simplicial_chain_complex,
    spectral_separation,
    stanley_reisner_chain,
    stanley_reisner_from_generators,
)
from svdcomplex.matrix_kernel import exact_rank


def smith_diagonal(M):
    """Invariant factors of an integer matrix by unimodular row and column operations."""
    A = [list(map(int, row)) for row in M]
    m = len(A)
    n = len(A[0]) if m else 0
    diag = []
    t = 0
    while t < min(m, n):
        nz = [(abs(A[i][j]), i, j) for i in range(t, m) for j in range(t, n) if A[i][j]]
        if not nz:
            break
        _, i, j = min(nz)
        A[t], A[i] = A[i], A[t]
        for row in A:
            row[t], row[j] = row[j], row[t]
        done = False
        while not done:
            done = True
            for i in range(t + 1, m):
                q = A[i][t] // A[t][t]
                if q:
                    A[i] = [a - q * b for a, b in zip(A[i], A[t])]
                if A[i][t]:
                    A[t], A[i] = A[i], A[t]
                    done = False
            for j in range(t + 1, n):
                q = A[t][j] // A[t][t]
                if q:
                    for row in A:
                        row[j] -= q * row[t]
                if A[t][j]:
                    for row in A:
                        row[t], row[j] = row[j], row[t]
                    done = False
            if done:
                # the pivot must divide the remaining block
                bad = [(i, j) for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % A[t][t]]
                if bad:
                    i, _ = bad[0]
                    A[t] = [a + b for a, b in zip(A[t], A[i])]
                    done = False
        diag.append(abs(A[t][t]))
        t += 1
    return diag


def betti_via_smith(C: ChainComplex):
    ranks = []
    for A in C.differentials:
        rows = [[int(x) for x in row] for row in A.row_lists()]
        ranks.append(len(smith_diagonal(rows)) if A.rows and A.cols else 0)
    rr = [0, *ranks, 0]
    return tuple(c - rr[i] - rr[i + 1] for i, c in enumerate(C.ranks))


def test_smith_helper_on_known_matrix():
    assert smith_diagonal([[2, 4, 4], [-6, 6, 12], [10, -4, -16]]) == [2, 6, 12]


# --- random integer complexes -------------------------------------------------

def test_dims_from_ranks():
    assert dims_from_ranks((1, 1, 1, 1), (2, 2, 2)) == (3, 5, 5, 3)
    assert dims_from_ranks((2, 3, 2, 1), (5, 13, 13)) == (7, 21, 28, 14)
    with pytest.raises(ValueError):
        dims_from_ranks((1, 1), (1, 1))


def test_small_shape():
    C = random_complex((1, 1, 1, 1), (2, 2, 2))
    assert C.ranks == (3, 5, 5, 3) and C.field == "QQ"
    assert exact_homology(C) == (1, 1, 1, 1)


def test_first_benchmark_shape():
    C = random_complex((2, 3, 2, 1), (5, 13, 13), GeneratorConfig(seed=3))
    assert C.ranks == (7, 21, 28, 14)
    assert exact_homology(C) == (2, 3, 2, 1)


def test_two_term_isomorphism():
    C = random_complex((0, 0), (4,), GeneratorConfig(seed=1))
    assert exact_rank(C[1]) == 4


def test_needs_a_differential():
    with pytest.raises(ValueError):
        random_complex((0,), ())


def test_generator_config_validation():
    with pytest.raises(ValueError):
        GeneratorConfig(coefficient_bound=0)
    with pytest.raises(ValueError):
        GeneratorConfig(unimodular_steps=-1)


def test_deterministic_per_seed():
    a = random_complex((1, 2, 1), (3, 3), GeneratorConfig(seed=9))
    b = random_complex((1, 2, 1), (3, 3), GeneratorConfig(seed=9))
    c = random_complex((1, 2, 1), (3, 3), GeneratorConfig(seed=10))
    assert a == b and a != c


def test_entries_are_integers():
    C = random_complex((2, 3, 2, 1), (5, 13, 13), GeneratorConfig(seed=0))
    assert all(x.denominator == 1 for A in C.differentials for x in A.entries)


def test_contract_over_many_seeds():
    rng = np.random.default_rng(99)
    checked = 0
    for seed in range(500):
        n = int(rng.integers(1, 4))
        r = [int(x) for x in rng.integers(0, 9, n)]
        h = [int(x) for x in rng.integers(0, 4, n + 1)]
        if max(dims_from_ranks(h, r)) > 30:
            continue
        C = random_complex(h, r, GeneratorConfig(seed=seed, simple_spectra=False))
        assert validate(C) == 0
        assert exact_homology(C) == tuple(h)
        checked += 1
    assert checked >= 400


def test_simple_spectra_are_separated():
    for seed in range(10):
        C = random_complex((1, 2, 2, 1), (3, 4, 3), GeneratorConfig(seed=seed))
        assert spectral_separation(C) > 1e-3


@settings(max_examples=20)
@given(st.integers(0, 10**6), st.integers(1, 3))
def test_unimodular_steps_knob_keeps_contract(seed, bound):
    cfg = GeneratorConfig(seed=seed, unimodular_steps=12, coefficient_bound=bound, simple_spectra=False)
    C = random_complex((1, 2, 1), (2, 3), cfg)
    assert exact_homology(C) == (1, 2, 1)


# --- Stanley-Reisner complexes ------------------------------------------------

def _faces_brute_force(k, gens):
    gens = [set(g) for g in gens]
    return [f for d in range(1, k + 1) for f in itertools.combinations(range(k), d)
            if not any(g <= set(f) for g in gens)]


def test_hollow_triangle():
    C = stanley_reisner_from_generators(3, [(0, 1, 2)])
    assert C.ranks == (3, 3) and exact_homology(C) == (1, 1)


def test_full_simplex():
    C = stanley_reisner_from_generators(3, [])
    assert C.ranks == (3, 3, 1) and exact_homology(C) == (1, 0, 0)


def test_isolated_points_get_an_empty_top_space():
    C = stanley_reisner_from_generators(3, [(0, 1), (0, 2), (1, 2)])
    assert C.ranks == (3, 0) and exact_homology(C) == (3, 0)


def test_degree_one_generator_drops_a_vertex():
    C = stanley_reisner_from_generators(4, [(3,), (0, 1, 2)])
    assert C.ranks[0] == 3


def test_empty_complex_is_rejected():
    with pytest.raises(ValueError):
        stanley_reisner_from_generators(3, [()])


def test_boundary_signs():
    C = simplicial_chain_complex([(0, 1, 2)])
    # edges (0,1), (0,2), (1,2); d[0,1,2] = [1,2] - [0,2] + [0,1]
    assert [x for x in C[2].entries] == [1, -1, 1]
    assert validate(C) == 0


def test_sampled_monomials():
    gens = sample_squarefree_monomials(8, 20, seed=5)
    assert len(gens) == 20 == len(set(gens))
    assert all(2 <= len(g) <= 5 and list(g) == sorted(set(g)) for g in gens)
    assert sample_squarefree_monomials(8, 20, seed=5) == gens
    assert all(len(g) <= 2 for g in sample_squarefree_monomials(3, 3, seed=0))


def test_sampling_errors():
    with pytest.raises(ValueError):
        sample_squarefree_monomials(2, 1, seed=0)
    with pytest.raises(RuntimeError):
        sample_squarefree_monomials(3, 4, seed=0)  # only three square-free quadrics exist


@settings(max_examples=25)
@given(st.integers(3, 8), st.integers(1, 12), st.integers(0, 10**6))
def test_stanley_reisner_homology_matches_smith_form(k, N, seed):
    N = min(N, k * (k - 1) // 2)
    gens = sample_squarefree_monomials(k, N, seed)
    assert sorted(faces_from_generators(k, gens)) == sorted(_faces_brute_force(k, gens))
    C = stanley_reisner_from_generators(k, gens)
    assert validate(C) == 0
    assert exact_homology(C) == betti_via_smith(C)


def test_stanley_reisner_draw_float_pipeline_agrees():
    for k, N in ((8, 20), (9, 21)):
        C = stanley_reisner_chain(k, N, GeneratorConfig(seed=0))
        assert validate(C) == 0
        assert svd_by_projection(C.to_float()).homology == exact_homology(C)


# --- perturbation -------------------------------------------------------------

def test_perturb_keeps_zeros_and_is_seeded(golden):
    Z = ChainComplex((2, 2, 2), (np.array([[0.0, 1.0], [0.0, 0.0]]), np.array([[1.0, 0.0], [0.0, 0.0]])))
    P = perturb(Z, 1e-3, 0)
    for A, B in zip(P.differentials, Z.differentials):
        assert np.array_equal(A == 0, B == 0)
    a, b = perturb(golden, 1e-3, 4), perturb(golden, 1e-3, 4)
    assert all(np.array_equal(x, y) for x, y in zip(a.differentials, b.differentials))


def test_perturb_bound(golden):
    P = perturb(golden, 1e-3, 1)
    for A, B in zip(P.differentials, golden.differentials):
        mask = B != 0
        assert np.all(np.abs(A[mask] / B[mask] - 1) <= 1e-3)


def test_perturb_tiny_noise(golden):
    assert validate(perturb(golden, 1e-12, 2)) <= 1e-11


def test_perturb_domain(golden):
    for eps in (0.0, 1.0, -1e-3):
        with pytest.raises(ValueError):
            perturb(golden, eps, 0)

