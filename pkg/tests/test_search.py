from dataclasses import replace

import numpy as np
import pytest

from nilproj.corank1 import lower_bound, nu_corank1, nu_rank1, optimal_projection
from nilproj.errors import DomainError, NotIsometry
from nilproj.matcore import max_abs, qr_isometry
from nilproj.search import SearchConfig, conjecture_table, objective, propose, random_walk_minimize

SMALL = dict(starts=2, steps_per_start=3000, patience=200)


def range_isometry(P, r):
    w, V = np.linalg.eigh(P)
    return qr_isometry(V[:, -r:])


def test_config_validation():
    with pytest.raises(DomainError):
        SearchConfig(r=4, n=3)
    with pytest.raises(DomainError):
        SearchConfig(r=1, n=3, decay=1.0)
    with pytest.raises(DomainError):
        SearchConfig(r=1, n=3, starts=0)


def test_objective_examples(fixture_matrix):
    assert objective(np.eye(5)[:, :2]) == pytest.approx(1.0, abs=1e-12)
    assert objective(range_isometry(fixture_matrix("p24"), 2)) == pytest.approx(1 / np.sqrt(2), abs=1e-4)
    assert objective(range_isometry(optimal_projection(4), 3)) == pytest.approx(nu_corank1(4), abs=1e-6)


def test_objective_rejects_non_isometry():
    with pytest.raises(NotIsometry):
        objective(np.ones((3, 1)))


def test_propose_zero_step(rng):
    V = qr_isometry(rng.standard_normal((5, 2)) + 1j * rng.standard_normal((5, 2)))
    assert max_abs(propose(V, 0.0, np.random.default_rng(0)) - V) < 1e-12


def test_propose_is_deterministic_and_isometric(rng):
    V = qr_isometry(rng.standard_normal((6, 3)))
    a = propose(V, 0.3, np.random.default_rng(7))
    b = propose(V, 0.3, np.random.default_rng(7))
    assert np.array_equal(a, b)
    for flags in [(False, False), (True, False), (False, True), (True, True)]:
        W = propose(V, 0.3, np.random.default_rng(11), *flags)
        assert max_abs(W.conj().T @ W - np.eye(3)) < 1e-12
        if flags[0]:
            assert np.all(W.imag == 0)


def test_persymmetric_bias_perturbation_is_symmetric():
    V = np.zeros((4, 1), dtype=complex)
    V[0] = 1
    rng_a, rng_b = np.random.default_rng(3), np.random.default_rng(3)
    G = rng_b.standard_normal((4, 1)) + 1j * rng_b.standard_normal((4, 1))
    G = (G + np.conj(G[::-1])) / 2
    np.testing.assert_allclose(propose(V, 0.1, rng_a, persymmetric_bias=True), qr_isometry(V + 0.1 * G))


def test_search_result_invariants():
    cfg = SearchConfig(r=2, n=4, seed=5, **SMALL)
    res = random_walk_minimize(cfg, record_trace=True)
    V = res.best_isometry
    assert max_abs(res.best_projection - V @ V.conj().T) < 1e-10
    assert res.best_objective == res.profile.max_norm
    assert res.best_objective >= lower_bound(2, 4) - 1e-9
    assert res.best_objective == pytest.approx(min(res.per_start_bests), abs=1e-12)
    assert len(res.per_start_bests) == cfg.starts
    for trace in res.traces:
        assert all(b < a for a, b in zip(trace, trace[1:]))
        assert trace[-1] in res.per_start_bests


def test_search_is_deterministic():
    cfg = SearchConfig(r=1, n=3, seed=99, **SMALL)
    a, b = random_walk_minimize(cfg), random_walk_minimize(cfg)
    assert a.per_start_bests == b.per_start_bests
    assert np.array_equal(a.best_isometry, b.best_isometry)


def test_search_parallel_matches_serial():
    cfg = SearchConfig(r=1, n=3, seed=4, starts=2, steps_per_start=500)
    assert random_walk_minimize(cfg, workers=2).per_start_bests == random_walk_minimize(cfg).per_start_bests


def test_search_seed_changes_result():
    cfg = SearchConfig(r=1, n=3, seed=1, **SMALL)
    assert random_walk_minimize(cfg).per_start_bests != random_walk_minimize(replace(cfg, seed=2)).per_start_bests


def test_full_rank_search_is_identity():
    res = random_walk_minimize(SearchConfig(r=3, n=3, starts=1, steps_per_start=10))
    assert res.best_objective == pytest.approx(1.0, abs=1e-9)


def test_small_search_reaches_rank_one_value():
    res = random_walk_minimize(SearchConfig(r=1, n=3, seed=0, starts=2, steps_per_start=8000))
    assert res.best_objective == pytest.approx(nu_rank1(3), abs=2e-3)


def test_real_only_search_stays_real():
    res = random_walk_minimize(SearchConfig(r=1, n=3, seed=0, real_only=True, **SMALL))
    assert np.all(res.best_isometry.imag == 0)
    assert res.best_objective == pytest.approx(nu_rank1(3), abs=2e-3)


def test_conjecture_table_small():
    rows = conjecture_table(2, SearchConfig(r=1, n=1, seed=3, starts=2, steps_per_start=6000))
    assert [(row.r, row.n) for row in rows] == [(1, 1), (1, 2), (2, 2)]
    by_cell = {(row.r, row.n): row for row in rows}
    assert by_cell[(2, 2)].nu_estimate == pytest.approx(1, abs=1e-9) 
    assert by_cell[(2, 2)].nu_formula == pytest.approx(1, abs=1e-15)
    assert by_cell[(1, 2)].nu_estimate == pytest.approx(0.70711, abs=2e-3)
    with pytest.raises(DomainError):
        conjecture_table(1)
