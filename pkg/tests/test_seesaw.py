import numpy as np
import pytest

from maxges.corpus import corpus_ghz_w
from maxges.linalg import ExactMatrix
from maxges.seesaw import SeesawConfig, assemble_state, grouped_operator, seesaw_max
from maxges.subspace import GeneratorMatrix, SystemShape, candidate_ges


def test_config_validation():
    with pytest.raises(ValueError):
        SeesawConfig(tol=1e-6, found=1 - 1e-7)
    with pytest.raises(ValueError):
        SeesawConfig(restarts=0)


def test_assemble_state_matches_kron():
    rng = np.random.default_rng(0)
    a, b, c = (rng.standard_normal(2) for _ in range(3))
    # groups [[1], [0, 2]]: first factor on party B, second on A and C
    ac = np.kron(a, c)
    v = assemble_state([b, ac], [2, 2, 2], [[1], [0, 2]])
    np.testing.assert_allclose(v, np.kron(np.kron(a, b), c))


def test_grouped_operator_expectation():
    rng = np.random.default_rng(1)
    h = rng.standard_normal((8, 8)) + 1j * rng.standard_normal((8, 8))
    h = h + h.conj().T
    groups = [[2], [0, 1]]
    t = grouped_operator(h, [2, 2, 2], groups).reshape(8, 8)
    x, y = rng.standard_normal(2), rng.standard_normal(4)
    psi = assemble_state([x, y], [2, 2, 2], groups)
    assert np.vdot(psi, h @ psi) == pytest.approx(np.vdot(np.kron(x, y), t @ np.kron(x, y)))


def test_identity_ges_reaches_one_on_b_cut():
    v = candidate_ges(GeneratorMatrix(SystemShape(3, 2), ExactMatrix.identity(4)))
    r = seesaw_max(v.projector(), [2, 2, 2], [[1], [0, 2]], SeesawConfig())
    assert r.value == pytest.approx(1, abs=1e-9)


def _grid_oracle(p):
    """Max over a Bloch-sphere grid for party A of the top eigenvalue of <a|P|a>."""
    t = p.reshape(2, 4, 2, 4)
    best = 0.0
    for th in np.linspace(0, np.pi, 121):
        for ph in np.linspace(0, 2 * np.pi, 61):
            a = np.array([np.cos(th / 2), np.exp(1j * ph) * np.sin(th / 2)])
            best = max(best, np.linalg.eigvalsh(np.einsum("i,ijkl,k->jl", a.conj(), t, a))[-1])
    return best


def test_ghz_w_stays_below_one():
    p = corpus_ghz_w(3).projector()
    oracle = _grid_oracle(p)
    for groups in ([[0], [1, 2]], [[1], [0, 2]], [[2], [0, 1]]):
        r = seesaw_max(p, [2, 2, 2], groups, SeesawConfig())
        assert r.value < 1 - 1e-6
        # symmetric span: every cut has the same optimum
        assert oracle - 1e-12 <= r.value <= oracle + 1e-4


def test_full_space_hits_one_first_sweep():
    r = seesaw_max(np.eye(8), [2, 2, 2], [[0], [1, 2]], SeesawConfig(), record_history=True)
    assert np.allclose(r.history[1], 1)
    assert (r.sweeps <= 2).all()


@pytest.mark.parametrize("seed", range(5))
def test_monotone_and_converges(seed):
    rng = np.random.default_rng(seed)
    h = rng.standard_normal((16, 16)) + 1j * rng.standard_normal((16, 16))
    h = h + h.conj().T
    r = seesaw_max(h, [2] * 4, [[0], [1], [2, 3]], SeesawConfig(seed=seed), record_history=True)
    hist = np.array(r.history)
    assert (np.diff(hist, axis=0) >= -1e-12).all()
    assert r.converged.mean() >= 0.99
    assert r.value <= np.linalg.eigvalsh(h)[-1] + 1e-9


def test_rejects_non_hermitian():
    with pytest.raises(ValueError):
        seesaw_max(np.triu(np.ones((4, 4))), [2, 2], [[0], [1]], SeesawConfig())


def test_warm_start_is_never_worse():
    rng = np.random.default_rng(3)
    h = rng.standard_normal((8, 8))
    h = h + h.T
    cold = seesaw_max(h, [2, 2, 2], [[0], [1], [2]], SeesawConfig(restarts=4))
    warm = seesaw_max(h, [2, 2, 2], [[0], [1], [2]], SeesawConfig(restarts=4), init=cold.factors)
    assert warm.value >= cold.value - 1e-12
