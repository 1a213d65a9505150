import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from maxges.linalg import ExactMatrix, I, gq
from maxges.subspace import (GeneratorMatrix, RankDeficientError, Subspace, SystemShape, candidate_ges, contains,
                             coefficient_vectors, cross_gram_norm, direct_sum_check, membership_residual,
                             moment_vector, perp_basis, random_generator_matrix, spanning_vector, subspace_distance)


def identity(n, d):
    shape = SystemShape(n, d)
    return GeneratorMatrix(shape, ExactMatrix.identity(shape.side))


@pytest.mark.parametrize("n,d,perp,ges", [(3, 2, 5, 3), (4, 2, 9, 7), (3, 3, 11, 16), (2, 3, 5, 4)])
def test_dimensions(n, d, perp, ges):
    g = identity(n, d)
    assert perp_basis(g).dim == perp
    assert candidate_ges(g).dim == ges == g.shape.ges_dim


def test_shape_validation():
    with pytest.raises(ValueError):
        SystemShape(1, 2)
    with pytest.raises(ValueError):
        GeneratorMatrix(SystemShape(3, 2), ExactMatrix.identity(3))
    with pytest.raises(RankDeficientError):
        GeneratorMatrix(SystemShape(3, 2), ExactMatrix([[1, 1, 0, 0], [1, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]))


def test_identity_ges_basis():
    v = candidate_ges(identity(3, 2))
    expected = [[0, 1, 0, 0, -1, 0, 0, 0], [0, 0, 1, 0, 0, -1, 0, 0], [0, 0, 0, 1, 0, 0, -1, 0]]
    for e in expected:
        assert contains(v, e)


def test_moment_vector():
    assert moment_vector(2, 4) == [1, 2, 4, 8]
    assert moment_vector(I, 3) == [1, I, -1]
    np.testing.assert_allclose(moment_vector(0.5, 3), [1, 0.5, 0.25])


@pytest.mark.parametrize("alpha", [0, 1, 2, -3, I, gq("1/2") + 2 * I])
def test_spanning_vectors_orthogonal_to_ges(alpha):
    rng = np.random.default_rng(3)
    g = random_generator_matrix(SystemShape(3, 2), rng)
    v = candidate_ges(g)
    s = spanning_vector(g, alpha)
    for row in v.vectors():
        assert sum((a.conjugate() * b for a, b in zip(row, s)), gq(0)) == 0
    assert contains(perp_basis(g), s)


def test_coefficient_vectors_reassemble_spanning_vector():
    rng = np.random.default_rng(4)
    g = random_generator_matrix(SystemShape(3, 3), rng)
    c = np.array([[complex(x) for x in row] for row in coefficient_vectors(g)])
    alpha = 0.3 - 0.7j
    direct = spanning_vector(g.to_float(), alpha)
    np.testing.assert_allclose(moment_vector(alpha, c.shape[0]) @ c, direct, atol=1e-12)


@given(st.integers(0, 10 ** 6))
@settings(max_examples=20, deadline=None)
def test_exact_and_float_backends_agree(seed):
    rng = np.random.default_rng(seed)
    g = random_generator_matrix(SystemShape(3, 2), rng)
    ve = candidate_ges(g)
    vf = candidate_ges(g.to_float())
    assert vf.dim == ve.dim
    assert subspace_distance(ve.to_float(), vf) < 1e-9


def test_membership_and_zero_vector():
    v = candidate_ges(identity(3, 2))
    with pytest.raises(ValueError):
        contains(v, [0] * 8)
    assert not contains(v, [1, 0, 0, 0, 0, 0, 0, 0])
    assert membership_residual(v, np.array([0, 1, 0, 0, -1, 0, 0, 0])) < 1e-15
    assert contains(v.to_float(), np.array([0, 1, 0, 0, -1 + 1e-12, 0, 0, 0]))


def test_complement_and_direct_sum():
    v = candidate_ges(identity(3, 2))
    p = perp_basis(identity(3, 2))
    assert direct_sum_check([v.to_float(), p.to_float()])
    assert cross_gram_norm(v.to_float(), p.to_float()) < 1e-12
    assert not direct_sum_check([v.to_float(), v.to_float()])
    assert subspace_distance(v.complement().to_float(), p.to_float()) < 1e-12
    assert v.complement().complement().dim == 3


def test_projector_is_projector():
    p = candidate_ges(identity(3, 3)).projector()
    np.testing.assert_allclose(p @ p, p, atol=1e-12)
    np.testing.assert_allclose(p, p.conj().T, atol=1e-12)
    assert np.trace(p).real == pytest.approx(16)


def test_from_vectors_backends():
    s = Subspace.from_vectors([[1, 0, 0, 0], [1, 1, 0, 0]])
    assert s.backend == "exact" and s.dim == 2
    f = Subspace.from_vectors([np.array([1.0, 0, 0, 0]), np.array([1.0, 1e-20, 0, 0])])
    assert f.backend == "float" and f.dim == 1


def test_digest_stable():
    g = identity(3, 2)
    assert g.digest() == identity(3, 2).digest()
    assert g.digest() != GeneratorMatrix(g.shape, ExactMatrix([[2, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])).digest()
