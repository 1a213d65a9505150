import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from maxges.certifier import (FORBIDDEN_FORMS, GES, NOT_GES, SCREEN_PAIRS, UNKNOWN, InvalidClassMember, certify_exact,
                              certify_numeric, forbidden_block, match_forbidden_forms, necessary_screen_3q,
                              random_forbidden_generator, solved_class_check, solved_class_matrix)
from maxges.corpus import corpus_ghz_w, load_fixture
from maxges.cuts import Bipartition
from maxges.linalg import ExactMatrix, NotExactError
from maxges.seesaw import SeesawConfig
from maxges.subspace import GeneratorMatrix, Subspace, SystemShape, candidate_ges, membership_residual, \
    random_generator_matrix

SHAPE3 = SystemShape(3, 2)


def gen(rows, shape=SHAPE3):
    return GeneratorMatrix(shape, ExactMatrix(rows))


def identity3():
    return gen([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])


def _is_biproduct(w, cut, d):
    n = cut.n
    t = np.asarray(w).reshape([d] * n).transpose([p - 1 for p in cut.sigma]).reshape(d ** cut.k, -1)
    s = np.linalg.svd(t, compute_uv=False)
    return s[1] < 1e-9 * s[0] if len(s) > 1 else True


def test_identity_is_not_ges_with_singlet_witness():
    r = certify_exact(identity3())
    assert r.verdict == NOT_GES
    rec = next(c for c in r.cuts if c.outcome == "fail")
    assert rec.cut == "B|AC"
    w = np.asarray(rec.witness).reshape(2, 2, 2)  # axes A, B, C
    ac_b = w.transpose(0, 2, 1).reshape(4, 2)
    u, s, vh = np.linalg.svd(ac_b)
    assert s[1] < 1e-12
    singlet = np.array([0, 1, -1, 0]) / np.sqrt(2)
    assert abs(abs(np.vdot(singlet, u[:, 0])) - 1) < 1e-12
    assert membership_residual(candidate_ges(identity3()), r.witness) < 1e-9


def test_solved_class_examples():
    assert certify_exact(gen(solved_class_matrix(2, [[2, 1], [1, 2]]).tolist())).verdict == GES
    assert solved_class_check(2, [[2, 1], [1, 2]])
    assert solved_class_check(1, [[1, 2], [3, 5]])
    assert not solved_class_check(2, [[1, 1], [1, 2]])
    with pytest.raises(InvalidClassMember):
        solved_class_check(2, [[2, 1], [2, 1]])
    with pytest.raises(InvalidClassMember):
        solved_class_check(0, [[1, 0], [0, 1]])


def test_four_qubit_fixture_is_ges():
    fx = load_fixture("four_qubit")
    r = certify_exact(gen(fx["matrix"], SystemShape(4, 2)))
    assert r.verdict == GES
    methods = {c.cut: c.method for c in r.cuts}
    assert methods["AB|CD"] == "exact-groebner" and methods["B|ACD"] == "exact-gcd"
    assert all(c.detail["minors"] == 126 for c in r.cuts if c.method == "exact-groebner")


def test_float_input_rejected():
    with pytest.raises(NotExactError):
        certify_exact(identity3().to_float())


def test_budget_exhaustion_gives_unknown():
    shape = SystemShape(4, 2)
    g = GeneratorMatrix(shape, ExactMatrix.identity(8))
    only = [Bipartition.parse("AD|BC", 4)]
    assert certify_exact(g, budget=5, cuts=only).verdict == UNKNOWN
    assert certify_exact(g, cuts=only).verdict == NOT_GES
    # a verified witness on another cut still settles the verdict
    assert certify_exact(g, budget=5).verdict == NOT_GES


def test_report_deterministic():
    a = json.dumps(certify_exact(identity3()).to_dict(), sort_keys=True)
    b = json.dumps(certify_exact(identity3()).to_dict(), sort_keys=True)
    assert a == b
    s = corpus_ghz_w(3)
    assert certify_numeric(s).to_dict() == certify_numeric(s).to_dict()
    assert "seconds" not in a and "seconds" in json.dumps(certify_exact(identity3()).to_dict(timings=True))


def test_numeric_examples():
    r = certify_numeric(corpus_ghz_w(3))
    assert r.verdict == GES and r.label == "GES-numeric"
    assert r.max_overlap < 1 - 1e-6
    v = candidate_ges(identity3()).to_float()
    r = certify_numeric(v, shape=SHAPE3)
    rec = {c.cut: c for c in r.cuts}
    assert r.verdict == NOT_GES and abs(rec["B|AC"].overlap - 1) < 1e-9
    full = Subspace.from_vectors(np.eye(8), SHAPE3, "float")
    r = certify_numeric(full, SeesawConfig(restarts=4))
    assert all(abs(c.overlap - 1) < 1e-12 for c in r.cuts) and r.verdict == NOT_GES


def test_numeric_shape_mismatch():
    with pytest.raises(ValueError):
        certify_numeric(corpus_ghz_w(3), shape=SystemShape(4, 2))


def test_near_miss_is_not_refuted():
    """Exact GES whose biproduct overlap comes within 2e-9 of one on a cut."""
    g = gen([[-1, 0, -1, 3], [1, -3, 2, -2], [0, 2, -2, -1], [3, -1, -3, 3]])
    assert certify_exact(g).verdict == GES
    r = certify_numeric(candidate_ges(g).to_float(), shape=SHAPE3)
    assert r.verdict == GES
    assert any("near_miss_residual" in c.detail for c in r.cuts)


@given(st.integers(0, 10 ** 6))
@settings(max_examples=25, deadline=None)
def test_witnesses_are_sound(seed):
    rng = np.random.default_rng(seed)
    g = random_generator_matrix(SHAPE3, rng, -2, 2)
    r = certify_exact(g)
    v = candidate_ges(g)
    for c in r.cuts:
        if c.witness is not None:
            assert membership_residual(v, c.witness) < 1e-9
            assert _is_biproduct(c.witness, Bipartition(3, c.S), 2)
    assert (r.verdict == NOT_GES) == (r.witness is not None)


# -- forbidden-form screen -------------------------------------------------------

def test_screen_identity_matches_family_v():
    res = necessary_screen_3q(identity3())
    assert not res.passed
    first = res.failures[0]
    assert first.rows == (0, 1) and "v" in first.forms
    assert first.params["xi1"] == 0 and first.params["xi2"] == 0


def test_screen_passes_solved_instance():
    g = gen(solved_class_matrix(2, [[2, 1], [1, 2]]).tolist())
    assert necessary_screen_3q(g).passed


def test_screen_form_ii():
    g = gen([[0, 1, 0, -1], [0, 0, 1, 1], [1, 0, 0, 0], [0, 0, 0, 1]])
    res = necessary_screen_3q(g)
    f = res.failures[0]
    assert f.rows == (0, 1) and "ii" in f.forms and f.params["xi"] == 1
    assert certify_exact(g).verdict == NOT_GES


def test_screen_shape_check():
    with pytest.raises(ValueError):
        necessary_screen_3q(GeneratorMatrix(SystemShape(4, 2), ExactMatrix.identity(8)))


@pytest.mark.parametrize("form", FORBIDDEN_FORMS)
def test_forbidden_blocks_match_their_form(form):
    block = forbidden_block(form, [1, 2], [0, 1], [3, -1], [2, 2], xi1=2, xi2=-1, alpha=3)
    cols = [(block[0][k], block[1][k]) for k in range(4)]
    forms, _ = match_forbidden_forms(cols, lambda x: x == 0)
    assert form in forms


@pytest.mark.parametrize("pair", SCREEN_PAIRS)
@pytest.mark.parametrize("form", FORBIDDEN_FORMS)
def test_embedded_forms_are_not_ges(pair, form):
    g = random_forbidden_generator(np.random.default_rng([SCREEN_PAIRS.index(pair), FORBIDDEN_FORMS.index(form)]), pair, form)
    assert not necessary_screen_3q(g).passed
    r = certify_exact(g)
    assert r.verdict == NOT_GES and r.witness is not None
