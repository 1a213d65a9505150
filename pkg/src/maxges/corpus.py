"""Worked examples as executable fixtures.

Every printed vector and matrix lives in a JSON file under ``data/``; this
module turns them into subspaces and runs the checks each case promises.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from typing import Any, Callable

import numpy as np

from .certifier import GES, NOT_GES, certify_exact, certify_numeric, necessary_screen_3q, solved_class_check, \
    solved_class_matrix
from .linalg import ExactMatrix, gq, parse_exact
from .numrange import ges_check_via_range
from .io import parse_kets
from .seesaw import SeesawConfig
from .subspace import GeneratorMatrix, Subspace, SystemShape, candidate_ges, direct_sum_check, perp_basis, \
    subspace_distance

DISTANCE_TOL = 1e-9
GRAM_TOL = 1e-10


@lru_cache(maxsize=None)
def load_fixture(name: str) -> dict:
    text = resources.files("maxges").joinpath("data", f"{name}.json").read_text(encoding="utf-8")
    return json.loads(text)


@dataclass
class CorpusCase:
    name: str
    shape: SystemShape
    citation: str
    expected_verdict: str
    expected_dim: int
    generator: GeneratorMatrix | None = None
    basis: Subspace | None = None
    mode: str = "exact"  # how the verdict is obtained: exact | numeric
    extra: dict[str, Any] = field(default_factory=dict)

    def subspace(self) -> Subspace:
        if self.basis is not None:
            return self.basis
        return candidate_ges(self.generator)


@dataclass
class CaseResult:
    name: str
    passed: bool
    verdict: str
    checks: dict[str, bool]
    info: dict[str, Any] = field(default_factory=dict)


# -- subspaces ---------------------------------------------------------------

def ghz_state(n: int) -> np.ndarray:
    v = np.zeros(2 ** n, dtype=complex)
    v[0] = v[-1] = 1 / np.sqrt(2)
    return v


def w_state(n: int) -> np.ndarray:
    v = np.zeros(2 ** n, dtype=complex)
    v[[1 << j for j in range(n)]] = 1 / np.sqrt(n)
    return v


def corpus_ghz_w(n: int) -> Subspace:
    if n < 3:
        raise ValueError("GHZ/W example needs n >= 3")
    return Subspace.from_vectors([ghz_state(n), w_state(n)], SystemShape(n, 2), "float", label=f"ghz_w_{n}")


def upb_member(alpha) -> list:
    a = gq(alpha)
    first = [gq(1), a + a ** 3, a ** 2 + a ** 6]
    second = [gq(1), a ** 3, a ** 6]
    third = [gq(1), a, a ** 2]
    return [x * y * z for x in first for y in second for z in third]


def corpus_qutrit_upb(sample_alphas=None) -> tuple[list[list], Subspace]:
    """Product family members at ``sample_alphas`` and the orthocomplement of their span."""
    if sample_alphas is None:
        sample_alphas = [parse_exact(a) for a in load_fixture("small_cases")["qutrit_upb"]["alphas"]]
    alphas = [gq(a) for a in sample_alphas]
    if len(set(alphas)) != len(alphas):
        raise ValueError("alpha samples must be distinct")
    if len(alphas) < 15:
        raise ValueError(f"need at least 15 alpha samples, got {len(alphas)}")
    family = [upb_member(a) for a in alphas]
    span = Subspace.from_vectors(family, SystemShape(3, 3), "exact")
    if span.dim != 15:
        raise ValueError(f"samples span only {span.dim} dimensions")
    comp = span.complement()
    return family, Subspace(comp.ambient, comp.basis, comp.backend, comp.shape, "qutrit_upb")


def _basis_from_kets(kets: list[str], shape: SystemShape, label: str) -> Subspace:
    vecs = [parse_kets(k, shape.d, shape.n) for k in kets]
    return Subspace.from_vectors(vecs, shape, "exact", label=label)


def corpus_decomposition() -> dict[str, Subspace]:
    fx = load_fixture("decomposition")
    shape = SystemShape(fx["n"], fx["d"])
    return {name: _basis_from_kets(kets, shape, name) for name, kets in fx["parts"].items()}


def decomposition_complement_vector(a0, b0, d0) -> list:
    """The listed general vector orthogonal to ges1 and the first two ges2 vectors."""
    fx = load_fixture("decomposition")
    values = {"a0": gq(a0), "b0": gq(b0), "d0": gq(d0)}
    out = [gq(0)] * 8
    for ket, expr in fx["complement_family"]["terms"].items():
        acc = gq(0)
        for sign, name in _linear_terms(expr):
            acc = acc + sign * values[name]
        out[int(ket, 2)] = acc
    return out


def _linear_terms(expr: str) -> list[tuple[int, str]]:
    out, sign, tok = [], 1, ""
    for ch in expr + "+":
        if ch in "+-":
            if tok:
                out.append((sign, tok))
            sign, tok = (1 if ch == "+" else -1), ""
        else:
            tok += ch
    return out


@dataclass
class ListedBasisCase:
    case: CorpusCase
    printed: list[list[int]]
    corrected: list[list[int]]
    errata: dict[int, dict]


def _listed_case(name: str) -> ListedBasisCase:
    fx = load_fixture(name)
    shape = SystemShape(fx["n"], fx["d"])
    g = GeneratorMatrix(shape, ExactMatrix(fx["matrix"]))
    printed = [parse_kets(k, shape.d, shape.n) for k in fx["basis"]]
    errata = {int(k): v for k, v in fx.get("errata", {}).items()}
    corrected = [parse_kets(errata[i]["corrected"], shape.d, shape.n) if i in errata else v
                 for i, v in enumerate(printed)]
    case = CorpusCase(name, shape, fx["citation"], fx["expected_verdict"], fx["expected_dim"], generator=g)
    return ListedBasisCase(case, printed, corrected, errata)


def corpus_appendix_bases() -> tuple[ListedBasisCase, ListedBasisCase]:
    return _listed_case("four_qubit"), _listed_case("three_qutrit")


def orthogonality_defects(g: GeneratorMatrix, vectors) -> list[int]:
    """Indices of vectors with a nonzero exact inner product against the spanning family."""
    perp = perp_basis(g)
    bad = []
    for i, v in enumerate(vectors):
        ev = [gq(x) for x in v]
        for row in perp.vectors():
            if sum((a.conjugate() * b for a, b in zip(row, ev)), gq(0)):
                bad.append(i)
                break
    return bad


# -- case list ------------------------------------------------------------------

def all_cases() -> list[CorpusCase]:
    sc = load_fixture("small_cases")
    cases = []
    for n in sc["ghz_w"]["ns"]:
        cases.append(CorpusCase(f"ghz_w_{n}", SystemShape(n, 2), sc["ghz_w"]["citation"], GES, 2,
                                basis=corpus_ghz_w(n), mode="numeric"))
    ident = sc["identity_3q"]
    shape3 = SystemShape(3, 2)
    cases.append(CorpusCase("identity_3q", shape3, ident["citation"], ident["expected_verdict"],
                            ident["expected_dim"], generator=GeneratorMatrix(shape3, ExactMatrix(ident["matrix"]))))
    for inst in sc["solved_class"]["instances"]:
        x, a = inst["x"], inst["a"]
        name = f"solved_class_x{x}_" + "_".join(str(v) for row in a for v in row)
        cases.append(CorpusCase(name, shape3, sc["solved_class"]["citation"], inst["expected_verdict"], 3,
                                generator=GeneratorMatrix(shape3, solved_class_matrix(x, a)),
                                extra={"x": x, "a": a}))
    ff = sc["forbidden_form"]
    cases.append(CorpusCase("forbidden_form", shape3, ff["citation"], ff["expected_verdict"], 3,
                            generator=GeneratorMatrix(shape3, ExactMatrix(ff["matrix"]))))
    for app in corpus_appendix_bases():
        app.case.extra["listed"] = app
        cases.append(app.case)
    upb = sc["qutrit_upb"]
    _, comp = corpus_qutrit_upb()
    cases.append(CorpusCase("qutrit_upb", SystemShape(3, 3), upb["citation"], upb["expected_verdict"],
                            upb["expected_dim"], basis=comp, mode="numeric"))
    fx = load_fixture("decomposition")
    for name, sub in corpus_decomposition().items():
        cases.append(CorpusCase(f"decomposition_{name}", shape3, fx["citation"], GES, sub.dim, basis=sub,
                                mode="numeric"))
    return cases


def _verdict_of(case: CorpusCase, cfg: SeesawConfig, budget: int):
    if case.mode == "exact" and case.generator is not None:
        return certify_exact(case.generator, budget=budget, seesaw=cfg)
    return certify_numeric(case.subspace().to_float(), cfg, shape=case.shape)


def run_case(case: CorpusCase, cfg: SeesawConfig | None = None, budget: int = 10 ** 6,
             with_range: bool = True) -> CaseResult:
    cfg = cfg or SeesawConfig()
    sub = case.subspace()
    report = _verdict_of(case, cfg, budget)
    checks = {"dimension": sub.dim == case.expected_dim, "verdict": report.verdict == case.expected_verdict}
    info: dict[str, Any] = {"mode": case.mode, "max_overlap": report.max_overlap}
    if with_range:
        rv = ges_check_via_range(sub.to_float().projector(), case.shape, cfg)
        checks["range_agrees"] = (rv.ges == "GES-numeric") == (report.verdict == GES)
        info["range_biproduct_max"] = rv.biproduct_max
    if "x" in case.extra:
        checks["solved_class_formula"] = solved_class_check(case.extra["x"], case.extra["a"]) == (report.verdict == GES)
    if case.name == "forbidden_form":
        checks["screen_fails"] = not necessary_screen_3q(case.generator).passed
    app = case.extra.get("listed")
    if app is not None:
        printed_bad = orthogonality_defects(case.generator, app.printed)
        corrected_bad = orthogonality_defects(case.generator, app.corrected)
        listed = Subspace.from_vectors(app.corrected, case.shape, "exact")
        info["printed_defects"] = printed_bad
        checks["listed_vectors_orthogonal"] = not corrected_bad
        checks["errata_explain_defects"] = sorted(app.errata) == printed_bad
        checks["listed_span_matches"] = (listed.dim == case.expected_dim
                                         and subspace_distance(listed, sub) < DISTANCE_TOL)
    if report.verdict == NOT_GES:
        checks["witness_present"] = report.witness is not None
    return CaseResult(case.name, all(checks.values()), report.label, checks, info)


def decomposition_checks() -> dict[str, Any]:
    parts = corpus_decomposition()
    names = sorted(parts)
    dims = tuple(parts[n].dim for n in names)
    psi3 = parse_kets("|011>+|101>-|110>", 2, 3)
    ges1 = parts["ges1"]
    ortho = all(sum(a.conjugate() * gq(b) for a, b in zip(row, psi3)) == 0 for row in ges1.vectors())
    return {"dims": dims, "direct_sum": direct_sum_check([parts[n].to_float() for n in names], GRAM_TOL),
            "psi3_in_ges2": psi3 in parts["ges2"], "psi3_perp_ges1": ortho}


def run_corpus(cfg: SeesawConfig | None = None, budget: int = 10 ** 6, progress: Callable[[CaseResult], None] | None = None,
               with_range: bool = True) -> list[CaseResult]:
    results = []
    for case in all_cases():
        r = run_case(case, cfg, budget, with_range)
        results.append(r)
        if progress:
            progress(r)
    dec = decomposition_checks()
    ok = dec["dims"] == (3, 3, 2) and dec["direct_sum"] and dec["psi3_in_ges2"] and dec["psi3_perp_ges1"]
    r = CaseResult("decomposition_direct_sum", ok, "-", {k: bool(v) if k != "dims" else v == (3, 3, 2)
                                                         for k, v in dec.items()})
    results.append(r)
    if progress:
        progress(r)
    return results
