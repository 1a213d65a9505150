"""Deciding whether a candidate subspace is a GES.

Exact route: every cut's principal family must have full column rank for
all nonzero beta, decided through the ideal of maximal minors (binary-form
GCD for two beta components, Buchberger otherwise).  Numeric route: see-saw
search for a biproduct vector of overlap one with the subspace projector.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

from .cuts import Bipartition, LinearMatrixFamily, enumerate_cuts, minor_system, principal_family
from .linalg import ONE, ZERO, ExactMatrix, GaussianRational, NotExactError, exact_kernel, exact_rank, gq
from .poly import BudgetExhausted, GroebnerStats, binary_form_gcd, variety_is_only_origin
from .seesaw import SeesawConfig, seesaw_max
from .subspace import GeneratorMatrix, Subspace, SystemShape, candidate_ges, membership_residual

GES = "GES"
NOT_GES = "NOT_GES"
UNKNOWN = "UNKNOWN"

DEFAULT_BUDGET = 10 ** 6
WITNESS_RESIDUAL = 1e-9
POLISH_TARGET = 1e-12
POLISH_SWEEPS = 20000
POLISH_CANDIDATES = 4


class InvalidClassMember(ValueError):
    """Parameters fall outside the solved three-qubit class (x = 0 or singular block)."""


@dataclass
class CutRecord:
    cut: str
    S: tuple[int, ...]
    method: str
    outcome: str  # "pass" | "fail" | "unknown"
    witness: list[complex] | None = None
    beta: list[complex] | None = None
    g: list[complex] | None = None
    overlap: float | None = None
    detail: dict[str, Any] = field(default_factory=dict)
    seconds: float = 0.0

    def to_dict(self, timings: bool = False) -> dict:
        out = {"cut": self.cut, "S": list(self.S), "method": self.method, "outcome": self.outcome}
        if self.overlap is not None:
            out["overlap"] = _round(self.overlap)
        if self.beta is not None:
            out["beta"] = [_fmt_c(z) for z in self.beta]
        if self.witness is not None:
            out["witness"] = [_fmt_c(z) for z in self.witness]
        if self.detail:
            out["detail"] = self.detail
        if timings:
            out["seconds"] = round(self.seconds, 4)
        return out


def _round(x: float) -> float:
    return float(f"{x:.15g}")


def _fmt_c(z) -> str:
    from .linalg import format_float
    z = complex(z)
    return format_float(complex(_round(z.real) + 0.0, _round(z.imag) + 0.0))


@dataclass
class CertificateReport:
    verdict: str
    mode: str  # "exact" | "numeric"
    shape: SystemShape
    cuts: list[CutRecord]
    seed: int | None = None
    config: dict[str, Any] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)

    @property
    def label(self) -> str:
        return f"{self.verdict}-numeric" if self.mode == "numeric" and self.verdict == GES else self.verdict

    @property
    def witness(self) -> np.ndarray | None:
        for c in self.cuts:
            if c.outcome == "fail" and c.witness is not None:
                return np.asarray(c.witness, dtype=complex)
        return None

    @property
    def max_overlap(self) -> float | None:
        vals = [c.overlap for c in self.cuts if c.overlap is not None]
        return max(vals) if vals else None

    def to_dict(self, timings: bool = False) -> dict:
        return {
            "verdict": self.verdict,
            "label": self.label,
            "mode": self.mode,
            "n": self.shape.n,
            "d": self.shape.d,
            "seed": self.seed,
            "config": self.config,
            "cuts": [c.to_dict(timings) for c in self.cuts],
            "notes": self.notes,
        }


def _verdict(records: Sequence[CutRecord]) -> str:
    if any(r.outcome == "fail" and r.witness is not None for r in records):
        return NOT_GES
    if any(r.outcome != "pass" for r in records):
        return UNKNOWN
    return GES


# -- exact route ---------------------------------------------------------------

def _exact_witness(f: LinearMatrixFamily, beta: Sequence[GaussianRational]):
    x = f.evaluate(list(beta))
    ker = exact_kernel(x)
    if not ker:
        return None
    g = ker[0]
    return [complex(b) for b in beta], [complex(v) for v in g]


def _float_witness(f: LinearMatrixFamily, beta: Sequence[complex]):
    b = np.asarray(beta, dtype=complex)
    b = b / np.linalg.norm(b)
    x = f.evaluate(list(b))
    _, s, vh = np.linalg.svd(x)
    g = vh[-1].conj()
    return list(b), list(g), float(s[-1])


def _finish_witness(rec: CutRecord, f: LinearMatrixFamily, V: Subspace, beta, g) -> bool:
    w = f.witness_state(beta, g)
    w = w / np.linalg.norm(w)
    res = membership_residual(V, w)
    if res < WITNESS_RESIDUAL:
        rec.beta, rec.g, rec.witness = list(beta), list(g), list(w)
        rec.overlap = 1.0 - res * res
        rec.detail["residual"] = float(f"{res:.3g}")
        return True
    return False


def _decide_binary(rec: CutRecord, f: LinearMatrixFamily, minors, V: Subspace) -> None:
    res = binary_form_gcd(minors)
    rec.detail["gcd_degree"] = res.degree
    rec.detail["gcd"] = res.gcd.to_dump(["b0", "b1"])
    if res.degree < 1:
        rec.outcome = "pass"
        return
    rec.outcome = "fail"
    # rational roots give exact witnesses: b0 = 0, or a linear gcd factor
    exact_roots = []
    if any(r[0] == 0 for r in res.roots):
        exact_roots.append([ZERO, ONE])
    lin = [(m, c) for m, c in res.gcd.terms.items()]
    if res.degree - min(m[0] for m, _ in lin) == 1:
        # gcd = b0^s * (c1 b1 + c0 b0)
        c1 = res.gcd.terms.get((res.degree - 1, 1), ZERO)
        c0 = res.gcd.terms.get((res.degree, 0), ZERO)
        if c1:
            exact_roots.append([ONE, -c0 / c1])
    for beta in exact_roots:
        wt = _exact_witness(f, beta)
        if wt and _finish_witness(rec, f, V, *wt):
            rec.detail["witness_kind"] = "exact-root"
            return
    best = None
    for root in res.roots:
        b, g, smin = _float_witness(f, root)
        if best is None or smin < best[2]:
            best = (b, g, smin)
    if best and _finish_witness(rec, f, V, best[0], best[1]):
        rec.detail["witness_kind"] = "closed-form-root" if res.closed_form else "companion-root"


def polish_witness(V: Subspace, dims, groups, factors, max_sweeps: int = POLISH_SWEEPS,
                   chunk: int = 200) -> tuple[np.ndarray, float, float]:
    """Continue the see-saw from ``factors`` until the state is in ``V`` to
    within ``POLISH_TARGET`` or the objective stalls.

    Returns (unit state, overlap, membership residual).
    """
    P = V.projector()
    cfg = SeesawConfig(restarts=1, max_sweeps=chunk, tol=1e-300, found=0.5)
    value, state = -1.0, None
    for _ in range(max(1, max_sweeps // chunk)):
        r = seesaw_max(P, dims, groups, cfg, init=factors)
        factors = r.factors
        state = r.state / np.linalg.norm(r.state)
        res = membership_residual(V, state)
        if res < POLISH_TARGET or r.value - value < 1e-16:
            return state, r.value, res
        value = r.value
    return state, value, membership_residual(V, state)


def _seesaw_cut(V: Subspace, shape: SystemShape, cut: Bipartition, cfg: SeesawConfig, rng) -> tuple[float, dict, list | None]:
    """Best overlap, diagnostics and (if verified) a witness for one cut."""
    dims = [shape.d] * shape.n
    groups = [[p - 1 for p in cut.S], [p - 1 for p in cut.Sbar]]
    r = seesaw_max(V.projector(), dims, groups, cfg, rng)
    detail = {"converged_fraction": float(np.mean(r.converged))}
    best, witness = r.value, None
    if r.value >= cfg.found:
        # polish every restart above threshold, best first
        order = np.argsort(-r.values)
        for idx in order[:POLISH_CANDIDATES]:
            if r.values[idx] < cfg.found:
                break
            init = [f[idx] for f in r.batch_factors]
            state, val, res = polish_witness(V, dims, groups, init)
            if res < WITNESS_RESIDUAL:
                return val, detail, list(state)
            best = max(best, val)
            detail["near_miss_residual"] = float(f"{res:.3g}")
    return best, detail, witness


def _localize_numeric(rec: CutRecord, f: LinearMatrixFamily, V: Subspace, cfg: SeesawConfig, cut_index: int):
    rng = np.random.default_rng([cfg.seed, 7919, cut_index])
    best, detail, witness = _seesaw_cut(V, f.shape, f.cut, cfg, rng)
    rec.detail.update(detail)
    if witness is not None:
        rec.witness = witness
        rec.overlap = best
        rec.detail["witness_kind"] = "seesaw-localized"
        return
    rec.detail["note"] = "nontrivial variety but no witness localized numerically"


def certify_exact(g: GeneratorMatrix, budget: int = DEFAULT_BUDGET, cuts: Sequence[Bipartition] | None = None,
                  seesaw: SeesawConfig | None = None) -> CertificateReport:
    """Decide the GES property of ``candidate_ges(g)`` exactly, cut by cut."""
    if not g.exact:
        raise NotExactError("certify_exact requires an exact generator matrix")
    cfg = seesaw or SeesawConfig()
    V = candidate_ges(g).to_float()
    records = []
    cut_list = list(cuts) if cuts is not None else enumerate_cuts(g.shape)
    notes = []
    for ci, cut in enumerate(cut_list):
        t0 = time.perf_counter()
        f = principal_family(g, cut)
        minors = minor_system(f)
        method = "exact-gcd" if f.nvars == 2 else "exact-groebner"
        rec = CutRecord(cut.label, cut.S, method, "unknown")
        if all(m.is_zero() for m in minors):
            rec.outcome = "fail"
            rec.detail["all_minors_zero"] = True
            beta = [ONE] + [ZERO] * (f.nvars - 1)
            wt = _exact_witness(f, beta)
            if wt:
                _finish_witness(rec, f, V, *wt)
                rec.detail["witness_kind"] = "exact-kernel"
        elif f.nvars == 2:
            _decide_binary(rec, f, minors, V)
        else:
            stats = GroebnerStats()
            try:
                only_origin = variety_is_only_origin(minors, budget=budget, stats=stats)
                rec.outcome = "pass" if only_origin else "fail"
                if not only_origin:
                    _localize_numeric(rec, f, V, cfg, ci)
            except BudgetExhausted:
                rec.outcome = "unknown"
            rec.detail["groebner_steps"] = stats.steps
            rec.detail["groebner_pairs"] = stats.pairs
        rec.detail["minors"] = len(minors)
        rec.detail["nvars"] = f.nvars
        rec.detail["minor_degree"] = max((m.degree for m in minors), default=-1)
        rec.seconds = time.perf_counter() - t0
        records.append(rec)
        if rec.outcome == "fail" and rec.witness is None:
            notes.append(f"cut {cut.label}: rank drop proven but witness not localized")
    return CertificateReport(_verdict(records), "exact", g.shape, records, cfg.seed,
                             {"budget": budget}, notes)


# -- numeric route ----------------------------------------------------------------

def certify_numeric(s: Subspace, cfg: SeesawConfig | None = None, shape: SystemShape | None = None,
                    cuts: Sequence[Bipartition] | None = None) -> CertificateReport:
    """See-saw search for biproduct vectors in ``s`` over every bipartition."""
    cfg = cfg or SeesawConfig()
    shape = shape or s.shape
    if shape is None:
        raise ValueError("certify_numeric needs the system shape")
    if s.ambient != shape.dim:
        raise ValueError(f"subspace of ambient dimension {s.ambient} does not match d^n = {shape.dim}")
    cut_list = list(cuts) if cuts is not None else enumerate_cuts(shape, include_first=True)
    records = []
    for ci, cut in enumerate(cut_list):
        t0 = time.perf_counter()
        rng = np.random.default_rng([cfg.seed, ci])
        best, detail, witness = _seesaw_cut(s, shape, cut, cfg, rng)
        rec = CutRecord(cut.label, cut.S, "numeric-seesaw", "pass", overlap=best, detail=detail)
        if witness is not None:
            rec.outcome = "fail"
            rec.witness = witness
        elif best >= cfg.found:
            # threshold reached but polishing stalls short of the subspace:
            # no verified biproduct vector, so the cut is not refuted
            rec.detail["note"] = "near miss: overlap above threshold, witness not verified"
        rec.seconds = time.perf_counter() - t0
        records.append(rec)
    return CertificateReport(_verdict(records), "numeric", shape, records, cfg.seed,
                             {"restarts": cfg.restarts, "max_sweeps": cfg.max_sweeps, "tol": cfg.tol,
                              "found": cfg.found})


# -- three-qubit necessary screen ------------------------------------------------

SCREEN_PAIRS = ((0, 1), (2, 3), (0, 2), (1, 3))


@dataclass
class ScreenFailure:
    rows: tuple[int, int]
    submatrix: list[list]
    forms: tuple[str, ...]
    params: dict[str, Any]


@dataclass
class ScreenResult:
    passed: bool
    failures: list[ScreenFailure]


def _det2(x, y):
    return x[0] * y[1] - x[1] * y[0]


def match_forbidden_forms(cols, is_zero) -> tuple[tuple[str, ...], dict]:
    """Forbidden shapes of a rank-2 2x4 block given its columns ``a0..a3``.

    Forms: ``i``  (0, 0, c, d);  ``ii`` (0, b, c, -xi^2 b + xi c);
    ``iii`` (a, b, 0, 0);  ``iv`` (a, b, alpha a, alpha b);
    ``v`` (a, b, (xi2 - xi1^2) a + xi1 b, -xi1 xi2 a + xi2 b).
    """
    a0, a1, a2, a3 = cols
    zero = lambda v: is_zero(v[0]) and is_zero(v[1])
    forms, params = [], {}
    if zero(a0) and zero(a1):
        forms.append("i")
    if zero(a2) and zero(a3):
        forms.append("iii")
    if zero(a0):
        m12 = _det2(a1, a2)
        if not is_zero(m12):
            # a3 = g1 a1 + g2 a2
            g1 = _det2(a3, a2) / m12
            g2 = _det2(a1, a3) / m12
            if is_zero(g1 + g2 * g2):
                forms.append("ii")
                params["xi"] = g2
    m01 = _det2(a0, a1)
    if not is_zero(m01):
        g0, g1 = _det2(a2, a1) / m01, _det2(a0, a2) / m01
        d0, d1 = _det2(a3, a1) / m01, _det2(a0, a3) / m01
        if is_zero(g1) and is_zero(d0) and is_zero(g0 - d1):
            forms.append("iv")
            params["alpha"] = g0
        if is_zero(d0 + g1 * d1) and is_zero(g0 + g1 * g1 - d1):
            forms.append("v")
            params["xi1"], params["xi2"] = g1, d1
    return tuple(forms), params


def necessary_screen_3q(g: GeneratorMatrix, tol: float = 1e-9) -> ScreenResult:
    """Check the four 2x4 row blocks ``A_01, A_23, A_02, A_13`` against the forbidden forms.

    A failure proves a biproduct vector with beta (or gamma) in {0, infinity}.
    """
    if (g.shape.n, g.shape.d) != (3, 2):
        raise ValueError("the three-qubit screen needs n = 3, d = 2")
    if g.exact:
        rows = g.matrix.tolist()
        is_zero = lambda x: not x
    else:
        rows = g.matrix.tolist()
        scale = max(1.0, float(np.abs(g.matrix).max()))
        is_zero = lambda x: abs(x) < tol * scale * scale
    failures = []
    for i, j in SCREEN_PAIRS:
        cols = [(rows[i][c], rows[j][c]) for c in range(4)]
        forms, params = match_forbidden_forms(cols, is_zero)
        if forms:
            failures.append(ScreenFailure((i, j), [list(rows[i]), list(rows[j])], forms, params))
    return ScreenResult(not failures, failures)


# -- solved three-qubit class ---------------------------------------------------------

def solved_class_matrix(x, a) -> ExactMatrix:
    """``diag(x, a, 1)`` with ``a`` the 2x2 middle block on basis states |01>, |10>."""
    z = 0
    return ExactMatrix([[x, z, z, z],
                        [z, a[0][0], a[0][1], z],
                        [z, a[1][0], a[1][1], z],
                        [z, z, z, 1]])


def solved_class_check(x, a) -> bool:
    """GES iff every a_ij != 0, a11 a22 != x and a12 a21 != x."""
    x = gq(x) if not isinstance(x, (float, complex)) else x
    a = [[gq(v) if not isinstance(v, (float, complex)) else v for v in row] for row in a]
    if x == 0:
        raise InvalidClassMember("x must be nonzero")
    if a[0][0] * a[1][1] - a[0][1] * a[1][0] == 0:
        raise InvalidClassMember("middle block must be nonsingular")
    return (all(v != 0 for row in a for v in row)
            and a[0][0] * a[1][1] - x != 0
            and a[0][1] * a[1][0] - x != 0)


FORBIDDEN_FORMS = ("i", "ii", "iii", "iv", "v")


def forbidden_block(form: str, a, b, c, dvec, xi1=0, xi2=0, alpha=0) -> list[list]:
    """2x4 block of the named forbidden shape built from column vectors ``a, b, c, dvec``."""
    col = lambda *pairs: [sum(w * v[k] for w, v in pairs) for k in range(2)]
    if form == "i":
        cols = [[0, 0], [0, 0], list(c), list(dvec)]
    elif form == "ii":
        cols = [[0, 0], list(b), list(c), col((-xi1 * xi1, b), (xi1, c))]
    elif form == "iii":
        cols = [list(a), list(b), [0, 0], [0, 0]]
    elif form == "iv":
        cols = [list(a), list(b), col((alpha, a)), col((alpha, b))]
    elif form == "v":
        cols = [list(a), list(b), col((xi2 - xi1 * xi1, a), (xi1, b)), col((-xi1 * xi2, a), (xi2, b))]
    else:
        raise ValueError(f"unknown form {form!r}")
    return [[cols[k][r] for k in range(4)] for r in range(2)]


def random_forbidden_generator(rng: np.random.Generator, pair: tuple[int, int], form: str,
                               low: int = -3, high: int = 3, max_tries: int = 1000) -> GeneratorMatrix:
    """Full-rank integer three-qubit generator whose rows ``pair`` hold a forbidden block."""
    shape = SystemShape(3, 2)
    ints = lambda k: [int(x) for x in rng.integers(low, high + 1, size=k)]
    for _ in range(max_tries):
        a, b, c, dv = ints(2), ints(2), ints(2), ints(2)
        xi1, xi2, alpha = (int(x) for x in rng.integers(-2, 3, size=3))
        block = forbidden_block(form, a, b, c, dv, xi1, xi2, alpha)
        rows = [ints(4) for _ in range(4)]
        rows[pair[0]], rows[pair[1]] = block
        m = ExactMatrix(rows)
        if exact_rank(m) == 4:
            return GeneratorMatrix(shape, m)
    raise RuntimeError("could not sample a full-rank generator with the requested block")
