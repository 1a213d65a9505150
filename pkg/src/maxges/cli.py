"""Command line interface.

Exit codes: 0 verdict obtained, 2 undecided (budget exhausted), 1 input error
or failed corpus check.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass, field

import numpy as np

from . import certifier, corpus, io, numrange
from .certifier import GES, NOT_GES, UNKNOWN, CertificateReport
from .seesaw import SeesawConfig
from .cuts import Bipartition
from .linalg import RANK_TOL_FACTOR, ExactMatrix, NotExactError, format_exact, format_float, parse_exact
from .subspace import MEMBERSHIP_TOL, GeneratorMatrix, RankDeficientError, Subspace, SystemShape, candidate_ges, \
    random_generator_matrix

EXIT_OK, EXIT_INPUT, EXIT_UNKNOWN = 0, 1, 2


class InputError(Exception):
    """Bad command line input; reported with exit code 1."""


@dataclass
class RunConfig:
    backend: str = "exact"
    rank_tol_factor: float = RANK_TOL_FACTOR
    membership_tol: float = MEMBERSHIP_TOL
    seesaw: SeesawConfig = field(default_factory=SeesawConfig)
    budget: int = certifier.DEFAULT_BUDGET
    seed: int = 0
    output: str | None = None

    def __post_init__(self):
        if self.rank_tol_factor <= 0 or self.membership_tol <= 0:
            raise ValueError("tolerances must be positive")
        if self.budget < 1:
            raise ValueError("budget must be >= 1")

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunConfig":
        budget = getattr(args, "budget", None)
        if budget is None:
            budget = _env_int("MAXGES_BUDGET", certifier.DEFAULT_BUDGET)
        seed = getattr(args, "seed", None)
        if seed is None:
            seed = _env_int("MAXGES_SEED", 0)
        restarts = getattr(args, "restarts", None) or 64
        sweeps = getattr(args, "sweeps", None) or 500
        try:
            return cls(seesaw=SeesawConfig(restarts=restarts, max_sweeps=sweeps, seed=seed), budget=budget, seed=seed,
                       output=getattr(args, "out", None))
        except ValueError as exc:
            raise InputError(str(exc)) from None


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None or raw == "":
        return default
    try:
        return int(raw)
    except ValueError:
        raise InputError(f"environment variable {name} must be an integer, got {raw!r}") from None


def _emit(text: str, out: str | None) -> None:
    if out:
        io.atomic_write_text(out, text)
    else:
        sys.stdout.write(text)


# -- shape handling -----------------------------------------------------------

def _shape_from(doc: dict, args, side: int | None = None, ambient: int | None = None) -> SystemShape:
    n = args.n if getattr(args, "n", None) is not None else doc.get("n")
    d = args.d if getattr(args, "d", None) is not None else doc.get("d")
    if d is None:
        d = 2
    d = int(d)
    if n is None:
        target, offset = (side, 1) if side is not None else (ambient, 0)
        k, p = 0, 1
        while p < target:
            p *= d
            k += 1
        if p != target:
            raise InputError(f"size {target} is not a power of d = {d}; pass --n and --d")
        n = k + offset
    try:
        return SystemShape(int(n), d)
    except ValueError as exc:
        raise InputError(str(exc)) from None


def _load(path: str, args):
    """Return (kind, shape, generator or subspace, doc)."""
    try:
        m, doc = io.read_matrix(path)
    except io.FileFormatError as exc:
        raise InputError(str(exc)) from None
    rows, cols = m.shape
    kind = doc.get("kind") or ("generator" if rows == cols else "basis")
    if kind == "generator":
        shape = _shape_from(doc, args, side=rows)
        if (rows, cols) != (shape.side, shape.side):
            raise InputError(f"generator matrix must be {shape.side}x{shape.side} for n={shape.n}, d={shape.d}; "
                             f"got {rows}x{cols}")
        try:
            return kind, shape, GeneratorMatrix(shape, m), doc
        except RankDeficientError as exc:
            raise InputError(f"generator matrix is rank deficient: {exc}") from None
    if kind == "basis":
        shape = _shape_from(doc, args, ambient=cols)
        if cols != shape.dim:
            raise InputError(f"basis vectors must have length d^n = {shape.dim}; got {cols}")
        vecs = m.tolist() if isinstance(m, ExactMatrix) else list(m)
        backend = "exact" if isinstance(m, ExactMatrix) else "float"
        return kind, shape, Subspace.from_vectors(vecs, shape, backend), doc
    raise InputError(f"unknown file kind {kind!r} (expected 'generator' or 'basis')")


def _parse_cuts(text: str | None, shape: SystemShape) -> list[Bipartition] | None:
    if not text:
        return None
    try:
        return [Bipartition.parse(c, shape.n) for c in text.split(";") if c.strip()]
    except ValueError as exc:
        raise InputError(f"bad --cuts value {text!r}: {exc}") from None


# -- subcommands ------------------------------------------------------------------

def cmd_build(args) -> int:
    kind, shape, g, doc = _load(args.matrix, args)
    if kind != "generator":
        raise InputError("build needs a generator matrix file")
    v = candidate_ges(g)
    basis = v.basis if g.exact else v.orthonormal_basis()
    text = io.dumps_json(io.matrix_to_doc(basis, kind="basis", n=shape.n, d=shape.d, provenance=g.digest()))
    _emit(text, args.out)
    return EXIT_OK


def _combine(exact: CertificateReport | None, numeric: CertificateReport | None) -> dict:
    out = {}
    if exact is not None:
        out["exact"] = exact
    if numeric is not None:
        out["numeric"] = numeric
    if exact is not None and exact.verdict != UNKNOWN:
        final = exact.label
    elif exact is not None:
        final = UNKNOWN  # numeric results never settle an undecided exact run
    else:
        final = numeric.label
    return {"verdict": final, "reports": out}


def cmd_verify(args) -> int:
    cfg = RunConfig.from_args(args)
    kind, shape, obj, doc = _load(args.file, args)
    cuts = _parse_cuts(args.cuts, shape)
    exact = numeric = None
    if args.mode in ("exact", "both"):
        if kind != "generator":
            raise InputError("exact mode needs a generator matrix file, not a basis")
        if not obj.exact:
            raise InputError("exact mode needs exact (rational) matrix entries")
        exact = certifier.certify_exact(obj, budget=cfg.budget, cuts=cuts, seesaw=cfg.seesaw)
    if args.mode in ("numeric", "both"):
        sub = candidate_ges(obj) if kind == "generator" else obj
        numeric = certifier.certify_numeric(sub.to_float(), cfg.seesaw, shape=shape,
                                            cuts=cuts)
    combined = _combine(exact, numeric)
    doc_out = {"verdict": combined["verdict"], "input": os.path.basename(args.file), "kind": kind,
               "n": shape.n, "d": shape.d,
               "reports": {k: r.to_dict(args.timings) for k, r in combined["reports"].items()}}
    _emit(io.dumps_json(doc_out), args.out)
    if args.out:
        print(combined["verdict"])
    return EXIT_UNKNOWN if combined["verdict"] == UNKNOWN else EXIT_OK


def cmd_screen3q(args) -> int:
    kind, shape, g, _ = _load(args.matrix, args)
    if kind != "generator":
        raise InputError("screen3q needs a generator matrix file")
    try:
        res = certifier.necessary_screen_3q(g)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    fmt = lambda x: format_exact(x) if not isinstance(x, (float, complex, np.number)) else format_float(complex(x))
    out = {"passed": res.passed,
           "failures": [{"rows": list(f.rows), "forms": list(f.forms),
                         "submatrix": [[fmt(x) for x in row] for row in f.submatrix],
                         "params": {k: fmt(v) for k, v in f.params.items()}} for f in res.failures]}
    _emit(io.dumps_json(out), args.out)
    return EXIT_OK


def _parse_block(text: str):
    try:
        rows = [[parse_exact(x.strip()) for x in r.split(",")] for r in text.split(";")]
    except ValueError as exc:
        raise InputError(f"bad --a value {text!r}: {exc}") from None
    if len(rows) != 2 or any(len(r) != 2 for r in rows):
        raise InputError("--a must be a 2x2 block written 'a11,a12;a21,a22'")
    return rows


def cmd_solved_class(args) -> int:
    a = _parse_block(args.a)
    try:
        x = parse_exact(args.x)
    except ValueError as exc:
        raise InputError(f"bad --x value: {exc}") from None
    try:
        ok = certifier.solved_class_check(x, a)
    except certifier.InvalidClassMember as exc:
        raise InputError(f"not a member of the class: {exc}") from None
    out = {"x": format_exact(x), "a": [[format_exact(v) for v in r] for r in a],
           "verdict": GES if ok else NOT_GES}
    if args.certify:
        g = GeneratorMatrix(SystemShape(3, 2), certifier.solved_class_matrix(x, a))
        out["certify_exact"] = certifier.certify_exact(g).verdict
    _emit(io.dumps_json(out), args.out)
    return EXIT_OK


def cmd_random(args) -> int:
    cfg = RunConfig.from_args(args)
    if args.trials < 1:
        raise InputError("--trials must be positive")
    try:
        shape = SystemShape(args.n, args.d)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    rng = np.random.default_rng(cfg.seed)
    counts = {GES: 0, NOT_GES: 0, UNKNOWN: 0}
    for _ in range(args.trials):
        g = random_generator_matrix(shape, rng, args.low, args.high)
        if args.mode == "exact":
            v = certifier.certify_exact(g, budget=cfg.budget, seesaw=cfg.seesaw).verdict
        else:
            v = certifier.certify_numeric(candidate_ges(g).to_float(), cfg.seesaw, shape=shape).verdict
        counts[v] += 1
    decided = counts[GES] + counts[NOT_GES]
    out = {"n": shape.n, "d": shape.d, "trials": args.trials, "mode": args.mode, "seed": cfg.seed,
           "entries": [args.low, args.high], "counts": counts,
           "ges_rate": counts[GES] / args.trials,
           "ges_rate_decided": counts[GES] / decided if decided else None}
    _emit(io.dumps_json(out), args.out)
    return EXIT_UNKNOWN if counts[UNKNOWN] else EXIT_OK


def cmd_corpus(args) -> int:
    cfg = RunConfig.from_args(args)
    lines = []

    def show(r):
        line = f"{'PASS' if r.passed else 'FAIL'} {r.name} {r.verdict} " + \
            " ".join(f"{k}={'ok' if v else 'FAIL'}" for k, v in r.checks.items())
        lines.append(line)
        if not args.out:
            print(line, flush=True)

    results = corpus.run_corpus(cfg.seesaw, cfg.budget, show, with_range=not args.no_range)
    if args.out:
        io.atomic_write_text(args.out, "\n".join(lines) + "\n")
    failed = [r.name for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} corpus cases passed", file=sys.stderr)
    return EXIT_INPUT if failed else EXIT_OK


def cmd_range(args) -> int:
    cfg = RunConfig.from_args(args)
    try:
        m, doc = io.read_matrix(args.operator)
    except io.FileFormatError as exc:
        raise InputError(str(exc)) from None
    a = m.to_numpy() if isinstance(m, ExactMatrix) else np.asarray(m)
    if a.shape[0] != a.shape[1]:
        raise InputError(f"operator must be square, got {a.shape[0]}x{a.shape[1]}")
    shape = _shape_from(doc, args, ambient=a.shape[0])
    try:
        sample = numrange.sample_k_product_range(a, shape, args.k, args.samples, cfg.seed)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    if args.dump:
        io.atomic_write_text(args.dump, sample.dump())
    out = {"operator": sample.operator, "k": sample.k, "samples": sample.samples, "seed": sample.seed,
           "sampled_max": sample.extremes[0], "sampled_min": sample.extremes[1]}
    if np.allclose(a, a.conj().T, atol=numrange.HERMITIAN_TOL, rtol=0) and args.k == 2:
        ex = numrange.biproduct_extremes(a, shape, cfg.seesaw)
        out["biproduct_max"], out["biproduct_min"] = ex.maximum, ex.minimum
    _emit(io.dumps_json(out), args.out)
    return EXIT_OK


def cmd_decompose_demo(args) -> int:
    cfg = RunConfig.from_args(args)
    checks = corpus.decomposition_checks()
    parts = corpus.corpus_decomposition()
    verdicts = {}
    for name, sub in sorted(parts.items()):
        verdicts[name] = certifier.certify_numeric(sub.to_float(), cfg.seesaw, shape=sub.shape).label
    out = {"dims": list(checks["dims"]), "direct_sum": checks["direct_sum"],
           "psi3_in_ges2": checks["psi3_in_ges2"], "psi3_perp_ges1": checks["psi3_perp_ges1"], "verdicts": verdicts}
    _emit(io.dumps_json(out), args.out)
    ok = checks["direct_sum"] and all(v.startswith(GES) for v in verdicts.values())
    return EXIT_OK if ok else EXIT_INPUT


# -- parser -----------------------------------------------------------------------

def _add_shape(p):
    p.add_argument("--n", type=int, help="number of parties (default: file header or inferred)")
    p.add_argument("--d", type=int, help="local dimension (default: file header, else 2)")


def _add_run(p, budget=True):
    p.add_argument("--seed", type=int, help="see-saw / sampling seed (env MAXGES_SEED, default 0)")
    if budget:
        p.add_argument("--budget", type=int, help="Buchberger step budget (env MAXGES_BUDGET, default 10^6)")
    p.add_argument("--restarts", type=int, help="see-saw restarts per cut (default 64)")
    p.add_argument("--sweeps", type=int, help="see-saw sweeps per restart (default 500)")
    p.add_argument("--out", help="write output here atomically instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="maxges", description="Build and certify genuinely entangled subspaces.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="generator matrix file -> GES basis file")
    p.add_argument("matrix")
    _add_shape(p)
    p.add_argument("--out", help="basis file to write (default stdout)")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("verify", help="certify a generator matrix or basis file")
    p.add_argument("file")
    p.add_argument("--mode", choices=["exact", "numeric", "both"], default="exact")
    p.add_argument("--cuts", help="restrict to cuts, e.g. 'B|AC;C|AB' or '2' (1-based parties of S)")
    p.add_argument("--timings", action="store_true", help="include wall-clock seconds per cut")
    _add_shape(p)
    _add_run(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("screen3q", help="three-qubit forbidden-form screen")
    p.add_argument("matrix")
    _add_shape(p)
    p.add_argument("--out")
    p.set_defaults(func=cmd_screen3q)

    p = sub.add_parser("solved-class", help="closed-form verdict for diag(x, a, 1)")
    p.add_argument("--x", required=True, help="scalar x, e.g. 2 or 1/2 or 1+2 i")
    p.add_argument("--a", required=True, help="2x2 block 'a11,a12;a21,a22'")
    p.add_argument("--certify", action="store_true", help="also run the exact certifier")
    p.add_argument("--out")
    p.set_defaults(func=cmd_solved_class)

    p = sub.add_parser("random", help="GES rate over random integer generator matrices")
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--low", type=int, default=-3, help="smallest integer entry (default -3)")
    p.add_argument("--high", type=int, default=3, help="largest integer entry (default 3)")
    p.add_argument("--mode", choices=["exact", "numeric"], default="exact")
    _add_run(p)
    p.set_defaults(func=cmd_random)

    p = sub.add_parser("corpus", help="run every fixture and its checks")
    p.add_argument("--no-range", action="store_true", help="skip the numerical-range cross-check")
    _add_run(p)
    p.set_defaults(func=cmd_corpus)

    p = sub.add_parser("range", help="sample the k-product numerical range of an operator file")
    p.add_argument("operator")
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--dump", help="write sampled points, one 're im' per line")
    _add_shape(p)
    _add_run(p, budget=False)
    p.set_defaults(func=cmd_range)

    p = sub.add_parser("decompose-demo", help="three-qubit space as a direct sum of three GESs")
    _add_run(p, budget=False)
    p.set_defaults(func=cmd_decompose_demo)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InputError, io.FileFormatError, NotExactError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
