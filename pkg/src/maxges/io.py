"""Matrix / basis files and ket-string parsing.

Files are JSON objects ``{"rows", "cols", "entries", ...}``; entries are
strings, ``"p/q"`` or ``"p/q+r/s i"`` for exact values and ``"x+yi"`` for
floats.  Basis files add ``n``, ``d``, ``backend`` and ``provenance``.
"""

from __future__ import annotations

import json
import os
import re
import tempfile
from pathlib import Path
from typing import Any

import numpy as np

from .linalg import ExactMatrix, format_exact, format_float, gq, parse_exact, parse_float


class FileFormatError(ValueError):
    """Malformed matrix, basis or operator file."""


def atomic_write_text(path: str | os.PathLike, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def dumps_json(obj: Any) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def matrix_to_doc(m, **header) -> dict:
    if isinstance(m, ExactMatrix):
        entries = [[format_exact(x) for x in row] for row in m.tolist()]
        backend = "exact"
        rows, cols = m.shape
    else:
        a = np.asarray(m, dtype=complex)
        if a.ndim != 2:
            raise ValueError("matrix must be two-dimensional")
        entries = [[format_float(complex(x)) for x in row] for row in a]
        backend = "float"
        rows, cols = a.shape
    doc = {"rows": rows, "cols": cols, "backend": backend, "entries": entries}
    doc.update({k: v for k, v in header.items() if v is not None})
    return doc


def _looks_float(s: str) -> bool:
    return bool(re.search(r"[.eE]", s)) or s.strip().lower() in ("nan", "inf", "-inf")


def matrix_from_doc(doc: dict) -> ExactMatrix | np.ndarray:
    try:
        rows, cols, entries = int(doc["rows"]), int(doc["cols"]), doc["entries"]
    except (KeyError, TypeError, ValueError) as exc:
        raise FileFormatError(f"matrix file needs integer 'rows', 'cols' and an 'entries' list ({exc})") from None
    if not isinstance(entries, list) or len(entries) != rows or any(
            not isinstance(r, list) or len(r) != cols for r in entries):
        raise FileFormatError(f"'entries' is not a {rows}x{cols} array")
    flat = [str(x) for r in entries for x in r]
    backend = doc.get("backend")
    if backend is None:
        backend = "float" if any(_looks_float(x) for x in flat) else "exact"
    try:
        if backend == "exact":
            return ExactMatrix([[parse_exact(str(x)) for x in r] for r in entries], cols)
        if backend == "float":
            return np.array([[parse_float(str(x)) for x in r] for r in entries], dtype=complex).reshape(rows, cols)
    except ValueError as exc:
        raise FileFormatError(f"bad matrix entry: {exc}") from None
    raise FileFormatError(f"unknown backend {backend!r}")


def load_doc(path: str | os.PathLike) -> dict:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise FileFormatError(f"cannot read {path}: {exc.strerror}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FileFormatError(f"{path}: not valid JSON ({exc.msg} at line {exc.lineno})") from None
    if not isinstance(doc, dict):
        raise FileFormatError(f"{path}: top level must be an object")
    return doc


def read_matrix(path) -> tuple[ExactMatrix | np.ndarray, dict]:
    doc = load_doc(path)
    return matrix_from_doc(doc), doc


def write_matrix(path, m, **header) -> None:
    atomic_write_text(path, dumps_json(matrix_to_doc(m, **header)))


_KET = re.compile(r"\s*([+-]?)\s*(\d*)\s*\|(\d+)>\s*")


def parse_kets(text: str, d: int, n: int | None = None) -> list[int]:
    """Integer amplitudes of a ket expression such as ``"2|001>-|010>"``."""
    pos, terms = 0, []
    text = text.strip()
    while pos < len(text):
        m = _KET.match(text, pos)
        if not m:
            raise FileFormatError(f"cannot parse ket expression at {text[pos:]!r}")
        sign, coef, digits = m.groups()
        if terms and not sign:
            raise FileFormatError(f"missing sign before term {m.group(0).strip()!r}")
        terms.append(((-1 if sign == "-" else 1) * (int(coef) if coef else 1), digits))
        pos = m.end()
    if not terms:
        raise FileFormatError("empty ket expression")
    width = n if n is not None else len(terms[0][1])
    out = [0] * (d ** width)
    for c, digits in terms:
        if len(digits) != width or any(int(ch) >= d for ch in digits):
            raise FileFormatError(f"ket |{digits}> is not a basis state of {width} parties with d = {d}")
        out[int(digits, d)] += c
    return out


def format_kets(vec, d: int, n: int) -> str:
    """Inverse of :func:`parse_kets` for exact integer vectors."""
    parts = []
    for i, c in enumerate(vec):
        c = gq(c)
        if not c:
            continue
        digits = np.base_repr(i, d).rjust(n, "0")
        if c == 1:
            coef = "+"
        elif c == -1:
            coef = "-"
        elif not c.is_real:
            coef = f"+({format_exact(c)})"
        else:
            s = format_exact(c)
            coef = s if s.startswith("-") else "+" + s
        parts.append(f"{coef}|{digits}>")
    text = "".join(parts)
    return text[1:] if text.startswith("+") else text
