"""Exact linear algebra over the rationals.

Scalars are Python ``int`` or :class:`fractions.Fraction`; integral values are
kept as ``int`` because object-array arithmetic on ints is an order of
magnitude faster than on Fractions.  Matrices are 2-D numpy arrays of dtype
``object`` (anything ``as_matrix`` accepts works as input).

Elimination is Gauss-Jordan on sparse integer row dictionaries.  Differential
matrices are very sparse, so the pivot row for each column is the sparsest
candidate.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from fractions import Fraction
from numbers import Rational

import numpy as np

__all__ = [
    "Subspace",
    "as_matrix",
    "as_vector",
    "normalize",
    "to_fraction",
    "rank",
    "rref",
    "nullspace",
    "solve",
    "solve_many",
    "membership",
    "is_zero",
    "matmul",
]


def normalize(x):
    """Return ``x`` as an exact scalar: ``int`` when integral, else ``Fraction``."""
    if type(x) is int:
        return x
    if isinstance(x, (bool, np.bool_)):
        raise TypeError(f"not an exact rational: {x!r} (bool)")
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return int(x)
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else x
    if isinstance(x, Rational):
        return normalize(Fraction(int(x.numerator), int(x.denominator)))
    if isinstance(x, str):
        return normalize(Fraction(x.strip()))
    raise TypeError(f"not an exact rational: {x!r} ({type(x).__name__})")


def to_fraction(x) -> Fraction:
    return Fraction(normalize(x))


_normalize_array = np.frompyfunc(normalize, 1, 1)


def as_matrix(M) -> np.ndarray:
    arr = np.asarray(M, dtype=object)
    if arr.ndim != 2:
        if arr.size == 0:
            return np.zeros((0, 0), dtype=object)
        raise ValueError(f"expected a 2-D matrix, got shape {arr.shape}")
    return _normalize_array(arr).astype(object) if arr.size else arr


def as_vector(v) -> np.ndarray:
    arr = np.asarray(v, dtype=object)
    if arr.ndim != 1:
        raise ValueError(f"expected a vector, got shape {arr.shape}")
    return _normalize_array(arr).astype(object) if arr.size else arr


def is_zero(a) -> bool:
    arr = np.asarray(a, dtype=object)
    return not any(x != 0 for x in arr.flat)


def matmul(A, B) -> np.ndarray:
    A = np.asarray(A, dtype=object)
    B = np.asarray(B, dtype=object)
    if A.shape[1] != B.shape[0]:
        raise ValueError(f"shape mismatch {A.shape} x {B.shape}")
    if A.size == 0 or B.size == 0:
        return np.full((A.shape[0], B.shape[1]), 0, dtype=object)
    nonzero = B != 0
    if nonzero.sum() * 4 < B.size:
        # mostly-zero right factor (basis matrices, unit columns): combine only
        # the columns of A that are actually used
        out = np.full((A.shape[0], B.shape[1]), 0, dtype=object)
        for j in range(B.shape[1]):
            rows = np.flatnonzero(nonzero[:, j])
            if rows.size:
                out[:, j] = A[:, rows].dot(B[rows, j])
        return _normalize_array(out).astype(object)
    return _normalize_array(A.dot(B)).astype(object)


@dataclass(frozen=True)
class Subspace:
    """Span of linearly independent coordinate vectors in Q^ambient_dim."""

    ambient_dim: int
    basis: tuple = field(default_factory=tuple)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def matrix(self) -> np.ndarray:
        """Basis vectors as the columns of an ``ambient_dim x dim`` matrix."""
        return self._matrix.copy()

    @cached_property
    def _matrix(self) -> np.ndarray:
        M = np.full((self.ambient_dim, self.dim), 0, dtype=object)
        for j, b in enumerate(self.basis):
            M[:, j] = b
        return M

    def combination(self, coords) -> np.ndarray:
        """``sum coords[j] * basis[j]`` as a vector of length ``ambient_dim``."""
        out = np.full(self.ambient_dim, 0, dtype=object)
        for c, b in zip(coords, self.basis):
            if c:
                out = out + c * b
        return _normalize_array(out).astype(object) if out.size else out

    def __contains__(self, v) -> bool:
        return membership(self, v)


def _sparse_rows(M: np.ndarray) -> list[dict]:
    """Rows as ``{column: int}`` dicts, each scaled by the lcm of its denominators."""
    rows = []
    for r in range(M.shape[0]):
        entries = {j: Fraction(x) for j, x in enumerate(M[r]) if x != 0}
        den = 1
        for v in entries.values():
            den = math.lcm(den, v.denominator)
        rows.append({j: int(v * den) for j, v in entries.items()})
    return rows


def _primitive(row: dict) -> dict:
    g = 0
    for v in row.values():
        g = math.gcd(g, v)
        if g == 1:
            return row
    return {j: v // g for j, v in row.items()} if g > 1 else row


def rref(M) -> tuple[list[dict], list[int]]:
    """Reduced row echelon form.

    Returns ``(rows, pivots)``: ``rows[t]`` is a sparse dict for the row whose
    leading 1 sits in column ``pivots[t]``; pivots are increasing and every
    pivot column is zero in all other rows.

    Elimination runs on integer rows (cross-multiplying and dividing out the
    content of each row), which is much faster than Fraction arithmetic; the
    rows are scaled to leading 1 only at the end.
    """
    M = as_matrix(M)
    pending = [r for r in _sparse_rows(M) if r]
    done: dict[int, dict] = {}
    for col in range(M.shape[1]):
        best = None
        for idx, row in enumerate(pending):
            if col in row and (best is None or len(row) < len(pending[best])):
                best = idx
        if best is None:
            continue
        prow = pending.pop(best)
        survivors = []
        for row in pending:
            if col in row:
                row = _eliminate(row, prow, col)
            if row:
                survivors.append(row)
        pending = survivors
        for c, row in done.items():
            if col in row:
                done[c] = _eliminate(row, prow, col)
        done[col] = prow
    pivots = sorted(done)
    out = []
    for c in pivots:
        row = done[c]
        lead = row[c]
        out.append({j: Fraction(v, lead) for j, v in row.items()})
    return out, pivots


def _eliminate(row: dict, prow: dict, col: int) -> dict:
    """``p*row - f*prow`` with ``p = prow[col]``, ``f = row[col]``, reduced by content."""
    p, f = prow[col], row[col]
    g = math.gcd(p, f)
    p, f = p // g, f // g
    new = {j: v * p for j, v in row.items()} if p != 1 else dict(row)
    for j, v in prow.items():
        w = new.get(j, 0) - f * v
        if w:
            new[j] = w
        else:
            new.pop(j, None)
    return _primitive(new)


def rank(M) -> int:
    return len(rref(M)[1])


def nullspace(M) -> Subspace:
    M = as_matrix(M)
    ncols = M.shape[1]
    rows, pivots = rref(M)
    pivot_set = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        v = np.full(ncols, 0, dtype=object)
        v[free] = 1
        for row, p in zip(rows, pivots):
            coef = row.get(free)
            if coef:
                v[p] = normalize(-coef)
        basis.append(v)
    return Subspace(ncols, tuple(basis))


def solve(M, b):
    """Some ``x`` with ``M x = b`` exactly, or ``None`` when ``b`` is not in the
    column space.  Free variables are set to zero.

    A length mismatch between ``b`` and the rows of ``M`` raises ``ValueError``.
    """
    b = as_vector(b)
    return solve_many(M, b.reshape(-1, 1))[0]


def solve_many(M, B) -> list:
    """Solve ``M x = B[:, c]`` for every column ``c`` with a single elimination.

    Returns one entry per column: the solution vector (free variables zero) or
    ``None`` when that column is not in the column space of ``M``.
    """
    M = as_matrix(M)
    B = as_matrix(B)
    if B.shape[0] != M.shape[0]:
        raise ValueError(f"right-hand side has length {B.shape[0]}, matrix has {M.shape[0]} rows")
    ncols, nrhs = M.shape[1], B.shape[1]
    aug = np.full((M.shape[0], ncols + nrhs), 0, dtype=object)
    if M.size:
        aug[:, :ncols] = M
    if B.size:
        aug[:, ncols:] = B
    rows, pivots = rref(aug)
    bad = set()
    for row, p in zip(rows, pivots):
        if p >= ncols:
            bad.update(j - ncols for j in row)
    out = []
    for c in range(nrhs):
        if c in bad:
            out.append(None)
            continue
        x = np.full(ncols, 0, dtype=object)
        for row, p in zip(rows, pivots):
            if p < ncols:
                x[p] = normalize(row.get(ncols + c, 0))
        out.append(x)
    return out


def membership(S: Subspace, v) -> bool:
    v = as_vector(v)
    if v.shape[0] != S.ambient_dim:
        raise ValueError(f"vector has length {v.shape[0]}, subspace lives in dimension {S.ambient_dim}")
    if is_zero(v):
        return True
    if not S.basis:
        return False
    return solve(S.matrix(), v) is not None
