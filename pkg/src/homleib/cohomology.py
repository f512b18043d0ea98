"""Differential matrices and cohomology of the alpha-type complex and of the
subcomplex of alpha-compatible cochains.

Matrix columns follow the flattening of :meth:`AlphaTypeCochain.flat`: the
gamma block (``dim**(n+1)`` coordinates) comes first, then the alpha block.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional

import numpy as np

from . import tensor
from .algebra import HomLeibnizAlgebra
from .cochain import (AlphaTypeCochain, CochainError, GammaCochain, _dag, _daa, _dga, _dgg,
                      require_validated)
from .rational_linalg import Subspace, is_zero, matmul, nullspace, rank, rref, solve, solve_many

DEFAULT_MAX_DEGREE = 4


class NotAComplexError(ArithmeticError):
    """The composite of two consecutive differentials is not zero."""


def _batch(T: np.ndarray, d: int, arity: int) -> np.ndarray:
    """Reshape a ``(d**(arity+1), k)`` matrix into a batch of k arity-ary tensors."""
    return T.reshape((d,) * (arity + 1) + (T.shape[1],))


def _unit_batch(d: int, arity: int) -> np.ndarray:
    return _batch(tensor.identity(d ** (arity + 1)), d, arity)


def _flat_rows(T: np.ndarray, k: int) -> np.ndarray:
    return T.reshape(-1, k)


@lru_cache(maxsize=64)
def _differential_matrix(L: HomLeibnizAlgebra, n: int) -> np.ndarray:
    d = L.dim
    ng = d ** (n + 1)
    E = _unit_batch(d, n)
    top = _flat_rows(_dgg(L, E, n), ng)
    bottom = _flat_rows(_dga(L, E, n), ng)
    if n >= 2:
        na = d ** n
        F = _unit_batch(d, n - 1)
        top = np.hstack([top, -_flat_rows(_dag(L, F, n - 1), na)])
        bottom = np.hstack([bottom, -_flat_rows(_daa(L, F, n - 1), na)])
    M = tensor.exact(np.vstack([top, bottom]))
    M.flags.writeable = False
    return M


@lru_cache(maxsize=64)
def _gamma_matrices(L: HomLeibnizAlgebra, m: int) -> tuple[np.ndarray, np.ndarray]:
    """Matrices of d_gg and d_ga on arity-m maps."""
    k = L.dim ** (m + 1)
    E = _unit_batch(L.dim, m)
    G = tensor.exact(_flat_rows(_dgg(L, E, m), k))
    A = tensor.exact(_flat_rows(_dga(L, E, m), k))
    G.flags.writeable = False
    A.flags.writeable = False
    return G, A


def differential_matrix(L: HomLeibnizAlgebra, n: int) -> np.ndarray:
    """Matrix of the total differential from degree n to degree n+1."""
    require_validated(L)
    if n < 1:
        raise CochainError("cochain degrees start at 1")
    return _differential_matrix(L, n)


def apply_differential(L: HomLeibnizAlgebra, n: int, X) -> np.ndarray:
    """``differential_matrix(L, n) @ X`` for a matrix ``X`` of flattened degree-n
    cochains (as columns), without building the differential matrix."""
    require_validated(L)
    if n < 1:
        raise CochainError("cochain degrees start at 1")
    d = L.dim
    X = tensor.exact(X)
    ng, k = d ** (n + 1), X.shape[1]
    if X.shape[0] != AlphaTypeCochain.space_dim(d, n):
        raise CochainError(f"expected {AlphaTypeCochain.space_dim(d, n)} rows, got {X.shape[0]}")
    gamma = _batch(X[:ng], d, n)
    top = _flat_rows(_dgg(L, gamma, n), k)
    bottom = _flat_rows(_dga(L, gamma, n), k)
    if n >= 2:
        alpha = _batch(X[ng:], d, n - 1)
        top = top - _flat_rows(_dag(L, alpha, n - 1), k)
        bottom = bottom - _flat_rows(_daa(L, alpha, n - 1), k)
    return tensor.exact(np.vstack([top, bottom]))


@dataclass(frozen=True, eq=False)
class ComplexSlice:
    degree: int
    ambient_dim: int
    out_matrix: np.ndarray
    in_matrix: Optional[np.ndarray]

    @property
    def composite(self) -> Optional[np.ndarray]:
        if self.in_matrix is None:
            return None
        return matmul(self.out_matrix, self.in_matrix)

    @property
    def is_complex(self) -> bool:
        c = self.composite
        return c is None or is_zero(c)


def _check_degree(n: int, max_degree: int) -> None:
    if not isinstance(n, int) or n < 1:
        raise CochainError(f"degree must be a positive integer, got {n!r}")
    if n > max_degree:
        raise CochainError(f"degree {n} exceeds max_degree={max_degree}")


def assemble(L: HomLeibnizAlgebra, n: int, max_degree: int = DEFAULT_MAX_DEGREE) -> ComplexSlice:
    _check_degree(n, max_degree)
    out = differential_matrix(L, n)
    inc = differential_matrix(L, n - 1) if n >= 2 else None
    return ComplexSlice(n, AlphaTypeCochain.space_dim(L.dim, n), out, inc)


@dataclass(frozen=True, eq=False)
class CohomologyReport:
    """Dimensions and explicit bases for one degree.

    ``representatives`` span a complement of the coboundaries inside the
    cocycles, so ``len(representatives) == betti``.  When the two adjacent
    differentials do not compose to zero (``is_complex`` false), coboundaries
    are taken to be ``image(in) & kernel(out)``.
    """

    degree: int
    dim_cocycles: int
    dim_coboundaries: int
    cocycle_basis: list = field(default_factory=list)
    coboundary_basis: list = field(default_factory=list)
    representatives: list = field(default_factory=list)
    is_complex: bool = True
    image_rank: Optional[int] = None

    @property
    def betti(self) -> int:
        return self.dim_cocycles - self.dim_coboundaries


def _column_space_basis(M: np.ndarray) -> list[np.ndarray]:
    """Pivot columns of ``M`` (greedy in column order)."""
    if M.shape[1] == 0:
        return []
    _, pivots = rref(M)
    return [M[:, p].copy() for p in pivots]


def _stack_columns(vectors, length: int) -> np.ndarray:
    M = tensor.zeros((length, len(vectors)))
    for j, v in enumerate(vectors):
        M[:, j] = v
    return M


def _intersection(U: list, V: Subspace, length: int) -> list[np.ndarray]:
    """Basis of span(U) & V."""
    if not U or V.dim == 0:
        return []
    U_mat = _stack_columns(U, length)
    rel = nullspace(np.hstack([U_mat, -V.matrix()]))
    if not rel.dim:
        return []
    coeffs = _stack_columns([r[: len(U)] for r in rel.basis], len(U))
    return _column_space_basis(matmul(U_mat, coeffs))


def _report(degree: int, out: np.ndarray, inc: Optional[np.ndarray], to_cochain,
            strict: bool) -> CohomologyReport:
    length = out.shape[1]
    Z = nullspace(out)
    image = _column_space_basis(inc) if inc is not None else []
    complex_ok = inc is None or is_zero(matmul(out, inc))
    if complex_ok:
        boundaries = image
    else:
        if strict:
            raise NotAComplexError(f"consecutive differentials around degree {degree} do not compose to zero")
        boundaries = _intersection(image, Z, length)
    reps = []
    if Z.dim:
        cols = boundaries + list(Z.basis)
        _, pivots = rref(_stack_columns(cols, length))
        reps = [cols[p] for p in pivots if p >= len(boundaries)]
    return CohomologyReport(
        degree=degree,
        dim_cocycles=Z.dim,
        dim_coboundaries=len(boundaries),
        cocycle_basis=[to_cochain(v) for v in Z.basis],
        coboundary_basis=[to_cochain(v) for v in boundaries],
        representatives=[to_cochain(v) for v in reps],
        is_complex=complex_ok,
        image_rank=len(image),
    )


def cohomology(L: HomLeibnizAlgebra, n: int, max_degree: int = DEFAULT_MAX_DEGREE,
               strict: bool = True) -> CohomologyReport:
    """Cohomology of the alpha-type complex in degree n.

    With ``strict=True`` (the default) a non-zero composite of the adjacent
    differentials raises :class:`NotAComplexError`.
    """
    s = assemble(L, n, max_degree)
    return _report(n, s.out_matrix, s.in_matrix,
                   lambda v: AlphaTypeCochain.from_flat(L.dim, n, v), strict)


def is_cocycle(L: HomLeibnizAlgebra, c: AlphaTypeCochain) -> bool:
    return is_zero(matmul(differential_matrix(L, c.degree), c.flat().reshape(-1, 1)))


def is_coboundary(L: HomLeibnizAlgebra, c: AlphaTypeCochain) -> Optional[AlphaTypeCochain]:
    """A cochain ``x`` of degree ``c.degree - 1`` with ``d x = c``, or ``None``.

    Degree-1 cochains have no preimage space; asking there raises
    :class:`CochainError` (use :func:`cohomologous` for the degree-agnostic test).
    """
    if c.dim != L.dim:
        raise CochainError("cochain dimension does not match the algebra")
    if c.degree < 2:
        raise CochainError("there are no cochains below degree 1 to be a preimage")
    x = solve(differential_matrix(L, c.degree - 1), c.flat())
    if x is None:
        return None
    return AlphaTypeCochain.from_flat(L.dim, c.degree - 1, x)


def cohomologous(L: HomLeibnizAlgebra, c1: AlphaTypeCochain, c2: AlphaTypeCochain) -> bool:
    diff = c1 - c2
    if diff.degree == 1:
        return diff.is_zero()
    return is_coboundary(L, diff) is not None


def compatible_subspace(L: HomLeibnizAlgebra, m: int) -> Subspace:
    """Arity-m maps commuting with alpha, as a subspace of flattened tensors."""
    require_validated(L)
    return nullspace(_gamma_matrices(L, m)[1])


def cheng_cai_matrix(L: HomLeibnizAlgebra, m: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """``(B_m, B_{m+1}, D)``: bases of compatible maps in arities m and m+1 (as
    columns) and the matrix ``D`` of ``d_gg`` between them in those bases.

    Raises :class:`NotAComplexError` if ``d_gg`` leaves the compatible maps.
    """
    Bm = compatible_subspace(L, m).matrix()
    Bn = compatible_subspace(L, m + 1).matrix()
    G, _ = _gamma_matrices(L, m)
    images = matmul(G, Bm)
    D = tensor.zeros((Bn.shape[1], Bm.shape[1]))
    for j, coords in enumerate(solve_many(Bn, images)):
        if coords is None:
            raise NotAComplexError(f"d_gamma_gamma does not preserve compatible maps in arity {m}")
        D[:, j] = coords
    return Bm, Bn, D


def cheng_cai_cohomology(L: HomLeibnizAlgebra, n: int, max_degree: int = DEFAULT_MAX_DEGREE,
                         strict: bool = True) -> CohomologyReport:
    """Cohomology of alpha-compatible maps under ``d_gamma_gamma`` in degree n;
    cochains in the report are :class:`GammaCochain` objects."""
    _check_degree(n, max_degree)
    Bn, _, out = cheng_cai_matrix(L, n)
    inc = cheng_cai_matrix(L, n - 1)[2] if n >= 2 else None

    def to_cochain(coords):
        return GammaCochain.from_flat(L.dim, n, tensor.exact(Bn.dot(coords)) if Bn.shape[1] else
                                      tensor.zeros(L.dim ** (n + 1)))

    return _report(n, out, inc, to_cochain, strict)


def betti_numbers(L: HomLeibnizAlgebra, max_degree: int = DEFAULT_MAX_DEGREE,
                  strict: bool = True) -> dict[int, int]:
    return {n: cohomology(L, n, max_degree, strict).betti for n in range(1, max_degree + 1)}
