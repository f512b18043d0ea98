"""Multilinear cochains with values in L and the partial differentials of the
alpha-type complex.

A degree-n cochain is a pair ``(phi, psi)``: ``phi`` is n-linear and ``psi``
is (n-1)-linear (absent in degree 1).  The total differential is

    d(phi, psi) = (d_gg phi - d_ag psi,  d_ga phi - d_aa psi).

Every ``_d*`` helper below accepts tensors with trailing batch axes, which is
how ``cohomology`` turns a stack of basis cochains into a matrix.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Iterator, Optional

import numpy as np

from . import tensor
from .algebra import AlgebraError, HomLeibnizAlgebra, basis_vector, bracket_eval
from .rational_linalg import as_vector, is_zero, normalize


class CochainError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class GammaCochain:
    """An m-linear map ``L^m -> L`` stored as ``coeffs[k, i1, .., im]``."""

    coeffs: np.ndarray

    def __post_init__(self):
        T = tensor.exact(self.coeffs)
        if T.ndim < 2 or len(set(T.shape)) != 1:
            raise CochainError(f"cochain tensor must have shape (d,)*(m+1) with m >= 1, got {T.shape}")
        T.flags.writeable = False
        object.__setattr__(self, "coeffs", T)

    @property
    def dim(self) -> int:
        return self.coeffs.shape[0]

    @property
    def arity(self) -> int:
        return self.coeffs.ndim - 1

    @classmethod
    def zero(cls, dim: int, arity: int) -> GammaCochain:
        return cls(tensor.zeros((dim,) * (arity + 1)))

    @classmethod
    def from_flat(cls, dim: int, arity: int, vec) -> GammaCochain:
        v = as_vector(vec)
        if v.shape[0] != dim ** (arity + 1):
            raise CochainError(f"need {dim ** (arity + 1)} entries for arity {arity}, got {v.shape[0]}")
        return cls(v.reshape((dim,) * (arity + 1)))

    @classmethod
    def from_function(cls, dim: int, arity: int, f: Callable) -> GammaCochain:
        """Tabulate ``f(e_i1, .., e_im)`` over all basis tuples."""
        T = tensor.zeros((dim,) * (arity + 1))
        for idx in itertools.product(range(dim), repeat=arity):
            T[(slice(None),) + idx] = as_vector(f(*[basis_vector(dim, i) for i in idx]))
        return cls(T)

    @classmethod
    def identity(cls, dim: int) -> GammaCochain:
        return cls(tensor.identity(dim))

    @classmethod
    def basis(cls, dim: int, arity: int) -> Iterator[GammaCochain]:
        n = dim ** (arity + 1)
        for t in range(n):
            v = tensor.zeros(n)
            v[t] = 1
            yield cls.from_flat(dim, arity, v)

    def flat(self) -> np.ndarray:
        return self.coeffs.reshape(-1).copy()

    def __call__(self, *vectors) -> np.ndarray:
        if len(vectors) != self.arity:
            raise CochainError(f"expected {self.arity} arguments, got {len(vectors)}")
        return tensor.evaluate(self.coeffs, *[as_vector(v) for v in vectors])

    def is_zero(self) -> bool:
        return is_zero(self.coeffs)

    def _check(self, other: GammaCochain) -> None:
        if not isinstance(other, GammaCochain):
            raise TypeError(f"cannot combine GammaCochain with {type(other).__name__}")
        if other.coeffs.shape != self.coeffs.shape:
            raise CochainError(f"shape mismatch: arity {self.arity}/dim {self.dim} "
                               f"vs arity {other.arity}/dim {other.dim}")

    def __add__(self, other):
        self._check(other)
        return GammaCochain(self.coeffs + other.coeffs)

    def __sub__(self, other):
        self._check(other)
        return GammaCochain(self.coeffs - other.coeffs)

    def __neg__(self):
        return GammaCochain(-self.coeffs)

    def __mul__(self, scalar):
        return GammaCochain(self.coeffs * normalize(scalar))

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, GammaCochain):
            return NotImplemented
        return self.coeffs.shape == other.coeffs.shape and is_zero(self.coeffs - other.coeffs)

    def __hash__(self):
        return hash((self.coeffs.shape, tuple(self.coeffs.flat)))

    def __repr__(self):
        return f"GammaCochain(dim={self.dim}, arity={self.arity})"


@dataclass(frozen=True, eq=False)
class AlphaTypeCochain:
    """An element ``(phi, psi)`` of the degree-n alpha-type cochain space."""

    gamma_part: GammaCochain
    alpha_part: Optional[GammaCochain] = None

    def __post_init__(self):
        g, a = self.gamma_part, self.alpha_part
        if g.arity == 1:
            if a is not None:
                raise CochainError("degree-1 cochains have no alpha part")
        else:
            if a is None:
                object.__setattr__(self, "alpha_part", GammaCochain.zero(g.dim, g.arity - 1))
            elif a.dim != g.dim or a.arity != g.arity - 1:
                raise CochainError(f"alpha part must have arity {g.arity - 1} and dim {g.dim}")

    @property
    def degree(self) -> int:
        return self.gamma_part.arity

    @property
    def dim(self) -> int:
        return self.gamma_part.dim

    @staticmethod
    def space_dim(dim: int, degree: int) -> int:
        if degree < 1:
            raise CochainError("cochain degrees start at 1")
        return dim ** (degree + 1) + (dim ** degree if degree >= 2 else 0)

    @classmethod
    def zero(cls, dim: int, degree: int) -> AlphaTypeCochain:
        if degree < 1:
            raise CochainError("cochain degrees start at 1")
        a = GammaCochain.zero(dim, degree - 1) if degree >= 2 else None
        return cls(GammaCochain.zero(dim, degree), a)

    @classmethod
    def from_flat(cls, dim: int, degree: int, vec) -> AlphaTypeCochain:
        """Inverse of :meth:`flat`: gamma block first, then alpha block."""
        v = as_vector(vec)
        if v.shape[0] != cls.space_dim(dim, degree):
            raise CochainError(f"need {cls.space_dim(dim, degree)} entries for degree {degree}, got {v.shape[0]}")
        ng = dim ** (degree + 1)
        g = GammaCochain.from_flat(dim, degree, v[:ng])
        a = GammaCochain.from_flat(dim, degree - 1, v[ng:]) if degree >= 2 else None
        return cls(g, a)

    def flat(self) -> np.ndarray:
        if self.alpha_part is None:
            return self.gamma_part.flat()
        return np.concatenate([self.gamma_part.flat(), self.alpha_part.flat()])

    def is_zero(self) -> bool:
        return self.gamma_part.is_zero() and (self.alpha_part is None or self.alpha_part.is_zero())

    def _combine(self, other, op) -> AlphaTypeCochain:
        if not isinstance(other, AlphaTypeCochain):
            raise TypeError(f"cannot combine AlphaTypeCochain with {type(other).__name__}")
        if other.degree != self.degree or other.dim != self.dim:
            raise CochainError("degree or dimension mismatch")
        a = None if self.alpha_part is None else op(self.alpha_part, other.alpha_part)
        return AlphaTypeCochain(op(self.gamma_part, other.gamma_part), a)

    def __add__(self, other):
        return self._combine(other, lambda x, y: x + y)

    def __sub__(self, other):
        return self._combine(other, lambda x, y: x - y)

    def __neg__(self):
        return self * -1

    def __mul__(self, scalar):
        a = None if self.alpha_part is None else self.alpha_part * scalar
        return AlphaTypeCochain(self.gamma_part * scalar, a)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, AlphaTypeCochain):
            return NotImplemented
        return self.degree == other.degree and self.dim == other.dim and (self - other).is_zero()

    def __hash__(self):
        return hash((self.degree, tuple(self.flat())))

    def __repr__(self):
        return f"AlphaTypeCochain(dim={self.dim}, degree={self.degree})"


# -- batched kernels ----------------------------------------------------------

def _coboundary_like(L: HomLeibnizAlgebra, T: np.ndarray, m: int, power: int) -> np.ndarray:
    """The Leibniz-type coboundary of an m-ary ``T`` with ``alpha^power`` on the
    outer bracket arguments; ``alpha`` itself twists the untouched arguments of
    the insertion terms."""
    m0, A = L.m0, L.alpha
    P = L.alpha_power(power)
    N = m + 1
    out = tensor.compose(m0, 2, [(P, 1, [0]), (T, m, list(range(1, N)))], N)
    for i in range(2, N + 1):
        rest = [p for p in range(N) if p != i - 1]
        out = out + (-1) ** i * tensor.compose(m0, 2, [(T, m, rest), (P, 1, [i - 1])], N)
    for i in range(1, N + 1):
        for j in range(i + 1, N + 1):
            inners = []
            for l in range(1, N + 1):
                if l == j:
                    continue
                if l == i:
                    inners.append((m0, 2, [i - 1, j - 1]))
                else:
                    inners.append((A, 1, [l - 1]))
            out = out + (-1) ** (j + 1) * tensor.compose(T, m, inners, N)
    return out


def _dgg(L: HomLeibnizAlgebra, T: np.ndarray, m: int) -> np.ndarray:
    return _coboundary_like(L, T, m, m - 1)


def _daa(L: HomLeibnizAlgebra, T: np.ndarray, m: int) -> np.ndarray:
    # psi has arity m = n - 1 in degree n; the twist exponent is n - 1 = m
    return _coboundary_like(L, T, m, m)


def _dga(L: HomLeibnizAlgebra, T: np.ndarray, m: int) -> np.ndarray:
    return tensor.apply_to_output(L.alpha, T, m) - tensor.apply_to_slots(T, m, L.alpha)


def _dag(L: HomLeibnizAlgebra, T: np.ndarray, m: int) -> np.ndarray:
    """psi of arity m = n - 1 (degree n >= 2) to an (n+1)-ary map, with the
    factor alpha^(n-2) on the double-bracket arguments."""
    if m < 1:
        raise CochainError("d_alpha_gamma needs an alpha part of arity >= 1 (degree >= 2)")
    m0 = L.m0
    P = L.alpha_power(m - 1)
    twisted_bracket = tensor.compose(m0, 2, [(P, 1, [0]), (P, 1, [1])], 2)
    N = m + 2
    out = None
    for i in range(2, N + 1):
        rest = [p for p in range(1, N) if p != i - 1]
        inner = (tensor.compose(m0, 2, [(twisted_bracket, 2, [0, i - 1]), (T, m, rest)], N))
        term = (-1) ** i * inner
        out = term if out is None else out + term
    for i in range(2, N + 1):
        for j in range(i + 1, N + 1):
            rest = [p for p in range(N) if p not in (i - 1, j - 1)]
            term = tensor.compose(m0, 2, [(T, m, rest), (twisted_bracket, 2, [i - 1, j - 1])], N)
            out = out + (-1) ** j * term
    return out


# -- public operations ----------------------------------------------------------

def _check_dim(L: HomLeibnizAlgebra, c: GammaCochain) -> None:
    if not isinstance(c, GammaCochain):
        raise TypeError(f"expected a GammaCochain, got {type(c).__name__}")
    if c.dim != L.dim:
        raise CochainError(f"cochain dimension {c.dim} does not match algebra dimension {L.dim}")


def d_gamma_gamma(L: HomLeibnizAlgebra, phi: GammaCochain) -> GammaCochain:
    _check_dim(L, phi)
    return GammaCochain(_dgg(L, phi.coeffs, phi.arity))


def d_alpha_alpha(L: HomLeibnizAlgebra, psi: GammaCochain) -> GammaCochain:
    _check_dim(L, psi)
    return GammaCochain(_daa(L, psi.coeffs, psi.arity))


def d_gamma_alpha(L: HomLeibnizAlgebra, phi: GammaCochain) -> GammaCochain:
    _check_dim(L, phi)
    return GammaCochain(_dga(L, phi.coeffs, phi.arity))


def d_alpha_gamma(L: HomLeibnizAlgebra, psi: GammaCochain) -> GammaCochain:
    _check_dim(L, psi)
    return GammaCochain(_dag(L, psi.coeffs, psi.arity))


def require_validated(L: HomLeibnizAlgebra) -> None:
    if not L.is_valid():
        raise AlgebraError(f"{L!r} is not a multiplicative Hom-Leibniz algebra; "
                           "cohomology is only defined for validated algebras")


def differential(L: HomLeibnizAlgebra, c: AlphaTypeCochain) -> AlphaTypeCochain:
    require_validated(L)
    if c.dim != L.dim:
        raise CochainError(f"cochain dimension {c.dim} does not match algebra dimension {L.dim}")
    phi, psi = c.gamma_part, c.alpha_part
    g = d_gamma_gamma(L, phi)
    a = d_gamma_alpha(L, phi)
    if psi is not None:
        g = g - d_alpha_gamma(L, psi)
        a = a - d_alpha_alpha(L, psi)
    return AlphaTypeCochain(g, a)


def is_alpha_compatible(L: HomLeibnizAlgebra, phi: GammaCochain) -> bool:
    """``alpha o phi == phi o alpha^{(x)m}``."""
    return d_gamma_alpha(L, phi).is_zero()


def cheng_cai_delta(L: HomLeibnizAlgebra, phi: GammaCochain) -> GammaCochain:
    """The same coboundary as :func:`d_gamma_gamma`, evaluated pointwise on basis
    tuples with vector brackets instead of tensor contractions.

    Kept as a second code path for cross-checking the tensor kernels.
    """
    _check_dim(L, phi)
    n = phi.arity
    N = n + 1
    P = L.alpha_power(n - 1)
    A = L.alpha

    def value(*x):
        br = lambda u, v: bracket_eval(L, u, v)
        s = br(P.dot(x[0]), phi(*x[1:]))
        for i in range(2, N + 1):
            rest = x[:i - 1] + x[i:]
            s = s + (-1) ** i * br(phi(*rest), P.dot(x[i - 1]))
        for i in range(1, N + 1):
            for j in range(i + 1, N + 1):
                args = [br(x[i - 1], x[j - 1]) if l == i else A.dot(x[l - 1])
                        for l in range(1, N + 1) if l != j]
                s = s + (-1) ** (j + 1) * phi(*args)
        return s

    return GammaCochain.from_function(L.dim, N, value)


def bracket_cochain(L: HomLeibnizAlgebra) -> GammaCochain:
    """The bracket of ``L`` as a 2-ary cochain."""
    return GammaCochain(L.m0)


def alpha_cochain(L: HomLeibnizAlgebra) -> GammaCochain:
    return GammaCochain(L.alpha)
