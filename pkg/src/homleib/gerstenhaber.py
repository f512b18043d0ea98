"""Circle product and graded bracket on shifted alpha-compatible cochains.

A shifted cochain of degree p is an alpha-compatible (p+1)-linear map.  For
``psi`` of degree q and ``phi`` of degree p,

    (psi o phi)(x_1, .., x_{p+q+1})
        = sum_{k=1}^{q+1} (-1)^{p(k-1)} sum_{s in Sh(p, q-k+1)} sgn(s)
          psi(a^p x_1, .., a^p x_{k-1}, phi(x_k, x_{s(k+1)}, .., x_{s(k+p)}),
              a^p x_{s(k+p+1)}, .., a^p x_{s(p+q+1)})

where each shuffle permutes the window ``k+1 .. p+q+1``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from . import tensor
from .algebra import HomLeibnizAlgebra
from .cochain import CochainError, GammaCochain, _dgg, is_alpha_compatible


class IncompatibleCochainError(CochainError):
    """A map that does not commute with the structure map was used as a shifted cochain."""


@dataclass(frozen=True)
class ShiftedCochain:
    ch_degree: int
    map: GammaCochain

    def __post_init__(self):
        if self.ch_degree < 0:
            raise CochainError("shifted degrees start at 0")
        if self.map.arity != self.ch_degree + 1:
            raise CochainError(f"degree {self.ch_degree} needs a map of arity {self.ch_degree + 1}, "
                               f"got {self.map.arity}")

    @classmethod
    def of(cls, g: GammaCochain) -> ShiftedCochain:
        return cls(g.arity - 1, g)

    @property
    def dim(self) -> int:
        return self.map.dim

    def is_zero(self) -> bool:
        return self.map.is_zero()

    def __add__(self, other: ShiftedCochain) -> ShiftedCochain:
        return ShiftedCochain(self.ch_degree, self.map + other.map)

    def __sub__(self, other: ShiftedCochain) -> ShiftedCochain:
        return ShiftedCochain(self.ch_degree, self.map - other.map)

    def __neg__(self) -> ShiftedCochain:
        return ShiftedCochain(self.ch_degree, -self.map)

    def __mul__(self, scalar) -> ShiftedCochain:
        return ShiftedCochain(self.ch_degree, self.map * scalar)

    __rmul__ = __mul__


@dataclass(frozen=True)
class SignedShuffle:
    permutation: tuple
    sign: int


def _inversion_sign(perm) -> int:
    inversions = sum(1 for a, b in itertools.combinations(perm, 2) if a > b)
    return -1 if inversions % 2 else 1


@lru_cache(maxsize=None)
def _shuffles(p: int, q: int) -> tuple:
    out = []
    for first in itertools.combinations(range(p + q), p):
        rest = tuple(i for i in range(p + q) if i not in first)
        perm = first + rest
        out.append(SignedShuffle(perm, _inversion_sign(perm)))
    return tuple(sorted(out, key=lambda s: s.permutation))


def shuffles(p: int, q: int) -> list[SignedShuffle]:
    """All (p, q)-shuffles of ``0..p+q-1`` in lexicographic order.

    ``permutation[t]`` is the letter placed at position t: the first p entries
    increase, and so do the last q.
    """
    if p < 0 or q < 0:
        raise ValueError("shuffle block sizes must be non-negative")
    return list(_shuffles(p, q))


def _require_compatible(L: HomLeibnizAlgebra, *cochains: ShiftedCochain) -> None:
    for c in cochains:
        if c.dim != L.dim:
            raise CochainError(f"cochain dimension {c.dim} does not match algebra dimension {L.dim}")
        if not is_alpha_compatible(L, c.map):
            raise IncompatibleCochainError(f"degree-{c.ch_degree} cochain does not commute with alpha")


def _circle(L: HomLeibnizAlgebra, psi: ShiftedCochain, phi: ShiftedCochain) -> GammaCochain:
    q, p = psi.ch_degree, phi.ch_degree
    P = L.alpha_power(p)
    n = p + q + 1
    out = tensor.zeros((L.dim,) * (n + 1))
    for k in range(1, q + 2):
        outer_sign = (-1) ** (p * (k - 1))
        window = list(range(k, n))  # 0-based positions of x_{k+1} .. x_{p+q+1}
        for s in _shuffles(p, q - k + 1):
            letters = [window[i] for i in s.permutation]
            inners = [(P, 1, [pos]) for pos in range(k - 1)]
            inners.append((phi.map.coeffs, p + 1, [k - 1] + letters[:p]))
            inners += [(P, 1, [pos]) for pos in letters[p:]]
            out = out + (outer_sign * s.sign) * tensor.compose(psi.map.coeffs, q + 1, inners, n)
    return GammaCochain(out)


def circle(psi: ShiftedCochain, phi: ShiftedCochain, L: HomLeibnizAlgebra) -> ShiftedCochain:
    _require_compatible(L, psi, phi)
    result = ShiftedCochain(psi.ch_degree + phi.ch_degree, _circle(L, psi, phi))
    if not is_alpha_compatible(L, result.map):
        raise IncompatibleCochainError("circle product left the alpha-compatible maps")
    return result


def bracket(psi: ShiftedCochain, phi: ShiftedCochain, L: HomLeibnizAlgebra) -> ShiftedCochain:
    """``[psi, phi] = psi o phi + (-1)^(pq+1) phi o psi``."""
    q, p = psi.ch_degree, phi.ch_degree
    return circle(psi, phi, L) + (-1) ** (p * q + 1) * circle(phi, psi, L)


def d_graded(phi: ShiftedCochain, L: HomLeibnizAlgebra) -> ShiftedCochain:
    """``(-1)^|phi| delta(phi)`` with ``|phi| = p + 1`` and delta the compatible-map
    coboundary ``d_gamma_gamma``."""
    _require_compatible(L, phi)
    p = phi.ch_degree
    delta = GammaCochain(_dgg(L, phi.map.coeffs, p + 1))
    return ShiftedCochain(p + 1, delta * (-1) ** (p + 1))


def bracket_cochain(L: HomLeibnizAlgebra) -> ShiftedCochain:
    """The bracket of ``L`` as a shifted cochain of degree 1."""
    return ShiftedCochain(1, GammaCochain(L.m0))
