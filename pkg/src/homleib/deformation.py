"""Truncated one-parameter deformations ``m_t = sum m_i t^i``, ``alpha_t = sum alpha_i t^i``.

Order by order, a deformation must satisfy

    sum_{i+j+k=n} m_i o_{alpha_j} m_k = 0
    sum_{i+j+k=n} m_i(alpha_j x, alpha_k y) - sum_{i+j=n} alpha_i m_j(x, y) = 0

where ``m_i o_{alpha_j} m_k`` is the alpha_j-associator.  Splitting the
order-(n+1) equations into the terms that contain ``(m_{n+1}, alpha_{n+1})``
and the rest gives ``d(m_{n+1}, alpha_{n+1}) = -Obs^n``, so an order-n
deformation extends exactly when ``Obs^n`` is a coboundary.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import tensor
from .algebra import HomLeibnizAlgebra, ValidationReport, Violation
from .cochain import AlphaTypeCochain, CochainError, GammaCochain, require_validated
from .cohomology import DEFAULT_MAX_DEGREE, cohomology, differential_matrix, is_coboundary
from .rational_linalg import is_zero, matmul, solve


class DeformationError(ValueError):
    pass


def alpha_associator(m_i: GammaCochain, m_k: GammaCochain, a_j: GammaCochain) -> GammaCochain:
    """``m_i(a x, m_k(y, z)) - m_i(m_k(x, y), a z) + m_i(m_k(x, z), a y)``."""
    for g, arity in ((m_i, 2), (m_k, 2), (a_j, 1)):
        if g.arity != arity:
            raise CochainError(f"expected arity {arity}, got {g.arity}")
    if not m_i.dim == m_k.dim == a_j.dim:
        raise CochainError("dimension mismatch")
    mi, mk, a = m_i.coeffs, m_k.coeffs, a_j.coeffs
    t1 = tensor.compose(mi, 2, [(a, 1, [0]), (mk, 2, [1, 2])], 3)
    t2 = tensor.compose(mi, 2, [(mk, 2, [0, 1]), (a, 1, [2])], 3)
    t3 = tensor.compose(mi, 2, [(mk, 2, [0, 2]), (a, 1, [1])], 3)
    return GammaCochain(t1 - t2 + t3)


def _twisted_product(m: GammaCochain, a: GammaCochain, b: GammaCochain) -> np.ndarray:
    """``(x, y) -> m(a x, b y)``."""
    return tensor.compose(m.coeffs, 2, [(a.coeffs, 1, [0]), (b.coeffs, 1, [1])], 2)


def _after(a: GammaCochain, m: GammaCochain) -> np.ndarray:
    """``(x, y) -> a(m(x, y))``."""
    return tensor.apply_to_output(a.coeffs, m.coeffs, 2)


@dataclass(frozen=True, eq=False)
class TruncatedDeformation:
    base: HomLeibnizAlgebra
    m_jets: tuple
    a_jets: tuple

    def __post_init__(self):
        m, a = tuple(self.m_jets), tuple(self.a_jets)
        if len(m) != len(a) or not m:
            raise DeformationError("need the same number (at least one) of bracket and structure-map jets")
        d = self.base.dim
        for i, g in enumerate(m):
            if not isinstance(g, GammaCochain) or g.arity != 2 or g.dim != d:
                raise DeformationError(f"m_{i} must be a bilinear map on a {d}-dimensional space")
        for i, g in enumerate(a):
            if not isinstance(g, GammaCochain) or g.arity != 1 or g.dim != d:
                raise DeformationError(f"alpha_{i} must be a linear map on a {d}-dimensional space")
        if not is_zero(m[0].coeffs - self.base.m0):
            raise DeformationError("m_0 must be the bracket of the base algebra")
        if not is_zero(a[0].coeffs - self.base.alpha):
            raise DeformationError("alpha_0 must be the structure map of the base algebra")
        object.__setattr__(self, "m_jets", m)
        object.__setattr__(self, "a_jets", a)

    @property
    def order(self) -> int:
        return len(self.m_jets) - 1

    @property
    def dim(self) -> int:
        return self.base.dim

    @classmethod
    def trivial(cls, L: HomLeibnizAlgebra, order: int) -> TruncatedDeformation:
        d = L.dim
        m = [GammaCochain(L.m0)] + [GammaCochain.zero(d, 2) for _ in range(order)]
        a = [GammaCochain(L.alpha)] + [GammaCochain.zero(d, 1) for _ in range(order)]
        return cls(L, tuple(m), tuple(a))

    @classmethod
    def from_jets(cls, L: HomLeibnizAlgebra, m_jets: Sequence, a_jets: Sequence) -> TruncatedDeformation:
        """Build from jets ``1..N`` (the order-0 jets come from ``L``)."""
        m = [GammaCochain(L.m0)] + [g if isinstance(g, GammaCochain) else GammaCochain(g) for g in m_jets]
        a = [GammaCochain(L.alpha)] + [g if isinstance(g, GammaCochain) else GammaCochain(g) for g in a_jets]
        return cls(L, tuple(m), tuple(a))

    def truncate(self, order: int) -> TruncatedDeformation:
        if not 0 <= order <= self.order:
            raise DeformationError(f"cannot truncate an order-{self.order} deformation to order {order}")
        return TruncatedDeformation(self.base, self.m_jets[:order + 1], self.a_jets[:order + 1])

    def extended_by(self, m_next: GammaCochain, a_next: GammaCochain) -> TruncatedDeformation:
        return TruncatedDeformation(self.base, self.m_jets + (m_next,), self.a_jets + (a_next,))

    def jet(self, n: int) -> AlphaTypeCochain:
        """``(m_n, alpha_n)`` as a degree-2 cochain."""
        return AlphaTypeCochain(self.m_jets[n], self.a_jets[n])

    def is_trivial(self) -> bool:
        return all(self.m_jets[n].is_zero() and self.a_jets[n].is_zero() for n in range(1, self.order + 1))

    def __eq__(self, other):
        if not isinstance(other, TruncatedDeformation):
            return NotImplemented
        return (self.base == other.base and self.m_jets == other.m_jets
                and self.a_jets == other.a_jets)

    def __hash__(self):
        return hash((self.base, self.m_jets, self.a_jets))

    def __repr__(self):
        return f"TruncatedDeformation(base={self.base!r}, order={self.order})"


def _jet(jets: tuple, i: int, d: int, arity: int) -> GammaCochain:
    return jets[i] if i < len(jets) else GammaCochain.zero(d, arity)


def _leibniz_terms(D: TruncatedDeformation, n: int, cap: int) -> np.ndarray:
    """``sum m_i o_{alpha_j} m_k`` over ``i+j+k = n`` with every index ``<= cap``."""
    d = D.dim
    out = tensor.zeros((d,) * 4)
    for i, j in itertools.product(range(n + 1), repeat=2):
        k = n - i - j
        if k < 0 or max(i, j, k) > cap:
            continue
        mi, aj, mk = _jet(D.m_jets, i, d, 2), _jet(D.a_jets, j, d, 1), _jet(D.m_jets, k, d, 2)
        if mi.is_zero() or aj.is_zero() or mk.is_zero():
            continue
        out = out + alpha_associator(mi, mk, aj).coeffs
    return tensor.exact(out)


def _multiplicative_terms(D: TruncatedDeformation, n: int, cap: int) -> np.ndarray:
    """``sum m_i(alpha_j x, alpha_k y) - sum alpha_i m_j(x, y)`` at total order n,
    every index ``<= cap``."""
    d = D.dim
    out = tensor.zeros((d,) * 3)
    for i, j in itertools.product(range(n + 1), repeat=2):
        k = n - i - j
        if k < 0 or max(i, j, k) > cap:
            continue
        out = out + _twisted_product(_jet(D.m_jets, i, d, 2), _jet(D.a_jets, j, d, 1),
                                     _jet(D.a_jets, k, d, 1))
    for i in range(n + 1):
        j = n - i
        if max(i, j) > cap:
            continue
        out = out - _after(_jet(D.a_jets, i, d, 1), _jet(D.m_jets, j, d, 2))
    return tensor.exact(out)


def _violations(defect: np.ndarray, n: int, kind: str) -> list:
    out = []
    d = defect.shape[0]
    for idx in itertools.product(range(d), repeat=defect.ndim - 1):
        col = defect[(slice(None),) + idx]
        if not is_zero(col):
            out.append(Violation((n,) + tuple(i + 1 for i in idx), tensor.exact(col),
                                 tensor.zeros(d), kind))
    return out


def verify(D: TruncatedDeformation) -> ValidationReport:
    """Check both deformation equations at every order ``0..N``.

    A violation's ``where`` is ``(n, i1, i2[, i3])`` with 1-based basis indices;
    ``lhs`` is the value of the equation's left side, which should be zero.
    """
    violations = []
    for n in range(D.order + 1):
        violations += _violations(_leibniz_terms(D, n, D.order), n, "deformation hom-leibniz")
        violations += _violations(_multiplicative_terms(D, n, D.order), n, "deformation multiplicative")
    return ValidationReport(tuple(violations))


def infinitesimal(D: TruncatedDeformation) -> Optional[tuple[int, AlphaTypeCochain]]:
    """``(n, (m_n, alpha_n))`` for the first non-zero jet pair with ``n >= 1``,
    or ``None`` when every jet beyond order 0 vanishes."""
    for n in range(1, D.order + 1):
        c = D.jet(n)
        if not c.is_zero():
            return n, c
    return None


@dataclass(frozen=True, eq=False)
class ObstructionClass:
    """``Obs^n`` as a degree-3 cochain: a trilinear and a bilinear part."""

    order: int
    gamma_part: GammaCochain
    alpha_part: GammaCochain

    def cochain(self) -> AlphaTypeCochain:
        return AlphaTypeCochain(self.gamma_part, self.alpha_part)

    def is_zero(self) -> bool:
        return self.gamma_part.is_zero() and self.alpha_part.is_zero()


def obstruction(D: TruncatedDeformation) -> ObstructionClass:
    """The obstruction to extending ``D`` from order n = D.order to n+1.

    gamma part: ``sum m_i o_{alpha_j} m_k`` over ``i+j+k = n+1``, all indices ``<= n``.
    alpha part: ``sum alpha_i m_j`` over ``i+j = n+1``, ``i, j >= 1``, minus
    ``sum m_i(alpha_j x, alpha_k y)`` over ``i+j+k = n+1``, all indices ``<= n``.

    Only jets up to order n are read.  Any extension must satisfy
    ``d(m_{n+1}, alpha_{n+1}) = -Obs^n``.
    """
    n = D.order
    g = _leibniz_terms(D, n + 1, n)
    a = -_multiplicative_terms(D, n + 1, n)
    return ObstructionClass(n, GammaCochain(g), GammaCochain(a))


@dataclass(frozen=True, eq=False)
class ExtensionResult:
    """Outcome of :func:`extend`: either an order-(n+1) deformation or the
    obstruction class that blocks it."""

    obstruction: ObstructionClass
    deformation: Optional[TruncatedDeformation] = None

    @property
    def obstructed(self) -> bool:
        return self.deformation is None


def extend(D: TruncatedDeformation) -> ExtensionResult:
    """Extend ``D`` by one order by solving ``d(m_{n+1}, alpha_{n+1}) = -Obs^n``.

    An unsolvable system is reported as an obstructed result, not an error.  A
    solution that fails re-verification is an internal error and raises.
    """
    L = D.base
    require_validated(L)
    obs = obstruction(D)
    M = differential_matrix(L, 2)
    x = solve(M, -obs.cochain().flat())
    if x is None:
        return ExtensionResult(obs)
    return ExtensionResult(obs, _checked_extension(D, AlphaTypeCochain.from_flat(L.dim, 2, x)))


def _checked_extension(D: TruncatedDeformation, jets: AlphaTypeCochain) -> TruncatedDeformation:
    out = D.extended_by(jets.gamma_part, jets.alpha_part)
    report = verify(out)
    if not report.passed:
        first = report.violations[0]
        raise RuntimeError(f"extension solved the linear system but fails verification at {first.where}")
    return out


def extend_to(D: TruncatedDeformation, order: int) -> ExtensionResult:
    """Repeat :func:`extend` until ``order`` is reached or an obstruction appears.

    The returned result carries the last obstruction computed; on an obstructed
    outcome its ``order`` tells where extension stopped.
    """
    if order < D.order:
        raise DeformationError(f"deformation already has order {D.order} > {order}")
    result = ExtensionResult(obstruction(D), D)
    while result.deformation is not None and result.deformation.order < order:
        result = extend(result.deformation)
    return result


# -- gauge transformations -----------------------------------------------------

def _compose_series(f: Sequence, g: Sequence, order: int) -> list:
    """Coefficients of ``F o G`` (linear-map series) up to ``order``."""
    d = f[0].shape[0]
    out = []
    for n in range(order + 1):
        acc = tensor.zeros((d, d))
        for i in range(n + 1):
            if i < len(f) and n - i < len(g):
                acc = acc + f[i].dot(g[n - i])
        out.append(tensor.exact(acc))
    return out


@dataclass(frozen=True, eq=False)
class GaugeTransform:
    """``Psi_t = sum psi_i t^i`` with ``psi_0 = Id`` and its truncated inverse."""

    psi_jets: tuple
    inverse_jets: tuple

    @property
    def order(self) -> int:
        return len(self.psi_jets) - 1

    @property
    def dim(self) -> int:
        return self.psi_jets[0].shape[0]


def gauge_from(psi_jets: Sequence) -> GaugeTransform:
    """Build a gauge transform from ``(psi_0 = Id, psi_1, .., psi_N)``.

    The inverse satisfies ``sum_{i+j=n} psi_i psibar_j = 0`` for ``n >= 1``,
    i.e. ``psibar_n = -sum_{i=1}^n psi_i psibar_{n-i}``.
    """
    jets = [np.asarray(p.coeffs if isinstance(p, GammaCochain) else p, dtype=object) for p in psi_jets]
    jets = [tensor.exact(j) for j in jets]
    if not jets:
        raise DeformationError("a gauge transform needs at least psi_0")
    d = jets[0].shape[0]
    for j in jets:
        if j.shape != (d, d):
            raise DeformationError("gauge jets must all be square matrices of one size")
    if not is_zero(jets[0] - tensor.identity(d)):
        raise DeformationError("psi_0 must be the identity")
    inverse = [tensor.identity(d)]
    for n in range(1, len(jets)):
        acc = tensor.zeros((d, d))
        for i in range(1, n + 1):
            acc = acc - jets[i].dot(inverse[n - i])
        inverse.append(tensor.exact(acc))
    for j in jets + inverse:
        j.flags.writeable = False
    return GaugeTransform(tuple(jets), tuple(inverse))


def identity_gauge(d: int, order: int) -> GaugeTransform:
    return gauge_from([tensor.identity(d)] + [tensor.zeros((d, d))] * order)


def apply_gauge(D: TruncatedDeformation, G: GaugeTransform) -> TruncatedDeformation:
    """The transformed deformation ``m' = Psi^-1 o m o (Psi x Psi)``,
    ``alpha' = Psi^-1 o alpha o Psi``, truncated at ``D.order``.

    To first order ``m'_1 - m_1 = d_gg psi_1`` and ``alpha'_1 - alpha_1 = d_ga psi_1``.
    """
    if G.order != D.order:
        raise DeformationError(f"gauge order {G.order} does not match deformation order {D.order}")
    if G.dim != D.dim:
        raise DeformationError("gauge and deformation dimensions differ")
    N = D.order
    psi, inv = G.psi_jets, G.inverse_jets
    d = D.dim
    new_m, new_a = [], []
    for n in range(N + 1):
        m_acc = tensor.zeros((d, d, d))
        a_acc = tensor.zeros((d, d))
        for a, b, c in itertools.product(range(n + 1), repeat=3):
            e = n - a - b - c
            if e >= 0:
                inner = tensor.compose(D.m_jets[b].coeffs, 2, [(psi[c], 1, [0]), (psi[e], 1, [1])], 2)
                m_acc = m_acc + tensor.apply_to_output(inv[a], inner, 2)
            if a + b + c == n:
                a_acc = a_acc + inv[a].dot(D.a_jets[b].coeffs).dot(psi[c])
        new_m.append(GammaCochain(m_acc))
        new_a.append(GammaCochain(a_acc))
    return TruncatedDeformation(D.base, tuple(new_m), tuple(new_a))


def gauge_image_of_trivial(L: HomLeibnizAlgebra, psi_jets: Sequence) -> TruncatedDeformation:
    G = gauge_from(psi_jets)
    return apply_gauge(TruncatedDeformation.trivial(L, G.order), G)


def reduce(D: TruncatedDeformation) -> TruncatedDeformation:
    """Gauge away coboundary infinitesimals until the infinitesimal is not a
    coboundary or every jet up to order N vanishes.

    When ``(m_n, alpha_n) = d(phi)`` the gauge ``Id - phi t^n`` kills the order-n
    jets and leaves lower orders untouched, so at most N steps are taken.
    """
    return reduce_counted(D)[0]


def reduce_counted(D: TruncatedDeformation) -> tuple[TruncatedDeformation, int]:
    """:func:`reduce` together with the number of gauge steps it applied."""
    require_validated(D.base)
    d = D.dim
    steps = 0
    while True:
        inf = infinitesimal(D)
        if inf is None:
            return D, steps
        n, c = inf
        witness = is_coboundary(D.base, c)
        if witness is None:
            return D, steps
        steps += 1
        jets = [tensor.identity(d)] + [tensor.zeros((d, d)) for _ in range(D.order)]
        jets[n] = tensor.exact(-witness.gamma_part.coeffs)
        D = apply_gauge(D, gauge_from(jets))


@dataclass(frozen=True)
class RigidityReport:
    betti2: int
    betti3: int
    verdict: str
    complex_ok: bool = True

    @property
    def rigid(self) -> bool:
        return self.betti2 == 0


RIGID = "rigid (sufficient condition met)"
UNOBSTRUCTED = "all 2-cocycles unobstructed"
INCONCLUSIVE = "inconclusive"


def verdict_for(b2: int, b3: int) -> str:
    if b2 == 0:
        return RIGID
    if b3 == 0:
        return UNOBSTRUCTED
    return INCONCLUSIVE


def rigidity_report(L: HomLeibnizAlgebra) -> RigidityReport:
    """Betti numbers in degrees 2 and 3 and the verdict they support.

    Degree 3 may sit where consecutive differentials fail to compose to zero;
    the report then uses the non-strict cohomology and says so.
    """
    r2 = cohomology(L, 2, max(DEFAULT_MAX_DEGREE, 3), strict=False)
    r3 = cohomology(L, 3, max(DEFAULT_MAX_DEGREE, 3), strict=False)
    return RigidityReport(r2.betti, r3.betti, verdict_for(r2.betti, r3.betti),
                          r2.is_complex and r3.is_complex)
