"""Finite group actions on Hom-Leibniz algebras, invariant cochains, and the
equivariant versions of cohomology and deformation extension.

A group element acts on cochains by ``(g.c)(x_1, .., x_n) = g c(g^-1 x_1, .., g^-1 x_n)``,
so a cochain is invariant exactly when it is fixed by every ``g``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence

import numpy as np

from . import tensor
from .algebra import AlgebraError, HomLeibnizAlgebra, ValidationReport, Violation
from .cochain import AlphaTypeCochain, CochainError, GammaCochain, require_validated
from .cohomology import (DEFAULT_MAX_DEGREE, CohomologyReport, NotAComplexError, _check_degree,
                         _report, differential_matrix)
from .deformation import (ExtensionResult, ObstructionClass, RigidityReport, TruncatedDeformation,
                          _checked_extension, apply_gauge, gauge_from, infinitesimal, obstruction,
                          verdict_for)
from .rational_linalg import Subspace, as_matrix, is_zero, matmul, nullspace, rank, solve, solve_many


class GroupError(ValueError):
    pass


class NonEquivariantError(ValueError):
    """A deformation jet is not invariant under the group action."""

    def __init__(self, message: str, kind: str = "", index: int = -1):
        super().__init__(message)
        self.kind = kind
        self.index = index


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    """A finite group given by its multiplication table ``mult_table[a][b] = ab``."""

    mult_table: tuple

    def __post_init__(self):
        table = tuple(tuple(int(x) for x in row) for row in self.mult_table)
        n = len(table)
        if n == 0 or any(len(row) != n for row in table):
            raise GroupError("multiplication table must be a non-empty square table")
        if any(not 0 <= x < n for row in table for x in row):
            raise GroupError("multiplication table entries must be element indices 0..order-1")
        identities = [e for e in range(n) if all(table[e][g] == g and table[g][e] == g for g in range(n))]
        if not identities:
            raise GroupError("multiplication table has no identity element")
        e = identities[0]
        inverse = []
        for g in range(n):
            inv = [h for h in range(n) if table[g][h] == e and table[h][g] == e]
            if not inv:
                raise GroupError(f"element {g} has no inverse")
            inverse.append(inv[0])
        for a, b, c in itertools.product(range(n), repeat=3):
            if table[table[a][b]][c] != table[a][table[b][c]]:
                raise GroupError(f"multiplication is not associative on ({a}, {b}, {c})")
        object.__setattr__(self, "mult_table", table)
        object.__setattr__(self, "identity", e)
        object.__setattr__(self, "inverse", tuple(inverse))

    @property
    def order(self) -> int:
        return len(self.mult_table)

    def mul(self, a: int, b: int) -> int:
        return self.mult_table[a][b]

    @classmethod
    def trivial(cls) -> FiniteGroup:
        return cls(((0,),))

    @classmethod
    def cyclic(cls, n: int) -> FiniteGroup:
        return cls(tuple(tuple((a + b) % n for b in range(n)) for a in range(n)))


@dataclass(frozen=True, eq=False)
class GroupAction:
    """One matrix ``rep[g]`` per group element, in the same column convention as alpha."""

    group: FiniteGroup
    reps: tuple

    def __post_init__(self):
        reps = tuple(as_matrix(r) for r in self.reps)
        if len(reps) != self.group.order:
            raise GroupError(f"need {self.group.order} matrices, got {len(reps)}")
        d = reps[0].shape[0]
        for r in reps:
            if r.shape != (d, d):
                raise GroupError("representation matrices must all be square of one size")
            r.flags.writeable = False
        object.__setattr__(self, "reps", reps)

    @property
    def dim(self) -> int:
        return self.reps[0].shape[0]

    def rep(self, g: int) -> np.ndarray:
        return self.reps[g]

    @classmethod
    def trivial(cls, d: int) -> GroupAction:
        return cls(FiniteGroup.trivial(), (tensor.identity(d),))

    def __hash__(self):
        return hash((self.group.mult_table, tuple(tuple(r.flat) for r in self.reps)))

    def __eq__(self, other):
        if not isinstance(other, GroupAction):
            return NotImplemented
        return (self.group.mult_table == other.group.mult_table
                and all(np.array_equal(a, b) for a, b in zip(self.reps, other.reps)))


def verify_action(L: HomLeibnizAlgebra, action: GroupAction) -> ValidationReport:
    """Check, for every element: invertibility, ``rep(e) = Id``,
    ``rep(gh) = rep(g) rep(h)``, ``g[x, y] = [gx, gy]`` and ``alpha(gx) = g alpha(x)``.

    ``where`` holds 0-based group elements followed by 1-based basis indices.
    """
    if action.dim != L.dim:
        raise GroupError(f"action on a {action.dim}-dimensional space, algebra has dimension {L.dim}")
    G = action.group
    d = L.dim
    out = []
    for g in range(G.order):
        if rank(action.rep(g)) != d:
            out.append(Violation((g,), action.rep(g), tensor.identity(d), "invertible"))
    I = tensor.identity(d)
    if not is_zero(action.rep(G.identity) - I):
        out.append(Violation((G.identity,), action.rep(G.identity), I, "identity acts trivially"))
    for g, h in itertools.product(range(G.order), repeat=2):
        lhs = action.rep(G.mul(g, h))
        rhs = matmul(action.rep(g), action.rep(h))
        if not is_zero(lhs - rhs):
            out.append(Violation((g, h), lhs, rhs, "homomorphism"))
    m, A = L.m0, L.alpha
    for g in range(G.order):
        R = action.rep(g)
        lhs = tensor.apply_to_output(R, m, 2)
        rhs = tensor.apply_to_slots(m, 2, R)
        for i, j in itertools.product(range(d), repeat=2):
            a, b = tensor.exact(lhs[:, i, j]), tensor.exact(rhs[:, i, j])
            if not is_zero(a - b):
                out.append(Violation((g, i + 1, j + 1), a, b, "bracket equivariance"))
        AR, RA = matmul(A, R), matmul(R, A)
        for j in range(d):
            if not is_zero(AR[:, j] - RA[:, j]):
                out.append(Violation((g, j + 1), AR[:, j], RA[:, j], "structure-map equivariance"))
    return ValidationReport(tuple(out))


def _require_action(L: HomLeibnizAlgebra, action: GroupAction) -> None:
    report = verify_action(L, action)
    if not report.passed:
        v = report.violations[0]
        raise GroupError(f"not an action on this algebra: {v.kind} fails at {v.where}")


def _act(action: GroupAction, g: int, T: np.ndarray, arity: int) -> np.ndarray:
    R = action.rep(g)
    Rinv = action.rep(action.group.inverse[g])
    return tensor.apply_to_output(R, tensor.apply_to_slots(T, arity, Rinv), arity)


def act_on_map(action: GroupAction, g: int, c: GammaCochain) -> GammaCochain:
    if c.dim != action.dim:
        raise CochainError("cochain dimension does not match the action")
    return GammaCochain(_act(action, g, c.coeffs, c.arity))


def cochain_action(action: GroupAction, g: int, c):
    """``g.c`` for a :class:`GammaCochain` or an :class:`AlphaTypeCochain`."""
    if isinstance(c, GammaCochain):
        return act_on_map(action, g, c)
    a = None if c.alpha_part is None else act_on_map(action, g, c.alpha_part)
    return AlphaTypeCochain(act_on_map(action, g, c.gamma_part), a)


def reynolds(action: GroupAction, c):
    """Average ``(1/|G|) sum_g g.c``: the projection onto invariant cochains."""
    total = None
    for g in range(action.group.order):
        t = cochain_action(action, g, c)
        total = t if total is None else total + t
    return total * Fraction(1, action.group.order)


def is_invariant(action: GroupAction, c) -> bool:
    return all(cochain_action(action, g, c) == c for g in range(action.group.order))


@lru_cache(maxsize=64)
def _map_action_matrix(action: GroupAction, g: int, arity: int) -> np.ndarray:
    d = action.dim
    k = d ** (arity + 1)
    E = tensor.identity(k).reshape((d,) * (arity + 1) + (k,))
    return tensor.exact(_act(action, g, E, arity).reshape(k, k))


def action_matrix(action: GroupAction, g: int, degree: int) -> np.ndarray:
    """Matrix of ``c -> g.c`` on flattened degree-n alpha-type cochains."""
    top = _map_action_matrix(action, g, degree)
    if degree == 1:
        return top
    bottom = _map_action_matrix(action, g, degree - 1)
    M = tensor.zeros((top.shape[0] + bottom.shape[0],) * 2)
    M[: top.shape[0], : top.shape[0]] = top
    M[top.shape[0]:, top.shape[0]:] = bottom
    return M


@lru_cache(maxsize=64)
def _invariant_subspace(action: GroupAction, degree: int) -> Subspace:
    blocks = []
    for g in range(action.group.order):
        M = action_matrix(action, g, degree)
        blocks.append(M - tensor.identity(M.shape[0]))
    return nullspace(np.vstack(blocks))


def invariant_subspace(action: GroupAction, degree: int) -> Subspace:
    """Invariant degree-n cochains: the common fixed space of all ``g``."""
    return _invariant_subspace(action, degree)


@lru_cache(maxsize=64)
def _invariant_map_subspace(action: GroupAction, arity: int) -> Subspace:
    blocks = []
    for g in range(action.group.order):
        M = _map_action_matrix(action, g, arity)
        blocks.append(M - tensor.identity(M.shape[0]))
    return nullspace(np.vstack(blocks))


@dataclass(frozen=True, eq=False)
class InvariantSubcomplexSlice:
    """Invariant cochains of one degree and the differential in invariant coordinates.

    ``differential`` has one column per basis element of ``basis`` and one row
    per basis element of ``target_basis`` (the invariant cochains one degree up).
    """

    degree: int
    basis: Subspace
    target_basis: Subspace
    differential: np.ndarray

    @property
    def dim(self) -> int:
        return self.basis.dim

    def cochain(self, coords) -> AlphaTypeCochain:
        d = _dim_from_space(self.basis.ambient_dim, self.degree)
        return AlphaTypeCochain.from_flat(d, self.degree, self.basis.combination(coords))


def _dim_from_space(size: int, degree: int) -> int:
    d = 1
    while AlphaTypeCochain.space_dim(d, degree) < size:
        d += 1
    return d


@lru_cache(maxsize=64)
def _restricted(L: HomLeibnizAlgebra, action: GroupAction, n: int) -> InvariantSubcomplexSlice:
    src = _invariant_subspace(action, n)
    dst = _invariant_subspace(action, n + 1)
    images = matmul(differential_matrix(L, n), src.matrix())
    D = tensor.zeros((dst.dim, src.dim))
    for j, coords in enumerate(solve_many(dst.matrix(), images)):
        if coords is None:
            raise NotAComplexError(f"the differential of an invariant degree-{n} cochain is not invariant")
        D[:, j] = coords
    return InvariantSubcomplexSlice(n, src, dst, D)


def invariant_slice(L: HomLeibnizAlgebra, action: GroupAction, n: int,
                    max_degree: int = DEFAULT_MAX_DEGREE) -> InvariantSubcomplexSlice:
    _check_degree(n, max_degree)
    require_validated(L)
    _require_action(L, action)
    return _restricted(L, action, n)


def equivariant_cohomology(L: HomLeibnizAlgebra, action: GroupAction, n: int,
                           max_degree: int = DEFAULT_MAX_DEGREE, strict: bool = True) -> CohomologyReport:
    """Cohomology of the invariant subcomplex; cochains in the report are ambient."""
    s = invariant_slice(L, action, n, max_degree)
    inc = invariant_slice(L, action, n - 1, max_degree).differential if n >= 2 else None
    return _report(n, s.differential, inc, s.cochain, strict)


# -- equivariant deformations ----------------------------------------------------

def check_equivariant_jets(D: TruncatedDeformation, action: GroupAction) -> None:
    """Raise :class:`NonEquivariantError` naming the first non-invariant jet."""
    for i, m in enumerate(D.m_jets):
        if not is_invariant(action, m):
            raise NonEquivariantError(f"bracket jet m_{i} is not equivariant", "m", i)
    for i, a in enumerate(D.a_jets):
        if not is_invariant(action, a):
            raise NonEquivariantError(f"structure-map jet alpha_{i} is not equivariant", "alpha", i)


def equivariant_obstruction(D: TruncatedDeformation, action: GroupAction) -> ObstructionClass:
    """Same sums as the plain obstruction, after checking every jet is equivariant;
    the result is asserted to be invariant."""
    _require_action(D.base, action)
    check_equivariant_jets(D, action)
    obs = obstruction(D)
    if not is_invariant(action, obs.cochain()):
        raise RuntimeError("obstruction of equivariant jets is not invariant")
    return obs


def equivariant_extend(D: TruncatedDeformation, action: GroupAction) -> ExtensionResult:
    """Solve ``d(m_{n+1}, alpha_{n+1}) = -Obs^n`` inside the invariant degree-2
    cochains, so the new jets are equivariant by construction."""
    require_validated(D.base)
    obs = equivariant_obstruction(D, action)
    B = invariant_subspace(action, 2)
    if B.dim == 0:
        rhs = obs.cochain()
        if not rhs.is_zero():
            return ExtensionResult(obs)
        return ExtensionResult(obs, _checked_extension(D, AlphaTypeCochain.zero(D.dim, 2)))
    M = matmul(differential_matrix(D.base, 2), B.matrix())
    y = solve(M, -obs.cochain().flat())
    if y is None:
        return ExtensionResult(obs)
    x = tensor.exact(B.matrix().dot(y))
    return ExtensionResult(obs, _checked_extension(D, AlphaTypeCochain.from_flat(D.dim, 2, x)))


def equivariant_extend_to(D: TruncatedDeformation, action: GroupAction, order: int) -> ExtensionResult:
    if order < D.order:
        raise ValueError(f"deformation already has order {D.order} > {order}")
    result = ExtensionResult(equivariant_obstruction(D, action), D)
    while result.deformation is not None and result.deformation.order < order:
        result = equivariant_extend(result.deformation, action)
    return result


def equivariant_reduce(D: TruncatedDeformation, action: GroupAction) -> TruncatedDeformation:
    """:func:`deformation.reduce` with every gauge jet drawn from the invariant
    linear maps, so equivariant deformations stay equivariant."""
    require_validated(D.base)
    check_equivariant_jets(D, action)
    d = D.dim
    B = invariant_subspace(action, 1)
    M = matmul(differential_matrix(D.base, 1), B.matrix()) if B.dim else None
    while True:
        inf = infinitesimal(D)
        if inf is None:
            return D
        n, c = inf
        y = solve(M, c.flat()) if M is not None else None
        if y is None:
            return D
        phi = tensor.exact(B.matrix().dot(y)).reshape(d, d)
        jets = [tensor.identity(d)] + [tensor.zeros((d, d)) for _ in range(D.order)]
        jets[n] = tensor.exact(-phi)
        D = apply_gauge(D, gauge_from(jets))


def equivariant_rigidity_report(L: HomLeibnizAlgebra, action: GroupAction) -> RigidityReport:
    r2 = equivariant_cohomology(L, action, 2, max(DEFAULT_MAX_DEGREE, 3), strict=False)
    r3 = equivariant_cohomology(L, action, 3, max(DEFAULT_MAX_DEGREE, 3), strict=False)
    return RigidityReport(r2.betti, r3.betti, verdict_for(r2.betti, r3.betti),
                          r2.is_complex and r3.is_complex)


def fixed_subalgebra(L: HomLeibnizAlgebra, action: GroupAction,
                     subgroup: Sequence[int]) -> tuple[HomLeibnizAlgebra, np.ndarray]:
    """The subalgebra of vectors fixed by every element of ``subgroup``.

    Returns ``(L_H, inclusion)`` where the columns of ``inclusion`` are the
    chosen basis of the fixed space inside L.  Raises if ``subgroup`` is not
    closed under the group law, if the fixed space is zero, or if bracket or
    alpha fail to preserve it.
    """
    _require_action(L, action)
    G = action.group
    H = sorted(set(int(h) for h in subgroup))
    if not H or any(not 0 <= h < G.order for h in H):
        raise GroupError("subgroup must be a non-empty set of element indices")
    if G.identity not in H or any(G.mul(a, b) not in H for a in H for b in H):
        raise GroupError("subset is not closed under the group law")
    d = L.dim
    stacked = np.vstack([action.rep(h) - tensor.identity(d) for h in H])
    fixed = nullspace(stacked)
    if fixed.dim == 0:
        raise GroupError("the fixed space of this subgroup is zero")
    iota = fixed.matrix()
    k = fixed.dim
    pairs = list(itertools.product(range(k), repeat=2))
    products = tensor.zeros((d, len(pairs)))
    for t, (i, j) in enumerate(pairs):
        products[:, t] = tensor.evaluate(L.m0, iota[:, i], iota[:, j])
    c = tensor.zeros((k, k, k))
    for (i, j), coords in zip(pairs, solve_many(iota, products)):
        if coords is None:
            raise AlgebraError("bracket leaves the fixed subspace")
        c[i, j, :] = coords
    A = tensor.zeros((k, k))
    for j, coords in enumerate(solve_many(iota, matmul(L.alpha, iota))):
        if coords is None:
            raise AlgebraError("structure map leaves the fixed subspace")
        A[:, j] = coords
    sub = HomLeibnizAlgebra(c, A, f"{L.name}^H" if L.name else "")
    return sub, iota
