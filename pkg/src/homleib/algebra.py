"""Finite-dimensional Hom-Leibniz algebras given by structure constants.

Conventions: ``structure[i][j][k]`` is the coefficient of ``e_k`` in
``[e_i, e_j]`` and the structure map acts on coordinate columns,
``alpha(e_j) = sum_k alpha[k][j] e_k``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from . import tensor
from .rational_linalg import as_matrix, is_zero, rank


class AlgebraError(ValueError):
    """Invalid algebra data, or an algebra that fails a required axiom."""


@dataclass(frozen=True)
class Violation:
    where: tuple
    lhs: np.ndarray
    rhs: np.ndarray
    kind: str = ""


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple = field(default_factory=tuple)

    @property
    def passed(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.passed

    def __add__(self, other: ValidationReport) -> ValidationReport:
        return ValidationReport(self.violations + other.violations)


@dataclass(frozen=True, eq=False)
class HomLeibnizAlgebra:
    """``(L, [.,.], alpha)`` with exact rational structure constants."""

    structure: np.ndarray
    alpha: np.ndarray
    name: str = ""

    def __post_init__(self):
        c = tensor.exact(self.structure)
        A = as_matrix(self.alpha)
        if c.ndim != 3 or len(set(c.shape)) != 1 or c.shape[0] < 1:
            raise AlgebraError(f"structure constants must have shape (d, d, d), got {c.shape}")
        d = c.shape[0]
        if A.shape != (d, d):
            raise AlgebraError(f"structure map must be {d}x{d}, got {A.shape}")
        c.flags.writeable = False
        A.flags.writeable = False
        object.__setattr__(self, "structure", c)
        object.__setattr__(self, "alpha", A)
        # bracket as a 2-ary map in output-first layout: m0[k, i, j] = c[i, j, k]
        m0 = np.ascontiguousarray(np.transpose(c, (2, 0, 1)))
        m0.flags.writeable = False
        object.__setattr__(self, "m0", m0)

    @property
    def dim(self) -> int:
        return self.structure.shape[0]

    def __eq__(self, other):
        if not isinstance(other, HomLeibnizAlgebra):
            return NotImplemented
        return (self.dim == other.dim and np.array_equal(self.structure, other.structure)
                and np.array_equal(self.alpha, other.alpha))

    def __hash__(self):
        return hash((self.dim, tuple(self.structure.flat), tuple(self.alpha.flat)))

    def __repr__(self):
        label = f" {self.name!r}" if self.name else ""
        return f"<HomLeibnizAlgebra{label} dim={self.dim}>"

    def alpha_power(self, k: int) -> np.ndarray:
        return tensor.matrix_power(self.alpha, k)

    def bracket(self, x, y) -> np.ndarray:
        return bracket_eval(self, x, y)

    def is_valid(self) -> bool:
        cached = self.__dict__.get("_valid")
        if cached is None:
            cached = verify_hom_leibniz(self).passed and verify_multiplicative(self).passed
            object.__setattr__(self, "_valid", cached)
        return cached

    def require_valid(self) -> None:
        if not verify_hom_leibniz(self).passed:
            raise AlgebraError(f"{self!r} violates the Hom-Leibniz identity")
        if not verify_multiplicative(self).passed:
            raise AlgebraError(f"{self!r} is not multiplicative")


def _vector(L: HomLeibnizAlgebra, x) -> np.ndarray:
    v = tensor.exact(np.asarray(x, dtype=object))
    if v.shape != (L.dim,):
        raise AlgebraError(f"expected a vector of length {L.dim}, got shape {v.shape}")
    return v


def basis_vector(d: int, i: int) -> np.ndarray:
    v = tensor.zeros(d)
    v[i] = 1
    return v


def bracket_eval(L: HomLeibnizAlgebra, x, y) -> np.ndarray:
    return tensor.evaluate(L.m0, _vector(L, x), _vector(L, y))


def alpha_power_eval(L: HomLeibnizAlgebra, k: int, x) -> np.ndarray:
    if k < 0:
        raise AlgebraError("negative powers of the structure map are not defined")
    return tensor.exact(L.alpha_power(k).dot(_vector(L, x)))


def hom_leibniz_defect(m: np.ndarray, A: np.ndarray) -> np.ndarray:
    """The alpha-associator ``m(Ax, m(y,z)) - m(m(x,y), Az) + m(m(x,z), Ay)`` of a
    2-ary map ``m`` (output-first layout) as a 3-ary tensor."""
    t1 = tensor.compose(m, 2, [(A, 1, [0]), (m, 2, [1, 2])], 3)
    t2 = tensor.compose(m, 2, [(m, 2, [0, 1]), (A, 1, [2])], 3)
    t3 = tensor.compose(m, 2, [(m, 2, [0, 2]), (A, 1, [1])], 3)
    return tensor.exact(t1 - t2 + t3)


def multiplicativity_defect(m: np.ndarray, A: np.ndarray) -> np.ndarray:
    """``A m(x, y) - m(Ax, Ay)`` as a 2-ary tensor."""
    left = tensor.apply_to_output(A, m, 2)
    right = tensor.apply_to_slots(m, 2, A)
    return tensor.exact(left - right)


def _report(defect: np.ndarray, lhs: np.ndarray, kind: str) -> ValidationReport:
    violations = []
    arity = defect.ndim - 1
    d = defect.shape[0]
    for idx in itertools.product(range(d), repeat=arity):
        col = (slice(None),) + idx
        if not is_zero(defect[col]):
            left = tensor.exact(lhs[col])
            violations.append(Violation(tuple(i + 1 for i in idx), left,
                                        tensor.exact(left - defect[col]), kind))
    return ValidationReport(tuple(violations))


def verify_hom_leibniz(L: HomLeibnizAlgebra) -> ValidationReport:
    """Check ``[a(x),[y,z]] = [[x,y],a(z)] - [[x,z],a(y)]`` on all basis triples.

    Violations carry 1-based index triples and both sides of the identity.
    """
    m, A = L.m0, L.alpha
    lhs = tensor.compose(m, 2, [(A, 1, [0]), (m, 2, [1, 2])], 3)
    return _report(hom_leibniz_defect(m, A), lhs, "hom-leibniz")


def verify_multiplicative(L: HomLeibnizAlgebra) -> ValidationReport:
    lhs = tensor.apply_to_output(L.alpha, L.m0, 2)
    return _report(multiplicativity_defect(L.m0, L.alpha), lhs, "multiplicative")


def is_morphism(L: HomLeibnizAlgebra, phi) -> bool:
    """``phi[x, y] = [phi x, phi y]`` and ``phi o alpha = alpha o phi``."""
    phi = as_matrix(phi)
    m = L.m0
    bracket_ok = is_zero(tensor.apply_to_output(phi, m, 2) - tensor.apply_to_slots(m, 2, phi))
    return bracket_ok and is_zero(phi.dot(L.alpha) - L.alpha.dot(phi))


# -- example corpus ---------------------------------------------------------

def _structure(d: int, entries) -> np.ndarray:
    c = tensor.zeros((d, d, d))
    for i, j, k, v in entries:
        c[i - 1, j - 1, k - 1] = v
    return c


def paper_2dim() -> HomLeibnizAlgebra:
    """``[e2, e2] = e1``, all other brackets zero, alpha = [[1, 1], [0, 1]]."""
    return HomLeibnizAlgebra(_structure(2, [(2, 2, 1, 1)]), [[1, 1], [0, 1]], "paper_2dim")


def abelian(n: int, alpha=None) -> HomLeibnizAlgebra:
    A = tensor.identity(n) if alpha is None else alpha
    return HomLeibnizAlgebra(tensor.zeros((n, n, n)), A, f"abelian({n})")


def leibniz_as_hom(structure, name: str = "") -> HomLeibnizAlgebra:
    """A Leibniz algebra regarded as Hom-Leibniz with structure map Id."""
    c = tensor.exact(structure)
    return HomLeibnizAlgebra(c, tensor.identity(c.shape[0]), name)


def twisted(leibniz: HomLeibnizAlgebra, morphism, name: str = "") -> HomLeibnizAlgebra:
    """``(L, [.,.]_a, a)`` with ``[x, y]_a = [a x, a y]``, for a Leibniz algebra
    ``L`` (structure map Id) and a bracket morphism ``a``."""
    phi = as_matrix(morphism)
    d = leibniz.dim
    if phi.shape != (d, d):
        raise AlgebraError(f"morphism must be {d}x{d}")
    if not is_zero(leibniz.alpha - tensor.identity(d)):
        raise AlgebraError("twisting needs a Leibniz algebra (structure map = identity)")
    base = HomLeibnizAlgebra(leibniz.structure, phi)
    if not is_morphism(base, phi):
        raise AlgebraError("the given map is not a morphism of the bracket")
    m = tensor.apply_to_slots(leibniz.m0, 2, phi)
    return HomLeibnizAlgebra(np.transpose(m, (1, 2, 0)), phi, name or f"twisted({leibniz.name})")


def free_truncated(v_dim: int, depth: int) -> HomLeibnizAlgebra:
    """Quotient of the free Hom-Leibniz algebra on ``V`` (alpha = Id) by words of
    length > ``depth``.

    The basis is the set of words over ``1..v_dim`` of length 1..depth, ordered
    by length and then lexicographically; ``[w, v] = wv`` for a letter ``v`` and
    every other bracket is zero.
    """
    if v_dim < 1 or depth < 1:
        raise AlgebraError("free_truncated needs v_dim >= 1 and depth >= 1")
    words = [w for n in range(1, depth + 1) for w in itertools.product(range(v_dim), repeat=n)]
    index = {w: i for i, w in enumerate(words)}
    d = len(words)
    c = tensor.zeros((d, d, d))
    for w in words:
        if len(w) == depth:
            continue
        for v in range(v_dim):
            c[index[w], index[(v,)], index[w + (v,)]] = 1
    return HomLeibnizAlgebra(c, tensor.identity(d), f"free_truncated({v_dim},{depth})")


def sl2() -> HomLeibnizAlgebra:
    """sl(2) in the basis (e, f, h) with structure map Id."""
    c = _structure(3, [(3, 1, 1, 2), (1, 3, 1, -2), (3, 2, 2, -2), (2, 3, 2, 2),
                       (1, 2, 3, 1), (2, 1, 3, -1)])
    return leibniz_as_hom(c, "sl2")


def sl2_twisted() -> HomLeibnizAlgebra:
    """sl(2) twisted by the automorphism exp(ad e)."""
    return twisted(sl2(), [[1, -1, -2], [0, 1, 0], [0, 1, 1]], "sl2_twisted")


def leibniz_2dim() -> HomLeibnizAlgebra:
    """Non-Lie Leibniz algebra ``[e1, e2] = e1``, ``[e2, e2] = e1``."""
    return leibniz_as_hom(_structure(2, [(1, 2, 1, 1), (2, 2, 1, 1)]), "leibniz_2dim")


def leibniz_2dim_twisted() -> HomLeibnizAlgebra:
    return twisted(leibniz_2dim(), [[2, 1], [0, 1]], "leibniz_2dim_twisted")


def heisenberg_twisted() -> HomLeibnizAlgebra:
    """Heisenberg Lie algebra ``[e1, e2] = e3`` twisted by a unipotent automorphism."""
    h = leibniz_as_hom(_structure(3, [(1, 2, 3, 1), (2, 1, 3, -1)]), "heisenberg")
    return twisted(h, [[1, 0, 0], [1, 1, 0], [0, 0, 1]], "heisenberg_twisted")


_CORPUS = {
    "paper_2dim": paper_2dim,
    "abelian": abelian,
    "leibniz_as_hom": leibniz_as_hom,
    "twisted": twisted,
    "free_truncated": free_truncated,
    "sl2": sl2,
    "sl2_twisted": sl2_twisted,
    "leibniz_2dim": leibniz_2dim,
    "leibniz_2dim_twisted": leibniz_2dim_twisted,
    "heisenberg_twisted": heisenberg_twisted,
}


def corpus_example(name: str, *args, **kwargs) -> HomLeibnizAlgebra:
    """Build a named example; the result always passes both validations."""
    try:
        factory = _CORPUS[name]
    except KeyError:
        raise AlgebraError(f"unknown example {name!r}; known: {', '.join(sorted(_CORPUS))}") from None
    L = factory(*args, **kwargs)
    L.require_valid()
    return L


def standard_corpus() -> list[HomLeibnizAlgebra]:
    """The fixed list of small algebras the test-suites sweep over."""
    return [
        corpus_example("paper_2dim"),
        corpus_example("abelian", 2),
        corpus_example("abelian", 2, [[1, 1], [0, 1]]),
        corpus_example("free_truncated", 1, 2),
        corpus_example("free_truncated", 1, 3),
        corpus_example("leibniz_2dim"),
        corpus_example("leibniz_2dim_twisted"),
        corpus_example("heisenberg_twisted"),
        corpus_example("sl2"),
        corpus_example("sl2_twisted"),
    ]


def rank_of_bracket(L: HomLeibnizAlgebra) -> int:
    """Dimension of ``[L, L]``."""
    return rank(L.m0.reshape(L.dim, -1))
