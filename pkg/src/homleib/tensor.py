"""Multilinear maps as dense object tensors, and their composition.

A map ``L^{(x)m} -> L`` on a ``d``-dimensional space is an array of shape
``(d,) * (m + 1)``: axis 0 is the output coordinate, axes ``1..m`` the
arguments, so ``T[k, i1, .., im]`` is the ``e_k`` coefficient of
``T(e_i1, .., e_im)``.  C-order flattening therefore puts the output index
outermost and runs the arguments row-major.

Any operand may carry extra trailing "batch" axes (at most one operand per
call).  Feeding a stack of basis cochains through the differentials this way
yields whole differential matrices in one pass.
"""
from __future__ import annotations

from collections.abc import Sequence

import numpy as np

from .rational_linalg import normalize

_norm = np.frompyfunc(normalize, 1, 1)


def zeros(shape) -> np.ndarray:
    return np.full(shape, 0, dtype=object)


def exact(arr) -> np.ndarray:
    """Object array with every entry an exact int/Fraction."""
    arr = np.asarray(arr, dtype=object)
    if arr.size == 0:
        return arr
    out = _norm(arr)
    return out.astype(object) if isinstance(out, np.ndarray) else np.asarray(out, dtype=object)


def identity(d: int) -> np.ndarray:
    I = zeros((d, d))
    for i in range(d):
        I[i, i] = 1
    return I


def matrix_power(A: np.ndarray, k: int) -> np.ndarray:
    out = identity(A.shape[0])
    for _ in range(k):
        out = out.dot(A)
    return out


def compose(outer: np.ndarray, arity: int, inners: Sequence, n_args: int) -> np.ndarray:
    """Plug maps into the argument slots of ``outer``.

    ``inners[s]`` fills slot ``s`` and is either an ``int`` (the slot is a
    bare argument placed at that position of the result) or a triple
    ``(T, m, positions)``: an ``m``-ary map whose arguments land at
    ``positions`` of the result.  Every position in ``range(n_args)`` must be
    used exactly once.
    """
    if len(inners) != arity:
        raise ValueError(f"{len(inners)} inputs for a map of arity {arity}")
    labels: list = ["out"] + [("slot", s) for s in range(arity)]
    labels += [("batch", t) for t in range(outer.ndim - 1 - arity)]
    nbatch = outer.ndim - 1 - arity
    cur = outer
    for s, item in enumerate(inners):
        ax = labels.index(("slot", s))
        if isinstance(item, (int, np.integer)):
            labels[ax] = ("arg", int(item))
            continue
        T, m, positions = item
        if len(positions) != m:
            raise ValueError("positions do not match inner arity")
        extra = T.ndim - 1 - m
        if extra and nbatch:
            raise ValueError("only one operand may carry batch axes")
        cur = np.tensordot(cur, T, axes=([ax], [0]))
        labels = labels[:ax] + labels[ax + 1:]
        labels += [("arg", int(p)) for p in positions]
        labels += [("batch", nbatch + t) for t in range(extra)]
        nbatch += extra
    order = ["out"] + [("arg", p) for p in range(n_args)] + [("batch", t) for t in range(nbatch)]
    if sorted(labels, key=repr) != sorted(order, key=repr):
        raise ValueError(f"argument positions do not cover 0..{n_args - 1} exactly once")
    return np.transpose(cur, [labels.index(lab) for lab in order])


def apply_to_output(M: np.ndarray, T: np.ndarray, arity: int) -> np.ndarray:
    """``M o T`` for a linear map ``M``."""
    return compose(M, 1, [(T, arity, list(range(arity)))], arity)


def apply_to_slots(T: np.ndarray, arity: int, M: np.ndarray, slots=None) -> np.ndarray:
    """``T(.., M x_s, ..)`` for every ``s`` in ``slots`` (default: all)."""
    slots = range(arity) if slots is None else slots
    chosen = set(slots)
    inners = [(M, 1, [s]) if s in chosen else s for s in range(arity)]
    return compose(T, arity, inners, arity)


def evaluate(T: np.ndarray, *vectors) -> np.ndarray:
    """Value of a map (no batch axes) on concrete argument vectors."""
    out = T
    for v in reversed(vectors):
        out = out.dot(np.asarray(v, dtype=object))
    return exact(out)
