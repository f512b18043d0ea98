"""JSON documents describing an algebra with optional group action,
deformation jets and gauge jets.

Layout::

    {
      "name": "paper_2dim",                  # optional
      "dim": 2,
      "bracket": [[i, j, k, num, den], ...], # coefficient of e_k in [e_i, e_j]; 1-based
      "alpha": [[a11, a12], [a21, a22]],     # entries are ints or "num/den" strings
      "group": {"order": 2, "mult_table": [[0, 1], [1, 0]], "reps": [matrix, matrix]},
      "deformation": {"order": N,
                      "m_jets": [[[i, j, k, num, den], ...], ...],   # jets 1..N
                      "a_jets": [[[j, k, num, den], ...], ...]},     # coefficient of e_k in alpha_n(e_j)
      "gauge": {"psi_jets": [matrix, ...]}   # psi_1..psi_N; psi_0 = Id is implicit
    }

Group elements are labelled ``0..order-1`` and the identity is read off the table.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Optional

import numpy as np

from . import tensor
from .algebra import HomLeibnizAlgebra
from .cochain import GammaCochain
from .deformation import GaugeTransform, TruncatedDeformation, gauge_from
from .equivariant import FiniteGroup, GroupAction, GroupError
from .rational_linalg import normalize


class DocumentError(ValueError):
    """Malformed document; the message names the offending field."""


@dataclass(frozen=True, eq=False)
class AlgebraDocument:
    algebra: HomLeibnizAlgebra
    action: Optional[GroupAction] = None
    deformation: Optional[TruncatedDeformation] = None
    gauge: Optional[GaugeTransform] = None
    name: str = ""

    def __eq__(self, other):
        if not isinstance(other, AlgebraDocument):
            return NotImplemented
        return to_dict(self) == to_dict(other)


# -- scalars -------------------------------------------------------------------

_RATIONAL = re.compile(r"([+-]?\d+)(?:/(\d+))?")


def parse_scalar(value: Any, where: str):
    if isinstance(value, bool):
        raise DocumentError(f"{where}: expected a rational number, got {value!r}")
    if isinstance(value, int):
        return value
    if isinstance(value, str):
        match = _RATIONAL.fullmatch(value.strip())
        if match is None or int(match.group(2) or 1) == 0:
            raise DocumentError(f"{where}: {value!r} is not an exact rational \"num/den\"")
        return normalize(Fraction(int(match.group(1)), int(match.group(2) or 1)))
    raise DocumentError(f"{where}: expected an integer or a \"num/den\" string, got {value!r}")


def format_scalar(x) -> str:
    """``"num/den"`` with the denominator always written."""
    f = Fraction(normalize(x))
    return f"{f.numerator}/{f.denominator}"


def _scalar_out(x):
    x = normalize(x)
    return x if isinstance(x, int) else format_scalar(x)


def _int(value: Any, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise DocumentError(f"{where}: expected an integer, got {value!r}")
    return value


def _list(value: Any, where: str) -> list:
    if not isinstance(value, list):
        raise DocumentError(f"{where}: expected a list, got {type(value).__name__}")
    return value


def parse_matrix(value: Any, d: int, where: str) -> np.ndarray:
    rows = _list(value, where)
    if len(rows) != d:
        raise DocumentError(f"{where}: expected {d} rows, got {len(rows)}")
    M = tensor.zeros((d, d))
    for r, row in enumerate(rows):
        row = _list(row, f"{where}[{r}]")
        if len(row) != d:
            raise DocumentError(f"{where}[{r}]: expected {d} entries, got {len(row)}")
        for c, v in enumerate(row):
            M[r, c] = parse_scalar(v, f"{where}[{r}][{c}]")
    return M


def format_matrix(M, as_strings: bool = False) -> list:
    M = np.asarray(M, dtype=object)
    f = format_scalar if as_strings else _scalar_out
    return [[f(x) for x in row] for row in M]


def parse_sparse(value: Any, d: int, arity: int, where: str) -> np.ndarray:
    """Entries ``[i_1, .., i_arity, k, num, den]`` (1-based) into an output-first tensor."""
    T = tensor.zeros((d,) * (arity + 1))
    seen = set()
    for t, entry in enumerate(_list(value, where)):
        loc = f"{where}[{t}]"
        entry = _list(entry, loc)
        if len(entry) != arity + 3:
            raise DocumentError(f"{loc}: expected {arity + 3} numbers "
                                f"[{', '.join(['i'] * arity)}, k, num, den], got {len(entry)}")
        idx = [_int(x, loc) for x in entry[: arity + 1]]
        for x in idx:
            if not 1 <= x <= d:
                raise DocumentError(f"{loc}: index {x} out of range 1..{d}")
        num, den = _int(entry[-2], loc), _int(entry[-1], loc)
        if den == 0:
            raise DocumentError(f"{loc}: zero denominator")
        key = tuple(idx)
        if key in seen:
            raise DocumentError(f"{loc}: duplicate entry for indices {key}")
        seen.add(key)
        *inputs, k = [x - 1 for x in idx]
        T[(k,) + tuple(inputs)] = normalize(Fraction(num, den))
    return T


def format_sparse(T) -> list:
    """Inverse of :func:`parse_sparse`, in row-major order of (inputs, output)."""
    T = np.asarray(T, dtype=object)
    out = []
    moved = np.moveaxis(T, 0, -1)
    for idx in np.ndindex(*moved.shape):
        x = moved[idx]
        if x != 0:
            f = Fraction(normalize(x))
            out.append([i + 1 for i in idx] + [f.numerator, f.denominator])
    return out


# -- documents -----------------------------------------------------------------

def from_dict(doc: Any) -> AlgebraDocument:
    if not isinstance(doc, dict):
        raise DocumentError("top level: expected a JSON object")
    known = {"name", "dim", "bracket", "alpha", "group", "deformation", "gauge"}
    extra = sorted(set(doc) - known)
    if extra:
        raise DocumentError(f"top level: unknown field(s) {', '.join(extra)}")
    for key in ("dim", "bracket", "alpha"):
        if key not in doc:
            raise DocumentError(f"top level: missing required field \"{key}\"")
    d = _int(doc["dim"], "dim")
    if d < 1:
        raise DocumentError("dim: must be positive")
    name = doc.get("name", "")
    if not isinstance(name, str):
        raise DocumentError("name: expected a string")
    m0 = parse_sparse(doc["bracket"], d, 2, "bracket")
    A = parse_matrix(doc["alpha"], d, "alpha")
    L = HomLeibnizAlgebra(np.transpose(m0, (1, 2, 0)), A, name)

    action = None
    if "group" in doc:
        action = _parse_group(doc["group"], d)

    deformation = None
    if "deformation" in doc:
        deformation = _parse_deformation(doc["deformation"], L)

    gauge = None
    if "gauge" in doc:
        g = doc["gauge"]
        if not isinstance(g, dict) or "psi_jets" not in g:
            raise DocumentError("gauge: expected an object with \"psi_jets\"")
        jets = [parse_matrix(m, d, f"gauge.psi_jets[{t}]") for t, m in enumerate(_list(g["psi_jets"], "gauge.psi_jets"))]
        gauge = gauge_from([tensor.identity(d)] + jets)
    return AlgebraDocument(L, action, deformation, gauge, name)


def _parse_group(g: Any, d: int) -> GroupAction:
    if not isinstance(g, dict):
        raise DocumentError("group: expected an object")
    for key in ("order", "mult_table", "reps"):
        if key not in g:
            raise DocumentError(f"group: missing field \"{key}\"")
    order = _int(g["order"], "group.order")
    table = _list(g["mult_table"], "group.mult_table")
    if len(table) != order:
        raise DocumentError(f"group.mult_table: expected {order} rows, got {len(table)}")
    rows = []
    for r, row in enumerate(table):
        row = _list(row, f"group.mult_table[{r}]")
        if len(row) != order:
            raise DocumentError(f"group.mult_table[{r}]: expected {order} entries")
        rows.append(tuple(_int(x, f"group.mult_table[{r}]") for x in row))
    reps = _list(g["reps"], "group.reps")
    if len(reps) != order:
        raise DocumentError(f"group.reps: expected {order} matrices, got {len(reps)}")
    mats = tuple(parse_matrix(m, d, f"group.reps[{t}]") for t, m in enumerate(reps))
    try:
        return GroupAction(FiniteGroup(tuple(rows)), mats)
    except GroupError as exc:
        raise DocumentError(f"group: {exc}") from None


def _parse_deformation(block: Any, L: HomLeibnizAlgebra) -> TruncatedDeformation:
    if not isinstance(block, dict):
        raise DocumentError("deformation: expected an object")
    for key in ("order", "m_jets", "a_jets"):
        if key not in block:
            raise DocumentError(f"deformation: missing field \"{key}\"")
    N = _int(block["order"], "deformation.order")
    if N < 0:
        raise DocumentError("deformation.order: must be non-negative")
    mj = _list(block["m_jets"], "deformation.m_jets")
    aj = _list(block["a_jets"], "deformation.a_jets")
    if len(mj) != N or len(aj) != N:
        raise DocumentError(f"deformation: order {N} needs {N} m_jets and {N} a_jets "
                            f"(got {len(mj)} and {len(aj)})")
    d = L.dim
    m = [GammaCochain(parse_sparse(x, d, 2, f"deformation.m_jets[{t}]")) for t, x in enumerate(mj)]
    a = [GammaCochain(parse_sparse(x, d, 1, f"deformation.a_jets[{t}]")) for t, x in enumerate(aj)]
    return TruncatedDeformation.from_jets(L, m, a)


def deformation_to_dict(D: TruncatedDeformation) -> dict:
    return {
        "order": D.order,
        "m_jets": [format_sparse(g.coeffs) for g in D.m_jets[1:]],
        "a_jets": [format_sparse(g.coeffs) for g in D.a_jets[1:]],
    }


def algebra_to_dict(L: HomLeibnizAlgebra, name: str = "") -> dict:
    out = {}
    if name:
        out["name"] = name
    out["dim"] = L.dim
    out["bracket"] = format_sparse(L.m0)
    out["alpha"] = format_matrix(L.alpha)
    return out


def to_dict(doc: AlgebraDocument) -> dict:
    out = algebra_to_dict(doc.algebra, doc.name)
    if doc.action is not None:
        G = doc.action.group
        out["group"] = {"order": G.order,
                        "mult_table": [list(row) for row in G.mult_table],
                        "reps": [format_matrix(r) for r in doc.action.reps]}
    if doc.deformation is not None:
        out["deformation"] = deformation_to_dict(doc.deformation)
    if doc.gauge is not None:
        out["gauge"] = {"psi_jets": [format_matrix(p) for p in doc.gauge.psi_jets[1:]]}
    return out


def parse(text: str) -> AlgebraDocument:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return from_dict(raw)


def dumps(obj, level: int = 0) -> str:
    """JSON with one key per line and every list of scalars kept on one line."""
    pad, inner = "  " * level, "  " * (level + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{inner}{json.dumps(k)}: {dumps(v, level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, list):
        if all(not isinstance(x, (list, dict)) for x in obj):
            return "[" + ", ".join(json.dumps(x) for x in obj) + "]"
        return "[\n" + ",\n".join(inner + dumps(x, level + 1) for x in obj) + "\n" + pad + "]"
    return json.dumps(obj)


def serialize(doc: AlgebraDocument) -> str:
    return dumps(to_dict(doc)) + "\n"


def load(path) -> AlgebraDocument:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    try:
        return parse(text)
    except DocumentError as exc:
        raise DocumentError(f"{path}: {exc}") from None


def bundled_path(name: str):
    """Path of a bundled example document, e.g. ``bundled_path("paper_2dim.json")``."""
    from importlib import resources
    return resources.files("homleib").joinpath("data", name)


BUNDLED = ("paper_2dim.json", "abelian2_z2.json", "free_trunc_1_2.json")
