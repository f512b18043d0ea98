"""Shared generators for the test-suite."""
import random
from fractions import Fraction

import numpy as np

from homleib import tensor
from homleib.cochain import AlphaTypeCochain, GammaCochain
from homleib.cohomology import compatible_subspace


def fractions_of(L):
    """Structure constants and alpha as nested Fraction lists (oracle input)."""
    c = [[[Fraction(x) for x in row] for row in plane] for plane in L.structure]
    A = [[Fraction(x) for x in row] for row in L.alpha]
    return c, A


def oracle_tensor(g):
    """GammaCochain -> {index tuple: Fraction vector}."""
    out = {}
    for idx in np.ndindex(*g.coeffs.shape[1:]):
        out[idx] = [Fraction(x) for x in g.coeffs[(slice(None),) + idx]]
    return out


def from_oracle(T, d, m):
    arr = tensor.zeros((d,) * (m + 1))
    for idx, v in T.items():
        arr[(slice(None),) + idx] = v
    return GammaCochain(arr)


def random_map(rng, d, m, lo=-3, hi=3, fractions=False):
    size = d ** (m + 1)
    if fractions:
        vals = [Fraction(rng.randint(lo, hi), rng.choice([1, 1, 2, 3])) for _ in range(size)]
    else:
        vals = [rng.randint(lo, hi) for _ in range(size)]
    return GammaCochain.from_flat(d, m, vals)


def random_cochain(rng, d, n, **kw):
    a = random_map(rng, d, n - 1, **kw) if n >= 2 else None
    return AlphaTypeCochain(random_map(rng, d, n, **kw), a)


def random_combination(rng, basis_matrix, lo=-2, hi=2):
    k = basis_matrix.shape[1]
    if k == 0:
        return tensor.zeros(basis_matrix.shape[0])
    coeffs = np.array([rng.randint(lo, hi) for _ in range(k)], dtype=object)
    return tensor.exact(basis_matrix.dot(coeffs))


def random_compatible(rng, L, m):
    """Random alpha-compatible m-ary map."""
    B = compatible_subspace(L, m).matrix()
    return GammaCochain.from_flat(L.dim, m, random_combination(rng, B))


def random_matrix(rng, d, lo=-2, hi=2):
    return np.array([[rng.randint(lo, hi) for _ in range(d)] for _ in range(d)], dtype=object)


def make_rng(seed):
    return random.Random(seed)


def inverse(P):
    from homleib.rational_linalg import solve_many
    d = P.shape[0]
    cols = solve_many(P, tensor.identity(d))
    Q = tensor.zeros((d, d))
    for j, c in enumerate(cols):
        Q[:, j] = c
    return Q


def centraliser_basis(A):
    """Matrices X (as d x d arrays) spanning ``{X : AX = XA}``."""
    from homleib.rational_linalg import nullspace
    d = A.shape[0]
    rows = []
    for r in range(d):
        for c in range(d):
            # coefficient of X[j, k] in (AX - XA)[r, c]
            rows.append([(A[r, j] if k == c else 0) - (A[k, c] if j == r else 0)
                         for j in range(d) for k in range(d)])
    return [np.asarray(b, dtype=object).reshape(d, d) for b in nullspace(np.array(rows, dtype=object)).basis]


def random_centraliser_element(rng, A):
    """Random invertible matrix commuting with A."""
    from homleib.rational_linalg import rank
    d = A.shape[0]
    basis = centraliser_basis(A)
    while True:
        P = tensor.identity(d)
        for b in basis:
            P = tensor.exact(P + rng.randint(-1, 1) * b)
        if rank(P) == d:
            return P


def conjugated_structure(rng, L):
    """``P^-1 m0 (P x P)`` for an invertible P commuting with alpha: a bracket
    that again satisfies the identity."""
    P = random_centraliser_element(rng, L.alpha)
    inner = tensor.apply_to_slots(L.m0, 2, P)
    return GammaCochain(tensor.exact(tensor.apply_to_output(inverse(P), inner, 2)))


def random_gauge_jets(rng, d, order, lo=-1, hi=1):
    """``(Id, psi_1, .., psi_order)`` with small integer entries."""
    return [tensor.identity(d)] + [random_matrix(rng, d, lo, hi) for _ in range(order)]


def random_two_cocycle(rng, L):
    """A random degree-2 cocycle built from the cocycle basis of the complex."""
    from homleib.cohomology import cohomology
    r = cohomology(L, 2, strict=False)
    total = AlphaTypeCochain.zero(L.dim, 2)
    for z in r.cocycle_basis:
        total = total + z * rng.randint(-2, 2)
    return total


def permutation_group(n):
    """Symmetric group on n letters: (FiniteGroup, list of permutations)."""
    import itertools

    from homleib.equivariant import FiniteGroup
    perms = list(itertools.permutations(range(n)))
    index = {p: i for i, p in enumerate(perms)}
    table = [[index[tuple(a[b[i]] for i in range(n))] for b in perms] for a in perms]
    return FiniteGroup(table), perms


def permutation_matrix(p):
    n = len(p)
    M = tensor.zeros((n, n))
    for j in range(n):
        M[p[j], j] = 1
    return M


def corpus_actions():
    """``[(label, algebra, action)]``: small actions used across the suites."""
    from homleib import algebra
    from homleib.equivariant import FiniteGroup, GroupAction
    Z2 = FiniteGroup.cyclic(2)
    I2, I3 = tensor.identity(2), tensor.identity(3)
    S3, perms = permutation_group(3)
    return [
        ("z2_abelian", algebra.abelian(2), GroupAction(Z2, (I2, [[1, 0], [0, -1]]))),
        ("z2_free_truncated", algebra.free_truncated(1, 2), GroupAction(Z2, (I2, [[-1, 0], [0, 1]]))),
        ("z2_leibniz", algebra.leibniz_2dim(), GroupAction(Z2, (I2, [[-1, -2], [0, 1]]))),
        ("z2_trivial_paper", algebra.paper_2dim(), GroupAction(Z2, (I2, I2))),
        ("chevalley_sl2", algebra.sl2(), GroupAction(Z2, (I3, [[0, -1, 0], [-1, 0, 0], [0, 0, -1]]))),
        ("s3_abelian3", algebra.abelian(3), GroupAction(S3, tuple(permutation_matrix(p) for p in perms))),
    ]
