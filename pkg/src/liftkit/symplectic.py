"""Exact symplectic linear algebra over Z and Z_k in dimension 2h (h=2 default).

Vectors are tuples of ints, matrices are tuples of row tuples.  A modulus of 0
means "over Z"; a modulus k >= 2 means entries are canonical residues in [0, k).
The symplectic form pairs (e1,e2) and (e3,e4) with value +1.
"""

from functools import lru_cache
from math import gcd

import numpy as np


class DimensionError(ValueError):
    pass


class EnumerationBound(ValueError):
    pass


@lru_cache(maxsize=None)
def form_matrix(dim=4):
    """Pairing matrix J: block diagonal [[0,1],[-1,0]] on (e_{2i-1}, e_{2i})."""
    if dim % 2:
        raise DimensionError("symplectic dimension must be even, got %d" % dim)
    J = [[0] * dim for _ in range(dim)]
    for i in range(0, dim, 2):
        J[i][i + 1] = 1
        J[i + 1][i] = -1
    return tuple(tuple(row) for row in J)


def reduce_vec(v, mod):
    if mod:
        return tuple(int(x) % mod for x in v)
    return tuple(int(x) for x in v)


def reduce_mat(m, mod):
    return tuple(reduce_vec(row, mod) for row in m)


def identity(dim=4):
    return tuple(tuple(int(i == j) for j in range(dim)) for i in range(dim))


def neg(m, mod=0):
    return reduce_mat(tuple(tuple(-x for x in row) for row in m), mod)


def mat_mul(a, b, mod=0):
    n = len(a)
    if len(b) != n:
        raise DimensionError("matrix size mismatch: %d vs %d" % (n, len(b)))
    out = tuple(
        tuple(sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n))
        for i in range(n)
    )
    return reduce_mat(out, mod)


def mat_vec(m, v, mod=0):
    n = len(m)
    if len(v) != n:
        raise DimensionError("matrix/vector size mismatch")
    return reduce_vec(tuple(sum(m[i][j] * v[j] for j in range(n)) for i in range(n)), mod)


def transpose(m):
    return tuple(zip(*m))


def mat_pow(m, e, mod=0):
    n = len(m)
    if e < 0:
        m = mat_inv(m, mod)
        e = -e
    out = identity(n)
    while e:
        if e & 1:
            out = mat_mul(out, m, mod)
        m = mat_mul(m, m, mod)
        e >>= 1
    return out


def adjugate_inv(m, mod=0):
    """Exact inverse of an integer matrix with det = +-1 (mod k when modular)."""
    a = np.array(m, dtype=object)
    n = len(m)
    # cofactor expansion; n is 2 or 4 here so this stays cheap
    def det(b):
        sz = len(b)
        if sz == 1:
            return b[0][0]
        if sz == 2:
            return b[0][0] * b[1][1] - b[0][1] * b[1][0]
        total = 0
        for j in range(sz):
            minor = [row[:j] + row[j + 1:] for row in b[1:]]
            total += (-1) ** j * b[0][j] * det(minor)
        return total

    rows = [list(r) for r in m]
    d = det(rows)
    adj = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [row[:j] + row[j + 1:] for k, row in enumerate(rows) if k != i]
            adj[j][i] = (-1) ** (i + j) * det(minor)
    if mod:
        dinv = mod_inverse(d % mod, mod)
        inv = [[(x * dinv) % mod for x in row] for row in adj]
    else:
        if d not in (1, -1):
            raise ValueError("matrix not invertible over Z (det=%s)" % d)
        inv = [[x * d for x in row] for row in adj]
    return reduce_mat(tuple(tuple(row) for row in inv), mod)


def mat_inv(m, mod=0):
    if is_symplectic(m, mod):
        # A^-1 = J^-1 A^T J, exact in both the Z and the mod-k case
        J = form_matrix(len(m))
        Jinv = neg(J)
        return mat_mul(mat_mul(Jinv, transpose(m)), J, mod)
    return adjugate_inv(m, mod)


def mod_inverse(a, k):
    g, x, _ = _xgcd(a % k, k)
    if g != 1:
        raise ValueError("%d is not a unit mod %d" % (a, k))
    return x % k


def _xgcd(a, b):
    if b == 0:
        return a, 1, 0
    g, x, y = _xgcd(b, a % b)
    return g, y, x - (a // b) * y


def pairing(x, y, mod=0):
    """Symplectic pairing x^T J y, reduced mod k when modular."""
    if len(x) != len(y):
        raise DimensionError("vectors of different length")
    J = form_matrix(len(x))
    val = sum(x[i] * J[i][j] * y[j] for i in range(len(x)) for j in range(len(x)))
    return val % mod if mod else val


def is_primitive(v, mod=0):
    """True iff gcd of the entries (together with the modulus) is 1."""
    g = mod
    for x in v:
        g = gcd(g, x)
    return g == 1


def is_symplectic(m, mod=0):
    J = form_matrix(len(m))
    return mat_mul(mat_mul(transpose(m), J), m, mod) == reduce_mat(J, mod)


def transvection(v, mod=0):
    """The symplectic map x |-> x + pairing(x, v) * v, as a matrix.

    Columns: image of e_j is e_j + pairing(e_j, v) * v.
    """
    v = reduce_vec(v, mod)
    if not is_primitive(v, mod):
        raise ValueError("transvection requires a primitive vector, got %r" % (v,))
    n = len(v)
    J = form_matrix(n)
    cols = []
    for j in range(n):
        c = sum(J[j][i] * v[i] for i in range(n))  # pairing(e_j, v) = (Jv)_j
        cols.append(tuple((1 if i == j else 0) + c * v[i] for i in range(n)))
    m = transpose(tuple(cols))
    return reduce_mat(m, mod)


def lift_partner(u, y, k):
    """Given primitive u over Z and primitive y mod k with pairing(u, y) = 1 mod k,
    return a primitive v over Z with v = y (mod k) and pairing(u, v) = 1.

    Follows the constructive argument: pick any v' with pairing(u, v') = 1,
    correct the <u, v'>-component with a multiple of u, then correct the
    perpendicular component.
    """
    n = len(u)
    if not is_primitive(u):
        raise ValueError("u must be primitive over Z")
    y = reduce_vec(y, k)
    if not is_primitive(y, k):
        raise ValueError("y must be primitive mod %d" % k)
    if pairing(reduce_vec(u, k), y, k) != 1:
        raise ValueError("pairing(u, y) must be 1 mod %d" % k)

    vprime = _symplectic_partner(u)
    # absorb the u-component of y into the partner: w = m*u + v' still pairs
    # with u to 1, and m = pairing(y, v') makes pairing(w, y) = 0 mod k
    m = pairing(y, reduce_vec(vprime, k), k)
    w = tuple(m * u[i] + vprime[i] for i in range(n))
    # the residue y - (w mod k) now pairs to 0 with both u and w mod k
    r = tuple((y[i] - w[i]) % k for i in range(n))
    assert pairing(reduce_vec(u, k), r, k) == 0
    assert pairing(reduce_vec(w, k), r, k) == 0
    v = tuple(w[i] + r[i] for i in range(n))
    # over Z the residue may still pair with u to a multiple of k; remove it
    # with a multiple of k*w, which does not change v mod k
    excess = pairing(u, v) - 1
    assert excess % k == 0
    a = excess // k
    v = tuple(v[i] - a * k * w[i] for i in range(n))
    assert reduce_vec(v, k) == y
    assert pairing(u, v) == 1
    # gcd of the entries of v divides the integer pairing(u, v) = 1
    assert is_primitive(v)
    return v


def _symplectic_partner(u):
    """A primitive integer vector v' with pairing(u, v') = 1, for primitive u."""
    n = len(u)
    J = form_matrix(n)
    # pairing(u, e_j) as j varies spans the coefficients of u; use extended gcd
    coeffs = [sum(u[i] * J[i][j] for i in range(n)) for j in range(n)]
    g, combo = _gcd_combo(coeffs)
    assert g == 1, "u not primitive"
    return tuple(combo)


def _gcd_combo(coeffs):
    """gcd of coeffs and an integer combination achieving it."""
    g = 0
    combo = [0] * len(coeffs)
    for j, c in enumerate(coeffs):
        if c == 0:
            continue
        if g == 0:
            g = abs(c)
            combo = [0] * len(coeffs)
            combo[j] = 1 if c > 0 else -1
            continue
        new_g, a, b = _xgcd(g, c)
        combo = [a * x for x in combo]
        combo[j] += b
        g = new_g
    if g < 0:
        g, combo = -g, [-x for x in combo]
    return g, combo


def lift_basis(basis_mod_k, k):
    """Lift a symplectic basis of Z_k^4 to a symplectic basis of Z^4.

    Input and output are sequences (x1, y1, x2, y2) with pairing(x_i, y_i) = 1
    and all other pairings 0.
    """
    if len(basis_mod_k) != 4:
        raise DimensionError("expected 4 basis vectors")
    basis = [reduce_vec(v, k) for v in basis_mod_k]
    J = reduce_mat(form_matrix(4), k)
    gram = tuple(
        tuple(pairing(basis[i], basis[j], k) for j in range(4)) for i in range(4)
    )
    if gram != J:
        raise ValueError("input is not a symplectic basis mod %d" % k)

    x1, y1, x2, y2 = basis
    u1 = _primitive_lift(x1, k)
    v1 = lift_partner(u1, y1, k)
    # project x2, y2 into <u1, v1>^perp over Z before lifting the second pair
    u2 = _perp_lift(x2, u1, v1, k)
    y2_adj = y2
    v2 = _perp_lift_partner(u2, y2_adj, u1, v1, k)
    out = (u1, v1, u2, v2)
    gram_z = tuple(tuple(pairing(a, b) for b in out) for a in out)
    assert gram_z == form_matrix(4), "lifted basis is not symplectic"
    for got, want in zip(out, basis):
        assert reduce_vec(got, k) == want
    return out


def _primitive_lift(x, k):
    """A primitive integer vector congruent to x mod k."""
    v = list(reduce_vec(x, k))
    if is_primitive(v):
        return tuple(v)
    # adding k to a single entry fixes the gcd: gcd becomes gcd(g, k * unit-ish)
    for i in range(len(v)):
        w = list(v)
        w[i] += k
        if is_primitive(w):
            return tuple(w)
    raise ValueError("no primitive lift of %r mod %d" % (x, k))


def _perp_lift(x, u1, v1, k):
    """A primitive lift of x that pairs to 0 with u1 and v1 over Z."""
    w = list(_primitive_lift(x, k))
    # correct with multiples of k*u1, k*v1 to kill the Z-level pairings
    a = pairing(w, v1)  # coefficient along u1
    b = pairing(u1, w)  # coefficient along v1
    assert a % k == 0 and b % k == 0
    w = [w[i] - a * u1[i] - b * v1[i] for i in range(len(w))]
    assert pairing(w, v1) == 0 and pairing(u1, w) == 0
    assert reduce_vec(w, k) == reduce_vec(x, k)
    if not is_primitive(w):
        # the gcd of w is coprime to k; adding k * (a complement vector)
        # keeps the residue and the orthogonality and can restore primitivity
        for z in _complement_spanners(u1, v1):
            for c in (1, -1, 2, -2, 3, -3):
                cand = [w[i] + c * k * z[i] for i in range(len(w))]
                if is_primitive(cand):
                    assert pairing(cand, v1) == 0 and pairing(u1, cand) == 0
                    assert reduce_vec(cand, k) == reduce_vec(x, k)
                    return tuple(cand)
        raise ValueError("could not make the perp lift primitive")
    return tuple(w)


def _complement_spanners(u1, v1):
    """Vectors spanning the sublattice orthogonal to the symplectic pair (u1, v1)."""
    n = len(u1)
    out = []
    for j in range(n):
        e = tuple(int(i == j) for i in range(n))
        a = pairing(e, v1)
        b = pairing(u1, e)
        z = tuple(e[i] - a * u1[i] - b * v1[i] for i in range(n))
        if any(z):
            out.append(z)
    return out


def _perp_lift_partner(u2, y2, u1, v1, k):
    """Lift y2 to v2 with pairing(u2, v2) = 1 and v2 perp to u1, v1."""
    v2 = lift_partner(u2, reduce_vec(y2, k), k)
    a = pairing(v2, v1)
    b = pairing(u1, v2)
    assert a % k == 0 and b % k == 0
    v2 = tuple(v2[i] - a * u1[i] - b * v1[i] for i in range(len(v2)))
    assert pairing(u2, v2) == 1
    return v2


SP4_ORDER = {k: k ** 4 * (k ** 2 - 1) * (k ** 4 - 1) for k in (2, 3, 5, 7)}


def sp4_order(k):
    return k ** 4 * (k ** 2 - 1) * (k ** 4 - 1)


def pack_mat(m, k):
    """Canonical base-k integer key of a mod-k matrix."""
    key = 0
    for row in m:
        for x in row:
            key = key * k + (x % k)
    return key


def unpack_mat(key, k, dim=4):
    entries = []
    for _ in range(dim * dim):
        entries.append(key % k)
        key //= k
    entries.reverse()
    return tuple(tuple(entries[i * dim: (i + 1) * dim]) for i in range(dim))


def _np_pack(mats, k):
    """Pack an (n,4,4) uint8 array of mod-k matrices into int64 keys."""
    flat = mats.reshape(len(mats), 16).astype(np.int64)
    powers = k ** np.arange(15, -1, -1, dtype=np.int64)
    return flat @ powers


def mulclose(gens, mod, maxsize=None):
    """BFS closure of a set of mod-k matrices under multiplication."""
    els = {reduce_mat(g, mod) for g in gens}
    frontier = list(els)
    gens = list(els)
    while frontier:
        new = []
        for b in frontier:
            for a in gens:
                c = mat_mul(a, b, mod)
                if c not in els:
                    els.add(c)
                    new.append(c)
                    if maxsize and len(els) > maxsize:
                        raise EnumerationBound("closure exceeded %d elements" % maxsize)
        frontier = new
    return els


def mulclose_fast(gens, k, maxsize=None):
    """Vectorized BFS closure over Z_k; returns a set of packed int keys."""
    gen_arr = np.array([reduce_mat(g, k) for g in gens], dtype=np.int64)
    seen = np.sort(np.unique(_np_pack(gen_arr, k)))
    frontier = gen_arr
    while len(frontier):
        prods = []
        for g in gen_arr:
            prods.append(np.einsum("ij,njk->nik", g, frontier) % k)
        prods = np.concatenate(prods)
        keys = _np_pack(prods, k)
        keys, idx = np.unique(keys, return_index=True)
        mask = ~np.isin(keys, seen, assume_unique=True)
        fresh_keys = keys[mask]
        frontier = prods[idx[mask]]
        if len(fresh_keys) == 0:
            break
        seen = np.union1d(seen, fresh_keys)
        if maxsize and len(seen) > maxsize:
            raise EnumerationBound("closure exceeded %d elements" % maxsize)
    return seen


DEFAULT_ENUM_BOUND = 5


def sp_generators(k):
    """Transvections along the chain classes e1, e2, e1+e3, e4, e3 generate Sp(4, Z_k)."""
    vs = [(1, 0, 0, 0), (0, 1, 0, 0), (1, 0, 1, 0), (0, 0, 0, 1), (0, 0, 1, 0)]
    return [transvection(v, k) for v in vs]


def enumerate_sp(k, bound=DEFAULT_ENUM_BOUND):
    """All of Sp(4, Z_k) as packed keys, by BFS from transvections.

    Cardinality is checked against k^4 (k^2-1)(k^4-1).
    """
    if k > bound:
        raise EnumerationBound(
            "k=%d exceeds the enumeration bound %d" % (k, bound))
    keys = mulclose_fast(sp_generators(k), k)
    expect = sp4_order(k)
    assert len(keys) == expect, "Sp(4,Z_%d): got %d, expected %d" % (k, len(keys), expect)
    return keys


def primitive_vectors(k):
    """All primitive vectors of Z_k^4 in lexicographic order."""
    out = []
    for a in range(k):
        for b in range(k):
            for c in range(k):
                for d in range(k):
                    v = (a, b, c, d)
                    if is_primitive(v, k):
                        out.append(v)
    return out
