"""Regular abelian covers of the genus-2 surface, described on first homology.

A cover is recorded by the induced map eta' from H1 = Z^4 onto the deck
group together with its kernel lattice L.  A mapping class lifts through the
cover exactly when its homology action preserves L, so liftability questions
reduce to exact lattice arithmetic.  The module also carries the SL(2,Z)
machinery (Gamma_0(k) cosets, Schreier generators, the block embedding phi)
used by the stabilizer computations.
"""

from dataclasses import dataclass
from functools import lru_cache
from math import gcd

from . import symplectic as sp

DIM = 4


class CoverParameterError(ValueError):
    pass


def hermite_basis(rows):
    """Canonical upper-triangular basis of the full-rank lattice spanned by rows.

    Positive pivots on the diagonal, entries above each pivot reduced into
    [0, pivot).  Lattice equality is equality of these bases.
    """
    work = [list(r) for r in rows]
    basis = []
    for col in range(DIM):
        while True:
            nz = [r for r in work if r[col] != 0]
            if not nz:
                raise ValueError("lattice basis is not full rank")
            if len(nz) == 1:
                break
            nz.sort(key=lambda r: abs(r[col]))
            head = nz[0]
            for r in nz[1:]:
                q = r[col] // head[col]
                for j in range(DIM):
                    r[j] -= q * head[j]
        head = nz[0]
        if head[col] < 0:
            head[:] = [-x for x in head]
        basis.append(head)
        work = [r for r in work if r is not head]
    for i in range(DIM):
        piv = basis[i][i]
        for j in range(i):
            q = basis[j][i] // piv
            for col in range(DIM):
                basis[j][col] -= q * basis[i][col]
    return tuple(tuple(r) for r in basis)


def lattice_contains(basis, vec):
    """Membership test against an upper-triangular basis."""
    v = list(vec)
    for i in range(DIM):
        if v[i] % basis[i][i]:
            return False
        q = v[i] // basis[i][i]
        for j in range(DIM):
            v[j] -= q * basis[i][j]
    return not any(v)


@dataclass(frozen=True)
class CoverSpec:
    """An abelian cover given by its induced map on H1 and kernel lattice."""
    name: str
    kind: str
    k: int
    invariant_factors: tuple
    eta: tuple          # rows = coordinates of eta' in the deck group
    lattice: tuple      # Hermite basis of ker eta'
    params: tuple = ()

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class CongruencePattern:
    """Index-set view of lattice preservation mod k (valid on symplectic input)."""
    modulus: int
    zero_positions: frozenset   # (i, j), 1-based, entries required = 0 mod k
    unit_positions: frozenset   # entries required invertible mod k
    implicit: bool = False      # True when only the lattice predicate defines it

    def matches(self, m):
        k = self.modulus
        for (i, j) in self.zero_positions:
            if m[i - 1][j - 1] % k:
                return False
        for (i, j) in self.unit_positions:
            if gcd(m[i - 1][j - 1], k) != 1:
                return False
        return True


def _scaled_cover(name, kind, k, factors, scaled, params=()):
    # lattice spanned by {k e_i : i in scaled} and {e_j : j not in scaled}
    rows = []
    eta = []
    for i in range(DIM):
        rows.append(tuple((k if (i + 1) in scaled else 1) * int(i == j)
                          for j in range(DIM)))
    for pos in sorted(scaled):
        eta.append(tuple(int(j == pos - 1) for j in range(DIM)))
    return CoverSpec(name=name, kind=kind, k=k, invariant_factors=factors,
                     eta=tuple(eta), lattice=hermite_basis(rows), params=params)


def make_cover(kind, k=2, r=None, K=None):
    """Build a cover description: cyclic(k), klein, or elementary(k, r, K)."""
    if kind == "cyclic":
        if k < 2:
            raise CoverParameterError("cyclic cover needs k >= 2")
        return _scaled_cover("cyclic(%d)" % k, "cyclic", k, (k,), {2})
    if kind == "klein":
        return _scaled_cover("klein", "klein", 2, (2, 2), {1, 2})
    if kind == "elementary":
        if r is None or K is None:
            raise CoverParameterError("elementary cover needs r and K")
        if k < 2 or not _is_prime(k):
            raise CoverParameterError("elementary cover needs prime k")
        h = DIM // 2
        if not (2 * K >= r and K <= min(h, r) and r >= 1):
            raise CoverParameterError("need r/2 <= K <= min(h, r)")
        scaled = {2 * i - 1 for i in range(1, K + 1)}
        scaled |= {2 * i for i in range(1, r - K + 1)}
        return _scaled_cover("elementary(%d,%d,%d)" % (k, r, K), "elementary",
                             k, (k,) * r, scaled, params=(r, K))
    raise CoverParameterError("unknown cover kind %r" % kind)


def _is_prime(n):
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def scaled_positions(cover):
    """1-based coordinates i with k e_i (rather than e_i) in the kernel."""
    return frozenset(i + 1 for i in range(DIM) if cover.lattice[i][i] == cover.k)


def is_liftable(cover, m):
    """True iff the integer symplectic matrix m preserves the kernel lattice."""
    if not sp.is_symplectic(m):
        raise ValueError("input matrix is not symplectic")
    return all(lattice_contains(cover.lattice, sp.mat_vec(m, b))
               for b in cover.lattice)


def is_liftable_mod(cover, m):
    """Lattice preservation for a matrix known only mod k.

    Well-defined because every implemented kernel lattice contains k Z^4,
    so membership of m.b in L is insensitive to the choice of integer lift.
    """
    return all(lattice_contains(cover.lattice, sp.mat_vec(m, b))
               for b in cover.lattice)


def congruence_pattern(cover):
    """Entry-wise criterion equivalent (on Sp) to lattice preservation mod k."""
    k = cover.k
    if cover.kind == "cyclic":
        zero = {(2, j) for j in (1, 3, 4)}
        return CongruencePattern(k, frozenset(zero), frozenset({(2, 2)}))
    scaled = scaled_positions(cover)
    if scaled == {1, 2}:
        # symplectic matrices preserving <2e1, 2e2, e3, e4> are block diagonal
        zero = {(1, 3), (1, 4), (2, 3), (2, 4), (3, 1), (3, 2), (4, 1), (4, 2)}
        return CongruencePattern(k, frozenset(zero), frozenset())
    zero = {(i, j) for i in scaled for j in range(1, DIM + 1) if j not in scaled}
    return CongruencePattern(k, frozenset(zero), frozenset(),
                             implicit=(cover.kind not in ("cyclic", "klein")))


# --- SL(2,Z), Gamma_0(k), and the block embedding ---------------------------

SL2_S = ((0, -1), (1, 0))
SL2_T = ((1, 1), (0, 1))


def sl2_mul(a, b):
    return tuple(tuple(sum(a[i][m] * b[m][j] for m in range(2)) for j in range(2))
                 for i in range(2))


def sl2_inv(a):
    return ((a[1][1], -a[0][1]), (-a[1][0], a[0][0]))


def sl2_pow(a, n):
    if n < 0:
        a = sl2_inv(a)
        n = -n
    out = ((1, 0), (0, 1))
    while n:
        if n & 1:
            out = sl2_mul(out, a)
        a = sl2_mul(a, a)
        n >>= 1
    return out


def phi_embed(a):
    """The block embedding SL(2,Z) -> Sp(4,Z) on the first symplectic pair."""
    return ((a[0][0], a[0][1], 0, 0),
            (a[1][0], a[1][1], 0, 0),
            (0, 0, 1, 0),
            (0, 0, 0, 1))


def _proj_point(c, d, k):
    # canonical representative of (c : d) in P^1(Z_k), k prime
    c %= k
    d %= k
    if d:
        di = sp.mod_inverse(d, k)
        return (c * di % k, 1)
    return (1, 0)


@lru_cache(maxsize=None)
def gamma0_data(k):
    """Coset structure of Gamma_0(k) in SL(2,Z) for prime k.

    Returns (index, coset representatives, Schreier generators).  Cosets
    correspond to points of the projective line over Z_k via the bottom row;
    Schreier generators come from the coset table over {S, T}.
    """
    if not _is_prime(k):
        raise CoverParameterError("gamma0_data needs prime k")
    ident = ((1, 0), (0, 1))
    reps = {_proj_point(0, 1, k): ident}
    order = [_proj_point(0, 1, k)]
    queue = [ident]
    while queue:
        g = queue.pop(0)
        for s in (SL2_S, SL2_T):
            ng = sl2_mul(g, s)
            pt = _proj_point(ng[1][0], ng[1][1], k)
            if pt not in reps:
                reps[pt] = ng
                order.append(pt)
                queue.append(ng)
    index = len(reps)
    assert index == k + 1
    gens = []
    seen = set()
    for pt in order:
        r = reps[pt]
        for s in (SL2_S, SL2_T):
            rs = sl2_mul(r, s)
            bar = reps[_proj_point(rs[1][0], rs[1][1], k)]
            g = sl2_mul(rs, sl2_inv(bar))
            assert g[1][0] % k == 0
            if g != ident and g not in seen:
                seen.add(g)
                gens.append(g)
    return index, tuple(reps[pt] for pt in order), tuple(gens)


def sl2_factor(m):
    """Write an SL(2,Z) matrix as a word over S and T (list of (letter, exp))."""
    word = []
    a, c = m[0][0], m[1][0]
    work = m
    # Euclid on the first column: S swaps the rows (up to sign), T^q shears.
    while work[1][0] != 0:
        a, c = work[0][0], work[1][0]
        q = a // c
        # T^-q then S reduces |first column| like a continued fraction step
        work = sl2_mul(sl2_inv(SL2_S), sl2_mul(sl2_pow(SL2_T, -q), work))
        word.append(("T", q))
        word.append(("S", 1))
    # now work = +-T^b
    if work[0][0] == -1:
        # -Identity = S^2
        work = sl2_mul(sl2_inv(SL2_S), sl2_mul(sl2_inv(SL2_S), work))
        word.append(("S", 2))
    b = work[0][1]
    if b:
        word.append(("T", b))
    check = ((1, 0), (0, 1))
    for letter, exp in word:
        check = sl2_mul(check, sl2_pow(SL2_T if letter == "T" else SL2_S, exp))
    assert check == m
    return [(letter, exp) for letter, exp in word if exp]


# --- bounded word search over matrix generators ------------------------------

def express_in(target, gens, max_len=16):
    """Bounded meet-in-the-middle search for target as a word over gens.

    gens is a list of (label, matrix).  Returns a list of (label, +-1) whose
    left-to-right matrix product equals target, or None (inconclusive).
    """
    ident = sp.identity()
    if target == ident:
        return []
    alphabet = []
    for label, g in gens:
        alphabet.append(((label, 1), g))
        gi = sp.mat_inv(g)
        if gi != g:
            alphabet.append(((label, -1), gi))
    half = max_len // 2
    # forward[m] = shortest word with product m
    forward = {ident: []}
    frontier = {ident: []}
    for _ in range(half):
        nxt = {}
        for m, w in frontier.items():
            for step, g in alphabet:
                nm = sp.mat_mul(m, g)
                if nm not in forward:
                    nw = w + [step]
                    forward[nm] = nw
                    nxt[nm] = nw
        if target in forward:
            return forward[target]
        frontier = nxt
    # meet in the middle: target = f * b with b a word product, so
    # f = target * b^-1 must be in forward
    backward = {ident: []}
    bfrontier = {ident: []}
    for _ in range(max_len - half):
        nxt = {}
        for m, w in bfrontier.items():
            for step, g in alphabet:
                nm = sp.mat_mul(g, m)
                if nm not in backward:
                    nw = [step] + w
                    backward[nm] = nw
                    nxt[nm] = nw
        for m, w in nxt.items():
            f = sp.mat_mul(target, sp.mat_inv(m))
            if f in forward:
                word = forward[f] + w
                assert _word_product(word, dict(gens)) == target
                return word
        bfrontier = nxt
    return None


def _word_product(word, gen_map):
    out = sp.identity()
    for label, exp in word:
        m = gen_map[label]
        out = sp.mat_mul(out, sp.mat_pow(m, exp))
    return out
