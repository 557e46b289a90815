"""Stabilizers of chain curves in the liftable mapping class groups.

For each supported (curve, cover) pair this module carries: a claimed
generating set of the stabilizer as twist words and named matrices, a
constructive factorization of any stabilizer matrix over those generators
(an explicit elimination sequence: sign first, then a block reduction into
Gamma_0(k) / SL(2,Z) / Gamma(2), then powers of the named matrices, then
transvection powers), word templates for the homologically trivial part of
the stabilizers, and a finite mod-k verification by direct sweep.
"""

from dataclasses import dataclass
from functools import lru_cache

from . import symplectic as sp
from . import words
from . import covers as cov
from . import graphs as gr

# Homology classes stabilized by the claims.  The class used for c is the
# orientation with first and third coordinates of opposite sign: both
# orientations give the same mod-2 class and the same +- stabilizer.
CURVE_CLASS = {
    "a": (1, 0, 0, 0),
    "b": (0, 1, 0, 0),
    "e": (0, 0, 1, 0),
    "c": (-1, 0, 1, 0),
}

IDENT = sp.identity()


class StabClaimError(ValueError):
    pass


@dataclass(frozen=True)
class StabClaim:
    """Generators of the stabilizer of a curve in the liftable group."""
    curve: str
    cover: object
    word_gens: tuple       # twist-word strings
    family_words: tuple    # sampled members of the infinite word families
    matrix_gens: tuple     # (label, matrix, defining word or None)
    curve_class: tuple

    def gen_map(self):
        return {label: m for label, m, _ in self.matrix_gens}

    def all_matrices(self):
        out = [words.psi(w) for w in self.word_gens + self.family_words]
        out += [m for _, m, _ in self.matrix_gens]
        return out

    def to_json_dict(self):
        return {
            "curve": self.curve,
            "cover": self.cover.name,
            "word_generators": list(self.word_gens),
            "family_words": list(self.family_words),
            "matrix_generators": [
                {"label": label, "matrix": [list(r) for r in m],
                 "word": w}
                for label, m, w in self.matrix_gens],
        }


@dataclass(frozen=True)
class FactorizationWitness:
    """A word over a claim's matrix generators with product the input."""
    matrix: tuple
    word: tuple        # (label, exponent) pairs, product left to right
    residual: tuple    # Identity on success
    status: str        # "ok" or "incomplete"

    @property
    def ok(self):
        return self.status == "ok" and self.residual == IDENT

    def to_json_dict(self):
        return {
            "matrix": [list(r) for r in self.matrix],
            "word": [[label, exp] for label, exp in self.word],
            "status": self.status,
        }


def stabilizes(m, v):
    """True iff m fixes v up to sign."""
    mv = sp.mat_vec(m, v)
    return mv == v or mv == tuple(-x for x in v)


def torelli_word(curve, m, n):
    """Conjugated chain-relator words acting trivially on homology.

    Four families, one per supported curve; every instance is a conjugate
    of the twelfth power of a half-twist pair, hence in the Torelli group.
    """
    if curve == "e":
        return ("a^%d c^%d b^-1 c^%d (a b)^6 c^%d b c^%d a^%d"
                % (-m - 1, m, n, -n, -m, m + 1))
    if curve == "b":
        prefix = "c d e d^%d a^-1 b^%d c^%d d^-1" % (m + 1, -m - 1, n)
        return "%s (b c)^6 (%s)^-1" % (prefix, prefix)
    if curve == "a":
        return ("e^%d c^%d d^-1 c^%d (e d)^6 c^%d d c^%d e^%d"
                % (-m - 1, m, n, -n, -m, m + 1))
    if curve == "c":
        prefix = "(a^-1 e)^%d d e b^-1 c^%d b d^-1 c" % (m + 1, n)
        return "%s (a b)^6 (%s)^-1" % (prefix, prefix)
    raise StabClaimError("no Torelli family for curve %r" % curve)


DEFAULT_FAMILY_RANGE = range(-3, 4)


def _psi_pow_word(base_word, exp):
    return "(%s)^%d" % (base_word, exp)


N_WORD = "d e d a b a^-1 c b^-1 a^-1 e^-1 d^-1 e^-1 d^-1"
N_PRIME_WORD = "e d e e a c^-1 e^-1 d^-1 e^-1"
DE3_WORD = "(d e)^3"
# twist word for the double twist about a curve of class e2 + e4; its image
# is the base-change conjugate of the double twist about d
PTD2P_WORD = "a b c^-1 d^-1 e^2 d c b^-1 a^-1"


def _check_named_words():
    assert words.psi(N_WORD) == words.N_MAT
    assert words.psi(N_PRIME_WORD) == words.N_PRIME
    assert words.psi(words.M_WORD) == words.M_MAT
    assert words.psi(words.M_PRIME_WORD) == words.M_PRIME
    assert words.psi(PTD2P_WORD) == sp.mat_pow(sp.transvection((0, 1, 0, 1)), 2)


_check_named_words()


@lru_cache(maxsize=None)
def _cached_claim(curve, kind, k):
    cover = cov.make_cover(kind, k=k)
    Ta, Tb, Tc, Td, Te = (words.psi(x) for x in "abcde")
    neg = sp.neg(IDENT)
    M, Mp, Np = words.M_MAT, words.M_PRIME, words.N_PRIME
    N = words.N_MAT
    if kind == "cyclic":
        if not cov._is_prime(k):
            raise StabClaimError("cyclic claims need prime k")
        if curve == "a":
            word_gens = ("a", "c", "d", "e", "I")
            family = ()
            matrix_gens = [("iota", neg, "I"), ("Ta", Ta, "a"),
                           ("Tc", Tc, "c"), ("Td", Td, "d"), ("Te", Te, "e")]
        elif curve == "e":
            word_gens = ("a", "c", "e", "I", "b^%d" % k)
            family = tuple("b^%d c^-1 (a b)^6 c b^%d" % (j, -j)
                           for j in range(-k + 1, 1))
            matrix_gens = [("iota", neg, "I"), ("Ta", Ta, "a"),
                           ("Tc", Tc, "c"), ("Te", Te, "e"),
                           ("Mk", sp.mat_pow(M, k),
                            _psi_pow_word(words.M_WORD, k)),
                           ("Mprime", Mp, words.M_PRIME_WORD)]
            for i, g in enumerate(cov.gamma0_data(k)[2]):
                matrix_gens.append(("G0.%d" % i, cov.phi_embed(g), None))
        elif curve == "b":
            word_gens = ("b^%d" % k, "d", "e", "I",
                         "a c^-1 b^%d c a^-1" % k)
            family = tuple(torelli_word("b", m, n)
                           for m in DEFAULT_FAMILY_RANGE
                           for n in DEFAULT_FAMILY_RANGE)
            matrix_gens = [("iota", neg, "I"),
                           ("Tbk", sp.mat_pow(Tb, k), "b^%d" % k),
                           ("Td", Td, "d"), ("Te", Te, "e"),
                           ("Mk", sp.mat_pow(M, k),
                            _psi_pow_word(words.M_WORD, k)),
                           ("Nk", sp.mat_pow(N, k), _psi_pow_word(N_WORD, k))]
        else:
            raise StabClaimError(
                "no claim available for (%s, %s)" % (curve, cover.name))
    elif kind == "klein":
        if curve == "a":
            word_gens = ("a", "c^2", "d", "e", "I", "c^-1 (e d)^6 c")
            family = tuple(torelli_word("a", m, n)
                           for m in DEFAULT_FAMILY_RANGE
                           for n in DEFAULT_FAMILY_RANGE)
            matrix_gens = [("iota", neg, "I"), ("Ta", Ta, "a"),
                           ("Td", Td, "d"), ("Te", Te, "e"),
                           ("Mp2", sp.mat_pow(Mp, 2),
                            _psi_pow_word(words.M_PRIME_WORD, 2)),
                           ("Np2", sp.mat_pow(Np, 2),
                            _psi_pow_word(N_PRIME_WORD, 2))]
        elif curve == "e":
            word_gens = ("a", "b", "c^2", "e", "I", "c^-1 (a b)^6 c")
            family = tuple(torelli_word("e", m, n)
                           for m in DEFAULT_FAMILY_RANGE
                           for n in DEFAULT_FAMILY_RANGE)
            matrix_gens = [("iota", neg, "I"), ("Ta", Ta, "a"),
                           ("Tb", Tb, "b"), ("Te", Te, "e"),
                           ("M2", sp.mat_pow(M, 2),
                            _psi_pow_word(words.M_WORD, 2)),
                           ("Mp2", sp.mat_pow(Mp, 2),
                            _psi_pow_word(words.M_PRIME_WORD, 2))]
        elif curve == "c":
            word_gens = ("a", "e", "c^2", "I", PTD2P_WORD)
            family = tuple(torelli_word("c", m, n)
                           for m in DEFAULT_FAMILY_RANGE
                           for n in DEFAULT_FAMILY_RANGE)
            de3 = words.psi(DE3_WORD)
            M2 = sp.mat_pow(M, 2)
            matrix_gens = [("iota", neg, "I"), ("Ta", Ta, "a"),
                           ("Te", Te, "e"),
                           ("Tc2", sp.mat_pow(Tc, 2), "c^2"),
                           ("M2Np2", sp.mat_mul(M2, sp.mat_pow(Np, 2)), None),
                           ("M2DE3", sp.mat_mul(M2, de3), None),
                           ("PTd2P", words.psi(PTD2P_WORD), PTD2P_WORD)]
        else:
            raise StabClaimError(
                "no claim available for (%s, %s)" % (curve, cover.name))
    else:
        raise StabClaimError("no claims for cover kind %r" % kind)

    vclass = CURVE_CLASS[curve]
    claim = StabClaim(curve=curve, cover=cover, word_gens=word_gens,
                      family_words=family, matrix_gens=tuple(matrix_gens),
                      curve_class=vclass)
    for m in claim.all_matrices():
        assert stabilizes(m, vclass), "claim generator moves +-[%s]" % curve
        assert cov.is_liftable(cover, m), "claim generator is not liftable"
    return claim


def stab_claim(curve, cover):
    return _cached_claim(curve, cover.kind, cover.k)


# --- constructive factorization ----------------------------------------------

def _upper_block(m):
    return ((m[0][0], m[0][1]), (m[1][0], m[1][1]))


def _lower_block(m):
    return ((m[2][2], m[2][3]), (m[3][2], m[3][3]))


def _sl2_word_tu(m):
    """Factor an SL(2,Z) matrix over T and U = ((1,0),(1,1)) via S=T^-1UT^-1."""
    out = []
    for letter, exp in cov.sl2_factor(m):
        if letter == "T":
            out.append(("T", exp))
        else:
            step = [("T", -1), ("U", 1), ("T", -1)]
            if exp < 0:
                step = [("T", 1), ("U", -1), ("T", 1)]
            out.extend(step * abs(exp))
    return out


# the chain twists restrict to the two symplectic coordinate planes as the
# elementary SL(2,Z) generators: a, e act as T^-1 and b, d act as U
_BLOCK_LETTERS = {
    "upper": {"T": ("Ta", -1), "U": ("Tb", 1)},
    "lower": {"T": ("Te", -1), "U": ("Td", 1)},
}


def _block_word(block2, which, relabel=None):
    """Word over twist labels whose product embeds block2 in the given plane."""
    out = []
    for letter, exp in _sl2_word_tu(block2):
        label, sgn = _BLOCK_LETTERS[which][letter]
        if relabel:
            label = relabel.get(label, label)
        out.append((label, sgn * exp))
    return out


def _word_product(word, gen_map):
    out = IDENT
    for label, exp in word:
        out = sp.mat_mul(out, sp.mat_pow(gen_map[label], exp))
    return out


def _gamma0_rewrite(k, g):
    """Word over Gamma_0(k) Schreier generator indices with product g."""
    _, reps, gens = cov.gamma0_data(k)
    by_point = {cov._proj_point(r[1][0], r[1][1], k): r for r in reps}

    def rep(m):
        return by_point[cov._proj_point(m[1][0], m[1][1], k)]

    assert g[1][0] % k == 0, "matrix is not in the congruence subgroup"
    ident2 = ((1, 0), (0, 1))
    geni = {gm: i for i, gm in enumerate(gens)}
    letters = []
    for letter, exp in cov.sl2_factor(g):
        s = 1 if exp > 0 else -1
        letters += [(letter, s)] * abs(exp)
    out = []
    r = ident2
    for (letter, s) in letters:
        x = cov.SL2_T if letter == "T" else cov.SL2_S
        r2 = rep(cov.sl2_mul(r, x if s > 0 else cov.sl2_inv(x)))
        gm = (cov.sl2_mul(cov.sl2_mul(r, x), cov.sl2_inv(r2)) if s > 0
              else cov.sl2_mul(cov.sl2_mul(r2, x), cov.sl2_inv(r)))
        if gm != ident2:
            out.append((geni[gm], s))
        r = r2
    assert r == ident2
    check = ident2
    for i, s in out:
        check = cov.sl2_mul(check, cov.sl2_inv(gens[i]) if s < 0 else gens[i])
    # merge adjacent equal indices
    merged = []
    for i, s in out:
        if merged and merged[-1][0] == i:
            merged[-1] = (i, merged[-1][1] + s)
            if merged[-1][1] == 0:
                merged.pop()
        else:
            merged.append((i, s))
    assert check == g
    return merged


def factor_stabilizer(a_mat, curve, cover):
    """Write a stabilizer matrix as a word over the claim's generators.

    The elimination follows a fixed sequence: flip the sign with -Identity
    if the matrix negates the curve class, reduce the relevant 2x2 block
    through the congruence subgroup machinery, peel off powers of the named
    matrices, and finish with transvection powers.  The returned witness
    word multiplies out to the input exactly over Z.
    """
    claim = stab_claim(curve, cover)
    v = claim.curve_class
    if not sp.is_symplectic(a_mat):
        raise StabClaimError("input is not symplectic")
    if not stabilizes(a_mat, v):
        raise StabClaimError("input does not stabilize +-[%s]" % curve)
    if not cov.is_liftable(cover, a_mat):
        raise StabClaimError("input is not liftable for %s" % cover.name)
    gen_map = claim.gen_map()
    word = []
    work = a_mat
    if sp.mat_vec(work, v) != v:
        word.append(("iota", 1))
        work = sp.mat_mul(sp.neg(IDENT), work)
    key = (curve, cover.kind)
    if key == ("e", "cyclic"):
        tail = _factor_e_cyclic(work, cover.k, gen_map)
    elif key == ("b", "cyclic"):
        tail = _factor_b_cyclic(work, cover.k, gen_map)
    elif key == ("a", "klein"):
        tail = _factor_a_klein(work, gen_map)
    elif key == ("e", "klein"):
        tail = _factor_e_klein(work, gen_map)
    elif key == ("c", "klein"):
        tail = _factor_c_klein(work, gen_map)
    else:
        raise StabClaimError("no factorization routine for (%s, %s)"
                             % (curve, cover.name))
    if tail is None:
        # bounded word search over the claim generators as a fallback
        found = cov.express_in(work, [(l, m) for l, m, _ in claim.matrix_gens],
                               max_len=8)
        if found is None:
            return FactorizationWitness(matrix=a_mat, word=tuple(word),
                                        residual=work, status="incomplete")
        tail = found
    word += tail
    prod = _word_product(word, gen_map)
    if prod != a_mat:
        return FactorizationWitness(matrix=a_mat, word=tuple(word),
                                    residual=sp.mat_mul(sp.mat_inv(prod), a_mat),
                                    status="incomplete")
    return FactorizationWitness(matrix=a_mat, word=tuple(word),
                                residual=IDENT, status="ok")


def _factor_e_cyclic(a, k, gen_map):
    # a fixes e3: third column is e3 and the last row is (0,0,0,1)
    assert tuple(r[2] for r in a) == (0, 0, 1, 0) and a[3] == (0, 0, 0, 1)
    b_blk = _upper_block(a)
    word = [("G0.%d" % i, e) for i, e in _gamma0_rewrite(k, b_blk)]
    a2 = sp.mat_mul(cov.phi_embed(_sl2_inv_exact(b_blk)), a)
    a31, a32, a34 = a2[2][0], a2[2][1], a2[2][3]
    assert a31 % k == 0
    p = a34 - a32 * a31
    a3 = sp.mat_mul(sp.mat_pow(words.psi("e"), p),
                    sp.mat_mul(sp.mat_pow(words.M_MAT, a31), a2))
    assert a3 == sp.mat_pow(words.M_PRIME, a32)
    word += [("Mk", -a31 // k), ("Te", -p), ("Mprime", a32)]
    return [(l, e) for l, e in word if e]


def _sl2_inv_exact(b):
    return cov.sl2_inv(b)


def _factor_b_cyclic(a, k, gen_map):
    # a fixes e2: second column is e2 and the first row is (1,0,0,0)
    assert tuple(r[1] for r in a) == (0, 1, 0, 0) and a[0] == (1, 0, 0, 0)
    d_blk = _lower_block(a)
    w1 = _block_word(cov.sl2_inv(d_blk), "lower")
    a1 = sp.mat_mul(_word_product(w1, gen_map), a)
    a23, a24 = a1[1][2], a1[1][3]
    assert a23 % k == 0 and a24 % k == 0
    a2 = sp.mat_mul(sp.mat_pow(words.M_MAT, -a24),
                    sp.mat_mul(sp.mat_pow(words.N_MAT, -a23), a1))
    t = a2[1][0]
    assert a2 == sp.mat_pow(words.psi("b"), t)
    assert t % k == 0
    word = _invert_word(w1)
    word += [("Nk", a23 // k), ("Mk", a24 // k), ("Tbk", t // k)]
    return [(l, e) for l, e in word if e]


def _invert_word(word):
    return [(l, -e) for l, e in reversed(word)]


def _factor_a_klein(a, gen_map):
    # a fixes e1: first column is e1 and the second row is (0,1,0,0)
    assert tuple(r[0] for r in a) == (1, 0, 0, 0) and a[1] == (0, 1, 0, 0)
    # the twist at a acts on the left as row1 -= s * row2
    s0 = a[0][1]
    a0 = sp.mat_mul(sp.mat_pow(words.psi("a"), s0), a)
    assert a0[0][1] == 0
    d_blk = _lower_block(a0)
    w1 = _block_word(cov.sl2_inv(d_blk), "lower")
    ap = sp.mat_mul(_word_product(w1, gen_map), a0)
    a13, a14 = ap[0][2], ap[0][3]
    assert a13 % 2 == 0 and a14 % 2 == 0
    fin = sp.mat_mul(sp.mat_pow(words.psi("a"), -a13 * a14),
                     sp.mat_mul(sp.mat_pow(words.M_PRIME, -a14),
                                sp.mat_mul(sp.mat_pow(words.N_PRIME, -a13), ap)))
    assert fin == IDENT
    word = [("Ta", -s0)] + _invert_word(w1)
    word += [("Np2", a13 // 2), ("Mp2", a14 // 2), ("Ta", a13 * a14)]
    return [(l, e) for l, e in word if e]


def _factor_e_klein(a, gen_map):
    assert tuple(r[2] for r in a) == (0, 0, 1, 0) and a[3] == (0, 0, 0, 1)
    # the twist at e acts on the left as row3 -= s * row4
    s0 = a[2][3]
    a0 = sp.mat_mul(sp.mat_pow(words.psi("e"), s0), a)
    assert a0[2][3] == 0
    b_blk = _upper_block(a0)
    w1 = _block_word(cov.sl2_inv(b_blk), "upper")
    ap = sp.mat_mul(_word_product(w1, gen_map), a0)
    a31, a32 = ap[2][0], ap[2][1]
    assert a31 % 2 == 0 and a32 % 2 == 0
    fin = sp.mat_mul(sp.mat_pow(words.psi("e"), -a31 * a32),
                     sp.mat_mul(sp.mat_pow(words.M_PRIME, -a32),
                                sp.mat_mul(sp.mat_pow(words.M_MAT, a31), ap)))
    assert fin == IDENT
    word = [("Te", -s0)] + _invert_word(w1)
    word += [("M2", -a31 // 2), ("Mp2", a32 // 2), ("Te", a31 * a32)]
    return [(l, e) for l, e in word if e]


def _gamma2_word(b):
    """Factor a level-2 congruence SL(2,Z) matrix over T^2, U^2, and -I."""
    assert (b[0][0] % 2, b[1][1] % 2, b[0][1] % 2, b[1][0] % 2) == (1, 1, 0, 0)
    word = []
    work = b
    # Euclid on the first column with even shear steps
    guard = 0
    while work[1][0] != 0:
        guard += 1
        assert guard < 300, "level-2 reduction failed to terminate"
        a_, c_ = work[0][0], work[1][0]
        if abs(a_) > abs(c_):
            q = _nearest_even(a_, c_)
            # T^-q: row1 -= q row2
            work = (( work[0][0] - q * work[1][0], work[0][1] - q * work[1][1]),
                    work[1])
            word.append(("T2", q // 2))
        else:
            q = _nearest_even(c_, a_)
            work = (work[0],
                    (work[1][0] - q * work[0][0], work[1][1] - q * work[0][1]))
            word.append(("U2", q // 2))
    if work[0][0] == -1:
        word.append(("neg2", 1))
        work = tuple(tuple(-x for x in r) for r in work)
    assert work[0][0] == 1 and work[1][1] == 1
    if work[0][1]:
        word.append(("T2", work[0][1] // 2))
    # the recorded word satisfies prefix_product * residue = b, so b equals
    # the product of the recorded letters in order
    t2 = ((1, 2), (0, 1))
    u2 = ((1, 0), (2, 1))
    neg2 = ((-1, 0), (0, -1))
    check = ((1, 0), (0, 1))
    for l, e in word:
        m = {"T2": t2, "U2": u2, "neg2": neg2}[l]
        check = cov.sl2_mul(check, cov.sl2_pow(m, e))
    assert check == b
    return [(l, e) for l, e in word if e]


def _nearest_even(a_, c_):
    q = round(a_ / c_)
    if q % 2:
        q += 1 if a_ * c_ > 0 else -1
    return q


_P_CONJ_CACHE = {}


def _p_conjugates():
    """Conjugates by the base-change matrix, verified once numerically."""
    if _P_CONJ_CACHE:
        return _P_CONJ_CACHE
    P = words.P_MAT
    Pi = sp.mat_inv(P)
    Td2 = sp.mat_pow(words.psi("d"), 2)
    Te2 = sp.mat_pow(words.psi("e"), 2)
    conj = {
        "PTd2P": sp.mat_mul(P, sp.mat_mul(Td2, Pi)),
        "PTe2P": sp.mat_mul(P, sp.mat_mul(Te2, Pi)),
        "PIP": sp.mat_mul(P, sp.mat_mul(words.I_MAT, Pi)),
    }
    assert conj["PTe2P"] == Te2
    assert conj["PTd2P"] == words.psi(PTD2P_WORD)
    assert conj["PIP"] == sp.mat_mul(sp.mat_pow(words.M_MAT, 2),
                                     words.psi(DE3_WORD))
    for label, src in (("Ta", words.psi("a")),
                       ("Tc2", sp.mat_pow(words.psi("c"), 2)),
                       ("Jpow", words.J_MAT)):
        got = sp.mat_mul(Pi, sp.mat_mul(src, P))
        want = _C_FRAME_OPS[label]
        assert got == want
        # powers stay linear in the exponent: (I + X)^s = I + s X
        lin = tuple(tuple(3 * x - 2 * int(i == j) for j, x in enumerate(r))
                    for i, r in enumerate(want))
        assert sp.mat_pow(want, 3) == lin
    _P_CONJ_CACHE.update(conj)
    return conj


# stabilizer generators for the separating class, conjugated through the
# base change P: each becomes an integer row operation that fixes the first
# row, and each power is linear in the exponent (checked at import below)
_C_FRAME_OPS = {
    "Ta": ((1, 0, 0, 0), (1, 1, 0, 1), (-1, 0, 1, -1), (0, 0, 0, 1)),
    "Tc2": ((1, 0, 0, 0), (2, 1, 0, 4), (-4, 0, 1, -8), (0, 0, 0, 1)),
    "Jpow": ((1, 0, 0, 0), (0, 1, -2, 0), (0, 0, 1, 0), (-2, 0, 0, 1)),
}


def _factor_c_klein(a, gen_map):
    v = CURVE_CLASS["c"]
    assert sp.mat_vec(a, v) == v
    _p_conjugates()
    # single twists fix the parities of the two within-block entries the
    # reduction needs even; the odd diagonal makes one step each enough
    s = a[0][1] % 2
    t = a[2][3] % 2
    work = sp.mat_mul(sp.mat_pow(words.psi("a"), s),
                      sp.mat_mul(sp.mat_pow(words.psi("e"), t), a))
    assert work[0][1] % 2 == 0 and work[2][3] % 2 == 0
    pre_inv = [("Te", -t), ("Ta", -s)]
    P = words.P_MAT
    b = sp.mat_mul(sp.mat_inv(P), sp.mat_mul(work, P))
    # the base change carries the stabilized class to e2, so b fixes e2;
    # preservation of the pairing then pins the first row to e1
    assert b[0] == (1, 0, 0, 0)
    assert tuple(r[1] for r in b) == (0, 1, 0, 0)

    applied = []

    def op(label, s):
        nonlocal b
        if s:
            b = sp.mat_mul(sp.mat_pow(_C_FRAME_OPS[label], s), b)
            applied.append((label, s))

    # clear the first column below the diagonal; the entries driving each
    # step are even because the input is block-diagonal mod 2
    assert b[3][0] % 2 == 0
    op("Jpow", b[3][0] // 2)
    op("Ta", b[2][0])
    assert b[1][0] % 2 == 0
    c = b[1][0] // 2
    # this pair changes entry (2,1) by -2c and leaves rows 3-4 column 1 alone
    op("Tc2", c)
    op("Ta", -4 * c)
    # with the first column and second row cleared, preservation of the
    # pairing forces the rest of rows 1-2 to vanish
    assert b[0] == (1, 0, 0, 0) and b[1] == (0, 1, 0, 0)
    assert b[2][:2] == (0, 0) and b[3][:2] == (0, 0)
    g2 = _gamma2_word(_lower_block(b))
    # lift the block word back through the base change: the T^2 block is
    # Te^-2 (P-invariant), the U^2 block conjugates to the b-chain word,
    # the block sign conjugates to the named product
    lifted = []
    for l, e in g2:
        if l == "T2":
            lifted.append(("Te", -2 * e))
        elif l == "U2":
            lifted.append(("PTd2P", e))
        else:
            lifted.append(("M2DE3", e))
    # a = pre_inv * P (op_1^-1 ... op_n^-1 residue) P^-1 and conjugation by
    # P turns each frame operation back into its liftable original
    word = list(pre_inv)
    for l, e in applied:
        if l == "Jpow":
            word += _j_power_word(-e)
        else:
            word.append((l, -e))
    word += lifted
    word = [(l, e) for l, e in word if e]
    assert _word_product(word, gen_map) == a
    return word


def _j_power_word(n):
    # J = iota (N')^-2 M^-2 and the claim generator is M^2 (N')^2, so
    # J = iota * (M2Np2)^-1 up to commutation checked below
    J = words.J_MAT
    x = sp.mat_mul(sp.neg(IDENT), sp.mat_inv(
        sp.mat_mul(sp.mat_pow(words.M_MAT, 2), sp.mat_pow(words.N_PRIME, 2))))
    assert x == J
    out = []
    if n % 2:
        out.append(("iota", 1))
    if n:
        out.append(("M2Np2", -n))
    return out


def verify_stab_modk(curve, cover, k):
    """Finite mod-k check of a stabilizer claim, by direct sweep.

    Enumerates the congruence subgroup attached to the cover, collects the
    elements fixing +-[curve] mod k, closes the mod-k images of the claim
    generators, and reports both orders with the equality verdict.
    """
    if k != cover.k:
        raise StabClaimError(
            "modulus %d does not match the cover modulus %d" % (k, cover.k))
    claim = stab_claim(curve, cover)
    gens = gr.group_generators(cover, k)
    group_keys = sp.mulclose_fast(gens, k)
    v = sp.reduce_vec(claim.curve_class, k)
    nv = tuple((-x) % k for x in v)
    stab_keys = set()
    for key in group_keys:
        m = sp.unpack_mat(int(key), k)
        mv = sp.mat_vec(m, v, k)
        if mv == v or mv == nv:
            stab_keys.add(int(key))
    images = [sp.reduce_mat(m, k) for m in claim.all_matrices()]
    closure_keys = {int(x) for x in sp.mulclose_fast(images, k)}
    return {
        "curve": curve,
        "cover": cover.name,
        "k": k,
        "group_order": int(len(group_keys)),
        "stabilizer_order": len(stab_keys),
        "claim_closure_order": len(closure_keys),
        "ok": closure_keys == stab_keys,
    }
