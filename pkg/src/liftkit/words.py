"""Words in the Dehn twist generators of Mod(S2) and their symplectic images.

The twist alphabet is {a, b, c, d, e} (the standard chain of curves on the
genus-2 surface) plus the hyperelliptic involution, written `I` in the word
grammar.  Words act on homology through the 4x4 symplectic representation.

Grammar (whitespace separates terms):

    word := term+
    term := atom ('^' int)?
    atom := 'a'|'b'|'c'|'d'|'e'|'I'|'(' word ')'
"""

from functools import lru_cache

from . import symplectic as sp

TWIST_LETTERS = "abcde"
IOTA = "I"

# Homology classes of the chain curves, pinned by the printed-matrix identities
# (see selfcheck below): consecutive chain curves pair to +-1, distant to 0.
HOMOLOGY = {
    "a": (1, 0, 0, 0),
    "b": (0, 1, 0, 0),
    "c": (1, 0, 1, 0),
    "d": (0, 0, 0, 1),
    "e": (0, 0, 1, 0),
}


class WordSyntaxError(ValueError):
    def __init__(self, message, position):
        super().__init__("%s (at position %d)" % (message, position))
        self.position = position


def parse_word(text):
    """Parse a word in the twist grammar into a normalized letter list."""
    letters, pos = _parse_seq(text, 0, depth=0)
    if pos != len(text):
        raise WordSyntaxError("unexpected %r" % text[pos], pos)
    return normalize(letters)


def _parse_seq(text, pos, depth):
    letters = []
    n = len(text)
    while pos < n:
        ch = text[pos]
        if ch.isspace():
            pos += 1
            continue
        if ch == ")":
            if depth == 0:
                raise WordSyntaxError("unmatched ')'", pos)
            return letters, pos
        if ch == "(":
            group, pos = _parse_seq(text, pos + 1, depth + 1)
            if pos >= n or text[pos] != ")":
                raise WordSyntaxError("unmatched '('", pos)
            pos += 1
            exp, pos = _parse_exponent(text, pos)
            block = group if exp >= 0 else invert(group)
            letters.extend(block * abs(exp))
        elif ch in TWIST_LETTERS or ch == IOTA:
            pos += 1
            exp, pos = _parse_exponent(text, pos)
            if exp:
                letters.append((ch, exp))
        else:
            raise WordSyntaxError("unexpected %r" % ch, pos)
    return letters, pos


def _parse_exponent(text, pos):
    if pos >= len(text) or text[pos] != "^":
        return 1, pos
    pos += 1
    start = pos
    if pos < len(text) and text[pos] in "+-":
        pos += 1
    while pos < len(text) and text[pos].isdigit():
        pos += 1
    if pos == start or not text[start:pos].lstrip("+-"):
        raise WordSyntaxError("malformed exponent", start)
    return int(text[start:pos]), pos


def normalize(letters):
    """Merge adjacent equal symbols, drop zero exponents, reduce I mod 2."""
    out = []
    for sym, exp in letters:
        if sym == IOTA:
            exp %= 2
        if exp == 0:
            continue
        if out and out[-1][0] == sym:
            merged = out[-1][1] + exp
            if sym == IOTA:
                merged %= 2
            out.pop()
            if merged:
                out.append((sym, merged))
        else:
            out.append((sym, exp))
    return tuple(out)


def invert(letters):
    return tuple((sym, -exp) for sym, exp in reversed(letters))


def concat(*words):
    out = []
    for w in words:
        out.extend(w)
    return normalize(out)


def word_str(word):
    parts = []
    for sym, exp in word:
        parts.append(sym if exp == 1 else "%s^%d" % (sym, exp))
    return " ".join(parts)


def contains_iota(word):
    return any(sym == IOTA for sym, _ in word)


@lru_cache(maxsize=None)
def _letter_matrix(sym, mod):
    if sym == IOTA:
        return sp.reduce_mat(sp.neg(sp.identity()), mod)
    return sp.transvection(HOMOLOGY[sym], mod)


def psi(word, mod=0):
    """The symplectic representation: I |-> -Identity, twists to transvections.

    Words record application order left-first, so the matrix of `x y` is
    psi(y) @ psi(x).
    """
    if isinstance(word, str):
        word = parse_word(word)
    out = sp.identity()
    for sym, exp in word:
        m = _letter_matrix(sym, mod)
        out = sp.mat_mul(sp.mat_pow(m, exp, mod), out, mod)
    return out


def psi_mod(word, k):
    if k < 2:
        raise ValueError("modulus must be >= 2")
    return psi(word, mod=k)


def is_torelli(word):
    """True iff the word acts trivially on integral homology."""
    return psi(word) == sp.identity()


# Matrices printed in the source computations, used as cross-checks and as
# named stabilizer generators.
M_MAT = ((1, 0, 0, 0),
         (0, 1, 0, 1),
         (-1, 0, 1, 0),
         (0, 0, 0, 1))
N_MAT = ((1, 0, 0, 0),
         (0, 1, 1, 0),
         (0, 0, 1, 0),
         (1, 0, 0, 1))
M_PRIME = ((1, 0, 0, 1),
           (0, 1, 0, 0),
           (0, 1, 1, 0),
           (0, 0, 0, 1))
N_PRIME = ((1, 0, 1, 0),
           (0, 1, 0, 0),
           (0, 0, 1, 0),
           (0, -1, 0, 1))
J_MAT = ((3, 0, 2, 0),
         (0, -1, 0, 2),
         (-2, 0, -1, 0),
         (0, -2, 0, 3))
P_MAT = ((0, -1, 0, 0),
         (1, 0, 0, 1),
         (0, 1, 1, 0),
         (0, 0, 0, 1))
I_MAT = ((1, 0, 0, 0),
         (0, 1, 0, 0),
         (0, 0, -1, 0),
         (0, 0, 0, -1))

M_WORD = "a b a^-1 c b^-1 a^-1 e^-1"
M_PRIME_WORD = "e a c^-1"
HYPERELLIPTIC_WORD = "e d c b a^2 b c d e"


def selfcheck():
    """Validate the homology assignment against the printed matrix identities.

    Raises AssertionError on any mismatch; called once at import time so a
    convention drift fails fast.
    """
    assert psi(M_WORD) == M_MAT
    # N and N' arise from M and M' by conjugation; the conjugator acts on the
    # inverse side under the application-order convention above.
    ded = sp.mat_inv(psi("d e d"))
    assert sp.mat_mul(sp.mat_mul(ded, M_MAT), sp.mat_inv(ded)) == N_MAT
    assert psi(M_PRIME_WORD) == M_PRIME
    ede = sp.mat_inv(psi("e d e"))
    assert sp.mat_mul(sp.mat_mul(ede, M_PRIME), sp.mat_inv(ede)) == N_PRIME
    assert psi(HYPERELLIPTIC_WORD) == sp.neg(sp.identity())
    assert psi("(a b)^3 (d e)^-3") == sp.neg(sp.identity())
    ji = sp.mat_mul(sp.neg(sp.identity()),
                    sp.mat_mul(sp.mat_pow(N_PRIME, -2), sp.mat_pow(M_MAT, -2)))
    assert ji == J_MAT
    pip = sp.mat_mul(sp.mat_mul(P_MAT, I_MAT), sp.mat_inv(P_MAT))
    assert pip == sp.mat_mul(sp.mat_pow(M_MAT, 2), sp.mat_pow(psi("d e"), 3))


selfcheck()
