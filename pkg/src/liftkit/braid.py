"""Word problem for the Artin group of type A5 (the braid group B6).

Twist letters a..e map to the standard generators sigma_1..sigma_5; adjacent
letters braid, distant letters commute.  Equality is decided by left-greedy
Garside normal form: a braid is stored as Delta^n A_1 ... A_l with each A_i a
permutation braid (encoded by its underlying permutation of {0..5}), the pair
(A_i, A_{i+1}) left-weighted, and no A_i equal to Delta or the identity.

Equality of normal forms certifies equality in B6, hence equality of the
corresponding products of Dehn twists.  Words containing the involution
letter I are outside this group and are rejected.
"""

from . import words
from . import symplectic as sp

STRANDS = 6
PERM_ID = tuple(range(STRANDS))
W0 = tuple(reversed(PERM_ID))

LETTER_INDEX = {s: i for i, s in enumerate(words.TWIST_LETTERS)}


class IotaUnsupported(ValueError):
    """Raised for words containing I; equality there needs the psi check."""


def _compose(p, q):
    # apply p first, then q
    return tuple(q[p[i]] for i in range(STRANDS))


def _inverse(p):
    out = [0] * STRANDS
    for i, pi in enumerate(p):
        out[pi] = i
    return tuple(out)


def _transposition(i):
    p = list(PERM_ID)
    p[i], p[i + 1] = p[i + 1], p[i]
    return tuple(p)


def _starting_set(p):
    # sigma_i can begin the permutation braid iff strands i, i+1 cross
    return {i for i in range(STRANDS - 1) if p[i] > p[i + 1]}


def _finishing_set(p):
    q = _inverse(p)
    return {i for i in range(STRANDS - 1) if q[i] > q[i + 1]}


def _flip(p):
    # conjugation by Delta: tau(A) = Delta^-1 A Delta
    return tuple(W0[p[W0[i]]] for i in range(STRANDS))


def _left_weight_pair(a, b):
    """Slide crossings from b into a until S(b) is contained in F(a)."""
    moved = False
    while True:
        pending = _starting_set(b) - _finishing_set(a)
        if not pending:
            return a, b, moved
        i = min(pending)
        t = _transposition(i)
        a = _compose(a, t)
        b = _compose(t, b)
        moved = True


def _normalize(simples):
    """Left-weight a list of permutation braids; return (delta_power, tail)."""
    simples = [p for p in simples if p != PERM_ID]
    changed = True
    while changed:
        changed = False
        for j in range(len(simples) - 2, -1, -1):
            a, b, moved = _left_weight_pair(simples[j], simples[j + 1])
            if moved:
                simples[j], simples[j + 1] = a, b
                changed = True
        simples = [p for p in simples if p != PERM_ID]
    power = 0
    while simples and simples[0] == W0:
        simples.pop(0)
        power += 1
    return power, tuple(simples)


def braid_normal_form(word):
    """Garside normal form (delta_power, permutation factors) of a twist word."""
    if isinstance(word, str):
        word = words.parse_word(word)
    if words.contains_iota(word):
        raise IotaUnsupported("words containing I have no braid normal form")
    power = 0
    simples = []
    for sym, exp in word:
        i = LETTER_INDEX[sym]
        t = _transposition(i)
        if exp > 0:
            simples.extend([t] * exp)
        else:
            # sigma_i^-1 = Delta^-1 s with s the permutation braid w0 tau_i;
            # pushing Delta^-1 to the front conjugates earlier factors.
            s = _compose(W0, t)
            for _ in range(-exp):
                power -= 1
                simples = [_flip(p) for p in simples]
                simples.append(s)
    tail_power, tail = _normalize(simples)
    return power + tail_power, tail


def braid_equal(w1, w2):
    """Decide equality of two I-free twist words in the braid group B6.

    A True answer certifies equality of the corresponding mapping classes;
    the symplectic images are cross-checked as a soundness guard.
    """
    if isinstance(w1, str):
        w1 = words.parse_word(w1)
    if isinstance(w2, str):
        w2 = words.parse_word(w2)
    equal = braid_normal_form(w1) == braid_normal_form(w2)
    if equal:
        assert words.psi(w1) == words.psi(w2)
    return equal


def is_trivial_braid(word):
    return braid_normal_form(word) == (0, ())
