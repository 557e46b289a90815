"""Exact symplectic linear algebra over Z and Z_k."""

import pytest
from hypothesis import given, settings, strategies as st

from liftkit import symplectic as sp

E1, E2, E3, E4 = (1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)


def random_symplectic(rng, length=8):
    out = sp.identity()
    vs = [E1, E2, (1, 0, 1, 0), E4, E3]
    for _ in range(length):
        t = sp.transvection(vs[rng.randrange(5)])
        if rng.random() < 0.5:
            t = sp.mat_inv(t)
        out = sp.mat_mul(out, t)
    return out


class TestPairing:
    def test_defining_pairs(self):
        assert sp.pairing(E1, E2) == 1
        assert sp.pairing(E3, E4) == 1

    def test_antisymmetry_on_basis(self):
        assert sp.pairing(E2, E1) == -1

    def test_klein_edge_pairing_mod_k(self):
        for k in (2, 3, 5):
            assert sp.pairing(E2, (-1, 0, 1, 0), k) == 1

    @given(st.lists(st.integers(-9, 9), min_size=4, max_size=4),
           st.lists(st.integers(-9, 9), min_size=4, max_size=4))
    def test_antisymmetric(self, x, y):
        assert sp.pairing(tuple(x), tuple(y)) == -sp.pairing(tuple(y), tuple(x))

    @given(st.lists(st.integers(-9, 9), min_size=4, max_size=4),
           st.lists(st.integers(-9, 9), min_size=4, max_size=4),
           st.lists(st.integers(-9, 9), min_size=4, max_size=4),
           st.integers(-5, 5))
    def test_bilinear(self, x, y, z, c):
        x, y, z = tuple(x), tuple(y), tuple(z)
        lhs = sp.pairing(x, tuple(c * yi + zi for yi, zi in zip(y, z)))
        assert lhs == c * sp.pairing(x, y) + sp.pairing(x, z)

    def test_self_pairing_zero(self):
        for v in (E1, (2, 3, 4, 5), (-1, 0, 1, 0)):
            assert sp.pairing(v, v) == 0


class TestPrimitive:
    def test_basis_vector(self):
        assert sp.is_primitive(E1)

    def test_common_factor(self):
        assert not sp.is_primitive((2, 4, 6, 8))

    def test_common_factor_coprime_to_modulus(self):
        assert sp.is_primitive((2, 4, 6, 8), 3)

    def test_zero_vector(self):
        assert not sp.is_primitive((0, 0, 0, 0))


class TestTransvection:
    def test_along_e1(self):
        t = sp.transvection(E1)
        expect = ((1, -1, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1))
        assert t == expect

    def test_fixes_orthogonal_vectors(self):
        t = sp.transvection((1, 0, 1, 0))
        for w in (E2, (0, 0, 0, 0)):
            if sp.pairing(w, (1, 0, 1, 0)) == 0:
                assert sp.mat_vec(t, w) == w

    def test_symplectic_and_unit_det(self):
        for v in (E1, E3, (1, 0, 1, 0), (1, 2, 3, 4)):
            t = sp.transvection(v)
            assert sp.is_symplectic(t)

    def test_inverse_is_negated_vector_twice(self):
        for v in (E1, (1, 0, 1, 0), (0, 1, 1, 1)):
            t = sp.transvection(v)
            # the transvection ignores the sign of v, so the product is t^2
            assert sp.mat_mul(t, sp.transvection(tuple(-x for x in v))) \
                == sp.mat_pow(t, 2)
            assert sp.mat_mul(t, sp.mat_inv(t)) == sp.identity()

    def test_rejects_non_primitive(self):
        with pytest.raises(ValueError):
            sp.transvection((2, 2, 0, 0))

    @given(st.integers(0, 2 ** 32 - 1))
    @settings(max_examples=40, deadline=None)
    def test_products_stay_symplectic(self, seed):
        import random
        m = random_symplectic(random.Random(seed))
        assert sp.is_symplectic(m)


class TestLiftPartner:
    def test_already_a_lift(self):
        for k in (2, 3, 5):
            assert sp.lift_partner(E1, E2, k) == E2

    def test_mod2_example(self):
        v = sp.lift_partner(E1, (0, 1, 1, 1), 2)
        assert tuple(x % 2 for x in v) == (0, 1, 1, 1)
        assert sp.pairing(E1, v) == 1

    def test_mod3_example(self):
        assert sp.lift_partner((1, 0, 0, 0), (2, 1, 0, 0), 3) == (2, 1, 0, 0)

    def test_postconditions_random(self):
        import random
        rng = random.Random(7)
        for k in (2, 3, 5, 7):
            for _ in range(50):
                u, y = _random_partner_input(rng, k)
                v = sp.lift_partner(u, y, k)
                assert sp.is_primitive(v)
                assert tuple(x % k for x in v) == y
                assert sp.pairing(u, v) == 1


def _random_partner_input(rng, k):
    while True:
        u = tuple(rng.randrange(-5, 6) for _ in range(4))
        if not sp.is_primitive(u):
            continue
        y0 = tuple(rng.randrange(k) for _ in range(4))
        if not sp.is_primitive(y0, k):
            continue
        p = sp.pairing(tuple(x % k for x in u), y0, k)
        from math import gcd
        if gcd(p, k) != 1:
            continue
        pinv = sp.mod_inverse(p, k)
        y = tuple((x * pinv) % k for x in y0)
        if sp.pairing(tuple(a % k for a in u), y, k) == 1:
            return u, y


class TestLiftBasis:
    def test_standard_basis(self):
        basis = (E1, E2, E3, E4)
        assert sp.lift_basis(basis, 3) == basis

    def test_random_symplectic_images(self):
        import random
        rng = random.Random(3)
        for k in (2, 3, 5):
            for _ in range(20):
                m = sp.reduce_mat(random_symplectic(rng), k)
                basis = tuple(tuple(r[j] for r in m) for j in range(4))
                lifted = sp.lift_basis(basis, k)
                _check_basis_lift(lifted, basis, k)

    def test_rejects_degenerate_input(self):
        with pytest.raises(ValueError):
            sp.lift_basis((E1, E1, E3, E4), 2)


def _check_basis_lift(lifted, basis, k):
    b = tuple(tuple(lifted[j][i] for j in range(4)) for i in range(4))
    assert sp.is_symplectic(b)
    for v, y in zip(lifted, basis):
        assert tuple(x % k for x in v) == tuple(y)


class TestEnumerate:
    def test_group_orders(self):
        assert sp.sp4_order(2) == 720
        assert sp.sp4_order(3) == 51840
        assert sp.sp4_order(5) == 9360000

    def test_mod2_enumeration(self):
        assert len(sp.enumerate_sp(2)) == 720

    def test_mod3_enumeration(self):
        assert len(sp.enumerate_sp(3)) == 51840

    def test_bound_exceeded(self):
        with pytest.raises(sp.EnumerationBound):
            sp.enumerate_sp(7)

    def test_pack_roundtrip(self):
        import random
        rng = random.Random(1)
        for k in (2, 3, 5):
            m = sp.reduce_mat(random_symplectic(rng), k)
            assert sp.unpack_mat(sp.pack_mat(m, k), k) == m
