import math

import numpy as np
import pytest

from sigmaconics.fields import FieldTower, build_field


def brute_least_irreducible(p, d):
    """Oracle: trial division by every monic factor of lower degree."""
    def poly_mul(a, b):
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
        return out

    def divides(f, g):
        g = list(g)
        while len(g) >= len(f) and any(g):
            if g[-1] == 0:
                g.pop()
                continue
            c = g[-1] * pow(f[-1], p - 2, p) % p
            for k in range(len(f)):
                g[len(g) - len(f) + k] = (g[len(g) - len(f) + k] - c * f[k]) % p
            while g and g[-1] == 0:
                g.pop()
        return not any(g)

    def monic_polys(deg):
        for k in range(p ** deg):
            yield [(k // p ** i) % p for i in range(deg)] + [1]

    for k in range(p ** d):
        f = [(k // p ** i) % p for i in range(d)] + [1]
        if all(not divides(g, f)
               for deg in range(1, d // 2 + 1) for g in monic_polys(deg)):
            return tuple(f)
    raise AssertionError


def test_modulus_f4_unique_quadratic():
    assert build_field(2, 1, 2, 1).modulus == (1, 1, 1)


def test_modulus_matches_enumeration_oracle():
    assert build_field(3, 1, 3, 1).modulus == brute_least_irreducible(3, 3)
    assert build_field(2, 1, 3, 1).modulus == brute_least_irreducible(2, 3)
    assert build_field(2, 1, 5, 1).modulus == brute_least_irreducible(2, 5)


def test_build_field_validation():
    with pytest.raises(ValueError):
        build_field(4, 1, 2, 1)          # not prime
    with pytest.raises(ValueError):
        build_field(2, 1, 4, 2)          # gcd(m, n) = 2
    with pytest.raises(ValueError):
        build_field(2, 1, 25, 1)         # beyond the order cap
    build_field(2, 1, 3, 2)              # gcd(2, 3) = 1 accepted


def test_f4_arithmetic_by_hand():
    t = build_field(2, 1, 2, 1)
    alpha = 2
    assert t.mul(alpha, alpha) == 3      # alpha^2 = alpha + 1
    assert t.inv(alpha) == 3             # alpha * (alpha + 1) = 1
    assert t.mul(alpha, 1) == alpha
    assert t.add(alpha, alpha) == 0
    with pytest.raises(ZeroDivisionError):
        t.inv(0)


def test_field_axioms_exhaustive_f8():
    t = build_field(2, 1, 3, 1)
    for x in t.elements():
        assert t.mul(x, 1) == x and t.add(x, 0) == x
        if x:
            assert t.mul(x, t.inv(x)) == 1
        for y in t.elements():
            assert t.mul(x, y) == t.mul(y, x)
            assert t.add(x, y) == t.add(y, x)
    # associativity and distributivity on a slice
    for x in t.elements():
        for y in t.elements():
            for z in (0, 1, 5):
                assert t.mul(x, t.mul(y, z)) == t.mul(t.mul(x, y), z)
                assert t.mul(x, t.add(y, z)) == t.add(t.mul(x, y), t.mul(x, z))


def test_pow_matches_repeated_multiplication():
    t = build_field(3, 1, 2, 1)
    for x in t.units():
        acc = 1
        for k in range(1, 10):
            acc = t.mul(acc, x)
            assert t.pow(x, k) == acc
    assert t.pow(0, 5) == 0 and t.pow(0, 0) == 1


def test_sigma_basics():
    t = build_field(2, 1, 2, 1)
    assert t.sigma(0) == 0 and t.sigma(1) == 1
    assert t.sigma(2) == 3               # alpha -> alpha^2 = alpha + 1


@pytest.mark.parametrize("params", [(2, 1, 3, 1), (3, 1, 3, 1), (2, 1, 3, 2)])
def test_sigma_is_automorphism_of_order_n(params):
    t = build_field(*params)
    for x in t.elements():
        assert t.sigma(x, t.n) == x
        for y in t.elements():
            assert t.sigma(t.mul(x, y)) == t.mul(t.sigma(x), t.sigma(y))
            assert t.sigma(t.add(x, y)) == t.add(t.sigma(x), t.sigma(y))
    for k in range(1, t.n):
        assert any(t.sigma(x, k) != x for x in t.elements())


def test_norm_values_and_fibers():
    t = build_field(2, 1, 2, 1)
    assert t.norm(0) == 0
    assert t.norm(2) == 1                # alpha^3 = 1
    for params in [(2, 1, 3, 1), (3, 1, 3, 1), (3, 1, 2, 1)]:
        t = build_field(*params)
        fiber = (t.order - 1) // (t.q - 1)
        counts = {}
        for x in t.units():
            nx = t.norm(x)
            assert t.in_subfield(nx) and nx != 0
            counts[nx] = counts.get(nx, 0) + 1
        assert set(counts) == {a for a in t.subfield if a}
        assert all(v == fiber for v in counts.values())
        for x in t.elements():
            for y in (1, 2, t.order - 1):
                assert t.norm(t.mul(x, y)) == t.mul(t.norm(x), t.norm(y))


def test_norm_class():
    t4 = build_field(2, 1, 2, 1)
    assert set(t4.norm_class(1)) == {1, 2, 3}
    t27 = build_field(3, 1, 3, 1)
    assert len(t27.norm_class(1)) == 13
    union = set()
    for a in (1, 2):
        union |= set(t27.norm_class(a))
    assert union == set(t27.units())
    with pytest.raises(ValueError):
        t27.norm_class(0)
    with pytest.raises(ValueError):
        t27.norm_class(3)                # alpha is not in F_3


def test_is_square():
    t9 = build_field(3, 1, 2, 1)
    assert t9.is_square(0) and t9.is_square(1)
    squares = {t9.mul(x, x) for x in t9.units()}
    assert len(squares) == 4
    assert all(t9.is_square(x) == (x in squares) for x in t9.units())
    t8 = build_field(2, 1, 3, 1)
    assert all(t8.is_square(x) for x in t8.elements())


def test_is_sigma_norm_value_matches_exhaustion():
    for params in [(2, 1, 2, 1), (2, 1, 3, 1), (3, 1, 2, 1), (3, 1, 3, 1)]:
        t = build_field(*params)
        e = t.q ** t.m + 1
        image = {t.pow(x, e) for x in t.elements()}
        for d in t.elements():
            assert t.is_sigma_norm_value(d) == (d in image)


def test_subfield_recognition():
    for params in [(2, 1, 3, 1), (3, 1, 2, 1), (2, 2, 2, 1), (2, 2, 3, 1)]:
        t = build_field(*params)
        assert len(t.subfield) == t.q
        sub = set(t.subfield)
        for x in sub:
            for y in sub:
                assert t.add(x, y) in sub and t.mul(x, y) in sub


def test_coeffs_roundtrip():
    t = build_field(3, 1, 3, 1)
    for x in t.elements():
        c = t.coeffs(x)
        assert len(c) == 3 and t.encode(c) == x


def test_vector_ops_match_scalar():
    for params in [(2, 1, 3, 2), (3, 1, 2, 1)]:
        t = build_field(*params)
        xs = np.arange(t.order, dtype=np.uint32)
        ys = np.roll(xs, 7)
        vadd = t.vadd(xs, ys)
        vmul = t.vmul(xs, ys)
        vsig = t.vsigma(xs)
        for i in range(t.order):
            assert int(vadd[i]) == t.add(int(xs[i]), int(ys[i]))
            assert int(vmul[i]) == t.mul(int(xs[i]), int(ys[i]))
            assert int(vsig[i]) == t.sigma(int(xs[i]))
        units = xs[1:]
        assert all(int(v) == t.inv(int(x)) for x, v in zip(units, t.vinv(units)))


def test_pow_table():
    t = build_field(3, 1, 2, 1)
    tbl = t.pow_table(5)
    assert all(int(tbl[x]) == t.pow(x, 5) for x in t.elements())


def test_large_field_within_cap():
    t = build_field(2, 1, 5, 2)
    assert t.order == 32
    x = 19
    assert t.mul(x, t.inv(x)) == 1
    assert t.sigma(x, 5) == x
