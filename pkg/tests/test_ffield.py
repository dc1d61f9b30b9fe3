import itertools

import pytest

from apcong.ffield import (
    FieldSpec,
    embed,
    embedding_table,
    factorize,
    is_prime,
    kronecker,
    legendre,
    make_field,
    mult_order,
    quadratic_extension,
    sqrt_in_field,
)

SMALL_FIELDS = [(2, 1), (3, 1), (5, 1), (7, 1), (2, 2), (3, 2), (2, 3), (5, 2)]


def sieve(n):
    flags = [True] * (n + 1)
    flags[0] = flags[1] = False
    for k in range(2, n + 1):
        if flags[k]:
            for m in range(k * k, n + 1, k):
                flags[m] = False
    return {k for k in range(n + 1) if flags[k]}


def test_is_prime_matches_sieve():
    primes = sieve(2000)
    for n in range(2001):
        assert is_prime(n) == (n in primes), n


def test_factorize_recomposes():
    for n in list(range(1, 400)) + [2 ** 10 * 3 ** 5, 338, 2450, 50700]:
        fac = factorize(n)
        prod = 1
        for p, e in fac.items():
            assert is_prime(p)
            prod *= p ** e
        assert prod == n


@pytest.mark.parametrize("p,r", SMALL_FIELDS)
def test_field_axioms_exhaustive(p, r):
    spec = make_field(p, r)
    els = list(spec.elements())
    assert len(els) == p ** r
    zero, one = spec.zero(), spec.one()
    for a in els:
        assert a + zero == a and a * one == a
        assert a - a == zero
        if a != zero:
            inv = a.inverse()
            assert a * inv == one
    # associativity and distributivity on all triples for tiny fields,
    # else on a deterministic slice
    triples = itertools.product(els, repeat=3)
    if p ** r > 8:
        triples = itertools.islice(triples, 600)
    for a, b, c in triples:
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c


@pytest.mark.parametrize("p,r", SMALL_FIELDS)
def test_frobenius_and_unit_group(p, r):
    spec = make_field(p, r)
    q = p ** r
    for a in spec.elements():
        assert a ** q == a  # q-power map is the identity
        if not a.is_zero:
            n = mult_order(a)
            assert (q - 1) % n == 0
            assert a ** n == spec.one()
            # minimality against brute force
            x = a
            for k in range(1, n):
                assert x != spec.one()
                x = x * a


def test_make_field_rejects_bad_input():
    with pytest.raises(ValueError):
        make_field(9, 1)
    with pytest.raises(ValueError):
        make_field(4, 1)
    with pytest.raises(ValueError):
        make_field(2, 21)


@pytest.mark.parametrize("p", [3, 5, 7, 11, 13, 23])
def test_legendre_against_square_counting(p):
    squares = {(x * x) % p for x in range(1, p)}
    for a in range(p):
        want = 0 if a == 0 else (1 if a in squares else -1)
        assert legendre(a, p) == want
        assert legendre(a - p, p) == want  # negative inputs reduce


def test_legendre_requires_odd_prime():
    with pytest.raises(ValueError):
        legendre(3, 2)
    with pytest.raises(ValueError):
        legendre(3, 15)


def test_kronecker_extends_legendre():
    for p in (3, 5, 7, 11, 13, 19, 23):
        for a in range(-30, 30):
            assert kronecker(a, p) == legendre(a, p)


def test_kronecker_multiplicative():
    vals = list(range(-12, 13))
    for a, b in itertools.product(vals, repeat=2):
        for n in (1, 2, 3, 4, 5, 12, 15):
            assert kronecker(a * b, n) == kronecker(a, n) * kronecker(b, n)
    for n, m in itertools.product([1, 2, 3, 4, 5, 12, 15], repeat=2):
        for a in vals:
            assert kronecker(a, n * m) == kronecker(a, n) * kronecker(a, m)


def test_kronecker_mod_two_rule():
    # (a/2) is 0 for even a, else chi_8(a)
    for a in range(-40, 40):
        want = 0 if a % 2 == 0 else (1 if a % 8 in (1, 7) else -1)
        assert kronecker(a, 2) == want


def test_kronecker_periodicity_of_discriminants():
    # (d/.) for d = 1 mod 4 is periodic with period |d| on coprime arguments
    for d in (-3, 5, 13, -23):
        period = abs(d)
        for r in range(1, 3 * period):
            if kronecker(d, r) == 0:
                continue
            assert kronecker(d, r) == kronecker(d, r + period)


@pytest.mark.parametrize("p,r", [(3, 1), (5, 1), (7, 1), (3, 2), (2, 2)])
def test_sqrt_in_field(p, r):
    spec = make_field(p, r)
    squares = {a * a for a in spec.elements()}
    for a in spec.elements():
        root = sqrt_in_field(a)
        if a in squares:
            assert root is not None and root * root == a
        else:
            assert root is None


@pytest.mark.parametrize("p,r", [(2, 1), (3, 1), (5, 1), (7, 1), (3, 2)])
def test_quadratic_extension_embedding(p, r):
    base = make_field(p, r)
    ext = quadratic_extension(base)
    assert ext.p == p and ext.r == 2 * r
    table = embedding_table(base, ext)
    assert len(table) == p ** r
    # the encoding table must realize a field homomorphism
    for a in base.elements():
        for b in base.elements():
            ea = ext.from_int(table[a.as_int()])
            eb = ext.from_int(table[b.as_int()])
            assert table[(a + b).as_int()] == (ea + eb).as_int()
            assert table[(a * b).as_int()] == (ea * eb).as_int()
    assert table[base.one().as_int()] == ext.one().as_int()
    # injectivity
    assert len(set(table)) == len(table)


def test_embed_roundtrip_f3_to_f9():
    base = make_field(3, 1)
    ext = quadratic_extension(base)
    for a in base.elements():
        img = embed(a, ext)
        assert img.spec == ext
        # prime subfield is fixed by Frobenius
        assert img ** 3 == img


def test_field_spec_json_roundtrip():
    spec = make_field(3, 2)
    again = FieldSpec.from_json(spec.to_json())
    assert again == spec
