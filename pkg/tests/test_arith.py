"""Valuations, factoring, and fundamental discriminants."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from watkins.arith import (
    Factorization,
    FundamentalDiscriminant,
    _is_prime,
    count_omega_at_most,
    enumerate_fundamental_discriminants,
    factorize,
    is_fundamental_discriminant,
    omega,
    prime_discriminant_parts,
    small_primes,
    v2,
    vp,
)
from watkins.errors import BudgetExceeded, FactoringBudgetExceeded, ZeroInput

M89 = 2**89 - 1  # prime, but above the deterministic Miller-Rabin bound


# --- reference implementations, deliberately naive -------------------------


def _trial_is_prime(n: int) -> bool:
    if n < 2:
        return False
    k = 2
    while k * k <= n:
        if n % k == 0:
            return False
        k += 1
    return True


def _squarefree_ref(n: int) -> bool:
    k = 2
    while k * k <= n:
        if n % (k * k) == 0:
            return False
        k += 1
    return True


def _fundamental_ref(d: int) -> bool:
    # the defining congruences, nothing shared with the library
    if d == 0:
        return False
    if d == 1:
        return True
    if d % 4 == 1:
        return _squarefree_ref(abs(d))
    if d % 4 == 0:
        m = d // 4
        return m % 4 in (2, 3) and _squarefree_ref(abs(m))
    return False


def _omega_ref(n: int) -> int:
    count = 0
    k = 2
    while k * k <= n:
        if n % k == 0:
            count += 1
            while n % k == 0:
                n //= k
        k += 1
    return count + (1 if n > 1 else 0)


# --- valuations -------------------------------------------------------------


def test_v2_basics():
    assert v2(1) == 0
    assert v2(-8) == 3
    assert v2(12) == 2
    assert v2(3, 4) == -2
    assert v2(40, 5) == 3


def test_v2_rejects_zero():
    with pytest.raises(ZeroInput):
        v2(0)
    with pytest.raises(ZeroInput):
        v2(3, 0)


@given(st.integers(min_value=-(10**9), max_value=10**9).filter(lambda m: m % 2), st.integers(min_value=0, max_value=60))
def test_v2_strips_exactly_the_two_part(m, k):
    assert v2(m * 2**k) == k


@given(
    st.integers(min_value=1, max_value=10**9),
    st.integers(min_value=1, max_value=10**9),
)
def test_v2_of_a_quotient(a, b):
    assert v2(a, b) == v2(a) - v2(b)


def test_vp():
    assert vp(250, 5) == 3
    assert vp(7, 5) == 0
    assert vp(-27, 3) == 3


def test_small_primes_prefix():
    ps = small_primes()
    assert ps[:10] == (2, 3, 5, 7, 11, 13, 17, 19, 23, 29)
    assert ps[-1] < 10**6


# --- primality and factoring ------------------------------------------------


def test_is_prime_against_trial_division():
    for n in range(2, 2000):
        assert _is_prime(n)[0] == _trial_is_prime(n), n


def test_is_prime_on_carmichael_numbers():
    for n in (561, 1105, 1729, 41041, 825265):
        assert _is_prime(n) == (False, True)


def test_is_prime_beyond_deterministic_bound():
    ok, proven = _is_prime(M89)
    assert ok and not proven


def test_factorize_small():
    f = factorize(360)
    assert f.factors == ((2, 3), (3, 2), (5, 1))
    assert f.sign == 1 and f.omega == 3 and f.proven
    assert f.v(2) == 3 and f.v(7) == 0
    assert f.primes() == (2, 3, 5)
    assert f.verify_primality()


def test_factorize_sign_and_zero():
    assert factorize(-45).sign == -1
    assert factorize(-45).factors == ((3, 2), (5, 1))
    with pytest.raises(ZeroInput):
        factorize(0)


def test_factorize_divisors():
    assert factorize(12).divisors() == [1, 2, 3, 4, 6, 12]
    assert factorize(-12).divisors() == [1, 2, 3, 4, 6, 12]
    assert factorize(1).divisors() == [1]


def test_factorize_semiprime_beyond_trial_wall():
    n = 1000003 * 1000033
    f = factorize(n)
    assert f.factors == ((1000003, 1), (1000033, 1)) and f.proven
    with pytest.raises(FactoringBudgetExceeded):
        factorize(n, rho_rounds=0)


def test_factorize_unproven_prime_is_flagged():
    f = factorize(M89)
    assert f.factors == ((M89, 1),)
    assert not f.proven
    assert not f.verify_primality()  # deterministic recheck cannot certify it


def test_factorize_perfect_power_of_large_prime():
    f = factorize(1000003**3)
    assert f.factors == ((1000003, 3),) and f.proven


@given(st.integers(min_value=2, max_value=10**10))
@settings(max_examples=300)
def test_factorize_roundtrip(n):
    f = factorize(n)
    prod = f.sign
    for p, e in f.factors:
        assert _is_prime(p)[0]
        prod *= p**e
    assert prod == n == f.value


def test_factorization_validates_itself():
    with pytest.raises(ValueError):
        Factorization(value=6, sign=1, factors=((3, 1), (2, 1)))  # unsorted
    with pytest.raises(ValueError):
        Factorization(value=6, sign=1, factors=((2, 1),))  # wrong product
    with pytest.raises(ValueError):
        Factorization(value=2, sign=2, factors=((2, 1),))  # bad sign
    with pytest.raises(ValueError):
        Factorization(value=2, sign=1, factors=((2, 0),))  # zero exponent


def test_omega_helper():
    assert omega(factorize(30)) == 3
    assert omega(factorize(-1)) == 0


# --- fundamental discriminants ----------------------------------------------


def test_fundamentality_matches_reference():
    for d in range(-500, 501):
        if d == 0:
            continue
        assert is_fundamental_discriminant(d) == _fundamental_ref(d), d


def test_enumeration_matches_reference_order():
    got = [fd.d for fd in enumerate_fundamental_discriminants(300)]
    want = []
    for a in range(2, 301):
        if _fundamental_ref(a):
            want.append(a)
        if _fundamental_ref(-a):
            want.append(-a)
    assert got == want
    assert got[:6] == [-3, -4, 5, -7, 8, -8]


def test_enumeration_signs_and_omega():
    pos = [fd.d for fd in enumerate_fundamental_discriminants(100, sign="positive")]
    neg = [fd.d for fd in enumerate_fundamental_discriminants(100, sign="negative")]
    assert pos[:5] == [5, 8, 12, 13, 17]
    assert neg[:5] == [-3, -4, -7, -8, -11]
    assert all(d > 0 for d in pos) and all(d < 0 for d in neg)

    rich = list(enumerate_fundamental_discriminants(100, min_omega=2))
    assert rich and all(fd.omega >= 2 for fd in rich)
    assert all(fd.factorization.value == fd.d for fd in rich)


def test_enumeration_edges():
    assert list(enumerate_fundamental_discriminants(2)) == []
    assert 1 not in [fd.d for fd in enumerate_fundamental_discriminants(50)]
    with pytest.raises(ValueError):
        list(enumerate_fundamental_discriminants(10, sign="junk"))


def test_fundamental_discriminant_validates():
    with pytest.raises(ValueError):
        FundamentalDiscriminant(7, factorize(7))  # 7 = 3 mod 4
    with pytest.raises(ValueError):
        FundamentalDiscriminant(5, factorize(-5))  # mismatched factorization


def test_prime_discriminant_parts_frozen():
    assert [q for q, _ in prime_discriminant_parts(5)] == [5]
    assert [q for q, _ in prime_discriminant_parts(-24)] == [-3, 8]
    assert [q for q, _ in prime_discriminant_parts(-420)] == [-3, -4, 5, -7]


def test_prime_discriminant_parts_reject_non_fundamental():
    for d in (1, 20, -5, 45):
        with pytest.raises(ValueError):
            prime_discriminant_parts(d)


@given(st.integers(min_value=2, max_value=5000))
@settings(max_examples=200)
def test_prime_discriminant_parts_reconstruct(a):
    for d in (a, -a):
        if not is_fundamental_discriminant(d) or d == 1:
            continue
        parts = prime_discriminant_parts(d)
        prod = 1
        for q, qf in parts:
            assert is_fundamental_discriminant(q)
            assert qf.value == q and qf.omega == 1
            prod *= q
        assert prod == d


# --- density counting --------------------------------------------------------


def test_count_omega_frozen_value():
    assert count_omega_at_most(100, 1) == 36


def test_count_omega_against_reference():
    for a in range(4):
        want = sum(1 for n in range(1, 201) if _omega_ref(n) <= a)
        assert count_omega_at_most(200, a) == want, a


def test_count_omega_edges():
    assert count_omega_at_most(0, 3) == 0
    assert count_omega_at_most(1, 0) == 1  # omega(1) = 0
    with pytest.raises(BudgetExceeded):
        count_omega_at_most(10**8, 1)
