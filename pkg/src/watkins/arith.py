"""Integer arithmetic: valuations, factoring, fundamental discriminants.

Factoring is trial division to TRIAL_LIMIT, then Brent's rho under an
explicit round budget.  Primality is Miller-Rabin with the deterministic
base set below the proven bound, and a seeded probabilistic fallback
above it; results carry a ``proven`` flag so downstream certificates can
record the assumption instead of hiding it.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator

from .errors import BudgetExceeded, FactoringBudgetExceeded, ZeroInput

TRIAL_LIMIT = 10**6

# Deterministic Miller-Rabin witness set, valid for n < _MR_PROVEN_BOUND.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_MR_PROVEN_BOUND = 3_317_044_064_679_887_385_961_981


@lru_cache(maxsize=1)
def small_primes() -> tuple[int, ...]:
    """Primes below TRIAL_LIMIT, sieved once and cached."""
    sieve = bytearray([1]) * TRIAL_LIMIT
    sieve[0] = sieve[1] = 0
    for p in range(2, math.isqrt(TRIAL_LIMIT) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray(len(sieve[p * p :: p]))
    return tuple(i for i in range(TRIAL_LIMIT) if sieve[i])


def v2(numerator: int, denominator: int = 1) -> int:
    """2-adic valuation of numerator/denominator.

    Raises ZeroInput when either argument is zero: v2(0) is +infinity
    and nothing downstream wants that silently.
    """
    if numerator == 0 or denominator == 0:
        raise ZeroInput("v2 of zero is undefined here")
    n = abs(numerator)
    d = abs(denominator)
    return ((n & -n).bit_length() - 1) - ((d & -d).bit_length() - 1)


def vp(n: int, p: int) -> int:
    """p-adic valuation of a nonzero integer."""
    if n == 0:
        raise ZeroInput("vp of zero is undefined here")
    n = abs(n)
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    return e


def _mr_witness(n: int, a: int, d: int, s: int) -> bool:
    # True iff a witnesses n composite.
    x = pow(a, d, n)
    if x == 1 or x == n - 1:
        return False
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return False
    return True


def _is_prime(n: int) -> tuple[bool, bool]:
    """(is_prime, proven).

    proven=False only for probable primes beyond the deterministic
    Miller-Rabin bound; those passed 24 extra seeded rounds.
    """
    if n < 2:
        return False, True
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p, True
    d = n - 1
    s = (d & -d).bit_length() - 1
    d >>= s
    for a in _MR_BASES:
        if _mr_witness(n, a, d, s):
            return False, True
    if n < _MR_PROVEN_BOUND:
        return True, True
    rng = random.Random(n & 0xFFFFFFFFFFFF)
    for _ in range(24):
        a = rng.randrange(2, n - 2)
        if _mr_witness(n, a, d, s):
            return False, True
    return True, False


def _iroot(n: int, k: int) -> int:
    """Floor of the k-th root of n >= 0, exact integer Newton."""
    if n < 0:
        raise ValueError("negative radicand")
    if n < 2:
        return n
    x = 1 << (n.bit_length() // k + 1)
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            return x
        x = y


def _perfect_power(n: int) -> tuple[int, int] | None:
    # Returns (base, k) with base**k == n, k >= 2, or None.
    for k in range(2, n.bit_length() + 1):
        r = _iroot(n, k)
        if r**k == n:
            return r, k
        if r < 2:
            return None
    return None


def _brent_rho(n: int, rounds: int) -> int:
    """One factor of composite n via Brent's cycle variant.

    Deterministic: the polynomial constant walks 1, 2, 3, ... so reruns
    agree.  Raises FactoringBudgetExceeded after ``rounds`` restarts.
    """
    if n % 2 == 0:
        return 2
    for c in range(1, rounds + 1):
        y, r, q = 2, 1, 1
        g = 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(128, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += 128
            r <<= 1
            if r > 1 << 20:
                break  # this c is cycling uselessly, try the next
        if g == n:
            # backtrack one step at a time
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if 1 < g < n:
            return g
    raise FactoringBudgetExceeded(f"rho gave up on {n} after {rounds} rounds")


@dataclass(frozen=True)
class Factorization:
    """Signed factorization: value == sign * prod(p**e).

    factors is sorted by prime, exponents >= 1.  proven=False marks a
    factorization resting on a probable (unproven) prime.
    """

    value: int
    sign: int
    factors: tuple[tuple[int, int], ...]
    proven: bool = True

    def __post_init__(self):
        if self.sign not in (-1, 1):
            raise ValueError("sign must be +-1")
        prod = self.sign
        prev = 1
        for p, e in self.factors:
            if p <= prev:
                raise ValueError("factors must be sorted, distinct primes")
            if e < 1:
                raise ValueError("exponents must be >= 1")
            prev = p
            prod *= p**e
        if prod != self.value:
            raise ValueError(f"factors do not reconstruct {self.value}")

    @property
    def omega(self) -> int:
        return len(self.factors)

    def v(self, p: int) -> int:
        for q, e in self.factors:
            if q == p:
                return e
        return 0

    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)

    def divisors(self) -> list[int]:
        """All positive divisors, ascending."""
        out = [1]
        for p, e in self.factors:
            out = [d * p**i for d in out for i in range(e + 1)]
        return sorted(out)

    def verify_primality(self) -> bool:
        """Recheck every factor; True iff all pass deterministic MR."""
        return all(_is_prime(p) == (True, True) for p, _ in self.factors)


def factorize(n: int, *, rho_rounds: int = 64) -> Factorization:
    """Factor a nonzero integer.

    Trial division by primes below TRIAL_LIMIT, then perfect-power
    peeling and Brent rho on what is left.  rho_rounds bounds the rho
    restarts per composite; FactoringBudgetExceeded propagates when the
    budget runs out.
    """
    if n == 0:
        raise ZeroInput("cannot factor 0")
    sign = -1 if n < 0 else 1
    m = abs(n)
    found: dict[int, int] = {}
    proven = True
    for p in small_primes():
        if p * p > m:
            break
        while m % p == 0:
            m //= p
            found[p] = found.get(p, 0) + 1
    if m > 1:
        if m < TRIAL_LIMIT * TRIAL_LIMIT:
            # below the trial wall squared the cofactor must be prime
            found[m] = found.get(m, 0) + 1
        else:
            proven = _factor_large(m, found, rho_rounds)
    factors = tuple(sorted(found.items()))
    return Factorization(value=n, sign=sign, factors=factors, proven=proven)


def _factor_large(m: int, found: dict, rho_rounds: int) -> bool:
    """Split m (> TRIAL_LIMIT**2, no small factors) into found. Returns proven flag."""
    proven = True
    stack = [m]
    while stack:
        x = stack.pop()
        ok, was_proven = _is_prime(x)
        if ok:
            proven = proven and was_proven
            found[x] = found.get(x, 0) + 1
            continue
        pp = _perfect_power(x)
        if pp is not None:
            base, k = pp
            stack.extend([base] * k)
            continue
        d = _brent_rho(x, rho_rounds)
        stack.append(d)
        stack.append(x // d)
    return proven


def omega(f: Factorization) -> int:
    """Number of distinct primes."""
    return f.omega


def _squarefree(n: int) -> bool:
    # n > 0; cheap because callers pass small or pre-reduced values
    if n % 4 == 0:
        return False
    for p in small_primes():
        if p * p > n:
            return True
        if n % (p * p) == 0:
            return False
    # survived trial: any remaining square factor has prime > TRIAL_LIMIT,
    # so n would need to exceed TRIAL_LIMIT**2
    if n < TRIAL_LIMIT * TRIAL_LIMIT:
        return True
    f = factorize(n)
    return all(e == 1 for _, e in f.factors)


def is_fundamental_discriminant(d: int) -> bool:
    """True for d = 1 and for discriminants of quadratic fields.

    Either d ≡ 1 (mod 4) and squarefree, or d = 4m with m ≡ 2, 3
    (mod 4) and m squarefree.
    """
    if d == 0:
        return False
    if d == 1:
        return True
    if d % 4 == 1:
        return _squarefree(abs(d))
    if d % 4 == 0:
        m = d // 4
        if m % 4 in (2, 3):
            return _squarefree(abs(m))
    return False


@dataclass(frozen=True)
class FundamentalDiscriminant:
    d: int
    factorization: Factorization

    def __post_init__(self):
        if not is_fundamental_discriminant(self.d):
            raise ValueError(f"{self.d} is not a fundamental discriminant")
        if self.factorization.value != self.d:
            raise ValueError("factorization does not match d")

    @property
    def omega(self) -> int:
        return self.factorization.omega


def enumerate_fundamental_discriminants(
    bound: int, *, min_omega: int = 0, sign: str = "both"
) -> Iterator[FundamentalDiscriminant]:
    """Fundamental discriminants with 1 < |d| <= bound.

    Ordered by |d| ascending, positive before negative at equal |d|.
    d = 1 is never yielded.  sign is "both", "positive" or "negative".
    min_omega filters on the number of distinct prime factors.
    """
    import numpy as np

    if sign not in ("both", "positive", "negative"):
        raise ValueError(f"bad sign {sign!r}")
    if bound < 3:
        return
    n = bound + 1
    omega_arr = np.zeros(n, dtype=np.uint8)
    sqfree = np.ones(n, dtype=bool)
    for p in range(2, n):
        if omega_arr[p] == 0:  # p is prime: untouched by smaller primes
            omega_arr[p::p] += 1
            if p * p < n:
                sqfree[p * p :: p * p] = False

    def _fact(k: int) -> Factorization:
        return factorize(k)

    for a in range(3, bound + 1):
        yielded_omega = int(omega_arr[a])
        if a % 4 == 1 and sqfree[a]:
            pos_ok, neg_ok = True, False
        elif a % 4 == 0:
            m = a // 4
            pos_ok = m % 4 == 3 and sqfree[m]
            neg_ok = m % 4 == 1 and sqfree[m]
            # 4m with m ≡ 2 (mod 4): m even, handled via m' = m//2 odd;
            # both signs possible, decided by -a ≡ 0 and a ≡ 0 cases below
            if m % 4 == 2 and sqfree[m]:
                pos_ok = neg_ok = True
        else:
            pos_ok = neg_ok = False
        if a % 4 == 3 and sqfree[a]:
            neg_ok = True
        if pos_ok and sign != "negative" and yielded_omega >= min_omega:
            yield FundamentalDiscriminant(a, _fact(a))
        if neg_ok and sign != "positive" and yielded_omega >= min_omega:
            yield FundamentalDiscriminant(-a, _fact(-a))


def count_omega_at_most(x: int, a: int, *, limit: int = 10**7) -> int:
    """#{1 <= n <= x : omega(n) <= a}, by sieve.  n = 1 has omega 0."""
    import numpy as np

    if x < 1:
        return 0
    if x > limit:
        raise BudgetExceeded(f"omega-count sieve capped at {limit}")
    omega_arr = np.zeros(x + 1, dtype=np.uint8)
    for p in range(2, x + 1):
        if omega_arr[p] == 0:
            omega_arr[p::p] += 1
    return int(np.count_nonzero(omega_arr[1:] <= a))


def prime_discriminant_parts(d: int) -> tuple[tuple[int, Factorization], ...]:
    """Split a fundamental discriminant into prime discriminants.

    Every fundamental d factors uniquely as a product of prime
    discriminants: p* = (-1)^((p-1)/2) p for odd p, and one of
    -4, 8, -8 at 2.  Returns the parts sorted by |part|.
    """
    if not is_fundamental_discriminant(d) or d == 1:
        raise ValueError(f"{d} is not a non-trivial fundamental discriminant")
    f = factorize(d)
    parts: list[int] = []
    two_exp = f.v(2)
    for p, _ in f.factors:
        if p == 2:
            continue
        pstar = p if p % 4 == 1 else -p
        parts.append(pstar)
    if two_exp:
        odd_prod = 1
        for q in parts:
            odd_prod *= q
        two_part = d // odd_prod
        if two_part not in (-4, 8, -8):
            raise AssertionError(f"bad 2-part {two_part} of {d}")
        parts.append(two_part)
    else:
        prod = 1
        for q in parts:
            prod *= q
        if prod != d:
            raise AssertionError(f"prime parts {parts} do not multiply to {d}")
    parts.sort(key=abs)
    return tuple((q, factorize(q)) for q in parts)
