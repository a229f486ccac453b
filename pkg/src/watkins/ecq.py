"""Elliptic curves over Q as integral Weierstrass models.

Covers the local theory this package needs: standard invariants,
global minimal models (Laska-Kraus-Connell), Kodaira types and
conductor exponents (Tate's algorithm, full version at p = 2, 3 and
the valuation table at p >= 5), quadratic twisting, rational
2-torsion, and trace-of-Frobenius computation with explicit budgets.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import gcd, isqrt, lcm

from .arith import TRIAL_LIMIT, Factorization, _iroot, _is_prime, factorize, small_primes, vp
from .errors import (
    BadReduction,
    BudgetExceeded,
    NotMinimal,
    SingularModel,
    ZeroInput,
)

_INF = 10**9  # stand-in valuation for 0


@dataclass(frozen=True)
class WeierstrassModel:
    """y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 with integer a_i."""

    a1: int
    a2: int
    a3: int
    a4: int
    a6: int

    def __post_init__(self):
        for name in ("a1", "a2", "a3", "a4", "a6"):
            v = getattr(self, name)
            iv = int(v)
            if iv != v:
                raise ValueError(f"{name} must be an integer, got {v!r}")
            object.__setattr__(self, name, iv)
        if self.disc == 0:
            raise SingularModel(f"discriminant vanishes for {self.ainvs()}")

    def ainvs(self) -> tuple[int, int, int, int, int]:
        return (self.a1, self.a2, self.a3, self.a4, self.a6)

    @cached_property
    def b2(self) -> int:
        return self.a1 * self.a1 + 4 * self.a2

    @cached_property
    def b4(self) -> int:
        return 2 * self.a4 + self.a1 * self.a3

    @cached_property
    def b6(self) -> int:
        return self.a3 * self.a3 + 4 * self.a6

    @cached_property
    def b8(self) -> int:
        return (
            self.a1 * self.a1 * self.a6
            + 4 * self.a2 * self.a6
            - self.a1 * self.a3 * self.a4
            + self.a2 * self.a3 * self.a3
            - self.a4 * self.a4
        )

    @cached_property
    def c4(self) -> int:
        return self.b2 * self.b2 - 24 * self.b4

    @cached_property
    def c6(self) -> int:
        return -self.b2**3 + 36 * self.b2 * self.b4 - 216 * self.b6

    @cached_property
    def disc(self) -> int:
        b2, b4, b6, b8 = self.b2, self.b4, self.b6, self.b8
        return -b2 * b2 * b8 - 8 * b4**3 - 27 * b6 * b6 + 9 * b2 * b4 * b6

    @property
    def j(self) -> Fraction:
        return Fraction(self.c4**3, self.disc)


def _v(x: int, p: int) -> int:
    return _INF if x == 0 else vp(x, p)


def _shift(m: WeierstrassModel, r: int, s: int, t: int) -> WeierstrassModel:
    # u = 1 coordinate change, integer arithmetic only
    a1, a2, a3, a4, a6 = m.ainvs()
    return WeierstrassModel(
        a1 + 2 * s,
        a2 - s * a1 + 3 * r - s * s,
        a3 + r * a1 + 2 * t,
        a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r - 2 * s * t,
        a6 + r * a4 + r * r * a2 + r**3 - t * a3 - t * t - r * t * a1,
    )


def transform_model(m: WeierstrassModel, u, r=0, s=0, t=0) -> WeierstrassModel:
    """Apply x = u^2 x' + r, y = u^3 y' + s u^2 x' + t.

    u must be positive; r, s, t may be rational.  Raises ValueError
    unless the resulting model is integral.
    """
    u, r, s, t = Fraction(u), Fraction(r), Fraction(s), Fraction(t)
    if u <= 0:
        raise ValueError("u must be positive")
    a1 = (m.a1 + 2 * s) / u
    a2 = (m.a2 - s * m.a1 + 3 * r - s * s) / u**2
    a3 = (m.a3 + r * m.a1 + 2 * t) / u**3
    a4 = (m.a4 - s * m.a3 + 2 * r * m.a2 - (t + r * s) * m.a1 + 3 * r * r - 2 * s * t) / u**4
    a6 = (m.a6 + r * m.a4 + r * r * m.a2 + r**3 - t * m.a3 - t * t - r * t * m.a1) / u**6
    coeffs = (a1, a2, a3, a4, a6)
    if any(c.denominator != 1 for c in coeffs):
        raise ValueError("transform does not yield an integral model")
    out = WeierstrassModel(*(int(c) for c in coeffs))
    assert Fraction(m.disc) == out.disc * u**12
    return out


def _kraus2(c4: int, c6: int) -> bool:
    # existence of an integral model over Z_2 for given invariants
    if c6 % 4 == 3:
        return True
    return c4 % 16 == 0 and c6 % 32 in (0, 8)


def _kraus_ok(c4: int, c6: int) -> bool:
    """Whether (c4, c6) are the invariants of some integral model."""
    disc1728 = c4**3 - c6 * c6
    if disc1728 == 0 or disc1728 % 1728:
        return False
    if c6 % 27 in (9, 18):  # v3(c6) == 2
        return False
    return _kraus2(c4, c6)


def _scaling_exponent(c4: int, c6: int, disc1728: int, p: int) -> int:
    """Largest e with (c4/p^4e, c6/p^6e) still valid invariants."""
    caps = []
    if c4:
        caps.append(vp(c4, p) // 4)
    if c6:
        caps.append(vp(c6, p) // 6)
    emax = min(caps)
    if emax == 0:
        return 0
    if p == 3:
        vd = vp(disc1728, 3)
        for e in range(emax, 0, -1):
            if vd < 12 * e + 3:
                continue
            if c6 != 0 and vp(c6, 3) - 6 * e == 2:
                continue
            return e
        return 0
    if p == 2:
        vd = vp(disc1728, 2)
        for e in range(emax, 0, -1):
            if vd < 12 * e + 6:
                continue
            if _kraus2(c4 // 16**e, c6 // 64**e):
                return e
        return 0
    return emax


def _unit_prime_candidates(c4: int, c6: int) -> list[int]:
    # primes that could divide the scaling unit
    if c4 == 0:
        bound = _iroot(abs(c6), 6)
    elif c6 == 0:
        bound = _iroot(abs(c4), 4)
    else:
        bound = min(_iroot(abs(c4), 4), _iroot(abs(c6), 6))
    g = gcd(abs(c4), abs(c6))
    if g <= 1 or bound < 2:
        return []
    out = []
    rem = g
    for p in small_primes():
        if p > bound or rem == 1:
            break
        if rem % p == 0:
            out.append(p)
            while rem % p == 0:
                rem //= p
    if rem > 1 and bound >= TRIAL_LIMIT:
        # g kept a factor beyond the trial wall and the root bound
        # still allows it; a budgeted split decides
        f = factorize(rem)
        out.extend(p for p, _ in f.factors if p <= bound)
    return out


def _model_from_c4c6(c4: int, c6: int) -> WeierstrassModel:
    """Reduced integral model with the given invariants.

    Exactly one b2 in a window of 12 consecutive integers yields the
    reduced form (a1, a3 in {0,1}, a2 in {-1,0,1}).
    """
    for b2 in range(-5, 7):
        if (b2 * b2 - c4) % 24:
            continue
        b4 = (b2 * b2 - c4) // 24
        num = -(b2**3) + 36 * b2 * b4 - c6
        if num % 216:
            continue
        b6 = num // 216
        a1 = b2 % 2
        if (b2 - a1) % 4:
            continue
        a2 = (b2 - a1) // 4
        a3 = b6 % 2
        if (b6 - a3) % 4:
            continue
        a6 = (b6 - a3) // 4
        if (b4 - a1 * a3) % 2:
            continue
        a4 = (b4 - a1 * a3) // 2
        cand = WeierstrassModel(a1, a2, a3, a4, a6)
        if cand.c4 == c4 and cand.c6 == c6:
            return cand
    raise AssertionError(f"no integral model for invariants ({c4}, {c6})")


@dataclass(frozen=True)
class MinimalModelResult:
    model: WeierstrassModel
    u: int
    r: int
    s: int
    t: int


def minimal_model(m: WeierstrassModel) -> MinimalModelResult:
    """Global minimal model in reduced form, with the transform back.

    transform_model(m, u, r, s, t) == model holds on the result.
    """
    c4, c6 = m.c4, m.c6
    disc1728 = 1728 * m.disc
    u = 1
    cands = _unit_prime_candidates(c4, c6)
    for p in [q for q in cands if q != 2] + [2] * (2 in cands):
        e = _scaling_exponent(c4, c6, disc1728, p)
        if e:
            c4 //= p ** (4 * e)
            c6 //= p ** (6 * e)
            disc1728 //= p ** (12 * e)
            u *= p**e
    assert _kraus_ok(c4, c6)
    mm = _model_from_c4c6(c4, c6)
    s = Fraction(u * mm.a1 - m.a1, 2)
    r = Fraction(u * u * mm.a2 - m.a2 + s * m.a1 + s * s, 3)
    t = Fraction(u**3 * mm.a3 - m.a3 - r * m.a1, 2)
    assert r.denominator == 1 and s.denominator == 1 and t.denominator == 1
    r, s, t = int(r), int(s), int(t)
    assert transform_model(m, u, r, s, t) == mm
    return MinimalModelResult(mm, u, r, s, t)


# ---------------------------------------------------------------------------
# Tate's algorithm


@dataclass(frozen=True)
class LocalReduction:
    p: int
    kodaira: str
    f: int
    kind: str  # "good" | "multiplicative" | "additive"


def _p_minimal(m: WeierstrassModel, p: int) -> bool:
    return _scaling_exponent(m.c4, m.c6, 1728 * m.disc, p) == 0


def _singular_point(m: WeierstrassModel, p: int) -> tuple[int, int]:
    # the singular point of the reduction is F_p-rational; p is 2 or 3
    a1, a2, a3, a4, a6 = (a % p for a in m.ainvs())
    for x in range(p):
        for y in range(p):
            if (y * y + a1 * x * y + a3 * y - x**3 - a2 * x * x - a4 * x - a6) % p:
                continue
            fx = (a1 * y - 3 * x * x - 2 * a2 * x - a4) % p
            fy = (2 * y + a1 * x + a3) % p
            if fx == 0 and fy == 0:
                return x, y
    raise AssertionError(f"no singular point mod {p}")


def _prep_step7(w: WeierstrassModel, p: int) -> WeierstrassModel:
    # normalize to v(a1), v(a2) >= 1, v(a3), v(a4) >= 2, v(a6) >= 3;
    # a (s, t) shift with these residues exists once types II-IV are ruled out
    p2, p3 = p * p, p**3
    for s in range(p2):
        for t in range(p3):
            c = _shift(w, 0, s, t)
            if (
                c.a1 % p == 0
                and c.a2 % p == 0
                and c.a3 % p2 == 0
                and c.a4 % p2 == 0
                and c.a6 % p3 == 0
            ):
                return c
    raise AssertionError("step-6 normalization failed")


def _root_multiplicities(coeffs: list[int], p: int) -> dict[int, int]:
    """Multiplicity of each F_p root of a monic polynomial."""
    out = {}
    for r in range(p):
        mult = 0
        work = [c % p for c in coeffs]
        while len(work) > 1:
            # synthetic division by (T - r)
            quot = [work[0]]
            for c in work[1:]:
                quot.append((quot[-1] * r + c) % p)
            if quot[-1] != 0:
                break
            mult += 1
            work = quot[:-1]
        if mult:
            out[r] = mult
    return out


def _inv2(p: int) -> int:
    return pow(2, -1, p)


def _tate_In_star(w: WeierstrassModel, p: int, n: int) -> LocalReduction:
    # double root of the step-7 cubic sits at T = 0; walk the I_m* chain
    mx = my = p * p
    idx = 1
    while True:
        assert w.a3 % my == 0 and w.a6 % (mx * my) == 0
        b = w.a3 // my
        c = -(w.a6 // (mx * my))
        if (b * b - 4 * c) % p:
            return LocalReduction(p, f"I{idx}*", n - 4 - idx, "additive")
        y1 = c % 2 if p == 2 else (-b * _inv2(p)) % p
        w = _shift(w, 0, 0, my * y1)
        my *= p
        idx += 1
        assert w.a2 % p == 0 and w.a4 % (p * mx) == 0 and w.a6 % (mx * my) == 0
        a2t = w.a2 // p
        a4t = w.a4 // (p * mx)
        a6t = w.a6 // (mx * my)
        if (a4t * a4t - 4 * a2t * a6t) % p:
            return LocalReduction(p, f"I{idx}*", n - 4 - idx, "additive")
        x1 = a6t % 2 if p == 2 else (-a4t * pow(2 * a2t, -1, p)) % p
        w = _shift(w, mx * x1, 0, 0)
        mx *= p
        idx += 1
        if idx > n:
            raise AssertionError("runaway I_m* chain")


def _tate_small(m: WeierstrassModel, p: int, n: int) -> LocalReduction:
    x0, y0 = _singular_point(m, p)
    w = _shift(m, x0, 0, y0)
    if w.b2 % p:
        return LocalReduction(p, f"I{n}", 1, "multiplicative")
    if _v(w.a6, p) < 2:
        return LocalReduction(p, "II", n, "additive")
    if _v(w.b8, p) < 3:
        return LocalReduction(p, "III", n - 1, "additive")
    if _v(w.b6, p) < 3:
        return LocalReduction(p, "IV", n - 2, "additive")
    w = _prep_step7(w, p)
    cubic = [1, (w.a2 // p) % p, (w.a4 // p**2) % p, (w.a6 // p**3) % p]
    roots = _root_multiplicities(cubic, p)
    maxmult = max(roots.values(), default=1)
    if maxmult == 1:
        return LocalReduction(p, "I0*", n - 4, "additive")
    if maxmult == 2:
        (r1,) = [r for r, k in roots.items() if k == 2]
        return _tate_In_star(_shift(w, p * r1, 0, 0), p, n)
    (r1,) = [r for r, k in roots.items() if k == 3]
    w = _shift(w, p * r1, 0, 0)
    assert w.a3 % p**2 == 0 and w.a6 % p**4 == 0
    b = w.a3 // p**2
    c = -(w.a6 // p**4)
    if (b * b - 4 * c) % p:
        return LocalReduction(p, "IV*", n - 6, "additive")
    y1 = c % 2 if p == 2 else (-b * _inv2(p)) % p
    w = _shift(w, 0, 0, p * p * y1)
    if _v(w.a4, p) == 3:
        return LocalReduction(p, "III*", n - 7, "additive")
    if _v(w.a6, p) == 5:
        return LocalReduction(p, "II*", n - 8, "additive")
    raise NotMinimal(f"model is not minimal at {p}")


def _tate_table(m: WeierstrassModel, p: int, n: int) -> LocalReduction:
    vc4 = _v(m.c4, p)
    if vc4 == 0:
        return LocalReduction(p, f"I{n}", 1, "multiplicative")
    if n == 2:
        ty = "II"
    elif n == 3:
        ty = "III"
    elif n == 4:
        ty = "IV"
    elif n == 6:
        ty = "I0*"
    elif vc4 == 2 and n >= 7:
        ty = f"I{n - 6}*"
    elif n == 8:
        ty = "IV*"
    elif n == 9:
        ty = "III*"
    elif n == 10:
        ty = "II*"
    else:
        raise NotMinimal(f"model is not minimal at {p}")
    return LocalReduction(p, ty, 2, "additive")


def tate_local(m: WeierstrassModel, p: int) -> LocalReduction:
    """Kodaira type and conductor exponent at p of a p-minimal model."""
    n = vp(m.disc, p)
    if n == 0:
        return LocalReduction(p, "I0", 0, "good")
    if not _p_minimal(m, p):
        raise NotMinimal(f"model is not minimal at {p}")
    red = _tate_table(m, p, n) if p >= 5 else _tate_small(m, p, n)
    cap = 8 if p == 2 else 5 if p == 3 else 2
    assert red.f <= cap, f"conductor exponent {red.f} exceeds the cap at {p}"
    return red


def local_reductions(m: WeierstrassModel) -> list[LocalReduction]:
    """Reduction data at every bad prime of the minimal model."""
    mm = minimal_model(m).model
    return [tate_local(mm, p) for p in factorize(mm.disc).primes()]


def conductor(m: WeierstrassModel) -> Factorization:
    """Conductor of the curve, computed from scratch.

    The proven flag is inherited from the discriminant factorization.
    """
    mm = minimal_model(m).model
    df = factorize(mm.disc)
    fs = []
    value = 1
    for p in df.primes():
        red = tate_local(mm, p)
        if red.f:
            fs.append((p, red.f))
            value *= p**red.f
    return Factorization(value=value, sign=1, factors=tuple(fs), proven=df.proven)


# ---------------------------------------------------------------------------
# twists, torsion, traces


def quadratic_twist(m: WeierstrassModel, d: int) -> WeierstrassModel:
    """The twist by d, as a (generally non-minimal) integral model."""
    if d == 0:
        raise ZeroInput("twist by 0")
    if m.a1 == 0 and m.a2 == 0 and m.a3 == 0:
        a, b = m.a4, m.a6
    else:
        a, b = -27 * m.c4, -54 * m.c6
    return WeierstrassModel(0, 0, 0, a * d * d, b * d**3)


def two_torsion_rank(m: WeierstrassModel) -> int:
    """F_2-rank of E(Q)[2]: 0, 1, or 2.

    Rational 2-torsion x-coordinates are the rational roots of the
    division polynomial; after X = 4x it is monic, so candidate roots
    are divisors of the constant term — no floating point involved.
    """
    b2, b4, b6 = m.b2, m.b4, m.b6
    c0 = 16 * b6
    if c0 == 0:
        dsc = b2 * b2 - 32 * b4
        assert dsc != 0  # separable cubic
        if dsc < 0:
            return 1
        s = isqrt(dsc)
        return 2 if s * s == dsc else 1
    roots = 0
    for dv in factorize(c0).divisors():
        for x in (dv, -dv):
            if x**3 + b2 * x * x + 8 * b4 * x + c0 == 0:
                roots += 1
    assert roots in (0, 1, 3)
    return {0: 0, 1: 1, 3: 2}[roots]


def _ap_naive(m: WeierstrassModel, p: int) -> int:
    qr = bytearray(p)
    for y in range(p // 2 + 1):
        qr[y * y % p] = 1
    b2, bb4, b6 = m.b2 % p, (2 * m.b4) % p, m.b6 % p
    total = 0
    for x in range(p):
        h = (((4 * x + b2) * x + bb4) * x + b6) % p
        if h:
            total += 1 if qr[h] else -1
    return -total


def _ec_add(P, Q, a: int, p: int):
    if P is None:
        return Q
    if Q is None:
        return P
    x1, y1 = P
    x2, y2 = Q
    if x1 == x2:
        if (y1 + y2) % p == 0:
            return None
        lam = (3 * x1 * x1 + a) * pow(2 * y1, -1, p) % p
    else:
        lam = (y2 - y1) * pow(x2 - x1, -1, p) % p
    x3 = (lam * lam - x1 - x2) % p
    return (x3, (lam * (x1 - x3) - y1) % p)


def _ec_mul(k: int, P, a: int, p: int):
    R = None
    while k:
        if k & 1:
            R = _ec_add(R, P, a, p)
        P = _ec_add(P, P, a, p)
        k >>= 1
    return R


def _sqrt_mod(n: int, p: int) -> int:
    """Tonelli-Shanks; n must be a QR mod odd prime p."""
    n %= p
    if n == 0:
        return 0
    if p % 4 == 3:
        return pow(n, (p + 1) // 4, p)
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    M, c, t, R = s, pow(z, q, p), pow(n, q, p), pow(n, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (M - i - 1), p)
        M, c, t, R = i, b * b % p, t * b * b % p, R * b % p
    return R


def _random_point(a: int, b: int, p: int, rng: random.Random):
    while True:
        x = rng.randrange(p)
        rhs = (x * x * x + a * x + b) % p
        if rhs == 0:
            return (x, 0)
        if pow(rhs, (p - 1) // 2, p) == 1:
            return (x, _sqrt_mod(rhs, p))


def _bsgs_annihilator(P, lo: int, hi: int, a: int, p: int) -> int:
    """Some n in [lo, hi] with n*P = O."""
    width = hi - lo + 1
    mstep = isqrt(width) + 1
    baby = {}
    Q = None
    for j in range(mstep):
        baby.setdefault(Q, j)
        Q = _ec_add(Q, P, a, p)
    S = _ec_mul(mstep, P, a, p)
    R = _ec_mul(lo, P, a, p)
    i = 0
    while lo + i * mstep <= hi + mstep:
        target = None if R is None else (R[0], (-R[1]) % p)
        if target in baby:
            n = lo + i * mstep + baby[target]
            if lo <= n <= hi:
                return n
        R = _ec_add(R, S, a, p)
        i += 1
    raise AssertionError("no annihilator in the Hasse window")


def _exact_order(P, n: int, a: int, p: int) -> int:
    e = n
    for q, _ in factorize(n).factors:
        while e % q == 0 and _ec_mul(e // q, P, a, p) is None:
            e //= q
    return e


def _order_from_points(a: int, b: int, p: int, rng: random.Random, tries: int):
    lo = p + 1 - isqrt(4 * p)
    hi = p + 1 + isqrt(4 * p)
    L = 1
    for _ in range(tries):
        P = _random_point(a, b, p, rng)
        n = _bsgs_annihilator(P, lo, hi, a, p)
        L = lcm(L, _exact_order(P, n, a, p))
        k0 = ((lo + L - 1) // L) * L
        assert k0 <= hi, "no multiple of the exponent in the Hasse window"
        if k0 + L > hi:
            return k0
    return None  # group exponent too small to pin the order down


def _curve_order(a: int, b: int, p: int) -> int:
    rng = random.Random(f"ec:{p}:{a}:{b}")
    N = _order_from_points(a, b, p, rng, tries=12)
    if N is not None:
        return N
    # the quadratic twist has complementary order 2p + 2 - N
    c = 2
    while pow(c, (p - 1) // 2, p) != p - 1:
        c += 1
    at = a * c * c % p
    bt = b * pow(c, 3, p) % p
    Nt = _order_from_points(at, bt, p, rng, tries=12)
    if Nt is not None:
        return 2 * p + 2 - Nt
    raise BudgetExceeded(f"group order mod {p} still ambiguous after twelve points per curve")


def a_p(m: WeierstrassModel, p: int, *, naive_limit: int = 10**4, bsgs_limit: int = 10**8) -> int:
    """Trace of Frobenius at a prime of good reduction.

    Direct point counts up to naive_limit, baby-step/giant-step group
    order above that, BudgetExceeded past bsgs_limit.  The model is
    expected to be minimal; good reduction is checked against its
    discriminant.
    """
    ok, _ = _is_prime(p)
    if not ok:
        raise ValueError(f"{p} is not prime")
    if m.disc % p == 0:
        raise BadReduction(f"bad reduction at {p}")
    if p == 2:
        count = 0
        for x in (0, 1):
            for y in (0, 1):
                if (y * y + m.a1 * x * y + m.a3 * y - x**3 - m.a2 * x * x - m.a4 * x - m.a6) % 2 == 0:
                    count += 1
        return 2 - count
    if p <= naive_limit:
        return _ap_naive(m, p)
    if p <= bsgs_limit:
        a = -27 * m.c4 % p
        b = -54 * m.c6 % p
        ap = p + 1 - _curve_order(a, b, p)
        assert ap * ap <= 4 * p
        return ap
    raise BudgetExceeded(f"a_p at {p} exceeds the point-counting budget")


# ---------------------------------------------------------------------------
# curve records


@dataclass(frozen=True)
class CurveRecord:
    """A curve plus the externally sourced invariants the bounds need.

    moddeg is the modular degree, manin the Manin constant; both stay
    None when unknown.  provenance records where each field came from.
    """

    minimal_model: WeierstrassModel
    min_disc: Factorization
    conductor: Factorization
    two_torsion_rank: int
    moddeg: int | None = None
    manin: int | None = None
    rank: int | None = None
    label: str | None = None
    provenance: tuple[tuple[str, str], ...] = ()
    fetched_at: str | None = None


def build_curve_record(
    ainvs,
    *,
    moddeg: int | None = None,
    manin: int | None = None,
    rank: int | None = None,
    label: str | None = None,
    source: str = "user",
    fetched_at: str | None = None,
) -> CurveRecord:
    """Minimalize and verify a curve, recomputing everything derivable."""
    if moddeg is not None and moddeg < 1:
        raise ValueError("the modular degree is a positive integer")
    if manin is not None and manin < 1:
        raise ValueError("the Manin constant is a positive integer")
    if rank is not None and rank < 0:
        raise ValueError("rank cannot be negative")
    model = WeierstrassModel(*ainvs)
    mm = minimal_model(model).model
    return CurveRecord(
        minimal_model=mm,
        min_disc=factorize(mm.disc),
        conductor=conductor(mm),
        two_torsion_rank=two_torsion_rank(mm),
        moddeg=moddeg,
        manin=manin,
        rank=rank,
        label=label,
        provenance=(("source", source),),
        fetched_at=fetched_at,
    )
