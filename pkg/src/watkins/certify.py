"""Rank certification for quadratic twists via 2-adic modular-degree bounds.

The chain of inequalities, per twist E^D of a curve E with rational
2-torsion:

    rank E^D(Q)  <=  2*omega(N_D) - 1                (exact upper)
                 <=  2*(omega(D) + omega(N)) - 1     (coarse upper)

    v2(deg phi of E^D)  >=  v2(m/c^2) - 4 + sum_{p in P(D,N)} c_p   (exact lower)
                        >=  3*omega(D) + v2(m/c^2) - 7 - 3*omega(N) (torsion lower)

where c_p = v2((p-1)(p+1-a_p)(p+1+a_p)), m is the modular degree of
E, c its Manin constant, and P(D, N) the odd primes dividing D but
not N.  Whenever an upper bound lands at or below a lower bound the
twist satisfies the rank <= v2(moddeg) inequality and the certificate
says CERTIFIED.  The threshold t = 6 + 5*omega(N) - v2(m/c^2) marks
the point where the coarse comparison succeeds for every D with
omega(D) >= t.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction

from .arith import (
    Factorization,
    factorize,
    is_fundamental_discriminant,
    v2,
)
from .ecq import (
    CurveRecord,
    WeierstrassModel,
    a_p,
    conductor,
    minimal_model,
    quadratic_twist,
)
from .errors import (
    HasseViolation,
    MissingInvariant,
    NotTwistPair,
    NoTwoTorsion,
    WatkinsError,
)

CERTIFIED = "CERTIFIED"
INCONCLUSIVE = "INCONCLUSIVE"
INAPPLICABLE = "INAPPLICABLE"


def twist_prime_set(d_fact: Factorization, n_fact: Factorization) -> tuple[int, ...]:
    """P(D, N): odd primes dividing D and coprime to N, ascending."""
    n_primes = set(n_fact.primes())
    return tuple(p for p in d_fact.primes() if p != 2 and p not in n_primes)


def local_v2_contribution(p: int, ap: int) -> int:
    """c_p = v2((p-1)(p+1-a_p)(p+1+a_p)) for an odd good prime."""
    if ap * ap > 4 * p:
        raise HasseViolation(f"|a_{p}| = {abs(ap)} breaks the Hasse bound")
    return v2(p - 1) + v2(p + 1 - ap) + v2(p + 1 + ap)


def petersson_v2_lower(pairs) -> int:
    """Sum of local contributions minus one, over (p, a_p) pairs."""
    return sum(local_v2_contribution(p, ap) for p, ap in pairs) - 1


def moddeg_v2_lower_exact(v2_moddeg: int, pairs) -> int:
    """v2(m/c^2) - 4 + sum of the local contributions."""
    return v2_moddeg - 4 + sum(local_v2_contribution(p, ap) for p, ap in pairs)


def moddeg_v2_lower_torsion(omega_d: int, v2_moddeg: int, omega_n: int, torsion_rank: int) -> int:
    """Counting-only lower bound; needs a rational 2-torsion point."""
    if torsion_rank < 1:
        raise NoTwoTorsion("the torsion-route bound requires rational 2-torsion")
    return 3 * omega_d + v2_moddeg - 7 - 3 * omega_n


def selmer_rank_upper(n_fact: Factorization) -> int:
    """2-descent bound for a curve with rational 2-torsion: 2*omega(N) - 1."""
    return 2 * n_fact.omega - 1


def twist_rank_upper(twist_cond: Factorization, d_fact: Factorization, n_fact: Factorization) -> tuple[int, int]:
    """(exact, coarse) rank upper bounds for the twist."""
    exact = selmer_rank_upper(twist_cond)
    coarse = 2 * (d_fact.omega + n_fact.omega) - 1
    return exact, coarse


def faltings_delta_v2(e1: WeierstrassModel, e2: WeierstrassModel) -> tuple[Fraction, bool]:
    """v2 of |disc1/disc2|^(1/6) for minimal models of a twist pair.

    Returns the valuation and whether it obeys the |.| <= 3 bound.
    """
    if e1.j != e2.j:
        raise NotTwistPair("curves have different j-invariants")
    val = Fraction(v2(e1.disc) - v2(e2.disc), 6)
    return val, abs(val) <= 3


def _v2_moddeg(curve: CurveRecord, assume_manin: bool) -> tuple[int, list[str]]:
    if curve.moddeg is None:
        raise MissingInvariant("modular degree unknown for this curve")
    assumptions = []
    manin = curve.manin
    if manin is None:
        if not assume_manin:
            raise MissingInvariant("Manin constant unknown; pass assume_manin to take c = 1")
        manin = 1
        assumptions.append("manin_assumed_1")
    return v2(curve.moddeg) - 2 * v2(manin), assumptions


@dataclass(frozen=True)
class ThresholdReport:
    label: str | None
    threshold: int
    kappa: int
    omega_n: int
    v2_moddeg: int
    assumptions: tuple[str, ...] = ()


def kappa(t: int) -> int:
    return max(t - 2, 0)


def watkins_threshold(curve: CurveRecord, *, assume_manin: bool = False) -> ThresholdReport:
    """t = 6 + 5*omega(N) - v2(m/c^2), and the density exponent max(t-2, 0)."""
    v2m, assumptions = _v2_moddeg(curve, assume_manin)
    t = 6 + 5 * curve.conductor.omega - v2m
    return ThresholdReport(
        label=curve.label,
        threshold=t,
        kappa=kappa(t),
        omega_n=curve.conductor.omega,
        v2_moddeg=v2m,
        assumptions=tuple(assumptions),
    )


def minimal_twist_candidates(n_fact: Factorization) -> tuple[int, ...]:
    """Non-trivial fundamental discriminants supported on 2N's primes.

    Products of odd prime discriminants p* for p | N times a 2-part
    from {1, -4, 8, -8}; conductor-reducing twists live here.
    """
    odd = [p for p in n_fact.primes() if p != 2]
    parts = [p if p % 4 == 1 else -p for p in odd]
    out = []
    for mask in range(1 << len(parts)):
        base = 1
        for i, q in enumerate(parts):
            if mask >> i & 1:
                base *= q
        for two in (1, -4, 8, -8):
            d = base * two
            if d != 1:
                out.append(d)
    return tuple(sorted(out, key=lambda d: (abs(d), d < 0)))


def is_minimal_twist(curve: CurveRecord) -> tuple[bool, int | None]:
    """Whether no candidate twist has a strictly smaller conductor.

    Returns (flag, witness): witness is the discriminant achieving the
    smallest twisted conductor when one beats the curve itself.
    """
    n = curve.conductor.value
    best = None
    witness = None
    for d in minimal_twist_candidates(curve.conductor):
        cond = conductor(quadratic_twist(curve.minimal_model, d)).value
        key = (cond, abs(d), 0 if d > 0 else 1)
        if cond < n and (best is None or key < best):
            best = key
            witness = d
    return witness is None, witness


class CertifyContext:
    """Per-curve caches shared across many twists of one base curve."""

    def __init__(self, curve: CurveRecord, *, assume_manin: bool = False):
        self.curve = curve
        self.assume_manin = assume_manin
        self._ap: dict[int, int] = {}
        self._minimal: tuple[bool, int | None] | None = None
        self._v2m: tuple[int, list[str]] | None = None

    def ap(self, p: int) -> int:
        if p not in self._ap:
            self._ap[p] = a_p(self.curve.minimal_model, p)
        return self._ap[p]

    def minimal_twist(self) -> tuple[bool, int | None]:
        if self._minimal is None:
            self._minimal = is_minimal_twist(self.curve)
        return self._minimal

    def v2_moddeg(self) -> tuple[int, list[str]]:
        if self._v2m is None:
            self._v2m = _v2_moddeg(self.curve, self.assume_manin)
        return self._v2m


@dataclass(frozen=True)
class TwistCertificate:
    curve: str
    d: int
    verdict: str
    reason: str | None = None
    twist_conductor: Factorization | None = None
    prime_set: tuple[tuple[int, int, int], ...] = ()
    lower_bound_exact: int | None = None
    lower_bound_torsion: int | None = None
    rank_upper_exact: int | None = None
    rank_upper_coarse: int | None = None
    threshold: int | None = None
    assumptions: tuple[str, ...] = ()

    @property
    def verdict_full(self) -> str:
        if self.verdict == INAPPLICABLE:
            return f"{INAPPLICABLE}({self.reason})"
        return self.verdict


_CAMEL = re.compile(r"(?<!^)(?=[A-Z])")


def _reason_from(err: WatkinsError) -> str:
    return _CAMEL.sub("_", type(err).__name__).lower()


def _curve_name(curve: CurveRecord) -> str:
    if curve.label:
        return curve.label
    return "[" + ",".join(str(a) for a in curve.minimal_model.ainvs()) + "]"


def verify_twist(
    curve: CurveRecord,
    d: int,
    *,
    assume_manin: bool = False,
    context: CertifyContext | None = None,
) -> TwistCertificate:
    """Certificate for the twist of curve by the fundamental discriminant d.

    Applicability gates, in order: the curve must have rational
    2-torsion, must be the minimal twist in its family, and its
    conductor must divide the twisted conductor.  Budget or data
    errors downgrade to INAPPLICABLE with a snake_case reason rather
    than escaping.
    """
    if d == 1 or not is_fundamental_discriminant(d):
        raise ValueError(f"{d} is not a non-trivial fundamental discriminant")
    ctx = context or CertifyContext(curve, assume_manin=assume_manin)
    name = _curve_name(curve)
    try:
        if curve.two_torsion_rank < 1:
            raise NoTwoTorsion("curve has no rational 2-torsion")
        minimal, _witness = ctx.minimal_twist()
        if not minimal:
            raise WatkinsError("not_minimal_twist")
        twist = quadratic_twist(curve.minimal_model, d)
        twist_min = minimal_model(twist).model
        twist_cond = conductor(twist_min)
        if twist_cond.value % curve.conductor.value:
            raise WatkinsError("conductor_divisibility")

        _delta, within = faltings_delta_v2(curve.minimal_model, twist_min)
        assert within, "twist pair breaks the height-comparison bound"

        d_fact = factorize(d)
        v2m, assumptions = ctx.v2_moddeg()
        assumptions = list(assumptions)
        if not (curve.min_disc.proven and twist_cond.proven and d_fact.proven):
            assumptions.append("probabilistic_prime")

        pairs = [(p, ctx.ap(p)) for p in twist_prime_set(d_fact, curve.conductor)]
        lower_exact = moddeg_v2_lower_exact(v2m, pairs)
        lower_torsion = moddeg_v2_lower_torsion(
            d_fact.omega, v2m, curve.conductor.omega, curve.two_torsion_rank
        )
        upper_exact, upper_coarse = twist_rank_upper(twist_cond, d_fact, curve.conductor)
        t = 6 + 5 * curve.conductor.omega - v2m

        certified = upper_exact <= lower_exact or d_fact.omega >= t
        return TwistCertificate(
            curve=name,
            d=d,
            verdict=CERTIFIED if certified else INCONCLUSIVE,
            twist_conductor=twist_cond,
            prime_set=tuple((p, ap, local_v2_contribution(p, ap)) for p, ap in pairs),
            lower_bound_exact=lower_exact,
            lower_bound_torsion=lower_torsion,
            rank_upper_exact=upper_exact,
            rank_upper_coarse=upper_coarse,
            threshold=t,
            assumptions=tuple(assumptions),
        )
    except WatkinsError as err:
        reason = str(err) if type(err) is WatkinsError else _reason_from(err)
        return TwistCertificate(curve=name, d=d, verdict=INAPPLICABLE, reason=reason)


# ---------------------------------------------------------------------------
# serialization

CERT_FIELDS = (
    "curve",
    "d",
    "twist_conductor",
    "prime_set",
    "lower_bound_exact",
    "lower_bound_torsion",
    "rank_upper_exact",
    "rank_upper_coarse",
    "threshold",
    "verdict",
    "assumptions",
)


def _enc_int(v):
    return None if v is None else str(v)


def _enc_fact(f: Factorization | None):
    if f is None:
        return None
    return {
        "value": str(f.value),
        "factors": [[str(p), str(e)] for p, e in f.factors],
    }


def certificate_to_obj(cert: TwistCertificate) -> dict:
    """JSON-ready dict; every integer rendered as a decimal string."""
    return {
        "curve": cert.curve,
        "d": str(cert.d),
        "twist_conductor": _enc_fact(cert.twist_conductor),
        "prime_set": [[str(p), str(ap), str(c)] for p, ap, c in cert.prime_set],
        "lower_bound_exact": _enc_int(cert.lower_bound_exact),
        "lower_bound_torsion": _enc_int(cert.lower_bound_torsion),
        "rank_upper_exact": _enc_int(cert.rank_upper_exact),
        "rank_upper_coarse": _enc_int(cert.rank_upper_coarse),
        "threshold": _enc_int(cert.threshold),
        "verdict": cert.verdict_full,
        "assumptions": list(cert.assumptions),
    }


def certificate_to_json(cert: TwistCertificate) -> str:
    return json.dumps(certificate_to_obj(cert), separators=(",", ":"))


def obj_to_flat(obj: dict) -> list[str]:
    """CSV row in CERT_FIELDS order; nested values are JSON cells."""
    row = []
    for key in CERT_FIELDS:
        v = obj[key]
        if v is None:
            row.append("")
        elif isinstance(v, str):
            row.append(v)
        else:
            row.append(json.dumps(v, separators=(",", ":")))
    return row


def certificate_to_flat(cert: TwistCertificate) -> list[str]:
    return obj_to_flat(certificate_to_obj(cert))
