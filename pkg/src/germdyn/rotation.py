"""Continued-fraction arithmetic for rotation numbers.

The central object is :class:`RotationArithmetic`: the partial quotients
``a_1, a_2, ...`` of an angle ``alpha`` in (0, 1) together with the exact
integer convergents ``p_n/q_n``.  On top of it sit the arithmetic sums
that govern linearizability: the Brjuno sum ``sum log(q_{n+1})/q_n``, the
log-log variant, and the Liouville-type growth indicator
``||q_k alpha||^{-1/q_k}``.

All sums are finite partial sums, so the verdicts returned here are
explicitly *evidence labels* (converging-evidence, diverging-evidence,
inconclusive, ...), never theorems: no finite machine can certify an
infinite arithmetic condition.

Integer growth is checked: convergents and quotient generators abort with
:class:`~germdyn.errors.ConvergentOverflowError` once a denominator would
exceed a configurable bit cap, reporting the last safe index instead of
producing silently useless numbers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import ConvergentOverflowError, SeriesDomainError

__all__ = [
    "RotationArithmetic",
    "SumReport",
    "GrowthReport",
    "factorial_quotients",
    "golden_mean",
]

DEFAULT_BIT_CAP = 4096

CONVERGING = "converging-evidence"
DIVERGING = "diverging-evidence"
INCONCLUSIVE = "inconclusive"
BOUNDED = "bounded-evidence"
UNBOUNDED = "unbounded-evidence"


@dataclass(frozen=True)
class SumReport:
    """Partial sums of an arithmetic series over convergent indices."""

    terms: tuple
    partial_sums: tuple
    verdict: str
    skipped: int = 0


@dataclass(frozen=True)
class GrowthReport:
    """Growth indicator sequence with lower/upper bracketing values."""

    lower: tuple
    upper: tuple
    verdict: str
    bound: float


@dataclass(frozen=True)
class RotationArithmetic:
    """Partial quotients and exact convergents of an angle in (0, 1).

    ``convergents[n] == (p_n, q_n)`` with the convention ``(p_0, q_0) =
    (0, 1)``, so ``q`` starts ``1, a_1, a_2*a_1 + 1, ...`` and satisfies
    the standard recurrence exactly in unbounded integers (growth
    checked against ``bit_cap``).
    """

    alpha: float
    partial_quotients: tuple
    convergents: tuple
    source: str
    rational: bool = False
    last_trusted_index: int | None = None
    bit_cap: int = DEFAULT_BIT_CAP

    # -- construction ---------------------------------------------------

    @classmethod
    def from_quotients(cls, quotients, bit_cap=DEFAULT_BIT_CAP):
        quotients = [int(a) for a in quotients]
        if not quotients:
            raise SeriesDomainError("need at least one partial quotient")
        if any(a < 1 for a in quotients):
            raise SeriesDomainError("partial quotients must be positive")
        convs = _convergents_from_quotients(quotients, bit_cap)
        p, q = convs[-1]
        return cls(
            alpha=_fraction_to_float(p, q),
            partial_quotients=tuple(quotients),
            convergents=tuple(convs),
            source="from_quotients",
            bit_cap=bit_cap,
        )

    @classmethod
    def from_real(cls, alpha, depth=40, bit_cap=DEFAULT_BIT_CAP, precision_bits=52):
        """Expand a floating angle with exact integer arithmetic.

        The float is promoted to the exact rational it represents and the
        Gauss map runs in integer arithmetic on that rational.  Convergents
        are only trusted while ``q_n q_{n+1} <= 2**precision_bits``; the
        last trustworthy index is recorded.  A terminating expansion (the
        rational hit zero remainder) is flagged, not an error.
        """
        if not 0.0 < alpha < 1.0:
            raise SeriesDomainError("alpha must lie strictly in (0, 1)")
        frac = Fraction(alpha)
        quotients = []
        num, den = frac.numerator, frac.denominator
        # Gauss map: alpha -> 1/alpha - floor(1/alpha) on num/den.
        rational = False
        for _ in range(depth):
            if num == 0:
                rational = True
                break
            a, rem = divmod(den, num)
            quotients.append(a)
            den, num = num, rem
        if not quotients:
            raise SeriesDomainError("expansion produced no quotients")
        convs = _convergents_from_quotients(quotients, bit_cap)
        trusted = len(convs) - 1
        for n in range(len(convs) - 1):
            if convs[n][1] * convs[n + 1][1] > 1 << precision_bits:
                trusted = n
                break
        return cls(
            alpha=alpha,
            partial_quotients=tuple(quotients),
            convergents=tuple(convs),
            source="from_real",
            rational=rational,
            last_trusted_index=trusted,
            bit_cap=bit_cap,
        )

    # -- basic queries -----------------------------------------------------

    @property
    def depth(self):
        """Number of computed convergents beyond (0, 1)."""
        return len(self.convergents) - 1

    def q(self, n):
        return self.convergents[n][1]

    def p(self, n):
        return self.convergents[n][0]

    def alpha_fraction(self):
        """The deepest computed convergent as an exact Fraction."""
        p, q = self.convergents[-1]
        return Fraction(p, q)

    # -- arithmetic sums --------------------------------------------------

    def brjuno_sum(self, terms):
        """Partial sums of log(q_{n+1})/q_n for n = 1..terms.

        The verdict is a tail heuristic: increments that keep shrinking
        fast are converging-evidence, increments bounded away from zero
        are diverging-evidence, anything else is inconclusive.
        """
        self._require_depth(terms + 1)
        incs = [
            math.log(self.q(n + 1)) / self.q(n) for n in range(1, terms + 1)
        ]
        return SumReport(
            terms=tuple(incs),
            partial_sums=tuple(_running_sums(incs)),
            verdict=_sum_verdict(incs),
        )

    def perezmarco_loglog_sum(self, terms):
        """Like brjuno_sum with log log q_{n+1}; tiny q_{n+1} are skipped."""
        self._require_depth(terms + 1)
        incs = []
        skipped = 0
        for n in range(1, terms + 1):
            qn1 = self.q(n + 1)
            if math.log(qn1) <= 1.0:
                skipped += 1
                continue
            incs.append(math.log(math.log(qn1)) / self.q(n))
        return SumReport(
            terms=tuple(incs),
            partial_sums=tuple(_running_sums(incs)),
            verdict=_sum_verdict(incs) if incs else INCONCLUSIVE,
            skipped=skipped,
        )

    def liouville_limsup_indicator(self, terms, bound=5.0):
        """The sequence ||q_k alpha||^{-1/q_k} bracketed via convergents.

        Uses 1/(q_{k+1} + q_k) <= ||q_k alpha|| <= 1/q_{k+1}, so the
        indicator at index k lies in [q_{k+1}^{1/q_k},
        (q_{k+1} + q_k)^{1/q_k}].  Verdict is unbounded-evidence once the
        lower bracket exceeds ``bound`` somewhere in range.
        """
        terms = min(terms, self.depth - 1)
        if terms < 1:
            return GrowthReport((), (), INCONCLUSIVE, bound)
        lower, upper = [], []
        for k in range(1, terms + 1):
            qk, qk1 = self.q(k), self.q(k + 1)
            lower.append(_int_root(qk1, qk))
            upper.append(_int_root(qk1 + qk, qk))
        if len(lower) < 2:
            verdict = INCONCLUSIVE
        elif max(lower) >= bound:
            verdict = UNBOUNDED
        else:
            verdict = BOUNDED
        return GrowthReport(tuple(lower), tuple(upper), verdict, bound)

    # -- internals ---------------------------------------------------------

    def _require_depth(self, n):
        if self.depth < n:
            raise SeriesDomainError(
                f"need {n} convergents, have {self.depth}"
                + (
                    " (terminating rational expansion)"
                    if self.rational
                    else ""
                )
            )


def _convergents_from_quotients(quotients, bit_cap):
    convs = [(0, 1)]
    p_prev, q_prev = 1, 0
    p, q = 0, 1
    for n, a in enumerate(quotients, start=1):
        p, p_prev = a * p + p_prev, p
        q, q_prev = a * q + q_prev, q
        if q.bit_length() > bit_cap:
            raise ConvergentOverflowError(last_safe_index=n - 1, bit_cap=bit_cap)
        convs.append((p, q))
    return convs


def _fraction_to_float(p, q):
    try:
        return p / q
    except OverflowError:
        # Huge convergents: fall back to a scaled quotient.
        shift = q.bit_length() - 60
        return (p >> shift) / (q >> shift)


def _running_sums(values):
    total = 0.0
    out = []
    for v in values:
        total += v
        out.append(total)
    return out


def _sum_verdict(incs, small=1e-2, floor=5e-2):
    if len(incs) < 2:
        return INCONCLUSIVE
    tail = incs[-max(2, len(incs) // 3) :]
    if max(tail) < small and tail[-1] <= incs[0]:
        return CONVERGING
    if min(tail) > floor and tail[-1] >= 0.5 * tail[0]:
        return DIVERGING
    return INCONCLUSIVE


def _int_root(n, k):
    """n**(1/k) for a (possibly huge) positive integer n."""
    return math.exp(_int_log(n) / k)


def _int_log(n):
    """Natural log of a positive integer of any size."""
    if n.bit_length() <= 512:
        return math.log(n)
    shift = n.bit_length() - 60
    return math.log(n >> shift) + shift * math.log(2.0)


def factorial_quotients(a1, levels, bit_cap=DEFAULT_BIT_CAP):
    """Quotients following the rule a_{k+1} = q_k!.

    Growth is checked before each factorial is formed (via lgamma, so the
    abort happens without attempting an impossible product).  Returns the
    computed quotients together with the overflow report, if any.
    """
    if a1 < 1:
        raise SeriesDomainError("a1 must be positive")
    quotients = [int(a1)]
    overflow = None
    for k in range(1, levels):
        convs = _convergents_from_quotients(quotients, bit_cap)
        qk = convs[-1][1]
        bits_next = math.lgamma(qk + 1) / math.log(2.0)
        if bits_next > bit_cap:
            overflow = ConvergentOverflowError(last_safe_index=k, bit_cap=bit_cap)
            break
        quotients.append(math.factorial(qk))
    return quotients, overflow


def golden_mean(depth=40):
    """The rotation number (sqrt(5) - 1)/2 with all quotients 1."""
    return RotationArithmetic.from_quotients([1] * depth)
