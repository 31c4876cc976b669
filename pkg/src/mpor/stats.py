"""Statistical decision machinery for audit transcripts.

Under heterogeneous per-prover failure rates the total failure count over
c challenges per prover follows a Poisson-binomial distribution, computed
here exactly by convolving per-prover binomial mass functions.  When the
rates are small the count is well approximated by a Poisson law whose
parameter is the summed expected failures; the quality of that
approximation is what ``poisson_vs_exact_report`` tabulates.

The hypothesis test distinguishes H0 (average success below eta) from H1
(average success at least eta) by comparing the expected failure count
(1-eta)*rho*c against the upper confidence bound lambda_U, the smallest
Poisson parameter whose CDF at the observed failure count drops below the
significance level.  lambda_U is computed two independent ways, by
bisection on the Poisson CDF and through the chi-squared quantile link,
and the regularized incomplete gamma function backing the chi-squared path
is implemented in-module (series and continued fraction) so results stay
bit-reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

REJECT_H0 = "Reject_H0"
FAIL_TO_REJECT_H0 = "FailToReject_H0"

DP_TRIAL_LIMIT = 10**5


@dataclass(frozen=True)
class FailureModel:
    """Per-prover failure probabilities and the audit shape."""

    f: tuple[float, ...]
    c: int
    rho: int

    def __post_init__(self):
        if len(self.f) != self.rho:
            raise ValueError("failure vector length must equal rho")
        for p in self.f:
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"failure probability {p} outside [0, 1]")
        if self.c < 1:
            raise ValueError("challenges per prover must be >= 1")

    def poisson_rate(self) -> float:
        return self.c * sum(self.f)


def _binom_pmf_prefix(t: int, p: float, b: int) -> list[float]:
    """pmf of Binomial(t, p) at 0..min(b, t) via the stable term recurrence."""
    top = min(b, t)
    if p == 0.0:
        return [1.0] + [0.0] * top
    if p == 1.0:
        return [0.0] * (top + 1) if t > top else [0.0] * t + [1.0]
    out = []
    log_start = t * math.log1p(-p)
    if log_start > -700:
        term = math.exp(log_start)
        for i in range(top + 1):
            out.append(term)
            term *= (t - i) / (i + 1) * (p / (1.0 - p))
    else:
        # Start term underflows; compute each term in log space instead.
        lp, lq = math.log(p), math.log1p(-p)
        for i in range(top + 1):
            log_term = (
                math.lgamma(t + 1)
                - math.lgamma(i + 1)
                - math.lgamma(t - i + 1)
                + i * lp
                + (t - i) * lq
            )
            out.append(math.exp(log_term) if log_term > -745 else 0.0)
    return out


def binom_cdf(t: int, p: float, b: int) -> float:
    """P[Binomial(t, p) <= b], exact summation of pmf terms."""
    if not 0 <= b <= t:
        raise ValueError(f"count b={b} outside 0..{t}")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"probability {p} outside [0, 1]")
    return min(1.0, math.fsum(_binom_pmf_prefix(t, p, b)))


def poisson_binomial_cdf(f, t: int, b: int) -> float:
    """P[B <= b] where B sums rho*t independent Bernoulli failures, t trials
    at each rate f_i.

    Exact dynamic programming: the count pmf is the convolution of the
    per-rate binomial pmfs, truncated at b+1 states since only the CDF head
    is needed.  All terms are nonnegative so no cancellation occurs.
    """
    f = tuple(f)
    if b < 0:
        raise ValueError("count b must be >= 0")
    for p in f:
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"failure probability {p} outside [0, 1]")
    if len(f) * t > DP_TRIAL_LIMIT:
        raise ValueError(f"total trials exceed the DP limit {DP_TRIAL_LIMIT}")
    pmf = [1.0]
    for rate in f:
        part = _binom_pmf_prefix(t, rate, b)
        merged = [0.0] * min(b + 1, len(pmf) + len(part) - 1)
        for i, x in enumerate(pmf):
            if x == 0.0:
                continue
            for j, y in enumerate(part):
                if i + j >= len(merged):
                    break
                merged[i + j] += x * y
        pmf = merged
    return min(1.0, math.fsum(pmf))


def poisson_cdf(lam: float, b: int) -> float:
    """P[Poisson(lam) <= b] via stable incremental terms."""
    if lam < 0:
        raise ValueError("lambda must be >= 0")
    if b < 0:
        raise ValueError("count b must be >= 0")
    if lam == 0.0:
        return 1.0
    if lam > 700:
        # e^{-lam} underflows; the incomplete-gamma route stays accurate.
        return chi2_sf(2 * lam, 2 * b + 2)
    term = math.exp(-lam)
    terms = []
    for i in range(b + 1):
        terms.append(term)
        term *= lam / (i + 1)
    return min(1.0, math.fsum(terms))


# Regularized incomplete gamma, series for x < a+1 and continued fraction
# otherwise (modified Lentz), accurate to ~1e-15 relative.

_GAMMA_EPS = 1e-16
_GAMMA_ITMAX = 600


def _gamma_p_series(a: float, x: float) -> float:
    ap = a
    total = term = 1.0 / a
    for _ in range(_GAMMA_ITMAX):
        ap += 1.0
        term *= x / ap
        total += term
        if abs(term) < abs(total) * _GAMMA_EPS:
            break
    return total * math.exp(-x + a * math.log(x) - math.lgamma(a))


def _gamma_q_cf(a: float, x: float) -> float:
    tiny = 1e-300
    b = x + 1.0 - a
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, _GAMMA_ITMAX + 1):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < tiny:
            d = tiny
        c = b + an / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _GAMMA_EPS:
            break
    return h * math.exp(-x + a * math.log(x) - math.lgamma(a))


def regularized_gamma_p(a: float, x: float) -> float:
    """P(a, x), the regularized lower incomplete gamma function."""
    if a <= 0:
        raise ValueError("shape a must be > 0")
    if x < 0:
        raise ValueError("x must be >= 0")
    if x == 0.0:
        return 0.0
    if x < a + 1.0:
        return _gamma_p_series(a, x)
    return 1.0 - _gamma_q_cf(a, x)


def regularized_gamma_q(a: float, x: float) -> float:
    """Q(a, x) = 1 - P(a, x)."""
    if a <= 0:
        raise ValueError("shape a must be > 0")
    if x < 0:
        raise ValueError("x must be >= 0")
    if x == 0.0:
        return 1.0
    if x < a + 1.0:
        return 1.0 - _gamma_p_series(a, x)
    return _gamma_q_cf(a, x)


def chi2_sf(x: float, df: int) -> float:
    """P[chi-squared with df degrees of freedom > x]."""
    if df < 1:
        raise ValueError("degrees of freedom must be >= 1")
    return regularized_gamma_q(df / 2.0, x / 2.0)


def chi2_quantile(probability: float, df: int) -> float:
    """Smallest x with P[chi2_df <= x] >= probability, by bisection."""
    if not 0.0 < probability < 1.0:
        raise ValueError("probability must lie strictly between 0 and 1")
    lo, hi = 0.0, max(1.0, float(df))
    while chi2_sf(hi, df) > 1.0 - probability:
        hi *= 2.0
        if hi > 1e12:
            raise ArithmeticError("chi-squared quantile bracket failed")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if chi2_sf(mid, df) > 1.0 - probability:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def lambda_upper(b: int, alpha: float = 0.05, method: str = "bisection") -> float:
    """Upper confidence bound: smallest lam with poisson_cdf(lam, b) < alpha.

    Both routes are implemented; "bisection" works directly on the Poisson
    CDF, "chi2" takes half the (1-alpha) quantile of chi-squared with
    2b + 2 degrees of freedom.  They agree to high relative accuracy and
    are cross-checked in the test suite.
    """
    if b < 0:
        raise ValueError("failure count b must be >= 0")
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must lie strictly between 0 and 1")
    if method == "chi2":
        return chi2_quantile(1.0 - alpha, 2 * b + 2) / 2.0
    if method != "bisection":
        raise ValueError(f"unknown method {method!r}")
    lo, hi = 0.0, max(1.0, 2.0 * b)
    while poisson_cdf(hi, b) >= alpha:
        hi *= 2.0
        if hi > 1e12:
            raise ArithmeticError("lambda_upper bracket failed")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if poisson_cdf(mid, b) >= alpha:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


@dataclass(frozen=True)
class TestOutcome:
    """Result of the average-success hypothesis test."""

    b: int
    lambda_u: float
    decision: str
    alpha: float
    eta: float
    expected_failures: float

    @property
    def interval(self) -> tuple[float, float]:
        """95% (or 1-alpha) confidence interval [0, lambda_U) for the mean
        failure count."""
        return (0.0, self.lambda_u)

    def to_json(self) -> dict:
        return {
            "b": self.b,
            "lambda_u": self.lambda_u,
            "decision": self.decision,
            "alpha": self.alpha,
            "eta": self.eta,
            "expected_failures": self.expected_failures,
        }


def audit_hypothesis_test(
    b: int, c: int, rho: int, eta: float, alpha: float = 0.05
) -> TestOutcome:
    """Decide whether the observed failures refute sub-eta average success.

    H0 says the average success probability is below eta, under which at
    least (1-eta)*rho*c failures are expected.  H0 is rejected exactly when
    that expectation falls outside the confidence interval [0, lambda_U).
    """
    if not 0 <= b <= rho * c:
        raise ValueError(f"failures b={b} outside 0..{rho * c}")
    if not 0.0 <= eta <= 1.0:
        raise ValueError("eta must lie in [0, 1]")
    lam_u = lambda_upper(b, alpha)
    expected = (1.0 - eta) * rho * c
    decision = REJECT_H0 if expected >= lam_u else FAIL_TO_REJECT_H0
    return TestOutcome(b, lam_u, decision, alpha, eta, expected)


def transcript_to_counts(transcript) -> tuple[int, int, int]:
    """(total failures b, challenges per prover c, prover count rho).

    Requires the transcript to audit every prover equally often, matching
    the model behind the hypothesis test.
    """
    per_prover: dict[int, list[bool]] = {}
    for record in transcript.records:
        per_prover.setdefault(record.prover, []).append(record.accepted)
    if not per_prover:
        raise ValueError("empty transcript")
    counts = {len(v) for v in per_prover.values()}
    if len(counts) != 1:
        raise ValueError("transcript must audit every prover equally often")
    b = sum(1 for v in per_prover.values() for accepted in v if not accepted)
    return b, counts.pop(), len(per_prover)


@dataclass(frozen=True)
class ApproximationRow:
    b: int
    exact: float
    poisson: float

    @property
    def gap(self) -> float:
        return abs(self.exact - self.poisson)


def poisson_vs_exact_report(f, t: int, b_list) -> list[ApproximationRow]:
    """Exact Poisson-binomial CDF next to its Poisson approximation.

    The approximation uses rate lambda = t * sum(f), the summed expected
    failure count.
    """
    f = tuple(f)
    lam = t * math.fsum(f)
    rows = []
    for b in b_list:
        rows.append(
            ApproximationRow(
                b=b,
                exact=poisson_binomial_cdf(f, t, b),
                poisson=poisson_cdf(lam, b),
            )
        )
    return rows
