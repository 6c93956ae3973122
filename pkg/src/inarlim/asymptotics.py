"""Closed-form and numerically solved asymptotic quantities.

The long-run mean, the limiting Gaussian variance, the concave map
F(x) = x - sum_k log E[exp(x xi_k)] whose level sets define the critical
tilt and the fixed-point tilt, the limiting scaled cumulant generating
function, and the large/moderate-deviation rate functions.

Root-finding is bisection only: concavity guarantees bracketing, and
robustness beats speed at these scales.  Derivatives use the catalog's
closed forms.  Fixed-point roots are located to 1e-12 in the argument,
transform optima to 1e-10.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .distributions import CountDistribution
from .errors import AssumptionViolation
from .model import (
    ExplicitOffspring,
    InarModel,
    PoissonOffspring,
    offspring_mean_l1,
    offspring_var_l1,
    require_assumptions,
)

__all__ = [
    "TheorySummary",
    "theory_summary",
    "lln_mean",
    "clt_variance",
    "mdp_rate",
    "tilt_gap",
    "critical_tilt",
    "tilt_fixed_point",
    "limit_cgf",
    "ldp_rate",
    "inar1_ldp_rate",
]

ROOT_XTOL = 1e-12
OPT_XTOL = 1e-10
_MAX_GROW = 200


def _safe_expm1(t: float) -> float:
    try:
        return math.expm1(t)
    except OverflowError:
        return math.inf


def _safe_exp(t: float) -> float:
    try:
        return math.exp(t)
    except OverflowError:
        return math.inf


def _offspring_cgf(m: InarModel, x: float) -> float:
    """sum_k log E[exp(x xi_k)]; +inf past the domain."""
    if isinstance(m.offspring, PoissonOffspring):
        total = m.offspring.decay.total()
        if total == 0.0:
            return 0.0
        return total * _safe_expm1(x)
    terms = []
    for law in m.offspring.laws:
        t = law.log_mgf(x)
        if t == math.inf:
            return math.inf
        terms.append(t)
    return math.fsum(terms)


def _offspring_cgf_prime(m: InarModel, x: float) -> float:
    if isinstance(m.offspring, PoissonOffspring):
        total = m.offspring.decay.total()
        if total == 0.0:
            return 0.0
        return total * _safe_exp(x)
    terms = []
    for law in m.offspring.laws:
        t = law.log_mgf_prime(x)
        if t == math.inf:
            return math.inf
        terms.append(t)
    return math.fsum(terms)


def _offspring_domain_sup(m: InarModel) -> float:
    if isinstance(m.offspring, PoissonOffspring):
        return math.inf
    return min((law.log_mgf_domain_sup() for law in m.offspring.laws), default=math.inf)


def _offspring_support_total(m: InarModel) -> float:
    """Sum of per-lag support maxima; inf when any lag is unbounded."""
    if isinstance(m.offspring, PoissonOffspring):
        return 0.0 if m.offspring.decay.total() == 0.0 else math.inf
    total = 0
    for law in m.offspring.laws:
        s = law.support_max()
        if s is None:
            return math.inf
        total += s
    return float(total)


def tilt_gap(m: InarModel, x: float) -> float:
    """F(x) = x minus the summed offspring log-MGF at tilt x.

    Concave, F(0) = 0, and F'(0) = 1 - mean_l1 > 0 under subcriticality.
    Returns -inf when the offspring log-MGF diverges at x.
    """
    g = _offspring_cgf(m, x)
    if g == math.inf:
        return -math.inf
    return x - g


def _tilt_gap_prime(m: InarModel, x: float) -> float:
    g = _offspring_cgf_prime(m, x)
    if g == math.inf:
        return -math.inf
    return 1.0 - g


@dataclass(frozen=True)
class _CriticalTilt:
    value: float
    attained: bool
    argmax: float


@lru_cache(maxsize=256)
def _critical_tilt(m: InarModel) -> _CriticalTilt:
    mean_l1 = offspring_mean_l1(m)
    if mean_l1 >= 1.0:
        raise AssumptionViolation("a", f"offspring mean l1 norm is {mean_l1}, must be below 1")
    s_total = _offspring_support_total(m)
    if s_total < 1.0:
        # no offspring at all: F is the identity, unbounded above
        return _CriticalTilt(value=math.inf, attained=False, argmax=math.nan)
    if s_total == 1.0:
        # F increases to a finite horizontal asymptote
        asymptote = -math.fsum(
            math.log(law.pmf(law.support_max())) for law in m.offspring.laws
        )
        return _CriticalTilt(value=asymptote, attained=False, argmax=math.nan)
    # F' crosses zero at an interior maximizer
    dom = _offspring_domain_sup(m)
    hi = None
    if math.isinf(dom):
        cand = 1.0
        for _ in range(_MAX_GROW):
            if _tilt_gap_prime(m, cand) < 0.0:
                hi = cand
                break
            cand *= 2.0
    else:
        for j in range(1, _MAX_GROW):
            cand = dom * (1.0 - 0.5**j)
            if _tilt_gap_prime(m, cand) < 0.0:
                hi = cand
                break
    if hi is None:
        raise RuntimeError("failed to bracket the maximizer of the tilt gap")
    lo = 0.0
    while hi - lo > OPT_XTOL:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if _tilt_gap_prime(m, mid) > 0.0:
            lo = mid
        else:
            hi = mid
    x_star = 0.5 * (lo + hi)
    return _CriticalTilt(value=tilt_gap(m, x_star), attained=True, argmax=x_star)


def critical_tilt(m: InarModel) -> tuple:
    """Supremum of the tilt gap and whether a finite maximizer attains it.

    Unattained cases: a strictly increasing F with a finite asymptote
    (bounded offspring whose support maxima sum to exactly 1), reported as
    the limit value, or F unbounded above (no offspring), reported as
    +inf.  The fixed-point solver accepts the critical value itself only
    when it is attained.
    """
    require_assumptions(m, labels=("a",))
    ct = _critical_tilt(m)
    return ct.value, ct.attained


def tilt_fixed_point(m: InarModel, theta: float) -> float:
    """Smaller root of F(x) = theta, for theta up to the critical tilt."""
    if theta == 0.0:
        return 0.0
    ct = _critical_tilt(m)
    if theta > ct.value:
        raise ValueError(f"no fixed point: tilt {theta} exceeds the critical value {ct.value}")
    if theta == ct.value:
        if not ct.attained:
            raise ValueError(
                "no fixed point: the critical tilt is an unattained supremum"
            )
        return ct.argmax

    if theta > 0.0:
        lo = 0.0
        if ct.attained:
            hi = ct.argmax
            if tilt_gap(m, hi) < theta:
                # theta within rounding of the critical value
                return hi
        else:
            hi = 1.0
            for _ in range(_MAX_GROW):
                if tilt_gap(m, hi) >= theta:
                    break
                hi *= 2.0
            else:
                raise ValueError(f"no fixed point found below tilt {theta}")
    else:
        hi = 0.0
        lo = -1.0
        for _ in range(_MAX_GROW):
            if tilt_gap(m, lo) <= theta:
                break
            lo *= 2.0
        else:
            raise RuntimeError("failed to bracket the fixed point on the left")

    # F is increasing on [lo, hi] with F(lo) <= theta <= F(hi)
    while hi - lo > ROOT_XTOL:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if tilt_gap(m, mid) < theta:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def limit_cgf(m: InarModel, theta: float) -> float:
    """Limiting per-step log-MGF of the partial sum: imm log-MGF at the fixed point.

    +inf beyond the critical tilt, and at the critical tilt itself when
    that value is only a supremum.
    """
    ct = _critical_tilt(m)
    if theta > ct.value or (theta == ct.value and not ct.attained):
        return math.inf
    f = tilt_fixed_point(m, theta)
    return m.immigration.log_mgf(f)


def _limit_cgf_prime(m: InarModel, theta: float) -> float:
    """Derivative of the limiting CGF, via the fixed point's closed-form slope."""
    f = tilt_fixed_point(m, theta)
    slope = _tilt_gap_prime(m, f)
    num = m.immigration.log_mgf_prime(f)
    if slope <= 0.0:
        return math.inf
    if num == math.inf:
        return math.inf
    return num / slope


def lln_mean(m: InarModel) -> float:
    """Long-run mean of the per-step counts: E[immigration] / (1 - mean_l1)."""
    require_assumptions(m, labels=("a", "c"))
    return m.immigration.mean() / (1.0 - offspring_mean_l1(m))


def clt_variance(m: InarModel) -> float:
    """Variance of the Gaussian limit of (S_n - n mu) / sqrt(n)."""
    require_assumptions(m, labels=("a", "c"))
    mean_l1 = offspring_mean_l1(m)
    num = m.immigration.mean() * offspring_var_l1(m) + m.immigration.variance() * (1.0 - mean_l1)
    return num / (1.0 - mean_l1) ** 3


def mdp_rate(m: InarModel, x: float) -> float:
    """Moderate-deviation rate x^2 / (2 sigma^2)."""
    sigma2 = clt_variance(m)
    if sigma2 == 0.0:
        raise ValueError(
            "degenerate model: immigration and offspring are all constant, "
            "the moderate-deviation rate is undefined"
        )
    return x * x / (2.0 * sigma2)


def _rate_at_zero(imm: CountDistribution) -> float:
    p0 = imm.pmf(0)
    if p0 == 0.0:
        return math.inf
    return -math.log(p0)


def ldp_rate(m: InarModel, x: float) -> float:
    """Large-deviation rate: Legendre transform of the limiting CGF.

    Solved by bisection on the derivative when the stationary tilt is
    interior (essential smoothness pushes the derivative to +inf at the
    critical tilt, so targets above the mean always bracket); means
    outside the reachable range give +inf.
    """
    require_assumptions(m, labels=("a", "c"))
    if x < 0.0:
        return math.inf
    if x == 0.0:
        return _rate_at_zero(m.immigration)
    mu = lln_mean(m)
    if x == mu:
        return 0.0
    ct = _critical_tilt(m)

    if x > mu:
        imm_max = m.immigration.support_max()
        s_total = _offspring_support_total(m)
        if imm_max is not None and s_total < 1.0 and x > float(imm_max):
            # no offspring and bounded immigration: means above the max are unreachable
            return math.inf
        lo = 0.0
        hi = None
        for j in range(1, _MAX_GROW):
            probe = ct.value * (1.0 - 0.5**j) if math.isfinite(ct.value) else float(2 ** (j - 1))
            if probe <= lo:
                continue
            if _limit_cgf_prime(m, probe) >= x:
                hi = probe
                break
            lo = probe
        if hi is None:
            # derivative saturates below x; the supremum is the boundary limit
            return max(0.0, lo * x - limit_cgf(m, lo))
    else:
        hi = 0.0
        lo = None
        probe = -1.0
        for _ in range(_MAX_GROW):
            if _limit_cgf_prime(m, probe) <= x:
                lo = probe
                break
            hi = probe
            probe *= 2.0
        if lo is None:
            return max(0.0, hi * x - limit_cgf(m, hi))

    while hi - lo > OPT_XTOL:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if _limit_cgf_prime(m, mid) < x:
            lo = mid
        else:
            hi = mid
    theta_star = 0.5 * (lo + hi)
    return max(0.0, theta_star * x - limit_cgf(m, theta_star))


def inar1_ldp_rate(eps: CountDistribution, xi1: CountDistribution, x: float) -> float:
    """Single-lag large-deviation rate in its direct one-parameter form.

    Maximizes psi -> x (psi - log E[exp(psi xi1)]) - log E[exp(psi eps)],
    which reparameterizes the Legendre transform of the limiting CGF for
    the model with only the first lag active.
    """
    if not xi1.mean() < 1.0:
        raise AssumptionViolation("a", f"offspring mean is {xi1.mean()}, must be below 1")
    if x < 0.0:
        return math.inf
    if x == 0.0:
        return _rate_at_zero(eps)

    dom = min(eps.log_mgf_domain_sup(), xi1.log_mgf_domain_sup())

    def objective(psi: float) -> float:
        a = xi1.log_mgf(psi)
        b = eps.log_mgf(psi)
        if a == math.inf or b == math.inf:
            return -math.inf
        return x * (psi - a) - b

    def slope(psi: float) -> float:
        a = xi1.log_mgf_prime(psi)
        b = eps.log_mgf_prime(psi)
        if a == math.inf or b == math.inf:
            return -math.inf
        return x * (1.0 - a) - b

    # slope is decreasing; find a sign change around the maximizer
    if slope(0.0) >= 0.0:
        lo = 0.0
        hi = None
        if math.isinf(dom):
            cand = 1.0
            for _ in range(_MAX_GROW):
                if slope(cand) <= 0.0:
                    hi = cand
                    break
                lo = cand
                cand *= 2.0
        else:
            for j in range(1, _MAX_GROW):
                cand = dom * (1.0 - 0.5**j)
                if cand <= lo:
                    continue
                if slope(cand) <= 0.0:
                    hi = cand
                    break
                lo = cand
        if hi is None:
            return max(0.0, objective(lo))
    else:
        hi = 0.0
        lo = None
        cand = -1.0
        for _ in range(_MAX_GROW):
            if slope(cand) >= 0.0:
                lo = cand
                break
            hi = cand
            cand *= 2.0
        if lo is None:
            return max(0.0, objective(hi))

    while hi - lo > OPT_XTOL:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if slope(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    return max(0.0, objective(0.5 * (lo + hi)))


@dataclass(frozen=True)
class TheorySummary:
    """Asymptotic constants for one model, with rate-function evaluators."""

    model: InarModel
    mu: float
    sigma2: float
    theta_c: float
    theta_c_attained: bool
    offspring_mean_l1: float
    offspring_var_l1: float

    def tilt_gap(self, x: float) -> float:
        return tilt_gap(self.model, x)

    def tilt_fixed_point(self, theta: float) -> float:
        return tilt_fixed_point(self.model, theta)

    def limit_cgf(self, theta: float) -> float:
        return limit_cgf(self.model, theta)

    def ldp_rate(self, x: float) -> float:
        return ldp_rate(self.model, x)

    def mdp_rate(self, x: float) -> float:
        return mdp_rate(self.model, x)


def theory_summary(m: InarModel) -> TheorySummary:
    require_assumptions(m, labels=("a", "c"))
    value, attained = critical_tilt(m)
    return TheorySummary(
        model=m,
        mu=lln_mean(m),
        sigma2=clt_variance(m),
        theta_c=value,
        theta_c_attained=attained,
        offspring_mean_l1=offspring_mean_l1(m),
        offspring_var_l1=offspring_var_l1(m),
    )
