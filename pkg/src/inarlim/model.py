"""INAR model definition: immigration law plus offspring sequence.

An ``InarModel`` pairs an immigration distribution with an offspring
sequence, either an explicit finite list of count laws (lag k beyond the
list means zero offspring) or a Poisson family whose per-lag means follow
a decay law.  Construction validates structure only; the standing
assumptions (subcriticality etc.) are checked by :func:`validate` so that
violating models can still be inspected and reported on.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass
from typing import Union

import numpy as np
from scipy.special import zeta

from .distributions import CountDistribution, Poisson, dist_from_spec
from .errors import AssumptionViolation, ConfigError

__all__ = [
    "GeometricDecay",
    "PowerLawDecay",
    "FiniteDecay",
    "DecayLaw",
    "ExplicitOffspring",
    "PoissonOffspring",
    "OffspringSequence",
    "InarModel",
    "AssumptionItem",
    "AssumptionReport",
    "model_from_spec",
    "offspring_mean_l1",
    "offspring_var_l1",
    "validate",
    "effective_horizon",
    "require_assumptions",
]

TRUNCATION_TOL = 1e-12


@dataclass(frozen=True)
class GeometricDecay:
    """Coefficients c * r**(k-1); total mass c / (1 - r)."""

    c: float
    r: float

    def __post_init__(self):
        if self.c < 0.0:
            raise ConfigError(f"decay scale must be nonnegative, got {self.c}")
        if not 0.0 < self.r < 1.0:
            raise ConfigError(f"geometric decay ratio must lie in (0, 1), got {self.r}")

    def coefficients(self, upto: int) -> np.ndarray:
        return self.c * self.r ** np.arange(upto, dtype=np.float64)

    def total(self) -> float:
        return self.c / (1.0 - self.r)

    def tail(self, after: int) -> float:
        return self.c * self.r**after / (1.0 - self.r)

    def to_spec(self) -> dict:
        return {"type": "geometric", "c": self.c, "r": self.r}


@dataclass(frozen=True)
class PowerLawDecay:
    """Coefficients c * k**(-a) with a > 1; total mass c * zeta(a)."""

    c: float
    a: float

    def __post_init__(self):
        if self.c < 0.0:
            raise ConfigError(f"decay scale must be nonnegative, got {self.c}")
        if not self.a > 1.0:
            raise ConfigError(
                f"power-law exponent must exceed 1 for a summable series, got {self.a}"
            )

    def coefficients(self, upto: int) -> np.ndarray:
        return self.c * np.arange(1, upto + 1, dtype=np.float64) ** (-self.a)

    def total(self) -> float:
        return self.c * float(zeta(self.a, 1))

    def tail(self, after: int) -> float:
        if self.c == 0.0:
            return 0.0
        return self.c * float(zeta(self.a, after + 1))

    def to_spec(self) -> dict:
        return {"type": "power_law", "c": self.c, "a": self.a}


@dataclass(frozen=True)
class FiniteDecay:
    """Explicit finite list of nonnegative coefficients, zero beyond."""

    values: tuple

    def __post_init__(self):
        vals = tuple(float(v) for v in self.values)
        for v in vals:
            if v < 0.0:
                raise ConfigError(f"decay coefficients must be nonnegative, got {v}")
        object.__setattr__(self, "values", vals)

    def coefficients(self, upto: int) -> np.ndarray:
        out = np.zeros(upto, dtype=np.float64)
        head = min(upto, len(self.values))
        out[:head] = self.values[:head]
        return out

    def total(self) -> float:
        return math.fsum(self.values)

    def tail(self, after: int) -> float:
        return math.fsum(self.values[after:])

    def to_spec(self) -> dict:
        return {"type": "finite_list", "values": list(self.values)}


DecayLaw = Union[GeometricDecay, PowerLawDecay, FiniteDecay]


@dataclass(frozen=True)
class ExplicitOffspring:
    """Offspring laws given lag by lag; lags beyond the list produce nothing."""

    laws: tuple

    def __post_init__(self):
        laws = tuple(self.laws)
        for law in laws:
            if not isinstance(law, CountDistribution):
                raise ConfigError(f"offspring entries must be count distributions, got {law!r}")
        object.__setattr__(self, "laws", laws)

    def mean_l1(self) -> float:
        return math.fsum(law.mean() for law in self.laws)

    def var_l1(self) -> float:
        return math.fsum(law.variance() for law in self.laws)

    def mean_coefficients(self, upto: int) -> np.ndarray:
        out = np.zeros(upto, dtype=np.float64)
        for k, law in enumerate(self.laws[:upto]):
            out[k] = law.mean()
        return out

    def var_coefficients(self, upto: int) -> np.ndarray:
        out = np.zeros(upto, dtype=np.float64)
        for k, law in enumerate(self.laws[:upto]):
            out[k] = law.variance()
        return out

    def mean_tail(self, after: int) -> float:
        return math.fsum(law.mean() for law in self.laws[after:])

    def to_spec(self) -> dict:
        return {"type": "explicit", "laws": [law.to_spec() for law in self.laws]}


@dataclass(frozen=True)
class PoissonOffspring:
    """Offspring at lag k distributed Poisson(alpha_k), alpha given by a decay law."""

    decay: DecayLaw

    def law(self, k: int) -> Poisson:
        return Poisson(lam=float(self.decay.coefficients(k)[k - 1]))

    def mean_l1(self) -> float:
        return self.decay.total()

    def var_l1(self) -> float:
        # Poisson variance equals the mean at every lag.
        return self.decay.total()

    def mean_coefficients(self, upto: int) -> np.ndarray:
        return self.decay.coefficients(upto)

    def var_coefficients(self, upto: int) -> np.ndarray:
        return self.decay.coefficients(upto)

    def mean_tail(self, after: int) -> float:
        return self.decay.tail(after)

    def to_spec(self) -> dict:
        return {"type": "poisson_family", "decay": self.decay.to_spec()}


OffspringSequence = Union[ExplicitOffspring, PoissonOffspring]


@dataclass(frozen=True)
class InarModel:
    immigration: CountDistribution
    offspring: OffspringSequence

    def __post_init__(self):
        if not isinstance(self.immigration, CountDistribution):
            raise ConfigError(f"immigration must be a count distribution, got {self.immigration!r}")
        if not isinstance(self.offspring, (ExplicitOffspring, PoissonOffspring)):
            raise ConfigError(f"offspring must be an offspring sequence, got {self.offspring!r}")

    def to_spec(self) -> dict:
        return {"immigration": self.immigration.to_spec(), "offspring": self.offspring.to_spec()}

    def fingerprint(self) -> str:
        canon = json.dumps(self.to_spec(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canon.encode()).hexdigest()[:16]


def offspring_mean_l1(m: InarModel) -> float:
    """l1 norm of the per-lag offspring means."""
    return m.offspring.mean_l1()


def offspring_var_l1(m: InarModel) -> float:
    """l1 norm of the per-lag offspring variances."""
    return m.offspring.var_l1()


def effective_horizon(m: InarModel, tol: float) -> int:
    """Smallest K with total offspring mean beyond lag K below tol.

    Exact for geometric and finite decay, via Hurwitz-zeta tails for power
    laws (which can make K astronomically large; simulation and recursion
    windows are additionally capped at the horizon length, so a huge K only
    means "use all available history").
    """
    if tol <= 0.0:
        raise ConfigError(f"tolerance must be positive, got {tol}")
    if isinstance(m.offspring, ExplicitOffspring):
        tail = lambda k: m.offspring.mean_tail(k)
        hard_cap = len(m.offspring.laws)
    else:
        tail = m.offspring.decay.tail
        hard_cap = None
        if isinstance(m.offspring.decay, FiniteDecay):
            hard_cap = len(m.offspring.decay.values)
    if tail(0) < tol:
        return 1
    # Exponential search for an upper bracket, then bisect to the smallest K.
    hi = 1
    while tail(hi) >= tol:
        hi *= 2
        if hard_cap is not None and hi >= hard_cap:
            hi = hard_cap
            break
    lo = hi // 2
    while lo + 1 < hi:
        mid = (lo + hi) // 2
        if tail(mid) < tol:
            hi = mid
        else:
            lo = mid
    return hi


@dataclass(frozen=True)
class AssumptionItem:
    label: str
    holds: bool
    detail: str
    constants: dict


@dataclass(frozen=True)
class AssumptionReport:
    """Which standing assumptions hold, with witnessing constants.

    Labels: (a) subcritical offspring mean with summable offspring
    variance; (b1) lag-k mean bounded by C1 * k**(-3/2); (b2) lag-k mean
    bounded by C2 * k**(-a) for some a > 3/2; (c) finite immigration mean
    and variance.
    """

    items: tuple
    mean_l1: float
    var_l1: float

    def item(self, label: str) -> AssumptionItem:
        for it in self.items:
            if it.label == label:
                return it
        raise KeyError(label)

    def holds(self, label: str) -> bool:
        return self.item(label).holds

    def all_hold(self) -> bool:
        return all(it.holds for it in self.items)

    def failed_labels(self) -> list:
        return [it.label for it in self.items if not it.holds]

    def to_dict(self) -> dict:
        return {
            "mean_l1": self.mean_l1,
            "var_l1": self.var_l1,
            "items": [
                {
                    "label": it.label,
                    "holds": it.holds,
                    "detail": it.detail,
                    "constants": it.constants,
                }
                for it in self.items
            ],
        }


def _sup_poly_times_mean(decay_or_laws, power: float):
    """sup over k of k**power * E[xi_k], with the witnessing description."""
    if isinstance(decay_or_laws, GeometricDecay):
        d = decay_or_laws
        if d.c == 0.0:
            return 0.0
        # maximize k**power * c * r**(k-1) over integer k >= 1
        k_star = -power / math.log(d.r)
        best = 0.0
        for k in {1, max(1, math.floor(k_star)), math.ceil(k_star)}:
            best = max(best, k**power * d.c * d.r ** (k - 1))
        return best
    if isinstance(decay_or_laws, PowerLawDecay):
        d = decay_or_laws
        if d.c == 0.0:
            return 0.0
        if power > d.a:
            return math.inf
        # k**(power - a) is maximized at k = 1 when power <= a
        return d.c
    # finite list of means
    means = decay_or_laws
    best = 0.0
    for k, mval in enumerate(means, start=1):
        best = max(best, k**power * mval)
    return best


def validate(m: InarModel) -> AssumptionReport:
    """Check the standing assumptions, reporting (never raising) violations."""
    mean_l1 = offspring_mean_l1(m)
    var_l1 = offspring_var_l1(m)

    a_holds = mean_l1 < 1.0 and math.isfinite(var_l1)
    a_item = AssumptionItem(
        label="a",
        holds=a_holds,
        detail="offspring mean l1 norm below 1 and offspring variance l1 norm finite",
        constants={"mean_l1": mean_l1, "var_l1": var_l1},
    )

    if isinstance(m.offspring, ExplicitOffspring):
        means = [law.mean() for law in m.offspring.laws]
        c1 = _sup_poly_times_mean(means, 1.5)
        b1_holds = True
        witness_a = 2.0
        c2 = _sup_poly_times_mean(means, witness_a)
        b2_holds = True
        tail_note = "finitely many nonzero lags, tail conditions hold trivially"
    else:
        decay = m.offspring.decay
        if isinstance(decay, FiniteDecay):
            means = list(decay.values)
            c1 = _sup_poly_times_mean(means, 1.5)
            b1_holds = True
            witness_a = 2.0
            c2 = _sup_poly_times_mean(means, witness_a)
            b2_holds = True
            tail_note = "finitely many nonzero lags, tail conditions hold trivially"
        elif isinstance(decay, GeometricDecay):
            c1 = _sup_poly_times_mean(decay, 1.5)
            b1_holds = True
            witness_a = 2.0
            c2 = _sup_poly_times_mean(decay, witness_a)
            b2_holds = True
            tail_note = "geometric decay dominates every polynomial"
        else:
            b1_holds = decay.a >= 1.5
            c1 = _sup_poly_times_mean(decay, 1.5) if b1_holds else math.inf
            b2_holds = decay.a > 1.5
            witness_a = decay.a if b2_holds else None
            c2 = decay.c if b2_holds else math.inf
            tail_note = f"power-law decay with exponent {decay.a}"

    b1_item = AssumptionItem(
        label="b1",
        holds=b1_holds,
        detail=f"lag means decay at least like k**(-3/2); {tail_note}",
        constants={"C1": c1} if b1_holds else {},
    )
    b2_item = AssumptionItem(
        label="b2",
        holds=b2_holds,
        detail=f"lag means decay like k**(-a) for some a > 3/2; {tail_note}",
        constants={"a": witness_a, "C2": c2} if b2_holds else {},
    )

    imm_mean = m.immigration.mean()
    imm_var = m.immigration.variance()
    c_holds = math.isfinite(imm_mean) and math.isfinite(imm_var)
    c_item = AssumptionItem(
        label="c",
        holds=c_holds,
        detail="immigration mean and variance finite",
        constants={"mean": imm_mean, "variance": imm_var},
    )

    return AssumptionReport(
        items=(a_item, b1_item, b2_item, c_item), mean_l1=mean_l1, var_l1=var_l1
    )


def require_assumptions(m: InarModel, labels=("a", "c")) -> AssumptionReport:
    """Raise AssumptionViolation if any of the named assumptions fails."""
    report = validate(m)
    for label in labels:
        it = report.item(label)
        if not it.holds:
            extras = ", ".join(f"{k}={v}" for k, v in it.constants.items())
            if label == "a":
                extras = f"mean_l1={report.mean_l1}, var_l1={report.var_l1}"
            raise AssumptionViolation(label, it.detail + (f" [{extras}]" if extras else ""))
    return report


_DECAY_FIELDS = {
    "geometric": ("c", "r"),
    "power_law": ("c", "a"),
    "finite_list": ("values",),
}


def _decay_from_spec(obj) -> DecayLaw:
    if not isinstance(obj, dict):
        raise ConfigError(f"decay spec must be an object, got {type(obj).__name__}")
    kind = obj.get("type")
    if kind not in _DECAY_FIELDS:
        raise ConfigError(f"unknown decay type {kind!r}")
    expected = set(_DECAY_FIELDS[kind]) | {"type"}
    if set(obj) != expected:
        raise ConfigError(f"bad {kind} decay spec: keys {sorted(obj)} != {sorted(expected)}")
    if kind == "geometric":
        return GeometricDecay(c=obj["c"], r=obj["r"])
    if kind == "power_law":
        return PowerLawDecay(c=obj["c"], a=obj["a"])
    return FiniteDecay(values=tuple(obj["values"]))


def model_from_spec(obj) -> InarModel:
    """Build a model from its JSON object, rejecting unknown keys."""
    if not isinstance(obj, dict):
        raise ConfigError(f"model spec must be an object, got {type(obj).__name__}")
    if set(obj) != {"immigration", "offspring"}:
        raise ConfigError(
            f"model spec must have exactly the keys 'immigration' and 'offspring', got {sorted(obj)}"
        )
    immigration = dist_from_spec(obj["immigration"])
    off = obj["offspring"]
    if not isinstance(off, dict) or "type" not in off:
        raise ConfigError("offspring spec must be a tagged object")
    if off["type"] == "explicit":
        if set(off) != {"type", "laws"}:
            raise ConfigError(f"bad explicit offspring spec: keys {sorted(off)}")
        laws = tuple(dist_from_spec(o) for o in off["laws"])
        offspring = ExplicitOffspring(laws=laws)
    elif off["type"] == "poisson_family":
        if set(off) != {"type", "decay"}:
            raise ConfigError(f"bad poisson_family offspring spec: keys {sorted(off)}")
        offspring = PoissonOffspring(decay=_decay_from_spec(off["decay"]))
    else:
        raise ConfigError(f"unknown offspring type {off['type']!r}")
    return InarModel(immigration=immigration, offspring=offspring)
