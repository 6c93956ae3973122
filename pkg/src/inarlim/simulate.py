"""Trajectory simulation for the empty-history process.

The process starts from nothing: the first count is pure immigration, and
each later count adds immigration to the offspring produced by all earlier
counts.  History is truncated at the effective horizon (total offspring
mean beyond it below 1e-12), which biases the running mean by far less
than any test tolerance.

Reproducibility contract: a ``RandomStream`` is an immutable descriptor
(seed, stream index); the same descriptor always reproduces the same
trajectory within one released version.  Batch replication r uses stream
index r, so replications are independent and order-insensitive.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import FingerprintMismatch
from .model import (
    InarModel,
    PoissonOffspring,
    TRUNCATION_TOL,
    effective_horizon,
    offspring_mean_l1,
    offspring_var_l1,
)

__all__ = [
    "RandomStream",
    "Trajectory",
    "BatchSummary",
    "MartingaleDiagnostic",
    "simulate",
    "simulate_batch",
    "martingale_diagnostic",
]

_I64_MAX = np.iinfo(np.int64).max


@dataclass(frozen=True)
class RandomStream:
    """Descriptor of a reproducible random stream: (seed, stream index)."""

    seed: int
    stream: int = 0
    algorithm: str = "pcg64"

    def __post_init__(self):
        if self.algorithm != "pcg64":
            raise ValueError(f"unknown stream algorithm {self.algorithm!r}")

    def generator(self) -> np.random.Generator:
        ss = np.random.SeedSequence(self.seed, spawn_key=(self.stream,))
        return np.random.Generator(np.random.PCG64(ss))

    def with_stream(self, index: int) -> "RandomStream":
        return replace(self, stream=index)


@dataclass(frozen=True, eq=False)
class Trajectory:
    counts: np.ndarray
    stream: RandomStream
    model_fingerprint: str

    def __len__(self) -> int:
        return len(self.counts)


@dataclass(frozen=True)
class BatchSummary:
    rep: int
    s_n: int
    x_n: int
    m_n: float


@dataclass(frozen=True, eq=False)
class MartingaleDiagnostic:
    """Centered-increment path from the conditional-mean decomposition.

    ``second_moment_bound`` is n * Var[immigration] plus the offspring
    variance l1 norm times n times the long-run mean, an upper bound on
    E[M_n^2] for the simulated dynamics.
    """

    m_path: np.ndarray
    second_moment_bound: float
    realized_m_squared: float


def _sim_window(m: InarModel, n: int) -> int:
    return min(effective_horizon(m, TRUNCATION_TOL), max(n - 1, 1))


def truncated_mean_prefix(m: InarModel, n: int) -> np.ndarray:
    """prefix[t] = sum of the first min(t, window) offspring means, t = 0..n-1."""
    window = _sim_window(m, n)
    coeffs = m.offspring.mean_coefficients(window)
    prefix = np.zeros(n, dtype=np.float64)
    upto = min(window, n - 1)
    prefix[1 : upto + 1] = np.cumsum(coeffs[:upto])
    if n - 1 > window:
        prefix[window + 1 :] = prefix[window]
    return prefix


def simulate(m: InarModel, n: int, stream: RandomStream) -> Trajectory:
    """Simulate counts X_1..X_n from empty history.

    Immigration is drawn first at each step, then offspring lag by lag.
    For Poisson offspring the per-step offspring total is drawn as a single
    Poisson variate with rate sum_k alpha_k * X_{t-k} (exact, by additivity
    of independent Poissons); otherwise each contributing count draws its
    variates individually.

    Subcriticality is not enforced here: finite-horizon paths are well
    defined at and above the critical boundary (counts just explode, and
    the 64-bit overflow guard then fires).  The limit-theory modules are
    where the standing assumptions are required.
    """
    if n < 1:
        raise ValueError(f"horizon must be at least 1, got {n}")
    gen = stream.generator()
    window = _sim_window(m, n)

    poisson_family = isinstance(m.offspring, PoissonOffspring)
    if poisson_family:
        alpha_rev = np.ascontiguousarray(m.offspring.decay.coefficients(window)[::-1])
    else:
        laws = m.offspring.laws[:window]

    imm = m.immigration
    x = np.zeros(n, dtype=np.int64)
    xf = np.zeros(n, dtype=np.float64)
    for t in range(n):
        total = imm.sample(gen)
        w = min(t, window)
        if w:
            if poisson_family:
                rate = float(np.dot(xf[t - w : t], alpha_rev[window - w :]))
                if rate > 0.0:
                    total += int(gen.poisson(rate))
            else:
                for lag in range(1, w + 1):
                    cnt = int(x[t - lag])
                    if cnt:
                        total += laws[lag - 1].sample_sum(gen, cnt)
        if total > _I64_MAX:
            raise OverflowError(f"count at step {t + 1} exceeds the 64-bit integer maximum")
        x[t] = total
        xf[t] = total
    return Trajectory(counts=x, stream=stream, model_fingerprint=m.fingerprint())


def _batch_martingale_terminal(m: InarModel, counts: np.ndarray, prefix: np.ndarray) -> float:
    n = len(counts)
    s_n = float(counts.sum())
    # M_n = S_n - n E[eps] - sum_j X_j * prefix(n - j)
    weights = prefix[1:][::-1]  # prefix(n-1), ..., prefix(1)
    conv = float(np.dot(counts[: n - 1].astype(np.float64), weights)) if n > 1 else 0.0
    return s_n - n * m.immigration.mean() - conv


def simulate_batch(m: InarModel, n: int, reps: int, master: RandomStream) -> list:
    """Independent replications; replication r uses stream index r.

    Returns per-replication summaries (S_n, X_n, M_n).  Replications may
    run in any order; results depend only on (master seed, r).
    """
    if reps < 1:
        raise ValueError(f"replication count must be at least 1, got {reps}")
    prefix = truncated_mean_prefix(m, n)
    out = []
    for r in range(reps):
        traj = simulate(m, n, master.with_stream(r))
        m_n = _batch_martingale_terminal(m, traj.counts, prefix)
        out.append(
            BatchSummary(rep=r, s_n=int(traj.counts.sum()), x_n=int(traj.counts[-1]), m_n=m_n)
        )
    return out


def martingale_diagnostic(traj: Trajectory, m: InarModel) -> MartingaleDiagnostic:
    """Centered path M_i = sum_{j<=i} (X_j - E[X_j | past]) plus its moment bound.

    Conditional means use the same truncated offspring coefficients as the
    simulator, so M is exactly a martingale for the simulated dynamics.
    """
    if traj.model_fingerprint != m.fingerprint():
        raise FingerprintMismatch(
            f"trajectory fingerprint {traj.model_fingerprint} does not match model {m.fingerprint()}"
        )
    counts = traj.counts
    n = len(counts)
    window = _sim_window(m, n)
    coeffs = m.offspring.mean_coefficients(window)
    xf = counts.astype(np.float64)

    cond = np.full(n, m.immigration.mean(), dtype=np.float64)
    for k in range(1, min(window, n - 1) + 1):
        if coeffs[k - 1] != 0.0:
            cond[k:] += coeffs[k - 1] * xf[: n - k]
    m_path = np.cumsum(xf - cond)

    mean_l1 = offspring_mean_l1(m)
    var_l1 = offspring_var_l1(m)
    mu = m.immigration.mean() / (1.0 - mean_l1) if mean_l1 < 1.0 else math.inf
    # var_l1 == 0 makes the offspring term vanish even when mu is infinite
    bound = n * m.immigration.variance() + (var_l1 * n * mu if var_l1 > 0.0 else 0.0)
    return MartingaleDiagnostic(
        m_path=m_path,
        second_moment_bound=bound,
        realized_m_squared=float(m_path[-1] ** 2),
    )
