"""Negative-moment machinery: admissible exponents, threshold estimates,
Laplace-transform estimates and the quantitative bound verdict.

For an admissible pair (beta, delta) the decay exponent is
    eta = (beta - gamma^2) / (beta + gamma^2 * delta),   L = (1 + delta) / (beta - gamma^2),
and the bound under test is E[exp(-t * mass)] <= 2^5 / (sigma * t^eta) for all
t >= t0 = 2^4 * s0^(1/eta). In the square-integrable branch (gamma < sqrt(d),
beta = d, delta = 1) the threshold is analytic, s0 = 2^5 * E_d / sigma; in
general s0 comes from the empirical median of the rooted local energy
phi_beta(root, mass) via s0 = (2^4 * median)^(1/delta).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import DomainError
from .field import field_matrix
from .gmc import draw_roots, mass_columns, total_masses
from .measure import AtomicMeasure, d_energy

BOUND_CONSTANT = 2.0 ** 5
T0_CONSTANT = 2.0 ** 4
GRID_POINTS_PER_DECADE = 12
GRID_DECADES = 2


@dataclass(frozen=True)
class ExponentReport:
    gamma: float
    d: float
    beta: float
    delta: float
    beta_bar: float
    eta: float
    L: float
    l2_eta: float | None
    s0: float | None = None
    t0: float | None = None
    l2_t0: float | None = None


@dataclass(frozen=True)
class LaplaceReport:
    t_values: np.ndarray
    estimates: np.ndarray
    standard_errors: np.ndarray
    bound_values: np.ndarray | None
    gamma: float
    n_replicas: int
    base_seed: int


@dataclass(frozen=True)
class TailReport:
    thresholds: np.ndarray
    frequencies: np.ndarray
    standard_errors: np.ndarray
    gamma: float
    n_replicas: int
    base_seed: int


@dataclass(frozen=True)
class BoundReport:
    exponent: ExponentReport
    laplace: LaplaceReport
    points_pass: np.ndarray
    trivial_pass: bool
    event_frequency: float
    event_se: float
    event_pass: bool
    verdict: bool
    n_replicas: int
    base_seed: int


def exponents(gamma: float, d: float, beta: float, delta: float) -> ExponentReport:
    """Validate admissibility and fill in the decay exponents.

    gamma = 0 is admitted as the degenerate boundary case (eta = 1).
    """
    if not 0.0 < d <= 2.0:
        raise DomainError("d must satisfy 0 < d <= 2")
    if not 0.0 <= gamma < math.sqrt(2.0 * d):
        raise DomainError("gamma must satisfy 0 <= gamma < sqrt(2*d)")
    if not delta > 0.0:
        raise DomainError("delta must satisfy delta > 0")
    gamma2 = gamma * gamma
    beta_bar = max(math.sqrt(2.0 * d) * gamma, d)
    if not beta > gamma2:
        raise DomainError("beta must satisfy beta > gamma**2")
    square_integrable = beta == d and gamma2 < d
    if not beta < beta_bar and not square_integrable:
        raise DomainError(
            "beta must satisfy beta < max(sqrt(2*d)*gamma, d) "
            "(beta = d is admissible when gamma < sqrt(d))")
    eta = (beta - gamma2) / (beta + gamma2 * delta)
    big_l = (1.0 + delta) / (beta - gamma2)
    l2_eta = (d - gamma2) / (d + gamma2) if gamma2 < d else None
    return ExponentReport(gamma, d, beta, delta, beta_bar, eta, big_l, l2_eta)


def t0_from_ratio(energy_ratio: float, gamma: float, d: float) -> float:
    """Square-integrable threshold 2^4 * (2^5 * E_d/sigma)^((d+g^2)/(d-g^2)).

    The exponent is formed directly as the ratio (d + gamma^2)/(d - gamma^2)
    so dyadic inputs stay exact in floating point.
    """
    if not 0.0 < d <= 2.0:
        raise DomainError("d must satisfy 0 < d <= 2")
    gamma2 = gamma * gamma
    if not gamma2 < d:
        raise DomainError("gamma must satisfy gamma < sqrt(d)")
    if not energy_ratio > 0.0:
        raise DomainError("energy ratio must be > 0")
    return T0_CONSTANT * (BOUND_CONSTANT * energy_ratio) ** ((d + gamma2) / (d - gamma2))


def t0_l2(measure: AtomicMeasure, gamma: float, d: float) -> float:
    """Square-integrable threshold computed from the measure's d-energy."""
    return t0_from_ratio(d_energy(measure, d) / measure.total_mass, gamma, d)


def _riesz_rows(model, beta: float) -> np.ndarray:
    dist = np.abs(model.measure.positions[:, None] - model.measure.positions[None, :])
    np.fill_diagonal(dist, math.inf)
    return dist ** -beta


def local_energy_samples(model, gamma: float, beta: float, base_seed: int,
                         n_replicas: int, start: int = 0,
                         threads: int = 1) -> np.ndarray:
    """Rooted local energies phi_beta(root, mass), root atom excluded."""
    indices = np.arange(start, start + n_replicas)
    roots = draw_roots(model, base_seed, indices)
    values = field_matrix(model, base_seed, indices, threads=threads)
    masses = mass_columns(model, values, gamma)
    return np.einsum("ki,ik->k", _riesz_rows(model, beta)[roots], masses)


def estimate_s0(model, gamma: float, beta: float, delta: float, n_replicas: int,
                base_seed: int, start: int = 0, threads: int = 1) -> float:
    """Threshold estimate (2^4 * median of phi_beta)^(1/delta)."""
    if not delta > 0.0:
        raise DomainError("delta must satisfy delta > 0")
    phi = local_energy_samples(model, gamma, beta, base_seed, n_replicas,
                               start=start, threads=threads)
    return float((T0_CONSTANT * np.median(phi)) ** (1.0 / delta))


def laplace_transform(model, gamma: float, t_values, n_replicas: int,
                      base_seed: int, exponent: ExponentReport | None = None,
                      start: int = 0, threads: int = 1) -> LaplaceReport:
    """Monte Carlo E[exp(-t * mass)] on a shared replica set for every t."""
    t_values = np.atleast_1d(np.asarray(t_values, dtype=float))
    if np.any(t_values < 0):
        raise DomainError("t values must be >= 0")
    totals = total_masses(model, gamma, base_seed, n_replicas, start=start,
                          threads=threads)
    damped = np.exp(-t_values[:, None] * totals[None, :])
    estimates = damped.mean(axis=1)
    ses = damped.std(axis=1, ddof=1) / math.sqrt(n_replicas) if n_replicas > 1 \
        else np.zeros_like(estimates)
    bound = None
    if exponent is not None:
        sigma = model.measure.total_mass
        with np.errstate(divide="ignore"):
            bound = BOUND_CONSTANT / (sigma * t_values ** exponent.eta)
    return LaplaceReport(t_values, estimates, ses, bound, gamma, n_replicas, base_seed)


def _event_check(model, gamma: float, beta: float, delta: float, s0: float,
                 big_l: float, base_seed: int, n_replicas: int, start: int,
                 threads: int):
    """Frequency of the concentration event: the kernel-weighted mass inside
    the ball B(root, s0^-L) stays below s0^delta * r^(beta - gamma^2)."""
    p = model.measure.positions
    r = s0 ** -big_l
    threshold = s0 ** delta * r ** (beta - gamma * gamma)
    dist = np.abs(p[:, None] - p[None, :])
    np.fill_diagonal(dist, math.inf)
    green = np.log(np.abs(1.0 - np.outer(p, p.conj()))) - np.log(
        np.where(np.isinf(dist), 1.0, dist))
    weight = np.where(dist <= r, np.exp(gamma * gamma * green), 0.0)
    np.fill_diagonal(weight, 0.0)
    indices = np.arange(start, start + n_replicas)
    roots = draw_roots(model, base_seed, indices)
    values = field_matrix(model, base_seed, indices, threads=threads)
    masses = mass_columns(model, values, gamma)
    ball_mass = np.einsum("ki,ik->k", weight[roots], masses)
    freq = float(np.mean(ball_mass <= threshold))
    se = math.sqrt(freq * (1.0 - freq) / n_replicas)
    return freq, se


def verify_bound(model, gamma: float, d: float, beta: float, delta: float,
                 n_replicas: int, base_seed: int, threads: int = 1,
                 l2: bool | None = None) -> BoundReport:
    """Test estimate + 3 SE <= 2^5/(sigma * t^eta) on a 12-points-per-decade
    grid over [t0, 100*t0], plus the concentration-event frequency check.

    Replica blocks are disjoint per stage: Laplace estimates use replicas
    [0, N), the threshold estimate [N, 2N), the event check [2N, 3N).
    """
    report = exponents(gamma, d, beta, delta)
    sigma = model.measure.total_mass
    if l2 is None:
        l2 = beta == d and delta == 1.0 and gamma * gamma < d
    if l2:
        if not (beta == d and delta == 1.0 and gamma * gamma < d):
            raise DomainError(
                "square-integrable branch requires beta = d, delta = 1, gamma < sqrt(d)")
        s0 = BOUND_CONSTANT * d_energy(model.measure, d) / sigma
    else:
        s0 = estimate_s0(model, gamma, beta, delta, n_replicas, base_seed,
                         start=n_replicas, threads=threads)
    if not s0 > 0.0:
        raise DomainError("threshold s0 is zero; measure too degenerate to grade")
    inv_eta = (beta + gamma * gamma * delta) / (beta - gamma * gamma)
    with np.errstate(over="ignore"):
        t0 = float(T0_CONSTANT * np.float64(s0) ** np.float64(inv_eta))
    if not math.isfinite(t0):
        raise DomainError(
            f"threshold t0 = 2^4 * s0^(1/eta) overflows double precision "
            f"(s0 = {s0:.6g}, 1/eta = {inv_eta:.6g}); the grid cannot be formed")
    l2_t0 = t0_l2(model.measure, gamma, d) if gamma * gamma < d else None
    report = replace(report, s0=s0, t0=t0, l2_t0=l2_t0)
    steps = GRID_POINTS_PER_DECADE * GRID_DECADES + 1
    t_grid = t0 * 10.0 ** (np.arange(steps) / GRID_POINTS_PER_DECADE)
    laplace = laplace_transform(model, gamma, t_grid, n_replicas, base_seed,
                                exponent=report, threads=threads)
    points_pass = laplace.estimates + 3.0 * laplace.standard_errors <= laplace.bound_values
    trivial = bool(np.all(laplace.estimates == 0.0))
    freq, se = _event_check(model, gamma, beta, delta, s0, report.L, base_seed,
                            n_replicas, 2 * n_replicas, threads)
    event_pass = freq >= 0.5 - 3.0 * se
    verdict = bool(points_pass.all() and event_pass)
    return BoundReport(report, laplace, points_pass, trivial, freq, se,
                       bool(event_pass), verdict, n_replicas, base_seed)


def small_ball_tail(model, gamma: float, thresholds, n_replicas: int,
                    base_seed: int, threads: int = 1) -> TailReport:
    """Frequencies of {mass < threshold} with binomial standard errors."""
    thresholds = np.atleast_1d(np.asarray(thresholds, dtype=float))
    if np.any(thresholds <= 0):
        raise DomainError("thresholds must be > 0")
    totals = total_masses(model, gamma, base_seed, n_replicas, threads=threads)
    freqs = np.array([np.mean(totals < eps) for eps in thresholds])
    ses = np.sqrt(freqs * (1.0 - freqs) / n_replicas)
    return TailReport(thresholds, freqs, ses, gamma, n_replicas, base_seed)


def fit_loglog_slope(t_values, estimates) -> float:
    """Decay steepness of the Laplace estimate: least-squares slope of
    -log(estimate) against log(t), over the strictly positive entries."""
    t_values = np.asarray(t_values, dtype=float)
    estimates = np.asarray(estimates, dtype=float)
    keep = (t_values > 0) & (estimates > 0)
    if keep.sum() < 2:
        raise DomainError("need at least 2 positive points to fit a slope")
    slope = np.polyfit(np.log(t_values[keep]), -np.log(estimates[keep]), 1)[0]
    return float(slope)
