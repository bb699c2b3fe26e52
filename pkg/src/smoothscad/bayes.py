"""Penalty, improper prior and posterior mode induced by the smooth SCAD generator."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .errors import DomainError, NumericalError, ParameterError
from .shrinkage import DEFAULT_A, _h_ssc, _rho, Rule

BISECT_TOL = 1e-12


@dataclass(frozen=True)
class PenaltyParams:
    lam: float
    a: float = DEFAULT_A
    sigma: float = 1.0

    def __post_init__(self):
        if not (math.isfinite(self.lam) and self.lam > 0):
            raise ParameterError(f"threshold must be > 0, got {self.lam}")
        if not self.a > 1:
            raise ParameterError(f"shape parameter a must exceed 1, got {self.a}")
        if not (math.isfinite(self.sigma) and self.sigma > 0):
            raise ParameterError(f"sigma must be > 0, got {self.sigma}")


@dataclass(frozen=True)
class PosteriorPoint:
    theta: float
    neg_log_post: float
    d: float


def _phi(r: np.ndarray, p: PenaltyParams) -> np.ndarray:
    lam, a = p.lam, p.a
    out = np.where(r <= lam, lam * r, 0.5 * (a + 1.0) * lam * lam)
    mid = (r > lam) & (r < a * lam)
    if np.any(mid):
        t = 0.5 * np.pi * (r[mid] - lam) / ((a - 1.0) * lam)
        out[mid] = lam * lam + (a - 1.0) * lam * lam / np.pi * (t + 0.5 * np.sin(2.0 * t))
    return out


def penalty_phi(r, params: PenaltyParams):
    """Closed-form integral of h from 0 to r (r >= 0)."""
    arr = np.asarray(r, dtype=float)
    if np.any(arr < 0) or np.any(np.isnan(arr)):
        raise DomainError("penalty argument must be >= 0 (pass |theta|)")
    out = _phi(np.atleast_1d(arr), params)
    return float(out[0]) if arr.ndim == 0 else out.reshape(arr.shape)


def penalty_phi_numeric(r: float, params: PenaltyParams) -> float:
    """Adaptive quadrature of the generator; independent check on the closed form."""
    if not r >= 0:
        raise DomainError("penalty argument must be >= 0 (pass |theta|)")
    if r == 0:
        return 0.0
    lam, a = params.lam, params.a

    def f(u):
        return float(_h_ssc(u, lam, a))

    # split at the kinks so each piece is smooth
    knots = [0.0] + [k for k in (lam, a * lam) if k < r] + [r]
    total = 0.0
    for lo, hi in zip(knots[:-1], knots[1:]):
        if hi - lo < 1e-9 * lam:
            # midpoint rule; error below |h'| * width^2, and quad dislikes subnormal widths
            total += f(0.5 * (lo + hi)) * (hi - lo)
            continue
        val, _ = integrate.quad(f, lo, hi, epsabs=1e-12, epsrel=1e-12, limit=200)
        total += val
    return total


def neg_log_posterior(theta, d: float, params: PenaltyParams):
    """(d - theta)^2 / (2 sigma^2) + Phi(|theta|) / sigma^2, additive constant 0."""
    th = np.asarray(theta, dtype=float)
    s2 = params.sigma**2
    val = (d - th) ** 2 / (2.0 * s2) + penalty_phi(np.abs(th), params) / s2
    return float(val) if th.ndim == 0 else val


def prior_density_unnormalized(theta, params: PenaltyParams):
    th = np.asarray(theta, dtype=float)
    val = np.exp(-penalty_phi(np.abs(th), params) / params.sigma**2)
    return float(val) if th.ndim == 0 else val


def mode_departure_threshold(params: PenaltyParams) -> float:
    """|d| at which the posterior mode leaves zero; equals lambda for every a and sigma."""
    return float(params.lam)


def right_derivative_at_zero(d: float, params: PenaltyParams) -> float:
    return (params.lam - d) / params.sigma**2


def _bisect(fn, lo: float, hi: float, tol: float = BISECT_TOL) -> float:
    flo, fhi = fn(lo), fn(hi)
    if flo == 0:
        return lo
    if fhi == 0:
        return hi
    if flo * fhi > 0:
        raise NumericalError(f"root not bracketed on [{lo}, {hi}] (f={flo}, {fhi})")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        fm = fn(mid)
        if fm == 0 or hi - lo < tol:
            return mid
        if (fm < 0) == (flo < 0):
            lo, flo = mid, fm
        else:
            hi = mid
    raise NumericalError(f"bisection did not reach tolerance on [{lo}, {hi}]")


def _transition_pieces(params: PenaltyParams) -> list[tuple[float, float]]:
    """Monotone pieces of theta -> theta + h(theta) on (lam, a*lam).

    Its slope is 1 - c*sin(pi*s) with c = pi / (2(a-1)); for c > 1 the slope is
    negative for s in (s1, 1 - s1), s1 = arcsin(1/c)/pi.
    """
    lam, a = params.lam, params.a
    c = math.pi / (2.0 * (a - 1.0))
    if c <= 1.0:
        return [(lam, a * lam)]
    s1 = math.asin(1.0 / c) / math.pi
    cuts = [0.0, s1, 1.0 - s1, 1.0]
    return [(lam + (a - 1.0) * lam * lo, lam + (a - 1.0) * lam * hi) for lo, hi in zip(cuts[:-1], cuts[1:])]


def stationary_points(d: float, params: PenaltyParams) -> list[float]:
    """All theta >= 0 with theta + h(theta) = |d|, plus theta = 0 when |d| <= lam.

    For |d| > lam the right derivative at 0 is (lam - |d|) / sigma^2 < 0, so 0 is
    never a minimizer there; leaving it out also avoids float ties as |d| -> lam+.
    """
    lam, a = params.lam, params.a
    r = abs(d)
    cands = [0.0] if r <= lam else []
    if lam < r <= 2.0 * lam:
        cands.append(r - lam)
    if r >= a * lam:
        cands.append(r)

    def g(t):
        return t + float(_h_ssc(t, lam, a)) - r

    for lo, hi in _transition_pieces(params):
        # closed endpoints are evaluated through the cosine formula so the bracket is honest
        glo = lo + lam * math.cos(0.5 * math.pi * (lo - lam) / ((a - 1.0) * lam)) ** 2 - r
        ghi = hi + lam * math.cos(0.5 * math.pi * (hi - lam) / ((a - 1.0) * lam)) ** 2 - r
        if glo * ghi < 0:
            root = _bisect(g, lo, hi)
            # at |d| = a*lam the last piece can return theta = |d| up to rounding
            if r >= a * lam and abs(root - r) <= 4.0 * BISECT_TOL * max(1.0, r):
                continue
            cands.append(root)
    return cands


def map_estimate(d: float, params: PenaltyParams) -> float:
    """Global maximizer of the posterior for one observed coefficient."""
    r = abs(d)
    if r <= params.lam:
        return 0.0
    cands = stationary_points(d, params)
    vals = [neg_log_posterior(t, r, params) for t in cands]
    best = min(range(len(cands)), key=lambda i: (vals[i], cands[i]))
    theta = cands[best]
    if not math.isfinite(vals[best]):
        raise NumericalError(f"non-finite posterior at candidates {cands} for d={d}")
    if theta == r:
        return float(d)
    return math.copysign(theta, d) if theta else 0.0


def map_vs_rule_discrepancy(params: PenaltyParams, d_grid) -> float:
    """max |MAP(d) - rho_ssc(d)| over a grid; nonzero on the transition zone."""
    d_grid = np.asarray(d_grid, dtype=float)
    maps = np.array([map_estimate(float(x), params) for x in d_grid])
    rho = _rho(Rule.SMOOTH_SCAD, d_grid, params.lam, params.a)
    return float(np.max(np.abs(maps - rho))) if d_grid.size else 0.0


def posterior_curve(theta_grid, d: float, params: PenaltyParams) -> list[PosteriorPoint]:
    theta_grid = np.asarray(theta_grid, dtype=float)
    vals = neg_log_posterior(theta_grid, d, params)
    return [PosteriorPoint(float(t), float(v), float(d)) for t, v in zip(theta_grid, vals)]
