"""Stein unbiased risk for smooth SCAD and threshold selection.

Sums run over detail coefficients in level-ascending, index-ascending order so
that every risk value is reproducible bit for bit.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from typing import Iterable, Mapping

import numpy as np

from .dwt import WaveletDecomposition
from .errors import DomainError, ParameterError
from .shrinkage import DEFAULT_A, _dh_ssc, _h_ssc, check_params

DEFAULT_GRID = 512
DEFAULT_FLOOR_C = 2.5
JOINT_A_GRID = (2.0, 2.5, 3.0, 3.5)
MAD_SCALE = 0.6745


def _check_sigma(sigma):
    if not (math.isfinite(sigma) and sigma > 0):
        raise ParameterError(f"sigma must be > 0, got {sigma}")


def _terms(d: np.ndarray, lam: float, a: float, sigma: float) -> np.ndarray:
    s2 = sigma * sigma
    ad = np.abs(d)
    out = np.full(ad.shape, s2)
    low = ad <= lam
    out[low] = d[low] ** 2 - s2
    mid = (ad > lam) & (ad < a * lam)
    if np.any(mid):
        h = _h_ssc(d[mid], lam, a)
        out[mid] = h * h + s2 - 2.0 * s2 * _dh_ssc(d[mid], lam, a)
    return out


def sure_term(d, lam: float, a: float = DEFAULT_A, sigma: float = 1.0):
    """Per-coefficient SURE contribution for smooth SCAD."""
    check_params(lam, a, allow_zero=True)
    _check_sigma(sigma)
    t = _terms(np.atleast_1d(np.asarray(d, dtype=float)), lam, a, sigma)
    return float(t[0]) if np.ndim(d) == 0 else t


def sure_levelwise(detail, lam: float, a: float = DEFAULT_A, sigma: float = 1.0) -> float:
    check_params(lam, a, allow_zero=True)
    _check_sigma(sigma)
    d = np.asarray(detail, dtype=float).ravel()
    if d.size == 0:
        return 0.0
    return float(np.sum(_terms(d, lam, a, sigma)))


def sure_total(decomp: WaveletDecomposition, lam: float, a: float = DEFAULT_A, sigma: float = 1.0) -> float:
    """SURE of the smooth SCAD estimate over all detail levels (approximation excluded)."""
    return sure_levelwise(decomp.detail_vector(), lam, a, sigma)


def universal_threshold(n: int, sigma: float = 1.0) -> float:
    if n < 2:
        raise DomainError(f"universal threshold needs n >= 2, got {n}")
    _check_sigma(sigma)
    return sigma * math.sqrt(2.0 * math.log(n))


def shape_factor(a: float) -> float:
    """sqrt((a - 2) / (a - 1)), the heuristic reduction factor relative to the universal threshold."""
    if not a > 2:
        raise DomainError(f"heuristic factor needs a > 2, got {a}")
    return math.sqrt((a - 2.0) / (a - 1.0))


def heuristic_threshold(n: int, sigma: float = 1.0, a: float = DEFAULT_A) -> float:
    return shape_factor(a) * universal_threshold(n, sigma)


def oracle_scale_threshold(n: int, sigma: float, gamma: float) -> float:
    """Bias/variance balancing scale for a Lipschitz-gamma signal."""
    if not gamma > 0:
        raise DomainError(f"gamma must be > 0, got {gamma}")
    if n < 2:
        raise DomainError(f"n must be >= 2, got {n}")
    _check_sigma(sigma)
    return sigma * math.sqrt(4.0 * gamma / (2.0 * gamma + 1.0) * math.log(n))


def aligned_shape(lam: float, n: int, sigma: float = 1.0, bounds: tuple[float, float] = (1.5, 4.0)) -> float:
    """Shape a that puts the end of the transition zone, a*lam, at the universal threshold."""
    if not lam > 0:
        raise ParameterError(f"threshold must be > 0, got {lam}")
    lo, hi = bounds
    return min(hi, max(lo, universal_threshold(n, sigma) / lam))


def estimate_sigma_mad(finest_details) -> float:
    d = np.asarray(finest_details, dtype=float).ravel()
    if d.size == 0:
        raise DomainError("cannot estimate sigma from an empty sequence")
    return float(np.median(np.abs(d)) / MAD_SCALE)


@dataclass
class SureScan:
    grid: np.ndarray
    risks: np.ndarray
    minimizer: float
    min_risk: float
    ties: int
    a: float = DEFAULT_A
    sigma: float = 1.0

    def to_record(self) -> dict:
        return {
            "minimizer": self.minimizer,
            "min_risk": self.min_risk,
            "ties": self.ties,
            "a": self.a,
            "sigma": self.sigma,
            "lambda_max": float(self.grid[-1]),
            "grid_size": int(len(self.grid)),
            "grid": [float(x) for x in self.grid],
            "risks": [float(x) for x in self.risks],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_record(), indent=2)

    def to_csv(self) -> str:
        lines = ["lambda,sure_risk"]
        lines += [f"{lam!r},{r!r}" for lam, r in zip(self.grid.tolist(), self.risks.tolist())]
        return "\n".join(lines) + "\n"


def lambda_grid(upper: float, grid_size: int = DEFAULT_GRID) -> np.ndarray:
    if grid_size < 2:
        raise ParameterError(f"grid_size must be >= 2, got {grid_size}")
    return np.linspace(0.0, upper, grid_size)


def _argmin_smallest(values: np.ndarray) -> tuple[int, int]:
    best = values.min()
    hits = np.flatnonzero(values == best)
    return int(hits[0]), int(len(hits))


def scan_detail(d: np.ndarray, upper: float, a: float, sigma: float, grid_size: int = DEFAULT_GRID) -> SureScan:
    grid = lambda_grid(upper, grid_size)
    risks = np.array([sure_levelwise(d, lam, a, sigma) for lam in grid])
    i, ties = _argmin_smallest(risks)
    return SureScan(grid, risks, float(grid[i]), float(risks[i]), ties, a, sigma)


def select_lambda_global(
    decomp: WaveletDecomposition,
    a: float = DEFAULT_A,
    sigma: float = 1.0,
    grid_size: int = DEFAULT_GRID,
) -> SureScan:
    """Minimize SURE over a uniform grid on [0, lambda_U]; ties go to the smallest lambda."""
    check_params(1.0, a)
    _check_sigma(sigma)
    return scan_detail(decomp.detail_vector(), universal_threshold(decomp.n, sigma), a, sigma, grid_size)


def select_shape_and_lambda(
    decomp: WaveletDecomposition,
    sigma: float = 1.0,
    a_grid: Iterable[float] = JOINT_A_GRID,
    grid_size: int = DEFAULT_GRID,
) -> SureScan:
    """Joint search: best lambda for each candidate a, then the pair with the smallest SURE.

    Ties across a keep the earlier candidate.
    """
    best = None
    for a in a_grid:
        scan = select_lambda_global(decomp, a, sigma, grid_size)
        if best is None or scan.min_risk < best.min_risk:
            best = scan
    if best is None:
        raise ParameterError("a_grid is empty")
    return best


@dataclass
class LevelThresholds:
    per_level: dict[int, float]
    floor_c: float
    a_per_level: dict[int, float]
    raw: dict[int, float] = field(default_factory=dict)
    lambda_u: float = math.nan

    def to_record(self) -> dict:
        rec = asdict(self)
        for key in ("per_level", "a_per_level", "raw"):
            rec[key] = {str(k): v for k, v in rec[key].items()}
        return rec


def select_lambda_levelwise(
    decomp: WaveletDecomposition,
    a_per_level: float | Mapping[int, float] = DEFAULT_A,
    sigma: float = 1.0,
    grid_size: int = DEFAULT_GRID,
    floor_c: float = DEFAULT_FLOOR_C,
) -> LevelThresholds:
    """Per-level SURE minimization clamped to [min(lambda_U, c*sigma), lambda_U].

    lambda_U is computed from the full signal length N, not from 2**j.
    """
    if not (math.isfinite(floor_c) and floor_c >= 0):
        raise ParameterError(f"floor constant must be >= 0, got {floor_c}")
    _check_sigma(sigma)
    lam_u = universal_threshold(decomp.n, sigma)
    shapes = {
        j: float(a_per_level[j] if isinstance(a_per_level, Mapping) else a_per_level)
        for j in decomp.levels
    }
    per_level, raw = {}, {}
    for j in decomp.levels:
        check_params(1.0, shapes[j])
        scan = scan_detail(decomp.details[j], lam_u, shapes[j], sigma, grid_size)
        raw[j] = scan.minimizer
        per_level[j] = min(lam_u, max(scan.minimizer, floor_c * sigma))
    return LevelThresholds(per_level, float(floor_c), shapes, raw, lam_u)


def sure_multilevel(decomp: WaveletDecomposition, lambdas: Mapping[int, float], a_per_level, sigma: float = 1.0) -> float:
    total = 0.0
    for j in decomp.levels:
        a = a_per_level[j] if isinstance(a_per_level, Mapping) else a_per_level
        total += sure_levelwise(decomp.details[j], lambdas[j], a, sigma)
    return total


def finest_details(decomp: WaveletDecomposition) -> np.ndarray:
    return decomp.details[decomp.J - 1]

