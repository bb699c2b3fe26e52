"""Thresholding rules and their shrink-amount generators.

Every rule is written as ``rho(d) = 0`` for ``|d| <= lam`` and
``rho(d) = d - h(d)`` above it.  All functions accept scalars or arrays and
return the same kind.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .dwt import WaveletDecomposition
from .errors import ConfigurationError, ParameterError

DEFAULT_A = 3.7


class Rule(str, enum.Enum):
    HARD = "hard"
    SOFT = "soft"
    SCAD = "scad"  # Fan-Li piecewise rule
    SCAD_RAMP = "scad-ramp"
    SMOOTH_SCAD = "smooth-scad"


_RULE_ALIASES = {
    "hard": Rule.HARD,
    "soft": Rule.SOFT,
    "scad": Rule.SCAD,
    "scadfanli": Rule.SCAD,
    "scadramp": Rule.SCAD_RAMP,
    "scadlinearramp": Rule.SCAD_RAMP,
    "smoothscad": Rule.SMOOTH_SCAD,
}


def parse_rule(rule) -> Rule:
    if isinstance(rule, Rule):
        return rule
    key = str(rule).strip().lower().replace("-", "").replace("_", "")
    try:
        return _RULE_ALIASES[key]
    except KeyError:
        raise ParameterError(
            f"unknown rule {rule!r}; expected one of {[r.value for r in Rule]}"
        ) from None


def check_params(lam, a, rule: Rule = Rule.SMOOTH_SCAD, allow_zero: bool = False) -> None:
    lam_arr = np.asarray(lam, dtype=float)
    if not np.all(np.isfinite(lam_arr)) or np.any(lam_arr < 0 if allow_zero else lam_arr <= 0):
        raise ParameterError(f"threshold must be {'>= 0' if allow_zero else '> 0'}, got {lam}")
    if rule in (Rule.SMOOTH_SCAD, Rule.SCAD_RAMP) and not a > 1:
        raise ParameterError(f"shape parameter a must exceed 1, got {a}")
    if rule is Rule.SCAD and not a > 2:
        raise ParameterError(f"Fan-Li SCAD needs a > 2, got {a}")


def _out(x, like):
    return float(x) if np.ndim(like) == 0 else x


# --- smooth SCAD kernels (lam >= 0 allowed; lam == 0 degenerates to identity) ---
# lam may be an array broadcastable against d, which lets a whole threshold grid
# be evaluated in one call.

def _h_ssc(d, lam, a):
    d, lam = np.broadcast_arrays(np.asarray(d, dtype=float), np.asarray(lam, dtype=float))
    ad = np.abs(d)
    h = np.where((ad > 0) & (ad <= lam), lam, 0.0)
    mid = (ad > lam) & (ad < a * lam)
    if np.any(mid):
        s = (ad[mid] - lam[mid]) / ((a - 1.0) * lam[mid])
        h[mid] = lam[mid] * np.cos(0.5 * np.pi * s) ** 2
    return np.sign(d) * h


def _dh_ssc(d, lam, a):
    d, lam = np.broadcast_arrays(np.asarray(d, dtype=float), np.asarray(lam, dtype=float))
    ad = np.abs(d)
    out = np.zeros(ad.shape)
    mid = (ad > lam) & (ad < a * lam)
    if np.any(mid):
        s = (ad[mid] - lam[mid]) / ((a - 1.0) * lam[mid])
        out[mid] = -(np.pi / (2.0 * (a - 1.0))) * np.sin(np.pi * s)
    return out


def h_smooth_scad(d, lam: float, a: float = DEFAULT_A):
    """Raised-cosine shrink amount; odd in d, h(0) = 0."""
    check_params(lam, a)
    return _out(_h_ssc(d, lam, a), d)


def dh_dd_smooth_scad(d, lam: float, a: float = DEFAULT_A):
    """d h / d d.  Zero on the constant branches and at the junctions |d| in {lam, a*lam}."""
    check_params(lam, a)
    return _out(_dh_ssc(d, lam, a), d)


# --- rho for each rule ---

def _rho(rule: Rule, d, lam, a):
    d, lam = np.broadcast_arrays(np.asarray(d, dtype=float), np.asarray(lam, dtype=float))
    ad = np.abs(d)
    sg = np.sign(d)
    if rule is Rule.HARD:
        return np.where(ad > lam, d, 0.0)
    if rule is Rule.SOFT:
        return sg * np.maximum(ad - lam, 0.0)
    if rule is Rule.SMOOTH_SCAD:
        return np.where(ad <= lam, 0.0, d - _h_ssc(d, lam, a))
    if rule is Rule.SCAD_RAMP:
        out = np.where(ad >= a * lam, d, 0.0)
        mid = (ad > lam) & (ad < a * lam)
        out[mid] = d[mid] - sg[mid] * (a * lam[mid] - ad[mid]) / (a - 1.0)
        return out
    if rule is Rule.SCAD:
        out = np.array(sg * np.maximum(ad - lam, 0.0))
        mid = (ad > 2.0 * lam) & (ad <= a * lam)
        out[mid] = ((a - 1.0) * d[mid] - sg[mid] * a * lam[mid]) / (a - 2.0)
        top = ad > a * lam
        out[top] = d[top]
        return out
    raise ParameterError(f"unknown rule {rule!r}")


def threshold_grid(d, lams, a: float = DEFAULT_A, rule=Rule.SMOOTH_SCAD) -> np.ndarray:
    """rho for every (lam, d) pair: returns shape (len(lams), len(d))."""
    rule = parse_rule(rule)
    lams = np.asarray(lams, dtype=float)
    check_params(lams, a, rule, allow_zero=True)
    return _rho(rule, np.asarray(d, dtype=float)[None, :], lams[:, None], a)


def threshold(d, lam, a: float = DEFAULT_A, rule=Rule.SMOOTH_SCAD):
    """Apply one rule with threshold ``lam`` (lam = 0 allowed: identity for every rule)."""
    rule = parse_rule(rule)
    check_params(lam, a, rule, allow_zero=True)
    return _out(_rho(rule, d, lam, a), d)


def generator(d, lam, a: float = DEFAULT_A, rule=Rule.SMOOTH_SCAD):
    """Shrink amount h and its d-derivative for any rule.

    h is lam*sign(d) on 0 < |d| <= lam and d - rho(d) above; for smooth SCAD
    this is exactly the raised-cosine generator.
    """
    rule = parse_rule(rule)
    check_params(lam, a, rule)
    d_arr = np.asarray(d, dtype=float)
    ad = np.abs(d_arr)
    if rule is Rule.SMOOTH_SCAD:
        return _out(_h_ssc(d_arr, lam, a), d), _out(_dh_ssc(d_arr, lam, a), d)
    h = np.where(ad <= lam, lam * np.sign(d_arr), d_arr - _rho(rule, d_arr, lam, a))
    dh = np.zeros_like(ad)
    if rule is Rule.SCAD_RAMP:
        dh[(ad > lam) & (ad < a * lam)] = -1.0 / (a - 1.0)
    elif rule is Rule.SCAD:
        dh[(ad > 2.0 * lam) & (ad < a * lam)] = -1.0 / (a - 2.0)
    return _out(h, d), _out(dh, d)


@dataclass(frozen=True)
class ShrinkageSpec:
    """Rule plus parameters; ``lam`` is a float or a mapping level -> float."""

    rule: Rule
    lam: float | Mapping[int, float]
    a: float | Mapping[int, float] = DEFAULT_A
    sigma: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "rule", parse_rule(self.rule))
        if not self.sigma > 0:
            raise ParameterError(f"sigma must be > 0, got {self.sigma}")
        lams = self.lam.values() if isinstance(self.lam, Mapping) else [self.lam]
        shapes = self.a.values() if isinstance(self.a, Mapping) else [self.a]
        for lam in lams:
            if not (math.isfinite(lam) and lam > 0):
                raise ParameterError(f"threshold must be > 0, got {lam}")
        for a in shapes:
            check_params(1.0, a, self.rule)

    def lambda_at(self, level: int | None) -> float:
        if isinstance(self.lam, Mapping):
            if level not in self.lam:
                raise ConfigurationError(f"no threshold configured for level {level}")
            return float(self.lam[level])
        return float(self.lam)

    def a_at(self, level: int | None) -> float:
        if isinstance(self.a, Mapping):
            if level not in self.a:
                raise ConfigurationError(f"no shape parameter configured for level {level}")
            return float(self.a[level])
        return float(self.a)


def apply(spec: ShrinkageSpec, d, level: int | None = None):
    return _out(_rho(spec.rule, d, spec.lambda_at(level), spec.a_at(level)), d)


def apply_to_decomposition(decomp: WaveletDecomposition, spec: ShrinkageSpec) -> WaveletDecomposition:
    out = decomp.copy()
    for j in decomp.levels:
        out.details[j] = np.asarray(apply(spec, decomp.details[j], j), dtype=float)
    return out


@dataclass(frozen=True)
class ShrinkCurveSample:
    d: float
    rho: float
    h: float
    dh_dd: float


def shrink_curve(d_grid, lam: float = 1.0, a: float = DEFAULT_A, rule=Rule.SMOOTH_SCAD) -> list[ShrinkCurveSample]:
    d_grid = np.asarray(d_grid, dtype=float)
    rho = threshold(d_grid, lam, a, rule)
    h, dh = generator(d_grid, lam, a, rule)
    return [ShrinkCurveSample(*map(float, row)) for row in zip(d_grid, rho, h, dh)]
