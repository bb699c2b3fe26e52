"""Wavelet denoising with the smooth (raised-cosine) SCAD thresholding rule."""

from . import bayes, bench, dwt, shrinkage, signalio, sure, testsignals
from .bayes import PenaltyParams, map_estimate, penalty_phi
from .dwt import Family, WaveletDecomposition, forward, inverse, make_filter
from .errors import SmoothScadError
from .shrinkage import Rule, ShrinkageSpec, threshold
from .sure import heuristic_threshold, select_lambda_global, select_lambda_levelwise, sure_total, universal_threshold

__version__ = "0.1.0"

__all__ = [
    "bayes",
    "bench",
    "dwt",
    "shrinkage",
    "signalio",
    "sure",
    "testsignals",
    "Family",
    "PenaltyParams",
    "Rule",
    "ShrinkageSpec",
    "SmoothScadError",
    "WaveletDecomposition",
    "forward",
    "heuristic_threshold",
    "inverse",
    "make_filter",
    "map_estimate",
    "penalty_phi",
    "select_lambda_global",
    "select_lambda_levelwise",
    "sure_total",
    "threshold",
    "universal_threshold",
]
