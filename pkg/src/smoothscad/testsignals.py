"""Donoho-Johnstone test functions, SNR rescaling and seeded noise.

Samples are taken on t_i = i / n, i = 0..n-1.  Noise comes from numpy's PCG64
bit generator seeded with the replication seed; normals use numpy's ziggurat
``standard_normal``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .dwt import log2_length
from .errors import DomainError, ParameterError, ShapeError


class SignalName(str, enum.Enum):
    DOPPLER = "doppler"
    BLOCKS = "blocks"
    HEAVISINE = "heavisine"
    BUMPS = "bumps"


_KNOTS = np.array([0.10, 0.13, 0.15, 0.23, 0.25, 0.40, 0.44, 0.65, 0.76, 0.78, 0.81])
_BLOCK_HEIGHTS = np.array([4.0, -5.0, 3.0, -4.0, 5.0, -4.2, 2.1, 4.3, -3.1, 2.1, -4.2])
_BUMP_HEIGHTS = np.array([4.0, 5.0, 3.0, 4.0, 5.0, 4.2, 2.1, 4.3, 3.1, 5.1, 4.2])
_BUMP_WIDTHS = np.array([0.005, 0.005, 0.006, 0.01, 0.01, 0.03, 0.01, 0.01, 0.005, 0.008, 0.005])


def parse_signal(name) -> SignalName:
    if isinstance(name, SignalName):
        return name
    try:
        return SignalName(str(name).strip().lower())
    except ValueError:
        raise ParameterError(
            f"unknown test signal {name!r}; expected one of {[s.value for s in SignalName]}"
        ) from None


def evaluate(name, t) -> np.ndarray:
    """Evaluate a test function at arbitrary points t in [0, 1]."""
    name = parse_signal(name)
    t = np.asarray(t, dtype=float)
    if name is SignalName.DOPPLER:
        return np.sqrt(t * (1.0 - t)) * np.sin(2.1 * np.pi / (t + 0.05))
    if name is SignalName.HEAVISINE:
        return 4.0 * np.sin(4.0 * np.pi * t) - np.sign(t - 0.3) - np.sign(0.72 - t)
    if name is SignalName.BLOCKS:
        # right-continuous unit steps: each knot opens a new plateau
        steps = (t[..., None] >= _KNOTS).astype(float)
        return steps @ _BLOCK_HEIGHTS
    kern = (1.0 + np.abs((t[..., None] - _KNOTS) / _BUMP_WIDTHS)) ** -4
    return kern @ _BUMP_HEIGHTS


def grid(n: int) -> np.ndarray:
    return np.arange(n) / n


@dataclass(frozen=True)
class CleanSignal:
    name: SignalName
    samples: np.ndarray
    grid: str = "i/n"

    def __len__(self) -> int:
        return len(self.samples)


@dataclass(frozen=True)
class NoisyRealization:
    clean: CleanSignal
    noisy: np.ndarray
    sigma: float
    snr: float
    seed: int


def generate(name, n: int) -> CleanSignal:
    J = log2_length(n)
    if J < 4:
        raise ShapeError(f"test signals need n >= 16, got {n}")
    return CleanSignal(parse_signal(name), evaluate(name, grid(n)))


def rescale_to_snr(signal: CleanSignal, snr: float, sigma: float = 1.0) -> CleanSignal:
    """Scale so that var(samples) / sigma^2 = snr (population variance)."""
    if not snr > 0:
        raise ParameterError(f"snr must be > 0, got {snr}")
    if not sigma > 0:
        raise ParameterError(f"sigma must be > 0, got {sigma}")
    var = float(np.var(signal.samples))
    if var == 0:
        raise DomainError("cannot rescale a constant signal")
    factor = np.sqrt(snr * sigma**2 / var)
    return CleanSignal(signal.name, signal.samples * factor, signal.grid)


def noise(n: int, sigma: float, seed: int) -> np.ndarray:
    rng = np.random.Generator(np.random.PCG64(seed))
    return sigma * rng.standard_normal(n)


def add_noise(clean: CleanSignal, sigma: float, seed: int, snr: float = float("nan")) -> NoisyRealization:
    if not sigma > 0:
        raise ParameterError(f"sigma must be > 0, got {sigma}")
    noisy = clean.samples + noise(len(clean), sigma, seed)
    return NoisyRealization(clean, noisy, float(sigma), float(snr), int(seed))


def realization(name, n: int, snr: float, sigma: float, seed: int) -> NoisyRealization:
    """generate -> rescale_to_snr -> add_noise, a pure function of its arguments."""
    clean = rescale_to_snr(generate(name, n), snr, sigma)
    return add_noise(clean, sigma, seed, snr)


def to_csv(real: NoisyRealization) -> str:
    n = len(real.noisy)
    t = grid(n).tolist()
    lines = ["index,t,clean,noisy"]
    lines += [
        f"{i},{t[i]!r},{c!r},{y!r}"
        for i, (c, y) in enumerate(zip(real.clean.samples.tolist(), real.noisy.tolist()))
    ]
    return "\n".join(lines) + "\n"
