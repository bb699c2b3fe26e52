"""Orthogonal periodized discrete wavelet transform.

Alignment convention, identical in analysis and synthesis (filter centred on
the sample pair (2k, 2k+1), offset o = 1 - len(g) // 2)::

    approx[k] = sum_n g[n] * x[(2k + n + o) mod N]
    detail[k] = sum_n q[n] * x[(2k + n + o) mod N],   q[n] = (-1)**n * g[len(g) - 1 - n]

Both rows are orthonormal in R^N, so the synthesis is the transpose of the
analysis and white noise stays white with the same variance on every level.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DepthError, ShapeError, UnsupportedFamilyError


class Family(str, enum.Enum):
    HAAR = "haar"
    DB2 = "db2"
    DB3 = "db3"
    SYM4 = "sym4"


# Scaling (lowpass) taps, synthesis orientation.  Published tables; Symmlet 4 was
# polished with a high-precision Newton step on the QMF and moment equations,
# since the common 16-digit table misses them by ~1e-11.
_LOWPASS_TAPS: dict[Family, tuple[float, ...]] = {
    Family.HAAR: (0.7071067811865476, 0.7071067811865476),
    Family.DB2: (
        0.48296291314453416,
        0.8365163037378079,
        0.2241438680420134,
        -0.12940952255126037,
    ),
    Family.DB3: (
        0.33267055295008263,
        0.8068915093110925,
        0.45987750211849154,
        -0.13501102001025458,
        -0.08544127388202666,
        0.03522629188570953,
    ),
    Family.SYM4: (
        0.032223100604051466,
        -0.012603967262031304,
        -0.09921954357663353,
        0.29785779560530606,
        0.8037387518051321,
        0.497618667632775,
        -0.029635527646002493,
        -0.07576571478950221,
    ),
}

_ALIASES = {
    "haar": Family.HAAR,
    "db1": Family.HAAR,
    "db2": Family.DB2,
    "daubechies2": Family.DB2,
    "db3": Family.DB3,
    "daubechies3": Family.DB3,
    "sym4": Family.SYM4,
    "symmlet4": Family.SYM4,
}


@dataclass(frozen=True)
class FilterPair:
    family: Family
    lowpass: np.ndarray
    highpass: np.ndarray

    def __len__(self) -> int:
        return len(self.lowpass)


def qmf_residuals(lowpass) -> tuple[float, float]:
    """Return (|sum - sqrt2|, max even-shift orthonormality error) for a lowpass filter."""
    g = np.asarray(lowpass, dtype=float)
    sum_err = abs(g.sum() - math.sqrt(2.0))
    n = len(g)
    worst = 0.0
    for k in range(0, (n + 1) // 2):
        ip = float(np.dot(g[2 * k:], g[: n - 2 * k]))
        worst = max(worst, abs(ip - (1.0 if k == 0 else 0.0)))
    return sum_err, worst


def parse_family(family) -> Family:
    if isinstance(family, Family):
        return family
    key = str(family).strip().lower().replace("-", "").replace("_", "")
    try:
        return _ALIASES[key]
    except KeyError:
        raise UnsupportedFamilyError(
            f"unsupported wavelet family {family!r}; expected one of "
            f"{[f.value for f in Family]}"
        ) from None


def make_filter(family) -> FilterPair:
    fam = parse_family(family)
    g = np.array(_LOWPASS_TAPS[fam], dtype=float)
    n = np.arange(len(g))
    q = np.where(n % 2 == 0, 1.0, -1.0) * g[::-1]
    g.setflags(write=False)
    q.setflags(write=False)
    return FilterPair(fam, g, q)


def _validate_tables() -> None:
    for fam, taps in _LOWPASS_TAPS.items():
        s, o = qmf_residuals(taps)
        if s > 1e-10 or o > 1e-10:
            raise RuntimeError(f"filter table for {fam.value} fails QMF check ({s:.1e}, {o:.1e})")


_validate_tables()


@dataclass
class WaveletDecomposition:
    """Coarsest approximation plus detail coefficients keyed by level j."""

    approx: np.ndarray
    details: dict[int, np.ndarray]
    J: int
    L: int
    family: Family
    meta: dict = field(default_factory=dict)

    @property
    def levels(self) -> list[int]:
        return list(range(self.J - self.L, self.J))

    @property
    def n(self) -> int:
        return 2**self.J

    def detail_vector(self) -> np.ndarray:
        """Details concatenated by level ascending, index ascending."""
        return np.concatenate([self.details[j] for j in self.levels])

    def coefficient_vector(self) -> np.ndarray:
        return np.concatenate([self.approx, self.detail_vector()])

    def with_detail_vector(self, vec) -> "WaveletDecomposition":
        vec = np.asarray(vec, dtype=float)
        out, pos = {}, 0
        for j in self.levels:
            out[j] = vec[pos : pos + 2**j].copy()
            pos += 2**j
        if pos != len(vec):
            raise ShapeError(f"detail vector has {len(vec)} entries, expected {pos}")
        return WaveletDecomposition(self.approx.copy(), out, self.J, self.L, self.family)

    def copy(self) -> "WaveletDecomposition":
        return WaveletDecomposition(
            self.approx.copy(),
            {j: d.copy() for j, d in self.details.items()},
            self.J,
            self.L,
            self.family,
        )


def log2_length(n: int) -> int:
    if n < 1 or n & (n - 1):
        raise ShapeError(f"signal length {n} is not a power of two")
    return n.bit_length() - 1


def default_depth(n: int) -> int:
    """J - 4 (coarsest approximation of 16 samples), at least 1."""
    return max(1, log2_length(n) - 4)


def max_depth(n: int, filt) -> int:
    """Deepest level whose input is still at least as long as the filter support.

    floor(log2(N / (len(filter) - 1))), clipped to [1, J].
    """
    filt = filt if isinstance(filt, FilterPair) else make_filter(filt)
    J = log2_length(n)
    span = len(filt) - 1
    L = int(math.floor(math.log2(n / span))) if span > 1 else J
    return min(max(L, 1), J)


def _offset(taps: int) -> int:
    return 1 - taps // 2


def _index(n: int, taps: int) -> np.ndarray:
    k = np.arange(n // 2)[:, None]
    return (2 * k + np.arange(taps)[None, :] + _offset(taps)) % n


def analysis_step(x: np.ndarray, filt: FilterPair) -> tuple[np.ndarray, np.ndarray]:
    idx = _index(len(x), len(filt))
    xs = x[idx]
    return xs @ filt.lowpass, xs @ filt.highpass


def synthesis_step(approx: np.ndarray, detail: np.ndarray, filt: FilterPair) -> np.ndarray:
    half = len(approx)
    if len(detail) != half:
        raise ShapeError(f"approx/detail lengths differ ({half} vs {len(detail)})")
    n = 2 * half
    out = np.zeros(n)
    k2 = 2 * np.arange(half) + _offset(len(filt))
    # for a fixed tap the target indices are distinct, so fancy-index += is safe
    for t in range(len(filt)):
        out[(k2 + t) % n] += approx * filt.lowpass[t] + detail * filt.highpass[t]
    return out


def forward(signal, filt, depth: int | None = None) -> WaveletDecomposition:
    filt = filt if isinstance(filt, FilterPair) else make_filter(filt)
    x = np.asarray(signal, dtype=float)
    if x.ndim != 1:
        raise ShapeError("signal must be one-dimensional")
    J = log2_length(len(x))
    L = default_depth(len(x)) if depth is None else int(depth)
    if L < 1:
        raise DepthError(f"depth must be >= 1, got {L}")
    if L > J:
        raise DepthError(f"depth {L} exceeds log2(N) = {J}")
    details = {}
    a = x
    for j in range(J - 1, J - L - 1, -1):
        a, d = analysis_step(a, filt)
        details[j] = d
    return WaveletDecomposition(a, dict(sorted(details.items())), J, L, filt.family)


def inverse(decomp: WaveletDecomposition, filt=None) -> np.ndarray:
    filt = make_filter(decomp.family) if filt is None else filt
    filt = filt if isinstance(filt, FilterPair) else make_filter(filt)
    if filt.family != decomp.family:
        raise ShapeError(
            f"decomposition was built with {decomp.family.value}, not {filt.family.value}"
        )
    a = np.asarray(decomp.approx, dtype=float)
    if len(a) != 2 ** (decomp.J - decomp.L):
        raise ShapeError(f"approximation has {len(a)} entries, expected {2 ** (decomp.J - decomp.L)}")
    for j in decomp.levels:
        d = np.asarray(decomp.details.get(j, ()), dtype=float)
        if len(d) != 2**j:
            raise ShapeError(f"level {j} holds {len(d)} coefficients, expected {2**j}")
        a = synthesis_step(a, d, filt)
    return a
