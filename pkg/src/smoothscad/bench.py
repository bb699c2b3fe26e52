"""Monte Carlo denoising study: AMSE and spread of MSE per (signal, SNR, rule).

Replication ``i`` draws its noise from seed ``base_seed + i``, so every rule
and every signal sees the same noise stream for a given index, and results do
not depend on how replications are spread over workers.

MSEs are computed in the coefficient domain.  The transform is orthogonal, so
``||inverse(rho(d)) - f||^2 == ||rho(d) - theta||^2`` up to rounding, and the
whole oracle threshold grid can be scored without reconstructing.
"""

from __future__ import annotations

import csv
import enum
import io
import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Any

import numpy as np

from . import dwt, sure, testsignals
from .errors import ConfigurationError, ShapeError, SmoothScadError
from .shrinkage import DEFAULT_A, Rule, ShrinkageSpec, _rho, apply_to_decomposition, parse_rule, threshold_grid

DEFAULT_WAVELETS = {
    "doppler": "sym4",
    "heavisine": "sym4",
    "blocks": "haar",
    "bumps": "db3",
}
DEFAULT_SIGNALS = ("doppler", "blocks", "heavisine", "bumps")
DEFAULT_ORACLE_GRID = 256
DEFAULT_SEED = 20250101


class LambdaMode(str, enum.Enum):
    UNIVERSAL = "universal"
    HEURISTIC = "heuristic"
    ORACLE = "oracle"
    SURE = "sure"
    SURE_LEVELWISE = "sure-levelwise"
    FIXED = "fixed"


@dataclass(frozen=True)
class RuleSpec:
    rule: Rule
    mode: LambdaMode
    lam: float | None = None

    @property
    def label(self) -> str:
        return f"{self.rule.value}-{self.mode.value}"

    @classmethod
    def parse(cls, item) -> "RuleSpec":
        """Accept "rule:mode", "rule:fixed:lam" or {"rule", "lambda_mode", "lambda"}."""
        if isinstance(item, RuleSpec):
            return item
        if isinstance(item, str):
            parts = item.split(":")
            if len(parts) not in (2, 3):
                raise ConfigurationError(f"rules: cannot parse {item!r}, expected 'rule:mode'")
            lam = float(parts[2]) if len(parts) == 3 else None
            rule, mode = parts[0], parts[1]
        elif isinstance(item, dict):
            rule, mode, lam = item.get("rule"), item.get("lambda_mode"), item.get("lambda")
        else:
            raise ConfigurationError(f"rules: unsupported entry {item!r}")
        try:
            spec = cls(parse_rule(rule), LambdaMode(mode), None if lam is None else float(lam))
        except (ValueError, SmoothScadError) as exc:
            raise ConfigurationError(f"rules: {exc}") from None
        if spec.mode is LambdaMode.FIXED and not (spec.lam and spec.lam > 0):
            raise ConfigurationError(f"rules: {item!r} needs a positive fixed lambda")
        if spec.mode in (LambdaMode.SURE, LambdaMode.SURE_LEVELWISE) and spec.rule is not Rule.SMOOTH_SCAD:
            raise ConfigurationError(f"rules: SURE selection is only available for smooth-scad, not {spec.rule.value}")
        return spec

    def to_str(self) -> str:
        base = f"{self.rule.value}:{self.mode.value}"
        return base if self.lam is None else f"{base}:{self.lam!r}"


DEFAULT_RULES = (
    RuleSpec(Rule.HARD, LambdaMode.UNIVERSAL),
    RuleSpec(Rule.SOFT, LambdaMode.UNIVERSAL),
    RuleSpec(Rule.SCAD, LambdaMode.ORACLE),
    RuleSpec(Rule.SMOOTH_SCAD, LambdaMode.ORACLE),
)


@dataclass
class BenchConfig:
    signals: list[str] = field(default_factory=lambda: list(DEFAULT_SIGNALS))
    n: int = 1024
    snr_list: list[float] = field(default_factory=lambda: [7.0])
    sigma: float = 1.0
    replications: int = 1000
    rules: list[RuleSpec] = field(default_factory=lambda: list(DEFAULT_RULES))
    wavelets: dict[str, str] = field(default_factory=lambda: dict(DEFAULT_WAVELETS))
    depth: int | str = "max"
    a: float = DEFAULT_A
    oracle_grid: int = DEFAULT_ORACLE_GRID
    sure_grid: int = sure.DEFAULT_GRID
    floor_c: float = sure.DEFAULT_FLOOR_C
    base_seed: int = DEFAULT_SEED
    workers: int = 1

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        def bad(field_name, msg):
            raise ConfigurationError(f"{field_name}: {msg}")

        if not self.signals:
            bad("signals", "at least one signal is required")
        try:
            self.signals = [testsignals.parse_signal(s).value for s in self.signals]
        except SmoothScadError as exc:
            bad("signals", str(exc))
        if not isinstance(self.n, int) or self.n < 16 or self.n & (self.n - 1):
            bad("n", f"must be a power of two >= 16, got {self.n!r}")
        if not self.snr_list or any(not (isinstance(s, (int, float)) and s > 0) for s in self.snr_list):
            bad("snr_list", f"must be a non-empty list of positive numbers, got {self.snr_list!r}")
        self.snr_list = [float(s) for s in self.snr_list]
        if not (isinstance(self.sigma, (int, float)) and self.sigma > 0):
            bad("sigma", f"must be > 0, got {self.sigma!r}")
        if not isinstance(self.replications, int) or self.replications < 1:
            bad("replications", f"must be an integer >= 1, got {self.replications!r}")
        if not self.rules:
            bad("rules", "at least one rule is required")
        self.rules = [RuleSpec.parse(r) for r in self.rules]
        wavelets = {k.lower(): v for k, v in self.wavelets.items()}
        for s in self.signals:
            if s not in wavelets:
                bad("wavelets", f"no wavelet assigned to signal {s!r}")
            try:
                wavelets[s] = dwt.parse_family(wavelets[s]).value
            except SmoothScadError as exc:
                bad("wavelets", str(exc))
        self.wavelets = wavelets
        J = int(math.log2(self.n))
        if self.depth != "max" and not (isinstance(self.depth, int) and 1 <= self.depth <= J):
            bad("depth", f"must be 'max' or an integer in [1, {J}], got {self.depth!r}")
        if not self.a > 1:
            bad("a", f"must exceed 1, got {self.a!r}")
        if any(r.rule is Rule.SCAD for r in self.rules) and not self.a > 2:
            bad("a", "Fan-Li SCAD needs a > 2")
        if any(r.mode is LambdaMode.HEURISTIC for r in self.rules) and not self.a > 2:
            bad("a", "heuristic thresholds need a > 2")
        for name in ("oracle_grid", "sure_grid"):
            v = getattr(self, name)
            if not isinstance(v, int) or v < 2:
                bad(name, f"must be an integer >= 2, got {v!r}")
        if not self.floor_c >= 0:
            bad("floor_c", f"must be >= 0, got {self.floor_c!r}")
        if not isinstance(self.base_seed, int) or self.base_seed < 0:
            bad("base_seed", f"must be a non-negative integer, got {self.base_seed!r}")
        if not isinstance(self.workers, int) or self.workers < 1:
            bad("workers", f"must be an integer >= 1, got {self.workers!r}")

    def depth_for(self, signal: str) -> int:
        if self.depth == "max":
            return dwt.max_depth(self.n, self.wavelets[signal])
        return int(self.depth)

    def to_dict(self) -> dict[str, Any]:
        d = asdict(self)
        d["rules"] = [r.to_str() for r in self.rules]
        d.pop("workers")
        d["depths"] = {s: self.depth_for(s) for s in self.signals}
        return d

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "BenchConfig":
        if not isinstance(data, dict):
            raise ConfigurationError("config: top level must be a JSON object")
        known = set(cls.__dataclass_fields__)
        data = {k: v for k, v in data.items() if k != "depths"}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigurationError(f"{unknown[0]}: unknown config field")
        return cls(**data)

    @classmethod
    def from_json(cls, text: str) -> "BenchConfig":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigurationError(f"config: invalid JSON ({exc})") from None
        return cls.from_dict(data)


@dataclass
class Replicate:
    """Noisy and clean coefficients for one (signal, snr, index)."""

    clean: np.ndarray
    noisy: np.ndarray
    clean_dec: dwt.WaveletDecomposition
    noisy_dec: dwt.WaveletDecomposition
    approx_err: float


def _prepare(config: BenchConfig, signal: str, snr: float, index: int) -> Replicate:
    real = testsignals.realization(signal, config.n, snr, config.sigma, config.base_seed + index)
    filt = dwt.make_filter(config.wavelets[signal])
    L = config.depth_for(signal)
    cdec = dwt.forward(real.clean.samples, filt, L)
    ndec = dwt.forward(real.noisy, filt, L)
    approx_err = float(np.sum((ndec.approx - cdec.approx) ** 2))
    return Replicate(real.clean.samples, real.noisy, cdec, ndec, approx_err)


def _grid_mse(d: np.ndarray, theta: np.ndarray, lams: np.ndarray, rule: Rule, a: float, base: float, n: int) -> np.ndarray:
    rho = threshold_grid(d, lams, a, rule)
    return (base + np.sum((rho - theta) ** 2, axis=1)) / n


def oracle_lambda(clean, noisy, rule=Rule.SMOOTH_SCAD, a: float = DEFAULT_A, sigma: float = 1.0,
                  filt="sym4", depth: int | None = None, grid: int = DEFAULT_ORACLE_GRID) -> tuple[float, float]:
    """Grid point in [0, lambda_U] minimizing the reconstruction MSE; ties go to the smallest lambda."""
    clean = np.asarray(clean, dtype=float)
    noisy = np.asarray(noisy, dtype=float)
    if clean.shape != noisy.shape:
        raise ShapeError(f"clean and noisy lengths differ ({clean.shape} vs {noisy.shape})")
    cdec = dwt.forward(clean, filt, depth)
    ndec = dwt.forward(noisy, filt, depth)
    base = float(np.sum((ndec.approx - cdec.approx) ** 2))
    return _oracle(ndec.detail_vector(), cdec.detail_vector(), parse_rule(rule), a, sigma, base, len(clean), grid)


def _oracle(d, theta, rule, a, sigma, base, n, grid):
    lams = sure.lambda_grid(sure.universal_threshold(n, sigma), grid)
    mses = _grid_mse(d, theta, lams, rule, a, base, n)
    i = int(np.flatnonzero(mses == mses.min())[0])
    return float(lams[i]), float(mses[i])


def _evaluate(config: BenchConfig, rep: Replicate, spec: RuleSpec) -> tuple[float, float]:
    """Return (mse, lambda used); lambda is nan for level-dependent selection."""
    n, sigma, a = config.n, config.sigma, config.a
    d = rep.noisy_dec.detail_vector()
    theta = rep.clean_dec.detail_vector()
    if spec.mode is LambdaMode.ORACLE:
        return _oracle(d, theta, spec.rule, a, sigma, rep.approx_err, n, config.oracle_grid)[::-1]
    if spec.mode is LambdaMode.SURE_LEVELWISE:
        sel = sure.select_lambda_levelwise(rep.noisy_dec, a, sigma, config.sure_grid, config.floor_c)
        est = apply_to_decomposition(rep.noisy_dec, ShrinkageSpec(spec.rule, sel.per_level, a, sigma))
        err = float(np.sum((est.detail_vector() - theta) ** 2))
        return (rep.approx_err + err) / n, math.nan
    if spec.mode is LambdaMode.UNIVERSAL:
        lam = sure.universal_threshold(n, sigma)
    elif spec.mode is LambdaMode.HEURISTIC:
        lam = sure.heuristic_threshold(n, sigma, a)
    elif spec.mode is LambdaMode.SURE:
        lam = sure.select_lambda_global(rep.noisy_dec, a, sigma, config.sure_grid).minimizer
    else:
        lam = spec.lam
    err = float(np.sum((_rho(spec.rule, d, lam, a) - theta) ** 2))
    return (rep.approx_err + err) / n, float(lam)


def run_replication(config: BenchConfig, signal: str, snr: float, rule, index: int) -> float:
    """MSE of one rule on replication ``index``."""
    rep = _prepare(config, signal, snr, index)
    return _evaluate(config, rep, RuleSpec.parse(rule))[0]


def _replicate_all(args) -> list[tuple[float, float]]:
    config, signal, snr, index = args
    rep = _prepare(config, signal, snr, index)
    return [_evaluate(config, rep, spec) for spec in config.rules]


@dataclass
class BenchCell:
    signal: str
    snr: float
    rule: str
    amse: float
    std: float
    mc_se: float
    replications: int
    mean_lambda: float
    wavelet: str
    depth: int


@dataclass
class BenchReport:
    config: BenchConfig
    cells: list[BenchCell]
    wall_time: dict[str, float] = field(default_factory=dict)

    def cell(self, signal: str, rule: str, snr: float | None = None) -> BenchCell:
        for c in self.cells:
            if c.signal == signal and c.rule == rule and (snr is None or c.snr == snr):
                return c
        raise KeyError((signal, rule, snr))


def run_bench(config: BenchConfig, workers: int | None = None, progress=None) -> BenchReport:
    workers = config.workers if workers is None else workers
    cells, timing = [], {}
    pool = ProcessPoolExecutor(max_workers=workers) if workers > 1 else None
    try:
        for signal in config.signals:
            for snr in config.snr_list:
                t0 = time.perf_counter()
                tasks = [(config, signal, snr, i) for i in range(config.replications)]
                if pool is None:
                    results = [_replicate_all(t) for t in tasks]
                else:
                    chunk = max(1, len(tasks) // (4 * workers))
                    results = list(pool.map(_replicate_all, tasks, chunksize=chunk))
                arr = np.array(results)  # (M, rules, 2), replication order
                for k, spec in enumerate(config.rules):
                    mses = arr[:, k, 0]
                    lams = arr[:, k, 1]
                    std = float(np.std(mses))
                    cells.append(BenchCell(
                        signal=signal,
                        snr=snr,
                        rule=spec.label,
                        amse=float(np.mean(mses)),
                        std=std,
                        mc_se=std / math.sqrt(len(mses)),
                        replications=len(mses),
                        mean_lambda=float(np.mean(lams)),
                        wavelet=config.wavelets[signal],
                        depth=config.depth_for(signal),
                    ))
                timing[f"{signal}@{snr:g}"] = time.perf_counter() - t0
                if progress is not None:
                    progress(signal, snr, timing[f"{signal}@{snr:g}"])
    finally:
        if pool is not None:
            pool.shutdown()
    return BenchReport(config, cells, timing)


# --- serialization ---

CSV_FIELDS = ["signal", "snr", "rule", "amse", "std", "mc_se", "replications", "mean_lambda", "wavelet", "depth"]


def _fmt(x) -> str:
    return repr(float(x)) if isinstance(x, float) else str(x)


def to_csv(report: BenchReport) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_FIELDS)
    for c in report.cells:
        w.writerow([_fmt(getattr(c, f)) for f in CSV_FIELDS])
    return buf.getvalue()


def read_csv(text: str) -> list[dict[str, Any]]:
    rows = []
    for row in csv.DictReader(io.StringIO(text)):
        rows.append({
            "signal": row["signal"],
            "snr": float(row["snr"]),
            "rule": row["rule"],
            "amse": float(row["amse"]),
            "std": float(row["std"]),
            "mc_se": float(row["mc_se"]),
            "replications": int(row["replications"]),
            "mean_lambda": float(row["mean_lambda"]),
            "wavelet": row["wavelet"],
            "depth": int(row["depth"]),
        })
    return rows


def _json_safe(x):
    return None if isinstance(x, float) and math.isnan(x) else x


def to_json(report: BenchReport) -> str:
    doc = {
        "config": report.config.to_dict(),
        "cells": [{k: _json_safe(v) for k, v in asdict(c).items()} for c in report.cells],
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def to_table(report: BenchReport) -> str:
    """Signals as rows, rules as columns, std in parentheses under each AMSE row."""
    rules = [r.label for r in report.config.rules]
    width = max(12, *(len(r) + 2 for r in rules))
    blocks = []
    for snr in report.config.snr_list:
        head = f"{'Signal':<12}" + "".join(f"{r:>{width}}" for r in rules)
        lines = [f"AMSE (std of MSE), N={report.config.n}, SNR={snr:g}, M={report.config.replications}", head, "-" * len(head)]
        for s in report.config.signals:
            cells = [report.cell(s, r, snr) for r in rules]
            lines.append(f"{s:<12}" + "".join(f"{c.amse:>{width}.4e}" for c in cells))
            lines.append(f"{'':<12}" + "".join(f"{'(' + format(c.std, '.4e') + ')':>{width}}" for c in cells))
        blocks.append("\n".join(lines))
    return "\n\n".join(blocks) + "\n"


def report_emit(report: BenchReport, fmt: str) -> str:
    emitters = {"csv": to_csv, "json": to_json, "table": to_table, "text-table": to_table}
    try:
        return emitters[fmt](report)
    except KeyError:
        raise ConfigurationError(f"format: unsupported report format {fmt!r}") from None
