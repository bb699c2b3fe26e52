"""Command-line front-end.

Exit status: 0 on success, 2 for usage or configuration errors, 3 for bad data
(unparseable input, wrong length, degenerate signal).
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import bayes, bench, dwt, sure, testsignals
from .errors import (
    ConfigurationError,
    DepthError,
    DomainError,
    InputFormatError,
    ParameterError,
    ShapeError,
    SmoothScadError,
    UnsupportedFamilyError,
)
from .shrinkage import DEFAULT_A, Rule, ShrinkageSpec, apply_to_decomposition, generator, parse_rule, threshold
from .signalio import SignalFile, format_signal, read_signal

EXIT_OK, EXIT_USAGE, EXIT_DATA = 0, 2, 3

WAVELETS = [f.value for f in dwt.Family]
RULES = [r.value for r in Rule]
LAMBDA_MODES = ["sure", "sure-levelwise", "universal", "heuristic", "fixed"]
FORMATS = ["csv", "json", "table"]


class UsageError(SmoothScadError, ValueError):
    """Flag combination that cannot be honoured."""


# --- output helpers ---

def _render(header: list[str], rows: list[list], fmt: str) -> str:
    if fmt == "json":
        return json.dumps([dict(zip(header, r)) for r in rows], indent=2) + "\n"
    if fmt == "table":
        cells = [header] + [[f"{v:.6g}" if isinstance(v, float) else str(v) for v in r] for r in rows]
        widths = [max(len(c[i]) for c in cells) for i in range(len(header))]
        return "\n".join("  ".join(c[i].rjust(widths[i]) for i in range(len(header))) for c in cells) + "\n"
    lines = [",".join(header)] + [",".join(repr(v) if isinstance(v, float) else str(v) for v in r) for r in rows]
    return "\n".join(lines) + "\n"


def _emit(text: str, output: str | None) -> None:
    if output is None:
        sys.stdout.write(text)
    else:
        path = Path(output)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)


def _figure_path(args) -> Path:
    if args.output is None:
        raise UsageError("--plot needs --output (the figure is written next to it)")
    return Path(args.output).with_suffix(".png")


def _symmetric_grid(span: float, points: int) -> np.ndarray:
    """2k+1 points on [-span, span] computed as i*span/k, so i/k fractions land exactly."""
    k = max(1, (points - 1) // 2)
    return np.arange(-k, k + 1) * span / k


def _load_signal(path: str) -> SignalFile:
    try:
        sig = read_signal(path)
    except OSError as exc:
        raise InputFormatError(f"cannot read {path}: {exc.strerror}") from None
    dwt.log2_length(len(sig.values))
    return sig


# --- denoising pipeline ---

def denoise_signal(x, wavelet="sym4", depth=None, rule="smooth-scad", lambda_mode="sure",
                   lam=None, a=DEFAULT_A, sigma=None, grid=sure.DEFAULT_GRID,
                   floor_c=sure.DEFAULT_FLOOR_C) -> tuple[np.ndarray, dict]:
    """Denoise one signal and return (estimate, sidecar record)."""
    rule = parse_rule(rule)
    x = np.asarray(x, dtype=float)
    filt = dwt.make_filter(wavelet)
    dec = dwt.forward(x, filt, depth)
    if lambda_mode in ("sure", "sure-levelwise") and rule is not Rule.SMOOTH_SCAD:
        raise UsageError(f"--lambda-mode {lambda_mode} is defined for smooth-scad only")
    if lambda_mode == "fixed" and lam is None:
        raise UsageError("--lambda-mode fixed needs --lambda")
    if lambda_mode != "fixed" and lam is not None:
        raise UsageError("--lambda is only used with --lambda-mode fixed")

    if sigma is None:
        sigma_used, source = sure.estimate_sigma_mad(sure.finest_details(dec)), "mad"
    else:
        sigma_used, source = float(sigma), "given"
        if not (math.isfinite(sigma_used) and sigma_used > 0):
            raise ParameterError(f"--sigma must be > 0, got {sigma}")
    record = {
        "n": len(x),
        "wavelet": filt.family.value,
        "depth": dec.L,
        "rule": rule.value,
        "lambda_mode": lambda_mode,
        "a": float(a),
        "sigma": sigma_used,
        "sigma_source": source,
    }
    if sigma_used == 0:
        # the finest level is exactly flat: nothing to remove
        record.update(**{"lambda": 0.0, "sure": 0.0, "lambda_universal": 0.0})
        return x.copy(), record

    lam_u = sure.universal_threshold(len(x), sigma_used)
    sure_value = None
    if lambda_mode == "sure-levelwise":
        sel = sure.select_lambda_levelwise(dec, a, sigma_used, grid, floor_c)
        spec = ShrinkageSpec(rule, sel.per_level, a, sigma_used)
        chosen = {str(j): v for j, v in sel.per_level.items()}
        sure_value = sure.sure_multilevel(dec, sel.per_level, a, sigma_used)
        record["lambda_raw"] = {str(j): v for j, v in sel.raw.items()}
        record["floor_c"] = float(floor_c)
    else:
        if lambda_mode == "sure":
            scan = sure.select_lambda_global(dec, a, sigma_used, grid)
            chosen, sure_value = scan.minimizer, scan.min_risk
        elif lambda_mode == "universal":
            chosen = lam_u
        elif lambda_mode == "heuristic":
            chosen = sure.heuristic_threshold(len(x), sigma_used, a)
        else:
            chosen = float(lam)
        if rule is Rule.SMOOTH_SCAD and sure_value is None:
            sure_value = sure.sure_total(dec, chosen, a, sigma_used)
        if chosen == 0:
            spec = None
        else:
            spec = ShrinkageSpec(rule, chosen, a, sigma_used)
    record["lambda"] = chosen
    record["lambda_universal"] = lam_u
    record["sure"] = sure_value
    est = dec if spec is None else apply_to_decomposition(dec, spec)
    return dwt.inverse(est, filt), record


# --- subcommands ---

def cmd_denoise(args) -> int:
    if args.output is None:
        raise UsageError("denoise needs --output")
    sig = _load_signal(args.input)
    est, record = denoise_signal(
        sig.values, args.wavelet, args.depth, args.rule, args.lambda_mode,
        args.lam, args.a, args.sigma, args.grid, args.floor_c,
    )
    figure = _figure_path(args) if args.plot else None
    _emit(format_signal(sig, est), args.output)
    sidecar = args.sidecar or str(Path(args.output).with_suffix(".json"))
    _emit(json.dumps(record, indent=2, sort_keys=True) + "\n", sidecar)
    if figure is not None:
        from . import plotting

        plotting.denoised(np.arange(len(est)) / len(est), sig.values, est, figure)
    return EXIT_OK


def _scan_input(args) -> tuple[np.ndarray, float | None]:
    if args.input is not None:
        return _load_signal(args.input).values, args.sigma
    sigma = 1.0 if args.sigma is None else args.sigma
    real = testsignals.realization(args.signal, args.n, args.snr, sigma, args.seed)
    return real.noisy, sigma


def cmd_sure_scan(args) -> int:
    x, sigma = _scan_input(args)
    dec = dwt.forward(x, args.wavelet, args.depth)
    if sigma is None:
        sigma = sure.estimate_sigma_mad(sure.finest_details(dec))
        if sigma == 0:
            raise DomainError("noise estimate is zero; pass --sigma")
    scan = sure.select_lambda_global(dec, args.a, sigma, args.grid)
    figure = _figure_path(args) if args.plot else None
    if args.format == "json":
        text = scan.to_json() + "\n"
    elif args.format == "csv":
        text = scan.to_csv()
    else:
        text = _render(["lambda", "sure_risk"], list(zip(scan.grid.tolist(), scan.risks.tolist())), "table")
    _emit(text, args.output)
    if figure is not None:
        from . import plotting

        plotting.sure_scan(scan, figure, sure.universal_threshold(len(x), sigma))
    return EXIT_OK


def cmd_shrink_curve(args) -> int:
    lam = 1.0 if args.lam is None else args.lam
    d = _symmetric_grid(args.span, args.grid)
    rho = threshold(d, lam, args.a, args.rule)
    h, dh = generator(d, lam, args.a, args.rule)
    rows = [list(r) for r in zip(d.tolist(), rho.tolist(), h.tolist(), dh.tolist())]
    figure = _figure_path(args) if args.plot else None
    _emit(_render(["d", "rho", "h", "dh_dd"], rows, args.format), args.output)
    if figure is not None:
        from . import plotting

        plotting.shrink_curves(figure, lam, args.a, args.span)
    return EXIT_OK


def cmd_prior_curve(args) -> int:
    lam = 1.0 if args.lam is None else args.lam
    sigma = 1.0 if args.sigma is None else args.sigma
    params = bayes.PenaltyParams(lam, args.a, sigma)
    theta = _symmetric_grid(args.span, args.grid)
    phi = bayes.penalty_phi(np.abs(theta), params)
    prior = bayes.prior_density_unnormalized(theta, params)
    nlp = bayes.neg_log_posterior(theta, args.d, params)
    rows = [list(r) for r in zip(theta.tolist(), phi.tolist(), prior.tolist(), nlp.tolist())]
    figure = _figure_path(args) if args.plot else None
    _emit(_render(["theta", "phi", "prior_unnorm", "neg_log_post"], rows, args.format), args.output)
    if figure is not None:
        from . import plotting

        plotting.prior_curve(theta, phi, prior, figure)
    return EXIT_OK


def cmd_signals(args) -> int:
    sigma = 1.0 if args.sigma is None else args.sigma
    real = testsignals.realization(args.signal, args.n, args.snr, sigma, args.seed)
    figure = _figure_path(args) if args.plot else None
    if args.format == "csv":
        text = testsignals.to_csv(real)
    else:
        t = testsignals.grid(args.n).tolist()
        rows = [[i, t[i], c, y] for i, (c, y) in enumerate(zip(real.clean.samples.tolist(), real.noisy.tolist()))]
        text = _render(["index", "t", "clean", "noisy"], rows, args.format)
    _emit(text, args.output)
    if figure is not None:
        from . import plotting

        plotting.denoised(testsignals.grid(args.n), real.noisy, real.clean.samples, figure)
    return EXIT_OK


def _bench_config(args) -> bench.BenchConfig:
    data = {}
    if args.config is not None:
        try:
            data = json.loads(Path(args.config).read_text())
        except OSError as exc:
            raise ConfigurationError(f"config: cannot read {args.config}: {exc.strerror}") from None
        except json.JSONDecodeError as exc:
            raise ConfigurationError(f"config: invalid JSON ({exc})") from None
        if not isinstance(data, dict):
            raise ConfigurationError("config: top level must be a JSON object")
    overrides = {
        "replications": args.replications,
        "workers": args.workers,
        "base_seed": args.seed,
        "snr_list": args.snr,
        "n": args.n,
        "a": args.a,
        "oracle_grid": args.grid,
        "floor_c": args.floor_c,
        "sigma": args.sigma,
    }
    data.update({k: v for k, v in overrides.items() if v is not None})
    if args.depth is not None:
        data["depth"] = args.depth if args.depth == "max" else int(args.depth)
    return bench.BenchConfig.from_dict(data)


def cmd_bench(args) -> int:
    if args.output is None:
        raise UsageError("bench needs --output (a directory)")
    config = _bench_config(args)
    out = Path(args.output)
    out.mkdir(parents=True, exist_ok=True)

    def progress(signal, snr, seconds):
        print(f"{signal} SNR={snr:g}: {config.replications} replications in {seconds:.1f} s", file=sys.stderr)

    report = bench.run_bench(config, progress=progress)
    (out / "report.csv").write_text(bench.to_csv(report))
    (out / "report.json").write_text(bench.to_json(report))
    (out / "report.txt").write_text(bench.to_table(report))
    (out / "resolved_config.json").write_text(json.dumps(config.to_dict(), indent=2, sort_keys=True) + "\n")
    timing = {"workers": config.workers, "seconds": report.wall_time, "total": sum(report.wall_time.values())}
    (out / "timing.json").write_text(json.dumps(timing, indent=2, sort_keys=True) + "\n")
    if args.plot:
        from . import plotting

        plotting.bench_amse(report, out / "report.png")
    sys.stdout.write(bench.report_emit(report, args.format))
    return EXIT_OK


# --- parser ---

def _depth(text: str):
    if text == "max":
        return text
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"depth must be an integer or 'max', got {text!r}") from None
    return value


def _add_common(p, *, wavelet=True, output=True, fmt=True, plot=True):
    if wavelet:
        p.add_argument("--wavelet", choices=WAVELETS, default="sym4")
        p.add_argument("--depth", type=int, default=None, help="levels to decompose (default log2(N) - 4)")
    if output:
        p.add_argument("--output", help="output file (stdout when omitted)")
    if fmt:
        p.add_argument("--format", choices=FORMATS, default="csv")
    if plot:
        p.add_argument("--plot", action="store_true", help="also write a PNG figure next to --output")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="smoothscad", description="Wavelet denoising with smooth SCAD thresholding.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("denoise", help="denoise a signal file")
    p.add_argument("--input", required=True, help="one sample per line, or CSV t,value")
    _add_common(p, fmt=False)
    p.add_argument("--rule", choices=RULES, default="smooth-scad")
    p.add_argument("--lambda-mode", choices=LAMBDA_MODES, default="sure")
    p.add_argument("--lambda", dest="lam", type=float, default=None, help="threshold for --lambda-mode fixed")
    p.add_argument("--a", type=float, default=DEFAULT_A)
    p.add_argument("--sigma", type=float, default=None, help="noise level (MAD estimate when omitted)")
    p.add_argument("--grid", type=int, default=sure.DEFAULT_GRID, help="SURE grid size")
    p.add_argument("--floor-c", type=float, default=sure.DEFAULT_FLOOR_C)
    p.add_argument("--sidecar", default=None, help="JSON sidecar path (default: output with .json suffix)")
    p.set_defaults(func=cmd_denoise)

    p = sub.add_parser("sure-scan", help="SURE risk over a threshold grid")
    src = p.add_mutually_exclusive_group()
    src.add_argument("--input", help="signal file; otherwise a test signal is generated")
    src.add_argument("--signal", choices=[s.value for s in testsignals.SignalName], default="doppler")
    p.add_argument("--n", type=int, default=1024)
    p.add_argument("--snr", type=float, default=7.0)
    p.add_argument("--seed", type=int, default=0)
    _add_common(p)
    p.add_argument("--a", type=float, default=DEFAULT_A)
    p.add_argument("--sigma", type=float, default=None)
    p.add_argument("--grid", type=int, default=sure.DEFAULT_GRID)
    p.set_defaults(func=cmd_sure_scan)

    p = sub.add_parser("shrink-curve", help="rho, h and dh/dd on a symmetric d grid")
    p.add_argument("--rule", choices=RULES, default="smooth-scad")
    p.add_argument("--lambda", dest="lam", type=float, default=None, help="threshold (default 1)")
    p.add_argument("--a", type=float, default=DEFAULT_A)
    p.add_argument("--span", type=float, default=6.0, help="grid covers [-span, span]")
    p.add_argument("--grid", type=int, default=1201, help="number of grid points (made odd)")
    _add_common(p, wavelet=False)
    p.set_defaults(func=cmd_shrink_curve)

    p = sub.add_parser("prior-curve", help="penalty, unnormalized prior and posterior objective")
    p.add_argument("--lambda", dest="lam", type=float, default=None, help="threshold (default 1)")
    p.add_argument("--a", type=float, default=DEFAULT_A)
    p.add_argument("--sigma", type=float, default=None, help="noise level (default 1)")
    p.add_argument("--d", type=float, default=0.0, help="observation for the neg_log_post column")
    p.add_argument("--span", type=float, default=6.0)
    p.add_argument("--grid", type=int, default=1201)
    _add_common(p, wavelet=False)
    p.set_defaults(func=cmd_prior_curve)

    p = sub.add_parser("signals", help="write a clean/noisy test signal")
    p.add_argument("--signal", choices=[s.value for s in testsignals.SignalName], default="doppler")
    p.add_argument("--n", type=int, default=1024)
    p.add_argument("--snr", type=float, default=7.0)
    p.add_argument("--sigma", type=float, default=None, help="noise level (default 1)")
    p.add_argument("--seed", type=int, default=0)
    _add_common(p, wavelet=False)
    p.set_defaults(func=cmd_signals)

    p = sub.add_parser("bench", help="Monte Carlo AMSE study")
    p.add_argument("--config", default=None, help="JSON config; every field optional")
    p.add_argument("--output", default=None, help="directory for report files")
    p.add_argument("--format", choices=FORMATS, default="table", help="what to print on stdout")
    p.add_argument("--replications", type=int, default=None)
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--seed", type=int, default=None, help="base seed")
    p.add_argument("--snr", type=float, nargs="+", default=None)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--a", type=float, default=None)
    p.add_argument("--sigma", type=float, default=None)
    p.add_argument("--depth", type=_depth, default=None, help="integer or 'max'")
    p.add_argument("--grid", type=int, default=None, help="oracle grid size")
    p.add_argument("--floor-c", type=float, default=None)
    p.add_argument("--plot", action="store_true", help="also write report.png")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ConfigurationError, ParameterError, UnsupportedFamilyError, DepthError) as exc:
        print(f"{parser.prog} {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (InputFormatError, ShapeError, DomainError) as exc:
        print(f"{parser.prog} {args.command}: data error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
