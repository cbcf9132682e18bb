"""Command-line pipeline: generate-apertures, simulate, reconstruct, evaluate.

All randomness enters through explicit --seed flags, so every command is
deterministic given its arguments. Exit codes: 0 success, 2 usage or
configuration, 3 file format, 4 domain/validation, 5 solver divergence.
"""

from __future__ import annotations

import argparse
import csv
import math
import os
import sys


def _threads_flag(parser):
    parser.add_argument("--threads", type=int, default=0,
                        help="worker threads for numeric kernels (0 = all cores)")


def _apply_threads(n: int):
    if n > 0:
        for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
            os.environ.setdefault(var, str(n))


def _parse_weights(text: str):
    parts = [float(p) for p in text.split(",")]
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("weights must be three comma-separated reals")
    return tuple(parts)


def _parse_pixels(text: str):
    pixels = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        x, y = chunk.split(",")
        pixels.append((int(x), int(y)))
    return pixels


def _fmt(v: float) -> str:
    return "inf" if math.isinf(v) else f"{v:.6f}"


def cmd_generate_apertures(args) -> int:
    from .cube import complement, random_aperture
    from .fileio import write_aperture

    for k in range(args.shots):
        if args.complementary and k % 2 == 1:
            ap = complement(prev)
        else:
            ap = random_aperture(args.rows, args.cols, args.open_fraction, args.seed + k)
            prev = ap
        path = f"{args.out_prefix}{k}.apt"
        write_aperture(path, ap)
        print(f"wrote {path}")
    return 0


def _load_model(aperture_paths, order_name, weights, expect_dims=None):
    from .errors import ConfigError
    from .fileio import read_aperture
    from .operator import Order

    shots = tuple(read_aperture(p) for p in aperture_paths)
    m, n = shots[0].m_rows, shots[0].n_cols
    if expect_dims is not None and (m, n) != expect_dims[:2]:
        raise ConfigError(f"aperture size {m}x{n} does not match cube "
                          f"{expect_dims[0]}x{expect_dims[1]}")
    order = Order.HIGHER_ORDER if order_name == "higher" else Order.STANDARD
    bands = expect_dims[2] if expect_dims else None
    return shots, order, m, n, bands


def cmd_simulate(args) -> int:
    from .fileio import read_cube, write_measurements
    from .metrics import add_gaussian_noise, noise_sigma_for_snr
    from .operator import CassiModel, forward, measurement_count, measurement_rate

    cube = read_cube(args.cube)
    shots, order, *_ = _load_model(args.apertures, args.order, args.weights,
                                   (cube.m_rows, cube.n_cols, cube.bands))
    model = CassiModel(cube.m_rows, cube.n_cols, cube.bands, shots, order, args.weights)
    g = forward(model, cube)
    if args.snr_db is not None:
        sigma = noise_sigma_for_snr(g, args.snr_db)
        g = add_gaussian_noise(g, sigma, args.seed)
    write_measurements(args.out, g, model.n_shots, order)
    print(f"m = {measurement_count(model)}")
    print(f"rate = {measurement_rate(model):.6f}")
    print(f"wrote {args.out}")
    return 0


def cmd_reconstruct(args) -> int:
    from .errors import ConfigError
    from .fileio import read_cube, read_measurements, write_cube
    from .operator import CassiModel, Order, measurement_count
    from .solver import SolverConfig, run_amp
    from .transform import TransformSpec, WaveletFamily

    g, k_file, order_file = read_measurements(args.measurements)
    shots, order, m, n, _ = _load_model(args.apertures, args.order, args.weights)
    if len(shots) != k_file:
        raise ConfigError(f"measurement file records {k_file} shots, "
                          f"{len(shots)} apertures supplied")
    if order is not order_file:
        raise ConfigError(f"measurement file order is {order_file.value}, "
                          f"--order says {order.value}")
    # infer L from the measurement length: m_total = K*M*(N+L±1)
    per_shot = len(g) // (len(shots) * m)
    bands = per_shot - n + (-1 if order is Order.HIGHER_ORDER else 1)
    model = CassiModel(m, n, bands, shots, order, args.weights)
    if measurement_count(model) != len(g):
        raise ConfigError("measurement length inconsistent with apertures and order")

    wavelet = WaveletFamily.DAUBECHIES4 if args.wavelet == "db4" else WaveletFamily.HAAR
    spec = TransformSpec(wavelet, args.levels, m, n, bands)
    config = SolverConfig(transform=spec, damping=args.alpha, max_iters=args.iters)
    truth = read_cube(args.truth) if args.truth else None
    estimate, report = run_amp(model, g, config, truth)
    write_cube(args.out, estimate)
    print(f"wrote {args.out} after {report.iterations} iterations")
    if args.trace_csv:
        with open(args.trace_csv, "w", newline="") as fh:
            w = csv.writer(fh)
            header = ["iteration", "sigma2", "onsager"] + (["psnr_db"] if truth else [])
            w.writerow(header)
            for i in range(len(report.sigma2)):
                row = [i + 1, f"{report.sigma2[i]:.10e}", f"{report.onsager[i]:.10e}"]
                if truth:
                    row.append(_fmt(report.psnr[i]))
                w.writerow(row)
        print(f"wrote {args.trace_csv}")
    return 0


def cmd_evaluate(args) -> int:
    from .fileio import read_cube
    from .metrics import evaluate

    truth = read_cube(args.truth)
    estimate = read_cube(args.estimate)
    pixels = _parse_pixels(args.signatures) if args.signatures else []
    report = evaluate(truth, estimate, pixels)

    with open(args.out_csv, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["band", "psnr_db"])
        for lam, p in enumerate(report.per_band_psnr):
            w.writerow([lam, _fmt(p)])
    print(f"average_psnr_db = {_fmt(report.average_psnr)}")
    print(f"wrote {args.out_csv}")

    if pixels and args.signatures_csv:
        with open(args.signatures_csv, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["x", "y", "band", "estimate", "reference"])
            for (x, y), (est, ref) in report.signatures.items():
                for lam in range(len(est)):
                    w.writerow([x, y, lam, f"{est[lam]:.8e}", f"{ref[lam]:.8e}"])
        print(f"wrote {args.signatures_csv}")

    if args.slices_dir:
        _write_slices(args.slices_dir, truth, estimate)
    return 0


def _write_slices(out_dir, truth, estimate):
    """Per-band grayscale PNGs, linearly min-max scaled within each band."""
    import numpy as np
    from PIL import Image

    os.makedirs(out_dir, exist_ok=True)
    for tag, cube in (("truth", truth), ("estimate", estimate)):
        for lam in range(cube.bands):
            band = cube.data[:, :, lam]
            lo, hi = float(band.min()), float(band.max())
            scale = 255.0 / (hi - lo) if hi > lo else 0.0
            img = ((band - lo) * scale).astype(np.uint8)
            Image.fromarray(img, mode="L").save(
                os.path.join(out_dir, f"{tag}_band{lam:03d}.png"))
    print(f"wrote slice images to {out_dir}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cassikit",
                                     description="CASSI simulation and AMP reconstruction")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate-apertures", help="emit seeded binary aperture files")
    p.add_argument("--rows", type=int, required=True)
    p.add_argument("--cols", type=int, required=True)
    p.add_argument("--shots", type=int, required=True)
    p.add_argument("--open-fraction", type=float, default=0.5)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--complementary", action="store_true",
                   help="odd-indexed shots complement their predecessor")
    p.add_argument("--out-prefix", required=True)
    p.set_defaults(func=cmd_generate_apertures)

    p = sub.add_parser("simulate", help="forward model plus optional calibrated noise")
    p.add_argument("--cube", required=True)
    p.add_argument("--apertures", nargs="+", required=True)
    p.add_argument("--order", choices=["standard", "higher"], default="standard")
    p.add_argument("--weights", type=_parse_weights, default=(0.25, 0.5, 0.25))
    p.add_argument("--snr-db", type=float, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    _threads_flag(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("reconstruct", help="run the iterative reconstruction")
    p.add_argument("--measurements", required=True)
    p.add_argument("--apertures", nargs="+", required=True)
    p.add_argument("--order", choices=["standard", "higher"], default="standard")
    p.add_argument("--weights", type=_parse_weights, default=(0.25, 0.5, 0.25))
    p.add_argument("--alpha", type=float, default=0.2)
    p.add_argument("--iters", type=int, default=400)
    p.add_argument("--wavelet", choices=["haar", "db4"], default="haar")
    p.add_argument("--levels", type=int, default=3)
    p.add_argument("--out", required=True)
    p.add_argument("--trace-csv", default=None)
    p.add_argument("--truth", default=None)
    _threads_flag(p)
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser("evaluate", help="PSNR report and spectral signatures")
    p.add_argument("--truth", required=True)
    p.add_argument("--estimate", required=True)
    p.add_argument("--signatures", default=None, help='pixel list "x,y;x,y"')
    p.add_argument("--signatures-csv", default=None)
    p.add_argument("--out-csv", required=True)
    p.add_argument("--slices-dir", default=None,
                   help="emit per-band grayscale slice images here")
    p.set_defaults(func=cmd_evaluate)

    return parser


def main(argv=None) -> int:
    from .errors import (CassikitError, ConfigError, DivergenceError, DomainError,
                         FileFormatError, SizeError, ValidationError)

    args = build_parser().parse_args(argv)
    _apply_threads(getattr(args, "threads", 0))
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (FileFormatError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (DomainError, ValidationError, SizeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except DivergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 5


if __name__ == "__main__":
    sys.exit(main())
