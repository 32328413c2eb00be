"""Command-line interface: noise injection, denoising, metrics, benchmarking.

Exit codes are stable for scripting: 0 on success, 2 on usage errors
(click's default), 1 on runtime failures.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
import sys
import time
from dataclasses import dataclass
from pathlib import Path

import click
import numpy as np

from . import fixtures as fixtures_mod
from .colorspace import ParamTriplet, denoise_rgb
from .denoiser import ChannelParams, denoise_channel
from .errors import EggdError
from .metrics import psnr, report, shannon_entropy, ssim
from .noise import NoiseSpec, add_gaussian_noise
from .pngio import load_image, save_image

DEFAULT_MAX_SIDE = 128
DEFAULT_OVERSAMPLE = 10
DEFAULT_ZETA_LEVELS = (2.0, 4.0, 6.0)

# Patch lengths per relative noise level for (Y, Cb, Cr); the neighbor count
# and basis size stay fixed at 20 and 80 across channels and levels.
BENCH_SCHEDULE = {
    2.0: ParamTriplet(
        y=ChannelParams(5, 20, 80), cb=ChannelParams(7, 20, 80), cr=ChannelParams(7, 20, 80)
    ),
    4.0: ParamTriplet(
        y=ChannelParams(7, 20, 80), cb=ChannelParams(9, 20, 80), cr=ChannelParams(9, 20, 80)
    ),
    6.0: ParamTriplet(
        y=ChannelParams(9, 20, 80), cb=ChannelParams(11, 20, 80), cr=ChannelParams(11, 20, 80)
    ),
}

BENCH_FIELDS = ("image", "zeta", "method", "she", "psnr", "ssim", "seconds")


@dataclass(frozen=True)
class BenchResult:
    """One benchmark row: a method's metrics on one (image, zeta) trial."""

    image: str
    zeta: float
    method: str
    she: float
    psnr: float
    ssim: float
    seconds: float

    def row(self) -> dict[str, str]:
        return {
            "image": self.image,
            "zeta": _format_number(self.zeta),
            "method": self.method,
            "she": f"{self.she:.6f}",
            "psnr": "inf" if math.isinf(self.psnr) else f"{self.psnr:.6f}",
            "ssim": f"{self.ssim:.6f}",
            "seconds": f"{self.seconds:.3f}",
        }


def _format_number(x: float) -> str:
    return f"{x:g}"


def _parse_triplet(ctx, param, value):
    """Parse 'rho,delta,rank' into ChannelParams, as a click callback."""
    if value is None:
        return None
    try:
        parts = [int(p) for p in value.split(",")]
    except ValueError:
        raise click.BadParameter(f"expected three integers 'rho,delta,rank', got {value!r}")
    if len(parts) != 3:
        raise click.BadParameter(f"expected three integers 'rho,delta,rank', got {value!r}")
    try:
        return ChannelParams(*parts)
    except ValueError as exc:
        raise click.BadParameter(str(exc))


def _apply_thread_override() -> None:
    """Honor EGGD_THREADS for the parallel shortest-path stage."""
    raw = os.environ.get("EGGD_THREADS")
    if not raw:
        return
    try:
        requested = int(raw)
    except ValueError:
        raise click.UsageError(f"EGGD_THREADS must be an integer, got {raw!r}")
    if requested < 1:
        raise click.UsageError(f"EGGD_THREADS must be >= 1, got {requested}")
    import numba

    numba.set_num_threads(min(requested, numba.config.NUMBA_NUM_THREADS))


def _load_square_image(path: str) -> np.ndarray:
    try:
        return load_image(path)
    except (OSError, ValueError) as exc:
        raise click.ClickException(str(exc))


def _check_side_limit(image: np.ndarray, max_side: int) -> None:
    side = image.shape[-1]
    if side > max_side:
        raise click.ClickException(
            f"image side {side} exceeds the configured limit {max_side}; the "
            f"pipeline materializes an {side * side}x{side * side} distance "
            "matrix, so raise --max-side only if you accept the memory cost"
        )


@click.group()
def main():
    """Geodesic-Gramian image denoising toolkit."""
    _apply_thread_override()


@main.command("add-noise")
@click.option("--input", "input_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--output", "output_path", required=True, type=click.Path(dir_okay=False))
@click.option("--zeta", type=float, default=None, help="Target relative noise percentage.")
@click.option("--sigma", type=float, default=None, help="Gaussian standard deviation.")
@click.option("--seed", type=int, default=0, show_default=True)
def cmd_add_noise(input_path, output_path, zeta, sigma, seed):
    """Contaminate an image with additive Gaussian noise and report the level."""
    if (zeta is None) == (sigma is None):
        raise click.UsageError("provide exactly one of --zeta and --sigma")
    try:
        spec = NoiseSpec(sigma=sigma, zeta_target=zeta, seed=seed)
    except ValueError as exc:
        raise click.UsageError(str(exc))
    image = _load_square_image(input_path)
    try:
        noisy, achieved, sigma_used = add_gaussian_noise(image, spec)
    except (EggdError, ZeroDivisionError) as exc:
        raise click.ClickException(str(exc))
    save_image(output_path, noisy)
    click.echo(f"zeta {achieved:.4f} %")
    click.echo(f"sigma {sigma_used:.6f}")


@main.command("denoise")
@click.option("--input", "input_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--output", "output_path", required=True, type=click.Path(dir_okay=False))
@click.option("--y", "y_params", callback=_parse_triplet, default="5,20,80", show_default=True,
              help="Y-channel rho,delta,rank (also used for --grayscale runs).")
@click.option("--cb", "cb_params", callback=_parse_triplet, default="7,20,80", show_default=True,
              help="Cb-channel rho,delta,rank.")
@click.option("--cr", "cr_params", callback=_parse_triplet, default="7,20,80", show_default=True,
              help="Cr-channel rho,delta,rank.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--oversample", type=int, default=DEFAULT_OVERSAMPLE, show_default=True)
@click.option("--max-side", type=int, default=DEFAULT_MAX_SIDE, show_default=True)
@click.option("--grayscale", is_flag=True, help="Denoise a single channel with the --y triplet.")
def cmd_denoise(input_path, output_path, y_params, cb_params, cr_params, seed, oversample,
                max_side, grayscale):
    """Denoise an image; prints per-stage wall-clock timings."""
    image = _load_square_image(input_path)
    _check_side_limit(image, max_side)
    timings: dict = {}
    try:
        if grayscale:
            if image.ndim != 2:
                raise click.ClickException(
                    "--grayscale expects a single-channel image; got an RGB file"
                )
            result = denoise_channel(
                image, y_params, seed=seed, oversample=oversample, timings=timings
            )
            stage_sets = {"gray": timings}
        else:
            if image.ndim != 3:
                raise click.ClickException(
                    "input is a single-channel image; pass --grayscale to denoise it"
                )
            triplet = ParamTriplet(y=y_params, cb=cb_params, cr=cr_params)
            result = denoise_rgb(
                image, triplet, seed=seed, oversample=oversample, timings=timings
            )
            stage_sets = timings
    except (EggdError, ValueError) as exc:
        raise click.ClickException(str(exc))
    save_image(output_path, result)
    for channel_name, stages in stage_sets.items():
        line = "  ".join(f"{stage} {seconds:.3f}s" for stage, seconds in stages.items())
        click.echo(f"{channel_name}: {line}")


@main.command("metrics")
@click.option("--input", "input_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--reference", "reference_path", type=click.Path(exists=True, dir_okay=False),
              default=None)
@click.option("--format", "fmt", type=click.Choice(["text", "json"]), default="text",
              show_default=True)
@click.option("--output", "output_path", type=click.Path(dir_okay=False), default=None,
              help="Write the report to a file instead of stdout.")
def cmd_metrics(input_path, reference_path, fmt, output_path):
    """Report ShE of an image, plus RMSE/PSNR/SSIM against a reference."""
    test = _load_square_image(input_path)
    reference = _load_square_image(reference_path) if reference_path else None
    try:
        doc = report(test, reference).to_document()
    except (ValueError, ZeroDivisionError) as exc:
        raise click.ClickException(str(exc))
    if fmt == "json":
        text = json.dumps(doc, indent=2) + "\n"
    else:
        text = "".join(f"{key} {value}\n" for key, value in doc.items())
    if output_path:
        Path(output_path).write_text(text)
    else:
        click.echo(text, nl=False)


def _bench_seed(seed: int, name: str, zeta: float) -> int:
    """Stable per-trial seed, independent of directory contents and order."""
    import hashlib

    digest = hashlib.sha256(f"{seed}:{name}:{zeta:g}".encode()).digest()
    return int.from_bytes(digest[:8], "big")


def _bench_one(name: str, clean: np.ndarray, zeta: float, params: ParamTriplet,
               seed: int, oversample: int) -> list[BenchResult]:
    trial_seed = _bench_seed(seed, name, zeta)
    start = time.perf_counter()
    noisy, achieved, _ = add_gaussian_noise(
        clean, NoiseSpec(zeta_target=zeta, seed=trial_seed)
    )
    noise_seconds = time.perf_counter() - start
    start = time.perf_counter()
    denoised = denoise_rgb(noisy, params, seed=trial_seed, oversample=oversample)
    denoise_seconds = time.perf_counter() - start
    return [
        BenchResult(name, zeta, "noisy", shannon_entropy(noisy),
                    psnr(clean, noisy), ssim(clean, noisy), noise_seconds),
        BenchResult(name, zeta, "eggd", shannon_entropy(denoised),
                    psnr(clean, denoised), ssim(clean, denoised), denoise_seconds),
    ]


def _summary_rows(results: list[BenchResult]) -> list[BenchResult]:
    rows = []
    zetas = sorted({r.zeta for r in results})
    for zeta in zetas:
        for method in ("noisy", "eggd"):
            group = [r for r in results if r.zeta == zeta and r.method == method]
            values = {
                field: np.array([getattr(r, field) for r in group])
                for field in ("she", "psnr", "ssim", "seconds")
            }
            rows.append(BenchResult("mean", zeta, method,
                                    *(float(values[f].mean()) for f in ("she", "psnr", "ssim")),
                                    float(values["seconds"].mean())))
            rows.append(BenchResult("sd", zeta, method,
                                    *(float(values[f].std()) for f in ("she", "psnr", "ssim")),
                                    float(values["seconds"].std())))
    return rows


def run_bench(image_paths: list[Path], zetas: list[float], seed: int, oversample: int,
              schedule: dict[float, ParamTriplet] | None = None) -> list[BenchResult]:
    """Benchmark library entry point; returns per-trial rows plus summaries."""
    schedule = schedule or BENCH_SCHEDULE
    results = []
    for path in image_paths:
        clean = load_image(path)
        if clean.ndim != 3:
            raise ValueError(f"benchmark images must be RGB, got grayscale {path}")
        for zeta in zetas:
            if zeta not in schedule:
                raise ValueError(
                    f"no parameter schedule for zeta={zeta:g}; available: "
                    f"{sorted(schedule)}"
                )
            results.extend(
                _bench_one(path.stem, clean, zeta, schedule[zeta], seed, oversample)
            )
    return results + _summary_rows(results)


@main.command("bench")
@click.option("--input-dir", required=True, type=click.Path(exists=True, file_okay=False))
@click.option("--output", "output_path", type=click.Path(dir_okay=False), default=None,
              help="Write rows to a file instead of stdout.")
@click.option("--zeta", "zetas", type=float, multiple=True,
              help="Relative noise levels; defaults to 2, 4, 6.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--oversample", type=int, default=DEFAULT_OVERSAMPLE, show_default=True)
@click.option("--max-side", type=int, default=DEFAULT_MAX_SIDE, show_default=True)
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv",
              show_default=True)
def cmd_bench(input_dir, output_path, zetas, seed, oversample, max_side, fmt):
    """Noise and denoise every clean image in a directory, reporting metrics.

    Each image is contaminated at every requested noise level, denoised with
    the level's parameter schedule, and scored (ShE, PSNR, SSIM) against the
    clean original. Per-level mean and standard-deviation rows follow the
    per-image rows.
    """
    paths = sorted(Path(input_dir).glob("*.png"))
    if not paths:
        raise click.ClickException(f"no PNG images found in {input_dir}")
    zetas = list(zetas) if zetas else list(DEFAULT_ZETA_LEVELS)
    for zeta in zetas:
        if zeta not in BENCH_SCHEDULE:
            raise click.UsageError(
                f"no default parameter schedule for zeta={zeta:g}; "
                f"choose from {sorted(BENCH_SCHEDULE)}"
            )
    for path in paths:
        _check_side_limit(_load_square_image(str(path)), max_side)
    try:
        results = run_bench(paths, zetas, seed, oversample)
    except (EggdError, ValueError, ZeroDivisionError) as exc:
        raise click.ClickException(str(exc))
    if fmt == "json":
        text = json.dumps([r.row() for r in results], indent=2) + "\n"
    else:
        buffer = io.StringIO()
        writer = csv.DictWriter(buffer, fieldnames=BENCH_FIELDS)
        writer.writeheader()
        for result in results:
            writer.writerow(result.row())
        text = buffer.getvalue()
    if output_path:
        Path(output_path).write_text(text)
    else:
        click.echo(text, nl=False)


@main.command("make-fixtures")
@click.option("--output-dir", required=True, type=click.Path(file_okay=False))
@click.option("--size", type=int, default=64, show_default=True)
def cmd_make_fixtures(output_dir, size):
    """Write the deterministic synthetic fixture set as PNGs."""
    try:
        paths = fixtures_mod.write_fixture_set(output_dir, n=size)
    except ValueError as exc:
        raise click.UsageError(str(exc))
    for path in paths:
        click.echo(str(path))


if __name__ == "__main__":
    sys.exit(main())
