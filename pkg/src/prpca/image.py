"""Grayscale image denoising pipeline over binary PGM files.

Pixels live in [0, 1] (0 black, 1 white). Noise is added unclamped so the
solver sees the raw Gaussian observation; clamping happens only when a
result is written back to disk.
"""

from __future__ import annotations

import dataclasses
import time

import numpy as np

from .errors import FormatError, InvalidParameter
from .interpolation import projector_pair
from .simulation import gaussian, rmse, stream
from .solver import SolveConfig, default_penalties, solve

_WHITESPACE = b" \t\n\r\x0b\x0c"


@dataclasses.dataclass
class GrayImage:
    width: int
    height: int
    pixels: np.ndarray  # (height, width) float64

    @classmethod
    def from_array(cls, pixels) -> "GrayImage":
        arr = np.asarray(pixels, dtype=np.float64)
        if arr.ndim != 2 or arr.size == 0:
            raise InvalidParameter("pixels must form a nonempty 2-d array")
        return cls(width=arr.shape[1], height=arr.shape[0], pixels=arr)


def _next_token(data: bytes, pos: int) -> tuple[bytes, int]:
    while pos < len(data):
        byte = data[pos]
        if byte in _WHITESPACE:
            pos += 1
        elif byte == ord("#"):
            end = data.find(b"\n", pos)
            if end < 0:
                raise FormatError("unterminated comment in header", offset=pos)
            pos = end + 1
        else:
            break
    start = pos
    while pos < len(data) and data[pos] not in _WHITESPACE:
        pos += 1
    if start == pos:
        raise FormatError("unexpected end of header", offset=pos)
    return data[start:pos], pos


def load_pgm(path) -> GrayImage:
    """Read a binary PGM (magic P5, maxval 255) into [0, 1] pixels."""
    with open(path, "rb") as fh:
        data = fh.read()
    if data[:2] != b"P5":
        raise FormatError(f"bad magic {data[:2]!r}, expected b'P5'", offset=0)
    pos = 2
    fields = []
    for _ in range(3):
        token, pos = _next_token(data, pos)
        try:
            fields.append(int(token))
        except ValueError:
            raise FormatError(f"non-numeric header token {token!r}", offset=pos - len(token))
    width, height, maxval = fields
    if width <= 0 or height <= 0:
        raise FormatError(f"bad dimensions {width}x{height}", offset=2)
    if maxval != 255:
        raise FormatError(f"unsupported maxval {maxval}, only 255 is handled", offset=pos)
    pos += 1  # single whitespace byte separates header from raster
    if pos > len(data):
        raise FormatError("missing raster separator", offset=len(data))
    expected = width * height
    raster = data[pos : pos + expected]
    if len(raster) < expected:
        raise FormatError(
            f"truncated raster, expected {expected} bytes, found {len(raster)}",
            offset=len(data),
        )
    pixels = np.frombuffer(raster, dtype=np.uint8).astype(np.float64) / 255.0
    return GrayImage(width=width, height=height, pixels=pixels.reshape(height, width))


def save_pgm(img: GrayImage, path) -> int:
    """Write a binary PGM, clamping pixels to [0, 1]; returns the number of
    pixels that needed clamping."""
    p = img.pixels
    clamped = int(np.count_nonzero((p < 0.0) | (p > 1.0)))
    raster = np.rint(np.clip(p, 0.0, 1.0) * 255.0).astype(np.uint8)
    header = f"P5\n{img.width} {img.height}\n255\n".encode("ascii")
    with open(path, "wb") as fh:
        fh.write(header + raster.tobytes())
    return clamped


def add_noise(img: GrayImage, sigma: float, seed: int) -> GrayImage:
    """Add i.i.d. N(0, sigma^2) to every pixel, without clamping."""
    if sigma < 0:
        raise InvalidParameter("sigma must be nonnegative")
    noise = gaussian(stream(seed, 0, "image_noise"), img.pixels.shape, sigma)
    return GrayImage(width=img.width, height=img.height, pixels=img.pixels + noise)


def recover(
    noisy: GrayImage,
    kind: str,
    sigma: float,
    clean: GrayImage | None = None,
    lambda1: float | None = None,
    lambda2: float | None = None,
    max_iters: int = 500,
    rel_tol: float = 1e-7,
) -> tuple[GrayImage, dict]:
    """Denoise via the accelerated solver with the chosen (P, Q) kind.

    Penalties default to the standard noisy-recovery levels for the image
    height at the given sigma. Metrics report the solve time, iteration
    count, number of clamped pixels, and the RMSE against ``clean`` when a
    reference is available.
    """
    N, M = noisy.height, noisy.width
    pair = projector_pair(kind, N, M)
    if lambda1 is None or lambda2 is None:
        d1, d2 = default_penalties(N, sigma)
        lambda1 = d1 if lambda1 is None else lambda1
        lambda2 = d2 if lambda2 is None else lambda2
    config = SolveConfig(
        Z=noisy.pixels,
        pair=pair,
        lambda1=lambda1,
        lambda2=lambda2,
        max_iters=max_iters,
        rel_tol=rel_tol,
        accelerate=True,
    )
    start = time.perf_counter()
    result = solve(config)
    seconds = time.perf_counter() - start
    theta = result.ThetaHat
    clamp_count = int(np.count_nonzero((theta < 0.0) | (theta > 1.0)))
    recovered = GrayImage(width=M, height=N, pixels=theta)
    metrics = {
        "kind": kind,
        "sigma": sigma,
        "lambda1": lambda1,
        "lambda2": lambda2,
        "seconds": seconds,
        "iterations": result.iterations,
        "converged": result.converged,
        "clamped": clamp_count,
        "rmse": rmse(np.clip(theta, 0.0, 1.0), clean.pixels) if clean is not None else float("nan"),
    }
    return recovered, metrics
