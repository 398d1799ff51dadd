"""ULA geometry, array factor, directivity gain, pattern sampling, band power.

Convention: the array factor is the plain inner product v . a(s) with the
weights applied unconjugated, a(s)_m = exp(-1j*m*kd*s).  Many antenna texts
conjugate the weights; this package does not, so a steering ramp
exp(+1j*m*kd*s0) moves the beam to s0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .quadrature import adaptive_simpson

__all__ = [
    "ArrayConfig",
    "PatternSample",
    "steering_vector",
    "array_factor",
    "directivity_gain",
    "sample_pattern",
    "band_power",
    "angle_to_phase",
    "phase_to_angle",
    "pattern_nulls",
    "default_grid",
    "write_pattern_csv",
    "PATTERN_CSV_HEADER",
]

_DOMAIN_SLACK = 1e-12


@dataclass(frozen=True)
class ArrayConfig:
    """Uniform linear array: element count and spacing in wavelengths.

    ``kd`` and ``period`` are derived so they can never drift out of sync
    with ``spacing_ratio``.
    """

    elements: int
    spacing_ratio: float

    def __post_init__(self):
        if isinstance(self.elements, bool) or not isinstance(
            self.elements, (int, np.integer)
        ):
            raise ValueError(f"elements must be an integer, got {self.elements!r}")
        if self.elements < 1:
            raise ValueError(f"need at least one element, got {self.elements}")
        if not self.spacing_ratio > 0:
            raise ValueError(f"spacing ratio must be positive, got {self.spacing_ratio}")

    @property
    def kd(self) -> float:
        """Electrical spacing k*d in radians (pi at half-wavelength spacing)."""
        return 2.0 * math.pi * self.spacing_ratio

    @property
    def period(self) -> float:
        """Period of the array factor in the s = cos(theta) domain: lambda/d."""
        return 1.0 / self.spacing_ratio


@dataclass(frozen=True)
class PatternSample:
    s: float
    theta: float
    af: complex
    gain: float


def steering_vector(cfg: ArrayConfig, s: float) -> np.ndarray:
    """Element phasors exp(-1j*m*kd*s), m = 0..M-1; element 0 is always 1."""
    return np.exp(-1j * cfg.kd * float(s) * np.arange(cfg.elements))


def _check_weights(v, cfg: ArrayConfig) -> np.ndarray:
    w = np.asarray(v)
    if w.shape != (cfg.elements,):
        raise ValueError(f"expected {cfg.elements} weights, got shape {w.shape}")
    return w


def array_factor(v, cfg: ArrayConfig, s):
    """Far-field sum v . a(s).  Accepts a scalar phase or an array of phases."""
    w = _check_weights(v, cfg)
    s_arr = np.asarray(s, dtype=float)
    phases = np.exp(-1j * cfg.kd * np.multiply.outer(s_arr, np.arange(cfg.elements)))
    out = phases @ w
    return complex(out) if s_arr.ndim == 0 else out


def directivity_gain(v, cfg: ArrayConfig, s):
    """|array factor|^2; scalar in, scalar out."""
    af = array_factor(v, cfg, s)
    if isinstance(af, complex):
        return af.real * af.real + af.imag * af.imag
    return af.real * af.real + af.imag * af.imag


def sample_pattern(v, cfg: ArrayConfig, grid) -> list[PatternSample]:
    """One PatternSample per grid point, in grid order.

    Phases outside [-1, 1] are legal for diagnostic sweeps; their theta column
    is NaN since no physical angle maps there.
    """
    grid_arr = np.asarray(list(grid), dtype=float)
    if grid_arr.size == 0:
        return []
    if not np.all(np.isfinite(grid_arr)):
        raise ValueError("grid values must be finite")
    af = array_factor(v, cfg, grid_arr)
    samples = []
    for s_val, af_val in zip(grid_arr, af):
        theta = math.acos(s_val) if -1.0 <= s_val <= 1.0 else math.nan
        af_c = complex(af_val)
        gain = af_c.real * af_c.real + af_c.imag * af_c.imag
        samples.append(PatternSample(s=float(s_val), theta=theta, af=af_c, gain=gain))
    return samples


def _oscillation_panels(cfg: ArrayConfig, a: float, b: float) -> int:
    # enough initial panels that the fastest gain oscillation is resolved
    cycles = (b - a) * cfg.elements * cfg.kd / math.pi
    return (max(9, int(cycles) + 1)) | 1


def band_power(v, cfg: ArrayConfig, a: float, b: float, tol: float = 1e-9) -> float:
    """Integral of the directivity gain over [a, b] by adaptive Simpson.

    The integrand is a trigonometric polynomial, so failure to converge
    indicates a bug rather than a hard integrand.
    """
    if not a < b:
        raise ValueError(f"need a < b, got [{a}, {b}]")
    w = np.asarray(_check_weights(v, cfg), dtype=complex)
    kd = cfg.kd
    idx = np.arange(cfg.elements)

    def gain(s: float) -> float:
        af = np.exp(-1j * kd * s * idx) @ w
        return af.real * af.real + af.imag * af.imag

    return float(
        adaptive_simpson(
            gain,
            float(a),
            float(b),
            tol=tol,
            max_depth=30,
            initial_panels=_oscillation_panels(cfg, a, b),
        )
    )


def angle_to_phase(theta: float) -> float:
    """s = cos(theta) for theta in [0, pi]."""
    if not -_DOMAIN_SLACK <= theta <= math.pi + _DOMAIN_SLACK:
        raise ValueError(f"theta {theta} outside [0, pi]")
    return math.cos(min(max(theta, 0.0), math.pi))


def phase_to_angle(s: float) -> float:
    """theta = arccos(s) for s in [-1, 1]."""
    if not -1.0 - _DOMAIN_SLACK <= s <= 1.0 + _DOMAIN_SLACK:
        raise ValueError(f"phase {s} outside [-1, 1]")
    return math.acos(min(max(s, -1.0), 1.0))


def pattern_nulls(v, cfg: ArrayConfig, a: float, b: float, circle_tol: float = 1e-8) -> list[float]:
    """Phases in [a, b] where the array factor vanishes.

    The array factor is a polynomial in w = exp(-1j*kd*s); its roots on the
    unit circle map back to real phases modulo the period, which locates the
    nulls exactly instead of relying on grid resolution.  A root of
    multiplicity m scatters numerically by about eps^(1/m), so callers
    expecting repeated nulls must widen ``circle_tol`` accordingly.
    """
    if not a <= b:
        raise ValueError(f"need a <= b, got [{a}, {b}]")
    w = np.asarray(_check_weights(v, cfg), dtype=complex)
    if w.size < 2 or not np.any(w != 0):
        return []
    roots = np.roots(w[::-1])
    kd = cfg.kd
    period = cfg.period
    nulls: list[float] = []
    for root in roots:
        if abs(abs(root) - 1.0) > circle_tol:
            continue
        s0 = -float(np.angle(root)) / kd
        k_lo = math.ceil((a - s0) / period - 1e-12)
        k_hi = math.floor((b - s0) / period + 1e-12)
        for k in range(k_lo, k_hi + 1):
            nulls.append(s0 + k * period)
    return sorted(nulls)


def default_grid(points: int = 2001) -> np.ndarray:
    """Uniform phase grid over [-1, 1] with both endpoints included exactly."""
    if points < 2:
        raise ValueError("need at least 2 grid points")
    return np.linspace(-1.0, 1.0, points)


PATTERN_CSV_HEADER = "s,theta_rad,af_re,af_im,gain"


def write_pattern_csv(samples, path, precision: int = 17) -> None:
    def fmt(x: float) -> str:
        return format(x, f".{precision}g")

    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(PATTERN_CSV_HEADER + "\n")
        for smp in samples:
            fh.write(
                ",".join(
                    (
                        fmt(smp.s),
                        fmt(smp.theta),
                        fmt(smp.af.real),
                        fmt(smp.af.imag),
                        fmt(smp.gain),
                    )
                )
                + "\n"
            )
