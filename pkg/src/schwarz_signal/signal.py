"""Passing signals through the channel and looking at what comes out.

A receiver that sees shift ``beta(tau)`` hears ``f2(tau) = f1(B(tau))`` where
``B`` integrates ``beta`` over its proper time. For a tone this is a phase
``omega1 * B(tau)``; for a sampled signal it is a resampling at warped times.
"""

import io
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy import fft as sfft

from . import _accel
from .errors import UndersampledError, WarpRangeError

UNWRAP_LIMIT = 0.95 * np.pi


@dataclass
class SignalBuffer:
    """Uniformly sampled complex baseband signal starting at ``t0`` (s)."""

    samples: np.ndarray
    sample_rate: float
    t0: float = 0.0

    def __post_init__(self):
        self.samples = np.asarray(self.samples, dtype=np.complex128)
        if self.samples.ndim != 1 or self.samples.shape[0] < 2:
            raise ValueError("a signal buffer needs at least two samples")
        if not self.sample_rate > 0:
            raise ValueError(f"sample_rate must be positive, got {self.sample_rate!r}")
        self.sample_rate = float(self.sample_rate)

    def __len__(self):
        return self.samples.shape[0]

    @property
    def times(self):
        return self.t0 + np.arange(len(self)) / self.sample_rate

    @property
    def duration(self):
        return (len(self) - 1) / self.sample_rate

    @classmethod
    def tone(cls, freq, sample_rate, n, t0=0.0):
        t = t0 + np.arange(n) / sample_rate
        return cls(np.exp(2j * np.pi * freq * t), sample_rate, t0)

    def to_csv(self, dest=None):
        """``tau,re,im`` rows at 17 significant digits."""
        data = np.column_stack([self.times, self.samples.real, self.samples.imag])
        return _write_csv(dest, ("tau", "re", "im"), data)

    @classmethod
    def from_csv(cls, src):
        data = np.loadtxt(src, delimiter=",", skiprows=1, ndmin=2)
        t = data[:, 0]
        if t.shape[0] < 2:
            raise ValueError("signal CSV needs at least two rows")
        step = (t[-1] - t[0]) / (t.shape[0] - 1)
        if not np.allclose(np.diff(t), step, rtol=1e-9, atol=0.0):
            raise ValueError("signal CSV times are not uniformly spaced")
        return cls(data[:, 1] + 1j * data[:, 2], 1.0 / step, float(t[0]))


def _write_csv(dest, header, data):
    if dest is not None and (isinstance(dest, str) or hasattr(dest, "__fspath__")):
        with open(dest, "w", newline="") as fh:
            return _write_csv(fh, header, data)
    buf = io.StringIO() if dest is None else dest
    buf.write(",".join(header) + "\n")
    np.savetxt(buf, data, fmt="%.17g", delimiter=",")
    return buf.getvalue() if dest is None else None


def _grid_rate(series):
    step = series.step
    if step is None:
        raise ValueError("the series grid is not uniform")
    return 1.0 / step


def warp_tone(omega1, series, mode="full"):
    """Received version of ``exp(i omega1 t)``: samples ``exp(i omega1 B(tau))``.

    ``mode`` picks the warp: ``full`` (both effects), ``gfsp`` (gravitational
    only) or ``gmdfsp`` (gravitationally modified Doppler only).
    """
    phase = omega1 * series.warped_time(mode)
    out = np.empty(phase.shape[0], dtype=np.complex128)
    np.cos(phase, out=out.real)
    np.sin(phase, out=out.imag)
    return SignalBuffer(out, _grid_rate(series), float(series.tau[0]))


def warp_sampled(f1, series, mode="full", backend=None):
    """Resample ``f1`` at the warped times ``B(tau)`` (16-tap windowed sinc).

    Raises WarpRangeError when a warped time falls outside ``f1``'s span.
    """
    B = series.warped_time(mode)
    pos = (B - f1.t0) * f1.sample_rate
    span = len(f1) - 1
    tol = 1e-9 * max(span, 1)
    lo, hi = float(pos.min()), float(pos.max())
    if lo < -tol or hi > span + tol:
        raise WarpRangeError(
            f"warp-out-of-range: warped times [{B.min()!r}, {B.max()!r}] s leave the input "
            f"span [{f1.t0!r}, {f1.t0 + f1.duration!r}] s"
        )
    pos = np.clip(pos, 0.0, span)
    out = _accel.sinc_resample(f1.samples, pos, backend=backend)
    return SignalBuffer(out, _grid_rate(series), float(series.tau[0]))


@dataclass
class SpectrumReport:
    """DFT magnitudes on an ascending frequency axis (``-fs/2`` to ``fs/2``)."""

    bin_freqs: np.ndarray
    magnitudes: np.ndarray
    peak_freq: float
    occupied_bw: float
    threshold_db: float
    bin_width: float
    band: tuple = (0.0, 0.0)

    @property
    def peak_index(self):
        return int(np.argmax(self.magnitudes))

    @property
    def occupied_bins(self):
        return int(round(self.occupied_bw / self.bin_width))

    def summary(self):
        return {
            "peak_freq": self.peak_freq,
            "occupied_bw": self.occupied_bw,
            "threshold_db": self.threshold_db,
            "bin_width": self.bin_width,
            "band": list(self.band),
        }

    def to_csv(self, dest=None):
        return _write_csv(dest, ("freq_hz", "magnitude"),
                          np.column_stack([self.bin_freqs, self.magnitudes]))


def next_pow2(n):
    return 1 << (int(n) - 1).bit_length()


def spectrum(buf, threshold_db=20.0, window=None, nfft=None):
    """Magnitude spectrum and occupied bandwidth.

    Parameters
    ----------
    buf : SignalBuffer
    threshold_db : float
        Bins within this many dB of the peak count as occupied; the sign is
        ignored, so 20 and -20 mean the same.
    window : {None, "hann"}
        Rectangular by default.
    nfft : int, optional
        Transform length; defaults to the next power of two.

    Returns
    -------
    SpectrumReport
        ``occupied_bw`` spans from the lowest to the highest occupied bin
        inclusive.
    """
    x = buf.samples
    n = x.shape[0]
    nfft = next_pow2(n) if nfft is None else int(nfft)
    if nfft < n:
        raise ValueError(f"nfft={nfft} is shorter than the signal ({n})")
    if window == "hann":
        x = x * np.hanning(n)
    elif window not in (None, "rect", "rectangular"):
        raise ValueError(f"unknown window {window!r}")
    mag = np.abs(sfft.fft(x, nfft))
    del x
    mag = sfft.fftshift(mag)
    df = buf.sample_rate / nfft
    freqs = (np.arange(nfft) - nfft // 2) * df
    k = int(np.argmax(mag))
    floor = mag[k] * 10.0 ** (-abs(threshold_db) / 20.0)
    occ = np.flatnonzero(mag >= floor)
    lo, hi = int(occ[0]), int(occ[-1])
    return SpectrumReport(freqs, mag, float(freqs[k]), (hi - lo + 1) * df, float(abs(threshold_db)),
                          df, (float(freqs[lo]), float(freqs[hi])))


def phase_steps(buf):
    """Per-sample phase increments in (-pi, pi]."""
    x = buf.samples
    return np.angle(x[1:] * np.conj(x[:-1]))


def instantaneous_frequency(buf):
    """Discrete phase derivative in Hz, one value per sample interval."""
    return phase_steps(buf) * (buf.sample_rate / (2.0 * np.pi))


class ChirpFit(NamedTuple):
    """Quadratic-phase fit ``phi0 + 2 pi f0 tau + 2 pi rate tau**2``.

    ``rate`` multiplies ``2 pi tau**2``, so a received phase
    ``omega (C0 tau + C3 tau**2)`` gives ``rate = C3 omega / (2 pi)``. The
    instantaneous frequency then sweeps at ``sweep_rate = 2 * rate`` Hz/s.
    """

    f0: float
    rate: float
    residual: float

    @property
    def sweep_rate(self):
        return 2.0 * self.rate


def chirp_fit(buf, unimodular_tol=0.01):
    """Least-squares quadratic fit to the unwrapped phase of ``buf``.

    ``tau`` is measured from ``buf.t0``. ``residual`` is the RMS phase
    residual (rad). Raises UndersampledError if any per-sample phase step
    comes within 5% of pi, where unwrapping becomes ambiguous.
    """
    x = buf.samples
    amp = np.abs(x)
    ref = np.median(amp)
    if not ref > 0 or np.max(np.abs(amp - ref)) > unimodular_tol * ref:
        raise ValueError("chirp_fit needs a near-unimodular signal")
    steps = phase_steps(buf)
    worst = float(np.max(np.abs(steps)))
    if worst > UNWRAP_LIMIT:
        raise UndersampledError(
            f"undersampled: per-sample phase step {worst:.4f} rad is too close to pi to unwrap"
        )
    # remove the mean rotation first so the remaining phase is small and smooth
    k = np.arange(x.shape[0], dtype=float)
    w0 = float(np.mean(steps))
    rest = np.unwrap(np.angle(x * np.exp(-1j * w0 * k)))
    t = k / buf.sample_rate
    mid = 0.5 * t[-1]
    tc = (t - mid) / max(mid, 1e-300)
    c2, c1, c0 = np.polyfit(tc, rest, 2)
    resid = rest - ((c2 * tc + c1) * tc + c0)
    # back to tau measured from t0: phase = a0 + a1 t + a2 t**2
    a2 = c2 / mid**2
    a1 = c1 / mid - 2.0 * a2 * mid
    f0 = (w0 * buf.sample_rate + a1) / (2.0 * np.pi)
    return ChirpFit(float(f0), float(a2 / (2.0 * np.pi)), float(np.sqrt(np.mean(resid**2))))
