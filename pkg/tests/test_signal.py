import io
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from schwarz_signal import catalog, engine, signal, straight
from schwarz_signal.errors import UndersampledError, WarpRangeError
from schwarz_signal.series import FspSeries

from oracles import R_NS


def const_series(beta, n=4096, fs=1000.0):
    tau = np.arange(n) / fs
    one = np.ones(n)
    return FspSeries(tau, tau.copy(), beta * one, beta * one, one, beta * tau,
                     B1=beta * tau, B2=tau.copy())


@pytest.fixture(scope="module")
def ns_series():
    return engine.build_series(catalog.preset("fig6_ns"), 20.0, 8193)


def test_signal_buffer_basics():
    b = signal.SignalBuffer.tone(5.0, 100.0, 101, t0=1.0)
    assert len(b) == 101 and b.duration == pytest.approx(1.0)
    assert b.times[0] == 1.0
    with pytest.raises(ValueError):
        signal.SignalBuffer([1.0], 10.0)
    with pytest.raises(ValueError):
        signal.SignalBuffer([1.0, 2.0], 0.0)


def test_signal_buffer_csv_round_trip(tmp_path):
    b = signal.SignalBuffer.tone(3.3, 50.0, 64, t0=0.25)
    p = tmp_path / "sig.csv"
    b.to_csv(p)
    back = signal.SignalBuffer.from_csv(p)
    np.testing.assert_array_equal(back.samples, b.samples)
    assert back.sample_rate == pytest.approx(50.0, rel=1e-12) and back.t0 == 0.25
    assert b.to_csv().splitlines()[0] == "tau,re,im"


def test_signal_buffer_csv_rejects_nonuniform():
    with pytest.raises(ValueError):
        signal.SignalBuffer.from_csv(io.StringIO("tau,re,im\n0,1,0\n1,1,0\n3,1,0\n"))


@pytest.mark.parametrize("mode", ["full", "gfsp", "gmdfsp"])
def test_warp_tone_unimodular(ns_series, mode):
    out = signal.warp_tone(2 * math.pi * 100.0, ns_series, mode)
    np.testing.assert_allclose(np.abs(out.samples), 1.0, atol=1e-14)


def test_warp_tone_monotone_phase(ns_series):
    out = signal.warp_tone(2 * math.pi * 100.0, ns_series)
    assert np.all(signal.phase_steps(out) > 0)


@pytest.mark.parametrize("beta", [0.5, 1.0, 2.0])
def test_frequency_scaling(beta):
    fs = 1000.0
    f1 = 0.1 * fs
    rep = signal.spectrum(signal.warp_tone(2 * math.pi * f1, const_series(beta, fs=fs)))
    assert rep.peak_freq == pytest.approx(beta * f1, abs=rep.bin_width)


def test_parseval():
    rng = np.random.default_rng(3)
    x = rng.normal(size=3000) + 1j * rng.normal(size=3000)
    rep = signal.spectrum(signal.SignalBuffer(x, 10.0))
    nfft = rep.magnitudes.shape[0]
    assert nfft == 4096
    assert np.sum(rep.magnitudes**2) / nfft == pytest.approx(np.sum(np.abs(x) ** 2), rel=1e-9)


def test_bin_centred_tone_occupies_one_bin():
    n, fs = 1024, 1024.0
    rep = signal.spectrum(signal.SignalBuffer.tone(100.0, fs, n))
    assert rep.peak_freq == 100.0
    assert rep.occupied_bins == 1 and rep.occupied_bw == rep.bin_width
    assert signal.spectrum(signal.SignalBuffer.tone(100.0, fs, n), -20.0).occupied_bw == rep.occupied_bw


def test_spectrum_options_and_csv(tmp_path):
    b = signal.SignalBuffer.tone(10.0, 100.0, 100)
    rep = signal.spectrum(b, window="hann", nfft=256)
    assert rep.magnitudes.shape == (256,) and rep.bin_freqs[0] == -50.0
    assert rep.summary()["threshold_db"] == 20.0
    rep.to_csv(tmp_path / "s.csv")
    assert (tmp_path / "s.csv").read_text().startswith("freq_hz,magnitude\n")
    with pytest.raises(ValueError):
        signal.spectrum(b, nfft=64)
    with pytest.raises(ValueError):
        signal.spectrum(b, window="blackman")
    assert signal.next_pow2(1) == 1 and signal.next_pow2(1025) == 2048


def test_chirp_fit_recovers_synthetic_chirp():
    fs, n = 1000.0, 20000
    t = np.arange(n) / fs
    f0, rate = 40.0, 0.3
    x = np.exp(1j * (0.7 + 2 * math.pi * f0 * t + 2 * math.pi * rate * t**2))
    fit = signal.chirp_fit(signal.SignalBuffer(x, fs))
    assert fit.f0 == pytest.approx(f0, rel=1e-6)
    assert fit.rate == pytest.approx(rate, rel=1e-6)
    assert fit.sweep_rate == pytest.approx(2 * rate, rel=1e-6)
    assert fit.residual < 1e-6


def test_chirp_fit_pure_tone():
    fit = signal.chirp_fit(signal.SignalBuffer.tone(123.0, 1000.0, 5000))
    assert fit.f0 == pytest.approx(123.0, rel=1e-9)
    assert abs(fit.rate) < 1e-9


def test_chirp_fit_undersampled():
    with pytest.raises(UndersampledError):
        signal.chirp_fit(signal.SignalBuffer.tone(490.0, 1000.0, 500))
    with pytest.raises(ValueError):
        signal.chirp_fit(signal.SignalBuffer(np.linspace(0.1, 1, 50), 10.0))


def test_chirp_fit_matches_chirp_constants(sun):
    traj = straight.StraightTrajectory(sun, 2 * 6.955e8, 5 * 6.955e8, 16700.0)
    s = engine.build_series(traj, 250.0, 250001)
    omega = 2 * math.pi * 100.0
    fit = signal.chirp_fit(signal.warp_tone(omega, s))
    k = straight.chirp_constants(traj)
    assert fit.rate == pytest.approx(k.C3 * omega / (2 * math.pi), rel=0.01)


def test_instantaneous_frequency_constant_iff_beta_constant(ns_series):
    flat = signal.instantaneous_frequency(signal.warp_tone(2 * math.pi * 50.0, const_series(0.8)))
    assert np.var(flat) < 1e-18
    moving = signal.instantaneous_frequency(signal.warp_tone(2 * math.pi * 50.0, ns_series))
    assert np.var(moving) > 1e-6


def test_warp_sampled_identity():
    fs, n = 1000.0, 4096
    tone = signal.SignalBuffer.tone(0.4 * fs / 2, fs, n)
    out = signal.warp_sampled(tone, const_series(1.0, n, fs))
    assert np.sqrt(np.mean(np.abs(out.samples - tone.samples) ** 2)) < 1e-6


def test_warp_sampled_fractional_positions_accurate():
    fs, n = 1000.0, 8192
    f = 0.4 * fs / 2
    tone = signal.SignalBuffer.tone(f, fs, n)
    s = const_series(0.7, n, fs)
    out = signal.warp_sampled(tone, s)
    ref = np.exp(2j * math.pi * f * s.B)
    core = slice(20, int(0.7 * n) - 20)
    assert np.sqrt(np.mean(np.abs(out.samples[core] - ref[core]) ** 2)) < 1e-6


def test_warp_sampled_halves_frequency():
    fs, n = 1000.0, 8192
    tone = signal.SignalBuffer.tone(100.0, fs, n)
    rep = signal.spectrum(signal.warp_sampled(tone, const_series(0.5, n, fs)), window="hann")
    assert rep.peak_freq == pytest.approx(50.0, abs=rep.bin_width)


def test_warp_sampled_out_of_range():
    tone = signal.SignalBuffer.tone(10.0, 1000.0, 1000)
    with pytest.raises(WarpRangeError, match="warp-out-of-range"):
        signal.warp_sampled(tone, const_series(2.0, 1000, 1000.0))


def test_warp_sampled_two_tones_shift_by_their_own_ratio():
    fs, n = 1000.0, 16384
    t = np.arange(n) / fs
    x = np.exp(2j * math.pi * 60.0 * t) + np.exp(2j * math.pi * 150.0 * t)
    out = signal.warp_sampled(signal.SignalBuffer(x, fs), const_series(0.8, n, fs))
    rep = signal.spectrum(out, window="hann")
    mag, f = rep.magnitudes, rep.bin_freqs
    top = f[np.argsort(mag)[-2:]]
    assert sorted(np.round(top, 0)) == [48.0, 120.0]


@given(st.floats(0.2, 3.0), st.floats(0.01, 0.15))
def test_tone_warp_frequency_property(beta, frac):
    fs = 200.0
    out = signal.warp_tone(2 * math.pi * frac * fs, const_series(beta, 256, fs))
    inst = signal.instantaneous_frequency(out)
    np.testing.assert_allclose(inst, beta * frac * fs, rtol=1e-9)


def test_two_tones_become_chirps_with_distinct_rates():
    s = engine.build_series(catalog.preset("fig6_ns"), 20.0, 20001)
    fs = 1.0 / s.step
    f = (50.0, 120.0)
    fits = [signal.chirp_fit(signal.warp_tone(2 * math.pi * fk, s)) for fk in f]
    assert fits[1].rate / fits[0].rate == pytest.approx(f[1] / f[0], rel=1e-6)
    assert fits[0].rate < 0
    # the resampler is linear, so the two-tone input warps into the sum of both chirps
    n = int(21.0 * fs)
    t = np.arange(n) / fs
    x = signal.SignalBuffer(np.exp(2j * math.pi * f[0] * t) + np.exp(2j * math.pi * f[1] * t), fs)
    out = signal.warp_sampled(x, s).samples
    ref = sum(signal.warp_tone(2 * math.pi * fk, s).samples for fk in f)
    assert np.sqrt(np.mean(np.abs(out[10:] - ref[10:]) ** 2)) < 1e-6
