import numpy as np
import pytest

from rcskit.waveform import CirCapture, cir_extract, target_power, total_power, zc_generate


def periodic_autocorr(samples: np.ndarray) -> np.ndarray:
    # Direct O(N^2) correlation oracle.
    n = samples.size
    return np.array(
        [np.sum(samples * np.conj(np.roll(samples, lag))) for lag in range(n)]
    )


def circular_convolve(probe: np.ndarray, channel: np.ndarray) -> np.ndarray:
    n = probe.size
    out = np.zeros(n, dtype=complex)
    for k, gain in enumerate(channel):
        if gain != 0:
            out += gain * np.roll(probe, k)
    return out


def test_zc_first_sample_and_amplitude():
    seq = zc_generate(128, 1)
    assert seq.samples[0] == pytest.approx(1.0 + 0.0j, abs=1e-15)
    assert np.max(np.abs(np.abs(seq.samples) - 1.0)) < 1e-12


def test_zc_small_odd_length():
    seq = zc_generate(3, 2)
    assert np.allclose(np.abs(seq.samples), 1.0, atol=1e-15)


def test_zc_ideal_autocorrelation():
    seq = zc_generate(128, 1)
    ac = periodic_autocorr(seq.samples)
    assert abs(ac[0]) == pytest.approx(128.0, rel=1e-12)
    assert np.max(np.abs(ac[1:])) < 1e-9


@pytest.mark.parametrize("length,root", [(4, 3), (16, 5), (63, 8), (128, 3), (255, 7), (512, 11)])
def test_zc_autocorrelation_across_lengths(length, root):
    seq = zc_generate(length, root)
    ac = periodic_autocorr(seq.samples)
    assert np.max(np.abs(ac[1:])) / abs(ac[0]) < 1e-11


def test_zc_rejects_non_coprime_root():
    with pytest.raises(ValueError):
        zc_generate(128, 2)


def test_cir_identity_channel():
    seq = zc_generate(128, 1)
    cap = cir_extract(seq.samples, seq, frequency_hz=25e9, scenario_tag="target")
    expected = np.zeros(128, dtype=complex)
    expected[0] = 1.0
    assert np.max(np.abs(cap.taps - expected)) < 1e-9


def test_cir_single_delayed_tap():
    seq = zc_generate(128, 1)
    channel = np.zeros(128, dtype=complex)
    channel[5] = 0.5
    received = circular_convolve(seq.samples, channel)
    cap = cir_extract(received, seq, frequency_hz=25e9)
    assert abs(cap.taps[5] - 0.5) < 1e-9
    off = np.delete(np.abs(cap.taps), 5)
    assert np.max(off) < 1e-9


def test_cir_two_taps():
    seq = zc_generate(128, 1)
    channel = np.zeros(128, dtype=complex)
    channel[0] = 1.0
    channel[7] = 0.3
    received = circular_convolve(seq.samples, channel)
    cap = cir_extract(received, seq, frequency_hz=25e9)
    assert np.max(np.abs(cap.taps - channel)) < 1e-9


def test_cir_random_channels_recovered():
    rng = np.random.default_rng(42)
    seq = zc_generate(128, 3)
    for _ in range(5):
        channel = np.zeros(128, dtype=complex)
        support = rng.choice(128, size=4, replace=False)
        channel[support] = rng.normal(size=4) + 1j * rng.normal(size=4)
        received = circular_convolve(seq.samples, channel)
        cap = cir_extract(received, seq, frequency_hz=26e9)
        assert np.max(np.abs(cap.taps - channel)) < 1e-9


def test_cir_length_mismatch():
    seq = zc_generate(128, 1)
    with pytest.raises(ValueError):
        cir_extract(np.ones(64, dtype=complex), seq, frequency_hz=25e9)


def test_total_power_values():
    assert total_power(np.zeros(8, dtype=complex)) == 0.0
    impulse = np.zeros(8, dtype=complex)
    impulse[0] = 1.0
    assert total_power(impulse) == 1.0
    assert total_power(np.array([1.0, 1.0j, -1.0])) == pytest.approx(3.0, rel=1e-15)


def test_total_power_invariances():
    rng = np.random.default_rng(7)
    taps = rng.normal(size=32) + 1j * rng.normal(size=32)
    base = total_power(taps)
    for seed in range(3):
        perm = np.random.default_rng(seed).permutation(32)
        assert total_power(taps[perm]) == pytest.approx(base, rel=1e-12)
        rotated = taps * np.exp(1j * (0.1 + seed))
        assert total_power(rotated) == pytest.approx(base, rel=1e-12)


def test_target_power_arithmetic():
    budget = target_power(10.0, 4.0, 1.0)
    assert budget.p_tar == 5.0
    assert not budget.clamped


def test_target_power_clamps_oversubtraction():
    budget = target_power(4.0, 4.0, 1.0)
    assert budget.p_tar == 0.0
    assert budget.clamped


def test_noise_floor_power():
    from rcskit.waveform import NOISE_FLOOR_DB_DEFAULT, noise_floor_power

    assert NOISE_FLOOR_DB_DEFAULT == -72.0
    assert noise_floor_power() == pytest.approx(10.0**-7.2, rel=1e-15)
    assert noise_floor_power(0.0) == 1.0
    assert noise_floor_power(-30.0) == pytest.approx(1e-3, rel=1e-12)


def test_power_accounting_end_to_end():
    # Background and injected target occupy disjoint taps, so the injected
    # power is recovered exactly by subtraction.
    rng = np.random.default_rng(3)
    background = np.zeros(128, dtype=complex)
    background[:4] = rng.normal(size=4) + 1j * rng.normal(size=4)
    q = 0.37
    with_target = background.copy()
    with_target[10] = np.sqrt(q)
    p_tot = total_power(with_target)
    p_back = total_power(background)
    budget = target_power(p_tot, p_back, 0.0)
    assert budget.p_tar == pytest.approx(q, abs=1e-9)


def test_cir_capture_validation():
    with pytest.raises(ValueError):
        CirCapture(taps=np.array([np.nan + 0j]), frequency_hz=25e9, scenario_tag="x")
    with pytest.raises(ValueError):
        CirCapture(taps=np.ones(4, dtype=complex), frequency_hz=0.0, scenario_tag="x")
