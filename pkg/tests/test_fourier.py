"""Transform correctness against brute-force oracles, plus spectral invariants."""

import numpy as np
import pytest

from specmix.fourier import (
    SpectralImage,
    decompose,
    dft_forward,
    dft_inverse,
    image_of_spectral,
    recompose,
    reconstruct_amplitude_only,
    reconstruct_phase_only,
    spectral_of_image,
)

# ---------------------------------------------------------------------------
# Independent oracles: direct O(N^4) double sums, no FFT anywhere.
# ---------------------------------------------------------------------------


def dft2_direct(x):
    h_dim, w_dim = x.shape
    out = np.zeros((h_dim, w_dim), dtype=np.complex128)
    for u in range(h_dim):
        for v in range(w_dim):
            acc = 0.0 + 0.0j
            for h in range(h_dim):
                for w in range(w_dim):
                    ang = -2.0 * np.pi * (h * u / h_dim + w * v / w_dim)
                    acc += x[h, w] * complex(np.cos(ang), np.sin(ang))
            out[u, v] = acc
    return out


def idft2_direct(spectrum):
    h_dim, w_dim = spectrum.shape
    out = np.zeros((h_dim, w_dim), dtype=np.complex128)
    for h in range(h_dim):
        for w in range(w_dim):
            acc = 0.0 + 0.0j
            for u in range(h_dim):
                for v in range(w_dim):
                    ang = 2.0 * np.pi * (h * u / h_dim + w * v / w_dim)
                    acc += spectrum[u, v] * complex(np.cos(ang), np.sin(ang))
            out[h, w] = acc / (h_dim * w_dim)
    return out


def rel_err(got, want):
    scale = max(np.max(np.abs(want)), 1e-300)
    return np.max(np.abs(got - want)) / scale


class TestForward:
    def test_constant_plane_is_dc_only(self):
        c = 0.37
        f = dft_forward(np.full((4, 4), c))
        assert abs(f[0, 0] - 16 * c) < 1e-12
        rest = f.copy()
        rest[0, 0] = 0.0
        assert np.max(np.abs(rest)) < 1e-12

    def test_impulse_gives_flat_spectrum(self):
        x = np.zeros((5, 6))
        x[0, 0] = 1.0
        f = dft_forward(x)
        assert np.max(np.abs(f - 1.0)) < 1e-12

    @pytest.mark.parametrize("shape", [(8, 8), (6, 10), (5, 7), (1, 3), (16, 16)])
    def test_matches_direct_sum(self, shape):
        rng = np.random.default_rng(7)
        x = rng.random(shape)
        assert rel_err(dft_forward(x), dft2_direct(x)) < 1e-9

    def test_rejects_empty_plane(self):
        with pytest.raises(ValueError):
            dft_forward(np.zeros((0, 4)))
        with pytest.raises(ValueError):
            dft_forward(np.zeros(3))


class TestInverse:
    def test_round_trip(self):
        rng = np.random.default_rng(11)
        x = rng.random((16, 16))
        assert np.max(np.abs(dft_inverse(dft_forward(x)) - x)) < 1e-6

    def test_dc_only_spectrum_gives_constant(self):
        c = -1.25
        spec = np.zeros((6, 4), dtype=np.complex128)
        spec[0, 0] = 24 * c
        assert np.max(np.abs(dft_inverse(spec) - c)) < 1e-12

    def test_matches_direct_inverse_on_symmetric_spectrum(self):
        # conjugate-symmetric spectrum = forward transform of a real image
        rng = np.random.default_rng(13)
        spec = dft2_direct(rng.random((8, 8)))
        got = dft_inverse(spec)
        want = idft2_direct(spec)
        assert np.max(np.abs(want.imag)) < 1e-9
        assert rel_err(got, want.real) < 1e-9


class TestDecomposeRecompose:
    def test_three_four_five(self):
        a, p = decompose(np.full((2, 2), 3.0 + 4.0j))
        assert np.allclose(a, 5.0)
        assert np.allclose(p, np.arctan2(4.0, 3.0))
        assert abs(p[0, 0] - 0.9273) < 1e-4

    def test_real_positive_spectrum_has_zero_phase(self):
        _, p = decompose(np.full((3, 3), 2.5 + 0.0j))
        assert np.max(np.abs(p)) == 0.0

    def test_zero_amplitude_phase_convention(self):
        spec = np.zeros((2, 2), dtype=np.complex128)
        spec[0, 0] = complex(-0.0, 0.0)  # angle would be pi without the convention
        a, p = decompose(spec)
        assert np.all(a == 0.0)
        assert np.all(p == 0.0)

    def test_recompose_identity(self):
        rng = np.random.default_rng(17)
        spec = rng.normal(size=(8, 8)) + 1j * rng.normal(size=(8, 8))
        a, p = decompose(spec)
        assert rel_err(recompose(a, p), spec) < 1e-9

    def test_recompose_examples(self):
        got = recompose(np.full((1, 1), 5.0), np.full((1, 1), 0.9273))
        assert abs(got[0, 0] - (3.0 + 4.0j)) < 1e-3
        # zero amplitude wins over any phase
        got = recompose(np.zeros((2, 2)), np.full((2, 2), 1.234))
        assert np.all(got == 0.0)

    def test_recompose_rejects_negative_amplitude(self):
        with pytest.raises(ValueError):
            recompose(np.full((2, 2), -1.0), np.zeros((2, 2)))

    def test_recompose_rejects_shape_mismatch(self):
        with pytest.raises(ValueError):
            recompose(np.zeros((2, 2)), np.zeros((2, 3)))


class TestSpectralImage:
    def test_shape_contract(self):
        rng = np.random.default_rng(19)
        s = spectral_of_image(rng.random((3, 32, 32)))
        assert s.num_channels == 3
        assert s.amplitude.shape == (3, 32, 32)
        assert s.phase.shape == (3, 32, 32)

    def test_grayscale_promotes_to_one_channel(self):
        s = spectral_of_image(np.ones((8, 8)))
        assert s.num_channels == 1

    def test_round_trip(self):
        rng = np.random.default_rng(23)
        x = rng.random((3, 24, 20))
        assert np.max(np.abs(image_of_spectral(spectral_of_image(x)) - x)) < 1e-6

    def test_redecomposition_is_stable(self):
        rng = np.random.default_rng(29)
        s = spectral_of_image(rng.random((2, 16, 16)))
        s2 = spectral_of_image(image_of_spectral(s))
        assert np.max(np.abs(s2.amplitude - s.amplitude)) < 1e-6
        mask = s.amplitude > 1e-9
        assert np.max(np.abs(s2.phase[mask] - s.phase[mask])) < 1e-6

    def test_mismatched_planes_rejected(self):
        with pytest.raises(ValueError):
            SpectralImage(np.zeros((1, 4, 4)), np.zeros((1, 4, 5)))


class TestConstantReconstructions:
    # A constant image has a DC-only spectrum with zero phase, so the
    # amplitude-only reconstruction is the image itself, while the phase-only
    # reconstruction (flat unit amplitude) collapses to a unit impulse at (0,0).

    def test_amplitude_only_of_constant_is_constant(self):
        c = 0.5
        s = spectral_of_image(np.full((1, 8, 8), c))
        rec = reconstruct_amplitude_only(s)
        assert np.max(np.abs(rec - c)) < 1e-12
        # top-left pixel attains the max (tied, for a constant image)
        assert rec[0, 0, 0] >= rec.max() - 1e-12

    def test_phase_only_of_constant_is_impulse(self):
        s = spectral_of_image(np.full((1, 8, 8), 0.5))
        rec = reconstruct_phase_only(s)
        # oracle: direct inverse of the all-ones spectrum
        want = idft2_direct(np.ones((8, 8), dtype=np.complex128)).real
        assert np.max(np.abs(rec[0] - want)) < 1e-9
        assert abs(rec[0, 0, 0] - 1.0) < 1e-9
        off = rec[0].copy()
        off[0, 0] = 0.0
        assert np.max(np.abs(off)) < 1e-9

    def test_amplitude_only_energy_concentrates_at_origin(self):
        # |rec(h,w)| <= rec(0,0) holds for every amplitude-only reconstruction
        rng = np.random.default_rng(31)
        rec = reconstruct_amplitude_only(spectral_of_image(rng.random((3, 16, 16))))
        for ch in range(3):
            assert rec[ch, 0, 0] >= np.max(np.abs(rec[ch])) - 1e-12

    def test_shapes_preserved(self):
        rng = np.random.default_rng(37)
        s = spectral_of_image(rng.random((3, 10, 14)))
        assert reconstruct_amplitude_only(s).shape == (3, 10, 14)
        assert reconstruct_phase_only(s).shape == (3, 10, 14)


class TestInvariants:
    @pytest.mark.parametrize("shape", [(4, 4), (32, 32), (64, 64), (33, 31)])
    def test_round_trip_up_to_64(self, shape):
        rng = np.random.default_rng(41)
        x = rng.random(shape)
        assert np.max(np.abs(dft_inverse(dft_forward(x)) - x)) < 1e-6

    def test_parseval(self):
        rng = np.random.default_rng(43)
        x = rng.random((12, 9))
        a, _ = decompose(dft_forward(x))
        lhs = np.sum(x**2)
        rhs = np.sum(a**2) / x.size
        assert abs(lhs - rhs) / lhs < 1e-9

    def test_conjugate_symmetry_of_real_input(self):
        rng = np.random.default_rng(47)
        for shape in [(8, 8), (7, 10)]:
            f = dft_forward(rng.random(shape))
            h_dim, w_dim = shape
            for u in range(h_dim):
                for v in range(w_dim):
                    mirror = f[(h_dim - u) % h_dim, (w_dim - v) % w_dim]
                    assert abs(f[u, v] - np.conj(mirror)) < 1e-9 * (1 + abs(f[u, v]))

    def test_linearity(self):
        rng = np.random.default_rng(53)
        x, y = rng.random((2, 9, 6))
        a, b = 2.5, -0.75
        lhs = dft_forward(a * x + b * y)
        rhs = a * dft_forward(x) + b * dft_forward(y)
        assert rel_err(lhs, rhs) < 1e-9
