"""2-D Fourier transforms and amplitude/phase decomposition for real images.

Conventions used throughout the package:

- images are float64 arrays of shape (channels, H, W); a bare (H, W) array is
  accepted wherever a single plane is expected
- the forward transform is unnormalized; the inverse carries the 1/(H*W)
  factor, so ``dft_inverse(dft_forward(x)) == x``
- phase is computed with atan2, so it lives in (-pi, pi] and carries full
  quadrant information; wherever amplitude is exactly zero the phase is
  defined as 0
"""

from dataclasses import dataclass

import numpy as np

__all__ = [
    "SpectralImage",
    "dft_forward",
    "dft_inverse",
    "decompose",
    "recompose",
    "spectral_of_image",
    "image_of_spectral",
    "reconstruct_amplitude_only",
    "reconstruct_phase_only",
]


def _check_plane(plane: np.ndarray, name: str) -> np.ndarray:
    arr = np.asarray(plane)
    if arr.ndim != 2:
        raise ValueError(f"{name} must be 2-D, got shape {arr.shape}")
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ValueError(f"{name} must have positive dimensions, got {arr.shape}")
    return arr


def dft_forward(plane: np.ndarray) -> np.ndarray:
    """Unnormalized forward 2-D DFT of a real plane.

    F(u,v) = sum_{h,w} x(h,w) * exp(-2j*pi*(h*u/H + w*v/W)), computed with a
    fast mixed-radix algorithm (any H, W >= 1, not just powers of two).
    """
    arr = _check_plane(plane, "plane")
    return np.fft.fft2(arr.astype(np.float64, copy=False))


def dft_inverse(spectrum: np.ndarray) -> np.ndarray:
    """Inverse 2-D DFT with the 1/(H*W) factor; returns the real part.

    For spectra of real images the imaginary residue is at float64 noise
    level and is discarded.
    """
    arr = _check_plane(spectrum, "spectrum")
    return np.fft.ifft2(arr).real


def decompose(spectrum: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Split a complex spectrum into (amplitude, phase).

    amplitude = sqrt(Re^2 + Im^2) >= 0, phase = atan2(Im, Re) in (-pi, pi].
    Bins with zero amplitude get phase 0.
    """
    arr = _check_plane(spectrum, "spectrum")
    amplitude = np.abs(arr)
    phase = np.angle(arr)
    phase[amplitude == 0.0] = 0.0
    return amplitude, phase


def recompose(amplitude: np.ndarray, phase: np.ndarray) -> np.ndarray:
    """Rebuild the complex spectrum amplitude * exp(1j * phase)."""
    amp = _check_plane(amplitude, "amplitude")
    ph = _check_plane(phase, "phase")
    if amp.shape != ph.shape:
        raise ValueError(f"amplitude shape {amp.shape} != phase shape {ph.shape}")
    if np.any(amp < 0.0):
        raise ValueError("amplitude must be nonnegative")
    return amp * np.exp(1j * ph)


@dataclass
class SpectralImage:
    """Per-channel amplitude and phase planes of a multi-channel image.

    Both arrays have shape (channels, H, W); amplitude is nonnegative and
    phase lies in (-pi, pi].
    """

    amplitude: np.ndarray
    phase: np.ndarray

    def __post_init__(self) -> None:
        self.amplitude = np.asarray(self.amplitude, dtype=np.float64)
        self.phase = np.asarray(self.phase, dtype=np.float64)
        if self.amplitude.ndim != 3 or self.phase.ndim != 3:
            raise ValueError("amplitude and phase must be (channels, H, W)")
        if self.amplitude.shape != self.phase.shape:
            raise ValueError(
                f"amplitude shape {self.amplitude.shape} != phase shape {self.phase.shape}"
            )

    @property
    def num_channels(self) -> int:
        return self.amplitude.shape[0]

    @property
    def plane_shape(self) -> tuple[int, int]:
        return self.amplitude.shape[1], self.amplitude.shape[2]

    def copy(self) -> "SpectralImage":
        return SpectralImage(self.amplitude.copy(), self.phase.copy())


def _as_channels(image: np.ndarray) -> np.ndarray:
    arr = np.asarray(image, dtype=np.float64)
    if arr.ndim == 2:
        arr = arr[None, :, :]
    if arr.ndim != 3:
        raise ValueError(f"image must be (channels, H, W) or (H, W), got {arr.shape}")
    if arr.shape[1] < 1 or arr.shape[2] < 1:
        raise ValueError(f"image planes must be nonempty, got shape {arr.shape}")
    return arr


def spectral_of_image(image: np.ndarray) -> SpectralImage:
    """Forward transform + decompose, independently per channel."""
    arr = _as_channels(image)
    spectra = np.fft.fft2(arr, axes=(-2, -1))
    amplitude = np.abs(spectra)
    phase = np.angle(spectra)
    phase[amplitude == 0.0] = 0.0
    return SpectralImage(amplitude, phase)


def image_of_spectral(spectral: SpectralImage) -> np.ndarray:
    """Recompose + inverse transform per channel.

    Output values are NOT clamped; [0,1] clamping happens only at PNG export.
    """
    spectra = spectral.amplitude * np.exp(1j * spectral.phase)
    return np.fft.ifft2(spectra, axes=(-2, -1)).real


def reconstruct_amplitude_only(spectral: SpectralImage) -> np.ndarray:
    """Reconstruction with the phase planes replaced by the constant 0."""
    return image_of_spectral(SpectralImage(spectral.amplitude, np.zeros_like(spectral.phase)))


def reconstruct_phase_only(spectral: SpectralImage) -> np.ndarray:
    """Reconstruction with the amplitude planes replaced by the constant 1."""
    return image_of_spectral(SpectralImage(np.ones_like(spectral.amplitude), spectral.phase))
