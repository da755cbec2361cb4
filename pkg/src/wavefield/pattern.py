"""Wave-pattern algebra: the amplitude/phase value type, superposition,
phase operations, and the resonance similarity kernels.

A pattern holds a non-negative amplitude and a phase in [0, 2*pi) per
dimension and is interpreted as the complex array amplitude * exp(i*phase).
All operations are pure functions on immutable values.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DimMismatch, ZeroEnergy

TWO_PI = 2.0 * np.pi


class Kernel(Enum):
    """Similarity kernel selector for resonance scoring."""

    COHERENCE = "coherence"
    ENERGY = "energy"


def _wrap_phase(phase: np.ndarray) -> np.ndarray:
    """Reduce phases into [0, 2*pi). np.mod can return exactly 2*pi for
    tiny negative inputs, so clamp that edge back to 0."""
    wrapped = np.mod(phase, TWO_PI)
    return np.where(wrapped >= TWO_PI, 0.0, wrapped)


@dataclass(frozen=True, eq=False)
class WavePattern:
    """Immutable amplitude/phase pair of a fixed dimension.

    Invariants enforced on construction: amplitudes are finite and
    non-negative, phases lie in [0, 2*pi), and zero-amplitude components
    carry phase 0 (the canonical zero convention).
    """

    amplitude: np.ndarray
    phase: np.ndarray

    def __init__(self, amplitude, phase):
        amp = np.asarray(amplitude, dtype=np.float64).copy()
        ph = np.asarray(phase, dtype=np.float64).copy()
        if amp.ndim != 1 or ph.ndim != 1:
            raise ValueError("amplitude and phase must be 1-D arrays")
        if amp.shape != ph.shape:
            raise DimMismatch(
                f"amplitude has dim {amp.shape[0]}, phase has dim {ph.shape[0]}"
            )
        if amp.shape[0] == 0:
            raise ValueError("dim must be a positive integer")
        if not np.all(np.isfinite(amp)):
            raise ValueError("amplitudes must be finite")
        if not np.all(np.isfinite(ph)):
            raise ValueError("phases must be finite")
        if np.any(amp < 0.0):
            raise ValueError("amplitudes must be non-negative")
        ph = _wrap_phase(ph)
        ph[amp == 0.0] = 0.0
        amp.setflags(write=False)
        ph.setflags(write=False)
        object.__setattr__(self, "amplitude", amp)
        object.__setattr__(self, "phase", ph)

    @property
    def dim(self) -> int:
        return self.amplitude.shape[0]

    def to_complex(self) -> np.ndarray:
        """The pattern as a complex128 array: amplitude * exp(i*phase)."""
        return self.amplitude * np.exp(1j * self.phase)

    @classmethod
    def from_complex(cls, values) -> "WavePattern":
        """Canonical amplitude/phase form of a complex array."""
        z = np.asarray(values, dtype=np.complex128)
        return cls(np.abs(z), np.angle(z))

    @classmethod
    def from_real(cls, values) -> "WavePattern":
        """Sign-to-phase encoding of a real vector: amplitude |v|, phase 0
        where v >= 0 and pi where v < 0."""
        v = np.asarray(values, dtype=np.float64)
        return cls(np.abs(v), np.where(v < 0.0, np.pi, 0.0))

    @classmethod
    def zeros(cls, dim: int) -> "WavePattern":
        return cls(np.zeros(dim), np.zeros(dim))

    def __eq__(self, other) -> bool:
        if not isinstance(other, WavePattern):
            return NotImplemented
        return (
            self.dim == other.dim
            and np.array_equal(self.amplitude, other.amplitude)
            and np.array_equal(self.phase, other.phase)
        )

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"WavePattern(dim={self.dim}, energy={energy(self):.6g})"


@dataclass(frozen=True)
class ResonanceScore:
    """A similarity value tagged with the kernel that produced it.

    The coherence kernel ranges over [-1, 1]; the energy kernel over [0, 1].
    """

    value: float
    kernel: Kernel

    def __float__(self) -> float:
        return self.value


def _require_same_dim(a: WavePattern, b: WavePattern) -> None:
    if a.dim != b.dim:
        raise DimMismatch(f"pattern dims differ: {a.dim} vs {b.dim}")


def energy(p: WavePattern) -> float:
    """Total energy: the sum of squared amplitudes."""
    return float(np.sum(np.square(p.amplitude)))


def superpose(a: WavePattern, b: WavePattern) -> WavePattern:
    """Component-wise complex addition, re-canonicalized."""
    _require_same_dim(a, b)
    return WavePattern.from_complex(a.to_complex() + b.to_complex())


def phase_shift(p: WavePattern, delta) -> WavePattern:
    """Rotate phases by a scalar delta or a per-dimension mask of radians.

    Amplitudes are untouched, so energy is preserved exactly; zero-amplitude
    components keep phase 0 through re-canonicalization.
    """
    d = np.asarray(delta, dtype=np.float64)
    if d.ndim == 0:
        shifted = p.phase + float(d)
    elif d.ndim == 1:
        if d.shape[0] != p.dim:
            raise DimMismatch(f"mask has length {d.shape[0]}, pattern dim {p.dim}")
        shifted = p.phase + d
    else:
        raise DimMismatch("delta must be a scalar or a 1-D mask")
    return WavePattern(p.amplitude, shifted)


def normalize(p: WavePattern) -> WavePattern:
    """Scale amplitudes to unit energy; phases unchanged."""
    e = energy(p)
    if e == 0.0:
        raise ZeroEnergy("cannot normalize an all-zero pattern")
    return WavePattern(p.amplitude / np.sqrt(e), p.phase)


def scale(p: WavePattern, factor: float) -> WavePattern:
    """Multiply amplitudes by a non-negative factor; phases unchanged."""
    if factor < 0.0:
        raise ValueError("scale factor must be non-negative")
    return WavePattern(p.amplitude * factor, p.phase)


def _hermitian_real(a: WavePattern, b: WavePattern) -> float:
    # Re<a,b> = sum A_a A_b cos(phi_a - phi_b).  cos(|d|) keeps the result
    # bitwise symmetric in the argument order.
    return float(
        np.sum(a.amplitude * b.amplitude * np.cos(np.abs(a.phase - b.phase)))
    )


def _check_resonance_args(a: WavePattern, b: WavePattern) -> tuple[float, float]:
    _require_same_dim(a, b)
    ea, eb = energy(a), energy(b)
    if ea == 0.0 or eb == 0.0:
        raise ZeroEnergy("resonance kernels need non-zero energy on both sides")
    return ea, eb


def resonance_coherence(a: WavePattern, b: WavePattern) -> ResonanceScore:
    """Interference similarity in [-1, 1].

    Equals (E(a+b) - E(a) - E(b)) / (2 sqrt(E(a) E(b))), i.e. the real part
    of the normalized Hermitian inner product: +1 for full constructive
    interference, -1 for anti-phase cancellation, and exactly the cosine of
    the underlying real vectors when every phase is 0 or pi.
    """
    ea, eb = _check_resonance_args(a, b)
    value = _hermitian_real(a, b) / np.sqrt(ea * eb)
    return ResonanceScore(float(np.clip(value, -1.0, 1.0)), Kernel.COHERENCE)


def resonance_energy(a: WavePattern, b: WavePattern) -> ResonanceScore:
    """Half the normalized superposition energy, times an energy-mismatch
    penalty 2 sqrt(E(a) E(b)) / (E(a) + E(b)).  Bounded in [0, 1]; over
    equal-energy candidates it ranks identically to the coherence kernel.
    """
    ea, eb = _check_resonance_args(a, b)
    e_sum = ea + eb + 2.0 * _hermitian_real(a, b)
    half_normalized = e_sum / (2.0 * (ea + eb))
    penalty = 2.0 * np.sqrt(ea * eb) / (ea + eb)
    return ResonanceScore(float(np.clip(half_normalized * penalty, 0.0, 1.0)), Kernel.ENERGY)


def resonance(a: WavePattern, b: WavePattern, kernel: Kernel = Kernel.COHERENCE) -> ResonanceScore:
    """Dispatch to the requested kernel."""
    if kernel is Kernel.COHERENCE:
        return resonance_coherence(a, b)
    return resonance_energy(a, b)


def random_pattern(dim: int, rng: np.random.Generator, kind: str = "gaussian") -> WavePattern:
    """Unit-energy random pattern.

    kinds:
      gaussian - sign-to-phase encoding of a normalized Gaussian real vector
                 (phases all 0 or pi);
      unitary  - real vector whose DFT has unit magnitude at every frequency,
                 the well-conditioned class for holographic unbinding;
      phasor   - uniform amplitudes with independent uniform phases.
    """
    if kind == "gaussian":
        v = rng.standard_normal(dim)
        v /= np.linalg.norm(v)
        return WavePattern.from_real(v)
    if kind == "unitary":
        spectrum = np.ones(dim, dtype=np.complex128)
        half = (dim - 1) // 2
        if half > 0:
            theta = rng.uniform(0.0, TWO_PI, half)
            spectrum[1 : 1 + half] = np.exp(1j * theta)
            spectrum[dim - half :] = np.conj(spectrum[1 : 1 + half])[::-1]
        spectrum[0] = rng.choice([-1.0, 1.0])
        if dim % 2 == 0:
            spectrum[dim // 2] = rng.choice([-1.0, 1.0])
        v = np.fft.ifft(spectrum).real
        return WavePattern.from_real(v)
    if kind == "phasor":
        amp = np.full(dim, 1.0 / np.sqrt(dim))
        return WavePattern(amp, rng.uniform(0.0, TWO_PI, dim))
    raise ValueError(f"unknown random pattern kind: {kind!r}")
