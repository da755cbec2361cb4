"""Holographic binding algebra: circular-convolution bind, correlation
unbind via the index-reversal involution, and cleanup against an item
memory of known patterns.

Binding is computed in the frequency domain (element-wise product of DFTs),
which handles any dimension, power of two or not.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimMismatch, DuplicateLabel, EmptyMemory, ZeroEnergy
from .pattern import Kernel, ResonanceScore, WavePattern, energy

DEFAULT_NOISE_FLOOR = 0.25


def identity_pattern(dim: int) -> WavePattern:
    """The convolution identity: a unit impulse at index 0."""
    amp = np.zeros(dim)
    amp[0] = 1.0
    return WavePattern(amp, np.zeros(dim))


def bind(a: WavePattern, b: WavePattern) -> WavePattern:
    """Circular convolution of two patterns. Commutative."""
    if a.dim != b.dim:
        raise DimMismatch(f"pattern dims differ: {a.dim} vs {b.dim}")
    spectrum = np.fft.fft(a.to_complex()) * np.fft.fft(b.to_complex())
    return WavePattern.from_complex(np.fft.ifft(spectrum))


def involution(a: WavePattern) -> WavePattern:
    """Approximate inverse for unbinding: the complex components
    index-reversed modulo dim (a*[i] = a[(-i) mod dim])."""
    z = a.to_complex()
    rev = np.empty_like(z)
    rev[0] = z[0]
    rev[1:] = z[1:][::-1]
    return WavePattern.from_complex(rev)


def unbind(trace: WavePattern, cue: WavePattern) -> WavePattern:
    """Correlate the trace with the cue: bind(trace, involution(cue)).

    Recovers the cue's bound partner exactly when the cue's DFT has unit
    magnitude at every frequency; otherwise the partner plus noise.
    """
    if trace.dim != cue.dim:
        raise DimMismatch(f"pattern dims differ: {trace.dim} vs {cue.dim}")
    if energy(cue) == 0.0:
        raise ZeroEnergy("cannot unbind with a zero-energy cue")
    return bind(trace, involution(cue))


def unitary_cue(p: WavePattern) -> WavePattern:
    """Project a pattern onto the well-conditioned binding-key class by
    flattening its DFT magnitudes to 1 (spectral phases kept, zero bins set
    to 1). For a real-valued pattern the result is again real, and
    unbind(bind(cue, v), cue) then recovers v exactly."""
    if energy(p) == 0.0:
        raise ZeroEnergy("cannot whiten a zero-energy pattern")
    spectrum = np.fft.fft(p.to_complex())
    mags = np.abs(spectrum)
    flat = np.where(mags > 0.0, spectrum / np.where(mags == 0.0, 1.0, mags), 1.0)
    return WavePattern.from_complex(np.fft.ifft(flat))


@dataclass(frozen=True)
class CleanupResult:
    """Ranked cleanup matches, flagged when even the best is below the
    item memory's noise floor."""

    matches: list[tuple[str, ResonanceScore]]
    below_threshold: bool

    @property
    def best(self) -> tuple[str, ResonanceScore]:
        return self.matches[0]


class ItemMemory:
    """Ordered codebook of labeled unit-energy patterns.

    Entries are normalized on insert and labels must be unique. Intended
    use is single-writer construction followed by read-only cleanup calls.
    """

    def __init__(self, dim: int, noise_floor: float = DEFAULT_NOISE_FLOOR):
        self.dim = int(dim)
        self.noise_floor = float(noise_floor)
        self._labels: list[str] = []
        self._index: dict[str, int] = {}
        self._re: list[np.ndarray] = []
        self._im: list[np.ndarray] = []
        self._cache: tuple[np.ndarray, np.ndarray, np.ndarray] | None = None

    def __len__(self) -> int:
        return len(self._labels)

    def __contains__(self, label: str) -> bool:
        return label in self._index

    @property
    def labels(self) -> list[str]:
        return list(self._labels)

    def add(self, label: str, pattern: WavePattern) -> None:
        if pattern.dim != self.dim:
            raise DimMismatch(f"pattern dim {pattern.dim} != memory dim {self.dim}")
        if label in self._index:
            raise DuplicateLabel(f"label already stored: {label!r}")
        e = energy(pattern)
        if e == 0.0:
            raise ZeroEnergy("cannot store a zero-energy pattern")
        z = pattern.to_complex() / np.sqrt(e)
        self._index[label] = len(self._labels)
        self._labels.append(label)
        self._re.append(z.real)
        self._im.append(z.imag)
        self._cache = None

    def pattern(self, label: str) -> WavePattern:
        i = self._index[label]
        return WavePattern.from_complex(self._re[i] + 1j * self._im[i])

    def to_arrays(self) -> tuple[list[str], np.ndarray, np.ndarray]:
        """(labels, real rows, imaginary rows) of the normalized entries."""
        if self._labels:
            return list(self._labels), np.vstack(self._re), np.vstack(self._im)
        empty = np.empty((0, self.dim))
        return [], empty, empty

    def _matrices(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        if self._cache is None:
            re = np.vstack(self._re)
            im = np.vstack(self._im)
            energies = np.einsum("ij,ij->i", re, re) + np.einsum("ij,ij->i", im, im)
            self._cache = (re, im, energies)
        return self._cache

    def scores(self, probe: WavePattern) -> np.ndarray:
        """Coherence of the probe against every entry, in insertion order."""
        if len(self._labels) == 0:
            raise EmptyMemory("item memory is empty")
        if probe.dim != self.dim:
            raise DimMismatch(f"probe dim {probe.dim} != memory dim {self.dim}")
        z = probe.to_complex()
        eq = float(np.sum(z.real * z.real) + np.sum(z.imag * z.imag))
        if eq == 0.0:
            raise ZeroEnergy("cannot clean up a zero-energy pattern")
        re, im, energies = self._matrices()
        num = re @ z.real + im @ z.imag
        return np.clip(num / np.sqrt(energies * eq), -1.0, 1.0)


def cleanup(noisy: WavePattern, mem: ItemMemory, k: int) -> CleanupResult:
    """The k entries of mem most coherent with the noisy pattern,
    descending, ties broken by insertion order (earlier first)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    scores = mem.scores(noisy)
    order = np.argsort(-scores, kind="stable")[: min(k, len(mem))]
    labels = mem.labels
    matches = [
        (labels[i], ResonanceScore(float(scores[i]), Kernel.COHERENCE))
        for i in order
    ]
    return CleanupResult(matches, below_threshold=matches[0][1].value < mem.noise_floor)
