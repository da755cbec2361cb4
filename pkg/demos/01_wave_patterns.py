"""Wave patterns 101: amplitude/phase values, interference, and the
resonance kernels.

A pattern is a pair of arrays interpreted as the complex signal
A(x) * exp(i * phi(x)). Similar content in phase alignment reinforces;
anti-phase content cancels. The coherence kernel turns that interference
energy into a similarity score that reduces to plain cosine for real
vectors.
"""

import numpy as np

from wavefield import (
    WavePattern,
    energy,
    normalize,
    phase_shift,
    random_pattern,
    resonance_coherence,
    resonance_energy,
    superpose,
)

rng = np.random.default_rng(42)

p = WavePattern(amplitude=[3.0, 4.0], phase=[0.0, np.pi / 3])
print("pattern:", p)
print("energy (sum of squared amplitudes):", energy(p))
print("unit-energy form:", normalize(p).amplitude)

# constructive vs destructive interference
aligned = superpose(p, p)
opposed = superpose(p, phase_shift(p, np.pi))
print("\nsuperpose(p, p) energy:            ", energy(aligned), "(4x: constructive)")
print("superpose(p, anti-phase p) energy: ", energy(opposed), "(cancellation)")

# the coherence kernel reads interference as similarity
a = random_pattern(64, rng)
print("\ncoherence(a, a)           =", resonance_coherence(a, a).value)
print("coherence(a, anti-phase a) =", resonance_coherence(a, phase_shift(a, np.pi)).value)
print("coherence(a, unrelated)    =", round(resonance_coherence(a, random_pattern(64, rng)).value, 4))

# for sign-to-phase encodings of real vectors it IS cosine similarity
u = rng.standard_normal(32)
v = rng.standard_normal(32)
cos = float(u @ v / (np.linalg.norm(u) * np.linalg.norm(v)))
coh = resonance_coherence(WavePattern.from_real(u), WavePattern.from_real(v)).value
print("\nreal vectors: cosine =", round(cos, 12), " coherence =", round(coh, 12))

# the energy kernel is bounded in [0, 1] and penalizes energy mismatch
b = WavePattern(a.amplitude * 3.0, a.phase)
print("\nenergy kernel, same shape but 9x energy:", round(resonance_energy(a, b).value, 4))
print("energy kernel, identical inputs:        ", resonance_energy(a, a).value)
