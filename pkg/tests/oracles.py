"""Independent reference implementations used to check the library.

These deliberately take different computational routes from the package:
pure-Python cmath arithmetic for the pattern algebra, O(n^2) loops for
circular convolution, the literal superposition-energy formula for the
kernels, and a separate binary parser for segment files.
"""

import cmath
import math
import struct


def complex_form(pattern):
    """Pattern as a list of Python complex numbers, via cmath."""
    return [
        a * cmath.exp(1j * ph)
        for a, ph in zip(pattern.amplitude.tolist(), pattern.phase.tolist())
    ]


def energy_of(zs) -> float:
    return sum(abs(z) ** 2 for z in zs)


def add(za, zb):
    return [x + y for x, y in zip(za, zb)]


def coherence(pattern_a, pattern_b) -> float:
    """(E(a+b) - E(a) - E(b)) / (2 sqrt(E(a) E(b))), computed literally."""
    za, zb = complex_form(pattern_a), complex_form(pattern_b)
    ea, eb = energy_of(za), energy_of(zb)
    return (energy_of(add(za, zb)) - ea - eb) / (2.0 * math.sqrt(ea * eb))


def energy_kernel(pattern_a, pattern_b) -> float:
    za, zb = complex_form(pattern_a), complex_form(pattern_b)
    ea, eb = energy_of(za), energy_of(zb)
    half_normalized = energy_of(add(za, zb)) / (2.0 * (ea + eb))
    penalty = 2.0 * math.sqrt(ea * eb) / (ea + eb)
    return half_normalized * penalty


def cosine(u, v) -> float:
    num = sum(x * y for x, y in zip(u, v))
    return num / math.sqrt(sum(x * x for x in u) * sum(y * y for y in v))


def circular_convolution(pattern_a, pattern_b):
    """O(n^2) circular convolution over Python complex numbers."""
    za, zb = complex_form(pattern_a), complex_form(pattern_b)
    n = len(za)
    return [
        sum(za[j] * zb[(i - j) % n] for j in range(n))
        for i in range(n)
    ]


def multiply_by_i(pattern):
    return [z * 1j for z in complex_form(pattern)]


def scan_scores(patterns, probe, kernel: str):
    """Kernel scores via the superposition-energy route (numpy-free
    per-element arithmetic would be too slow at store scale, so this uses
    the complex-array formula the package itself never computes)."""
    import numpy as np

    zq = probe.to_complex()
    eq = float(np.sum(np.abs(zq) ** 2))
    scores = []
    for p in patterns:
        zp = np.asarray(complex_form(p))
        ep = float(np.sum(np.abs(zp) ** 2))
        e_sum = float(np.sum(np.abs(zp + zq) ** 2))
        if kernel == "coherence":
            scores.append((e_sum - ep - eq) / (2.0 * math.sqrt(ep * eq)))
        else:
            scores.append(
                (e_sum / (2.0 * (ep + eq))) * (2.0 * math.sqrt(ep * eq) / (ep + eq))
            )
    return scores


def rank_ids(ids, scores):
    """Ids ordered by descending score, ties broken by ascending id."""
    return [i for _, i in sorted(zip(scores, ids), key=lambda t: (-t[0], t[1]))]


HEADER = struct.Struct("<4sHIQB45x")


def read_segment(path, dim):
    """Independent parser for the documented segment layout. Returns
    (header fields, records) where records are (id, amp list, phase list)."""
    payload = 8 + 8 * dim
    rec_size = ((payload + 63) // 64) * 64
    raw = open(path, "rb").read()
    magic, version, seg_dim, count, kernel_code = HEADER.unpack(raw[:64])
    records = []
    for i in range(count):
        rec = raw[64 + i * rec_size : 64 + (i + 1) * rec_size]
        (rec_id,) = struct.unpack_from("<Q", rec, 0)
        amp = struct.unpack_from(f"<{dim}f", rec, 8)
        phase = struct.unpack_from(f"<{dim}f", rec, 8 + 4 * dim)
        records.append((rec_id, list(amp), list(phase)))
    return (magic, version, seg_dim, count, kernel_code), records
