"""Persistent slot storage with exact full-scan resonance retrieval, plus
the superposition-trace associative memory and its capacity experiment.

Segment file layout (bit-exact, little-endian):
  header (64 bytes): magic 'WFLD' (4s) | version (u16, =1) | dim (u32) |
                     record count (u64) | kernel id (u8) | 45 reserved zero
                     bytes padding the header to one 64-byte line
  records:           id (u64) | amplitude[dim] (f32) | phase[dim] (f32),
                     zero-padded to 64-byte alignment

Sidecars: `manifest.json` with {dim, count, live, version, seed,
kernel_default} plus the segment list, and `tombstones.bin`, a bitmap with
one bit per record index. Deletion flips a tombstone bit; `compact()`
rewrites segments without dead records.

Single-writer, multi-reader: queries scan an immutable snapshot; `flush()`
publishes segment bytes, manifest, and tombstones atomically via
write-to-temp-then-rename.
"""

from __future__ import annotations

import hashlib
import json
import os
import struct
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import (
    CorruptStore,
    DimMismatch,
    DuplicateId,
    DuplicateLabel,
    EmptyMemory,
    EmptyStore,
    StoreIO,
    ZeroEnergy,
)
from .hrr import (
    DEFAULT_NOISE_FLOOR,
    CleanupResult,
    ItemMemory,
    bind,
    cleanup,
    unbind,
)
from .pattern import (
    Kernel,
    ResonanceScore,
    WavePattern,
    energy,
    random_pattern,
    superpose,
)

MAGIC = b"WFLD"
FORMAT_VERSION = 1
HEADER_SIZE = 64
_HEADER = struct.Struct("<4sHIQB45x")
_KERNEL_CODES = {Kernel.COHERENCE: 0, Kernel.ENERGY: 1}
_KERNEL_FROM_CODE = {v: k for k, v in _KERNEL_CODES.items()}

_MANIFEST = "manifest.json"
_TOMBSTONES = "tombstones.bin"


def _record_size(dim: int) -> int:
    payload = 8 + 8 * dim
    return ((payload + 63) // 64) * 64


def _record_dtype(dim: int) -> np.dtype:
    return np.dtype(
        {
            "names": ["id", "amp", "phase"],
            "formats": ["<u8", ("<f4", dim), ("<f4", dim)],
            "offsets": [0, 8, 8 + 4 * dim],
            "itemsize": _record_size(dim),
        }
    )


@dataclass(frozen=True)
class QueryResult:
    """One scan hit: results sort by descending score, ties by ascending
    id, with ranks consecutive from 1."""

    id: int
    score: ResonanceScore
    rank: int


class _ScanCache:
    """Materialized live records for the kernel hot loop."""

    __slots__ = ("ids", "re", "im", "energies")

    def __init__(self, ids, re, im, energies):
        self.ids = ids
        self.re = re
        self.im = im
        self.energies = energies


class SlotStore:
    """File-backed field memory of (id, amplitude, phase) records."""

    def __init__(self, *, path: Path, dim: int, kernel_default: Kernel,
                 seed: int | None, segment_capacity: int | None):
        self.path = Path(path)
        self.dim = int(dim)
        self.kernel_default = kernel_default
        self.seed = seed
        self.segment_capacity = segment_capacity
        self._segments: list[str] = []
        self._counts: list[int] = []
        self._ids: list[int] = []
        self._tombs: list[bool] = []
        self._live_ix: dict[int, int] = {}
        self._handle = None
        self._cache: _ScanCache | None = None

    # -- lifecycle -----------------------------------------------------

    @classmethod
    def create(cls, path, dim: int, kernel_default: Kernel = Kernel.COHERENCE,
               seed: int | None = None, segment_capacity: int | None = None) -> "SlotStore":
        if dim < 1:
            raise ValueError("dim must be >= 1")
        if segment_capacity is not None and segment_capacity < 1:
            raise ValueError("segment_capacity must be >= 1")
        store = cls(path=Path(path), dim=dim, kernel_default=kernel_default,
                    seed=seed, segment_capacity=segment_capacity)
        store.path.mkdir(parents=True, exist_ok=True)
        store._start_segment()
        store.flush()
        return store

    @classmethod
    def open(cls, path) -> "SlotStore":
        path = Path(path)
        manifest_path = path / _MANIFEST
        if not manifest_path.is_file():
            raise CorruptStore(f"manifest missing: {manifest_path}")
        try:
            manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
        except (ValueError, OSError) as exc:
            raise CorruptStore(f"manifest unreadable: {exc}") from exc
        for key in ("dim", "count", "live", "version", "seed", "kernel_default", "segments"):
            if key not in manifest:
                raise CorruptStore(f"manifest field missing: {key}")
        if manifest["version"] != FORMAT_VERSION:
            raise CorruptStore(f"manifest field version: {manifest['version']!r}")
        dim = manifest["dim"]
        if not isinstance(dim, int) or dim < 1:
            raise CorruptStore(f"manifest field dim: {dim!r}")
        try:
            kernel_default = Kernel(manifest["kernel_default"])
        except ValueError:
            raise CorruptStore(
                f"manifest field kernel_default: {manifest['kernel_default']!r}"
            ) from None

        store = cls(path=path, dim=dim, kernel_default=kernel_default,
                    seed=manifest["seed"],
                    segment_capacity=manifest.get("segment_capacity"))
        rec_size = _record_size(dim)
        total = 0
        for name in manifest["segments"]:
            seg = path / name
            if not seg.is_file():
                raise CorruptStore(f"segment missing: {seg}")
            with seg.open("rb") as f:
                raw = f.read(HEADER_SIZE)
            if len(raw) < HEADER_SIZE:
                raise CorruptStore(f"truncated header in segment {seg}")
            magic, version, seg_dim, count, kernel_code = _HEADER.unpack(raw)
            if magic != MAGIC:
                raise CorruptStore(f"bad magic in segment {seg}")
            if version != FORMAT_VERSION:
                raise CorruptStore(f"bad version in segment {seg}: {version}")
            if seg_dim != dim:
                raise CorruptStore(f"bad dim in segment {seg}: {seg_dim}")
            if kernel_code not in _KERNEL_FROM_CODE:
                raise CorruptStore(f"bad kernel id in segment {seg}: {kernel_code}")
            expected = HEADER_SIZE + count * rec_size
            actual = seg.stat().st_size
            if actual < expected:
                raise CorruptStore(f"truncated record data in segment {seg}")
            store._segments.append(name)
            store._counts.append(count)
            total += count
        if total != manifest["count"]:
            raise CorruptStore(
                f"manifest field count: {manifest['count']} != {total} on disk"
            )

        tomb_path = path / _TOMBSTONES
        if not tomb_path.is_file():
            raise CorruptStore(f"tombstone sidecar missing: {tomb_path}")
        bits = np.unpackbits(np.frombuffer(tomb_path.read_bytes(), dtype=np.uint8))
        if bits.shape[0] < total:
            raise CorruptStore(f"tombstone bitmap too short: {tomb_path}")
        store._tombs = [bool(b) for b in bits[:total]]
        live = total - sum(store._tombs)
        if live != manifest["live"]:
            raise CorruptStore(
                f"manifest field live: {manifest['live']} != {live} on disk"
            )

        ix = 0
        for name, count in zip(store._segments, store._counts):
            if count == 0:
                continue
            with (path / name).open("rb") as f:
                records = np.fromfile(f, dtype=_record_dtype(dim), count=count,
                                      offset=HEADER_SIZE)
            for rec_id in records["id"]:
                store._ids.append(int(rec_id))
                if not store._tombs[ix]:
                    if int(rec_id) in store._live_ix:
                        raise CorruptStore(f"duplicate live id: {int(rec_id)}")
                    store._live_ix[int(rec_id)] = ix
                ix += 1
        store._open_tail()
        return store

    def close(self) -> None:
        if self._handle is not None:
            self.flush()
            self._handle.close()
            self._handle = None

    def __enter__(self) -> "SlotStore":
        return self

    def __exit__(self, *exc) -> None:
        self.close()

    # -- write path ----------------------------------------------------

    @property
    def count(self) -> int:
        return len(self._ids)

    @property
    def live_count(self) -> int:
        return len(self._live_ix)

    def _segment_path(self, i: int) -> Path:
        return self.path / self._segments[i]

    def _start_segment(self) -> None:
        if self._handle is not None:
            self._finalize_segment()
            self._handle.close()
        name = f"segment-{len(self._segments):04d}.wfld"
        self._segments.append(name)
        self._counts.append(0)
        header = _HEADER.pack(MAGIC, FORMAT_VERSION, self.dim, 0,
                              _KERNEL_CODES[self.kernel_default])
        seg = self.path / name
        try:
            with seg.open("wb") as f:
                f.write(header)
            self._handle = seg.open("r+b")
            self._handle.seek(0, os.SEEK_END)
        except OSError as exc:
            raise StoreIO(f"cannot start segment {seg}: {exc}") from exc

    def _open_tail(self) -> None:
        seg = self._segment_path(len(self._segments) - 1)
        try:
            self._handle = seg.open("r+b")
            self._handle.seek(0, os.SEEK_END)
        except OSError as exc:
            raise StoreIO(f"cannot open segment {seg}: {exc}") from exc

    def _finalize_segment(self) -> None:
        """Rewrite the open segment's header count and push bytes to disk."""
        i = len(self._segments) - 1
        header = _HEADER.pack(MAGIC, FORMAT_VERSION, self.dim, self._counts[i],
                              _KERNEL_CODES[self.kernel_default])
        seg = self._segment_path(i)
        try:
            self._handle.flush()
            pos = self._handle.tell()
            self._handle.seek(0)
            self._handle.write(header)
            self._handle.flush()
            os.fsync(self._handle.fileno())
            self._handle.seek(pos)
        except OSError as exc:
            raise StoreIO(f"write failed on segment {seg}: {exc}") from exc

    def put(self, rec_id: int, pattern: WavePattern) -> None:
        """Append one record. The id must not be live; a tombstoned id may
        be re-put. Durable after the next flush()."""
        rec_id = int(rec_id)
        if not 0 <= rec_id < 2 ** 64:
            raise ValueError("record id must fit in an unsigned 64-bit integer")
        if pattern.dim != self.dim:
            raise DimMismatch(f"pattern dim {pattern.dim} != store dim {self.dim}")
        if rec_id in self._live_ix:
            raise DuplicateId(f"id already live: {rec_id}")
        if energy(pattern) == 0.0:
            raise ZeroEnergy("cannot store a zero-energy pattern")
        if self.segment_capacity is not None and self._counts[-1] >= self.segment_capacity:
            self._start_segment()
        rec_size = _record_size(self.dim)
        payload = (
            struct.pack("<Q", rec_id)
            + pattern.amplitude.astype("<f4").tobytes()
            + pattern.phase.astype("<f4").tobytes()
        )
        seg = self._segment_path(len(self._segments) - 1)
        try:
            self._handle.write(payload.ljust(rec_size, b"\x00"))
        except OSError as exc:
            raise StoreIO(f"write failed on segment {seg}: {exc}") from exc
        self._live_ix[rec_id] = len(self._ids)
        self._ids.append(rec_id)
        self._tombs.append(False)
        self._counts[-1] += 1
        self._cache = None

    def delete(self, rec_id: int) -> None:
        """Tombstone a live record; the bytes stay until compact()."""
        ix = self._live_ix.pop(int(rec_id), None)
        if ix is None:
            raise KeyError(f"id not live: {rec_id}")
        self._tombs[ix] = True
        self._cache = None

    def flush(self) -> None:
        """Publish segment bytes, tombstones, and manifest atomically."""
        self._finalize_segment()
        self._write_sidecar(_TOMBSTONES, np.packbits(
            np.array(self._tombs, dtype=np.uint8)).tobytes())
        manifest = {
            "dim": self.dim,
            "count": self.count,
            "live": self.live_count,
            "version": FORMAT_VERSION,
            "seed": self.seed,
            "kernel_default": self.kernel_default.value,
            "segments": list(self._segments),
            "segment_capacity": self.segment_capacity,
        }
        self._write_sidecar(_MANIFEST, json.dumps(manifest, sort_keys=True,
                                                  indent=2).encode() + b"\n")

    def _write_sidecar(self, name: str, data: bytes) -> None:
        tmp = self.path / (name + ".tmp")
        try:
            with tmp.open("wb") as f:
                f.write(data)
                f.flush()
                os.fsync(f.fileno())
            os.replace(tmp, self.path / name)
        except OSError as exc:
            raise StoreIO(f"write failed on {self.path / name}: {exc}") from exc

    def compact(self) -> int:
        """Drop tombstoned records by rewriting segments. Returns the
        number of records removed."""
        self.flush()
        ids_live, amp, phase = self.live_records()
        removed = self.count - ids_live.shape[0]
        self._handle.close()
        self._handle = None
        old_segments = list(self._segments)
        self._segments, self._counts = [], []
        self._ids, self._tombs, self._live_ix = [], [], {}
        self._cache = None
        self._start_segment()
        rec_size = _record_size(self.dim)
        for i in range(ids_live.shape[0]):
            if self.segment_capacity is not None and self._counts[-1] >= self.segment_capacity:
                self._start_segment()
            payload = (struct.pack("<Q", int(ids_live[i]))
                       + amp[i].tobytes() + phase[i].tobytes())
            self._handle.write(payload.ljust(rec_size, b"\x00"))
            self._live_ix[int(ids_live[i])] = len(self._ids)
            self._ids.append(int(ids_live[i]))
            self._tombs.append(False)
            self._counts[-1] += 1
        self.flush()
        for name in old_segments:
            if name not in self._segments:
                (self.path / name).unlink(missing_ok=True)
        return removed

    # -- read path -----------------------------------------------------

    def _read_segment(self, i: int) -> np.ndarray:
        if self._handle is not None:
            self._handle.flush()
        seg = self._segment_path(i)
        try:
            with seg.open("rb") as f:
                return np.fromfile(f, dtype=_record_dtype(self.dim),
                                   count=self._counts[i], offset=HEADER_SIZE)
        except OSError as exc:
            raise StoreIO(f"read failed on segment {seg}: {exc}") from exc

    def live_records(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(ids, amplitude rows, phase rows) of live records, in storage
        order, at storage (32-bit) precision."""
        ids, amps, phases = [], [], []
        base = 0
        live = np.array(self._tombs, dtype=bool)
        for i, count in enumerate(self._counts):
            if count == 0:
                continue
            records = self._read_segment(i)
            keep = ~live[base : base + count]
            ids.append(records["id"][keep])
            amps.append(records["amp"][keep])
            phases.append(records["phase"][keep])
            base += count
        if not ids:
            empty = np.empty((0, self.dim), dtype="<f4")
            return np.empty(0, dtype="<u8"), empty, empty
        return np.concatenate(ids), np.vstack(amps), np.vstack(phases)

    def get_record(self, rec_id: int) -> tuple[np.ndarray, np.ndarray]:
        """Raw stored 32-bit (amplitude, phase) arrays of a live record."""
        ix = self._live_ix.get(int(rec_id))
        if ix is None:
            raise KeyError(f"id not live: {rec_id}")
        base = 0
        for i, count in enumerate(self._counts):
            if ix < base + count:
                records = self._read_segment(i)
                rec = records[ix - base]
                return rec["amp"].copy(), rec["phase"].copy()
            base += count
        raise KeyError(f"id not live: {rec_id}")  # unreachable

    def pattern(self, rec_id: int) -> WavePattern:
        amp, phase = self.get_record(rec_id)
        return WavePattern(amp.astype(np.float64), phase.astype(np.float64))

    def _scan(self) -> _ScanCache:
        if self._cache is None:
            ids, amp, phase = self.live_records()
            amp64 = amp.astype(np.float64)
            ph64 = phase.astype(np.float64)
            re = amp64 * np.cos(ph64)
            im = amp64 * np.sin(ph64)
            energies = np.einsum("ij,ij->i", re, re) + np.einsum("ij,ij->i", im, im)
            self._cache = _ScanCache(ids, re, im, energies)
        return self._cache

    def query_topk(self, probe: WavePattern, k: int,
                   kernel: Kernel | None = None, workers: int = 1) -> list[QueryResult]:
        """Exact full scan: the min(k, live) records ranked by the kernel,
        descending, ties broken by ascending id. Identical results for any
        segment layout or worker count."""
        if k < 1:
            raise ValueError("k must be >= 1")
        if workers < 1:
            raise ValueError("workers must be >= 1")
        if probe.dim != self.dim:
            raise DimMismatch(f"probe dim {probe.dim} != store dim {self.dim}")
        if self.live_count == 0:
            raise EmptyStore("store has no live records")
        kernel = kernel or self.kernel_default
        cache = self._scan()
        z = probe.to_complex()
        qre, qim = z.real, z.imag
        eq = float(np.sum(qre * qre) + np.sum(qim * qim))
        if eq == 0.0:
            raise ZeroEnergy("probe has zero energy")
        n = cache.ids.shape[0]
        if workers == 1 or n < 2 * workers:
            num = cache.re @ qre + cache.im @ qim
        else:
            bounds = np.linspace(0, n, workers + 1, dtype=int)
            def _chunk(j):
                lo, hi = bounds[j], bounds[j + 1]
                return cache.re[lo:hi] @ qre + cache.im[lo:hi] @ qim
            with ThreadPoolExecutor(max_workers=workers) as pool:
                num = np.concatenate(list(pool.map(_chunk, range(workers))))
        if kernel is Kernel.COHERENCE:
            scores = np.clip(num / np.sqrt(cache.energies * eq), -1.0, 1.0)
        else:
            e_sum = cache.energies + eq + 2.0 * num
            half = e_sum / (2.0 * (cache.energies + eq))
            penalty = 2.0 * np.sqrt(cache.energies * eq) / (cache.energies + eq)
            scores = np.clip(half * penalty, 0.0, 1.0)
        order = np.lexsort((cache.ids, -scores))[: min(k, n)]
        return [
            QueryResult(int(cache.ids[i]), ResonanceScore(float(scores[i]), kernel), rank)
            for rank, i in enumerate(order, start=1)
        ]

    def checksum(self) -> str:
        """SHA-256 over segment bytes in order; audits that evaluations ran
        against identical store bytes."""
        if self._handle is not None:
            self._handle.flush()
        digest = hashlib.sha256()
        for name in self._segments:
            digest.update((self.path / name).read_bytes())
        return digest.hexdigest()


class SuperTrace:
    """A single superposed pattern holding the sum of bound key/value
    pairs, with an item memory of the stored values for cleanup."""

    def __init__(self, dim: int, noise_floor: float = DEFAULT_NOISE_FLOOR):
        self.dim = int(dim)
        self.trace = WavePattern.zeros(dim)
        self.value_memory = ItemMemory(dim, noise_floor)
        self.pair_count = 0

    def store_assoc(self, key: WavePattern, value: WavePattern, label: str) -> None:
        if key.dim != self.dim or value.dim != self.dim:
            raise DimMismatch(
                f"key/value dims ({key.dim}, {value.dim}) != trace dim {self.dim}"
            )
        if label in self.value_memory:
            raise DuplicateLabel(f"label already stored: {label!r}")
        self.trace = superpose(self.trace, bind(key, value))
        self.value_memory.add(label, value)
        self.pair_count += 1

    def recall_assoc(self, key: WavePattern, k: int = 1) -> CleanupResult:
        """Unbind with the key and clean up against the stored values;
        below_threshold is set when nothing resonates above the floor."""
        if self.pair_count == 0:
            raise EmptyMemory("trace holds no associations")
        return cleanup(unbind(self.trace, key), self.value_memory, k)

    def save(self, path, extra: dict | None = None) -> None:
        labels, re, im = self.value_memory.to_arrays()
        np.savez(
            path,
            dim=self.dim,
            pair_count=self.pair_count,
            noise_floor=self.value_memory.noise_floor,
            trace_amplitude=self.trace.amplitude,
            trace_phase=self.trace.phase,
            labels=np.array(labels, dtype=np.str_),
            value_re=re,
            value_im=im,
            **(extra or {}),
        )

    @classmethod
    def load(cls, path) -> "SuperTrace":
        with np.load(path) as data:
            trace = cls(int(data["dim"]), float(data["noise_floor"]))
            trace.trace = WavePattern(data["trace_amplitude"], data["trace_phase"])
            trace.pair_count = int(data["pair_count"])
            re, im = data["value_re"], data["value_im"]
            for i, label in enumerate(data["labels"]):
                trace.value_memory.add(
                    str(label), WavePattern.from_complex(re[i] + 1j * im[i])
                )
        return trace


def capacity_probe(dim: int, item_counts, trials: int, seed: int,
                   candidates: int = 100) -> list[tuple[int, float]]:
    """Rank-1 recall accuracy of a fresh SuperTrace per (n, trial) cell.

    Each trial stores n random unitary-key/Gaussian-value pairs and recalls
    every key against an item memory of max(candidates, n) labeled values
    (the stored ones plus distractors). Rows come back ordered by n.
    """
    counts = sorted(set(int(n) for n in item_counts))
    if not counts or counts[0] < 1:
        raise ValueError("item counts must be positive integers")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rows = []
    for n in counts:
        pool = max(candidates, n)
        hits = total = 0
        for trial in range(trials):
            rng = np.random.default_rng([seed, n, trial])
            values = [random_pattern(dim, rng, "gaussian") for _ in range(pool)]
            mem = ItemMemory(dim)
            for j, v in enumerate(values):
                mem.add(f"item-{j}", v)
            trace = SuperTrace(dim)
            keys = [random_pattern(dim, rng, "unitary") for _ in range(n)]
            for i, key in enumerate(keys):
                trace.store_assoc(key, values[i], f"item-{i}")
            for i, key in enumerate(keys):
                best = cleanup(unbind(trace.trace, key), mem, 1).best
                hits += best[0] == f"item-{i}"
                total += 1
        rows.append((n, hits / total))
    return rows
