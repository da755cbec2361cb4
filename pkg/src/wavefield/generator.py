"""Symbolic answer generation over a triple knowledge base by iterative
resonance probing.

Facts are stored as whole-fact patterns (the superposition of their term
patterns). Each step probes the memory with the query plus decayed
emissions, takes the most resonant fact, and emits that fact's term which
is still missing from the probe; a fact whose terms are all present is
saturated and skipped. The loop halts on a below-threshold read, a repeated
emission, or the step cap, so it always terminates.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import EmptyStore
from .hrr import DEFAULT_NOISE_FLOOR, ItemMemory
from .mapper import (
    Lexicon,
    MorphRule,
    MorphRules,
    Role,
    Scope,
    apply_morph,
    default_rules,
    encode_base,
    multiplex,
    parse,
)
from .pattern import (
    Kernel,
    ResonanceScore,
    WavePattern,
    normalize,
    scale,
    superpose,
)
from .store import SlotStore

_KB_META = "kb.json"


@dataclass(frozen=True)
class ReadResult:
    """Outcome of one memory read: the emitted label (None when nothing
    resonates above the noise floor) and the winning fact's score."""

    label: str | None
    score: ResonanceScore
    below_threshold: bool


@dataclass(frozen=True)
class ProbeStep:
    step: int
    label: str | None
    score: float
    below_threshold: bool


@dataclass
class GenState:
    query_pattern: WavePattern
    emitted: list[str] = field(default_factory=list)
    probe_history: list[ProbeStep] = field(default_factory=list)

    @property
    def steps(self) -> int:
        return len(self.probe_history)


@dataclass(frozen=True)
class GenerationResult:
    tokens: list[str]
    history: list[ProbeStep]
    probes: list[WavePattern]


class FactKB:
    """Triple knowledge base encoded as resonance-scannable fact patterns.

    Every lexeme maps deterministically under the shared lexicon seed, so a
    rebuilt KB is bit-identical. A file-backed KB scans its facts through a
    SlotStore; the default keeps them in an in-process item memory.
    """

    def __init__(self, lexicon: Lexicon, rules: MorphRules | None = None,
                 noise_floor: float = DEFAULT_NOISE_FLOOR,
                 presence_floor: float | None = None):
        self.lexicon = lexicon
        self.rules = rules if rules is not None else default_rules()
        self.noise_floor = float(noise_floor)
        self.presence_floor = float(presence_floor if presence_floor is not None
                                    else noise_floor)
        self.triples: list[tuple[str, str, str]] = []
        self.fact_terms: list[list[str]] = []
        self.surfaces: dict[str, str] = {}
        self.term_memory = ItemMemory(lexicon.dim, noise_floor)
        self.fact_memory = ItemMemory(lexicon.dim, noise_floor)
        self._token_cache: dict[str, WavePattern] = {}
        self._store: SlotStore | None = None

    def __len__(self) -> int:
        return len(self.triples)

    @property
    def dim(self) -> int:
        return self.lexicon.dim

    def _unit_pattern(self, unit) -> WavePattern:
        p = encode_base(self.lexicon.vector(unit.root))
        for affix in unit.affixes:
            p = apply_morph(p, self.rules.by_id(affix))
        return p

    def _bag(self, units) -> WavePattern:
        return multiplex([(Role.NEUTRAL, self._unit_pattern(u)) for u in units],
                         self.lexicon)

    def add_triple(self, subject: str, relation: str, obj: str) -> bool:
        """Encode and store one fact; exact duplicates are ignored.
        Returns True when the triple was new."""
        triple = (subject, relation, obj)
        if triple in set(self.triples):
            return False
        units = []
        for text in triple:
            units.extend(parse(text, self.rules))
        pattern = self._bag(units)
        terms: list[str] = []
        for unit in units:
            if unit.root not in terms:
                terms.append(unit.root)
            self.surfaces.setdefault(unit.root, unit.surface)
            if unit.root not in self.term_memory:
                self.term_memory.add(
                    unit.root,
                    multiplex([(Role.NEUTRAL, self._unit_pattern(unit))], self.lexicon),
                )
        index = len(self.triples)
        self.fact_memory.add(str(index), pattern)
        if self._store is not None:
            self._store.put(index, pattern)
        self.triples.append(triple)
        self.fact_terms.append(terms)
        return True

    def map_query(self, text: str) -> WavePattern:
        """Query pattern: the normalized bag of its content-word patterns
        (morph rules applied), order-insensitive by construction."""
        return self._bag(parse(text, self.rules))

    def token_pattern(self, token: str) -> WavePattern:
        if token not in self._token_cache:
            self._token_cache[token] = self.map_query(token)
        return self._token_cache[token]

    def read(self, probe: WavePattern, max_facts: int = 16) -> ReadResult:
        """Resonance read with pattern completion: walk facts by descending
        coherence and emit the strongest fact's least-present term."""
        if len(self.triples) == 0:
            raise EmptyStore("knowledge base holds no facts")
        term_scores = dict(zip(self.term_memory.labels,
                               self.term_memory.scores(probe)))
        if self._store is not None:
            hits = self._store.query_topk(probe, k=min(len(self.triples), max_facts),
                                          kernel=Kernel.COHERENCE)
            ranked = [(r.score.value, r.id) for r in hits]
        else:
            scores = self.fact_memory.scores(probe)
            order = np.argsort(-scores, kind="stable")[:max_facts]
            ranked = [(float(scores[i]), i) for i in order]
        top_score = ranked[0][0]
        for score, fact_ix in ranked:
            if score < self.noise_floor:
                break
            missing = [t for t in self.fact_terms[fact_ix]
                       if term_scores[t] < self.presence_floor]
            if missing:
                label = min(missing, key=lambda t: term_scores[t])
                return ReadResult(self.surfaces[label],
                                  ResonanceScore(score, Kernel.COHERENCE), False)
        return ReadResult(None, ResonanceScore(top_score, Kernel.COHERENCE), True)

    # -- construction and persistence -----------------------------------

    @classmethod
    def from_triples(cls, triples, lexicon: Lexicon,
                     rules: MorphRules | None = None,
                     noise_floor: float = DEFAULT_NOISE_FLOOR,
                     presence_floor: float | None = None) -> "FactKB":
        kb = cls(lexicon, rules, noise_floor, presence_floor)
        for s, r, o in triples:
            kb.add_triple(s, r, o)
        return kb

    @classmethod
    def from_jsonl(cls, path, lexicon: Lexicon,
                   rules: MorphRules | None = None,
                   noise_floor: float = DEFAULT_NOISE_FLOOR,
                   presence_floor: float | None = None) -> "FactKB":
        """Ingest facts from JSON Lines: one {"s": ..., "r": ..., "o": ...}
        object per line."""
        kb = cls(lexicon, rules, noise_floor, presence_floor)
        for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
            line = raw.strip()
            if not line:
                continue
            obj = json.loads(line)
            try:
                kb.add_triple(str(obj["s"]), str(obj["r"]), str(obj["o"]))
            except KeyError as exc:
                raise ValueError(f"{path}:{lineno}: missing field {exc}") from None
        return kb

    def save(self, path) -> None:
        """Write the KB as a SlotStore of fact patterns plus a metadata
        sidecar sufficient to rebuild terms deterministically."""
        path = Path(path)
        store = SlotStore.create(path, self.dim, kernel_default=Kernel.COHERENCE,
                                 seed=self.lexicon.seed)
        for i in range(len(self.triples)):
            store.put(i, self.fact_memory.pattern(str(i)))
        store.close()
        meta = {
            "triples": [list(t) for t in self.triples],
            "dim": self.dim,
            "seed": self.lexicon.seed,
            "noise_floor": self.noise_floor,
            "presence_floor": self.presence_floor,
            "rules": [
                {"trigger": r.trigger, "kind": r.kind, "delta": r.delta,
                 "scope": r.scope.value}
                for r in self.rules
            ],
        }
        (path / _KB_META).write_text(
            json.dumps(meta, sort_keys=True, indent=2) + "\n", encoding="utf-8"
        )

    @classmethod
    def load(cls, path) -> "FactKB":
        """Reopen a saved KB; fact ranking goes through the on-disk store."""
        path = Path(path)
        meta = json.loads((path / _KB_META).read_text(encoding="utf-8"))
        rules = MorphRules([
            MorphRule(trigger=r["trigger"], kind=r["kind"], delta=r["delta"],
                      scope=Scope(r["scope"]))
            for r in meta["rules"]
        ])
        lexicon = Lexicon(meta["dim"], seed=meta["seed"])
        kb = cls(lexicon, rules, meta["noise_floor"], meta["presence_floor"])
        for s, r, o in meta["triples"]:
            kb.add_triple(s, r, o)
        kb._store = SlotStore.open(path)
        return kb


def formulate_probe(state: GenState, kb: FactKB) -> WavePattern:
    """Normalized sum of the query pattern and emitted-token patterns
    decayed by 0.5 per step of recency (most recent first)."""
    acc = state.query_pattern
    for j, token in enumerate(reversed(state.emitted), start=1):
        acc = superpose(acc, scale(kb.token_pattern(token), 0.5 ** j))
    return normalize(acc)


def memory_read(kb: FactKB, probe: WavePattern) -> ReadResult:
    """Single resonance read against the knowledge base."""
    return kb.read(probe)


def generate(query_text: str, kb: FactKB, max_steps: int = 8) -> GenerationResult:
    """Run the probe/read/emit loop until the answer completes.

    Stops when a read comes back below threshold (answer complete), when
    the top label repeats (fixed point), or at max_steps. Every emitted
    token is a label of a stored term.
    """
    if max_steps < 1:
        raise ValueError("max_steps must be >= 1")
    state = GenState(query_pattern=kb.map_query(query_text))
    probes: list[WavePattern] = []
    for step in range(1, max_steps + 1):
        probe = formulate_probe(state, kb)
        probes.append(probe)
        result = memory_read(kb, probe)
        state.probe_history.append(
            ProbeStep(step, result.label, float(result.score), result.below_threshold)
        )
        if result.below_threshold or result.label in state.emitted:
            break
        state.emitted.append(result.label)
    return GenerationResult(tokens=list(state.emitted),
                            history=list(state.probe_history), probes=probes)
