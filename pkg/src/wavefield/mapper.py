"""Text-to-pattern mapping: deterministic lexicon, affix/negator parsing,
sign-to-phase encoding, phase-operation morphology, and role-multiplexed
composition of multi-word inputs.

Negation is a full-spectrum pi phase shift, so a word and its negation
share an amplitude profile while sitting in anti-phase.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

import numpy as np

from .errors import (
    DanglingNegator,
    DimMismatch,
    EmptyInput,
    InvalidVector,
    UnknownLexeme,
)
from .pattern import TWO_PI, WavePattern, normalize, phase_shift, superpose

_MASK64 = (1 << 64) - 1

STOPWORDS = frozenset(
    """a an the of to and or is are was were be been am do does did has have had
    what which who whom that this these those with for from by at as in on it
    its their his her they them we you i will would shall should can could may
    might""".split()
)


class Role(Enum):
    SUBJECT = "subject"
    PREDICATE = "predicate"
    OBJECT = "object"
    MODIFIER = "modifier"
    NEUTRAL = "neutral"


class Scope(Enum):
    ATTACHED_ROOT = "attached_root"
    NEXT_CONTENT_WORD = "next_content_word"


@dataclass(frozen=True)
class MorphRule:
    """An affix or function-word trigger paired with a phase operation.

    delta is in radians; 0 means the affix is recorded but does not modulate
    the pattern (the identity op used by plain suffix stripping). A mask, if
    given, overrides delta with per-dimension shifts.
    """

    trigger: str
    kind: str  # prefix | suffix | token
    delta: float = math.pi
    mask: np.ndarray | None = None
    scope: Scope = Scope.ATTACHED_ROOT

    def __post_init__(self):
        if not self.trigger:
            raise ValueError("rule trigger must be non-empty")
        if self.kind not in ("prefix", "suffix", "token"):
            raise ValueError(f"unknown rule kind: {self.kind!r}")
        if not 0.0 <= self.delta < TWO_PI:
            raise ValueError("delta must lie in [0, 2*pi)")

    @property
    def rule_id(self) -> str:
        if self.kind == "prefix":
            return f"{self.trigger}-"
        if self.kind == "suffix":
            return f"-{self.trigger}"
        return self.trigger


class MorphRules:
    """Validated rule collection with affix lookup."""

    def __init__(self, rules: list[MorphRule]):
        self._by_id: dict[str, MorphRule] = {}
        for rule in rules:
            if rule.rule_id in self._by_id:
                raise ValueError(f"duplicate rule trigger: {rule.rule_id!r}")
            self._by_id[rule.rule_id] = rule
        self._prefixes = sorted(
            (r for r in rules if r.kind == "prefix"),
            key=lambda r: len(r.trigger),
            reverse=True,
        )
        self._suffixes = sorted(
            (r for r in rules if r.kind == "suffix"),
            key=lambda r: len(r.trigger),
            reverse=True,
        )
        self._tokens = {r.trigger: r for r in rules if r.kind == "token"}

    def __iter__(self):
        return iter(self._by_id.values())

    def __len__(self) -> int:
        return len(self._by_id)

    def by_id(self, rule_id: str) -> MorphRule:
        return self._by_id[rule_id]

    def token_rule(self, token: str) -> MorphRule | None:
        return self._tokens.get(token)

    def match_prefix(self, word: str) -> MorphRule | None:
        for rule in self._prefixes:
            if word.startswith(rule.trigger) and len(word) - len(rule.trigger) >= 3:
                return rule
        return None

    def match_suffix(self, word: str) -> MorphRule | None:
        for rule in self._suffixes:
            if word.endswith(rule.trigger) and len(word) - len(rule.trigger) >= 3:
                return rule
        return None

    @classmethod
    def from_file(cls, path) -> "MorphRules":
        """Load rules from UTF-8 lines: trigger<TAB>kind<TAB>delta<TAB>scope."""
        rules = []
        for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 4:
                raise ValueError(f"{path}:{lineno}: expected 4 tab-separated fields")
            trigger, kind, delta_s, scope_s = parts
            if kind == "prefix":
                trigger = trigger.rstrip("-")
            elif kind == "suffix":
                trigger = trigger.lstrip("-")
            rules.append(
                MorphRule(
                    trigger=trigger,
                    kind=kind,
                    delta=float(delta_s),
                    scope=Scope(scope_s),
                )
            )
        return cls(rules)


def default_rules() -> MorphRules:
    """The stock rule table: negating prefixes and function words flip the
    full spectrum by pi; common suffixes are stripped without modulation."""
    rules = [
        MorphRule(p, "prefix", math.pi) for p in ("un", "in", "non", "dis")
    ]
    rules += [
        MorphRule(t, "token", math.pi, scope=Scope.NEXT_CONTENT_WORD)
        for t in ("not", "never", "no")
    ]
    rules += [
        MorphRule(s, "suffix", 0.0) for s in ("ality", "ness", "ing", "ed", "s")
    ]
    return MorphRules(rules)


@dataclass
class ParsedUnit:
    root: str
    surface: str
    affixes: list[str] = field(default_factory=list)
    role: Role = Role.NEUTRAL


def _tokenize(text: str) -> list[str]:
    tokens, current = [], []
    for ch in text.lower():
        if ch.isalnum():
            current.append(ch)
        elif current:
            tokens.append("".join(current))
            current = []
    if current:
        tokens.append("".join(current))
    return tokens


def _assign_roles(units: list[ParsedUnit]) -> None:
    n = len(units)
    if n == 1:
        units[0].role = Role.NEUTRAL
    elif n == 2:
        units[0].role = Role.SUBJECT
        units[1].role = Role.OBJECT
    else:
        order = [Role.SUBJECT, Role.PREDICATE, Role.OBJECT]
        for i, unit in enumerate(units):
            unit.role = order[i] if i < 3 else Role.MODIFIER


def parse(text: str, rules: MorphRules) -> list[ParsedUnit]:
    """Tokenize, drop stop-words, strip known affixes, and attach negators
    to the following content word. Roles are assigned by position."""
    if not text or not text.strip():
        raise EmptyInput("input text is empty")
    units: list[ParsedUnit] = []
    pending: list[str] = []
    for token in _tokenize(text):
        token_rule = rules.token_rule(token)
        if token_rule is not None:
            if token_rule.scope is Scope.NEXT_CONTENT_WORD:
                pending.append(token_rule.rule_id)
            continue
        if token in STOPWORDS:
            continue
        root, affixes = token, []
        prefix = rules.match_prefix(root)
        if prefix is not None:
            affixes.append(prefix.rule_id)
            root = root[len(prefix.trigger):]
        suffix = rules.match_suffix(root)
        if suffix is not None:
            affixes.append(suffix.rule_id)
            root = root[: len(root) - len(suffix.trigger)]
        affixes.extend(pending)
        pending.clear()
        units.append(ParsedUnit(root=root, surface=token, affixes=affixes))
    if pending:
        raise DanglingNegator(f"negator(s) {pending} have no following content word")
    if not units:
        raise EmptyInput("no content words in input")
    _assign_roles(units)
    return units


def _stable_key(name: str, seed: int) -> int:
    digest = hashlib.blake2b(name.encode("utf-8"), digest_size=8).digest()
    return (int.from_bytes(digest, "little") ^ (seed & _MASK64)) & _MASK64


class Lexicon:
    """Lexeme -> unit base vector table.

    The default source synthesizes vectors on demand from a counter-based
    generator keyed by (lexeme hash XOR seed), so any lexeme always maps to
    the same vector for a given seed and dimension. A file-backed lexicon
    serves only its loaded entries and raises UnknownLexeme otherwise.
    """

    def __init__(self, dim: int, seed: int = 0, source: str = "seeded",
                 table: dict[str, np.ndarray] | None = None):
        if dim < 1:
            raise ValueError("dim must be >= 1")
        if source not in ("seeded", "file"):
            raise ValueError(f"unknown lexicon source: {source!r}")
        self.dim = int(dim)
        self.seed = int(seed)
        self.source = source
        self._table: dict[str, np.ndarray] = dict(table or {})
        self._role_phases: dict[Role, np.ndarray] = {}

    def vector(self, lexeme: str) -> np.ndarray:
        if lexeme in self._table:
            return self._table[lexeme]
        if self.source == "file":
            raise UnknownLexeme(f"lexeme not in file-sourced lexicon: {lexeme!r}")
        rng = np.random.Generator(np.random.Philox(key=_stable_key(lexeme, self.seed)))
        v = rng.standard_normal(self.dim)
        v /= np.linalg.norm(v)
        v.setflags(write=False)
        self._table[lexeme] = v
        return v

    def role_phases(self, role: Role) -> np.ndarray:
        """Deterministic unit-amplitude role phasor, as a phase mask."""
        if role not in self._role_phases:
            rng = np.random.Generator(
                np.random.Philox(key=_stable_key(f"role:{role.value}", self.seed))
            )
            phases = rng.uniform(0.0, TWO_PI, self.dim)
            phases.setflags(write=False)
            self._role_phases[role] = phases
        return self._role_phases[role]

    @classmethod
    def from_file(cls, path, seed: int = 0) -> "Lexicon":
        """Load `lexeme<TAB>f1 f2 ... fdim` lines; vectors are validated for
        a consistent dimension and finiteness, then normalized."""
        table: dict[str, np.ndarray] = {}
        dim: int | None = None
        for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            try:
                lexeme, values = line.split("\t", 1)
            except ValueError:
                raise InvalidVector(f"{path}:{lineno}: missing tab separator") from None
            v = np.array(values.split(), dtype=np.float64)
            if dim is None:
                dim = v.shape[0]
            elif v.shape[0] != dim:
                raise InvalidVector(
                    f"{path}:{lineno}: dim {v.shape[0]} != expected {dim}"
                )
            if not np.all(np.isfinite(v)):
                raise InvalidVector(f"{path}:{lineno}: non-finite component")
            norm = np.linalg.norm(v)
            if norm == 0.0:
                raise InvalidVector(f"{path}:{lineno}: zero vector")
            v /= norm
            v.setflags(write=False)
            table[lexeme] = v
        if not table:
            raise InvalidVector(f"{path}: no entries")
        return cls(dim=dim, seed=seed, source="file", table=table)


def encode_base(v) -> WavePattern:
    """Sign-to-phase encoding: amplitude |v[i]|, phase 0 for v[i] >= 0 and
    pi for v[i] < 0."""
    arr = np.asarray(v, dtype=np.float64)
    if arr.ndim != 1 or arr.shape[0] == 0:
        raise InvalidVector("base vector must be a non-empty 1-D array")
    if not np.all(np.isfinite(arr)):
        raise InvalidVector("base vector has non-finite components")
    return WavePattern.from_real(arr)


def apply_morph(p: WavePattern, rule: MorphRule) -> WavePattern:
    """Apply a rule's phase operation; amplitudes are never modified."""
    if rule.mask is not None:
        return phase_shift(p, rule.mask)
    if rule.delta == 0.0:
        return p
    return phase_shift(p, rule.delta)


def multiplex(units: list[tuple[Role, WavePattern]], lex: Lexicon) -> WavePattern:
    """Bind each unit to its role by phase rotation with the role's phasor,
    superpose, and normalize. Distinct roles keep constituents recoverable;
    swapping roles changes the composite."""
    if not units:
        raise EmptyInput("multiplex needs at least one unit")
    acc = None
    for role, p in units:
        if p.dim != lex.dim:
            raise DimMismatch(f"unit dim {p.dim} != lexicon dim {lex.dim}")
        bound = phase_shift(p, lex.role_phases(role))
        acc = bound if acc is None else superpose(acc, bound)
    return normalize(acc)


def role_unbind(p: WavePattern, role: Role, lex: Lexicon) -> WavePattern:
    """Undo a role binding by subtracting the role phasor's phases."""
    return phase_shift(p, -lex.role_phases(role))


def map_text(text: str, lex: Lexicon, rules: MorphRules | None = None) -> WavePattern:
    """Full pipeline: parse, look up base vectors, encode, apply morph
    rules, and multiplex into one pattern. Deterministic for a fixed
    (text, seed, dim, rules)."""
    if rules is None:
        rules = default_rules()
    units = parse(text, rules)
    pairs = []
    for unit in units:
        p = encode_base(lex.vector(unit.root))
        for affix in unit.affixes:
            p = apply_morph(p, rules.by_id(affix))
        pairs.append((unit.role, p))
    return multiplex(pairs, lex)
