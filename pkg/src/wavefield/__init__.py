"""wavefield: phase-coded semantic memory.

Text is encoded as amplitude/phase wave patterns, stored in a scannable
field memory, and retrieved by phase-aware resonance; holographic binding
supports superposed associative traces, and a symbolic generation loop
answers factoid queries by iterative resonance probing.
"""

from .errors import (
    CorruptStore,
    DanglingNegator,
    DimMismatch,
    DuplicateId,
    DuplicateLabel,
    EmptyInput,
    EmptyMemory,
    EmptyStore,
    InvalidVector,
    StoreIO,
    UnknownLexeme,
    WaveFieldError,
    ZeroEnergy,
)
from .evalbench import (
    EvalReport,
    run_capacity_eval,
    run_latency_bench,
    run_negation_eval,
)
from .generator import (
    FactKB,
    GenerationResult,
    GenState,
    ProbeStep,
    ReadResult,
    formulate_probe,
    generate,
    memory_read,
)
from .hrr import (
    DEFAULT_NOISE_FLOOR,
    CleanupResult,
    ItemMemory,
    bind,
    cleanup,
    identity_pattern,
    involution,
    unbind,
    unitary_cue,
)
from .mapper import (
    Lexicon,
    MorphRule,
    MorphRules,
    ParsedUnit,
    Role,
    Scope,
    apply_morph,
    default_rules,
    encode_base,
    map_text,
    multiplex,
    parse,
    role_unbind,
)
from .pattern import (
    Kernel,
    ResonanceScore,
    WavePattern,
    energy,
    normalize,
    phase_shift,
    random_pattern,
    resonance,
    resonance_coherence,
    resonance_energy,
    scale,
    superpose,
)
from .store import QueryResult, SlotStore, SuperTrace, capacity_probe

__version__ = "0.1.0"

__all__ = [
    "CleanupResult",
    "CorruptStore",
    "DanglingNegator",
    "DEFAULT_NOISE_FLOOR",
    "DimMismatch",
    "DuplicateId",
    "DuplicateLabel",
    "EmptyInput",
    "EmptyMemory",
    "EmptyStore",
    "EvalReport",
    "FactKB",
    "GenState",
    "GenerationResult",
    "InvalidVector",
    "ItemMemory",
    "Kernel",
    "Lexicon",
    "MorphRule",
    "MorphRules",
    "ParsedUnit",
    "ProbeStep",
    "QueryResult",
    "ReadResult",
    "ResonanceScore",
    "Role",
    "Scope",
    "SlotStore",
    "StoreIO",
    "SuperTrace",
    "UnknownLexeme",
    "WaveFieldError",
    "WavePattern",
    "ZeroEnergy",
    "apply_morph",
    "bind",
    "capacity_probe",
    "cleanup",
    "default_rules",
    "encode_base",
    "energy",
    "formulate_probe",
    "generate",
    "identity_pattern",
    "involution",
    "map_text",
    "memory_read",
    "multiplex",
    "normalize",
    "parse",
    "phase_shift",
    "random_pattern",
    "resonance",
    "resonance_coherence",
    "resonance_energy",
    "role_unbind",
    "run_capacity_eval",
    "run_latency_bench",
    "run_negation_eval",
    "scale",
    "superpose",
    "unbind",
    "unitary_cue",
]
