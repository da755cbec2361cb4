"""Morphological mapping: how "happy" and "not happy" become opposite
patterns that magnitude-only similarity cannot tell apart.

The mapper strips affixes, attaches negators to the next content word, and
renders negation as a pi phase flip: the amplitude profile (what the word
is about) is untouched while the phases (its semantic mode) invert.
"""

import numpy as np

from wavefield import Lexicon, default_rules, map_text, parse, resonance_coherence

rules = default_rules()
lexicon = Lexicon(dim=256, seed=7)

for text in ("unhappy", "did not go", "nationality", "exports of x-land"):
    units = parse(text, rules)
    rendered = ", ".join(f"{u.root}{u.affixes or ''} [{u.role.value}]" for u in units)
    print(f"parse({text!r}) -> {rendered}")

happy = map_text("happy", lexicon, rules)
not_happy = map_text("not happy", lexicon, rules)
unhappy = map_text("unhappy", lexicon, rules)

print("\ncoherence(happy, not happy) =", resonance_coherence(happy, not_happy).value)
print("coherence(happy, unhappy)   =", resonance_coherence(happy, unhappy).value)
print("'not happy' == 'unhappy' bit-identical:", not_happy == unhappy)

# amplitude-only cosine is blind to the flip
amp_cos = float(
    happy.amplitude @ not_happy.amplitude
    / (np.linalg.norm(happy.amplitude) * np.linalg.norm(not_happy.amplitude))
)
print("\namplitude-only cosine(happy, not happy) =", amp_cos)
print("-> magnitude similarity says 'identical'; phase says 'opposite'.")

# double negation wraps back around
not_not_happy = map_text("not not happy", lexicon, rules)
print("\ncoherence(happy, not not happy) =",
      round(resonance_coherence(happy, not_not_happy).value, 12))
