#!/usr/bin/env python3
"""Minimal sketch of a tree-decoder training loop using the binding.

A stand-in "decoder" produces a partial prefix per step (here: a commuted
reading of the gold's head, truncated at random). At each step the loop asks
for the equivalent target with the longest common prefix and would compute its
loss against that target instead of the stored gold. No tensors here; the
point is the call pattern.
"""

import random

from mwpx_bindings import dts_select, dts_select_batch, enumerate_closure

DATASET = [
    ("(N1*N0)-N0", ["-", "*", "N0", "N1", "N0"]),
    ("N0+N1*N2", ["+", "*", "N2", "N1", "N0"]),
    ("(N0+N1)*(N2+N3)", ["*", "+", "N3", "N2", "+", "N1", "N0"]),
]


def fake_decoder_step(rng, full_output):
    return full_output[: rng.randint(1, len(full_output))]


def main() -> None:
    rng = random.Random(7)
    for gold, decoded_form in DATASET:
        print(f"gold: {gold}")
        print(f"  equivalents: {enumerate_closure(gold)}")
        for step in range(3):
            partial = fake_decoder_step(rng, decoded_form)
            target, match_len, index = dts_select(gold, partial)
            marker = "gold kept" if index == 0 else f"candidate {index}"
            print(f"  step {step}: partial={' '.join(partial)!r:28} "
                  f"target={' '.join(target)!r:24} match={match_len} ({marker})")

    # Per-batch usage: one call per optimizer step.
    batch = [(gold, form[:2]) for gold, form in DATASET]
    results = dts_select_batch(batch)
    print("\nbatch of", len(results), "queries ->",
          [(" ".join(t), n) for t, n, _ in results])


if __name__ == "__main__":
    main()
