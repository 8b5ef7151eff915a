#!/usr/bin/env python3
"""Build a synthetic 2907-source dataset, split it with the exact released-size
ratios (2507/2907, 200/2907, 200/2907), and print the per-split source counts.
"""

import argparse
import random
from collections import Counter
from fractions import Fraction

from mwpx.dataset import MwpSample, split_by_source


def synthetic(n_sources: int, seed: int) -> list[MwpSample]:
    rng = random.Random(seed)
    out = []
    for i in range(n_sources):
        a, b = rng.randint(1, 50), rng.randint(1, 50)
        out.append(
            MwpSample(
                id=f"s{i}",
                context=f"题目{i}：甲有N0个，乙有N1个。",
                question="一共有多少个？",
                expression_infix="N0 + N1",
                numbers=[Fraction(a), Fraction(b)],
                answer=Fraction(a + b),
            )
        )
        for j in range(rng.randint(0, 3)):
            out.append(
                MwpSample(
                    id=f"s{i}.va{j}",
                    context=out[-j - 1 if j else -1].context,
                    question="",
                    expression_infix="N0 - N1",
                    numbers=[Fraction(a), Fraction(b)],
                    answer=Fraction(a - b),
                    variation_kind="va",
                    parent_id=f"s{i}",
                )
            )
    return out


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sources", type=int, default=2907)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    data = synthetic(args.sources, args.seed)
    ratios = [Fraction(2507, 2907), Fraction(200, 2907), Fraction(200, 2907)]
    split = split_by_source(data, ratios, seed=args.seed)

    sources = Counter(s.split for s in split if s.variation_kind == "source")
    everything = Counter(s.split for s in split)
    print(f"{'split':<12}{'sources':>10}{'all records':>14}")
    for name in ("train", "validation", "test"):
        print(f"{name:<12}{sources[name]:>10}{everything[name]:>14}")

    leaks = 0
    seen: dict[str, str] = {}
    for s in split:
        if seen.setdefault(s.context, s.split) != s.split:
            leaks += 1
    print(f"\ncontexts appearing in more than one split: {leaks}")


if __name__ == "__main__":
    main()
