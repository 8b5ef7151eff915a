#!/usr/bin/env python3
"""Regenerate the golden differential cases from the CLI's answers.

Builds 500 deterministic cases across the three operations, asks the CLI for
each group's output, and freezes input+output pairs into
bindings/tests/golden/cases.jsonl. Run from the repository root.
"""

import json
import random
import subprocess
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[2] / "src"))

from mwpx.expressions import Internal, Leaf, OpKind, Variable, serialize, to_str, tokens_to_str

OPS = (OpKind.ADD, OpKind.SUB, OpKind.MUL, OpKind.DIV)
GOLDEN = Path(__file__).resolve().parents[1] / "tests" / "golden" / "cases.jsonl"


def random_tree(rng, internal):
    if internal == 0:
        return Leaf(Variable(rng.randint(0, 5)))
    left = rng.randint(0, internal - 1)
    return Internal(rng.choice(OPS), random_tree(rng, left), random_tree(rng, internal - 1 - left))


def cli(args, input_text):
    result = subprocess.run(
        [sys.executable, "-m", "mwpx", *args],
        input=input_text,
        capture_output=True,
        text=True,
        check=True,
    )
    return result.stdout.splitlines()


def main():
    rng = random.Random(1486)
    cases = []

    for i in range(170):
        tree = random_tree(rng, rng.randint(1, 6))
        notation = "infix" if i % 2 == 0 else "prefix"
        cases.append(
            {
                "op": "algo1",
                "expression": to_str(tree, notation),
                "notation": notation,
                "dedup": i % 3 != 0,
            }
        )
    for i in range(130):
        tree = random_tree(rng, rng.randint(1, 5))
        notation = "infix" if i % 2 == 0 else "prefix"
        cases.append({"op": "closure", "expression": to_str(tree, notation), "notation": notation})
    for i in range(200):
        tree = random_tree(rng, rng.randint(1, 5))
        member = serialize(tree, "prefix")
        cut = rng.randint(0, len(member))
        output = [tokens_to_str([t]) for t in member[:cut]]
        if i % 7 == 0:
            output.insert(rng.randint(0, len(output)) if output else 0, "junk")
        cases.append(
            {
                "op": "dts",
                "gold": to_str(tree, "infix"),
                "output": output,
                "mode": "algo1" if i % 5 == 0 else "closure",
                "notation": "infix" if i % 9 == 0 else "prefix",
            }
        )

    # Capture expected outputs group by group so one CLI call serves many cases.
    groups: dict[tuple, list[int]] = {}
    for index, case in enumerate(cases):
        if case["op"] == "dts":
            key = ("dts", case["mode"], case["notation"])
        else:
            key = ("equiv", case["op"], case["notation"], case.get("dedup", True))
        groups.setdefault(key, []).append(index)

    for key, indices in groups.items():
        if key[0] == "equiv":
            _, mode, notation, dedup = key
            args = ["equiv", "--mode", mode, "--notation", notation]
            args.append("--dedup" if dedup else "--no-dedup")
            lines = "\n".join(cases[i]["expression"] for i in indices) + "\n"
        else:
            _, mode, notation = key
            args = ["dts", "--mode", mode, "--notation", notation]
            lines = "\n".join(f"{cases[i]['gold']}\t{' '.join(cases[i]['output'])}" for i in indices) + "\n"
        answers = cli(args, lines)
        assert len(answers) == len(indices), key
        for i, answer in zip(indices, answers):
            cases[i]["expect"] = answer

    GOLDEN.parent.mkdir(parents=True, exist_ok=True)
    with open(GOLDEN, "w", encoding="utf-8") as fh:
        for case in cases:
            fh.write(json.dumps(case, ensure_ascii=False) + "\n")
    print(f"wrote {len(cases)} cases to {GOLDEN}")


if __name__ == "__main__":
    main()
