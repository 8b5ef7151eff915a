#!/usr/bin/env python3
"""Drive `mwpx dts --stream` over a pipe the way a training loop would.

A mock decoder emits partial prefixes of a commuted form of each gold
expression; the stream returns, per line and in order, the equivalent target
that matches the longest prefix. Any language able to spawn a process can
integrate target selection this way; no bindings required.
"""

import random
import subprocess
import sys

GOLDS = [
    "(N1*N0)-N0",
    "N0+N1*N2",
    "(N0+N1)*(N2+N3)",
    "N0-N1/N2",
    "N0*N1+N2*N3",
]


def main() -> None:
    rng = random.Random(42)
    proc = subprocess.Popen(
        [sys.executable, "-m", "mwpx", "dts", "--stream"],
        stdin=subprocess.PIPE,
        stdout=subprocess.PIPE,
        text=True,
    )
    improved = 0
    total = 100
    try:
        for step in range(total):
            gold = rng.choice(GOLDS)
            # Mock decoder: the swapped-operand reading of the gold's head.
            mock_output = {
                "(N1*N0)-N0": "- * N0",
                "N0+N1*N2": "+ * N2 N1",
                "(N0+N1)*(N2+N3)": "* + N3",
                "N0-N1/N2": "- N0 / N1",
                "N0*N1+N2*N3": "+ * N3 N2",
            }[gold][: rng.randint(3, 11)]
            proc.stdin.write(f"{gold}\t{mock_output}\n")
            proc.stdin.flush()
            target, match_len, index = proc.stdout.readline().rstrip("\n").split("\t")
            if int(index) > 0:
                improved += 1
            if step < 5:
                print(f"gold={gold!r} partial={mock_output!r} -> target={target!r} match={match_len}")
    finally:
        proc.stdin.close()
        proc.wait(timeout=30)
    print(f"\n{total} queries answered in order; {improved} selected a non-original equivalent")


if __name__ == "__main__":
    main()
