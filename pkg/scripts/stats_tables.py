#!/usr/bin/env python3
"""Print the prefix-length and variation-kind tables for a dataset file.

Point it at any file in this package's record format (see README); on the
released benchmark data it reproduces the published statistics tables.
"""

import argparse

from mwpx.dataset import LENGTH_BUCKETS, read_dataset, stats


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("data", help="dataset file (one record per line)")
    args = parser.parse_args()

    result = read_dataset(args.data, check=False)
    for err in result.errors:
        print(f"  ! line {err.line}: {err.error}: {err.detail}")
    report = stats(result.samples)

    print("prefix expression length")
    print("  " + "".join(f"{b:>8}" for b in LENGTH_BUCKETS))
    print("  " + "".join(f"{report.length_histogram.get(b, 0):>8}" for b in LENGTH_BUCKETS))

    print("\nvariation data")
    for kind in ("source", "va", "sub", "whole", "manual"):
        print(f"  {kind:<8}{report.kind_counts.get(kind, 0):>8}")
    print(f"  {'all':<8}{report.total:>8}")
    if report.overlap:
        print(f"  (kind counts exceed the total by {report.overlap} overlapping records)")

    print("\nsplits")
    for name, count in sorted(report.split_counts.items()):
        print(f"  {name:<12}{count:>8}")


if __name__ == "__main__":
    main()
