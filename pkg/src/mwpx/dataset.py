"""Line-delimited dataset records, splits, question-removal copies, statistics.

File format: UTF-8, one JSON object per line, LF endings. The first line is a
versioned header ``{"schema": "mwpx-dataset", "version": 1}``; readers accept
files without it so records can flow through pipes. Known fields are written
in a fixed order and unknown fields are preserved verbatim after them, so
write(read(f)) is byte-identical for files this package wrote.

Numbers and answers are exact rational strings ("8", "1/3", "0.5" all parse
exactly); a float-formatted ``answer_display`` rides along for human eyes and
is recomputed on write. A record may carry an optional ``variation_kinds``
list when one expression was produced by several variation methods; ``stats``
counts it once per method and reports the overlap explicitly.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import IO, Iterable

from .expressions import (
    ExpressionError,
    evaluate,
    parse_str,
    serialize_prefix,
    tokens_to_str,
    tree_variables,
)

SCHEMA_NAME = "mwpx-dataset"
SCHEMA_VERSION = 1

VARIATION_KINDS = ("source", "va", "sub", "whole", "manual")
SPLITS = ("train", "validation", "test")

LENGTH_BUCKETS = ("3", "5", "7", "9", "11", ">11")

_FIELD_ORDER = (
    "id",
    "context",
    "question",
    "expression_infix",
    "numbers",
    "answer",
    "answer_display",
    "variation_kind",
    "parent_id",
    "split",
)


class DanglingParentError(ValueError):
    def __init__(self, sample_id: str, parent_id: str | None):
        self.sample_id = sample_id
        self.parent_id = parent_id
        super().__init__(f"sample {sample_id!r} has no source parent {parent_id!r}")


@dataclass
class MwpSample:
    id: str
    context: str
    question: str
    expression_infix: str
    numbers: list[Fraction]
    answer: Fraction | None = None
    variation_kind: str = "source"
    parent_id: str | None = None
    split: str | None = None
    extra: dict = field(default_factory=dict)

    def kinds(self) -> list[str]:
        """All variation methods that produced this record (usually one)."""
        multi = self.extra.get("variation_kinds")
        if isinstance(multi, list) and multi:
            return [str(k) for k in multi]
        return [self.variation_kind]


@dataclass
class RecordError:
    line: int
    sample_id: str | None
    error: str
    detail: str


@dataclass
class ReadResult:
    samples: list[MwpSample]
    errors: list[RecordError]


def frac_to_str(value: Fraction) -> str:
    return str(value)


def frac_from_json(value) -> Fraction:
    if isinstance(value, bool):
        raise ValueError(f"not a number: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float) or isinstance(value, str):
        return Fraction(str(value))
    raise ValueError(f"not a number: {value!r}")


def _display(value: Fraction | None) -> float | None:
    if value is None:
        return None
    try:
        return float(value)
    except OverflowError:
        return None


def sample_to_dict(sample: MwpSample) -> dict:
    d = {
        "id": sample.id,
        "context": sample.context,
        "question": sample.question,
        "expression_infix": sample.expression_infix,
        "numbers": [frac_to_str(v) for v in sample.numbers],
        "answer": frac_to_str(sample.answer) if sample.answer is not None else None,
        "answer_display": _display(sample.answer),
        "variation_kind": sample.variation_kind,
        "parent_id": sample.parent_id,
        "split": sample.split,
    }
    for key, value in sample.extra.items():
        if key not in _FIELD_ORDER:
            d[key] = value
    return d


def sample_to_json(sample: MwpSample) -> str:
    return json.dumps(sample_to_dict(sample), ensure_ascii=False, separators=(",", ":"))


def sample_from_dict(d: dict) -> MwpSample:
    missing = [k for k in ("id", "context", "question", "expression_infix", "numbers") if k not in d]
    if missing:
        raise ValueError(f"missing fields: {', '.join(missing)}")
    kind = d.get("variation_kind", "source")
    if kind not in VARIATION_KINDS:
        raise ValueError(f"unknown variation_kind {kind!r}")
    split = d.get("split")
    if split is not None and split not in SPLITS:
        raise ValueError(f"unknown split {split!r}")
    answer = d.get("answer")
    extra = {
        k: v for k, v in d.items() if k not in _FIELD_ORDER
    }
    return MwpSample(
        id=str(d["id"]),
        context=d["context"],
        question=d["question"],
        expression_infix=d["expression_infix"],
        numbers=[frac_from_json(v) for v in d["numbers"]],
        answer=frac_from_json(answer) if answer is not None else None,
        variation_kind=kind,
        parent_id=d.get("parent_id"),
        split=split,
        extra=extra,
    )


def validate_sample(sample: MwpSample) -> list[str]:
    """Invariant violations for one record, empty when clean."""
    problems: list[str] = []
    try:
        tree = parse_str(sample.expression_infix, "infix")
    except ExpressionError as exc:
        return [f"expression does not parse: {exc}"]
    over = [i for i in tree_variables(tree) if i >= len(sample.numbers)]
    if over:
        problems.append(f"variable indices out of range: {sorted(over)} with {len(sample.numbers)} numbers")
        return problems
    if sample.answer is not None:
        bindings = dict(enumerate(sample.numbers))
        try:
            value = evaluate(tree, bindings)
        except ExpressionError as exc:
            problems.append(f"expression does not evaluate: {exc}")
        else:
            if value != sample.answer:
                problems.append(f"answer mismatch: expression gives {value}, record says {sample.answer}")
    if sample.variation_kind != "source" and sample.parent_id is None:
        problems.append("variation record without parent_id")
    return problems


def _is_header(d: dict) -> bool:
    return "schema" in d and "id" not in d


def read_records(lines: Iterable[str], check: bool = True) -> ReadResult:
    """Parse records from an iterable of lines; errors are collected per line,
    never raised, and offending records are excluded.
    """
    samples: list[MwpSample] = []
    errors: list[RecordError] = []
    for lineno, line in enumerate(lines, start=1):
        text = line.strip()
        if not text:
            continue
        try:
            d = json.loads(text)
        except json.JSONDecodeError as exc:
            errors.append(RecordError(lineno, None, "MalformedLine", str(exc)))
            continue
        if not isinstance(d, dict):
            errors.append(RecordError(lineno, None, "MalformedLine", "not a JSON object"))
            continue
        if _is_header(d):
            if d.get("schema") != SCHEMA_NAME or d.get("version") != SCHEMA_VERSION:
                errors.append(
                    RecordError(lineno, None, "UnknownHeader", json.dumps(d, ensure_ascii=False))
                )
            continue
        try:
            sample = sample_from_dict(d)
        except (ValueError, TypeError, ZeroDivisionError) as exc:
            errors.append(RecordError(lineno, d.get("id"), "MalformedLine", str(exc)))
            continue
        if check:
            problems = validate_sample(sample)
            if problems:
                errors.append(
                    RecordError(lineno, sample.id, "InvariantViolation", "; ".join(problems))
                )
                continue
        samples.append(sample)
    return ReadResult(samples, errors)


def read_dataset(path, check: bool = True) -> ReadResult:
    with open(path, encoding="utf-8") as fh:
        return read_records(fh, check=check)


def header_line() -> str:
    return json.dumps({"schema": SCHEMA_NAME, "version": SCHEMA_VERSION})


def write_records(samples: Iterable[MwpSample], fh: IO[str], header: bool = True) -> None:
    if header:
        fh.write(header_line() + "\n")
    for sample in samples:
        fh.write(sample_to_json(sample) + "\n")


def write_dataset(samples: Iterable[MwpSample], path, header: bool = True) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        write_records(samples, fh, header=header)


def _copy(sample: MwpSample, **changes) -> MwpSample:
    base = replace(sample, numbers=list(sample.numbers), extra=dict(sample.extra))
    return replace(base, **changes) if changes else base


def make_delq(samples: list[MwpSample]) -> list[MwpSample]:
    """Question-removed copy: empty question, everything else untouched."""
    return [_copy(s, question="") for s in samples]


def allocate_by_ratio(total: int, ratios: list[Fraction]) -> list[int]:
    """Largest-remainder allocation of ``total`` into len(ratios) parts.

    Exact ratios give exact counts: 2907 split by (2507/2907, 200/2907,
    200/2907) is exactly (2507, 200, 200).
    """
    if not ratios or any(r < 0 for r in ratios):
        raise ValueError("ratios must be non-negative and non-empty")
    whole = sum(ratios)
    if whole == 0:
        raise ValueError("ratios must not all be zero")
    quotas = [Fraction(total) * r / whole for r in ratios]
    counts = [int(q) for q in quotas]
    leftover = total - sum(counts)
    by_remainder = sorted(range(len(ratios)), key=lambda i: (quotas[i] - counts[i], -i), reverse=True)
    for i in by_remainder[:leftover]:
        counts[i] += 1
    return counts


def split_by_source(
    samples: list[MwpSample], ratios: list[Fraction], seed: int
) -> list[MwpSample]:
    """Assign train/validation/test to source samples by seeded shuffle and to
    every variation sample by inheritance, so no context crosses splits.
    """
    source_ids = {s.id for s in samples if s.variation_kind == "source"}
    for s in samples:
        if s.variation_kind != "source" and s.parent_id not in source_ids:
            raise DanglingParentError(s.id, s.parent_id)

    sources = [s.id for s in samples if s.variation_kind == "source"]
    rng = random.Random(seed)
    shuffled = list(sources)
    rng.shuffle(shuffled)
    counts = allocate_by_ratio(len(shuffled), list(ratios))
    assignment: dict[str, str] = {}
    start = 0
    for split_name, count in zip(SPLITS, counts):
        for sid in shuffled[start : start + count]:
            assignment[sid] = split_name
        start += count

    out = []
    for s in samples:
        key = s.id if s.variation_kind == "source" else s.parent_id
        out.append(_copy(s, split=assignment[key]))
    return out


@dataclass
class StatsReport:
    total: int
    length_histogram: dict[str, int]
    kind_counts: dict[str, int]
    kind_total: int
    overlap: int
    distinct_total: int
    split_counts: dict[str, int]
    unparsed: int

    def to_dict(self) -> dict:
        return {
            "total": self.total,
            "prefix_length_histogram": self.length_histogram,
            "kind_counts": self.kind_counts,
            "kind_total": self.kind_total,
            "overlap": self.overlap,
            "distinct_total": self.distinct_total,
            "split_counts": self.split_counts,
            "unparsed": self.unparsed,
        }


def stats(samples: list[MwpSample]) -> StatsReport:
    """Prefix-length histogram, per-kind counts with overlap, per-split counts."""
    histogram = {bucket: 0 for bucket in LENGTH_BUCKETS}
    kind_counts = {kind: 0 for kind in VARIATION_KINDS}
    split_counts: dict[str, int] = {}
    distinct: set[tuple[str, str, str]] = set()
    unparsed = 0
    overlap = 0
    for s in samples:
        try:
            tree = parse_str(s.expression_infix, "infix")
        except ExpressionError:
            unparsed += 1
            canonical = s.expression_infix
        else:
            prefix = serialize_prefix(tree)
            canonical = tokens_to_str(prefix)
            length = len(prefix)
            if length > 11:
                histogram[">11"] += 1
            elif str(length) in histogram:
                histogram[str(length)] += 1
            else:
                # Bare-leaf expressions (length 1) fall outside the buckets.
                histogram[str(length)] = histogram.get(str(length), 0) + 1
        kinds = s.kinds()
        overlap += len(kinds) - 1
        for kind in kinds:
            kind_counts[kind] = kind_counts.get(kind, 0) + 1
        split_counts[s.split or "unassigned"] = split_counts.get(s.split or "unassigned", 0) + 1
        distinct.add((s.context, s.question, canonical))
    return StatsReport(
        total=len(samples),
        length_histogram=histogram,
        kind_counts=kind_counts,
        kind_total=sum(kind_counts.values()),
        overlap=overlap,
        distinct_total=len(distinct),
        split_counts=split_counts,
        unparsed=unparsed,
    )
