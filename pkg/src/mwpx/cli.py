"""Command-line interface: every operation as a subcommand over line streams.

Conventions shared by all subcommands:

* input from --input or stdin, output to --output or stdout, UTF-8, LF;
* diagnostics are single-line JSON records on stderr;
* exit 0 on success, 1 when --strict and any record-level error occurred,
  2 on usage errors;
* fixed seed and fixed input give byte-identical output.

``dts --stream`` flushes after every line so a training process in any
language can drive target selection over a pipe.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from functools import partial
from typing import IO, Callable, Iterable, Iterator

from . import __version__
from .dataset import (
    MwpSample,
    header_line,
    make_delq,
    read_records,
    sample_to_json,
    split_by_source,
    stats,
    write_records,
)
from .dts import DtsQuery, dts_select, lex_model_output
from .equivalence import enumerate_equivalents
from .expressions import (
    ExpressionError,
    Operator,
    evaluate,
    parse_infix,
    parse_str,
    to_str,
    tokenize,
    tokens_to_str,
)
from .number_mapping import map_expression, map_problem, split_context_question
from .variations import (
    FilterPolicy,
    KIND_SUB,
    KIND_VA,
    KIND_WHOLE,
    TooFewVariablesError,
    filter_candidates,
    gen_sub,
    gen_va,
    gen_whole,
)

_FILTER_TOKENS = ("nonzero", "nonnegative", "dedup-value", "original-value")

LineOutcome = tuple[str | None, dict | None]  # (output line, diagnostic)


def _diag(err: IO[str], **fields) -> None:
    err.write(json.dumps(fields, ensure_ascii=False) + "\n")


def _input_lines(args, stdin: IO[str]) -> Iterator[str]:
    if args.input and args.input != "-":
        with open(args.input, encoding="utf-8") as fh:
            yield from fh
    else:
        yield from stdin


def _open_output(args, stdout: IO[str]) -> IO[str]:
    if args.output and args.output != "-":
        return open(args.output, "w", encoding="utf-8", newline="\n")
    return stdout


def _close_output(args, fh: IO[str]) -> None:
    if args.output and args.output != "-":
        fh.close()


def _map_lines(
    fn: Callable[[str], LineOutcome], lines: Iterable[str], jobs: int
) -> Iterator[LineOutcome]:
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            yield from pool.map(fn, lines, chunksize=64)
    else:
        for line in lines:
            yield fn(line)


def _equiv_line(line: str, notation: str, mode: str, dedup: bool) -> LineOutcome:
    text = line.strip()
    if not text:
        return None, None
    try:
        tree = parse_str(text, notation)
        members = enumerate_equivalents(tree, mode, dedup=dedup)
        rendered = "\t".join(to_str(t, notation) for t in members.items)
        return rendered, None
    except (ExpressionError, ValueError) as exc:
        return None, {"error": type(exc).__name__, "detail": str(exc)}


def _dts_line(line: str, notation: str, mode: str) -> LineOutcome:
    text = line.rstrip("\n")
    if not text.strip():
        return None, None
    gold_text, _, output_text = text.partition("\t")
    try:
        gold = parse_str(gold_text, "infix")
    except ExpressionError as exc:
        return None, {"error": type(exc).__name__, "detail": str(exc)}
    query = DtsQuery(gold, lex_model_output(output_text), notation=notation, mode=mode)
    result = dts_select(query)
    return (
        f"{tokens_to_str(result.target)}\t{result.match_len}\t{result.candidate_index}",
        None,
    )


def _run_line_command(
    fn: Callable[[str], LineOutcome], args, stdin: IO[str], stdout: IO[str], stderr: IO[str]
) -> int:
    out = _open_output(args, stdout)
    errors = 0
    try:
        for lineno, (line, diag) in enumerate(
            _map_lines(fn, _input_lines(args, stdin), args.jobs), start=1
        ):
            if diag is not None:
                errors += 1
                _diag(stderr, line=lineno, **diag)
            if line is not None:
                out.write(line + "\n")
    finally:
        _close_output(args, out)
    return 1 if errors and args.strict else 0


def cmd_equiv(args, stdin, stdout, stderr) -> int:
    fn = partial(_equiv_line, notation=args.notation, mode=args.mode, dedup=args.dedup)
    return _run_line_command(fn, args, stdin, stdout, stderr)


def cmd_dts(args, stdin, stdout, stderr) -> int:
    mode = "algo1" if args.algo1 else args.mode
    fn = partial(_dts_line, notation=args.notation, mode=mode)
    if not args.stream:
        return _run_line_command(fn, args, stdin, stdout, stderr)
    out = _open_output(args, stdout)
    errors = 0
    try:
        for lineno, raw in enumerate(_input_lines(args, stdin), start=1):
            line, diag = fn(raw)
            if diag is not None:
                errors += 1
                _diag(stderr, line=lineno, **diag)
                stderr.flush()
            if line is not None:
                out.write(line + "\n")
                out.flush()
    finally:
        _close_output(args, out)
    return 1 if errors and args.strict else 0


def _map_record(d: dict, lineno: int, split_question: bool) -> tuple[MwpSample | None, list[dict]]:
    diags: list[dict] = []
    if "expression" not in d:
        return None, [{"line": lineno, "error": "MalformedLine", "detail": "missing expression"}]
    if "context" in d or "question" in d:
        context, question = d.get("context", ""), d.get("question", "")
    else:
        text = d.get("text", "")
        context, question = split_context_question(text) if split_question else (text, "")
    sample_id = str(d.get("id", lineno))

    mapped_context, mapped_question, problem = map_problem(context, question)
    try:
        raw_tokens = tokenize(str(d["expression"]))
        mapped_tokens = map_expression(raw_tokens, problem)
        tree = parse_infix(mapped_tokens)
    except ExpressionError as exc:
        return None, [{"line": lineno, "id": sample_id, "error": type(exc).__name__, "detail": str(exc)}]

    bindings = {b.symbol: b.value for b in problem.bindings}
    try:
        answer = evaluate(tree, bindings)
    except ExpressionError as exc:
        answer = None
        diags.append({"line": lineno, "id": sample_id, "error": type(exc).__name__, "detail": str(exc)})

    extra = {}
    if problem.unmapped_constants:
        extra["unmapped_constants"] = [str(v) for v in problem.unmapped_constants]
    sample = MwpSample(
        id=sample_id,
        context=mapped_context,
        question=mapped_question,
        expression_infix=to_str(tree),
        numbers=[b.value for b in problem.bindings],
        answer=answer,
        variation_kind="source",
        extra=extra,
    )
    return sample, diags


def cmd_map(args, stdin, stdout, stderr) -> int:
    out = _open_output(args, stdout)
    errors = 0
    try:
        out.write(header_line() + "\n")
        for lineno, raw in enumerate(_input_lines(args, stdin), start=1):
            text = raw.strip()
            if not text:
                continue
            try:
                d = json.loads(text)
            except json.JSONDecodeError as exc:
                errors += 1
                _diag(stderr, line=lineno, error="MalformedLine", detail=str(exc))
                continue
            if isinstance(d, dict) and "schema" in d and "expression" not in d:
                continue
            sample, diags = _map_record(d, lineno, args.split_question)
            for item in diags:
                _diag(stderr, **item)
            if sample is None:
                errors += 1
                continue
            out.write(sample_to_json(sample) + "\n")
    finally:
        _close_output(args, out)
    return 1 if errors and args.strict else 0


def _build_policy(tokens: list[str], sample: MwpSample) -> FilterPolicy:
    original_value = None
    if "original-value" in tokens:
        original_value = sample.answer
        if original_value is None:
            try:
                tree = parse_str(sample.expression_infix, "infix")
                original_value = evaluate(tree, dict(enumerate(sample.numbers)))
            except ExpressionError:
                original_value = None
    return FilterPolicy(
        nonzero="nonzero" in tokens,
        nonnegative="nonnegative" in tokens,
        dedup_value="dedup-value" in tokens,
        original_value=original_value,
    )


def _variate_sample(
    sample: MwpSample, kinds: list[str], filter_tokens: list[str], stderr: IO[str]
) -> list[MwpSample]:
    original = parse_str(sample.expression_infix, "infix")
    original_key = to_str(original, "prefix")
    candidates = []
    if KIND_VA in kinds:
        try:
            candidates.extend(gen_va(list(range(len(sample.numbers))), sample.id))
        except TooFewVariablesError as exc:
            _diag(stderr, id=sample.id, event="skipped_va", detail=str(exc))
    if KIND_SUB in kinds:
        candidates.extend(gen_sub(original, sample.id))
    if KIND_WHOLE in kinds:
        try:
            candidates.extend(gen_whole(original, sample.id))
        except ValueError as exc:
            _diag(stderr, id=sample.id, event="skipped_whole", detail=str(exc))

    # One record per distinct expression; extra kinds become overlap metadata.
    by_key: dict[str, dict] = {}
    ordered: list[str] = []
    for cand in candidates:
        key = to_str(cand.expr, "prefix")
        if key == original_key:
            continue
        if key in by_key:
            entry = by_key[key]
            if cand.kind not in entry["kinds"]:
                entry["kinds"].append(cand.kind)
            continue
        by_key[key] = {"candidate": cand, "kinds": [cand.kind]}
        ordered.append(key)

    deduped = [by_key[k]["candidate"] for k in ordered]
    policy = _build_policy(filter_tokens, sample)
    result = filter_candidates(deduped, dict(enumerate(sample.numbers)), policy)
    for removal in result.removed:
        _diag(
            stderr,
            id=sample.id,
            event="filtered",
            reason=removal.reason,
            expression=to_str(removal.candidate.expr),
        )

    records = []
    counters: dict[str, int] = {}
    kept_keys = {to_str(c.expr, "prefix") for c in result.kept}
    for key in ordered:
        if key not in kept_keys:
            continue
        entry = by_key[key]
        cand = entry["candidate"]
        n = counters.get(cand.kind, 0)
        counters[cand.kind] = n + 1
        bindings = dict(enumerate(sample.numbers))
        try:
            answer = evaluate(cand.expr, bindings)
        except ExpressionError:
            answer = None
        extra = {"provenance": cand.provenance}
        if len(entry["kinds"]) > 1:
            extra["variation_kinds"] = list(entry["kinds"])
        records.append(
            MwpSample(
                id=f"{sample.id}.{cand.kind}{n}",
                context=sample.context,
                question="",
                expression_infix=to_str(cand.expr),
                numbers=list(sample.numbers),
                answer=answer,
                variation_kind=cand.kind,
                parent_id=sample.id,
                split=sample.split,
                extra=extra,
            )
        )
    return records


def cmd_variate(args, stdin, stdout, stderr) -> int:
    kinds = [k.strip() for k in args.kinds.split(",") if k.strip()]
    unknown = [k for k in kinds if k not in (KIND_VA, KIND_SUB, KIND_WHOLE)]
    if unknown:
        raise SystemExit(2)
    filter_tokens = [t.strip() for t in args.filter.split(",") if t.strip()] if args.filter else []
    bad = [t for t in filter_tokens if t not in _FILTER_TOKENS]
    if bad:
        raise SystemExit(2)

    result = read_records(_input_lines(args, stdin), check=True)
    for err in result.errors:
        _diag(stderr, line=err.line, id=err.sample_id, error=err.error, detail=err.detail)
    out = _open_output(args, stdout)
    try:
        out.write(header_line() + "\n")
        for sample in result.samples:
            if sample.variation_kind != "source":
                _diag(stderr, id=sample.id, event="skipped_non_source")
                continue
            if args.sources:
                out.write(sample_to_json(sample) + "\n")
            for record in _variate_sample(sample, kinds, filter_tokens, stderr):
                out.write(sample_to_json(record) + "\n")
    finally:
        _close_output(args, out)
    return 1 if result.errors and args.strict else 0


def cmd_stats(args, stdin, stdout, stderr) -> int:
    result = read_records(_input_lines(args, stdin), check=False)
    for err in result.errors:
        _diag(stderr, line=err.line, id=err.sample_id, error=err.error, detail=err.detail)
    report = stats(result.samples)
    out = _open_output(args, stdout)
    try:
        out.write(json.dumps(report.to_dict(), ensure_ascii=False, indent=2) + "\n")
    finally:
        _close_output(args, out)
    return 1 if result.errors and args.strict else 0


def cmd_delq(args, stdin, stdout, stderr) -> int:
    result = read_records(_input_lines(args, stdin), check=False)
    for err in result.errors:
        _diag(stderr, line=err.line, id=err.sample_id, error=err.error, detail=err.detail)
    out = _open_output(args, stdout)
    try:
        write_records(make_delq(result.samples), out)
    finally:
        _close_output(args, out)
    return 1 if result.errors and args.strict else 0


def cmd_split(args, stdin, stdout, stderr) -> int:
    try:
        ratios = [Fraction(part) for part in args.ratios.split(",")]
    except (ValueError, ZeroDivisionError):
        raise SystemExit(2)
    result = read_records(_input_lines(args, stdin), check=False)
    errors = len(result.errors)
    for err in result.errors:
        _diag(stderr, line=err.line, id=err.sample_id, error=err.error, detail=err.detail)

    source_ids = {s.id for s in result.samples if s.variation_kind == "source"}
    usable = []
    for s in result.samples:
        if s.variation_kind != "source" and s.parent_id not in source_ids:
            errors += 1
            _diag(stderr, id=s.id, error="DanglingParent", detail=str(s.parent_id))
            continue
        usable.append(s)

    out = _open_output(args, stdout)
    try:
        write_records(split_by_source(usable, ratios, args.seed), out)
    finally:
        _close_output(args, out)
    return 1 if errors and args.strict else 0


_AUTHOR_KEYS = {
    "id": ("id", "ID", "sample_id", "index"),
    "text": ("original_text", "text", "segmented_text", "sQuestion", "Problem", "problem"),
    "context": ("context",),
    "question": ("question",),
    "expression": ("expression", "expression_infix", "equation", "target_equation", "output"),
    "numbers": ("numbers", "nums", "num_list"),
    "answer": ("answer", "ans"),
    "kind": ("variation_kind", "kind", "type"),
    "parent": ("parent_id", "parent", "source_id", "ori_id"),
}

_KIND_ALIASES = {
    "source": "source", "src": "source", "ori": "source", "original": "source",
    "va": "va", "variable assortment": "va",
    "sub": "sub", "sub-expression": "sub", "subexpression": "sub",
    "whole": "whole", "whole expression": "whole", "whole-expression": "whole",
    "manual": "manual", "new": "manual",
}


def _pick(d: dict, field: str):
    for key in _AUTHOR_KEYS[field]:
        if key in d:
            return d[key]
    return None


def _import_expression(value) -> str:
    if isinstance(value, list):
        value = " ".join(str(v) for v in value)
    text = str(value).strip()
    if text.startswith("x=") or text.startswith("X="):
        text = text[2:]
    tokens = tokenize(text)
    first_is_op = bool(tokens) and isinstance(tokens[0], Operator)
    notation = "prefix" if first_is_op and len(tokens) > 1 else "infix"
    return to_str(parse_str(text, notation))


def _import_record(d: dict, lineno: int) -> MwpSample:
    expr = _pick(d, "expression")
    if expr is None:
        raise ValueError("no expression field recognized")
    context = _pick(d, "context")
    question = _pick(d, "question")
    if context is None and question is None:
        text = _pick(d, "text")
        if text is None:
            raise ValueError("no text/context field recognized")
        context, question = split_context_question(str(text))
    numbers_raw = _pick(d, "numbers")
    if numbers_raw is None:
        numbers = []
    elif isinstance(numbers_raw, str):
        numbers = [Fraction(v) for v in numbers_raw.split()]
    else:
        numbers = [Fraction(str(v)) for v in numbers_raw]
    answer_raw = _pick(d, "answer")
    answer = None
    if answer_raw is not None:
        try:
            answer = Fraction(str(answer_raw))
        except (ValueError, ZeroDivisionError):
            answer = None
    kind_raw = _pick(d, "kind")
    kind = _KIND_ALIASES.get(str(kind_raw).strip().lower(), "source") if kind_raw else "source"
    parent = _pick(d, "parent")
    ident = _pick(d, "id")
    return MwpSample(
        id=str(ident) if ident is not None else str(lineno),
        context=str(context or ""),
        question=str(question or ""),
        expression_infix=_import_expression(expr),
        numbers=numbers,
        answer=answer,
        variation_kind=kind,
        parent_id=str(parent) if parent is not None else None,
    )


def cmd_import(args, stdin, stdout, stderr) -> int:
    if args.format != "authors":
        raise SystemExit(2)
    payload = "".join(_input_lines(args, stdin))
    stripped = payload.lstrip()
    if stripped.startswith("["):
        records = [(i + 1, d) for i, d in enumerate(json.loads(payload))]
    else:
        records = []
        for lineno, line in enumerate(payload.splitlines(), start=1):
            if line.strip():
                records.append((lineno, json.loads(line)))
    errors = 0
    out = _open_output(args, stdout)
    try:
        out.write(header_line() + "\n")
        for lineno, d in records:
            try:
                sample = _import_record(d, lineno)
            except (ValueError, ExpressionError) as exc:
                errors += 1
                _diag(stderr, line=lineno, error=type(exc).__name__, detail=str(exc))
                continue
            out.write(sample_to_json(sample) + "\n")
    finally:
        _close_output(args, out)
    return 1 if errors and args.strict else 0


def _add_io_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--input", "-i", default="-", help="input path, default stdin")
    parser.add_argument("--output", "-o", default="-", help="output path, default stdout")
    parser.add_argument("--strict", action="store_true", help="exit 1 on any record-level error")
    parser.add_argument("--jobs", type=int, default=1,
                        help="parallel line workers (used by equiv and dts; output stays in input order)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mwpx", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"mwpx {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("equiv", help="enumerate equivalent expressions, one input per line")
    _add_io_flags(p)
    p.add_argument("--notation", choices=("infix", "prefix"), default="infix")
    p.add_argument("--mode", choices=("algo1", "closure"), default="algo1")
    p.add_argument("--dedup", action=argparse.BooleanOptionalAction, default=True)
    p.set_defaults(fn=cmd_equiv)

    p = sub.add_parser("dts", help="select longest-prefix training targets")
    _add_io_flags(p)
    p.add_argument("--notation", choices=("infix", "prefix"), default="prefix")
    p.add_argument("--mode", choices=("algo1", "closure"), default="closure")
    p.add_argument("--algo1", action="store_true", help="shorthand for --mode algo1")
    p.add_argument("--stream", action="store_true", help="flush after every line")
    p.set_defaults(fn=cmd_dts)

    p = sub.add_parser("map", help="number-map raw problem records")
    _add_io_flags(p)
    p.add_argument("--split-question", action="store_true",
                   help="derive context/question by the last-sentence heuristic")
    p.set_defaults(fn=cmd_map)

    p = sub.add_parser("variate", help="generate variation candidates from source records")
    _add_io_flags(p)
    p.add_argument("--kinds", default="va,sub,whole")
    p.add_argument("--filter", default="", help=f"any of: {','.join(_FILTER_TOKENS)}")
    p.add_argument("--sources", action=argparse.BooleanOptionalAction, default=True,
                   help="re-emit source records before their candidates")
    p.set_defaults(fn=cmd_variate)

    p = sub.add_parser("stats", help="dataset statistics report")
    _add_io_flags(p)
    p.set_defaults(fn=cmd_stats)

    p = sub.add_parser("delq", help="copy records with questions removed")
    _add_io_flags(p)
    p.set_defaults(fn=cmd_delq)

    p = sub.add_parser("split", help="assign train/validation/test by source")
    _add_io_flags(p)
    p.add_argument("--ratios", default="0.86,0.07,0.07",
                   help="comma-separated ratios, fractions allowed (e.g. 2507/2907,200/2907,200/2907)")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(fn=cmd_split)

    p = sub.add_parser("import", help="convert foreign records to this schema")
    _add_io_flags(p)
    p.add_argument("--format", choices=("authors",), required=True)
    p.set_defaults(fn=cmd_import)

    return parser


def main(
    argv: list[str] | None = None,
    stdin: IO[str] | None = None,
    stdout: IO[str] | None = None,
    stderr: IO[str] | None = None,
) -> int:
    stdin = stdin if stdin is not None else sys.stdin
    stdout = stdout if stdout is not None else sys.stdout
    stderr = stderr if stderr is not None else sys.stderr
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.fn(args, stdin, stdout, stderr)


if __name__ == "__main__":
    raise SystemExit(main())
