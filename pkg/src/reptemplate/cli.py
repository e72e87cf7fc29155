"""Command-line interface.

Exit codes: 0 success, 1 no parse / template rejected, 2 invalid input.
"""
from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path

from . import core, oracle
from .analysis import (CountDivergence, check_template, enumerate_minimal,
                       extract_minimal, size_distribution)
from .engine import (EngineConfig, NoParse, SearchBoundError, best_first_chart,
                     forward_chain)
from .grammar import GrammarError, builtin_grammar, builtin_names, builtin_sequence
from .render import to_dot, to_text
from .serialize import (FormatError, grammar_to_dict, load_grammar, template_from_json,
                        template_to_json)

OK, NO_PARSE, INVALID = 0, 1, 2


class UsageError(Exception):
    pass


def _load(source: str, start: str | None):
    """Grammar from a bundle name (``jazz``, ``builtin:coffee``) or a JSON file."""
    name = source.split(":", 1)[1] if source.startswith("builtin:") else source
    if name in builtin_names() and not Path(source).exists():
        g = builtin_grammar(name)
        default_seq = builtin_sequence(name)
    else:
        path = Path(source)
        if not path.is_file():
            raise UsageError(f"no such grammar file or bundle: {source}")
        try:
            g = load_grammar(path)
        except (FormatError, OSError, UnicodeDecodeError) as exc:
            raise UsageError(str(exc)) from None
        default_seq = None
    if start is not None:
        g = dataclasses.replace(g, start=start)
    try:
        g.check()
    except GrammarError as exc:
        raise UsageError("invalid grammar:\n  " + "\n  ".join(exc.violations)) from None
    return g, default_seq


def _sequence(args, default):
    if args.seq_file is not None:
        if args.tokens:
            raise UsageError("give the sequence either as tokens or with --seq-file")
        try:
            text = Path(args.seq_file).read_text(encoding="utf-8")
        except (OSError, UnicodeDecodeError) as exc:
            raise UsageError(f"cannot read sequence file: {exc}") from None
        seq = tuple(line.strip() for line in text.splitlines() if line.strip())
    elif args.tokens:
        seq = tuple(t for tok in args.tokens for t in tok.split())
    elif default is not None:
        seq = tuple(default)
    else:
        raise UsageError("no sequence given")
    if not seq:
        raise UsageError("empty sequence")
    return seq


def _check_tokens(g, seq):
    unknown = sorted({t for t in seq if t not in g.terminals})
    if unknown:
        raise UsageError(f"tokens not in the grammar's terminals: {' '.join(unknown)}")


def _config(args, seq):
    holes = len(seq) if args.max_holes == 0 else args.max_holes
    if holes < 0:
        raise UsageError("--max-holes must be >= 0")
    return EngineConfig(max_holes=holes, max_tree_size=args.max_tree_size)


def _chart(g, seq, args, exhaustive):
    cfg = _config(args, seq)
    return forward_chain(g, seq, cfg) if exhaustive else best_first_chart(g, seq, cfg)


def _emit(text, out):
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


# -- subcommands ---------------------------------------------------------------

def cmd_parse(args) -> int:
    g, default = _load(args.grammar, args.start)
    seq = _sequence(args, default)
    _check_tokens(g, seq)
    chart = _chart(g, seq, args, exhaustive=args.exhaustive)
    try:
        sub = extract_minimal(chart)
    except NoParse:
        print(f"no parse for: {' '.join(seq)}", file=sys.stderr)
        return NO_PARSE
    limit = args.limit if args.all_minimal else 1
    found = enumerate_minimal(sub, limit)
    if args.format == "json":
        doc = {
            "sequence": list(seq),
            "start": g.start,
            "minimal_size": sub.weight,
            "templates": [{"text": repr(e), "template": template_to_json(e),
                           "tree": repr(core.evaluate(e))} for e in found],
        }
        _emit(json.dumps(doc, ensure_ascii=False, indent=2) + "\n", args.output)
    elif args.format == "dot":
        _emit("".join(to_dot(e, seq, name=f"template {i}") for i, e in enumerate(found)),
              args.output)
    else:
        lines = [f"sequence: {' '.join(seq)}", f"minimal size: {sub.weight}"]
        for i, e in enumerate(found):
            lines.append(f"template {i}: {e!r}")
            lines.append(f"  combinators: {' '.join(core.format_comb(m) for m in core.combinators(e)) or '-'}")
            lines.append(f"  tree: {core.evaluate(e)!r}")
        _emit("\n".join(lines) + "\n", args.output)
    return OK


def cmd_histogram(args) -> int:
    g, default = _load(args.grammar, args.start)
    seq = _sequence(args, default)
    _check_tokens(g, seq)
    if args.best_first:
        raise UsageError("histogram needs the exhaustive closure")
    chart = _chart(g, seq, args, exhaustive=True)
    try:
        dist = size_distribution(chart)
    except CountDivergence as exc:
        print(f"count divergence: {exc}", file=sys.stderr)
        return INVALID
    rows = dist.rows()
    if args.format == "json":
        doc = {"sequence": list(seq), "rows": [[s, c] for s, c in rows], "total": dist.total}
        _emit(json.dumps(doc) + "\n", args.output)
    else:
        lines = ["size\tcount"] + [f"{s}\t{c}" for s, c in rows]
        lines.append(f"total\t{dist.total}")
        if args.chart and rows:
            lines.append("")
            lines.extend(_bars(rows, args.width))
        _emit("\n".join(lines) + "\n", args.output)
    return OK if rows else NO_PARSE


def _bars(rows, width):
    top = max(c for _, c in rows)
    pad = len(str(rows[-1][0]))
    out = []
    for s, c in rows:
        n = max(1, round(width * c / top))
        out.append(f"{s:>{pad}} | {'#' * n} {c}")
    return out


def cmd_check(args) -> int:
    g, default = _load(args.grammar, args.start)
    try:
        doc = json.loads(Path(args.template).read_text(encoding="utf-8"))
    except (OSError, UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read template file: {exc}") from None
    try:
        if isinstance(doc, dict) and "templates" in doc:
            # output of ``parse --format json``
            if not args.tokens and args.seq_file is None and "sequence" in doc:
                default = [str(t) for t in doc["sequence"]]
            raw = [t["template"] for t in doc["templates"]]
            if not raw:
                raise FormatError("template file holds no templates")
        else:
            raw = [doc]
        exprs = [template_from_json(x, g) for x in raw]
    except (FormatError, core.TemplateError, TypeError, KeyError) as exc:
        raise UsageError(f"malformed template: {exc}") from None
    seq = _sequence(args, default)
    status = OK
    for e in exprs:
        res = check_template(g, e, seq)
        if res:
            print(f"accept: {e!r}")
        else:
            print(f"reject: {res.reason}")
            status = NO_PARSE
    return status


def cmd_render(args) -> int:
    g, default = _load(args.grammar, args.start)
    seq = _sequence(args, default)
    _check_tokens(g, seq)
    chart = _chart(g, seq, args, exhaustive=args.exhaustive)
    try:
        e = enumerate_minimal(extract_minimal(chart), 1)[0]
    except NoParse:
        print(f"no parse for: {' '.join(seq)}", file=sys.stderr)
        return NO_PARSE
    if args.format == "dot":
        _emit(to_dot(e, seq), args.output)
    else:
        _emit(f"{e!r}\n" + to_text(e, seq), args.output)
    return OK


def cmd_oracle(args) -> int:
    g, default = _load(args.grammar, args.start)
    seq = _sequence(args, default)
    try:
        found = oracle.enumerate_all(g, seq, args.max_size)
    except oracle.OracleBoundError as exc:
        raise UsageError(str(exc)) from None
    if args.format == "json":
        doc = {"sequence": list(seq), "templates": [template_to_json(e) for e in found]}
        print(json.dumps(doc))
    else:
        for e in found:
            print(f"{core.size(e)}\t{e!r}")
    return OK if found else NO_PARSE


def cmd_export(args) -> int:
    g, _ = _load(args.grammar, args.start)
    _emit(json.dumps(grammar_to_dict(g), ensure_ascii=False, indent=1) + "\n", args.output)
    return OK


# -- argument parsing -------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="reptemplate",
        description="Infer minimal template programs (relation trees with repeats).")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, formats, search=True, tokens=True):
        sp.add_argument("grammar", help="grammar JSON file, or a bundle: "
                        + ", ".join(builtin_names()))
        if tokens:
            sp.add_argument("tokens", nargs="*", help="sequence tokens (default: the bundle's sequence)")
            sp.add_argument("--seq-file", help="one token per line")
        sp.add_argument("--start", help="override the start symbol")
        sp.add_argument("--format", choices=formats, default=formats[0])
        sp.add_argument("-o", "--output", help="write to this file instead of stdout")
        if search:
            sp.add_argument("--max-holes", type=int, default=3,
                            help="hole bound for partial trees; 0 means the sequence length")
            sp.add_argument("--max-tree-size", type=int, default=None,
                            help="node bound for partial trees; 0 disables (default 2n)")
            mode = sp.add_mutually_exclusive_group()
            mode.add_argument("--best-first", action="store_true")
            mode.add_argument("--exhaustive", action="store_true")

    sp = sub.add_parser("parse", help="minimal template(s) for a sequence")
    common(sp, ("text", "json", "dot"))
    sp.add_argument("--all-minimal", action="store_true", help="list several minimal templates")
    sp.add_argument("--limit", type=int, default=10)
    sp.set_defaults(func=cmd_parse)

    sp = sub.add_parser("histogram", help="number of templates per size")
    common(sp, ("text", "json"))
    sp.add_argument("--chart", action="store_true", help="append a text column chart")
    sp.add_argument("--width", type=int, default=50)
    sp.set_defaults(func=cmd_histogram)

    sp = sub.add_parser("check", help="verify a template file against a sequence")
    sp.add_argument("grammar")
    sp.add_argument("template", help="template JSON, or the JSON output of parse")
    sp.add_argument("tokens", nargs="*")
    sp.add_argument("--seq-file")
    sp.add_argument("--start")
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("render", help="graph of the minimal template and its tree")
    common(sp, ("dot", "text"))
    sp.set_defaults(func=cmd_render)

    sp = sub.add_parser("oracle", help="brute-force enumeration (testing aid, tiny inputs)")
    common(sp, ("text", "json"), search=False)
    sp.add_argument("--max-size", type=int, default=12)
    sp.set_defaults(func=cmd_oracle)

    sp = sub.add_parser("export-grammar", help="write a grammar as JSON")
    common(sp, ("json",), search=False, tokens=False)
    sp.set_defaults(func=cmd_export)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "limit", 1) < 1:
        print("error: --limit must be positive", file=sys.stderr)
        return INVALID
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return INVALID
    except SearchBoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return INVALID


if __name__ == "__main__":
    sys.exit(main())
