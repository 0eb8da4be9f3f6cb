"""Command line front end: batch transforms, stats sweeps, windows,
analysis dumps, and the service launcher.

Exit codes: 0 success, 1 runtime failure, 2 usage or validation error.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys

from . import analysis
from .core import Transform, build_transform
from .errors import BwtxError
from .matrix import DEFAULT_WINDOW_COLS, DEFAULT_WINDOW_ROWS, WindowSpec, window
from .ordering import PRESETS, AlphabetOrdering, escape_byte, parse_ordering, preset_ordering
from .service import DEFAULT_PORT
from .session import (
    Session,
    SessionTransform,
    load_session_file,
    save_session_file,
)
from .text import TextBuffer


def escape_bytes(data) -> str:
    return "".join(escape_byte(b) for b in bytes(data))


def _read_input(value: str | None, session: Session | None) -> bytes:
    """Input is a path if one exists, '-' for stdin, else literal text."""
    if value is None:
        if session is not None:
            return session.text.data
        raise BwtxError("no input: give a file, '-', a literal, or --session")
    if value == "-":
        return sys.stdin.buffer.read()
    if os.path.exists(value):
        with open(value, "rb") as fh:
            return fh.read()
    return value.encode("utf-8")


def _orderings_for(args, text: TextBuffer) -> list[AlphabetOrdering]:
    specs: list[AlphabetOrdering] = []
    for preset in args.preset or []:
        specs.append(preset_ordering(preset, text))
    for raw in args.ordering or []:
        specs.append(parse_ordering(raw, text))
    if not specs:
        specs.append(preset_ordering("ascii", text))
    return specs


_WINDOW_RE = re.compile(r"^(\d+)x(\d+)(?:@(\d+),(\d+))?$")


def parse_window(raw: str) -> WindowSpec:
    m = _WINDOW_RE.match(raw)
    if not m:
        raise BwtxError(f"window must look like 16x8@0,0, got {raw!r}")
    h, w, top, left = (int(g) if g else 0 for g in m.groups())
    return WindowSpec(top_row=top, left_col=left, height=h, width=w)


def _transform_report(t: Transform) -> dict:
    return {
        "ordering": t.ordering.spec_string(),
        "end_marker": t.text.end_marker,
        "end_marker_display": escape_byte(t.text.end_marker),
        "original_size": t.stats.original_size,
        "run_count": t.stats.run_count,
        "rle_length": t.stats.rle_length,
        "last_column": escape_bytes(t.last_column),
    }


def _maybe_save_session(args, text: TextBuffer, built: list[tuple[AlphabetOrdering, Transform]]) -> None:
    if not getattr(args, "session", None):
        return
    if os.path.exists(args.session):
        session = load_session_file(args.session)
        if session.text.data != text.data:
            raise BwtxError(f"session {args.session} holds a different text")
    else:
        session = Session(text=text)
    taken = {st.id for st in session.transforms}
    n = len(taken) + 1
    for ordering, t in built:
        while f"t{n}" in taken:
            n += 1
        st = SessionTransform(
            id=f"t{n}", name=ordering.name, ordering=ordering, transform=t
        )
        session.transforms.append(st)
        taken.add(st.id)
    save_session_file(session, args.session, cache=bool(getattr(args, "cache", False)))


def _load_session_arg(args) -> Session | None:
    path = getattr(args, "session", None)
    if path and os.path.exists(path):
        return load_session_file(path)
    return None


def cmd_transform(args) -> int:
    session = _load_session_arg(args)
    text = TextBuffer.load(_read_input(args.input, session))
    ordering = _orderings_for(args, text)[0]
    t = build_transform(text, ordering)
    report = _transform_report(t)
    if args.format == "json":
        print(json.dumps(report, indent=2))
    else:
        print(f"end marker: {report['end_marker_display']}")
        print(f"size:       {report['original_size']}")
        print(f"runs:       {report['run_count']}")
        print(f"rle bytes:  {report['rle_length']}")
        print(f"L: {report['last_column']}")
    _maybe_save_session(args, text, [(ordering, t)])
    return 0


def cmd_stats(args) -> int:
    session = _load_session_arg(args)
    text = TextBuffer.load(_read_input(args.input, session))
    orderings = _orderings_for(args, text)
    rows = []
    built = []
    for ordering in orderings:
        t = build_transform(text, ordering)
        built.append((ordering, t))
        label = ordering.name if ordering.name in PRESETS else ordering.spec_string()
        rows.append((label, t.stats.run_count, t.stats.rle_length))
    if args.format == "json":
        print(json.dumps(
            [{"ordering": o, "run_count": r, "rle_length": e} for o, r, e in rows],
            indent=2,
        ))
    else:
        print("ordering,run_count,rle_length")
        for label, r, e in rows:
            quoted = '"%s"' % label.replace('"', '""') if "," in label or '"' in label else label
            print(f"{quoted},{r},{e}")
    _maybe_save_session(args, text, built)
    return 0


def cmd_window(args) -> int:
    session = _load_session_arg(args)
    text = TextBuffer.load(_read_input(args.input, session))
    ordering = _orderings_for(args, text)[0]
    t = build_transform(text, ordering)
    spec = parse_window(args.window) if args.window else WindowSpec(
        height=DEFAULT_WINDOW_ROWS, width=DEFAULT_WINDOW_COLS
    )
    grid = window(t, spec)
    if args.format == "json":
        print(json.dumps({
            "top_row": grid.top_row,
            "left_col": grid.left_col,
            "height": grid.height,
            "width": grid.width,
            "rows": [escape_bytes(grid.row_bytes(i)) for i in range(grid.height)],
            "l_column": escape_bytes(grid.l_slice),
        }, indent=2))
    else:
        digits = len(str(grid.top_row + grid.height - 1))
        for i in range(grid.height):
            row_no = grid.top_row + i
            cells = escape_bytes(grid.row_bytes(i))
            tail = "" if grid.left_col + grid.width >= t.m else " ..."
            lbyte = escape_byte(grid.l_slice[i])
            print(f"{row_no:>{digits}}  {cells}{tail}  |{lbyte}")
    _maybe_save_session(args, text, [(ordering, t)])
    return 0


def cmd_analyze(args) -> int:
    session = _load_session_arg(args)
    text = TextBuffer.load(_read_input(args.input, session))
    ordering = _orderings_for(args, text)[0]
    t = build_transform(text, ordering)
    if args.kind == "run_breakers":
        payload = [b.as_dict() for b in analysis.run_breakers(t)]
    elif args.kind == "potential_runs":
        payload = [g.as_dict() for g in analysis.potential_runs(t, max_gap=args.max_gap)]
    elif args.kind == "sections":
        payload = [s.as_dict() for s in analysis.sections(t)]
    else:
        payload = [
            {
                "section": sec.as_dict(),
                "pairs": [p.as_dict() for p in analysis.distinguishing_pairs(t, sec)],
            }
            for sec in analysis.sections(t)
        ]
    print(json.dumps({"kind": args.kind, "items": payload}, indent=2))
    _maybe_save_session(args, text, [(ordering, t)])
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    port = args.port if args.port is not None else int(
        os.environ.get("BWTX_PORT", DEFAULT_PORT)
    )
    config = uvicorn.Config(create_app(), host=args.host, port=port, log_level="info")
    server = uvicorn.Server(config)
    server.run()
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bwtx",
        description="Build and explore Burrows-Wheeler transforms under "
        "arbitrary alphabet orderings.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, with_input=True):
        if with_input:
            p.add_argument("input", nargs="?",
                           help="input file, '-' for stdin, or literal text")
        p.add_argument("--ordering", action="append", metavar="SPEC",
                       help="comma separated characters, least first (repeatable)")
        p.add_argument("--preset", action="append", choices=PRESETS,
                       help="named preset ordering (repeatable)")
        p.add_argument("--session", metavar="PATH",
                       help=".bwtx file to read text from and append results to")
        p.add_argument("--cache", action="store_true",
                       help="embed L columns when writing the session")

    p_t = sub.add_parser("transform", help="print L and run statistics")
    add_common(p_t)
    p_t.add_argument("--format", choices=("text", "json"), default="text")
    p_t.set_defaults(fn=cmd_transform)

    p_s = sub.add_parser("stats", help="compare run counts across orderings")
    add_common(p_s)
    p_s.add_argument("--format", choices=("csv", "json"), default="csv")
    p_s.set_defaults(fn=cmd_stats)

    p_w = sub.add_parser("window", help="print a window of the rotation matrix")
    add_common(p_w)
    p_w.add_argument("--window", metavar="RxC@row,col",
                     help="height x width at top,left (default 64x64@0,0)")
    p_w.add_argument("--format", choices=("text", "json"), default="text")
    p_w.set_defaults(fn=cmd_window)

    p_a = sub.add_parser("analyze", help="dump run-minimization analysis as JSON")
    add_common(p_a)
    p_a.add_argument("--kind", choices=("run_breakers", "potential_runs",
                                        "sections", "pairs"),
                     default="run_breakers")
    p_a.add_argument("--max-gap", type=int, default=analysis.DEFAULT_MAX_GAP)
    p_a.set_defaults(fn=cmd_analyze)

    p_srv = sub.add_parser("serve", help="run the HTTP service")
    p_srv.add_argument("--host", default="127.0.0.1")
    p_srv.add_argument("--port", type=int, default=None,
                       help=f"default $BWTX_PORT or {DEFAULT_PORT}")
    p_srv.set_defaults(fn=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except BwtxError as exc:
        print(f"error[{exc.code}]: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
