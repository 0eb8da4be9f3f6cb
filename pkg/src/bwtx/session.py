"""Save and restore exploration sessions as .bwtx files.

The container is a DEFLATE-compressed JSON document:

    {"version": 1, "text": <base64>, "end_marker": <int>,
     "window": {"rows": <int>, "cols": <int>},
     "transforms": [{"id": str, "name": str, "order": [int, ...],
                     "highlights": [int, ...], "cached_L": <base64>?}]}

Keys are sorted and separators fixed, so identical sessions serialize to
identical bytes. cached_L lets a loader skip the suffix sort entirely: the
LF walk rebuilds sa from L in linear time, and the result is verified
against the text before being trusted, falling back to a rebuild (with a
CacheInvalid warning) when anything is off.
"""

from __future__ import annotations

import base64
import binascii
import json
import warnings
import zlib
from dataclasses import dataclass, field

import numpy as np

from .core import Transform, build_transform, transform_from_last_column
from .errors import (
    BwtxError,
    CacheInvalid,
    CorruptFile,
    NotAValidTransform,
    VersionUnsupported,
    WriteFailure,
)
from .matrix import DEFAULT_WINDOW_COLS, DEFAULT_WINDOW_ROWS
from .ordering import AlphabetOrdering, ordering_from_bytes
from .text import TextBuffer

FORMAT_VERSION = 1
FILE_EXTENSION = ".bwtx"

CACHE_NONE = "none"
CACHE_L = "cache_L"


@dataclass
class SessionTransform:
    id: str
    name: str
    ordering: AlphabetOrdering
    highlights: list[int] = field(default_factory=list)
    transform: Transform | None = None

    def built(self, text: TextBuffer) -> Transform:
        if self.transform is None:
            self.transform = build_transform(text, self.ordering)
        return self.transform


@dataclass
class Session:
    text: TextBuffer
    transforms: list[SessionTransform] = field(default_factory=list)
    window_rows: int = DEFAULT_WINDOW_ROWS
    window_cols: int = DEFAULT_WINDOW_COLS
    cache_policy: str = CACHE_NONE

    def __post_init__(self):
        ids = [t.id for t in self.transforms]
        if len(set(ids)) != len(ids):
            raise ValueError("transform ids must be unique")


def save_session(s: Session, cache: bool = False) -> bytes:
    """Serialize to .bwtx bytes; cache embeds each transform's L column."""
    doc = {
        "version": FORMAT_VERSION,
        "text": base64.b64encode(s.text.data).decode("ascii"),
        "end_marker": s.text.end_marker,
        "window": {"rows": s.window_rows, "cols": s.window_cols},
        "transforms": [],
    }
    for st in s.transforms:
        entry = {
            "id": st.id,
            "name": st.name,
            "order": list(st.ordering.order),
            "highlights": sorted(int(r) for r in st.highlights),
        }
        if cache:
            built = st.built(s.text)
            entry["cached_L"] = base64.b64encode(built.last_column).decode("ascii")
        doc["transforms"].append(entry)
    payload = json.dumps(doc, sort_keys=True, separators=(",", ":")).encode("utf-8")
    return zlib.compress(payload, 6)


def save_session_file(s: Session, path: str, cache: bool = False) -> None:
    blob = save_session(s, cache=cache)
    try:
        with open(path, "wb") as fh:
            fh.write(blob)
    except OSError as exc:
        raise WriteFailure(f"cannot write {path}: {exc}") from exc


def _restore_cached(text: TextBuffer, ordering: AlphabetOrdering,
                    cached: bytes, tid: str) -> Transform:
    l_array = np.frombuffer(cached, dtype=np.uint8)
    try:
        return transform_from_last_column(text, ordering, l_array)
    except NotAValidTransform as exc:
        warnings.warn(
            f"cached transform {tid!r} rejected ({exc}); rebuilding",
            CacheInvalid,
        )
        return build_transform(text, ordering)


def load_session(stream: bytes) -> Session:
    """Parse a .bwtx byte stream and rebuild every transform.

    Cached L columns shortcut the suffix sort; absent or invalid caches
    trigger a normal build.
    """
    try:
        payload = zlib.decompress(stream)
    except zlib.error as exc:
        raise CorruptFile(f"not a DEFLATE stream: {exc}") from exc
    try:
        doc = json.loads(payload)
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise CorruptFile(f"not a JSON document: {exc}") from exc
    if not isinstance(doc, dict):
        raise CorruptFile("top level must be an object")
    version = doc.get("version")
    if version != FORMAT_VERSION:
        raise VersionUnsupported(f"unsupported container version {version!r}")

    try:
        data = base64.b64decode(doc["text"], validate=True)
        end_marker = int(doc["end_marker"])
        window = doc.get("window") or {}
        rows = int(window.get("rows", DEFAULT_WINDOW_ROWS))
        cols = int(window.get("cols", DEFAULT_WINDOW_COLS))
        entries = doc.get("transforms", [])
        if not isinstance(entries, list):
            raise TypeError("transforms must be a list")
    except (KeyError, TypeError, ValueError, binascii.Error) as exc:
        raise CorruptFile(f"malformed container field: {exc}") from exc

    try:
        text = TextBuffer(data=data, end_marker=end_marker)
    except (BwtxError, ValueError) as exc:
        raise CorruptFile(f"stored text is invalid: {exc}") from exc

    transforms: list[SessionTransform] = []
    any_cached = False
    for i, entry in enumerate(entries):
        try:
            tid = str(entry["id"])
            name = str(entry.get("name", tid))
            order = bytes(int(b) for b in entry["order"])
            highlights = [int(r) for r in entry.get("highlights", [])]
            cached_b64 = entry.get("cached_L")
        except (KeyError, TypeError, ValueError) as exc:
            raise CorruptFile(f"malformed transform entry {i}: {exc}") from exc
        try:
            ordering = ordering_from_bytes(order, text, name=name)
        except BwtxError as exc:
            raise CorruptFile(
                f"transform {tid!r} ordering does not fit the text: {exc}"
            ) from exc
        if any(not (0 <= r < text.m) for r in highlights):
            raise CorruptFile(f"transform {tid!r} highlights a row outside 0..{text.m - 1}")
        if cached_b64 is not None:
            try:
                cached = base64.b64decode(cached_b64, validate=True)
            except binascii.Error as exc:
                raise CorruptFile(f"transform {tid!r} cached_L is not base64: {exc}") from exc
            any_cached = True
            built = _restore_cached(text, ordering, cached, tid)
        else:
            built = build_transform(text, ordering)
        transforms.append(
            SessionTransform(
                id=tid, name=name, ordering=ordering,
                highlights=sorted(highlights), transform=built,
            )
        )

    session = Session(
        text=text,
        transforms=transforms,
        window_rows=rows,
        window_cols=cols,
        cache_policy=CACHE_L if any_cached else CACHE_NONE,
    )
    return session


def load_session_file(path: str) -> Session:
    try:
        with open(path, "rb") as fh:
            blob = fh.read()
    except OSError as exc:
        raise CorruptFile(f"cannot read {path}: {exc}") from exc
    return load_session(blob)
