"""
Stream file reading and writing.

Format, one item per line:
    n k mode        header; mode is psa | pdpsa | dpsa | fvs
    + u v           insert edge
    - u v           delete edge
    ?               query marker

Tokens are separated by single spaces. Parsing keeps the written endpoint
order and the final newline so emit_stream(parse_stream(text)) == text.
"""

import logging
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import FrozenSet, Iterator, List, Optional, Tuple, Union

from vcstream.core import Config, Op, ShadowGraph, StreamUpdate, canonical
from vcstream.errors import InvalidStream, ParseError, SelfLoop

logger = logging.getLogger(__name__)

MODES = ("psa", "pdpsa", "dpsa", "fvs")
QUERY = "?"

_NUMBER = r"(0|[1-9][0-9]*)"
_HEADER = re.compile(rf"^{_NUMBER} {_NUMBER} ([a-z]+)$")
_UPDATE = re.compile(rf"^([+-]) {_NUMBER} {_NUMBER}$")

StreamItem = Union[StreamUpdate, str]


@dataclass
class StreamFile:
    """
    Parsed stream: header plus ordered updates and query markers.

    Args:
        n: vertex count
        k: parameter
        mode: algorithm the stream is meant for
        items: StreamUpdate entries (timestamps 1..m) and QUERY markers
        reversed_at: item positions whose line wrote the larger endpoint first
        trailing_newline: whether the text ended with a newline
    """

    n: int
    k: int
    mode: str
    items: List[StreamItem] = field(default_factory=list)
    reversed_at: FrozenSet[int] = frozenset()
    trailing_newline: bool = True

    def updates(self) -> Iterator[StreamUpdate]:
        for item in self.items:
            if item != QUERY:
                yield item

    @property
    def query_count(self) -> int:
        return sum(1 for item in self.items if item == QUERY)

    def config(self, **overrides) -> Config:
        return Config(n=self.n, k=self.k, **overrides)

    @classmethod
    def build(cls, n: int, k: int, mode: str, items: List[StreamItem]) -> "StreamFile":
        """Stamp 1-based timestamps onto a freshly generated item list"""
        stamped: List[StreamItem] = []
        clock = 0
        for item in items:
            if item == QUERY:
                stamped.append(QUERY)
            else:
                clock += 1
                stamped.append(StreamUpdate(item.op, item.edge, clock))
        return cls(n=n, k=k, mode=mode, items=stamped)


def _parse_header(line: str) -> Tuple[int, int, str]:
    match = _HEADER.match(line)
    if not match:
        raise ParseError("header must read 'n k mode'", 1, repr(line))
    n, k, mode = int(match.group(1)), int(match.group(2)), match.group(3)
    if mode not in MODES:
        raise ParseError(f"unknown mode '{mode}'", 1, f"expected one of {', '.join(MODES)}")
    if n < 1:
        raise ParseError("n must be positive", 1)
    return n, k, mode


def parse_stream(text: str, validate: bool = False) -> StreamFile:
    """
    Parse stream text.

    Args:
        text: file contents
        validate: replay the updates on a shadow graph and reject invalid steps

    Returns:
        StreamFile

    Raises:
        ParseError: malformed line (1-based line number attached)
        InvalidStream: absent-edge delete, present-edge insert, self-loop or
            out-of-range vertex (validating mode; self-loops always)
    """
    if not text:
        raise ParseError("empty stream file", 1)
    trailing_newline = text.endswith("\n")
    lines = (text[:-1] if trailing_newline else text).split("\n")

    n, k, mode = _parse_header(lines[0])
    items: List[StreamItem] = []
    reversed_at = set()
    shadow: Optional[ShadowGraph] = ShadowGraph(n) if validate else None
    clock = 0

    for line_number, line in enumerate(lines[1:], start=2):
        if line == QUERY:
            items.append(QUERY)
            continue
        match = _UPDATE.match(line)
        if not match:
            raise ParseError("expected '+ u v', '- u v' or '?'", line_number, repr(line))
        op = Op(match.group(1))
        u, v = int(match.group(2)), int(match.group(3))
        try:
            edge = canonical(u, v)
        except SelfLoop as exc:
            raise SelfLoop(exc.user_message, f"line {line_number}") from exc
        clock += 1
        update = StreamUpdate(op, edge, clock)
        if shadow is not None:
            try:
                shadow.apply(update)
            except InvalidStream as exc:
                raise InvalidStream(exc.user_message, f"line {line_number}") from exc
        if u > v:
            reversed_at.add(len(items))
        items.append(update)

    logger.debug(f"parsed stream: n={n} k={k} mode={mode} updates={clock}")
    return StreamFile(n=n, k=k, mode=mode, items=items,
                      reversed_at=frozenset(reversed_at), trailing_newline=trailing_newline)


def emit_stream(stream: StreamFile) -> str:
    """Inverse of parse_stream"""
    lines = [f"{stream.n} {stream.k} {stream.mode}"]
    for position, item in enumerate(stream.items):
        if item == QUERY:
            lines.append(QUERY)
            continue
        a, b = item.edge.u, item.edge.v
        if position in stream.reversed_at:
            a, b = b, a
        lines.append(f"{item.op.value} {a} {b}")
    text = "\n".join(lines)
    return text + "\n" if stream.trailing_newline else text


def read_stream(path: Union[str, Path], validate: bool = False) -> StreamFile:
    path = Path(path)
    logger.info(f"Reading stream file: {path}")
    return parse_stream(path.read_text(encoding="utf-8"), validate=validate)


def write_stream(stream: StreamFile, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(emit_stream(stream), encoding="utf-8")
    logger.info(f"✅ Stream written: {path} ({len(stream.items)} lines)")
    return path
