"""
Trace Loader
Parses whitespace-separated trace text: packets (format A), packets with a
connection key (format B) and pre-binned values (format C).
"""

import math
from typing import Dict, Iterable, Iterator, List, Optional, TextIO, Tuple
from pathlib import Path

import numpy as np
import structlog

from ..errors import EmptyInputError, InvalidArgumentError, TraceParseError, TraceValidationError
from ..models.trace import BinnedTrace, ConnectionKey, PacketTrace, SessionBitmap

logger = structlog.get_logger(__name__)

KEY_FIELDS = 4


def _lines(stream: Iterable[str]) -> Iterator[Tuple[int, List[str]]]:
    """(line number, fields) of every nonblank line; lines starting with # are comments"""
    for line_number, line in enumerate(stream, start=1):
        text = line.strip()
        if not text or text.startswith("#"):
            continue
        yield line_number, text.split()


def _number(token: str, line_number: int, name: str) -> float:
    try:
        value = float(token)
    except ValueError:
        raise TraceParseError(f"{name} is not a number: {token!r}", line_number) from None
    if not math.isfinite(value):
        raise TraceValidationError(f"{name} is not finite: {token!r}", line_number)
    if value < 0:
        raise TraceValidationError(f"{name} is negative: {token!r}", line_number)
    return value


def _event(fields: List[str], line_number: int, minimum_fields: int) -> Tuple[float, float]:
    if len(fields) < minimum_fields:
        raise TraceParseError(
            f"expected at least {minimum_fields} fields, got {len(fields)}", line_number
        )
    return _number(fields[0], line_number, "timestamp"), _number(fields[1], line_number, "size")


def _sorted_trace(timestamps: List[float], sizes: List[float]) -> PacketTrace:
    times = np.asarray(timestamps, dtype=np.float64)
    weights = np.asarray(sizes, dtype=np.float64)
    order = np.argsort(times, kind="stable")
    return PacketTrace(timestamps=times[order], sizes=weights[order])


def parse_timestamp_size(stream: Iterable[str]) -> PacketTrace:
    """
    Format A: "<timestamp> <size> [ignored fields...]" per line

    Args:
        stream: Text lines (file object or list of strings)

    Returns:
        PacketTrace with every line as one event, stably sorted by timestamp
    """
    timestamps, sizes = [], []
    for line_number, fields in _lines(stream):
        timestamp, size = _event(fields, line_number, 2)
        timestamps.append(timestamp)
        sizes.append(size)
    trace = _sorted_trace(timestamps, sizes)
    logger.debug("Packet trace parsed", events=len(trace), duration=trace.duration)
    return trace


def parse_connections(stream: Iterable[str], key: ConnectionKey) -> PacketTrace:
    """
    Format B: "<timestamp> <size> <shost> <rhost> <sport> <rport>" per line

    Args:
        stream: Text lines
        key: Connection to extract

    Returns:
        The connection's events, sorted; empty trace when the key never occurs
    """
    wanted = key.tokens
    timestamps, sizes = [], []
    for line_number, fields in _lines(stream):
        timestamp, size = _event(fields, line_number, 2 + KEY_FIELDS)
        if tuple(fields[2:2 + KEY_FIELDS]) == wanted:
            timestamps.append(timestamp)
            sizes.append(size)
    return _sorted_trace(timestamps, sizes)


def split_connections(stream: Iterable[str]) -> Dict[ConnectionKey, PacketTrace]:
    """
    Every connection of a format-B stream

    Returns:
        Sorted trace per key, keys in order of first appearance
    """
    groups: Dict[Tuple[str, ...], Tuple[List[float], List[float]]] = {}
    for line_number, fields in _lines(stream):
        timestamp, size = _event(fields, line_number, 2 + KEY_FIELDS)
        times, weights = groups.setdefault(tuple(fields[2:2 + KEY_FIELDS]), ([], []))
        times.append(timestamp)
        weights.append(size)

    connections = {
        ConnectionKey.from_tokens(tokens): _sorted_trace(times, weights)
        for tokens, (times, weights) in groups.items()
    }
    logger.info("Connections split", connections=len(connections))
    return connections


def parse_prebinned(stream: Iterable[str], bin_width: float) -> BinnedTrace:
    """
    Format C: one nonnegative value per line

    Args:
        stream: Text lines
        bin_width: Bin width Δ (s), supplied out of band

    Returns:
        BinnedTrace in line order
    """
    if not bin_width > 0:
        raise InvalidArgumentError("bin width must be positive", bin_width=bin_width)
    values = [_number(fields[0], line_number, "value") for line_number, fields in _lines(stream)]
    if not values:
        raise EmptyInputError("pre-binned input holds no values")
    return BinnedTrace(bin_width=bin_width, values=np.asarray(values, dtype=np.float64))


def _open(path: str) -> TextIO:
    file_path = Path(path)
    if not file_path.exists():
        raise InvalidArgumentError(f"input file not found: {path}", path=path)
    return open(file_path, "r", encoding="utf-8")


def load_packet_trace(path: str) -> PacketTrace:
    with _open(path) as f:
        return parse_timestamp_size(f)


def load_connection(path: str, key: ConnectionKey) -> PacketTrace:
    with _open(path) as f:
        return parse_connections(f, key)


def load_connections(path: str) -> Dict[ConnectionKey, PacketTrace]:
    with _open(path) as f:
        return split_connections(f)


def load_prebinned(path: str, bin_width: float) -> BinnedTrace:
    with _open(path) as f:
        return parse_prebinned(f, bin_width)


def load_session_bitmap(path: str, bin_width: float = 0.001) -> SessionBitmap:
    """Format-C session file; every positive value marks an active bin"""
    binned = load_prebinned(path, bin_width)
    return SessionBitmap(bin_width=bin_width, bits=(binned.values > 0).astype(np.uint8))


def parse_connection_key(text: Optional[str]) -> Optional[ConnectionKey]:
    """Key given on the command line as four tokens joined by ",", ":" or whitespace"""
    if text is None:
        return None
    tokens = text.replace(",", " ").replace(":", " ").split()
    if len(tokens) != KEY_FIELDS:
        raise InvalidArgumentError("connection key needs four tokens", key=text)
    return ConnectionKey.from_tokens(tokens)
