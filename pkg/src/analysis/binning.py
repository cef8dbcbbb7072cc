"""
Binning
Packet traces to bin sums, session bitmaps and power-of-two views.
"""

from typing import Optional, Union

import numpy as np
import structlog
from numpy.typing import ArrayLike

from ..errors import EmptyInputError, InvalidArgumentError
from ..models.trace import BinnedTrace, DyadicView, PacketTrace, SessionBitmap

logger = structlog.get_logger(__name__)


def _bin_indices(trace: PacketTrace, bin_width: float, length: Optional[int]) -> tuple:
    if not bin_width > 0:
        raise InvalidArgumentError("bin width must be positive", bin_width=bin_width)
    if len(trace) == 0:
        raise EmptyInputError("cannot bin an empty trace")

    # half-open bins [iΔ, (i+1)Δ); a quotient within rounding error of an integer is on that boundary
    quotients = trace.timestamps / bin_width
    nearest = np.rint(quotients)
    on_boundary = np.isclose(quotients, nearest, rtol=1e-12, atol=0.0)
    indices = np.floor(np.where(on_boundary, nearest, quotients)).astype(np.int64)
    count = int(indices[-1]) + 1
    if length is not None:
        if length < count:
            raise InvalidArgumentError(
                "requested length is shorter than the trace", length=length, required=count
            )
        count = length
    return indices, count


def bin_trace(trace: PacketTrace, bin_width: float, length: Optional[int] = None) -> BinnedTrace:
    """
    Sum event sizes per bin

    Args:
        trace: Packet trace
        bin_width: Bin width Δ (s), > 0
        length: Bin count; defaults to floor(duration / Δ) + 1

    Returns:
        BinnedTrace with values[i] = Σ sizes of events with iΔ ≤ t < (i+1)Δ
    """
    indices, count = _bin_indices(trace, bin_width, length)
    values = np.bincount(indices, weights=trace.sizes, minlength=count)
    return BinnedTrace(bin_width=bin_width, values=values)


def to_bitmap(trace: PacketTrace, bin_width: float, length: Optional[int] = None) -> SessionBitmap:
    """
    Mark every bin holding at least one event

    Args:
        trace: Packet trace of one connection
        bin_width: Bin width Δ (s), > 0
        length: Bin count; defaults to floor(duration / Δ) + 1

    Returns:
        SessionBitmap with the same bin convention as bin_trace
    """
    indices, count = _bin_indices(trace, bin_width, length)
    bits = (np.bincount(indices, minlength=count) > 0).astype(np.uint8)
    return SessionBitmap(bin_width=bin_width, bits=bits)


def bitmap_to_trace(bitmap: SessionBitmap, size: float = 1.0) -> PacketTrace:
    """One event of the given size at the centre of every active bin"""
    active = np.flatnonzero(bitmap.bits)
    timestamps = (active + 0.5) * bitmap.bin_width
    return PacketTrace(timestamps=timestamps, sizes=np.full(active.shape, float(size)))


def truncate_to_power_of_two(binned: Union[BinnedTrace, ArrayLike]) -> DyadicView:
    """
    Keep the first 2^m values, 2^m the largest power of two ≤ length

    Args:
        binned: BinnedTrace or plain sequence

    Returns:
        DyadicView of the leading 2^m values
    """
    values = binned.values if isinstance(binned, BinnedTrace) else np.asarray(binned, dtype=np.float64)
    length = int(values.shape[0])
    if length < 2:
        raise EmptyInputError("need at least 2 values for a dyadic view", length=length)

    m = length.bit_length() - 1
    kept = 2 ** m
    if kept != length:
        logger.warning("Trace truncated to power of two", original_bins=length, kept_bins=kept)
    return DyadicView(values=values[:kept], m=m)


def as_dyadic(x: Union[DyadicView, BinnedTrace, ArrayLike]) -> DyadicView:
    """
    Interpret x as a dyadic view without truncating

    Raises:
        InvalidArgumentError: length is not a power of two ≥ 2
    """
    if isinstance(x, DyadicView):
        return x
    values = x.values if isinstance(x, BinnedTrace) else np.asarray(x, dtype=np.float64)
    length = int(values.shape[0]) if values.ndim == 1 else 0
    if length < 2 or length & (length - 1):
        raise InvalidArgumentError("series length must be a power of two ≥ 2", length=length)
    return DyadicView(values=values, m=length.bit_length() - 1)


def block_sums(values: np.ndarray, exponent: int) -> np.ndarray:
    """Sums of consecutive disjoint blocks of 2^exponent values (pairwise pyramid)"""
    sums = np.asarray(values, dtype=np.float64)
    for _ in range(exponent):
        sums = sums[0::2] + sums[1::2]
    return sums
