"""Seedable, splittable random streams.

Streams wrap numpy's counter-based Philox generator keyed through a
``SeedSequence``. Only raw 64-bit outputs are consumed; integer and float
conversions are done here so a stream's values do not depend on numpy's
``Generator`` method implementations, which are not version-stable.
"""

import math

import numpy as np

from .special import gaussian_quantile, gaussian_cdf

_U64 = 1 << 64
_TWO_M53 = 2.0 ** -53
# below this threshold the truncated tail is sampled by inversion
TAIL_INVERSION_MAX = 1.0


class RngStream:
    """Deterministic random stream identified by ``(seed, stream_id)``.

    A stream is single-owner. To parallelize, hand each worker its own
    stream, either ``RngStream(seed, other_id)`` or a child from
    :meth:`spawn`. Children are derived from the parent's key and a spawn
    counter, so the ``k``-th child of a stream is always the same stream.
    """

    def __init__(self, seed=0, stream_id=0, _path=()):
        seed, stream_id = int(seed), int(stream_id)
        if not (0 <= seed < _U64 and 0 <= stream_id < _U64):
            raise ValueError("seed and stream_id must be unsigned 64-bit integers")
        self.seed = seed
        self.stream_id = stream_id
        self.path = tuple(_path)
        ss = np.random.SeedSequence(seed, spawn_key=(stream_id,) + self.path)
        self._bitgen = np.random.Philox(ss)
        self._children = 0

    def __repr__(self):
        return f"RngStream(seed={self.seed}, stream_id={self.stream_id}, path={self.path})"

    def spawn(self):
        """Return the next independent child stream."""
        child = RngStream(self.seed, self.stream_id, self.path + (self._children,))
        self._children += 1
        return child

    def raw(self, size=None):
        """Raw uint64 output(s) of the underlying generator."""
        if size is None:
            return int(self._bitgen.random_raw())
        return self._bitgen.random_raw(size).astype(np.uint64)


def uniform_open(stream, size=None):
    """Uniform variate(s) strictly inside (0, 1).

    Uses the top 53 bits of a raw draw shifted by half an ulp, so 0 and 1
    are unreachable.
    """
    if size is None:
        return ((stream.raw() >> 11) + 0.5) * _TWO_M53
    bits = stream.raw(size) >> np.uint64(11)
    return (bits.astype(float) + 0.5) * _TWO_M53


def uniform_int(stream, lo, hi, size=None):
    """Uniform integer(s) on the closed range ``{lo, ..., hi}``.

    Rejection on raw 64-bit words removes modulo bias.
    """
    lo, hi = int(lo), int(hi)
    if lo > hi:
        raise ValueError(f"uniform_int needs lo <= hi, got lo={lo}, hi={hi}")
    span = hi - lo + 1
    if span > _U64:
        raise ValueError("range wider than 2**64 values")
    limit = _U64 - (_U64 % span)

    if size is None:
        if span == 1:
            return lo
        while True:
            w = stream.raw()
            if w < limit:
                return lo + w % span

    out = np.empty(size, dtype=np.int64)
    if span == 1:
        out.fill(lo)
        return out
    filled = 0
    while filled < size:
        w = stream.raw(size - filled)
        w = w[w < np.uint64(limit % _U64)] if limit < _U64 else w
        k = len(w)
        out[filled:filled + k] = lo + (w % np.uint64(span)).astype(np.int64)
        filled += k
    return out


def _right_tail(stream, T, size):
    if T < TAIL_INVERSION_MAX:
        # x = -Phi^{-1}(U * Phi(-T)); small argument keeps the quantile accurate
        u = uniform_open(stream, size)
        return -gaussian_quantile(u * gaussian_cdf(-T))

    # Marsaglia (1964): propose sqrt(T^2 + 2E), accept with prob. T / x
    out = np.empty(size)
    filled = 0
    while filled < size:
        k = size - filled
        u1 = uniform_open(stream, k)
        u2 = uniform_open(stream, k)
        x = np.sqrt(T * T - 2.0 * np.log(u1))
        x = x[u2 * x <= T]
        out[filled:filled + len(x)] = x
        filled += len(x)
    return out


def truncated_normal_tail(stream, T, side="right", size=None):
    """Standard normal conditioned on ``[T, inf)`` (right) or ``(-inf, -T]`` (left).

    Inversion through the lower-tail quantile for ``T < 1``, exponential
    proposal rejection for larger thresholds. The left side is the mirror
    image of the right side.
    """
    T = float(T)
    if not T >= 0.0 or math.isinf(T):
        raise ValueError(f"truncated_normal_tail needs finite T >= 0, got {T}")
    if side not in ("left", "right"):
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    n = 1 if size is None else int(size)
    # clamp rounding spill-over from the inversion branch
    x = np.maximum(_right_tail(stream, T, n), T)
    if side == "left":
        x = -x
    return float(x[0]) if size is None else x
