"""Seeded hash families for level sampling and sketch verification.

Two families are provided:

* ``PairwiseHash`` -- multiply-add modulo the Mersenne prime 2^61 - 1,
  truncated to ``out_bits``.  For (a, b) drawn uniformly this family is
  2-wise independent, which is what both the level-sampling rule and the
  tag partitioning need.
* ``OddHash`` -- the multiply-threshold construction ``f(x) = 1 iff
  x != 0 and (k * x mod 2^w) <= t`` with k odd.  For any fixed nonempty
  set S, the parity ``sum_{x in S} f(x) mod 2`` is 1 with probability at
  least 1/8 over the draw of (k, t).

All parameters are drawn from a counter-mode splitmix64 stream so that a
given seed reproduces the same functions bit-for-bit on every run.  Slot
``i`` of seed ``s`` is ``mix64(s + (i + 1) * GOLDEN)``; draws that need
rejection (uniform values below the prime) retry the same slot with a
second odd increment, keeping slots independent of each other's retries.
NumPy batch versions of the draw and evaluation routines are provided for
the Monte Carlo experiments; they compute exactly the same values as the
scalar ones (tested), using a 31/30-bit split so every intermediate fits
in 64 bits when keys are below 2^30.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ParameterError

MERSENNE61 = (1 << 61) - 1

_M64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_REDRAW = 0xD1B54A32D192ED03
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


def mix64(z: int) -> int:
    """The splitmix64 finalizer: a 64-bit bijective mix."""
    z &= _M64
    z = ((z ^ (z >> 30)) * _MIX1) & _M64
    z = ((z ^ (z >> 27)) * _MIX2) & _M64
    return z ^ (z >> 31)


def stream_u64(seed: int, slot: int, redraw: int = 0) -> int:
    """Slot ``slot`` of the parameter stream keyed by ``seed``."""
    return mix64(seed + (slot + 1) * _GOLDEN + redraw * _REDRAW)


def derive_seed(seed: int, index: int) -> int:
    """A sub-seed for component ``index``, independent across indices."""
    return stream_u64(seed, index)


def _stream_u64_many(seed: int, slot0: int, count: int, redraw: int = 0) -> np.ndarray:
    slots = np.arange(slot0 + 1, slot0 + count + 1, dtype=np.uint64)
    z = np.uint64(seed & _M64) + slots * np.uint64(_GOLDEN)
    z += np.uint64((redraw * _REDRAW) & _M64)
    z = z ^ (z >> np.uint64(30))
    z = z * np.uint64(_MIX1)
    z = z ^ (z >> np.uint64(27))
    z = z * np.uint64(_MIX2)
    return z ^ (z >> np.uint64(31))


def draw_mod61(seed: int, slot: int, nonzero: bool = False) -> int:
    """Uniform value in [0, 2^61 - 1), or [1, ..) if ``nonzero``."""
    redraw = 0
    while True:
        v = stream_u64(seed, slot, redraw) >> 3
        if v < MERSENNE61 and not (nonzero and v == 0):
            return v
        redraw += 1


def draw_mod61_many(seed: int, slot0: int, count: int, nonzero: bool = False) -> np.ndarray:
    """Batch version of :func:`draw_mod61` for slots slot0..slot0+count-1."""
    vals = _stream_u64_many(seed, slot0, count) >> np.uint64(3)
    bad = vals >= np.uint64(MERSENNE61)
    if nonzero:
        bad |= vals == np.uint64(0)
    while bad.any():
        # Retry only the offending slots, mirroring the scalar redraw chain.
        for i in np.nonzero(bad)[0]:
            vals[i] = np.uint64(draw_mod61(seed, slot0 + int(i), nonzero))
        bad = vals >= np.uint64(MERSENNE61)
        if nonzero:
            bad |= vals == np.uint64(0)
    return vals


def draw_bits(seed: int, slot: int, bits: int) -> int:
    """Uniform ``bits``-bit value from the stream."""
    return stream_u64(seed, slot) & ((1 << bits) - 1)


def draw_bits_many(seed: int, slot0: int, count: int, bits: int) -> np.ndarray:
    return _stream_u64_many(seed, slot0, count) & np.uint64((1 << bits) - 1)


@dataclass(frozen=True)
class PairwiseHash:
    """2-wise independent hash into [1, 2^out_bits]."""

    a: int
    b: int
    p: int
    out_bits: int

    # Parameter slots used by from_seed; structures that pack many hash
    # functions into one stream reuse this layout.
    SLOT_A = 0
    SLOT_B = 1

    @classmethod
    def from_seed(cls, seed: int, out_bits: int) -> "PairwiseHash":
        if not 1 <= out_bits <= 61:
            raise ParameterError(f"out_bits must be in [1, 61], got {out_bits}")
        a = draw_mod61(seed, cls.SLOT_A, nonzero=True)
        b = draw_mod61(seed, cls.SLOT_B)
        return cls(a=a, b=b, p=MERSENNE61, out_bits=out_bits)

    def __call__(self, key: int) -> int:
        """Evaluate on ``key`` (0 <= key < p); residue 0 maps to 2^out_bits."""
        v = ((self.a * key + self.b) % self.p) & ((1 << self.out_bits) - 1)
        return v if v else 1 << self.out_bits


def pairwise_eval_many(a: np.ndarray, b: np.ndarray, key: int, out_bits: int) -> np.ndarray:
    """Evaluate many (a, b) parameter pairs on one key; matches PairwiseHash.

    Requires key < 2^30 so that all intermediates fit in uint64; larger
    keys fall back to exact scalar arithmetic.
    """
    if key >= 1 << 30:
        p = MERSENNE61
        mask = (1 << out_bits) - 1
        out = [((int(ai) * key + int(bi)) % p) & mask for ai, bi in zip(a, b)]
        return np.array([v if v else 1 << out_bits for v in out], dtype=np.uint64)
    k = np.uint64(key)
    a_hi = a >> np.uint64(31)
    a_lo = a & np.uint64((1 << 31) - 1)
    t1 = a_hi * k  # < 2^60
    # t1 * 2^31 mod p, using 2^61 = 1 (mod p).
    s = (t1 >> np.uint64(30)) + ((t1 & np.uint64((1 << 30) - 1)) << np.uint64(31))
    s = s + a_lo * k + b  # < 2^63
    p = np.uint64(MERSENNE61)
    r = (s & p) + (s >> np.uint64(61))
    r = np.where(r >= p, r - p, r)
    v = r & np.uint64((1 << out_bits) - 1)
    return np.where(v == 0, np.uint64(1 << out_bits), v)


@dataclass(frozen=True)
class OddHash:
    """0/1 hash with the fixed-set odd-parity guarantee; f(0) = 0 always."""

    k: int
    t: int
    w: int

    SLOT_K = 0
    SLOT_T = 1

    @classmethod
    def from_seed(cls, seed: int, w: int) -> "OddHash":
        if not 2 <= w <= 61:
            raise ParameterError(f"w must be in [2, 61], got {w}")
        k = (draw_bits(seed, cls.SLOT_K, w - 1) << 1) | 1
        t = draw_bits(seed, cls.SLOT_T, w) + 1
        return cls(k=k, t=t, w=w)

    def __call__(self, x: int) -> int:
        if x == 0:
            return 0
        return 1 if ((self.k * x) & ((1 << self.w) - 1)) <= self.t else 0


def odd_eval_many(k: np.ndarray, t: np.ndarray, key: int, w: int) -> np.ndarray:
    """Evaluate many (k, t) pairs on one key; boolean array."""
    if key == 0:
        return np.zeros(len(k), dtype=bool)
    if key >= 1 << 32 or w > 32:
        mask = (1 << w) - 1
        return np.array([((int(ki) * key) & mask) <= int(ti) for ki, ti in zip(k, t)])
    prod = (k * np.uint64(key)) & np.uint64((1 << w) - 1)
    return prod <= t


def first_sampled_level(hash_value: int) -> int:
    """Minimum level i with hash_value <= 2^i (levels nest upward)."""
    return (hash_value - 1).bit_length()


def sampled_at_level(h: PairwiseHash, key: int, level: int) -> bool:
    """Whether ``key`` belongs to sampling level ``level`` under ``h``.

    Level ``out_bits`` is the always-on level: every key lands there
    because the hash range is [1, 2^out_bits].
    """
    if not 0 <= level <= h.out_bits:
        raise ParameterError(f"level must be in [0, {h.out_bits}], got {level}")
    return h(key) <= (1 << level)
