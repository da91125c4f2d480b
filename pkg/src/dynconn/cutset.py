"""One tier's cutset sketch: recover an edge leaving a tree, from XOR sums.

Every edge {x, y} with x < y gets a nonzero name: the 2*ceil(lg n)-bit
concatenation of the endpoint ids.  Each vertex accumulates, per sampling
level, the XOR of the names of its incident sampled edges; the forest's
per-tree aggregate of those vectors therefore equals the XOR over edges
*crossing* the tree's cut (edges inside the tree contribute at both
endpoints and cancel).  When the minimum nonempty level happens to hold a
single crossing edge, the aggregate is that edge's name verbatim.

Levels: an edge is sampled at level i iff its level hash lands in
[1, 2^i].  Levels 0..level_num-1 give geometrically decreasing sampling
rates; level level_num is always-on (the hash range is [1, 2^level_num]),
so a cut of size one is recovered deterministically.

Verification that a nonzero sum names one real edge rather than the XOR
of several:

* sublinear mode -- ``tag_pairs`` independent (partition, odd-hash) pairs.
  Pair j splits edges into sides b = 0, 1 with a 1-bit pairwise hash and
  accumulates, per side, the parity of an odd-hash bit.  If two or more
  edges are present, some pair sees both sides light up with probability
  at least 1/128 per pair; a decoded value is accepted only when no pair
  has both bits set.
* edge-list mode -- no tags; the decoded value must be a current edge with
  exactly one endpoint inside the tree.

Node payload layout, per level, starting at a word boundary:
``[name: name_bits][tags side 0: tag_pairs][tags side 1: tag_pairs]``.

Deleting a never-inserted edge in sublinear mode silently corrupts the
sums; keeping deletions honest is the caller's contract.
"""

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import ParameterError, UsageError
from .euler_forest import EulerForest
from .hashing import (
    MERSENNE61,
    PairwiseHash,
    draw_bits_many,
    draw_mod61_many,
    first_sampled_level,
    odd_eval_many,
    pairwise_eval_many,
)

SUBLINEAR = "sublinear"
EDGE_LIST = "edge-list"


class EdgeKey(NamedTuple):
    x: int
    y: int

    @classmethod
    def of(cls, u: int, v: int) -> "EdgeKey":
        if u == v:
            raise ParameterError(f"self-loop ({u}, {v}) is not an edge")
        if u < 0:
            raise ParameterError(f"negative vertex in ({u}, {v})")
        return cls(u, v) if u < v else cls(v, u)


def name_bits_for(n: int) -> int:
    return 2 * (n - 1).bit_length()


def level_num_for(n: int) -> int:
    """Number of geometric sampling levels: ceil(2 lg n)."""
    return (n * n - 1).bit_length()


def encode_name(e: EdgeKey, n: int) -> int:
    """The edge's name: x in the high half, y in the low half; never 0."""
    if not 0 <= e.x < e.y < n:
        raise ParameterError(f"edge {e} invalid for n={n}")
    return (e.x << ((n - 1).bit_length())) | e.y


def decode_name(z: int, n: int) -> EdgeKey | None:
    """Inverse of encode_name; None when the halves are not a valid edge."""
    half = (n - 1).bit_length()
    x = z >> half
    y = z & ((1 << half) - 1)
    if x < y < n:
        return EdgeKey(x, y)
    return None


# Search verdicts.
ACCEPTED = "accepted"
EMPTY = "empty"
DECODE_INVALID = "decode-invalid"
TAG_REJECT = "tag-reject"
NOT_AN_EDGE = "not-an-edge"
NOT_CROSSING = "not-crossing"


@dataclass(frozen=True)
class SearchResult:
    edge: EdgeKey | None
    level: int | None
    verdict: str

    @property
    def found(self) -> bool:
        return self.edge is not None


def _sides_and_lit(a_hi, a_lo, b, k0, t0, k1, t1, k64, w_mask):
    """Shared fused tag arithmetic: partition side and odd-hash bit per pair.

    Returns (side0, lit): side0[j] is True when pair j puts the key on
    side 0, and lit[j] is the odd-hash bit of the side the key landed on.
    Evaluating both sides' odd hashes unconditionally and masking is
    cheaper than element selects.  The partition value is the truncated
    mod-(2^61 - 1) residue: odd residue -> value 1 -> side 0.
    """
    t = a_hi * k64
    s = (t >> np.uint64(30)) + ((t & np.uint64((1 << 30) - 1)) << np.uint64(31))
    s = s + a_lo * k64 + b
    p = np.uint64(MERSENNE61)
    r = (s & p) + (s >> np.uint64(61))
    # parity of (r mod p): p is odd, so subtracting it once flips parity.
    side0 = ((r & np.uint64(1)) != 0) ^ (r >= p)
    lit0 = ((k0 * k64) & w_mask) <= t0
    lit1 = ((k1 * k64) & w_mask) <= t1
    lit = (lit0 & side0) | (lit1 & ~side0)
    return side0, lit


class StackedTagBank:
    """Evaluates every tier's tag hashes on one key in a single pass.

    Concatenating the parameter arrays of a homogeneous list of
    structures amortizes the numpy dispatch overhead across the whole
    stack; the arithmetic is identical to
    :meth:`CutsetStructure._tag_bit_masks` (pinned by a test).
    """

    def __init__(self, structures):
        self._count = len(structures)
        first = structures[0]
        self.tag_pairs = first.tag_pairs
        self.name_bits = first.name_bits
        for cd in structures:
            if cd.tag_pairs != self.tag_pairs or cd.name_bits != self.name_bits:
                raise ParameterError("stacked structures must share tag_pairs and n")
        if self.tag_pairs == 0:
            return
        self._a_hi = np.concatenate([cd._part_a_hi for cd in structures])
        self._a_lo = np.concatenate([cd._part_a_lo for cd in structures])
        self._b = np.concatenate([cd._part_b for cd in structures])
        self._k0 = np.concatenate([cd._odd_k0 for cd in structures])
        self._t0 = np.concatenate([cd._odd_t0 for cd in structures])
        self._k1 = np.concatenate([cd._odd_k1 for cd in structures])
        self._t1 = np.concatenate([cd._odd_t1 for cd in structures])
        self._w_mask = np.uint64((1 << self.name_bits) - 1)

    def masks(self, key: int) -> list[tuple[int, int]] | None:
        """Per-structure packed (side 0, side 1) tag bits, or None when the
        fast path does not apply (callers then fall back per structure)."""
        if self.tag_pairs == 0:
            return [(0, 0)] * self._count
        if key >= 1 << 30:
            return None
        k64 = np.uint64(key)
        side0, lit = _sides_and_lit(
            self._a_hi, self._a_lo, self._b,
            self._k0, self._t0, self._k1, self._t1,
            k64, self._w_mask,
        )
        rows0 = np.packbits((lit & side0).reshape(self._count, self.tag_pairs), axis=1, bitorder="little")
        rows1 = np.packbits((lit & ~side0).reshape(self._count, self.tag_pairs), axis=1, bitorder="little")
        return [
            (int.from_bytes(rows0[i].tobytes(), "little"), int.from_bytes(rows1[i].tobytes(), "little"))
            for i in range(self._count)
        ]


class CutsetStructure:
    """Sketch state for one tier: hashes, node vectors, and a forest.

    ``shared_edges``: in edge-list mode, an externally owned edge set used
    for verification only; when omitted the structure keeps (and mutates)
    its own.  All hash functions are fixed at construction.

    Parameter stream slots: 0, 1 hold the level hash; then contiguous
    blocks of ``tag_pairs`` slots for the partition hashes' a and b, and
    for each side's odd-hash k and t.
    """

    def __init__(
        self,
        n: int,
        seed: int,
        tag_pairs: int,
        mode: str = SUBLINEAR,
        shared_edges: set | None = None,
        retry_higher_levels: bool = False,
    ):
        if n < 2:
            raise ParameterError(f"vertex count must be >= 2, got {n}")
        if tag_pairs < 0:
            raise ParameterError(f"tag_pairs must be >= 0, got {tag_pairs}")
        if mode not in (SUBLINEAR, EDGE_LIST):
            raise ParameterError(f"unknown mode {mode!r}")
        self.n = n
        self.seed = seed
        self.mode = mode
        self.retry_higher_levels = retry_higher_levels
        self.name_bits = name_bits_for(n)
        self.half_bits = (n - 1).bit_length()
        self.level_num = level_num_for(n)
        self.level_hash = PairwiseHash.from_seed(seed, self.level_num)
        # Edge-list mode verifies against the list; tags would be dead weight.
        self.tag_pairs = tag_pairs if mode == SUBLINEAR else 0
        tp = self.tag_pairs
        if tp:
            self._part_a = draw_mod61_many(seed, 2, tp, nonzero=True)
            self._part_b = draw_mod61_many(seed, 2 + tp, tp)
            w = self.name_bits
            self._odd_k0 = (draw_bits_many(seed, 2 + 2 * tp, tp, w - 1) << np.uint64(1)) | np.uint64(1)
            self._odd_t0 = draw_bits_many(seed, 2 + 3 * tp, tp, w) + np.uint64(1)
            self._odd_k1 = (draw_bits_many(seed, 2 + 4 * tp, tp, w - 1) << np.uint64(1)) | np.uint64(1)
            self._odd_t1 = draw_bits_many(seed, 2 + 5 * tp, tp, w) + np.uint64(1)
            # Pre-split multipliers for the fused 64-bit evaluation path.
            self._part_a_hi = self._part_a >> np.uint64(31)
            self._part_a_lo = self._part_a & np.uint64((1 << 31) - 1)
            self._w_mask = np.uint64((1 << w) - 1)
        self.words_per_level = (self.name_bits + 2 * self.tag_pairs + 63) // 64
        self.payload_words = (self.level_num + 1) * self.words_per_level
        self.forest = EulerForest(n, self.payload_words)
        if mode == EDGE_LIST:
            self._owns_edges = shared_edges is None
            self.edges = set() if shared_edges is None else shared_edges
        else:
            self._owns_edges = False
            self.edges = None
        self._name_mask = (1 << self.name_bits) - 1
        self._tag_mask = (1 << self.tag_pairs) - 1

    # -- sketch deltas -------------------------------------------------

    def _tag_bit_masks(self, key: int):
        """Packed tag bits (side 0, side 1) contributed by one edge key."""
        tp = self.tag_pairs
        if tp == 0:
            return 0, 0
        if key < 1 << 30:
            side0, lit = _sides_and_lit(
                self._part_a_hi, self._part_a_lo, self._part_b,
                self._odd_k0, self._odd_t0, self._odd_k1, self._odd_t1,
                np.uint64(key), self._w_mask,
            )
        else:
            side0 = pairwise_eval_many(self._part_a, self._part_b, key, 1) == 1
            k = np.where(side0, self._odd_k0, self._odd_k1)
            t = np.where(side0, self._odd_t0, self._odd_t1)
            lit = odd_eval_many(k, t, key, self.name_bits)
        bits0 = np.packbits(lit & side0, bitorder="little").tobytes()
        bits1 = np.packbits(lit & ~side0, bitorder="little").tobytes()
        return int.from_bytes(bits0, "little"), int.from_bytes(bits1, "little")

    def _delta_for(self, e: EdgeKey, tag_masks: tuple[int, int] | None = None) -> int:
        """Payload XOR contributed by edge e at each of its endpoints."""
        name = encode_name(e, self.n)
        bits0, bits1 = self._tag_bit_masks(name) if tag_masks is None else tag_masks
        block = name | (bits0 << self.name_bits) | (bits1 << (self.name_bits + self.tag_pairs))
        lo = first_sampled_level(self.level_hash(name))
        step = 64 * self.words_per_level
        delta = 0
        for level in range(lo, self.level_num + 1):
            delta |= block << (step * level)
        return delta

    def expected_payload(self, v: int, edges) -> int:
        """From-scratch recomputation of v's payload over ``edges``."""
        acc = 0
        for e in edges:
            if v in (e.x, e.y):
                acc ^= self._delta_for(e)
        return acc

    # -- update operations ----------------------------------------------

    def insert_edge(self, e: EdgeKey, _tag_masks: tuple[int, int] | None = None):
        encode_name(e, self.n)  # validates
        if self._owns_edges:
            if e in self.edges:
                raise UsageError(f"insert of present edge {e}")
            self.edges.add(e)
        delta = self._delta_for(e, _tag_masks)
        self.forest.xor_payload(e.x, delta)
        self.forest.xor_payload(e.y, delta)

    def delete_edge(self, e: EdgeKey, _tag_masks: tuple[int, int] | None = None):
        encode_name(e, self.n)
        if self._owns_edges:
            if e not in self.edges:
                raise UsageError(f"delete of absent edge {e}")
            self.edges.remove(e)
        if self.forest.has_edge(e.x, e.y):
            self.make_nontree_edge(e)
        delta = self._delta_for(e, _tag_masks)
        self.forest.xor_payload(e.x, delta)
        self.forest.xor_payload(e.y, delta)

    def make_tree_edge(self, e: EdgeKey):
        """Promote e into the forest; sketch vectors are unaffected."""
        self.forest.link(e.x, e.y)

    def make_nontree_edge(self, e: EdgeKey):
        self.forest.cut(e.x, e.y)

    # -- search -----------------------------------------------------------

    def find_tree(self, v: int):
        return self.forest.find_tree(v)

    def _level_slice(self, agg: int, level: int):
        base = 64 * self.words_per_level * level
        block = agg >> base
        z = block & self._name_mask
        tags0 = (block >> self.name_bits) & self._tag_mask
        tags1 = (block >> (self.name_bits + self.tag_pairs)) & self._tag_mask
        return z, tags0, tags1

    def _verify(self, tree, z: int, tags0: int, tags1: int):
        e = decode_name(z, self.n)
        if e is None:
            return None, DECODE_INVALID
        if self.mode == SUBLINEAR:
            if tags0 & tags1:
                return None, TAG_REJECT
            return e, ACCEPTED
        if e not in self.edges:
            return None, NOT_AN_EDGE
        in_x = self.forest.find_tree(e.x) is tree
        in_y = self.forest.find_tree(e.y) is tree
        if in_x == in_y:
            return None, NOT_CROSSING
        return e, ACCEPTED

    def search(self, tree) -> SearchResult:
        """Try to recover one edge leaving the identified tree.

        Scans levels from the sparsest up and examines the first level
        whose name sum is nonzero; on a verification rejection it gives up
        rather than trying denser levels (``retry_higher_levels`` flips
        that).  Deterministic given the structure state.
        """
        rest = self.forest.aggregate(tree)
        if rest == 0:
            # An empty cut leaves every level blank: internal edges cancel
            # at both endpoints and there is nothing else in the sums.
            return SearchResult(None, None, EMPTY)
        step = 64 * self.words_per_level
        tp = self.tag_pairs
        for level in range(self.level_num + 1):
            z = rest & self._name_mask
            if z != 0:
                tags0 = (rest >> self.name_bits) & self._tag_mask
                tags1 = (rest >> (self.name_bits + tp)) & self._tag_mask
                edge, verdict = self._verify(tree, z, tags0, tags1)
                if edge is not None or not self.retry_higher_levels:
                    return SearchResult(edge, level, verdict)
            rest >>= step
        return SearchResult(None, None, EMPTY)

    def probe_level(self, tree, level: int) -> SearchResult:
        """Run the verification against one specific level (diagnostics)."""
        if not 0 <= level <= self.level_num:
            raise ParameterError(f"level {level} out of range")
        agg = self.forest.aggregate(tree)
        z, tags0, tags1 = self._level_slice(agg, level)
        if z == 0:
            return SearchResult(None, level, EMPTY)
        edge, verdict = self._verify(tree, z, tags0, tags1)
        return SearchResult(edge, level, verdict)
