"""Fully dynamic connectivity from a stack of per-tier cutset sketches.

Tier 0 holds the trivial forest (isolated vertices); every tier keeps a
sketch of the whole graph over its own forest, and each forest nests
inside the one above it.  The top tier is plain forest state with no
sketch: a high-degree Euler-tour forest answers queries, and a weighted
link-cut mirror of the same forest finds the maximum-tier edge on a path
(which, by nesting, identifies the lowest tier already connecting two
vertices).

After every edge update, ``_refresh`` walks the tiers bottom-up.  On each
tier, if the updated edge's endpoint sits in an *isolated* tree (same
vertex set as its tree one tier up) and that tree's sketch search yields
an edge, the edge is promoted into every higher forest; if the promotion
would close a cycle in the top forest, the maximum-tier cycle edge is
first demoted out of every forest containing it.  This restores the three
structural invariants checked by :meth:`TierStack.check_invariants`:

1. tier 0 never has tree edges;
2. tree-edge sets grow with the tier, and every forest is acyclic;
3. an isolated tree's search returns null (otherwise the refresh that saw
   it succeed would have merged it upward).

In sublinear mode a search can, with probability below 1/n^c, hand back a
value that is not a current edge; the engine promotes it like any other
result (the cycle bookkeeping stays sound because demotion always
disconnects the pair on every tier first), and the error shows up only as
a wrong query answer, measured rather than forbidden.
"""

import math
from dataclasses import dataclass

from .cutset import (
    EDGE_LIST,
    SUBLINEAR,
    CutsetStructure,
    EdgeKey,
    StackedTagBank,
    encode_name,
    level_num_for,
)
from .errors import ParameterError, UsageError
from .euler_forest import EulerForest
from .hashing import derive_seed
from .link_cut_forest import WeightedForest

ADDED = "added"
REMOVED = "removed"

THEORETICAL = "theoretical"


@dataclass(frozen=True)
class ForestChangeEvent:
    kind: str  # ADDED or REMOVED
    edge: EdgeKey


def default_top(n: int) -> int:
    """Desk-scale tier count: ceil(4 lg n)."""
    return max(2, math.ceil(4 * math.log2(n)))


def theoretical_top(n: int, c: int = 1) -> int:
    """Tier count from the contraction analysis; huge constants, kept for
    fidelity runs behind the ``top="theoretical"`` knob."""
    p = 1 / 8
    alpha = (1 - p) / (1 - p / 2)
    a = math.ceil(math.log(n) / math.log(4 / (4 - p)))
    return max(2, math.ceil(max(2 * a / alpha, 8 * c * math.log(n) / alpha)))


def default_tag_pairs(n: int, c: int = 1) -> int:
    return math.ceil(128 * c * math.log2(n))


@dataclass(frozen=True)
class Config:
    n: int
    seed: int
    c: int
    top: int
    level_num: int
    tag_pairs: int
    mode: str

    def __post_init__(self):
        if self.n < 2:
            raise ParameterError(f"n must be >= 2, got {self.n}")
        if self.c < 1:
            raise ParameterError(f"c must be >= 1, got {self.c}")
        if self.top < 2:
            raise ParameterError(f"top must be >= 2, got {self.top}")
        if self.tag_pairs < 0:
            raise ParameterError(f"tag_pairs must be >= 0, got {self.tag_pairs}")
        if self.mode not in (SUBLINEAR, EDGE_LIST):
            raise ParameterError(f"unknown mode {self.mode!r}")


def make_config(
    n: int,
    seed: int,
    c: int = 1,
    top: int | str | None = None,
    tag_pairs: int | None = None,
    mode: str = SUBLINEAR,
) -> Config:
    """Resolve defaults into a concrete Config."""
    if n < 2:
        raise ParameterError(f"n must be >= 2, got {n}")
    if top is None:
        top = default_top(n)
    elif top == THEORETICAL:
        top = theoretical_top(n, c)
    elif not isinstance(top, int):
        raise ParameterError(f"top must be an int or 'theoretical', got {top!r}")
    if tag_pairs is None:
        tag_pairs = default_tag_pairs(n, c) if mode == SUBLINEAR else 0
    return Config(
        n=n,
        seed=seed,
        c=c,
        top=top,
        level_num=level_num_for(n),
        tag_pairs=tag_pairs,
        mode=mode,
    )


class TierStack:
    """The connectivity engine: one cutset sketch per tier plus top forest."""

    def __init__(self, config: Config):
        self.config = config
        n = config.n
        self.n = n
        self.top = config.top
        self._edge_list_mode = config.mode == EDGE_LIST
        self._edges = set() if self._edge_list_mode else None
        self.cds = [
            CutsetStructure(
                n,
                seed=derive_seed(config.seed, tier),
                tag_pairs=config.tag_pairs,
                mode=config.mode,
                shared_edges=self._edges,
            )
            for tier in range(self.top)
        ]
        self.query_forest = EulerForest(n, 0, branching=max(2, (n - 1).bit_length()))
        self.path_index = WeightedForest(n)
        self.tier_of_edge: dict[EdgeKey, int] = {}
        self._events: list[ForestChangeEvent] = []
        self._tag_bank = StackedTagBank(self.cds)

    # -- updates --------------------------------------------------------

    def insert(self, e: EdgeKey):
        if self._edge_list_mode:
            if e in self._edges:
                raise UsageError(f"insert of present edge {e}")
            self._edges.add(e)
        masks = self._tag_bank.masks(encode_name(e, self.n))
        for tier, cd in enumerate(self.cds):
            cd.insert_edge(e, None if masks is None else masks[tier])
        self._refresh(e)

    def delete(self, e: EdgeKey):
        if self._edge_list_mode:
            if e not in self._edges:
                raise UsageError(f"delete of absent edge {e}")
            self._edges.remove(e)
        masks = self._tag_bank.masks(encode_name(e, self.n))
        for tier, cd in enumerate(self.cds):
            cd.delete_edge(e, None if masks is None else masks[tier])
        if e in self.tier_of_edge:
            self._remove_from_top(e)
        self._refresh(e)

    def connected(self, x: int, y: int) -> bool:
        return self.query_forest.find_tree(x) is self.query_forest.find_tree(y)

    # -- top-forest bookkeeping ------------------------------------------

    def _remove_from_top(self, e: EdgeKey):
        self.query_forest.cut(e.x, e.y)
        self.path_index.cut(e.x, e.y)
        del self.tier_of_edge[e]
        self._events.append(ForestChangeEvent(REMOVED, e))

    def _demote(self, e: EdgeKey, tier: int):
        """Drop e from every forest holding it (tiers tier..top)."""
        for k in range(tier, self.top):
            self.cds[k].make_nontree_edge(e)
        self._remove_from_top(e)

    def _promote(self, e: EdgeKey, tier: int):
        """Make e a tree edge on tiers tier..top; label it with ``tier``."""
        for k in range(tier, self.top):
            self.cds[k].make_tree_edge(e)
        self.query_forest.link(e.x, e.y)
        self.path_index.link(e.x, e.y, tier)
        self.tier_of_edge[e] = tier
        self._events.append(ForestChangeEvent(ADDED, e))

    def _refresh(self, e: EdgeKey):
        """Restore the invariants after the sketches absorbed an update."""
        path_index = self.path_index
        for ell in range(self.top):
            cd = self.cds[ell]
            lower = cd.forest
            upper = self.cds[ell + 1].forest if ell + 1 < self.top else self.query_forest
            for u in (e.x, e.y):
                tree = lower.find_tree(u)
                if lower.tree_size(tree) != upper.tree_size(upper.find_tree(u)):
                    continue  # not isolated; nothing to restore here
                found = cd.search(tree)
                if found.edge is None:
                    continue
                a, b = found.edge
                if path_index.connected(a, b):
                    # Promoting would close a cycle in the top forest; evict
                    # the maximum-tier cycle edge from every tier first.
                    cycle_edge, w = path_index.path_max(a, b)
                    self._demote(EdgeKey(*cycle_edge), w)
                self._promote(found.edge, ell + 1)

    # -- inspection -------------------------------------------------------

    def spanning_forest(self) -> set[EdgeKey]:
        return set(self.tier_of_edge)

    def drain_events(self) -> list[ForestChangeEvent]:
        out = self._events
        self._events = []
        return out

    def edges(self) -> set[EdgeKey]:
        if not self._edge_list_mode:
            raise UsageError("edge set is only tracked in edge-list mode")
        return set(self._edges)

    def space_report(self) -> dict:
        """Exact word and node tallies for the current structure."""
        sketch_words = sum(self.n * cd.payload_words for cd in self.cds)
        forest_nodes = sum(self.n + len(cd.forest._arcs) for cd in self.cds)
        forest_nodes += self.n + len(self.query_forest._arcs)
        forest_nodes += self.n + len(self.path_index._edges)
        return {
            "n": self.n,
            "top": self.top,
            "level_num": self.config.level_num,
            "tag_pairs_effective": self.cds[0].tag_pairs if self.cds else 0,
            "words_per_node": self.cds[0].payload_words if self.cds else 0,
            "sketch_words": sketch_words,
            "forest_nodes": forest_nodes,
            "edge_list_words": len(self._edges) if self._edge_list_mode else 0,
        }

    # -- debug scan ---------------------------------------------------------

    def check_invariants(self, edges: set[EdgeKey] | None = None, memo: dict | None = None):
        """Full structural scan; raises AssertionError on the first failure.

        ``edges``: the true current edge set, needed for the
        sketch-vs-scratch comparison in sublinear mode (edge-list mode
        supplies its own).  ``memo`` optionally caches per-(tier, edge)
        sketch deltas across repeated scans of the same stack.
        """
        current = edges if edges is not None else (set(self._edges) if self._edge_list_mode else None)
        chain = [set(cd.forest.tree_edges()) for cd in self.cds]
        top_set = {(e.x, e.y) for e in self.tier_of_edge}
        chain.append(top_set)

        assert not chain[0], f"tier 0 has tree edges: {chain[0]}"
        for k in range(len(chain) - 1):
            assert chain[k] <= chain[k + 1], f"tier {k} forest not nested in tier {k + 1}"
        for k, s in enumerate(chain):
            assert self._acyclic(s), f"tier {k} forest has a cycle"
        if self._edge_list_mode:
            assert top_set <= {(e.x, e.y) for e in current}, "phantom tree edge in edge-list mode"

        # Three representations of the top forest must agree.
        query_edges = set(self.query_forest.tree_edges())
        assert query_edges == top_set, "query forest disagrees with tier labels"
        path_edges = {(u, v): w for u, v, w in self.path_index.edges()}
        assert set(path_edges) == top_set, "path index disagrees with tier labels"
        for e, tier in self.tier_of_edge.items():
            assert path_edges[(e.x, e.y)] == tier, f"path index weight mismatch for {e}"
            for k in range(self.top):
                assert ((e.x, e.y) in chain[k]) == (k >= tier), f"occupancy mismatch for {e}"

        if current is not None:
            self._check_sketches(current, memo)

        for ell in range(self.top):
            lower = self.cds[ell].forest
            upper = self.cds[ell + 1].forest if ell + 1 < self.top else self.query_forest
            for tree in lower.roots():
                members = lower.tree_vertices(tree)
                if lower.tree_size(tree) != upper.tree_size(upper.find_tree(members[0])):
                    continue
                res = self.cds[ell].search(tree)
                assert res.edge is None, (
                    f"isolated tree {sorted(members)} on tier {ell} has a successful search: {res}"
                )
        return True

    def _check_sketches(self, current: set[EdgeKey], memo: dict | None):
        if memo is None:
            memo = {}
        for tier, cd in enumerate(self.cds):
            expected = [0] * self.n
            for e in current:
                key = (tier, e)
                delta = memo.get(key)
                if delta is None:
                    delta = memo[key] = cd._delta_for(e)
                expected[e.x] ^= delta
                expected[e.y] ^= delta
            for v in range(self.n):
                assert cd.forest.payload(v) == expected[v], f"sketch drift: tier {tier} node {v}"
            for tree in cd.forest.roots():
                agg = 0
                for v in cd.forest.tree_vertices(tree):
                    agg ^= expected[v]
                assert cd.forest.aggregate(tree) == agg, f"aggregate drift on tier {tier}"

    @staticmethod
    def _acyclic(edge_set) -> bool:
        parent = {}

        def find(x):
            while parent.get(x, x) != x:
                parent[x] = parent.get(parent[x], parent[x])
                x = parent[x]
            return x

        for u, v in edge_set:
            ru, rv = find(u), find(v)
            if ru == rv:
                return False
            parent[ru] = rv
        return True
