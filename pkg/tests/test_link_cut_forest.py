import random

import pytest

from dynconn.errors import UsageError
from dynconn.link_cut_forest import WeightedForest


def oracle_path(n, edges, u, v):
    """Edge sequence on the unique u-v path, via DFS over the stored forest."""
    adj = {x: [] for x in range(n)}
    for (a, b), w in edges.items():
        adj[a].append((b, w))
        adj[b].append((a, w))
    stack = [(u, -1, [])]
    while stack:
        x, parent, path = stack.pop()
        if x == v:
            return path
        for y, w in adj[x]:
            if y != parent:
                stack.append((y, x, path + [((min(x, y), max(x, y)), w)]))
    return None


class TestBasics:
    def test_link_connects(self):
        f = WeightedForest(3)
        assert not f.connected(0, 1)
        f.link(0, 1, 2)
        assert f.connected(0, 1)
        assert f.connected(2, 2)

    def test_self_loop_rejected(self):
        f = WeightedForest(2)
        with pytest.raises(UsageError):
            f.link(0, 0, 1)

    def test_cycle_link_rejected(self):
        f = WeightedForest(3)
        f.link(0, 1, 0)
        f.link(1, 2, 0)
        with pytest.raises(UsageError):
            f.link(0, 2, 0)

    def test_cut_disconnects(self):
        f = WeightedForest(2)
        f.link(0, 1, 3)
        f.cut(0, 1)
        assert not f.connected(0, 1)

    def test_cut_absent_rejected(self):
        f = WeightedForest(2)
        with pytest.raises(UsageError):
            f.cut(0, 1)

    def test_path_max_two_edges(self):
        f = WeightedForest(3)
        f.link(0, 1, 3)
        f.link(1, 2, 5)
        edge, w = f.path_max(0, 2)
        assert w == 5
        assert edge == (1, 2)

    def test_path_max_single_edge(self):
        f = WeightedForest(2)
        f.link(0, 1, 4)
        edge, w = f.path_max(0, 1)
        assert edge == (0, 1)
        assert w == 4

    def test_path_max_errors(self):
        f = WeightedForest(3)
        f.link(0, 1, 1)
        with pytest.raises(UsageError):
            f.path_max(0, 0)
        with pytest.raises(UsageError):
            f.path_max(0, 2)

    def test_edges_listing(self):
        f = WeightedForest(4)
        f.link(3, 1, 7)
        f.link(0, 2, 1)
        assert sorted(f.edges()) == [(0, 2, 1), (1, 3, 7)]


class TestRandomized:
    @pytest.mark.parametrize("seed", [10, 11, 12, 13])
    def test_against_path_scan_oracle(self, seed):
        rng = random.Random(seed)
        n = 16
        f = WeightedForest(n)
        edges = {}
        for step in range(800):
            op = rng.random()
            if op < 0.4:
                u, v = rng.randrange(n), rng.randrange(n)
                if u != v and not f.connected(u, v):
                    w = rng.randrange(10)
                    f.link(u, v, w)
                    edges[(min(u, v), max(u, v))] = w
            elif op < 0.6 and edges:
                u, v = rng.choice(sorted(edges))
                f.cut(u, v)
                del edges[(u, v)]
            else:
                u, v = rng.randrange(n), rng.randrange(n)
                path = oracle_path(n, edges, u, v) if u != v else None
                assert f.connected(u, v) == (u == v or path is not None)
                if path:
                    edge, w = f.path_max(u, v)
                    assert w == max(pw for _, pw in path)
                    assert (edge, w) in path
