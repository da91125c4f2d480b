import itertools
import random

import pytest

from dynconn.cutset import EdgeKey
from dynconn.errors import ParameterError, UsageError
from dynconn.oracle import OracleGraph


def random_graph(rng, n, p):
    g = OracleGraph(n)
    for u, v in itertools.combinations(range(n), 2):
        if rng.random() < p:
            g.insert(EdgeKey(u, v))
    return g


def two_edge_connected_every_edge(g, u, v):
    """The literal definition: connected, and still connected after
    removing each single edge in turn (all edges, not just path edges)."""
    if not g.connected(u, v):
        return False
    for e in sorted(g.edges):
        g.edges.remove(e)
        ok = g.connected(u, v)
        g.edges.add(e)
        if not ok:
            return False
    return True


class TestApply:
    def test_insert_delete_roundtrip(self):
        g = OracleGraph(4)
        g.apply("I", EdgeKey(0, 1))
        g.apply("D", EdgeKey(0, 1))
        assert g.edges == set()

    def test_duplicate_insert_rejected(self):
        g = OracleGraph(4)
        g.insert(EdgeKey(0, 1))
        with pytest.raises(UsageError):
            g.insert(EdgeKey(0, 1))
        with pytest.raises(UsageError):
            g.delete(EdgeKey(1, 2))

    def test_replay_recount(self):
        rng = random.Random(0)
        g = OracleGraph(10)
        shadow = set()
        for _ in range(1000):
            u, v = rng.randrange(10), rng.randrange(10)
            if u == v:
                continue
            e = EdgeKey.of(u, v)
            if e in shadow:
                g.delete(e)
                shadow.remove(e)
            else:
                g.insert(e)
                shadow.add(e)
        assert g.edges == shadow


class TestConnected:
    def test_reflexive_and_empty(self):
        g = OracleGraph(4)
        assert g.connected(2, 2)
        assert not g.connected(0, 1)

    def test_matches_transitive_closure(self):
        rng = random.Random(7)
        for _ in range(30):
            g = random_graph(rng, 8, 0.25)
            # Warshall-style closure over the same edge set.
            reach = [[u == v for v in range(8)] for u in range(8)]
            for e in g.edges:
                reach[e.x][e.y] = reach[e.y][e.x] = True
            for k in range(8):
                for i in range(8):
                    for j in range(8):
                        if reach[i][k] and reach[k][j]:
                            reach[i][j] = True
            for u in range(8):
                for v in range(8):
                    assert g.connected(u, v) == reach[u][v]

    def test_is_equivalence_relation(self):
        rng = random.Random(3)
        g = random_graph(rng, 10, 0.2)
        for u in range(10):
            assert g.connected(u, u)
            for v in range(10):
                assert g.connected(u, v) == g.connected(v, u)
        comp = g.components()
        for u in range(10):
            for v in range(10):
                assert g.connected(u, v) == (comp[u] == comp[v])


class TestTwoEdge:
    def test_cycle_is_two_edge_connected(self):
        g = OracleGraph(4)
        for u, v in [(0, 1), (1, 2), (2, 3)]:
            g.insert(EdgeKey(u, v))
        g.insert(EdgeKey(0, 3))
        for u in range(4):
            for v in range(4):
                assert g.two_edge_connected(u, v)

    def test_bridge_separates(self):
        g = OracleGraph(4)
        for u, v in [(0, 1), (1, 2), (2, 3)]:
            g.insert(EdgeKey(u, v))
        assert not g.two_edge_connected(0, 3)
        assert g.two_edge_connected(1, 1)

    def test_matches_every_edge_removal_definition(self):
        # Pins the path-edge restriction against the all-edges version.
        rng = random.Random(11)
        for _ in range(60):
            g = random_graph(rng, 8, 0.3)
            for u in range(8):
                for v in range(u, 8):
                    assert g.two_edge_connected(u, v) == two_edge_connected_every_edge(g, u, v)

    def test_implies_connected(self):
        rng = random.Random(13)
        g = random_graph(rng, 12, 0.2)
        for u in range(12):
            for v in range(12):
                if g.two_edge_connected(u, v):
                    assert g.connected(u, v)


class TestCutset:
    def test_single_edge(self):
        g = OracleGraph(4)
        g.insert(EdgeKey(0, 1))
        assert g.cutset({0}) == {EdgeKey(0, 1)}

    def test_disconnected_side_is_empty(self):
        g = OracleGraph(4)
        g.insert(EdgeKey(0, 1))
        g.insert(EdgeKey(2, 3))
        assert g.cutset({0, 1}) == set()

    def test_rejects_trivial_sides(self):
        g = OracleGraph(4)
        with pytest.raises(ParameterError):
            g.cutset(set())
        with pytest.raises(ParameterError):
            g.cutset({0, 1, 2, 3})

    def test_size_matches_incidence_count(self):
        rng = random.Random(21)
        for _ in range(20):
            g = random_graph(rng, 9, 0.3)
            side = {v for v in range(9) if rng.random() < 0.5}
            if not side or len(side) == 9:
                continue
            count = sum((e.x in side) != (e.y in side) for e in g.edges)
            assert len(g.cutset(side)) == count
