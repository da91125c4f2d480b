"""2-edge-connectivity on a two-forest certificate.

Two independent connectivity stacks run side by side: the first over the
full graph (maintaining spanning forest F1), the second over the graph
minus F1 (maintaining F2).  F1 union F2 is a 2-edge-connectivity
certificate: it preserves, for every vertex pair, whether the pair is
2-edge connected in the full graph, while never holding 2n or more edges.

Forest-change events drained from the first stack drive edge updates of
the second (an edge promoted into F1 leaves the second stack's graph, a
demoted one re-enters), and both stacks' events drive the incrementally
maintained certificate, which feeds a pluggable 2-edge-connectivity
backend.  The shipped backend recomputes bridges over the certificate on
every query; any backend honoring the same delta/query contract gives
identical answers on identical certificates.
"""

from .connectivity import ADDED, Config, TierStack
from .cutset import EDGE_LIST, EdgeKey
from .errors import ParameterError, UsageError


def find_bridges(edges) -> set[EdgeKey]:
    """All bridges of the graph given by ``edges`` (iterative lowpoint DFS)."""
    adj = {}
    for e in edges:
        adj.setdefault(e.x, []).append(e.y)
        adj.setdefault(e.y, []).append(e.x)
    order = {}
    low = {}
    bridges = set()
    counter = 0
    for start in adj:
        if start in order:
            continue
        stack = [(start, None, iter(adj[start]))]
        order[start] = low[start] = counter
        counter += 1
        while stack:
            v, parent, it = stack[-1]
            advanced = False
            for w in it:
                if w not in order:
                    order[w] = low[w] = counter
                    counter += 1
                    stack.append((w, v, iter(adj[w])))
                    advanced = True
                    break
                if w != parent:  # back edge (simple graph: one parent edge)
                    low[v] = min(low[v], order[w])
            if not advanced:
                stack.pop()
                if stack:
                    p = stack[-1][0]
                    low[p] = min(low[p], low[v])
                    if low[v] > order[p]:
                        bridges.add(EdgeKey.of(p, v))
    return bridges


def bridge_backend_query(edges, u: int, v: int) -> bool:
    """2-edge connected iff u and v are connected with all bridges removed."""
    if u == v:
        return True
    bridges = find_bridges(edges)
    adj = {}
    for e in edges:
        if e in bridges:
            continue
        adj.setdefault(e.x, []).append(e.y)
        adj.setdefault(e.y, []).append(e.x)
    if u not in adj:
        return False
    seen = {u}
    stack = [u]
    while stack:
        x = stack.pop()
        for y in adj.get(x, ()):
            if y == v:
                return True
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return False


class RecomputingBridgeBackend:
    """Desk-scale 2-edge backend: store the certificate, recompute per query."""

    def __init__(self):
        self.edges: set[EdgeKey] = set()

    def edge_added(self, e: EdgeKey):
        self.edges.add(e)

    def edge_removed(self, e: EdgeKey):
        self.edges.discard(e)

    def query(self, u: int, v: int) -> bool:
        return bridge_backend_query(self.edges, u, v)


class TwoEdgeStack:
    def __init__(self, config: Config, seed1: int, seed2: int, backend=None):
        if seed1 == seed2:
            raise UsageError("the two stacks must use independent seeds")
        if config.n < 2:
            raise ParameterError(f"n must be >= 2, got {config.n}")
        from dataclasses import replace

        self.n = config.n
        self.conn1 = TierStack(replace(config, seed=seed1))
        self.conn2 = TierStack(replace(config, seed=seed2))
        self._edge_list_mode = config.mode == EDGE_LIST
        self.f1: set[EdgeKey] = set()
        self.f2: set[EdgeKey] = set()
        self.cert_edges: set[EdgeKey] = set()
        self.backend = backend if backend is not None else RecomputingBridgeBackend()

    # -- updates ---------------------------------------------------------

    def insert(self, e: EdgeKey):
        if self._edge_list_mode and e in self.conn1.edges():
            raise UsageError(f"insert of present edge {e}")
        self.conn1.insert(e)
        self.conn2.insert(e)
        self._propagate(deleted=None)

    def delete(self, e: EdgeKey):
        if self._edge_list_mode and e not in self.conn1.edges():
            raise UsageError(f"delete of absent edge {e}")
        in_f1 = e in self.conn1.tier_of_edge
        self.conn1.delete(e)
        if not in_f1:
            self.conn2.delete(e)
        self._propagate(deleted=e)

    def _propagate(self, deleted: EdgeKey | None):
        """Feed F1 changes into the second stack, then both forests' changes
        into the certificate and backend, in application order."""
        ev1 = self.conn1.drain_events()
        for ev in ev1:
            if ev.kind == ADDED:
                # The edge left E1 by joining F1.  A sublinear-mode phantom
                # never was in E1; deleting it from conn2 is the accepted
                # (probability < 1/n^c) sketch corruption of that mode.
                if ev.edge != deleted:
                    self.conn2.delete(ev.edge)
            else:
                # Demoted from F1, so it re-enters E1 unless the update
                # itself just removed it from the graph.
                if ev.edge != deleted:
                    self.conn2.insert(ev.edge)
        ev2 = self.conn2.drain_events()
        for events, forest in ((ev1, self.f1), (ev2, self.f2)):
            for ev in events:
                if ev.kind == ADDED:
                    forest.add(ev.edge)
                else:
                    forest.discard(ev.edge)
                self._sync_cert(ev.edge)

    def _sync_cert(self, e: EdgeKey):
        present = e in self.f1 or e in self.f2
        if present and e not in self.cert_edges:
            self.cert_edges.add(e)
            self.backend.edge_added(e)
        elif not present and e in self.cert_edges:
            self.cert_edges.remove(e)
            self.backend.edge_removed(e)

    # -- queries -----------------------------------------------------------

    def connected(self, u: int, v: int) -> bool:
        return self.conn1.connected(u, v)

    def two_edge_connected(self, u: int, v: int) -> bool:
        return self.backend.query(u, v)

    # -- debug ---------------------------------------------------------------

    def check_invariants(self):
        assert self.f1 == self.conn1.spanning_forest(), "f1 event mirror drifted"
        assert self.f2 == self.conn2.spanning_forest(), "f2 event mirror drifted"
        assert self.cert_edges == self.f1 | self.f2, "certificate != F1 u F2"
        assert len(self.cert_edges) < 2 * self.n, "certificate too large"
        assert self.backend.edges == self.cert_edges, "backend drifted"
        if self._edge_list_mode:
            e1 = self.conn1.edges() - self.conn1.spanning_forest()
            assert self.conn2.edges() == e1, "second stack's edge set != E minus F1"
        return True
