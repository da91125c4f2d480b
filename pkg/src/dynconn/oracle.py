"""Brute-force ground truth for connectivity and 2-edge-connectivity.

Everything here recomputes from the exact edge set on each query.  The
2-edge-connectivity test removes, one at a time, each edge of a concrete
u-v path and re-runs the reachability search: an edge off that path cannot
disconnect u from v (the path survives its removal), so restricting the
removals to path edges is equivalent to trying every edge.  A unit test
pins this equivalence against the literal remove-every-edge version.
"""

from .cutset import EdgeKey
from .errors import ParameterError, UsageError


def _adjacency(n, edges):
    adj = [[] for _ in range(n)]
    for e in edges:
        adj[e.x].append(e.y)
        adj[e.y].append(e.x)
    return adj


def _reachable(adj, u, v, skip=None):
    """Whether v is reachable from u, optionally ignoring one edge."""
    if u == v:
        return True
    seen = [False] * len(adj)
    seen[u] = True
    stack = [u]
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if skip is not None and (x, y) in (skip, (skip[1], skip[0])):
                continue
            if not seen[y]:
                if y == v:
                    return True
                seen[y] = True
                stack.append(y)
    return False


def _find_path(adj, u, v):
    """Vertex path from u to v, or None."""
    if u == v:
        return [u]
    prev = {u: None}
    stack = [u]
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if y not in prev:
                prev[y] = x
                if y == v:
                    path = [v]
                    while path[-1] is not None and prev[path[-1]] is not None:
                        path.append(prev[path[-1]])
                    path.reverse()
                    return path
                stack.append(y)
    return None


class OracleGraph:
    """Exact mirror of an update sequence; strict about preconditions."""

    def __init__(self, n: int):
        if n < 1:
            raise ParameterError(f"vertex count must be >= 1, got {n}")
        self.n = n
        self.edges: set[EdgeKey] = set()

    def _check_edge(self, e: EdgeKey):
        if not (0 <= e.x < e.y < self.n):
            raise ParameterError(f"edge {e} invalid for n={self.n}")

    def insert(self, e: EdgeKey):
        self._check_edge(e)
        if e in self.edges:
            raise UsageError(f"insert of present edge {e}")
        self.edges.add(e)

    def delete(self, e: EdgeKey):
        self._check_edge(e)
        if e not in self.edges:
            raise UsageError(f"delete of absent edge {e}")
        self.edges.remove(e)

    def apply(self, kind: str, e: EdgeKey):
        if kind == "I":
            self.insert(e)
        elif kind == "D":
            self.delete(e)
        else:
            raise ParameterError(f"unknown update kind {kind!r}")

    def connected(self, u: int, v: int) -> bool:
        return _reachable(_adjacency(self.n, self.edges), u, v)

    def two_edge_connected(self, u: int, v: int) -> bool:
        """True iff u, v stay connected after removal of any single edge."""
        adj = _adjacency(self.n, self.edges)
        path = _find_path(adj, u, v)
        if path is None:
            return False
        for a, b in zip(path, path[1:]):
            if not _reachable(adj, u, v, skip=(a, b)):
                return False
        return True

    def cutset(self, members) -> set[EdgeKey]:
        """All edges with exactly one endpoint in the vertex set ``members``."""
        s = set(members)
        if not s or len(s) >= self.n:
            raise ParameterError("cutset side must be a nonempty proper subset")
        return {e for e in self.edges if (e.x in s) != (e.y in s)}

    def components(self):
        adj = _adjacency(self.n, self.edges)
        comp = [-1] * self.n
        c = 0
        for s in range(self.n):
            if comp[s] != -1:
                continue
            comp[s] = c
            stack = [s]
            while stack:
                x = stack.pop()
                for y in adj[x]:
                    if comp[y] == -1:
                        comp[y] = c
                        stack.append(y)
            c += 1
        return comp
