"""Dynamic weighted forest answering maximum-weight-edge-on-path queries.

A splay-based link-cut tree in which every forest edge is represented by
its own node sitting between its endpoints on the preferred path, carrying
the edge's weight (its tier label).  Vertex nodes carry weight -1 so a
path maximum always lands on an edge node.  Weights are immutable once an
edge is linked; relabeling is cut + link.
"""

from .errors import ParameterError, UsageError


class _Node:
    __slots__ = ("parent", "left", "right", "flip", "weight", "best", "label")

    def __init__(self, label, weight):
        self.parent = None
        self.left = None
        self.right = None
        self.flip = False
        self.weight = weight
        self.best = self
        self.label = label  # vertex id, or (u, v) for edge nodes


def _pull(x):
    best = x
    if x.left is not None and x.left.best.weight > best.weight:
        best = x.left.best
    if x.right is not None and x.right.best.weight > best.weight:
        best = x.right.best
    x.best = best


def _push(x):
    if x.flip:
        x.left, x.right = x.right, x.left
        if x.left is not None:
            x.left.flip = not x.left.flip
        if x.right is not None:
            x.right.flip = not x.right.flip
        x.flip = False


def _is_splay_root(x):
    p = x.parent
    return p is None or (p.left is not x and p.right is not x)


def _rotate(x):
    p = x.parent
    g = p.parent
    if p.left is x:
        p.left = x.right
        if x.right is not None:
            x.right.parent = p
        x.right = p
    else:
        p.right = x.left
        if x.left is not None:
            x.left.parent = p
        x.left = p
    p.parent = x
    x.parent = g
    if g is not None:
        if g.left is p:
            g.left = x
        elif g.right is p:
            g.right = x
        # otherwise g holds p only by path-parent pointer; nothing to fix
    _pull(p)
    _pull(x)


def _splay(x):
    path = [x]
    y = x
    while not _is_splay_root(y):
        y = y.parent
        path.append(y)
    for node in reversed(path):
        _push(node)
    while not _is_splay_root(x):
        p = x.parent
        if _is_splay_root(p):
            _rotate(x)
        else:
            g = p.parent
            if (g.left is p) == (p.left is x):
                _rotate(p)
                _rotate(x)
            else:
                _rotate(x)
                _rotate(x)


def _access(x):
    last = None
    y = x
    while y is not None:
        _splay(y)
        y.right = last
        _pull(y)
        last = y
        y = y.parent
    _splay(x)


def _make_root(x):
    _access(x)
    x.flip = not x.flip
    _push(x)


def _find_root(x):
    _access(x)
    while x.left is not None:
        _push(x)
        x = x.left
    _splay(x)
    return x


class WeightedForest:
    def __init__(self, n: int):
        if n < 1:
            raise ParameterError(f"vertex count must be >= 1, got {n}")
        self.n = n
        self._verts = [_Node(v, -1) for v in range(n)]
        self._edges = {}  # (min, max) -> edge node

    def _check_vertex(self, v):
        if not 0 <= v < self.n:
            raise ParameterError(f"vertex {v} out of range [0, {self.n})")

    def connected(self, u: int, v: int) -> bool:
        self._check_vertex(u)
        self._check_vertex(v)
        if u == v:
            return True
        return _find_root(self._verts[u]) is _find_root(self._verts[v])

    def has_edge(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self._edges

    def edges(self):
        """Current (u, v, weight) triples, u < v."""
        return [(u, v, e.weight) for (u, v), e in self._edges.items()]

    def link(self, u: int, v: int, weight: int):
        self._check_vertex(u)
        self._check_vertex(v)
        if weight < 0:
            raise ParameterError(f"edge weight must be >= 0, got {weight}")
        if u == v:
            raise UsageError(f"link({u}, {u}): self-loop")
        if self.connected(u, v):
            raise UsageError(f"link({u}, {v}): endpoints already in one tree")
        e = _Node((min(u, v), max(u, v)), weight)
        nu, nv = self._verts[u], self._verts[v]
        _make_root(nu)
        nu.parent = e
        e.parent = nv
        self._edges[(min(u, v), max(u, v))] = e

    def cut(self, u: int, v: int):
        key = (min(u, v), max(u, v))
        e = self._edges.get(key)
        if e is None:
            raise UsageError(f"cut({u}, {v}): edge not present")
        _make_root(self._verts[u])
        _access(self._verts[v])
        _splay(e)
        _push(e)
        e.left.parent = None
        e.right.parent = None
        e.left = None
        e.right = None
        _pull(e)
        del self._edges[key]

    def path_max(self, u: int, v: int):
        """An edge of maximum weight on the u-v tree path, with its weight."""
        if u == v:
            raise UsageError(f"path_max({u}, {u}): empty path")
        if not self.connected(u, v):
            raise UsageError(f"path_max({u}, {v}): not connected")
        _make_root(self._verts[u])
        _access(self._verts[v])
        best = self._verts[v].best
        return best.label, best.weight
