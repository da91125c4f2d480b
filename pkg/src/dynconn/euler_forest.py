"""Euler-tour tree forest with per-node payload bit vectors and XOR aggregates.

Each tree's Euler tour is kept as a sequence in a splay tree.  The tour of
a k-vertex tree holds one self-loop occurrence per vertex and two arc
occurrences per tree edge (2k - 1 occurrences total).  Payloads attach to
the self-loop occurrences, so the per-tree XOR aggregate counts every
vertex exactly once regardless of how often the walk revisits it.

Payloads and aggregates are arbitrary-width bit vectors represented as
Python ints; ``payload_words`` fixes the declared width in 64-bit words.

Tree identifiers are the current splay roots.  They stay valid across
payload updates (which adjust aggregates along the root path without
restructuring) but are invalidated by any link or cut touching the tree;
callers re-resolve with :meth:`EulerForest.find_tree`.

``branching`` is accepted for callers that want to flag a forest as the
high-degree query variant; the splay representation already gives
logarithmic-time operations, so it only documents intent.
"""

from .errors import ParameterError, UsageError


class _Occ:
    """One occurrence in an Euler tour: a vertex self-loop or an arc."""

    __slots__ = ("parent", "left", "right", "vertex", "payload", "agg", "loops")

    def __init__(self, vertex=None):
        self.parent = None
        self.left = None
        self.right = None
        self.vertex = vertex
        self.payload = 0
        self.agg = 0
        self.loops = 0 if vertex is None else 1


def _pull(x):
    agg = x.payload
    loops = 0 if x.vertex is None else 1
    l, r = x.left, x.right
    if l is not None:
        agg ^= l.agg
        loops += l.loops
    if r is not None:
        agg ^= r.agg
        loops += r.loops
    x.agg = agg
    x.loops = loops


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
        else:
            g.right = x
    _pull(p)
    _pull(x)


def _splay(x):
    while x.parent is not None:
        p = x.parent
        g = p.parent
        if g is None:
            _rotate(x)
        elif (g.left is p) == (p.left is x):
            _rotate(p)
            _rotate(x)
        else:
            _rotate(x)
            _rotate(x)


def _rightmost(x):
    while x.right is not None:
        x = x.right
    return x


def _join(a, b):
    """Concatenate sequences rooted at a and b; returns the new root."""
    if a is None:
        return b
    if b is None:
        return a
    r = _rightmost(a)
    _splay(r)
    r.right = b
    b.parent = r
    _pull(r)
    return r


def _split_before(x):
    """Split x's sequence into (prefix, suffix starting at x).

    Returns the prefix root (possibly None); x becomes the suffix root.
    """
    _splay(x)
    pre = x.left
    if pre is not None:
        pre.parent = None
        x.left = None
        _pull(x)
    return pre


class EulerForest:
    def __init__(self, n: int, payload_words: int, branching: int = 2):
        if n < 1:
            raise ParameterError(f"vertex count must be >= 1, got {n}")
        if payload_words < 0:
            raise ParameterError(f"payload_words must be >= 0, got {payload_words}")
        if branching < 2:
            raise ParameterError(f"branching must be >= 2, got {branching}")
        self.n = n
        self.payload_words = payload_words
        self.branching = branching
        self._loops = [_Occ(v) for v in range(n)]
        self._arcs = {}  # (u, v) directed -> _Occ

    def _check_vertex(self, v):
        if not 0 <= v < self.n:
            raise ParameterError(f"vertex {v} out of range [0, {self.n})")

    @staticmethod
    def _root(x):
        while x.parent is not None:
            x = x.parent
        return x

    def _reroot(self, v):
        """Rotate v's tour so it starts at the (v, v) occurrence; returns root."""
        x = self._loops[v]
        pre = _split_before(x)
        return _join(self._root(x), pre)

    def find_tree(self, v: int):
        """Identifier of the tree containing v (its current tour root)."""
        self._check_vertex(v)
        return self._root(self._loops[v])

    def _check_root(self, tree):
        if not isinstance(tree, _Occ) or tree.parent is not None:
            raise UsageError("stale or invalid tree identifier")

    def tree_size(self, tree) -> int:
        self._check_root(tree)
        return tree.loops

    def aggregate(self, tree) -> int:
        self._check_root(tree)
        return tree.agg

    def link(self, u: int, v: int):
        """Make (u, v) a tree edge; u and v must lie in distinct trees."""
        self._check_vertex(u)
        self._check_vertex(v)
        if self._root(self._loops[u]) is self._root(self._loops[v]):
            raise UsageError(f"link({u}, {v}): endpoints already in one tree")
        a = self._reroot(u)
        b = self._reroot(v)
        e1 = _Occ()
        e2 = _Occ()
        self._arcs[(u, v)] = e1
        self._arcs[(v, u)] = e2
        _join(_join(_join(a, e1), b), e2)

    def cut(self, u: int, v: int):
        """Remove tree edge (u, v), splitting its tree in two."""
        e1 = self._arcs.get((u, v))
        if e1 is None:
            raise UsageError(f"cut({u}, {v}): not a tree edge")
        e2 = self._arcs[(v, u)]
        _splay(e1)
        # Which arc occurs first in the sequence?
        node, prev = e2, None
        while node.parent is not None:
            prev = node
            node = node.parent
        first, second = (e2, e1) if prev is e1.left else (e1, e2)
        before = _split_before(first)
        _splay(second)
        after = second.right
        if after is not None:
            after.parent = None
            second.right = None
            _pull(second)
        # The tree rooted at `second` is now [first ... second]; everything
        # strictly between the two arcs is one component's complete tour,
        # and before + after is the other's (cyclically rotated).
        _splay(first)
        mid = first.right
        mid.parent = None
        first.right = None
        _splay(second)
        inner = second.left
        inner.parent = None
        second.left = None
        _join(before, after)
        del self._arcs[(u, v)]
        del self._arcs[(v, u)]
        # Poison the discarded arc occurrences so stale identifiers fail fast.
        e1.parent = e1
        e2.parent = e2

    def xor_payload(self, v: int, delta: int):
        """payload(v) ^= delta, keeping every ancestor aggregate consistent."""
        self._check_vertex(v)
        if delta < 0 or delta.bit_length() > 64 * self.payload_words:
            raise ParameterError(
                f"delta wider than {self.payload_words} words: {delta.bit_length()} bits"
            )
        x = self._loops[v]
        x.payload ^= delta
        while x is not None:
            x.agg ^= delta
            x = x.parent

    def payload(self, v: int) -> int:
        self._check_vertex(v)
        return self._loops[v].payload

    def has_edge(self, u: int, v: int) -> bool:
        return (u, v) in self._arcs

    def tree_edges(self):
        """Iterate current tree edges as ordered (u, v) pairs with u < v."""
        for (u, v) in self._arcs:
            if u < v:
                yield (u, v)

    def tree_vertices(self, tree):
        """Vertices of the identified tree, in tour order."""
        self._check_root(tree)
        out = []
        stack = [tree]
        while stack:
            node = stack.pop()
            if node.right is not None:
                stack.append(node.right)
            if node.vertex is not None:
                out.append(node.vertex)
            # In-order not required for a vertex set; plain DFS suffices.
            if node.left is not None:
                stack.append(node.left)
        return out

    def roots(self):
        """Current tree identifiers, one per tree."""
        seen = set()
        out = []
        for v in range(self.n):
            r = self._root(self._loops[v])
            if id(r) not in seen:
                seen.add(id(r))
                out.append(r)
        return out
