"""Graphs, rooted trees and their poset structure, nested collections,
and the primed extension with one hyperedge per subtree.

Vertices are 1-based integers.  Vertex sets are frozensets; anything
order-sensitive sorts explicitly.  The rooted-tree partial order puts the
root on top: x <= y means y lies on the path from x to the root.
"""

from __future__ import annotations

import json


class ParseError(Exception):
    """Input document is malformed."""


class NotATree(Exception):
    """Graph is cyclic or disconnected where a tree is required."""


class BadRoot(Exception):
    """Designated root is not a vertex of the graph."""


class NoParent(Exception):
    """The root has no parent."""


class VertexInSet(Exception):
    """Vertex argument must lie outside the given set."""


class NotConnected(Exception):
    """Vertex set is not connected where connectivity is required."""


class SimpleGraph:
    """Undirected graph on vertices 1..n without loops or multi-edges."""

    __slots__ = ('n', 'edges', 'adj')

    def __init__(self, n, edges):
        if not isinstance(n, int) or n < 1:
            raise ValueError('vertex count must be a positive integer')
        seen = set()
        adj = {v: [] for v in range(1, n + 1)}
        for e in edges:
            u, v = e
            if not (isinstance(u, int) and isinstance(v, int)):
                raise ValueError('edge endpoints must be integers')
            if not (1 <= u <= n and 1 <= v <= n):
                raise ValueError('edge endpoint out of range: %r' % ((u, v),))
            if u == v:
                raise ValueError('self-loop at vertex %d' % u)
            key = (min(u, v), max(u, v))
            if key in seen:
                raise ValueError('duplicate edge %r' % (key,))
            seen.add(key)
            adj[u].append(v)
            adj[v].append(u)
        self.n = n
        self.edges = frozenset(seen)
        self.adj = {v: tuple(sorted(ws)) for v, ws in adj.items()}

    def neighbors(self, v):
        return self.adj[v]

    def degree(self, v):
        return len(self.adj[v])

    def hasEdge(self, u, v):
        return (min(u, v), max(u, v)) in self.edges

    def isConnectedSet(self, vertices):
        """True when the induced subgraph on `vertices` is connected.

        The empty set counts as (vacuously) connected."""
        vs = frozenset(vertices)
        if not vs:
            return True
        start = next(iter(vs))
        stack = [start]
        seen = {start}
        while stack:
            v = stack.pop()
            for w in self.adj[v]:
                if w in vs and w not in seen:
                    seen.add(w)
                    stack.append(w)
        return seen == vs

    def isConnected(self):
        return self.isConnectedSet(range(1, self.n + 1))

    def isTree(self):
        return len(self.edges) == self.n - 1 and self.isConnected()

    def connectedComponents(self, vertices):
        """Components of the induced subgraph, sorted by minimum vertex."""
        vs = set(vertices)
        comps = []
        while vs:
            start = min(vs)
            stack = [start]
            comp = {start}
            while stack:
                v = stack.pop()
                for w in self.adj[v]:
                    if w in vs and w not in comp:
                        comp.add(w)
                        stack.append(w)
            vs -= comp
            comps.append(frozenset(comp))
        return sorted(comps, key=min)

    def connectedSubsets(self, within=None):
        """All nonempty connected vertex subsets, ascending bitmask order
        (bit v-1 set when v is in the subset)."""
        if self.n > 20:
            raise ValueError('subset enumeration limited to 20 vertices')
        universe = frozenset(within) if within is not None else frozenset(range(1, self.n + 1))
        out = []
        for mask in range(1, 1 << self.n):
            vs = frozenset(v for v in range(1, self.n + 1) if mask >> (v - 1) & 1)
            if vs <= universe and self.isConnectedSet(vs):
                out.append(vs)
        return out


def simplePaths(g, i, j, allowed):
    """Simple paths from i to j whose interior vertices lie in `allowed`,
    as vertex tuples, in depth-first order with ascending neighbor choice."""
    if i == j:
        return [(i,)]
    allowed = frozenset(allowed)
    out = []
    path = [i]
    onPath = {i}

    def walk(v):
        for w in g.adj[v]:
            if w == j:
                out.append(tuple(path) + (j,))
            elif w in allowed and w not in onPath:
                path.append(w)
                onPath.add(w)
                walk(w)
                onPath.discard(w)
                path.pop()

    walk(i)
    return out


class RootedTree:
    """A tree with a chosen root; the root is the maximum of the vertex order."""

    __slots__ = ('graph', 'root', 'parent', 'children', 'depth', '_below', '_ext')

    def __init__(self, graph, root):
        if not isinstance(root, int) or not (1 <= root <= graph.n):
            raise BadRoot('root %r not among vertices 1..%d' % (root, graph.n))
        if not graph.isTree():
            raise NotATree('graph is not a tree')
        parent = {}
        children = {}
        depth = {root: 0}
        order = [root]
        queue = [root]
        while queue:
            v = queue.pop(0)
            kids = []
            for w in graph.adj[v]:
                if w != parent.get(v):
                    parent[w] = v
                    depth[w] = depth[v] + 1
                    kids.append(w)
                    queue.append(w)
                    order.append(w)
            children[v] = tuple(sorted(kids))
        self.graph = graph
        self.root = root
        self.parent = parent
        self.children = children
        self.depth = depth
        below = {}
        for v in reversed(order):
            s = {v}
            for c in children[v]:
                s |= below[c]
            below[v] = frozenset(s)
        self._below = below
        self._ext = None

    @property
    def n(self):
        return self.graph.n

    def vertices(self):
        return range(1, self.graph.n + 1)

    def parentOf(self, x):
        if x == self.root:
            raise NoParent('vertex %d is the root' % x)
        return self.parent[x]

    def childrenOf(self, x):
        return self.children[x]

    def depthOf(self, x):
        return self.depth[x]

    def weaklyBelow(self, x):
        """I_x: the subtree of x, including x."""
        return self._below[x]

    def strictlyBelow(self, x):
        return self._below[x] - {x}

    def weaklyAbove(self, x):
        out = [x]
        while x != self.root:
            x = self.parent[x]
            out.append(x)
        return frozenset(out)

    def strictlyAbove(self, x):
        return self.weaklyAbove(x) - {x}

    def joinOf(self, x, y):
        """Least common ancestor: the minimum vertex weakly above both."""
        while self.depth[x] > self.depth[y]:
            x = self.parent[x]
        while self.depth[y] > self.depth[x]:
            y = self.parent[y]
        while x != y:
            x = self.parent[x]
            y = self.parent[y]
        return x

    def childless(self):
        """Minimal vertices of the tree order, ascending."""
        return tuple(v for v in self.vertices() if not self.children[v])

    def extension(self):
        if self._ext is None:
            self._ext = ClusterHypergraph(self)
        return self._ext


def parseGraph(document):
    """Parse the graph JSON document into a SimpleGraph."""
    try:
        obj = json.loads(document)
    except (json.JSONDecodeError, TypeError) as exc:
        raise ParseError('invalid JSON: %s' % exc) from None
    if not isinstance(obj, dict):
        raise ParseError('document must be a JSON object')
    if 'vertices' not in obj or 'edges' not in obj:
        raise ParseError('document needs "vertices" and "edges"')
    n = obj['vertices']
    edges = obj['edges']
    if not isinstance(n, int) or isinstance(n, bool):
        raise ParseError('"vertices" must be an integer')
    if not isinstance(edges, list) or any(
            not isinstance(e, list) or len(e) != 2 for e in edges):
        raise ParseError('"edges" must be a list of [u,v] pairs')
    try:
        return SimpleGraph(n, [tuple(e) for e in edges])
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def parseTree(document):
    """Parse and validate a rooted tree document.

    The document must carry a "root" key on top of the graph fields."""
    g = parseGraph(document)
    try:
        obj = json.loads(document)
    except (json.JSONDecodeError, TypeError):
        raise ParseError('invalid JSON') from None
    if 'root' not in obj:
        raise ParseError('document needs "root"')
    root = obj['root']
    if not isinstance(root, int) or isinstance(root, bool):
        raise ParseError('"root" must be an integer')
    if not (1 <= root <= g.n):
        raise BadRoot('root %r not among vertices 1..%d' % (root, g.n))
    return RootedTree(g, root)


def isNestedCollection(g, sets):
    """Nested-or-disjoint family whose pairwise-disjoint subfamilies are
    exactly the connected components of their unions.

    The component condition reduces to: every member is nonempty and
    connected, and no two disjoint members are joined by an edge."""
    family = [frozenset(s) for s in sets]
    for s in family:
        for v in s:
            if not (1 <= v <= g.n):
                raise ValueError('set member %r outside the graph' % (v,))
        if not s or not g.isConnectedSet(s):
            return False
    for a in range(len(family)):
        for b in range(a + 1, len(family)):
            s, t = family[a], family[b]
            if s <= t or t <= s:
                continue
            if s & t:
                return False
            if any(g.hasEdge(u, v) for u in s for v in t):
                return False
    return True


def isMaximalNested(g, sets, universe=None):
    """Maximality by brute force: the family covers `universe` and no
    further subset of it can be added.  Test-scale only."""
    family = [frozenset(s) for s in sets]
    covered = frozenset().union(*family)
    if universe is None:
        universe = covered
    universe = frozenset(universe)
    if not isNestedCollection(g, family) or covered != universe:
        return False
    have = set(family)
    for cand in g.connectedSubsets(within=universe):
        if cand in have:
            continue
        if isNestedCollection(g, family + [cand]):
            return False
    return True


class Cluster:
    """The family {I_x} of subtrees of a rooted tree, one per vertex."""

    __slots__ = ('sets', 'root')

    def __init__(self, sets, root):
        self.sets = dict(sets)
        self.root = root

    def __iter__(self):
        return iter(sorted(self.sets.items()))

    def __getitem__(self, x):
        return self.sets[x]


def rootedCluster(t):
    return Cluster({x: t.weaklyBelow(x) for x in t.vertices()}, t.root)


def oplusOminus(g, S, i):
    """Split S+i into the connected component containing i and the rest."""
    S = frozenset(S)
    if i in S:
        raise VertexInSet('vertex %d already lies in the set' % i)
    union = S | {i}
    stack = [i]
    comp = {i}
    while stack:
        v = stack.pop()
        for w in g.adj[v]:
            if w in union and w not in comp:
                comp.add(w)
                stack.append(w)
    return frozenset(comp), frozenset(union - comp)


class ClusterHypergraph:
    """The primed extension of a rooted tree plus one hyperedge per subtree.

    Every degree-1 vertex x of the base tree gains a primed neighbor x',
    ordered below x except at the root, where x' sits above.  Primed
    vertices are numbered n+1.. in ascending order of their base vertex.
    The hyperedge for I_x spans the extended-graph neighbors of I_x that
    lie outside I_x: the parent of x and the primed vertices under x."""

    __slots__ = ('tree', 'primedOf', 'baseOf', 'rootPrime', 'hyperedges',
                 'minimalPrimes', 'extAdj')

    def __init__(self, tree):
        g = tree.graph
        n = g.n
        degreeOne = [v for v in range(1, n + 1) if g.degree(v) == 1]
        primedOf = {}
        for k, leaf in enumerate(sorted(degreeOne)):
            primedOf[leaf] = n + 1 + k
        baseOf = {p: leaf for leaf, p in primedOf.items()}
        rootPrime = primedOf.get(tree.root)
        extAdj = {v: list(g.adj[v]) for v in range(1, n + 1)}
        for leaf, p in primedOf.items():
            extAdj[leaf].append(p)
            extAdj[p] = [leaf]
        minimalPrimes = {}
        for x in tree.vertices():
            ls = frozenset(primedOf[v] for v in tree.weaklyBelow(x)
                           if not tree.children[v] and v != tree.root)
            minimalPrimes[x] = ls
        hyperedges = {}
        for x in tree.vertices():
            endpoints = set(minimalPrimes[x])
            if x != tree.root:
                endpoints.add(tree.parent[x])
            elif rootPrime is not None:
                endpoints.add(rootPrime)
            hyperedges[x] = frozenset(endpoints)
        self.tree = tree
        self.primedOf = primedOf
        self.baseOf = baseOf
        self.rootPrime = rootPrime
        self.hyperedges = hyperedges
        self.minimalPrimes = minimalPrimes
        self.extAdj = {v: tuple(sorted(ws)) for v, ws in extAdj.items()}

    def isPrimed(self, v):
        return v in self.baseOf

    def vertices(self):
        return sorted(self.extAdj)

    def primedBelow(self, x):
        """Primed vertices strictly below x in the extended order."""
        if x in self.baseOf:
            return frozenset()
        return self.minimalPrimes[x]

    def parentExt(self, v):
        """Cover relation upward in the extended order; None at the top."""
        t = self.tree
        if v == self.rootPrime:
            return None
        if v in self.baseOf:
            return self.baseOf[v]
        if v == t.root:
            return self.rootPrime
        return t.parent[v]

    def depthExt(self, v):
        t = self.tree
        if v == self.rootPrime:
            return -1
        if v in self.baseOf:
            return t.depth[self.baseOf[v]] + 1
        return t.depth[v]

    def joinExt(self, x, y):
        while self.depthExt(x) > self.depthExt(y):
            x = self.parentExt(x)
        while self.depthExt(y) > self.depthExt(x):
            y = self.parentExt(y)
        while x != y:
            x = self.parentExt(x)
            y = self.parentExt(y)
        return x

    def pathExt(self, x, y):
        """The unique simple path from x to y in the extended tree."""
        j = self.joinExt(x, y)
        up = []
        v = x
        while v != j:
            up.append(v)
            v = self.parentExt(v)
        down = []
        v = y
        while v != j:
            down.append(v)
            v = self.parentExt(v)
        return tuple(up) + (j,) + tuple(reversed(down))


def extendAndHypergraph(t):
    return t.extension()


def posetQuery(t, kind, x, y=None):
    """Poset lookups on a rooted tree (join works on the primed extension)."""
    if kind == 'parent':
        return t.parentOf(x)
    if kind == 'children':
        return t.childrenOf(x)
    if kind == 'strictlyBelow':
        return t.strictlyBelow(x)
    if kind == 'weaklyBelow':
        return t.weaklyBelow(x)
    if kind == 'strictlyAbove':
        return t.strictlyAbove(x)
    if kind == 'join':
        if y is None:
            raise ValueError('join needs two vertices')
        ext = t.extension()
        return ext.joinExt(x, y)
    if kind == 'minimalPrimedBelow':
        return t.extension().primedBelow(x)
    raise ValueError('unknown query %r' % (kind,))
