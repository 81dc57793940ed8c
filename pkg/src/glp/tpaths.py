"""Hyper T-path diagrams over the primed extension of a rooted tree.

A diagram is a set of nodes labelled by extended-tree vertices, joined
by even/odd connections labelled by extended edges or by the hyperedge
of a subtree.  Valid diagrams for a target set S expand Y_S: the sum of
their weights (odd labels over even labels) equals the rooted-cluster
expansion produced by lpcalc.yGeneral, term by term.

Connections are set-like: no two connections of a diagram share parity,
label and incident node set.  Weights are RationalFn values and are
always Laurent monomials with coefficient 1 in cluster variables.
"""

from __future__ import annotations

import itertools

from .algebra import LaurentPoly, RationalFn, yvar
from .graphcore import NotConnected

EVEN = 'even'
ODD = 'odd'


class InvalidPath(Exception):
    """Diagram fails validation where a valid one is required."""


class NotPasteable(Exception):
    """Neither side carries the odd connection a pasting step needs."""


class BudgetExceeded(Exception):
    """Exhaustive search outgrew its frontier cap."""


class NotAPath(Exception):
    """The underlying graph must be a path graph."""


class TNode:
    """One diagram node: an id, a label (vertex of the primed extension),
    and a boundary flag."""

    __slots__ = ('id', 'label', 'boundary')

    def __init__(self, nid, label, boundary=False):
        self.id = nid
        self.label = label
        self.boundary = bool(boundary)

    def __repr__(self):
        flag = ', boundary' if self.boundary else ''
        return 'TNode(%d, label=%d%s)' % (self.id, self.label, flag)


class TConnection:
    """One diagram connection.

    `label` is ('edge', (u, v)) for an extended-tree edge (u < v) or
    ('hyper', x) for the hyperedge of the subtree under x.  `incident`
    is the sorted tuple of joined node ids."""

    __slots__ = ('id', 'parity', 'label', 'incident')

    def __init__(self, cid, parity, label, incident):
        if parity not in (EVEN, ODD):
            raise ValueError('parity must be even or odd')
        self.id = cid
        self.parity = parity
        self.label = label
        self.incident = tuple(sorted(incident))

    def __repr__(self):
        return 'TConnection(%d, %s, %r, %r)' % (
            self.id, self.parity, self.label, self.incident)


class HyperTPath:
    """A hyper T-path diagram for a target set over a rooted tree."""

    __slots__ = ('tree', 'hypergraph', 'targetSet', 'nodes', 'connections')

    def __init__(self, tree, hypergraph, targetSet, nodes, connections):
        self.tree = tree
        self.hypergraph = hypergraph
        self.targetSet = frozenset(targetSet)
        self.nodes = tuple(sorted(nodes, key=lambda nd: nd.id))
        self.connections = tuple(sorted(connections, key=lambda c: c.id))

    def nodeById(self):
        return {nd.id: nd for nd in self.nodes}

    def incidence(self):
        """Map node id -> tuple of connections touching it."""
        at = {nd.id: [] for nd in self.nodes}
        for c in self.connections:
            for nid in c.incident:
                at[nid].append(c)
        return {nid: tuple(cs) for nid, cs in at.items()}

    def boundaryNodes(self):
        return tuple(nd for nd in self.nodes if nd.boundary)

    def __repr__(self):
        return 'HyperTPath(S=%s, %d nodes, %d connections)' % (
            sorted(self.targetSet), len(self.nodes), len(self.connections))


def boundaryLabels(hg, S):
    """S': extended-tree neighbors of S that are not themselves in S."""
    out = set()
    for v in S:
        out.update(hg.extAdj[v])
    return frozenset(out - set(S))


def _labelEndpoints(hg, label):
    """Sorted endpoint vertices that a connection label must join."""
    kind, payload = label
    if kind == 'edge':
        return tuple(sorted(payload))
    return tuple(sorted(hg.hyperedges[payload]))


def _labelName(hg, v):
    if hg.isPrimed(v):
        return "%d'" % hg.baseOf[v]
    return '%d' % v


def _edgeLabel(u, v):
    return ('edge', (min(u, v), max(u, v)))


def _topOf(t, S):
    """The member of S closest to the root (unique when S is connected)."""
    return min(S, key=lambda v: (t.depthOf(v), v))


def _leafPrimesUnder(hg, z):
    """Minimal primed vertices below z in the extended order."""
    if z == hg.rootPrime:
        return hg.minimalPrimes[hg.tree.root]
    if hg.isPrimed(z):
        return frozenset()
    return hg.minimalPrimes[z]


def _requiredEvens(hg, S, x, y):
    """Even labels, in order, that every diagram path from boundary x to
    boundary y must use.  Primed endpoints contribute no label; the
    label of the join is skipped; when one endpoint sits above the top
    of S, everything from the top upward is skipped."""
    t = hg.tree
    above = hg.parentExt(_topOf(t, S))
    if x == above:
        return list(reversed(_requiredEvens(hg, S, y, x)))
    path = hg.pathExt(x, y)
    if y == above:
        chain = path[:-2]
    else:
        j = hg.joinExt(x, y)
        chain = tuple(v for v in path if v != j)
    return [('hyper', v) for v in chain if not hg.isPrimed(v)]


def _allowedInternal(hg, x, y):
    """Labels permitted on internal nodes of any boundary path x..y:
    the chain between them plus the leaf primes under their join."""
    j = hg.joinExt(x, y)
    path = hg.pathExt(x, y)
    return _leafPrimesUnder(hg, j) | (set(path) - {x, y}) | {j}


def bergePaths(p, startId, endId):
    """All simple paths of the incidence structure from one node to
    another: nodes and connections each used at most once, consecutive
    nodes sharing a connection.  Yields (node ids, connections)."""
    at = p.incidence()
    out = []
    nodeSeq = [startId]
    connSeq = []
    usedN = {startId}
    usedC = set()

    def walk(v):
        if v == endId:
            out.append((tuple(nodeSeq), tuple(connSeq)))
            return
        for c in at[v]:
            if c.id in usedC:
                continue
            usedC.add(c.id)
            connSeq.append(c)
            for w in c.incident:
                if w == v or w in usedN:
                    continue
                usedN.add(w)
                nodeSeq.append(w)
                walk(w)
                nodeSeq.pop()
                usedN.discard(w)
            connSeq.pop()
            usedC.discard(c.id)

    walk(startId)
    return out


def validate(p):
    """Check the nine diagram rules plus connectivity.

    Returns (ok, violations); each violation is (rule, message) with
    rule 0 reserved for a disconnected diagram.  Never raises."""
    hg = p.hypergraph
    t = p.tree
    S = p.targetSet
    nodes = p.nodeById()
    at = p.incidence()
    bad = []

    seenConn = set()
    for c in p.connections:
        key = (c.parity, c.label, c.incident)
        if key in seenConn:
            bad.append((0, 'connections form a set; %r repeats' % (key,)))
        seenConn.add(key)
        want = _labelEndpoints(hg, c.label)
        got = tuple(sorted(nodes[nid].label for nid in c.incident))
        if got != want:
            bad.append((1, 'connection %d labelled %r joins %s, needs %s' % (
                c.id, c.label, list(got), list(want))))

    sPrime = boundaryLabels(hg, S)
    bd = sorted((nd for nd in p.nodes if nd.boundary),
                key=lambda nd: (nd.label, nd.id))
    gotLabels = tuple(sorted(nd.label for nd in bd))
    if gotLabels != tuple(sorted(sPrime)):
        bad.append((2, 'boundary labels %s, need %s exactly once each' % (
            list(gotLabels), sorted(sPrime))))

    for nd in p.nodes:
        evens = [c for c in at[nd.id] if c.parity == EVEN]
        odds = [c for c in at[nd.id] if c.parity == ODD]
        if nd.boundary:
            if evens:
                bad.append((4, 'boundary node %d touches an even connection'
                            % nd.id))
        elif nd.label in S:
            if len(evens) != 1 or not odds:
                bad.append((5, 'internal node %d (label %s) has %d even, %d '
                            'odd; needs exactly 1 even and at least 1 odd' % (
                                nd.id, _labelName(hg, nd.label),
                                len(evens), len(odds))))
        else:
            if len(evens) != 1 or len(odds) != 1:
                bad.append((6, 'internal node %d (label %s) has %d even, %d '
                            'odd; needs exactly one of each' % (
                                nd.id, _labelName(hg, nd.label),
                                len(evens), len(odds))))

    if p.nodes:
        seen = {p.nodes[0].id}
        stack = [p.nodes[0].id]
        while stack:
            v = stack.pop()
            for c in at[v]:
                for w in c.incident:
                    if w not in seen:
                        seen.add(w)
                        stack.append(w)
        if len(seen) != len(p.nodes):
            bad.append((0, 'diagram is not connected'))

    # Rules 7-8 pin the even census outright: each unprimed member of
    # S and S' other than the top of S and its upward neighbor labels
    # exactly one even connection, and no other even labels occur.
    top = _topOf(t, S)
    above = hg.parentExt(top)
    wantEven = {('hyper', y) for y in set(S) | set(sPrime)
                if not hg.isPrimed(y) and y not in (top, above)}
    evenCount = {}
    for c in p.connections:
        if c.parity == EVEN:
            evenCount[c.label] = evenCount.get(c.label, 0) + 1
    for lab in sorted(wantEven):
        k = evenCount.pop(lab, 0)
        if k != 1:
            bad.append((7, 'even label %r appears %d times; rules 7-8 '
                        'force exactly one' % (lab, k)))
    for lab in sorted(evenCount):
        bad.append((7, 'even label %r cannot appear in any valid diagram'
                    % (lab,)))

    covered = set()
    for a, b in itertools.combinations(bd, 2):
        seqRule = 8 if above in (a.label, b.label) else 7
        required = _requiredEvens(hg, S, a.label, b.label)
        allowed = _allowedInternal(hg, a.label, b.label)
        badSeq = badLabel = False
        for nodeIds, conns in bergePaths(p, a.id, b.id):
            covered.update(c.id for c in conns)
            evens = [c.label for c in conns if c.parity == EVEN]
            if not badSeq and evens != required:
                bad.append((seqRule, 'path from %s to %s uses evens %s, '
                            'needs %s' % (_labelName(hg, a.label),
                                          _labelName(hg, b.label),
                                          evens, required)))
                badSeq = True
            if not badLabel:
                stray = [nid for nid in nodeIds[1:-1]
                         if nodes[nid].label not in allowed]
                if stray:
                    bad.append((9, 'path from %s to %s passes a node '
                                'labelled %s, outside its chain' % (
                                    _labelName(hg, a.label),
                                    _labelName(hg, b.label),
                                    _labelName(hg, nodes[stray[0]].label))))
                    badLabel = True
            if badSeq and badLabel:
                break
    if not bad:
        # Connectivity in the strong sense the even-census argument
        # needs: every connection sits on some boundary-pair path, so
        # nothing decorates the diagram invisibly.
        for c in p.connections:
            if c.id not in covered:
                bad.append((0, 'connection %d lies on no path between '
                            'boundary nodes' % c.id))
    return (not bad), bad


def _weightMono(p):
    exps = {}
    for c in p.connections:
        kind, payload = c.label
        if kind != 'hyper':
            continue
        v = yvar(p.tree.weaklyBelow(payload))
        exps[v] = exps.get(v, 0) + (1 if c.parity == ODD else -1)
    return tuple(sorted((v, e) for v, e in exps.items() if e))


def weight(p):
    """Weight of a valid diagram: product of odd connection weights over
    product of even ones.  Hyperedge labels weigh the subtree variable,
    plain edges weigh 1."""
    ok, bad = validate(p)
    if not ok:
        raise InvalidPath('; '.join('rule %d: %s' % v for v in bad))
    return RationalFn(LaurentPoly.monomial(_weightMono(p)))


def sumWeights(paths):
    """Sum of diagram weights, in canonical form.  Inputs are trusted to
    be valid (enumerate's outputs are)."""
    acc = LaurentPoly()
    for p in paths:
        acc = acc + LaurentPoly.monomial(_weightMono(p))
    return RationalFn(acc)


class _Build:
    """Incremental diagram assembly with sequential ids."""

    def __init__(self, t, S):
        self.t = t
        self.hg = t.extension()
        self.S = frozenset(S)
        self.nodes = []
        self.conns = []

    def node(self, label, boundary=False):
        nd = TNode(len(self.nodes), label, boundary)
        self.nodes.append(nd)
        return nd

    def conn(self, parity, label, incident):
        c = TConnection(len(self.conns), parity, label,
                        [nd.id for nd in incident])
        self.conns.append(c)
        return c

    def done(self):
        return HyperTPath(self.t, self.hg, self.S, self.nodes, self.conns)


def _singlePlus(t, y):
    """The diagram that keeps y whole: odd edge to each child, even
    subtree hyperedge per child, one odd hyperedge for y itself."""
    hg = t.extension()
    b = _Build(t, [y])
    kids = t.childrenOf(y)
    if not kids:
        lo = b.node(t.parentOf(y), boundary=True)
        hi = b.node(hg.primedOf[y], boundary=True)
        b.conn(ODD, ('hyper', y), [lo, hi])
        return b.done()
    primeNodes = []
    for c in kids:
        bd = b.node(c, boundary=True)
        mid = b.node(y)
        b.conn(ODD, _edgeLabel(c, y), [bd, mid])
        ls = [b.node(q) for q in sorted(hg.minimalPrimes[c])]
        b.conn(EVEN, ('hyper', c), [mid] + ls)
        primeNodes.extend(ls)
    top = hg.parentExt(y)
    inc = list(primeNodes)
    if top is not None:
        inc.append(b.node(top, boundary=True))
    b.conn(ODD, ('hyper', y), inc)
    return b.done()


def _singleChild(t, y, c0):
    """The diagram that routes y through the distinguished child c0."""
    hg = t.extension()
    b = _Build(t, [y])
    bd0 = b.node(c0, boundary=True)
    grand = t.childrenOf(c0)
    if not grand:
        l0 = [b.node(hg.primedOf[c0])]
        b.conn(ODD, _edgeLabel(c0, hg.primedOf[c0]), [bd0] + l0)
    else:
        l0 = []
        for w in grand:
            ls = [b.node(q) for q in sorted(hg.minimalPrimes[w])]
            b.conn(ODD, ('hyper', w), [bd0] + ls)
            l0.extend(ls)
    xTop = b.node(y)
    b.conn(EVEN, ('hyper', c0), l0 + [xTop])
    for c in t.childrenOf(y):
        if c == c0:
            continue
        bd = b.node(c, boundary=True)
        mid = b.node(y)
        b.conn(ODD, _edgeLabel(c, y), [bd, mid])
        ls = [b.node(q) for q in sorted(hg.minimalPrimes[c])]
        b.conn(EVEN, ('hyper', c), [mid] + ls)
        b.conn(ODD, ('hyper', c), ls + [xTop])
    top = hg.parentExt(y)
    if top is not None:
        b.conn(ODD, _edgeLabel(y, top), [xTop, b.node(top, boundary=True)])
    return b.done()


def singletonPaths(t, y):
    """All valid diagrams for the one-vertex set {y}: the whole-subtree
    shape first, then one per child.  A childless y has the degenerate
    single-odd-connection diagram only."""
    if t.n < 2:
        raise ValueError('need at least two vertices')
    if not t.childrenOf(y):
        return [_singlePlus(t, y)]
    return [_singlePlus(t, y)] + [_singleChild(t, y, c)
                                  for c in t.childrenOf(y)]


def _findPasteConn(p, keepLabel, dropLabel):
    """An odd connection of p joining a deletable boundary node labelled
    dropLabel to an internal node labelled keepLabel."""
    nodes = p.nodeById()
    at = p.incidence()
    for c in p.connections:
        if c.parity != ODD:
            continue
        labels = [nodes[nid].label for nid in c.incident]
        if keepLabel not in labels or dropLabel not in labels:
            continue
        bd = next((nodes[nid] for nid in c.incident
                   if nodes[nid].boundary and nodes[nid].label == dropLabel),
                  None)
        keep = next((nodes[nid] for nid in c.incident
                     if not nodes[nid].boundary
                     and nodes[nid].label == keepLabel), None)
        if bd is None or keep is None or len(at[bd.id]) != 1:
            continue
        return c, bd, keep
    return None


def paste(tA, tB, edge):
    """Glue the diagrams of two disjoint target sets along a base edge.

    The side carrying an odd connection between nodes labelled by the
    two edge endpoints loses that connection and its boundary node; the
    surviving internal node is identified with the matching boundary
    node of the other side.  tA is searched first."""
    u, v = edge
    if tA.tree is not tB.tree:
        raise ValueError('diagrams must share one rooted tree')
    if tA.targetSet & tB.targetSet:
        raise ValueError('target sets must be disjoint')
    if u in tB.targetSet and v in tA.targetSet:
        u, v = v, u
    if u not in tA.targetSet or v not in tB.targetSet:
        raise ValueError('edge (%d,%d) must join the two target sets' % edge)
    if not tA.tree.graph.hasEdge(u, v):
        raise ValueError('(%d,%d) is not an edge of the base tree' % (u, v))
    for p, q, keepLabel, dropLabel in ((tA, tB, u, v), (tB, tA, v, u)):
        hit = _findPasteConn(p, keepLabel, dropLabel)
        if hit is None:
            continue
        conn, bd, keep = hit
        target = next((nd for nd in q.nodes
                       if nd.boundary and nd.label == keepLabel), None)
        if target is None:
            continue
        nodes = []
        idMap = {}
        for nd in p.nodes:
            if nd.id == bd.id:
                continue
            idMap[nd.id] = len(nodes)
            nodes.append(TNode(len(nodes), nd.label, nd.boundary))
        qMap = {target.id: idMap[keep.id]}
        for nd in q.nodes:
            if nd.id == target.id:
                continue
            qMap[nd.id] = len(nodes)
            nodes.append(TNode(len(nodes), nd.label, nd.boundary))
        conns = []
        for c in p.connections:
            if c.id == conn.id:
                continue
            conns.append(TConnection(len(conns), c.parity, c.label,
                                     [idMap[i] for i in c.incident]))
        for c in q.connections:
            conns.append(TConnection(len(conns), c.parity, c.label,
                                     [qMap[i] for i in c.incident]))
        return HyperTPath(p.tree, p.hypergraph,
                          tA.targetSet | tB.targetSet, nodes, conns)
    raise NotPasteable('no odd connection joins %d and %d on either side'
                       % (u, v))


def enumerate(t, S):
    """All valid diagrams for a connected target set, one per admissible
    (kept-subset, child-choice) pair of the Y expansion, in the same
    order yGeneral emits its terms.  Deeper vertices paste first."""
    S = frozenset(S)
    if t.n < 2:
        raise ValueError('need at least two vertices')
    if not S or not t.graph.isConnectedSet(S):
        raise NotConnected('vertex set %s is not connected' % sorted(S))
    ordered = sorted(S)
    forced = frozenset(v for v in S if not t.childrenOf(v))
    byDepth = sorted(S, key=lambda x: (-t.depthOf(x), x))
    out = []
    for k in range(1 << len(ordered)):
        O = frozenset(ordered[b] for b in range(len(ordered)) if k >> b & 1)
        if not forced <= O:
            continue
        movers = [x for x in ordered if x not in O]
        options = [[c for c in t.childrenOf(x) if c not in O] for x in movers]
        if any(not opts for opts in options):
            continue
        for choice in itertools.product(*options):
            pick = dict(zip(movers, choice))
            comp = {}
            diagram = None
            for x in byDepth:
                if x in pick:
                    diagram = _singleChild(t, x, pick[x])
                else:
                    diagram = _singlePlus(t, x)
                for c in t.childrenOf(x):
                    if c in S:
                        diagram = paste(comp[c], diagram, (c, x))
                for v in diagram.targetSet:
                    comp[v] = diagram
            out.append(diagram)
    return out


def canonicalKey(p):
    """Hashable certificate equal across diagrams that differ only by a
    label- and parity-preserving incidence bijection (boundary nodes,
    having unique labels, are automatically fixed)."""
    at = p.incidence()
    nodes = list(p.nodes)
    conns = list(p.connections)

    def refine(nodeColor, connColor):
        while True:
            nextNode = {}
            for nd in nodes:
                sig = (nodeColor[nd.id],
                       tuple(sorted(connColor[c.id] for c in at[nd.id])))
                nextNode[nd.id] = sig
            nodeRank = {sig: i for i, sig in
                        zip(itertools.count(), sorted(set(nextNode.values())))}
            nextConn = {}
            for c in conns:
                sig = (connColor[c.id],
                       tuple(sorted(nextNode[i] for i in c.incident)))
                nextConn[c.id] = sig
            connRank = {sig: i for i, sig in
                        zip(itertools.count(), sorted(set(nextConn.values())))}
            newNode = {nid: nodeRank[sig] for nid, sig in nextNode.items()}
            newConn = {cid: connRank[sig] for cid, sig in nextConn.items()}
            if newNode == nodeColor and newConn == connColor:
                return nodeColor, connColor
            nodeColor, connColor = newNode, newConn

    def certificate(nodeColor, connColor):
        nodeColor, connColor = refine(nodeColor, connColor)
        classes = {}
        for nd in nodes:
            classes.setdefault(nodeColor[nd.id], []).append(nd.id)
        split = sorted(ids for ids in classes.values() if len(ids) > 1)
        if split:
            best = None
            bump = max(nodeColor.values()) + 1
            for nid in split[0]:
                trial = dict(nodeColor)
                trial[nid] = bump
                cert = certificate(trial, dict(connColor))
                if best is None or cert < best:
                    best = cert
            return best
        order = sorted(nodes, key=lambda nd: nodeColor[nd.id])
        rank = {nd.id: i for i, nd in zip(itertools.count(), order)}
        nodePart = tuple((nd.label, nd.boundary) for nd in order)
        connPart = tuple(sorted(
            (c.parity, c.label, tuple(sorted(rank[i] for i in c.incident)))
            for c in conns))
        return nodePart, connPart

    nodeColor = {}
    seedRank = {sig: i for i, sig in zip(itertools.count(), sorted(
        {(nd.label, nd.boundary) for nd in nodes}))}
    for nd in nodes:
        nodeColor[nd.id] = seedRank[(nd.label, nd.boundary)]
    connSeed = {sig: i for i, sig in zip(itertools.count(), sorted(
        {(c.parity, c.label) for c in conns}))}
    connColor = {c.id: connSeed[(c.parity, c.label)] for c in conns}
    return certificate(nodeColor, connColor)


def _oddCandidates(hg, nodes):
    """Every way an odd connection could sit on the given nodes: for each
    label, pick one node per endpoint vertex."""
    byLabel = {}
    for nd in nodes:
        byLabel.setdefault(nd.label, []).append(nd)
    labels = [_edgeLabel(u, v) for u in sorted(hg.extAdj)
              for v in hg.extAdj[u] if u < v]
    labels += [('hyper', x) for x in hg.tree.vertices()]
    out = []
    for label in labels:
        want = _labelEndpoints(hg, label)
        pools = [byLabel.get(w, ()) for w in want]
        if any(not pool for pool in pools):
            continue
        for pickedNodes in itertools.product(*pools):
            out.append((label, frozenset(nd.id for nd in pickedNodes)))
    return out


def _censusLabels(hg, S):
    """The forced even labels: one subtree hyperedge per member of S and
    S' that is unprimed and is not the top of S or its upward neighbor."""
    top = _topOf(hg.tree, S)
    above = hg.parentExt(top)
    return tuple(sorted(
        ('hyper', y) for y in set(S) | set(boundaryLabels(hg, S))
        if not hg.isPrimed(y) and y not in (top, above)))


def _evenMultisets(hg, S, capacity, mode):
    """Candidate even-connection label multisets.  Census mode pins them
    to the forced labels; free mode tries everything that fits the node
    capacity."""
    t = hg.tree
    if mode == 'census':
        ms = _censusLabels(hg, S)
        need = sum(len(_labelEndpoints(hg, lab)) for lab in ms)
        return [ms] if need <= capacity else []
    labels = [_edgeLabel(u, v) for u in sorted(hg.extAdj)
              for v in hg.extAdj[u] if u < v]
    labels += [('hyper', x) for x in t.vertices()]
    sizes = [len(_labelEndpoints(hg, lab)) for lab in labels]
    out = []

    def grow(idx, left, acc):
        out.append(tuple(acc))
        for i in range(idx, len(labels)):
            if sizes[i] <= left:
                acc.append(labels[i])
                grow(i, left - sizes[i], acc)
                acc.pop()

    grow(0, capacity, [])
    return out


def exhaustiveSearch(t, S, nodeBudget=None, mode='census', frontierCap=2000000):
    """Independent rediscovery of all valid diagrams within a node
    budget, up to canonical isomorphism.

    Every internal node carries exactly one even connection, so even
    connections partition the internal nodes; the search enumerates
    even layouts, then completes them with odd connections by exact
    cover of the forced-degree nodes plus optional extras.  Census mode
    (the default) fixes the even labels outright; free mode rediscovers
    them too.  Only meant for tiny instances."""
    S = frozenset(S)
    if t.n < 2:
        raise ValueError('need at least two vertices')
    if not S or not t.graph.isConnectedSet(S):
        raise NotConnected('vertex set %s is not connected' % sorted(S))
    if mode not in ('census', 'free'):
        raise ValueError('mode must be "census" or "free"')
    hg = t.extension()
    sPrime = boundaryLabels(hg, S)
    if nodeBudget is None:
        # Every valid diagram has exactly one internal node per endpoint
        # of each forced even label, so the census size is the exact
        # node count; the rule-of-thumb formula can undercount it on
        # bushy stars.
        censusNodes = len(sPrime) + sum(
            len(_labelEndpoints(hg, lab)) for lab in _censusLabels(hg, S))
        nodeBudget = max(len(S) + len(sPrime) + 2 * len(S) + 2, censusNodes)
    wantEven = {lab: 1 for lab in _censusLabels(hg, S)}
    pairTable = {
        (a, b): (_requiredEvens(hg, S, a, b), _allowedInternal(hg, a, b))
        for a, b in itertools.combinations(sorted(sPrime), 2)}
    ticks = [0]

    def tick():
        ticks[0] += 1
        if ticks[0] > frontierCap:
            raise BudgetExceeded('search frontier passed %d states'
                                 % frontierCap)

    found = {}
    for evens in _evenMultisets(hg, S, nodeBudget - len(sPrime), mode):
        tick()
        nodes = [TNode(i, lab, boundary=True)
                 for i, lab in zip(itertools.count(), sorted(sPrime))]
        evenConns = []
        for lab in evens:
            incident = []
            for w in _labelEndpoints(hg, lab):
                nd = TNode(len(nodes), w)
                nodes.append(nd)
                incident.append(nd.id)
            evenConns.append((lab, frozenset(incident)))
        if len(nodes) > nodeBudget:
            continue
        cands = _oddCandidates(hg, nodes)
        mustCover = frozenset(nd.id for nd in nodes
                              if not nd.boundary and nd.label not in S)
        needOne = frozenset(nd.id for nd in nodes
                            if nd.boundary or nd.label in S)
        byNode = {nid: [c for c in cands if nid in c[1]] for nid in mustCover}
        if any(not byNode[nid] for nid in mustCover):
            continue
        if any(not any(nid in c[1] for c in cands) for nid in needOne):
            continue
        extras = [c for c in cands if not (c[1] & mustCover)]
        if len(extras) > 18:
            raise BudgetExceeded('%d optional odd placements' % len(extras))
        reach = [frozenset()] * (len(extras) + 1)
        for i in range(len(extras) - 1, -1, -1):
            reach[i] = reach[i + 1] | extras[i][1]

        def finish(chosen):
            touched = set()
            for _, ids in chosen:
                touched |= ids

            def pick(i, subset, needy):
                tick()
                if needy - reach[i]:
                    return
                if i == len(extras):
                    _tryDiagram(t, hg, S, nodes, evenConns,
                                chosen + subset, pairTable, wantEven,
                                found)
                    return
                pick(i + 1, subset, needy)
                subset.append(extras[i])
                pick(i + 1, subset, needy - extras[i][1])
                subset.pop()

            pick(0, [], needOne - touched)

        def cover(uncovered, chosen):
            tick()
            if not uncovered:
                finish(chosen)
                return
            nid = min(uncovered,
                      key=lambda i: (len(byNode[i]), i))
            for cand in byNode[nid]:
                if (cand[1] & mustCover) - uncovered:
                    continue
                chosen.append(cand)
                cover(uncovered - cand[1], chosen)
                chosen.pop()

        cover(mustCover, [])
    return [found[key] for key in sorted(found)]


def _completionValid(S, nodes, evenConns, oddConns, pairTable, wantEven):
    """Boolean mirror of validate for search completions, arranged to
    fail fast.  Layout construction already guarantees the label and
    boundary rules and one even per internal node, so only the
    remaining checks run; the first hopeless sign wins."""
    if len(set(oddConns)) != len(oddConns):
        return False
    touched = {}
    for _, ids in oddConns:
        for nid in ids:
            touched[nid] = touched.get(nid, 0) + 1
    for nd in nodes:
        k = touched.get(nd.id, 0)
        if nd.boundary or nd.label in S:
            if k < 1:
                return False
        elif k != 1:
            return False
    evenCount = {}
    for lab, _ in evenConns:
        evenCount[lab] = evenCount.get(lab, 0) + 1
    if evenCount != wantEven:
        return False
    groups = [ids for _, ids in evenConns] + [ids for _, ids in oddConns]
    seen = {nodes[0].id}
    grew = True
    while grew:
        grew = False
        for ids in groups:
            if (ids & seen) and not (ids <= seen):
                seen |= ids
                grew = True
    if len(seen) != len(nodes):
        return False

    at = {nd.id: [] for nd in nodes}
    conns = []
    for lab, ids in itertools.chain(evenConns, oddConns):
        for nid in ids:
            at[nid].append(len(conns))
        conns.append(ids)
    nEven = len(evenConns)
    evenLabel = [lab for lab, _ in evenConns]
    label = {nd.id: nd.label for nd in nodes}
    bd = sorted((nd for nd in nodes if nd.boundary),
                key=lambda nd: nd.label)
    covered = set()
    ok = [True]

    def walk(v, target, required, allowed, usedC, usedN, path, evSeq,
             taint):
        # A tainted prefix already differs from the forced even
        # sequence or passed a forbidden label; if it reaches the
        # target it condemns the whole diagram.
        if v == target:
            if taint or len(evSeq) != len(required):
                ok[0] = False
            else:
                covered.update(path)
            return
        for ci in at[v]:
            if ci in usedC:
                continue
            usedC.add(ci)
            path.append(ci)
            t1 = taint
            if ci < nEven:
                k = len(evSeq)
                evSeq.append(evenLabel[ci])
                if not t1 and (k >= len(required)
                               or required[k] != evenLabel[ci]):
                    t1 = True
            for w in conns[ci]:
                if w == v or w in usedN:
                    continue
                t2 = t1
                if not t2 and w != target and label[w] not in allowed:
                    t2 = True
                usedN.add(w)
                walk(w, target, required, allowed, usedC, usedN, path,
                     evSeq, t2)
                usedN.discard(w)
                if not ok[0]:
                    return
            if ci < nEven:
                evSeq.pop()
            path.pop()
            usedC.discard(ci)

    for a, b in itertools.combinations(bd, 2):
        required, allowed = pairTable[(a.label, b.label)]
        walk(a.id, b.id, required, allowed, set(), {a.id}, [], [], False)
        if not ok[0]:
            return False
    return len(covered) == len(conns)


def _tryDiagram(t, hg, S, nodes, evenConns, oddConns, pairTable, wantEven,
                found):
    if not _completionValid(S, nodes, evenConns, oddConns, pairTable,
                            wantEven):
        return
    conns = []
    for lab, ids in evenConns:
        conns.append(TConnection(len(conns), EVEN, lab, ids))
    for lab, ids in oddConns:
        conns.append(TConnection(len(conns), ODD, lab, ids))
    p = HyperTPath(t, hg, S, [TNode(nd.id, nd.label, nd.boundary)
                              for nd in nodes], conns)
    ok, _ = validate(p)
    if ok:
        found.setdefault(canonicalKey(p), p)


def pathGraphSpecialize(t, S):
    """On a path graph, check that every enumerated diagram collapses to
    the classical shape: a single alternating chain, odd at both ends,
    every connection joining exactly two nodes, evens in forced order."""
    if any(t.graph.degree(v) > 2 for v in t.vertices()):
        raise NotAPath('graph has a vertex of degree > 2')
    hg = t.extension()
    for p in enumerate(t, S):
        if any(len(c.incident) != 2 for c in p.connections):
            return False
        at = p.incidence()
        degrees = sorted(len(at[nd.id]) for nd in p.nodes)
        ends = [nd for nd in p.nodes if len(at[nd.id]) == 1]
        if degrees[:2] != [1, 1] or (degrees[2:] and degrees[-1] != 2):
            return False
        if len(ends) != 2 or not all(nd.boundary for nd in ends):
            return False
        chains = bergePaths(p, ends[0].id, ends[1].id)
        if len(chains) != 1:
            return False
        _, conns = chains[0]
        if len(conns) != len(p.connections):
            return False
        parities = [c.parity for c in conns]
        if parities != [ODD if i % 2 == 0 else EVEN
                        for i in range(len(parities))]:
            return False
        evens = [c.label for c in conns if c.parity == EVEN]
        if len(conns) != 2 * len(evens) + 1:
            return False
        if evens != _requiredEvens(hg, S, ends[0].label, ends[1].label):
            return False
    return True


def diagramDot(p):
    """Graphviz text for one diagram: boundary nodes doubly circled, odd
    connections solid, even dashed, hyperedge labels drawn through a
    small square junction."""
    hg = p.hypergraph
    lines = ['graph hypertpath {']
    for nd in p.nodes:
        shape = 'doublecircle' if nd.boundary else 'circle'
        lines.append('  n%d [label="%s", shape=%s];' % (
            nd.id, _labelName(hg, nd.label), shape))
    style = {ODD: 'solid', EVEN: 'dashed'}
    for c in p.connections:
        kind, payload = c.label
        if kind == 'edge':
            a, b = c.incident
            lines.append('  n%d -- n%d [style=%s];' % (a, b, style[c.parity]))
        else:
            lines.append('  c%d [label="I%d", shape=square, width=0.2];'
                         % (c.id, payload))
            for nid in c.incident:
                lines.append('  n%d -- c%d [style=%s];' % (
                    nid, c.id, style[c.parity]))
    lines.append('}')
    return '\n'.join(lines) + '\n'
