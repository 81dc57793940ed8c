"""Identity sweeps over tree corpora, one pass/fail record per instance.

Each suite pins one identity (or the star conjecture) against an
independent computation path.  Reports carry every instance checked, so
a coverage regression is as visible as a wrong answer.
"""

import hashlib
import heapq
import itertools
import json
import random
import re

from . import lpcalc
from . import tpaths
from .algebra import canonicalString
from .graphcore import RootedTree, SimpleGraph


class TooLarge(Exception):
    """Exhaustive corpus requested beyond the supported size."""


SUITE_NAMES = ('expansion-vs-det', 'tpath-vs-formula', 'exhaustive-tpath',
               'exchange', 'transpositions', 'positivity', 'star-conjecture')

_EXHAUSTIVE_MAX = 8


class TreeCorpus:
    """A reproducible batch of rooted trees, plus the plain graphs that
    travel with the named examples, tagged with its provenance string."""

    __slots__ = ('trees', 'graphs', 'provenance')

    def __init__(self, trees, graphs, provenance):
        self.trees = list(trees)
        self.graphs = list(graphs)
        self.provenance = provenance

    def __repr__(self):
        return 'TreeCorpus(%s: %d rooted trees, %d graphs)' % (
            self.provenance, len(self.trees), len(self.graphs))


def _prueferGraph(n, seq):
    degree = [1] * (n + 1)
    for v in seq:
        degree[v] += 1
    leaves = [v for v in range(1, n + 1) if degree[v] == 1]
    heapq.heapify(leaves)
    edges = []
    for v in seq:
        u = heapq.heappop(leaves)
        edges.append((u, v))
        degree[v] -= 1
        if degree[v] == 1:
            heapq.heappush(leaves, v)
    edges.append((heapq.heappop(leaves), heapq.heappop(leaves)))
    return SimpleGraph(n, edges)


def _allRoots(graphs):
    out = []
    for g in graphs:
        for root in range(1, g.n + 1):
            out.append(RootedTree(g, root))
    return out


def _namedEntries():
    def tree(n, edges, root):
        return RootedTree(SimpleGraph(n, edges), root)

    trees = {
        'bush8': tree(8, [(1, 2), (2, 3), (2, 4), (2, 5), (4, 6), (4, 7),
                          (5, 8)], 1),
        'bush5': tree(5, [(1, 2), (2, 5), (2, 3), (3, 4)], 3),
        'bush7': tree(7, [(1, 2), (1, 3), (2, 4), (2, 5), (3, 6), (6, 7)], 1),
        'fork5': tree(5, [(1, 2), (2, 3), (3, 4), (3, 5)], 1),
    }
    for k in range(4, 8):
        trees['star%d' % k] = tree(k, [(1, i) for i in range(2, k + 1)], 2)
    graphs = {
        'loop6': SimpleGraph(6, [(1, 2), (1, 3), (2, 4), (3, 4), (3, 5),
                                 (4, 6), (5, 6)]),
    }
    return trees, graphs


def treeCorpus(spec):
    """Build a corpus from a provenance string.

    Three forms: exhaustive(N) decodes every Pruefer sequence on N
    vertices (N <= 8) and roots each tree every way; random(N,COUNT,SEED)
    draws COUNT uniform Pruefer sequences from the given seed, again
    rooted every way; named or named(ID) selects from the built-in
    example family.  The string is kept verbatim as the provenance."""
    m = re.fullmatch(r'exhaustive\((\d+)\)', spec)
    if m:
        n = int(m.group(1))
        if n < 1:
            raise ValueError('corpus needs at least one vertex')
        if n > _EXHAUSTIVE_MAX:
            raise TooLarge('exhaustive corpus capped at %d vertices; use '
                           'random(n,count,seed) beyond that'
                           % _EXHAUSTIVE_MAX)
        if n == 1:
            graphs = [SimpleGraph(1, [])]
        else:
            graphs = [_prueferGraph(n, seq) for seq in
                      itertools.product(range(1, n + 1), repeat=n - 2)]
        return TreeCorpus(_allRoots(graphs), [], spec)
    m = re.fullmatch(r'random\((\d+),(\d+),(\d+)\)', spec)
    if m:
        n, count, seed = (int(x) for x in m.groups())
        if n < 2:
            raise ValueError('random corpus needs at least two vertices')
        rng = random.Random(seed)
        graphs = [_prueferGraph(n, tuple(rng.randrange(1, n + 1)
                                         for _ in range(n - 2)))
                  for _ in range(count)]
        return TreeCorpus(_allRoots(graphs), [], spec)
    m = re.fullmatch(r'named(?:\((\w+)\))?', spec)
    if m:
        trees, graphs = _namedEntries()
        name = m.group(1)
        if name is None:
            return TreeCorpus(trees.values(), graphs.values(), spec)
        if name in trees:
            return TreeCorpus([trees[name]], [], spec)
        if name in graphs:
            return TreeCorpus([], [graphs[name]], spec)
        raise ValueError('unknown corpus entry %r; have %s' % (
            name, sorted(trees) + sorted(graphs)))
    raise ValueError('corpus spec %r not of the form exhaustive(n), '
                     'random(n,count,seed), or named(id)' % (spec,))


def treeHash(g):
    """Short stable digest of a labeled graph: vertex count plus edge
    set.  Root-independent on purpose, so report lines group by the
    underlying tree."""
    if hasattr(g, 'graph'):
        g = g.graph
    blob = '%d:%s' % (g.n, sorted(g.edges))
    return hashlib.sha1(blob.encode()).hexdigest()[:12]


class VerifyLimits:
    """Caps for one sweep.  Trees above maxN are skipped (suites with a
    natural size cap of their own use maxN to override it), vertex sets
    above maxSetSize are skipped, and recording stops at maxInstances.
    None means uncapped."""

    __slots__ = ('maxN', 'maxSetSize', 'maxInstances')

    def __init__(self, maxN=None, maxSetSize=None, maxInstances=None):
        self.maxN = maxN
        self.maxSetSize = maxSetSize
        self.maxInstances = maxInstances


class SuiteReport:
    """Outcome of one sweep: every record, plus failures in full.

    records holds (ok, treeHash, root, S) per instance; failures holds
    (treeHash, root, S, identity, lhs, rhs) with both sides rendered
    canonically.  Line and JSON forms are deterministic."""

    __slots__ = ('suite', 'instances', 'records', 'failures')

    def __init__(self, suite, records, failures):
        self.suite = suite
        self.records = list(records)
        self.failures = list(failures)
        self.instances = len(self.records)

    @property
    def passed(self):
        return not self.failures

    def textLines(self):
        for ok, th, root, S in self.records:
            yield '%s %s %s root=%s S={%s}' % (
                'PASS' if ok else 'FAIL', self.suite, th,
                '-' if root is None else root,
                ','.join(str(v) for v in S))

    def jsonSummary(self):
        failures = [
            {'tree': th, 'root': '-' if root is None else root,
             'set': list(S), 'identity': ident, 'lhs': lhs, 'rhs': rhs}
            for th, root, S, ident, lhs, rhs in self.failures]
        return json.dumps(
            {'suite': self.suite, 'instances': self.instances,
             'passed': self.passed, 'failures': failures},
            sort_keys=True, separators=(',', ':'))

    def __repr__(self):
        return 'SuiteReport(%s: %d instances, %d failures)' % (
            self.suite, self.instances, len(self.failures))


def _record(records, failures, ok, g, root, S, identity, lhs, rhs):
    th = treeHash(g)
    key = tuple(sorted(S))
    records.append((ok, th, root, key))
    if not ok:
        failures.append((th, root, key, identity, lhs(), rhs()))


def _treeInstances(corpus, limits, records, sizeCap=None):
    for t in corpus.trees:
        cap = limits.maxN if limits.maxN is not None else sizeCap
        if cap is not None and t.n > cap:
            continue
        for S in t.graph.connectedSubsets():
            if limits.maxSetSize is not None and len(S) > limits.maxSetSize:
                continue
            if (limits.maxInstances is not None
                    and len(records) >= limits.maxInstances):
                return
            yield t, S


# Boolean outcomes shared across instances that differ only by a root-
# and mark-preserving relabeling: every quantity compared is carried to
# the relabeled instance by the induced variable bijection, so the
# representative's run decides the whole class.
_SHARED = {}


def _shared(kind, t, S, check):
    key = (kind, lpcalc._shapeKey(t, S))
    hit = _SHARED.get(key)
    if hit is None:
        hit = _SHARED[key] = check()
    return hit


def clearCaches():
    _SHARED.clear()


def _suiteExpansionVsDet(corpus, limits, records, failures):
    for t, S in _treeInstances(corpus, limits, records):
        ok = lpcalc.substituteClusterAndCompare(t, S)
        _record(records, failures, ok, t, t.root, S,
                'cluster expansion of Y equals determinant',
                lambda: canonicalString(lpcalc.yGeneral(t, S).expression),
                lambda: canonicalString(lpcalc.yDet(t.graph, S)))


def _tpathAgrees(t, S):
    report = lpcalc.yGeneral(t, S)
    paths = tpaths.enumerate(t, S)
    return (len(paths) == report.termCount
            and all(tpaths.weight(p) == term
                    for p, term in zip(paths, report.terms))
            and tpaths.sumWeights(paths) == report.expression)


def _suiteTpathVsFormula(corpus, limits, records, failures):
    for t, S in _treeInstances(corpus, limits, records):
        if t.n < 2:
            continue
        ok = _shared('tpath', t, S, lambda: _tpathAgrees(t, S))
        _record(records, failures, ok, t, t.root, S,
                'diagram weights match the expansion term by term',
                lambda: canonicalString(
                    tpaths.sumWeights(tpaths.enumerate(t, S))),
                lambda: canonicalString(lpcalc.yGeneral(t, S).expression))


def _searchAgrees(t, S):
    found = {tpaths.canonicalKey(p) for p in tpaths.exhaustiveSearch(t, S)}
    want = {tpaths.canonicalKey(p) for p in tpaths.enumerate(t, S)}
    return found == want


def _suiteExhaustiveTpath(corpus, limits, records, failures):
    # Default size cap 4: the blind search is exponential and meant for
    # desk-scale oracles; push maxN explicitly to go bigger.
    for t, S in _treeInstances(corpus, limits, records, sizeCap=4):
        if t.n < 2:
            continue
        ok = _shared('search', t, S, lambda: _searchAgrees(t, S))
        _record(records, failures, ok, t, t.root, S,
                'blind diagram search finds exactly the enumerated set',
                lambda: '%d diagrams found'
                        % len(tpaths.exhaustiveSearch(t, S)),
                lambda: '%d diagrams enumerated'
                        % len(tpaths.enumerate(t, S)))


def _exchangeGrid(g, limits, full):
    """Deterministic (S, i, j) sample for one graph; j None marks the
    single-vertex relation.  Full grids take every subset; sampled
    graphs stay at |S| <= 3 plus the documented large instance."""
    sizeCap = limits.maxSetSize if full else min(limits.maxSetSize or 3, 3)
    verts = range(1, g.n + 1)
    subsets = []
    for k in range(0, g.n + 1):
        if sizeCap is not None and k > sizeCap:
            break
        subsets.extend(frozenset(c) for c in itertools.combinations(verts, k))
    grid = []
    for S in subsets:
        outside = [v for v in verts if v not in S]
        for i in outside:
            grid.append((S, i, None))
        for i, j in itertools.combinations(outside, 2):
            grid.append((S, i, j))
    if not full and g.n >= 6:
        # The single-vertex relation at i=6 sums path polynomials over
        # every target, so this instance exercises the P_{S}^{6,3}
        # golden value; the pair relation needs both vertices outside S.
        big = frozenset({1, 2, 3, 4})
        grid.append((big, 6, None))
        grid.append((big, 5, 6))
    return grid


def _suiteExchange(corpus, limits, records, failures):
    # Root-free identity: deduplicate the corpus down to labeled graphs.
    seen = set()
    jobs = []
    cap = limits.maxN if limits.maxN is not None else 5
    for t in corpus.trees:
        th = treeHash(t)
        if t.n > cap or th in seen:
            continue
        seen.add(th)
        jobs.append((t.graph, True))
    for g in corpus.graphs:
        th = treeHash(g)
        if th in seen:
            continue
        seen.add(th)
        jobs.append((g, False))
    for g, full in jobs:
        for S, i, j in _exchangeGrid(g, limits, full):
            if (limits.maxInstances is not None
                    and len(records) >= limits.maxInstances):
                return
            ok = lpcalc.exchangeVerify(g, S, i, j)
            which = ('exchange relation at i=%d' % i if j is None
                     else 'exchange relation at i=%d, j=%d' % (i, j))
            _record(records, failures, ok, g, None, S, which,
                    lambda: 'product of mutated determinants',
                    lambda: 'path-polynomial side')


def _suiteTranspositions(corpus, limits, records, failures):
    for t, S in _treeInstances(corpus, limits, records):
        ok = _shared('transpositions', t, S,
                     lambda: (lpcalc.yTranspositions(t, S)
                              == lpcalc.yGeneral(t, S).expression))
        _record(records, failures, ok, t, t.root, S,
                'alternating transposition sum equals the expansion',
                lambda: canonicalString(lpcalc.yTranspositions(t, S)),
                lambda: canonicalString(lpcalc.yGeneral(t, S).expression))


def _suitePositivity(corpus, limits, records, failures):
    for t, S in _treeInstances(corpus, limits, records):
        ok = _shared('positivity', t, S,
                     lambda: lpcalc.yGeneral(t, S).positive)
        _record(records, failures, ok, t, t.root, S,
                'expansion has positive numerator over a monomial',
                lambda: canonicalString(lpcalc.yGeneral(t, S).expression),
                lambda: 'positive coefficients, monomial denominator')


def _suiteStarConjecture(corpus, limits, records, failures):
    # Findings, not failures: a FAIL here is a definite report about the
    # conjectured formula, and callers treat it as its own outcome.
    hi = 7 if limits.maxN is None else min(7, limits.maxN)
    for n in range(4, hi + 1):
        outcome = lpcalc.starConjectureCheck(n)
        g = SimpleGraph(n, [(1, i) for i in range(2, n + 1)])
        th = treeHash(g)
        for r in outcome['results']:
            if (limits.maxInstances is not None
                    and len(records) >= limits.maxInstances):
                return
            key = tuple(r['set'])
            records.append((r['holds'], th, None, key))
            if not r['holds']:
                failures.append((th, None, key,
                                 'conjectured star formula (%s)' % r['case'],
                                 r['detUnit'], r['formulaUnit']))


_SUITES = {
    'expansion-vs-det': _suiteExpansionVsDet,
    'tpath-vs-formula': _suiteTpathVsFormula,
    'exhaustive-tpath': _suiteExhaustiveTpath,
    'exchange': _suiteExchange,
    'transpositions': _suiteTranspositions,
    'positivity': _suitePositivity,
    'star-conjecture': _suiteStarConjecture,
}


def runSuite(name, corpus, limits=None):
    """Run one identity sweep over the corpus.

    A failed identity is recorded, never raised.  Given the same corpus
    and limits the report is byte-identical across runs."""
    if name not in _SUITES:
        raise ValueError('unknown suite %r; have %s'
                         % (name, ', '.join(SUITE_NAMES)))
    if limits is None:
        limits = VerifyLimits()
    records = []
    failures = []
    _SUITES[name](corpus, limits, records, failures)
    return SuiteReport(name, records, failures)
