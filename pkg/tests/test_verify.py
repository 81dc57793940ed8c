import json
import re

import pytest
from hypothesis import given, settings, strategies as st

from glp.verify import (SUITE_NAMES, SuiteReport, TooLarge, TreeCorpus,
                        VerifyLimits, runSuite, treeCorpus, treeHash)


def test_exhaustive_corpus_counts():
    c2 = treeCorpus('exhaustive(2)')
    assert len(c2.trees) == 2
    assert len({treeHash(t) for t in c2.trees}) == 1
    c3 = treeCorpus('exhaustive(3)')
    assert len(c3.trees) == 9
    assert len({treeHash(t) for t in c3.trees}) == 3
    assert c3.provenance == 'exhaustive(3)'
    assert c3.graphs == []


def test_exhaustive_five_is_cayley():
    c5 = treeCorpus('exhaustive(5)')
    assert len({treeHash(t) for t in c5.trees}) == 125
    assert len(c5.trees) == 625


def test_exhaustive_too_large():
    with pytest.raises(TooLarge):
        treeCorpus('exhaustive(9)')


def test_bad_corpus_specs():
    for bad in ('banana', 'random(5,3)', 'named(nope)', 'exhaustive(0)',
                'random(1,3,7)'):
        with pytest.raises(ValueError):
            treeCorpus(bad)


def test_random_corpus_seeded():
    a = treeCorpus('random(6,5,42)')
    b = treeCorpus('random(6,5,42)')
    c = treeCorpus('random(6,5,43)')
    edges = lambda corpus: [sorted(t.graph.edges) for t in corpus.trees]
    assert edges(a) == edges(b)
    assert edges(a) != edges(c)
    assert len(a.trees) == 30


@settings(max_examples=25, deadline=None)
@given(st.integers(2, 7), st.integers(0, 5), st.integers(0, 10 ** 6))
def test_random_corpus_trees_are_trees(n, count, seed):
    corpus = treeCorpus('random(%d,%d,%d)' % (n, count, seed))
    assert len(corpus.trees) == count * n
    for t in corpus.trees:
        assert t.n == n
        assert t.graph.isTree()
    roots = [t.root for t in corpus.trees]
    assert roots == list(range(1, n + 1)) * count


def test_named_corpus():
    corpus = treeCorpus('named')
    assert len(corpus.trees) == 8
    assert len(corpus.graphs) == 1
    byN = {t.n: t for t in corpus.trees}
    big = byN[8]
    assert big.root == 1
    assert big.childrenOf(4) == (6, 7)
    star7 = [t for t in corpus.trees if t.n == 7
             and t.graph.degree(1) == 6]
    assert len(star7) == 1 and star7[0].root == 2
    g = corpus.graphs[0]
    assert g.n == 6 and len(g.edges) == 7 and not g.isTree()


def test_named_single_entry():
    c = treeCorpus('named(bush5)')
    assert len(c.trees) == 1 and c.trees[0].root == 3 and not c.graphs
    c = treeCorpus('named(loop6)')
    assert not c.trees and len(c.graphs) == 1


def test_tree_hash_is_root_free():
    c3 = treeCorpus('exhaustive(3)')
    hashes = {}
    for t in c3.trees:
        hashes.setdefault(frozenset(t.graph.edges), set()).add(treeHash(t))
    for hs in hashes.values():
        assert len(hs) == 1
    assert len({next(iter(hs)) for hs in hashes.values()}) == 3
    assert re.fullmatch('[0-9a-f]{12}', treeHash(c3.trees[0]))


def test_expansion_suite_exhaustive3():
    r = runSuite('expansion-vs-det', treeCorpus('exhaustive(3)'))
    assert r.passed and r.instances == 54
    lines = list(r.textLines())
    assert len(lines) == 54
    assert all(ln.startswith('PASS expansion-vs-det ') for ln in lines)


def test_tpath_suite_bush5():
    r = runSuite('tpath-vs-formula', treeCorpus('named(bush5)'))
    assert r.passed and r.instances == 17


def test_tpath_suite_bush7_capped():
    r = runSuite('tpath-vs-formula', treeCorpus('named(bush7)'),
                 VerifyLimits(maxSetSize=3))
    assert r.passed and r.instances == 19


def test_search_suite_exhaustive3():
    r = runSuite('exhaustive-tpath', treeCorpus('exhaustive(3)'))
    assert r.passed and r.instances == 54


def test_exchange_suite_dedupes_roots():
    # 9 rooted trees collapse to 3 labeled graphs; 18 admissible
    # (S, i, j) triples each.
    r = runSuite('exchange', treeCorpus('exhaustive(3)'))
    assert r.passed and r.instances == 54


def test_exchange_suite_loop6_sample():
    r = runSuite('exchange', treeCorpus('named(loop6)'))
    assert r.passed
    # |S| <= 3 grid (381 triples) plus the two documented big-set
    # instances, one of which sums over the golden path polynomial.
    assert r.instances == 383


def test_transpositions_and_positivity_exhaustive4():
    trans = runSuite('transpositions', treeCorpus('exhaustive(4)'))
    pos = runSuite('positivity', treeCorpus('exhaustive(4)'))
    assert trans.passed and pos.passed
    assert trans.instances == pos.instances == 656


def test_star_suite_reports_findings():
    r = runSuite('star-conjecture', treeCorpus('named'),
                 VerifyLimits(maxN=4))
    assert not r.passed
    assert r.instances == 11
    failed = {S for ok, th, root, S in r.records if not ok}
    # Hand-checked counterexamples at unit values.
    assert {(1,), (1, 2), (1, 2, 3, 4)} <= failed
    passedSets = {S for ok, th, root, S in r.records if ok}
    assert {(2,), (3,), (4,)} <= passedSets
    for th, root, S, ident, lhs, rhs in r.failures:
        assert ident.startswith('conjectured star formula')
        assert root is None and lhs != rhs


def test_report_line_format():
    pattern = re.compile(
        r'^(PASS|FAIL) [a-z-]+ [0-9a-f]{12} root=(\d+|-) '
        r'S=\{\d*(,\d+)*\}$')
    reports = [
        runSuite('star-conjecture', treeCorpus('named'),
                 VerifyLimits(maxN=4)),
        runSuite('expansion-vs-det', treeCorpus('named(bush5)')),
    ]
    for r in reports:
        for ln in r.textLines():
            assert pattern.fullmatch(ln), ln


def test_json_summary_roundtrip_and_determinism():
    r1 = runSuite('star-conjecture', treeCorpus('named'),
                  VerifyLimits(maxN=4))
    r2 = runSuite('star-conjecture', treeCorpus('named'),
                  VerifyLimits(maxN=4))
    assert r1.jsonSummary() == r2.jsonSummary()
    assert list(r1.textLines()) == list(r2.textLines())
    doc = json.loads(r1.jsonSummary())
    assert doc['suite'] == 'star-conjecture'
    assert doc['instances'] == r1.instances
    assert doc['passed'] is False
    assert doc['failures'] and all(
        set(f) == {'tree', 'root', 'set', 'identity', 'lhs', 'rhs'}
        for f in doc['failures'])


def test_max_instances_cap():
    r = runSuite('expansion-vs-det', treeCorpus('exhaustive(3)'),
                 VerifyLimits(maxInstances=5))
    assert r.instances == 5


def test_unknown_suite():
    with pytest.raises(ValueError):
        runSuite('nonsense', treeCorpus('named(bush5)'))
    assert len(SUITE_NAMES) == 7
