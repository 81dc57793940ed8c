import json

import pytest

from glp.algebra import (LaurentPoly, RationalFn, avar, canonicalString,
                         isPositive, parseCanonical, substitute, xvar, yvar)
from glp.graphcore import (NotConnected, RootedTree, SimpleGraph, parseTree)
from glp.lpcalc import (ExpansionReport, NMatrix, PreconditionViolated,
                        exchangeVerify, pPoly, pPolyValue,
                        starConjectureCheck, substituteClusterAndCompare,
                        xRooted, yDet, yDetLaurent, yGeneral, ySingleton,
                        yTranspositions, ySubsetVar)

BUSH8 = parseTree(json.dumps({
    'vertices': 8,
    'edges': [[1, 2], [2, 3], [2, 4], [2, 5], [4, 6], [4, 7], [5, 8]],
    'root': 1}))
BUSH7 = parseTree(json.dumps({
    'vertices': 7,
    'edges': [[1, 2], [1, 3], [2, 4], [2, 5], [3, 6], [6, 7]],
    'root': 1}))
TWO_PATH = parseTree(json.dumps({'vertices': 2, 'edges': [[1, 2]], 'root': 1}))
FORK5 = SimpleGraph(5, [(1, 2), (2, 3), (3, 4), (3, 5)])
LOOP6 = SimpleGraph(6, [(1, 2), (1, 3), (2, 4), (3, 4), (3, 5), (4, 6), (5, 6)])


def V(*vs):
    return LaurentPoly.var(yvar(vs))


def test_nmatrix_entries():
    m = NMatrix(FORK5)
    assert canonicalString(m.entries[(3, 3)]) == '(A3 + X2 + X4 + X5)/(X3)'
    assert m.entries[(1, 2)] == RationalFn(-1)
    assert m.entries[(1, 4)] == RationalFn(0)


def test_ydet_golden_fork5():
    got = canonicalString(yDet(FORK5, {3, 5}))
    want = canonicalString(parseCanonical(
        '(A3*A5 + A5*X2 + A5*X4 + A5*X5 + A3*X3 + X2*X3 + X3*X4)/(X3*X5)'))
    assert got == want


def test_ydet_empty_and_two_path():
    assert yDet(FORK5, set()) == RationalFn(1)
    A1, A2 = LaurentPoly.var(avar(1)), LaurentPoly.var(avar(2))
    X1, X2 = LaurentPoly.var(xvar(1)), LaurentPoly.var(xvar(2))
    want = RationalFn((A1 + X2) * (A2 + X1) - X1 * X2, X1 * X2)
    assert yDet(TWO_PATH.graph, {1, 2}) == want


def test_ydet_denominator_is_product_of_x():
    f = yDet(BUSH8.graph, {2, 4, 5})
    assert f.den == (LaurentPoly.var(xvar(2)) * LaurentPoly.var(xvar(4))
                     * LaurentPoly.var(xvar(5)))
    assert isPositive(f.num)


def test_ydet_disconnected_is_component_product():
    g = BUSH8.graph
    assert yDet(g, {3, 8}) == yDet(g, {3}) * yDet(g, {8})
    assert yDet(g, {3, 6, 7}) == yDet(g, {3}) * yDet(g, {6}) * yDet(g, {7})


def test_ppoly_golden_loop6():
    p = pPoly(LOOP6, {1, 2, 3, 4}, 6, 3)
    assert p == V(1, 2) + LaurentPoly.constant(1)
    val = pPolyValue(LOOP6, {1, 2, 3, 4}, 6, 3)
    assert val == yDet(LOOP6, {1, 2}) + RationalFn(1)


def test_ppoly_trivial():
    assert pPoly(TWO_PATH.graph, set(), 1, 2) == LaurentPoly.constant(1)
    assert pPoly(FORK5, {2}, 1, 4) == LaurentPoly()
    with pytest.raises(PreconditionViolated):
        pPoly(FORK5, {2}, 1, 1)


def test_ppoly_disconnected_leftover():
    # removing the path 2-3 from S={2,3,5} leaves the single vertex 5
    p = pPoly(FORK5, {2, 3, 5}, 1, 4)
    assert p == V(5)


def test_exchange_two_path():
    assert exchangeVerify(TWO_PATH.graph, set(), 1)
    assert exchangeVerify(TWO_PATH.graph, {2}, 1)


def test_exchange_fork5_pair():
    assert exchangeVerify(FORK5, {4}, 3, 5)
    assert exchangeVerify(FORK5, set(), 1, 2)


def test_exchange_bush8_below4():
    assert exchangeVerify(BUSH8.graph, {6, 7}, 4)


def test_exchange_loop6_samples():
    assert exchangeVerify(LOOP6, {1, 2, 3}, 4)
    assert exchangeVerify(LOOP6, {3, 4}, 1, 6)


def test_exchange_preconditions():
    with pytest.raises(PreconditionViolated):
        exchangeVerify(FORK5, {3}, 3)
    with pytest.raises(PreconditionViolated):
        exchangeVerify(FORK5, {3}, 1, 1)
    with pytest.raises(PreconditionViolated):
        exchangeVerify(FORK5, {3}, 1, 3)


def test_x_rooted_two_path():
    A1, A2 = RationalFn.fromVar(avar(1)), RationalFn.fromVar(avar(2))
    x1 = xRooted(TWO_PATH, 1)
    assert x1.expression == (RationalFn(V(2)) * A1 + A2) / RationalFn(V(1, 2))
    x2 = xRooted(TWO_PATH, 2)
    want = (RationalFn(V(1, 2)) * A2 + RationalFn(V(2)) * A1 + A2) \
        / RationalFn(V(1, 2) * V(2))
    assert x2.expression == want
    assert x1.positive and x2.positive


def test_x_rooted_modes_agree():
    for t in (TWO_PATH, BUSH8, BUSH7):
        for i in t.vertices():
            a = xRooted(t, i, mode='closed')
            b = xRooted(t, i, mode='recurrence')
            assert a.expression == b.expression


def test_x_rooted_bush8_final_group():
    rep = xRooted(BUSH8, 4)
    A4, A6, A7 = (LaurentPoly.var(avar(i)) for i in (4, 6, 7))
    I1, I2, I4 = V(*range(1, 9)), V(*range(2, 9)), V(4, 6, 7)
    inner = V(6) * V(7) * A4 + V(7) * A6 + V(6) * A7
    want = RationalFn(I1 * I2 * inner, I1 * I2 * I4)
    assert rep.terms[-1] == want
    assert rep.termCount == 3
    assert rep.positive


def test_x_rooted_substitutes_back():
    for t in (TWO_PATH, BUSH7):
        bindings = {yvar(t.weaklyBelow(x)): yDet(t.graph, t.weaklyBelow(x))
                    for x in t.vertices()}
        for i in t.vertices():
            rep = xRooted(t, i)
            assert substitute(rep.expression, bindings) == \
                RationalFn.fromVar(xvar(i))


def test_y_singleton_minimal():
    rep = ySingleton(BUSH8, 3)
    assert rep.expression == RationalFn(V(3))
    assert rep.termCount == 1


def test_y_singleton_bush8_golden():
    rep = ySingleton(BUSH8, 2)
    I2 = V(*range(2, 9))
    wantTerms = [
        RationalFn(I2, V(3) * V(4, 6, 7) * V(5, 8)),
        RationalFn(1, V(3)),
        RationalFn(V(6) * V(7), V(4, 6, 7)),
        RationalFn(V(8), V(5, 8)),
    ]
    assert rep.termCount == 4
    for got, want in zip(rep.terms, wantTerms):
        assert got == want
    total = RationalFn(0)
    for w in wantTerms:
        total = total + w
    assert rep.expression == total
    assert rep.positive


def test_y_singleton_two_path():
    rep = ySingleton(TWO_PATH, 1)
    assert rep.expression == RationalFn(V(1, 2) + 1, V(2))


def test_y_general_two_path_full_set():
    rep = yGeneral(TWO_PATH, {1, 2})
    assert rep.termCount == 1
    assert rep.expression == RationalFn(V(1, 2))


def test_y_general_cluster_sets_collapse():
    for t in (BUSH8, BUSH7):
        for x in t.vertices():
            S = t.weaklyBelow(x)
            rep = yGeneral(t, S)
            assert rep.expression == RationalFn(LaurentPoly.var(yvar(S)))


def test_y_general_bush7_golden():
    rep = yGeneral(BUSH7, {1, 3})
    assert rep.termCount == 5
    I1, I2, I3, I6 = V(*range(1, 8)), V(2, 4, 5), V(3, 6, 7), V(6, 7)
    den = I2 * I3 * I6
    wantTerms = [
        RationalFn(I3 * V(4) * V(5) * V(7), den),
        RationalFn(I2 * I6 * V(7), den),
        RationalFn(I1 * V(7), den),
        RationalFn(I3 * I3 * V(4) * V(5), den),
        RationalFn(I1 * I3, den),
    ]
    for got, want in zip(rep.terms, wantTerms):
        assert got == want
    want = RationalFn(I3 * V(4) * V(5) * V(7) + I2 * I6 * V(7) + I1 * V(7)
                      + I3 * I3 * V(4) * V(5) + I1 * I3, den)
    assert rep.expression == want
    assert rep.positive


def test_y_general_disconnected_product():
    rep = yGeneral(BUSH8, {3, 8})
    a = yGeneral(BUSH8, {3}).expression
    b = yGeneral(BUSH8, {8}).expression
    assert rep.expression == a * b
    with pytest.raises(NotConnected):
        yGeneral(BUSH8, {3, 8}, strict=True)


def test_y_transpositions_two_path():
    got = yTranspositions(TWO_PATH, {1, 2})
    y1 = ySingleton(TWO_PATH, 1).expression
    y2 = ySingleton(TWO_PATH, 2).expression
    assert got == y1 * y2 - RationalFn(1)
    assert got == yGeneral(TWO_PATH, {1, 2}).expression


def test_y_transpositions_matches_general():
    for t in (BUSH7, BUSH8):
        for S in ({1, 3}, {1, 2}, {2, 4, 5}, {1, 2, 3}):
            if not t.graph.isConnectedSet(S):
                continue
            assert yTranspositions(t, S) == yGeneral(t, S).expression


def test_y_transpositions_requires_connected():
    with pytest.raises(NotConnected):
        yTranspositions(BUSH8, {3, 8})


def test_substitute_cluster_and_compare():
    assert substituteClusterAndCompare(TWO_PATH, {1})
    for x in BUSH8.vertices():
        assert substituteClusterAndCompare(BUSH8, BUSH8.weaklyBelow(x))
    g = BUSH8.graph
    for S in g.connectedSubsets():
        if len(S) <= 3:
            assert substituteClusterAndCompare(BUSH8, S)


def test_in_cluster_split_identities():
    # Y of a disconnected set, via determinants, is the product over the
    # subtrees that make it up; check both flavors used by the expansions.
    t = BUSH8
    g = t.graph
    for x in t.vertices():
        below = t.strictlyBelow(x)
        want = RationalFn(1)
        for c in t.childrenOf(x):
            want = want * yDet(g, t.weaklyBelow(c))
        got = RationalFn(1)
        for comp in g.connectedComponents(below):
            got = got * yDet(g, comp)
        assert got == want
    for u in (6, 8, 3, 2):
        cut = t.weaklyBelow(1) - t.weaklyAbove(u)
        got = RationalFn(1)
        for comp in g.connectedComponents(cut):
            got = got * yDet(g, comp)
        from glp.lpcalc import belowMinusChain
        sym = belowMinusChain(t, 1, u)
        bindings = {yvar(t.weaklyBelow(x)): yDet(g, t.weaklyBelow(x))
                    for x in t.vertices()}
        assert substitute(sym, bindings) == got


def test_y_subset_var():
    assert ySubsetVar(BUSH8.graph, {3, 8}) == V(3) * V(8)
    assert ySubsetVar(BUSH8.graph, {5, 8}) == V(5, 8)
    assert ySubsetVar(BUSH8.graph, set()) == LaurentPoly.constant(1)


def test_star_conjecture_n4():
    report = starConjectureCheck(4)
    assert report['n'] == 4
    assert report['cluster'] == {
        'nested': True,
        'maximalOnComplementOf2': True,
        'plusFullSetIsRootedClusterAt2': True,
    }
    bySet = {tuple(r['set']): r for r in report['results']}
    assert bySet[(3,)]['holds']
    assert bySet[(2,)]['holds']
    assert not report['allHold']
    assert bySet[(1,)]['detUnit'] == '4'
    assert bySet[(1,)]['formulaUnit'] == '7'
    assert not bySet[(1,)]['holds']
    assert bySet[(1, 2)]['detUnit'] == '7'
    assert bySet[(1, 2)]['formulaUnit'] == '5'
    assert bySet[(1, 2, 3, 4)]['detUnit'] == '20'
    assert bySet[(1, 2, 3, 4)]['formulaUnit'] == '12'


def test_star_conjecture_precondition():
    with pytest.raises(PreconditionViolated):
        starConjectureCheck(2)
