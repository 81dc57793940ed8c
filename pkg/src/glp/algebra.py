"""Exact multivariate Laurent polynomials and rational functions over the integers.

Variables are plain tuples so that Python's tuple comparison realises the
global variable order directly:

    ('A', i)            coefficient variable attached to vertex i
    ('X', i)            initial cluster variable attached to vertex i
    ('Y', (v1, v2...))  cluster variable indexed by a sorted vertex tuple

A monomial is a tuple of (variable, exponent) pairs, sorted by variable,
with no zero exponents; the empty tuple is the constant monomial.
Exponents may be negative (Laurent).  A polynomial is a dict from monomial
to nonzero integer coefficient, wrapped in LaurentPoly.

Rational functions keep a numerator/denominator pair of true polynomials
in a normal form suitable for printing: the pair is shifted by the common
monomial so both parts are ordinary polynomials with no shared monomial
factor, collapsed to a single polynomial when the denominator divides the
numerator exactly, stripped of integer content, and sign-normalised on the
denominator.  Equal values can still differ by a common non-monomial
factor, so equality always cross-multiplies.
"""

from __future__ import annotations

import functools
import math
import re


def avar(i):
    """Coefficient variable A_i."""
    return ('A', i)


def xvar(i):
    """Initial variable X_i."""
    return ('X', i)


def yvar(vertices):
    """Cluster variable Y indexed by a set of vertices."""
    return ('Y', tuple(sorted(vertices)))


def monomialDegree(m):
    return sum(e for _, e in m)


def _cmpMonomial(m1, m2):
    """Graded order: total degree first, then for the earliest variable
    where the exponents differ the larger exponent wins."""
    d1, d2 = monomialDegree(m1), monomialDegree(m2)
    if d1 != d2:
        return -1 if d1 < d2 else 1
    i = j = 0
    while i < len(m1) or j < len(m2):
        v1 = m1[i][0] if i < len(m1) else None
        v2 = m2[j][0] if j < len(m2) else None
        if v2 is None or (v1 is not None and v1 < v2):
            e1, e2 = m1[i][1], 0
            i += 1
        elif v1 is None or v2 < v1:
            e1, e2 = 0, m2[j][1]
            j += 1
        else:
            e1, e2 = m1[i][1], m2[j][1]
            i += 1
            j += 1
        if e1 != e2:
            return 1 if e1 > e2 else -1
    return 0


monomialKey = functools.cmp_to_key(_cmpMonomial)


def mulMonomial(m1, m2):
    """Product of two sorted monomials (merge, dropping zero exponents)."""
    if not m1:
        return m2
    if not m2:
        return m1
    out = []
    i = j = 0
    while i < len(m1) and j < len(m2):
        v1, e1 = m1[i]
        v2, e2 = m2[j]
        if v1 < v2:
            out.append(m1[i])
            i += 1
        elif v2 < v1:
            out.append(m2[j])
            j += 1
        else:
            e = e1 + e2
            if e:
                out.append((v1, e))
            i += 1
            j += 1
    out.extend(m1[i:])
    out.extend(m2[j:])
    return tuple(out)


def _mulViaPacked(a, b):
    """Product of two term maps via integer-packed exponent vectors.

    Signed fields: every exponent of the product stays within the field
    width chosen from the operands, so packing is injective and monomial
    multiplication becomes integer addition."""
    varSet = set()
    bound = 1
    for terms in (a, b):
        for m in terms:
            for v, e in m:
                varSet.add(v)
                if e > bound:
                    bound = e
                elif -e > bound:
                    bound = -e
    varList = sorted(varSet)
    width = (2 * bound).bit_length() + 2
    at = {v: width * i for i, v in enumerate(varList)}
    pa = {}
    for m, c in a.items():
        k = 0
        for v, e in m:
            k += e << at[v]
        pa[k] = c
    pb = {}
    for m, c in b.items():
        k = 0
        for v, e in m:
            k += e << at[v]
        pb[k] = c
    out = {}
    get = out.get
    for k1, c1 in pa.items():
        for k2, c2 in pb.items():
            k = k1 + k2
            s = get(k, 0) + c1 * c2
            if s:
                out[k] = s
            else:
                del out[k]
    full = 1 << width
    res = {}
    for k, c in out.items():
        m = []
        kk = k
        for v in varList:
            f = kk & (full - 1)
            if f >= full >> 1:
                f -= full
            kk = (kk - f) >> width
            if f:
                m.append((v, f))
        res[tuple(m)] = c
    return LaurentPoly(res)


class LaurentPoly:
    """Integer-coefficient Laurent polynomial with a canonical term map."""

    __slots__ = ('terms',)

    def __init__(self, terms=None):
        self.terms = {m: c for m, c in (terms or {}).items() if c}

    @staticmethod
    def constant(c):
        return LaurentPoly({(): c} if c else {})

    @staticmethod
    def var(v, exp=1):
        return LaurentPoly({((v, exp),): 1} if exp else {(): 1})

    @staticmethod
    def monomial(m, coeff=1):
        return LaurentPoly({tuple(m): coeff})

    def isZero(self):
        return not self.terms

    def isConstant(self):
        return not self.terms or (len(self.terms) == 1 and () in self.terms)

    def freeze(self):
        """Hashable identity for use as a cache key."""
        return tuple(sorted(self.terms.items()))

    def variables(self):
        seen = set()
        for m in self.terms:
            for v, _ in m:
                seen.add(v)
        return seen

    def leadingMonomial(self):
        if not self.terms:
            raise ValueError('zero polynomial has no leading monomial')
        return max(self.terms, key=monomialKey)

    def __eq__(self, other):
        if isinstance(other, int):
            other = LaurentPoly.constant(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(self.freeze())

    def __neg__(self):
        return LaurentPoly({m: -c for m, c in self.terms.items()})

    def __add__(self, other):
        if isinstance(other, int):
            other = LaurentPoly.constant(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return LaurentPoly(out)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, int):
            other = LaurentPoly.constant(other)
        return self + (-other)

    def __rsub__(self, other):
        return LaurentPoly.constant(other) + (-self)

    def __mul__(self, other):
        if isinstance(other, int):
            if other == 0:
                return LaurentPoly()
            return LaurentPoly({m: c * other for m, c in self.terms.items()})
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        a, b = self.terms, other.terms
        if len(a) > len(b):
            a, b = b, a
        if len(a) * len(b) > 256:
            return _mulViaPacked(a, b)
        out = {}
        for m1, c1 in a.items():
            for m2, c2 in b.items():
                m = mulMonomial(m1, m2)
                s = out.get(m, 0) + c1 * c2
                if s:
                    out[m] = s
                else:
                    del out[m]
        return LaurentPoly(out)

    __rmul__ = __mul__

    def __pow__(self, e):
        if e < 0:
            raise ValueError('use RationalFn for negative powers')
        result = LaurentPoly.constant(1)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base if e > 1 else base
            e >>= 1
        return result

    def shift(self, m):
        """Multiply every term by the monomial m."""
        if not m:
            return self
        return LaurentPoly({mulMonomial(t, m): c for t, c in self.terms.items()})

    def content(self):
        g = 0
        for c in self.terms.values():
            g = math.gcd(g, c)
        return g

    def __repr__(self):
        return canonicalString(self)


def minExponents(p):
    """Per-variable minimum exponent across all monomials of p.

    A variable missing from some monomial counts as exponent 0 there, so
    the result is <= 0 unless the variable occurs in every monomial."""
    lows = {}
    first = True
    for m in p.terms:
        present = dict(m)
        if first:
            lows = dict(present)
            first = False
        else:
            for v in list(lows):
                lows[v] = min(lows[v], present.get(v, 0))
            for v, e in present.items():
                if v not in lows:
                    lows[v] = min(0, e)
        for v in lows:
            if v not in present:
                lows[v] = min(lows[v], 0)
    return {v: e for v, e in lows.items() if e}


def dividePoly(n, d):
    """Exact division of true polynomials; returns the quotient or None.

    Greedy leading-term division: when d divides n every intermediate
    leading term of the remainder is divisible by lt(d), so the loop
    terminates with zero remainder; the first non-divisible leading term
    proves indivisibility.  Runs on integer-packed exponent vectors so
    the leading-term scan compares plain ints; monomials with negative
    exponents fall back to the tuple-based loop."""
    if d.isZero():
        raise ZeroDivisionError('polynomial division by zero')
    if n.isZero():
        return LaurentPoly()
    hi = 0
    varSet = set()
    for p in (n, d):
        for m in p.terms:
            for v, e in m:
                if e < 0:
                    return _dividePolySlow(n, d)
                varSet.add(v)
                if e > hi:
                    hi = e
    varList = sorted(varSet)
    width = (2 * hi + 2).bit_length() + 1
    shifts = [width * k for k in range(len(varList))]
    at = dict(zip(varList, shifts))
    mask = (1 << width) - 1

    def packM(m):
        k = 0
        for v, e in m:
            k += e << at[v]
        return k

    rp = {}
    for m, c in n.terms.items():
        rp[packM(m)] = c
    dp = {}
    for m, c in d.terms.items():
        dp[packM(m)] = c
    ltdK = max(dp)
    ltdC = dp[ltdK]
    ltdF = [(ltdK >> s) & mask for s in shifts]
    dtail = [(k, c) for k, c in dp.items() if k != ltdK]
    q = {}
    while rp:
        ltrK = max(rp)
        c = rp[ltrK]
        if c % ltdC:
            return None
        for s, df in zip(shifts, ltdF):
            if df and ((ltrK >> s) & mask) < df:
                return None
        qk = ltrK - ltdK
        tc = c // ltdC
        q[qk] = tc
        del rp[ltrK]
        for k2, c2 in dtail:
            kk = qk + k2
            s2 = rp.get(kk, 0) - tc * c2
            if s2:
                rp[kk] = s2
            else:
                rp.pop(kk, None)
    out = {}
    for k, c in q.items():
        m = []
        for v, s in zip(varList, shifts):
            e = (k >> s) & mask
            if e:
                m.append((v, e))
        out[tuple(m)] = c
    return LaurentPoly(out)


def _dividePolySlow(n, d):
    ltd = d.leadingMonomial()
    ltdExp = dict(ltd)
    ltdCoeff = d.terms[ltd]
    q = {}
    r = LaurentPoly(dict(n.terms))
    while not r.isZero():
        ltr = r.leadingMonomial()
        c = r.terms[ltr]
        if c % ltdCoeff:
            return None
        exps = dict(ltr)
        for v, e in ltdExp.items():
            if exps.get(v, 0) < e:
                return None
        tm = []
        for v, e in exps.items():
            e -= ltdExp.get(v, 0)
            if e:
                tm.append((v, e))
        tm = tuple(sorted(tm))
        tc = c // ltdCoeff
        q[tm] = tc
        r = r - d.shift(tm) * tc
    return LaurentPoly(q)


class RationalFn:
    """Quotient of integer polynomials in normal form; equality cross-multiplies."""

    __slots__ = ('num', 'den')

    def __init__(self, num, den=None):
        if isinstance(num, int):
            num = LaurentPoly.constant(num)
        if den is None:
            den = LaurentPoly.constant(1)
        elif isinstance(den, int):
            den = LaurentPoly.constant(den)
        if den.isZero():
            raise ZeroDivisionError('rational function with zero denominator')
        if num.isZero():
            self.num = LaurentPoly()
            self.den = LaurentPoly.constant(1)
            return
        lowsN = minExponents(num)
        lowsD = minExponents(den)
        joint = {}
        for v in set(lowsN) | set(lowsD):
            e = min(lowsN.get(v, 0), lowsD.get(v, 0))
            if e:
                joint[v] = -e
        if joint:
            m = tuple(sorted(joint.items()))
            num = num.shift(m)
            den = den.shift(m)
        if den.isConstant():
            c = den.terms[()]
            g = math.gcd(num.content(), c)
            num = LaurentPoly({t: k // g for t, k in num.terms.items()})
            c //= g
            if c < 0:
                num, c = -num, -c
            self.num = num
            self.den = LaurentPoly.constant(c)
            return
        q = dividePoly(num, den)
        if q is not None:
            self.num = q
            self.den = LaurentPoly.constant(1)
            return
        g = math.gcd(num.content(), den.content())
        if g > 1:
            num = LaurentPoly({t: c // g for t, c in num.terms.items()})
            den = LaurentPoly({t: c // g for t, c in den.terms.items()})
        if den.terms[den.leadingMonomial()] < 0:
            num, den = -num, -den
        self.num = num
        self.den = den

    @staticmethod
    def fromVar(v):
        return RationalFn(LaurentPoly.var(v))

    def isZero(self):
        return self.num.isZero()

    def isLaurent(self):
        """True when the value lies in the Laurent polynomial ring."""
        return len(self.den.terms) == 1 and next(iter(self.den.terms.values())) == 1

    def toLaurent(self):
        if not self.isLaurent():
            raise ValueError('value is not a Laurent polynomial')
        m = next(iter(self.den.terms))
        inv = tuple((v, -e) for v, e in m)
        return self.num.shift(inv)

    def __eq__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return (self.num * other.den).terms == (other.num * self.den).terms

    __hash__ = None

    def __neg__(self):
        r = object.__new__(RationalFn)
        r.num = -self.num
        r.den = self.den
        return r

    def __add__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return RationalFn(self.num * other.den + other.num * self.den,
                          self.den * other.den)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return _coerce(other) + (-self)

    def __mul__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return RationalFn(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        if other.isZero():
            raise ZeroDivisionError('division by the zero rational function')
        return RationalFn(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return _coerce(other) / self

    def __pow__(self, e):
        if e == 0:
            return RationalFn(1)
        if e < 0:
            return RationalFn(self.den, self.num) ** (-e)
        r = object.__new__(RationalFn)
        r.num = self.num ** e
        r.den = self.den ** e
        return r

    def __repr__(self):
        return canonicalString(self)


def _coerce(x):
    if isinstance(x, RationalFn):
        return x
    if isinstance(x, LaurentPoly):
        return RationalFn(x)
    if isinstance(x, int):
        return RationalFn(x)
    return None


def polyArith(a, b, op):
    """Field arithmetic on polynomials and rational functions.

    op is one of 'add', 'sub', 'mul', 'div'; the result is a RationalFn."""
    a = _coerce(a)
    b = _coerce(b)
    if a is None or b is None:
        raise TypeError('operands must be int, LaurentPoly or RationalFn')
    if op == 'add':
        return a + b
    if op == 'sub':
        return a - b
    if op == 'mul':
        return a * b
    if op == 'div':
        return a / b
    raise ValueError('unknown operation %r' % (op,))


def substitute(f, bindings):
    """Replace variables by values; unbound variables stay themselves.

    f may be a LaurentPoly or RationalFn; binding values may be ints,
    polynomials or rational functions.  Returns a RationalFn."""
    if isinstance(f, RationalFn):
        return substitute(f.num, bindings) / substitute(f.den, bindings)
    total = RationalFn(0)
    for m, c in f.terms.items():
        part = RationalFn(c)
        for v, e in m:
            if v in bindings:
                val = _coerce(bindings[v])
                part = part * val ** e
            else:
                part = part * RationalFn.fromVar(v) ** e
        total = total + part
    return total


def detFractionFree(matrix):
    """Determinant of a square matrix of rational functions.

    Denominators are cleared row by row (multiplier = product of the
    distinct denominators in the row), the integer-polynomial determinant
    is computed by fraction-free elimination with exact interior divisions
    and row swaps on zero pivots, and the row multipliers are divided back
    out at the end.  The empty matrix has determinant 1."""
    k = len(matrix)
    if k == 0:
        return RationalFn(1)
    rows = []
    multipliers = []
    for row in matrix:
        if len(row) != k:
            raise ValueError('matrix is not square')
        entries = [_coerce(e) for e in row]
        if any(e is None for e in entries):
            raise TypeError('matrix entries must be int, LaurentPoly or RationalFn')
        distinct = {}
        for e in entries:
            distinct[e.den.freeze()] = e.den
        mult = LaurentPoly.constant(1)
        for d in distinct.values():
            mult = mult * d
        cleared = []
        for e in entries:
            factor = dividePoly(mult, e.den)
            cleared.append(e.num * factor)
        rows.append(cleared)
        multipliers.append(mult)
    sign = 1
    prev = LaurentPoly.constant(1)
    for col in range(k - 1):
        if rows[col][col].isZero():
            pivotRow = None
            for r in range(col + 1, k):
                if not rows[r][col].isZero():
                    pivotRow = r
                    break
            if pivotRow is None:
                return RationalFn(0)
            rows[col], rows[pivotRow] = rows[pivotRow], rows[col]
            sign = -sign
        pivot = rows[col][col]
        for r in range(col + 1, k):
            for c in range(col + 1, k):
                numerator = rows[r][c] * pivot - rows[r][col] * rows[col][c]
                rows[r][c] = dividePoly(numerator, prev)
            rows[r][col] = LaurentPoly()
        prev = pivot
    det = rows[k - 1][k - 1]
    if sign < 0:
        det = -det
    denom = LaurentPoly.constant(1)
    for m in multipliers:
        denom = denom * m
    return RationalFn(det, denom)


def isPositive(f):
    """True when f is a nonzero Laurent polynomial with all coefficients > 0."""
    if isinstance(f, RationalFn):
        if not f.isLaurent():
            return False
        f = f.toLaurent()
    return bool(f.terms) and all(c > 0 for c in f.terms.values())


def _varString(v):
    kind, idx = v
    if kind == 'Y':
        return 'Y{%s}' % ','.join(str(i) for i in idx)
    return '%s%d' % (kind, idx)


def _termString(m, coeff):
    if not m:
        return str(coeff)
    factors = []
    for v, e in m:
        s = _varString(v)
        if e != 1:
            s += '^%d' % e
        factors.append(s)
    body = '*'.join(factors)
    if coeff == 1:
        return body
    return '%d*%s' % (coeff, body)


def canonicalString(f):
    """Deterministic rendering under the graded term order, largest term first."""
    if isinstance(f, RationalFn):
        if f.den.isConstant() and f.den.terms.get((), 0) == 1:
            return canonicalString(f.num)
        return '(%s)/(%s)' % (canonicalString(f.num), canonicalString(f.den))
    if not f.terms:
        return '0'
    parts = []
    for m in sorted(f.terms, key=monomialKey, reverse=True):
        c = f.terms[m]
        body = _termString(m, abs(c))
        if not parts:
            parts.append(body if c > 0 else '-' + body)
        else:
            parts.append('%s %s' % ('+' if c > 0 else '-', body))
    return ' '.join(parts)


_TOKEN = re.compile(r'\s*(Y\{[0-9,]+\}|[AX]\d+|\^-?\d+|-?\d+|[*/()+-])')


def parseCanonical(text):
    """Parse the canonicalString grammar back into a RationalFn.

    Used by tests to compare printed goldens; accepts optional whitespace
    around operators."""
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ValueError('bad token at %r' % text[pos:pos + 10])
        tokens.append(m.group(1))
        pos = m.end()
    state = {'i': 0}

    def peek():
        return tokens[state['i']] if state['i'] < len(tokens) else None

    def take():
        t = peek()
        state['i'] += 1
        return t

    def parseFactor():
        t = take()
        if t == '(':
            inner = parsePoly()
            if take() != ')':
                raise ValueError('expected closing parenthesis')
            return inner
        if t is None:
            raise ValueError('unexpected end of input')
        if re.fullmatch(r'-?\d+', t):
            return RationalFn(int(t))
        if t.startswith('Y{'):
            verts = tuple(int(s) for s in t[2:-1].split(','))
            base = RationalFn.fromVar(yvar(verts))
        elif t[0] in 'AX':
            base = RationalFn.fromVar((t[0], int(t[1:])))
        else:
            raise ValueError('unexpected token %r' % t)
        if peek() and peek().startswith('^'):
            base = base ** int(take()[1:])
        return base

    def parseTerm():
        value = parseFactor()
        while peek() in ('*', '/'):
            op = take()
            rhs = parseFactor()
            value = value * rhs if op == '*' else value / rhs
        return value

    def parsePoly():
        negate = False
        if peek() == '-':
            take()
            negate = True
        value = parseTerm()
        if negate:
            value = -value
        while peek() in ('+', '-'):
            op = take()
            rhs = parseTerm()
            value = value + rhs if op == '+' else value - rhs
        return value

    result = parsePoly()
    if state['i'] != len(tokens):
        raise ValueError('trailing input after position %d' % state['i'])
    return result
