"""Sparse polynomials with exponent vectors packed into single integers.

Internal engine for the bulk identity sweeps.  A monomial over m
variables is encoded as sum(e_i << (W*i)) with signed field values; two
encodings add exactly like exponent vectors as long as every field stays
inside (-2^(W-1), 2^(W-1)), which the callers guarantee by bounding how
many factors they multiply.  Dict keys are then plain ints, so monomial
multiplication is integer addition and hashing is trivial.

A polynomial is a dict mapping packed monomial -> nonzero int coefficient.
"""

FIELD = 16


def pack(exps):
    """Encode an exponent vector (list of small signed ints)."""
    k = 0
    for i, e in enumerate(exps):
        k += e << (FIELD * i)
    return k


def fromTerms(terms, varIndex):
    """Convert {monomial-tuple: coeff} using varIndex: variable -> field."""
    out = {}
    for m, c in terms.items():
        k = 0
        for v, e in m:
            k += e << (FIELD * varIndex[v])
        out[k] = out.get(k, 0) + c
    return {k: c for k, c in out.items() if c}


def mul(a, b):
    if not a or not b:
        return {}
    if len(a) > len(b):
        a, b = b, a
    if len(a) == 1:
        ((k1, c1),) = a.items()
        return {k1 + k2: c1 * c2 for k2, c2 in b.items()}
    out = {}
    get = out.get
    bi = list(b.items())
    for k1, c1 in a.items():
        for k2, c2 in bi:
            k = k1 + k2
            out[k] = get(k, 0) + c1 * c2
    for k in [k for k, c in out.items() if not c]:
        del out[k]
    return out


def mulMany(polys):
    """Product of several polynomials, smallest pair first."""
    factors = sorted(polys, key=len)
    if not factors:
        return {0: 1}
    acc = factors[0]
    for f in factors[1:]:
        acc = mul(acc, f)
    return acc


def scale(a, c):
    if c == 0:
        return {}
    if c == 1:
        return a
    return {k: v * c for k, v in a.items()}


def addInto(acc, a, c=1):
    """acc += c*a in place."""
    get = acc.get
    for k, v in a.items():
        s = get(k, 0) + v * c
        if s:
            acc[k] = s
        else:
            del acc[k]
    return acc
