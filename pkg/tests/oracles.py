"""Brute-force sympy models of the shuffle-algebra maps, written directly
from the defining formulas and independent of the qloop kernels."""

import itertools

import sympy as sp

from qloop.multipoly import MLaurent

q = sp.Symbol("q")


def sym(color, slot):
    return sp.Symbol(f"z{color}_{slot}")


def zeta_trig(dmat, ci, cj, z, w):
    return (z - q ** (-dmat[ci][cj]) * w) / (z - w)


def zeta_geom(dmat, order, ci, cj, z, w):
    if ci == cj:
        return zeta_trig(dmat, ci, cj, z, w)
    d = dmat[ci][cj]
    if order.index(ci) < order.index(cj):
        if d == 0:
            return 1 - z / w
        out = q ** (-d)
        for c in range(-d):
            out *= 1 - z / w * q ** (2 * c + d)
        return out
    if d == 0:
        return 1 - w / z
    out = 1
    for c in range(1, -d + 1):
        out *= 1 - w / z * q ** (2 * c + d)
    return out


def _symmetrize(expr, ncol):
    groups = [[sym(c, a) for a in range(1, n + 1)] for c, n in sorted(ncol.items())]
    total = 0
    for perms in itertools.product(*[list(itertools.permutations(g)) for g in groups]):
        sub = {}
        for g, p in zip(groups, perms):
            sub.update(zip(g, p))
        total += expr.xreplace(sub)
    return total


def upsilon_sympy(terms, dmat, ncol, sign="+", geom_order=None):
    """terms: word -> Laurent dict in q.  Returns the symmetrized rational
    function (trig) or Laurent polynomial (geom_order given)."""
    total = 0
    for w, p in terms.items():
        expr = sum(c * q**e for e, c in p.items())
        seen = {c: 0 for c in ncol}
        vs = []
        for c, k in w:
            seen[c] += 1
            vs.append((c, sym(c, seen[c]), k))
        for a in range(len(vs)):
            expr *= vs[a][1] ** vs[a][2]
            for b in range(a + 1, len(vs)):
                (ca, za, _), (cb, zb, _) = vs[a], vs[b]
                if geom_order is not None:
                    expr *= zeta_geom(dmat, geom_order, ca, cb, za, zb)
                elif sign == "+":
                    expr *= zeta_trig(dmat, ca, cb, za, zb)
                else:
                    expr *= zeta_trig(dmat, cb, ca, zb, za)
        total += expr
    return _symmetrize(total, ncol)


def to_sympy(p: MLaurent):
    out = 0
    for m, c in p.terms.items():
        coef = sum(a * q**e for e, a in c.num.items()) / sum(a * q**e for e, a in c.den.items())
        term = coef
        for v, e in m:
            term *= sym(v.color, v.slot) ** e
        out += term
    return out


def shuf_to_sympy(R, order):
    expr = to_sympy(R.numerator)
    if R.kind == "geom":
        return expr
    n = R.dims
    cols = sorted(n, key=order.index)
    for a, ci in enumerate(cols):
        for cj in cols[a + 1:]:
            for s in range(1, n[ci] + 1):
                for t in range(1, n[cj] + 1):
                    expr /= sym(ci, s) - sym(cj, t)
    return expr


def is_zero(expr):
    return sp.cancel(sp.together(expr)) == 0
