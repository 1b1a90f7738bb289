"""Multivariate Laurent polynomials over Q(q) in color-indexed variables.

Variables are ``Var(color, slot)``; a monomial is a sorted tuple of
``(Var, exponent)`` pairs with zero exponents omitted; a polynomial is a
dict ``monomial -> QRat`` without zero entries.
"""

from __future__ import annotations

import itertools
import math
from collections import namedtuple
from fractions import Fraction

from .scalars import QRat

__all__ = [
    "Var",
    "MLaurent",
    "NotDivisible",
    "INFINITE",
    "var",
    "symmetrize",
    "exact_div",
    "specialize",
    "divisibility_order",
    "coefficient",
]

INFINITE = math.inf


class Var(namedtuple("Var", "color slot")):
    __slots__ = ()

    def __str__(self):
        return self.color if self.slot == 0 else f"{self.color}.{self.slot}"

    @classmethod
    def parse(cls, text: str) -> "Var":
        if "." in text:
            c, s = text.rsplit(".", 1)
            return cls(c, int(s))
        return cls(text, 0)


class NotDivisible(ArithmeticError):
    """Raised by exact_div; ``remainder`` holds the nonzero remainder."""

    def __init__(self, msg, remainder=None):
        super().__init__(msg)
        self.remainder = remainder


_ONE = QRat(1)


def _mono_mul(m1: tuple, m2: tuple) -> tuple:
    if not m1:
        return m2
    if not m2:
        return m1
    d = dict(m1)
    for v, e in m2:
        s = d.get(v, 0) + e
        if s:
            d[v] = s
        else:
            del d[v]
    return tuple(sorted(d.items()))


def _mono_inv(m: tuple) -> tuple:
    return tuple((v, -e) for v, e in m)


def _coerce_scalar(c) -> QRat:
    if isinstance(c, QRat):
        return c
    return QRat(c)


class MLaurent:
    """Sparse multivariate Laurent polynomial with QRat coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        if terms is None:
            terms = {}
        self.terms = {m: c for m, c in terms.items() if c}

    # -- constructors ---------------------------------------------------
    @classmethod
    def const(cls, c) -> "MLaurent":
        c = _coerce_scalar(c)
        return cls({(): c}) if c else cls()

    @classmethod
    def monomial(cls, exps: dict, c=1) -> "MLaurent":
        mono = tuple(sorted((v, e) for v, e in exps.items() if e))
        return cls({mono: _coerce_scalar(c)})

    @classmethod
    def from_var(cls, v: Var, e: int = 1) -> "MLaurent":
        return cls.monomial({v: e})

    # -- basic queries ---------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def variables(self) -> set:
        return {v for m in self.terms for v, _ in m}

    def is_constant(self) -> bool:
        return all(not m for m in self.terms)

    def constant_value(self) -> QRat:
        return self.terms.get((), QRat())

    def degree_range(self, v: Var) -> tuple[int, int]:
        es = [dict(m).get(v, 0) for m in self.terms]
        return min(es), max(es)

    # -- arithmetic ------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, MLaurent):
            return other
        if isinstance(other, (int, Fraction, QRat)):
            return MLaurent.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = out.get(m)
            v = c if v is None else v + c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return MLaurent(out)

    __radd__ = __add__

    def __neg__(self):
        return MLaurent({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, QRat)):
            c = _coerce_scalar(other)
            if not c:
                return MLaurent()
            return MLaurent({m: v * c for m, v in self.terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                v = out.get(m)
                out[m] = c1 * c2 if v is None else v + c1 * c2
        return MLaurent(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            if len(self.terms) != 1:
                raise ValueError("negative power of a non-monomial")
            (m, c), = self.terms.items()
            return MLaurent({_mono_inv(m): c.inverse()}) ** (-k)
        out = MLaurent.const(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    # -- substitutions ---------------------------------------------------
    def rename(self, mapping: dict) -> "MLaurent":
        """Substitute variables by variables (``Var -> Var``); others kept."""
        out: dict = {}
        for m, c in self.terms.items():
            d: dict = {}
            for v, e in m:
                w = mapping.get(v, v)
                s = d.get(w, 0) + e
                if s:
                    d[w] = s
                else:
                    d.pop(w, None)
            key = tuple(sorted(d.items()))
            prev = out.get(key)
            out[key] = c if prev is None else prev + c
        return MLaurent(out)

    def invert_variables(self) -> "MLaurent":
        return MLaurent({_mono_inv(m): c for m, c in self.terms.items()})

    def map_coefficients(self, f) -> "MLaurent":
        return MLaurent({m: f(c) for m, c in self.terms.items()})

    def times_monomial(self, exps: dict, c=1) -> "MLaurent":
        mono = tuple(sorted((v, e) for v, e in exps.items() if e))
        c = _coerce_scalar(c)
        return MLaurent({_mono_mul(m, mono): v * c for m, v in self.terms.items()})

    # -- printing / io ---------------------------------------------------
    def sorted_terms(self):
        def key(item):
            m, _ = item
            return (-sum(e for _, e in m), tuple((v.color, v.slot, -e) for v, e in m))

        return sorted(self.terms.items(), key=key)

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.sorted_terms():
            mono = "*".join(str(v) if e == 1 else f"{v}^{e}" for v, e in m)
            cs = str(c)
            if not mono:
                parts.append(cs)
            elif cs == "1":
                parts.append(mono)
            elif cs == "-1":
                parts.append("-" + mono)
            else:
                parts.append(f"({cs})*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self):
        return f"MLaurent({self})"

    def to_json(self) -> dict:
        return {
            "terms": [
                {"m": {str(v): e for v, e in m}, "c": c.to_json()}
                for m, c in self.sorted_terms()
            ]
        }

    @classmethod
    def from_json(cls, obj) -> "MLaurent":
        try:
            out = MLaurent()
            for t in obj["terms"]:
                exps = {Var.parse(k): int(e) for k, e in t["m"].items()}
                out = out + MLaurent.monomial(exps, QRat.from_json(t["c"]))
            return out
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed polynomial JSON: {exc}") from exc


def var(color, slot: int = 0) -> MLaurent:
    return MLaurent.from_var(Var(str(color), slot))


# ---------------------------------------------------------------------------


def symmetrize(p: MLaurent, n: dict) -> MLaurent:
    """Sum of p over all slot permutations within each color.

    ``n`` maps color -> number of slots; slots are 1..n[color].
    """
    for v in p.variables():
        if v.color in n and not 1 <= v.slot <= n[v.color]:
            raise ValueError(f"variable {v} outside slots 1..{n[v.color]}")
    colors = [c for c in n if n[c] > 1 and any(v.color == c for v in p.variables())]
    perms = [list(itertools.permutations(range(1, n[c] + 1))) for c in colors]
    factor = 1
    for c in n:
        if c not in colors:
            factor *= math.factorial(n[c])
    out: dict = {}
    for choice in itertools.product(*perms):
        mapping = {}
        for c, perm in zip(colors, choice):
            for a, b in enumerate(perm, start=1):
                mapping[Var(c, a)] = Var(c, b)
        for m, c in p.rename(mapping).terms.items():
            prev = out.get(m)
            out[m] = c if prev is None else prev + c
    res = MLaurent(out)
    return res * factor if factor != 1 else res


def _split_monomial(p: MLaurent) -> tuple[tuple, MLaurent]:
    """Write p = z^m * p' with p' a polynomial not divisible by any variable."""
    mins: dict = {}
    vs = p.variables()
    for v in vs:
        mins[v] = min(dict(m).get(v, 0) for m in p.terms)
    mono = tuple(sorted((v, e) for v, e in mins.items() if e))
    return mono, MLaurent({_mono_mul(m, _mono_inv(mono)): c for m, c in p.terms.items()})


def _lex_key(m: tuple, order: dict) -> tuple:
    vec = [0] * len(order)
    for v, e in m:
        vec[order[v]] = e
    return tuple(vec)


def exact_div(p: MLaurent, d: MLaurent) -> MLaurent:
    """Quotient t with t*d == p; raises NotDivisible with the remainder."""
    if d.is_zero():
        raise ZeroDivisionError("exact_div by the zero polynomial")
    if p.is_zero():
        return MLaurent()
    if len(d.terms) == 1:
        (m, c), = d.terms.items()
        inv = c.inverse()
        mi = _mono_inv(m)
        return MLaurent({_mono_mul(mm, mi): v * inv for mm, v in p.terms.items()})
    md, dp = _split_monomial(d)
    mp, pp = _split_monomial(p)
    order = {v: i for i, v in enumerate(sorted(pp.variables() | dp.variables()))}
    dkeys = {m: _lex_key(m, order) for m in dp.terms}
    lt_d = max(dp.terms, key=dkeys.get)
    lt_d_vec = dkeys[lt_d]
    lc_inv = dp.terms[lt_d].inverse()
    lt_d_inv = _mono_inv(lt_d)
    rem = dict(pp.terms)
    rkeys = {m: _lex_key(m, order) for m in rem}
    quot: dict = {}
    while rem:
        lt = max(rem, key=rkeys.get)
        vec = rkeys[lt]
        if any(a < b for a, b in zip(vec, lt_d_vec)):
            raise NotDivisible("polynomial is not divisible", MLaurent(rem))
        qm = _mono_mul(lt, lt_d_inv)
        qc = rem[lt] * lc_inv
        quot[qm] = qc
        for m, c in dp.terms.items():
            mm = _mono_mul(qm, m)
            v = rem.get(mm)
            v = -qc * c if v is None else v - qc * c
            if v:
                if mm not in rkeys:
                    rkeys[mm] = _lex_key(mm, order)
                rem[mm] = v
            else:
                rem.pop(mm, None)
    shift = _mono_mul(mp, _mono_inv(md))
    return MLaurent({_mono_mul(m, shift): c for m, c in quot.items()})


def specialize(p: MLaurent, assignment: dict, strict: bool = True) -> MLaurent:
    """Substitute ``Var -> (Var, qexp)``, i.e. z -> w * q^qexp.

    With ``strict`` every variable of p must be assigned; otherwise
    unassigned variables are kept.
    """
    out: dict = {}
    for m, c in p.terms.items():
        d: dict = {}
        qe = 0
        for v, e in m:
            if v in assignment:
                w, s = assignment[v]
                qe += s * e
            elif strict:
                raise KeyError(f"unassigned variable {v}")
            else:
                w = v
            t = d.get(w, 0) + e
            if t:
                d[w] = t
            else:
                d.pop(w, None)
        key = tuple(sorted(d.items()))
        c = c * QRat.q_power(qe) if qe else c
        prev = out.get(key)
        out[key] = c if prev is None else prev + c
    return MLaurent(out)


def _div_by_difference(p: MLaurent, x: Var, y: Var) -> MLaurent | None:
    """Divide by (x - y) with synthetic division in x; None if not divisible."""
    # group by the exponent of x; then p = sum_k x^k c_k(rest)
    groups: dict = {}
    for m, c in p.terms.items():
        d = dict(m)
        k = d.pop(x, 0)
        groups.setdefault(k, {})[tuple(sorted(d.items()))] = c
    ks = sorted(groups)
    lo, hi = ks[0], ks[-1]
    # p(x) = x^lo * P(x), P polynomial of degree hi-lo in x; divide by (x - y)
    quot: dict = {}
    carry: dict = {}
    ymono = ((y, 1),)
    for k in range(hi, lo, -1):
        cur = dict(groups.get(k, {}))
        for m, c in carry.items():
            v = cur.get(m)
            v = c if v is None else v + c
            if v:
                cur[m] = v
            else:
                cur.pop(m, None)
        quot[k - 1] = cur
        carry = {_mono_mul(m, ymono): c for m, c in cur.items()}
    last = dict(groups.get(lo, {}))
    for m, c in carry.items():
        v = last.get(m)
        v = c if v is None else v + c
        if v:
            last[m] = v
        else:
            last.pop(m, None)
    if last:
        return None
    out: dict = {}
    for k, part in quot.items():
        for m, c in part.items():
            key = _mono_mul(m, ((x, k),)) if k else m
            out[key] = c
    return MLaurent(out)


def divisibility_order(p: MLaurent, x: Var = Var("x", 0), y: Var = Var("y", 0)):
    """Largest m with (x - y)^m dividing p; INFINITE for p = 0."""
    if p.is_zero():
        return INFINITE
    m = 0
    while True:
        nxt = _div_by_difference(p, x, y)
        if nxt is None:
            return m
        p = nxt
        m += 1


def coefficient(p: MLaurent, multidegree: dict) -> QRat:
    mono = tuple(sorted((v, e) for v, e in multidegree.items() if e))
    return p.terms.get(mono, QRat())
