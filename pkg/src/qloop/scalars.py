"""Exact scalars: rationals and the field Q(q) of rational functions in q.

A Laurent polynomial in q is a plain ``dict`` mapping exponents to nonzero
``int``/``Fraction`` coefficients.  :class:`QRat` stores a reduced ratio of
two of them in canonical form: the denominator has lowest exponent 0 and
leading (top-degree) coefficient 1.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

__all__ = [
    "QRat",
    "QRatZeroDivision",
    "PoleError",
    "qint",
    "qfactorial",
    "qbinomial",
    "qrat_eval",
    "lp_add",
    "lp_mul",
    "lp_scale",
    "lp_shift",
    "lp_str",
]


class QRatZeroDivision(ZeroDivisionError):
    """Division by the zero element of Q(q)."""


class PoleError(ValueError):
    """Evaluation of a rational function at a root of its denominator."""


def _norm(c):
    """Demote integral Fractions to int so that hashing and printing agree."""
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


# ---------------------------------------------------------------------------
# Laurent polynomials in q as dicts {exp: coeff}


def lp_add(a: dict, b: dict, sign: int = 1) -> dict:
    out = dict(a)
    for e, c in b.items():
        v = out.get(e, 0) + sign * c
        if v:
            out[e] = v
        else:
            out.pop(e, None)
    return out


def lp_mul(a: dict, b: dict) -> dict:
    if len(a) == 1:
        (ea, ca), = a.items()
        return {ea + e: ca * c for e, c in b.items()}
    if len(b) == 1:
        (eb, cb), = b.items()
        return {e + eb: c * cb for e, c in a.items()}
    out: dict = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = ea + eb
            out[e] = out.get(e, 0) + ca * cb
    return {e: c for e, c in out.items() if c}


def lp_scale(a: dict, c) -> dict:
    if not c:
        return {}
    return {e: v * c for e, v in a.items()}


def lp_shift(a: dict, k: int) -> dict:
    return {e + k: c for e, c in a.items()}


def _to_poly(a: dict) -> tuple[int, list]:
    """Split a nonzero Laurent polynomial as q^v * P(q), P a coefficient list
    (ascending) with P(0) != 0."""
    v = min(a)
    top = max(a)
    return v, [Fraction(a.get(v + i, 0)) for i in range(top - v + 1)]


def _from_poly(coeffs: list, shift: int = 0) -> dict:
    return {i + shift: _norm(c) for i, c in enumerate(coeffs) if c}


def _poly_divmod(a: list, b: list) -> tuple[list, list]:
    a = list(a)
    db = len(b) - 1
    lead = b[-1]
    if len(a) - 1 < db:
        return [Fraction(0)], a
    quot = [Fraction(0)] * (len(a) - db)
    for i in range(len(a) - 1, db - 1, -1):
        c = a[i] / lead
        if c:
            quot[i - db] = c
            for j in range(db + 1):
                a[i - db + j] -= c * b[j]
    rem = a[:db] or [Fraction(0)]
    while len(rem) > 1 and rem[-1] == 0:
        rem.pop()
    return quot, rem


def _poly_gcd(a: list, b: list) -> list:
    while any(b):
        _, r = _poly_divmod(a, b)
        a, b = b, r
    while len(a) > 1 and a[-1] == 0:
        a.pop()
    return [c / a[-1] for c in a]


def lp_str(a: dict, var: str = "q") -> str:
    if not a:
        return "0"
    parts = []
    for e in sorted(a, reverse=True):
        c = a[e]
        if e == 0:
            mono = ""
        elif e == 1:
            mono = var
        else:
            mono = f"{var}^{e}"
        if mono:
            if c == 1:
                body = mono
            elif c == -1:
                body = "-" + mono
            else:
                body = f"{c}*{mono}"
        else:
            body = str(c)
        parts.append(body)
    out = parts[0]
    for p in parts[1:]:
        out += " - " + p[1:] if p.startswith("-") else " + " + p
    return out


# ---------------------------------------------------------------------------


class QRat:
    """An element of Q(q), always stored reduced and canonically normalized."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num=None, den=None, *, _reduced: bool = False):
        if num is None:
            num = {}
        elif not isinstance(num, dict):
            num = {0: num} if num else {}
        num = {e: _norm(c) for e, c in num.items() if c}
        if den is None:
            den = {0: 1}
        elif not isinstance(den, dict):
            den = {0: den}
        den = {e: _norm(c) for e, c in den.items() if c}
        if not den:
            raise QRatZeroDivision("zero denominator")
        if not _reduced:
            num, den = _reduce(num, den)
        self.num = num
        self.den = den
        self._hash = None

    # constructors -------------------------------------------------------
    @classmethod
    def from_laurent(cls, d: dict) -> "QRat":
        return cls(d, None, _reduced=True)

    @classmethod
    def q_power(cls, k: int, c=1) -> "QRat":
        return cls({k: c}, None, _reduced=True)

    # predicates ---------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.num

    def is_laurent(self) -> bool:
        return len(self.den) == 1

    def is_monomial(self) -> bool:
        return len(self.num) == 1 and len(self.den) == 1

    def __bool__(self) -> bool:
        return bool(self.num)

    # arithmetic ---------------------------------------------------------
    def _coerce(self, other) -> "QRat":
        if isinstance(other, QRat):
            return other
        if isinstance(other, (int, Fraction)):
            return QRat.from_laurent({0: other} if other else {})
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.den == other.den:
            if len(self.den) == 1:
                return QRat(lp_add(self.num, other.num), self.den, _reduced=True)
            return QRat(lp_add(self.num, other.num), self.den)
        num = lp_add(lp_mul(self.num, other.den), lp_mul(other.num, self.den))
        return QRat(num, lp_mul(self.den, other.den))

    __radd__ = __add__

    def __neg__(self):
        return QRat({e: -c for e, c in self.num.items()}, self.den, _reduced=True)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not self.num or not other.num:
            return QRat()
        num = lp_mul(self.num, other.num)
        if len(self.den) == 1 and len(other.den) == 1:
            return QRat(num, lp_mul(self.den, other.den), _reduced=True)
        return QRat(num, lp_mul(self.den, other.den))

    __rmul__ = __mul__

    def inverse(self) -> "QRat":
        if not self.num:
            raise QRatZeroDivision("inverse of 0 in Q(q)")
        return QRat(self.den, self.num)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = QRat.from_laurent({0: 1})
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # comparison ---------------------------------------------------------
    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((frozenset(self.num.items()), frozenset(self.den.items())))
        return self._hash

    # evaluation / io ----------------------------------------------------
    def eval(self, q0) -> Fraction:
        return qrat_eval(self, q0)

    def __str__(self):
        if len(self.den) == 1 and self.den.get(0) == 1:
            return lp_str(self.num)
        n, d = lp_str(self.num), lp_str(self.den)
        if len(self.num) > 1:
            n = f"({n})"
        if len(self.den) > 1:
            d = f"({d})"
        return f"{n}/{d}"

    def __repr__(self):
        return f"QRat({self})"

    def to_json(self) -> dict:
        def enc(d):
            return [[e, str(Fraction(c))] for e, c in sorted(d.items())]

        return {"num": enc(self.num), "den": enc(self.den)}

    @classmethod
    def from_json(cls, obj) -> "QRat":
        if isinstance(obj, (int, str)):
            return cls(Fraction(obj))
        try:
            num = {int(e): Fraction(c) for e, c in obj["num"]}
            den = {int(e): Fraction(c) for e, c in obj.get("den", [[0, "1"]])}
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"malformed QRat JSON: {obj!r}") from exc
        return cls(num, den)


def _reduce(num: dict, den: dict) -> tuple[dict, dict]:
    if not num:
        return {}, {0: 1}
    if len(den) == 1:
        (e, c), = den.items()
        if c == 1:
            return lp_shift(num, -e), {0: 1}
        inv = Fraction(1) / Fraction(c)
        return {k - e: _norm(v * inv) for k, v in num.items()}, {0: 1}
    vn, pn = _to_poly(num)
    vd, pd = _to_poly(den)
    g = _poly_gcd(list(pn), list(pd))
    if len(g) > 1:
        pn, _ = _poly_divmod(pn, g)
        pd, _ = _poly_divmod(pd, g)
    while len(pd) > 1 and pd[-1] == 0:
        pd.pop()
    lead = pd[-1]
    pn = [c / lead for c in pn]
    pd = [c / lead for c in pd]
    return _from_poly(pn, vn - vd), _from_poly(pd)


def qrat_eval(a: QRat, q0) -> Fraction:
    """Evaluate at a rational q0 exactly."""
    q0 = Fraction(q0)

    def ev(d):
        total = Fraction(0)
        for e, c in d.items():
            if e < 0 and q0 == 0:
                raise PoleError("negative power of q at q0 = 0")
            total += c * q0**e
        return total

    if q0 == 0 and a.num and min(a.num) < 0:
        raise PoleError("pole of the numerator's Laurent part at q0 = 0")
    dv = ev(a.den)
    if dv == 0:
        raise PoleError(f"denominator vanishes at q0 = {q0}")
    return ev(a.num) / dv


def qint(n: int) -> QRat:
    """Symmetric quantum integer [n]_q = (q^n - q^-n)/(q - q^-1)."""
    if n == 0:
        return QRat()
    sgn = 1 if n > 0 else -1
    n = abs(n)
    return QRat.from_laurent({n - 1 - 2 * i: sgn for i in range(n)})


@lru_cache(maxsize=None)
def qfactorial(n: int) -> QRat:
    if n < 0:
        raise ValueError("factorial of a negative integer")
    out = QRat(1)
    for k in range(1, n + 1):
        out = out * qint(k)
    return out


@lru_cache(maxsize=None)
def qbinomial(n: int, k: int) -> QRat:
    """Gaussian binomial [n]!/([k]![n-k]!) in the symmetric normalization."""
    if n < 0 or k < 0:
        raise ValueError("qbinomial needs nonnegative arguments")
    if k > n:
        raise ValueError(f"qbinomial({n}, {k}): k exceeds n")
    return qfactorial(n) / (qfactorial(k) * qfactorial(n - k))
