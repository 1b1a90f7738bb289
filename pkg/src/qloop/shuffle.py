"""Shuffle algebras V^{+-}: elements, products, the map from words, wheel
conditions, and the geometric normalization Omega."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import _alternant
from .cartan import CartanMatrix, zeta, zeta_geom
from .freealg import FreeElem, quad_modified_relation, quad_relation
from .multipoly import MLaurent, Var, divisibility_order, exact_div, specialize, symmetrize
from .scalars import QRat
from .zigzag import GeneralZigZag, M_Z, enumerate_distinguished, m_Z

__all__ = [
    "ShufElem",
    "cross_denominator",
    "same_color_vandermonde",
    "shuffle_mul",
    "shuffle_mul_geom",
    "generator",
    "upsilon",
    "upsilon_is_zero",
    "upsilon_reduced",
    "upsilon_geom",
    "upsilon_by_products",
    "upsilon_laurent_is_zero",
    "unit",
    "invert_variables",
    "wheel_member",
    "wheel_general",
    "wheel_member_strong",
    "general_zigzags",
    "omega",
    "wheel_member_geom",
    "quad_modified_check",
]

X = Var("x", 0)
Y = Var("y", 0)


def _dim_key(n: dict) -> tuple:
    return tuple(sorted((str(c), k) for c, k in n.items() if k))


@dataclass(frozen=True)
class ShufElem:
    """numerator / prod_{i<j} prod_{a,b} (z_ia - z_jb)  (kind 'trig'), or a
    plain Laurent polynomial (kind 'geom')."""

    sign: str
    n: tuple  # sorted (colour, count) pairs with count > 0
    numerator: MLaurent
    kind: str = "trig"

    def __post_init__(self):
        if self.sign not in "+-" or len(self.sign) != 1:
            raise ValueError("sign must be '+' or '-'")
        if isinstance(self.n, dict):
            object.__setattr__(self, "n", _dim_key(self.n))
        if self.kind not in ("trig", "geom"):
            raise ValueError("kind must be 'trig' or 'geom'")

    @property
    def dims(self) -> dict:
        return dict(self.n)

    def size(self) -> int:
        return sum(k for _, k in self.n)

    def is_zero(self) -> bool:
        return self.numerator.is_zero()

    def __add__(self, other: "ShufElem") -> "ShufElem":
        self._same(other)
        return ShufElem(self.sign, self.n, self.numerator + other.numerator, self.kind)

    def __sub__(self, other: "ShufElem") -> "ShufElem":
        self._same(other)
        return ShufElem(self.sign, self.n, self.numerator - other.numerator, self.kind)

    def scale(self, c) -> "ShufElem":
        return ShufElem(self.sign, self.n, self.numerator * c, self.kind)

    def _same(self, other):
        if (self.sign, self.n, self.kind) != (other.sign, other.n, other.kind):
            raise ValueError("elements live in different graded pieces")

    def variables(self) -> list:
        return [Var(c, a) for c, k in self.n for a in range(1, k + 1)]

    def is_symmetric(self) -> bool:
        for c, k in self.n:
            if k < 2:
                continue
            swap = {Var(c, 1): Var(c, 2), Var(c, 2): Var(c, 1)}
            if self.numerator.rename(swap) != self.numerator:
                return False
            if k > 2:
                cyc = {Var(c, a): Var(c, a % k + 1) for a in range(1, k + 1)}
                if self.numerator.rename(cyc) != self.numerator:
                    return False
        return True

    def to_json(self) -> dict:
        out = {"sign": self.sign, "n": dict(self.n), "numerator": self.numerator.to_json()}
        if self.kind != "trig":
            out["kind"] = self.kind
        return out

    @classmethod
    def from_json(cls, obj) -> "ShufElem":
        try:
            return cls(
                obj.get("sign", "+"),
                _dim_key(obj["n"]),
                MLaurent.from_json(obj["numerator"]),
                obj.get("kind", "trig"),
            )
        except (KeyError, TypeError, AttributeError) as exc:
            raise ValueError(f"malformed ShufElem JSON: {exc}") from exc

    def __str__(self):
        dims = ",".join(f"{c}:{k}" for c, k in self.n)
        return f"ShufElem{self.sign}[{dims}]({self.numerator})"


def generator(color, k: int, sign: str = "+", kind: str = "trig") -> ShufElem:
    """Image z_{i1}^k of a single generator."""
    return ShufElem(sign, ((str(color), 1),), MLaurent.from_var(Var(str(color), 1), k), kind)


def unit(sign: str = "+", kind: str = "trig") -> ShufElem:
    return ShufElem(sign, (), MLaurent.const(1), kind)


def _canon_key(C: CartanMatrix, v: Var):
    return (C.index(v.color), v.slot)


def cross_denominator(C: CartanMatrix, n: dict) -> MLaurent:
    out = MLaurent.const(1)
    cols = sorted((c for c in n if n[c]), key=C.index)
    for a, ci in enumerate(cols):
        for cj in cols[a + 1:]:
            for s in range(1, n[ci] + 1):
                for t in range(1, n[cj] + 1):
                    out = out * (MLaurent.from_var(Var(ci, s)) - MLaurent.from_var(Var(cj, t)))
    return out


def same_color_vandermonde(n: dict) -> MLaurent:
    out = MLaurent.const(1)
    for c, k in n.items():
        for a in range(1, k + 1):
            for b in range(a + 1, k + 1):
                out = out * (MLaurent.from_var(Var(c, a)) - MLaurent.from_var(Var(c, b)))
    return out


# ---------------------------------------------------------------------------
# products by explicit symmetrization


def _kernel_factor(C, kind, sign, va: Var, vb: Var):
    """Kernel between a variable va of the left factor and vb of the right.

    Returns (numerator, denominator) where the denominator is either a pair
    (u, w) standing for z_u - z_w, or None."""
    ca, cb = va.color, vb.color
    if kind == "geom":
        if sign != "+":
            raise ValueError("the geometric product is only defined for V^+")
        zp = zeta_geom(C, ca, cb)
        num, den = zp.at(va, vb)
        if zp.is_laurent():
            return num * den ** -1, None
        return num, (va, vb)
    if sign == "+":
        num, _ = zeta(C, ca, cb).at(va, vb)
        return num, (va, vb)
    num, _ = zeta(C, cb, ca).at(vb, va)
    return num, (vb, va)


def _diff(u: Var, w: Var) -> MLaurent:
    return MLaurent.from_var(u) - MLaurent.from_var(w)


def _product(R1: ShufElem, R2: ShufElem, C: CartanMatrix, kind: str) -> ShufElem:
    if R1.sign != R2.sign:
        raise ValueError("factors must have the same sign")
    if R1.kind != kind or R2.kind != kind:
        raise ValueError(f"both factors must be of kind {kind!r}")
    n1, n2 = R1.dims, R2.dims
    N = {c: n1.get(c, 0) + n2.get(c, 0) for c in set(n1) | set(n2)}
    colors = sorted(N, key=C.index)
    choices = [list(itertools.combinations(range(1, N[c] + 1), n1.get(c, 0))) for c in colors]
    total = MLaurent()
    for pick in itertools.product(*choices):
        m1, m2 = {}, {}
        A, B = [], []
        for c, chosen in zip(colors, pick):
            rest = [a for a in range(1, N[c] + 1) if a not in chosen]
            for a, s in enumerate(chosen, start=1):
                m1[Var(c, a)] = Var(c, s)
                A.append(Var(c, s))
            for b, s in enumerate(rest, start=1):
                m2[Var(c, b)] = Var(c, s)
                B.append(Var(c, s))
        term = R1.numerator.rename(m1) * R2.numerator.rename(m2)
        sgn = 1
        for va in A:
            for vb in B:
                num, den = _kernel_factor(C, kind, R1.sign, va, vb)
                term = term * num
                if den is not None and kind == "trig":
                    u, w = den
                    if _canon_key(C, u) > _canon_key(C, w):
                        sgn = -sgn
                elif den is not None:
                    # geometric: only same-colour kernels have a denominator
                    u, w = den
                    if u.slot > w.slot:
                        sgn = -sgn
        # same-colour differences absent from this term's denominator
        for part in (A, B):
            for a, u in enumerate(part):
                for w in part[a + 1:]:
                    if u.color == w.color:
                        lo, hi = sorted((u, w), key=lambda v: v.slot)
                        term = term * _diff(lo, hi)
        total = total + (term if sgn == 1 else -term)
    out = exact_div(total, same_color_vandermonde(N))
    return ShufElem(R1.sign, _dim_key(N), out, kind)


def shuffle_mul(R1: ShufElem, R2: ShufElem, C: CartanMatrix) -> ShufElem:
    return _product(R1, R2, C, "trig")


def shuffle_mul_geom(R1: ShufElem, R2: ShufElem, C: CartanMatrix) -> ShufElem:
    return _product(R1, R2, C, "geom")


def upsilon_by_products(x: FreeElem, C: CartanMatrix, sign: str = "+", kind: str = "trig") -> ShufElem:
    """Image of x computed letter by letter with the shuffle product."""
    mul = shuffle_mul if kind == "trig" else shuffle_mul_geom
    deg = x.degree()
    if deg is None and x:
        raise ValueError("upsilon needs a homogeneous element")
    total = None
    for w, c in x.terms.items():
        acc = unit(sign, kind)
        for col, k in w:
            acc = mul(acc, generator(col, k, sign, kind), C)
        acc = acc.scale(c)
        total = acc if total is None else total + acc
    if total is None:
        return ShufElem(sign, (), MLaurent(), kind)
    return total


def upsilon_geom(x: FreeElem, C: CartanMatrix) -> ShufElem:
    return upsilon_by_products(x, C, "+", "geom")


# ---------------------------------------------------------------------------
# the map from words through the alternant kernel


def _dmat(C: CartanMatrix) -> dict:
    return {a: {b: C.dd(a, b) for b in C.vertices} for a in C.vertices}


def upsilon_reduced(x: FreeElem, C: CartanMatrix, sign: str = "+", stats=None):
    """Reduced alternant rows of the image of a homogeneous x.

    Returns ``(columns, E, coef, scale)``; the image is zero iff E is empty.
    """
    if x.is_zero():
        return [], np.zeros((0, 1), dtype=np.int64), np.zeros(0, dtype=np.int64), QRat(1)
    if x.degree() is None:
        raise ValueError("upsilon needs a homogeneous element; split by degree first")
    terms, scale = x.laurent_terms()
    cols, E, coef = _alternant.reduce_words(
        terms, C._index, _dmat(C), minus=(sign == "-"), broken=C.broken_zeta, stats=stats
    )
    return cols, E, coef, scale


def upsilon_laurent_is_zero(terms: dict, C: CartanMatrix, sign: str = "+", stats=None) -> bool:
    """Zero test for ``word -> {qexp: int}`` input (all one degree)."""
    if not terms:
        return True
    _, E, _ = _alternant.reduce_words(terms, C._index, _dmat(C), minus=(sign == "-"), broken=C.broken_zeta, stats=stats)
    return len(E) == 0


def upsilon_is_zero(x: FreeElem, C: CartanMatrix, sign: str = "+") -> bool:
    for part in x.split_by_degree().values():
        _, E, _, _ = upsilon_reduced(part, C, sign)
        if len(E):
            return False
    return True


@lru_cache(maxsize=4096)
def _schur(exps: tuple) -> MLaurent:
    """Alternant of z^exps divided by the Vandermonde, in Var('_', 1..m)."""
    m = len(exps)
    shift = exps[-1]
    lam = tuple(e - shift for e in exps)
    vs = [Var("_", a) for a in range(1, m + 1)]
    alt = MLaurent()
    for perm in itertools.permutations(range(m)):
        inv = sum(1 for a in range(m) for b in range(a + 1, m) if perm[a] > perm[b])
        mono = MLaurent.monomial({vs[perm[a]]: lam[a] for a in range(m)}, -1 if inv % 2 else 1)
        alt = alt + mono
    vdm = MLaurent.const(1)
    for a in range(m):
        for b in range(a + 1, m):
            vdm = vdm * (MLaurent.from_var(vs[a]) - MLaurent.from_var(vs[b]))
    s = exact_div(alt, vdm)
    if shift:
        s = s.times_monomial({v: shift for v in vs})
    return s


def _materialize(cols, E, coef) -> MLaurent:
    n = len(cols)
    groups: dict = {}
    for a, (c, _) in enumerate(cols):
        groups.setdefault(c, []).append(a)
    out: dict = {}
    for row, cf in zip(E.tolist(), coef.tolist()):
        piece = MLaurent.const(QRat.q_power(row[n], int(cf)))
        for c, idx in groups.items():
            s = _schur(tuple(row[a] for a in idx))
            piece = piece * s.rename({Var("_", r): Var(c, r) for r in range(1, len(idx) + 1)})
        for m, v in piece.terms.items():
            prev = out.get(m)
            out[m] = v if prev is None else prev + v
    return MLaurent(out)


def upsilon(x: FreeElem, C: CartanMatrix, sign: str = "+") -> ShufElem:
    """Image of a homogeneous element of the free algebra."""
    deg = x.degree()
    if deg is None:
        if x.is_zero():
            return ShufElem(sign, (), MLaurent())
        raise ValueError("upsilon needs a homogeneous element; split by degree first")
    cols, E, coef, scale = upsilon_reduced(x, C, sign)
    dims = dict(deg[0])
    num = _materialize(cols, E, coef) * scale if len(E) else MLaurent()
    return ShufElem(sign, _dim_key(dims), num)


# ---------------------------------------------------------------------------


def invert_variables(R: ShufElem, C: CartanMatrix) -> ShufElem:
    """z -> 1/z, moved back to the standard denominator; flips the sign."""
    if R.kind != "trig":
        raise ValueError("invert_variables acts on trigonometric elements")
    num = R.numerator.invert_variables()
    # 1/(1/z_ia - 1/z_jb) = -z_ia z_jb / (z_ia - z_jb)
    n = R.dims
    cols = sorted(n, key=C.index)
    npairs = 0
    exps: dict = {}
    for a, ci in enumerate(cols):
        for cj in cols[a + 1:]:
            npairs += n[ci] * n[cj]
            for s in range(1, n[ci] + 1):
                exps[Var(ci, s)] = exps.get(Var(ci, s), 0) + n[cj]
            for t in range(1, n[cj] + 1):
                exps[Var(cj, t)] = exps.get(Var(cj, t), 0) + n[ci]
    num = num.times_monomial(exps, -1 if npairs % 2 else 1)
    return ShufElem("-" if R.sign == "+" else "+", R.n, num)


# ---------------------------------------------------------------------------
# wheel conditions


def _zigzag_assignment(i, j, s, ntop, sp, nbot) -> dict:
    asg = {}
    for a in range(ntop):
        asg[Var(i, a + 1)] = (X, s + 2 * a)
    for b in range(nbot):
        asg[Var(j, b + 1)] = (Y, sp + 2 * b)
    return asg


def _order_at(num: MLaurent, i, j, s, ntop, sp, nbot):
    spec = specialize(num, _zigzag_assignment(i, j, s, ntop, sp, nbot), strict=False)
    return divisibility_order(spec, X, Y)


def wheel_member(R: ShufElem, C: CartanMatrix):
    """(True, None) or (False, witness) over all distinguished zig-zags."""
    n = R.dims
    for i, j in C.pairs():
        ni, nj = n.get(i, 0), n.get(j, 0)
        if not ni or not nj:
            continue
        for Z in enumerate_distinguished(C, i, j, ni, nj):
            order = _order_at(R.numerator, i, j, Z.s, Z.k + Z.m, Z.sp, Z.l + Z.m)
            if order < Z.m:
                return False, {"zigzag": Z, "required": Z.m, "found": order, "deficit": Z.m - order}
    return True, None


def wheel_general(R: ShufElem, Z: GeneralZigZag, C: CartanMatrix, bound=None) -> bool:
    n = R.dims
    ntop, nbot = len(Z.top), len(Z.bottom)
    if ntop > n.get(Z.i, 0) or nbot > n.get(Z.j, 0):
        raise ValueError("zig-zag rows do not fit the dimension vector")
    need = m_Z(Z, C) if bound is None else bound
    if need == 0:
        return True
    return _order_at(R.numerator, Z.i, Z.j, Z.s, ntop, Z.sp, nbot) >= need


def general_zigzags(C: CartanMatrix, i, j, ni: int, nj: int, geometric: bool = False):
    """Zig-zags with s = 0 fitting ni, nj slots whose bound (m_Z, or M_Z when
    ``geometric``) is positive."""
    d = C.dd(i, j)
    out = []
    for L1 in range(1, ni + 1):
        t = 2 * (L1 - 1)
        for L2 in range(1, nj + 1):
            span = 2 * (L2 - 1)
            for sp in range(-span - abs(d) - 2, t + abs(d) + 3):
                Z = GeneralZigZag(str(i), str(j), 0, t, sp, sp + span)
                b = M_Z(Z, C) if geometric else m_Z(Z, C)
                if b > 0:
                    out.append((Z, b))
    return out


def wheel_member_strong(R: ShufElem, C: CartanMatrix):
    """Divisibility for every general zig-zag fitting the dimension vector."""
    n = R.dims
    for i, j in C.pairs():
        ni, nj = n.get(i, 0), n.get(j, 0)
        if not ni or not nj:
            continue
        for Z, b in general_zigzags(C, i, j, ni, nj):
            found = _order_at(R.numerator, Z.i, Z.j, Z.s, len(Z.top), Z.sp, len(Z.bottom))
            if found < b:
                return False, {"zigzag": Z, "required": b, "found": found}
    return True, None


# ---------------------------------------------------------------------------
# geometric normalization


def omega(R: ShufElem, C: CartanMatrix) -> ShufElem:
    """R * prod_{i<j} prod_{a,b} [(1 - z_ia/z_jb) prod_c (1 - z_ia q^{2c+d}/z_jb)]
    as a Laurent polynomial."""
    if R.sign != "+" or R.kind != "trig":
        raise ValueError("omega acts on trigonometric elements of V^+")
    n = R.dims
    cols = sorted(n, key=C.index)
    num = R.numerator
    for a, ci in enumerate(cols):
        for cj in cols[a + 1:]:
            d = C.dd(ci, cj)
            for s in range(1, n[ci] + 1):
                for t in range(1, n[cj] + 1):
                    zi, zj = Var(ci, s), Var(cj, t)
                    # (1 - z_i/z_j) / (z_i - z_j) = -1/z_j
                    f = MLaurent.monomial({zj: -1}, -1)
                    for c in range(1, -d):
                        f = f * (MLaurent.const(1) - MLaurent.monomial({zi: 1, zj: -1}, QRat.q_power(2 * c + d)))
                    num = num * f
    return ShufElem("+", R.n, num, "geom")


def wheel_member_geom(R: ShufElem, C: CartanMatrix):
    """Divisibility by (x - y)^{M_Z} for every zig-zag with M_Z > 0."""
    if R.kind != "geom":
        raise ValueError("expected a geometric element")
    n = R.dims
    for i, j in C.pairs():
        ni, nj = n.get(i, 0), n.get(j, 0)
        if not ni or not nj:
            continue
        for Z, b in general_zigzags(C, i, j, ni, nj, geometric=True):
            found = _order_at(R.numerator, Z.i, Z.j, Z.s, len(Z.top), Z.sp, len(Z.bottom))
            if found < b:
                return False, {"zigzag": Z, "required": b, "found": found}
    return True, None


def quad_modified_check(C: CartanMatrix, i, j, window) -> dict:
    """Images under the geometric map of the modified and of the original
    quadratic relation, over exponent pairs (A, B) in ``window``.

    Returns {"modified_zero": bool, "original_zero": bool, "witness": ...}.
    """
    mod_zero = True
    orig_zero = True
    witness = None
    for A in window:
        for B in window:
            if not upsilon_geom(quad_modified_relation(C, i, j, A, B), C).is_zero():
                mod_zero = False
                witness = witness or ("modified", A, B)
            if not upsilon_geom(quad_relation(C, i, j, A, B), C).is_zero():
                orig_zero = False
    return {"modified_zero": mod_zero, "original_zero": orig_zero, "witness": witness}
