"""Pairings between words and shuffle elements by constant-term extraction,
and the leading-word machinery for V^-."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field

from .cartan import CartanMatrix
from .freealg import FreeElem, Word, non_increasing, word_key
from .multipoly import MLaurent, Var, symmetrize
from .scalars import QRat
from .shuffle import ShufElem, _dim_key, upsilon

__all__ = [
    "Factor",
    "CTProblem",
    "CTUnstable",
    "constant_term",
    "pair_UV",
    "pair_VU",
    "pair_UU",
    "leading_word",
    "monomial_leading_word",
    "associated_polynomial",
]


class CTUnstable(ArithmeticError):
    """The truncated expansion changed when the truncation order was raised."""


@dataclass(frozen=True)
class Factor:
    """1 / (alpha z_big + beta z_small), expanded in powers of z_small/z_big.

    ``alpha`` and ``beta`` are signed q-powers given as (sign, qexp)."""

    big: Var
    small: Var
    alpha: tuple
    beta: tuple


@dataclass
class CTProblem:
    """Constant term of numerator * prod(factors) with |order[0]| >> |order[1]| >> ..."""

    numerator: MLaurent
    factors: list
    order: list
    extra: int = field(default=0)

    def __post_init__(self):
        pos = {v: a for a, v in enumerate(self.order)}
        for f in self.factors:
            if pos[f.big] >= pos[f.small]:
                raise ValueError(f"factor {f} expands against the contour order")


def _split_numerator(p: MLaurent, order: list) -> dict:
    """Group the numerator by coefficient denominator.

    Returns den-key -> (den, {(exps..., qexp): coefficient})."""
    pos = {v: a for a, v in enumerate(order)}
    n = len(order)
    groups: dict = {}
    for m, c in p.terms.items():
        exps = [0] * n
        for v, e in m:
            if v not in pos:
                raise ValueError(f"variable {v} is not in the contour order")
            exps[pos[v]] = e
        key = tuple(sorted(c.den.items()))
        den, polys = groups.setdefault(key, (c.den, {}))
        for qe, a in c.num.items():
            k = tuple(exps) + (qe,)
            polys[k] = polys.get(k, 0) + a
    return groups


def _eliminate(poly: dict, factors: list, n: int, extra: int) -> dict:
    """Constant term in all n variables (position 0 the largest).

    ``factors`` are (big, small, (sa, ea), (sb, eb)) in positions."""
    poly = {k: v for k, v in poly.items() if v}
    for p in range(n - 1, -1, -1):
        # only non-negative powers of z_p are added from here on
        poly = {k: v for k, v in poly.items() if k[p] <= 0}
        if not poly:
            return {}
        T = max(-k[p] for k in poly) + extra
        for big, small, (sa, ea), (sb, eb) in factors:
            if small != p:
                continue
            # (1/alpha) z_big^{-1} sum_{t<=T} (-beta/alpha)^t (z_small/z_big)^t
            ratio_sign = -sa * sb
            out: dict = defaultdict(int)
            for k, v in poly.items():
                for t in range(0, T + 1):
                    if k[p] + t > 0:
                        break
                    nk = list(k)
                    nk[p] += t
                    nk[big] -= 1 + t
                    nk[-1] += -ea + t * (eb - ea)
                    out[tuple(nk)] += v * sa * (ratio_sign**t)
            poly = {k: v for k, v in out.items() if v}
        poly = {k: v for k, v in poly.items() if k[p] == 0}
    # every variable exponent is now zero; collect by q-exponent
    res: dict = defaultdict(int)
    for k, v in poly.items():
        res[k[-1]] += v
    return {e: v for e, v in res.items() if v}


def _signed_qpow(c: QRat) -> tuple:
    if not c.is_laurent() or len(c.num) != 1 or c.den != {0: 1}:
        raise ValueError(f"factor coefficients must be signed q-powers, got {c}")
    (e, a), = c.num.items()
    if a not in (1, -1):
        raise ValueError(f"factor coefficients must be signed q-powers, got {c}")
    return int(a), int(e)


def _as_pair(c) -> tuple:
    if isinstance(c, tuple):
        return c
    return _signed_qpow(QRat(c) if not isinstance(c, QRat) else c)


def constant_term(P: CTProblem, recheck: bool = True) -> QRat:
    """Constant term in every variable of the expansion of ``P``.

    Each factor's series is truncated where no further term can reach the
    constant term; with ``recheck`` the computation is repeated one order
    higher and must agree."""
    pos = {v: a for a, v in enumerate(P.order)}
    facs = [(pos[f.big], pos[f.small], _as_pair(f.alpha), _as_pair(f.beta)) for f in P.factors]
    n = len(P.order)

    def run(extra):
        total = QRat(0)
        for den, polys in _split_numerator(P.numerator, P.order).values():
            res = _eliminate(polys, facs, n, extra)
            if res:
                total = total + QRat(res, den)
        return total

    val = run(P.extra)
    if recheck and run(P.extra + 1) != val:
        raise CTUnstable("constant term changed under a higher truncation")
    return val


# ---------------------------------------------------------------------------


def _word_vars(w: Word) -> list:
    cnt: dict = defaultdict(int)
    out = []
    for c, _ in w:
        cnt[c] += 1
        out.append(Var(c, cnt[c]))
    return out


def _word_dims(w: Word) -> tuple:
    cnt: dict = defaultdict(int)
    for c, _ in w:
        cnt[c] += 1
    return _dim_key(cnt)


def _zeta_alpha(C: CartanMatrix, i, j) -> tuple:
    """Signed q-power a with zeta_ij numerator z + a w."""
    sign = 1 if C.broken_zeta else -1
    return sign, -C.dd(i, j)


def _pair_word_minus(w: Word, R: ShufElem, C: CartanMatrix, recheck: bool) -> QRat:
    # CT of z^k R(z) / prod_{a<b} zeta_{i_b i_a}(z_b/z_a), |z_1| >> ... >> |z_n|
    vs = _word_vars(w)
    n = len(w)
    num = R.numerator.times_monomial({v: k for v, (_, k) in zip(vs, w)})
    sign = 1
    factors = []
    for a in range(n):
        for b in range(a + 1, n):
            ca, cb = w[a][0], w[b][0]
            if ca == cb:
                num = num * (MLaurent.from_var(vs[b]) - MLaurent.from_var(vs[a]))
            elif C.index(cb) > C.index(ca):
                # (z_b - z_a) over the denominator factor (z_a - z_b)
                sign = -sign
            # 1/(z_b + alpha z_a)
            factors.append(Factor(vs[a], vs[b], _zeta_alpha(C, cb, ca), (1, 0)))
    val = constant_term(CTProblem(num, factors, vs), recheck=recheck)
    return val if sign == 1 else -val


def _pair_word_plus(R: ShufElem, w: Word, C: CartanMatrix, recheck: bool) -> QRat:
    # CT of z^e R(z) / prod_{a<b} zeta_{i_a i_b}(z_a/z_b), |z_1| << ... << |z_n|
    vs = _word_vars(w)
    n = len(w)
    num = R.numerator.times_monomial({v: k for v, (_, k) in zip(vs, w)})
    sign = 1
    factors = []
    for a in range(n):
        for b in range(a + 1, n):
            ca, cb = w[a][0], w[b][0]
            if ca == cb:
                num = num * (MLaurent.from_var(vs[a]) - MLaurent.from_var(vs[b]))
            elif C.index(ca) > C.index(cb):
                sign = -sign
            # 1/(z_a + alpha z_b) with z_b the larger variable
            factors.append(Factor(vs[b], vs[a], _zeta_alpha(C, ca, cb), (1, 0)))
    val = constant_term(CTProblem(num, factors, list(reversed(vs))), recheck=recheck)
    return val if sign == 1 else -val


def pair_UV(x: FreeElem, R: ShufElem, C: CartanMatrix, recheck: bool = True) -> QRat:
    """<x, R> for x a combination of e-words and R in V^-."""
    if R.sign != "-":
        raise ValueError("pair_UV expects an element of V^-")
    total = QRat(0)
    for w, c in x.terms.items():
        if _word_dims(w) != R.n:
            continue
        total = total + c * _pair_word_minus(w, R, C, recheck)
    return total


def pair_VU(R: ShufElem, y: FreeElem, C: CartanMatrix, recheck: bool = True) -> QRat:
    """<R, y> for R in V^+ and y a combination of f-words (f_{i,k} as (i, k))."""
    if R.sign != "+":
        raise ValueError("pair_VU expects an element of V^+")
    total = QRat(0)
    for w, c in y.terms.items():
        if _word_dims(w) != R.n:
            continue
        total = total + c * _pair_word_plus(R, w, C, recheck)
    return total


def pair_UU(x: FreeElem, y: FreeElem, C: CartanMatrix, recheck: bool = True) -> QRat:
    """<x, y> between e-words and f-words."""
    total = QRat(0)
    base = QRat({-1: 1, 1: -1})
    for (dims, _), part in y.split_by_degree().items():
        R = upsilon(part, C, "-")
        if R.is_zero():
            continue
        size = sum(k for _, k in dims)
        total = total + pair_UV(x, R, C, recheck) * base ** (-size)
    return total


# ---------------------------------------------------------------------------
# leading words


def _cleared(R: ShufElem, C: CartanMatrix) -> MLaurent:
    """R * prod_{i<j} prod_{a,b} (1 - z_jb/z_ia) as a Laurent polynomial."""
    n = R.dims
    cols = sorted(n, key=C.index)
    exps = {}
    for a, ci in enumerate(cols):
        later = sum(n[cj] for cj in cols[a + 1:])
        for s in range(1, n[ci] + 1):
            exps[Var(ci, s)] = -later
    return R.numerator.times_monomial(exps)


def monomial_leading_word(mono: dict, C: CartanMatrix) -> Word:
    """Largest word over all orderings of the variables of z^{-l}.

    ``mono`` maps every Var (including those with exponent 0) to -l."""
    remaining = [(v.color, -e) for v, e in mono.items()]
    word = []
    while remaining:
        best = None
        for idx, (c, l) in enumerate(remaining):
            before = sum(1 for d, _ in word if C.index(d) > C.index(c))
            after = sum(1 for t, (d, _) in enumerate(remaining) if t != idx and C.index(d) < C.index(c))
            letter = (c, l - before + after)
            if best is None or word_key([letter], C) > word_key([best[1]], C):
                best = (idx, letter)
        word.append(best[1])
        remaining.pop(best[0])
    return tuple(word)


def leading_word(R: ShufElem, C: CartanMatrix) -> Word:
    if R.sign != "-":
        raise ValueError("leading words are defined for V^-")
    if R.is_zero():
        raise ValueError("the zero element has no leading word")
    best = None
    vs = R.variables()
    for m in _cleared(R, C).terms:
        exps = dict(m)
        w = monomial_leading_word({v: exps.get(v, 0) for v in vs}, C)
        if best is None or word_key(w, C) > word_key(best, C):
            best = w
    return best


def associated_polynomial(w: Word, C: CartanMatrix) -> ShufElem:
    """Element of V^- whose cleared numerator is the symmetrized monomial of w."""
    w = tuple((str(c), int(k)) for c, k in w)
    if not non_increasing(w, C):
        raise ValueError("associated_polynomial needs a non-increasing word")
    vs = _word_vars(w)
    mono = {}
    n = len(w)
    for a, (c, k) in enumerate(w):
        before = sum(1 for s in range(a) if C.index(w[s][0]) > C.index(c))
        after = sum(1 for t in range(a + 1, n) if C.index(w[t][0]) < C.index(c))
        mono[vs[a]] = -(k + before - after)
    dims = dict(_word_dims(w))
    cleared = symmetrize(MLaurent.monomial(mono), dims)
    cols = sorted(dims, key=C.index)
    exps = {}
    for a, ci in enumerate(cols):
        later = sum(dims[cj] for cj in cols[a + 1:])
        for s in range(1, dims[ci] + 1):
            exps[Var(ci, s)] = later
    return ShufElem("-", _dim_key(dims), cleared.times_monomial(exps))
