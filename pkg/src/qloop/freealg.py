"""Words in the generators e_{i,k}, the free algebra modulo the quadratic
relation, straightening to non-increasing words, and relation generators
(quadratic, loop Serre, zig-zag relations rho_Z)."""

from __future__ import annotations

import heapq
import itertools
from collections import defaultdict
from fractions import Fraction

from .cartan import CartanMatrix
from .scalars import QRat, qbinomial
from .zigzag import DistZigZag, RefinedSelection, graph, refined_selections, topological_order

__all__ = [
    "Word",
    "FreeElem",
    "parse_word",
    "format_word",
    "word_key",
    "word_compare",
    "non_increasing",
    "adjacent_non_increasing",
    "StraightenBudgetExceeded",
    "StraightenStats",
    "straighten",
    "quad_relation",
    "quad_modified_relation",
    "serre_coefficient",
    "eh_prefactor",
    "eH_coefficient",
    "rho_coefficient",
    "rho_tau",
    "homogeneity_center",
    "tau_gate_value",
    "order_independence_check",
]

Word = tuple  # tuple of (color: str, exponent: int)


def parse_word(text: str) -> Word:
    """``"i:0,j:-1"`` -> (('i', 0), ('j', -1)); empty string is the empty word."""
    text = text.strip()
    if not text:
        return ()
    out = []
    for part in text.split(","):
        try:
            c, k = part.strip().rsplit(":", 1)
            out.append((c.strip(), int(k)))
        except ValueError:
            raise ValueError(f"bad letter {part!r}; expected color:exponent") from None
    return tuple(out)


def format_word(w: Word) -> str:
    return ",".join(f"{c}:{k}" for c, k in w)


def word_key(w: Word, C: CartanMatrix) -> tuple:
    """Sort key for the lexicographic order: higher exponent = smaller letter."""
    return tuple((-k, C.index(c)) for c, k in w)


def word_compare(v: Word, w: Word, C: CartanMatrix) -> int:
    a, b = word_key(v, C), word_key(w, C)
    return (a > b) - (a < b)


def non_increasing(w: Word, C: CartanMatrix) -> bool:
    n = len(w)
    for a in range(n):
        ia, ka = w[a]
        for b in range(a + 1, n):
            ib, kb = w[b]
            cnt = sum(1 for s in range(a, b) if w[s][0] != ib)
            if ka < kb + cnt:
                continue
            if ka == kb + cnt and C.index(ia) >= C.index(ib):
                continue
            return False
    return True


def _pair_violates(ia, ka, ib, kb, C) -> bool:
    if ia == ib:
        return ka > kb
    return ka >= kb + 2 or (ka == kb + 1 and C.index(ia) < C.index(ib))


def adjacent_non_increasing(w: Word, C: CartanMatrix) -> bool:
    return not any(_pair_violates(*w[a], *w[a + 1], C) for a in range(len(w) - 1))


# ---------------------------------------------------------------------------


class FreeElem:
    """Finite Q(q)-linear combination of words."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {tuple(w): c for w, c in (terms or {}).items() if c}

    @classmethod
    def word(cls, w, c=1) -> "FreeElem":
        c = c if isinstance(c, QRat) else QRat(c)
        return cls({tuple(w): c})

    @classmethod
    def from_laurent(cls, terms: dict) -> "FreeElem":
        """From ``word -> {qexp: coeff}``."""
        return cls({w: QRat.from_laurent(p) for w, p in terms.items() if p})

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def __add__(self, other):
        out = dict(self.terms)
        for w, c in other.terms.items():
            v = out.get(w)
            v = c if v is None else v + c
            if v:
                out[w] = v
            else:
                out.pop(w, None)
        return FreeElem(out)

    def __neg__(self):
        return FreeElem({w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "FreeElem":
        c = c if isinstance(c, QRat) else QRat(c)
        if not c:
            return FreeElem()
        return FreeElem({w: v * c for w, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, FreeElem):
            out: dict = {}
            for w1, c1 in self.terms.items():
                for w2, c2 in other.terms.items():
                    w = w1 + w2
                    v = out.get(w)
                    out[w] = c1 * c2 if v is None else v + c1 * c2
            return FreeElem(out)
        return self.scale(other)

    __rmul__ = scale

    def __eq__(self, other):
        return isinstance(other, FreeElem) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def degree(self):
        """(dimension vector, total exponent) if homogeneous, else None."""
        degs = {_word_degree(w) for w in self.terms}
        if len(degs) != 1:
            return None
        return degs.pop()

    def split_by_degree(self) -> dict:
        out: dict = defaultdict(dict)
        for w, c in self.terms.items():
            out[_word_degree(w)][w] = c
        return {d: FreeElem(t) for d, t in out.items()}

    def sorted_terms(self, C: CartanMatrix):
        return sorted(self.terms.items(), key=lambda t: word_key(t[0], C))

    def laurent_terms(self) -> tuple[dict, QRat]:
        """``(terms, scale)`` with integer Laurent coefficients such that
        self = scale * sum(terms).  Used by the fast kernels."""
        den = {0: 1}
        from .scalars import lp_mul

        for c in self.terms.values():
            if not c.is_laurent():
                if QRat(c.den) != QRat(den) and not (QRat(den) / QRat(c.den)).is_laurent():
                    den = lp_mul(den, c.den)
        D = QRat(den) if den != {0: 1} else QRat(1)
        scaled = {w: c * D for w, c in self.terms.items()}
        lcm = 1
        for c in scaled.values():
            for v in c.num.values():
                if isinstance(v, Fraction):
                    lcm = lcm * v.denominator // _gcd(lcm, v.denominator)
        out = {}
        for w, c in scaled.items():
            if not c.is_laurent():
                raise ArithmeticError("could not clear denominators")
            (e0, lc), = c.den.items()
            out[w] = {e - e0: int(v * lcm / lc) for e, v in c.num.items()}
        return out, QRat(1) / (D * lcm)

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for w, c in sorted(self.terms.items()):
            parts.append(f"({c})*e[{format_word(w)}]")
        return " + ".join(parts)

    def __repr__(self):
        return f"FreeElem({self})"

    def to_json(self, C: CartanMatrix | None = None) -> dict:
        items = self.sorted_terms(C) if C is not None else sorted(self.terms.items())
        return {"terms": [{"word": [[c, k] for c, k in w], "c": v.to_json()} for w, v in items]}

    @classmethod
    def from_json(cls, obj) -> "FreeElem":
        try:
            return cls({tuple((str(c), int(k)) for c, k in t["word"]): QRat.from_json(t["c"]) for t in obj["terms"]})
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"malformed FreeElem JSON: {exc}") from exc


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def _word_degree(w: Word):
    cnt: dict = defaultdict(int)
    for c, _ in w:
        cnt[c] += 1
    return tuple(sorted(cnt.items())), sum(k for _, k in w)


# ---------------------------------------------------------------------------
# straightening


class StraightenBudgetExceeded(RuntimeError):
    def __init__(self, done: FreeElem, pending: dict):
        super().__init__(f"rewrite budget exceeded with {len(pending)} pending words")
        self.done = done
        self.pending = pending


class StraightenStats:
    """Rewrite count and exponent drift observed during straightening."""

    def __init__(self):
        self.rewrites = 0
        self.drift = 0

    def observe(self, lo, hi, word):
        for _, k in word:
            if k < lo:
                self.drift = max(self.drift, lo - k)
            elif k > hi:
                self.drift = max(self.drift, k - hi)


def straighten(x: FreeElem, C: CartanMatrix, budget: int = 2_000_000, stats: StraightenStats | None = None) -> FreeElem:
    """Rewrite x in the basis of non-increasing words.

    Words are processed in increasing lexicographic order; rewriting the
    leftmost violating adjacent pair only produces strictly larger words,
    so every word is visited once and the result is exact.
    """
    if stats is None:
        stats = StraightenStats()
    if x.is_zero():
        return FreeElem()
    terms, scale = x.laurent_terms()
    coef = {w: dict(p) for w, p in terms.items()}
    heap = [(word_key(w, C), w) for w in coef]
    heapq.heapify(heap)
    exps = [k for w in coef for _, k in w]
    lo, hi = min(exps), max(exps)
    out = {}

    def push(w, p, shift, sign):
        v = coef.get(w)
        if v is None:
            coef[w] = {e + shift: sign * a for e, a in p.items()}
            heapq.heappush(heap, (word_key(w, C), w))
            return
        for e, a in p.items():
            v[e + shift] = v.get(e + shift, 0) + sign * a

    while heap:
        _, w = heapq.heappop(heap)
        p = {e: a for e, a in coef.pop(w).items() if a}
        if not p:
            continue
        pos = -1
        for a in range(len(w) - 1):
            if _pair_violates(*w[a], *w[a + 1], C):
                pos = a
                break
        if pos < 0:
            out[w] = p
            continue
        stats.rewrites += 1
        if stats.rewrites > budget:
            coef[w] = p
            pending = {v: QRat.from_laurent(c) * scale for v, c in coef.items() if any(c.values())}
            raise StraightenBudgetExceeded(FreeElem({v: QRat.from_laurent(c) * scale for v, c in out.items()}), pending)
        (i, a), (j, b) = w[pos], w[pos + 1]
        head, tail = w[:pos], w[pos + 2:]
        if i == j and a == b + 1:
            nw = head + ((i, b), (i, b + 1)) + tail
            stats.observe(lo, hi, nw)
            push(nw, p, 2, 1)
            continue
        d = C.dd(i, j)
        for nw, shift, sign in (
            (head + ((i, a - 1), (j, b + 1)) + tail, d, 1),
            (head + ((j, b), (i, a)) + tail, d, 1),
            (head + ((j, b + 1), (i, a - 1)) + tail, 0, -1),
        ):
            stats.observe(lo, hi, nw)
            push(nw, p, shift, sign)
    return FreeElem({w: QRat.from_laurent(p) * scale for w, p in out.items()})


# ---------------------------------------------------------------------------
# relation generators


def quad_relation(C: CartanMatrix, i, j, A: int, B: int) -> FreeElem:
    """Coefficient of z^{-A} w^{-B} in
    e_i(z)e_j(w)(q^{-d}z - w) - e_j(w)e_i(z)(z - q^{-d}w)."""
    i, j = str(i), str(j)
    qm = QRat.q_power(-C.dd(i, j))
    out = FreeElem.word(((i, A + 1), (j, B)), qm)
    out = out - FreeElem.word(((i, A), (j, B + 1)))
    out = out - FreeElem.word(((j, B), (i, A + 1)))
    out = out + FreeElem.word(((j, B + 1), (i, A)), qm)
    return out


def quad_modified_relation(C: CartanMatrix, i, j, A: int, B: int) -> FreeElem:
    """Coefficient of z^{-A} w^{-B} in
    e_i(z)e_j(w) prod_c (z - w q^{2c+d}) - e_j(w)e_i(z) prod_c (z q^{2c+d} - w),
    c = 0..-d-1, for i != j."""
    i, j = str(i), str(j)
    if i == j:
        raise ValueError("the modified relation is only for i != j")
    d = C.dd(i, j)
    left = {(0, 0): QRat(1)}   # exponents of (z, w) -> coefficient
    right = {(0, 0): QRat(1)}
    for c in range(-d):
        qc = QRat.q_power(2 * c + d)
        left = _mul_zw(left, {(1, 0): QRat(1), (0, 1): -qc})
        right = _mul_zw(right, {(1, 0): qc, (0, 1): QRat(-1)})
    out = FreeElem()
    for (ez, ew), c in left.items():
        out = out + FreeElem.word(((i, A + ez), (j, B + ew)), c)
    for (ez, ew), c in right.items():
        out = out - FreeElem.word(((j, B + ew), (i, A + ez)), c)
    return out


def _mul_zw(a: dict, b: dict) -> dict:
    out: dict = {}
    for (x1, y1), c1 in a.items():
        for (x2, y2), c2 in b.items():
            key = (x1 + x2, y1 + y2)
            out[key] = out.get(key, QRat()) + c1 * c2
    return {k: v for k, v in out.items() if v}


def serre_coefficient(C: CartanMatrix, i, j, zexps, wexp: int) -> FreeElem:
    """Coefficient of prod z_r^{-zexps[r]} w^{-wexp} in the symmetrized loop
    Serre expression sum_k (-1)^k [n choose k]_q e_i(z_1)..e_i(z_k) e_j(w)
    e_i(z_{k+1})..e_i(z_n), n = 1 - d_ij."""
    i, j = str(i), str(j)
    if i == j:
        raise ValueError("the Serre relation needs i != j")
    n = 1 - C.dd(i, j)
    if len(zexps) != n:
        raise ValueError(f"need {n} z-exponents, got {len(zexps)}")
    acc: dict = {}
    for perm in itertools.permutations(zexps):
        for k in range(n + 1):
            w = tuple((i, a) for a in perm[:k]) + ((j, wexp),) + tuple((i, a) for a in perm[k:])
            c = qbinomial(n, k) * (-1) ** k
            acc[w] = acc.get(w, QRat()) + c
    return FreeElem(acc)


# ---------------------------------------------------------------------------
# zig-zag relations


def _laurent_mul(P: dict, f: dict) -> dict:
    """Multiply sparse polynomials keyed by exponent tuples (last entry = q)."""
    out: dict = defaultdict(int)
    for k1, c1 in P.items():
        for k2, c2 in f.items():
            out[tuple(a + b for a, b in zip(k1, k2))] += c1 * c2
    return {k: c for k, c in out.items() if c}


def _binomial(N, u, qu, v, qv, sign=1) -> dict:
    """sign * (q^qu z_u - q^qv z_v) as a sparse polynomial."""
    k1 = [0] * (N + 1)
    k1[u] = 1
    k1[N] = qu
    k2 = [0] * (N + 1)
    k2[v] = 1
    k2[N] = qv
    return {tuple(k1): sign, tuple(k2): -sign}


def eh_prefactor(Z: DistZigZag, S: RefinedSelection, C: CartanMatrix, order=None):
    """Laurent prefactor of e_{Z_e minus S} and the total order used.

    Returns ``(P, order)`` where ``P`` maps ``(p_0..p_{N-1}, qexp)`` to an
    integer coefficient (variables indexed like the graph's vertices) and
    ``order`` lists the vertices from largest to smallest.  Includes the
    selection sign and the sign making the result independent of the order.
    """
    G = graph(Z, C)
    V = list(G.vertices)
    N = len(V)
    idx = {v: n for n, v in enumerate(V)}
    color = {"x": Z.i, "y": Z.j}
    if order is None:
        order = topological_order(G, S)
    else:
        order = list(order)
        _check_order(G, S, order)
    pos = {v: n for n, v in enumerate(order)}
    mu = S.multiplicities()
    complement = {(e.src, e.tgt) for e in G.edges if mu[e] == 0}

    sign = S.sign
    qshift = 0
    P = {tuple([0] * (N + 1)): 1}
    for a in range(N):
        for b in range(a + 1, N):
            big, small = order[a], order[b]
            # factor for c = small < c' = big
            if small[0] == "x" and big[0] == "y":
                sign = -sign
            if (big, small) in complement:
                # (z_small - z_big q^{-dd}) = q^{-small} (zbar_small - zbar_big)
                # cancels against the denominator (zbar_big - zbar_small)
                qshift -= small[1]
                sign = -sign
                continue
            dd = C.dd(color[small[0]], color[big[0]])
            P = _laurent_mul(P, _binomial(N, idx[small], 0, idx[big], -dd))
    for e, cnt in mu.items():
        for _ in range(cnt - 1):
            P = _laurent_mul(P, _binomial(N, idx[e.src], e.src[1], idx[e.tgt], e.tgt[1]))
    # same-colour pairs listed against their natural order x_s > x_{s+2} > ...
    inv = sum(
        1
        for a in range(N)
        for b in range(a + 1, N)
        if order[a][0] == order[b][0] and order[a][1] > order[b][1]
    )
    if inv % 2:
        sign = -sign
    out = {}
    for k, c in P.items():
        k = list(k)
        k[N] += qshift
        out[tuple(k)] = c * sign
    return out, order


def _check_order(G, S, order):
    if sorted(order) != sorted(G.vertices):
        raise ValueError("order must list every vertex once")
    pos = {v: n for n, v in enumerate(order)}
    mu = S.multiplicities()
    for e in G.edges:
        if mu[e] == 0 and pos[e.src] > pos[e.tgt]:
            raise ValueError(f"order is incompatible with complement edge {e}")


def _words_from_prefactor(P: dict, order, V, colors, multidegree) -> dict:
    """word -> {qexp: coeff} for the coefficient of z^multidegree."""
    idx = {v: n for n, v in enumerate(V)}
    cols = [idx[v] for v in order]
    letters = [colors[v[0]] for v in order]
    N = len(V)
    out: dict = defaultdict(lambda: defaultdict(int))
    for key, c in P.items():
        w = tuple((letters[r], key[cols[r]] - multidegree[cols[r]]) for r in range(N))
        out[w][key[N]] += c
    return {w: {e: c for e, c in p.items() if c} for w, p in out.items()}


def _multidegree_vector(Z: DistZigZag, C: CartanMatrix, multidegree) -> list:
    V = list(graph(Z, C).vertices)
    if isinstance(multidegree, dict):
        return [multidegree.get(v, 0) for v in V]
    md = list(multidegree)
    if len(md) != len(V):
        raise ValueError(f"multidegree needs {len(V)} entries (top row then bottom row)")
    return md


def eH_coefficient(Z: DistZigZag, S: RefinedSelection, multidegree, C: CartanMatrix, order=None) -> FreeElem:
    """Coefficient of z^multidegree in e_{Z_e minus S}; multidegree is a list
    over the vertices (top row left to right, then bottom row)."""
    Z.check(C)
    P, order = eh_prefactor(Z, S, C, order)
    V = list(graph(Z, C).vertices)
    md = _multidegree_vector(Z, C, multidegree)
    return FreeElem.from_laurent(_words_from_prefactor(P, order, V, {"x": Z.i, "y": Z.j}, md))


_PREFACTOR_CACHE: dict = {}


def _rho_prefactors(Z: DistZigZag, C: CartanMatrix):
    key = (Z, C.vertices, C.d)
    if key not in _PREFACTOR_CACHE:
        _PREFACTOR_CACHE[key] = [eh_prefactor(Z, S, C) for S in refined_selections(Z)]
    return _PREFACTOR_CACHE[key]


def rho_laurent(Z: DistZigZag, multidegree, C: CartanMatrix) -> dict:
    """rho_Z coefficient as ``word -> {qexp: int}`` (fast path)."""
    Z.check(C)
    V = list(graph(Z, C).vertices)
    md = _multidegree_vector(Z, C, multidegree)
    colors = {"x": Z.i, "y": Z.j}
    acc: dict = defaultdict(lambda: defaultdict(int))
    for P, order in _rho_prefactors(Z, C):
        for w, p in _words_from_prefactor(P, order, V, colors, md).items():
            for e, c in p.items():
                acc[w][e] += c
    out = {}
    for w, p in acc.items():
        p = {e: c for e, c in p.items() if c}
        if p:
            out[w] = p
    return out


def rho_coefficient(Z: DistZigZag, multidegree, C: CartanMatrix) -> FreeElem:
    """Signed sum over refined selections of eH_coefficient."""
    return FreeElem.from_laurent(rho_laurent(Z, multidegree, C))


def homogeneity_center(Z: DistZigZag, C: CartanMatrix) -> list:
    """A balanced multidegree: total degree equal to that of the prefactor,
    spread as evenly as possible over the vertices (top row first)."""
    G = graph(Z, C)
    N = len(G.vertices)
    D = N * (N - 1) // 2 - len(G.edges) + Z.m
    base, extra = divmod(D, N)
    return [base + (1 if r < extra else 0) for r in range(N)]


def tau_gate_value(Z: DistZigZag, tau: dict) -> QRat:
    """tau evaluated at q^{(t-s)/2}, ..., q^{(s-t)/2} (top row) and
    q^{(t'-s')/2}, ..., q^{(s'-t')/2} (bottom row).

    ``tau`` maps exponent tuples (top row then bottom row) to QRat."""
    top, bottom = Z.top, Z.bottom
    vals = [(Z.t - Z.s) // 2 - r for r in range(len(top))]
    vals += [(Z.tp - Z.sp) // 2 - r for r in range(len(bottom))]
    total = QRat()
    for a, c in tau.items():
        e = sum(x * y for x, y in zip(a, vals))
        total = total + c * QRat.q_power(e)
    return total


def rho_tau(Z: DistZigZag, tau: dict, C: CartanMatrix, require_generic: bool = True) -> FreeElem:
    """sum_a tau_a * rho_coefficient(Z, -a): the coefficient of rho_Z paired
    against the Laurent polynomial tau in the vertex variables."""
    if require_generic and not tau_gate_value(Z, tau):
        raise ValueError("tau vanishes at the gate point; the relation it yields is not generic")
    out = FreeElem()
    for a, c in tau.items():
        out = out + rho_coefficient(Z, [-x for x in a], C).scale(c)
    return out


def order_independence_check(Z: DistZigZag, S: RefinedSelection, multidegree, C: CartanMatrix, order1, order2) -> bool:
    a = eH_coefficient(Z, S, multidegree, C, order1)
    b = eH_coefficient(Z, S, multidegree, C, order2)
    diff = straighten(a - b, C)
    if diff:
        raise AssertionError(f"orders give different elements; difference {diff}")
    return True
