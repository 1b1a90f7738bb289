"""Zig-zags: rows of indices, diagonal arrows, trapezoids and selections.

Vertices are ``('x', a)`` for the top row (color i) and ``('y', b)`` for the
bottom row (color j).  Edges are ``Edge(src, tgt, kind)`` with kind one of
``H`` (horizontal, c -> c+2), ``SW`` (top a -> bottom a+d) and ``NW``
(bottom b -> top b+d).
"""

from __future__ import annotations

import heapq
import itertools
from collections import Counter, namedtuple
from dataclasses import dataclass

from .cartan import CartanMatrix
from .multipoly import MLaurent, Var

__all__ = [
    "GeneralZigZag",
    "DistZigZag",
    "Edge",
    "ZigZagGraph",
    "RefinedSelection",
    "m_Z",
    "M_Z",
    "enumerate_distinguished",
    "graph",
    "refined_selections",
    "coarse_selections",
    "selection_sum",
    "verify_selection_identity",
    "topological_order",
    "topological_orders",
    "SelectionIdentityError",
]

Edge = namedtuple("Edge", "src tgt kind")


class SelectionIdentityError(AssertionError):
    def __init__(self, zz, poly):
        super().__init__(f"selection identity fails for {zz}: {poly}")
        self.poly = poly


@dataclass(frozen=True)
class GeneralZigZag:
    i: str
    j: str
    s: int
    t: int
    sp: int
    tp: int

    def __post_init__(self):
        if self.i == self.j:
            raise ValueError("a zig-zag needs two distinct vertices")
        for lo, hi in ((self.s, self.t), (self.sp, self.tp)):
            if (hi - lo) % 2 or hi < lo - 2:
                raise ValueError(f"bad row {lo}..{hi}")

    @property
    def top(self) -> list:
        return list(range(self.s, self.t + 1, 2))

    @property
    def bottom(self) -> list:
        return list(range(self.sp, self.tp + 1, 2))


@dataclass(frozen=True)
class DistZigZag:
    """Distinguished zig-zag: a minimal one (k, l) repeated m times."""

    i: str
    j: str
    k: int
    l: int
    m: int
    s: int = 0

    def __post_init__(self):
        if self.k < 0 or self.l < 0 or self.m < 1:
            raise ValueError("need k, l >= 0 and m >= 1")

    @property
    def d(self) -> int:
        return -(self.k + self.l)

    @property
    def t(self) -> int:
        return self.s + 2 * (self.k + self.m - 1)

    @property
    def sp(self) -> int:
        return self.s + self.k - self.l

    @property
    def tp(self) -> int:
        return self.sp + 2 * (self.l + self.m - 1)

    @property
    def top(self) -> list:
        return list(range(self.s, self.t + 1, 2))

    @property
    def bottom(self) -> list:
        return list(range(self.sp, self.tp + 1, 2))

    def check(self, C: CartanMatrix):
        if self.i == self.j:
            raise ValueError("a zig-zag needs two distinct vertices")
        if C.dd(self.i, self.j) != self.d:
            raise ValueError(f"k + l = {self.k + self.l} but -d_ij = {-C.dd(self.i, self.j)}")
        return self

    def general(self) -> GeneralZigZag:
        return GeneralZigZag(self.i, self.j, self.s, self.t, self.sp, self.tp)

    def descriptor(self) -> str:
        return f"{self.i},{self.j},{self.k},{self.l},{self.m},{self.s}"

    @classmethod
    def parse(cls, text: str) -> "DistZigZag":
        parts = [p.strip() for p in text.split(",")]
        if len(parts) not in (5, 6):
            raise ValueError(f"zig-zag descriptor must be i,j,k,l,m[,s]: {text!r}")
        i, j = parts[:2]
        nums = [int(p) for p in parts[2:]]
        return cls(i, j, *nums)


def _diagonal_counts(top, bottom, d):
    tops = set(top)
    nw = sum(1 for b in bottom if b + d in tops)  # a = b + d
    sw = sum(1 for b in bottom if b - d in tops)  # a = b - d
    return sw, nw


def m_Z(Z, C: CartanMatrix) -> int:
    """min of the numbers of northwest and southwest arrows."""
    d = C.dd(Z.i, Z.j)
    return min(_diagonal_counts(Z.top, Z.bottom, d))


def M_Z(Z, C: CartanMatrix) -> int:
    d = C.dd(Z.i, Z.j)
    tops = set(Z.top)
    extra = sum(1 for b in Z.bottom for c in range(1, -d) if b + 2 * c + d in tops)
    return m_Z(Z, C) + extra


def enumerate_distinguished(C: CartanMatrix, i, j, n_i: int, n_j: int) -> list:
    """All distinguished (k, l, m) with s = 0 whose rows fit n_i, n_j slots."""
    d = C.dd(i, j)
    out = []
    for k in range(0, -d + 1):
        l = -d - k
        m = 1
        while k + m <= n_i and l + m <= n_j:
            out.append(DistZigZag(str(i), str(j), k, l, m, 0))
            m += 1
    return out


@dataclass(frozen=True)
class ZigZagGraph:
    vertices: tuple
    edges: tuple

    def count(self, kind) -> int:
        return sum(1 for e in self.edges if e.kind == kind)


def graph(Z, C: CartanMatrix | None = None) -> ZigZagGraph:
    d = C.dd(Z.i, Z.j) if C is not None else Z.d
    top, bottom = Z.top, Z.bottom
    tops, bots = set(top), set(bottom)
    V = tuple([("x", a) for a in top] + [("y", b) for b in bottom])
    E = []
    for a in top[:-1]:
        E.append(Edge(("x", a), ("x", a + 2), "H"))
    for b in bottom[:-1]:
        E.append(Edge(("y", b), ("y", b + 2), "H"))
    for a in top:
        if a + d in bots:
            E.append(Edge(("x", a), ("y", a + d), "SW"))
    for b in bottom:
        if b + d in tops:
            E.append(Edge(("y", b), ("x", b + d), "NW"))
    return ZigZagGraph(V, tuple(E))


# ---------------------------------------------------------------------------
# selections


@dataclass(frozen=True)
class RefinedSelection:
    """One tag per trapezoid: ('SW',0), ('NW',0), ('TOP',u) or ('BOT',v)."""

    tags: tuple
    sign: int
    edges: tuple

    def multiplicities(self) -> Counter:
        return Counter(self.edges)


_FOLLOW_SW = ("SW", "BOT")
_FOLLOW_NW = ("NW", "TOP")


def _allowed(prev, nxt) -> bool:
    if prev in ("SW", "TOP"):
        return nxt in _FOLLOW_SW
    return nxt in _FOLLOW_NW


def _tag_edge(Z: DistZigZag, alpha: int, tag) -> Edge:
    kind, u = tag
    t, tp, k, l = Z.t, Z.tp, Z.k, Z.l
    if kind == "SW":
        return Edge(("x", t - 2 * alpha), ("y", tp - 2 * alpha - 2 * l), "SW")
    if kind == "NW":
        return Edge(("y", tp - 2 * alpha), ("x", t - 2 * alpha - 2 * k), "NW")
    if kind == "TOP":
        return Edge(("x", t - 2 * alpha - 2 * u), ("x", t - 2 * alpha - 2 * (u - 1)), "H")
    if kind == "BOT":
        return Edge(("y", tp - 2 * alpha - 2 * u), ("y", tp - 2 * alpha - 2 * (u - 1)), "H")
    raise ValueError(f"unknown tag {tag}")


def _sequences(classes, m):
    for seq in itertools.product(classes, repeat=m):
        if all(_allowed(seq[a][0], seq[a + 1][0]) for a in range(m - 1)):
            yield seq


def _sigma(seq) -> int:
    return sum(1 for a in range(1, len(seq)) if seq[a][0] in ("NW", "TOP", "UP"))


def refined_selections(Z: DistZigZag) -> list:
    tags = [("SW", 0), ("NW", 0)]
    tags += [("TOP", u) for u in range(1, Z.k + 1)]
    tags += [("BOT", v) for v in range(1, Z.l + 1)]
    out = []
    for seq in _sequences(tags, Z.m):
        edges = tuple(_tag_edge(Z, a, tag) for a, tag in enumerate(seq))
        out.append(RefinedSelection(tuple(seq), (-1) ** _sigma(seq), edges))
    return out


def coarse_selections(Z: DistZigZag) -> list:
    """Tag sequences over SW, NW, UP (whole top group), DOWN (bottom group)."""
    tags = [("SW", 0), ("NW", 0)]
    if Z.k:
        tags.append(("UP", 0))
    if Z.l:
        tags.append(("DOWN", 0))
    out = []
    for seq in itertools.product(tags, repeat=Z.m):
        ok = True
        for a in range(Z.m - 1):
            p, n = seq[a][0], seq[a + 1][0]
            if p in ("SW", "UP") and n not in ("SW", "DOWN"):
                ok = False
            if p in ("NW", "DOWN") and n not in ("NW", "UP"):
                ok = False
        if ok:
            out.append((seq, (-1) ** _sigma(seq)))
    return out


def _bar(v) -> MLaurent:
    row, c = v
    return MLaurent.from_var(Var(row, c))


def _delta(e: Edge) -> MLaurent:
    return _bar(e.src) - _bar(e.tgt)


def selection_sum(Z: DistZigZag, coarse: bool = False) -> MLaurent:
    """sum over selections of (-1)^sigma prod_alpha delta(epsilon_alpha).

    Variables stand for the barred variables z_c q^c, one per vertex.
    """
    total = MLaurent()
    if not coarse:
        for S in refined_selections(Z):
            term = MLaurent.const(S.sign)
            for e in S.edges:
                term = term * _delta(e)
            total = total + term
        return total
    t, tp, k, l = Z.t, Z.tp, Z.k, Z.l
    for seq, sign in coarse_selections(Z):
        term = MLaurent.const(sign)
        for a, (kind, _) in enumerate(seq):
            if kind == "UP":
                f = _bar(("x", t - 2 * a - 2 * k)) - _bar(("x", t - 2 * a))
            elif kind == "DOWN":
                f = _bar(("y", tp - 2 * a - 2 * l)) - _bar(("y", tp - 2 * a))
            else:
                f = _delta(_tag_edge(Z, a, (kind, 0)))
            term = term * f
        total = total + term
    return total


def verify_selection_identity(Z: DistZigZag, coarse: bool = False) -> bool:
    total = selection_sum(Z, coarse)
    if not total.is_zero():
        raise SelectionIdentityError(Z, total)
    return True


# ---------------------------------------------------------------------------
# orders on the complement of a selection


def _complement(G: ZigZagGraph, S: RefinedSelection) -> list:
    mu = S.multiplicities()
    return [e for e in G.edges if mu[e] == 0]


def topological_order(G: ZigZagGraph, S: RefinedSelection) -> list:
    """Vertices listed from largest to smallest: every complement edge goes
    from an earlier vertex to a later one.  Ties are broken by the smallest
    vertex key, so the result is deterministic."""
    edges = _complement(G, S)
    indeg = {v: 0 for v in G.vertices}
    succ = {v: [] for v in G.vertices}
    for e in edges:
        succ[e.src].append(e.tgt)
        indeg[e.tgt] += 1
    heap = [v for v, n in indeg.items() if n == 0]
    heapq.heapify(heap)
    out = []
    while heap:
        v = heapq.heappop(heap)
        out.append(v)
        for w in succ[v]:
            indeg[w] -= 1
            if indeg[w] == 0:
                heapq.heappush(heap, w)
    if len(out) != len(G.vertices):
        raise ValueError(f"complement of selection {S.tags} has an oriented cycle")
    return out


def topological_orders(G: ZigZagGraph, S: RefinedSelection, limit: int | None = None):
    """Enumerate linear extensions of the complement (largest first)."""
    edges = _complement(G, S)
    preds = {v: set() for v in G.vertices}
    for e in edges:
        preds[e.tgt].add(e.src)
    verts = sorted(G.vertices)
    count = 0

    def rec(prefix, placed):
        nonlocal count
        if limit is not None and count >= limit:
            return
        if len(prefix) == len(verts):
            count += 1
            yield list(prefix)
            return
        for v in verts:
            if v not in placed and preds[v] <= placed:
                prefix.append(v)
                placed.add(v)
                yield from rec(prefix, placed)
                placed.discard(v)
                prefix.pop()
                if limit is not None and count >= limit:
                    return

    yield from rec([], set())
