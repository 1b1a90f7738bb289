"""Symmetric Cartan data and the trigonometric / geometric zeta kernels."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .multipoly import MLaurent, Var
from .scalars import QRat

__all__ = [
    "CartanError",
    "CartanMatrix",
    "ZetaPair",
    "Z",
    "W",
    "zeta",
    "zeta_geom",
    "zeta_correction",
    "preset",
    "load_cartan",
]

Z = Var("z", 0)
W = Var("w", 0)


class CartanError(ValueError):
    """Invalid Cartan data; ``problems`` lists every violated constraint."""

    def __init__(self, problems):
        super().__init__("; ".join(problems))
        self.problems = list(problems)


@dataclass(frozen=True)
class CartanMatrix:
    vertices: tuple
    d: tuple
    # flips the sign of q in the trigonometric zeta numerator; only used by
    # the mutation harness to make sure the suite can fail
    broken_zeta: bool = field(default=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(str(v) for v in self.vertices))
        object.__setattr__(self, "d", tuple(tuple(int(x) for x in row) for row in self.d))
        object.__setattr__(self, "_index", {v: n for n, v in enumerate(self.vertices)})

    @classmethod
    def from_rows(cls, d, vertices=None) -> "CartanMatrix":
        if vertices is None:
            vertices = [str(n + 1) for n in range(len(d))]
        C = cls(tuple(vertices), tuple(tuple(r) for r in d))
        C.validate()
        return C

    def problems(self) -> list:
        out = []
        n = len(self.vertices)
        if len(set(self.vertices)) != n:
            out.append("duplicate vertex labels")
        if len(self.d) != n or any(len(r) != n for r in self.d):
            out.append(f"matrix is not {n}x{n}")
            return out
        for a in range(n):
            if self.d[a][a] != 2:
                out.append(f"diagonal entry d[{self.vertices[a]}][{self.vertices[a]}] = {self.d[a][a]} != 2")
            for b in range(a + 1, n):
                va, vb = self.vertices[a], self.vertices[b]
                if self.d[a][b] != self.d[b][a]:
                    out.append(f"not symmetric: d[{va}][{vb}] = {self.d[a][b]} but d[{vb}][{va}] = {self.d[b][a]}")
                if self.d[a][b] > 0 or self.d[b][a] > 0:
                    out.append(f"positive off-diagonal entry at ({va},{vb})")
        return out

    def validate(self) -> bool:
        probs = self.problems()
        if probs:
            raise CartanError(probs)
        return True

    def index(self, i) -> int:
        try:
            return self._index[str(i)]
        except KeyError:
            raise KeyError(f"unknown vertex {i!r}") from None

    def __contains__(self, i):
        return str(i) in self._index

    def dd(self, i, j) -> int:
        return self.d[self.index(i)][self.index(j)]

    def less(self, i, j) -> bool:
        return self.index(i) < self.index(j)

    def pairs(self):
        """Ordered pairs (i, j) of distinct vertices."""
        return [(i, j) for i in self.vertices for j in self.vertices if i != j]

    def with_mutation(self, broken: bool = True) -> "CartanMatrix":
        return CartanMatrix(self.vertices, self.d, broken)

    def to_json(self) -> dict:
        return {"vertices": list(self.vertices), "d": [list(r) for r in self.d]}

    @classmethod
    def from_json(cls, obj) -> "CartanMatrix":
        try:
            verts = obj["vertices"]
            d = obj["d"]
            C = cls(tuple(verts), tuple(tuple(r) for r in d))
        except (KeyError, TypeError, ValueError) as exc:
            raise CartanError([f"malformed Cartan data: {exc}"]) from exc
        C.validate()
        return C


@dataclass(frozen=True)
class ZetaPair:
    """Homogenized kernel num(z, w) / den(z, w) in the variables z, w."""

    num: MLaurent
    den: MLaurent

    def at(self, z: Var, w: Var) -> tuple[MLaurent, MLaurent]:
        mp = {Z: z, W: w}
        return self.num.rename(mp), self.den.rename(mp)

    def one_variable(self) -> tuple[MLaurent, MLaurent]:
        """Numerator and denominator at w = 1, as Laurent polynomials in z."""
        return _drop_var(self.num, W), _drop_var(self.den, W)

    def is_laurent(self) -> bool:
        return len(self.den.terms) == 1


def _drop_var(p: MLaurent, v: Var) -> MLaurent:
    out = MLaurent()
    for m, c in p.terms.items():
        out = out + MLaurent.monomial({u: e for u, e in m if u != v}, c)
    return out


def _lin(a: int, b: int, qa: int = 0, qb: int = 0) -> MLaurent:
    """a*q^qa*z + b*q^qb*w."""
    out = MLaurent()
    if a:
        out = out + MLaurent.monomial({Z: 1}, QRat.q_power(qa, a))
    if b:
        out = out + MLaurent.monomial({W: 1}, QRat.q_power(qb, b))
    return out


def zeta(C: CartanMatrix, i, j) -> ZetaPair:
    """(z - w q^{-d_ij}) / (z - w)."""
    d = C.dd(i, j)
    sign = -1 if C.broken_zeta else 1
    num = _lin(1, 0) + MLaurent.monomial({W: 1}, QRat.q_power(-d, -sign))
    return ZetaPair(num, _lin(1, -1))


def zeta_geom(C: CartanMatrix, i, j) -> ZetaPair:
    """Geometric kernel; a Laurent polynomial for i != j.

    For non-adjacent distinct vertices (d_ij = 0) the kernel is 1 - z/w for
    i < j and 1 - w/z for i > j, which keeps ``zeta_geom = zeta * correction``
    and the homomorphism property of ``omega`` valid in that case too.
    """
    if str(i) == str(j):
        return zeta(C, i, j)
    d = C.dd(i, j)
    if C.less(i, j):
        # q^{-d} prod_{c=0}^{-d-1} (w - z q^{2c+d}) / w^{-d}
        if d == 0:
            return ZetaPair(_lin(-1, 1), MLaurent.monomial({W: 1}))
        num = MLaurent.const(QRat.q_power(-d))
        for c in range(-d):
            num = num * _lin(-1, 1, qa=2 * c + d)
        return ZetaPair(num, MLaurent.monomial({W: -d}))
    # prod_{c=1}^{-d} (z - w q^{2c+d}) / z^{-d}
    if d == 0:
        return ZetaPair(_lin(1, -1), MLaurent.monomial({Z: 1}))
    num = MLaurent.const(1)
    for c in range(1, -d + 1):
        num = num * _lin(1, -1, qb=2 * c + d)
    return ZetaPair(num, MLaurent.monomial({Z: -d}))


def zeta_correction(C: CartanMatrix, i, j) -> ZetaPair:
    """Factor turning zeta into zeta_geom (1 on the diagonal)."""
    if str(i) == str(j):
        return ZetaPair(MLaurent.const(1), MLaurent.const(1))
    d = C.dd(i, j)
    if C.less(i, j):
        # (1 - z/w) prod_{c=1}^{-d-1} (1 - z q^{2c+d}/w)
        num = _lin(-1, 1)
        for c in range(1, -d):
            num = num * _lin(-1, 1, qa=2 * c + d)
        return ZetaPair(num, MLaurent.monomial({W: max(-d, 1)}))
    num = _lin(1, -1)
    for c in range(1, -d):
        num = num * _lin(1, -1, qb=2 * c + d)
    return ZetaPair(num, MLaurent.monomial({Z: max(-d, 1)}))


# ---------------------------------------------------------------------------

_PRESETS = {
    "A1": (["i"], [[2]]),
    "A2": (["i", "j"], [[2, -1], [-1, 2]]),
    "A1xA1": (["i", "j"], [[2, 0], [0, 2]]),
    "A3": (["1", "2", "3"], [[2, -1, 0], [-1, 2, -1], [0, -1, 2]]),
}


def preset(name: str) -> CartanMatrix:
    """Named Cartan matrices; ``rank2:<d>`` gives vertices i, j with d_ij = d."""
    if name.startswith("rank2:"):
        d = int(name.split(":", 1)[1])
        return CartanMatrix.from_rows([[2, d], [d, 2]], ["i", "j"])
    if name not in _PRESETS:
        raise KeyError(f"unknown Cartan preset {name!r}")
    verts, d = _PRESETS[name]
    return CartanMatrix.from_rows(d, verts)


def load_cartan(spec: str) -> CartanMatrix:
    """Resolve a path to a JSON file, inline JSON, or a preset name."""
    text = spec.strip()
    if text.startswith("{"):
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise CartanError([f"malformed Cartan JSON: {exc}"]) from exc
        return CartanMatrix.from_json(obj)
    p = Path(text)
    if p.exists():
        try:
            obj = json.loads(p.read_text())
        except json.JSONDecodeError as exc:
            raise CartanError([f"malformed Cartan file {p}: {exc}"]) from exc
        return CartanMatrix.from_json(obj)
    try:
        return preset(text)
    except (KeyError, ValueError):
        raise CartanError([f"no such Cartan file or preset: {spec!r}"]) from None
