"""Verification suite: one check per acceptance criterion, a JSON report."""

from __future__ import annotations

import itertools
import os
import random
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .cartan import CartanMatrix, preset, zeta, zeta_correction, zeta_geom
from .freealg import (
    FreeElem,
    StraightenStats,
    eH_coefficient,
    homogeneity_center,
    non_increasing,
    quad_relation,
    rho_laurent,
    rho_tau,
    serre_coefficient,
    straighten,
    tau_gate_value,
    word_key,
)
from .multipoly import MLaurent, Var, symmetrize
from .pairing import leading_word, pair_UU, pair_UV
from .scalars import QRat
from .shuffle import (
    ShufElem,
    omega,
    quad_modified_check,
    shuffle_mul,
    shuffle_mul_geom,
    upsilon,
    upsilon_by_products,
    upsilon_is_zero,
    upsilon_laurent_is_zero,
    wheel_member,
    wheel_member_geom,
    wheel_member_strong,
)
from .zigzag import (
    DistZigZag,
    SelectionIdentityError,
    graph,
    refined_selections,
    topological_orders,
    verify_selection_identity,
)

SCHEMA_VERSION = 1
THREADS_ENV = "QLOOP_THREADS"

__all__ = ["SCHEMA_VERSION", "SuiteConfig", "CheckResult", "CHECKS", "run_check", "run_suite"]


@dataclass
class SuiteConfig:
    cartan: CartanMatrix
    seed: int = 0
    selection_max_d: int = 4
    selection_max_m: int = 3
    rho_max_d: int = 3
    rho_max_m: int = 2
    window: int = 2  # half-width; the window has 2*window + 1 values
    grid_limit: int = 625
    serre_window: int = 1
    quad_window: int = 2
    straighten_words: int = 200
    straighten_max_len: int = 4
    straighten_range: int = 3
    lead_samples: int = 100
    lead_max_n: int = 4
    lead_greater: int = 20
    wheel_samples: int = 30
    wheel_max_n: int = 5
    omega_pairs: int = 50
    zeta_max_d: int = 4
    budget: int = 2_000_000
    family: bool = True  # add the rank-2 matrices rank2:0 .. rank2:-max_d
    mutate: bool = False

    def validate(self):
        bounds = {
            k: v
            for k, v in self.__dict__.items()
            if isinstance(v, int) and not isinstance(v, bool) and k not in ("seed", "window", "serre_window", "quad_window")
        }
        bad = [k for k, v in bounds.items() if v <= 0]
        bad += [k for k in ("window", "serre_window", "quad_window") if getattr(self, k) < 0]
        if bad:
            raise ValueError(f"bounds must be positive: {', '.join(sorted(bad))}")
        self.cartan.validate()
        return self

    def to_json(self) -> dict:
        out = {k: v for k, v in self.__dict__.items() if k != "cartan"}
        out["cartan"] = self.cartan.to_json()
        return out


@dataclass
class CheckResult:
    id: str
    title: str
    ok: bool
    count: int = 0
    witness: object = None
    parts: dict = field(default_factory=dict)
    notes: str = ""
    seconds: float = 0.0

    def to_json(self, timings: bool = True) -> dict:
        out = {"id": self.id, "title": self.title, "ok": self.ok, "count": self.count}
        if self.parts:
            out["parts"] = self.parts
        if self.witness is not None:
            out["witness"] = self.witness
        if self.notes:
            out["notes"] = self.notes
        if timings:
            out["seconds"] = round(self.seconds, 3)
        return out

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        extra = f" witness={self.witness}" if self.witness is not None and not self.ok else ""
        return f"{self.id} {status} {self.title} [{self.count} cases, {self.seconds:.1f}s]{extra}"


# ---------------------------------------------------------------------------
# helpers


def _rng(cfg: SuiteConfig, check_id: str) -> random.Random:
    return random.Random(f"{cfg.seed}:{check_id}")


def _mut(cfg: SuiteConfig, C: CartanMatrix) -> CartanMatrix:
    return C.with_mutation() if cfg.mutate else C


def _main(cfg: SuiteConfig) -> CartanMatrix:
    return _mut(cfg, cfg.cartan)


def _pair_cases(cfg: SuiteConfig, max_d: int, ds=None):
    """(C, i, j) with 0 <= -d_ij <= max_d, one per (d, orientation)."""
    seen = set()
    out = []
    cands = []
    if cfg.family:
        for d in range(0, -max_d - 1, -1):
            C = preset(f"rank2:{d}")
            cands += [(C, "i", "j"), (C, "j", "i")]
    C0 = cfg.cartan
    cands += [(C0, i, j) for i, j in C0.pairs()]
    for C, i, j in cands:
        d = C.dd(i, j)
        if -d > max_d or (ds is not None and d not in ds):
            continue
        key = (d, C.less(i, j))
        if key in seen:
            continue
        seen.add(key)
        out.append((_mut(cfg, C), i, j))
    return out


def _zigzags(cfg: SuiteConfig, max_d: int, max_m: int):
    for C, i, j in _pair_cases(cfg, max_d):
        d = C.dd(i, j)
        for m in range(1, max_m + 1):
            for k in range(0, -d + 1):
                yield C, DistZigZag(i, j, k, -d - k, m)


def _multidegrees(center: list, half: int, limit: int, cfg_full: bool = True) -> list:
    """Window of multidegrees around ``center``.

    The full grid when it has at most ``limit`` points; otherwise the
    diagonal shifts and the single-coordinate shifts when the zig-zag has at
    most six vertices, and the center alone beyond that."""
    N = len(center)
    span = range(-half, half + 1)
    if (2 * half + 1) ** N <= limit:
        return [[c + x for c, x in zip(center, delta)] for delta in itertools.product(span, repeat=N)]
    if N > 6:
        return [list(center)]
    out = [[c + t for c in center] for t in span]
    for r in range(N):
        for t in span:
            if t:
                mu = list(center)
                mu[r] += t
                out.append(mu)
    return out


def _random_word(rng, verts, length, lo, hi):
    return tuple((rng.choice(verts), rng.randint(lo, hi)) for _ in range(length))


def _zd(Z) -> str:
    return Z.descriptor()


# ---------------------------------------------------------------------------
# checks


def check_a1(cfg: SuiteConfig) -> CheckResult:
    res = CheckResult("A1", "selection identity, refined and coarse", True)
    for C, Z in _zigzags(cfg, cfg.selection_max_d, cfg.selection_max_m):
        for coarse in (False, True):
            res.count += 1
            try:
                verify_selection_identity(Z, coarse=coarse)
            except SelectionIdentityError:
                res.ok = False
                res.witness = {"zigzag": _zd(Z), "coarse": coarse}
                return res
    return res


def check_a2(cfg: SuiteConfig) -> CheckResult:
    res = CheckResult("A2", "rho coefficients vanish under the symmetrization map", True)
    for C, Z in _zigzags(cfg, cfg.rho_max_d, cfg.rho_max_m):
        center = homogeneity_center(Z, C)
        for mu in _multidegrees(center, cfg.window, cfg.grid_limit):
            res.count += 1
            terms = rho_laurent(Z, mu, C)
            if not upsilon_laurent_is_zero(terms, C):
                res.ok = False
                res.witness = {"zigzag": _zd(Z), "d": C.dd(Z.i, Z.j), "multidegree": mu}
                return res
    return res


def check_a3(cfg: SuiteConfig) -> CheckResult:
    res = CheckResult("A3", "loop Serre coefficients vanish under the symmetrization map", True)
    w = cfg.serre_window
    for C, i, j in _pair_cases(cfg, 2, ds={0, -1, -2}):
        n = 1 - C.dd(i, j)
        for zexps in itertools.combinations_with_replacement(range(-w, w + 1), n):
            for wexp in range(-w, w + 1):
                res.count += 1
                x = serre_coefficient(C, i, j, zexps, wexp)
                if not upsilon_is_zero(x, C):
                    res.ok = False
                    res.witness = {"pair": [i, j], "d": C.dd(i, j), "z": list(zexps), "w": wexp}
                    return res
    return res


def _cartans(cfg: SuiteConfig, max_d: int = 3) -> list:
    out = [_main(cfg)]
    if cfg.family:
        out += [_mut(cfg, preset(f"rank2:{d}")) for d in range(0, -max_d - 1, -1)]
    return out


def check_a4(cfg: SuiteConfig) -> CheckResult:
    res = CheckResult("A4", "quadratic relation maps to zero and straightens to zero", True)
    w = cfg.quad_window
    for C in _cartans(cfg):
        for i in C.vertices:
            for j in C.vertices:
                for A in range(-w, w + 1):
                    for B in range(-w, w + 1):
                        res.count += 1
                        x = quad_relation(C, i, j, A, B)
                        if not upsilon_is_zero(x, C):
                            res.ok = False
                            res.witness = {"pair": [i, j], "A": A, "B": B, "route": "symmetrization"}
                            return res
                        if straighten(x, C, cfg.budget):
                            res.ok = False
                            res.witness = {"pair": [i, j], "A": A, "B": B, "route": "straighten"}
                            return res
    return res


def check_a5(cfg: SuiteConfig) -> CheckResult:
    res = CheckResult("A5", "straightening: non-increasing output, image preserved, idempotent", True)
    C = _main(cfg)
    rng = _rng(cfg, "A5")
    B = cfg.straighten_range
    drift = 0
    for _ in range(cfg.straighten_words):
        w = _random_word(rng, C.vertices, rng.randint(1, cfg.straighten_max_len), -B, B)
        x = FreeElem.word(w)
        stats = StraightenStats()
        s = straighten(x, C, cfg.budget, stats)
        drift = max(drift, stats.drift)
        res.count += 1
        fail = None
        if not all(non_increasing(v, C) for v in s.terms):
            fail = "output word not non-increasing"
        elif not upsilon_is_zero(x - s, C):
            fail = "image changed (kernel route)"
        elif upsilon_by_products(x, C).numerator != upsilon_by_products(s, C).numerator:
            fail = "image changed (product route)"
        elif straighten(s, C, cfg.budget) != s:
            fail = "not idempotent"
        elif stats.drift > 0:
            fail = f"exponent drift {stats.drift} outside the input range"
        if fail:
            res.ok = False
            res.witness = {"word": [list(l) for l in w], "reason": fail}
            return res
    res.parts = {"max_drift": drift}
    return res


def _random_minus(rng, C: CartanMatrix, max_n: int) -> ShufElem:
    while True:
        size = rng.randint(1, max_n)
        n: dict = {}
        for _ in range(size):
            c = rng.choice(C.vertices)
            n[c] = n.get(c, 0) + 1
        vs = [Var(c, a) for c in sorted(n, key=C.index) for a in range(1, n[c] + 1)]
        tot = rng.randint(-2, 2)
        p = MLaurent()
        for _ in range(rng.randint(1, 3)):
            e = [rng.randint(-2, 2) for _ in vs]
            e[-1] += tot - sum(e)
            p = p + MLaurent.monomial(dict(zip(vs, e)), rng.choice([-2, -1, 1, 2, 3]))
        R = ShufElem("-", n, symmetrize(p, n))
        if not R.is_zero():
            return R


def _greater_word(rng, w, C, tries=4000):
    cols = [c for c, _ in w]
    tot = sum(k for _, k in w)
    lo = min(k for _, k in w) - 3
    for _ in range(tries):
        cs = cols[:]
        rng.shuffle(cs)
        ks = [rng.randint(lo, lo + 6) for _ in cs]
        ks[-1] += tot - sum(ks)
        u = tuple(zip(cs, ks))
        if word_key(u, C) > word_key(w, C):
            return u
    return None


def check_a6(cfg: SuiteConfig) -> CheckResult:
    res = CheckResult("A6", "leading-word pairing dichotomy", True)
    C = _main(cfg)
    rng = _rng(cfg, "A6")
    for _ in range(cfg.lead_samples):
        R = _random_minus(rng, C, cfg.lead_max_n)
        w = leading_word(R, C)
        res.count += 1
        if not pair_UV(FreeElem.word(w), R, C):
            res.ok = False
            res.witness = {"element": R.to_json(), "lead": [list(l) for l in w], "reason": "zero at the leading word"}
            return res
        for _ in range(cfg.lead_greater):
            u = _greater_word(rng, w, C)
            if u is None:
                break
            res.count += 1
            if pair_UV(FreeElem.word(u), R, C):
                res.ok = False
                res.witness = {"element": R.to_json(), "lead": [list(l) for l in w], "word": [list(l) for l in u]}
                return res
    return res


def _wheel_sample(cfg: SuiteConfig, C: CartanMatrix, rng) -> list:
    out = []
    for _ in range(cfg.wheel_samples):
        w = _random_word(rng, C.vertices, rng.randint(2, cfg.wheel_max_n), -2, 2)
        out.append((w, upsilon(FreeElem.word(w), C)))
    return out


def check_a7(cfg: SuiteConfig) -> CheckResult:
    res = CheckResult("A7", "products of generators satisfy the wheel conditions", True)
    C = _main(cfg)
    rng = _rng(cfg, "A7")
    for w, R in _wheel_sample(cfg, C, rng):
        res.count += 1
        if len(w) <= 3 and upsilon_by_products(FreeElem.word(w), C).numerator != R.numerator:
            res.ok = False
            res.witness = {"word": [list(l) for l in w], "reason": "kernel and product routes disagree"}
            return res
        ok, wit = wheel_member(R, C)
        if ok:
            ok, wit = wheel_member_strong(R, C)
        if not ok:
            res.ok = False
            res.witness = {"word": [list(l) for l in w], "zigzag": str(wit["zigzag"]), "found": wit["found"]}
            return res
    return res


def _zeta_identity(C: CartanMatrix, i, j) -> bool:
    a, b = zeta(C, i, j), zeta_correction(C, i, j)
    g = zeta_geom(C, i, j)
    return a.num * b.num * g.den == g.num * a.den * b.den


def check_a8(cfg: SuiteConfig) -> CheckResult:
    res = CheckResult("A8", "geometric normalization", True)
    parts = {}
    # (i) kernel identity, both orders
    ok = True
    n = 0
    for d in range(0, -cfg.zeta_max_d - 1, -1):
        C = preset(f"rank2:{d}")
        for i, j in (("i", "j"), ("j", "i"), ("i", "i")):
            n += 1
            ok = ok and _zeta_identity(C, i, j)
    parts["i_zeta_identity"] = {"ok": ok, "count": n}
    # (ii) homomorphism
    C = _main(cfg)
    rng = _rng(cfg, "A8")
    cands = _cartans(cfg, 2)
    ok = True
    n = 0
    wit = None
    for t in range(cfg.omega_pairs):
        Ct = cands[t % len(cands)]
        w1 = _random_word(rng, Ct.vertices, rng.randint(1, 2), -2, 2)
        w2 = _random_word(rng, Ct.vertices, rng.randint(1, 2), -2, 2)
        R1, R2 = upsilon(FreeElem.word(w1), Ct), upsilon(FreeElem.word(w2), Ct)
        n += 1
        lhs = omega(shuffle_mul(R1, R2, Ct), Ct)
        rhs = shuffle_mul_geom(omega(R1, Ct), omega(R2, Ct), Ct)
        if lhs.numerator != rhs.numerator:
            ok = False
            wit = wit or {"left": [list(l) for l in w1], "right": [list(l) for l in w2]}
    parts["ii_omega_homomorphism"] = {"ok": ok, "count": n, **({"witness": wit} if wit else {})}
    # (iii) geometric wheel conditions
    ok = True
    n = 0
    wit = None
    for w, R in _wheel_sample(cfg, C, rng):
        n += 1
        good, info = wheel_member_geom(omega(R, C), C)
        if not good:
            ok = False
            wit = wit or {"word": [list(l) for l in w], "zigzag": str(info["zigzag"])}
    parts["iii_geometric_wheel"] = {"ok": ok, "count": n, **({"witness": wit} if wit else {})}
    # (iv) modified relation vanishes; the original one is expected not to
    mod_ok = True
    orig_nonzero = False
    n = 0
    for Cq, i, j in _pair_cases(cfg, 2, ds={0, -1, -2}):
        r = quad_modified_check(Cq, i, j, range(-1, 2))
        n += 1
        mod_ok = mod_ok and r["modified_zero"]
        orig_nonzero = orig_nonzero or not r["original_zero"]
    parts["iv_modified_vanishes"] = {"ok": mod_ok, "count": n}
    parts["iv_original_not_all_zero"] = {
        "ok": orig_nonzero,
        "count": n,
        **({} if orig_nonzero else {"note": "every extraction of the trigonometric relation maps to zero"}),
    }
    res.parts = parts
    res.count = sum(p["count"] for p in parts.values())
    res.ok = all(p["ok"] for p in parts.values())
    if not res.ok:
        res.witness = [k for k, p in parts.items() if not p["ok"]]
    return res


def check_a9(cfg: SuiteConfig) -> CheckResult:
    res = CheckResult("A9", "order independence of the selection terms", True)
    for C, Z in _zigzags(cfg, cfg.rho_max_d, cfg.rho_max_m):
        G = graph(Z, C)
        center = homogeneity_center(Z, C)
        for S in refined_selections(Z):
            orders = list(topological_orders(G, S, limit=2))
            if len(orders) < 2:
                continue
            res.count += 1
            a = eH_coefficient(Z, S, center, C, orders[0])
            b = eH_coefficient(Z, S, center, C, orders[1])
            if straighten(a - b, C, cfg.budget):
                res.ok = False
                res.witness = {"zigzag": _zd(Z), "selection": [list(t) for t in S.tags]}
                return res
    return res


def check_a10(cfg: SuiteConfig) -> CheckResult:
    res = CheckResult("A10", "base pairing values and grading orthogonality", True)
    C = _main(cfg)
    expected = QRat({-1: 1, 1: -1}).inverse()
    for i in C.vertices:
        for k in range(-3, 4):
            res.count += 1
            v = pair_UU(FreeElem.word(((i, k),)), FreeElem.word(((i, -k),)), C)
            if v != expected:
                res.ok = False
                res.witness = {"vertex": i, "k": k, "value": str(v)}
                return res
            for j in C.vertices:
                for l in (k - 1, k, k + 1):
                    if (j, l) == (i, k):
                        continue
                    res.count += 1
                    v = pair_UU(FreeElem.word(((i, k),)), FreeElem.word(((j, -l),)), C)
                    if v:
                        res.ok = False
                        res.witness = {"left": [i, k], "right": [j, -l], "value": str(v)}
                        return res
    return res


def check_a11(cfg: SuiteConfig) -> CheckResult:
    res = CheckResult("A11", "genericity gate for tau", True)
    for C, i, j in _pair_cases(cfg, 2):
        d = C.dd(i, j)
        for k in range(0, -d + 1):
            Z = DistZigZag(i, j, k, -d - k, 1)
            a = tuple(-x for x in homogeneity_center(Z, C))
            generic = {a: QRat(1)}
            res.count += 1
            if not tau_gate_value(Z, generic):
                res.ok = False
                res.witness = {"zigzag": _zd(Z), "reason": "monomial rejected"}
                return res
            x = rho_tau(Z, generic, C)
            if not upsilon_is_zero(x, C):
                res.ok = False
                res.witness = {"zigzag": _zd(Z), "reason": "accepted relation does not vanish"}
                return res
            # second monomial weighted so that the gate value cancels
            vals = (Z.t - Z.s) // 2
            b = (a[0] + 1,) + a[1:]
            degenerate = {a: QRat(1), b: QRat.q_power(-vals, -1)}
            res.count += 1
            if tau_gate_value(Z, degenerate):
                res.ok = False
                res.witness = {"zigzag": _zd(Z), "reason": "degenerate tau has nonzero gate value"}
                return res
            try:
                rho_tau(Z, degenerate, C)
            except ValueError:
                continue
            res.ok = False
            res.witness = {"zigzag": _zd(Z), "reason": "degenerate tau accepted"}
            return res
    return res


CHECKS = {
    "A1": check_a1,
    "A2": check_a2,
    "A3": check_a3,
    "A4": check_a4,
    "A5": check_a5,
    "A6": check_a6,
    "A7": check_a7,
    "A8": check_a8,
    "A9": check_a9,
    "A10": check_a10,
    "A11": check_a11,
}


def run_check(check_id: str, cfg: SuiteConfig) -> CheckResult:
    t0 = time.perf_counter()
    res = CHECKS[check_id](cfg)
    res.seconds = time.perf_counter() - t0
    return res


def _threads() -> int:
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


def run_suite(cfg: SuiteConfig, only=None, timings: bool = True) -> dict:
    cfg.validate()
    ids = [c for c in CHECKS if only is None or c in only]
    threads = _threads()
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = dict(zip(ids, pool.map(lambda c: run_check(c, cfg), ids)))
    else:
        results = {c: run_check(c, cfg) for c in ids}
    checks = [results[c].to_json(timings) for c in ids]
    return {
        "schema": SCHEMA_VERSION,
        "seed": cfg.seed,
        "mutation": cfg.mutate,
        "threads": threads,
        "config": cfg.to_json(),
        "checks": checks,
        "ok": all(c["ok"] for c in checks),
    }
