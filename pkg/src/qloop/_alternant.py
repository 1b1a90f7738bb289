"""Vectorized kernel for the symmetrization map on words.

For a word with colours c_0..c_{n-1} the image is
    Sym[z^k prod_{a<b} zeta(z_a/z_b)] = s * Alt(z^k prod_{a<b} (z_a - q^{-d} z_b)) / D
with D the product of all canonical differences (same colour included) and
Alt the signed sum over same-colour permutations.  Alt is computed level by
level from the right: multiply by f_r = prod_{b>r}(v_r - q^{-d} v_b), which
is symmetric in the later same-colour variables, then replace every row by
its sorted representative (strictly decreasing exponents within a colour,
sign of the sorting permutation, rows with ties dropped).  The reduced rows
are a basis expansion of Alt, so the image vanishes iff nothing survives.

Rows are int64 matrices: one column per position plus a final q-exponent
column; coefficients are int64 until a bound check demands Python ints.
"""

from __future__ import annotations

from collections import defaultdict

import numpy as np

_SAFE = 2**62


def _combine(cols, coef):
    """Sum coefficients of equal rows (given as a list of columns); drop zeros."""
    if len(coef) == 0:
        return cols, coef
    lo = [int(c.min()) for c in cols]
    bits = [int(int(c.max()) - l + 1).bit_length() for c, l in zip(cols, lo)]
    if sum(bits) <= 62:
        key = np.zeros(len(coef), dtype=np.int64)
        for c, l, b in zip(cols, lo, bits):
            key <<= b
            key |= c - l
        order = np.argsort(key, kind="stable")
        key = key[order]
        start = np.ones(len(key), dtype=bool)
        start[1:] = key[1:] != key[:-1]
        firsts = np.flatnonzero(start)
        coef = coef[order]
        if coef.dtype == object:
            bounds = list(firsts[1:]) + [len(coef)]
            sums = np.array([sum(coef[a:b]) for a, b in zip(firsts, bounds)], dtype=object)
        else:
            sums = np.add.reduceat(coef, firsts)
        pick = order[firsts]
    else:
        E = np.stack(cols, axis=1)
        _, pick, inv = np.unique(E, axis=0, return_index=True, return_inverse=True)
        sums = np.zeros(len(pick), dtype=coef.dtype)
        np.add.at(sums, inv.ravel(), coef)
    nz = sums != 0
    pick = pick[nz]
    return [c[pick] for c in cols], sums[nz]


def _factor_terms(colors, r, dmat, minus, broken):
    """Exponent offsets (over columns r..n-1 plus q) and signs of f_r."""
    n = len(colors)
    width = n - r + 1
    terms = [(np.zeros(width, dtype=np.int64), 1)]
    flip = 1 if broken else -1
    for b in range(r + 1, n):
        d = dmat[colors[r]][colors[b]]
        new = []
        for off, s in terms:
            a = off.copy()
            c = off.copy()
            if minus:
                # (v_b - q^{-d} v_r)
                a[b - r] += 1
                c[0] += 1
            else:
                # (v_r - q^{-d} v_b)
                a[0] += 1
                c[b - r] += 1
            c[-1] -= d
            new.append((a, s))
            new.append((c, s * flip))
        terms = new
    F = np.array([t for t, _ in terms], dtype=np.int64)
    S = np.array([s for _, s in terms], dtype=np.int64)
    return F, S


def _reduce_sequence(colors, E, coef, dmat, minus, broken, stats):
    n = len(colors)
    cols = [E[:, p].copy() for p in range(n + 1)]
    for r in range(n - 2, -1, -1):
        F, S = _factor_terms(colors, r, dmat, minus, broken)
        T = len(S)
        if coef.dtype != object:
            bound = float(np.abs(coef.astype(np.float64)).sum()) * T
            if bound >= _SAFE:
                coef = coef.astype(object)
        # grid (row, term): later columns of each colour stay sorted up to
        # ties, column r is inserted into its own colour group
        grid = {p: cols[p][:, None] + F[None, :, p - r] for p in range(r, n + 1)}
        keep = np.ones((len(coef), T), dtype=bool)
        groups = defaultdict(list)
        for p in range(r + 1, n):
            groups[colors[p]].append(p)
        for idx in groups.values():
            for a, b in zip(idx, idx[1:]):
                keep &= grid[a] != grid[b]
        mine = groups.get(colors[r], [])
        for p in mine:
            keep &= grid[p] != grid[r]
        mi, ti = np.nonzero(keep)
        cols = [cols[p][mi] for p in range(r)] + [grid[p][mi, ti] for p in range(r, n + 1)]
        s = S[ti]
        coef = coef[mi] * (s.astype(object) if coef.dtype == object else s)
        if mine:
            v = cols[r]
            above = np.zeros(len(coef), dtype=np.int64)
            for p in mine:
                above += cols[p] > v
            others = [cols[p] for p in mine]
            for t, p in enumerate([r] + mine):
                out = v
                if t < len(others):
                    out = np.where(above > t, others[t], out)
                if t > 0:
                    out = np.where(above < t, others[t - 1], out)
                cols[p] = out
            odd = (above & 1).astype(bool)
            if coef.dtype == object:
                coef = np.array([-c if o else c for c, o in zip(coef, odd)], dtype=object)
            else:
                coef = np.where(odd, -coef, coef)
        cols, coef = _combine(cols, coef)
        if stats is not None:
            stats["max_rows"] = max(stats.get("max_rows", 0), len(coef))
        if len(coef) == 0:
            break
    if len(coef) == 0:
        return np.zeros((0, n + 1), dtype=np.int64), coef
    return np.stack(cols, axis=1), coef


def canonical_columns(dimvec: dict, order: list) -> list:
    """Canonical variable order: colours in the Cartan order, slots 1..n_i."""
    return [(c, a) for c in order for a in range(1, dimvec.get(c, 0) + 1)]


def reduce_words(terms: dict, color_index: dict, dmat: dict, minus: bool = False, broken: bool = False, stats=None):
    """Reduced alternant rows of the symmetrization of ``terms``.

    ``terms``: word -> {qexp: int} with words tuples of (colour, exponent),
    all of the same dimension vector.  Returns ``(columns, E, coef)`` where
    ``columns`` lists (colour, slot) for the exponent columns of E (q last).
    """
    if not terms:
        return [], np.zeros((0, 1), dtype=np.int64), np.zeros(0, dtype=np.int64)
    byseq: dict = defaultdict(dict)
    dims = set()
    for w, p in terms.items():
        seq = tuple(c for c, _ in w)
        cnt: dict = defaultdict(int)
        for c in seq:
            cnt[c] += 1
        dims.add(tuple(sorted(cnt.items())))
        ks = tuple(k for _, k in w)
        for e, c in p.items():
            if c:
                byseq[seq][ks + (e,)] = byseq[seq].get(ks + (e,), 0) + c
    if len(dims) != 1:
        raise ValueError("words of different dimension vectors")
    dimvec = dict(dims.pop())
    corder = sorted(dimvec, key=lambda c: color_index[c])
    cols = canonical_columns(dimvec, corder)
    n = len(cols)
    colpos = {cs: a for a, cs in enumerate(cols)}
    outE, outC = [], []
    big = False
    for seq, rows in byseq.items():
        keys = list(rows.keys())
        vals = [rows[k] for k in keys]
        if any(abs(v) >= 2**31 for v in vals):
            coef = np.array(vals, dtype=object)
        else:
            coef = np.array(vals, dtype=np.int64)
        E = np.array(keys, dtype=np.int64).reshape(len(keys), n + 1)
        E, coef = _reduce_sequence(seq, E, coef, dmat, minus, broken, stats)
        if len(E) == 0:
            continue
        cnt: dict = defaultdict(int)
        perm = []
        for c in seq:
            cnt[c] += 1
            perm.append(colpos[(c, cnt[c])])
        inv = sum(1 for a in range(n) for b in range(a + 1, n) if perm[a] > perm[b])
        if minus:
            inv += n * (n - 1) // 2
        G = np.empty_like(E)
        G[:, perm] = E[:, :n]
        G[:, n] = E[:, n]
        outE.append(G)
        outC.append(-coef if inv % 2 else coef)
        big = big or coef.dtype == object
    if not outE:
        return cols, np.zeros((0, n + 1), dtype=np.int64), np.zeros(0, dtype=np.int64)
    E = np.concatenate(outE)
    if big:
        coef = np.concatenate([c.astype(object) for c in outC])
    else:
        coef = np.concatenate(outC)
    parts, coef = _combine([E[:, p] for p in range(n + 1)], coef)
    return cols, np.stack(parts, axis=1), coef
