import itertools

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from qloop.cartan import preset
from qloop.freealg import FreeElem, non_increasing, parse_word, quad_relation, rho_coefficient, word_key
from qloop.multipoly import MLaurent, Var
from qloop.pairing import (
    CTProblem,
    Factor,
    associated_polynomial,
    constant_term,
    leading_word,
    monomial_leading_word,
    pair_UU,
    pair_UV,
    pair_VU,
)
from qloop.scalars import QRat
from qloop.shuffle import ShufElem, upsilon
from qloop.zigzag import DistZigZag

A2 = preset("A2")
Q = QRat.q_power
z1, z2, z3 = Var("a", 1), Var("a", 2), Var("a", 3)
BASE = QRat({-1: 1, 1: -1})  # q^-1 - q


def E(text, c=1):
    return FreeElem.word(parse_word(text), c)


def test_ct_no_factors():
    p = MLaurent.monomial({z1: 1, z2: -1}, 5) + MLaurent.const(Q(2))
    assert constant_term(CTProblem(p, [], [z1, z2])) == Q(2)


def test_ct_geometric_series():
    # (t - 1)/(t - q^-2) with t = z2/z1
    num = MLaurent.from_var(z2) - MLaurent.from_var(z1)
    f = Factor(z1, z2, (-1, -2), (1, 0))
    assert constant_term(CTProblem(num, [f], [z1, z2])) == Q(2)


def test_ct_rejects_wrong_direction():
    with pytest.raises(ValueError):
        CTProblem(MLaurent.const(1), [Factor(z2, z1, (1, 0), (-1, 0))], [z1, z2])


@st.composite
def ct_instances(draw):
    order = [z1, z2, z3]
    num = MLaurent()
    for _ in range(draw(st.integers(1, 4))):
        num = num + MLaurent.monomial({v: draw(st.integers(-3, 2)) for v in order}, draw(st.integers(-3, 3)))
    factors = []
    for _ in range(draw(st.integers(0, 3))):
        a, b = sorted(draw(st.lists(st.integers(0, 2), min_size=2, max_size=2, unique=True)))
        sa, sb = draw(st.sampled_from([1, -1])), draw(st.sampled_from([1, -1]))
        factors.append(Factor(order[a], order[b], (sa, draw(st.integers(-2, 2))), (sb, draw(st.integers(-2, 2)))))
    return CTProblem(num, factors, order)


@settings(max_examples=40, deadline=None)
@given(ct_instances())
def test_ct_stable_under_higher_truncation(P):
    base = constant_term(P)
    P.extra = 3
    assert constant_term(P, recheck=False) == base


def test_pair_UV_examples():
    for k in (-2, 0, 3):
        R = ShufElem("-", {"i": 1}, MLaurent.from_var(Var("i", 1), -k))
        assert pair_UV(E(f"i:{k}"), R, A2) == QRat(1)
        assert pair_UV(E(f"i:{k + 1}"), R, A2).is_zero()
    one = ShufElem("-", {"i": 2}, MLaurent.const(1))
    assert pair_UV(E("i:0,i:0"), one, A2) == Q(2)
    # grading mismatch
    assert pair_UV(E("j:0,j:0"), one, A2).is_zero()


def test_pair_VU_examples():
    for k in (-1, 0, 2):
        R = ShufElem("+", {"i": 1}, MLaurent.from_var(Var("i", 1), k))
        assert pair_VU(R, E(f"i:{-k}"), A2) == QRat(1)
        assert pair_VU(R, E(f"j:{-k}"), A2).is_zero()
    one = ShufElem("+", {"i": 2}, MLaurent.const(1))
    assert pair_VU(one, E("i:0,i:0"), A2) == Q(2)


def test_pair_VU_mirrors_pair_UV():
    C = preset("rank2:-2")
    for x, y in [("i:0,j:1", "j:-1,i:0"), ("i:1,i:-1", "i:1,i:-1"), ("j:2,i:0", "i:0,j:-2")]:
        a = pair_UV(E(x), upsilon(E(y), C, "-"), C)
        b = pair_VU(upsilon(E(x), C, "+"), E(y), C)
        assert a == b


def test_pair_UU_examples():
    for k in (-1, 0, 2):
        assert pair_UU(E(f"i:{k}"), E(f"i:{-k}"), A2) == BASE.inverse()
        assert pair_UU(E(f"i:{k}"), E(f"j:{-k}"), A2).is_zero()
    want = BASE ** -2 * pair_UV(E("i:0,i:0"), upsilon(E("i:0,i:0"), A2, "-"), A2)
    assert pair_UU(E("i:0,i:0"), E("i:0,i:0"), A2) == want


def test_kernel_annihilation():
    C = preset("rank2:-1")
    Rs = [upsilon(E(y), C, "-") for y in ("i:0,j:1", "j:-1,i:-1", "i:2,j:-1")]
    for A in range(-2, 2):
        for B in range(-2, 2):
            x = quad_relation(C, "i", "j", A, B)
            for R in Rs:
                assert pair_UV(x, R, C).is_zero()
    Z = DistZigZag("i", "j", 1, 0, 1)
    Rs3 = [upsilon(E(y), C, "-") for y in ("i:0,i:1,j:0", "j:1,i:-1,i:0")]
    for md in ([0, 0, 0], [1, 0, -1], [-1, 1, 0]):
        x = rho_coefficient(Z, md, C)
        for R in Rs3:
            assert pair_UV(x, R, C).is_zero()


def test_leading_word_examples():
    R = ShufElem("-", {"i": 1}, MLaurent.from_var(Var("i", 1), -3))
    assert leading_word(R, A2) == (("i", 3),)
    mono = {Var("i", 1): -1, Var("j", 1): -1}
    assert monomial_leading_word(mono, A2) == (("i", 1), ("j", 1))
    assert word_key((("i", 1), ("j", 1)), A2) > word_key((("j", 2), ("i", 0)), A2)
    assert associated_polynomial((("i", 3),), A2).numerator == MLaurent.from_var(Var("i", 1), -3)
    with pytest.raises(ValueError):
        associated_polynomial((("i", 1), ("i", 0)), A2)
    with pytest.raises(ValueError):
        leading_word(ShufElem("-", {"i": 1}, MLaurent()), A2)


letters = st.tuples(st.sampled_from(["i", "j"]), st.integers(-2, 2))


@settings(max_examples=40, deadline=None)
@given(st.lists(letters, min_size=1, max_size=4).map(tuple))
def test_associated_polynomial_round_trip(w):
    assume(non_increasing(w, A2))
    R = associated_polynomial(w, A2)
    assert leading_word(R, A2) == w
    assert non_increasing(leading_word(R, A2), A2)


def _same_degree_neighbours(w):
    """Permutations of w and transfers of one unit of exponent between letters."""
    out = set(itertools.permutations(w))
    n = len(w)
    for a in range(n):
        for b in range(n):
            if a != b:
                v = list(w)
                v[a] = (v[a][0], v[a][1] + 1)
                v[b] = (v[b][0], v[b][1] - 1)
                out.update(itertools.permutations(v))
    return out


@settings(max_examples=15, deadline=None)
@given(st.lists(letters, min_size=1, max_size=3).map(tuple))
def test_leading_word_pairing_law(w):
    R = upsilon(FreeElem.word(w), A2, "-")
    assume(not R.is_zero())
    lead = leading_word(R, A2)
    assert non_increasing(lead, A2)
    assert not pair_UV(FreeElem.word(lead), R, A2).is_zero()
    key = word_key(lead, A2)
    for v in _same_degree_neighbours(lead):
        if word_key(v, A2) > key:
            assert pair_UV(FreeElem.word(v), R, A2).is_zero(), v
