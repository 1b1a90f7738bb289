import json

import pytest

from qloop.cartan import CartanError, CartanMatrix, load_cartan, preset, zeta, zeta_correction, zeta_geom
from qloop.multipoly import MLaurent, Var
from qloop.scalars import QRat

Z, W = Var("z", 0), Var("w", 0)
z, w = MLaurent.from_var(Z), MLaurent.from_var(W)
Q = QRat.q_power


def same_ratio(pair, num, den):
    return pair.num * den == num * pair.den


def test_validation():
    assert CartanMatrix.from_rows([[2, -1], [-1, 2]]).validate()
    assert CartanMatrix.from_rows([[2, -7], [-7, 2]]).validate()
    with pytest.raises(CartanError):
        CartanMatrix.from_rows([[2, 1], [1, 2]])
    with pytest.raises(CartanError):
        CartanMatrix.from_rows([[2, -1], [-2, 2]])
    with pytest.raises(CartanError):
        CartanMatrix.from_rows([[3, 0], [0, 2]])


def test_load(tmp_path):
    f = tmp_path / "c.json"
    f.write_text(json.dumps(preset("A3").to_json()))
    assert load_cartan(str(f)) == preset("A3")
    assert load_cartan("rank2:-4").dd("i", "j") == -4
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(CartanError):
        load_cartan(str(bad))
    with pytest.raises(CartanError):
        load_cartan("no-such-thing")


def test_zeta_examples():
    C = preset("rank2:-1")
    assert same_ratio(zeta(C, "i", "i"), z - w * Q(-2), z - w)
    assert same_ratio(zeta(C, "i", "j"), z - w * Q(1), z - w)
    C0 = preset("rank2:0")
    assert same_ratio(zeta(C0, "i", "j"), MLaurent.const(1), MLaurent.const(1))


def test_zeta_geom_examples():
    C = preset("rank2:-1")
    assert same_ratio(zeta_geom(C, "i", "i"), z - w * Q(-2), z - w)
    assert same_ratio(zeta_geom(C, "i", "j"), w * Q(1) - z, w)
    assert same_ratio(zeta_geom(C, "j", "i"), z - w * Q(1), z)
    assert zeta_geom(C, "i", "j").is_laurent()


@pytest.mark.parametrize("d", [0, -1, -2, -3, -4])
def test_zeta_to_zeta_geom(d):
    # zeta^geom_ij(z/w) * zeta^geom_ji(w/z) = zeta_ij(z/w) zeta_ji(w/z) * (correction)
    C = preset(f"rank2:{d}")
    for i, j in (("i", "j"), ("j", "i")):
        g, t, c = zeta_geom(C, i, j), zeta(C, i, j), zeta_correction(C, i, j)
        assert g.num * t.den * c.den == t.num * c.num * g.den


def test_mutation_changes_zeta():
    C = preset("A2")
    assert not same_ratio(zeta(C.with_mutation(), "i", "j"), *zeta(C, "i", "j").at(Z, W))
    assert C.with_mutation() == C


def test_zeta_geom_orthogonal():
    # for d_ij = 0 the geometric kernel carries the factor 1 - z/w (i < j)
    C = preset("rank2:0")
    assert same_ratio(zeta_geom(C, "i", "j"), w - z, w)
    assert same_ratio(zeta_geom(C, "j", "i"), z - w, z)
