import pytest
from hypothesis import given
from hypothesis import strategies as st

from qpair.cartan import PRESETS, CartanDatum, CartanError, cartan_type, load_gcm

preset_names = st.sampled_from(sorted(PRESETS))


def test_bilinear_examples(A1, A2, B2):
    assert A1.bilinear((1,), (1,)) == 2
    assert A2.bilinear((1, 0), (0, 1)) == -1
    assert B2.bilinear((1, 0), (0, 1)) == -2


def test_reflection_examples(A2):
    assert A2.simple_reflection(0, (1, 0)) == (-1, 0)
    assert A2.simple_reflection(0, (0, 1)) == (1, 1)


def test_t_pairing_examples(A1, B2):
    assert A1.t_pairing((1,), (1,)) == 1
    assert B2.t_pairing((0, 1), (1, 0)) == 0


def test_positive_roots(A1, A2, B2, G2):
    assert A1.positive_roots() == [(1,)]
    assert set(A2.positive_roots()) == {(1, 0), (0, 1), (1, 1)}
    assert len(B2.positive_roots()) == 4
    assert len(G2.positive_roots()) == 6
    assert max(G2.positive_roots(), key=sum) == (3, 2)


def test_longest_words(A2, B2, G2):
    for d, n in ((A2, 3), (B2, 4), (G2, 6)):
        assert len(d.longest_word()) == n
        assert d.coxeter_order(0, 1) == n


def test_g2_short_root_first(G2):
    assert G2.sym == (1, 3)


def test_finite_type_detection():
    affine = CartanDatum.from_matrix(((2, -2), (-2, 2)))
    assert not affine.is_finite_type()
    with pytest.raises(CartanError):
        affine.longest_word()


@pytest.mark.parametrize("bad", [((2, 1), (-1, 2)), ((1, -1), (-1, 2)), ((2, -1), (0, 2))])
def test_invalid_gcm_rejected(bad):
    with pytest.raises(CartanError):
        CartanDatum.from_matrix(bad)


def test_unknown_preset():
    with pytest.raises(CartanError):
        cartan_type("E9")


def test_gcm_file_roundtrip(tmp_path):
    p = tmp_path / "b2.gcm"
    p.write_text("2\n2 -1\n-2 2\n")
    d = load_gcm(p)
    assert d.gcm == ((2, -1), (-2, 2))
    assert d.sym == (2, 1)
    p.write_text("2\n2 -1\n")
    with pytest.raises(CartanError):
        load_gcm(p)


@given(preset_names, st.data())
def test_reflection_is_involutive_isometry(name, data):
    d = cartan_type(name)
    g = tuple(data.draw(st.lists(st.integers(-4, 4), min_size=d.rank, max_size=d.rank)))
    h = tuple(data.draw(st.lists(st.integers(-4, 4), min_size=d.rank, max_size=d.rank)))
    i = data.draw(st.integers(0, d.rank - 1))
    assert d.simple_reflection(i, d.simple_reflection(i, g)) == g
    assert d.bilinear(d.simple_reflection(i, g), d.simple_reflection(i, h)) == d.bilinear(g, h)
    assert d.bilinear(g, h) == d.bilinear(h, g)
