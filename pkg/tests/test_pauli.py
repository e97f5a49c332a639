import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import dense
from pauligraph.errors import DimensionError
from pauligraph.pauli import (
    PauliString,
    Phase,
    all_paulis,
    anticommute_mask,
    commutator_image,
    commutator_images,
    commutes,
    label_of_index,
    multiply,
    parse,
    weight,
    weights_of,
)


def labels(n):
    return ["".join(t) for t in itertools.product("IXYZ", repeat=n)]


pauli_labels = st.integers(1, 5).flatmap(lambda n: st.tuples(*[st.text("IXYZ", min_size=n, max_size=n)] * 3))


def test_parse_bits():
    p = parse("IZ")
    assert (p.x, p.z) == (0, 0b10)
    y = parse("Y")
    assert (y.x, y.z) == (1, 1)


def test_parse_rejects_bad_input():
    with pytest.raises(ValueError):
        parse("XQ")
    with pytest.raises(ValueError):
        parse("")


def test_round_trip_n4():
    seen = set()
    for idx in range(256):
        p = PauliString.from_index(idx, 4)
        assert p.index == idx
        assert parse(p.label) == p
        assert label_of_index(idx, 4) == p.label
        seen.add(p.label)
    assert len(seen) == 256


def test_to_matrix_matches_kron():
    for lab in labels(3):
        assert np.allclose(parse(lab).to_matrix(), dense(lab))


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_commutes_exhaustive(n):
    mats = {lab: dense(lab) for lab in labels(n)}
    for a, b in itertools.product(mats, repeat=2):
        comm = mats[a] @ mats[b] - mats[b] @ mats[a]
        assert commutes(parse(a), parse(b)) == np.allclose(comm, 0)


def test_commutes_examples():
    assert not commutes(parse("X"), parse("Z"))
    assert commutes(parse("XIZY"), parse("XIZY"))
    lhs, rhs = dense("XIZY"), dense("ZXIY")
    assert commutes(parse("XIZY"), parse("ZXIY")) == np.allclose(lhs @ rhs, rhs @ lhs)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_multiply_exhaustive(n):
    for a, b in itertools.product(labels(n), repeat=2):
        r, w = multiply(parse(a), parse(b))
        assert np.allclose(dense(a) @ dense(b), complex(w) * dense(r.label))


def test_multiply_examples():
    assert multiply(parse("X"), parse("Y")) == (parse("Z"), Phase(1))
    p = parse("XZY")
    assert multiply(p, PauliString.identity(3)) == (p, Phase(0))


@given(pauli_labels)
def test_multiply_associative(triple):
    a, b, c = map(parse, triple)
    ab, w1 = multiply(a, b)
    abc, w2 = multiply(ab, c)
    bc, w3 = multiply(b, c)
    abc2, w4 = multiply(a, bc)
    assert abc == abc2
    assert w1 * w2 == w3 * w4


def test_commutator_image_examples():
    assert commutator_image(parse("Z"), parse("X")) == (parse("Y"), 1)
    assert commutator_image(parse("Z"), parse("Z")) is None
    q, s = commutator_image(parse("XX"), parse("ZI"))
    assert q == parse("YX") and s == -1
    comm = dense("XX") @ dense("ZI") - dense("ZI") @ dense("XX")
    assert np.allclose(comm, s * 2j * dense("YX"))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_commutator_image_dense(n):
    for a, b in itertools.product(labels(n), repeat=2):
        out = commutator_image(parse(a), parse(b))
        comm = dense(a) @ dense(b) - dense(b) @ dense(a)
        if out is None:
            assert np.allclose(comm, 0)
        else:
            q, s = out
            assert np.allclose(comm, s * 2j * dense(q.label))


@given(pauli_labels)
def test_commutator_image_undirected(triple):
    g, p, _ = map(parse, triple)
    out = commutator_image(g, p)
    if out is None:
        return
    q, _ = out
    back = commutator_image(g, q)
    assert back is not None and back[0] == p


@pytest.mark.parametrize("n", [2, 3])
def test_vectorised_helpers_match_scalar(n):
    idx = np.arange(4**n, dtype=np.uint64)
    strings = list(all_paulis(n))
    assert weights_of(idx, n).tolist() == [weight(p) for p in strings]
    for g in strings[1:: 5]:
        mask = anticommute_mask(idx, g)
        assert mask.tolist() == [not commutes(g, p) for p in strings]
        m2, images, signs = commutator_images(g, idx)
        assert (m2 == mask).all()
        expected = [commutator_image(g, p) for p in strings if not commutes(g, p)]
        assert images.tolist() == [q.index for q, _ in expected]
        assert signs.tolist() == [s for _, s in expected]


def test_weight():
    assert weight(PauliString.identity(4)) == 0
    assert weight(parse("XIZY")) == 3


def test_dimension_mismatch():
    with pytest.raises(DimensionError):
        commutes(parse("X"), parse("XX"))
    with pytest.raises(DimensionError):
        multiply(parse("XY"), parse("X"))
    with pytest.raises(DimensionError):
        commutator_image(parse("Z"), parse("ZZ"))
