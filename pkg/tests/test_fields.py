"""Field arithmetic axioms and the field-string parser."""

import pytest
from hypothesis import given, strategies as st

from smoothfq.fields import field_make, parse_field_spec

FIELDS = ["2", "3", "5", "7", "2^2", "2^3", "3^2", "2^4"]


@pytest.fixture(scope="module", params=FIELDS)
def K(request):
    return parse_field_spec(request.param)


def test_sizes(K):
    assert K.q == K.p**K.k
    assert len({K.mul(a, b) for a in range(K.q) for b in range(K.q)}) == K.q


@given(st.data())
def test_ring_axioms(data):
    K = parse_field_spec(data.draw(st.sampled_from(FIELDS)))
    a = data.draw(st.integers(0, K.q - 1))
    b = data.draw(st.integers(0, K.q - 1))
    c = data.draw(st.integers(0, K.q - 1))
    assert K.add(a, b) == K.add(b, a)
    assert K.mul(a, b) == K.mul(b, a)
    assert K.add(K.add(a, b), c) == K.add(a, K.add(b, c))
    assert K.mul(K.mul(a, b), c) == K.mul(a, K.mul(b, c))
    assert K.mul(a, K.add(b, c)) == K.add(K.mul(a, b), K.mul(a, c))
    assert K.add(a, K.neg(a)) == 0
    assert K.sub(a, b) == K.add(a, K.neg(b))


def test_inverses(K):
    for a in range(1, K.q):
        assert K.mul(a, K.inv(a)) == 1
    with pytest.raises(ZeroDivisionError):
        K.inv(0)


def test_pow_matches_repeated_mul(K):
    for a in range(1, K.q):
        acc = 1
        for e in range(2 * K.q):
            assert K.pow(a, e) == acc
            acc = K.mul(acc, a)
    # Fermat / Lagrange: a^(q-1) = 1 for units
    assert all(K.pow(a, K.q - 1) == 1 for a in range(1, K.q))


def test_trace_properties(K):
    # additive, F_p-valued, surjective onto F_p, and fixed by Frobenius
    vals = {K.trace(a) for a in range(K.q)}
    assert vals == set(range(K.p))
    for a in range(K.q):
        assert K.trace(K.pow(a, K.p)) == K.trace(a)
        for b in range(K.q):
            assert K.trace(K.add(a, b)) == (K.trace(a) + K.trace(b)) % K.p
    # each trace value is hit q/p times
    from collections import Counter

    counts = Counter(K.trace(a) for a in range(K.q))
    assert set(counts.values()) == {K.q // K.p}


def test_pth_root_inverts_frobenius(K):
    for a in range(K.q):
        assert K.pow(K.pth_root(a), K.p) == a


def test_vector_scalar_roundtrip(K):
    for a in range(K.q):
        assert K.scalar(K.vector(a)) == a


def test_parse_field_spec_forms():
    assert parse_field_spec("9").q == 9
    assert parse_field_spec("3^2").q == 9
    K = parse_field_spec("2^2:1,1,1")  # y^2 + y + 1
    assert K.q == 4 and K.mul(2, 2) == 3
    with pytest.raises(ValueError):
        parse_field_spec("6")  # not a prime power
    with pytest.raises(ValueError):
        parse_field_spec("nope")


def test_bad_modulus_rejected():
    with pytest.raises(ValueError):
        field_make(2, 2, (1, 0, 1))  # y^2 + 1 = (y+1)^2 over F_2
    with pytest.raises(ValueError):
        field_make(4, 1, None)


def test_contexts_are_cached():
    assert parse_field_spec("2^3") is parse_field_spec("8")
