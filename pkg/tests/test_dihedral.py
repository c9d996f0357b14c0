import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from artinrigid import dihedral as d
from artinrigid.errors import BudgetError, PreconditionError
from artinrigid.oracle import rank2_torus_key

letters = st.sampled_from([("a", 1), ("a", -1), ("b", 1), ("b", -1)])
words = st.lists(letters, max_size=8)
labels = st.integers(2, 6)


@settings(max_examples=300)
@given(labels, words)
def test_nf_matches_closure_reference(m, w):
    assert d.nf(w, m) == d.nf_by_closure(w, m)


@given(st.integers(3, 7), words, words)
def test_nf_equality_matches_torus_key(m, u, v):
    assert (d.nf(u, m) == d.nf(v, m)) == (rank2_torus_key(u, m) == rank2_torus_key(v, m))


@given(labels, words)
def test_word_reconstructs_element(m, w):
    x = d.nf(w, m)
    assert d.nf(x.word(), m) == x


@given(labels, words)
def test_tail_has_no_delta_factor(m, w):
    x = d.nf(w, m)
    assert d.positive_closure(x.tail, m) == {x.tail}


@given(labels, words, words, words)
def test_group_laws(m, u, v, w):
    x, y, z = d.nf(u, m), d.nf(v, m), d.nf(w, m)
    assert d.mult(d.mult(x, y), z) == d.mult(x, d.mult(y, z))
    assert d.mult(x, d.inv(x)) == d.identity(m)
    assert d.mult(x, y) == d.nf(list(u) + list(v), m)


@given(labels, words, words)
def test_exponent_sum_is_additive(m, u, v):
    x, y = d.nf(u, m), d.nf(v, m)
    for c in "ab":
        assert d.exponent_sum(d.mult(x, y), c) == d.exponent_sum(x, c) + d.exponent_sum(y, c)


@given(st.integers(3, 6), words, words, st.sampled_from("ab"))
def test_coset_equal_brute_force(m, u, v, c):
    x, y = d.nf(u, m), d.nf(v, m)
    diff = d.mult(d.inv(x), y)
    brute = any(diff == (d.generator(c, m, j) if j else d.identity(m)) for j in range(-20, 21))
    assert d.coset_equal_gen(x, y, c) == brute


def test_delta_spellings_agree():
    for m in range(2, 8):
        a, b = d.delta_spellings(m)
        assert d.nf(a, m) == d.nf(b, m) == d.delta(m)


@pytest.mark.parametrize("m", range(3, 7))
def test_center(m):
    z = d.center_generator(m)
    assert d.commutes(z, d.generator("a", m)) and d.commutes(z, d.generator("b", m))
    if m % 2:
        assert not d.commutes(d.delta(m), d.generator("a", m))


def test_center_m3_value():
    assert d.center_generator(3) == d.nf("ababab", 3)
    with pytest.raises(PreconditionError):
        d.center_generator(2)


@pytest.mark.parametrize("m", [3, 4, 5])
def test_delta_power_coset_check(m):
    assert d.delta_power_coset_check(m, 3, 3)


def test_ball_sizes():
    assert [len(d.ball(3, r)) for r in range(5)] == [1, 5, 17, 47, 115]
    assert [len(d.ball_words(3, r)) for r in range(7)] == [1, 5, 17, 47, 115, 263, 577]
    with pytest.raises(BudgetError):
        d.ball(3, 9)


@pytest.mark.parametrize("m", [3, 4, 5])
def test_ball_words_are_geodesic(m):
    bw = d.ball_words(m, 4)
    assert {x for x, _ in bw} == d.ball(m, 4)
    seen = set()
    for x, w in bw:
        assert d.nf(w, m) == x
        assert x not in seen
        seen.add(x)
    lengths = [len(w) for _, w in bw]
    assert lengths == sorted(lengths)


def test_parse_word_forms():
    assert d.parse_word("aB") == [("a", 1), ("b", -1)]
    assert d.parse_word("a^-1b") == [("a", -1), ("b", 1)]
    assert d.word_to_text(d.parse_word("abAB")) == "abAB"


def test_sigma_flip():
    assert d.sigma("aab", 3) == "bba"
    assert d.sigma("aab", 4) == "aab"
    x = d.nf("a", 3)
    assert d.mult(x, d.delta(3)) == d.mult(d.delta(3), d.nf("b", 3))
