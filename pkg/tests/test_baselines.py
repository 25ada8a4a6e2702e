import random

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from epsm.baselines import BaselineConfig, naive_search, sbndm_q_search, shift_or_search
from epsm.core import Text
from epsm.errors import UsageError
from epsm.oracles import find_all

from conftest import random_bytes


def test_naive_examples():
    assert naive_search(b"aa", b"aaaa").tolist() == [0, 1, 2]
    assert naive_search(b"abc", b"ab").tolist() == []
    assert naive_search(b"x", b"").tolist() == []


def test_results_are_sorted_int64():
    occ = shift_or_search(b"ab", b"abab")
    assert occ.dtype == np.int64
    assert occ.tolist() == [0, 2]


def test_shift_or_full_word():
    rng = random.Random(64)
    t = random_bytes(rng, 5000, 2)
    p = t[1234 : 1234 + 64]
    assert shift_or_search(p, t).tolist() == find_all(p, t)


def test_shift_or_word_limit():
    with pytest.raises(UsageError):
        shift_or_search(b"a" * 65, b"a" * 100)
    with pytest.raises(UsageError):
        shift_or_search(b"a" * 9, b"a" * 100, BaselineConfig(word_bits=8))
    with pytest.raises(UsageError):
        BaselineConfig(word_bits=65)


def test_sbndm_planted():
    rng = np.random.default_rng(5)
    t = bytearray(rng.integers(0, 256, 10_000, dtype=np.uint8).tobytes())
    for s in (0, 4321, 9996):
        t[s : s + 4] = b"abcd"
    want = find_all(b"abcd", bytes(t))
    assert {0, 4321, 9996} <= set(want)
    assert sbndm_q_search(b"abcd", bytes(t), 2).tolist() == want


def test_sbndm_overlaps():
    assert sbndm_q_search(b"aaaa", b"aaaaaa", 2).tolist() == [0, 1, 2]


@pytest.mark.parametrize("q", [1, 2, 3, 4])
def test_sbndm_gram_sizes(q):
    rng = random.Random(q)
    t = random_bytes(rng, 2000, 4)
    for m in range(q, 20):
        p = t[300 : 300 + m]
        assert sbndm_q_search(p, t, q).tolist() == find_all(p, t)


def test_sbndm_errors():
    with pytest.raises(UsageError):
        sbndm_q_search(b"a", b"aaa", 2)
    with pytest.raises(UsageError):
        sbndm_q_search(b"ab", b"aaa", 0)
    with pytest.raises(UsageError):
        sbndm_q_search(b"a" * 65, b"a" * 100, 2)
    with pytest.raises(UsageError):
        BaselineConfig(q=0)


def test_accepts_text_objects():
    t = Text(b"xxabxxab")
    assert naive_search(b"ab", t).tolist() == [2, 6]
    assert shift_or_search(b"ab", t).tolist() == [2, 6]
    assert sbndm_q_search(b"ab", t).tolist() == [2, 6]


@st.composite
def cases(draw):
    sigma = draw(st.sampled_from([2, 4, 20, 256]))
    t = bytes(draw(st.lists(st.integers(0, sigma - 1), max_size=200)))
    m = draw(st.integers(2, 64))
    if len(t) >= m and draw(st.booleans()):
        s = draw(st.integers(0, len(t) - m))
        return t[s : s + m], t
    return bytes(draw(st.lists(st.integers(0, sigma - 1), min_size=m, max_size=m))), t


@given(cases())
def test_baselines_equal_oracle(case):
    p, t = case
    want = find_all(p, t)
    assert naive_search(p, t).tolist() == want
    assert shift_or_search(p, t).tolist() == want
    assert sbndm_q_search(p, t, 2).tolist() == want
