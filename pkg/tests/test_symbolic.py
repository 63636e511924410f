import numpy as np
import pytest

from thermoform import InvalidInputError, ResourceLimitError
from thermoform import symbolic as S


def W(text, N=2):
    return S.Word.parse(text, N)


def test_concat_and_power():
    assert S.concat(W("12"), W("2")).symbols == (1, 2, 2)
    assert S.power(W("12"), 2).symbols == (1, 2, 1, 2)
    with pytest.raises(InvalidInputError):
        S.concat(W("12"), W("3", 3))
    with pytest.raises(InvalidInputError):
        S.power(W("12"), 0)


def test_invalid_words():
    with pytest.raises(InvalidInputError):
        S.as_word((), 2)
    with pytest.raises(InvalidInputError):
        S.as_word((1, 3), 2)
    with pytest.raises(InvalidInputError):
        S.as_word((1,), 1)


def test_enumeration_order():
    assert [str(w) for w in S.enumerate_words(2, 2)] == ["11", "12", "21", "22"]
    assert [str(w) for w in S.enumerate_words_upto(2, 2)] == ["1", "2", "11", "12", "21", "22"]
    arr = S.word_array(3, 2)
    assert arr.shape == (9, 2)
    assert arr[5].tolist() == [1, 2]  # zero-based symbols


def test_lex_index_examples():
    assert S.lex_index(W("11")) == 1
    assert S.lex_index(W("22")) == 4
    assert S.lex_index(W("21")) == 3
    assert S.lex_inverse(3, 2, 2).symbols == (2, 1)
    with pytest.raises(InvalidInputError):
        S.lex_inverse(5, 2, 2)


def test_recode_examples():
    r = S.recode_word(W("1221"), 2)
    assert r.symbols == (2, 3) and r.alphabet_size == 4
    assert S.decode_word(r, 2, 2) == W("1221")
    with pytest.raises(InvalidInputError):
        S.recode_word(W("121"), 2)
    assert S.recode_word(W("1221"), 1) == W("1221")


def test_budget_guard():
    old = S.set_word_budget(100)
    try:
        with pytest.raises(ResourceLimitError):
            list(S.enumerate_words(2, 7))
        assert len(list(S.enumerate_words(2, 6))) == 64
    finally:
        S.set_word_budget(old)


def test_word_array_matches_lex_inverse():
    arr = S.word_array(3, 3)
    for i in (1, 7, 27):
        assert tuple(arr[i - 1] + 1) == S.lex_inverse(i, 3, 3).symbols
    assert np.all(np.diff([S.lex_index(S.as_word(r + 1, 3)) for r in arr]) == 1)
