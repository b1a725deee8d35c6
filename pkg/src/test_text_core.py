from fractions import Fraction

import numpy as np
import pytest

from config import IndexConfig, choose_tau, tau_from_formula
from errors import AlphabetTooLarge, ConfigError, EmptyInput, OutOfRange, TauTooLarge, TooLong
from oracle import naive_lce, naive_period
from text_core import (PackedText, decode_int, encode_int, encode_int_prime, ingest, lcp,
                       mstr, mstr_prime, period, periodic_root, power_prefix)

SAMPLE = b"abaababababaababa"


def all_strings(sigma, max_len):
    out = [()]
    frontier = [()]
    for _ in range(max_len):
        frontier = [x + (c,) for x in frontier for c in range(sigma)]
        out.extend(frontier)
    return out


def test_ingest_sample():
    text = ingest(SAMPLE)
    assert text.n == 18
    assert text.sigma == 3
    assert text.symbols[-1] == 0
    assert text.alphabet == b"ab"
    assert text.substring(1, 4) == (1, 2, 1, 1)


def test_ingest_single_byte():
    text = ingest(b"a")
    assert text.n == 2
    assert text.sigma == 2


def test_ingest_rejects_empty_and_full_alphabet():
    with pytest.raises(EmptyInput):
        ingest(b"")
    with pytest.raises(AlphabetTooLarge):
        ingest(bytes(range(256)))


def test_tau_formula_is_exact():
    # sigma = 3 once the sentinel is counted
    n = 2 ** 20 + 1
    assert tau_from_formula(n, 3, Fraction(1, 8)) == 1
    # boundary: 2^(2*8) <= 2^16
    assert tau_from_formula(2 ** 16, 2, Fraction(1, 8)) == 2
    assert tau_from_formula(2 ** 16 - 1, 2, Fraction(1, 8)) == 1
    for n in (10, 1000, 123456):
        for sigma in (2, 3, 5):
            t = tau_from_formula(n, sigma, Fraction(1, 8))
            assert sigma ** (8 * t) <= n < sigma ** (8 * (t + 1))


def test_choose_tau_policy():
    tau, fallback = choose_tau(18, 3, IndexConfig())
    assert fallback
    assert tau >= 1
    assert choose_tau(18, 3, IndexConfig(tau=2)) == (2, False)
    with pytest.raises(TauTooLarge):
        choose_tau(18, 3, IndexConfig(tau=10))


def test_config_validation():
    with pytest.raises(ConfigError):
        IndexConfig(mu=Fraction(1, 6))
    with pytest.raises(ConfigError):
        IndexConfig(eps=1.0)
    with pytest.raises(ConfigError):
        IndexConfig(tau=0)


def test_lce_examples():
    text = ingest(SAMPLE)
    assert text.lce(1, 4) == 3
    assert text.lce(5, 5) == 14
    assert text.lce(18, 1) == 0
    with pytest.raises(OutOfRange):
        text.lce(0, 1)


def test_lce_matches_scan():
    rng = np.random.default_rng(7)
    raw = rng.choice(np.frombuffer(b"ab", dtype=np.uint8), size=300).tobytes()
    text = ingest(raw)
    symbols = text.symbols.tolist()
    for _ in range(300):
        j1, j2 = (int(x) for x in rng.integers(1, text.n + 1, size=2))
        assert text.lce(j1, j2) == naive_lce(symbols, j1, j2)


def test_compare_suffix():
    text = ingest(SAMPLE)
    assert text.compare_suffix(1, (1, 2, 1)) == 0
    assert text.compare_suffix(2, (1,)) == 1
    assert text.compare_suffix(18, (1,)) == -1
    # suffix "a$" is a proper prefix-side of "ab"
    assert text.compare_suffix(17, (1, 2)) == -1


def test_int_examples():
    assert encode_int((), 3, 2) == 0
    assert encode_int_prime((), 3, 2) == 3 ** 12 - 1
    # "1" . 0000 . "1" in base 2
    assert encode_int((1,), 2, 1) == 33
    with pytest.raises(TooLong):
        encode_int((1, 1, 1), 2, 1)


def test_int_is_injective_and_decodes():
    strings = all_strings(2, 5)
    assert len(strings) == 63
    values = {encode_int(x, 2, 2) for x in strings}
    assert len(values) == 63
    for x in strings:
        assert decode_int(encode_int(x, 2, 2), 2, 2) == x
        assert encode_int(x, 2, 2) < encode_int_prime(x, 2, 2)


def test_int_brackets_extensions():
    # every extension of X lies strictly between int(X) and int'(X)
    for x in all_strings(3, 3):
        lo, hi = encode_int(x, 3, 2), encode_int_prime(x, 3, 2)
        for y in all_strings(3, 5 - len(x)):
            if y:
                assert lo < encode_int(x + y, 3, 2) < hi


def test_mstr_shapes():
    assert mstr((), 2, 2) == (0,)
    s = (1, 0, 1, 1, 0)
    assert len(mstr(s, 2, 2)) == 2
    assert mstr(s, 2, 2)[-1] == 0
    assert mstr_prime(s, 2, 2)[-1] == 2 ** 12 - 1


def test_mstr_preserves_order():
    rng = np.random.default_rng(3)
    for _ in range(200):
        x = tuple(int(c) for c in rng.integers(0, 2, size=int(rng.integers(0, 13))))
        y = tuple(int(c) for c in rng.integers(0, 2, size=int(rng.integers(0, 13))))
        if x == y:
            continue
        assert (x < y) == (mstr(x, 2, 2) < mstr(y, 2, 2))


def test_period_helpers():
    assert period((1, 2, 1, 2, 1)) == 2
    assert period((1, 1, 1)) == 1
    assert period((1, 2, 3)) == 3
    rng = np.random.default_rng(11)
    for _ in range(100):
        x = tuple(int(c) for c in rng.integers(0, 2, size=int(rng.integers(1, 12))))
        assert period(x) == naive_period(x)
    assert lcp((1, 2, 3), (1, 2, 4)) == 2
    s, root = periodic_root((2, 1, 2, 1, 2), 2)
    assert root == (1, 2)
    assert s == 1
    assert power_prefix((1, 2), 1, 5) == (2, 1, 2, 1, 2)


def test_packing_and_reversal():
    text = ingest(SAMPLE, IndexConfig(tau=1))
    back = PackedText.from_packed(text.packed_bytes(), text.n, text.sigma, text.tau,
                                  text.mu, text.fallback, text.alphabet)
    assert np.array_equal(back.symbols, text.symbols)
    rev = text.reversed_text()
    assert rev.symbols[-1] == 0
    assert rev.to_bytes(rev.substring(1, 17)) == SAMPLE[::-1]


def test_pattern_mapping():
    text = ingest(SAMPLE)
    assert text.map_pattern(b"ab") == (1, 2)
    assert text.map_pattern(b"abc") is None
    assert text.to_bytes((1, 2, 0)) == b"ab$"
