import random
from fractions import Fraction

import pytest

from tispin.fixedpoint import (EncodingError, FixedPrecisionReal, adjust_down,
                               adjust_up, compare)

from oracles import random_signed_digits


def F(int_digits, frac_digits=()):
    return FixedPrecisionReal(tuple(int_digits), tuple(frac_digits))


def digits_value(int_digits, frac_digits):
    total = sum(d * Fraction(2) ** i for i, d in enumerate(int_digits))
    total += sum(d * Fraction(1, 2 ** (i + 1)) for i, d in enumerate(frac_digits))
    return total


def test_value_single_digit():
    assert F([1]).value() == 1


def test_value_mixed():
    assert F([1, 1], [-1]).value() == Fraction(5, 2)
    assert F([-1, 1], [1, 1]).value() == Fraction(7, 4)


def test_bad_digit_rejected():
    with pytest.raises(EncodingError):
        F([2])
    with pytest.raises(EncodingError):
        F([], [0, -2])


def test_value_matches_direct_sum_randomized():
    rng = random.Random(11)
    for _ in range(500):
        ints = random_signed_digits(rng, rng.randrange(0, 12))
        fracs = random_signed_digits(rng, rng.randrange(0, 12))
        assert F(ints, fracs).value() == digits_value(ints, fracs)


def test_truncate_examples():
    x = F([1], [1, 1, 1]).truncate(1)
    assert x == F([1], [1])
    x = F([], [-1, 1, -1, 1]).truncate(2)
    assert x == F([], [-1, 1])
    assert abs(F([], [-1, 1, -1, 1]).value() - x.value()) == Fraction(1, 16)


def test_truncate_identity_when_wide():
    x = F([1, -1], [1, 0, 1])
    assert x.truncate(3) is x
    assert x.truncate(10) is x


def test_truncate_error_bound_randomized():
    rng = random.Random(3)
    for _ in range(2000):
        x = F(random_signed_digits(rng, rng.randrange(0, 6)),
              random_signed_digits(rng, rng.randrange(0, 20)))
        level = rng.randrange(0, 22)
        err = abs(x.value() - x.truncate(level).value())
        assert err <= Fraction(1, 2 ** level)


def test_compare_redundant_encodings():
    assert compare(F([1, 1]), F([-1, 0, 1])) == 0  # 3 = -1 + 4
    assert compare(F([1, 1], [-1]), F([-1, 1], [1, 1])) == 1  # 5/2 > 7/4
    assert compare(F([]), F([], [0, 0])) == 0


def test_compare_agrees_with_rationals_bulk():
    rng = random.Random(7)
    for _ in range(10_000):
        a = F(random_signed_digits(rng, rng.randrange(0, 8)),
              random_signed_digits(rng, rng.randrange(0, 8)))
        b = F(random_signed_digits(rng, rng.randrange(0, 8)),
              random_signed_digits(rng, rng.randrange(0, 8)))
        av, bv = a.value(), b.value()
        assert compare(a, b) == (av > bv) - (av < bv)


def test_canonical_is_non_adjacent_and_minimal():
    rng = random.Random(5)
    for _ in range(2000):
        x = F(random_signed_digits(rng, rng.randrange(0, 10)),
              random_signed_digits(rng, rng.randrange(0, 10)))
        c = x.canonical()
        assert c.value() == x.value()
        stream = tuple(reversed(c.frac_digits)) + c.int_digits
        assert all(not (stream[i] and stream[i + 1]) for i in range(len(stream) - 1))
        if c.int_digits:
            assert c.int_digits[-1] != 0
        if c.frac_digits:
            assert c.frac_digits[-1] != 0


def test_canonicalize_idempotent():
    rng = random.Random(19)
    for _ in range(500):
        x = F(random_signed_digits(rng, rng.randrange(0, 8)),
              random_signed_digits(rng, rng.randrange(0, 8)))
        c = x.canonical()
        assert c.canonical() == c
        assert c.is_canonical()


def test_canonical_unique_per_value():
    rng = random.Random(23)
    seen = {}
    for _ in range(3000):
        x = F(random_signed_digits(rng, rng.randrange(0, 7)),
              random_signed_digits(rng, rng.randrange(0, 7)))
        c = x.canonical()
        key = x.value()
        if key in seen:
            assert seen[key] == c
        else:
            seen[key] = c


def test_from_fraction_dyadic_only():
    assert FixedPrecisionReal.from_fraction(Fraction(7, 4)).value() == Fraction(7, 4)
    with pytest.raises(ValueError):
        FixedPrecisionReal.from_fraction(Fraction(1, 3))


def test_encode_decode_roundtrip_raw():
    rng = random.Random(13)
    for _ in range(1000):
        x = F(random_signed_digits(rng, rng.randrange(0, 9)),
              random_signed_digits(rng, rng.randrange(0, 9)))
        assert FixedPrecisionReal.decode(x.encode()) == x


def test_encode_of_decode_identity():
    rng = random.Random(29)
    for _ in range(500):
        x = F(random_signed_digits(rng, rng.randrange(0, 9)),
              random_signed_digits(rng, rng.randrange(0, 9)))
        blob = x.encode()
        assert FixedPrecisionReal.decode(blob).encode() == blob


def test_encode_zero_empty_payload():
    z = FixedPrecisionReal.from_int(0)
    assert (z.int_digits, z.frac_digits) == ((), ())
    assert z.encode() == b"\x00\x00\x00\x00"


def test_encode_injective_on_canonical_forms():
    rng = random.Random(31)
    seen = {}
    for _ in range(3000):
        x = F(random_signed_digits(rng, rng.randrange(0, 8)),
              random_signed_digits(rng, rng.randrange(0, 8))).canonical()
        blob = x.encode()
        if blob in seen:
            assert seen[blob] == x
        else:
            seen[blob] = x
    values = {FixedPrecisionReal.decode(b).value() for b in seen}
    assert len(values) == len(seen)


def test_decode_error_offsets():
    with pytest.raises(EncodingError):
        FixedPrecisionReal.decode(b"\x00\x00")  # truncated header
    with pytest.raises(EncodingError):
        FixedPrecisionReal.decode(b"\x00\x01\x00\x00")  # missing payload
    # digit code 10 is invalid: first digit = bits 7-6
    err = None
    try:
        FixedPrecisionReal.decode(b"\x00\x01\x00\x00\x80")
    except EncodingError as e:
        err = e
    assert err is not None and err.offset == 0
    # nonzero padding bits after the last digit
    with pytest.raises(EncodingError):
        FixedPrecisionReal.decode(b"\x00\x01\x00\x00\x41")


def test_adjust_up_down():
    x = FixedPrecisionReal.from_fraction(Fraction(3, 8))
    up = adjust_up(x, Fraction(1, 3), 4)
    down = adjust_down(x, Fraction(1, 3), 4)
    assert up.value() >= Fraction(3, 8) + Fraction(1, 3)
    assert up.value() - (Fraction(3, 8) + Fraction(1, 3)) < Fraction(1, 16)
    assert down.value() <= Fraction(3, 8) - Fraction(1, 3)
    assert (Fraction(3, 8) - Fraction(1, 3)) - down.value() < Fraction(1, 16)
    assert up.frac_width <= 4 and down.frac_width <= 4
