"""Signed-digit fixed-precision reals.

A value is a pair of digit strings with every digit in {-1, 0, +1}:
integer digit i carries weight 2**i, fractional digit i (1-based) carries
weight 2**-i.  The represented value is the exact dyadic rational

    sum_i int_digits[i] * 2**i  +  sum_i frac_digits[i-1] * 2**-i

and all arithmetic here is exact (``fractions.Fraction``); floating point
never enters this module.

Signed-digit strings are redundant (3 is both [1,1] and [-1,0,1]).  The
canonical form used for counting and wire encoding is the non-adjacent
form: no two consecutive nonzero digits across the whole string, no
leading zero integer digits, no trailing zero fractional digits.  Each
dyadic rational has exactly one canonical form.

Wire format for one value: P and Q as 16-bit big-endian integers,
followed by the P integer digits then the Q fractional digits, 2 bits
per digit (00 = 0, 01 = +1, 11 = -1; 10 is invalid), packed from the
most significant bit pair of each byte, zero-padded to a byte boundary.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from fractions import Fraction

__all__ = [
    "FixedPrecisionReal",
    "EncodingError",
    "compare",
    "adjust_up",
    "adjust_down",
]

_DIGITS = (-1, 0, 1)

# 2-bit wire codes per digit value
_ENCODE_CODE = {0: 0b00, 1: 0b01, -1: 0b11}
_DECODE_CODE = {0b00: 0, 0b01: 1, 0b11: -1}


class EncodingError(ValueError):
    """Malformed digit or wire bytes; ``offset`` locates the defect."""

    def __init__(self, message: str, offset: int | None = None):
        super().__init__(message if offset is None else f"{message} (offset {offset})")
        self.offset = offset


def _naf_digits(n: int) -> list[int]:
    """Non-adjacent-form digits of an integer, least significant first."""
    digits: list[int] = []
    while n != 0:
        if n & 1:
            d = 2 - (n & 3)  # +1 if n = 1 mod 4, -1 if n = 3 mod 4
            n -= d
        else:
            d = 0
        digits.append(d)
        n //= 2
    return digits


@dataclass(frozen=True)
class FixedPrecisionReal:
    """Immutable signed-digit fixed-precision real.

    ``int_digits[i]`` weighs ``2**i``; ``frac_digits[i]`` weighs
    ``2**-(i+1)``.  Equality and hashing are representation-based (digit
    strings); use :meth:`compare` for value ordering.
    """

    int_digits: tuple[int, ...] = ()
    frac_digits: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        for name in ("int_digits", "frac_digits"):
            digits = getattr(self, name)
            if not isinstance(digits, tuple):
                object.__setattr__(self, name, tuple(digits))
                digits = getattr(self, name)
            for i, d in enumerate(digits):
                if d not in _DIGITS:
                    raise EncodingError(f"digit {d!r} in {name} not in {{-1,0,1}}", offset=i)

    # -- value ---------------------------------------------------------

    @property
    def int_width(self) -> int:
        return len(self.int_digits)

    @property
    def frac_width(self) -> int:
        return len(self.frac_digits)

    def value(self) -> Fraction:
        """Exact dyadic value; denominator divides ``2**frac_width``."""
        acc = 0
        for i, d in enumerate(self.int_digits):
            acc += d << i
        frac = 0
        q = len(self.frac_digits)
        for i, d in enumerate(self.frac_digits):
            # digit i weighs 2**-(i+1) = 2**(q-i-1) / 2**q
            frac += d << (q - i - 1)
        return Fraction(acc) + Fraction(frac, 1 << q) if q else Fraction(acc)

    def __float__(self) -> float:
        return float(self.value())

    def compare(self, other: "FixedPrecisionReal") -> int:
        """-1, 0 or +1 by exact value, independent of representation."""
        a, b = self.value(), other.value()
        return (a > b) - (a < b)

    # -- construction ----------------------------------------------------

    @classmethod
    def from_fraction(cls, fr: Fraction | int) -> "FixedPrecisionReal":
        """Canonical form of a dyadic rational; raises for non-dyadic."""
        fr = Fraction(fr)
        den = fr.denominator
        if den & (den - 1):
            raise ValueError(f"{fr} is not dyadic")
        q = den.bit_length() - 1
        naf = _naf_digits(fr.numerator)  # index i weighs 2**(i-q)
        frac = tuple(reversed(naf[:q])) if q else ()
        frac = (0,) * (q - len(naf)) + frac if len(naf) < q else frac
        return cls(tuple(naf[q:]), frac)

    @classmethod
    def from_int(cls, n: int) -> "FixedPrecisionReal":
        return cls.from_fraction(Fraction(n))

    def canonical(self) -> "FixedPrecisionReal":
        """Unique non-adjacent form: minimal widths, same value."""
        return FixedPrecisionReal.from_fraction(self.value())

    def is_canonical(self) -> bool:
        return self == self.canonical()

    # -- truncation ------------------------------------------------------

    def truncate(self, L: int) -> "FixedPrecisionReal":
        """Cut the fractional digit string to its first ``L`` digits.

        Operates on the digit string as given (no canonicalization), so
        ``|value(x) - value(truncate(x, L))| <= 2**-L`` holds digit-wise.
        ``L >= frac_width`` returns ``self`` unchanged.
        """
        if L < 0:
            raise ValueError("truncation width must be >= 0")
        if L >= len(self.frac_digits):
            return self
        return FixedPrecisionReal(self.int_digits, self.frac_digits[:L])

    # -- wire encoding ---------------------------------------------------

    def encode(self) -> bytes:
        """Wire bytes: 16-bit big-endian P and Q headers plus packed digits."""
        p, q = len(self.int_digits), len(self.frac_digits)
        if p > 0xFFFF or q > 0xFFFF:
            raise EncodingError("digit string too long for 16-bit header")
        out = bytearray(struct.pack(">HH", p, q))
        acc = 0
        nbits = 0
        for d in self.int_digits + self.frac_digits:
            acc = (acc << 2) | _ENCODE_CODE[d]
            nbits += 2
            if nbits == 8:
                out.append(acc)
                acc = 0
                nbits = 0
        if nbits:
            out.append(acc << (8 - nbits))  # zero-pad to byte boundary
        return bytes(out)

    @classmethod
    def decode(cls, data: bytes) -> "FixedPrecisionReal":
        """Inverse of :meth:`encode`; raises :class:`EncodingError` with the
        byte or digit offset on malformed input."""
        if len(data) < 4:
            raise EncodingError("truncated header", offset=len(data))
        p, q = struct.unpack(">HH", data[:4])
        n = p + q
        payload_len = (2 * n + 7) // 8
        if len(data) != 4 + payload_len:
            raise EncodingError(
                f"payload length {len(data) - 4}, expected {payload_len}", offset=4
            )
        digits: list[int] = []
        for k in range(n):
            byte = data[4 + (k // 4)]
            code = (byte >> (6 - 2 * (k % 4))) & 0b11
            if code not in _DECODE_CODE:
                raise EncodingError("invalid digit code 10", offset=k)
            digits.append(_DECODE_CODE[code])
        # padding bits beyond the last digit must be zero
        if n % 4:
            tail = data[-1] & ((1 << (8 - 2 * (n % 4))) - 1)
            if tail:
                raise EncodingError("nonzero padding bits", offset=n)
        return cls(tuple(digits[:p]), tuple(digits[p:]))

    def __repr__(self) -> str:
        return f"FixedPrecisionReal({list(self.int_digits)}, {list(self.frac_digits)})"

    def __str__(self) -> str:
        return str(self.value())


def compare(x: FixedPrecisionReal, y: FixedPrecisionReal) -> int:
    """Exact value ordering: -1 (LT), 0 (EQ), +1 (GT)."""
    return x.compare(y)


def adjust_up(x: FixedPrecisionReal, delta: Fraction, frac_width: int) -> FixedPrecisionReal:
    """Smallest multiple of ``2**-frac_width`` that is >= value(x) + delta.

    ``delta`` may be any exact rational (the perturbation bounds are not
    dyadic in general); the result is always representable.
    """
    scaled = (x.value() + delta) * (1 << frac_width)
    n = -((-scaled.numerator) // scaled.denominator)  # ceil
    return FixedPrecisionReal.from_fraction(Fraction(n, 1 << frac_width))


def adjust_down(x: FixedPrecisionReal, delta: Fraction, frac_width: int) -> FixedPrecisionReal:
    """Largest multiple of ``2**-frac_width`` that is <= value(x) - delta."""
    scaled = (x.value() - delta) * (1 << frac_width)
    n = scaled.numerator // scaled.denominator  # floor
    return FixedPrecisionReal.from_fraction(Fraction(n, 1 << frac_width))
