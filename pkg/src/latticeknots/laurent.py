"""Exact integer Laurent polynomials in one variable.

Values are immutable. The zero polynomial is stored as ``min_exp == 0`` with
an empty coefficient tuple; non-zero values never carry zero padding at
either end, so structural equality is polynomial equality.
"""

from __future__ import annotations

import re
import struct
from typing import Iterable

__all__ = ["LaurentPoly", "ParseError"]


class ParseError(ValueError):
    """Malformed polynomial text. ``position`` is the 0-based offending index."""

    def __init__(self, message: str, text: str, position: int):
        super().__init__(f"{message} at position {position}: {text!r}")
        self.text = text
        self.position = position


_MACHINE_RE = re.compile(r"^\s*(-?\d+)\s*:\s*(-?\d+(?:\s*,\s*-?\d+)*)?\s*$")


class LaurentPoly:
    __slots__ = ("_min_exp", "_coeffs", "_hash")

    def __init__(self, min_exp: int = 0, coeffs: Iterable[int] = ()):
        c = [int(x) for x in coeffs]
        lo = 0
        while lo < len(c) and c[lo] == 0:
            lo += 1
        hi = len(c)
        while hi > lo and c[hi - 1] == 0:
            hi -= 1
        if lo == hi:
            self._min_exp = 0
            self._coeffs: tuple[int, ...] = ()
        else:
            self._min_exp = int(min_exp) + lo
            self._coeffs = tuple(c[lo:hi])
        self._hash = None

    # construction helpers

    @classmethod
    def zero(cls) -> LaurentPoly:
        return cls()

    @classmethod
    def one(cls) -> LaurentPoly:
        return cls(0, (1,))

    @classmethod
    def monomial(cls, exp: int, coeff: int = 1) -> LaurentPoly:
        return cls(exp, (coeff,))

    @classmethod
    def from_terms(cls, terms: dict[int, int]) -> LaurentPoly:
        terms = {e: c for e, c in terms.items() if c}
        if not terms:
            return cls()
        lo, hi = min(terms), max(terms)
        return cls(lo, (terms.get(e, 0) for e in range(lo, hi + 1)))

    # accessors

    @property
    def min_exp(self) -> int:
        return self._min_exp

    @property
    def coeffs(self) -> tuple[int, ...]:
        return self._coeffs

    @property
    def max_exp(self) -> int:
        return self._min_exp + len(self._coeffs) - 1

    @property
    def span(self) -> int:
        """Difference between the highest and lowest exponent (0 for zero)."""
        return len(self._coeffs) - 1 if self._coeffs else 0

    def is_zero(self) -> bool:
        return not self._coeffs

    def terms(self) -> dict[int, int]:
        return {self._min_exp + i: c for i, c in enumerate(self._coeffs) if c}

    def __getitem__(self, exp: int) -> int:
        i = exp - self._min_exp
        if 0 <= i < len(self._coeffs):
            return self._coeffs[i]
        return 0

    # ring operations

    def __add__(self, other: LaurentPoly) -> LaurentPoly:
        if not isinstance(other, LaurentPoly):
            other = _coerce(other)
        if not self._coeffs:
            return other
        if not other._coeffs:
            return self
        lo = min(self._min_exp, other._min_exp)
        hi = max(self.max_exp, other.max_exp)
        out = [0] * (hi - lo + 1)
        for poly in (self, other):
            base = poly._min_exp - lo
            for i, c in enumerate(poly._coeffs):
                out[base + i] += c
        return LaurentPoly(lo, out)

    __radd__ = __add__

    def __neg__(self) -> LaurentPoly:
        return LaurentPoly(self._min_exp, (-c for c in self._coeffs))

    def __sub__(self, other: LaurentPoly) -> LaurentPoly:
        if not isinstance(other, LaurentPoly):
            other = _coerce(other)
        return self + (-other)

    def __rsub__(self, other) -> LaurentPoly:
        return _coerce(other) - self

    def __mul__(self, other: LaurentPoly) -> LaurentPoly:
        if not isinstance(other, LaurentPoly):
            other = _coerce(other)
        if not self._coeffs or not other._coeffs:
            return LaurentPoly()
        a, b = self._coeffs, other._coeffs
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return LaurentPoly(self._min_exp + other._min_exp, out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> LaurentPoly:
        if k < 0:
            if len(self._coeffs) == 1 and self._coeffs[0] in (1, -1):
                return LaurentPoly(-self._min_exp * -k, (self._coeffs[0] ** k,))
            raise ValueError("negative power of a non-unit")
        result = LaurentPoly.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def shift(self, k: int) -> LaurentPoly:
        """Multiply by ``x**k``."""
        if not self._coeffs:
            return self
        return LaurentPoly(self._min_exp + k, self._coeffs)

    def substitute_inverse(self) -> LaurentPoly:
        """The image under ``x -> 1/x``."""
        if not self._coeffs:
            return self
        return LaurentPoly(-self.max_exp, reversed(self._coeffs))

    def substitute_power(self, k: int) -> LaurentPoly:
        """The image under ``x -> x**k`` for non-zero integer ``k``."""
        if k == 0:
            raise ValueError("k must be non-zero")
        return LaurentPoly.from_terms({e * k: c for e, c in self.terms().items()})

    def divide_exponents(self, k: int) -> LaurentPoly:
        """Inverse of ``substitute_power(k)``; every exponent must divide by ``k``."""
        terms = self.terms()
        if any(e % k for e in terms):
            raise ValueError(f"exponents not divisible by {k}")
        return LaurentPoly.from_terms({e // k: c for e, c in terms.items()})

    def exact_div(self, other: LaurentPoly) -> LaurentPoly | None:
        """Quotient ``self / other`` if it is an integer Laurent polynomial."""
        if not other._coeffs:
            raise ZeroDivisionError("division by the zero polynomial")
        if not self._coeffs:
            return self
        rem = list(self._coeffs)
        d = other._coeffs
        qlen = len(rem) - len(d) + 1
        if qlen <= 0:
            return None
        quot = [0] * qlen
        lead = d[-1]
        for i in range(qlen - 1, -1, -1):
            top = rem[i + len(d) - 1]
            if top % lead:
                return None
            f = top // lead
            quot[i] = f
            if f:
                for j, c in enumerate(d):
                    rem[i + j] -= f * c
        if any(rem):
            return None
        return LaurentPoly(self._min_exp - other._min_exp, quot)

    def eval_at_one(self) -> int:
        return sum(self._coeffs)

    def is_palindromic(self) -> bool:
        return self == self.substitute_inverse()

    def has_even_exponents(self) -> bool:
        return all(e % 2 == 0 for e in self.terms())

    # ordering, hashing

    def sort_key(self) -> tuple:
        """Total order: lowest exponent first, then the coefficient sequence."""
        return (self._min_exp, self._coeffs)

    def __lt__(self, other: LaurentPoly) -> bool:
        return self.sort_key() < other.sort_key()

    def __le__(self, other: LaurentPoly) -> bool:
        return self.sort_key() <= other.sort_key()

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = _coerce(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._min_exp == other._min_exp and self._coeffs == other._coeffs

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self._min_exp, self._coeffs))
        return self._hash

    # packed int64 key shared with the compiled kernels

    def key(self) -> bytes:
        """Packed ``int64`` form ``[min_exp, c0, c1, ...]``; raises on overflow."""
        try:
            return struct.pack(f"<{len(self._coeffs) + 1}q", self._min_exp, *self._coeffs)
        except struct.error as exc:
            raise OverflowError("coefficient exceeds int64") from exc

    @classmethod
    def from_key(cls, key: bytes) -> LaurentPoly:
        vals = struct.unpack(f"<{len(key) // 8}q", key)
        return cls(vals[0], vals[1:])

    # text forms

    def to_machine(self) -> str:
        """Canonical serialization ``min_exp:c0,c1,...``."""
        if not self._coeffs:
            return "0:0"
        return f"{self._min_exp}:" + ",".join(str(c) for c in self._coeffs)

    def render(self, var: str = "q") -> str:
        """Human form sorted by ascending exponent, e.g. ``q^-2 - 1 + 3*q^4``."""
        if not self._coeffs:
            return "0"
        parts = []
        for e, c in sorted(self.terms().items()):
            mag = abs(c)
            if e == 0:
                body = str(mag)
            else:
                mono = var if e == 1 else f"{var}^{e}"
                body = mono if mag == 1 else f"{mag}*{mono}"
            if not parts:
                parts.append(body if c > 0 else f"-{body}")
            else:
                parts.append(("+ " if c > 0 else "- ") + body)
        return " ".join(parts)

    def __str__(self) -> str:
        return self.render()

    def __repr__(self) -> str:
        return f"LaurentPoly({self._min_exp}, {list(self._coeffs)})"

    @classmethod
    def parse(cls, text: str, var: str = "q") -> LaurentPoly:
        """Parse the machine form ``min_exp:c0,...`` or a human sum of terms.

        Human terms look like ``3``, ``-q``, ``2*q^-3``, ``q^{-2}`` or
        ``2q^4``; whitespace is ignored.
        """
        m = _MACHINE_RE.match(text)
        if m:
            if m.group(2) is None:
                raise ParseError("missing coefficients", text, len(text))
            coeffs = [int(x) for x in m.group(2).split(",")]
            return cls(int(m.group(1)), coeffs)
        return _parse_human(text, var)


def _coerce(value) -> LaurentPoly:
    if isinstance(value, LaurentPoly):
        return value
    if isinstance(value, int):
        return LaurentPoly(0, (value,))
    raise TypeError(f"cannot use {type(value).__name__} as a Laurent polynomial")


def _parse_human(text: str, var: str) -> LaurentPoly:
    terms: dict[int, int] = {}
    pos = 0
    n = len(text)

    def skip_ws(p: int) -> int:
        while p < n and text[p].isspace():
            p += 1
        return p

    def read_int(p: int) -> tuple[int | None, int]:
        start = p
        if p < n and text[p] in "+-":
            p += 1
        digits = p
        while p < n and text[p].isdigit():
            p += 1
        if p == digits:
            return None, start
        return int(text[start:p]), p

    pos = skip_ws(pos)
    if pos == n:
        raise ParseError("empty input", text, 0)
    first = True
    while True:
        pos = skip_ws(pos)
        if pos == n:
            break
        sign = 1
        if text[pos] in "+-":
            sign = -1 if text[pos] == "-" else 1
            pos = skip_ws(pos + 1)
        elif not first:
            raise ParseError("expected '+' or '-'", text, pos)
        first = False
        if pos == n:
            raise ParseError("dangling sign", text, pos)
        coeff = 1
        has_coeff = False
        if text[pos].isdigit():
            start = pos
            while pos < n and text[pos].isdigit():
                pos += 1
            coeff = int(text[start:pos])
            has_coeff = True
            pos = skip_ws(pos)
            if pos < n and text[pos] == "*":
                pos = skip_ws(pos + 1)
                if pos == n or not text.startswith(var, pos):
                    raise ParseError(f"expected {var!r} after '*'", text, pos)
        exp = 0
        if pos < n and text.startswith(var, pos):
            pos += len(var)
            exp = 1
            pos = skip_ws(pos)
            if pos < n and text[pos] == "^":
                pos = skip_ws(pos + 1)
                braced = pos < n and text[pos] in "{("
                if braced:
                    close = "}" if text[pos] == "{" else ")"
                    pos = skip_ws(pos + 1)
                value, end = read_int(pos)
                if value is None:
                    raise ParseError("expected integer exponent", text, pos)
                exp, pos = value, skip_ws(end)
                if braced:
                    if pos == n or text[pos] != close:
                        raise ParseError(f"expected {close!r}", text, pos)
                    pos += 1
        elif not has_coeff:
            raise ParseError("expected a term", text, pos)
        terms[exp] = terms.get(exp, 0) + sign * coeff
    return LaurentPoly.from_terms(terms)
