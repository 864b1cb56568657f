"""Ordered abelian groups Z^n and Q^n under the right lexicographic order.

Elements compare by their rightmost differing coordinate, so the last
coordinate is the most significant one.  Fractions lambda/m over Z^n form
the divisible hull and carry the induced order.
"""

from fractions import Fraction
from functools import reduce, total_ordering
from math import gcd
from typing import Iterable, Tuple, Union

from .errors import InputError

Coord = Union[int, Fraction]


def _check_compatible(a: "LexElem", b: "LexElem") -> None:
    if a.rank != b.rank or a.domain != b.domain:
        raise InputError(
            "incompatible elements: %s^%d vs %s^%d"
            % (a.domain, a.rank, b.domain, b.rank)
        )


@total_ordering
class LexElem:
    """An element of Z^n or Q^n, ordered right-lexicographically."""

    __slots__ = ("coords", "domain")

    def __init__(self, coords: Iterable[Coord], domain: str = "Z"):
        if domain not in ("Z", "Q"):
            raise InputError("domain must be 'Z' or 'Q', got %r" % (domain,))
        cs = tuple(coords)
        if domain == "Z":
            for c in cs:
                if isinstance(c, Fraction):
                    if c.denominator != 1:
                        raise InputError("non-integer coordinate %s in Z^n" % (c,))
                elif not isinstance(c, int):
                    raise InputError("bad coordinate %r" % (c,))
            cs = tuple(int(c) for c in cs)
        else:
            cs = tuple(Fraction(c) for c in cs)
        object.__setattr__(self, "coords", cs)
        object.__setattr__(self, "domain", domain)

    def __setattr__(self, name, value):
        raise AttributeError("LexElem is immutable")

    @property
    def rank(self) -> int:
        return len(self.coords)

    @classmethod
    def zero(cls, rank: int, domain: str = "Z") -> "LexElem":
        return cls((0,) * rank, domain)

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def __add__(self, other: "LexElem") -> "LexElem":
        _check_compatible(self, other)
        return LexElem(tuple(a + b for a, b in zip(self.coords, other.coords)), self.domain)

    def __sub__(self, other: "LexElem") -> "LexElem":
        _check_compatible(self, other)
        return LexElem(tuple(a - b for a, b in zip(self.coords, other.coords)), self.domain)

    def __neg__(self) -> "LexElem":
        return LexElem(tuple(-a for a in self.coords), self.domain)

    def __mul__(self, k: int) -> "LexElem":
        if not isinstance(k, int):
            raise InputError("scalar must be an integer, got %r" % (k,))
        return LexElem(tuple(k * a for a in self.coords), self.domain)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, LexElem):
            return NotImplemented
        return (
            self.domain == other.domain
            and self.coords == other.coords
        )

    def __lt__(self, other: "LexElem") -> bool:
        if not isinstance(other, LexElem):
            return NotImplemented
        _check_compatible(self, other)
        return self.coords[::-1] < other.coords[::-1]

    def __hash__(self):
        return hash((self.coords, self.domain))

    def __abs__(self) -> "LexElem":
        return -self if self.coords[::-1] < (0,) * self.rank else self

    def sign(self) -> int:
        rev = self.coords[::-1]
        zero = (0,) * self.rank
        if rev < zero:
            return -1
        return 0 if rev == zero else 1

    def height(self) -> int:
        """Index of the smallest convex subgroup Lambda_i containing this element."""
        for i in range(self.rank, 0, -1):
            if self.coords[i - 1] != 0:
                return i
        return 0

    def render(self) -> str:
        return "(%s)" % ",".join(_render_coord(c) for c in self.coords)

    def __repr__(self):
        return "LexElem(%s, %r)" % (self.render(), self.domain)


def _render_coord(c: Coord) -> str:
    if isinstance(c, Fraction) and c.denominator != 1:
        return "%d/%d" % (c.numerator, c.denominator)
    return "%d" % (c,)


def lex_cmp(a: LexElem, b: LexElem) -> int:
    """Three-way right-lexicographic comparison."""
    _check_compatible(a, b)
    ra, rb = a.coords[::-1], b.coords[::-1]
    if ra < rb:
        return -1
    return 0 if ra == rb else 1


def height(a: LexElem) -> int:
    return a.height()


def in_convex(a: LexElem, i: int) -> bool:
    """Membership of a in the convex subgroup Lambda_i (first i coordinates)."""
    if not 0 <= i <= a.rank:
        raise InputError("convex index %d out of range for rank %d" % (i, a.rank))
    return a.height() <= i


def project_quotient(a: LexElem, i: int) -> LexElem:
    """Image of a in Lambda/Lambda_i, an element of rank n-i."""
    if not 0 <= i <= a.rank:
        raise InputError("convex index %d out of range for rank %d" % (i, a.rank))
    return LexElem(a.coords[i:], a.domain)


def minimal_positive(rank: int, domain: str = "Z") -> LexElem:
    """The least positive element (1,0,...,0) of Z^n; Q^n has none."""
    if domain != "Z":
        raise InputError("Q^n is densely ordered and has no minimal positive element")
    if rank < 1:
        raise InputError("rank must be at least 1")
    return LexElem((1,) + (0,) * (rank - 1), "Z")


@total_ordering
class QLexElem:
    """A fraction lam/m over Z^n or Q^n, with lam/m = mu/k iff k*lam = m*mu."""

    __slots__ = ("num", "den")

    def __init__(self, num: LexElem, den: int = 1):
        if not isinstance(den, int) or den == 0:
            raise InputError("denominator must be a nonzero integer, got %r" % (den,))
        if den < 0:
            num, den = -num, -den
        if num.domain == "Q":
            if den != 1:
                num = LexElem(tuple(c / den for c in num.coords), "Q")
                den = 1
        else:
            g = reduce(gcd, (abs(c) for c in num.coords), den)
            if g > 1:
                num = LexElem(tuple(c // g for c in num.coords), "Z")
                den //= g
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, name, value):
        raise AttributeError("QLexElem is immutable")

    @property
    def rank(self) -> int:
        return self.num.rank

    @property
    def domain(self) -> str:
        return self.num.domain

    @classmethod
    def zero(cls, rank: int, domain: str = "Z") -> "QLexElem":
        return cls(LexElem.zero(rank, domain), 1)

    @classmethod
    def from_lex(cls, e: LexElem) -> "QLexElem":
        return cls(e, 1)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __add__(self, other: "QLexElem") -> "QLexElem":
        other = _coerce_q(other, self)
        return QLexElem(self.num * other.den + other.num * self.den, self.den * other.den)

    def __sub__(self, other: "QLexElem") -> "QLexElem":
        other = _coerce_q(other, self)
        return QLexElem(self.num * other.den - other.num * self.den, self.den * other.den)

    def __neg__(self) -> "QLexElem":
        return QLexElem(-self.num, self.den)

    def __mul__(self, k: int) -> "QLexElem":
        return QLexElem(self.num * k, self.den)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if isinstance(other, LexElem):
            other = QLexElem.from_lex(other)
        if not isinstance(other, QLexElem):
            return NotImplemented
        return self.num * other.den == other.num * self.den

    def __lt__(self, other) -> bool:
        if isinstance(other, LexElem):
            other = QLexElem.from_lex(other)
        if not isinstance(other, QLexElem):
            return NotImplemented
        return self.num * other.den < other.num * self.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __abs__(self) -> "QLexElem":
        return -self if self.num.sign() < 0 else self

    def sign(self) -> int:
        return self.num.sign()

    def as_fraction(self) -> Fraction:
        if self.rank != 1:
            raise InputError("as_fraction needs rank 1, got rank %d" % (self.rank,))
        return Fraction(self.num.coords[0], self.den)

    def render(self) -> str:
        if self.den == 1:
            return self.num.render()
        return "%s/%d" % (self.num.render(), self.den)

    def __repr__(self):
        return "QLexElem(%s)" % (self.render(),)


def _coerce_q(other, like: QLexElem) -> QLexElem:
    if isinstance(other, LexElem):
        return QLexElem.from_lex(other)
    if not isinstance(other, QLexElem):
        raise InputError("expected a group element, got %r" % (other,))
    return other


def qdiv(e: LexElem, m: int) -> QLexElem:
    """e/m in the divisible hull."""
    return QLexElem(e, m)


def qmax(a: QLexElem, b: QLexElem) -> QLexElem:
    return a if a >= b else b


def qmin(a: QLexElem, b: QLexElem) -> QLexElem:
    return a if a <= b else b


def parse_coord(tok: str, domain: str) -> Coord:
    try:
        if "/" in tok:
            if domain == "Z":
                raise InputError("fractional coordinate %r in Z^n" % (tok,))
            p, q = tok.split("/", 1)
            return Fraction(int(p), int(q))
        v = int(tok)
        return Fraction(v) if domain == "Q" else v
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError("bad coordinate %r" % (tok,)) from exc


def parse_lex(text: str, rank: int = None, domain: str = "Z") -> LexElem:
    """Parse '(a_1,...,a_n)', or a bare scalar for rank 1."""
    text = text.strip()
    if text.startswith("("):
        if not text.endswith(")"):
            raise InputError("unbalanced parentheses in %r" % (text,))
        body = text[1:-1].strip()
        toks = [t.strip() for t in body.split(",")] if body else []
    else:
        toks = [text]
    e = LexElem(tuple(parse_coord(t, domain) for t in toks), domain)
    if rank is not None and e.rank != rank:
        raise InputError("expected rank %d, got %r" % (rank, text))
    return e


def parse_qlex(text: str, rank: int = None, domain: str = "Z") -> QLexElem:
    """Parse '(...)/m' or any LexElem form."""
    text = text.strip()
    if text.startswith("(") and ")/" in text:
        body, den = text.rsplit("/", 1)
        try:
            m = int(den)
        except ValueError as exc:
            raise InputError("bad denominator in %r" % (text,)) from exc
        return QLexElem(parse_lex(body, rank, domain), m)
    if not text.startswith("(") and "/" in text and (rank in (None, 1)):
        p, q = text.split("/", 1)
        try:
            return QLexElem(LexElem((int(p),), "Z") if domain == "Z" else LexElem((Fraction(int(p)),), "Q"), int(q))
        except ValueError as exc:
            raise InputError("bad rational %r" % (text,)) from exc
    return QLexElem.from_lex(parse_lex(text, rank, domain))
