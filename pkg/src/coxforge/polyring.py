"""Sparse multivariate polynomials over QQ with multigraded bookkeeping.

Polynomials are immutable.  Terms are stored as a tuple of
``(exponent_tuple, coefficient)`` pairs sorted strictly descending under the
ring's monomial order.  Coefficients are exact: Python ``int`` when integral,
``fractions.Fraction`` otherwise.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import IntEnum
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence, Union

Coeff = Union[int, Fraction]
Exponents = tuple  # tuple[int, ...]

MAX_EXPONENT = 2**31 - 1

_VAR_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


class RingMismatchError(ValueError):
    pass


class ParseError(ValueError):
    pass


class UnknownVariableError(ParseError):
    pass


class InhomogeneousError(ValueError):
    """Raised by :func:`multidegree`; ``witnesses`` holds two disagreeing terms."""

    def __init__(self, message: str, witnesses: tuple = ()):
        super().__init__(message)
        self.witnesses = witnesses


def normalize_coeff(c) -> Coeff:
    if isinstance(c, int):
        return c
    if isinstance(c, Fraction):
        return c.numerator if c.denominator == 1 else c
    if isinstance(c, float):
        raise TypeError("floating-point coefficients are not supported")
    c = Fraction(c)
    return c.numerator if c.denominator == 1 else c


def exact_div(a: Coeff, b: Coeff) -> Coeff:
    if type(a) is int and type(b) is int and a % b == 0:
        return a // b
    q = Fraction(a) / b
    return q.numerator if q.denominator == 1 else q


# --- monomial orders -------------------------------------------------------


class Cmp(IntEnum):
    LT = -1
    EQ = 0
    GT = 1


def _grevlex_key(exp) -> tuple:
    return (sum(exp),) + tuple(-e for e in reversed(exp))


@dataclass(frozen=True)
class MonomialOrder:
    """Lex, GrevLex, or a two-block GrevLex elimination order.

    ``Block(split=s)`` compares the first ``s`` variables by GrevLex first and
    breaks ties with GrevLex on the remaining ones, so any monomial involving
    the first block beats every monomial free of it.
    """

    kind: str = "grevlex"
    split: int = 0

    def __post_init__(self):
        if self.kind not in ("lex", "grevlex", "block"):
            raise ValueError(f"unknown monomial order {self.kind!r}")
        if self.kind == "block" and self.split < 0:
            raise ValueError("block split must be non-negative")

    @classmethod
    def lex(cls) -> "MonomialOrder":
        return cls("lex")

    @classmethod
    def grevlex(cls) -> "MonomialOrder":
        return cls("grevlex")

    @classmethod
    def block(cls, split: int) -> "MonomialOrder":
        return cls("block", split)

    def key_function(self) -> Callable[[tuple], tuple]:
        """Return ``key`` with ``key(a) < key(b)`` iff ``a < b`` in this order.

        Every key is the image of the exponent vector under an integer linear
        map, so ``key(a + b) == key(a) + key(b)`` componentwise.
        """
        if self.kind == "lex":
            return tuple
        if self.kind == "grevlex":
            return _grevlex_key
        s = self.split

        def block_key(exp):
            return _grevlex_key(exp[:s]) + _grevlex_key(exp[s:])

        return block_key

    def __str__(self):
        return f"Block({self.split})" if self.kind == "block" else self.kind


def order_compare(m1: Sequence[int], m2: Sequence[int], order: MonomialOrder) -> Cmp:
    if len(m1) != len(m2):
        raise ValueError(f"exponent length mismatch: {len(m1)} vs {len(m2)}")
    key = order.key_function()
    k1, k2 = key(tuple(m1)), key(tuple(m2))
    if k1 == k2:
        return Cmp.EQ
    return Cmp.GT if k1 > k2 else Cmp.LT


# --- rings -------------------------------------------------------------------


@dataclass(frozen=True)
class GradedRing:
    """QQ[var_names] with a Z^k grading given column-wise by ``grading``."""

    var_names: tuple
    grading: tuple = ()
    order: MonomialOrder = MonomialOrder()
    _index: dict = field(default=None, init=False, repr=False, compare=False, hash=False)
    _key: Callable = field(default=None, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        names = tuple(self.var_names)
        object.__setattr__(self, "var_names", names)
        if len(set(names)) != len(names):
            raise ValueError("variable names must be unique")
        for name in names:
            if not _VAR_RE.match(name):
                raise ValueError(f"invalid variable name {name!r}")
        grading = tuple(tuple(int(x) for x in row) for row in self.grading)
        for row in grading:
            if len(row) != len(names):
                raise ValueError("grading column count must equal the number of variables")
        object.__setattr__(self, "grading", grading)
        object.__setattr__(self, "_index", {n: i for i, n in enumerate(names)})
        object.__setattr__(self, "_key", self.order.key_function())

    @classmethod
    def from_degrees(cls, var_names, degrees: Sequence[Sequence[int]], order=None) -> "GradedRing":
        """Build from one degree vector per variable (rows of the transpose)."""
        degrees = [tuple(d) for d in degrees]
        if len(degrees) != len(var_names):
            raise ValueError("need one degree per variable")
        rank = len(degrees[0]) if degrees else 0
        grading = tuple(tuple(d[k] for d in degrees) for k in range(rank))
        return cls(tuple(var_names), grading, order or MonomialOrder())

    @property
    def nvars(self) -> int:
        return len(self.var_names)

    @property
    def rank(self) -> int:
        return len(self.grading)

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise UnknownVariableError(f"unknown variable {name!r}") from None

    def __contains__(self, name) -> bool:
        return name in self._index

    def degree_of(self, var: Union[int, str]) -> tuple:
        i = self.index(var) if isinstance(var, str) else var
        return tuple(row[i] for row in self.grading)

    def degrees(self) -> list:
        return [self.degree_of(i) for i in range(self.nvars)]

    def with_order(self, order: MonomialOrder) -> "GradedRing":
        return GradedRing(self.var_names, self.grading, order)

    def zero(self) -> "Polynomial":
        return Polynomial(self, ())

    def one(self) -> "Polynomial":
        return self.const(1)

    def const(self, c) -> "Polynomial":
        c = normalize_coeff(c)
        if c == 0:
            return self.zero()
        return Polynomial(self, (((0,) * self.nvars, c),))

    def var(self, name: Union[int, str]) -> "Polynomial":
        i = self.index(name) if isinstance(name, str) else name
        exp = [0] * self.nvars
        exp[i] = 1
        return Polynomial(self, ((tuple(exp), 1),))

    def gens(self) -> list:
        return [self.var(i) for i in range(self.nvars)]

    def from_dict(self, terms: Mapping[tuple, Coeff]) -> "Polynomial":
        return Polynomial.from_dict(self, terms)

    def parse(self, text: str) -> "Polynomial":
        return poly_parse(text, self)

    def monomial(self, exp) -> "Polynomial":
        return Polynomial(self, ((tuple(exp), 1),))


def _same_ring(a: GradedRing, b: GradedRing) -> None:
    if a is not b and a != b:
        raise RingMismatchError("polynomials live in different rings")


# --- polynomials -------------------------------------------------------------


class Polynomial:
    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: GradedRing, terms: tuple):
        # Callers guarantee canonical form; use from_dict otherwise.
        self.ring = ring
        self.terms = terms
        self._hash = None

    @classmethod
    def from_dict(cls, ring: GradedRing, terms: Mapping[tuple, Coeff]) -> "Polynomial":
        key = ring._key
        items = []
        for exp, c in terms.items():
            if c:
                exp = tuple(exp)
                if len(exp) != ring.nvars:
                    raise ValueError("exponent vector length does not match ring")
                for e in exp:
                    if e < 0:
                        raise ValueError("negative exponent")
                    if e > MAX_EXPONENT:
                        raise OverflowError("exponent overflow")
                items.append((exp, normalize_coeff(c)))
        items.sort(key=lambda t: key(t[0]), reverse=True)
        return cls(ring, tuple(items))

    def normalized(self) -> "Polynomial":
        return Polynomial.from_dict(self.ring, dict(self.terms))

    # basic accessors

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def lm(self) -> tuple:
        if not self.terms:
            raise ValueError("zero polynomial has no leading monomial")
        return self.terms[0][0]

    def lc(self) -> Coeff:
        if not self.terms:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.terms[0][1]

    def to_dict(self) -> dict:
        return dict(self.terms)

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(e) for e, _ in self.terms)

    def support(self) -> set:
        """Indices of variables occurring in the polynomial."""
        out = set()
        for exp, _ in self.terms:
            out.update(i for i, e in enumerate(exp) if e)
        return out

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and not any(self.terms[0][0]))

    def is_homogeneous_standard(self) -> bool:
        return len({sum(e) for e, _ in self.terms}) <= 1

    def monic(self) -> "Polynomial":
        if not self.terms:
            return self
        lc = self.terms[0][1]
        if lc == 1:
            return self
        return Polynomial(self.ring, tuple((e, exact_div(c, lc)) for e, c in self.terms))

    # arithmetic

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            _same_ring(self.ring, other.ring)
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        acc = dict(self.terms)
        for e, c in other.terms:
            v = acc.get(e, 0) + c
            if v:
                acc[e] = v
            else:
                acc.pop(e, None)
        return Polynomial.from_dict(self.ring, acc)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.ring, tuple((e, -c) for e, c in self.terms))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c0 = normalize_coeff(other)
            if c0 == 0:
                return self.ring.zero()
            return Polynomial(self.ring, tuple((e, normalize_coeff(c * c0)) for e, c in self.terms))
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return poly_mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)) and other != 0:
            return self * (1 / Fraction(other))
        return NotImplemented

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = self.ring.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.ring == other.ring and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.terms == self.ring.const(other).terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring.var_names, self.terms))
        return self._hash

    # substitution and ring changes

    def to_ring(self, ring: GradedRing, rename: Mapping[str, str] | None = None) -> "Polynomial":
        """Re-express in ``ring`` by matching variable names (after ``rename``)."""
        rename = rename or {}
        idx = []
        for name in self.ring.var_names:
            idx.append(ring.index(rename.get(name, name)) if name in rename or name in ring else None)
        acc = {}
        for exp, c in self.terms:
            new = [0] * ring.nvars
            for i, e in enumerate(exp):
                if e:
                    if idx[i] is None:
                        raise UnknownVariableError(
                            f"variable {self.ring.var_names[i]!r} not in target ring")
                    new[idx[i]] += e
            new = tuple(new)
            v = acc.get(new, 0) + c
            if v:
                acc[new] = v
            else:
                acc.pop(new, None)
        return Polynomial.from_dict(ring, acc)

    def substitute(self, images: Mapping[Union[int, str], "Polynomial"], target: GradedRing | None = None) -> "Polynomial":
        """Substitute polynomials for variables.

        With ``target`` given, every variable must have an image in ``target``
        (a full ring map); otherwise unmapped variables stay put.
        """
        ring = target or self.ring
        imgs = []
        for i, name in enumerate(self.ring.var_names):
            img = images.get(name, images.get(i))
            if img is None:
                if target is not None:
                    raise ValueError(f"no image for variable {name!r}")
                img = self.ring.var(i)
            imgs.append(img)
        result = ring.zero()
        powers: dict = {}
        for exp, c in self.terms:
            term = ring.const(c)
            for i, e in enumerate(exp):
                if e:
                    key = (i, e)
                    if key not in powers:
                        powers[key] = imgs[i] ** e
                    term = term * powers[key]
            result = result + term
        return result

    def evaluate(self, point: Mapping[str, Coeff]) -> Coeff:
        total = 0
        vals = [point[n] for n in self.ring.var_names]
        for exp, c in self.terms:
            t = c
            for v, e in zip(vals, exp):
                if e:
                    t = t * v**e
            total += t
        return normalize_coeff(total)

    # printing

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"Polynomial({format_poly(self)!r})"


def poly_mul(a: Polynomial, b: Polynomial) -> Polynomial:
    _same_ring(a.ring, b.ring)
    if not a.terms or not b.terms:
        return a.ring.zero()
    acc: dict = {}
    get = acc.get
    for ea, ca in a.terms:
        for eb, cb in b.terms:
            e = tuple([x + y for x, y in zip(ea, eb)])
            acc[e] = get(e, 0) + ca * cb
    return Polynomial.from_dict(a.ring, acc)


def multidegree(p: Polynomial) -> tuple:
    """Common multidegree of all terms of ``p``.

    Raises :class:`InhomogeneousError` carrying two witness terms when the
    terms disagree, and ``ValueError`` for the zero polynomial.
    """
    if not p.terms:
        raise ValueError("the zero polynomial has no multidegree")
    grading = p.ring.grading
    first = None
    first_term = None
    for exp, c in p.terms:
        d = tuple(sum(row[i] * e for i, e in enumerate(exp) if e) for row in grading)
        if first is None:
            first, first_term = d, (exp, c)
        elif d != first:
            raise InhomogeneousError(
                f"not homogeneous: {format_term(p.ring, *first_term)} has degree {first}, "
                f"{format_term(p.ring, exp, c)} has degree {d}",
                witnesses=(first_term, (exp, c)),
            )
    return first


def is_homogeneous(p: Polynomial) -> bool:
    if not p.terms:
        return True
    try:
        multidegree(p)
    except InhomogeneousError:
        return False
    return True


# --- text format -------------------------------------------------------------


def format_term(ring: GradedRing, exp, c) -> str:
    parts = [f"{ring.var_names[i]}^{e}" if e > 1 else ring.var_names[i]
             for i, e in enumerate(exp) if e]
    c = abs(c)
    if not parts:
        return str(c)
    if c != 1:
        parts.insert(0, str(c))
    return "*".join(parts)


def format_poly(p: Polynomial) -> str:
    if not p.terms:
        return "0"
    out = []
    for k, (exp, c) in enumerate(p.terms):
        body = format_term(p.ring, exp, c)
        if k == 0:
            out.append(("-" if c < 0 else "") + body)
        else:
            out.append((" - " if c < 0 else " + ") + body)
    return "".join(out)


_TOKEN_RE = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\*\*|[-+*/^()]))")


def _tokenize(text: str) -> list:
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character at position {pos}: {text[pos:pos + 10]!r}")
        num, name, op = m.groups()
        if num is not None:
            tokens.append(("num", int(num)))
        elif name is not None:
            tokens.append(("name", name))
        else:
            tokens.append(("op", "^" if op == "**" else op))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, text: str, ring: GradedRing):
        self.tokens = _tokenize(text)
        self.pos = 0
        self.ring = ring

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else (None, None)

    def take(self):
        tok = self.peek()
        self.pos += 1
        return tok

    def expect(self, op):
        tok = self.take()
        if tok != ("op", op):
            raise ParseError(f"expected {op!r}, got {tok[1]!r}")

    def parse(self) -> Polynomial:
        if not self.tokens:
            raise ParseError("empty expression")
        p = self.expr()
        if self.pos != len(self.tokens):
            raise ParseError(f"trailing input near {self.peek()[1]!r}")
        return p

    def expr(self):
        kind, val = self.peek()
        if (kind, val) in (("op", "+"), ("op", "-")):
            self.take()
            p = self.term()
            if val == "-":
                p = -p
        else:
            p = self.term()
        while self.peek() in (("op", "+"), ("op", "-")):
            _, op = self.take()
            q = self.term()
            p = p + q if op == "+" else p - q
        return p

    def term(self):
        p = self.power()
        while self.peek() in (("op", "*"), ("op", "/")):
            _, op = self.take()
            if op == "*":
                p = p * self.power()
            else:
                q = self.power()
                if not q.is_constant() or q.is_zero():
                    raise ParseError("division only by nonzero constants")
                p = p * (Fraction(1) / Fraction(q.terms[0][1]))
        return p

    def power(self):
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            kind, val = self.take()
            if kind == "op" and val == "-":
                raise ParseError("negative exponents are not allowed")
            if kind == "op" and val == "(":
                kind, val = self.take()
                if kind == "op" and val == "-":
                    raise ParseError("negative exponents are not allowed")
                self.expect(")")
            if kind != "num":
                raise ParseError("exponent must be a non-negative integer literal")
            if val > MAX_EXPONENT:
                raise OverflowError("exponent overflow")
            base = base ** val
        return base

    def atom(self):
        kind, val = self.take()
        if kind == "num":
            return self.ring.const(val)
        if kind == "name":
            return self.ring.var(self.ring.index(val))
        if (kind, val) == ("op", "("):
            p = self.expr()
            self.expect(")")
            return p
        if (kind, val) == ("op", "-"):
            return -self.power()
        raise ParseError(f"unexpected token {val!r}")


def poly_parse(text: str, ring: GradedRing) -> Polynomial:
    return _Parser(text, ring).parse()


def polys_from_strings(ring: GradedRing, texts: Iterable[str]) -> list:
    return [poly_parse(t, ring) for t in texts]
