"""Exact arithmetic in GF(p) and its algebraic extensions.

Every element is carried as a plain ``int``.  For a prime field the int is
the residue in ``0..p-1``.  For an extension of degree ``t`` over a base
field of order ``Q`` the int is the base-``Q`` number whose digits are the
coefficients ``c_0 + c_1 x + ... + c_{t-1} x^{t-1}`` (``c_0`` least
significant), each digit itself an encoded base element.  With this encoding
a constant polynomial has the same int as the base element it embeds, so
lifting into an extension never rewrites a value.

:class:`FieldSpec` holds the arithmetic; :class:`FieldElement` is a thin
value wrapper for user-facing code.  Matrix code works on raw ints.
"""

from __future__ import annotations

import functools
import re
from dataclasses import dataclass
from typing import Iterator, Sequence

from sympy import factorint, isprime

__all__ = [
    "FieldSpec",
    "FieldElement",
    "FieldMismatchError",
    "ReducibleModulusError",
    "make_prime_field",
    "make_extension_field",
    "lift_element",
    "field_arith",
    "parse_field",
    "format_field",
    "is_irreducible",
]

# Above this order the log/antilog tables are not built.
TABLE_LIMIT = 1 << 16


class FieldMismatchError(ValueError):
    """Operands live in different fields."""


class ReducibleModulusError(ValueError):
    """A proposed modulus polynomial factors over its base field.

    ``factor`` holds a nontrivial monic factor (coefficients low degree
    first, encoded over the base).
    """

    def __init__(self, modulus, factor):
        self.modulus = tuple(modulus)
        self.factor = tuple(factor)
        super().__init__(
            f"modulus {list(self.modulus)} is reducible; factor {list(self.factor)}"
        )


@dataclass(frozen=True)
class FieldSpec:
    """A finite field, either GF(p) or a degree-``degree`` extension of ``base``.

    Build instances with :func:`make_prime_field` and
    :func:`make_extension_field`; the constructor does no validation.
    """

    p: int
    base: "FieldSpec | None" = None
    modulus: "tuple[int, ...] | None" = None

    # ----------------------------------------------------------------- shape
    @property
    def is_prime(self) -> bool:
        return self.base is None

    @property
    def degree(self) -> int:
        """Extension degree over ``base`` (1 for a prime field)."""
        return 1 if self.modulus is None else len(self.modulus) - 1

    @functools.cached_property
    def order(self) -> int:
        if self.base is None:
            return self.p
        return self.base.order ** self.degree

    @property
    def char(self) -> int:
        return self.p

    @property
    def depth(self) -> int:
        return 0 if self.base is None else 1 + self.base.depth

    def extends(self, other: "FieldSpec") -> bool:
        """True when ``other`` is the immediate base of this field."""
        return self.base is not None and self.base == other

    def __repr__(self) -> str:
        return format_field(self)

    def __call__(self, value) -> "FieldElement":
        return FieldElement(self, self.coerce(value))

    # -------------------------------------------------------------- encoding
    def coerce(self, value) -> int:
        if isinstance(value, FieldElement):
            if value.field != self:
                raise FieldMismatchError(f"{value.field} element used in {self}")
            return value.value
        if isinstance(value, (list, tuple)):
            return self.from_coeffs(value)
        v = int(value)
        if self.base is None:
            return v % self.p
        if not 0 <= v < self.order:
            raise ValueError(f"{v} is not an element encoding of {self}")
        return v

    def coeffs(self, a: int) -> list[int]:
        """Coefficient vector of ``a`` over the base (length ``degree``)."""
        if self.base is None:
            return [a]
        Q = self.base.order
        out = []
        for _ in range(self.degree):
            a, r = divmod(a, Q)
            out.append(r)
        return out

    def from_coeffs(self, coeffs: Sequence[int]) -> int:
        if self.base is None:
            if len(coeffs) != 1:
                raise ValueError("prime field element takes one coefficient")
            return int(coeffs[0]) % self.p
        if len(coeffs) > self.degree:
            raise ValueError(f"too many coefficients for {self}")
        Q = self.base.order
        v = 0
        for c in reversed(list(coeffs)):
            v = v * Q + self.base.coerce(c)
        return v

    def flat_coeffs(self, a: int) -> list[int]:
        """Coordinates of ``a`` over the prime subfield, lowest first."""
        if self.base is None:
            return [a]
        out = []
        for c in self.coeffs(a):
            out.extend(self.base.flat_coeffs(c))
        return out

    def elements(self) -> range:
        return range(self.order)

    # ------------------------------------------------------------ arithmetic
    def add(self, a: int, b: int) -> int:
        if self.base is None:
            return (a + b) % self.p
        if self.p == 2:
            return a ^ b
        return self._digitwise(a, b, self.base.add)

    def sub(self, a: int, b: int) -> int:
        if self.base is None:
            return (a - b) % self.p
        if self.p == 2:
            return a ^ b
        return self._digitwise(a, b, self.base.sub)

    def neg(self, a: int) -> int:
        if self.base is None:
            return (-a) % self.p
        if self.p == 2:
            return a
        return self.from_coeffs([self.base.neg(c) for c in self.coeffs(a)])

    def mul(self, a: int, b: int) -> int:
        if self.base is None:
            return a * b % self.p
        if a == 0 or b == 0:
            return 0
        tables = self._tables
        if tables is not None:
            exp, log = tables
            return exp[log[a] + log[b]]
        if self._binary_poly is not None:
            return _clmul_mod(a, b, self._binary_poly, self.degree)
        return self.mul_schoolbook(a, b)

    def mul_schoolbook(self, a: int, b: int) -> int:
        """Reference product: polynomial multiply then reduce by the modulus."""
        if self.base is None:
            return a * b % self.p
        B = self.base
        prod = _poly_mul(self.coeffs(a), self.coeffs(b), B)
        return self.from_coeffs(_poly_rem_monic(prod, self.modulus, B))

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError(f"inverse of zero in {self}")
        if self.base is None:
            return pow(a, -1, self.p)
        tables = self._tables
        if tables is not None:
            exp, log = tables
            return exp[(self.order - 1 - log[a]) % (self.order - 1)]
        return self.pow(a, self.order - 2)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            a, e = self.inv(a), -e
        if self.base is None:
            return pow(a, e, self.p)
        if a == 0:
            return 1 if e == 0 else 0
        tables = self._tables
        if tables is not None:
            exp, log = tables
            return exp[log[a] * e % (self.order - 1)]
        result, sq = 1, a
        while e:
            if e & 1:
                result = self.mul(result, sq)
            sq = self.mul(sq, sq)
            e >>= 1
        return result

    def _digitwise(self, a: int, b: int, op) -> int:
        return self.from_coeffs([op(x, y) for x, y in zip(self.coeffs(a), self.coeffs(b))])

    # ----------------------------------------------------------- fast paths
    @functools.cached_property
    def _binary_poly(self) -> "int | None":
        # GF(2^t) over GF(2): modulus packed as a bit mask for carry-less mult.
        if self.base is not None and self.base.base is None and self.p == 2:
            return sum(c << i for i, c in enumerate(self.modulus))
        return None

    @functools.cached_property
    def _tables(self):
        if self.base is None or self.order > TABLE_LIMIT:
            return None
        g = self.primitive_element()
        size = self.order - 1
        exp = [0] * (2 * size)
        x = 1
        for i in range(size):
            exp[i] = x
            x = self._mul_slow(x, g)
        exp[size:] = exp[:size]
        log = [0] * self.order
        for i in range(size):
            log[exp[i]] = i
        return exp, log

    def _mul_slow(self, a: int, b: int) -> int:
        if self._binary_poly is not None:
            return _clmul_mod(a, b, self._binary_poly, self.degree) if a and b else 0
        return self.mul_schoolbook(a, b)

    def primitive_element(self) -> int:
        """Smallest encoding that generates the multiplicative group."""
        size = self.order - 1
        if size == 1:
            return 1
        cofactors = [size // r for r in factorint(size)]
        for g in range(2, self.order):
            if all(self._pow_slow(g, c) != 1 for c in cofactors):
                return g
        raise AssertionError("no generator found")  # pragma: no cover

    def _pow_slow(self, a: int, e: int) -> int:
        result, sq = 1, a
        while e:
            if e & 1:
                result = self._mul_slow(result, sq)
            sq = self._mul_slow(sq, sq)
            e >>= 1
        return result

    # --------------------------------------------------------------- random
    def random(self, rng) -> int:
        """Uniform element drawn from a :class:`numpy.random.Generator`."""
        return int(rng.integers(self.order))

    def random_nonzero(self, rng) -> int:
        return 1 + int(rng.integers(self.order - 1))


@dataclass(frozen=True, eq=False)
class FieldElement:
    """Value-typed field element: a :class:`FieldSpec` plus its int encoding."""

    field: FieldSpec
    value: int = 0

    def _other(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise FieldMismatchError(f"{self.field} vs {other.field}")
            return other.value
        return self.field.coerce(other)

    def __add__(self, other):
        return FieldElement(self.field, self.field.add(self.value, self._other(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return FieldElement(self.field, self.field.sub(self.value, self._other(other)))

    def __rsub__(self, other):
        return FieldElement(self.field, self.field.sub(self._other(other), self.value))

    def __mul__(self, other):
        return FieldElement(self.field, self.field.mul(self.value, self._other(other)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return FieldElement(self.field, self.field.div(self.value, self._other(other)))

    def __rtruediv__(self, other):
        return FieldElement(self.field, self.field.div(self._other(other), self.value))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.value))

    def __pow__(self, e: int):
        return FieldElement(self.field, self.field.pow(self.value, e))

    def inverse(self) -> "FieldElement":
        return FieldElement(self.field, self.field.inv(self.value))

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.field == other.field and self.value == other.value
        if isinstance(other, int):
            return self.value == self.field.coerce(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.field, self.value))

    def __int__(self):
        return self.value

    def __bool__(self):
        return self.value != 0

    @property
    def coeffs(self) -> list[int]:
        return self.field.coeffs(self.value)

    def __repr__(self):
        return f"{format_field(self.field)}({self.value})"


def field_arith(a: FieldElement, b: "FieldElement | int | None", op: str) -> FieldElement:
    """Dispatch one of ``add, sub, mul, div, inv, pow`` on field elements.

    For ``inv`` the second operand is ignored; for ``pow`` it is an integer
    exponent.
    """
    if op == "inv":
        return a.inverse()
    if op == "pow":
        return a ** int(b)
    if isinstance(b, FieldElement) and b.field != a.field:
        raise FieldMismatchError(f"{a.field} vs {b.field}")
    try:
        return {"add": a.__add__, "sub": a.__sub__, "mul": a.__mul__, "div": a.__truediv__}[op](b)
    except KeyError:
        raise ValueError(f"unknown field operation {op!r}") from None


# ---------------------------------------------------------------------------
# polynomials over a FieldSpec, coefficient lists low degree first


def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mul(a: Sequence[int], b: Sequence[int], F: FieldSpec) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            if y:
                out[i + j] = F.add(out[i + j], F.mul(x, y))
    return _trim(out)


def _poly_divmod(a: Sequence[int], b: Sequence[int], F: FieldSpec):
    a = _trim(list(a))
    b = _trim(list(b))
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    lead_inv = F.inv(b[-1])
    q = [0] * max(len(a) - len(b) + 1, 0)
    while len(a) >= len(b):
        shift = len(a) - len(b)
        c = F.mul(a[-1], lead_inv)
        q[shift] = c
        for i, y in enumerate(b):
            a[i + shift] = F.sub(a[i + shift], F.mul(c, y))
        _trim(a)
    return _trim(q), a


def _poly_rem_monic(a: list[int], mod: Sequence[int], F: FieldSpec) -> list[int]:
    t = len(mod) - 1
    a = list(a)
    for k in range(len(a) - 1, t - 1, -1):
        c = a[k]
        if c:
            for i in range(t):
                if mod[i]:
                    a[k - t + i] = F.sub(a[k - t + i], F.mul(c, mod[i]))
            a[k] = 0
    return a[:t] + [0] * (t - len(a[:t]))


def _poly_gcd(a, b, F: FieldSpec) -> list[int]:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _poly_divmod(a, b, F)[1]
    if a:
        inv = F.inv(a[-1])
        a = [F.mul(c, inv) for c in a]
    return a


def _poly_powmod(base: list[int], e: int, mod: Sequence[int], F: FieldSpec) -> list[int]:
    result = [1]
    sq = _poly_divmod(base, mod, F)[1]
    while e:
        if e & 1:
            result = _poly_divmod(_poly_mul(result, sq, F), mod, F)[1]
        sq = _poly_divmod(_poly_mul(sq, sq, F), mod, F)[1]
        e >>= 1
    return result


def _clmul_mod(a: int, b: int, mod: int, t: int) -> int:
    prod = 0
    while b:
        if b & 1:
            prod ^= a
        b >>= 1
        a <<= 1
    for k in range(prod.bit_length() - 1, t - 1, -1):
        if prod >> k & 1:
            prod ^= mod << (k - t)
    return prod


def _irreducible_witness(modulus: Sequence[int], base: FieldSpec) -> "list[int] | None":
    """Return a nontrivial monic factor, or None if ``modulus`` is irreducible.

    Any reducible polynomial of degree t has an irreducible factor of degree
    d <= t/2, which divides x^(Q^d) - x; the gcd with that exposes it.
    """
    t = len(modulus) - 1
    if t == 1:
        return None
    Q = base.order
    xpow = [0, 1]
    for d in range(1, t // 2 + 1):
        xpow = _poly_powmod(xpow, Q, modulus, base)
        diff = list(xpow) + [0] * max(0, 2 - len(xpow))
        diff[1] = base.sub(diff[1], 1)
        g = _poly_gcd(modulus, diff, base)
        if len(g) > 1:
            return g
    return None


def is_irreducible(modulus: Sequence[int], base: FieldSpec) -> bool:
    return _irreducible_witness(modulus, base) is None


# ---------------------------------------------------------------------------
# constructors


@functools.lru_cache(maxsize=None)
def make_prime_field(p: int) -> FieldSpec:
    """GF(p).  Raises ``ValueError`` when ``p`` is not prime."""
    p = int(p)
    if p < 2 or not isprime(p):
        raise ValueError(f"{p} is not prime")
    return FieldSpec(p)


def _smallest_irreducible(base: FieldSpec, t: int) -> tuple[int, ...]:
    Q = base.order
    for code in range(Q**t):
        coeffs = []
        c = code
        for _ in range(t):
            c, r = divmod(c, Q)
            coeffs.append(r)
        if t > 1 and coeffs[0] == 0:
            continue  # divisible by x
        mod = coeffs + [1]
        if is_irreducible(mod, base):
            return tuple(mod)
    raise AssertionError("no irreducible polynomial found")  # pragma: no cover


@functools.lru_cache(maxsize=None)
def _extension(base: FieldSpec, t: int, modulus: "tuple[int, ...] | None") -> FieldSpec:
    if modulus is None:
        modulus = _smallest_irreducible(base, t)
    else:
        if len(modulus) != t + 1:
            raise ValueError(f"modulus must have degree {t}")
        if modulus[-1] != 1:
            raise ValueError("modulus must be monic")
        witness = _irreducible_witness(modulus, base)
        if witness is not None:
            raise ReducibleModulusError(modulus, witness)
    return FieldSpec(base.p, base, tuple(modulus))


def make_extension_field(base: FieldSpec, t: int, modulus: "Sequence[int] | None" = None) -> FieldSpec:
    """GF(Q^t) built over ``base`` (order Q).

    Without ``modulus`` the smallest monic irreducible of degree ``t`` is
    used, ordering candidates by their encoding (highest coefficient most
    significant).  An explicit modulus is checked for irreducibility and a
    :class:`ReducibleModulusError` carrying a factor is raised otherwise.
    """
    if t < 1:
        raise ValueError("extension degree must be >= 1")
    mod = None if modulus is None else tuple(base.coerce(c) for c in modulus)
    return _extension(base, int(t), mod)


def lift_element(x: FieldElement, target: FieldSpec) -> FieldElement:
    """Embed ``x`` as a constant polynomial of ``target``."""
    if not target.extends(x.field):
        raise FieldMismatchError(f"{format_field(target)} is not an extension of {format_field(x.field)}")
    return FieldElement(target, x.value)


# ---------------------------------------------------------------------------
# literal syntax:  GF(p) | GF(p^t) | GF(p^t; modulus=[c0,c1,...,1])

_LITERAL = re.compile(
    r"^\s*GF\(\s*(\d+)\s*(?:\^\s*(\d+))?\s*(?:;\s*modulus\s*=\s*\[([^\]]*)\])?\s*\)\s*$"
)


def parse_field(text: str) -> FieldSpec:
    m = _LITERAL.match(text)
    if not m:
        raise ValueError(f"bad field literal {text!r}")
    p, t, mod = int(m.group(1)), m.group(2), m.group(3)
    if t is None and mod is None and not isprime(p):
        fac = factorint(p)
        if len(fac) != 1:
            raise ValueError(f"{p} is not a prime power")
        (p, t), = fac.items()
    base = make_prime_field(p)
    t = int(t) if t is not None else 1
    if mod is None:
        return base if t == 1 else make_extension_field(base, t)
    coeffs = [int(c) for c in mod.split(",") if c.strip()]
    return make_extension_field(base, t, coeffs)


def format_field(F: FieldSpec) -> str:
    if F.base is None:
        return f"GF({F.p})"
    if F.base.base is None:
        return f"GF({F.p}^{F.degree}; modulus={list(F.modulus)})"
    return f"GF(({format_field(F.base)})^{F.degree}; modulus={list(F.modulus)})"


def iter_elements(F: FieldSpec) -> Iterator[FieldElement]:
    for v in F.elements():
        yield FieldElement(F, v)
