"""Exact scalars: arbitrary-precision rationals and prime fields.

Field elements are plain Python objects (``mpq``/``Fraction`` for the
rationals, ``int`` in canonical range for F_p); a :class:`Field` instance
carries the operations.  No floating point anywhere.
"""
from __future__ import annotations

try:
    from gmpy2 import mpq as _rat
except ImportError:  # pragma: no cover - exercised only without gmpy2
    from fractions import Fraction as _rat


class FieldValueError(ValueError):
    pass


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


class Rationals:
    """The field of rational numbers, stored in lowest terms."""

    name = "Q"
    characteristic = 0

    def __init__(self):
        self.zero = _rat(0)
        self.one = _rat(1)

    def from_int(self, n: int):
        return _rat(n)

    def parse(self, s: str):
        try:
            return _rat(str(s).strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise FieldValueError(f"not a rational scalar: {s!r}") from exc

    def to_str(self, x) -> str:
        return str(x)

    def add(self, x, y):
        return x + y

    def sub(self, x, y):
        return x - y

    def mul(self, x, y):
        return x * y

    def neg(self, x):
        return -x

    def inv(self, x):
        if not x:
            raise ZeroDivisionError("inverse of zero")
        return 1 / _rat(x)

    def div(self, x, y):
        return x / y

    def is_zero(self, x) -> bool:
        return not x

    def eq(self, x, y) -> bool:
        return x == y

    def __repr__(self):
        return "QQ"


class PrimeField:
    """F_p with canonical representatives 0..p-1."""

    characteristic: int

    def __init__(self, p: int):
        if not _is_prime(p):
            raise FieldValueError(f"{p} is not prime")
        self.p = p
        self.name = f"F{p}"
        self.characteristic = p
        self.zero = 0
        self.one = 1 % p

    def from_int(self, n: int):
        return n % self.p

    def parse(self, s: str):
        s = str(s).strip()
        if "/" in s:
            num, den = s.split("/", 1)
            return self.div(self.from_int(int(num)), self.from_int(int(den)))
        try:
            return int(s) % self.p
        except ValueError as exc:
            raise FieldValueError(f"not an F_{self.p} scalar: {s!r}") from exc

    def to_str(self, x) -> str:
        return str(x % self.p)

    def add(self, x, y):
        return (x + y) % self.p

    def sub(self, x, y):
        return (x - y) % self.p

    def mul(self, x, y):
        return (x * y) % self.p

    def neg(self, x):
        return (-x) % self.p

    def inv(self, x):
        x %= self.p
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(x, self.p - 2, self.p)

    def div(self, x, y):
        return (x * self.inv(y)) % self.p

    def is_zero(self, x) -> bool:
        return x % self.p == 0

    def eq(self, x, y) -> bool:
        return (x - y) % self.p == 0

    def __repr__(self):
        return f"GF({self.p})"


QQ = Rationals()

_gf_cache: dict[int, PrimeField] = {}


def GF(p: int) -> PrimeField:
    if p not in _gf_cache:
        _gf_cache[p] = PrimeField(p)
    return _gf_cache[p]


def field_from_descriptor(desc) -> Rationals | PrimeField:
    """Decode the JSON field descriptor: "Q" or {"Fp": p}."""
    if desc == "Q":
        return QQ
    if isinstance(desc, dict) and set(desc) == {"Fp"}:
        return GF(int(desc["Fp"]))
    raise FieldValueError(f"unrecognised field descriptor: {desc!r}")


def field_descriptor(field) -> object:
    if isinstance(field, Rationals):
        return "Q"
    return {"Fp": field.p}
