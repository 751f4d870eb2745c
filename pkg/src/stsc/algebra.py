"""Exact arithmetic in the Gaussian integers and in Z[i][theta].

``theta`` is the golden ratio (1 + sqrt 5) / 2, so theta**2 = theta + 1.
Elements of Z[i][theta] are stored in the basis (1, theta); the Galois
conjugation ``tau`` sends theta to 1 - theta.  Python ints are unbounded,
so nothing here can overflow.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

SQRT5 = math.sqrt(5.0)
THETA = (1.0 + SQRT5) / 2.0
THETA_BAR = (1.0 - SQRT5) / 2.0


@dataclass(frozen=True, slots=True)
class GaussInt:
    """Gaussian integer ``re + im*i``."""

    re: int = 0
    im: int = 0

    def __post_init__(self):
        if not (isinstance(self.re, int) and isinstance(self.im, int)):
            raise TypeError("GaussInt coordinates must be ints")

    @classmethod
    def coerce(cls, value) -> "GaussInt":
        if isinstance(value, GaussInt):
            return value
        if isinstance(value, int):
            return cls(value, 0)
        if isinstance(value, complex):
            re, im = value.real, value.imag
            if re != int(re) or im != int(im):
                raise ValueError(f"{value!r} is not a Gaussian integer")
            return cls(int(re), int(im))
        raise TypeError(f"cannot convert {type(value).__name__} to GaussInt")

    def __add__(self, other):
        other = GaussInt.coerce(other)
        return GaussInt(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussInt(-self.re, -self.im)

    def __sub__(self, other):
        return self + (-GaussInt.coerce(other))

    def __rsub__(self, other):
        return GaussInt.coerce(other) - self

    def __mul__(self, other):
        other = GaussInt.coerce(other)
        return GaussInt(self.re * other.re - self.im * other.im,
                        self.re * other.im + self.im * other.re)

    __rmul__ = __mul__

    def conjugate(self) -> "GaussInt":
        return GaussInt(self.re, -self.im)

    def norm(self) -> int:
        return self.re * self.re + self.im * self.im

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def divides_by(self, n: int) -> bool:
        """True when every coordinate is divisible by the rational integer ``n``."""
        return self.re % n == 0 and self.im % n == 0

    def exact_div(self, n: int) -> "GaussInt":
        if not self.divides_by(n):
            raise ArithmeticError(f"{self} is not divisible by {n}")
        return GaussInt(self.re // n, self.im // n)

    def __complex__(self):
        return complex(self.re, self.im)

    def __str__(self):
        return f"{self.re}{self.im:+d}i"


I = GaussInt(0, 1)


@dataclass(frozen=True, slots=True)
class GoldenElem:
    """Element ``a + b*theta`` of Z[i][theta]."""

    a: GaussInt = GaussInt()
    b: GaussInt = GaussInt()

    def __post_init__(self):
        object.__setattr__(self, "a", GaussInt.coerce(self.a))
        object.__setattr__(self, "b", GaussInt.coerce(self.b))

    @classmethod
    def coerce(cls, value) -> "GoldenElem":
        if isinstance(value, GoldenElem):
            return value
        return cls(GaussInt.coerce(value), GaussInt())

    def __add__(self, other):
        other = GoldenElem.coerce(other)
        return GoldenElem(self.a + other.a, self.b + other.b)

    __radd__ = __add__

    def __neg__(self):
        return GoldenElem(-self.a, -self.b)

    def __sub__(self, other):
        return self + (-GoldenElem.coerce(other))

    def __rsub__(self, other):
        return GoldenElem.coerce(other) - self

    def __mul__(self, other):
        return golden_mul(self, GoldenElem.coerce(other))

    def __rmul__(self, other):
        return golden_mul(GoldenElem.coerce(other), self)

    def conjugate(self) -> "GoldenElem":
        """Complex conjugation (theta is real, so it acts on coefficients)."""
        return GoldenElem(self.a.conjugate(), self.b.conjugate())

    def is_zero(self) -> bool:
        return self.a.is_zero() and self.b.is_zero()

    def __complex__(self):
        return embed(self)

    def __str__(self):
        return f"({self.a}) + ({self.b})θ"


THETA_ELEM = GoldenElem(GaussInt(0), GaussInt(1))
ONE = GoldenElem(GaussInt(1), GaussInt(0))
ZERO = GoldenElem()
# sqrt(5) = 2*theta - 1
SQRT5_ELEM = GoldenElem(GaussInt(-1), GaussInt(2))


def golden_mul(x: GoldenElem, y: GoldenElem) -> GoldenElem:
    """Exact product using theta**2 = theta + 1."""
    bd = x.b * y.b
    return GoldenElem(x.a * y.a + bd, x.a * y.b + x.b * y.a + bd)


def tau(x: GoldenElem) -> GoldenElem:
    """Galois conjugate: a + b*theta_bar rewritten as (a + b) - b*theta."""
    return GoldenElem(x.a + x.b, -x.b)


def embed(x: GoldenElem) -> complex:
    """Complex embedding with theta -> (1 + sqrt 5) / 2."""
    return complex(x.a) + complex(x.b) * THETA


def embed_conjugate(x: GoldenElem) -> complex:
    """The other embedding, theta -> (1 - sqrt 5) / 2."""
    return complex(x.a) + complex(x.b) * THETA_BAR


def relative_norm(x: GoldenElem) -> GaussInt:
    """Norm down to Z[i], ``x * tau(x)``."""
    n = golden_mul(x, tau(x))
    if not n.b.is_zero():
        raise ArithmeticError(f"x*tau(x) has nonzero theta part for x={x}")
    return n.a


def div_sqrt5(x: GoldenElem) -> GoldenElem:
    """Exact quotient x / sqrt(5) in Z[i][theta]; raises if it does not exist.

    Uses 1/sqrt5 = (1 - 2*theta) / -5, i.e. x/sqrt5 = x*(2*theta - 1)/5.
    """
    y = golden_mul(x, SQRT5_ELEM)
    if not (y.a.divides_by(5) and y.b.divides_by(5)):
        raise ArithmeticError(f"{x} is not divisible by sqrt(5)")
    return GoldenElem(y.a.exact_div(5), y.b.exact_div(5))


@dataclass(frozen=True, slots=True)
class CosetLabel:
    """Coset of the ideal (2**t) in Z[i], with reduced representative."""

    t: int
    rep: GaussInt

    def __post_init__(self):
        if self.t < 1:
            raise ValueError("ideal level t must be >= 1")
        m = 1 << self.t
        if not (0 <= self.rep.re < m and 0 <= self.rep.im < m):
            raise ValueError(f"representative {self.rep} not reduced mod 2**{self.t}")


def coset_of(z: GaussInt, t: int) -> CosetLabel:
    """Reduce a Gaussian integer to its coset label modulo (2**t)."""
    m = 1 << t
    return CosetLabel(t, GaussInt(z.re % m, z.im % m))


def coset_encode(bits: str) -> CosetLabel:
    """Map a 2t-bit string to a coset of (2**t): first half -> re, second half -> im."""
    if len(bits) == 0 or len(bits) % 2:
        raise ValueError(f"coset index needs an even, nonzero bit length, got {len(bits)}")
    if set(bits) - {"0", "1"}:
        raise ValueError(f"not a bit string: {bits!r}")
    t = len(bits) // 2
    return CosetLabel(t, GaussInt(int(bits[:t], 2), int(bits[t:], 2)))


def coset_decode(label: CosetLabel) -> str:
    t = label.t
    return format(label.rep.re, f"0{t}b") + format(label.rep.im, f"0{t}b")
