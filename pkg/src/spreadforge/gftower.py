"""Exact arithmetic in the finite-field tower F_p < F_q < F_{q^k} < F_{q^kt}.

A tower is built from three extension steps of degrees e, k and t.  Every
step uses the lexicographically smallest monic primitive polynomial over
the level below, found by exhaustive search, so two towers built from the
same (p, e, k, t) are identical and all downstream output is reproducible.

Elements are stored as fixed-length little-endian coefficient vectors over
the previous level (plain ints mod p at the bottom), which makes equality,
hashing and serialization structural.
"""

from __future__ import annotations

import itertools
import math
from typing import Iterator, Sequence

from .errors import (
    DivisionByZero,
    LevelMismatch,
    NonPrimeCharacteristic,
    NoPrimitivePolynomialFound,
)

# Raw representation, one variant per level:
#   level 0          -> int in range(p)
#   level j >= 1     -> tuple of level j-1 raws, length = step degree
Raw = int | tuple


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def distinct_prime_factors(n: int) -> list[int]:
    """Prime factors of n by trial division, ascending, without multiplicity."""
    factors = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            factors.append(f)
            while n % f == 0:
                n //= f
        f += 1 if f == 2 else 2
    if n > 1:
        factors.append(n)
    return factors


def coprime_transfer_holds(ell: int, q: int) -> tuple[bool, bool]:
    """Evaluate both sides of the gcd transfer equivalence for (ell, q).

    Returns (gcd(ell, q-1) == 1, gcd((q^ell - 1)/(q - 1), q - 1) == 1).
    The two booleans agree for every ell >= 1 and prime power q >= 2.
    """
    if ell < 1 or q < 2:
        raise ValueError(f"need ell >= 1 and q >= 2, got ell={ell}, q={q}")
    left = math.gcd(ell, q - 1) == 1
    right = math.gcd((q**ell - 1) // (q - 1), q - 1) == 1
    return left, right


class FieldStep:
    """One extension step: a monic primitive modulus over the level below."""

    __slots__ = ("degree", "modulus", "cardinality", "primitive", "_xpows")

    def __init__(self, degree: int, modulus: tuple, cardinality: int, xpows: tuple):
        self.degree = degree
        self.modulus = modulus  # degree+1 raws over the previous level, monic
        self.cardinality = cardinality  # of the level this step creates
        self.primitive = True
        self._xpows = xpows  # x^m mod modulus for m in [degree, 2*degree-2]

    def __repr__(self) -> str:
        return f"FieldStep(degree={self.degree}, cardinality={self.cardinality})"


class FieldElement:
    """Immutable element of one level of a FieldTower.

    Supports +, -, *, unary -, ** (any integer exponent) and /.  Mixing
    levels or towers raises LevelMismatch.
    """

    __slots__ = ("tower", "level", "raw")

    def __init__(self, tower: "FieldTower", level: int, raw: Raw):
        self.tower = tower
        self.level = level
        self.raw = raw

    # -- helpers --------------------------------------------------------------

    def _check(self, other: "FieldElement") -> None:
        if not isinstance(other, FieldElement):
            raise LevelMismatch(f"expected FieldElement, got {type(other).__name__}")
        if self.level != other.level or not self.tower.compatible_at(other.tower, self.level):
            raise LevelMismatch(
                f"operands at levels {self.level} and {other.level} of incompatible towers"
            )

    def is_zero(self) -> bool:
        return self.tower._raw_is_zero(self.level, self.raw)

    def coefficients(self) -> tuple["FieldElement", ...]:
        """Coefficient vector over the previous level (level >= 1 only)."""
        if self.level == 0:
            raise LevelMismatch("level-0 elements have no coefficient vector")
        return tuple(FieldElement(self.tower, self.level - 1, c) for c in self.raw)

    def digits(self) -> tuple[int, ...]:
        """Flat little-endian base-p digit vector (level-major)."""
        return self.tower._raw_digits(self.level, self.raw)

    # -- arithmetic -----------------------------------------------------------

    def __add__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        return FieldElement(self.tower, self.level, self.tower._raw_add(self.level, self.raw, other.raw))

    def __sub__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        t = self.tower
        return FieldElement(t, self.level, t._raw_add(self.level, self.raw, t._raw_neg(self.level, other.raw)))

    def __neg__(self) -> "FieldElement":
        return FieldElement(self.tower, self.level, self.tower._raw_neg(self.level, self.raw))

    def __mul__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        return FieldElement(self.tower, self.level, self.tower._raw_mul(self.level, self.raw, other.raw))

    def __pow__(self, n: int) -> "FieldElement":
        if n < 0:
            return self.inverse() ** (-n)
        return FieldElement(self.tower, self.level, self.tower._raw_pow(self.level, self.raw, n))

    def inverse(self) -> "FieldElement":
        if self.is_zero():
            raise DivisionByZero(f"zero has no inverse at level {self.level}")
        card = self.tower.cardinality(self.level)
        return FieldElement(self.tower, self.level, self.tower._raw_pow(self.level, self.raw, card - 2))

    def __truediv__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        return self * other.inverse()

    # -- identity -------------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, FieldElement)
            and self.level == other.level
            and self.raw == other.raw
            and self.tower.compatible_at(other.tower, self.level)
        )

    def __hash__(self) -> int:
        return hash((self.level, self.raw))

    def __repr__(self) -> str:
        return f"<F[{self.level}] {''.join(_digit_char(d) for d in self.digits())}>"


_DIGIT_ALPHABET = "0123456789abcdefghijklmnopqrstuvwxyz"


def _digit_char(d: int) -> str:
    return _DIGIT_ALPHABET[d]


class FieldTower:
    """The tower descriptor plus all element arithmetic.

    Levels are indexed 0..3: F_p, F_q, F_{q^k}, F_{q^kt}.  Towers built
    from equal parameters compare equal, so elements, matrices and codes
    remain comparable across independent builds.
    """

    def __init__(self, p: int, degrees: Sequence[int],
                 moduli: Sequence[Sequence[int] | None] | None = None):
        """Build the tower; `moduli` optionally pins a step's modulus.

        Each override is a digit vector (constant term first, entries as
        canonical element indexes over the level below) of the monic part;
        it must still be primitive.  Used to probe how outputs depend on
        the modulus choice; normal builds search for the smallest one.
        """
        if not is_prime(p):
            raise NonPrimeCharacteristic(f"characteristic {p} is not prime")
        if any(d < 1 for d in degrees):
            raise ValueError(f"extension degrees must be >= 1, got {tuple(degrees)}")
        if moduli is None:
            moduli = [None] * len(degrees)
        self.p = p
        self.steps: list[FieldStep] = []
        self._cards = [p]
        self._alphas: list[Raw] = []  # class of x at each new level
        for d, override in zip(degrees, moduli):
            self._extend(d, override)
        self._key = (p, tuple(s.modulus for s in self.steps))
        # arithmetic at level j only depends on the steps below it
        self._level_keys = tuple(
            (p,) + tuple(s.modulus for s in self.steps[:j]) for j in range(len(self.steps) + 1)
        )

    # -- identity -------------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        return isinstance(other, FieldTower) and self._key == other._key

    def __hash__(self) -> int:
        return hash(self._key)

    def __repr__(self) -> str:
        return f"FieldTower(p={self.p}, cards={self._cards})"

    # -- structure ------------------------------------------------------------

    @property
    def nlevels(self) -> int:
        return len(self.steps) + 1

    def cardinality(self, level: int) -> int:
        return self._cards[level]

    def step_modulus(self, level: int) -> tuple[FieldElement, ...]:
        """Modulus of the step creating `level`, as elements of level-1."""
        step = self.steps[level - 1]
        return tuple(FieldElement(self, level - 1, c) for c in step.modulus)

    def compatible_at(self, other: "FieldTower", level: int) -> bool:
        """True when both towers define identical arithmetic up to `level`."""
        return self._level_keys[level] == other._level_keys[level]

    def describe(self) -> str:
        """Canonical one-line text form, identical across rebuilds."""
        parts = [f"p={self.p}"]
        for idx, step in enumerate(self.steps):
            coeffs = ",".join(
                "".join(_digit_char(d) for d in self._raw_digits(idx, c)) for c in step.modulus
            )
            parts.append(f"step={step.degree}:{coeffs}")
        return "; ".join(parts)

    # -- element constructors ---------------------------------------------

    def zero(self, level: int) -> FieldElement:
        return FieldElement(self, level, self._raw_zero(level))

    def one(self, level: int) -> FieldElement:
        return FieldElement(self, level, self._raw_one(level))

    def alpha(self, level: int) -> FieldElement:
        """Class of the indeterminate at `level`; generates the unit group."""
        if level < 1:
            raise LevelMismatch("level 0 has no adjoined generator")
        return FieldElement(self, level, self._alphas[level - 1])

    def element(self, level: int, value) -> FieldElement:
        """Coerce an int (prime-subfield constant) or coefficient sequence."""
        if isinstance(value, FieldElement):
            if value.level != level or not value.tower.compatible_at(self, level):
                raise LevelMismatch(f"element at level {value.level}, expected {level}")
            return value
        if isinstance(value, int):
            return FieldElement(self, level, self._raw_const(level, value % self.p))
        if level == 0:
            raise ValueError("level-0 elements are built from ints")
        degree = self.steps[level - 1].degree
        if len(value) != degree:
            raise ValueError(f"expected {degree} coefficients, got {len(value)}")
        coeffs = tuple(self.element(level - 1, v).raw for v in value)
        return FieldElement(self, level, coeffs)

    def from_index(self, level: int, index: int) -> FieldElement:
        """Element number `index` in canonical (little-endian digit) order."""
        if not 0 <= index < self.cardinality(level):
            raise ValueError(f"index {index} out of range at level {level}")
        return FieldElement(self, level, self._raw_from_index(level, index))

    def index_of(self, x: FieldElement) -> int:
        return self._raw_index(x.level, x.raw)

    def elements(self, level: int) -> Iterator[FieldElement]:
        """All elements of a level in canonical order, zero first."""
        for i in range(self.cardinality(level)):
            yield self.from_index(level, i)

    # -- raw arithmetic ---------------------------------------------------

    def _raw_zero(self, level: int) -> Raw:
        if level == 0:
            return 0
        return (self._raw_zero(level - 1),) * self.steps[level - 1].degree

    def _raw_one(self, level: int) -> Raw:
        if level == 0:
            return 1 % self.p
        step = self.steps[level - 1]
        return (self._raw_one(level - 1),) + (self._raw_zero(level - 1),) * (step.degree - 1)

    def _raw_const(self, level: int, c: int) -> Raw:
        if level == 0:
            return c % self.p
        step = self.steps[level - 1]
        return (self._raw_const(level - 1, c),) + (self._raw_zero(level - 1),) * (step.degree - 1)

    def _raw_is_zero(self, level: int, a: Raw) -> bool:
        if level == 0:
            return a == 0
        return all(self._raw_is_zero(level - 1, c) for c in a)

    def _raw_add(self, level: int, a: Raw, b: Raw) -> Raw:
        if level == 0:
            return (a + b) % self.p
        down = level - 1
        return tuple(self._raw_add(down, x, y) for x, y in zip(a, b))

    def _raw_neg(self, level: int, a: Raw) -> Raw:
        if level == 0:
            return (-a) % self.p
        down = level - 1
        return tuple(self._raw_neg(down, x) for x in a)

    def _raw_mul(self, level: int, a: Raw, b: Raw) -> Raw:
        if level == 0:
            return (a * b) % self.p
        step = self.steps[level - 1]
        d = step.degree
        down = level - 1
        if d == 1:
            return (self._raw_mul(down, a[0], b[0]),)
        prod = [self._raw_zero(down)] * (2 * d - 1)
        for i, ai in enumerate(a):
            if self._raw_is_zero(down, ai):
                continue
            for j, bj in enumerate(b):
                prod[i + j] = self._raw_add(down, prod[i + j], self._raw_mul(down, ai, bj))
        out = prod[:d]
        for m in range(d, 2 * d - 1):
            cm = prod[m]
            if self._raw_is_zero(down, cm):
                continue
            xm = step._xpows[m - d]
            out = [self._raw_add(down, r, self._raw_mul(down, cm, x)) for r, x in zip(out, xm)]
        return tuple(out)

    def _raw_pow(self, level: int, a: Raw, n: int) -> Raw:
        result = self._raw_one(level)
        base = a
        while n > 0:
            if n & 1:
                result = self._raw_mul(level, result, base)
            base = self._raw_mul(level, base, base)
            n >>= 1
        return result

    # -- indexing / digits ------------------------------------------------

    def _raw_from_index(self, level: int, index: int) -> Raw:
        if level == 0:
            return index
        step = self.steps[level - 1]
        base = self._cards[level - 1]
        coeffs = []
        for _ in range(step.degree):
            coeffs.append(self._raw_from_index(level - 1, index % base))
            index //= base
        return tuple(coeffs)

    def _raw_index(self, level: int, a: Raw) -> int:
        if level == 0:
            return a
        base = self._cards[level - 1]
        index = 0
        for c in reversed(a):
            index = index * base + self._raw_index(level - 1, c)
        return index

    def _raw_digits(self, level: int, a: Raw) -> tuple[int, ...]:
        if level == 0:
            return (a,)
        out: tuple[int, ...] = ()
        for c in a:
            out += self._raw_digits(level - 1, c)
        return out

    def digit_length(self, level: int) -> int:
        """Number of base-p digits a level element flattens to."""
        n = 1
        for step in self.steps[:level]:
            n *= step.degree
        return n

    def element_from_digits(self, level: int, digits: Sequence[int]) -> FieldElement:
        if len(digits) != self.digit_length(level):
            raise ValueError(f"expected {self.digit_length(level)} digits, got {len(digits)}")
        if any(not 0 <= d < self.p for d in digits):
            raise ValueError("digit out of range for characteristic")
        return FieldElement(self, level, self._raw_from_digits(level, tuple(digits)))

    def _raw_from_digits(self, level: int, digits: tuple[int, ...]) -> Raw:
        if level == 0:
            return digits[0]
        span = self.digit_length(level - 1)
        return tuple(
            self._raw_from_digits(level - 1, digits[i * span:(i + 1) * span])
            for i in range(self.steps[level - 1].degree)
        )

    # -- tower construction ---------------------------------------------------

    def _extend(self, degree: int, override: Sequence[int] | None = None) -> None:
        level = len(self.steps)  # level being extended *from*
        card_below = self._cards[-1]
        card = card_below**degree
        if override is not None:
            if len(override) != degree:
                raise ValueError(f"override needs {degree} coefficient indexes")
            coeffs = tuple(self._raw_from_index(level, i) for i in override)
            modulus = coeffs + (self._raw_one(level),)
            primes = distinct_prime_factors(card - 1)
            if not self._x_order_is(level, degree, modulus, card - 1, primes):
                raise ValueError("override modulus is not primitive")
        else:
            modulus = self._search_primitive_modulus(level, degree, card - 1)
        xpows = self._xpow_table(level, degree, modulus)
        self.steps.append(FieldStep(degree, modulus, card, xpows))
        self._cards.append(card)
        # class of x at the new level: x itself for degree >= 2, else -a0
        if degree >= 2:
            alpha = tuple(
                self._raw_one(level) if i == 1 else self._raw_zero(level) for i in range(degree)
            )
        else:
            alpha = (self._raw_neg(level, modulus[0]),)
        self._alphas.append(alpha)

    def _xpow_table(self, level: int, degree: int, modulus: tuple) -> tuple:
        """x^m mod modulus for m in [degree, 2*degree-2], coefficients over `level`."""
        if degree == 1:
            return ()
        # x^degree = -(a_0 + a_1 x + ... + a_{degree-1} x^{degree-1})
        xd = tuple(self._raw_neg(level, modulus[i]) for i in range(degree))
        table = [xd]
        for _ in range(degree - 2):
            prev = table[-1]
            # multiply by x: shift, then fold the overflow through x^degree
            top = prev[-1]
            shifted = [self._raw_zero(level)] + list(prev[:-1])
            nxt = tuple(
                self._raw_add(level, shifted[i], self._raw_mul(level, top, xd[i]))
                for i in range(degree)
            )
            table.append(nxt)
        return tuple(table)

    def _search_primitive_modulus(self, level: int, degree: int, group_order: int) -> tuple:
        """Lexicographically smallest monic primitive polynomial of `degree`.

        Candidates are scanned in lexicographic order of the coefficient
        vector (constant term first, each coefficient in canonical element
        order).  A candidate is accepted iff the class of x in the quotient
        ring has multiplicative order exactly group_order, which implies
        irreducibility as well.
        """
        card_below = self._cards[level]
        primes = distinct_prime_factors(group_order)
        one = self._raw_one(level)
        for digits in itertools.product(range(card_below), repeat=degree):
            coeffs = tuple(self._raw_from_index(level, d) for d in digits)
            modulus = coeffs + (one,)
            if self._x_order_is(level, degree, modulus, group_order, primes):
                return modulus
        raise NoPrimitivePolynomialFound(
            f"no primitive polynomial of degree {degree} over level {level}"
        )

    def _x_order_is(self, level: int, degree: int, modulus: tuple,
                    group_order: int, primes: list[int]) -> bool:
        if self._raw_is_zero(level, modulus[0]):
            return False  # x divides the candidate
        one = (self._raw_one(level),) + (self._raw_zero(level),) * (degree - 1)
        if degree >= 2:
            x = tuple(
                self._raw_one(level) if i == 1 else self._raw_zero(level)
                for i in range(degree)
            )
        else:
            x = (self._raw_neg(level, modulus[0]),)
        if self._polymod_pow(level, degree, modulus, x, group_order) != one:
            return False
        for ell in primes:
            if self._polymod_pow(level, degree, modulus, x, group_order // ell) == one:
                return False
        return True

    def _polymod_mul(self, level: int, degree: int, modulus: tuple, a: tuple, b: tuple) -> tuple:
        """Product of two residues mod a monic candidate modulus."""
        if degree == 1:
            return (self._raw_mul(level, a[0], b[0]),)
        prod = [self._raw_zero(level)] * (2 * degree - 1)
        for i, ai in enumerate(a):
            if self._raw_is_zero(level, ai):
                continue
            for j, bj in enumerate(b):
                prod[i + j] = self._raw_add(level, prod[i + j], self._raw_mul(level, ai, bj))
        for m in range(2 * degree - 2, degree - 1, -1):
            c = prod[m]
            if self._raw_is_zero(level, c):
                continue
            nc = self._raw_neg(level, c)
            for i in range(degree + 1):
                prod[m - degree + i] = self._raw_add(
                    level, prod[m - degree + i], self._raw_mul(level, nc, modulus[i])
                )
        return tuple(prod[:degree])

    def _polymod_pow(self, level: int, degree: int, modulus: tuple, a: tuple, n: int) -> tuple:
        result = (self._raw_one(level),) + (self._raw_zero(level),) * (degree - 1)
        base = a
        while n > 0:
            if n & 1:
                result = self._polymod_mul(level, degree, modulus, result, base)
            base = self._polymod_mul(level, degree, modulus, base, base)
            n >>= 1
        return result


def field_build(p: int, e: int, k: int, t: int) -> FieldTower:
    """Build the four-level tower for parameters (p, e, k, t).

    Levels: 0 = F_p, 1 = F_q with q = p^e, 2 = F_{q^k}, 3 = F_{q^kt}.
    The level-3 step exists to fix the degree-t modulus whose companion
    matrix drives the group construction.
    """
    if not is_prime(p):
        raise NonPrimeCharacteristic(f"characteristic {p} is not prime")
    if min(e, k, t) < 1:
        raise ValueError(f"degrees must be >= 1, got e={e}, k={k}, t={t}")
    return FieldTower(p, (e, k, t))


def element_order(x: FieldElement) -> int:
    """Least m >= 1 with x^m = 1; raises DivisionByZero for x = 0."""
    if x.is_zero():
        raise DivisionByZero("zero has no multiplicative order")
    n = x.tower.cardinality(x.level) - 1
    m = n
    for ell in distinct_prime_factors(n):
        while m % ell == 0 and (x ** (m // ell)) == x.tower.one(x.level):
            m //= ell
    return m
