"""Exact arithmetic in the finite fields GF(p^e).

Elements are residues of polynomials over Z_p modulo a fixed monic irreducible
polynomial. Every element has an index in ``0..n-1`` obtained by reading its
coefficient vector as a base-p integer (constant term least significant); the
index doubles as the vertex label of the Cayley maps built in
:mod:`etmaps.construct`.
"""

import logging
from dataclasses import dataclass
from dataclasses import field
from math import gcd

import numpy as np
import sympy
from sympy.abc import x as _x

from etmaps.exceptions import DivisionByZero
from etmaps.exceptions import NotPrime
from etmaps.exceptions import NotPrimePower
from etmaps.exceptions import Unsupported
from etmaps.exceptions import ZeroElement

logger = logging.getLogger(__name__)

MAX_ORDER = 2**16


@dataclass(frozen=True)
class FieldElement:
    """A residue class, stored as its coefficient vector (constant term first)."""

    coeffs: tuple

    def __str__(self):
        if len(self.coeffs) == 1:
            return str(self.coeffs[0])
        terms = []
        for k in reversed(range(len(self.coeffs))):
            a = self.coeffs[k]
            if a == 0:
                continue
            if k == 0:
                terms.append(str(a))
            else:
                mono = "x" if k == 1 else f"x^{k}"
                terms.append(mono if a == 1 else f"{a}{mono}")
        return "+".join(terms) if terms else "0"


@dataclass(frozen=True)
class FieldSpec:
    """The field GF(p^e) together with lookup tables for its arithmetic.

    Attributes
    ----------
    p : int
        The characteristic.
    e : int
        The degree over the prime field.
    modulus : tuple of int
        Coefficients of the defining polynomial, constant term first. For prime
        fields this is ``(0, 1)``, the polynomial ``x - 0``.
    n : int
        The order ``p**e``.
    """

    p: int
    e: int
    modulus: tuple
    n: int = field(init=False)
    _digits: np.ndarray = field(init=False, repr=False, compare=False)
    _powers: np.ndarray = field(init=False, repr=False, compare=False)
    _exp: list = field(init=False, repr=False, compare=False)
    _log: list = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        n = self.p**self.e
        object.__setattr__(self, "n", n)
        powers = self.p ** np.arange(self.e, dtype=np.int64)
        digits = (np.arange(n, dtype=np.int64)[:, None] // powers) % self.p
        object.__setattr__(self, "_powers", powers)
        object.__setattr__(self, "_digits", digits)
        exp, log = self._build_log_tables()
        object.__setattr__(self, "_exp", exp)
        object.__setattr__(self, "_log", log)

    # tables ------------------------------------------------------------------

    def _mul_slow(self, i, j):
        """Multiplies two indices by polynomial arithmetic modulo the modulus."""
        if self.e == 1:
            return (i * j) % self.p
        prod = np.convolve(self._digits[i], self._digits[j]) % self.p
        mod = np.asarray(self.modulus, dtype=np.int64)
        # reduce from the top degree down; the modulus is monic
        for k in range(len(prod) - 1, self.e - 1, -1):
            lead = prod[k]
            if lead:
                prod[k - self.e : k + 1] = (prod[k - self.e : k + 1] - lead * mod) % self.p
        return int(prod[: self.e] @ self._powers)

    def _build_log_tables(self):
        n = self.n
        if n == 2:
            return [1], [-1, 0]
        for g in range(2, n) if self.e > 1 else range(1, n):
            exp = [1]
            value = g
            while value != 1:
                exp.append(value)
                value = self._mul_slow(value, g)
            if len(exp) == n - 1:
                log = [-1] * n
                for k, v in enumerate(exp):
                    log[v] = k
                return exp, log
        raise RuntimeError(f"no generator found for GF({n})")  # unreachable for fields

    # conversions -------------------------------------------------------------

    def element(self, index):
        """Returns the element with the given base-p index."""
        if isinstance(index, FieldElement):
            return index
        index = int(index)
        if not 0 <= index < self.n:
            raise ValueError(f"element index {index} is outside GF({self.n})")
        return FieldElement(tuple(int(d) for d in self._digits[index]))

    def index(self, a):
        """Returns the base-p index of an element (ints pass through)."""
        if isinstance(a, FieldElement):
            if len(a.coeffs) != self.e or not all(0 <= c < self.p for c in a.coeffs):
                raise ValueError(f"{a} is not an element of GF({self.n})")
            return int(np.asarray(a.coeffs, dtype=np.int64) @ self._powers)
        a = int(a)
        if not 0 <= a < self.n:
            raise ValueError(f"element index {a} is outside GF({self.n})")
        return a

    def elements(self):
        """All elements in index order."""
        return [self.element(i) for i in range(self.n)]

    @property
    def zero(self):
        return self.element(0)

    @property
    def one(self):
        return self.element(1)

    # index arithmetic --------------------------------------------------------

    def _add(self, i, j):
        if self.e == 1:
            return (i + j) % self.p
        return int(((self._digits[i] + self._digits[j]) % self.p) @ self._powers)

    def _neg(self, i):
        if self.e == 1:
            return (-i) % self.p
        return int(((-self._digits[i]) % self.p) @ self._powers)

    def _mul(self, i, j):
        if i == 0 or j == 0:
            return 0
        return self._exp[(self._log[i] + self._log[j]) % (self.n - 1)]

    def _pow(self, i, k):
        if i == 0:
            if k < 0:
                raise DivisionByZero("0 has no inverse")
            return 1 if k == 0 else 0
        return self._exp[(self._log[i] * k) % (self.n - 1)]

    # element arithmetic ------------------------------------------------------

    def add(self, a, b):
        return self.element(self._add(self.index(a), self.index(b)))

    def sub(self, a, b):
        return self.element(self._add(self.index(a), self._neg(self.index(b))))

    def neg(self, a):
        return self.element(self._neg(self.index(a)))

    def mul(self, a, b):
        return self.element(self._mul(self.index(a), self.index(b)))

    def inv(self, a):
        """Multiplicative inverse.

        Raises
        ------
        DivisionByZero
            If ``a`` is zero.
        """
        i = self.index(a)
        if i == 0:
            raise DivisionByZero(f"0 has no inverse in GF({self.n})")
        return self.element(self._pow(i, -1))

    def pow(self, a, k):
        return self.element(self._pow(self.index(a), int(k)))


# construction ----------------------------------------------------------------


def _is_irreducible(coeffs, p):
    """Irreducibility over Z_p of a polynomial given constant term first."""
    poly = sympy.Poly(list(reversed(coeffs)), _x, modulus=p)
    return poly.is_irreducible


def _canonical_modulus(p, e):
    """The monic irreducible of degree e with the smallest base-p reading."""
    if e == 1:
        return (0, 1)
    for k in range(p**e):
        low = [(k // p**i) % p for i in range(e)]
        if low[0] == 0:
            continue  # divisible by x
        coeffs = tuple(low + [1])
        if _is_irreducible(coeffs, p):
            return coeffs
    raise RuntimeError(f"no irreducible polynomial of degree {e} over Z_{p}")


def make_field(p, e=1):
    """Builds GF(p^e) with its canonical modulus.

    Parameters
    ----------
    p : int
        A prime.
    e : int
        Degree of the extension, at least 1.

    Returns
    -------
    FieldSpec

    Raises
    ------
    NotPrime
        If ``p`` is not prime.
    """
    p, e = int(p), int(e)
    if p < 2 or not sympy.isprime(p):
        raise NotPrime(f"{p} is not prime")
    if e < 1:
        raise ValueError(f"e must be a positive integer, got {e}")
    if p**e > MAX_ORDER:
        raise Unsupported(f"GF({p}^{e}) exceeds the supported order {MAX_ORDER}")
    fs = FieldSpec(p, e, _canonical_modulus(p, e))
    logger.debug(f"built GF({fs.n}) with modulus {fs.modulus}")
    return fs


def prime_power(n):
    """Splits n = p^e.

    Raises
    ------
    NotPrimePower
        If ``n`` is not a prime power.
    """
    n = int(n)
    factors = sympy.factorint(n) if n > 1 else {}
    if len(factors) != 1:
        raise NotPrimePower(f"{n} is not a prime power")
    ((p, e),) = factors.items()
    return int(p), int(e)


def field_of_order(n):
    """The field with n elements."""
    return make_field(*prime_power(n))


# multiplicative structure ----------------------------------------------------


def discrete_log(fs, a):
    """Exponent k with g^k = a for the internal generator g."""
    i = fs.index(a)
    if i == 0:
        raise ZeroElement("0 has no discrete logarithm")
    return fs._log[i]


def element_order(fs, a):
    """Multiplicative order of a nonzero element."""
    k = discrete_log(fs, a)
    return (fs.n - 1) // gcd(k, fs.n - 1)


def is_primitive(fs, a):
    """True iff a generates the multiplicative group.

    Raises
    ------
    ZeroElement
        If ``a`` is zero.
    """
    return element_order(fs, a) == fs.n - 1


def primitive_elements(fs):
    """The phi(n-1) primitive elements in index order."""
    return [fs.element(i) for i in range(1, fs.n) if is_primitive(fs, i)]


def is_square(fs, a):
    """True iff a is a nonzero square."""
    if fs.index(a) == 0:
        return False
    if fs.p == 2:
        return True
    return discrete_log(fs, a) % 2 == 0


def squares(fs):
    """The nonzero squares in index order."""
    return [fs.element(i) for i in range(1, fs.n) if is_square(fs, i)]


# Galois action ---------------------------------------------------------------


def frobenius(fs, a):
    """The Frobenius image a^p."""
    return fs.pow(a, fs.p)


def galois_orbits(fs, elems):
    """Partitions elems into orbits of the Frobenius automorphism.

    Orbits are listed in order of their first member in ``elems``; within an
    orbit the elements follow a, a^p, a^(p^2), ...

    Parameters
    ----------
    fs : FieldSpec
    elems : list of FieldElement or int

    Returns
    -------
    list of list of FieldElement
    """
    wanted = {fs.index(a) for a in elems}
    seen = set()
    orbits = []
    for a in elems:
        i = fs.index(a)
        if i in seen:
            continue
        orbit = []
        j = i
        while True:
            if j in wanted:
                orbit.append(fs.element(j))
                seen.add(j)
            j = fs._pow(j, fs.p)
            if j == i:
                break
        orbits.append(orbit)
    return orbits
