"""Exact coefficient arithmetic for the whole engine.

Every computation downstream (normal forms, cocycle values, rank
computations) happens over the ring

    Q[zeta_1, ...][q_1^{+-1}, q_2^{+-1}, ...]

where the ``q_i`` are formal invertible parameters (Laurent units, used
for the exponentials that show up in torus cocycles) and the ``zeta_j``
are roots of unity (needed when bicharacters on finite groups must take
actual root-of-unity values).  No floating point anywhere: equality of
scalars is decidable and exact.

>>> q = Parameter.laurent("q")
>>> s = Scalar.unit(q) ** 2 - Scalar.unit(q) ** -2
>>> s.specialize({q: Scalar.one()}).is_zero()
True
>>> z = Parameter.root_of_unity("i", 4)
>>> (Scalar.unit(z) ** 2 + Scalar.from_int(1)).is_zero()
True
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, Mapping, Tuple


class ScalarError(Exception):
    """Base class for coefficient arithmetic failures."""


class NotInvertibleError(ScalarError):
    """Raised when a scalar has no inverse in the coefficient ring."""


_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")


class Parameter:
    """A named formal parameter of the coefficient ring.

    Two kinds exist: invertible Laurent units (``q``), and roots of
    unity of a given order (``zeta`` with ``zeta**n == 1`` and the
    n-th cyclotomic polynomial relation applied in normal forms).
    """

    __slots__ = ("name", "kind", "order")

    LAURENT = "laurent-unit"
    ROOT = "root-of-unity"

    def __init__(self, name: str, kind: str, order: int | None = None):
        if not _NAME_RE.fullmatch(name):
            raise ScalarError(f"bad parameter name {name!r}")
        if kind == self.ROOT:
            if order is None or order < 1:
                raise ScalarError("root-of-unity parameter needs an order >= 1")
        elif kind != self.LAURENT:
            raise ScalarError(f"unknown parameter kind {kind!r}")
        self.name = name
        self.kind = kind
        self.order = order

    @classmethod
    def laurent(cls, name: str) -> "Parameter":
        return cls(name, cls.LAURENT)

    @classmethod
    def root_of_unity(cls, name: str, order: int) -> "Parameter":
        return cls(name, cls.ROOT, order)

    def __eq__(self, other):
        return (
            isinstance(other, Parameter)
            and self.name == other.name
            and self.kind == other.kind
            and self.order == other.order
        )

    def __hash__(self):
        return hash((self.name, self.kind, self.order))

    def __lt__(self, other: "Parameter"):
        return self.name < other.name

    def __repr__(self):
        if self.kind == self.ROOT:
            return f"Parameter.root_of_unity({self.name!r}, {self.order})"
        return f"Parameter.laurent({self.name!r})"


# A monomial maps parameters to (nonzero) integer exponents.
Monomial = Tuple[Tuple[Parameter, int], ...]

_ONE_MONOMIAL: Monomial = ()


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> Tuple[Fraction, ...]:
    """Coefficients (ascending) of the n-th cyclotomic polynomial.

    >>> cyclotomic_polynomial(4)
    (Fraction(1, 1), Fraction(0, 1), Fraction(1, 1))
    """
    # X^n - 1 divided by the product of Phi_d for proper divisors d.
    num = [Fraction(-1)] + [Fraction(0)] * (n - 1) + [Fraction(1)]
    for d in range(1, n):
        if n % d == 0:
            num = _poly_div_exact(num, list(cyclotomic_polynomial(d)))
    return tuple(num)


def _poly_div_exact(num, den):
    num = list(num)
    out = [Fraction(0)] * (len(num) - len(den) + 1)
    for i in range(len(out) - 1, -1, -1):
        c = num[i + len(den) - 1] / den[-1]
        out[i] = c
        if c:
            for j, dj in enumerate(den):
                num[i + j] -= c * dj
    if any(num[: len(den) - 1]):
        raise ScalarError("non-exact polynomial division")
    return out


class Scalar:
    """A normalized element of the coefficient ring.

    Internally a finite sum of ``coefficient * monomial`` terms with
    rational coefficients, kept in canonical form: exponents of
    root-of-unity parameters are reduced modulo the cyclotomic
    relation, zero terms dropped, monomials sorted.  Scalars are
    immutable and hashable, hence safe to share between threads.

    >>> q = Parameter.laurent("q")
    >>> (Scalar.unit(q) * Scalar.unit(q).inverse()).is_one()
    True
    >>> print(Scalar.from_fraction(Fraction(1, 2)) * Scalar.unit(q) ** -3)
    1/2 q^-3
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, Fraction], *, _normalized=False):
        if _normalized:
            data = dict(terms)
        else:
            data = _normalize_terms(terms)
        self._terms = tuple(sorted(data.items()))
        self._hash = None

    # -- constructors -------------------------------------------------
    @classmethod
    def from_int(cls, n: int) -> "Scalar":
        return cls({_ONE_MONOMIAL: Fraction(n)})

    @classmethod
    def from_fraction(cls, f: Fraction) -> "Scalar":
        return cls({_ONE_MONOMIAL: Fraction(f)})

    @classmethod
    def zero(cls) -> "Scalar":
        return _ZERO

    @classmethod
    def one(cls) -> "Scalar":
        return _ONE

    @classmethod
    def unit(cls, p: Parameter, power: int = 1) -> "Scalar":
        if power == 0:
            return _ONE
        return cls({((p, power),): Fraction(1)})

    # -- structure ----------------------------------------------------
    def terms(self) -> Tuple[Tuple[Monomial, Fraction], ...]:
        return self._terms

    def parameters(self) -> set:
        return {p for mono, _ in self._terms for p, _ in mono}

    def is_zero(self) -> bool:
        return not self._terms

    def is_one(self) -> bool:
        return self._terms == ((_ONE_MONOMIAL, Fraction(1)),)

    def is_rational(self) -> bool:
        return all(mono == _ONE_MONOMIAL for mono, _ in self._terms)

    def as_fraction(self) -> Fraction:
        if self.is_zero():
            return Fraction(0)
        if not self.is_rational():
            raise ScalarError(f"{self} is not rational")
        return self._terms[0][1]

    # -- ring operations ----------------------------------------------
    def __add__(self, other: "Scalar") -> "Scalar":
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        terms = dict(self._terms)
        for mono, c in other._terms:
            terms[mono] = terms.get(mono, Fraction(0)) + c
        return Scalar({m: c for m, c in terms.items() if c}, _normalized=True)

    def __sub__(self, other: "Scalar") -> "Scalar":
        return self + (-other)

    def __neg__(self) -> "Scalar":
        return Scalar({m: -c for m, c in self._terms}, _normalized=True)

    def __mul__(self, other: "Scalar") -> "Scalar":
        if self.is_zero() or other.is_zero():
            return _ZERO
        if self.is_one():
            return other
        if other.is_one():
            return self
        acc: Dict[Monomial, Fraction] = {}
        for m1, c1 in self._terms:
            for m2, c2 in other._terms:
                m = _merge_monomials(m1, m2)
                acc[m] = acc.get(m, Fraction(0)) + c1 * c2
        return Scalar(acc)

    def __pow__(self, n: int) -> "Scalar":
        if n < 0:
            return self.inverse() ** (-n)
        out = _ONE
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        return isinstance(other, Scalar) and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self._terms)
        return self._hash

    # -- units, conjugation, substitution ------------------------------
    def is_unit(self) -> bool:
        try:
            self.inverse()
        except NotInvertibleError:
            return False
        return True

    def inverse(self) -> "Scalar":
        """Multiplicative inverse.

        Defined for single-term scalars (invert the monomial and the
        rational coefficient) and for sums lying in a single cyclotomic
        field Q(zeta) (extended Euclid modulo the cyclotomic
        polynomial).  Anything else has no inverse here.
        """
        if self.is_zero():
            raise NotInvertibleError("zero is not invertible")
        if len(self._terms) == 1:
            mono, c = self._terms[0]
            inv_mono = tuple((p, -e) for p, e in mono)
            return Scalar({inv_mono: Fraction(1) / c})
        roots = {p for p in self.parameters() if p.kind == Parameter.ROOT}
        if len(roots) == 1 and all(
            p.kind == Parameter.ROOT for p in self.parameters()
        ):
            return self._cyclotomic_inverse(next(iter(roots)))
        raise NotInvertibleError(f"{self} is not invertible in the parameter ring")

    def _cyclotomic_inverse(self, zeta: Parameter) -> "Scalar":
        phi = list(cyclotomic_polynomial(zeta.order))
        poly = [Fraction(0)] * (len(phi) - 1)
        for mono, c in self._terms:
            exp = mono[0][1] if mono else 0
            poly[exp] += c
        inv = _poly_invert_mod(poly, phi)
        if inv is None:
            raise NotInvertibleError(f"{self} is a zero divisor")
        out: Dict[Monomial, Fraction] = {}
        for e, c in enumerate(inv):
            if c:
                out[((zeta, e),) if e else _ONE_MONOMIAL] = c
        return Scalar(out, _normalized=True)

    def conjugate(self) -> "Scalar":
        """The *-involution: rationals fixed, every unit parameter is
        sent to its inverse (complex conjugation on exponentials and on
        roots of unity)."""
        acc: Dict[Monomial, Fraction] = {}
        for mono, c in self._terms:
            m = tuple((p, -e) for p, e in mono)
            for term_mono, term_c in _normalize_terms({m: c}).items():
                acc[term_mono] = acc.get(term_mono, Fraction(0)) + term_c
        return Scalar({m: c for m, c in acc.items() if c}, _normalized=True)

    def specialize(self, assignment: Mapping[Parameter, "Scalar"]) -> "Scalar":
        """Substitute scalars for parameters, then renormalize.

        Laurent-unit parameters must be sent to units (their negative
        powers must stay meaningful).
        """
        for p, v in assignment.items():
            if p.kind == Parameter.LAURENT and not v.is_unit():
                raise NotInvertibleError(
                    f"cannot send unit parameter {p.name} to non-unit {v}"
                )
        out = _ZERO
        for mono, c in self._terms:
            term = Scalar.from_fraction(c)
            for p, e in mono:
                if p in assignment:
                    term = term * (assignment[p] ** e)
                else:
                    term = term * Scalar.unit(p, e)
            out = out + term
        return out

    # -- display -------------------------------------------------------
    def __str__(self):
        if self.is_zero():
            return "0"
        parts = []
        for mono, c in self._terms:
            factors = []
            if c == 1 and mono:
                pass
            elif c == -1 and mono:
                factors.append("-")
            else:
                factors.append(str(c))
            for p, e in mono:
                factors.append(p.name if e == 1 else f"{p.name}^{e}")
            body = " ".join(f for f in factors if f != "-")
            if factors and factors[0] == "-":
                body = "-" + body
            parts.append(body)
        out = parts[0]
        for part in parts[1:]:
            if part.startswith("-"):
                out += " - " + part[1:]
            else:
                out += " + " + part
        return out

    def __repr__(self):
        return f"<Scalar {self}>"


def _merge_monomials(m1: Monomial, m2: Monomial) -> Monomial:
    acc = dict(m1)
    for p, e in m2:
        ne = acc.get(p, 0) + e
        if ne:
            acc[p] = ne
        else:
            acc.pop(p, None)
    return tuple(sorted(acc.items(), key=lambda kv: kv[0].name))


def _normalize_terms(terms: Mapping[Monomial, Fraction]) -> Dict[Monomial, Fraction]:
    acc: Dict[Monomial, Fraction] = {}
    for mono, c in terms.items():
        if not c:
            continue
        mono = tuple(sorted(((p, e) for p, e in mono if e), key=lambda kv: kv[0].name))
        for rmono, rc in _reduce_roots(mono, Fraction(c)):
            if rc:
                acc[rmono] = acc.get(rmono, Fraction(0)) + rc
    return {m: c for m, c in acc.items() if c}


def _reduce_roots(mono: Monomial, coeff: Fraction) -> Iterable[Tuple[Monomial, Fraction]]:
    """Reduce root-of-unity exponents modulo the cyclotomic relation.

    An exponent e is first taken mod n (zeta^n = 1), then the power
    basis 1, zeta, ..., zeta^(phi(n)-1) is enforced by rewriting
    zeta^d for d >= deg(Phi_n) through Phi_n(zeta) = 0.
    """
    for i, (p, e) in enumerate(mono):
        if p.kind != Parameter.ROOT:
            continue
        n = p.order
        e_mod = e % n
        phi = cyclotomic_polynomial(n)
        deg = len(phi) - 1
        if e_mod == e and e_mod < deg:
            continue
        rest = mono[:i] + mono[i + 1 :]
        # remainder of X^e_mod modulo Phi_n
        rem = [Fraction(0)] * max(e_mod + 1, deg)
        rem[e_mod] = Fraction(1)
        for d in range(len(rem) - 1, deg - 1, -1):
            c = rem[d]
            if not c:
                continue
            rem[d] = Fraction(0)
            for j in range(deg):
                rem[d - deg + j] -= c * phi[j] / phi[deg]
        out = []
        for d in range(deg):
            if rem[d]:
                sub = rest if d == 0 else _merge_monomials(rest, ((p, d),))
                out.extend(_reduce_roots(sub, coeff * rem[d]))
        return out
    return [(mono, coeff)]


def _poly_invert_mod(a, mod):
    """Inverse of polynomial a modulo mod over Q, or None."""

    def trim(p):
        while p and not p[-1]:
            p.pop()
        return p

    def pdivmod(num, den):
        num = list(num)
        q = [Fraction(0)] * max(len(num) - len(den) + 1, 0)
        for i in range(len(q) - 1, -1, -1):
            c = num[i + len(den) - 1] / den[-1]
            q[i] = c
            if c:
                for j, dj in enumerate(den):
                    num[i + j] -= c * dj
        return q, trim(num)

    r0, r1 = trim(list(mod)), trim(list(a))
    s0, s1 = [], [Fraction(1)]
    while r1:
        q, r = pdivmod(r0, r1)
        s = [Fraction(0)] * max(len(s0), len(q) + len(s1) - 1, 1)
        for i, c in enumerate(s0):
            s[i] += c
        for i, qc in enumerate(q):
            if qc:
                for j, sc in enumerate(s1):
                    s[i + j] -= qc * sc
        r0, r1, s0, s1 = r1, r, s1, trim(s)
    if len(r0) != 1:
        return None
    lead = r0[0]
    inv = [c / lead for c in s0]
    inv += [Fraction(0)] * (len(mod) - 1 - len(inv))
    return inv


_ZERO = Scalar({}, _normalized=True)
_ONE = Scalar({_ONE_MONOMIAL: Fraction(1)}, _normalized=True)


def specialize(s: Scalar, assignment: Mapping[Parameter, Scalar]) -> Scalar:
    """Functional form of :meth:`Scalar.specialize`."""
    return s.specialize(assignment)
