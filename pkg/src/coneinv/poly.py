"""Sparse multivariate polynomials over the rationals.

The carrier type for the whole package. Polynomials are immutable maps from
exponent tuples to nonzero ``Fraction`` coefficients, tagged with an ordered
tuple of variable names. All arithmetic is exact.

Monomials are plain exponent tuples (one entry per ring variable); the helper
functions ``monomial_mul``, ``monomial_divides`` etc. operate on them.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

from .errors import (
    ConstantInputError,
    InexactDivisionError,
    RingMismatchError,
    SingularMatrixError,
)

Monomial = tuple  # exponent tuple, one non-negative int per ring variable
Scalar = Union[int, Fraction]


class _MinusInfinity:
    """Degree of the zero polynomial. Compares below every integer."""

    __slots__ = ()
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __lt__(self, other):
        return not isinstance(other, _MinusInfinity)

    def __le__(self, other):
        return True

    def __gt__(self, other):
        return False

    def __ge__(self, other):
        return isinstance(other, _MinusInfinity)

    def __eq__(self, other):
        return isinstance(other, _MinusInfinity)

    def __hash__(self):
        return hash("coneinv-minus-infinity")

    def __repr__(self):
        return "MINUS_INFINITY"

    def __add__(self, other):
        return self

    __radd__ = __add__


MINUS_INFINITY = _MinusInfinity()

Degree = Union[int, _MinusInfinity]


# ---------------------------------------------------------------------------
# monomial helpers


def monomial_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def monomial_divides(a: Monomial, b: Monomial) -> bool:
    """True iff a | b componentwise."""
    return all(x <= y for x, y in zip(a, b))


def monomial_div(a: Monomial, b: Monomial) -> Monomial:
    """a / b; caller must ensure b | a."""
    return tuple(x - y for x, y in zip(a, b))


def monomial_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


def monomial_gcd(a: Monomial, b: Monomial) -> Monomial:
    return tuple(min(x, y) for x, y in zip(a, b))


def monomial_degree(a: Monomial) -> int:
    return sum(a)


@dataclass(frozen=True)
class MonomialOrder:
    """A graded monomial order: total degree first, then a tie-break.

    ``kind`` is ``"grevlex"`` (graded reverse lexicographic) or ``"grlex"``
    (graded lexicographic). ``permutation`` optionally reorders variable
    significance: ``permutation[i]`` is the index of the i-th most significant
    variable. Both kinds refine total degree and are multiplicative.
    """

    kind: str = "grevlex"
    permutation: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.kind not in ("grevlex", "grlex"):
            raise ValueError(f"unknown monomial order kind: {self.kind!r}")

    def key(self, m: Monomial):
        """Sort key: key(a) < key(b) iff a < b in this order."""
        if self.permutation is not None:
            m = tuple(m[i] for i in self.permutation)
        if self.kind == "grevlex":
            return (sum(m), tuple(-e for e in reversed(m)))
        return (sum(m), m)

    def max(self, monomials: Iterable[Monomial]) -> Monomial:
        return max(monomials, key=self.key)


GREVLEX = MonomialOrder("grevlex")
GRLEX = MonomialOrder("grlex")


# ---------------------------------------------------------------------------
# the polynomial type


class Polynomial:
    """Immutable sparse polynomial over Q.

    ``ring`` is the ordered tuple of variable names; ``terms`` maps exponent
    tuples to nonzero Fractions. Two polynomials are equal iff they have the
    same ring and the same term map.
    """

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: Sequence[str], terms: Mapping[Monomial, Scalar] | None = None):
        ring = tuple(ring)
        clean: dict[Monomial, Fraction] = {}
        if terms:
            n = len(ring)
            for mono, coef in terms.items():
                coef = Fraction(coef)
                if coef == 0:
                    continue
                mono = tuple(mono)
                if len(mono) != n:
                    raise ValueError(f"exponent tuple {mono} has wrong length for ring {ring}")
                if any(e < 0 for e in mono):
                    raise ValueError(f"negative exponent in {mono}")
                clean[mono] = clean.get(mono, Fraction(0)) + coef
                if clean[mono] == 0:
                    del clean[mono]
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("Polynomial is immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, ring: Sequence[str]) -> Polynomial:
        return cls(ring, {})

    @classmethod
    def constant(cls, ring: Sequence[str], c: Scalar) -> Polynomial:
        ring = tuple(ring)
        return cls(ring, {(0,) * len(ring): Fraction(c)})

    @classmethod
    def one(cls, ring: Sequence[str]) -> Polynomial:
        return cls.constant(ring, 1)

    @classmethod
    def variable(cls, ring: Sequence[str], name: str) -> Polynomial:
        ring = tuple(ring)
        i = ring.index(name)
        mono = tuple(1 if j == i else 0 for j in range(len(ring)))
        return cls(ring, {mono: Fraction(1)})

    @classmethod
    def monomial(cls, ring: Sequence[str], exponents: Monomial, coef: Scalar = 1) -> Polynomial:
        return cls(ring, {tuple(exponents): Fraction(coef)})

    # -- basic queries -----------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(sum(m) == 0 for m in self.terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError("not a constant polynomial")
        return next(iter(self.terms.values())) if self.terms else Fraction(0)

    def degree(self) -> Degree:
        if not self.terms:
            return MINUS_INFINITY
        return max(sum(m) for m in self.terms)

    def degree_in(self, name: str) -> Degree:
        if not self.terms:
            return MINUS_INFINITY
        i = self.ring.index(name)
        return max(m[i] for m in self.terms)

    def is_homogeneous(self) -> bool:
        degs = {sum(m) for m in self.terms}
        return len(degs) <= 1

    def variables_present(self) -> tuple[str, ...]:
        n = len(self.ring)
        present = [False] * n
        for m in self.terms:
            for i, e in enumerate(m):
                if e:
                    present[i] = True
        return tuple(v for i, v in enumerate(self.ring) if present[i])

    def lead_monomial(self, order: MonomialOrder = GREVLEX) -> Monomial:
        if not self.terms:
            raise ValueError("zero polynomial has no lead monomial")
        return order.max(self.terms)

    def lead_coeff(self, order: MonomialOrder = GREVLEX) -> Fraction:
        return self.terms[self.lead_monomial(order)]

    # -- arithmetic --------------------------------------------------------

    def _check_ring(self, other: Polynomial) -> None:
        if self.ring != other.ring:
            raise RingMismatchError(f"rings differ: {self.ring} vs {other.ring}")

    def _coerce(self, other) -> Polynomial:
        if isinstance(other, Polynomial):
            self._check_ring(other)
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial.constant(self.ring, other)
        return NotImplemented

    def __add__(self, other) -> Polynomial:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        terms = dict(self.terms)
        for m, c in other.terms.items():
            s = terms.get(m, Fraction(0)) + c
            if s:
                terms[m] = s
            else:
                terms.pop(m, None)
        return Polynomial(self.ring, terms)

    __radd__ = __add__

    def __neg__(self) -> Polynomial:
        return Polynomial(self.ring, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other) -> Polynomial:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> Polynomial:
        return (-self) + other

    def __mul__(self, other) -> Polynomial:
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            if c == 0:
                return Polynomial.zero(self.ring)
            return Polynomial(self.ring, {m: v * c for m, v in self.terms.items()})
        if not isinstance(other, Polynomial):
            return NotImplemented
        self._check_ring(other)
        prod: dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = monomial_mul(m1, m2)
                s = prod.get(m, Fraction(0)) + c1 * c2
                if s:
                    prod[m] = s
                else:
                    prod.pop(m, None)
        return Polynomial(self.ring, prod)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> Polynomial:
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = Polynomial.one(self.ring)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base if k > 1 else base
            k >>= 1
        return result

    def __truediv__(self, other) -> Polynomial:
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            if c == 0:
                raise ZeroDivisionError("division of polynomial by zero")
            return self * (1 / c)
        return NotImplemented

    def __eq__(self, other) -> bool:
        if not isinstance(other, Polynomial):
            if isinstance(other, (int, Fraction)):
                return self.is_constant() and self.constant_value() == other
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self) -> int:
        h = object.__getattribute__(self, "_hash")
        if h is None:
            h = hash((self.ring, frozenset(self.terms.items())))
            object.__setattr__(self, "_hash", h)
        return h

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __repr__(self) -> str:
        return f"Polynomial({'+'.join(sorted(str(t) for t in self.terms)) or '0'!r})"

    def __str__(self) -> str:
        return self.to_string()

    # -- calculus and substitution ----------------------------------------

    def partial(self, name: str) -> Polynomial:
        """Partial derivative with respect to the named variable."""
        i = self.ring.index(name)
        terms: dict[Monomial, Fraction] = {}
        for m, c in self.terms.items():
            e = m[i]
            if e == 0:
                continue
            dm = m[:i] + (e - 1,) + m[i + 1 :]
            terms[dm] = terms.get(dm, Fraction(0)) + c * e
        return Polynomial(self.ring, terms)

    def evaluate(self, values: Sequence) -> object:
        """Evaluate at a point; works for Fraction, complex or Polynomial values."""
        if len(values) != len(self.ring):
            raise ValueError("value count must match variable count")
        maxdeg = [0] * len(self.ring)
        for m in self.terms:
            for i, e in enumerate(m):
                if e > maxdeg[i]:
                    maxdeg[i] = e
        powers = []
        for i, v in enumerate(values):
            ps = [1]
            for _ in range(maxdeg[i]):
                ps.append(ps[-1] * v)
            powers.append(ps)
        total = 0
        for m, c in self.terms.items():
            term = c
            for i, e in enumerate(m):
                if e:
                    term = term * powers[i][e]
            total = total + term
        return total

    def substitute(self, name: str, value: Scalar) -> Polynomial:
        """Substitute a rational constant for one variable, keeping the ring."""
        i = self.ring.index(name)
        value = Fraction(value)
        terms: dict[Monomial, Fraction] = {}
        for m, c in self.terms.items():
            nm = m[:i] + (0,) + m[i + 1 :]
            nc = c * value ** m[i]
            s = terms.get(nm, Fraction(0)) + nc
            if s:
                terms[nm] = s
            else:
                terms.pop(nm, None)
        return Polynomial(self.ring, terms)

    def drop_variable(self, name: str) -> Polynomial:
        """Remove a variable that does not occur from the ring."""
        i = self.ring.index(name)
        if any(m[i] for m in self.terms):
            raise ValueError(f"variable {name} still occurs")
        ring = self.ring[:i] + self.ring[i + 1 :]
        return Polynomial(ring, {m[:i] + m[i + 1 :]: c for m, c in self.terms.items()})

    def extend_ring(self, ring: Sequence[str]) -> Polynomial:
        """Re-embed into a larger ring containing all current variables."""
        ring = tuple(ring)
        idx = [ring.index(v) for v in self.ring]
        n = len(ring)
        terms = {}
        for m, c in self.terms.items():
            nm = [0] * n
            for j, e in zip(idx, m):
                nm[j] = e
            terms[tuple(nm)] = c
        return Polynomial(ring, terms)

    # -- forms -------------------------------------------------------------

    def top_form(self) -> Polynomial:
        """Homogeneous part of top degree."""
        if self.is_zero():
            raise ConstantInputError("top form of the zero polynomial is undefined")
        d = self.degree()
        return Polynomial(self.ring, {m: c for m, c in self.terms.items() if sum(m) == d})

    def homogenize(self, name: str) -> Polynomial:
        """Pad every term with a power of a fresh variable up to the top degree.

        Setting the new variable to 1 recovers the input; setting it to 0
        yields the top form.
        """
        if name in self.ring:
            raise ValueError(f"variable {name} already in ring")
        if self.is_zero():
            return Polynomial.zero(self.ring + (name,))
        d = self.degree()
        ring = self.ring + (name,)
        return Polynomial(ring, {m + (d - sum(m),): c for m, c in self.terms.items()})

    # -- normalization -----------------------------------------------------

    def content(self) -> Fraction:
        """Positive rational c with self/c integer-coefficient and primitive."""
        if self.is_zero():
            return Fraction(0)
        from math import gcd, lcm

        num = 0
        den = 1
        for c in self.terms.values():
            num = gcd(num, abs(c.numerator))
            den = lcm(den, c.denominator)
        return Fraction(num, den)

    def primitive_part(self) -> Polynomial:
        if self.is_zero():
            return self
        return self / self.content()

    def normalized(self, order: MonomialOrder = GREVLEX) -> Polynomial:
        """Primitive part with positive leading coefficient under ``order``."""
        if self.is_zero():
            return self
        p = self.primitive_part()
        if p.lead_coeff(order) < 0:
            p = -p
        return p

    def monic(self, order: MonomialOrder = GREVLEX) -> Polynomial:
        if self.is_zero():
            return self
        return self / self.lead_coeff(order)

    # -- printing ----------------------------------------------------------

    def to_string(self) -> str:
        """Canonical text form, parseable by :mod:`coneinv.parse`."""
        if not self.terms:
            return "0"
        monos = sorted(self.terms, key=GREVLEX.key, reverse=True)
        parts: list[tuple[str, str]] = []
        for m in monos:
            c = self.terms[m]
            factors = []
            for name, e in zip(self.ring, m):
                if e == 1:
                    factors.append(name)
                elif e > 1:
                    factors.append(f"{name}^{e}")
            abs_c = abs(c)
            if not factors:
                body = str(abs_c)
            elif abs_c == 1:
                body = "*".join(factors)
            else:
                body = str(abs_c) + "*" + "*".join(factors)
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        first_sign, first_body = parts[0]
        out = ("-" if first_sign == "-" else "") + first_body
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out


# ---------------------------------------------------------------------------
# module-level operations


def add(f: Polynomial, g: Polynomial) -> Polynomial:
    return f + g


def sub(f: Polynomial, g: Polynomial) -> Polynomial:
    return f - g


def mul(f: Polynomial, g: Polynomial) -> Polynomial:
    return f * g


def exact_divide(f: Polynomial, g: Polynomial) -> Polynomial:
    """Quotient q with q*g == f; raises InexactDivisionError otherwise."""
    f._check_ring(g)
    if g.is_zero():
        raise InexactDivisionError("division by the zero polynomial")
    if f.is_zero():
        return Polynomial.zero(f.ring)
    order = GREVLEX
    lm_g = g.lead_monomial(order)
    lc_g = g.terms[lm_g]
    quo: dict[Monomial, Fraction] = {}
    rem = dict(f.terms)
    while rem:
        m = order.max(rem)
        if not monomial_divides(lm_g, m):
            raise InexactDivisionError("divisor does not divide exactly")
        qm = monomial_div(m, lm_g)
        qc = rem[m] / lc_g
        quo[qm] = quo.get(qm, Fraction(0)) + qc
        for gm, gc in g.terms.items():
            t = monomial_mul(qm, gm)
            s = rem.get(t, Fraction(0)) - qc * gc
            if s:
                rem[t] = s
            else:
                rem.pop(t, None)
    return Polynomial(f.ring, quo)


def divides(g: Polynomial, f: Polynomial) -> bool:
    """True iff g divides f exactly."""
    try:
        exact_divide(f, g)
        return True
    except InexactDivisionError:
        return False


def arith(f: Polynomial, g: Polynomial, op: str) -> Polynomial:
    """Dispatch table for the four exact ring operations."""
    if op == "add":
        return f + g
    if op == "sub":
        return f - g
    if op == "mul":
        return f * g
    if op == "exact-divide":
        return exact_divide(f, g)
    raise ValueError(f"unknown op {op!r}")


def top_form(f: Polynomial) -> Polynomial:
    return f.top_form()


def homogenize(f: Polynomial, name: str) -> Polynomial:
    return f.homogenize(name)


# ---------------------------------------------------------------------------
# gcd and squarefree machinery


def _monomial_content(f: Polynomial) -> Monomial:
    it = iter(f.terms)
    m = next(it)
    for other in it:
        m = monomial_gcd(m, other)
    return m


def _coeffs_in_var(f: Polynomial, i: int) -> dict[int, Polynomial]:
    """View f as univariate in variable i with coefficients in the same ring."""
    coeffs: dict[int, dict[Monomial, Fraction]] = {}
    for m, c in f.terms.items():
        e = m[i]
        rest = m[:i] + (0,) + m[i + 1 :]
        coeffs.setdefault(e, {})[rest] = c
    return {e: Polynomial(f.ring, t) for e, t in coeffs.items()}


def _from_coeffs_in_var(ring, i: int, coeffs: dict[int, Polynomial]) -> Polynomial:
    terms: dict[Monomial, Fraction] = {}
    for e, p in coeffs.items():
        for m, c in p.terms.items():
            nm = m[:i] + (e,) + m[i + 1 :]
            terms[nm] = terms.get(nm, Fraction(0)) + c
    return Polynomial(ring, terms)


def _pseudo_rem(a: Polynomial, b: Polynomial, i: int) -> Polynomial:
    """Pseudo-remainder of a by b, both univariate in variable i."""
    cb = _coeffs_in_var(b, i)
    deg_b = max(cb)
    lc_b = cb[deg_b]
    r = a
    while not r.is_zero():
        cr = _coeffs_in_var(r, i)
        deg_r = max(cr)
        if deg_r < deg_b:
            break
        lc_r = cr[deg_r]
        shift = Polynomial.monomial(
            a.ring, tuple(deg_r - deg_b if j == i else 0 for j in range(len(a.ring)))
        )
        r = lc_b * r - lc_r * shift * b
    return r


def _content_in_var(f: Polynomial, i: int) -> Polynomial:
    coeffs = list(_coeffs_in_var(f, i).values())
    g = coeffs[0]
    for c in coeffs[1:]:
        g = gcd(g, c)
        if g.is_constant():
            break
    return g.normalized()


def gcd(f: Polynomial, g: Polynomial) -> Polynomial:
    """Greatest common divisor, normalized primitive with positive lead.

    Recursive content/primitive-part reduction: pick a shared variable, strip
    contents, run a primitive pseudo-remainder sequence in that variable, and
    recombine. gcd(f, 0) is the normalization of f.
    """
    f._check_ring(g)
    if f.is_zero():
        return g.normalized()
    if g.is_zero():
        return f.normalized()
    if f.is_constant() or g.is_constant():
        return Polynomial.one(f.ring)

    # monomial content comes out first; only the shared part survives
    mf = _monomial_content(f)
    mg = _monomial_content(g)
    if any(mf) or any(mg):
        shared = monomial_gcd(mf, mg)
        f = exact_divide(f, Polynomial.monomial(f.ring, mf))
        g = exact_divide(g, Polynomial.monomial(g.ring, mg))
        inner = gcd(f, g)
        return (inner * Polynomial.monomial(f.ring, shared)).normalized()

    vars_f = set(f.variables_present())
    vars_g = set(g.variables_present())
    common = vars_f & vars_g
    if not common:
        return Polynomial.one(f.ring)

    # cheap one-sided checks before the PRS
    if divides(f, g):
        return f.normalized()
    if divides(g, f):
        return g.normalized()

    name = min(common, key=lambda v: min(f.degree_in(v), g.degree_in(v)))
    i = f.ring.index(name)

    cont_f = _content_in_var(f, i)
    cont_g = _content_in_var(g, i)
    a = exact_divide(f, cont_f)
    b = exact_divide(g, cont_g)
    cont = gcd(cont_f, cont_g)

    if a.degree_in(name) < b.degree_in(name):
        a, b = b, a
    while True:
        r = _pseudo_rem(a, b, i)
        if r.is_zero():
            h = exact_divide(b, _content_in_var(b, i))
            break
        if r.degree_in(name) == 0:
            h = Polynomial.one(f.ring)
            break
        r = exact_divide(r, _content_in_var(r, i))
        a, b = b, r
    return (cont * h).normalized()


def squarefree_part(f: Polynomial, _seed: int = 1) -> Polynomial:
    """Product of the distinct irreducible factors of f, normalized.

    A squarefree input is recognized first through an exact certificate:
    restrict f to a rational line; if the restriction keeps top degree and is
    squarefree as a univariate polynomial, f itself is squarefree and is
    returned as-is. Otherwise the full decomposition runs.
    """
    if f.is_zero():
        raise ConstantInputError("squarefree part of zero is undefined")
    if f.is_constant():
        return Polynomial.one(f.ring)
    if _squarefree_certificate(f, _seed):
        return f.normalized()
    return _prod([p for p, _ in squarefree_decomposition(f)], f.ring).normalized()


def _prod(polys: Iterable[Polynomial], ring) -> Polynomial:
    out = Polynomial.one(ring)
    for p in polys:
        out = out * p
    return out


def _univariate_line_restriction(f: Polynomial, direction: list[int], base: list[int]) -> list[Fraction]:
    """Coefficients (low to high) of f(base + s*direction) as univariate in s."""
    n = len(f.ring)
    out = [Fraction(0)] * (max(sum(m) for m in f.terms) + 1)
    for m, c in f.terms.items():
        poly = [c]
        for i in range(n):
            lin = [Fraction(base[i]), Fraction(direction[i])]
            for _ in range(m[i]):
                new = [Fraction(0)] * (len(poly) + 1)
                for j, a in enumerate(poly):
                    new[j] += a * lin[0]
                    new[j + 1] += a * lin[1]
                poly = new
        for j, a in enumerate(poly):
            out[j] += a
    while out and out[-1] == 0:
        out.pop()
    return out


def _uni_gcd_degree(a: list[Fraction], b: list[Fraction]) -> int:
    """Degree of gcd of two univariate rational polynomials (Euclid)."""
    a = a[:]
    b = b[:]
    while b:
        # remainder of a by b
        while len(a) >= len(b) and a:
            q = a[-1] / b[-1]
            shift = len(a) - len(b)
            for j in range(len(b)):
                a[shift + j] -= q * b[j]
            while a and a[-1] == 0:
                a.pop()
        a, b = b, a
    return len(a) - 1 if a else -1


def _squarefree_certificate(f: Polynomial, seed: int) -> bool:
    """Exact one-sided test: True guarantees f is squarefree."""
    d = f.degree()
    import random

    rng = random.Random(seed * 10007 + len(f.terms))
    for _ in range(3):
        direction = [rng.randint(1, 9) for _ in f.ring]
        base = [rng.randint(-9, 9) for _ in f.ring]
        u = _univariate_line_restriction(f, direction, base)
        if len(u) - 1 != d:
            continue
        du = [c * (j + 1) for j, c in enumerate(u[1:])]
        if _uni_gcd_degree(u, du) == 0:
            return True
    return False


def squarefree_decomposition(f: Polynomial) -> list[tuple[Polynomial, int]]:
    """Write f = c * prod(factor^exponent) with squarefree, pairwise coprime factors.

    Characteristic-zero decomposition: the gcd of f with all its partials
    collects every factor with multiplicity lowered by one; peeling that
    repeatedly separates the multiplicity layers. Factors come out primitive
    with positive lead, sorted by (exponent, text).
    """
    if f.is_zero() or f.is_constant():
        raise ConstantInputError("squarefree decomposition needs a non-constant polynomial")
    F = f.normalized()
    g = F
    for name in F.variables_present():
        g = gcd(g, F.partial(name))
        if g.is_constant():
            break
    w = exact_divide(F, g).normalized()  # product of the distinct factors
    out: list[tuple[Polynomial, int]] = []
    i = 1
    while not w.is_constant():
        y = gcd(w, g)
        piece = exact_divide(w, y).normalized()
        if not piece.is_constant():
            out.append((piece, i))
        w = y
        if not g.is_constant():
            g = exact_divide(g, y).normalized()
        i += 1
    out.sort(key=lambda t: (t[1], t[0].to_string()))
    return out


# ---------------------------------------------------------------------------
# linear changes of coordinates


def rational_matrix_inverse(M: Sequence[Sequence[Scalar]]) -> list[list[Fraction]] | None:
    """Exact inverse of a square rational matrix, or None if singular."""
    n = len(M)
    A = [[Fraction(M[i][j]) for j in range(n)] for i in range(n)]
    I = [[Fraction(1 if i == j else 0) for j in range(n)] for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if A[r][col] != 0), None)
        if piv is None:
            return None
        A[col], A[piv] = A[piv], A[col]
        I[col], I[piv] = I[piv], I[col]
        inv = 1 / A[col][col]
        A[col] = [a * inv for a in A[col]]
        I[col] = [a * inv for a in I[col]]
        for r in range(n):
            if r != col and A[r][col] != 0:
                factor = A[r][col]
                A[r] = [a - factor * b for a, b in zip(A[r], A[col])]
                I[r] = [a - factor * b for a, b in zip(I[r], I[col])]
    return I


def substitute_linear(f: Polynomial, M: Sequence[Sequence[Scalar]]) -> Polynomial:
    """Compose f with the linear change x -> M x. M must be invertible."""
    n = len(f.ring)
    if len(M) != n or any(len(row) != n for row in M):
        raise ValueError("matrix size must match variable count")
    if rational_matrix_inverse(M) is None:
        raise SingularMatrixError("coordinate change matrix is singular")
    images = []
    for i in range(n):
        terms = {}
        for j in range(n):
            c = Fraction(M[i][j])
            if c:
                mono = tuple(1 if k == j else 0 for k in range(n))
                terms[mono] = c
        images.append(Polynomial(f.ring, terms))
    deg = f.degree()
    if deg is MINUS_INFINITY:
        return f
    powers = []
    for i in range(n):
        maxe = max((m[i] for m in f.terms), default=0)
        ps = [Polynomial.one(f.ring)]
        for _ in range(maxe):
            ps.append(ps[-1] * images[i])
        powers.append(ps)
    out = Polynomial.zero(f.ring)
    for m, c in f.terms.items():
        term = Polynomial.constant(f.ring, c)
        for i, e in enumerate(m):
            if e:
                term = term * powers[i][e]
        out = out + term
    return out


def random_invertible_matrix(n: int, rng, bound: int = 5) -> list[list[Fraction]]:
    """Seeded random invertible rational matrix with small integer entries."""
    while True:
        M = [[Fraction(rng.randint(-bound, bound)) for _ in range(n)] for _ in range(n)]
        if rational_matrix_inverse(M) is not None:
            return M
