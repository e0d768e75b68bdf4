"""Exact factorization over Q: univariate Zassenhaus, and homogeneous forms.

Univariate polynomials over the integers factor through the classical chain
Berlekamp (mod a small good prime) -> quadratic Hensel lifting -> subset
recombination with the Mignotte bound. Homogeneous forms in two variables
reduce to the univariate case by dehomogenization; forms in three or more
variables go through a Kronecker substitution when the resulting univariate
degree stays within budget, and are otherwise left unsplit (the caller marks
them unverified).

Integer polynomials are lists of ints, lowest power first, no trailing zeros.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from math import ceil, gcd, isqrt, log2
from typing import Sequence

from .errors import FactorBudgetError, InexactDivisionError, InternalCheckError
from .poly import Polynomial, exact_divide

BIVARIATE_CAP = 30  # max univariate degree for the dehomogenized 2-variable path
KRONECKER_CAP = 40  # max univariate degree for the Kronecker substitution path
MODULAR_FACTOR_CAP = 14  # beyond this the recombination search is abandoned


# ---------------------------------------------------------------------------
# integer polynomial helpers (dense lists, lowest power first)


def z_trim(p: list[int]) -> list[int]:
    while p and p[-1] == 0:
        p.pop()
    return p


def z_add(a: Sequence[int], b: Sequence[int]) -> list[int]:
    n = max(len(a), len(b))
    return z_trim([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)])


def z_sub(a: Sequence[int], b: Sequence[int]) -> list[int]:
    n = max(len(a), len(b))
    return z_trim([(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)])


def z_mul(a: Sequence[int], b: Sequence[int]) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return z_trim(out)


def z_mul_scalar(a: Sequence[int], c: int) -> list[int]:
    return z_trim([x * c for x in a])


def z_content(a: Sequence[int]) -> int:
    g = 0
    for x in a:
        g = gcd(g, abs(x))
    return g


def z_primitive(a: Sequence[int]) -> list[int]:
    a = z_trim(list(a))
    if not a:
        return []
    c = z_content(a)
    out = [x // c for x in a]
    if out[-1] < 0:
        out = [-x for x in out]
    return out


def z_derivative(a: Sequence[int]) -> list[int]:
    return z_trim([i * a[i] for i in range(1, len(a))])


def z_eval(a: Sequence[int], x):
    out = 0
    for c in reversed(a):
        out = out * x + c
    return out


def _sym_mod(x: int, m: int) -> int:
    x %= m
    if x > m // 2:
        x -= m
    return x


def z_trunc(a: Sequence[int], m: int) -> list[int]:
    return z_trim([_sym_mod(x, m) for x in a])


def z_divmod_mod(a: Sequence[int], b: Sequence[int], m: int) -> tuple[list[int], list[int]]:
    """Division with remainder mod m; b must be monic mod m."""
    a = [x % m for x in a]
    q = [0] * max(0, len(a) - len(b) + 1)
    db = len(b) - 1
    for i in range(len(a) - 1, db - 1, -1):
        c = a[i] % m
        if c:
            q[i - db] = c
            for j in range(db + 1):
                a[i - db + j] = (a[i - db + j] - c * b[j]) % m
    return z_trim([x % m for x in q]), z_trim(a[:db])


def z_exact_div(a: Sequence[int], b: Sequence[int]) -> list[int] | None:
    """Exact quotient of integer polynomials, or None when b does not divide a."""
    a = [Fraction(x) for x in a]
    if not b:
        return None
    q = [Fraction(0)] * max(0, len(a) - len(b) + 1)
    db = len(b) - 1
    lc = Fraction(b[-1])
    for i in range(len(a) - 1, db - 1, -1):
        if a[i] == 0:
            continue
        if i - db < 0:
            return None
        c = a[i] / lc
        q[i - db] = c
        for j in range(db + 1):
            a[i - db + j] -= c * b[j]
    if any(x != 0 for x in a):
        return None
    if any(x.denominator != 1 for x in q):
        return None
    return z_trim([int(x) for x in q])


def q_gcd(a: Sequence[Fraction], b: Sequence[Fraction]) -> list[int]:
    """Primitive gcd of univariate rational polynomials (Euclid over Q)."""
    a = [Fraction(x) for x in a]
    b = [Fraction(x) for x in b]
    while b and any(b):
        # remainder of a by b
        db = len(b) - 1
        while len(a) - 1 >= db and any(a):
            c = a[-1] / b[-1]
            shift = len(a) - len(b)
            for j in range(len(b)):
                a[shift + j] -= c * b[j]
            while a and a[-1] == 0:
                a.pop()
        a, b = b, a
        while b and b[-1] == 0:
            b.pop()
    if not a:
        return []
    den = 1
    for x in a:
        den = den * x.denominator // gcd(den, x.denominator)
    return z_primitive([int(x * den) for x in a])


# ---------------------------------------------------------------------------
# arithmetic mod p


def gf_trim(a: list[int], p: int) -> list[int]:
    a = [x % p for x in a]
    while a and a[-1] == 0:
        a.pop()
    return a


def gf_mul(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return gf_trim(out, p)


def gf_divmod(a: Sequence[int], b: Sequence[int], p: int) -> tuple[list[int], list[int]]:
    a = [x % p for x in a]
    b = gf_trim(list(b), p)
    if not b:
        raise ZeroDivisionError("gf division by zero")
    inv = pow(b[-1], -1, p)
    db = len(b) - 1
    q = [0] * max(0, len(a) - db)
    for i in range(len(a) - 1, db - 1, -1):
        c = (a[i] * inv) % p
        if c:
            q[i - db] = c
            for j in range(db + 1):
                a[i - db + j] = (a[i - db + j] - c * b[j]) % p
    return gf_trim(q, p), gf_trim(a[:db], p)


def gf_monic(a: Sequence[int], p: int) -> list[int]:
    a = gf_trim(list(a), p)
    if not a:
        return a
    inv = pow(a[-1], -1, p)
    return gf_trim([x * inv for x in a], p)


def gf_gcd(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    a = gf_trim(list(a), p)
    b = gf_trim(list(b), p)
    while b:
        _, r = gf_divmod(a, b, p)
        a, b = b, r
    return gf_monic(a, p)


def gf_gcdex(a: Sequence[int], b: Sequence[int], p: int) -> tuple[list[int], list[int], list[int]]:
    """Extended Euclid mod p: returns (s, t, g) with s*a + t*b = g, g monic."""
    r0, r1 = gf_trim(list(a), p), gf_trim(list(b), p)
    s0, s1 = [1], []
    t0, t1 = [], [1]
    while r1:
        q, r = gf_divmod(r0, r1, p)
        r0, r1 = r1, r
        s0, s1 = s1, gf_trim(z_sub(s0, gf_mul(q, s1, p)), p)
        t0, t1 = t1, gf_trim(z_sub(t0, gf_mul(q, t1, p)), p)
    if not r0:
        raise ZeroDivisionError("gcdex of zero polynomials")
    inv = pow(r0[-1], -1, p)
    return (
        gf_trim([x * inv for x in s0], p),
        gf_trim([x * inv for x in t0], p),
        gf_monic(r0, p),
    )


def gf_pow_mod(base: Sequence[int], e: int, mod: Sequence[int], p: int) -> list[int]:
    result = [1]
    b = gf_divmod(base, mod, p)[1]
    while e:
        if e & 1:
            result = gf_divmod(gf_mul(result, b, p), mod, p)[1]
        b = gf_divmod(gf_mul(b, b, p), mod, p)[1]
        e >>= 1
    return result


def _gf_nullspace(rows: list[list[int]], p: int) -> list[list[int]]:
    """Basis of the nullspace {v : v M = 0} for the matrix given by rows."""
    n = len(rows)
    # transpose so we solve M^T v^T = 0 by column reduction
    M = [[rows[i][j] % p for i in range(n)] for j in range(n)]
    pivots: dict[int, int] = {}  # column -> pivot row
    row = 0
    for col in range(n):
        piv = next((r for r in range(row, n) if M[r][col]), None)
        if piv is None:
            continue
        M[row], M[piv] = M[piv], M[row]
        inv = pow(M[row][col], -1, p)
        M[row] = [(x * inv) % p for x in M[row]]
        for r in range(n):
            if r != row and M[r][col]:
                f = M[r][col]
                M[r] = [(x - f * y) % p for x, y in zip(M[r], M[row])]
        pivots[col] = row
        row += 1
    basis = []
    free = [c for c in range(n) if c not in pivots]
    for fc in free:
        v = [0] * n
        v[fc] = 1
        for col, r in pivots.items():
            v[col] = (-M[r][fc]) % p
        basis.append(v)
    return basis


def berlekamp_factor_count(f: Sequence[int], p: int) -> int:
    """Number of irreducible factors of a monic squarefree f mod p."""
    return len(_berlekamp_basis(f, p))


def _berlekamp_basis(f: Sequence[int], p: int) -> list[list[int]]:
    n = len(f) - 1
    xp = gf_pow_mod([0, 1], p, f, p)
    rows = []
    cur = [1]
    for i in range(n):
        padded = list(cur) + [0] * (n - len(cur))
        padded[i] = (padded[i] - 1) % p  # subtract identity
        rows.append(padded)
        cur = gf_divmod(gf_mul(cur, xp, p), f, p)[1]
    return _gf_nullspace(rows, p)


def berlekamp(f: Sequence[int], p: int) -> list[list[int]]:
    """Irreducible monic factors of a monic squarefree polynomial mod p."""
    f = gf_monic(f, p)
    basis = _berlekamp_basis(f, p)
    r = len(basis)
    factors = [f]
    if r == 1:
        return factors
    for v in basis:
        vpoly = gf_trim(list(v), p)
        if len(vpoly) <= 1:
            continue  # constants never split anything
        next_factors = []
        for u in factors:
            if len(u) - 1 <= 1:
                next_factors.append(u)
                continue
            pieces = [u]
            for s in range(p):
                shifted = gf_trim(z_sub(vpoly, [s]), p)
                new_pieces = []
                for w in pieces:
                    g = gf_gcd(w, shifted, p)
                    if 0 < len(g) - 1 < len(w) - 1:
                        new_pieces.append(g)
                        new_pieces.append(gf_divmod(w, g, p)[0])
                    else:
                        new_pieces.append(w)
                pieces = new_pieces
            next_factors.extend(pieces)
        factors = next_factors
        if len(factors) == r:
            break
    return [gf_monic(u, p) for u in factors]


# ---------------------------------------------------------------------------
# Hensel lifting


def _hensel_step(m, f, g, h, s, t):
    """One quadratic lift: from f = g h (mod m) to the same mod m**2.

    Needs s g + t h = 1 (mod m) and h monic; returns (G, H, S, T) with the
    analogous relations mod m**2 and H monic.
    """
    M = m * m
    e = z_trunc(z_sub(f, z_mul(g, h)), M)
    q, r = z_divmod_mod(z_mul(s, e), h, M)
    q = z_trunc(q, M)
    r = z_trunc(r, M)
    G = z_trunc(z_add(z_add(g, z_mul(t, e)), z_mul(q, g)), M)
    H = z_trunc(z_add(h, r), M)
    b = z_trunc(z_sub(z_add(z_mul(s, G), z_mul(t, H)), [1]), M)
    c, d = z_divmod_mod(z_mul(s, b), H, M)
    c = z_trunc(c, M)
    d = z_trunc(d, M)
    S = z_trunc(z_sub(s, d), M)
    T = z_trunc(z_sub(z_sub(t, z_mul(t, b)), z_mul(c, G)), M)
    return G, H, S, T


def hensel_lift(p: int, f: list[int], factors: list[list[int]], l: int) -> list[list[int]]:
    """Lift monic factors of f mod p to monic factors mod p**l.

    The invariant is f = lc(f) * prod(lifted) (mod p**l), all lifted factors
    monic. Divide and conquer over the factor list, one quadratic ladder per
    split.
    """
    r = len(factors)
    lc = f[-1]
    if r == 1:
        inv = pow(lc % p**l, -1, p**l)
        return [z_trunc(z_mul_scalar(f, inv), p**l)]
    k = r // 2
    d = ceil(log2(l)) if l > 1 else 1
    g = [lc % p]
    for fac in factors[:k]:
        g = gf_mul(g, fac, p)
    h = [1]
    for fac in factors[k:]:
        h = gf_mul(h, fac, p)
    s, t, one = gf_gcdex(g, h, p)
    if len(one) != 1:
        raise InternalCheckError("modular factors are not coprime")
    g = z_trunc(g, p)
    h = z_trunc(h, p)
    s = z_trunc(s, p)
    t = z_trunc(t, p)
    m = p
    for _ in range(d):
        g, h, s, t = _hensel_step(m, f, g, h, s, t)
        m = m * m
    return hensel_lift(p, g, factors[:k], l) + hensel_lift(p, h, factors[k:], l)


# ---------------------------------------------------------------------------
# Zassenhaus over Z


def _small_primes():
    yield from (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47)
    n = 49
    while n < 5000:
        if all(n % q for q in range(2, isqrt(n) + 1)):
            yield n
        n += 2


def factor_squarefree_z(f: list[int]) -> list[list[int]]:
    """Irreducible factors over Z of a primitive squarefree integer polynomial."""
    f = z_primitive(f)
    n = len(f) - 1
    if n <= 1:
        return [f] if n == 1 else []
    lc = f[-1]
    A = max(abs(c) for c in f)

    candidates = []
    for p in _small_primes():
        if lc % p == 0:
            continue
        fp = gf_monic(f, p)
        if len(fp) - 1 != n:
            continue
        if len(gf_gcd(fp, z_derivative(fp), p)) - 1 != 0:
            continue
        candidates.append((berlekamp_factor_count(fp, p), p))
        if len(candidates) >= 4:
            break
    if not candidates:
        raise FactorBudgetError("no usable prime found for modular factorization")
    r, p = min(candidates)
    if r == 1:
        return [f]
    if r > MODULAR_FACTOR_CAP:
        raise FactorBudgetError(f"{r} modular factors exceed the recombination budget")

    modular = berlekamp(gf_monic(f, p), p)
    B = (isqrt(n + 1) + 1) * (1 << n) * A * abs(lc)
    l = max(1, ceil((2 * B + 1).bit_length() / log2(p)))
    lifted = hensel_lift(p, f, modular, l)
    pl = p**l

    remaining = list(range(len(lifted)))
    current = f
    found: list[list[int]] = []
    s = 1
    while 2 * s <= len(remaining):
        hit = False
        for combo in combinations(remaining, s):
            cand = [current[-1]]
            for i in combo:
                cand = z_trunc(z_mul(cand, lifted[i]), pl)
            cand = z_primitive(cand)
            if not cand:
                continue
            quo = z_exact_div(current, cand)
            if quo is not None:
                found.append(cand)
                current = z_primitive(quo)
                remaining = [i for i in remaining if i not in combo]
                hit = True
                break
        if not hit:
            s += 1
    if len(current) - 1 >= 1:
        found.append(z_primitive(current))
    found.sort(key=lambda q: (len(q), q))
    return found


def factor_univariate_rational(
    coeffs: Sequence[Fraction | int],
) -> tuple[Fraction, list[tuple[list[int], int]]]:
    """Factor a univariate polynomial over Q.

    Returns (unit, factors) with unit a nonzero rational and factors a list of
    (primitive integer polynomial with positive lead, multiplicity); the
    product of unit and the factor powers reproduces the input exactly.
    """
    cs = [Fraction(c) for c in coeffs]
    while cs and cs[-1] == 0:
        cs.pop()
    if not cs:
        raise ValueError("cannot factor the zero polynomial")
    if len(cs) == 1:
        return cs[0], []
    den = 1
    for c in cs:
        den = den * c.denominator // gcd(den, c.denominator)
    zf = [int(c * den) for c in cs]
    cont = z_content(zf)
    sign = 1 if zf[-1] > 0 else -1
    zf = [x // (cont * sign) for x in zf]
    unit = Fraction(cont * sign, den)

    factors: list[tuple[list[int], int]] = []
    shift = 0
    while zf[0] == 0:
        zf = zf[1:]
        shift += 1
    if shift:
        factors.append(([0, 1], shift))

    # multiplicity layers via repeated gcd with the derivative
    g = q_gcd(zf, z_derivative(zf))
    w = z_exact_div(zf, g)
    assert w is not None
    i = 1
    while len(w) - 1 >= 1:
        y = q_gcd(w, g)
        piece = z_exact_div(w, y)
        assert piece is not None
        piece = z_primitive(piece)
        if len(piece) - 1 >= 1:
            for irr in factor_squarefree_z(piece):
                factors.append((irr, i))
        w = y
        if len(g) - 1 >= 0 and g != [1]:
            nxt = z_exact_div(g, y)
            assert nxt is not None
            g = z_primitive(nxt)
        i += 1

    # fold leftover integer unit from primitive-part normalizations
    prod = [1]
    for q, m in factors:
        for _ in range(m):
            prod = z_mul(prod, q)
    lead_ratio = Fraction(zf[-1], prod[-1])
    unit *= lead_ratio
    factors.sort(key=lambda t: (t[1], len(t[0]), t[0]))
    return unit, factors


# ---------------------------------------------------------------------------
# homogeneous forms


def _rehomogenize(g: Polynomial, var: str, target_degree: int) -> Polynomial:
    idx = g.ring.index(var)
    terms = {}
    for m, c in g.terms.items():
        pad = target_degree - sum(m)
        nm = m[:idx] + (m[idx] + pad,) + m[idx + 1 :]
        terms[nm] = c
    return Polynomial(g.ring, terms)


def _poly_from_univariate(ring, a: str, b: str, coeffs: Sequence[int]) -> Polynomial:
    """Form of degree deg(coeffs) built from a univariate polynomial in a/b."""
    d = len(coeffs) - 1
    ia, ib = ring.index(a), ring.index(b)
    terms = {}
    for j, c in enumerate(coeffs):
        if c:
            m = [0] * len(ring)
            m[ia] = j
            m[ib] = d - j
            terms[tuple(m)] = Fraction(c)
    return Polynomial(ring, terms)


def _kronecker_split(P: Polynomial, positions: list[int], D: int) -> list[Polynomial]:
    """Complete factorization of P over Q through a Kronecker substitution.

    ``positions`` are the indices of the variables P actually uses; every
    per-variable degree is at most D, so exponent vectors encode uniquely in
    base D+1. Factors of P correspond to sub-multisets of the univariate
    factorization of the encoded polynomial, so enumerating sub-multisets up
    to half size and testing exact division is a complete search.
    """
    base = D + 1
    ring = P.ring

    def encode(poly: Polynomial) -> list[Fraction]:
        out: dict[int, Fraction] = {}
        for m, c in poly.terms.items():
            code = 0
            for j, pos in enumerate(positions):
                code += m[pos] * base**j
            out[code] = out.get(code, Fraction(0)) + c
        top = max(out)
        return [out.get(i, Fraction(0)) for i in range(top + 1)]

    def decode(coeffs: Sequence[int]) -> Polynomial:
        terms = {}
        for code, c in enumerate(coeffs):
            if not c:
                continue
            m = [0] * len(ring)
            rest = code
            for pos in positions:
                m[pos] = rest % base
                rest //= base
            terms[tuple(m)] = Fraction(c)
        return Polynomial(ring, terms)

    _, uni_factors = factor_univariate_rational(encode(P))
    pool: list[list[int]] = []
    for q, mult in uni_factors:
        pool.extend([q] * mult)

    result: list[Polynomial] = []
    current = P
    s = 1
    while 2 * s <= len(pool):
        hit = False
        for combo in combinations(range(len(pool)), s):
            prod = [1]
            for i in combo:
                prod = z_mul(prod, pool[i])
            cand = decode(prod).normalized()
            if cand.is_constant():
                continue
            try:
                quo = exact_divide(current, cand)
            except InexactDivisionError:
                quo = None
            if quo is not None:
                result.append(cand)
                current = quo.normalized()
                pool = [q for i, q in enumerate(pool) if i not in combo]
                hit = True
                break
        if not hit:
            s += 1
    if not current.is_constant():
        result.append(current.normalized())
    return result


def factor_form(h: Polynomial) -> tuple[list[Polynomial], bool]:
    """Split a squarefree homogeneous form into Q-irreducible factors.

    Returns (factors, verified). When verified is False the last entry may
    still be reducible over Q: the exact search was skipped because the
    degrees exceed the budget caps. Factors come back normalized and their
    product is checked against the input.
    """
    original = h.normalized()
    factors, verified = _factor_form_inner(original)
    check = Polynomial.one(h.ring)
    for f in factors:
        check = check * f
    if check.normalized() != original:
        raise InternalCheckError("form factorization does not multiply back")
    return sorted(factors, key=lambda f: f.to_string()), verified


def _factor_form_inner(h: Polynomial) -> tuple[list[Polynomial], bool]:
    from .poly import _monomial_content

    factors: list[Polynomial] = []

    # single variables dividing the form split off directly
    mc = _monomial_content(h)
    for i, e in enumerate(mc):
        if e:
            if e != 1:
                raise InternalCheckError("squarefree form with a repeated variable factor")
            factors.append(Polynomial.variable(h.ring, h.ring[i]))
    if any(mc):
        h = exact_divide(h, Polynomial.monomial(h.ring, mc)).normalized()
    if h.is_constant():
        return factors, True

    present = h.variables_present()
    if len(present) == 1:
        factors.append(h)
        return factors, True

    if len(present) == 2:
        a, b = present
        d = h.degree()
        if d > BIVARIATE_CAP:
            factors.append(h)
            return factors, False
        ia = h.ring.index(a)
        coeffs = [Fraction(0)] * (d + 1)
        for m, c in h.terms.items():
            coeffs[m[ia]] += c
        try:
            _, uni = factor_univariate_rational(coeffs)
        except FactorBudgetError:
            factors.append(h)
            return factors, False
        for q, mult in uni:
            if mult != 1:
                raise InternalCheckError("squarefree form with a repeated factor")
            factors.append(_poly_from_univariate(h.ring, a, b, q).normalized())
        return factors, True

    # three or more variables: dehomogenize and try Kronecker
    w = present[-1]
    P = h.substitute(w, 1)
    positions = [P.ring.index(v) for v in P.variables_present()]
    D = P.degree()
    base = D + 1
    code_degree = sum(
        max(m[pos] for m in P.terms) * base**j for j, pos in enumerate(positions)
    )
    if code_degree > KRONECKER_CAP:
        factors.append(h)
        return factors, False
    try:
        pieces = _kronecker_split(P, positions, D)
    except FactorBudgetError:
        factors.append(h)
        return factors, False
    for piece in pieces:
        factors.append(_rehomogenize(piece, w, piece.degree()).normalized())
    return factors, True
