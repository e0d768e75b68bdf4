"""Dimension and degree of algebraic sets from Hilbert series of lead-term ideals.

The Hilbert series of a quotient by a monomial ideal is N(t)/(1-t)^n; the
numerator N comes out of the pivot recursion

    N(I + (m)) = N(I) - t^deg(m) * N(I : m)

obtained from the exact sequence  0 -> R/(I:m) -> R/I -> R/(I+(m)) -> 0.
After cancelling every (1-t) factor of N, the remaining denominator exponent
is the Krull dimension and the numerator value at t=1 is the degree.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import EmptyVarietyError, HomogeneityError
from .groebner import (
    GroebnerBasis,
    Ideal,
    buchberger,
    certify_homogenized_basis,
    lead_term_ideal,
)
from .poly import GREVLEX, Monomial, squarefree_part


@dataclass(frozen=True)
class HilbertData:
    """Numerator of the Hilbert series plus the extracted dimension and degree.

    ``numerator`` stores N(t) as integer coefficients, lowest power first.
    ``krull_dimension`` is the affine dimension of the set the caller asked
    about (the cone itself for homogeneous input, the affine set for
    ``affine_degree``). ``degree`` is K(1) after full cancellation.
    """

    numerator: tuple[int, ...]
    krull_dimension: int
    degree: int


# -- univariate integer polynomial helpers (lists, lowest power first) ------


def _trim(p: list[int]) -> list[int]:
    while p and p[-1] == 0:
        p.pop()
    return p


def _sub_shifted(p: list[int], q: list[int], shift: int) -> list[int]:
    out = p[:] + [0] * max(0, shift + len(q) - len(p))
    for i, c in enumerate(q):
        out[shift + i] -= c
    return _trim(out)


def _eval_at_one(p: Sequence[int]) -> int:
    return sum(p)


def _divide_by_one_minus_t(p: list[int]) -> list[int]:
    """Exact quotient p / (1 - t); caller guarantees p(1) == 0."""
    out = [0] * (len(p) - 1)
    acc = 0
    for i in range(len(p) - 1):
        acc += p[i]
        out[i] = acc
    return _trim(out)


def _minimalize(monos: Sequence[Monomial]) -> list[Monomial]:
    out: list[Monomial] = []
    for m in sorted(set(monos), key=lambda m: (sum(m), m)):
        if not any(all(p[i] <= m[i] for i in range(len(m))) for p in out):
            out.append(m)
    return out


def hilbert_numerator(monomials: Sequence[Monomial]) -> list[int]:
    """Numerator N(t) of the Hilbert series of R/I for a monomial ideal I.

    The generator list is minimalized first, so the input need not be an
    antichain. The ambient variable count only enters through the denominator
    (1-t)^n, which the callers supply.
    """
    cache: dict[frozenset, tuple[int, ...]] = {}

    def recurse(gens: tuple[Monomial, ...]) -> list[int]:
        if not gens:
            return [1]
        if any(sum(m) == 0 for m in gens):
            return []  # unit ideal: zero ring
        key = frozenset(gens)
        hit = cache.get(key)
        if hit is not None:
            return list(hit)
        if len(gens) == 1:
            result = _sub_shifted([1], [1], sum(gens[0]))
        else:
            pairwise_coprime = all(
                all(not (a[i] and b[i]) for i in range(len(a)))
                for k, a in enumerate(gens)
                for b in gens[k + 1 :]
            )
            if pairwise_coprime:
                result = [1]
                for m in gens:
                    result = _sub_shifted(result, result, sum(m))
            else:
                # peel the most entangled generator
                def entanglement(m: Monomial) -> tuple:
                    overlap = sum(
                        1 for g in gens if g is not m and any(a and b for a, b in zip(g, m))
                    )
                    return (overlap, sum(m), m)

                m = max(gens, key=entanglement)
                rest = tuple(g for g in gens if g != m)
                colon = tuple(
                    _minimalize([tuple(max(g[i] - m[i], 0) for i in range(len(g))) for g in rest])
                )
                n_rest = recurse(tuple(_minimalize(rest)))
                n_colon = recurse(colon)
                result = _sub_shifted(n_rest, n_colon, sum(m))
        cache[key] = tuple(result)
        return result

    return recurse(tuple(_minimalize(monomials)))


def _dimension_degree(numerator: list[int], nvars: int) -> tuple[int, int, tuple[int, ...]]:
    """Cancel (1-t) factors; return (dimension of the quotient ring, degree, N)."""
    q = list(numerator)
    cancelled = 0
    while q and _eval_at_one(q) == 0:
        q = _divide_by_one_minus_t(q)
        cancelled += 1
    if not q:
        raise EmptyVarietyError("the ideal is the unit ideal")
    return nvars - cancelled, _eval_at_one(q), tuple(numerator)


def _set_normalized(ideal: Ideal) -> Ideal:
    """Principal ideals are replaced by their squarefree part (reduced-set convention)."""
    if ideal.is_principal():
        g = ideal.generators[0]
        if not g.is_constant():
            return Ideal.of([squarefree_part(g)])
    return ideal


def groebner_for_set(ideal: Ideal) -> GroebnerBasis:
    """Grevlex basis of the ideal after the reduced-set normalization."""
    return buchberger(_set_normalized(ideal), GREVLEX)


def dim_degree_homogeneous(ideal: Ideal) -> HilbertData:
    """Krull dimension and degree of the affine cone defined by a homogeneous ideal."""
    for g in ideal.generators:
        if not g.is_homogeneous():
            raise HomogeneityError(f"generator {g} is not homogeneous")
    basis = groebner_for_set(ideal)
    if basis.contains_one():
        raise EmptyVarietyError("the ideal is the unit ideal")
    numerator = hilbert_numerator(lead_term_ideal(basis))
    dim, degree, num = _dimension_degree(numerator, len(ideal.ring))
    return HilbertData(num, dim, degree)


def affine_degree(ideal: Ideal) -> HilbertData:
    """Degree of the projective completion of V(I), with the affine dimension.

    The grevlex basis is homogenized with a fresh variable (a certified basis
    of the homogenized ideal, by the graded-order argument); under the
    extended order the lead terms are unchanged, so the Hilbert data of the
    completion comes straight from the original lead-term ideal with the
    ambient count raised by one. The reported dimension is the affine one.
    """
    basis = groebner_for_set(ideal)
    if basis.contains_one():
        raise EmptyVarietyError("the ideal is the unit ideal")
    certify_homogenized_basis(basis)
    numerator = hilbert_numerator(lead_term_ideal(basis))
    cone_dim, degree, num = _dimension_degree(numerator, len(ideal.ring) + 1)
    return HilbertData(num, cone_dim - 1, degree)


def multiplicity_homogeneous_germ(ideal: Ideal) -> int:
    """Multiplicity at the origin of the germ of a homogeneous algebraic set."""
    return dim_degree_homogeneous(ideal).degree
