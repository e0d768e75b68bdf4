"""Tangent cones at infinity and relative multiplicities for hypersurfaces.

The cone at infinity of V(I) is cut out by the top forms of a graded
Groebner basis of I. For a hypersurface V(f) the cone components are the
squarefree factors of the top form of the squarefree part of f, and the
relative multiplicity of each component is its exponent in that top form.
The bookkeeping identity

    total degree = sum over components of (exponent * component degree)

is checked on every signature and exposed as ``verify_degree_formula``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .errors import (
    ConstantInputError,
    EmptyVarietyError,
    HomogeneityError,
    InternalCheckError,
)
from .factor import factor_form
from .groebner import GroebnerBasis, Ideal, certify_homogenized_basis
from .hilbert import affine_degree, dim_degree_homogeneous, groebner_for_set
from .poly import Polynomial, squarefree_decomposition, squarefree_part, top_form

STATUS_VERIFIED = "verified-Q-irreducible"
STATUS_UNVERIFIED = "squarefree-unverified"
MAY_SPLIT_NOTE = "may split into conjugate components over C"


@dataclass(frozen=True)
class InfinityIdeal:
    """Generators of the ideal cutting out the cone at infinity, as a set."""

    ring: tuple[str, ...]
    generators: tuple[Polynomial, ...]
    basis: GroebnerBasis


@dataclass(frozen=True)
class ConeComponentReport:
    """One Q-irreducible (or squarefree-unverified) cone component at infinity."""

    component_poly: Polynomial
    exponent: int
    component_degree: int
    irreducibility_status: str
    note: str | None = None
    sing_dim: int | None = None


@dataclass(frozen=True)
class InvariantSignature:
    """The obstruction tuple compared across inputs.

    ``components`` is the sorted multiset of (component degree, exponent)
    pairs; it is None when the input is not a hypersurface, in which case the
    per-component invariants are not computed. ``class_c1_infinity`` is True,
    False, or None for unknown.
    """

    ambient_dim: int
    set_dim: int
    total_degree: int
    component_count: int | None
    components: tuple[tuple[int, int], ...] | None
    class_c1_infinity: bool | None
    mode: str = "at-infinity"

    def multiplicity_multiset(self) -> tuple[int, ...] | None:
        if self.components is None:
            return None
        return tuple(sorted(k for _, k in self.components))


@dataclass(frozen=True)
class FormulaCheck:
    """Outcome of the degree conservation identity, with both sides."""

    holds: bool
    total_degree: int
    weighted_sum: int
    terms: tuple[tuple[int, int], ...]  # (exponent, component degree)


@dataclass(frozen=True)
class SetReport:
    """Everything the CLI prints for one input set."""

    signature: InvariantSignature
    component_reports: tuple[ConeComponentReport, ...] | None
    cone_generators: tuple[Polynomial, ...]
    cone_dim: int | None
    cone_scheme_degree: int | None
    formula: FormulaCheck | None
    caveats: tuple[str, ...] = field(default_factory=tuple)


def infinity_ideal(ideal: Ideal) -> InfinityIdeal:
    """Top forms of the reduced grevlex basis; they define the cone at infinity.

    For a principal ideal the single top form is further reduced to its
    squarefree part: the cone is a set, and the reduced generator cuts the
    same set exactly.
    """
    basis = groebner_for_set(ideal)
    if basis.contains_one():
        raise EmptyVarietyError("the ideal is the unit ideal")
    certify_homogenized_basis(basis)
    tops = [top_form(g).normalized() for g in basis.elements]
    if len(tops) == 1 and not tops[0].is_constant():
        tops = [squarefree_part(tops[0])]
    gens = tuple(sorted(set(tops), key=lambda p: p.to_string()))
    return InfinityIdeal(ideal.ring, gens, basis)


def cone_components_hypersurface(f: Polynomial) -> list[ConeComponentReport]:
    """Cone components of a hypersurface with their relative multiplicities.

    Pipeline: reduce f to its squarefree part, take the top form, split it
    into squarefree layers (the exponents), then split each layer into
    Q-irreducible factors where the exact factorization succeeds.
    """
    if f.is_zero() or f.is_constant():
        raise ConstantInputError("a hypersurface needs a non-constant polynomial")
    f_red = squarefree_part(f)
    g = top_form(f_red)
    reports: list[ConeComponentReport] = []
    for layer, exponent in squarefree_decomposition(g):
        factors, verified = factor_form(layer)
        status = STATUS_VERIFIED if verified else STATUS_UNVERIFIED
        for h in factors:
            deg = h.degree()
            reports.append(
                ConeComponentReport(
                    component_poly=h,
                    exponent=exponent,
                    component_degree=deg,
                    irreducibility_status=status if deg > 1 else STATUS_VERIFIED,
                    note=MAY_SPLIT_NOTE if deg > 1 else None,
                )
            )
    total = sum(r.exponent * r.component_degree for r in reports)
    if total != g.degree():
        raise InternalCheckError(
            f"component degrees sum to {total}, top form has degree {g.degree()}"
        )
    reports.sort(key=lambda r: (r.component_degree, r.exponent, r.component_poly.to_string()))
    return reports


def sing_dim(h: Polynomial) -> int:
    """Dimension of the singular locus of the cone V(h), or -1 when empty.

    h must be homogeneous; it is reduced to its squarefree part, and the
    singular locus is cut out by h together with all its partials.
    """
    if h.is_zero() or h.is_constant():
        raise ConstantInputError("sing_dim needs a non-constant polynomial")
    if not h.is_homogeneous():
        raise HomogeneityError("sing_dim is defined for homogeneous input")
    h = squarefree_part(h)
    gens = [h] + [h.partial(v) for v in h.variables_present()]
    gens = [g for g in gens if not g.is_zero()]
    if any(g.is_constant() for g in gens):
        return -1
    try:
        data = dim_degree_homogeneous(Ideal.of(gens))
    except EmptyVarietyError:
        return -1
    return data.krull_dimension


def verify_degree_formula(sig: InvariantSignature) -> FormulaCheck:
    """Check total degree against the weighted component degrees, exactly."""
    if sig.components is None:
        raise ValueError("signature has no component data (not a hypersurface)")
    weighted = sum(k * d for d, k in sig.components)
    return FormulaCheck(
        holds=(weighted == sig.total_degree),
        total_degree=sig.total_degree,
        weighted_sum=weighted,
        terms=tuple((k, d) for d, k in sig.components),
    )


def _as_ideal(obj: Polynomial | Ideal) -> Ideal:
    if isinstance(obj, Polynomial):
        return Ideal.of([obj])
    return obj


def invariant_signature(
    obj: Polynomial | Ideal,
    mode: str = "at-infinity",
    with_class: bool = True,
) -> InvariantSignature:
    """Assemble the full obstruction tuple for a polynomial or an ideal."""
    return analyze(obj, mode=mode, with_class=with_class).signature


def analyze(
    obj: Polynomial | Ideal,
    mode: str = "at-infinity",
    with_class: bool = True,
    assume_radical: bool = False,
) -> SetReport:
    """Full pipeline: degree, cone, components, Eq-check, caveats."""
    if mode not in ("at-infinity", "local-homogeneous"):
        raise ValueError(f"unknown mode {mode!r}")
    ideal = _as_ideal(obj)
    caveats: list[str] = []

    if mode == "local-homogeneous":
        for g in ideal.generators:
            if not g.is_homogeneous():
                raise HomogeneityError(
                    "local-homogeneous mode needs homogeneous generators"
                )

    deg_data = affine_degree(ideal)
    n = len(ideal.ring)
    inf = infinity_ideal(ideal)
    cone_data = dim_degree_homogeneous(Ideal.of(list(inf.generators)))

    caveats.append(
        "dimension is the top dimension from Hilbert data; equidimensionality is not certified"
    )

    if ideal.is_principal():
        f = ideal.generators[0]
        reports = cone_components_hypersurface(f)
        if with_class:
            enriched = []
            for r in reports:
                sd = sing_dim(r.component_poly)
                enriched.append(
                    ConeComponentReport(
                        component_poly=r.component_poly,
                        exponent=r.exponent,
                        component_degree=r.component_degree,
                        irreducibility_status=r.irreducibility_status,
                        note=r.note,
                        sing_dim=sd,
                    )
                )
            reports = enriched
            class_flag: bool | None = all(r.sing_dim <= 1 for r in reports)
        else:
            class_flag = None
        components = tuple(sorted((r.component_degree, r.exponent) for r in reports))
        sig = InvariantSignature(
            ambient_dim=n,
            set_dim=deg_data.krull_dimension,
            total_degree=deg_data.degree,
            component_count=len(reports),
            components=components,
            class_c1_infinity=class_flag,
            mode=mode,
        )
        formula = verify_degree_formula(sig)
        if not formula.holds:
            raise InternalCheckError(
                f"degree conservation failed: {formula.total_degree} != {formula.weighted_sum}"
            )
        return SetReport(
            signature=sig,
            component_reports=tuple(reports),
            cone_generators=inf.generators,
            cone_dim=cone_data.krull_dimension,
            cone_scheme_degree=cone_data.degree,
            formula=formula,
            caveats=tuple(caveats),
        )

    # codimension >= 2: no component data, weaker signature
    if not assume_radical:
        caveats.append(
            "input ideal taken as given; radicality is assumed, not checked"
        )
    caveats.append(
        "cone degree is the scheme degree of the top-form ideal; it may exceed the reduced set degree"
    )
    sig = InvariantSignature(
        ambient_dim=n,
        set_dim=deg_data.krull_dimension,
        total_degree=deg_data.degree,
        component_count=None,
        components=None,
        class_c1_infinity=None,
        mode=mode,
    )
    return SetReport(
        signature=sig,
        component_reports=None,
        cone_generators=inf.generators,
        cone_dim=cone_data.krull_dimension,
        cone_scheme_degree=cone_data.degree,
        formula=None,
        caveats=tuple(caveats),
    )
