"""Manifold records, simple-type structures and the (w, Sigma) transform."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Mapping

from .lattice import IntersectionLattice, LatticeClass, LatticeError, as_fraction, pair, validate_allowable, adjunction_check
from .series import DSeries, ExpTerm, GaussianRational, I, canonicalize, i_power

__all__ = [
    "StructureError",
    "SimpleTypeStructure",
    "ManifoldRecord",
    "d_zero",
    "w_sign",
    "symmetry_sign",
    "build_dseries",
    "to_dws",
    "dws_via_parity",
    "from_dws",
    "validate_structure",
]

SIGMA_GENUS = 2


class StructureError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class SimpleTypeStructure:
    """Basic classes with their w-independent rational coefficients."""

    entries: tuple[tuple[LatticeClass, Fraction], ...] = ()

    def __post_init__(self):
        entries = []
        seen = set()
        for K, a in self.entries:
            a = as_fraction(a)
            if a == 0:
                raise StructureError(f"zero coefficient for basic class {K}")
            if K.coords in seen:
                raise StructureError(f"duplicate basic class {K}")
            seen.add(K.coords)
            entries.append((K, a))
        lattices = {K.lattice for K, _ in entries}
        if len(lattices) > 1:
            raise StructureError("basic classes live in different lattices")
        entries.sort(key=lambda e: e[0].coords)
        object.__setattr__(self, "entries", tuple(entries))

    def __iter__(self) -> Iterator[tuple[LatticeClass, Fraction]]:
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)

    def __eq__(self, other):
        if not isinstance(other, SimpleTypeStructure):
            return NotImplemented
        return [(K.lattice, K.coords, a) for K, a in self.entries] == \
            [(K.lattice, K.coords, a) for K, a in other.entries]

    def __hash__(self):
        return hash(tuple((K.coords, a) for K, a in self.entries))

    def coefficient(self, K: LatticeClass) -> Fraction:
        for L, a in self.entries:
            if L.coords == K.coords and L.lattice == K.lattice:
                return a
        return Fraction(0)

    def classes(self) -> list[LatticeClass]:
        return [K for K, _ in self.entries]


@dataclass(frozen=True, eq=False)
class ManifoldRecord:
    name: str
    b1: int
    b_plus: int
    lattice: IntersectionLattice
    sigma: LatticeClass
    structure: SimpleTypeStructure = field(default_factory=SimpleTypeStructure)
    simple_type: bool = True
    finite_type_order: int | None = None
    # b+ = 1 records: invariants taken in the chamber fixed by sigma; only the
    # monomial values D(sigma^d) are stored.
    chamber: str | None = None
    monomials: Mapping[int, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        if self.b1 < 0 or self.b_plus < 1:
            raise StructureError(f"{self.name}: need b1 >= 0 and b+ >= 1")
        if (self.b_plus - self.b1) % 2 != 1:
            raise StructureError(f"{self.name}: b+ - b1 must be odd")
        if self.sigma.lattice != self.lattice:
            raise StructureError(f"{self.name}: sigma is not in the record's lattice")
        if not self.sigma.is_integral() or all(c % 2 == 0 for c in self.sigma.coords):
            raise StructureError(f"{self.name}: sigma must be an integral odd class")
        if self.sigma.square != 0:
            raise StructureError(f"{self.name}: sigma must have square zero")
        for K, _ in self.structure:
            if K.lattice != self.lattice:
                raise StructureError(f"{self.name}: basic class {K} is not in the record's lattice")
        if self.b_plus == 1 and self.chamber is None and len(self.structure):
            raise StructureError(f"{self.name}: b+ = 1 records need a chamber")
        object.__setattr__(self, "monomials", {int(k): as_fraction(v) for k, v in dict(self.monomials).items()})

    def __eq__(self, other):
        if not isinstance(other, ManifoldRecord):
            return NotImplemented
        return (self.name, self.b1, self.b_plus, self.lattice, self.sigma.coords, self.structure,
                self.simple_type, self.finite_type_order, self.chamber, dict(self.monomials)) == \
            (other.name, other.b1, other.b_plus, other.lattice, other.sigma.coords, other.structure,
             other.simple_type, other.finite_type_order, other.chamber, dict(other.monomials))

    __hash__ = None


def d_zero(X: ManifoldRecord, w: LatticeClass) -> int:
    """``-w.w - 3/2 (1 - b1 + b+)``."""
    if not w.is_integral():
        raise LatticeError("w must be integral")
    d0 = -w.square - Fraction(3, 2) * (1 - X.b1 + X.b_plus)
    if d0.denominator != 1:
        raise StructureError(f"{X.name}: d0 = {d0} is not an integer (corrupt record)")
    return d0.numerator


def w_sign(K: LatticeClass, w: LatticeClass) -> int:
    """``(-1)^((K.w + w.w)/2)``; raises when the exponent is not an integer."""
    n = pair(K, w) + w.square
    if n.denominator != 1 or n.numerator % 2:
        raise StructureError(f"w not characteristic-compatible with basic class {K} (K.w + w.w = {n})")
    return -1 if (n.numerator // 2) % 2 else 1


def symmetry_sign(X: ManifoldRecord) -> int:
    """Ratio of the coefficients of -K and K, independent of w.

    For any compatible w this is ``(-1)^(d0(X, w) + K.w)``; since K.w and w.w
    have the same parity it reduces to ``(-1)^((1 - b1 + b+)/2)``.
    """
    return -1 if ((1 - X.b1 + X.b_plus) // 2) % 2 else 1


def _require_simple(X: ManifoldRecord) -> None:
    if not X.simple_type:
        raise StructureError(f"{X.name} is not of simple type; no Donaldson series available")


def build_dseries(X: ManifoldRecord, w: LatticeClass) -> DSeries:
    _require_simple(X)
    terms = []
    for K, a in X.structure:
        terms.append(ExpTerm(Fraction(1, 2), K.coords, GaussianRational.of(w_sign(K, w) * a)))
    return canonicalize(DSeries(X.lattice, tuple(terms)))


def to_dws(X: ManifoldRecord, w: LatticeClass) -> DSeries:
    """The series of ``D^w + D^(w+Sigma)`` in two-sector form.

    Classes with ``K.Sigma = 2 mod 4`` keep their ``exp(Q/2 + K)`` terms; those
    with ``K.Sigma = 0 mod 4`` become ``i^(-d0) exp(-Q/2 + iK)`` terms.
    """
    _require_simple(X)
    if not validate_allowable(w, X.sigma):
        raise StructureError(f"({w}, {X.sigma}) is not an allowable pair")
    d0 = d_zero(X, w)
    rot = i_power(-d0)
    terms = []
    for K, a in X.structure:
        ks = pair(K, X.sigma)
        c = GaussianRational.of(w_sign(K, w) * a)
        if ks.denominator != 1 or ks.numerator % 2:
            raise StructureError(f"basic class {K} has odd or fractional K.Sigma = {ks}")
        if ks.numerator % 4 == 2:
            terms.append(ExpTerm(Fraction(1, 2), K.coords, c))
        else:
            terms.append(ExpTerm(Fraction(-1, 2), tuple(I * x for x in K.coords), rot * c))
    return canonicalize(DSeries(X.lattice, tuple(terms)))


def dws_via_parity(X: ManifoldRecord, w: LatticeClass) -> DSeries:
    """Same series as :func:`to_dws`, assembled from the two parity projections.

    ``D^w`` keeps degrees ``= d0 (mod 4)`` of the w-series and ``D^(w+Sigma)``
    keeps degrees ``= d0 + 2 (mod 4)`` of the (w+Sigma)-series.
    """
    from .series import project_parity

    if not validate_allowable(w, X.sigma):
        raise StructureError(f"({w}, {X.sigma}) is not an allowable pair")
    d0 = d_zero(X, w)
    return project_parity(build_dseries(X, w), d0, 1) + \
        project_parity(build_dseries(X, w + X.sigma), d0, -1)


def from_dws(s: DSeries, sigma: LatticeClass, d0: int, w: LatticeClass) -> SimpleTypeStructure:
    """Recover the basic classes and coefficients from a two-sector series."""
    lattice = s.lattice
    bad = []
    entries = []
    back = i_power(d0)
    for t in canonicalize(s).terms:
        if t.q == Fraction(1, 2) and t.is_real_freq():
            K = t.real_class(lattice)
            ks = pair(K, sigma)
            if ks % 4 != 2:
                bad.append(t)
                continue
            c = t.coeff
        elif t.q == Fraction(-1, 2) and t.is_imaginary_freq():
            K = t.imag_class(lattice)
            ks = pair(K, sigma)
            if ks % 4 != 0:
                bad.append(t)
                continue
            c = back * t.coeff
        else:
            bad.append(t)
            continue
        if not c.is_real():
            bad.append(t)
            continue
        entries.append((K, w_sign(K, w) * c.re))
    if bad:
        from .series import _render_term

        listing = "; ".join(_render_term(t, lattice.generator_names) for t in bad)
        raise StructureError(f"series is not in two-sector form; offending terms: {listing}")
    return SimpleTypeStructure(tuple(entries))


def validate_structure(X: ManifoldRecord) -> list[str]:
    """Violations of the basic-class constraints; empty when the record is sound."""
    problems = []
    sign = symmetry_sign(X)
    for K, a in X.structure:
        ks = pair(K, X.sigma)
        if ks.denominator != 1:
            problems.append(f"K={K}: K.Sigma = {ks} is not an integer")
            continue
        if ks.numerator % 2:
            problems.append(f"K={K}: K.Sigma odd ({ks})")
        if K.is_integral() and not adjunction_check(K, X.sigma, SIGMA_GENUS):
            problems.append(f"K={K}: adjunction bound fails on Sigma (|K.Sigma| = {abs(ks)} > 2)")
        elif not K.is_integral() and abs(ks) > 2:
            problems.append(f"K={K}: adjunction bound fails on Sigma (|K.Sigma| = {abs(ks)} > 2)")
        partner = X.structure.coefficient(-K)
        if partner != sign * a:
            problems.append(
                f"K={K}: coefficient of -K is {partner}, expected {sign * a} "
                f"(sign {sign:+d} from d0 parity)"
            )
    return problems
