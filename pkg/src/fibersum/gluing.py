"""Donaldson series of a sum along a genus-2 surface, from its two factors.

A gluing is described by a :class:`GluingConfig`: the two factor records and
a list of matched classes D -> (D1, D2).  The glued lattice is spanned by the
matched classes plus ``Sigma``; ``Sigma`` itself behaves like the matched
class (Sigma1, 0).

Two formulas are available.  ``direct`` applies to simple-type factors with
b1 = 0 and b+ > 1 and matched classes meeting the gluing region in multiples
of the circle.  ``via_b`` takes the capped factors X~i = Xi #_Sigma B (always
of simple type) and cappings of each matched class in them.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .donaldson import (ManifoldRecord, SimpleTypeStructure, StructureError, build_dseries, w_sign)
from .lattice import IntersectionLattice, LatticeClass, LatticeError, as_fraction, pair, solve, validate_allowable
from .series import DSeries, ExpTerm, GaussianRational, ZERO, canonicalize

__all__ = [
    "GluingError",
    "MatchedClass",
    "GluingConfig",
    "SIGMA",
    "glued_form",
    "glue_direct",
    "glue_via_b",
    "glue",
    "induced_w",
    "glued_record",
    "pair_coefficient_sum",
    "sigma_zero_check",
    "invariant_profile_compare",
    "swap_factors",
    "shift_splitting",
]

SIGMA = "Sigma"
DIRECT = "direct"
VIA_B = "via_b"
CIRCLE = "circle"
CURVE = "curve"

# glued b+ = b+1 + b+2 + 2g - 1 for b1 = 0 factors and g = 2
GENUS_SHIFT = 3


class GluingError(ValueError):
    pass


@dataclass(frozen=True)
class MatchedClass:
    name: str
    d1: LatticeClass
    d2: LatticeClass
    boundary: str = CIRCLE
    k: Fraction | None = None

    def __post_init__(self):
        if self.boundary not in (CIRCLE, CURVE):
            raise GluingError(f"{self.name}: boundary must be 'circle' or 'curve'")
        if self.k is not None:
            object.__setattr__(self, "k", as_fraction(self.k))


@dataclass(frozen=True)
class GluingConfig:
    x1: ManifoldRecord
    x2: ManifoldRecord
    matched: tuple[MatchedClass, ...]
    mode: str = DIRECT
    label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "matched", tuple(self.matched))
        if self.mode not in (DIRECT, VIA_B):
            raise GluingError(f"unknown gluing mode {self.mode!r}")
        names = [m.name for m in self.matched]
        if len(set(names)) != len(names) or SIGMA in names:
            raise GluingError(f"matched class names must be distinct and differ from {SIGMA!r}")
        for X in (self.x1, self.x2):
            if not X.simple_type:
                raise GluingError(f"{X.name} is not of simple type")
            if X.b1 != 0:
                raise GluingError(f"{X.name}: gluing formulas need b1 = 0")
            if self.mode == DIRECT and X.b_plus <= 1:
                raise GluingError(f"{X.name}: direct gluing needs b+ > 1")
        for m in self.matched:
            if m.d1.lattice != self.x1.lattice or m.d2.lattice != self.x2.lattice:
                raise GluingError(f"{m.name}: pieces must live in the factor lattices")
            if self.mode == DIRECT and m.boundary != CIRCLE:
                raise GluingError(f"{m.name}: direct gluing needs circle boundaries")

    @property
    def name(self) -> str:
        return self.label or f"{self.x1.name}#{self.x2.name}"


def _sigma_dot(cfg: GluingConfig, m: MatchedClass) -> Fraction:
    s1 = pair(cfg.x1.sigma, m.d1)
    s2 = pair(cfg.x2.sigma, m.d2)
    if s1 != s2:
        raise GluingError(f"{m.name}: Sigma1.d1 = {s1} but Sigma2.d2 = {s2}")
    if m.boundary == CIRCLE and m.k is not None and m.k != s1:
        raise GluingError(f"{m.name}: declared circle multiple {m.k} but Sigma.D = {s1}")
    return s1


def _cap_correction(cfg: GluingConfig, a: MatchedClass, b: MatchedClass) -> Fraction:
    # The two capping pieces inside B° are k(F° - Sigma°/2), of square -k^2
    # each, and are not part of D; add them back to D1.D2-sums.
    if cfg.mode != VIA_B or a.boundary != CIRCLE or b.boundary != CIRCLE:
        return Fraction(0)
    return 2 * _sigma_dot(cfg, a) * _sigma_dot(cfg, b)


def glued_form(cfg: GluingConfig) -> IntersectionLattice:
    """Lattice on the matched classes and Sigma, with D.D' = D1.D1' + D2.D2'.

    In ``via_b`` mode the capping pieces are subtracted back out, which adds
    ``2 k k'`` for circle boundaries ``k [S^1]``, ``k'[S^1]``.
    """
    ms = cfg.matched
    ks = [_sigma_dot(cfg, m) for m in ms]
    n = len(ms)
    gram = [[Fraction(0)] * (n + 1) for _ in range(n + 1)]
    for i, a in enumerate(ms):
        for j, b in enumerate(ms):
            gram[i][j] = pair(a.d1, b.d1) + pair(a.d2, b.d2) + _cap_correction(cfg, a, b)
        gram[i][n] = gram[n][i] = ks[i]
    names = tuple(m.name for m in ms) + (SIGMA,)
    return IntersectionLattice(names, tuple(tuple(r) for r in gram), name=cfg.name)


def _class_from_covector(lattice: IntersectionLattice, cov: Sequence[Fraction], what: str) -> tuple[Fraction, ...]:
    try:
        return solve(lattice.gram, cov)
    except LatticeError:
        raise GluingError(
            f"glued lattice {lattice.label} is degenerate; cannot represent {what}. "
            "Add a matched class with non-zero Sigma pairing."
        ) from None


def _check_pair(cfg: GluingConfig, w1: LatticeClass, w2: LatticeClass) -> None:
    for X, w in ((cfg.x1, w1), (cfg.x2, w2)):
        if w.lattice != X.lattice:
            raise GluingError(f"w for {X.name} is not in its lattice")
        if not validate_allowable(w, X.sigma):
            raise GluingError(f"({w}, Sigma) is not allowable on {X.name}")


def _signed(X: ManifoldRecord, w: LatticeClass, side: int):
    out = []
    for K, a in X.structure:
        ks = pair(K, X.sigma)
        if ks.denominator != 1 or ks.numerator % 2:
            raise GluingError(f"{X.name}: basic class {K} has odd K.Sigma = {ks}")
        out.append((K, ks, a, w_sign(K, w) * a))
    return out


def _glue_terms(cfg: GluingConfig, w1, w2, *, unsigned: bool):
    """Yield (frequency covector, coefficient, sector sign) for each matched pair."""
    lattice = glued_form(cfg)
    direct = cfg.mode == DIRECT
    scale = Fraction(32) if direct else Fraction(1, 2)
    ks = [_sigma_dot(cfg, m) for m in cfg.matched]
    left = _signed(cfg.x1, w1, 1)
    right = _signed(cfg.x2, w2, 2)
    for K, k1, a, aw in left:
        if abs(k1) != 2:
            continue
        for L, k2, b, bw in right:
            if k2 != k1:
                continue
            e = 1 if k1 == 2 else -1
            cov = []
            for m, k in zip(cfg.matched, ks):
                v = pair(K, m.d1) + pair(L, m.d2)
                if direct:
                    v += 2 * e * k
                cov.append(v)
            cov.append(k1)
            if unsigned:
                # sign identity (-1)^((kappa.w+w^2)/2) = -s_K s_L
                c = e * scale * a * b
            else:
                c = -e * scale * aw * bw
            yield lattice, tuple(cov), c


def _assemble(cfg: GluingConfig, w1, w2, unsigned: bool) -> DSeries:
    lattice = glued_form(cfg)
    terms = []
    for lat, cov, c in _glue_terms(cfg, w1, w2, unsigned=unsigned):
        coords = _class_from_covector(lat, cov, "a basic class")
        terms.append(ExpTerm(Fraction(1, 2), coords, GaussianRational.of(c)))
    return canonicalize(DSeries(lattice, tuple(terms)))


def glue_direct(cfg: GluingConfig, w1: LatticeClass, w2: LatticeClass) -> DSeries:
    """Donaldson series of the sum from simple-type factors.

    Pairs (K, L) with K.Sigma = L.Sigma = 2 contribute
    ``-32 a_w b_w exp(K.D1 + L.D2 + 2 Sigma.D)``; pairs at -2 contribute
    ``+32 a_w b_w exp(K.D1 + L.D2 - 2 Sigma.D)``.
    """
    if cfg.mode != DIRECT:
        raise GluingError("glue_direct needs a direct-mode config")
    _check_pair(cfg, w1, w2)
    return _assemble(cfg, w1, w2, unsigned=False)


def glue_via_b(cfg: GluingConfig, w1: LatticeClass, w2: LatticeClass) -> DSeries:
    """Same output computed from the capped factors X~i = Xi #_Sigma B.

    The coefficients are ``-1/2`` (resp. ``+1/2``) times the w-signed
    coefficient products and the frequencies are ``K~.D1 + L~.D2``.
    Cappings must satisfy the normalisation against the B-piece of the
    basic class; this is not checkable from lattice data and is trusted.
    """
    if cfg.mode != VIA_B:
        raise GluingError("glue_via_b needs a via_b-mode config")
    _check_pair(cfg, w1, w2)
    return _assemble(cfg, w1, w2, unsigned=False)


def glue(cfg: GluingConfig, w1: LatticeClass, w2: LatticeClass) -> DSeries:
    return glue_direct(cfg, w1, w2) if cfg.mode == DIRECT else glue_via_b(cfg, w1, w2)


def induced_w(cfg: GluingConfig, w1: LatticeClass, w2: LatticeClass) -> LatticeClass:
    """The class on the glued lattice pairing like w1 + w2 with every matched class."""
    lattice = glued_form(cfg)
    cov = [pair(w1, m.d1) + pair(w2, m.d2) for m in cfg.matched]
    cov.append(pair(w1, cfg.x1.sigma))
    return LatticeClass(lattice, _class_from_covector(lattice, cov, "the induced w"))


def glued_record(cfg: GluingConfig, w1: LatticeClass, w2: LatticeClass,
                 name: str | None = None) -> tuple[ManifoldRecord, LatticeClass]:
    """Record of the glued manifold plus the induced w.

    Basic-class coefficients are stored w-independently (``+32 a b`` at +2,
    ``-32 a b`` at -2 for ``direct``; ``+-1/2`` for ``via_b``).  Raises when
    the induced w does not reproduce the glued series, which happens when
    the glued sublattice cannot see the part of w that fixes the signs.
    """
    _check_pair(cfg, w1, w2)
    lattice = glued_form(cfg)
    unsigned = _assemble(cfg, w1, w2, unsigned=True)
    entries = tuple((LatticeClass(lattice, tuple(t.freq[i].re for i in range(lattice.rank))), t.coeff.re)
                    for t in unsigned.terms)
    if cfg.mode == DIRECT:
        b_plus = cfg.x1.b_plus + cfg.x2.b_plus + GENUS_SHIFT
    else:
        # X~i = Xi # B adds b+(B) + 3 = 6 to each factor
        b_plus = cfg.x1.b_plus + cfg.x2.b_plus - 2 * 6 + GENUS_SHIFT
    order = 1
    record = ManifoldRecord(
        name=name or cfg.name,
        b1=0,
        b_plus=b_plus,
        lattice=lattice,
        sigma=lattice.gen(SIGMA),
        structure=SimpleTypeStructure(entries),
        simple_type=True,
        finite_type_order=order,
    )
    w = induced_w(cfg, w1, w2)
    if not w.is_integral():
        raise GluingError(f"induced w = {w} is not integral on the glued lattice")
    try:
        rebuilt = build_dseries(record, w)
    except StructureError as exc:
        raise GluingError(f"induced w is not compatible with the glued classes: {exc}") from None
    if rebuilt != glue(cfg, w1, w2):
        raise GluingError("induced w does not reproduce the glued series; the glued sublattice "
                          "does not capture w")
    return record, w


def _signature(K: LatticeClass, probes: Sequence[LatticeClass]) -> tuple[Fraction, ...]:
    return tuple(pair(K, p) for p in probes)


def pair_coefficient_sum(cfg: GluingConfig, K: LatticeClass, L: LatticeClass,
                         w1: LatticeClass, w2: LatticeClass) -> GaussianRational:
    """Sum of glued coefficients over classes restricting to (K, L).

    Restrictions to the factor complements are approximated by pairings
    with the matched pieces and with Sigma.  Equals ``-32 A B`` when
    K.Sigma = L.Sigma = 2, ``+32 A B`` at -2, and 0 otherwise, where A and B
    sum the w-signed coefficients over each restriction class.
    """
    p1 = [m.d1 for m in cfg.matched] + [cfg.x1.sigma]
    p2 = [m.d2 for m in cfg.matched] + [cfg.x2.sigma]
    sk, sl = _signature(K, p1), _signature(L, p2)
    ks, ls = pair(K, cfg.x1.sigma), pair(L, cfg.x2.sigma)
    if ks != ls or abs(ks) != 2:
        return ZERO
    A = sum((w_sign(K1, w1) * a for K1, a in cfg.x1.structure if _signature(K1, p1) == sk), Fraction(0))
    B = sum((w_sign(L1, w2) * b for L1, b in cfg.x2.structure if _signature(L1, p2) == sl), Fraction(0))
    scale = 32 if cfg.mode == DIRECT else Fraction(1, 2)
    e = 1 if ks == 2 else -1
    return GaussianRational.of(-e * scale * A * B)


def sigma_zero_check(s: DSeries, sigma: LatticeClass) -> bool:
    """True iff no frequency of the (Q/2-form) series pairs to zero with Sigma."""
    cov = sigma.covector()
    for t in canonicalize(s).terms:
        if t.q != Fraction(1, 2):
            raise GluingError("sigma_zero_check expects a series with every q = 1/2")
        if not sum((f * c for f, c in zip(t.freq, cov)), ZERO):
            return False
    return True


def invariant_profile_compare(a: DSeries, b: DSeries, sigma_a: LatticeClass, sigma_b: LatticeClass) -> bool:
    """True iff some frequency bijection preserves coefficients and Sigma pairings."""
    def profile(s: DSeries, sigma: LatticeClass) -> Counter:
        cov = sigma.covector()
        out = Counter()
        for t in canonicalize(s).terms:
            if t.q != Fraction(1, 2):
                raise GluingError("profiles are defined for series with every q = 1/2")
            out[(t.coeff, sum((f * c for f, c in zip(t.freq, cov)), ZERO))] += 1
        return out

    return profile(a, sigma_a) == profile(b, sigma_b)


def swap_factors(cfg: GluingConfig) -> GluingConfig:
    return GluingConfig(cfg.x2, cfg.x1,
                        tuple(MatchedClass(m.name, m.d2, m.d1, m.boundary, m.k) for m in cfg.matched),
                        cfg.mode, f"{cfg.x2.name}#{cfg.x1.name}" if not cfg.label else _swap_label(cfg.label))


def _swap_label(label: str) -> str:
    left, sep, right = label.partition("#")
    return f"{right}#{left}" if sep else label


def shift_splitting(cfg: GluingConfig, r) -> GluingConfig:
    """Replace every (D1, D2) by (D1 - r Sigma1, D2 + r Sigma2)."""
    r = as_fraction(r)
    return GluingConfig(cfg.x1, cfg.x2,
                        tuple(MatchedClass(m.name, m.d1 - r * cfg.x1.sigma, m.d2 + r * cfg.x2.sigma,
                                           m.boundary, m.k) for m in cfg.matched),
                        cfg.mode, cfg.label)
