"""Built-in manifold records.

Lattices are minimal: each record carries just the classes that the
computations pair against.  Every entry has a default ``w`` and a ``fiber``
class (the one matched when the entry is a gluing factor) among its named
classes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .donaldson import ManifoldRecord, SimpleTypeStructure, validate_structure
from .gluing import CIRCLE, DIRECT, VIA_B, GluingConfig, MatchedClass
from .lattice import IntersectionLattice, LatticeClass

__all__ = [
    "CatalogEntry",
    "CatalogError",
    "NAMES",
    "get",
    "all_entries",
    "simple_type_names",
    "capped_name",
    "capping",
    "fiber_config",
]


class CatalogError(KeyError):
    pass


@dataclass(frozen=True, eq=False)
class CatalogEntry:
    record: ManifoldRecord
    notes: str = ""
    extra_constants: Mapping[str, Fraction] = field(default_factory=dict)
    named_classes: Mapping[str, LatticeClass] = field(default_factory=dict)

    @property
    def name(self) -> str:
        return self.record.name

    @property
    def w(self) -> LatticeClass:
        return self.named_classes["w"]

    @property
    def fiber(self) -> LatticeClass:
        return self.named_classes["fiber"]


def _k3() -> CatalogEntry:
    lat = IntersectionLattice(("S", "D"), ((2, 1), (1, 0)), name="K3")
    S, D = lat.gen("S"), lat.gen("D")
    rec = ManifoldRecord("K3", 0, 3, lat, S - D, SimpleTypeStructure(((lat.zero(), Fraction(1)),)),
                         finite_type_order=1)
    return CatalogEntry(
        rec,
        notes=("K3 surface with a tight genus-2 surface S (S.S = 2) and an elliptic fiber D, S.D = 1. "
               "Sigma = S - D. The single basic class 0 with coefficient 1 is back-derived: it is the "
               "only structure whose two-sector series along (tD, s Sigma) is -exp(-ts) for w.w = 0 mod 4."),
        named_classes={"w": D, "fiber": D, "S": S, "D": D},
    )


def _b() -> CatalogEntry:
    lat = IntersectionLattice(
        ("S", "E1", "E2", "F"),
        ((2, 0, 0, 1), (0, -1, 0, 0), (0, 0, -1, 0), (1, 0, 0, 0)),
        name="B",
    )
    S, E1, E2, F = (lat.gen(n) for n in lat.generator_names)
    q = Fraction(1, 4)
    struct = SimpleTypeStructure((
        (E1 + E2, q), (-E1 - E2, q), (E1 - E2, -q), (E2 - E1, -q),
    ))
    rec = ManifoldRecord("B", 0, 3, lat, S - E1 - E2, struct, finite_type_order=1)
    return CatalogEntry(
        rec,
        notes=("K3 blown up in two points, E1 and E2 exceptional; Sigma = S - E1 - E2 is the proper "
               "transform of the tight surface. Donaldson series exp(Q/2) sinh(E1.a) sinh(E2.a), "
               "whose expansion gives the four classes +-E1+-E2 with coefficients +-1/4. F is the "
               "elliptic fiber, F.S = 1."),
        named_classes={"w": F, "fiber": F, "F": F, "E1": E1, "E2": E2, "S": S},
    )


def _doubled(name: str, k_dot_d: int, k_square: int, b_plus: int, a_plus: Fraction, a_minus: Fraction,
             notes: str) -> CatalogEntry:
    lat = IntersectionLattice(
        ("D", "Sigma", "K"),
        ((0, 1, k_dot_d), (1, 0, 2), (k_dot_d, 2, k_square)),
        name=name,
    )
    D, Sig, K = (lat.gen(n) for n in lat.generator_names)
    rec = ManifoldRecord(name, 0, b_plus, lat, Sig, SimpleTypeStructure(((K, a_plus), (-K, a_minus))),
                         finite_type_order=1)
    return CatalogEntry(rec, notes=notes, named_classes={"w": D, "fiber": D, "D": D, "K": K})


def _c() -> CatalogEntry:
    return _doubled(
        "C", 2, 4, 9, Fraction(2), Fraction(-2),
        "C = B #_Sigma B, glued along fibers (D = F + F). Two-sector series "
        "-4 exp(Q/2) sinh(K.a) for w = D, with K.Sigma = K.D = 2 and K.K = 4. "
        "b+ = 3 + 3 + 3.",
    )


def _c2() -> CatalogEntry:
    return _doubled(
        "C2", 4, 10, 15, Fraction(16), Fraction(16),
        "C2 = C #_Sigma B. Series 32 exp(Q/2) cosh(K.a) for w = D. K.Sigma = 2; "
        "K.D = 4 is forced by the gluing (2 from C's class plus 2 Sigma.D); "
        "K.K = 4 - 2 + 8 = 10 from the canonical-class formula for sums along a genus-2 "
        "surface (K.K = 4 on C, (E1+E2)^2 = -2 on B); b+ = 9 + 3 + 3.",
    )


def _sigma_cp1() -> CatalogEntry:
    lat = IntersectionLattice(("Sigma", "CP1"), ((0, 1), (1, 0)), name="SigmaCP1")
    Sig, P = lat.gen("Sigma"), lat.gen("CP1")
    eps = Fraction(-1)
    mu3 = Fraction(1, 2)
    monomials = {0: 0, 1: 0, 2: 0, 3: eps * mu3, 4: 0, 5: Fraction(-2), 6: 0}
    rec = ManifoldRecord("SigmaCP1", 4, 1, lat, Sig, SimpleTypeStructure(()), simple_type=False,
                         finite_type_order=2, chamber="sigma", monomials=monomials)
    return CatalogEntry(
        rec,
        notes=("Sigma x CP1 with w = CP1, invariants taken in the chamber near Sigma. Only the values "
               "D(Sigma^d) are stored: D(Sigma^3) = eps * 1/2 with the orientation factor eps = -1 "
               "relative to the complex orientation of the 6-dimensional moduli space; D(Sigma^5) = -2 "
               "from wall-crossing. The gamma pairing is eps * gamma1.gamma2."),
        extra_constants={"epsilon_S": eps, "mu_sigma_cubed": mu3, "gamma_pairing_factor": eps},
        named_classes={"w": P, "CP1": P},
    )


_BUILDERS = {"K3": _k3, "B": _b, "C": _c, "C2": _c2, "SigmaCP1": _sigma_cp1}
NAMES = tuple(_BUILDERS)
_CACHE: dict[str, CatalogEntry] = {}


def get(name: str) -> CatalogEntry:
    if name not in _BUILDERS:
        raise CatalogError(f"unknown catalog entry {name!r}; known: {', '.join(NAMES)}")
    if name not in _CACHE:
        entry = _BUILDERS[name]()
        problems = validate_structure(entry.record)
        if problems:
            raise CatalogError(f"catalog entry {name} is inconsistent: {problems}")
        _CACHE[name] = entry
    return _CACHE[name]


def all_entries() -> list[CatalogEntry]:
    return [get(n) for n in NAMES]


def simple_type_names() -> list[str]:
    return [n for n in NAMES if get(n).record.simple_type]


# X #_Sigma B for the factors we can cap
_CAPPED = {"B": "C", "C": "C2"}


def capped_name(name: str) -> str:
    try:
        return _CAPPED[name]
    except KeyError:
        raise CatalogError(f"no capped record for {name!r}") from None


def capping(name: str) -> LatticeClass:
    """Capping of the fiber piece in X~ = X #_Sigma B: D - Sigma/2 (circle multiple 1)."""
    rec = get(capped_name(name)).record
    return rec.lattice.gen("D") - Fraction(1, 2) * rec.sigma


def fiber_config(name1: str, name2: str, mode: str = DIRECT, match_name: str = "D") -> GluingConfig:
    """Glue two catalog entries along their fibers, D = fiber1 + fiber2."""
    label = f"{name1}#{name2}"
    if mode == DIRECT:
        e1, e2 = get(name1), get(name2)
        m = MatchedClass(match_name, e1.fiber, e2.fiber, CIRCLE, Fraction(1))
        return GluingConfig(e1.record, e2.record, (m,), DIRECT, label=label)
    if mode == VIA_B:
        e1, e2 = get(capped_name(name1)), get(capped_name(name2))
        m = MatchedClass(match_name, capping(name1), capping(name2), CIRCLE, Fraction(1))
        return GluingConfig(e1.record, e2.record, (m,), VIA_B, label=label)
    raise CatalogError(f"unknown mode {mode!r}")
