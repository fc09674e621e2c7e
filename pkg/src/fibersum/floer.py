"""Finite pairing model for relative invariants along Sigma x S^1.

Relative invariants of a piece X° are vectors in a 4-dimensional space V4
(boundary circle) or a 2-dimensional space V2 (boundary curve in Sigma).
They are never materialised: a vector is recorded by its pairings with the
basis e_i = phi(A, Sigma^i), i = 0..3, and two such dual coordinate vectors
pair through the inverse of the Gram matrix N of the e_i.

All coordinates are series in one variable t, living on :data:`T_LINE`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .donaldson import ManifoldRecord, d_zero, to_dws, w_sign
from .lattice import LatticeClass, as_fraction, inverse, pair
from .series import (DSeries, ExpTerm, GaussianRational, I, T_LINE, canonicalize,
                     evaluate_monomial, i_power, ray)

__all__ = [
    "FloerError",
    "N",
    "N_INV",
    "L_EXPECTED",
    "RelativeVector",
    "pair_v4",
    "relvec_from_monomials",
    "monomial_vector",
    "gram_from_monomials",
    "coefficients_from_structure",
    "PairingMatrixM",
    "PairingMatrixMtilde",
    "M_STANDARD",
    "pair_via_M",
    "pair_via_Mtilde",
    "verify_l",
]

_h = Fraction(1, 2)

N: tuple[tuple[Fraction, ...], ...] = (
    (Fraction(0), Fraction(0), Fraction(0), -_h),
    (Fraction(0), Fraction(0), -_h, Fraction(0)),
    (Fraction(0), -_h, Fraction(0), Fraction(-2)),
    (-_h, Fraction(0), Fraction(-2), Fraction(0)),
)
N_INV = inverse(N)

L_EXPECTED = Fraction(-32)

V4 = "V4"
V2 = "V2"
_DIM = {V4: 4, V2: 2}


class FloerError(ValueError):
    pass


def _as_t_series(x) -> DSeries:
    if isinstance(x, DSeries):
        if x.lattice != T_LINE:
            raise FloerError(f"coordinate series must live on {T_LINE.label}, got {x.lattice.label}")
        return canonicalize(x)
    return DSeries.constant(T_LINE, GaussianRational.of(x))


def _exp_t(coeff, freq=0, q=0) -> DSeries:
    """``coeff * exp(q t^2 + freq t)`` on the t-line."""
    return DSeries.exp(T_LINE, q, (GaussianRational.of(freq),), coeff)


@dataclass(frozen=True)
class RelativeVector:
    space: str
    coords: tuple[DSeries, ...]

    def __post_init__(self):
        if self.space not in _DIM:
            raise FloerError(f"unknown space {self.space!r}")
        coords = tuple(_as_t_series(c) for c in self.coords)
        if len(coords) != _DIM[self.space]:
            raise FloerError(f"{self.space} vectors have {_DIM[self.space]} coordinates, got {len(coords)}")
        object.__setattr__(self, "coords", coords)

    def constants(self) -> tuple[GaussianRational, ...]:
        return tuple(c.constant_value() for c in self.coords)


def pair_v4(u: RelativeVector, v: RelativeVector) -> DSeries:
    """``u^T N^{-1} v`` for dual-basis coordinate vectors."""
    if u.space != V4 or v.space != V4:
        raise FloerError(f"pair_v4 needs two V4 vectors, got {u.space} and {v.space}")
    total = DSeries.zero(T_LINE)
    for i in range(4):
        for j in range(4):
            g = N_INV[i][j]
            if g:
                total = total + (u.coords[i] * v.coords[j]).scale(g)
    return total


def relvec_from_monomials(values: Sequence) -> RelativeVector:
    if len(values) != 4:
        raise FloerError(f"expected 4 monomial values, got {len(values)}")
    return RelativeVector(V4, tuple(values))


def monomial_vector(s: DSeries, A: LatticeClass, shift: int = 0) -> RelativeVector:
    """Pairings of ``s`` with ``A^shift * e_i``: the values ``s(A^(i + shift))``."""
    return relvec_from_monomials([evaluate_monomial(s, A, i + shift) for i in range(4)])


def gram_from_monomials(table) -> tuple[tuple[Fraction, ...], ...]:
    """``e_i . e_j = D(Sigma^(i+j))`` from a degree -> value table (missing degrees are 0)."""
    vals = {int(k): as_fraction(v) for k, v in dict(table).items()}
    return tuple(tuple(vals.get(i + j, Fraction(0)) for j in range(4)) for i in range(4))


def coefficients_from_structure(X: ManifoldRecord, w: LatticeClass, D1: LatticeClass
                                ) -> tuple[DSeries, DSeries, DSeries, DSeries]:
    """Coordinates of the relative invariant of X° in the eigenbasis of M.

    ``c1`` collects classes with K.Sigma = 2, ``c2`` those with -2, ``c3``
    those with 0 (rotated by ``i^{-d0}`` into the imaginary sector), and
    ``c4`` is identically zero for simple-type pieces.
    """
    if not X.simple_type or X.b1 != 0 or X.b_plus <= 1:
        raise FloerError(f"{X.name}: coefficient systems need simple type, b1 = 0 and b+ > 1")
    half_d2 = D1.square / 2
    rot = i_power(-d_zero(X, w))
    c1, c2, c3 = [], [], []
    for K, a in X.structure:
        ks = pair(K, X.sigma)
        aw = w_sign(K, w) * a
        kd = pair(K, D1)
        if ks == 2:
            c1.append(ExpTerm(half_d2, (GaussianRational.of(kd),), GaussianRational.of(aw)))
        elif ks == -2:
            c2.append(ExpTerm(half_d2, (GaussianRational.of(kd),), GaussianRational.of(aw)))
        elif ks == 0:
            c3.append(ExpTerm(-half_d2, (I * kd,), rot * aw))
        else:
            raise FloerError(f"{X.name}: basic class {K} has K.Sigma = {ks}")
    return (canonicalize(DSeries(T_LINE, tuple(c1))), canonicalize(DSeries(T_LINE, tuple(c2))),
            canonicalize(DSeries(T_LINE, tuple(c3))), DSeries.zero(T_LINE))


def _rescale(s: DSeries, k: Fraction) -> DSeries:
    # f(t) -> f(k t)
    return canonicalize(DSeries(T_LINE, tuple(ExpTerm(t.q * k * k, tuple(f * k for f in t.freq), t.coeff)
                                              for t in s.terms)))


@dataclass(frozen=True)
class PairingMatrixM:
    """Diagonal universal matrix for circle boundaries: ``(l e^{2t}, -l e^{-2t}, 0, 0)``."""

    l: Fraction = L_EXPECTED

    def diagonal(self, scale=1) -> tuple[DSeries, ...]:
        k = as_fraction(scale)
        base = (_exp_t(self.l, 2), _exp_t(-self.l, -2), DSeries.zero(T_LINE), DSeries.zero(T_LINE))
        return tuple(_rescale(m, k) for m in base)


M_STANDARD = PairingMatrixM()


@dataclass(frozen=True)
class PairingMatrixMtilde:
    """Diagonal matrix ``(-1/2, 1/2)`` for the capped V2 pairing."""

    entries: tuple[Fraction, Fraction] = (-_h, _h)


def pair_via_M(c_left: Sequence[DSeries], c_right: Sequence[DSeries], M: PairingMatrixM = M_STANDARD,
               sigma_dot_D=1) -> DSeries:
    """``sum_i c_i(t) M_ii(t (Sigma.D)) c'_i(t)``."""
    if len(c_left) != len(c_right) or len(c_left) != 4:
        raise FloerError("pair_via_M needs two length-4 coefficient systems")
    total = DSeries.zero(T_LINE)
    for a, m, b in zip(c_left, M.diagonal(sigma_dot_D), c_right):
        total = total + _as_t_series(a) * m * _as_t_series(b)
    return total


def pair_via_Mtilde(c_left: Sequence[DSeries], c_right: Sequence[DSeries], correction,
                    Mt: PairingMatrixMtilde = PairingMatrixMtilde()) -> DSeries:
    """Capped pairing with the quadratic correction ``exp(correction * t^2 / 2)``.

    ``correction`` is ``Q(D) - Q(D1) - Q(D2)`` for the capped pieces D1, D2.
    Only the first two coordinates (K.Sigma = 2 and -2) enter.
    """
    if len(c_left) < 2 or len(c_right) < 2:
        raise FloerError("pair_via_Mtilde needs at least two coordinates per side")
    corr = _exp_t(1, 0, as_fraction(correction) / 2)
    total = DSeries.zero(T_LINE)
    for a, m, b in zip(c_left[:2], Mt.entries, c_right[:2]):
        total = total + (_as_t_series(a) * _as_t_series(b)).scale(m)
    return total * corr


def verify_l(B: ManifoldRecord | None = None, w: LatticeClass | None = None) -> Fraction:
    """Recompute the constant l from the blown-up K3 piece.

    D_C(Sigma) is the V4 pairing of phi(B°, 1) with phi(B°, Sigma), whose
    dual coordinates are the values D_B(Sigma^i) and D_B(Sigma^(i+1)).
    Reading off the linear coefficient of the doubled series gives
    l = 4 D_C(Sigma).
    """
    if B is None or w is None:
        from .catalog import get

        entry = get("B")
        B, w = entry.record, entry.named_classes["F"]
    along = ray(to_dws(B, w), B.sigma)
    u = monomial_vector(along, T_LINE.gen("t"))
    v = monomial_vector(along, T_LINE.gen("t"), shift=1)
    dc = pair_v4(u, v).constant_value()
    if not dc.is_real():
        raise FloerError(f"D_C(Sigma) = {dc} is not real")
    l = 4 * dc.re
    if l != L_EXPECTED:
        raise FloerError(f"l = {l} does not match the stored constant {L_EXPECTED}")
    return l
