"""Finite exponential-quadratic series over the Gaussian rationals.

A series on a lattice L is a finite sum of terms

    c * exp(q * Q(a) + lam(a)),        a in L (x) Q,

where ``lam(a) = freq . gram . a`` and ``freq`` has Gaussian-rational
coordinates.  A Donaldson series term ``exp(Q/2 + K.a)`` therefore has
``q = 1/2``.  Imaginary frequencies carry the ``exp(i K.a)`` terms.  All
arithmetic is exact and every public operation returns canonical form:
like terms merged, zero terms dropped, terms sorted by ``q`` descending and
then by ``freq`` lexicographically on ``(re, im)`` pairs.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .lattice import IntersectionLattice, LatticeClass, LatticeError, as_fraction, solve

__all__ = [
    "GaussianRational",
    "I",
    "i_power",
    "ExpTerm",
    "DSeries",
    "ExpansionTable",
    "T_LINE",
    "canonicalize",
    "add",
    "mul",
    "expand",
    "evaluate_monomial",
    "project_parity",
    "ray",
    "restrict",
    "render",
    "parse_series",
]


@dataclass(frozen=True, eq=False)
class GaussianRational:
    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "re", as_fraction(self.re))
        object.__setattr__(self, "im", as_fraction(self.im))

    @classmethod
    def of(cls, value) -> GaussianRational:
        if isinstance(value, GaussianRational):
            return value
        return cls(as_fraction(value), Fraction(0))

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.im == 0 and self.re == other
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        return NotImplemented

    def __hash__(self):
        return hash(self.re) if self.im == 0 else hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __add__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re * o.re - self.im * o.im,
                                self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        norm = o.re * o.re + o.im * o.im
        if norm == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        return self * GaussianRational(o.re / norm, -o.im / norm)

    def __rtruediv__(self, other):
        return GaussianRational.of(other) / self

    def conjugate(self) -> GaussianRational:
        return GaussianRational(self.re, -self.im)

    def is_real(self) -> bool:
        return self.im == 0

    def __repr__(self):
        return f"GaussianRational({self.re}, {self.im})"

    def __str__(self):
        return _fmt_gauss(self)


def _coerce(value) -> GaussianRational | None:
    if isinstance(value, GaussianRational):
        return value
    if isinstance(value, (int, Fraction)) and not isinstance(value, bool):
        return GaussianRational(Fraction(value), Fraction(0))
    return None


ZERO = GaussianRational()
ONE = GaussianRational(1)
I = GaussianRational(0, 1)


def i_power(n: int) -> GaussianRational:
    """``i**n`` for any integer n."""
    if isinstance(n, Fraction):
        if n.denominator != 1:
            raise ValueError(f"i**{n} needs an integer exponent")
        n = n.numerator
    return (ONE, I, -ONE, -I)[n % 4]


def _fmt_q(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def _fmt_gauss(z: GaussianRational) -> str:
    if z.im == 0:
        return _fmt_q(z.re)
    sign = "-" if z.im < 0 else "+"
    return f"{_fmt_q(z.re)}{sign}{_fmt_q(abs(z.im))}i"


@dataclass(frozen=True)
class ExpTerm:
    q: Fraction
    freq: tuple[GaussianRational, ...]
    coeff: GaussianRational

    def __post_init__(self):
        object.__setattr__(self, "q", as_fraction(self.q))
        object.__setattr__(self, "freq", tuple(GaussianRational.of(f) for f in self.freq))
        object.__setattr__(self, "coeff", GaussianRational.of(self.coeff))

    @property
    def key(self):
        return (self.q, self.freq)

    def sort_key(self):
        return (-self.q, tuple((f.re, f.im) for f in self.freq))

    def is_real_freq(self) -> bool:
        return all(f.im == 0 for f in self.freq)

    def is_imaginary_freq(self) -> bool:
        return all(f.re == 0 for f in self.freq)

    def real_class(self, lattice: IntersectionLattice) -> LatticeClass:
        return LatticeClass(lattice, tuple(f.re for f in self.freq))

    def imag_class(self, lattice: IntersectionLattice) -> LatticeClass:
        return LatticeClass(lattice, tuple(f.im for f in self.freq))


@dataclass(frozen=True, eq=False)
class DSeries:
    """A finite series on ``lattice``; see the module docstring.

    The constructor stores terms as given.  Use :func:`canonicalize` (or any
    arithmetic, which canonicalizes) to obtain canonical form.  Equality is
    structural equality of canonical forms.
    """

    lattice: IntersectionLattice
    terms: tuple[ExpTerm, ...] = ()

    def __post_init__(self):
        terms = tuple(self.terms)
        for t in terms:
            if len(t.freq) != self.lattice.rank:
                raise LatticeError(
                    f"term frequency has length {len(t.freq)}, lattice rank is {self.lattice.rank}"
                )
        object.__setattr__(self, "terms", terms)

    @classmethod
    def zero(cls, lattice: IntersectionLattice) -> DSeries:
        return cls(lattice, ())

    @classmethod
    def constant(cls, lattice: IntersectionLattice, c=1) -> DSeries:
        return canonicalize(cls(lattice, (ExpTerm(Fraction(0), (ZERO,) * lattice.rank, GaussianRational.of(c)),)))

    @classmethod
    def exp(cls, lattice: IntersectionLattice, q=0, freq: LatticeClass | Sequence | None = None,
            coeff=1, imaginary: bool = False) -> DSeries:
        """``coeff * exp(q Q + lam)``; ``imaginary`` multiplies the frequency by i."""
        if freq is None:
            coords = (Fraction(0),) * lattice.rank
        elif isinstance(freq, LatticeClass):
            if freq.lattice != lattice:
                raise LatticeError(f"lattice mismatch: {freq.lattice.label} vs {lattice.label}")
            coords = freq.coords
        else:
            coords = tuple(freq)
        f = tuple(GaussianRational.of(c) * (I if imaginary else ONE) for c in coords)
        return canonicalize(cls(lattice, (ExpTerm(as_fraction(q), f, GaussianRational.of(coeff)),)))

    @property
    def is_canonical(self) -> bool:
        return canonicalize(self).terms == self.terms

    def canonical(self) -> DSeries:
        return canonicalize(self)

    def __eq__(self, other):
        if not isinstance(other, DSeries):
            return NotImplemented
        return self.lattice == other.lattice and canonicalize(self).terms == canonicalize(other).terms

    def __hash__(self):
        return hash((self.lattice, canonicalize(self).terms))

    def __add__(self, other):
        if isinstance(other, DSeries):
            return add(self, other)
        return NotImplemented

    def __sub__(self, other):
        if isinstance(other, DSeries):
            return add(self, -other)
        return NotImplemented

    def __neg__(self):
        return self.scale(-1)

    def __mul__(self, other):
        if isinstance(other, DSeries):
            return mul(self, other)
        if _coerce(other) is not None:
            return self.scale(other)
        return NotImplemented

    __rmul__ = __mul__

    def scale(self, c) -> DSeries:
        g = GaussianRational.of(c)
        return canonicalize(DSeries(self.lattice, tuple(ExpTerm(t.q, t.freq, t.coeff * g) for t in self.terms)))

    def is_zero(self) -> bool:
        return not canonicalize(self).terms

    def constant_value(self) -> GaussianRational:
        """Value of a constant series; raises if any term has a non-zero exponent."""
        c = canonicalize(self)
        if not c.terms:
            return ZERO
        if len(c.terms) == 1 and c.terms[0].q == 0 and not any(c.terms[0].freq):
            return c.terms[0].coeff
        raise ValueError("series is not constant")

    def relabel(self, lattice: IntersectionLattice) -> DSeries:
        """Same terms on another lattice with identical Gram matrix."""
        if lattice.gram != self.lattice.gram:
            raise LatticeError(f"cannot relabel onto {lattice.label}: Gram matrices differ")
        return DSeries(lattice, self.terms)

    def __str__(self):
        return render(self)

    def __repr__(self):
        return f"DSeries({self.lattice.label}: {render(self)})"


def canonicalize(s: DSeries) -> DSeries:
    merged: dict = {}
    for t in s.terms:
        merged[t.key] = merged.get(t.key, ZERO) + t.coeff
    terms = [ExpTerm(q, f, c) for (q, f), c in merged.items() if c]
    terms.sort(key=ExpTerm.sort_key)
    return DSeries(s.lattice, tuple(terms))


def _same_lattice(a: DSeries, b: DSeries) -> None:
    if a.lattice != b.lattice:
        raise LatticeError(f"lattice mismatch: {a.lattice.label} vs {b.lattice.label}")


def add(a: DSeries, b: DSeries) -> DSeries:
    _same_lattice(a, b)
    return canonicalize(DSeries(a.lattice, a.terms + b.terms))


def mul(a: DSeries, b: DSeries) -> DSeries:
    _same_lattice(a, b)
    out = []
    for x in a.terms:
        for y in b.terms:
            out.append(ExpTerm(x.q + y.q, tuple(p + r for p, r in zip(x.freq, y.freq)), x.coeff * y.coeff))
    return canonicalize(DSeries(a.lattice, tuple(out)))


def _lam(freq: Sequence[GaussianRational], A: LatticeClass) -> GaussianRational:
    cov = A.covector()
    return sum((f * c for f, c in zip(freq, cov) if c), ZERO)


# ---------------------------------------------------------------------------
# finite jets


@dataclass(frozen=True)
class ExpansionTable:
    """Taylor coefficients through total degree ``degree``.

    ``coefficients`` maps exponent tuples (one entry per variable) to the
    non-zero coefficient of that monomial.
    """

    variables: tuple[str, ...]
    degree: int
    coefficients: Mapping[tuple[int, ...], GaussianRational]

    def __post_init__(self):
        coeffs = {tuple(k): GaussianRational.of(v) for k, v in dict(self.coefficients).items() if v}
        for k in coeffs:
            if len(k) != len(self.variables) or sum(k) > self.degree or min(k) < 0:
                raise ValueError(f"multi-degree {k} out of range")
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "coefficients", coeffs)

    def coefficient(self, *exponents: int) -> GaussianRational:
        return self.coefficients.get(tuple(exponents), ZERO)

    def __eq__(self, other):
        if not isinstance(other, ExpansionTable):
            return NotImplemented
        return (self.variables, self.degree, self.coefficients) == (
            other.variables, other.degree, other.coefficients)

    def __hash__(self):
        return hash((self.variables, self.degree, frozenset(self.coefficients.items())))

    def truncate(self, degree: int) -> ExpansionTable:
        return ExpansionTable(self.variables, degree,
                              {k: v for k, v in self.coefficients.items() if sum(k) <= degree})

    def support_degrees(self) -> set[int]:
        return {sum(k) for k in self.coefficients}

    def render(self) -> str:
        lines = [f"variables: {' '.join(self.variables)}", f"degree: {self.degree}"]
        for k in sorted(self.coefficients, key=lambda k: (sum(k), tuple(-e for e in k))):
            mono = "*".join(f"{v}^{e}" for v, e in zip(self.variables, k) if e) or "1"
            lines.append(f"{mono}: {_fmt_gauss(self.coefficients[k])}")
        return "\n".join(lines)

    __str__ = render


def _poly_mul(a: dict, b: dict, degree: int) -> dict:
    out: dict = {}
    for ka, va in a.items():
        da = sum(ka)
        for kb, vb in b.items():
            if da + sum(kb) > degree:
                continue
            k = tuple(x + y for x, y in zip(ka, kb))
            out[k] = out.get(k, ZERO) + va * vb
    return {k: v for k, v in out.items() if v}


def _exp_poly(p: dict, nvars: int, degree: int) -> dict:
    # p has no constant term, so p**n only reaches degree >= n
    result = {(0,) * nvars: ONE}
    power = {(0,) * nvars: ONE}
    for n in range(1, degree + 1):
        power = _poly_mul(power, p, degree)
        if not power:
            break
        inv = Fraction(1, math.factorial(n))
        for k, v in power.items():
            result[k] = result.get(k, ZERO) + v * inv
    return {k: v for k, v in result.items() if v}


def expand(s: DSeries, directions: Sequence[tuple[str, LatticeClass]], degree: int = 8) -> ExpansionTable:
    """Jet of ``s(t1 A1 + ... + tn An)`` through total degree ``degree``."""
    if degree < 0:
        raise ValueError("degree must be non-negative")
    names = tuple(n for n, _ in directions)
    classes = [A for _, A in directions]
    for A in classes:
        if A.lattice != s.lattice:
            raise LatticeError(f"lattice mismatch: {A.lattice.label} vs {s.lattice.label}")
    n = len(classes)
    gram = [[A.dot(B) for B in classes] for A in classes]
    total: dict = {}
    cache: dict = {}
    for t in canonicalize(s).terms:
        key = (t.q, t.freq)
        if key not in cache:
            poly: dict = {}
            for i in range(n):
                e = [0] * n
                e[i] = 1
                lam = _lam(t.freq, classes[i])
                if lam:
                    poly[tuple(e)] = lam
            if t.q:
                for i in range(n):
                    for j in range(i, n):
                        e = [0] * n
                        e[i] += 1
                        e[j] += 1
                        v = t.q * gram[i][j] * (1 if i == j else 2)
                        if v:
                            k = tuple(e)
                            poly[k] = poly.get(k, ZERO) + GaussianRational.of(v)
            cache[key] = _exp_poly(poly, n, degree)
        for k, v in cache[key].items():
            total[k] = total.get(k, ZERO) + t.coeff * v
    return ExpansionTable(names, degree, total)


def evaluate_monomial(s: DSeries, A: LatticeClass, d: int) -> GaussianRational:
    """The value ``s(A^d)``: d! times the u^d coefficient of ``s(uA)``."""
    table = expand(s, [("u", A)], d)
    return table.coefficient(d) * math.factorial(d)


def project_parity(s: DSeries, d0: int, sign: int = 1) -> DSeries:
    """``(s(a) + sign * i^{-d0} s(i a)) / 2``, computed termwise.

    Keeps only the Taylor degrees congruent to ``d0`` mod 4 (``sign=+1``) or
    to ``d0 + 2`` mod 4 (``sign=-1``).
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    half = Fraction(1, 2)
    rot = i_power(-d0) * sign
    out = []
    for t in s.terms:
        out.append(ExpTerm(t.q, t.freq, t.coeff * half))
        out.append(ExpTerm(-t.q, tuple(f * I for f in t.freq), t.coeff * rot * half))
    return canonicalize(DSeries(s.lattice, tuple(out)))


# ---------------------------------------------------------------------------
# restriction to rays and planes

T_LINE = IntersectionLattice(("t",), ((1,),), name="t-line")


def ray(s: DSeries, A: LatticeClass) -> DSeries:
    """``t -> s(tA)`` as a series on the one-variable lattice :data:`T_LINE`.

    On ``T_LINE`` we have ``Q(t) = t^2``, so a term ``exp(q Q(tA))``
    becomes ``q * A.A`` there.
    """
    if A.lattice != s.lattice:
        raise LatticeError(f"lattice mismatch: {A.lattice.label} vs {s.lattice.label}")
    a2 = A.square
    terms = tuple(ExpTerm(t.q * a2, (_lam(t.freq, A),), t.coeff) for t in s.terms)
    return canonicalize(DSeries(T_LINE, terms))


def restrict(s: DSeries, directions: Sequence[tuple[str, LatticeClass]], name: str = "") -> DSeries:
    """Pull ``s`` back along ``(t1, ..., tn) -> sum ti Ai``.

    The result lives on the lattice spanned by the directions with the
    induced Gram matrix, which must be non-degenerate.
    """
    names = tuple(n for n, _ in directions)
    classes = [A for _, A in directions]
    gram = tuple(tuple(A.dot(B) for B in classes) for A in classes)
    lat = IntersectionLattice(names, gram, name=name or "plane(" + ",".join(names) + ")")
    terms = []
    for t in s.terms:
        lam = [_lam(t.freq, A) for A in classes]
        try:
            re_part = solve(gram, [z.re for z in lam])
            im_part = solve(gram, [z.im for z in lam])
        except LatticeError:
            raise LatticeError("restriction directions span a degenerate plane") from None
        terms.append(ExpTerm(t.q, tuple(GaussianRational(a, b) for a, b in zip(re_part, im_part)), t.coeff))
    return canonicalize(DSeries(lat, tuple(terms)))


# ---------------------------------------------------------------------------
# canonical text


def _render_term(t: ExpTerm, names: Sequence[str]) -> str:
    parts = [f"({_fmt_q(t.q)})*Q"]
    for name, f in zip(names, t.freq):
        if f:
            parts.append(f"({_fmt_gauss(f)})*{name}")
    return f"({_fmt_gauss(t.coeff)}) * exp({' + '.join(parts)})"


def render(s: DSeries) -> str:
    c = canonicalize(s)
    if not c.terms:
        return "0"
    return " + ".join(_render_term(t, c.lattice.generator_names) for t in c.terms)


_RAT = r"-?\d+/\d+"
_GAUSS = rf"({_RAT})(?:([+-])(\d+/\d+)i)?"
_TERM_RE = re.compile(rf"\({_GAUSS}\) \* exp\(\(({_RAT})\)\*Q((?: \+ \({_RAT}(?:[+-]\d+/\d+i)?\)\*[A-Za-z_][A-Za-z0-9_]*)*)\)")
_FREQ_RE = re.compile(rf" \+ \({_GAUSS}\)\*([A-Za-z_][A-Za-z0-9_]*)")


def _parse_gauss(re_s: str, sign: str | None, im_s: str | None) -> GaussianRational:
    im = Fraction(im_s) if im_s else Fraction(0)
    if sign == "-":
        im = -im
    return GaussianRational(Fraction(re_s), im)


def parse_series(text: str, lattice: IntersectionLattice) -> DSeries:
    """Inverse of :func:`render` for a known lattice."""
    src = text.strip()
    if src == "0":
        return DSeries.zero(lattice)
    terms = []
    pos = 0
    while True:
        m = _TERM_RE.match(src, pos)
        if m is None:
            raise ValueError(f"malformed series text at offset {pos}: {src[pos:pos + 40]!r}")
        coeff = _parse_gauss(m.group(1), m.group(2), m.group(3))
        q = Fraction(m.group(4))
        freq = [ZERO] * lattice.rank
        for fm in _FREQ_RE.finditer(m.group(5)):
            freq[lattice.index(fm.group(4))] = _parse_gauss(fm.group(1), fm.group(2), fm.group(3))
        terms.append(ExpTerm(q, tuple(freq), coeff))
        pos = m.end()
        if pos == len(src):
            break
        if not src.startswith(" + ", pos):
            raise ValueError(f"expected ' + ' at offset {pos}")
        pos += 3
    return canonicalize(DSeries(lattice, tuple(terms)))
