"""Finite-rank lattices with a symmetric bilinear form, and classes in them.

Classes and covectors share one representation: a coordinate vector over the
generators, evaluated against other classes through the Gram matrix.
Coordinates are rationals so that rescaled classes (``1/2*Sigma``) are
expressible; integrality is only checked where an operation needs it.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

__all__ = [
    "LatticeError",
    "IntersectionLattice",
    "LatticeClass",
    "pair",
    "validate_allowable",
    "adjunction_check",
    "solve",
    "inverse",
    "as_fraction",
]


class LatticeError(ValueError):
    pass


def as_fraction(value) -> Fraction:
    """Coerce an int, Fraction or ``"p/q"`` string to a Fraction.

    Floats are refused: every quantity in this package is exact.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise LatticeError(f"not a rational: {value!r}") from exc
    raise TypeError(f"cannot use {type(value).__name__} as an exact rational")


@dataclass(frozen=True)
class IntersectionLattice:
    generator_names: tuple[str, ...]
    gram: tuple[tuple[Fraction, ...], ...]
    name: str = ""

    def __post_init__(self):
        names = tuple(self.generator_names)
        gram = tuple(tuple(as_fraction(x) for x in row) for row in self.gram)
        object.__setattr__(self, "generator_names", names)
        object.__setattr__(self, "gram", gram)
        if not names:
            raise LatticeError("lattice must have positive rank")
        if len(set(names)) != len(names):
            raise LatticeError(f"generator names are not distinct: {names}")
        n = len(names)
        if len(gram) != n or any(len(row) != n for row in gram):
            raise LatticeError(f"gram must be {n}x{n}")
        for i in range(n):
            for j in range(i + 1, n):
                if gram[i][j] != gram[j][i]:
                    raise LatticeError(
                        f"gram not symmetric at ({names[i]}, {names[j]})"
                    )

    @property
    def rank(self) -> int:
        return len(self.generator_names)

    @property
    def label(self) -> str:
        return self.name or "<" + ",".join(self.generator_names) + ">"

    def index(self, name: str) -> int:
        try:
            return self.generator_names.index(name)
        except ValueError:
            raise LatticeError(f"unknown generator {name!r} in lattice {self.label}")

    def zero(self) -> LatticeClass:
        return LatticeClass(self, (Fraction(0),) * self.rank)

    def gen(self, name: str) -> LatticeClass:
        coords = [Fraction(0)] * self.rank
        coords[self.index(name)] = Fraction(1)
        return LatticeClass(self, tuple(coords))

    def element(self, coeffs: Mapping[str, object]) -> LatticeClass:
        """Class from a sparse ``{generator: coefficient}`` map."""
        coords = [Fraction(0)] * self.rank
        for key, value in coeffs.items():
            coords[self.index(key)] += as_fraction(value)
        return LatticeClass(self, tuple(coords))

    def parse(self, text: str, named: Mapping[str, LatticeClass] | None = None) -> LatticeClass:
        """Parse an expression such as ``S-E1-E2`` or ``1/2*K - 1/2*Sigma``.

        Identifiers resolve to generators first, then to ``named`` classes.
        """
        return _parse_expression(self, text, named or {})

    def is_degenerate(self) -> bool:
        try:
            inverse(self.gram)
        except LatticeError:
            return True
        return False


@dataclass(frozen=True)
class LatticeClass:
    lattice: IntersectionLattice
    coords: tuple[Fraction, ...] = field()

    def __post_init__(self):
        coords = tuple(as_fraction(c) for c in self.coords)
        if len(coords) != self.lattice.rank:
            raise LatticeError(
                f"class has {len(coords)} coordinates, lattice {self.lattice.label} "
                f"has rank {self.lattice.rank}"
            )
        object.__setattr__(self, "coords", coords)

    def _check(self, other: LatticeClass) -> None:
        if other.lattice != self.lattice:
            raise LatticeError(
                f"lattice mismatch: {self.lattice.label} vs {other.lattice.label}"
            )

    def __add__(self, other: LatticeClass) -> LatticeClass:
        if not isinstance(other, LatticeClass):
            return NotImplemented
        self._check(other)
        return LatticeClass(self.lattice, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: LatticeClass) -> LatticeClass:
        if not isinstance(other, LatticeClass):
            return NotImplemented
        return self + (-other)

    def __neg__(self) -> LatticeClass:
        return LatticeClass(self.lattice, tuple(-a for a in self.coords))

    def __mul__(self, scalar) -> LatticeClass:
        if isinstance(scalar, LatticeClass):
            return NotImplemented
        s = as_fraction(scalar)
        return LatticeClass(self.lattice, tuple(s * a for a in self.coords))

    __rmul__ = __mul__

    def dot(self, other: LatticeClass) -> Fraction:
        return pair(self, other)

    @property
    def square(self) -> Fraction:
        return pair(self, self)

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coords)

    def is_zero(self) -> bool:
        return not any(self.coords)

    def covector(self) -> tuple[Fraction, ...]:
        """Pairings of this class with each generator."""
        g = self.lattice.gram
        return tuple(sum((g[i][j] * c for j, c in enumerate(self.coords)), Fraction(0))
                     for i in range(self.lattice.rank))

    def __str__(self) -> str:
        parts = []
        for name, c in zip(self.lattice.generator_names, self.coords):
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            body = name if mag == 1 else f"{mag}*{name}"
            parts.append((sign, body))
        if not parts:
            return "0"
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += sign + body
        return out


def pair(u: LatticeClass, v: LatticeClass) -> Fraction:
    u._check(v)
    g = u.lattice.gram
    total = Fraction(0)
    for i, a in enumerate(u.coords):
        if a:
            row = g[i]
            total += a * sum((row[j] * b for j, b in enumerate(v.coords) if b), Fraction(0))
    return total


def validate_allowable(w: LatticeClass, sigma: LatticeClass) -> bool:
    """True iff ``w.sigma`` is odd and ``sigma`` has square zero."""
    w._check(sigma)
    if not (w.is_integral() and sigma.is_integral()):
        raise LatticeError("allowable pairs need integral classes")
    return pair(w, sigma) % 2 == 1 and pair(sigma, sigma) == 0


def adjunction_check(K: LatticeClass, S: LatticeClass, genus: int) -> bool:
    """Adjunction bound ``2g - 2 >= S.S + |K.S|`` for a surface of square >= 0."""
    K._check(S)
    if genus < 0:
        raise LatticeError("genus must be non-negative")
    if not (K.is_integral() and S.is_integral()):
        raise LatticeError("adjunction check needs integral classes")
    s2 = pair(S, S)
    if s2 < 0:
        raise LatticeError("bound not applicable: surface has negative square")
    return 2 * genus - 2 >= s2 + abs(pair(K, S))


def solve(matrix: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]) -> tuple[Fraction, ...]:
    """Solve ``matrix @ x = rhs`` exactly; raises on a singular matrix."""
    inv = inverse(matrix)
    return tuple(sum((row[j] * as_fraction(rhs[j]) for j in range(len(rhs))), Fraction(0))
                 for row in inv)


def inverse(matrix: Sequence[Sequence[object]]) -> tuple[tuple[Fraction, ...], ...]:
    """Exact inverse by Gauss-Jordan elimination over the rationals."""
    n = len(matrix)
    if any(len(row) != n for row in matrix):
        raise LatticeError("matrix is not square")
    a = [[as_fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(matrix)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot is None:
            raise LatticeError("matrix is singular")
        a[col], a[pivot] = a[pivot], a[col]
        p = a[col][col]
        a[col] = [x / p for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return tuple(tuple(row[n:]) for row in a)


_TERM = re.compile(
    r"\s*([+-])?\s*(?:(\d+(?:/\d+)?)\s*\*?\s*)?([A-Za-z_][A-Za-z0-9_]*)?\s*"
)


def _parse_expression(lattice: IntersectionLattice, text: str,
                      named: Mapping[str, LatticeClass]) -> LatticeClass:
    src = text.strip()
    if not src:
        raise LatticeError("empty class expression")
    result = lattice.zero()
    pos = 0
    first = True
    while pos < len(src):
        m = _TERM.match(src, pos)
        if m is None or m.end() == pos:
            raise LatticeError(f"cannot parse class expression {text!r} at offset {pos}")
        sign, coef, ident = m.groups()
        if sign is None and not first:
            raise LatticeError(f"missing operator in {text!r} at offset {pos}")
        if coef is None and ident is None:
            raise LatticeError(f"dangling sign in {text!r}")
        scale = as_fraction(coef) if coef else Fraction(1)
        if sign == "-":
            scale = -scale
        if ident is None:
            if scale != 0:
                raise LatticeError(f"bare constant {coef} in class expression {text!r}")
            term = lattice.zero()
        elif ident in lattice.generator_names:
            term = lattice.gen(ident)
        elif ident in named:
            term = named[ident]
            if term.lattice != lattice:
                raise LatticeError(f"named class {ident!r} lives in another lattice")
        else:
            raise LatticeError(f"unknown generator {ident!r} in lattice {lattice.label}")
        result = result + scale * term
        pos = m.end()
        first = False
    return result


def sparse(cls: LatticeClass) -> dict[str, str]:
    """Sparse ``{generator: "p/q"}`` map used by the manifest format."""
    return {name: str(c) for name, c in zip(cls.lattice.generator_names, cls.coords) if c}

