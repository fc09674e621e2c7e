"""The numbered regression checks behind ``fibersum verify-paper``.

Each check recomputes a worked number from the catalog and compares it with
the printed target exactly.  A check never adjusts its target to fit: when a
printed value is not reproduced the check reports FAIL with the computed
value in its detail line.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from . import catalog
from .donaldson import (ManifoldRecord, d_zero, dws_via_parity, from_dws, to_dws, validate_structure,
                        build_dseries)
from .floer import (N, M_STANDARD, coefficients_from_structure, gram_from_monomials, pair_v4, pair_via_M,
                    relvec_from_monomials, verify_l)
from .gluing import (DIRECT, VIA_B, GluingConfig, glue, glued_record, shift_splitting, sigma_zero_check)
from .lattice import IntersectionLattice, LatticeClass, adjunction_check, pair, validate_allowable
from .series import DSeries, ExpTerm, GaussianRational, expand, project_parity, ray, restrict

__all__ = [
    "CheckResult",
    "PLANE",
    "plane_series",
    "along_plane",
    "stored_ws",
    "run_all",
    "CHECKS",
]

# (t, s) with Q(tD + s Sigma) = 2ts
PLANE = IntersectionLattice(("t", "s"), ((0, 1), (1, 0)), name="plane(t,s)")

SPLIT_SHIFTS = (Fraction(1), Fraction(-1), Fraction(1, 2), Fraction(-1, 2), Fraction(3))
PARITY_DEGREE = 9
EXPANSION_DEGREE = 8


@dataclass(frozen=True)
class CheckResult:
    index: int
    title: str
    passed: bool
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        text = f"[{status}] {self.index:2d}. {self.title}"
        return text + (f" -- {self.detail}" if self.detail else "")


def plane_series(*terms: tuple) -> DSeries:
    """Series on :data:`PLANE` from tuples ``(coeff, q, a_t, a_s)``.

    Each tuple is ``coeff * exp(q ts + a_t t + a_s s)``.  On the plane
    lattice the frequency with coordinates ``(x, y)`` evaluates to
    ``y t + x s``, hence the swap.
    """
    out = []
    for c, q, at, as_ in terms:
        # Q(tD + s Sigma) = 2ts, so exp(q ts) is stored with q/2
        out.append(ExpTerm(Fraction(q) / 2, (GaussianRational.of(Fraction(as_)), GaussianRational.of(Fraction(at))),
                           GaussianRational.of(Fraction(c))))
    return DSeries(PLANE, tuple(out)).canonical()


def along_plane(s: DSeries, D: LatticeClass, sigma: LatticeClass) -> DSeries:
    """``s(tD + s Sigma)`` as a series on :data:`PLANE` (needs D.D = 0, D.Sigma = 1)."""
    if D.square != 0 or pair(D, sigma) != 1 or sigma.square != 0:
        raise ValueError("along_plane needs D.D = 0, D.Sigma = 1, Sigma.Sigma = 0")
    return restrict(s, [("t", D), ("s", sigma)], name=PLANE.name)


def _plane_table(s: DSeries, degree: int = EXPANSION_DEGREE):
    return expand(s, [("t", PLANE.gen("t")), ("s", PLANE.gen("s"))], degree)


def _swap_ts(table):
    return type(table)(table.variables, table.degree, {(b, a): v for (a, b), v in table.coefficients.items()})


def _fmt_plane(s: DSeries) -> str:
    """Human form ``c*exp(q ts + a t + b s)`` of a plane series."""
    def num(z: GaussianRational) -> str:
        return str(z.re) if z.is_real() else f"({z})"

    def mono(c, var: str) -> str:
        return var if c == 1 else "-" + var if c == -1 else f"{c}{var}"

    parts = []
    for t in s.terms:
        bits = [mono(2 * t.q, "ts")] if t.q else []
        for z, var in ((t.freq[1], "t"), (t.freq[0], "s")):
            if z:
                bits.append(mono(z.re, var) if z.is_real() else f"{num(z)}{var}")
        expo = " + ".join(bits) or "0"
        parts.append(f"{num(t.coeff)}*exp({expo})")
    return (" + ".join(parts) or "0").replace("+ -", "- ")


def stored_ws(entry: catalog.CatalogEntry) -> list[LatticeClass]:
    """Named classes of a simple-type entry usable as w (allowable and sign-compatible)."""
    X = entry.record
    out, seen = [], set()
    for name in sorted(entry.named_classes):
        w = entry.named_classes[name]
        if w.coords in seen or not w.is_integral() or not validate_allowable(w, X.sigma):
            continue
        try:
            build_dseries(X, w)
        except ValueError:
            continue
        seen.add(w.coords)
        out.append(w)
    return out


def _glued_dws(cfg: GluingConfig, w1, w2) -> tuple[ManifoldRecord, LatticeClass, DSeries]:
    rec, w = glued_record(cfg, w1, w2)
    return rec, w, to_dws(rec, w)


# ---------------------------------------------------------------------------


def check_gram() -> CheckResult:
    table = catalog.get("SigmaCP1").record.monomials
    got = gram_from_monomials(table)
    bad = [(i, j) for i in range(4) for j in range(4) if got[i][j] != N[i][j]]
    return CheckResult(1, "Gram matrix from Sigma x CP1 monomials", not bad,
                       "all 16 entries match" if not bad else f"mismatch at {bad}")


def check_l() -> CheckResult:
    u = relvec_from_monomials([Fraction(1, 2), 0, 2, 0])
    v = relvec_from_monomials([0, 2, 0, 8])
    dc = pair_v4(u, v).constant_value()
    try:
        l = verify_l()
    except ValueError as exc:
        return CheckResult(2, "l = -32 pipeline", False, str(exc))
    ok = dc == -8 and l == -32
    return CheckResult(2, "l = -32 pipeline", ok, f"pairing = {dc}, l = {l}")


def check_eq_b() -> CheckResult:
    e = catalog.get("B")
    X, lat = e.record, e.record.lattice
    E1, E2 = e.named_classes["E1"], e.named_classes["E2"]
    q = Fraction(1, 4)
    h = Fraction(1, 2)
    # 1/2 cosh(K.a) = 1/4 e^{K.a} + 1/4 e^{-K.a}; 1/2 cos(K.a) likewise with iK
    expected = (DSeries.exp(lat, h, E1 + E2, q) + DSeries.exp(lat, h, -E1 - E2, q)
                + DSeries.exp(lat, -h, E1 - E2, q, imaginary=True)
                + DSeries.exp(lat, -h, E2 - E1, q, imaginary=True))
    w = e.named_classes["F"]
    assert pair(w, E1) == 0 and pair(w, E2) == 0 and w.square == 0
    got = to_dws(X, w)
    return CheckResult(3, "two-sector series of B for w.E1 = w.E2 = w.w = 0", got == expected,
                       "equal as canonical series" if got == expected else f"got {got}")


def _bullet(X: ManifoldRecord, w, D, expected: DSeries, degree: int = 6) -> tuple[bool, str]:
    got_series = along_plane(to_dws(X, w), D, X.sigma)
    ok = _plane_table(got_series, degree) == _plane_table(expected, degree)
    return ok, _fmt_plane(got_series)


def extended_b() -> tuple[ManifoldRecord, LatticeClass, LatticeClass]:
    """B with an extra orthogonal K3 class G of square -2, and w = F + G (w.w = -2)."""
    B = catalog.get("B").record
    names = B.lattice.generator_names + ("G",)
    n = len(names)
    gram = [list(r) + [0] for r in B.lattice.gram] + [[0] * (n - 1) + [-2]]
    lat = IntersectionLattice(names, tuple(tuple(r) for r in gram), name="B+G")
    lift = lambda K: LatticeClass(lat, K.coords + (Fraction(0),))  # noqa: E731
    from .donaldson import SimpleTypeStructure

    rec = ManifoldRecord("B+G", B.b1, B.b_plus, lat, lift(B.sigma),
                         SimpleTypeStructure(tuple((lift(K), a) for K, a in B.structure)), finite_type_order=1)
    return rec, lat.gen("F") + lat.gen("G"), lat.gen("F")


def check_bullets() -> CheckResult:
    e = catalog.get("B")
    B, F = e.record, e.named_classes["F"]
    details = []
    results = []

    target1 = plane_series((Fraction(-1, 4), 1, 0, 2), (Fraction(1, 4), 1, 0, -2))
    ok, got = _bullet(B, e.named_classes["E1"], F, target1)
    results.append(ok)
    details.append(f"bullet 1 {'ok' if ok else 'differs: ' + got}")

    # bullet 2 for both residues of w.w mod 4
    rec_g, w_g, F_g = extended_b()
    for X, w, D in ((B, F, F), (rec_g, w_g, F_g)):
        sign = -1 if (w.square / 2) % 2 else 1
        target2 = plane_series((Fraction(sign, 4), 1, 0, 2), (Fraction(sign, 4), 1, 0, -2),
                               (Fraction(-1, 2), -1, 0, 0))
        ok, got = _bullet(X, w, D, target2)
        results.append(ok)
        details.append(f"bullet 2 (w.w = {w.square}) {'ok' if ok else 'differs: got ' + got}")

    k3 = catalog.get("K3")
    target3 = plane_series((-1, -1, 0, 0))
    for name in ("D", "S"):
        w = k3.named_classes[name]
        ok, got = _bullet(k3.record, w, k3.named_classes["D"], target3)
        results.append(ok)
        details.append(f"bullet 3 (w.w = {w.square}) {'ok' if ok else 'differs: ' + got}")
    return CheckResult(4, "example bullets along (tD, s Sigma)", all(results), "; ".join(details))


def check_doubling() -> CheckResult:
    cfg = catalog.fiber_config("B", "B")
    rec, w, dws = _glued_dws(cfg, catalog.get("B").w, catalog.get("B").w)
    got = along_plane(dws, rec.lattice.gen("D"), rec.sigma)
    target = plane_series((-2, 1, 2, 2), (2, 1, -2, -2))
    table = _plane_table(got)
    sym = table == _swap_ts(table)
    ok = got == target and sym
    return CheckResult(5, "doubling B #_Sigma B", ok,
                       f"got {_fmt_plane(got)}; t<->s symmetric: {sym}")


def check_c2() -> CheckResult:
    cfg = catalog.fiber_config("C", "B")
    rec, w, dws = _glued_dws(cfg, catalog.get("C").w, catalog.get("B").w)
    got = along_plane(dws, rec.lattice.gen("D"), rec.sigma)
    target = plane_series((16, 1, 2, 2), (16, 1, -2, -2))
    ok = got == target
    return CheckResult(6, "C2 = C #_Sigma B", ok,
                       f"got {_fmt_plane(got)}" + ("" if ok else f"; expected {_fmt_plane(target)}"))


CROSS_PAIRS = (("B", "B"), ("B", "C"))
CAPPABLE = ("B", "C")


def _via_b_ws(cfg: GluingConfig):
    return catalog.get(cfg.x1.name).w, catalog.get(cfg.x2.name).w


def check_cross() -> CheckResult:
    details, ok = [], True
    for a, b in CROSS_PAIRS:
        d = catalog.fiber_config(a, b, DIRECT)
        v = catalog.fiber_config(a, b, VIA_B)
        same = glue(d, catalog.get(a).w, catalog.get(b).w) == glue(v, *_via_b_ws(v))
        ok &= same
        details.append(f"({a},{b}) {'equal' if same else 'differ'}")
    return CheckResult(7, "direct and capped formulas agree", ok, "; ".join(details))


def check_sigma_zero() -> CheckResult:
    details, ok = [], True
    for a in CAPPABLE:
        for b in CAPPABLE:
            cfg = catalog.fiber_config(a, b, VIA_B)
            s = glue(cfg, *_via_b_ws(cfg))
            good = sigma_zero_check(s, glued_record(cfg, *_via_b_ws(cfg))[0].sigma)
            ok &= good
            details.append(f"({a},{b}) {'ok' if good else 'has K.Sigma = 0'}")
    return CheckResult(8, "no glued basic class with K.Sigma = 0", ok, "; ".join(details))


def _parity_ok(X: ManifoldRecord, w: LatticeClass, directions) -> bool:
    d0 = d_zero(X, w)
    for sign, residue in ((1, d0 % 4), (-1, (d0 + 2) % 4)):
        s = project_parity(build_dseries(X, w), d0, sign)
        table = expand(s, directions, PARITY_DEGREE)
        if any(deg % 4 != residue for deg in table.support_degrees()):
            return False
    return True


def check_properties() -> CheckResult:
    failures = []
    records = []
    for name in catalog.simple_type_names():
        e = catalog.get(name)
        records.append((name, e.record, stored_ws(e)))
    for a, b in (("B", "B"), ("C", "B"), ("B", "C"), ("K3", "B")):
        cfg = catalog.fiber_config(a, b)
        rec, w = glued_record(cfg, catalog.get(a).w, catalog.get(b).w)
        records.append((cfg.name, rec, [w]))

    for name, X, ws in records:
        if validate_structure(X):
            failures.append(f"{name}: structure violations {validate_structure(X)}")
        for K, _ in X.structure:
            if abs(pair(K, X.sigma)) > 2 or (K.is_integral() and not adjunction_check(K, X.sigma, 2)):
                failures.append(f"{name}: adjunction fails for {K}")
        directions = [(g, X.lattice.gen(g)) for g in X.lattice.generator_names]
        for w in ws:
            s = to_dws(X, w)
            if from_dws(s, X.sigma, d_zero(X, w), w) != X.structure:
                failures.append(f"{name}, w={w}: round trip")
            if to_dws(X, w + 2 * X.sigma) != s:
                failures.append(f"{name}, w={w}: w + 2 Sigma")
            if dws_via_parity(X, w) != s:
                failures.append(f"{name}, w={w}: parity assembly")
            if not _parity_ok(X, w, directions):
                failures.append(f"{name}, w={w}: degree support mod 4")

    for a, b in (("B", "B"), ("C", "B"), ("B", "C")):
        for mode in (DIRECT, VIA_B):
            cfg = catalog.fiber_config(a, b, mode)
            ws = _via_b_ws(cfg) if mode == VIA_B else (catalog.get(a).w, catalog.get(b).w)
            base = glue(cfg, *ws)
            for r in SPLIT_SHIFTS:
                if glue(shift_splitting(cfg, r), *ws) != base:
                    failures.append(f"({a},{b}) {mode}: splitting shift r = {r}")
    return CheckResult(9, "property suites", not failures,
                       f"{len(records)} records" if not failures else "; ".join(failures))


def check_paths() -> CheckResult:
    details, ok = [], True
    for a, b in (("B", "B"), ("C", "B")):
        ea, eb = catalog.get(a), catalog.get(b)
        cfg = catalog.fiber_config(a, b)
        rec, w, dws = _glued_dws(cfg, ea.w, eb.w)
        D = rec.lattice.gen("D")
        c1 = coefficients_from_structure(ea.record, ea.w, ea.fiber)
        c2 = coefficients_from_structure(eb.record, eb.w, eb.fiber)
        via_m = pair_via_M(c1, c2, M_STANDARD, pair(D, rec.sigma))
        same = via_m == ray(dws, D)
        ok &= same
        details.append(f"({a},{b}) {'equal' if same else 'differ'}")
    k3, b = catalog.get("K3"), catalog.get("B")
    c_k3 = coefficients_from_structure(k3.record, k3.w, k3.fiber)
    c_b = coefficients_from_structure(b.record, b.w, b.fiber)
    zero = pair_via_M(c_k3, c_b).is_zero() and not c_k3[2].is_zero()
    ok &= zero
    details.append(f"(K3,B) {'zero via M33' if zero else 'non-zero'}")
    return CheckResult(10, "pairing model agrees with the gluing formula", ok, "; ".join(details))


CHECKS: tuple[Callable[[], CheckResult], ...] = (
    check_gram, check_l, check_eq_b, check_bullets, check_doubling,
    check_c2, check_cross, check_sigma_zero, check_properties, check_paths,
)


def run_all() -> list[CheckResult]:
    out = []
    for i, fn in enumerate(CHECKS, start=1):
        try:
            out.append(fn())
        except Exception as exc:  # a crashing check is a failing check
            out.append(CheckResult(i, fn.__name__, False, f"error: {type(exc).__name__}: {exc}"))
    return out
