"""Trace-function fibers: numeric solutions of {riley = 0, m^p l^q = x}.

The primary route works in the (m, l) eigenvalue plane: each component
carries an A-polynomial (stored from the preset or computed once, exactly, as
the resultant of the Riley polynomial with l - L(y, m)), the slope equation
m^p l^q = x is intersected with it by a small numeric resultant, and the y
coordinates are recovered from the Riley polynomial afterwards.  This keeps
the Sylvester matrices tiny for every slope; the direct (y, m) elimination
(which powers the longitude expression q times and conditions badly) is kept
as an independent cross-check route.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError, NonGenericError, SolverError
from .laurent import LaurentPoly, resultant, resultant_numeric
from .numerics import Context, solve_linear
from .presets import KnotPreset, PresetComponent
from .roots import univariate_roots

YM = ("y", "m")
ML = ("m", "l")
YML = ("y", "m", "l")

PARABOLIC_TOL = 1e-8        # |m -+ 1| below this flags a boundary-parabolic point
CANDIDATE_TOL = 1e-4        # loose filters before Newton refinement
TRACE_TOL = 1e-8
DEDUP_TOL = 1e-8


def accept_tol(bits: int) -> float:
    """Residual acceptance threshold relative to the evaluation scale."""
    return min(1e-10, 2.0 ** (60 - bits))


@dataclass
class CharacterPoint:
    """A refined solution (y, m, l) on one component of the fiber."""

    component: int
    y: object
    m: object
    l: object
    residuals: tuple          # (riley, longitude match, slope equation)
    jacobian_det: object      # det d(f,g,h)/d(y,m,l) of the bordered system
    torsion_gamma: object = None

    def sort_key(self):
        return (self.component, float(self.m.real), float(self.m.imag),
                float(self.y.real), float(self.y.imag))


def pick_x(z, ctx: Context | None = None):
    """The deterministic root of x^2 - z x + 1: |x| > 1, ties by arg in [0, pi)."""
    if ctx is None:
        ctx = Context()
    with ctx.active():
        z = ctx.convert(z)
        if float(abs(z - 2)) < 1e-12 or float(abs(z + 2)) < 1e-12:
            raise NonGenericError("z = +-2 makes x = +-1 a double root")
        disc = ctx.sqrt(z * z - 4)
        x1 = (z + disc) / 2
        x2 = (z - disc) / 2
        a1, a2 = float(abs(x1)), float(abs(x2))
        if abs(a1 - a2) > 1e-14 * (a1 + a2):
            return x1 if a1 > a2 else x2
        ang1 = math.atan2(float(x1.imag), float(x1.real))
        return x1 if 0.0 <= ang1 < math.pi else x2


def d_gamma(p: int, q: int) -> int:
    """1 if mu^p lambda^q dies in H_1(M; Z/2) (p even), else 2."""
    if math.gcd(p, q) != 1:
        raise DomainError("slope (p, q) must be coprime")
    return 1 if p % 2 == 0 else 2


def resolve_slope_inputs(z, x, ctx: Context):
    """Derive (z, x) from whichever of the two was given."""
    if x is None and z is None:
        raise DomainError("either z or x must be supplied")
    with ctx.active():
        if x is None:
            z = ctx.convert(z)
            return z, pick_x(z, ctx)
        x = ctx.convert(x)
        if float(abs(x)) == 0.0:
            raise DomainError("x must be nonzero")
        zx = x + 1 / x
        if z is not None:
            z = ctx.convert(z)
            if float(abs(z - zx)) > 1e-8 * (1.0 + float(abs(z))):
                raise DomainError("inconsistent z and x: x + 1/x != z")
            return z, x
        return zx, x


def component_apoly(comp: PresetComponent) -> LaurentPoly:
    """The component's A-polynomial, cleared and primitive.

    Falls back to the exact Sylvester resultant of the Riley polynomial with
    l - L(y, m) when the preset does not store one; the result is cached.
    """
    cached = getattr(comp, "_apoly_cleared", None)
    if cached is not None:
        return cached
    if comp.apoly is not None:
        a, _ = comp.apoly.clear_negative()
    else:
        f3 = comp.riley.with_vars(YML)
        g3 = LaurentPoly.variable(YML, "l") - comp.longitude_expr.with_vars(YML)
        a = resultant(f3, g3, "y")
        a, _ = a.clear_negative()
    a = a.primitive()
    comp._apoly_cleared = a
    return a


def slope_polynomial(p: int, q: int, x) -> LaurentPoly:
    """m^p l^q - x as a Laurent polynomial in (m, l)."""
    return LaurentPoly.monomial(ML, (p, q)) - x


def fiber_equation(comp: PresetComponent, p: int, q: int, x) -> LaurentPoly:
    """Polynomial form of m^p l^q = x after substituting l = L(y, m).

    Used by the (y, m) cross-check route.  For q < 0 the equation is
    multiplied by L^(-q); the spurious L = 0 locus is filtered later.
    """
    L = comp.longitude_expr
    if q > 0:
        return LaurentPoly.monomial(YM, (0, p)) * (L ** q) - x
    if q == 0:
        return LaurentPoly.monomial(YM, (0, p)) - x
    return (L ** (-q)) * x - LaurentPoly.monomial(YM, (0, p))


def _newton_refine3(comp: PresetComponent, p, q, x, y0, m0, l0, ctx, bits):
    """Damped Newton on (riley, l - L, m^p l^q - x) in (y, m, l)."""
    f = comp.riley
    L = comp.longitude_expr
    fy, fm = f.derivative("y"), f.derivative("m")
    Ly, Lm = L.derivative("y"), L.derivative("m")
    y, m, l = y0, m0, l0
    one = ctx.make(1.0)
    zero = ctx.make(0.0)
    step_tol = 2.0 ** (20 - bits)

    def residuals(y, m, l):
        return (f.evaluate(y=y, m=m), l - L.evaluate(y=y, m=m),
                m ** p * l ** q - x)

    try:
        r = residuals(y, m, l)
    except (OverflowError, ZeroDivisionError):
        return None
    best = math.inf
    stall = 0
    for _ in range(80):
        size0 = sum(float(abs(v)) for v in r)
        if size0 == 0.0:
            break
        # stop only on a genuine plateau at the noise floor: several
        # consecutive iterations without meaningful improvement
        if size0 > 0.9 * best:
            stall += 1
            if stall >= 3:
                break
        else:
            stall = 0
        best = min(best, size0)
        ml = m ** p * l ** q
        rows = [[fy.evaluate(y=y, m=m), fm.evaluate(y=y, m=m), zero],
                [-Ly.evaluate(y=y, m=m), -Lm.evaluate(y=y, m=m), one],
                [zero, p * ml / m, q * ml / l]]
        try:
            d = solve_linear(rows, list(r), ctx)
        except ZeroDivisionError:
            return None
        lam = 1.0
        for _ in range(24):
            yn, mn, ln = y - lam * d[0], m - lam * d[1], l - lam * d[2]
            try:
                rn = residuals(yn, mn, ln)
                size1 = sum(float(abs(v)) for v in rn)
            except (OverflowError, ZeroDivisionError):
                size1 = math.inf
            if size1 <= size0 or size1 < 1e3 * 2.0 ** (-bits):
                break
            lam *= 0.5
        else:
            break  # no step improves: already at the attainable floor
        y, m, l, r = yn, mn, ln, rn
        if lam * float(abs(d[0]) + abs(d[1]) + abs(d[2])) \
                < step_tol * (1.0 + float(abs(y)) + float(abs(m)) + float(abs(l))):
            break
    return y, m, l


def bordered_jacobian_det(comp: PresetComponent, p: int, q: int, x,
                          y, m, l, ctx: Context):
    """det d(f, g, h)/d(y, m, l) at the point, with g = l - L(y, m) and
    h = m^p l^q - x."""
    f3 = comp.riley.with_vars(YML)
    g3 = LaurentPoly.variable(YML, "l") - comp.longitude_expr.with_vars(YML)
    vals = dict(y=y, m=m, l=l)
    row_f = [f3.derivative(v).evaluate(**vals) for v in YML]
    row_g = [g3.derivative(v).evaluate(**vals) for v in YML]
    # h = m^p l^q - x: dh/dm = p m^(p-1) l^q, dh/dl = q m^p l^(q-1)
    xl = m ** p * l ** q
    row_h = [ctx.make(0.0), p * xl / m, q * xl / l]
    return (row_f[0] * (row_g[1] * row_h[2] - row_g[2] * row_h[1])
            - row_f[1] * (row_g[0] * row_h[2] - row_g[2] * row_h[0])
            + row_f[2] * (row_g[0] * row_h[1] - row_g[1] * row_h[0]))


def _accept_and_pack(comp, ci, p, q, x, z, y1, m1, l1, ctx, tol, out):
    f = comp.riley
    L = comp.longitude_expr
    if float(abs(m1)) == 0.0 or float(abs(l1)) == 0.0:
        return
    r_f = float(abs(f.evaluate(y=y1, m=m1))) / f.eval_scale(y=y1, m=m1)
    lval = L.evaluate(y=y1, m=m1)
    scale_g = L.eval_scale(y=y1, m=m1) + float(abs(l1))
    r_g = float(abs(l1 - lval)) / scale_g
    ml = m1 ** p * l1 ** q
    r_h = float(abs(ml - x)) / (1.0 + float(abs(x)))
    if r_f > tol or r_g > tol or r_h > tol:
        return
    r_tr = float(abs(ml + 1 / ml - z)) / (1.0 + float(abs(z)))
    if r_tr > TRACE_TOL:
        return
    jac = bordered_jacobian_det(comp, p, q, x, y1, m1, l1, ctx)
    out.append(CharacterPoint(ci, y1, m1, l1, (r_f, r_g, r_h), jac))


def solve_component(comp: PresetComponent, ci: int, p: int, q: int, z, x,
                    ctx: Context):
    """Fiber points on one component via the (m, l) A-polynomial route."""
    bits = ctx.bits
    tol = accept_tol(bits)
    f = comp.riley
    L = comp.longitude_expr
    apoly = component_apoly(comp)

    ml_candidates = []
    if q == 0:
        # meridian-type slope: p = +-1, so m is pinned to x or 1/x
        m0 = x if p == 1 else 1 / x
        try:
            for l0 in univariate_roots(apoly.substitute({"m": m0}), bits):
                ml_candidates.append((m0, l0))
        except SolverError:
            raise NonGenericError("meridian fiber solve failed; perturb z")
    else:
        b = slope_polynomial(p, q, x)
        b_cl, _ = b.clear_negative()
        resm = resultant_numeric(apoly, b_cl, "l", ctx)
        if resm.is_zero():
            raise NonGenericError("vanishing resultant: non-generic slope data")
        for m0 in univariate_roots(resm, bits):
            try:
                ls = univariate_roots(apoly.substitute({"m": m0}), bits)
            except SolverError:
                continue
            for l0 in ls:
                try:
                    bv = float(abs(m0 ** p * l0 ** q - x))
                except (OverflowError, ZeroDivisionError):
                    continue
                if bv < CANDIDATE_TOL * (1.0 + float(abs(x))):
                    ml_candidates.append((m0, l0))

    points = []
    for (m0, l0) in ml_candidates:
        try:
            ys = univariate_roots(f.substitute({"m": m0}), bits)
        except SolverError:
            continue
        for y0 in ys:
            try:
                lv = L.evaluate(y=y0, m=m0)
                near = float(abs(lv - l0)) \
                    / (L.eval_scale(y=y0, m=m0) + float(abs(l0)))
            except (OverflowError, ZeroDivisionError):
                continue
            if near > CANDIDATE_TOL:
                continue
            refined = _newton_refine3(comp, p, q, x, y0, m0, l0, ctx, bits)
            if refined is None:
                continue
            try:
                _accept_and_pack(comp, ci, p, q, x, z, *refined, ctx, tol,
                                 points)
            except (OverflowError, ZeroDivisionError):
                continue

    return _dedup_and_screen(points)


def solve_component_ym_route(comp: PresetComponent, ci: int, p: int, q: int,
                             z, x, ctx: Context):
    """Cross-check route: eliminate y directly from {riley, m^p L^q = x}."""
    bits = ctx.bits
    tol = accept_tol(bits)
    f = comp.riley
    L = comp.longitude_expr
    e = fiber_equation(comp, p, q, x)
    fc, _ = f.clear_negative()
    ec, _ = e.clear_negative()
    candidates = []
    if ec.degree("y") in (None, 0):
        for m0 in univariate_roots(ec.substitute({"y": 0}), bits):
            try:
                for y0 in univariate_roots(f.substitute({"m": m0}), bits):
                    candidates.append((y0, m0))
            except SolverError:
                continue
    else:
        resm = resultant_numeric(fc, ec, "y", ctx)
        if resm.is_zero():
            raise NonGenericError("vanishing resultant: non-generic slope data")
        for m0 in univariate_roots(resm, bits):
            try:
                ys = univariate_roots(f.substitute({"m": m0}), bits)
            except SolverError:
                continue
            for y0 in ys:
                try:
                    if float(abs(e.evaluate(y=y0, m=m0))) \
                            < CANDIDATE_TOL * e.eval_scale(y=y0, m=m0):
                        candidates.append((y0, m0))
                except (OverflowError, ZeroDivisionError):
                    continue
    points = []
    for (y0, m0) in candidates:
        try:
            l0 = L.evaluate(y=y0, m=m0)
        except (OverflowError, ZeroDivisionError):
            continue
        refined = _newton_refine3(comp, p, q, x, y0, m0, l0, ctx, bits)
        if refined is None:
            continue
        try:
            _accept_and_pack(comp, ci, p, q, x, z, *refined, ctx, tol, points)
        except (OverflowError, ZeroDivisionError):
            continue
    return _dedup_and_screen(points)


def _dedup_and_screen(points):
    deduped = []
    for pt in sorted(points, key=CharacterPoint.sort_key):
        dup = False
        for other in deduped:
            d = float(abs(pt.y - other.y)) + float(abs(pt.m - other.m))
            if d < DEDUP_TOL * (1.0 + float(abs(pt.y)) + float(abs(pt.m))):
                dup = True
                break
        if not dup:
            deduped.append(pt)
    for pt in deduped:
        if min(float(abs(pt.m - 1)), float(abs(pt.m + 1))) < PARABOLIC_TOL:
            raise NonGenericError(
                "fiber contains a boundary-parabolic point (m near +-1); "
                "perturb z")
    return deduped


def solve_fiber(preset: KnotPreset, p: int, q: int, z=None, x=None,
                prec: int | None = None, check_stability: bool = False,
                route: str = "apoly"):
    """All fiber points over every component, canonically ordered.

    Returns ``(points, z, x, ctx)``.  With ``check_stability`` the fiber is
    re-solved at doubled precision; a count change or coordinate drift above
    1e-10 relative raises NonGenericError.
    """
    if math.gcd(p, q) != 1:
        raise DomainError("slope (p, q) must be coprime")
    bits = prec if prec is not None else preset.recommended_bits
    ctx = Context(bits)
    solver = solve_component if route == "apoly" else solve_component_ym_route
    with ctx.active():
        z, x = resolve_slope_inputs(z, x, ctx)
        points = []
        for ci, comp in enumerate(preset.components):
            points.extend(solver(comp, ci, p, q, z, x, ctx))
        points.sort(key=CharacterPoint.sort_key)
    if check_stability:
        fine, _, _, _ = solve_fiber(preset, p, q, z=None, x=x, prec=2 * bits,
                                    route=route)
        if len(fine) != len(points):
            raise NonGenericError(
                f"fiber count unstable under precision doubling "
                f"({len(points)} vs {len(fine)})")
        for a, b in zip(points, fine):
            drift = (float(abs(a.y - b.y)) + float(abs(a.m - b.m))) \
                / (1.0 + float(abs(a.y)) + float(abs(a.m)))
            if drift > 1e-10:
                raise NonGenericError(
                    f"fiber coordinates drift {drift:.2e} under precision "
                    "doubling")
    return points, z, x, ctx
