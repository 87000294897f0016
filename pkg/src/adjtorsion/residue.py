"""Khovanskii non-degeneracy certification and global residue sums.

For a pair of Laurent polynomials in two variables, every face truncation
(for nonzero beta) is supported on a vertex or an edge, so deciding whether
the truncated system has only simple torus zeros reduces to exact lattice
tests and univariate root comparisons; no two-dimensional solving is needed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import (DomainError, NonGenericError, StructureError,
                     UnsupportedDimensionError)
from .laurent import LaurentPoly, resultant_numeric
from .numerics import Context, solve_linear
from .polytope import newton_polytope, primitive
from .roots import polyroots, univariate_roots

COMMON_ROOT_TOL = 1e-8        # relative distance deciding a shared face zero
INDETERMINATE_BAND = 1e-10    # below COMMON_ROOT_TOL: verdict is indeterminate
JAC_SIMPLE_TOL = 1e-8
JAC_DEGENERATE_TOL = 1e-10


@dataclass
class FaceSystem:
    """A direction beta and the face truncations it selects."""

    direction: tuple
    truncations: list

    def __repr__(self):
        return f"FaceSystem(beta={self.direction})"


def face_truncation(p: LaurentPoly, beta) -> LaurentPoly:
    """Terms attaining min <alpha, beta> over the support."""
    if p.is_zero():
        raise DomainError("zero polynomial has no face truncation")
    vals = {e: sum(c * b for c, b in zip(e, beta)) for e in p.terms}
    lo = min(vals.values())
    return LaurentPoly(p.vars, {e: c for e, c in p.terms.items()
                                if vals[e] == lo})


def _ray_angle(v):
    return math.atan2(v[1], v[0])


def face_systems(fs) -> list:
    """Combinatorially distinct face systems of a two-variable pair.

    Enumerates the rays (edge-minimizing directions) of the common normal-fan
    refinement plus one representative direction per open cone between
    consecutive rays; truncations are constant on each open cone.
    """
    fs = list(fs)
    if len(fs) != 2:
        raise UnsupportedDimensionError(
            "face enumeration implemented for systems of two polynomials")
    for p in fs:
        if len(p.vars) != 2:
            raise UnsupportedDimensionError(
                "face enumeration implemented for two variables")
        if p.is_zero():
            raise DomainError("zero polynomial in the system")
    rays = set()
    for p in fs:
        poly = newton_polytope(p)
        if poly.is_point():
            continue
        for n in poly.outward_normals():
            rays.add(primitive((-n[0], -n[1])))  # minimizing directions
    if not rays:
        dirs = [(1, 0)]
    else:
        ordered = sorted(rays, key=_ray_angle)
        dirs = list(ordered)
        k = len(ordered)
        for i in range(k):
            u = ordered[i]
            v = ordered[(i + 1) % k]
            cross = u[0] * v[1] - u[1] * v[0]
            dot = u[0] * v[0] + u[1] * v[1]
            if cross > 0:
                mid = (u[0] + v[0], u[1] + v[1])
            elif cross == 0 and dot < 0:
                mid = (-u[1], u[0])
            elif k == 1:
                mid = (-u[0], -u[1])
            else:
                # reflex gap (fewer than three rays): rotate u by +90 degrees
                mid = (-u[1], u[0])
            if mid != (0, 0):
                mid = primitive(mid)
                if mid not in rays:
                    dirs.append(mid)
    seen = set()
    out = []
    for beta in dirs:
        truncs = tuple(face_truncation(p, beta) for p in fs)
        key = tuple(frozenset(t.terms.keys()) for t in truncs)
        if key in seen:
            continue
        seen.add(key)
        out.append(FaceSystem(beta, list(truncs)))
    return out


def _line_profile(p: LaurentPoly):
    """Write a collinear-support polynomial as (base, d, coeff list).

    The support must lie on a line base + k*d (d primitive); returns the
    dense ascending coefficients of P with p = z^base * P(z^d).
    """
    exps = list(p.terms)
    if len(exps) == 1:
        return exps[0], None, [p.terms[exps[0]]]
    e0 = exps[0]
    d = None
    for e in exps[1:]:
        v = (e[0] - e0[0], e[1] - e0[1])
        if v != (0, 0):
            d = primitive(v)
            break
    ks = []
    for e in exps:
        v = (e[0] - e0[0], e[1] - e0[1])
        if d[0] != 0:
            if v[0] % d[0] or v[1] * d[0] != v[0] * d[1]:
                raise StructureError("support is not collinear")
            ks.append(v[0] // d[0])
        else:
            if v[0] != 0 or v[1] % d[1]:
                raise StructureError("support is not collinear")
            ks.append(v[1] // d[1])
    lo = min(ks)
    hi = max(ks)
    coeffs = [0] * (hi - lo + 1)
    for e, k in zip(exps, ks):
        coeffs[k - lo] = p.terms[e]
    base = tuple(e0[i] + lo * d[i] for i in (0, 1))
    return base, d, coeffs


def _face_pair_verdict(f_tr: LaurentPoly, g_tr: LaurentPoly, ctx: Context):
    """simple | degenerate | indeterminate for one truncated pair."""
    if f_tr.is_monomial() or g_tr.is_monomial():
        return "simple", None
    _, df, cf = _line_profile(f_tr)
    _, dg, cg = _line_profile(g_tr)
    if df != dg and df != (-dg[0], -dg[1]):
        # independent edge directions: exact exponent-lattice rank 2,
        # finitely many zeros, all simple (binomial-type argument)
        det = df[0] * dg[1] - df[1] * dg[0]
        if det != 0:
            return "simple", None
        raise StructureError("collinear faces with mismatched directions")
    if df == (-dg[0], -dg[1]):
        cg = list(reversed(cg))
    ru = polyroots([ctx.convert(c) for c in cf], ctx)
    rv = polyroots([ctx.convert(c) for c in cg], ctx)
    best = math.inf
    witness = None
    for a in ru:
        for b in rv:
            d = float(abs(a - b)) / (1.0 + float(abs(a)))
            if d < best:
                best = d
                witness = a
    if best < INDETERMINATE_BAND:
        return "degenerate", witness
    if best < COMMON_ROOT_TOL:
        return "indeterminate", witness
    return "simple", None


def check_nondegenerate(fs, prec: int = 53):
    """Khovanskii non-degeneracy of a two-variable pair.

    Returns ``(ok, report)`` where report lists one verdict per face system;
    ``ok`` is True only if every verdict is 'simple'.  Indeterminate verdicts
    (borderline root separations) are reported, never silently passed.
    """
    ctx = Context(prec)
    report = []
    ok = True
    with ctx.active():
        for sys_ in face_systems(fs):
            verdict, witness = _face_pair_verdict(sys_.truncations[0],
                                                  sys_.truncations[1], ctx)
            report.append({"beta": sys_.direction, "verdict": verdict,
                           "witness": None if witness is None
                           else ctx.to_complex(witness)})
            if verdict != "simple":
                ok = False
    return ok, report


def system_jacobian(fs, point, ctx: Context):
    """Jacobian determinant of the system at a point, with its natural scale."""
    n = len(fs)
    rows = []
    scale = 1.0
    vals = dict(zip(fs[0].vars, point))
    for f in fs:
        row = [f.derivative(v).evaluate(**vals) for v in f.vars]
        rows.append(row)
        scale *= max(max(float(abs(c)) for c in row), 1e-300)
    if n == 1:
        return rows[0][0], scale
    if n == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0], scale
    raise UnsupportedDimensionError("Jacobians implemented for n <= 2")


def jacobian_simplicity(fs, zeros, prec: int = 53, closed_form_slope=None):
    """True iff every supplied zero is simple; also the minimal |Jac|/scale.

    With ``closed_form_slope=(p, q)`` the figure-eight degeneracy criterion
    p(l - 1/l) + 2q(2m^2 - 1 + 2m^-2)(m^2 - 1/m^2) = 0 is evaluated alongside
    as a cross-check; the relative mismatch of the two degeneracy indicators
    is reported.  (The identity Jac = m^(p-1) l^(q-1) (q m A_m - p l A_l)
    fixes the sign.)
    """
    ctx = Context(prec)
    min_rel = math.inf
    details = []
    with ctx.active():
        for pt in zeros:
            jac, scale = system_jacobian(fs, pt, ctx)
            rel = float(abs(jac)) / scale
            min_rel = min(min_rel, rel)
            entry = {"point": tuple(ctx.to_complex(c) for c in pt),
                     "jac_rel": rel}
            if closed_form_slope is not None:
                p, q = closed_form_slope
                m, l = pt
                lhs = p * (l - 1 / l)
                rhs = -2 * q * (2 * m ** 2 - 1 + 2 * m ** (-2)) \
                    * (m ** 2 - m ** (-2))
                crit = float(abs(lhs - rhs)) \
                    / (1.0 + float(abs(lhs)) + float(abs(rhs)))
                entry["criterion_rel"] = crit
            details.append(entry)
    return min_rel >= JAC_SIMPLE_TOL, min_rel, details


def residue_sum(fs, h: LaurentPoly, zeros, prec: int = 53):
    """sum of h(a) / (a_1 ... a_n Jac(a)) over the supplied zero set."""
    ctx = Context(prec)
    with ctx.active():
        acc = ctx.make(0.0)
        for pt in zeros:
            jac, scale = system_jacobian(fs, pt, ctx)
            if float(abs(jac)) < JAC_DEGENERATE_TOL * scale:
                raise NonGenericError(
                    f"zero at {tuple(ctx.to_complex(c) for c in pt)} has a "
                    "degenerate Jacobian")
            hv = h.evaluate(**dict(zip(h.vars, pt)))
            coord = pt[0]
            for c in pt[1:]:
                coord = coord * c
            acc = acc + hv / (coord * jac)
        return acc


def residue_terms(fs, h, zeros, ctx: Context):
    """The individual summands of the residue sum (for normalization)."""
    out = []
    with ctx.active():
        for pt in zeros:
            jac, _ = system_jacobian(fs, pt, ctx)
            hv = h.evaluate(**dict(zip(h.vars, pt)))
            coord = pt[0]
            for c in pt[1:]:
                coord = coord * c
            out.append(hv / (coord * jac))
    return out


def solve_torus_system(f: LaurentPoly, g: LaurentPoly, prec: int = 53):
    """All common torus zeros of a generic two-variable pair.

    Resultant elimination of the second variable, univariate solves, Newton
    refinement on the pair, then symmetric re-elimination of the first
    variable to reduce the risk of roots lost to a poorly conditioned
    projection.  Completeness is heuristic (non-degenerate inputs).
    """
    if f.vars != g.vars or len(f.vars) != 2:
        raise StructureError("expected two polynomials in the same two variables")
    ctx = Context(prec)
    v1, v2 = f.vars
    tol = min(1e-10, 2.0 ** (60 - prec))
    with ctx.active():
        zeros = []
        for elim, back in ((v2, v1), (v1, v2)):
            try:
                res = resultant_numeric(f, g, elim, ctx)
            except DomainError:
                continue
            if res.is_zero():
                raise NonGenericError("vanishing resultant: system is not "
                                      "zero-dimensional")
            try:
                firsts = univariate_roots(res, prec)
            except Exception:
                continue
            for a in firsts:
                try:
                    seconds = univariate_roots(f.substitute({back: a}), prec)
                except Exception:
                    continue
                for b in seconds:
                    vals = {back: a, elim: b}
                    try:
                        if float(abs(g.evaluate(**vals))) \
                                > 1e-4 * g.eval_scale(**vals):
                            continue
                    except (OverflowError, ZeroDivisionError):
                        continue
                    pt = _refine_pair(f, g, vals[v1], vals[v2], ctx)
                    if pt is None:
                        continue
                    r1 = float(abs(f.evaluate(**{v1: pt[0], v2: pt[1]}))) \
                        / f.eval_scale(**{v1: pt[0], v2: pt[1]})
                    r2 = float(abs(g.evaluate(**{v1: pt[0], v2: pt[1]}))) \
                        / g.eval_scale(**{v1: pt[0], v2: pt[1]})
                    if r1 > tol or r2 > tol:
                        continue
                    if float(abs(pt[0])) == 0.0 or float(abs(pt[1])) == 0.0:
                        continue
                    zeros.append(pt)
        deduped = []
        for pt in sorted(zeros, key=lambda t: (float(t[0].real),
                                               float(t[0].imag),
                                               float(t[1].real),
                                               float(t[1].imag))):
            if not any(float(abs(pt[0] - o[0]) + abs(pt[1] - o[1]))
                       < 1e-8 * (1.0 + float(abs(pt[0])) + float(abs(pt[1])))
                       for o in deduped):
                deduped.append(pt)
        return deduped


def _refine_pair(f, g, a, b, ctx):
    v1, v2 = f.vars
    f1, f2 = f.derivative(v1), f.derivative(v2)
    g1, g2 = g.derivative(v1), g.derivative(v2)
    best = math.inf
    stall = 0
    for _ in range(80):
        vals = {v1: a, v2: b}
        try:
            r = [f.evaluate(**vals), g.evaluate(**vals)]
        except (OverflowError, ZeroDivisionError):
            return None
        size = float(abs(r[0])) + float(abs(r[1]))
        if size == 0.0:
            break
        if size > 0.9 * best:
            stall += 1
            if stall >= 3:
                break
        else:
            stall = 0
        best = min(best, size)
        rows = [[f1.evaluate(**vals), f2.evaluate(**vals)],
                [g1.evaluate(**vals), g2.evaluate(**vals)]]
        try:
            d = solve_linear(rows, r, ctx)
        except ZeroDivisionError:
            return None
        a, b = a - d[0], b - d[1]
        if float(abs(d[0]) + abs(d[1])) \
                < 2.0 ** (20 - ctx.bits) * (1.0 + float(abs(a)) + float(abs(b))):
            break
    return a, b
