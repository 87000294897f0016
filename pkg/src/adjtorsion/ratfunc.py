"""Rational functions in the auxiliary variable t over complex scalars."""

from __future__ import annotations

import math

from .errors import DomainError, PoleError
from .laurent import LaurentPoly
from .numerics import Context

T = ("t",)


def _as_t_poly(p) -> LaurentPoly:
    if isinstance(p, LaurentPoly):
        if p.vars != T:
            raise DomainError(f"expected a polynomial in t, got vars {p.vars}")
        return p
    return LaurentPoly.const(T, p)


def _deflate(coeffs, t0):
    """Divide an ascending coefficient list by (t - t0); drops the remainder."""
    d = len(coeffs) - 1
    out = [None] * d
    acc = coeffs[d]
    for k in range(d - 1, -1, -1):
        out[k] = acc
        acc = coeffs[k] + t0 * acc
    return out


def _horner2(coeffs, z):
    p = 0
    dp = 0
    for c in reversed(coeffs):
        dp = dp * z + p
        p = p * z + c
    return p, dp


def _scale(coeffs) -> float:
    return max((float(abs(c)) for c in coeffs), default=0.0)


class RationalFunctionT:
    """Quotient of two polynomials in t; common monomial factors cancelled."""

    __slots__ = ("num", "den")

    def __init__(self, num, den):
        num = _as_t_poly(num)
        den = _as_t_poly(den)
        if den.is_zero():
            raise DomainError("zero denominator")
        if not num.is_zero():
            shift = min(num.valuation("t"), den.valuation("t"))
            if shift != 0:
                mono = LaurentPoly.monomial(T, (-shift,))
                num = num * mono
                den = den * mono
        else:
            den, _ = den.clear_negative("t")
        self.num = num
        self.den = den

    def __repr__(self):
        return f"({self.num}) / ({self.den})"

    def shared_zero_tol(self, ctx: Context) -> float:
        return 2.0 ** (26 - ctx.bits)

    def eval_and_derivative(self, t0, ctx: Context | None = None):
        """Exact quotient-rule value and derivative at t0.

        When numerator and denominator share a zero at t0 (within tolerance)
        the common (t - t0) factors are deflated first, so evaluation at the
        shared simple zero t = 1 of the torsion pipeline is well-defined.
        Raises PoleError when the denominator alone vanishes.
        """
        if ctx is None:
            ctx = Context()
        t0 = ctx.convert(t0)
        nc, _ = self.num.univariate_coeff_list()
        dc, _ = self.den.univariate_coeff_list()
        if not nc:
            nc = [ctx.make(0.0)]
        nc = [ctx.convert(c) for c in nc]
        dc = [ctx.convert(c) for c in dc]
        tol = self.shared_zero_tol(ctx)
        ns, ds = _scale(nc), _scale(dc)
        while len(nc) > 1 and len(dc) > 1:
            nv, _ = _horner2(nc, t0)
            dv, _ = _horner2(dc, t0)
            if float(abs(nv)) <= tol * ns and float(abs(dv)) <= tol * ds:
                nc = _deflate(nc, t0)
                dc = _deflate(dc, t0)
            else:
                break
        nv, ndv = _horner2(nc, t0)
        dv, ddv = _horner2(dc, t0)
        if float(abs(dv)) <= tol * ds:
            raise PoleError(f"denominator vanishes at t = {t0}")
        value = nv / dv
        deriv = (ndv * dv - nv * ddv) / (dv * dv)
        return value, deriv

    def value(self, t0, ctx: Context | None = None):
        return self.eval_and_derivative(t0, ctx)[0]

    def reduced_at(self, t0, ctx: Context | None = None) -> "RationalFunctionT":
        """Cancel common (t - t0) factors (within tolerance) once and for all.

        The result is the same rational function with the shared zero
        removed, so it can be evaluated stably near t0.
        """
        if ctx is None:
            ctx = Context()
        t0 = ctx.convert(t0)
        nc, nsh = self.num.univariate_coeff_list()
        dc, dsh = self.den.univariate_coeff_list()
        nc = [ctx.convert(c) for c in nc] or [ctx.make(0.0)]
        dc = [ctx.convert(c) for c in dc]
        tol = self.shared_zero_tol(ctx)
        ns, ds = _scale(nc), _scale(dc)
        while len(nc) > 1 and len(dc) > 1:
            nv, _ = _horner2(nc, t0)
            dv, _ = _horner2(dc, t0)
            if float(abs(nv)) <= tol * ns and float(abs(dv)) <= tol * ds:
                nc = _deflate(nc, t0)
                dc = _deflate(dc, t0)
            else:
                break
        num = LaurentPoly(T, {(i + nsh,): c for i, c in enumerate(nc)})
        den = LaurentPoly(T, {(i + dsh,): c for i, c in enumerate(dc)})
        return RationalFunctionT(num, den)

    def normalized(self) -> "RationalFunctionT":
        """Canonical representative of the +-t^n ambiguity class.

        Numerator and denominator are shifted to valuation zero and the sign
        is fixed so the lowest-degree numerator coefficient has argument in
        [0, pi).
        """
        num, _ = self.num.clear_negative("t")
        den, _ = self.den.clear_negative("t")
        if num.is_zero():
            return RationalFunctionT(num, den)
        v = num.valuation("t")
        lead = num.terms[(v,)]
        re = float(lead.real) if hasattr(lead, "real") else float(lead)
        im = float(lead.imag) if hasattr(lead, "imag") else 0.0
        ang = math.atan2(im, re)
        if not (0.0 <= ang < math.pi):
            num = -num
        return RationalFunctionT(num, den)

    def multiplied_by_sign_power(self, sign: int, k: int) -> "RationalFunctionT":
        mono = LaurentPoly.monomial(T, (k,), sign)
        return RationalFunctionT(self.num * mono, self.den)
