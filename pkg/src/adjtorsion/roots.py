"""Simultaneous polynomial root finding: Aberth–Ehrlich with Newton polish.

Roots at zero are excluded by construction (negative exponents and trailing
zero coefficients are stripped before solving), matching the torus ambient of
every downstream zero set.
"""

from __future__ import annotations

import math

from .errors import DomainError, SolverError
from .laurent import LaurentPoly
from .numerics import Context

MAX_ITER = 400


def _horner2(coeffs, z, ctx):
    """Value and derivative at z (coeffs ascending)."""
    p = ctx.make(0.0)
    dp = ctx.make(0.0)
    for c in reversed(coeffs):
        dp = dp * z + p
        p = p * z + c
    return p, dp


def _eval_scale(abs_coeffs, az: float) -> float:
    acc = 0.0
    for a in reversed(abs_coeffs):
        acc = acc * az + a
    return acc


def _initial_guesses(coeffs, ctx):
    """Bini-style starting points from the upper hull of (i, log|c_i|).

    Handles coefficients of wildly different magnitudes, which the resultant
    interpolation upstream routinely produces.
    """
    d = len(coeffs) - 1
    amax = max(abs(c) for c in coeffs)
    floor = float(amax) * 2.0 ** (10 - ctx.bits)
    pts = []
    for i, c in enumerate(coeffs):
        a = abs(c)
        # near-noise coefficients must not anchor hull segments (their radii
        # would be astronomically wrong); endpoints are kept regardless
        if a != 0 and (a > floor or i in (0, d)):
            pts.append((i, math.log(float(a))))
    hull = []  # upper convex hull, increasing i
    for p in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (y2 - y1) * (p[0] - x1) >= (p[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(p)
    guesses = []
    offset = 0.3183098861837907  # irrational angle offset breaks symmetry locks
    for seg, ((x1, y1), (x2, y2)) in enumerate(zip(hull, hull[1:])):
        k = x2 - x1
        r = math.exp((y1 - y2) / k)
        for j in range(k):
            ang = 2.0 * math.pi * j / k + offset * (seg + 1)
            guesses.append(ctx.make(r * math.cos(ang), r * math.sin(ang)))
    while len(guesses) < d:
        ang = 2.0 * math.pi * len(guesses) / d + offset
        guesses.append(ctx.make(math.cos(ang), math.sin(ang)))
    return guesses[:d]


def polyroots(coeffs, ctx: Context | None = None, tol=None):
    """All roots (with multiplicity) of a dense ascending coefficient list.

    Raises SolverError with the worst relative residual on non-convergence.
    """
    if ctx is None:
        ctx = Context()
    with ctx.active():
        return _polyroots_inner(list(coeffs), ctx, tol)


def _polyroots_inner(coeffs, ctx, tol):
    coeffs = [ctx.convert(c) for c in coeffs]
    amax = max((abs(c) for c in coeffs), default=0.0)
    if amax == 0.0:
        raise DomainError("zero polynomial has no well-defined root set")
    # strip zero tails: leading -> lower degree, trailing -> roots at 0 excluded
    while coeffs and abs(coeffs[-1]) == 0:
        coeffs.pop()
    lo = 0
    while lo < len(coeffs) and abs(coeffs[lo]) == 0:
        lo += 1
    coeffs = coeffs[lo:]
    d = len(coeffs) - 1
    if d <= 0:
        return []
    if d == 1:
        return [-coeffs[0] / coeffs[1]]

    abs_coeffs = [float(abs(c)) for c in coeffs]
    z = _initial_guesses(coeffs, ctx)
    if tol is None:
        tol = max(1024, 32 * d) * 2.0 ** (1 - ctx.bits)
    step_tol = 4.0 * 2.0 ** (1 - ctx.bits)

    converged = [False] * d
    for _ in range(MAX_ITER):
        moved = 0.0
        for i in range(d):
            if converged[i]:
                continue
            zi = z[i]
            if not math.isfinite(float(abs(zi))):
                zi = z[i] = ctx.make(math.cos(2.1 * i + 0.7), math.sin(2.1 * i + 0.7))
                moved = math.inf
            p, dp = _horner2(coeffs, zi, ctx)
            if not math.isfinite(float(abs(p))):
                z[i] = zi * 0.5
                moved = math.inf
                continue
            scale = _eval_scale(abs_coeffs, float(abs(zi)))
            if abs(p) <= 0.25 * tol * scale:
                converged[i] = True
                continue
            s = ctx.make(0.0)
            for j in range(d):
                if j != i:
                    diff = zi - z[j]
                    if diff == 0:
                        diff = ctx.make(2.0 ** (-ctx.bits // 2))
                    s = s + 1 / diff
            denom = dp - p * s
            if denom == 0:
                z[i] = zi * (1 + ctx.make(1e-3, 1e-3))
                moved = math.inf
                continue
            corr = p / denom
            z[i] = zi - corr
            rel = float(abs(corr)) / (1.0 + float(abs(zi)))
            moved = max(moved, rel)
        if moved <= step_tol and all(
                abs(_horner2(coeffs, zi, ctx)[0])
                <= tol * _eval_scale(abs_coeffs, float(abs(zi))) for zi in z):
            break
    # Newton polish
    for i in range(d):
        for _ in range(3):
            p, dp = _horner2(coeffs, z[i], ctx)
            if dp == 0:
                break
            step = p / dp
            z[i] = z[i] - step
            if float(abs(step)) <= 0.5 * ctx.eps * (1.0 + float(abs(z[i]))):
                break

    worst = 0.0
    for zi in z:
        p, _ = _horner2(coeffs, zi, ctx)
        scale = _eval_scale(abs_coeffs, float(abs(zi)))
        worst = max(worst, float(abs(p)) / scale if scale > 0 else float(abs(p)))
    if worst > tol:
        raise SolverError(
            f"root iteration did not converge (worst residual {worst:.3e})",
            worst_residual=worst)
    return _merge_clusters(z, coeffs, abs_coeffs, ctx)


def cluster_tolerance(ctx: Context) -> float:
    """Distance below which two roots are numerically indistinguishable.

    Scales as sqrt(eps): the scatter radius of a double root (1e-8 at 53
    bits); higher multiplicities are caught by the derivative flag instead.
    """
    return 4.0 * 2.0 ** ((1 - ctx.bits) / 2.0)


def _merge_clusters(roots, coeffs, abs_coeffs, ctx):
    """Collapse multiple-root clusters to their mean, repeated.

    A k-fold root scatters its k approximations at radius eps^(1/k), far
    beyond the pairwise tolerance, but all of them carry a tiny derivative;
    so roots whose |p'| falls below sqrt(eps) (relative to the derivative's
    own evaluation scale) are flagged and single-linked at a generous radius.
    Everything else merges only below cluster_tolerance.  Cluster means keep
    higher accuracy than the members (symmetric errors cancel).
    """
    d = len(coeffs) - 1
    dscale = [a * (k + 1) for k, a in enumerate(abs_coeffs[1:])]
    flag_tol = 16.0 * 2.0 ** ((1 - ctx.bits) / 2.0)
    link_radius = max(1e-3, 64.0 * 2.0 ** ((1 - ctx.bits) / 4.0))

    def deriv_rel(z):
        _, dp = _horner2(coeffs, z, ctx)
        az = float(abs(z))
        scale = 0.0
        for a in reversed(dscale):
            scale = scale * az + a
        return float(abs(dp)) / scale if scale > 0 else float(abs(dp))

    flagged = [i for i in range(len(roots)) if deriv_rel(roots[i]) < flag_tol]
    parent = list(range(len(roots)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    def union(i, j):
        parent[find(i)] = find(j)

    tol = cluster_tolerance(ctx)
    for i in range(len(roots)):
        for j in range(i + 1, len(roots)):
            dist = float(abs(roots[i] - roots[j]))
            near = tol * (1.0 + float(abs(roots[i])))
            if dist < near:
                union(i, j)
    for i in flagged:
        for j in flagged:
            if j <= i:
                continue
            dist = float(abs(roots[i] - roots[j]))
            if dist < link_radius * (1.0 + float(abs(roots[i]))):
                union(i, j)
    groups = {}
    for i in range(len(roots)):
        groups.setdefault(find(i), []).append(roots[i])
    out = []
    for members in groups.values():
        mean = members[0]
        for m in members[1:]:
            mean = mean + m
        mean = mean / len(members)
        out.extend([mean] * len(members))
    out.sort(key=lambda w: (float(w.real), float(w.imag)))
    return out


def univariate_roots(p: LaurentPoly, prec: int = 53):
    """All torus roots of a nonzero univariate Laurent polynomial.

    Negative exponents are cleared by monomial multiplication, so roots at 0
    never appear.  Returns roots with multiplicity (clusters averaged).
    """
    if p.is_zero():
        raise DomainError("zero polynomial")
    coeffs, _ = p.univariate_coeff_list()
    ctx = Context(prec)
    return polyroots(coeffs, ctx)
