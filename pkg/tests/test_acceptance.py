"""Acceptance criteria, one test per criterion, each printing a verdict line.

Published regression data (the 23-point torsion table, the two-component
sums, the closed forms) is frozen here; comparisons allow one global sign per
component, matching the convention freedom of the overall torsion sign.
"""

import math
import random
import sys
import time

from adjtorsion.fiber import d_gamma, solve_fiber
from adjtorsion.laurent import LaurentPoly, parse_poly, resultant
from adjtorsion.numerics import Context
from adjtorsion.polytope import minkowski_sum, newton_polytope, strict_containment
from adjtorsion.presets import get_preset, sample_riley_points
from adjtorsion.rep import RepPoint
from adjtorsion.residue import (check_nondegenerate, jacobian_simplicity,
                                residue_sum, residue_terms, solve_torus_system)
from adjtorsion.torsion import (chain_torsion, presentation_complex,
                                torsion_at_longitude, torsion_gamma_at_point,
                                torsion_polynomial)
from adjtorsion.verify import khovanskii_certify, twisted_index, verify_vanishing
from conftest import random_generic_z

ML = ("m", "l")
YM = ("y", "m")


def _report(n, text):
    # bypass pytest capture so the per-criterion verdicts always show
    print(f"ACCEPTANCE {n}: PASS - {text}", file=sys.__stdout__, flush=True)


def _c(v):
    return complex(float(v.real), float(v.imag))


# 5_2, slope (3,1), z = 3/2 + i/2: the published 23 torsion values.
TABLE_52 = [
    complex(-5.1707095, +6.056876), complex(-5.1403791, -5.271889),
    complex(-4.9799403, +5.257641), complex(-4.7335145, -7.299169),
    complex(-4.6988457, -5.941816), complex(-4.3082655, +7.042614),
    complex(-3.8808087, -6.974908), complex(-3.3630233, +7.605688),
    complex(-2.6624296, +3.284613), complex(+0.2005695, -4.913042),
    complex(+9.8858003, +2.112603), complex(+14.549795, +0.213397),
    complex(+14.568149, +0.187863), complex(+15.922137, -0.358869),
    complex(+16.535205, -0.634458), complex(+17.512936, +0.306584),
    complex(+18.497289, -1.694233), complex(+18.514426, -0.117280),
    complex(+19.936167, +0.800241), complex(+23.334158, -0.639555),
    complex(+25.010603, +1.138408), complex(+25.406178, +0.241449),
    complex(+28.564506, -0.402759),
]

# 7_4, slope (1,1), x = 2 + 3i: published per-component inverse sums.
SUM_74 = complex(0.10320, 0.00274)


def test_criterion_1_figure_eight_vanishing():
    """4_1 vanishing over five slopes x five random z at 53 bits, <2s each."""
    rng = random.Random(101)
    k41 = get_preset("4_1")
    slopes = [(1, 0), (0, 1), (1, 1), (3, 1), (2, 5)]
    worst_metric = 0.0
    worst_time = 0.0
    for slope in slopes:
        for _ in range(5):
            z = random_generic_z(rng)
            t0 = time.perf_counter()
            report = verify_vanishing(k41, *slope, z=z, prec=53)
            dt = time.perf_counter() - t0
            worst_time = max(worst_time, dt)
            worst_metric = max(worst_metric, report.vanishing_metric)
            assert report.vanishing_metric <= 1e-6, (slope, z)
            assert dt < 2.0, (slope, z, dt)
    _report(1, f"4_1 vanishing on {len(slopes)}x5 fibers: worst metric "
               f"{worst_metric:.2e}, worst time {worst_time * 1000:.0f} ms")


def test_criterion_2_52_regression():
    """23 points; torsion multiset matches the published table to 5 decimals
    up to one global sign; inverse-sum metric <= 1e-6."""
    k52 = get_preset("5_2")
    report = verify_vanishing(k52, 3, 1, z=complex(1.5, 0.5), prec=53)
    points = report.components[0].points
    assert len(points) == 23
    computed = sorted((_c(p.torsion_gamma) for p in points),
                      key=lambda t: (t.real, t.imag))
    best = None
    for sign in (1, -1):
        vals = sorted((sign * t for t in computed),
                      key=lambda t: (t.real, t.imag))
        table = sorted(TABLE_52, key=lambda t: (t.real, t.imag))
        worst = max(max(abs(a.real - b.real), abs(a.imag - b.imag))
                    for a, b in zip(vals, table))
        if best is None or worst < best[0]:
            best = (worst, sign)
    worst, sign = best
    assert worst <= 1e-5, worst
    assert report.vanishing_metric <= 1e-6
    _report(2, f"5_2 (3,1): 23 points, table match {worst:.2e} "
               f"(global sign {sign:+d}), metric {report.vanishing_metric:.2e}")


def test_criterion_3_74_two_component_cancellation():
    """17 + 20 points at 192 bits; component sums +-(0.10320 + 0.00274i) to
    1e-4 under a consistent sign assignment; total metric <= 1e-4."""
    k74 = get_preset("7_4")
    report = verify_vanishing(k74, 1, 1, x=complex(2, 3), prec=192, tol=1e-4)
    sizes = [len(c.points) for c in report.components]
    assert sizes == [17, 20]
    s1 = _c(report.components[0].inverse_sum)
    s2 = _c(report.components[1].inverse_sum)
    matched = False
    for sg in (1, -1):
        if abs(sg * s1 - SUM_74) <= 1e-4 and abs(-sg * s2 - SUM_74) <= 1e-4:
            matched = True
            break
    assert matched, (s1, s2)
    assert report.assigned_metric <= 1e-4
    assert report.vanishing_metric <= 1e-4  # uniform pipeline cancels exactly
    _report(3, f"7_4 (1,1): 17+20 points, sums +-({s1:.6f}), total metric "
               f"{report.vanishing_metric:.2e}")


def test_criterion_4_oracle_equivalence():
    """Chain-complex torsion vs Fox-calculus value at 5 chars x 10 t0 per
    preset, equal up to one global +-t0^k per (preset, character), 1e-9."""
    rng = random.Random(104)
    ctx = Context(53)
    worst_overall = 0.0
    for name in ("4_1", "5_2", "7_4"):
        preset = get_preset(name)
        chars = []
        per_comp = [3, 2] if len(preset.components) == 2 else [5]
        for comp, n in zip(preset.components, per_comp):
            chars.extend(sample_riley_points(comp, n, rng))
        for (y, m) in chars:
            rep = RepPoint(y, m, ctx)
            tp, _ = torsion_polynomial(preset.presentation, rep)
            pairs = []
            for _ in range(10):
                radius = rng.uniform(0.5, 2.0)
                ang = rng.uniform(0.0, 2 * math.pi)
                t0 = ctx.make(radius * math.cos(ang), radius * math.sin(ang))
                cx = presentation_complex(preset.presentation, rep, t0)
                ct = _c(chain_torsion(cx).value)
                pv = _c(tp.eval_and_derivative(t0, ctx)[0])
                pairs.append((_c(t0), ct / pv))
            best = min(
                max(abs(r - s * t ** k) / abs(r) for t, r in pairs)
                for s in (1, -1) for k in range(-8, 9))
            worst_overall = max(worst_overall, best)
            assert best <= 1e-9, (name, best)
    _report(4, f"oracle equivalence on 3 presets x 5 chars x 10 t0: "
               f"worst fit {worst_overall:.2e}")


def test_criterion_5_yamaguchi_structure():
    """Simple zero of the torsion polynomial at t=1 and derivative oracle at
    20 random characters per preset; 4_1 closed form to 1e-10."""
    rng = random.Random(105)
    ctx = Context(53)
    h = 1e-6
    for name in ("4_1", "5_2", "7_4"):
        preset = get_preset(name)
        chars = []
        per_comp = [10, 10] if len(preset.components) == 2 else [20]
        for comp, n in zip(preset.components, per_comp):
            chars.extend(sample_riley_points(comp, n, rng))
        for (y, m) in chars:
            rep = RepPoint(y, m, ctx)
            tp, _ = torsion_polynomial(preset.presentation, rep)
            scale = sum(abs(_c(c)) for c in tp.num.terms.values()) \
                / sum(abs(_c(c)) for c in tp.den.terms.values())
            v, d = tp.eval_and_derivative(ctx.make(1.0), ctx)
            assert abs(_c(v)) <= 1e-8 * scale
            reduced = tp.reduced_at(1.0, ctx)
            fd = (_c(reduced.eval_and_derivative(1 + h, ctx)[0])
                  - _c(reduced.eval_and_derivative(1 - h, ctx)[0])) / (2 * h)
            assert abs(fd - _c(d)) <= 1e-5 * abs(fd)
    closed = parse_poly("-(2*m^2 - 1 + 2*m^-2)", YM)
    k41 = get_preset("4_1")
    eps = None
    worst = 0.0
    for (y, m) in sample_riley_points(k41.components[0], 20,
                                      random.Random(1055)):
        rep = RepPoint(y, m, ctx)
        tv = torsion_at_longitude(k41.presentation, rep)
        expect = _c(closed.evaluate(y=y, m=m))
        ratio = _c(tv.value) / expect
        if eps is None:
            eps = round(ratio.real)
            assert eps in (1, -1)
        worst = max(worst, abs(ratio - eps))
        assert abs(ratio - eps) <= 1e-10
    _report(5, f"yamaguchi structure at 20 chars/preset; 4_1 closed form "
               f"reproduced with eps={eps:+d} to {worst:.2e}")


def test_criterion_6_figure_eight_closed_forms():
    """Resultant route divides the printed A-polynomial; slope-change
    pipeline matches the direct closed-form evaluation at 10 random
    (p, q, z)."""
    from adjtorsion.torsion import torsion_gamma_direct_41
    rng = random.Random(106)
    k41 = get_preset("4_1")
    comp = k41.components[0]
    YML = ("y", "m", "l")
    f3 = comp.riley.with_vars(YML)
    g3 = LaurentPoly.variable(YML, "l") - comp.longitude_expr.with_vars(YML)
    res = resultant(f3, g3, "y")
    res_cl = res.clear_negative()[0].primitive()
    a_cl = comp.apoly.clear_negative()[0].primitive()
    quot = res_cl.divide_exact(a_cl)
    assert quot.is_monomial()

    worst = 0.0
    trials = 0
    while trials < 10:
        p = rng.randint(-4, 4)
        q = rng.randint(-4, 4)
        if math.gcd(p, q) != 1:
            continue
        trials += 1
        z = random_generic_z(rng)
        points, _, x, ctx = solve_fiber(k41, p, q, z=z)
        eps = None
        for pt in points[:5]:
            tg = _c(torsion_gamma_at_point(k41, pt, p, q, x, ctx).value)
            errs = {}
            for cand in (1, -1):
                direct = _c(torsion_gamma_direct_41(pt, p, q, x, comp, ctx,
                                                    eps=cand))
                errs[cand] = abs(direct - tg) / abs(tg)
            cand = min(errs, key=errs.get)
            if eps is None:
                eps = cand
            assert cand == eps
            assert errs[cand] <= 1e-8
            worst = max(worst, errs[cand])
    _report(6, f"A-polynomial resultant division exact; slope change vs "
               f"closed form at 10 slopes: worst {worst:.2e}")


def test_criterion_7_khovanskii_certification():
    """Non-degeneracy, Jacobian simplicity, strict containment and residue
    vanishing for 10 random coprime slopes and random x."""
    rng = random.Random(107)
    k41 = get_preset("4_1")
    worst = 0.0
    trials = 0
    while trials < 10:
        p = rng.randint(-5, 5)
        q = rng.randint(-5, 5)
        if math.gcd(p, q) != 1:
            continue
        trials += 1
        x = complex(rng.uniform(0.4, 2.0), rng.uniform(0.3, 1.8))
        cert = khovanskii_certify(k41, p, q, x)
        assert cert["nondegenerate"], (p, q)
        assert cert["jacobian_simple"], (p, q)
        assert cert["strict_containment"], (p, q)
        assert cert["residue_metric"] <= 1e-7, (p, q)
        # cross-pipeline identity: every 1/Tor matches 2 eps x h/(m l Jac)
        assert cert["torsion_cross_check_rel"] <= 1e-8, (p, q)
        worst = max(worst, cert["residue_metric"])
    _report(7, f"khovanskii certification at 10 random slopes: worst "
               f"residue metric {worst:.2e}")


def test_criterion_8_grt_property_suite():
    """50 admissible random systems vanish to 1e-7 normalized; 10
    hypothesis-violating systems give sums >= 1e-3 normalized."""
    rng = random.Random(108)
    ZZ = ("z1", "z2")

    def dense(deg):
        return LaurentPoly(ZZ, {
            (i, j): complex(rng.uniform(0.5, 1.5)
                            * math.cos(a := rng.uniform(0, 2 * math.pi)),
                            rng.uniform(0.5, 1.5) * math.sin(a))
            for i in range(deg + 1) for j in range(deg + 1)})

    def admissible():
        while True:
            deg_f = rng.choice((1, 2, 2))
            deg_g = rng.choice((1, 2)) if deg_f == 2 else 2
            f, g = dense(deg_f), dense(deg_g)
            ok, _ = check_nondegenerate([f, g])
            if not ok:
                continue
            zeros = solve_torus_system(f, g)
            if not zeros:
                continue
            simple, _, _ = jacobian_simplicity([f, g], zeros)
            if not simple:
                continue
            return f, g, zeros

    worst_pass = 0.0
    for _ in range(50):
        f, g, zeros = admissible()
        s_poly = minkowski_sum(newton_polytope(f), newton_polytope(g))
        inner = [(i, j) for i in range(0, 5) for j in range(0, 5)
                 if strict_containment(
                     newton_polytope(LaurentPoly(ZZ, {(i, j): 1})), s_poly)[0]]
        assert inner
        h = LaurentPoly(ZZ, {e: complex(rng.gauss(0, 1), rng.gauss(0, 1))
                             for e in rng.sample(inner, min(3, len(inner)))})
        s = residue_sum([f, g], h, zeros)
        terms = residue_terms([f, g], h, zeros, Context(53))
        norm = sum(abs(_c(t)) for t in terms) / len(terms)
        metric = abs(_c(s)) / norm
        assert metric <= 1e-7, metric
        worst_pass = max(worst_pass, metric)

    worst_neg = math.inf
    for _ in range(10):
        f, g, zeros = admissible()
        s_poly = minkowski_sum(newton_polytope(f), newton_polytope(g))
        h = LaurentPoly(ZZ, {s_poly.vertices[0]: 1})  # on the boundary
        contained, _ = strict_containment(newton_polytope(h), s_poly)
        assert not contained
        s = residue_sum([f, g], h, zeros)
        terms = residue_terms([f, g], h, zeros, Context(53))
        norm = sum(abs(_c(t)) for t in terms) / len(terms)
        metric = abs(_c(s)) / norm
        assert metric >= 1e-3, metric
        worst_neg = min(worst_neg, metric)
    _report(8, f"GRT suite: 50 admissible systems worst {worst_pass:.2e}; "
               f"10 negative controls min {worst_neg:.2e}")


def test_criterion_9_twisted_index_structure():
    """g=1 is a z-independent positive integer (5 random z per preset and
    slope); g=0 vanishes to 1e-6 normalized."""
    rng = random.Random(109)
    cases = [("4_1", (1, 1), 53), ("4_1", (2, 1), 53), ("5_2", (3, 1), 53),
             ("7_4", (1, 1), 192)]
    lines = []
    for name, slope, prec in cases:
        preset = get_preset(name)
        counts = set()
        for _ in range(5):
            z = random_generic_z(rng)
            v1 = twisted_index(preset, *slope, z=z, g=1, prec=prec)
            c = _c(v1)
            assert abs(c.imag) < 1e-9
            assert abs(c.real - round(c.real)) < 1e-9 and round(c.real) > 0
            counts.add(round(c.real))
        assert len(counts) == 1, (name, slope, counts)
        z = random_generic_z(rng)
        report = verify_vanishing(preset, *slope, z=z, prec=prec)
        dg = d_gamma(*slope)
        v0 = sum(1 / (dg * _c(p.torsion_gamma))
                 for comp in report.components for p in comp.points)
        max_term = max(abs(1 / (dg * _c(p.torsion_gamma)))
                       for comp in report.components for p in comp.points)
        assert abs(v0) <= 1e-6 * max_term
        lines.append(f"{name}{slope}: g1={counts.pop()}")
    _report(9, "twisted index structure: " + ", ".join(lines))
