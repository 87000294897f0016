"""Quick invariant battery behind `adjtorsion selftest`.

One line per check; exit code 0 only if everything passes.  The pytest suite
is the full verification; this is a fast field diagnostic.
"""

from __future__ import annotations

import random
import time

from .fiber import d_gamma, pick_x
from .laurent import LaurentPoly, parse_poly, resultant
from .numerics import Context
from .polytope import minkowski_sum, newton_polytope, strict_containment
from .presets import builtin_names, get_preset, sample_riley_points, validate_preset
from .rep import RepPoint, adjoint
from .residue import check_nondegenerate, residue_sum, residue_terms, solve_torus_system
from .roots import univariate_roots
from .torsion import chain_torsion, presentation_complex, torsion_polynomial
from .verify import verify_vanishing
from .words import Word, fox_derivative


def _check(name, fn, results):
    t0 = time.time()
    try:
        fn()
        ok = True
        msg = ""
    except Exception as e:  # noqa: BLE001 - report any failure
        ok = False
        msg = f" ({type(e).__name__}: {e})"
    results.append(ok)
    print(f"{'PASS' if ok else 'FAIL'}  {name}  "
          f"[{(time.time() - t0) * 1000:.0f} ms]{msg}")


def run_selftest() -> int:
    rng = random.Random(1234)
    results = []

    def laurent_ring():
        v = ("m",)
        a = parse_poly("m + m^-1", v)
        b = parse_poly("m - m^-1", v)
        assert a * b == parse_poly("m^2 - m^-2", v)
        f = parse_poly("(y-1)*(m^2+m^-2) + y^2 - 3*y + 3", ("y", "m"))
        assert (f * 1 - f).is_zero()
        ra = parse_poly("y - 3", ("y", "a"))
        rb = parse_poly("y - 7", ("y", "a"))
        assert resultant(ra, rb, "y") == LaurentPoly.const(("a",), -4)

    def roots_reconstruct():
        coeffs = [complex(rng.gauss(0, 1), rng.gauss(0, 1)) for _ in range(13)]
        poly = LaurentPoly(("z",), {(i,): c for i, c in enumerate(coeffs)})
        roots = univariate_roots(poly)
        prod = LaurentPoly.const(("z",), coeffs[-1])
        zvar = LaurentPoly.variable(("z",), "z")
        for r in roots:
            prod = prod * (zvar - complex(r))
        worst = max(abs(complex(prod.terms.get((i,), 0)) - coeffs[i])
                    for i in range(13))
        assert worst < 1e-9 * max(abs(c) for c in coeffs)

    def fox_identity():
        for _ in range(8):
            letters = [(rng.randint(1, 2), rng.choice((1, -1)))
                       for _ in range(rng.randint(1, 10))]
            w = Word(tuple(letters))
            total = None
            from .words import GroupRingElement
            for j in (1, 2):
                dj = fox_derivative(w, j)
                gj = GroupRingElement({Word.gen(j): 1, Word.identity(): -1})
                term = dj * gj
                total = term if total is None else total + term
            expect = GroupRingElement.from_word(w) - GroupRingElement.one()
            assert total == expect

    def adjoint_unimodular():
        ctx = Context()
        for _ in range(20):
            a = ctx.make(rng.gauss(0, 1), rng.gauss(0, 1))
            b = ctx.make(rng.gauss(0, 1), rng.gauss(0, 1))
            c = ctx.make(rng.gauss(0, 1), rng.gauss(0, 1))
            d = (1 + b * c) / a
            ad = adjoint([[a, b], [c, d]], ctx)
            det = (ad[0][0] * (ad[1][1] * ad[2][2] - ad[1][2] * ad[2][1])
                   - ad[0][1] * (ad[1][0] * ad[2][2] - ad[1][2] * ad[2][0])
                   + ad[0][2] * (ad[1][0] * ad[2][1] - ad[1][1] * ad[2][0]))
            assert abs(complex(det) - 1) < 1e-9

    def presets_validate():
        for name in builtin_names():
            validate_preset(get_preset(name), samples=6)

    def oracle_once():
        ctx = Context()
        preset = get_preset("4_1")
        (y, m), = sample_riley_points(preset.components[0], 1, rng)
        rep = RepPoint(y, m, ctx)
        tp, _ = torsion_polynomial(preset.presentation, rep)
        t0 = ctx.make(1.2, 0.4)
        cx = presentation_complex(preset.presentation, rep, t0)
        ct = chain_torsion(cx)
        pv, _ = tp.eval_and_derivative(t0, ctx)
        ratio = ct.value / pv
        best = min(abs(complex(ratio) - s * complex(t0) ** k)
                   for s in (1, -1) for k in range(-8, 9))
        assert best < 1e-8 * abs(complex(ratio))

    def vanish_41():
        report = verify_vanishing(get_preset("4_1"), 1, 1,
                                  z=complex(1.42, 0.37))
        assert report.verdict == "PASS", report.vanishing_metric

    def khovanskii_41():
        preset = get_preset("4_1")
        a = preset.components[0].apoly
        x = pick_x(complex(1.5, 0.4))
        b = LaurentPoly.monomial(("m", "l"), (1, 1)) - x
        ok, _ = check_nondegenerate([a, b])
        assert ok
        h = parse_poly("m^2 - m^-2", ("m", "l"))
        contained, _ = strict_containment(
            newton_polytope(h),
            minkowski_sum(newton_polytope(a), newton_polytope(b)))
        assert contained
        zeros = solve_torus_system(a, b)
        s = residue_sum([a, b], h, zeros)
        terms = residue_terms([a, b], h, zeros, Context())
        norm = sum(abs(complex(t)) for t in terms) / len(terms)
        assert abs(complex(s)) / norm < 1e-7

    def d_gamma_rule():
        assert d_gamma(0, 1) == 1
        assert d_gamma(1, 0) == 2
        assert d_gamma(2, 1) == 1
        assert d_gamma(3, 2) == 2

    _check("laurent ring and resultants", laurent_ring, results)
    _check("root finder reconstructs coefficients", roots_reconstruct, results)
    _check("fox fundamental identity", fox_identity, results)
    _check("adjoint lands in SL3", adjoint_unimodular, results)
    _check("built-in presets validate", presets_validate, results)
    _check("chain-complex oracle matches fox route", oracle_once, results)
    _check("figure-eight vanishing sum", vanish_41, results)
    _check("figure-eight residue certificate", khovanskii_41, results)
    _check("d_gamma parity rule", d_gamma_rule, results)

    passed = sum(results)
    print(f"{passed}/{len(results)} checks passed")
    return 0 if passed == len(results) else 1
