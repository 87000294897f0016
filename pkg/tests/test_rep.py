import pytest

from adjtorsion.errors import DomainError
from adjtorsion.laurent import LaurentPoly
from adjtorsion.presets import sample_riley_points
from adjtorsion.rep import (RepPoint, adjoint, m2_trace, mat3t_det,
                            mat3t_identity, mat3t_mul, phi, phi_word)
from adjtorsion.words import GroupRingElement, Word

T = ("t",)


def _rand_sl2(rng, ctx):
    a = ctx.make(rng.gauss(0, 1), rng.gauss(0, 1))
    b = ctx.make(rng.gauss(0, 1), rng.gauss(0, 1))
    c = ctx.make(rng.gauss(0, 1), rng.gauss(0, 1))
    d = (1 + b * c) / a
    return [[a, b], [c, d]]


def _det3(m):
    return (m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]))


def test_adjoint_of_identity(ctx):
    ad = adjoint([[ctx.make(1), ctx.make(0)], [ctx.make(0), ctx.make(1)]], ctx)
    for i in range(3):
        for j in range(3):
            assert abs(complex(ad[i][j]) - (1 if i == j else 0)) < 1e-14


def test_adjoint_of_diagonal(ctx):
    # hand check: Ad(diag(m, 1/m)) = diag(1, m^2, m^-2) in basis (h, e, f)
    m = complex(1.4, 0.3)
    mat = [[ctx.make(m.real, m.imag), ctx.make(0)],
           [ctx.make(0), 1 / ctx.make(m.real, m.imag)]]
    ad = adjoint(mat, ctx)
    assert abs(complex(ad[0][0]) - 1) < 1e-12
    assert abs(complex(ad[1][1]) - m * m) < 1e-12
    assert abs(complex(ad[2][2]) - 1 / (m * m)) < 1e-12
    off = max(abs(complex(ad[i][j])) for i in range(3) for j in range(3)
              if i != j)
    assert off < 1e-12


def test_adjoint_lands_in_sl3(rng, ctx):
    for _ in range(100):
        ad = adjoint(_rand_sl2(rng, ctx), ctx)
        assert abs(complex(_det3(ad)) - 1) < 1e-9


def test_adjoint_rejects_non_unimodular(ctx):
    with pytest.raises(DomainError):
        adjoint([[ctx.make(2), ctx.make(0)], [ctx.make(0), ctx.make(2)]], ctx)


def test_phi_identity_word(k41, rng, ctx):
    (y, m), = sample_riley_points(k41.components[0], 1, rng)
    rep = RepPoint(y, m, ctx)
    mat = phi(GroupRingElement.one(), rep, k41.presentation)
    assert mat == mat3t_identity() or all(
        (mat[i][j] - mat3t_identity()[i][j]).coeff_scale() < 1e-14
        for i in range(3) for j in range(3))


def test_phi_g_minus_one_is_foxtor_denominator(k41, rng, ctx):
    """det Phi(g1 - 1) = (t-1)(t m^2 - 1)(t m^-2 - 1) up to roundoff."""
    (y, m), = sample_riley_points(k41.components[0], 1, rng)
    rep = RepPoint(y, m, ctx)
    elem = GroupRingElement.from_word(Word.gen(1)) - GroupRingElement.one()
    det = mat3t_det(phi(elem, rep, k41.presentation), ctx)
    m2 = complex(m) ** 2
    tvar = LaurentPoly.variable(T, "t")
    target = (tvar - 1) * (tvar * m2 - 1) * (tvar * (1 / m2) - 1)
    diff = det - target
    assert diff.coeff_scale() < 1e-10 * target.coeff_scale()


def test_phi_is_ring_homomorphism(k41, rng, ctx):
    (y, m), = sample_riley_points(k41.components[0], 1, rng)
    rep = RepPoint(y, m, ctx)
    pres = k41.presentation
    for _ in range(6):
        u = Word(tuple((rng.randint(1, 2), rng.choice((1, -1)))
                       for _ in range(rng.randint(0, 6))))
        v = Word(tuple((rng.randint(1, 2), rng.choice((1, -1)))
                       for _ in range(rng.randint(0, 6))))
        lhs = mat3t_mul(phi_word(u, rep, pres), phi_word(v, rep, pres))
        rhs = phi_word(u * v, rep, pres)
        for i in range(3):
            for j in range(3):
                d = lhs[i][j] - rhs[i][j]
                scale = max(rhs[i][j].coeff_scale(), 1.0)
                assert d.coeff_scale() <= 1e-10 * scale
        eu = GroupRingElement.from_word(u)
        ev = GroupRingElement.from_word(v)
        add_l = phi(eu + ev, rep, pres)
        add_r = [[phi(eu, rep, pres)[i][j] + phi(ev, rep, pres)[i][j]
                  for j in range(3)] for i in range(3)]
        for i in range(3):
            for j in range(3):
                assert (add_l[i][j] - add_r[i][j]).coeff_scale() <= 1e-12 * max(
                    add_r[i][j].coeff_scale(), 1.0)


def test_relator_kernel_all_presets(k41, k52, k74, rng, ctx):
    for preset in (k41, k52, k74):
        pres = preset.presentation
        for comp in preset.components:
            for (y, m) in sample_riley_points(comp, 5, rng):
                rep = RepPoint(y, m, ctx)
                assert rep.relator_defect(pres) <= 1e-8


def test_longitude_eigenvalue_consistency(k41, k52, k74, rng, ctx):
    """trace rho(lambda) = l + 1/l with l the stored expression."""
    for preset in (k41, k52, k74):
        for comp in preset.components:
            for (y, m) in sample_riley_points(comp, 4, rng):
                rep = RepPoint(y, m, ctx)
                lam = rep.word_image(preset.longitude)
                lval = comp.longitude_expr.evaluate(y=y, m=m)
                tr = complex(m2_trace(lam))
                expect = complex(lval) + 1 / complex(lval)
                assert abs(tr - expect) <= 1e-8 * (1 + abs(expect))


def test_rep_conjugation(k41, rng, ctx):
    (y, m), = sample_riley_points(k41.components[0], 1, rng)
    rep = RepPoint(y, m, ctx)
    c = _rand_sl2(rng, ctx)
    conj = rep.conjugated(c)
    # traces are conjugation invariants
    for w in (Word.gen(1), Word.gen(2), k41.longitude):
        t1 = complex(m2_trace(rep.word_image(w)))
        t2 = complex(m2_trace(conj.word_image(w)))
        assert abs(t1 - t2) <= 1e-9 * (1 + abs(t1))
