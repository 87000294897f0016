import pytest

from adjtorsion.errors import DomainError, NonGenericError
from adjtorsion.fiber import (d_gamma, pick_x, resolve_slope_inputs,
                              solve_fiber)
from adjtorsion.roots import univariate_roots
from conftest import random_generic_z


def test_pick_x_modulus_rule():
    assert abs(complex(pick_x(2.5)) - 2.0) < 1e-12  # roots 2 and 1/2
    assert abs(complex(pick_x(0.0)) - 1j) < 1e-12   # tie broken by argument
    z = complex(1.5, 0.5)
    x = complex(pick_x(z))
    assert abs(x * x - z * x + 1) < 1e-12           # quadratic-formula oracle
    assert abs(x) > 1


def test_pick_x_nongeneric():
    for z in (2.0, -2.0):
        with pytest.raises(NonGenericError):
            pick_x(z)


def test_d_gamma_parity():
    assert d_gamma(0, 1) == 1   # longitude is null-homologous
    assert d_gamma(1, 0) == 2   # meridian generates H_1(M; Z/2)
    assert d_gamma(2, 1) == 1
    assert d_gamma(3, 1) == 2
    assert d_gamma(-3, 2) == 2
    with pytest.raises(DomainError):
        d_gamma(2, 4)


def test_resolve_slope_inputs(ctx):
    z, x = resolve_slope_inputs(complex(1.5, 0.5), None, ctx)
    assert abs(complex(x) + 1 / complex(x) - complex(z)) < 1e-12
    z2, x2 = resolve_slope_inputs(None, complex(2, 3), ctx)
    assert abs(complex(z2) - (complex(2, 3) + 1 / complex(2, 3))) < 1e-14
    with pytest.raises(DomainError):
        resolve_slope_inputs(complex(9, 9), complex(2, 3), ctx)
    with pytest.raises(DomainError):
        resolve_slope_inputs(None, None, ctx)


def test_meridian_fiber_is_riley_root_count(k41):
    """At the meridian slope the count equals the number of y-roots of the
    Riley polynomial at m = x (brute-force oracle)."""
    z = complex(1.7, 0.4)
    points, zz, x, ctx = solve_fiber(k41, 1, 0, z=z)
    fy = k41.components[0].riley.substitute({"m": x})
    oracle = univariate_roots(fy, 53)
    assert len(points) == len(oracle) == 2


def test_52_regression_count(k52):
    points, z, x, ctx = solve_fiber(k52, 3, 1, z=complex(1.5, 0.5))
    assert len(points) == 23


def test_point_invariants(k52):
    points, z, x, ctx = solve_fiber(k52, 3, 1, z=complex(1.5, 0.5))
    for pt in points:
        assert max(pt.residuals) <= 1e-10
        assert float(abs(pt.m)) > 0 and float(abs(pt.l)) > 0
        ml = complex(pt.m) ** 3 * complex(pt.l)
        assert abs(ml + 1 / ml - complex(z)) <= 1e-8 * (1 + abs(complex(z)))
    # canonical ordering
    keys = [pt.sort_key() for pt in points]
    assert keys == sorted(keys)
    # pairwise separation above the dedup tolerance
    for i, a in enumerate(points):
        for b in points[i + 1:]:
            d = abs(complex(a.y) - complex(b.y)) + abs(complex(a.m) - complex(b.m))
            assert d > 1e-8 * (1 + abs(complex(a.y)) + abs(complex(a.m)))


def test_fiber_count_locally_constant(k41, rng):
    z = random_generic_z(rng)
    base, *_ = solve_fiber(k41, 1, 1, z=z)
    for _ in range(2):
        dz = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
        dz = 1e-4 * dz / abs(dz)
        moved, *_ = solve_fiber(k41, 1, 1, z=z + dz)
        assert len(moved) == len(base)


def test_precision_doubling_stability(k41):
    points, z, x, ctx = solve_fiber(k41, 1, 1, z=complex(1.45, 0.52),
                                    check_stability=True)
    assert len(points) == 8


def test_ym_route_matches_apoly_route(k41, rng):
    """The (y,m)-elimination and A-polynomial routes agree bijectively."""
    z = random_generic_z(rng)
    a_pts, _, _, _ = solve_fiber(k41, 1, 1, z=z, route="apoly")
    y_pts, _, _, _ = solve_fiber(k41, 1, 1, z=z, route="ym")
    assert len(a_pts) == len(y_pts)
    for a, b in zip(a_pts, y_pts):
        dist = (abs(complex(a.y) - complex(b.y))
                + abs(complex(a.m) - complex(b.m))
                + abs(complex(a.l) - complex(b.l)))
        assert dist <= 1e-8 * (1 + abs(complex(a.y)) + abs(complex(a.m)))


def test_non_coprime_slope_rejected(k41):
    with pytest.raises(DomainError):
        solve_fiber(k41, 2, 2, z=complex(1.5, 0.5))


def test_jacobian_attached(k52):
    points, *_ = solve_fiber(k52, 3, 1, z=complex(1.5, 0.5))
    assert all(float(abs(pt.jacobian_det)) > 0 for pt in points)


def test_meridian_counts_match_riley_degrees(k52, k74):
    """Meridian fibers have one point per y-root of each Riley polynomial."""
    pts52, *_ = solve_fiber(k52, 1, 0, z=complex(1.45, 0.52))
    assert len(pts52) == k52.components[0].riley.degree("y") == 3
    pts74, *_ = solve_fiber(k74, 1, 0, z=complex(1.45, 0.52), prec=192)
    per_comp = [sum(1 for p in pts74 if p.component == i) for i in (0, 1)]
    assert per_comp == [c.riley.degree("y") for c in k74.components] == [3, 4]


def test_negative_q_slopes_vanish(k41, k52):
    from adjtorsion.verify import verify_vanishing
    for preset, slope in ((k41, (1, -1)), (k52, (1, -2))):
        report = verify_vanishing(preset, *slope, z=complex(1.45, 0.52))
        assert report.verdict == "PASS"
