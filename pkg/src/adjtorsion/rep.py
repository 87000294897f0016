"""SL2 matrices, the adjoint action on sl2, and the twisted evaluation map.

The map Phi sends an integral group-ring element sum n_i w_i to
sum n_i t^{alpha(w_i)} Ad(rho(w_i)), a 3x3 matrix of Laurent polynomials in t.
The sl2 basis is fixed as h = [[1,0],[0,-1]], e = [[0,1],[0,0]],
f = [[0,0],[1,0]], which makes Ad of diagonal matrices diagonal.
"""

from __future__ import annotations

from .errors import DomainError
from .laurent import LaurentPoly
from .numerics import Context, lu_det
from .words import GroupRingElement, Presentation, Word

T = ("t",)

SL2_DET_TOL = 1e-12


def m2_identity(ctx: Context):
    one, zero = ctx.make(1.0), ctx.make(0.0)
    return [[one, zero], [zero, one]]

def m2_mul(a, b):
    return [[a[0][0] * b[0][0] + a[0][1] * b[1][0],
             a[0][0] * b[0][1] + a[0][1] * b[1][1]],
            [a[1][0] * b[0][0] + a[1][1] * b[1][0],
             a[1][0] * b[0][1] + a[1][1] * b[1][1]]]

def m2_det(a):
    return a[0][0] * a[1][1] - a[0][1] * a[1][0]

def m2_trace(a):
    return a[0][0] + a[1][1]

def m2_sl2_inverse(a):
    """Inverse of an SL2 matrix (the adjugate)."""
    return [[a[1][1], -a[0][1]], [-a[1][0], a[0][0]]]

def m2_scale(a) -> float:
    return max(float(abs(v)) for row in a for v in row)

def m2_defect_from_identity(a) -> float:
    """Max-entry distance from the identity matrix."""
    return max(float(abs(a[0][0] - 1)), float(abs(a[0][1])),
               float(abs(a[1][0])), float(abs(a[1][1] - 1)))

def check_sl2(a):
    scale = max(1.0, m2_scale(a) ** 2)
    if float(abs(m2_det(a) - 1)) > SL2_DET_TOL * scale:
        raise DomainError(f"matrix is not unimodular (det = {m2_det(a)})")


def adjoint(a, ctx: Context | None = None):
    """Matrix of v -> a v a^-1 on sl2 in the ordered basis (h, e, f)."""
    if ctx is None:
        ctx = Context()
    check_sl2(a)
    p, q = a[0]
    r, s = a[1]
    inv = m2_sl2_inverse(a)
    cols = []
    for basis in ([[ctx.make(1.0), ctx.make(0.0)], [ctx.make(0.0), ctx.make(-1.0)]],
                  [[ctx.make(0.0), ctx.make(1.0)], [ctx.make(0.0), ctx.make(0.0)]],
                  [[ctx.make(0.0), ctx.make(0.0)], [ctx.make(1.0), ctx.make(0.0)]]):
        img = m2_mul(m2_mul(a, basis), inv)
        # img = [[alpha, beta], [gamma, -alpha]] has coordinates (alpha, beta, gamma)
        cols.append((img[0][0], img[0][1], img[1][0]))
    return [[cols[0][i], cols[1][i], cols[2][i]] for i in range(3)]


def word_image(images, w: Word):
    """rho(w) as a product of generator images and their SL2 inverses."""
    if not w.letters:
        one = images[0][0][0] * 0 + 1
        zero = images[0][0][0] * 0
        return [[one, zero], [zero, one]]
    acc = None
    for gen, exp in w.letters:
        mat = images[gen - 1]
        if exp < 0:
            mat = m2_sl2_inverse(mat)
        acc = mat if acc is None else m2_mul(acc, mat)
    return acc


def riley_images(y, m, ctx: Context):
    """The two-bridge parametric generator images.

       g1 -> [[m, 1], [0, 1/m]],   g2 -> [[m, 0], [y, 1/m]].
    """
    y = ctx.convert(y)
    m = ctx.convert(m)
    one, zero = ctx.make(1.0), ctx.make(0.0)
    minv = 1 / m
    return [[[m, one], [zero, minv]], [[m, zero], [y, minv]]]


class RepPoint:
    """A representation evaluated at numeric parameters (y, m)."""

    __slots__ = ("y", "m", "images", "ctx")

    def __init__(self, y, m, ctx: Context | None = None, images=None):
        if ctx is None:
            ctx = Context()
        self.ctx = ctx
        self.y = ctx.convert(y)
        self.m = ctx.convert(m)
        self.images = images if images is not None else riley_images(y, m, ctx)

    def word_image(self, w: Word):
        return word_image(self.images, w)

    def relator_defect(self, pres: Presentation) -> float:
        return max(m2_defect_from_identity(self.word_image(r))
                   for r in pres.relators)

    def conjugated(self, c) -> "RepPoint":
        cinv = m2_sl2_inverse(c)
        imgs = [m2_mul(m2_mul(c, g), cinv) for g in self.images]
        return RepPoint(self.y, self.m, self.ctx, images=imgs)


# ----------------------------------------------------------------------
# the twisted evaluation map Phi

def _mat3_to_t(mat3, power: int):
    """Embed a scalar 3x3 matrix as t^power * mat3 over Laurent polys in t."""
    return [[LaurentPoly.monomial(T, (power,), mat3[i][j]) for j in range(3)]
            for i in range(3)]


def mat3t_zero():
    z = LaurentPoly.zero(T)
    return [[z, z, z] for _ in range(3)]


def mat3t_add(a, b):
    return [[a[i][j] + b[i][j] for j in range(3)] for i in range(3)]


def mat3t_mul(a, b):
    out = []
    for i in range(3):
        row = []
        for j in range(3):
            acc = a[i][0] * b[0][j]
            for k in (1, 2):
                acc = acc + a[i][k] * b[k][j]
            row.append(acc)
        out.append(row)
    return out


def mat3t_identity():
    one = LaurentPoly.const(T, 1)
    z = LaurentPoly.zero(T)
    return [[one if i == j else z for j in range(3)] for i in range(3)]


def phi_word(w: Word, rep: RepPoint, pres: Presentation, coeff=1):
    """Phi of a single word: coeff * t^{alpha(w)} Ad(rho(w))."""
    power = pres.abelianization_weight(w)
    ad = adjoint(rep.word_image(w), rep.ctx)
    if coeff != 1:
        ad = [[v * coeff for v in row] for row in ad]
    return _mat3_to_t(ad, power)


def phi(elem: GroupRingElement, rep: RepPoint, pres: Presentation):
    """Phi of a group-ring element, as a 3x3 matrix of Laurent polys in t."""
    acc = mat3t_zero()
    for w, c in elem.terms.items():
        acc = mat3t_add(acc, phi_word(w, rep, pres, coeff=c))
    return acc


def mat3t_det(mat, ctx: Context) -> LaurentPoly:
    """Determinant of a matrix over Laurent polynomials in t.

    Row-wise powers of t are factored out, the polynomial determinant is
    evaluated at (degree bound + 1) roots of unity and interpolated, and the
    factored power is restored.
    """
    n = len(mat)
    shift = 0
    rows = []
    bound = 0
    for row in mat:
        vals = [p.valuation("t") for p in row if not p.is_zero()]
        degs = [p.degree("t") for p in row if not p.is_zero()]
        if not vals:
            return LaurentPoly.zero(T)
        v = min(vals)
        shift += v
        bound += max(degs) - v
        mono = LaurentPoly.monomial(T, (-v,))
        rows.append([p * mono for p in row])
    coeff_lists = [[p.univariate_coeff_list() for p in row] for row in rows]
    n_samp = bound + 1
    vals_out = []
    for k in range(n_samp):
        z = ctx.root_of_unity(k, n_samp)
        num_rows = []
        for row in coeff_lists:
            num_row = []
            for lst, val in row:
                acc = ctx.make(0.0)
                for c in reversed(lst):
                    acc = acc * z + ctx.convert(c)
                if val:
                    acc = acc * z ** val
                num_row.append(acc)
            num_rows.append(num_row)
        vals_out.append(lu_det(num_rows, ctx))
    inv_n = 1.0 / n_samp
    terms = {}
    vmax = max((abs(v) for v in vals_out), default=0.0)
    noise = float(vmax) * (n ** 3 * 8.0 + 1024.0) * 2.0 ** (-ctx.bits)
    for j in range(n_samp):
        acc = ctx.make(0.0)
        for k, v in enumerate(vals_out):
            acc = acc + v * ctx.root_of_unity((-j * k) % n_samp, n_samp)
        c = acc * inv_n
        if float(abs(c)) > noise:
            terms[(j + shift,)] = c
    return LaurentPoly(T, terms)
