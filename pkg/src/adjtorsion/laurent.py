"""Sparse multivariate Laurent polynomials with exact or complex coefficients.

Terms live in a dict mapping exponent vectors (tuples of ints, possibly
negative) to coefficients.  Coefficients are ``int``/``Fraction`` for exact
data (preset polynomials, symbolic resultants) and backend complex scalars
after numeric substitution.  Zero coefficients are never stored, so two
polynomials are equal iff their term dicts are equal.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import DomainError, StructureError
from .numerics import Context, lu_det, scalar_abs


def _canon(c):
    """Collapse integer-valued Fractions back to int; keep others as-is."""
    if isinstance(c, Fraction) and c.denominator == 1:
        return int(c)
    return c


class LaurentPoly:
    """Immutable sparse Laurent polynomial over an ordered variable tuple."""

    __slots__ = ("vars", "terms")
    __hash__ = None

    def __init__(self, variables, terms=None):
        self.vars = tuple(variables)
        pruned = {}
        if terms:
            nv = len(self.vars)
            for exps, c in terms.items():
                if len(exps) != nv:
                    raise StructureError(
                        f"exponent vector {exps} does not match variables {self.vars}")
                c = _canon(c)
                if c == 0:
                    continue
                exps = tuple(int(e) for e in exps)
                if exps in pruned:
                    s = _canon(pruned[exps] + c)
                    if s == 0:
                        del pruned[exps]
                    else:
                        pruned[exps] = s
                else:
                    pruned[exps] = c
        self.terms = pruned

    # ------------------------------------------------------------------
    # constructors

    @classmethod
    def zero(cls, variables):
        return cls(variables, {})

    @classmethod
    def const(cls, variables, value):
        variables = tuple(variables)
        return cls(variables, {(0,) * len(variables): value})

    @classmethod
    def monomial(cls, variables, exps, coeff=1):
        return cls(variables, {tuple(exps): coeff})

    @classmethod
    def variable(cls, variables, name, exp=1):
        variables = tuple(variables)
        if name not in variables:
            raise StructureError(f"unknown variable {name!r} in {variables}")
        exps = [0] * len(variables)
        exps[variables.index(name)] = exp
        return cls.monomial(variables, exps)

    # ------------------------------------------------------------------
    # basic structure

    def is_zero(self):
        return not self.terms

    def is_constant(self):
        return all(all(e == 0 for e in exps) for exps in self.terms)

    def is_monomial(self):
        return len(self.terms) == 1

    def constant_value(self):
        if self.is_zero():
            return 0
        if not self.is_constant():
            raise DomainError("polynomial is not constant")
        return next(iter(self.terms.values()))

    def num_terms(self):
        return len(self.terms)

    def support(self):
        """Exponent vectors of the nonzero terms."""
        return list(self.terms.keys())

    def coeff_scale(self) -> float:
        """Largest coefficient magnitude (0.0 for the zero polynomial)."""
        return max((scalar_abs(c) for c in self.terms.values()), default=0.0)

    def _vi(self, name):
        try:
            return self.vars.index(name)
        except ValueError:
            raise StructureError(f"unknown variable {name!r} in {self.vars}") from None

    def degree(self, name):
        """Max exponent of ``name``; None for the zero polynomial."""
        i = self._vi(name)
        if not self.terms:
            return None
        return max(e[i] for e in self.terms)

    def valuation(self, name):
        """Min exponent of ``name``; None for the zero polynomial."""
        i = self._vi(name)
        if not self.terms:
            return None
        return min(e[i] for e in self.terms)

    # ------------------------------------------------------------------
    # arithmetic

    def _coerce(self, other):
        if isinstance(other, LaurentPoly):
            if other.vars != self.vars:
                raise StructureError(
                    f"variable mismatch: {self.vars} vs {other.vars}")
            return other
        if isinstance(other, (int, Fraction)) or not hasattr(other, "vars"):
            return LaurentPoly.const(self.vars, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self.terms)
        for exps, c in other.terms.items():
            s = _canon(out.get(exps, 0) + c)
            if s == 0:
                out.pop(exps, None)
            else:
                out[exps] = s
        return LaurentPoly(self.vars, out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly(self.vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = _canon(out.get(e, 0) + c1 * c2)
                if s == 0:
                    out.pop(e, None)
                else:
                    out[e] = s
        return LaurentPoly(self.vars, out)

    __rmul__ = __mul__

    def __pow__(self, n):
        n = int(n)
        if n < 0:
            if not self.is_monomial():
                raise DomainError("negative powers only for monomials")
            (exps, c), = self.terms.items()
            cinv = Fraction(1, 1) / c if isinstance(c, (int, Fraction)) else 1 / c
            return LaurentPoly(self.vars,
                               {tuple(e * n for e in exps): _canon(cinv ** (-n))})
        result = LaurentPoly.const(self.vars, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, LaurentPoly):
            return self.vars == other.vars and self.terms == other.terms
        if isinstance(other, (int, Fraction, float, complex)):
            if other == 0:
                return self.is_zero()
            return self.is_constant() and self.constant_value() == other
        return NotImplemented

    # ------------------------------------------------------------------
    # calculus / evaluation

    def derivative(self, name):
        i = self._vi(name)
        out = {}
        for exps, c in self.terms.items():
            e = exps[i]
            if e == 0:
                continue
            ne = list(exps)
            ne[i] = e - 1
            out[tuple(ne)] = c * e
        return LaurentPoly(self.vars, out)

    @staticmethod
    def _powval(value, e):
        if e == 0:
            return 1
        if e < 0 and isinstance(value, int):
            return Fraction(1, value ** (-e))
        if e < 0 and isinstance(value, Fraction):
            return value ** e
        return value ** e

    def _power_tables(self, values, absolute=False):
        tables = []
        for i, name in enumerate(self.vars):
            exps = {e[i] for e in self.terms}
            exps.discard(0)
            v = values[name]
            if absolute:
                v = scalar_abs(v)
                table = {e: v ** e for e in exps}
            else:
                table = {e: self._powval(v, e) for e in exps}
            tables.append(table)
        return tables

    def evaluate(self, **values):
        """Full numeric evaluation; every variable must be assigned."""
        missing = [v for v in self.vars if v not in values]
        if missing:
            raise StructureError(f"missing values for {missing}")
        tables = self._power_tables(values)
        acc = 0
        for exps, c in self.terms.items():
            t = c
            for i, e in enumerate(exps):
                if e != 0:
                    t = t * tables[i][e]
            acc = acc + t
        return acc

    def eval_scale(self, **values):
        """Sum of absolute term values: the natural residual scale at a point."""
        tables = self._power_tables(values, absolute=True)
        acc = 0.0
        for exps, c in self.terms.items():
            t = scalar_abs(c)
            for i, e in enumerate(exps):
                if e != 0:
                    t *= tables[i][e]
            acc += t
        return acc

    def substitute(self, values: dict):
        """Partial substitution; returns a polynomial in the remaining vars."""
        keep = [i for i, v in enumerate(self.vars) if v not in values]
        if len(keep) == len(self.vars):
            return self
        newvars = tuple(self.vars[i] for i in keep)
        out = {}
        for exps, c in self.terms.items():
            t = c
            for name, e in zip(self.vars, exps):
                if name in values and e != 0:
                    t = t * self._powval(values[name], e)
            ne = tuple(exps[i] for i in keep)
            s = _canon(out.get(ne, 0) + t)
            if s == 0:
                out.pop(ne, None)
            else:
                out[ne] = s
        return LaurentPoly(newvars, out)

    def with_vars(self, newvars):
        """Re-embed into a (super)set of variables, preserving exponents."""
        newvars = tuple(newvars)
        idx = []
        for v in self.vars:
            if v not in newvars:
                raise StructureError(f"variable {v!r} missing from {newvars}")
            idx.append(newvars.index(v))
        out = {}
        for exps, c in self.terms.items():
            ne = [0] * len(newvars)
            for j, e in zip(idx, exps):
                ne[j] = e
            out[tuple(ne)] = c
        return LaurentPoly(newvars, out)

    def map_coeffs(self, fn):
        return LaurentPoly(self.vars, {e: fn(c) for e, c in self.terms.items()})

    # ------------------------------------------------------------------
    # clearing and univariate views

    def clear_negative(self, name=None):
        """Multiply by the minimal monomial making exponents nonnegative.

        Returns ``(cleared, shifts)`` where shifts maps variable -> the power
        of that variable multiplied in.  Torus zeros are unaffected.
        """
        names = [name] if name is not None else list(self.vars)
        shifts = {}
        exps_shift = [0] * len(self.vars)
        for nm in names:
            i = self._vi(nm)
            val = min((e[i] for e in self.terms), default=0)
            if val < 0:
                shifts[nm] = -val
                exps_shift[i] = -val
        if not shifts:
            return self, {}
        out = {tuple(a + b for a, b in zip(e, exps_shift)): c
               for e, c in self.terms.items()}
        return LaurentPoly(self.vars, out), shifts

    def coeffs_in(self, name):
        """Coefficients as polynomials in the remaining variables.

        Returns a dict exponent -> LaurentPoly over ``vars`` minus ``name``.
        """
        i = self._vi(name)
        rest = tuple(v for j, v in enumerate(self.vars) if j != i)
        buckets = {}
        for exps, c in self.terms.items():
            e = exps[i]
            ne = tuple(x for j, x in enumerate(exps) if j != i)
            buckets.setdefault(e, {})[ne] = c
        return {e: LaurentPoly(rest, t) for e, t in buckets.items()}

    def univariate_coeff_list(self):
        """Dense ascending coefficient list for a single-variable polynomial.

        Negative exponents are cleared first (roots at 0 are excluded by
        construction).  Returns ``(coeffs, shift)``.
        """
        if len(self.vars) != 1:
            raise StructureError("polynomial is not univariate")
        if self.is_zero():
            return [], 0
        val = min(e[0] for e in self.terms)
        deg = max(e[0] for e in self.terms)
        coeffs = [0] * (deg - val + 1)
        for (e,), c in self.terms.items():
            coeffs[e - val] = c
        return coeffs, val

    # ------------------------------------------------------------------
    # exact division

    def divide_exact(self, other: "LaurentPoly") -> "LaurentPoly":
        """Exact quotient self/other; raises DomainError if not divisible."""
        other = self._coerce(other)
        if other.is_zero():
            raise DomainError("division by zero polynomial")
        if self.is_zero():
            return LaurentPoly.zero(self.vars)
        # shift both to polynomial support, divide, shift the quotient back
        r, r_sh = self.clear_negative()
        d, d_sh = other.clear_negative()
        quo = {}
        rterms = dict(r.terms)
        dlead = max(d.terms)  # lex-max exponent
        dlc = d.terms[dlead]
        # valuations are additive under multiplication (minimal-face products
        # cannot vanish), so quotient exponents are bounded below by
        # val(r) - val(d); this also guarantees termination
        nv = len(self.vars)
        lower = tuple(min(e[i] for e in r.terms) - min(e[i] for e in d.terms)
                      for i in range(nv))
        while rterms:
            rlead = max(rterms)
            rlc = rterms[rlead]
            qe = tuple(a - b for a, b in zip(rlead, dlead))
            if any(e < lo for e, lo in zip(qe, lower)):
                raise DomainError("not divisible")
            if isinstance(rlc, (int, Fraction)) and isinstance(dlc, (int, Fraction)):
                qc = _canon(Fraction(rlc) / Fraction(dlc)
                            if not (isinstance(rlc, int) and isinstance(dlc, int)
                                    and rlc % dlc == 0) else rlc // dlc)
            else:
                qc = rlc / dlc
            quo[qe] = qc
            for de, dc in d.terms.items():
                e = tuple(a + b for a, b in zip(qe, de))
                s = _canon(rterms.get(e, 0) - qc * dc)
                if s == 0:
                    rterms.pop(e, None)
                else:
                    rterms[e] = s
        shift = [0] * len(self.vars)
        for nm, k in r_sh.items():
            shift[self._vi(nm)] -= k
        for nm, k in d_sh.items():
            shift[self._vi(nm)] += k
        out = {tuple(a + b for a, b in zip(e, shift)): c for e, c in quo.items()}
        return LaurentPoly(self.vars, out)

    def divides(self, other: "LaurentPoly") -> bool:
        try:
            other.divide_exact(self)
            return True
        except DomainError:
            return False

    def primitive(self):
        """Divide an integer polynomial by the gcd of its coefficients."""
        if not self.terms or not all(isinstance(c, int) for c in self.terms.values()):
            return self
        from math import gcd
        g = 0
        for c in self.terms.values():
            g = gcd(g, abs(c))
        if g <= 1:
            return self
        return LaurentPoly(self.vars, {e: c // g for e, c in self.terms.items()})

    # ------------------------------------------------------------------
    # display

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for exps in sorted(self.terms, reverse=True):
            c = self.terms[exps]
            mono = "*".join(
                f"{v}^{e}" if e != 1 else v
                for v, e in zip(self.vars, exps) if e != 0)
            if mono:
                if c == 1:
                    parts.append(mono)
                elif c == -1:
                    parts.append(f"-{mono}")
                else:
                    parts.append(f"{c}*{mono}")
            else:
                parts.append(str(c))
        s = " + ".join(parts)
        return s.replace("+ -", "- ")

    __repr__ = __str__


# ----------------------------------------------------------------------
# parsing of the plain-text monomial syntax, e.g.
#   (y-1)*(m^2+m^-2) + y^2 - 3*y + 3

class _Tok:
    def __init__(self, kind, value=None):
        self.kind, self.value = kind, value


def _tokenize(text):
    toks, i, n = [], 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch in "+-*()^":
            toks.append(_Tok(ch))
            i += 1
        elif ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            toks.append(_Tok("int", int(text[i:j])))
            i = j
        elif ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            toks.append(_Tok("name", text[i:j]))
            i = j
        else:
            raise DomainError(f"unexpected character {ch!r} in polynomial text")
    toks.append(_Tok("end"))
    return toks


class _Parser:
    def __init__(self, toks, variables):
        self.toks, self.pos, self.vars = toks, 0, tuple(variables)

    def peek(self):
        return self.toks[self.pos]

    def take(self, kind=None):
        t = self.toks[self.pos]
        if kind is not None and t.kind != kind:
            raise DomainError(f"expected {kind!r}, found {t.kind!r}")
        self.pos += 1
        return t

    def parse_expr(self):
        sign = 1
        while self.peek().kind in "+-":
            if self.take().kind == "-":
                sign = -sign
        acc = self.parse_term() * sign
        while self.peek().kind in "+-":
            sign = 1
            while self.peek().kind in "+-":
                if self.take().kind == "-":
                    sign = -sign
            acc = acc + self.parse_term() * sign
        return acc

    def parse_term(self):
        acc = self.parse_factor()
        while self.peek().kind == "*":
            self.take()
            acc = acc * self.parse_factor()
        return acc

    def parse_factor(self):
        t = self.peek()
        if t.kind == "-":
            self.take()
            return -self.parse_factor()
        if t.kind == "int":
            self.take()
            base = LaurentPoly.const(self.vars, t.value)
        elif t.kind == "name":
            self.take()
            base = LaurentPoly.variable(self.vars, t.value)
        elif t.kind == "(":
            self.take()
            base = self.parse_expr()
            self.take(")")
        else:
            raise DomainError(f"unexpected token {t.kind!r} in polynomial text")
        if self.peek().kind == "^":
            self.take()
            neg = False
            if self.peek().kind == "-":
                self.take()
                neg = True
            e = self.take("int").value
            base = base ** (-e if neg else e)
        return base


def parse_poly(text: str, variables) -> LaurentPoly:
    """Parse the plain-text monomial syntax over the given variables."""
    p = _Parser(_tokenize(text), variables)
    out = p.parse_expr()
    p.take("end")
    return out


# ----------------------------------------------------------------------
# resultants

@dataclass
class ResultantInfo:
    resultant: LaurentPoly
    shift_f: dict = field(default_factory=dict)
    shift_g: dict = field(default_factory=dict)
    warnings: list = field(default_factory=list)


def sylvester_matrix(f: LaurentPoly, g: LaurentPoly, name: str):
    """Sylvester matrix rows over the remaining variables.

    Both inputs must already have nonnegative exponents in ``name``.
    """
    cf = f.coeffs_in(name)
    cg = g.coeffs_in(name)
    df = max(cf)
    dg = max(cg)
    rest = next(iter(cf.values())).vars
    zero = LaurentPoly.zero(rest)
    rows = []
    for r in range(dg):
        row = [zero] * (df + dg)
        for e, c in cf.items():
            row[r + (df - e)] = c
        rows.append(row)
    for r in range(df):
        row = [zero] * (df + dg)
        for e, c in cg.items():
            row[r + (dg - e)] = c
        rows.append(row)
    return rows, df, dg


def _bareiss_det(rows):
    """Fraction-free determinant over polynomial entries (exact division)."""
    n = len(rows)
    if n == 0:
        return None
    a = [list(r) for r in rows]
    some = a[0][0]
    one = LaurentPoly.const(some.vars, 1)
    prev = one
    sign = 1
    for k in range(n - 1):
        if a[k][k].is_zero():
            piv = next((r for r in range(k + 1, n) if not a[r][k].is_zero()), None)
            if piv is None:
                return LaurentPoly.zero(some.vars)
            a[k], a[piv] = a[piv], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = a[i][j] * a[k][k] - a[i][k] * a[k][j]
                a[i][j] = num.divide_exact(prev)
            a[i][k] = LaurentPoly.zero(some.vars)
        prev = a[k][k]
    det = a[n - 1][n - 1]
    return -det if sign < 0 else det


def resultant_info(f: LaurentPoly, g: LaurentPoly, name: str) -> ResultantInfo:
    """Sylvester resultant eliminating ``name``, fraction-free (Bareiss).

    Negative powers of ``name`` are cleared by monomial multiplication first;
    the cleared factors are recorded in the returned info.  Torus zeros are
    unaffected by the clearing.
    """
    if f.vars != g.vars:
        raise StructureError(f"variable mismatch: {f.vars} vs {g.vars}")
    fc, sf = f.clear_negative(name)
    gc, sg = g.clear_negative(name)
    df = fc.degree(name)
    dg = gc.degree(name)
    if df is None or dg is None:
        raise DomainError("resultant of a zero polynomial")
    if df == 0 and dg == 0:
        raise DomainError(f"both inputs constant in {name!r}")
    warnings = []
    if df == 0 or dg == 0:
        const, other, dd = (fc, gc, dg) if df == 0 else (gc, fc, df)
        c = next(iter(const.coeffs_in(name).values()))
        res = c ** dd
        rest = tuple(v for v in f.vars if v != name)
        return ResultantInfo(res.with_vars(rest) if res.vars != rest else res,
                             sf, sg, warnings)
    rows, _, _ = sylvester_matrix(fc, gc, name)
    lead_f = fc.coeffs_in(name)[df]
    lead_g = gc.coeffs_in(name)[dg]
    if not lead_f.is_monomial() and not lead_g.is_monomial():
        warnings.append(
            "both leading coefficients are non-monomial; the resultant may "
            "acquire extraneous factors where they vanish simultaneously")
    res = _bareiss_det(rows)
    return ResultantInfo(res, sf, sg, warnings)


def resultant(f: LaurentPoly, g: LaurentPoly, name: str) -> LaurentPoly:
    return resultant_info(f, g, name).resultant


def resultant_numeric(f: LaurentPoly, g: LaurentPoly, name: str,
                      ctx: Context) -> LaurentPoly:
    """Resultant eliminating ``name`` from a two-variable system, numerically.

    Evaluates the Sylvester determinant at roots of unity in the surviving
    variable and interpolates.  The output is a univariate polynomial whose
    torus roots are the elimination values; monomial factors and tiny
    interpolation noise at the extreme degrees are discarded.
    """
    if f.vars != g.vars:
        raise StructureError(f"variable mismatch: {f.vars} vs {g.vars}")
    if len(f.vars) != 2:
        raise StructureError("numeric resultant expects exactly two variables")
    uname = next(v for v in f.vars if v != name)
    fc, _ = f.clear_negative()
    gc, _ = g.clear_negative()
    df = fc.degree(name)
    dg = gc.degree(name)
    if df is None or dg is None:
        raise DomainError("resultant of a zero polynomial")
    if df == 0 and dg == 0:
        raise DomainError(f"both inputs constant in {name!r}")
    du_f = fc.degree(uname) or 0
    du_g = gc.degree(uname) or 0
    bound = df * du_g + dg * du_f
    n_samp = bound + 1
    cf = {e: c.univariate_coeff_list() for e, c in fc.coeffs_in(name).items()}
    cg = {e: c.univariate_coeff_list() for e, c in gc.coeffs_in(name).items()}

    def eval_at(u):
        def horner(lst_shift):
            lst, shift = lst_shift
            acc = ctx.make(0.0)
            for c in reversed(lst):
                acc = acc * u + ctx.convert(c)
            if shift:
                acc = acc * u ** shift
            return acc
        size = df + dg
        zero = ctx.make(0.0)
        rows = [[zero] * size for _ in range(size)]
        for r in range(dg):
            for e, lst in cf.items():
                rows[r][r + (df - e)] = horner(lst)
        for r in range(df):
            for e, lst in cg.items():
                rows[dg + r][r + (dg - e)] = horner(lst)
        return lu_det(rows, ctx)

    if bound == 0:
        val = eval_at(ctx.make(1.0))
        return LaurentPoly.const((uname,), val)

    vals = [eval_at(ctx.root_of_unity(k, n_samp)) for k in range(n_samp)]
    inv_n = 1.0 / n_samp
    coeffs = []
    for j in range(n_samp):
        acc = ctx.make(0.0)
        for k, v in enumerate(vals):
            acc = acc + v * ctx.root_of_unity((-j * k) % n_samp, n_samp)
        coeffs.append(acc * inv_n)
    vmax = max((abs(v) for v in vals), default=0.0)
    size = df + dg
    noise = float(vmax) * (size ** 3 * 8.0 + 1024.0) * 2.0 ** (-ctx.bits)
    # coefficients below the determinant-evaluation noise floor are
    # indistinguishable from zero; dropping them keeps the support exact
    out = {(e,): c for e, c in enumerate(coeffs) if abs(c) > noise}
    return LaurentPoly((uname,), out)
