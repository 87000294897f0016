"""Knot presets: presentation, Riley components, longitude data, regressions.

Presets are TOML documents; the built-in ones (4_1, 5_2, 7_4) are embedded
below in exactly the format accepted for user preset files:

    name = "4_1"
    generators = 2
    relators = ["g1^-1 g2 g1 g2^-1 g1 g2 g1^-1 g2^-1 g1 g2^-1"]
    longitude = "g2^-1 g1 g2 g1^-1 g1^-1 g2 g1 g2^-1"
    recommended_bits = 53

    [[components]]
    riley = "(y-1)*(m^2+m^-2) + y^2 - 3*y + 3"
    longitude_expr = "..."
    apoly = "..."            # optional, variables (m, l)
    tor_lambda_num = "..."   # optional closed form for regressions
    tor_lambda_den = "..."   # optional, defaults to 1

Polynomials use the plain-text monomial syntax of :func:`parse_poly`; words
use whitespace-separated tokens like ``g1 g2^-1``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

from .errors import DomainError, SolverError, StructureError
from .laurent import LaurentPoly, parse_poly
from .numerics import Context
from .rep import RepPoint
from .roots import univariate_roots
from .words import Presentation, Word

YM = ("y", "m")
ML = ("m", "l")


@dataclass
class PresetComponent:
    """One irreducible component of the character variety."""

    riley: LaurentPoly                      # f(y, m)
    longitude_expr: LaurentPoly             # l as a polynomial in (y, m)
    apoly: LaurentPoly | None = None        # A(m, l), optional
    tor_lambda: tuple | None = None         # (num, den) closed form in (y, m)


@dataclass
class KnotPreset:
    name: str
    generator_count: int
    relators: tuple
    longitude: Word
    components: list
    recommended_bits: int = 53
    _presentation: Presentation = field(default=None, repr=False)

    @property
    def presentation(self) -> Presentation:
        if self._presentation is None:
            self._presentation = Presentation(self.generator_count,
                                              tuple(self.relators))
        return self._presentation


def parse_preset(text: str) -> KnotPreset:
    data = tomllib.loads(text)
    try:
        name = data["name"]
        gens = int(data["generators"])
        relators = tuple(Word.from_string(r) for r in data["relators"])
        longitude = Word.from_string(data["longitude"])
        comps_raw = data["components"]
    except KeyError as e:
        raise StructureError(f"preset is missing required field {e}") from None
    if longitude.exponent_sum() != 0:
        raise StructureError("longitude word must be null-homologous "
                             "(zero exponent sum)")
    components = []
    for c in comps_raw:
        riley = parse_poly(c["riley"], YM)
        lexpr = parse_poly(c["longitude_expr"], YM)
        apoly = parse_poly(c["apoly"], ML) if "apoly" in c else None
        tor = None
        if "tor_lambda_num" in c:
            num = parse_poly(c["tor_lambda_num"], YM)
            den = parse_poly(c.get("tor_lambda_den", "1"), YM)
            tor = (num, den)
        components.append(PresetComponent(riley, lexpr, apoly, tor))
    if not components:
        raise StructureError("preset has no components")
    return KnotPreset(name, gens, relators, longitude, components,
                      int(data.get("recommended_bits", 53)))


def load_preset(path, validate: bool = True, samples: int = 20) -> KnotPreset:
    """Parse a preset file; cross-validates the data against word evaluation
    unless ``validate=False`` (transcription errors raise StructureError)."""
    with open(path, "rb") as fh:
        text = fh.read().decode("utf-8")
    preset = parse_preset(text)
    if validate:
        validate_preset(preset, samples=samples)
    return preset


# ----------------------------------------------------------------------
# built-in presets
#
# Presentations are two-bridge normal forms w g1 w^-1 g2^-1 with
# w = two_bridge_word(p, q, first=1, sign=-1) for (p, q) = (5,3), (7,5),
# (15,11); longitudes are rev(w) * w * g1^(-2e).  All data is validated
# against word evaluation at load time (validate_preset).

_BUILTIN_TOML = {}

_BUILTIN_TOML["4_1"] = """
name = "4_1"
generators = 2
relators = ["g1^-1 g2 g1 g2^-1 g1 g2 g1^-1 g2^-1 g1 g2^-1"]
longitude = "g2^-1 g1 g2 g1^-1 g1^-1 g2 g1 g2^-1"
recommended_bits = 53

[[components]]
riley = "(y-1)*(m^2+m^-2) + y^2 - 3*y + 3"
longitude_expr = "-(m^-2)*(y-3)*(y-1)^2 - (m^-4)*(y^2-3*y+1)"
apoly = "l + l^-1 - m^-4 + m^-2 + 2 + m^2 - m^4"
tor_lambda_num = "-(2*m^2 - 1 + 2*m^-2)"
"""

# The longitude eigenvalue expression below was reconstructed from the
# word-evaluated longitude (canonical form mod the Riley polynomial) and
# reproduces the published 23-point torsion table exactly.
_BUILTIN_TOML["5_2"] = """
name = "5_2"
generators = 2
relators = ["g1^-1 g2 g1^-1 g2^-1 g1 g2^-1 g1 g2 g1^-1 g2 g1 g2^-1 g1 g2^-1"]
longitude = "g2^-1 g1 g2^-1 g1^-1 g2 g1^-1 g1^-1 g2 g1^-1 g2^-1 g1 g2^-1 g1 g1 g1 g1"
recommended_bits = 53

[[components]]
riley = "(y-2)*(y-1)*(m^2+m^-2) + y^3 - 5*y^2 + 8*y - 3"
longitude_expr = "(y-1) + m^2*(y^2-3*y+1) - m^4*(y-1) - m^6*(y-1)*(y-2)"
tor_lambda_num = "5*y^3 - 21*y^2 + 28*y - 14"
tor_lambda_den = "y - 1"
"""

_BUILTIN_TOML["7_4"] = """
name = "7_4"
generators = 2
relators = ["g1^-1 g2 g1^-1 g2^-1 g1 g2^-1 g1 g2 g1^-1 g2 g1^-1 g2^-1 g1 g2^-1 g1 g2 g1^-1 g2 g1 g2^-1 g1 g2^-1 g1^-1 g2 g1^-1 g2 g1 g2^-1 g1 g2^-1"]
longitude = "g2^-1 g1 g2^-1 g1^-1 g2 g1^-1 g2 g1 g2^-1 g1 g2^-1 g1^-1 g2 g1^-1 g1^-1 g2 g1^-1 g2^-1 g1 g2^-1 g1 g2 g1^-1 g2 g1^-1 g2^-1 g1 g2^-1 g1 g1 g1 g1"
recommended_bits = 192

[[components]]
riley = "(y-2)^2*(m^2+m^-2) + y^3 - 6*y^2 + 12*y - 7"
longitude_expr = "(m^-16)*( m^16*(5-2*y) + m^14*(5-3*y) + m^12*(-9+2*y) + 2*m^10*(-17+7*y) + 8*m^8*(-3+2*y) + m^6*(86-26*y) + m^4*(219-98*y) + m^2*(-463+99*y+707*y^2+1104*y^3-9638*y^4+34306*y^5-66187*y^6+75756*y^7-55526*y^8+27256*y^9-9116*y^10+2060*y^11-302*y^12+26*y^13-y^14) - (2-y)^2*(-61-115*y-66*y^2+321*y^3-1552*y^4+3558*y^5-3829*y^6+2282*y^7-809*y^8+171*y^9-20*y^10+y^11) )"
apoly = "m^14 + l*(1 - 2*m^2 + 3*m^4 + 2*m^6 - 7*m^8 + 2*m^10 + 6*m^12 - 2*m^14) + l^2*(-2 + 6*m^2 + 2*m^4 - 7*m^6 + 2*m^8 + 3*m^10 - 2*m^12 + m^14) + l^3"
tor_lambda_num = "m^28*(12-8*y) + 4*m^26*(y-2) + m^24*(24*y-29) + m^22*(34-30*y) + m^20*(20*y-31) + m^18*(23-4*y) + m^16*(91-43*y) + m^14*(6-16*y) + m^12*(99*y-287) + m^10*(250*y-502) + m^8*(455-61*y) + m^6*(2665-1076*y) + m^4*(2105-1354*y) + m^2*(-7*y^17+212*y^16-2931*y^15+24429*y^14-136467*y^13+536999*y^12-1521221*y^11+3111157*y^10-4527550*y^9+4521505*y^8-2878308*y^7+978784*y^6-53392*y^5-77400*y^4+16421*y^3+6770*y^2+12018*y-9213) - (y-2)^2*(7*y^14-170*y^13+1834*y^12-11520*y^11+46330*y^10-123292*y^9+215917*y^8-237784*y^7+147025*y^6-37064*y^5-3126*y^4+4792*y^3-155*y^2-1322*y-1591)"
tor_lambda_den = "m^24*(m^2-1)^2"

[[components]]
riley = "y*(y-1)*(y-2)*(m^2+m^-2) + y^4 - 5*y^3 + 8*y^2 - 4*y + 1"
longitude_expr = "(m^-16)*( m^24*(-(y-2))*y + m^22*(y^2-3*y+1) - m^18*(y-2)*y + m^16*(2*y^2-6*y+3) + m^14*(3*y^2-7*y+2) + 3*m^12*(y-1)^2 - 3*m^10*(y-3) + m^8*(y^2-16*y+27) + m^6*(21*y^2-77*y+64) + m^4*(71*y^2-206*y+129) - m^2*(y^13-23*y^12+232*y^11-1350*y^10+5022*y^9-12552*y^8+21757*y^7-27137*y^6+25878*y^5-20076*y^4+12429*y^3-5513*y^2+1582*y-260) - y*(y^11-21*y^10+191*y^9-987*y^8+3201*y^7-6828*y^6+9895*y^5-10224*y^4+8164*y^3-5252*y^2+2380*y-520) )"
apoly = "m^8 + l*(-1 + m^2 + 2*m^4 + m^6 - m^8) + l^2"
tor_lambda_num = "4*m^34*(y-2)*y + m^32*(-19*y^2+42*y-4) + 15*m^30*(4*y^2-9*y+1) + m^28*(-116*y^2+277*y-49) + m^26*(138*y^2-343*y+59) + m^24*(-113*y^2+286*y-49) + m^22*(48*y^2-111*y+11) + m^20*(-34*y^2+65*y-17) + 2*m^18*(2*y^2+5*y-20) + m^16*(-12*y^2+85*y-113) - 4*m^14*(23*y^2-80*y+66) + m^12*(-267*y^2+805*y-554) + m^10*(-550*y^2+1633*y-1185) + m^8*(-1005*y^2+3242*y-2758) + m^6*(-2152*y^2+7471*y-6747) + m^4*(-5688*y^2+19271*y-16363) + m^2*(-4*y^18+117*y^17-1568*y^16+12790*y^15-71174*y^14+287221*y^13-872939*y^12+2051452*y^11-3807909*y^10+5701024*y^9-7049263*y^8+7379282*y^7-6653194*y^6+5176328*y^5-3442171*y^4+1908473*y^3-815463*y^2+230625*y-38691) + (-4*y^16+109*y^15-1354*y^14+10183*y^13-51960*y^12+191168*y^11-526550*y^10+1114704*y^9-1854044*y^8+2479718*y^7-2740522*y^6+2567766*y^5-2060060*y^4+1399565*y^3-784584*y^2+333247*y-77382)*y"
tor_lambda_den = "m^24*(m^2-1)^2"
"""

_CACHE = {}


def builtin_names():
    return sorted(_BUILTIN_TOML)


def get_preset(name: str) -> KnotPreset:
    """Built-in preset by name (cached)."""
    key = name.replace("4₁", "4_1").replace("5₂", "5_2").replace("7₄", "7_4")
    if key not in _BUILTIN_TOML:
        raise DomainError(
            f"unknown preset {name!r}; built-ins: {', '.join(builtin_names())}")
    if key not in _CACHE:
        _CACHE[key] = parse_preset(_BUILTIN_TOML[key])
    return _CACHE[key]


def resolve_preset(spec: str) -> KnotPreset:
    """A built-in name, or a path to a preset TOML file."""
    if spec in _BUILTIN_TOML or spec in ("4₁", "5₂", "7₄"):
        return get_preset(spec)
    import os
    if os.path.exists(spec):
        return load_preset(spec)
    raise DomainError(f"no built-in preset or preset file named {spec!r}")


def sample_riley_points(comp: PresetComponent, n, rng, prec=53):
    """Random numeric solutions (y, m) of the component's Riley polynomial."""
    return _component_samples(comp, n, rng, prec)


def _component_samples(comp: PresetComponent, n, rng, prec):
    pts = []
    tries = 0
    while len(pts) < n and tries < 60 * n:
        tries += 1
        m = complex(rng.uniform(0.7, 1.35), rng.uniform(-0.6, 0.6))
        try:
            ys = univariate_roots(comp.riley.substitute({"m": m}), prec)
        except SolverError:
            continue
        for y in ys:
            pts.append((y, m))
    if len(pts) < n:
        raise SolverError("could not sample enough Riley solutions")
    return pts[:n]


def validate_preset(preset: KnotPreset, samples: int = 20, prec: int = 53,
                    seed: int = 20259) -> dict:
    """Cross-validate preset data against word evaluation.

    At random Riley solutions of each component this checks that every
    relator maps to the identity, that the stored longitude expression
    matches the word-evaluated longitude eigenvalue, and (when an
    A-polynomial is stored) that it vanishes on the (m, l) image.  A failure
    indicates a transcription problem and raises StructureError.
    """
    rng = random.Random(seed)
    ctx = Context(prec)
    pres = preset.presentation
    report = {"name": preset.name, "components": []}
    for ci, comp in enumerate(preset.components):
        worst_rel = 0.0
        worst_long = 0.0
        worst_apoly = 0.0
        for (y, m) in _component_samples(comp, samples, rng, prec):
            rp = RepPoint(y, m, ctx)
            worst_rel = max(worst_rel, rp.relator_defect(pres))
            lam = rp.word_image(preset.longitude)
            lam_scale = max(1.0, max(abs(v) for row in lam for v in row))
            if float(abs(lam[1][0])) > 1e-8 * lam_scale:
                raise StructureError(
                    f"{preset.name}[{ci}]: longitude image is not upper "
                    "triangular at a sampled solution")
            l_word = lam[0][0]
            l_expr = comp.longitude_expr.evaluate(y=y, m=m)
            worst_long = max(worst_long, float(abs(l_word - l_expr))
                             / (1.0 + float(abs(l_word))))
            if comp.apoly is not None:
                a = comp.apoly.evaluate(m=m, l=l_word)
                worst_apoly = max(worst_apoly, float(abs(a))
                                  / comp.apoly.eval_scale(m=m, l=l_word))
        if worst_rel > 1e-8:
            raise StructureError(
                f"{preset.name}[{ci}]: relator defect {worst_rel:.2e} at a "
                "Riley solution; presentation and Riley polynomial disagree")
        if worst_long > 1e-6:
            raise StructureError(
                f"{preset.name}[{ci}]: longitude expression deviates from "
                f"word evaluation by {worst_long:.2e}; transcription issue")
        if worst_apoly > 1e-6:
            raise StructureError(
                f"{preset.name}[{ci}]: A-polynomial does not vanish on the "
                f"(m, l) image (residual {worst_apoly:.2e})")
        report["components"].append({
            "relator_defect": worst_rel,
            "longitude_mismatch": worst_long,
            "apoly_residual": worst_apoly,
        })
    return report
