"""Free-group words, integral group rings, Fox calculus, and presentations.

Generators are 1-based (g1, g2, ...) and words are stored as tuples of
(generator index, +-1) letters, always freely reduced.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DomainError, StructureError


def _reduce(letters):
    out = []
    for gen, exp in letters:
        if out and out[-1][0] == gen and out[-1][1] == -exp:
            out.pop()
        else:
            out.append((gen, exp))
    return tuple(out)


class Word:
    """Freely reduced word; the empty word is the identity."""

    __slots__ = ("letters",)

    def __init__(self, letters=()):
        for gen, exp in letters:
            if gen < 1:
                raise StructureError("generator indices are 1-based")
            if exp not in (1, -1):
                raise StructureError("letters carry exponent +1 or -1 only")
        self.letters = _reduce(letters)

    @classmethod
    def identity(cls):
        return cls(())

    @classmethod
    def gen(cls, index, exp=1):
        """g_index^exp for any integer exp."""
        if exp == 0:
            return cls(())
        sign = 1 if exp > 0 else -1
        return cls(((index, sign),) * abs(exp))

    @classmethod
    def from_string(cls, text: str) -> "Word":
        """Parse whitespace-separated tokens like ``g1 g2^-1 g1``."""
        letters = []
        for tok in text.split():
            if not tok.startswith("g"):
                raise DomainError(f"bad word token {tok!r}")
            body = tok[1:]
            if "^" in body:
                idx, _, e = body.partition("^")
                exp = int(e)
            else:
                idx, exp = body, 1
            if not idx.isdigit() or int(idx) < 1:
                raise DomainError(f"bad generator in token {tok!r}")
            sign = 1 if exp > 0 else -1
            letters.extend([(int(idx), sign)] * abs(exp))
        return cls(letters)

    def to_string(self) -> str:
        if not self.letters:
            return "1"
        parts = []
        for gen, exp in self.letters:
            parts.append(f"g{gen}" if exp == 1 else f"g{gen}^-1")
        return " ".join(parts)

    def __mul__(self, other: "Word") -> "Word":
        return Word(self.letters + other.letters)

    def inverse(self) -> "Word":
        return Word(tuple((g, -e) for g, e in reversed(self.letters)))

    def __pow__(self, n: int) -> "Word":
        if n == 0:
            return Word.identity()
        base = self if n > 0 else self.inverse()
        out = Word.identity()
        for _ in range(abs(n)):
            out = out * base
        return out

    def reversed_letters(self) -> "Word":
        return Word(tuple(reversed(self.letters)))

    def swap_generators(self, a=1, b=2) -> "Word":
        table = {a: b, b: a}
        return Word(tuple((table.get(g, g), e) for g, e in self.letters))

    def is_identity(self) -> bool:
        return not self.letters

    def exponent_sum(self, gen=None) -> int:
        if gen is None:
            return sum(e for _, e in self.letters)
        return sum(e for g, e in self.letters if g == gen)

    def max_generator(self) -> int:
        return max((g for g, _ in self.letters), default=0)

    def __len__(self):
        return len(self.letters)

    def __eq__(self, other):
        return isinstance(other, Word) and self.letters == other.letters

    def __hash__(self):
        return hash(self.letters)

    def __repr__(self):
        return self.to_string()


class GroupRingElement:
    """Formal integer combination of words, with the convolution product."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        pruned = {}
        if terms:
            for w, c in terms.items():
                if c:
                    pruned[w] = pruned.get(w, 0) + c
                    if pruned[w] == 0:
                        del pruned[w]
        self.terms = pruned

    @classmethod
    def zero(cls):
        return cls({})

    @classmethod
    def from_word(cls, w: Word, coeff: int = 1):
        return cls({w: coeff})

    @classmethod
    def one(cls):
        return cls({Word.identity(): 1})

    def __add__(self, other):
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out.get(w, 0) + c
            if out[w] == 0:
                del out[w]
        return GroupRingElement(out)

    def __neg__(self):
        return GroupRingElement({w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return GroupRingElement({w: c * other for w, c in self.terms.items()})
        out = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                w = w1 * w2
                out[w] = out.get(w, 0) + c1 * c2
                if out[w] == 0:
                    del out[w]
        return GroupRingElement(out)

    def __rmul__(self, other):
        if isinstance(other, int):
            return self * other
        return NotImplemented

    def left_mul_word(self, w: Word) -> "GroupRingElement":
        return GroupRingElement({w * u: c for u, c in self.terms.items()})

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        return isinstance(other, GroupRingElement) and self.terms == other.terms

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for w in sorted(self.terms, key=lambda u: (len(u), u.letters)):
            c = self.terms[w]
            ws = w.to_string()
            if c == 1:
                parts.append(ws)
            elif c == -1:
                parts.append(f"-({ws})" if len(w) else "-1")
            else:
                parts.append(f"{c}*({ws})")
        return " + ".join(parts).replace("+ -", "- ")


def fox_derivative(w: Word, j: int) -> GroupRingElement:
    """Free differential d w / d g_j.

    Satisfies d g_i/d g_j = delta_ij, d g_i^-1/d g_j = -delta_ij g_i^-1 and
    the product rule d(uv) = du + u dv.
    """
    if j < 1:
        raise StructureError("generator indices are 1-based")
    out = {}
    prefix = []
    for gen, exp in w.letters:
        if gen == j:
            if exp == 1:
                key = Word(tuple(prefix))
                coeff = 1
            else:
                key = Word(tuple(prefix) + ((gen, -1),))
                coeff = -1
            out[key] = out.get(key, 0) + coeff
            if out[key] == 0:
                del out[key]
        prefix.append((gen, exp))
    return GroupRingElement(out)


@dataclass(frozen=True)
class Presentation:
    """Deficiency-1 presentation with an abelianization weight per generator."""

    generator_count: int
    relators: tuple
    weights: tuple = None  # linking-number weight per generator, default all 1

    def __post_init__(self):
        if len(self.relators) != self.generator_count - 1:
            raise StructureError(
                "presentation must have deficiency exactly 1 "
                f"({self.generator_count} generators need "
                f"{self.generator_count - 1} relators)")
        for r in self.relators:
            if r.is_identity():
                raise StructureError("relators must be nonempty")
            if r.max_generator() > self.generator_count:
                raise StructureError("relator uses an undeclared generator")
        if self.weights is None:
            object.__setattr__(self, "weights", (1,) * self.generator_count)
        elif len(self.weights) != self.generator_count:
            raise StructureError("one abelianization weight per generator")

    def abelianization_weight(self, w: Word) -> int:
        """Signed linking number of the word (sum of weighted exponents)."""
        acc = 0
        for gen, exp in w.letters:
            if gen > self.generator_count:
                raise StructureError("word uses an undeclared generator")
            acc += exp * self.weights[gen - 1]
        return acc


# ----------------------------------------------------------------------
# two-bridge machinery

def two_bridge_word(p: int, q: int, first: int = 1, sign: int = 1) -> Word:
    """The alternating word of a two-bridge presentation.

    Letters alternate between the two generators starting with ``first``;
    the i-th exponent is sign * (-1)**floor(i*q/p) for i = 1..p-1.
    """
    if p < 3 or p % 2 == 0:
        raise DomainError("two-bridge normal form needs odd p >= 3")
    letters = []
    gen = first
    for i in range(1, p):
        e = sign * (-1) ** ((i * q) // p)
        letters.append((gen, e))
        gen = 3 - gen
    return Word(tuple(letters))


def two_bridge_relator(w: Word, conjugated: int = 1) -> Word:
    """Relator w g_a w^-1 g_b^-1 expressing that w conjugates g_a to g_b."""
    a = conjugated
    b = 3 - a
    return w * Word.gen(a) * w.inverse() * Word.gen(b, -1)
