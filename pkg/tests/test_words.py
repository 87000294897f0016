import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from adjtorsion.errors import DomainError, StructureError
from adjtorsion.words import (GroupRingElement, Presentation, Word,
                              fox_derivative, two_bridge_relator,
                              two_bridge_word)


def W(s):
    return Word.from_string(s)


def test_free_reduction():
    assert (W("g1") * W("g1^-1")).is_identity()
    assert W("g2 g1") * W("g1^-1 g2") == W("g2 g2")


def test_mid_cancellation_chain():
    u = W("g1 g2 g2^-1 g1^-1 g1")  # reduces at construction
    assert u == W("g1")


def test_longitude_assembly_41(k41):
    """lambda = g2^-1 g1 g3^-1 g4 with g3 = g2 g1 g2^-1 and g4 = g3^-1 g2 g3."""
    g1, g2 = Word.gen(1), Word.gen(2)
    g3 = g2 * g1 * g2.inverse()
    g4 = g3.inverse() * g2 * g3
    lam = g2.inverse() * g1 * g3.inverse() * g4
    assert lam == k41.longitude
    assert lam.exponent_sum() == 0


def test_word_parsing_and_printing():
    w = W("g1^-1 g2 g1^2")
    assert w.to_string() == "g1^-1 g2 g1 g1"
    assert Word.from_string(w.to_string()) == w
    with pytest.raises(DomainError):
        W("h1")
    with pytest.raises(DomainError):
        W("g0")


def test_fox_axioms():
    assert fox_derivative(Word.gen(1), 1) == GroupRingElement.one()
    assert fox_derivative(Word.gen(1), 2) == GroupRingElement.zero()
    expected = GroupRingElement({Word.gen(1, -1): -1})
    assert fox_derivative(Word.gen(1, -1), 1) == expected


def test_fox_derivative_41_relator_difference_form(k41):
    """The paper writes the relator as A - B; d(A - B)/dg1 is the printed
    five-term element.  The stored word form A B^-1 has a Phi-equal image."""
    A = W("g1^-1 g2 g1 g2^-1 g1")
    B = W("g2 g1^-1 g2 g1 g2^-1")
    dA = fox_derivative(A, 1)
    dB = fox_derivative(B, 1)
    printed = (GroupRingElement({W("g1^-1"): -1})
               + GroupRingElement.from_word(W("g1^-1 g2"))
               + GroupRingElement.from_word(W("g1^-1 g2 g1 g2^-1"))
               + GroupRingElement.from_word(W("g2 g1^-1"))
               + GroupRingElement({W("g2 g1^-1 g2"): -1}))
    assert dA - dB == printed
    # the relator stored in the preset is A * B^-1
    assert k41.relators[0] == A * B.inverse()


def test_fox_word_form_matches_difference_form_under_phi(k41, rng, ctx):
    """Phi(d(AB^-1)) = Phi(dA - dB) at representations (rho(r) = Id)."""
    from adjtorsion.presets import sample_riley_points
    from adjtorsion.rep import RepPoint, phi
    A = W("g1^-1 g2 g1 g2^-1 g1")
    B = W("g2 g1^-1 g2 g1 g2^-1")
    word_form = fox_derivative(A * B.inverse(), 1)
    diff_form = fox_derivative(A, 1) - fox_derivative(B, 1)
    pres = k41.presentation
    (y, m), = sample_riley_points(k41.components[0], 1, rng)
    rep = RepPoint(y, m, ctx)
    ma = phi(word_form, rep, pres)
    mb = phi(diff_form, rep, pres)
    for i in range(3):
        for j in range(3):
            d = ma[i][j] - mb[i][j]
            scale = max(mb[i][j].coeff_scale(), 1.0)
            assert d.coeff_scale() <= 1e-10 * scale


@st.composite
def words(draw):
    letters = draw(st.lists(
        st.tuples(st.integers(1, 3), st.sampled_from((1, -1))), max_size=12))
    return Word(tuple(letters))


@settings(max_examples=60, deadline=None)
@given(words(), words(), st.integers(1, 3))
def test_fox_product_rule(u, v, j):
    lhs = fox_derivative(u * v, j)
    rhs = fox_derivative(u, j) + GroupRingElement.from_word(u) * fox_derivative(v, j)
    assert lhs == rhs


@settings(max_examples=60, deadline=None)
@given(words(), st.integers(1, 3))
def test_fox_fundamental_identity(w, nmax):
    total = GroupRingElement.zero()
    for j in range(1, 4):
        gj = GroupRingElement.from_word(Word.gen(j)) - GroupRingElement.one()
        total = total + fox_derivative(w, j) * gj
    assert total == GroupRingElement.from_word(w) - GroupRingElement.one()


@settings(max_examples=40, deadline=None)
@given(words(), words(), words())
def test_reduction_confluence_via_associativity(u, v, w):
    assert (u * v) * w == u * (v * w)


def test_abelianization_weights(k41, k52, k74):
    pres = k41.presentation
    assert pres.abelianization_weight(Word.identity()) == 0
    assert pres.abelianization_weight(W("g1 g2")) == 2
    for preset in (k41, k52, k74):
        assert preset.presentation.abelianization_weight(preset.longitude) == 0
        for r in preset.relators:
            assert preset.presentation.abelianization_weight(r) == 0


def test_presentation_validation():
    with pytest.raises(StructureError):
        Presentation(2, ())  # deficiency 2
    with pytest.raises(StructureError):
        Presentation(2, (Word.identity(),))
    with pytest.raises(StructureError):
        Presentation(2, (W("g3"),))
    p = Presentation(2, (W("g1 g2"),), weights=(1, 1))
    with pytest.raises(StructureError):
        Presentation(2, (W("g1 g2"),), weights=(1,))
    assert p.abelianization_weight(W("g1^-1")) == -1


def test_two_bridge_normal_forms(k41, k52, k74):
    """The stored presentations are the two-bridge normal forms."""
    for preset, (p2b, q2b) in ((k41, (5, 3)), (k52, (7, 5)), (k74, (15, 11))):
        w = two_bridge_word(p2b, q2b, first=1, sign=-1)
        assert two_bridge_relator(w, conjugated=1) == preset.relators[0]
        rev = w.reversed_letters()
        lam = rev * w
        lam = lam * Word.gen(1, -lam.exponent_sum())
        assert lam == preset.longitude
    with pytest.raises(DomainError):
        two_bridge_word(4, 1)
