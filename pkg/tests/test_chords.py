import itertools
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from linkhom import chords
from linkhom.chords import ChordSum, ChordWord
from linkhom.complex import CapacityError
from linkhom.diagram import DiagramError, Parity, place_on_strands

ODD, EVEN = Parity.ODD, Parity.EVEN


def oracle_relations(m, parity):
    """Expand the graded bracket by hand: generators commute in odd parity and anticommute in even."""
    eps = 1 if parity is ODD else -1

    def t(i, j):
        return (1, (i, j)) if i < j else (eps, (j, i))

    def bracket(x, ys):
        out = {}
        sx, gx = x
        for sy, gy in ys:
            out[(gx, gy)] = out.get((gx, gy), 0) + sx * sy
            out[(gy, gx)] = out.get((gy, gx), 0) - eps * sx * sy
        return out

    rels = []
    for i, j, k in itertools.permutations(range(1, m + 1), 3):
        rels.append(bracket(t(i, j), [t(i, k), t(j, k)]))
    gens = list(itertools.combinations(range(1, m + 1), 2))
    for a, b in itertools.combinations(gens, 2):
        if not set(a) & set(b):
            rels.append(bracket((1, a), [(1, b)]))
    return rels


def oracle_dim(m, parity):
    gens = list(itertools.combinations(range(1, m + 1), 2))
    words = [(a, b) for a in gens for b in gens]
    rows = [[r.get(w, 0) for w in words] for r in oracle_relations(m, parity)]
    return len(words) - (sympy.Matrix(rows).rank() if rows else 0)


def as_dict(rel: ChordSum):
    return {w: int(k) for w, k in rel}


# -- relations ----------------------------------------------------------------------


@pytest.mark.parametrize("parity", list(Parity))
def test_two_strands_have_no_relations(parity):
    assert chords.relations_degree2(2, parity) == []


def test_three_strand_relation_shapes():
    t12, t13, t23 = (1, 2), (1, 3), (2, 3)
    odd = {tuple(sorted(as_dict(r).items())) for r in chords.relations_degree2(3, ODD)}
    want = {(t12, t13): 1, (t13, t12): -1, (t12, t23): 1, (t23, t12): -1}
    assert tuple(sorted(want.items())) in odd
    even = [as_dict(r) for r in chords.relations_degree2(3, EVEN)]
    want_even = {(t12, t13): 1, (t13, t12): 1, (t12, t23): 1, (t23, t12): 1}
    assert want_even in even


def test_rotations_sum_to_zero_in_odd_parity():
    rotations = [(1, 2, 3), (2, 3, 1), (3, 1, 2)]
    total = {}
    for i, j, k in rotations:
        rel = chords._bracket([chords._gen(i, j, ODD)], [chords._gen(i, k, ODD), chords._gen(j, k, ODD)], ODD)
        for w, c in rel.items():
            total[w] = total.get(w, 0) + c
    assert not any(total.values())
    rows = [[as_dict(r).get(w, 0) for w in chords.words_degree2(3)] for r in chords.relations_degree2(3, ODD)]
    assert sympy.Matrix(rows).rank() == 2


# -- dimensions ------------------------------------------------------------------------


@pytest.mark.parametrize("parity", list(Parity))
@pytest.mark.parametrize("m, want", [(1, 0), (2, 1), (3, 7), (4, 25)])
def test_dimensions_match_the_oracle(m, want, parity):
    assert chords.dim_degree2(m, parity)[0] == want
    if m >= 2:
        assert oracle_dim(m, parity) == want


def test_dimension_capacity():
    with pytest.raises(CapacityError):
        chords.dim_degree2(5, ODD)


@settings(max_examples=25)
@given(order=st.permutations(chords.words_degree2(3)), parity=st.sampled_from(list(Parity)))
def test_dimension_does_not_depend_on_elimination_order(order, parity):
    dim, basis = chords.dim_degree2(3, parity, word_order=order)
    assert dim == 7 and len(basis) == 7


def test_coset_basis_is_deterministic():
    assert [str(w) for w in chords.dim_degree2(2, ODD)[1]] == ["t12.t12"]
    assert chords.dim_degree2(3, EVEN) == chords.dim_degree2(3, EVEN)


# -- words and sums ----------------------------------------------------------------


def test_word_parsing_round_trip():
    w = ChordWord.parse("t12.t13", 3)
    assert w.letters == ((1, 2), (1, 3))
    assert str(w) == "t12.t13"
    with pytest.raises(DiagramError):
        ChordWord.parse("t21", 3)
    with pytest.raises(DiagramError):
        ChordWord.parse("x12", 3)


def test_chord_sum_json_round_trip():
    s = ChordSum(3, EVEN, {((1, 2), (1, 3)): Fraction(1, 2), ((2, 3), (2, 3)): -3})
    assert ChordSum.from_json(s.to_json(), 3, EVEN) == s
    assert (s - s).is_zero()


# -- forgetting to horizontal words ---------------------------------------------------


def seven_images(b):
    classes = [b["mu"], b["nu1"], b["nu2"], b["nu3"]]
    classes += [place_on_strands(b["eta"], 3, ij) for ij in ([1, 2], [1, 3], [2, 3])]
    return [chords.forget_to_chords(s) for s in classes]


@pytest.mark.parametrize("parity", list(Parity))
def test_images_are_well_defined_and_independent(parity, cocycles):
    images = seven_images(cocycles[parity])
    rels = chords.relations_degree2(3, parity)
    assert all(chords.annihilates(f, rels) for f in images)
    assert chords.functional_rank(images) == 7


@pytest.mark.parametrize("parity", list(Parity))
def test_eta_forgets_to_the_repeated_chord(parity, cocycles):
    image = chords.forget_to_chords(cocycles[parity]["eta"])
    assert list(dict(image.terms)) == [((1, 2), (1, 2))]
    placed = chords.forget_to_chords(place_on_strands(cocycles[parity]["eta"], 3, [1, 3]))
    assert list(dict(placed.terms)) == [((1, 3), (1, 3))]


@pytest.mark.parametrize("parity", list(Parity))
def test_mu_is_independent_of_the_product_classes(parity, cocycles):
    images = seven_images(cocycles[parity])
    assert chords.functional_rank(images[1:]) == 6
    assert chords.functional_rank(images) == 7


def test_forgetting_errors(cocycles):
    with pytest.raises(DiagramError):
        chords.forget_to_chords(cocycles[ODD]["kappa"])
    with pytest.raises(DiagramError):
        chords.forget_to_chords(cocycles[ODD]["lambda"])
    with pytest.raises(DiagramError):
        chords.forget_to_chords(cocycles[EVEN]["eta"], strict=True)


# -- classical counts --------------------------------------------------------------------


def test_vassiliev_counts():
    assert chords.vassiliev_dims(2, 1) == 1
    assert chords.vassiliev_dims(3, 2) == 7
    assert chords.vassiliev_dims(1, 1) == 0
    assert chords.vassiliev_dims(4, 0) == 1
    assert chords.vassiliev_dims(1, 2) == 0
    with pytest.raises(CapacityError):
        chords.vassiliev_dims(2, 3)
