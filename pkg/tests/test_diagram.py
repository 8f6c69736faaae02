import json

import pytest
from hypothesis import given, strategies as st

from linkhom.diagram import (
    DiagramError,
    DiagramSum,
    LinkDiagram,
    Parity,
    canonicalize,
    dumps_diagram,
    parse_dsl,
    permutation_sign,
    place_on_strands,
    shorthand_diagram,
)

ODD, EVEN = Parity.ODD, Parity.EVEN


def crossing(parity=ODD):
    return shorthand_diagram((4,), ((1, 3), (2, 4)), parity)


def double_chord(parity=ODD):
    return shorthand_diagram((2, 2), ((1, 3), (2, 4)), parity)


def tripod(parity=ODD):
    return shorthand_diagram((3,), ((1, 4), (2, 4), (3, 4)), parity, nfree=1)


def inter_chord(parity=ODD):
    return shorthand_diagram((1, 1), ((1, 2),), parity)


def reorient(d: LinkDiagram, vorder_perm, flips, edge_perm):
    """Same abstract diagram: permuted vertex labels, some edges reversed, edges reordered."""
    vorder = tuple(d.vorder[i] for i in vorder_perm)
    edges = [(b, a) if f else (a, b) for (a, b), f in zip(d.edges, flips)]
    edges = tuple(edges[i] for i in edge_perm)
    return LinkDiagram(d.strands, d.free, edges, d.parity, vorder)


def expected_factor(d, vorder_perm, flips, edge_perm):
    sign = permutation_sign(vorder_perm)
    if d.parity is ODD:
        return sign * (-1) ** sum(flips)
    return sign * permutation_sign(edge_perm)


# -- canonical form: examples --------------------------------------------------


def test_even_double_chord_with_edge_labels_swapped_flips_sign():
    d = double_chord(EVEN)
    swapped = LinkDiagram(d.strands, d.free, d.edges[::-1], EVEN, d.vorder)
    (c1, s1), (c2, s2) = canonicalize(d), canonicalize(swapped)
    assert c1 == c2
    assert s1 * s2 == -1


@pytest.mark.parametrize("parity", list(Parity))
def test_parallel_edges_give_sign_zero(parity):
    d = LinkDiagram(((1, 2), (3, 4)), (), ((1, 3), (2, 4), (1, 3)), parity, (1, 2, 3, 4))
    assert canonicalize(d)[1] == 0


def test_four_cycle_relabel_with_both_chords_reversed():
    d = crossing(ODD)
    moved = LinkDiagram(d.strands, (), ((3, 1), (4, 2)), ODD, (4, 1, 2, 3))
    (c1, s1), (c2, s2) = canonicalize(d), canonicalize(moved)
    assert c1 == c2
    assert s1 * s2 == -1


def test_self_loop_gives_sign_zero():
    d = LinkDiagram(((1, 2),), (3,), ((1, 3), (2, 3), (3, 3)), ODD, (1, 2, 3))
    assert canonicalize(d)[1] == 0


@pytest.mark.parametrize("parity", list(Parity))
def test_odd_automorphism_kills_the_double_inter_strand_pattern(parity):
    # two parallel-in-time chords between the same pair of strands and nothing else
    d = shorthand_diagram((2, 2), ((1, 4), (2, 3)), parity)
    c, s = canonicalize(d)
    assert s in (-1, 0, 1)
    assert canonicalize(c.diagram()) == ((c, 1) if s else (c, 0))


def test_missing_orientation_labels_are_rejected():
    with pytest.raises(DiagramError):
        LinkDiagram(((1, 2),), (), ((1, 2),), ODD, (1,))
    with pytest.raises(DiagramError):
        LinkDiagram(((1, 2),), (3,), ((1, 3), (2, 3)), ODD, (1, 2))
    with pytest.raises(DiagramError):
        LinkDiagram(((1, 2), (2,)), (), ((1, 2),), ODD, (1, 2))


# -- grading -------------------------------------------------------------------


def test_degrees_of_basic_diagrams():
    assert crossing().degree() == (2, -6)
    assert tripod().degree() == (2, -6)
    assert inter_chord().degree() == (1, -3)


def test_orders():
    assert crossing().order() == 2
    assert tripod().order() == 2
    assert shorthand_diagram((3, 3), ((1, 4), (2, 5), (3, 6)), ODD).order() == 3


def test_every_builtin_term_has_order_two(cocycles):
    for by_name in cocycles.values():
        for s in by_name.values():
            assert {c.order() for c, _ in s} == {2}


# -- sums ------------------------------------------------------------------------


def test_sum_minus_itself_is_empty():
    s = DiagramSum.of(crossing()) + DiagramSum.of(tripod())
    assert (s + (-1) * s).is_zero()


def test_double_chord_added_to_itself():
    s = DiagramSum.of(double_chord()) + DiagramSum.of(double_chord())
    assert len(s) == 1
    assert list(s.terms.values()) == [2 * canonicalize(double_chord())[1]]


def test_even_double_chord_plus_swapped_copy_cancels():
    d = double_chord(EVEN)
    swapped = LinkDiagram(d.strands, d.free, d.edges[::-1], EVEN, d.vorder)
    assert DiagramSum.from_diagrams([(1, d), (1, swapped)]).is_zero()


def test_grading_mismatch_is_an_error():
    with pytest.raises(DiagramError):
        DiagramSum.of(inter_chord()) + DiagramSum.of(double_chord())


def test_json_round_trip_of_sums(cocycles):
    for s in cocycles[EVEN].values():
        assert DiagramSum.from_json(json.loads(json.dumps(s.to_json()))) == s


# -- strand placement --------------------------------------------------------------


def test_placement_examples(cocycles):
    kappa = cocycles[ODD]["kappa"]
    placed = place_on_strands(kappa, 2, [1])
    assert placed.m == 2
    assert all(c.strand_sizes[1] == 0 for c, _ in placed)
    assert place_on_strands(kappa, 1, [1]) == kappa
    eta13 = place_on_strands(cocycles[ODD]["eta"], 3, [1, 3])
    assert all(c.strand_sizes[1] == 0 for c, _ in eta13)
    assert eta13.grading == cocycles[ODD]["eta"].grading


def test_placement_must_be_injective(cocycles):
    with pytest.raises(DiagramError):
        place_on_strands(cocycles[ODD]["eta"], 3, [1, 1])
    with pytest.raises(DiagramError):
        place_on_strands(cocycles[ODD]["eta"], 2, [1, 3])


# -- properties ------------------------------------------------------------------


def test_canonicalize_is_idempotent(pool):
    for c in pool:
        assert canonicalize(c.diagram()) == (c, 1)


@given(data=st.data())
def test_sign_coherence_under_relabeling(pool, data):
    c = data.draw(st.sampled_from(pool))
    d = c.diagram()
    vperm = data.draw(st.permutations(range(len(d.vorder))))
    flips = data.draw(st.lists(st.booleans(), min_size=len(d.edges), max_size=len(d.edges)))
    eperm = data.draw(st.permutations(range(len(d.edges))))
    if d.parity is EVEN:
        flips = [False] * len(d.edges)
    moved = reorient(d, vperm, flips, eperm)
    c2, s2 = canonicalize(moved)
    assert c2 == c
    assert s2 == expected_factor(d, vperm, flips, eperm)


@given(data=st.data())
def test_vertex_renaming_does_not_change_the_sign(pool, data):
    c = data.draw(st.sampled_from(pool))
    d = c.diagram()
    ids = list(d.seg_vertices) + list(d.free)
    new = data.draw(st.lists(st.integers(-50, 50), min_size=len(ids), max_size=len(ids), unique=True))
    renamed = d.relabel(dict(zip(ids, new)))
    assert canonicalize(renamed) == (c, 1)
    assert renamed.degree() == c.degree()
    assert renamed.order() == c.order()


@given(data=st.data())
def test_placement_commutes_with_canonicalization(pool, data):
    c = data.draw(st.sampled_from(pool))
    d = c.diagram()
    targets = data.draw(st.permutations([1, 2, 3]))[: d.m]
    vperm = data.draw(st.permutations(range(len(d.vorder))))
    moved = reorient(d, vperm, [False] * len(d.edges), list(range(len(d.edges))))
    lhs = place_on_strands(DiagramSum.of(moved), 3, targets)
    rhs = DiagramSum.of(moved.on_strands(3, targets))
    assert lhs == rhs
    assert lhs.grading == DiagramSum.of(d).grading


@given(data=st.data())
def test_dsl_and_json_round_trip(pool, data):
    c = data.draw(st.sampled_from(pool))
    vperm = data.draw(st.permutations(range(len(c.diagram().vorder))))
    d = reorient(c.diagram(), vperm, [False] * len(c.edges), list(range(len(c.edges))))
    assert parse_dsl(d.to_dsl()) == d
    assert LinkDiagram.from_json(json.loads(json.dumps(d.to_json()))) == d
    assert parse_dsl(dumps_diagram(c)) == c.diagram()


def test_dsl_rejects_unknown_and_duplicate_fields():
    text = crossing().to_dsl()
    with pytest.raises(DiagramError):
        parse_dsl(text + "; colour=red")
    with pytest.raises(DiagramError):
        parse_dsl(text + "; strands=1")
    with pytest.raises(DiagramError):
        parse_dsl("strands=1; strand1=[1,2]; edges=[(1,2)]; parity=odd")
