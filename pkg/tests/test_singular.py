import json

import pytest
from hypothesis import given, strategies as st

from linkhom import complex as cx
from linkhom import singular as sg
from linkhom.diagram import DiagramError, DiagramSum, Parity, canonicalize, place_on_strands, shorthand_diagram

ODD, EVEN = Parity.ODD, Parity.EVEN
FAM = sg.builtin_families()


def shape(link):
    c = sg.chord_diagram_of(link)
    return c.strand_sizes, c.edges


def test_family_duals():
    assert shape(FAM["l"]) == ((2, 2), ((1, 3), (2, 4)))
    assert shape(FAM["l'"]) == ((2, 2), ((1, 4), (2, 3)))
    assert shape(FAM["k"]) == ((4,), ((1, 3), (2, 4)))
    assert shape(FAM["k'"]) == ((4,), ((1, 4), (2, 3)))
    assert shape(FAM["h"]) == ((2, 2), ((1, 3), (2, 4)))
    assert FAM["f"].m == 3 and FAM["f"].strands[0] == ("s1", "s2")


def test_join_examples():
    joined = sg.join_last_two(FAM["h"])
    assert joined.strands == (("s1", "s2", "t1", "t2"),)
    assert shape(joined) == ((4,), ((1, 3), (2, 4)))
    assert sg.join_last_two(FAM["f"]) == FAM["l"]
    assert sg.join_repeated(FAM["f"], 2) == FAM["k"]
    bare = sg.SingularLink((("a", "b"), ("c", "d")), (("a", "b"), ("c", "d")))
    assert sg.join_last_two(sg.SingularLink(((), ()), ())).num_double_points == 0
    assert sg.join_last_two(bare).num_double_points == 2
    with pytest.raises(DiagramError):
        sg.join_last_two(FAM["k"])


def test_kappa_chords_separate_k_from_k_prime(cocycles):
    kappa = cocycles[ODD]["kappa"].chord_part()
    assert kappa.coefficient(sg.chord_diagram_of(FAM["k"])) != 0
    assert kappa.coefficient(sg.chord_diagram_of(FAM["k'"])) == 0


def test_inclusions():
    k = FAM["k"]
    assert sg.include_on_strands(k, 1, [1]) == k
    first = sg.include_on_strands(k, 2, [1])
    second = sg.include_on_strands(k, 2, [2])
    assert first.strands == (k.strands[0], ())
    assert second.strands == ((), k.strands[0])
    with pytest.raises(DiagramError):
        sg.include_on_strands(FAM["h"], 2, [1, 1])


def test_link_validation():
    with pytest.raises(DiagramError):
        sg.SingularLink((("a", "b"),), (("a", "a"),))
    with pytest.raises(DiagramError):
        sg.SingularLink((("a", "b", "c"),), (("a", "b"),))
    with pytest.raises(DiagramError):
        sg.SingularLink((("a", "b"), ("a",)), (("a", "b"),))
    with pytest.raises(DiagramError):
        sg.SingularLink((("a", "b"),), (("a", "b"),), order=(2,))


def test_link_text_forms_round_trip():
    for link in FAM.values():
        assert sg.parse_link(link.to_dsl()) == link
        assert sg.SingularLink.from_json(json.loads(json.dumps(link.to_json()))) == link
    with pytest.raises(DiagramError):
        sg.parse_link("strands=1; strand1=[a,b]")
    with pytest.raises(DiagramError):
        sg.parse_link("strands=1; strand1=[a,b]; pairs=[(a,b)]; colour=[1]")


def test_family_lookup_aliases():
    assert sg.family("fprime") == FAM["f'"]
    assert sg.family("L") == FAM["l"]
    with pytest.raises(KeyError):
        sg.family("q")


# -- pairings -----------------------------------------------------------------------


def rho(s, m, strands):
    return place_on_strands(s, m, strands)


@pytest.mark.parametrize("parity", list(Parity))
def test_pairings_with_f_and_f_prime(parity, cocycles):
    b = cocycles[parity]
    sign = -1 if parity is ODD else 1
    assert sg.pair(b["mu"], FAM["f"]) == 1
    assert sg.pair(b["nu1"], FAM["f"]) == 1
    assert sg.pair(b["nu2"], FAM["f"]) == 0
    assert sg.pair(b["nu3"], FAM["f"]) == 0
    for ij in ([1, 2], [1, 3], [2, 3]):
        assert sg.pair(rho(b["eta"], 3, ij), FAM["f"]) == 0
    assert sg.pair(b["nu1"], FAM["f'"]) == sign
    assert sg.pair(b["mu"], FAM["f'"]) == 0


@pytest.mark.parametrize("parity", list(Parity))
def test_pairings_on_two_and_one_strands(parity, cocycles):
    b = cocycles[parity]
    assert sg.pair(b["eta"], FAM["l"]) == 1
    assert sg.pair(b["lambda"], FAM["l"]) == 0
    assert sg.pair(b["eta"], FAM["l'"]) == (-1 if parity is ODD else 0)
    assert sg.pair(b["lambda"], FAM["l'"]) == 1
    assert sg.pair(b["eta"], FAM["h"]) == 1
    assert sg.pair(b["lambda"], FAM["h"]) == 0
    assert sg.pair(rho(b["kappa"], 2, [1]), FAM["h"]) == 0
    assert sg.pair(rho(b["kappa"], 2, [2]), FAM["h"]) == 0
    assert sg.pair(b["kappa"], FAM["k"]) == 1
    assert sg.pair(b["kappa"], FAM["k'"]) == 0


@pytest.mark.parametrize("parity", list(Parity))
def test_pairing_matrix_is_unimodular(parity, cocycles):
    b = cocycles[parity]
    rows = [rho(b["kappa"], 2, [1]), rho(b["kappa"], 2, [2]), b["eta"], b["lambda"]]
    cols = [sg.include_on_strands(FAM["k"], 2, [1]), sg.include_on_strands(FAM["k"], 2, [2]), FAM["h"], FAM["l'"]]
    mat, det = sg.pairing_matrix(rows, cols)
    assert abs(det) == 1
    assert mat.to_dense()[2][3] == (-1 if parity is ODD else 0)


def test_pairing_matrix_with_no_links(cocycles):
    mat, det = sg.pairing_matrix([cocycles[ODD]["eta"]], [])
    assert (mat.rows, mat.cols, det) == (1, 0, None)


def test_pairing_rejects_mismatches(cocycles):
    with pytest.raises(DiagramError):
        sg.pair(cocycles[ODD]["kappa"], FAM["h"])
    one_point = sg.SingularLink((("a",), ("b",)), (("a", "b"),))
    with pytest.raises(DiagramError):
        sg.pair(cocycles[ODD]["eta"], one_point)


@given(data=st.data())
def test_pairing_ignores_non_chord_terms(cocycles, data):
    parity = data.draw(st.sampled_from(list(Parity)))
    name = data.draw(st.sampled_from(["eta", "lambda"]))
    link = data.draw(st.sampled_from([FAM["l"], FAM["l'"], FAM["h"]]))
    s = cocycles[parity][name]
    basis = cx.enumerate_diagrams(2, 2, (2, -6), parity)
    extra = [c for c in basis if c.nfree]
    c = data.draw(st.sampled_from(extra))
    k = data.draw(st.integers(-5, 5))
    assert sg.pair(s + DiagramSum(2, parity, {c: k}), link) == sg.pair(s, link)


@given(data=st.data())
def test_pairing_is_invariant_under_matching_placements(cocycles, data):
    parity = data.draw(st.sampled_from(list(Parity)))
    name, link = data.draw(st.sampled_from([("eta", "l"), ("eta", "l'"), ("lambda", "l'"), ("eta", "h")]))
    targets = data.draw(st.permutations([1, 2, 3, 4]))[:2]
    total = data.draw(st.integers(max(targets), 4))
    s, L = cocycles[parity][name], FAM[link]
    assert sg.pair(place_on_strands(s, total, targets), sg.include_on_strands(L, total, targets)) == sg.pair(s, L)


@given(
    sizes=st.lists(st.integers(0, 3), min_size=2, max_size=3),
    seed=st.randoms(use_true_random=False),
)
def test_join_matches_direct_concatenation(sizes, seed):
    names = [f"p{i}" for i in range(sum(sizes))]
    if len(names) % 2:
        names.append("extra")
        sizes[-1] += 1
    strands, start = [], 0
    for n in sizes:
        strands.append(tuple(names[start:start + n]))
        start += n
    shuffled = names[:]
    seed.shuffle(shuffled)
    pairs = tuple(zip(shuffled[0::2], shuffled[1::2]))
    link = sg.SingularLink(tuple(strands), pairs)
    joined = sg.join_last_two(link)
    assert joined.num_double_points == link.num_double_points
    direct = sg.SingularLink(tuple(strands[:-2]) + (strands[-2] + strands[-1],), pairs)
    assert sg.chord_diagram_of(joined) == sg.chord_diagram_of(direct)
    label = {p: i + 1 for i, p in enumerate(names)}
    merged_sizes = tuple(sizes[:-2]) + (sizes[-2] + sizes[-1],)
    d = shorthand_diagram(merged_sizes, tuple(sorted(tuple(sorted((label[a], label[b]))) for a, b in pairs)), ODD)
    assert sg.chord_diagram_of(joined) == canonicalize(d)[0]


def test_moved_links_keep_their_orientation_through_text_forms():
    moved = sg.include_on_strands(FAM["l'"], 2, [2, 1])
    assert moved.orientation == (1, -1)
    assert sg.parse_link(moved.to_dsl()) == moved
    assert sg.SingularLink.from_json(moved.to_json()) == moved
    assert sg.include_on_strands(FAM["k"], 2, [2]).orientation == (1, 1)
    with pytest.raises(DiagramError):
        sg.SingularLink((("a", "b"),), (("a", "b"),), orientation=(1, 0))
