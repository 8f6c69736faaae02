"""The coboundary on link diagrams, graded bases, kernels, and the built-in cocycles."""

from __future__ import annotations

import itertools
import json
import os
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from pathlib import Path
from typing import Iterable, Sequence

from .diagram import (
    CanonicalDiagram,
    DiagramError,
    DiagramSum,
    LinkDiagram,
    Parity,
    canonicalize,
    place_on_strands,
    shorthand_diagram,
)
from .linalg import SparseIntMatrix, kernel_basis, solve_least_support

MAX_ORDER = 4
MAX_STRANDS = 4
FORMAT_VERSION = 1


class CapacityError(ValueError):
    """Requested grading is beyond the desk-scale enumeration limits."""


class NotCompletable(ValueError):
    """No non-chord completion turns the given chord terms into a cocycle."""


# -- contractions -------------------------------------------------------------


def _merge(d: LinkDiagram, keep: int, drop: int, edge_index: int | None) -> LinkDiagram:
    """Identify ``drop`` with ``keep`` and delete edge ``edge_index`` if given.

    ``keep`` is the segment vertex whenever one is involved. The merged vertex
    takes the smaller of the two orientation labels; higher labels shift down.
    """
    edges = [e for i, e in enumerate(d.edges) if i != edge_index]
    edges = [(keep if a == drop else a, keep if b == drop else b) for a, b in edges]
    strands = tuple(tuple(v for v in s if v != drop) for s in d.strands)
    free = tuple(v for v in d.free if v != drop)
    vorder = list(d.vorder)
    if d.parity is Parity.ODD:
        i, j = sorted((vorder.index(keep), vorder.index(drop)))
        vorder[i] = keep
        del vorder[j]
    elif d.is_seg(drop):
        vorder.remove(drop)
    return LinkDiagram(strands, free, tuple(edges), d.parity, tuple(vorder))


def _arc_sign(d: LinkDiagram, tail: int, head: int) -> int:
    li, lj = d.label(tail), d.label(head)
    j = max(li, lj)
    return (-1) ** j if li < lj else (-1) ** (j + 1)


def contract_arc(d: LinkDiagram, arc: tuple[int, int]) -> DiagramSum:
    """Contract the arc between consecutive segment vertices ``arc = (u, v)``."""
    u, v = arc
    if (u, v) not in set(d.arcs()):
        if (v, u) in set(d.arcs()):
            u, v = v, u
        else:
            raise DiagramError(f"({u},{v}) is not an arc between consecutive segment vertices")
    eps = _arc_sign(d, u, v)
    keep, drop = (u, v) if d.label(u) < d.label(v) else (v, u)
    merged = _merge(d, keep, drop, None)
    return DiagramSum.from_diagrams([(eps, merged)], m=d.m, parity=d.parity)


def _edge_sign(d: LinkDiagram, index: int) -> int:
    a, b = d.edges[index]
    if d.parity is Parity.ODD:
        return _arc_sign(d, a, b)
    return (-1) ** (index + 1 + 1 + len(d.seg_vertices))


def contract_edge(d: LinkDiagram, edge: tuple[int, int] | int) -> DiagramSum:
    """Contract an edge with at least one free endpoint (given as a pair or index)."""
    if isinstance(edge, int):
        index = edge
    else:
        matches = [i for i, e in enumerate(d.edges) if set(e) == set(edge)]
        if not matches:
            raise DiagramError(f"no edge {edge}")
        index = matches[0]
    a, b = d.edges[index]
    if a == b:
        raise DiagramError("cannot contract a self-loop")
    if d.is_seg(a) and d.is_seg(b):
        raise DiagramError("cannot contract a chord")
    eps = _edge_sign(d, index)
    if d.is_seg(a) or d.is_seg(b):
        keep, drop = (a, b) if d.is_seg(a) else (b, a)
        merged = _merge(d, keep, drop, index)
    else:
        if d.parity is Parity.ODD:
            keep, drop = (a, b) if d.label(a) < d.label(b) else (b, a)
        else:
            keep, drop = min(a, b), max(a, b)
        merged = _merge(d, keep, drop, index)
    return DiagramSum.from_diagrams([(eps, merged)], m=d.m, parity=d.parity)


def delta_diagram(d: LinkDiagram) -> DiagramSum:
    out = DiagramSum.zero(d.m, d.parity)
    for arc in d.arcs():
        out = out + contract_arc(d, arc)
    for i, (a, b) in enumerate(d.edges):
        if a != b and not (d.is_seg(a) and d.is_seg(b)):
            out = out + contract_edge(d, i)
    return out


@lru_cache(maxsize=None)
def _delta_canonical(c: CanonicalDiagram) -> DiagramSum:
    return delta_diagram(c.diagram())


def delta(s: DiagramSum) -> DiagramSum:
    """Signed sum of all arc contractions and non-chord edge contractions."""
    acc: dict[CanonicalDiagram, int] = {}
    for c, k in s:
        for c2, k2 in _delta_canonical(c):
            acc[c2] = acc.get(c2, 0) + k * k2
    return DiagramSum(s.m, s.parity, acc)


def is_cocycle(s: DiagramSum) -> bool:
    return delta(s).is_zero()


# -- enumeration --------------------------------------------------------------


@dataclass(frozen=True)
class GradedBasis:
    m: int
    order: int
    degree: tuple[int, int]
    parity: Parity
    diagrams: tuple[CanonicalDiagram, ...]

    def __len__(self) -> int:
        return len(self.diagrams)

    def __iter__(self):
        return iter(self.diagrams)

    def __getitem__(self, i: int) -> CanonicalDiagram:
        return self.diagrams[i]

    def index(self) -> dict[CanonicalDiagram, int]:
        return {c: i for i, c in enumerate(self.diagrams)}

    def coordinates(self, s: DiagramSum) -> dict[int, int]:
        idx = self.index()
        out = {}
        for c, k in s:
            if c not in idx:
                raise DiagramError(f"diagram {c.digest} is not in this basis")
            out[idx[c]] = k
        return out

    def to_json(self) -> dict:
        return {
            "format_version": FORMAT_VERSION,
            "m": self.m,
            "order": self.order,
            "degree": list(self.degree),
            "parity": self.parity.value,
            "diagrams": [c.to_dsl() for c in self.diagrams],
        }

    @classmethod
    def from_json(cls, data: dict) -> "GradedBasis":
        from .diagram import parse_dsl

        diagrams = []
        for text in data["diagrams"]:
            c, sign = canonicalize(parse_dsl(text))
            if sign != 1:
                raise DiagramError("basis entries must be canonical representatives")
            diagrams.append(c)
        return cls(data["m"], data["order"], tuple(data["degree"]), Parity.parse(data["parity"]), tuple(diagrams))


def _compositions(total: int, parts: int) -> Iterable[tuple[int, ...]]:
    for cuts in itertools.combinations_with_replacement(range(total + 1), parts - 1):
        bounds = (0,) + cuts + (total,)
        yield tuple(bounds[i + 1] - bounds[i] for i in range(parts))


def _free_connected(nseg: int, nfree: int, edges: Sequence[tuple[int, int]]) -> bool:
    adj: dict[int, set[int]] = {}
    for a, b in edges:
        adj.setdefault(a, set()).add(b)
        adj.setdefault(b, set()).add(a)
    reached = set(range(1, nseg + 1))
    stack = list(reached)
    while stack:
        for w in adj.get(stack.pop(), ()):
            if w not in reached:
                reached.add(w)
                stack.append(w)
    return all(v in reached for v in range(nseg + 1, nseg + nfree + 1))


def _raw_graphs(nseg: int, nfree: int, nedges: int) -> Iterable[tuple[tuple[int, int], ...]]:
    """Simple graphs meeting the valence rules, up to reordering the free vertices.

    Free vertex neighbourhoods among segment vertices are generated in sorted
    order, which loses no isomorphism class.
    """
    seg = list(range(1, nseg + 1))
    free = list(range(nseg + 1, nseg + nfree + 1))
    seg_pairs = list(itertools.combinations(seg, 2))
    free_pairs = list(itertools.combinations(free, 2))
    subsets = [c for r in range(nseg + 1) for c in itertools.combinations(seg, r)]
    for nchords in range(min(len(seg_pairs), nedges) + 1):
        for chords in itertools.combinations(seg_pairs, nchords):
            rest = nedges - nchords
            for legs in itertools.combinations_with_replacement(range(len(subsets)), nfree):
                nlegs = sum(len(subsets[i]) for i in legs)
                nff = rest - nlegs
                if nff < 0 or nff > len(free_pairs):
                    continue
                sf_edges = [(s, f) for f, i in zip(free, legs) for s in subsets[i]]
                base = list(chords) + sf_edges
                for ff in itertools.combinations(free_pairs, nff):
                    edges = base + list(ff)
                    deg = [0] * (nseg + nfree + 1)
                    for a, b in edges:
                        deg[a] += 1
                        deg[b] += 1
                    if any(deg[v] < 1 for v in seg) or any(deg[v] < 3 for v in free):
                        continue
                    if nfree and not _free_connected(nseg, nfree, edges):
                        continue
                    yield tuple(edges)


def _check_capacity(m: int, t: int) -> None:
    if m < 1:
        raise DiagramError("strand count must be positive")
    if t > MAX_ORDER or m > MAX_STRANDS:
        raise CapacityError(f"enumeration is limited to order <= {MAX_ORDER} and m <= {MAX_STRANDS}")


def _cache_dir(cache_dir: str | os.PathLike | None) -> Path | None:
    if cache_dir is not None:
        return Path(cache_dir)
    env = os.environ.get("LINKHOM_CACHE")
    return Path(env) if env else None


@lru_cache(maxsize=None)
def _enumerate(m: int, t: int, degree: tuple[int, int], parity: Parity) -> tuple[CanonicalDiagram, ...]:
    a, b = degree
    found: set[CanonicalDiagram] = set()
    if a != t:
        return ()
    for nfree in range(0, 2 * t + 1):
        nedges = t + nfree
        nseg = -b - nedges
        if nseg < 0 or (nseg == 0 and nedges > 0):
            continue
        if 2 * nedges < nseg + 3 * nfree:
            continue
        graphs = list(_raw_graphs(nseg, nfree, nedges))
        for sizes in _compositions(nseg, m):
            for edges in graphs:
                d = shorthand_diagram(sizes, edges, parity, nfree=nfree)
                c, sign = canonicalize(d)
                if sign:
                    found.add(c)
    return tuple(sorted(found, key=lambda c: c.digest))


def enumerate_diagrams(
    m: int,
    t: int,
    degree: tuple[int, int],
    parity: Parity | str,
    cache_dir: str | os.PathLike | None = None,
) -> GradedBasis:
    """All admissible nonzero canonical diagrams in one grading, sorted by content hash."""
    parity = Parity.parse(parity)
    _check_capacity(m, t)
    degree = (int(degree[0]), int(degree[1]))
    cdir = _cache_dir(cache_dir)
    if cdir is not None:
        path = cdir / f"basis-v{FORMAT_VERSION}-m{m}-t{t}-{degree[0]}_{degree[1]}-{parity.value}.json"
        if path.exists():
            return GradedBasis.from_json(json.loads(path.read_text()))
    basis = GradedBasis(m, t, degree, parity, _enumerate(m, t, degree, parity))
    if cdir is not None:
        cdir.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(basis.to_json(), indent=1))
    return basis


def degrees_in_order(m: int, t: int) -> list[tuple[int, int]]:
    """Degree pairs (t, b) for which order-t diagrams can exist."""
    _check_capacity(m, t)
    out = []
    for nfree in range(0, 2 * t + 1):
        nedges = t + nfree
        for nseg in range(1, 2 * t + 1):
            if 2 * nedges >= nseg + 3 * nfree:
                out.append((t, -nedges - nseg))
    return sorted(set(out), key=lambda d: d[1])


def delta_matrix(src: GradedBasis, dst: GradedBasis) -> SparseIntMatrix:
    if (src.m, src.order, src.parity) != (dst.m, dst.order, dst.parity) or dst.degree != (
        src.degree[0],
        src.degree[1] + 1,
    ):
        raise DiagramError("target basis must sit one degree above the source")
    idx = dst.index()
    entries = {}
    for j, c in enumerate(src):
        for c2, k in _delta_canonical(c):
            if c2 not in idx:
                raise DiagramError(f"coboundary left the target basis at {c2}")
            entries[(idx[c2], j)] = k
    return SparseIntMatrix(len(dst), len(src), entries)


def _next_basis(b: GradedBasis, cache_dir=None) -> GradedBasis:
    return enumerate_diagrams(b.m, b.order, (b.degree[0], b.degree[1] + 1), b.parity, cache_dir)


def cocycle_basis(
    m: int, t: int, degree: tuple[int, int], parity: Parity | str, cache_dir=None
) -> list[DiagramSum]:
    """Primitive integer basis of the kernel of the coboundary in one grading."""
    parity = Parity.parse(parity)
    src = enumerate_diagrams(m, t, degree, parity, cache_dir)
    dst = _next_basis(src, cache_dir)
    mat = delta_matrix(src, dst)
    out = []
    for vec in kernel_basis(mat):
        out.append(DiagramSum(m, parity, {src[j]: k for j, k in vec.items()}))
    return out


def extend_chord_part(chord_terms: DiagramSum, parity: Parity | str | None = None) -> DiagramSum:
    """Complete pure chord terms to a cocycle by adding non-chord diagrams.

    Among all completions the one of smallest support is returned (ties broken by
    basis order).
    """
    if parity is not None and Parity.parse(parity) is not chord_terms.parity:
        raise DiagramError("parity does not match the chord terms")
    g = chord_terms.grading
    if g is None:
        return chord_terms
    if any(not c.is_chord_diagram() for c, _ in chord_terms):
        raise DiagramError("extend_chord_part expects pure chord diagrams")
    if g.order > 3:
        raise CapacityError("completion is limited to order <= 3")
    src = enumerate_diagrams(chord_terms.m, g.order, g.degree, chord_terms.parity)
    dst = _next_basis(src)
    unknown = [c for c in src if not c.is_chord_diagram()]
    rhs = delta(chord_terms)
    didx = dst.index()
    target = {didx[c]: -k for c, k in rhs}
    columns = []
    for c in unknown:
        columns.append({didx[c2]: k for c2, k in _delta_canonical(c)})
    solution = solve_least_support(len(dst), columns, target)
    if solution is None:
        raise NotCompletable("no completion over non-chord diagrams exists")
    extra = {}
    for j, val in solution.items():
        if Fraction(val).denominator != 1:
            raise NotCompletable("completion requires non-integral coefficients")
        extra[unknown[j]] = int(val)
    result = chord_terms + DiagramSum(chord_terms.m, chord_terms.parity, extra)
    assert is_cocycle(result)
    return result


# -- built-in cocycles --------------------------------------------------------

COCYCLE_NAMES = ("kappa", "eta", "lambda", "mu", "nu1", "nu2", "nu3")

# Chord parts in shorthand labels: (coefficient, strand sizes, chords).
# ``None`` as a coefficient stands for the parity sign (-1 odd, +1 even).
_CROSS_1 = ((4,), ((1, 3), (2, 4)))
_DOUBLE = ((2, 2), ((1, 3), (2, 4)))
_CROSS_2 = ((2, 2), ((1, 4), (2, 3)))
_PSI_LEFT = ((3, 1), ((1, 3), (2, 4)))
_PSI_RIGHT = ((1, 3), ((1, 3), (2, 4)))
_LM = ((2, 1, 1), ((1, 3), (2, 4)))  # t12 then t13
_ML = ((2, 1, 1), ((1, 4), (2, 3)))  # t13 then t12
_W12_23 = ((1, 2, 1), ((1, 2), (3, 4)))
_W23_12 = ((1, 2, 1), ((1, 3), (2, 4)))
_W13_23 = ((1, 1, 2), ((1, 3), (2, 4)))
_W23_13 = ((1, 1, 2), ((1, 4), (2, 3)))

_CHORD_PARTS = {
    "kappa": {Parity.ODD: [(1, _CROSS_1)], Parity.EVEN: [(1, _CROSS_1)]},
    "eta": {
        Parity.ODD: [(1, _DOUBLE), (-1, _CROSS_2)],
        Parity.EVEN: [(1, _DOUBLE), (1, _PSI_LEFT), (1, _PSI_RIGHT)],
    },
    "lambda": {
        Parity.ODD: [(1, _CROSS_2), (1, _PSI_LEFT), (1, _PSI_RIGHT)],
        Parity.EVEN: [(1, _CROSS_2), (1, _PSI_LEFT), (-1, _PSI_RIGHT)],
    },
    "mu": {p: [(1, _LM), (1, _W12_23), (1, _W13_23)] for p in Parity},
    "nu1": {p: [(1, _LM), (None, _ML)] for p in Parity},
    "nu2": {p: [(1, _W12_23), (-1, _W23_12)] for p in Parity},
    "nu3": {p: [(1, _W13_23), (-1, _W23_13)] for p in Parity},
}


def builtin_chord_part(name: str, parity: Parity | str) -> DiagramSum:
    parity = Parity.parse(parity)
    if name not in _CHORD_PARTS:
        raise KeyError(f"unknown cocycle {name!r}; expected one of {', '.join(COCYCLE_NAMES)}")
    sign = -1 if parity is Parity.ODD else 1
    items = []
    for coef, (sizes, chords) in _CHORD_PARTS[name][parity]:
        items.append((sign if coef is None else coef, shorthand_diagram(sizes, chords, parity)))
    return DiagramSum.from_diagrams(items, m=len(items[0][1].strands), parity=parity)


@lru_cache(maxsize=None)
def builtin_cocycle(name: str, parity: Parity | str) -> DiagramSum:
    return extend_chord_part(builtin_chord_part(name, parity))


def builtin_cocycles(parity: Parity | str) -> dict[str, DiagramSum]:
    """The seven named order-2 cocycles, each completed from its chord part."""
    parity = Parity.parse(parity)
    return {name: builtin_cocycle(name, parity) for name in COCYCLE_NAMES}
