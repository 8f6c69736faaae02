"""Link diagrams on oriented segments, their canonical signed form, and formal sums.

A diagram carries orientation data whose meaning depends on the parity of the
ambient dimension n:

* ``Parity.ODD``: a total order on all vertices (``vorder``) and a direction on
  every edge (the pairs in ``edges`` are read as ``a -> b``).
* ``Parity.EVEN``: a total order on the segment vertices (``vorder``) and a total
  order on the edges (the position of a pair in ``edges`` is its label).

Canonical representatives use the shorthand labeling: segment vertices are
numbered 1..s in strand order, free vertices follow, edges point from the smaller
to the larger label and are ordered lexicographically by their endpoints.
"""

from __future__ import annotations

import enum
import hashlib
import itertools
import json
import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Mapping, Sequence


class DiagramError(ValueError):
    """Raised for structurally malformed diagrams or incompatible sums."""


class Parity(str, enum.Enum):
    ODD = "odd"
    EVEN = "even"

    @classmethod
    def parse(cls, value: "Parity | str") -> "Parity":
        if isinstance(value, Parity):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise DiagramError(f"unknown parity {value!r}; expected 'odd' or 'even'") from None


def permutation_sign(seq: Sequence[int]) -> int:
    """Sign of the permutation that sorts ``seq`` (entries must be distinct)."""
    order = sorted(range(len(seq)), key=seq.__getitem__)
    seen = [False] * len(seq)
    sign = 1
    for start in range(len(seq)):
        if seen[start]:
            continue
        length = 0
        k = start
        while not seen[k]:
            seen[k] = True
            k = order[k]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


@dataclass(frozen=True)
class LinkDiagram:
    """A labeled graph on ``m`` oriented line segments.

    ``strands[k]`` lists the vertex ids on strand ``k`` in strand order. Vertex ids
    are arbitrary distinct integers; the orientation labels are positions in
    ``vorder`` (1-based) and, for even parity, positions in ``edges``.
    """

    strands: tuple[tuple[int, ...], ...]
    free: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]
    parity: Parity
    vorder: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "strands", tuple(tuple(s) for s in self.strands))
        object.__setattr__(self, "free", tuple(self.free))
        object.__setattr__(self, "edges", tuple((int(a), int(b)) for a, b in self.edges))
        object.__setattr__(self, "vorder", tuple(self.vorder))
        object.__setattr__(self, "parity", Parity.parse(self.parity))
        if not self.strands:
            raise DiagramError("a diagram needs at least one strand")
        seg = [v for s in self.strands for v in s]
        if len(set(seg)) != len(seg):
            raise DiagramError("a segment vertex appears twice")
        if set(seg) & set(self.free) or len(set(self.free)) != len(self.free):
            raise DiagramError("free vertices must be distinct and disjoint from segment vertices")
        known = set(seg) | set(self.free)
        for a, b in self.edges:
            if a not in known or b not in known:
                raise DiagramError(f"edge ({a},{b}) uses an unknown vertex")
        wanted = known if self.parity is Parity.ODD else set(seg)
        if len(self.vorder) != len(wanted) or set(self.vorder) != wanted:
            kind = "all vertices" if self.parity is Parity.ODD else "the segment vertices"
            raise DiagramError(f"vorder must list {kind} exactly once")

    # -- structure -------------------------------------------------------------

    @property
    def m(self) -> int:
        return len(self.strands)

    @cached_property
    def seg_vertices(self) -> tuple[int, ...]:
        return tuple(v for s in self.strands for v in s)

    @cached_property
    def strand_of(self) -> dict[int, int]:
        return {v: k for k, s in enumerate(self.strands) for v in s}

    def is_seg(self, v: int) -> bool:
        return v in self.strand_of

    def valence(self, v: int) -> int:
        """Number of edge ends at ``v`` (arcs are not counted)."""
        return sum((a == v) + (b == v) for a, b in self.edges)

    def label(self, v: int) -> int:
        """1-based orientation label of a vertex (segment vertices only for even parity)."""
        return self.vorder.index(v) + 1

    def has_self_loop(self) -> bool:
        return any(a == b for a, b in self.edges)

    def has_parallel_edges(self) -> bool:
        pairs = [frozenset(e) for e in self.edges]
        return len(set(pairs)) != len(pairs)

    def is_chord(self, edge: tuple[int, int]) -> bool:
        a, b = edge
        return a != b and self.is_seg(a) and self.is_seg(b)

    def is_chord_diagram(self) -> bool:
        return not self.free and all(self.is_chord(e) for e in self.edges)

    def arcs(self) -> Iterator[tuple[int, int]]:
        """Finite arcs, as (earlier, later) pairs of consecutive segment vertices."""
        for s in self.strands:
            yield from zip(s, s[1:])

    def admissibility_errors(self) -> list[str]:
        problems = []
        for v in self.seg_vertices:
            if self.valence(v) < 1:
                problems.append(f"segment vertex {v} has no edge")
        for v in self.free:
            if self.valence(v) < 3:
                problems.append(f"free vertex {v} has fewer than 3 edges")
        if self.free:
            adj: dict[int, set[int]] = {}
            for a, b in self.edges:
                adj.setdefault(a, set()).add(b)
                adj.setdefault(b, set()).add(a)
            reached = set(self.seg_vertices)
            stack = list(reached)
            while stack:
                for w in adj.get(stack.pop(), ()):
                    if w not in reached:
                        reached.add(w)
                        stack.append(w)
            for v in self.free:
                if v not in reached:
                    problems.append(f"free vertex {v} is not connected to a segment")
        return problems

    def check_admissible(self) -> None:
        problems = self.admissibility_errors()
        if problems:
            raise DiagramError("; ".join(problems))

    # -- grading ---------------------------------------------------------------

    def order(self) -> int:
        return len(self.edges) - len(self.free)

    def degree(self) -> tuple[int, int]:
        """Cochain degree as (a, b), meaning a*n + b.

        Equals (n-1)|E| - |V_seg| - n|V_free|.
        """
        e, s, f = len(self.edges), len(self.seg_vertices), len(self.free)
        return (e - f, -e - s)

    # -- transformations -------------------------------------------------------

    def relabel(self, mapping: Mapping[int, int]) -> "LinkDiagram":
        """Rename vertex ids; orientation labels travel with the vertices."""
        f = lambda v: mapping.get(v, v)
        return LinkDiagram(
            strands=tuple(tuple(f(v) for v in s) for s in self.strands),
            free=tuple(f(v) for v in self.free),
            edges=tuple((f(a), f(b)) for a, b in self.edges),
            parity=self.parity,
            vorder=tuple(f(v) for v in self.vorder),
        )

    def with_orientation(
        self, vorder: Sequence[int], edges: Sequence[tuple[int, int]] | None = None
    ) -> "LinkDiagram":
        return LinkDiagram(self.strands, self.free, tuple(edges or self.edges), self.parity, tuple(vorder))

    def on_strands(self, m_total: int, strand_map: Mapping[int, int] | Sequence[int]) -> "LinkDiagram":
        """View the diagram on ``m_total`` strands; strand k goes to ``strand_map[k]`` (1-based)."""
        targets = _strand_targets(self.m, m_total, strand_map)
        new = [()] * m_total
        for k, s in enumerate(self.strands):
            new[targets[k] - 1] = s
        return LinkDiagram(tuple(new), self.free, self.edges, self.parity, self.vorder)

    # -- canonical form --------------------------------------------------------

    def canonicalize(self) -> tuple["CanonicalDiagram", int]:
        return canonicalize(self)

    # -- text form -------------------------------------------------------------

    def to_dsl(self) -> str:
        parts = [f"strands={self.m}"]
        for k, s in enumerate(self.strands, 1):
            parts.append(f"strand{k}=[{','.join(map(str, s))}]")
        parts.append(f"free=[{','.join(map(str, self.free))}]")
        parts.append("edges=[" + ",".join(f"({a},{b})" for a, b in self.edges) + "]")
        parts.append(f"parity={self.parity.value}")
        parts.append(f"vorder=[{','.join(map(str, self.vorder))}]")
        if self.parity is Parity.ODD:
            parts.append("edir=[" + ",".join(f"({a}->{b})" for a, b in self.edges) + "]")
        else:
            parts.append("eorder=[" + ",".join(f"({a},{b})" for a, b in self.edges) + "]")
        return "; ".join(parts)

    def to_json(self) -> dict:
        data = {
            "strands": [list(s) for s in self.strands],
            "free": list(self.free),
            "edges": [list(e) for e in self.edges],
            "parity": self.parity.value,
            "vorder": list(self.vorder),
        }
        return data

    @classmethod
    def from_json(cls, data: Mapping) -> "LinkDiagram":
        parity = Parity.parse(data["parity"])
        edges = [tuple(e) for e in data["edges"]]
        if parity is Parity.ODD and "edir" in data:
            edges = _apply_directions(edges, [tuple(e) for e in data["edir"]])
        if parity is Parity.EVEN and "eorder" in data:
            edges = _apply_order(edges, [tuple(e) for e in data["eorder"]])
        strands = [tuple(s) for s in data["strands"]]
        free = tuple(data.get("free", ()))
        vorder = data.get("vorder")
        if vorder is None:
            raise DiagramError("missing vorder")
        return cls(tuple(strands), free, tuple(edges), parity, tuple(vorder))


def _strand_targets(m: int, m_total: int, strand_map: Mapping[int, int] | Sequence[int]) -> list[int]:
    if isinstance(strand_map, Mapping):
        targets = [strand_map[k + 1] for k in range(m)]
    else:
        targets = list(strand_map)
    if len(targets) != m:
        raise DiagramError(f"strand map must send all {m} strands")
    if len(set(targets)) != m:
        raise DiagramError("strand map is not injective")
    if any(not 1 <= t <= m_total for t in targets):
        raise DiagramError(f"strand map targets must lie in 1..{m_total}")
    return targets


def _apply_directions(edges, directed):
    if sorted(map(frozenset, edges), key=sorted) != sorted(map(frozenset, directed), key=sorted):
        raise DiagramError("edir must orient exactly the listed edges")
    return list(directed)


def _apply_order(edges, ordered):
    if sorted(map(frozenset, edges), key=sorted) != sorted(map(frozenset, ordered), key=sorted):
        raise DiagramError("eorder must list exactly the listed edges")
    return list(ordered)


# -- canonical diagrams -------------------------------------------------------


@dataclass(frozen=True, order=True)
class CanonicalDiagram:
    """Shorthand-labeled representative of an isomorphism class of diagrams.

    Segment vertices are 1..s (strand by strand), free vertices s+1..s+f. Edges are
    sorted (min, max) pairs; for odd parity they point from min to max, for even
    parity their listed order is the edge order.
    """

    parity: Parity
    strand_sizes: tuple[int, ...]
    nfree: int
    edges: tuple[tuple[int, int], ...]

    @property
    def m(self) -> int:
        return len(self.strand_sizes)

    @property
    def nseg(self) -> int:
        return sum(self.strand_sizes)

    def diagram(self) -> LinkDiagram:
        strands, start = [], 1
        for size in self.strand_sizes:
            strands.append(tuple(range(start, start + size)))
            start += size
        free = tuple(range(start, start + self.nfree))
        if self.parity is Parity.ODD:
            vorder = tuple(range(1, start + self.nfree))
        else:
            vorder = tuple(range(1, start))
        return LinkDiagram(tuple(strands), free, self.edges, self.parity, vorder)

    def is_chord_diagram(self) -> bool:
        return self.nfree == 0

    def order(self) -> int:
        return len(self.edges) - self.nfree

    def degree(self) -> tuple[int, int]:
        return (len(self.edges) - self.nfree, -len(self.edges) - self.nseg)

    def to_dsl(self) -> str:
        return self.diagram().to_dsl()

    @cached_property
    def digest(self) -> str:
        return hashlib.sha1(self.to_dsl().encode()).hexdigest()[:16]

    def sort_key(self):
        return (self.nfree, self.strand_sizes, self.edges)

    def __str__(self) -> str:
        return self.to_dsl()


def _free_invariants(d: LinkDiagram, seglab: dict[int, int]) -> dict[int, tuple]:
    """Relabeling-invariant fingerprint of each free vertex, used to prune labelings."""
    nbrs: dict[int, list[int]] = {v: [] for v in d.free}
    for a, b in d.edges:
        if a in nbrs:
            nbrs[a].append(b)
        if b in nbrs:
            nbrs[b].append(a)
    base = {
        v: (len(ns), tuple(sorted(seglab[w] for w in ns if w in seglab))) for v, ns in nbrs.items()
    }
    return {
        v: base[v] + (tuple(sorted(base[w] for w in ns if w in base)),) for v, ns in nbrs.items()
    }


def _labeling_sign(d: LinkDiagram, lab: dict[int, int], canon_edges: list[tuple[int, int]]) -> int:
    if d.parity is Parity.ODD:
        sign = permutation_sign([lab[v] for v in d.vorder])
        for a, b in d.edges:
            if lab[a] > lab[b]:
                sign = -sign
        return sign
    sign = permutation_sign([lab[v] for v in d.vorder])
    images = [tuple(sorted((lab[a], lab[b]))) for a, b in d.edges]
    position = {e: i for i, e in enumerate(canon_edges)}
    return sign * permutation_sign([position[e] for e in images])


def canonicalize(d: LinkDiagram) -> tuple[CanonicalDiagram, int]:
    """Return (representative, sign) with ``d == sign * representative``.

    The sign is 0 when ``d`` has a self-loop, a parallel pair of edges, or an
    automorphism reversing its orientation.
    """
    seglab = {v: i for i, v in enumerate(d.seg_vertices, 1)}
    s = len(seglab)
    sizes = tuple(len(st) for st in d.strands)
    degenerate = d.has_self_loop() or d.has_parallel_edges()

    inv = _free_invariants(d, seglab)
    classes: dict[tuple, list[int]] = {}
    for v in d.free:
        classes.setdefault(inv[v], []).append(v)
    groups = [classes[k] for k in sorted(classes)]

    best_key = None
    best_signs: set[int] = set()
    for choice in itertools.product(*(itertools.permutations(g) for g in groups)):
        lab = dict(seglab)
        nxt = s + 1
        for g in choice:
            for v in g:
                lab[v] = nxt
                nxt += 1
        key = tuple(sorted(tuple(sorted((lab[a], lab[b]))) for a, b in d.edges))
        if best_key is None or key < best_key:
            best_key = key
            best_signs = set()
        if key == best_key and not degenerate:
            best_signs.add(_labeling_sign(d, lab, list(key)))
    canon = CanonicalDiagram(d.parity, sizes, len(d.free), best_key or ())
    if degenerate or len(best_signs) != 1:
        return canon, 0
    return canon, best_signs.pop()


def shorthand_diagram(
    strand_sizes: Sequence[int],
    edges: Iterable[tuple[int, int]],
    parity: Parity | str,
    nfree: int = 0,
) -> LinkDiagram:
    """Diagram labeled by the shorthand convention (vertices numbered strand by strand, free last)."""
    parity = Parity.parse(parity)
    edges = sorted(tuple(sorted(e)) for e in edges)
    return CanonicalDiagram(parity, tuple(strand_sizes), nfree, tuple(edges)).diagram()


# -- formal sums --------------------------------------------------------------


@dataclass(frozen=True)
class Grading:
    order: int
    degree: tuple[int, int]

    def shifted(self, k: int = 1) -> "Grading":
        a, b = self.degree
        return Grading(self.order, (a, b + k))


@dataclass(frozen=True)
class DiagramSum:
    """Integer combination of canonical diagrams sharing parity and strand count."""

    m: int
    parity: Parity
    terms: Mapping[CanonicalDiagram, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "parity", Parity.parse(self.parity))
        clean = {}
        grading = None
        for c, k in self.terms.items():
            if k == 0:
                continue
            if c.m != self.m or c.parity is not self.parity:
                raise DiagramError("diagram does not match the sum's strand count or parity")
            g = (c.order(), c.degree())
            if grading is None:
                grading = g
            elif g != grading:
                raise DiagramError(f"grading mismatch: {g} vs {grading}")
            clean[c] = int(k)
        object.__setattr__(self, "terms", dict(sorted(clean.items(), key=lambda kv: kv[0].sort_key())))

    @classmethod
    def zero(cls, m: int, parity: Parity | str) -> "DiagramSum":
        return cls(m, Parity.parse(parity), {})

    @classmethod
    def from_diagrams(cls, items: Iterable[tuple[int, LinkDiagram]], m: int | None = None,
                      parity: Parity | str | None = None) -> "DiagramSum":
        acc: dict[CanonicalDiagram, int] = {}
        for coef, d in items:
            m = d.m if m is None else m
            parity = d.parity if parity is None else parity
            canon, sign = canonicalize(d)
            if sign:
                acc[canon] = acc.get(canon, 0) + coef * sign
        if m is None or parity is None:
            raise DiagramError("cannot infer strand count and parity of an empty sum")
        return cls(m, Parity.parse(parity), acc)

    @classmethod
    def of(cls, d: LinkDiagram, coef: int = 1) -> "DiagramSum":
        return cls.from_diagrams([(coef, d)])

    @property
    def grading(self) -> Grading | None:
        for c in self.terms:
            return Grading(c.order(), c.degree())
        return None

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self) -> Iterator[tuple[CanonicalDiagram, int]]:
        return iter(self.terms.items())

    def coefficient(self, c: CanonicalDiagram) -> int:
        return self.terms.get(c, 0)

    def _check(self, other: "DiagramSum") -> None:
        if self.m != other.m or self.parity is not other.parity:
            raise DiagramError("sums live on different strand counts or parities")
        g1, g2 = self.grading, other.grading
        if g1 is not None and g2 is not None and g1 != g2:
            raise DiagramError(f"grading mismatch: {g1} vs {g2}")

    def __add__(self, other: "DiagramSum") -> "DiagramSum":
        self._check(other)
        acc = dict(self.terms)
        for c, k in other.terms.items():
            acc[c] = acc.get(c, 0) + k
        return DiagramSum(self.m, self.parity, acc)

    def __neg__(self) -> "DiagramSum":
        return self * -1

    def __sub__(self, other: "DiagramSum") -> "DiagramSum":
        return self + (-other)

    def __mul__(self, k: int) -> "DiagramSum":
        return DiagramSum(self.m, self.parity, {c: k * v for c, v in self.terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DiagramSum):
            return NotImplemented
        return (self.m, self.parity, dict(self.terms)) == (other.m, other.parity, dict(other.terms))

    def __hash__(self) -> int:
        return hash((self.m, self.parity, tuple(self.terms.items())))

    def chord_part(self) -> "DiagramSum":
        return DiagramSum(self.m, self.parity, {c: k for c, k in self.terms.items() if c.is_chord_diagram()})

    def __repr__(self) -> str:
        if not self.terms:
            return f"DiagramSum(m={self.m}, {self.parity.value}, 0)"
        body = " ".join(f"{k:+d}*[{c.digest}]" for c, k in self.terms.items())
        return f"DiagramSum(m={self.m}, {self.parity.value}, {body})"

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "parity": self.parity.value,
            "terms": [{"coef": k, "diagram": c.diagram().to_json()} for c, k in self.terms.items()],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "DiagramSum":
        items = [(t["coef"], LinkDiagram.from_json(t["diagram"])) for t in data["terms"]]
        return cls.from_diagrams(items, m=data["m"], parity=data["parity"])


def sum_add(s: DiagramSum, t: DiagramSum) -> DiagramSum:
    return s + t


def sum_scale(s: DiagramSum, k: int) -> DiagramSum:
    return s * k


def place_on_strands(s: DiagramSum, m_total: int, strand_map: Mapping[int, int] | Sequence[int]) -> DiagramSum:
    """Re-index the strands of every term of ``s``; unused strands stay empty."""
    _strand_targets(s.m, m_total, strand_map)
    items = [(k, c.diagram().on_strands(m_total, strand_map)) for c, k in s.terms.items()]
    return DiagramSum.from_diagrams(items, m=m_total, parity=s.parity)


# -- DSL ----------------------------------------------------------------------

_FIELD = re.compile(r"^\s*([a-z]+\d*)\s*=\s*(.*?)\s*$")
_PAIR = re.compile(r"\(\s*(-?\d+)\s*(?:,|->)\s*(-?\d+)\s*\)")


def _int_list(text: str) -> list[int]:
    text = text.strip()
    if not (text.startswith("[") and text.endswith("]")):
        raise DiagramError(f"expected a bracketed list, got {text!r}")
    inner = text[1:-1].strip()
    return [int(x) for x in inner.split(",")] if inner else []


def _pair_list(text: str, arrow: bool | None = None) -> list[tuple[int, int]]:
    text = text.strip()
    if not (text.startswith("[") and text.endswith("]")):
        raise DiagramError(f"expected a bracketed list of pairs, got {text!r}")
    inner = text[1:-1]
    pairs = [(int(a), int(b)) for a, b in _PAIR.findall(inner)]
    leftover = _PAIR.sub("", inner).replace(",", "").strip()
    if leftover:
        raise DiagramError(f"cannot parse pair list {text!r}")
    return pairs


def parse_dsl(text: str) -> LinkDiagram:
    """Parse ``strands=M; strand1=[...]; ...; free=[...]; edges=[(a,b),...]; parity=...``."""
    fields: dict[str, str] = {}
    for chunk in text.strip().rstrip(";").split(";"):
        if not chunk.strip():
            continue
        match = _FIELD.match(chunk)
        if not match:
            raise DiagramError(f"cannot parse field {chunk!r}")
        key, value = match.groups()
        if key in fields:
            raise DiagramError(f"duplicate field {key!r}")
        fields[key] = value
    try:
        m = int(fields.pop("strands"))
        parity = Parity.parse(fields.pop("parity"))
    except KeyError as exc:
        raise DiagramError(f"missing field {exc.args[0]!r}") from None
    strands = []
    for k in range(1, m + 1):
        strands.append(tuple(_int_list(fields.pop(f"strand{k}", "[]"))))
    free = tuple(_int_list(fields.pop("free", "[]")))
    edges = _pair_list(fields.pop("edges", "[]"))
    if "vorder" not in fields:
        raise DiagramError("missing field 'vorder'")
    vorder = _int_list(fields.pop("vorder"))
    if "edir" in fields:
        edges = _apply_directions(edges, _pair_list(fields.pop("edir")))
    if "eorder" in fields:
        edges = _apply_order(edges, _pair_list(fields.pop("eorder")))
    if fields:
        raise DiagramError(f"unknown fields: {', '.join(sorted(fields))}")
    return LinkDiagram(tuple(strands), free, tuple(edges), parity, tuple(vorder))


def dumps_diagram(d: LinkDiagram | CanonicalDiagram, fmt: str = "dsl") -> str:
    if isinstance(d, CanonicalDiagram):
        d = d.diagram()
    if fmt == "json":
        return json.dumps(d.to_json(), sort_keys=True)
    return d.to_dsl()
