"""Singular long links given by their double points, the join map, and the chord pairing."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Mapping, Sequence

from .diagram import CanonicalDiagram, DiagramError, DiagramSum, LinkDiagram, Parity, _strand_targets, canonicalize
from .linalg import SparseIntMatrix


@dataclass(frozen=True)
class SingularLink:
    """Marked points on m strands, perfectly matched into double points.

    ``order`` lists the double points (1-based indices into ``pairs``) in the
    order their resolution spheres are taken. ``orientation`` is the sign of the
    resolution family against the canonical chord diagram, for odd and even
    parity: (+1, +1) for links written down directly, updated by
    ``include_on_strands`` when strands are moved.
    """

    strands: tuple[tuple[str, ...], ...]
    pairs: tuple[tuple[str, str], ...]
    order: tuple[int, ...] | None = None
    orientation: tuple[int, int] = (1, 1)

    def __post_init__(self) -> None:
        strands = tuple(tuple(str(p) for p in s) for s in self.strands)
        pairs = tuple(tuple(str(p) for p in pr) for pr in self.pairs)
        points = [p for s in strands for p in s]
        if len(points) != len(set(points)):
            raise DiagramError("a marked point appears twice")
        matched = [p for pr in pairs for p in pr]
        if any(len(pr) != 2 or pr[0] == pr[1] for pr in pairs):
            raise DiagramError("each double point joins two distinct marked points")
        if len(matched) != len(set(matched)):
            raise DiagramError("a marked point lies in two double points")
        if set(matched) != set(points):
            raise DiagramError("the double points must match all marked points")
        order = tuple(range(1, len(pairs) + 1)) if self.order is None else tuple(self.order)
        if sorted(order) != list(range(1, len(pairs) + 1)):
            raise DiagramError("resolution order must be a permutation of the double points")
        orientation = tuple(int(x) for x in self.orientation)
        if len(orientation) != 2 or any(x not in (1, -1) for x in orientation):
            raise DiagramError("orientation must be a pair of signs (odd, even)")
        object.__setattr__(self, "orientation", orientation)
        object.__setattr__(self, "strands", strands)
        object.__setattr__(self, "pairs", pairs)
        object.__setattr__(self, "order", order)

    @property
    def m(self) -> int:
        return len(self.strands)

    @property
    def num_double_points(self) -> int:
        return len(self.pairs)

    def to_dsl(self) -> str:
        parts = [f"strands={self.m}"]
        parts += [f"strand{k}=[{','.join(s)}]" for k, s in enumerate(self.strands, 1)]
        parts.append("pairs=[" + ",".join(f"({a},{b})" for a, b in self.pairs) + "]")
        parts.append("order=[" + ",".join(map(str, self.order)) + "]")
        if self.orientation != (1, 1):
            parts.append(f"orientation=[{self.orientation[0]},{self.orientation[1]}]")
        return "; ".join(parts)

    def to_json(self) -> dict:
        return {
            "strands": [list(s) for s in self.strands],
            "pairs": [list(p) for p in self.pairs],
            "order": list(self.order),
            "orientation": list(self.orientation),
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "SingularLink":
        return cls(
            tuple(tuple(s) for s in data["strands"]),
            tuple(tuple(p) for p in data["pairs"]),
            tuple(data["order"]) if data.get("order") is not None else None,
            tuple(data.get("orientation", (1, 1))),
        )


@dataclass(frozen=True)
class ResolutionFamily:
    """The family obtained by resolving every double point; only its combinatorics is kept."""

    link: SingularLink

    def dual_diagram(self, parity: Parity | str = Parity.ODD) -> CanonicalDiagram:
        return chord_diagram_of(self.link, parity)


_NAME = r"[A-Za-z_][A-Za-z0-9_']*"


def parse_link(text: str) -> SingularLink:
    fields: dict[str, str] = {}
    for chunk in text.strip().split(";"):
        if not chunk.strip():
            continue
        key, sep, value = chunk.partition("=")
        key = key.strip()
        if not sep or not re.fullmatch(r"strands|strand\d+|pairs|order|orientation", key):
            raise DiagramError(f"unknown field in link description: {chunk.strip()!r}")
        if key in fields:
            raise DiagramError(f"duplicate field {key!r}")
        fields[key] = value.strip()
    if "strands" not in fields or "pairs" not in fields:
        raise DiagramError("a link description needs strands= and pairs=")
    m = int(fields["strands"])
    strands = []
    for k in range(1, m + 1):
        body = fields.get(f"strand{k}", "[]")
        if not (body.startswith("[") and body.endswith("]")):
            raise DiagramError(f"strand{k} must be a bracketed list")
        names = [p.strip() for p in body[1:-1].split(",") if p.strip()]
        for p in names:
            if not re.fullmatch(_NAME, p):
                raise DiagramError(f"bad marked point name {p!r}")
        strands.append(tuple(names))
    extra = [k for k in fields if k.startswith("strand") and k != "strands" and int(k[6:]) > m]
    if extra:
        raise DiagramError(f"fields {extra} exceed the strand count")
    pairs = tuple(
        (a, b) for a, b in re.findall(rf"\(\s*({_NAME})\s*,\s*({_NAME})\s*\)", fields["pairs"])
    )
    order = None
    if "order" in fields:
        order = tuple(int(x) for x in fields["order"].strip("[] ").split(",") if x.strip())
    orientation = (1, 1)
    if "orientation" in fields:
        orientation = tuple(int(x) for x in fields["orientation"].strip("[] ").split(","))
    return SingularLink(tuple(strands), pairs, order, orientation)


def join_last_two(link: SingularLink) -> SingularLink:
    """Fuse the last strand onto the end of the one before it."""
    if link.m < 2:
        raise DiagramError("joining needs at least two strands")
    strands = link.strands[:-2] + (link.strands[-2] + link.strands[-1],)
    return SingularLink(strands, link.pairs, link.order, link.orientation)


def join_repeated(link: SingularLink, times: int) -> SingularLink:
    for _ in range(times):
        link = join_last_two(link)
    return link


def include_on_strands(link: SingularLink, m_total: int, strand_map: Mapping[int, int] | Sequence[int]) -> SingularLink:
    targets = _strand_targets(link.m, m_total, strand_map)
    strands: list[tuple[str, ...]] = [()] * m_total
    for k, t in enumerate(targets):
        strands[t - 1] = link.strands[k]
    # carry the family's orientation along, as place_on_strands does for cocycles
    signs = []
    for parity, old in zip(Parity, link.orientation):
        before = singular_diagram(link, parity)
        signs.append(old * canonicalize(before.on_strands(m_total, targets))[1] * canonicalize(before)[1])
    return SingularLink(tuple(strands), link.pairs, link.order, tuple(signs))


def singular_diagram(link: SingularLink, parity: Parity | str = Parity.ODD) -> LinkDiagram:
    """The link diagram whose chords are the double points, in shorthand labels."""
    parity = Parity.parse(parity)
    label, strands, nxt = {}, [], 1
    for s in link.strands:
        strands.append(tuple(range(nxt, nxt + len(s))))
        for p in s:
            label[p] = nxt
            nxt += 1
    edges = tuple(sorted(tuple(sorted((label[a], label[b]))) for a, b in link.pairs))
    return LinkDiagram(tuple(strands), (), edges, parity, tuple(range(1, nxt)))


def chord_diagram_of(link: SingularLink, parity: Parity | str = Parity.ODD) -> CanonicalDiagram:
    """Canonical chord diagram matching the double points, sign discarded."""
    return canonicalize(singular_diagram(link, parity))[0]


def pair(cocycle: DiagramSum, link: SingularLink) -> int:
    """Coefficient of the link's chord diagram in the cocycle (a matching term counts +1).

    Links moved by ``include_on_strands`` contribute their carried orientation.
    """
    if cocycle.m != link.m:
        raise DiagramError(f"cocycle lives on {cocycle.m} strands, link on {link.m}")
    g = cocycle.grading
    if g is not None and g.order != link.num_double_points:
        raise DiagramError(f"cocycle has order {g.order}, link has {link.num_double_points} double points")
    sign = link.orientation[0 if cocycle.parity is Parity.ODD else 1]
    return cocycle.coefficient(chord_diagram_of(link, cocycle.parity)) * sign


def pairing_matrix(
    cocycles: Sequence[DiagramSum], links: Sequence[SingularLink]
) -> tuple[SparseIntMatrix, int | None]:
    """Matrix of pairings (rows: cocycles) and its determinant when square."""
    entries = {}
    for i, c in enumerate(cocycles):
        for j, L in enumerate(links):
            entries[(i, j)] = pair(c, L)
    mat = SparseIntMatrix(len(cocycles), len(links), entries)
    det = mat.determinant() if len(cocycles) == len(links) else None
    return mat, det


def builtin_families() -> dict[str, SingularLink]:
    f = SingularLink((("s1", "s2"), ("t",), ("u",)), (("s1", "t"), ("s2", "u")))
    f_prime = SingularLink((("s1", "s2"), ("t",), ("u",)), (("s1", "u"), ("s2", "t")))
    h = SingularLink((("s1", "s2"), ("t1", "t2")), (("s1", "t1"), ("s2", "t2")))
    l, l_prime = join_last_two(f), join_last_two(f_prime)
    return {
        "f": f,
        "f'": f_prime,
        "h": h,
        "l": l,
        "l'": l_prime,
        "k": join_last_two(l),
        "k'": join_last_two(l_prime),
    }


def family(name: str) -> SingularLink:
    key = name.replace("prime", "'").replace("_", "")
    fams = builtin_families()
    if key.lower() in fams:
        return fams[key.lower()]
    raise KeyError(f"unknown family {name!r}; expected one of {', '.join(fams)}")
