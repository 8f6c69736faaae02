"""Horizontal chord words modulo the infinitesimal braid (4T) relations, in length two."""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .complex import CapacityError
from .diagram import DiagramError, DiagramSum, LinkDiagram, Parity, canonicalize
from .linalg import _rref

Generator = tuple[int, int]


def _check_generator(m: int, g: Generator) -> None:
    i, j = g
    if not (1 <= i < j <= m):
        raise DiagramError(f"t{i}{j} is not a generator on {m} strands")


@dataclass(frozen=True, order=True)
class ChordWord:
    m: int
    letters: tuple[Generator, ...]
    parity: Parity = Parity.ODD

    def __post_init__(self) -> None:
        object.__setattr__(self, "parity", Parity.parse(self.parity))
        object.__setattr__(self, "letters", tuple(tuple(g) for g in self.letters))
        for g in self.letters:
            _check_generator(self.m, g)

    def __len__(self) -> int:
        return len(self.letters)

    def __str__(self) -> str:
        return ".".join(f"t{i}{j}" for i, j in self.letters) or "1"

    @classmethod
    def parse(cls, text: str, m: int, parity: Parity | str = Parity.ODD) -> "ChordWord":
        if m > 9:
            raise DiagramError("the t<i><j> word syntax supports at most 9 strands")
        text = text.strip()
        if text == "1":
            return cls(m, (), parity)
        letters = []
        for part in text.split("."):
            match = re.fullmatch(r"t(\d)(\d)", part.strip())
            if not match:
                raise DiagramError(f"cannot parse chord letter {part!r}")
            letters.append((int(match.group(1)), int(match.group(2))))
        return cls(m, tuple(letters), parity)


@dataclass(frozen=True)
class ChordSum:
    m: int
    parity: Parity
    terms: Mapping[tuple[Generator, ...], Fraction] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "parity", Parity.parse(self.parity))
        clean = {}
        for word, k in self.terms.items():
            word = tuple(tuple(g) for g in word)
            for g in word:
                _check_generator(self.m, g)
            if k:
                clean[word] = Fraction(k)
        object.__setattr__(self, "terms", dict(sorted(clean.items())))

    def __iter__(self):
        return iter(self.terms.items())

    def __len__(self) -> int:
        return len(self.terms)

    def __add__(self, other: "ChordSum") -> "ChordSum":
        if (self.m, self.parity) != (other.m, other.parity):
            raise DiagramError("chord sums on different strand counts or parities")
        acc = dict(self.terms)
        for w, k in other.terms.items():
            acc[w] = acc.get(w, 0) + k
        return ChordSum(self.m, self.parity, acc)

    def __mul__(self, k) -> "ChordSum":
        return ChordSum(self.m, self.parity, {w: k * v for w, v in self.terms.items()})

    __rmul__ = __mul__

    def __neg__(self) -> "ChordSum":
        return self * -1

    def __sub__(self, other: "ChordSum") -> "ChordSum":
        return self + (-other)

    def coefficient(self, word: ChordWord | Sequence[Generator]) -> Fraction:
        letters = word.letters if isinstance(word, ChordWord) else tuple(tuple(g) for g in word)
        return self.terms.get(letters, Fraction(0))

    def is_zero(self) -> bool:
        return not self.terms

    def to_json(self) -> list:
        return [[str(ChordWord(self.m, w, self.parity)), str(k)] for w, k in self.terms.items()]

    @classmethod
    def from_json(cls, data: Iterable, m: int, parity: Parity | str) -> "ChordSum":
        terms = {}
        for text, k in data:
            w = ChordWord.parse(text, m, parity).letters
            terms[w] = terms.get(w, 0) + Fraction(k)
        return cls(m, Parity.parse(parity), terms)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " ".join(f"{'+' if k > 0 else '-'}{abs(k)}*{ChordWord(self.m, w)}" for w, k in self.terms.items())


def generators(m: int) -> list[Generator]:
    return list(itertools.combinations(range(1, m + 1), 2))


def words_degree2(m: int) -> list[tuple[Generator, Generator]]:
    gens = generators(m)
    return [(a, b) for a in gens for b in gens]


def _swap_sign(parity: Parity) -> int:
    # generator degree n-3 is even for odd n and odd for even n
    return 1 if parity is Parity.ODD else -1


def _gen(i: int, j: int, parity: Parity) -> tuple[int, Generator]:
    """t_ij as (sign, normalized generator), using t_ji = (-1)^deg t_ij."""
    return (1, (i, j)) if i < j else (_swap_sign(parity), (j, i))


def _bracket(x: list[tuple[int, Generator]], y: list[tuple[int, Generator]], parity: Parity) -> dict:
    out: dict[tuple[Generator, Generator], int] = {}
    eps = _swap_sign(parity)
    for sx, gx in x:
        for sy, gy in y:
            out[(gx, gy)] = out.get((gx, gy), 0) + sx * sy
            out[(gy, gx)] = out.get((gy, gx), 0) - eps * sx * sy
    return {w: k for w, k in out.items() if k}


def _normalize(rel: dict) -> tuple:
    items = sorted(rel.items())
    lead = items[0][1]
    s = 1 if lead > 0 else -1
    return tuple((w, s * k) for w, k in items)


def relations_degree2(m: int, parity: Parity | str) -> list[ChordSum]:
    """All length-two graded infinitesimal braid relations, deduplicated up to sign."""
    parity = Parity.parse(parity)
    if m < 2:
        raise DiagramError("relations need at least two strands")
    seen: dict[tuple, None] = {}
    for i, j, k in itertools.permutations(range(1, m + 1), 3):
        rel = _bracket([_gen(i, j, parity)], [_gen(i, k, parity), _gen(j, k, parity)], parity)
        if rel:
            seen.setdefault(_normalize(rel))
    gens = generators(m)
    for a, b in itertools.combinations(gens, 2):
        if set(a) & set(b):
            continue
        rel = _bracket([(1, a)], [(1, b)], parity)
        if rel:
            seen.setdefault(_normalize(rel))
    return [ChordSum(m, parity, dict(rel)) for rel in seen]


def dim_degree2(
    m: int, parity: Parity | str, word_order: Sequence[tuple[Generator, Generator]] | None = None
) -> tuple[int, list[ChordWord]]:
    """Dimension of length-two words modulo relations, with a coset basis of standard words.

    ``word_order`` fixes the monomial order used in elimination (default: reverse
    lexicographic, so that the lexicographically smallest words survive).
    """
    parity = Parity.parse(parity)
    if m > 4:
        raise CapacityError("chord dimensions are limited to m <= 4")
    if m < 2:
        return 0, []
    words = list(word_order) if word_order is not None else sorted(words_degree2(m), reverse=True)
    if sorted(words) != sorted(words_degree2(m)):
        raise DiagramError("word_order must be a permutation of all length-two words")
    col = {w: i for i, w in enumerate(words)}
    rows = []
    for rel in relations_degree2(m, parity):
        row = [0] * len(words)
        for w, k in rel:
            row[col[w]] = k
        rows.append(row)
    pivots = set(_rref(rows)[1]) if rows else set()
    basis = sorted(ChordWord(m, words[i], parity) for i in range(len(words)) if i not in pivots)
    return len(basis), basis


def annihilates(functional: ChordSum, relations: Iterable[ChordSum]) -> bool:
    """Whether a word functional vanishes on every relation (i.e. is a well-defined dual class)."""
    return all(sum(functional.coefficient(w) * k for w, k in rel) == 0 for rel in relations)


def functional_rank(functionals: Sequence[ChordSum]) -> int:
    if not functionals:
        return 0
    m = functionals[0].m
    words = words_degree2(m)
    return len(_rref([[f.coefficient(w) for w in words] for f in functionals])[1])


# -- from link diagrams -------------------------------------------------------


def _horizontal_orders(d: LinkDiagram) -> list[list[tuple[int, int]]] | str:
    """Linear orders of the chords compatible with every strand, or a reason why none exists."""
    strand = d.strand_of
    if d.free:
        return "has free vertices"
    used = [v for e in d.edges for v in e]
    if len(used) != len(set(used)):
        return "a segment vertex carries more than one chord"
    chords = []
    for a, b in d.edges:
        if strand[a] == strand[b]:
            return "a chord has both ends on one strand"
        chords.append((a, b) if strand[a] < strand[b] else (b, a))
    position = {v: i for s in d.strands for i, v in enumerate(s)}
    before = {c: set() for c in chords}
    for c1, c2 in itertools.permutations(chords, 2):
        for v1 in c1:
            for v2 in c2:
                if strand[v1] == strand[v2] and position[v1] < position[v2]:
                    before[c2].add(c1)
    orders = []
    for perm in itertools.permutations(chords):
        seen: set = set()
        ok = True
        for c in perm:
            if not before[c] <= seen:
                ok = False
                break
            seen.add(c)
        if ok:
            orders.append(list(perm))
    return orders or "chords cannot be read off as a braid word"


def _word_and_sign(d: LinkDiagram, chords: list[tuple[int, int]]) -> tuple[tuple[Generator, ...], int]:
    strand = d.strand_of
    relabel = {}
    for r, (a, b) in enumerate(chords):
        relabel[a], relabel[b] = 2 * r + 1, 2 * r + 2
    strands = tuple(tuple(relabel[v] for v in s) for s in d.strands)
    edges = tuple((2 * r + 1, 2 * r + 2) for r in range(len(chords)))
    timed = LinkDiagram(strands, (), edges, d.parity, tuple(range(1, 2 * len(chords) + 1)))
    _, sign = canonicalize(timed)
    word = tuple((strand[a] + 1, strand[b] + 1) for a, b in chords)
    return word, sign


def forget_to_chords(s: DiagramSum, strict: bool = False) -> ChordSum:
    """The horizontal chord words in ``s``, read in time order, as a word functional.

    Non-chord terms are dropped. Chord terms that are not horizontal words are
    dropped too, unless ``strict`` is set, in which case they raise. When several
    time orders exist the lexicographically smallest word is used.
    """
    if s.m < 2:
        raise DiagramError("horizontal chord words need at least two strands")
    terms: dict[tuple[Generator, ...], Fraction] = {}
    rejected = []
    for c, k in s:
        if not c.is_chord_diagram():
            continue
        d = c.diagram()
        orders = _horizontal_orders(d)
        if isinstance(orders, str):
            rejected.append(f"{c.to_dsl()} ({orders})")
            continue
        best = min((_word_and_sign(d, o) for o in orders), key=lambda ws: ws[0])
        word, sign = best
        terms[word] = terms.get(word, 0) + sign * k
    if rejected and (strict or not terms):
        raise DiagramError("no horizontal chord word for: " + "; ".join(rejected))
    return ChordSum(s.m, s.parity, terms)


def vassiliev_dims(m: int, r: int) -> int:
    """Dimension of the order-r quotient of classical (n = 3) link invariants, r <= 2."""
    if m < 1:
        raise DiagramError("strand count must be positive")
    if r < 0:
        raise DiagramError("order must be non-negative")
    if r > 2:
        raise CapacityError("only orders 0, 1, 2 are supported")
    if r == 0:
        return 1
    if r == 1:
        return m * (m - 1) // 2
    # chord degree n-3 vanishes at n = 3, so the commuting (odd-n) signs apply
    return dim_degree2(m, Parity.ODD)[0]
