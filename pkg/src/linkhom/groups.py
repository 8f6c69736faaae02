"""Closed-form homotopy groups of long links in the metastable range, as abelian group expressions."""

from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass, field
from math import comb
from typing import Iterable, Mapping, Sequence


class RangeError(ValueError):
    """Parameters fall outside the hypotheses of the formula being evaluated."""


# Toda's tables; see e.g. Ravenel, "Complex cobordism", Table A3.3.
STABLE_STEMS: dict[int, tuple[int, tuple[int, ...]]] = {
    0: (1, ()),
    1: (0, (2,)),
    2: (0, (2,)),
    3: (0, (24,)),
    4: (0, ()),
    5: (0, ()),
    6: (0, (2,)),
    7: (0, (240,)),
    8: (0, (2, 2)),
    9: (0, (2, 2, 2)),
    10: (0, (6,)),
    11: (0, (504,)),
    12: (0, ()),
    13: (0, (3,)),
    14: (0, (2, 2)),
    15: (0, (2, 480)),
}

# pi_{2k-1} S^k for 2 <= k <= 6 (Toda, "Composition methods", Ch. XIV)
FIRST_UNSTABLE: dict[int, tuple[int, tuple[int, ...]]] = {
    2: (1, ()),
    3: (0, (2,)),
    4: (1, (12,)),
    5: (0, (2,)),
    6: (1, ()),
}

TABLE_SOURCE = "H. Toda, Composition Methods in Homotopy Groups of Spheres (1962)"


def _prime_powers(n: int) -> list[tuple[int, int]]:
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            q = 1
            while n % p == 0:
                n //= p
                q *= p
            out.append((p, q))
        p += 1
    if n > 1:
        out.append((n, n))
    return out


def invariant_factors(torsion: Iterable[int]) -> tuple[int, ...]:
    """Cyclic orders d1 | d2 | ... with the same direct sum as ``torsion``."""
    by_prime: dict[int, list[int]] = {}
    for t in torsion:
        if t < 2:
            raise ValueError(f"torsion orders must be >= 2, got {t}")
        for p, q in _prime_powers(t):
            by_prime.setdefault(p, []).append(q)
    length = max((len(v) for v in by_prime.values()), default=0)
    factors = [1] * length
    for qs in by_prime.values():
        for idx, q in enumerate(sorted(qs, reverse=True)):
            factors[length - 1 - idx] *= q
    return tuple(f for f in factors if f > 1)


class Kind(str, enum.Enum):
    STABLE_STEM = "StableStem"
    SPHERE_GROUP = "SphereGroup"
    KNOT_ISOTOPY = "KnotIsotopy"


@dataclass(frozen=True, order=True)
class Symbol:
    """An unevaluated summand: StableStem(k), SphereGroup(q, k) = pi_k S^q, or KnotIsotopy(p, n)."""

    kind: Kind
    args: tuple[int, ...]

    def __str__(self) -> str:
        if self.kind is Kind.STABLE_STEM:
            return f"π^s_{self.args[0]}"
        if self.kind is Kind.SPHERE_GROUP:
            q, k = self.args
            return f"π_{k} S^{q}"
        p, n = self.args
        return f"π_0 K_{p}^{n}"

    def resolve(self) -> "AbelianGroupExpr | None":
        if self.kind is Kind.STABLE_STEM:
            return stable_stem(self.args[0])
        if self.kind is Kind.SPHERE_GROUP:
            return sphere_group(*self.args, symbolic_ok=False)
        return knot_isotopy(*self.args, symbolic_ok=False)


@dataclass(frozen=True)
class AbelianGroupExpr:
    free_rank: int = 0
    torsion: tuple[int, ...] = ()
    symbolic: tuple[Symbol, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        if self.free_rank < 0:
            raise ValueError("free rank must be non-negative")
        object.__setattr__(self, "torsion", invariant_factors(self.torsion))
        object.__setattr__(self, "symbolic", tuple(sorted(self.symbolic)))

    def __add__(self, other: "AbelianGroupExpr") -> "AbelianGroupExpr":
        return AbelianGroupExpr(
            self.free_rank + other.free_rank, self.torsion + other.torsion, self.symbolic + other.symbolic
        )

    def __mul__(self, k: int) -> "AbelianGroupExpr":
        return AbelianGroupExpr(self.free_rank * k, self.torsion * k, self.symbolic * k)

    __rmul__ = __mul__

    def resolve(self) -> "AbelianGroupExpr":
        out = AbelianGroupExpr(self.free_rank, self.torsion)
        for s in self.symbolic:
            r = s.resolve()
            out = out + (r if r is not None else AbelianGroupExpr(symbolic=(s,)))
        return out

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, AbelianGroupExpr):
            return NotImplemented
        a, b = self.resolve(), other.resolve()
        return (a.free_rank, a.torsion, a.symbolic) == (b.free_rank, b.torsion, b.symbolic)

    def __hash__(self) -> int:
        r = self.resolve()
        return hash((r.free_rank, r.torsion, r.symbolic))

    def is_zero(self) -> bool:
        r = self.resolve()
        return r.free_rank == 0 and not r.torsion and not r.symbolic

    def is_resolved(self) -> bool:
        return not self.symbolic

    def min_generators(self) -> int | None:
        """Size of a minimal generating set, or None if a summand is still symbolic."""
        r = self.resolve()
        if r.symbolic:
            return None
        return r.free_rank + len(r.torsion)

    def __str__(self) -> str:
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        for t, k in sorted(Counter(self.torsion).items()):
            parts.append(f"Z/{t}" if k == 1 else f"(Z/{t})^{k}")
        for s, k in sorted(Counter(self.symbolic).items()):
            parts.append(str(s) if k == 1 else f"({s})^{k}")
        return " ⊕ ".join(parts) if parts else "0"

    def to_json(self) -> dict:
        return {
            "free_rank": self.free_rank,
            "torsion": list(self.torsion),
            "symbolic": [{"kind": s.kind.value, "args": list(s.args), "text": str(s)} for s in self.symbolic],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "AbelianGroupExpr":
        syms = tuple(Symbol(Kind(s["kind"]), tuple(s["args"])) for s in data.get("symbolic", []))
        return cls(data.get("free_rank", 0), tuple(data.get("torsion", [])), syms)


ZERO = AbelianGroupExpr()
Z = AbelianGroupExpr(1)


def cyclic(order: int) -> AbelianGroupExpr:
    return AbelianGroupExpr(0, (order,))


def _from_table(entry: tuple[int, tuple[int, ...]]) -> AbelianGroupExpr:
    return AbelianGroupExpr(entry[0], entry[1])


def stable_stem(k: int) -> AbelianGroupExpr | None:
    if k < 0:
        return ZERO
    if k in STABLE_STEMS:
        return _from_table(STABLE_STEMS[k])
    return None


def sphere_group(q: int, k: int, symbolic_ok: bool = True) -> AbelianGroupExpr | None:
    """pi_k S^q from the bundled tables; symbolic (or None) where the tables are silent."""
    if q < 1 or k < 0:
        raise ValueError("sphere groups need q >= 1 and k >= 0")
    found: AbelianGroupExpr | None = None
    if k < q:
        found = ZERO
    elif k == q:
        found = Z
    elif q == 1:
        found = ZERO
    elif k <= 2 * q - 2:
        found = stable_stem(k - q)
    elif k == 2 * q - 1 and q in FIRST_UNSTABLE:
        found = _from_table(FIRST_UNSTABLE[q])
    if found is None and symbolic_ok:
        return AbelianGroupExpr(symbolic=(Symbol(Kind.SPHERE_GROUP, (q, k)),))
    return found


def knot_isotopy(p: int, n: int, symbolic_ok: bool = True) -> AbelianGroupExpr | None:
    """Isotopy classes of long p-knots in R^n: trivial when 2n - 3p >= 4, otherwise left open."""
    if 2 * n - 3 * p >= 4:
        return ZERO
    if symbolic_ok:
        return AbelianGroupExpr(symbolic=(Symbol(Kind.KNOT_ISOTOPY, (p, n)),))
    return None


# -- two-component links ------------------------------------------------------


def range_check_C(p: int, q: int, n: int, i: int) -> bool:
    return 1 <= p <= q <= n - 3 and 0 <= i <= 2 * n - p - 2 * q - 4


def _violations_C(p: int, q: int, n: int, i: int) -> list[str]:
    out = []
    if p < 1:
        out.append("1 <= p")
    if p > q:
        out.append("p <= q")
    if q > n - 3:
        out.append("q <= n-3")
    if i < 0:
        out.append("0 <= i")
    if i > 2 * n - p - 2 * q - 4:
        out.append(f"i <= 2n-p-2q-4 = {2 * n - p - 2 * q - 4}")
    return out


def group_C(p: int, q: int, n: int, i: int) -> AbelianGroupExpr:
    """pi_i of long links R^p ⊔ R^q in R^n: a sphere group plus a knot group."""
    bad = _violations_C(p, q, n, i)
    if bad:
        raise RangeError("outside the range: violates " + ", ".join(bad))
    return sphere_group(n - q - 1, i + p) + knot_isotopy(i + q, i + n)


def boundary_C(p: int, q: int, n: int, i: int) -> bool:
    """Whether (p, q, n, i) sits where the first graphing map is only known to be onto."""
    return range_check_C(p, q, n, i) and p < q and i == 2 * n - p - 2 * q - 4


# -- many components ----------------------------------------------------------


def range_check_D(p_list: Sequence[int], n: int, ell: int, i: int) -> bool:
    """Whether every class of pi_i comes from sublinks with at most ``ell`` components."""
    p_list = list(p_list)
    if not p_list:
        raise RangeError("need at least one component")
    if p_list != sorted(p_list):
        raise RangeError("component dimensions must be sorted ascending")
    if p_list[0] < 1 or p_list[-1] > n - 3:
        raise RangeError("component dimensions must lie in [1, n-3]")
    m = len(p_list)
    if not 0 <= ell <= m:
        return False
    bound = 1 - p_list[0] + sum(n - pk - 2 for pk in p_list[m - ell:])
    return 0 <= i < bound


class Status(str, enum.Enum):
    ISOMORPHIC = "ISOMORPHIC"
    SURJECTIVE_ONLY = "SURJECTIVE-ONLY"
    INAPPLICABLE = "INAPPLICABLE"


def group_E_summands(p: int, n: int, m: int) -> tuple[AbelianGroupExpr, AbelianGroupExpr, int]:
    """(torsion-and-free part, sphere group, number of sphere copies) before they are added up."""
    if m not in (2, 3):
        raise RangeError("only 2- and 3-component links are covered")
    if not 1 <= p <= n - 3:
        raise RangeError("need 1 <= p <= n-3")
    sphere = sphere_group(n - p - 1, 2 * n - 2 * p - 3)
    odd = (n - p) % 2 == 1
    if m == 2:
        return (AbelianGroupExpr(3) if odd else AbelianGroupExpr(0, (2, 2, 2))), sphere, 1
    return (AbelianGroupExpr(7) if odd else AbelianGroupExpr(1, (2,) * 6)), sphere, 3


def group_E(p: int, n: int, m: int) -> tuple[AbelianGroupExpr, Status]:
    """pi_{2n-3p-3} of equidimensional m-component links (m = 2 or 3) and how far graphing is bijective."""
    base, sphere, copies = group_E_summands(p, n, m)
    group = base + sphere * copies
    if m == 2:
        status = Status.ISOMORPHIC if p >= 2 else Status.SURJECTIVE_ONLY
    else:
        status = Status.ISOMORPHIC if p >= 3 else Status.SURJECTIVE_ONLY if p == 2 else Status.INAPPLICABLE
    return group, status


class Applicability(str, enum.Enum):
    EXACT = "EXACT"
    MOD_TORSION = "MOD-TORSION"
    CONJECTURAL = "CONJECTURAL"


@dataclass(frozen=True)
class GeneratorClass:
    kind: str
    count: int | None
    description: str


@dataclass(frozen=True)
class Inventory:
    m: int
    p: int
    n: int
    degree: int
    classes: tuple[GeneratorClass, ...]
    applicability: Applicability

    def sizes(self) -> dict[str, int | None]:
        return {c.kind: c.count for c in self.classes}

    def total(self) -> int | None:
        counts = [c.count for c in self.classes]
        return None if None in counts else sum(counts)

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "p": self.p,
            "n": self.n,
            "degree": self.degree,
            "applicability": self.applicability.value,
            "classes": [{"kind": c.kind, "count": c.count, "description": c.description} for c in self.classes],
            "total": self.total(),
        }

    def render(self) -> str:
        lines = [f"generators of pi_{self.degree} for {self.m} components of dimension {self.p} in R^{self.n}"
                 f" [{self.applicability.value}]"]
        for c in self.classes:
            count = "?" if c.count is None else str(c.count)
            lines.append(f"  {count:>3}  {c.kind}: {c.description}")
        total = self.total()
        lines.append(f"  total: {'symbolic' if total is None else total}")
        return "\n".join(lines)


def generators_F(m: int, p: int, n: int) -> Inventory:
    """Generating set of pi_{2n-3p-3} of equidimensional m-component long links."""
    if m < 2:
        raise RangeError("need at least two components")
    if not 1 <= p <= n - 3:
        raise RangeError("need 1 <= p <= n-3")
    degree = 2 * n - 3 * p - 3
    if degree < 0:
        raise RangeError("need 2n-3p-3 >= 0")
    q, k = n - p - 1, 2 * n - 2 * p - 3
    sphere = sphere_group(q, k)
    pairs, triples = comb(m, 2), comb(m, 3)

    if m == 2 and p == 1:
        flag = Applicability.MOD_TORSION
        per_pair = 1 if (n - p) % 2 == 1 else 0
        sphere_desc = f"graphed Whitehead square of the identity of S^{q}"
    else:
        flag = Applicability.EXACT if (m == 2 and p >= 2) or (m >= 3 and p >= 3) else Applicability.CONJECTURAL
        per_pair = sphere.min_generators()
        sphere_desc = f"graphed minimal generating set of π_{k} S^{q} = {sphere}"

    classes = [
        GeneratorClass("knot_inclusions", m, f"inclusions of a generator of pi_{degree} of long {p}-knots"),
        GeneratorClass("joined_borromean", pairs, "graphed parametrized Borromean class with two components joined"),
        GeneratorClass("sphere_classes", None if per_pair is None else per_pair * pairs, sphere_desc),
        GeneratorClass("graphed_borromean", triples, "graphed parametrized Borromean class"),
    ]
    return Inventory(m, p, n, degree, tuple(classes), flag)
