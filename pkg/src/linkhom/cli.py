"""Command-line front end: ``linkhom <command> ...`` (also ``python -m linkhom``)."""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

from . import chords, complex as cx, groups, singular
from .diagram import DiagramError, DiagramSum, LinkDiagram, Parity, parse_dsl, place_on_strands


class UsageError(ValueError):
    pass


@dataclass
class Check:
    name: str
    ok: bool
    detail: str = ""


# -- argument helpers ---------------------------------------------------------


def _degree(text: str) -> tuple[int, int]:
    try:
        a, b = (int(x) for x in text.replace(" ", "").strip("()").split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"degree must look like 2,-6 (got {text!r})") from exc
    return a, b


def _parities(value: str) -> list[Parity]:
    return list(Parity) if value == "both" else [Parity.parse(value)]


def _read_text(spec: str) -> str | None:
    path = Path(spec)
    if path.suffix in {".json", ".txt", ".dsl"} or path.exists():
        if not path.exists():
            raise UsageError(f"no such file: {spec}")
        return path.read_text()
    return None


def _split_placement(spec: str) -> tuple[str, list[int] | None, int | None]:
    """``name@1,3/3`` -> ("name", [1, 3], 3)."""
    if "@" not in spec:
        return spec, None, None
    name, _, where = spec.partition("@")
    strands, _, total = where.partition("/")
    try:
        targets = [int(x) for x in strands.split(",")]
        m_total = int(total) if total else None
    except ValueError as exc:
        raise UsageError(f"bad placement {where!r}; expected e.g. @1,3/3") from exc
    return name, targets, m_total


def resolve_cocycle(spec: str, parity: Parity) -> DiagramSum:
    text = _read_text(spec)
    if text is not None:
        data = json.loads(text)
        s = DiagramSum.from_json(data)
        if s.parity is not parity:
            raise UsageError(f"{spec} holds a {s.parity.value}-parity sum")
        return s
    name, targets, m_total = _split_placement(spec)
    if name not in cx.COCYCLE_NAMES:
        raise UsageError(f"unknown cocycle {name!r}; expected one of {', '.join(cx.COCYCLE_NAMES)}")
    s = cx.builtin_cocycle(name, parity)
    if targets is not None:
        s = place_on_strands(s, m_total or max(targets), targets)
    return s


def resolve_link(spec: str) -> singular.SingularLink:
    text = _read_text(spec)
    if text is not None:
        text = text.strip()
        return singular.SingularLink.from_json(json.loads(text)) if text.startswith("{") else singular.parse_link(text)
    if "strands=" in spec:
        return singular.parse_link(spec)
    name, targets, m_total = _split_placement(spec)
    try:
        link = singular.family(name)
    except KeyError as exc:
        raise UsageError(str(exc.args[0])) from exc
    if targets is not None:
        link = singular.include_on_strands(link, m_total or max(targets), targets)
    return link


def resolve_diagram(spec: str, parity: Parity | None) -> DiagramSum:
    text = _read_text(spec)
    if text is None:
        if "strands=" in spec:
            d = parse_dsl(spec)
            return DiagramSum.of(d)
        if parity is None:
            raise UsageError("--parity is needed to resolve a named cocycle")
        return resolve_cocycle(spec, parity)
    text = text.strip()
    if text.startswith("{"):
        data = json.loads(text)
        if "terms" in data:
            return DiagramSum.from_json(data)
        return DiagramSum.of(LinkDiagram.from_json(data))
    return DiagramSum.of(parse_dsl(text))


# -- output -------------------------------------------------------------------


class Output:
    def __init__(self, fmt: str, out: str | None):
        self.fmt = fmt
        self.out = out
        self.lines: list[str] = []

    def emit(self, text_lines: list[str] | str, payload: object) -> None:
        if self.fmt == "json":
            body = json.dumps(payload, indent=2, ensure_ascii=False)
        else:
            body = text_lines if isinstance(text_lines, str) else "\n".join(text_lines)
        if self.out:
            Path(self.out).write_text(body + "\n")
        else:
            print(body)


def _sum_lines(s: DiagramSum) -> list[str]:
    if s.is_zero():
        return ["  0"]
    return [f"  {k:+d}  {c.to_dsl()}" for c, k in s]


# -- commands -----------------------------------------------------------------


def _cocycle_checks(names: list[str], parities: list[Parity]) -> list[Check]:
    out = []
    for p in parities:
        for name in names:
            try:
                ok = cx.is_cocycle(cx.builtin_cocycle(name, p))
                out.append(Check(f"delta({name}) = 0 [{p.value}]", ok))
            except (DiagramError, cx.NotCompletable) as exc:
                out.append(Check(f"delta({name}) = 0 [{p.value}]", False, str(exc)))
    return out


def _delta_squared_checks(max_m: int, max_t: int, parities: list[Parity]) -> list[Check]:
    out = []
    for p in parities:
        bad = []
        count = 0
        for m in range(1, max_m + 1):
            for t in range(1, max_t + 1):
                for deg in cx.degrees_in_order(m, t):
                    src = cx.enumerate_diagrams(m, t, deg, p)
                    if not len(src):
                        continue
                    mid = cx.enumerate_diagrams(m, t, (deg[0], deg[1] + 1), p)
                    top = cx.enumerate_diagrams(m, t, (deg[0], deg[1] + 2), p)
                    count += len(src)
                    if not (cx.delta_matrix(mid, top) @ cx.delta_matrix(src, mid)).is_zero():
                        bad.append(f"m={m} t={t} degree={deg}")
        out.append(Check(f"delta^2 = 0 on {count} diagrams, m<={max_m}, t<={max_t} [{p.value}]", not bad, "; ".join(bad)))
    return out


def reproduction_checks() -> list[Check]:
    """Every numerical claim reproduced by the package, evaluated afresh."""
    checks: list[Check] = []
    fam = singular.builtin_families()
    for p in Parity:
        sign = -1 if p is Parity.ODD else 1
        b = cx.builtin_cocycles(p)
        eta = {ij: place_on_strands(b["eta"], 3, ij) for ij in ((1, 2), (1, 3), (2, 3))}
        table = [
            ("<mu,F>", cx.builtin_cocycle("mu", p), "f", 1),
            ("<nu1,F>", b["nu1"], "f", 1),
            ("<nu2,F>", b["nu2"], "f", 0),
            ("<nu3,F>", b["nu3"], "f", 0),
            *[(f"<rho{i}{j}*eta,F>", s, "f", 0) for (i, j), s in eta.items()],
            ("<nu1,F'>", b["nu1"], "f'", sign),
            ("<mu,F'>", b["mu"], "f'", 0),
            ("<eta,L>", b["eta"], "l", 1),
            ("<lambda,L>", b["lambda"], "l", 0),
            ("<eta,L'>", b["eta"], "l'", -1 if p is Parity.ODD else 0),
            ("<lambda,L'>", b["lambda"], "l'", 1),
            ("<eta,H>", b["eta"], "h", 1),
            ("<lambda,H>", b["lambda"], "h", 0),
            ("<rho1*kappa,H>", place_on_strands(b["kappa"], 2, [1]), "h", 0),
            ("<rho2*kappa,H>", place_on_strands(b["kappa"], 2, [2]), "h", 0),
            ("<kappa,K>", b["kappa"], "k", 1),
            ("<kappa,K'>", b["kappa"], "k'", 0),
        ]
        for label, s, link, want in table:
            got = singular.pair(s, fam[link])
            checks.append(Check(f"{label} = {want} [{p.value}]", got == want, f"got {got}"))
        rows = [place_on_strands(b["kappa"], 2, [1]), place_on_strands(b["kappa"], 2, [2]), b["eta"], b["lambda"]]
        cols = [singular.include_on_strands(fam["k"], 2, [1]), singular.include_on_strands(fam["k"], 2, [2]),
                fam["h"], fam["l'"]]
        _, det = singular.pairing_matrix(rows, cols)
        checks.append(Check(f"|det| of the 2-strand pairing matrix = 1 [{p.value}]", abs(det) == 1, f"det {det}"))
        for m in (2, 3):
            want = {2: 1, 3: 7}[m]
            got = chords.dim_degree2(m, p)[0]
            checks.append(Check(f"dim of degree-2 chord words, m={m} = {want} [{p.value}]", got == want, f"got {got}"))
        for m in (1, 2, 3):
            n = len(cx.enumerate_diagrams(m, 2, (2, -7), p))
            checks.append(Check(f"no diagrams in degree (2,-7), m={m} [{p.value}]", n == 0, f"found {n}"))
    k_part = cx.builtin_chord_part("kappa", Parity.ODD)
    joined = singular.chord_diagram_of(singular.join_repeated(fam["f"], 2))
    joined_p = singular.chord_diagram_of(singular.join_repeated(fam["f'"], 2))
    checks.append(Check("join^2(f) carries the chords of kappa", k_part.coefficient(joined) != 0 and len(k_part) == 1))
    checks.append(Check("join^2(f') does not", k_part.coefficient(joined_p) == 0))
    checks.append(Check("Vassiliev order-1 invariants of 2-component links = 1", chords.vassiliev_dims(2, 1) == 1))
    checks.append(Check("Vassiliev order-2 invariants of 3-component links = 7", chords.vassiliev_dims(3, 2) == 7))
    e1, s1 = groups.group_E(2, 5, 2)
    checks += [
        Check("group_C(1,1,4,1) = Z", groups.group_C(1, 1, 4, 1) == groups.Z),
        Check("group_C(1,2,6,0) = 0", groups.group_C(1, 2, 6, 0).is_zero()),
        Check("group_E(2,5,2) = Z^3 ⊕ Z, isomorphic",
              e1 == groups.AbelianGroupExpr(3) + groups.Z and s1 is groups.Status.ISOMORPHIC),
        Check("group_E(1,4,2) is surjective-only", groups.group_E(1, 4, 2)[1] is groups.Status.SURJECTIVE_ONLY),
    ]
    sizes = groups.generators_F(2, 2, 5).sizes()
    nonzero = sorted(v for v in sizes.values() if v)
    checks.append(Check("generators_F(2,2,5) sizes {2,1,1}", nonzero == [1, 1, 2], str(sizes)))
    return checks


def cmd_verify_cocycles(args, out: Output) -> int:
    names = args.name or list(cx.COCYCLE_NAMES)
    for n in names:
        if n not in cx.COCYCLE_NAMES:
            raise UsageError(f"unknown cocycle {n!r}; expected one of {', '.join(cx.COCYCLE_NAMES)}")
    parities = _parities(args.parity)
    start = time.perf_counter()
    checks = _cocycle_checks(names, parities)
    if args.full:
        checks += _delta_squared_checks(3, 3, parities)
        checks += reproduction_checks()
    elapsed = time.perf_counter() - start
    lines = []
    if not args.full:
        header = "cocycle  " + "  ".join(p.value for p in parities)
        lines.append(header)
        for n in names:
            row = [("pass" if c.ok else "FAIL") for c in checks if c.name.startswith(f"delta({n})")]
            lines.append(f"{n:<8} " + "  ".join(f"{r:<4}" for r in row))
    else:
        for c in checks:
            lines.append(f"{'PASS' if c.ok else 'FAIL'}  {c.name}" + (f"  ({c.detail})" if not c.ok and c.detail else ""))
    passed = sum(c.ok for c in checks)
    lines.append(f"{passed}/{len(checks)} checks passed in {elapsed:.1f}s")
    out.emit(lines, {
        "checks": [{"name": c.name, "ok": c.ok, "detail": c.detail} for c in checks],
        "passed": passed,
        "total": len(checks),
        "failures": [c.name for c in checks if not c.ok],
    })
    return 0 if passed == len(checks) else 1


def cmd_enumerate(args, out: Output) -> int:
    basis = cx.enumerate_diagrams(args.m, args.t, args.degree, args.parity, args.cache_dir)
    lines = [f"{len(basis)} diagrams, m={args.m}, order {args.t}, degree {args.degree} [{basis.parity.value}]"]
    lines += [f"  [{c.digest}] {c.to_dsl()}" for c in basis]
    out.emit(lines, basis.to_json())
    return 0


def cmd_rank(args, out: Output) -> int:
    src = cx.enumerate_diagrams(args.m, args.t, args.degree, args.parity, args.cache_dir)
    dst = cx.enumerate_diagrams(args.m, args.t, (args.degree[0], args.degree[1] + 1), args.parity, args.cache_dir)
    mat = cx.delta_matrix(src, dst)
    kernel = cx.cocycle_basis(args.m, args.t, args.degree, args.parity, args.cache_dir)
    lines = [
        f"delta: {len(src)} -> {len(dst)} diagrams, rank {mat.rank()}, kernel dimension {len(kernel)}",
    ]
    for i, s in enumerate(kernel, 1):
        lines.append(f"cocycle {i}:")
        lines += _sum_lines(s)
    out.emit(lines, {
        "source_dimension": len(src),
        "target_dimension": len(dst),
        "rank": mat.rank(),
        "kernel_dimension": len(kernel),
        "kernel": [s.to_json() for s in kernel],
        "matrix": mat.to_json(),
    })
    return 0


def cmd_delta(args, out: Output) -> int:
    parity = Parity.parse(args.parity) if args.parity != "both" else None
    s = resolve_diagram(args.input, parity)
    d = cx.delta(s)
    lines = ["delta of:"] + _sum_lines(s) + ["is:"] + _sum_lines(d)
    out.emit(lines, {"input": s.to_json(), "delta": d.to_json(), "is_cocycle": d.is_zero()})
    return 0


def cmd_pair(args, out: Output) -> int:
    results = []
    for p in _parities(args.parity):
        s = resolve_cocycle(args.cocycle, p)
        link = resolve_link(args.link)
        results.append((p, singular.pair(s, link)))
    lines = [f"<{args.cocycle}, {args.link}> = {v} [{p.value}]" for p, v in results]
    out.emit(lines, {p.value: v for p, v in results})
    return 0


DEFAULT_ROWS = ["kappa@1/2", "kappa@2/2", "eta", "lambda"]
DEFAULT_COLS = ["k@1/2", "k@2/2", "h", "l'"]


def cmd_pairing_matrix(args, out: Output) -> int:
    rows = args.cocycles or DEFAULT_ROWS
    cols = args.links or DEFAULT_COLS
    payload, lines = {}, []
    for p in _parities(args.parity):
        mat, det = singular.pairing_matrix([resolve_cocycle(r, p) for r in rows], [resolve_link(c) for c in cols])
        width = max(len(c) for c in cols) + 2
        label = max(len(r) for r in rows + [f"[{p.value}]"]) + 1
        lines.append(f"{f'[{p.value}]':<{label}}" + "".join(f"{c:>{width}}" for c in cols))
        for i, r in enumerate(rows):
            lines.append(f"{r:<{label}}" + "".join(f"{mat[i, j]:>{width}}" for j in range(len(cols))))
        if det is not None:
            lines.append(f"determinant {det}")
        payload[p.value] = {"rows": rows, "cols": cols, "matrix": mat.to_dense(), "determinant": det}
    out.emit(lines, payload)
    return 0


def cmd_join(args, out: Output) -> int:
    link = singular.join_repeated(resolve_link(args.link), args.times)
    diagram = singular.chord_diagram_of(link)
    lines = [link.to_dsl(), f"chords {list(diagram.edges)} on strands of sizes {list(diagram.strand_sizes)}"]
    out.emit(lines, {"link": link.to_json(), "chords": [list(e) for e in diagram.edges]})
    return 0


def cmd_chord_dim(args, out: Output) -> int:
    payload, lines = {}, []
    for p in _parities(args.parity):
        dim, basis = chords.dim_degree2(args.m, p)
        rels = chords.relations_degree2(args.m, p) if args.m >= 2 else []
        lines.append(f"m={args.m} [{p.value}]: dimension {dim}; basis {', '.join(map(str, basis))}")
        if args.relations:
            lines += [f"  relation: {r}" for r in rels]
        payload[p.value] = {
            "dimension": dim,
            "basis": [str(w) for w in basis],
            "relations": [r.to_json() for r in rels],
        }
    out.emit(lines, payload)
    return 0


def cmd_vassiliev(args, out: Output) -> int:
    dim = chords.vassiliev_dims(args.m, args.r)
    out.emit([f"order-{args.r} quotient for {args.m}-component links: dimension {dim}"], {"dimension": dim})
    return 0


def cmd_groups(args, out: Output) -> int:
    theorem = args.theorem.upper()
    vals = args.params
    try:
        if theorem == "C":
            _need(vals, 4, "C p q n i")
            g = groups.group_C(*vals)
            note = " (first graphing map only known to be onto here)" if groups.boundary_C(*vals) else ""
            out.emit([f"{g}{note}"], {"group": g.to_json(), "text": str(g), "boundary": groups.boundary_C(*vals)})
        elif theorem == "D":
            if len(vals) < 4:
                raise UsageError("usage: groups D n ell i p1 [p2 ...]")
            n, ell, i, *plist = vals
            ok = groups.range_check_D(plist, n, ell, i)
            text = (f"every class comes from sublinks with at most {ell} components" if ok else "out of range")
            out.emit([text], {"in_range": ok})
            return 0 if ok else 1
        elif theorem == "E":
            _need(vals, 3, "E p n m")
            p, n, m = vals
            g, status = groups.group_E(p, n, m)
            base, sphere, copies = groups.group_E_summands(p, n, m)
            text = str(sphere)
            if copies > 1:
                text = f"({text})^{copies}" if "⊕" in text or "^" in text else f"{text}^{copies}"
            raw = f"{base} ⊕ {text}"
            short = {groups.Status.ISOMORPHIC: "iso", groups.Status.SURJECTIVE_ONLY: "onto only"}.get(status, "no claim")
            out.emit([f"{raw} ({short})"],
                     {"group": g.to_json(), "text": str(g), "summands": raw, "status": status.value})
        elif theorem == "F":
            _need(vals, 3, "F m p n")
            inv = groups.generators_F(*vals)
            out.emit(inv.render(), inv.to_json())
        else:
            raise UsageError("theorem must be one of C, D, E, F")
    except groups.RangeError as exc:
        out.emit([f"out of range: {exc}"], {"error": str(exc)})
        return 1
    return 0


def _need(vals, k, usage):
    if len(vals) != k:
        raise UsageError(f"usage: groups {usage}")


# -- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["text", "json"], default="text")
    common.add_argument("--out", help="write the report to this file instead of stdout")
    common.add_argument("--cache-dir", help="basis cache directory (default: $LINKHOM_CACHE, else none)")

    parser = argparse.ArgumentParser(prog="linkhom", description=__doc__, parents=[common])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, func: Callable, help_text: str, parity_default: str | None = "odd"):
        sp = sub.add_parser(name, help=help_text, parents=[common])
        if parity_default is not None:
            sp.add_argument("--parity", choices=["odd", "even", "both"], default=parity_default)
        sp.set_defaults(func=func)
        return sp

    sp = add("verify-cocycles", cmd_verify_cocycles, "check that the built-in cocycles are closed", "both")
    sp.add_argument("--name", action="append", help="restrict to this cocycle (repeatable)")
    sp.add_argument("--full", action="store_true", help=argparse.SUPPRESS)

    for name, func, text in (("enumerate", cmd_enumerate, "list the diagrams in one grading"),
                             ("rank", cmd_rank, "kernel of the coboundary in one grading")):
        sp = add(name, func, text)
        sp.add_argument("--m", type=int, required=True, help="number of strands")
        sp.add_argument("--t", type=int, required=True, help="order")
        sp.add_argument("--degree", type=_degree, required=True, help="degree pair a,b (degree a*n+b)")

    sp = add("delta", cmd_delta, "coboundary of a diagram, a sum file, or a built-in cocycle")
    sp.add_argument("input", help="DSL text, a .json/.dsl file, or a cocycle name")

    sp = add("pair", cmd_pair, "pair a cocycle with a singular link", "both")
    sp.add_argument("cocycle", help="cocycle name (optionally name@strands/total) or JSON file")
    sp.add_argument("link", help="family name (optionally name@strands/total), link DSL, or file")

    sp = add("pairing-matrix", cmd_pairing_matrix, "matrix of pairings and its determinant", "both")
    sp.add_argument("--cocycles", nargs="+")
    sp.add_argument("--links", nargs="+")

    sp = add("join", cmd_join, "join the last two strands of a singular link", None)
    sp.add_argument("link")
    sp.add_argument("--times", type=int, default=1)

    sp = add("chord-dim", cmd_chord_dim, "dimension of degree-2 chord words modulo relations", "both")
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--relations", action="store_true", help="also print the relations")

    sp = add("vassiliev", cmd_vassiliev, "classical finite-type invariant counts", None)
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--r", type=int, required=True)

    sp = add("groups", cmd_groups, "homotopy group formulas: C p q n i | D n ell i p1.. | E p n m | F m p n", None)
    sp.add_argument("theorem", choices=["C", "D", "E", "F", "c", "d", "e", "f"])
    sp.add_argument("params", type=int, nargs="*")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "parity", None) in ("odd", "even") and args.command in {"enumerate", "rank"}:
        args.parity = Parity.parse(args.parity)
    out = Output(args.format, args.out)
    try:
        return args.func(args, out)
    except (UsageError, KeyError) as exc:
        parser.error(str(exc.args[0]) if exc.args else str(exc))
    except cx.CapacityError as exc:
        print(f"capacity: {exc}", file=sys.stderr)
        return 2
    except DiagramError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 1


if __name__ == "__main__":
    sys.exit(main())
