"""Independent re-verification of factorisation certificates.

Everything here is a pure table computation over the certificate and the
presentation: the checks recompute the extension tables and compare
exact integer tables, so a passing report means the defining equations
hold on the nose, not up to tolerance.  Failures never raise — they
become report entries naming the violated equation and the witnessing
element — so a corrupted certificate yields a deterministic, complete
list of everything wrong with it.

The two oracles check the engine against definitions that do not go
through the engine's own construction: ``oracle_kappa`` enumerates (or
counts, with exact big-integer arithmetic, when enumeration is beyond
reach) commuting squares out of the one-step extension and lifting
structures on the original arrow, and confirms they correspond one to
one; ``oracle_initiality`` confirms the extracted algebra maps uniquely
into any supplied algebra under any boundary square.
"""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass
from typing import Optional

from .arrows import ArrowObject, CommSquare, square_compose
from .chain import FactorisationResult
from .errors import NonNaturalLifting, SizeBudgetExceeded
from .finset import FiniteMap, compose, identity
from .step import (
    DoubleEngine,
    OneStepLifting,
    SizeBudget,
    StepEngine,
    _image_reps,
    enumerate_problems,
    mediate,
    restrict_square,
)


# ---------------------------------------------------------------------------
# certificates and reports


@dataclass
class Certificate:
    """A claimed factorisation with its lifting algebra, as produced by the
    chain (or supplied externally for auditing)."""

    pres: object
    mode: str
    input: ArrowObject
    left: FiniteMap
    right: ArrowObject
    beta0: FiniteMap
    lift_table: dict
    stage: Optional[int] = None
    trace_sizes: Optional[list] = None

    @classmethod
    def from_result(cls, pres, result: FactorisationResult) -> "Certificate":
        sizes = result.trace.carrier_sizes if result.trace is not None else None
        return cls(
            pres=pres,
            mode=result.mode,
            input=result.input,
            left=result.left,
            right=result.right,
            beta0=result.beta0,
            lift_table=dict(result.lift_table),
            stage=result.stage,
            trace_sizes=sizes,
        )


@dataclass(frozen=True)
class ReportEntry:
    label: str
    ok: bool
    detail: str = ""


@dataclass(frozen=True)
class Report:
    name: str
    entries: tuple

    @property
    def ok(self) -> bool:
        return all(e.ok for e in self.entries)

    def failures(self) -> list:
        return [e for e in self.entries if not e.ok]

    def to_payload(self) -> dict:
        return {
            "name": self.name,
            "ok": self.ok,
            "entries": [
                {"label": e.label, "ok": e.ok, "detail": e.detail} for e in self.entries
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_payload(), sort_keys=True, separators=(",", ":"))

    @classmethod
    def merged(cls, name: str, reports) -> "Report":
        entries = []
        for r in reports:
            entries.extend(r.entries)
        return cls(name, tuple(entries))


def _entry_ok(label: str, count: int, unit: str = "instances") -> ReportEntry:
    return ReportEntry(label, True, f"checked {count} {unit}")


# ---------------------------------------------------------------------------
# algebra checks


def _boundary_problems(cert: Certificate) -> list:
    out = []
    if cert.mode not in ("plain", "special"):
        out.append(f"unknown mode {cert.mode!r}")
    if cert.mode == "special" and getattr(cert.pres, "kind", "plain") != "double":
        out.append("special mode requires a presentation with vertical composition")
    if cert.input.bot != cert.right.bot:
        out.append("input and extracted arrow have different codomains")
    if cert.left.dom != cert.input.top or cert.left.cod != cert.right.top:
        out.append("left factor boundaries do not match")
    if cert.beta0.cod != cert.right.top:
        out.append("algebra map does not land in the middle object")
    for key, val in cert.lift_table.items():
        if not isinstance(val, FiniteMap) or val.cod != cert.right.top:
            out.append(f"lift table entry {key} does not land in the middle object")
            break
    return out


def _algebra_violations(pres, mode: str, g: ArrowObject, beta0: FiniteMap,
                        engine: StepEngine, dengine) -> list:
    """Violated algebra laws for the claimed structure map ``beta0`` on
    ``g``, as (label, detail) pairs."""
    out = []
    st = engine.step_tables(g)
    if beta0.dom.size != st.size:
        return [("boundary", f"algebra map domain {beta0.dom.size} != extension carrier {st.size}")]
    unit = compose(beta0, st.inclusion)
    for v in range(g.top.size):
        if unit.table[v] != v:
            out.append(("unit-law", f"beta(unit({v})) = {unit.table[v]} != {v}"))
    over = compose(g.map, beta0)
    for v in range(st.size):
        if over.table[v] != st.extended.map.table[v]:
            out.append(
                (
                    "boundary",
                    f"algebra map is not over the codomain at {v}: "
                    f"{over.table[v]} != {st.extended.map.table[v]}",
                )
            )
    if out:
        return out
    if mode == "special" and dengine is not None:
        beta = CommSquare(st.extended, g, beta0, identity(g.bot))
        gam = dengine.compose_comparison(g)
        t_beta = engine.extend(beta)
        lam = dengine.iterate_comparison(g)
        lhs = square_compose(beta, gam)
        rhs = square_compose(beta, square_compose(t_beta, lam))
        for v in range(lhs.top.dom.size):
            if lhs.top.table[v] != rhs.top.table[v]:
                out.append(
                    (
                        "special-algebra-square",
                        f"pair element {v}: composite route {lhs.top.table[v]} "
                        f"!= two-stage route {rhs.top.table[v]}",
                    )
                )
    return out


def check_algebra(cert: Certificate, budget: Optional[SizeBudget] = None) -> Report:
    """Recompute the extension of the extracted arrow and verify the unit
    law, the factorisation identity, the agreement of the lift table with
    the algebra map, and (special mode) the pair-composition square."""
    entries = []
    boundary = _boundary_problems(cert)
    for b in boundary:
        entries.append(ReportEntry("boundary", False, b))
    if boundary:
        return Report("check-algebra", tuple(entries))
    entries.append(_entry_ok("boundary", 1, "certificates"))

    engine = StepEngine(cert.pres, budget)
    dengine = None
    if cert.mode == "special":
        dengine = DoubleEngine(cert.pres, budget, single=engine)
    st = engine.step_tables(cert.right)

    recomposed = compose(cert.right.map, cert.left)
    bad = [x for x in range(cert.input.top.size) if recomposed.table[x] != cert.input.map.table[x]]
    for x in bad:
        entries.append(
            ReportEntry(
                "factorisation",
                False,
                f"element {x}: R(L({x})) = {recomposed.table[x]} != f({x}) = {cert.input.map.table[x]}",
            )
        )
    if not bad:
        entries.append(_entry_ok("factorisation", cert.input.top.size, "elements"))

    laws = _algebra_violations(cert.pres, cert.mode, cert.right, cert.beta0, engine, dengine)
    law_labels = {label for label, _ in laws}
    for label, detail in laws:
        entries.append(ReportEntry(label, False, detail))
    if "boundary" in law_labels:
        return Report("check-algebra", tuple(entries))
    if "unit-law" not in law_labels:
        entries.append(_entry_ok("unit-law", cert.right.top.size, "elements"))
    if cert.mode == "special" and "special-algebra-square" not in law_labels:
        entries.append(_entry_ok("special-algebra-square", 1, "equations"))
    if cert.mode == "plain":
        entries.append(ReportEntry("special-algebra-square", True, "skipped (plain mode)"))

    checked = 0
    consistent = True
    for p in st.iter_problems():
        expected = compose(cert.beta0, st.cell(p.key))
        got = cert.lift_table.get(p.key)
        if got is None:
            entries.append(
                ReportEntry("filler-consistency", False, f"missing entry for problem {p.key}")
            )
            consistent = False
        elif got.table != expected.table:
            entries.append(
                ReportEntry(
                    "filler-consistency",
                    False,
                    f"problem {p.key}: table {got.table} != algebra route {expected.table}",
                )
            )
            consistent = False
        checked += 1
    if consistent:
        entries.append(_entry_ok("filler-consistency", checked, "problems"))
    return Report("check-algebra", tuple(entries))


# ---------------------------------------------------------------------------
# compatibility checks


def check_compat(cert: Certificate) -> Report:
    """Enumerate every lifting problem of every generator against the
    extracted arrow and check the fill equations, the square
    (horizontal) compatibilities, and — when the presentation composes
    vertical generators — the pair (vertical) compatibilities."""
    entries = []
    boundary = _boundary_problems(cert)
    for b in boundary:
        entries.append(ReportEntry("boundary", False, b))
    if boundary:
        return Report("check-compat", tuple(entries))

    pres = cert.pres
    right = cert.right
    table = cert.lift_table
    expected_keys = set()
    fills_checked = 0
    fill_ok = {"filler-fill-top": True, "filler-fill-bottom": True}
    complete = True
    for name, u in pres.lifting_generators():
        for p in enumerate_problems(name, u, right):
            expected_keys.add(p.key)
            phi = table.get(p.key)
            if phi is None:
                entries.append(
                    ReportEntry("lift-table-incomplete", False, f"no filler for problem {p.key}")
                )
                complete = False
                continue
            fills_checked += 1
            if compose(phi, u.map).table != p.square.top.table:
                entries.append(
                    ReportEntry(
                        "filler-fill-top",
                        False,
                        f"problem {p.key}: filler does not restrict to the problem's top leg",
                    )
                )
                fill_ok["filler-fill-top"] = False
            if compose(right.map, phi).table != p.square.bot.table:
                entries.append(
                    ReportEntry(
                        "filler-fill-bottom",
                        False,
                        f"problem {p.key}: filler does not project to the problem's bottom leg",
                    )
                )
                fill_ok["filler-fill-bottom"] = False
    surplus = sorted(set(table) - expected_keys)
    for key in surplus:
        entries.append(
            ReportEntry("lift-table-incomplete", False, f"surplus entry {key} matches no problem")
        )
        complete = False
    if complete:
        entries.append(_entry_ok("lift-table-incomplete", len(expected_keys), "problems"))
    for label, ok in fill_ok.items():
        if ok:
            entries.append(_entry_ok(label, fills_checked, "fillers"))

    gens = dict(pres.lifting_generators())
    horiz_checked = 0
    horiz_ok = True
    for sqname, vsrc, vdst, sq in pres.lifting_squares():
        for p in enumerate_problems(vdst, gens[vdst], right):
            moved = square_compose(p.square, sq)
            src_key = (vsrc, moved.top.table, moved.bot.table)
            phi_src = table.get(src_key)
            phi_dst = table.get(p.key)
            if phi_src is None or phi_dst is None:
                continue  # already reported as incomplete
            horiz_checked += 1
            if compose(phi_dst, sq.bot).table != phi_src.table:
                entries.append(
                    ReportEntry(
                        "horizontal-compatibility",
                        False,
                        f"square {sqname} at problem {p.key}: moved filler disagrees",
                    )
                )
                horiz_ok = False
    if horiz_ok:
        entries.append(_entry_ok("horizontal-compatibility", horiz_checked, "instances"))

    if getattr(pres, "kind", "plain") == "double":
        pairs = pres.composable_pairs()
        vert_checked = 0
        vert_ok = True
        for pair in pairs.pairs:
            comp_u = pres.uarrow(pair.composite)
            right_u = pres.uarrow(pair.right)
            for p in enumerate_problems(pair.composite, comp_u, right):
                tau0, tau1 = p.square.top, p.square.bot
                inner_key = (
                    pair.left,
                    tau0.table,
                    compose(tau1, right_u.map).table,
                )
                inner = table.get(inner_key)
                if inner is None:
                    continue
                outer_key = (pair.right, inner.table, tau1.table)
                direct = table.get(p.key)
                outer = table.get(outer_key)
                if direct is None:
                    continue
                vert_checked += 1
                if outer is None or outer.table != direct.table:
                    via = "no filler for the two-stage problem" if outer is None else (
                        f"two-stage route {outer.table} != composite route {direct.table}"
                    )
                    entries.append(
                        ReportEntry(
                            "vertical-compatibility",
                            False,
                            f"pair {pair.name} at problem {p.key}: {via}",
                        )
                    )
                    vert_ok = False
        if vert_ok:
            entries.append(_entry_ok("vertical-compatibility", vert_checked, "instances"))
    return Report("check-compat", tuple(entries))


def verify_certificate(cert: Certificate, budget: Optional[SizeBudget] = None) -> Report:
    """The full deterministic suite: algebra laws plus compatibilities."""
    return Report.merged("verify", [check_algebra(cert, budget), check_compat(cert)])


# ---------------------------------------------------------------------------
# the correspondence oracle


def _fibres(g: ArrowObject) -> list:
    out = [[] for _ in range(g.bot.size)]
    for z, w in enumerate(g.map.table):
        out[w].append(z)
    return out


def _commuting_squares(src: ArrowObject, dst: ArrowObject):
    """All squares src -> dst, bottom-major lexicographic order."""
    fib = _fibres(dst)
    for bot in itertools.product(range(dst.bot.size), repeat=src.bot.size):
        choices = [fib[bot[src.map.table[x]]] for x in range(src.top.size)]
        if any(not c for c in choices):
            continue
        bot_map = FiniteMap(src.bot, dst.bot, bot)
        for top in itertools.product(*choices):
            yield CommSquare(src, dst, FiniteMap(src.top, dst.top, top), bot_map)


def _count_commuting_squares(src: ArrowObject, dst: ArrowObject) -> int:
    fib = _fibres(dst)
    sizes = [len(f) for f in fib]
    total = 0
    for bot in itertools.product(range(dst.bot.size), repeat=src.bot.size):
        prod = 1
        for x in range(src.top.size):
            prod *= sizes[bot[src.map.table[x]]]
            if prod == 0:
                break
        total += prod
    return total


def _problem_free_positions(shape, f: ArrowObject) -> list:
    """All lifting problems of ``f`` with their free filler positions:
    (key, problem, free positions of the generator realisation)."""
    out = []
    for name, u in shape.lifting_generators():
        _, free = _image_reps(u.map)
        for p in enumerate_problems(name, u, f):
            out.append((p, u, free))
    return out


def _count_liftings(problems, base: CommSquare, fib_sizes) -> int:
    total = 1
    bt = base.bot.table
    for p, _u, free in problems:
        s1 = p.square.bot.table
        for b in free:
            total *= fib_sizes[bt[s1[b]]]
            if total == 0:
                return 0
    return total


def _enumerate_liftings(problems, base: CommSquare, fib, g: ArrowObject):
    """All lifting structures over a fixed base square, canonical order."""
    per_problem = []
    for p, u, free in problems:
        s0, s1 = p.square.top.table, p.square.bot.table
        forced = [None] * u.bot.size
        for a in range(u.top.size):
            forced[u.map.table[a]] = base.top.table[s0[a]]
        options = [fib[base.bot.table[s1[b]]] for b in free]
        per_problem.append((p, forced, free, options))
    option_lists = [opts for _, _, _, opts in per_problem]
    flat = [o for opts in option_lists for o in opts]
    for combo in itertools.product(*flat):
        phi = {}
        i = 0
        for p, forced, free, options in per_problem:
            tab = list(forced)
            for b in free:
                tab[b] = combo[i]
                i += 1
            phi[p.key] = FiniteMap(p.square.bot.dom, g.top, tuple(tab))
        yield OneStepLifting(base, phi)


def _random_lifting(rng, problems, bases, fib, g: ArrowObject):
    base = rng.choice(bases)
    phi = {}
    for p, u, free in problems:
        s0, s1 = p.square.top.table, p.square.bot.table
        tab = [None] * u.bot.size
        for a in range(u.top.size):
            tab[u.map.table[a]] = base.top.table[s0[a]]
        for b in free:
            tab[b] = rng.choice(fib[base.bot.table[s1[b]]])
        phi[p.key] = FiniteMap(p.square.bot.dom, g.top, tuple(tab))
    return OneStepLifting(base, phi)


def _random_square(rng, src: ArrowObject, dst: ArrowObject, fib):
    while True:
        bot = tuple(rng.randrange(dst.bot.size) for _ in range(src.bot.size))
        choices = [fib[bot[src.map.table[x]]] for x in range(src.top.size)]
        if any(not c for c in choices):
            continue
        top = tuple(rng.choice(c) for c in choices)
        return CommSquare(
            src, dst, FiniteMap(src.top, dst.top, top), FiniteMap(src.bot, dst.bot, bot)
        )


def oracle_kappa(
    pres,
    f: ArrowObject,
    g: ArrowObject,
    bound: int = 2,
    budget: Optional[SizeBudget] = None,
    seed: int = 0,
    samples: int = 64,
    list_cap: int = 20000,
) -> Report:
    """Check that squares out of the one-step extension of ``f`` into ``g``
    correspond exactly to lifting structures on ``f`` over ``g``.

    Cardinalities are always compared exactly (big-integer products over
    fibres).  When both sides fit under ``list_cap`` the bijection is
    checked exhaustively in both directions; otherwise the two inverse
    identities are checked on a seeded sample from each side.
    """
    for size in (f.top.size, f.bot.size, g.top.size, g.bot.size):
        if size > bound:
            raise SizeBudgetExceeded(
                f"oracle carrier size {size} exceeds the configured bound {bound}"
            )
    engine = StepEngine(pres, budget)
    struct = engine.step(f)
    fib = _fibres(g)
    fib_sizes = [len(c) for c in fib]
    problems = _problem_free_positions(pres, f)
    bases = list(_commuting_squares(f, g))
    has_squares = bool(pres.lifting_squares())

    n_squares = _count_commuting_squares(struct.extended, g)
    if has_squares:
        n_liftings = None  # products over problems ignore the square constraints
    else:
        n_liftings = sum(_count_liftings(problems, base, fib_sizes) for base in bases)

    entries = []
    listable = n_squares <= list_cap and (n_liftings is None or n_liftings <= list_cap)
    if has_squares and not listable:
        raise SizeBudgetExceeded(
            "presentation declares connecting squares; the oracle must enumerate, "
            f"but {n_squares} squares exceed the listing cap {list_cap}"
        )
    if listable:
        squares = list(_commuting_squares(struct.extended, g))
        liftings = []
        for base in bases:
            for lift in _enumerate_liftings(problems, base, fib, g):
                if has_squares:
                    try:
                        mediate(struct, lift)
                    except NonNaturalLifting:
                        continue
                liftings.append(lift)
        # the fibre-product count must agree with the actual enumeration
        ok_counts = len(squares) == n_squares and (
            n_liftings is None or n_liftings == len(liftings)
        )
        n_liftings = len(liftings)
        entries.append(
            ReportEntry(
                "cardinality",
                n_squares == n_liftings and ok_counts,
                f"squares={n_squares} liftings={n_liftings}",
            )
        )
        mediated = []
        ok_back = True
        for lift in liftings:
            t = mediate(struct, lift)
            mediated.append(t)
            if restrict_square(struct, t) != lift:
                ok_back = False
        ok_forward = sorted(
            (t.top.table, t.bot.table) for t in mediated
        ) == sorted((t.top.table, t.bot.table) for t in squares)
        for t in squares:
            if mediate(struct, restrict_square(struct, t)) != t:
                ok_forward = False
        entries.append(
            ReportEntry(
                "two-sided-inverse",
                ok_back and ok_forward,
                f"exhaustive over {n_squares} squares and {n_liftings} liftings",
            )
        )
    else:
        entries.append(
            ReportEntry(
                "cardinality",
                n_squares == n_liftings,
                f"squares={n_squares} liftings={n_liftings}",
            )
        )
        rng = random.Random(seed)
        ok_inv = True
        viable = [b for b in bases if _count_liftings(problems, b, fib_sizes) > 0]
        if viable and n_liftings:
            for _ in range(samples):
                lift = _random_lifting(rng, problems, viable, fib, g)
                if restrict_square(struct, mediate(struct, lift)) != lift:
                    ok_inv = False
        if n_squares:
            for _ in range(samples):
                t = _random_square(rng, struct.extended, g, fib)
                if mediate(struct, restrict_square(struct, t)) != t:
                    ok_inv = False
        entries.append(
            ReportEntry(
                "two-sided-inverse",
                ok_inv,
                f"sampled {samples} per side (seed {seed})",
            )
        )
    return Report("oracle-kappa", tuple(entries))


# ---------------------------------------------------------------------------
# the initiality oracle


def oracle_initiality(
    cert: Certificate,
    targets: Optional[list] = None,
    budget: Optional[SizeBudget] = None,
) -> Report:
    """Check that the certificate's algebra maps uniquely into each target
    algebra: for every boundary square from the certified input into the
    target arrow there must be exactly one algebra morphism out of the
    extracted arrow extending it.

    ``targets`` is a list of (arrow, algebra map) pairs; by default the
    certificate's own algebra, for which the unique self-extension of the
    left factor must be the identity.
    """
    limit = (budget or SizeBudget()).max_problems
    engine = StepEngine(cert.pres, budget)
    dengine = None
    if cert.mode == "special":
        dengine = DoubleEngine(cert.pres, budget, single=engine)
    if targets is None:
        targets = [(cert.right, cert.beta0)]
    entries = []
    for ti, (g, bprime) in enumerate(targets):
        laws = _algebra_violations(cert.pres, cert.mode, g, bprime, engine, dengine)
        if laws:
            details = "; ".join(f"{label}: {detail}" for label, detail in laws)
            entries.append(
                ReportEntry(f"target-{ti}-not-algebra", False, details)
            )
            continue
        n_candidates = _count_commuting_squares(cert.right, g)
        if n_candidates > limit:
            raise SizeBudgetExceeded(
                f"{n_candidates} candidate squares exceed the budget {limit}"
            )
        morphisms = []
        for h in _commuting_squares(cert.right, g):
            th = engine.extend(h)
            if compose(h.top, cert.beta0) == compose(bprime, th.top):
                morphisms.append(h)
        squares_checked = 0
        unique = True
        for s in _commuting_squares(cert.input, g):
            matching = [
                h
                for h in morphisms
                if compose(h.top, cert.left) == s.top and h.bot == s.bot
            ]
            squares_checked += 1
            if len(matching) != 1:
                unique = False
                entries.append(
                    ReportEntry(
                        f"target-{ti}-initiality",
                        False,
                        f"square (top={s.top.table}, bot={s.bot.table}) has "
                        f"{len(matching)} algebra-morphism extensions, expected 1",
                    )
                )
        if unique:
            entries.append(
                ReportEntry(
                    f"target-{ti}-initiality",
                    True,
                    f"{squares_checked} boundary squares, each with a unique "
                    f"extension among {len(morphisms)} algebra morphisms",
                )
            )
    return Report("oracle-initiality", tuple(entries))
