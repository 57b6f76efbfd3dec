"""One step of the factorisation construction.

Given a presentation-like shape (anything exposing ``lifting_generators``
and ``lifting_squares``) and a target map ``f``, this module builds:

* the comma category of lifting problems (all commuting squares from a
  generator realisation into ``f``, connected by the shape's squares),
* its pointwise colimit with the counit back into ``f``,
* the one-step extension ``Tf`` as a pushout, together with the unit
  square ``f -> Tf``, the inclusion of the domain carrier, and the
  adjoined cell of every lifting problem,
* the universal-property mediator: a square out of the extension is the
  same thing as a square ``f -> g`` plus a natural choice of fillers,
* the functorial action on squares, and the two comparison squares that
  relate the pair-indexed extension to the plain one.

Two construction paths produce structurally identical tables: the general
path materialises the comma category and runs the colimit/pushout
factories (and is therefore able to mediate), while the fast path —
available when the shape has no connecting squares and all generator
realisations are injective — computes the same canonical numbering by
rank arithmetic without enumerating problems.  The general path is
guarded by a problem-count budget; the fast path is exempt.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterator, Mapping, Optional, Sequence, Union

from .arrows import (
    ArrowColimit,
    ArrowDiagram,
    ArrowObject,
    CommSquare,
    identity_square,
    square_compose,
)
from .errors import (
    DiagramError,
    NonNaturalLifting,
    ProblemMismatch,
    SizeBudgetExceeded,
    UniversalityError,
)
from .finset import FinSet, FiniteMap, PushoutResult, compose, identity, pushout


# ---------------------------------------------------------------------------
# budgets, problems, enumeration
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SizeBudget:
    """Cap on the number of lifting problems the general path may enumerate.

    The quantity that explodes is the problem count (it grows like
    |X|^|A| * |Y|^|B\\im U| per generator), so the budget bounds that; the
    bound is checked against a cheap upper estimate before enumerating.
    """

    max_problems: int = 250_000


ProblemKey = tuple  # (generator name, top table, bottom table)


def problem_key(gen: str, top_table, bot_table) -> ProblemKey:
    return (gen, tuple(top_table), tuple(bot_table))


@dataclass(frozen=True)
class LiftingProblem:
    """A commuting square from a generator realisation into the target."""

    gen: str
    square: CommSquare

    @property
    def key(self) -> ProblemKey:
        return (self.gen, self.square.top.table, self.square.bot.table)


def _image_reps(umap: FiniteMap) -> tuple[dict, list]:
    """First preimage of each value in the image, and the free positions."""
    reps: dict[int, int] = {}
    for a, b in enumerate(umap.table):
        reps.setdefault(b, a)
    free = [b for b in range(umap.cod.size) if b not in reps]
    return reps, free


def count_problems_bound(u: ArrowObject, f: ArrowObject) -> int:
    """Cheap upper bound on the number of lifting problems of ``u`` in ``f``."""
    _, free = _image_reps(u.map)
    return (f.top.size ** u.top.size) * (f.bot.size ** len(free))


def count_problems(u: ArrowObject, f: ArrowObject) -> int:
    """Exact number of lifting problems of ``u`` in ``f``.

    Iterates over top components; exact also for non-injective realisations,
    where some top components admit no commuting bottom.
    """
    reps, free = _image_reps(u.map)
    if len(reps) == u.top.size:  # injective: every top component extends
        return count_problems_bound(u, f)
    per_free = f.bot.size ** len(free)
    total = 0
    for s0 in itertools.product(range(f.top.size), repeat=u.top.size):
        pinned: dict[int, int] = {}
        ok = True
        for a, b in enumerate(u.map.table):
            v = f.map.table[s0[a]]
            if pinned.setdefault(b, v) != v:
                ok = False
                break
        if ok:
            total += per_free
    return total


def enumerate_problems(gen: str, u: ArrowObject, f: ArrowObject) -> Iterator[LiftingProblem]:
    """All lifting problems of ``u`` in ``f``, in canonical order.

    Canonical order: top components lexicographically, then the free
    bottom coordinates lexicographically (pinned coordinates are forced).
    """
    reps, free = _image_reps(u.map)
    for s0 in itertools.product(range(f.top.size), repeat=u.top.size):
        pinned: dict[int, int] = {}
        ok = True
        for a, b in enumerate(u.map.table):
            v = f.map.table[s0[a]]
            if pinned.setdefault(b, v) != v:
                ok = False
                break
        if not ok:
            continue
        base = [pinned.get(b, 0) for b in range(u.bot.size)]
        for vals in itertools.product(range(f.bot.size), repeat=len(free)):
            table = list(base)
            for b, v in zip(free, vals):
                table[b] = v
            yield LiftingProblem(
                gen,
                CommSquare(
                    u,
                    f,
                    FiniteMap(u.top, f.top, s0),
                    FiniteMap(u.bot, f.bot, tuple(table)),
                ),
            )


# ---------------------------------------------------------------------------
# the comma category of problems and its colimit
# ---------------------------------------------------------------------------


@dataclass
class CommaCategory:
    """All lifting problems of a shape in ``f``, with the connecting edges
    induced by the shape's squares (an edge per square and target problem)."""

    target: ArrowObject
    problems: list[LiftingProblem]
    index: dict
    edges: list[tuple[int, int, str, CommSquare]]

    def diagram(self) -> ArrowDiagram:
        return ArrowDiagram(
            [p.square.src for p in self.problems],
            [(s, d, sq) for s, d, _, sq in self.edges],
        )


def comma_category(shape, f: ArrowObject, budget: Optional[SizeBudget] = None) -> CommaCategory:
    budget = budget or SizeBudget()
    gens = shape.lifting_generators()
    bound = sum(count_problems_bound(u, f) for _, u in gens)
    if bound > budget.max_problems:
        raise SizeBudgetExceeded(
            f"enumerating lifting problems needs up to {bound} squares, "
            f"budget allows {budget.max_problems}"
        )
    problems: list[LiftingProblem] = []
    for name, u in gens:
        problems.extend(enumerate_problems(name, u, f))
    index = {p.key: i for i, p in enumerate(problems)}
    edges = []
    for sqname, src_gen, dst_gen, sq in shape.lifting_squares():
        for i, p in enumerate(problems):
            if p.gen != dst_gen:
                continue
            moved = square_compose(p.square, sq)
            edges.append((index[(src_gen, moved.top.table, moved.bot.table)], i, sqname, sq))
    return CommaCategory(f, problems, index, edges)


@dataclass
class DensityStep:
    """Colimit of the comma diagram with its counit back into the target."""

    comma: CommaCategory
    colim: ArrowColimit
    counit: CommSquare

    @property
    def apex(self) -> ArrowObject:
        return self.colim.apex

    def leg(self, i: int) -> CommSquare:
        return self.colim.leg(i)


def density_step(shape, f: ArrowObject, budget: Optional[SizeBudget] = None) -> DensityStep:
    comma = comma_category(shape, f, budget)
    colim = ArrowColimit(comma.diagram())
    counit = colim.induced([p.square for p in comma.problems], f)
    return DensityStep(comma, colim, counit)


# ---------------------------------------------------------------------------
# the one-step extension
# ---------------------------------------------------------------------------


@dataclass
class _FastGen:
    """Per-generator rank arithmetic for the fast path."""

    name: str
    u: ArrowObject
    reps: dict
    free: list
    top_count: int  # |X|^|A|
    free_count: int  # |Y|^(free positions)
    cells_before: int  # adjoined cells contributed by earlier generators

    @property
    def fcount(self) -> int:
        return len(self.free)

    @property
    def block(self) -> int:
        return self.top_count * self.free_count


class StepStructure:
    """The one-step extension of ``target``: carrier, inclusion, unit and
    the adjoined cell of every lifting problem.

    General instances additionally carry the comma category, the counit,
    the colimit and pushout factories (needed by ``mediate``), the paste
    map from the colimit's bottom carrier, and the recorded pushout-unit
    square used as a diagnostic.
    """

    def __init__(self, shape, target: ArrowObject):
        self.shape = shape
        self.target = target
        self.lean = True
        self.extended: ArrowObject = None  # type: ignore[assignment]
        self.unit: CommSquare = None  # type: ignore[assignment]
        self.inclusion: FiniteMap = None  # type: ignore[assignment]
        self.density: Optional[DensityStep] = None
        self.po: Optional[PushoutResult] = None
        self.paste: Optional[FiniteMap] = None
        self.cells: Optional[dict] = None
        self.pushout_unit: Optional[CommSquare] = None
        self._fast: Optional[dict] = None

    # -- common views ------------------------------------------------------

    @property
    def size(self) -> int:
        return self.extended.top.size

    @property
    def has_factories(self) -> bool:
        return not self.lean

    @property
    def problem_list(self) -> list[LiftingProblem]:
        if self.density is None:
            raise DiagramError("fast step structure does not materialise its problems")
        return self.density.comma.problems

    def iter_problems(self) -> Iterator[LiftingProblem]:
        if self.density is not None:
            return iter(self.density.comma.problems)
        return itertools.chain.from_iterable(
            enumerate_problems(name, u, self.target)
            for name, u in self.shape.lifting_generators()
        )

    def cell(self, key: ProblemKey) -> FiniteMap:
        """The adjoined cell of the problem ``key``: a map from the bottom
        carrier of its generator into the extension carrier."""
        if self.cells is not None:
            return self.cells[key]
        return self._fast_cell(key)

    def cell_for(self, gen: str, square: CommSquare) -> FiniteMap:
        """The adjoined cell of the problem given as a generator name plus
        its commuting square into the target."""
        return self.cell((gen, square.top.table, square.bot.table))

    # -- fast path ---------------------------------------------------------

    def _fast_cell(self, key: ProblemKey) -> FiniteMap:
        gen, s0, s1 = key
        meta: _FastGen = self._fast[gen]
        x = self.target.top.size
        y = self.target.bot.size
        rank = 0
        for v in s0:
            rank = rank * x + v
        fr = 0
        for b in meta.free:
            fr = fr * y + s1[b]
        rank = rank * meta.free_count + fr
        base = x + meta.cells_before + rank * meta.fcount
        pos = {b: i for i, b in enumerate(meta.free)}
        table = tuple(
            s0[meta.reps[b]] if b in meta.reps else base + pos[b]
            for b in range(meta.u.bot.size)
        )
        return FiniteMap(meta.u.bot, self.extended.top, table)


def fast_eligible(shape) -> bool:
    """The fast path applies when the shape has no connecting squares and
    every generator realisation is injective."""
    if shape.lifting_squares():
        return False
    for _, u in shape.lifting_generators():
        if len(set(u.map.table)) != len(u.map.table):
            return False
    return True


def fast_step(shape, target: ArrowObject, budget: Optional[SizeBudget] = None) -> StepStructure:
    if not fast_eligible(shape):
        raise DiagramError("shape is not eligible for the fast step path")
    x, y = target.top.size, target.bot.size
    struct = StepStructure(shape, target)
    metas: dict[str, _FastGen] = {}
    cells_before = 0
    for name, u in shape.lifting_generators():
        reps, free = _image_reps(u.map)
        top_count = x ** u.top.size
        free_count = y ** len(free)
        meta = _FastGen(name, u, reps, free, top_count, free_count, cells_before)
        metas[name] = meta
        if meta.fcount:
            cells_before += meta.block * meta.fcount
    # the budget bounds the problems that adjoin cells (problems of
    # surjective generators are never enumerated on this path); checked
    # arithmetically before any table is materialised
    limit = (budget or SizeBudget()).max_problems
    adjoining = sum(m.block for m in metas.values() if m.fcount)
    if adjoining > limit:
        raise SizeBudgetExceeded(
            f"extension of a carrier of size {x} adjoins cells for {adjoining} "
            f"problems, budget allows {limit}"
        )
    ttable = list(target.map.table)
    for name, _ in shape.lifting_generators():
        meta = metas[name]
        if meta.fcount:
            block = [v for vals in itertools.product(range(y), repeat=meta.fcount) for v in vals]
            ttable.extend(block * meta.top_count)
    size = x + cells_before
    struct.extended = ArrowObject(FiniteMap(FinSet(size), target.bot, tuple(ttable)))
    struct.inclusion = FiniteMap(target.top, FinSet(size), tuple(range(x)))
    struct.unit = CommSquare(target, struct.extended, struct.inclusion, identity(target.bot))
    struct._fast = metas
    return struct


def step(shape, target: ArrowObject, budget: Optional[SizeBudget] = None) -> StepStructure:
    """The general one-step extension, with mediating factories."""
    density = density_step(shape, target, budget)
    struct = StepStructure(shape, target)
    struct.lean = False
    struct.density = density
    po = pushout(density.counit.top, density.colim.apex.map)
    struct.po = po
    struct.inclusion = po.left
    struct.paste = po.right
    tmap = po.induced(target.map, density.counit.bot)
    struct.extended = ArrowObject(tmap)
    struct.unit = CommSquare(target, struct.extended, struct.inclusion, identity(target.bot))
    struct.cells = {
        p.key: compose(po.right, density.colim.bot.legs[i])
        for i, p in enumerate(density.comma.problems)
    }
    struct.pushout_unit = CommSquare(
        density.apex, ArrowObject(struct.inclusion), density.counit.top, po.right
    )
    return struct


# ---------------------------------------------------------------------------
# the universal property
# ---------------------------------------------------------------------------


@dataclass
class OneStepLifting:
    """A square ``f -> g`` together with a filler for every lifting problem
    of ``f``: the data classified by squares out of the extension."""

    base: CommSquare
    phi: Mapping

    def filler(self, key: ProblemKey) -> FiniteMap:
        return self.phi[key]


def restrict_square(struct: StepStructure, t: CommSquare) -> OneStepLifting:
    """Restrict a square ``Tf -> g`` to the lifting data it classifies:
    precompose with the unit, and read the fillers off the adjoined cells."""
    if t.src != struct.extended:
        raise DiagramError("square does not start at this extension")
    base = square_compose(t, struct.unit)
    phi = {p.key: compose(t.top, struct.cell(p.key)) for p in struct.iter_problems()}
    return OneStepLifting(base, phi)


def mediate(struct: StepStructure, lifting: OneStepLifting) -> CommSquare:
    """The unique square ``Tf -> g`` classifying ``lifting``.

    Built constructively: the fillers descend through the colimit of
    problem bottoms (failure to descend means the fillers are not natural
    across connecting squares), then the descended map and the base square
    combine through the pushout factory.  The factories re-verify their
    defining equations, so an inconsistent lifting cannot slip through.
    """
    if not struct.has_factories:
        raise DiagramError("fast step structure cannot mediate; build the general step")
    if lifting.base.src != struct.target:
        raise ProblemMismatch("lifting does not start at this structure's target")
    g = lifting.base.dst
    maps = []
    for p in struct.problem_list:
        try:
            m = lifting.phi[p.key]
        except KeyError:
            raise ProblemMismatch(f"lifting has no filler for problem {p.key}") from None
        if m.dom != p.square.src.bot or m.cod != g.top:
            raise ProblemMismatch(f"filler for problem {p.key} has wrong boundaries")
        maps.append(m)
    try:
        descended = struct.density.colim.bot.induced(maps) if maps else FiniteMap(
            struct.density.colim.bot.apex, g.top, ()
        )
    except UniversalityError as exc:
        raise NonNaturalLifting(
            f"fillers are not natural across connecting squares: {exc}"
        ) from None
    top = struct.po.induced(lifting.base.top, descended)
    return CommSquare(struct.extended, g, top, lifting.base.bot)


def extend_square(
    struct_src: StepStructure, struct_dst: StepStructure, alpha: CommSquare
) -> CommSquare:
    """Functorial action of the one-step extension on a square ``f -> g``,
    built through the universal property of the source extension."""
    if alpha.src != struct_src.target or alpha.dst != struct_dst.target:
        raise ProblemMismatch("square endpoints do not match the step structures")
    if alpha.is_identity():
        return identity_square(struct_src.extended)
    phi = {}
    for p in struct_src.problem_list:
        moved = square_compose(alpha, p.square)
        phi[p.key] = struct_dst.cell((p.gen, moved.top.table, moved.bot.table))
    base = square_compose(struct_dst.unit, alpha)
    return mediate(struct_src, OneStepLifting(base, phi))


def _iter_cell_keys(struct: StepStructure):
    """Canonical iteration over the problems that contribute adjoined cells
    of a fast structure: yields (generator, meta, top table, bottom table).

    Skips generators whose realisation is surjective (they adjoin nothing),
    so the cost is proportional to the number of adjoined cells rather than
    the full problem count.
    """
    x = struct.target.top.size
    y = struct.target.bot.size
    ft = struct.target.map.table
    for name, meta in struct._fast.items():
        if meta.fcount == 0:
            continue
        b_size = meta.u.bot.size
        for s0 in itertools.product(range(x), repeat=meta.u.top.size):
            base = [0] * b_size
            for b, a in meta.reps.items():
                base[b] = ft[s0[a]]
            for vals in itertools.product(range(y), repeat=meta.fcount):
                s1 = list(base)
                for b, v in zip(meta.free, vals):
                    s1[b] = v
                yield name, meta, s0, tuple(s1)


def classify_extend(
    struct_src: StepStructure, struct_dst: StepStructure, alpha: CommSquare
) -> CommSquare:
    """The same functorial action, written out directly from its
    classification: the inclusion part follows ``alpha`` into the target
    inclusion, and each adjoined cell lands on the cell of the transported
    problem.  Requires fast structures; agrees with ``extend_square`` where
    both apply (the classification determines the mediated square)."""
    if struct_src._fast is None or alpha.src != struct_src.target or alpha.dst != struct_dst.target:
        raise ProblemMismatch("square endpoints do not match the step structures")
    at, ab = alpha.top.table, alpha.bot.table
    kd = struct_dst.inclusion.table
    top = [kd[at[v]] for v in range(struct_src.target.top.size)]
    for gen, meta, s0, s1 in _iter_cell_keys(struct_src):
        cell = struct_dst.cell((gen, tuple(at[v] for v in s0), tuple(ab[v] for v in s1)))
        ct = cell.table
        top.extend(ct[b] for b in meta.free)
    return CommSquare(
        struct_src.extended,
        struct_dst.extended,
        FiniteMap(struct_src.extended.top, struct_dst.extended.top, tuple(top)),
        alpha.bot,
    )


# ---------------------------------------------------------------------------
# engines with memoisation
# ---------------------------------------------------------------------------


def _arrow_key(f: ArrowObject):
    return (f.top.size, f.bot.size, f.map.table)


class StepEngine:
    """Memoised one-step extensions over a fixed shape.

    ``step`` returns the general structure (with factories, budgeted);
    ``step_tables`` returns the cheapest structure adequate for cell and
    unit lookups — the fast one when the shape allows it.
    """

    def __init__(self, shape, budget: Optional[SizeBudget] = None):
        self.shape = shape
        self.budget = budget or SizeBudget()
        self._general: dict = {}
        self._fast: dict = {}
        self._fast_ok = fast_eligible(shape)

    def step(self, f: ArrowObject) -> StepStructure:
        key = _arrow_key(f)
        if key not in self._general:
            self._general[key] = step(self.shape, f, self.budget)
        return self._general[key]

    def step_fast(self, f: ArrowObject) -> StepStructure:
        if not self._fast_ok:
            raise DiagramError("shape is not eligible for the fast step tables")
        key = _arrow_key(f)
        if key not in self._fast:
            self._fast[key] = fast_step(self.shape, f, self.budget)
        return self._fast[key]

    def step_tables(self, f: ArrowObject) -> StepStructure:
        key = _arrow_key(f)
        if key in self._general:
            return self._general[key]
        if not self._fast_ok:
            return self.step(f)
        return self.step_fast(f)

    def unit(self, f: ArrowObject) -> CommSquare:
        return self.step_tables(f).unit

    def extend(self, alpha: CommSquare) -> CommSquare:
        """The one-step extension applied to a square.

        Routes through the direct classification tables when the shape
        allows it; otherwise mediates through the source colimit.
        """
        if alpha.is_identity():
            return identity_square(self.step_tables(alpha.src).extended)
        if self._fast_ok:
            return classify_extend(self.step_fast(alpha.src), self.step_tables(alpha.dst), alpha)
        return extend_square(self.step(alpha.src), self.step_tables(alpha.dst), alpha)


class DoubleEngine:
    """Step engines over a double presentation: the square-indexed one and
    the composable-pair-indexed one, with the comparison squares between
    the extensions they generate."""

    def __init__(
        self,
        pres,
        budget: Optional[SizeBudget] = None,
        single: Optional[StepEngine] = None,
    ):
        pres.ensure_valid()
        self.pres = pres
        self.pairs = pres.composable_pairs()
        self.single = single if single is not None else StepEngine(pres, budget)
        self.paired = StepEngine(self.pairs, budget)
        self._compose_memo: dict = {}
        self._iterate_memo: dict = {}

    @property
    def _fast_ok(self) -> bool:
        return self.paired._fast_ok and self.single._fast_ok

    def compose_comparison(self, f: ArrowObject, route: Optional[str] = None) -> CommSquare:
        """The square from the pair-indexed extension to the plain one that
        lifts each pair problem through the pair's composite arrow.

        ``route`` forces construction ``"fast"`` (direct classification
        tables) or ``"mediated"`` (through the pair colimit); by default the
        fast route is taken whenever the shapes allow it.
        """
        if route is None:
            key = _arrow_key(f)
            if key in self._compose_memo:
                return self._compose_memo[key]
            out = self._compose_fast(f) if self._fast_ok else self._compose_mediated(f)
            self._compose_memo[key] = out
            return out
        if route == "fast":
            return self._compose_fast(f)
        if route == "mediated":
            return self._compose_mediated(f)
        raise ValueError(f"unknown route {route!r}")

    def _compose_fast(self, f: ArrowObject) -> CommSquare:
        s2 = self.paired.step_fast(f)
        s1 = self.single.step_tables(f)
        top = list(s1.inclusion.table)
        for pname, meta, s0, s1tab in _iter_cell_keys(s2):
            pair = self.pairs.pair(pname)
            cell = s1.cell((pair.composite, s0, s1tab))
            ct = cell.table
            top.extend(ct[b] for b in meta.free)
        return CommSquare(
            s2.extended,
            s1.extended,
            FiniteMap(s2.extended.top, s1.extended.top, tuple(top)),
            identity(f.bot),
        )

    def _compose_mediated(self, f: ArrowObject) -> CommSquare:
        s2 = self.paired.step(f)
        s1 = self.single.step_tables(f)
        phi = {}
        for p in s2.problem_list:
            pair = self.pairs.pair(p.gen)
            phi[p.key] = s1.cell((pair.composite, p.square.top.table, p.square.bot.table))
        return mediate(s2, OneStepLifting(s1.unit, phi))

    def iterate_comparison(self, f: ArrowObject, route: Optional[str] = None) -> CommSquare:
        """The square from the pair-indexed extension to the twice-iterated
        plain one that lifts each pair problem in two stages: first through
        the left arrow against ``f``, then through the right arrow against
        the extension of ``f``.  ``route`` as in ``compose_comparison``."""
        if route is None:
            key = _arrow_key(f)
            if key in self._iterate_memo:
                return self._iterate_memo[key]
            out = self._iterate_fast(f) if self._fast_ok else self._iterate_mediated(f)
            self._iterate_memo[key] = out
            return out
        if route == "fast":
            return self._iterate_fast(f)
        if route == "mediated":
            return self._iterate_mediated(f)
        raise ValueError(f"unknown route {route!r}")

    def _two_stage_cell(self, s1, s11, pname, s0, s1tab):
        pair = self.pairs.pair(pname)
        right_u = self.pres.uarrow(pair.right)
        rt = right_u.map.table
        inner = s1.cell((pair.left, s0, tuple(s1tab[rt[b]] for b in range(right_u.top.size))))
        return s11.cell((pair.right, inner.table, s1tab))

    def _iterate_fast(self, f: ArrowObject) -> CommSquare:
        s2 = self.paired.step_fast(f)
        s1 = self.single.step_tables(f)
        s11 = self.single.step_tables(s1.extended)
        k1, k11 = s1.inclusion.table, s11.inclusion.table
        top = [k11[k1[v]] for v in range(f.top.size)]
        for pname, meta, s0, s1tab in _iter_cell_keys(s2):
            cell = self._two_stage_cell(s1, s11, pname, s0, s1tab)
            ct = cell.table
            top.extend(ct[b] for b in meta.free)
        return CommSquare(
            s2.extended,
            s11.extended,
            FiniteMap(s2.extended.top, s11.extended.top, tuple(top)),
            identity(f.bot),
        )

    def _iterate_mediated(self, f: ArrowObject) -> CommSquare:
        s2 = self.paired.step(f)
        s1 = self.single.step_tables(f)
        s11 = self.single.step_tables(s1.extended)
        phi = {}
        for p in s2.problem_list:
            pair = self.pairs.pair(p.gen)
            right_u = self.pres.uarrow(pair.right)
            inner_bot = compose(p.square.bot, right_u.map)
            inner = s1.cell((pair.left, p.square.top.table, inner_bot.table))
            phi[p.key] = s11.cell((pair.right, inner.table, p.square.bot.table))
        base = square_compose(s11.unit, s1.unit)
        return mediate(s2, OneStepLifting(base, phi))

    def iterate_then(self, stage: ArrowObject, collapse: CommSquare) -> CommSquare:
        """The composite of ``collapse`` (a square out of the one-step
        extension of ``stage``) after the two-stage comparison — computed
        without materialising the twice-iterated extension, whose carrier
        grows quadratically and dwarfs everything else in chain runs."""
        if not self._fast_ok:
            return square_compose(self.single.extend(collapse), self.iterate_comparison(stage))
        s2 = self.paired.step_fast(stage)
        s1 = self.single.step_tables(stage)
        if collapse.src != s1.extended:
            raise ProblemMismatch("collapse square does not start at the extension of the stage")
        snext = self.single.step_tables(collapse.dst)
        k1, knext = s1.inclusion.table, snext.inclusion.table
        ct_, cb_ = collapse.top.table, collapse.bot.table
        top = [knext[ct_[k1[v]]] for v in range(stage.top.size)]
        for pname, meta, s0, s1tab in _iter_cell_keys(s2):
            pair = self.pairs.pair(pname)
            right_u = self.pres.uarrow(pair.right)
            rt = right_u.map.table
            inner = s1.cell((pair.left, s0, tuple(s1tab[rt[b]] for b in range(right_u.top.size))))
            outer = snext.cell(
                (pair.right, tuple(ct_[v] for v in inner.table), tuple(cb_[v] for v in s1tab))
            )
            ot = outer.table
            top.extend(ot[b] for b in meta.free)
        return CommSquare(
            s2.extended,
            snext.extended,
            FiniteMap(s2.extended.top, snext.extended.top, tuple(top)),
            collapse.bot,
        )


def compose_comparison(pres, f: ArrowObject, budget: Optional[SizeBudget] = None) -> CommSquare:
    return DoubleEngine(pres, budget).compose_comparison(f)


def iterate_comparison(pres, f: ArrowObject, budget: Optional[SizeBudget] = None) -> CommSquare:
    return DoubleEngine(pres, budget).iterate_comparison(f)
