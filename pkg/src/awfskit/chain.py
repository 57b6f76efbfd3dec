"""The iterated-extension chain, stabilisation detection, and extraction.

Starting from the target map, each stage applies the one-step extension
and then coequalises the redundancy introduced by re-extending cells that
were already filled: stage n+2 is the coequaliser of the two ways of
mapping the stage-n extension into the extension of stage n+1 (through
the extension's own unit, or through the extension of the unit).  In
special mode the coequaliser is joint with a second fork that forces the
fillers of composable pairs to agree with the composite-then-fill route,
which is what makes the extracted lifting structure respect vertical
composition.

A chain that becomes stationary yields the factorisation: the stabilised
stage is the middle object, the composite of the connecting squares is
the left half, the stage itself (as an arrow) is the right half, and the
inverse of the stabilised connecting square turns the stage's structure
square into the algebra map that answers every lifting problem.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .arrows import (
    ArrowObject,
    CommSquare,
    arrow_joint_coequalizer,
    identity_square,
    square_compose,
)
from .errors import DiagramError, NotStabilised, ProblemMismatch
from .finset import FiniteMap, compose, identity, is_iso
from .step import (
    DoubleEngine,
    LiftingProblem,
    SizeBudget,
    StepEngine,
    StepStructure,
)


@dataclass
class ChainTrace:
    """Computed prefix of the chain: stage arrows, connecting squares
    ``connect[n]: stage n -> stage n+1``, and structure squares
    ``structure[n]: extension of stage n -> stage n+1``."""

    mode: str  # "plain" | "special"
    shape: object
    engine: StepEngine
    stages: list[ArrowObject]
    connect: list[CommSquare]
    structure: list[CommSquare]
    double_engine: Optional[DoubleEngine] = None

    @property
    def target(self) -> ArrowObject:
        return self.stages[0]

    @property
    def carrier_sizes(self) -> list[int]:
        return [s.top.size for s in self.stages]

    def stage_structure(self, n: int) -> StepStructure:
        """Extension tables of stage ``n``."""
        return self.engine.step_tables(self.stages[n])

    def connecting(self, n: int, m: int) -> CommSquare:
        """The composite connecting square from stage ``n`` to stage ``m``."""
        if not 0 <= n <= m < len(self.stages):
            raise DiagramError(f"no connecting square {n} -> {m} in a trace of {len(self.stages)} stages")
        out = identity_square(self.stages[n])
        for i in range(n, m):
            out = square_compose(self.connect[i], out)
        return out

    def verify_laws(self) -> list[str]:
        """Re-check the defining chain equations; returns violated labels."""
        out = []
        for n in range(len(self.structure)):
            eta = self.engine.step_tables(self.stages[n]).unit
            if square_compose(self.structure[n], eta) != self.connect[n]:
                out.append(f"unit-law:{n}")
        for n in range(len(self.structure) - 1):
            # Extending the structure square after the extended unit gives
            # the extended connecting square, and extending it after the
            # unit gives unit-then-structure; the fork legs are computed in
            # this collapsed form so every check stays proportional to the
            # extension carriers actually built.
            t_j = self.engine.extend(self.connect[n])
            eta_next = self.engine.step_tables(self.stages[n + 1]).unit
            lhs = square_compose(self.structure[n + 1], t_j)
            rhs = square_compose(
                self.structure[n + 1], square_compose(eta_next, self.structure[n])
            )
            if lhs != rhs:
                out.append(f"successor-fork:{n}")
            if self.mode == "special":
                gam = self.double_engine.compose_comparison(self.stages[n])
                lhs = square_compose(
                    self.connect[n + 1], square_compose(self.structure[n], gam)
                )
                rhs = square_compose(
                    self.structure[n + 1],
                    self.double_engine.iterate_then(self.stages[n], self.structure[n]),
                )
                if lhs != rhs:
                    out.append(f"composition-fork:{n}")
        for n, j in enumerate(self.connect):
            if j.bot.table != tuple(range(j.bot.dom.size)):
                out.append(f"codomain-rigidity:{n}")
        return out


def _advance(trace: ChainTrace, max_stage: int) -> ChainTrace:
    """Append stages up to ``max_stage`` following the chain recursion."""
    engine = trace.engine
    while len(trace.stages) <= max_stage:
        n = len(trace.stages) - 2
        x_n = trace.structure[n]
        # The two legs of the successor fork collapse along functoriality
        # and unit naturality to the extended connecting square and
        # unit-then-structure; the special fork's first leg is fused so the
        # twice-iterated extension never materialises.
        t_j = engine.extend(trace.connect[n])
        eta_next = engine.step_tables(trace.stages[n + 1]).unit
        codomain = engine.step_tables(trace.stages[n + 1]).extended
        pairs = [(t_j, square_compose(eta_next, x_n))]
        if trace.mode == "special":
            gam = trace.double_engine.compose_comparison(trace.stages[n])
            pairs.append(
                (trace.double_engine.iterate_then(trace.stages[n], x_n), square_compose(t_j, gam))
            )
        quot = arrow_joint_coequalizer(pairs, codomain=codomain)
        x_next = quot.q
        trace.stages.append(quot.apex)
        trace.structure.append(x_next)
        eta_next = engine.step_tables(trace.stages[n + 1]).unit
        trace.connect.append(square_compose(x_next, eta_next))
    return trace


def _start(mode: str, shape, f, engine: StepEngine, dengine) -> ChainTrace:
    target = f if isinstance(f, ArrowObject) else ArrowObject(f)
    st0 = engine.step_tables(target)
    first = st0.extended
    return ChainTrace(
        mode=mode,
        shape=shape,
        engine=engine,
        stages=[target, first],
        connect=[st0.unit],
        structure=[identity_square(first)],
        double_engine=dengine,
    )


def run_plain(shape, f, max_stage: int = 16, budget: Optional[SizeBudget] = None) -> ChainTrace:
    """Run the chain without the pair fork (squares still connect problems)."""
    if max_stage < 2:
        raise DiagramError("a plain chain needs at least two stages")
    engine = StepEngine(shape, budget)
    return _advance(_start("plain", shape, f, engine, None), max_stage)


def run_special(pres, f, max_stage: int = 16, budget: Optional[SizeBudget] = None) -> ChainTrace:
    """Run the chain with the composable-pair fork (double presentations)."""
    if max_stage < 3:
        raise DiagramError("a special chain needs at least three stages")
    engine = StepEngine(pres, budget)
    dengine = DoubleEngine(pres, budget, single=engine)
    return _advance(_start("special", pres, f, engine, dengine), max_stage)


def run_chain(shape, f, mode: str = "plain", max_stage: int = 16,
              budget: Optional[SizeBudget] = None) -> ChainTrace:
    if mode == "plain":
        return run_plain(shape, f, max_stage, budget)
    if mode == "special":
        return run_special(shape, f, max_stage, budget)
    raise DiagramError(f"unknown chain mode {mode!r}")


def detect_stabilisation(trace: ChainTrace) -> Optional[int]:
    """Least stage whose connecting square (and, in special mode, the next
    one too) is invertible; None if the trace never becomes stationary."""
    for n, j in enumerate(trace.connect):
        if is_iso(j.top) is None:
            continue
        if trace.mode == "plain":
            return n
        if n + 1 < len(trace.connect) and is_iso(trace.connect[n + 1].top) is not None:
            return n
    return None


@dataclass
class FactorisationResult:
    """The extracted factorisation f = R after L with its lifting algebra."""

    mode: str
    stage: int
    input: ArrowObject
    left: FiniteMap  # input domain -> middle carrier
    right: ArrowObject  # middle carrier -> input codomain
    beta0: FiniteMap  # extension carrier of the right leg -> middle carrier
    lift_table: dict
    trace: Optional[ChainTrace] = None

    @property
    def middle_size(self) -> int:
        return self.right.top.size

    @property
    def left_square(self) -> CommSquare:
        return CommSquare(self.input, self.right, self.left, identity(self.input.bot))

    def beta_square(self, extension: ArrowObject) -> CommSquare:
        return CommSquare(extension, self.right, self.beta0, identity(self.right.bot))


def extract(trace: ChainTrace, n: Optional[int] = None) -> FactorisationResult:
    """Extract the factorisation at the stabilised stage, re-verifying the
    algebra laws before returning."""
    detected = detect_stabilisation(trace)
    if n is None:
        n = detected
    if n is None or detected is None or n < detected:
        raise NotStabilised(
            f"chain did not stabilise within {len(trace.stages) - 1} stages "
            f"(carrier sizes {trace.carrier_sizes})",
            sizes=trace.carrier_sizes,
        )
    inv = is_iso(trace.connect[n].top)
    if inv is None:
        raise NotStabilised(
            f"connecting square at stage {n} is not invertible",
            sizes=trace.carrier_sizes,
        )
    right = trace.stages[n]
    beta0 = compose(inv, trace.structure[n].top)
    left = trace.connecting(0, n).top
    st = trace.engine.step_tables(right)
    if compose(trace.stages[n].map, left).table != trace.target.map.table:
        raise DiagramError("extracted factorisation does not recompose the input")
    if compose(beta0, st.inclusion).table != tuple(range(right.top.size)):
        raise DiagramError("extracted algebra violates the unit law")
    lift_table = {p.key: compose(beta0, st.cell(p.key)) for p in st.iter_problems()}
    result = FactorisationResult(
        mode=trace.mode,
        stage=n,
        input=trace.target,
        left=left,
        right=right,
        beta0=beta0,
        lift_table=lift_table,
        trace=trace,
    )
    if trace.mode == "special":
        _check_special_algebra(trace, result, st)
    return result


def _check_special_algebra(trace: ChainTrace, result: FactorisationResult, st) -> None:
    """The algebra map must treat a composable pair the same whether it
    fills through the composite or in two stages."""
    beta = result.beta_square(st.extended)
    gam = trace.double_engine.compose_comparison(result.right)
    lam = trace.double_engine.iterate_comparison(result.right)
    t_beta = trace.engine.extend(beta)
    lhs = square_compose(beta, gam)
    rhs = square_compose(beta, square_compose(t_beta, lam))
    if lhs != rhs:
        raise DiagramError("extracted algebra violates the pair-composition law")


def solve_lift(result: FactorisationResult, problem: LiftingProblem) -> FiniteMap:
    """Answer a lifting problem against the extracted middle arrow."""
    if problem.square.dst != result.right:
        raise ProblemMismatch("problem does not target the extracted arrow")
    try:
        return result.lift_table[problem.key]
    except KeyError:
        raise ProblemMismatch(f"no table entry for problem {problem.key}") from None


def factorise(shape, f, mode: str = "plain", max_stage: int = 16,
              budget: Optional[SizeBudget] = None) -> FactorisationResult:
    """Run the chain and extract in one call."""
    return extract(run_chain(shape, f, mode, max_stage, budget))
