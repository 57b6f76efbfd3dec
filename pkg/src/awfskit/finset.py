"""Exact colimit kernel for maps between canonical finite sets.

Carriers are the ranges {0, .., n-1}, so every construction lands in a
canonical numbering: quotient classes are numbered by order of least member
of the underlying coproduct.  Equal inputs therefore produce identical
tables, and "same map" is literal table equality.  All values here are
immutable and every operation is a pure function of its inputs.
"""

from __future__ import annotations

from array import array
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .errors import CompositionError, DiagramError, UniversalityError


@dataclass(frozen=True)
class FinSet:
    """The canonical finite set {0, .., size - 1}."""

    size: int

    def __post_init__(self) -> None:
        if self.size < 0:
            raise DiagramError(f"carrier size must be non-negative, got {self.size}")

    def __iter__(self):
        return iter(range(self.size))

    def __repr__(self) -> str:
        return f"FinSet({self.size})"


@dataclass(frozen=True)
class FiniteMap:
    """A total function dom -> cod stored as a lookup table."""

    dom: FinSet
    cod: FinSet
    table: tuple[int, ...]

    def __post_init__(self) -> None:
        table = tuple(self.table)
        object.__setattr__(self, "table", table)
        if len(table) != self.dom.size:
            raise DiagramError(
                f"table length {len(table)} does not match domain size {self.dom.size}"
            )
        cod = self.cod.size
        for x, v in enumerate(table):
            if not 0 <= v < cod:
                raise DiagramError(f"table entry {x} -> {v} lies outside codomain of size {cod}")

    def __call__(self, x: int) -> int:
        return self.table[x]

    def __repr__(self) -> str:
        return f"FiniteMap({self.dom.size}->{self.cod.size}, {list(self.table)})"


def identity(s: FinSet) -> FiniteMap:
    return FiniteMap(s, s, tuple(range(s.size)))


def compose(g: FiniteMap, f: FiniteMap) -> FiniteMap:
    """g after f."""
    if f.cod != g.dom:
        raise CompositionError(
            f"cannot compose: first map ends at {f.cod.size}, second starts at {g.dom.size}"
        )
    gt = g.table
    return FiniteMap(f.dom, g.cod, tuple(gt[v] for v in f.table))


def is_iso(f: FiniteMap) -> Optional[FiniteMap]:
    """Return the inverse map if f is a bijection, else None."""
    if f.dom.size != f.cod.size:
        return None
    inv = [-1] * f.cod.size
    for x, v in enumerate(f.table):
        if inv[v] != -1:
            return None
        inv[v] = x
    return FiniteMap(f.cod, f.dom, tuple(inv))


def coproduct(parts: Sequence[FinSet]) -> tuple[FinSet, list[FiniteMap]]:
    """Disjoint union with injections, blocks in argument order."""
    total = sum(p.size for p in parts)
    apex = FinSet(total)
    legs = []
    offset = 0
    for p in parts:
        legs.append(FiniteMap(p, apex, tuple(range(offset, offset + p.size))))
        offset += p.size
    return apex, legs


class _UnionFind:
    """Disjoint sets over {0, .., n-1} with path halving."""

    __slots__ = ("parent",)

    def __init__(self, n: int):
        self.parent = array("l", range(n))

    def find(self, x: int) -> int:
        p = self.parent
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra


def _quotient_table(n: int, merges: Iterable[tuple[int, int]]) -> tuple[int, tuple[int, ...]]:
    """Quotient {0, .., n-1} by the relation generated by the merges.

    Classes are numbered by order of least member, which makes the result
    canonical for identical inputs.
    """
    uf = _UnionFind(n)
    for a, b in merges:
        uf.union(a, b)
    labels: dict[int, int] = {}
    table = [0] * n
    for x in range(n):
        root = uf.find(x)
        label = labels.get(root)
        if label is None:
            label = len(labels)
            labels[root] = label
        table[x] = label
    return len(labels), tuple(table)


@dataclass(frozen=True)
class QuotientResult:
    """A coequaliser-style quotient q: Y -> apex with its mediating factory."""

    apex: FinSet
    q: FiniteMap

    def induced(self, h: FiniteMap) -> FiniteMap:
        """The unique map u with u . q = h; h must be constant on classes."""
        if h.dom != self.q.dom:
            raise DiagramError("mediating input must start at the quotiented carrier")
        out = [-1] * self.apex.size
        for y, cls in enumerate(self.q.table):
            hy = h.table[y]
            if out[cls] == -1:
                out[cls] = hy
            elif out[cls] != hy:
                raise UniversalityError(
                    f"map does not coequalise: elements of class {cls} disagree ({out[cls]} vs {hy})"
                )
        return FiniteMap(self.apex, h.cod, tuple(out))


def joint_coequalizer(
    pairs: Sequence[tuple[FiniteMap, FiniteMap]],
    codomain: FinSet | None = None,
) -> QuotientResult:
    """Quotient a common codomain by f(x) ~ g(x) for every listed pair.

    Each pair must be parallel; all pairs must share one codomain.  An empty
    list needs the codomain spelled out and yields the identity quotient.
    """
    if not pairs:
        if codomain is None:
            raise DiagramError("empty joint coequaliser needs an explicit codomain")
        return QuotientResult(codomain, identity(codomain))
    cod = pairs[0][0].cod
    if codomain is not None and codomain != cod:
        raise DiagramError("declared codomain does not match the pairs")
    merges = []
    for f, g in pairs:
        if f.dom != g.dom or f.cod != g.cod:
            raise DiagramError("coequaliser pair is not parallel")
        if f.cod != cod:
            raise DiagramError("coequaliser pairs do not share a codomain")
        merges.extend(zip(f.table, g.table))
    size, table = _quotient_table(cod.size, merges)
    apex = FinSet(size)
    return QuotientResult(apex, FiniteMap(cod, apex, table))


def coequalizer(f: FiniteMap, g: FiniteMap) -> QuotientResult:
    """Single-pair case of joint_coequalizer."""
    return joint_coequalizer([(f, g)])


@dataclass(frozen=True)
class PushoutResult:
    """Pushout of f: A -> X along g: A -> B.

    left: X -> apex and right: B -> apex are the cocone legs; induced builds
    the unique mediating map out of a commuting cospan.
    """

    apex: FinSet
    left: FiniteMap
    right: FiniteMap

    def induced(self, u: FiniteMap, v: FiniteMap) -> FiniteMap:
        """Unique w with w . left = u and w . right = v."""
        if u.cod != v.cod:
            raise DiagramError("mediating cospan must share a codomain")
        if u.dom != self.left.dom or v.dom != self.right.dom:
            raise DiagramError("mediating cospan does not match the pushout feet")
        out = [-1] * self.apex.size
        for x, cls in enumerate(self.left.table):
            ux = u.table[x]
            if out[cls] == -1:
                out[cls] = ux
            elif out[cls] != ux:
                raise UniversalityError("cospan does not commute with the pushout identifications")
        for b, cls in enumerate(self.right.table):
            vb = v.table[b]
            if out[cls] == -1:
                out[cls] = vb
            elif out[cls] != vb:
                raise UniversalityError("cospan does not commute with the pushout identifications")
        return FiniteMap(self.apex, u.cod, tuple(out))


def pushout(f: FiniteMap, g: FiniteMap) -> PushoutResult:
    """Pushout of the span X <-f- A -g-> B, computed as a quotient of X + B."""
    if f.dom != g.dom:
        raise DiagramError("pushout span must share its domain")
    nx, nb = f.cod.size, g.cod.size
    merges = ((f.table[a], nx + g.table[a]) for a in range(f.dom.size))
    size, table = _quotient_table(nx + nb, merges)
    apex = FinSet(size)
    left = FiniteMap(f.cod, apex, table[:nx])
    right = FiniteMap(g.cod, apex, table[nx:])
    return PushoutResult(apex, left, right)


@dataclass
class Diagram:
    """A finite diagram of sets: vertices plus edges labelled by maps.

    The colimit only depends on the identifications the edges generate, so
    identity and composite edges may be included or omitted freely.
    """

    vertices: list[FinSet]
    edges: list[tuple[int, int, FiniteMap]]


@dataclass(frozen=True)
class CoconeWitness:
    """Colimit apex with its legs and the mediating-map factory."""

    apex: FinSet
    legs: tuple[FiniteMap, ...]

    def class_of(self, vertex: int, element: int) -> int:
        return self.legs[vertex].table[element]

    def induced(self, maps: Sequence[FiniteMap]) -> FiniteMap:
        """Unique u with u . leg_i = maps[i] for a commuting cocone."""
        if len(maps) != len(self.legs):
            raise DiagramError("cocone must provide one map per vertex")
        out = [-1] * self.apex.size
        cod = None
        for leg, h in zip(self.legs, maps):
            if h.dom != leg.dom:
                raise DiagramError("cocone map does not start at its vertex")
            if cod is None:
                cod = h.cod
            elif h.cod != cod:
                raise DiagramError("cocone maps must share a codomain")
            for x, cls in enumerate(leg.table):
                hx = h.table[x]
                if out[cls] == -1:
                    out[cls] = hx
                elif out[cls] != hx:
                    raise UniversalityError("cocone does not commute with the diagram edges")
        if cod is None:
            raise DiagramError("cannot mediate out of an empty diagram without a target")
        return FiniteMap(self.apex, cod, tuple(out))


def empty_cocone_induced(witness: CoconeWitness, target: FinSet) -> FiniteMap:
    """Mediating map out of the empty colimit (the apex is empty)."""
    if witness.legs:
        raise DiagramError("not an empty colimit")
    return FiniteMap(witness.apex, target, ())


def finite_colimit(diagram: Diagram) -> CoconeWitness:
    """Colimit of a finite diagram: quotient of the coproduct by the edges.

    Every apex class contains at least one coproduct element, so the legs
    are jointly surjective.
    """
    sizes = [v.size for v in diagram.vertices]
    offsets = []
    total = 0
    for s in sizes:
        offsets.append(total)
        total += s
    merges = []
    for src, dst, e in diagram.edges:
        if not (0 <= src < len(sizes) and 0 <= dst < len(sizes)):
            raise DiagramError("diagram edge endpoint out of range")
        if e.dom != diagram.vertices[src] or e.cod != diagram.vertices[dst]:
            raise DiagramError("diagram edge map does not match its endpoints")
        osrc, odst = offsets[src], offsets[dst]
        merges.extend((osrc + x, odst + v) for x, v in enumerate(e.table))
    size, table = _quotient_table(total, merges)
    apex = FinSet(size)
    legs = tuple(
        FiniteMap(vert, apex, table[offsets[i] : offsets[i] + vert.size])
        for i, vert in enumerate(diagram.vertices)
    )
    return CoconeWitness(apex, legs)
