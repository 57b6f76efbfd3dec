"""Tests for presentation validation and the composable-pairs derivation."""

import dataclasses

import pytest

from awfskit.errors import InvalidPresentation
from awfskit.presentation import (
    CatArrow,
    ComposablePairs,
    DoubleCatPresentation,
    FiniteCategory,
    PlainPresentation,
    RawMap,
    from_category,
)
from fixture_lib import abc_pres, composite_pres, split_epi_pres, two_gen_plain_pres


# ---------------------------------------------------------------------------
# finite categories
# ---------------------------------------------------------------------------


def test_category_composite_with_identity_absorption():
    cat = FiniteCategory(["x", "y"], [CatArrow("f", "x", "y")], {})
    assert cat.composite("1_x", "f") == "f"
    assert cat.composite("f", "1_y") == "f"
    assert cat.hom("x", "y") == ["f"]


def test_category_detects_missing_composite():
    cat = FiniteCategory(["x"], [CatArrow("f", "x", "x")], {})
    axioms = [v.axiom for v in cat.violations()]
    assert "composition-totality" in axioms


def test_category_detects_nonassociative_table():
    cat = FiniteCategory(
        ["x"],
        [CatArrow("f", "x", "x"), CatArrow("g", "x", "x")],
        [("f", "f", "g"), ("f", "g", "g"), ("g", "f", "f"), ("g", "g", "g")],
    )
    axioms = [v.axiom for v in cat.violations()]
    assert "associativity" in axioms


def test_category_detects_identity_law_contradiction():
    cat = FiniteCategory(
        ["x"],
        [CatArrow("f", "x", "x"), CatArrow("g", "x", "x")],
        [("1_x", "f", "g"), ("f", "f", "f"), ("f", "g", "f"), ("g", "f", "f"), ("g", "g", "g")],
    )
    axioms = [v.axiom for v in cat.violations()]
    assert "identity-law" in axioms


def test_category_rejects_reserved_names():
    cat = FiniteCategory(["x"], [CatArrow("1_x2", "x", "x")], {})
    axioms = [v.axiom for v in cat.violations()]
    assert "reserved-name" in axioms


# ---------------------------------------------------------------------------
# double presentations: validity of the shipped fixtures
# ---------------------------------------------------------------------------


def test_split_epi_fixture_is_valid():
    pres = split_epi_pres()
    report = pres.validate()
    assert report.ok, report.summary()
    gens = pres.lifting_generators()
    assert [n for n, _ in gens] == ["e0", "e1", "j"]
    j = dict(gens)["j"]
    assert (j.top.size, j.bot.size) == (0, 1)
    assert pres.lifting_squares() == []


def test_abc_fixture_is_valid():
    report = abc_pres().validate()
    assert report.ok, report.summary()


def test_composite_fixture_is_valid():
    report = composite_pres().validate()
    assert report.ok, report.summary()


def test_empty_presentation_is_valid():
    pres = DoubleCatPresentation.build(objects={})
    assert pres.validate().ok
    assert pres.composable_pairs().pairs == []


# ---------------------------------------------------------------------------
# composable pairs
# ---------------------------------------------------------------------------


def test_split_epi_composable_pairs_frozen():
    pairs = split_epi_pres().composable_pairs()
    assert [(p.name, p.composite) for p in pairs.pairs] == [
        ("e0*e0", "e0"),
        ("e0*j", "j"),
        ("e1*e1", "e1"),
        ("j*e1", "j"),
    ]
    assert pairs.pair_squares == []
    gens = pairs.lifting_generators()
    assert dict(gens)["e0*j"].bot.size == 1


def test_abc_composable_pairs_contains_named_composite():
    pairs = abc_pres().composable_pairs()
    by_name = {p.name: p for p in pairs.pairs}
    assert len(pairs.pairs) == 10
    assert by_name["a*b"].composite == "c"
    assert by_name["a*e2"].composite == "a"
    assert by_name["e1*c"].composite == "c"


def test_composable_pairs_deterministic():
    first = split_epi_pres().composable_pairs()
    second = split_epi_pres().composable_pairs()
    assert [p.name for p in first.pairs] == [p.name for p in second.pairs]


# ---------------------------------------------------------------------------
# deliberate corruptions
# ---------------------------------------------------------------------------


def test_corrupted_vertical_identity_realisation_is_the_only_violation():
    pres = DoubleCatPresentation.build(
        objects={"x": 2},
        varrows=[("ex", "x", "x", [1, 1])],
        vid={"x": "ex"},
    )
    report = pres.validate()
    assert report.axioms() == ["vertical-identity-realisation"]
    assert "ex" in report.violations[0].witness


def test_missing_vertical_identity_is_rejected():
    pres = DoubleCatPresentation.build(
        objects={"x": 1},
        varrows=[("v", "x", "x", [0])],
        vid={},
    )
    assert "vertical-identity" in pres.validate().axioms()


def test_noncommuting_square_is_rejected():
    pres = DoubleCatPresentation.build(
        objects={"a": 1, "b": 2},
        varrows=[
            ("ea", "a", "a", [0]),
            ("eb", "b", "b", [0, 1]),
            ("u", "a", "b", [0]),
            ("w", "a", "b", [1]),
        ],
        vid={"a": "ea", "b": "eb"},
        squares=[("s", "u", "w", "1_a", "1_b")],
        square_vcomp=[("1_ea", "s", "s"), ("s", "1_eb", "s")],
    )
    assert pres.validate().axioms() == ["realisation-square"]


def test_missing_vertical_composite_is_rejected():
    pres = abc_pres()
    broken = dataclasses.replace(pres, vcomp={})
    report = broken.validate()
    assert "vertical-composition-totality" in report.axioms()
    assert any("a, b" in v.witness for v in report.violations)


def test_wrong_composite_realisation_is_rejected():
    pres = DoubleCatPresentation.build(
        objects={"x1": 1, "x2": 1, "x3": 2},
        varrows=[
            ("e1", "x1", "x1", [0]),
            ("e2", "x2", "x2", [0]),
            ("e3", "x3", "x3", [0, 1]),
            ("a", "x1", "x2", [0]),
            ("b", "x2", "x3", [0]),
            ("c", "x1", "x3", [1]),
        ],
        vid={"x1": "e1", "x2": "e2", "x3": "e3"},
        vcomp=[("a", "b", "c")],
    )
    assert "realisation-vertical-functor" in pres.validate().axioms()


def test_reserved_vertical_name_is_rejected():
    pres = DoubleCatPresentation.build(
        objects={"x": 1},
        varrows=[("ex", "x", "x", [0]), ("1_v", "x", "x", [0])],
        vid={"x": "ex"},
    )
    assert "reserved-name" in pres.validate().axioms()


def test_unknown_square_reference_is_rejected():
    pres = DoubleCatPresentation.build(
        objects={"x": 1},
        varrows=[("ex", "x", "x", [0])],
        vid={"x": "ex"},
        squares=[("s", "ex", "ghost", "1_x", "1_x")],
    )
    assert "unknown-reference" in pres.validate().axioms()


def test_ensure_valid_raises_with_report():
    pres = DoubleCatPresentation.build(
        objects={"x": 1},
        varrows=[("v", "x", "x", [0])],
        vid={},
    )
    with pytest.raises(InvalidPresentation) as exc:
        pres.ensure_valid()
    assert hasattr(exc.value, "report")
    with pytest.raises(InvalidPresentation):
        pres.composable_pairs()


# ---------------------------------------------------------------------------
# plain presentations
# ---------------------------------------------------------------------------


def test_two_generator_plain_presentation_is_valid():
    pres = two_gen_plain_pres()
    report = pres.validate()
    assert report.ok, report.summary()
    squares = pres.lifting_squares()
    assert len(squares) == 1
    name, src, dst, cs = squares[0]
    assert (name, src, dst) == ("s", "j", "k")
    assert cs.bot.table == (0,)


def test_plain_noncommuting_square_is_rejected():
    pres = PlainPresentation.build(
        generators=[("j", 1, 2, [0]), ("k", 1, 2, [1])],
        morphisms=[("s", "j", "k", [0], [0, 1])],
    )
    assert "realisation-square" in pres.validate().axioms()


def test_plain_wrong_functor_realisation_is_rejected():
    pres = PlainPresentation.build(
        generators=[("j", 1, 1, [0])],
        morphisms=[
            ("s", "j", "j", [0], [0]),
            ("t", "j", "j", [0], [0]),
        ],
        comp=[("s", "s", "t"), ("s", "t", "s"), ("t", "s", "s"), ("t", "t", "t")],
    )
    # the table is a perfectly good category; realisations all agree, so valid
    assert pres.validate().ok
    broken = PlainPresentation.build(
        generators=[("j", 2, 2, [0, 1]), ("k", 2, 2, [0, 1])],
        morphisms=[
            ("s", "j", "k", [0, 1], [0, 1]),
            ("t", "k", "j", [1, 0], [1, 0]),
            ("u", "j", "j", [0, 1], [0, 1]),
            ("w", "k", "k", [0, 1], [0, 1]),
        ],
        comp=[
            ("s", "t", "u"),
            ("t", "s", "w"),
            ("u", "s", "s"),
            ("s", "w", "s"),
            ("w", "t", "t"),
            ("t", "u", "t"),
            ("u", "u", "u"),
            ("w", "w", "w"),
        ],
    )
    assert "realisation-functor" in broken.validate().axioms()


def test_from_category_builds_plain_presentation():
    pres = two_gen_plain_pres()
    cat = pres.category()
    obj_real = {name: a for name, a in pres.lifting_generators()}
    sq_real = {name: cs for name, _, _, cs in pres.lifting_squares()}
    rebuilt = from_category(cat, obj_real, sq_real)
    assert rebuilt.canonical_key() == pres.canonical_key()


def test_from_category_requires_realisations():
    cat = FiniteCategory(["x"], [], {})
    with pytest.raises(InvalidPresentation):
        from_category(cat, {}, {})


def test_plain_missing_composite_rejected():
    pres = PlainPresentation.build(
        generators=[("j", 1, 1, [0])],
        morphisms=[("s", "j", "j", [0], [0]), ("t", "j", "j", [0], [0])],
    )
    assert "composition-totality" in pres.validate().axioms()


def test_raw_map_wellformedness():
    assert RawMap(2, 2, (0, 1)).wellformed()
    assert not RawMap(2, 2, (0,)).wellformed()
    assert not RawMap(1, 1, (1,)).wellformed()
    assert not RawMap(-1, 1, ()).wellformed()
