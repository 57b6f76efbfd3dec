"""Round-trip and error-path tests for the JSON layer."""

import pytest

from awfskit.arrows import ArrowObject
from awfskit.chain import factorise, run_chain
from awfskit.errors import ParseError
from awfskit.serialize import (
    decode_arrow,
    decode_certificate,
    decode_map,
    decode_map_or_arrow,
    decode_presentation,
    dumps,
    encode_arrow,
    encode_certificate,
    encode_map,
    encode_presentation,
    parse_text,
    trace_summary,
)
from awfskit.verify import Certificate, verify_certificate

from fixture_lib import (
    abc_pres,
    composite_pres,
    f_3to2,
    fmap,
    growth_pres,
    plain_split_epi_pres,
    split_epi_pres,
    two_gen_plain_pres,
)

ALL_PRES = [
    plain_split_epi_pres,
    two_gen_plain_pres,
    growth_pres,
    split_epi_pres,
    abc_pres,
    composite_pres,
]


class TestRoundTrips:
    def test_map_and_arrow(self):
        m = fmap(3, 2, [0, 1, 0])
        assert decode_map(parse_text(dumps(encode_map(m)))) == m
        a = ArrowObject(m)
        assert decode_arrow(parse_text(dumps(encode_arrow(a)))) == a
        assert decode_map_or_arrow(encode_map(m)) == a
        assert decode_map_or_arrow(encode_arrow(a)) == a

    @pytest.mark.parametrize("make", ALL_PRES, ids=lambda f: f.__name__)
    def test_presentation(self, make):
        pres = make()
        text = dumps(encode_presentation(pres))
        back = decode_presentation(parse_text(text))
        assert back == pres
        assert back.validate().ok
        assert dumps(encode_presentation(back)) == text

    def test_certificate(self):
        pres = composite_pres()
        cert = Certificate.from_result(
            pres, factorise(pres, f_3to2(), mode="special", max_stage=4)
        )
        text = dumps(encode_certificate(cert))
        back = decode_certificate(parse_text(text), pres)
        assert (back.mode, back.stage, back.trace_sizes) == (
            cert.mode,
            cert.stage,
            cert.trace_sizes,
        )
        assert back.input == cert.input and back.left == cert.left
        assert back.right == cert.right and back.beta0 == cert.beta0
        assert back.lift_table == cert.lift_table
        assert dumps(encode_certificate(back)) == text
        assert verify_certificate(back).ok

    def test_trace_summary(self):
        trace = run_chain(composite_pres(), f_3to2(), mode="special", max_stage=4)
        summary = trace_summary(trace)
        assert summary == {
            "mode": "special",
            "carrier_sizes": [3, 7, 5, 5, 5],
            "codomain_size": 2,
            "connect_top_iso": [False, False, True, True],
            "stabilised_at": 2,
        }


class TestParseErrors:
    @pytest.mark.parametrize(
        "text,fragment",
        [
            ('{"dom": 2, "cod": 1, "table": [0]}', "length 1 does not match dom 2"),
            ('{"dom": 1, "cod": 1, "table": [3]}', "outside codomain"),
            ('{"dom": 1, "cod": 1, "table": [0], "x": 1}', "unknown key 'x'"),
            ('{"dom": 1, "table": [0]}', "missing key 'cod'"),
            ('{"dom": true, "cod": 1, "table": []}', "expected an integer"),
            ('{"dom": -1, "cod": 1, "table": []}', "non-negative"),
            ('[1, 2]', "expected an object"),
        ],
    )
    def test_bad_maps(self, text, fragment):
        with pytest.raises(ParseError, match=fragment):
            decode_map(parse_text(text))

    def test_arrow_boundary_mismatch(self):
        obj = {"top": 2, "bot": 1, "map": {"dom": 1, "cod": 1, "table": [0]}}
        with pytest.raises(ParseError, match="declared 2 -> 1"):
            decode_arrow(obj)

    def test_unknown_kind(self):
        with pytest.raises(ParseError, match="expected 'plain' or 'double'"):
            decode_presentation({"kind": "triple"})
        with pytest.raises(ParseError, match="missing key 'kind'"):
            decode_presentation({})

    def test_duplicate_composition_entry(self):
        obj = encode_presentation(abc_pres())
        obj["vcomp"].append({"left": "a", "right": "b", "result": "c"})
        with pytest.raises(ParseError, match="duplicate composite"):
            decode_presentation(obj)

    def test_duplicate_lift_table_key(self):
        pres = plain_split_epi_pres()
        cert = Certificate.from_result(pres, factorise(pres, f_3to2(), max_stage=2))
        obj = encode_certificate(cert)
        obj["lift_table"].append(obj["lift_table"][0])
        with pytest.raises(ParseError, match="duplicate lift-table key"):
            decode_certificate(obj, pres)

    def test_wrong_certificate_schema_tag(self):
        pres = plain_split_epi_pres()
        cert = Certificate.from_result(pres, factorise(pres, f_3to2(), max_stage=2))
        obj = encode_certificate(cert)
        obj["schema"] = "something-else"
        with pytest.raises(ParseError, match="schema"):
            decode_certificate(obj, pres)

    def test_syntax_error_carries_line_and_column(self):
        with pytest.raises(ParseError) as exc:
            parse_text('{"dom": 2,\n  "cod": }')
        assert exc.value.line == 2
        assert exc.value.col == 10
        assert "line 2, column 10" in str(exc.value)

    def test_paths_name_the_offending_value(self):
        obj = encode_presentation(abc_pres())
        obj["vmorphisms"][3]["umap"]["table"] = [0, "x"]
        with pytest.raises(ParseError, match=r"vmorphisms\[3\].umap.table"):
            decode_presentation(obj)


class TestSemanticErrorsStayInValidate:
    def test_non_commuting_square_named_by_validator(self):
        # schema-valid file whose declared square fails its realisation
        # equation: decoding succeeds, validation names the square
        obj = {
            "kind": "plain",
            "generators": [
                {"name": "j", "map": {"dom": 1, "cod": 1, "table": [0]}},
                {"name": "k", "map": {"dom": 1, "cod": 2, "table": [1]}},
            ],
            "morphisms": [
                {
                    "name": "s",
                    "dom": "j",
                    "cod": "k",
                    "top": {"dom": 1, "cod": 1, "table": [0]},
                    "bot": {"dom": 1, "cod": 2, "table": [0]},
                }
            ],
            "comp": [],
        }
        pres = decode_presentation(obj)
        report = pres.validate()
        assert not report.ok
        assert any(
            v.axiom == "realisation-square" and "s" in v.witness for v in report.violations
        )

    def test_umap_size_mismatch_caught_by_validator(self):
        obj = encode_presentation(split_epi_pres())
        obj["vmorphisms"][1]["umap"] = {"dom": 2, "cod": 2, "table": [0, 1]}
        pres = decode_presentation(obj)
        report = pres.validate()
        assert any(v.axiom == "realisation-map" for v in report.violations)
