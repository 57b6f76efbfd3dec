"""Algebraic weak factorisation systems over finite sets.

Factor a map of finite sets through the iterated one-step extension
generated by a finitely presented collection of arrows (and, in special
mode, squares subject to vertical composition), extract the canonical
lifting structure, and verify every defining equation exhaustively.

Typical use::

    from awfskit import factorise, Certificate, verify_certificate
    from awfskit.serialize import decode_presentation, read_json

    pres = decode_presentation(read_json("fixtures/gen_split_epi.json"))
    result = factorise(pres, f, mode="special", max_stage=3)
    report = verify_certificate(Certificate.from_result(pres, result))
    assert report.ok
"""

from .arrows import (
    ArrowObject,
    CommSquare,
    arrow,
    identity_square,
    square_compose,
)
from .chain import (
    ChainTrace,
    FactorisationResult,
    detect_stabilisation,
    extract,
    factorise,
    run_chain,
    run_plain,
    run_special,
    solve_lift,
)
from .errors import (
    DiagramError,
    EngineError,
    InvalidPresentation,
    NotStabilised,
    ParseError,
    SizeBudgetExceeded,
)
from .finset import FiniteMap, FinSet, compose, identity, is_iso
from .presentation import (
    DoubleCatPresentation,
    PlainPresentation,
    ValidationReport,
)
from .serialize import (
    decode_certificate,
    decode_map_or_arrow,
    decode_presentation,
    encode_certificate,
    encode_presentation,
    read_json,
    trace_summary,
    write_json,
)
from .step import (
    DoubleEngine,
    LiftingProblem,
    SizeBudget,
    StepEngine,
    StepStructure,
)
from .verify import (
    Certificate,
    Report,
    ReportEntry,
    check_algebra,
    check_compat,
    oracle_initiality,
    oracle_kappa,
    verify_certificate,
)

__version__ = "0.1.0"

__all__ = [
    "ArrowObject",
    "Certificate",
    "ChainTrace",
    "CommSquare",
    "DiagramError",
    "DoubleCatPresentation",
    "DoubleEngine",
    "EngineError",
    "FactorisationResult",
    "FinSet",
    "FiniteMap",
    "InvalidPresentation",
    "LiftingProblem",
    "NotStabilised",
    "ParseError",
    "PlainPresentation",
    "Report",
    "ReportEntry",
    "SizeBudget",
    "SizeBudgetExceeded",
    "StepEngine",
    "StepStructure",
    "ValidationReport",
    "arrow",
    "check_algebra",
    "check_compat",
    "compose",
    "decode_certificate",
    "decode_map_or_arrow",
    "decode_presentation",
    "detect_stabilisation",
    "encode_certificate",
    "encode_presentation",
    "extract",
    "factorise",
    "identity",
    "identity_square",
    "is_iso",
    "oracle_initiality",
    "oracle_kappa",
    "read_json",
    "run_chain",
    "run_plain",
    "run_special",
    "solve_lift",
    "square_compose",
    "trace_summary",
    "verify_certificate",
    "write_json",
]
