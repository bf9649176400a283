"""Visual program evaluation: DSL tooling, evaluation, benchmark and statistics."""

import json as _json

from . import _core
from ._core import (
    FixtureBackend,
    ParseError,
    VpeError,
    cohen_kappa,
    dequantize,
    format_program,
    krippendorff_alpha,
    quantize,
    row_average,
    spearman_rho,
)

__all__ = [
    "FixtureBackend",
    "ParseError",
    "VpeError",
    "cohen_kappa",
    "dequantize",
    "evaluate",
    "format_program",
    "generate_corpus",
    "krippendorff_alpha",
    "quantize",
    "row_average",
    "spearman_rho",
    "validate_program",
]


def validate_program(source):
    """Returns semantic diagnostics as a list of dicts; empty means clean."""
    return _json.loads(_core.validate_program_json(source))


def evaluate(backend, image, program, prompt="", box_threshold=0.35, scale_tau=1.25):
    """Runs a program against one image and returns the report as a dict."""
    return _json.loads(
        backend.evaluate_json(image, program, prompt, box_threshold=box_threshold, scale_tau=scale_tau)
    )


def generate_corpus(seed=0, skill=None):
    """Returns the benchmark prompts as a list of dicts."""
    text = _core.generate_corpus_jsonl(seed, skill)
    return [_json.loads(line) for line in text.splitlines() if line]
