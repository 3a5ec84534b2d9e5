"""Text-editor helpers: completion candidates and pseudo-code generation."""

from pgstudio.completion.complete import (
    CompletionCandidate,
    complete,
    replacement_start,
)
from pgstudio.completion.pseudocode import (
    PSEUDOCODE_CHEAT_SHEET,
    PseudocodeResult,
    PseudoQuery,
    UnrecognizedPseudocode,
    generate_from_pseudocode,
    parse_pseudocode,
)

__all__ = [
    "CompletionCandidate",
    "PSEUDOCODE_CHEAT_SHEET",
    "PseudoQuery",
    "PseudocodeResult",
    "UnrecognizedPseudocode",
    "complete",
    "generate_from_pseudocode",
    "parse_pseudocode",
    "replacement_start",
]
