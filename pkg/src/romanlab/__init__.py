"""Romanization toolkit: a universal ASCII romanizer, rule-based transliteration
schemes, and BPE tokenizer diagnostics (fertility, token collapse)."""

__version__ = "0.1.0"

from .pipeline import PipelineConfig, SweepRow, stream_romanize, sweep_vocab_sizes
from .rules import (
    InversionError,
    RuleSet,
    RuleSyntaxError,
    apply_ruleset,
    compile_ruleset,
    invert_ruleset,
)
from .tokenlab import (
    CollapseReport,
    FertilityReport,
    TrainerConfig,
    Vocabulary,
    VocabularySizeError,
    count_words,
    decode,
    encode,
    fertility,
    observed_tokens,
    relative_fertility_change,
    token_collapse,
    train_bpe,
)
from .ucd import (
    CharacterDatabase,
    load_character_database,
    normalize,
    script_runs,
    strip_combining_marks,
)
from .uconv import invert_iso9, uconv
from .uroman import (
    MappingTier,
    RomanizedSpan,
    Uroman,
    latin_from_unicode_name,
    uroman,
    uroman_spans,
)

__all__ = [
    "__version__",
    "BPETokenizer",
    "CharacterDatabase",
    "CollapseReport",
    "FertilityReport",
    "InversionError",
    "MappingTier",
    "PipelineConfig",
    "RomanizedSpan",
    "Romanizer",
    "RuleSet",
    "RuleSyntaxError",
    "SweepRow",
    "TrainerConfig",
    "Uroman",
    "Vocabulary",
    "VocabularySizeError",
    "apply_ruleset",
    "compile_ruleset",
    "count_words",
    "decode",
    "encode",
    "fertility",
    "invert_iso9",
    "invert_ruleset",
    "latin_from_unicode_name",
    "load_character_database",
    "normalize",
    "observed_tokens",
    "relative_fertility_change",
    "script_runs",
    "stream_romanize",
    "strip_combining_marks",
    "sweep_vocab_sizes",
    "token_collapse",
    "train_bpe",
    "uconv",
    "uroman",
    "uroman_spans",
]


def __getattr__(name):
    # scikit-learn is only imported when the estimators are asked for
    if name in ("Romanizer", "BPETokenizer"):
        from . import estimators

        return getattr(estimators, name)
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")
