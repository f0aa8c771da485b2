"""scikit-learn style wrappers: a romanizing transformer and a BPE tokenizer.

Both work on 1-d collections of documents and compose with
``sklearn.pipeline.Pipeline``::

    pipe = make_pipeline(Romanizer(scheme="uroman"), BPETokenizer(vocab_size=2000))
    tokens = pipe.fit(corpus).transform(corpus)
"""

from __future__ import annotations

from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .pipeline import canonical_scheme, romanizer_for
from .tokenlab import (
    FertilityReport,
    TrainerConfig,
    Vocabulary,
    count_words,
    decode,
    encode,
    fertility,
    observed_tokens,
    token_collapse,
    train_bpe,
)
from .validation import (
    check_documents,
    check_fraction,
    check_vocab_size,
    check_word_mode,
)

__all__ = ["Romanizer", "BPETokenizer"]


class Romanizer(TransformerMixin, BaseEstimator):
    """Romanize each document with ``scheme`` (``uroman``, ``uconv-auto``, ``iso9`` ...).

    Stateless; ``fit`` only validates the parameters.
    """

    def __init__(self, scheme: str = "uroman"):
        self.scheme = scheme

    def fit(self, X=None, y=None):
        if X is not None:
            check_documents(X, allow_empty=True)
        self.scheme_ = canonical_scheme(self.scheme)
        self._romanize = romanizer_for(self.scheme_)
        return self

    def transform(self, X) -> list[str]:
        check_is_fitted(self, "scheme_")
        return [self._romanize(doc) for doc in check_documents(X, allow_empty=True)]

    def __getstate__(self):
        state = self.__dict__.copy()
        state.pop("_romanize", None)  # may be a lambda
        return state

    def __setstate__(self, state):
        self.__dict__.update(state)
        if "scheme_" in state:
            self._romanize = romanizer_for(self.scheme_)

    def _more_tags(self):
        return {"X_types": ["string"], "stateless": True, "requires_fit": False}


class BPETokenizer(TransformerMixin, BaseEstimator):
    """Byte-pair-encoding tokenizer; ``transform`` returns one token list per document."""

    def __init__(
        self,
        vocab_size: int = 50048,
        split_by_whitespace: bool = True,
        byte_fallback: bool = True,
        character_coverage: float = 0.9999,
        split_by_number: bool = True,
    ):
        self.vocab_size = vocab_size
        self.split_by_whitespace = split_by_whitespace
        self.byte_fallback = byte_fallback
        self.character_coverage = character_coverage
        self.split_by_number = split_by_number

    def _config(self) -> TrainerConfig:
        return TrainerConfig(
            vocab_size=check_vocab_size(self.vocab_size),
            split_by_whitespace=bool(self.split_by_whitespace),
            byte_fallback=bool(self.byte_fallback),
            character_coverage=check_fraction(self.character_coverage, "character_coverage"),
            split_by_number=bool(self.split_by_number),
        )

    def fit(self, X, y=None):
        self.vocabulary_ = train_bpe(check_documents(X), self._config())
        return self

    @classmethod
    def from_vocabulary(cls, vocabulary: Vocabulary) -> BPETokenizer:
        """Wrap an already trained vocabulary."""
        config = vocabulary.config
        est = cls(
            vocab_size=len(vocabulary),
            split_by_whitespace=config.split_by_whitespace,
            byte_fallback=config.byte_fallback,
            character_coverage=config.character_coverage,
            split_by_number=config.split_by_number,
        )
        est.vocabulary_ = vocabulary
        return est

    def transform(self, X) -> list[list[str]]:
        check_is_fitted(self, "vocabulary_")
        return [encode(self.vocabulary_, doc) for doc in check_documents(X, allow_empty=True)]

    def inverse_transform(self, tokens) -> list[str]:
        check_is_fitted(self, "vocabulary_")
        return [decode(self.vocabulary_, seq) for seq in tokens]

    def fertility(self, X, word_mode: str = "whitespace", *, words_from=None) -> FertilityReport:
        """Tokens per word over ``X``; ``words_from`` overrides the denominator corpus."""
        check_is_fitted(self, "vocabulary_")
        words = None if words_from is None else check_documents(words_from, name="words_from")
        return fertility(self.vocabulary_, check_documents(X), check_word_mode(word_mode), words_from=words)

    def score(self, X, y=None, word_mode: str = "whitespace") -> float:
        """Negative fertility, so that higher is better as scikit-learn expects."""
        return -float(self.fertility(X, word_mode).fertility)

    def collapse(self, X, scheme: str = "uroman"):
        """Token collapse of the tokens observed on ``X`` under ``scheme``."""
        check_is_fitted(self, "vocabulary_")
        return token_collapse(observed_tokens(self.vocabulary_, check_documents(X)), romanizer_for(scheme))

    def word_count(self, X, word_mode: str = "whitespace") -> int:
        return sum(count_words(doc, check_word_mode(word_mode)) for doc in check_documents(X, allow_empty=True))

    def _more_tags(self):
        return {"X_types": ["string"]}
