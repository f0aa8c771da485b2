"""Input checks shared by the estimators and the public functions."""

from __future__ import annotations

from collections.abc import Iterable

from .tokenlab import WORD_MODES

__all__ = ["check_documents", "check_vocab_size", "check_word_mode", "check_fraction"]


def check_documents(X, *, name: str = "X", allow_empty: bool = False) -> list[str]:
    """Return ``X`` as a list of strings.

    Accepts any iterable of ``str`` (lists, tuples, generators, 1-d object
    arrays, pandas Series). A bare string is rejected since iterating it
    would silently yield characters.
    """
    if isinstance(X, (str, bytes)):
        raise TypeError(f"{name} must be an iterable of documents, not a single {type(X).__name__}")
    shape = getattr(X, "shape", None)
    if shape is not None and len(shape) != 1:
        raise ValueError(f"{name} must be one-dimensional, got shape {shape}")
    if not isinstance(X, Iterable):
        raise TypeError(f"{name} must be an iterable of str, got {type(X).__name__}")
    docs = list(X)
    for i, doc in enumerate(docs):
        if not isinstance(doc, str):
            raise TypeError(f"{name}[{i}] is {type(doc).__name__}, expected str")
    if not docs and not allow_empty:
        raise ValueError(f"{name} is empty")
    return docs


def check_vocab_size(vocab_size) -> int:
    if isinstance(vocab_size, bool) or not isinstance(vocab_size, int) and not hasattr(vocab_size, "__index__"):
        raise TypeError(f"vocab_size must be an integer, got {type(vocab_size).__name__}")
    vocab_size = int(vocab_size)
    if vocab_size < 1:
        raise ValueError(f"vocab_size must be positive, got {vocab_size}")
    return vocab_size


def check_word_mode(mode: str) -> str:
    if mode not in WORD_MODES:
        raise ValueError(f"word mode must be one of {WORD_MODES}, got {mode!r}")
    return mode


def check_fraction(value, name: str, *, low: float = 0.0, high: float = 1.0) -> float:
    value = float(value)
    if not low < value <= high:
        raise ValueError(f"{name} must be in ({low}, {high}], got {value}")
    return value
