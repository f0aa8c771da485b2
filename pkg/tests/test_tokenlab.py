from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from oracles import (
    naive_collapse,
    naive_encode,
    naive_fertility,
    naive_train,
    naive_word_count,
)

from romanlab.tokenlab import (
    BYTE_TOKENS,
    MARKER,
    UNK,
    EmptyCorpusError,
    EmptyTokenSetError,
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
from romanlab.ucd import normalize
from romanlab.uroman import uroman

LOW = ["low", "low", "lower", "newest", "widest"]


def train_merges(corpus, n_merges, **kw):
    """Train with room for ``n_merges`` merges; return the partial model if the corpus runs dry."""
    base_only = _base_size(corpus, **kw)
    try:
        return train_bpe(corpus, vocab_size=base_only + n_merges, **kw)
    except VocabularySizeError as exc:
        assert exc.partial is not None
        return exc.partial


def _base_size(corpus, **kw):
    try:
        train_bpe(corpus, vocab_size=1, **kw)
    except VocabularySizeError as exc:
        return exc.achievable
    raise AssertionError("vocab_size=1 should never succeed")


class TestTrain:
    def test_low_lower_newest_widest(self):
        # Frozen from naive_train(LOW, 8).
        expected = [
            (MARKER, "l"), (MARKER + "l", "o"), (MARKER + "lo", "w"), ("e", "s"),
            ("es", "t"), (MARKER + "low", "e"), (MARKER + "lowe", "r"), (MARKER, "n"),
        ]  # fmt: skip
        assert naive_train(LOW, 8, coverage=0.9999)[1] == expected
        vocab = train_merges(LOW, 8)
        assert list(vocab.merges) == expected
        assert "est" in vocab.tokens

    def test_aaaa(self):
        # Frozen from naive_train(["aaaa"], 5): the marker joins after the letters pair up.
        expected = [("a", "a"), (MARKER, "aa"), (MARKER + "aa", "aa")]
        assert naive_train(["aaaa"], 5)[1] == expected
        assert list(train_merges(["aaaa"], 5).merges) == expected

    def test_base_inventory_means_no_merges(self):
        size = _base_size(LOW)
        vocab = train_bpe(LOW, vocab_size=size)
        assert vocab.merges == ()
        assert len(vocab) == size

    def test_layout(self):
        vocab = train_merges(LOW, 8)
        assert vocab.tokens[:256] == BYTE_TOKENS
        assert len(set(vocab.tokens)) == len(vocab.tokens)
        for a, b in vocab.merges:
            assert a + b in vocab

    def test_unreachable_size_reports_maximum(self):
        with pytest.raises(VocabularySizeError) as info:
            train_bpe(LOW, vocab_size=5000)
        exc = info.value
        assert exc.requested == 5000
        assert exc.achievable == len(exc.partial) < 5000
        assert train_bpe(LOW, vocab_size=exc.achievable).merges == exc.partial.merges

    def test_below_base_inventory(self):
        with pytest.raises(VocabularySizeError) as info:
            train_bpe(LOW, vocab_size=100)
        assert info.value.achievable > 256

    def test_without_byte_fallback_reserves_unk(self):
        vocab = train_merges(LOW, 2, byte_fallback=False)
        assert vocab.tokens[0] == UNK
        assert encode(vocab, "lo☃") == [MARKER + "lo", UNK]

    @pytest.mark.parametrize("corpus", [[], [""], ["", ""]])
    def test_empty_corpus(self, corpus):
        with pytest.raises(EmptyCorpusError, match="empty corpus"):
            train_bpe(corpus, vocab_size=300)

    def test_split_controls_boundary_crossing(self):
        corpus = ["a b a b a b"]
        split = train_merges(corpus, 4)
        joined = train_merges(corpus, 4, split_by_whitespace=False)
        assert all(MARKER not in b for _, b in split.merges)
        assert any(MARKER in b for _, b in joined.merges)

    def test_split_by_number(self):
        corpus = ["a1 a1 a1 a1"]
        assert train_merges(corpus, 3).merges == ((MARKER, "a"),)
        assert (MARKER + "a", "1") in train_merges(corpus, 3, split_by_number=False).merges

    def test_coverage_drops_rare_characters(self):
        vocab = train_merges(["aaaaaaaaab"], 0, character_coverage=0.5)
        assert "b" not in vocab.base
        assert encode(vocab, "b") == [MARKER, "<0x62>"]

    def test_deterministic(self):
        corpus = ["the cat sat", "on the mat", "the end"]
        assert train_merges(corpus, 10) == train_merges(corpus, 10)

    def test_invalid_config(self):
        with pytest.raises(ValueError):
            TrainerConfig(character_coverage=0)


CORPUS_ALPHABET = st.sampled_from("aabbcde  12人生平あい")
CORPORA = st.lists(st.text(CORPUS_ALPHABET, min_size=1, max_size=25), min_size=1, max_size=6)


@given(CORPORA, st.integers(0, 25), st.booleans())
@settings(max_examples=120, deadline=None)
def test_training_matches_brute_force(corpus, n_merges, split):
    vocab = train_merges(corpus, n_merges, split_by_whitespace=split)
    base, merges = naive_train(corpus, n_merges, split=split, coverage=0.9999)
    assert list(vocab.base) == base
    assert list(vocab.merges) == merges


@given(CORPORA, st.integers(0, 25), st.text(CORPUS_ALPHABET, max_size=30), st.booleans())
@settings(max_examples=120, deadline=None)
def test_encoding_matches_sequential_merges(corpus, n_merges, text, split):
    vocab = train_merges(corpus, n_merges, split_by_whitespace=split)
    assert encode(vocab, text) == naive_encode(vocab.base, vocab.merges, text, split)


@pytest.fixture(scope="module")
def hello():
    return train_merges(["hello world"] * 3, 50)


class TestEncodeDecode:
    def test_whole_words(self, hello):
        assert encode(hello, "hello world") == ["▁hello", "▁world"]
        assert decode(hello, ["▁hello", "▁world"]) == "hello world"

    def test_no_merges_one_token_per_symbol(self, hello):
        bare = hello.truncate(hello.base_size)
        assert encode(bare, "hello") == [MARKER, "h", "e", "l", "l", "o"]

    def test_snowman_byte_fallback(self, hello):
        tokens = encode(hello, "☃")
        assert tokens == [MARKER, "<0xE2>", "<0x98>", "<0x83>"]
        assert decode(hello, ["<0xE2>", "<0x98>", "<0x83>"]) == "☃"

    def test_empty(self, hello):
        assert encode(hello, "") == []
        assert decode(hello, []) == ""

    def test_bad_byte_run(self, hello):
        with pytest.raises(ValueError, match="UTF-8"):
            decode(hello, ["<0xE2>", "<0x98>"])

    def test_unknown_token(self, hello):
        with pytest.raises(ValueError, match="unknown token"):
            decode(hello, ["nope"])

    def test_literal_marker_in_text(self, hello):
        assert decode(hello, encode(hello, "a▁b")) == "a▁b"

    @given(st.text(st.characters(exclude_categories=("Cs",)), max_size=40))
    def test_round_trip(self, hello, text):
        assert decode(hello, encode(hello, text)) == normalize(text, "NFKC")


@given(CORPORA, st.integers(0, 20), st.integers(0, 20), CORPORA)
@settings(max_examples=80, deadline=None)
def test_merge_monotonicity(corpus, k1, k2, test_corpus):
    vocab = train_merges(corpus, k1 + k2)
    small = vocab.truncate(vocab.base_size + min(k1, len(vocab.merges)))
    assert sum(len(encode(vocab, d)) for d in test_corpus) <= sum(len(encode(small, d)) for d in test_corpus)


class TestSerialization:
    def test_round_trip(self, tmp_path):
        vocab = train_merges(LOW, 8)
        path = tmp_path / "v.json"
        vocab.save(path)
        again = Vocabulary.load(path)
        assert again == vocab
        assert again.tokens == vocab.tokens

    def test_tampered_tokens(self):
        data = train_merges(LOW, 2).to_dict()
        data["tokens"][-1] = "zz"
        with pytest.raises(ValueError, match="does not match"):
            Vocabulary.from_dict(data)

    def test_version(self):
        data = train_merges(LOW, 2).to_dict()
        data["version"] = 99
        with pytest.raises(ValueError, match="version"):
            Vocabulary.from_dict(data)

    def test_truncate_bounds(self):
        vocab = train_merges(LOW, 4)
        with pytest.raises(VocabularySizeError):
            vocab.truncate(len(vocab) + 1)
        assert len(vocab.truncate(len(vocab) - 1)) == len(vocab) - 1


class TestCountWords:
    @pytest.mark.parametrize(
        "text, mode, expected",
        [("ab cd", "whitespace", 2), ("人人生而自由平等。", "character", 9), ("", "whitespace", 0), ("", "character", 0)],
    )
    def test_examples(self, text, mode, expected):
        assert count_words(text, mode) == expected

    def test_unknown_mode(self):
        with pytest.raises(ValueError):
            count_words("x", "bytes")

    @given(st.text(), st.sampled_from(["whitespace", "character"]))
    def test_against_regex(self, text, mode):
        assert count_words(text, mode) == naive_word_count(text, mode)


class TestFertility:
    def test_whole_words(self):
        vocab = train_merges(["hello world"] * 3, 50)
        report = fertility(vocab, ["hello world"])
        assert report.fertility == 1
        assert (report.token_count, report.word_count) == (2, 2)

    def test_character_only_vocab(self):
        vocab = train_bpe(["ab"], vocab_size=_base_size(["ab"]))
        report = fertility(vocab, ["ab"], "whitespace")
        # The boundary marker is a token of its own here.
        assert report.token_count == 3
        assert report.fertility == 3

    def test_empty(self):
        vocab = train_merges(LOW, 2)
        with pytest.raises(EmptyCorpusError, match="empty corpus"):
            fertility(vocab, ["   "])

    def test_words_from_other_corpus(self):
        vocab = train_merges(LOW, 2)
        report = fertility(vocab, ["low low"], words_from=["a b c d"])
        assert report.word_count == 4

    @given(CORPORA, st.integers(0, 20), CORPORA, st.sampled_from(["whitespace", "character"]))
    @settings(max_examples=60, deadline=None)
    def test_against_recount(self, corpus, n, test_corpus, mode):
        vocab = train_merges(corpus, n)
        if sum(naive_word_count(d, mode) for d in test_corpus) == 0:
            return
        report = fertility(vocab, test_corpus, mode)
        assert report.fertility == naive_fertility(vocab.base, vocab.merges, test_corpus, mode)
        assert report.fertility * report.word_count == report.token_count

    def test_report_round_trip(self):
        report = FertilityReport(7, 3, "character")
        assert FertilityReport.from_dict(report.to_dict()) == report


class TestRelativeChange:
    def test_identical(self):
        r = FertilityReport(10, 5)
        assert relative_fertility_change(r, r) == 0

    def test_seven_percent_lower(self):
        assert relative_fertility_change(FertilityReport(93, 100), FertilityReport(100, 100)) == Fraction(-7, 100)

    def test_double(self):
        assert relative_fertility_change(FertilityReport(20, 10), FertilityReport(10, 10)) == 1

    def test_mode_mismatch(self):
        with pytest.raises(ValueError, match="modes differ"):
            relative_fertility_change(FertilityReport(1, 1, "character"), FertilityReport(1, 1, "whitespace"))

    def test_denominator_mismatch(self):
        with pytest.raises(ValueError, match="word counts"):
            relative_fertility_change(FertilityReport(1, 2), FertilityReport(1, 3))


class TestCollapse:
    def test_identity_is_lossless(self):
        report = token_collapse({"a", "b", "c"}, lambda s: s)
        assert report.loss == 0
        assert report.collision_groups == ()

    def test_pair_sharing_a_form(self):
        report = token_collapse({"他", "她"}, uroman)
        assert report.loss == Fraction(1, 2)
        assert report.collision_groups == (("ta", frozenset({"他", "她"})),)

    def test_marker_is_kept_apart(self):
        report = token_collapse({MARKER + "ж", "ж"}, uroman)
        assert report.loss == 0

    def test_empty(self):
        with pytest.raises(EmptyTokenSetError, match="empty token set"):
            token_collapse(set(), uroman)

    def test_chinese_text_against_recount(self):
        text = ["他是学生，她也是学生。", "人人生而自由，在尊严和权利上一律平等。", "市场和事场是四个字。"]
        vocab = train_merges(text, 10)
        tokens = observed_tokens(vocab, text)
        report = token_collapse(tokens, uroman)
        assert report.loss == naive_collapse(tokens, uroman)
        assert report.loss > 0

    @given(st.sets(st.text(st.sampled_from("他她市事是人生a▁"), min_size=1, max_size=3), min_size=1, max_size=20))
    def test_accounting(self, tokens):
        report = token_collapse(tokens, uroman)
        assert 0 <= report.loss < 1
        assert sum(len(g) - 1 for _, g in report.collision_groups) == report.unique_orig - report.unique_romanized
        assert report.loss == naive_collapse(tokens, uroman)
        assert (report.loss == 0) == (len({(t.startswith(MARKER), uroman(t.removeprefix(MARKER))) for t in tokens}) == len(tokens))
