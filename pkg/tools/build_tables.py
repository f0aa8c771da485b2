#!/usr/bin/env python3
"""Regenerate the curated romanization tables from the literals below.

    python tools/build_tables.py

Writes ``uroman/overrides.tsv``, ``uroman/kana.tsv`` and
``schemes/hepburn.rules`` under ``src/romanlab/data``. The ISO 9, ISO 15919
and ADEGN rule files are edited by hand.
"""

from __future__ import annotations

from pathlib import Path

DATA = Path(__file__).resolve().parents[1] / "src" / "romanlab" / "data"

CYRILLIC = {
    "а": "a", "б": "b", "в": "v", "г": "g", "д": "d", "е": "e", "ё": "e",
    "ж": "zh", "з": "z", "и": "i", "й": "y", "к": "k", "л": "l", "м": "m",
    "н": "n", "о": "o", "п": "p", "р": "r", "с": "s", "т": "t", "у": "u",
    "ф": "f", "х": "kh", "ц": "ts", "ч": "ch", "ш": "sh", "щ": "shch",
    "ъ": "", "ы": "y", "ь": "", "э": "e", "ю": "yu", "я": "ya",
    # Ukrainian, Belarusian, South Slavic
    "є": "ye", "і": "i", "ї": "yi", "ґ": "g", "ў": "u", "ђ": "dj", "ј": "j",
    "љ": "lj", "њ": "nj", "ћ": "c", "џ": "dzh", "ѓ": "gj", "ќ": "kj", "ѕ": "dz",
}

ARABIC = {
    "ا": "a", "أ": "a", "إ": "i", "آ": "a", "ٱ": "a", "ء": "'", "ؤ": "'",
    "ئ": "'", "ى": "a", "ة": "h", "ب": "b", "ت": "t", "ث": "th", "ج": "j",
    "ح": "h", "خ": "kh", "د": "d", "ذ": "dh", "ر": "r", "ز": "z", "س": "s",
    "ش": "sh", "ص": "s", "ض": "d", "ط": "t", "ظ": "z", "ع": "'", "غ": "gh",
    "ف": "f", "ق": "q", "ك": "k", "ل": "l", "م": "m", "ن": "n", "ه": "h",
    "و": "w", "ي": "y", "پ": "p", "چ": "ch", "ژ": "zh", "گ": "g", "ک": "k",
    "ی": "y", "ہ": "h", "ۃ": "h", "ـ": "",
    # harakat and other vowel marks stay unwritten
    "ً": "", "ٌ": "", "ٍ": "", "َ": "", "ُ": "",
    "ِ": "", "ّ": "", "ْ": "", "ٰ": "",
    "،": ",", "؛": ";", "؟": "?", "٪": "%",
}

DEVANAGARI = {
    "्": "",  # virama: suppresses the inherent vowel
    "़": "",  # nukta
    "ं": "m",  # anusvara
    "ँ": "n",  # candrabindu
    "ः": "h",  # visarga
    "ऽ": "'",  # avagraha
    "ॐ": "om",
    "।": ".",
    "॥": ".",
    "॰": ".",
    "ऋ": "ri",
    "ॠ": "rii",
    "ृ": "ri",
    "ॄ": "rii",
    "ऌ": "li",
    "ॢ": "li",
    "क़": "qa",
    "ख़": "kha",
    "ग़": "ga",
    "ज़": "za",
    "ड़": "ra",
    "ढ़": "rha",
    "फ़": "fa",
    "य़": "ya",
}

GREEK = {
    "α": "a", "β": "b", "γ": "g", "δ": "d", "ε": "e", "ζ": "z", "η": "i",
    "θ": "th", "ι": "i", "κ": "k", "λ": "l", "μ": "m", "ν": "n", "ξ": "x",
    "ο": "o", "π": "p", "ρ": "r", "σ": "s", "ς": "s", "τ": "t", "υ": "y",
    "φ": "f", "χ": "ch", "ψ": "ps", "ω": "o",
}

GEORGIAN = {
    "ა": "a", "ბ": "b", "გ": "g", "დ": "d", "ე": "e", "ვ": "v", "ზ": "z",
    "თ": "t", "ი": "i", "კ": "k", "ლ": "l", "მ": "m", "ნ": "n", "ო": "o",
    "პ": "p", "ჟ": "zh", "რ": "r", "ს": "s", "ტ": "t", "უ": "u", "ფ": "p",
    "ქ": "k", "ღ": "gh", "ყ": "q", "შ": "sh", "ჩ": "ch", "ც": "ts", "ძ": "dz",
    "წ": "ts", "ჭ": "ch", "ხ": "kh", "ჯ": "j", "ჰ": "h",
}

LATIN = {
    "ß": "ss", "æ": "ae", "œ": "oe", "ø": "o", "đ": "d", "ł": "l", "þ": "th",
    "ð": "d", "ı": "i", "ŋ": "ng", "ĸ": "q", "ŀ": "l",
}

PUNCTUATION = {
    "、": ",\\b", "。": ".\\b", "「": '"', "」": '"', "『": '"', "』": '"',
    "《": '"', "》": '"', "〈": "<", "〉": ">", "【": "[", "】": "]",
    "〔": "(", "〕": ")", "・": "-", "〜": "~", "–": "-", "—": "-", "―": "-",
    "‘": "'", "’": "'", "‚": "'", "“": '"', "”": '"', "„": '"', "«": '"',
    "»": '"', "‹": "'", "›": "'", "•": "*", "·": ".", "°": " deg", "€": "EUR",
    "£": "GBP", "¥": "JPY", "₽": "RUB", "¿": "?", "¡": "!", "×": "x", "÷": "/",
    "§": "S", "¶": "P", "©": "(c)", "®": "(r)", "±": "+-",
}

# Hepburn romaji for the basic hiragana; katakana are derived by offset.
HIRAGANA = {
    "あ": "a", "い": "i", "う": "u", "え": "e", "お": "o",
    "か": "ka", "き": "ki", "く": "ku", "け": "ke", "こ": "ko",
    "が": "ga", "ぎ": "gi", "ぐ": "gu", "げ": "ge", "ご": "go",
    "さ": "sa", "し": "shi", "す": "su", "せ": "se", "そ": "so",
    "ざ": "za", "じ": "ji", "ず": "zu", "ぜ": "ze", "ぞ": "zo",
    "た": "ta", "ち": "chi", "つ": "tsu", "て": "te", "と": "to",
    "だ": "da", "ぢ": "ji", "づ": "zu", "で": "de", "ど": "do",
    "な": "na", "に": "ni", "ぬ": "nu", "ね": "ne", "の": "no",
    "は": "ha", "ひ": "hi", "ふ": "fu", "へ": "he", "ほ": "ho",
    "ば": "ba", "び": "bi", "ぶ": "bu", "べ": "be", "ぼ": "bo",
    "ぱ": "pa", "ぴ": "pi", "ぷ": "pu", "ぺ": "pe", "ぽ": "po",
    "ま": "ma", "み": "mi", "む": "mu", "め": "me", "も": "mo",
    "や": "ya", "ゆ": "yu", "よ": "yo",
    "ら": "ra", "り": "ri", "る": "ru", "れ": "re", "ろ": "ro",
    "わ": "wa", "ゐ": "i", "ゑ": "e", "を": "o", "ん": "n",
    "ぁ": "a", "ぃ": "i", "ぅ": "u", "ぇ": "e", "ぉ": "o",
    "ゃ": "ya", "ゅ": "yu", "ょ": "yo", "ゎ": "wa", "ゔ": "vu",
    "ゕ": "ka", "ゖ": "ke",
}
SMALL_Y = {"ゃ": "a", "ゅ": "u", "ょ": "o"}
KATAKANA_EXTRA = {
    "ヴ": "vu", "ヷ": "va", "ヸ": "vi", "ヹ": "ve", "ヺ": "vo",
    "ファ": "fa", "フィ": "fi", "フェ": "fe", "フォ": "fo", "フュ": "fyu",
    "ティ": "ti", "ディ": "di", "トゥ": "tu", "ドゥ": "du", "テュ": "tyu",
    "ウィ": "wi", "ウェ": "we", "ウォ": "wo",
    "ヴァ": "va", "ヴィ": "vi", "ヴェ": "ve", "ヴォ": "vo",
    "シェ": "she", "ジェ": "je", "チェ": "che", "イェ": "ye",
    "ツァ": "tsa", "ツィ": "tsi", "ツェ": "tse", "ツォ": "tso",
}
SOKUON = ("っ", "ッ")
CHOONPU = "ー"


def to_katakana(text: str) -> str:
    return "".join(chr(ord(c) + 0x60) if "ぁ" <= c <= "ゖ" else c for c in text)


def kana_table() -> dict[str, str]:
    table = dict(HIRAGANA)
    for kana, rom in HIRAGANA.items():
        if not rom.endswith("i") or len(rom) < 2 or kana in "ぃゐ":
            continue
        stem = rom[:-1]
        for small, vowel in SMALL_Y.items():
            table[kana + small] = stem + vowel if stem in ("sh", "ch", "j") else stem + "y" + vowel
    for kana, rom in list(table.items()):
        table[to_katakana(kana)] = rom
    table.update(KATAKANA_EXTRA)
    return table


def hexkey(s: str) -> str:
    return " ".join(f"{ord(c):04X}" for c in s)


def tsv_lines(table: dict[str, str], tier: str) -> list[str]:
    return [f"{hexkey(k)}\t{v}\t{tier}\t# {k}" for k, v in table.items()]


def with_capitals(table: dict[str, str]) -> dict[str, str]:
    out = {}
    for k, v in table.items():
        out[k] = v
        upper = k.upper()
        if upper != k and len(upper) == len(k):
            out[upper] = v[:1].upper() + v[1:]
    return out


def write_overrides() -> None:
    lines = [
        "# Curated uroman corrections. Override entries shadow the script tables",
        "# and the name-derived heuristic.",
        "# <source codepoints hex>\t<ascii output>\t<tier>",
        "# \\b in an output is a soft space (dropped at text edges and before punctuation).",
        "",
        "# Cyrillic: digraph onsets instead of raw letter names",
        *tsv_lines(with_capitals(CYRILLIC), "Override"),
        "",
        "# Arabic: consonant skeleton, short vowels unwritten",
        *tsv_lines(ARABIC, "Override"),
        "",
        "# Devanagari signs and nukta letters",
        *tsv_lines(DEVANAGARI, "Override"),
        "",
        "# Greek",
        *tsv_lines(with_capitals(GREEK), "Override"),
        "",
        "# Georgian (Mkhedruli): letter names carry a vowel",
        *tsv_lines(GEORGIAN, "Override"),
        "",
        "# Latin letters without a decomposition",
        *tsv_lines(with_capitals(LATIN), "Override"),
        "",
        "# Punctuation and symbols",
        *tsv_lines(PUNCTUATION, "Override"),
    ]
    (DATA / "uroman" / "overrides.tsv").write_text("\n".join(lines) + "\n", encoding="utf-8")


def write_kana() -> None:
    table = kana_table()
    lines = [
        "# Hepburn romaji without macrons (kana script table).",
        "# Sokuon and the prolonged sound mark are contextual and handled by the engine.",
        *tsv_lines(table, "ScriptTable"),
        *tsv_lines({s: "" for s in SOKUON}, "ScriptTable"),
    ]
    (DATA / "uroman" / "kana.tsv").write_text("\n".join(lines) + "\n", encoding="utf-8")


def write_hepburn_rules() -> None:
    table = kana_table()
    singles = {k: v for k, v in table.items() if len(k) == 1}
    lines = [
        "# Modified Hepburn for hiragana and katakana.",
        "# Long vowels written with the prolonged sound mark take a macron.",
        "",
    ]
    by_vowel: dict[str, list[str]] = {}
    for kana, rom in singles.items():
        if rom[-1] in "aiueo":
            by_vowel.setdefault(rom[-1], []).append(kana)
    for vowel, kanas in sorted(by_vowel.items()):
        lines.append(f"${vowel}_final = [{''.join(kanas)}]")
    by_onset: dict[str, list[str]] = {}
    for kana, rom in singles.items():
        onset = rom[0]
        if onset in "aiueon" or kana in "ぁぃぅぇぉァィゥェォ":
            continue
        by_onset.setdefault("t" if rom.startswith("ch") else onset, []).append(kana)
    lines.append("")
    lines.append("# sokuon doubles the following consonant")
    for onset, kanas in sorted(by_onset.items()):
        for s in SOKUON:
            lines.append(f"| {s} | [{''.join(kanas)}] -> {onset}")
    for s in SOKUON:
        lines.append(f"{s} -> ")
    lines.append("")
    for vowel in sorted(by_vowel):
        lines.append(f"${vowel}_final | {CHOONPU} | -> \\u0304")
    lines.append(f"{CHOONPU} -> -")
    lines += ["", "、 -> ,\\b", "。 -> .\\b", "「 -> “", "」 -> ”", "『 -> ‘", "』 -> ’", "・ -> ·", ""]
    for kana, rom in table.items():
        lines.append(f"{kana} -> {rom}")
    (DATA / "schemes" / "hepburn.rules").write_text("\n".join(lines) + "\n", encoding="utf-8")


def main() -> None:
    write_overrides()
    write_kana()
    write_hepburn_rules()


if __name__ == "__main__":
    main()
