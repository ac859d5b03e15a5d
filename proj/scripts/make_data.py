#!/usr/bin/env python3
"""Regenerate data/readings.tsv and data/words.txt.

Readings come from pypinyin's character and phrase tables (MIT); the general
word list comes from jieba's dictionary (MIT). Both are reduced to tone-less
lowercase pinyin with v standing for u-umlaut.

    pip install pypinyin jieba
    python3 scripts/make_data.py data/
"""
import os
import sys
import unicodedata

import jieba
from pypinyin import pinyin_dict, phrases_dict


def strip_tone(reading):
    reading = reading.replace("ü", "v").replace("Ü", "v")
    decomposed = unicodedata.normalize("NFD", reading)
    out = "".join(c for c in decomposed if not unicodedata.combining(c))
    return out.lower()


def is_cjk(ch):
    cp = ord(ch)
    return 0x3400 <= cp <= 0x4DBF or 0x4E00 <= cp <= 0x9FFF


def main(out_dir):
    chars = {}
    for cp in sorted(pinyin_dict.pinyin_dict):
        ch = chr(cp)
        if not is_cjk(ch):
            continue
        seen = []
        for r in pinyin_dict.pinyin_dict[cp].split(","):
            s = strip_tone(r)
            if s.isalpha() and s.isascii() and s not in seen:
                seen.append(s)
        if seen:
            chars[ch] = seen

    words = {}
    for word, readings in sorted(phrases_dict.phrases_dict.items()):
        if not 2 <= len(word) <= 4 or any(c not in chars for c in word):
            continue
        if len(readings) != len(word):
            continue
        syl = [strip_tone(r[0]) for r in readings]
        if any(not (s.isalpha() and s.isascii()) for s in syl):
            continue
        default = [chars[c][0] for c in word]
        if syl != default:
            words[word] = " ".join(syl)

    with open(os.path.join(out_dir, "readings.tsv"), "w", encoding="utf-8") as f:
        f.write("# hanzi reading table: <char>\\t<reading>... (most frequent first)\n")
        for ch, rs in chars.items():
            f.write(ch + "\t" + "\t".join(rs) + "\n")
        f.write("#WORDS\n")
        for w, r in words.items():
            f.write(w + "\t" + r + "\n")

    dict_path = os.path.join(os.path.dirname(jieba.__file__), "dict.txt")
    general = []
    with open(dict_path, encoding="utf-8") as f:
        for line in f:
            parts = line.split()
            if len(parts) < 2:
                continue
            w, freq = parts[0], int(parts[1])
            if 2 <= len(w) <= 6 and freq >= 50 and all(is_cjk(c) for c in w):
                general.append(w)
    with open(os.path.join(out_dir, "words.txt"), "w", encoding="utf-8") as f:
        for w in general:
            f.write(w + "\n")
    print(len(chars), "chars,", len(words), "word readings,", len(general), "general words")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "data")
