#!/usr/bin/env python3
"""Independent frequency count for lexicon expansion over a small corpus.

Segments each line with bidirectional maximum matching (fewer words, then
fewer single-char words, then forward) and prints the words of length >=
min_len seen at least min_freq times that are not in the base lexicon, in
order of first occurrence.  Only CJK text and a few punctuation marks are
expected in the corpus.
"""
import argparse
from collections import Counter

PUNCT = set("。，、；：？！“”‘’（）《》")


def load(path):
    out = []
    with open(path, encoding="utf-8") as f:
        for line in f:
            w = line.strip().split("\t")[0]
            if w and not w.startswith("#"):
                out.append(w)
    return out


def fmm(run, words, maxlen):
    out, i = [], 0
    while i < len(run):
        for n in range(min(maxlen, len(run) - i), 0, -1):
            if n == 1 or run[i:i + n] in words:
                out.append(run[i:i + n])
                i += n
                break
    return out


def bmm(run, words, maxlen):
    out, j = [], len(run)
    while j > 0:
        for n in range(min(maxlen, j), 0, -1):
            if n == 1 or run[j - n:j] in words:
                out.append(run[j - n:j])
                j -= n
                break
    return out[::-1]


def segment(line, words, maxlen):
    runs, cur = [], ""
    for c in line:
        if c in PUNCT:
            if cur:
                runs.append(cur)
            cur = ""
        else:
            cur += c
    if cur:
        runs.append(cur)
    toks = []
    for r in runs:
        f, b = fmm(r, words, maxlen), bmm(r, words, maxlen)
        key = lambda s: (len(s), sum(1 for w in s if len(w) == 1))
        toks += b if key(b) < key(f) else f
    return toks


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("corpus")
    ap.add_argument("base")
    ap.add_argument("words")
    ap.add_argument("--min-freq", type=int, default=2)
    ap.add_argument("--min-len", type=int, default=2)
    a = ap.parse_args()
    base = load(a.base)
    words = set(load(a.words)) | set(base)
    maxlen = max(len(w) for w in words)
    counts, order = Counter(), []
    with open(a.corpus, encoding="utf-8") as f:
        for line in f:
            for t in segment(line.rstrip("\n"), words, maxlen):
                if len(t) < a.min_len:
                    continue
                if counts[t] == 0:
                    order.append(t)
                counts[t] += 1
    for t in order:
        if counts[t] >= a.min_freq and t not in base:
            print(f"{t}\t{counts[t]}")


if __name__ == "__main__":
    main()
