#!/usr/bin/env python3
# Copyright 2026 The lilguard Authors
# SPDX-License-Identifier: Apache-2.0
"""Regenerates the bundled simulator corpora under data/.

countdown.txt  documents "count down from N : N w N-1 w ... 0 , check confirmed x10 done <eos>"
songbook.txt   verses of pseudo-words, each followed by a "sing la x8 !" refrain

Output is a pure function of --seed.
"""

import argparse
import pathlib
import random

CONSONANTS = "bcdfghjklmnprstvwz"
VOWELS = "aeiou"


def pseudo_words(rng, count, syllables=(1, 3)):
    words = set()
    while len(words) < count:
        n = rng.randint(*syllables)
        w = "".join(rng.choice(CONSONANTS) + rng.choice(VOWELS) for _ in range(n))
        if rng.random() < 0.5:
            w += rng.choice(CONSONANTS)
        words.add(w)
    return sorted(words)


def countdown(rng, docs, lo, hi, vocab_size, okays):
    vocab = pseudo_words(rng, vocab_size, (1, 3))
    out = []
    for _ in range(docs):
        n = rng.randint(lo, hi)
        toks = ["count", "down", "from", str(n), ":"]
        for k in range(n, 0, -1):
            toks += [str(k), rng.choice(vocab)]
        toks += ["0", ",", "check"] + ["confirmed"] * okays + ["done", "<eos>"]
        out.append(" ".join(toks))
    return "\n".join(out) + "\n"


def songbook(rng, songs, verses, lines, vocab_size):
    vocab = pseudo_words(rng, vocab_size, (1, 2))
    out = []
    for _ in range(songs):
        title = " ".join(rng.choice(vocab) for _ in range(3))
        parts = ["song", ":", title, "."]
        for _ in range(verses):
            for li in range(lines):
                parts += [rng.choice(vocab) for _ in range(rng.randint(5, 8))]
                parts.append("," if li + 1 < lines else ".")
            parts += ["sing"] + ["la"] * 8 + ["!"]
        parts.append("<eos>")
        out.append(" ".join(parts))
    return "\n".join(out) + "\n"


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=2026)
    ap.add_argument("--out", type=pathlib.Path,
                    default=pathlib.Path(__file__).resolve().parent.parent / "data")
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    rng = random.Random(args.seed)
    (args.out / "countdown.txt").write_text(countdown(rng, 30, 400, 700, 3000, 10))
    (args.out / "songbook.txt").write_text(songbook(rng, 75, 4, 4, 800))


if __name__ == "__main__":
    main()
