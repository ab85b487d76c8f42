#!/usr/bin/env python3
# Copyright 2026 The sylemb Authors
# SPDX-License-Identifier: Apache-2.0
"""Regenerates the toy embeddings, word pairs and annotations in data/toy.

Word vectors are normalized sums of random syllable vectors, so a vanilla
model can fit them exactly.
"""

import math
import pathlib
import random

DIM = 16
ROOT = pathlib.Path(__file__).resolve().parent.parent / "data" / "toy"


def normalize(v):
    n = math.sqrt(sum(x * x for x in v))
    return [x / n for x in v]


def cosine(a, b):
    return sum(x * y for x, y in zip(a, b))


def main():
    rng = random.Random(2026)
    decomp = {}
    for line in (ROOT / "decomp.tsv").read_text().splitlines():
        word, syl = line.split("\t")
        decomp[word] = syl.split("-")
    syllables = sorted({s for parts in decomp.values() for s in parts})
    hidden = {s: [rng.uniform(-1, 1) for _ in range(DIM)] for s in syllables}
    vectors = {}
    for word, parts in decomp.items():
        if word in ("yesterday", "together"):
            continue  # decomposed but without a vector
        vectors[word] = normalize([sum(hidden[s][i] for s in parts) for i in range(DIM)])
    vectors["zebra"] = normalize([rng.uniform(-1, 1) for _ in range(DIM)])  # vector but no decomposition
    with open(ROOT / "embeddings.txt", "w") as f:
        f.write(f"{len(vectors)} {DIM}\n")
        for word, v in vectors.items():
            f.write(word + " " + " ".join(f"{x:.6f}" for x in v) + "\n")

    words = sorted(vectors)
    pairs = []
    while len(pairs) < 40:
        a, b = rng.sample(words, 2)
        if a == "zebra" or b == "zebra":
            continue
        gold = round(5 + 5 * cosine(vectors[a], vectors[b]) + rng.uniform(-0.3, 0.3), 2)
        pairs.append((a, b, gold))
    # Words outside the decomposition table.
    pairs += [("sunbox", "box", 7.5), ("cattree", "tree", 6.0), ("zebra", "tiger", 8.0), ("car insurance", "doctor", 2.0)]
    with open(ROOT / "pairs.tsv", "w") as f:
        f.write("word1\tword2\tscore\n")
        for a, b, g in pairs:
            f.write(f"{a}\t{b}\t{g}\n")

    with open(ROOT / "annotations.tsv", "w") as f:
        f.write("pair_id\tword1\tword2\tannotator1\tannotator2\tannotator3\n")
        for i, (a, b, g) in enumerate(pairs[:12]):
            base = max(0, min(4, round(g / 2.5)))
            scores = [max(0, min(4, base + rng.choice([-1, 0, 0, 0, 1]))) for _ in range(3)]
            f.write(f"p{i + 1}\t{a}\t{b}\t" + "\t".join(map(str, scores)) + "\n")
        f.write("p13\tcar\tbox\t4\t1\t1\n")

    with open(ROOT / "words.txt", "w") as f:
        for w in ["apple", "car insurance", "sunbox", "zebra", "yesterday", "lemon"]:
            f.write(w + "\n")


if __name__ == "__main__":
    main()
