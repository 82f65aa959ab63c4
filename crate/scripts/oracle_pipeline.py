#!/usr/bin/env python3
"""Independent re-implementation of the build/annotate/distill pipeline over
sidecar lemmas, used to produce expected outputs for the integration tests.

Usage:
    python3 scripts/oracle_pipeline.py DICT CONLLU CDV STOPWORDS NEGATORS OUT_DIR

Writes OUT_DIR/inventory.tsv (sememe, count), OUT_DIR/full.tsv and
OUT_DIR/distilled.tsv (sense_id, space-separated sememes) with the default
hyper-parameters (top 1%, bottom 10%, t=1, m=4).
"""

import json
import math
import os
import re
import sys
from collections import Counter

TOP, BOTTOM, SLACK, MIN_SEMEMES = 0.01, 0.10, 1, 4


def canon(word):
    return re.sub(r"\s+", "_", word.strip().lower())


def read_list(path):
    out = []
    with open(path, encoding="utf-8") as f:
        for line in f:
            line = line.strip()
            if line and not line.startswith("#"):
                w = canon(line)
                if w not in out:
                    out.append(w)
    return out


def read_conllu(path):
    blocks, sid, toks = {}, None, []
    with open(path, encoding="utf-8") as f:
        for line in f.read().split("\n") + [""]:
            if not line.strip():
                if sid is not None and toks:
                    blocks[sid] = toks
                sid, toks = None, []
                continue
            if line.startswith("#"):
                key, _, value = line[1:].partition("=")
                if key.strip() == "sense_id":
                    sid = value.strip()
                continue
            cols = line.split("\t")
            if "-" in cols[0] or "." in cols[0]:
                continue
            lemma = cols[2] if cols[2] != "_" else cols[1]
            toks.append((int(cols[0]), canon(lemma), int(cols[6])))
    return blocks


def ceil_fraction(fraction, n):
    exact = fraction * n
    r = round(exact)
    return int(r) if abs(exact - r) < 1e-9 else math.ceil(exact)


def main(dict_path, conllu_path, cdv_path, stop_path, neg_path, out_dir):
    entries = [json.loads(l) for l in open(dict_path, encoding="utf-8") if l.strip()]
    parses = read_conllu(conllu_path)
    stop, neg = set(read_list(stop_path)), set(read_list(neg_path))
    vocab = [w for w in read_list(cdv_path) if w not in stop or w in neg]

    counts = Counter({w: 0 for w in vocab})
    for e in entries:
        for s in e["senses"]:
            for _, lemma, _ in parses[s["id"]]:
                if lemma in counts:
                    counts[lemma] += 1
    ranked = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    n = len(ranked)
    kept = ranked[ceil_fraction(TOP, n): n - ceil_fraction(BOTTOM, n)]
    inventory = {w: c for w, c in kept if c > 0}

    full, distilled = {}, {}
    for e in entries:
        for s in e["senses"]:
            toks = parses[s["id"]]
            sememes = sorted({lemma for _, lemma, _ in toks if lemma in inventory})
            if not sememes:
                continue
            full[s["id"]] = sememes
            if len(sememes) < MIN_SEMEMES:
                distilled[s["id"]] = sememes
                continue
            children = Counter(head for _, _, head in toks)
            score = {w: max(children[i] for i, lemma, _ in toks if lemma == w) for w in sememes}
            best = max(score.values())
            distilled[s["id"]] = [w for w in sememes if score[w] >= best - SLACK]

    os.makedirs(out_dir, exist_ok=True)
    with open(os.path.join(out_dir, "inventory.tsv"), "w", encoding="utf-8") as f:
        for w in sorted(inventory):
            f.write(f"{w}\t{inventory[w]}\n")
    for name, table in [("full.tsv", full), ("distilled.tsv", distilled)]:
        with open(os.path.join(out_dir, name), "w", encoding="utf-8") as f:
            for sid in sorted(table):
                f.write(f"{sid}\t{' '.join(table[sid])}\n")


if __name__ == "__main__":
    main(*sys.argv[1:7])
