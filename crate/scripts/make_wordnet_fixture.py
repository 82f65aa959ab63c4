#!/usr/bin/env python3
"""Build the open-dictionary test fixture from the WordNet 3.1 database files.

Usage:
    npm pack wordnet-db && tar xzf wordnet-db-*.tgz
    python3 scripts/make_wordnet_fixture.py package/dict fixtures/wordnet

Outputs (all deterministic for a given WordNet release):
    dict.jsonl       sampled headwords with every WordNet sense as a definition
    parses.conllu    rule-based chunk/head parses of each definition
    cdv.txt          the 2,000 most frequent gloss lemmas over all of WordNet
    stopwords.txt    English stop-word list
    negators.txt     negation words kept as sememes
    embeddings.txt   64-dim random-indexing vectors for every headword

The parses are produced by a small head-rule chunker, not a trained parser.
They are valid dependency trees with plausible attachments, which is all the
distillation tests need.
"""

import hashlib
import json
import os
import random
import re
import sys
from collections import Counter, defaultdict

POS_FILES = {"noun": "n", "verb": "v", "adj": "a", "adv": "r"}
SEED = 20211
TARGET_SENSES = 3000
CDV_SIZE = 2000
EMB_DIM = 64

STOPWORDS = """i me my myself we our ours ourselves you you're you've you'll you'd your yours
yourself yourselves he him his himself she she's her hers herself it it's its itself they them
their theirs themselves what which who whom this that that'll these those am is are was were be
been being have has had having do does did doing a an the and but if or because as until while
of at by for with about against between into through during before after above below to from up
down in out on off over under again further then once here there when where why how all any both
each few more most other some such no nor not only own same so than too very s t can will just
don don't should should've now d ll m o re ve y ain aren aren't couldn couldn't didn didn't doesn
doesn't hadn hadn't hasn hasn't haven haven't isn isn't ma mightn mightn't mustn mustn't needn
needn't shan shan't shouldn shouldn't wasn wasn't weren weren't won won't wouldn wouldn't""".split()

NEGATORS = ["not", "no", "nor", "never", "neither", "none", "nothing", "nobody", "nowhere", "without"]

CLOSED = {}
for words, tag in [
    ("a an the this these those every each any some another both all either neither no", "DET"),
    ("of in for with on at by from about into through over under between against during without "
     "within along across behind beyond as than after before around among toward towards upon "
     "off out like via per near outside inside throughout below above down up", "ADP"),
    ("and or but nor", "CCONJ"),
    ("which who whom whose when where while if because although though whether until since "
     "unless whereby", "SCONJ"),
    ("it its they them their he she him her his you your we us our i me my one someone something "
     "anyone anything everything everyone nothing oneself itself themselves himself herself what "
     "somebody anybody", "PRON"),
    ("be is are was were been being am have has had having do does did can could may might must "
     "shall should will would", "AUX"),
    ("not", "PART"),
]:
    for w in words.split():
        CLOSED.setdefault(w, tag)

AUX_LEMMA = {"is": "be", "are": "be", "was": "be", "were": "be", "been": "be", "being": "be",
             "am": "be", "has": "have", "had": "have", "having": "have", "does": "do", "did": "do"}

IRREGULAR = {
    "made": "make", "making": "make", "took": "take", "taken": "take", "gave": "give",
    "given": "give", "came": "come", "saw": "see", "seen": "see", "knew": "know", "known": "know",
    "got": "get", "said": "say", "thought": "think", "told": "tell", "became": "become",
    "found": "find", "felt": "feel", "brought": "bring", "began": "begin", "begun": "begin",
    "kept": "keep", "held": "hold", "wrote": "write", "written": "write", "stood": "stand",
    "heard": "hear", "meant": "mean", "met": "meet", "ran": "run", "paid": "pay", "sat": "sit",
    "spoken": "speak", "led": "lead", "grew": "grow", "grown": "grow", "lost": "lose",
    "fell": "fall", "fallen": "fall", "sent": "send", "built": "build", "drawn": "draw",
    "broken": "break", "spent": "spend", "driven": "drive", "bought": "buy", "worn": "wear",
    "chosen": "choose", "thrown": "throw", "caught": "catch", "won": "win", "fought": "fight",
    "taught": "teach", "eaten": "eat", "sold": "sell", "flown": "fly", "hidden": "hide",
    "shaken": "shake", "struck": "strike", "torn": "tear", "shot": "shoot", "slept": "sleep",
    "fed": "feed", "dug": "dig", "hung": "hang", "bent": "bend", "went": "go", "gone": "go",
    "goes": "go", "children": "child", "men": "man", "women": "woman", "feet": "foot",
    "teeth": "tooth", "mice": "mouse", "geese": "goose", "people": "people", "lying": "lie",
    "dying": "die",
}

MORPH = {
    "n": [("s", ""), ("ses", "s"), ("xes", "x"), ("zes", "z"), ("ches", "ch"), ("shes", "sh"),
          ("men", "man"), ("ies", "y")],
    "v": [("s", ""), ("ies", "y"), ("es", "e"), ("es", ""), ("ed", "e"), ("ed", ""),
          ("ing", "e"), ("ing", "")],
    "a": [("er", ""), ("est", ""), ("er", "e"), ("est", "e")],
    "r": [],
}
UPOS = {"n": "NOUN", "v": "VERB", "a": "ADJ", "r": "ADV"}
TOKEN_RE = re.compile(r"[A-Za-z0-9]+(?:['-][A-Za-z0-9]+)*|[^\sA-Za-z0-9]")


def read_index(dict_dir):
    """lemma -> {pos: (tagsense_cnt, [offsets])}"""
    index = defaultdict(dict)
    for pos_name, p in POS_FILES.items():
        with open(os.path.join(dict_dir, f"index.{pos_name}"), encoding="utf-8") as f:
            for line in f:
                if line.startswith(" "):
                    continue
                parts = line.split()
                lemma, synset_cnt, p_cnt = parts[0], int(parts[2]), int(parts[3])
                rest = parts[4 + p_cnt:]
                tagsense = int(rest[1])
                offsets = rest[2:2 + synset_cnt]
                index[lemma][p] = (tagsense, offsets)
    return index


def clean_gloss(gloss):
    parts = []
    for piece in gloss.split(";"):
        piece = piece.strip()
        if not piece or piece.startswith('"'):
            break
        parts.append(piece)
    return "; ".join(parts)


def read_data(dict_dir):
    """(p, offset) -> (words, definition)"""
    synsets = {}
    for pos_name, p in POS_FILES.items():
        with open(os.path.join(dict_dir, f"data.{pos_name}"), encoding="utf-8") as f:
            for line in f:
                if line.startswith(" "):
                    continue
                head, _, gloss = line.partition(" | ")
                fields = head.split()
                offset, w_cnt = fields[0], int(fields[3], 16)
                words = [re.sub(r"\(.*\)$", "", fields[4 + 2 * i]).lower() for i in range(w_cnt)]
                synsets[(p, offset)] = (words, clean_gloss(gloss.strip()))
    return synsets


class Lemmatizer:
    def __init__(self, index):
        self.index = index

    def candidates(self, w):
        out = {}
        for p in "nvar":
            if p in self.index.get(w, {}):
                out[p] = w
                continue
            for suffix, repl in MORPH[p]:
                if w.endswith(suffix) and len(w) > len(suffix) + 1:
                    base = w[: -len(suffix)] + repl
                    if p in self.index.get(base, {}):
                        out[p] = base
                        break
            if p == "v" and p not in out and (w.endswith("ed") or w.endswith("ing")):
                stem = w[:-2] if w.endswith("ed") else w[:-3]
                if len(stem) > 2 and stem[-1] == stem[-2] and p in self.index.get(stem[:-1], {}):
                    out[p] = stem[:-1]
        return out

    def analyze(self, form):
        w = form.lower()
        if not re.match(r"[a-z0-9]", w):
            return w, "PUNCT"
        if w.isdigit():
            return w, "NUM"
        if w in CLOSED:
            return AUX_LEMMA.get(w, w), CLOSED[w]
        if w in IRREGULAR:
            return IRREGULAR[w], "VERB" if IRREGULAR[w] not in ("child", "man", "woman", "foot", "tooth", "mouse", "goose", "people") else "NOUN"
        cands = self.candidates(w)
        if not cands:
            return w, "NOUN"
        if w.endswith("ly") and "r" in cands:
            return cands["r"], "ADV"
        if (w.endswith("ed") or w.endswith("ing")) and "v" in cands and cands["v"] != w:
            if not (w.endswith("ing") and "n" in cands and cands["n"] == w and w.endswith("thing")):
                return cands["v"], "VERB"

        def weight(p):
            tag, _ = self.index[cands[p]][p]
            return (tag, "nvar".index(p) * -1)

        best = max(cands, key=weight)
        return cands[best], UPOS[best]


def tag_sentence(lemmatizer, text):
    toks = []
    for form in TOKEN_RE.findall(text):
        lemma, upos = lemmatizer.analyze(form)
        toks.append([form, lemma, upos])
    # context fixes for "that" and "to"
    for i, t in enumerate(toks):
        nxt = toks[i + 1][2] if i + 1 < len(toks) else None
        low = t[0].lower()
        if low == "that":
            t[2] = "DET" if nxt in ("NOUN", "ADJ") else "SCONJ"
        elif low == "to":
            t[2] = "PART" if nxt == "VERB" else "ADP"
    return toks


FUNCTION = {"DET", "ADP", "CCONJ", "SCONJ", "AUX", "PART"}
CONTENT_CAT = {"NOUN": "n", "PROPN": "n", "PRON": "n", "NUM": "n", "VERB": "v", "ADJ": "a", "ADV": "r"}
MOD_REL = {"DET": "det", "ADJ": "amod", "ADV": "advmod", "NUM": "nummod", "NOUN": "compound",
           "ADP": "case", "CCONJ": "cc", "SCONJ": "mark", "AUX": "aux", "PART": "mark"}


def chunk(toks):
    """Group content tokens into chunks; returns list of (head, members, category)."""
    chunks = []
    i, n = 0, len(toks)
    while i < n:
        upos = toks[i][2]
        if upos in FUNCTION or upos == "PUNCT":
            i += 1
            continue
        if upos in ("PRON", "VERB"):
            chunks.append((i, [i], CONTENT_CAT[upos]))
            i += 1
            continue
        j = i
        while j < n and toks[j][2] in ("ADJ", "ADV", "NUM", "NOUN", "PROPN"):
            j += 1
        span = list(range(i, j))
        nouns = [k for k in span if toks[k][2] in ("NOUN", "PROPN", "NUM")]
        if nouns and any(toks[k][2] in ("NOUN", "PROPN") for k in span):
            last = max(k for k in span if toks[k][2] in ("NOUN", "PROPN"))
            chunks.append((last, span[: last - i + 1], "n"))
            i = last + 1
            continue
        if j < n and toks[j][2] == "VERB" and all(toks[k][2] == "ADV" for k in span):
            chunks.append((j, span + [j], "v"))
            i = j + 1
            continue
        adjs = [k for k in span if toks[k][2] == "ADJ"]
        if adjs:
            head = adjs[-1]
            chunks.append((head, span[: head - i + 1], "a"))
            i = head + 1
            continue
        chunks.append((span[0], [span[0]], CONTENT_CAT[toks[span[0]][2]]))
        i = span[0] + 1
    return chunks


def parse(toks, gloss_pos):
    n = len(toks)
    heads = [None] * n
    rels = [None] * n
    chunks = chunk(toks)
    if not chunks:
        heads[0], rels[0] = 0, "root"
        for k in range(1, n):
            heads[k], rels[k] = 1, "dep"
        return heads, rels
    chunk_of = {}
    for ci, (head, members, _) in enumerate(chunks):
        for m in members:
            chunk_of[m] = ci
            if m != head:
                heads[m], rels[m] = head + 1, MOD_REL.get(toks[m][2], "dep")
    want = {"n": "n", "v": "v", "a": "a", "s": "a", "r": "r"}[gloss_pos]
    root_ci = next((ci for ci, c in enumerate(chunks) if c[2] == want), 0)
    root = chunks[root_ci][0]
    heads[root], rels[root] = 0, "root"

    # prefix function words of each chunk
    prefix = defaultdict(list)
    pending = []
    for k in range(n):
        if k in chunk_of:
            if pending:
                prefix[chunk_of[k]].extend(pending)
                pending = []
        elif toks[k][2] != "PUNCT":
            pending.append(k)
    for ci, (head, _, _) in enumerate(chunks):
        for k in prefix[ci]:
            heads[k], rels[k] = head + 1, MOD_REL.get(toks[k][2], "dep")

    for ci, (head, _, cat) in enumerate(chunks):
        if ci == root_ci:
            continue
        if ci < root_ci:
            heads[head], rels[head] = root + 1, "dep"
            continue
        pre = {toks[k][2] for k in prefix[ci]}
        prev_head, _, prev_cat = chunks[ci - 1]
        target, rel = prev_head, "dep"
        if "ADP" in pre:
            target, rel = prev_head, "nmod" if cat == "n" else "obl"
        elif "CCONJ" in pre:
            same = [c for c in chunks[:ci] if c[2] == cat]
            target, rel = (same[-1][0] if same else prev_head), "conj"
        elif cat == "v" and ("SCONJ" in pre or prev_cat == "n"):
            nouns = [c for c in chunks[:ci] if c[2] == "n"]
            target, rel = (nouns[-1][0] if nouns else prev_head), "acl"
        elif cat == "n" and prev_cat == "v":
            rel = "obj"
        heads[head], rels[head] = target + 1, rel

    for k in range(n):
        if heads[k] is None:
            if pending and k in pending:
                heads[k], rels[k] = chunks[-1][0] + 1, MOD_REL.get(toks[k][2], "dep")
            else:
                before = [c[0] for c in chunks if c[0] < k]
                heads[k], rels[k] = (before[-1] if before else root) + 1, "punct"
    return heads, rels


def check_tree(heads):
    n = len(heads)
    assert sum(1 for h in heads if h == 0) == 1
    for start in range(1, n + 1):
        seen, cur = set(), start
        while cur != 0:
            assert cur not in seen and heads[cur - 1] != cur
            seen.add(cur)
            cur = heads[cur - 1]


def random_index_vector(word):
    rng = random.Random(int(hashlib.sha256(word.encode()).hexdigest()[:16], 16))
    vec = [0.0] * EMB_DIM
    for _ in range(6):
        vec[rng.randrange(EMB_DIM)] += rng.choice((-1.0, 1.0))
    return vec


def main(dict_dir, out_dir):
    os.makedirs(out_dir, exist_ok=True)
    index = read_index(dict_dir)
    synsets = read_data(dict_dir)
    lem = Lemmatizer(index)

    # CDV from gloss frequencies over the whole database
    freq = Counter()
    gloss_lemmas = {}
    for key, (_, gloss) in synsets.items():
        lemmas = [lemma for lemma, upos in (lem.analyze(f) for f in TOKEN_RE.findall(gloss))
                  if upos != "PUNCT" and re.fullmatch(r"[a-z]+", lemma)]
        gloss_lemmas[key] = lemmas
        freq.update(lemmas)
    cdv = [w for w, _ in sorted(freq.items(), key=lambda kv: (-kv[1], kv[0]))[:CDV_SIZE]]

    # headword sample
    rng = random.Random(SEED)
    pool = sorted((w, p) for w, by_pos in index.items() for p, (tag, offs) in by_pos.items()
                  if re.fullmatch(r"[a-z]+(_[a-z]+)?", w) and 2 <= len(offs) <= 6 and tag > 0)
    rng.shuffle(pool)
    entries, total = [], 0
    for w, p in pool:
        if total >= TARGET_SENSES:
            break
        senses = []
        for off in index[w][p][1]:
            words, gloss = synsets[(p, off)]
            if gloss and 3 <= len(TOKEN_RE.findall(gloss)) <= 30:
                senses.append((f"{w}%{p}%{off}", gloss, synsets[(p, off)], off))
        if len(senses) >= 2:
            entries.append((w, p, senses))
            total += len(senses)
    entries.sort(key=lambda e: (e[0], e[1]))

    pos_name = {v: k for k, v in POS_FILES.items()}
    with open(os.path.join(out_dir, "dict.jsonl"), "w", encoding="utf-8") as f:
        for w, p, senses in entries:
            line = {"headword": w.replace("_", " "), "pos": pos_name[p],
                    "senses": [{"id": sid, "definition": gloss} for sid, gloss, _, _ in senses]}
            f.write(json.dumps(line, ensure_ascii=False) + "\n")

    blocks = []
    for w, p, senses in entries:
        for sid, gloss, _, off in senses:
            gloss_pos = "s" if p == "a" else p
            toks = tag_sentence(lem, gloss)
            heads, rels = parse(toks, gloss_pos)
            check_tree(heads)
            rows = [f"# sense_id = {sid}", f"# text = {gloss}"]
            for k, (form, lemma, upos) in enumerate(toks):
                rows.append(f"{k + 1}\t{form}\t{lemma}\t{upos}\t_\t_\t{heads[k]}\t{rels[k]}\t_\t_")
            blocks.append((sid, "\n".join(rows)))
    blocks.sort()
    with open(os.path.join(out_dir, "parses.conllu"), "w", encoding="utf-8") as f:
        f.write("# pipeline = wordnet-headrules@1\n\n")
        for _, block in blocks:
            f.write(block + "\n\n")

    with open(os.path.join(out_dir, "cdv.txt"), "w", encoding="utf-8") as f:
        f.write("# 2,000 most frequent gloss lemmas in WordNet 3.1\n")
        f.write("\n".join(cdv) + "\n")
    with open(os.path.join(out_dir, "stopwords.txt"), "w", encoding="utf-8") as f:
        f.write("# English stop words\n" + "\n".join(STOPWORDS) + "\n")
    with open(os.path.join(out_dir, "negators.txt"), "w", encoding="utf-8") as f:
        f.write("# negation words kept as sememes\n" + "\n".join(NEGATORS) + "\n")

    # random-indexing embeddings: own vector + synonyms + gloss context over all senses
    stop = set(STOPWORDS)
    headwords = sorted({w for w, _, _ in entries})
    with open(os.path.join(out_dir, "embeddings.txt"), "w", encoding="utf-8") as f:
        f.write(f"{len(headwords)} {EMB_DIM}\n")
        for w in headwords:
            vec = [2.0 * x for x in random_index_vector(w)]
            for p, (_, offs) in sorted(index[w].items()):
                for off in offs:
                    words, _ = synsets[(p, off)]
                    ctx = [x for x in words if x != w] + [x for x in gloss_lemmas[(p, off)] if x not in stop]
                    for c in ctx:
                        vec = [a + b for a, b in zip(vec, random_index_vector(c))]
            f.write(w + " " + " ".join(f"{x:.1f}" for x in vec) + "\n")

    print(f"{len(entries)} entries, {total} senses, {len(headwords)} headwords", file=sys.stderr)


if __name__ == "__main__":
    main(sys.argv[1], sys.argv[2])
