//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::collections::{BTreeMap, BTreeSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use skb_forge::eval::{average_precision, evaluate_consistency, predict_sememes, split_holdout, EvalConfig};
use skb_forge::extract::{build_skb, distill_sense, distill_skb, importance_scores, DistillConfig};
use skb_forge::ingest::{parse_conllu, parse_dictionary, read_skb, EmbeddingTable};
use skb_forge::sememe_set::{trim_by_frequency, FrequencyTable, SememeSetConfig, SememeSetError};
use skb_forge::substitution::SubstitutionIndex;
use skb_forge::{Lemma, Pos, SememeInventory, Skb, SkbRecord, TokenAnnotation};

struct Verdict {
    pass: bool,
    detail: String,
}

impl Verdict {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Verdict { pass, detail: detail.into() }
    }
}

fn l(s: &str) -> Lemma {
    Lemma::new(s).unwrap()
}

fn set(words: &[&str]) -> BTreeSet<Lemma> {
    words.iter().map(|w| l(w)).collect()
}

fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn read_fixture(rel: &str) -> Vec<u8> {
    std::fs::read(fixtures().join(rel)).unwrap()
}

fn main() {
    let criteria: [(&str, fn() -> Verdict); 8] = [
        ("worked-example fidelity", worked_example),
        ("trimming arithmetic", trimming),
        ("distillation properties", distillation),
        ("eval oracle equivalence", eval_oracle),
        ("eval sanity (twins, random control)", eval_sanity),
        ("substitution index", substitution),
        ("substitute-count gap on open fixture", substitute_gap),
        ("cli determinism", determinism),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let start = Instant::now();
        let verdict = catch_unwind(AssertUnwindSafe(check))
            .unwrap_or_else(|e| Verdict::new(false, format!("panicked: {}", panic_message(&e))));
        let tag = if verdict.pass { "PASS" } else { "FAIL" };
        println!("[{tag}] {name}: {} ({:.2}s)", verdict.detail, start.elapsed().as_secs_f64());
        failed += usize::from(!verdict.pass);
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}

fn panic_message(e: &Box<dyn std::any::Any + Send>) -> String {
    e.downcast_ref::<String>()
        .cloned()
        .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
        .unwrap_or_default()
}

// ---------------------------------------------------------------------------

fn worked_example() -> Verdict {
    let start = Instant::now();
    let entries = parse_dictionary(read_fixture("beautiful/dict.jsonl").as_slice()).unwrap();
    let parses = parse_conllu(read_fixture("beautiful/parses.conllu").as_slice()).unwrap();
    let inventory = read_skb(read_fixture("beautiful/inventory.skb").as_slice()).unwrap().into_parts().0;
    let full = build_skb(&entries, &inventory, Some(&parses)).unwrap().skb;
    let distilled = distill_skb(&full, &parses, &DistillConfig { slack: 1, min_sememes: 4 }).unwrap().skb;
    let elapsed = start.elapsed();

    let s1 = set(&["beautiful", "extremely", "attractive", "look"]);
    let s2 = set(&["good", "give", "pleasure"]);
    let scores = importance_scores(&parses["beautiful%adj%1"], &s1).unwrap();
    let want_scores: BTreeMap<Lemma, u32> =
        [("beautiful", 2), ("extremely", 0), ("attractive", 6), ("look", 0)].iter().map(|(w, c)| (l(w), *c)).collect();
    let ok = full.get("beautiful%adj%1").map(|r| &r.sememes) == Some(&s1)
        && full.get("beautiful%adj%2").map(|r| &r.sememes) == Some(&s2)
        && scores == want_scores
        && distilled.get("beautiful%adj%1").map(|r| &r.sememes) == Some(&set(&["attractive"]))
        && distilled.get("beautiful%adj%2").map(|r| &r.sememes) == Some(&s2)
        && elapsed < Duration::from_secs(1);
    Verdict::new(ok, format!("extraction, scores 2/0/6/0 and distillation exact; {:.1} ms", elapsed.as_secs_f64() * 1e3))
}

// ---------------------------------------------------------------------------

/// Sort-and-slice reference with integer ceilings for the default 1% / 10%.
fn trim_oracle(counts: &BTreeMap<String, u64>) -> Option<BTreeMap<String, u64>> {
    let mut ranked: Vec<(&String, &u64)> = counts.iter().collect();
    ranked.sort_by(|a, b| b.1.cmp(a.1).then(a.0.cmp(b.0)));
    let n = ranked.len();
    let (top, bottom) = (n.div_ceil(100), n.div_ceil(10));
    if top + bottom >= n {
        return None;
    }
    let kept: BTreeMap<String, u64> =
        ranked[top..n - bottom].iter().filter(|(_, c)| **c > 0).map(|(w, c)| ((*w).clone(), **c)).collect();
    (!kept.is_empty()).then_some(kept)
}

fn trim_impl(counts: &BTreeMap<String, u64>) -> Option<BTreeMap<String, u64>> {
    let table = FrequencyTable::from_counts(counts.iter().map(|(w, c)| (l(w), *c)));
    match trim_by_frequency(&table, &SememeSetConfig::default()) {
        Ok(inv) => Some(inv.iter().map(|(w, c)| (w.to_string(), c)).collect()),
        Err(SememeSetError::DegenerateTrim { .. }) => None,
        Err(e) => panic!("{e}"),
    }
}

fn trimming() -> Verdict {
    let names: Vec<String> = (0..100).map(|i| format!("l{i:03}")).collect();

    let distinct: BTreeMap<String, u64> = names.iter().cloned().zip(1..=100).collect();
    let kept = trim_impl(&distinct).unwrap();
    let removed: BTreeSet<&String> = names.iter().filter(|n| !kept.contains_key(*n)).collect();
    let want_removed: BTreeSet<&String> = names.iter().take(10).chain(names.last()).collect();
    let exact_counts = kept.len() == 89 && removed == want_removed;

    let tied: BTreeMap<String, u64> = names.iter().map(|n| (n.clone(), 5)).collect();
    let kept = trim_impl(&tied).unwrap();
    let tie_ok = !kept.contains_key("l000") && (90..100).all(|i| !kept.contains_key(&names[i])) && kept.len() == 89;

    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut mismatches = 0;
    for _ in 0..500 {
        let n = rng.random_range(1..400);
        let mut counts = BTreeMap::new();
        while counts.len() < n {
            let len = rng.random_range(1..7);
            let w: String = (0..len).map(|_| rng.random_range(b'a'..=b'z') as char).collect();
            counts.insert(w, rng.random_range(0..40));
        }
        if trim_impl(&counts) != trim_oracle(&counts) {
            mismatches += 1;
        }
    }
    Verdict::new(
        exact_counts && tie_ok && mismatches == 0,
        format!("100 lemmas: 1 top + 10 bottom removed = {exact_counts}; ties lexicographic = {tie_ok}; {mismatches}/500 mismatches"),
    )
}

// ---------------------------------------------------------------------------

fn random_tree(rng: &mut ChaCha8Rng, n: usize, alphabet: usize) -> Vec<TokenAnnotation> {
    let mut order: Vec<usize> = (1..=n).collect();
    order.shuffle(rng);
    let mut heads = vec![0usize; n + 1];
    for j in 1..n {
        heads[order[j]] = order[rng.random_range(0..j)];
    }
    (1..=n)
        .map(|i| {
            let lemma = format!("s{}", rng.random_range(0..alphabet));
            TokenAnnotation {
                index: i,
                form: lemma.clone(),
                lemma: l(&lemma),
                upos: None,
                head: Some(heads[i]),
                deprel: None,
            }
        })
        .collect()
}

fn brute_score(tokens: &[TokenAnnotation], s: &Lemma) -> u32 {
    tokens
        .iter()
        .filter(|t| t.lemma == *s)
        .map(|t| tokens.iter().filter(|u| u.head == Some(t.index)).count() as u32)
        .max()
        .unwrap()
}

fn distillation() -> Verdict {
    let cfg = DistillConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut violations = 0;
    let mut distilled = 0;
    for _ in 0..1000 {
        let n = rng.random_range(1..25);
        let tokens = random_tree(&mut rng, n, 10);
        let present: Vec<Lemma> = tokens.iter().map(|t| t.lemma.clone()).collect::<BTreeSet<_>>().into_iter().collect();
        let mut sememes: BTreeSet<Lemma> = present.iter().filter(|_| rng.random_bool(0.6)).cloned().collect();
        if sememes.is_empty() {
            sememes.insert(present[rng.random_range(0..present.len())].clone());
        }
        let scores = importance_scores(&tokens, &sememes).unwrap();
        let out = distill_sense(&sememes, &scores, &cfg);
        let mut ok = !out.is_empty()
            && out.is_subset(&sememes)
            && distill_sense(&out, &scores, &cfg) == out
            && sememes.iter().all(|s| scores[s] == brute_score(&tokens, s));
        if sememes.len() < cfg.min_sememes {
            ok &= out == sememes;
        } else {
            distilled += 1;
            let best = sememes.iter().map(|s| brute_score(&tokens, s)).max().unwrap();
            ok &= sememes.iter().all(|s| out.contains(s) == (brute_score(&tokens, s) + cfg.slack >= best));
        }
        violations += usize::from(!ok);
    }
    Verdict::new(violations == 0, format!("{violations}/1000 violations ({distilled} senses at or above m)"))
}

// ---------------------------------------------------------------------------

struct EvalCase {
    words: Vec<String>,
    senses: Vec<Vec<BTreeSet<String>>>,
    vectors: Vec<Vec<f64>>,
    target: usize,
    gold: BTreeSet<String>,
    k: usize,
    c: f64,
}

fn random_sememes(rng: &mut ChaCha8Rng, alphabet: usize, max: usize) -> BTreeSet<String> {
    (0..rng.random_range(1..=max)).map(|_| format!("m{}", rng.random_range(0..alphabet))).collect()
}

fn random_eval_case(rng: &mut ChaCha8Rng) -> EvalCase {
    let n = rng.random_range(2..=10);
    let dim = rng.random_range(1..=4);
    EvalCase {
        words: (0..n).map(|i| format!("w{i}")).collect(),
        senses: (0..n).map(|_| (0..rng.random_range(1..=2)).map(|_| random_sememes(rng, 6, 3)).collect()).collect(),
        vectors: (0..n).map(|_| (0..dim).map(|_| f64::from(rng.random_range(-3i32..=3))).collect()).collect(),
        target: rng.random_range(0..n),
        gold: random_sememes(rng, 6, 3),
        k: rng.random_range(1..12),
        c: rng.random_range(0.1..0.95),
    }
}

fn ref_cos(a: &[f64], b: &[f64]) -> f64 {
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let na = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    if na == 0.0 || nb == 0.0 {
        0.0
    } else {
        dot / (na * nb)
    }
}

/// Enumerates every neighbour, keeps the top k and sums
/// `cos * c^rank` per sememe. `None` when two different vectors have
/// cosines too close to order without ambiguity.
fn ref_predict(
    target: &[f64],
    neighbors: &[(&String, &[f64], BTreeSet<&String>)],
    k: usize,
    c: f64,
) -> Option<Vec<(String, f64)>> {
    let mut sims: Vec<(usize, f64)> = neighbors.iter().enumerate().map(|(i, n)| (i, ref_cos(target, n.1))).collect();
    for (i, a) in &sims {
        for (j, b) in &sims {
            if i != j && a != b && (a - b).abs() < 1e-9 && neighbors[*i].1 != neighbors[*j].1 {
                return None;
            }
        }
    }
    sims.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then(neighbors[a.0].0.cmp(neighbors[b.0].0)));
    let mut scores: BTreeMap<String, f64> = BTreeMap::new();
    for (rank, (i, cos)) in sims.iter().take(k).enumerate() {
        for s in &neighbors[*i].2 {
            *scores.entry((*s).clone()).or_default() += cos * c.powi(rank as i32 + 1);
        }
    }
    let mut ranked: Vec<(String, f64)> = scores.into_iter().filter(|(_, v)| *v > 0.0).collect();
    ranked.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then(a.0.cmp(&b.0)));
    Some(ranked)
}

fn ref_ap(ranked: &[String], gold: &BTreeSet<String>) -> f64 {
    let mut total = 0.0;
    for r in 0..ranked.len() {
        if gold.contains(&ranked[r]) {
            let found = ranked[..=r].iter().filter(|x| gold.contains(*x)).count();
            total += found as f64 / (r + 1) as f64;
        }
    }
    total / gold.len() as f64
}

fn eval_oracle() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let (mut checked, mut skipped, mut mismatches) = (0, 0, 0);
    let mut worst: f64 = 0.0;
    while checked < 200 {
        let case = random_eval_case(&mut rng);
        let neighbors: Vec<(&String, &[f64], BTreeSet<&String>)> = (0..case.words.len())
            .filter(|&i| i != case.target)
            .map(|i| (&case.words[i], case.vectors[i].as_slice(), case.senses[i].iter().flatten().collect()))
            .collect();
        let Some(want) = ref_predict(&case.vectors[case.target], &neighbors, case.k, case.c) else {
            skipped += 1;
            continue;
        };
        checked += 1;

        let mut all: BTreeSet<&String> = case.gold.iter().collect();
        all.extend(case.senses.iter().flatten().flatten());
        let inventory = SememeInventory::from_counts(all.iter().map(|s| (l(s), 1))).unwrap();
        let words = &case.words;
        let records = (0..words.len()).filter(|&i| i != case.target).flat_map(|i| {
            case.senses[i].iter().enumerate().map(move |(j, s)| SkbRecord {
                headword: l(&words[i]),
                pos: Pos::unknown(),
                sense_id: format!("{}#{j}", words[i]),
                sememes: s.iter().map(|x| l(x)).collect(),
            })
        });
        let train = Skb::from_records(inventory, records).unwrap();
        let target = SkbRecord {
            headword: l(&case.words[case.target]),
            pos: Pos::unknown(),
            sense_id: "target".into(),
            sememes: case.gold.iter().map(|x| l(x)).collect(),
        };
        let emb = EmbeddingTable::from_vectors(
            case.vectors[0].len(),
            case.words.iter().zip(&case.vectors).map(|(w, v)| (l(w), v.clone())),
        );
        let cfg = EvalConfig { k_neighbors: case.k, rank_decay: case.c, ..EvalConfig::default() };
        let got = predict_sememes(&target, &train, &emb, &cfg).unwrap();

        let mut ok = got.len() == want.len();
        for ((gl, gs), (wl, ws)) in got.iter().zip(&want) {
            worst = worst.max((gs - ws).abs());
            ok &= gl.as_str() == wl && (gs - ws).abs() <= 1e-9;
        }
        let order: Vec<Lemma> = got.iter().map(|(x, _)| x.clone()).collect();
        let want_order: Vec<String> = want.iter().map(|(x, _)| x.clone()).collect();
        let ap_diff = (average_precision(&order, &target.sememes).unwrap() - ref_ap(&want_order, &case.gold)).abs();
        worst = worst.max(ap_diff);
        ok &= ap_diff <= 1e-9;
        mismatches += usize::from(!ok);
    }
    Verdict::new(
        mismatches == 0,
        format!("{mismatches}/200 mismatches, max abs diff {worst:.1e} (tol 1e-9); {skipped} near-tie draws redrawn"),
    )
}

// ---------------------------------------------------------------------------

fn unit_random(rng: &mut ChaCha8Rng, dim: usize) -> Vec<f64> {
    (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect()
}

fn build(records: Vec<SkbRecord>) -> Skb {
    let all: BTreeSet<Lemma> = records.iter().flat_map(|r| r.sememes.iter().cloned()).collect();
    Skb::from_records(SememeInventory::from_counts(all.into_iter().map(|s| (s, 1))).unwrap(), records).unwrap()
}

fn record(word: &str, id: &str, sememes: &BTreeSet<String>) -> SkbRecord {
    SkbRecord {
        headword: l(word),
        pos: Pos::unknown(),
        sense_id: id.to_string(),
        sememes: sememes.iter().map(|s| l(s)).collect(),
    }
}

/// MAP of the reference predictor over the held-out part of `skb`.
fn ref_map(skb: &Skb, vectors: &BTreeMap<String, Vec<f64>>, cfg: &EvalConfig) -> f64 {
    let (train, test) = split_holdout(skb, cfg).unwrap();
    let pools: BTreeMap<String, BTreeSet<String>> = train
        .headwords()
        .map(|w| (w.to_string(), train.lookup(w).iter().flat_map(|r| r.sememes.iter().map(|s| s.to_string())).collect()))
        .collect();
    let mut total = 0.0;
    for rec in &test {
        let neighbors: Vec<(&String, &[f64], BTreeSet<&String>)> = pools
            .iter()
            .filter(|(w, _)| w.as_str() != rec.headword.as_str())
            .map(|(w, p)| (w, vectors[w].as_slice(), p.iter().collect()))
            .collect();
        let ranked = ref_predict(&vectors[rec.headword.as_str()], &neighbors, cfg.k_neighbors, cfg.rank_decay)
            .expect("continuous random vectors have no near ties");
        let order: Vec<String> = ranked.into_iter().map(|(s, _)| s).collect();
        total += ref_ap(&order, &rec.sememes.iter().map(|s| s.to_string()).collect());
    }
    total / test.len() as f64
}

fn eval_sanity() -> Verdict {
    let start = Instant::now();
    let cfg = EvalConfig { seed: 5, ..EvalConfig::default() };
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let (dim, control_dim) = (300, 64);

    // twins: 50 pairs sharing a sememe set and a direction
    let mut records = Vec::new();
    let mut vectors: BTreeMap<String, Vec<f64>> = BTreeMap::new();
    for p in 0..50 {
        let sememes: BTreeSet<String> = (0..3).map(|j| format!("p{p}x{j}")).collect();
        let base = unit_random(&mut rng, dim);
        for side in ["a", "b"] {
            let w = format!("{side}{p:02}");
            records.push(record(&w, &format!("{w}%1"), &sememes));
            vectors.insert(w, base.iter().map(|x| x + rng.random_range(-1e-3..1e-3)).collect());
        }
    }
    let twins = build(records);
    let (_, test) = split_holdout(&twins, &cfg).unwrap();
    let held: BTreeSet<&str> = test.iter().map(|r| r.headword.as_str()).collect();
    let twin_in_train = held.iter().all(|w| {
        let other = if let Some(rest) = w.strip_prefix('a') { format!("b{rest}") } else { format!("a{}", &w[1..]) };
        !held.contains(other.as_str())
    });
    let emb = EmbeddingTable::from_vectors(dim, vectors.iter().map(|(w, v)| (l(w), v.clone())));
    let twin_report = evaluate_consistency(&twins, &emb, &cfg).unwrap();

    // random control: sememes and vectors drawn independently
    let mut records = Vec::new();
    let mut vectors: BTreeMap<String, Vec<f64>> = BTreeMap::new();
    for i in 0..400 {
        let w = format!("r{i:03}");
        for s in 0..rng.random_range(1..=3) {
            records.push(record(&w, &format!("{w}%{s}"), &random_sememes(&mut rng, 40, 4)));
        }
        vectors.insert(w, unit_random(&mut rng, control_dim));
    }
    let control = build(records);
    let emb = EmbeddingTable::from_vectors(control_dim, vectors.iter().map(|(w, v)| (l(w), v.clone())));
    let control_map = evaluate_consistency(&control, &emb, &cfg).unwrap().map_score;
    let words: Vec<String> = vectors.keys().cloned().collect();
    let mut chance = 0.0;
    let shuffles = 32;
    for _ in 0..shuffles {
        let mut perm = words.clone();
        perm.shuffle(&mut rng);
        let shuffled: BTreeMap<String, Vec<f64>> =
            words.iter().zip(&perm).map(|(w, from)| (w.clone(), vectors[from].clone())).collect();
        chance += ref_map(&control, &shuffled, &cfg);
    }
    chance /= shuffles as f64;

    // disjoint control: no sememe is shared, so chance is exactly zero
    let disjoint = build(
        (0..100).map(|i| record(&format!("d{i:03}"), &format!("d{i:03}%1"), &[format!("q{i}")].into())).collect(),
    );
    let emb = EmbeddingTable::from_vectors(
        control_dim,
        (0..100).map(|i| (l(&format!("d{i:03}")), unit_random(&mut rng, control_dim))),
    );
    let disjoint_map = evaluate_consistency(&disjoint, &emb, &cfg).unwrap().map_score;

    let elapsed = start.elapsed();
    let ok = twin_in_train
        && twin_report.map_score >= 0.99
        && twin_report.f1_score >= 0.95
        && (control_map - chance).abs() <= 0.05
        && disjoint_map.abs() <= 0.05
        && elapsed < Duration::from_secs(60);
    Verdict::new(
        ok,
        format!(
            "twins MAP {:.4} F1 {:.4} (every held-out twin's partner in train: {twin_in_train}); \
             random MAP {control_map:.4} vs chance {chance:.4}; disjoint MAP {disjoint_map:.4} vs 0",
            twin_report.map_score, twin_report.f1_score
        ),
    )
}

// ---------------------------------------------------------------------------

fn substitution() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    let mut violations = 0;
    for case in 0..200 {
        let match_pos = case % 2 == 0;
        let n = rng.random_range(1..=100);
        let recs: Vec<(String, Option<&str>, BTreeSet<String>)> = (0..n)
            .map(|_| {
                let pos = [None, Some("noun"), Some("adj")][rng.random_range(0..3)];
                (format!("w{}", rng.random_range(0..30)), pos, random_sememes(&mut rng, 4, 2))
            })
            .collect();
        let skb = build(
            recs.iter()
                .enumerate()
                .map(|(i, (w, pos, s))| SkbRecord { pos: Pos::new(*pos), ..record(w, &format!("s{i}"), s) })
                .collect(),
        );
        let index = SubstitutionIndex::build(&skb, match_pos).unwrap();
        let mut ok = index.buckets().map(|(_, b)| b.len()).sum::<usize>() == n;
        let words: BTreeSet<&String> = recs.iter().map(|r| &r.0).collect();
        for w in &words {
            let mut want = BTreeSet::new();
            for a in recs.iter().filter(|r| &r.0 == *w) {
                for b in recs.iter().filter(|r| &r.0 != *w) {
                    let pos_ok = !match_pos || a.1.is_none() || b.1.is_none() || a.1 == b.1;
                    if a.2 == b.2 && pos_ok {
                        want.insert(b.0.clone());
                    }
                }
            }
            let got: BTreeSet<String> = index.substitutes(&l(w), None).unwrap().iter().map(|x| x.to_string()).collect();
            ok &= got == want && !got.contains(*w);
            ok &= got.iter().all(|o| index.substitutes(&l(o), None).unwrap().contains(&l(w)));
        }
        violations += usize::from(!ok);
    }
    Verdict::new(violations == 0, format!("{violations}/200 instances with oracle, symmetry or irreflexivity violations"))
}

// ---------------------------------------------------------------------------

fn skb_forge(args: &[&str], jobs: &str) -> Vec<u8> {
    let out = Command::new(env!("CARGO_BIN_EXE_skb-forge"))
        .args(args)
        .env("SKB_FORGE_JOBS", jobs)
        .env("RUST_LOG", "error")
        .output()
        .unwrap();
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    out.stdout
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

/// Runs build, annotate, distill, eval and every query command on the
/// WordNet fixture; returns every produced file and stdout keyed by name.
fn run_pipeline(dir: &Path, jobs: &str) -> BTreeMap<String, Vec<u8>> {
    let wn = fixtures().join("wordnet");
    let f = |name: &str| wn.join(name);
    let o = |name: &str| dir.join(name);
    let mut outputs = BTreeMap::new();
    let mut run = |name: &str, args: Vec<&str>| {
        outputs.insert(format!("{name}.stdout"), skb_forge(&args, jobs));
    };
    let (dict, conllu) = (f("dict.jsonl"), f("parses.conllu"));
    let (inv, full, dist) = (o("inv.skb"), o("full.skb"), o("dist.skb"));
    let (cdv, sw, neg, emb) = (f("cdv.txt"), f("stopwords.txt"), f("negators.txt"), f("embeddings.txt"));
    let manifest = o("build.manifest.json");
    run(
        "build",
        vec![
            "build-sememe-set", "--dict", p(&dict), "--cdv", p(&cdv), "--stopwords", p(&sw), "--negators", p(&neg),
            "--conllu", p(&conllu), "--out", p(&inv), "--manifest", p(&manifest),
        ],
    );
    let diag = o("annotate.diag.jsonl");
    run(
        "annotate",
        vec!["annotate", "--dict", p(&dict), "--inventory", p(&inv), "--conllu", p(&conllu), "--out", p(&full), "--diagnostics", p(&diag)],
    );
    run("distill", vec!["distill", "--skb", p(&full), "--conllu", p(&conllu), "--t", "1", "--m", "4", "--out", p(&dist)]);
    run("eval", vec!["eval-consistency", "--skb", p(&full), "--embeddings", p(&emb), "--seed", "7"]);
    run("eval-distilled", vec!["eval-consistency", "--skb", p(&dist), "--embeddings", p(&emb), "--seed", "7"]);
    run("stats-full", vec!["stats", "--skb", p(&full), "--substitutes"]);
    run("stats-dist", vec!["stats", "--skb", p(&dist), "--substitutes"]);
    run("stats-size", vec!["stats", "--skb", p(&dist)]);
    run("substitutes", vec!["substitutes", "--skb", p(&dist), "boost"]);
    run("export-tsv", vec!["export", "--skb", p(&dist), "--format", "tsv"]);
    run("export-effective", vec!["export", "--skb", p(&full), "--effective"]);
    for name in ["inv.skb", "full.skb", "dist.skb", "annotate.diag.jsonl"] {
        outputs.insert(name.to_string(), std::fs::read(o(name)).unwrap());
    }
    let mut m: serde_json::Value = serde_json::from_slice(&std::fs::read(manifest).unwrap()).unwrap();
    m.as_object_mut().unwrap().remove("stages");
    let m = serde_json::to_string(&m).unwrap().replace(p(dir), "<tmp>");
    outputs.insert("build.manifest-without-timings".into(), m.into_bytes());
    outputs
}

fn mean_substitutes(stdout: &[u8]) -> f64 {
    let v: serde_json::Value = serde_json::from_slice(stdout).unwrap();
    v["mean_substitutes"].as_f64().unwrap()
}

fn substitute_gap() -> Verdict {
    let dir = tempfile::tempdir().unwrap();
    let start = Instant::now();
    let out = run_pipeline(dir.path(), "0");
    let elapsed = start.elapsed();
    let senses = std::fs::read_to_string(fixtures().join("wordnet/dict.jsonl")).unwrap().matches("\"id\":").count();
    let full = mean_substitutes(&out["stats-full.stdout"]);
    let dist = mean_substitutes(&out["stats-dist.stdout"]);
    Verdict::new(
        dist > full && senses >= 2000,
        format!(
            "WordNet fixture ({senses} senses): distilled mean {dist:.4} > full mean {full:.4}; whole CLI pipeline {:.2}s",
            elapsed.as_secs_f64()
        ),
    )
}

fn determinism() -> Verdict {
    let runs: Vec<(tempfile::TempDir, &str)> =
        ["1", "8", "8"].into_iter().map(|j| (tempfile::tempdir().unwrap(), j)).collect();
    let outputs: Vec<BTreeMap<String, Vec<u8>>> = runs.iter().map(|(d, j)| run_pipeline(d.path(), j)).collect();
    let differing: Vec<&String> =
        outputs[0].keys().filter(|k| outputs[1..].iter().any(|o| o.get(*k) != outputs[0].get(*k))).collect();
    Verdict::new(
        differing.is_empty(),
        format!(
            "{} artefacts compared across --jobs 1, 8, 8 (seeded eval included); differing: {differing:?}",
            outputs[0].len()
        ),
    )
}
