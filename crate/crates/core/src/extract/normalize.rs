//! Rule-based English tokenizer and lemmatizer used when a definition has
//! no external annotation. It emits lemmas only; heads stay empty.

use std::collections::HashMap;
use std::sync::OnceLock;

use super::ExtractError;
use crate::lemma::Lemma;
use crate::lexicon::TokenAnnotation;

const IRREGULAR: &[(&str, &str)] = &[
    ("am", "be"), ("are", "be"), ("is", "be"), ("was", "be"), ("were", "be"),
    ("been", "be"), ("being", "be"),
    ("has", "have"), ("had", "have"), ("having", "have"),
    ("does", "do"), ("did", "do"), ("done", "do"), ("doing", "do"),
    ("goes", "go"), ("went", "go"), ("gone", "go"), ("going", "go"),
    ("made", "make"), ("making", "make"), ("took", "take"), ("taken", "take"),
    ("taking", "take"), ("gave", "give"), ("given", "give"), ("came", "come"),
    ("saw", "see"), ("seen", "see"), ("knew", "know"), ("known", "know"),
    ("got", "get"), ("gotten", "get"), ("said", "say"), ("says", "say"),
    ("thought", "think"), ("told", "tell"), ("became", "become"),
    ("found", "find"), ("felt", "feel"), ("brought", "bring"), ("began", "begin"),
    ("begun", "begin"), ("kept", "keep"), ("held", "hold"), ("wrote", "write"),
    ("written", "write"), ("stood", "stand"), ("heard", "hear"), ("meant", "mean"),
    ("met", "meet"), ("ran", "run"), ("paid", "pay"), ("sat", "sit"), ("spoke", "speak"),
    ("spoken", "speak"), ("led", "lead"), ("grew", "grow"), ("grown", "grow"),
    ("lost", "lose"), ("fell", "fall"), ("fallen", "fall"), ("sent", "send"),
    ("built", "build"), ("understood", "understand"), ("drew", "draw"), ("drawn", "draw"),
    ("broke", "break"), ("broken", "break"), ("spent", "spend"), ("rose", "rise"),
    ("risen", "rise"), ("drove", "drive"), ("driven", "drive"), ("bought", "buy"),
    ("wore", "wear"), ("worn", "wear"), ("chose", "choose"), ("chosen", "choose"),
    ("sought", "seek"), ("threw", "throw"), ("thrown", "throw"), ("caught", "catch"),
    ("dealt", "deal"), ("won", "win"), ("fought", "fight"), ("taught", "teach"),
    ("ate", "eat"), ("eaten", "eat"), ("sold", "sell"), ("flew", "fly"), ("flown", "fly"),
    ("forgot", "forget"), ("forgotten", "forget"), ("hid", "hide"), ("hidden", "hide"),
    ("shook", "shake"), ("shaken", "shake"), ("sang", "sing"), ("sung", "sing"),
    ("swam", "swim"), ("stole", "steal"), ("stolen", "steal"), ("struck", "strike"),
    ("tore", "tear"), ("torn", "tear"), ("rode", "ride"), ("ridden", "ride"),
    ("shot", "shoot"), ("slept", "sleep"), ("fed", "feed"), ("dug", "dig"),
    ("hung", "hang"), ("lent", "lend"), ("bent", "bend"), ("dying", "die"),
    ("lying", "lie"), ("tying", "tie"), ("children", "child"), ("men", "man"),
    ("women", "woman"), ("feet", "foot"), ("teeth", "tooth"), ("mice", "mouse"),
    ("geese", "goose"), ("knives", "knife"), ("wives", "wife"), ("lives", "life"),
    ("leaves", "leaf"), ("halves", "half"), ("shelves", "shelf"), ("wolves", "wolf"),
    ("created", "create"), ("creating", "create"),
];

// Words whose endings look inflectional but are not.
const INVARIANT: &[&str] = &[
    "always", "anything", "as", "bed", "bus", "ceiling", "during", "evening",
    "everything", "gas", "his", "hundred", "its", "king", "less", "means", "morning",
    "naked", "need", "news", "nothing", "perhaps", "red", "ring", "seed", "series",
    "sing", "something", "species", "speed", "spring", "string", "swing", "thing",
    "this", "thus", "unless", "us", "was", "wing", "yes", "bring", "sting",
    "wicked", "sacred", "kindred", "feed", "breed", "bleed", "shed",
];

fn irregular() -> &'static HashMap<&'static str, &'static str> {
    static TABLE: OnceLock<HashMap<&'static str, &'static str>> = OnceLock::new();
    TABLE.get_or_init(|| IRREGULAR.iter().copied().collect())
}

fn invariant(word: &str) -> bool {
    static SET: OnceLock<std::collections::HashSet<&'static str>> = OnceLock::new();
    SET.get_or_init(|| INVARIANT.iter().copied().collect()).contains(word)
}

fn is_vowel(c: u8) -> bool {
    matches!(c, b'a' | b'e' | b'i' | b'o' | b'u')
}

fn has_vowel(s: &str) -> bool {
    s.bytes().any(|c| is_vowel(c) || c == b'y')
}

/// Repairs a stem left by stripping `-ed`/`-ing`.
fn restore_stem(stem: &str) -> String {
    let b = stem.as_bytes();
    let n = b.len();
    if n >= 3 && b[n - 1] == b[n - 2] && !is_vowel(b[n - 1]) && !matches!(b[n - 1], b'l' | b's' | b'z' | b'f') {
        return stem[..n - 1].to_string();
    }
    let needs_e = stem.ends_with("iz")
        || stem.ends_with("yz")
        || stem.ends_with("us")
        || stem.ends_with('v')
        || (stem.ends_with('c') && !stem.ends_with("ck"))
        || ["bl", "pl", "tl", "dl", "gl", "kl"].iter().any(|s| stem.ends_with(s))
        || (n >= 3 && (stem.ends_with("at") || stem.ends_with("ur")) && !is_vowel(b[n - 3]))
        || (n == 3 && !is_vowel(b[0]) && is_vowel(b[1]) && !is_vowel(b[2]) && !matches!(b[2], b'w' | b'x' | b'y'));
    if needs_e {
        format!("{stem}e")
    } else {
        stem.to_string()
    }
}

/// Lemmatizes one lower-case word with suffix rules and an irregular table.
pub fn lemmatize(word: &str) -> String {
    if let Some(base) = irregular().get(word) {
        return (*base).to_string();
    }
    if invariant(word) || !word.is_ascii() || word.bytes().any(|c| c.is_ascii_digit()) || word.len() <= 3 {
        return word.to_string();
    }
    let n = word.len();
    if let Some(stem) = word.strip_suffix("ies") {
        if n > 4 {
            return format!("{stem}y");
        }
    }
    if let Some(stem) = word.strip_suffix("sses") {
        return format!("{stem}ss");
    }
    for suffix in ["shes", "ches", "xes", "zes", "oes"] {
        if word.ends_with(suffix) {
            return word[..n - 2].to_string();
        }
    }
    if word.ends_with('s') && !word.ends_with("ss") && !word.ends_with("us") && !word.ends_with("is") {
        return word[..n - 1].to_string();
    }
    if let Some(stem) = word.strip_suffix("ied") {
        if n > 4 {
            return format!("{stem}y");
        }
    }
    if word.ends_with("eed") {
        return word[..n - 1].to_string();
    }
    if let Some(stem) = word.strip_suffix("ed") {
        if stem.len() >= 2 && has_vowel(stem) {
            return restore_stem(stem);
        }
    }
    if let Some(stem) = word.strip_suffix("ing") {
        if stem.len() >= 2 && has_vowel(stem) {
            return restore_stem(stem);
        }
    }
    word.to_string()
}

fn split_clitic(word: &str) -> (String, Option<&'static str>) {
    match word {
        "can't" | "cannot" => return ("can".into(), Some("not")),
        "won't" => return ("will".into(), Some("not")),
        "shan't" => return ("shall".into(), Some("not")),
        _ => {}
    }
    let pairs: [(&str, Option<&'static str>); 7] = [
        ("n't", Some("not")),
        ("'re", Some("be")),
        ("'m", Some("be")),
        ("'ll", Some("will")),
        ("'ve", Some("have")),
        ("'d", Some("would")),
        ("'s", None),
    ];
    for (suffix, extra) in pairs {
        if let Some(stem) = word.strip_suffix(suffix) {
            if !stem.is_empty() {
                return (stem.to_string(), extra);
            }
        }
    }
    (word.to_string(), None)
}

fn raw_tokens(text: &str) -> impl Iterator<Item = &str> {
    text.split(|c: char| !(c.is_alphanumeric() || c == '\'' || c == '’' || c == '-'))
        .map(|t| t.trim_matches(|c| c == '\'' || c == '’' || c == '-'))
        .filter(|t| !t.is_empty())
}

/// Tokenizes, case-folds and lemmatizes a definition. Punctuation is
/// dropped; returned tokens have no head or relation.
pub fn normalize_definition(text: &str) -> Result<Vec<TokenAnnotation>, ExtractError> {
    let mut tokens = Vec::new();
    for raw in raw_tokens(text) {
        let lower = raw.to_lowercase().replace('’', "'");
        let (word, extra) = split_clitic(&lower);
        let mut push = |form: &str, lemma: String| {
            if let Ok(lemma) = Lemma::new(&lemma) {
                tokens.push(TokenAnnotation {
                    index: tokens.len() + 1,
                    form: form.to_string(),
                    lemma,
                    upos: None,
                    head: None,
                    deprel: None,
                });
            }
        };
        let lemma = lemmatize(&word);
        push(&word, lemma);
        if let Some(extra) = extra {
            push(extra, extra.to_string());
        }
    }
    if tokens.is_empty() {
        return Err(ExtractError::EmptyDefinition);
    }
    Ok(tokens)
}
