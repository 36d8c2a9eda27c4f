//! Tokenization and per-token CRF features for the affiliation and citation
//! parsers.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::dict::Dictionaries;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub text: String,
    /// Byte offsets into the source string.
    pub start: usize,
    pub end: usize,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Class {
    Letter,
    Digit,
    Other,
}

fn class(c: char) -> Class {
    if c.is_alphabetic() {
        Class::Letter
    } else if c.is_numeric() {
        Class::Digit
    } else {
        Class::Other
    }
}

/// Maximal runs of letters, maximal runs of digits, and single other
/// non-whitespace characters.
pub fn tokenize(s: &str) -> Vec<Token> {
    let mut out: Vec<Token> = Vec::new();
    let mut run: Option<(Class, usize)> = None;
    let close = |out: &mut Vec<Token>, start: usize, end: usize| {
        out.push(Token {
            text: s[start..end].to_string(),
            start,
            end,
        })
    };
    for (i, c) in s.char_indices() {
        let k = class(c);
        if let Some((rk, start)) = run {
            if rk == k && k != Class::Other && !c.is_whitespace() {
                continue;
            }
            close(&mut out, start, i);
            run = None;
        }
        if !c.is_whitespace() {
            run = Some((k, i));
        }
    }
    if let Some((_, start)) = run {
        close(&mut out, start, s.len());
    }
    out
}

/// Words seen at least `threshold` times in training; others become RARE.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Vocabulary {
    pub threshold: usize,
    pub words: BTreeSet<String>,
}

pub const RARE_THRESHOLD: usize = 5;

impl Vocabulary {
    pub fn build<'a>(sequences: impl IntoIterator<Item = &'a [Token]>, threshold: usize) -> Self {
        let mut counts: BTreeMap<String, usize> = BTreeMap::new();
        for seq in sequences {
            for t in seq {
                *counts.entry(t.text.to_lowercase()).or_default() += 1;
            }
        }
        Self {
            threshold,
            words: counts.into_iter().filter(|(_, n)| *n >= threshold).map(|(w, _)| w).collect(),
        }
    }

    fn word_feature(vocab: Option<&Self>, token: &str) -> String {
        let lower = token.to_lowercase();
        match vocab {
            Some(v) if !v.words.contains(&lower) => "RARE".to_string(),
            _ => format!("W={lower}"),
        }
    }
}

const SHIFTS: [(isize, &str); 4] = [(-2, "p2:"), (-1, "p1:"), (1, "n1:"), (2, "n2:")];

/// Adds copies of every neighbour's features within ±2 positions, prefixed
/// with their offset, plus a BIAS feature for the token itself.
pub fn with_neighbors(base: Vec<Vec<String>>) -> Vec<Vec<String>> {
    let n = base.len() as isize;
    (0..n)
        .map(|i| {
            let mut f = base[i as usize].clone();
            for (d, prefix) in SHIFTS {
                let j = i + d;
                if (0..n).contains(&j) {
                    f.extend(base[j as usize].iter().map(|x| format!("{prefix}{x}")));
                } else {
                    f.push(format!("{prefix}NONE"));
                }
            }
            f.push("BIAS".to_string());
            f
        })
        .collect()
}

fn lowers(tokens: &[Token]) -> Vec<String> {
    tokens.iter().map(|t| t.text.to_lowercase()).collect()
}

fn all(s: &str, p: impl Fn(char) -> bool) -> bool {
    !s.is_empty() && s.chars().all(p)
}

pub fn affiliation_features(tokens: &[Token], vocab: Option<&Vocabulary>, dict: &Dictionaries) -> Vec<Vec<String>> {
    let lower = lowers(tokens);
    let country = dict.countries.mark(&lower);
    let city = dict.cities.mark(&lower);
    let base = tokens
        .iter()
        .enumerate()
        .map(|(i, t)| {
            let s = t.text.as_str();
            let mut f = vec![Vocabulary::word_feature(vocab, s)];
            let flags = [
                ("NUMBER", all(s, char::is_numeric)),
                ("ALLUPPER", all(s, char::is_uppercase)),
                ("ALLLOWER", all(s, char::is_lowercase)),
                ("STARTUPPER", s.chars().next().is_some_and(char::is_uppercase)),
                ("COUNTRY", country[i]),
                ("INSTITUTION", dict.institution.contains(&lower[i])),
                ("ADDRESS", dict.address.contains(&lower[i]) || city[i]),
            ];
            f.extend(flags.iter().filter(|(_, on)| *on).map(|(n, _)| n.to_string()));
            f
        })
        .collect();
    with_neighbors(base)
}

fn is_roman(s: &str) -> bool {
    let u = s.to_ascii_uppercase();
    all(&u, |c| matches!(c, 'I' | 'V' | 'X' | 'L' | 'C' | 'D' | 'M')) && u.len() <= 8
}

fn is_year(s: &str) -> bool {
    s.len() == 4 && all(s, |c| c.is_ascii_digit()) && matches!(&s[..2], "19" | "20")
}

fn between_words(tokens: &[Token], i: usize) -> bool {
    i > 0
        && i + 1 < tokens.len()
        && tokens[i - 1].end == tokens[i].start
        && tokens[i].end == tokens[i + 1].start
        && tokens[i - 1].text.chars().all(char::is_alphabetic)
        && tokens[i + 1].text.chars().all(char::is_alphabetic)
}

pub fn citation_features(tokens: &[Token], vocab: Option<&Vocabulary>, dict: &Dictionaries) -> Vec<Vec<String>> {
    let lower = lowers(tokens);
    let city = dict.cities.mark(&lower);
    let n = tokens.len();
    let base = tokens
        .iter()
        .enumerate()
        .map(|(i, t)| {
            let s = t.text.as_str();
            let l = lower[i].as_str();
            let single = s.chars().count() == 1;
            let c0 = s.chars().next().unwrap_or(' ');
            let flags = [
                ("ALLDIGITS", all(s, |c| c.is_ascii_digit())),
                ("ALLLETTERS", all(s, char::is_alphabetic)),
                ("ALNUM", all(s, char::is_alphanumeric)),
                ("ALLLOWER", all(s, char::is_lowercase)),
                ("ALLUPPER", all(s, char::is_uppercase)),
                ("ROMAN", is_roman(s)),
                ("STARTUPPER", c0.is_uppercase()),
                ("SINGLEDIGIT", single && c0.is_ascii_digit()),
                ("SINGLELOWER", single && c0.is_lowercase()),
                ("SINGLEUPPER", single && c0.is_uppercase()),
                ("CITY", city[i]),
                ("PUBLISHER", dict.publisher.contains(l)),
                ("SERIES", dict.series.contains(l)),
                ("SOURCE", dict.source.contains(l)),
                ("ISSUEWORD", dict.issue.contains(l)),
                ("PAGESWORD", dict.pages.contains(l)),
                ("VOLUMEWORD", dict.volume.contains(l)),
                ("LPAREN", s == "("),
                ("RPAREN", s == ")"),
                ("LBRACKET", s == "["),
                ("RBRACKET", s == "]"),
                ("COMMA", s == ","),
                ("DASH", matches!(s, "-" | "\u{2013}" | "\u{2014}")),
                ("DOT", s == "."),
                ("QUOTE", matches!(s, "\"" | "'" | "\u{201C}" | "\u{201D}" | "\u{2018}" | "\u{2019}")),
                ("SLASH", s == "/"),
                ("AND", l == "and" || s == "&"),
                ("WORDDASH", s == "-" && between_words(tokens, i)),
                ("WORDQUOTE", matches!(s, "'" | "\u{2019}") && between_words(tokens, i)),
                ("YEAR", is_year(s)),
                ("COLON", s == ":"),
                ("SEMICOLON", s == ";"),
                ("SHORTNUMBER", s.len() <= 3 && all(s, |c| c.is_ascii_digit())),
                ("LONGNUMBER", s.len() >= 5 && all(s, |c| c.is_ascii_digit())),
            ];
            let mut f = vec![Vocabulary::word_feature(vocab, s)];
            f.extend(flags.iter().filter(|(_, on)| *on).map(|(n, _)| n.to_string()));
            f.push(format!("QPOS={}", (i * 5) / n.max(1)));
            f
        })
        .collect();
    with_neighbors(base)
}
