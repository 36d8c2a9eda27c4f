//! Small string utilities shared by the cleaning steps.

use once_cell::sync::Lazy;
use regex::Regex;

const LIGATURES: &[(char, &str)] = &[
    ('\u{FB00}', "ff"),
    ('\u{FB01}', "fi"),
    ('\u{FB02}', "fl"),
    ('\u{FB03}', "ffi"),
    ('\u{FB04}', "ffl"),
    ('\u{FB05}', "st"),
    ('\u{FB06}', "st"),
    ('\u{0132}', "IJ"),
    ('\u{0133}', "ij"),
    ('\u{0152}', "OE"),
    ('\u{0153}', "oe"),
    ('\u{00C6}', "AE"),
    ('\u{00E6}', "ae"),
];

pub fn normalize_ligatures(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match LIGATURES.iter().find(|(l, _)| *l == c) {
            Some((_, r)) => out.push_str(r),
            None => out.push(c),
        }
    }
    out
}

/// Joins lines with single spaces; a line ending in `letter-` followed by a
/// lowercase-initial line is glued without the hyphen.
pub fn join_lines<S: AsRef<str>>(lines: &[S]) -> String {
    let mut out = String::new();
    for line in lines {
        let line = line.as_ref().trim();
        if line.is_empty() {
            continue;
        }
        if out.is_empty() {
            out.push_str(line);
        } else if ends_with_soft_hyphen(&out) && line.chars().next().is_some_and(char::is_lowercase) {
            out.pop();
            out.push_str(line);
        } else {
            out.push(' ');
            out.push_str(line);
        }
    }
    out
}

fn ends_with_soft_hyphen(s: &str) -> bool {
    let mut it = s.chars().rev();
    it.next() == Some('-') && it.next().is_some_and(char::is_alphabetic)
}

static NEWLINE_HYPHEN: Lazy<Regex> = Lazy::new(|| Regex::new(r"(\p{L})-\s*\n\s*(\p{Ll})").unwrap());
static NEWLINES: Lazy<Regex> = Lazy::new(|| Regex::new(r"\s*\n\s*").unwrap());

/// Removes end-of-line hyphenation from newline-separated text and collapses
/// the remaining line breaks to spaces.
pub fn dehyphenate(s: &str) -> String {
    let joined = NEWLINE_HYPHEN.replace_all(s, "$1$2");
    NEWLINES.replace_all(&joined, " ").into_owned()
}

pub fn clean_text(s: &str) -> String {
    dehyphenate(&normalize_ligatures(s)).trim().to_string()
}

/// Lowercased letters and digits only.
pub fn alnum_lower(s: &str) -> String {
    s.chars().filter(|c| c.is_alphanumeric()).flat_map(char::to_lowercase).collect()
}

/// Lowercased letters only.
pub fn letters_lower(s: &str) -> String {
    s.chars().filter(|c| c.is_alphabetic()).flat_map(char::to_lowercase).collect()
}

pub fn starts_uppercase(s: &str) -> bool {
    s.trim_start().chars().next().is_some_and(char::is_uppercase)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EnumStyle {
    /// `[n]`
    Bracket,
    /// `n.`
    Dot,
    /// `(n)`
    Paren,
}

static ENUM_BRACKET: Lazy<Regex> = Lazy::new(|| Regex::new(r"^\s*\[(\d{1,4})\]").unwrap());
static ENUM_DOT: Lazy<Regex> = Lazy::new(|| Regex::new(r"^\s*(\d{1,4})\.(\s|$)").unwrap());
static ENUM_PAREN: Lazy<Regex> = Lazy::new(|| Regex::new(r"^\s*\((\d{1,4})\)").unwrap());

/// Reference-list enumeration marker at the start of a line.
pub fn enumeration(line: &str) -> Option<(EnumStyle, u32)> {
    for (style, re) in [
        (EnumStyle::Bracket, &*ENUM_BRACKET),
        (EnumStyle::Dot, &*ENUM_DOT),
        (EnumStyle::Paren, &*ENUM_PAREN),
    ] {
        if let Some(c) = re.captures(line) {
            return c[1].parse().ok().map(|n| (style, n));
        }
    }
    None
}

static HEADER_ENUM: Lazy<Regex> =
    Lazy::new(|| Regex::new(r"^\s*(\d+(\.\d+)*\.?|[IVXLC]+\.|[A-Z]\.|\(\d+\)|\[\d+\])\s+\S").unwrap());

/// Section-style numbering such as `2.`, `3.1`, `IV.` or `A.`.
pub fn starts_with_enumeration(line: &str) -> bool {
    HEADER_ENUM.is_match(line)
}

/// Uppercase first letter or a section-style enumeration.
pub fn matches_header_pattern(line: &str) -> bool {
    starts_uppercase(line) || starts_with_enumeration(line)
}

static EMAIL: Lazy<Regex> = Lazy::new(|| Regex::new(r"[\w.+-]+@[\w-]+(\.[\w-]+)+").unwrap());

pub fn emails(s: &str) -> Vec<String> {
    EMAIL
        .find_iter(s)
        .map(|m| m.as_str().trim_end_matches('.').to_string())
        .collect()
}

pub fn email_regex() -> &'static Regex {
    &EMAIL
}

static DOI: Lazy<Regex> = Lazy::new(|| Regex::new(r"10\.\d{4,9}/\S+").unwrap());

/// First DOI in the text, trailing punctuation trimmed.
pub fn find_doi(s: &str) -> Option<String> {
    DOI.find(s).map(|m| {
        m.as_str()
            .trim_end_matches(['.', ',', ';', ':', ')', ']', '"', '\''])
            .to_string()
    })
}
