//! Word lists used by the lexical zone features and the token parsers. The
//! built-in lists are compiled in from `data/`; a directory with files of the
//! same names overrides them one by one.

use std::collections::{BTreeMap, HashSet};
use std::path::Path;

use once_cell::sync::Lazy;
use regex::Regex;

use crate::error::{Error, Result};
use crate::tokens::tokenize;

const FILES: &[(&str, &str)] = &[
    ("countries.tsv", include_str!("../data/countries.tsv")),
    ("institution.txt", include_str!("../data/institution.txt")),
    ("address.txt", include_str!("../data/address.txt")),
    ("cities.txt", include_str!("../data/cities.txt")),
    ("publisher.txt", include_str!("../data/publisher.txt")),
    ("series.txt", include_str!("../data/series.txt")),
    ("source.txt", include_str!("../data/source.txt")),
    ("volume.txt", include_str!("../data/volume.txt")),
    ("issue.txt", include_str!("../data/issue.txt")),
    ("pages.txt", include_str!("../data/pages.txt")),
    ("zone_keywords.tsv", include_str!("../data/zone_keywords.tsv")),
    ("reference_types.tsv", include_str!("../data/reference_types.tsv")),
    ("article_types.txt", include_str!("../data/article_types.txt")),
    ("caption_patterns.txt", include_str!("../data/caption_patterns.txt")),
    ("equation_chars.txt", include_str!("../data/equation_chars.txt")),
];

/// Multi-token dictionary matched over lowercased token sequences.
#[derive(Debug, Clone, Default)]
pub struct PhraseSet {
    phrases: Vec<Vec<String>>,
    max_len: usize,
}

impl PhraseSet {
    pub fn new<S: AsRef<str>>(entries: impl IntoIterator<Item = S>) -> Self {
        let mut phrases: Vec<Vec<String>> = entries
            .into_iter()
            .map(|e| tokenize(&e.as_ref().to_lowercase()).into_iter().map(|t| t.text).collect::<Vec<_>>())
            .filter(|p| !p.is_empty())
            .collect();
        phrases.sort();
        phrases.dedup();
        let max_len = phrases.iter().map(Vec::len).max().unwrap_or(0);
        Self { phrases, max_len }
    }

    pub fn len(&self) -> usize {
        self.phrases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phrases.is_empty()
    }

    /// Longest match starting at `start`, in tokens.
    pub fn match_at<S: AsRef<str>>(&self, lower: &[S], start: usize) -> Option<usize> {
        (1..=self.max_len.min(lower.len() - start)).rev().find(|&n| {
            let window = &lower[start..start + n];
            self.phrases
                .binary_search_by(|p| p.iter().map(String::as_str).cmp(window.iter().map(AsRef::as_ref)))
                .is_ok()
        })
    }

    /// Per-token membership in any (greedy, leftmost-longest) match.
    pub fn mark<S: AsRef<str>>(&self, lower: &[S]) -> Vec<bool> {
        let mut out = vec![false; lower.len()];
        let mut i = 0;
        while i < lower.len() {
            match self.match_at(lower, i) {
                Some(n) => {
                    out[i..i + n].iter_mut().for_each(|m| *m = true);
                    i += n;
                }
                None => i += 1,
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum KeywordClass {
    Affiliation,
    Acknowledgment,
    Abstract,
    Keywords,
    Dates,
    References,
    Type,
    Correspondence,
    Editor,
    Copyright,
    BibInfo,
}

impl KeywordClass {
    pub const ALL: [KeywordClass; 11] = [
        Self::Affiliation,
        Self::Acknowledgment,
        Self::Abstract,
        Self::Keywords,
        Self::Dates,
        Self::References,
        Self::Type,
        Self::Correspondence,
        Self::Editor,
        Self::Copyright,
        Self::BibInfo,
    ];

    fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "affiliation" => Self::Affiliation,
            "acknowledgment" => Self::Acknowledgment,
            "abstract" => Self::Abstract,
            "keywords" => Self::Keywords,
            "dates" => Self::Dates,
            "references" => Self::References,
            "type" => Self::Type,
            "correspondence" => Self::Correspondence,
            "editor" => Self::Editor,
            "copyright" => Self::Copyright,
            "bibinfo" => Self::BibInfo,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReferenceType {
    Journal,
    Conference,
    Report,
}

#[derive(Debug, Clone)]
pub struct Dictionaries {
    /// Lowercased country name → ISO 3166 alpha-2.
    pub country_codes: BTreeMap<String, String>,
    pub countries: PhraseSet,
    pub institution: HashSet<String>,
    pub address: HashSet<String>,
    pub cities: PhraseSet,
    pub publisher: HashSet<String>,
    pub series: HashSet<String>,
    pub source: HashSet<String>,
    pub volume: HashSet<String>,
    pub issue: HashSet<String>,
    pub pages: HashSet<String>,
    pub zone_keywords: BTreeMap<KeywordClass, Vec<String>>,
    pub reference_types: Vec<(ReferenceType, String)>,
    pub article_types: Vec<String>,
    pub caption_patterns: Vec<Regex>,
    pub equation_chars: HashSet<char>,
}

static BUILTIN: Lazy<Dictionaries> = Lazy::new(|| Dictionaries::from_sources(|_| Ok(None)).expect("built-in dictionaries parse"));

fn lines(s: &str) -> impl Iterator<Item = &str> {
    s.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'))
}

fn word_set(s: &str) -> HashSet<String> {
    lines(s).map(str::to_lowercase).collect()
}

fn pairs<'a>(s: &'a str, file: &'a str) -> impl Iterator<Item = Result<(&'a str, &'a str)>> + 'a {
    lines(s).enumerate().map(move |(i, l)| {
        l.split_once('\t')
            .map(|(a, b)| (a.trim(), b.trim()))
            .ok_or_else(|| Error::parse(format!("{file} entry {}", i + 1), "expected two tab-separated columns"))
    })
}

/// Lowercase, every non-alphanumeric run (except `©` and `-`) collapsed to a
/// space, padded with spaces so keywords can be matched as whole words.
pub fn keyword_text(s: &str) -> String {
    let mut out = String::from(" ");
    for c in s.chars().flat_map(char::to_lowercase) {
        if c.is_alphanumeric() || c == '©' || c == '-' {
            out.push(c);
        } else if !out.ends_with(' ') {
            out.push(' ');
        }
    }
    if !out.ends_with(' ') {
        out.push(' ');
    }
    out
}

impl Dictionaries {
    pub fn builtin() -> &'static Dictionaries {
        &BUILTIN
    }

    /// Built-in lists with any same-named file in `dir` taking precedence.
    pub fn load_dir(dir: &Path) -> Result<Self> {
        Self::from_sources(|name| {
            let p = dir.join(name);
            if p.is_file() {
                Ok(Some(std::fs::read_to_string(p)?))
            } else {
                Ok(None)
            }
        })
    }

    /// The built-in file contents, for writing a bundle.
    pub fn builtin_files() -> &'static [(&'static str, &'static str)] {
        FILES
    }

    fn from_sources(mut read: impl FnMut(&str) -> Result<Option<String>>) -> Result<Self> {
        let mut src: BTreeMap<&str, String> = BTreeMap::new();
        for &(name, builtin) in FILES {
            src.insert(name, read(name)?.unwrap_or_else(|| builtin.to_string()));
        }
        let mut country_codes = BTreeMap::new();
        for p in pairs(&src["countries.tsv"], "countries.tsv") {
            let (name, iso) = p?;
            country_codes.insert(name.to_lowercase(), iso.to_uppercase());
        }
        let countries = PhraseSet::new(country_codes.keys());
        let mut zone_keywords: BTreeMap<KeywordClass, Vec<String>> = BTreeMap::new();
        for p in pairs(&src["zone_keywords.tsv"], "zone_keywords.tsv") {
            let (class, kw) = p?;
            let class = KeywordClass::parse(class)
                .ok_or_else(|| Error::parse("zone_keywords.tsv", format!("unknown keyword class {class}")))?;
            zone_keywords.entry(class).or_default().push(keyword_text(kw));
        }
        let mut reference_types = Vec::new();
        for p in pairs(&src["reference_types.tsv"], "reference_types.tsv") {
            let (ty, kw) = p?;
            let ty = match ty {
                "conference" => ReferenceType::Conference,
                "report" => ReferenceType::Report,
                "journal" => ReferenceType::Journal,
                other => return Err(Error::parse("reference_types.tsv", format!("unknown type {other}"))),
            };
            reference_types.push((ty, kw.to_lowercase()));
        }
        let caption_patterns = lines(&src["caption_patterns.txt"])
            .map(|p| Regex::new(&format!("(?i){p}")).map_err(|e| Error::parse("caption_patterns.txt", e)))
            .collect::<Result<_>>()?;
        Ok(Self {
            country_codes,
            countries,
            institution: word_set(&src["institution.txt"]),
            address: word_set(&src["address.txt"]),
            cities: PhraseSet::new(lines(&src["cities.txt"])),
            publisher: word_set(&src["publisher.txt"]),
            series: word_set(&src["series.txt"]),
            source: word_set(&src["source.txt"]),
            volume: word_set(&src["volume.txt"]),
            issue: word_set(&src["issue.txt"]),
            pages: word_set(&src["pages.txt"]),
            zone_keywords,
            reference_types,
            article_types: lines(&src["article_types.txt"]).map(keyword_text).collect(),
            caption_patterns,
            equation_chars: lines(&src["equation_chars.txt"]).flat_map(str::chars).collect(),
        })
    }

    pub fn country_iso(&self, name: &str) -> Option<&str> {
        let key = tokenize(&name.to_lowercase()).into_iter().map(|t| t.text).collect::<Vec<_>>().join(" ");
        self.country_codes
            .iter()
            .find(|(k, _)| tokenize(k).into_iter().map(|t| t.text).collect::<Vec<_>>().join(" ") == key)
            .map(|(_, v)| v.as_str())
    }

    /// Whether `text` contains any keyword of the class as whole words.
    pub fn has_keyword(&self, class: KeywordClass, text: &str) -> bool {
        let t = keyword_text(text);
        self.zone_keywords.get(&class).is_some_and(|kws| kws.iter().any(|k| t.contains(k.as_str())))
    }

    /// Whether `text` starts with a keyword of the class.
    pub fn starts_with_keyword(&self, class: KeywordClass, text: &str) -> bool {
        let t = keyword_text(text);
        self.zone_keywords.get(&class).is_some_and(|kws| kws.iter().any(|k| t.starts_with(k.as_str())))
    }

    pub fn is_caption(&self, text: &str) -> bool {
        self.caption_patterns.iter().any(|r| r.is_match(text))
    }

    pub fn reference_type(&self, raw: &str) -> Option<ReferenceType> {
        let lower = raw.to_lowercase();
        self.reference_types.iter().find(|(_, kw)| lower.contains(kw.as_str())).map(|(t, _)| *t)
    }

    /// Length in bytes of a leading article-type phrase of `text`, if any.
    pub fn article_type_prefix(&self, text: &str) -> Option<usize> {
        let t = keyword_text(text);
        let hit = self.article_types.iter().filter(|a| t.starts_with(a.as_str())).max_by_key(|a| a.len())?;
        let words = hit.split_whitespace().count();
        // Walk the original text past that many alphanumeric runs.
        let mut seen = 0;
        let mut in_word = false;
        for (i, c) in text.char_indices() {
            let w = c.is_alphanumeric() || c == '-';
            if w && !in_word {
                seen += 1;
            }
            if !w && in_word && seen == words {
                return Some(i);
            }
            in_word = w;
        }
        (seen == words).then_some(text.len())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_parses() {
        let d = Dictionaries::builtin();
        assert_eq!(d.country_iso("Bangladesh"), Some("BD"));
        assert_eq!(d.country_iso("united  states"), Some("US"));
        assert!(d.institution.contains("university"));
        assert!(d.has_keyword(KeywordClass::References, "References"));
        assert!(!d.has_keyword(KeywordClass::References, "Referenced"));
        assert!(d.is_caption("Table 2: results"));
        assert!(!d.is_caption("Tables are useful"));
    }

    #[test]
    fn phrases() {
        let p = PhraseSet::new(["new zealand", "new york", "york"]);
        let toks = ["in", "new", "york", "and", "new"];
        assert_eq!(p.mark(&toks), vec![false, true, true, false, false]);
    }

    #[test]
    fn type_prefix() {
        let d = Dictionaries::builtin();
        let s = "Research Article Phytochemical study";
        let n = d.article_type_prefix(s).unwrap();
        assert_eq!(s[n..].trim(), "Phytochemical study");
        assert_eq!(d.article_type_prefix("Phytochemical study"), None);
    }
}
