use serde::{Deserialize, Serialize};

use crate::dict::{Dictionaries, ReferenceType};
use crate::error::{Error, Result};
use crate::tagger::{runs, TaggerModel};
use crate::text::{find_doi, join_lines, normalize_ligatures};
use crate::tokens::Token;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RefType {
    JournalPaper,
    ConferenceProceedings,
    TechnicalReport,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Author {
    pub given: String,
    pub surname: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ParsedReference {
    pub raw: String,
    #[serde(default, rename = "type", skip_serializing_if = "Option::is_none")]
    pub ref_type: Option<RefType>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub authors: Vec<Author>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub title: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub volume: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub issue: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub year: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pages: Option<(String, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub doi: Option<String>,
}

impl ParsedReference {
    pub fn raw_only(raw: impl Into<String>) -> Self {
        Self {
            raw: raw.into(),
            ..Self::default()
        }
    }
}

fn span_text(text: &str, tokens: &[Token], first: usize, last: usize) -> String {
    text[tokens[first].start..tokens[last].end].to_string()
}

/// Assembles fields from per-token labels.
pub fn assemble_reference(text: &str, tokens: &[Token], labels: &[String]) -> ParsedReference {
    let rs = runs(labels);
    let mut r = ParsedReference::raw_only(text);
    let is_name = |l: &str| l == "first_name" || l == "surname";

    // Authors: each maximal block of consecutive name tokens is one author.
    let mut i = 0;
    while i < rs.len() {
        if !is_name(&rs[i].label) {
            i += 1;
            continue;
        }
        let mut j = i;
        while j + 1 < rs.len() && is_name(&rs[j + 1].label) {
            j += 1;
        }
        let mut given = Vec::new();
        let mut surname = Vec::new();
        for run in &rs[i..=j] {
            let t = span_text(text, tokens, run.first, run.last);
            if run.label == "first_name" {
                given.push(t);
            } else {
                surname.push(t);
            }
        }
        r.authors.push(Author {
            given: given.join(" "),
            surname: surname.join(" "),
        });
        i = j + 1;
    }

    let joined = |label: &str| {
        let parts: Vec<String> = rs
            .iter()
            .filter(|x| x.label == label)
            .map(|x| span_text(text, tokens, x.first, x.last))
            .collect();
        (!parts.is_empty()).then(|| parts.join(" "))
    };
    let first = |label: &str| {
        rs.iter()
            .find(|x| x.label == label)
            .map(|x| span_text(text, tokens, x.first, x.last))
    };
    r.title = joined("title");
    r.source = joined("source");
    r.volume = first("volume");
    r.issue = first("issue");
    r.year = first("year");
    r.pages = match (first("page_first"), first("page_last")) {
        (Some(a), Some(b)) => Some((a, b)),
        (Some(a), None) => Some((a.clone(), a)),
        _ => None,
    };
    r
}

pub fn parse_citation(text: &str, model: &TaggerModel, dict: &Dictionaries) -> Result<ParsedReference> {
    let (tokens, labels) = model.tag(text, dict);
    if tokens.is_empty() {
        return Err(Error::EmptyInput);
    }
    Ok(assemble_reference(text, &tokens, &labels))
}

fn clean_field(s: &str) -> String {
    join_lines(&normalize_ligatures(s).lines().collect::<Vec<_>>())
}

pub fn clean_reference(r: &ParsedReference, dict: &Dictionaries) -> ParsedReference {
    let opt = |o: &Option<String>| o.as_deref().map(clean_field);
    let raw = clean_field(&r.raw);
    let ref_type = match dict.reference_type(&raw) {
        Some(ReferenceType::Conference) => Some(RefType::ConferenceProceedings),
        Some(ReferenceType::Report) => Some(RefType::TechnicalReport),
        Some(ReferenceType::Journal) => Some(RefType::JournalPaper),
        None => r.source.as_ref().map(|_| RefType::JournalPaper),
    };
    ParsedReference {
        doi: find_doi(&raw).or_else(|| r.doi.clone()),
        ref_type,
        authors: r
            .authors
            .iter()
            .map(|a| Author {
                given: clean_field(&a.given),
                surname: clean_field(&a.surname),
            })
            .collect(),
        title: opt(&r.title),
        source: opt(&r.source),
        volume: opt(&r.volume),
        issue: opt(&r.issue),
        year: opt(&r.year),
        pages: r.pages.as_ref().map(|(a, b)| (clean_field(a), clean_field(b))),
        raw,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tokens::tokenize;

    #[test]
    fn assembly_from_labels() {
        let text = "E. Braunwald, Title here, Src, 1997.";
        let t = tokenize(text);
        let l: Vec<String> = [
            "first_name", "first_name", "surname", "text", "title", "title", "text", "source", "text", "year", "text",
        ]
        .iter()
        .map(|s| s.to_string())
        .collect();
        let r = assemble_reference(text, &t, &l);
        assert_eq!(r.authors, vec![Author { given: "E.".into(), surname: "Braunwald".into() }]);
        assert_eq!(r.title.as_deref(), Some("Title here"));
        assert_eq!(r.year.as_deref(), Some("1997"));
        assert_eq!(r.raw, text);
    }

    #[test]
    fn cleaning() {
        let d = Dictionaries::builtin();
        let r = ParsedReference::raw_only("A. B, \u{FB01}nding, In Proceedings of X, doi:10.1000/xyz123.");
        let c = clean_reference(&r, d);
        assert_eq!(c.doi.as_deref(), Some("10.1000/xyz123"));
        assert_eq!(c.ref_type, Some(RefType::ConferenceProceedings));
        assert!(c.raw.contains("finding"));
    }
}
