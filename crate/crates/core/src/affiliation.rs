use serde::{Deserialize, Serialize};

use crate::dict::Dictionaries;
use crate::error::{Error, Result};
use crate::tagger::{runs, TaggerModel};
use crate::tokens::Token;

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ParsedAffiliation {
    pub raw: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub institution: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub address: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub country: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub country_iso: Option<String>,
}

impl ParsedAffiliation {
    pub fn raw_only(raw: impl Into<String>) -> Self {
        Self {
            raw: raw.into(),
            ..Self::default()
        }
    }
}

/// Byte span of the first run of each requested label.
pub(crate) fn first_spans(tokens: &[Token], labels: &[String], wanted: &[&str]) -> Vec<Option<(usize, usize)>> {
    let rs = runs(labels);
    wanted
        .iter()
        .map(|w| {
            rs.iter()
                .find(|r| r.label == *w)
                .map(|r| (tokens[r.first].start, tokens[r.last].end))
        })
        .collect()
}

pub fn parse_affiliation(text: &str, model: &TaggerModel, dict: &Dictionaries) -> Result<ParsedAffiliation> {
    parse_affiliation_spans(text, model, dict).map(|(a, _)| a)
}

/// Also returns the byte spans of institution, address and country in `text`.
pub fn parse_affiliation_spans(
    text: &str,
    model: &TaggerModel,
    dict: &Dictionaries,
) -> Result<(ParsedAffiliation, Vec<Option<(usize, usize)>>)> {
    let (tokens, labels) = model.tag(text, dict);
    if tokens.is_empty() {
        return Err(Error::EmptyInput);
    }
    let spans = first_spans(&tokens, &labels, &["institution", "address", "country"]);
    let present: Vec<(usize, usize)> = spans.iter().flatten().copied().collect();
    for (i, a) in present.iter().enumerate() {
        for b in &present[i + 1..] {
            assert!(a.1 <= b.0 || b.1 <= a.0, "token runs never overlap");
        }
    }
    let take = |s: Option<(usize, usize)>| s.map(|(a, b)| text[a..b].to_string());
    let country = take(spans[2]);
    let parsed = ParsedAffiliation {
        raw: text.to_string(),
        institution: take(spans[0]),
        address: take(spans[1]),
        country_iso: country.as_deref().and_then(|c| dict.country_iso(c)).map(str::to_string),
        country,
    };
    Ok((parsed, spans))
}
