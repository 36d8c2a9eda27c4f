//! CRF token taggers for affiliations and citations: the model file bundles
//! the CRF with the word vocabulary its features were built from.

use serde::{Deserialize, Serialize};

use docharvest_learn::crf::{train_crf, CrfTrainOptions, TrainingSequence};
use docharvest_learn::CrfModel;

use crate::dict::Dictionaries;
use crate::error::{Error, Result};
use crate::tokens::{affiliation_features, citation_features, tokenize, Token, Vocabulary, RARE_THRESHOLD};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TaggerTask {
    Affiliation,
    Citation,
}

impl TaggerTask {
    pub fn labels(&self) -> &'static [&'static str] {
        match self {
            Self::Affiliation => &["institution", "address", "country", "other"],
            Self::Citation => &[
                "first_name",
                "surname",
                "title",
                "source",
                "volume",
                "issue",
                "page_first",
                "page_last",
                "year",
                "text",
            ],
        }
    }

    /// Label of untagged text.
    pub fn default_label(&self) -> &'static str {
        match self {
            Self::Affiliation => "other",
            Self::Citation => "text",
        }
    }
}

/// A string with labeled byte spans; text outside spans gets the task's
/// default label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledText {
    pub text: String,
    pub spans: Vec<(usize, usize, String)>,
}

impl LabeledText {
    pub fn from_segments<S: AsRef<str>, L: AsRef<str>>(segments: &[(S, Option<L>)]) -> Self {
        let mut text = String::new();
        let mut spans = Vec::new();
        for (s, label) in segments {
            let start = text.len();
            text.push_str(s.as_ref());
            if let Some(l) = label {
                spans.push((start, text.len(), l.as_ref().to_string()));
            }
        }
        Self { text, spans }
    }

    /// Inline markup: `<surname>Braunwald</surname>, <year>1997</year>`.
    /// `&lt;`, `&gt;` and `&amp;` escape literal characters.
    pub fn parse_markup(line: &str) -> Result<Self> {
        let mut text = String::new();
        let mut spans = Vec::new();
        let mut open: Option<(String, usize)> = None;
        let mut rest = line;
        while !rest.is_empty() {
            if let Some(tail) = rest.strip_prefix('<') {
                let end = tail.find('>').ok_or_else(|| Error::parse(line, "unterminated tag"))?;
                let tag = &tail[..end];
                rest = &tail[end + 1..];
                if let Some(name) = tag.strip_prefix('/') {
                    match open.take() {
                        Some((n, start)) if n == name => spans.push((start, text.len(), n)),
                        _ => return Err(Error::parse(line, format!("unexpected </{name}>"))),
                    }
                } else {
                    if open.is_some() {
                        return Err(Error::parse(line, "nested tags"));
                    }
                    open = Some((tag.to_string(), text.len()));
                }
            } else if let Some(t) = rest.strip_prefix("&lt;") {
                text.push('<');
                rest = t;
            } else if let Some(t) = rest.strip_prefix("&gt;") {
                text.push('>');
                rest = t;
            } else if let Some(t) = rest.strip_prefix("&amp;") {
                text.push('&');
                rest = t;
            } else {
                let c = rest.chars().next().unwrap();
                text.push(c);
                rest = &rest[c.len_utf8()..];
            }
        }
        if let Some((n, _)) = open {
            return Err(Error::parse(line, format!("unclosed <{n}>")));
        }
        Ok(Self { text, spans })
    }

    pub fn to_markup(&self) -> String {
        let esc = |s: &str| s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;");
        let mut out = String::new();
        let mut pos = 0;
        for (s, e, l) in &self.spans {
            out.push_str(&esc(&self.text[pos..*s]));
            out.push_str(&format!("<{l}>{}</{l}>", esc(&self.text[*s..*e])));
            pos = *e;
        }
        out.push_str(&esc(&self.text[pos..]));
        out
    }

    pub fn token_labels(&self, tokens: &[Token], default: &str) -> Vec<String> {
        tokens
            .iter()
            .map(|t| {
                self.spans
                    .iter()
                    .find(|(s, e, _)| t.start >= *s && t.start < *e)
                    .map_or(default, |(_, _, l)| l.as_str())
                    .to_string()
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaggerModel {
    pub task: TaggerTask,
    pub vocabulary: Vocabulary,
    pub crf: CrfModel,
}

/// A maximal run of equally labeled tokens.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Run {
    pub label: String,
    pub first: usize,
    pub last: usize,
}

pub fn runs(labels: &[String]) -> Vec<Run> {
    let mut out: Vec<Run> = Vec::new();
    for (i, l) in labels.iter().enumerate() {
        match out.last_mut() {
            Some(r) if &r.label == l => r.last = i,
            _ => out.push(Run {
                label: l.clone(),
                first: i,
                last: i,
            }),
        }
    }
    out
}

fn features(task: TaggerTask, tokens: &[Token], vocab: Option<&Vocabulary>, dict: &Dictionaries) -> Vec<Vec<String>> {
    match task {
        TaggerTask::Affiliation => affiliation_features(tokens, vocab, dict),
        TaggerTask::Citation => citation_features(tokens, vocab, dict),
    }
}

impl TaggerModel {
    pub fn train(
        task: TaggerTask,
        examples: &[LabeledText],
        dict: &Dictionaries,
        opts: &CrfTrainOptions<f64>,
    ) -> Result<Self> {
        let tokenized: Vec<Vec<Token>> = examples.iter().map(|e| tokenize(&e.text)).collect();
        let vocabulary = Vocabulary::build(tokenized.iter().map(Vec::as_slice), RARE_THRESHOLD);
        let data: Vec<TrainingSequence> = examples
            .iter()
            .zip(&tokenized)
            .filter(|(_, t)| !t.is_empty())
            .map(|(e, t)| TrainingSequence {
                features: features(task, t, Some(&vocabulary), dict),
                labels: e.token_labels(t, task.default_label()),
            })
            .collect();
        let (mut crf, _) = train_crf(&data, opts)?;
        // Keep every task label in the alphabet even if training never used it.
        if crf.labels().len() < task.labels().len() {
            let mut labels: Vec<String> = crf.labels().to_vec();
            for l in task.labels() {
                if !labels.iter().any(|x| x == l) {
                    labels.push(l.to_string());
                }
            }
            crf = widen_labels(&crf, labels);
        }
        Ok(Self { task, vocabulary, crf })
    }

    pub fn tag_tokens(&self, tokens: &[Token], dict: &Dictionaries) -> Vec<String> {
        if tokens.is_empty() {
            return vec![];
        }
        self.crf.tag(&features(self.task, tokens, Some(&self.vocabulary), dict))
    }

    pub fn tag(&self, text: &str, dict: &Dictionaries) -> (Vec<Token>, Vec<String>) {
        let tokens = tokenize(text);
        let labels = self.tag_tokens(&tokens, dict);
        (tokens, labels)
    }

    pub fn to_json(&self) -> Vec<u8> {
        serde_json::to_vec(self).expect("tagger serializes")
    }

    pub fn from_json(bytes: &[u8]) -> Result<Self> {
        serde_json::from_slice(bytes).map_err(|e| Error::Model(e.to_string()))
    }
}

/// Copies a model into a larger label alphabet; new labels get zero weights.
fn widen_labels(crf: &CrfModel, labels: Vec<String>) -> CrfModel {
    let old = crf.labels().len();
    let new = labels.len();
    let nf = crf.features().len();
    let mut w = vec![0.0; nf * new + new * new];
    for f in 0..nf {
        for y in 0..old {
            w[f * new + y] = crf.emission(f, y);
        }
    }
    for a in 0..old {
        for b in 0..old {
            w[nf * new + a * new + b] = crf.transition(a, b);
        }
    }
    // Unseen labels should never win: strongly penalize entering them.
    for a in 0..new {
        for b in old..new {
            w[nf * new + a * new + b] = -1e3;
        }
    }
    CrfModel::from_weights(labels, crf.features().to_vec(), crf.sigma2(), w)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn markup_round_trip() {
        let l = LabeledText::parse_markup("<surname>Smith</surname> &amp; co, <year>1997</year>.").unwrap();
        assert_eq!(l.text, "Smith & co, 1997.");
        assert_eq!(l.spans[1], (12, 16, "year".to_string()));
        assert_eq!(LabeledText::parse_markup(&l.to_markup()).unwrap(), l);
        assert!(LabeledText::parse_markup("<a>x").is_err());
    }

    #[test]
    fn run_grouping() {
        let l: Vec<String> = ["a", "a", "b", "a"].iter().map(|s| s.to_string()).collect();
        let r = runs(&l);
        assert_eq!(r.len(), 3);
        assert_eq!((r[0].first, r[0].last), (0, 1));
    }
}
