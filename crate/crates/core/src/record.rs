//! The extraction output and its three serializations: record-json
//! (canonical, round-trips), JATS-like XML, and BibTeX for the references.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::affiliation::ParsedAffiliation;
use crate::citation::{ParsedReference, RefType};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct DocumentFront {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub title: Option<String>,
    #[serde(rename = "abstract", skip_serializing_if = "Option::is_none")]
    pub abstract_text: Option<String>,
    pub authors: Vec<String>,
    pub affiliations: Vec<ParsedAffiliation>,
    /// (author index, affiliation index), sorted.
    pub author_affiliation: Vec<(usize, usize)>,
    pub emails: Vec<String>,
    /// (author index, email index), sorted.
    pub author_email: Vec<(usize, usize)>,
    pub keywords: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub journal: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub volume: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub issue: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pages: Option<(String, String)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub year: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub doi: Option<String>,
}

impl DocumentFront {
    /// Relation endpoints must exist in their lists.
    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str, (a, b): (usize, usize)| Error::Stage {
            stage: "metadata",
            message: format!("{what} relation ({a}, {b}) out of range"),
        };
        for &r in &self.author_affiliation {
            if r.0 >= self.authors.len() || r.1 >= self.affiliations.len() {
                return Err(bad("author-affiliation", r));
            }
        }
        for &r in &self.author_email {
            if r.0 >= self.authors.len() || r.1 >= self.emails.len() {
                return Err(bad("author-email", r));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct SectionNode {
    pub level: u8,
    pub title: String,
    pub content: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub children: Vec<SectionNode>,
}

impl SectionNode {
    /// Pre-order (level, title) pairs of a section forest.
    pub fn flatten(nodes: &[SectionNode]) -> Vec<(u8, String)> {
        let mut out = Vec::new();
        fn walk(n: &SectionNode, out: &mut Vec<(u8, String)>) {
            out.push((n.level, n.title.clone()));
            n.children.iter().for_each(|c| walk(c, out));
        }
        nodes.iter().for_each(|n| walk(n, &mut out));
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct DocumentRecord {
    pub front: DocumentFront,
    pub body: Vec<SectionNode>,
    pub back: Vec<ParsedReference>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    RecordJson,
    JatsXml,
    BibtexRefs,
}

impl std::str::FromStr for OutputFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "record-json" => Ok(Self::RecordJson),
            "jats-xml" => Ok(Self::JatsXml),
            "bibtex-refs" | "bibtex" => Ok(Self::BibtexRefs),
            _ => Err(Error::Config(format!("unknown output format {s}"))),
        }
    }
}

pub fn emit(record: &DocumentRecord, format: OutputFormat) -> Vec<u8> {
    match format {
        OutputFormat::RecordJson => {
            let mut v = serde_json::to_vec_pretty(record).expect("record serializes");
            v.push(b'\n');
            v
        }
        OutputFormat::JatsXml => jats(record).into_bytes(),
        OutputFormat::BibtexRefs => bibtex(&record.back).into_bytes(),
    }
}

pub fn load_record(bytes: &[u8]) -> Result<DocumentRecord> {
    serde_json::from_slice(bytes).map_err(Error::from_json)
}

pub fn xml_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            _ => out.push(c),
        }
    }
    out
}

fn element(out: &mut String, indent: usize, name: &str, text: &str) {
    let _ = writeln!(out, "{:indent$}<{name}>{}</{name}>", "", xml_escape(text));
}

fn jats(r: &DocumentRecord) -> String {
    let f = &r.front;
    let mut o = String::from("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<article>\n  <front>\n");
    if let Some(j) = &f.journal {
        o.push_str("    <journal-meta>\n      <journal-title-group>\n");
        element(&mut o, 8, "journal-title", j);
        o.push_str("      </journal-title-group>\n    </journal-meta>\n");
    }
    o.push_str("    <article-meta>\n");
    if let Some(d) = &f.doi {
        let _ = writeln!(o, "      <article-id pub-id-type=\"doi\">{}</article-id>", xml_escape(d));
    }
    if let Some(t) = &f.title {
        o.push_str("      <title-group>\n");
        element(&mut o, 8, "article-title", t);
        o.push_str("      </title-group>\n");
    }
    if !f.authors.is_empty() || !f.affiliations.is_empty() {
        o.push_str("      <contrib-group>\n");
        for (i, a) in f.authors.iter().enumerate() {
            o.push_str("        <contrib contrib-type=\"author\">\n");
            element(&mut o, 10, "string-name", a);
            for &(_, e) in f.author_email.iter().filter(|r| r.0 == i) {
                element(&mut o, 10, "email", &f.emails[e]);
            }
            for &(_, a) in f.author_affiliation.iter().filter(|r| r.0 == i) {
                let _ = writeln!(o, "          <xref ref-type=\"aff\" rid=\"aff{a}\">{a}</xref>");
            }
            o.push_str("        </contrib>\n");
        }
        for (i, a) in f.affiliations.iter().enumerate() {
            let _ = writeln!(o, "        <aff id=\"aff{i}\">");
            element(&mut o, 10, "label", &i.to_string());
            if a.institution.is_none() && a.address.is_none() && a.country.is_none() {
                let _ = writeln!(o, "          {}", xml_escape(&a.raw));
            }
            if let Some(x) = &a.institution {
                element(&mut o, 10, "institution", x);
            }
            if let Some(x) = &a.address {
                element(&mut o, 10, "addr-line", x);
            }
            if let Some(x) = &a.country {
                let attr = a.country_iso.as_deref().map(|c| format!(" country=\"{}\"", xml_escape(c))).unwrap_or_default();
                let _ = writeln!(o, "          <country{attr}>{}</country>", xml_escape(x));
            }
            o.push_str("        </aff>\n");
        }
        o.push_str("      </contrib-group>\n");
    }
    if let Some(a) = &f.abstract_text {
        o.push_str("      <abstract>\n");
        element(&mut o, 8, "p", a);
        o.push_str("      </abstract>\n");
    }
    if !f.keywords.is_empty() {
        o.push_str("      <kwd-group>\n");
        f.keywords.iter().for_each(|k| element(&mut o, 8, "kwd", k));
        o.push_str("      </kwd-group>\n");
    }
    for (name, v) in [("volume", &f.volume), ("issue", &f.issue)] {
        if let Some(v) = v {
            element(&mut o, 6, name, v);
        }
    }
    if let Some((a, b)) = &f.pages {
        element(&mut o, 6, "fpage", a);
        element(&mut o, 6, "lpage", b);
    }
    if let Some(y) = &f.year {
        o.push_str("      <pub-date>\n");
        element(&mut o, 8, "year", y);
        o.push_str("      </pub-date>\n");
    }
    o.push_str("    </article-meta>\n  </front>\n  <body>\n");
    fn sec(o: &mut String, n: &SectionNode, indent: usize) {
        let _ = writeln!(o, "{:indent$}<sec>", "");
        element(o, indent + 2, "title", &n.title);
        if !n.content.is_empty() {
            element(o, indent + 2, "p", &n.content);
        }
        n.children.iter().for_each(|c| sec(o, c, indent + 2));
        let _ = writeln!(o, "{:indent$}</sec>", "");
    }
    r.body.iter().for_each(|n| sec(&mut o, n, 4));
    o.push_str("  </body>\n  <back>\n    <ref-list>\n");
    for (i, rf) in r.back.iter().enumerate() {
        let _ = writeln!(o, "      <ref id=\"ref{}\">", i + 1);
        let _ = writeln!(o, "        <mixed-citation>{}</mixed-citation>", mixed_citation(rf));
        o.push_str("      </ref>\n");
    }
    o.push_str("    </ref-list>\n  </back>\n</article>\n");
    o
}

/// Wraps parsed fields where they occur in the raw string, left to right.
fn mixed_citation(r: &ParsedReference) -> String {
    let raw = &r.raw;
    let mut marks: Vec<(usize, usize, String)> = Vec::new();
    let free = |marks: &[(usize, usize, String)], s: usize, e: usize| marks.iter().all(|m| e <= m.0 || s >= m.1);
    let find = |marks: &[(usize, usize, String)], needle: &str| -> Option<(usize, usize)> {
        if needle.is_empty() {
            return None;
        }
        raw.match_indices(needle).map(|(s, m)| (s, s + m.len())).find(|&(s, e)| free(marks, s, e))
    };
    for a in &r.authors {
        let Some((ss, se)) = find(&marks, &a.surname) else { continue };
        let given = (!a.given.is_empty())
            .then(|| raw.match_indices(a.given.as_str()).map(|(s, m)| (s, s + m.len())))
            .into_iter()
            .flatten()
            .filter(|&(s, e)| free(&marks, s, e) && (e <= ss || s >= se))
            .min_by_key(|&(s, e)| if e <= ss { ss - e } else { s - se });
        let mut inner = String::new();
        let (start, end) = match given {
            Some((gs, ge)) if gs < ss => {
                let _ = write!(
                    inner,
                    "<given-names>{}</given-names>{}<surname>{}</surname>",
                    xml_escape(&raw[gs..ge]),
                    xml_escape(&raw[ge..ss]),
                    xml_escape(&raw[ss..se])
                );
                (gs, se)
            }
            Some((gs, ge)) => {
                let _ = write!(
                    inner,
                    "<surname>{}</surname>{}<given-names>{}</given-names>",
                    xml_escape(&raw[ss..se]),
                    xml_escape(&raw[se..gs]),
                    xml_escape(&raw[gs..ge])
                );
                (ss, ge)
            }
            None => {
                let _ = write!(inner, "<surname>{}</surname>", xml_escape(&raw[ss..se]));
                (ss, se)
            }
        };
        if free(&marks, start, end) {
            marks.push((start, end, format!("<string-name>{inner}</string-name>")));
        }
    }
    let mut simple = |tag: &str, v: &Option<String>| {
        if let Some(v) = v {
            if let Some((s, e)) = find(&marks, v) {
                marks.push((s, e, format!("<{tag}>{}</{tag}>", xml_escape(v))));
            }
        }
    };
    simple("article-title", &r.title);
    simple("source", &r.source);
    simple("volume", &r.volume);
    simple("issue", &r.issue);
    if let Some((a, b)) = &r.pages {
        simple("fpage", &Some(a.clone()));
        if b != a {
            simple("lpage", &Some(b.clone()));
        }
    }
    simple("year", &r.year);
    simple("pub-id", &r.doi);
    marks.sort_by_key(|m| m.0);
    let mut out = String::new();
    let mut pos = 0;
    for (s, e, m) in marks {
        out.push_str(&xml_escape(&raw[pos..s]));
        out.push_str(&m);
        pos = e;
    }
    out.push_str(&xml_escape(&raw[pos..]));
    out
}

fn bib_escape(s: &str) -> String {
    s.replace('{', "\\{").replace('}', "\\}")
}

pub fn bibtex(refs: &[ParsedReference]) -> String {
    let mut o = String::new();
    for (i, r) in refs.iter().enumerate() {
        let (kind, source_field) = match r.ref_type {
            Some(RefType::ConferenceProceedings) => ("inproceedings", "booktitle"),
            Some(RefType::TechnicalReport) => ("techreport", "institution"),
            Some(RefType::JournalPaper) => ("article", "journal"),
            None => ("misc", "howpublished"),
        };
        let _ = writeln!(o, "@{kind}{{ref{},", i + 1);
        let mut field = |name: &str, v: &str| {
            let _ = writeln!(o, "  {name} = {{{}}},", bib_escape(v));
        };
        if !r.authors.is_empty() {
            let names: Vec<String> = r
                .authors
                .iter()
                .map(|a| if a.given.is_empty() { a.surname.clone() } else { format!("{}, {}", a.surname, a.given) })
                .collect();
            field("author", &names.join(" and "));
        }
        if let Some(v) = &r.title {
            field("title", v);
        }
        if let Some(v) = &r.source {
            field(source_field, v);
        }
        if let Some(v) = &r.volume {
            field("volume", v);
        }
        if let Some(v) = &r.issue {
            field("number", v);
        }
        if let Some((a, b)) = &r.pages {
            field("pages", &if a == b { a.clone() } else { format!("{a}--{b}") });
        }
        if let Some(v) = &r.year {
            field("year", v);
        }
        if let Some(v) = &r.doi {
            field("doi", v);
        }
        field("note", &r.raw);
        o.push_str("}\n\n");
    }
    o
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::citation::Author;

    fn sample() -> DocumentRecord {
        DocumentRecord {
            front: DocumentFront {
                title: Some("A & B".into()),
                authors: vec!["Mohammad A. Rashid".into()],
                affiliations: vec![ParsedAffiliation::raw_only("Dhaka")],
                author_affiliation: vec![(0, 0)],
                ..Default::default()
            },
            body: vec![SectionNode {
                level: 1,
                title: "Intro".into(),
                content: "x".into(),
                children: vec![],
            }],
            back: vec![ParsedReference {
                raw: "E. Braunwald, T, 1997.".into(),
                authors: vec![Author {
                    given: "E.".into(),
                    surname: "Braunwald".into(),
                }],
                year: Some("1997".into()),
                ..Default::default()
            }],
            warnings: vec![],
        }
    }

    #[test]
    fn json_round_trip() {
        let r = sample();
        assert_eq!(load_record(&emit(&r, OutputFormat::RecordJson)).unwrap(), r);
        assert_eq!(load_record(&emit(&DocumentRecord::default(), OutputFormat::RecordJson)).unwrap(), DocumentRecord::default());
    }

    #[test]
    fn jats_shape() {
        let x = String::from_utf8(emit(&sample(), OutputFormat::JatsXml)).unwrap();
        assert!(x.contains("<article-title>A &amp; B</article-title>"));
        assert!(x.contains("<string-name><given-names>E.</given-names> <surname>Braunwald</surname></string-name>"));
        assert!(x.contains("<year>1997</year>"));
        let empty = String::from_utf8(emit(&DocumentRecord::default(), OutputFormat::JatsXml)).unwrap();
        assert!(empty.contains("<body>") && empty.contains("<ref-list>"));
    }

    #[test]
    fn bibtex_entries() {
        let b = bibtex(&sample().back);
        assert_eq!(b.matches('@').count(), 1);
        assert!(b.contains("author = {Braunwald, E.}"));
    }
}
