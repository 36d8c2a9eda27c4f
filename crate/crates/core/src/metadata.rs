//! Front matter: author/affiliation relations and cleaning of the labelled
//! metadata zones into a `DocumentFront`.

use once_cell::sync::Lazy;
use regex::Regex;

use crate::affiliation::{parse_affiliation, ParsedAffiliation};
use crate::classify::{classify_zones, ZoneClassifier};
use crate::dict::Dictionaries;
use crate::error::{Error, Result};
use crate::geom::{CategoryLabel, Document, Line, Zone, ZoneLabel};
use crate::record::DocumentFront;
use crate::tagger::TaggerModel;
use crate::text;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AuthorLayout {
    /// One author zone with indexed names, affiliations listed separately.
    Grouped,
    /// One zone per author: name, affiliation and email together.
    PerZone,
}

/// Characters accepted as affiliation index markers besides digits and
/// single lowercase letters.
const MARKER_SYMBOLS: &[char] = &['*', '†', '‡', '§', '¶', '#'];

fn zones_with(doc: &Document, label: ZoneLabel) -> Vec<&Zone> {
    doc.zones().filter(|z| z.label == Some(label)).collect()
}

/// Per-zone when at least two affiliation zones sit on roughly the same
/// horizontal line (vertical overlap ≥ half the smaller height).
pub fn detect_author_layout(doc: &Document) -> Result<AuthorLayout> {
    for page in &doc.pages {
        let affs: Vec<&Zone> = page.zones.iter().filter(|z| z.label == Some(ZoneLabel::Affiliation)).collect();
        for (i, a) in affs.iter().enumerate() {
            for b in &affs[i + 1..] {
                let min_h = a.bbox.height().min(b.bbox.height());
                if min_h > 0.0 && a.bbox.vertical_overlap(&b.bbox) >= 0.5 * min_h {
                    return Ok(AuthorLayout::PerZone);
                }
            }
        }
    }
    if zones_with(doc, ZoneLabel::Author).is_empty() {
        return Err(Error::NoAuthors);
    }
    Ok(AuthorLayout::Grouped)
}

/// Text of a line as (char, superscript) pairs, words separated by spaces.
/// A character is superscript when it is clearly smaller than the line's
/// median and sits above the median baseline.
fn marked_line(line: &Line) -> Vec<(char, bool)> {
    let mut heights: Vec<f64> = line.chars().map(|c| c.bbox.height()).collect();
    let mut bottoms: Vec<f64> = line.chars().map(|c| c.bbox.y2).collect();
    heights.sort_by(f64::total_cmp);
    bottoms.sort_by(f64::total_cmp);
    let (h, bottom) = match (heights.get(heights.len() / 2), bottoms.get(bottoms.len() / 2)) {
        (Some(&h), Some(&b)) => (h, b),
        _ => return Vec::new(),
    };
    let mut out = Vec::new();
    for (wi, w) in line.words.iter().enumerate() {
        if wi > 0 {
            out.push((' ', false));
        }
        for c in &w.chars {
            let sup = c.bbox.height() < 0.8 * h && c.bbox.y2 < bottom - 0.15 * h;
            out.extend(c.text.chars().map(|ch| (ch, sup)));
        }
    }
    out
}

fn is_marker_char(c: char) -> bool {
    c.is_ascii_digit() || MARKER_SYMBOLS.contains(&c)
}

fn split_markers(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    for part in s.split([',', ' ', ';']).filter(|p| !p.is_empty()) {
        // "12*" holds two markers, "12" one.
        let digits: String = part.chars().take_while(char::is_ascii_digit).collect();
        if !digits.is_empty() {
            out.push(digits.clone());
        }
        out.extend(part[digits.len()..].chars().map(String::from));
    }
    out
}

#[derive(Debug, Default)]
struct Pending {
    name: String,
    markers: String,
    sup_seen: bool,
}

fn flush(p: &mut Pending, authors: &mut Vec<(String, Vec<String>)>) {
    let mut name = p.name.trim().to_string();
    let mut markers = std::mem::take(&mut p.markers);
    if !p.sup_seen {
        // Markers typed inline: "Rahman1" or "Rahman*".
        let cut = name.trim_end_matches(is_marker_char).len();
        if cut == 0 || name[..cut].ends_with(char::is_alphabetic) {
            markers.push_str(&name[cut..]);
            name.truncate(cut);
        }
    }
    let name = name.trim_matches(|c: char| c.is_whitespace() || c == ',' || c == ';').to_string();
    let markers = split_markers(&markers);
    if name.is_empty() {
        if let Some(last) = authors.last_mut() {
            last.1.extend(markers);
        }
    } else {
        authors.push((name, markers));
    }
    *p = Pending::default();
}

/// Author names with their index markers.
fn split_authors(zones: &[&Zone]) -> Vec<(String, Vec<String>)> {
    let mut authors = Vec::new();
    let mut p = Pending::default();
    for zone in zones {
        for line in &zone.lines {
            let chars = marked_line(line);
            let mut i = 0;
            while i < chars.len() {
                let (c, sup) = chars[i];
                if sup {
                    p.markers.push(if c == ',' { ' ' } else { c });
                    p.sup_seen = true;
                } else if matches!(c, ',' | ';' | '&') {
                    flush(&mut p, &mut authors);
                } else if c == ' ' {
                    // " and " between names.
                    let rest: String = chars[i + 1..].iter().take(4).map(|x| x.0).collect();
                    if (rest == "and " || rest == "and") && chars[i + 1..].iter().take(3).all(|x| !x.1) {
                        flush(&mut p, &mut authors);
                        i += 4;
                        continue;
                    }
                    p.name.push(' ');
                } else {
                    p.name.push(c);
                }
                i += 1;
            }
            p.name.push(' ');
        }
        flush(&mut p, &mut authors);
    }
    flush(&mut p, &mut authors);
    authors
}

static LINE_MARKER: Lazy<Regex> = Lazy::new(|| Regex::new(r"^(\d{1,2}|[*†‡§¶#]|[a-z])\s*(\p{Lu}.*)$").unwrap());

/// Affiliation texts with their index markers. A new affiliation starts at
/// each marked line and at each zone.
fn split_affiliations(zones: &[&Zone]) -> Vec<(String, Vec<String>)> {
    let mut out: Vec<(Vec<String>, Vec<String>)> = Vec::new();
    for zone in zones {
        let mut first = true;
        for line in &zone.lines {
            let chars = marked_line(line);
            let lead: String = chars.iter().take_while(|c| c.1).map(|c| c.0).collect();
            let rest: String = chars.iter().skip_while(|c| c.1).map(|c| c.0).collect();
            let (marker, body) = if !lead.is_empty() {
                (Some(lead), rest.trim().to_string())
            } else if let Some(c) = LINE_MARKER.captures(rest.trim()) {
                (Some(c[1].to_string()), c[2].to_string())
            } else {
                (None, rest.trim().to_string())
            };
            match marker {
                Some(m) => out.push((split_markers(&m), vec![body])),
                None if first => out.push((vec![], vec![body])),
                None => out.last_mut().expect("zone started").1.push(body),
            }
            first = false;
        }
    }
    out.into_iter()
        .map(|(m, lines)| (text::normalize_ligatures(&text::join_lines(&lines)), m))
        .filter(|(t, _)| !t.is_empty())
        .collect()
}

static EMAIL_LABEL: Lazy<Regex> = Lazy::new(|| Regex::new(r"(?i)\b(e-?mail|email)\s*:?").unwrap());

/// Affiliation text with emails and email labels removed.
fn strip_emails(s: &str) -> String {
    let s = text::email_regex().replace_all(s, "");
    let s = EMAIL_LABEL.replace_all(&s, "");
    s.split_whitespace()
        .collect::<Vec<_>>()
        .join(" ")
        .trim_matches(|c: char| c == ',' || c == ';' || c.is_whitespace())
        .to_string()
}

/// Authors, affiliations and the author–affiliation relation of a grouped
/// layout, joined on index markers.
pub fn extract_authors_grouped(
    author_zones: &[&Zone],
    affiliation_zones: &[&Zone],
) -> (Vec<String>, Vec<String>, Vec<(usize, usize)>) {
    let authors = split_authors(author_zones);
    let affs: Vec<(String, Vec<String>)> = split_affiliations(affiliation_zones)
        .into_iter()
        .map(|(t, m)| (strip_emails(&t), m))
        .filter(|(t, _)| !t.is_empty())
        .collect();
    let mut rel = Vec::new();
    let marked = affs.iter().any(|a| !a.1.is_empty());
    if marked {
        for (i, (_, am)) in authors.iter().enumerate() {
            for (j, (_, fm)) in affs.iter().enumerate() {
                if am.iter().any(|m| fm.contains(m)) {
                    rel.push((i, j));
                }
            }
        }
    } else if affs.len() == 1 {
        rel.extend((0..authors.len()).map(|i| (i, 0)));
    }
    (
        authors.into_iter().map(|a| a.0).collect(),
        affs.into_iter().map(|a| a.0).collect(),
        rel,
    )
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct PerZoneAuthors {
    pub authors: Vec<String>,
    pub affiliations: Vec<String>,
    pub emails: Vec<String>,
    pub author_affiliation: Vec<(usize, usize)>,
    pub author_email: Vec<(usize, usize)>,
}

/// First line of each zone is the author; emails are found by pattern and
/// the remaining lines form the affiliation.
pub fn extract_authors_per_zone(zones: &[&Zone]) -> PerZoneAuthors {
    let mut out = PerZoneAuthors::default();
    for zone in zones {
        let Some(first) = zone.lines.first() else { continue };
        let name = first.text().trim().to_string();
        if name.is_empty() {
            continue;
        }
        let a = out.authors.len();
        out.authors.push(name);
        let rest: Vec<String> = zone.lines[1..].iter().map(Line::text).collect();
        let joined = text::join_lines(&rest);
        for e in text::emails(&joined) {
            out.author_email.push((a, out.emails.len()));
            out.emails.push(e);
        }
        let aff = strip_emails(&text::normalize_ligatures(&joined));
        if !aff.is_empty() {
            out.author_affiliation.push((a, out.affiliations.len()));
            out.affiliations.push(aff);
        }
    }
    out
}

fn surname_key(author: &str) -> String {
    author.split_whitespace().last().map(text::letters_lower).unwrap_or_default()
}

/// Author whose surname occurs in the mailbox; the longest surname wins.
pub fn match_email_to_author(email: &str, authors: &[String]) -> Option<usize> {
    let mailbox = text::letters_lower(email.split('@').next().unwrap_or(""));
    authors
        .iter()
        .enumerate()
        .map(|(i, a)| (i, surname_key(a)))
        .filter(|(_, s)| s.len() >= 2 && mailbox.contains(s.as_str()))
        .max_by(|a, b| a.1.len().cmp(&b.1.len()).then(b.0.cmp(&a.0)))
        .map(|(i, _)| i)
}

static PAGES: Lazy<Regex> = Lazy::new(|| Regex::new(r"(\d+)\s*[-–—]\s*(\d+)").unwrap());
static YEAR: Lazy<Regex> = Lazy::new(|| Regex::new(r"\b((?:19|20)\d{2})\b").unwrap());
static VOLUME: Lazy<Regex> = Lazy::new(|| Regex::new(r"(?i)\bvol(?:ume)?\.?\s*(\d+)").unwrap());
static ISSUE: Lazy<Regex> = Lazy::new(|| Regex::new(r"(?i)\b(?:no\.?|issue)\s*(\d+)").unwrap());
/// `8(1)`: volume with the issue in parentheses.
static VOLUME_ISSUE: Lazy<Regex> = Lazy::new(|| Regex::new(r"\b(\d+)\s*\((\d+)\)").unwrap());
/// `8:7-10`: volume followed by the page range.
static VOLUME_PAGES: Lazy<Regex> = Lazy::new(|| Regex::new(r"\b(\d+)\s*:\s*\d+\s*[-–—]").unwrap());
static JOURNAL_END: Lazy<Regex> = Lazy::new(|| Regex::new(r"(?i)\d|\(|\bvol\b|\bvolume\b").unwrap());
static ABSTRACT_LABEL: Lazy<Regex> = Lazy::new(|| Regex::new(r"(?i)^\s*(abstract|summary)\b\s*[:.\-–—]?\s*").unwrap());
static KEYWORDS_LABEL: Lazy<Regex> =
    Lazy::new(|| Regex::new(r"(?i)^\s*(key\s*-?\s*words?|index\s+terms)\s*[:.\-–—]?\s*").unwrap());

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BibInfo {
    pub journal: Option<String>,
    pub volume: Option<String>,
    pub issue: Option<String>,
    pub pages: Option<(String, String)>,
    pub year: Option<String>,
    pub doi: Option<String>,
}

/// Bibliographic fields from the text of bib_info zones.
pub fn parse_bib_info(s: &str) -> BibInfo {
    let doi = text::find_doi(s);
    let plain = match &doi {
        Some(d) => s.replace(d.as_str(), " "),
        None => s.to_string(),
    };
    let pages = PAGES.captures(&plain).map(|c| (c[1].to_string(), c[2].to_string()));
    let mut volume = VOLUME.captures(&plain).map(|c| c[1].to_string());
    let mut issue = ISSUE.captures(&plain).map(|c| c[1].to_string());
    if let Some(c) = VOLUME_ISSUE.captures(&plain).filter(|c| !YEAR.is_match(&c[2])) {
        volume.get_or_insert_with(|| c[1].to_string());
        issue.get_or_insert_with(|| c[2].to_string());
    }
    if volume.is_none() {
        volume = VOLUME_PAGES.captures(&plain).map(|c| c[1].to_string());
    }
    let first_line = plain.lines().next().unwrap_or("");
    let head = JOURNAL_END.find(first_line).map_or(first_line, |m| &first_line[..m.start()]);
    let journal = head.trim().trim_end_matches([',', ';', ':']).trim();
    BibInfo {
        journal: (journal.chars().filter(|c| c.is_alphabetic()).count() >= 2 && !journal.to_lowercase().starts_with("doi"))
            .then(|| journal.to_string()),
        volume,
        issue,
        pages,
        year: YEAR.captures(&plain).map(|c| c[1].to_string()),
        doi,
    }
}

/// Printed page numbers of the first and last page, when at least 80% of
/// the pages carry a number and they increase by one per page.
pub fn infer_page_range(doc: &Document) -> Option<(String, String)> {
    let n = doc.pages.len();
    if n == 0 {
        return None;
    }
    let numbers: Vec<Option<i64>> = doc
        .pages
        .iter()
        .map(|p| {
            p.zones
                .iter()
                .filter(|z| z.category != Some(CategoryLabel::Body) && z.lines.len() == 1)
                .find_map(|z| {
                    let t = z.text();
                    let t = t.trim();
                    (t.len() <= 5 && t.chars().all(|c| c.is_ascii_digit())).then(|| t.parse().ok()).flatten()
                })
        })
        .collect();
    let offsets: Vec<i64> = numbers.iter().enumerate().filter_map(|(i, v)| v.map(|v| v - i as i64)).collect();
    let first = *offsets.first()?;
    if offsets.len() * 5 < n * 4 || offsets.iter().any(|&o| o != first) || first < 0 {
        return None;
    }
    Some((first.to_string(), (first + n as i64 - 1).to_string()))
}

fn zones_text(zones: &[&Zone]) -> String {
    zones.iter().map(|z| z.text()).collect::<Vec<_>>().join("\n")
}

/// Assembles the front record from a document whose metadata zones carry
/// labels. Affiliations are parsed when a model is given.
pub fn clean_and_assemble(doc: &Document, affiliation_model: Option<&TaggerModel>, dict: &Dictionaries) -> DocumentFront {
    let mut front = DocumentFront::default();

    let titles = zones_with(doc, ZoneLabel::Title);
    let title_lines: Vec<String> = titles.iter().flat_map(|z| z.lines.iter().map(Line::text)).collect();
    let mut title = text::normalize_ligatures(&text::join_lines(&title_lines));
    if let Some(first) = title_lines.first() {
        if let Some(cut) = dict.article_type_prefix(first) {
            if cut < first.trim_end().len() {
                title = title[cut..].trim_start_matches(|c: char| c.is_whitespace() || ":.-–—".contains(c)).to_string();
            }
        }
    }
    front.title = (!title.trim().is_empty()).then(|| title.trim().to_string());

    let abs = text::clean_text(&zones_text(&zones_with(doc, ZoneLabel::Abstract)));
    let abs = ABSTRACT_LABEL.replace(&abs, "").trim().to_string();
    front.abstract_text = (!abs.is_empty()).then_some(abs);

    let kw = text::clean_text(&zones_text(&zones_with(doc, ZoneLabel::Keywords)));
    front.keywords = KEYWORDS_LABEL
        .replace(&kw, "")
        .split([',', ';'])
        .map(|k| k.trim().trim_end_matches('.').trim().to_string())
        .filter(|k| !k.is_empty())
        .collect();

    let (authors, affs, mut author_aff, mut emails, mut author_email) = match detect_author_layout(doc) {
        Ok(AuthorLayout::PerZone) => {
            let p = extract_authors_per_zone(&zones_with(doc, ZoneLabel::Affiliation));
            (p.authors, p.affiliations, p.author_affiliation, p.emails, p.author_email)
        }
        Ok(AuthorLayout::Grouped) => {
            let (a, f, r) =
                extract_authors_grouped(&zones_with(doc, ZoneLabel::Author), &zones_with(doc, ZoneLabel::Affiliation));
            (a, f, r, Vec::new(), Vec::new())
        }
        Err(_) => {
            let (a, f, r) = extract_authors_grouped(&[], &zones_with(doc, ZoneLabel::Affiliation));
            (a, f, r, Vec::new(), Vec::new())
        }
    };
    // Emails from correspondence and affiliation zones, matched by surname.
    let mut sources = zones_with(doc, ZoneLabel::Correspondence);
    sources.extend(zones_with(doc, ZoneLabel::Affiliation));
    for e in text::emails(&text::dehyphenate(&zones_text(&sources))) {
        if emails.iter().any(|x| x.eq_ignore_ascii_case(&e)) {
            continue;
        }
        if let Some(a) = match_email_to_author(&e, &authors) {
            author_email.push((a, emails.len()));
        }
        emails.push(e);
    }
    author_aff.sort_unstable();
    author_aff.dedup();
    author_email.sort_unstable();
    author_email.dedup();
    front.authors = authors;
    front.affiliations = affs
        .iter()
        .map(|raw| match affiliation_model {
            Some(m) => parse_affiliation(raw, m, dict).unwrap_or_else(|_| ParsedAffiliation::raw_only(raw.as_str())),
            None => ParsedAffiliation::raw_only(raw.as_str()),
        })
        .collect();
    front.author_affiliation = author_aff;
    front.emails = emails;
    front.author_email = author_email;

    let bib = parse_bib_info(&text::normalize_ligatures(&zones_text(&zones_with(doc, ZoneLabel::BibInfo))));
    front.journal = bib.journal;
    front.volume = bib.volume;
    front.issue = bib.issue;
    front.doi = bib.doi;
    front.pages = bib.pages.or_else(|| infer_page_range(doc));
    front.year = bib
        .year
        .or_else(|| YEAR.captures(&zones_text(&zones_with(doc, ZoneLabel::Dates))).map(|c| c[1].to_string()));
    front
}

/// Labels metadata zones (when a classifier is given) and assembles the front.
pub fn extract_metadata(
    doc: &Document,
    classifier: Option<&ZoneClassifier>,
    affiliation_model: Option<&TaggerModel>,
    dict: &Dictionaries,
) -> Result<DocumentFront> {
    let front = match classifier {
        Some(c) => clean_and_assemble(&classify_zones(doc, c, dict)?, affiliation_model, dict),
        None => clean_and_assemble(doc, affiliation_model, dict),
    };
    front.validate()?;
    Ok(front)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{BoundingBox, Character, FontTable, Page, Word};

    /// A line from `(text, superscript)` segments, words split on spaces.
    fn line(segments: &[(&str, bool)], y: f64) -> Line {
        let mut words = Vec::new();
        let mut chars = Vec::new();
        let mut x = 10.0;
        for (s, sup) in segments {
            for c in s.chars() {
                if c == ' ' {
                    if !chars.is_empty() {
                        words.push(Word::new(std::mem::take(&mut chars)));
                    }
                    x += 3.0;
                    continue;
                }
                let bbox = if *sup {
                    BoundingBox::new(x, y - 3.0, x + 3.0, y + 3.0)
                } else {
                    BoundingBox::new(x, y, x + 5.0, y + 10.0)
                };
                chars.push(Character::new(c.to_string(), bbox, 0));
                x += 5.0;
            }
        }
        if !chars.is_empty() {
            words.push(Word::new(chars));
        }
        Line::new(words)
    }

    fn zone(lines: Vec<Line>, label: ZoneLabel) -> Zone {
        let mut z = Zone::new(lines);
        z.category = Some(CategoryLabel::Metadata);
        z.label = Some(label);
        z
    }

    #[test]
    fn grouped_markers() {
        let authors = zone(vec![line(&[("F. Alam", false), ("2", true), (", M. S. Rahman", false), ("1", true)], 0.0)], ZoneLabel::Author);
        let affs = zone(
            vec![line(&[("1", true), ("Dept of Chemistry", false)], 20.0), line(&[("2", true), ("Dept of Physics", false)], 32.0)],
            ZoneLabel::Affiliation,
        );
        let (a, f, r) = extract_authors_grouped(&[&authors], &[&affs]);
        assert_eq!(a, ["F. Alam", "M. S. Rahman"]);
        assert_eq!(f, ["Dept of Chemistry", "Dept of Physics"]);
        assert_eq!(r, [(0, 1), (1, 0)]);
    }

    #[test]
    fn inline_markers_and_conjunction() {
        let authors = zone(vec![line(&[("Ann Lee1,2 and Bo Chan*", false)], 0.0)], ZoneLabel::Author);
        let split = split_authors(&[&authors]);
        let owned = |n: &str, m: &[&str]| (n.to_string(), m.iter().map(|s| s.to_string()).collect::<Vec<_>>());
        assert_eq!(split, [owned("Ann Lee", &["1", "2"]), owned("Bo Chan", &["*"])]);
    }

    #[test]
    fn single_unmarked_affiliation_relates_to_all() {
        let authors = zone(vec![line(&[("Ann Lee", false)], 0.0)], ZoneLabel::Author);
        let affs = zone(vec![line(&[("University of Dhaka", false)], 20.0)], ZoneLabel::Affiliation);
        let (_, f, r) = extract_authors_grouped(&[&authors], &[&affs]);
        assert_eq!(f.len(), 1);
        assert_eq!(r, [(0, 0)]);
        let (a, _, r) = extract_authors_grouped(&[&authors], &[]);
        assert_eq!(a.len(), 1);
        assert!(r.is_empty());
    }

    #[test]
    fn per_zone_blocks() {
        let z = zone(
            vec![
                line(&[("Ann Lee", false)], 0.0),
                line(&[("Dept of Physics", false)], 12.0),
                line(&[("Springfield", false)], 24.0),
                line(&[("lee@x.edu", false)], 36.0),
            ],
            ZoneLabel::Affiliation,
        );
        let p = extract_authors_per_zone(&[&z]);
        assert_eq!(p.authors, ["Ann Lee"]);
        assert_eq!(p.affiliations, ["Dept of Physics Springfield"]);
        assert_eq!(p.emails, ["lee@x.edu"]);
        assert_eq!((p.author_affiliation, p.author_email), (vec![(0, 0)], vec![(0, 0)]));
    }

    #[test]
    fn layout_detection() {
        let mk = |x: f64, y: f64, label| {
            let mut z = zone(vec![line(&[("Somebody", false)], y)], label);
            for c in z.lines.iter_mut().flat_map(|l| l.words.iter_mut()).flat_map(|w| w.chars.iter_mut()) {
                c.bbox.x1 += x;
                c.bbox.x2 += x;
            }
            z.lines.iter_mut().for_each(Line::refresh);
            z.refresh();
            z
        };
        let doc = |zones| Document { pages: vec![Page::new(600.0, 800.0, zones)], fonts: FontTable::default() };
        let side = doc(vec![mk(0.0, 0.0, ZoneLabel::Affiliation), mk(300.0, 2.0, ZoneLabel::Affiliation)]);
        assert_eq!(detect_author_layout(&side).unwrap(), AuthorLayout::PerZone);
        let stacked = doc(vec![mk(0.0, 0.0, ZoneLabel::Author), mk(0.0, 30.0, ZoneLabel::Affiliation), mk(0.0, 60.0, ZoneLabel::Affiliation)]);
        assert_eq!(detect_author_layout(&stacked).unwrap(), AuthorLayout::Grouped);
        let none = doc(vec![mk(0.0, 30.0, ZoneLabel::Affiliation)]);
        assert!(matches!(detect_author_layout(&none), Err(Error::NoAuthors)));
    }

    #[test]
    fn bib_info_patterns() {
        let b = parse_bib_info("Dhaka Univ. J. Pharm. Sci. 8(1): 7-10, 2009");
        assert_eq!(b.journal.as_deref(), Some("Dhaka Univ. J. Pharm. Sci."));
        assert_eq!((b.volume.as_deref(), b.issue.as_deref()), (Some("8"), Some("1")));
        assert_eq!(b.pages, Some(("7".into(), "10".into())));
        assert_eq!(b.year.as_deref(), Some("2009"));
        let b = parse_bib_info("Journal of Things, Vol. 12, No. 3, pp. 100-110, 2001\ndoi:10.1234/abc.12");
        assert_eq!((b.volume.as_deref(), b.issue.as_deref()), (Some("12"), Some("3")));
        assert_eq!(b.doi.as_deref(), Some("10.1234/abc.12"));
        assert_eq!(b.journal.as_deref(), Some("Journal of Things"));
        let b = parse_bib_info("Journal of Things (2001) 12:100-110");
        assert_eq!(b.volume.as_deref(), Some("12"));
        assert_eq!(b.issue, None);
        assert_eq!(parse_bib_info(""), BibInfo::default());
    }

    #[test]
    fn email_by_surname() {
        let authors = vec!["Mohammad A. Rashid".to_string(), "Firoj Alam".to_string()];
        assert_eq!(match_email_to_author("rashidma@univdhaka.edu", &authors), Some(0));
        assert_eq!(match_email_to_author("nobody@x.org", &authors), None);
    }
}
