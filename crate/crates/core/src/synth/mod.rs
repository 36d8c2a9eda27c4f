//! Seeded synthetic documents: a character dump, the ground-truth geometric
//! model (zones in reading order, labeled), and the ground-truth record.
//!
//! Layout rules keep the ground truth recoverable by a Docstrum-style
//! segmenter: zones are separated by at least [`ZONE_GAP`], lines inside a
//! zone by a fraction of the line height, columns by a gutter, and every body
//! zone fragment has at least [`MIN_FRAGMENT`] lines (orphan/widow control).

pub mod content;

use std::collections::VecDeque;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::affiliation::ParsedAffiliation;
use crate::citation::ParsedReference;
use crate::geom::{BoundingBox, CategoryLabel, Character, Document, FontTable, Line, Page, Word, Zone, ZoneLabel};
use crate::ingest::{CharDump, DumpPage};
use crate::record::{DocumentFront, DocumentRecord, SectionNode};
use crate::tagger::LabeledText;

pub use content::{affiliation_training_set, citation_training_set};

/// Vertical whitespace between zones, in points.
pub const ZONE_GAP: f64 = 24.0;
/// Minimum number of lines of a body zone fragment split across columns.
pub const MIN_FRAGMENT: usize = 8;
const MARGIN: f64 = 50.0;
const GUTTER: f64 = 24.0;
const PER_ZONE_GAP: f64 = 30.0;
const FURNITURE_TOP: f64 = 36.0;
const BODY_TOP: f64 = 66.0;
const BODY_BOTTOM: f64 = 785.0;
const PAGE_NUMBER_TOP: f64 = 805.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FontSpec {
    pub name: String,
    pub size: f64,
}

impl FontSpec {
    fn new(name: &str, size: f64) -> Self {
        Self {
            name: name.to_string(),
            size,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FontInventory {
    pub body: FontSpec,
    pub title: FontSpec,
    pub author: FontSpec,
    pub affiliation: FontSpec,
    pub abstract_text: FontSpec,
    pub small: FontSpec,
    pub type_label: FontSpec,
    /// Level 1, 2, 3.
    pub headers: [FontSpec; 3],
    pub reference: FontSpec,
    pub caption: FontSpec,
    pub furniture: FontSpec,
}

impl Default for FontInventory {
    fn default() -> Self {
        Self {
            body: FontSpec::new("Times-Roman", 10.0),
            title: FontSpec::new("Times-Bold", 16.0),
            author: FontSpec::new("Times-Roman", 11.0),
            affiliation: FontSpec::new("Times-Italic", 9.0),
            abstract_text: FontSpec::new("Times-Roman", 9.0),
            small: FontSpec::new("Times-Roman", 8.0),
            type_label: FontSpec::new("Helvetica-Bold", 9.0),
            headers: [
                FontSpec::new("Times-Bold", 12.0),
                FontSpec::new("Times-Bold", 10.5),
                FontSpec::new("Times-Italic", 10.0),
            ],
            reference: FontSpec::new("Times-Roman", 8.5),
            caption: FontSpec::new("Helvetica", 8.0),
            furniture: FontSpec::new("Times-Italic", 8.0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReferenceStyle {
    /// `[n] ...` with continuation lines aligned after the marker.
    Bracket,
    /// `n. ...`
    Numbered,
    /// Unnumbered, continuation lines indented.
    Hanging,
    /// One of the above, drawn per document.
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AuthorLayoutChoice {
    Grouped,
    PerZone,
    Random,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SynthSpec {
    pub seed: u64,
    pub page_width: f64,
    pub page_height: f64,
    pub columns: usize,
    pub fonts: FontInventory,
    pub front_matter: bool,
    /// Number of level-1 sections before the references.
    pub sections: usize,
    /// Deepest planted header level (1–3).
    pub max_depth: u8,
    pub references: usize,
    pub reference_style: ReferenceStyle,
    pub author_layout: AuthorLayoutChoice,
    pub captions: bool,
    pub acknowledgments: bool,
}

impl Default for SynthSpec {
    fn default() -> Self {
        Self {
            seed: 0,
            page_width: 595.0,
            page_height: 842.0,
            columns: 2,
            fonts: FontInventory::default(),
            front_matter: true,
            sections: 4,
            max_depth: 3,
            references: 12,
            reference_style: ReferenceStyle::Random,
            author_layout: AuthorLayoutChoice::Random,
            captions: true,
            acknowledgments: true,
        }
    }
}

impl SynthSpec {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthOutput {
    pub chardump: CharDump,
    pub ground: Document,
    pub record: DocumentRecord,
}

// ---------------------------------------------------------------------------
// Glyph metrics and line breaking

#[derive(Debug, Clone, Copy, PartialEq)]
struct Style {
    font: u32,
    sup_font: u32,
    size: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Glyph {
    c: char,
    style: Style,
    sup: bool,
}

type GWord = Vec<Glyph>;

fn width_factor(c: char) -> f64 {
    match c {
        'i' | 'l' | 'j' | 't' | 'f' | 'r' | 'I' | '.' | ',' | ';' | ':' | '\'' | '!' | '|' | '(' | ')' | '['
        | ']' | '-' | '*' => 0.3,
        'm' | 'w' | 'M' | 'W' | '@' => 0.8,
        c if c.is_uppercase() => 0.66,
        _ => 0.5,
    }
}

fn glyph_size(g: &Glyph) -> f64 {
    if g.sup {
        0.6 * g.style.size
    } else {
        g.style.size
    }
}

fn glyph_width(g: &Glyph) -> f64 {
    width_factor(g.c) * glyph_size(g)
}

fn word_width(w: &[Glyph]) -> f64 {
    w.iter().map(glyph_width).sum()
}

fn space_width(size: f64) -> f64 {
    0.45 * size
}

fn words(text: &str, style: Style) -> Vec<GWord> {
    text.split_whitespace()
        .map(|w| w.chars().map(|c| Glyph { c, style, sup: false }).collect())
        .collect()
}

fn sup_glyphs(text: &str, style: Style) -> impl Iterator<Item = Glyph> + '_ {
    text.chars().map(move |c| Glyph { c, style, sup: true })
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Align {
    Left,
    Center,
}

#[derive(Debug, Clone)]
struct Para {
    words: Vec<GWord>,
    size: f64,
    align: Align,
    first_indent: f64,
    rest_indent: f64,
    /// Extra space above the paragraph when it is not first in its zone.
    gap_before: f64,
    hyphenate: bool,
}

impl Para {
    fn new(words: Vec<GWord>, size: f64) -> Self {
        Self {
            words,
            size,
            align: Align::Left,
            first_indent: 0.0,
            rest_indent: 0.0,
            gap_before: 0.0,
            hyphenate: false,
        }
    }
    fn text(text: &str, style: Style) -> Self {
        Self::new(words(text, style), style.size)
    }
    fn centered(mut self) -> Self {
        self.align = Align::Center;
        self
    }
    fn indents(mut self, first: f64, rest: f64) -> Self {
        self.first_indent = first;
        self.rest_indent = rest;
        self
    }
    fn gap(mut self, g: f64) -> Self {
        self.gap_before = g;
        self
    }
    fn hyphenated(mut self) -> Self {
        self.hyphenate = true;
        self
    }
}

#[derive(Debug, Clone)]
struct TLine {
    words: Vec<GWord>,
    offset: f64,
    size: f64,
    gap: f64,
}

impl TLine {
    fn advance(&self) -> f64 {
        1.2 * self.size
    }
}

/// Splits `w` into a hyphenated head that fits `room` and the tail.
fn hyphenate(w: &GWord, room: f64) -> Option<(GWord, GWord)> {
    let letters = w.iter().take_while(|g| g.c.is_alphabetic()).count();
    if letters < 7 || w[letters..].iter().any(|g| g.c.is_alphanumeric() || g.c == '-') {
        return None;
    }
    (3..=letters - 3).rev().find_map(|k| {
        let mut head: GWord = w[..k].to_vec();
        head.push(Glyph { c: '-', ..w[k - 1] });
        (word_width(&head) <= room).then(|| (head, w[k..].to_vec()))
    })
}

fn break_para<R: Rng>(rng: &mut R, p: &Para, width: f64) -> Vec<TLine> {
    let mut out = Vec::new();
    let mut queue: VecDeque<GWord> = p.words.iter().cloned().collect();
    let mut cur: Vec<GWord> = Vec::new();
    let mut cur_w = 0.0;
    let space = space_width(p.size);
    let flush = |out: &mut Vec<TLine>, cur: &mut Vec<GWord>, cur_w: f64| {
        let indent = if out.is_empty() { p.first_indent } else { p.rest_indent };
        let offset = match p.align {
            Align::Left => indent,
            Align::Center => indent + ((width - indent - cur_w) / 2.0).max(0.0),
        };
        out.push(TLine {
            words: std::mem::take(cur),
            offset,
            size: p.size,
            gap: if out.is_empty() { p.gap_before } else { 0.0 },
        });
    };
    while let Some(w) = queue.pop_front() {
        let indent = if out.is_empty() { p.first_indent } else { p.rest_indent };
        let avail = width - indent;
        let ww = word_width(&w);
        if cur.is_empty() {
            cur_w = ww;
            cur.push(w);
            continue;
        }
        if cur_w + space + ww <= avail {
            cur_w += space + ww;
            cur.push(w);
            continue;
        }
        if p.hyphenate && rng.gen_bool(0.5) {
            if let Some((head, tail)) = hyphenate(&w, avail - cur_w - space) {
                cur_w += space + word_width(&head);
                cur.push(head);
                flush(&mut out, &mut cur, cur_w);
                queue.push_front(tail);
                continue;
            }
        }
        flush(&mut out, &mut cur, cur_w);
        queue.push_front(w);
    }
    if !cur.is_empty() {
        flush(&mut out, &mut cur, cur_w);
    }
    out
}

fn break_paras<R: Rng>(rng: &mut R, paras: &[Para], width: f64) -> Vec<TLine> {
    paras.iter().flat_map(|p| break_para(rng, p, width)).collect()
}

fn render_line(tl: &TLine, x: f64, top: f64) -> Line {
    let baseline = top + 0.8 * tl.size;
    let mut cx = x + tl.offset;
    let mut words = Vec::with_capacity(tl.words.len());
    for (i, w) in tl.words.iter().enumerate() {
        if i > 0 {
            cx += space_width(tl.size);
        }
        let mut chars = Vec::with_capacity(w.len());
        for g in w {
            let gw = glyph_width(g);
            let (y1, y2, font) = if g.sup {
                let y2 = baseline - 0.35 * g.style.size;
                (y2 - 0.6 * g.style.size, y2, g.style.sup_font)
            } else {
                (baseline - 0.8 * g.style.size, baseline + 0.2 * g.style.size, g.style.font)
            };
            chars.push(Character::new(g.c.to_string(), BoundingBox::new(cx, y1, cx + gw, y2), font));
            cx += gw;
        }
        words.push(Word::new(chars));
    }
    Line::new(words)
}

/// Renders lines stacked from `top`; returns the lines and the y below the
/// last line's advance.
fn render_block(lines: &[TLine], x: f64, top: f64) -> (Vec<Line>, f64) {
    let mut y = top;
    let mut out = Vec::with_capacity(lines.len());
    for (i, l) in lines.iter().enumerate() {
        if i > 0 {
            y += l.gap;
        }
        out.push(render_line(l, x, y));
        y += l.advance();
    }
    (out, y)
}

fn labeled_zone(lines: Vec<Line>, category: CategoryLabel, label: Option<ZoneLabel>) -> Zone {
    let mut z = Zone::new(lines);
    z.category = Some(category);
    z.label = label;
    z
}

// ---------------------------------------------------------------------------
// Fonts

struct Styles {
    body: Style,
    title: Style,
    author: Style,
    affiliation: Style,
    abstract_text: Style,
    small: Style,
    type_label: Style,
    headers: [Style; 3],
    reference: Style,
    caption: Style,
    furniture: Style,
}

fn intern_styles(inv: &FontInventory, table: &mut FontTable) -> Styles {
    let mut s = |f: &FontSpec| {
        let font = table.intern(&format!("{},{}", f.name, f.size));
        let sup_font = table.intern(&format!("{},{}", f.name, (f.size * 0.6 * 100.0).round() / 100.0));
        Style {
            font,
            sup_font,
            size: f.size,
        }
    };
    Styles {
        body: s(&inv.body),
        title: s(&inv.title),
        author: s(&inv.author),
        affiliation: s(&inv.affiliation),
        abstract_text: s(&inv.abstract_text),
        small: s(&inv.small),
        type_label: s(&inv.type_label),
        headers: [s(&inv.headers[0]), s(&inv.headers[1]), s(&inv.headers[2])],
        reference: s(&inv.reference),
        caption: s(&inv.caption),
        furniture: s(&inv.furniture),
    }
}

// ---------------------------------------------------------------------------
// Document content

struct AuthorC {
    given: String,
    surname: String,
    affs: Vec<usize>,
    email: Option<usize>,
    corresponding: bool,
}

impl AuthorC {
    fn name(&self) -> String {
        format!("{} {}", self.given, self.surname)
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Layout {
    Grouped,
    PerZone,
}

struct Front {
    journal_full: &'static str,
    journal_abbr: &'static str,
    bib_style: u8,
    volume: String,
    issue: String,
    first_page: u32,
    year: String,
    doi: Option<String>,
    article_type: Option<&'static str>,
    title: String,
    authors: Vec<AuthorC>,
    affiliations: Vec<ParsedAffiliation>,
    markers: bool,
    emails: Vec<String>,
    layout: Layout,
    abstract_inline: bool,
    abstract_text: String,
    keywords: Vec<String>,
    keyword_label: &'static str,
    dates: String,
}

struct SectionC {
    level: u8,
    title: String,
    paragraphs: Vec<String>,
    children: Vec<SectionC>,
}

struct Content {
    front: Option<Front>,
    sections: Vec<SectionC>,
    acknowledgment: Option<String>,
    references: Vec<ParsedReference>,
    ref_style: ReferenceStyle,
}

fn chars_per_line(width: f64, size: f64) -> usize {
    (width / (0.52 * size)) as usize
}

fn email_for(a: &AuthorC, domain: &str) -> String {
    let sn: String = a.surname.chars().filter(|c| c.is_alphabetic()).collect::<String>().to_lowercase();
    let ini: String = a.given.chars().filter(|c| c.is_uppercase()).collect::<String>().to_lowercase();
    format!("{sn}{ini}@{domain}")
}

fn make_front(rng: &mut ChaCha8Rng, spec: &SynthSpec) -> Front {
    let (journal_full, journal_abbr) = content::journal(rng);
    let layout = match spec.author_layout {
        AuthorLayoutChoice::Grouped => Layout::Grouped,
        AuthorLayoutChoice::PerZone => Layout::PerZone,
        AuthorLayoutChoice::Random => {
            if rng.gen_bool(0.3) {
                Layout::PerZone
            } else {
                Layout::Grouped
            }
        }
    };
    let n_authors = match layout {
        Layout::PerZone => rng.gen_range(2..=3),
        Layout::Grouped => rng.gen_range(1..=4),
    };
    let mut authors: Vec<AuthorC> = (0..n_authors)
        .map(|_| {
            let mut given = content::given(rng);
            if rng.gen_bool(0.5) {
                given.push_str(&format!(" {}.", (b'A' + rng.gen_range(0..26u8)) as char));
            }
            AuthorC {
                given,
                surname: content::surname(rng),
                affs: vec![],
                email: None,
                corresponding: false,
            }
        })
        .collect();
    let mut affiliations = Vec::new();
    let mut markers = true;
    match layout {
        Layout::PerZone => {
            for (i, a) in authors.iter_mut().enumerate() {
                affiliations.push(content::affiliation(rng).1);
                a.affs = vec![i];
            }
        }
        Layout::Grouped => {
            let n_affs = rng.gen_range(1..=3.min(n_authors + 1));
            for _ in 0..n_affs {
                affiliations.push(content::affiliation(rng).1);
            }
            for (i, a) in authors.iter_mut().enumerate() {
                a.affs = vec![i % n_affs];
                if n_affs > 1 && rng.gen_bool(0.25) {
                    let other = rng.gen_range(0..n_affs);
                    if !a.affs.contains(&other) {
                        a.affs.push(other);
                        a.affs.sort_unstable();
                    }
                }
            }
            markers = n_affs > 1 || rng.gen_bool(0.5);
        }
    }
    let domain = format!("{}.edu", content::rare_word(rng));
    let mut emails = Vec::new();
    let corr = if rng.gen_bool(0.5) { 0 } else { n_authors - 1 };
    for i in 0..n_authors {
        let wanted = layout == Layout::PerZone || i == corr || rng.gen_bool(0.2);
        if wanted {
            authors[i].email = Some(emails.len());
            emails.push(email_for(&authors[i], &domain));
        }
    }
    authors[corr].corresponding = layout == Layout::Grouped;
    let year = rng.gen_range(1995..=2014).to_string();
    Front {
        journal_full,
        journal_abbr,
        bib_style: rng.gen_range(0..3),
        volume: rng.gen_range(1..=60).to_string(),
        issue: rng.gen_range(1..=12).to_string(),
        first_page: rng.gen_range(1..=900),
        doi: rng
            .gen_bool(0.4)
            .then(|| format!("10.{}/{}.{}", rng.gen_range(1000..=9999), content::rare_word(rng), rng.gen_range(10..=999))),
        dates: format!(
            "Received: {} {} {year}; Accepted: {} {} {year}",
            rng.gen_range(1..=28),
            content::month(rng),
            rng.gen_range(1..=28),
            content::month(rng)
        ),
        year,
        article_type: rng.gen_bool(0.6).then(|| content::pick(rng, content::ARTICLE_TYPES)),
        title: content::title(rng),
        authors,
        affiliations,
        markers,
        emails,
        layout,
        abstract_inline: rng.gen_bool(0.5),
        abstract_text: {
            let n = rng.gen_range(350..700);
            content::paragraph(rng, n, 0)
        },
        keywords: content::keyword_list(rng),
        keyword_label: content::pick(rng, &["Keywords:", "Key words:"]),
    }
}

fn make_sections(rng: &mut ChaCha8Rng, spec: &SynthSpec, numbered: bool, min_chars: usize) -> Vec<SectionC> {
    let paragraphs = |rng: &mut ChaCha8Rng| -> Vec<String> {
        let n = rng.gen_range(1..=3);
        let per = min_chars / n + 1;
        (0..n)
            .map(|_| {
                let len = per + rng.gen_range(0..per / 2 + 1);
                content::paragraph(rng, len, spec.references)
            })
            .collect()
    };
    let mut out = Vec::new();
    for i in 0..spec.sections {
        let mut title = content::header_title(rng, 1);
        if numbered {
            title = format!("{}. {title}", i + 1);
        }
        let mut s1 = SectionC {
            level: 1,
            title,
            paragraphs: paragraphs(rng),
            children: vec![],
        };
        if spec.max_depth >= 2 && rng.gen_bool(0.55) {
            for j in 0..rng.gen_range(1..=3) {
                let mut title = content::header_title(rng, 2);
                if numbered {
                    title = format!("{}.{} {title}", i + 1, j + 1);
                }
                let mut s2 = SectionC {
                    level: 2,
                    title,
                    paragraphs: paragraphs(rng),
                    children: vec![],
                };
                if spec.max_depth >= 3 && rng.gen_bool(0.35) {
                    for k in 0..rng.gen_range(1..=2) {
                        let mut title = content::header_title(rng, 3);
                        if numbered {
                            title = format!("{}.{}.{} {title}", i + 1, j + 1, k + 1);
                        }
                        s2.children.push(SectionC {
                            level: 3,
                            title,
                            paragraphs: paragraphs(rng),
                            children: vec![],
                        });
                    }
                }
                s1.children.push(s2);
            }
        }
        out.push(s1);
    }
    out
}

fn make_content(spec: &SynthSpec) -> Content {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let front = spec.front_matter.then(|| make_front(&mut rng, spec));
    let numbered_headers = rng.gen_bool(0.7);
    let col_w = column_width(spec);
    let min_chars = (MIN_FRAGMENT + 1) * chars_per_line(col_w, spec.fonts.body.size);
    let sections = make_sections(&mut rng, spec, numbered_headers, min_chars);
    let acknowledgment = (spec.acknowledgments && rng.gen_bool(0.6)).then(|| {
        let min = (MIN_FRAGMENT + 1) * chars_per_line(col_w, spec.fonts.abstract_text.size);
        format!("Acknowledgments. {}", content::paragraph(&mut rng, min, 0))
    });
    let ref_style = match spec.reference_style {
        ReferenceStyle::Random => *[ReferenceStyle::Bracket, ReferenceStyle::Numbered, ReferenceStyle::Hanging]
            .choose(&mut rng)
            .expect("styles"),
        s => s,
    };
    let references = (0..spec.references)
        .map(|i| {
            let marker = match ref_style {
                ReferenceStyle::Bracket => format!("[{}] ", i + 1),
                ReferenceStyle::Numbered => format!("{}. ", i + 1),
                _ => String::new(),
            };
            content::citation(&mut rng, &marker).1
        })
        .collect();
    Content {
        front,
        sections,
        acknowledgment,
        references,
        ref_style,
    }
}

fn column_width(spec: &SynthSpec) -> f64 {
    let c = spec.columns.clamp(1, 3) as f64;
    (spec.page_width - 2.0 * MARGIN - (c - 1.0) * GUTTER) / c
}

// ---------------------------------------------------------------------------
// Page assembly

struct Flow {
    columns: usize,
    col_w: f64,
    page: usize,
    col: usize,
    y: f64,
    at_top: bool,
    /// Top of the body area on page 0, below the front matter.
    first_top: f64,
    pages: Vec<Vec<Zone>>,
}

impl Flow {
    fn col_x(&self) -> f64 {
        MARGIN + self.col as f64 * (self.col_w + GUTTER)
    }

    fn next_column(&mut self) {
        self.col += 1;
        if self.col == self.columns {
            self.col = 0;
            self.page += 1;
            if self.pages.len() <= self.page {
                self.pages.push(Vec::new());
            }
        }
        self.y = if self.page == 0 { self.first_top } else { BODY_TOP };
        self.at_top = true;
    }

    /// How many of `lines` fit in the current column.
    fn fitting(&self, lines: &[TLine]) -> usize {
        let mut y = self.y + if self.at_top { 0.0 } else { ZONE_GAP };
        let mut n = 0;
        for l in lines {
            let top = if n > 0 { y + l.gap } else { y };
            if top + l.size > BODY_BOTTOM {
                break;
            }
            y = top + l.advance();
            n += 1;
        }
        n
    }

    /// Moves to the next column unless `head` and the start of `body` fit
    /// here, so that a heading zone is never stranded at a column bottom.
    fn keep_with_next(&mut self, head: &[TLine], body: &[TLine]) {
        let want = head.len() + body.len().min(MIN_FRAGMENT);
        let joined: Vec<TLine> = head.iter().chain(body).take(want).cloned().collect();
        if !self.at_top && self.fitting(&joined) < want {
            self.next_column();
        }
    }

    fn place(&mut self, lines: &[TLine], category: CategoryLabel, label: Option<ZoneLabel>) {
        let mut i = 0;
        while i < lines.len() {
            let rest = &lines[i..];
            let fit = self.fitting(rest);
            let n = rest.len();
            let take = if fit >= n {
                n
            } else if self.at_top && (fit < MIN_FRAGMENT || n < 2 * MIN_FRAGMENT) {
                fit.max(1)
            } else if fit >= MIN_FRAGMENT && n >= 2 * MIN_FRAGMENT {
                fit.min(n - MIN_FRAGMENT)
            } else {
                0
            };
            if take == 0 {
                self.next_column();
                continue;
            }
            let top = self.y + if self.at_top { 0.0 } else { ZONE_GAP };
            let (rendered, bottom) = render_block(&rest[..take], self.col_x(), top);
            self.pages[self.page].push(labeled_zone(rendered, category, label));
            self.y = bottom;
            self.at_top = false;
            i += take;
            if i < lines.len() {
                self.next_column();
            }
        }
    }
}

fn author_line_words(f: &Front, st: &Styles) -> Vec<GWord> {
    let s = st.author;
    let mut out: Vec<GWord> = Vec::new();
    let n = f.authors.len();
    for (i, a) in f.authors.iter().enumerate() {
        let mut ws = words(&a.name(), s);
        let last = ws.last_mut().expect("name has words");
        let mut marks: Vec<String> = Vec::new();
        if f.markers {
            marks.extend(a.affs.iter().map(|x| (x + 1).to_string()));
        }
        let mut sup = marks.join(",");
        if a.corresponding {
            sup.push('*');
        }
        last.extend(sup_glyphs(&sup, s));
        if i + 2 < n {
            last.push(Glyph { c: ',', style: s, sup: false });
        } else if i + 2 == n {
            if n > 2 {
                last.push(Glyph { c: ',', style: s, sup: false });
            }
            out.extend(ws);
            out.extend(words("and", s));
            continue;
        }
        out.extend(ws);
    }
    out
}

fn bib_text(f: &Front, last_page: u32) -> String {
    let p = format!("{}-{}", f.first_page, last_page);
    match f.bib_style {
        0 => format!("{} {}({}): {p}, {}", f.journal_abbr, f.volume, f.issue, f.year),
        1 => format!("{}, Vol. {}, No. {}, pp. {p}, {}", f.journal_full, f.volume, f.issue, f.year),
        _ => format!("{} ({}) {}:{p}", f.journal_full, f.year, f.volume),
    }
}

fn journal_printed(f: &Front) -> &'static str {
    if f.bib_style == 0 {
        f.journal_abbr
    } else {
        f.journal_full
    }
}

/// Places the front matter on page 0; returns the zones and the y where the
/// body may start.
fn place_front<R: Rng>(rng: &mut R, f: &Front, st: &Styles, spec: &SynthSpec, last_page: u32) -> (Vec<Zone>, f64) {
    let width = spec.page_width - 2.0 * MARGIN;
    let mut zones = Vec::new();
    let mut y = FURNITURE_TOP;
    let push = |rng: &mut R, zones: &mut Vec<Zone>, y: &mut f64, paras: Vec<Para>, label: ZoneLabel| {
        let lines = break_paras(rng, &paras, width);
        let (rendered, bottom) = render_block(&lines, MARGIN, *y);
        zones.push(labeled_zone(rendered, CategoryLabel::Metadata, Some(label)));
        *y = bottom + ZONE_GAP;
    };

    let mut bib = vec![Para::text(&bib_text(f, last_page), st.small)];
    if let Some(d) = &f.doi {
        bib.push(Para::text(&format!("doi:{d}"), st.small));
    }
    push(rng, &mut zones, &mut y, bib, ZoneLabel::BibInfo);
    if let Some(t) = f.article_type {
        push(rng, &mut zones, &mut y, vec![Para::text(t, st.type_label)], ZoneLabel::Type);
    }
    push(rng, &mut zones, &mut y, vec![Para::text(&f.title, st.title).centered()], ZoneLabel::Title);

    match f.layout {
        Layout::Grouped => {
            push(
                rng,
                &mut zones,
                &mut y,
                vec![Para::new(author_line_words(f, st), st.author.size).centered()],
                ZoneLabel::Author,
            );
            let affs: Vec<Para> = f
                .affiliations
                .iter()
                .enumerate()
                .map(|(i, a)| {
                    let mut ws = words(&a.raw, st.affiliation);
                    if f.markers {
                        let mut m: GWord = sup_glyphs(&(i + 1).to_string(), st.affiliation).collect();
                        m.extend(ws[0].iter().copied());
                        ws[0] = m;
                    }
                    Para::new(ws, st.affiliation.size).centered().gap(2.0)
                })
                .collect();
            push(rng, &mut zones, &mut y, affs, ZoneLabel::Affiliation);
            let corr: Vec<&AuthorC> = f.authors.iter().filter(|a| a.email.is_some()).collect();
            if !corr.is_empty() {
                let mut text = String::new();
                let mut ws: Vec<GWord> = Vec::new();
                let mut star: GWord = sup_glyphs("*", st.small).collect();
                star.extend(words("Corresponding", st.small)[0].iter().copied());
                ws.push(star);
                text.push_str("author. E-mail:");
                for (i, a) in corr.iter().enumerate() {
                    if i > 0 {
                        text.push(',');
                    }
                    text.push(' ');
                    text.push_str(&f.emails[a.email.unwrap()]);
                    if corr.len() > 1 {
                        text.push_str(&format!(" ({})", a.surname));
                    }
                }
                ws.extend(words(&text, st.small));
                push(rng, &mut zones, &mut y, vec![Para::new(ws, st.small.size)], ZoneLabel::Correspondence);
            }
        }
        Layout::PerZone => {
            let k = f.authors.len() as f64;
            let bw = (width - (k - 1.0) * PER_ZONE_GAP) / k;
            let mut bottom = y;
            for (i, a) in f.authors.iter().enumerate() {
                let mut paras = vec![Para::text(&a.name(), st.author).centered()];
                paras.push(Para::text(&f.affiliations[a.affs[0]].raw, st.affiliation).centered().gap(2.0));
                if let Some(e) = a.email {
                    paras.push(Para::text(&f.emails[e], st.affiliation).centered());
                }
                let lines = break_paras(rng, &paras, bw);
                let (rendered, b) = render_block(&lines, MARGIN + i as f64 * (bw + PER_ZONE_GAP), y);
                zones.push(labeled_zone(rendered, CategoryLabel::Metadata, Some(ZoneLabel::Affiliation)));
                bottom = bottom.max(b);
            }
            y = bottom + ZONE_GAP;
        }
    }
    push(rng, &mut zones, &mut y, vec![Para::text(&f.dates, st.small)], ZoneLabel::Dates);
    let abs = if f.abstract_inline {
        vec![Para::text(&format!("Abstract: {}", f.abstract_text), st.abstract_text)]
    } else {
        vec![
            Para::text("Abstract", st.abstract_text),
            Para::text(&f.abstract_text, st.abstract_text).gap(2.0),
        ]
    };
    push(rng, &mut zones, &mut y, abs, ZoneLabel::Abstract);
    let kw = format!("{} {}", f.keyword_label, f.keywords.join(", "));
    push(rng, &mut zones, &mut y, vec![Para::text(&kw, st.abstract_text)], ZoneLabel::Keywords);
    (zones, y)
}

fn flatten_sections<'a>(s: &'a [SectionC], out: &mut Vec<&'a SectionC>) {
    for x in s {
        out.push(x);
        flatten_sections(&x.children, out);
    }
}

fn caption_text<R: Rng>(rng: &mut R, n: usize) -> String {
    let kind = content::pick(rng, &["Table", "Figure", "Fig."]);
    let sep = content::pick(rng, &[".", ":"]);
    format!("{kind} {n}{sep} {}", content::sentence(rng, 0))
}

fn layout(content: &Content, spec: &SynthSpec, last_page: u32) -> (Vec<Vec<Zone>>, FontTable) {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed ^ 0x5eed_1a70);
    let mut fonts = FontTable::default();
    let st = intern_styles(&spec.fonts, &mut fonts);
    let columns = spec.columns.clamp(1, 3);
    let col_w = column_width(spec);

    let (front_zones, body_top) = match &content.front {
        Some(f) => place_front(&mut rng, f, &st, spec, last_page),
        None => (Vec::new(), BODY_TOP),
    };
    let mut flow = Flow {
        columns,
        col_w,
        page: 0,
        col: 0,
        y: body_top,
        at_top: true,
        first_top: body_top,
        pages: vec![front_zones],
    };

    let mut sections = Vec::new();
    flatten_sections(&content.sections, &mut sections);
    let mut captions = 0;
    let mut caption_page = usize::MAX;
    let section_lines: Vec<Vec<TLine>> = sections
        .iter()
        .map(|s| {
            let hs = st.headers[(s.level - 1) as usize];
            let mut paras = vec![Para::text(&s.title, hs)];
            for (pi, p) in s.paragraphs.iter().enumerate() {
                let indent = if pi == 0 { 0.0 } else { 10.0 };
                paras.push(Para::text(p, st.body).indents(indent, 0.0).gap(3.0).hyphenated());
            }
            break_paras(&mut rng, &paras, col_w)
        })
        .collect();
    for (si, lines) in section_lines.iter().enumerate() {
        if lines.len() < MIN_FRAGMENT {
            if let Some(next) = section_lines.get(si + 1) {
                flow.keep_with_next(lines, next);
            }
        }
        flow.place(lines, CategoryLabel::Body, Some(ZoneLabel::BodyContent));
        let early = si + 2 < sections.len();
        if spec.captions && early && flow.page != caption_page && rng.gen_bool(0.3) {
            captions += 1;
            let text = caption_text(&mut rng, captions);
            let lines = break_paras(&mut rng, &[Para::text(&text, st.caption)], col_w);
            flow.place(&lines, CategoryLabel::Body, Some(ZoneLabel::BodyOther));
            caption_page = flow.page;
        }
    }
    if let Some(a) = &content.acknowledgment {
        let lines = break_paras(&mut rng, &[Para::text(a, st.abstract_text).hyphenated()], col_w);
        flow.place(&lines, CategoryLabel::Other, None);
    }
    if !content.references.is_empty() {
        let head = break_paras(&mut rng, &[Para::text("References", st.headers[0])], col_w);
        let rs = st.reference;
        let paras: Vec<Para> = content
            .references
            .iter()
            .map(|r| {
                let p = Para::text(&r.raw, rs).hyphenated();
                match content.ref_style {
                    ReferenceStyle::Hanging => p.indents(0.0, 12.0).gap(2.0),
                    _ => {
                        let marker = r.raw.split_whitespace().next().unwrap_or("");
                        let w = words(marker, rs);
                        let hang = word_width(&w[0]) + space_width(rs.size);
                        p.indents(0.0, hang)
                    }
                }
            })
            .collect();
        let lines = break_paras(&mut rng, &paras, col_w);
        flow.keep_with_next(&head, &lines);
        flow.place(&head, CategoryLabel::Body, Some(ZoneLabel::BodyContent));
        flow.place(&lines, CategoryLabel::References, None);
    }

    let mut pages = flow.pages;
    while pages.len() > 1 && pages.last().is_some_and(Vec::is_empty) {
        pages.pop();
    }
    // Page furniture: running heads above the first column, page numbers
    // under the last one.
    let first_page = content.front.as_ref().map_or(1, |f| f.first_page);
    let running = content
        .front
        .as_ref()
        .map(|f| {
            let a = &f.authors[0].surname;
            if f.authors.len() > 1 {
                format!("{a} et al.")
            } else {
                a.clone()
            }
        })
        .unwrap_or_else(|| "Preprint".to_string());
    let n = pages.len();
    for (pi, zones) in pages.iter_mut().enumerate() {
        if pi > 0 || content.front.is_none() {
            let lines = break_paras(&mut rng, &[Para::text(&running, st.furniture)], col_w);
            // Single-column pages center it, so it cannot pair with a short
            // left-aligned heading further down.
            let x = if columns == 1 {
                let w: f64 = lines[0].words.iter().map(|w| word_width(w)).sum::<f64>()
                    + space_width(st.furniture.size) * (lines[0].words.len() - 1) as f64;
                (spec.page_width - w) / 2.0
            } else {
                MARGIN
            };
            let (rendered, _) = render_block(&lines, x, FURNITURE_TOP);
            zones.insert(0, labeled_zone(rendered, CategoryLabel::Other, None));
        }
        let num = (first_page as usize + pi).to_string();
        let w = word_width(&words(&num, st.furniture)[0]);
        let lines = vec![TLine {
            words: words(&num, st.furniture),
            offset: 0.0,
            size: st.furniture.size,
            gap: 0.0,
        }];
        let (rendered, _) = render_block(&lines, spec.page_width - MARGIN - w, PAGE_NUMBER_TOP);
        zones.push(labeled_zone(rendered, CategoryLabel::Other, None));
    }
    debug_assert_eq!(pages.len(), n);
    (pages, fonts)
}

fn section_nodes(s: &[SectionC]) -> Vec<SectionNode> {
    s.iter()
        .map(|x| SectionNode {
            level: x.level,
            title: x.title.clone(),
            content: x.paragraphs.join(" "),
            children: section_nodes(&x.children),
        })
        .collect()
}

fn make_record(c: &Content, pages: usize) -> DocumentRecord {
    let mut body = section_nodes(&c.sections);
    if !c.references.is_empty() {
        body.push(SectionNode {
            level: 1,
            title: "References".into(),
            content: String::new(),
            children: vec![],
        });
    }
    let front = c.front.as_ref().map_or_else(DocumentFront::default, |f| {
        let mut author_affiliation = Vec::new();
        let mut author_email = Vec::new();
        for (i, a) in f.authors.iter().enumerate() {
            author_affiliation.extend(a.affs.iter().map(|&x| (i, x)));
            author_email.extend(a.email.map(|e| (i, e)));
        }
        author_affiliation.sort_unstable();
        DocumentFront {
            title: Some(f.title.clone()),
            abstract_text: Some(f.abstract_text.clone()),
            authors: f.authors.iter().map(AuthorC::name).collect(),
            affiliations: f.affiliations.clone(),
            author_affiliation,
            emails: f.emails.clone(),
            author_email,
            keywords: f.keywords.clone(),
            journal: Some(journal_printed(f).to_string()),
            volume: Some(f.volume.clone()),
            issue: (f.bib_style != 2).then(|| f.issue.clone()),
            pages: Some((f.first_page.to_string(), (f.first_page as usize + pages - 1).to_string())),
            year: Some(f.year.clone()),
            doi: f.doi.clone(),
        }
    });
    DocumentRecord {
        front,
        body,
        back: c.references.clone(),
        warnings: vec![],
    }
}

pub fn generate_synthetic(spec: &SynthSpec) -> SynthOutput {
    let content = make_content(spec);
    let first_page = content.front.as_ref().map_or(1, |f| f.first_page);
    // The printed page range depends on the page count: lay out once to
    // count pages, then again with the final range.
    let (probe, _) = layout(&content, spec, first_page);
    let last_page = first_page + probe.len() as u32 - 1;
    let (pages, fonts) = layout(&content, spec, last_page);

    let mut shuffle = ChaCha8Rng::seed_from_u64(spec.seed ^ 0xc4a2_d0e5);
    let ground = Document {
        pages: pages
            .into_iter()
            .map(|zones| Page::new(spec.page_width, spec.page_height, zones))
            .collect(),
        fonts: fonts.clone(),
    };
    let chardump = CharDump {
        pages: ground
            .pages
            .iter()
            .map(|p| {
                let mut chars: Vec<Character> = p.chars().cloned().collect();
                chars.shuffle(&mut shuffle);
                DumpPage {
                    width: p.width,
                    height: p.height,
                    chars,
                }
            })
            .collect(),
        fonts,
    };
    let record = make_record(&content, ground.pages.len());
    SynthOutput {
        chardump,
        ground,
        record,
    }
}

/// Labeled training strings (inline markup lines) for the taggers.
pub fn markup_lines(examples: &[LabeledText]) -> String {
    examples.iter().map(|e| e.to_markup() + "\n").collect()
}
