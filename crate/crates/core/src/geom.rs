//! Hierarchical geometric model: pages → zones → lines → words → characters.
//! Coordinates are points with the origin at the top-left page corner.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance used when comparing derived boxes.
pub const EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundingBox {
    pub x1: f64,
    pub y1: f64,
    pub x2: f64,
    pub y2: f64,
}

impl BoundingBox {
    pub const fn new(x1: f64, y1: f64, x2: f64, y2: f64) -> Self {
        Self { x1, y1, x2, y2 }
    }

    pub fn is_valid(&self) -> bool {
        [self.x1, self.y1, self.x2, self.y2].iter().all(|v| v.is_finite())
            && self.x1 <= self.x2
            && self.y1 <= self.y2
    }

    pub fn width(&self) -> f64 {
        self.x2 - self.x1
    }

    pub fn height(&self) -> f64 {
        self.y2 - self.y1
    }

    pub fn area(&self) -> f64 {
        self.width() * self.height()
    }

    pub fn center(&self) -> (f64, f64) {
        ((self.x1 + self.x2) / 2.0, (self.y1 + self.y2) / 2.0)
    }

    pub fn union(&self, o: &BoundingBox) -> BoundingBox {
        BoundingBox::new(
            self.x1.min(o.x1),
            self.y1.min(o.y1),
            self.x2.max(o.x2),
            self.y2.max(o.y2),
        )
    }

    /// Length of the overlap of the x-projections (negative: the gap).
    pub fn horizontal_overlap(&self, o: &BoundingBox) -> f64 {
        self.x2.min(o.x2) - self.x1.max(o.x1)
    }

    /// Length of the overlap of the y-projections (negative: the gap).
    pub fn vertical_overlap(&self, o: &BoundingBox) -> f64 {
        self.y2.min(o.y2) - self.y1.max(o.y1)
    }

    pub fn intersection_area(&self, o: &BoundingBox) -> f64 {
        self.horizontal_overlap(o).max(0.0) * self.vertical_overlap(o).max(0.0)
    }

    pub fn contains(&self, o: &BoundingBox) -> bool {
        o.x1 >= self.x1 && o.x2 <= self.x2 && o.y1 >= self.y1 && o.y2 <= self.y2
    }

    pub fn approx_eq(&self, o: &BoundingBox, tol: f64) -> bool {
        (self.x1 - o.x1).abs() <= tol
            && (self.y1 - o.y1).abs() <= tol
            && (self.x2 - o.x2).abs() <= tol
            && (self.y2 - o.y2).abs() <= tol
    }
}

/// Componentwise min/max of a non-empty set of boxes.
pub fn union_box<'a>(boxes: impl IntoIterator<Item = &'a BoundingBox>) -> Result<BoundingBox> {
    let mut it = boxes.into_iter();
    let first = *it.next().ok_or(Error::EmptyGroup)?;
    Ok(it.fold(first, |acc, b| acc.union(b)))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Character {
    pub text: String,
    pub bbox: BoundingBox,
    pub font: u32,
}

impl Character {
    pub fn new(text: impl Into<String>, bbox: BoundingBox, font: u32) -> Self {
        Self {
            text: text.into(),
            bbox,
            font,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Word {
    pub chars: Vec<Character>,
    pub bbox: BoundingBox,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Line {
    pub words: Vec<Word>,
    pub bbox: BoundingBox,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Zone {
    pub lines: Vec<Line>,
    pub bbox: BoundingBox,
    pub category: Option<CategoryLabel>,
    pub label: Option<ZoneLabel>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Page {
    pub width: f64,
    pub height: f64,
    pub zones: Vec<Zone>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Document {
    pub pages: Vec<Page>,
    pub fonts: FontTable,
}

fn derived<'a>(boxes: impl IntoIterator<Item = &'a BoundingBox>) -> BoundingBox {
    union_box(boxes).unwrap_or(BoundingBox::new(0.0, 0.0, 0.0, 0.0))
}

impl Word {
    pub fn new(chars: Vec<Character>) -> Self {
        let bbox = derived(chars.iter().map(|c| &c.bbox));
        Self { chars, bbox }
    }

    pub fn text(&self) -> String {
        self.chars.iter().map(|c| c.text.as_str()).collect()
    }

    pub fn refresh(&mut self) {
        self.bbox = derived(self.chars.iter().map(|c| &c.bbox));
    }
}

impl Line {
    pub fn new(words: Vec<Word>) -> Self {
        let bbox = derived(words.iter().map(|w| &w.bbox));
        Self { words, bbox }
    }

    /// Words joined by single spaces.
    pub fn text(&self) -> String {
        let mut s = String::new();
        for (i, w) in self.words.iter().enumerate() {
            if i > 0 {
                s.push(' ');
            }
            s.push_str(&w.text());
        }
        s
    }

    pub fn chars(&self) -> impl Iterator<Item = &Character> {
        self.words.iter().flat_map(|w| &w.chars)
    }

    /// Most frequent font id among the characters (lowest id on ties).
    pub fn dominant_font(&self) -> u32 {
        let mut counts: Vec<(u32, usize)> = Vec::new();
        for c in self.chars() {
            match counts.iter_mut().find(|(f, _)| *f == c.font) {
                Some(e) => e.1 += 1,
                None => counts.push((c.font, 1)),
            }
        }
        counts
            .into_iter()
            .max_by(|a, b| a.1.cmp(&b.1).then(b.0.cmp(&a.0)))
            .map_or(0, |(f, _)| f)
    }

    pub fn refresh(&mut self) {
        for w in &mut self.words {
            w.refresh();
        }
        self.bbox = derived(self.words.iter().map(|w| &w.bbox));
    }
}

impl Zone {
    pub fn new(lines: Vec<Line>) -> Self {
        let bbox = derived(lines.iter().map(|l| &l.bbox));
        Self {
            lines,
            bbox,
            category: None,
            label: None,
        }
    }

    /// Lines joined by newlines.
    pub fn text(&self) -> String {
        self.lines.iter().map(Line::text).collect::<Vec<_>>().join("\n")
    }

    pub fn chars(&self) -> impl Iterator<Item = &Character> {
        self.lines.iter().flat_map(Line::chars)
    }

    pub fn char_count(&self) -> usize {
        self.lines.iter().flat_map(|l| &l.words).map(|w| w.chars.len()).sum()
    }

    pub fn refresh(&mut self) {
        for l in &mut self.lines {
            l.refresh();
        }
        self.bbox = derived(self.lines.iter().map(|l| &l.bbox));
    }
}

impl Page {
    pub fn new(width: f64, height: f64, zones: Vec<Zone>) -> Self {
        Self {
            width,
            height,
            zones,
        }
    }

    pub fn chars(&self) -> impl Iterator<Item = &Character> {
        self.zones.iter().flat_map(Zone::chars)
    }
}

impl Document {
    pub fn chars(&self) -> impl Iterator<Item = &Character> {
        self.pages.iter().flat_map(Page::chars)
    }

    pub fn zones(&self) -> impl Iterator<Item = &Zone> {
        self.pages.iter().flat_map(|p| &p.zones)
    }

    /// `(page index, zone index, zone)` in document order.
    pub fn indexed_zones(&self) -> impl Iterator<Item = (usize, usize, &Zone)> {
        self.pages
            .iter()
            .enumerate()
            .flat_map(|(p, page)| page.zones.iter().enumerate().map(move |(z, zone)| (p, z, zone)))
    }

    /// Checks every structural invariant of the model.
    pub fn validate(&self) -> Result<()> {
        let bad = |path: String, what: &str| Err(Error::InvalidModel(format!("{path}: {what}")));
        for (pi, page) in self.pages.iter().enumerate() {
            if !(page.width.is_finite() && page.height.is_finite() && page.width >= 0.0 && page.height >= 0.0) {
                return bad(format!("page {pi}"), "invalid page size");
            }
            for (zi, zone) in page.zones.iter().enumerate() {
                let zp = format!("page {pi} zone {zi}");
                if zone.lines.is_empty() {
                    return bad(zp, "zone has no lines");
                }
                if let (Some(label), cat) = (zone.label, zone.category) {
                    let expected = label.category();
                    if cat.is_some_and(|c| c != expected) {
                        return bad(zp, "zone label does not match its category");
                    }
                }
                for (li, line) in zone.lines.iter().enumerate() {
                    let lp = format!("{zp} line {li}");
                    if line.words.is_empty() {
                        return bad(lp, "line has no words");
                    }
                    for (wi, word) in line.words.iter().enumerate() {
                        let wp = format!("{lp} word {wi}");
                        if word.chars.is_empty() {
                            return bad(wp, "word has no characters");
                        }
                        for c in &word.chars {
                            if c.text.is_empty() {
                                return bad(wp, "empty character text");
                            }
                            if !c.bbox.is_valid() {
                                return bad(wp, "invalid character box");
                            }
                            if c.font as usize >= self.fonts.len().max(1) && !self.fonts.is_empty() {
                                return bad(wp, "font id out of range");
                            }
                        }
                        if !word.bbox.approx_eq(&derived(word.chars.iter().map(|c| &c.bbox)), EPS) {
                            return bad(wp, "word box is not the union of its characters");
                        }
                    }
                    if !line.bbox.approx_eq(&derived(line.words.iter().map(|w| &w.bbox)), EPS) {
                        return bad(lp, "line box is not the union of its words");
                    }
                }
                if !zone.bbox.approx_eq(&derived(zone.lines.iter().map(|l| &l.bbox)), EPS) {
                    return bad(zp, "zone box is not the union of its lines");
                }
            }
        }
        Ok(())
    }
}

/// Interned fonts. Each entry is the original `"name,size"` string.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FontTable {
    names: Vec<String>,
}

impl FontTable {
    pub fn new(names: Vec<String>) -> Self {
        Self { names }
    }

    pub fn intern(&mut self, name: &str) -> u32 {
        if let Some(i) = self.names.iter().position(|n| n == name) {
            return i as u32;
        }
        self.names.push(name.to_string());
        (self.names.len() - 1) as u32
    }

    pub fn name(&self, id: u32) -> Option<&str> {
        self.names.get(id as usize).map(String::as_str)
    }

    /// Point size parsed from the part after the last comma.
    pub fn size(&self, id: u32) -> Option<f64> {
        let name = self.name(id)?;
        name.rsplit_once(',').and_then(|(_, s)| s.trim().parse().ok())
    }

    /// Family without the size suffix.
    pub fn family(&self, id: u32) -> Option<&str> {
        self.name(id).map(|n| n.rsplit_once(',').map_or(n, |(f, _)| f))
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }
}

macro_rules! label_enum {
    ($(#[$m:meta])* $name:ident { $($variant:ident => $s:literal),+ $(,)? }) => {
        $(#[$m])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
        #[serde(rename_all = "snake_case")]
        pub enum $name { $($variant),+ }

        impl $name {
            pub const ALL: &'static [$name] = &[$($name::$variant),+];

            pub fn as_str(&self) -> &'static str {
                match self { $($name::$variant => $s),+ }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }

        impl FromStr for $name {
            type Err = Error;
            fn from_str(s: &str) -> Result<Self> {
                match s {
                    $($s => Ok($name::$variant),)+
                    other => Err(Error::parse(stringify!($name), format!("unknown label {other:?}"))),
                }
            }
        }
    };
}

label_enum! {
    /// Functional region of a zone, assigned by the category classifier.
    CategoryLabel {
        Metadata => "metadata",
        References => "references",
        Body => "body",
        Other => "other",
    }
}

label_enum! {
    /// Specific role of a metadata or body zone.
    ZoneLabel {
        Title => "title",
        Author => "author",
        Affiliation => "affiliation",
        Editor => "editor",
        Correspondence => "correspondence",
        Type => "type",
        Abstract => "abstract",
        Keywords => "keywords",
        BibInfo => "bib_info",
        Dates => "dates",
        BodyContent => "body_content",
        BodyOther => "body_other",
    }
}

impl ZoneLabel {
    pub const METADATA: &'static [ZoneLabel] = &[
        ZoneLabel::Title,
        ZoneLabel::Author,
        ZoneLabel::Affiliation,
        ZoneLabel::Editor,
        ZoneLabel::Correspondence,
        ZoneLabel::Type,
        ZoneLabel::Abstract,
        ZoneLabel::Keywords,
        ZoneLabel::BibInfo,
        ZoneLabel::Dates,
    ];
    pub const BODY: &'static [ZoneLabel] = &[ZoneLabel::BodyContent, ZoneLabel::BodyOther];

    pub fn category(&self) -> CategoryLabel {
        match self {
            ZoneLabel::BodyContent | ZoneLabel::BodyOther => CategoryLabel::Body,
            _ => CategoryLabel::Metadata,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn union_examples() {
        let a = BoundingBox::new(0.0, 0.0, 1.0, 1.0);
        assert_eq!(union_box([&a]).unwrap(), a);
        let b = BoundingBox::new(2.0, 3.0, 4.0, 5.0);
        assert_eq!(union_box([&a, &b]).unwrap(), BoundingBox::new(0.0, 0.0, 4.0, 5.0));
        assert!(matches!(union_box([]), Err(Error::EmptyGroup)));
    }

    #[test]
    fn font_sizes() {
        let mut t = FontTable::default();
        let id = t.intern("Times,Bold,10.5");
        assert_eq!(t.intern("Times,Bold,10.5"), id);
        assert_eq!(t.size(id), Some(10.5));
        assert_eq!(t.family(id), Some("Times,Bold"));
    }

    #[test]
    fn labels_round_trip() {
        for l in ZoneLabel::ALL {
            assert_eq!(l.as_str().parse::<ZoneLabel>().unwrap(), *l);
        }
        assert_eq!(ZoneLabel::BibInfo.as_str(), "bib_info");
        assert_eq!(ZoneLabel::BodyOther.category(), CategoryLabel::Body);
    }

    #[test]
    fn validate_catches_bad_boxes() {
        let c = Character::new("a", BoundingBox::new(0.0, 0.0, 1.0, 1.0), 0);
        let mut zone = Zone::new(vec![Line::new(vec![Word::new(vec![c])])]);
        let mut doc = Document {
            pages: vec![Page::new(10.0, 10.0, vec![zone.clone()])],
            fonts: FontTable::new(vec!["f,10".into()]),
        };
        assert!(doc.validate().is_ok());
        zone.bbox.x2 = 3.0;
        doc.pages[0].zones[0] = zone;
        assert!(matches!(doc.validate(), Err(Error::InvalidModel(_))));
    }
}
