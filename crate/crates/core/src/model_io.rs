//! model-json (read/write) and TrueViz XML (read-only).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelFormat {
    ModelJson,
    TrueVizXml,
}

#[derive(Serialize, Deserialize)]
struct JsonDoc {
    pages: Vec<JsonPage>,
    #[serde(default)]
    fonts: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct JsonPage {
    width: f64,
    height: f64,
    zones: Vec<JsonZone>,
}

#[derive(Serialize, Deserialize)]
struct JsonZone {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    category: Option<CategoryLabel>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    label: Option<ZoneLabel>,
    lines: Vec<JsonLine>,
}

#[derive(Serialize, Deserialize)]
struct JsonLine {
    words: Vec<JsonWord>,
}

#[derive(Serialize, Deserialize)]
struct JsonWord {
    chars: Vec<JsonChar>,
}

#[derive(Serialize, Deserialize)]
struct JsonChar {
    t: String,
    x1: f64,
    y1: f64,
    x2: f64,
    y2: f64,
    font: u32,
}

pub fn load_model(bytes: &[u8], format: ModelFormat) -> Result<Document> {
    let doc = match format {
        ModelFormat::ModelJson => from_json(serde_json::from_slice(bytes).map_err(Error::from_json)?),
        ModelFormat::TrueVizXml => load_trueviz(bytes)?,
    };
    doc.validate()?;
    Ok(doc)
}

pub fn store_model(doc: &Document) -> Vec<u8> {
    serde_json::to_vec(&to_json(doc)).expect("model serializes")
}

fn from_json(d: JsonDoc) -> Document {
    let pages = d
        .pages
        .into_iter()
        .map(|p| {
            let zones = p
                .zones
                .into_iter()
                .map(|z| {
                    let lines = z
                        .lines
                        .into_iter()
                        .map(|l| {
                            Line::new(
                                l.words
                                    .into_iter()
                                    .map(|w| {
                                        Word::new(
                                            w.chars
                                                .into_iter()
                                                .map(|c| {
                                                    Character::new(
                                                        c.t,
                                                        BoundingBox::new(c.x1, c.y1, c.x2, c.y2),
                                                        c.font,
                                                    )
                                                })
                                                .collect(),
                                        )
                                    })
                                    .collect(),
                            )
                        })
                        .collect();
                    let mut zone = Zone::new(lines);
                    zone.category = z.category.or(z.label.map(|l| l.category()));
                    zone.label = z.label;
                    zone
                })
                .collect();
            Page::new(p.width, p.height, zones)
        })
        .collect();
    Document {
        pages,
        fonts: FontTable::new(d.fonts),
    }
}

fn to_json(doc: &Document) -> JsonDoc {
    JsonDoc {
        pages: doc
            .pages
            .iter()
            .map(|p| JsonPage {
                width: p.width,
                height: p.height,
                zones: p
                    .zones
                    .iter()
                    .map(|z| JsonZone {
                        category: z.category,
                        label: z.label,
                        lines: z
                            .lines
                            .iter()
                            .map(|l| JsonLine {
                                words: l
                                    .words
                                    .iter()
                                    .map(|w| JsonWord {
                                        chars: w
                                            .chars
                                            .iter()
                                            .map(|c| JsonChar {
                                                t: c.text.clone(),
                                                x1: c.bbox.x1,
                                                y1: c.bbox.y1,
                                                x2: c.bbox.x2,
                                                y2: c.bbox.y2,
                                                font: c.font,
                                            })
                                            .collect(),
                                    })
                                    .collect(),
                            })
                            .collect(),
                    })
                    .collect(),
            })
            .collect(),
        fonts: doc.fonts.names().to_vec(),
    }
}

// TrueViz: <Document><Page><Zone><Line><Word><Character>, each with a
// <*Corners> element of <Vertex x= y=/> and characters carrying <GT_Text Value=>.

fn corners(node: roxmltree::Node) -> Option<BoundingBox> {
    let c = node
        .children()
        .find(|n| n.is_element() && n.tag_name().name().ends_with("Corners"))?;
    let mut b: Option<BoundingBox> = None;
    for v in c.children().filter(|n| n.has_tag_name("Vertex")) {
        let x: f64 = v.attribute("x")?.parse().ok()?;
        let y: f64 = v.attribute("y")?.parse().ok()?;
        let p = BoundingBox::new(x, y, x, y);
        b = Some(b.map_or(p, |b| b.union(&p)));
    }
    b
}

fn child_elements<'a, 'i>(node: roxmltree::Node<'a, 'i>, name: &'static str) -> impl Iterator<Item = roxmltree::Node<'a, 'i>> {
    node.children().filter(move |n| n.has_tag_name(name))
}

fn location(doc: &roxmltree::Document, node: roxmltree::Node) -> String {
    let pos = doc.text_pos_at(node.range().start);
    format!("line {} column {}", pos.row, pos.col)
}

fn zone_classification(zone: roxmltree::Node) -> (Option<CategoryLabel>, Option<ZoneLabel>) {
    let value = zone
        .descendants()
        .find(|n| n.has_tag_name("Category"))
        .and_then(|n| n.attribute("Value"))
        .map(|v| v.trim().to_ascii_lowercase().replace(' ', "_"));
    let Some(v) = value else { return (None, None) };
    if let Ok(label) = v.parse::<ZoneLabel>() {
        return (Some(label.category()), Some(label));
    }
    match v.as_str() {
        "references" => (Some(CategoryLabel::References), None),
        "metadata" => (Some(CategoryLabel::Metadata), None),
        "body" => (Some(CategoryLabel::Body), None),
        "" | "unknown" => (None, None),
        _ => (Some(CategoryLabel::Other), None),
    }
}

fn load_trueviz(bytes: &[u8]) -> Result<Document> {
    let text = std::str::from_utf8(bytes).map_err(|e| Error::parse("byte stream", e))?;
    let xml = roxmltree::Document::parse(text).map_err(|e| Error::parse(e.pos().to_string(), e))?;
    let mut fonts = FontTable::default();
    let mut pages = Vec::new();
    for page in xml.descendants().filter(|n| n.has_tag_name("Page")) {
        let mut zones = Vec::new();
        for z in child_elements(page, "Zone") {
            let mut lines = Vec::new();
            for l in child_elements(z, "Line") {
                let mut words = Vec::new();
                for w in child_elements(l, "Word") {
                    let mut chars = Vec::new();
                    for c in child_elements(w, "Character") {
                        let bbox = corners(c).ok_or_else(|| {
                            Error::parse(location(&xml, c), "character without corners")
                        })?;
                        let text = c
                            .children()
                            .find(|n| n.has_tag_name("GT_Text"))
                            .and_then(|n| n.attribute("Value"))
                            .ok_or_else(|| Error::parse(location(&xml, c), "character without GT_Text"))?;
                        let font = c
                            .children()
                            .find(|n| n.has_tag_name("Font"))
                            .and_then(|n| n.attribute("Type").or(n.attribute("Value")).or(n.attribute("Name")))
                            .unwrap_or("unknown,0");
                        chars.push(Character::new(text, bbox, fonts.intern(font)));
                    }
                    words.push(Word::new(chars));
                }
                lines.push(Line::new(words));
            }
            let mut zone = Zone::new(lines);
            (zone.category, zone.label) = zone_classification(z);
            zones.push(zone);
        }
        let extent = corners(page).or_else(|| union_box(zones.iter().map(|z| &z.bbox)).ok());
        let (w, h) = extent.map_or((0.0, 0.0), |b| (b.x2, b.y2));
        pages.push(Page::new(w, h, zones));
    }
    Ok(Document { pages, fonts })
}

#[cfg(test)]
mod tests {
    use super::*;

    const ONE_CHAR: &str = r#"{"pages":[{"width":100,"height":100,"zones":[{"lines":[{"words":[{"chars":[{"t":"a","x1":1,"y1":2,"x2":3,"y2":4,"font":0}]}]}]}]}],"fonts":["Times,10"]}"#;

    #[test]
    fn minimal_document() {
        let d = load_model(ONE_CHAR.as_bytes(), ModelFormat::ModelJson).unwrap();
        assert_eq!(d.pages.len(), 1);
        let z = &d.pages[0].zones[0];
        assert_eq!(z.lines[0].words[0].chars.len(), 1);
        assert_eq!(z.bbox, BoundingBox::new(1.0, 2.0, 3.0, 4.0));
    }

    #[test]
    fn empty_line_list_is_invalid() {
        let s = r#"{"pages":[{"width":1,"height":1,"zones":[{"lines":[]}]}],"fonts":[]}"#;
        assert!(matches!(load_model(s.as_bytes(), ModelFormat::ModelJson), Err(Error::InvalidModel(_))));
    }

    #[test]
    fn malformed_json_reports_location() {
        let err = load_model(b"{\"pages\": [", ModelFormat::ModelJson).unwrap_err();
        assert!(matches!(err, Error::Parse { .. }));
        assert!(err.to_string().contains("line 1"));
    }

    #[test]
    fn empty_document_round_trips() {
        let d = Document::default();
        let back = load_model(&store_model(&d), ModelFormat::ModelJson).unwrap();
        assert_eq!(back, d);
    }

    #[test]
    fn trueviz_import() {
        let xml = r#"<Document><Page><PageCorners><Vertex x="0" y="0"/><Vertex x="600" y="800"/></PageCorners>
<Zone><ZoneCorners><Vertex x="10" y="10"/><Vertex x="30" y="20"/></ZoneCorners>
<Classification><Category Value="TITLE"/></Classification>
<Line><Word>
<Character><CharacterCorners><Vertex x="10" y="10"/><Vertex x="20" y="20"/></CharacterCorners><GT_Text Value="H"/><Font Type="Arial,12"/></Character>
<Character><CharacterCorners><Vertex x="20" y="10"/><Vertex x="30" y="20"/></CharacterCorners><GT_Text Value="i"/></Character>
</Word></Line></Zone></Page></Document>"#;
        let d = load_model(xml.as_bytes(), ModelFormat::TrueVizXml).unwrap();
        assert_eq!(d.pages[0].width, 600.0);
        let z = &d.pages[0].zones[0];
        assert_eq!(z.label, Some(ZoneLabel::Title));
        assert_eq!(z.category, Some(CategoryLabel::Metadata));
        assert_eq!(z.text(), "Hi");
        assert_eq!(d.fonts.size(0), Some(12.0));
    }
}
