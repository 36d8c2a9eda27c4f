//! The full extraction: characters → layout → zone categories → metadata,
//! body and bibliography.

use rayon::prelude::*;

use crate::bib::extract_bibliography;
use crate::body::{extract_body, HeaderConfig};
use crate::classify::classify_zones;
use crate::error::{Error, Result};
use crate::geom::Document;
use crate::ingest::{clean_characters, CharDump, CleaningConfig};
use crate::metadata::extract_metadata;
use crate::models::ModelBundle;
use crate::order::resolve_reading_order;
use crate::record::DocumentRecord;
use crate::segment::{segment_page, SegmenterConfig};

#[derive(Debug, Clone)]
pub enum Input {
    Chars(CharDump),
    /// An already segmented document; segmentation is skipped.
    Model(Document),
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PipelineOptions {
    pub cleaning: CleaningConfig,
    pub segmenter: SegmenterConfig,
    pub headers: HeaderConfig,
    pub skip_body: bool,
}

fn stage<T>(name: &'static str, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        e @ Error::Stage { .. } => e,
        e => Error::Stage { stage: name, message: e.to_string() },
    })
}

/// Cleans and segments every page.
pub fn layout(dump: &CharDump, opts: &PipelineOptions, warnings: &mut Vec<String>) -> Document {
    let cleaned = clean_characters(dump, &opts.cleaning);
    let segmented: Vec<_> = cleaned
        .pages
        .par_iter()
        .map(|p| segment_page(&p.chars, p.width, p.height, &opts.segmenter))
        .collect();
    let mut pages = Vec::with_capacity(segmented.len());
    for (i, s) in segmented.into_iter().enumerate() {
        if let Some(w) = s.warning {
            warnings.push(format!("segmentation, page {}: {w}", i + 1));
        }
        pages.push(s.page);
    }
    Document {
        pages,
        fonts: dump.fonts.clone(),
    }
}

pub fn extract(input: &Input, models: &ModelBundle, opts: &PipelineOptions) -> Result<DocumentRecord> {
    let dict = models.dict();
    let mut warnings = Vec::new();
    let doc = match input {
        Input::Chars(dump) => layout(dump, opts, &mut warnings),
        Input::Model(doc) => {
            doc.validate()?;
            doc.clone()
        }
    };
    let doc = resolve_reading_order(&doc);
    let doc = stage("category classification", classify_zones(&doc, &models.category, dict))?;
    // The three paths only share the categorized document.
    let (front, (body, back)) = rayon::join(
        || stage("metadata", extract_metadata(&doc, Some(&models.metadata), Some(&models.affiliation), dict)),
        || {
            rayon::join(
                || {
                    if opts.skip_body {
                        Ok(Vec::new())
                    } else {
                        stage("body", extract_body(&doc, Some(&models.body), dict, &opts.headers))
                    }
                },
                || extract_bibliography(&doc, Some(&models.citation), dict),
            )
        },
    );
    Ok(DocumentRecord {
        front: front?,
        body: body?,
        back,
        warnings,
    })
}
