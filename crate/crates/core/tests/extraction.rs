use docharvest_core::bib::extract_bibliography;
use docharvest_core::body::{extract_body, HeaderConfig};
use docharvest_core::dict::Dictionaries;
use docharvest_core::error::Error;
use docharvest_core::eval::{evaluate, Category};
use docharvest_core::geom::{BoundingBox, Character, Document, Line, Page, Word, Zone};
use docharvest_core::metadata::{clean_and_assemble, detect_author_layout, extract_metadata, match_email_to_author, parse_bib_info};
use docharvest_core::model_io::{load_model, ModelFormat};
use docharvest_core::order::resolve_reading_order;
use docharvest_core::record::{emit, DocumentRecord, OutputFormat, SectionNode};
use docharvest_core::synth::{generate_synthetic, SynthSpec};

fn ground(seed: u64, columns: usize) -> (Document, DocumentRecord) {
    let mut spec = SynthSpec::with_seed(seed);
    spec.columns = columns;
    let out = generate_synthetic(&spec);
    (resolve_reading_order(&out.ground), out.record)
}

fn word(text: &str, x: f64, y: f64) -> Word {
    let chars = text
        .chars()
        .enumerate()
        .map(|(i, c)| Character::new(c.to_string(), BoundingBox::new(x + 5.0 * i as f64, y, x + 5.0 * (i + 1) as f64, y + 10.0), 0))
        .collect();
    Word::new(chars)
}

#[test]
fn bib_info_with_volume_issue_pages_year() {
    let b = parse_bib_info("Dhaka Univ. J. Pharm. Sci. 8(1): 7-10, 2009");
    assert_eq!(b.journal.as_deref(), Some("Dhaka Univ. J. Pharm. Sci."));
    assert_eq!(b.volume.as_deref(), Some("8"));
    assert_eq!(b.issue.as_deref(), Some("1"));
    assert_eq!(b.pages, Some(("7".into(), "10".into())));
    assert_eq!(b.year.as_deref(), Some("2009"));
}

#[test]
fn email_goes_to_the_author_whose_surname_it_contains() {
    let authors = vec!["Sitesh C. Bachar".to_string(), "Mohammad A. Rashid".to_string()];
    assert_eq!(match_email_to_author("rashidma@univdhaka.edu", &authors), Some(1));
    assert_eq!(match_email_to_author("office@univdhaka.edu", &authors), None);
}

#[test]
fn no_bib_info_zones_leave_fields_empty() {
    let (mut doc, _) = ground(3, 1);
    for p in &mut doc.pages {
        p.zones.retain(|z| z.label.is_none_or(|l| l.as_str() != "bib_info"));
    }
    let front = clean_and_assemble(&doc, None, Dictionaries::builtin());
    assert!(front.journal.is_none() && front.volume.is_none() && front.issue.is_none());
    front.validate().unwrap();
}

#[test]
fn metadata_from_ground_labels_matches_truth() {
    for seed in 0..6 {
        let (doc, truth) = ground(seed, 1 + (seed % 3) as usize);
        let front = extract_metadata(&doc, None, None, Dictionaries::builtin()).unwrap();
        front.validate().unwrap();
        assert_eq!(front.title, truth.front.title, "seed {seed}");
        assert_eq!(front.authors, truth.front.authors, "seed {seed}");
        assert_eq!(front.author_affiliation, truth.front.author_affiliation, "seed {seed}");
        assert_eq!(front.emails, truth.front.emails, "seed {seed}");
    }
}

#[test]
fn body_hierarchy_is_well_formed() {
    for seed in 0..6 {
        let (doc, truth) = ground(seed, 2);
        let body = extract_body(&doc, None, Dictionaries::builtin(), &HeaderConfig::default()).unwrap();
        fn check(nodes: &[SectionNode], parent: u8) {
            for n in nodes {
                assert!(n.level >= 1 && n.level <= 3);
                assert!(n.level <= parent + 1, "level {} under {parent}", n.level);
                check(&n.children, n.level);
            }
        }
        check(&body, 0);
        let titles = |n: &[SectionNode]| SectionNode::flatten(n).into_iter().filter(|p| !p.1.is_empty()).count();
        assert!(titles(&body) >= titles(&truth.body) - 1, "seed {seed}");
    }
}

#[test]
fn bibliography_without_model_keeps_raw_text() {
    let (doc, truth) = ground(5, 2);
    let refs = extract_bibliography(&doc, None, Dictionaries::builtin());
    let raw: Vec<&str> = refs.iter().map(|r| r.raw.as_str()).collect();
    let want: Vec<&str> = truth.back.iter().map(|r| r.raw.as_str()).collect();
    // Splits may differ (a reference ending in a bare DOI can absorb the
    // next one); the text itself is never lost or reordered.
    assert_eq!(raw.join(" "), want.join(" "));
    assert!(refs.iter().all(|r| r.authors.is_empty() && r.title.is_none()));
}

#[test]
fn document_without_author_zones_has_no_authors() {
    let doc = Document {
        pages: vec![Page::new(600.0, 800.0, vec![Zone::new(vec![Line::new(vec![word("Hello", 10.0, 10.0)])])])],
        ..Document::default()
    };
    assert!(matches!(detect_author_layout(&doc), Err(Error::NoAuthors)));
    let front = extract_metadata(&doc, None, None, Dictionaries::builtin()).unwrap();
    assert!(front.authors.is_empty() && front.author_affiliation.is_empty());
}

#[test]
fn malformed_model_is_rejected_with_location() {
    match load_model(b"{\"pages\": [", ModelFormat::ModelJson) {
        Err(Error::Parse { location, .. }) => assert!(location.contains("line")),
        other => panic!("expected a parse error, got {other:?}"),
    }
}

#[test]
fn evaluation_of_truth_against_itself_is_perfect() {
    let pairs: Vec<_> = (0..4).map(|s| ground(s, 2).1).map(|r| (r.clone(), r)).collect();
    let report = evaluate(&pairs);
    for c in [Category::Title, Category::Authors, Category::References, Category::SectionTitles] {
        assert_eq!(report.score(c).and_then(|s| s.f), Some(1.0), "{c}");
    }
}

#[test]
fn output_formats_carry_the_record() {
    let (_, truth) = ground(2, 1);
    let jats = String::from_utf8(emit(&truth, OutputFormat::JatsXml)).unwrap();
    roxmltree::Document::parse(&jats).expect("well-formed XML");
    let title = truth.front.title.clone().unwrap();
    assert!(jats.contains(&docharvest_core::record::xml_escape(&title)));
    let bib = String::from_utf8(emit(&truth, OutputFormat::BibtexRefs)).unwrap();
    assert_eq!(bib.matches("\n@").count() + usize::from(bib.starts_with('@')), truth.back.len());
    assert!("bibtex".parse::<OutputFormat>().is_ok());
    assert!(matches!("pdf".parse::<OutputFormat>(), Err(Error::Config(_)) | Err(Error::Parse { .. })));
}
