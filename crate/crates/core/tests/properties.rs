use std::sync::OnceLock;

use docharvest_core::affiliation::parse_affiliation_spans;
use docharvest_core::bib::{reference_lines, references_zones, split_reference_lines};
use docharvest_core::dict::Dictionaries;
use docharvest_core::eval::{cosine_similarity, smith_waterman_similarity};
use docharvest_core::ingest::{load_chardump, store_chardump};
use docharvest_core::model_io::{load_model, store_model, ModelFormat};
use docharvest_core::order::resolve_reading_order;
use docharvest_core::record::{emit, load_record, OutputFormat};
use docharvest_core::segment::{segment_page, SegmenterConfig};
use docharvest_core::synth::content::affiliation_training_set;
use docharvest_core::synth::{generate_synthetic, SynthSpec};
use docharvest_core::tagger::{LabeledText, TaggerModel, TaggerTask};
use docharvest_core::tokens::tokenize;
use proptest::prelude::*;

fn affiliation_model() -> &'static TaggerModel {
    static MODEL: OnceLock<TaggerModel> = OnceLock::new();
    MODEL.get_or_init(|| {
        let examples: Vec<LabeledText> = affiliation_training_set(21, 150).into_iter().map(|x| x.0).collect();
        TaggerModel::train(TaggerTask::Affiliation, &examples, Dictionaries::builtin(), &Default::default()).unwrap()
    })
}

fn spec(seed: u64) -> SynthSpec {
    let mut s = SynthSpec::with_seed(seed);
    s.columns = 1 + (seed % 3) as usize;
    s
}

/// Plain quadratic-table local alignment, kept separate from the library's
/// rolling-row version.
fn sw_table(a: &[char], b: &[char]) -> i64 {
    let mut h = vec![vec![0i64; b.len() + 1]; a.len() + 1];
    let mut best = 0;
    for i in 1..=a.len() {
        for j in 1..=b.len() {
            let s = if a[i - 1] == b[j - 1] { 1 } else { -1 };
            h[i][j] = 0.max(h[i - 1][j - 1] + s).max(h[i - 1][j] - 1).max(h[i][j - 1] - 1);
            best = best.max(h[i][j]);
        }
    }
    best
}

proptest! {
    #[test]
    fn tokens_tile_the_non_space_characters(s in "\\PC{0,40}") {
        let toks = tokenize(&s);
        let joined: String = toks.iter().map(|t| t.text.as_str()).collect();
        let stripped: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        prop_assert_eq!(joined, stripped);
        for w in toks.windows(2) {
            prop_assert!(w[0].end <= w[1].start);
        }
        for t in &toks {
            prop_assert_eq!(&s[t.start..t.end], t.text.as_str());
            let all = |f: fn(char) -> bool| t.text.chars().all(f);
            prop_assert!(all(char::is_alphabetic) || all(char::is_numeric) || t.text.chars().count() == 1);
        }
    }

    #[test]
    fn smith_waterman_matches_table(a in "[abc]{0,12}", b in "[abc]{0,12}") {
        let (x, y): (Vec<char>, Vec<char>) = (a.chars().collect(), b.chars().collect());
        let sim = smith_waterman_similarity(&x, &y);
        prop_assert!((0.0..=1.0).contains(&sim));
        prop_assert_eq!(sim, smith_waterman_similarity(&y, &x));
        prop_assert_eq!(smith_waterman_similarity(&x, &x), 1.0);
        if !x.is_empty() && !y.is_empty() {
            let want = 2.0 * sw_table(&x, &y) as f64 / (x.len() + y.len()) as f64;
            prop_assert!((sim - want).abs() < 1e-12);
        }
    }

    #[test]
    fn cosine_is_symmetric_and_bounded(a in "[a-d ]{0,30}", b in "[a-d ]{0,30}") {
        let c = cosine_similarity(&a, &b);
        prop_assert!((-1e-12..=1.0 + 1e-12).contains(&c));
        prop_assert!((c - cosine_similarity(&b, &a)).abs() < 1e-12);
    }

    #[test]
    fn affiliation_spans_never_overlap(s in "[A-Za-z0-9,. -]{1,60}") {
        prop_assume!(!tokenize(&s).is_empty());
        let (parsed, spans) = parse_affiliation_spans(&s, affiliation_model(), Dictionaries::builtin()).unwrap();
        let mut present: Vec<(usize, usize)> = spans.into_iter().flatten().collect();
        present.sort();
        for w in present.windows(2) {
            prop_assert!(w[0].1 <= w[1].0);
        }
        prop_assert!(present.iter().all(|&(a, b)| a < b && b <= s.len()));
        prop_assert_eq!(parsed.raw, s);
    }

    #[test]
    fn markup_round_trips(parts in prop::collection::vec(("[A-Za-z0-9]{1,8}", prop::option::of(prop::sample::select(vec!["institution", "address", "country"]))), 1..6)) {
        let segs: Vec<(String, Option<&str>)> = parts.iter().enumerate().map(|(i, (t, l))| {
            (if i == 0 { t.clone() } else { format!(" {t}") }, *l)
        }).collect();
        let lt = LabeledText::from_segments(&segs);
        let back = LabeledText::parse_markup(&lt.to_markup()).unwrap();
        prop_assert_eq!(back, lt);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn reference_lines_are_conserved(seed in 0u64..10_000) {
        let out = generate_synthetic(&spec(seed));
        let doc = resolve_reading_order(&out.ground);
        let zones = references_zones(&doc);
        let lines = reference_lines(&zones);
        let groups = split_reference_lines(&lines, &zones);
        let flat: Vec<usize> = groups.iter().flatten().copied().collect();
        prop_assert_eq!(flat, (0..lines.len()).collect::<Vec<_>>());
        prop_assert!(groups.iter().all(|g| !g.is_empty()));
    }

    #[test]
    fn reading_order_is_idempotent(seed in 0u64..10_000) {
        let out = generate_synthetic(&spec(seed));
        let once = resolve_reading_order(&out.ground);
        prop_assert_eq!(resolve_reading_order(&once), once);
    }

    #[test]
    fn segmentation_keeps_every_character(seed in 0u64..10_000) {
        let out = generate_synthetic(&spec(seed));
        for p in &out.chardump.pages {
            let seg = segment_page(&p.chars, p.width, p.height, &SegmenterConfig::default()).page;
            prop_assert_eq!(seg.chars().count(), p.chars.len());
        }
    }

    #[test]
    fn serializations_round_trip(seed in 0u64..10_000) {
        let out = generate_synthetic(&spec(seed));
        // Font ids are renumbered on load; compare characters by font name.
        let dump = load_chardump(&store_chardump(&out.chardump)).unwrap();
        prop_assert_eq!(dump.pages.len(), out.chardump.pages.len());
        for (a, b) in dump.pages.iter().zip(&out.chardump.pages) {
            prop_assert_eq!((a.width, a.height, a.chars.len()), (b.width, b.height, b.chars.len()));
            for (x, y) in a.chars.iter().zip(&b.chars) {
                prop_assert_eq!((&x.text, x.bbox), (&y.text, y.bbox));
                prop_assert_eq!(dump.fonts.name(x.font), out.chardump.fonts.name(y.font));
            }
        }
        prop_assert_eq!(&load_model(&store_model(&out.ground), ModelFormat::ModelJson).unwrap(), &out.ground);
        prop_assert_eq!(&load_record(&emit(&out.record, OutputFormat::RecordJson)).unwrap(), &out.record);
        out.record.front.validate().unwrap();
    }
}
