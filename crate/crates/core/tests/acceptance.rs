//! Acceptance suite: one line per criterion, non-zero exit if any fails.

use std::panic::AssertUnwindSafe;
use std::time::Instant;

use docharvest_core::affiliation::{parse_affiliation, parse_affiliation_spans};
use docharvest_core::bib::{extract_reference_strings, reference_lines, references_zones, split_reference_lines};
use docharvest_core::body::{extract_body, HeaderConfig};
use docharvest_core::citation::{clean_reference, parse_citation, Author};
use docharvest_core::dict::Dictionaries;
use docharvest_core::eval::{
    aggregate, bonferroni, evaluate, mcnemar, prf, segmentation_scores, smith_waterman_similarity,
    wilcoxon_signed_rank, Category, MatchCounts, Prf,
};
use docharvest_core::geom::{BoundingBox, Document};
use docharvest_core::ingest::{load_chardump, store_chardump};
use docharvest_core::models::{train_default_bundle, BundleTrainingConfig, ModelBundle};
use docharvest_core::order::{order_page, resolve_reading_order, zone_distance};
use docharvest_core::pipeline::{extract, Input, PipelineOptions};
use docharvest_core::record::{emit, DocumentRecord, OutputFormat, SectionNode};
use docharvest_core::segment::{nearest_neighbors, pair, segment_page, SegmenterConfig};
use docharvest_core::synth::content::{affiliation_training_set, citation_training_set};
use docharvest_core::synth::{generate_synthetic, SynthOutput, SynthSpec};
use docharvest_core::tagger::{TaggerModel, TaggerTask};
use docharvest_learn::crf::{CrfModel, Encoded};
use docharvest_learn::kernel::Kernel;
use docharvest_learn::multiclass::{train_multiclass, MulticlassOptions};
use docharvest_learn::select::{correlation_prune, tau_scores};
use docharvest_learn::svm::{train_binary, SmoParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = (bool, String);

fn synth(seed: u64, columns: usize) -> SynthOutput {
    let mut spec = SynthSpec::with_seed(seed);
    spec.columns = columns;
    generate_synthetic(&spec)
}

// ---------------------------------------------------------------------------
// 1–2: sequence model

fn random_crf(rng: &mut ChaCha8Rng) -> (CrfModel<f64>, Encoded) {
    let labels = rng.gen_range(1..=4);
    let features = rng.gen_range(1..=5);
    let len = rng.gen_range(1..=6);
    let n = features * labels + labels * labels;
    let model = CrfModel::from_weights(
        (0..labels).map(|i| format!("y{i}")).collect(),
        (0..features).map(|i| format!("f{i}")).collect(),
        10.0,
        (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect(),
    );
    let seq = Encoded {
        features: (0..len).map(|_| (0..features).filter(|_| rng.gen_bool(0.5)).collect()).collect(),
    };
    (model, seq)
}

fn crf_inference() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut worst = 0.0f64;
    let mut viterbi_bad = 0;
    for _ in 0..200 {
        let (m, seq) = random_crf(&mut rng);
        let l = m.labels().len();
        let mut best: Option<(f64, Vec<usize>)> = None;
        let mut scores = Vec::new();
        // Odometer over all label paths, lexicographic order.
        let mut path = vec![0usize; seq.len()];
        loop {
            let s = m.score(&seq, &path);
            scores.push(s);
            if best.as_ref().is_none_or(|(b, _)| s > *b) {
                best = Some((s, path.clone()));
            }
            let mut t = seq.len();
            loop {
                if t == 0 {
                    break;
                }
                t -= 1;
                path[t] += 1;
                if path[t] < l {
                    break;
                }
                path[t] = 0;
            }
            if path.iter().all(|&y| y == 0) {
                break;
            }
        }
        let brute = scores.iter().map(|s| s.exp()).sum::<f64>().ln();
        let post = m.forward_backward(&seq);
        worst = worst.max((m.log_z(&seq) - brute).abs()).max((post.log_z_backward - brute).abs());
        if m.viterbi(&seq) != best.expect("at least one path").1 {
            viterbi_bad += 1;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    (
        worst <= 1e-8 && viterbi_bad == 0 && secs < 30.0,
        format!("200 models: max |log Z error| {worst:.1e}, Viterbi mismatches {viterbi_bad}, {secs:.2} s"),
    )
}

fn crf_gradient() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(102);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let (mut m, _) = random_crf(&mut rng);
        let (l, f) = (m.labels().len(), m.features().len());
        let data: Vec<(Encoded, Vec<usize>)> = (0..3)
            .map(|_| {
                let len = rng.gen_range(1..=6);
                (
                    Encoded {
                        features: (0..len).map(|_| (0..f).filter(|_| rng.gen_bool(0.5)).collect()).collect(),
                    },
                    (0..len).map(|_| rng.gen_range(0..l)).collect(),
                )
            })
            .collect();
        let (_, grad) = m.objective(&data);
        let w0 = m.weights().to_vec();
        let h = 1e-5;
        for k in 0..w0.len() {
            let mut w = w0.clone();
            w[k] += h;
            m.set_weights(w.clone());
            let up = m.objective(&data).0;
            w[k] -= 2.0 * h;
            m.set_weights(w);
            let down = m.objective(&data).0;
            m.set_weights(w0.clone());
            let fd = (up - down) / (2.0 * h);
            worst = worst.max((fd - grad[k]).abs() / fd.abs().max(grad[k].abs()).max(1e-3));
        }
    }
    (worst < 1e-4, format!("20 instances: max relative difference {worst:.1e}"))
}

// ---------------------------------------------------------------------------
// 3–4: classifiers and feature selection

fn svm_soundness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(103);
    let mut worst_kkt = 0.0f64;
    let mut unconverged = 0;
    for round in 0..50 {
        let n = rng.gen_range(6..40);
        let xs: Vec<Vec<f64>> = (0..n).map(|_| (0..3).map(|_| rng.gen_range(0.0..1.0)).collect()).collect();
        let mut ys: Vec<i8> = (0..n).map(|_| if rng.gen_bool(0.5) { 1 } else { -1 }).collect();
        ys[0] = 1;
        ys[1] = -1;
        let kernel = match round % 3 {
            0 => Kernel::Linear,
            1 => Kernel::Rbf { gamma: rng.gen_range(0.1..4.0) },
            _ => Kernel::Polynomial { degree: 2, gamma: 1.0, coef0: 1.0 },
        };
        let c = 2f64.powi(rng.gen_range(-2..6));
        let t = train_binary(&xs, &ys, kernel, &SmoParams::new(c)).expect("training");
        unconverged += usize::from(!t.converged);
        worst_kkt = worst_kkt.max(t.kkt_residual(&xs, &ys));
    }

    let accuracy = |xs: &[Vec<f64>], ys: &[i8], kernel| {
        let t = train_binary(xs, ys, kernel, &SmoParams::new(100.0)).expect("training");
        xs.iter().zip(ys).filter(|(x, &y)| t.machine.predict(x) == y).count() as f64 / xs.len() as f64
    };
    let mut blobs = (Vec::new(), Vec::new());
    for i in 0..100 {
        let y: i8 = if i % 2 == 0 { 1 } else { -1 };
        blobs.0.push(vec![3.0 * y as f64 + rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)]);
        blobs.1.push(y);
    }
    let blobs_acc = accuracy(&blobs.0, &blobs.1, Kernel::Linear);
    let mut xor = (Vec::new(), Vec::new());
    for i in 0..100 {
        let (sx, sy) = (if i % 2 == 0 { 1.0 } else { -1.0 }, if (i / 2) % 2 == 0 { 1.0 } else { -1.0 });
        xor.0.push(vec![sx * rng.gen_range(0.5..1.5), sy * rng.gen_range(0.5..1.5)]);
        xor.1.push(if sx * sy > 0.0 { 1 } else { -1 });
    }
    let xor_acc = accuracy(&xor.0, &xor.1, Kernel::Rbf { gamma: 1.0 });

    let labels: Vec<usize> = blobs.1.iter().map(|&y| usize::from(y == -1)).collect();
    let names = vec!["pos".to_string(), "neg".to_string()];
    let opts = MulticlassOptions {
        scale: false,
        balanced: false,
        tolerance: 1e-3,
    };
    let kernel = Kernel::Rbf { gamma: 0.5 };
    let ovo = train_multiclass(&blobs.0, &labels, &names, kernel, 4.0, &opts).expect("training");
    let binary = train_binary(&blobs.0, &blobs.1, kernel, &SmoParams::new(4.0)).expect("training");
    let differing = (0..1000)
        .filter(|_| {
            let p = vec![rng.gen_range(-5.0..5.0), rng.gen_range(-2.0..2.0)];
            let d = binary.machine.decision(&p);
            ovo.pair_decision(0, 1, &p) != Some(d) || ovo.predict(&p) != usize::from(d <= 0.0)
        })
        .count();
    (
        worst_kkt <= 1e-3 && unconverged == 0 && blobs_acc == 1.0 && xor_acc == 1.0 && differing == 0,
        format!(
            "max KKT residual {worst_kkt:.1e} ({unconverged} unconverged); blobs {:.0}%, XOR {:.0}%; one-vs-one differs on {differing}/1000",
            blobs_acc * 100.0,
            xor_acc * 100.0
        ),
    )
}

fn feature_selection() -> Outcome {
    let labels: Vec<usize> = (0..60).map(|i| i % 3).collect();
    let perfect: Vec<f64> = labels.iter().map(|&l| l as f64 * 2.5).collect();
    let independent: Vec<f64> = (0..60).map(|i| ((i / 3) % 2) as f64).collect();
    let t = tau_scores(&[perfect, independent], &labels);
    let mut rng = ChaCha8Rng::seed_from_u64(104);
    let mut bad = 0;
    for _ in 0..50 {
        let cols: Vec<Vec<f64>> = (0..4).map(|_| (0..40).map(|_| rng.gen_range(-5.0..5.0)).collect()).collect();
        let dup = rng.gen_range(0..4);
        let mut with_dup = cols.clone();
        with_dup.push(cols[dup].clone());
        let rep = correlation_prune(&with_dup, 0.9);
        let copies = rep.kept.iter().filter(|&&k| k == dup || k == 4).count();
        bad += usize::from(copies != 1);
    }
    (
        (t[0] - 1.0).abs() <= 1e-12 && t[1].abs() <= 1e-12 && bad == 0,
        format!("τ perfect {:.15}, τ independent {:.1e}; duplicated column kept ≠ once in {bad}/50", t[0], t[1]),
    )
}

// ---------------------------------------------------------------------------
// 5–7: layout

fn segmentation() -> Outcome {
    let cfg = SegmenterConfig::default();
    let (mut w, mut l, mut z, mut pages) = (0.0, 0.0, 0.0, 0usize);
    let mut seed = 0;
    while pages < 100 {
        let out = synth(seed, 1 + (seed % 3) as usize);
        for (p, g) in out.chardump.pages.iter().zip(&out.ground.pages) {
            if pages == 100 {
                break;
            }
            let one = |page| Document {
                pages: vec![page],
                fonts: out.chardump.fonts.clone(),
            };
            let test = one(segment_page(&p.chars, p.width, p.height, &cfg).page);
            let s = segmentation_scores(&one(g.clone()), &test).expect("comparable");
            w += s.words.unwrap_or(0.0);
            l += s.lines.unwrap_or(0.0);
            z += s.zones.unwrap_or(0.0);
            pages += 1;
        }
        seed += 1;
    }
    let n = pages as f64;
    let (w, l, z) = (w / n, l / n, z / n);

    let mut rng = ChaCha8Rng::seed_from_u64(105);
    let mut nn_bad = 0;
    let mut cases = 0;
    for &n in &[0usize, 1, 2, 3, 17, 100, 250, 500] {
        for grid in [false, true] {
            let boxes: Vec<BoundingBox> = (0..n)
                .map(|_| {
                    // Integer grid coordinates force many distance ties.
                    let (x, y) = if grid {
                        (rng.gen_range(0..30) as f64, rng.gen_range(0..30) as f64)
                    } else {
                        (rng.gen_range(0.0..600.0), rng.gen_range(0.0..800.0))
                    };
                    BoundingBox::new(x, y, x + 2.0, y + 2.0)
                })
                .collect();
            let k = rng.gen_range(1..=8);
            let centres: Vec<(f64, f64)> = boxes.iter().map(BoundingBox::center).collect();
            let mut oracle = Vec::new();
            for i in 0..n {
                let mut others: Vec<_> = (0..n).filter(|&j| j != i).map(|j| pair(i, j, centres[i], centres[j])).collect();
                others.sort_by(|a, b| a.distance.total_cmp(&b.distance).then(a.b.cmp(&b.b)));
                oracle.extend(others.into_iter().take(k));
            }
            cases += 1;
            nn_bad += usize::from(nearest_neighbors(&boxes, k) != oracle);
        }
    }
    (
        l >= 0.95 && w >= 0.98 && z >= 0.90 && nn_bad == 0,
        format!("100 pages: lines {l:.4}, words {w:.4}, zones {z:.4}; neighbour search differs from O(n²) in {nn_bad}/{cases}"),
    )
}

fn reading_order() -> Outcome {
    let texts = |zs: &[docharvest_core::geom::Zone]| zs.iter().map(|z| z.text()).collect::<Vec<_>>();
    let (mut body_ok, mut body_n, mut first_ok, mut first_n) = (0, 0, 0, 0);
    let mut idempotent_bad = 0;
    let mut docs = 0;
    let mut seed = 0;
    while body_n < 100 {
        let out = synth(seed, 2);
        for (i, g) in out.ground.pages.iter().enumerate() {
            let ok = texts(&g.zones) == texts(&order_page(g).zones);
            if i == 0 {
                first_n += 1;
                first_ok += usize::from(ok);
            } else if body_n < 100 {
                body_n += 1;
                body_ok += usize::from(ok);
            }
        }
        let once = resolve_reading_order(&out.ground);
        idempotent_bad += usize::from(resolve_reading_order(&once) != once);
        docs += 1;
        seed += 1;
    }
    let unit = |x: f64, y: f64| BoundingBox::new(x, y, x + 1.0, y + 1.0);
    let h = zone_distance(&unit(0.0, 0.0), &unit(2.0, 0.0));
    let v = zone_distance(&unit(0.0, 0.0), &unit(0.0, 2.0));
    (
        body_ok == 100 && idempotent_bad == 0 && (h - 1.5).abs() <= 1e-12 && (v - 0.5).abs() <= 1e-12,
        format!(
            "{body_ok}/{body_n} two-column body pages in ground order (front pages: {first_ok}/{first_n}, informational); \
             not idempotent on {idempotent_bad}/{docs} documents; zone_distance {h} and {v}"
        ),
    )
}

fn reference_splitting() -> Outcome {
    let (mut exact, mut conserved) = (0, 0);
    for seed in 0..100u64 {
        let out = synth(seed, 1 + (seed % 3) as usize);
        let doc = resolve_reading_order(&out.ground);
        let zones = references_zones(&doc);
        let lines = reference_lines(&zones);
        let flat: Vec<usize> = split_reference_lines(&lines, &zones).into_iter().flatten().collect();
        conserved += usize::from(flat == (0..lines.len()).collect::<Vec<_>>());
        let want: Vec<String> = out.record.back.iter().map(|r| r.raw.clone()).collect();
        exact += usize::from(extract_reference_strings(&zones) == want);
    }
    (
        exact >= 95 && conserved == 100,
        format!("exact partition on {exact}/100 sections; lines conserved on {conserved}/100"),
    )
}

// ---------------------------------------------------------------------------
// 8: parsers

fn parsers() -> Outcome {
    let dict = Dictionaries::builtin();
    let opts = Default::default();
    let cits = citation_training_set(7, 2000);
    let (train, test) = cits.split_at(1600);
    let examples: Vec<_> = train.iter().map(|x| x.0.clone()).collect();
    let cm = TaggerModel::train(TaggerTask::Citation, &examples, dict, &opts).expect("citation training");
    let (mut c_ok, mut c_n) = (0, 0);
    for (lt, truth) in test {
        let r = clean_reference(&parse_citation(&lt.text, &cm, dict).expect("parse"), dict);
        let fields = [
            r.authors == truth.authors,
            r.title == truth.title,
            r.source == truth.source,
            r.volume == truth.volume,
            r.issue == truth.issue,
            r.year == truth.year,
            r.pages == truth.pages,
        ];
        c_n += fields.len();
        c_ok += fields.iter().filter(|&&b| b).count();
    }

    let affs = affiliation_training_set(8, 1000);
    let (train, test) = affs.split_at(800);
    let examples: Vec<_> = train.iter().map(|x| x.0.clone()).collect();
    let am = TaggerModel::train(TaggerTask::Affiliation, &examples, dict, &opts).expect("affiliation training");
    let (mut a_ok, mut a_n, mut overlaps) = (0, 0, 0);
    let dhaka = "Centre for Biomedical Research, University of Dhaka, Dhaka-1000, Bangladesh";
    for (text, truth) in test.iter().map(|(lt, t)| (lt.text.as_str(), Some(t))).chain([(dhaka, None)]) {
        let (r, spans) = parse_affiliation_spans(text, &am, dict).expect("parse");
        let mut present: Vec<(usize, usize)> = spans.into_iter().flatten().collect();
        present.sort();
        overlaps += usize::from(present.windows(2).any(|w| w[0].1 > w[1].0) || present.iter().any(|s| s.1 > text.len()));
        if let Some(t) = truth {
            let fields = [r.institution == t.institution, r.address == t.address, r.country == t.country, r.country_iso == t.country_iso];
            a_n += fields.len();
            a_ok += fields.iter().filter(|&&b| b).count();
        }
    }

    let b = clean_reference(
        &parse_citation(
            "[1] E. Braunwald, Shattuck lecture: cardiovascular medicine at the turn of the millennium: triumphs, \
             concerns, and opportunities, New England Journal of Medicine, vol. 337, no. 19, pp. 1360-1369, 1997.",
            &cm,
            dict,
        )
        .expect("parse"),
        dict,
    );
    let braunwald = b.authors
        == [Author {
            given: "E.".into(),
            surname: "Braunwald".into(),
        }]
        && b.source.as_deref() == Some("New England Journal of Medicine")
        && b.volume.as_deref() == Some("337")
        && b.issue.as_deref() == Some("19")
        && b.pages == Some(("1360".into(), "1369".into()))
        && b.year.as_deref() == Some("1997");
    let d = parse_affiliation(dhaka, &am, dict).expect("parse");
    let dhaka_ok = d.institution.as_deref() == Some("Centre for Biomedical Research, University of Dhaka")
        && d.address.as_deref() == Some("Dhaka-1000")
        && d.country.as_deref() == Some("Bangladesh")
        && d.country_iso.as_deref() == Some("BD");
    let (cf, af) = (c_ok as f64 / c_n as f64, a_ok as f64 / a_n as f64);
    (
        cf >= 0.95 && af >= 0.95 && overlaps == 0 && braunwald && dhaka_ok,
        format!(
            "citation fields {:.2}%, affiliation fields {:.2}% on held-out 20%; overlapping spans {overlaps}; \
             Braunwald {}, Dhaka {}",
            cf * 100.0,
            af * 100.0,
            if braunwald { "ok" } else { "WRONG" },
            if dhaka_ok { "ok" } else { "WRONG" }
        ),
    )
}

// ---------------------------------------------------------------------------
// 9: headers

fn headers() -> Outcome {
    let dict = Dictionaries::builtin();
    let mut fs = Vec::new();
    let mut three_level = 0;
    for seed in 0..50u64 {
        let out = synth(seed, 1 + (seed % 3) as usize);
        let doc = resolve_reading_order(&out.ground);
        let got = extract_body(&doc, None, dict, &HeaderConfig::default()).expect("body");
        let titled = |n: &[SectionNode]| -> Vec<(u8, String)> {
            SectionNode::flatten(n).into_iter().filter(|p| !p.1.is_empty()).collect()
        };
        let (g, t) = (titled(&got), titled(&out.record.body));
        three_level += usize::from(t.iter().any(|p| p.0 == 3));
        let m = g.iter().filter(|p| t.contains(p)).count();
        fs.push(Prf::from_counts(MatchCounts {
            extracted: g.len(),
            truth: t.len(),
            matched: m,
        }));
    }
    let f = aggregate(&fs).f.unwrap_or(0.0);
    let worst = fs.iter().filter_map(|p| p.f).fold(1.0, f64::min);
    (f >= 0.9, format!("mean (level, title) F {f:.4} on 50 documents ({three_level} with level 3), worst {worst:.3}"))
}

// ---------------------------------------------------------------------------
// 10: evaluation math

/// Best global alignment score over every pair of substrings; empty
/// substrings score 0, so this is the local alignment optimum.
fn local_alignment_oracle(a: &[u8], b: &[u8]) -> i64 {
    let global = |x: &[u8], y: &[u8]| -> i64 {
        let mut d = vec![vec![0i64; y.len() + 1]; x.len() + 1];
        for i in 0..=x.len() {
            for j in 0..=y.len() {
                d[i][j] = match (i, j) {
                    (0, _) => -(j as i64),
                    (_, 0) => -(i as i64),
                    _ => (d[i - 1][j - 1] + if x[i - 1] == y[j - 1] { 1 } else { -1 })
                        .max(d[i - 1][j] - 1)
                        .max(d[i][j - 1] - 1),
                };
            }
        }
        d[x.len()][y.len()]
    };
    let mut best = 0;
    for i in 0..=a.len() {
        for j in i..=a.len() {
            for k in 0..=b.len() {
                for l in k..=b.len() {
                    best = best.max(global(&a[i..j], &b[k..l]));
                }
            }
        }
    }
    best
}

fn evaluation_math() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(110);
    let mut sw_bad = 0;
    for _ in 0..100 {
        let mut s = || -> Vec<u8> { (0..rng.gen_range(1..=7)).map(|_| b"abc"[rng.gen_range(0..3)]).collect() };
        let (a, b) = (s(), s());
        let want = 2.0 * local_alignment_oracle(&a, &b) as f64 / (a.len() + b.len()) as f64;
        sw_bad += usize::from((smith_waterman_similarity(&a, &b) - want).abs() > 1e-12);
        sw_bad += usize::from(smith_waterman_similarity(&a, &a) != 1.0);
    }

    let with_title = |t: Option<&str>| {
        let mut r = DocumentRecord::default();
        r.front.title = t.map(str::to_string);
        r
    };
    let p = |e: Option<&str>, t: Option<&str>| prf(&with_title(e), &with_title(t), Category::Title);
    let table = [
        (p(None, None), (None, None, None)),
        (p(None, Some("A title")), (None, Some(0.0), Some(0.0))),
        (p(Some("A title"), None), (Some(0.0), None, Some(0.0))),
        (p(Some("A title"), Some("Other words entirely")), (Some(0.0), Some(0.0), Some(0.0))),
        (p(Some("a TITLE!"), Some("A title")), (Some(1.0), Some(1.0), Some(1.0))),
    ];
    let table_ok = table.iter().all(|(got, want)| (got.precision, got.recall, got.f) == *want)
        && aggregate(&[table[0].0, table[4].0]).f == Some(1.0);

    let mc = mcnemar(5, 5).statistic;
    let wx = wilcoxon_signed_rank(&(1..=10).map(|i| i as f64).collect::<Vec<_>>()).p_value;
    let bf = bonferroni(0.05, 20);
    (
        sw_bad == 0 && table_ok && (mc - 0.1).abs() <= 1e-12 && (wx - 2.0 / 1024.0).abs() <= 1e-12 && (bf - 0.0025).abs() <= 1e-15,
        format!(
            "Smith–Waterman mismatches {sw_bad}/200; null-case table {}; McNemar(5,5) {mc}; Wilcoxon n=10 p {wx} (2/1024 = {}); Bonferroni {bf}",
            if table_ok { "exact" } else { "WRONG" },
            2.0 / 1024.0
        ),
    )
}

// ---------------------------------------------------------------------------
// 11: end to end

fn end_to_end() -> Outcome {
    let dir = tempfile::tempdir().expect("tempdir");
    let bundle = train_default_bundle(&BundleTrainingConfig::default()).expect("bundle training");
    bundle.save(dir.path()).expect("save");
    let bundle = ModelBundle::load(dir.path()).expect("load");
    let opts = PipelineOptions::default();
    let mut pairs = Vec::new();
    let mut unstable = 0;
    for seed in 0..25u64 {
        let out = synth(seed, 1 + (seed % 3) as usize);
        let input = Input::Chars(load_chardump(&store_chardump(&out.chardump)).expect("chardump"));
        let run = || extract(&input, &bundle, &opts).expect("extract");
        let rec = run();
        let again = run();
        for f in [OutputFormat::RecordJson, OutputFormat::JatsXml, OutputFormat::BibtexRefs] {
            unstable += usize::from(emit(&rec, f) != emit(&again, f));
        }
        pairs.push((rec, out.record));
    }
    let report = evaluate(&pairs);
    let cats = [Category::Title, Category::Authors, Category::References, Category::SectionTitles];
    let fs: Vec<(Category, f64)> = cats
        .iter()
        .map(|&c| (c, report.score(c).and_then(|s| s.f).unwrap_or(0.0)))
        .collect();
    (
        fs.iter().all(|(_, f)| *f >= 0.9) && unstable == 0,
        format!(
            "25 documents: {}; non-identical reruns {unstable}/75",
            fs.iter().map(|(c, f)| format!("{c} F {f:.4}")).collect::<Vec<_>>().join(", ")
        ),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("crf inference vs enumeration", crf_inference),
        ("crf gradient vs finite differences", crf_gradient),
        ("svm soundness", svm_soundness),
        ("feature selection", feature_selection),
        ("page segmentation", segmentation),
        ("reading order", reading_order),
        ("reference splitting", reference_splitting),
        ("citation and affiliation parsers", parsers),
        ("header hierarchy", headers),
        ("evaluation math", evaluation_math),
        ("end-to-end extraction", end_to_end),
    ];
    let start = Instant::now();
    let results: Vec<Outcome> = std::thread::scope(|s| {
        let handles: Vec<_> = criteria
            .iter()
            .map(|&(_, f)| s.spawn(move || std::panic::catch_unwind(AssertUnwindSafe(f))))
            .collect();
        handles
            .into_iter()
            .map(|h| match h.join().expect("thread") {
                Ok(r) => r,
                Err(e) => {
                    let msg = e
                        .downcast_ref::<String>()
                        .cloned()
                        .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                        .unwrap_or_default();
                    (false, format!("panicked: {msg}"))
                }
            })
            .collect()
    });
    let mut failed = 0;
    for (i, ((name, _), (ok, detail))) in criteria.iter().zip(&results).enumerate() {
        println!("{} {:>2} {name}: {detail}", if *ok { "PASS" } else { "FAIL" }, i + 1);
        failed += usize::from(!ok);
    }
    println!("{} of {} criteria passed in {:.1} s", criteria.len() - failed, criteria.len(), start.elapsed().as_secs_f64());
    if failed > 0 {
        std::process::exit(1);
    }
}
