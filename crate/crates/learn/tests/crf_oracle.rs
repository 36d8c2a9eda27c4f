use docharvest_learn::crf::{CrfModel, Encoded, TrainingSequence, train_crf};
use docharvest_learn::lbfgs::LbfgsParams;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_instance(rng: &mut ChaCha8Rng) -> (CrfModel<f64>, Encoded) {
    let labels = rng.gen_range(1..=4);
    let features = rng.gen_range(1..=5);
    let len = rng.gen_range(1..=6);
    let n = features * labels + labels * labels;
    let weights = (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect();
    let model = CrfModel::from_weights(
        (0..labels).map(|i| format!("y{i}")).collect(),
        (0..features).map(|i| format!("f{i}")).collect(),
        10.0,
        weights,
    );
    let seq = Encoded {
        features: (0..len)
            .map(|_| (0..features).filter(|_| rng.gen_bool(0.5)).collect())
            .collect(),
    };
    (model, seq)
}

fn all_paths(len: usize, labels: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..labels).map(move |y| {
                    let mut q = p.clone();
                    q.push(y);
                    q
                })
            })
            .collect();
    }
    out
}

#[test]
fn forward_backward_and_viterbi_match_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..100 {
        let (m, seq) = random_instance(&mut rng);
        let l = m.labels().len();
        let paths = all_paths(seq.len(), l);
        let scores: Vec<f64> = paths.iter().map(|p| m.score(&seq, p)).collect();
        let log_z = scores.iter().map(|s| s.exp()).sum::<f64>().ln();
        let post = m.forward_backward(&seq);
        assert!((post.log_z - log_z).abs() < 1e-8);
        assert!((post.log_z - post.log_z_backward).abs() < 1e-9);

        for t in 0..seq.len() {
            let total: f64 = post.node[t].iter().sum();
            assert!((total - 1.0).abs() < 1e-9);
            for y in 0..l {
                let brute: f64 = paths
                    .iter()
                    .zip(&scores)
                    .filter(|(p, _)| p[t] == y)
                    .map(|(_, s)| (s - log_z).exp())
                    .sum();
                assert!((post.node[t][y] - brute).abs() < 1e-8);
            }
        }
        for t in 1..seq.len() {
            for a in 0..l {
                for b in 0..l {
                    let brute: f64 = paths
                        .iter()
                        .zip(&scores)
                        .filter(|(p, _)| p[t - 1] == a && p[t] == b)
                        .map(|(_, s)| (s - log_z).exp())
                        .sum();
                    assert!((post.edge[t - 1][a][b] - brute).abs() < 1e-8);
                }
            }
        }

        // First maximal path in lexicographic order = lowest-index tie rule.
        let mut best = 0;
        for i in 1..paths.len() {
            if scores[i] > scores[best] {
                best = i;
            }
        }
        assert_eq!(m.viterbi(&seq), paths[best]);
    }
}

#[test]
fn viterbi_path_beats_random_paths() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..20 {
        let (m, seq) = random_instance(&mut rng);
        let best = m.score(&seq, &m.viterbi(&seq));
        for _ in 0..1000 {
            let p: Vec<usize> = (0..seq.len()).map(|_| rng.gen_range(0..m.labels().len())).collect();
            assert!(m.score(&seq, &p) <= best + 1e-12);
        }
    }
}

#[test]
fn gradient_matches_central_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..20 {
        let (mut m, _) = random_instance(&mut rng);
        let l = m.labels().len();
        let f = m.features().len();
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
            let rel = (fd - grad[k]).abs() / fd.abs().max(grad[k].abs()).max(1e-3);
            assert!(rel < 1e-4, "weight {k}: fd {fd} vs analytic {}", grad[k]);
        }
    }
}

fn grammar(copies: usize) -> Vec<TrainingSequence> {
    let words = ["the", "cat", "sat", "on", "mat", "7", "1999"];
    let tags = ["D", "N", "V", "P", "N", "NUM", "NUM"];
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let base: Vec<TrainingSequence> = (0..30)
        .map(|_| {
            let idx: Vec<usize> = (0..rng.gen_range(2..8)).map(|_| rng.gen_range(0..words.len())).collect();
            TrainingSequence {
                features: idx.iter().map(|&i| vec![format!("w={}", words[i]), "BIAS".into()]).collect(),
                labels: idx.iter().map(|&i| tags[i].to_string()).collect(),
            }
        })
        .collect();
    base.iter().cycle().take(base.len() * copies).cloned().collect()
}

#[test]
fn duplicated_data_keeps_decoding() {
    let opts = docharvest_learn::crf::CrfTrainOptions {
        sigma2: 10.0,
        optimizer: LbfgsParams::default(),
    };
    let once = grammar(1);
    let (a, ra) = train_crf::<f64>(&once, &opts).unwrap();
    let (b, _) = train_crf::<f64>(&grammar(2), &opts).unwrap();
    assert!(ra.history.windows(2).all(|w| w[1] <= w[0]));
    for s in &once {
        assert_eq!(a.tag(&s.features), s.labels);
        assert_eq!(b.tag(&s.features), s.labels);
    }
}

#[test]
fn silent_feature_changes_nothing() {
    let data = grammar(1);
    let (m, _) = train_crf::<f64>(&data, &Default::default()).unwrap();
    for s in &data {
        let with_extra: Vec<Vec<String>> = s
            .features
            .iter()
            .map(|fs| {
                let mut fs = fs.clone();
                fs.push("never-seen".into());
                fs
            })
            .collect();
        assert_eq!(m.tag(&with_extra), m.tag(&s.features));
    }
}

#[test]
fn zero_weights_decode_to_label_zero() {
    let m = CrfModel::<f64>::new(vec!["a".into(), "b".into(), "c".into()], vec!["f".into()], 10.0);
    let seq = Encoded {
        features: vec![vec![0]; 5],
    };
    assert_eq!(m.viterbi(&seq), vec![0; 5]);
}
