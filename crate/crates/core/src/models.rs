//! Model bundles: the three zone classifiers, the two sequence taggers and
//! the dictionaries, stored together in one directory.

use std::fs;
use std::path::Path;

use docharvest_learn::crf::CrfTrainOptions;
use docharvest_learn::Kernel;
use serde::{Deserialize, Serialize};

use crate::classify::{select_features, train_zone_classifier, zone_dataset, ClassifierTarget, ZoneClassifier};
use crate::dict::Dictionaries;
use crate::error::{Error, Result};
use crate::geom::Document;
use crate::order::resolve_reading_order;
use crate::synth::content::{affiliation_training_set, citation_training_set};
use crate::synth::{generate_synthetic, SynthSpec};
use crate::tagger::{TaggerModel, TaggerTask};

pub const BUNDLE_VERSION: u32 = 1;
const DICT_DIR: &str = "dictionaries";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BundleManifest {
    pub version: u32,
    /// True for bundles trained on generated documents only.
    pub synthetic: bool,
    pub description: String,
}

#[derive(Debug, Clone)]
pub struct ModelBundle {
    pub manifest: BundleManifest,
    pub category: ZoneClassifier,
    pub metadata: ZoneClassifier,
    pub body: ZoneClassifier,
    pub citation: TaggerModel,
    pub affiliation: TaggerModel,
    /// `None` means the built-in lists.
    pub dictionaries: Option<Dictionaries>,
}

fn read(dir: &Path, name: &str) -> Result<Vec<u8>> {
    fs::read(dir.join(name)).map_err(|e| Error::Model(format!("{}: {e}", dir.join(name).display())))
}

impl ModelBundle {
    pub fn dict(&self) -> &Dictionaries {
        self.dictionaries.as_ref().unwrap_or_else(|| Dictionaries::builtin())
    }

    pub fn classifier(&self, target: ClassifierTarget) -> &ZoneClassifier {
        match target {
            ClassifierTarget::Category => &self.category,
            ClassifierTarget::Metadata => &self.metadata,
            ClassifierTarget::Body => &self.body,
        }
    }

    pub fn load(dir: &Path) -> Result<Self> {
        let manifest: BundleManifest =
            serde_json::from_slice(&read(dir, "manifest.json")?).map_err(|e| Error::Model(format!("manifest: {e}")))?;
        if manifest.version != BUNDLE_VERSION {
            return Err(Error::Model(format!("bundle version {} is not supported", manifest.version)));
        }
        let classifier = |target: ClassifierTarget| -> Result<ZoneClassifier> {
            let c = ZoneClassifier::from_json(&read(dir, &format!("{target}.json"))?)
                .map_err(|e| Error::Model(format!("{target}: {e}")))?;
            if c.target != target {
                return Err(Error::Model(format!("{target}.json holds a {} classifier", c.target)));
            }
            Ok(c)
        };
        let tagger = |name: &str, task: TaggerTask| -> Result<TaggerModel> {
            let t = TaggerModel::from_json(&read(dir, name)?)?;
            if t.task != task {
                return Err(Error::Model(format!("{name} holds the wrong tagger")));
            }
            Ok(t)
        };
        let dict_dir = dir.join(DICT_DIR);
        Ok(Self {
            category: classifier(ClassifierTarget::Category)?,
            metadata: classifier(ClassifierTarget::Metadata)?,
            body: classifier(ClassifierTarget::Body)?,
            citation: tagger("citation.json", TaggerTask::Citation)?,
            affiliation: tagger("affiliation.json", TaggerTask::Affiliation)?,
            dictionaries: if dict_dir.is_dir() { Some(Dictionaries::load_dir(&dict_dir)?) } else { None },
            manifest,
        })
    }

    /// Writes the bundle. The built-in dictionaries are written out when the
    /// bundle has no custom ones, so the directory is self-contained.
    pub fn save(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir.join(DICT_DIR))?;
        fs::write(dir.join("manifest.json"), serde_json::to_vec_pretty(&self.manifest).expect("manifest serializes"))?;
        for t in ClassifierTarget::ALL {
            fs::write(dir.join(format!("{t}.json")), self.classifier(t).to_json())?;
        }
        fs::write(dir.join("citation.json"), self.citation.to_json())?;
        fs::write(dir.join("affiliation.json"), self.affiliation.to_json())?;
        for (name, content) in Dictionaries::builtin_files() {
            let p = dir.join(DICT_DIR).join(name);
            if !p.exists() {
                fs::write(p, content)?;
            }
        }
        Ok(())
    }
}

/// Kernel, C and feature count of one zone classifier.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassifierSetup {
    pub kernel: Kernel,
    pub c: f64,
    pub features: usize,
}

pub fn default_setup(target: ClassifierTarget) -> ClassifierSetup {
    match target {
        ClassifierTarget::Category => ClassifierSetup {
            kernel: Kernel::Rbf { gamma: 0.25 },
            c: 32.0,
            features: 54,
        },
        ClassifierTarget::Metadata => ClassifierSetup {
            kernel: Kernel::Polynomial { degree: 3, gamma: 1.0, coef0: 0.0 },
            c: 1.0 / 16.0,
            features: 53,
        },
        ClassifierTarget::Body => ClassifierSetup {
            kernel: Kernel::Polynomial { degree: 4, gamma: 0.125, coef0: 1.0 },
            c: 8.0,
            features: 63,
        },
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BundleTrainingConfig {
    pub seed: u64,
    pub documents: usize,
    pub citations: usize,
    pub affiliations: usize,
}

impl Default for BundleTrainingConfig {
    fn default() -> Self {
        Self {
            seed: 1000,
            documents: 40,
            citations: 600,
            affiliations: 500,
        }
    }
}

/// Ground-truth documents of the generator in reading order, cycling
/// through one to three columns.
pub fn synthetic_training_documents(seed: u64, n: usize) -> Vec<Document> {
    (0..n as u64)
        .map(|i| {
            let mut spec = SynthSpec::with_seed(seed + i);
            spec.columns = 1 + ((seed + i) % 3) as usize;
            resolve_reading_order(&generate_synthetic(&spec).ground)
        })
        .collect()
}

/// Selects features by τ and trains one zone classifier.
pub fn train_classifier(docs: &[Document], target: ClassifierTarget, setup: ClassifierSetup, dict: &Dictionaries) -> Result<ZoneClassifier> {
    let data = zone_dataset(docs, target, dict);
    let report = select_features(&data, &[], setup.kernel, setup.c, 5)?;
    train_zone_classifier(&data, target, report.top(setup.features)?, setup.kernel, setup.c)
}

/// The default bundle, trained on generated documents and strings only.
pub fn train_default_bundle(cfg: &BundleTrainingConfig) -> Result<ModelBundle> {
    let dict = Dictionaries::builtin();
    let docs = synthetic_training_documents(cfg.seed, cfg.documents);
    let classifier = |t: ClassifierTarget| train_classifier(&docs, t, default_setup(t), dict);
    let citations: Vec<_> = citation_training_set(cfg.seed, cfg.citations).into_iter().map(|x| x.0).collect();
    let affiliations: Vec<_> = affiliation_training_set(cfg.seed, cfg.affiliations).into_iter().map(|x| x.0).collect();
    let opts = CrfTrainOptions::default();
    Ok(ModelBundle {
        manifest: BundleManifest {
            version: BUNDLE_VERSION,
            synthetic: true,
            description: format!(
                "trained on synthetic data: {} generated documents, {} citations, {} affiliations (seed {})",
                cfg.documents, cfg.citations, cfg.affiliations, cfg.seed
            ),
        },
        category: classifier(ClassifierTarget::Category)?,
        metadata: classifier(ClassifierTarget::Metadata)?,
        body: classifier(ClassifierTarget::Body)?,
        citation: TaggerModel::train(TaggerTask::Citation, &citations, dict, &opts)?,
        affiliation: TaggerModel::train(TaggerTask::Affiliation, &affiliations, dict, &opts)?,
        dictionaries: None,
    })
}
