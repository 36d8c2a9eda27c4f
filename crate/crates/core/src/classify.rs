//! Zone classification: the category classifier (metadata / references /
//! body / other) and the metadata and body role classifiers, plus dataset
//! construction and feature selection for training them.

use std::fmt;
use std::str::FromStr;

use docharvest_learn::grid::cross_validate;
use docharvest_learn::multiclass::train_multiclass;
use docharvest_learn::select::{correlation_prune, rank_by_tau, tau_scores};
use docharvest_learn::{Kernel, MulticlassOptions, SvmModel};
use serde::{Deserialize, Serialize};

use crate::dict::Dictionaries;
use crate::error::{Error, Result};
use crate::features::{FeatureContext, FeatureSchema, FEATURES};
use crate::geom::{CategoryLabel, Document, ZoneLabel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassifierTarget {
    Category,
    Metadata,
    Body,
}

impl ClassifierTarget {
    pub const ALL: [ClassifierTarget; 3] = [Self::Category, Self::Metadata, Self::Body];

    pub fn labels(&self) -> Vec<String> {
        match self {
            Self::Category => CategoryLabel::ALL.iter().map(|l| l.to_string()).collect(),
            Self::Metadata => ZoneLabel::METADATA.iter().map(|l| l.to_string()).collect(),
            Self::Body => ZoneLabel::BODY.iter().map(|l| l.to_string()).collect(),
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Category => "category",
            Self::Metadata => "metadata",
            Self::Body => "body",
        }
    }

    /// Category whose zones this classifier labels (none for the category
    /// classifier, which labels every zone).
    fn scope(&self) -> Option<CategoryLabel> {
        match self {
            Self::Category => None,
            Self::Metadata => Some(CategoryLabel::Metadata),
            Self::Body => Some(CategoryLabel::Body),
        }
    }
}

impl fmt::Display for ClassifierTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ClassifierTarget {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| Error::Config(format!("unknown classifier target {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZoneClassifier {
    pub target: ClassifierTarget,
    pub schema: FeatureSchema,
    pub model: SvmModel,
}

impl ZoneClassifier {
    /// Checks that the model, its schema and the target agree.
    pub fn validate(&self) -> Result<()> {
        self.schema.resolve()?;
        if self.model.n_features != self.schema.len() {
            return Err(Error::Schema(format!(
                "{} model expects {} features, schema has {}",
                self.target,
                self.model.n_features,
                self.schema.len()
            )));
        }
        if self.model.labels != self.target.labels() {
            return Err(Error::Schema(format!("{} model has labels {:?}", self.target, self.model.labels)));
        }
        Ok(())
    }

    /// Reads a classifier and rebuilds its schema index.
    pub fn from_json(bytes: &[u8]) -> Result<Self> {
        let mut c: ZoneClassifier = serde_json::from_slice(bytes).map_err(Error::from_json)?;
        c.schema = c.schema.resolve()?;
        c.validate()?;
        Ok(c)
    }

    pub fn to_json(&self) -> Vec<u8> {
        serde_json::to_vec(self).expect("classifier serializes")
    }

    pub fn predict(&self, full_features: &[f64]) -> &str {
        self.model.predict_label(&self.schema.project(full_features))
    }
}

/// Labels the zones in scope for the classifier's target.
pub fn classify_zones(doc: &Document, classifier: &ZoneClassifier, dict: &Dictionaries) -> Result<Document> {
    classifier.validate()?;
    let mut out = doc.clone();
    let ctx = FeatureContext::new(doc, dict);
    let scope = classifier.target.scope();
    for (pi, page) in doc.pages.iter().enumerate() {
        for (zi, zone) in page.zones.iter().enumerate() {
            if scope.is_some() && zone.category != scope {
                continue;
            }
            let label = classifier.predict(&ctx.zone_features(pi, zi));
            let z = &mut out.pages[pi].zones[zi];
            match classifier.target {
                ClassifierTarget::Category => z.category = Some(label.parse()?),
                _ => z.label = Some(label.parse()?),
            }
        }
    }
    Ok(out)
}

/// Full feature vectors with label indices into `label_names`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ZoneDataset {
    pub samples: Vec<Vec<f64>>,
    pub labels: Vec<usize>,
    pub label_names: Vec<String>,
}

impl ZoneDataset {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn project(&self, schema: &FeatureSchema) -> Vec<Vec<f64>> {
        self.samples.iter().map(|s| schema.project(s)).collect()
    }

    pub fn extend(&mut self, other: ZoneDataset) {
        self.samples.extend(other.samples);
        self.labels.extend(other.labels);
    }
}

/// Training samples from labelled documents. Category samples are computed
/// with category labels hidden, as they are when the classifier runs; role
/// samples keep the categories, which are known by then.
pub fn zone_dataset(docs: &[Document], target: ClassifierTarget, dict: &Dictionaries) -> ZoneDataset {
    let label_names = target.labels();
    let mut data = ZoneDataset {
        label_names: label_names.clone(),
        ..ZoneDataset::default()
    };
    for doc in docs {
        let view = match target {
            ClassifierTarget::Category => {
                let mut d = doc.clone();
                d.pages.iter_mut().flat_map(|p| &mut p.zones).for_each(|z| {
                    z.category = None;
                    z.label = None;
                });
                d
            }
            _ => doc.clone(),
        };
        let ctx = FeatureContext::new(&view, dict);
        for (pi, page) in doc.pages.iter().enumerate() {
            for (zi, zone) in page.zones.iter().enumerate() {
                let label = match target {
                    ClassifierTarget::Category => zone.category.map(|c| c.to_string()),
                    _ if zone.category == target.scope() => zone.label.map(|l| l.to_string()),
                    _ => None,
                };
                let Some(idx) = label.and_then(|l| label_names.iter().position(|n| *n == l)) else {
                    continue;
                };
                data.samples.push(ctx.zone_features(pi, zi));
                data.labels.push(idx);
            }
        }
    }
    data
}

pub fn train_zone_classifier(
    data: &ZoneDataset,
    target: ClassifierTarget,
    schema: FeatureSchema,
    kernel: Kernel,
    c: f64,
) -> Result<ZoneClassifier> {
    if data.is_empty() {
        return Err(Error::NoData("empty training set"));
    }
    let model = train_multiclass(&data.project(&schema), &data.labels, &data.label_names, kernel, c, &MulticlassOptions::default())?;
    Ok(ZoneClassifier { target, schema, model })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionReport {
    pub zero_variance: Vec<String>,
    /// `(dropped, correlated partner, r)`
    pub correlated: Vec<(String, String, f64)>,
    /// Surviving features by decreasing τ.
    pub ranking: Vec<(String, f64)>,
    /// Features dropped for correlation, by decreasing τ.
    pub correlated_ranking: Vec<(String, f64)>,
    /// Mean cross-validated F for the top-n features, per requested n.
    pub curve: Vec<(usize, f64)>,
}

impl SelectionReport {
    /// The `n` best survivors; when fewer survive, continues with the
    /// correlation-dropped features (never the zero-variance ones).
    pub fn top(&self, n: usize) -> Result<FeatureSchema> {
        let names: Vec<&str> =
            self.ranking.iter().chain(&self.correlated_ranking).take(n).map(|(n, _)| n.as_str()).collect();
        FeatureSchema::from_names(&names)
    }
}

/// Correlation pruning (|r| > 0.9), τ ranking, and an optional F-vs-count
/// curve from `folds`-fold cross-validation at the requested counts.
pub fn select_features(
    data: &ZoneDataset,
    curve_points: &[usize],
    kernel: Kernel,
    c: f64,
    folds: usize,
) -> Result<SelectionReport> {
    if data.is_empty() {
        return Err(Error::NoData("empty training set"));
    }
    let m = FEATURES.len();
    let columns: Vec<Vec<f64>> = (0..m).map(|j| data.samples.iter().map(|s| s[j]).collect()).collect();
    let pruned = correlation_prune(&columns, 0.9);
    let tau = tau_scores(&columns, &data.labels);
    let order = rank_by_tau(&tau, &pruned.kept);
    let name = |j: usize| FEATURES[j].0.to_string();
    let mut curve = Vec::new();
    if !curve_points.is_empty() {
        let assignment = docharvest_learn::grid::stratified_folds(&data.labels, folds, 0)?;
        let point = docharvest_learn::grid::GridPoint { kernel, c };
        for &n in curve_points {
            let cols = &order[..n.min(order.len())];
            let samples: Vec<Vec<f64>> = data.samples.iter().map(|s| cols.iter().map(|&j| s[j]).collect()).collect();
            let cm = cross_validate(&samples, &data.labels, &data.label_names, &point, &assignment, &MulticlassOptions::default())?;
            curve.push((n, cm.macro_f1()));
        }
    }
    Ok(SelectionReport {
        zero_variance: pruned.zero_variance.iter().map(|&j| name(j)).collect(),
        correlated: pruned.correlated.iter().map(|&(a, b, r)| (name(a), name(b), r)).collect(),
        ranking: order.iter().map(|&j| (name(j), tau[j])).collect(),
        correlated_ranking: rank_by_tau(&tau, &pruned.correlated.iter().map(|c| c.0).collect::<Vec<_>>())
            .into_iter()
            .map(|j| (name(j), tau[j]))
            .collect(),
        curve,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth::{generate_synthetic, SynthSpec};

    #[test]
    fn target_names_round_trip() {
        for t in ClassifierTarget::ALL {
            assert_eq!(t.as_str().parse::<ClassifierTarget>().unwrap(), t);
        }
        assert!(matches!("x".parse::<ClassifierTarget>(), Err(Error::Config(_))));
    }

    #[test]
    fn schema_mismatch_is_rejected() {
        let docs: Vec<Document> = (0..2).map(|s| generate_synthetic(&SynthSpec::with_seed(s)).ground).collect();
        let dict = Dictionaries::builtin();
        let data = zone_dataset(&docs, ClassifierTarget::Body, dict);
        let schema = FeatureSchema::from_names(&["height", "bold", "font_size"]).unwrap();
        let mut c = train_zone_classifier(&data, ClassifierTarget::Body, schema, Kernel::Linear, 1.0).unwrap();
        c.validate().unwrap();
        c.schema = FeatureSchema::from_names(&["height"]).unwrap();
        assert!(matches!(classify_zones(&docs[0], &c, dict), Err(Error::Schema(_))));
    }
}
