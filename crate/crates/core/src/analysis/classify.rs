//! Nearest-centroid classification over occupancy-grid features.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::cgr::{encode, Alphabet};
use crate::datagen::SequenceRecord;
use crate::error::{Error, Result};
use crate::raster::occupancy_grid;
use crate::rational::PrecisionBound;

use super::metrics::EvalReport;

pub const DEFAULT_RESOLUTION: u32 = 4;

/// How sequences are turned into feature vectors. The protein alphabet
/// contains A, T, G and C, so DNA and protein records share one feature
/// space.
#[derive(Clone, Debug, PartialEq)]
pub struct FeatureConfig {
    pub alphabet: Alphabet,
    pub precision: PrecisionBound,
    pub resolution: u32,
}

impl Default for FeatureConfig {
    fn default() -> Self {
        Self { alphabet: Alphabet::protein(), precision: PrecisionBound::default(), resolution: DEFAULT_RESOLUTION }
    }
}

impl FeatureConfig {
    pub fn with_resolution(resolution: u32) -> Self {
        Self { resolution, ..Self::default() }
    }

    /// `4^r`.
    pub fn dimension(&self) -> usize {
        1 << (2 * self.resolution)
    }
}

/// L1-normalized counts; an all-zero grid stays all zero.
pub fn normalize_counts(counts: &[u64]) -> Vec<f64> {
    let total: u64 = counts.iter().sum();
    if total == 0 {
        return vec![0.0; counts.len()];
    }
    counts.iter().map(|&c| c as f64 / total as f64).collect()
}

pub fn features(sequence: &str, config: &FeatureConfig) -> Result<Vec<f64>> {
    let (_, trace) = encode(sequence, &config.alphabet, &config.precision)?;
    let grid = occupancy_grid(&trace, config.resolution)?;
    Ok(normalize_counts(grid.counts()))
}

/// Features for every record, in record order.
pub fn extract_features(records: &[&SequenceRecord], config: &FeatureConfig) -> Result<Vec<Vec<f64>>> {
    records.par_iter().map(|r| features(&r.sequence, config)).collect()
}

fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

#[derive(Clone, Debug, PartialEq)]
pub struct CentroidModel {
    pub config: FeatureConfig,
    /// Keyed by class label; iteration order is the tie-break order.
    pub centroids: BTreeMap<String, Vec<f64>>,
}

impl CentroidModel {
    pub fn resolution(&self) -> u32 {
        self.config.resolution
    }

    pub fn classes(&self) -> impl Iterator<Item = &str> {
        self.centroids.keys().map(String::as_str)
    }

    pub fn has_class(&self, label: &str) -> bool {
        self.centroids.contains_key(label)
    }

    /// Errors with the first label that has no centroid.
    pub fn require_classes<'a>(&self, labels: impl IntoIterator<Item = &'a str>) -> Result<()> {
        for l in labels {
            if !self.has_class(l) {
                return Err(Error::MissingClass(l.to_string()));
            }
        }
        Ok(())
    }

    /// Nearest centroid; ties go to the lexicographically smallest label.
    pub fn predict_features(&self, feature: &[f64]) -> &str {
        let mut best: Option<(&str, f64)> = None;
        for (label, c) in &self.centroids {
            let d = squared_distance(feature, c);
            if best.is_none_or(|(_, bd)| d < bd) {
                best = Some((label, d));
            }
        }
        best.expect("model has at least one class").0
    }

    pub fn predict(&self, sequence: &str) -> Result<String> {
        Ok(self.predict_features(&features(sequence, &self.config)?).to_string())
    }

    pub fn predict_all(&self, records: &[&SequenceRecord]) -> Result<Vec<String>> {
        let feats = extract_features(records, &self.config)?;
        Ok(feats.iter().map(|f| self.predict_features(f).to_string()).collect())
    }
}

/// One centroid per class label present in `records`.
pub fn train_centroids(records: &[&SequenceRecord], config: &FeatureConfig) -> Result<CentroidModel> {
    if records.is_empty() {
        return Err(Error::InvalidArgument("training set is empty".into()));
    }
    if !(1..=15).contains(&config.resolution) {
        return Err(Error::InvalidArgument(format!("grid resolution must be in 1..=15, got {}", config.resolution)));
    }
    let feats = extract_features(records, config)?;
    let dim = config.dimension();
    let mut sums: BTreeMap<String, (Vec<f64>, usize)> = BTreeMap::new();
    for (rec, f) in records.iter().zip(&feats) {
        let (sum, n) = sums.entry(rec.class_label.clone()).or_insert_with(|| (vec![0.0; dim], 0));
        for (s, v) in sum.iter_mut().zip(f) {
            *s += v;
        }
        *n += 1;
    }
    let centroids =
        sums.into_iter().map(|(label, (sum, n))| (label, sum.into_iter().map(|s| s / n as f64).collect())).collect();
    Ok(CentroidModel { config: config.clone(), centroids })
}

/// As [`train_centroids`], but every label in `classes` must have at least
/// one training record.
pub fn train_centroids_for(
    records: &[&SequenceRecord],
    classes: &[&str],
    config: &FeatureConfig,
) -> Result<CentroidModel> {
    for c in classes {
        if !records.iter().any(|r| r.class_label == *c) {
            return Err(Error::MissingClass(c.to_string()));
        }
    }
    train_centroids(records, config)
}

/// Predicts every test record and scores the predictions. Every test label
/// must be a trained class.
pub fn evaluate(model: &CentroidModel, test: &[&SequenceRecord]) -> Result<EvalReport> {
    if test.is_empty() {
        return Err(Error::InvalidArgument("test set is empty".into()));
    }
    model.require_classes(test.iter().map(|r| r.class_label.as_str()))?;
    let predicted = model.predict_all(test)?;
    let truth: Vec<String> = test.iter().map(|r| r.class_label.clone()).collect();
    EvalReport::from_predictions(&truth, &predicted)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rec(id: &str, class: &str, seq: &str) -> SequenceRecord {
        SequenceRecord::new(id, class, seq)
    }

    #[test]
    fn dimension_is_four_to_the_r() {
        assert_eq!(FeatureConfig::default().dimension(), 256);
        let f = features("ATGCATGC", &FeatureConfig::default()).unwrap();
        assert_eq!(f.len(), 256);
        assert!((f.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn single_record_centroids() {
        let a = rec("a0", "x", "AAAATTTT");
        let b = rec("b0", "y", "GGGGCCCC");
        let config = FeatureConfig::with_resolution(3);
        let model = train_centroids(&[&a, &b], &config).unwrap();
        assert_eq!(model.centroids["x"], features(&a.sequence, &config).unwrap());
        assert_eq!(model.predict(&a.sequence).unwrap(), "x");
        assert_eq!(model.predict(&b.sequence).unwrap(), "y");

        let dup = train_centroids(&[&a, &a, &b], &config).unwrap();
        assert_eq!(dup.centroids, model.centroids);
    }

    #[test]
    fn all_a_sequence_goes_to_at_side() {
        let config = FeatureConfig::with_resolution(2);
        let at = rec("at", "dna_at_rich", "AAATAATTAAAATAAT");
        let gc = rec("gc", "dna_gc_rich", "GCGGCCGCGCCGGCGC");
        let mixed = rec("m", "prot_mixed", "MKWVYLPHEDRQNSKW");
        let model = train_centroids(&[&at, &gc, &mixed], &config).unwrap();
        let f = features("AAAAAAAA", &config).unwrap();
        let d_at = squared_distance(&f, &model.centroids["dna_at_rich"]);
        let d_gc = squared_distance(&f, &model.centroids["dna_gc_rich"]);
        assert!(d_at < d_gc);
        assert_eq!(model.predict("AAAAAAAA").unwrap(), "dna_at_rich");
    }

    #[test]
    fn tie_goes_to_smallest_label() {
        let config = FeatureConfig::with_resolution(2);
        let a = rec("1", "zeta", "AAAA");
        let b = rec("2", "alpha", "AAAA");
        let model = train_centroids(&[&a, &b], &config).unwrap();
        assert_eq!(model.predict("AAAA").unwrap(), "alpha");
    }

    #[test]
    fn missing_classes() {
        let config = FeatureConfig::with_resolution(2);
        let a = rec("1", "x", "ATAT");
        let b = rec("2", "y", "GCGC");
        assert!(matches!(
            train_centroids_for(&[&a], &["x", "y"], &config),
            Err(Error::MissingClass(c)) if c == "y"
        ));
        let model = train_centroids(&[&a], &config).unwrap();
        assert!(matches!(evaluate(&model, &[&b]), Err(Error::MissingClass(_))));
        assert!(train_centroids(&[], &config).is_err());
    }

    #[test]
    fn train_equals_test_is_perfect() {
        let config = FeatureConfig::with_resolution(3);
        let recs = [rec("1", "x", "ATATATAT"), rec("2", "y", "GCGCGCGC"), rec("3", "z", "MKVLWF")];
        let refs: Vec<_> = recs.iter().collect();
        let model = train_centroids(&refs, &config).unwrap();
        let report = evaluate(&model, &refs).unwrap();
        assert_eq!(report.accuracy, 1.0);
    }

    proptest! {
        #[test]
        fn scaling_counts_keeps_prediction(
            counts in proptest::collection::vec(0u64..50, 16),
            k in 1u64..1000,
        ) {
            prop_assume!(counts.iter().any(|&c| c > 0));
            let config = FeatureConfig::with_resolution(2);
            let recs = [rec("1", "x", "ATATTA"), rec("2", "y", "GCGGCC"), rec("3", "z", "ACGTCA")];
            let refs: Vec<_> = recs.iter().collect();
            let model = train_centroids(&refs, &config).unwrap();
            let scaled: Vec<u64> = counts.iter().map(|c| c * k).collect();
            prop_assert_eq!(
                model.predict_features(&normalize_counts(&counts)),
                model.predict_features(&normalize_counts(&scaled))
            );
        }
    }
}
