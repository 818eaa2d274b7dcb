//! Classification metrics computed from a confusion matrix.
//!
//! Per-class and averaged values are evaluated exactly as fractions and only
//! converted to `f64` at the end, so identities such as
//! `weighted recall == accuracy` hold bit for bit.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq)]
pub struct ClassMetrics {
    pub label: String,
    pub support: u64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Averages {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EvalReport {
    pub labels: Vec<String>,
    /// `confusion[true][predicted]`.
    pub confusion: Vec<Vec<u64>>,
    pub accuracy: f64,
    pub per_class: Vec<ClassMetrics>,
    /// Averaged with class support as weights.
    pub weighted: Averages,
    /// Unweighted mean over all labels.
    pub macro_avg: Averages,
}

fn ratio(num: u64, den: u64) -> Rational {
    if den == 0 {
        Rational::zero()
    } else {
        Rational::new(num, den).expect("nonzero denominator")
    }
}

impl EvalReport {
    pub fn from_confusion(labels: Vec<String>, confusion: Vec<Vec<u64>>) -> Result<Self> {
        let k = labels.len();
        if k == 0 || confusion.len() != k || confusion.iter().any(|row| row.len() != k) {
            return Err(Error::InvalidArgument(format!("confusion matrix must be {k}x{k} and non-empty")));
        }
        let total: u64 = confusion.iter().flatten().sum();
        if total == 0 {
            return Err(Error::InvalidArgument("confusion matrix has no samples".into()));
        }
        let correct: u64 = (0..k).map(|i| confusion[i][i]).sum();

        let mut per_class = Vec::with_capacity(k);
        let zero = Rational::zero();
        let (mut wp, mut wr, mut wf) = (zero.clone(), zero.clone(), zero.clone());
        let (mut mp, mut mr, mut mf) = (zero.clone(), zero.clone(), zero);
        for (i, label) in labels.iter().enumerate() {
            let tp = confusion[i][i];
            let support: u64 = confusion[i].iter().sum();
            let predicted: u64 = confusion.iter().map(|row| row[i]).sum();
            let precision = ratio(tp, predicted);
            let recall = ratio(tp, support);
            // 2PR/(P+R) = 2tp / (predicted + support)
            let f1 = ratio(2 * tp, predicted + support);
            let weight = Rational::from_integer(support);
            wp = &wp + &(&weight * &precision);
            wr = &wr + &(&weight * &recall);
            wf = &wf + &(&weight * &f1);
            mp = &mp + &precision;
            mr = &mr + &recall;
            mf = &mf + &f1;
            per_class.push(ClassMetrics {
                label: label.clone(),
                support,
                precision: precision.to_f64(),
                recall: recall.to_f64(),
                f1: f1.to_f64(),
            });
        }
        let n = ratio(1, total);
        let kk = ratio(1, k as u64);
        Ok(Self {
            labels,
            confusion,
            accuracy: ratio(correct, total).to_f64(),
            per_class,
            weighted: Averages { precision: (&wp * &n).to_f64(), recall: (&wr * &n).to_f64(), f1: (&wf * &n).to_f64() },
            macro_avg: Averages {
                precision: (&mp * &kk).to_f64(),
                recall: (&mr * &kk).to_f64(),
                f1: (&mf * &kk).to_f64(),
            },
        })
    }

    /// Labels are the sorted union of true and predicted labels.
    pub fn from_predictions<S: AsRef<str>>(truth: &[S], predicted: &[S]) -> Result<Self> {
        if truth.len() != predicted.len() {
            return Err(Error::InvalidArgument(format!("{} labels but {} predictions", truth.len(), predicted.len())));
        }
        let mut labels: Vec<String> = truth.iter().chain(predicted).map(|s| s.as_ref().to_string()).collect();
        labels.sort();
        labels.dedup();
        let index = |s: &str| labels.binary_search_by(|l| l.as_str().cmp(s)).expect("label present");
        let mut confusion = vec![vec![0u64; labels.len()]; labels.len()];
        for (t, p) in truth.iter().zip(predicted) {
            confusion[index(t.as_ref())][index(p.as_ref())] += 1;
        }
        Self::from_confusion(labels, confusion)
    }

    pub fn total(&self) -> u64 {
        self.confusion.iter().flatten().sum()
    }

    /// `metric,average,value` rows.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("metric,average,value\n");
        let mut row = |m: &str, a: &str, v: f64| writeln!(out, "{m},{a},{v}").expect("String write");
        row("accuracy", "none", self.accuracy);
        for (avg, name) in [(&self.weighted, "weighted"), (&self.macro_avg, "macro")] {
            row("precision", name, avg.precision);
            row("recall", name, avg.recall);
            row("f1", name, avg.f1);
        }
        out
    }

    /// Confusion matrix with a `true\predicted` header row.
    pub fn confusion_csv(&self) -> String {
        let mut out = String::from("true\\predicted");
        for l in &self.labels {
            write!(out, ",{l}").expect("String write");
        }
        out.push('\n');
        for (l, row) in self.labels.iter().zip(&self.confusion) {
            out.push_str(l);
            for c in row {
                write!(out, ",{c}").expect("String write");
            }
            out.push('\n');
        }
        out
    }

    /// Human-readable table with six decimals.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let w = self.labels.iter().map(String::len).max().unwrap_or(0).max(9);
        writeln!(out, "samples   {}", self.total()).unwrap();
        writeln!(out, "accuracy  {:.6}", self.accuracy).unwrap();
        writeln!(out, "{:<10}{:>10}{:>10}{:>10}", "average", "precision", "recall", "f1").unwrap();
        for (name, a) in [("weighted", &self.weighted), ("macro", &self.macro_avg)] {
            writeln!(out, "{:<10}{:>10.6}{:>10.6}{:>10.6}", name, a.precision, a.recall, a.f1).unwrap();
        }
        writeln!(out).unwrap();
        writeln!(out, "{:<w$}  {:>8}{:>10}{:>10}{:>10}", "class", "support", "precision", "recall", "f1").unwrap();
        for c in &self.per_class {
            writeln!(out, "{:<w$}  {:>8}{:>10.6}{:>10.6}{:>10.6}", c.label, c.support, c.precision, c.recall, c.f1)
                .unwrap();
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn perfect_predictions() {
        let r = EvalReport::from_predictions(&["a", "b", "c", "a"], &["a", "b", "c", "a"]).unwrap();
        assert_eq!(r.accuracy, 1.0);
        for a in [r.weighted, r.macro_avg] {
            assert_eq!((a.precision, a.recall, a.f1), (1.0, 1.0, 1.0));
        }
    }

    #[test]
    fn degenerate_single_class_predictor() {
        let r = EvalReport::from_predictions(&["a", "a", "b", "b"], &["b", "b", "b", "b"]).unwrap();
        assert_eq!(r.accuracy, 0.5);
        assert_eq!(r.weighted.recall, r.accuracy);
        assert_eq!(r.per_class[0].precision, 0.0);
        assert_eq!(r.per_class[1].precision, 0.5);
    }

    #[test]
    fn shape_errors() {
        assert!(EvalReport::from_confusion(labels(&["a"]), vec![vec![0]]).is_err());
        assert!(EvalReport::from_confusion(labels(&["a", "b"]), vec![vec![1, 0]]).is_err());
        assert!(EvalReport::from_confusion(vec![], vec![]).is_err());
        assert!(EvalReport::from_predictions(&["a"], &["a", "b"]).is_err());
    }

    #[test]
    fn csv_and_text() {
        let r = EvalReport::from_predictions(&["a", "b"], &["a", "a"]).unwrap();
        assert_eq!(r.confusion_csv(), "true\\predicted,a,b\na,1,0\nb,1,0\n");
        let csv = r.to_csv();
        assert_eq!(csv.lines().count(), 8);
        assert!(csv.contains("accuracy,none,0.5\n"));
        assert!(r.to_text().contains("accuracy  0.500000"));
    }
}
