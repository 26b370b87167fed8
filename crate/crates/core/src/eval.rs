//! Dataset splitting, confusion matrices, and classification reports.

use crate::dataset::PairDataset;
use crate::error::{Error, Result};
use crate::rng::SplitMix64;

/// 2x2 confusion counts indexed `[true_label][predicted_label]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConfusionMatrix {
    pub counts: [[usize; 2]; 2],
}

impl ConfusionMatrix {
    pub fn new(counts: [[usize; 2]; 2]) -> Self {
        Self { counts }
    }

    pub fn total(&self) -> usize {
        self.counts.iter().flatten().sum()
    }

    pub fn support(&self, class: usize) -> usize {
        self.counts[class].iter().sum()
    }
}

/// Count predictions against labels.
pub fn confusion(preds: &[u8], labels: &[u8]) -> Result<ConfusionMatrix> {
    if preds.len() != labels.len() || preds.is_empty() {
        return Err(Error::LengthMismatch {
            left: preds.len(),
            right: labels.len(),
        });
    }
    let mut counts = [[0usize; 2]; 2];
    for (&p, &t) in preds.iter().zip(labels) {
        counts[usize::from(t.min(1))][usize::from(p.min(1))] += 1;
    }
    Ok(ConfusionMatrix { counts })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassMetrics {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub support: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AverageMetrics {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

/// Per-class precision/recall/F1/support plus accuracy and the macro and
/// support-weighted averages.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassificationReport {
    pub per_class: [ClassMetrics; 2],
    pub accuracy: f64,
    pub macro_avg: AverageMetrics,
    pub weighted_avg: AverageMetrics,
    pub total_support: usize,
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

/// Derive the full report from a confusion matrix. Zero-denominator precision
/// and recall are defined as 0.
pub fn report(cm: &ConfusionMatrix) -> Result<ClassificationReport> {
    let total = cm.total();
    if total == 0 {
        return Err(Error::EmptyInput("confusion matrix has no counts"));
    }
    let mut per_class = [ClassMetrics {
        precision: 0.0,
        recall: 0.0,
        f1: 0.0,
        support: 0,
    }; 2];
    for (c, metrics) in per_class.iter_mut().enumerate() {
        let tp = cm.counts[c][c];
        let predicted = cm.counts[0][c] + cm.counts[1][c];
        let support = cm.support(c);
        let precision = ratio(tp, predicted);
        let recall = ratio(tp, support);
        let f1 = if precision + recall > 0.0 {
            2.0 * precision * recall / (precision + recall)
        } else {
            0.0
        };
        *metrics = ClassMetrics {
            precision,
            recall,
            f1,
            support,
        };
    }
    let accuracy = (cm.counts[0][0] + cm.counts[1][1]) as f64 / total as f64;
    let macro_avg = AverageMetrics {
        precision: (per_class[0].precision + per_class[1].precision) / 2.0,
        recall: (per_class[0].recall + per_class[1].recall) / 2.0,
        f1: (per_class[0].f1 + per_class[1].f1) / 2.0,
    };
    // Weighted recall reduces algebraically to accuracy: support_c * recall_c
    // is exactly the diagonal count (and 0-support classes contribute 0), so
    // it is computed from the integer counts to keep the identity exact.
    let weighted_avg = AverageMetrics {
        precision: (per_class[0].support as f64 * per_class[0].precision
            + per_class[1].support as f64 * per_class[1].precision)
            / total as f64,
        recall: (cm.counts[0][0] + cm.counts[1][1]) as f64 / total as f64,
        f1: (per_class[0].support as f64 * per_class[0].f1
            + per_class[1].support as f64 * per_class[1].f1)
            / total as f64,
    };
    Ok(ClassificationReport {
        per_class,
        accuracy,
        macro_avg,
        weighted_avg,
        total_support: total,
    })
}

/// Render the report as the familiar fixed-width table. Metrics round to two
/// decimals; the accuracy row shows only the f1-score column and the total
/// support.
pub fn format_report(r: &ClassificationReport) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "{:>13}{:>10}{:>10}{:>10}{:>10}\n\n",
        "", "precision", "recall", "f1-score", "support"
    ));
    for (c, m) in r.per_class.iter().enumerate() {
        out.push_str(&format!(
            "{:>13}{:>10.2}{:>10.2}{:>10.2}{:>10}\n",
            c, m.precision, m.recall, m.f1, m.support
        ));
    }
    out.push('\n');
    out.push_str(&format!(
        "{:>13}{:>10}{:>10}{:>10.2}{:>10}\n",
        "accuracy", "", "", r.accuracy, r.total_support
    ));
    out.push_str(&format!(
        "{:>13}{:>10.2}{:>10.2}{:>10.2}{:>10}\n",
        "macro avg", r.macro_avg.precision, r.macro_avg.recall, r.macro_avg.f1, r.total_support
    ));
    out.push_str(&format!(
        "{:>13}{:>10.2}{:>10.2}{:>10.2}{:>10}\n",
        "weighted avg",
        r.weighted_avg.precision,
        r.weighted_avg.recall,
        r.weighted_avg.f1,
        r.total_support
    ));
    out
}

/// Deterministic train/test split.
///
/// Rows are shuffled by the seed. In stratified mode each class contributes
/// floor(train_fraction * class_size) rows to the train side and the
/// remainder to test, so the partition is exact and class proportions hold
/// within rounding.
pub fn split(
    ds: &PairDataset,
    train_fraction: f64,
    seed: u64,
    stratified: bool,
) -> Result<(PairDataset, PairDataset)> {
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(Error::InvalidParams(format!(
            "train_fraction must be in (0, 1), got {train_fraction}"
        )));
    }
    if ds.rows.len() < 2 {
        return Err(Error::TooFewRows {
            need: 2,
            have: ds.rows.len(),
        });
    }
    let mut order: Vec<usize> = (0..ds.rows.len()).collect();
    let mut rng = SplitMix64::new(seed);
    rng.shuffle(&mut order);

    let mut train_idx = Vec::new();
    let mut test_idx = Vec::new();
    if stratified {
        for class in [0u8, 1u8] {
            let class_rows: Vec<usize> = order
                .iter()
                .copied()
                .filter(|&i| ds.rows[i].label == class)
                .collect();
            if class_rows.is_empty() {
                return Err(Error::TooFewRows { need: 1, have: 0 });
            }
            let n_train = (train_fraction * class_rows.len() as f64).floor() as usize;
            train_idx.extend_from_slice(&class_rows[..n_train]);
            test_idx.extend_from_slice(&class_rows[n_train..]);
        }
    } else {
        let n_train = (train_fraction * order.len() as f64).floor() as usize;
        train_idx.extend_from_slice(&order[..n_train]);
        test_idx.extend_from_slice(&order[n_train..]);
    }

    let take = |idx: &[usize]| PairDataset {
        feature_names: ds.feature_names.clone(),
        rows: idx.iter().map(|&i| ds.rows[i].clone()).collect(),
        provenance: if ds.provenance.len() == ds.rows.len() {
            idx.iter().map(|&i| ds.provenance[i].clone()).collect()
        } else {
            Vec::new()
        },
    };
    Ok((take(&train_idx), take(&test_idx)))
}
