//! From-scratch random forest regressor over similarity records, used as a
//! same-author classifier via thresholding.
//!
//! Trees grow CART-style with variance-reduction splits and mean-label
//! leaves. Everything is deterministic for a fixed seed: each tree draws its
//! bootstrap and feature subsets from its own generator seeded by
//! `mix(seed, tree_index)`, so the ensemble is identical no matter how many
//! threads train it.

use std::fmt::Write as _;
use std::path::Path;

use rayon::prelude::*;

use crate::dataset::PairDataset;
use crate::error::{Error, Result};
use crate::pairwise::SimilarityRecord;
use crate::rng::{mix, SplitMix64};

#[derive(Debug, Clone, PartialEq)]
pub struct ForestParams {
    pub n_trees: usize,
    pub max_depth: usize,
    pub min_samples_leaf: usize,
    /// Features drawn per split; `None` resolves to ceil(sqrt(n_features)).
    pub mtry: Option<usize>,
    pub bootstrap: bool,
    pub seed: u64,
}

impl Default for ForestParams {
    fn default() -> Self {
        Self {
            n_trees: 200,
            max_depth: 12,
            min_samples_leaf: 2,
            mtry: None,
            bootstrap: true,
            seed: 0,
        }
    }
}

impl ForestParams {
    fn validate(&self, n_features: usize) -> Result<usize> {
        if self.n_trees == 0 || self.max_depth == 0 || self.min_samples_leaf == 0 {
            return Err(Error::InvalidParams(
                "n_trees, max_depth, and min_samples_leaf must be positive".into(),
            ));
        }
        let mtry = self
            .mtry
            .unwrap_or_else(|| (n_features as f64).sqrt().ceil() as usize);
        if mtry == 0 || mtry > n_features {
            return Err(Error::InvalidParams(format!(
                "mtry {mtry} out of range for {n_features} features"
            )));
        }
        Ok(mtry)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Split {
        feature_index: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
    Leaf {
        value: f64,
    },
}

/// One regression tree; node 0 is the root.
#[derive(Debug, Clone, PartialEq)]
pub struct DecisionTree {
    pub nodes: Vec<Node>,
}

impl DecisionTree {
    pub fn predict(&self, values: &[f64]) -> f64 {
        let mut at = 0usize;
        loop {
            match &self.nodes[at] {
                Node::Leaf { value } => return *value,
                Node::Split {
                    feature_index,
                    threshold,
                    left,
                    right,
                } => {
                    at = if values[*feature_index] <= *threshold {
                        *left
                    } else {
                        *right
                    };
                }
            }
        }
    }
}

/// A trained ensemble.
#[derive(Debug, Clone, PartialEq)]
pub struct Forest {
    pub params: ForestParams,
    pub trees: Vec<DecisionTree>,
    pub feature_names: Vec<String>,
    /// Mean squared error over out-of-bag predictions; absent without
    /// bootstrap or after loading from a file.
    pub oob_error: Option<f64>,
    /// Per-feature total variance reduction accumulated at training time;
    /// absent after loading from a file (the model format stores structure
    /// only).
    importance: Option<Vec<f64>>,
}

fn label_sum_sq(samples: &[(Vec<f64>, f64)], idx: &[usize]) -> (f64, f64) {
    let mut sum = 0.0;
    let mut sq = 0.0;
    for &i in idx {
        let y = samples[i].1;
        sum += y;
        sq += y * y;
    }
    (sum, sq)
}

struct SplitChoice {
    feature: usize,
    threshold: f64,
    /// Weighted child impurity n_l*var_l + n_r*var_r, the quantity minimized.
    weighted: f64,
}

/// Scan one feature for the best threshold. Thresholds are midpoints between
/// adjacent distinct sorted values; both sides must keep `min_leaf` samples.
fn best_split_on_feature(
    samples: &[(Vec<f64>, f64)],
    idx: &[usize],
    feature: usize,
    min_leaf: usize,
) -> Option<(f64, f64)> {
    let mut order: Vec<usize> = idx.to_vec();
    order.sort_by(|&a, &b| samples[a].0[feature].total_cmp(&samples[b].0[feature]));

    let n = order.len();
    let (total_sum, total_sq) = label_sum_sq(samples, &order);
    let mut left_sum = 0.0;
    let mut left_sq = 0.0;
    let mut best: Option<(f64, f64)> = None;
    for k in 0..n - 1 {
        let y = samples[order[k]].1;
        left_sum += y;
        left_sq += y * y;
        let v_here = samples[order[k]].0[feature];
        let v_next = samples[order[k + 1]].0[feature];
        if v_here == v_next {
            continue;
        }
        let n_left = k + 1;
        let n_right = n - n_left;
        if n_left < min_leaf || n_right < min_leaf {
            continue;
        }
        // n * variance = sum of squares - sum^2 / n, per side.
        let sse_left = left_sq - left_sum * left_sum / n_left as f64;
        let right_sum = total_sum - left_sum;
        let sse_right = (total_sq - left_sq) - right_sum * right_sum / n_right as f64;
        let weighted = sse_left + sse_right;
        let threshold = (v_here + v_next) / 2.0;
        let better = match best {
            None => true,
            // Ties break toward the lower threshold.
            Some((bw, bt)) => weighted < bw || (weighted == bw && threshold < bt),
        };
        if better {
            best = Some((weighted, threshold));
        }
    }
    best.map(|(w, t)| (t, w))
}

struct TreeBuilder<'a> {
    samples: &'a [(Vec<f64>, f64)],
    n_features: usize,
    mtry: usize,
    max_depth: usize,
    min_leaf: usize,
    rng: SplitMix64,
    nodes: Vec<Node>,
    /// SSE decrease per feature, for importance accounting.
    gains: Vec<f64>,
}

impl TreeBuilder<'_> {
    fn leaf(&mut self, idx: &[usize]) -> usize {
        let mean = idx.iter().map(|&i| self.samples[i].1).sum::<f64>() / idx.len() as f64;
        self.nodes.push(Node::Leaf { value: mean });
        self.nodes.len() - 1
    }

    fn grow(&mut self, idx: &[usize], depth: usize) -> usize {
        let (sum, sq) = label_sum_sq(self.samples, idx);
        let sse = sq - sum * sum / idx.len() as f64;
        let pure = sse <= 1e-12;
        if depth >= self.max_depth || idx.len() < 2 * self.min_leaf || pure {
            return self.leaf(idx);
        }

        // Draw the mtry candidate features, then evaluate them in ascending
        // index order so tie-breaking ignores draw order.
        let mut features: Vec<usize> = (0..self.n_features).collect();
        for k in 0..self.mtry {
            let j = k + self.rng.gen_index(features.len() - k);
            features.swap(k, j);
        }
        let mut candidates = features[..self.mtry].to_vec();
        candidates.sort_unstable();

        let mut best: Option<SplitChoice> = None;
        for feature in candidates {
            if let Some((threshold, weighted)) =
                best_split_on_feature(self.samples, idx, feature, self.min_leaf)
            {
                let better = match &best {
                    None => true,
                    Some(b) => {
                        weighted < b.weighted
                            || (weighted == b.weighted
                                && (feature < b.feature
                                    || (feature == b.feature && threshold < b.threshold)))
                    }
                };
                if better {
                    best = Some(SplitChoice {
                        feature,
                        threshold,
                        weighted,
                    });
                }
            }
        }
        let Some(choice) = best else {
            return self.leaf(idx);
        };

        self.gains[choice.feature] += (sse - choice.weighted).max(0.0);

        let (left_idx, right_idx): (Vec<usize>, Vec<usize>) = idx
            .iter()
            .partition(|&&i| self.samples[i].0[choice.feature] <= choice.threshold);
        let at = self.nodes.len();
        self.nodes.push(Node::Split {
            feature_index: choice.feature,
            threshold: choice.threshold,
            left: 0,
            right: 0,
        });
        let left = self.grow(&left_idx, depth + 1);
        let right = self.grow(&right_idx, depth + 1);
        if let Node::Split {
            left: l, right: r, ..
        } = &mut self.nodes[at]
        {
            *l = left;
            *r = right;
        }
        at
    }
}

fn build_tree(
    samples: &[(Vec<f64>, f64)],
    idx: &[usize],
    params: &ForestParams,
    mtry: usize,
    rng: SplitMix64,
) -> (DecisionTree, Vec<f64>) {
    let n_features = samples[0].0.len();
    let mut builder = TreeBuilder {
        samples,
        n_features,
        mtry,
        max_depth: params.max_depth,
        min_leaf: params.min_samples_leaf,
        rng,
        nodes: Vec::new(),
        gains: vec![0.0; n_features],
    };
    let root = builder.grow(idx, 0);
    debug_assert_eq!(root, 0);
    (
        DecisionTree {
            nodes: builder.nodes,
        },
        builder.gains,
    )
}

/// Grow a single CART regression tree from `samples`.
pub fn train_tree(
    samples: &[(Vec<f64>, f64)],
    params: &ForestParams,
    tree_seed: u64,
) -> Result<DecisionTree> {
    if samples.is_empty() {
        return Err(Error::EmptySamples);
    }
    let mtry = params.validate(samples[0].0.len())?;
    let idx: Vec<usize> = (0..samples.len()).collect();
    let (tree, _) = build_tree(samples, &idx, params, mtry, SplitMix64::new(tree_seed));
    Ok(tree)
}

/// Train the ensemble on a labeled dataset.
///
/// Tree `i` trains on a bootstrap resample drawn from a generator seeded by
/// `mix(seed, i)`, so results do not depend on the parallel schedule.
/// Emits a warning when a feature column sits below the canonical variance
/// threshold, since the dataset was then probably not variance-filtered.
pub fn train_forest(ds: &PairDataset, params: &ForestParams) -> Result<Forest> {
    if ds.rows.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let n_features = ds.feature_names.len();
    let mtry = params.validate(n_features)?;

    let samples: Vec<(Vec<f64>, f64)> = ds
        .rows
        .iter()
        .map(|r| (r.values.clone(), r.label as f64))
        .collect();

    for (col, name) in ds.feature_names.iter().enumerate() {
        let n = samples.len() as f64;
        let mean = samples.iter().map(|s| s.0[col]).sum::<f64>() / n;
        let var = samples
            .iter()
            .map(|s| (s.0[col] - mean).powi(2))
            .sum::<f64>()
            / n;
        if var < crate::dataset::DEFAULT_VARIANCE_THRESHOLD {
            eprintln!(
                "warning: feature {name} has variance {var:.4}; run the variance filter before training"
            );
        }
    }

    let n = samples.len();
    let trained: Vec<(DecisionTree, Vec<f64>, Vec<usize>)> = (0..params.n_trees)
        .into_par_iter()
        .map(|i| {
            // One generator per tree: the bootstrap consumes it first, then
            // node-level feature draws continue from the same stream.
            let mut rng = SplitMix64::new(mix(params.seed, i as u64));
            let idx: Vec<usize> = if params.bootstrap {
                (0..n).map(|_| rng.gen_index(n)).collect()
            } else {
                (0..n).collect()
            };
            let (tree, gains) = build_tree(&samples, &idx, params, mtry, rng);
            (tree, gains, idx)
        })
        .collect();

    let mut trees = Vec::with_capacity(params.n_trees);
    let mut importance = vec![0.0; n_features];
    let mut oob_sum = vec![0.0f64; n];
    let mut oob_count = vec![0usize; n];
    for (tree, gains, drawn) in trained {
        if params.bootstrap {
            let mut in_bag = vec![false; n];
            for &d in &drawn {
                in_bag[d] = true;
            }
            for (i, sample) in samples.iter().enumerate() {
                if !in_bag[i] {
                    oob_sum[i] += tree.predict(&sample.0);
                    oob_count[i] += 1;
                }
            }
        }
        for (f, g) in gains.iter().enumerate() {
            importance[f] += g;
        }
        trees.push(tree);
    }

    let oob_error = if params.bootstrap {
        let mut se = 0.0;
        let mut counted = 0usize;
        for i in 0..n {
            if oob_count[i] > 0 {
                let pred = oob_sum[i] / oob_count[i] as f64;
                se += (pred - samples[i].1).powi(2);
                counted += 1;
            }
        }
        (counted > 0).then(|| se / counted as f64)
    } else {
        None
    };

    Ok(Forest {
        params: ForestParams {
            mtry: Some(mtry),
            ..params.clone()
        },
        trees,
        feature_names: ds.feature_names.clone(),
        oob_error,
        importance: Some(importance),
    })
}

/// Mean of the per-tree leaf values; lies in [0, 1] for {0, 1} labels.
pub fn predict(forest: &Forest, record: &SimilarityRecord) -> Result<f64> {
    if record.feature_names != forest.feature_names {
        return Err(Error::SchemaMismatch);
    }
    let sum: f64 = forest.trees.iter().map(|t| t.predict(&record.values)).sum();
    Ok(sum / forest.trees.len() as f64)
}

/// Map a score to a binary label: 1 iff score >= threshold.
pub fn classify(score: f64, threshold: f64) -> u8 {
    u8::from(score >= threshold)
}

/// Total training variance reduction per feature, normalized to sum 1.
/// Empty when no split exists or the forest was loaded from a file.
pub fn feature_importance(forest: &Forest) -> Vec<(String, f64)> {
    let Some(gains) = &forest.importance else {
        return Vec::new();
    };
    let total: f64 = gains.iter().sum();
    if total <= 0.0 {
        return Vec::new();
    }
    forest
        .feature_names
        .iter()
        .zip(gains)
        .map(|(n, g)| (n.clone(), g / total))
        .collect()
}

const MODEL_MAGIC: &str = "STYLOMECH-FOREST";
const MODEL_VERSION: u32 = 1;

/// Serialize the forest to the versioned line-oriented model format.
pub fn save_model(forest: &Forest, path: &Path) -> Result<()> {
    let mut out = String::new();
    let _ = writeln!(out, "{MODEL_MAGIC} {MODEL_VERSION}");
    let p = &forest.params;
    let _ = writeln!(
        out,
        "params n_trees={} max_depth={} min_samples_leaf={} mtry={} bootstrap={} seed={}",
        p.n_trees,
        p.max_depth,
        p.min_samples_leaf,
        p.mtry.unwrap_or(0),
        p.bootstrap,
        p.seed
    );
    let _ = writeln!(out, "features {}", forest.feature_names.join(","));
    for (i, tree) in forest.trees.iter().enumerate() {
        let _ = writeln!(out, "tree {i} {}", tree.nodes.len());
        for (id, node) in tree.nodes.iter().enumerate() {
            match node {
                Node::Split {
                    feature_index,
                    threshold,
                    left,
                    right,
                } => {
                    let _ = writeln!(out, "{id} S {feature_index} {threshold} {left} {right}");
                }
                Node::Leaf { value } => {
                    let _ = writeln!(out, "{id} L {value}");
                }
            }
        }
    }
    std::fs::write(path, out)?;
    Ok(())
}

struct ModelLines<'a> {
    lines: std::str::Lines<'a>,
    line_no: usize,
}

impl<'a> ModelLines<'a> {
    fn next(&mut self) -> Option<(usize, &'a str)> {
        self.lines.next().map(|l| {
            self.line_no += 1;
            (self.line_no, l)
        })
    }

    fn expect(&mut self, what: &str) -> Result<(usize, &'a str)> {
        let line_no = self.line_no;
        self.next().ok_or_else(|| Error::Format {
            line: line_no + 1,
            message: format!("unexpected end of file, expected {what}"),
        })
    }
}

fn format_err(line: usize, message: impl Into<String>) -> Error {
    Error::Format {
        line,
        message: message.into(),
    }
}

fn parse_num<T: std::str::FromStr>(line: usize, s: &str, what: &str) -> Result<T> {
    s.parse()
        .map_err(|_| format_err(line, format!("invalid {what}: {s:?}")))
}

/// Load a forest saved by [`save_model`]. Predictions of the loaded model
/// match the original exactly; training-only state (out-of-bag error,
/// importances) is not stored in the format.
pub fn load_model(path: &Path) -> Result<Forest> {
    let content = std::fs::read_to_string(path)?;
    let mut lines = ModelLines {
        lines: content.lines(),
        line_no: 0,
    };

    let (ln, magic) = lines.expect("header")?;
    let mut head = magic.split_whitespace();
    if head.next() != Some(MODEL_MAGIC) {
        return Err(Error::Version(format!("not a {MODEL_MAGIC} file")));
    }
    match head.next().map(|v| v.parse::<u32>()) {
        Some(Ok(MODEL_VERSION)) => {}
        Some(Ok(v)) => return Err(Error::Version(format!("version {v} unsupported"))),
        _ => return Err(format_err(ln, "missing version number")),
    }

    let (ln, params_line) = lines.expect("params line")?;
    let rest = params_line
        .strip_prefix("params ")
        .ok_or_else(|| format_err(ln, "expected params line"))?;
    let mut params = ForestParams::default();
    let mut mtry = 0usize;
    for kv in rest.split_whitespace() {
        let (key, value) = kv
            .split_once('=')
            .ok_or_else(|| format_err(ln, format!("malformed key=value {kv:?}")))?;
        match key {
            "n_trees" => params.n_trees = parse_num(ln, value, "n_trees")?,
            "max_depth" => params.max_depth = parse_num(ln, value, "max_depth")?,
            "min_samples_leaf" => {
                params.min_samples_leaf = parse_num(ln, value, "min_samples_leaf")?
            }
            "mtry" => mtry = parse_num(ln, value, "mtry")?,
            "bootstrap" => params.bootstrap = parse_num(ln, value, "bootstrap")?,
            "seed" => params.seed = parse_num(ln, value, "seed")?,
            other => return Err(format_err(ln, format!("unknown param {other:?}"))),
        }
    }
    params.mtry = (mtry > 0).then_some(mtry);

    let (ln, features_line) = lines.expect("features line")?;
    let feature_names: Vec<String> = features_line
        .strip_prefix("features ")
        .ok_or_else(|| format_err(ln, "expected features line"))?
        .split(',')
        .map(str::to_string)
        .collect();

    let mut trees = Vec::with_capacity(params.n_trees);
    for expected in 0..params.n_trees {
        let (ln, tree_line) = lines.expect("tree header")?;
        let mut parts = tree_line.split_whitespace();
        if parts.next() != Some("tree") {
            return Err(format_err(
                ln,
                format!("expected tree header, found {tree_line:?}"),
            ));
        }
        let index: usize = parse_num(ln, parts.next().unwrap_or(""), "tree index")?;
        if index != expected {
            return Err(format_err(
                ln,
                format!("tree index {index}, expected {expected}"),
            ));
        }
        let n_nodes: usize = parse_num(ln, parts.next().unwrap_or(""), "node count")?;
        if n_nodes == 0 {
            return Err(format_err(ln, "tree must have at least one node"));
        }
        let mut nodes = Vec::with_capacity(n_nodes);
        for id in 0..n_nodes {
            let (ln, node_line) = lines.expect("node line")?;
            let mut parts = node_line.split_whitespace();
            let got_id: usize = parse_num(ln, parts.next().unwrap_or(""), "node id")?;
            if got_id != id {
                return Err(format_err(ln, format!("node id {got_id}, expected {id}")));
            }
            match parts.next() {
                Some("S") => {
                    let feature_index: usize =
                        parse_num(ln, parts.next().unwrap_or(""), "feature index")?;
                    let threshold: f64 = parse_num(ln, parts.next().unwrap_or(""), "threshold")?;
                    let left: usize = parse_num(ln, parts.next().unwrap_or(""), "left child")?;
                    let right: usize = parse_num(ln, parts.next().unwrap_or(""), "right child")?;
                    if feature_index >= feature_names.len() {
                        return Err(format_err(
                            ln,
                            format!("feature index {feature_index} out of range"),
                        ));
                    }
                    if left >= n_nodes || right >= n_nodes || left == id || right == id {
                        return Err(format_err(ln, "child id out of range"));
                    }
                    nodes.push(Node::Split {
                        feature_index,
                        threshold,
                        left,
                        right,
                    });
                }
                Some("L") => {
                    let value: f64 = parse_num(ln, parts.next().unwrap_or(""), "leaf value")?;
                    nodes.push(Node::Leaf { value });
                }
                other => return Err(format_err(ln, format!("unknown node kind {other:?}"))),
            }
        }
        trees.push(DecisionTree { nodes });
    }
    if let Some((ln, extra)) = lines.next() {
        if !extra.trim().is_empty() {
            return Err(format_err(ln, format!("trailing content {extra:?}")));
        }
    }
    Ok(Forest {
        params,
        trees,
        feature_names,
        oob_error: None,
        importance: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::DatasetRow;

    fn params(n_trees: usize, max_depth: usize, min_leaf: usize, bootstrap: bool) -> ForestParams {
        ForestParams {
            n_trees,
            max_depth,
            min_samples_leaf: min_leaf,
            mtry: None,
            bootstrap,
            seed: 42,
        }
    }

    fn dataset(rows: &[(&[f64], u8)]) -> PairDataset {
        let cols = rows[0].0.len();
        PairDataset {
            feature_names: (0..cols).map(|c| format!("f{c}")).collect(),
            rows: rows
                .iter()
                .map(|(v, l)| DatasetRow {
                    values: v.to_vec(),
                    label: *l,
                })
                .collect(),
            provenance: Vec::new(),
        }
    }

    #[test]
    fn pure_node_is_a_single_leaf() {
        let samples = vec![(vec![0.0], 1.0), (vec![5.0], 1.0), (vec![9.0], 1.0)];
        let tree = train_tree(&samples, &params(1, 5, 1, false), 0).unwrap();
        assert_eq!(tree.nodes, vec![Node::Leaf { value: 1.0 }]);
    }

    #[test]
    fn separable_pair_splits_at_midpoint() {
        let samples = vec![(vec![0.0], 0.0), (vec![1.0], 1.0)];
        let tree = train_tree(&samples, &params(1, 5, 1, false), 0).unwrap();
        assert_eq!(tree.nodes.len(), 3);
        match &tree.nodes[0] {
            Node::Split {
                feature_index,
                threshold,
                left,
                right,
            } => {
                assert_eq!(*feature_index, 0);
                assert_eq!(*threshold, 0.5);
                assert_eq!(tree.nodes[*left], Node::Leaf { value: 0.0 });
                assert_eq!(tree.nodes[*right], Node::Leaf { value: 1.0 });
            }
            other => panic!("expected split at root, got {other:?}"),
        }
    }

    #[test]
    fn depth_limit_caps_tree_height() {
        // XOR labels: no single split reduces variance, but growth still
        // respects the depth cap.
        let samples = vec![
            (vec![0.0, 0.0], 0.0),
            (vec![0.0, 1.0], 1.0),
            (vec![1.0, 0.0], 1.0),
            (vec![1.0, 1.0], 0.0),
        ];
        let tree = train_tree(&samples, &params(1, 1, 1, false), 3).unwrap();
        fn height(tree: &DecisionTree, at: usize) -> usize {
            match &tree.nodes[at] {
                Node::Leaf { .. } => 0,
                Node::Split { left, right, .. } => {
                    1 + height(tree, *left).max(height(tree, *right))
                }
            }
        }
        assert!(height(&tree, 0) <= 1);
    }

    #[test]
    fn empty_samples_error() {
        assert!(matches!(
            train_tree(&[], &params(1, 5, 1, false), 0),
            Err(Error::EmptySamples)
        ));
    }

    fn separable_dataset() -> PairDataset {
        let rows: Vec<(Vec<f64>, u8)> = (0..40)
            .map(|i| {
                let label = u8::from(i % 2 == 1);
                // One informative feature, one noise-ish feature.
                (
                    vec![label as f64 + (i as f64) * 1e-3, (i % 7) as f64],
                    label,
                )
            })
            .collect();
        let refs: Vec<(&[f64], u8)> = rows.iter().map(|(v, l)| (v.as_slice(), *l)).collect();
        dataset(&refs)
    }

    #[test]
    fn training_is_deterministic() {
        let ds = separable_dataset();
        let p = params(20, 6, 1, true);
        let a = train_forest(&ds, &p).unwrap();
        let b = train_forest(&ds, &p).unwrap();
        assert_eq!(a.trees, b.trees);
        assert_eq!(a.oob_error, b.oob_error);
    }

    #[test]
    fn single_unbagged_tree_equals_train_tree() {
        let ds = separable_dataset();
        let mut p = params(1, 6, 1, false);
        p.mtry = Some(2);
        let forest = train_forest(&ds, &p).unwrap();
        let samples: Vec<(Vec<f64>, f64)> = ds
            .rows
            .iter()
            .map(|r| (r.values.clone(), r.label as f64))
            .collect();
        let lone = train_tree(&samples, &p, mix(p.seed, 0)).unwrap();
        assert_eq!(forest.trees[0], lone);
        assert!(forest.oob_error.is_none());
    }

    #[test]
    fn separable_data_trains_to_perfect_accuracy() {
        let ds = separable_dataset();
        let forest = train_forest(&ds, &params(30, 8, 1, true)).unwrap();
        for row in 0..ds.len() {
            let rec = ds.record(row);
            let score = predict(&forest, &rec).unwrap();
            assert_eq!(classify(score, 0.5), ds.rows[row].label);
        }
        let oob = forest.oob_error.unwrap();
        assert!((0.0..=1.0).contains(&oob));
    }

    #[test]
    fn predict_rejects_schema_mismatch() {
        let ds = separable_dataset();
        let forest = train_forest(&ds, &params(3, 4, 1, true)).unwrap();
        let rec = SimilarityRecord::new(vec!["other".into()], vec![0.0], None).unwrap();
        assert!(matches!(predict(&forest, &rec), Err(Error::SchemaMismatch)));
    }

    fn leaf_forest(leaves: &[f64]) -> Forest {
        Forest {
            params: ForestParams::default(),
            trees: leaves
                .iter()
                .map(|&value| DecisionTree {
                    nodes: vec![Node::Leaf { value }],
                })
                .collect(),
            feature_names: vec!["f0".into()],
            oob_error: None,
            importance: None,
        }
    }

    #[test]
    fn predict_averages_tree_outputs() {
        let rec = SimilarityRecord::new(vec!["f0".into()], vec![3.0], None).unwrap();
        assert_eq!(predict(&leaf_forest(&[0.7]), &rec).unwrap(), 0.7);
        assert_eq!(predict(&leaf_forest(&[1.0, 1.0, 1.0]), &rec).unwrap(), 1.0);
        assert_eq!(predict(&leaf_forest(&[0.0, 1.0]), &rec).unwrap(), 0.5);
    }

    #[test]
    fn classify_boundary_is_inclusive() {
        assert_eq!(classify(0.7, 0.5), 1);
        assert_eq!(classify(0.5, 0.5), 1);
        assert_eq!(classify(0.49, 0.5), 0);
    }

    #[test]
    fn importance_single_feature_forest() {
        let rows: Vec<(Vec<f64>, u8)> = (0..20)
            .map(|i| (vec![i as f64], u8::from(i >= 10)))
            .collect();
        let refs: Vec<(&[f64], u8)> = rows.iter().map(|(v, l)| (v.as_slice(), *l)).collect();
        let forest = train_forest(&dataset(&refs), &params(10, 4, 1, true)).unwrap();
        let imp = feature_importance(&forest);
        assert_eq!(imp.len(), 1);
        assert!((imp[0].1 - 1.0).abs() < 1e-9);
    }

    #[test]
    fn importance_empty_for_all_leaf_forest() {
        let rows: Vec<(Vec<f64>, u8)> = (0..10).map(|i| (vec![i as f64], 1u8)).collect();
        let refs: Vec<(&[f64], u8)> = rows.iter().map(|(v, l)| (v.as_slice(), *l)).collect();
        let forest = train_forest(&dataset(&refs), &params(5, 4, 1, true)).unwrap();
        assert!(feature_importance(&forest).is_empty());
    }

    #[test]
    fn importance_splits_evenly_on_symmetric_data() {
        // Root splits f0 (gain 2/3), then the impure child splits f1 with the
        // same gain 2/3, so the two features end up at 0.5 each.
        let rows: [(&[f64], u8); 6] = [
            (&[0.0, 0.0], 0),
            (&[0.0, 1.0], 0),
            (&[0.0, 2.0], 0),
            (&[1.0, 0.0], 0),
            (&[1.0, 1.0], 1),
            (&[1.0, 2.0], 1),
        ];
        let mut p = params(1, 3, 1, false);
        p.mtry = Some(2);
        let forest = train_forest(&dataset(&rows), &p).unwrap();
        let imp = feature_importance(&forest);
        assert_eq!(imp.len(), 2);
        assert!((imp[0].1 - 0.5).abs() < 1e-9, "f0 importance {}", imp[0].1);
        assert!((imp[1].1 - 0.5).abs() < 1e-9, "f1 importance {}", imp[1].1);
    }

    #[test]
    fn model_round_trip_preserves_predictions() {
        let ds = separable_dataset();
        let forest = train_forest(&ds, &params(15, 6, 1, true)).unwrap();
        let dir = std::env::temp_dir().join(format!("stylomech-model-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("model.txt");
        save_model(&forest, &path).unwrap();
        let loaded = load_model(&path).unwrap();
        assert_eq!(loaded.trees, forest.trees);
        assert_eq!(loaded.feature_names, forest.feature_names);
        let mut rng = SplitMix64::new(5);
        for _ in 0..100 {
            let rec = SimilarityRecord::new(
                forest.feature_names.clone(),
                (0..2).map(|_| rng.next_f64() * 10.0).collect(),
                None,
            )
            .unwrap();
            assert_eq!(
                predict(&forest, &rec).unwrap(),
                predict(&loaded, &rec).unwrap()
            );
        }
        std::fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn unknown_version_is_rejected() {
        let dir = std::env::temp_dir().join(format!("stylomech-ver-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("v9.txt");
        std::fs::write(&path, "STYLOMECH-FOREST 9\n").unwrap();
        assert!(matches!(load_model(&path), Err(Error::Version(_))));
        std::fs::write(&path, "NOT-A-MODEL 1\n").unwrap();
        assert!(matches!(load_model(&path), Err(Error::Version(_))));
        std::fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn truncated_file_is_a_format_error() {
        let ds = separable_dataset();
        let forest = train_forest(&ds, &params(3, 4, 1, true)).unwrap();
        let dir = std::env::temp_dir().join(format!("stylomech-trunc-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("model.txt");
        save_model(&forest, &path).unwrap();
        let content = std::fs::read_to_string(&path).unwrap();
        let cut: String = content.lines().take(6).collect::<Vec<_>>().join("\n");
        std::fs::write(&path, cut).unwrap();
        assert!(matches!(load_model(&path), Err(Error::Format { .. })));
        std::fs::remove_dir_all(&dir).unwrap();
    }

    /// Exhaustive greedy CART with the same tie-breaking, no feature
    /// subsampling. Independent of the production grower.
    fn oracle_tree(
        samples: &[(Vec<f64>, f64)],
        idx: &[usize],
        depth: usize,
        max_depth: usize,
        min_leaf: usize,
        nodes: &mut Vec<Node>,
    ) -> usize {
        let n = idx.len() as f64;
        let mean = idx.iter().map(|&i| samples[i].1).sum::<f64>() / n;
        let sse: f64 = idx.iter().map(|&i| (samples[i].1 - mean).powi(2)).sum();
        if depth >= max_depth || idx.len() < 2 * min_leaf || sse <= 1e-12 {
            nodes.push(Node::Leaf { value: mean });
            return nodes.len() - 1;
        }
        let n_features = samples[0].0.len();
        let mut best: Option<(f64, usize, f64)> = None;
        for f in 0..n_features {
            let mut values: Vec<f64> = idx.iter().map(|&i| samples[i].0[f]).collect();
            values.sort_by(f64::total_cmp);
            values.dedup();
            for pair in values.windows(2) {
                let threshold = (pair[0] + pair[1]) / 2.0;
                let (mut ls, mut lq, mut ln) = (0.0, 0.0, 0usize);
                let (mut rs, mut rq, mut rn) = (0.0, 0.0, 0usize);
                for &i in idx {
                    let y = samples[i].1;
                    if samples[i].0[f] <= threshold {
                        ls += y;
                        lq += y * y;
                        ln += 1;
                    } else {
                        rs += y;
                        rq += y * y;
                        rn += 1;
                    }
                }
                if ln < min_leaf || rn < min_leaf {
                    continue;
                }
                let weighted = (lq - ls * ls / ln as f64) + (rq - rs * rs / rn as f64);
                let better = match best {
                    None => true,
                    Some((bw, bf, bt)) => {
                        weighted < bw || (weighted == bw && (f < bf || (f == bf && threshold < bt)))
                    }
                };
                if better {
                    best = Some((weighted, f, threshold));
                }
            }
        }
        let Some((_, f, threshold)) = best else {
            nodes.push(Node::Leaf { value: mean });
            return nodes.len() - 1;
        };
        let (li, ri): (Vec<usize>, Vec<usize>) =
            idx.iter().partition(|&&i| samples[i].0[f] <= threshold);
        let at = nodes.len();
        nodes.push(Node::Split {
            feature_index: f,
            threshold,
            left: 0,
            right: 0,
        });
        let l = oracle_tree(samples, &li, depth + 1, max_depth, min_leaf, nodes);
        let r = oracle_tree(samples, &ri, depth + 1, max_depth, min_leaf, nodes);
        if let Node::Split { left, right, .. } = &mut nodes[at] {
            *left = l;
            *right = r;
        }
        at
    }

    #[test]
    fn grown_tree_matches_exhaustive_greedy_oracle() {
        let mut rng = SplitMix64::new(2024);
        for case in 0..60 {
            let n = 2 + rng.gen_index(7);
            let n_features = 1 + rng.gen_index(2);
            let samples: Vec<(Vec<f64>, f64)> = (0..n)
                .map(|_| {
                    let values = (0..n_features).map(|_| (rng.gen_index(5)) as f64).collect();
                    (values, rng.gen_index(2) as f64)
                })
                .collect();
            let p = ForestParams {
                n_trees: 1,
                max_depth: 2,
                min_samples_leaf: 1,
                mtry: Some(n_features),
                bootstrap: false,
                seed: case,
            };
            let grown = train_tree(&samples, &p, case).unwrap();
            let mut nodes = Vec::new();
            let idx: Vec<usize> = (0..n).collect();
            oracle_tree(&samples, &idx, 0, 2, 1, &mut nodes);
            assert_eq!(grown.nodes, nodes, "case {case} samples {samples:?}");
        }
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]

            #[test]
            fn predictions_stay_in_unit_interval(seed in any::<u64>()) {
                let ds = separable_dataset();
                let forest = train_forest(&ds, &params(10, 6, 1, true)).unwrap();
                let mut rng = SplitMix64::new(seed);
                for _ in 0..20 {
                    let rec = SimilarityRecord::new(
                        forest.feature_names.clone(),
                        (0..2).map(|_| rng.next_f64() * 20.0 - 10.0).collect(),
                        None,
                    ).unwrap();
                    let score = predict(&forest, &rec).unwrap();
                    prop_assert!((0.0..=1.0).contains(&score));
                }
            }

            #[test]
            fn importances_sum_to_one(seed in any::<u64>()) {
                let mut rng = SplitMix64::new(seed);
                let rows: Vec<DatasetRow> = (0..30)
                    .map(|_| DatasetRow {
                        values: vec![rng.next_f64(), rng.next_f64(), rng.next_f64()],
                        label: rng.gen_index(2) as u8,
                    })
                    .collect();
                let ds = PairDataset {
                    feature_names: vec!["a".into(), "b".into(), "c".into()],
                    rows,
                    provenance: Vec::new(),
                };
                let forest = train_forest(&ds, &params(8, 5, 1, true)).unwrap();
                let imp = feature_importance(&forest);
                if !imp.is_empty() {
                    let sum: f64 = imp.iter().map(|(_, v)| v).sum();
                    prop_assert!((sum - 1.0).abs() < 1e-9);
                }
            }
        }
    }
}
