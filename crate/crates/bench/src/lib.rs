//! Deterministic fixtures shared by the benchmarks.

use stylomech::dataset::{DatasetRow, PairDataset};
use stylomech::rng::SplitMix64;
use stylomech::synth::AuthorStyleParams;

/// One synthetic English document of roughly `words` words.
pub fn english_text(words: usize, seed: u64) -> String {
    let params = AuthorStyleParams::default_english();
    stylomech::synth::gen_author_docs(&params, 1, words, seed)
        .unwrap()
        .remove(0)
}

/// One synthetic Romanized Sinhala chunk of roughly `words` words.
pub fn romanized_text(words: usize, seed: u64) -> String {
    let params = AuthorStyleParams::default_romanized();
    stylomech::synth::gen_author_docs(&params, 1, words, seed)
        .unwrap()
        .remove(0)
}

/// A random labeled dataset for forest benchmarks.
pub fn training_set(rows: usize, cols: usize, seed: u64) -> PairDataset {
    let mut rng = SplitMix64::new(seed);
    let rows: Vec<DatasetRow> = (0..rows)
        .map(|_| {
            let values: Vec<f64> = (0..cols).map(|_| rng.next_f64() * 10.0).collect();
            let label = u8::from(values.iter().sum::<f64>() > 5.0 * cols as f64);
            DatasetRow { values, label }
        })
        .collect();
    PairDataset {
        feature_names: (0..cols).map(|c| format!("f{c}")).collect(),
        rows,
        provenance: Vec::new(),
    }
}
