use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Sparse document vector: (column, weight) pairs sorted by column.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SparseVec(pub Vec<(usize, f64)>);

impl SparseVec {
    pub fn dot_dense(&self, w: &[f64]) -> f64 {
        self.0.iter().map(|&(i, v)| w[i] * v).sum()
    }

    pub fn l2_norm(&self) -> f64 {
        self.0.iter().map(|&(_, v)| v * v).sum::<f64>().sqrt()
    }

    pub fn max_index(&self) -> Option<usize> {
        self.0.last().map(|&(i, _)| i)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }
}

/// Fitted TF-IDF vocabulary with document frequencies.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TfidfModel {
    pub vocabulary: BTreeMap<String, usize>,
    pub idf: Vec<f64>,
    pub doc_count: usize,
    pub doc_freq: Vec<u32>,
    pub max_df: f64,
    pub min_df: f64,
    pub ngram_range: (usize, usize),
}

/// Slack for the inclusive document-frequency boundaries, so min_df = 0.01 at
/// N = 100 retains a df-1 term despite binary rounding of 0.01 * 100.
const DF_EPS: f64 = 1e-9;

/// All n-grams of the token list in the given range, joined by a space.
pub fn ngrams(tokens: &[String], range: (usize, usize)) -> Vec<String> {
    let mut out = Vec::new();
    for n in range.0..=range.1 {
        if n == 0 || n > tokens.len() {
            continue;
        }
        for window in tokens.windows(n) {
            out.push(window.join(" "));
        }
    }
    out
}

/// Fit the vocabulary over a tokenized corpus, keeping the n-grams whose
/// document frequency df satisfies min_df * N <= df <= max_df * N (boundaries
/// inclusive). idf(t) = ln(1 + N / df(t)).
pub fn fit_tfidf(
    corpus: &[Vec<String>],
    max_df: f64,
    min_df: f64,
    ngram_range: (usize, usize),
) -> Result<TfidfModel> {
    if corpus.is_empty() {
        return Err(Error::EmptyInput("tfidf corpus".into()));
    }
    let n = corpus.len() as f64;
    let mut df: BTreeMap<String, u32> = BTreeMap::new();
    for doc in corpus {
        let unique: BTreeSet<String> = ngrams(doc, ngram_range).into_iter().collect();
        for gram in unique {
            *df.entry(gram).or_insert(0) += 1;
        }
    }

    let mut vocabulary = BTreeMap::new();
    let mut idf = Vec::new();
    let mut doc_freq = Vec::new();
    for (gram, count) in df {
        let c = f64::from(count);
        if c + DF_EPS >= min_df * n && c - DF_EPS <= max_df * n {
            let col = vocabulary.len();
            vocabulary.insert(gram, col);
            idf.push((1.0 + n / c).ln());
            doc_freq.push(count);
        }
    }
    if vocabulary.is_empty() {
        return Err(Error::DegenerateCorpus);
    }
    Ok(TfidfModel {
        vocabulary,
        idf,
        doc_count: corpus.len(),
        doc_freq,
        max_df,
        min_df,
        ngram_range,
    })
}

impl TfidfModel {
    pub fn vocab_size(&self) -> usize {
        self.vocabulary.len()
    }

    /// TF-IDF vector of one tokenized document, L2-normalized. Documents with
    /// no in-vocabulary n-grams map to the zero vector.
    pub fn transform(&self, tokens: &[String]) -> SparseVec {
        let mut counts: BTreeMap<usize, f64> = BTreeMap::new();
        for gram in ngrams(tokens, self.ngram_range) {
            if let Some(&col) = self.vocabulary.get(&gram) {
                *counts.entry(col).or_insert(0.0) += 1.0;
            }
        }
        let mut entries: Vec<(usize, f64)> = counts
            .into_iter()
            .map(|(col, tf)| (col, tf * self.idf[col]))
            .collect();
        let norm: f64 = entries.iter().map(|&(_, v)| v * v).sum::<f64>().sqrt();
        if norm > 0.0 {
            for (_, v) in &mut entries {
                *v /= norm;
            }
        }
        SparseVec(entries)
    }
}
