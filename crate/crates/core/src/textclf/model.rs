use std::fs::File;
use std::io::{BufReader, BufWriter};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::corpus::{CoinRegistry, PumpLabel, SocialMessage};
use crate::error::{Error, Result};

use super::metrics::{evaluate, ClassifierMetrics};
use super::svm::{train_svm, LinearSvm, SvmConfig};
use super::tfidf::{fit_tfidf, TfidfModel};
use super::tokenizer::{tokenize, TokenizerConfig};

pub const MODEL_VERSION: u32 = 1;

/// Fitting parameters for the full classifier pipeline.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainParams {
    pub max_df: f64,
    pub min_df: f64,
    pub svm: SvmConfig,
}

impl Default for TrainParams {
    fn default() -> Self {
        TrainParams {
            max_df: 0.5,
            min_df: 0.01,
            svm: SvmConfig::default(),
        }
    }
}

/// Everything needed to classify a message: tokenizer config, a registry
/// snapshot, the fitted vocabulary, and the trained weights. Serialized as
/// versioned JSON.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClassifierBundle {
    pub version: u32,
    pub tokenizer: TokenizerConfig,
    pub registry: CoinRegistry,
    pub tfidf: TfidfModel,
    pub svm: LinearSvm,
}

/// Tokenize, fit TF-IDF, and train the SVM on labeled messages. Returns the
/// bundle plus its training-set metrics.
pub fn train_classifier(
    labeled: &[SocialMessage],
    registry: &CoinRegistry,
    tokenizer: &TokenizerConfig,
    params: &TrainParams,
) -> Result<(ClassifierBundle, ClassifierMetrics)> {
    let labeled: Vec<&SocialMessage> = labeled.iter().filter(|m| m.label.is_some()).collect();
    if labeled.is_empty() {
        return Err(Error::EmptyInput("no labeled messages".into()));
    }
    let docs: Vec<Vec<String>> = labeled
        .iter()
        .map(|m| tokenize(&m.text, registry, tokenizer))
        .collect();
    let tfidf = fit_tfidf(&docs, params.max_df, params.min_df, tokenizer.ngram_range)?;
    let rows: Vec<_> = docs.iter().map(|d| tfidf.transform(d)).collect();
    let y: Vec<f64> = labeled
        .iter()
        .map(|m| match m.label.unwrap() {
            PumpLabel::Pump => 1.0,
            PumpLabel::NotPump => -1.0,
        })
        .collect();
    let svm = train_svm(&rows, &y, tfidf.vocab_size(), &params.svm)?;

    let bundle = ClassifierBundle {
        version: MODEL_VERSION,
        tokenizer: tokenizer.clone(),
        registry: registry.clone(),
        tfidf,
        svm,
    };
    let preds: Vec<PumpLabel> = labeled
        .iter()
        .map(|m| bundle.classify(&m.text).0)
        .collect();
    let truth: Vec<PumpLabel> = labeled.iter().map(|m| m.label.unwrap()).collect();
    let metrics = evaluate(&preds, &truth)?;
    Ok((bundle, metrics))
}

impl ClassifierBundle {
    /// Label one message text, returning the label and the signed margin.
    pub fn classify(&self, text: &str) -> (PumpLabel, f64) {
        let tokens = tokenize(text, &self.registry, &self.tokenizer);
        let vector = self.tfidf.transform(&tokens);
        // Dimension always matches the bundled vocabulary.
        self.svm.predict(&vector).expect("bundle dims consistent")
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let file = File::create(path).map_err(|e| Error::Io {
            path: path.to_path_buf(),
            source: e,
        })?;
        serde_json::to_writer(BufWriter::new(file), self).map_err(|e| Error::InvalidModel {
            path: path.to_path_buf(),
            msg: e.to_string(),
        })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = File::open(path).map_err(|e| Error::Io {
            path: path.to_path_buf(),
            source: e,
        })?;
        let bundle: ClassifierBundle =
            serde_json::from_reader(BufReader::new(file)).map_err(|e| Error::InvalidModel {
                path: path.to_path_buf(),
                msg: e.to_string(),
            })?;
        if bundle.version != MODEL_VERSION {
            return Err(Error::InvalidModel {
                path: path.to_path_buf(),
                msg: format!(
                    "unsupported model version {} (expected {MODEL_VERSION})",
                    bundle.version
                ),
            });
        }
        Ok(bundle)
    }
}
