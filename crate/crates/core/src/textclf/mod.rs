//! Pump-message classification: coin-blind tokenizer, TF-IDF vectorizer,
//! SGD-trained linear SVM, evaluation metrics, and the word-ratio diagnostic.

pub mod metrics;
pub mod model;
pub mod porter;
pub mod svm;
pub mod tfidf;
pub mod tokenizer;

pub use metrics::{evaluate, smoothed_ratio, word_ratio, ClassifierMetrics};
pub use model::{train_classifier, ClassifierBundle, TrainParams};
pub use svm::{hinge_objective, train_svm, LinearSvm, SvmConfig};
pub use tfidf::{fit_tfidf, ngrams, SparseVec, TfidfModel};
pub use tokenizer::{raw_tokens, tokenize, TokenizerConfig};
