use crate::error::{Error, Result};

/// ROC-AUC byift the Mann-Whitney pairwise formulation:
/// (#{pos > neg} + ties/2) / (P*N), computed in integer arithmetic so it
/// matches a brute-force pairwise count bit for bit.
pub fn roc_auc(scores: &[f64], labels: &[bool]) -> Result<f64> {
    if scores.len() != labels.len() {
        return Err(Error::DimensionMismatch {
            expected: labels.len(),
            actual: scores.len(),
        });
    }
    let p = labels.iter().filter(|&&l| l).count();
    let n = labels.len() - p;
    if p == 0 || n == 0 {
        return Err(Error::DegenerateLabels(
            "roc-auc requires both classes".into(),
        ));
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| {
        scores[a]
            .partial_cmp(&scores[b])
            .expect("finite scores")
            .then(labels[a].cmp(&labels[b]))
    });

    let mut wins_x2: u128 = 0; // 2*#{pos>neg} + #{ties}
    let mut negs_below: u128 = 0;
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j < order.len() && scores[order[j]] == scores[order[i]] {
            j += 1;
        }
        let group_pos = order[i..j].iter().filter(|&&k| labels[k]).count() as u128;
        let group_neg = (j - i) as u128 - group_pos;
        wins_x2 += 2 * group_pos * negs_below + group_pos * group_neg;
        negs_below += group_neg;
        i = j;
    }
    Ok(wins_x2 as f64 / (2.0 * p as f64 * n as f64))
}
