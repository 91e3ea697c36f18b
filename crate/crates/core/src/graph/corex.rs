use nalgebra::DMatrix;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorexOptions {
    pub k: usize,
    pub max_iter: usize,
    pub lr: f64,
    pub tol: f64,
    pub ridge: f64,
    pub seed: u64,
}

impl Default for CorexOptions {
    fn default() -> Self {
        CorexOptions {
            k: 24,
            max_iter: 500,
            lr: 0.1,
            tol: 1e-8,
            ridge: 1e-6,
            seed: 0,
        }
    }
}

/// Latent-factor embedding minimizing TC(X|Y) + TC(Y) for Y = X W over the
/// standardized columns, with one weight row per retained column.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorexModel {
    /// Row per retained column (user), k entries each. The factor basis is
    /// canonicalized (varimax when objective-neutral, positive leading signs)
    /// so the per-row argmax is meaningful.
    pub weights: Vec<Vec<f64>>,
    pub k: usize,
    pub objective_trace: Vec<f64>,
    pub column_labels: Vec<String>,
    pub dropped_columns: Vec<String>,
    pub warnings: Vec<String>,
    pub seed: u64,
}

impl CorexModel {
    pub fn objective(&self) -> f64 {
        *self.objective_trace.last().expect("non-empty trace")
    }

    pub fn save(&self, path: impl AsRef<std::path::Path>) -> Result<()> {
        let path = path.as_ref();
        let file = std::fs::File::create(path).map_err(|e| Error::Io {
            path: path.to_path_buf(),
            source: e,
        })?;
        serde_json::to_writer(std::io::BufWriter::new(file), self).map_err(|e| {
            Error::InvalidModel {
                path: path.to_path_buf(),
                msg: e.to_string(),
            }
        })
    }

    pub fn load(path: impl AsRef<std::path::Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = std::fs::File::open(path).map_err(|e| Error::Io {
            path: path.to_path_buf(),
            source: e,
        })?;
        serde_json::from_reader(std::io::BufReader::new(file)).map_err(|e| Error::InvalidModel {
            path: path.to_path_buf(),
            msg: e.to_string(),
        })
    }
}

/// Total correlation of Gaussian data given as columns: -1/2 ln det R of the
/// sample correlation matrix. Zero for independent columns, grows with
/// dependence. det(R) <= 1 keeps this nonnegative.
pub fn gaussian_tc(columns: &[Vec<f64>]) -> Result<f64> {
    let (z, _, _) = standardize(columns, &mut Vec::new());
    if z.ncols() < 2 {
        return Err(Error::EmptyInput(
            "total correlation needs >= 2 non-constant columns".into(),
        ));
    }
    let r = correlation(&z);
    let mut warnings = Vec::new();
    let (logdet, _) = logdet_spd(&r, 1e-12, &mut warnings)?;
    Ok(-0.5 * logdet)
}

/// Fit linear CorEx on labeled data columns (each a variable over samples).
/// Zero-variance columns are dropped and reported; the optimizer is
/// full-batch gradient descent with Armijo backtracking, so the recorded
/// objective never increases.
pub fn linear_corex(
    labels: &[String],
    columns: &[Vec<f64>],
    opts: &CorexOptions,
) -> Result<CorexModel> {
    if labels.len() != columns.len() {
        return Err(Error::DimensionMismatch {
            expected: labels.len(),
            actual: columns.len(),
        });
    }
    let mut dropped = Vec::new();
    let (z, kept_idx, n) = standardize(columns, &mut dropped);
    let dropped_columns: Vec<String> = dropped.iter().map(|&j| labels[j].clone()).collect();
    let p = z.ncols();
    if n < 2 || p < 2 {
        return Err(Error::EmptyInput(format!(
            "corex needs >= 2 samples and >= 2 non-constant columns (have {n} x {p})"
        )));
    }
    let k = opts.k.min(p.saturating_sub(1)).max(1);
    let mut warnings = Vec::new();
    if k != opts.k {
        warnings.push(format!("k clamped from {} to {k}", opts.k));
    }

    let mut sigma = correlation(&z);
    // A rank-deficient correlation matrix (fewer samples than columns) gets a
    // shrinkage ridge that keeps the unit diagonal.
    ensure_spd(&mut sigma, opts.ridge, &mut warnings)?;

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let scale = 1.0 / (p as f64).sqrt();
    let mut w = DMatrix::from_fn(p, k, |_, _| rng.gen_range(-scale..scale));

    let mut trace = Vec::with_capacity(opts.max_iter + 1);
    let mut current = objective(&sigma, &w, opts.ridge, &mut warnings)
        .ok_or(Error::NonFiniteObjective(0))?;
    trace.push(current);

    for iter in 0..opts.max_iter {
        let grad = gradient(&sigma, &w, opts.ridge, &mut warnings)
            .ok_or(Error::NonFiniteObjective(iter))?;
        let grad_norm2 = grad.iter().map(|g| g * g).sum::<f64>();
        if grad_norm2.sqrt() < opts.tol {
            break;
        }
        let mut step = opts.lr;
        let mut accepted = false;
        while step > 1e-14 {
            let candidate = &w - step * &grad;
            if let Some(value) = objective(&sigma, &candidate, opts.ridge, &mut warnings) {
                if value <= current - 1e-4 * step * grad_norm2 {
                    w = candidate;
                    current = value;
                    trace.push(current);
                    accepted = true;
                    break;
                }
            }
            step *= 0.5;
        }
        if !accepted {
            break;
        }
        let window = trace.len().saturating_sub(2);
        if trace.len() >= 2 && (trace[window] - current).abs() < opts.tol * current.abs().max(1.0)
        {
            break;
        }
    }

    canonicalize(&sigma, &mut w, opts.ridge, &mut warnings);

    let weights: Vec<Vec<f64>> = (0..p).map(|u| w.row(u).iter().copied().collect()).collect();
    Ok(CorexModel {
        weights,
        k,
        objective_trace: trace,
        column_labels: kept_idx.iter().map(|&j| labels[j].clone()).collect(),
        dropped_columns,
        warnings,
        seed: opts.seed,
    })
}

/// Standardize columns to zero mean, unit (population) variance. Returns the
/// sample matrix (n x p over kept columns), kept indices, and n.
fn standardize(
    columns: &[Vec<f64>],
    dropped: &mut Vec<usize>,
) -> (DMatrix<f64>, Vec<usize>, usize) {
    let n = columns.first().map_or(0, Vec::len);
    let mut kept = Vec::new();
    let mut data: Vec<Vec<f64>> = Vec::new();
    for (j, col) in columns.iter().enumerate() {
        let mean = col.iter().sum::<f64>() / n.max(1) as f64;
        let var = col.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n.max(1) as f64;
        if var <= 1e-24 {
            dropped.push(j);
            continue;
        }
        let sd = var.sqrt();
        kept.push(j);
        data.push(col.iter().map(|v| (v - mean) / sd).collect());
    }
    let p = data.len();
    let z = DMatrix::from_fn(n, p, |i, j| data[j][i]);
    (z, kept, n)
}

fn correlation(z: &DMatrix<f64>) -> DMatrix<f64> {
    let n = z.nrows() as f64;
    let mut r = z.transpose() * z / n;
    for i in 0..r.nrows() {
        r[(i, i)] = 1.0;
    }
    r
}

/// log det of an SPD matrix via Cholesky, adding an escalating ridge on
/// failure. Returns (logdet, matrix actually factored).
fn logdet_spd(
    m: &DMatrix<f64>,
    ridge: f64,
    warnings: &mut Vec<String>,
) -> Result<(f64, DMatrix<f64>)> {
    let mut eps = 0.0;
    loop {
        let candidate = if eps == 0.0 {
            m.clone()
        } else {
            let mut c = m.clone();
            for i in 0..c.nrows() {
                c[(i, i)] += eps;
            }
            c
        };
        if let Some(chol) = candidate.clone().cholesky() {
            let logdet = 2.0 * chol.l().diagonal().iter().map(|d| d.ln()).sum::<f64>();
            return Ok((logdet, candidate));
        }
        eps = if eps == 0.0 { ridge } else { eps * 10.0 };
        if eps > 1.0 {
            return Err(Error::Invariant(
                "matrix not positive definite even after ridge".into(),
            ));
        }
        warnings.push(format!("singular matrix: ridge {eps:e} applied"));
    }
}

fn ensure_spd(m: &mut DMatrix<f64>, ridge: f64, warnings: &mut Vec<String>) -> Result<()> {
    if m.clone().cholesky().is_some() {
        return Ok(());
    }
    let p = m.nrows();
    let mut eps = ridge;
    while eps <= 1.0 {
        let shrunk = {
            let mut c = m.clone() / (1.0 + eps);
            for i in 0..p {
                c[(i, i)] = 1.0;
            }
            c
        };
        if shrunk.clone().cholesky().is_some() {
            warnings.push(format!("correlation matrix shrunk by {eps:e} toward identity"));
            *m = shrunk;
            return Ok(());
        }
        eps *= 10.0;
    }
    Err(Error::Invariant(
        "correlation matrix not positive definite after shrinkage".into(),
    ))
}

/// J(W) = 1/2 sum_u ln S_uu - 1/2 ln det S + 1/2 sum_j ln M_jj - 1/2 ln det M
/// with M = Cov(Y) = W' Sigma W + I for the unit-noise channel Y = XW + eps,
/// and S = Sigma_{X|Y} = Sigma - Sigma W M^{-1} W' Sigma. The factor noise
/// keeps the joint covariance full rank, so both traces of the objective are
/// finite and J >= 0. Returns None when any intermediate is non-finite.
fn objective(
    sigma: &DMatrix<f64>,
    w: &DMatrix<f64>,
    ridge: f64,
    warnings: &mut Vec<String>,
) -> Option<f64> {
    let parts = factor_parts(sigma, w, ridge, warnings)?;
    let (m, s) = (&parts.m, &parts.s);
    let mut value = 0.0;
    for i in 0..s.nrows() {
        let d = s[(i, i)];
        if d <= 0.0 {
            return None;
        }
        value += 0.5 * d.ln();
    }
    value -= 0.5 * parts.logdet_s;
    for j in 0..m.nrows() {
        let d = m[(j, j)];
        if d <= 0.0 {
            return None;
        }
        value += 0.5 * d.ln();
    }
    value -= 0.5 * parts.logdet_m;
    value.is_finite().then_some(value)
}

struct FactorParts {
    m: DMatrix<f64>,
    m_inv: DMatrix<f64>,
    s: DMatrix<f64>,
    s_inv: DMatrix<f64>,
    logdet_m: f64,
    logdet_s: f64,
}

fn factor_parts(
    sigma: &DMatrix<f64>,
    w: &DMatrix<f64>,
    ridge: f64,
    warnings: &mut Vec<String>,
) -> Option<FactorParts> {
    let sw = sigma * w;
    let mut m = w.transpose() * &sw;
    for j in 0..m.nrows() {
        m[(j, j)] += 1.0;
    }
    let (logdet_m, m_reg) = logdet_spd(&m, ridge, warnings).ok()?;
    let m_inv = m_reg.clone().cholesky()?.inverse();
    let s = sigma - &sw * &m_inv * sw.transpose();
    let (logdet_s, s_reg) = logdet_spd(&s, ridge, warnings).ok()?;
    let s_inv = s_reg.clone().cholesky()?.inverse();
    Some(FactorParts {
        m: m_reg,
        m_inv,
        s: s_reg,
        s_inv,
        logdet_m,
        logdet_s,
    })
}

/// Analytic gradient of the objective:
/// grad = 2 Sigma (-G_S A + W (A' G_S A) + W G_M), A = Sigma W M^{-1},
/// G_S = (diag(1/S_uu) - S^{-1}) / 2, G_M = (diag(1/M_jj) - M^{-1}) / 2.
fn gradient(
    sigma: &DMatrix<f64>,
    w: &DMatrix<f64>,
    ridge: f64,
    warnings: &mut Vec<String>,
) -> Option<DMatrix<f64>> {
    let parts = factor_parts(sigma, w, ridge, warnings)?;
    let a = sigma * w * &parts.m_inv;

    let mut g_s = -&parts.s_inv;
    for i in 0..g_s.nrows() {
        g_s[(i, i)] += 1.0 / parts.s[(i, i)];
    }
    g_s *= 0.5;

    let mut g_m = -&parts.m_inv;
    for j in 0..g_m.nrows() {
        g_m[(j, j)] += 1.0 / parts.m[(j, j)];
    }
    g_m *= 0.5;

    let core = -&g_s * &a + w * (a.transpose() * &g_s * &a) + w * &g_m;
    let grad = 2.0 * sigma * core;
    grad.iter().all(|v| v.is_finite()).then_some(grad)
}

/// Pick a canonical basis among equivalent optima. Orthogonal rotations leave
/// TC(X|Y) unchanged and only matter when factor variances tie (the rotation
/// manifold of the optimum); a varimax rotation is applied when it does not
/// increase the objective, which resolves the tie toward a modular basis.
/// Column sign flips are always objective-neutral and fixed for determinism.
fn canonicalize(
    sigma: &DMatrix<f64>,
    w: &mut DMatrix<f64>,
    ridge: f64,
    warnings: &mut Vec<String>,
) {
    if let Some(before) = objective(sigma, w, ridge, warnings) {
        let mut rotated = w.clone();
        varimax(&mut rotated);
        if let Some(after) = objective(sigma, &rotated, ridge, warnings) {
            if after <= before + 1e-9 * before.abs().max(1.0) {
                *w = rotated;
            }
        }
    }

    // Sign convention: largest-magnitude loading per column is positive.
    for j in 0..w.ncols() {
        let mut best = 0usize;
        for i in 0..w.nrows() {
            if w[(i, j)].abs() > w[(best, j)].abs() {
                best = i;
            }
        }
        if w[(best, j)] < 0.0 {
            for i in 0..w.nrows() {
                w[(i, j)] = -w[(i, j)];
            }
        }
    }
}

/// Kaiser varimax by pairwise Jacobi rotations.
fn varimax(w: &mut DMatrix<f64>) {
    let (p, k) = (w.nrows(), w.ncols());
    if k < 2 || p == 0 {
        return;
    }
    for _sweep in 0..100 {
        let mut total_rotation = 0.0;
        for a in 0..k {
            for b in (a + 1)..k {
                let (mut s_u, mut s_v, mut s_c, mut s_d) = (0.0, 0.0, 0.0, 0.0);
                for i in 0..p {
                    let x = w[(i, a)];
                    let y = w[(i, b)];
                    let u = x * x - y * y;
                    let v = 2.0 * x * y;
                    s_u += u;
                    s_v += v;
                    s_c += u * u - v * v;
                    s_d += 2.0 * u * v;
                }
                let num = s_d - 2.0 * s_u * s_v / p as f64;
                let den = s_c - (s_u * s_u - s_v * s_v) / p as f64;
                let theta = 0.25 * num.atan2(den);
                if theta.abs() < 1e-10 {
                    continue;
                }
                total_rotation += theta.abs();
                let (sin, cos) = theta.sin_cos();
                for i in 0..p {
                    let x = w[(i, a)];
                    let y = w[(i, b)];
                    w[(i, a)] = cos * x + sin * y;
                    w[(i, b)] = -sin * x + cos * y;
                }
            }
        }
        if total_rotation < 1e-8 {
            break;
        }
    }
}
