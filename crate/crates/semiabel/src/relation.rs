//! Integer relation detection by LLL reduction of a scaled embedding.
//!
//! For values `v₁, …, vₙ` the rows `[eᵢ | S·Re vᵢ, S·Im vᵢ]` (rounded to
//! integers) are reduced; every reduced row is a candidate coefficient vector
//! and is accepted only after direct re-evaluation of `Σ cᵢvᵢ` in floating point.

use num_complex::Complex64;
use num_integer::Integer;

/// Largest list length accepted by the detector.
pub const MAX_VALUES: usize = 12;

/// An integer vector annihilating the inputs within tolerance.
#[derive(Debug, Clone, PartialEq)]
pub struct RelationCertificate {
    pub coefficients: Vec<i64>,
    /// `|Σ cᵢvᵢ|` evaluated directly.
    pub residual: f64,
    /// `max |cᵢ|`.
    pub height: i64,
    /// The same relation is found again at `tol/100`.
    pub verified_at_higher_precision: bool,
}

impl RelationCertificate {
    pub fn evaluate(&self, values: &[Complex64]) -> Complex64 {
        self.coefficients.iter().zip(values).map(|(&c, v)| v * c as f64).sum()
    }
}

fn scale_for(tol: f64) -> f64 {
    (1e3 / tol).clamp(1e6, 1e13)
}

fn gram_schmidt(b: &[Vec<i128>]) -> (Vec<Vec<f64>>, Vec<f64>) {
    let n = b.len();
    let mut star: Vec<Vec<f64>> = Vec::with_capacity(n);
    let mut norms = Vec::with_capacity(n);
    let mut mu = vec![vec![0.0; n]; n];
    for i in 0..n {
        let mut v: Vec<f64> = b[i].iter().map(|&x| x as f64).collect();
        for j in 0..i {
            let m = if norms[j] > 0.0 { dot(&v, &star[j]) / norms[j] } else { 0.0 };
            mu[i][j] = m;
            for (a, s) in v.iter_mut().zip(&star[j]) {
                *a -= m * s;
            }
        }
        norms.push(dot(&v, &v));
        star.push(v);
    }
    (mu, norms)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn lll(b: &mut [Vec<i128>]) {
    const DELTA: f64 = 0.99;
    let n = b.len();
    if n < 2 {
        return;
    }
    let (mut mu, mut norms) = gram_schmidt(b);
    let mut k = 1;
    let mut guard = 0usize;
    while k < n && guard < 100_000 {
        guard += 1;
        for j in (0..k).rev() {
            let q = mu[k][j].round();
            if q != 0.0 {
                let qi = q as i128;
                let (head, tail) = b.split_at_mut(k);
                for (x, y) in tail[0].iter_mut().zip(&head[j]) {
                    *x -= qi * y;
                }
                let (mu_head, mu_tail) = mu.split_at_mut(k);
                for i in 0..j {
                    mu_tail[0][i] -= q * mu_head[j][i];
                }
                mu_tail[0][j] -= q;
            }
        }
        if norms[k] >= (DELTA - mu[k][k - 1] * mu[k][k - 1]) * norms[k - 1] {
            k += 1;
        } else {
            b.swap(k, k - 1);
            (mu, norms) = gram_schmidt(b);
            k = (k - 1).max(1);
        }
    }
}

fn primitive(mut c: Vec<i64>) -> Vec<i64> {
    let g = c.iter().fold(0i64, |g, &x| g.gcd(&x));
    if g > 1 {
        c.iter_mut().for_each(|x| *x /= g);
    }
    if c.iter().find(|&&x| x != 0).is_some_and(|&x| x < 0) {
        c.iter_mut().for_each(|x| *x = -*x);
    }
    c
}

fn detect_once(values: &[Complex64], max_height: i64, tol: f64) -> Option<(Vec<i64>, f64)> {
    let n = values.len();
    let m = values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    if !m.is_finite() {
        return None;
    }
    if let Some(i) = values.iter().position(|v| v.norm() <= tol * m.max(1.0)) {
        let mut c = vec![0; n];
        c[i] = 1;
        return Some((c, values[i].norm()));
    }
    let s = scale_for(tol) / m;
    let mut b: Vec<Vec<i128>> = (0..n)
        .map(|i| {
            let mut row = vec![0i128; n + 2];
            row[i] = 1;
            row[n] = (values[i].re * s).round() as i128;
            row[n + 1] = (values[i].im * s).round() as i128;
            row
        })
        .collect();
    lll(&mut b);
    let bound = tol * m.max(1.0);
    let mut best: Option<(Vec<i64>, f64, i64, i128)> = None;
    for row in &b {
        if row[..n].iter().any(|&x| x.abs() > max_height as i128) || row[..n].iter().all(|&x| x == 0) {
            continue;
        }
        let c = primitive(row[..n].iter().map(|&x| x as i64).collect());
        let r: Complex64 = c.iter().zip(values).map(|(&k, v)| v * k as f64).sum();
        let r = r.norm();
        if r > bound {
            continue;
        }
        let h = c.iter().map(|x| x.abs()).max().unwrap_or(0);
        let l1: i128 = c.iter().map(|&x| x.abs() as i128).sum();
        if best.as_ref().is_none_or(|(_, _, bh, bl)| (h, l1) < (*bh, *bl)) {
            best = Some((c, r, h, l1));
        }
    }
    best.map(|(c, r, _, _)| (c, r))
}

/// Finds an integer relation `Σ cᵢvᵢ ≈ 0` with `max |cᵢ| ≤ max_height`.
///
/// A candidate is accepted when `|Σ cᵢvᵢ| ≤ tol·max(1, maxᵢ|vᵢ|)`. Lists longer
/// than [`MAX_VALUES`] are rejected with `None`.
pub fn detect_integer_relation(values: &[Complex64], max_height: i64, tol: f64) -> Option<RelationCertificate> {
    if values.is_empty() || values.len() > MAX_VALUES || tol.is_nan() || tol <= 0.0 {
        return None;
    }
    let (coefficients, residual) = detect_once(values, max_height, tol)?;
    let verified_at_higher_precision = detect_once(values, max_height, tol / 100.0).is_some_and(|(c, _)| c == coefficients);
    let height = coefficients.iter().map(|x| x.abs()).max().unwrap_or(0);
    Some(RelationCertificate {
        coefficients,
        residual,
        height,
        verified_at_higher_precision,
    })
}

/// ℚ-rank of a list of complex numbers, found greedily.
#[derive(Debug, Clone, PartialEq)]
pub struct RankResult {
    pub rank: usize,
    /// Indices of the values kept as a basis.
    pub basis: Vec<usize>,
    /// One certificate per rejected value, coefficients indexed like the input.
    pub certificates: Vec<RelationCertificate>,
    /// Some relation was found only at the working tolerance and was discarded.
    pub borderline: bool,
}

/// Greedy ℚ-rank: each value joins the basis unless a verified relation with a
/// nonzero coefficient on it exists against the current basis.
pub fn rational_rank(values: &[Complex64], max_height: i64, tol: f64) -> RankResult {
    let mut basis: Vec<usize> = Vec::new();
    let mut certificates = Vec::new();
    let mut borderline = false;
    for i in 0..values.len() {
        let mut sub: Vec<Complex64> = basis.iter().map(|&j| values[j]).collect();
        sub.push(values[i]);
        match detect_integer_relation(&sub, max_height, tol) {
            Some(cert) if *cert.coefficients.last().unwrap() != 0 && cert.verified_at_higher_precision => {
                let mut coefficients = vec![0; values.len()];
                for (k, &j) in basis.iter().chain(std::iter::once(&i)).enumerate() {
                    coefficients[j] = cert.coefficients[k];
                }
                certificates.push(RelationCertificate { coefficients, ..cert });
            }
            Some(_) => {
                borderline = true;
                basis.push(i);
            }
            None => basis.push(i),
        }
    }
    RankResult {
        rank: basis.len(),
        basis,
        certificates,
        borderline,
    }
}
