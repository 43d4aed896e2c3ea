//! Serre's function, the exponential and logarithms of an extension `G` of an
//! elliptic curve by `𝔾_m`, third-kind integrals and period matrices.
//!
//! `G(ℂ)` is represented birationally as `E(ℂ) × ℂ^×`; the extension is
//! parametrized by a point of the dual curve `E* = ℂ/Λ*`, which is carried to
//! `Lie E` through `ι(z*) = |Im(ω₁conj(ω₂))|·z*`.

use std::f64::consts::PI;
use std::ops::{Index, IndexMut};

use num_complex::Complex64;

use crate::elliptic::{log_sigma, quasi_periods, zeta_w, POLE_GUARD};
use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::periods::{curve_point, elliptic_log, generalized_elliptic_log, BranchedValue, EllipticPoint};
use crate::quadrature::gauss_legendre;

const TWO_PI_I: Complex64 = Complex64 { re: 0.0, im: 2.0 * PI };

/// Extension parameter: a point `Q` of `E*` and its logarithm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtensionParam {
    /// Logarithm of `Q` in `Lie E* = ℂ` (dual frame).
    pub q_log: Complex64,
    /// `ι(q_log)`, the primal-frame value consumed by `f_q`.
    pub q: Complex64,
    /// `Q` on the dual curve, in Weierstrass coordinates for `Λ*`.
    pub q_point: EllipticPoint,
}

impl ExtensionParam {
    /// From a dual-frame logarithm `q* ∈ Lie E*`.
    pub fn from_dual_log(q_log: Complex64, l: &Lattice) -> Result<Self> {
        let q = l.iota(q_log);
        if l.lattice_coordinates(q, 1e-9).is_some() {
            return Err(Error::PoleAtLatticePoint);
        }
        let dual = dual_as_lattice(l)?;
        Ok(ExtensionParam {
            q_log,
            q,
            q_point: curve_point(q_log, &dual)?,
        })
    }

    /// From a primal-frame value `q = ι(q*)`.
    pub fn from_primal(q: Complex64, l: &Lattice) -> Result<Self> {
        Self::from_dual_log(l.iota_inverse(q), l)
    }

    /// From a point of `E*` given in Weierstrass coordinates of `Λ*`.
    pub fn from_dual_point(p: &EllipticPoint, l: &Lattice) -> Result<Self> {
        let dual = dual_as_lattice(l)?;
        Self::from_dual_log(elliptic_log(p, &dual)?.value, l)
    }

    /// From a point of `E`, identified with `E*` through `ι`.
    pub fn from_curve_point(p: &EllipticPoint, l: &Lattice) -> Result<Self> {
        Self::from_primal(elliptic_log(p, l)?.value, l)
    }
}

/// `Λ*` as a lattice (same orientation as `Λ`).
pub fn dual_as_lattice(l: &Lattice) -> Result<Lattice> {
    let d = l.dual();
    Lattice::new(d.omega1_star, d.omega2_star)
}

/// A point of `G`: base point `P = π(R)` and fiber coordinates, one per extension
/// parameter.
#[derive(Debug, Clone, PartialEq)]
pub struct SemiAbelianPoint {
    pub base: EllipticPoint,
    pub fibers: Vec<Complex64>,
}

impl SemiAbelianPoint {
    pub fn new(base: EllipticPoint, fiber: Complex64) -> Self {
        SemiAbelianPoint { base, fibers: vec![fiber] }
    }

    pub fn fiber(&self) -> Complex64 {
        self.fibers[0]
    }
}

/// `(z, ζ(z), t)`: first-, second- and third-kind integrals from `O` to `R`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneralizedSemiAbelianLog {
    pub z: BranchedValue,
    pub w: Option<Complex64>,
    pub t: BranchedValue,
}

/// Dense complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ComplexMatrix {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn row(&self, r: usize) -> &[Complex64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    /// Determinant by partial-pivot elimination.
    pub fn determinant(&self) -> Complex64 {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a = self.data.clone();
        let mut det = Complex64::new(1.0, 0.0);
        for k in 0..n {
            let p = (k..n).max_by(|&i, &j| a[i * n + k].norm().partial_cmp(&a[j * n + k].norm()).unwrap()).unwrap();
            if a[p * n + k].norm() == 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            if p != k {
                for c in 0..n {
                    a.swap(k * n + c, p * n + c);
                }
                det = -det;
            }
            let piv = a[k * n + k];
            det *= piv;
            for i in k + 1..n {
                let f = a[i * n + k] / piv;
                for c in k..n {
                    let v = a[k * n + c];
                    a[i * n + c] -= f * v;
                }
            }
        }
        det
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        &mut self.data[r * self.cols + c]
    }
}

/// Ω_G in the elliptic case.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodMatrixG {
    /// `((ω₁, η₁), (ω₂, η₂))`.
    pub omega_a: [[Complex64; 2]; 2],
    /// `η_jq − ω_jζ(q)`, `j = 1, 2`.
    pub third_kind_column: [Complex64; 2],
    pub two_pi_i: Complex64,
}

impl PeriodMatrixG {
    /// The 3×3 matrix with rows `(ω_j, η_j, η_jq − ω_jζ(q))` and `(0, 0, 2πi)`.
    pub fn matrix(&self) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(3, 3);
        for j in 0..2 {
            m[(j, 0)] = self.omega_a[j][0];
            m[(j, 1)] = self.omega_a[j][1];
            m[(j, 2)] = self.third_kind_column[j];
        }
        m[(2, 2)] = self.two_pi_i;
        m
    }

    pub fn det_omega_a(&self) -> Complex64 {
        self.omega_a[0][0] * self.omega_a[1][1] - self.omega_a[1][0] * self.omega_a[0][1]
    }
}

fn near_lattice(z: Complex64, l: &Lattice) -> Option<(i64, i64)> {
    let (z0, m, n) = l.reduce_to_fundamental(z);
    let guard = POLE_GUARD * l.omega1().norm();
    let corners = [(0, 0), (1, 0), (0, 1), (1, 1)];
    corners
        .iter()
        .find(|&&(a, b)| (z0 - l.point(a, b)).norm() < guard)
        .map(|&(a, b)| (m + a, n + b))
}

/// `f_q(z) = σ(z+q)/(σ(z)σ(q))·e^{−ζ(q)z}`. Returns exactly 0 at `z ≡ −q`.
pub fn serre_fq(z: Complex64, q: &ExtensionParam, l: &Lattice) -> Result<Complex64> {
    serre_fq_primal(z, q.q, l)
}

pub(crate) fn serre_fq_primal(z: Complex64, q: Complex64, l: &Lattice) -> Result<Complex64> {
    if near_lattice(z, l).is_some() || near_lattice(q, l).is_some() {
        return Err(Error::PoleAtLatticePoint);
    }
    if near_lattice(z + q, l).is_some() {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let (Some(a), Some(b), Some(c)) = (log_sigma(z + q, l)?, log_sigma(z, l)?, log_sigma(q, l)?) else {
        return Ok(Complex64::new(0.0, 0.0));
    };
    Ok((a - b - c - zeta_w(q, l)? * z).exp())
}

/// `(η₁q − ω₁ζ(q), η₂q − ω₂ζ(q))`.
pub fn quasi_quasi_periods(q: &ExtensionParam, l: &Lattice) -> Result<(Complex64, Complex64)> {
    qq_primal(q.q, l)
}

pub(crate) fn qq_primal(q: Complex64, l: &Lattice) -> Result<(Complex64, Complex64)> {
    let e = quasi_periods(l)?;
    let zq = zeta_w(q, l)?;
    Ok((e.eta1 * q - l.omega1() * zq, e.eta2 * q - l.omega2() * zq))
}

/// `exp_G(z, t) = ((℘(z), ℘′(z)), e^t·f_q(z))`; on the lattice, `(O, e^{t+mqq₁+nqq₂})`.
pub fn exp_g(z: Complex64, t: Complex64, q: &ExtensionParam, l: &Lattice) -> Result<SemiAbelianPoint> {
    if let Some((m, n)) = near_lattice(z, l) {
        let (q1, q2) = quasi_quasi_periods(q, l)?;
        return Ok(SemiAbelianPoint::new(EllipticPoint::Infinity, (t + q1 * m as f64 + q2 * n as f64).exp()));
    }
    let f = serre_fq(z, q, l)?;
    if f == Complex64::new(0.0, 0.0) {
        return Err(Error::ZeroOfSection);
    }
    Ok(SemiAbelianPoint::new(curve_point(z, l)?, t.exp() * f))
}

/// `exp_G` for an extension by `𝔾_m^s` given as `s` independent parameters.
pub fn exp_g_multi(z: Complex64, ts: &[Complex64], qs: &[ExtensionParam], l: &Lattice) -> Result<SemiAbelianPoint> {
    assert_eq!(ts.len(), qs.len());
    let mut fibers = Vec::with_capacity(qs.len());
    let mut base = curve_point(z, l)?;
    for (t, q) in ts.iter().zip(qs) {
        let p = exp_g(z, *t, q, l)?;
        base = p.base;
        fibers.push(p.fiber());
    }
    Ok(SemiAbelianPoint { base, fibers })
}

fn third_kind(base: &EllipticPoint, z: Complex64, fiber: Complex64, q: Complex64, l: &Lattice) -> Result<BranchedValue> {
    if fiber == Complex64::new(0.0, 0.0) {
        return Err(Error::FiberZero);
    }
    if base.is_infinity() {
        return Ok(BranchedValue::principal(fiber.ln()));
    }
    let f = serre_fq_primal(z, q, l)?;
    if f == Complex64::new(0.0, 0.0) {
        return Err(Error::ZeroOfSection);
    }
    Ok(BranchedValue::principal((fiber / f).ln()))
}

/// `log_G(R) = (z, t)`: principal elliptic logarithm of the base and
/// `t = Log(fiber / f_q(z))`.
pub fn log_g(r: &SemiAbelianPoint, q: &ExtensionParam, l: &Lattice) -> Result<(BranchedValue, BranchedValue)> {
    let z = elliptic_log(&r.base, l)?;
    let t = third_kind(&r.base, z.value, r.fiber(), q.q, l)?;
    Ok((z, t))
}

/// `log̃_G(R) = (z, ζ(z), t)`.
pub fn generalized_log_g(r: &SemiAbelianPoint, q: &ExtensionParam, l: &Lattice) -> Result<GeneralizedSemiAbelianLog> {
    let g = generalized_elliptic_log(&r.base, l)?;
    let t = third_kind(&r.base, g.z.value, r.fiber(), q.q, l)?;
    Ok(GeneralizedSemiAbelianLog { z: g.z, w: g.w, t })
}

/// Third-kind components of `R` for each of several parameters.
pub fn third_kind_values(r: &SemiAbelianPoint, qs: &[ExtensionParam], l: &Lattice) -> Result<Vec<Complex64>> {
    let z = elliptic_log(&r.base, l)?.value;
    qs.iter().zip(&r.fibers).map(|(q, f)| Ok(third_kind(&r.base, z, *f, q.q, l)?.value)).collect()
}

/// Generators of the kernel of `(z, t) ↦ exp_G(z, t)`:
/// `(ω₁, −qq₁)`, `(ω₂, −qq₂)`, `(0, 2πi)`.
pub fn exp_g_kernel(q: &ExtensionParam, l: &Lattice) -> Result<[(Complex64, Complex64); 3]> {
    let (q1, q2) = quasi_quasi_periods(q, l)?;
    Ok([(l.omega1(), -q1), (l.omega2(), -q2), (Complex64::new(0.0, 0.0), TWO_PI_I)])
}

/// Distance of `(dz, dt)` from the kernel lattice of `exp_G`, measured after
/// removing the nearest kernel element.
pub fn kernel_residual(dz: Complex64, dt: Complex64, q: &ExtensionParam, l: &Lattice) -> Result<f64> {
    let c = l.real_coordinates(dz);
    let (m, n) = (c.alpha1.round(), c.alpha2.round());
    let (q1, q2) = quasi_quasi_periods(q, l)?;
    let rz = dz - l.point(m as i64, n as i64);
    let rt = dt + q1 * m + q2 * n;
    let k = (rt.im / (2.0 * PI)).round();
    let rt = rt - TWO_PI_I * k;
    Ok(rz.norm().max(rt.norm()))
}

pub fn period_matrix_g(q: &ExtensionParam, l: &Lattice) -> Result<PeriodMatrixG> {
    let e = quasi_periods(l)?;
    let (q1, q2) = quasi_quasi_periods(q, l)?;
    Ok(PeriodMatrixG {
        omega_a: [[l.omega1(), e.eta1], [l.omega2(), e.eta2]],
        third_kind_column: [q1, q2],
        two_pi_i: TWO_PI_I,
    })
}

/// `Ω_M` for `n` points and `s` parameters, of size `(n+2+s)²`:
/// `[[Id_n, log̃_G(R_ℓ)], [0, Ω_G]]` where `Ω_G` has rows
/// `(ω_j, η_j, (η_jq_k − ω_jζ(q_k))_k)` and `(0, 0, 2πi·e_k)`.
pub fn period_matrix_m(points: &[SemiAbelianPoint], qs: &[ExtensionParam], l: &Lattice) -> Result<ComplexMatrix> {
    let (n, s) = (points.len(), qs.len());
    let size = n + 2 + s;
    let mut m = ComplexMatrix::zeros(size, size);
    let e = quasi_periods(l)?;
    for (i, p) in points.iter().enumerate() {
        m[(i, i)] = Complex64::new(1.0, 0.0);
        let g = generalized_elliptic_log(&p.base, l)?;
        m[(i, n)] = g.z.value;
        m[(i, n + 1)] = g.w.unwrap_or(Complex64::new(f64::INFINITY, 0.0));
        let t = third_kind_values(p, qs, l)?;
        for (k, tk) in t.into_iter().enumerate() {
            m[(i, n + 2 + k)] = tk;
        }
    }
    m[(n, n)] = l.omega1();
    m[(n, n + 1)] = e.eta1;
    m[(n + 1, n)] = l.omega2();
    m[(n + 1, n + 1)] = e.eta2;
    for (k, q) in qs.iter().enumerate() {
        let (q1, q2) = quasi_quasi_periods(q, l)?;
        m[(n, n + 2 + k)] = q1;
        m[(n + 1, n + 2 + k)] = q2;
        m[(n + 2 + k, n + 2 + k)] = TWO_PI_I;
    }
    Ok(m)
}

/// `∫ dlog f_q` along `z0 → mid → z0 + ω_j` by Gauss–Legendre (`nodes` per
/// segment). The midpoint is moved off the straight line by `10⁻³|ω₁|` when a
/// zero or pole of `f_q` lies within `10⁻²|ω₁|` of the segment.
pub fn third_kind_contour(q: &ExtensionParam, j: usize, z0: Complex64, nodes: usize, l: &Lattice) -> Result<Complex64> {
    let w = if j == 1 { l.omega1() } else { l.omega2() };
    let end = z0 + w;
    let zq = zeta_w(q.q, l)?;
    let scale = l.omega1().norm();
    let singular = |p: Complex64| -> bool {
        let seg = end - z0;
        let u = ((p - z0) * seg.conj()).re / seg.norm_sqr();
        let closest = z0 + seg * u.clamp(0.0, 1.0);
        [Complex64::new(0.0, 0.0), -q.q].iter().any(|&s| {
            let (r, _, _) = l.reduce_to_fundamental(closest - s);
            [(0, 0), (1, 0), (0, 1), (1, 1)].iter().any(|&(a, b)| (r - l.point(a, b)).norm() < 1e-2 * scale)
        })
    };
    let mut mid = (z0 + end) * 0.5;
    if (0..=64).any(|k| singular(z0 + w * (k as f64 / 64.0))) {
        let normal = Complex64::new(0.0, 1.0) * w / w.norm();
        mid += normal * 1e-3 * scale;
    }
    let rule = gauss_legendre(nodes);
    let mut total = Complex64::new(0.0, 0.0);
    for (a, b) in [(z0, mid), (mid, end)] {
        let half = (b - a) * 0.5;
        let centre = (a + b) * 0.5;
        for &(x, wt) in &rule {
            let z = centre + half * x;
            total += half * wt * (zeta_w(z + q.q, l)? - zeta_w(z, l)? - zq);
        }
    }
    Ok(total)
}

/// Start point for [`third_kind_contour`] maximizing the distance of the path
/// `z0 + sω_j` from the zeros and poles of `f_q`.
pub fn contour_start(q: &ExtensionParam, j: usize, l: &Lattice) -> Complex64 {
    let c = l.real_coordinates(-q.q);
    let other = if j == 1 { c.alpha2 } else { c.alpha1 };
    let s = other - other.floor();
    let (lo, hi) = if s > 0.5 { (0.0, s) } else { (s, 1.0) };
    let height = 0.5 * (lo + hi);
    if j == 1 {
        l.omega1() * 0.123 + l.omega2() * height
    } else {
        l.omega1() * height + l.omega2() * 0.123
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elliptic::CurveInvariants;
    use crate::elliptic::{sigma_w, wp_and_derivative};
    use crate::periods::periods_from_invariants;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn lattices() -> Vec<Lattice> {
        vec![
            periods_from_invariants(&CurveInvariants::from_real(4.0, 0.0).unwrap()).unwrap(),
            Lattice::new(c(1.0, 0.0), Complex64::from_polar(1.0, PI / 3.0)).unwrap(),
            Lattice::new(c(0.8, 0.3), c(-1.7, 2.9)).unwrap(),
        ]
    }

    fn mod_2pi_i(z: Complex64) -> Complex64 {
        z - TWO_PI_I * (z.im / (2.0 * PI)).round()
    }

    #[test]
    fn serre_residue_and_zero() {
        for l in lattices() {
            let q = ExtensionParam::from_primal(l.omega1() * 0.31 + l.omega2() * 0.17, &l).unwrap();
            let z = l.omega1() * 1e-4;
            assert!((z * serre_fq(z, &q, &l).unwrap() - 1.0).norm() < 1e-3);
            assert_eq!(serre_fq(-q.q, &q, &l).unwrap(), c(0.0, 0.0));
            assert!(matches!(serre_fq(l.omega2(), &q, &l), Err(Error::PoleAtLatticePoint)));
            let direct =
                sigma_w(z * 1e3 + q.q, &l).unwrap() / (sigma_w(z * 1e3, &l).unwrap() * sigma_w(q.q, &l).unwrap()) * (-zeta_w(q.q, &l).unwrap() * z * 1e3).exp();
            assert!((serre_fq(z * 1e3, &q, &l).unwrap() / direct - 1.0).norm() < 1e-12);
        }
    }

    #[test]
    fn quasi_periodicity_of_fq() {
        for l in lattices() {
            for q in [c(0.31, 0.17), c(0.5, 0.0), c(0.72, 0.44)] {
                let q = ExtensionParam::from_primal(l.omega1() * q.re + l.omega2() * q.im, &l).unwrap();
                let (q1, q2) = quasi_quasi_periods(&q, &l).unwrap();
                let z = l.omega1() * 0.21 + l.omega2() * 0.63;
                for (w, qq) in [(l.omega1(), q1), (l.omega2(), q2)] {
                    let ratio = serre_fq(z + w, &q, &l).unwrap() / serre_fq(z, &q, &l).unwrap();
                    assert!((ratio / qq.exp() - 1.0).norm() < 1e-8);
                    assert!(mod_2pi_i(ratio.ln() - qq).norm() < 1e-8);
                }
            }
        }
    }

    #[test]
    fn contour_oracle() {
        for l in lattices() {
            for q in [c(0.31, 0.17), c(0.5, 0.5), c(0.83, 0.06)] {
                let q = ExtensionParam::from_primal(l.omega1() * q.re + l.omega2() * q.im, &l).unwrap();
                let (q1, q2) = quasi_quasi_periods(&q, &l).unwrap();
                for (j, qq) in [(1, q1), (2, q2)] {
                    let integral = third_kind_contour(&q, j, contour_start(&q, j, &l), 256, &l).unwrap();
                    assert!(mod_2pi_i(integral - qq).norm() < 1e-6, "{l:?} {j}");
                }
                let z0 = l.omega2() * 0.5;
                let integral = third_kind_contour(&q, 1, z0, 256, &l).unwrap();
                assert!(mod_2pi_i(integral - q1).norm() < 1e-6);
            }
        }
    }

    #[test]
    fn two_torsion_parameter() {
        for l in lattices() {
            let d = l.dual();
            let q = ExtensionParam::from_dual_log(d.omega1_star * 0.5, &l).unwrap();
            assert!((q.q + l.omega1() * 0.5).norm() < 1e-12);
            let (q1, q2) = quasi_quasi_periods(&q, &l).unwrap();
            let z = l.omega1() * 0.3 + l.omega2() * 0.4;
            let r1 = serre_fq(z + l.omega1(), &q, &l).unwrap() / serre_fq(z, &q, &l).unwrap();
            let r2 = serre_fq(z + l.omega2(), &q, &l).unwrap() / serre_fq(z, &q, &l).unwrap();
            assert!((r1 - q1.exp()).norm() < 1e-8 * r1.norm());
            assert!((r2 - q2.exp()).norm() < 1e-8 * r2.norm());
            // Both multipliers are ±1.
            assert!(mod_2pi_i(q1 * 2.0).norm() < 1e-9);
            assert!(mod_2pi_i(q2 * 2.0).norm() < 1e-9);
            assert!((r1.norm() - 1.0).abs() < 1e-8 && (r2.norm() - 1.0).abs() < 1e-8);
        }
    }

    #[test]
    fn exp_g_definition_and_kernel() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for l in lattices() {
            let q = ExtensionParam::from_primal(l.omega1() * 0.27 + l.omega2() * 0.61, &l).unwrap();
            let z = l.omega1() * 0.3;
            let r = exp_g(z, c(0.0, 0.0), &q, &l).unwrap();
            let (x, y) = wp_and_derivative(z, &l).unwrap();
            assert_eq!(r.base, EllipticPoint::affine(x, y));
            assert!((r.fiber() - serre_fq(z, &q, &l).unwrap()).norm() < 1e-14);
            let kernel = exp_g_kernel(&q, &l).unwrap();
            for _ in 0..5 {
                let z = l.omega1() * rng.gen_range(0.0..1.0) + l.omega2() * rng.gen_range(0.0..1.0);
                let t = c(rng.gen_range(-1.0..1.0), rng.gen_range(-3.0..3.0));
                let r = exp_g(z, t, &q, &l).unwrap();
                for (kz, kt) in kernel {
                    let r2 = exp_g(z + kz, t + kt, &q, &l).unwrap();
                    assert!((r2.fiber() / r.fiber() - 1.0).norm() < 1e-8);
                    if let (EllipticPoint::Affine { x, y }, EllipticPoint::Affine { x: x2, y: y2 }) = (r.base, r2.base) {
                        assert!((x - x2).norm() < 1e-8 * (1.0 + x.norm()));
                        assert!((y - y2).norm() < 1e-8 * (1.0 + y.norm()));
                    }
                }
            }
            let o = exp_g(l.omega1(), c(0.5, 0.0), &q, &l).unwrap();
            assert!(o.base.is_infinity());
            let (q1, _) = quasi_quasi_periods(&q, &l).unwrap();
            assert!((o.fiber() - (c(0.5, 0.0) + q1).exp()).norm() < 1e-12 * o.fiber().norm());
            assert!(matches!(exp_g(-q.q, c(0.0, 0.0), &q, &l), Err(Error::ZeroOfSection)));
        }
    }

    #[test]
    fn log_round_trip_and_branches() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for l in lattices() {
            let q = ExtensionParam::from_primal(l.omega1() * 0.27 + l.omega2() * 0.61, &l).unwrap();
            for _ in 0..20 {
                let z = l.omega1() * rng.gen_range(-2.0..2.0) + l.omega2() * rng.gen_range(-2.0..2.0);
                let t = c(rng.gen_range(-1.0..1.0), rng.gen_range(-7.0..7.0));
                let r = exp_g(z, t, &q, &l).unwrap();
                let (zb, tb) = log_g(&r, &q, &l).unwrap();
                assert!(kernel_residual(zb.value - z, tb.value - t, &q, &l).unwrap() < 1e-8);
                let back = exp_g(zb.value, tb.value, &q, &l).unwrap();
                assert!((back.fiber() / r.fiber() - 1.0).norm() < 1e-8);
            }
            let s = c(2.0, -1.0);
            let (z0, t0) = log_g(&SemiAbelianPoint::new(EllipticPoint::Infinity, s), &q, &l).unwrap();
            assert_eq!(z0.value, c(0.0, 0.0));
            assert!((t0.value - s.ln()).norm() < 1e-15);
            assert!(matches!(
                log_g(&SemiAbelianPoint::new(EllipticPoint::Infinity, c(0.0, 0.0)), &q, &l),
                Err(Error::FiberZero)
            ));
            // Logging along z + ω₁ shifts t by −qq₁ modulo 2πi.
            let z = l.omega1() * 0.4 + l.omega2() * 0.2;
            let r = exp_g(z, c(0.1, 0.2), &q, &l).unwrap();
            let (_, t) = log_g(&r, &q, &l).unwrap();
            let (q1, _) = quasi_quasi_periods(&q, &l).unwrap();
            let shifted = (r.fiber() / serre_fq(z + l.omega1(), &q, &l).unwrap()).ln();
            assert!(mod_2pi_i(shifted - (t.value - q1)).norm() < 1e-8);
        }
    }

    #[test]
    fn generalized_log_projections() {
        for l in lattices() {
            let q = ExtensionParam::from_primal(l.omega1() * 0.27 + l.omega2() * 0.61, &l).unwrap();
            let r = exp_g(l.omega1() * 0.35 + l.omega2() * 0.15, c(0.3, -0.2), &q, &l).unwrap();
            let g = generalized_log_g(&r, &q, &l).unwrap();
            let e = generalized_elliptic_log(&r.base, &l).unwrap();
            assert_eq!((g.z, g.w), (e.z, e.w));
            assert_eq!(g.t, log_g(&r, &q, &l).unwrap().1);
            let qp = quasi_periods(&l).unwrap();
            let (q1, q2) = quasi_quasi_periods(&q, &l).unwrap();
            let gens = [(l.omega1(), qp.eta1, -q1), (l.omega2(), qp.eta2, -q2), (c(0.0, 0.0), c(0.0, 0.0), TWO_PI_I)];
            for (dz, dw, dt) in gens {
                let z = g.z.value + dz;
                let r2 = exp_g(z, g.t.value + dt, &q, &l).unwrap();
                assert!((r2.fiber() / r.fiber() - 1.0).norm() < 1e-8);
                assert!((zeta_w(z, &l).unwrap() - (g.w.unwrap() + dw)).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn factor_system_periodicity() {
        for l in lattices() {
            let q = ExtensionParam::from_primal(l.omega1() * 0.27 + l.omega2() * 0.61, &l).unwrap();
            let zp = l.omega1() * 0.13 + l.omega2() * 0.37;
            let h = |z: Complex64| -> Complex64 { serre_fq(z + zp, &q, &l).unwrap() / (serre_fq(z, &q, &l).unwrap() * serre_fq(zp, &q, &l).unwrap()) };
            let z = l.omega1() * 0.41 + l.omega2() * 0.22;
            for w in [l.omega1(), l.omega2()] {
                assert!((h(z + w) / h(z) - 1.0).norm() < 1e-8);
            }
        }
    }

    #[test]
    fn third_kind_additivity() {
        for l in lattices() {
            let q = ExtensionParam::from_primal(l.omega1() * 0.27 + l.omega2() * 0.61, &l).unwrap();
            let (z1, t1) = (l.omega1() * 0.2 + l.omega2() * 0.1, c(0.3, 0.1));
            let (z2, t2) = (l.omega1() * 0.45 + l.omega2() * 0.7, c(-0.2, 2.5));
            let a = log_g(&exp_g(z1, t1, &q, &l).unwrap(), &q, &l).unwrap();
            let b = log_g(&exp_g(z2, t2, &q, &l).unwrap(), &q, &l).unwrap();
            let s = log_g(&exp_g(z1 + z2, t1 + t2, &q, &l).unwrap(), &q, &l).unwrap();
            let res = kernel_residual(a.0.value + b.0.value - s.0.value, a.1.value + b.1.value - s.1.value, &q, &l);
            assert!(res.unwrap() < 1e-8);
        }
    }

    #[test]
    fn period_matrices() {
        for l in lattices() {
            let q = ExtensionParam::from_primal(l.omega1() * 0.27 + l.omega2() * 0.61, &l).unwrap();
            let pg = period_matrix_g(&q, &l).unwrap();
            assert!((pg.det_omega_a() + TWO_PI_I).norm() < 1e-9);
            let m = pg.matrix();
            assert_eq!(m[(2, 2)], TWO_PI_I);
            assert!((m.determinant() + TWO_PI_I * TWO_PI_I).norm() < 1e-8);
            let r = exp_g(l.omega1() * 0.35, c(0.1, 0.0), &q, &l).unwrap();
            let om = period_matrix_m(&[r.clone(), r], &[q], &l).unwrap();
            assert_eq!(om.rows, 5);
            for i in 0..2 {
                for j in 0..2 {
                    assert_eq!(om[(i, j)], if i == j { c(1.0, 0.0) } else { c(0.0, 0.0) });
                }
            }
            assert_eq!(om[(4, 4)], TWO_PI_I);
            assert_eq!(om.row(2)[2..], m.row(0)[..]);
        }
    }

    #[test]
    fn extension_param_frames() {
        let l = Lattice::new(c(1.1, 0.2), c(0.4, 1.7)).unwrap();
        let p = ExtensionParam::from_primal(l.omega1() * 0.3 + l.omega2() * 0.45, &l).unwrap();
        let again = ExtensionParam::from_dual_point(&p.q_point, &l).unwrap();
        assert!(l.lattice_coordinates(again.q - p.q, 1e-9).is_some());
        let pt = curve_point(p.q, &l).unwrap();
        let via_curve = ExtensionParam::from_curve_point(&pt, &l).unwrap();
        assert!(l.lattice_coordinates(via_curve.q - p.q, 1e-9).is_some());
        assert!(ExtensionParam::from_dual_log(l.dual().omega2_star, &l).is_err());
    }
}
