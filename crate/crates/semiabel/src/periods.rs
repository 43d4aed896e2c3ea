//! From invariants to periods, and elliptic logarithms of points.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::elliptic::{eisenstein_invariants, wp_and_derivative, zeta_w, CurveInvariants};
use crate::error::{Error, Result};
use crate::lattice::Lattice;

/// A point of `y² = 4x³ − g₂x − g₃` in projective closure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EllipticPoint {
    Infinity,
    Affine { x: Complex64, y: Complex64 },
}

impl EllipticPoint {
    pub fn affine(x: Complex64, y: Complex64) -> Self {
        EllipticPoint::Affine { x, y }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, EllipticPoint::Infinity)
    }

    pub fn neg(&self) -> Self {
        match *self {
            EllipticPoint::Infinity => EllipticPoint::Infinity,
            EllipticPoint::Affine { x, y } => EllipticPoint::Affine { x, y: -y },
        }
    }

    /// Relative residual of the curve equation (0 for `O`).
    pub fn curve_residual(&self, c: &CurveInvariants) -> f64 {
        match *self {
            EllipticPoint::Infinity => 0.0,
            EllipticPoint::Affine { x, y } => {
                let scale = 1.0 + y.norm_sqr() + 4.0 * x.norm().powi(3) + (c.g2 * x).norm() + c.g3.norm();
                (y * y - c.cubic(x)).norm() / scale
            }
        }
    }

    pub fn check_on_curve(&self, c: &CurveInvariants) -> Result<()> {
        let residual = self.curve_residual(c);
        if residual.is_finite() && residual <= 1e-9 {
            Ok(())
        } else {
            Err(Error::NotOnCurve { residual })
        }
    }
}

/// A value of a multivalued integral together with the branch it was taken on:
/// `winding = (m, n, k)` counts added multiples of `ω₁`, `ω₂` and `2πi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchedValue {
    pub value: Complex64,
    pub winding: [i64; 3],
}

impl BranchedValue {
    pub fn principal(value: Complex64) -> Self {
        BranchedValue { value, winding: [0; 3] }
    }
}

/// First- and second-kind integrals from `O` to a point: `(z, ζ(z))`.
/// `w` is `None` exactly for the identity, where `ζ` has its pole.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneralizedAbelianLog {
    pub z: BranchedValue,
    pub w: Option<Complex64>,
}

impl GeneralizedAbelianLog {
    /// The same point logged along `z + mω₁ + nω₂`.
    pub fn shifted(&self, m: i64, n: i64, l: &Lattice) -> Result<Self> {
        let q = crate::elliptic::quasi_periods(l)?;
        let [wm, wn, k] = self.z.winding;
        Ok(GeneralizedAbelianLog {
            z: BranchedValue {
                value: self.z.value + l.point(m, n),
                winding: [wm + m, wn + n, k],
            },
            w: self.w.map(|w| w + q.eta1 * m as f64 + q.eta2 * n as f64),
        })
    }
}

/// Roots of `4x³ − g₂x − g₃`, Newton-polished.
pub fn cubic_roots(c: &CurveInvariants) -> [Complex64; 3] {
    let p = -c.g2 / 4.0;
    let q = -c.g3 / 4.0;
    let d = (q * q / 4.0 + p * p * p / 27.0).sqrt();
    let mut u3 = -q / 2.0 + d;
    if u3.norm() < (-q / 2.0 - d).norm() {
        u3 = -q / 2.0 - d;
    }
    let u = u3.powf(1.0 / 3.0);
    let rho = Complex64::from_polar(1.0, 2.0 * PI / 3.0);
    let mut roots = [Complex64::new(0.0, 0.0); 3];
    for (k, r) in roots.iter_mut().enumerate() {
        let uk = u * rho.powi(k as i32);
        let vk = if uk.norm() == 0.0 { Complex64::new(0.0, 0.0) } else { -p / (uk * 3.0) };
        *r = uk + vk;
        for _ in 0..4 {
            let f = c.cubic(*r);
            let df = *r * *r * 12.0 - c.g2;
            if df.norm() == 0.0 {
                break;
            }
            *r -= f / df;
        }
    }
    roots
}

/// Arithmetic–geometric mean with the optimal choice of square root at every step.
pub fn agm(mut a: Complex64, mut b: Complex64) -> Result<Complex64> {
    for _ in 0..100 {
        if (a - b).norm() <= 1e-15 * a.norm() {
            return Ok(a);
        }
        let a1 = (a + b) * 0.5;
        let mut b1 = (a * b).sqrt();
        if (a1 - b1).norm() > (a1 + b1).norm() {
            b1 = -b1;
        }
        a = a1;
        b = b1;
    }
    Err(Error::ConvergenceFailure { what: "AGM", iterations: 100 })
}

fn invariant_mismatch(l: &Lattice, c: &CurveInvariants) -> Result<f64> {
    let g = eisenstein_invariants(l)?;
    let s2 = c.g2.norm() + c.g3.norm().powf(2.0 / 3.0);
    let s3 = c.g3.norm() + c.g2.norm().powf(1.5);
    Ok(((g.g2 - c.g2).norm() / s2).max((g.g3 - c.g3).norm() / s3))
}

/// Gauss reduction; then `ω₁` is the shortest vector closest to the positive real
/// axis and `Re(ω₂/ω₁) ∈ (−½, ½]`.
fn normalize_basis(mut a: Complex64, mut b: Complex64) -> Result<Lattice> {
    for _ in 0..200 {
        if b.norm_sqr() < a.norm_sqr() {
            std::mem::swap(&mut a, &mut b);
        }
        let k = (b / a).re.round();
        if k == 0.0 {
            break;
        }
        b -= a * k;
    }
    let mut cands = vec![a, -a];
    if (b.norm() - a.norm()).abs() <= 1e-9 * a.norm() {
        cands.extend([b, -b, b - a, a - b, b + a, -a - b]);
    }
    let shortest = a.norm();
    let w1 = cands
        .into_iter()
        .filter(|v| v.norm() <= shortest * (1.0 + 1e-9))
        .min_by(|x, y| x.arg().abs().partial_cmp(&y.arg().abs()).unwrap())
        .unwrap();
    let l = Lattice::new(a, b)?;
    let coords = l.real_coordinates(w1);
    let n = coords.alpha2.round() as i64;
    let other = if n != 0 { l.omega1() } else { l.omega2() };
    let mut l = Lattice::new(w1, other)?;
    let mut w2 = l.omega2();
    for _ in 0..4 {
        let re = (w2 / w1).re;
        if re <= -0.5 + 1e-9 {
            w2 += w1;
        } else if re > 0.5 + 1e-9 {
            w2 -= w1;
        } else {
            break;
        }
    }
    l = Lattice::new(w1, w2)?;
    Ok(l)
}

/// A lattice with invariants `(g₂, g₃)`, via the cubic roots and AGM.
pub fn periods_from_invariants(c: &CurveInvariants) -> Result<Lattice> {
    let c = CurveInvariants::new(c.g2, c.g3)?;
    let e = cubic_roots(&c);
    let mut cands: Vec<Complex64> = Vec::new();
    for (i, j, k) in [(0, 1, 2), (0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0)] {
        let a = (e[i] - e[k]).sqrt();
        let b = (e[i] - e[j]).sqrt();
        for bb in [b, -b] {
            if let Ok(m) = agm(a, bb) {
                if m.norm() > 0.0 && m.is_finite() {
                    cands.push(Complex64::new(PI, 0.0) / m);
                }
            }
        }
    }
    let mut best: Option<(f64, Lattice)> = None;
    for i in 0..cands.len() {
        for j in i + 1..cands.len() {
            let Ok(l) = Lattice::new(cands[i], cands[j]) else { continue };
            let Ok(mis) = invariant_mismatch(&l, &c) else { continue };
            if best.as_ref().is_none_or(|(b, _)| mis < *b) {
                best = Some((mis, l));
            }
        }
    }
    let Some((mis, l)) = best else {
        return Err(Error::ConvergenceFailure {
            what: "period candidates",
            iterations: cands.len(),
        });
    };
    let l = polish(l, &c)?;
    let mis_after = invariant_mismatch(&l, &c)?;
    if mis_after.min(mis) > 1e-8 {
        return Err(Error::ConvergenceFailure {
            what: "period validation",
            iterations: cands.len(),
        });
    }
    normalize_basis(l.omega1(), l.omega2())
}

/// Newton refinement of `(ω₁, ω₂)` on the two invariant equations.
fn polish(mut l: Lattice, c: &CurveInvariants) -> Result<Lattice> {
    for _ in 0..3 {
        let g = eisenstein_invariants(&l)?;
        let r = [g.g2 - c.g2, g.g3 - c.g3];
        if invariant_mismatch(&l, c)? < 1e-15 {
            break;
        }
        let (w1, w2) = (l.omega1(), l.omega2());
        let h1 = w1 * 1e-6;
        let h2 = w2 * 1e-6;
        let d = |a: Complex64, b: Complex64| -> Result<CurveInvariants> { eisenstein_invariants(&Lattice::new(a, b)?) };
        let (p1, m1) = (d(w1 + h1, w2)?, d(w1 - h1, w2)?);
        let (p2, m2) = (d(w1, w2 + h2)?, d(w1, w2 - h2)?);
        let j = [
            [(p1.g2 - m1.g2) / (h1 * 2.0), (p2.g2 - m2.g2) / (h2 * 2.0)],
            [(p1.g3 - m1.g3) / (h1 * 2.0), (p2.g3 - m2.g3) / (h2 * 2.0)],
        ];
        let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        if det.norm() == 0.0 || !det.is_finite() {
            break;
        }
        let d1 = (j[1][1] * r[0] - j[0][1] * r[1]) / det;
        let d2 = (j[0][0] * r[1] - j[1][0] * r[0]) / det;
        let next = Lattice::new(w1 - d1, w2 - d2)?;
        if invariant_mismatch(&next, c)? >= invariant_mismatch(&l, c)? {
            break;
        }
        l = next;
    }
    Ok(l)
}

/// Carlson's symmetric integral `R_F(x, y, z)` by duplication.
pub fn carlson_rf(mut x: Complex64, mut y: Complex64, mut z: Complex64) -> Result<Complex64> {
    for _ in 0..200 {
        let a = (x + y + z) / 3.0;
        let dev = (a - x).norm().max((a - y).norm()).max((a - z).norm());
        if dev <= 1e-3 * a.norm() {
            let (dx, dy) = (Complex64::new(1.0, 0.0) - x / a, Complex64::new(1.0, 0.0) - y / a);
            let dz = -dx - dy;
            let e2 = dx * dy - dz * dz;
            let e3 = dx * dy * dz;
            let s = Complex64::new(1.0, 0.0) - e2 / 10.0 + e3 / 14.0 + e2 * e2 / 24.0 - e2 * e3 * 3.0 / 44.0;
            return Ok(s / a.sqrt());
        }
        let (sx, sy, sz) = (x.sqrt(), y.sqrt(), z.sqrt());
        let lam = sx * sy + sy * sz + sz * sx;
        x = (x + lam) * 0.25;
        y = (y + lam) * 0.25;
        z = (z + lam) * 0.25;
    }
    Err(Error::ConvergenceFailure {
        what: "Carlson R_F",
        iterations: 200,
    })
}

/// `exp_A(z) = (℘(z), ℘′(z))`, or `O` on the lattice.
pub fn curve_point(z: Complex64, l: &Lattice) -> Result<EllipticPoint> {
    match wp_and_derivative(z, l) {
        Ok((x, y)) => Ok(EllipticPoint::affine(x, y)),
        Err(Error::PoleAtLatticePoint) => Ok(EllipticPoint::Infinity),
        Err(e) => Err(e),
    }
}

fn fits(z: Complex64, x: Complex64, y: Complex64, l: &Lattice) -> Option<f64> {
    let (p, dp) = wp_and_derivative(z, l).ok()?;
    let sx = 1.0 + x.norm();
    let sy = 1.0 + y.norm() + x.norm().powf(1.5);
    Some(((p - x).norm() / sx).max((dp - y).norm() / sy))
}

fn newton_wp(mut z: Complex64, x: Complex64, y: Complex64, l: &Lattice, g2: Complex64) -> Complex64 {
    let step_floor = 1e-16 * l.omega1().norm();
    for _ in 0..30 {
        let Ok((p, dp)) = wp_and_derivative(z, l) else { break };
        if dp.norm() == 0.0 {
            break;
        }
        let dz = (p - x) / dp;
        z -= dz;
        if dz.norm() <= step_floor {
            break;
        }
    }
    for _ in 0..4 {
        let Ok((p, dp)) = wp_and_derivative(z, l) else { break };
        let ddp = p * p * 6.0 - g2 / 2.0;
        if ddp.norm() == 0.0 || (dp - y).norm() <= 1e-15 * (1.0 + y.norm()) {
            break;
        }
        let dz = (dp - y) / ddp;
        if dz.norm() > 0.05 * l.omega1().norm() {
            break;
        }
        z -= dz;
    }
    z
}

/// The principal elliptic logarithm: `z` in `[0,1)²` coordinates with
/// `℘(z) = x`, `℘′(z) = y`.
pub fn elliptic_log(p: &EllipticPoint, l: &Lattice) -> Result<BranchedValue> {
    let (x, y) = match *p {
        EllipticPoint::Infinity => return Ok(BranchedValue::principal(Complex64::new(0.0, 0.0))),
        EllipticPoint::Affine { x, y } => (x, y),
    };
    let c = eisenstein_invariants(l)?;
    p.check_on_curve(&c)?;
    let accept = 1e-9;
    let finish = |z: Complex64| BranchedValue::principal(l.reduce_to_fundamental(z).0);

    let halves = [l.omega1() * 0.5, l.omega2() * 0.5, (l.omega1() + l.omega2()) * 0.5];
    if y.norm() <= 1e-7 * (1.0 + x.norm().powf(1.5)) {
        for h in halves {
            if let Ok((e, _)) = wp_and_derivative(h, l) {
                if (e - x).norm() <= 1e-7 * (1.0 + x.norm()) {
                    return Ok(finish(h));
                }
            }
        }
    }

    let e = cubic_roots(&c);
    if let Ok(z0) = carlson_rf(x - e[0], x - e[1], x - e[2]) {
        if z0.is_finite() {
            let mut z = z0;
            if let Ok((_, dp)) = wp_and_derivative(z, l) {
                if (dp - y).norm() > (dp + y).norm() {
                    z = -z;
                }
            }
            let z = newton_wp(z, x, y, l, c.g2);
            if fits(z, x, y, l).is_some_and(|r| r < accept) {
                return Ok(finish(z));
            }
        }
    }

    let mut best: Option<(f64, Complex64)> = None;
    let k = 8;
    for i in 0..k {
        for j in 0..k {
            let seed = l.omega1() * ((i as f64 + 0.5) / k as f64) + l.omega2() * ((j as f64 + 0.5) / k as f64);
            let z = newton_wp(seed, x, y, l, c.g2);
            if let Some(r) = fits(z, x, y, l) {
                if best.is_none_or(|(b, _)| r < b) {
                    best = Some((r, z));
                }
            }
        }
    }
    match best {
        Some((r, z)) if r < accept => Ok(finish(z)),
        _ => Err(Error::ConvergenceFailure {
            what: "elliptic logarithm",
            iterations: k * k,
        }),
    }
}

/// `(z, ζ(z))` at the principal logarithm; `(0, None)` for `O`.
pub fn generalized_elliptic_log(p: &EllipticPoint, l: &Lattice) -> Result<GeneralizedAbelianLog> {
    let z = elliptic_log(p, l)?;
    if p.is_infinity() {
        return Ok(GeneralizedAbelianLog { z, w: None });
    }
    Ok(GeneralizedAbelianLog {
        z,
        w: Some(zeta_w(z.value, l)?),
    })
}
