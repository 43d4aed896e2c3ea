//! Weierstrass `℘`, `℘′`, `ζ`, `σ`, Eisenstein invariants, quasi-periods, the
//! ℝ-linear quasi-period form `η(z)` and the normalized theta function.
//!
//! All series are nome expansions evaluated in a basis whose ratio `τ` lies in
//! the standard fundamental domain of SL₂(ℤ), so `|e^{iπτ}| ≤ e^{-π√3/2}`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lattice::Lattice;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };
const SERIES_EPS: f64 = 1e-16;
const SERIES_CAP: usize = 10_000;
/// Pole guard radius, relative to `|ω₁|`.
pub const POLE_GUARD: f64 = 1e-10;

/// Weierstrass invariants of `y² = 4x³ − g₂x − g₃`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveInvariants {
    pub g2: Complex64,
    pub g3: Complex64,
}

impl CurveInvariants {
    /// Validates that the cubic has distinct roots.
    pub fn new(g2: Complex64, g3: Complex64) -> Result<Self> {
        let c = CurveInvariants { g2, g3 };
        let scale = g2.norm().powi(3).max(g3.norm_sqr()).max(1.0);
        if !(g2.is_finite() && g3.is_finite()) || c.discriminant().norm() <= 1e-12 * scale {
            return Err(Error::SingularCurve);
        }
        Ok(c)
    }

    pub fn from_real(g2: f64, g3: f64) -> Result<Self> {
        Self::new(Complex64::new(g2, 0.0), Complex64::new(g3, 0.0))
    }

    /// `g₂³ − 27g₃²`.
    pub fn discriminant(&self) -> Complex64 {
        self.g2 * self.g2 * self.g2 - self.g3 * self.g3 * 27.0
    }

    /// `j = 1728·g₂³/Δ`.
    pub fn j_invariant(&self) -> Complex64 {
        self.g2 * self.g2 * self.g2 * 1728.0 / self.discriminant()
    }

    /// Right-hand side `4x³ − g₂x − g₃`.
    pub fn cubic(&self, x: Complex64) -> Complex64 {
        x * x * x * 4.0 - self.g2 * x - self.g3
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuasiPeriods {
    pub eta1: Complex64,
    pub eta2: Complex64,
}

/// The constant `πA` of the normalized theta function, with the rotation used.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaNormalization {
    pub pi_a: Complex64,
    /// `u = |ω₁|/ω₁`; the rotated frame is `z ↦ u·z`.
    pub rotation: Complex64,
}

/// Cached lattice data. The reduced basis `(w1, w2)` satisfies
/// `w1 = aω₁ + bω₂`, `w2 = cω₁ + dω₂` with `ad − bc = 1`.
#[derive(Debug, Clone)]
pub(crate) struct Constants {
    w1: Complex64,
    w2: Complex64,
    x: Complex64,
    eta1r: Complex64,
    eta2r: Complex64,
    invariants: (Complex64, Complex64),
    quasi: QuasiPeriods,
    guard: f64,
}

/// Sums terms `(value, bound)` until the a-priori bound on the term falls below
/// `SERIES_EPS` relative to the partial sum (or `scale`).
fn sum_series(scale: f64, mut term: impl FnMut(usize) -> (Complex64, f64), what: &'static str) -> Result<Complex64> {
    let mut s = Complex64::new(0.0, 0.0);
    for n in 1..=SERIES_CAP {
        let (t, bound) = term(n);
        s += t;
        if !t.is_finite() {
            break;
        }
        if bound <= SERIES_EPS * s.norm().max(scale) {
            return Ok(s);
        }
    }
    Err(Error::ConvergenceFailure { what, iterations: SERIES_CAP })
}

/// Σ f(n)·xⁿ/(1−xⁿ) scaled relative to `scale`.
fn lambert(x: Complex64, scale: f64, f: impl Fn(f64) -> f64, what: &'static str) -> Result<Complex64> {
    let mut xn = Complex64::new(1.0, 0.0);
    sum_series(
        scale,
        |n| {
            xn *= x;
            let t = xn * f(n as f64) / (Complex64::new(1.0, 0.0) - xn);
            (t, t.norm())
        },
        what,
    )
}

fn reduce_basis(l: &Lattice) -> Result<(Complex64, Complex64)> {
    let (w1, w2) = (l.omega1(), l.omega2());
    let (mut a, mut b, mut c, mut d) = (1i64, 0i64, 0i64, 1i64);
    let basis = |a: i64, b: i64, c: i64, d: i64| (w1 * a as f64 + w2 * b as f64, w1 * c as f64 + w2 * d as f64);
    for _ in 0..1000 {
        let (u, v) = basis(a, b, c, d);
        let k = (v / u).re.round() as i64;
        c -= k * a;
        d -= k * b;
        let (u, v) = basis(a, b, c, d);
        if (v / u).norm_sqr() < 1.0 - 1e-14 {
            (a, b, c, d) = (c, d, -a, -b);
        } else {
            return Ok((u, v));
        }
    }
    Err(Error::ConvergenceFailure {
        what: "basis reduction",
        iterations: 1000,
    })
}

impl Constants {
    fn compute(l: &Lattice) -> Result<Self> {
        let (w1, w2) = reduce_basis(l)?;
        let tau = w2 / w1;
        let nome = (I * PI * tau).exp();
        if nome.norm() >= 1.0 - 1e-6 {
            return Err(Error::ConvergenceFailure { what: "nome", iterations: 0 });
        }
        let x = nome * nome;
        let e2 = Complex64::new(1.0, 0.0) - lambert(x, 1.0 / 24.0, |n| n, "E2 series")? * 24.0;
        let e4 = Complex64::new(1.0, 0.0) + lambert(x, 1.0 / 240.0, |n| n.powi(3), "E4 series")? * 240.0;
        let e6 = Complex64::new(1.0, 0.0) - lambert(x, 1.0 / 504.0, |n| n.powi(5), "E6 series")? * 504.0;
        let g2 = e4 * (4.0 * PI.powi(4) / 3.0) / w1.powi(4);
        let g3 = e6 * (8.0 * PI.powi(6) / 27.0) / w1.powi(6);
        let eta1r = e2 * (PI * PI / 3.0) / w1;
        let mut k = Constants {
            w1,
            w2,
            x,
            eta1r,
            eta2r: Complex64::new(0.0, 0.0),
            invariants: (g2, g3),
            quasi: QuasiPeriods {
                eta1: Complex64::new(0.0, 0.0),
                eta2: Complex64::new(0.0, 0.0),
            },
            guard: POLE_GUARD * l.omega1().norm(),
        };
        k.eta2r = k.zeta_series(w2 * 0.5)? * 2.0;
        k.quasi = QuasiPeriods {
            eta1: k.eta_linear(l.omega1()),
            eta2: k.eta_linear(l.omega2()),
        };
        Ok(k)
    }

    fn coords(&self, z: Complex64) -> (f64, f64) {
        let det = (self.w1.conj() * self.w2).im;
        ((z.conj() * self.w2).im / det, (self.w1.conj() * z).im / det)
    }

    fn eta_linear(&self, z: Complex64) -> Complex64 {
        let (a, b) = self.coords(z);
        self.eta1r * a + self.eta2r * b
    }

    /// `z = zc + m·w1 + n·w2` with the reduced coordinates of `zc` in `[-½, ½]²`.
    fn centre(&self, z: Complex64) -> (Complex64, i64, i64) {
        let (a, b) = self.coords(z);
        let (m, n) = (a.round(), b.round());
        if m == 0.0 && n == 0.0 {
            (z, 0, 0)
        } else {
            (self.w1 * (a - m) + self.w2 * (b - n), m as i64, n as i64)
        }
    }

    fn v(&self, zc: Complex64) -> (Complex64, Complex64) {
        let v = zc * PI / self.w1;
        (v, (I * v * 2.0).exp())
    }

    fn zeta_series(&self, zc: Complex64) -> Result<Complex64> {
        let (v, s) = self.v(zc);
        let cot = v.cos() / v.sin();
        let (mut xn, mut sp, mut sm) = (Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0));
        let sinv = s.inv();
        let tail = sum_series(
            cot.norm(),
            |_| {
                xn *= self.x;
                sp *= s;
                sm *= sinv;
                let a = xn / (1.0 - xn);
                (a * (sp - sm) / (I * 2.0), a.norm() * sp.norm().max(sm.norm()))
            },
            "zeta series",
        )?;
        let p = Complex64::new(PI, 0.0) / self.w1;
        Ok(self.eta1r * zc / self.w1 + p * (cot + tail * 4.0))
    }

    fn wp_series(&self, zc: Complex64) -> Result<(Complex64, Complex64)> {
        let (v, s) = self.v(zc);
        let sin = v.sin();
        let csc2 = (sin * sin).inv();
        let cot = v.cos() / sin;
        let (mut xn, mut sp, mut sm) = (Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0));
        let sinv = s.inv();
        let mut acc_d = Complex64::new(0.0, 0.0);
        let acc = sum_series(
            csc2.norm(),
            |n| {
                xn *= self.x;
                sp *= s;
                sm *= sinv;
                let a = xn / (1.0 - xn) * n as f64;
                acc_d += a * n as f64 * (sp - sm) / (I * 2.0);
                (a * (sp + sm) * 0.5, a.norm() * n as f64 * sp.norm().max(sm.norm()))
            },
            "wp series",
        )?;
        let p = Complex64::new(PI, 0.0) / self.w1;
        let wp = -self.eta1r / self.w1 + p * p * (csc2 - acc * 8.0);
        let wpd = p * p * p * (csc2 * cot * -2.0 + acc_d * 16.0);
        Ok((wp, wpd))
    }

    /// `log σ(zc)` (some branch); `None` at `zc = 0`.
    fn log_sigma_series(&self, zc: Complex64) -> Result<Option<Complex64>> {
        if zc == Complex64::new(0.0, 0.0) {
            return Ok(None);
        }
        let (v, s) = self.v(zc);
        let one = Complex64::new(1.0, 0.0);
        let sinv = s.inv();
        let mut xn = one;
        let prod = sum_series(
            1.0,
            |_| {
                xn *= self.x;
                let t = (one - xn * s).ln() + (one - xn * sinv).ln() - (one - xn).ln() * 2.0;
                (t, xn.norm() * (s.norm().max(sinv.norm()) + 1.0) * 2.0)
            },
            "sigma product",
        )?;
        Ok(Some((self.w1 / PI).ln() + self.eta1r * zc * zc / (self.w1 * 2.0) + v.sin().ln() + prod))
    }

    fn check_pole(&self, zc: Complex64) -> Result<()> {
        if zc.norm() < self.guard {
            Err(Error::PoleAtLatticePoint)
        } else {
            Ok(())
        }
    }

    /// `log σ(z)` with the automorphy of `σ` undoing the reduction.
    fn log_sigma(&self, z: Complex64) -> Result<Option<Complex64>> {
        let (zc, m, n) = self.centre(z);
        let Some(ls) = self.log_sigma_series(zc)? else { return Ok(None) };
        if m == 0 && n == 0 {
            return Ok(Some(ls));
        }
        let lambda = self.w1 * m as f64 + self.w2 * n as f64;
        let eta = self.eta1r * m as f64 + self.eta2r * n as f64;
        let psi = if m % 2 == 0 && n % 2 == 0 { 0.0 } else { PI };
        Ok(Some(ls + eta * (zc + lambda * 0.5) + I * psi))
    }
}

pub(crate) fn constants(l: &Lattice) -> Result<&Constants> {
    l.cache().get_or_init(|| Constants::compute(l)).as_ref().map_err(Clone::clone)
}

/// `g₂ = 60·Σ'λ⁻⁴`, `g₃ = 140·Σ'λ⁻⁶`.
pub fn eisenstein_invariants(l: &Lattice) -> Result<CurveInvariants> {
    let k = constants(l)?;
    Ok(CurveInvariants {
        g2: k.invariants.0,
        g3: k.invariants.1,
    })
}

/// `η_i = 2ζ(ω_i/2)`.
pub fn quasi_periods(l: &Lattice) -> Result<QuasiPeriods> {
    Ok(constants(l)?.quasi)
}

pub fn wp(z: Complex64, l: &Lattice) -> Result<Complex64> {
    Ok(wp_and_derivative(z, l)?.0)
}

pub fn wp_prime(z: Complex64, l: &Lattice) -> Result<Complex64> {
    Ok(wp_and_derivative(z, l)?.1)
}

/// `(℘(z), ℘′(z))` from one series pass.
pub fn wp_and_derivative(z: Complex64, l: &Lattice) -> Result<(Complex64, Complex64)> {
    let k = constants(l)?;
    let (zc, _, _) = k.centre(z);
    k.check_pole(zc)?;
    k.wp_series(zc)
}

pub fn zeta_w(z: Complex64, l: &Lattice) -> Result<Complex64> {
    let k = constants(l)?;
    let (zc, m, n) = k.centre(z);
    k.check_pole(zc)?;
    Ok(k.zeta_series(zc)? + k.eta1r * m as f64 + k.eta2r * n as f64)
}

pub fn sigma_w(z: Complex64, l: &Lattice) -> Result<Complex64> {
    Ok(match log_sigma(z, l)? {
        Some(ls) => ls.exp(),
        None => Complex64::new(0.0, 0.0),
    })
}

/// A logarithm of `σ(z)`, or `None` when `σ(z) = 0` exactly.
pub fn log_sigma(z: Complex64, l: &Lattice) -> Result<Option<Complex64>> {
    constants(l)?.log_sigma(z)
}

/// `η(z) = α₁η₁ + α₂η₂`.
pub fn eta_linear(z: Complex64, l: &Lattice) -> Result<Complex64> {
    Ok(constants(l)?.eta_linear(z))
}

/// `(η₁/ω₁)z − 2πi·Im(z)/|Im(ω₁conj(ω₂))|` evaluated in the frame where `ω₁ ∈ ℝ₊`,
/// then mapped back to the caller's frame.
pub fn eta_linear_closed_form(z: Complex64, l: &Lattice) -> Result<Complex64> {
    let u = l.rotation();
    let lr = l.rotated();
    let q = quasi_periods(&lr)?;
    let zr = z * u;
    let val = q.eta1 / lr.omega1() * zr - I * 2.0 * PI * zr.im / l.covolume();
    Ok(val * u)
}

/// `ψ(λ)·exp(η(λ)(z + λ/2))` with `ψ(λ) = 1` iff `λ ∈ 2Λ`.
pub fn sigma_automorphy_factor(lambda: Complex64, z: Complex64, l: &Lattice) -> Result<Complex64> {
    let (m, n) = l.lattice_coordinates(lambda, 1e-8).ok_or(Error::NotALatticePoint)?;
    let psi = if m % 2 == 0 && n % 2 == 0 { 1.0 } else { -1.0 };
    let eta = eta_linear(l.point(m, n), l)?;
    Ok((eta * (z + lambda * 0.5)).exp() * psi)
}

/// `πA = η₁·Im(ω₂) − π` in the rotated frame.
pub fn theta_normalization(l: &Lattice) -> Result<ThetaNormalization> {
    let lr = l.rotated();
    let q = quasi_periods(&lr)?;
    Ok(ThetaNormalization {
        pi_a: q.eta1 * lr.omega2().im - PI,
        rotation: l.rotation(),
    })
}

/// `θ(z) = σ(z)·exp(−πA·z²/(2·|Im(ω₁conj(ω₂))|))`, evaluated at the rotated point `u·z`
/// for the rotated lattice `uΛ`.
pub fn theta_normalized(z: Complex64, l: &Lattice) -> Result<Complex64> {
    let norm = theta_normalization(l)?;
    let lr = l.rotated();
    let zr = z * norm.rotation;
    let s = sigma_w(zr, &lr)?;
    Ok(s * (-norm.pi_a * zr * zr / (2.0 * l.covolume())).exp())
}

/// `ψ(λ)·exp(π·conj(λ)(z + λ/2)/|Im(ω₁conj(ω₂))|)`, the automorphy factor of `θ`,
/// for `λ`, `z` already in the rotated frame.
pub fn theta_automorphy_factor(lambda_r: Complex64, z_r: Complex64, l: &Lattice) -> Result<Complex64> {
    let lr = l.rotated();
    let (m, n) = lr.lattice_coordinates(lambda_r, 1e-8).ok_or(Error::NotALatticePoint)?;
    let psi = if m % 2 == 0 && n % 2 == 0 { 1.0 } else { -1.0 };
    Ok((lambda_r.conj() * (z_r + lambda_r * 0.5) * PI / l.covolume()).exp() * psi)
}
