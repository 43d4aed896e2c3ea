//! The analytic Weil pairing on `Lie E × Lie E*`, Poincaré automorphy factors,
//! the `f̃` ratio identity and the Hodge-realization pairing.
//!
//! Dual-side arguments are given in the dual frame (`Λ*` coordinates) and are
//! carried to `Lie E` by `ι(z*) = |Im(ω₁conj(ω₂))|·z*` wherever a formula mixes
//! them with primal quantities. With `c = |Im(ω₁conj(ω₂))|` this makes
//! `Im(conj(z)·ι(z*))/c = ⟨z, z*⟩`, so the pairing is `e^{2πi⟨z, z*⟩}`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::elliptic::{eta_linear, log_sigma};
use crate::error::{Error, Result};
use crate::lattice::{duality_product, Lattice};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };
const LATTICE_TOL: f64 = 1e-8;

/// A complex number of modulus one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitCircleValue {
    pub value: Complex64,
}

impl UnitCircleValue {
    fn new(value: Complex64) -> Self {
        debug_assert!((value.norm() - 1.0).abs() < 1e-9);
        UnitCircleValue { value }
    }

    /// `k/N` with `value ≈ e^{2πik/N}`, when such `k` exists within `tol`.
    pub fn root_of_unity_index(&self, n: u32, tol: f64) -> Option<u32> {
        let turns = self.value.arg() / (2.0 * PI) * n as f64;
        let k = turns.round();
        let target = Complex64::from_polar(1.0, 2.0 * PI * k / n as f64);
        ((self.value - target).norm() < tol).then(|| k.rem_euclid(n as f64) as u32)
    }
}

/// `W(z, z*) = e^{2πi·Im(conj(z)·ι(z*))/|Im(ω₁conj(ω₂))|}`.
pub fn weil_pairing(z: Complex64, zstar: Complex64, l: &Lattice) -> UnitCircleValue {
    let w = l.iota(zstar);
    UnitCircleValue::new((I * 2.0 * PI * duality_product(z, w) / l.covolume()).exp())
}

/// The same pairing through real coordinates: `e^{2πi(α₂β₁ − α₁β₂)}` with
/// `z = α₁ω₁ + α₂ω₂`, `z* = β₁ω₁* + β₂ω₂*`.
pub fn weil_pairing_coordinates(z: Complex64, zstar: Complex64, l: &Lattice) -> UnitCircleValue {
    let a = l.real_coordinates(z);
    let b = l.dual().real_coordinates(zstar);
    let e = a.alpha2 * b.alpha1 - a.alpha1 * b.alpha2;
    UnitCircleValue::new((I * 2.0 * PI * e).exp())
}

/// `W(p, q*)^N` for `N`-torsion `p`, `q*`; an `N`-th root of unity.
pub fn torsion_weil_pairing(p: Complex64, qstar: Complex64, n: u32, l: &Lattice) -> Result<UnitCircleValue> {
    if n == 0 {
        return Err(Error::NotTorsion);
    }
    let nf = n as f64;
    if l.lattice_coordinates(p * nf, LATTICE_TOL).is_none() || l.dual().lattice_coordinates(qstar * nf, LATTICE_TOL).is_none() {
        return Err(Error::NotTorsion);
    }
    let e = duality_product(p, l.iota(qstar)) / l.covolume() * nf;
    Ok(UnitCircleValue::new((I * 2.0 * PI * e).exp()))
}

fn check_pair(lambda: Complex64, lambdastar: Complex64, l: &Lattice) -> Result<()> {
    if l.lattice_coordinates(lambda, LATTICE_TOL).is_none() || l.dual().lattice_coordinates(lambdastar, LATTICE_TOL).is_none() {
        return Err(Error::NotALatticePoint);
    }
    Ok(())
}

fn poincare_exponent(lambda: Complex64, lambdastar: Complex64, z: Complex64, zstar: Complex64, l: &Lattice) -> Complex64 {
    let mu = l.iota(lambdastar);
    let w = l.iota(zstar);
    (lambda.conj() * mu + z * mu.conj() + lambda.conj() * w) * PI / l.covolume()
}

/// `a(λ, λ*, z, z*) = exp(π(conj(λ)λ* + z·conj(λ*) + conj(λ)z*)/|Im(ω₁conj(ω₂))|)`,
/// dual-side arguments pulled back through `ι`.
pub fn poincare_automorphy(lambda: Complex64, lambdastar: Complex64, z: Complex64, zstar: Complex64, l: &Lattice) -> Result<Complex64> {
    check_pair(lambda, lambdastar, l)?;
    Ok(poincare_exponent(lambda, lambdastar, z, zstar, l).exp())
}

/// `a₀ = a·conj(a)⁻¹`.
pub fn poincare_a0(lambda: Complex64, lambdastar: Complex64, z: Complex64, zstar: Complex64, l: &Lattice) -> Result<UnitCircleValue> {
    check_pair(lambda, lambdastar, l)?;
    let e = poincare_exponent(lambda, lambdastar, z, zstar, l);
    Ok(UnitCircleValue::new((I * 2.0 * e.im).exp()))
}

/// `e^{2πi·Im(z·conj(λ*) + conj(λ)z*)/|Im(ω₁conj(ω₂))|}`.
pub fn poincare_a0_closed_form(lambda: Complex64, lambdastar: Complex64, z: Complex64, zstar: Complex64, l: &Lattice) -> UnitCircleValue {
    let mu = l.iota(lambdastar);
    let w = l.iota(zstar);
    let e = (z * mu.conj() + lambda.conj() * w).im / l.covolume();
    UnitCircleValue::new((I * 2.0 * PI * e).exp())
}

fn log_sigma_nonzero(z: Complex64, l: &Lattice) -> Result<Complex64> {
    if l.lattice_coordinates(z, 1e-10).is_some() {
        return Err(Error::PoleAtLatticePoint);
    }
    log_sigma(z, l)?.ok_or(Error::PoleAtLatticePoint)
}

/// `f̃_w(z) = σ(z+w)/(σ(z)σ(w))·e^{−η(w)z}` for primal `w`.
pub fn f_tilde(z: Complex64, w: Complex64, l: &Lattice) -> Result<Complex64> {
    let s = log_sigma_nonzero(z + w, l)? - log_sigma_nonzero(z, l)? - log_sigma_nonzero(w, l)?;
    Ok((s - eta_linear(w, l)? * z).exp())
}

/// `f̃_{z*}(z)/f̃_z(z*)` with `z*` pulled back through `ι`.
pub fn ratio_f_tilde(z: Complex64, zstar: Complex64, l: &Lattice) -> Result<Complex64> {
    let w = l.iota(zstar);
    Ok(f_tilde(z, w, l)? / f_tilde(w, z, l)?)
}

/// `exp(η(z)z* − η(z*)z)` with `z*` pulled back through `ι`.
pub fn ratio_eta_form(z: Complex64, zstar: Complex64, l: &Lattice) -> Result<Complex64> {
    let w = l.iota(zstar);
    Ok((eta_linear(z, l)? * w - eta_linear(w, l)? * z).exp())
}

/// `η(λ)λ* − η(λ*)λ` with `λ* ∈ Λ*` pulled back through `ι`; lies in `2πiℤ`.
pub fn hodge_weil(lambda: Complex64, lambdastar: Complex64, l: &Lattice) -> Result<Complex64> {
    check_pair(lambda, lambdastar, l)?;
    let w = l.iota(lambdastar);
    Ok(eta_linear(lambda, l)? * w - eta_linear(w, l)? * lambda)
}
