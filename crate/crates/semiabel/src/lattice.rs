//! Oriented rank-2 lattices in ℂ, their duals and real coordinates.

use std::fmt;
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::elliptic::Constants;
use crate::error::{Error, Result};

pub(crate) const DEGENERACY_TOL: f64 = 1e-12;
const SNAP: f64 = 1e-12;

/// Period lattice `Λ = ℤω₁ + ℤω₂` with `Im(ω₂/ω₁) > 0`.
///
/// Lattice constants (invariants, quasi-periods, the reduced basis used for
/// series evaluation) are computed on first use and cached.
pub struct Lattice {
    omega1: Complex64,
    omega2: Complex64,
    normalized: bool,
    cache: OnceLock<Result<Constants>>,
}

impl Clone for Lattice {
    fn clone(&self) -> Self {
        Lattice {
            omega1: self.omega1,
            omega2: self.omega2,
            normalized: self.normalized,
            cache: self.cache.clone(),
        }
    }
}

impl fmt::Debug for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Lattice")
            .field("omega1", &self.omega1)
            .field("omega2", &self.omega2)
            .field("normalized", &self.normalized)
            .finish()
    }
}

impl PartialEq for Lattice {
    fn eq(&self, other: &Self) -> bool {
        self.omega1 == other.omega1 && self.omega2 == other.omega2
    }
}

/// Coordinates `(α₁, α₂)` with `z = α₁ω₁ + α₂ω₂`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RealCoordinates {
    pub alpha1: f64,
    pub alpha2: f64,
}

impl RealCoordinates {
    pub fn reconstruct(&self, l: &Lattice) -> Complex64 {
        l.omega1 * self.alpha1 + l.omega2 * self.alpha2
    }
}

/// Basis of `Λ* = {λ* : Im(conj(Λ)λ*) ⊂ ℤ}`.
///
/// The basis satisfies `Im(conj(ω_i)ω_j*) = J_ij` with `J = [[0, -1], [1, 0]]`,
/// i.e. `⟨ω₂, ω₁*⟩ = 1` and `⟨ω₁, ω₂*⟩ = -1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DualLattice {
    pub omega1_star: Complex64,
    pub omega2_star: Complex64,
}

impl DualLattice {
    /// Coordinates `(β₁, β₂)` of `z* = β₁ω₁* + β₂ω₂*`.
    pub fn real_coordinates(&self, zstar: Complex64) -> RealCoordinates {
        solve_coordinates(self.omega1_star, self.omega2_star, zstar)
    }

    pub fn point(&self, m: i64, n: i64) -> Complex64 {
        self.omega1_star * m as f64 + self.omega2_star * n as f64
    }

    /// Integer coordinates of `zstar` if it lies on `Λ*` within `tol`.
    pub fn lattice_coordinates(&self, zstar: Complex64, tol: f64) -> Option<(i64, i64)> {
        integral_coordinates(self.real_coordinates(zstar), tol)
    }
}

/// `⟨z, z*⟩ = Im(conj(z)·z*)`.
pub fn duality_product(z: Complex64, zstar: Complex64) -> f64 {
    (z.conj() * zstar).im
}

fn solve_coordinates(w1: Complex64, w2: Complex64, z: Complex64) -> RealCoordinates {
    let det = duality_product(w1, w2);
    RealCoordinates {
        alpha1: duality_product(z, w2) / det,
        alpha2: duality_product(w1, z) / det,
    }
}

fn integral_coordinates(c: RealCoordinates, tol: f64) -> Option<(i64, i64)> {
    let (m, n) = (c.alpha1.round(), c.alpha2.round());
    if (c.alpha1 - m).abs() <= tol && (c.alpha2 - n).abs() <= tol {
        Some((m as i64, n as i64))
    } else {
        None
    }
}

fn snapped_floor(a: f64) -> f64 {
    let r = a.round();
    if (a - r).abs() < SNAP * a.abs().max(1.0) {
        r
    } else {
        a.floor()
    }
}

impl Lattice {
    /// Builds an oriented lattice; `w2` is negated when `Im(w2/w1) < 0`.
    pub fn new(w1: Complex64, w2: Complex64) -> Result<Self> {
        if !(w1.is_finite() && w2.is_finite()) || w1.norm() == 0.0 || w2.norm() == 0.0 {
            return Err(Error::DegenerateLattice);
        }
        let ratio = w2 / w1;
        if ratio.im.abs() <= DEGENERACY_TOL * ratio.norm() {
            return Err(Error::DegenerateLattice);
        }
        let normalized = ratio.im < 0.0;
        let omega2 = if normalized { -w2 } else { w2 };
        Ok(Lattice {
            omega1: w1,
            omega2,
            normalized,
            cache: OnceLock::new(),
        })
    }

    pub fn omega1(&self) -> Complex64 {
        self.omega1
    }

    pub fn omega2(&self) -> Complex64 {
        self.omega2
    }

    /// Whether construction had to flip the sign of the second generator.
    pub fn orientation_normalized(&self) -> bool {
        self.normalized
    }

    pub fn tau(&self) -> Complex64 {
        self.omega2 / self.omega1
    }

    /// Positive covolume `Im(conj(ω₁)ω₂) = |Im(ω₁conj(ω₂))|`.
    pub fn covolume(&self) -> f64 {
        duality_product(self.omega1, self.omega2)
    }

    pub fn point(&self, m: i64, n: i64) -> Complex64 {
        self.omega1 * m as f64 + self.omega2 * n as f64
    }

    pub fn real_coordinates(&self, z: Complex64) -> RealCoordinates {
        solve_coordinates(self.omega1, self.omega2, z)
    }

    /// Integer coordinates of `z` if it lies on `Λ` within `tol` (in coordinate units).
    pub fn lattice_coordinates(&self, z: Complex64, tol: f64) -> Option<(i64, i64)> {
        integral_coordinates(self.real_coordinates(z), tol)
    }

    /// Writes `z = z0 + mω₁ + nω₂` with the coordinates of `z0` in `[0,1)²`.
    pub fn reduce_to_fundamental(&self, z: Complex64) -> (Complex64, i64, i64) {
        let c = self.real_coordinates(z);
        let m = snapped_floor(c.alpha1);
        let n = snapped_floor(c.alpha2);
        let a1 = (c.alpha1 - m).max(0.0);
        let a2 = (c.alpha2 - n).max(0.0);
        let z0 = if m == 0.0 && n == 0.0 { z } else { self.omega1 * a1 + self.omega2 * a2 };
        (z0, m as i64, n as i64)
    }

    /// Dual basis solving `Im(conj(ω_i)ω_j*) = J_ij`; explicitly `ω_j* = ω_j / Im(ω₁conj(ω₂))`.
    pub fn dual(&self) -> DualLattice {
        let c = -self.covolume();
        DualLattice {
            omega1_star: self.omega1 / c,
            omega2_star: self.omega2 / c,
        }
    }

    /// The self-duality map `ι(z*) = |Im(ω₁conj(ω₂))|·z*`, sending `Λ*` onto `Λ`
    /// (`ι(ω_j*) = -ω_j`).
    pub fn iota(&self, zstar: Complex64) -> Complex64 {
        zstar * self.covolume()
    }

    pub fn iota_inverse(&self, z: Complex64) -> Complex64 {
        z / self.covolume()
    }

    /// The lattice `cΛ`.
    pub fn scaled(&self, c: Complex64) -> Result<Self> {
        Lattice::new(self.omega1 * c, self.omega2 * c)
    }

    /// Rotation `u = |ω₁|/ω₁` taking `ω₁` to the positive real axis.
    pub fn rotation(&self) -> Complex64 {
        Complex64::new(self.omega1.norm(), 0.0) / self.omega1
    }

    /// The rotated lattice `uΛ` with `ω₁ ∈ ℝ₊`.
    pub fn rotated(&self) -> Self {
        let u = self.rotation();
        Lattice {
            omega1: Complex64::new(self.omega1.norm(), 0.0),
            omega2: self.omega2 * u,
            normalized: self.normalized,
            cache: OnceLock::new(),
        }
    }

    pub(crate) fn cache(&self) -> &OnceLock<Result<Constants>> {
        &self.cache
    }
}
