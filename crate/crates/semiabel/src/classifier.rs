//! Dimension invariants of 1-motives `M = [u: ℤⁿ → G]` over an elliptic curve.
//!
//! Torsion, complex multiplication, `End ⊗ ℚ`-dependence and deficiency are
//! decided numerically (or exactly for rational points), then assembled into
//! `dim B`, `dim Z(1)`, `dim UR(M) = 2·dim B + dim Z(1)` and
//! `dim Gal_mot(M) = dim UR(M) + dim Gal_mot(E)`.

use std::f64::consts::{E, LN_2, PI, SQRT_2};
use std::fmt;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Zero};

use crate::elliptic::{eisenstein_invariants, CurveInvariants};
use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::periods::{curve_point, elliptic_log, periods_from_invariants, EllipticPoint};
use crate::relation::{detect_integer_relation, rational_rank, RankResult, RelationCertificate, MAX_VALUES};
use crate::semiabelian::{exp_g, quasi_quasi_periods, third_kind_values, ExtensionParam, SemiAbelianPoint};

const TWO_PI_I: Complex64 = Complex64 { re: 0.0, im: 2.0 * PI };

/// Tolerances and search limits of the classifier.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassifierConfig {
    pub tol: f64,
    pub max_height: i64,
    pub n_max: u32,
}

impl Default for ClassifierConfig {
    fn default() -> Self {
        ClassifierConfig {
            tol: 1e-9,
            max_height: 1000,
            n_max: 64,
        }
    }
}

/// How a decision was reached; ordered from strongest to weakest.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Confidence {
    CertifiedTorsion,
    Numeric,
    NumericBorderline,
}

impl fmt::Display for Confidence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Confidence::CertifiedTorsion => "certified-torsion",
            Confidence::Numeric => "numeric",
            Confidence::NumericBorderline => "numeric-borderline",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TorsionResult {
    pub order: Option<u32>,
    pub confidence: Confidence,
}

type RationalPoint = Option<(BigRational, BigRational)>;

fn exact_real(z: Complex64) -> Option<BigRational> {
    if z.im == 0.0 {
        BigRational::from_f64(z.re)
    } else {
        None
    }
}

fn rational_add(p: &RationalPoint, q: &RationalPoint, g2: &BigRational) -> RationalPoint {
    let (Some((x1, y1)), Some((x2, y2))) = (p, q) else {
        return p.clone().or_else(|| q.clone());
    };
    let lambda = if x1 == x2 {
        if (y1 + y2).is_zero() {
            return None;
        }
        let three = BigRational::from_integer(3.into());
        let four = BigRational::from_integer(4.into());
        (three * four * x1 * x1 - g2) / (y1 + y1)
    } else {
        (y2 - y1) / (x2 - x1)
    };
    let four = BigRational::from_integer(4.into());
    let x3 = &lambda * &lambda / four - x1 - x2;
    let y3 = -(y1 + &lambda * (&x3 - x1));
    Some((x3, y3))
}

/// Exact order of a rational point on a curve over ℚ; `Some(None)` certifies
/// infinite order (a rational torsion point has order at most 12).
fn exact_torsion(p: &EllipticPoint, curve: &CurveInvariants) -> Option<Option<u32>> {
    let EllipticPoint::Affine { x, y } = *p else {
        return Some(Some(1));
    };
    let (x, y, g2, g3) = (exact_real(x)?, exact_real(y)?, exact_real(curve.g2)?, exact_real(curve.g3)?);
    let four = BigRational::from_integer(4.into());
    if &y * &y != four * &x * &x * &x - &g2 * &x - &g3 {
        return None;
    }
    let start: RationalPoint = Some((x, y));
    let mut cur = start.clone();
    for k in 1..=12u32 {
        if cur.is_none() {
            return Some(Some(k));
        }
        if k < 12 {
            cur = rational_add(&cur, &start, &g2);
        }
    }
    Some(None)
}

/// Smallest `N ≤ n_max` with `N·z ∈ Λ` (within `N·tol` in real coordinates).
pub fn log_torsion_order(z: Complex64, l: &Lattice, n_max: u32, tol: f64) -> Option<u32> {
    let c = l.real_coordinates(z);
    (1..=n_max).find(|&n| {
        let (a, b) = (c.alpha1 * n as f64, c.alpha2 * n as f64);
        (a - a.round()).abs() <= n as f64 * tol && (b - b.round()).abs() <= n as f64 * tol
    })
}

/// Order of `P` up to `n_max`: exact group law for rational points on curves
/// over ℚ, otherwise the denominators of the elliptic logarithm.
pub fn is_torsion(p: &EllipticPoint, curve: &CurveInvariants, l: &Lattice, n_max: u32, tol: f64) -> Result<TorsionResult> {
    p.check_on_curve(curve)?;
    if let Some(order) = exact_torsion(p, curve) {
        return Ok(TorsionResult {
            order: order.filter(|&n| n <= n_max),
            confidence: Confidence::CertifiedTorsion,
        });
    }
    let z = elliptic_log(p, l)?.value;
    Ok(TorsionResult {
        order: log_torsion_order(z, l, n_max, tol),
        confidence: Confidence::Numeric,
    })
}

/// Complex multiplication data: `aτ² + bτ + c = 0`, `D = b² − 4ac < 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct CmData {
    pub discriminant: i64,
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub tau: Complex64,
    pub certificate: Option<RelationCertificate>,
    pub declared: bool,
}

/// Searches a relation among `(1, τ, τ²)`.
pub fn detect_cm(l: &Lattice, max_height: i64, tol: f64) -> Option<CmData> {
    let tau = l.tau();
    let cert = detect_integer_relation(&[Complex64::new(1.0, 0.0), tau, tau * tau], max_height, tol)?;
    let (mut c, mut b, mut a) = (cert.coefficients[0], cert.coefficients[1], cert.coefficients[2]);
    if a == 0 {
        return None;
    }
    if a < 0 {
        (a, b, c) = (-a, -b, -c);
    }
    let discriminant = b * b - 4 * a * c;
    (discriminant < 0).then_some(CmData {
        discriminant,
        a,
        b,
        c,
        tau,
        certificate: Some(cert),
        declared: false,
    })
}

fn cm_from_discriminant(l: &Lattice, d: i64, cfg: &ClassifierConfig) -> Option<CmData> {
    let tau = l.tau();
    (1..=cfg.max_height).find_map(|a| {
        let b = (-2.0 * a as f64 * tau.re).round() as i64;
        let num = b * b - d;
        if num % (4 * a) != 0 {
            return None;
        }
        let c = num / (4 * a);
        let r = tau * tau * a as f64 + tau * b as f64 + c as f64;
        (r.norm() <= cfg.tol * (a as f64 + b.abs() as f64 + c.abs() as f64)).then_some(CmData {
            discriminant: d,
            a,
            b,
            c,
            tau,
            certificate: None,
            declared: true,
        })
    })
}

/// CM status honouring a declared value: `Some(0)` declares no CM, a negative
/// value declares the discriminant.
pub fn resolve_cm(l: &Lattice, cm_override: Option<i64>, cfg: &ClassifierConfig) -> Result<Option<CmData>> {
    let detected = detect_cm(l, cfg.max_height, cfg.tol);
    let confident = detected
        .as_ref()
        .and_then(|d| d.certificate.as_ref())
        .is_some_and(|c| c.verified_at_higher_precision);
    let detected_d = detected.as_ref().map_or(0, |d| d.discriminant);
    match cm_override {
        None => Ok(detected),
        Some(0) if confident => Err(Error::InconsistentOverride {
            declared: 0,
            detected: detected_d,
        }),
        Some(0) => Ok(None),
        Some(d) if d > 0 => Err(Error::InconsistentOverride {
            declared: d,
            detected: detected_d,
        }),
        Some(d) if confident && detected_d != d => Err(Error::InconsistentOverride {
            declared: d,
            detected: detected_d,
        }),
        Some(d) => match detected.filter(|x| x.discriminant == d) {
            Some(x) => Ok(Some(CmData { declared: true, ..x })),
            None => cm_from_discriminant(l, d, cfg).map(Some).ok_or(Error::InconsistentOverride {
                declared: d,
                detected: detected_d,
            }),
        },
    }
}

/// `M = [u: ℤⁿ → G]` with `G` an extension of `E` by `𝔾_m^s`.
#[derive(Debug, Clone, PartialEq)]
pub struct OneMotiveElliptic {
    pub curve: CurveInvariants,
    pub lattice: Lattice,
    pub extension_params: Vec<ExtensionParam>,
    pub points: Vec<SemiAbelianPoint>,
    pub cm_override: Option<i64>,
}

impl OneMotiveElliptic {
    pub fn new(
        curve: CurveInvariants,
        lattice: Lattice,
        extension_params: Vec<ExtensionParam>,
        points: Vec<SemiAbelianPoint>,
        cm_override: Option<i64>,
    ) -> Result<Self> {
        let inv = eisenstein_invariants(&lattice)?;
        let scale = curve.g2.norm().max(curve.g3.norm()).max(1.0);
        if (inv.g2 - curve.g2).norm().max((inv.g3 - curve.g3).norm()) > 1e-8 * scale {
            return Err(Error::InternalInconsistency("lattice does not match the curve invariants".into()));
        }
        if points.is_empty() {
            return Err(Error::NotApplicable("a 1-motive needs at least one point"));
        }
        for r in &points {
            r.base.check_on_curve(&curve)?;
            if r.fibers.len() != extension_params.len() {
                return Err(Error::NotApplicable("each point needs one fiber coordinate per extension parameter"));
            }
            if r.fibers.iter().any(|f| *f == Complex64::new(0.0, 0.0)) {
                return Err(Error::FiberZero);
            }
        }
        Ok(OneMotiveElliptic {
            curve,
            lattice,
            extension_params,
            points,
            cm_override,
        })
    }

    pub fn from_curve(curve: CurveInvariants, extension_params: Vec<ExtensionParam>, points: Vec<SemiAbelianPoint>, cm_override: Option<i64>) -> Result<Self> {
        let lattice = periods_from_invariants(&curve)?;
        Self::new(curve, lattice, extension_params, points, cm_override)
    }

    pub fn from_lattice(lattice: Lattice, extension_params: Vec<ExtensionParam>, points: Vec<SemiAbelianPoint>, cm_override: Option<i64>) -> Result<Self> {
        let curve = eisenstein_invariants(&lattice)?;
        Self::new(curve, lattice, extension_params, points, cm_override)
    }

    pub fn n(&self) -> usize {
        self.points.len()
    }

    pub fn s(&self) -> usize {
        self.extension_params.len()
    }
}

/// The eight rows of the dimension table for `n = s = 1`, plus the general case.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TableRow {
    QRTorsion,
    PQTorsion,
    RTorsion,
    QTorsion,
    PTorsion,
    DependentDeficient,
    DependentNotDeficient,
    Independent,
    General,
}

impl TableRow {
    pub const ROWS: [TableRow; 8] = [
        TableRow::QRTorsion,
        TableRow::PQTorsion,
        TableRow::RTorsion,
        TableRow::QTorsion,
        TableRow::PTorsion,
        TableRow::DependentDeficient,
        TableRow::DependentNotDeficient,
        TableRow::Independent,
    ];

    /// `(dim UR, dim Gal CM, dim Gal non-CM)`; the non-CM deficient cell is empty.
    pub fn expected(self) -> Option<(usize, usize, Option<usize>)> {
        Some(match self {
            TableRow::QRTorsion => (0, 2, Some(4)),
            TableRow::PQTorsion => (1, 3, Some(5)),
            TableRow::RTorsion => (2, 4, Some(6)),
            TableRow::QTorsion | TableRow::PTorsion | TableRow::DependentNotDeficient => (3, 5, Some(7)),
            TableRow::DependentDeficient => (2, 4, None),
            TableRow::Independent => (5, 7, Some(9)),
            TableRow::General => return None,
        })
    }

    pub fn number(self) -> Option<usize> {
        TableRow::ROWS.iter().position(|&r| r == self).map(|i| i + 1)
    }

    pub fn label(self) -> &'static str {
        match self {
            TableRow::QRTorsion => "Q, R torsion",
            TableRow::PQTorsion => "P, Q torsion (R not torsion)",
            TableRow::RTorsion => "R torsion (Q not torsion)",
            TableRow::QTorsion => "Q torsion (P and R not torsion)",
            TableRow::PTorsion => "P torsion (R and Q not torsion)",
            TableRow::DependentDeficient => "P, Q End-dependent (M deficient)",
            TableRow::DependentNotDeficient => "P, Q End-dependent (M not deficient)",
            TableRow::Independent => "P, Q End-independent",
            TableRow::General => "general",
        }
    }
}

/// `(dim B, dim B_v*, dim B_Q)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BDimensions {
    pub dim_b: usize,
    pub dim_b_vstar: usize,
    pub dim_b_q: usize,
}

/// Predicted transcendence-degree lower bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConjectureBounds {
    /// `2d + t + dim Gal_mot(E)`.
    pub sa: usize,
    /// `2·dim B_Q + dim Z(1)`.
    pub wsa_v1: usize,
    /// `2c + t`.
    pub wsa_explicit: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassificationReport {
    pub n: usize,
    pub s: usize,
    pub dim_b: usize,
    pub dim_b_vstar: usize,
    pub dim_b_q: usize,
    /// Only determined for `n = s = 1`.
    pub dim_zprime: Option<usize>,
    pub dim_z1: usize,
    pub dim_ur: usize,
    pub dim_gal_a: usize,
    pub dim_gal: usize,
    pub table_row: TableRow,
    pub cm: Option<CmData>,
    pub deficient: Option<bool>,
    pub bounds: ConjectureBounds,
    pub confidence: Confidence,
    pub point_torsion: Vec<TorsionResult>,
    pub param_torsion: Vec<Option<u32>>,
    pub lift_torsion: Vec<bool>,
    pub relations: Vec<(String, RelationCertificate)>,
    pub notes: Vec<&'static str>,
}

/// Everything the dimension formulas need, computed once.
pub struct MotiveAnalysis<'a> {
    motive: &'a OneMotiveElliptic,
    cfg: ClassifierConfig,
    cm: Option<CmData>,
    p: Vec<Complex64>,
    p_torsion: Vec<TorsionResult>,
    q_torsion: Vec<Option<u32>>,
    qq: Vec<(Complex64, Complex64)>,
    third: Vec<Vec<Complex64>>,
    borderline: bool,
    relations: Vec<(String, RelationCertificate)>,
}

impl<'a> MotiveAnalysis<'a> {
    pub fn new(motive: &'a OneMotiveElliptic, cfg: ClassifierConfig) -> Result<Self> {
        let l = &motive.lattice;
        let cm = resolve_cm(l, motive.cm_override, &cfg)?;
        let mut p = Vec::new();
        let mut p_torsion = Vec::new();
        for r in &motive.points {
            p.push(elliptic_log(&r.base, l)?.value);
            p_torsion.push(is_torsion(&r.base, &motive.curve, l, cfg.n_max, cfg.tol)?);
        }
        let q_torsion = motive.extension_params.iter().map(|q| log_torsion_order(q.q, l, cfg.n_max, cfg.tol)).collect();
        let qq = motive.extension_params.iter().map(|q| quasi_quasi_periods(q, l)).collect::<Result<Vec<_>>>()?;
        let mut third = Vec::new();
        for ((r, z), tors) in motive.points.iter().zip(&p).zip(&p_torsion) {
            let t = third_kind_values(r, &motive.extension_params, l)?;
            let row = match tors.order {
                Some(n) => {
                    let c = l.real_coordinates(*z);
                    let (a1, a2) = ((c.alpha1 * n as f64).round() / n as f64, (c.alpha2 * n as f64).round() / n as f64);
                    t.iter().zip(&qq).map(|(t, (q1, q2))| t + q1 * a1 + q2 * a2).collect()
                }
                None => t,
            };
            third.push(row);
        }
        let mut a = MotiveAnalysis {
            motive,
            cfg,
            cm,
            p,
            p_torsion,
            q_torsion,
            qq,
            third,
            borderline: false,
            relations: Vec::new(),
        };
        if let Some(cert) = a.cm.as_ref().and_then(|c| c.certificate.clone()) {
            a.relations.push(("cm: (1, tau, tau^2)".into(), cert));
        }
        Ok(a)
    }

    fn rank(&mut self, label: &str, values: &[Complex64]) -> Result<RankResult> {
        if values.len() > MAX_VALUES {
            return Err(Error::NotApplicable("too many generators for relation detection"));
        }
        let r = rational_rank(values, self.cfg.max_height, self.cfg.tol);
        self.borderline |= r.borderline;
        for c in &r.certificates {
            self.relations.push((label.to_string(), c.clone()));
        }
        Ok(r)
    }

    fn f_rank(&mut self, label: &str, logs: &[Complex64]) -> Result<usize> {
        let l = &self.motive.lattice;
        let mut vals = vec![l.omega1(), l.omega2()];
        for v in logs {
            vals.push(*v);
            if let Some(cm) = &self.cm {
                vals.push(cm.tau * v);
            }
        }
        let r = self.rank(label, &vals)?;
        let extra = r.basis.iter().filter(|&&i| i >= 2).count();
        Ok(if self.cm.is_some() { extra.div_ceil(2) } else { extra })
    }

    pub fn cm(&self) -> Option<&CmData> {
        self.cm.as_ref()
    }

    fn q_logs(&self) -> Vec<Complex64> {
        self.motive.extension_params.iter().map(|q| q.q).collect()
    }

    pub fn dim_b(&mut self) -> Result<BDimensions> {
        let mut all = self.p.clone();
        all.extend(self.q_logs());
        let dim_b = self.f_rank("dim B: periods and point logarithms", &all)?;
        let dim_b_vstar = self.f_rank("dim B_v*: periods and parameter logarithms", &self.q_logs())?;
        if dim_b_vstar > dim_b {
            return Err(Error::InternalInconsistency("dim B_v* exceeds dim B".into()));
        }
        Ok(BDimensions {
            dim_b,
            dim_b_vstar,
            dim_b_q: dim_b - dim_b_vstar,
        })
    }

    fn single(&self) -> bool {
        self.motive.n() == 1 && self.motive.s() == 1
    }

    /// Whether the dependence `q ≡ βp` has purely imaginary `β` (pair criterion).
    pub fn is_deficient(&mut self) -> Result<Option<bool>> {
        if !self.single() || self.p_torsion[0].order.is_some() || self.q_torsion[0].is_some() || self.dim_b()?.dim_b != 1 {
            return Ok(None);
        }
        let Some(cm) = self.cm.clone() else {
            return Ok(Some(false));
        };
        let l = &self.motive.lattice;
        let (p, q) = (self.p[0], self.motive.extension_params[0].q);
        let r = self.rank("deficiency: q against p, tau p and periods", &[l.omega1(), l.omega2(), p, cm.tau * p, q])?;
        let Some(cert) = r.certificates.iter().find(|c| c.coefficients[4] != 0) else {
            return Err(Error::InternalInconsistency("dim B = 1 but no relation expresses q through p".into()));
        };
        let (k1, k2) = (cert.coefficients[2], cert.coefficients[3]);
        Ok(Some(2 * cm.a * k1 - cm.b * k2 == 0))
    }

    fn dim_zprime(&mut self) -> Result<Option<usize>> {
        if !self.single() {
            return Ok(None);
        }
        let b = self.dim_b()?.dim_b;
        Ok(Some(match b {
            0 => 0,
            1 if self.p_torsion[0].order.is_some() || self.q_torsion[0].is_some() => 0,
            1 => usize::from(!self.is_deficient()?.unwrap_or(false)),
            _ => 1,
        }))
    }

    fn toric_quotient_rank(&mut self) -> Result<usize> {
        if self.motive.s() == 0 {
            return Ok(0);
        }
        let mut base = vec![TWO_PI_I];
        if self.p_torsion.iter().any(|t| t.order.is_none()) {
            for (q1, q2) in &self.qq {
                base.push(*q1);
                base.push(*q2);
            }
        }
        let base_rank = self.rank("Z(1): 2 pi i and quasi-quasi-periods", &base)?.rank;
        let mut all = base.clone();
        all.extend(self.third.iter().flatten());
        Ok(self.rank("Z(1): third-kind values", &all)?.rank - base_rank)
    }

    pub fn dim_z1(&mut self) -> Result<usize> {
        let quotient = self.toric_quotient_rank()?;
        Ok(match self.dim_zprime()? {
            Some(1) => 1,
            _ => quotient,
        })
    }

    /// Whether each lifted point `R_ℓ` is torsion in `G`.
    pub fn lift_torsion(&mut self) -> Result<Vec<bool>> {
        let mut out = Vec::new();
        for i in 0..self.motive.n() {
            if self.p_torsion[i].order.is_none() {
                out.push(false);
                continue;
            }
            let mut torsion = true;
            for k in 0..self.motive.s() {
                let v = [TWO_PI_I, self.third[i][k]];
                torsion &= self.rank("R torsion: third-kind value against 2 pi i", &v)?.rank == 1;
            }
            out.push(torsion);
        }
        Ok(out)
    }

    pub fn table_row(&mut self) -> Result<TableRow> {
        if !self.single() {
            return Err(Error::NotApplicable("the dimension table covers n = s = 1 only"));
        }
        let p = self.p_torsion[0].order.is_some();
        let q = self.q_torsion[0].is_some();
        let r = self.lift_torsion()?[0];
        Ok(if q && r {
            TableRow::QRTorsion
        } else if p && q {
            TableRow::PQTorsion
        } else if r {
            TableRow::RTorsion
        } else if q {
            TableRow::QTorsion
        } else if p {
            TableRow::PTorsion
        } else if self.dim_b()?.dim_b == 1 {
            if self.is_deficient()? == Some(true) && self.dim_z1()? == 0 {
                TableRow::DependentDeficient
            } else {
                TableRow::DependentNotDeficient
            }
        } else {
            TableRow::Independent
        })
    }

    pub fn report(&mut self) -> Result<ClassificationReport> {
        let b = self.dim_b()?;
        let dim_zprime = self.dim_zprime()?;
        let dim_z1 = self.dim_z1()?;
        let dim_ur = 2 * b.dim_b + dim_z1;
        let dim_gal_a = if self.cm.is_some() { 2 } else { 4 };
        let dim_gal = dim_ur + dim_gal_a;
        let deficient = self.is_deficient()?;
        let lift_torsion = self.lift_torsion()?;
        let table_row = if self.single() { self.table_row()? } else { TableRow::General };
        if let Some((ur, gal_cm, gal_non_cm)) = table_row.expected() {
            let gal = if self.cm.is_some() { Some(gal_cm) } else { gal_non_cm };
            if ur != dim_ur || gal != Some(dim_gal) {
                return Err(Error::InternalInconsistency(format!(
                    "row {:?} expects UR {ur}, Gal {gal:?}; formulas give UR {dim_ur}, Gal {dim_gal}",
                    table_row
                )));
            }
        }
        if dim_ur != 2 * b.dim_b + dim_z1 || b.dim_b != b.dim_b_vstar + b.dim_b_q {
            return Err(Error::InternalInconsistency("dimension identities violated".into()));
        }
        let certified = self.p_torsion.iter().all(|t| t.confidence == Confidence::CertifiedTorsion) && self.motive.s() == 0;
        let confidence = if self.borderline {
            Confidence::NumericBorderline
        } else if certified && b.dim_b == 0 {
            Confidence::CertifiedTorsion
        } else {
            Confidence::Numeric
        };
        let mut notes = vec![
            "dimensions computed from floating-point data by integer-relation detection are heuristic",
            "deficiency read as: CM and the End-dependence coefficient of q on p is purely imaginary",
        ];
        if self.motive.s() > 0 {
            notes.push("third-kind values taken on the principal branch of the logarithm");
        }
        if self.cm.as_ref().is_some_and(|c| c.declared) {
            notes.push("CM discriminant taken from the declared override");
        }
        Ok(ClassificationReport {
            n: self.motive.n(),
            s: self.motive.s(),
            dim_b: b.dim_b,
            dim_b_vstar: b.dim_b_vstar,
            dim_b_q: b.dim_b_q,
            dim_zprime,
            dim_z1,
            dim_ur,
            dim_gal_a,
            dim_gal,
            table_row,
            cm: self.cm.clone(),
            deficient,
            bounds: ConjectureBounds {
                sa: 2 * b.dim_b + dim_z1 + dim_gal_a,
                wsa_v1: 2 * b.dim_b_q + dim_z1,
                wsa_explicit: 2 * b.dim_b_q + dim_z1,
            },
            confidence,
            point_torsion: self.p_torsion.clone(),
            param_torsion: self.q_torsion.clone(),
            lift_torsion,
            relations: std::mem::take(&mut self.relations),
            notes,
        })
    }
}

pub fn dim_b_elliptic(m: &OneMotiveElliptic, cfg: ClassifierConfig) -> Result<BDimensions> {
    MotiveAnalysis::new(m, cfg)?.dim_b()
}

pub fn is_deficient(m: &OneMotiveElliptic, cfg: ClassifierConfig) -> Result<Option<bool>> {
    MotiveAnalysis::new(m, cfg)?.is_deficient()
}

pub fn dim_z1(m: &OneMotiveElliptic, cfg: ClassifierConfig) -> Result<usize> {
    MotiveAnalysis::new(m, cfg)?.dim_z1()
}

pub fn classify_table_row(m: &OneMotiveElliptic, cfg: ClassifierConfig) -> Result<TableRow> {
    MotiveAnalysis::new(m, cfg)?.table_row()
}

pub fn motivic_galois_dims(m: &OneMotiveElliptic, cfg: ClassifierConfig) -> Result<ClassificationReport> {
    MotiveAnalysis::new(m, cfg)?.report()
}

pub fn conjecture_bounds(m: &OneMotiveElliptic, cfg: ClassifierConfig) -> Result<ConjectureBounds> {
    Ok(motivic_galois_dims(m, cfg)?.bounds)
}

/// `y² = 4x³ − 4x`, lattice `ℤ[i]`-stable.
pub fn cm_curve() -> CurveInvariants {
    CurveInvariants::from_real(4.0, 0.0).expect("nonsingular")
}

/// `y² = 4x³ − 4x − 1`, `j = 110592/37` is not an algebraic integer, so no CM.
pub fn non_cm_curve() -> CurveInvariants {
    CurveInvariants::from_real(4.0, 1.0).expect("nonsingular")
}

/// Motive `[ℤ → G]` with `u(1) = exp_G(p, t)` and `G` parametrized by primal `q`.
pub fn motive_from_logs(curve: CurveInvariants, p: Complex64, q: Complex64, t: Complex64) -> Result<OneMotiveElliptic> {
    let l = periods_from_invariants(&curve)?;
    let q = ExtensionParam::from_primal(q, &l)?;
    let r = exp_g(p, t, &q, &l)?;
    OneMotiveElliptic::new(curve, l, vec![q], vec![r], None)
}

/// A motive realising the given row on the CM curve or the non-CM curve.
pub fn table_instance(row: TableRow, cm: bool) -> Result<OneMotiveElliptic> {
    let curve = if cm { cm_curve() } else { non_cm_curve() };
    let l = periods_from_invariants(&curve)?;
    let (w1, w2) = (l.omega1(), l.omega2());
    let generic_p = w1 * (SQRT_2 - 1.0) + w2 * (2.0 * (PI - 3.0));
    let generic_q = w1 * (E - 2.5) + w2 * (LN_2 - 0.1);
    let generic_t = Complex64::new(0.37, 0.21);
    let qq = |q: Complex64| -> Result<(Complex64, Complex64)> { quasi_quasi_periods(&ExtensionParam::from_primal(q, &l)?, &l) };
    let (p, q, t) = match row {
        TableRow::QRTorsion => (w2 * 0.5, w1 * 0.5, -qq(w1 * 0.5)?.1 * 0.5),
        TableRow::PQTorsion => (w2 * 0.5, w1 * 0.5, generic_t),
        TableRow::RTorsion => (w1 / 3.0, generic_q, -qq(generic_q)?.0 / 3.0),
        TableRow::QTorsion => (generic_p, w1 * 0.5, generic_t),
        TableRow::PTorsion => (w2 / 3.0, generic_q, generic_t),
        TableRow::DependentDeficient if cm => (generic_p, generic_p * l.tau(), Complex64::new(0.0, 0.0)),
        TableRow::DependentDeficient => return Err(Error::NotApplicable("a 1-motive over a non-CM curve cannot be deficient")),
        TableRow::DependentNotDeficient => (generic_p, generic_p * 2.0, generic_t),
        TableRow::Independent => (generic_p, generic_q, generic_t),
        TableRow::General => return Err(Error::NotApplicable("no instance for the general case")),
    };
    motive_from_logs(curve, p, q, t)
}

/// Motive with `s = 0`: points of `E` alone.
pub fn abelian_motive(curve: CurveInvariants, logs: &[Complex64]) -> Result<OneMotiveElliptic> {
    let l = periods_from_invariants(&curve)?;
    let points = logs
        .iter()
        .map(|z| {
            Ok(SemiAbelianPoint {
                base: curve_point(*z, &l)?,
                fibers: Vec::new(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    OneMotiveElliptic::new(curve, l, Vec::new(), points, None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn cfg() -> ClassifierConfig {
        ClassifierConfig::default()
    }

    #[test]
    fn torsion_examples() {
        let curve = cm_curve();
        let l = periods_from_invariants(&curve).unwrap();
        let t = is_torsion(&EllipticPoint::Infinity, &curve, &l, 64, 1e-9).unwrap();
        assert_eq!(t.order, Some(1));
        let t = is_torsion(&EllipticPoint::affine(c(1.0, 0.0), c(0.0, 0.0)), &curve, &l, 64, 1e-9).unwrap();
        assert_eq!(
            t,
            TorsionResult {
                order: Some(2),
                confidence: Confidence::CertifiedTorsion
            }
        );
        let p = curve_point(l.omega1() * 0.2 + l.omega2() * 0.4, &l).unwrap();
        assert_eq!(is_torsion(&p, &curve, &l, 64, 1e-9).unwrap().order, Some(5));
        let p = curve_point(l.omega1() * (SQRT_2 - 1.0) + l.omega2() * std::f64::consts::FRAC_1_PI, &l).unwrap();
        assert_eq!(is_torsion(&p, &curve, &l, 100, 1e-9).unwrap().order, None);
    }

    #[test]
    fn exact_rational_torsion() {
        // y² = 4x³ + 4 (g₂ = 0, g₃ = −4) has the 3-torsion point (0, 2).
        let curve = CurveInvariants::from_real(0.0, -4.0).unwrap();
        let l = periods_from_invariants(&curve).unwrap();
        let t = is_torsion(&EllipticPoint::affine(c(0.0, 0.0), c(2.0, 0.0)), &curve, &l, 64, 1e-9).unwrap();
        assert_eq!(
            t,
            TorsionResult {
                order: Some(3),
                confidence: Confidence::CertifiedTorsion
            }
        );
        // y² = 4x³ − 4x + 4: (1, 2) has infinite order, certified by the bound 12.
        let curve = CurveInvariants::from_real(4.0, -4.0).unwrap();
        let l = periods_from_invariants(&curve).unwrap();
        let t = is_torsion(&EllipticPoint::affine(c(1.0, 0.0), c(2.0, 0.0)), &curve, &l, 64, 1e-9).unwrap();
        assert_eq!(
            t,
            TorsionResult {
                order: None,
                confidence: Confidence::CertifiedTorsion
            }
        );
        let z = elliptic_log(&EllipticPoint::affine(c(1.0, 0.0), c(2.0, 0.0)), &l).unwrap().value;
        assert_eq!(log_torsion_order(z, &l, 64, 1e-9), None);
    }

    #[test]
    fn cm_detection() {
        let sq = periods_from_invariants(&cm_curve()).unwrap();
        assert_eq!(detect_cm(&sq, 1000, 1e-9).unwrap().discriminant, -4);
        let hex = periods_from_invariants(&CurveInvariants::from_real(0.0, 4.0).unwrap()).unwrap();
        assert_eq!(detect_cm(&hex, 1000, 1e-9).unwrap().discriminant, -3);
        let generic = Lattice::new(c(1.0, 0.0), c(0.5 * (5f64.sqrt() - 1.0), 1.1 * PI / 3.0)).unwrap();
        assert!(detect_cm(&generic, 1000, 1e-9).is_none());
        assert!(detect_cm(&periods_from_invariants(&non_cm_curve()).unwrap(), 1000, 1e-9).is_none());
        let two_i = Lattice::new(c(1.0, 0.0), c(0.0, 2.0)).unwrap();
        assert_eq!(detect_cm(&two_i, 1000, 1e-9).unwrap().discriminant, -16);
    }

    #[test]
    fn cm_override() {
        let sq = periods_from_invariants(&cm_curve()).unwrap();
        assert_eq!(
            resolve_cm(&sq, Some(0), &cfg()).unwrap_err(),
            Error::InconsistentOverride { declared: 0, detected: -4 }
        );
        assert_eq!(
            resolve_cm(&sq, Some(-3), &cfg()).unwrap_err(),
            Error::InconsistentOverride { declared: -3, detected: -4 }
        );
        assert!(resolve_cm(&sq, Some(-4), &cfg()).unwrap().unwrap().declared);
        let nc = periods_from_invariants(&non_cm_curve()).unwrap();
        assert_eq!(resolve_cm(&nc, Some(0), &cfg()).unwrap(), None);
        assert!(resolve_cm(&nc, Some(-4), &cfg()).is_err());
    }

    #[test]
    fn b_dimensions() {
        for cm in [true, false] {
            let m = table_instance(TableRow::PQTorsion, cm).unwrap();
            assert_eq!(
                dim_b_elliptic(&m, cfg()).unwrap(),
                BDimensions {
                    dim_b: 0,
                    dim_b_vstar: 0,
                    dim_b_q: 0
                }
            );
            let m = table_instance(TableRow::DependentNotDeficient, cm).unwrap();
            assert_eq!(
                dim_b_elliptic(&m, cfg()).unwrap(),
                BDimensions {
                    dim_b: 1,
                    dim_b_vstar: 1,
                    dim_b_q: 0
                }
            );
            let m = table_instance(TableRow::Independent, cm).unwrap();
            assert_eq!(
                dim_b_elliptic(&m, cfg()).unwrap(),
                BDimensions {
                    dim_b: 2,
                    dim_b_vstar: 1,
                    dim_b_q: 1
                }
            );
        }
    }

    #[test]
    fn deficiency() {
        let m = table_instance(TableRow::DependentNotDeficient, false).unwrap();
        assert_eq!(is_deficient(&m, cfg()).unwrap(), Some(false));
        let m = table_instance(TableRow::DependentDeficient, true).unwrap();
        assert_eq!(is_deficient(&m, cfg()).unwrap(), Some(true));
        let m = table_instance(TableRow::DependentNotDeficient, true).unwrap();
        assert_eq!(is_deficient(&m, cfg()).unwrap(), Some(false));
        let m = table_instance(TableRow::Independent, true).unwrap();
        assert_eq!(is_deficient(&m, cfg()).unwrap(), None);
        assert!(table_instance(TableRow::DependentDeficient, false).is_err());
    }

    #[test]
    fn z1_cases() {
        for cm in [true, false] {
            assert_eq!(dim_z1(&table_instance(TableRow::QRTorsion, cm).unwrap(), cfg()).unwrap(), 0);
            assert_eq!(dim_z1(&table_instance(TableRow::PQTorsion, cm).unwrap(), cfg()).unwrap(), 1);
            assert_eq!(dim_z1(&table_instance(TableRow::Independent, cm).unwrap(), cfg()).unwrap(), 1);
        }
        // Fiber coordinate 2 above a torsion point.
        let curve = cm_curve();
        let l = periods_from_invariants(&curve).unwrap();
        let q = ExtensionParam::from_primal(l.omega1() * 0.5, &l).unwrap();
        let base = curve_point(l.omega2() * 0.5, &l).unwrap();
        let m = OneMotiveElliptic::new(curve, l, vec![q], vec![SemiAbelianPoint::new(base, c(2.0, 0.0))], None).unwrap();
        assert_eq!(dim_z1(&m, cfg()).unwrap(), 1);
    }

    #[test]
    fn table_rows_and_galois_dims() {
        for cm in [true, false] {
            for row in TableRow::ROWS {
                let Ok(m) = table_instance(row, cm) else {
                    assert!(!cm && row == TableRow::DependentDeficient);
                    continue;
                };
                let r = motivic_galois_dims(&m, cfg()).unwrap();
                assert_eq!(r.table_row, row, "cm={cm}");
                let (ur, gal_cm, gal_non_cm) = row.expected().unwrap();
                assert_eq!(r.dim_ur, ur);
                assert_eq!(Some(r.dim_gal), if cm { Some(gal_cm) } else { gal_non_cm });
                assert_eq!(r.cm.is_some(), cm);
                assert_eq!(r.dim_ur, 2 * r.dim_b + r.dim_z1);
                assert_eq!(r.dim_b, r.dim_b_vstar + r.dim_b_q);
            }
        }
    }

    #[test]
    fn non_cm_dependent_never_deficient() {
        for (num, den) in [(2.0, 1.0), (-3.0, 2.0), (1.0, 3.0), (5.0, 1.0)] {
            let curve = non_cm_curve();
            let l = periods_from_invariants(&curve).unwrap();
            let p = l.omega1() * (SQRT_2 - 1.0) + l.omega2() * (2.0 * (PI - 3.0));
            for t in [c(0.0, 0.0), c(0.37, 0.21)] {
                let m = motive_from_logs(curve, p, p * (num / den), t).unwrap();
                assert_eq!(classify_table_row(&m, cfg()).unwrap(), TableRow::DependentNotDeficient);
            }
        }
    }

    #[test]
    fn bounds() {
        let r = motivic_galois_dims(&table_instance(TableRow::Independent, true).unwrap(), cfg()).unwrap();
        assert_eq!(r.bounds.wsa_v1, 3);
        assert_eq!(r.bounds.sa, r.dim_gal);
        let r = motivic_galois_dims(&table_instance(TableRow::QRTorsion, false).unwrap(), cfg()).unwrap();
        assert_eq!((r.bounds.wsa_v1, r.bounds.wsa_explicit, r.bounds.sa), (0, 0, 4));
        let l = periods_from_invariants(&non_cm_curve()).unwrap();
        let m = abelian_motive(non_cm_curve(), &[l.omega1() * (SQRT_2 - 1.0) + l.omega2() * 0.2]).unwrap();
        let r = motivic_galois_dims(&m, cfg()).unwrap();
        assert_eq!((r.dim_b, r.dim_z1, r.bounds.wsa_v1, r.table_row), (1, 0, 2, TableRow::General));
    }

    #[test]
    fn not_applicable_row() {
        let l = periods_from_invariants(&cm_curve()).unwrap();
        let m = abelian_motive(cm_curve(), &[l.omega1() * 0.3]).unwrap();
        assert!(matches!(classify_table_row(&m, cfg()), Err(Error::NotApplicable(_))));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(12))]
        #[test]
        fn adding_a_point_never_lowers_dim_b(a in 0.05f64..0.95, b in 0.05f64..0.95, k in 1i64..4, use_multiple in any::<bool>()) {
            let curve = non_cm_curve();
            let l = periods_from_invariants(&curve).unwrap();
            let p1 = l.omega1() * a + l.omega2() * b;
            let p2 = if use_multiple { p1 * k as f64 } else { l.omega1() * (SQRT_2 - 1.0) + l.omega2() * (E - 2.5) };
            let one = abelian_motive(curve, &[p1]).unwrap();
            let two = abelian_motive(curve, &[p1, p2]).unwrap();
            let d1 = dim_b_elliptic(&one, cfg()).unwrap().dim_b;
            let d2 = dim_b_elliptic(&two, cfg()).unwrap().dim_b;
            prop_assert!(d2 >= d1);
        }
    }
}
