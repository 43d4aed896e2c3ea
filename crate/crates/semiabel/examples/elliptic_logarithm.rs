//! Points of E from z and back, with the second-kind integral ζ(z).

use semiabel::elliptic::CurveInvariants;
use semiabel::periods::{curve_point, elliptic_log, generalized_elliptic_log, periods_from_invariants, EllipticPoint};
use semiabel::Complex64;

fn main() -> semiabel::Result<()> {
    let curve = CurveInvariants::from_real(4.0, 1.0)?;
    let l = periods_from_invariants(&curve)?;
    let z = l.omega1() * 0.37 + l.omega2() * 0.81;
    let p = curve_point(z, &l)?;
    println!("z = {z:.12} maps to {p:?}");
    if let EllipticPoint::Affine { x, y } = p {
        println!("curve residual {:.2e}", p.curve_residual(&curve));
        let back = elliptic_log(&EllipticPoint::affine(x, y), &l)?;
        println!("log P = {:.12} (winding {:?})", back.value, back.winding);
        let g = generalized_elliptic_log(&p, &l)?;
        println!("(z, zeta(z)) = ({:.12}, {:.12})", g.z.value, g.w.unwrap_or_default());
        let shifted = g.shifted(2, -1, &l)?;
        println!("along z + 2w1 - w2: ({:.12}, {:.12})", shifted.z.value, shifted.w.unwrap_or_default());
    }
    let real = EllipticPoint::affine(Complex64::new(2.0, 0.0), Complex64::new(23f64.sqrt(), 0.0));
    println!("log (2, sqrt 23) = {:.12}", elliptic_log(&real, &l)?.value);
    Ok(())
}
