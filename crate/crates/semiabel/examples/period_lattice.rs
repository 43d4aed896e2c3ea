//! Periods, quasi-periods and the dual lattice of y² = 4x³ − g₂x − g₃.

use semiabel::elliptic::{eisenstein_invariants, quasi_periods, CurveInvariants};
use semiabel::periods::periods_from_invariants;
use semiabel::Complex64;

fn main() -> semiabel::Result<()> {
    for (g2, g3) in [(4.0, 0.0), (0.0, 4.0), (4.0, 1.0)] {
        let curve = CurveInvariants::from_real(g2, g3)?;
        let l = periods_from_invariants(&curve)?;
        let eta = quasi_periods(&l)?;
        let back = eisenstein_invariants(&l)?;
        let legendre = eta.eta1 * l.omega2() - eta.eta2 * l.omega1();
        println!("g2 = {g2}, g3 = {g3}  (j = {:.6})", curve.j_invariant().re);
        println!("  omega1 = {:.12}  omega2 = {:.12}  tau = {:.12}", l.omega1(), l.omega2(), l.tau());
        println!("  eta1   = {:.12}  eta2   = {:.12}", eta.eta1, eta.eta2);
        println!(
            "  eta1 w2 - eta2 w1 - 2 pi i = {:.2e}",
            (legendre - Complex64::new(0.0, std::f64::consts::TAU)).norm()
        );
        println!("  recovered g2 = {:.12}, g3 = {:.12}", back.g2, back.g3);
        let d = l.dual();
        println!(
            "  dual basis {:.9}, {:.9}; iota(w1*) = {:.9}",
            d.omega1_star,
            d.omega2_star,
            l.iota(d.omega1_star)
        );
    }
    Ok(())
}
