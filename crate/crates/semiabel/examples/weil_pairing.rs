//! The analytic Weil pairing on Lie E × Lie E* and on N-torsion.

use semiabel::elliptic::CurveInvariants;
use semiabel::pairing::{hodge_weil, ratio_eta_form, ratio_f_tilde, torsion_weil_pairing, weil_pairing};
use semiabel::periods::periods_from_invariants;

fn main() -> semiabel::Result<()> {
    let l = periods_from_invariants(&CurveInvariants::from_real(4.0, 1.0)?)?;
    let d = l.dual();
    let (z, zs) = (l.omega1() * 0.2 + l.omega2() * 0.7, d.omega1_star * 0.6 + d.omega2_star * 0.1);
    println!("W(z, z*)                       = {:.12}", weil_pairing(z, zs, &l).value);
    println!("f~ ratio                       = {:.12}", ratio_f_tilde(z, zs, &l)?);
    println!("exp(eta(z) z* - eta(z*) z)     = {:.12}", ratio_eta_form(z, zs, &l)?);
    for n in 2..=5u32 {
        let w = torsion_weil_pairing(l.omega1() / n as f64, d.omega2_star / n as f64, n, &l)?;
        println!("N = {n}: W(w1/N, w2*/N) = {:.12}, root index {:?}", w.value, w.root_of_unity_index(n, 1e-8));
    }
    println!(
        "hodge(w1, w2*) / (2 pi i) = {:.12}",
        hodge_weil(l.omega1(), d.omega2_star, &l)? / semiabel::Complex64::new(0.0, std::f64::consts::TAU)
    );
    Ok(())
}
