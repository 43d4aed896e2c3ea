//! ℘, ζ, σ and the normalized theta function at a few points.

use semiabel::elliptic::{eta_linear, eta_linear_closed_form, sigma_automorphy_factor, sigma_w, theta_normalized, wp_and_derivative, zeta_w};
use semiabel::{Complex64, Lattice};

fn main() -> semiabel::Result<()> {
    let l = Lattice::new(Complex64::new(1.0, 0.0), Complex64::new(0.3, 1.1))?;
    for z in [Complex64::new(0.25, 0.1), Complex64::new(0.5, 0.55), Complex64::new(-0.7, 2.0)] {
        let (p, dp) = wp_and_derivative(z, &l)?;
        println!("z = {z:.3}");
        println!("  wp = {p:.12}  wp' = {dp:.12}");
        println!("  zeta = {:.12}  sigma = {:.12}", zeta_w(z, &l)?, sigma_w(z, &l)?);
        println!("  eta(z) = {:.12}  closed form = {:.12}", eta_linear(z, &l)?, eta_linear_closed_form(z, &l)?);
        println!("  theta = {:.12}", theta_normalized(z, &l)?);
        let lam = l.point(1, -1);
        let ratio = sigma_w(z + lam, &l)? / sigma_w(z, &l)?;
        println!(
            "  sigma(z+w1-w2)/sigma(z) = {ratio:.12}, automorphy factor = {:.12}",
            sigma_automorphy_factor(lam, z, &l)?
        );
    }
    Ok(())
}
