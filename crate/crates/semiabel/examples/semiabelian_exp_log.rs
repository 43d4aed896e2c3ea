//! The exponential and logarithm of an extension G of E by the multiplicative group.

use semiabel::elliptic::CurveInvariants;
use semiabel::periods::periods_from_invariants;
use semiabel::semiabelian::{exp_g, exp_g_kernel, generalized_log_g, kernel_residual, period_matrix_g, quasi_quasi_periods, ExtensionParam};
use semiabel::Complex64;

fn main() -> semiabel::Result<()> {
    let l = periods_from_invariants(&CurveInvariants::from_real(4.0, 0.0)?)?;
    let q = ExtensionParam::from_primal(l.omega1() * 0.3 + l.omega2() * 0.45, &l)?;
    let (qq1, qq2) = quasi_quasi_periods(&q, &l)?;
    println!("q = {:.9}, quasi-quasi-periods {qq1:.12}, {qq2:.12}", q.q);
    for k in exp_g_kernel(&q, &l)? {
        println!("kernel generator (z, t) = ({:.9}, {:.9})", k.0, k.1);
    }
    let (z, t) = (Complex64::new(0.8, 0.6), Complex64::new(0.25, -1.0));
    let r = exp_g(z, t, &q, &l)?;
    println!("exp_G({z:.3}, {t:.3}) = base {:?}, fiber {:.12}", r.base, r.fiber());
    let g = generalized_log_g(&r, &q, &l)?;
    println!("log_G = ({:.12}, {:.12}), winding {:?}/{:?}", g.z.value, g.t.value, g.z.winding, g.t.winding);
    println!("distance to the kernel: {:.2e}", kernel_residual(g.z.value - z, g.t.value - t, &q, &l)?);
    let m = period_matrix_g(&q, &l)?;
    println!("det of the elliptic period block: {:.12}", m.det_omega_a());
    for r in 0..3 {
        println!("  {:?}", m.matrix().row(r).iter().map(|c| format!("{c:.6}")).collect::<Vec<_>>());
    }
    Ok(())
}
