//! Dimension invariants of a 1-motive given by a point of G and a parameter Q.

use semiabel::classifier::{motivic_galois_dims, non_cm_curve, ClassifierConfig, OneMotiveElliptic};
use semiabel::periods::periods_from_invariants;
use semiabel::semiabelian::{exp_g, ExtensionParam};
use semiabel::Complex64;

fn main() -> semiabel::Result<()> {
    let curve = non_cm_curve();
    let l = periods_from_invariants(&curve)?;
    let q = ExtensionParam::from_primal(l.omega1() * 0.5, &l)?;
    let p = l.omega1() * (2f64.sqrt() - 1.0) + l.omega2() * (std::f64::consts::PI - 3.0);
    let r = exp_g(p, Complex64::new(0.3, 0.2), &q, &l)?;
    let m = OneMotiveElliptic::new(curve, l, vec![q], vec![r], None)?;
    let rep = motivic_galois_dims(&m, ClassifierConfig::default())?;
    println!("row {:?}: {}", rep.table_row.number(), rep.table_row.label());
    println!("dim B = {}, dim B_Q = {}, dim Z(1) = {}", rep.dim_b, rep.dim_b_q, rep.dim_z1);
    println!("dim UR = {}, dim Gal = {} (confidence {})", rep.dim_ur, rep.dim_gal, rep.confidence);
    println!("point torsion {:?}, parameter torsion {:?}", rep.point_torsion, rep.param_torsion);
    for note in &rep.notes {
        println!("note: {note}");
    }
    Ok(())
}
