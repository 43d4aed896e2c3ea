//! Integer relations and ℚ-ranks found by lattice reduction.

use semiabel::relation::{detect_integer_relation, rational_rank};
use semiabel::Complex64;

fn main() {
    let (a, b) = (Complex64::new(0.6173, 0.3), Complex64::new(-0.2, 1.1));
    let v = [a, b, a * 17.0 - b * 5.0];
    match detect_integer_relation(&v, 1000, 1e-9) {
        Some(r) => println!(
            "relation {:?}, residual {:.1e}, verified {}",
            r.coefficients, r.residual, r.verified_at_higher_precision
        ),
        None => println!("no relation"),
    }
    let pi = Complex64::new(std::f64::consts::PI, 0.0);
    let e = Complex64::new(std::f64::consts::E, 0.0);
    println!("pi, e: {:?}", detect_integer_relation(&[pi, e], 1000, 1e-9).map(|r| r.coefficients));
    let r = rational_rank(&[a, b, a + b, a * 0.5, pi], 1000, 1e-9);
    println!("rank {} with basis {:?}", r.rank, r.basis);
    for c in &r.certificates {
        println!("  certificate {:?}", c.coefficients);
    }
}
