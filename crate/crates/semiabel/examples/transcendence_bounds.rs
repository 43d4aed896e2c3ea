//! Conjectural transcendence-degree lower bounds for a few motives.

use semiabel::classifier::{conjecture_bounds, table_instance, ClassifierConfig, TableRow};

fn main() -> semiabel::Result<()> {
    for row in [TableRow::QRTorsion, TableRow::DependentNotDeficient, TableRow::Independent] {
        for cm in [true, false] {
            let b = conjecture_bounds(&table_instance(row, cm)?, ClassifierConfig::default())?;
            println!("{:<38} cm={cm:<5} SA >= {}  WSA >= {}", row.label(), b.sa, b.wsa_v1);
        }
    }
    Ok(())
}
