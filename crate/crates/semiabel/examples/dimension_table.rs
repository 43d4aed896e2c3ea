//! Rebuilds the eight-row dimension table from constructed instances.

use semiabel::classifier::{motivic_galois_dims, table_instance, ClassifierConfig, TableRow};

fn main() -> semiabel::Result<()> {
    println!("{:<40} {:>7} {:>7} {:>11}", "row", "dim UR", "Gal CM", "Gal non-CM");
    for row in TableRow::ROWS {
        let cm = motivic_galois_dims(&table_instance(row, true)?, ClassifierConfig::default())?;
        let non_cm = match table_instance(row, false) {
            Ok(m) => motivic_galois_dims(&m, ClassifierConfig::default())?.dim_gal.to_string(),
            Err(_) => "-".to_string(),
        };
        println!("{:<40} {:>7} {:>7} {:>11}", row.label(), cm.dim_ur, cm.dim_gal, non_cm);
    }
    Ok(())
}
