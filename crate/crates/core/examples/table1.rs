//! Projecting the d = 2 SIC fiducial from Q(zeta_24) to finite fields.

use ffframes::cyclotomic::{sic_fiducial_d2, table1_project};

fn main() {
    let phi = sic_fiducial_d2();
    for q in [23, 47, 71, 5, 7] {
        match table1_project(&phi, 24, q) {
            Ok(fr) => {
                let p = fr.classify();
                println!("q={q}: {}x{} over F_{} etf={}", p.d, p.n, q * q, p.flags.is_etf);
            }
            Err(e) => println!("q={q}: {e}"),
        }
    }
}
