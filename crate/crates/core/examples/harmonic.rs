//! Harmonic frames from modular difference sets.

use ffframes::construct::{harmonic_frame, DiffSet};
use ffframes::field::unitary_field;
use ffframes::search::modular_difference_sets;

fn main() -> ffframes::Result<()> {
    let f = unitary_field(27)?;
    let ds = DiffSet::new(14, vec![0, 4, 6, 7, 8, 11, 13], 3)?;
    println!("difference counts mod 3: {:?}", ds.difference_counts().iter().map(|c| c % 3).collect::<Vec<_>>());
    let fr = harmonic_frame(&ds, &f)?;
    let p = fr.classify();
    println!("{}x{} harmonic frame over F_{}, ETF: {}", p.d, p.n, f.order(), p.flags.is_etf);

    let f = unitary_field(5)?;
    let sets = modular_difference_sets(6, 5)?;
    let etfs = sets
        .iter()
        .filter(|ds| harmonic_frame(ds, &f).is_ok_and(|fr| fr.classify().flags.is_etf))
        .count();
    println!("Z/6: {} 5-modular difference sets, {} give ETFs over F_25", sets.len(), etfs);
    Ok(())
}
