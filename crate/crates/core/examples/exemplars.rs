//! The stored exemplar frames and their ETF parameters.

use ffframes::construct::{exemplar_verified, EXEMPLAR_NAMES};

fn main() -> ffframes::Result<()> {
    for name in EXEMPLAR_NAMES {
        let ex = exemplar_verified(name)?;
        let fr = &ex.frame;
        let p = fr.classify();
        let f = fr.field();
        let show = |x: Option<ffframes::Felt>| x.map_or("-".to_string(), |v| f.format(v));
        println!(
            "{name:<12} {}x{:<3} over F_{:<4} etf={} (a,b,c)=({},{},{}) gerzon={}",
            p.d,
            p.n,
            f.order(),
            p.flags.is_etf,
            show(p.a),
            show(p.b),
            show(p.c),
            p.flags.gerzon_equality
        );
    }
    Ok(())
}
