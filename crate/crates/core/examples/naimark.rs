//! Naimark complements: an (a,b,c)-ETF of size d x n gives a (c-a,b,c)-ETF of size (n-d) x n.

use ffframes::construct::exemplar;
use ffframes::frame::naimark_complement;

fn main() -> ffframes::Result<()> {
    for name in ["mb-f25", "mb-f11", "6x27"] {
        let fr = exemplar(name)?;
        let comp = naimark_complement(&fr, None)?;
        let f = fr.field();
        let (p, cp) = (fr.classify(), comp.classify());
        let show = |x: Option<ffframes::Felt>| x.map_or("-".into(), |v| f.format(v));
        println!(
            "{name}: {}x{} (a,c)=({},{}) -> {}x{} (a,c)=({},{}) etf={}",
            p.d,
            p.n,
            show(p.a),
            show(p.c),
            cp.d,
            cp.n,
            show(cp.a),
            show(cp.c),
            cp.flags.is_etf
        );
    }
    Ok(())
}
