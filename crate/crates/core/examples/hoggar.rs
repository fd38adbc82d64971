//! Lifting the 8x64 Zauner ETF over F_9 to Hoggar's lines and projecting back.

use ffframes::construct::zauner_frame;
use ffframes::cyclotomic::{cyclotomic_hom, hoggar_lift, project_gram, CycMatrix, GaussianRational};
use ffframes::field::unitary_field;

fn main() -> ffframes::Result<()> {
    let h = zauner_frame(3)?.gram();
    let lift = hoggar_lift(&h)?;
    let c = GaussianRational::from_parts(24, 0);
    println!("S + 3I is self-adjoint: {}", lift.is_self_adjoint());
    println!("(S + 3I)^2 = 24 (S + 3I): {}", lift.mul(&lift) == lift.scale(&c));
    println!("rank over Q(i): {}", lift.rank());

    let g = CycMatrix::from_gauss(&lift).expect("integral entries");
    for q in [3, 7, 11] {
        let f = unitary_field(q)?;
        match project_gram(&g, &cyclotomic_hom(4, &f)?) {
            Ok(fr) => {
                let p = fr.classify();
                println!("q={q}: {}x{} etf={}", p.d, p.n, p.flags.is_etf);
            }
            Err(e) => println!("q={q}: {e}"),
        }
    }
    Ok(())
}
