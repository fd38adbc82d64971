//! Finite field arithmetic: Conway fields, conjugation, norms, roots of unity.

use ffframes::field::unitary_field;
use ffframes::FieldCtx;

fn main() -> ffframes::Result<()> {
    let f = FieldCtx::new(3, 2, None)?;
    println!("F_{} with modulus {:?} (low to high)", f.order(), f.modulus());
    for k in 0..8 {
        let x = f.zeta_pow(k);
        println!("z^{k} = {:<6} conj = {:<6} norm = {}", f.format(x), f.format(f.conj(x)?), f.format(f.norm_to_base(x)?));
    }

    let f = unitary_field(31)?;
    let w = f.root_of_unity(8)?;
    println!("in F_{}: 8th root of unity {} of order {}", f.order(), f.format(w), f.mult_order(w));
    let beta = f.from_int(5);
    let s = f.solve_norm(beta)?;
    println!("N({}) = {}", f.format(s), f.format(f.norm_to_base(s)?));
    println!("unit circle has {} elements", f.unit_circle()?.len());
    Ok(())
}
