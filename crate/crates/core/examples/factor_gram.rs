//! Factoring a Gram matrix back into a frame, in both geometries.

use ffframes::construct::mercedes_benz_gram;
use ffframes::frame::{factor_gram_orthogonal, factor_gram_unitary};
use ffframes::{FieldCtx, FormSpace, Mat};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> ffframes::Result<()> {
    let f = FieldCtx::new(5, 2, None)?;
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let psi = Mat::random(&f, 3, 6, &mut rng);
    let g = psi.conj_transpose().mul(&psi);
    let fr = factor_gram_unitary(&g)?;
    println!("rank {} Gram factored into a {}x{} frame; reproduces G: {}", g.rank(), fr.d(), fr.n(), fr.gram() == g);

    // Mercedes-Benz: the real-model target works over F_11 but not over F_5
    for p in [5, 11] {
        let f = FieldCtx::new(p, 1, None)?;
        let g = mercedes_benz_gram(&f)?;
        match factor_gram_orthogonal(&g, &FormSpace::real_model(&f, 2)?) {
            Ok(fr) => println!("F_{p}: MB frame\n{:?}", fr.phi),
            Err(e) => println!("F_{p}: {e}"),
        }
    }
    Ok(())
}
