//! Hermitian and symmetric forms, isotropic lines, orthonormal bases.

use ffframes::form::unit_line_count;
use ffframes::{Case, FieldCtx, FormSpace, Mat};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> ffframes::Result<()> {
    let f = FieldCtx::new(2, 2, None)?;
    let space = FormSpace::complex_model(&f, 3)?;
    let iso = space.enumerate_isotropic_lines()?;
    let unit = space.enumerate_unit_lines()?;
    println!("F_4^3: {} isotropic lines, {} unit lines (closed form {})", iso.len(), unit.len(), unit_line_count(2, 3));

    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let s = Mat::random(&f, 3, 3, &mut rng);
    let o = space.orthonormalize(&s)?;
    println!("orthonormalized basis:\n{o:?}");
    println!("Gram of basis is identity: {}", space.gram_of(&o).is_identity());

    let g = FieldCtx::new(7, 1, None)?;
    let real = FormSpace::standard(Case::O, &g, 3)?;
    println!("F_7^3 real model discriminant: {:?}", real.discriminant()?);
    Ok(())
}
