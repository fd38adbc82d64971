//! Scanning an eigenspace of the Zauner matrix for 4x16 fiducials over F_961.

use ffframes::construct::{gabor_frame, GaborGroup};
use ffframes::field::unitary_field;
use ffframes::search::{fiducial_scan, zauner_matrix};

fn main() -> ffframes::Result<()> {
    let f = unitary_field(31)?;
    let g = GaborGroup::new(&[4], &f)?;
    let z = zauner_matrix(&g)?;
    for (lambda, space) in z.eigen()? {
        println!("eigenvalue z^{} with multiplicity {}", f.log(lambda).unwrap(), space.cols());
        if space.cols() < 2 {
            continue;
        }
        for phi in fiducial_scan(&g, &space)? {
            let exps: Vec<String> = phi.iter().map(|&x| f.format(x)).collect();
            let fr = gabor_frame(&g, &phi)?;
            println!("  fiducial ({}) etf={}", exps.join(", "), fr.classify().flags.is_etf);
        }
    }
    Ok(())
}
