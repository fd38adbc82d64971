//! Gabor frames over F_9 from the Zauner fiducials, d = 2^m.

use std::time::Instant;

use ffframes::construct::{gabor_frame, zauner_fiducial, zauner_group};

fn main() -> ffframes::Result<()> {
    for m in [1, 3, 5] {
        let t = Instant::now();
        let g = zauner_group(m)?;
        let phi = zauner_fiducial(m)?;
        let fr = gabor_frame(&g, &phi)?;
        let p = fr.classify();
        println!(
            "m={m}: {}x{} etf={} gerzon={} ({:.2}s)",
            p.d,
            p.n,
            p.flags.is_etf,
            p.flags.gerzon_equality,
            t.elapsed().as_secs_f64()
        );
    }
    Ok(())
}
