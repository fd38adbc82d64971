//! ETFs as cliques in the graph of isotropic lines.

use ffframes::search::{build_clique_instance, find_clique};
use ffframes::{FieldCtx, FormSpace};

fn main() -> ffframes::Result<()> {
    for (p, d, target) in [(3, 5, 16), (2, 6, 27)] {
        let f = FieldCtx::new(p, 2, None)?;
        let inst = build_clique_instance(&FormSpace::complex_model(&f, d)?)?.with_target(target);
        let rep = find_clique(&inst);
        let fr = inst.clique_frame(&rep.best_clique)?;
        let params = fr.classify();
        println!(
            "F_{}^{d}: {} lines, clique of size {} after {} nodes in {:.2}s; etf={} verified={}",
            f.order(),
            inst.vertices.len(),
            rep.certified_size,
            rep.nodes_explored,
            rep.elapsed.as_secs_f64(),
            params.flags.is_etf,
            inst.verify_clique(&rep.best_clique)
        );
    }
    Ok(())
}
