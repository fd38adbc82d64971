//! Recording certified frames in a JSON-lines catalog and re-verifying them.

use ffframes::catalog::{append, read_catalog, CatalogEntry};
use ffframes::construct::exemplar;

fn main() -> ffframes::Result<()> {
    let dir = std::env::temp_dir().join(format!("ffframes-catalog-{}", std::process::id()));
    std::fs::create_dir_all(&dir)?;
    let path = dir.join("catalog.jsonl");
    for name in ["5x16", "6x27", "mb-f25"] {
        let fr = exemplar(name)?;
        append(&path, &CatalogEntry::new(&fr, serde_json::json!({"kind": "exemplar", "name": name})))?;
    }
    for e in read_catalog(&path)? {
        println!("{} {}x{} reverified={}", &e.id[..16], e.params.d, e.params.n, e.reverify()?);
    }
    std::fs::remove_dir_all(&dir)?;
    Ok(())
}
