//! Exploratory: the finite Cauchy-transform surrogate of a rescaled family,
//! evaluated on a grid one unit above the real axis, against the transform
//! of the standard Cauchy law.

use finfree::scenarios::{default_config, run};

fn main() -> finfree::Result<()> {
    let mut cfg = default_config("heavy-tail-explore")?;
    cfg.degrees = vec![80];
    cfg.out_dir = Some(std::env::temp_dir().join("finfree_heavy_tail"));
    let verdict = run("heavy-tail-explore", &cfg)?;
    println!(
        "sup gap to the limit transform on the grid: {}",
        verdict.metrics["sup_gap_vs_limit_transform_on_grid"]
    );
    println!(
        "grid CSV written under {:?}",
        cfg.out_dir.as_ref().unwrap()
    );
    Ok(())
}
