//! Exact and sampled covering radii of the shipped constructions, and the
//! closed-form radius of an orthogonal join.
//!
//!     cargo run --release --example covering_radius

use xray_cover::constructions::{join_covering_radius, named_config, FIXED_NAMES};

fn main() -> anyhow::Result<()> {
    println!(
        "{:<14} {:>3} {:>6} {:>12} {:>12}",
        "config", "d", "pairs", "exact", "sampled"
    );
    for name in ["cross-polytope-3", "polygon-16"]
        .into_iter()
        .chain(FIXED_NAMES)
    {
        let cfg = named_config(name)?;
        let exact = cfg.covering_radius_exact()?;
        let sampled = cfg.covering_radius_sampled(200_000, 1);
        println!(
            "{:<14} {:>3} {:>6} {:>11.6}° {:>11.6}°",
            name,
            cfg.dim(),
            cfg.pairs(),
            exact.radius.to_degrees(),
            sampled.radius.to_degrees()
        );
    }

    let s8 = named_config("s2-8")?.covering_radius_exact()?.radius;
    let s16 = named_config("s2-16")?.covering_radius_exact()?.radius;
    let polygon = 11.25f64.to_radians();
    println!(
        "\njoin formula: 16-gon + s2-8 -> {:.6}°, s2-16 + s2-16 -> {:.6}°",
        join_covering_radius(polygon, s8)?.to_degrees(),
        join_covering_radius(s16, s16)?.to_degrees()
    );
    Ok(())
}
