//! X-ray and illumination certificates for almost smooth bodies (cross-polytope
//! coverings, d = 3..8) and for bodies of constant width (d = 3..6).
//!
//!     cargo run --release --example certify_bodies

use xray_cover::certify::{certify, BodyClass, BodyKind};
use xray_cover::constructions::{cross_polytope_config, named_config};

fn main() -> anyhow::Result<()> {
    for d in 3..=8 {
        let class = BodyClass::new(BodyKind::AlmostSmooth, d)?;
        let c = certify(class, &cross_polytope_config(d)?)?;
        println!(
            "almost smooth d = {d}: margin {:+.2e} rad, tight = {}, X <= {}, I <= {}",
            c.margin, c.tight, c.xray_bound, c.illumination_bound
        );
    }
    println!();
    for (d, name) in [
        (3, "cross-polytope-3"),
        (4, "hexagon-pair"),
        (5, "d5"),
        (6, "d6"),
    ] {
        let class = BodyClass::new(BodyKind::ConstantWidth, d)?;
        let c = certify(class, &named_config(name)?)?;
        println!("--- constant width, d = {d}, config {name}");
        print!("{}", c.summary());
    }
    Ok(())
}
