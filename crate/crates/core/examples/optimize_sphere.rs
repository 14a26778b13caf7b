//! Searches for antipodal coverings of S^(d-1) and writes the best
//! configuration as config JSON.
//!
//!     cargo run --release --example optimize_sphere -- 3 8 1 data/sphere3_m8.json

use std::path::PathBuf;

use xray_cover::constructions::save_config;
use xray_cover::optimize::{optimize_antipodal_covering, Schedule};

fn main() -> anyhow::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let d: usize = args.first().map_or(Ok(3), |s| s.parse())?;
    let m: usize = args.get(1).map_or(Ok(8), |s| s.parse())?;
    let seed: u64 = args.get(2).map_or(Ok(1), |s| s.parse())?;
    let out = args.get(3).map(PathBuf::from);

    let run = optimize_antipodal_covering(d, m, seed, &Schedule::default())?;
    println!(
        "d={d} m={m} seed={seed}: covering radius {:.6}° (winning restart seed {})",
        run.best_radius.to_degrees(),
        run.winning_seed
    );
    for r in &run.restarts {
        println!("  restart {:>20}: {:.4}°", r.seed, r.radius.to_degrees());
    }
    if let Some(path) = out {
        save_config(&run.best, &path)?;
        println!("wrote {}", path.display());
    }
    Ok(())
}
