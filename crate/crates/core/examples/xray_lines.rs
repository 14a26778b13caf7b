//! Vertex normal cones, X-ray line verification and search, and the
//! antipodal / weakly neighbourly report over the polytope corpus.
//!
//!     cargo run --release --example xray_lines

use xray_cover::polytope::{corpus, verify_xray_lines, wna_check, xray_upper_bound, LineSet};
use xray_cover::sphere::UnitVector;

fn main() -> anyhow::Result<()> {
    let cube = corpus::cube(3);
    let diagonals: Vec<UnitVector> = [[1.0, 1.0, 1.0], [1.0, 1.0, -1.0], [1.0, -1.0, 1.0]]
        .iter()
        .map(|v| UnitVector::new(v.to_vec()))
        .collect::<Result<_, _>>()?;
    let report = verify_xray_lines(&cube, &LineSet::new(3, diagonals)?)?;
    println!(
        "cube with three diagonals: covered = {}, uncovered vertices {:?}",
        report.covered, report.failing_vertices
    );

    println!(
        "\n{:<20} {:>3} {:>4} {:>9} {:>6} {:>8} {:>6}",
        "polytope", "d", "v", "antipodal", "WNA", "X >=", "X <="
    );
    for (name, p) in corpus::all() {
        let w = wna_check(&p)?;
        let s = xray_upper_bound(&p, 128, 0)?;
        println!(
            "{:<20} {:>3} {:>4} {:>9} {:>6} {:>8} {:>6}",
            name,
            p.dim(),
            p.vertex_count(),
            w.is_antipodal,
            w.is_wna(),
            w.xray_lower_bound
                .map_or("-".to_string(), |b| b.to_string()),
            s.count
        );
    }
    Ok(())
}
