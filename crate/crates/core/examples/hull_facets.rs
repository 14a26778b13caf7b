//! Facet enumeration of the hexagon-pair configuration in E^4: 36 simplicial
//! facets, each built from two consecutive vertices of each hexagon.
//!
//!     cargo run --release --example hull_facets

use xray_cover::constructions::hexagon_pair_config;
use xray_cover::hull::ConvexHull;

fn main() -> anyhow::Result<()> {
    let points: Vec<Vec<f64>> = hexagon_pair_config()
        .expanded()
        .into_iter()
        .map(|p| p.into_coords())
        .collect();
    let hull = ConvexHull::new(&points)?;
    println!(
        "{} facets, simplicial = {}, gift wrapping used = {}",
        hull.facets().len(),
        hull.is_simplicial(),
        hull.wrapped()
    );
    for f in hull.facets().iter().take(6) {
        println!(
            "  vertices {:?}  normal {}  offset {:.12}",
            f.vertex_indices, f.outward_normal, f.support_offset
        );
    }
    let offset = hull.facets()[0].support_offset;
    println!(
        "offset sqrt(3/8) = {:.12}; covering radius acos(offset) = {:.6}°",
        (3.0f64 / 8.0).sqrt(),
        offset.acos().to_degrees()
    );
    Ok(())
}
