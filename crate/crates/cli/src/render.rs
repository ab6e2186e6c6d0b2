use std::fmt::Write as _;

use carpet::geometry::CellLattice;

/// Cells as filled squares, y axis pointing up.
pub fn svg(lat: &CellLattice, size: u32) -> String {
    let scale = lat.scale() as f64;
    let px = size as f64;
    let side = lat.side() as f64 / scale * px;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">"#
    );
    let _ = writeln!(s, r##"<rect width="{size}" height="{size}" fill="#ffffff"/>"##);
    let _ = writeln!(s, r##"<g fill="#1f3b5c" shape-rendering="crispEdges">"##);
    for o in lat.origins() {
        let x = o[0] as f64 / scale * px;
        let y = px - o[1] as f64 / scale * px - side;
        let _ = writeln!(s, r#"<rect x="{x:.4}" y="{y:.4}" width="{side:.4}" height="{side:.4}"/>"#);
    }
    s.push_str("</g>\n</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use carpet::geometry::{boundary_ring, CellLattice};
    use carpet::UscSpec;

    #[test]
    fn one_rect_per_cell() {
        let spec = UscSpec::new(3, boundary_ring(3)).unwrap();
        let lat = CellLattice::new(&spec, 2).unwrap();
        let s = svg(&lat, 90);
        assert_eq!(s.matches("<rect x=").count(), 64);
        assert!(s.contains(r#"<rect x="0.0000" y="80.0000" width="10.0000" height="10.0000"/>"#));
    }
}
