//! Static SVG rendering of a T-representation: one circle per block,
//! representative stars filled, antipodes hollow, degeneracies labeled.

use std::fmt::Write;

use spinrep::constellation::Star;

use crate::formats::TRepFile;

const SPHERE_R: f64 = 80.0;
const CELL: f64 = 220.0;
const COLORS: [&str; 6] = [
    "#c0392b", "#d68910", "#2471a3", "#1e8449", "#7d3c98", "#5d6d7e",
];

pub fn render_svg(t: &TRepFile, spheres_as_radii: bool) -> String {
    let n = t.blocks.len().max(1);
    let width = CELL * n as f64;
    let height = CELL + 70.0;
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<text x="10" y="20" font-family="monospace" font-size="14">2s = {}, trace component = {:.6}</text>"#,
        t.two_s, t.trace_component
    );
    if t.blocks.is_empty() {
        let _ = writeln!(
            svg,
            r#"<text x="10" y="48" font-family="monospace" font-size="13">no blocks (maximally mixed direction)</text>"#
        );
    }
    let w_max = t
        .blocks
        .iter()
        .map(|b| b.w)
        .fold(0.0_f64, f64::max)
        .max(1e-300);
    for (k, block) in t.blocks.iter().enumerate() {
        let cx = CELL * k as f64 + CELL / 2.0;
        let cy = CELL / 2.0 + 40.0;
        let r = if spheres_as_radii {
            SPHERE_R * (block.w / w_max).max(0.05)
        } else {
            SPHERE_R
        };
        let color = COLORS[(block.sigma as usize - 1) % COLORS.len()];
        let _ = writeln!(
            svg,
            r#"<circle cx="{cx:.1}" cy="{cy:.1}" r="{r:.1}" fill="none" stroke="{color}" stroke-width="1.5"/>"#
        );
        // equator hint
        let _ = writeln!(
            svg,
            r#"<ellipse cx="{cx:.1}" cy="{cy:.1}" rx="{r:.1}" ry="{:.1}" fill="none" stroke="{color}" stroke-width="0.4" stroke-dasharray="3,3"/>"#,
            r * 0.25
        );

        // cluster stars for degeneracy labels
        let mut clusters: Vec<(Star, usize, bool)> = Vec::new(); // (star, count, is_rep)
        let rep_set: Vec<usize> = block.constellation.representative.clone();
        'stars: for (idx, sj) in block.constellation.stars.iter().enumerate() {
            let star = Star::new(sj.theta, sj.phi);
            let is_rep = rep_set.contains(&idx);
            for (existing, count, existing_rep) in clusters.iter_mut() {
                if existing.angle_to(&star) < 1e-6 && *existing_rep == is_rep {
                    *count += 1;
                    continue 'stars;
                }
            }
            clusters.push((star, 1, is_rep));
        }
        for (star, count, is_rep) in &clusters {
            let [x, y, z] = star.unit_vector();
            let px = cx + 0.92 * r * x;
            let py = cy - 0.92 * r * y;
            let dot_r = if z >= 0.0 { 5.0 } else { 3.5 };
            if *is_rep {
                let _ = writeln!(
                    svg,
                    r#"<circle cx="{px:.1}" cy="{py:.1}" r="{dot_r}" fill="{color}" stroke="black" stroke-width="0.5"/>"#
                );
            } else {
                let _ = writeln!(
                    svg,
                    r#"<circle cx="{px:.1}" cy="{py:.1}" r="{dot_r}" fill="white" stroke="{color}" stroke-width="1.2"/>"#
                );
            }
            if *count > 1 {
                let _ = writeln!(
                    svg,
                    r#"<text x="{:.1}" y="{:.1}" font-family="monospace" font-size="11">x{count}</text>"#,
                    px + 7.0,
                    py - 4.0
                );
            }
        }
        let parity = if block.constellation.parity >= 0 {
            "+1"
        } else {
            "-1"
        };
        let _ = writeln!(
            svg,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle" font-family="monospace" font-size="12">sigma = {}, w = {:.6}, parity {parity}</text>"#,
            cx,
            cy + SPHERE_R + 28.0,
            block.sigma,
            block.w
        );
    }
    svg.push_str("</svg>\n");
    svg
}
