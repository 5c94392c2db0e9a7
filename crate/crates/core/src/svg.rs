//! SVG plots of hook supports on the truncation box.
//!
//! Output uses integer coordinates only, so identical inputs give identical bytes.

use std::fmt::Write;

use crate::ext::ExtNat;
use crate::grid::{GridPoint, HookDecomposition, HookModule};

const TARGET_SIZE: u64 = 400;
const MARGIN: u64 = 40;
const COLORS: [&str; 2] = ["#1f77b4", "#d62728"];

fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

/// Corners of the support of `hook` clipped to `[0, bound)`, counterclockwise.
fn outline(hook: &HookModule, bound: GridPoint) -> Vec<(u64, u64)> {
    let p = hook.p();
    let clip = |v: ExtNat, edge: u64| match v {
        ExtNat::Fin(v) => v.min(edge),
        ExtNat::Inf => edge,
    };
    let (px, py) = (p.x.min(bound.x), p.y.min(bound.y));
    let qx = clip(hook.q().0, bound.x);
    let qy = clip(hook.q().1, bound.y);
    if qx >= bound.x || qy >= bound.y {
        return vec![(px, py), (bound.x, py), (bound.x, bound.y), (px, bound.y)];
    }
    vec![
        (px, py),
        (bound.x, py),
        (bound.x, qy),
        (qx, qy),
        (qx, bound.y),
        (px, bound.y),
    ]
}

/// Renders one or two hook multisets over the box `[0, bound)`.
///
/// The second multiset, when given, is drawn on top in a second color.
pub fn render_supports(
    first: &HookDecomposition,
    second: Option<&HookDecomposition>,
    bound: GridPoint,
) -> String {
    let scale = (TARGET_SIZE / bound.x.max(bound.y).max(1)).max(1);
    let (w, h) = (bound.x * scale, bound.y * scale);
    let (width, height) = (w + 2 * MARGIN, h + 2 * MARGIN);
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    );
    let _ = writeln!(
        out,
        r#"<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>"#
    );
    // plot coordinates: origin bottom left, one unit per grid step
    let _ = writeln!(
        out,
        r#"<g transform="translate({MARGIN} {}) scale({scale} -{scale})">"#,
        MARGIN + h
    );
    for (k, decomp) in std::iter::once(first).chain(second).enumerate() {
        let color = COLORS[k];
        let _ = writeln!(
            out,
            r#"<g class="input{k}" fill="{color}" fill-opacity="0.4" stroke="{color}" stroke-width="0">"#
        );
        for hook in decomp.hooks() {
            let points: Vec<String> = outline(hook, bound)
                .iter()
                .map(|(x, y)| format!("{x},{y}"))
                .collect();
            let _ = writeln!(
                out,
                r#"<polygon points="{}"><title>{}</title></polygon>"#,
                points.join(" "),
                escape(&hook.to_string())
            );
        }
        let _ = writeln!(out, "</g>");
    }
    let _ = writeln!(
        out,
        r#"<rect x="0" y="0" width="{}" height="{}" fill="none" stroke="black" vector-effect="non-scaling-stroke"/>"#,
        bound.x, bound.y
    );
    let _ = writeln!(out, "</g>");
    let base = MARGIN + h;
    let _ = writeln!(
        out,
        r#"<g font-family="monospace" font-size="12" fill="black">"#
    );
    let _ = writeln!(
        out,
        r#"<text x="{MARGIN}" y="{}" text-anchor="middle">0</text>"#,
        base + 16
    );
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
        MARGIN + w,
        base + 16,
        bound.x
    );
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" text-anchor="end">{}</text>"#,
        MARGIN - 6,
        MARGIN + 4,
        bound.y
    );
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" text-anchor="middle">f</text>"#,
        MARGIN + w / 2,
        base + 30
    );
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" text-anchor="middle">g</text>"#,
        MARGIN - 24,
        MARGIN + h / 2
    );
    let _ = writeln!(out, "</g>");
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(x: u64, y: u64) -> GridPoint {
        GridPoint::new(x, y)
    }

    #[test]
    fn hook_outline_is_an_l_shape() {
        let h = HookModule::bounded(pt(1, 2), pt(3, 5)).unwrap();
        assert_eq!(
            outline(&h, pt(10, 10)),
            vec![(1, 2), (10, 2), (10, 5), (3, 5), (3, 10), (1, 10)]
        );
        let q = HookModule::free(pt(1, 2));
        assert_eq!(
            outline(&q, pt(10, 10)),
            vec![(1, 2), (10, 2), (10, 10), (1, 10)]
        );
    }

    #[test]
    fn empty_input_draws_the_frame() {
        let svg = render_supports(&HookDecomposition::default(), None, pt(4, 4));
        assert!(svg.starts_with("<svg"));
        assert!(!svg.contains("<polygon"));
        assert!(svg.contains(r#"width="4" height="4" fill="none""#));
    }

    #[test]
    fn overlay_uses_two_groups() {
        let a = HookDecomposition::new(vec![HookModule::bounded(pt(0, 0), pt(1, 1)).unwrap()]);
        let svg = render_supports(&a, Some(&a), pt(3, 3));
        assert!(svg.contains("input0") && svg.contains("input1"));
        assert_eq!(svg, render_supports(&a, Some(&a), pt(3, 3)));
        assert!(svg.contains("<title>&lt;(0,0),(1,1)&gt;</title>"));
    }
}
