//! Minimal SVG output: level sets of `log₁₀ σ_min` and the numerical-range
//! boundary with eigenvalue dots. Plot coordinates are the complex plane with
//! the imaginary axis flipped, written with shortest round-trip formatting.

use std::fmt::{self, Write};

use swanson::spectral::GridRegion;
use swanson::Complex64 as c64;

#[derive(Debug, PartialEq, Eq)]
pub struct EmptyData;

impl fmt::Display for EmptyData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("nothing to plot")
    }
}

/// Lowest contour level drawn.
const MIN_LEVEL: i32 = -16;

fn header(x0: f64, y0: f64, w: f64, h: f64) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"{}\" viewBox=\"{x0} {y0} {w} {h}\">\n",
        (800.0 * h / w).round()
    )
}

fn path(d: &str, extra: &str) -> String {
    format!("<path fill=\"none\" stroke=\"black\" vector-effect=\"non-scaling-stroke\"{extra} d=\"{d}\"/>\n")
}

/// Segments of the level set `f = level` on one grid, by marching squares.
/// `f[i][j]` sits at `(xs[j], ys[i])`.
pub fn level_segments(xs: &[f64], ys: &[f64], f: &[Vec<f64>], level: f64) -> Vec<[(f64, f64); 2]> {
    let mut segs = Vec::new();
    let cross = |p: (f64, f64, f64), q: (f64, f64, f64)| {
        let t = (level - p.2) / (q.2 - p.2);
        (p.0 + t * (q.0 - p.0), p.1 + t * (q.1 - p.1))
    };
    for i in 0..ys.len().saturating_sub(1) {
        for j in 0..xs.len().saturating_sub(1) {
            let a = (xs[j], ys[i], f[i][j]);
            let b = (xs[j + 1], ys[i], f[i][j + 1]);
            let c = (xs[j + 1], ys[i + 1], f[i + 1][j + 1]);
            let d = (xs[j], ys[i + 1], f[i + 1][j]);
            let above = |p: (f64, f64, f64)| p.2 >= level;
            let edges = [(a, b), (b, c), (c, d), (d, a)];
            let hits: Vec<Option<(f64, f64)>> =
                edges.iter().map(|&(p, q)| (above(p) != above(q)).then(|| cross(p, q))).collect();
            match hits.iter().flatten().count() {
                2 => {
                    let pts: Vec<(f64, f64)> = hits.iter().flatten().copied().collect();
                    segs.push([pts[0], pts[1]]);
                }
                4 => {
                    let h: Vec<(f64, f64)> = hits.iter().map(|p| p.unwrap()).collect();
                    let centre_above = 0.25 * (a.2 + b.2 + c.2 + d.2) >= level;
                    if centre_above == above(a) {
                        segs.push([h[0], h[1]]);
                        segs.push([h[2], h[3]]);
                    } else {
                        segs.push([h[3], h[0]]);
                        segs.push([h[1], h[2]]);
                    }
                }
                _ => {}
            }
        }
    }
    segs
}

/// Contours of `log₁₀ σ_min` at `−1, −2, …`, one path per level.
pub fn contour_svg(region: &GridRegion, sigma_min: &[Vec<f64>]) -> Result<String, EmptyData> {
    if sigma_min.len() < 2 || sigma_min.iter().any(|r| r.len() < 2) {
        return Err(EmptyData);
    }
    let ny = sigma_min.len();
    let nx = sigma_min[0].len();
    let xs: Vec<f64> = (0..nx).map(|j| region.re.0 + (region.re.1 - region.re.0) * j as f64 / (nx - 1) as f64).collect();
    let ys: Vec<f64> =
        (0..ny).map(|i| -(region.im.0 + (region.im.1 - region.im.0) * i as f64 / (ny - 1) as f64)).collect();
    let logs: Vec<Vec<f64>> =
        sigma_min.iter().map(|r| r.iter().map(|s| s.max(f64::MIN_POSITIVE).log10()).collect()).collect();
    let lowest = logs.iter().flatten().cloned().fold(f64::INFINITY, f64::min);
    let (w, h) = (region.re.1 - region.re.0, region.im.1 - region.im.0);
    let mut svg = header(region.re.0, -region.im.1, w, h);
    let mut level = -1;
    while level >= MIN_LEVEL && f64::from(level) >= lowest {
        let segs = level_segments(&xs, &ys, &logs, f64::from(level));
        if !segs.is_empty() {
            let mut d = String::new();
            for [p, q] in segs {
                let _ = write!(d, "M{} {}L{} {}", p.0, p.1, q.0, q.1);
            }
            svg.push_str(&path(&d, &format!(" data-level=\"{level}\"")));
        }
        level -= 1;
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

/// Boundary curve through `curve` plus a dot at each of `dots`.
pub fn curve_svg(curve: &[c64], dots: &[c64]) -> Result<String, EmptyData> {
    let pts: Vec<c64> = curve.iter().copied().filter(|z| z.re.is_finite() && z.im.is_finite()).collect();
    if pts.is_empty() {
        return Err(EmptyData);
    }
    let right = dots.iter().map(|z| z.re).fold(4.0f64, f64::max) + 2.0;
    let left = -1.0;
    let w = right - left;
    let h = 0.75 * w;
    let mut svg = header(left, -0.5 * h, w, h);
    let mut d = String::new();
    for (k, z) in pts.iter().enumerate() {
        let _ = write!(d, "{}{} {}", if k == 0 { 'M' } else { 'L' }, z.re, -z.im);
    }
    svg.push_str(&path(&d, ""));
    let r = 0.006 * w;
    for z in dots {
        let _ = writeln!(svg, "<circle cx=\"{}\" cy=\"{}\" r=\"{r}\"/>", z.re, -z.im);
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_level_set() {
        let n = 41;
        let xs: Vec<f64> = (0..n).map(|k| -2.0 + 4.0 * k as f64 / (n - 1) as f64).collect();
        let f: Vec<Vec<f64>> = xs.iter().map(|y| xs.iter().map(|x| (x * x + y * y).sqrt()).collect()).collect();
        let segs = level_segments(&xs, &xs, &f, 1.0);
        assert!(!segs.is_empty());
        for s in segs {
            for (x, y) in s {
                assert!(((x * x + y * y).sqrt() - 1.0).abs() < 0.01);
            }
        }
    }

    #[test]
    fn empty_inputs_rejected() {
        let region = GridRegion::default();
        assert_eq!(contour_svg(&region, &[]), Err(EmptyData));
        assert_eq!(curve_svg(&[], &[c64::new(1.0, 0.0)]), Err(EmptyData));
    }

    #[test]
    fn one_path_per_level() {
        let region = GridRegion { re: (-1.0, 1.0), im: (-1.0, 1.0), resolution: 21 };
        let g: Vec<Vec<f64>> = (0..21)
            .map(|i| {
                (0..21)
                    .map(|j| {
                        let (x, y) = (region.re_at(j), region.im_at(i));
                        0.05 + (x * x + y * y).sqrt()
                    })
                    .collect()
            })
            .collect();
        let svg = contour_svg(&region, &g).unwrap();
        assert_eq!(svg.matches("<path").count(), 1);
        assert!(svg.contains("data-level=\"-1\""));
    }
}
