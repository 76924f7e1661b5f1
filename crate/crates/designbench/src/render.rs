//! Grayscale pictures of density grids: PGM (ASCII `P2`) and SVG.
//! Solid (1) is black and void (0) white; row 0 is the top of the image.

use std::fmt::Write as _;

use designbench_core::problem::Grid;

fn level(x: f64) -> u8 {
    let x = if x.is_nan() { 0.0 } else { x.clamp(0.0, 1.0) };
    (255.0 * (1.0 - x)).round() as u8
}

/// `grid` rescaled so its range maps onto `[0, 1]`.
fn normalized(grid: &Grid) -> Grid {
    let finite = grid.data.iter().copied().filter(|v| v.is_finite());
    let (lo, hi) = finite.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
    let span = hi - lo;
    let data = grid.data.iter().map(|&v| if span > 0.0 { (v - lo) / span } else { 0.0 }).collect();
    Grid { nely: grid.nely, nelx: grid.nelx, data }
}

/// Width `nelx`, height `nely`, maxval 255.
pub fn pgm(grid: &Grid) -> String {
    let mut out = format!("P2\n{} {}\n255\n", grid.nelx, grid.nely);
    for row in grid.data.chunks(grid.nelx.max(1)) {
        let line: Vec<String> = row.iter().map(|&x| level(x).to_string()).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

fn cells(out: &mut String, grid: &Grid, x0: usize, y0: usize) {
    for r in 0..grid.nely {
        for c in 0..grid.nelx {
            let g = level(grid.at(r, c));
            writeln!(out, r#"<rect x="{}" y="{}" width="1" height="1" fill="rgb({g},{g},{g})"/>"#, x0 + c, y0 + r)
                .unwrap();
        }
    }
}

/// One unit square per cell.
pub fn svg(grid: &Grid) -> String {
    let mut out = format!(
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" shape-rendering="crispEdges">"#,
        w = grid.nelx,
        h = grid.nely
    );
    out.push('\n');
    cells(&mut out, grid, 0, 0);
    out.push_str("</svg>\n");
    out
}

/// Side-by-side titled panels, each rescaled to its own range.
pub fn svg_panels(panels: &[(&str, &Grid)]) -> String {
    const GAP: usize = 4;
    const TITLE: usize = 8;
    let w: usize = panels.iter().map(|(_, g)| g.nelx).sum::<usize>() + GAP * panels.len().saturating_sub(1);
    let h = TITLE + panels.iter().map(|(_, g)| g.nely).max().unwrap_or(0);
    let mut out = format!(
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" shape-rendering="crispEdges">"#
    );
    out.push('\n');
    let mut x0 = 0;
    for (title, grid) in panels {
        writeln!(out, r#"<text x="{x0}" y="{}" font-size="{}" font-family="sans-serif">{title}</text>"#, TITLE - 2, TITLE - 2)
            .unwrap();
        cells(&mut out, &normalized(grid), x0, TITLE);
        x0 += grid.nelx + GAP;
    }
    out.push_str("</svg>\n");
    out
}
