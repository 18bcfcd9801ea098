//! Text schematic: one panel per yz-flat.
//!
//! Panels are listed by `x` descending, then `w` ascending, each introduced by
//! a `w=<w> x=<x>` header line and separated by blank lines. Inside a panel,
//! lines run from `z = n - 1` down to `z = 0` and characters from `y = 0`
//! upward, space-separated; `.` marks an empty cell.

use super::{HypercubeError, Markings, Point4, FAMILY};

pub fn render_schematic(m: &Markings) -> String {
    let n = m.size;
    let mut cells = vec!['.'; n * n * n * n];
    let idx = |p: &Point4| ((p[0] * n + p[1]) * n + p[2]) * n + p[3];
    for (f, fam) in m.families().iter().enumerate() {
        for p in fam.iter() {
            cells[idx(p)] = FAMILY[f];
        }
    }
    let mut panels = Vec::with_capacity(n * n);
    for x in (0..n).rev() {
        for w in 0..n {
            let mut s = format!("w={w} x={x}\n");
            for z in (0..n).rev() {
                let line: Vec<String> = (0..n).map(|y| cells[idx(&[w, x, y, z])].to_string()).collect();
                s.push_str(&line.join(" "));
                s.push('\n');
            }
            panels.push(s);
        }
    }
    panels.join("\n")
}

fn malformed(msg: impl Into<String>) -> HypercubeError {
    HypercubeError::MalformedSchematic(msg.into())
}

fn parse_header(line: &str) -> Option<(usize, usize)> {
    let mut parts = line.split_whitespace();
    let w = parts.next()?.strip_prefix("w=")?.parse().ok()?;
    let x = parts.next()?.strip_prefix("x=")?.parse().ok()?;
    parts.next().is_none().then_some((w, x))
}

/// Inverse of [`render_schematic`]. Marking order within each family is by
/// position in the text.
pub fn parse_schematic(text: &str) -> Result<Markings, HypercubeError> {
    let blocks: Vec<Vec<&str>> = text
        .split("\n\n")
        .map(|b| b.lines().filter(|l| !l.trim().is_empty()).collect::<Vec<_>>())
        .filter(|b| !b.is_empty())
        .collect();
    let n = (blocks.len() as f64).sqrt().round() as usize;
    if n == 0 || n * n != blocks.len() {
        return Err(malformed(format!("{} panels is not a perfect square", blocks.len())));
    }
    let mut fams: [Vec<Point4>; 4] = Default::default();
    let mut seen = vec![false; n * n];
    for block in &blocks {
        let (w, x) = parse_header(block[0]).ok_or_else(|| malformed(format!("bad header {:?}", block[0])))?;
        if w >= n || x >= n || std::mem::replace(&mut seen[w * n + x], true) {
            return Err(malformed(format!("panel w={w} x={x} is out of range or repeated")));
        }
        if block.len() != n + 1 {
            return Err(malformed(format!("panel w={w} x={x} has {} rows, expected {n}", block.len() - 1)));
        }
        for (i, line) in block[1..].iter().enumerate() {
            let z = n - 1 - i;
            let glyphs: Vec<&str> = line.split_whitespace().collect();
            if glyphs.len() != n {
                return Err(malformed(format!("panel w={w} x={x} row z={z} has {} cells", glyphs.len())));
            }
            for (y, g) in glyphs.iter().enumerate() {
                match *g {
                    "." => {}
                    _ => {
                        let f = FAMILY
                            .iter()
                            .position(|c| g.len() == 1 && g.starts_with(*c))
                            .ok_or_else(|| malformed(format!("unknown glyph {g:?}")))?;
                        fams[f].push([w, x, y, z]);
                    }
                }
            }
        }
    }
    Ok(Markings::from_families(n, fams))
}
