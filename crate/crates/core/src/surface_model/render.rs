//! Deterministic drawings of a brick diagram and its co-oriented arcs.
//!
//! Rows follow word positions, one band per row. A plumbing arc runs down
//! column `i` from `b_{i,s}` to `b_{i,s+1}` with one arrow glyph at its
//! midpoint; its image is drawn dashed along column `i+1`.

use std::fmt::Write;

use super::BrickDiagram;
use crate::branched_surface::{ArcAssignment, ArcId, Direction};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RenderFormat {
    Svg,
    Ascii,
}

impl std::str::FromStr for RenderFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "svg" => Ok(Self::Svg),
            "ascii" => Ok(Self::Ascii),
            other => Err(Error::Parse(format!("unknown render format {other:?}"))),
        }
    }
}

const CELL: usize = 4;
const X0: usize = 40;
const DX: usize = 60;
const Y0: usize = 30;
const DY: usize = 20;

pub fn render(d: &BrickDiagram, a: Option<&ArcAssignment>, f: RenderFormat) -> Result<String> {
    if let Some(a) = a {
        if a.diagram() != d {
            return Err(Error::ModelMismatch(format!(
                "assignment is for {}, diagram is {}",
                a.word(),
                d.word()
            )));
        }
    }
    let arcs: Vec<(ArcId, Direction)> = a.map(|a| a.iter().collect()).unwrap_or_default();
    Ok(match f {
        RenderFormat::Ascii => ascii(d, &arcs),
        RenderFormat::Svg => svg(d, &arcs),
    })
}

/// Word positions of the two bands bounding an arc.
fn span(d: &BrickDiagram, arc: ArcId) -> (usize, usize) {
    let col = d.column(arc.column);
    (col[arc.ordinal - 1], col[arc.ordinal % col.len()])
}

fn glyph(dir: Direction) -> char {
    match dir {
        Direction::Left => '<',
        Direction::Right => '>',
    }
}

fn ascii(d: &BrickDiagram, arcs: &[(ArcId, Direction)]) -> String {
    let n = d.strands();
    let width = CELL * (n - 1) + 1;
    let mut out = String::new();
    for (p, &l) in d.word().letters().iter().enumerate() {
        let mut row: Vec<char> = (0..width)
            .map(|x| if x % CELL == 0 { '|' } else { ' ' })
            .collect();
        row[CELL * (l - 1) + 1..CELL * l].fill('-');
        let mut line: String = row.into_iter().collect();
        let notes: Vec<String> = arcs
            .iter()
            .filter(|(arc, _)| span(d, *arc).0 == p)
            .map(|(arc, dir)| format!("α({},{}){}", arc.column, arc.ordinal, glyph(*dir)))
            .collect();
        if !notes.is_empty() {
            line.push_str("  ");
            line.push_str(&notes.join(" "));
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

fn svg(d: &BrickDiagram, arcs: &[(ArcId, Direction)]) -> String {
    let n = d.strands();
    let rows = d.word().len();
    let width = 2 * X0 + DX * (n - 1);
    let height = 2 * Y0 + DY * rows.saturating_sub(1);
    let x = |k: usize| X0 + DX * (k - 1);
    let y = |p: usize| Y0 + DY * p;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    );
    let _ = writeln!(s, r#"<g class="strands" stroke="black" stroke-width="2">"#);
    for k in 1..=n {
        let _ = writeln!(
            s,
            r#"<line x1="{0}" y1="{1}" x2="{0}" y2="{2}"/>"#,
            x(k),
            Y0 - DY / 2,
            height - Y0 + DY / 2
        );
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(s, r#"<g class="bands" stroke="black" stroke-width="4">"#);
    for (p, &l) in d.word().letters().iter().enumerate() {
        let _ = writeln!(
            s,
            r#"<line x1="{}" y1="{2}" x2="{}" y2="{2}"/>"#,
            x(l),
            x(l + 1),
            y(p)
        );
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(s, r#"<g class="arcs" fill="none" stroke-width="1.5">"#);
    let bottom_edge = height - Y0 + DY / 2;
    for &(arc, dir) in arcs {
        let (top, bottom) = span(d, arc);
        // Vertical runs, split across the seam for a wrap arc.
        let runs = if bottom > top {
            vec![(y(top), y(bottom))]
        } else {
            vec![(y(top), bottom_edge), (Y0 - DY / 2, y(bottom))]
        };
        let px = x(arc.column) + DX / 3;
        let ix = x(arc.column + 1) - DX / 6;
        for &(y1, y2) in &runs {
            let _ = writeln!(
                s,
                r#"<line class="plumbing" stroke="blue" x1="{px}" y1="{y1}" x2="{px}" y2="{y2}"/>"#
            );
            let _ = writeln!(
                s,
                r#"<line class="image" stroke="red" stroke-dasharray="4 3" x1="{ix}" y1="{y1}" x2="{ix}" y2="{y2}"/>"#
            );
        }
        let (y1, y2) = runs[0];
        let my = (y1 + y2) / 2;
        let pts = match dir {
            Direction::Left => format!(
                "{},{} {},{} {},{}",
                px - 6,
                my,
                px + 2,
                my - 4,
                px + 2,
                my + 4
            ),
            Direction::Right => format!(
                "{},{} {},{} {},{}",
                px + 6,
                my,
                px - 2,
                my - 4,
                px - 2,
                my + 4
            ),
        };
        let _ = writeln!(
            s,
            r#"<polygon class="arrow" data-arc="{},{}" fill="blue" stroke="none" points="{pts}"/>"#,
            arc.column, arc.ordinal
        );
    }
    let _ = writeln!(s, "</g>");
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braid_core::parse_braid;
    use crate::branched_surface::manual_assign;
    use crate::surface_model::build_diagram;

    #[test]
    fn ascii_has_one_row_per_band() {
        let d = build_diagram(&parse_braid("1 2^2 1^2 2").unwrap());
        let t = render(&d, None, RenderFormat::Ascii).unwrap();
        assert_eq!(t.lines().count(), 6);
        assert_eq!(t.lines().next().unwrap(), "|---|   |");
        assert_eq!(t.lines().nth(1).unwrap(), "|   |---|");
    }

    #[test]
    fn empty_assignment_draws_like_none() {
        let d = build_diagram(&parse_braid("1 2^2 1^2 2").unwrap());
        let a = ArcAssignment::new(d.clone());
        for f in [RenderFormat::Ascii, RenderFormat::Svg] {
            assert_eq!(render(&d, Some(&a), f), render(&d, None, f));
        }
    }

    #[test]
    fn foreign_assignment_is_rejected() {
        let d = build_diagram(&parse_braid("1 1 1").unwrap());
        let other = build_diagram(&parse_braid("1 1 1 1 1").unwrap());
        let a = manual_assign(&other, &[(1, 1, Direction::Left)]).unwrap();
        assert!(matches!(
            render(&d, Some(&a), RenderFormat::Svg),
            Err(Error::ModelMismatch(_))
        ));
    }

    #[test]
    fn one_arrow_per_arc() {
        let d = build_diagram(&parse_braid("1 2^2 1^2 2").unwrap());
        let a = manual_assign(&d, &[(1, 1, Direction::Left), (2, 3, Direction::Right)]).unwrap();
        let s = render(&d, Some(&a), RenderFormat::Svg).unwrap();
        assert_eq!(s.matches(r#"class="arrow""#).count(), 2);
        assert_eq!(s, render(&d, Some(&a), RenderFormat::Svg).unwrap());
    }
}
