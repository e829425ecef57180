//! Bennequin surface combinatorics of a positive braid: brick diagram,
//! plumbing and image arcs, and the Hopf plumbing factorization.
//!
//! Seifert disk `S_k` (`1 ≤ k ≤ n`) carries one attachment site per band of
//! columns `k-1` and `k`. Sites on a disk are ordered by word position; this
//! single cyclic order drives enclosures, sectors and the boundary track.

pub mod render;

use serde::{Deserialize, Serialize};

use crate::braid_core::{closure_components, BraidWord};
use crate::error::{Error, Result};

pub use render::{render, RenderFormat};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BrickDiagram {
    word: BraidWord,
    /// `columns[i - 1]` lists word positions of the bands `b_{i,1}..b_{i,c_i}`.
    columns: Vec<Vec<usize>>,
}

/// One band `b_{i,j}` and its word position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Band {
    pub column: usize,
    pub ordinal: usize,
    pub position: usize,
}

pub fn build_diagram(b: &BraidWord) -> BrickDiagram {
    let columns = (1..b.strands()).map(|i| b.positions(i)).collect();
    BrickDiagram {
        word: b.clone(),
        columns,
    }
}

impl BrickDiagram {
    pub fn word(&self) -> &BraidWord {
        &self.word
    }

    pub fn strands(&self) -> usize {
        self.word.strands()
    }

    /// Number of columns, `n - 1`.
    pub fn column_count(&self) -> usize {
        self.columns.len()
    }

    /// Word positions of the bands of column `i`.
    pub fn column(&self, i: usize) -> &[usize] {
        &self.columns[i - 1]
    }

    /// `c_i`.
    pub fn count(&self, i: usize) -> usize {
        self.columns.get(i.wrapping_sub(1)).map_or(0, Vec::len)
    }

    pub fn band(&self, i: usize, j: usize) -> Result<Band> {
        let col = self
            .columns
            .get(i.wrapping_sub(1))
            .ok_or_else(|| Error::Index(format!("no column {i}")))?;
        let position = *col
            .get(j.wrapping_sub(1))
            .ok_or_else(|| Error::Index(format!("column {i} has no band {j}")))?;
        Ok(Band {
            column: i,
            ordinal: j,
            position,
        })
    }

    /// All bands in word order.
    pub fn bands(&self) -> Vec<Band> {
        let mut ordinal = vec![0usize; self.columns.len() + 1];
        self.word
            .letters()
            .iter()
            .enumerate()
            .map(|(position, &i)| {
                ordinal[i] += 1;
                Band {
                    column: i,
                    ordinal: ordinal[i],
                    position,
                }
            })
            .collect()
    }

    /// Word positions of the sites on `S_k`, in cyclic order.
    pub fn disk_sites(&self, k: usize) -> Vec<usize> {
        self.word
            .letters()
            .iter()
            .enumerate()
            .filter(|(_, &l)| l + 1 == k || l == k)
            .map(|(p, _)| p)
            .collect()
    }

    /// Number of arcs of column `i`: `c_i - 1` in the presentation plus the
    /// wrap arc `α_{i,c_i}` joining `b_{i,c_i}` to `b_{i,1}` across the seam.
    pub fn arc_slots(&self, i: usize) -> usize {
        let c = self.count(i);
        if c >= 2 {
            c
        } else {
            0
        }
    }

    fn gap_bands(&self, i: usize, j: usize) -> Result<(usize, usize)> {
        let c = self.count(i);
        if c < 2 || j == 0 || j > c {
            return Err(Error::Index(format!(
                "arc ({i}, {j}) out of range for c_{i} = {c}"
            )));
        }
        let col = self.column(i);
        Ok((col[j - 1], col[j % c]))
    }

    /// Positions of column `other` strictly inside the cyclic gap `(from, to)`.
    fn between(&self, other: usize, from: usize, to: usize) -> Vec<usize> {
        if other == 0 || other > self.column_count() {
            return Vec::new();
        }
        let len = self.word.len();
        let span = (to + len - from) % len;
        let mut out: Vec<usize> = self
            .column(other)
            .iter()
            .copied()
            .filter(|&p| {
                let off = (p + len - from) % len;
                off > 0 && off < span
            })
            .collect();
        out.sort_by_key(|&p| (p + len - from) % len);
        out
    }
}

/// Plumbing arc `α_{i,j}` in `S_i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlumbingArc {
    pub column: usize,
    pub ordinal: usize,
    /// Position of `b_{i,j}`.
    pub left_enclosure: usize,
    /// Positions of the column `i-1` bands between `b_{i,j}` and `b_{i,j+1}`.
    pub right_enclosure: Vec<usize>,
}

/// Image arc `φ(α_{i,j})` in `S_{i+1}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ImageArc {
    pub column: usize,
    pub ordinal: usize,
    /// Position of `b_{i,j+1}`.
    pub right_enclosure: usize,
    /// Positions of the column `i+1` bands between `b_{i,j}` and `b_{i,j+1}`.
    pub left_enclosure: Vec<usize>,
}

/// Enclosures of `α_{i,j}` and its image; `j = c_i` is the wrap arc.
pub fn arc_enclosures(d: &BrickDiagram, i: usize, j: usize) -> Result<(PlumbingArc, ImageArc)> {
    let (top, bottom) = d.gap_bands(i, j)?;
    Ok((
        PlumbingArc {
            column: i,
            ordinal: j,
            left_enclosure: top,
            right_enclosure: d.between(i - 1, top, bottom),
        },
        ImageArc {
            column: i,
            ordinal: j,
            right_enclosure: bottom,
            left_enclosure: d.between(i + 1, top, bottom),
        },
    ))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum HopfStep {
    /// The single band presenting the unknot as the closure of `σ_1`.
    UnknotBand {
        position: usize,
    },
    /// Stabilization at the first `σ_i`; carries no Hopf band.
    Stabilization {
        column: usize,
        position: usize,
    },
    Plumbing {
        arc: PlumbingArc,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HopfFactorization {
    pub steps: Vec<HopfStep>,
    /// `(column, ordinal)` of each twist curve, in monodromy order.
    pub twist_curves: Vec<(usize, usize)>,
}

impl HopfFactorization {
    pub fn plumbing_count(&self) -> usize {
        self.steps
            .iter()
            .filter(|s| matches!(s, HopfStep::Plumbing { .. }))
            .count()
    }
}

/// Hopf plumbing sequence read off the presentation, column by column.
///
/// Twist curves run from column `n-1` down to column 1.
pub fn hopf_sequence(b: &BraidWord) -> Result<HopfFactorization> {
    let comps = closure_components(b);
    if comps != 1 {
        return Err(Error::NotAKnot(comps));
    }
    let d = build_diagram(b);
    let mut steps = Vec::new();
    for i in 1..=d.column_count() {
        let col = d.column(i);
        let Some(&first) = col.first() else { continue };
        steps.push(if i == 1 {
            HopfStep::UnknotBand { position: first }
        } else {
            HopfStep::Stabilization {
                column: i,
                position: first,
            }
        });
        for j in 1..col.len() {
            let (arc, _) = arc_enclosures(&d, i, j)?;
            steps.push(HopfStep::Plumbing { arc });
        }
    }
    let twist_curves = (1..=d.column_count())
        .rev()
        .flat_map(|i| (1..d.count(i).max(1)).map(move |j| (i, j)))
        .collect();
    Ok(HopfFactorization {
        steps,
        twist_curves,
    })
}
