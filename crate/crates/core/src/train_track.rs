//! The boundary train track: order of product-disk endpoints along the
//! longitude, maximal sectors, linking and the carried-slope supremum.
//!
//! Walking the knot boundary, each gap between consecutive sites of a disk is
//! met once; leaving a gap the walk crosses the next band and enters the gap
//! just after that band's site on the neighbouring disk. Arc `α_{i,s}` has
//! endpoints `u` (before `b_{i,s}` on `S_i`), `u'` (after `b_{i,s}` on
//! `S_{i+1}`), `ℓ` (before `b_{i,s+1}` on `S_i`) and `ℓ'` (after `b_{i,s+1}`
//! on `S_{i+1}`). Its two sectors are `[u,u']` and `[ℓ,ℓ']`; a left pointer
//! contributes maximally through `[u,u']`, a right pointer through `[ℓ,ℓ']`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use petgraph::algo::maximum_matching;
use petgraph::graph::UnGraph;
use serde::{Deserialize, Serialize};

use crate::braid_core::genus;
use crate::branched_surface::{
    check_sink_free, compute_sectors, layout, ArcAssignment, ArcId, ChordKind, Direction, Endpoint,
    Layout,
};
use crate::construction::CaseTrace;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PointKind {
    U,
    UPrime,
    L,
    LPrime,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TrackPoint {
    pub arc: ArcId,
    pub kind: PointKind,
}

impl fmt::Display for TrackPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = match self.kind {
            PointKind::U => "u",
            PointKind::UPrime => "u'",
            PointKind::L => "l",
            PointKind::LPrime => "l'",
        };
        write!(f, "{k}{}", self.arc)
    }
}

/// Location of an endpoint: disk, gap index on that disk, slot within the gap.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GapSlot {
    pub disk: usize,
    pub gap: usize,
    pub slot: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SectorEnd {
    /// `[u, u']`.
    First,
    /// `[ℓ, ℓ']`.
    Second,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrackSector {
    pub arc: ArcId,
    pub end: SectorEnd,
    pub maximal: bool,
    /// Word position of the band the sector runs through.
    pub band: usize,
    pub from: GapSlot,
    pub to: GapSlot,
    /// Indices of the two endpoints in `lambda_order`.
    pub lambda: (usize, usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundaryTrack {
    /// All `4·|chosen|` endpoints in the order met along the longitude from the top of `S_1`.
    pub lambda_order: Vec<TrackPoint>,
    /// Two sectors per chosen arc, ordered by arc then `First`, `Second`.
    pub sectors: Vec<TrackSector>,
}

impl BoundaryTrack {
    pub fn maximal(&self) -> impl Iterator<Item = &TrackSector> {
        self.sectors.iter().filter(|s| s.maximal)
    }
}

fn point_of(lay: &Layout, e: Endpoint) -> TrackPoint {
    let (c, start) = match e {
        Endpoint::Start(c) => (c, true),
        Endpoint::End(c) => (c, false),
    };
    let chord = &lay.chords[c];
    let kind = match (chord.branch.kind, start) {
        (ChordKind::Plumbing, true) => PointKind::U,
        (ChordKind::Plumbing, false) => PointKind::L,
        (ChordKind::Image, true) => PointKind::UPrime,
        (ChordKind::Image, false) => PointKind::LPrime,
    };
    TrackPoint {
        arc: chord.branch.arc,
        kind,
    }
}

pub fn boundary_track(a: &ArcAssignment) -> BoundaryTrack {
    let lay = layout(a);
    let word = a.word();
    let mut slot_of: HashMap<TrackPoint, GapSlot> = HashMap::new();
    for dl in &lay.disks {
        for (g, gap) in dl.gaps.iter().enumerate() {
            for (slot, &e) in gap.iter().enumerate() {
                slot_of.insert(
                    point_of(&lay, e),
                    GapSlot {
                        disk: dl.disk,
                        gap: g,
                        slot,
                    },
                );
            }
        }
    }

    let mut lambda_order = Vec::with_capacity(4 * a.len());
    let first = &lay.disks[0];
    let m1 = first.sites.len();
    let seam_gap = &first.gaps[m1 - 1];
    let ends = seam_gap
        .iter()
        .filter(|e| matches!(e, Endpoint::End(_)))
        .count();
    lambda_order.extend(seam_gap[ends..].iter().map(|&e| point_of(&lay, e)));
    let (mut disk, mut gap) = (1usize, m1 - 1);
    let total_gaps: usize = lay.disks.iter().map(|d| d.sites.len()).sum();
    for _ in 0..total_gaps {
        let dl = &lay.disks[disk - 1];
        let site = (gap + 1) % dl.sites.len();
        let p = dl.sites[site];
        let l = word.letters()[p];
        disk = if disk == l { l + 1 } else { l };
        let next = &lay.disks[disk - 1];
        gap = next.site_index(p);
        if disk == 1 && gap == m1 - 1 {
            lambda_order.extend(seam_gap[..ends].iter().map(|&e| point_of(&lay, e)));
            break;
        }
        lambda_order.extend(next.gaps[gap].iter().map(|&e| point_of(&lay, e)));
    }
    debug_assert_eq!(lambda_order.len(), 4 * a.len());

    let index: HashMap<TrackPoint, usize> = lambda_order
        .iter()
        .enumerate()
        .map(|(i, &p)| (p, i))
        .collect();
    let d = a.diagram();
    let mut sectors = Vec::with_capacity(2 * a.len());
    for (arc, dir) in a.iter() {
        let col = d.column(arc.column);
        let top = col[arc.ordinal - 1];
        let bottom = col[arc.ordinal % col.len()];
        for (end, band, k0, k1) in [
            (SectorEnd::First, top, PointKind::U, PointKind::UPrime),
            (SectorEnd::Second, bottom, PointKind::L, PointKind::LPrime),
        ] {
            let p0 = TrackPoint { arc, kind: k0 };
            let p1 = TrackPoint { arc, kind: k1 };
            let maximal = matches!(
                (dir, end),
                (Direction::Left, SectorEnd::First) | (Direction::Right, SectorEnd::Second)
            );
            sectors.push(TrackSector {
                arc,
                end,
                maximal,
                band,
                from: slot_of[&p0],
                to: slot_of[&p1],
                lambda: (
                    index.get(&p0).copied().unwrap_or(usize::MAX),
                    index.get(&p1).copied().unwrap_or(usize::MAX),
                ),
            });
        }
    }
    BoundaryTrack {
        lambda_order,
        sectors,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct LinkLedger {
    /// Linked pairs, each ordered, sorted.
    pub pairs: Vec<(ArcId, ArcId)>,
    /// Linked triples `(a, b, c)` with `b` linked to both ends.
    pub triples: Vec<(ArcId, ArcId, ArcId)>,
    /// Maximum matching size of the linking graph.
    pub deduction: usize,
    /// Set when the linking graph is not a disjoint union of edges and 2-paths.
    pub extrapolated: bool,
}

/// Maximal sectors whose endpoints interleave along the longitude.
///
/// Two sectors through the same band interleave iff their slot orders agree
/// on both sides; a sector ending in the gap where another starts interleaves
/// with it iff the other starts before it ends. No other pair can interleave.
pub fn linked_pairs(t: &BoundaryTrack) -> LinkLedger {
    let max: Vec<&TrackSector> = t.maximal().collect();
    let key = |s: &GapSlot| (s.disk, s.gap);
    let mut by_start: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
    for (i, s) in max.iter().enumerate() {
        by_start.entry(key(&s.from)).or_default().push(i);
    }
    let mut pairs = Vec::new();
    for (x, s) in max.iter().enumerate() {
        for &y in by_start.get(&key(&s.from)).into_iter().flatten() {
            if y > x {
                let o = &max[y];
                if (s.from.slot < o.from.slot) == (s.to.slot < o.to.slot) {
                    pairs.push(ordered(s.arc, o.arc));
                }
            }
        }
        for &y in by_start.get(&key(&s.to)).into_iter().flatten() {
            let o = &max[y];
            if o.from.slot < s.to.slot && o.arc != s.arc {
                pairs.push(ordered(s.arc, o.arc));
            }
        }
    }
    ledger_from_pairs(pairs)
}

fn ordered(a: ArcId, b: ArcId) -> (ArcId, ArcId) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Groups pairs into components and computes the matching deduction.
pub fn ledger_from_pairs(mut pairs: Vec<(ArcId, ArcId)>) -> LinkLedger {
    pairs.sort();
    pairs.dedup();
    let mut nodes: BTreeMap<ArcId, petgraph::graph::NodeIndex> = BTreeMap::new();
    let mut g: UnGraph<ArcId, ()> = UnGraph::new_undirected();
    for &(a, b) in &pairs {
        for x in [a, b] {
            nodes.entry(x).or_insert_with(|| g.add_node(x));
        }
        g.add_edge(nodes[&a], nodes[&b], ());
    }
    let deduction = maximum_matching(&g).edges().count();
    let mut triples = Vec::new();
    let mut extrapolated = false;
    let mut seen = std::collections::HashSet::new();
    for &start in nodes.values() {
        if !seen.insert(start) {
            continue;
        }
        let mut comp = vec![start];
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            for w in g.neighbors(v) {
                if seen.insert(w) {
                    comp.push(w);
                    stack.push(w);
                }
            }
        }
        let edges: usize = comp.iter().map(|&v| g.neighbors(v).count()).sum::<usize>() / 2;
        match (comp.len(), edges) {
            (2, 1) => {}
            (3, 2) => {
                let mid = *comp.iter().find(|&&v| g.neighbors(v).count() == 2).unwrap();
                let mut ends: Vec<ArcId> = g.neighbors(mid).map(|v| g[v]).collect();
                ends.sort();
                triples.push((ends[0], g[mid], ends[1]));
            }
            _ => extrapolated = true,
        }
    }
    triples.sort();
    LinkLedger {
        pairs,
        triples,
        deduction,
        extrapolated,
    }
}

/// Interval of certified slopes `(-∞, upper)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlopeClaim {
    pub upper: usize,
    pub valid: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub braid: String,
    pub n: usize,
    pub genus: usize,
    pub chosen_arcs: Vec<ArcId>,
    pub directions: Vec<Direction>,
    pub linked_pairs: Vec<(ArcId, ArcId)>,
    pub linked_triples: Vec<(ArcId, ArcId, ArcId)>,
    pub deduction: usize,
    pub matching_extrapolated: bool,
    pub tau_sup: usize,
    pub sink_free: bool,
    pub sink_offenders: usize,
    pub case_trace: Option<CaseTrace>,
    pub slope_claim: SlopeClaim,
    pub endpoint_order: Vec<TrackPoint>,
}

impl Certificate {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))
    }
}

/// Certificate for an assignment: sinks, linking and `τ_sup = |chosen| - deduction`.
pub fn tau_sup(a: &ArcAssignment) -> Result<Certificate> {
    let g = genus(a.word())?;
    let sectors = compute_sectors(a);
    let report = check_sink_free(&sectors);
    let track = boundary_track(a);
    let ledger = linked_pairs(&track);
    let tau = a.len() - ledger.deduction;
    Ok(Certificate {
        braid: a.word().to_string(),
        n: a.word().strands(),
        genus: g,
        chosen_arcs: a.iter().map(|(x, _)| x).collect(),
        directions: a.iter().map(|(_, d)| d).collect(),
        linked_pairs: ledger.pairs,
        linked_triples: ledger.triples,
        deduction: ledger.deduction,
        matching_extrapolated: ledger.extrapolated,
        tau_sup: tau,
        sink_free: report.sink_free,
        sink_offenders: report.offenders.len(),
        case_trace: None,
        slope_claim: SlopeClaim {
            upper: tau,
            valid: report.sink_free,
        },
        endpoint_order: track.lambda_order,
    })
}
