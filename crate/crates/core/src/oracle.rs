//! Slow, independent re-derivations of the fast paths.
//!
//! Only [`BrickDiagram`] is shared with the main route. Chords are drawn as
//! straight segments between points on a unit circle, faces are found by
//! sampling both sides of every edge of the arrangement, sectors by flooding
//! the region graph, and linking by walking the boundary and testing every
//! pair of maximal sectors for interleaving.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::braid_core::{parse_braid, BraidWord};
use crate::branched_surface::{
    ArcAssignment, ArcId, BranchArc, ChordKind, Direction, Orientation, RegionKind, Sector,
    SectorClass, SectorDecomposition,
};
use crate::error::{Error, Result};
use crate::surface_model::{build_diagram, BrickDiagram};
use crate::train_track::{Certificate, PointKind, TrackPoint};

/// Largest number of candidate arcs [`exhaustive_search`] accepts.
pub const SEARCH_CAP: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchResult {
    pub best_assignment: ArcAssignment,
    pub best_tau: usize,
    pub explored: u64,
    pub sink_free_count: u64,
}

struct GeoChord {
    branch: BranchArc,
    /// Pointer into the enclosed side.
    into_enclosed: bool,
    a: (f64, f64),
    b: (f64, f64),
    angle_a: f64,
    angle_b: f64,
}

struct DiskGeo {
    disk: usize,
    /// `(angle, word position)` per site.
    sites: Vec<(f64, usize)>,
    seam: f64,
    chords: Vec<GeoChord>,
}

fn on_circle(t: f64) -> (f64, f64) {
    (t.cos(), t.sin())
}

fn cross(o: (f64, f64), p: (f64, f64), q: (f64, f64)) -> f64 {
    (p.0 - o.0) * (q.1 - o.1) - (p.1 - o.1) * (q.0 - o.0)
}

/// Enclosed side of a chord from `a` to `b` is on the right of `a → b`.
fn encloses(c: &GeoChord, p: (f64, f64)) -> bool {
    cross(c.a, c.b, p) < 0.0
}

fn line_distance(c: &GeoChord, p: (f64, f64)) -> f64 {
    let len = ((c.b.0 - c.a.0).powi(2) + (c.b.1 - c.a.1).powi(2)).sqrt();
    cross(c.a, c.b, p).abs() / len
}

/// Small deterministic jitter in `[0, 1)` keeping the arrangement generic.
fn jitter(k: usize) -> f64 {
    (k as f64 * 0.618_033_988_75).fract()
}

/// Places every chord of the assignment on its disk's circle.
///
/// Sites sit at equal angles. A chord enclosing `len` sites starting at site
/// `s` and ending at site `e` has endpoints just before `s` and just after
/// `e`, pushed further from the site the more it encloses, so that nested
/// chords stay disjoint. An image chord sits outside a plumbing chord with
/// the same enclosure.
fn geometry(a: &ArcAssignment) -> Vec<DiskGeo> {
    let d = a.diagram();
    let n = d.strands();
    let letters = d.word().letters();
    let mut disks: Vec<DiskGeo> = (1..=n)
        .map(|k| {
            let pos: Vec<usize> = (0..letters.len())
                .filter(|&p| letters[p] == k || letters[p] + 1 == k)
                .collect();
            let m = pos.len().max(1);
            let sites: Vec<(f64, usize)> = pos
                .iter()
                .enumerate()
                .map(|(g, &p)| (2.0 * PI * g as f64 / m as f64, p))
                .collect();
            let last = sites.last().map_or(0.0, |s| s.0);
            DiskGeo {
                disk: k,
                sites,
                seam: (last + 2.0 * PI) / 2.0,
                chords: Vec::new(),
            }
        })
        .collect();
    let mut serial = 0;
    for (arc, dir) in a.iter() {
        let col = d.column(arc.column);
        let top = col[arc.ordinal - 1];
        let bottom = col[arc.ordinal % col.len()];
        for (kind, disk) in [
            (ChordKind::Plumbing, arc.column),
            (ChordKind::Image, arc.column + 1),
        ] {
            let geo = &mut disks[disk - 1];
            let m = geo.sites.len();
            let idx = |p: usize| geo.sites.iter().position(|s| s.1 == p).expect("site");
            let (it, ib) = (idx(top), idx(bottom));
            // Plumbing encloses [top, bottom); image encloses (top, bottom].
            let (first, last) = match kind {
                ChordKind::Plumbing => (it, (ib + m - 1) % m),
                ChordKind::Image => ((it + 1) % m, ib),
            };
            let len = (last + m - first) % m + 1;
            let step = 2.0 * PI / m as f64;
            let room = 0.45 * step / (m as f64 + 1.0);
            let depth = len as f64 + if kind == ChordKind::Image { 0.5 } else { 0.0 };
            let wiggle = 0.1 * room * jitter(serial);
            serial += 1;
            let angle_a = first as f64 * step - room * depth - wiggle;
            let angle_b = last as f64 * step + room * depth + wiggle;
            let pointer = match kind {
                ChordKind::Plumbing => dir,
                ChordKind::Image => dir.flipped(),
            };
            geo.chords.push(GeoChord {
                branch: BranchArc { arc, kind },
                into_enclosed: pointer == Direction::Right,
                a: on_circle(angle_a),
                b: on_circle(angle_b),
                angle_a: angle_a.rem_euclid(2.0 * PI),
                angle_b: angle_b.rem_euclid(2.0 * PI),
            });
        }
    }
    disks
}

type Sign = Vec<bool>;

fn sign(chords: &[GeoChord], p: (f64, f64)) -> Sign {
    chords.iter().map(|c| encloses(c, p)).collect()
}

/// Point just inside the circle at angle `t`, closer to the rim than to any chord.
fn rim_sample(chords: &[GeoChord], t: f64) -> (f64, f64) {
    let q = on_circle(t);
    let gap = chords
        .iter()
        .map(|c| line_distance(c, q))
        .fold(1e-3, f64::min);
    (q.0 * (1.0 - gap / 4.0), q.1 * (1.0 - gap / 4.0))
}

/// Faces of one disk and the chord adjacencies between them.
struct DiskFaces {
    faces: Vec<Sign>,
    /// `(enclosed face, open face, chord)` for each chord segment.
    across: Vec<(usize, usize, usize)>,
    site_face: Vec<usize>,
    seam_face: usize,
}

fn disk_faces(geo: &DiskGeo) -> DiskFaces {
    let chords = &geo.chords;
    let mut faces: Vec<Sign> = Vec::new();
    let mut index: HashMap<Sign, usize> = HashMap::new();
    let mut face = |s: Sign, faces: &mut Vec<Sign>| -> usize {
        *index.entry(s.clone()).or_insert_with(|| {
            faces.push(s);
            faces.len() - 1
        })
    };
    let mut across = Vec::new();
    for (ci, c) in chords.iter().enumerate() {
        let mut cuts = vec![0.0, 1.0];
        for (oi, o) in chords.iter().enumerate() {
            if oi == ci {
                continue;
            }
            let (p, r) = (c.a, (c.b.0 - c.a.0, c.b.1 - c.a.1));
            let (q, s) = (o.a, (o.b.0 - o.a.0, o.b.1 - o.a.1));
            let denom = r.0 * s.1 - r.1 * s.0;
            if denom.abs() < 1e-15 {
                continue;
            }
            let t = ((q.0 - p.0) * s.1 - (q.1 - p.1) * s.0) / denom;
            let u = ((q.0 - p.0) * r.1 - (q.1 - p.1) * r.0) / denom;
            if t > 0.0 && t < 1.0 && u > 0.0 && u < 1.0 {
                cuts.push(t);
            }
        }
        cuts.sort_by(f64::total_cmp);
        let dir = (c.b.0 - c.a.0, c.b.1 - c.a.1);
        let len = (dir.0 * dir.0 + dir.1 * dir.1).sqrt();
        // Unit normal towards the right of a → b, the enclosed side.
        let normal = (dir.1 / len, -dir.0 / len);
        for w in cuts.windows(2) {
            let t = (w[0] + w[1]) / 2.0;
            let m = (c.a.0 + t * dir.0, c.a.1 + t * dir.1);
            let room = chords
                .iter()
                .enumerate()
                .filter(|&(oi, _)| oi != ci)
                .map(|(_, o)| line_distance(o, m))
                .fold(len * (w[1] - w[0]) / 2.0, f64::min)
                .min(1e-3);
            let eps = room / 4.0;
            let inner = (m.0 + eps * normal.0, m.1 + eps * normal.1);
            let outer = (m.0 - eps * normal.0, m.1 - eps * normal.1);
            let fi = face(sign(chords, inner), &mut faces);
            let fo = face(sign(chords, outer), &mut faces);
            across.push((fi, fo, ci));
        }
    }
    // Rim arcs between consecutive boundary points.
    let mut marks: Vec<f64> = geo.sites.iter().map(|s| s.0).collect();
    marks.push(geo.seam);
    for c in chords {
        marks.push(c.angle_a);
        marks.push(c.angle_b);
    }
    marks.sort_by(f64::total_cmp);
    for (i, &t) in marks.iter().enumerate() {
        let next = marks.get(i + 1).copied().unwrap_or(marks[0] + 2.0 * PI);
        face(
            sign(chords, rim_sample(chords, (t + next) / 2.0)),
            &mut faces,
        );
    }
    let site_face = geo
        .sites
        .iter()
        .map(|&(t, _)| face(sign(chords, rim_sample(chords, t)), &mut faces))
        .collect();
    let seam_face = face(sign(chords, rim_sample(chords, geo.seam)), &mut faces);
    DiskFaces {
        faces,
        across,
        site_face,
        seam_face,
    }
}

fn classify(members: &[usize], regions: &[RegionKind]) -> SectorClass {
    if let Some(arc) = members.iter().find_map(|&r| match regions[r] {
        RegionKind::ProductDisk { arc } => Some(arc),
        _ => None,
    }) {
        return SectorClass::ProductDisk(arc);
    }
    let mut cores: Vec<usize> = members
        .iter()
        .filter_map(|&r| match &regions[r] {
            RegionKind::Face {
                disk, seam: true, ..
            } => Some(*disk),
            _ => None,
        })
        .collect();
    cores.sort_unstable();
    if !cores.is_empty() {
        return SectorClass::Disk(cores);
    }
    if members
        .iter()
        .any(|&r| matches!(regions[r], RegionKind::Band { .. }))
    {
        return SectorClass::Horizontal;
    }
    let disk = members
        .iter()
        .find_map(|&r| match regions[r] {
            RegionKind::Face { disk, .. } => Some(disk),
            _ => None,
        })
        .unwrap_or(0);
    SectorClass::Polygon(disk)
}

/// Sector decomposition by explicit geometry and flood fill.
pub fn flood_sectors(a: &ArcAssignment) -> SectorDecomposition {
    let geos = geometry(a);
    let word = a.diagram().word();
    let mut regions: Vec<RegionKind> = Vec::new();
    let mut base = Vec::new();
    let mut all = Vec::new();
    for geo in &geos {
        let df = disk_faces(geo);
        base.push(regions.len());
        for (f, s) in df.faces.iter().enumerate() {
            let mut inside: Vec<BranchArc> = s
                .iter()
                .zip(&geo.chords)
                .filter(|(&b, _)| b)
                .map(|(_, c)| c.branch)
                .collect();
            inside.sort();
            let mut sites: Vec<usize> = df
                .site_face
                .iter()
                .zip(&geo.sites)
                .filter(|(&sf, _)| sf == f)
                .map(|(_, s)| s.1)
                .collect();
            sites.sort_unstable();
            regions.push(RegionKind::Face {
                disk: geo.disk,
                inside,
                sites,
                seam: f == df.seam_face,
            });
        }
        all.push(df);
    }
    let bands = regions.len();
    regions.extend((0..word.len()).map(|position| RegionKind::Band { position }));
    regions.extend(a.iter().map(|(arc, _)| RegionKind::ProductDisk { arc }));

    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); regions.len()];
    for (p, &l) in word.letters().iter().enumerate() {
        for k in [l, l + 1] {
            let g = &geos[k - 1];
            let s = g.sites.iter().position(|x| x.1 == p).expect("site");
            let f = base[k - 1] + all[k - 1].site_face[s];
            adj[bands + p].push(f);
            adj[f].push(bands + p);
        }
    }
    let mut region_sector = vec![usize::MAX; regions.len()];
    let mut sectors: Vec<Sector> = Vec::new();
    for r in 0..regions.len() {
        if region_sector[r] != usize::MAX {
            continue;
        }
        let id = sectors.len();
        let mut members = Vec::new();
        let mut queue = VecDeque::from([r]);
        region_sector[r] = id;
        while let Some(x) = queue.pop_front() {
            members.push(x);
            for &y in &adj[x] {
                if region_sector[y] == usize::MAX {
                    region_sector[y] = id;
                    queue.push_back(y);
                }
            }
        }
        members.sort_unstable();
        sectors.push(Sector {
            class: classify(&members, &regions),
            regions: members,
            boundary: Vec::new(),
        });
    }
    for (k, df) in all.iter().enumerate() {
        for &(fi, fo, ci) in &df.across {
            let c = &geos[k].chords[ci];
            let si = region_sector[base[k] + fi];
            let so = region_sector[base[k] + fo];
            let (oi, oo) = if c.into_enclosed {
                (Orientation::Inward, Orientation::Outward)
            } else {
                (Orientation::Outward, Orientation::Inward)
            };
            sectors[si].boundary.push((c.branch, oi));
            sectors[so].boundary.push((c.branch, oo));
        }
    }
    for s in &mut sectors {
        s.boundary.sort();
        s.boundary.dedup();
    }
    SectorDecomposition {
        regions,
        sectors,
        region_sector,
    }
}

/// Sectors that are sink disks: not a product disk, some branch boundary,
/// and every boundary arc pointing in.
pub fn sink_sectors(s: &SectorDecomposition) -> Vec<usize> {
    s.sectors
        .iter()
        .enumerate()
        .filter(|(_, sec)| {
            !matches!(sec.class, SectorClass::ProductDisk(_))
                && !sec.boundary.is_empty()
                && sec.boundary.iter().all(|(_, o)| *o == Orientation::Inward)
        })
        .map(|(i, _)| i)
        .collect()
}

/// Angle from `from` ccw to `to`, in `(0, 2π]`.
fn ahead(from: f64, to: f64) -> f64 {
    let off = (to - from).rem_euclid(2.0 * PI);
    if off < 1e-12 {
        2.0 * PI
    } else {
        off
    }
}

/// Endpoints met walking the knot boundary from the seam of `S_1`.
pub fn longitude_order(a: &ArcAssignment) -> Vec<TrackPoint> {
    let geos = geometry(a);
    let letters = a.diagram().word().letters();
    if a.is_empty() {
        return Vec::new();
    }
    // Endpoints per disk as (angle, point), sorted by angle.
    let points: Vec<Vec<(f64, TrackPoint)>> = geos
        .iter()
        .map(|g| {
            let mut v: Vec<(f64, TrackPoint)> = g
                .chords
                .iter()
                .flat_map(|c| {
                    let (s, e) = match c.branch.kind {
                        ChordKind::Plumbing => (PointKind::U, PointKind::L),
                        ChordKind::Image => (PointKind::UPrime, PointKind::LPrime),
                    };
                    [
                        (
                            c.angle_a,
                            TrackPoint {
                                arc: c.branch.arc,
                                kind: s,
                            },
                        ),
                        (
                            c.angle_b,
                            TrackPoint {
                                arc: c.branch.arc,
                                kind: e,
                            },
                        ),
                    ]
                })
                .collect();
            v.sort_by(|x, y| x.0.total_cmp(&y.0));
            v
        })
        .collect();
    // Collect points with angle in the ccw interval (from, to) on a disk.
    let collect = |k: usize, from: f64, to: f64, out: &mut Vec<TrackPoint>| {
        let span = (to - from).rem_euclid(2.0 * PI);
        let mut hits: Vec<(f64, TrackPoint)> = points[k - 1]
            .iter()
            .map(|&(t, p)| ((t - from).rem_euclid(2.0 * PI), p))
            .filter(|&(off, _)| off > 0.0 && off < span)
            .collect();
        hits.sort_by(|x, y| x.0.total_cmp(&y.0));
        out.extend(hits.into_iter().map(|h| h.1));
    };
    let mut out = Vec::new();
    let first = &geos[0];
    let (mut disk, mut from) = (1usize, first.seam);
    let sites: usize = geos.iter().map(|g| g.sites.len()).sum();
    for step in 0..=sites {
        let g = &geos[disk - 1];
        // Next site ccw from `from`; the seam of S_1 ends the walk.
        let (site_angle, pos) = g
            .sites
            .iter()
            .copied()
            .min_by(|x, y| ahead(from, x.0).total_cmp(&ahead(from, y.0)))
            .expect("disk has sites");
        let off_site = ahead(from, site_angle);
        let off_seam = (first.seam - from).rem_euclid(2.0 * PI);
        if disk == 1 && step > 0 && off_seam > 0.0 && off_seam < off_site {
            collect(1, from, first.seam, &mut out);
            break;
        }
        collect(disk, from, site_angle, &mut out);
        let l = letters[pos];
        disk = if disk == l { l + 1 } else { l };
        from = geos[disk - 1]
            .sites
            .iter()
            .find(|s| s.1 == pos)
            .expect("site on neighbour")
            .0;
    }
    out
}

/// Linked pairs found by testing every pair of maximal sectors for
/// interleaving along the longitude.
pub fn brute_force_links(a: &ArcAssignment) -> Vec<(ArcId, ArcId)> {
    let order = longitude_order(a);
    let n = order.len();
    let at: HashMap<TrackPoint, usize> = order.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let spans: Vec<(ArcId, usize, usize)> = a
        .iter()
        .filter_map(|(arc, dir)| {
            let (k0, k1) = match dir {
                Direction::Left => (PointKind::U, PointKind::UPrime),
                Direction::Right => (PointKind::L, PointKind::LPrime),
            };
            let p0 = at.get(&TrackPoint { arc, kind: k0 })?;
            let p1 = at.get(&TrackPoint { arc, kind: k1 })?;
            Some((arc, *p0, *p1))
        })
        .collect();
    let inside = |x: usize, a: usize, b: usize| {
        let off = (x + n - a) % n;
        off > 0 && off < (b + n - a) % n
    };
    let mut pairs = Vec::new();
    for (i, &(x, a0, a1)) in spans.iter().enumerate() {
        for &(y, b0, b1) in &spans[i + 1..] {
            if inside(b0, a0, a1) != inside(b1, a0, a1) {
                pairs.push(if x <= y { (x, y) } else { (y, x) });
            }
        }
    }
    pairs.sort();
    pairs
}

/// Maximum matching size by exhaustive branching.
pub fn brute_force_matching(pairs: &[(ArcId, ArcId)]) -> usize {
    fn go(edges: &[(ArcId, ArcId)], used: &mut BTreeSet<ArcId>) -> usize {
        let Some((&(a, b), rest)) = edges.split_first() else {
            return 0;
        };
        let skip = go(rest, used);
        if used.contains(&a) || used.contains(&b) {
            return skip;
        }
        used.insert(a);
        used.insert(b);
        let take = 1 + go(rest, used);
        used.remove(&a);
        used.remove(&b);
        skip.max(take)
    }
    go(pairs, &mut BTreeSet::new())
}

/// `(sink-free, τ)` of an assignment by the oracle route alone.
pub fn evaluate(a: &ArcAssignment) -> (bool, usize) {
    let sink_free = sink_sectors(&flood_sectors(a)).is_empty();
    let tau = a.len() - brute_force_matching(&brute_force_links(a));
    (sink_free, tau)
}

fn closure_cycles(word: &BraidWord) -> usize {
    let n = word.strands();
    let mut perm: Vec<usize> = (0..n).collect();
    for &l in word.letters() {
        perm.swap(l - 1, l);
    }
    let mut seen = vec![false; n];
    let mut cycles = 0;
    for s in 0..n {
        if !seen[s] {
            cycles += 1;
            let mut x = s;
            while !seen[x] {
                seen[x] = true;
                x = perm[x];
            }
        }
    }
    cycles
}

/// Re-derives every checkable field of a certificate.
pub fn verify_certificate(c: &Certificate) -> bool {
    let Ok(word) = parse_braid_with(&c.braid, c.n) else {
        return false;
    };
    if c.chosen_arcs.len() != c.directions.len() || closure_cycles(&word) != 1 {
        return false;
    }
    let d = build_diagram(&word);
    let mut a = ArcAssignment::new(d.clone());
    for (&arc, &dir) in c.chosen_arcs.iter().zip(&c.directions) {
        if arc.column == 0 || arc.column >= d.strands() || arc.ordinal == 0 {
            return false;
        }
        let cnt = d.column(arc.column).len();
        if cnt < 2 || arc.ordinal > cnt || a.insert(arc, dir).is_err() {
            return false;
        }
    }
    let genus = (word.len() + 1 - d.strands()) / 2;
    let sinks = sink_sectors(&flood_sectors(&a)).len();
    let mut pairs = brute_force_links(&a);
    pairs.sort();
    let deduction = brute_force_matching(&pairs);
    let tau = a.len() - deduction;
    let mut claimed = c.linked_pairs.clone();
    claimed.sort();
    c.genus == genus
        && c.sink_free == (sinks == 0)
        && c.sink_offenders == sinks
        && claimed == pairs
        && c.deduction == deduction
        && c.tau_sup == tau
        && c.slope_claim.upper == tau
        && c.slope_claim.valid == (sinks == 0)
        && c.endpoint_order == longitude_order(&a)
}

/// [`verify_certificate`] on certificate JSON.
pub fn verify_certificate_json(text: &str) -> Result<bool> {
    let c: Certificate = serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
    Ok(verify_certificate(&c))
}

fn parse_braid_with(text: &str, n: usize) -> Result<BraidWord> {
    let w = parse_braid(text)?;
    if w.strands() > n {
        return Err(Error::Format(format!(
            "word needs {} strands, certificate says {n}",
            w.strands()
        )));
    }
    BraidWord::new(n, w.letters().to_vec())
}

/// Every arc `α_{i,s}` with `1 ≤ s < c_i`.
pub fn candidate_arcs(d: &BrickDiagram) -> Vec<ArcId> {
    (1..d.strands())
        .flat_map(|i| (1..d.column(i).len()).map(move |s| ArcId::new(i, s)))
        .collect()
}

/// Best sink-free assignment over `{unchosen, left, right}` per candidate arc.
pub fn exhaustive_search(b: &BraidWord, max_arcs: usize) -> Result<SearchResult> {
    let d = build_diagram(b);
    let cands = candidate_arcs(&d);
    search_extensions(&ArcAssignment::new(d), &cands, max_arcs)
}

/// Best `(tau, code)` in a chunk, with its explored and sink-free counts.
type ChunkBest = (Option<(usize, u64)>, u64, u64);

/// Like [`exhaustive_search`], but every assignment extends `base` by arcs
/// from `candidates`.
///
/// Assignments are enumerated lexicographically over (arc index, state) with
/// states ordered unchosen, left, right; ties keep the earliest.
pub fn search_extensions(
    base: &ArcAssignment,
    candidates: &[ArcId],
    max_arcs: usize,
) -> Result<SearchResult> {
    let cap = max_arcs.min(SEARCH_CAP);
    let cands: Vec<ArcId> = candidates
        .iter()
        .copied()
        .filter(|&c| base.get(c).is_none())
        .collect();
    let k = cands.len();
    if k > cap {
        return Err(Error::TooLarge { candidates: k, cap });
    }
    let total = 3u64.pow(k as u32);
    let prefix = k.min(3);
    let chunk = 3u64.pow((k - prefix) as u32);
    let decode = |code: u64| -> ArcAssignment {
        let mut a = base.clone();
        let mut rest = code;
        // Most significant digit is the first candidate.
        for idx in (0..k).rev() {
            let state = rest % 3;
            rest /= 3;
            let dir = match state {
                0 => continue,
                1 => Direction::Left,
                _ => Direction::Right,
            };
            a.insert(cands[idx], dir).expect("fresh candidate");
        }
        a
    };
    let parts: Vec<ChunkBest> = (0..3u64.pow(prefix as u32))
        .into_par_iter()
        .map(|p| {
            let mut best: Option<(usize, u64)> = None;
            let mut free = 0;
            for code in p * chunk..(p + 1) * chunk {
                let (ok, tau) = evaluate(&decode(code));
                if ok {
                    free += 1;
                    if best.is_none_or(|(t, _)| tau > t) {
                        best = Some((tau, code));
                    }
                }
            }
            (best, chunk, free)
        })
        .collect();
    let mut best: Option<(usize, u64)> = None;
    let (mut explored, mut free) = (0, 0);
    for (b, e, f) in parts {
        explored += e;
        free += f;
        if let Some((t, code)) = b {
            if best.is_none_or(|(bt, bc)| t > bt || (t == bt && code < bc)) {
                best = Some((t, code));
            }
        }
    }
    debug_assert_eq!(explored, total);
    let (best_tau, code) = best
        .ok_or_else(|| Error::Domain("no sink-disk-free assignment in the search space".into()))?;
    Ok(SearchResult {
        best_assignment: decode(code),
        best_tau,
        explored,
        sink_free_count: free,
    })
}

/// Signature multiset of a decomposition, for comparing routes.
pub fn same_partition(x: &SectorDecomposition, y: &SectorDecomposition) -> bool {
    x.signatures() == y.signatures()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::branched_surface::{check_sink_free, compute_sectors, manual_assign};
    use crate::train_track::{boundary_track, linked_pairs};

    fn assign(word: &str, arcs: &[(usize, usize, Direction)]) -> ArcAssignment {
        manual_assign(&build_diagram(&parse_braid(word).unwrap()), arcs).unwrap()
    }

    #[test]
    fn empty_assignment_floods_to_one_sector() {
        let a = assign("1 2 1 2 2 1 2", &[]);
        let s = flood_sectors(&a);
        assert_eq!(s.sectors.len(), 1);
        assert!(sink_sectors(&s).is_empty());
    }

    #[test]
    fn trapped_band_matches_fast_route() {
        let a = assign(
            "1 1 1 1",
            &[(1, 1, Direction::Left), (1, 2, Direction::Right)],
        );
        let (fast, slow) = (compute_sectors(&a), flood_sectors(&a));
        assert!(same_partition(&fast, &slow), "{fast}\n{slow}");
        assert_eq!(
            check_sink_free(&fast).offenders.len(),
            sink_sectors(&slow).len()
        );
    }

    #[test]
    fn walk_meets_every_endpoint_once() {
        let a = assign(
            "1 2 2 1 1 2",
            &[
                (1, 1, Direction::Left),
                (2, 2, Direction::Right),
                (1, 2, Direction::Right),
            ],
        );
        let order = longitude_order(&a);
        assert_eq!(order.len(), 12);
        assert_eq!(order, boundary_track(&a).lambda_order);
        let fast = linked_pairs(&boundary_track(&a)).pairs;
        assert_eq!(brute_force_links(&a), fast);
    }

    #[test]
    fn matching_of_a_path() {
        let a = |o| ArcId::new(1, o);
        assert_eq!(brute_force_matching(&[(a(1), a(2)), (a(2), a(3))]), 1);
        assert_eq!(
            brute_force_matching(&[(a(1), a(2)), (a(2), a(3)), (a(3), a(4))]),
            2
        );
    }

    #[test]
    fn search_rejects_oversized_spaces() {
        let b = parse_braid(&"1 2 ".repeat(20)).unwrap();
        assert!(matches!(
            exhaustive_search(&b, 24),
            Err(Error::TooLarge { .. })
        ));
    }

    #[test]
    fn trefoil_search_is_finite() {
        let r = exhaustive_search(&parse_braid("1 1 1").unwrap(), 24).unwrap();
        assert_eq!(r.explored, 9);
        assert!(r.best_tau <= 2);
        assert!(r.sink_free_count >= 1);
    }
}
