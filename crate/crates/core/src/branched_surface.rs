//! Co-oriented product disks on the fiber surface, the templates that choose
//! them, the branch-sector decomposition and the sink-disk test.
//!
//! Each chosen arc `α_{i,s}` meets the fiber in two chords: the plumbing chord
//! on `S_i`, enclosing the sites in the cyclic interval `[b_{i,s}, b_{i,s+1})`,
//! and the image chord on `S_{i+1}`, enclosing `(b_{i,s}, b_{i,s+1}]`. A chord
//! cuts its disk into an enclosed side and an open side. A right pointer points
//! into its enclosed side, a left pointer out of it; the image chord carries
//! the opposite pointer.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use petgraph::unionfind::UnionFind;
use serde::{Deserialize, Serialize};

use crate::braid_core::{is_standard, pivot, BraidWord, LetterRef};
use crate::error::{Error, Result};
use crate::surface_model::{build_diagram, BrickDiagram};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Direction {
    Left,
    Right,
}

impl Direction {
    pub fn flipped(self) -> Self {
        match self {
            Direction::Left => Direction::Right,
            Direction::Right => Direction::Left,
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Left => "left",
            Direction::Right => "right",
        })
    }
}

/// Arc `α_{column,ordinal}`; ordinal `c_i` is the wrap arc from `b_{i,c_i}` to `b_{i,1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ArcId {
    pub column: usize,
    pub ordinal: usize,
}

impl ArcId {
    pub fn new(column: usize, ordinal: usize) -> Self {
        Self { column, ordinal }
    }
}

impl fmt::Display for ArcId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "α({},{})", self.column, self.ordinal)
    }
}

/// A set of chosen arcs with their pointers, on one diagram.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArcAssignment {
    diagram: BrickDiagram,
    #[serde(with = "arc_list")]
    arcs: BTreeMap<ArcId, Direction>,
}

/// JSON object keys must be strings, so arcs travel as `[arc, direction]` pairs.
mod arc_list {
    use super::{ArcId, BTreeMap, Direction};
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(
        m: &BTreeMap<ArcId, Direction>,
        s: S,
    ) -> Result<S::Ok, S::Error> {
        m.iter().collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> Result<BTreeMap<ArcId, Direction>, D::Error> {
        Ok(Vec::<(ArcId, Direction)>::deserialize(d)?
            .into_iter()
            .collect())
    }
}

impl ArcAssignment {
    pub fn new(diagram: BrickDiagram) -> Self {
        Self {
            diagram,
            arcs: BTreeMap::new(),
        }
    }

    pub fn for_word(b: &BraidWord) -> Self {
        Self::new(build_diagram(b))
    }

    pub fn diagram(&self) -> &BrickDiagram {
        &self.diagram
    }

    pub fn word(&self) -> &BraidWord {
        self.diagram.word()
    }

    fn check(&self, arc: ArcId) -> Result<()> {
        let slots = self.diagram.arc_slots(arc.column);
        if arc.column == 0 || arc.ordinal == 0 || arc.ordinal > slots {
            return Err(Error::Index(format!("{arc} is not an arc of this diagram")));
        }
        Ok(())
    }

    /// Adds a new arc; choosing an arc twice is an error.
    pub fn insert(&mut self, arc: ArcId, dir: Direction) -> Result<()> {
        self.check(arc)?;
        if self.arcs.contains_key(&arc) {
            return Err(Error::DuplicateChoice(arc.column, arc.ordinal));
        }
        self.arcs.insert(arc, dir);
        Ok(())
    }

    /// Adds or re-orients an arc.
    pub fn set(&mut self, arc: ArcId, dir: Direction) -> Result<()> {
        self.check(arc)?;
        self.arcs.insert(arc, dir);
        Ok(())
    }

    pub fn remove(&mut self, arc: ArcId) -> Option<Direction> {
        self.arcs.remove(&arc)
    }

    pub fn get(&self, arc: ArcId) -> Option<Direction> {
        self.arcs.get(&arc).copied()
    }

    pub fn len(&self) -> usize {
        self.arcs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (ArcId, Direction)> + '_ {
        self.arcs.iter().map(|(&a, &d)| (a, d))
    }

    /// Arcs per column, indexed by column.
    pub fn column_counts(&self) -> Vec<usize> {
        let mut out = vec![0; self.diagram.column_count() + 1];
        for a in self.arcs.keys() {
            out[a.column] += 1;
        }
        out
    }

    /// True when some chosen arc is a wrap arc.
    pub fn uses_wrap_arcs(&self) -> bool {
        self.arcs
            .keys()
            .any(|a| a.ordinal == self.diagram.count(a.column))
    }
}

pub fn manual_assign(
    d: &BrickDiagram,
    choices: &[(usize, usize, Direction)],
) -> Result<ArcAssignment> {
    let mut a = ArcAssignment::new(d.clone());
    for &(i, j, dir) in choices {
        a.insert(ArcId::new(i, j), dir)?;
    }
    Ok(a)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Template {
    /// Column `i`.
    Single(usize),
    /// Columns `i` and `i+1`.
    Pair(usize),
}

/// Pointers of the single-column template on a presentation starting with `σ_i`:
/// arcs whose top band precedes the first `σ_{i+1}` point left, the rest right.
pub fn single_template_directions(b: &BraidWord, i: usize) -> Vec<(ArcId, Direction)> {
    let col = b.positions(i);
    let first_next = b.positions(i + 1).first().copied().unwrap_or(usize::MAX);
    (1..col.len())
        .map(|t| {
            let dir = if col[t - 1] < first_next {
                Direction::Left
            } else {
                Direction::Right
            };
            (ArcId::new(i, t), dir)
        })
        .collect()
}

/// Pointers of the second column of the pair template: first arc right, the rest left.
pub fn pair_tail_directions(b: &BraidWord, i: usize) -> Vec<(ArcId, Direction)> {
    (1..b.count(i))
        .map(|t| {
            let dir = if t == 1 {
                Direction::Right
            } else {
                Direction::Left
            };
            (ArcId::new(i, t), dir)
        })
        .collect()
}

/// Pivots about `σ_{i,occurrence}` and co-orients the template columns.
pub fn apply_template(
    b: &BraidWord,
    target: Template,
    occurrence: usize,
) -> Result<(BraidWord, ArcAssignment)> {
    if !is_standard(b) {
        return Err(Error::RequiresStandardForm);
    }
    let i = match target {
        Template::Single(i) | Template::Pair(i) => i,
    };
    if b.count(i) < 2 {
        return Err(Error::Domain(format!(
            "template on column {i} needs c_{i} ≥ 2"
        )));
    }
    let w = pivot(b, LetterRef::new(i, occurrence))?;
    let mut choices = single_template_directions(&w, i);
    if let Template::Pair(_) = target {
        if w.count(i + 1) < 2 {
            return Err(Error::Domain(format!(
                "pair template needs c_{} ≥ 2",
                i + 1
            )));
        }
        choices.extend(pair_tail_directions(&w, i + 1));
    }
    let mut a = ArcAssignment::for_word(&w);
    for (arc, dir) in choices {
        a.insert(arc, dir)?;
    }
    Ok((w, a))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ChordKind {
    Plumbing,
    Image,
}

/// One component of the branch locus on the fiber: a chord of a product disk.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BranchArc {
    pub arc: ArcId,
    pub kind: ChordKind,
}

impl fmt::Display for BranchArc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            ChordKind::Plumbing => write!(f, "{}", self.arc),
            ChordKind::Image => write!(f, "φ{}", self.arc),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chord {
    pub branch: BranchArc,
    pub disk: usize,
    /// First enclosed site index on the disk.
    pub start: usize,
    /// Number of enclosed sites, `1 ≤ len < m`.
    pub len: usize,
    /// Effective pointer of this chord.
    pub direction: Direction,
}

impl Chord {
    pub fn end(&self, m: usize) -> usize {
        (self.start + self.len - 1) % m
    }

    pub fn contains(&self, site: usize, m: usize) -> bool {
        (site + m - self.start) % m < self.len
    }
}

/// A chord endpoint; `Start` sits before the first enclosed site, `End` after the last.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Endpoint {
    Start(usize),
    End(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiskLayout {
    pub disk: usize,
    /// Word positions of the sites, in cyclic order.
    pub sites: Vec<usize>,
    /// `gaps[g]` lists the endpoints between site `g` and site `g+1`, in boundary order.
    pub gaps: Vec<Vec<Endpoint>>,
}

impl DiskLayout {
    pub fn site_index(&self, position: usize) -> usize {
        self.sites
            .binary_search(&position)
            .expect("position has a site on this disk")
    }
}

/// Endpoint order of every chord on every Seifert disk boundary.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Layout {
    pub chords: Vec<Chord>,
    /// Indexed by disk number minus one.
    pub disks: Vec<DiskLayout>,
    /// Chord indices `(plumbing, image)` per chosen arc.
    pub arc_chords: BTreeMap<ArcId, (usize, usize)>,
}

/// Builds the boundary layout of the assignment's chords.
///
/// Within a gap, chords ending there come first, smaller enclosure first; then
/// chords starting after it, larger enclosure first. A plumbing chord and an
/// image chord with the same enclosure nest with the image chord outside.
pub fn layout(a: &ArcAssignment) -> Layout {
    let d = a.diagram();
    let n = d.strands();
    let mut disks: Vec<DiskLayout> = (1..=n)
        .map(|k| {
            let sites = d.disk_sites(k);
            let gaps = vec![Vec::new(); sites.len()];
            DiskLayout {
                disk: k,
                sites,
                gaps,
            }
        })
        .collect();
    let mut chords = Vec::new();
    let mut arc_chords = BTreeMap::new();
    for (arc, dir) in a.iter() {
        let col = d.column(arc.column);
        let top = col[arc.ordinal - 1];
        let bottom = col[arc.ordinal % col.len()];
        let here = &disks[arc.column - 1];
        let m = here.sites.len();
        let (ta, tb) = (here.site_index(top), here.site_index(bottom));
        let plumbing = Chord {
            branch: BranchArc {
                arc,
                kind: ChordKind::Plumbing,
            },
            disk: arc.column,
            start: ta,
            len: (tb + m - ta) % m,
            direction: dir,
        };
        let there = &disks[arc.column];
        let m2 = there.sites.len();
        let (ia, ib) = (there.site_index(top), there.site_index(bottom));
        let image = Chord {
            branch: BranchArc {
                arc,
                kind: ChordKind::Image,
            },
            disk: arc.column + 1,
            start: (ia + 1) % m2,
            len: (ib + m2 - ia) % m2,
            direction: dir.flipped(),
        };
        arc_chords.insert(arc, (chords.len(), chords.len() + 1));
        chords.push(plumbing);
        chords.push(image);
    }
    for dl in disks.iter_mut() {
        let m = dl.sites.len();
        let mut ending: Vec<Vec<usize>> = vec![Vec::new(); m];
        let mut starting: Vec<Vec<usize>> = vec![Vec::new(); m];
        for (idx, c) in chords.iter().enumerate() {
            if c.disk == dl.disk {
                ending[c.end(m)].push(idx);
                starting[(c.start + m - 1) % m].push(idx);
            }
        }
        for g in 0..m {
            ending[g].sort_by_key(|&c| (chords[c].len, chords[c].branch.kind));
            starting[g].sort_by_key(|&c| {
                (
                    std::cmp::Reverse(chords[c].len),
                    std::cmp::Reverse(chords[c].branch.kind),
                )
            });
            dl.gaps[g] = ending[g]
                .iter()
                .map(|&c| Endpoint::End(c))
                .chain(starting[g].iter().map(|&c| Endpoint::Start(c)))
                .collect();
        }
    }
    Layout {
        chords,
        disks,
        arc_chords,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Orientation {
    Inward,
    Outward,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum RegionKind {
    /// A piece of `S_disk` cut out by chords; `inside` lists the chords whose
    /// enclosed side contains it.
    Face {
        disk: usize,
        inside: Vec<BranchArc>,
        sites: Vec<usize>,
        seam: bool,
    },
    Band {
        position: usize,
    },
    ProductDisk {
        arc: ArcId,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum SectorClass {
    /// Contains the core of the listed Seifert disks.
    Disk(Vec<usize>),
    /// A piece of one Seifert disk meeting no band.
    Polygon(usize),
    Horizontal,
    ProductDisk(ArcId),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sector {
    pub regions: Vec<usize>,
    pub class: SectorClass,
    pub boundary: Vec<(BranchArc, Orientation)>,
}

impl Sector {
    pub fn is_product(&self) -> bool {
        matches!(self.class, SectorClass::ProductDisk(_))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SectorDecomposition {
    pub regions: Vec<RegionKind>,
    pub sectors: Vec<Sector>,
    /// Sector index of each region.
    pub region_sector: Vec<usize>,
}

/// Route-independent summary of one sector used to compare decompositions.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SectorSignature {
    pub product: Option<ArcId>,
    pub bands: Vec<usize>,
    pub seams: Vec<usize>,
    pub faces: usize,
    pub boundary: BTreeSet<(BranchArc, Orientation)>,
}

impl SectorDecomposition {
    pub fn signatures(&self) -> Vec<SectorSignature> {
        let mut out: Vec<SectorSignature> = self
            .sectors
            .iter()
            .map(|s| {
                let mut sig = SectorSignature {
                    product: None,
                    bands: Vec::new(),
                    seams: Vec::new(),
                    faces: 0,
                    boundary: s.boundary.iter().copied().collect(),
                };
                for &r in &s.regions {
                    match &self.regions[r] {
                        RegionKind::Face { disk, seam, .. } => {
                            sig.faces += 1;
                            if *seam {
                                sig.seams.push(*disk);
                            }
                        }
                        RegionKind::Band { position } => sig.bands.push(*position),
                        RegionKind::ProductDisk { arc } => sig.product = Some(*arc),
                    }
                }
                sig.bands.sort_unstable();
                sig.seams.sort_unstable();
                sig
            })
            .collect();
        out.sort();
        out
    }

    /// Sector containing the band at word position `position`.
    pub fn sector_of_band(&self, position: usize) -> Option<usize> {
        self.regions
            .iter()
            .position(|r| matches!(r, RegionKind::Band { position: p } if *p == position))
            .map(|r| self.region_sector[r])
    }
}

impl fmt::Display for SectorDecomposition {
    /// One line per sector: class, member regions, boundary arcs.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (idx, s) in self.sectors.iter().enumerate() {
            let class = match &s.class {
                SectorClass::Disk(ks) => format!(
                    "disk[{}]",
                    ks.iter()
                        .map(|k| format!("S{k}"))
                        .collect::<Vec<_>>()
                        .join(",")
                ),
                SectorClass::Polygon(k) => format!("polygon[S{k}]"),
                SectorClass::Horizontal => "horizontal".to_string(),
                SectorClass::ProductDisk(a) => format!("product[{a}]"),
            };
            let regions: Vec<String> = s
                .regions
                .iter()
                .map(|&r| match &self.regions[r] {
                    RegionKind::Face { disk, sites, .. } => format!("S{disk}{sites:?}"),
                    RegionKind::Band { position } => format!("b@{position}"),
                    RegionKind::ProductDisk { arc } => format!("D{arc}"),
                })
                .collect();
            let boundary: Vec<String> = s
                .boundary
                .iter()
                .map(|(b, o)| {
                    let o = if *o == Orientation::Inward {
                        "in"
                    } else {
                        "out"
                    };
                    format!("{b}:{o}")
                })
                .collect();
            writeln!(
                f,
                "sector {idx}: {class} regions {{{}}} boundary {{{}}}",
                regions.join(" "),
                boundary.join(" ")
            )?;
        }
        Ok(())
    }
}

/// Faces of one disk, keyed by the set of chords enclosing them.
struct DiskFaces {
    signs: Vec<Vec<usize>>,
    site_face: Vec<usize>,
    seam_face: usize,
}

fn disk_faces(dl: &DiskLayout, chords: &[Chord]) -> DiskFaces {
    let m = dl.sites.len();
    let mut current: BTreeSet<usize> = chords
        .iter()
        .enumerate()
        .filter(|(_, c)| c.disk == dl.disk && c.contains(0, m))
        .map(|(i, _)| i)
        .collect();
    let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
    let mut signs: Vec<Vec<usize>> = Vec::new();
    let mut intern = |s: &BTreeSet<usize>, signs: &mut Vec<Vec<usize>>| -> usize {
        let key: Vec<usize> = s.iter().copied().collect();
        *index.entry(key.clone()).or_insert_with(|| {
            signs.push(key);
            signs.len() - 1
        })
    };
    intern(&current, &mut signs);
    let mut site_face = vec![0; m];
    let mut seam_face = 0;
    // Position of each endpoint along the boundary, for the crossing test.
    let mut span: BTreeMap<usize, (usize, usize)> = BTreeMap::new();
    let mut clock = 0;
    #[allow(clippy::needless_range_loop)]
    for g in 0..m {
        site_face[g] = intern(&current, &mut signs);
        let gap = &dl.gaps[g];
        let ends = gap.iter().filter(|e| matches!(e, Endpoint::End(_))).count();
        for (slot, e) in gap.iter().enumerate() {
            if g == m - 1 && slot == ends {
                seam_face = intern(&current, &mut signs);
            }
            let c = match *e {
                Endpoint::Start(c) => {
                    current.insert(c);
                    c
                }
                Endpoint::End(c) => {
                    current.remove(&c);
                    c
                }
            };
            let entry = span.entry(c).or_insert((clock, clock));
            entry.1 = clock;
            clock += 1;
            intern(&current, &mut signs);
        }
        if g == m - 1 && ends == gap.len() {
            seam_face = intern(&current, &mut signs);
        }
    }
    // A cycle of crossing chords bounds an interior face away from the circle.
    let spans: Vec<(usize, usize)> = span.values().copied().collect();
    let mut uf = UnionFind::<usize>::new(spans.len());
    let mut has_cycle = false;
    for x in 0..spans.len() {
        for y in x + 1..spans.len() {
            let ((a0, a1), (b0, b1)) = (spans[x], spans[y]);
            let crosses = (a0 < b0 && b0 < a1 && a1 < b1) || (b0 < a0 && a0 < b1 && b1 < a1);
            if crosses && !uf.union(x, y) {
                has_cycle = true;
            }
        }
    }
    if has_cycle && !index.contains_key(&Vec::new()) {
        signs.push(Vec::new());
    }
    DiskFaces {
        signs,
        site_face,
        seam_face,
    }
}

/// Branch sectors of the assignment.
///
/// Faces are unioned through bands; faces whose side sets differ in exactly
/// one chord are adjacent across it.
pub fn compute_sectors(a: &ArcAssignment) -> SectorDecomposition {
    let lay = layout(a);
    let d = a.diagram();
    let mut regions: Vec<RegionKind> = Vec::new();
    let mut face_base = Vec::new();
    let mut per_disk = Vec::new();
    for dl in &lay.disks {
        let df = disk_faces(dl, &lay.chords);
        face_base.push(regions.len());
        let mut sites_of: Vec<Vec<usize>> = vec![Vec::new(); df.signs.len()];
        for (g, &f) in df.site_face.iter().enumerate() {
            sites_of[f].push(dl.sites[g]);
        }
        for (f, sign) in df.signs.iter().enumerate() {
            regions.push(RegionKind::Face {
                disk: dl.disk,
                inside: sign.iter().map(|&c| lay.chords[c].branch).collect(),
                sites: sites_of[f].clone(),
                seam: f == df.seam_face,
            });
        }
        per_disk.push(df);
    }
    let band_base = regions.len();
    for p in 0..d.word().len() {
        regions.push(RegionKind::Band { position: p });
    }
    let product_base = regions.len();
    for (arc, _) in a.iter() {
        regions.push(RegionKind::ProductDisk { arc });
    }
    let mut uf = UnionFind::<usize>::new(regions.len());
    for (p, &i) in d.word().letters().iter().enumerate() {
        for k in [i, i + 1] {
            let dl = &lay.disks[k - 1];
            let f = per_disk[k - 1].site_face[dl.site_index(p)];
            uf.union(band_base + p, face_base[k - 1] + f);
        }
    }
    let labels = uf.into_labeling();
    let mut sector_of_label: BTreeMap<usize, usize> = BTreeMap::new();
    let mut region_sector = vec![0; regions.len()];
    let mut sectors: Vec<Sector> = Vec::new();
    for r in 0..regions.len() {
        let s = *sector_of_label.entry(labels[r]).or_insert_with(|| {
            sectors.push(Sector {
                regions: Vec::new(),
                class: SectorClass::Horizontal,
                boundary: Vec::new(),
            });
            sectors.len() - 1
        });
        region_sector[r] = s;
        sectors[s].regions.push(r);
    }
    for (k, df) in per_disk.iter().enumerate() {
        let lookup: HashMap<&Vec<usize>, usize> =
            df.signs.iter().enumerate().map(|(f, s)| (s, f)).collect();
        for (f, sign) in df.signs.iter().enumerate() {
            for &c in sign {
                let outer: Vec<usize> = sign.iter().copied().filter(|&x| x != c).collect();
                let Some(&g) = lookup.get(&outer) else {
                    continue;
                };
                let chord = &lay.chords[c];
                let (inner_sector, outer_sector) = (
                    region_sector[face_base[k] + f],
                    region_sector[face_base[k] + g],
                );
                let into_enclosed = chord.direction == Direction::Right;
                let o = |inward: bool| {
                    if inward {
                        Orientation::Inward
                    } else {
                        Orientation::Outward
                    }
                };
                sectors[inner_sector]
                    .boundary
                    .push((chord.branch, o(into_enclosed)));
                sectors[outer_sector]
                    .boundary
                    .push((chord.branch, o(!into_enclosed)));
            }
        }
    }
    for s in sectors.iter_mut() {
        s.boundary.sort();
        s.boundary.dedup();
        s.class = classify(&s.regions, &regions);
    }
    debug_assert!(sectors
        .iter()
        .filter(|s| s.is_product())
        .all(|s| s.regions.len() == 1 && s.regions[0] >= product_base));
    SectorDecomposition {
        regions,
        sectors,
        region_sector,
    }
}

pub(crate) fn classify(members: &[usize], regions: &[RegionKind]) -> SectorClass {
    let mut seams = Vec::new();
    let mut has_band = false;
    let mut face_disk = None;
    for &r in members {
        match &regions[r] {
            RegionKind::ProductDisk { arc } => return SectorClass::ProductDisk(*arc),
            RegionKind::Band { .. } => has_band = true,
            RegionKind::Face { disk, seam, .. } => {
                face_disk = Some(*disk);
                if *seam {
                    seams.push(*disk);
                }
            }
        }
    }
    if !seams.is_empty() {
        seams.sort_unstable();
        SectorClass::Disk(seams)
    } else if has_band {
        SectorClass::Horizontal
    } else {
        SectorClass::Polygon(face_disk.unwrap_or(0))
    }
}

/// Why a sector is not a sink disk.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum SafeReason {
    ProductDisk,
    OutwardArc(BranchArc),
    /// Meets no branch arc, so it is bounded by the knot alone.
    NoBranchBoundary,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SinkReport {
    pub sink_free: bool,
    /// Sector indices whose boundary arcs all point inward.
    pub offenders: Vec<usize>,
    /// Indexed by sector; `None` for offenders.
    pub safe_reasons: Vec<Option<SafeReason>>,
}

pub fn check_sink_free(s: &SectorDecomposition) -> SinkReport {
    let safe_reasons: Vec<Option<SafeReason>> = s
        .sectors
        .iter()
        .map(|sec| {
            if sec.is_product() {
                Some(SafeReason::ProductDisk)
            } else if sec.boundary.is_empty() {
                Some(SafeReason::NoBranchBoundary)
            } else {
                sec.boundary
                    .iter()
                    .find(|(_, o)| *o == Orientation::Outward)
                    .map(|(b, _)| SafeReason::OutwardArc(*b))
            }
        })
        .collect();
    let offenders: Vec<usize> = safe_reasons
        .iter()
        .enumerate()
        .filter(|(_, r)| r.is_none())
        .map(|(i, _)| i)
        .collect();
    SinkReport {
        sink_free: offenders.is_empty(),
        offenders,
        safe_reasons,
    }
}
