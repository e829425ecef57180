//! Positive braid words: parsing, cyclic operations, standard form, crossing
//! statistics, distance functions and primality prechecks.
//!
//! Generators are 1-based (`σ_1..σ_{n-1}`), occurrence ordinals are 1-based and
//! relative to the current presentation.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A positive braid word on `strands` strands.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BraidWord {
    strands: usize,
    letters: Vec<usize>,
}

/// The `occurrence`-th letter `σ_generator` of a presentation, i.e. `σ_{i,j}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LetterRef {
    pub generator: usize,
    pub occurrence: usize,
}

impl LetterRef {
    pub fn new(generator: usize, occurrence: usize) -> Self {
        Self {
            generator,
            occurrence,
        }
    }
}

/// Which neighbouring column a distance counts: `Right` counts `σ_{j+1}`, `Left` counts `σ_{j-1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    Right,
    Left,
}

/// Parity class selected by the maximal parity sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Parity {
    Odd,
    Even,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossingStats {
    /// `counts[i - 1] = c_i`.
    pub counts: Vec<usize>,
    pub total: usize,
    /// `mod3_sums[j - 1]` sums `c_i` over `i ≡ j (mod 3)`.
    pub mod3_sums: [usize; 3],
    pub odd_sum: usize,
    pub even_sum: usize,
    /// 1, 2 or 3.
    pub c_min_choice: usize,
    pub c_max_choice: Parity,
}

impl BraidWord {
    pub fn new(strands: usize, letters: Vec<usize>) -> Result<Self> {
        if strands < 2 {
            return Err(Error::Parse(format!(
                "need at least 2 strands, got {strands}"
            )));
        }
        if letters.is_empty() {
            return Err(Error::Parse("empty braid word".into()));
        }
        if let Some(&bad) = letters.iter().find(|&&l| l == 0 || l >= strands) {
            return Err(Error::Parse(format!(
                "generator {bad} out of range for {strands} strands"
            )));
        }
        Ok(Self { strands, letters })
    }

    /// Builds a word with `n = 1 + max index`.
    pub fn from_letters(letters: Vec<usize>) -> Result<Self> {
        let n = letters.iter().copied().max().unwrap_or(0) + 1;
        Self::new(n.max(2), letters)
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn letters(&self) -> &[usize] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// `c_i`.
    pub fn count(&self, i: usize) -> usize {
        self.letters.iter().filter(|&&l| l == i).count()
    }

    /// Word positions (0-based) of the `σ_i` letters, in order.
    pub fn positions(&self, i: usize) -> Vec<usize> {
        self.letters
            .iter()
            .enumerate()
            .filter(|(_, &l)| l == i)
            .map(|(p, _)| p)
            .collect()
    }

    /// Position of `σ_{i,j}`.
    pub fn position_of(&self, at: LetterRef) -> Result<usize> {
        if at.occurrence == 0 {
            return Err(Error::Index(format!("occurrence 0 of σ{}", at.generator)));
        }
        self.letters
            .iter()
            .enumerate()
            .filter(|(_, &l)| l == at.generator)
            .nth(at.occurrence - 1)
            .map(|(p, _)| p)
            .ok_or_else(|| {
                Error::Index(format!(
                    "σ{} has fewer than {} occurrences",
                    at.generator, at.occurrence
                ))
            })
    }

    /// The letter reference at word position `pos`.
    pub fn letter_at(&self, pos: usize) -> LetterRef {
        let g = self.letters[pos];
        let occ = self.letters[..=pos].iter().filter(|&&l| l == g).count();
        LetterRef::new(g, occ)
    }

    /// Cyclic rotation making position `pos` the first letter.
    pub fn rotated(&self, pos: usize) -> BraidWord {
        let mut letters = self.letters.clone();
        letters.rotate_left(pos % self.len());
        BraidWord {
            strands: self.strands,
            letters,
        }
    }
}

impl fmt::Display for BraidWord {
    /// Run-length form accepted by [`parse_braid`], e.g. `1 2^2 1^2 2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        let mut i = 0;
        while i < self.letters.len() {
            let g = self.letters[i];
            let mut run = 1;
            while i + run < self.letters.len() && self.letters[i + run] == g {
                run += 1;
            }
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            if run == 1 {
                write!(f, "{g}")?;
            } else {
                write!(f, "{g}^{run}")?;
            }
            i += run;
        }
        Ok(())
    }
}

/// Parses tokens `k` or `k^p`; `#` starts a comment running to end of line.
pub fn parse_braid(text: &str) -> Result<BraidWord> {
    parse_braid_with_strands(text, None)
}

/// As [`parse_braid`], with an optional explicit strand count.
pub fn parse_braid_with_strands(text: &str, strands: Option<usize>) -> Result<BraidWord> {
    let mut letters = Vec::new();
    for line in text.lines() {
        let body = line.split('#').next().unwrap_or("");
        for tok in body.split_whitespace() {
            let (base, power) = match tok.split_once('^') {
                Some((b, p)) => (b, p),
                None => (tok, "1"),
            };
            let k: usize = base
                .parse()
                .map_err(|_| Error::Parse(format!("bad generator token `{tok}`")))?;
            let p: usize = power
                .parse()
                .map_err(|_| Error::Parse(format!("bad power in `{tok}`")))?;
            if k == 0 {
                return Err(Error::Parse(format!(
                    "generator index must be ≥ 1 in `{tok}`"
                )));
            }
            if p == 0 {
                return Err(Error::Parse(format!("power must be ≥ 1 in `{tok}`")));
            }
            letters.extend(std::iter::repeat_n(k, p));
        }
    }
    if letters.is_empty() {
        return Err(Error::Parse("empty braid word".into()));
    }
    match strands {
        Some(n) => BraidWord::new(n, letters),
        None => BraidWord::from_letters(letters),
    }
}

/// Number of cycles of the strand permutation, i.e. link components of the closure.
pub fn closure_components(b: &BraidWord) -> usize {
    let n = b.strands();
    let mut perm: Vec<usize> = (0..n).collect();
    for &l in b.letters() {
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

pub fn crossing_stats(b: &BraidWord) -> CrossingStats {
    let counts: Vec<usize> = (1..b.strands()).map(|i| b.count(i)).collect();
    let total = counts.iter().sum();
    let mut mod3_sums = [0usize; 3];
    let (mut odd_sum, mut even_sum) = (0, 0);
    for (idx, &c) in counts.iter().enumerate() {
        let i = idx + 1;
        mod3_sums[(i - 1) % 3] += c;
        if i % 2 == 1 {
            odd_sum += c;
        } else {
            even_sum += c;
        }
    }
    let [c1, c2, c3] = mod3_sums;
    let c_min_choice = if c1 < c2 && c1 < c3 {
        1
    } else if c2 < c1 && c2 < c3 {
        2
    } else if c3 < c1 && c3 < c2 {
        3
    } else if c2 == c3 && c2 < c1 {
        2
    } else {
        1
    };
    CrossingStats {
        counts,
        total,
        mod3_sums,
        odd_sum,
        even_sum,
        c_min_choice,
        c_max_choice: if odd_sum >= even_sum {
            Parity::Odd
        } else {
            Parity::Even
        },
    }
}

/// `d(j;s,t)` (right) or `d_L(j;s,t)` (left) on the linear presentation.
///
/// For `t < s` the value is `c_{j±1} - d(j;t,s)`.
pub fn distance(b: &BraidWord, j: usize, s: usize, t: usize, side: Side) -> Result<usize> {
    let other = match side {
        Side::Right if j + 1 < b.strands() => j + 1,
        Side::Left if j >= 2 => j - 1,
        _ => {
            return Err(Error::Index(format!(
                "no neighbouring column on the {side:?} of column {j}"
            )))
        }
    };
    if s == t {
        return Err(Error::Index(format!(
            "distance needs s ≠ t, got s = t = {s}"
        )));
    }
    let (lo, hi) = (s.min(t), s.max(t));
    let p = b.position_of(LetterRef::new(j, lo))?;
    let q = b.position_of(LetterRef::new(j, hi))?;
    let between = b.letters()[p + 1..q]
        .iter()
        .filter(|&&l| l == other)
        .count();
    Ok(if s < t {
        between
    } else {
        b.count(other) - between
    })
}

/// Cyclic rotation putting `σ_{i,j}` first.
pub fn pivot(b: &BraidWord, at: LetterRef) -> Result<BraidWord> {
    Ok(b.rotated(b.position_of(at)?))
}

/// A cyclic `σ_i σ_{i+1} σ_i` pattern up to far commutation: word positions
/// `(p, j, k)` of the first `σ_i`, the `σ_{i+1}`, and the second `σ_i`, in
/// cyclic order from `p`.
#[derive(Debug, Clone, Copy)]
struct Pattern {
    p: usize,
    j: usize,
    k: usize,
    i: usize,
}

fn braid_patterns(letters: &[usize], strands: usize) -> Vec<Pattern> {
    let len = letters.len();
    let mut out = Vec::new();
    for i in 1..strands.saturating_sub(1) {
        let near = |l: usize| l + 1 >= i && l <= i + 1;
        for p in (0..len).filter(|&p| letters[p] == i) {
            let mut hits = (1..len)
                .map(|x| (p + x) % len)
                .filter(|&q| near(letters[q]));
            let (Some(j), Some(k)) = (hits.next(), hits.next()) else {
                continue;
            };
            if letters[j] == i + 1 && letters[k] == i {
                out.push(Pattern { p, j, k, i });
            }
        }
    }
    out
}

/// Replaces the pattern by `σ_{i+1} σ_i σ_{i+1}`. Letters between the first
/// `σ_i` and the `σ_{i+1}` move in front of the triple, letters between the
/// `σ_{i+1}` and the second `σ_i` behind it.
fn rewrite(letters: &[usize], pat: Pattern) -> Vec<usize> {
    let len = letters.len();
    let Pattern { p, j, k, i } = pat;
    let rot: Vec<usize> = (0..len).map(|x| letters[(p + x) % len]).collect();
    let jr = (j + len - p) % len;
    let kr = (k + len - p) % len;
    let mut out = Vec::with_capacity(len);
    out.extend_from_slice(&rot[1..jr]);
    out.extend_from_slice(&[i + 1, i, i + 1]);
    out.extend_from_slice(&rot[jr + 1..kr]);
    out.extend_from_slice(&rot[kr + 1..]);
    (0..len).map(|x| out[(x + len - p) % len]).collect()
}

/// Rewrites to standard form.
///
/// Each step rewrites a pattern with the largest generator index, preferring
/// the rewrite that leaves the fewest patterns behind, then the leftmost
/// first letter. The index sum rises by one per rewrite, so the loop
/// terminates.
pub fn standardize(b: &BraidWord) -> BraidWord {
    let n = b.strands();
    let mut letters = b.letters().to_vec();
    loop {
        let pats = braid_patterns(&letters, n);
        let Some(top) = pats.iter().map(|q| q.i).max() else {
            break;
        };
        letters = pats
            .into_iter()
            .filter(|q| q.i == top)
            .map(|q| {
                let next = rewrite(&letters, q);
                (braid_patterns(&next, n).len(), q.p, next)
            })
            .min_by_key(|(left, p, _)| (*left, *p))
            .map(|(_, _, next)| next)
            .expect("at least one pattern");
    }
    BraidWord {
        strands: n,
        letters,
    }
}

/// Independent standard-form check.
///
/// A cyclic `σ_i σ_{i+1} σ_i` exists up to far commutation exactly when two
/// cyclically consecutive `σ_i` letters have one `σ_{i+1}` and no `σ_{i-1}`
/// between them.
pub fn is_standard(b: &BraidWord) -> bool {
    let len = b.len();
    let l = b.letters();
    for i in 1..b.strands().saturating_sub(1) {
        let pos = b.positions(i);
        if pos.len() < 2 {
            continue;
        }
        for (idx, &p) in pos.iter().enumerate() {
            let q = pos[(idx + 1) % pos.len()];
            let gap = (q + len - p) % len;
            let (mut up, mut down) = (0, 0);
            for x in 1..gap {
                match l[(p + x) % len] {
                    g if g == i + 1 => up += 1,
                    g if g + 1 == i => down += 1,
                    _ => {}
                }
            }
            if up == 1 && down == 0 {
                return false;
            }
        }
    }
    true
}

/// Number of maximal cyclic runs of adjacent `σ_i` letters.
pub fn block_count(b: &BraidWord, i: usize) -> Result<usize> {
    let l = b.letters();
    let len = l.len();
    let c = b.count(i);
    if c == 0 {
        return Err(Error::NoSuchGenerator(i));
    }
    if c == len {
        return Ok(1);
    }
    Ok((0..len)
        .filter(|&p| l[p] == i && l[(p + len - 1) % len] != i)
        .count())
}

/// Blocks of `σ_i` after far commutation: cyclic gaps between consecutive
/// `σ_i` letters that contain some `σ_{i±1}`.
pub fn separated_block_count(b: &BraidWord, i: usize) -> usize {
    let pos = b.positions(i);
    let len = b.len();
    let l = b.letters();
    if pos.is_empty() {
        return 0;
    }
    let blocks = (0..pos.len())
        .filter(|&idx| {
            let p = pos[idx];
            let q = pos[(idx + 1) % pos.len()];
            let gap = if pos.len() == 1 {
                len
            } else {
                (q + len - p) % len
            };
            (1..gap).any(|x| {
                let g = l[(p + x) % len];
                g + 1 == i || g == i + 1
            })
        })
        .count();
    blocks.max(1)
}

/// A violated necessary condition for primality.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Violation {
    /// `c_i < 2`.
    FewLetters { generator: usize, count: usize },
    /// All `σ_i` letters form one block up to far commutation.
    SingleBlock { generator: usize },
    /// `c_i = 2` and one cyclic gap has no `σ_{i±1}` letter on `side`.
    EmptyGap { generator: usize, side: Side },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::FewLetters { generator, count } => {
                write!(f, "c_{generator} = {count} < 2")
            }
            Violation::SingleBlock { generator } => write!(f, "B_{generator} = 1"),
            Violation::EmptyGap { generator, side } => {
                let d = if *side == Side::Right { "d" } else { "d_L" };
                write!(
                    f,
                    "c_{generator} = 2 with {d}({generator};1,2) = 0 in some rotation"
                )
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimalityReport {
    pub violations: Vec<Violation>,
}

impl PrimalityReport {
    pub fn passes(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn primality_precheck(b: &BraidWord) -> Result<PrimalityReport> {
    let comps = closure_components(b);
    if comps != 1 {
        return Err(Error::NotAKnot(comps));
    }
    let n = b.strands();
    let mut violations = Vec::new();
    for i in 1..n {
        let c = b.count(i);
        if c < 2 {
            violations.push(Violation::FewLetters {
                generator: i,
                count: c,
            });
            continue;
        }
        if separated_block_count(b, i) < 2 {
            violations.push(Violation::SingleBlock { generator: i });
        }
        if c == 2 && i >= 2 {
            let mut sides = vec![Side::Left];
            if i + 1 < n {
                sides.insert(0, Side::Right);
            }
            for side in sides {
                let a = distance(b, i, 1, 2, side)?;
                let z = distance(b, i, 2, 1, side)?;
                if a == 0 || z == 0 {
                    violations.push(Violation::EmptyGap { generator: i, side });
                }
            }
        }
    }
    Ok(PrimalityReport { violations })
}

/// Seifert genus of the closure, `g = (C - n + 1) / 2`.
pub fn genus(b: &BraidWord) -> Result<usize> {
    let comps = closure_components(b);
    if comps != 1 {
        return Err(Error::NotAKnot(comps));
    }
    let k = b.len() + 1 - b.strands();
    debug_assert!(k.is_multiple_of(2));
    Ok(k / 2)
}

/// Pivots about `σ_{s,t}`, then about the last `σ_{s+1}` of that presentation.
///
/// Afterwards `α_{s+1,1}` encloses the distinguished band on its right.
pub fn canonical_calibrate(b: &BraidWord, band: LetterRef) -> Result<BraidWord> {
    let s = band.generator;
    if s == 0 || s + 1 >= b.strands() {
        return Err(Error::Index(format!("column {s} has no right neighbour")));
    }
    let next = b.count(s + 1);
    if next < 2 {
        return Err(Error::CannotCalibrate {
            column: s,
            next: s + 1,
            count: next,
        });
    }
    let first = pivot(b, band)?;
    pivot(&first, LetterRef::new(s + 1, next))
}
