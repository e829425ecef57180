//! Cyclic presentations whose letters keep a stable identity.
//!
//! Pivots and far commutations do not change the Bennequin surface, so an
//! arc is named by its column and the id of its top letter; its ordinal is
//! re-derived in whatever presentation is current.

use std::collections::BTreeMap;

use crate::braid_core::BraidWord;
use crate::branched_surface::{ArcAssignment, ArcId, Direction};
use crate::error::Result;

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Pres {
    strands: usize,
    letters: Vec<usize>,
    ids: Vec<usize>,
}

/// Arc of column `column` running from letter `top` to the next letter of
/// that column, cyclically.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub(crate) struct ArcKey {
    pub column: usize,
    pub top: usize,
}

pub(crate) type Plan = BTreeMap<ArcKey, Direction>;

impl Pres {
    pub fn new(b: &BraidWord) -> Self {
        Pres {
            strands: b.strands(),
            letters: b.letters().to_vec(),
            ids: (0..b.len()).collect(),
        }
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn word(&self) -> BraidWord {
        BraidWord::new(self.strands, self.letters.clone()).expect("letters stay valid")
    }

    pub fn pos(&self, id: usize) -> usize {
        self.ids
            .iter()
            .position(|&x| x == id)
            .expect("id belongs to this presentation")
    }

    pub fn gen(&self, id: usize) -> usize {
        self.letters[self.pos(id)]
    }

    #[cfg(test)]
    pub fn first_id(&self) -> usize {
        self.ids[0]
    }

    /// Pivot: rotate so that `id` is the first letter.
    pub fn rotate_to(&mut self, id: usize) {
        let p = self.pos(id);
        self.letters.rotate_left(p);
        self.ids.rotate_left(p);
    }

    /// Ids of the `σ_i` letters in presentation order.
    pub fn column(&self, i: usize) -> Vec<usize> {
        self.letters
            .iter()
            .zip(&self.ids)
            .filter(|(&l, _)| l == i)
            .map(|(_, &id)| id)
            .collect()
    }

    /// `σ_{i,k}` of the current presentation, 1-based.
    #[cfg(test)]
    pub fn nth(&self, i: usize, k: usize) -> Option<usize> {
        self.column(i).get(k.checked_sub(1)?).copied()
    }

    /// Offset of `id` after `from`, going forward cyclically; `from` itself is 0.
    pub fn offset(&self, from: usize, id: usize) -> usize {
        let n = self.len();
        (self.pos(id) + n - self.pos(from)) % n
    }

    /// Ids strictly after `from`, cyclically, ending just before `from`.
    pub fn after(&self, from: usize) -> Vec<usize> {
        let p = self.pos(from);
        let n = self.len();
        (1..n).map(|k| self.ids[(p + k) % n]).collect()
    }

    pub fn first_after(&self, from: usize, gen: usize) -> Option<usize> {
        self.after(from).into_iter().find(|&id| self.gen(id) == gen)
    }

    pub fn last_before(&self, from: usize, gen: usize) -> Option<usize> {
        self.after(from)
            .into_iter()
            .rev()
            .find(|&id| self.gen(id) == gen)
    }

    /// `σ_gen` letters strictly between `a` and `b`, going forward from `a`.
    pub fn between(&self, a: usize, b: usize, gen: usize) -> Vec<usize> {
        let mut out = Vec::new();
        for id in self.after(a) {
            if id == b {
                break;
            }
            if self.gen(id) == gen {
                out.push(id);
            }
        }
        out
    }

    /// Column `i` read cyclically from its letter `start`.
    pub fn column_from(&self, i: usize, start: usize) -> Vec<usize> {
        let mut col = self.column(i);
        let k = col
            .iter()
            .position(|&x| x == start)
            .expect("start in column");
        col.rotate_left(k);
        col
    }

    /// Successor of `id` within its own column, cyclically.
    pub fn next_in_column(&self, id: usize) -> usize {
        let i = self.gen(id);
        self.first_after(id, i).unwrap_or(id)
    }

    /// Moves the letter `id` forward past letters it commutes with until the
    /// next letter does not commute or is `stop`. Returns the number of steps.
    pub fn slide_right(&mut self, id: usize, stop: Option<usize>) -> usize {
        let n = self.len();
        let mut steps = 0;
        loop {
            let p = self.pos(id);
            if p + 1 >= n {
                break;
            }
            let next = self.ids[p + 1];
            if Some(next) == stop || self.letters[p].abs_diff(self.letters[p + 1]) < 2 {
                break;
            }
            self.letters.swap(p, p + 1);
            self.ids.swap(p, p + 1);
            steps += 1;
        }
        steps
    }

    /// Moves `id` to the front of the word. Valid only when it commutes with
    /// every letter it passes; checked.
    pub fn move_to_front(&mut self, id: usize) -> bool {
        let p = self.pos(id);
        let g = self.letters[p];
        if self.letters[..p].iter().any(|&l| l.abs_diff(g) < 2) {
            return false;
        }
        let l = self.letters.remove(p);
        let i = self.ids.remove(p);
        self.letters.insert(0, l);
        self.ids.insert(0, i);
        true
    }

    /// Moves `id` to just after `past`, which lies ahead of it; checked to
    /// commute with `past` and every letter in between.
    pub fn hop_right(&mut self, id: usize, past: usize) -> bool {
        let (p, q) = (self.pos(id), self.pos(past));
        let g = self.letters[p];
        if q <= p || self.letters[p + 1..=q].iter().any(|&l| l.abs_diff(g) < 2) {
            return false;
        }
        let l = self.letters.remove(p);
        let i = self.ids.remove(p);
        self.letters.insert(q, l);
        self.ids.insert(q, i);
        true
    }

    /// Moves `id` to just before `past`, which lies behind it; checked like
    /// [`Pres::hop_right`].
    pub fn hop_left(&mut self, id: usize, past: usize) -> bool {
        let (p, q) = (self.pos(id), self.pos(past));
        let g = self.letters[p];
        if q >= p || self.letters[q..p].iter().any(|&l| l.abs_diff(g) < 2) {
            return false;
        }
        let l = self.letters.remove(p);
        let i = self.ids.remove(p);
        self.letters.insert(q, l);
        self.ids.insert(q, i);
        true
    }

    /// `d(j; s, t)` on the right (`σ_{j+1}`) between two `σ_j` letters.
    pub fn gap_right(&self, a: usize, b: usize) -> usize {
        let j = self.gen(a);
        self.between(a, b, j + 1).len()
    }

    /// `d_L(j; s, t)`: `σ_{j-1}` letters between two `σ_j` letters.
    pub fn gap_left(&self, a: usize, b: usize) -> usize {
        let j = self.gen(a);
        if j < 2 {
            return 0;
        }
        self.between(a, b, j - 1).len()
    }

    /// Arc of column `i` in the current numbering.
    pub fn arc_id(&self, key: ArcKey) -> ArcId {
        let col = self.column(key.column);
        let k = col
            .iter()
            .position(|&x| x == key.top)
            .expect("arc top in its column");
        ArcId::new(key.column, k + 1)
    }

    #[cfg(test)]
    pub fn key_of(&self, arc: ArcId) -> Option<ArcKey> {
        Some(ArcKey {
            column: arc.column,
            top: self.nth(arc.column, arc.ordinal)?,
        })
    }

    /// Assignment for `plan` in the current presentation.
    pub fn assignment(&self, plan: &Plan) -> Result<ArcAssignment> {
        let mut a = ArcAssignment::for_word(&self.word());
        for (&key, &dir) in plan {
            a.insert(self.arc_id(key), dir)?;
        }
        Ok(a)
    }

    /// Rotation with the fewest wrap arcs among the plan's arcs; ties go to
    /// the smallest shift from the current start.
    pub fn tidy_rotation(&self, plan: &Plan) -> Pres {
        let n = self.len();
        let mut best = (usize::MAX, 0);
        for r in 0..n {
            let mut last = BTreeMap::new();
            for k in 0..n {
                let p = (r + k) % n;
                last.insert(self.letters[p], self.ids[p]);
            }
            let wraps = plan
                .keys()
                .filter(|k| last.get(&k.column) == Some(&k.top))
                .count();
            if wraps < best.0 {
                best = (wraps, r);
            }
        }
        let mut out = self.clone();
        let id = self.ids[best.1];
        out.rotate_to(id);
        out
    }
}

/// Template pointers on column `i` read from its letter `start`: arcs whose
/// top letter precedes the first `σ_{i+1}` after `start` point left.
pub(crate) fn template(p: &Pres, i: usize, start: usize) -> Vec<(ArcKey, Direction)> {
    let col = p.column_from(i, start);
    let cut = if i + 1 < p.strands() {
        p.first_after(start, i + 1)
            .map_or(usize::MAX, |y| p.offset(start, y))
    } else {
        usize::MAX
    };
    col.iter()
        .take(col.len().saturating_sub(1))
        .map(|&top| {
            let dir = if p.offset(start, top) < cut {
                Direction::Left
            } else {
                Direction::Right
            };
            (ArcKey { column: i, top }, dir)
        })
        .collect()
}

/// Second column of the pair template, read from the first column's `start`:
/// first arc right, the rest left.
pub(crate) fn pair_tail(p: &Pres, i: usize, start: usize) -> Vec<(ArcKey, Direction)> {
    let Some(first) = p.first_after(start, i) else {
        return Vec::new();
    };
    let col = p.column_from(i, first);
    col.iter()
        .take(col.len().saturating_sub(1))
        .enumerate()
        .map(|(t, &top)| {
            let dir = if t == 0 {
                Direction::Right
            } else {
                Direction::Left
            };
            (ArcKey { column: i, top }, dir)
        })
        .collect()
}

/// Arcs of column `i` read from `start`, the first `k` left and the rest right.
pub(crate) fn split(p: &Pres, i: usize, start: usize, k: usize) -> Vec<(ArcKey, Direction)> {
    let col = p.column_from(i, start);
    col.iter()
        .take(col.len().saturating_sub(1))
        .enumerate()
        .map(|(t, &top)| {
            let dir = if t < k {
                Direction::Left
            } else {
                Direction::Right
            };
            (ArcKey { column: i, top }, dir)
        })
        .collect()
}
