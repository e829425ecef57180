//! Four-strand cases, split by which column carries the fewest crossings.

use crate::braid_core::{crossing_stats, BraidWord};
use crate::branched_surface::Direction;
use crate::error::{Error, Result};

use super::pres::{pair_tail, split, template, ArcKey, Pres};
use super::Build;

/// `σ_{i,k}` label of a letter in the current numbering.
pub(crate) fn letter(p: &Pres, id: usize) -> String {
    let i = p.gen(id);
    let k = p.column(i).iter().position(|&x| x == id).unwrap_or(0) + 1;
    format!("σ({i},{k})")
}

/// First letter after `x` that is not `σ_skip`.
fn first_other(p: &Pres, x: usize, skip: usize) -> Option<usize> {
    p.after(x).into_iter().find(|&id| p.gen(id) != skip)
}

/// `σ_i` letters whose first successor other than `σ_skip` is `σ_next`.
fn followed_by(p: &Pres, i: usize, skip: usize, next: usize) -> Vec<usize> {
    p.column(i)
        .into_iter()
        .filter(|&x| first_other(p, x, skip).is_some_and(|y| p.gen(y) == next))
        .collect()
}

/// `σ_i` letters whose gap to the next `σ_i` contains a `σ_j`.
fn gap_contains(p: &Pres, i: usize, j: usize) -> Vec<usize> {
    p.column(i)
        .into_iter()
        .filter(|&x| !p.between(x, p.next_in_column(x), j).is_empty())
        .collect()
}

fn pick(cands: Vec<usize>, choice: usize) -> Option<usize> {
    cands.get(choice).copied()
}

pub(crate) fn build(s: &BraidWord, choice: usize) -> Result<Option<Build>> {
    let stats = crossing_stats(s);
    let c = &stats.counts;
    let mut b = Build::new(s);
    let generic = c.iter().all(|&k| k >= 3);
    let found = if generic {
        match stats.c_min_choice {
            1 => c1(&mut b, choice, true),
            2 => c2(&mut b, choice),
            _ => c3(&mut b, choice, true),
        }
    } else if c[0] == 2 && c[2] == 2 {
        sparse_outer(&mut b, choice)
    } else if c[0] == 2 && c[1] >= 3 {
        c1(&mut b, choice, false)
    } else if c[2] == 2 && c[1] >= 3 {
        c3(&mut b, choice, false)
    } else if choice == 0 {
        Err(Error::CaseExhausted(format!(
            "sparse 4-braid with column counts {c:?} lies outside the case analysis"
        )))
    } else {
        Ok(false)
    };
    found.map(|found| found.then_some(b))
}

/// Smallest count on `Γ_3`: pair template `Γ_1 ∪ Γ_2` plus one `Γ_3` arc.
fn c3(b: &mut Build, choice: usize, generic: bool) -> Result<bool> {
    let stage = if generic { "C3" } else { "sparse c3=2" };
    let Some(x) = pick(gap_contains(&b.pres, 1, 2), choice) else {
        return Ok(false);
    };
    b.pres.rotate_to(x);
    let action = format!("pivot at {}", letter(&b.pres, x));
    let mut arcs = template(&b.pres, 1, x);
    arcs.extend(pair_tail(&b.pres, 2, x));
    b.assign(stage, "pair template", action, arcs);
    if !generic {
        return Ok(true);
    }
    let col2 = b
        .pres
        .column_from(2, b.pres.first_after(x, 2).expect("σ2 after x"));
    let delta = b.pres.gap_right(col2[0], col2[1]);
    match delta {
        0 => {
            let top = b.pres.last_before(x, 3).expect("σ3 present");
            b.assign(
                stage,
                "B",
                "d(2;1,2) = 0: last σ3 before the pivot",
                vec![(ArcKey { column: 3, top }, Direction::Right)],
            );
        }
        1 => {
            return Err(Error::CaseExhausted(
                "C3: d(2;1,2) = 1 for this pivot".into(),
            ))
        }
        _ => {
            let top = b.pres.first_after(x, 3).expect("σ3 present");
            b.assign(
                stage,
                "A",
                format!("d(2;1,2) = {delta}: first σ3 after the pivot"),
                vec![(ArcKey { column: 3, top }, Direction::Left)],
            );
        }
    }
    Ok(true)
}

/// Smallest count on `Γ_1`: template on `Γ_2`, pair tail on `Γ_3`, and `α_{1,1}`.
fn c1(b: &mut Build, choice: usize, generic: bool) -> Result<bool> {
    let stage = if generic { "C1" } else { "sparse c1=2" };
    let Some(x) = pick(followed_by(&b.pres, 2, 3, 1), choice) else {
        return Ok(false);
    };
    b.pres.rotate_to(x);
    let action = format!("pivot at {}", letter(&b.pres, x));
    let mut arcs = template(&b.pres, 2, x);
    arcs.extend(pair_tail(&b.pres, 3, x));
    b.assign(stage, "pair template", action, arcs);
    if !generic {
        return Ok(true);
    }
    let p = &b.pres;
    let z1 = p.first_after(x, 1).expect("σ1 after x");
    let z2 = p.next_in_column(z1);
    let span = p.offset(z1, z2);
    let d = p.between(z1, z2, 2).len();
    let enclosed: Vec<Direction> = b
        .plan
        .iter()
        .filter(|(k, _)| k.column == 2)
        .filter_map(|(k, &dir)| {
            let top = p.offset(z1, k.top);
            (top > 0 && top < span).then_some(dir)
        })
        .collect();
    let coherent = enclosed.len() >= 2 && enclosed.iter().all(|&d| d == Direction::Left);
    let dir = if d == 0 || coherent {
        Direction::Right
    } else {
        Direction::Left
    };
    let case = format!("d = {d}, {} enclosed Γ2 arcs", enclosed.len());
    b.assign(
        stage,
        &case,
        "α(1,1) from the first σ1 after the pivot",
        vec![(ArcKey { column: 1, top: z1 }, dir)],
    );
    Ok(true)
}

/// Smallest count on `Γ_2`: full disks on `Γ_1` and `Γ_3` plus `α_{2,1}`.
fn c2(b: &mut Build, choice: usize) -> Result<bool> {
    let Some(x) = pick(followed_by(&b.pres, 1, 3, 2), choice) else {
        return Ok(false);
    };
    b.pres.rotate_to(x);
    b.pres.slide_right(x, None);
    b.pres.rotate_to(x);
    let action = format!("pivot at {} next to σ2", letter(&b.pres, x));
    let mut arcs = split(&b.pres, 1, x, 1);
    arcs.extend(pair_tail(&b.pres, 3, x));
    b.assign("C2", "outer columns", action, arcs);
    let top = b.pres.first_after(x, 2).expect("σ2 after x");
    let delta = b.pres.gap_right(top, b.pres.next_in_column(top));
    let dir = match delta {
        0 => Direction::Right,
        1 => {
            return Err(Error::CaseExhausted(
                "C2: d(2;1,2) = 1 for this pivot".into(),
            ))
        }
        _ => Direction::Left,
    };
    b.assign(
        "C2",
        &format!("d(2;1,2) = {delta}"),
        "α(2,1) from the first σ2 after the pivot",
        vec![(ArcKey { column: 2, top }, dir)],
    );
    Ok(true)
}

/// `c_1 = c_3 = 2`: pair template `Γ_1 ∪ Γ_2` at a `σ_1` followed by `σ_2`.
fn sparse_outer(b: &mut Build, choice: usize) -> Result<bool> {
    let Some(x) = pick(followed_by(&b.pres, 1, 3, 2), choice) else {
        return Ok(false);
    };
    b.pres.rotate_to(x);
    b.pres.slide_right(x, None);
    b.pres.rotate_to(x);
    let action = format!("pivot at {} next to σ2", letter(&b.pres, x));
    let mut arcs = template(&b.pres, 1, x);
    arcs.extend(pair_tail(&b.pres, 2, x));
    b.assign("sparse c1=c3=2", "pair template", action, arcs);
    Ok(true)
}
