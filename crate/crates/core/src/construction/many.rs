//! Pipelines for `n ≥ 5`: a front construction on the first columns, then
//! calibrate-and-template steps two columns at a time, then an end step
//! chosen by the parity of the last templated column.

use crate::braid_core::BraidWord;
use crate::branched_surface::{check_sink_free, compute_sectors, Direction, RegionKind};
use crate::error::{Error, Result};

use super::four::letter;
use super::pres::{split, template, ArcKey};
use super::Build;

fn broken(msg: impl Into<String>) -> Error {
    Error::CaseExhausted(msg.into())
}

/// Pivots about `z` and then about the last `σ_{g(z)+1}` before it; returns
/// the new first letter.
fn calibrate(b: &mut Build, z: usize) -> Result<usize> {
    let s = b.pres.gen(z);
    b.pres.rotate_to(z);
    let w = b
        .pres
        .last_before(z, s + 1)
        .ok_or_else(|| broken(format!("no σ{} to calibrate against", s + 1)))?;
    b.pres.rotate_to(w);
    Ok(w)
}

/// Templates `Γ_{g(z)+1}` after canonically calibrating about `z`.
fn template_after(b: &mut Build, stage: &str, case: &str, z: usize) -> Result<(usize, usize)> {
    let label = letter(&b.pres, z);
    let w = calibrate(b, z)?;
    let i = b.pres.gen(w);
    let arcs = template(&b.pres, i, w);
    b.assign(
        stage,
        case,
        format!("calibrate about {label}, template Γ{i}"),
        arcs,
    );
    Ok((i, w))
}

/// One calibrate-and-template step from the templated column `i` started at `s`.
fn continue_from(b: &mut Build, i: usize, s: usize) -> Result<(usize, usize)> {
    b.pres.rotate_to(s);
    let z = b
        .pres
        .first_after(s, i + 1)
        .ok_or_else(|| broken(format!("no σ{} after the template start", i + 1)))?;
    template_after(b, "continue", &format!("Γ{}", i + 2), z)
}

/// Last column full: no disks on `Γ_{n-2}`, then `Γ_{n-1}` left pointers up to
/// the first letter followed by a `σ_{n-2}`, right pointers after.
fn end_full(b: &mut Build, i: usize, s: usize, stage: &str) -> Result<()> {
    let last = i + 2;
    b.pres.rotate_to(s);
    let first_mid = b
        .pres
        .first_after(s, i + 1)
        .ok_or_else(|| broken(format!("no σ{}", i + 1)))?;
    let early = b.pres.between(s, first_mid, last);
    for y in early {
        if !b.pres.move_to_front(y) {
            return Err(broken(format!("cannot commute σ{last} past the start")));
        }
        b.pres.rotate_to(s);
    }
    let col = b.pres.column(last);
    let c = col.len();
    let j = (1..c)
        .find(|&t| b.pres.gap_left(col[t - 1], col[t]) >= 1)
        .unwrap_or(c);
    let arcs = col[..c - 1]
        .iter()
        .enumerate()
        .map(|(t, &top)| {
            let d = if t + 1 < j {
                Direction::Left
            } else {
                Direction::Right
            };
            (ArcKey { column: last, top }, d)
        })
        .collect();
    b.assign(
        stage,
        &format!("j = {j}"),
        format!(
            "present from {}, no disks on Γ{}",
            letter(&b.pres, s),
            i + 1
        ),
        arcs,
    );
    Ok(())
}

/// Continues from the templated column `(i, s)` until two columns remain,
/// then finishes with the matching end step.
fn finish(b: &mut Build, mut i: usize, mut s: usize) -> Result<()> {
    let n = b.pres.strands();
    while i + 3 < n {
        (i, s) = continue_from(b, i, s)?;
    }
    if i + 3 == n {
        end_full(b, i, s, "end full")
    } else {
        b.note(
            "end sparse",
            &format!("Γ{}", n - 1),
            "no disks on the last column",
        );
        Ok(())
    }
}

/// Whether the Seifert sector of `S_3` (the face of `S_3` enclosed by no
/// chord) is a sink in the current partial assignment.
fn core_sector_is_sink(b: &Build) -> Result<bool> {
    let tidy = b.pres.tidy_rotation(&b.plan);
    let a = tidy.assignment(&b.plan)?;
    let dec = compute_sectors(&a);
    let region = dec
        .regions
        .iter()
        .position(|r| matches!(r, RegionKind::Face { disk: 3, inside, .. } if inside.is_empty()));
    let Some(region) = region else {
        return Ok(false);
    };
    let report = check_sink_free(&dec);
    Ok(report.offenders.contains(&dec.region_sector[region]))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum FrontCase {
    A,
    B1,
    B2,
    C,
}

pub(crate) fn build_odd(s: &BraidWord, choice: usize) -> Result<Option<Build>> {
    let mut b = Build::new(s);
    let cands: Vec<usize> = b
        .pres
        .column(1)
        .into_iter()
        .filter(|&x| b.pres.gap_right(x, b.pres.next_in_column(x)) >= 2)
        .collect();
    let Some(&x) = cands.get(choice) else {
        return Ok(None);
    };
    b.pres.rotate_to(x);
    b.pres.slide_right(x, None);
    b.pres.rotate_to(x);
    let y1 = b.pres.first_after(x, 2).expect("σ2 after x");
    let mut arcs = split(&b.pres, 1, x, 1);
    arcs.push((ArcKey { column: 2, top: y1 }, Direction::Right));
    b.assign(
        "front",
        "odd",
        format!("pivot at {} next to the first σ2", letter(&b.pres, x)),
        arcs,
    );
    let a21 = ArcKey { column: 2, top: y1 };
    let col3 = b
        .pres
        .column_from(3, b.pres.first_after(x, 3).ok_or_else(|| broken("no σ3"))?);
    let c3 = col3.len();
    // σ_{3,k} in the numbering read from x; k = 0 wraps to σ_{3,c_3}.
    let s3k = |k: usize| col3[(k + c3 - 1) % c3];
    let delta = b.pres.gap_right(y1, b.pres.next_in_column(y1));
    let (case, start3) = match delta {
        0 => {
            let t = col3[0];
            let arcs = template(&b.pres, 3, t);
            b.assign("front", "A", "d(2;1,2) = 0: template Γ3 at σ(3,1)", arcs);
            (FrontCase::A, t)
        }
        1 => return Err(broken("odd front: d(2;1,2) = 1 in a standardized word")),
        _ => {
            let t = s3k(delta);
            let arcs = template(&b.pres, 3, t);
            b.assign(
                "front",
                "Γ3",
                format!("d(2;1,2) = {delta}: template Γ3 at σ(3,{delta})"),
                arcs,
            );
            if core_sector_is_sink(&b)? {
                let homogeneous = b
                    .plan
                    .iter()
                    .filter(|(k, _)| k.column == 3)
                    .all(|(_, &d)| d == Direction::Left);
                let case = if homogeneous {
                    FrontCase::B1
                } else {
                    FrontCase::B2
                };
                b.assign(
                    "front",
                    if homogeneous { "B.1" } else { "B.2" },
                    "S3 core sector is a sink: flip α(2,1)",
                    vec![(a21, Direction::Left)],
                );
                (case, t)
            } else {
                b.note("front", "C", "S3 core sector is not a sink");
                (FrontCase::C, t)
            }
        }
    };
    let n = b.pres.strands();
    if n < 7 {
        finish(&mut b, 3, start3)?;
        return Ok(Some(b));
    }
    // x-numbering of the first right pointer on Γ3.
    let first_right = || {
        (1..=c3).find(|&k| {
            b.plan.get(&ArcKey {
                column: 3,
                top: s3k(k),
            }) == Some(&Direction::Right)
        })
    };
    let z = match case {
        FrontCase::A => {
            let (i, s) = continue_from(&mut b, 3, start3)?;
            finish(&mut b, i, s)?;
            return Ok(Some(b));
        }
        FrontCase::B1 => {
            let (lo, hi) = (s3k(delta - 2), s3k(delta - 1));
            b.pres.between(lo, hi, 4).last().copied()
        }
        FrontCase::B2 => {
            let p = first_right().ok_or_else(|| broken("B.2 without a right pointer"))?;
            let (lo, hi) = (s3k(p - 1), s3k(p));
            b.pres.between(lo, hi, 4).last().copied()
        }
        FrontCase::C => {
            let j = first_right().ok_or_else(|| broken("C without a right pointer"))?;
            b.pres.last_before(s3k(j), 4)
        }
    };
    let z = z.ok_or_else(|| broken(format!("special step {case:?}: no σ4 in range")))?;
    let (i, s) = template_after(&mut b, "special", &format!("{case:?}"), z)?;
    finish(&mut b, i, s)?;
    Ok(Some(b))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum EvenCase {
    A,
    B,
}

/// Case 1 (`c_1 ≥ 3`) presentation: returns the pivot and the sub-case.
fn even_front_wide(b: &mut Build, choice: usize) -> Option<(usize, EvenCase, &'static str)> {
    let p = &b.pres;
    let cands: Vec<usize> = p
        .column(1)
        .into_iter()
        .filter(|&x| p.gap_right(x, p.next_in_column(x)) >= 2)
        .collect();
    let x0 = *cands.get(choice)?;
    let col1 = p.column_from(1, x0);
    for &a in &col1 {
        let e = p.next_in_column(a);
        let twos = p.between(a, e, 2);
        if twos.len() >= 2 && p.between(twos[0], *twos.last().unwrap(), 3).len() >= 2 {
            b.pres.rotate_to(a);
            return Some((a, EvenCase::A, "1A"));
        }
    }
    b.pres.rotate_to(x0);
    let p = &b.pres;
    let col2 = p.column_from(2, p.first_after(x0, 2)?);
    for w in 0..col2.len() {
        let (y, y2) = (col2[w], col2[(w + 1) % col2.len()]);
        let ones = p.between(y, y2, 1);
        if !ones.is_empty() && !p.between(y, y2, 3).is_empty() {
            let x = *ones.last().unwrap();
            b.pres.rotate_to(x);
            return Some((x, EvenCase::B, "1B"));
        }
    }
    None
}

/// Case 2 (`c_1 = 2`) presentation.
fn even_front_narrow(b: &mut Build, choice: usize) -> Option<(usize, EvenCase, &'static str)> {
    let p = &b.pres;
    let cands: Vec<usize> = p
        .column(1)
        .into_iter()
        .filter(|&x| !p.between(x, p.next_in_column(x), 3).is_empty())
        .collect();
    let x = *cands.get(choice)?;
    b.pres.rotate_to(x);
    let p = &b.pres;
    let twos = p.between(x, p.next_in_column(x), 2);
    let inner = match twos.len() {
        0 => 0,
        k => p.between(twos[0], twos[k - 1], 3).len(),
    };
    if inner >= 1 {
        return Some((x, EvenCase::A, "2A"));
    }
    // The pivot is the σ1 that the gap's σ3 run follows: x when the run
    // precedes the gap's σ2 letters, otherwise the next σ1, with the run
    // hopped across it where commutation allows. All but the last σ3 of
    // the run then hop behind the pivot.
    let x2 = p.next_in_column(x);
    let first2 = twos.first().copied().unwrap_or(x2);
    let mut run = p.between(x, first2, 3);
    let mut x = x;
    let mut label = "2B.1";
    if run.is_empty() {
        let last2 = twos.last().copied().unwrap_or(x);
        run = b.pres.between(last2, x2, 3);
        for &t in run.iter().rev() {
            b.pres.hop_right(t, x2);
        }
        x = x2;
        b.pres.rotate_to(x);
        label = "2B.2";
    }
    for &t in &run[..run.len().saturating_sub(1)] {
        b.pres.hop_left(t, x);
    }
    b.pres.rotate_to(x);
    Some((x, EvenCase::B, label))
}

pub(crate) fn build_even(s: &BraidWord, choice: usize) -> Result<Option<Build>> {
    let mut b = Build::new(s);
    let wide = b.pres.column(1).len() >= 3;
    let found = if wide {
        even_front_wide(&mut b, choice)
    } else {
        even_front_narrow(&mut b, choice)
    };
    let Some((x, case, label)) = found else {
        return Ok(None);
    };
    let p = &b.pres;
    let y1 = p.first_after(x, 2).ok_or_else(|| broken("no σ2"))?;
    let col2 = p.column_from(2, y1);
    let c2 = col2.len();
    let mut arcs = vec![(ArcKey { column: 1, top: x }, Direction::Left)];
    let z = match case {
        EvenCase::A => {
            let delta = p.between(x, p.next_in_column(x), 2).len();
            let j = (1..delta)
                .find(|&t| p.gap_right(col2[t - 1], col2[t]) >= 2)
                .ok_or_else(|| broken(format!("{label}: no σ3 pair inside the first gap")))?;
            for (t, &top) in col2[..c2 - 1].iter().enumerate() {
                let d = if t < j {
                    Direction::Left
                } else {
                    Direction::Right
                };
                arcs.push((ArcKey { column: 2, top }, d));
            }
            p.first_after(col2[j - 1], 3)
        }
        EvenCase::B => {
            for &top in &col2[..c2 - 1] {
                arcs.push((ArcKey { column: 2, top }, Direction::Right));
            }
            p.first_after(x, 3)
        }
    };
    let z = z.ok_or_else(|| broken("no σ3"))?;
    b.assign(
        "front",
        label,
        format!("pivot at {}", letter(&b.pres, x)),
        arcs,
    );
    let n = b.pres.strands();
    if n >= 6 {
        let (i, s) = template_after(&mut b, "front", "Γ4", z)?;
        finish(&mut b, i, s)?;
        return Ok(Some(b));
    }
    match case {
        EvenCase::A => end_full(&mut b, 2, y1, "end full")?,
        EvenCase::B => {
            let w = calibrate(&mut b, y1)?;
            let v = calibrate(&mut b, w)?;
            let col = b.pres.column_from(4, v);
            let c = col.len();
            let j = (2..c)
                .find(|&t| b.pres.gap_left(col[t - 1], col[t]) >= 1)
                .unwrap_or(c);
            let arcs = col[..c - 1]
                .iter()
                .enumerate()
                .map(|(t, &top)| {
                    let d = if t + 1 < j {
                        Direction::Left
                    } else {
                        Direction::Right
                    };
                    (ArcKey { column: 4, top }, d)
                })
                .collect();
            b.assign(
                "end full",
                &format!("homogeneous Γ2, j = {j}"),
                "calibrate about α(2,1), then about the first σ3",
                arcs,
            );
        }
    }
    Ok(Some(b))
}
