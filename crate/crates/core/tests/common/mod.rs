//! Corpus generators shared by the integration tests.
#![allow(dead_code)]

use braidfol::braid_core::{
    closure_components, is_standard, parse_braid_with_strands, primality_precheck, standardize,
    BraidWord,
};
use braidfol::branched_surface::{manual_assign, ArcAssignment};
use braidfol::surface_model::build_diagram;
use braidfol::train_track::Certificate;
use rand::Rng;

/// `(C - n + 1) / 2`, computed without the library.
pub fn genus_of(b: &BraidWord) -> usize {
    (b.len() + 1 - b.strands()) / 2
}

/// A random standardized word on `n` strands closing to a prime-looking knot
/// of genus ≥ 2, with length in `len`; `None` when the draw is rejected.
pub fn draw_prime(
    rng: &mut impl Rng,
    n: usize,
    len: std::ops::RangeInclusive<usize>,
) -> Option<BraidWord> {
    let size = rng.gen_range(len);
    let letters: Vec<usize> = (0..size).map(|_| rng.gen_range(1..n)).collect();
    let b = BraidWord::new(n, letters).ok()?;
    if closure_components(&b) != 1 {
        return None;
    }
    let s = standardize(&b);
    let prime = primality_precheck(&s).ok()?.passes();
    (prime && genus_of(&s) >= 2).then_some(s)
}

/// Every standard 4-strand word of length ≤ `max_len` closing to a knot that
/// passes the primality precheck with genus ≥ 2, one per cyclic rotation class.
pub fn all_n4(max_len: usize) -> Vec<BraidWord> {
    let mut out = Vec::new();
    for len in 1..=max_len {
        let mut letters = vec![1usize; len];
        loop {
            let canonical = (1..len).all(|r| {
                let rotated = letters[r..].iter().chain(&letters[..r]);
                rotated.cmp(letters.iter()) != std::cmp::Ordering::Less
            });
            if canonical {
                let b = BraidWord::new(4, letters.clone()).expect("valid word");
                if closure_components(&b) == 1
                    && genus_of(&b) >= 2
                    && is_standard(&b)
                    && primality_precheck(&b).is_ok_and(|r| r.passes())
                {
                    out.push(b);
                }
            }
            // Odometer over {1, 2, 3}^len.
            let mut k = len;
            loop {
                if k == 0 {
                    break;
                }
                k -= 1;
                if letters[k] < 3 {
                    letters[k] += 1;
                    break;
                }
                letters[k] = 1;
            }
            if letters.iter().all(|&l| l == 1) {
                break;
            }
        }
    }
    out
}

/// The assignment a certificate describes, on its own presentation.
pub fn assignment_of(c: &Certificate) -> ArcAssignment {
    let b = parse_braid_with_strands(&c.braid, Some(c.n)).expect("certificate word");
    let choices: Vec<_> = c
        .chosen_arcs
        .iter()
        .zip(&c.directions)
        .map(|(a, d)| (a.column, a.ordinal, *d))
        .collect();
    manual_assign(&build_diagram(&b), &choices).expect("certificate arcs")
}

/// Each arc slot chosen with probability 1/2, direction uniform.
pub fn random_assignment(rng: &mut impl Rng, b: &BraidWord) -> ArcAssignment {
    let d = build_diagram(b);
    let mut choices = Vec::new();
    for i in 1..b.strands() {
        for j in 1..=d.arc_slots(i) {
            if rng.gen_bool(0.5) {
                let dir = if rng.gen_bool(0.5) {
                    braidfol::branched_surface::Direction::Left
                } else {
                    braidfol::branched_surface::Direction::Right
                };
                choices.push((i, j, dir));
            }
        }
    }
    manual_assign(&d, &choices).expect("fresh slots")
}
