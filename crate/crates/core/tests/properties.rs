//! Property tests for the invariants of each module.

mod common;

use braidfol::braid_core::{
    block_count, canonical_calibrate, closure_components, crossing_stats, distance, genus,
    is_standard, pivot, primality_precheck, standardize, BraidWord, LetterRef, Side,
};
use braidfol::branched_surface::{check_sink_free, compute_sectors, ArcAssignment};
use braidfol::construction::{construct, Pipeline};
use braidfol::oracle::{
    brute_force_links, brute_force_matching, exhaustive_search, flood_sectors, same_partition,
    sink_sectors, verify_certificate,
};
use braidfol::surface_model::{arc_enclosures, build_diagram, hopf_sequence, render, RenderFormat};
use braidfol::train_track::{boundary_track, linked_pairs, tau_sup, Certificate};
use common::{assignment_of, draw_prime, genus_of, random_assignment};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn any_word(max_n: usize, max_len: usize) -> impl Strategy<Value = BraidWord> {
    (2..=max_n).prop_flat_map(move |n| {
        prop::collection::vec(1..n, 1..=max_len).prop_map(move |l| BraidWord::new(n, l).unwrap())
    })
}

fn knot_word(max_n: usize, max_len: usize) -> impl Strategy<Value = BraidWord> {
    any_word(max_n, max_len).prop_filter("knot closure", |b| closure_components(b) == 1)
}

/// A standardized prime knot of genus ≥ 2 on `n` strands, from a seed.
fn prime_word(
    n: std::ops::RangeInclusive<usize>,
    len: std::ops::RangeInclusive<usize>,
) -> impl Strategy<Value = BraidWord> {
    (any::<u64>(), n).prop_filter_map("no prime draw", move |(seed, n)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..2000).find_map(|_| draw_prime(&mut rng, n, len.clone()))
    })
}

fn certificate_of(b: &BraidWord) -> Certificate {
    construct(b).unwrap_or_else(|e| panic!("{b}: {e}"))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn standardize_preserves_and_terminates(b in any_word(8, 40)) {
        let s = standardize(&b);
        prop_assert!(is_standard(&s));
        prop_assert_eq!(s.strands(), b.strands());
        prop_assert_eq!(s.len(), b.len());
        prop_assert_eq!(closure_components(&s), closure_components(&b));
        prop_assert_eq!(standardize(&s), s.clone());
    }

    #[test]
    fn standardize_preserves_genus(b in knot_word(7, 30)) {
        prop_assert_eq!(genus(&standardize(&b)).unwrap(), genus(&b).unwrap());
    }

    #[test]
    fn stats_sums_agree(b in any_word(9, 40)) {
        let st = crossing_stats(&b);
        prop_assert_eq!(st.counts.iter().sum::<usize>(), st.total);
        prop_assert_eq!(st.mod3_sums.iter().sum::<usize>(), st.total);
        prop_assert_eq!(st.odd_sum + st.even_sum, st.total);
    }

    #[test]
    fn distances_complement(b in any_word(6, 30), j in 1usize..6, s in 1usize..8, t in 1usize..8) {
        prop_assume!(j < b.strands() && s != t && s <= b.count(j) && t <= b.count(j));
        if j + 1 < b.strands() {
            let total = distance(&b, j, s, t, Side::Right).unwrap() + distance(&b, j, t, s, Side::Right).unwrap();
            prop_assert_eq!(total, b.count(j + 1));
        }
        if j >= 2 {
            let total = distance(&b, j, s, t, Side::Left).unwrap() + distance(&b, j, t, s, Side::Left).unwrap();
            prop_assert_eq!(total, b.count(j - 1));
        }
    }

    #[test]
    fn pivot_keeps_counts(b in any_word(6, 30), i in 1usize..6, k in 1usize..6) {
        prop_assume!(i < b.strands() && k <= b.count(i));
        let p = pivot(&b, LetterRef::new(i, k)).unwrap();
        prop_assert_eq!(p.letters()[0], i);
        prop_assert_eq!(crossing_stats(&p).counts, crossing_stats(&b).counts);
        prop_assert_eq!(closure_components(&p), closure_components(&b));
    }

    #[test]
    fn block_count_is_rotation_invariant(b in any_word(5, 24), r in 0usize..24, i in 1usize..5) {
        let s = standardize(&b);
        prop_assume!(i < s.strands() && s.count(i) >= 1);
        let rotated = s.rotated(r % s.len());
        prop_assert_eq!(block_count(&rotated, i).unwrap(), block_count(&s, i).unwrap());
    }

    #[test]
    fn calibration_encloses_the_band(b in any_word(6, 30), s in 1usize..5, t in 1usize..6) {
        prop_assume!(s + 1 < b.strands() && t <= b.count(s) && b.count(s + 1) >= 2);
        let out = canonical_calibrate(&b, LetterRef::new(s, t)).unwrap();
        prop_assert_eq!(crossing_stats(&out).counts, crossing_stats(&b).counts);
        // The band ends up between the first two σ_{s+1} letters for some
        // rotation taking the input to the output.
        let band = b.position_of(LetterRef::new(s, t)).unwrap();
        let len = b.len();
        let next = out.positions(s + 1);
        let ok = (0..len).any(|r| {
            b.rotated(r) == out && {
                let p = (band + len - r) % len;
                next[0] < p && p < next[1]
            }
        });
        prop_assert!(ok, "{} -> {}", b, out);
    }

    #[test]
    fn diagram_counts_match_genus(b in knot_word(7, 30)) {
        let d = build_diagram(&b);
        let arcs: usize = (1..b.strands()).map(|i| d.count(i).saturating_sub(1)).sum();
        let bands: usize = (1..b.strands()).map(|i| d.count(i)).sum();
        prop_assert_eq!(bands, b.len());
        prop_assert_eq!(arcs, 2 * genus(&b).unwrap());
        prop_assert_eq!(hopf_sequence(&b).unwrap().plumbing_count(), 2 * genus_of(&b));
    }

    #[test]
    fn twist_curves_run_bottom_to_top(b in knot_word(7, 30)) {
        let h = hopf_sequence(&b).unwrap();
        prop_assert_eq!(h.twist_curves.len(), 2 * genus_of(&b));
        prop_assert!(h.twist_curves.windows(2).all(|w| w[0].0 >= w[1].0));
    }

    #[test]
    fn enclosures_match_distances(b in any_word(6, 30), i in 1usize..6, j in 1usize..8) {
        prop_assume!(i < b.strands() && j < b.count(i));
        let d = build_diagram(&b);
        let (p, im) = arc_enclosures(&d, i, j).unwrap();
        let left = if i >= 2 { distance(&b, i, j, j + 1, Side::Left).unwrap() } else { 0 };
        let right = if i + 1 < b.strands() { distance(&b, i, j, j + 1, Side::Right).unwrap() } else { 0 };
        prop_assert_eq!(p.right_enclosure.len(), left);
        prop_assert_eq!(im.left_enclosure.len(), right);
    }

    #[test]
    fn render_is_pure(b in any_word(6, 20), seed in any::<u64>()) {
        let a = random_assignment(&mut ChaCha8Rng::seed_from_u64(seed), &b);
        for f in [RenderFormat::Svg, RenderFormat::Ascii] {
            prop_assert_eq!(render(a.diagram(), Some(&a), f).unwrap(), render(a.diagram(), Some(&a), f).unwrap());
        }
        let svg = render(a.diagram(), Some(&a), RenderFormat::Svg).unwrap();
        prop_assert_eq!(svg.matches(r#"class="arrow""#).count(), a.len());
    }

    #[test]
    fn routes_agree_on_random_assignments(b in knot_word(6, 22), seed in any::<u64>()) {
        let a = random_assignment(&mut ChaCha8Rng::seed_from_u64(seed), &b);
        let fast = compute_sectors(&a);
        let slow = flood_sectors(&a);
        prop_assert!(same_partition(&fast, &slow));
        prop_assert_eq!(check_sink_free(&fast).offenders.len(), sink_sectors(&slow).len());
        let ledger = linked_pairs(&boundary_track(&a));
        let mut brute = brute_force_links(&a);
        brute.sort();
        prop_assert_eq!(&ledger.pairs, &brute);
        prop_assert_eq!(ledger.deduction, brute_force_matching(&brute));
    }

    #[test]
    fn track_has_one_maximal_sector_per_arc(b in knot_word(6, 22), seed in any::<u64>()) {
        let a = random_assignment(&mut ChaCha8Rng::seed_from_u64(seed), &b);
        let t = boundary_track(&a);
        prop_assert_eq!(t.lambda_order.len(), 4 * a.len());
        prop_assert_eq!(t.sectors.len(), 2 * a.len());
        for (arc, _) in a.iter() {
            prop_assert_eq!(t.maximal().filter(|s| s.arc == arc).count(), 1);
        }
    }

    #[test]
    fn linking_is_local(b in knot_word(7, 24), seed in any::<u64>()) {
        let a = random_assignment(&mut ChaCha8Rng::seed_from_u64(seed), &b);
        for (x, y) in linked_pairs(&boundary_track(&a)).pairs {
            prop_assert!(x.column.abs_diff(y.column) <= 1, "{} {}", x, y);
        }
    }

    #[test]
    fn tau_is_arcs_minus_deduction(b in knot_word(6, 22), seed in any::<u64>()) {
        let a = random_assignment(&mut ChaCha8Rng::seed_from_u64(seed), &b);
        let c = tau_sup(&a).unwrap();
        prop_assert_eq!(c.tau_sup, a.len() - c.deduction);
        prop_assert_eq!(c.slope_claim.valid, c.sink_free);
        prop_assert!(verify_certificate(&c));
    }

    #[test]
    fn tau_survives_rotation(b in knot_word(5, 20), seed in any::<u64>(), r in 0usize..20) {
        let a = random_assignment(&mut ChaCha8Rng::seed_from_u64(seed), &b);
        let r = r % b.len();
        let rotated = b.rotated(r);
        // Same bands, renumbered: the arc below band b_{i,k} keeps its band.
        let d = build_diagram(&rotated);
        let mut moved = ArcAssignment::new(d.clone());
        for (arc, dir) in a.iter() {
            let top = a.diagram().column(arc.column)[arc.ordinal - 1];
            let new_top = (top + b.len() - r) % b.len();
            let k = d.column(arc.column).iter().position(|&p| p == new_top).unwrap();
            moved.insert(braidfol::branched_surface::ArcId::new(arc.column, k + 1), dir).unwrap();
        }
        let x = tau_sup(&a).unwrap();
        let y = tau_sup(&moved).unwrap();
        prop_assert_eq!(x.tau_sup, y.tau_sup);
        prop_assert_eq!(x.sink_free, y.sink_free);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn construct_meets_its_bounds(b in prime_word(4..=8, 9..=34)) {
        let c = certificate_of(&b);
        let g = genus_of(&b);
        prop_assert!(c.sink_free);
        prop_assert!(verify_certificate(&c));
        match c.case_trace.as_ref().unwrap().pipeline {
            Pipeline::FourGeneric => {
                prop_assert!(3 * c.tau_sup >= 4 * g);
                prop_assert_eq!(c.deduction, 1);
            }
            Pipeline::FourSparse => prop_assert_eq!(c.tau_sup + 2, 2 * g),
            Pipeline::Odd | Pipeline::Even => {
                prop_assert!(c.tau_sup > g);
                prop_assert!(c.linked_pairs.is_empty());
            }
        }
        let back = Certificate::from_json(&c.to_json()).unwrap();
        prop_assert_eq!(back, c);
    }

    #[test]
    fn tampered_certificates_are_rejected(b in prime_word(4..=6, 9..=24), k in any::<usize>()) {
        let c = certificate_of(&b);
        let mut bad = c.clone();
        bad.tau_sup += 1;
        prop_assert!(!verify_certificate(&bad));
        let mut bad = c.clone();
        bad.genus += 1;
        prop_assert!(!verify_certificate(&bad));
        let mut bad = c.clone();
        let i = k % bad.directions.len();
        bad.directions[i] = bad.directions[i].flipped();
        // A flip may leave every checked field unchanged only if the
        // flipped assignment re-derives the same certificate.
        let same = tau_sup(&assignment_of(&bad)).map(|t| {
            t.sink_free == c.sink_free && t.linked_pairs == c.linked_pairs
                && t.sink_offenders == c.sink_offenders && t.endpoint_order == c.endpoint_order
        });
        prop_assert_eq!(verify_certificate(&bad), same.unwrap_or(false));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn search_is_at_least_the_construction(b in prime_word(4..=4, 9..=11)) {
        let c = certificate_of(&b);
        let here = braidfol::braid_core::parse_braid_with_strands(&c.braid, Some(4)).unwrap();
        let r = exhaustive_search(&here, 24).unwrap();
        prop_assert!(r.best_tau >= c.tau_sup, "{}: {} < {}", b, r.best_tau, c.tau_sup);
        let (ok, tau) = braidfol::oracle::evaluate(&r.best_assignment);
        prop_assert!(ok);
        prop_assert_eq!(tau, r.best_tau);
    }

    #[test]
    fn prime_draws_pass_the_precheck(b in prime_word(5..=8, 12..=30)) {
        prop_assert!(is_standard(&b));
        prop_assert!(primality_precheck(&b).unwrap().passes());
    }
}
