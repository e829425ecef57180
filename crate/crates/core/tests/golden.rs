//! Fixed examples with known answers.

mod common;

use std::collections::{HashSet, VecDeque};

use braidfol::braid_core::{
    block_count, canonical_calibrate, closure_components, crossing_stats, distance, genus,
    is_standard, parse_braid, pivot, primality_precheck, standardize, BraidWord, LetterRef, Parity,
    Side, Violation,
};
use braidfol::branched_surface::{
    apply_template, check_sink_free, compute_sectors, manual_assign, ArcAssignment, ArcId,
    Direction, SectorClass, Template,
};
use braidfol::construction::{
    cable_obstruction, construct, km_family, splice_feasible, Conclusion, Pipeline,
};
use braidfol::oracle::{
    exhaustive_search, flood_sectors, same_partition, search_extensions, sink_sectors,
    verify_certificate,
};
use braidfol::surface_model::{arc_enclosures, build_diagram, hopf_sequence, render, RenderFormat};
use braidfol::train_track::{boundary_track, linked_pairs, tau_sup};
use braidfol::Error;
use common::assignment_of;

const SMALL: &str = "1 2^2 1^2 2";
const WORKED: &str = "2 1 3 2 3^2 2 1 3 2 3^3 2 3 1 2 3^2 2 3 3 3 2 3 3 2";
const FAMILY_ONE: &str = "2 1 3 2 3 3 2 1 3 2 3 3 3 2 3 1 2 3 3 2 3 3 3 2 3 3 2";

fn word(s: &str) -> BraidWord {
    parse_braid(s).unwrap()
}

fn worked_assignment() -> ArcAssignment {
    assignment_of(&construct(&word(WORKED)).unwrap())
}

/// Whether two cyclic words agree up to rotation and far commutation.
fn cyclically_equivalent(a: &BraidWord, b: &BraidWord) -> bool {
    let target: Vec<usize> = b.letters().to_vec();
    let start = a.letters().to_vec();
    let mut seen = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    while let Some(w) = queue.pop_front() {
        if w == target {
            return true;
        }
        let n = w.len();
        let mut next = Vec::new();
        let mut r = w.clone();
        r.rotate_left(1);
        next.push(r);
        for p in 0..n - 1 {
            if w[p].abs_diff(w[p + 1]) >= 2 {
                let mut s = w.clone();
                s.swap(p, p + 1);
                next.push(s);
            }
        }
        for v in next {
            if seen.insert(v.clone()) {
                queue.push_back(v);
            }
        }
    }
    false
}

#[test]
fn parsing_examples() {
    let b = word(SMALL);
    assert_eq!(b.letters(), &[1, 2, 2, 1, 1, 2]);
    assert_eq!(b.strands(), 3);
    let one = word("1");
    assert_eq!((one.letters(), one.strands()), (&[1][..], 2));
    assert!(matches!(parse_braid("0 1"), Err(Error::Parse(_))));
    assert!(matches!(
        parse_braid("  # only a comment"),
        Err(Error::Parse(_))
    ));
}

#[test]
fn closure_component_examples() {
    assert_eq!(closure_components(&word(SMALL)), 1);
    assert_eq!(closure_components(&word("1")), 1);
    assert_eq!(closure_components(&word("1 1")), 2);
}

#[test]
fn crossing_stats_examples() {
    let st = crossing_stats(&word(WORKED));
    assert_eq!(st.counts, vec![3, 9, 15]);
    assert_eq!(st.total, 27);
    assert_eq!(st.mod3_sums, [3, 9, 15]);
    assert_eq!(st.c_min_choice, 1);
    assert_eq!(crossing_stats(&word("1 1 1")).counts, vec![3]);
    let k1 = crossing_stats(&standardize(&km_family(1).unwrap()));
    assert_eq!((k1.odd_sum, k1.even_sum), (18, 9));
    assert_eq!(k1.c_max_choice, Parity::Odd);
}

#[test]
fn distance_examples() {
    let b = word(SMALL);
    assert_eq!(distance(&b, 2, 1, 2, Side::Left).unwrap(), 0);
    assert_eq!(distance(&b, 2, 2, 3, Side::Left).unwrap(), 2);
    // σ_{1,2} and σ_{1,3} are adjacent.
    assert_eq!(distance(&b, 1, 2, 3, Side::Right).unwrap(), 0);
    assert!(matches!(
        distance(&b, 2, 1, 4, Side::Left),
        Err(Error::Index(_))
    ));
}

#[test]
fn pivot_examples() {
    let b = BraidWord::new(3, vec![2, 1, 2]).unwrap();
    assert_eq!(
        pivot(&b, LetterRef::new(1, 1)).unwrap().letters(),
        &[1, 2, 2]
    );
    assert_eq!(pivot(&b, LetterRef::new(2, 1)).unwrap(), b);
    let w = word(WORKED);
    let p = pivot(&w, LetterRef::new(3, 1)).unwrap();
    assert_eq!(p.letters()[0], 3);
    assert_eq!(crossing_stats(&p).counts, crossing_stats(&w).counts);
}

#[test]
fn standardize_examples() {
    let b = BraidWord::new(3, vec![1, 2, 1]).unwrap();
    assert_eq!(standardize(&b).letters(), &[2, 1, 2]);
    let w = word(WORKED);
    assert!(is_standard(&w));
    assert_eq!(standardize(&w), w);
    let s = standardize(&km_family(1).unwrap());
    assert!(cyclically_equivalent(&s, &word(FAMILY_ONE)));
}

#[test]
fn family_counts_for_larger_m() {
    for m in 2..=4 {
        let s = standardize(&km_family(m).unwrap());
        assert!(is_standard(&s));
        assert_eq!(crossing_stats(&s).counts, vec![3, 7 + 2 * m, 11 + 4 * m]);
    }
}

#[test]
fn block_count_examples() {
    assert_eq!(block_count(&word(WORKED), 1).unwrap(), 3);
    assert_eq!(block_count(&word("1 1 1 1"), 1).unwrap(), 1);
    assert_eq!(
        block_count(&word("1 1 3"), 2),
        Err(Error::NoSuchGenerator(2))
    );
}

#[test]
fn primality_examples() {
    assert!(primality_precheck(&word(WORKED)).unwrap().passes());
    // σ_4 letters form one block once σ_1 commutes past them.
    let sum = word("4^2 1^2 4 2^2 1 2 3^3 2 3");
    assert_eq!(
        primality_precheck(&sum).unwrap().violations,
        vec![Violation::SingleBlock { generator: 4 }]
    );
    let thin = word("1^2 2 1 2^2 3 2^2");
    assert_eq!(closure_components(&thin), 1);
    assert!(primality_precheck(&thin)
        .unwrap()
        .violations
        .contains(&Violation::FewLetters {
            generator: 3,
            count: 1
        }));
    assert!(matches!(
        primality_precheck(&word("1 1")),
        Err(Error::NotAKnot(2))
    ));
}

#[test]
fn genus_examples() {
    assert_eq!(genus(&word(WORKED)).unwrap(), 12);
    assert_eq!(genus(&word("1 1 1")).unwrap(), 1);
    for m in 1..=5 {
        assert_eq!(2 * genus(&km_family(m).unwrap()).unwrap() - 1, 17 + 6 * m);
    }
}

#[test]
fn calibration_encloses_the_band() {
    let w = word(WORKED);
    for t in 1..=9 {
        let out = canonical_calibrate(&w, LetterRef::new(2, t)).unwrap();
        assert_eq!(out.letters()[0], 3);
        assert_eq!(crossing_stats(&out).counts, vec![3, 9, 15]);
    }
    assert!(matches!(
        canonical_calibrate(&word("1 2 1 2 3 2"), LetterRef::new(2, 1)),
        Err(Error::CannotCalibrate { .. })
    ));
}

#[test]
fn diagram_examples() {
    let d = build_diagram(&word(SMALL));
    assert_eq!((d.count(1), d.count(2)), (3, 3));
    let d = build_diagram(&word("1"));
    assert_eq!((d.column_count(), d.count(1)), (1, 1));
    let d = build_diagram(&word(WORKED));
    assert_eq!((d.count(1), d.count(2), d.count(3)), (3, 9, 15));
}

#[test]
fn enclosure_examples() {
    let d = build_diagram(&word(SMALL));
    let (p, i) = arc_enclosures(&d, 2, 1).unwrap();
    assert!(i.left_enclosure.is_empty());
    assert!(p.right_enclosure.is_empty());
    let w = word(WORKED);
    let d = build_diagram(&w);
    for j in 1..15 {
        let (p, _) = arc_enclosures(&d, 3, j).unwrap();
        assert_eq!(
            p.right_enclosure.len(),
            distance(&w, 3, j, j + 1, Side::Left).unwrap()
        );
    }
    assert!(matches!(arc_enclosures(&d, 3, 16), Err(Error::Index(_))));
}

#[test]
fn hopf_examples() {
    assert_eq!(hopf_sequence(&word(SMALL)).unwrap().plumbing_count(), 4);
    assert_eq!(hopf_sequence(&word("1 1 1")).unwrap().plumbing_count(), 2);
    let h = hopf_sequence(&word(WORKED)).unwrap();
    assert_eq!(h.plumbing_count(), 24);
    assert_eq!(h.twist_curves.len(), 24);
    assert!(h.twist_curves.windows(2).all(|w| w[0].0 >= w[1].0));
}

#[test]
fn render_examples() {
    let d = build_diagram(&word(SMALL));
    let ascii = render(&d, None, RenderFormat::Ascii).unwrap();
    assert_eq!(ascii.lines().next().unwrap().matches('|').count(), 3);
    let a = worked_assignment();
    let svg = render(a.diagram(), Some(&a), RenderFormat::Svg).unwrap();
    assert_eq!(svg.matches(r#"class="arrow""#).count(), 23);
    assert_eq!(
        svg,
        render(a.diagram(), Some(&a), RenderFormat::Svg).unwrap()
    );
}

#[test]
fn template_examples() {
    let w = word(WORKED);
    let (p, a) = apply_template(&w, Template::Pair(2), 1).unwrap();
    assert_eq!(p.letters()[0], 2);
    let mut a = a;
    a.insert(ArcId::new(1, 1), Direction::Left).unwrap();
    // Same arcs as the worked construction, which starts at σ_{2,1}.
    assert_eq!(a, worked_assignment());
    // A pair whose second column has two letters gets a single right pointer there.
    let s = standardize(&word("1^2 3 2^3 3 1 2^3"));
    let i = 2;
    let (_, a) = apply_template(&s, Template::Pair(i), 1).unwrap();
    let rights: Vec<ArcId> = a
        .iter()
        .filter(|(arc, d)| arc.column == i + 1 && *d == Direction::Right)
        .map(|(arc, _)| arc)
        .collect();
    assert_eq!(rights.len(), 1);
    assert!(matches!(
        apply_template(&word("1 2 1"), Template::Single(1), 1),
        Err(Error::RequiresStandardForm)
    ));
}

#[test]
fn manual_assignment_examples() {
    let d = build_diagram(&word(SMALL));
    assert!(manual_assign(&d, &[]).unwrap().is_empty());
    let left = manual_assign(&d, &[(1, 1, Direction::Left), (1, 2, Direction::Left)]).unwrap();
    assert_eq!(left.len(), 2);
    assert_eq!(
        manual_assign(&d, &[(1, 1, Direction::Left), (1, 1, Direction::Right)]),
        Err(Error::DuplicateChoice(1, 1))
    );
    let mut flipped = left.clone();
    flipped.set(ArcId::new(1, 1), Direction::Right).unwrap();
    assert_ne!(flipped, left);
}

#[test]
fn sector_examples() {
    let a = worked_assignment();
    let s = compute_sectors(&a);
    let polygons_in_s2 = s
        .sectors
        .iter()
        .filter(|x| x.class == SectorClass::Polygon(2))
        .count();
    assert_eq!(polygons_in_s2, 1);
    assert!(check_sink_free(&s).sink_free);
    assert!(same_partition(&s, &flood_sectors(&a)));
    let empty = ArcAssignment::for_word(&word(WORKED));
    let s = compute_sectors(&empty);
    assert_eq!(s.sectors.len(), 1);
    assert!(check_sink_free(&s).sink_free);
    assert_eq!(flood_sectors(&empty).sectors.len(), 1);
}

#[test]
fn left_then_right_traps_a_band() {
    // α_{1,2} left above α_{1,3} right closes off the band between them.
    let d = build_diagram(&word("1^5"));
    let a = manual_assign(&d, &[(1, 2, Direction::Left), (1, 3, Direction::Right)]).unwrap();
    let r = check_sink_free(&compute_sectors(&a));
    assert!(!r.sink_free);
    assert_eq!(r.offenders.len(), 1);
    assert_eq!(sink_sectors(&flood_sectors(&a)).len(), 1);
    let a = manual_assign(&d, &[(1, 2, Direction::Right), (1, 3, Direction::Left)]).unwrap();
    assert!(check_sink_free(&compute_sectors(&a)).sink_free);
}

#[test]
fn track_examples() {
    let a = worked_assignment();
    let t = boundary_track(&a);
    assert_eq!(t.sectors.len(), 46);
    assert_eq!(t.maximal().count(), 23);
    let l = linked_pairs(&t);
    assert_eq!(l.pairs, vec![(ArcId::new(3, 1), ArcId::new(3, 2))]);
    assert_eq!(l.deduction, 1);
    let d = build_diagram(&word("1^3 2 3^3 2"));
    let single = manual_assign(&d, &[(1, 1, Direction::Left)]).unwrap();
    let t = boundary_track(&single);
    let first = t
        .sectors
        .iter()
        .min_by_key(|s| s.lambda.0.min(s.lambda.1))
        .unwrap();
    assert!(first.maximal);
    let apart = manual_assign(&d, &[(1, 1, Direction::Right), (3, 1, Direction::Right)]).unwrap();
    assert!(linked_pairs(&boundary_track(&apart)).pairs.is_empty());
    let empty = ArcAssignment::for_word(&word(WORKED));
    assert!(boundary_track(&empty).sectors.is_empty());
    let c = tau_sup(&empty).unwrap();
    assert_eq!((c.tau_sup, c.slope_claim.upper), (0, 0));
}

#[test]
fn worked_example_certificate() {
    let c = construct(&word(WORKED)).unwrap();
    assert_eq!((c.tau_sup, c.genus), (22, 12));
    assert!(c.tau_sup > c.genus);
    assert!(c.sink_free && c.slope_claim.valid);
    assert_eq!(
        c.case_trace.as_ref().unwrap().pipeline,
        Pipeline::FourGeneric
    );
    assert_eq!(c.chosen_arcs.len(), 23);
    let back = braidfol::train_track::Certificate::from_json(&c.to_json()).unwrap();
    assert_eq!(back, c);
}

#[test]
fn family_certificates() {
    let b = km_family(1).unwrap();
    assert_eq!(b.len(), 27);
    assert_eq!(construct(&km_family(2).unwrap()).unwrap().tau_sup, 28);
    assert!(matches!(km_family(0), Err(Error::Domain(_))));
}

#[test]
fn no_standard_knot_has_two_letters_in_both_outer_columns() {
    // Two σ_3 letters in one σ_2 gap fix strand 4; in different gaps each
    // needs a σ_1 beside it, and σ_2^a (σ_1 σ_3) σ_2^b (σ_1 σ_3) never
    // closes to a knot. So the c_1 = c_3 = 2 sparse case is vacuous.
    for k in (3usize..=13).step_by(2) {
        let len = k + 4;
        for a in 0..len {
            for b in a + 1..len {
                for c in 0..len {
                    for d in c + 1..len {
                        if [a, b].contains(&c) || [a, b].contains(&d) {
                            continue;
                        }
                        let mut l = vec![2; len];
                        (l[a], l[b], l[c], l[d]) = (1, 1, 3, 3);
                        let w = BraidWord::new(4, l).unwrap();
                        assert!(closure_components(&w) != 1 || !is_standard(&w), "{w}");
                    }
                }
            }
        }
    }
}

#[test]
fn sparse_words_reach_two_g_minus_two() {
    for w in ["1 2 3^2 2^2 1 3 2^3", "1^2 3 2^3 3 1 2^3"] {
        let c = construct(&word(w)).unwrap();
        assert_eq!(
            c.case_trace.as_ref().unwrap().pipeline,
            Pipeline::FourSparse
        );
        assert_eq!(c.tau_sup, 2 * c.genus - 2, "{w}");
    }
}

#[test]
fn delegation_and_precheck_errors() {
    assert!(matches!(
        construct(&word("1 2 1 2")),
        Err(Error::Delegated(_))
    ));
    assert!(matches!(construct(&word("1 1")), Err(Error::NotAKnot(2))));
    assert!(matches!(
        construct(&word("4^2 1^2 4 2^2 1 2 3^3 2 3")),
        Err(Error::FailsPrecheck(_))
    ));
}

#[test]
fn cable_examples() {
    let v = cable_obstruction(3, 1, 2).unwrap();
    assert_eq!(v.conclusion, Conclusion::NotBraidPositive);
    assert!(v.chain.iter().any(|l| l.contains("= 6")));
    assert!(v.chain.iter().any(|l| l.starts_with("3 < g + 1 = 7")));
    assert_eq!(
        cable_obstruction(5, -1, 0).unwrap().conclusion,
        Conclusion::BraidPositive
    );
    let v = cable_obstruction(2, 1, 1).unwrap();
    assert_eq!(v.conclusion, Conclusion::NotBraidPositive);
    assert!(v.chain.iter().any(|l| l.starts_with("2 < g + 1 = 3")));
    assert!(matches!(cable_obstruction(1, 1, 1), Err(Error::Domain(_))));
    assert!(matches!(cable_obstruction(2, 2, 1), Err(Error::Domain(_))));
}

#[test]
fn splice_examples() {
    assert_eq!(splice_feasible(2, 3).conclusion, Conclusion::Feasible);
    assert_eq!(splice_feasible(1, 5).conclusion, Conclusion::NotCovered);
    assert_eq!(splice_feasible(2, 2).conclusion, Conclusion::Feasible);
}

#[test]
fn search_examples() {
    let r = exhaustive_search(&word("1 1 1"), 24).unwrap();
    assert_eq!(r.explored, 9);
    assert!(r.best_tau <= 2);
    let r = exhaustive_search(&word(SMALL), 24).unwrap();
    assert_eq!(r.explored, 81);
    assert_eq!(r.best_tau, 3);
    assert!(matches!(
        exhaustive_search(&word(WORKED), 12),
        Err(Error::TooLarge { .. })
    ));
}

#[test]
fn outer_arcs_help_the_family_only_through_a_linked_triangle() {
    let c = construct(&word(FAMILY_ONE)).unwrap();
    let base = assignment_of(&c);
    let extra = [ArcId::new(1, 2), ArcId::new(1, 3)];
    let r = search_extensions(&base, &extra, 24).unwrap();
    assert_eq!(r.explored, 9);
    assert_eq!(r.best_tau, c.tau_sup + 1);
    // The gain needs α_{1,2}, α_{1,3}, α_{2,5} pairwise linked, a graph the
    // matching rule extrapolates to. Counting each pair drops it below τ.
    let ledger = linked_pairs(&boundary_track(&r.best_assignment));
    assert!(ledger.extrapolated);
    assert_eq!(ledger.pairs.len(), 4);
    assert!(r.best_assignment.len() - ledger.pairs.len() < c.tau_sup);
}

#[test]
fn verify_examples() {
    let c = construct(&word(WORKED)).unwrap();
    assert!(verify_certificate(&c));
    let mut bad = c.clone();
    bad.tau_sup += 1;
    assert!(!verify_certificate(&bad));
    let mut flipped = c.clone();
    flipped.directions[1] = flipped.directions[1].flipped();
    assert!(!verify_certificate(&flipped));
    assert!(matches!(
        braidfol::oracle::verify_certificate_json("{not json"),
        Err(Error::Format(_))
    ));
}
