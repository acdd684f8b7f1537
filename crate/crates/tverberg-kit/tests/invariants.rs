//! Property tests for the module-level invariants: heredity, rainbow
//! structure, admissibility, enumeration uniqueness, decider witness
//! soundness, pivot-sequence structure, and exact-geometry soundness.

use proptest::prelude::*;

use tverberg_kit::complex::{
    enumerate_symm_deleted_join, is_admissible, rainbow_complex, Coloring, ComplexFamily,
    LabeledPartition, SimplicialComplex, VertexSet,
};
use tverberg_kit::geometry::{hulls_intersect, PointConfiguration};
use tverberg_kit::instance::{format_rational, parse_rational};
use tverberg_kit::morse::{pi_sequence, PiEntry};
use tverberg_kit::unavoidability::{is_collectively_rs_unavoidable, violation_census};

const CAP: u64 = 1 << 24;

fn arb_complex(m: u32) -> impl Strategy<Value = SimplicialComplex> {
    prop::collection::vec(0u32..(1 << m), 1..5).prop_map(move |masks| {
        let faces: Vec<VertexSet> = masks.into_iter().map(VertexSet::from_mask).collect();
        SimplicialComplex::from_maximal_faces(m, &faces).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn complexes_are_hereditary(k in arb_complex(6)) {
        for f in k.faces() {
            for v in f.iter() {
                prop_assert!(k.contains(f.remove(v)));
            }
        }
    }

    #[test]
    fn skeleton_caps_dimension(k in arb_complex(6), d in -1i32..6) {
        let s = k.skeleton(d);
        prop_assert!(s.dim() <= d.max(-1));
        prop_assert!(s.is_subcomplex_of(&k));
        prop_assert_eq!(s.skeleton(d), s);
    }

    #[test]
    fn rainbow_complex_faces_are_rainbow(d in -1i32..4) {
        let c = Coloring::contiguous_blocks(2, 1).unwrap();
        let k = rainbow_complex(&c, d);
        for f in k.faces() {
            prop_assert!(c.is_rainbow(f));
            prop_assert!(f.len() as i32 <= d + 1);
        }
    }

    #[test]
    fn identical_members_make_admissibility_coordinatewise(
        k in arb_complex(5),
        masks in prop::collection::vec(0u32..32, 2),
    ) {
        // for K_1 = K_2 the matching permutation is irrelevant
        let (a, b) = (masks[0] & !masks[1], masks[1] & !masks[0]);
        let parts = vec![VertexSet::from_mask(a), VertexSet::from_mask(b)];
        let lp = LabeledPartition::new(5, parts.clone()).unwrap();
        let fam = ComplexFamily::new(vec![k.clone(), k.clone()]).unwrap();
        let coordinatewise = parts.iter().all(|&p| k.contains(p));
        prop_assert_eq!(is_admissible(&lp, &fam), coordinatewise);
    }

    #[test]
    fn enumeration_is_admissible_and_duplicate_free(
        k1 in arb_complex(5),
        k2 in arb_complex(5),
    ) {
        let fam = ComplexFamily::new(vec![k1, k2]).unwrap();
        let cells = enumerate_symm_deleted_join(&fam, CAP).unwrap();
        let codes: std::collections::HashSet<u64> = cells.iter().map(|c| c.code()).collect();
        prop_assert_eq!(codes.len(), cells.len());
        for c in &cells {
            prop_assert!(c.is_cell());
            prop_assert!(is_admissible(c, &fam));
        }
    }

    #[test]
    fn decider_witnesses_are_sound(
        k1 in arb_complex(5),
        k2 in arb_complex(5),
        s in 1u32..=2,
    ) {
        let fam = ComplexFamily::new(vec![k1, k2]).unwrap();
        let witness = is_collectively_rs_unavoidable(&fam, s, CAP).unwrap();
        match witness {
            Some(w) => {
                let sets = w.part_sets();
                prop_assert!(sets[0].is_disjoint(sets[1]));
                let hits = sets
                    .iter()
                    .enumerate()
                    .filter(|(i, a)| fam.member(*i).contains(**a))
                    .count() as u32;
                prop_assert!(hits < s);
                // census agrees that violations exist
                prop_assert!(violation_census(&fam, s, None, CAP).unwrap() > 0);
            }
            None => {
                prop_assert_eq!(violation_census(&fam, s, None, CAP).unwrap(), 0);
            }
        }
    }

    #[test]
    fn pi_entries_increase_within_a_color(masks in prop::collection::vec(0u32..64, 2)) {
        // on any disjoint pair of rainbow parts over the 2-block coloring
        let c = Coloring::contiguous_blocks(2, 1).unwrap();
        let (a, b) = (masks[0] & !masks[1], masks[1] & !masks[0]);
        let parts = vec![VertexSet::from_mask(a), VertexSet::from_mask(b)];
        prop_assume!(parts.iter().all(|&p| c.is_rainbow(p)));
        let cell = LabeledPartition::new(6, parts).unwrap();
        prop_assume!(cell.is_cell());
        let pi = pi_sequence(&cell, &c);
        let colors = c.num_colors();
        for i in 0..colors {
            for j in 1..cell.num_parts() {
                if let (PiEntry::Label(prev), PiEntry::Label(cur)) =
                    (pi[(j - 1) * colors + i], pi[j * colors + i])
                {
                    prop_assert!(cur > prev);
                }
            }
        }
    }

    #[test]
    fn hull_intersection_points_lie_in_every_hull(seed in 0u64..500) {
        let config = PointConfiguration::random(seed, 6, 2);
        let faces = [VertexSet::from_labels(&[1, 2, 3]), VertexSet::from_labels(&[4, 5, 6])];
        if let Some((point, weights)) = hulls_intersect(&config, &faces) {
            for (i, wl) in weights.iter().enumerate() {
                let mut total = parse_rational("0").unwrap();
                let mut image = vec![parse_rational("0").unwrap(); 2];
                for (label, w) in wl {
                    prop_assert!(faces[i].contains(*label));
                    prop_assert!(w >= &parse_rational("0").unwrap());
                    total += w;
                    for t in 0..2 {
                        image[t] += w * &config.point(*label)[t];
                    }
                }
                prop_assert_eq!(&total, &parse_rational("1").unwrap());
                prop_assert_eq!(&image, &point);
            }
            // the verdict is symmetric in the face order
            let swapped = [faces[1], faces[0]];
            prop_assert!(hulls_intersect(&config, &swapped).is_some());
        }
    }

    #[test]
    fn rational_text_roundtrip(n in -1000i64..1000, d in 1i64..100) {
        let text = format!("{n}/{d}");
        let x = parse_rational(&text).unwrap();
        let back = parse_rational(&format_rational(&x)).unwrap();
        prop_assert_eq!(x, back);
    }
}
