//! Property tests for the structural invariants: transpose validity,
//! restriction functoriality and component refinement, isomorphism as an
//! equivalence relation, reflection involutions, and downward closure of
//! sphericality.

use kmstab::classify::{catalog_template, classify, CatalogType};
use kmstab::gcm::{graph_isomorphic, Gcm, Label, NodeSet};
use kmstab::invariants::reflection_matrices;
use kmstab::linalg::det_int;
use kmstab::poset::SphericalPoset;
use proptest::prelude::*;

/// Strategy: a valid GCM on labels 1..=rank with entries in {0,-1,-2,-3}.
fn arb_gcm(max_rank: usize) -> impl Strategy<Value = Gcm> {
    (1..=max_rank).prop_flat_map(|rank| {
        let pairs = rank * (rank - 1) / 2;
        proptest::collection::vec(0usize..10, pairs).prop_map(move |choices| {
            let mut rows = vec![vec![0i64; rank]; rank];
            for i in 0..rank {
                rows[i][i] = 2;
            }
            let mut k = 0;
            for i in 0..rank {
                for j in (i + 1)..rank {
                    let pick = choices[k];
                    k += 1;
                    if pick > 0 {
                        rows[i][j] = -(((pick - 1) / 3 + 1) as i64);
                        rows[j][i] = -(((pick - 1) % 3 + 1) as i64);
                    }
                }
            }
            Gcm::new((1..=rank as i64).collect(), rows).unwrap()
        })
    })
}

fn arb_subset(rank: usize) -> impl Strategy<Value = NodeSet> {
    proptest::collection::vec(proptest::bool::ANY, rank).prop_map(|bits| {
        bits.iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(i, _)| (i + 1) as Label)
            .collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn transpose_is_valid_and_involutive(g in arb_gcm(6)) {
        let t = g.transpose();
        prop_assert_eq!(t.transpose(), g);
    }

    #[test]
    fn restriction_is_functorial(g in arb_gcm(6), big in arb_subset(6), small in arb_subset(6)) {
        let big: NodeSet = big.intersection(&g.node_set()).copied().collect();
        let small: NodeSet = small.intersection(&big).copied().collect();
        let once = g.restrict(&small).unwrap();
        let twice = g.restrict(&big).unwrap().restrict(&small).unwrap();
        prop_assert_eq!(once, twice);
    }

    #[test]
    fn restriction_refines_components(g in arb_gcm(6), subset in arb_subset(6)) {
        let subset: NodeSet = subset.intersection(&g.node_set()).copied().collect();
        let sub = g.restrict(&subset).unwrap();
        for comp in sub.components() {
            // Each component of the restriction lies inside the
            // intersection of one parent component with the subset.
            let parent = g
                .components()
                .into_iter()
                .find(|c| comp.iter().all(|l| c.contains(l)));
            prop_assert!(parent.is_some());
        }
    }

    #[test]
    fn isomorphism_is_reflexive_and_symmetric(g in arb_gcm(5)) {
        let dg = g.dynkin_graph();
        let id = graph_isomorphic(&dg, &dg);
        prop_assert!(id.is_some());
        // A relabeled copy is isomorphic both ways, and witnesses are
        // genuine label bijections preserving oriented edge labels.
        let relabeled: Vec<Label> = g.nodes().iter().map(|&l| l + 100).collect();
        let rows: Vec<Vec<i64>> = (0..g.rank())
            .map(|i| (0..g.rank()).map(|j| g.entry_at(i, j)).collect())
            .collect();
        let h = Gcm::new(relabeled, rows).unwrap();
        let dh = h.dynkin_graph();
        let fwd = graph_isomorphic(&dg, &dh);
        let back = graph_isomorphic(&dh, &dg);
        prop_assert!(fwd.is_some());
        prop_assert!(back.is_some());
        let fwd = fwd.unwrap();
        for (&u, &v) in fwd.iter() {
            for (&u2, &v2) in fwd.iter() {
                prop_assert_eq!(dg.label_from(u, u2), dh.label_from(v, v2));
            }
        }
    }

    #[test]
    fn trichotomy_is_transpose_stable(g in arb_gcm(5)) {
        let a = classify(&g).unwrap();
        let b = classify(&g.transpose()).unwrap();
        prop_assert_eq!(a.is_finite, b.is_finite);
        prop_assert_eq!(a.components.len(), b.components.len());
    }

    #[test]
    fn reflections_are_involutions_with_determinant_minus_one(
        g in arb_gcm(5),
        subset in arb_subset(5),
    ) {
        let subset: NodeSet = subset.intersection(&g.node_set()).copied().collect();
        let act = reflection_matrices(&g, &subset);
        let n = act.dim();
        for (node, m) in &act.generators {
            prop_assert_eq!(det_int(m), kmstab::linalg::Int::from(-1));
            let mut sq = vec![vec![0i64; n]; n];
            for i in 0..n {
                for k in 0..n {
                    for j in 0..n {
                        sq[i][j] += m[i][k] * m[k][j];
                    }
                }
            }
            for i in 0..n {
                for j in 0..n {
                    prop_assert_eq!(sq[i][j], i64::from(i == j), "square at {}", node);
                }
            }
            // Basis vectors not adjacent to the reflecting node are fixed.
            for (k, &lk) in act.ambient.iter().enumerate() {
                if lk != *node && g.entry(*node, lk) == 0 {
                    for i in 0..n {
                        prop_assert_eq!(m[i][k], i64::from(i == k));
                    }
                }
            }
        }
    }

    #[test]
    fn spherical_posets_are_downward_closed(g in arb_gcm(6)) {
        let p = SphericalPoset::enumerate(&g).unwrap();
        prop_assert!(p.is_downward_closed());
        prop_assert!(p.contains(&NodeSet::new()));
    }

    #[test]
    fn json_round_trips(g in arb_gcm(6)) {
        let s = g.to_json();
        let h = Gcm::from_json(&s).unwrap();
        prop_assert_eq!(&h, &g);
        prop_assert_eq!(h.to_json(), s);
    }
}

#[test]
fn every_subset_of_small_finite_types_is_finite() {
    for n in 1..=4u32 {
        for t in CatalogType::of_rank(n) {
            let g = catalog_template(t);
            let poset = SphericalPoset::enumerate(&g).unwrap();
            assert_eq!(poset.len(), 1 << n, "all subsets of {t} must be spherical");
        }
    }
}

#[test]
fn isomorphism_is_transitive_on_a_sample() {
    let chain = catalog_template(CatalogType::A(4));
    let relabelings: Vec<Vec<Label>> = vec![
        vec![4, 3, 2, 1],
        vec![10, 20, 30, 40],
        vec![-1, 5, 0, 2],
    ];
    let rows: Vec<Vec<i64>> = (0..4)
        .map(|i| (0..4).map(|j| chain.entry_at(i, j)).collect())
        .collect();
    let copies: Vec<Gcm> = relabelings
        .into_iter()
        .map(|labels| Gcm::new(labels, rows.clone()).unwrap())
        .collect();
    for a in &copies {
        for b in &copies {
            assert!(graph_isomorphic(&a.dynkin_graph(), &b.dynkin_graph()).is_some());
        }
    }
}
