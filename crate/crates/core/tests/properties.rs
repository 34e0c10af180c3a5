use proptest::prelude::*;

use causal_horizon::gallery::{Flat, FlatKind};
use causal_horizon::graph::{delta_mu as graph_delta_mu, BandCloud, Compact, Cones, Subgraph, Weighting};
use causal_horizon::metrics::{d1, delta_mu, hausdorff, MetricCloud};
use causal_horizon::poset::{derive_beta, derive_gamma, derive_gamma_literal, FinitePoset};
use causal_horizon::{Chronology, Point, PointSet, RelationMatrix};

fn cloud() -> MetricCloud {
    MetricCloud::euclidean_grid(-2.0, 2.0, 0.5, Point::new(0.0, 0.0)).with_uniform_weights()
}

fn subset(mask: &[bool]) -> PointSet {
    let mut s = PointSet::with_capacity(mask.len());
    for (i, &b) in mask.iter().enumerate() {
        if b {
            s.insert(i);
        }
    }
    if s.is_clear() {
        s.insert(0);
    }
    s
}

fn masks() -> impl Strategy<Value = (Vec<bool>, Vec<bool>, Vec<bool>)> {
    let n = cloud().len();
    (prop::collection::vec(any::<bool>(), n), prop::collection::vec(any::<bool>(), n), prop::collection::vec(any::<bool>(), n))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn d1_is_a_metric((ma, mb, mc) in masks()) {
        let c = cloud();
        let (a, b, s) = (subset(&ma), subset(&mb), subset(&mc));
        let ab = d1(&a, &b, &c).unwrap();
        prop_assert_eq!(d1(&a, &a, &c).unwrap(), 0.0);
        prop_assert!((ab - d1(&b, &a, &c).unwrap()).abs() < 1e-15);
        prop_assert!(d1(&a, &s, &c).unwrap() <= ab + d1(&b, &s, &c).unwrap() + 1e-12);
        prop_assert!(ab <= 1.0);
    }

    #[test]
    fn delta_mu_is_a_pseudometric((ma, mb, mc) in masks()) {
        let c = cloud();
        let (a, b, s) = (subset(&ma), subset(&mb), subset(&mc));
        let ab = delta_mu(&a, &b, &c).unwrap();
        prop_assert!((ab - delta_mu(&b, &a, &c).unwrap()).abs() < 1e-15);
        prop_assert!(delta_mu(&a, &s, &c).unwrap() <= ab + delta_mu(&b, &s, &c).unwrap() + 1e-12);
    }

    #[test]
    fn hausdorff_triangle((ma, mb, mc) in masks()) {
        let c = cloud();
        let (a, b, s) = (subset(&ma), subset(&mb), subset(&mc));
        prop_assert!(hausdorff(&a, &s, &c) <= hausdorff(&a, &b, &c) + hausdorff(&b, &s, &c) + 1e-12);
    }

    #[test]
    fn graph_metrics_symmetric(t1 in 0.1f64..0.9, x1 in 0.0f64..1.0, t2 in 0.1f64..0.9, x2 in 0.0f64..1.0) {
        let (a, b) = (Cones::new(vec![(t1, x1)], None), Cones::new(vec![(t2, x2)], None));
        let k = Compact { t: (0.0, 1.0), x: (0.0, 1.0) };
        let ab = graph_delta_mu(&a, &b, k, &Weighting::Uniform, 256);
        let ba = graph_delta_mu(&b, &a, k, &Weighting::Uniform, 256);
        prop_assert!((ab - ba).abs() < 1e-12);
        let band = BandCloud::new(0.0, 1.0, -1.0, 2.0, 1.0 / 16.0, (0.5, 0.5), None);
        let (sa, sb) = (Subgraph::new(&a, 0.0, 1.0, -1.0, 2.0), Subgraph::new(&b, 0.0, 1.0, -1.0, 2.0));
        let d = band.d1(&sa, &sb, f64::INFINITY).unwrap();
        prop_assert!((d - band.d1(&sb, &sa, f64::INFINITY).unwrap()).abs() < 1e-15);
        prop_assert!(d <= (t1 - t2).hypot(x1 - x2) + 1e-12);
    }

    #[test]
    fn flat_chronologies_are_transitive_and_irreflexive(
        kind in prop::sample::select(vec![FlatKind::Minkowski2, FlatKind::Strip, FlatKind::Punctured, FlatKind::Slit, FlatKind::Cylinder]),
        pts in prop::collection::vec((0.05f64..0.95, -0.95f64..0.95), 3),
    ) {
        let s = Flat::new(kind);
        let p: Vec<Point> = pts.iter().map(|&(t, x)| Point::new(t * 2.0 - 1.0, x)).collect();
        let p: Vec<Point> = if kind == FlatKind::Strip { pts.iter().map(|&(t, x)| Point::new(t, x)).collect() } else { p };
        prop_assume!(p.iter().all(|q| s.admissible(q)));
        prop_assert!(!s.chron(&p[0], &p[0]));
        if s.chron(&p[0], &p[1]) && s.chron(&p[1], &p[2]) {
            prop_assert!(s.chron(&p[0], &p[2]));
        }
        if s.chron(&p[0], &p[1]) {
            prop_assert!(!s.chron(&p[1], &p[0]));
        }
    }

    #[test]
    fn alpha_is_a_preorder(pairs in prop::collection::vec((0usize..8, 0usize..8), 0..20)) {
        // transitive closure of a random strict order on 8 points
        let strict: Vec<(usize, usize)> = pairs.into_iter().filter(|(a, b)| a < b).collect();
        let mut r = RelationMatrix::from_pairs(8, strict);
        for k in 0..8 {
            for i in 0..8 {
                for j in 0..8 {
                    if r.get(i, k) && r.get(k, j) {
                        r.insert(i, j);
                    }
                }
            }
        }
        let a = r.alpha();
        prop_assert!(a.is_reflexive());
        prop_assert!(a.is_transitive());
        prop_assert!(r.is_subset_of(&a));
    }

    #[test]
    fn derived_poset_relations(pairs in prop::collection::vec((0usize..7, 0usize..7), 0..16)) {
        let strict: Vec<(usize, usize)> = pairs.into_iter().filter(|(a, b)| a < b).collect();
        let mut r = RelationMatrix::from_pairs(7, strict);
        for k in 0..7 {
            for i in 0..7 {
                for j in 0..7 {
                    if r.get(i, k) && r.get(k, j) {
                        r.insert(i, j);
                    }
                }
            }
        }
        let p = FinitePoset::new((0..7).map(|i| i.to_string()).collect(), &r.pairs().collect::<Vec<_>>()).unwrap();
        let b = derive_beta(&p);
        prop_assert!(b.pairs().all(|(x, y)| p.lt(x, y)));
        // on a finite poset every cover defeats the first quantifier of gamma
        prop_assert_eq!(derive_gamma(&p).count(), 0);
        let lit = derive_gamma_literal(&p);
        prop_assert!(lit.pairs().all(|(x, y)| !p.lt(x, y)));
    }
}
