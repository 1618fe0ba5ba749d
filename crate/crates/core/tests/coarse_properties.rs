use mediancert::coarse::{self, CoarseMedianInstance, CoarseParams, EstimateConfig, Rational};
use mediancert::cube::CubeComplex;
use mediancert::generate;
use mediancert::set::VertexSet;
use proptest::prelude::*;

fn q(n: i64) -> Rational {
    Rational::from_integer(n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn coarse_intervals_grow_with_tolerance(w in 1usize..4, a in any::<prop::sample::Index>(), b in any::<prop::sample::Index>(), t1 in 0i64..6, t2 in 0i64..6) {
        let inst = CoarseMedianInstance::coarsened_grid(w, w).unwrap();
        let n = inst.point_count();
        let (a, b) = (a.index(n), b.index(n));
        let (lo, hi) = (t1.min(t2), t1.max(t2));
        prop_assert!(inst.coarse_interval(a, b, q(lo)).is_subset(&inst.coarse_interval(a, b, q(hi))));
        prop_assert_eq!(inst.coarse_interval(a, b, inst.diameter()).len(), n);
        prop_assert!(inst.coarse_interval(a, b, q(0)).contains(a));
    }

    #[test]
    fn exact_instances_have_exact_intervals(w in 1usize..5, h in 1usize..5, a in any::<prop::sample::Index>(), b in any::<prop::sample::Index>()) {
        let g = generate::grid(w, h).unwrap();
        let inst = CoarseMedianInstance::from_median_graph(&g).unwrap();
        let (a, b) = (a.index(g.vertex_count()), b.index(g.vertex_count()));
        prop_assert_eq!(inst.coarse_interval(a, b, q(0)), g.interval(a, b));
    }

    #[test]
    fn deep_point_search_agrees_with_exact_construction(w in 2usize..6, a in any::<prop::sample::Index>(), b in any::<prop::sample::Index>(), r in 1i64..4, t in 1i64..6) {
        let g = generate::grid(w, w).unwrap();
        let inst = CoarseMedianInstance::from_median_graph(&g).unwrap();
        let params = CoarseParams::exact(2);
        let (a, b) = (a.index(g.vertex_count()), b.index(g.vertex_count()));
        let h = coarse::find_deep_point(&inst, &params, a, b, q(r), q(t), q(0)).unwrap();
        let target = {
            let mut s = g.ball(a, (r * t) as u32);
            s.intersect_with(&g.interval(a, b));
            s
        };
        // the exact construction always gives a witness within reach, so the search must succeed
        let exact = g.deep_point_exact(a, b, &target, 2).unwrap();
        let c = coarse::l_constants(&params, q(r), q(t), 2);
        prop_assert!(q(g.distance(a, exact.point) as i64) <= c.l3);
        let h = h.expect("search succeeds where the exact witness exists");
        prop_assert!(g.interval(a, b).contains(h));
        prop_assert!(q(g.distance(a, h) as i64) <= q(g.distance(a, exact.point) as i64));
        for z in target.iter() {
            prop_assert!(q(g.distance(g.median(a, h, z).unwrap(), z) as i64) <= c.l2);
        }
    }
}

#[test]
fn witness_chain_is_exact_on_grids() {
    let g = generate::grid(6, 6).unwrap();
    let inst = CoarseMedianInstance::from_median_graph(&g).unwrap();
    let params = CoarseParams::exact(2);
    let (t, r) = (q(4), q(3));
    for x in 0..g.vertex_count() {
        let xx0 = g.interval(x, 0);
        for y in g.ball(x, 3).iter() {
            let chain = coarse::witness_chain(&inst, &params, 0, x, y, t, r).unwrap();
            assert!(chain.holds(), "{chain:?}");
            assert!(xx0.contains(chain.p_y));

            // with a deep point covering the target exactly, p_y is h_y itself
            let mut target = g.ball(y, 12);
            target.intersect_with(&g.interval(y, 0));
            let h = g.deep_point_exact(y, 0, &target, 2).unwrap().point;
            let m = g.median(x, y, 0).unwrap();
            assert!(g.interval(y, h).contains(m));
            assert_eq!(g.median(m, 0, h).unwrap(), h);
            assert!(xx0.contains(h));
        }
    }
    let s = coarse::witness_set_coarse(&inst, &params, 0, 0, q(3), t, r).unwrap();
    let l3 = coarse::l_constants(&params, r, t, 2).l3;
    assert!(s.iter().all(|h| q(g.distance(0, h) as i64) <= l3));
    // near the basepoint every y is its own deep point
    assert_eq!(s, g.ball(0, 3));
    assert!(coarse::witness_set_coarse(&inst, &params, 0, 0, q(13), t, r).is_err());
}

#[test]
fn checkerboard_parameters_and_gamma_formula() {
    let inst = CoarseMedianInstance::coarsened_grid(3, 3).unwrap();
    let params = coarse::estimate_params(&inst, &EstimateConfig::default()).unwrap();
    assert!(params.exhaustive);
    assert!(params.k <= q(2));
    assert!(params.gamma > q(0), "the checkerboard is not exactly median");
    assert!(params.gamma <= params.gamma_formula().unwrap());
    let (m1, m2) = inst.m1_m2_defects();
    assert_eq!((m1, m2), (q(0), q(0)));
}

#[test]
fn closure_of_small_sets_is_exact_and_low_rank() {
    let g = generate::hypercube(4).unwrap();
    let cc = CubeComplex::new(&g).unwrap();
    let table = mediancert::median::MedianTable::new(&g).unwrap();
    for a in 0..16 {
        for b in a..16 {
            for c in b..16 {
                let set = VertexSet::from_iter(16, [a, b, c]);
                let rep = coarse::verify_c2_exact(&cc, &table, &set).unwrap();
                assert_eq!(rep.h_p, 0);
                assert!(rep.pi_rank <= rep.graph_rank);
            }
        }
    }
}

#[test]
fn tight_h0_cap_is_reported() {
    let inst = CoarseMedianInstance::coarsened_grid(2, 2).unwrap();
    let strict = EstimateConfig {
        k_max: q(1),
        h0_cap: Some(q(0)),
        ..EstimateConfig::default()
    };
    assert!(coarse::estimate_params(&inst, &strict).is_ok());

    // path 0-1-2 with an operation that jumps: mu(1,1,1) = 2, everything else 0
    let metric: Vec<Rational> = [0, 1, 2, 1, 0, 1, 2, 1, 0].into_iter().map(q).collect();
    let mut mu = vec![0u16; 27];
    mu[13] = 2;
    let jumpy = CoarseMedianInstance::new(3, &metric, mu, Some(1)).unwrap();
    assert!(matches!(
        coarse::estimate_params(&jumpy, &strict),
        Err(mediancert::Error::NotCoarseMedian { .. })
    ));
    let loose = EstimateConfig {
        h0_cap: Some(q(0)),
        ..EstimateConfig::default()
    };
    assert_eq!(coarse::estimate_params(&jumpy, &loose).unwrap().k, q(2));
}
