use mediancert::cube::CubeComplex;
use mediancert::generate;
use mediancert::graph::MedianGraph;
use mediancert::set::VertexSet;
use proptest::prelude::*;

fn closure_graph() -> impl Strategy<Value = MedianGraph> {
    (2usize..8, 3usize..7, any::<u64>())
        .prop_filter_map("closure too large", |(points, dim, seed)| {
            generate::median_closure_graph(points.min(1 << dim), dim, seed, 120)
                .ok()
                .map(|(g, _)| g)
        })
}

fn small_graph() -> impl Strategy<Value = MedianGraph> {
    prop_oneof![
        closure_graph(),
        (1usize..6, 1usize..6).prop_map(|(w, h)| generate::grid(w, h).unwrap()),
        (1usize..4, 1usize..4).prop_map(|(b, d)| generate::tree(b, d).unwrap()),
        (1usize..6).prop_map(|s| generate::staircase(s).unwrap()),
        (1usize..5).prop_map(|d| generate::hypercube(d).unwrap()),
    ]
}

/// A graph together with `k` vertex ids drawn from it.
fn graph_and_vertices(k: usize) -> impl Strategy<Value = (MedianGraph, Vec<usize>)> {
    small_graph().prop_flat_map(move |g| {
        let n = g.vertex_count();
        (Just(g), proptest::collection::vec(0..n, k))
    })
}

fn permutations(xs: &[usize]) -> Vec<Vec<usize>> {
    if xs.len() <= 1 {
        return vec![xs.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..xs.len() {
        let mut rest = xs.to_vec();
        let head = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, head);
            out.push(p);
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn median_lies_on_all_three_geodesics((g, v) in graph_and_vertices(3)) {
        let (x, y, z) = (v[0], v[1], v[2]);
        let m = g.median(x, y, z).unwrap();
        for (a, b) in [(x, y), (y, z), (z, x)] {
            prop_assert_eq!(g.distance(a, m) + g.distance(m, b), g.distance(a, b));
        }
        prop_assert_eq!(g.median(x, x, y).unwrap(), x);
    }

    #[test]
    fn median_is_nonexpansive((g, v) in graph_and_vertices(4)) {
        let (a, b, c, c2) = (v[0], v[1], v[2], v[3]);
        let d = g.distance(g.median(a, b, c).unwrap(), g.median(a, b, c2).unwrap());
        prop_assert!(d <= g.distance(c, c2));
    }

    #[test]
    fn interval_by_median_matches_interval_by_distance((g, v) in graph_and_vertices(2)) {
        let (a, b) = (v[0], v[1]);
        let by_median: Vec<usize> = (0..g.vertex_count()).filter(|&c| g.median(a, b, c).unwrap() == c).collect();
        prop_assert_eq!(g.interval(a, b).to_vec(), by_median);
    }

    #[test]
    fn iterated_median_ignores_order((g, v) in graph_and_vertices(5)) {
        let (xs, b) = (&v[..4], v[4]);
        let base = g.iterated_median(xs, b).unwrap();
        for p in permutations(xs) {
            prop_assert_eq!(g.iterated_median(&p, b).unwrap(), base);
        }
    }

    #[test]
    fn intersection_of_intervals_is_an_interval((g, v) in graph_and_vertices(5)) {
        let (xs, b) = (&v[..4], v[4]);
        let m = g.iterated_median(xs, b).unwrap();
        let mut meet = VertexSet::full(g.vertex_count());
        for &x in xs {
            meet.intersect_with(&g.interval(x, b));
        }
        prop_assert_eq!(meet, g.interval(m, b));
        let hull = g.hull(&VertexSet::from_iter(g.vertex_count(), xs.iter().copied())).unwrap();
        prop_assert!(hull.contains(m));
    }

    #[test]
    fn separating_walls_are_inherited((g, v) in graph_and_vertices(5)) {
        let (xs, b) = (&v[..4], v[4]);
        let m = g.iterated_median(xs, b).unwrap();
        let cc = CubeComplex::new(&g).unwrap();
        for h in cc.hyperplanes() {
            let all = xs.iter().all(|&x| h.separates(x, b));
            prop_assert_eq!(all, h.separates(m, b), "hyperplane {}", h.id);
        }
    }

    #[test]
    fn generators_reduce_to_rank((g, v) in graph_and_vertices(7)) {
        let (xs, b) = (&v[..6], v[6]);
        let rank = CubeComplex::new(&g).unwrap().rank();
        let ys = g.reduce_generators(xs, b, rank).unwrap();
        prop_assert!(ys.len() <= rank.max(2));
        prop_assert!(ys.iter().all(|y| xs.contains(y)));
        prop_assert_eq!(g.iterated_median(&ys, b).unwrap(), g.iterated_median(xs, b).unwrap());
    }

    #[test]
    fn generators_in_an_interval_stay_below_their_median((g, v) in graph_and_vertices(6)) {
        let (a, b) = (v[0], v[1]);
        let ab = g.interval(a, b);
        let xs: Vec<usize> = v[2..].iter().map(|&x| g.median(a, b, x).unwrap()).collect();
        prop_assert!(xs.iter().all(|&x| ab.contains(x)));
        let m = g.iterated_median(&xs, b).unwrap();
        let am = g.interval(a, m);
        prop_assert!(xs.iter().all(|&x| am.contains(x)));
    }

    #[test]
    fn interval_exchange((g, v) in graph_and_vertices(4)) {
        let (a, b) = (v[0], v[1]);
        let x = g.median(a, b, v[2]).unwrap();
        let y = g.median(a, x, v[3]).unwrap();
        prop_assert!(g.interval(a, x).contains(y));
        prop_assert!(g.interval(y, b).contains(x));
    }

    #[test]
    fn hull_is_convex_and_fast((g, v) in graph_and_vertices(4)) {
        let set = VertexSet::from_iter(g.vertex_count(), v.iter().copied());
        let (hull, p) = g.hull_with_steps(&set).unwrap();
        prop_assert!(g.is_convex(&hull));
        prop_assert!(set.is_subset(&hull));
        prop_assert!(p <= CubeComplex::new(&g).unwrap().rank());
        if v[0] != v[1] {
            let pair = VertexSet::from_iter(g.vertex_count(), [v[0], v[1]]);
            prop_assert_eq!(g.hull(&pair).unwrap(), g.interval(v[0], v[1]));
        }
    }

    #[test]
    fn deep_point_covers_the_set((g, v) in graph_and_vertices(5)) {
        let (a, b) = (v[0], v[1]);
        let rank = CubeComplex::new(&g).unwrap().rank();
        let c = VertexSet::from_iter(g.vertex_count(), v[2..].iter().map(|&x| g.median(a, b, x).unwrap()));
        let deep = g.deep_point_exact(a, b, &c, rank).unwrap();
        prop_assert_eq!(deep.generators.len(), rank);
        prop_assert!(deep.generators.iter().all(|&h| c.contains(h)));
        prop_assert_eq!(g.iterated_median(&deep.generators, b).unwrap(), deep.point);
        prop_assert!(c.is_subset(&g.interval(a, deep.point)));
        let far = deep.generators.iter().map(|&h| g.distance(a, h)).max().unwrap();
        prop_assert!(g.distance(a, deep.point) as u64 <= 3u64.pow(rank as u32) * far as u64);
    }
}

#[test]
fn rank_one_can_need_two_generators() {
    let g = generate::path(3).unwrap();
    assert_eq!(g.iterated_median(&[0, 2], 1).unwrap(), 1);
    assert_eq!(g.reduce_generators(&[0, 2], 1, 1).unwrap(), vec![0, 2]);
}

#[test]
fn deep_point_rejects_sets_outside_the_interval() {
    let g = generate::grid(3, 3).unwrap();
    let c = VertexSet::from_iter(16, [3, 12]);
    assert!(g.deep_point_exact(0, 5, &c, 2).is_err());
}
