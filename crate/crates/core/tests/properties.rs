use proptest::prelude::*;

use unialg::matalg::{
    bellman_iterates, bellman_solve, mat_add, mat_closure, mat_mul, mat_pow, BellmanMethod,
    ClosureMethod, Matrix,
};
use unialg::{Carrier, Instance, Semiring, WeightedDigraph};

const GJ: BellmanMethod = BellmanMethod::Closure(ClosureMethod::GaussJordan);

/// Square min-plus matrix with nonnegative integer weights; `None` is no arc.
fn minplus(max_n: usize) -> impl Strategy<Value = Matrix<Instance>> {
    (1..=max_n).prop_flat_map(|n| {
        prop::collection::vec(prop::option::weighted(0.7, 0u8..10), n * n).prop_map(move |v| {
            let data = v
                .into_iter()
                .map(|w| w.map_or(Carrier::INF, |w| Carrier::Num(w as f64)))
                .collect();
            Matrix::new(Instance::MinPlus, n, n, data).unwrap()
        })
    })
}

fn column(s: Instance, n: usize, vals: &[u8]) -> Matrix<Instance> {
    Matrix::from_fn(s, n, 1, |i, _| Carrier::Num(vals[i % vals.len()] as f64)).unwrap()
}

fn with_extra_arcs(a: &Matrix<Instance>, extra: &[Option<u8>]) -> Matrix<Instance> {
    let s = *a.semiring();
    Matrix::from_fn(s, a.rows(), a.cols(), |i, j| {
        let e = extra[(i * a.cols() + j) % extra.len()].map_or(Carrier::INF, |w| Carrier::Num(w as f64));
        s.add(a.get(i, j), e)
    })
    .unwrap()
}

proptest! {
    #[test]
    fn closure_solution_is_least(
        a in minplus(6),
        b in prop::collection::vec(0u8..10, 1..6),
        extra in prop::collection::vec(prop::option::of(0u8..10), 1..36),
    ) {
        let n = a.rows();
        let b = column(Instance::MinPlus, n, &b);
        let x = bellman_solve(&a, &b, GJ).unwrap();
        prop_assert_eq!(&mat_add(&mat_mul(&a, &x).unwrap(), &b).unwrap(), &x);
        // a solution for a graph with more arcs is a super-solution here
        let bigger = with_extra_arcs(&a, &extra);
        let y = bellman_solve(&bigger, &b, GJ).unwrap();
        prop_assert!(mat_add(&mat_mul(&a, &y).unwrap(), &b).unwrap().leq(&y).unwrap());
        prop_assert!(x.leq(&y).unwrap());
    }

    #[test]
    fn iterates_increase_to_the_solution(a in minplus(6), b in prop::collection::vec(0u8..10, 1..6)) {
        let n = a.rows();
        let b = column(Instance::MinPlus, n, &b);
        let mut seen = Vec::new();
        let (x, _) = bellman_iterates(&a, &b, |m| seen.push(m.clone())).unwrap();
        prop_assert_eq!(&x, &bellman_solve(&a, &b, GJ).unwrap());
        for w in seen.windows(2) {
            prop_assert!(w[0].leq(&w[1]).unwrap());
        }
        prop_assert!(seen.iter().all(|m| m.leq(&x).unwrap()));
    }

    #[test]
    fn powers_count_walks_of_exact_length(a in minplus(4), k in 0usize..4) {
        let n = a.rows();
        let g = WeightedDigraph::from_matrix(&a).unwrap();
        let p = mat_pow(&a, k).unwrap();
        let s = Instance::MinPlus;
        for i in 0..n {
            for j in 0..n {
                // enumerate every node sequence of k arcs from i to j
                let mut best = s.zero();
                let mut idx = vec![0usize; k.saturating_sub(1)];
                loop {
                    let mut path = vec![i];
                    path.extend(&idx);
                    if k > 0 {
                        path.push(j);
                    }
                    if k > 0 || i == j {
                        best = s.add(best, g.path_weight(&path).unwrap());
                    }
                    let mut c = 0;
                    while c < idx.len() && idx[c] == n - 1 {
                        idx[c] = 0;
                        c += 1;
                    }
                    if c == idx.len() {
                        break;
                    }
                    idx[c] += 1;
                }
                prop_assert_eq!(p.get(i, j), best);
            }
        }
    }

    #[test]
    fn shortest_paths_satisfy_triangle_inequality(a in minplus(7)) {
        let d = WeightedDigraph::from_matrix(&a).unwrap().shortest_paths().unwrap();
        let n = a.rows();
        for i in 0..n {
            prop_assert_eq!(d.get(i, i), Carrier::Num(0.0));
            for j in 0..n {
                for k in 0..n {
                    let via = d.get(i, k).num().unwrap() + d.get(k, j).num().unwrap();
                    prop_assert!(d.get(i, j).num().unwrap() <= via);
                }
            }
        }
    }

    #[test]
    fn finite_horizon_profit_is_below_unbounded(
        w in prop::collection::vec(prop::option::of(-9i8..=0), 1..36),
        t in prop::collection::vec(-5i8..5, 1..6),
        k in 0usize..10,
    ) {
        let n = (w.len() as f64).sqrt() as usize;
        let s = Instance::MaxPlus;
        let a = Matrix::from_fn(s, n, n, |i, j| {
            w[i * n + j].map_or(Carrier::NEG_INF, |x| Carrier::Num(x as f64))
        })
        .unwrap();
        let terminal = Matrix::from_fn(s, n, 1, |i, _| Carrier::Num(t[i % t.len()] as f64)).unwrap();
        let g = WeightedDigraph::from_matrix(&a).unwrap();
        let bounded = g.max_profit(&terminal, Some(k)).unwrap();
        let unbounded = g.max_profit(&terminal, None).unwrap();
        prop_assert!(bounded.leq(&unbounded).unwrap());
    }

    #[test]
    fn multiplication_is_monotone(
        a in minplus(5),
        extra in prop::collection::vec(prop::option::of(0u8..10), 1..25),
        c in prop::collection::vec(prop::option::of(0u8..10), 1..25),
    ) {
        let bigger = with_extra_arcs(&a, &extra);
        prop_assert!(a.leq(&bigger).unwrap());
        let c = with_extra_arcs(&Matrix::zeros(Instance::MinPlus, a.rows(), a.rows()).unwrap(), &c);
        prop_assert!(mat_mul(&a, &c).unwrap().leq(&mat_mul(&bigger, &c).unwrap()).unwrap());
        prop_assert!(mat_mul(&c, &a).unwrap().leq(&mat_mul(&c, &bigger).unwrap()).unwrap());
    }

    #[test]
    fn real_closure_is_the_geometric_series(v in prop::collection::vec(-1.0f64..1.0, 1..=25)) {
        let n = (v.len() as f64).sqrt() as usize;
        let s = Instance::RealField;
        let mut a = Matrix::from_fn(s, n, n, |i, j| Carrier::Num(v[i * n + j])).unwrap();
        // scale so every absolute row sum is at most one half
        for i in 0..n {
            let sum: f64 = a.row(i).iter().map(|x| x.num().unwrap().abs()).sum();
            if sum > 0.5 {
                for j in 0..n {
                    a.set(i, j, Carrier::Num(a.get(i, j).num().unwrap() * 0.5 / sum));
                }
            }
        }
        let star = mat_closure(&a, ClosureMethod::Escalator).unwrap();
        let mut term = Matrix::identity(s, n).unwrap();
        let mut series = term.clone();
        for _ in 0..80 {
            term = mat_mul(&term, &a).unwrap();
            series = mat_add(&series, &term).unwrap();
        }
        for (x, y) in star.data().iter().zip(series.data()) {
            prop_assert!((x.num().unwrap() - y.num().unwrap()).abs() < 1e-12);
        }
    }
}
