mod common;

use cobex::cochain::{quotient_norm, TableLimits};
use cobex::expansion::{coboundary_expansion, edge_expansion_sets, Budget, ExpansionStatus};
use cobex::filling::{cube_fill, min_fill_oracle, FillStrategy};
use cobex::rational::ratio;
use cobex::{Cochain, Complex, GF2Vector, Label, Rational};
use common::*;
use rand::Rng;

fn solve(x: &Complex, k: usize) -> Option<Rational> {
    let r = coboundary_expansion(x, k, &Budget::default()).unwrap();
    match r.status {
        ExpansionStatus::Exact => r.value,
        ExpansionStatus::UndefinedEmptyDomain => None,
        ExpansionStatus::Bounds => panic!("expected an exact value"),
    }
}

#[test]
fn simplex_values_match_brute_force() {
    for n in 3..=8 {
        let x = Complex::simplex_skeleton(n, 1).unwrap();
        assert_eq!(solve(&x, 0), brute_expansion(&x, 0), "K_{n}");
        assert_eq!(solve(&x, 0), Some(ratio(n.div_ceil(2) as u64, 1)));
    }
    for n in 4..=7 {
        let x = Complex::simplex_skeleton(n, 2).unwrap();
        assert_eq!(solve(&x, 1), brute_expansion(&x, 1), "triangles on {n} vertices");
    }
}

#[test]
fn polytope_values_match_brute_force() {
    for n in 2..=4 {
        let cross = Complex::cross_polytope(n).unwrap();
        assert_eq!(solve(&cross, 0), brute_expansion(&cross, 0));
        let cube = Complex::cube(n).unwrap();
        assert_eq!(solve(&cube, 0), brute_expansion(&cube, 0));
    }
    let cross = Complex::cross_polytope(3).unwrap();
    assert_eq!(solve(&cross, 1), brute_expansion(&cross, 1));
    let cube = Complex::cube(3).unwrap();
    assert_eq!(solve(&cube, 1), brute_expansion(&cube, 1));
    assert_eq!(solve(&cube, 1), Some(ratio(1, 1)));
}

#[test]
fn multipartite_values_match_brute_force() {
    for n in 1..=4 {
        let g = Complex::multipartite(n, 0).unwrap();
        assert_eq!(solve(&g, 0), brute_expansion(&g, 0));
        assert_eq!(edge_expansion_sets(&g).unwrap().value, brute_edge_expansion(&g));
    }
    for n in 1..=2 {
        let x = Complex::multipartite(n, 1).unwrap();
        assert_eq!(solve(&x, 1), brute_expansion(&x, 1));
    }
}

#[test]
fn complete_bipartite_small_cases() {
    let h = |n| solve(&Complex::multipartite(n, 0).unwrap(), 0).unwrap();
    assert_eq!(h(1), ratio(1, 1));
    assert_eq!(h(2), ratio(1, 1));
    assert_eq!(h(3), ratio(5, 3));
}

#[test]
fn quotient_norms_match_exhaustive_minimum() {
    let mut rng = rng(21);
    for _ in 0..60 {
        let x = random_complex(&mut rng, 6, 5, 4);
        for k in 0..=x.top_dim().min(2) {
            let n = x.cell_count(k);
            if n == 0 || n > 14 || (k > 0 && x.cell_count(k - 1) > 16) {
                continue;
            }
            let cells: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.5)).collect();
            let beta = Cochain::from_cells(&x, k, cells.clone()).unwrap();
            let got = quotient_norm(&x, &beta, &TableLimits::default()).unwrap();
            assert_eq!(got as u32, brute_quotient_norm(&x, k, &cells));
        }
    }
}

#[test]
fn min_fill_of_vertex_pairs_is_graph_distance() {
    let q = Complex::cube(4).unwrap();
    for a in 0..16u32 {
        for b in a + 1..16u32 {
            let label = |v: u32| Label::Cube((0..4).map(|i| if v >> i & 1 == 1 { '1' } else { '0' }).collect());
            let z = GF2Vector::from_indices(16, [q.find(0, &label(a)).unwrap(), q.find(0, &label(b)).unwrap()]);
            let oracle = min_fill_oracle(4, 0, &z, &TableLimits::default()).unwrap();
            assert_eq!(oracle as u32, cube_distance(a, b));
            let fill = cube_fill(4, 0, &z, FillStrategy::Exhaustive).unwrap();
            assert_eq!(fill.y.weight() as u32, cube_distance(a, b));
        }
    }
}
