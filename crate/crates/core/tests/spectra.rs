mod common;

use cobex::expansion::Budget;
use cobex::spectral::*;
use cobex::Complex;
use rand::Rng;

fn random_symmetric(rng: &mut rand_chacha::ChaCha8Rng, n: usize) -> SymmetricMatrix {
    let mut m = SymmetricMatrix::zeros(n);
    for i in 0..n {
        for j in i..n {
            m.set(i, j, rng.gen_range(-3.0..3.0));
        }
    }
    m
}

/// Characteristic polynomial coefficients `c` with `det(λI - M) = Σ c[i] λ^(n-i)`
/// by the Faddeev-LeVerrier recursion.
fn char_poly(m: &SymmetricMatrix) -> Vec<f64> {
    let n = m.order();
    let a: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| m.get(i, j)).collect()).collect();
    let mul = |x: &Vec<Vec<f64>>, y: &Vec<Vec<f64>>| -> Vec<Vec<f64>> {
        (0..n).map(|i| (0..n).map(|j| (0..n).map(|k| x[i][k] * y[k][j]).sum()).collect()).collect()
    };
    let mut c = vec![1.0];
    let mut mk: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect();
    for k in 1..=n {
        let am = mul(&a, &mk);
        let ck = -(0..n).map(|i| am[i][i]).sum::<f64>() / k as f64;
        c.push(ck);
        mk = am;
        for i in 0..n {
            mk[i][i] += ck;
        }
    }
    c
}

/// Closed-form eigenvalues for orders 2 and 3.
fn closed_form(m: &SymmetricMatrix) -> Vec<f64> {
    let mut v = match m.order() {
        2 => {
            let (a, b, d) = (m.get(0, 0), m.get(0, 1), m.get(1, 1));
            let r = (((a - d) / 2.0).powi(2) + b * b).sqrt();
            vec![(a + d) / 2.0 - r, (a + d) / 2.0 + r]
        }
        3 => {
            let q = (m.get(0, 0) + m.get(1, 1) + m.get(2, 2)) / 3.0;
            let off = m.get(0, 1).powi(2) + m.get(0, 2).powi(2) + m.get(1, 2).powi(2);
            let p = (((0..3).map(|i| (m.get(i, i) - q).powi(2)).sum::<f64>() + 2.0 * off) / 6.0).sqrt();
            let b = |i: usize, j: usize| (m.get(i, j) - if i == j { q } else { 0.0 }) / p;
            let det = b(0, 0) * (b(1, 1) * b(2, 2) - b(1, 2) * b(2, 1)) - b(0, 1) * (b(1, 0) * b(2, 2) - b(1, 2) * b(2, 0))
                + b(0, 2) * (b(1, 0) * b(2, 1) - b(1, 1) * b(2, 0));
            let phi = (det / 2.0).clamp(-1.0, 1.0).acos() / 3.0;
            let e1 = q + 2.0 * p * phi.cos();
            let e3 = q + 2.0 * p * (phi + 2.0 * std::f64::consts::PI / 3.0).cos();
            vec![e1, 3.0 * q - e1 - e3, e3]
        }
        _ => unreachable!(),
    };
    v.sort_by(f64::total_cmp);
    v
}

#[test]
fn jacobi_matches_characteristic_polynomial() {
    let mut rng = common::rng(3);
    for _ in 0..200 {
        for n in 2..=4 {
            let m = random_symmetric(&mut rng, n);
            let values = eigenvalues_sym(&m, EIGEN_TOL).unwrap();
            if n <= 3 {
                for (a, b) in values.iter().zip(closed_form(&m)) {
                    assert!((a - b).abs() < 1e-8, "{values:?}");
                }
            }
            // the polynomial with the computed roots has the same coefficients
            let mut from_roots = vec![1.0];
            for &r in &values {
                let mut next = from_roots.clone();
                next.push(0.0);
                for i in 1..next.len() {
                    next[i] -= r * from_roots[i - 1];
                }
                from_roots = next;
            }
            for (a, b) in from_roots.iter().zip(char_poly(&m)) {
                assert!((a - b).abs() < 1e-8 * (1.0 + b.abs()), "{from_roots:?}");
            }
        }
    }
}

#[test]
fn laplacian_spectra_are_nonnegative_with_constant_kernel() {
    let mut rng = common::rng(8);
    for _ in 0..50 {
        let n = rng.gen_range(2..12);
        let g = common::random_graph(&mut rng, n, 0.5);
        let e = eigen_sym(&graph_laplacian(&g), EIGEN_TOL).unwrap();
        assert!(e.values.iter().all(|&v| v >= -1e-9));
        assert!(e.values[0].abs() < 1e-9);
        let connected = cobex::cochain::cohomology_dim(&g, 0).unwrap() == 0;
        if connected {
            let v0 = &e.vectors[0];
            assert!(v0.iter().all(|x| (x - v0[0]).abs() < 1e-8));
        }
    }
}

#[test]
fn sandwich_on_random_graphs() {
    let mut rng = common::rng(12);
    for _ in 0..100 {
        let n = rng.gen_range(2..=10);
        let p = rng.gen_range(0.2..0.9);
        let g = common::random_graph(&mut rng, n, p);
        let r = cheeger_buser_check(&g, &Budget::default()).unwrap();
        assert!(r.holds(), "{r:?}");
        if r.lambda1 > COMPARE_TOL {
            let p = real_expansion_probe(&g, 20, 1).unwrap();
            assert!(p.eigenvector_matches && p.probes_above, "{p:?}");
        }
    }
}

#[test]
fn up_down_gap_is_zero_with_cohomology() {
    let octahedron = Complex::cross_polytope(3).unwrap();
    assert!(up_down_laplacian_gap(&octahedron, 2).is_ok());
    let hollow = Complex::simplex_skeleton(5, 2).unwrap().delete_cells(2, &[0, 1, 2, 3, 4, 5]).unwrap();
    let dim = cobex::cochain::cohomology_dim(&hollow, 1).unwrap();
    let r = up_down_laplacian_gap(&hollow, 1).unwrap();
    assert_eq!(dim > 0, r.gap.abs() < 1e-8);
}
