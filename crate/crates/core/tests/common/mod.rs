//! Brute-force reference computations that share no code with the solver
//! beyond reading boundary lists.

#![allow(dead_code)]

use cobex::rational::ratio;
use cobex::{Complex, Rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;

/// Bit masks of the k-cells in the boundary of each (k+1)-cell.
fn boundary_masks(x: &Complex, k: usize) -> Vec<u64> {
    if k >= x.top_dim() {
        return Vec::new();
    }
    x.boundaries(k + 1).iter().map(|b| b.iter().fold(0u64, |m, &f| m ^ 1 << f)).collect()
}

/// Generators of the coboundaries in `C^k`, reduced convention.
fn coboundary_generators(x: &Complex, k: usize) -> Vec<u64> {
    let n = x.cell_count(k);
    if k == 0 {
        return if n == 0 { Vec::new() } else { vec![full(n)] };
    }
    let mut gens = vec![0u64; x.cell_count(k - 1)];
    for (c, faces) in x.boundaries(k).iter().enumerate() {
        for &f in faces {
            gens[f as usize] ^= 1 << c;
        }
    }
    gens
}

fn full(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

fn coboundary_norm(masks: &[u64], beta: u64) -> u32 {
    masks.iter().filter(|&&m| (m & beta).count_ones() % 2 == 1).count() as u32
}

/// Every element of the span of `gens`.
fn span(gens: &[u64]) -> Vec<u64> {
    let mut set: BTreeSet<u64> = BTreeSet::from([0]);
    for &g in gens {
        let add: Vec<u64> = set.iter().map(|s| s ^ g).collect();
        set.extend(add);
    }
    set.into_iter().collect()
}

/// `min ‖β + dα‖` by trying every `α` in `C^(k-1)`.
pub fn brute_quotient_norm(x: &Complex, k: usize, beta: &[usize]) -> u32 {
    let b = beta.iter().fold(0u64, |m, &c| m ^ 1 << c);
    if k == 0 {
        let w = b.count_ones();
        return w.min(x.cell_count(0) as u32 - w);
    }
    let gens = coboundary_generators(x, k);
    let mut best = u32::MAX;
    for alpha in 0u64..1 << gens.len() {
        let mut v = b;
        for (i, g) in gens.iter().enumerate() {
            if alpha >> i & 1 == 1 {
                v ^= g;
            }
        }
        best = best.min(v.count_ones());
    }
    best
}

/// Exact `h^k` by visiting every k-cochain, for `|X^(k)| <= 30`. Each cochain
/// is keyed by its coset through a fully reduced echelon form of the
/// coboundary space; the lightest vector seen in each coset is its norm.
pub fn brute_expansion(x: &Complex, k: usize) -> Option<Rational> {
    let n = x.cell_count(k);
    assert!(n <= 30, "oracle limited to 30 cells");
    let masks = boundary_masks(x, k);
    let mut rows: Vec<u64> = Vec::new();
    for mut g in coboundary_generators(x, k) {
        for &r in &rows {
            if g & (1 << (63 - r.leading_zeros())) != 0 {
                g ^= r;
            }
        }
        if g != 0 {
            let p = 1 << (63 - g.leading_zeros());
            for r in rows.iter_mut() {
                if *r & p != 0 {
                    *r ^= g;
                }
            }
            rows.push(g);
        }
    }
    let pivots: u64 = rows.iter().fold(0, |m, r| m | 1 << (63 - r.leading_zeros()));
    let free: Vec<usize> = (0..n).filter(|&i| pivots >> i & 1 == 0).collect();
    if free.is_empty() {
        return None;
    }
    let compress = |v: u64| -> usize { free.iter().enumerate().fold(0, |s, (j, &i)| s | ((v >> i & 1) as usize) << j) };
    let reduce = |mut v: u64| -> u64 {
        for &r in &rows {
            if v & (1 << (63 - r.leading_zeros())) != 0 {
                v ^= r;
            }
        }
        v
    };
    let unit_keys: Vec<usize> = (0..n).map(|i| compress(reduce(1 << i))).collect();
    let cosets = 1usize << free.len();
    let mut weight = vec![u8::MAX; cosets];
    let mut dnorm = vec![u32::MAX; cosets];
    let (mut beta, mut key) = (0u64, 0usize);
    for t in 0u64..1 << n {
        if t > 0 {
            let g = t.trailing_zeros() as usize;
            beta ^= 1 << g;
            key ^= unit_keys[g];
        }
        weight[key] = weight[key].min(beta.count_ones() as u8);
        if dnorm[key] == u32::MAX {
            dnorm[key] = coboundary_norm(&masks, beta);
        }
    }
    (1..cosets).map(|s| ratio(dnorm[s] as u64, weight[s] as u64)).min()
}

/// Exact edge expansion by evaluating every vertex subset directly.
pub fn brute_edge_expansion(g: &Complex) -> Option<Rational> {
    let n = g.cell_count(0);
    let edges: Vec<(u32, u32)> =
        if g.top_dim() >= 1 { g.boundaries(1).iter().map(|b| (b[0], b[1])).collect() } else { Vec::new() };
    (1u32..(1 << n) - 1)
        .map(|a| {
            let cut = edges.iter().filter(|&&(u, v)| (a >> u & 1) != (a >> v & 1)).count() as u64;
            let size = a.count_ones() as u64;
            ratio(cut, size.min(n as u64 - size))
        })
        .min()
}

/// Shortest-path distance between two vertices of the cube graph `Q_n`.
pub fn cube_distance(a: u32, b: u32) -> u32 {
    (a ^ b).count_ones()
}

/// A random simplicial complex spanned by `faces` random vertex sets.
pub fn random_complex(rng: &mut ChaCha8Rng, vertices: u32, faces: usize, max_size: usize) -> Complex {
    let mut maximal: Vec<Vec<u32>> = (1..=vertices).map(|v| vec![v]).collect();
    for _ in 0..faces {
        let size = rng.gen_range(2..=max_size.min(vertices as usize));
        let mut f: Vec<u32> = Vec::new();
        while f.len() < size {
            let v = rng.gen_range(1..=vertices);
            if !f.contains(&v) {
                f.push(v);
            }
        }
        maximal.push(f);
    }
    Complex::from_maximal_faces(&maximal).unwrap()
}

/// A random graph on `n` vertices, each edge present with probability `p`.
pub fn random_graph(rng: &mut ChaCha8Rng, n: u32, p: f64) -> Complex {
    let mut faces: Vec<Vec<u32>> = (1..=n).map(|v| vec![v]).collect();
    for u in 1..=n {
        for v in u + 1..=n {
            if rng.gen::<f64>() < p {
                faces.push(vec![u, v]);
            }
        }
    }
    Complex::from_maximal_faces(&faces).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
