//! Generators for the standard families: simplices, cubes, cross-polytopes,
//! complete multipartite complexes and simplicial joins.

use std::collections::{BTreeSet, HashMap};

use super::{Complex, Label, LabelKind};
use crate::error::{invalid, CobexError, Result};

/// All `size`-subsets of `0..n` in lexicographic order.
pub(crate) fn combinations(n: usize, size: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if size > n {
        return out;
    }
    let mut c: Vec<usize> = (0..size).collect();
    loop {
        out.push(c.clone());
        let mut i = size;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if c[i] < n - (size - i) {
                c[i] += 1;
                for j in i + 1..size {
                    c[j] = c[j - 1] + 1;
                }
                break;
            }
        }
    }
}

impl Complex {
    /// Simplicial complex from simplices grouped by dimension. Each group must
    /// be closed under taking faces (relative to the group below); groups are
    /// sorted here.
    fn from_simplex_groups(mut groups: Vec<Vec<Vec<u32>>>) -> Complex {
        for g in groups.iter_mut() {
            g.sort();
            g.dedup();
        }
        let mut boundary: Vec<Vec<Vec<u32>>> = vec![vec![Vec::new(); groups[0].len()]];
        for d in 1..groups.len() {
            let lookup: HashMap<&[u32], u32> =
                groups[d - 1].iter().enumerate().map(|(i, s)| (s.as_slice(), i as u32)).collect();
            let mut face = Vec::with_capacity(d);
            let lists = groups[d]
                .iter()
                .map(|s| {
                    let mut b: Vec<u32> = (0..s.len())
                        .map(|drop| {
                            face.clear();
                            face.extend(s.iter().enumerate().filter(|&(i, _)| i != drop).map(|(_, &v)| v));
                            lookup[face.as_slice()]
                        })
                        .collect();
                    b.sort_unstable();
                    b
                })
                .collect();
            boundary.push(lists);
        }
        let labels = groups.into_iter().map(|g| g.into_iter().map(Label::Simplex).collect()).collect();
        Complex::assemble(LabelKind::Simplicial, labels, boundary)
    }

    /// Downward closure of the given simplices (vertex ids, any order).
    pub fn from_maximal_faces(faces: &[Vec<u32>]) -> Result<Complex> {
        let mut all: BTreeSet<Vec<u32>> = BTreeSet::new();
        for f in faces {
            let mut s = f.clone();
            s.sort_unstable();
            if s.is_empty() || s.windows(2).any(|w| w[0] == w[1]) {
                return Err(CobexError::MalformedComplex(format!("bad face {f:?}")));
            }
            if s.len() > 24 {
                return Err(invalid(format!("face {f:?} is too large")));
            }
            for mask in 1u32..(1 << s.len()) {
                all.insert(s.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &v)| v).collect());
            }
        }
        if all.is_empty() {
            return Err(CobexError::MalformedComplex("no faces".into()));
        }
        let top = all.iter().map(Vec::len).max().unwrap() - 1;
        let mut groups = vec![Vec::new(); top + 1];
        for s in all {
            groups[s.len() - 1].push(s);
        }
        Ok(Self::from_simplex_groups(groups))
    }

    /// The `d`-skeleton of the simplex on vertices `1..=n`.
    pub fn simplex_skeleton(n: usize, d: usize) -> Result<Complex> {
        if n == 0 || d >= n {
            return Err(invalid(format!("simplex skeleton needs 0 <= d <= n - 1, got n = {n}, d = {d}")));
        }
        let groups = (0..=d)
            .map(|j| combinations(n, j + 1).into_iter().map(|c| c.iter().map(|&v| v as u32 + 1).collect()).collect())
            .collect();
        Ok(Self::from_simplex_groups(groups))
    }

    /// `n` isolated vertices.
    pub fn discrete(n: usize) -> Result<Complex> {
        Self::simplex_skeleton(n, 0)
    }

    /// The `n`-dimensional cube with all of its faces. A `j`-cell is a string
    /// over `{0,1,*}` with exactly `j` stars.
    pub fn cube(n: usize) -> Result<Complex> {
        if n == 0 {
            return Err(invalid("cube dimension must be at least 1"));
        }
        if n > 16 {
            return Err(invalid(format!("cube dimension {n} is too large")));
        }
        let mut groups: Vec<Vec<String>> = vec![Vec::new(); n + 1];
        let total = 3usize.pow(n as u32);
        for mut t in 0..total {
            let mut s = String::with_capacity(n);
            let mut stars = 0;
            for _ in 0..n {
                s.push(match t % 3 {
                    0 => '0',
                    1 => '1',
                    _ => {
                        stars += 1;
                        '*'
                    }
                });
                t /= 3;
            }
            groups[stars].push(s);
        }
        for g in groups.iter_mut() {
            g.sort();
        }
        let mut boundary: Vec<Vec<Vec<u32>>> = vec![vec![Vec::new(); groups[0].len()]];
        for j in 1..=n {
            let lookup: HashMap<&str, u32> = groups[j - 1].iter().enumerate().map(|(i, s)| (s.as_str(), i as u32)).collect();
            let lists = groups[j]
                .iter()
                .map(|s| {
                    let mut b = Vec::with_capacity(2 * j);
                    for (pos, c) in s.char_indices() {
                        if c == '*' {
                            for v in ['0', '1'] {
                                let mut f = s.clone();
                                f.replace_range(pos..pos + 1, &v.to_string());
                                b.push(lookup[f.as_str()]);
                            }
                        }
                    }
                    b.sort_unstable();
                    b
                })
                .collect();
            boundary.push(lists);
        }
        let labels = groups.into_iter().map(|g| g.into_iter().map(Label::Cube).collect()).collect();
        Ok(Complex::assemble(LabelKind::Cube, labels, boundary))
    }

    /// Boundary complex of the `n`-dimensional cross-polytope. A `k`-cell is a
    /// set of `k + 1` signed unit vectors `±e_i` with distinct `i`.
    pub fn cross_polytope(n: usize) -> Result<Complex> {
        if n == 0 {
            return Err(invalid("cross-polytope dimension must be at least 1"));
        }
        if n > 12 {
            return Err(invalid(format!("cross-polytope dimension {n} is too large")));
        }
        let mut groups: Vec<Vec<Vec<i32>>> = Vec::with_capacity(n);
        for k in 0..n {
            let mut g = Vec::new();
            for coords in combinations(n, k + 1) {
                for signs in 0u32..(1 << (k + 1)) {
                    g.push(
                        coords
                            .iter()
                            .enumerate()
                            .map(|(t, &i)| if signs >> t & 1 == 0 { i as i32 + 1 } else { -(i as i32 + 1) })
                            .collect::<Vec<i32>>(),
                    );
                }
            }
            g.sort();
            groups.push(g);
        }
        let mut boundary: Vec<Vec<Vec<u32>>> = vec![vec![Vec::new(); groups[0].len()]];
        for k in 1..n {
            let lookup: HashMap<&[i32], u32> =
                groups[k - 1].iter().enumerate().map(|(i, s)| (s.as_slice(), i as u32)).collect();
            let lists = groups[k]
                .iter()
                .map(|s| {
                    let mut b: Vec<u32> = (0..s.len())
                        .map(|drop| {
                            let f: Vec<i32> = s.iter().enumerate().filter(|&(i, _)| i != drop).map(|(_, &c)| c).collect();
                            lookup[f.as_slice()]
                        })
                        .collect();
                    b.sort_unstable();
                    b
                })
                .collect();
            boundary.push(lists);
        }
        let labels = groups.into_iter().map(|g| g.into_iter().map(Label::Signed).collect()).collect();
        Ok(Complex::assemble(LabelKind::Cross, labels, boundary))
    }

    /// Join of `k + 2` copies of an `n`-point set. Part `p` holds vertices
    /// `p*n + 1 ..= p*n + n`; the top dimension is `k + 1`.
    pub fn multipartite(n: usize, k: usize) -> Result<Complex> {
        if n == 0 {
            return Err(invalid("part size must be at least 1"));
        }
        let parts = k + 2;
        let top_count = (n as u128).checked_pow(parts as u32).unwrap_or(u128::MAX);
        if top_count > 5_000_000 {
            return Err(invalid(format!("multipartite complex with n = {n}, k = {k} is too large")));
        }
        let mut groups: Vec<Vec<Vec<u32>>> = vec![Vec::new(); parts];
        for chosen in 1usize..(1 << parts) {
            let ps: Vec<usize> = (0..parts).filter(|p| chosen >> p & 1 == 1).collect();
            let mut digits = vec![0usize; ps.len()];
            loop {
                groups[ps.len() - 1].push(ps.iter().zip(&digits).map(|(&p, &i)| (p * n + i + 1) as u32).collect());
                let mut t = 0;
                while t < digits.len() {
                    digits[t] += 1;
                    if digits[t] < n {
                        break;
                    }
                    digits[t] = 0;
                    t += 1;
                }
                if t == digits.len() {
                    break;
                }
            }
        }
        Ok(Self::from_simplex_groups(groups))
    }

    /// Simplicial join. Vertices of `other` are shifted past the largest
    /// vertex of `self`.
    pub fn join(&self, other: &Complex) -> Result<Complex> {
        if !self.is_simplicial() || !other.is_simplicial() {
            return Err(CobexError::UnsupportedOperation("join needs two simplicial complexes".into()));
        }
        let offset = self.labels[0].iter().filter_map(|l| l.vertices()).flatten().copied().max().unwrap_or(0);
        let left: Vec<&[u32]> = self.labels.iter().flatten().filter_map(Label::vertices).collect();
        let right: Vec<Vec<u32>> = other
            .labels
            .iter()
            .flatten()
            .filter_map(Label::vertices)
            .map(|s| s.iter().map(|v| v + offset).collect())
            .collect();
        let top = self.top_dim() + other.top_dim() + 1;
        let mut groups: Vec<Vec<Vec<u32>>> = vec![Vec::new(); top + 1];
        for s in &left {
            groups[s.len() - 1].push(s.to_vec());
        }
        for t in &right {
            groups[t.len() - 1].push(t.clone());
        }
        for s in &left {
            for t in &right {
                let mut u = s.to_vec();
                u.extend_from_slice(t);
                groups[u.len() - 1].push(u);
            }
        }
        while groups.len() > 1 && groups.last().is_some_and(Vec::is_empty) {
            groups.pop();
        }
        Ok(Self::from_simplex_groups(groups))
    }
}
