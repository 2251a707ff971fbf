use super::GF2Vector;

const NO_PIVOT: u32 = u32::MAX;

/// Incremental row-echelon form. Each stored row's pivot is its lowest set bit.
#[derive(Clone, Debug)]
pub struct Echelon {
    len: usize,
    rows: Vec<GF2Vector>,
    pivot_row: Vec<u32>,
}

impl Echelon {
    pub fn new(len: usize) -> Self {
        Self { len, rows: Vec::new(), pivot_row: vec![NO_PIVOT; len] }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the stored rows and keeps the remainder if non-zero.
    /// Returns whether the rank grew.
    pub fn insert(&mut self, mut v: GF2Vector) -> bool {
        assert_eq!(v.len(), self.len, "length mismatch");
        let mut word = 0;
        while let Some(p) = v.first_one_from_word(word) {
            word = p / 64;
            match self.pivot_row[p] {
                NO_PIVOT => {
                    self.pivot_row[p] = self.rows.len() as u32;
                    self.rows.push(v);
                    return true;
                }
                r => v.xor_from(&self.rows[r as usize], word),
            }
        }
        false
    }

    /// Whether `v` lies in the span of the inserted rows.
    pub fn contains(&self, v: &GF2Vector) -> bool {
        let mut v = v.clone();
        let mut word = 0;
        while let Some(p) = v.first_one_from_word(word) {
            word = p / 64;
            match self.pivot_row[p] {
                NO_PIVOT => return false,
                r => v.xor_from(&self.rows[r as usize], word),
            }
        }
        true
    }

    /// Canonical reduced row-echelon basis of the span.
    pub fn into_basis(self) -> Basis {
        let mut pairs: Vec<(usize, GF2Vector)> =
            self.rows.into_iter().map(|r| (r.first_one().expect("stored rows are non-zero"), r)).collect();
        pairs.sort_by_key(|(p, _)| *p);
        for i in (0..pairs.len()).rev() {
            let (p, row) = (pairs[i].0, pairs[i].1.clone());
            for pair in pairs[..i].iter_mut() {
                if pair.1.get(p) {
                    pair.1.xor_assign(&row);
                }
            }
        }
        let (pivots, vectors) = pairs.into_iter().unzip();
        Basis { len: self.len, vectors, pivots }
    }
}

/// A subspace of GF(2)^len held in reduced row-echelon form, so that two
/// bases of the same subspace compare equal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Basis {
    len: usize,
    vectors: Vec<GF2Vector>,
    pivots: Vec<usize>,
}

impl Basis {
    pub fn empty(len: usize) -> Self {
        Self { len, vectors: Vec::new(), pivots: Vec::new() }
    }

    pub fn from_vectors<I: IntoIterator<Item = GF2Vector>>(len: usize, vectors: I) -> Self {
        let mut e = Echelon::new(len);
        for v in vectors {
            e.insert(v);
        }
        e.into_basis()
    }

    /// Ambient length.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn vectors(&self) -> &[GF2Vector] {
        &self.vectors
    }

    pub fn pivot_columns(&self) -> &[usize] {
        &self.pivots
    }

    /// Coordinates that are not pivots, ascending. Their unit vectors span a
    /// complement of the subspace.
    pub fn complement_columns(&self) -> Vec<usize> {
        let mut is_pivot = vec![false; self.len];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.len).filter(|&i| !is_pivot[i]).collect()
    }

    /// Clears every pivot coordinate of `v` by adding basis vectors. The result
    /// is the canonical representative of `v`'s coset, supported on the
    /// complement columns.
    pub fn reduce(&self, v: &GF2Vector) -> GF2Vector {
        assert_eq!(v.len(), self.len, "length mismatch");
        let mut r = v.clone();
        for (b, &p) in self.vectors.iter().zip(&self.pivots) {
            if r.get(p) {
                r.xor_assign(b);
            }
        }
        r
    }

    pub fn contains(&self, v: &GF2Vector) -> bool {
        self.reduce(v).is_zero()
    }

    /// Every element of the subspace (2^dim of them). Only for small dimensions.
    pub fn span(&self) -> Vec<GF2Vector> {
        assert!(self.dim() < 32, "span of dimension {} is too large", self.dim());
        let mut out = Vec::with_capacity(1 << self.dim());
        let mut cur = GF2Vector::zeros(self.len);
        out.push(cur.clone());
        for t in 1u64..(1 << self.dim()) {
            cur.xor_assign(&self.vectors[t.trailing_zeros() as usize]);
            out.push(cur.clone());
        }
        out
    }
}
