use super::GF2Vector;

/// Yields every vector of the given length with weight 0, 1, ..., `w_max`,
/// each exactly once. Within a weight class the supports appear in
/// lexicographic order, so `(3, 1)` gives `000, 100, 010, 001`.
pub fn enumerate_by_weight(length: usize, w_max: usize) -> WeightEnumerator {
    WeightEnumerator { length, w_max: w_max.min(length), combo: Vec::new(), done: false }
}

#[derive(Clone, Debug)]
pub struct WeightEnumerator {
    length: usize,
    w_max: usize,
    combo: Vec<usize>,
    done: bool,
}

impl WeightEnumerator {
    fn advance(&mut self) {
        let w = self.combo.len();
        // rightmost position that can still move right
        let mut i = w;
        while i > 0 {
            i -= 1;
            if self.combo[i] < self.length - (w - i) {
                self.combo[i] += 1;
                for j in i + 1..w {
                    self.combo[j] = self.combo[j - 1] + 1;
                }
                return;
            }
        }
        if w == self.w_max {
            self.done = true;
        } else {
            self.combo = (0..=w).collect();
        }
    }
}

impl Iterator for WeightEnumerator {
    type Item = GF2Vector;

    fn next(&mut self) -> Option<GF2Vector> {
        if self.done {
            return None;
        }
        let out = GF2Vector::from_indices(self.length, self.combo.iter().copied());
        self.advance();
        Some(out)
    }
}
