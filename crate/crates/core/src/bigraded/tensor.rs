use super::coeff::Coeff;

/// Dense tensor with exact entries, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tensor {
    pub shape: Vec<usize>,
    pub data: Vec<Coeff>,
}

impl Tensor {
    pub fn zeros(shape: Vec<usize>) -> Self {
        let len = shape.iter().product();
        Tensor {
            shape,
            data: vec![Coeff::zero(); len],
        }
    }

    pub fn rank(&self) -> usize {
        self.shape.len()
    }

    fn offset(&self, idx: &[usize]) -> usize {
        assert_eq!(idx.len(), self.shape.len(), "tensor index rank");
        idx.iter().zip(&self.shape).fold(0, |acc, (&i, &n)| {
            assert!(i < n, "tensor index out of range");
            acc * n + i
        })
    }

    pub fn get(&self, idx: &[usize]) -> &Coeff {
        &self.data[self.offset(idx)]
    }

    pub fn set(&mut self, idx: &[usize], c: Coeff) {
        let o = self.offset(idx);
        self.data[o] = c;
    }

    /// All index tuples in row-major order.
    pub fn indices(&self) -> Vec<Vec<usize>> {
        let mut out = vec![vec![]];
        for &n in &self.shape {
            out = out.into_iter().flat_map(|p| (0..n).map(move |i| [p.clone(), vec![i]].concat())).collect();
        }
        out
    }

    /// Levi-Civita symbol of rank `n` in dimension `n`.
    pub fn epsilon(n: usize) -> Self {
        let mut t = Tensor::zeros(vec![n; n]);
        for idx in t.indices() {
            if let Some(s) = perm_sign(&idx) {
                t.set(&idx, Coeff::int(s));
            }
        }
        t
    }

    /// Sets `c` on `idx` and `sign(π)·c` on every permutation `π(idx)`.
    pub fn set_antisymmetric(&mut self, idx: &[usize], c: Coeff) {
        for (perm, s) in permutations(idx.len()) {
            let p: Vec<usize> = perm.iter().map(|&k| idx[k]).collect();
            self.set(&p, if s > 0 { c.clone() } else { -&c });
        }
    }

    /// First index tuple violating antisymmetry under a transposition of adjacent slots.
    pub fn antisymmetry_violation(&self) -> Option<Vec<usize>> {
        for idx in self.indices() {
            for k in 0..idx.len().saturating_sub(1) {
                let mut sw = idx.clone();
                sw.swap(k, k + 1);
                if *self.get(&sw) != -self.get(&idx) {
                    return Some(idx);
                }
            }
        }
        None
    }
}

/// Sign of `idx` as a permutation of distinct values, `None` with repeats.
pub fn perm_sign(idx: &[usize]) -> Option<i64> {
    let mut v = idx.to_vec();
    let mut s = 1;
    for i in 0..v.len() {
        for j in 0..v.len() - 1 - i {
            if v[j] == v[j + 1] {
                return None;
            }
            if v[j] > v[j + 1] {
                v.swap(j, j + 1);
                s = -s;
            }
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some(s)
}

/// Permutations of `0..k` with their signs.
pub fn permutations(k: usize) -> Vec<(Vec<usize>, i64)> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = Vec::new();
    fn rec(k: usize, cur: &mut Vec<usize>, out: &mut Vec<(Vec<usize>, i64)>) {
        if cur.len() == k {
            out.push((cur.clone(), perm_sign(cur).expect("distinct")));
            return;
        }
        for i in 0..k {
            if !cur.contains(&i) {
                cur.push(i);
                rec(k, cur, out);
                cur.pop();
            }
        }
    }
    rec(k, &mut cur, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn epsilon_is_antisymmetric() {
        let e = Tensor::epsilon(3);
        assert_eq!(*e.get(&[0, 1, 2]), Coeff::one());
        assert_eq!(*e.get(&[1, 0, 2]), Coeff::int(-1));
        assert!(e.antisymmetry_violation().is_none());
        let mut t = Tensor::zeros(vec![2, 2]);
        t.set(&[0, 1], Coeff::one());
        assert_eq!(t.antisymmetry_violation(), Some(vec![0, 1]));
        assert_eq!(permutations(3).len(), 6);
    }
}
