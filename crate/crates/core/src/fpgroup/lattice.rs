//! Integer row lattices in Hermite normal form.

use serde::Serialize;

/// A sublattice of `Z^n` stored as the nonzero rows of its row-style Hermite
/// normal form: pivots strictly move right, pivot entries are positive and
/// entries above a pivot lie in `[0, pivot)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HermiteLattice {
    dim: usize,
    rows: Vec<Vec<i64>>,
    pivots: Vec<usize>,
}

impl HermiteLattice {
    pub fn from_generators(dim: usize, generators: &[Vec<i64>]) -> HermiteLattice {
        let mut m: Vec<Vec<i64>> = generators
            .iter()
            .filter(|r| r.iter().any(|&x| x != 0))
            .cloned()
            .collect();
        for r in &m {
            assert_eq!(r.len(), dim, "generator dimension mismatch");
        }
        let mut rows: Vec<Vec<i64>> = Vec::new();
        let mut pivots = Vec::new();
        for col in 0..dim {
            // Euclid on column `col` across the remaining rows.
            loop {
                let nz: Vec<usize> = (0..m.len()).filter(|&i| m[i][col] != 0).collect();
                if nz.len() <= 1 {
                    break;
                }
                let best = *nz.iter().min_by_key(|&&i| m[i][col].abs()).unwrap();
                let p = m[best][col];
                for &i in &nz {
                    if i != best {
                        let q = m[i][col].div_euclid(p);
                        let src = m[best].clone();
                        for (x, y) in m[i].iter_mut().zip(&src) {
                            *x -= q * y;
                        }
                    }
                }
            }
            if let Some(i) = (0..m.len()).find(|&i| m[i][col] != 0) {
                let mut row = m.swap_remove(i);
                if row[col] < 0 {
                    row.iter_mut().for_each(|x| *x = -*x);
                }
                rows.push(row);
                pivots.push(col);
            }
            m.retain(|r| r.iter().any(|&x| x != 0));
        }
        // Reduce above each pivot.
        for k in 0..rows.len() {
            let (p, d) = (pivots[k], rows[k][pivots[k]]);
            for j in 0..k {
                let q = rows[j][p].div_euclid(d);
                if q != 0 {
                    let src = rows[k].clone();
                    for (x, y) in rows[j].iter_mut().zip(&src) {
                        *x -= q * y;
                    }
                }
            }
        }
        HermiteLattice { dim, rows, pivots }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.rows
    }

    /// Canonical representative of `v + L`.
    pub fn reduce(&self, v: &[i64]) -> Vec<i64> {
        let mut v = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let q = v[p].div_euclid(row[p]);
            if q != 0 {
                for (x, y) in v.iter_mut().zip(row) {
                    *x -= q * y;
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[i64]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_relator_lattice() {
        let l = HermiteLattice::from_generators(3, &[vec![0, 0, 2]]);
        assert!(l.contains(&[0, 0, 2]));
        assert!(!l.contains(&[0, 0, 1]));
        assert_eq!(l.reduce(&[1, -1, 5]), vec![1, -1, 1]);
    }

    #[test]
    fn reduction_is_canonical() {
        let l = HermiteLattice::from_generators(2, &[vec![2, 4], vec![6, 3]]);
        // Same coset, same representative.
        let a = l.reduce(&[1, 1]);
        let b = l.reduce(&[1 + 2 + 6, 1 + 4 + 3]);
        assert_eq!(a, b);
        assert!(l.contains(&[8, 7]));
        // det = |2*3 - 4*6| = 18
        let d: i64 = l.rows().iter().enumerate().map(|(i, r)| r[i]).product();
        assert_eq!(d, 18);
    }

    #[test]
    fn empty_lattice_is_identity() {
        let l = HermiteLattice::from_generators(2, &[]);
        assert_eq!(l.reduce(&[3, -4]), vec![3, -4]);
    }
}
