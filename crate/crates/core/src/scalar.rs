use std::fmt::Debug;

use num_traits::Num;

/// Scalar used for consistency weights and order scores.
///
/// Implemented for every copyable numeric type with a partial order:
/// `i64` numerators, `Ratio<i64>`, `f64` and `f32`. Ties are decided by
/// `==`, so exact types give exact tie detection.
pub trait Weight: Num + Copy + PartialOrd + Debug + Send + Sync + 'static {}

impl<T> Weight for T where T: Num + Copy + PartialOrd + Debug + Send + Sync + 'static {}

/// Dense square matrix of directed weights with an absent diagonal.
///
/// `get(i, j)` is the weight of `i -> j`. Off-diagonal cells may be missing
/// while a matrix is being filled; graph construction requires them all.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightMatrix<W> {
    n: usize,
    cells: Vec<Option<W>>,
}

impl<W: Weight> WeightMatrix<W> {
    pub fn empty(n: usize) -> Self {
        Self {
            n,
            cells: vec![None; n * n],
        }
    }

    /// Builds from rows, ignoring whatever the diagonal holds.
    pub fn from_rows(rows: Vec<Vec<Option<W>>>) -> Self {
        let n = rows.len();
        let mut m = Self::empty(n);
        for (i, row) in rows.into_iter().enumerate() {
            assert_eq!(row.len(), n, "weight matrix must be square");
            for (j, cell) in row.into_iter().enumerate() {
                if i != j {
                    m.cells[i * n + j] = cell;
                }
            }
        }
        m
    }

    /// Builds a complete matrix from a closure over off-diagonal pairs.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> W) -> Self {
        let mut m = Self::empty(n);
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    m.cells[i * n + j] = Some(f(i, j));
                }
            }
        }
        m
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn get(&self, i: usize, j: usize) -> Option<W> {
        if i == j {
            None
        } else {
            self.cells[i * self.n + j]
        }
    }

    pub fn set(&mut self, i: usize, j: usize, w: W) {
        assert_ne!(i, j, "diagonal cells are undefined");
        self.cells[i * self.n + j] = Some(w);
    }

    /// First missing off-diagonal cell in row-major order, if any.
    pub fn first_missing(&self) -> Option<(usize, usize)> {
        (0..self.n)
            .flat_map(|i| (0..self.n).map(move |j| (i, j)))
            .find(|&(i, j)| i != j && self.cells[i * self.n + j].is_none())
    }

    /// Weight of `i -> j`, panicking on a missing cell.
    pub(crate) fn at(&self, i: usize, j: usize) -> W {
        self.get(i, j)
            .unwrap_or_else(|| panic!("missing weight for pair ({i}, {j})"))
    }

    /// Matrix restricted to `keep`, in the given order.
    pub fn submatrix(&self, keep: &[usize]) -> Self {
        let mut m = Self::empty(keep.len());
        for (a, &i) in keep.iter().enumerate() {
            for (b, &j) in keep.iter().enumerate() {
                if a != b {
                    m.cells[a * keep.len() + b] = self.get(i, j);
                }
            }
        }
        m
    }

    pub fn map<V: Weight>(&self, mut f: impl FnMut(W) -> V) -> WeightMatrix<V> {
        WeightMatrix {
            n: self.n,
            cells: self.cells.iter().map(|c| c.map(&mut f)).collect(),
        }
    }

    /// Total weight of the tournament induced by `order`: the sum of
    /// `w(u -> v)` over every pair with `u` ranked before `v`.
    pub fn order_score(&self, order: &[usize]) -> W {
        let mut total = W::zero();
        for (a, &u) in order.iter().enumerate() {
            for &v in &order[a + 1..] {
                total = total + self.at(u, v);
            }
        }
        total
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    #[test]
    fn diagonal_is_always_absent() {
        let m = WeightMatrix::from_rows(vec![vec![Some(1i64), Some(2)], vec![Some(3), Some(4)]]);
        assert_eq!(m.get(0, 0), None);
        assert_eq!(m.get(1, 1), None);
        assert_eq!(m.get(0, 1), Some(2));
        assert_eq!(m.first_missing(), None);
    }

    #[test]
    fn order_score_sums_forward_weights() {
        let m = WeightMatrix::from_fn(3, |i, j| Rational::new((i * 3 + j) as i64, 10));
        // 0<1<2: w01 + w02 + w12 = 1/10 + 2/10 + 5/10
        assert_eq!(m.order_score(&[0, 1, 2]), Rational::new(8, 10));
        assert_eq!(m.order_score(&[2, 1, 0]), Rational::new(7 + 6 + 3, 10));
    }

    #[test]
    fn submatrix_reindexes() {
        let m = WeightMatrix::from_fn(4, |i, j| (i * 10 + j) as i64);
        let s = m.submatrix(&[3, 1]);
        assert_eq!(s.get(0, 1), Some(31));
        assert_eq!(s.get(1, 0), Some(13));
    }
}
