//! Dense exact linear algebra over the rationals.
//!
//! Rows are cleared to integers and reduced with fraction-free (Bareiss)
//! elimination, so every intermediate entry is a minor of the input and no
//! rational arithmetic happens until back-substitution.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::rational::Q;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Q>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![Q::zero(); rows * cols] }
    }

    pub fn from_rows(rows: Vec<Vec<Q>>, cols: usize) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged row");
            data.extend(row);
        }
        Self { rows: n, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Q {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Q) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Q] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn push_row(&mut self, row: Vec<Q>) {
        assert_eq!(row.len(), self.cols, "ragged row");
        self.data.extend(row);
        self.rows += 1;
    }

    /// Matrix-vector product.
    pub fn apply(&self, x: &[Q]) -> Vec<Q> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|r| self.row(r).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn rank(&self) -> usize {
        Echelon::new(self).pivots.len()
    }

    /// A basis of `{x : A x = 0}`, one vector per free column, each with a 1
    /// in its free coordinate and 0 in the other free coordinates.
    pub fn nullspace(&self) -> Vec<Vec<Q>> {
        let ech = Echelon::new(self);
        let free: Vec<usize> = (0..self.cols).filter(|c| !ech.pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut x = vec![Q::zero(); self.cols];
                x[f] = Q::one();
                ech.back_substitute(&mut x, None);
                x
            })
            .collect()
    }

    /// One solution of `A x = y`, or `None` when the system is inconsistent.
    pub fn solve(&self, y: &[Q]) -> Option<Vec<Q>> {
        assert_eq!(y.len(), self.rows);
        let mut aug = QMatrix::zeros(self.rows, self.cols + 1);
        for r in 0..self.rows {
            for c in 0..self.cols {
                aug.set(r, c, self.get(r, c).clone());
            }
            aug.set(r, self.cols, y[r].clone());
        }
        let ech = Echelon::new(&aug);
        if ech.pivots.contains(&self.cols) {
            return None;
        }
        let mut x = vec![Q::zero(); self.cols + 1];
        ech.back_substitute(&mut x, Some(self.cols));
        x.truncate(self.cols);
        Some(x)
    }
}

/// Row echelon form over the integers.
struct Echelon {
    cols: usize,
    rows: Vec<Vec<BigInt>>,
    pivots: Vec<usize>,
}

impl Echelon {
    fn new(m: &QMatrix) -> Self {
        let cols = m.cols;
        let mut a: Vec<Vec<BigInt>> = (0..m.rows).map(|r| integer_row(m.row(r))).collect();
        let mut pivots = Vec::new();
        let mut prev = BigInt::one();
        let mut r = 0;
        for c in 0..cols {
            if r == a.len() {
                break;
            }
            let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
                continue;
            };
            a.swap(r, p);
            for i in r + 1..a.len() {
                for j in c + 1..cols {
                    let num = &a[r][c] * &a[i][j] - &a[i][c] * &a[r][j];
                    let (quot, rem) = num.div_rem(&prev);
                    debug_assert!(rem.is_zero(), "Bareiss division must be exact");
                    a[i][j] = quot;
                }
                a[i][c] = BigInt::zero();
            }
            prev = a[r][c].clone();
            pivots.push(c);
            r += 1;
        }
        a.truncate(pivots.len());
        Self { cols, rows: a, pivots }
    }

    /// Fill pivot coordinates of `x` given its free coordinates. When `rhs`
    /// names an augmented column, that column is moved to the right-hand side.
    fn back_substitute(&self, x: &mut [Q], rhs: Option<usize>) {
        for (row, &p) in self.rows.iter().zip(&self.pivots).rev() {
            let mut acc = Q::zero();
            for j in p + 1..self.cols {
                if Some(j) == rhs || x[j].is_zero() || row[j].is_zero() {
                    continue;
                }
                acc += Q::from_integer(row[j].clone()) * &x[j];
            }
            if let Some(col) = rhs {
                acc -= Q::from_integer(row[col].clone());
            }
            x[p] = -acc / Q::from_integer(row[p].clone());
        }
    }
}

fn integer_row(row: &[Q]) -> Vec<BigInt> {
    let lcm = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    row.iter().map(|x| x.numer() * (&lcm / x.denom())).collect()
}

/// Scale a nonzero vector so its first nonzero entry is positive and all
/// entries are coprime integers. Used to compare kernel vectors up to scale.
pub fn primitive(v: &[Q]) -> Vec<Q> {
    let ints = integer_row(v);
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return v.to_vec();
    }
    let flip = ints.iter().find(|x| !x.is_zero()).map(|x| x.is_negative()).unwrap_or(false);
    ints.into_iter()
        .map(|x| {
            let y = x / &g;
            Q::from_integer(if flip { -y } else { y })
        })
        .collect()
}

/// Whether two vectors span the same line (both nonzero).
pub fn proportional(a: &[Q], b: &[Q]) -> bool {
    let nz = |v: &[Q]| v.iter().any(|x| !x.is_zero());
    nz(a) && nz(b) && primitive(a) == primitive(b)
}
