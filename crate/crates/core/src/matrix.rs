//! Square integer matrices for the homology representation.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct IntMatrix {
    n: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(n: usize) -> IntMatrix {
        IntMatrix { n, data: vec![0; n * n] }
    }

    pub fn identity(n: usize) -> IntMatrix {
        let mut m = IntMatrix::zeros(n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// `I + c·e_{row,col}`.
    pub fn elementary(n: usize, row: usize, col: usize, c: i64) -> IntMatrix {
        let mut m = IntMatrix::identity(n);
        m.data[row * n + col] += c;
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<IntMatrix> {
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(Error::Input("matrix must be square and nonempty".into()));
        }
        Ok(IntMatrix { n, data: rows.concat() })
    }

    pub fn from_columns(cols: &[Vec<i64>]) -> IntMatrix {
        let n = cols.len();
        let mut m = IntMatrix::zeros(n);
        for (c, col) in cols.iter().enumerate() {
            for (r, &v) in col.iter().enumerate() {
                m.set(r, c, v);
            }
        }
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.data[r * self.n + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: i64) {
        self.data[r * self.n + c] = v;
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.data.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    pub fn column(&self, c: usize) -> Vec<i64> {
        (0..self.n).map(|r| self.get(r, c)).collect()
    }

    pub fn is_identity(&self) -> bool {
        (0..self.n).all(|r| (0..self.n).all(|c| self.get(r, c) == (r == c) as i64))
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.n);
        for r in 0..self.n {
            for c in 0..self.n {
                m.set(c, r, self.get(r, c));
            }
        }
        m
    }

    pub fn try_mul(&self, o: &IntMatrix) -> Result<IntMatrix> {
        assert_eq!(self.n, o.n, "dimension mismatch");
        let n = self.n;
        let mut m = IntMatrix::zeros(n);
        for r in 0..n {
            for k in 0..n {
                let a = self.get(r, k);
                if a == 0 {
                    continue;
                }
                for c in 0..n {
                    let b = o.get(k, c);
                    if b == 0 {
                        continue;
                    }
                    let cur = m.data[r * n + c];
                    m.data[r * n + c] = a
                        .checked_mul(b)
                        .and_then(|p| cur.checked_add(p))
                        .ok_or_else(|| Error::Resource("integer overflow in matrix product".into()))?;
                }
            }
        }
        Ok(m)
    }

    /// Matrix product. Panics on `i64` overflow.
    pub fn mul(&self, o: &IntMatrix) -> IntMatrix {
        self.try_mul(o).expect("matrix entry overflow")
    }

    pub fn max_abs(&self) -> i64 {
        self.data.iter().map(|v| v.abs()).max().unwrap_or(0)
    }

    /// Determinant by fraction-free elimination.
    pub fn det(&self) -> i128 {
        let n = self.n;
        let mut a: Vec<Vec<i128>> = self.rows().into_iter().map(|r| r.into_iter().map(i128::from).collect()).collect();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..n {
            if a[k][k] == 0 {
                match (k + 1..n).find(|&r| a[r][k] != 0) {
                    Some(r) => {
                        a.swap(k, r);
                        sign = -sign;
                    }
                    None => return 0,
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
                }
                a[i][k] = 0;
            }
            prev = a[k][k];
        }
        sign * a[n - 1][n - 1]
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self.data.iter().map(|v| v.to_string().len()).max().unwrap_or(1);
        for r in 0..self.n {
            let row: Vec<String> = (0..self.n).map(|c| format!("{:>width$}", self.get(r, c))).collect();
            writeln!(f, "[{}]", row.join(" "))?;
        }
        Ok(())
    }
}
