//! Dense exact-rational matrices: the linear-algebra kernel behind the
//! frequency vector, the correlation solve, and the hull computation.

use crate::rational::Rat;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatMat {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Rat>,
}

impl RatMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMat {
            rows,
            cols,
            data: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rat::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        assert!(rows.iter().all(|row| row.len() == c));
        RatMat {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_int_rows(rows: &[Vec<i64>]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|row| {
                    row.iter()
                        .map(|&x| Rat::from_integer(BigInt::from(x)))
                        .collect()
                })
                .collect(),
        )
    }

    pub fn row(&self, i: usize) -> &[Rat] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn scale(&self, s: &Rat) -> Self {
        let mut out = self.clone();
        for x in out.data.iter_mut() {
            *x = &*x * s;
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (x, y) in out.data.iter_mut().zip(other.data.iter()) {
            *x = &*x + y;
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (x, y) in out.data.iter_mut().zip(other.data.iter()) {
            *x = &*x - y;
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows);
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] = &out[(i, j)] + &(a * b);
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v.iter())
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .map(|(a, b)| a * b)
                    .fold(Rat::zero(), |acc, x| acc + x)
            })
            .collect()
    }

    /// Kronecker product with row-major pair indexing:
    /// `(X ⊗ Y)[a*ny+b, c*my+d] = X[a,c] · Y[b,d]`.
    pub fn kron(&self, other: &Self) -> Self {
        let mut out = Self::zeros(self.rows * other.rows, self.cols * other.cols);
        for a in 0..self.rows {
            for c in 0..self.cols {
                let x = &self[(a, c)];
                if x.is_zero() {
                    continue;
                }
                for b in 0..other.rows {
                    for d in 0..other.cols {
                        let y = &other[(b, d)];
                        if !y.is_zero() {
                            out[(a * other.rows + b, c * other.cols + d)] = x * y;
                        }
                    }
                }
            }
        }
        out
    }

    /// Row-reduce `[self | rhs]` in place; returns the echelon form and
    /// pivot columns of the left block.
    fn echelon(mut aug: Vec<Vec<Rat>>, left_cols: usize) -> (Vec<Vec<Rat>>, Vec<usize>) {
        let rows = aug.len();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..left_cols {
            if r >= rows {
                break;
            }
            let Some(p) = (r..rows).find(|&i| !aug[i][c].is_zero()) else {
                continue;
            };
            aug.swap(r, p);
            let inv = aug[r][c].clone();
            for x in aug[r].iter_mut() {
                *x = &*x / &inv;
            }
            for i in 0..rows {
                if i != r && !aug[i][c].is_zero() {
                    let f = aug[i][c].clone();
                    for j in 0..aug[i].len() {
                        let delta = &aug[r][j] * &f;
                        aug[i][j] = &aug[i][j] - &delta;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (aug, pivots)
    }

    /// Exact solve of `self · x = b`. Returns `None` when the system is
    /// singular or inconsistent.
    pub fn solve(&self, b: &[Rat]) -> Option<Vec<Rat>> {
        assert_eq!(self.rows, b.len());
        let aug: Vec<Vec<Rat>> = (0..self.rows)
            .map(|i| {
                let mut row: Vec<Rat> = self.row(i).to_vec();
                row.push(b[i].clone());
                row
            })
            .collect();
        let (red, pivots) = Self::echelon(aug, self.cols);
        if pivots.len() < self.cols {
            return None;
        }
        // Consistency: any zero-row with nonzero rhs means no solution.
        for row in red.iter().skip(pivots.len()) {
            if row[..self.cols].iter().all(|x| x.is_zero()) && !row[self.cols].is_zero() {
                return None;
            }
        }
        let mut x = vec![Rat::zero(); self.cols];
        for (r, &c) in pivots.iter().enumerate() {
            x[c] = red[r][self.cols].clone();
        }
        Some(x)
    }

    /// Basis of the right nullspace `{x : self·x = 0}`.
    pub fn kernel(&self) -> Vec<Vec<Rat>> {
        let aug: Vec<Vec<Rat>> = (0..self.rows).map(|i| self.row(i).to_vec()).collect();
        let (red, pivots) = Self::echelon(aug, self.cols);
        let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivot_set.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Rat::zero(); self.cols];
                v[f] = Rat::one();
                for (r, &c) in pivots.iter().enumerate() {
                    v[c] = -red[r][f].clone();
                }
                v
            })
            .collect()
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows)
                .all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    /// Characteristic polynomial coefficients `c_0 + c_1 λ + … + c_n λ^n`
    /// by the Faddeev–LeVerrier recursion.
    pub fn char_poly(&self) -> Vec<Rat> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        // det(λI − A) = λ^n + c_{n-1} λ^{n-1} + … + c_0
        let mut coeffs = vec![Rat::zero(); n + 1];
        coeffs[n] = Rat::one();
        let mut m = RatMat::zeros(n, n);
        let mut c = Rat::one();
        for k in 1..=n {
            // M_k = A·M_{k-1} + c_{n-k+1} I
            let mut am = self.mul(&m);
            for i in 0..n {
                am[(i, i)] = &am[(i, i)] + &c;
            }
            m = am;
            let am2 = self.mul(&m);
            let trace = (0..n).fold(Rat::zero(), |acc, i| acc + am2[(i, i)].clone());
            c = -trace / Rat::from_integer(BigInt::from(k as i64));
            coeffs[n - k] = c.clone();
        }
        coeffs
    }

    /// Rational roots of the characteristic polynomial, with multiplicity
    /// measured as kernel dimension of `A − λI`.
    pub fn rational_eigenvalues(&self) -> Vec<Rat> {
        let coeffs = self.char_poly();
        rational_roots(&coeffs)
    }
}

impl std::ops::Index<(usize, usize)> for RatMat {
    type Output = Rat;
    fn index(&self, (i, j): (usize, usize)) -> &Rat {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for RatMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rat {
        &mut self.data[i * self.cols + j]
    }
}

/// Distinct rational roots of a rational-coefficient polynomial
/// (ascending-degree coefficients), via the rational root theorem after
/// clearing denominators.
pub fn rational_roots(coeffs: &[Rat]) -> Vec<Rat> {
    // Strip leading zero coefficients (roots at 0 handled explicitly).
    let mut coeffs = coeffs.to_vec();
    while coeffs.last().map(|c| c.is_zero()).unwrap_or(false) {
        coeffs.pop();
    }
    if coeffs.len() <= 1 {
        return Vec::new();
    }
    let mut roots = Vec::new();
    if coeffs[0].is_zero() {
        roots.push(Rat::zero());
        // Divide out λ factors.
        while coeffs[0].is_zero() {
            coeffs.remove(0);
        }
    }
    if coeffs.len() <= 1 {
        return roots;
    }
    // Clear denominators to get integer coefficients.
    let mut lcm = BigInt::one();
    for c in coeffs.iter() {
        lcm = num_integer::lcm(lcm, c.denom().clone());
    }
    let ints: Vec<BigInt> = coeffs
        .iter()
        .map(|c| c.numer() * (&lcm / c.denom()))
        .collect();
    let a0 = ints[0].abs();
    let an = ints.last().unwrap().abs();
    let eval = |x: &Rat| -> bool {
        let mut acc = Rat::zero();
        for c in coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc.is_zero()
    };
    for p in divisors(&a0) {
        for q in divisors(&an) {
            for sign in [1i64, -1] {
                let cand = Rat::new(&p * BigInt::from(sign), q.clone());
                if eval(&cand) && !roots.contains(&cand) {
                    roots.push(cand);
                }
            }
        }
    }
    roots.sort();
    roots
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    if n.is_zero() {
        return vec![BigInt::one()];
    }
    let mut out = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= *n {
        if (n % &d).is_zero() {
            out.push(d.clone());
            out.push(n / &d);
        }
        d += 1;
    }
    out.sort();
    out.dedup();
    out
}
