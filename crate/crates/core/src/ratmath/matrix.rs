//! Dense row-major rational matrices.

use std::fmt;
use std::str::FromStr;

use super::{MathError, Rational};

/// Dense rational matrix stored row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

/// Result of exact Gauss-Jordan reduction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowEchelon {
    pub rank: usize,
    pub rref: RatMatrix,
    /// Pivot column of each nonzero row, ascending.
    pub pivot_cols: Vec<usize>,
}

fn shape(detail: impl Into<String>) -> MathError {
    MathError::Shape(detail.into())
}

impl RatMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Rational>) -> Result<Self, MathError> {
        if data.len() != rows * cols {
            return Err(shape(format!(
                "{} entries supplied for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(RatMatrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| {
            if i == j {
                Rational::one()
            } else {
                Rational::zero()
            }
        })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        RatMatrix { rows, cols, data }
    }

    /// Integer matrix from nested rows. Panics on ragged input, so only
    /// meant for literals.
    pub fn from_i64<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.as_ref().len());
        assert!(
            rows.iter().all(|row| row.as_ref().len() == c),
            "ragged matrix literal"
        );
        Self::from_fn(r, c, |i, j| Rational::from(rows[i].as_ref()[j]))
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self, MathError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(shape("ragged rows"));
        }
        Ok(RatMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Column vector.
    pub fn column(values: Vec<Rational>) -> Self {
        RatMatrix {
            rows: values.len(),
            cols: 1,
            data: values,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Rational) {
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[Rational] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    /// Exact product `self * rhs`.
    pub fn matmul(&self, rhs: &RatMatrix) -> Result<Self, MathError> {
        if self.cols != rhs.rows {
            return Err(shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = RatMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                let a_is_one = a.is_one();
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let slot = &mut out.data[i * rhs.cols + j];
                    if a_is_one {
                        *slot += b;
                    } else {
                        *slot += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    fn zip_with(
        &self,
        rhs: &RatMatrix,
        op: &str,
        f: impl Fn(&Rational, &Rational) -> Rational,
    ) -> Result<Self, MathError> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(shape(format!(
                "cannot {op} {}x{} and {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(RatMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| f(a, b)).collect(),
        })
    }

    pub fn add(&self, rhs: &RatMatrix) -> Result<Self, MathError> {
        self.zip_with(rhs, "add", |a, b| a + b)
    }

    pub fn sub(&self, rhs: &RatMatrix) -> Result<Self, MathError> {
        self.zip_with(rhs, "subtract", |a, b| a - b)
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        RatMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * factor).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        RatMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| -x).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Rational::is_zero)
    }

    pub fn is_integral(&self) -> bool {
        self.data.iter().all(Rational::is_integer)
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (i + 1..self.cols).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// Sum of absolute values of all entries.
    pub fn abs_sum(&self) -> Rational {
        self.data.iter().map(Rational::abs).sum()
    }

    /// Largest absolute entry (zero for an empty matrix).
    pub fn max_abs(&self) -> Rational {
        self.data
            .iter()
            .map(Rational::abs)
            .max()
            .unwrap_or_else(Rational::zero)
    }

    /// Entry signs; every entry must be `>= 0` (`sign = 1`) or `<= 0` (`sign = -1`).
    pub fn all_entries_have_sign(&self, sign: i8) -> bool {
        self.data.iter().all(|x| x.signum() * sign >= 0)
    }

    /// The submatrix picking the given rows and columns in order.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(rows.len(), cols.len(), |i, j| self.get(rows[i], cols[j]).clone())
    }

    /// Contiguous block starting at `(r0, c0)`.
    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |i, j| self.get(r0 + i, c0 + j).clone())
    }

    /// `Pᵀ M P` for the permutation placing old index `perm[i]` at position `i`.
    pub fn permute_symmetric(&self, perm: &[usize]) -> Self {
        self.select(perm, perm)
    }

    /// Assembles a block matrix from a grid of blocks.
    pub fn from_blocks(grid: &[Vec<&RatMatrix>]) -> Result<Self, MathError> {
        if grid.is_empty() {
            return Ok(RatMatrix::zeros(0, 0));
        }
        let width = grid[0].len();
        if grid.iter().any(|r| r.len() != width) {
            return Err(shape("ragged block grid"));
        }
        let heights: Vec<usize> = grid.iter().map(|r| r.first().map_or(0, |b| b.rows)).collect();
        let widths: Vec<usize> = (0..width).map(|j| grid[0][j].cols).collect();
        for (bi, row) in grid.iter().enumerate() {
            for (bj, b) in row.iter().enumerate() {
                if b.rows != heights[bi] || b.cols != widths[bj] {
                    return Err(shape(format!(
                        "block ({bi},{bj}) is {}x{}, expected {}x{}",
                        b.rows, b.cols, heights[bi], widths[bj]
                    )));
                }
            }
        }
        let rows: usize = heights.iter().sum();
        let cols: usize = widths.iter().sum();
        let mut out = RatMatrix::zeros(rows, cols);
        let mut r0 = 0;
        for (bi, row) in grid.iter().enumerate() {
            let mut c0 = 0;
            for (bj, b) in row.iter().enumerate() {
                for i in 0..b.rows {
                    for j in 0..b.cols {
                        out.set(r0 + i, c0 + j, b.get(i, j).clone());
                    }
                }
                c0 += widths[bj];
            }
            r0 += heights[bi];
        }
        Ok(out)
    }

    /// Kronecker product: the block matrix `(a_ij * rhs)`.
    pub fn kron(&self, rhs: &RatMatrix) -> Self {
        Self::from_fn(self.rows * rhs.rows, self.cols * rhs.cols, |i, j| {
            self.get(i / rhs.rows, j / rhs.cols) * rhs.get(i % rhs.rows, j % rhs.cols)
        })
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.data.iter().map(Rational::to_f64).collect()
    }

    /// Determinant by fraction-free (Bareiss) elimination. Intermediate
    /// entries stay integral when the input is integral.
    pub fn det(&self) -> Result<Rational, MathError> {
        if !self.is_square() {
            return Err(shape(format!(
                "determinant of a {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(Rational::one());
        }
        let mut m = self.data.clone();
        let mut negate = false;
        let mut prev = Rational::one();
        for k in 0..n - 1 {
            if m[k * n + k].is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !m[i * n + k].is_zero()) else {
                    return Ok(Rational::zero());
                };
                for j in 0..n {
                    m.swap(k * n + j, p * n + j);
                }
                negate = !negate;
            }
            let pivot = m[k * n + k].clone();
            for i in k + 1..n {
                let lead = m[i * n + k].clone();
                for j in k + 1..n {
                    let t = &m[i * n + j] * &pivot - &lead * &m[k * n + j];
                    m[i * n + j] = t.checked_div(&prev)?;
                }
                m[i * n + k] = Rational::zero();
            }
            prev = pivot;
        }
        let d = m[n * n - 1].clone();
        Ok(if negate { -d } else { d })
    }

    /// Reduced row echelon form by exact Gauss-Jordan elimination.
    pub fn rank_and_rref(&self) -> RowEchelon {
        let (rows, cols) = (self.rows, self.cols);
        let mut m = self.clone();
        let mut pivot_cols = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(p) = (r..rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..cols {
                    m.data.swap(p * cols + j, r * cols + j);
                }
            }
            let inv = m.get(r, c).recip().expect("pivot is nonzero");
            for j in c..cols {
                let v = m.get(r, j) * &inv;
                m.set(r, j, v);
            }
            for i in 0..rows {
                if i == r || m.get(i, c).is_zero() {
                    continue;
                }
                let factor = m.get(i, c).clone();
                for j in c..cols {
                    let pj = m.get(r, j);
                    if pj.is_zero() {
                        continue;
                    }
                    let v = m.get(i, j) - &factor * pj;
                    m.set(i, j, v);
                }
            }
            pivot_cols.push(c);
            r += 1;
        }
        RowEchelon {
            rank: r,
            rref: m,
            pivot_cols,
        }
    }

    pub fn rank(&self) -> usize {
        self.rank_and_rref().rank
    }

    /// Exact inverse by Gauss-Jordan elimination on `[A | I]`.
    pub fn inv(&self) -> Result<Self, MathError> {
        if !self.is_square() {
            return Err(shape(format!(
                "inverse of a {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        let aug = RatMatrix::from_blocks(&[vec![self, &RatMatrix::identity(n)]])?;
        let ech = aug.rank_and_rref();
        if ech.pivot_cols.len() < n || ech.pivot_cols[n - 1] != n - 1 {
            return Err(MathError::SingularMatrix);
        }
        Ok(ech.rref.block(0, n, n, n))
    }

    /// Exact Moore-Penrose pseudo-inverse through the full-rank
    /// factorization `A = F G`, with `F` the pivot columns of `A` and `G`
    /// the nonzero rows of its RREF:
    ///
    /// ```text
    /// A† = Gᵀ (G Gᵀ)⁻¹ (Fᵀ F)⁻¹ Fᵀ
    /// ```
    ///
    /// The rank-0 case returns the zero matrix of transposed shape.
    pub fn pinv(&self) -> Self {
        let ech = self.rank_and_rref();
        if ech.rank == 0 {
            return RatMatrix::zeros(self.cols, self.rows);
        }
        let all_rows: Vec<usize> = (0..self.rows).collect();
        let f = self.select(&all_rows, &ech.pivot_cols);
        let g = ech.rref.block(0, 0, ech.rank, self.cols);
        let ft = f.transpose();
        let gt = g.transpose();
        // Both Gram matrices have full rank r by construction.
        let ggt_inv = g.matmul(&gt).and_then(|m| m.inv()).expect("G Gᵀ invertible");
        let ftf_inv = ft.matmul(&f).and_then(|m| m.inv()).expect("Fᵀ F invertible");
        gt.matmul(&ggt_inv)
            .and_then(|m| m.matmul(&ftf_inv))
            .and_then(|m| m.matmul(&ft))
            .expect("shapes agree")
    }

    /// Writes the matrix text format: a `rows cols` line followed by one
    /// line of space-separated rationals per row.
    pub fn to_text(&self) -> String {
        self.to_string()
    }

    pub fn from_text(text: &str) -> Result<Self, MathError> {
        text.parse()
    }
}

impl fmt::Display for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.rows, self.cols)?;
        for i in 0..self.rows {
            let line: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let line: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            write!(f, "{}", line.join(" "))?;
        }
        write!(f, "]")
    }
}

impl FromStr for RatMatrix {
    type Err = MathError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let parse_err = |line: usize, msg: String| MathError::Parse(format!("line {line}: {msg}"));
        let mut lines = text.lines().enumerate();
        let (hdr_no, header) = lines
            .next()
            .ok_or_else(|| MathError::Parse("empty matrix text".into()))?;
        let dims: Vec<&str> = header.split_whitespace().collect();
        if dims.len() != 2 {
            return Err(parse_err(hdr_no + 1, "expected \"rows cols\"".into()));
        }
        let parse_dim = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| parse_err(hdr_no + 1, format!("invalid dimension {s:?}")))
        };
        let (rows, cols) = (parse_dim(dims[0])?, parse_dim(dims[1])?);
        let mut data = Vec::with_capacity(rows * cols);
        for _ in 0..rows {
            let (no, line) = lines
                .next()
                .ok_or_else(|| parse_err(hdr_no + 1, format!("expected {rows} rows")))?;
            let tokens: Vec<&str> = line.split_whitespace().collect();
            if tokens.len() != cols {
                return Err(parse_err(
                    no + 1,
                    format!("expected {cols} entries, found {}", tokens.len()),
                ));
            }
            for t in tokens {
                data.push(t.parse().map_err(|e: MathError| parse_err(no + 1, e.to_string()))?);
            }
        }
        if let Some((no, _)) = lines.find(|(_, l)| !l.trim().is_empty()) {
            return Err(parse_err(no + 1, "trailing content".into()));
        }
        RatMatrix::new(rows, cols, data)
    }
}
