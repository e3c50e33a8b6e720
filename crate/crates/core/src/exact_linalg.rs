//! Exact integer and rational linear algebra.
//!
//! Everything in this crate sits on top of the routines here: Smith normal
//! form with unimodular transforms, column-style Hermite normal form, lattice
//! saturation and integer kernels, and enumeration of the torsion cosets that
//! label the connected components of an intersection of subtori.
//!
//! All arithmetic uses arbitrary-precision integers. There is no floating
//! point anywhere.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Dense integer matrix in row-major order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from row slices. All rows must share one length.
    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.as_ref().len());
        let mut entries = Vec::with_capacity(r * c);
        for row in rows {
            let row = row.as_ref();
            assert_eq!(row.len(), c, "ragged rows");
            entries.extend(row.iter().map(|&x| BigInt::from(x)));
        }
        IntMatrix {
            rows: r,
            cols: c,
            entries,
        }
    }

    /// Builds a `rows x k` matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, columns: &[Vec<BigInt>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length mismatch");
            for (i, x) in col.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<BigInt>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    /// Submatrix made of the listed columns, in the listed order.
    pub fn select_columns(&self, idx: &[usize]) -> Self {
        let mut m = Self::zeros(self.rows, idx.len());
        for (k, &j) in idx.iter().enumerate() {
            for i in 0..self.rows {
                m[(i, k)] = self[(i, j)].clone();
            }
        }
        m
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

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
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
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(BigInt::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    /// Rational rank, by fraction-free elimination.
    pub fn rank(&self) -> usize {
        let mut rows: Vec<Vec<BigInt>> = (0..self.rows).map(|i| self.row(i).to_vec()).collect();
        let mut rank = 0;
        for col in 0..self.cols {
            let Some(p) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
                continue;
            };
            rows.swap(rank, p);
            let pivot = rows[rank][col].clone();
            let (done, rest) = rows.split_at_mut(rank + 1);
            let pivot_row = &done[rank];
            for row in rest.iter_mut() {
                let f = row[col].clone();
                if f.is_zero() {
                    continue;
                }
                for (x, p) in row.iter_mut().zip(pivot_row).skip(col) {
                    *x = &*x * &pivot - p * &f;
                }
                let g = content(row);
                if !g.is_zero() && !g.is_one() {
                    for x in row.iter_mut() {
                        *x = &*x / &g;
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    /// Determinant of a square matrix (Bareiss).
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a: Vec<Vec<BigInt>> = (0..n).map(|i| self.row(i).to_vec()).collect();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                let Some(p) = (k + 1..n).find(|&r| !a[r][k].is_zero()) else {
                    return BigInt::zero();
                };
                a.swap(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                    a[i][j] = v;
                }
            }
            prev = a[k][k].clone();
        }
        sign * &a[n - 1][n - 1]
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.entries.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += f * row[src]
    fn add_row(&mut self, dst: usize, src: usize, f: &BigInt) {
        for j in 0..self.cols {
            let v = &self[(src, j)] * f;
            self[(dst, j)] += v;
        }
    }

    /// col[dst] += f * col[src]
    fn add_col(&mut self, dst: usize, src: usize, f: &BigInt) {
        for i in 0..self.rows {
            let v = &self[(i, src)] * f;
            self[(i, dst)] += v;
        }
    }

    fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            let v = -&self[(r, j)];
            self[(r, j)] = v;
        }
    }

    fn negate_col(&mut self, c: usize) {
        for i in 0..self.rows {
            let v = -&self[(i, c)];
            self[(i, c)] = v;
        }
    }

    /// Replaces columns (a, b) by (x*a + y*b, u*a + v*b).
    fn combine_cols(&mut self, a: usize, b: usize, x: &BigInt, y: &BigInt, u: &BigInt, v: &BigInt) {
        for i in 0..self.rows {
            let ca = self[(i, a)].clone();
            let cb = self[(i, b)].clone();
            self[(i, a)] = x * &ca + y * &cb;
            self[(i, b)] = u * &ca + v * &cb;
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        debug_assert!(i < self.rows && j < self.cols);
        &self.entries[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.entries[i * self.cols + j]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self[(i, j)])?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// gcd of all entries, zero for the zero vector.
pub fn content(v: &[BigInt]) -> BigInt {
    v.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
}

/// Exact rational vector; coordinates are always kept in lowest terms.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RatVector(pub Vec<BigRational>);

impl RatVector {
    pub fn zeros(n: usize) -> Self {
        RatVector(vec![BigRational::zero(); n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.0
    }

    /// Reduces every coordinate into `[0, 1)`.
    pub fn reduced_mod_one(&self) -> Self {
        RatVector(self.0.iter().map(frac_part).collect())
    }

    /// Integer dot product `chi . self`.
    pub fn dot_int(&self, chi: &[BigInt]) -> BigRational {
        self.0
            .iter()
            .zip(chi)
            .fold(BigRational::zero(), |acc, (x, c)| acc + x * BigRational::from_integer(c.clone()))
    }

    pub fn sub(&self, other: &RatVector) -> RatVector {
        RatVector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }
}

impl fmt::Display for RatVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, x) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// Fractional part in `[0, 1)`.
pub fn frac_part(x: &BigRational) -> BigRational {
    x - x.floor()
}

/// `U * A * V = D` with `U`, `V` unimodular and `D` diagonal in Smith form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfDecomposition {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SnfDecomposition {
    /// Nonzero diagonal entries `d_1 | d_2 | ... | d_r`.
    pub fn elementary_divisors(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols()))
            .map(|i| self.d[(i, i)].clone())
            .take_while(|x| !x.is_zero())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.elementary_divisors().len()
    }
}

/// Smith normal form with transforms.
///
/// Pivot choice is deterministic: the nonzero entry of smallest absolute
/// value in the active submatrix, ties broken by row-major position.
pub fn smith_normal_form(a: &IntMatrix) -> SnfDecomposition {
    let (m, n) = (a.rows(), a.cols());
    let mut d = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);

    for t in 0..m.min(n) {
        loop {
            let Some((pi, pj)) = smallest_entry(&d, t) else {
                return SnfDecomposition { u, d, v };
            };
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let pivot = d[(t, t)].clone();
            let mut dirty = false;
            for i in t + 1..m {
                if d[(i, t)].is_zero() {
                    continue;
                }
                let q = -d[(i, t)].div_floor(&pivot);
                d.add_row(i, t, &q);
                u.add_row(i, t, &q);
                dirty |= !d[(i, t)].is_zero();
            }
            for j in t + 1..n {
                if d[(t, j)].is_zero() {
                    continue;
                }
                let q = -d[(t, j)].div_floor(&pivot);
                d.add_col(j, t, &q);
                v.add_col(j, t, &q);
                dirty |= !d[(t, j)].is_zero();
            }
            if dirty {
                continue;
            }
            // Divisibility: pull an offending row into the pivot row and retry.
            let offender = (t + 1..m)
                .flat_map(|i| (t + 1..n).map(move |j| (i, j)))
                .find(|&(i, j)| !d[(i, j)].is_multiple_of(&pivot));
            if let Some((i, _)) = offender {
                let one = BigInt::one();
                d.add_row(t, i, &one);
                u.add_row(t, i, &one);
                continue;
            }
            if pivot.is_negative() {
                d.negate_row(t);
                u.negate_row(t);
            }
            break;
        }
    }
    SnfDecomposition { u, d, v }
}

fn smallest_entry(d: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..d.rows() {
        for j in t..d.cols() {
            let x = &d[(i, j)];
            if x.is_zero() {
                continue;
            }
            match best {
                Some((bi, bj)) if d[(bi, bj)].abs() <= x.abs() => {}
                _ => best = Some((i, j)),
            }
        }
    }
    best
}

/// Product of the nonzero elementary divisors; `1` for an empty or zero matrix.
pub fn multiplicity(a: &IntMatrix) -> BigInt {
    smith_normal_form(a)
        .elementary_divisors()
        .into_iter()
        .fold(BigInt::one(), |acc, x| acc * x)
}

/// Column-style Hermite normal form of the lattice spanned by the columns.
///
/// Lower triangular (pivot rows strictly increasing from column to column),
/// positive pivots, and every other entry of a pivot row reduced into
/// `[0, pivot)`. Zero columns are dropped, so the result has `rank` columns.
pub fn hermite_normal_form(a: &IntMatrix) -> IntMatrix {
    let mut h = a.clone();
    let (m, n) = (h.rows(), h.cols());
    let mut c = 0;
    for i in 0..m {
        if c == n {
            break;
        }
        for j in c + 1..n {
            if h[(i, j)].is_zero() {
                continue;
            }
            let ext = h[(i, c)].extended_gcd(&h[(i, j)]);
            let (g, x, y) = (ext.gcd, ext.x, ext.y);
            let p = &h[(i, c)] / &g;
            let q = &h[(i, j)] / &g;
            // [x -q; y p] has determinant xp + yq = 1.
            h.combine_cols(c, j, &x, &y, &(-q), &p);
        }
        if h[(i, c)].is_zero() {
            continue;
        }
        if h[(i, c)].is_negative() {
            h.negate_col(c);
        }
        let pivot = h[(i, c)].clone();
        for j in 0..c {
            let q = -h[(i, j)].div_floor(&pivot);
            if !q.is_zero() {
                h.add_col(j, c, &q);
            }
        }
        c += 1;
    }
    let keep: Vec<usize> = (0..c).collect();
    h.select_columns(&keep)
}

/// Basis of `{v in Z^cols : A v = 0}` in Hermite normal form.
pub fn kernel_lattice(a: &IntMatrix) -> IntMatrix {
    let snf = smith_normal_form(a);
    let r = snf.rank();
    let idx: Vec<usize> = (r..a.cols()).collect();
    hermite_normal_form(&snf.v.select_columns(&idx))
}

/// Basis of `(Q-span of the columns) ∩ Z^rows`, in Hermite normal form.
pub fn saturation(l: &IntMatrix) -> IntMatrix {
    // The saturation is the annihilator of the annihilator.
    let annihilator = kernel_lattice(&l.transpose());
    if annihilator.cols() == 0 {
        return IntMatrix::identity(l.rows());
    }
    kernel_lattice(&annihilator.transpose())
}

/// Solutions of `M^T x ≡ b (mod Z^k)` for a `d x k` matrix `M`, one raw
/// representative per coset of `{x : M^T x ∈ Z^k}`'s identity component.
///
/// Returns an empty list when the system has no solution.
pub fn solve_congruences(m: &IntMatrix, b: &[BigRational]) -> Vec<RatVector> {
    let k = m.cols();
    let d = m.rows();
    assert_eq!(b.len(), k);
    let snf = smith_normal_form(&m.transpose());
    // U M^T V = D; with y = V^{-1} x the system reads D y ≡ U b.
    let ub: Vec<BigRational> = (0..k)
        .map(|i| {
            (0..k).fold(BigRational::zero(), |acc, j| {
                acc + BigRational::from_integer(snf.u[(i, j)].clone()) * &b[j]
            })
        })
        .collect();
    let divisors = snf.elementary_divisors();
    let r = divisors.len();
    if ub[r..].iter().any(|x| !x.is_integer()) {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut counter = vec![BigInt::zero(); r];
    loop {
        let mut y = vec![BigRational::zero(); d];
        for t in 0..r {
            y[t] = (&ub[t] + BigRational::from_integer(counter[t].clone()))
                / BigRational::from_integer(divisors[t].clone());
        }
        let x: Vec<BigRational> = (0..d)
            .map(|i| {
                (0..d).fold(BigRational::zero(), |acc, j| {
                    acc + BigRational::from_integer(snf.v[(i, j)].clone()) * &y[j]
                })
            })
            .collect();
        out.push(RatVector(x).reduced_mod_one());
        // odometer over 0 <= counter[t] < divisors[t]
        let mut t = 0;
        loop {
            if t == r {
                return out;
            }
            counter[t] += 1;
            if counter[t] < divisors[t] {
                break;
            }
            counter[t] = BigInt::zero();
            t += 1;
        }
    }
}

/// Canonical representative of the coset `x + {y : S^T y ∈ Z^r}` for a
/// saturated lattice basis `S` (d x r, in Hermite normal form).
///
/// The representative only depends on `S` and on `S^T x mod Z^r`.
pub fn canonical_translation(s: &IntMatrix, x: &RatVector) -> RatVector {
    let d = s.rows();
    let r = s.cols();
    if r == 0 {
        return RatVector::zeros(d);
    }
    let values: Vec<BigRational> = (0..r).map(|j| frac_part(&x.dot_int(&s.column(j)))).collect();
    let snf = smith_normal_form(&s.transpose());
    debug_assert!(snf.elementary_divisors().iter().all(One::is_one), "lattice not saturated");
    let mut y = vec![BigRational::zero(); d];
    for (i, yi) in y.iter_mut().enumerate().take(r) {
        *yi = (0..r).fold(BigRational::zero(), |acc, j| {
            acc + BigRational::from_integer(snf.u[(i, j)].clone()) * &values[j]
        });
    }
    let out: Vec<BigRational> = (0..d)
        .map(|i| {
            (0..d).fold(BigRational::zero(), |acc, j| {
                acc + BigRational::from_integer(snf.v[(i, j)].clone()) * &y[j]
            })
        })
        .collect();
    RatVector(out).reduced_mod_one()
}

/// Canonical labels of the connected components of `∩ ker χ` over the
/// columns `χ` of `a`, which must be linearly independent.
///
/// Exactly `multiplicity(a)` vectors, sorted.
pub fn torsion_cosets(a: &IntMatrix) -> Result<Vec<RatVector>, LinalgError> {
    if a.rank() != a.cols() {
        return Err(LinalgError::DependentColumns);
    }
    let zero = vec![BigRational::zero(); a.cols()];
    let dir = saturation(a);
    let mut out: Vec<RatVector> = solve_congruences(a, &zero)
        .iter()
        .map(|x| canonical_translation(&dir, x))
        .collect();
    out.sort();
    out.dedup();
    Ok(out)
}

/// Incremental row echelon form over the rationals, with rows stored as
/// sparse primitive integer vectors (fraction-free elimination).
#[derive(Clone, Debug, Default)]
pub struct RowEchelon {
    /// Keyed by leading column; entries sorted by column.
    pivots: std::collections::BTreeMap<usize, Vec<(usize, BigInt)>>,
}

impl RowEchelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Adds a row; returns whether it increased the rank.
    pub fn insert(&mut self, row: &[(usize, BigRational)]) -> bool {
        let denom = row.iter().fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
        let mut cur: Vec<(usize, BigInt)> = row
            .iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(j, c)| (*j, c.numer() * (&denom / c.denom())))
            .collect();
        cur.sort_by_key(|(j, _)| *j);
        loop {
            let Some((lead, lead_val)) = cur.first().cloned() else {
                return false;
            };
            match self.pivots.get(&lead) {
                Some(p) => {
                    let pv = &p[0].1;
                    let g = pv.gcd(&lead_val);
                    cur = combine(&cur, &(pv / &g), p, &(-(&lead_val / &g)));
                    make_primitive(&mut cur);
                }
                None => {
                    make_primitive(&mut cur);
                    if cur[0].1.is_negative() {
                        cur.iter_mut().for_each(|(_, x)| *x = -&*x);
                    }
                    self.pivots.insert(lead, cur);
                    return true;
                }
            }
        }
    }
}

/// `fa * a + fb * b` on sparse sorted rows.
fn combine(a: &[(usize, BigInt)], fa: &BigInt, b: &[(usize, BigInt)], fb: &BigInt) -> Vec<(usize, BigInt)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let (col, val) = match (a.get(i), b.get(j)) {
            (Some(x), Some(y)) if x.0 == y.0 => {
                i += 1;
                j += 1;
                (x.0, &x.1 * fa + &y.1 * fb)
            }
            (Some(x), Some(y)) if x.0 < y.0 => {
                i += 1;
                (x.0, &x.1 * fa)
            }
            (Some(x), None) => {
                i += 1;
                (x.0, &x.1 * fa)
            }
            (_, Some(y)) => {
                j += 1;
                (y.0, &y.1 * fb)
            }
            (None, None) => unreachable!(),
        };
        if !val.is_zero() {
            out.push((col, val));
        }
    }
    out
}

fn make_primitive(row: &mut [(usize, BigInt)]) {
    let g = row.iter().fold(BigInt::zero(), |g, (_, x)| g.gcd(x));
    if !g.is_zero() && !g.is_one() {
        row.iter_mut().for_each(|(_, x)| *x = &*x / &g);
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LinalgError {
    #[error("columns are linearly dependent")]
    DependentColumns,
}
