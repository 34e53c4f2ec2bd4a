//! Exact rank, kernel and solve over the rationals.
//!
//! Two fraction-free engines live here. [`rank`] is dense Bareiss
//! elimination on the integer matrix obtained by clearing row
//! denominators. [`SparseEchelon`] is fraction-free sparse elimination
//! where every row is kept primitive (divided by the gcd of its entries);
//! it drives [`kernel_basis`], [`solve`] and the large constraint systems
//! assembled for logarithmic forms, where Bareiss minors grow too quickly.
//!
//! Both engines pivot deterministically, so kernel bases are reproducible
//! across runs and platforms.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::algebra::Rational;
use crate::error::{Error, Result};

/// Dense row-major rational matrix.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix {
            rows,
            cols,
            entries: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>, cols: usize) -> Self {
        let nrows = rows.len();
        let mut entries = Vec::with_capacity(nrows * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged matrix");
            entries.extend(r);
        }
        RatMatrix {
            rows: nrows,
            cols,
            entries,
        }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Self::from_rows(
            rows.iter()
                .map(|r| {
                    r.iter()
                        .map(|&v| Rational::from_integer(v.into()))
                        .collect()
                })
                .collect(),
            cols,
        )
    }

    /// Builds a matrix from its columns.
    pub fn from_columns(rows: usize, columns: Vec<Vec<Rational>>) -> Self {
        let cols = columns.len();
        let mut m = Self::zeros(rows, cols);
        for (c, col) in columns.into_iter().enumerate() {
            assert_eq!(col.len(), rows, "column length");
            for (r, v) in col.into_iter().enumerate() {
                m.set(r, c, v);
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

    pub fn get(&self, r: usize, c: usize) -> &Rational {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rational) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Rational] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn mul(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!(self.cols, other.rows, "matrix product shapes");
        let mut out = RatMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let v = out.get(i, j) + a * b;
                        out.set(i, j, v);
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(self.cols, v.len(), "matrix-vector shapes");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, _)| !a.is_zero())
                    .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    pub fn add(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!(
            (self.rows, self.cols),
            (other.rows, other.cols),
            "matrix sum shapes"
        );
        RatMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> RatMatrix {
        RatMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|a| a * c).collect(),
        }
    }

    fn sparse_rows(&self) -> Vec<Vec<(usize, Rational)>> {
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_zero())
                    .map(|(c, v)| (c, v.clone()))
                    .collect()
            })
            .collect()
    }
}

impl fmt::Display for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|v| v.to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Multiplies a rational row by the lcm of its denominators.
fn clear_denominators<'a>(row: impl Iterator<Item = &'a Rational> + Clone) -> Vec<BigInt> {
    let lcm = row.clone().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    row.map(|v| v.numer() * (&lcm / v.denom())).collect()
}

/// Rank by Bareiss elimination: row-order pivoting on the first column
/// with a nonzero entry, exact integer division by the previous pivot.
pub fn rank(m: &RatMatrix) -> usize {
    let mut a: Vec<Vec<BigInt>> = (0..m.rows)
        .map(|r| clear_denominators(m.row(r).iter()))
        .collect();
    let (rows, cols) = (m.rows, m.cols);
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        for i in r + 1..rows {
            for j in c + 1..cols {
                let v = (&a[r][c] * &a[i][j] - &a[i][c] * &a[r][j]) / &prev;
                a[i][j] = v;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        r += 1;
    }
    r
}

type IntRow = Vec<(usize, BigInt)>;

fn make_primitive(row: &mut IntRow) {
    let Some(first) = row.first() else { return };
    let mut g = first.1.abs();
    for (_, v) in row.iter().skip(1) {
        if g.is_one() {
            break;
        }
        g = g.gcd(v);
    }
    let negate = first.1.is_negative();
    if g.is_one() && !negate {
        return;
    }
    for (_, v) in row.iter_mut() {
        if !g.is_one() {
            *v = &*v / &g;
        }
        if negate {
            *v = -&*v;
        }
    }
}

fn entry(row: &IntRow, col: usize) -> Option<&BigInt> {
    row.binary_search_by_key(&col, |e| e.0)
        .ok()
        .map(|i| &row[i].1)
}

/// `(a/g) * row - (b/g) * pivot` where `a` is the pivot's entry and `b`
/// the row's entry at `col`, returned primitive. The entry at `col`
/// cancels.
fn eliminate(row: &IntRow, pivot: &IntRow, col: usize) -> IntRow {
    let a = entry(pivot, col).expect("pivot has an entry in its column");
    let b = entry(row, col).expect("row has an entry in the eliminated column");
    let g = a.gcd(b);
    let (a, b) = (a / &g, b / &g);
    let mut out = Vec::with_capacity(row.len() + pivot.len());
    let (mut i, mut j) = (0, 0);
    while i < row.len() || j < pivot.len() {
        let ci = row.get(i).map_or(usize::MAX, |e| e.0);
        let cj = pivot.get(j).map_or(usize::MAX, |e| e.0);
        let (c, v) = match ci.cmp(&cj) {
            std::cmp::Ordering::Less => {
                i += 1;
                (ci, &a * &row[i - 1].1)
            }
            std::cmp::Ordering::Greater => {
                j += 1;
                (cj, -(&b * &pivot[j - 1].1))
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
                (ci, &a * &row[i - 1].1 - &b * &pivot[j - 1].1)
            }
        };
        if !v.is_zero() {
            out.push((c, v));
        }
    }
    debug_assert!(entry(&out, col).is_none());
    make_primitive(&mut out);
    out
}

/// Row echelon form of a sparse rational system, computed fraction-free.
///
/// Rows are inserted in order; each is reduced against the existing pivot
/// rows at its leading column until it either vanishes or claims a new
/// pivot column. [`SparseEchelon::reduce`] then back-substitutes to a
/// reduced form where each pivot column is zero outside its pivot row.
#[derive(Clone, Debug)]
pub struct SparseEchelon {
    cols: usize,
    pivots: BTreeMap<usize, IntRow>,
    reduced: bool,
}

impl SparseEchelon {
    pub fn new(cols: usize) -> Self {
        SparseEchelon {
            cols,
            pivots: BTreeMap::new(),
            reduced: true,
        }
    }

    /// Builds the echelon form of the given rows. Each row is a list of
    /// `(column, value)` pairs; columns must be `< cols`, repeats are summed.
    pub fn from_rows<I, R>(cols: usize, rows: I) -> Self
    where
        I: IntoIterator<Item = R>,
        R: IntoIterator<Item = (usize, Rational)>,
    {
        let mut e = SparseEchelon::new(cols);
        for r in rows {
            e.insert(r);
        }
        e
    }

    pub fn from_matrix(m: &RatMatrix) -> Self {
        Self::from_rows(m.cols, m.sparse_rows())
    }

    /// Inserts a row; returns true when it increased the rank.
    pub fn insert<R: IntoIterator<Item = (usize, Rational)>>(&mut self, row: R) -> bool {
        let mut acc: BTreeMap<usize, Rational> = BTreeMap::new();
        for (c, v) in row {
            assert!(c < self.cols, "column {c} out of range");
            *acc.entry(c).or_insert_with(Rational::zero) += v;
        }
        acc.retain(|_, v| !v.is_zero());
        if acc.is_empty() {
            return false;
        }
        let ints = clear_denominators(acc.values());
        let mut r: IntRow = acc.keys().copied().zip(ints).collect();
        make_primitive(&mut r);
        while let Some(&(lead, _)) = r.first() {
            match self.pivots.get(&lead) {
                Some(p) => r = eliminate(&r, p, lead),
                None => {
                    self.pivots.insert(lead, r);
                    self.reduced = false;
                    return true;
                }
            }
        }
        false
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivot_columns(&self) -> impl Iterator<Item = usize> + '_ {
        self.pivots.keys().copied()
    }

    /// Back-substitution: clears every pivot column above its pivot row.
    pub fn reduce(&mut self) {
        if self.reduced {
            return;
        }
        let cols: Vec<usize> = self.pivots.keys().copied().collect();
        for &c in cols.iter().rev() {
            let pivot = self.pivots[&c].clone();
            for &other in cols.iter().take_while(|&&o| o < c) {
                let row = &self.pivots[&other];
                if entry(row, c).is_some() {
                    let new = eliminate(row, &pivot, c);
                    self.pivots.insert(other, new);
                }
            }
        }
        self.reduced = true;
    }

    /// Kernel basis of the system, one vector per non-pivot column, in
    /// increasing order of that column. Each vector is integral with gcd 1
    /// and a positive first nonzero entry.
    pub fn kernel(&mut self) -> Vec<KernelVector> {
        self.reduce();
        let mut by_free: BTreeMap<usize, Vec<(usize, &BigInt, &BigInt)>> = BTreeMap::new();
        for (&pc, row) in &self.pivots {
            let lead = &row[0].1;
            debug_assert_eq!(row[0].0, pc);
            for (c, v) in row.iter().skip(1) {
                by_free.entry(*c).or_default().push((pc, lead, v));
            }
        }
        let mut out = Vec::new();
        for f in 0..self.cols {
            if self.pivots.contains_key(&f) {
                continue;
            }
            let deps = by_free.get(&f).map(Vec::as_slice).unwrap_or(&[]);
            let scale = deps
                .iter()
                .fold(BigInt::one(), |acc, (_, lead, _)| acc.lcm(lead));
            let mut v: IntRow = Vec::with_capacity(deps.len() + 1);
            v.push((f, scale.clone()));
            for (pc, lead, val) in deps {
                v.push((*pc, -(*val * (&scale / *lead))));
            }
            v.sort_by_key(|e| e.0);
            make_primitive(&mut v);
            let free_value = entry(&v, f).cloned().expect("free column survives");
            out.push(KernelVector {
                free_column: f,
                free_value,
                entries: v,
            });
        }
        out
    }

    /// Particular solution of the system whose last column is the
    /// right-hand side, with free variables set to zero.
    fn particular_solution(&mut self) -> Result<Vec<Rational>> {
        let rhs = self.cols - 1;
        if self.pivots.contains_key(&rhs) {
            return Err(Error::Inconsistent(
                "right-hand side is not in the column span".into(),
            ));
        }
        self.reduce();
        let mut x = vec![Rational::zero(); rhs];
        for (&pc, row) in &self.pivots {
            if let Some(b) = entry(row, rhs) {
                x[pc] = Rational::new(b.clone(), row[0].1.clone());
            }
        }
        Ok(x)
    }
}

/// A normalized kernel vector stored sparsely.
///
/// `free_column` is the non-pivot column the vector was built from: every
/// other vector of the same kernel basis is zero there.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelVector {
    pub free_column: usize,
    pub free_value: BigInt,
    pub entries: Vec<(usize, BigInt)>,
}

impl KernelVector {
    pub fn to_dense(&self, len: usize) -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); len];
        for (c, x) in &self.entries {
            v[*c] = x.clone();
        }
        v
    }
}

/// Basis of `{v : Mv = 0}`; integer vectors with gcd 1 and positive
/// leading entry, `cols - rank` of them.
pub fn kernel_basis(m: &RatMatrix) -> Vec<Vec<BigInt>> {
    SparseEchelon::from_matrix(m)
        .kernel()
        .into_iter()
        .map(|k| k.to_dense(m.cols))
        .collect()
}

/// Some solution of `Mx = b`, or [`Error::Inconsistent`].
pub fn solve(m: &RatMatrix, b: &[Rational]) -> Result<Vec<Rational>> {
    assert_eq!(b.len(), m.rows, "right-hand side length");
    let rows = m.sparse_rows().into_iter().zip(b).map(|(mut r, v)| {
        if !v.is_zero() {
            r.push((m.cols, v.clone()));
        }
        r
    });
    SparseEchelon::from_rows(m.cols + 1, rows).particular_solution()
}
