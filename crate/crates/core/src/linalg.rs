//! Exact rational linear algebra.
//!
//! Everything here works over `Q` with arbitrary-precision integers. Row
//! reduction is done fraction-free on integer rows (each row scaled by the lcm
//! of its denominators and kept primitive), and only the final canonical RREF
//! is converted back to rationals. Reduced row-echelon form is unique for a
//! given row space, so two [`Subspace`]s over the same coordinates are equal
//! exactly when their bases are identical.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exact rational number.
pub type Rat = BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// `"num/den"` form, always with an explicit denominator.
pub fn rat_to_string(x: &Rat) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

pub fn rat_from_str(s: &str) -> Result<Rat> {
    let s = s.trim();
    let parse = |t: &str| {
        t.trim()
            .parse::<BigInt>()
            .map_err(|e| Error::Parse(format!("bad rational `{s}`: {e}")))
    };
    match s.split_once('/') {
        Some((n, d)) => {
            let d = parse(d)?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in `{s}`")));
            }
            Ok(Rat::new(parse(n)?, d))
        }
        None => Ok(Rat::from_integer(parse(s)?)),
    }
}

/// Dense row-major rational matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix {
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

    /// Builds a matrix from row vectors; every row must have length `cols`.
    pub fn from_rows(cols: usize, rows: Vec<Vec<Rat>>) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        let nrows = rows.len();
        for r in rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    got: r.len(),
                });
            }
            data.extend(r);
        }
        Ok(QMatrix {
            rows: nrows,
            cols,
            data,
        })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let data = rows
            .iter()
            .flat_map(|r| {
                assert_eq!(r.len(), cols, "ragged integer matrix");
                r.iter().map(|&x| rat_int(x))
            })
            .collect();
        QMatrix {
            rows: rows.len(),
            cols,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Rat] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Rat>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> QMatrix {
        let mut t = QMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    /// `self * v` for a column vector `v`.
    pub fn mul_vec(&self, v: &[Rat]) -> Result<Vec<Rat>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: v.len(),
            });
        }
        Ok((0..self.rows).map(|i| dot(self.row(i), v)).collect())
    }

    pub fn mul(&self, other: &QMatrix) -> Result<QMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: other.rows,
            });
        }
        let mut out = QMatrix::zeros(self.rows, other.cols);
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
        Ok(out)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    /// Entries as `"num/den"` strings, row by row.
    pub fn to_strings(&self) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(rat_to_string).collect())
            .collect()
    }

    pub fn from_strings(rows: &[Vec<String>], cols: usize) -> Result<QMatrix> {
        let parsed = rows
            .iter()
            .map(|r| r.iter().map(|s| rat_from_str(s)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        QMatrix::from_rows(cols, parsed)
    }
}

impl std::ops::Index<(usize, usize)> for QMatrix {
    type Output = Rat;
    fn index(&self, (i, j): (usize, usize)) -> &Rat {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for QMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rat {
        &mut self.data[i * self.cols + j]
    }
}

impl Serialize for QMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_strings().serialize(s)
    }
}

impl<'de> Deserialize<'de> for QMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows: Vec<Vec<String>> = Vec::deserialize(d)?;
        let cols = rows.first().map_or(0, Vec::len);
        QMatrix::from_strings(&rows, cols).map_err(serde::de::Error::custom)
    }
}

pub fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    let mut acc = Rat::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc += x * y;
        }
    }
    acc
}

/// Scales a rational row to a primitive integer row with the same span.
fn integer_row(row: &[Rat]) -> Vec<BigInt> {
    let l = row
        .iter()
        .filter(|x| !x.is_zero())
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let mut out: Vec<BigInt> = row
        .iter()
        .map(|x| {
            if x.is_zero() {
                BigInt::zero()
            } else {
                x.numer() * (&l / x.denom())
            }
        })
        .collect();
    make_primitive(&mut out);
    out
}

fn make_primitive(row: &mut [BigInt]) {
    let mut g = BigInt::zero();
    for x in row.iter() {
        if !x.is_zero() {
            g = g.gcd(x);
            if g.is_one() {
                return;
            }
        }
    }
    if g.is_zero() || g.is_one() {
        return;
    }
    for x in row.iter_mut() {
        if !x.is_zero() {
            *x = &*x / &g;
        }
    }
}

/// Fraction-free Gauss-Jordan elimination. Pivots are searched only in
/// columns `< pivot_limit`, first nonzero entry in column order. Returns the
/// reduced rows (pivot rows first, in pivot order) and the pivot columns.
fn eliminate(mut rows: Vec<Vec<BigInt>>, pivot_limit: usize) -> (Vec<Vec<BigInt>>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut next = 0usize;
    for col in 0..pivot_limit {
        if next >= rows.len() {
            break;
        }
        let Some(found) = (next..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(next, found);
        let (before, rest) = rows.split_at_mut(next);
        let (pivot_row, after) = rest.split_first_mut().expect("pivot row exists");
        if pivot_row[col].sign() == Sign::Minus {
            for x in pivot_row.iter_mut() {
                *x = -&*x;
            }
        }
        let p = pivot_row[col].clone();
        let p_is_one = p.is_one();
        for row in before.iter_mut().chain(after.iter_mut()) {
            let f = row[col].clone();
            if f.is_zero() {
                continue;
            }
            // row <- p*row - f*pivot_row, then divide out the content
            for (x, y) in row.iter_mut().zip(pivot_row.iter()) {
                if y.is_zero() {
                    if !p_is_one && !x.is_zero() {
                        *x = &*x * &p;
                    }
                } else if p_is_one {
                    *x -= &f * y;
                } else {
                    *x = &*x * &p - &f * y;
                }
            }
            make_primitive(row);
        }
        pivots.push(col);
        next += 1;
    }
    (rows, pivots)
}

/// Result of [`rref`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub reduced: QMatrix,
    pub pivot_cols: Vec<usize>,
    pub rank: usize,
}

/// Canonical reduced row-echelon form. The returned matrix has the same shape
/// as the input, with zero rows at the bottom.
pub fn rref(m: &QMatrix) -> Rref {
    let rows: Vec<Vec<BigInt>> = (0..m.rows()).map(|i| integer_row(m.row(i))).collect();
    let (reduced, pivots) = eliminate(rows, m.cols());
    let mut out = QMatrix::zeros(m.rows(), m.cols());
    for (i, &pc) in pivots.iter().enumerate() {
        let p = &reduced[i][pc];
        for j in 0..m.cols() {
            let x = &reduced[i][j];
            if !x.is_zero() {
                out[(i, j)] = Rat::new(x.clone(), p.clone());
            }
        }
    }
    Rref {
        reduced: out,
        rank: pivots.len(),
        pivot_cols: pivots,
    }
}

/// A subspace of `Q^n` stored as its canonical RREF basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Subspace {
    ambient_dim: usize,
    basis: QMatrix,
    pivot_cols: Vec<usize>,
}

impl Subspace {
    pub fn zero(ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: QMatrix::zeros(0, ambient_dim),
            pivot_cols: Vec::new(),
        }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: QMatrix::identity(ambient_dim),
            pivot_cols: (0..ambient_dim).collect(),
        }
    }

    /// Span of the given vectors (which need not be independent).
    pub fn span(ambient_dim: usize, vectors: Vec<Vec<Rat>>) -> Result<Self> {
        let m = QMatrix::from_rows(ambient_dim, vectors)?;
        Ok(Self::row_space(&m))
    }

    pub fn row_space(m: &QMatrix) -> Self {
        let r = rref(m);
        let rows = (0..r.rank).map(|i| r.reduced.row(i).to_vec()).collect();
        Subspace {
            ambient_dim: m.cols(),
            basis: QMatrix::from_rows(m.cols(), rows).expect("rows have matrix width"),
            pivot_cols: r.pivot_cols,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn basis(&self) -> &QMatrix {
        &self.basis
    }

    pub fn basis_vecs(&self) -> Vec<Vec<Rat>> {
        self.basis.row_vecs()
    }

    pub fn pivot_cols(&self) -> &[usize] {
        &self.pivot_cols
    }

    fn check_len(&self, n: usize) -> Result<()> {
        if n != self.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim,
                got: n,
            });
        }
        Ok(())
    }

    /// Coordinates of `v` over the basis rows, or `None` if `v` is not in
    /// the subspace. Membership is decided exactly.
    pub fn in_span(&self, v: &[Rat]) -> Result<Option<Vec<Rat>>> {
        self.check_len(v.len())?;
        let coords: Vec<Rat> = self.pivot_cols.iter().map(|&p| v[p].clone()).collect();
        let mut residual = v.to_vec();
        for (i, c) in coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (r, b) in residual.iter_mut().zip(self.basis.row(i)) {
                if !b.is_zero() {
                    *r -= c * b;
                }
            }
        }
        Ok(residual.iter().all(Zero::is_zero).then_some(coords))
    }

    pub fn contains(&self, v: &[Rat]) -> Result<bool> {
        Ok(self.in_span(v)?.is_some())
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> Result<bool> {
        for row in self.basis_vecs() {
            if !other.contains(&row)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Vectors `a` with `a . v = 0` for all `v` in the subspace.
    pub fn annihilator(&self) -> Subspace {
        if self.dim() == 0 {
            return Subspace::full(self.ambient_dim);
        }
        kernel_basis(&self.basis)
    }

    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        other.check_len(self.ambient_dim)?;
        let mut rows = self.annihilator().basis_vecs();
        rows.extend(other.annihilator().basis_vecs());
        if rows.is_empty() {
            return Ok(Subspace::full(self.ambient_dim));
        }
        Ok(kernel_basis(&QMatrix::from_rows(self.ambient_dim, rows)?))
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        other.check_len(self.ambient_dim)?;
        let mut rows = self.basis_vecs();
        rows.extend(other.basis_vecs());
        Subspace::span(self.ambient_dim, rows)
    }

    /// `{ v in self : f(v) = 0 }` for a linear map `f` into `Q^m`.
    pub fn kernel_of<F>(&self, f: F) -> Result<Subspace>
    where
        F: Fn(&[Rat]) -> Vec<Rat>,
    {
        let basis = self.basis_vecs();
        if basis.is_empty() {
            return Ok(self.clone());
        }
        let images: Vec<Vec<Rat>> = basis.iter().map(|b| f(b)).collect();
        let m = images[0].len();
        // Coefficient vectors c with sum_i c_i f(b_i) = 0.
        let img = QMatrix::from_rows(m, images)?.transpose();
        let coeffs = kernel_basis(&img);
        let vectors = coeffs
            .basis_vecs()
            .into_iter()
            .map(|c| combine(&c, &basis, self.ambient_dim))
            .collect();
        Subspace::span(self.ambient_dim, vectors)
    }

    /// Image `f(self)` in `Q^m`.
    pub fn image<F>(&self, m: usize, f: F) -> Result<Subspace>
    where
        F: Fn(&[Rat]) -> Vec<Rat>,
    {
        let images = self.basis_vecs().iter().map(|b| f(b)).collect();
        Subspace::span(m, images)
    }
}

/// `sum_i c_i * rows_i`.
pub fn combine(c: &[Rat], rows: &[Vec<Rat>], n: usize) -> Vec<Rat> {
    let mut out = vec![Rat::zero(); n];
    for (ci, r) in c.iter().zip(rows) {
        if ci.is_zero() {
            continue;
        }
        for (o, x) in out.iter_mut().zip(r) {
            if !x.is_zero() {
                *o += ci * x;
            }
        }
    }
    out
}

/// Null space `{ v : M v = 0 }` as a canonical subspace of `Q^cols`.
pub fn kernel_basis(m: &QMatrix) -> Subspace {
    let n = m.cols();
    let r = rref(m);
    let is_pivot = {
        let mut p = vec![false; n];
        for &c in &r.pivot_cols {
            p[c] = true;
        }
        p
    };
    let mut vectors = Vec::new();
    for free in (0..n).filter(|&c| !is_pivot[c]) {
        let mut v = vec![Rat::zero(); n];
        v[free] = Rat::one();
        for (row, &pc) in r.pivot_cols.iter().enumerate() {
            let x = &r.reduced[(row, free)];
            if !x.is_zero() {
                v[pc] = -x.clone();
            }
        }
        vectors.push(v);
    }
    Subspace::span(n, vectors).expect("kernel vectors have ambient width")
}

/// A fixed list of generators with a precomputed elimination, answering
/// membership queries with explicit coefficients over the generators.
#[derive(Clone, Debug)]
pub struct SpanningSet {
    ambient_dim: usize,
    generators: usize,
    /// RREF basis of the span.
    span: Subspace,
    /// Row `i`: coefficients over the generators producing basis row `i`.
    transform: Vec<Vec<Rat>>,
}

impl SpanningSet {
    pub fn new(ambient_dim: usize, generators: &[Vec<Rat>]) -> Result<Self> {
        let m = generators.len();
        let mut rows = Vec::with_capacity(m);
        for (i, g) in generators.iter().enumerate() {
            if g.len() != ambient_dim {
                return Err(Error::DimensionMismatch {
                    expected: ambient_dim,
                    got: g.len(),
                });
            }
            let mut aug = g.clone();
            aug.extend((0..m).map(|j| if i == j { Rat::one() } else { Rat::zero() }));
            rows.push(integer_row(&aug));
        }
        let (reduced, pivots) = eliminate(rows, ambient_dim);
        let mut basis = Vec::with_capacity(pivots.len());
        let mut transform = Vec::with_capacity(pivots.len());
        for (i, &pc) in pivots.iter().enumerate() {
            let p = &reduced[i][pc];
            let scaled: Vec<Rat> = reduced[i]
                .iter()
                .map(|x| {
                    if x.is_zero() {
                        Rat::zero()
                    } else {
                        Rat::new(x.clone(), p.clone())
                    }
                })
                .collect();
            basis.push(scaled[..ambient_dim].to_vec());
            transform.push(scaled[ambient_dim..].to_vec());
        }
        let span = Subspace {
            ambient_dim,
            basis: QMatrix::from_rows(ambient_dim, basis)?,
            pivot_cols: pivots,
        };
        Ok(SpanningSet {
            ambient_dim,
            generators: m,
            span,
            transform,
        })
    }

    pub fn span(&self) -> &Subspace {
        &self.span
    }

    pub fn generator_count(&self) -> usize {
        self.generators
    }

    /// Coefficients `c` with `sum_j c_j g_j = v`, or `None` when `v` is not
    /// in the span.
    pub fn certificate(&self, v: &[Rat]) -> Result<Option<Vec<Rat>>> {
        let Some(coords) = self.span.in_span(v)? else {
            return Ok(None);
        };
        Ok(Some(combine(&coords, &self.transform, self.generators)))
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }
}

/// Continued-fraction rational reconstruction. Returns the first convergent
/// `p/q` with `q <= max_den` and `|x - p/q| <= tol`.
pub fn rational_reconstruct(x: &Rat, max_den: &BigInt, tol: &Rat) -> Option<Rat> {
    let (mut h_prev, mut h) = (BigInt::zero(), BigInt::one());
    let (mut k_prev, mut k) = (BigInt::one(), BigInt::zero());
    let mut rest = x.clone();
    loop {
        let a = rest.floor().to_integer();
        let h_next = &a * &h + &h_prev;
        let k_next = &a * &k + &k_prev;
        if &k_next > max_den {
            return None;
        }
        h_prev = std::mem::replace(&mut h, h_next);
        k_prev = std::mem::replace(&mut k, k_next);
        let conv = Rat::new(h.clone(), k.clone());
        if (x - &conv).abs() <= *tol {
            return Some(conv);
        }
        let frac = &rest - Rat::from_integer(a);
        if frac.is_zero() {
            return None;
        }
        rest = frac.recip();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> QMatrix {
        QMatrix::from_i64(rows)
    }

    #[test]
    fn rref_examples() {
        let r = rref(&m(&[&[1, 1], &[1, 1]]));
        assert_eq!(r.reduced, m(&[&[1, 1], &[0, 0]]));
        assert_eq!(r.rank, 1);
        assert_eq!(rref(&m(&[&[0, 0]])).rank, 0);
        let r = rref(&m(&[&[2, 0], &[0, 3]]));
        assert_eq!(r.reduced, QMatrix::identity(2));
        assert_eq!(r.pivot_cols, vec![0, 1]);
    }

    #[test]
    fn kernel_examples() {
        let k = kernel_basis(&m(&[&[1, 1], &[1, 1]]));
        assert_eq!(k.basis_vecs(), vec![vec![rat_int(1), rat_int(-1)]]);
        assert_eq!(kernel_basis(&QMatrix::identity(3)).dim(), 0);
        let a = m(&[&[1, 2, 3]]);
        let k = kernel_basis(&a);
        assert_eq!(k.dim(), 2);
        for v in k.basis_vecs() {
            assert!(a.mul_vec(&v).unwrap().iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn intersection_examples() {
        let e = |i: usize| {
            let mut v = vec![Rat::zero(); 3];
            v[i] = Rat::one();
            v
        };
        let s1 = Subspace::span(3, vec![e(0), e(1)]).unwrap();
        let s2 = Subspace::span(3, vec![e(1), e(2)]).unwrap();
        assert_eq!(s1.intersect(&s2).unwrap(), Subspace::span(3, vec![e(1)]).unwrap());
        assert_eq!(s1.intersect(&Subspace::full(3)).unwrap(), s1);
        assert!(matches!(
            s1.intersect(&Subspace::full(4)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn in_span_examples() {
        let s = Subspace::span(2, vec![vec![rat_int(1), rat_int(1)]]).unwrap();
        assert_eq!(s.in_span(&[Rat::zero(), Rat::zero()]).unwrap(), Some(vec![Rat::zero()]));
        assert_eq!(s.in_span(&[rat_int(1), rat_int(1)]).unwrap(), Some(vec![Rat::one()]));
        assert_eq!(s.in_span(&[rat_int(1), Rat::zero()]).unwrap(), None);
    }

    #[test]
    fn reconstruct_examples() {
        let tol = rat(1, 1_000_000_000);
        let x = rat(333_333_333_333, 1_000_000_000_000);
        assert_eq!(rational_reconstruct(&x, &BigInt::from(10), &tol), Some(rat(1, 3)));
        assert_eq!(
            rational_reconstruct(&rat(1, 2), &BigInt::from(10), &tol),
            Some(rat(1, 2))
        );
        let pi = rat_from_str("314159265358979323846264338327950/100000000000000000000000000000000")
            .unwrap();
        let tol = rat_from_str("1/100000000000000000000").unwrap();
        assert_eq!(rational_reconstruct(&pi, &BigInt::from(10), &tol), None);
    }

    #[test]
    fn spanning_set_certificate_reproduces_vector() {
        let gens = vec![
            vec![rat_int(1), rat_int(2), rat_int(0)],
            vec![rat_int(2), rat_int(4), rat_int(0)],
            vec![rat_int(0), rat_int(1), rat_int(1)],
        ];
        let s = SpanningSet::new(3, &gens).unwrap();
        assert_eq!(s.span().dim(), 2);
        let v = vec![rat_int(3), rat_int(7), rat_int(1)];
        let c = s.certificate(&v).unwrap().expect("member");
        assert_eq!(combine(&c, &gens, 3), v);
        assert!(s.certificate(&[rat_int(1), Rat::zero(), Rat::zero()]).unwrap().is_none());
    }

    #[test]
    fn rational_strings() {
        assert_eq!(rat_to_string(&rat(-6, 4)), "-3/2");
        assert_eq!(rat_to_string(&rat_int(5)), "5/1");
        assert_eq!(rat_from_str("-3/2").unwrap(), rat(-3, 2));
        assert_eq!(rat_from_str("7").unwrap(), rat_int(7));
        assert!(rat_from_str("1/0").is_err());
        let q = m(&[&[1, 2], &[3, 4]]);
        let json = serde_json::to_string(&q).unwrap();
        assert_eq!(json, r#"[["1/1","2/1"],["3/1","4/1"]]"#);
        assert_eq!(serde_json::from_str::<QMatrix>(&json).unwrap(), q);
    }
}
