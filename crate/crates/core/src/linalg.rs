//! Dense exact linear algebra over prime fields GF(p).
//!
//! Everything downstream (homotopy solving, isomorphism tests, homology)
//! reduces to `rref`, `solve` and `kernel_basis` on these matrices.

use crate::error::{Error, Result};

/// Largest modulus accepted for a prime field.
pub const MAX_MODULUS: u64 = 1 << 31;

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p % 2 == 0 {
        return p == 2;
    }
    let mut d = 3;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// A prime field GF(p), p <= 2^31. Primality is checked at construction.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct PrimeField {
    modulus: u64,
}

impl PrimeField {
    pub fn new(modulus: u64) -> Result<Self> {
        if modulus > MAX_MODULUS || !is_prime(modulus) {
            return Err(Error::NotPrime(modulus));
        }
        Ok(PrimeField { modulus })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn elem(&self, value: i64) -> FieldElement {
        let p = self.modulus as i64;
        FieldElement {
            value: value.rem_euclid(p) as u64,
            modulus: self.modulus,
        }
    }

    pub fn zero(&self) -> FieldElement {
        self.elem(0)
    }

    pub fn one(&self) -> FieldElement {
        self.elem(1)
    }
}

/// A residue in [0, p) together with its modulus.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub struct FieldElement {
    value: u64,
    modulus: u64,
}

impl FieldElement {
    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    pub fn field(&self) -> PrimeField {
        PrimeField {
            modulus: self.modulus,
        }
    }

    fn check(self, other: FieldElement) {
        assert_eq!(
            self.modulus, other.modulus,
            "field elements with different moduli"
        );
    }

    pub fn add(self, other: FieldElement) -> FieldElement {
        self.check(other);
        FieldElement {
            value: (self.value + other.value) % self.modulus,
            modulus: self.modulus,
        }
    }

    pub fn sub(self, other: FieldElement) -> FieldElement {
        self.check(other);
        FieldElement {
            value: (self.modulus + self.value - other.value) % self.modulus,
            modulus: self.modulus,
        }
    }

    pub fn neg(self) -> FieldElement {
        FieldElement {
            value: (self.modulus - self.value) % self.modulus,
            modulus: self.modulus,
        }
    }

    pub fn mul(self, other: FieldElement) -> FieldElement {
        self.check(other);
        FieldElement {
            value: (self.value as u128 * other.value as u128 % self.modulus as u128) as u64,
            modulus: self.modulus,
        }
    }

    /// Multiplicative inverse by extended Euclid. Panics on zero.
    pub fn inv(self) -> FieldElement {
        assert!(!self.is_zero(), "inverse of zero");
        let (mut r0, mut r1) = (self.modulus as i128, self.value as i128);
        let (mut t0, mut t1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        debug_assert_eq!(r0, 1);
        let p = self.modulus as i128;
        FieldElement {
            value: t0.rem_euclid(p) as u64,
            modulus: self.modulus,
        }
    }
}

/// Dense row-major matrix over GF(p).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    modulus: u64,
    entries: Vec<FieldElement>,
}

/// Output of [`rref`]: the reduced form, its pivot columns, and the rank.
#[derive(Clone, Debug)]
pub struct Rref {
    pub matrix: Matrix,
    pub pivots: Vec<usize>,
    pub rank: usize,
}

impl Matrix {
    pub fn zero(field: PrimeField, rows: usize, cols: usize) -> Matrix {
        Matrix {
            rows,
            cols,
            modulus: field.modulus(),
            entries: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: PrimeField, n: usize) -> Matrix {
        let mut m = Matrix::zero(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_rows(field: PrimeField, rows: Vec<Vec<i64>>) -> Matrix {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut entries = Vec::with_capacity(r * c);
        for row in &rows {
            assert_eq!(row.len(), c, "ragged rows");
            for &x in row {
                entries.push(field.elem(x));
            }
        }
        Matrix {
            rows: r,
            cols: c,
            modulus: field.modulus(),
            entries,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> PrimeField {
        PrimeField {
            modulus: self.modulus,
        }
    }

    pub fn get(&self, i: usize, j: usize) -> FieldElement {
        self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: FieldElement) {
        assert_eq!(value.modulus(), self.modulus);
        self.entries[i * self.cols + j] = value;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let field = self.field();
        let mut out = Matrix::zero(field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j).add(a.mul(other.get(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch("matrix add".into()));
        }
        let mut out = self.clone();
        for (a, b) in out.entries.iter_mut().zip(&other.entries) {
            *a = a.add(*b);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch("matrix sub".into()));
        }
        let mut out = self.clone();
        for (a, b) in out.entries.iter_mut().zip(&other.entries) {
            *a = a.sub(*b);
        }
        Ok(out)
    }

    pub fn neg(&self) -> Matrix {
        let mut out = self.clone();
        for a in out.entries.iter_mut() {
            *a = a.neg();
        }
        out
    }

    pub fn scale(&self, c: FieldElement) -> Matrix {
        let mut out = self.clone();
        for a in out.entries.iter_mut() {
            *a = a.mul(c);
        }
        out
    }

    /// Horizontal concatenation [self | other].
    pub fn hstack(&self, other: &Matrix) -> Result<Matrix> {
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch("hstack".into()));
        }
        let field = self.field();
        let mut out = Matrix::zero(field, self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j));
            }
            for j in 0..other.cols {
                out.set(i, self.cols + j, other.get(i, j));
            }
        }
        Ok(out)
    }

    pub fn column(&self, j: usize) -> Vec<FieldElement> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn from_column(field: PrimeField, col: &[FieldElement]) -> Matrix {
        let mut m = Matrix::zero(field, col.len(), 1);
        for (i, &x) in col.iter().enumerate() {
            m.set(i, 0, x);
        }
        m
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

/// Reduced row echelon form, pivot columns and rank.
pub fn rref(m: &Matrix) -> Rref {
    let mut mat = m.clone();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..mat.cols {
        if row == mat.rows {
            break;
        }
        let Some(pivot_row) = (row..mat.rows).find(|&r| !mat.get(r, col).is_zero()) else {
            continue;
        };
        mat.swap_rows(row, pivot_row);
        let inv = mat.get(row, col).inv();
        for j in col..mat.cols {
            let v = mat.get(row, j).mul(inv);
            mat.set(row, j, v);
        }
        for r in 0..mat.rows {
            if r == row {
                continue;
            }
            let factor = mat.get(r, col);
            if factor.is_zero() {
                continue;
            }
            for j in col..mat.cols {
                let v = mat.get(r, j).sub(factor.mul(mat.get(row, j)));
                mat.set(r, j, v);
            }
        }
        pivots.push(col);
        row += 1;
    }
    let rank = pivots.len();
    Rref {
        matrix: mat,
        pivots,
        rank,
    }
}

pub fn rank(m: &Matrix) -> usize {
    rref(m).rank
}

/// A particular solution X of a*X = b, or None when the system is
/// inconsistent. Any particular solution is acceptable; free variables
/// are set to zero.
pub fn solve(a: &Matrix, b: &Matrix) -> Result<Option<Matrix>> {
    if a.rows != b.rows {
        return Err(Error::DimensionMismatch(format!(
            "solve: lhs has {} rows, rhs has {}",
            a.rows, b.rows
        )));
    }
    let field = a.field();
    let aug = a.hstack(b)?;
    let red = rref(&aug);
    // A pivot inside the b-columns means inconsistency.
    if red.pivots.iter().any(|&c| c >= a.cols) {
        return Ok(None);
    }
    let mut x = Matrix::zero(field, a.cols, b.cols);
    for (r, &c) in red.pivots.iter().enumerate() {
        for j in 0..b.cols {
            x.set(c, j, red.matrix.get(r, a.cols + j));
        }
    }
    Ok(Some(x))
}

/// Columns form a basis of ker(a); column count is cols(a) - rank(a).
pub fn kernel_basis(a: &Matrix) -> Matrix {
    let field = a.field();
    let red = rref(a);
    let pivot_set: Vec<bool> = {
        let mut v = vec![false; a.cols];
        for &c in &red.pivots {
            v[c] = true;
        }
        v
    };
    let free: Vec<usize> = (0..a.cols).filter(|&c| !pivot_set[c]).collect();
    let mut basis = Matrix::zero(field, a.cols, free.len());
    for (k, &fc) in free.iter().enumerate() {
        basis.set(fc, k, field.one());
        for (r, &pc) in red.pivots.iter().enumerate() {
            basis.set(pc, k, red.matrix.get(r, fc).neg());
        }
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn prime_check() {
        assert!(PrimeField::new(2).is_ok());
        assert!(PrimeField::new(3).is_ok());
        assert!(PrimeField::new(2147483647).is_ok());
        assert!(PrimeField::new(1).is_err());
        assert!(PrimeField::new(4).is_err());
        assert!(PrimeField::new(0).is_err());
    }

    #[test]
    fn rref_identity() {
        let f = gf(2);
        let id = Matrix::identity(f, 3);
        let r = rref(&id);
        assert_eq!(r.matrix, id);
        assert_eq!(r.pivots, vec![0, 1, 2]);
        assert_eq!(r.rank, 3);
    }

    #[test]
    fn rref_zero() {
        let f = gf(2);
        let z = Matrix::zero(f, 2, 4);
        let r = rref(&z);
        assert_eq!(r.matrix, z);
        assert!(r.pivots.is_empty());
        assert_eq!(r.rank, 0);
    }

    #[test]
    fn rref_rank_one() {
        // hand row-reduction: [[1,1],[1,1]] over GF(2) -> [[1,1],[0,0]]
        let f = gf(2);
        let m = Matrix::from_rows(f, vec![vec![1, 1], vec![1, 1]]);
        let r = rref(&m);
        assert_eq!(r.matrix, Matrix::from_rows(f, vec![vec![1, 1], vec![0, 0]]));
        assert_eq!(r.rank, 1);
    }

    #[test]
    fn solve_identity_and_inconsistent() {
        let f = gf(3);
        let id = Matrix::identity(f, 3);
        let b = Matrix::from_rows(f, vec![vec![1], vec![2], vec![0]]);
        assert_eq!(solve(&id, &b).unwrap().unwrap(), b);

        let z = Matrix::zero(f, 2, 2);
        let b = Matrix::from_rows(f, vec![vec![1], vec![0]]);
        assert!(solve(&z, &b).unwrap().is_none());
    }

    #[test]
    fn solve_random_consistent() {
        // b = a*x0 for a random x0, so a solution must exist and verify.
        use rand::{Rng, SeedableRng};
        let f = gf(3);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let mut a = Matrix::zero(f, 6, 4);
            for i in 0..6 {
                for j in 0..4 {
                    a.set(i, j, f.elem(rng.gen_range(0..3)));
                }
            }
            let mut x0 = Matrix::zero(f, 4, 2);
            for i in 0..4 {
                for j in 0..2 {
                    x0.set(i, j, f.elem(rng.gen_range(0..3)));
                }
            }
            let b = a.mul(&x0).unwrap();
            let x = solve(&a, &b).unwrap().expect("consistent by construction");
            assert_eq!(a.mul(&x).unwrap(), b);
        }
    }

    #[test]
    fn solve_dimension_mismatch() {
        let f = gf(2);
        let a = Matrix::zero(f, 2, 2);
        let b = Matrix::zero(f, 3, 1);
        assert!(solve(&a, &b).is_err());
    }

    #[test]
    fn kernel_of_identity_and_zero() {
        let f = gf(2);
        assert_eq!(kernel_basis(&Matrix::identity(f, 4)).cols(), 0);
        let z = Matrix::zero(f, 3, 3);
        let k = kernel_basis(&z);
        assert_eq!(k, Matrix::identity(f, 3));
    }

    #[test]
    fn kernel_row_vector() {
        // brute force over GF(2)^2: ker [[1,1]] = span{(1,1)}
        let f = gf(2);
        let m = Matrix::from_rows(f, vec![vec![1, 1]]);
        let k = kernel_basis(&m);
        assert_eq!(k.cols(), 1);
        assert_eq!(k.get(0, 0), f.one());
        assert_eq!(k.get(1, 0), f.one());
        assert!(m.mul(&k).unwrap().is_zero());
    }

    proptest::proptest! {
        #[test]
        fn prop_rref_idempotent(seed in 0u64..500) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let p = [2u64, 3, 5][rng.gen_range(0..3)];
            let f = gf(p);
            let rows = rng.gen_range(0..6);
            let cols = rng.gen_range(0..6);
            let mut m = Matrix::zero(f, rows, cols);
            for i in 0..rows {
                for j in 0..cols {
                    m.set(i, j, f.elem(rng.gen_range(0..p as i64)));
                }
            }
            let r1 = rref(&m);
            let r2 = rref(&r1.matrix);
            proptest::prop_assert_eq!(&r1.matrix, &r2.matrix);
            proptest::prop_assert_eq!(r1.rank, r2.rank);

            // kernel properties: a*K = 0 and nullity = cols - rank
            let k = kernel_basis(&m);
            proptest::prop_assert!(m.mul(&k).unwrap().is_zero());
            proptest::prop_assert_eq!(k.cols(), cols - r1.rank);
            proptest::prop_assert_eq!(rank(&k), k.cols());
        }
    }
}
