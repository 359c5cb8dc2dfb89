//! Bounded complexes of vertex projectives.
//!
//! A term is an ordered list of vertices, encoding the direct sum of the
//! right projectives P_v = e_v A. Differentials are matrices over the
//! algebra whose (i, j) entry lies in the hom set from the j-th source
//! summand to the i-th target summand, i.e. among the paths from the
//! target vertex to the source vertex. Indexing is cohomological:
//! differentials raise degree, `X[k]^n = X^{n+k}` and `d_{X[k]} = (-1)^k d_X`.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::algebra::{Algebra, AlgebraElement};
use crate::error::{Error, Result};
use crate::linalg::{self, FieldElement, Matrix};

/// Dense matrix with entries in the algebra, used for differentials and
/// for components of chain maps and homotopies.
#[derive(Clone, Debug, PartialEq)]
pub struct MapMatrix {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<AlgebraElement>,
}

impl MapMatrix {
    pub fn zero(rows: usize, cols: usize) -> MapMatrix {
        MapMatrix {
            rows,
            cols,
            entries: vec![AlgebraElement::default(); rows * cols],
        }
    }

    /// Diagonal of vertex idempotents: the identity on a term.
    pub fn identity(alg: &Algebra, vertices: &[usize]) -> MapMatrix {
        let n = vertices.len();
        let mut m = MapMatrix::zero(n, n);
        for (i, &v) in vertices.iter().enumerate() {
            m.set(i, i, alg.idempotent(v));
        }
        m
    }

    pub fn get(&self, i: usize, j: usize) -> &AlgebraElement {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: AlgebraElement) {
        self.entries[i * self.cols + j] = value;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn mul(&self, alg: &Algebra, other: &MapMatrix) -> Result<MapMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "map matrices {}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = MapMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let term = alg.multiply(a, b);
                    let v = alg.add(out.get(i, j), &term);
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, alg: &Algebra, other: &MapMatrix) -> Result<MapMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch("map matrix add".into()));
        }
        let mut out = self.clone();
        for (a, b) in out.entries.iter_mut().zip(&other.entries) {
            *a = alg.add(a, b);
        }
        Ok(out)
    }

    pub fn sub(&self, alg: &Algebra, other: &MapMatrix) -> Result<MapMatrix> {
        self.add(alg, &other.neg(alg))
    }

    pub fn neg(&self, alg: &Algebra) -> MapMatrix {
        MapMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| alg.neg(e)).collect(),
        }
    }

    pub fn scale(&self, alg: &Algebra, c: FieldElement) -> MapMatrix {
        MapMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| alg.scale(c, e)).collect(),
        }
    }

    /// Block matrix [[a, b], [c, d]].
    pub fn block2x2(a: &MapMatrix, b: &MapMatrix, c: &MapMatrix, d: &MapMatrix) -> MapMatrix {
        assert_eq!(a.rows, b.rows);
        assert_eq!(c.rows, d.rows);
        assert_eq!(a.cols, c.cols);
        assert_eq!(b.cols, d.cols);
        let rows = a.rows + c.rows;
        let cols = a.cols + b.cols;
        let mut out = MapMatrix::zero(rows, cols);
        for i in 0..a.rows {
            for j in 0..a.cols {
                out.set(i, j, a.get(i, j).clone());
            }
            for j in 0..b.cols {
                out.set(i, a.cols + j, b.get(i, j).clone());
            }
        }
        for i in 0..c.rows {
            for j in 0..c.cols {
                out.set(a.rows + i, j, c.get(i, j).clone());
            }
            for j in 0..d.cols {
                out.set(a.rows + i, a.cols + j, d.get(i, j).clone());
            }
        }
        out
    }

    /// Copies `block` into `self` with upper-left corner (row, col).
    pub fn paste(&mut self, row: usize, col: usize, block: &MapMatrix) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.set(row + i, col + j, block.get(i, j).clone());
            }
        }
    }

    pub fn submatrix(
        &self,
        row: usize,
        col: usize,
        rows: usize,
        cols: usize,
    ) -> MapMatrix {
        let mut out = MapMatrix::zero(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                out.set(i, j, self.get(row + i, col + j).clone());
            }
        }
        out
    }
}

/// A bounded complex of vertex projectives over a shared algebra.
///
/// Normal form: `terms` holds only nonempty degrees; `diffs[n]` is stored
/// exactly when both degree n and n+1 are present (zero matrices included),
/// so structural equality is meaningful.
#[derive(Clone, Debug, PartialEq)]
pub struct Complex {
    algebra: Arc<Algebra>,
    terms: BTreeMap<i64, Vec<usize>>,
    diffs: BTreeMap<i64, MapMatrix>,
}

impl Complex {
    pub fn new(
        algebra: Arc<Algebra>,
        terms: BTreeMap<i64, Vec<usize>>,
        diffs: BTreeMap<i64, MapMatrix>,
    ) -> Result<Complex> {
        let c = Complex {
            algebra,
            terms,
            diffs,
        };
        c.verify()?;
        Ok(c)
    }

    pub fn zero(algebra: Arc<Algebra>) -> Complex {
        Complex {
            algebra,
            terms: BTreeMap::new(),
            diffs: BTreeMap::new(),
        }
    }

    /// A single projective P_v placed in one degree.
    pub fn stalk(algebra: Arc<Algebra>, vertex: usize, degree: i64) -> Complex {
        let mut terms = BTreeMap::new();
        terms.insert(degree, vec![vertex]);
        Complex {
            algebra,
            terms,
            diffs: BTreeMap::new(),
        }
    }

    /// Several projectives in one degree.
    pub fn stalk_sum(algebra: Arc<Algebra>, vertices: Vec<usize>, degree: i64) -> Complex {
        if vertices.is_empty() {
            return Complex::zero(algebra);
        }
        let mut terms = BTreeMap::new();
        terms.insert(degree, vertices);
        Complex {
            algebra,
            terms,
            diffs: BTreeMap::new(),
        }
    }

    /// Exact structural checks: normal form, hom constraints, d after d = 0.
    pub fn verify(&self) -> Result<()> {
        for (n, list) in &self.terms {
            if list.is_empty() {
                return Err(Error::InvalidComplex(format!("empty term at degree {n}")));
            }
            for &v in list {
                if v >= self.algebra.vertex_count() {
                    return Err(Error::InvalidComplex(format!("bad vertex id {v}")));
                }
            }
        }
        for (&n, d) in &self.diffs {
            let (Some(src), Some(tgt)) = (self.terms.get(&n), self.terms.get(&(n + 1))) else {
                return Err(Error::InvalidComplex(format!(
                    "differential at degree {n} without both terms"
                )));
            };
            if d.rows != tgt.len() || d.cols != src.len() {
                return Err(Error::InvalidComplex(format!(
                    "differential at degree {n} has shape {}x{}, expected {}x{}",
                    d.rows,
                    d.cols,
                    tgt.len(),
                    src.len()
                )));
            }
            for (i, &w) in tgt.iter().enumerate() {
                for (j, &u) in src.iter().enumerate() {
                    if !d.get(i, j).supported_on(self.algebra.paths_from_to(w, u)) {
                        return Err(Error::InvalidComplex(format!(
                            "entry ({i},{j}) of d^{n} violates hom constraint"
                        )));
                    }
                }
            }
        }
        for (&n, _) in &self.terms {
            let has_both = self.terms.contains_key(&(n + 1));
            if has_both != self.diffs.contains_key(&n) {
                return Err(Error::InvalidComplex(format!(
                    "differential storage at degree {n} breaks normal form"
                )));
            }
        }
        // d^{n+1} d^n = 0, exactly
        for (&n, d) in &self.diffs {
            if let Some(d_next) = self.diffs.get(&(n + 1)) {
                let prod = d_next.mul(&self.algebra, d)?;
                if !prod.is_zero() {
                    return Err(Error::InvalidComplex(format!(
                        "d^{} after d^{} is nonzero",
                        n + 1,
                        n
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.algebra
    }

    pub fn is_zero_object(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degrees(&self) -> Vec<i64> {
        self.terms.keys().copied().collect()
    }

    pub fn term(&self, n: i64) -> &[usize] {
        self.terms.get(&n).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn terms(&self) -> &BTreeMap<i64, Vec<usize>> {
        &self.terms
    }

    pub fn diffs(&self) -> &BTreeMap<i64, MapMatrix> {
        &self.diffs
    }

    pub fn diff_or_zero(&self, n: i64) -> MapMatrix {
        self.diffs
            .get(&n)
            .cloned()
            .unwrap_or_else(|| MapMatrix::zero(self.term(n + 1).len(), self.term(n).len()))
    }

    pub fn total_summands(&self) -> usize {
        self.terms.values().map(Vec::len).sum()
    }

    /// Width of the support interval (0 for the zero object).
    pub fn amplitude(&self) -> i64 {
        match (self.terms.keys().next(), self.terms.keys().next_back()) {
            (Some(lo), Some(hi)) => hi - lo,
            _ => 0,
        }
    }

    /// X[k]: term n is X^{n+k}, differential picks up the sign (-1)^k.
    pub fn shift(&self, k: i64) -> Complex {
        let mut terms = BTreeMap::new();
        for (&n, list) in &self.terms {
            terms.insert(n - k, list.clone());
        }
        let sign_flip = k.rem_euclid(2) == 1;
        let mut diffs = BTreeMap::new();
        for (&n, d) in &self.diffs {
            let d = if sign_flip { d.neg(&self.algebra) } else { d.clone() };
            diffs.insert(n - k, d);
        }
        Complex {
            algebra: Arc::clone(&self.algebra),
            terms,
            diffs,
        }
    }

    /// Termwise concatenation with block-diagonal differentials.
    pub fn direct_sum(&self, other: &Complex) -> Result<Complex> {
        if **self.algebra() != **other.algebra() {
            return Err(Error::AlgebraMismatch);
        }
        let mut terms: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
        let degrees: std::collections::BTreeSet<i64> = self
            .terms
            .keys()
            .chain(other.terms.keys())
            .copied()
            .collect();
        for &n in &degrees {
            let mut list = self.term(n).to_vec();
            list.extend_from_slice(other.term(n));
            if !list.is_empty() {
                terms.insert(n, list);
            }
        }
        let mut diffs = BTreeMap::new();
        for &n in &degrees {
            if !terms.contains_key(&n) || !terms.contains_key(&(n + 1)) {
                continue;
            }
            let a = self.diff_or_zero(n);
            let z_top = MapMatrix::zero(self.term(n + 1).len(), other.term(n).len());
            let z_bot = MapMatrix::zero(other.term(n + 1).len(), self.term(n).len());
            let b = other.diff_or_zero(n);
            diffs.insert(n, MapMatrix::block2x2(&a, &z_top, &z_bot, &b));
        }
        let out = Complex {
            algebra: Arc::clone(&self.algebra),
            terms,
            diffs,
        };
        debug_assert!(out.verify().is_ok());
        Ok(out)
    }

    /// Dimension vector of H^n per vertex: homology of the k-linear complex
    /// X e_v for every vertex v. Degrees with all-zero homology are omitted.
    pub fn homology_dims(&self) -> BTreeMap<i64, Vec<usize>> {
        let alg = &self.algebra;
        let field = alg.field();
        let nv = alg.vertex_count();
        let mut out: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
        for v in 0..nv {
            // flatten X^n e_v = sum over summands of paths_from_to(w_i, v)
            let dim_at = |n: i64| -> usize {
                self.term(n)
                    .iter()
                    .map(|&w| alg.paths_from_to(w, v).len())
                    .sum()
            };
            let degrees = self.degrees();
            let mut ranks: BTreeMap<i64, usize> = BTreeMap::new();
            for &n in &degrees {
                let rows = dim_at(n + 1);
                let cols = dim_at(n);
                if rows == 0 || cols == 0 {
                    ranks.insert(n, 0);
                    continue;
                }
                let d = self.diff_or_zero(n);
                let src = self.term(n);
                let tgt = self.term(n + 1);
                let mut m = Matrix::zero(field, rows, cols);
                // columns: (source summand j, path q from u_j to v)
                let mut col = 0;
                for (j, &u) in src.iter().enumerate() {
                    for &q in alg.paths_from_to(u, v) {
                        // image of q in slot j: entries d[i][j] * q
                        let mut row = 0;
                        for (i, &w) in tgt.iter().enumerate() {
                            let prod = alg.multiply(d.get(i, j), &alg.path_elem(q));
                            for (off, &pid) in alg.paths_from_to(w, v).iter().enumerate() {
                                if let Some(&c) = prod.coeffs.get(&pid) {
                                    m.set(row + off, col, c);
                                }
                            }
                            row += alg.paths_from_to(w, v).len();
                        }
                        col += 1;
                    }
                }
                ranks.insert(n, linalg::rank(&m));
            }
            for &n in &degrees {
                let dim = dim_at(n);
                let r_out = ranks.get(&n).copied().unwrap_or(0);
                let r_in = ranks.get(&(n - 1)).copied().unwrap_or(0);
                let h = dim - r_out - r_in;
                if h > 0 {
                    out.entry(n).or_insert_with(|| vec![0; nv])[v] = h;
                }
            }
        }
        out
    }

    /// Total homology dimension (all degrees, all vertices).
    pub fn homology_total(&self) -> usize {
        self.homology_dims().values().flatten().sum()
    }

    /// True when homology is zero outside the given degree.
    pub fn homology_concentrated_in(&self, degree: i64) -> bool {
        self.homology_dims().keys().all(|&n| n == degree)
    }

    /// Reorders the summands of each term by the given permutations
    /// (new position i takes old summand perm[i]); differentials are
    /// conjugated accordingly. Used to build explicit block isomorphisms.
    pub fn permute_summands(&self, perms: &BTreeMap<i64, Vec<usize>>) -> Result<Complex> {
        let mut terms = BTreeMap::new();
        for (&n, list) in &self.terms {
            match perms.get(&n) {
                Some(p) => {
                    if p.len() != list.len() {
                        return Err(Error::ShapeMismatch(format!(
                            "permutation length at degree {n}"
                        )));
                    }
                    terms.insert(n, p.iter().map(|&i| list[i]).collect());
                }
                None => {
                    terms.insert(n, list.clone());
                }
            }
        }
        let identity = |len: usize| (0..len).collect::<Vec<usize>>();
        let mut diffs = BTreeMap::new();
        for (&n, d) in &self.diffs {
            let src_perm = perms
                .get(&n)
                .cloned()
                .unwrap_or_else(|| identity(self.term(n).len()));
            let tgt_perm = perms
                .get(&(n + 1))
                .cloned()
                .unwrap_or_else(|| identity(self.term(n + 1).len()));
            let mut nd = MapMatrix::zero(d.rows, d.cols);
            for i in 0..d.rows {
                for j in 0..d.cols {
                    nd.set(i, j, d.get(tgt_perm[i], src_perm[j]).clone());
                }
            }
            diffs.insert(n, nd);
        }
        Complex::new(Arc::clone(&self.algebra), terms, diffs)
    }
}
