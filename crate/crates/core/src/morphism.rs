//! Chain maps, homotopies, and the reduction of homotopy questions to
//! linear algebra over the field.
//!
//! A graded map of degree d between complexes X, Y is a family of matrices
//! X^n -> Y^{n+d} over the algebra. Flattening such a family over the hom
//! path bases turns "find a homotopy", "enumerate chain maps" and every
//! completion problem into one `solve`/`kernel_basis` call.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::complex::{Complex, MapMatrix};
use crate::error::{Error, Result};
use crate::linalg::{self, FieldElement, Matrix};

fn check_components(
    source: &Complex,
    target: &Complex,
    delta: i64,
    components: &BTreeMap<i64, MapMatrix>,
    what: &str,
) -> Result<()> {
    if **source.algebra() != **target.algebra() {
        return Err(Error::AlgebraMismatch);
    }
    let alg = source.algebra();
    for (&n, m) in components {
        let src = source.term(n);
        let tgt = target.term(n + delta);
        if src.is_empty() || tgt.is_empty() {
            return Err(Error::ShapeMismatch(format!(
                "{what} has a component at degree {n} where a term is zero"
            )));
        }
        if m.rows != tgt.len() || m.cols != src.len() {
            return Err(Error::ShapeMismatch(format!(
                "{what} component at degree {n} has shape {}x{}, expected {}x{}",
                m.rows,
                m.cols,
                tgt.len(),
                src.len()
            )));
        }
        for (i, &w) in tgt.iter().enumerate() {
            for (j, &u) in src.iter().enumerate() {
                if !m.get(i, j).supported_on(alg.paths_from_to(w, u)) {
                    return Err(Error::ShapeMismatch(format!(
                        "{what} entry ({i},{j}) at degree {n} violates hom constraint"
                    )));
                }
            }
        }
    }
    // normal form: a component is stored exactly when both terms are nonzero
    for &n in source.terms().keys() {
        let expected = !target.term(n + delta).is_empty();
        if expected != components.contains_key(&n) {
            return Err(Error::ShapeMismatch(format!(
                "{what} breaks component normal form at degree {n}"
            )));
        }
    }
    Ok(())
}

fn component_or_zero(
    components: &BTreeMap<i64, MapMatrix>,
    source: &Complex,
    target: &Complex,
    delta: i64,
    n: i64,
) -> MapMatrix {
    components
        .get(&n)
        .cloned()
        .unwrap_or_else(|| MapMatrix::zero(target.term(n + delta).len(), source.term(n).len()))
}

/// Drops zero-shaped components so maps compare structurally.
fn normalize(
    source: &Complex,
    target: &Complex,
    delta: i64,
    mut components: BTreeMap<i64, MapMatrix>,
) -> BTreeMap<i64, MapMatrix> {
    components.retain(|&n, m| {
        !source.term(n).is_empty() && !target.term(n + delta).is_empty() && {
            debug_assert_eq!(m.cols, source.term(n).len());
            true
        }
    });
    for &n in source.terms().keys() {
        if !target.term(n + delta).is_empty() {
            components.entry(n).or_insert_with(|| {
                MapMatrix::zero(target.term(n + delta).len(), source.term(n).len())
            });
        }
    }
    components
}

/// A degreewise map commuting with the differentials, exactly.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainMap {
    source: Complex,
    #[allow(dead_code)]
    target: Complex,
    #[allow(dead_code)]
    components: BTreeMap<i64, MapMatrix>,
}

impl ChainMap {
    pub fn new(
        source: Complex,
        target: Complex,
        components: BTreeMap<i64, MapMatrix>,
    ) -> Result<ChainMap> {
        let components = normalize(&source, &target, 0, components);
        let map = ChainMap {
            source,
            target,
            components,
        };
        map.verify()?;
        Ok(map)
    }

    /// Like [`ChainMap::new`] without the commutation check; used for maps
    /// that are built entry-by-entry and verified later.
    pub fn new_unchecked(
        source: Complex,
        target: Complex,
        components: BTreeMap<i64, MapMatrix>,
    ) -> Result<ChainMap> {
        let components = normalize(&source, &target, 0, components);
        check_components(&source, &target, 0, &components, "chain map")?;
        Ok(ChainMap {
            source,
            target,
            components,
        })
    }

    pub fn verify(&self) -> Result<()> {
        check_components(&self.source, &self.target, 0, &self.components, "chain map")?;
        let alg = self.source.algebra();
        let degrees: std::collections::BTreeSet<i64> = self
            .source
            .terms()
            .keys()
            .chain(self.target.terms().keys())
            .copied()
            .collect();
        for &n in &degrees {
            // f^{n+1} d_X^n = d_Y^n f^n
            let f_next = self.component_or_zero(n + 1);
            let f_cur = self.component_or_zero(n);
            let lhs = f_next.mul(alg, &self.source.diff_or_zero(n))?;
            let rhs = self.target.diff_or_zero(n).mul(alg, &f_cur)?;
            if lhs != rhs {
                return Err(Error::InvalidChainMap(format!(
                    "does not commute with differentials at degree {n}"
                )));
            }
        }
        Ok(())
    }

    pub fn source(&self) -> &Complex {
        &self.source
    }

    pub fn target(&self) -> &Complex {
        &self.target
    }

    pub fn components(&self) -> &BTreeMap<i64, MapMatrix> {
        &self.components
    }

    pub fn component_or_zero(&self, n: i64) -> MapMatrix {
        component_or_zero(&self.components, &self.source, &self.target, 0, n)
    }

    pub fn identity(x: &Complex) -> ChainMap {
        let alg = x.algebra();
        let components = x
            .terms()
            .iter()
            .map(|(&n, list)| (n, MapMatrix::identity(alg, list)))
            .collect();
        ChainMap {
            source: x.clone(),
            target: x.clone(),
            components,
        }
    }

    pub fn zero(source: &Complex, target: &Complex) -> ChainMap {
        let components = normalize(source, target, 0, BTreeMap::new());
        ChainMap {
            source: source.clone(),
            target: target.clone(),
            components,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.components.values().all(MapMatrix::is_zero)
    }

    /// self after other.
    pub fn compose(&self, other: &ChainMap) -> Result<ChainMap> {
        if other.target != self.source {
            return Err(Error::ShapeMismatch(
                "compose: inner target differs from outer source".into(),
            ));
        }
        let alg = self.source.algebra();
        let mut components = BTreeMap::new();
        for &n in other.source.terms().keys() {
            if self.target.term(n).is_empty() {
                continue;
            }
            let inner = other.component_or_zero(n);
            let outer = self.component_or_zero(n);
            components.insert(n, outer.mul(alg, &inner)?);
        }
        Ok(ChainMap {
            source: other.source.clone(),
            target: self.target.clone(),
            components: normalize(&other.source, &self.target, 0, components),
        })
    }

    pub fn add(&self, other: &ChainMap) -> Result<ChainMap> {
        if self.source != other.source || self.target != other.target {
            return Err(Error::ShapeMismatch("chain map add".into()));
        }
        let alg = self.source.algebra();
        let mut components = BTreeMap::new();
        for &n in self.source.terms().keys() {
            if self.target.term(n).is_empty() {
                continue;
            }
            components.insert(
                n,
                self.component_or_zero(n).add(alg, &other.component_or_zero(n))?,
            );
        }
        Ok(ChainMap {
            source: self.source.clone(),
            target: self.target.clone(),
            components,
        })
    }

    pub fn sub(&self, other: &ChainMap) -> Result<ChainMap> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> ChainMap {
        let alg = self.source.algebra();
        ChainMap {
            source: self.source.clone(),
            target: self.target.clone(),
            components: self
                .components
                .iter()
                .map(|(&n, m)| (n, m.neg(alg)))
                .collect(),
        }
    }

    pub fn scale(&self, c: FieldElement) -> ChainMap {
        let alg = self.source.algebra();
        ChainMap {
            source: self.source.clone(),
            target: self.target.clone(),
            components: self
                .components
                .iter()
                .map(|(&n, m)| (n, m.scale(alg, c)))
                .collect(),
        }
    }

    /// Shift as a map X[k] -> Y[k], with the sign (-1)^k on components so
    /// that cone(f[1]) equals cone(f)[1] on the nose.
    pub fn shift(&self, k: i64) -> ChainMap {
        let alg = self.source.algebra();
        let flip = k.rem_euclid(2) == 1;
        ChainMap {
            source: self.source.shift(k),
            target: self.target.shift(k),
            components: self
                .components
                .iter()
                .map(|(&n, m)| (n - k, if flip { m.neg(alg) } else { m.clone() }))
                .collect(),
        }
    }
}

/// A degree minus-one graded map h with components X^n -> Y^{n-1},
/// witnessing f - g = d_Y h + h d_X for some pair (f, g).
#[derive(Clone, Debug, PartialEq)]
pub struct Homotopy {
    source: Complex,
    #[allow(dead_code)]
    target: Complex,
    #[allow(dead_code)]
    components: BTreeMap<i64, MapMatrix>,
}

impl Homotopy {
    pub fn new(
        source: Complex,
        target: Complex,
        components: BTreeMap<i64, MapMatrix>,
    ) -> Result<Homotopy> {
        let components = normalize(&source, &target, -1, components);
        check_components(&source, &target, -1, &components, "homotopy")?;
        Ok(Homotopy {
            source,
            target,
            components,
        })
    }

    pub fn zero(source: &Complex, target: &Complex) -> Homotopy {
        Homotopy {
            components: normalize(source, target, -1, BTreeMap::new()),
            source: source.clone(),
            target: target.clone(),
        }
    }

    pub fn source(&self) -> &Complex {
        &self.source
    }

    pub fn target(&self) -> &Complex {
        &self.target
    }

    pub fn components(&self) -> &BTreeMap<i64, MapMatrix> {
        &self.components
    }

    pub fn component_or_zero(&self, n: i64) -> MapMatrix {
        component_or_zero(&self.components, &self.source, &self.target, -1, n)
    }

    /// d_Y h + h d_X, always a chain map.
    pub fn boundary(&self) -> ChainMap {
        let alg = self.source.algebra();
        let mut components = BTreeMap::new();
        for &n in self.source.terms().keys() {
            if self.target.term(n).is_empty() {
                continue;
            }
            let post = self
                .target
                .diff_or_zero(n - 1)
                .mul(alg, &self.component_or_zero(n))
                .expect("shapes agree");
            let pre = self
                .component_or_zero(n + 1)
                .mul(alg, &self.source.diff_or_zero(n))
                .expect("shapes agree");
            components.insert(n, post.add(alg, &pre).expect("shapes agree"));
        }
        ChainMap {
            source: self.source.clone(),
            target: self.target.clone(),
            components: normalize(&self.source, &self.target, 0, components),
        }
    }

    /// Checks that this homotopy witnesses f ~ g, exactly.
    pub fn witnesses(&self, f: &ChainMap, g: &ChainMap) -> Result<()> {
        if f.source() != &self.source
            || f.target() != &self.target
            || g.source() != &self.source
            || g.target() != &self.target
        {
            return Err(Error::ShapeMismatch("homotopy context".into()));
        }
        let expect = f.sub(g)?;
        if self.boundary() != expect {
            return Err(Error::InvalidHomotopy(
                "does not witness the asserted relation".into(),
            ));
        }
        Ok(())
    }

    pub fn add(&self, other: &Homotopy) -> Result<Homotopy> {
        if self.source != other.source || self.target != other.target {
            return Err(Error::ShapeMismatch("homotopy add".into()));
        }
        let alg = self.source.algebra();
        let mut components = BTreeMap::new();
        for &n in self.source.terms().keys() {
            if self.target.term(n - 1).is_empty() {
                continue;
            }
            components.insert(
                n,
                self.component_or_zero(n).add(alg, &other.component_or_zero(n))?,
            );
        }
        Ok(Homotopy {
            source: self.source.clone(),
            target: self.target.clone(),
            components,
        })
    }

    pub fn neg(&self) -> Homotopy {
        let alg = self.source.algebra();
        Homotopy {
            source: self.source.clone(),
            target: self.target.clone(),
            components: self
                .components
                .iter()
                .map(|(&n, m)| (n, m.neg(alg)))
                .collect(),
        }
    }

    /// g of h, for g: Y -> W.
    pub fn post_compose(&self, g: &ChainMap) -> Result<Homotopy> {
        if g.source() != &self.target {
            return Err(Error::ShapeMismatch("homotopy post-compose".into()));
        }
        let alg = self.source.algebra();
        let mut components = BTreeMap::new();
        for &n in self.source.terms().keys() {
            if g.target().term(n - 1).is_empty() {
                continue;
            }
            let m = g
                .component_or_zero(n - 1)
                .mul(alg, &self.component_or_zero(n))?;
            components.insert(n, m);
        }
        Ok(Homotopy {
            source: self.source.clone(),
            target: g.target().clone(),
            components: normalize(&self.source, g.target(), -1, components),
        })
    }

    /// h of g, for g: W -> X.
    pub fn pre_compose(&self, g: &ChainMap) -> Result<Homotopy> {
        if g.target() != &self.source {
            return Err(Error::ShapeMismatch("homotopy pre-compose".into()));
        }
        let alg = self.source.algebra();
        let mut components = BTreeMap::new();
        for &n in g.source().terms().keys() {
            if self.target.term(n - 1).is_empty() {
                continue;
            }
            let m = self
                .component_or_zero(n)
                .mul(alg, &g.component_or_zero(n))?;
            components.insert(n, m);
        }
        Ok(Homotopy {
            source: g.source().clone(),
            target: self.target.clone(),
            components: normalize(g.source(), &self.target, -1, components),
        })
    }
}

/// Flattened coordinates for the space of degree-`delta` graded maps
/// X -> Y, one field coordinate per (degree, entry, hom path).
pub struct MapSpace {
    source: Complex,
    blocks: Vec<SpaceBlock>,
    dim: usize,
}

struct SpaceBlock {
    degree: i64,
    rows: usize,
    cols: usize,
    entry_paths: Vec<Vec<usize>>,
    entry_offsets: Vec<usize>,
    offset: usize,
}

impl MapSpace {
    pub fn new(source: &Complex, target: &Complex, delta: i64) -> MapSpace {
        let alg = source.algebra();
        let mut blocks = Vec::new();
        let mut offset = 0;
        for (&n, src) in source.terms() {
            let tgt = target.term(n + delta);
            if tgt.is_empty() {
                continue;
            }
            let rows = tgt.len();
            let cols = src.len();
            let mut entry_paths = Vec::with_capacity(rows * cols);
            let mut entry_offsets = Vec::with_capacity(rows * cols + 1);
            let mut local = 0;
            for &w in tgt {
                for &u in src {
                    entry_offsets.push(local);
                    let paths = alg.paths_from_to(w, u).to_vec();
                    local += paths.len();
                    entry_paths.push(paths);
                }
            }
            entry_offsets.push(local);
            blocks.push(SpaceBlock {
                degree: n,
                rows,
                cols,
                entry_paths,
                entry_offsets,
                offset,
            });
            offset += local;
        }
        MapSpace {
            source: source.clone(),
            blocks,
            dim: offset,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn flatten(&self, components: &BTreeMap<i64, MapMatrix>) -> Result<Vec<FieldElement>> {
        let field = self.source.algebra().field();
        let mut out = vec![field.zero(); self.dim];
        for block in &self.blocks {
            let Some(m) = components.get(&block.degree) else {
                continue;
            };
            if m.rows != block.rows || m.cols != block.cols {
                return Err(Error::ShapeMismatch(format!(
                    "flatten at degree {}",
                    block.degree
                )));
            }
            for i in 0..block.rows {
                for j in 0..block.cols {
                    let idx = i * block.cols + j;
                    let paths = &block.entry_paths[idx];
                    for (&p, &c) in &m.get(i, j).coeffs {
                        let Some(pos) = paths.iter().position(|&q| q == p) else {
                            return Err(Error::ShapeMismatch(format!(
                                "entry ({i},{j}) at degree {} violates hom constraint",
                                block.degree
                            )));
                        };
                        out[block.offset + block.entry_offsets[idx] + pos] = c;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn unflatten(&self, vec: &[FieldElement]) -> BTreeMap<i64, MapMatrix> {
        assert_eq!(vec.len(), self.dim);
        let alg = self.source.algebra();
        let mut out = BTreeMap::new();
        for block in &self.blocks {
            let mut m = MapMatrix::zero(block.rows, block.cols);
            for i in 0..block.rows {
                for j in 0..block.cols {
                    let idx = i * block.cols + j;
                    let paths = &block.entry_paths[idx];
                    let mut elem = alg.zero_elem();
                    for (pos, &p) in paths.iter().enumerate() {
                        let c = vec[block.offset + block.entry_offsets[idx] + pos];
                        if !c.is_zero() {
                            elem = alg.add(&elem, &alg.scale(c, &alg.path_elem(p)));
                        }
                    }
                    m.set(i, j, elem);
                }
            }
            out.insert(block.degree, m);
        }
        out
    }

    /// Iterates basis vectors as singleton component families.
    fn basis_components(&self) -> Vec<(i64, MapMatrix)> {
        let alg = self.source.algebra();
        let mut out = Vec::with_capacity(self.dim);
        for block in &self.blocks {
            for i in 0..block.rows {
                for j in 0..block.cols {
                    let idx = i * block.cols + j;
                    for &p in &block.entry_paths[idx] {
                        let mut m = MapMatrix::zero(block.rows, block.cols);
                        m.set(i, j, alg.path_elem(p));
                        out.push((block.degree, m));
                    }
                }
            }
        }
        out
    }
}

/// Builds the matrix of a linear transformation from `input` coordinates to
/// `output` coordinates; `apply` maps one singleton component to the list of
/// output components it produces.
fn build_operator<F>(input: &MapSpace, output: &MapSpace, apply: F) -> Result<Matrix>
where
    F: Fn(i64, &MapMatrix) -> Result<Vec<(i64, MapMatrix)>>,
{
    let field = input.source.algebra().field();
    let mut out = Matrix::zero(field, output.dim(), input.dim());
    for (col, (degree, single)) in input.basis_components().into_iter().enumerate() {
        let mut components: BTreeMap<i64, MapMatrix> = BTreeMap::new();
        for (m, mat) in apply(degree, &single)? {
            if mat.rows == 0 || mat.cols == 0 {
                continue;
            }
            match components.get_mut(&m) {
                Some(existing) => {
                    *existing = existing.add(input.source.algebra(), &mat)?;
                }
                None => {
                    components.insert(m, mat);
                }
            }
        }
        let flat = output.flatten(&components)?;
        for (row, c) in flat.into_iter().enumerate() {
            if !c.is_zero() {
                out.set(row, col, c);
            }
        }
    }
    Ok(out)
}

/// The operator h -> d_Y h + h d_X from degree -1 maps to degree 0 maps.
pub fn boundary_operator(x: &Complex, y: &Complex) -> Result<(MapSpace, MapSpace, Matrix)> {
    let input = MapSpace::new(x, y, -1);
    let output = MapSpace::new(x, y, 0);
    let alg = Arc::clone(x.algebra());
    let xc = x.clone();
    let yc = y.clone();
    let op = build_operator(&input, &output, |m, single| {
        // singleton at degree m: X^m -> Y^{m-1}
        let mut out = Vec::new();
        let post = yc.diff_or_zero(m - 1).mul(&alg, single)?;
        out.push((m, post));
        let pre = single.mul(&alg, &xc.diff_or_zero(m - 1))?;
        out.push((m - 1, pre));
        Ok(out)
    })?;
    Ok((input, output, op))
}

/// The operator f -> d_Y f - f d_X from degree 0 maps to degree 1 maps;
/// its kernel is the space of chain maps.
pub fn chain_constraint_operator(x: &Complex, y: &Complex) -> Result<(MapSpace, MapSpace, Matrix)> {
    let input = MapSpace::new(x, y, 0);
    let output = MapSpace::new(x, y, 1);
    let alg = Arc::clone(x.algebra());
    let xc = x.clone();
    let yc = y.clone();
    let op = build_operator(&input, &output, |m, single| {
        let mut out = Vec::new();
        let post = yc.diff_or_zero(m).mul(&alg, single)?;
        out.push((m, post));
        let pre = single.mul(&alg, &xc.diff_or_zero(m - 1))?.neg(&alg);
        out.push((m - 1, pre));
        Ok(out)
    })?;
    Ok((input, output, op))
}

/// Matrix of f -> g . f on flattened degree-`delta` map spaces.
pub fn post_compose_operator(
    x: &Complex,
    y: &Complex,
    delta: i64,
    g: &ChainMap,
) -> Result<(MapSpace, MapSpace, Matrix)> {
    let input = MapSpace::new(x, y, delta);
    let output = MapSpace::new(x, g.target(), delta);
    let alg = Arc::clone(x.algebra());
    let gc = g.clone();
    let op = build_operator(&input, &output, |m, single| {
        Ok(vec![(m, gc.component_or_zero(m + delta).mul(&alg, single)?)])
    })?;
    Ok((input, output, op))
}

/// Matrix of f -> f . g on flattened degree-`delta` map spaces.
pub fn pre_compose_operator(
    x: &Complex,
    y: &Complex,
    delta: i64,
    g: &ChainMap,
) -> Result<(MapSpace, MapSpace, Matrix)> {
    let input = MapSpace::new(x, y, delta);
    let output = MapSpace::new(g.source(), y, delta);
    let alg = Arc::clone(x.algebra());
    let gc = g.clone();
    let op = build_operator(&input, &output, |m, single| {
        Ok(vec![(m, single.mul(&alg, &gc.component_or_zero(m))?)])
    })?;
    Ok((input, output, op))
}

/// A homotopy h with f = d h + h d when one exists; reduces to one solve
/// over the field.
pub fn is_nullhomotopic(f: &ChainMap) -> Result<Option<Homotopy>> {
    let (input, output, op) = boundary_operator(f.source(), f.target())?;
    let field = f.source().algebra().field();
    let rhs = output.flatten(f.components())?;
    let b = Matrix::from_column(field, &rhs);
    match linalg::solve(&op, &b)? {
        None => Ok(None),
        Some(x) => {
            let components = input.unflatten(&x.column(0));
            Ok(Some(Homotopy::new(
                f.source().clone(),
                f.target().clone(),
                components,
            )?))
        }
    }
}

/// A contraction (null homotopy of the identity) when the complex is
/// isomorphic to zero in the homotopy category.
pub fn is_contractible(x: &Complex) -> Result<Option<Homotopy>> {
    is_nullhomotopic(&ChainMap::identity(x))
}

/// Basis of the space of chain maps X -> Y (not modulo homotopy).
pub fn chain_map_basis(x: &Complex, y: &Complex) -> Result<Vec<ChainMap>> {
    let (input, _, op) = chain_constraint_operator(x, y)?;
    let kernel = linalg::kernel_basis(&op);
    let mut out = Vec::new();
    for k in 0..kernel.cols() {
        let components = input.unflatten(&kernel.column(k));
        out.push(ChainMap::new(x.clone(), y.clone(), components)?);
    }
    Ok(out)
}

/// Basis of chain maps modulo homotopy, as representatives.
pub fn hom_basis_mod_homotopy(x: &Complex, y: &Complex) -> Result<Vec<ChainMap>> {
    let (space0, _, constraint) = chain_constraint_operator(x, y)?;
    let kernel = linalg::kernel_basis(&constraint);
    let (_, _, boundary) = boundary_operator(x, y)?;
    // pivots of [boundary | kernel] landing in the kernel part pick
    // representatives independent modulo null-homotopic maps
    let stacked = boundary.hstack(&kernel)?;
    let red = linalg::rref(&stacked);
    let mut out = Vec::new();
    for &c in &red.pivots {
        if c >= boundary.cols() {
            let col = kernel.column(c - boundary.cols());
            let components = space0.unflatten(&col);
            out.push(ChainMap::new(x.clone(), y.clone(), components)?);
        }
    }
    Ok(out)
}

/// dim Hom(X, Y) in the homotopy category.
pub fn hom_dim_mod_homotopy(x: &Complex, y: &Complex) -> Result<usize> {
    let (_, _, constraint) = chain_constraint_operator(x, y)?;
    let (_, _, boundary) = boundary_operator(x, y)?;
    let chain_dim = constraint.cols() - linalg::rank(&constraint);
    Ok(chain_dim - linalg::rank(&boundary))
}

/// Direct sum together with its injection and projection chain maps.
pub struct DirectSum {
    pub complex: Complex,
    pub inject_left: ChainMap,
    pub inject_right: ChainMap,
    pub project_left: ChainMap,
    pub project_right: ChainMap,
}

pub fn direct_sum_with_maps(x: &Complex, y: &Complex) -> Result<DirectSum> {
    let sum = x.direct_sum(y)?;
    let alg = x.algebra();
    let mut inj_l = BTreeMap::new();
    let mut inj_r = BTreeMap::new();
    let mut proj_l = BTreeMap::new();
    let mut proj_r = BTreeMap::new();
    for (&n, list) in sum.terms() {
        let lx = x.term(n).len();
        let ly = y.term(n).len();
        debug_assert_eq!(list.len(), lx + ly);
        if lx > 0 {
            let id = MapMatrix::identity(alg, x.term(n));
            let mut inj = MapMatrix::zero(lx + ly, lx);
            inj.paste(0, 0, &id);
            inj_l.insert(n, inj);
            let mut proj = MapMatrix::zero(lx, lx + ly);
            proj.paste(0, 0, &id);
            proj_l.insert(n, proj);
        }
        if ly > 0 {
            let id = MapMatrix::identity(alg, y.term(n));
            let mut inj = MapMatrix::zero(lx + ly, ly);
            inj.paste(lx, 0, &id);
            inj_r.insert(n, inj);
            let mut proj = MapMatrix::zero(ly, lx + ly);
            proj.paste(0, lx, &id);
            proj_r.insert(n, proj);
        }
    }
    Ok(DirectSum {
        inject_left: ChainMap::new(x.clone(), sum.clone(), inj_l)?,
        inject_right: ChainMap::new(y.clone(), sum.clone(), inj_r)?,
        project_left: ChainMap::new(sum.clone(), x.clone(), proj_l)?,
        project_right: ChainMap::new(sum.clone(), y.clone(), proj_r)?,
        complex: sum,
    })
}

/// The column map (top; bottom): Z -> A + B.
pub fn column_map(top: &ChainMap, bottom: &ChainMap) -> Result<(DirectSum, ChainMap)> {
    if top.source() != bottom.source() {
        return Err(Error::ShapeMismatch("column map sources differ".into()));
    }
    let sum = direct_sum_with_maps(top.target(), bottom.target())?;
    let col = sum
        .inject_left
        .compose(top)?
        .add(&sum.inject_right.compose(bottom)?)?;
    Ok((sum, col))
}

/// The row map (left, right): A + B -> Z.
pub fn row_map(left: &ChainMap, right: &ChainMap) -> Result<(DirectSum, ChainMap)> {
    if left.target() != right.target() {
        return Err(Error::ShapeMismatch("row map targets differ".into()));
    }
    let sum = direct_sum_with_maps(left.source(), right.source())?;
    let row = left
        .compose(&sum.project_left)?
        .add(&right.compose(&sum.project_right)?)?;
    Ok((sum, row))
}

/// Builds the permuted complex along with the permutation isomorphism and
/// its inverse (both strict).
pub fn permutation_iso(
    x: &Complex,
    perms: &BTreeMap<i64, Vec<usize>>,
) -> Result<(Complex, ChainMap, ChainMap)> {
    let permuted = x.permute_summands(perms)?;
    let alg = x.algebra();
    let mut fwd = BTreeMap::new();
    let mut bwd = BTreeMap::new();
    for (&n, list) in x.terms() {
        let identity: Vec<usize> = (0..list.len()).collect();
        let perm = perms.get(&n).cloned().unwrap_or(identity);
        // forward: x -> permuted, row i of permuted takes old summand perm[i]
        let mut f = MapMatrix::zero(list.len(), list.len());
        let mut b = MapMatrix::zero(list.len(), list.len());
        for (i, &old) in perm.iter().enumerate() {
            f.set(i, old, alg.idempotent(list[old]));
            b.set(old, i, alg.idempotent(list[old]));
        }
        fwd.insert(n, f);
        bwd.insert(n, b);
    }
    let forward = ChainMap::new(x.clone(), permuted.clone(), fwd)?;
    let backward = ChainMap::new(permuted.clone(), x.clone(), bwd)?;
    Ok((permuted, forward, backward))
}
