//! Seeded generators for suite instances: complexes with valid
//! differentials, chain maps, endomorphisms, zero-class shift sums and
//! certified towers. Everything is deterministic under a fixed seed.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::Rng;

use crate::algebra::{a2_presentation, a3_presentation, loop_presentation, Algebra};
use crate::complex::{Complex, MapMatrix};
use crate::degeneration::nilpotency_certificate;
use crate::error::Result;
use crate::grothendieck::{tower_step_by_attachment, ShiftSum, ShiftSumEntry, Tower};
use crate::linalg::{self, FieldElement, Matrix};
use crate::morphism::{chain_map_basis, ChainMap};

/// The desk-scale algebra pool used by all randomized suites.
pub fn suite_algebras(p: u64) -> Vec<Arc<Algebra>> {
    vec![
        Arc::new(Algebra::build(a2_presentation(p)).expect("valid")),
        Arc::new(Algebra::build(a3_presentation(p)).expect("valid")),
        Arc::new(Algebra::build(loop_presentation(p)).expect("valid")),
    ]
}

/// Shape limits for random complexes.
#[derive(Clone, Copy, Debug)]
pub struct ComplexShape {
    pub max_amplitude: i64,
    pub max_per_degree: usize,
    pub max_total: usize,
}

impl Default for ComplexShape {
    fn default() -> Self {
        ComplexShape {
            max_amplitude: 2,
            max_per_degree: 2,
            max_total: 5,
        }
    }
}

fn hom_entry_basis(alg: &Algebra, rows: &[usize], cols: &[usize]) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for (i, &w) in rows.iter().enumerate() {
        for (j, &u) in cols.iter().enumerate() {
            for &p in alg.paths_from_to(w, u) {
                out.push((i, j, p));
            }
        }
    }
    out
}

fn unflatten_hom(
    alg: &Algebra,
    rows: &[usize],
    cols: &[usize],
    basis: &[(usize, usize, usize)],
    vec: &[FieldElement],
) -> MapMatrix {
    let mut m = MapMatrix::zero(rows.len(), cols.len());
    for (k, &(i, j, p)) in basis.iter().enumerate() {
        if vec[k].is_zero() {
            continue;
        }
        let add = alg.scale(vec[k], &alg.path_elem(p));
        let v = alg.add(m.get(i, j), &add);
        m.set(i, j, v);
    }
    m
}

fn flatten_hom(
    alg: &Algebra,
    basis: &[(usize, usize, usize)],
    m: &MapMatrix,
) -> Vec<FieldElement> {
    let field = alg.field();
    basis
        .iter()
        .map(|&(i, j, p)| {
            m.get(i, j)
                .coeffs
                .get(&p)
                .copied()
                .unwrap_or_else(|| field.zero())
        })
        .collect()
}

/// A bounded complex with random terms and a random valid differential:
/// each d^n is sampled from the kernel of right-composition with d^{n-1}.
pub fn random_complex<R: Rng>(alg: &Arc<Algebra>, shape: ComplexShape, rng: &mut R) -> Complex {
    let field = alg.field();
    let nv = alg.vertex_count();
    let lo = rng.gen_range(-2..=0i64);
    let amplitude = rng.gen_range(0..=shape.max_amplitude);
    let mut terms: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    let mut total = 0;
    for n in lo..=lo + amplitude {
        let budget = shape.max_total.saturating_sub(total);
        let count = rng.gen_range(0..=shape.max_per_degree.min(budget));
        if count == 0 {
            continue;
        }
        let list: Vec<usize> = (0..count).map(|_| rng.gen_range(0..nv)).collect();
        total += count;
        terms.insert(n, list);
    }
    let degrees: Vec<i64> = terms.keys().copied().collect();
    let mut diffs: BTreeMap<i64, MapMatrix> = BTreeMap::new();
    let mut prev: Option<(i64, MapMatrix)> = None;
    for &n in &degrees {
        if !terms.contains_key(&(n + 1)) {
            prev = None;
            continue;
        }
        let cols = terms[&n].clone();
        let rows = terms[&(n + 1)].clone();
        let basis = hom_entry_basis(alg, &rows, &cols);
        let d = if basis.is_empty() {
            MapMatrix::zero(rows.len(), cols.len())
        } else {
            let sample: Vec<FieldElement> = match &prev {
                Some((pn, dp)) if *pn == n - 1 => {
                    // constrain to candidates with candidate . d^{n-1} = 0
                    let prev_cols = terms[&(n - 1)].clone();
                    let out_basis = hom_entry_basis(alg, &rows, &prev_cols);
                    let mut op = Matrix::zero(field, out_basis.len(), basis.len());
                    for (k, &(i, j, p)) in basis.iter().enumerate() {
                        let mut single = MapMatrix::zero(rows.len(), cols.len());
                        single.set(i, j, alg.path_elem(p));
                        let image = single.mul(alg, dp).expect("shapes agree");
                        for (row, c) in flatten_hom(alg, &out_basis, &image)
                            .into_iter()
                            .enumerate()
                        {
                            if !c.is_zero() {
                                op.set(row, k, c);
                            }
                        }
                    }
                    let kernel = linalg::kernel_basis(&op);
                    let mut v = vec![field.zero(); basis.len()];
                    for col in 0..kernel.cols() {
                        let c = field.elem(rng.gen_range(0..field.modulus()) as i64);
                        if c.is_zero() {
                            continue;
                        }
                        for (idx, item) in v.iter_mut().enumerate() {
                            *item = item.add(kernel.get(idx, col).mul(c));
                        }
                    }
                    v
                }
                _ => (0..basis.len())
                    .map(|_| field.elem(rng.gen_range(0..field.modulus()) as i64))
                    .collect(),
            };
            unflatten_hom(alg, &rows, &cols, &basis, &sample)
        };
        prev = Some((n, d.clone()));
        diffs.insert(n, d);
    }
    Complex::new(Arc::clone(alg), terms, diffs).expect("construction preserves validity")
}

/// Random element of the chain-map space (may be zero).
pub fn random_chain_map<R: Rng>(x: &Complex, y: &Complex, rng: &mut R) -> Result<ChainMap> {
    let field = x.algebra().field();
    let basis = chain_map_basis(x, y)?;
    let mut out = ChainMap::zero(x, y);
    for b in &basis {
        let c = field.elem(rng.gen_range(0..field.modulus()) as i64);
        if !c.is_zero() {
            out = out.add(&b.scale(c))?;
        }
    }
    Ok(out)
}

pub fn random_endo<R: Rng>(z: &Complex, rng: &mut R) -> Result<ChainMap> {
    random_chain_map(z, z, rng)
}

/// Random endomorphism with a nilpotency certificate; falls back to zero
/// (always certifiable) after the given number of tries.
pub fn random_nilpotent_endo<R: Rng>(
    z: &Complex,
    tries: usize,
    rng: &mut R,
) -> Result<ChainMap> {
    for _ in 0..tries {
        let v = random_endo(z, rng)?;
        if v.is_zero() {
            continue;
        }
        if nilpotency_certificate(&v, None)?.is_some() {
            return Ok(v);
        }
    }
    Ok(ChainMap::zero(z, z))
}

/// Zero-class shift sum over one generator name with the given number of
/// even/odd pairs.
pub fn random_zero_class_shift_sum<R: Rng>(pairs: u64, rng: &mut R) -> ShiftSum {
    let mut evens: BTreeMap<i64, u64> = BTreeMap::new();
    let mut odds: BTreeMap<i64, u64> = BTreeMap::new();
    for _ in 0..pairs {
        let e = 2 * rng.gen_range(-2..=2i64);
        let o = 2 * rng.gen_range(-2..=2i64) + 1;
        *evens.entry(e).or_insert(0) += 1;
        *odds.entry(o).or_insert(0) += 1;
    }
    let mut entries = Vec::new();
    for (shift, multiplicity) in evens.into_iter().chain(odds) {
        entries.push(ShiftSumEntry {
            generator: "S".into(),
            shift,
            multiplicity,
        });
    }
    ShiftSum { entries }
}

/// Random certified tower of the given length: each step attaches a
/// random stalk generator along a random chain map.
pub fn random_tower<R: Rng>(alg: &Arc<Algebra>, length: usize, rng: &mut R) -> Result<Tower> {
    let nv = alg.vertex_count();
    let mut current = Complex::zero(Arc::clone(alg));
    let mut steps = Vec::new();
    for _ in 0..length {
        let vertex = rng.gen_range(0..nv);
        let generator = Complex::stalk(Arc::clone(alg), vertex, 0);
        let shift = rng.gen_range(-1..=1i64);
        let attach_source = generator.shift(shift - 1);
        let attach = random_chain_map(&attach_source, &current, rng)?;
        let step = tower_step_by_attachment(&current, &generator, shift, &attach)?;
        current = step.map.target().clone();
        steps.push(step);
    }
    Ok(Tower { steps })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn random_complexes_are_valid() {
        for alg in suite_algebras(2).iter().chain(&suite_algebras(3)) {
            let mut rng = ChaCha8Rng::seed_from_u64(42);
            for _ in 0..25 {
                let x = random_complex(alg, ComplexShape::default(), &mut rng);
                x.verify().unwrap();
            }
        }
    }

    #[test]
    fn random_chain_maps_commute() {
        let algs = suite_algebras(3);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10 {
            let alg = &algs[rng.gen_range(0..algs.len())];
            let x = random_complex(alg, ComplexShape::default(), &mut rng);
            let y = random_complex(alg, ComplexShape::default(), &mut rng);
            let f = random_chain_map(&x, &y, &mut rng).unwrap();
            f.verify().unwrap();
        }
    }

    #[test]
    fn random_towers_verify() {
        let algs = suite_algebras(2);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for len in 1..=3 {
            let tower = random_tower(&algs[0], len, &mut rng).unwrap();
            tower.verify().unwrap();
        }
    }

    #[test]
    fn zero_class_sums_have_balanced_parity() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let pairs = rng.gen_range(1..=8);
            let sum = random_zero_class_shift_sum(pairs, &mut rng);
            assert_eq!(sum.pair_count().unwrap(), pairs);
        }
    }
}
