//! Grothendieck-group classes in the projective basis, the even/odd pair
//! decomposition of zero-class shift sums, and the two constructions
//! turning a filtration tower into explicit degeneration witnesses.

use std::collections::BTreeMap;

use crate::complex::Complex;
use crate::degeneration::{left_witness, DegenerationWitness};
use crate::error::{Error, Result};
use crate::morphism::{direct_sum_with_maps, permutation_iso, ChainMap};
use crate::triangle::{cone, is_iso, strict_iso_certificate, IsoCertificate};

/// Integer class vector over the vertex projectives.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct K0Class(pub Vec<i64>);

impl K0Class {
    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn add(&self, other: &K0Class) -> K0Class {
        K0Class(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn neg(&self) -> K0Class {
        K0Class(self.0.iter().map(|&a| -a).collect())
    }
}

/// Alternating sum of vertex counts over the degrees.
pub fn k0_class(x: &Complex) -> K0Class {
    let nv = x.algebra().vertex_count();
    let mut out = vec![0i64; nv];
    for (&n, list) in x.terms() {
        let sign = if n.rem_euclid(2) == 0 { 1 } else { -1 };
        for &v in list {
            out[v] += sign;
        }
    }
    K0Class(out)
}

/// A formal sum of shifted generators: pairwise distinct (generator, shift)
/// with positive multiplicities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShiftSum {
    pub entries: Vec<ShiftSumEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShiftSumEntry {
    pub generator: String,
    pub shift: i64,
    pub multiplicity: u64,
}

impl ShiftSum {
    pub fn verify(&self) -> Result<()> {
        let mut seen = std::collections::HashSet::new();
        for e in &self.entries {
            if e.multiplicity == 0 {
                return Err(Error::InvalidInput("zero multiplicity entry".into()));
            }
            if !seen.insert((e.generator.clone(), e.shift)) {
                return Err(Error::InvalidInput(format!(
                    "duplicate entry ({}, {})",
                    e.generator, e.shift
                )));
            }
        }
        Ok(())
    }

    /// The common number of even-shift and odd-shift copies per generator;
    /// an error names the first generator whose alternating sum is nonzero.
    pub fn pair_count(&self) -> Result<u64> {
        let mut per_gen: BTreeMap<&str, (u64, u64)> = BTreeMap::new();
        for e in &self.entries {
            let slot = per_gen.entry(&e.generator).or_insert((0, 0));
            if e.shift.rem_euclid(2) == 0 {
                slot.0 += e.multiplicity;
            } else {
                slot.1 += e.multiplicity;
            }
        }
        let mut total = 0;
        for (gen, (even, odd)) in per_gen {
            if even != odd {
                return Err(Error::NonzeroClass(gen.to_string()));
            }
            total += even;
        }
        Ok(total)
    }
}

/// One output pair (S[even] (+) S[odd])^multiplicity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShiftPair {
    pub generator: String,
    pub even_shift: i64,
    pub odd_shift: i64,
    pub multiplicity: u64,
}

/// Decomposes a zero-class shift sum into even/odd pairs by the greedy
/// peel: repeatedly take q = minimal current multiplicity and remove q
/// copies of the smallest even shift together with q copies of the
/// largest odd shift. Output pairs re-expand to exactly the input.
pub fn pair_decompose(sum: &ShiftSum) -> Result<Vec<ShiftPair>> {
    sum.verify()?;
    sum.pair_count()?;
    let mut gens: BTreeMap<String, BTreeMap<i64, u64>> = BTreeMap::new();
    for e in &sum.entries {
        *gens
            .entry(e.generator.clone())
            .or_default()
            .entry(e.shift)
            .or_insert(0) += e.multiplicity;
    }
    let mut out = Vec::new();
    for (gen, mut shifts) in gens {
        while !shifts.is_empty() {
            let q = *shifts.values().min().expect("nonempty");
            let even = *shifts
                .keys()
                .filter(|k| k.rem_euclid(2) == 0)
                .min()
                .expect("zero class keeps evens while odds remain");
            let odd = *shifts
                .keys()
                .filter(|k| k.rem_euclid(2) == 1)
                .max()
                .expect("zero class keeps odds while evens remain");
            for key in [even, odd] {
                let m = shifts.get_mut(&key).expect("present");
                *m -= q;
                if *m == 0 {
                    shifts.remove(&key);
                }
            }
            out.push(ShiftPair {
                generator: gen.clone(),
                even_shift: even,
                odd_shift: odd,
                multiplicity: q,
            });
        }
    }
    out.sort_by(|a, b| {
        (&a.generator, a.even_shift, a.odd_shift).cmp(&(&b.generator, b.even_shift, b.odd_shift))
    });
    Ok(out)
}

/// One step of a filtration tower: the map into the next object and the
/// certified cone tag.
#[derive(Clone, Debug)]
pub struct TowerStep {
    /// f_k: M_{k-1} -> M_k.
    pub map: ChainMap,
    /// The tagged generator S_k.
    pub cone_gen: Complex,
    /// The tagged shift r_k.
    pub cone_shift: i64,
    /// Certified isomorphism cone(f_k) -> S_k[r_k].
    pub cone_iso: ChainMap,
}

/// A sequence 0 = M_0 -> M_1 -> ... -> M_n with certified cone tags.
#[derive(Clone, Debug)]
pub struct Tower {
    pub steps: Vec<TowerStep>,
}

impl Tower {
    pub fn top(&self) -> Result<&Complex> {
        self.steps
            .last()
            .map(|s| s.map.target())
            .ok_or_else(|| Error::InvalidTower("empty tower".into()))
    }

    /// The cone complexes C_k = cone(f_k), in step order.
    pub fn cones(&self) -> Result<Vec<Complex>> {
        self.steps
            .iter()
            .map(|s| crate::triangle::cone_complex(&s.map))
            .collect()
    }

    /// Checks chaining, the zero base, and every cone-tag certificate.
    pub fn verify(&self) -> Result<Vec<IsoCertificate>> {
        if self.steps.is_empty() {
            return Err(Error::InvalidTower("empty tower".into()));
        }
        if !self.steps[0].map.source().is_zero_object() {
            return Err(Error::InvalidTower(
                "tower must start at the zero object".into(),
            ));
        }
        for pair in self.steps.windows(2) {
            if pair[0].map.target() != pair[1].map.source() {
                return Err(Error::InvalidTower("tower maps do not chain".into()));
            }
        }
        let mut certs = Vec::new();
        for (k, step) in self.steps.iter().enumerate() {
            let cone_k = crate::triangle::cone_complex(&step.map)?;
            let tagged = step.cone_gen.shift(step.cone_shift);
            if step.cone_iso.source() != &cone_k || step.cone_iso.target() != &tagged {
                return Err(Error::InvalidTower(format!(
                    "cone tag {k} has wrong endpoints"
                )));
            }
            step.cone_iso.verify()?;
            let cert = is_iso(&step.cone_iso)?.ok_or_else(|| {
                Error::InvalidTower(format!("cone tag {k} is not an isomorphism"))
            })?;
            certs.push(cert);
        }
        Ok(certs)
    }
}

/// One step of the nil chain: a witness with v = 0 whose N is verified
/// isomorphic (by an explicit permutation) to M_{k-1} (+) C_k (+) tail.
pub struct NilChainStep {
    pub witness: DegenerationWitness,
    /// M_{k-1} (+) C_k (+) C_{k+1} (+) ... in ascending order.
    pub normalized: Complex,
    pub iso: ChainMap,
    pub iso_certificate: IsoCertificate,
}

/// The stepwise chain: for k = n down to 1 the pushout of f_k and the
/// zero endomorphism degenerates M_k (+) tail to M_{k-1} (+) C_k (+) tail.
/// Every witness carries v = 0 with a certified exponent of one.
pub fn tower_nil_chain(tower: &Tower) -> Result<Vec<NilChainStep>> {
    tower.verify()?;
    let cones = tower.cones()?;
    let n = tower.steps.len();
    let mut out = Vec::new();
    for k in (1..=n).rev() {
        let step = &tower.steps[k - 1];
        let z = step.map.source().clone();
        let mut tail = Complex::zero(std::sync::Arc::clone(z.algebra()));
        for c in cones.iter().skip(k) {
            tail = tail.direct_sum(c)?;
        }
        let m_obj = step.map.target().direct_sum(&tail)?;
        let sum = direct_sum_with_maps(step.map.target(), &tail)?;
        let u = sum.inject_left.compose(&step.map)?;
        debug_assert_eq!(u.target(), &m_obj);
        let witness = left_witness(&z, &ChainMap::zero(&z, &z), &u)?;
        // N = cone((0; u)) has blocks (Z[1], Z, M_k, tail); the target
        // normal form is (Z, (Z[1], M_k), tail) = M_{k-1} (+) C_k (+) tail
        let normalized = z.direct_sum(&cones[k - 1])?.direct_sum(&tail)?;
        let mut perms = BTreeMap::new();
        for (&deg, list) in witness.n.terms() {
            let z1 = z.term(deg + 1).len();
            let z0 = z.term(deg).len();
            let rest = list.len() - z1 - z0;
            // new order: Z block first, then Z[1], then the rest
            let mut perm = Vec::with_capacity(list.len());
            perm.extend(z1..z1 + z0);
            perm.extend(0..z1);
            perm.extend(z1 + z0..z1 + z0 + rest);
            perms.insert(deg, perm);
        }
        let (permuted, fwd, bwd) = permutation_iso(&witness.n, &perms)?;
        if permuted != normalized {
            return Err(Error::InvalidTower(
                "normalized chain object does not match the permuted cone".into(),
            ));
        }
        let iso_certificate = strict_iso_certificate(&fwd, &bwd)?;
        out.push(NilChainStep {
            witness,
            normalized,
            iso: fwd,
            iso_certificate,
        });
    }
    Ok(out)
}

/// The one-shot witness: summing the step triangles gives a single
/// triangle over Z = M_1 (+) ... (+) M_{n-1} that degenerates M to the
/// direct sum of all cones.
pub struct TowerDelta {
    pub witness: DegenerationWitness,
    /// C_1 (+) ... (+) C_n.
    pub cone_sum: Complex,
    pub iso: ChainMap,
    pub iso_certificate: IsoCertificate,
}

pub fn tower_delta_witness(tower: &Tower) -> Result<TowerDelta> {
    tower.verify()?;
    let cones = tower.cones()?;
    let n = tower.steps.len();
    let top = tower.top()?.clone();
    let alg = std::sync::Arc::clone(top.algebra());
    // Z = M_1 (+) ... (+) M_{n-1}
    let mids: Vec<&Complex> = tower.steps[..n - 1]
        .iter()
        .map(|s| s.map.target())
        .collect();
    let mut z = Complex::zero(std::sync::Arc::clone(&alg));
    for m in &mids {
        z = z.direct_sum(m)?;
    }
    // v: blocks f_{k+1}: M_k -> M_{k+1} one slot below the diagonal;
    // u: (0, ..., 0, f_n)
    let v = assemble_block_shift(&z, &mids, &tower.steps)?;
    let u = if n >= 2 {
        block_row_map(&z, &top, &mids, n - 2, &tower.steps[n - 1].map)?
    } else {
        ChainMap::zero(&z, &top)
    };
    let witness = left_witness(&z, &v, &u)?;
    let mut cone_sum = Complex::zero(std::sync::Arc::clone(&alg));
    for c in &cones {
        cone_sum = cone_sum.direct_sum(c)?;
    }
    // N = cone((v; u)) has blocks (M_1[1] .. M_{n-1}[1], M_1 .. M_{n-1}, M_n);
    // regroup as (M_0[1] M_1), (M_1[1] M_2), ... = C_1 (+) ... (+) C_n
    let mut perms = BTreeMap::new();
    for (&deg, list) in witness.n.terms() {
        let shifted: Vec<usize> = mids.iter().map(|m| m.term(deg + 1).len()).collect();
        let plain: Vec<usize> = mids.iter().map(|m| m.term(deg).len()).collect();
        let shifted_total: usize = shifted.iter().sum();
        let mut offsets_shifted = Vec::new();
        let mut acc = 0;
        for s in &shifted {
            offsets_shifted.push(acc);
            acc += s;
        }
        let mut offsets_plain = Vec::new();
        let mut acc = shifted_total;
        for p in &plain {
            offsets_plain.push(acc);
            acc += p;
        }
        let top_offset = acc;
        let top_len = top.term(deg).len();
        let mut perm = Vec::with_capacity(list.len());
        // C_k block: M_{k-1}[1] then M_k
        for k in 0..n {
            if k >= 1 {
                let idx = k - 1;
                perm.extend(offsets_shifted[idx]..offsets_shifted[idx] + shifted[idx]);
            }
            if k < n - 1 {
                perm.extend(offsets_plain[k]..offsets_plain[k] + plain[k]);
            } else {
                perm.extend(top_offset..top_offset + top_len);
            }
        }
        perms.insert(deg, perm);
    }
    let (permuted, fwd, bwd) = permutation_iso(&witness.n, &perms)?;
    if permuted != cone_sum {
        return Err(Error::InvalidTower(
            "summed cones do not match the permuted witness object".into(),
        ));
    }
    let iso_certificate = strict_iso_certificate(&fwd, &bwd)?;
    Ok(TowerDelta {
        witness,
        cone_sum,
        iso: fwd,
        iso_certificate,
    })
}

/// v: Z -> Z with blocks f_{k+1}: M_k -> M_{k+1} one step below the
/// diagonal (all other blocks zero).
fn assemble_block_shift(z: &Complex, mids: &[&Complex], steps: &[TowerStep]) -> Result<ChainMap> {
    let mut v = ChainMap::zero(z, z);
    for k in 0..mids.len().saturating_sub(1) {
        // steps[k+1].map: M_{k+1} <- M_k, slot k -> slot k+1
        let piece = block_between(z, mids, k, k + 1, &steps[k + 1].map)?;
        v = v.add(&piece)?;
    }
    Ok(v)
}

/// Embeds a map between two summand slots of Z as a map Z -> Z (zero
/// elsewhere).
fn block_between(
    z: &Complex,
    mids: &[&Complex],
    src: usize,
    dst: usize,
    f: &ChainMap,
) -> Result<ChainMap> {
    let mut components = BTreeMap::new();
    for (&deg, list) in z.terms() {
        let rows = list.len();
        let mut mat = crate::complex::MapMatrix::zero(rows, rows);
        let col_off: usize = mids[..src].iter().map(|m| m.term(deg).len()).sum();
        let row_off: usize = mids[..dst].iter().map(|m| m.term(deg).len()).sum();
        let block = f.component_or_zero(deg);
        if block.rows > 0 && block.cols > 0 {
            mat.paste(row_off, col_off, &block);
        }
        components.insert(deg, mat);
    }
    ChainMap::new(z.clone(), z.clone(), components)
}

/// The row (0, ..., 0, f): Z -> M reading f off the `src` slot.
fn block_row_map(
    z: &Complex,
    target: &Complex,
    mids: &[&Complex],
    src: usize,
    f: &ChainMap,
) -> Result<ChainMap> {
    let mut components = BTreeMap::new();
    for (&deg, list) in z.terms() {
        let rows = target.term(deg).len();
        if rows == 0 {
            continue;
        }
        let mut mat = crate::complex::MapMatrix::zero(rows, list.len());
        let col_off: usize = mids[..src].iter().map(|m| m.term(deg).len()).sum();
        let block = f.component_or_zero(deg);
        if block.rows > 0 && block.cols > 0 {
            mat.paste(0, col_off, &block);
        }
        components.insert(deg, mat);
    }
    ChainMap::new(z.clone(), target.clone(), components)
}

/// Builds a tower step by coning an attachment map into the current top:
/// the next object is cone(attach: S[r-1] -> M), and the cone of the
/// canonical inclusion M -> next is S[r] via the canonical projection.
pub fn tower_step_by_attachment(
    current: &Complex,
    generator: &Complex,
    shift: i64,
    attach: &ChainMap,
) -> Result<TowerStep> {
    let tagged_prev = generator.shift(shift - 1);
    if attach.source() != &tagged_prev || attach.target() != current {
        return Err(Error::InvalidTower("attachment map endpoints".into()));
    }
    let parts = cone(attach)?;
    let next = parts.complex;
    let f = parts.triangle.g;
    // cone(f) -> S[r]: project onto the shifted source block
    let cone_f = crate::triangle::cone_complex(&f)?;
    let tagged = generator.shift(shift);
    let alg = current.algebra();
    let mut comp = BTreeMap::new();
    for (&deg, _) in cone_f.terms() {
        let rows = tagged.term(deg).len();
        if rows == 0 {
            continue;
        }
        let y1 = current.term(deg + 1).len();
        let mut mat = crate::complex::MapMatrix::zero(rows, cone_f.term(deg).len());
        mat.paste(
            0,
            y1,
            &crate::complex::MapMatrix::identity(alg, tagged.term(deg)),
        );
        comp.insert(deg, mat);
    }
    let cone_iso = ChainMap::new(cone_f, tagged, comp)?;
    let _ = next;
    Ok(TowerStep {
        map: f,
        cone_gen: generator.clone(),
        cone_shift: shift,
        cone_iso,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{a2_presentation, Algebra};
    use crate::complex::MapMatrix;
    use crate::triangle::find_iso;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::sync::Arc;

    fn a2() -> Arc<Algebra> {
        Arc::new(Algebra::build(a2_presentation(2)).unwrap())
    }

    fn simple_resolution(alg: &Arc<Algebra>) -> Complex {
        let mut terms = BTreeMap::new();
        terms.insert(-1, vec![1]);
        terms.insert(0, vec![0]);
        let mut d = MapMatrix::zero(1, 1);
        d.set(0, 0, alg.path_elem(alg.arrow_path(0)));
        let mut diffs = BTreeMap::new();
        diffs.insert(-1, d);
        Complex::new(Arc::clone(alg), terms, diffs).unwrap()
    }

    #[test]
    fn k0_basics() {
        let alg = a2();
        let zero = Complex::zero(Arc::clone(&alg));
        assert!(k0_class(&zero).is_zero());
        let p1 = Complex::stalk(Arc::clone(&alg), 0, 0);
        assert_eq!(k0_class(&p1), K0Class(vec![1, 0]));
        // S (+) S[1] cancels
        let s = simple_resolution(&alg);
        let sum = s.direct_sum(&s.shift(1)).unwrap();
        assert!(k0_class(&sum).is_zero());
    }

    #[test]
    fn k0_shift_sign() {
        let alg = a2();
        let x = simple_resolution(&alg);
        let base = k0_class(&x);
        for k in -4..=4i64 {
            let expect = if k.rem_euclid(2) == 0 {
                base.clone()
            } else {
                base.neg()
            };
            assert_eq!(k0_class(&x.shift(k)), expect);
        }
    }

    #[test]
    fn k0_additive_on_triangles() {
        let alg = a2();
        let x = Complex::stalk(Arc::clone(&alg), 0, 0);
        let y = simple_resolution(&alg);
        let mut comp = BTreeMap::new();
        let mut m = MapMatrix::zero(1, 1);
        m.set(0, 0, alg.idempotent(0));
        comp.insert(0, m);
        let f = ChainMap::new(x.clone(), y.clone(), comp).unwrap();
        let parts = cone(&f).unwrap();
        let total = k0_class(&x)
            .add(&k0_class(&parts.complex))
            .add(&k0_class(&y).neg());
        assert!(total.is_zero());
    }

    #[test]
    fn pair_decompose_base_case() {
        let sum = ShiftSum {
            entries: vec![
                ShiftSumEntry {
                    generator: "S".into(),
                    shift: 0,
                    multiplicity: 1,
                },
                ShiftSumEntry {
                    generator: "S".into(),
                    shift: 1,
                    multiplicity: 1,
                },
            ],
        };
        let pairs = pair_decompose(&sum).unwrap();
        assert_eq!(
            pairs,
            vec![ShiftPair {
                generator: "S".into(),
                even_shift: 0,
                odd_shift: 1,
                multiplicity: 1
            }]
        );
    }

    #[test]
    fn pair_decompose_four_shifts() {
        let sum = ShiftSum {
            entries: [(0, 1), (2, 1), (3, 1), (5, 1)]
                .iter()
                .map(|&(shift, multiplicity)| ShiftSumEntry {
                    generator: "S".into(),
                    shift,
                    multiplicity,
                })
                .collect(),
        };
        let pairs = pair_decompose(&sum).unwrap();
        assert_eq!(pairs.len(), 2);
        for p in &pairs {
            assert_eq!(p.even_shift.rem_euclid(2), 0);
            assert_eq!(p.odd_shift.rem_euclid(2), 1);
        }
        // multiset union equals the input
        let mut expanded: BTreeMap<i64, u64> = BTreeMap::new();
        for p in &pairs {
            *expanded.entry(p.even_shift).or_insert(0) += p.multiplicity;
            *expanded.entry(p.odd_shift).or_insert(0) += p.multiplicity;
        }
        assert_eq!(expanded, BTreeMap::from([(0, 1), (2, 1), (3, 1), (5, 1)]));
    }

    #[test]
    fn pair_decompose_min_peel() {
        let sum = ShiftSum {
            entries: [(0, 2), (1, 1), (3, 1)]
                .iter()
                .map(|&(shift, multiplicity)| ShiftSumEntry {
                    generator: "S".into(),
                    shift,
                    multiplicity,
                })
                .collect(),
        };
        let pairs = pair_decompose(&sum).unwrap();
        assert_eq!(
            pairs,
            vec![
                ShiftPair {
                    generator: "S".into(),
                    even_shift: 0,
                    odd_shift: 1,
                    multiplicity: 1
                },
                ShiftPair {
                    generator: "S".into(),
                    even_shift: 0,
                    odd_shift: 3,
                    multiplicity: 1
                },
            ]
        );
    }

    #[test]
    fn pair_decompose_rejects_nonzero_class() {
        let sum = ShiftSum {
            entries: vec![ShiftSumEntry {
                generator: "T".into(),
                shift: 0,
                multiplicity: 1,
            }],
        };
        match pair_decompose(&sum) {
            Err(Error::NonzeroClass(g)) => assert_eq!(g, "T"),
            other => panic!("expected nonzero-class rejection, got {other:?}"),
        }
    }

    fn two_step_tower(alg: &Arc<Algebra>) -> Tower {
        let zero = Complex::zero(Arc::clone(alg));
        let s1 = simple_resolution(alg);
        let attach1 = ChainMap::zero(&s1.shift(-1), &zero);
        let step1 = tower_step_by_attachment(&zero, &s1, 0, &attach1).unwrap();
        let m1 = step1.map.target().clone();
        let p2 = Complex::stalk(Arc::clone(alg), 1, 0);
        let attach2 = ChainMap::zero(&p2.shift(0), &m1);
        let step2 = tower_step_by_attachment(&m1, &p2, 1, &attach2).unwrap();
        Tower {
            steps: vec![step1, step2],
        }
    }

    #[test]
    fn tower_verifies_and_chains() {
        let alg = a2();
        let tower = two_step_tower(&alg);
        tower.verify().unwrap();
        let chain = tower_nil_chain(&tower).unwrap();
        assert_eq!(chain.len(), 2);
        for step in &chain {
            step.witness.verify().unwrap();
            assert_eq!(step.witness.nil.as_ref().unwrap().exponent, 1);
            assert!(step.witness.v.is_zero());
            assert_eq!(k0_class(&step.witness.m), k0_class(&step.witness.n));
        }
        // final object is C_1 (+) C_2
        let cones = tower.cones().unwrap();
        let expect = cones[0].direct_sum(&cones[1]).unwrap();
        assert_eq!(chain.last().unwrap().normalized, expect);
    }

    #[test]
    fn tower_delta_matches_chain_terminal() {
        let alg = a2();
        let tower = two_step_tower(&alg);
        let delta = tower_delta_witness(&tower).unwrap();
        delta.witness.verify().unwrap();
        let chain = tower_nil_chain(&tower).unwrap();
        assert_eq!(delta.cone_sum, chain.last().unwrap().normalized);
        assert_eq!(k0_class(&delta.witness.m), k0_class(&delta.witness.n));
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(find_iso(&delta.witness.n, &delta.cone_sum, 32, &mut rng)
            .unwrap()
            .is_some());
    }

    #[test]
    fn length_one_tower() {
        let alg = a2();
        let zero = Complex::zero(Arc::clone(&alg));
        let s1 = simple_resolution(&alg);
        let attach = ChainMap::zero(&s1.shift(-1), &zero);
        let step = tower_step_by_attachment(&zero, &s1, 0, &attach).unwrap();
        let tower = Tower { steps: vec![step] };
        let chain = tower_nil_chain(&tower).unwrap();
        assert_eq!(chain.len(), 1);
        let delta = tower_delta_witness(&tower).unwrap();
        assert!(delta.witness.z.is_zero_object());
    }
}
