//! Built-in worked instances over the two-vertex linear quiver: the short
//! exact sequence degeneration, the isolated-homology counterexample, and
//! the cone-of-zero splitting.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::algebra::{a2_presentation, Algebra};
use crate::complex::{Complex, MapMatrix};
use crate::degeneration::{left_witness, theorem_cone_comparison, ConeComparison, DegenerationWitness};
use crate::error::{Error, Result};
use crate::morphism::{permutation_iso, ChainMap};
use crate::obstruction::{
    isolated_homology_obstruction, zero_degenerates_witness, ObstructionReport, ZeroDegeneration,
};
use crate::triangle::{homotopy_inverse, is_iso, IsoCertificate};

pub fn a2_algebra(p: u64) -> Result<Arc<Algebra>> {
    Ok(Arc::new(Algebra::build(a2_presentation(p))?))
}

/// P_{v2} -> P_{v1} via the arrow, in degrees -1 and 0: the projective
/// resolution of the simple at the first vertex.
pub fn simple_resolution(alg: &Arc<Algebra>) -> Result<Complex> {
    let mut terms = BTreeMap::new();
    terms.insert(-1, vec![1]);
    terms.insert(0, vec![0]);
    let mut d = MapMatrix::zero(1, 1);
    d.set(0, 0, alg.path_elem(alg.arrow_path(0)));
    let mut diffs = BTreeMap::new();
    diffs.insert(-1, d);
    Complex::new(Arc::clone(alg), terms, diffs)
}

/// The short-exact-sequence degeneration over the two-vertex quiver:
/// 0 -> P_2 -> P_1 -> S_1 -> 0 realized in the homotopy category with
/// Z = P_2, M = P_1, v = 0 and u the arrow inclusion.
pub struct SesDegenerationDemo {
    pub witness: DegenerationWitness,
    pub comparison: ConeComparison,
    /// N_1[1] (+) N_1, the expected form of both cones.
    pub split_form: Complex,
    /// cone(pi) -> split form, extracted from the comparison.
    pub cone_pi_iso: ChainMap,
    pub cone_pi_iso_certificate: IsoCertificate,
    /// N verified against the resolution of N_2 (+) N_1 by an explicit
    /// summand permutation.
    pub n_normal_form: Complex,
    pub n_iso: ChainMap,
    pub n_iso_certificate: IsoCertificate,
}

pub fn ses_degeneration_demo(p: u64) -> Result<SesDegenerationDemo> {
    let alg = a2_algebra(p)?;
    let z = Complex::stalk(Arc::clone(&alg), 1, 0); // N_1 = P_2
    let m = Complex::stalk(Arc::clone(&alg), 0, 0); // middle = P_1
    let mut u_comp = BTreeMap::new();
    let mut mat = MapMatrix::zero(1, 1);
    mat.set(0, 0, alg.path_elem(alg.arrow_path(0)));
    u_comp.insert(0, mat);
    let u = ChainMap::new(z.clone(), m.clone(), u_comp)?;
    let witness = left_witness(&z, &ChainMap::zero(&z, &z), &u)?;
    witness.verify()?;
    let comparison = theorem_cone_comparison(&witness)?;
    let split_form = z.shift(1).direct_sum(&z)?;
    if comparison.cone_v != split_form {
        return Err(Error::InvalidCertificate(
            "cone of the zero endomorphism is not the split form".into(),
        ));
    }
    let alpha_cert = comparison
        .alpha_certificate
        .clone()
        .ok_or_else(|| Error::InconsistentSystem("comparison map is not invertible".into()))?;
    // cone(pi) -> cone(v) = split form
    let cone_pi_iso = homotopy_inverse(&comparison.alpha, &alpha_cert)?.inverse;
    let cone_pi_iso_certificate = is_iso(&cone_pi_iso)?
        .ok_or_else(|| Error::InconsistentSystem("inverse comparison is not invertible".into()))?;
    // N = (P_2 -> P_2 (+) P_1) equals the resolution of S_1 plus a stalk
    // P_2 after swapping the degree-zero summands
    let resolution = simple_resolution(&alg)?;
    let n_normal_form = resolution.direct_sum(&z)?;
    let mut perms = BTreeMap::new();
    perms.insert(0, vec![1, 0]);
    let (permuted, fwd, bwd) = permutation_iso(&witness.n, &perms)?;
    if permuted != n_normal_form {
        return Err(Error::InvalidCertificate(
            "witness object does not permute onto the expected resolution".into(),
        ));
    }
    let n_iso_certificate = crate::triangle::strict_iso_certificate(&fwd, &bwd)?;
    Ok(SesDegenerationDemo {
        witness,
        comparison,
        split_form,
        cone_pi_iso,
        cone_pi_iso_certificate,
        n_normal_form,
        n_iso: fwd,
        n_iso_certificate,
    })
}

/// The isolated-homology counterexample: S (+) S[3] has zero class but an
/// isolated homology degree, while S (+) S[1] has neither the certificate
/// nor any obstruction to degenerating from zero.
pub struct CounterexampleDemo {
    pub separated: Complex,
    pub report: ObstructionReport,
    pub separated_class_zero: bool,
    pub adjacent: Complex,
    pub adjacent_report: Option<ObstructionReport>,
    pub zero_degeneration: ZeroDegeneration,
}

pub fn counterexample_demo(p: u64) -> Result<CounterexampleDemo> {
    let alg = a2_algebra(p)?;
    let s = simple_resolution(&alg)?;
    let separated = s.direct_sum(&s.shift(3))?;
    let report = isolated_homology_obstruction(&separated).ok_or_else(|| {
        Error::InvalidCertificate("expected an isolated homology degree".into())
    })?;
    let separated_class_zero = crate::grothendieck::k0_class(&separated).is_zero();
    let adjacent = s.direct_sum(&s.shift(1))?;
    let adjacent_report = isolated_homology_obstruction(&adjacent);
    let zero_degeneration = zero_degenerates_witness(&s)?;
    zero_degeneration.witness.verify()?;
    Ok(CounterexampleDemo {
        separated,
        report,
        separated_class_zero,
        adjacent,
        adjacent_report,
        zero_degeneration,
    })
}

/// The cone-of-zero splitting on the resolution of the simple: cone(0_Z)
/// is Z[1] (+) Z on the nose, and the follow-up witness realizes
/// N <= Z (+) Z[1] with v = 0.
pub struct ConeZeroDemo {
    pub z: Complex,
    pub zero_degeneration: ZeroDegeneration,
    /// The follow-up witness for N <= Z (+) Z[1].
    pub follow_up: DegenerationWitness,
    /// Z (+) Z[1].
    pub follow_up_form: Complex,
    pub follow_up_iso: ChainMap,
    pub follow_up_certificate: IsoCertificate,
}

pub fn cone_zero_demo(p: u64) -> Result<ConeZeroDemo> {
    let alg = a2_algebra(p)?;
    let z = simple_resolution(&alg)?;
    let zero_degeneration = zero_degenerates_witness(&z)?;
    // epsilon: Z -> N = cone(0_Z); the witness middle term Z (+) 0 is Z
    let epsilon = zero_degeneration.witness.triangle.g.clone();
    debug_assert_eq!(epsilon.source(), &z);
    let follow_up = left_witness(&z, &ChainMap::zero(&z, &z), &epsilon)?;
    let follow_up_form = z.direct_sum(&z.shift(1))?;
    // survivor inclusion Z (+) Z[1] -> cone((0; epsilon)): the plain copy
    // lands in the middle Z block, the shifted copy in the first block of N
    let mut comp = BTreeMap::new();
    for (&deg, _) in follow_up_form.terms() {
        let rows = follow_up.n.term(deg).len();
        if rows == 0 {
            continue;
        }
        let z1 = z.term(deg + 1).len();
        let z0 = z.term(deg).len();
        let mut mat = MapMatrix::zero(rows, z0 + z1);
        if z0 > 0 {
            mat.paste(z1, 0, &MapMatrix::identity(z.algebra(), z.term(deg)));
        }
        if z1 > 0 {
            mat.paste(z1 + z0, z0, &MapMatrix::identity(z.algebra(), z.term(deg + 1)));
        }
        comp.insert(deg, mat);
    }
    let follow_up_iso = ChainMap::new(follow_up_form.clone(), follow_up.n.clone(), comp)?;
    let follow_up_certificate = is_iso(&follow_up_iso)?.ok_or_else(|| {
        Error::InconsistentSystem("survivor inclusion is not an equivalence".into())
    })?;
    Ok(ConeZeroDemo {
        z,
        zero_degeneration,
        follow_up,
        follow_up_form,
        follow_up_iso,
        follow_up_certificate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grothendieck::k0_class;

    #[test]
    fn ses_demo_over_gf2() {
        let demo = ses_degeneration_demo(2).unwrap();
        assert!(demo.comparison.verdict);
        assert_eq!(
            k0_class(&demo.witness.m),
            k0_class(&demo.witness.n)
        );
        // cone(pi) carries the homology of N_1[1] (+) N_1
        assert_eq!(
            demo.comparison.cone_pi.homology_dims(),
            demo.split_form.homology_dims()
        );
        assert_eq!(demo.witness.nil.as_ref().unwrap().exponent, 1);
    }

    #[test]
    fn ses_demo_over_gf3() {
        let demo = ses_degeneration_demo(3).unwrap();
        assert!(demo.comparison.verdict);
    }

    #[test]
    fn counterexample_demo_facts() {
        let demo = counterexample_demo(2).unwrap();
        assert_eq!(demo.report.degree, 0);
        assert!(demo.separated_class_zero);
        assert!(demo.adjacent_report.is_none());
        assert!(k0_class(&demo.zero_degeneration.witness.n).is_zero());
    }

    #[test]
    fn cone_zero_demo_facts() {
        let demo = cone_zero_demo(2).unwrap();
        // bit-exact splitting
        assert_eq!(
            demo.zero_degeneration.witness.n,
            demo.z.shift(1).direct_sum(&demo.z).unwrap()
        );
        assert_eq!(demo.follow_up.nil.as_ref().unwrap().exponent, 1);
        assert!(demo.follow_up.v.is_zero());
    }
}
