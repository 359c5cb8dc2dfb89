//! Mapping cones, distinguished triangles and their certificates.
//!
//! Every triangle carried by the engine is certified: either its third
//! object literally is the cone of its first map with the canonical
//! structure maps, or an explicit comparison map to that cone is stored
//! whose own cone contracts, together with homotopies making the two
//! comparison squares commute. An isomorphism test is a contractibility
//! test on a cone, and each positive answer keeps the contraction as a
//! reusable witness.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::Rng;

use crate::complex::{Complex, MapMatrix};
use crate::error::{Error, Result};
use crate::morphism::{
    hom_basis_mod_homotopy, is_contractible, is_nullhomotopic, ChainMap, Homotopy,
};

/// The cone of a chain map with its canonical triangle data.
pub struct ConeParts {
    pub complex: Complex,
    pub triangle: Triangle,
    /// Witness for g of f ~ 0 on the standard triangle.
    pub gf_homotopy: Homotopy,
}

/// cone(f)^n = X^{n+1} (+) Y^n with differential [[-d_X, 0], [f, d_Y]].
pub fn cone_complex(f: &ChainMap) -> Result<Complex> {
    let x = f.source();
    let y = f.target();
    let alg = Arc::clone(x.algebra());
    let x1 = x.shift(1);
    let mut terms: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    let degrees: std::collections::BTreeSet<i64> = x1
        .terms()
        .keys()
        .chain(y.terms().keys())
        .copied()
        .collect();
    for &n in &degrees {
        let mut list = x1.term(n).to_vec();
        list.extend_from_slice(y.term(n));
        if !list.is_empty() {
            terms.insert(n, list);
        }
    }
    let mut diffs = BTreeMap::new();
    for &n in &degrees {
        if !terms.contains_key(&n) || !terms.contains_key(&(n + 1)) {
            continue;
        }
        let a = x1.diff_or_zero(n); // already -d_X^{n+1}
        let zero_top = MapMatrix::zero(x1.term(n + 1).len(), y.term(n).len());
        let f_block = {
            // f^{n+1}: X^{n+1} -> Y^{n+1}
            let m = f.component_or_zero(n + 1);
            debug_assert_eq!(m.cols, x1.term(n).len());
            debug_assert_eq!(m.rows, y.term(n + 1).len());
            m
        };
        let d_y = y.diff_or_zero(n);
        diffs.insert(n, MapMatrix::block2x2(&a, &zero_top, &f_block, &d_y));
    }
    Complex::new(alg, terms, diffs)
}

/// The standard triangle X -> Y -> cone(f) -> X[1].
pub fn cone(f: &ChainMap) -> Result<ConeParts> {
    f.verify()?;
    let x = f.source();
    let y = f.target();
    let alg = x.algebra();
    let c = cone_complex(f)?;
    let x1 = x.shift(1);
    // g: Y -> cone, inclusion of the second block
    let mut g_comp = BTreeMap::new();
    // h: cone -> X[1], projection onto the first block
    let mut h_comp = BTreeMap::new();
    for (&n, list) in c.terms() {
        let lx = x1.term(n).len();
        let ly = y.term(n).len();
        debug_assert_eq!(list.len(), lx + ly);
        if ly > 0 {
            let id = MapMatrix::identity(alg, y.term(n));
            let mut inj = MapMatrix::zero(lx + ly, ly);
            inj.paste(lx, 0, &id);
            g_comp.insert(n, inj);
        }
        if lx > 0 {
            let id = MapMatrix::identity(alg, x1.term(n));
            let mut proj = MapMatrix::zero(lx, lx + ly);
            proj.paste(0, 0, &id);
            h_comp.insert(n, proj);
        }
    }
    let g = ChainMap::new(y.clone(), c.clone(), g_comp)?;
    let h = ChainMap::new(c.clone(), x1.clone(), h_comp)?;
    // s = [id_X; 0]: X^n -> cone^{n-1} witnesses g f ~ 0
    let mut s_comp = BTreeMap::new();
    for (&n, list) in x.terms() {
        let lx_prev = x1.term(n - 1).len(); // = |X^n|
        let ly_prev = y.term(n - 1).len();
        debug_assert_eq!(lx_prev, list.len());
        let id = MapMatrix::identity(alg, list);
        let mut m = MapMatrix::zero(lx_prev + ly_prev, list.len());
        m.paste(0, 0, &id);
        s_comp.insert(n, m);
    }
    let gf_homotopy = Homotopy::new(x.clone(), c.clone(), s_comp)?;
    let triangle = Triangle {
        x: x.clone(),
        y: y.clone(),
        z: c.clone(),
        f: f.clone(),
        g,
        h,
        certificate: TriangleCertificate::Standard,
    };
    Ok(ConeParts {
        complex: c,
        triangle,
        gf_homotopy,
    })
}

/// Certificate that a triangle is distinguished.
#[derive(Clone, Debug)]
pub enum TriangleCertificate {
    /// The third object is cone(f) bit-for-bit, with canonical g and h.
    Standard,
    /// An explicit isomorphism in the homotopy category onto the standard
    /// triangle of f.
    Transported(Box<TransportedCertificate>),
}

#[derive(Clone, Debug)]
pub struct TransportedCertificate {
    /// z -> cone(f); an isomorphism in the homotopy category.
    pub comparison: ChainMap,
    /// Contraction of cone(comparison).
    pub contraction: Homotopy,
    /// Witness for comparison . g ~ canonical g.
    pub square_second: Homotopy,
    /// Witness for canonical h . comparison ~ h.
    pub square_third: Homotopy,
}

/// Four objects and three maps, always carried with a certificate tying
/// the data to a standard cone triangle.
#[derive(Clone, Debug)]
pub struct Triangle {
    pub x: Complex,
    pub y: Complex,
    pub z: Complex,
    pub f: ChainMap,
    pub g: ChainMap,
    pub h: ChainMap,
    pub certificate: TriangleCertificate,
}

impl Triangle {
    /// Builds a transported triangle from the comparison map alone; the
    /// contraction and the two square homotopies are solved for, and their
    /// absence is an error.
    pub fn new_transported(
        x: Complex,
        y: Complex,
        z: Complex,
        f: ChainMap,
        g: ChainMap,
        h: ChainMap,
        comparison: ChainMap,
    ) -> Result<Triangle> {
        let parts = cone(&f)?;
        if comparison.source() != &z || comparison.target() != &parts.complex {
            return Err(Error::InvalidCertificate(
                "comparison map endpoints do not match".into(),
            ));
        }
        let comparison_cone = cone_complex(&comparison)?;
        let contraction = is_contractible(&comparison_cone)?.ok_or_else(|| {
            Error::InvalidCertificate("comparison map is not an isomorphism".into())
        })?;
        let second = comparison.compose(&g)?.sub(&parts.triangle.g)?;
        let square_second = is_nullhomotopic(&second)?.ok_or_else(|| {
            Error::InconsistentSystem("second comparison square does not commute".into())
        })?;
        let third = parts.triangle.h.compose(&comparison)?.sub(&h)?;
        let square_third = is_nullhomotopic(&third)?.ok_or_else(|| {
            Error::InconsistentSystem("third comparison square does not commute".into())
        })?;
        let t = Triangle {
            x,
            y,
            z,
            f,
            g,
            h,
            certificate: TriangleCertificate::Transported(Box::new(TransportedCertificate {
                comparison,
                contraction,
                square_second,
                square_third,
            })),
        };
        t.verify()?;
        Ok(t)
    }

    pub fn verify(&self) -> Result<()> {
        if self.f.source() != &self.x || self.f.target() != &self.y {
            return Err(Error::InvalidCertificate("first map endpoints".into()));
        }
        if self.g.source() != &self.y || self.g.target() != &self.z {
            return Err(Error::InvalidCertificate("second map endpoints".into()));
        }
        if self.h.source() != &self.z || self.h.target() != &self.x.shift(1) {
            return Err(Error::InvalidCertificate("third map endpoints".into()));
        }
        self.f.verify()?;
        self.g.verify()?;
        self.h.verify()?;
        let parts = cone(&self.f)?;
        match &self.certificate {
            TriangleCertificate::Standard => {
                if self.z != parts.complex
                    || self.g != parts.triangle.g
                    || self.h != parts.triangle.h
                {
                    return Err(Error::InvalidCertificate(
                        "standard certificate does not match the cone".into(),
                    ));
                }
            }
            TriangleCertificate::Transported(cert) => {
                if cert.comparison.source() != &self.z
                    || cert.comparison.target() != &parts.complex
                {
                    return Err(Error::InvalidCertificate(
                        "comparison map endpoints do not match".into(),
                    ));
                }
                cert.comparison.verify()?;
                let comparison_cone = cone_complex(&cert.comparison)?;
                cert.contraction.witnesses(
                    &ChainMap::identity(&comparison_cone),
                    &ChainMap::zero(&comparison_cone, &comparison_cone),
                )?;
                cert.square_second
                    .witnesses(&cert.comparison.compose(&self.g)?, &parts.triangle.g)?;
                cert.square_third
                    .witnesses(&parts.triangle.h.compose(&cert.comparison)?, &self.h)?;
            }
        }
        Ok(())
    }
}

/// Witness that a chain map is an isomorphism in the homotopy category:
/// a contraction of its cone. Exposes an explicit strict homotopy inverse.
#[derive(Clone, Debug)]
pub struct IsoCertificate {
    pub contraction: Homotopy,
}

/// True (with certificate) iff cone(f) is contractible.
pub fn is_iso(f: &ChainMap) -> Result<Option<IsoCertificate>> {
    let c = cone_complex(f)?;
    Ok(is_contractible(&c)?.map(|contraction| IsoCertificate { contraction }))
}

/// Explicit homotopy inverse extracted from a cone contraction, together
/// with homotopies g f ~ id and f g ~ id.
pub struct HomotopyInverse {
    pub inverse: ChainMap,
    /// Witness for (inverse . f) ~ id on the source.
    pub left_homotopy: Homotopy,
    /// Witness for (f . inverse) ~ id on the target.
    pub right_homotopy: Homotopy,
}

/// Slices the contraction of cone(f) into blocks: the (source, target)
/// block is a strict chain map inverse to f in the homotopy category.
pub fn homotopy_inverse(f: &ChainMap, cert: &IsoCertificate) -> Result<HomotopyInverse> {
    let x = f.source();
    let y = f.target();
    let x1 = x.shift(1);
    let mut inv_comp = BTreeMap::new();
    let mut left_comp = BTreeMap::new();
    let mut right_comp = BTreeMap::new();
    for (&n, _) in cert.contraction.components() {
        // contraction component at cone degree n: cols X^{n+1} ++ Y^n,
        // rows X^n ++ Y^{n-1}
        let s = cert.contraction.component_or_zero(n);
        let cx1 = x1.term(n).len();
        let cy = y.term(n).len();
        let rx = x1.term(n - 1).len(); // = |X^n|
        let ry = y.term(n - 1).len();
        debug_assert_eq!(s.cols, cx1 + cy);
        debug_assert_eq!(s.rows, rx + ry);
        if rx > 0 && cy > 0 {
            inv_comp.insert(n, s.submatrix(0, cx1, rx, cy));
        }
        if rx > 0 && cx1 > 0 {
            // homotopy component at source degree n+1: X^{n+1} -> X^n
            left_comp.insert(n + 1, s.submatrix(0, 0, rx, cx1));
        }
        if ry > 0 && cy > 0 {
            right_comp.insert(n, s.submatrix(rx, cx1, ry, cy));
        }
    }
    let inverse = ChainMap::new(y.clone(), x.clone(), inv_comp)?;
    let left_homotopy = Homotopy::new(x.clone(), x.clone(), left_comp)?;
    let right_neg = Homotopy::new(y.clone(), y.clone(), right_comp)?;
    let right_homotopy = right_neg.neg();
    // g f - id = d s11 + s11 d and f g - id = -(d s22 + s22 d)
    left_homotopy.witnesses(&inverse.compose(f)?, &ChainMap::identity(x))?;
    right_homotopy.witnesses(&f.compose(&inverse)?, &ChainMap::identity(y))?;
    Ok(HomotopyInverse {
        inverse,
        left_homotopy,
        right_homotopy,
    })
}

/// Contraction of cone(f) for a strict two-sided isomorphism, written
/// down directly: the only nonzero block is the inverse.
pub fn strict_iso_certificate(f: &ChainMap, inverse: &ChainMap) -> Result<IsoCertificate> {
    if inverse.compose(f)? != ChainMap::identity(f.source())
        || f.compose(inverse)? != ChainMap::identity(f.target())
    {
        return Err(Error::InvalidCertificate(
            "not a strict two-sided inverse".into(),
        ));
    }
    let c = cone_complex(f)?;
    let x1 = f.source().shift(1);
    let y = f.target();
    let mut comp = BTreeMap::new();
    for (&n, _) in c.terms() {
        let cx1 = x1.term(n).len();
        let cy = y.term(n).len();
        let rx = x1.term(n - 1).len();
        let ry = y.term(n - 1).len();
        if rx + ry == 0 {
            continue;
        }
        let mut s = MapMatrix::zero(rx + ry, cx1 + cy);
        if rx > 0 && cy > 0 {
            s.paste(0, cx1, &inverse.component_or_zero(n));
        }
        comp.insert(n, s);
    }
    let contraction = Homotopy::new(c.clone(), c.clone(), comp)?;
    contraction.witnesses(&ChainMap::identity(&c), &ChainMap::zero(&c, &c))?;
    Ok(IsoCertificate { contraction })
}

/// Functorial map cone(f) -> cone(f') induced by a square commuting up to
/// the given homotopy: needs b f - f' a = d H + H d.
pub fn induced_cone_map(
    f: &ChainMap,
    f_prime: &ChainMap,
    a: &ChainMap,
    b: &ChainMap,
    square: &Homotopy,
) -> Result<ChainMap> {
    square.witnesses(&b.compose(f)?, &f_prime.compose(a)?)?;
    let c = cone_complex(f)?;
    let c_prime = cone_complex(f_prime)?;
    let x1 = f.source().shift(1);
    let y = f.target();
    let x1p = f_prime.source().shift(1);
    let yp = f_prime.target();
    let mut comp = BTreeMap::new();
    for (&n, _) in c.terms() {
        let rows = c_prime.term(n).len();
        if rows == 0 {
            continue;
        }
        let mut m = MapMatrix::zero(rows, c.term(n).len());
        // the top-left block is a^{n+1} itself, without the shift sign
        let alg = f.source().algebra();
        let a_block = a.shift(1).component_or_zero(n).neg(alg);
        if !x1p.term(n).is_empty() && !x1.term(n).is_empty() {
            m.paste(0, 0, &a_block);
        }
        if !yp.term(n).is_empty() && !x1.term(n).is_empty() {
            // H at source degree n+1: X^{n+1} -> Y'^n
            m.paste(x1p.term(n).len(), 0, &square.component_or_zero(n + 1));
        }
        if !yp.term(n).is_empty() && !y.term(n).is_empty() {
            m.paste(x1p.term(n).len(), x1.term(n).len(), &b.component_or_zero(n));
        }
        comp.insert(n, m);
    }
    ChainMap::new(c, c_prime, comp)
}

/// Result of a successful isomorphism search.
pub struct FoundIso {
    pub map: ChainMap,
    pub certificate: IsoCertificate,
    pub attempt: usize,
}

/// Semi-decision search for an isomorphism x -> y: the identity-shaped
/// candidate when the terms agree, then a hom-basis modulo homotopy, then
/// up to `budget` random coefficient combinations. `None` means "not
/// found", never "not isomorphic".
pub fn find_iso<R: Rng>(
    x: &Complex,
    y: &Complex,
    budget: usize,
    rng: &mut R,
) -> Result<Option<FoundIso>> {
    let mut attempt = 0;
    if x.terms() == y.terms() {
        attempt += 1;
        let alg = x.algebra();
        let components = x
            .terms()
            .iter()
            .map(|(&n, list)| (n, MapMatrix::identity(alg, list)))
            .collect();
        if let Ok(candidate) = ChainMap::new(x.clone(), y.clone(), components) {
            if let Some(certificate) = is_iso(&candidate)? {
                return Ok(Some(FoundIso {
                    map: candidate,
                    certificate,
                    attempt,
                }));
            }
        }
    }
    let basis = hom_basis_mod_homotopy(x, y)?;
    for b in &basis {
        attempt += 1;
        if let Some(certificate) = is_iso(b)? {
            return Ok(Some(FoundIso {
                map: b.clone(),
                certificate,
                attempt,
            }));
        }
    }
    if basis.is_empty() {
        // the zero map is the only candidate left
        attempt += 1;
        let candidate = ChainMap::zero(x, y);
        if let Some(certificate) = is_iso(&candidate)? {
            return Ok(Some(FoundIso {
                map: candidate,
                certificate,
                attempt,
            }));
        }
        return Ok(None);
    }
    let field = x.algebra().field();
    let p = field.modulus();
    for _ in 0..budget {
        attempt += 1;
        let mut candidate = ChainMap::zero(x, y);
        for b in &basis {
            let c = field.elem(rng.gen_range(0..p) as i64);
            candidate = candidate.add(&b.scale(c))?;
        }
        if candidate.is_zero() {
            continue;
        }
        if let Some(certificate) = is_iso(&candidate)? {
            return Ok(Some(FoundIso {
                map: candidate,
                certificate,
                attempt,
            }));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{a2_presentation, Algebra};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

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
    fn cone_of_identity_contracts() {
        let alg = a2();
        let x = simple_resolution(&alg);
        let id = ChainMap::identity(&x);
        let parts = cone(&id).unwrap();
        parts.triangle.verify().unwrap();
        assert!(is_contractible(&parts.complex).unwrap().is_some());
    }

    #[test]
    fn cone_of_zero_is_shift_plus_self() {
        let alg = a2();
        let z = simple_resolution(&alg);
        let zero = ChainMap::zero(&z, &z);
        let parts = cone(&zero).unwrap();
        let expected = z.shift(1).direct_sum(&z).unwrap();
        assert_eq!(parts.complex, expected);
    }

    #[test]
    fn standard_triangle_composites_vanish() {
        let alg = a2();
        let x = Complex::stalk(Arc::clone(&alg), 0, 0);
        let y = simple_resolution(&alg);
        // nonzero chain map stalk -> resolution: identity in degree 0
        let mut comp = BTreeMap::new();
        let mut m = MapMatrix::zero(1, 1);
        m.set(0, 0, alg.idempotent(0));
        comp.insert(0, m);
        let f = ChainMap::new(x.clone(), y.clone(), comp).unwrap();
        let parts = cone(&f).unwrap();
        let gf = parts.triangle.g.compose(&f).unwrap();
        parts
            .gf_homotopy
            .witnesses(&gf, &ChainMap::zero(&x, &parts.complex))
            .unwrap();
        // h g = 0 exactly: the zero homotopy witnesses it
        let hg = parts.triangle.h.compose(&parts.triangle.g).unwrap();
        assert!(hg.is_zero());
    }

    #[test]
    fn cone_shift_compatibility_bit_for_bit() {
        let alg = a2();
        let x = Complex::stalk(Arc::clone(&alg), 0, 0);
        let y = simple_resolution(&alg);
        let mut comp = BTreeMap::new();
        let mut m = MapMatrix::zero(1, 1);
        m.set(0, 0, alg.idempotent(0));
        comp.insert(0, m);
        let f = ChainMap::new(x, y, comp).unwrap();
        let lhs = cone_complex(&f.shift(1)).unwrap();
        let rhs = cone_complex(&f).unwrap().shift(1);
        assert_eq!(lhs, rhs);
        let lhs = cone_complex(&f.shift(-3)).unwrap();
        let rhs = cone_complex(&f).unwrap().shift(-3);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn is_iso_on_identity_and_zero() {
        let alg = a2();
        let x = simple_resolution(&alg);
        assert!(is_iso(&ChainMap::identity(&x)).unwrap().is_some());
        assert!(is_iso(&ChainMap::zero(&x, &x)).unwrap().is_none());
    }

    #[test]
    fn homotopy_inverse_roundtrip() {
        let alg = a2();
        let x = simple_resolution(&alg);
        let id = ChainMap::identity(&x);
        let cert = is_iso(&id).unwrap().unwrap();
        let inv = homotopy_inverse(&id, &cert).unwrap();
        inv.inverse.verify().unwrap();
    }

    #[test]
    fn strict_iso_certificate_for_permutation() {
        let alg = a2();
        let x = simple_resolution(&alg)
            .direct_sum(&Complex::stalk(Arc::clone(&alg), 0, 0))
            .unwrap();
        let mut perms = BTreeMap::new();
        perms.insert(0, vec![1, 0]);
        let (_, fwd, bwd) = crate::morphism::permutation_iso(&x, &perms).unwrap();
        let cert = strict_iso_certificate(&fwd, &bwd).unwrap();
        cert.contraction
            .witnesses(
                &ChainMap::identity(cert.contraction.source()),
                &ChainMap::zero(cert.contraction.source(), cert.contraction.source()),
            )
            .unwrap();
    }

    #[test]
    fn find_iso_identity_first_attempt() {
        let alg = a2();
        let x = simple_resolution(&alg);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let found = find_iso(&x, &x.clone(), 16, &mut rng).unwrap().unwrap();
        assert_eq!(found.attempt, 1);
    }

    #[test]
    fn find_iso_stalk_vs_zero_absent() {
        let alg = a2();
        let x = Complex::stalk(Arc::clone(&alg), 0, 0);
        let zero = Complex::zero(Arc::clone(&alg));
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(find_iso(&x, &zero, 16, &mut rng).unwrap().is_none());
    }

    #[test]
    fn find_iso_cone_zero_vs_sum() {
        let alg = a2();
        let z = simple_resolution(&alg);
        let zero = ChainMap::zero(&z, &z);
        let c = cone_complex(&zero).unwrap();
        let target = z.shift(1).direct_sum(&z).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let found = find_iso(&c, &target, 16, &mut rng).unwrap().unwrap();
        assert_eq!(found.attempt, 1);
    }

    #[test]
    fn induced_cone_map_on_strict_square() {
        let alg = a2();
        let x = simple_resolution(&alg);
        let id = ChainMap::identity(&x);
        let square = Homotopy::zero(&x, &x);
        let phi = induced_cone_map(&id, &id, &id, &id, &square).unwrap();
        phi.verify().unwrap();
        assert!(is_iso(&phi).unwrap().is_some());
    }

    #[test]
    fn iso_preserves_homology_dims() {
        let alg = a2();
        let x = simple_resolution(&alg);
        let y = x.shift(0);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let found = find_iso(&x, &y, 8, &mut rng).unwrap().unwrap();
        assert_eq!(
            found.map.source().homology_dims(),
            found.map.target().homology_dims()
        );
    }
}
