//! Homology certificates that rule out a degeneration from zero, plus the
//! positive witness that every S (+) S[1] is such a degeneration.

use std::collections::BTreeMap;

use crate::complex::Complex;
use crate::degeneration::{left_witness, DegenerationWitness};
use crate::error::Result;
use crate::morphism::ChainMap;
use crate::triangle::{strict_iso_certificate, IsoCertificate};

/// An isolated nonzero homology degree: H^n != 0 while H^{n-1} and
/// H^{n+1} both vanish. By the long-exact-sequence argument (monomorphic
/// and epimorphic endomorphisms of finite-length modules are
/// isomorphisms), no triangle Z -> Z -> M -> Z[1] can exist, so the zero
/// object does not degenerate to M on the triangle level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObstructionReport {
    /// The isolated degree.
    pub degree: i64,
    /// Dimension vectors at degrees n-1, n, n+1, as consumed by the
    /// argument.
    pub window: BTreeMap<i64, Vec<usize>>,
    /// Marker naming the argument; always "LES-certificate".
    pub method: &'static str,
}

/// Scans the homology for an isolated nonzero degree, highest first.
/// `None` means "no certificate", not "a degeneration exists".
pub fn isolated_homology_obstruction(m: &Complex) -> Option<ObstructionReport> {
    let dims = m.homology_dims();
    let nv = m.algebra().vertex_count();
    let nonzero = |n: i64| dims.contains_key(&n);
    for &n in dims.keys().rev() {
        if nonzero(n) && !nonzero(n - 1) && !nonzero(n + 1) {
            let mut window = BTreeMap::new();
            for k in [n - 1, n, n + 1] {
                window.insert(k, dims.get(&k).cloned().unwrap_or_else(|| vec![0; nv]));
            }
            return Some(ObstructionReport {
                degree: n,
                window,
                method: "LES-certificate",
            });
        }
    }
    None
}

/// The canonical degeneration of zero to S[1] (+) S: the witness with
/// M = 0, Z = S and v = 0, whose cone is S[1] (+) S on the nose. The
/// identity-shaped isomorphism certificate is attached.
pub struct ZeroDegeneration {
    pub witness: DegenerationWitness,
    /// S[1] (+) S.
    pub split_form: Complex,
    pub iso: ChainMap,
    pub iso_certificate: IsoCertificate,
}

pub fn zero_degenerates_witness(s: &Complex) -> Result<ZeroDegeneration> {
    let zero_obj = Complex::zero(std::sync::Arc::clone(s.algebra()));
    let witness = left_witness(s, &ChainMap::zero(s, s), &ChainMap::zero(s, &zero_obj))?;
    let split_form = s.shift(1).direct_sum(s)?;
    debug_assert_eq!(witness.n, split_form);
    let iso = ChainMap::identity(&witness.n);
    let iso_certificate = strict_iso_certificate(&iso, &iso)?;
    Ok(ZeroDegeneration {
        witness,
        split_form,
        iso,
        iso_certificate,
    })
}
