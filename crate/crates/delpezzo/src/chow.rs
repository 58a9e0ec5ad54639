//! Numerical intersection theory for a cubic-surface pencil.
//!
//! The ambient fourfold is the projectivization of a split rank-4 bundle over
//! the line, with twists `0 <= a1 <= a2 <= a3`. Its divisor lattice is spanned
//! by the tautological class `L` and the fiber class `G`, and the threefold
//! lives in `|3L + mG|`. Every top intersection number reduces by the three
//! relations `G^2 = 0`, `L^3.G = 1`, `L^4 = a1 + a2 + a3`.

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::rat::Rat;

/// The fibration data: bundle twists and the degree of the threefold over
/// the base.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BundleModel {
    pub a1: i64,
    pub a2: i64,
    pub a3: i64,
    pub m: i64,
}

impl BundleModel {
    pub fn new(a1: i64, a2: i64, a3: i64, m: i64) -> Result<Self, Error> {
        if !(0 <= a1 && a1 <= a2 && a2 <= a3) {
            return Err(Error::input(format!(
                "bundle twists must satisfy 0 <= a1 <= a2 <= a3, got ({a1}, {a2}, {a3})"
            )));
        }
        Ok(BundleModel { a1, a2, a3, m })
    }

    pub fn twist_sum(&self) -> i64 {
        self.a1 + self.a2 + self.a3
    }

    /// Divisor class cut out by the threefold: `3L + mG`.
    pub fn hypersurface_class(&self) -> XDivClass {
        XDivClass { l: 3, g: self.m }
    }
}

/// Divisor class on the ambient fourfold in the `(L, G)` basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct XDivClass {
    pub l: i64,
    pub g: i64,
}

impl XDivClass {
    pub fn new(l: i64, g: i64) -> Self {
        XDivClass { l, g }
    }
}

/// Degree of the monomial `L^i.G^j` with `i + j = 4`.
///
/// `G^2 = 0` kills `j >= 2`; `L^3.G = 1`; `L^4` equals the first Chern number
/// of the bundle, `a1 + a2 + a3` (higher Chern classes vanish over a curve).
pub fn chow_monomial_degree(model: &BundleModel, i: u32, j: u32) -> Result<Rat, Error> {
    if i + j != 4 {
        return Err(Error::input(format!(
            "top monomial must have total degree 4, got L^{i}.G^{j}"
        )));
    }
    Ok(match (i, j) {
        (4, 0) => Rat::from_int(model.twist_sum()),
        (3, 1) => Rat::one(),
        _ => Rat::zero(),
    })
}

/// Exact degree of a product of four divisor classes on the fourfold.
pub fn chow_product(model: &BundleModel, factors: &[XDivClass]) -> Result<Rat, Error> {
    if factors.len() != 4 {
        return Err(Error::input(format!(
            "top intersection on the fourfold takes exactly 4 factors, got {}",
            factors.len()
        )));
    }
    // Multilinear expansion over the 16 L/G choices; anything with two or
    // more G factors vanishes.
    let mut total = Rat::zero();
    for mask in 0u32..16 {
        let g_count = mask.count_ones();
        if g_count >= 2 {
            continue;
        }
        let mut coeff = Rat::one();
        for (idx, f) in factors.iter().enumerate() {
            let pick_g = mask & (1 << idx) != 0;
            coeff *= Rat::from_int(if pick_g { f.g } else { f.l });
        }
        total += coeff * chow_monomial_degree(model, 4 - g_count, g_count)?;
    }
    Ok(total)
}

/// Class on the ambient fourfold whose restriction is the canonical class of
/// the threefold: `-L + (m + a1 + a2 + a3 - 2) G`.
pub fn canonical_class_v(model: &BundleModel) -> XDivClass {
    XDivClass {
        l: -1,
        g: model.m + model.twist_sum() - 2,
    }
}

/// `(K_V^2 . L)`, computed as a fourfold intersection against the
/// hypersurface class. Always equals `12 - 5m - 3(a1+a2+a3)`.
pub fn k2_dot_l(model: &BundleModel) -> Rat {
    let k = canonical_class_v(model);
    chow_product(
        model,
        &[k, k, XDivClass::new(1, 0), model.hypersurface_class()],
    )
    .expect("four factors")
}

/// `(K_V^2 . F)`; equals 3 for every model.
pub fn k2_dot_f(model: &BundleModel) -> Rat {
    let k = canonical_class_v(model);
    chow_product(
        model,
        &[k, k, XDivClass::new(0, 1), model.hypersurface_class()],
    )
    .expect("four factors")
}

/// The sufficient twistedness criterion `5m >= 12 - 3(a1+a2+a3)`, equivalent
/// to `(K_V^2 . L) <= 0`.
///
/// The full non-effectivity condition on `M K_V^2 - f` is not decidable from
/// lattice data; only this sufficient inequality is exposed.
pub fn k2_condition_sufficient(model: &BundleModel) -> bool {
    5 * model.m >= 12 - 3 * model.twist_sum()
}

/// Divisor class on the threefold in the `(-K_V, F)` basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VDivClass {
    pub k: i64,
    pub f: i64,
}

/// Curve class on the threefold in the `(s, f)` basis: section class and
/// line-in-a-fiber class.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VCycleClass {
    pub s: i64,
    pub f: i64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CycleKind {
    Horizontal,
    Vertical,
}

/// Degree of a 1-cycle: horizontal cycles pair against the fiber class
/// (`(F.s) = 1`, `(F.f) = 0`), vertical ones against the anticanonical class
/// (`(-K.s) = (-K.f) = 1`).
pub fn cycle_degree(z: &VCycleClass, kind: CycleKind) -> i64 {
    match kind {
        CycleKind::Horizontal => z.s,
        CycleKind::Vertical => z.s + z.f,
    }
}

/// The elementary bound `mult_x C <= deg C` for an irreducible curve, used as
/// a validation guard on user-supplied cycle data.
pub fn mult_le_deg_check(mult: i64, deg: i64) -> Result<bool, Error> {
    if mult < 0 || deg < 0 {
        return Err(Error::input(format!(
            "multiplicity and degree must be nonnegative, got ({mult}, {deg})"
        )));
    }
    Ok(mult <= deg)
}
