//! Exact global minimization of quadratic polynomials over boxes.
//!
//! The minimum of a quadratic over a closed box is attained at a point where
//! every coordinate either sits on its bound or has vanishing partial
//! derivative. Enumerating the `3^M` bound/bound/stationary configurations
//! and solving the stationary blocks exactly therefore finds the global
//! minimum with no rounding and no convexity assumption.
//!
//! Underdetermined stationary blocks are skipped: a quadratic is constant on
//! any affine set where its gradient vanishes, and pushing such a point along
//! the kernel until it hits a bound lands in a configuration with a smaller
//! free set, so the value is still enumerated.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::poly::{Binding, MultiPoly};
use crate::rat::Rat;

/// One box coordinate: a variable together with its closed interval.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BoxVar {
    pub name: String,
    pub lo: Rat,
    pub hi: Rat,
}

impl BoxVar {
    pub fn new(name: impl Into<String>, lo: Rat, hi: Rat) -> Self {
        BoxVar {
            name: name.into(),
            lo,
            hi,
        }
    }
}

/// A polynomial, a box for a designated subset of its variables, and fixed
/// values for the rest. The polynomial must have total degree at most 2 in
/// the box variables once the fixed values are substituted.
#[derive(Clone, Debug)]
pub struct QuadOverBox {
    pub poly: MultiPoly,
    pub bounds: Vec<BoxVar>,
    pub fixed: BTreeMap<String, Rat>,
}

/// Exact minimum value and a witness point, ties broken toward the
/// lexicographically smallest assignment in declaration order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoxMinimum {
    pub value: Rat,
    pub argmin: Vec<(String, Rat)>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Slot {
    Lo,
    Hi,
    Stationary,
}

/// Cap on simultaneous box variables: the candidate enumeration visits
/// `3^M` configurations, which stays trivial at this scale and useless far
/// beyond it.
pub const MAX_BOX_VARS: usize = 8;

pub fn qf_min_box(q: &QuadOverBox) -> Result<BoxMinimum, Error> {
    if q.bounds.len() > MAX_BOX_VARS {
        return Err(Error::input(format!(
            "{} box variables exceed the supported maximum of {MAX_BOX_VARS}",
            q.bounds.len()
        )));
    }
    let names: Vec<&str> = q.bounds.iter().map(|b| b.name.as_str()).collect();
    let name_set: BTreeSet<String> = names.iter().map(|s| s.to_string()).collect();
    if name_set.len() != names.len() {
        return Err(Error::input("duplicate box variable"));
    }
    for b in &q.bounds {
        if b.lo > b.hi {
            return Err(Error::input(format!(
                "empty interval for {}: {} > {}",
                b.name, b.lo, b.hi
            )));
        }
        if q.fixed.contains_key(&b.name) {
            return Err(Error::input(format!(
                "variable {} is both boxed and fixed",
                b.name
            )));
        }
    }
    if q.bounds.is_empty() {
        return Err(Error::input("no box variables"));
    }

    // Substitute the fixed values that actually occur.
    let occurring: BTreeSet<String> = q.poly.variables().into_iter().collect();
    let bindings: BTreeMap<String, Binding> = q
        .fixed
        .iter()
        .filter(|(name, _)| occurring.contains(*name))
        .map(|(name, v)| (name.clone(), Binding::Value(v.clone())))
        .collect();
    let reduced = if bindings.is_empty() {
        q.poly.clone()
    } else {
        q.poly.subst(&bindings)?
    };

    for v in reduced.variables() {
        if !name_set.contains(&v) {
            return Err(Error::input(format!(
                "variable {v:?} is neither boxed nor fixed"
            )));
        }
    }
    if reduced.degree_in_set(&name_set) > 2 {
        return Err(Error::input(
            "polynomial is not quadratic in the box variables",
        ));
    }

    // Gradient as a linear system: grad_i = sum_j a[i][j] x_j + b[i].
    let m = names.len();
    let mut a = vec![vec![Rat::zero(); m]; m];
    let mut b = vec![Rat::zero(); m];
    for (i, name) in names.iter().enumerate() {
        let g = reduced.differentiate(name);
        for (mono, coeff) in g.terms() {
            if mono.is_constant() {
                b[i] = coeff.clone();
            } else {
                // Quadratic input guarantees each gradient monomial is a
                // single box variable to the first power.
                let (var, exp) = mono.iter().next().expect("non-constant monomial");
                debug_assert!(exp == 1 && mono.total_degree() == 1);
                let j = names.iter().position(|n| n == var).expect("box variable");
                a[i][j] = coeff.clone();
            }
        }
    }

    let mut best: Option<BoxMinimum> = None;
    let mut slots = vec![Slot::Lo; m];
    enumerate(q, &reduced, &names, &a, &b, &mut slots, 0, &mut best)?;
    best.ok_or_else(|| Error::Internal("no candidate point in a nonempty box".into()))
}

#[allow(clippy::too_many_arguments)]
fn enumerate(
    q: &QuadOverBox,
    reduced: &MultiPoly,
    names: &[&str],
    a: &[Vec<Rat>],
    b: &[Rat],
    slots: &mut Vec<Slot>,
    depth: usize,
    best: &mut Option<BoxMinimum>,
) -> Result<(), Error> {
    if depth == slots.len() {
        if let Some(point) = solve_configuration(q, names, a, b, slots) {
            let assignment: BTreeMap<String, Rat> = names
                .iter()
                .zip(&point)
                .map(|(n, v)| (n.to_string(), v.clone()))
                .collect();
            let value = reduced.eval(&assignment)?;
            let candidate = BoxMinimum {
                value,
                argmin: names
                    .iter()
                    .zip(&point)
                    .map(|(n, v)| (n.to_string(), v.clone()))
                    .collect(),
            };
            let replace = match best {
                None => true,
                Some(cur) => {
                    candidate.value < cur.value
                        || (candidate.value == cur.value && point_key(&candidate) < point_key(cur))
                }
            };
            if replace {
                *best = Some(candidate);
            }
        }
        return Ok(());
    }
    for slot in [Slot::Lo, Slot::Stationary, Slot::Hi] {
        // Collapsed intervals: visit the shared endpoint once.
        if slot == Slot::Hi && q.bounds[depth].lo == q.bounds[depth].hi {
            continue;
        }
        slots[depth] = slot;
        enumerate(q, reduced, names, a, b, slots, depth + 1, best)?;
    }
    Ok(())
}

fn point_key(min: &BoxMinimum) -> Vec<Rat> {
    min.argmin.iter().map(|(_, v)| v.clone()).collect()
}

/// Solve the stationarity equations for the free coordinates of one
/// configuration. Returns the full point if the block system has a unique
/// solution lying inside the box.
fn solve_configuration(
    q: &QuadOverBox,
    names: &[&str],
    a: &[Vec<Rat>],
    b: &[Rat],
    slots: &[Slot],
) -> Option<Vec<Rat>> {
    let m = names.len();
    let free: Vec<usize> = (0..m)
        .filter(|&i| slots[i] == Slot::Stationary)
        .collect();
    let mut point: Vec<Rat> = (0..m)
        .map(|i| match slots[i] {
            Slot::Lo => q.bounds[i].lo.clone(),
            Slot::Hi => q.bounds[i].hi.clone(),
            Slot::Stationary => Rat::zero(),
        })
        .collect();
    if free.is_empty() {
        return Some(point);
    }

    // Block system: for i in free, sum_{j free} a[i][j] x_j = -b[i] - sum_{j bound} a[i][j] x_j.
    let k = free.len();
    let mut mat = vec![vec![Rat::zero(); k + 1]; k];
    for (row, &i) in free.iter().enumerate() {
        for (col, &j) in free.iter().enumerate() {
            mat[row][col] = a[i][j].clone();
        }
        let mut rhs = -&b[i];
        for j in 0..m {
            if slots[j] != Slot::Stationary {
                rhs -= &a[i][j] * &point[j];
            }
        }
        mat[row][k] = rhs;
    }
    let solution = gauss_unique(&mut mat)?;
    for (col, &i) in free.iter().enumerate() {
        if solution[col] < q.bounds[i].lo || solution[col] > q.bounds[i].hi {
            return None;
        }
        point[i] = solution[col].clone();
    }
    Some(point)
}

/// Gaussian elimination over the rationals; `None` unless the square system
/// has exactly one solution.
#[allow(clippy::needless_range_loop)] // two rows of `mat` are in play at once
fn gauss_unique(mat: &mut [Vec<Rat>]) -> Option<Vec<Rat>> {
    let n = mat.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !mat[r][col].is_zero())?;
        mat.swap(col, pivot);
        let p = mat[col][col].clone();
        for r in 0..n {
            if r == col || mat[r][col].is_zero() {
                continue;
            }
            let factor = &mat[r][col] / &p;
            for c in col..=n {
                let delta = &factor * &mat[col][c];
                mat[r][c] = &mat[r][c] - &delta;
            }
        }
    }
    Some(
        (0..n)
            .map(|r| {
                let p = mat[r][r].clone();
                &mat[r][n] / &p
            })
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{int, rat};

    fn single(poly: MultiPoly, lo: Rat, hi: Rat) -> QuadOverBox {
        QuadOverBox {
            poly,
            bounds: vec![BoxVar::new("lambda", lo, hi)],
            fixed: BTreeMap::new(),
        }
    }

    #[test]
    fn interior_minimum() {
        let p = MultiPoly::term(int(1), &[("lambda", 2)]);
        let min = qf_min_box(&single(p, int(0), int(1))).unwrap();
        assert_eq!(min.value, int(0));
        assert_eq!(min.argmin, vec![("lambda".to_string(), int(0))]);
    }

    #[test]
    fn boundary_minimum_of_shifted_square() {
        // (lambda - 2)^2 on [0,1] is monotone decreasing, min 1 at lambda=1.
        let lam = MultiPoly::var("lambda");
        let p = lam.sub(&MultiPoly::constant(int(2))).pow(2);
        let min = qf_min_box(&single(p, int(0), int(1))).unwrap();
        assert_eq!(min.value, int(1));
        assert_eq!(min.argmin, vec![("lambda".to_string(), int(1))]);
    }

    #[test]
    fn symmetric_two_variable_form_agrees_with_grid_oracle() {
        // lambda1^2 + lambda2^2 - 2 lambda1 - 2 lambda2 + lambda1 lambda2
        // on [0,1]^2: symmetric, so the minimum lies on the diagonal.
        let l1 = MultiPoly::var("lambda_1");
        let l2 = MultiPoly::var("lambda_2");
        let p = l1
            .pow(2)
            .add(&l2.pow(2))
            .sub(&l1.scale(&int(2)))
            .sub(&l2.scale(&int(2)))
            .add(&l1.mul(&l2));
        let q = QuadOverBox {
            poly: p.clone(),
            bounds: vec![
                BoxVar::new("lambda_1", int(0), int(1)),
                BoxVar::new("lambda_2", int(0), int(1)),
            ],
            fixed: BTreeMap::new(),
        };
        let min = qf_min_box(&q).unwrap();
        assert_eq!(min.value, rat(-4, 3));
        assert_eq!(
            min.argmin,
            vec![
                ("lambda_1".to_string(), rat(2, 3)),
                ("lambda_2".to_string(), rat(2, 3)),
            ]
        );

        // Grid oracle with step 1/20: the exact minimum must not exceed any
        // grid value, and be attained at the returned point.
        let mut grid_min: Option<Rat> = None;
        for i in 0..=20i64 {
            for j in 0..=20i64 {
                let mut a = BTreeMap::new();
                a.insert("lambda_1".to_string(), rat(i, 20));
                a.insert("lambda_2".to_string(), rat(j, 20));
                let v = p.eval(&a).unwrap();
                grid_min = Some(match grid_min {
                    None => v,
                    Some(g) => g.min(v),
                });
            }
        }
        let grid_min = grid_min.unwrap();
        assert!(min.value <= grid_min);
        // Step 1/20 brackets the candidate minimum to within 1/100 here.
        assert!(&grid_min - &min.value < rat(1, 100));
        let at: BTreeMap<String, Rat> = min.argmin.iter().cloned().collect();
        assert_eq!(p.eval(&at).unwrap(), min.value);
    }

    #[test]
    fn fixed_values_are_substituted() {
        // c * lambda^2 with c fixed to -1 flips the minimizer to a corner.
        let p = MultiPoly::term(int(1), &[("c", 1), ("lambda", 2)]);
        let mut fixed = BTreeMap::new();
        fixed.insert("c".to_string(), int(-1));
        let q = QuadOverBox {
            poly: p,
            bounds: vec![BoxVar::new("lambda", int(-2), int(1))],
            fixed,
        };
        let min = qf_min_box(&q).unwrap();
        assert_eq!(min.value, int(-4));
        assert_eq!(min.argmin[0].1, int(-2));
    }

    #[test]
    fn cubic_is_rejected() {
        let p = MultiPoly::term(int(1), &[("lambda", 3)]);
        assert!(qf_min_box(&single(p, int(0), int(1))).is_err());
    }

    #[test]
    fn unbound_variable_is_rejected() {
        let p = MultiPoly::term(int(1), &[("lambda", 1), ("mu", 1)]);
        assert!(qf_min_box(&single(p, int(0), int(1))).is_err());
    }

    #[test]
    fn degenerate_direction_still_found() {
        // (lambda1 - lambda2)^2 has a singular Hessian; minimum 0 must still
        // be reported, with the lexicographically smallest witness.
        let p = MultiPoly::var("a").sub(&MultiPoly::var("b")).pow(2);
        let q = QuadOverBox {
            poly: p,
            bounds: vec![
                BoxVar::new("a", int(0), int(1)),
                BoxVar::new("b", int(0), int(1)),
            ],
            fixed: BTreeMap::new(),
        };
        let min = qf_min_box(&q).unwrap();
        assert_eq!(min.value, int(0));
        assert_eq!(min.argmin[0].1, int(0));
        assert_eq!(min.argmin[1].1, int(0));
    }

    #[test]
    fn diagonal_reduction_needs_convexity() {
        // Scope check: for a symmetric quadratic with a concave cross
        // direction the box minimum can leave the diagonal, so the diagonal
        // reduction is a property of the convex forms this crate minimizes,
        // not of symmetric quadratics at large.
        let p = MultiPoly::var("a").sub(&MultiPoly::var("b")).pow(2).neg();
        let q = QuadOverBox {
            poly: p.clone(),
            bounds: vec![
                BoxVar::new("a", int(0), int(1)),
                BoxVar::new("b", int(0), int(1)),
            ],
            fixed: BTreeMap::new(),
        };
        let full = qf_min_box(&q).unwrap();
        assert_eq!(full.value, int(-1)); // attained at (0, 1)
        let mut bindings = BTreeMap::new();
        bindings.insert("b".to_string(), Binding::Poly(MultiPoly::var("a")));
        let diag = qf_min_box(&QuadOverBox {
            poly: p.subst(&bindings).unwrap(),
            bounds: vec![BoxVar::new("a", int(0), int(1))],
            fixed: BTreeMap::new(),
        })
        .unwrap();
        assert_eq!(diag.value, int(0));
        assert!(full.value < diag.value);
    }

    #[test]
    fn variable_cap_enforced() {
        let p = MultiPoly::var("x0");
        let bounds: Vec<BoxVar> = (0..=MAX_BOX_VARS)
            .map(|i| BoxVar::new(format!("x{i}"), int(0), int(1)))
            .collect();
        let q = QuadOverBox {
            poly: p,
            bounds,
            fixed: BTreeMap::new(),
        };
        assert!(qf_min_box(&q).is_err());
    }

    #[test]
    fn tie_break_is_lexicographic() {
        // Constant polynomial: every corner ties; expect the all-lo corner.
        let q = QuadOverBox {
            poly: MultiPoly::constant(int(5)),
            bounds: vec![
                BoxVar::new("a", int(-1), int(2)),
                BoxVar::new("b", int(0), int(3)),
            ],
            fixed: BTreeMap::new(),
        };
        let min = qf_min_box(&q).unwrap();
        assert_eq!(min.value, int(5));
        assert_eq!(min.argmin[0].1, int(-1));
        assert_eq!(min.argmin[1].1, int(0));
    }
}
