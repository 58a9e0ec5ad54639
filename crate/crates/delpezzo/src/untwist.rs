//! Untwisting maximal curves by birational involutions.
//!
//! A horizontal curve of degree 1 or 2 over the base carries a fiberwise
//! involution whose action on the divisor lattice of the blow-up (modulo
//! fibers) is an explicit integer matrix. Composing with the involution
//! strictly decreases the pencil invariant `n` whenever the curve is maximal
//! (`nu > n`), so greedily untwisting terminates.
//!
//! Only the lattice action and the `n`-update are modeled, not the geometric
//! construction of the involutions. The involution of one curve can change
//! the multiplicities of the others in a way the lattice does not determine;
//! strict mode refuses to continue past such a point, lenient mode treats the
//! curves as independent.

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// Degree over the base of a horizontal maximal curve.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CurveKind {
    Section,
    Bisection,
}

/// The rejection used for vertical curve requests: a vertical curve of
/// multiplicity above `n` would force the whole fiber to be a fixed
/// component of the pencil, which a pencil cannot have.
pub fn vertical_curve_rejection() -> Error {
    Error::domain(
        "a vertical curve cannot be a maximal curve: it would make its fiber a fixed \
         component of the pencil, so there is nothing to untwist",
    )
}

/// Divisor class on the blow-up of the threefold along the curve, modulo the
/// fiber subgroup, in the (anticanonical, exceptional) basis `(h, e)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PicStarClass {
    pub h: i64,
    pub e: i64,
}

/// Matrix of the involution on the `(h, e)` lattice; row `i` holds the
/// coordinates of the image of basis vector `i`.
pub fn involution_matrix(kind: CurveKind) -> [[i64; 2]; 2] {
    match kind {
        CurveKind::Section => [[3, -4], [2, -3]],
        CurveKind::Bisection => [[5, -6], [4, -5]],
    }
}

/// Pull back a class under the involution: `h*row(h) + e*row(e)`.
pub fn apply_involution(kind: CurveKind, cls: PicStarClass) -> PicStarClass {
    let m = involution_matrix(kind);
    PicStarClass {
        h: cls.h * m[0][0] + cls.e * m[1][0],
        e: cls.h * m[0][1] + cls.e * m[1][1],
    }
}

/// A curve carrying the pencil multiplicity `nu`; maximal when `nu > n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MaximalCurve {
    pub kind: CurveKind,
    pub nu: i64,
}

/// Pencil invariants `(n, l)` with the tracked curves.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PencilState {
    pub n: i64,
    pub l: i64,
    pub curves: Vec<MaximalCurve>,
}

impl PencilState {
    pub fn new(n: i64, l: i64, curves: Vec<MaximalCurve>) -> Result<Self, Error> {
        if n < 0 {
            return Err(Error::input(format!("pencil invariant n must be >= 0, got {n}")));
        }
        if l < 0 {
            return Err(Error::input(format!("pencil invariant l must be >= 0, got {l}")));
        }
        if n == 0 && l != 1 {
            return Err(Error::input(
                "n = 0 is the fiber-wise case, which forces l = 1",
            ));
        }
        for (i, c) in curves.iter().enumerate() {
            if c.nu < 0 {
                return Err(Error::input(format!(
                    "curve {i} has negative multiplicity {}",
                    c.nu
                )));
            }
        }
        Ok(PencilState { n, l, curves })
    }

    pub fn maximal_indices(&self) -> Vec<usize> {
        self.curves
            .iter()
            .enumerate()
            .filter(|(_, c)| c.nu > self.n)
            .map(|(i, _)| i)
            .collect()
    }
}

/// The `(n, nu)` update of one untwisting step.
fn transform(kind: CurveKind, n: i64, nu: i64) -> (i64, i64) {
    match kind {
        CurveKind::Section => (3 * n - 2 * nu, 4 * n - 3 * nu),
        CurveKind::Bisection => (5 * n - 4 * nu, 6 * n - 5 * nu),
    }
}

/// One recorded untwisting step, with before/after data for replay.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UntwistStep {
    pub curve_index: usize,
    pub kind: CurveKind,
    pub n_before: i64,
    pub nu_before: i64,
    pub n_after: i64,
    pub nu_after: i64,
}

/// The composed word of involutions, in application order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct UntwistWord {
    pub steps: Vec<UntwistStep>,
}

impl UntwistWord {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Re-apply the word to `initial` from the formulas alone, checking each
    /// recorded step on the way; the result must reproduce `final_state`
    /// exactly.
    pub fn replay(&self, initial: &PencilState) -> Result<PencilState, Error> {
        let mut state = initial.clone();
        for step in &self.steps {
            let (next, recomputed) = untwist_once(&state, step.curve_index)?;
            if &recomputed != step {
                return Err(Error::CertificateInvalid(format!(
                    "replayed step for curve {} disagrees with the recorded one",
                    step.curve_index
                )));
            }
            state = next;
        }
        Ok(state)
    }
}

/// Untwist a single maximal curve. Requires `n >= 1` and `nu > n`; rejects
/// data outside the geometric regime (where the formulas would produce a
/// negative invariant or multiplicity).
pub fn untwist_once(
    state: &PencilState,
    curve_index: usize,
) -> Result<(PencilState, UntwistStep), Error> {
    let curve = *state
        .curves
        .get(curve_index)
        .ok_or_else(|| Error::input(format!("no curve with index {curve_index}")))?;
    if state.n < 1 {
        return Err(Error::precondition(
            "n >= 1",
            format!("cannot untwist at n = {}", state.n),
        ));
    }
    if curve.nu <= state.n {
        return Err(Error::precondition(
            "nu > n",
            format!(
                "curve {curve_index} is not maximal: nu = {} <= n = {}",
                curve.nu, state.n
            ),
        ));
    }
    let (n_after, nu_after) = transform(curve.kind, state.n, curve.nu);
    if n_after < 0 || nu_after < 0 {
        return Err(Error::domain(format!(
            "untwisting curve {curve_index} would give (n, nu) = ({n_after}, {nu_after}); \
             multiplicities this far above n cannot occur for an actual pencil"
        )));
    }
    // Maximality flips: nu > n forces nu_after <= n_after under both updates.
    debug_assert!(nu_after <= n_after);
    let mut curves = state.curves.clone();
    curves[curve_index].nu = nu_after;
    let step = UntwistStep {
        curve_index,
        kind: curve.kind,
        n_before: state.n,
        nu_before: curve.nu,
        n_after,
        nu_after,
    };
    let next = PencilState {
        n: n_after,
        l: state.l,
        curves,
    };
    Ok((next, step))
}

/// How `untwist_all` treats curves other than the one being untwisted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UntwistMode {
    /// Refuse to untwist a curve whose multiplicity may be stale (anything
    /// supplied before an earlier step).
    #[default]
    Strict,
    /// Treat curve multiplicities as unaffected by the other involutions.
    Lenient,
}

/// Greedily untwist until no curve is maximal: pick the largest multiplicity
/// (ties to the lowest index), apply the involution, repeat. Terminates
/// because `n` strictly decreases.
pub fn untwist_all(
    state: &PencilState,
    mode: UntwistMode,
) -> Result<(UntwistWord, PencilState), Error> {
    let mut current = state.clone();
    let mut word = UntwistWord::default();
    loop {
        let maximal = current.maximal_indices();
        let Some(&pick) = maximal
            .iter()
            .max_by_key(|&&i| (current.curves[i].nu, std::cmp::Reverse(i)))
        else {
            return Ok((word, current));
        };
        if mode == UntwistMode::Strict && !word.is_empty() {
            return Err(Error::domain(format!(
                "curve {pick} still reads as maximal, but its multiplicity was supplied \
                 before the previous involution and may be stale; re-supply the curve data \
                 or run in lenient mode"
            )));
        }
        let (next, step) = untwist_once(&current, pick)?;
        debug_assert!(next.n < current.n);
        word.steps.push(step);
        current = next;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn det(m: [[i64; 2]; 2]) -> i64 {
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    fn matmul(a: [[i64; 2]; 2], b: [[i64; 2]; 2]) -> [[i64; 2]; 2] {
        let mut out = [[0; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        out
    }

    #[test]
    fn matrices_are_involutions_with_determinant_minus_one() {
        for kind in [CurveKind::Section, CurveKind::Bisection] {
            let m = involution_matrix(kind);
            assert_eq!(matmul(m, m), [[1, 0], [0, 1]]);
            assert_eq!(det(m), -1);
        }
    }

    #[test]
    fn matrix_entries() {
        assert_eq!(involution_matrix(CurveKind::Section), [[3, -4], [2, -3]]);
        assert_eq!(involution_matrix(CurveKind::Bisection), [[5, -6], [4, -5]]);
    }

    #[test]
    fn section_action_on_a_pencil_class() {
        // n h - nu e with (n, nu) = (5, 6) maps to (3, 2).
        let out = apply_involution(CurveKind::Section, PicStarClass { h: 5, e: -6 });
        assert_eq!(out, PicStarClass { h: 3, e: -2 });
    }

    #[test]
    fn bisection_action_on_a_pencil_class() {
        // h-part is 5n - 4nu = 1; the e-part follows from the matrix action,
        // 6n - 5nu = 0 as the new multiplicity.
        let out = apply_involution(CurveKind::Bisection, PicStarClass { h: 5, e: -6 });
        assert_eq!(out, PicStarClass { h: 1, e: 0 });
    }

    #[test]
    fn anticanonical_class_is_recovered_after_two_applications() {
        for kind in [CurveKind::Section, CurveKind::Bisection] {
            let cls = PicStarClass { h: 1, e: 0 };
            let twice = apply_involution(kind, apply_involution(kind, cls));
            assert_eq!(twice, cls);
        }
    }

    proptest! {
        #[test]
        fn involution_squares_to_identity(h in -100i64..100, e in -100i64..100) {
            for kind in [CurveKind::Section, CurveKind::Bisection] {
                let cls = PicStarClass { h, e };
                prop_assert_eq!(apply_involution(kind, apply_involution(kind, cls)), cls);
            }
        }
    }

    fn state(n: i64, curves: Vec<MaximalCurve>) -> PencilState {
        PencilState::new(n, 0, curves).unwrap()
    }

    #[test]
    fn untwist_once_section() {
        let s = state(
            5,
            vec![MaximalCurve {
                kind: CurveKind::Section,
                nu: 6,
            }],
        );
        let (next, step) = untwist_once(&s, 0).unwrap();
        assert_eq!(next.n, 3);
        assert_eq!(next.curves[0].nu, 2);
        assert_eq!(step.n_after, 3);
        assert_eq!(step.nu_after, 2);
    }

    #[test]
    fn untwist_once_bisection() {
        let s = state(
            5,
            vec![MaximalCurve {
                kind: CurveKind::Bisection,
                nu: 6,
            }],
        );
        let (next, _) = untwist_once(&s, 0).unwrap();
        assert_eq!(next.n, 1);
        assert_eq!(next.curves[0].nu, 0);
    }

    #[test]
    fn non_maximal_curve_is_rejected() {
        let s = state(
            1,
            vec![MaximalCurve {
                kind: CurveKind::Section,
                nu: 1,
            }],
        );
        assert!(matches!(
            untwist_once(&s, 0),
            Err(Error::Precondition { .. })
        ));
    }

    #[test]
    fn out_of_regime_multiplicity_is_a_domain_error() {
        // n = 2, nu = 3 gives n' = 0 but nu' = -1.
        let s = state(
            2,
            vec![MaximalCurve {
                kind: CurveKind::Section,
                nu: 3,
            }],
        );
        assert!(matches!(untwist_once(&s, 0), Err(Error::Domain(_))));
    }

    #[test]
    fn untwist_all_without_maximal_curves_is_empty() {
        let s = state(
            4,
            vec![MaximalCurve {
                kind: CurveKind::Bisection,
                nu: 3,
            }],
        );
        let (word, out) = untwist_all(&s, UntwistMode::Strict).unwrap();
        assert!(word.is_empty());
        assert_eq!(out, s);
    }

    #[test]
    fn untwist_all_single_step_trace() {
        let s = state(
            5,
            vec![MaximalCurve {
                kind: CurveKind::Section,
                nu: 6,
            }],
        );
        let (word, out) = untwist_all(&s, UntwistMode::Strict).unwrap();
        assert_eq!(word.len(), 1);
        assert_eq!(out.n, 3);
        assert_eq!(out.curves[0].nu, 2);
        assert_eq!(word.replay(&s).unwrap(), out);
    }

    #[test]
    fn strict_mode_refuses_stale_multiplicities() {
        let s = state(
            7,
            vec![
                MaximalCurve {
                    kind: CurveKind::Bisection,
                    nu: 8,
                },
                MaximalCurve {
                    kind: CurveKind::Section,
                    nu: 7, // not maximal at n=7, "maximal" at the untwisted n=3
                },
            ],
        );
        assert!(matches!(
            untwist_all(&s, UntwistMode::Strict),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn lenient_mode_untwists_a_cascade() {
        // n: 17 -> (bisection nu=20) -> 5 -> (section nu=6) -> 3, after
        // which every curve multiplicity sits at 2.
        let s = state(
            17,
            vec![
                MaximalCurve {
                    kind: CurveKind::Section,
                    nu: 6,
                },
                MaximalCurve {
                    kind: CurveKind::Bisection,
                    nu: 20,
                },
            ],
        );
        let (word, out) = untwist_all(&s, UntwistMode::Lenient).unwrap();
        assert_eq!(word.len(), 2);
        assert_eq!(word.steps[0].curve_index, 1);
        assert_eq!(word.steps[1].curve_index, 0);
        assert_eq!(out.n, 3);
        assert_eq!(out.curves[0].nu, 2);
        assert_eq!(out.curves[1].nu, 2);
        assert!(out.maximal_indices().is_empty());
        assert_eq!(word.replay(&s).unwrap(), out);
        // n strictly decreases along the trace.
        assert!(word
            .steps
            .windows(2)
            .all(|w| w[1].n_before < w[0].n_before));
    }

    #[test]
    fn fiber_wise_state_requires_l_equal_one() {
        assert!(PencilState::new(0, 0, vec![]).is_err());
        assert!(PencilState::new(0, 1, vec![]).is_ok());
    }
}
