//! Resolution graphs of discrete valuations and their aggregates.
//!
//! A valuation resolved by `K` successive blow-ups carries an oriented graph
//! on `{1, ..., K}`: an arrow `j -> i` records that the j-th center lies on
//! the transform of the i-th exceptional divisor. `p_i` counts oriented
//! paths from the top node `K` to `i` (with `p(i, i) = 1`); the first
//! `point_phase` centers are points, the rest are curves. Everything the
//! exclusion step needs from the graph is a handful of path-count sums
//! together with the multiplicity/discrepancy identity that defines the
//! invariant `e`.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::rat::Rat;

/// Which top-level shape the center of the valuation takes after the chain
/// of line blow-ups: a free point on the last exceptional divisor (A), the
/// whole fiber of its ruling over the previous center (B), or the
/// intersection point with the previous divisor (C).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GraphCase {
    A,
    B,
    C,
}

/// Case tag with the data that selects the fiber-multiplicity formula.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseTag {
    pub case: GraphCase,
    pub special: bool,
    /// Length of the staircase below the resolution.
    pub m: u32,
    /// The special length-2 sub-case whose center is the double point of
    /// the fiber.
    #[serde(default)]
    pub singular_center: bool,
}

/// Input graph of a resolution: arrows, phase split, multiplicities,
/// discrepancies, and the membership flags the case at hand requires.
///
/// `in_e[i-1]` states that the i-th center lies on the transform of the
/// distinguished divisor (cases A and B; for the singular-center sub-case it
/// tracks the transform of the fiber instead). `in_e_plus`/`in_e_minus`
/// play that role for the two divisors of case C.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResolutionGraph {
    pub node_count: usize,
    /// Arrows `(j, i)`: the j-th center lies on the i-th divisor (`j` blown
    /// up after `i`).
    pub edges: Vec<(usize, usize)>,
    /// Number of leading point centers; later centers are curves.
    pub point_phase: usize,
    pub nu: Vec<Rat>,
    pub delta: Vec<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub in_e: Option<Vec<bool>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub in_e_plus: Option<Vec<bool>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub in_e_minus: Option<Vec<bool>>,
}

impl ResolutionGraph {
    pub fn validate(&self) -> Result<(), Error> {
        let k = self.node_count;
        if k < 1 {
            return Err(Error::input("graph needs at least one node"));
        }
        let mut seen = std::collections::BTreeSet::new();
        for &(j, i) in &self.edges {
            if j < 1 || j > k || i < 1 || i > k {
                return Err(Error::input(format!(
                    "edge ({j}, {i}) outside the node range 1..={k}"
                )));
            }
            if j == i {
                return Err(Error::input(format!("self-loop at node {j}")));
            }
            if !seen.insert((j, i)) {
                return Err(Error::input(format!("duplicate edge ({j}, {i})")));
            }
        }
        if self.point_phase > k {
            return Err(Error::input(format!(
                "point phase {} exceeds the node count {k}",
                self.point_phase
            )));
        }
        if self.nu.len() != k {
            return Err(Error::input(format!(
                "expected {k} multiplicities, got {}",
                self.nu.len()
            )));
        }
        if self.delta.len() != k {
            return Err(Error::input(format!(
                "expected {k} discrepancies, got {}",
                self.delta.len()
            )));
        }
        for (idx, v) in self.nu.iter().enumerate() {
            if v.is_negative() {
                return Err(Error::input(format!(
                    "multiplicity nu_{} must be nonnegative",
                    idx + 1
                )));
            }
        }
        for flags in [&self.in_e, &self.in_e_plus, &self.in_e_minus]
            .into_iter()
            .flatten()
        {
            if flags.len() != k {
                return Err(Error::input(format!(
                    "membership flag vector has length {}, expected {k}",
                    flags.len()
                )));
            }
        }
        Ok(())
    }

    /// A chain `K -> K-1 -> ... -> 1` with the given data.
    pub fn chain(nu: Vec<Rat>, delta: Vec<i64>, point_phase: usize) -> Self {
        let k = nu.len();
        ResolutionGraph {
            node_count: k,
            edges: (2..=k).map(|j| (j, j - 1)).collect(),
            point_phase,
            nu,
            delta,
            in_e: None,
            in_e_plus: None,
            in_e_minus: None,
        }
    }
}

/// Number of oriented paths from the top node to each node, `p(K, K) = 1`.
/// Exact integers; cyclic input is rejected.
pub fn path_counts(g: &ResolutionGraph) -> Result<Vec<BigInt>, Error> {
    g.validate()?;
    let k = g.node_count;
    let mut succ = vec![Vec::new(); k + 1];
    let mut indeg = vec![0usize; k + 1];
    for &(j, i) in &g.edges {
        succ[j].push(i);
        indeg[i] += 1;
    }
    // Kahn's algorithm, doubling as the cycle check.
    let mut queue: Vec<usize> = (1..=k).filter(|&v| indeg[v] == 0).collect();
    let mut order = Vec::with_capacity(k);
    while let Some(v) = queue.pop() {
        order.push(v);
        for &w in &succ[v] {
            indeg[w] -= 1;
            if indeg[w] == 0 {
                queue.push(w);
            }
        }
    }
    if order.len() != k {
        return Err(Error::input("the arrow relation contains a cycle"));
    }
    let mut p = vec![BigInt::zero(); k + 1];
    p[k] = BigInt::one();
    for &v in &order {
        let pv = p[v].clone();
        if pv.is_zero() {
            continue;
        }
        for &w in &succ[v] {
            p[w] += &pv;
        }
    }
    Ok(p[1..=k].to_vec())
}

/// Path-count aggregates for one distinguished divisor: the largest index
/// whose center still lies on it, the point-phase cutoff, and the two sums.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SideAggregates {
    /// `N* = max { i : B_{i-1} on the divisor }`.
    pub n_star: usize,
    /// `N = min(N*, point phase)` (cases A and C; for B, `N = N*`).
    pub n: usize,
    /// `Sigma* = p_1 + ... + p_{N*}`; this is the multiplicity of the
    /// divisor along the valuation.
    #[serde(with = "crate::serde_util::bigint_string")]
    pub eps: BigInt,
    /// `Sigma_* = p_1 + ... + p_N`.
    #[serde(with = "crate::serde_util::bigint_string")]
    pub sigma_sub: BigInt,
}

fn side_aggregates(
    p: &[BigInt],
    flags: &[bool],
    cap: Option<usize>,
    what: &str,
) -> Result<SideAggregates, Error> {
    let n_star = flags
        .iter()
        .rposition(|&b| b)
        .map(|idx| idx + 1)
        .ok_or_else(|| {
            Error::input(format!(
                "membership flags for {what} mark no center; the first center lies on it \
                 by construction"
            ))
        })?;
    let n = cap.map_or(n_star, |l| n_star.min(l));
    let eps = p[..n_star].iter().sum();
    let sigma_sub = p[..n].iter().sum();
    Ok(SideAggregates {
        n_star,
        n,
        eps,
        sigma_sub,
    })
}

/// Everything the exclusion bounds need from a graph, per case.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "case")]
pub enum Aggregates {
    A {
        #[serde(with = "crate::serde_util::bigint_vec_string")]
        p: Vec<BigInt>,
        #[serde(with = "crate::serde_util::bigint_string")]
        sigma0: BigInt,
        #[serde(with = "crate::serde_util::bigint_string")]
        sigma1: BigInt,
        divisor: SideAggregates,
    },
    B {
        #[serde(with = "crate::serde_util::bigint_vec_string")]
        p: Vec<BigInt>,
        #[serde(with = "crate::serde_util::bigint_string")]
        sigma: BigInt,
        #[serde(with = "crate::serde_util::bigint_string")]
        sum_p_sq: BigInt,
        divisor: SideAggregates,
    },
    C {
        #[serde(with = "crate::serde_util::bigint_vec_string")]
        p: Vec<BigInt>,
        #[serde(with = "crate::serde_util::bigint_string")]
        sigma0: BigInt,
        #[serde(with = "crate::serde_util::bigint_string")]
        sigma1: BigInt,
        plus: SideAggregates,
        minus: SideAggregates,
        /// Aggregates of the fiber transform, needed only by the
        /// singular-center sub-case.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        fiber: Option<SideAggregates>,
    },
}

impl Aggregates {
    pub fn path_counts(&self) -> &[BigInt] {
        match self {
            Aggregates::A { p, .. } | Aggregates::B { p, .. } | Aggregates::C { p, .. } => p,
        }
    }
}

/// Compute the case's aggregates from the graph. Case B additionally checks
/// the chain condition on multiplicities (`nu_i` at least the sum over
/// incoming arrows), which the curve-only resolution satisfies.
pub fn aggregates(g: &ResolutionGraph, case: GraphCase) -> Result<Aggregates, Error> {
    let p = path_counts(g)?;
    let l = g.point_phase;
    match case {
        GraphCase::A => {
            let flags = g
                .in_e
                .as_ref()
                .ok_or_else(|| Error::input("case A needs the in_e membership flags"))?;
            let divisor = side_aggregates(&p, flags, Some(l), "the exceptional divisor")?;
            let sigma0 = p[..l].iter().sum();
            let sigma1 = p[l..].iter().sum();
            Ok(Aggregates::A {
                p,
                sigma0,
                sigma1,
                divisor,
            })
        }
        GraphCase::B => {
            let flags = g
                .in_e
                .as_ref()
                .ok_or_else(|| Error::input("case B needs the in_e membership flags"))?;
            // Multiplicity ordering along a curve-only resolution.
            let mut incoming = vec![Rat::zero(); g.node_count + 1];
            for &(j, i) in &g.edges {
                incoming[i] = &incoming[i] + &g.nu[j - 1];
            }
            for (idx, nu) in g.nu.iter().enumerate() {
                let i = idx + 1;
                if nu < &incoming[i] {
                    return Err(Error::input(format!(
                        "multiplicity ordering fails at node {i}: nu = {nu} below the \
                         incoming sum {}",
                        incoming[i]
                    )));
                }
            }
            let divisor = side_aggregates(&p, flags, None, "the exceptional divisor")?;
            let sigma: BigInt = p.iter().sum();
            let sum_p_sq: BigInt = p.iter().map(|x| x * x).sum();
            Ok(Aggregates::B {
                p,
                sigma,
                sum_p_sq,
                divisor,
            })
        }
        GraphCase::C => {
            let plus_flags = g
                .in_e_plus
                .as_ref()
                .ok_or_else(|| Error::input("case C needs the in_e_plus membership flags"))?;
            let minus_flags = g
                .in_e_minus
                .as_ref()
                .ok_or_else(|| Error::input("case C needs the in_e_minus membership flags"))?;
            let plus = side_aggregates(&p, plus_flags, Some(l), "the top divisor")?;
            let minus = side_aggregates(&p, minus_flags, Some(l), "the previous divisor")?;
            let fiber = match &g.in_e {
                Some(flags) => Some(side_aggregates(&p, flags, Some(l), "the fiber transform")?),
                None => None,
            };
            let sigma0 = p[..l].iter().sum();
            let sigma1 = p[l..].iter().sum();
            Ok(Aggregates::C {
                p,
                sigma0,
                sigma1,
                plus,
                minus,
                fiber,
            })
        }
    }
}

fn big_to_rat(b: &BigInt) -> Rat {
    Rat::from_bigint(b.clone())
}

/// Multiplicity of the fiber along the valuation, by case.
///
/// Covered regimes: non-special with staircase length at least 2 gives
/// `d_F * eps` (cases A, B) or `d_F * (eps_+ + eps_-)` (case C); special
/// needs length at least 3 for the same formulas; the special length-2
/// singular-center sub-case gives `2 eps_+ + eps_- + eps_F`. Anything else
/// is outside the covered regime and is rejected.
pub fn valuation_of_fiber(tag: &CaseTag, agg: &Aggregates, d_f: u32) -> Result<Rat, Error> {
    let expected_d_f = if tag.special { 2 } else { 1 };
    if d_f != expected_d_f {
        return Err(Error::input(format!(
            "d_F = {d_f} does not match the {} case",
            if tag.special { "special" } else { "non-special" }
        )));
    }
    if tag.singular_center {
        if !(tag.special && tag.case == GraphCase::C && tag.m == 2) {
            return Err(Error::unsupported(
                "the singular-center formula applies to the special case C with a \
                 length-2 staircase",
            ));
        }
        let Aggregates::C {
            plus,
            minus,
            fiber: Some(fiber),
            ..
        } = agg
        else {
            return Err(Error::input(
                "the singular-center sub-case needs case C aggregates with fiber flags",
            ));
        };
        let two = Rat::from_int(2);
        return Ok(&(&(&two * &big_to_rat(&plus.eps)) + &big_to_rat(&minus.eps))
            + &big_to_rat(&fiber.eps));
    }
    let min_m = if tag.special { 3 } else { 2 };
    if tag.m < min_m {
        return Err(Error::unsupported(format!(
            "the fiber-multiplicity formula for the {} case needs a staircase of \
             length at least {min_m}, got {}",
            if tag.special { "special" } else { "non-special" },
            tag.m
        )));
    }
    let d_f = Rat::from(d_f);
    match (tag.case, agg) {
        (GraphCase::A, Aggregates::A { divisor, .. })
        | (GraphCase::B, Aggregates::B { divisor, .. }) => Ok(&d_f * &big_to_rat(&divisor.eps)),
        (GraphCase::C, Aggregates::C { plus, minus, .. }) => {
            Ok(&d_f * &(&big_to_rat(&plus.eps) + &big_to_rat(&minus.eps)))
        }
        _ => Err(Error::input("aggregates do not match the case tag")),
    }
}

/// The multiplicity/discrepancy identity tying the graph data to the pencil
/// invariant `e`, either verified exactly or solved for `e`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NfIdentity {
    pub case: GraphCase,
    /// `sum p_i nu_i`.
    pub lhs: Rat,
    /// Everything on the right except `e`.
    pub rhs_without_e: Rat,
    pub e: Rat,
    /// `e > 0` marks a maximal singularity.
    pub maximal: bool,
}

/// Evaluate the identity `sum p_i nu_i = (divisor sums) + n sum p_i delta_i + e`.
/// With `e` supplied the identity is verified exactly (a mismatch reports
/// the residual); with `e = None` it is solved.
pub fn nf_identity(
    g: &ResolutionGraph,
    agg: &Aggregates,
    n: &Rat,
    lambdas: &[Rat],
    e: Option<&Rat>,
) -> Result<NfIdentity, Error> {
    g.validate()?;
    if lambdas.is_empty() {
        return Err(Error::input("the staircase has length at least 1"));
    }
    let mut prev = n.clone();
    for (i, lam) in lambdas.iter().enumerate() {
        if lam.is_negative() || lam > &prev {
            return Err(Error::input(format!(
                "multiplicities must satisfy n >= lambda_1 >= ... >= 0; lambda_{} = {lam}",
                i + 1
            )));
        }
        prev = lam.clone();
    }
    let p = agg.path_counts();
    if p.len() != g.node_count {
        return Err(Error::input("aggregates belong to a different graph"));
    }
    let lhs: Rat = p
        .iter()
        .zip(&g.nu)
        .map(|(pi, nu)| &big_to_rat(pi) * nu)
        .sum();
    let delta_sum: Rat = p
        .iter()
        .zip(&g.delta)
        .map(|(pi, d)| &big_to_rat(pi) * &Rat::from_int(*d))
        .sum();
    let full_gap: Rat = lambdas.iter().map(|lam| n - lam).sum();
    let (case, divisor_part) = match agg {
        Aggregates::A { divisor, .. } => (GraphCase::A, &big_to_rat(&divisor.eps) * &full_gap),
        Aggregates::B { divisor, .. } => (GraphCase::B, &big_to_rat(&divisor.eps) * &full_gap),
        Aggregates::C { plus, minus, .. } => {
            let short_gap: Rat = lambdas[..lambdas.len() - 1]
                .iter()
                .map(|lam| n - lam)
                .sum();
            (
                GraphCase::C,
                &(&big_to_rat(&plus.eps) * &full_gap) + &(&big_to_rat(&minus.eps) * &short_gap),
            )
        }
    };
    let rhs_without_e = &divisor_part + &(n * &delta_sum);
    let e = match e {
        Some(e) => {
            let residual = &lhs - &(&rhs_without_e + e);
            if !residual.is_zero() {
                return Err(Error::CertificateInvalid(format!(
                    "multiplicity/discrepancy identity fails: residual {residual}"
                )));
            }
            e.clone()
        }
        None => &lhs - &rhs_without_e,
    };
    let maximal = e.is_positive();
    Ok(NfIdentity {
        case,
        lhs,
        rhs_without_e,
        e,
        maximal,
    })
}
