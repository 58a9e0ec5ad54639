//! Fiber-local arithmetic: choosing a good line through the center point.
//!
//! The center of the singularity under study sits on a cubic surface and the
//! vertical part of the self-intersection cycle obeys two bounds expressed
//! through the threshold `T = n*e/nu(F)`: its multiplicity at the center is
//! at least `4T` and its degree is below `6T`. Depending on how many lines of
//! the cubic pass through the center (0, 1, 2, 3, or 6), elementary
//! arithmetic on these bounds selects a line `L` and a residual cycle `C`
//! with `(C.L) < 4T`. Each selector returns a certificate carrying every
//! substituted inequality.

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::rat::Rat;
use crate::report::{verify_ineqs, CheckedIneq, Rel};

/// The threshold `T = n*e/nu(F)`; the case bounds are `4T` and `6T`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiberThreshold(Rat);

impl FiberThreshold {
    pub fn new(t: Rat) -> Result<Self, Error> {
        if !t.is_positive() {
            return Err(Error::input(format!("threshold must be positive, got {t}")));
        }
        Ok(FiberThreshold(t))
    }

    pub fn from_parts(n: &Rat, e: &Rat, nu_f: &Rat) -> Result<Self, Error> {
        if !n.is_positive() || !e.is_positive() || !nu_f.is_positive() {
            return Err(Error::input(format!(
                "threshold parts must be positive, got n = {n}, e = {e}, nu(F) = {nu_f}"
            )));
        }
        Ok(FiberThreshold(&(n * e) / nu_f))
    }

    pub fn value(&self) -> &Rat {
        &self.0
    }

    pub fn four(&self) -> Rat {
        &Rat::from_int(4) * &self.0
    }

    pub fn six(&self) -> Rat {
        &Rat::from_int(6) * &self.0
    }
}

fn require_nonnegative(name: &str, v: &Rat) -> Result<(), Error> {
    if v.is_negative() {
        return Err(Error::input(format!("{name} must be nonnegative, got {v}")));
    }
    Ok(())
}

/// Certificate that a configuration with no line through the center is
/// impossible: every curve would then satisfy `mult <= (2/3) deg` via the
/// irreducible tangent section, pushing the vertical multiplicity below `4T`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NoLineCertificate {
    pub d: Rat,
    pub t: Rat,
    pub checks: Vec<CheckedIneq>,
}

impl NoLineCertificate {
    pub fn verify(&self) -> Result<(), Error> {
        let t = FiberThreshold::new(self.t.clone())?;
        let rebuilt = no_line_contradiction(&self.d, &t)?;
        if &rebuilt != self {
            return Err(Error::CertificateInvalid(
                "no-line certificate does not match its inputs".into(),
            ));
        }
        verify_ineqs(&self.checks)
    }
}

/// Certify that a line must exist: under the supermaximal degree bound
/// `d < 6T`, no line would force `mult <= (2/3) d < 4T`, contradicting the
/// multiplicity lower bound `>= 4T`.
pub fn no_line_contradiction(d: &Rat, t: &FiberThreshold) -> Result<NoLineCertificate, Error> {
    require_nonnegative("deg Z^v", d)?;
    let supermax = CheckedIneq::require(
        "supermaximal degree bound d < 6T",
        d.clone(),
        Rel::Lt,
        t.six(),
    )?;
    let mult_bound = &Rat::new(2, 3) * d;
    let chain = CheckedIneq::derive(
        "(2/3) d < 4T",
        mult_bound.clone(),
        Rel::Lt,
        t.four(),
    )?;
    Ok(NoLineCertificate {
        d: d.clone(),
        t: t.value().clone(),
        checks: vec![supermax, chain],
    })
}

/// Certificate for the single-line case, selecting the unique line.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OneLineCertificate {
    pub k: Rat,
    pub deg_c: Rat,
    pub t: Rat,
    pub chosen_index: usize,
    pub hypotheses: Vec<CheckedIneq>,
    pub conclusion: CheckedIneq,
}

impl OneLineCertificate {
    pub fn verify(&self) -> Result<(), Error> {
        let t = FiberThreshold::new(self.t.clone())?;
        let rebuilt = one_line_bound(&self.k, &self.deg_c, &t)?;
        if &rebuilt != self {
            return Err(Error::CertificateInvalid(
                "one-line certificate does not match its inputs".into(),
            ));
        }
        verify_ineqs(&self.hypotheses)?;
        verify_ineqs(std::slice::from_ref(&self.conclusion))
    }
}

/// Single line through the center: `Z^v = C + kL` with
/// `k + deg(C)/2 >= 4T` and `k + deg(C) < 6T` force `deg C < 4T`, and
/// `(C.L) <= deg C` finishes the selection.
pub fn one_line_bound(
    k: &Rat,
    deg_c: &Rat,
    t: &FiberThreshold,
) -> Result<OneLineCertificate, Error> {
    require_nonnegative("k", k)?;
    require_nonnegative("deg C", deg_c)?;
    let half = Rat::new(1, 2);
    let h1 = CheckedIneq::require(
        "k + deg(C)/2 >= 4T",
        k + &(&half * deg_c),
        Rel::Ge,
        t.four(),
    )?;
    let h2 = CheckedIneq::require("k + deg(C) < 6T", k + deg_c, Rel::Lt, t.six())?;
    let conclusion = CheckedIneq::derive("deg C < 4T", deg_c.clone(), Rel::Lt, t.four())?;
    Ok(OneLineCertificate {
        k: k.clone(),
        deg_c: deg_c.clone(),
        t: t.value().clone(),
        chosen_index: 1,
        hypotheses: vec![h1, h2],
        conclusion,
    })
}

/// Data for the two-lines case: `Z^v = Q + k1 L1 + k2 L2 + k3 L3` where
/// `L1, L2` pass through the center and `L3` completes the tangent section.
/// When the corner `L1 ∩ L3` is the singular point of the fiber, only
/// `d1 + d2 <= d` is available and `d_i` carries two entries.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwoLinesData {
    pub k: [Rat; 3],
    pub d: Rat,
    pub d_i: Vec<Rat>,
    pub m: Rat,
    #[serde(default)]
    pub singular_corner: bool,
}

/// Data for the three-lines case: all of `L1, L2, L3` pass through the
/// center.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThreeLinesData {
    pub k: [Rat; 3],
    pub d: Rat,
    pub d_i: [Rat; 3],
    pub m: Rat,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwoLinesCertificate {
    pub data: TwoLinesData,
    pub t: Rat,
    pub chosen_index: usize,
    pub hypotheses: Vec<CheckedIneq>,
    pub conclusion: CheckedIneq,
}

impl TwoLinesCertificate {
    pub fn verify(&self) -> Result<(), Error> {
        let t = FiberThreshold::new(self.t.clone())?;
        let rebuilt = two_lines_select(&self.data, &t)?;
        if &rebuilt != self {
            return Err(Error::CertificateInvalid(
                "two-lines certificate does not match its inputs".into(),
            ));
        }
        verify_ineqs(&self.hypotheses)?;
        verify_ineqs(std::slice::from_ref(&self.conclusion))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThreeLinesCertificate {
    pub data: ThreeLinesData,
    pub t: Rat,
    pub chosen_index: usize,
    pub hypotheses: Vec<CheckedIneq>,
    pub conclusion: CheckedIneq,
}

impl ThreeLinesCertificate {
    pub fn verify(&self) -> Result<(), Error> {
        let t = FiberThreshold::new(self.t.clone())?;
        let rebuilt = three_lines_select(&self.data, &t)?;
        if &rebuilt != self {
            return Err(Error::CertificateInvalid(
                "three-lines certificate does not match its inputs".into(),
            ));
        }
        verify_ineqs(&self.hypotheses)?;
        verify_ineqs(std::slice::from_ref(&self.conclusion))
    }
}

/// Two lines through the center: pick `i` in {1, 2} with
/// `k_j + k_3 + d_i < 4T`. Such an index always exists: if both failed,
/// adding the multiplicity hypothesis would contradict the `6T` degree
/// bound. Smallest valid index wins.
pub fn two_lines_select(
    data: &TwoLinesData,
    t: &FiberThreshold,
) -> Result<TwoLinesCertificate, Error> {
    for (name, v) in [
        ("k1", &data.k[0]),
        ("k2", &data.k[1]),
        ("k3", &data.k[2]),
        ("d", &data.d),
        ("m", &data.m),
    ] {
        require_nonnegative(name, v)?;
    }
    let expected_len = if data.singular_corner { 2 } else { 3 };
    if data.d_i.len() != expected_len {
        return Err(Error::input(format!(
            "expected {expected_len} intersection numbers d_i, got {}",
            data.d_i.len()
        )));
    }
    for (i, v) in data.d_i.iter().enumerate() {
        require_nonnegative(&format!("d_{}", i + 1), v)?;
    }

    let mut hypotheses = Vec::new();
    hypotheses.push(CheckedIneq::require(
        "2m <= d",
        &Rat::from_int(2) * &data.m,
        Rel::Le,
        data.d.clone(),
    )?);
    let k_sum = &(&data.k[0] + &data.k[1]) + &data.k[2];
    hypotheses.push(CheckedIneq::require(
        "k1 + k2 + k3 + d < 6T",
        &k_sum + &data.d,
        Rel::Lt,
        t.six(),
    )?);
    let d_i_sum: Rat = data.d_i.iter().cloned().sum();
    if data.singular_corner {
        hypotheses.push(CheckedIneq::require(
            "d1 + d2 <= d (singular corner)",
            d_i_sum,
            Rel::Le,
            data.d.clone(),
        )?);
    } else {
        hypotheses.push(CheckedIneq::require(
            "d1 + d2 + d3 = d",
            d_i_sum,
            Rel::Eq,
            data.d.clone(),
        )?);
    }
    hypotheses.push(CheckedIneq::require(
        "k1 + k2 + m >= 4T",
        &(&data.k[0] + &data.k[1]) + &data.m,
        Rel::Ge,
        t.four(),
    )?);

    for i in 0..2usize {
        let j = 1 - i;
        let lhs = &(&data.k[j] + &data.k[2]) + &data.d_i[i];
        if lhs < t.four() {
            let conclusion = CheckedIneq {
                name: format!("k{} + k3 + d{} < 4T", j + 1, i + 1),
                lhs,
                rel: Rel::Lt,
                rhs: t.four(),
            };
            return Ok(TwoLinesCertificate {
                data: data.clone(),
                t: t.value().clone(),
                chosen_index: i + 1,
                hypotheses,
                conclusion,
            });
        }
    }
    Err(Error::Internal(
        "two-lines selection has no valid index; the hypotheses are mutually inconsistent"
            .into(),
    ))
}

/// Three lines through the center: pick `i` in {1, 2, 3} with
/// `k_j + k_l + d_i < 4T`; existence follows from the degree bound as in the
/// two-lines case.
pub fn three_lines_select(
    data: &ThreeLinesData,
    t: &FiberThreshold,
) -> Result<ThreeLinesCertificate, Error> {
    for (name, v) in [
        ("k1", &data.k[0]),
        ("k2", &data.k[1]),
        ("k3", &data.k[2]),
        ("d", &data.d),
        ("m", &data.m),
        ("d_1", &data.d_i[0]),
        ("d_2", &data.d_i[1]),
        ("d_3", &data.d_i[2]),
    ] {
        require_nonnegative(name, v)?;
    }

    let mut hypotheses = Vec::new();
    hypotheses.push(CheckedIneq::require(
        "3m <= d",
        &Rat::from_int(3) * &data.m,
        Rel::Le,
        data.d.clone(),
    )?);
    let k_sum = &(&data.k[0] + &data.k[1]) + &data.k[2];
    hypotheses.push(CheckedIneq::require(
        "k1 + k2 + k3 + d < 6T",
        &k_sum + &data.d,
        Rel::Lt,
        t.six(),
    )?);
    let d_i_sum = &(&data.d_i[0] + &data.d_i[1]) + &data.d_i[2];
    hypotheses.push(CheckedIneq::require(
        "d1 + d2 + d3 = d",
        d_i_sum,
        Rel::Eq,
        data.d.clone(),
    )?);
    hypotheses.push(CheckedIneq::require(
        "k1 + k2 + k3 + m >= 4T",
        &k_sum + &data.m,
        Rel::Ge,
        t.four(),
    )?);

    for i in 0..3usize {
        let others: Vec<usize> = (0..3).filter(|&x| x != i).collect();
        let lhs = &(&data.k[others[0]] + &data.k[others[1]]) + &data.d_i[i];
        if lhs < t.four() {
            let conclusion = CheckedIneq {
                name: format!(
                    "k{} + k{} + d{} < 4T",
                    others[0] + 1,
                    others[1] + 1,
                    i + 1
                ),
                lhs,
                rel: Rel::Lt,
                rhs: t.four(),
            };
            return Ok(ThreeLinesCertificate {
                data: data.clone(),
                t: t.value().clone(),
                chosen_index: i + 1,
                hypotheses,
                conclusion,
            });
        }
    }
    Err(Error::Internal(
        "three-lines selection has no valid index; the hypotheses are mutually inconsistent"
            .into(),
    ))
}

/// Data for the six-lines case, where the center is the double point of the
/// fiber. `Z^v = k L1 + R + Q`: `L1` is a chosen line whose first
/// infinitely-near center avoids the other lines (an asserted input, not
/// computed), `R` collects the remaining multiple lines, and `Q` contains no
/// line through the center. `p` holds the resolution path counts, `m_count`
/// and `n_count` the number of leading centers on the successive transforms
/// of `L1` and of the fiber, and `q[i]` the multiplicity of the transform of
/// `Q` at the i-th center.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SixLinesData {
    pub p: Vec<i64>,
    pub m_count: usize,
    pub n_count: usize,
    pub k: Rat,
    pub deg_r: Rat,
    pub deg_q: Rat,
    pub q: Vec<Rat>,
    pub center_avoids_other_lines: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SixLinesCertificate {
    pub data: SixLinesData,
    pub n: Rat,
    pub e: Rat,
    pub nu_f: Rat,
    pub hypotheses: Vec<CheckedIneq>,
    pub derived: Vec<CheckedIneq>,
    /// `k > 2ne/nu(F)`.
    pub conclusion: CheckedIneq,
}

impl SixLinesCertificate {
    pub fn verify(&self) -> Result<(), Error> {
        let rebuilt = six_lines_bound(&self.data, &self.n, &self.e, &self.nu_f)?;
        if &rebuilt != self {
            return Err(Error::CertificateInvalid(
                "six-lines certificate does not match its inputs".into(),
            ));
        }
        verify_ineqs(&self.hypotheses)?;
        verify_ineqs(&self.derived)?;
        verify_ineqs(std::slice::from_ref(&self.conclusion))
    }
}

/// Lower bound for the multiplicity of the chosen line in the six-lines
/// case: from the path-count inequality that blocks the direct contradiction
/// and the weighted degree bound, conclude `k > 2ne/nu(F)`.
pub fn six_lines_bound(
    data: &SixLinesData,
    n: &Rat,
    e: &Rat,
    nu_f: &Rat,
) -> Result<SixLinesCertificate, Error> {
    if !data.center_avoids_other_lines {
        return Err(Error::domain(
            "the six-lines selection needs a line whose first infinitely-near center \
             avoids the transforms of the other five; choose such a line (one always \
             exists) and assert it in the input",
        ));
    }
    if !(n.is_positive() && e.is_positive() && nu_f.is_positive()) {
        return Err(Error::input(format!(
            "n, e, nu(F) must be positive, got {n}, {e}, {nu_f}"
        )));
    }
    if data.m_count < 1 || data.m_count > data.n_count || data.n_count > data.p.len() {
        return Err(Error::input(format!(
            "need 1 <= M <= N <= len(p), got M = {}, N = {}, len(p) = {}",
            data.m_count,
            data.n_count,
            data.p.len()
        )));
    }
    if data.q.len() != data.n_count {
        return Err(Error::input(format!(
            "expected {} multiplicities q_i, got {}",
            data.n_count,
            data.q.len()
        )));
    }
    if data.p[0] < 1 {
        return Err(Error::input("leading path count p_1 must be >= 1"));
    }
    if data.p.iter().any(|&p| p < 0) {
        return Err(Error::input("path counts must be nonnegative"));
    }
    for (name, v) in [("k", &data.k), ("deg R", &data.deg_r), ("deg Q", &data.deg_q)] {
        require_nonnegative(name, v)?;
    }
    for (i, v) in data.q.iter().enumerate() {
        require_nonnegative(&format!("q_{}", i + 1), v)?;
    }
    if data.q.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::input("q_i must be non-increasing"));
    }

    let q_sum: Rat = data.q.iter().cloned().sum();
    let mut hypotheses = Vec::new();
    hypotheses.push(CheckedIneq::require(
        "q1 + ... + qN <= deg Q",
        q_sum,
        Rel::Le,
        data.deg_q.clone(),
    )?);
    if data.n_count >= 2 {
        hypotheses.push(CheckedIneq::require(
            "2 q2 <= deg Q",
            &Rat::from_int(2) * &data.q[1],
            Rel::Le,
            data.deg_q.clone(),
        )?);
    }

    let p_rat: Vec<Rat> = data.p.iter().map(|&p| Rat::from_int(p)).collect();
    let p_m: Rat = p_rat[..data.m_count].iter().cloned().sum();
    // Weighted multiplicity of the fiber along the valuation: the center is
    // a double point, so the fiber has multiplicity 2 at the first blow-up.
    let weight: Rat = &(&Rat::from_int(2) * &p_rat[0])
        + &p_rat[1..data.n_count].iter().cloned().sum::<Rat>();
    let four_ne = &Rat::from_int(4) * &(n * e);
    let six_ne = &Rat::from_int(6) * &(n * e);

    let path_sum: Rat = &(&p_m * &data.k)
        + &(&(&p_rat[0] * &data.deg_r)
            + &p_rat[..data.n_count]
                .iter()
                .zip(&data.q)
                .map(|(p, q)| p * q)
                .sum::<Rat>());
    hypotheses.push(CheckedIneq::require(
        "(sum_{i<=M} p_i) k + p1 deg R + sum_{i<=N} p_i q_i >= 4ne",
        path_sum,
        Rel::Ge,
        four_ne.clone(),
    )?);
    hypotheses.push(CheckedIneq::require(
        "(2 p1 + sum_{2<=i<=N} p_i)(k + deg R + deg Q) < 6ne",
        &weight * &(&(&data.k + &data.deg_r) + &data.deg_q),
        Rel::Lt,
        six_ne,
    )?);
    hypotheses.push(CheckedIneq::require(
        "nu(F) >= 2 p1 + sum_{2<=i<=N} p_i",
        nu_f.clone(),
        Rel::Ge,
        weight.clone(),
    )?);

    let mut derived = Vec::new();
    // Replacing the q_i and deg R terms by half the weighted total degree
    // only increases the left side (q is non-increasing and 2 q2 <= deg Q).
    let half_weight = &Rat::new(1, 2) * &weight;
    derived.push(CheckedIneq::derive(
        "(sum_{i<=M} p_i) k + (p1 + sum/2)(deg R + deg Q) >= 4ne",
        &(&p_m * &data.k) + &(&half_weight * &(&data.deg_r + &data.deg_q)),
        Rel::Ge,
        four_ne,
    )?);
    derived.push(CheckedIneq::derive(
        "ne < (sum_{i<=M} p_i - weight/2) k",
        n * e,
        Rel::Lt,
        &(&p_m - &half_weight) * &data.k,
    )?);
    let conclusion = CheckedIneq::derive(
        "k > 2ne/nu(F)",
        data.k.clone(),
        Rel::Gt,
        &(&Rat::from_int(2) * &(n * e)) / nu_f,
    )?;

    Ok(SixLinesCertificate {
        data: data.clone(),
        n: n.clone(),
        e: e.clone(),
        nu_f: nu_f.clone(),
        hypotheses,
        derived,
        conclusion,
    })
}

/// The per-case input for the full selection pipeline.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "case", rename_all = "snake_case")]
pub enum LineCaseData {
    NoLine { d: Rat },
    OneLine { k: Rat, deg_c: Rat },
    TwoLines(TwoLinesData),
    ThreeLines(ThreeLinesData),
    SixLines(SixLinesData),
}

/// One summand of the residual cycle `C`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleTerm {
    pub label: String,
    pub mult: Rat,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LineCertificate {
    OneLine(OneLineCertificate),
    TwoLines(TwoLinesCertificate),
    ThreeLines(ThreeLinesCertificate),
    SixLines(SixLinesCertificate),
}

impl LineCertificate {
    pub fn verify(&self) -> Result<(), Error> {
        match self {
            LineCertificate::OneLine(c) => c.verify(),
            LineCertificate::TwoLines(c) => c.verify(),
            LineCertificate::ThreeLines(c) => c.verify(),
            LineCertificate::SixLines(c) => c.verify(),
        }
    }
}

/// Pipeline output: the chosen line, the residual cycle, and the certified
/// bound on their intersection number.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelectedLine {
    pub line_index: usize,
    pub cycle: Vec<CycleTerm>,
    /// An upper bound for `(C.L)` together with the strict `4T` comparison.
    pub intersection_bound: CheckedIneq,
    pub certificate: LineCertificate,
}

impl SelectedLine {
    pub fn verify(&self) -> Result<(), Error> {
        self.certificate.verify()?;
        verify_ineqs(std::slice::from_ref(&self.intersection_bound))
    }
}

/// Dispatch a case to its selector and assemble the selection: a line `L`, a
/// cycle `C` not containing it, and a certified `(C.L) < 4ne/nu(F)`.
///
/// A `NoLine` input is rejected: such a configuration contradicts the
/// multiplicity bound (see [`no_line_contradiction`] for the certificate).
pub fn select_line(
    case: &LineCaseData,
    n: &Rat,
    e: &Rat,
    nu_f: &Rat,
) -> Result<SelectedLine, Error> {
    let t = FiberThreshold::from_parts(n, e, nu_f)?;
    match case {
        LineCaseData::NoLine { d } => {
            let cert = no_line_contradiction(d, &t)?;
            let summary = cert
                .checks
                .iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>()
                .join("; ");
            Err(Error::domain(format!(
                "no line passes through the center, but then every curve obeys \
                 mult <= (2/3) deg and the vertical multiplicity drops below 4T, \
                 which is impossible ({summary})"
            )))
        }
        LineCaseData::OneLine { k, deg_c } => {
            let cert = one_line_bound(k, deg_c, &t)?;
            let intersection_bound = CheckedIneq::derive(
                "(C.L) <= deg C < 4T",
                deg_c.clone(),
                Rel::Lt,
                t.four(),
            )?;
            Ok(SelectedLine {
                line_index: 1,
                cycle: vec![CycleTerm {
                    label: "C".into(),
                    mult: Rat::one(),
                }],
                intersection_bound,
                certificate: LineCertificate::OneLine(cert),
            })
        }
        LineCaseData::TwoLines(data) => {
            let cert = two_lines_select(data, &t)?;
            let i = cert.chosen_index;
            let j = 3 - i; // the other of {1, 2}
            let cycle = vec![
                CycleTerm {
                    label: "Q".into(),
                    mult: Rat::one(),
                },
                CycleTerm {
                    label: format!("L{j}"),
                    mult: data.k[j - 1].clone(),
                },
                CycleTerm {
                    label: "L3".into(),
                    mult: data.k[2].clone(),
                },
            ];
            let intersection_bound = cert.conclusion.clone();
            Ok(SelectedLine {
                line_index: i,
                cycle,
                intersection_bound,
                certificate: LineCertificate::TwoLines(cert),
            })
        }
        LineCaseData::ThreeLines(data) => {
            let cert = three_lines_select(data, &t)?;
            let i = cert.chosen_index;
            let others: Vec<usize> = (1..=3).filter(|&x| x != i).collect();
            let mut cycle = vec![CycleTerm {
                label: "Q".into(),
                mult: Rat::one(),
            }];
            for &j in &others {
                cycle.push(CycleTerm {
                    label: format!("L{j}"),
                    mult: data.k[j - 1].clone(),
                });
            }
            let intersection_bound = cert.conclusion.clone();
            Ok(SelectedLine {
                line_index: i,
                cycle,
                intersection_bound,
                certificate: LineCertificate::ThreeLines(cert),
            })
        }
        LineCaseData::SixLines(data) => {
            let cert = six_lines_bound(data, n, e, nu_f)?;
            // The supermaximal bound with the true fiber multiplicity, plus
            // k > 2T, squeezes deg(R + Q) under 4T.
            CheckedIneq::require(
                "nu(F) (k + deg R + deg Q) < 6ne",
                nu_f * &(&(&data.k + &data.deg_r) + &data.deg_q),
                Rel::Lt,
                &Rat::from_int(6) * &(n * e),
            )?;
            let deg_c = &data.deg_r + &data.deg_q;
            let intersection_bound = CheckedIneq::derive(
                "(C.L1) <= deg C = deg R + deg Q < 4T",
                deg_c,
                Rel::Lt,
                t.four(),
            )?;
            Ok(SelectedLine {
                line_index: 1,
                cycle: vec![
                    CycleTerm {
                        label: "R".into(),
                        mult: Rat::one(),
                    },
                    CycleTerm {
                        label: "Q".into(),
                        mult: Rat::one(),
                    },
                ],
                intersection_bound,
                certificate: LineCertificate::SixLines(cert),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{int, rat};

    fn t(v: i64) -> FiberThreshold {
        FiberThreshold::new(int(v)).unwrap()
    }

    #[test]
    fn no_line_examples() {
        let cert = no_line_contradiction(&int(5), &t(1)).unwrap();
        assert_eq!(cert.checks[1].lhs, rat(10, 3));
        assert!(cert.verify().is_ok());

        let empty = no_line_contradiction(&int(0), &t(1)).unwrap();
        assert_eq!(empty.checks[1].lhs, int(0));

        assert!(matches!(
            no_line_contradiction(&int(6), &t(1)),
            Err(Error::Precondition { .. })
        ));
    }

    #[test]
    fn one_line_examples() {
        let cert = one_line_bound(&int(3), &int(2), &t(1)).unwrap();
        assert_eq!(cert.conclusion.lhs, int(2));
        assert_eq!(cert.conclusion.rhs, int(4));
        assert!(cert.verify().is_ok());

        let empty = one_line_bound(&int(4), &int(0), &t(1)).unwrap();
        assert_eq!(empty.conclusion.lhs, int(0));

        assert!(matches!(
            one_line_bound(&int(0), &int(8), &t(1)),
            Err(Error::Precondition { .. })
        ));
    }

    #[test]
    fn two_lines_examples() {
        let data = TwoLinesData {
            k: [int(2), int(1), int(0)],
            d: int(2),
            d_i: vec![int(1), int(1), int(0)],
            m: int(1),
            singular_corner: false,
        };
        let cert = two_lines_select(&data, &t(1)).unwrap();
        assert_eq!(cert.chosen_index, 1);
        assert_eq!(cert.conclusion.lhs, int(2)); // k2 + k3 + d1 = 1 + 0 + 1
        assert!(cert.verify().is_ok());

        // k1 + k2 + m >= 4T fails.
        let degenerate = TwoLinesData {
            k: [int(0), int(0), int(0)],
            d: int(0),
            d_i: vec![int(0), int(0), int(0)],
            m: int(0),
            singular_corner: false,
        };
        assert!(matches!(
            two_lines_select(&degenerate, &t(1)),
            Err(Error::Precondition { .. })
        ));

        let data = TwoLinesData {
            k: [int(2), int(2), int(0)],
            d: int(1),
            d_i: vec![int(1), int(0), int(0)],
            m: int(0),
            singular_corner: false,
        };
        let cert = two_lines_select(&data, &t(1)).unwrap();
        // Both indices qualify (i = 2 gives k1 + k3 + d2 = 2 < 4); the
        // smallest valid index wins.
        assert_eq!(cert.chosen_index, 1);
        assert_eq!(cert.conclusion.lhs, int(3));
    }

    #[test]
    fn two_lines_singular_corner_uses_inequality() {
        let data = TwoLinesData {
            k: [int(2), int(1), int(0)],
            d: int(2),
            d_i: vec![int(1), int(1)],
            m: int(1),
            singular_corner: true,
        };
        let cert = two_lines_select(&data, &t(1)).unwrap();
        assert!(cert.hypotheses.iter().any(|h| h.name.contains("singular")));
        assert!(cert.verify().is_ok());
    }

    #[test]
    fn three_lines_examples() {
        let data = ThreeLinesData {
            k: [int(2), int(1), int(1)],
            d: int(0),
            d_i: [int(0), int(0), int(0)],
            m: int(0),
        };
        let cert = three_lines_select(&data, &t(1)).unwrap();
        // Smallest valid index: i = 1 gives k2 + k3 + d1 = 2 < 4.
        assert_eq!(cert.chosen_index, 1);
        assert!(cert.verify().is_ok());

        let bad = ThreeLinesData {
            k: [int(4), int(0), int(0)],
            d: int(3),
            d_i: [int(3), int(0), int(0)],
            m: int(1),
        };
        assert!(matches!(
            three_lines_select(&bad, &t(1)),
            Err(Error::Precondition { .. })
        ));

        let data = ThreeLinesData {
            k: [int(3), int(3), int(1)],
            d: int(3),
            d_i: [int(1), int(1), int(1)],
            m: int(1),
        };
        let cert = three_lines_select(&data, &t(2)).unwrap();
        assert_eq!(cert.chosen_index, 1); // 3 + 1 + 1 = 5 < 8
        assert_eq!(cert.conclusion.lhs, int(5));
    }

    fn six_data(p: Vec<i64>, k: i64, deg_r: i64) -> SixLinesData {
        let n = p.len();
        SixLinesData {
            p,
            m_count: 2,
            n_count: n,
            k: int(k),
            deg_r: int(deg_r),
            deg_q: int(0),
            q: vec![int(0); n],
            center_avoids_other_lines: true,
        }
    }

    #[test]
    fn six_lines_hypothesis_sensitivity() {
        // (p1, p2) = (1, 1), k = 3: path sum 6 >= 4 holds, but the weighted
        // degree (2+1)*3 = 9 < 6 fails.
        let r = six_lines_bound(&six_data(vec![1, 1], 3, 0), &int(1), &int(1), &int(2));
        assert!(matches!(r, Err(Error::Precondition { .. })));

        // k = 2: path sum 4 >= 4 holds, (2+1)*2 = 6 < 6 fails.
        let r = six_lines_bound(&six_data(vec![1, 1], 2, 0), &int(1), &int(1), &int(2));
        assert!(matches!(r, Err(Error::Precondition { .. })));

        // (p1, p2) = (2, 1), k = 3, deg R = 1, n = e = 2: path sum
        // 3*3 + 2*1 = 11 >= 16 fails.
        let r = six_lines_bound(&six_data(vec![2, 1], 3, 1), &int(2), &int(2), &int(2));
        assert!(matches!(r, Err(Error::Precondition { .. })));

        // Same with e = 1: 11 >= 8 holds, (4+1)*4 = 20 < 12 fails.
        let r = six_lines_bound(&six_data(vec![2, 1], 3, 1), &int(2), &int(1), &int(2));
        match r {
            Err(Error::Precondition { name, .. }) => assert!(name.contains("6ne")),
            other => panic!("expected the 6ne hypothesis to fail, got {other:?}"),
        }
    }

    #[test]
    fn six_lines_feasible_instance_found_by_sweep() {
        // Exhaustive small-integer sweep locating fully feasible instances,
        // on which the certificate chain must close. Length-2 path vectors
        // with p1 >= p2 cannot satisfy both displayed inequalities (the
        // weighted ratio stays at most 2/3), so chains of length 3 appear.
        let mut found = Vec::new();
        for p1 in 1..=3i64 {
            for p2 in 0..=p1 {
                for p3 in 0..=p2 {
                    for k in 0..=8i64 {
                        for deg_r in 0..=3i64 {
                            for e in 1..=4i64 {
                                let data = SixLinesData {
                                    p: vec![p1, p2, p3],
                                    m_count: 3,
                                    n_count: 3,
                                    k: int(k),
                                    deg_r: int(deg_r),
                                    deg_q: int(0),
                                    q: vec![int(0); 3],
                                    center_avoids_other_lines: true,
                                };
                                let weight = 2 * p1 + p2 + p3;
                                if let Ok(cert) =
                                    six_lines_bound(&data, &int(1), &int(e), &int(weight))
                                {
                                    found.push(cert);
                                }
                            }
                        }
                    }
                }
            }
        }
        assert!(!found.is_empty(), "the sweep must find a feasible instance");
        for cert in &found {
            assert!(cert.verify().is_ok());
            assert!(cert.conclusion.holds());
        }
    }

    #[test]
    fn six_lines_requires_the_separation_flag() {
        let mut data = six_data(vec![1, 1], 3, 0);
        data.center_avoids_other_lines = false;
        assert!(matches!(
            six_lines_bound(&data, &int(1), &int(1), &int(3)),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn pipeline_one_and_three_lines() {
        // T = 1 via n = e = 1, nu(F) = 1.
        let sel = select_line(
            &LineCaseData::OneLine {
                k: int(3),
                deg_c: int(2),
            },
            &int(1),
            &int(1),
            &int(1),
        )
        .unwrap();
        assert_eq!(sel.line_index, 1);
        assert_eq!(sel.intersection_bound.lhs, int(2));
        assert!(sel.verify().is_ok());

        let sel = select_line(
            &LineCaseData::ThreeLines(ThreeLinesData {
                k: [int(2), int(1), int(1)],
                d: int(0),
                d_i: [int(0), int(0), int(0)],
                m: int(0),
            }),
            &int(1),
            &int(1),
            &int(1),
        )
        .unwrap();
        assert_eq!(sel.cycle.len(), 3);
        assert!(sel.verify().is_ok());
    }

    #[test]
    fn pipeline_rejects_no_line() {
        let err = select_line(&LineCaseData::NoLine { d: int(5) }, &int(1), &int(1), &int(1));
        assert!(matches!(err, Err(Error::Domain(_))));
    }
}
