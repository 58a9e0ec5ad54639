//! The machine-readable report: a verdict plus self-contained certificates
//! that re-verify from their own stored inputs.

use delpezzo::chow::BundleModel;
use delpezzo::error::Error;
use delpezzo::exclusion::{
    exclude_case, feasibility_search, ContradictionCertificate, ExclusionCase, ExclusionOutcome,
    FeasibleInstance, SearchRanges, SearchReport, SquareCertificate,
};
use delpezzo::graph::{
    aggregates, path_counts, valuation_of_fiber, Aggregates, CaseTag, GraphCase, NfIdentity,
    ResolutionGraph,
};
use delpezzo::lines::{LineCertificate, NoLineCertificate, SelectedLine};
use delpezzo::rat::Rat;
use delpezzo::staircase::{
    discrepancy, pullback_fiber_class, LevelConstants, LevelLedger, PullbackFiber, StairCycleClass,
    Staircase,
};
use delpezzo::untwist::{PencilState, UntwistWord};
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Verified,
    ContradictionCertified,
    Counterexample,
    InputError,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub verdict: Verdict,
    pub timing_ms: u128,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    pub certificates: Vec<Certificate>,
}

impl Report {
    pub fn verify(&self) -> Result<(), Error> {
        for (idx, cert) in self.certificates.iter().enumerate() {
            cert.verify()
                .map_err(|e| Error::CertificateInvalid(format!("certificate {idx}: {e}")))?;
        }
        Ok(())
    }
}

/// Intersection numbers and the sufficiency verdict for one fibration.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct K2Certificate {
    pub model: BundleModel,
    pub k2_dot_l: Rat,
    pub k2_dot_f: Rat,
    pub sufficient: bool,
}

impl K2Certificate {
    pub fn compute(model: BundleModel) -> Self {
        K2Certificate {
            model,
            k2_dot_l: delpezzo::chow::k2_dot_l(&model),
            k2_dot_f: delpezzo::chow::k2_dot_f(&model),
            sufficient: delpezzo::chow::k2_condition_sufficient(&model),
        }
    }

    pub fn verify(&self) -> Result<(), Error> {
        if &Self::compute(self.model) != self {
            return Err(Error::CertificateInvalid(
                "intersection numbers do not match the model".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UntwistCertificate {
    pub initial: PencilState,
    pub word: UntwistWord,
    pub final_state: PencilState,
}

impl UntwistCertificate {
    pub fn verify(&self) -> Result<(), Error> {
        let replayed = self.word.replay(&self.initial)?;
        if replayed != self.final_state {
            return Err(Error::CertificateInvalid(
                "replaying the involution word does not reproduce the final state".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StaircaseCertificate {
    pub staircase: Staircase,
    pub levels: Vec<LevelConstants>,
    pub pullback: PullbackFiber,
    pub discrepancies: Vec<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub class_transform: Option<ClassTransform>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ledger: Option<LedgerCertificate>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassTransform {
    pub n: Rat,
    pub lambdas: Vec<Rat>,
    pub z0: StairCycleClass,
    pub result: StairCycleClass,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LedgerCertificate {
    pub ledger: LevelLedger,
    pub bounds: Vec<Rat>,
}

impl StaircaseCertificate {
    pub fn verify(&self) -> Result<(), Error> {
        let st = self.staircase;
        if self.levels != st.levels() {
            return Err(Error::CertificateInvalid("level constants differ".into()));
        }
        if self.pullback != pullback_fiber_class(&st) {
            return Err(Error::CertificateInvalid(
                "fiber pullback coefficients differ".into(),
            ));
        }
        let disc: Result<Vec<u32>, Error> =
            (1..=st.length).map(|i| discrepancy(&st, i)).collect();
        if self.discrepancies != disc? {
            return Err(Error::CertificateInvalid("discrepancies differ".into()));
        }
        if let Some(ct) = &self.class_transform {
            let z = delpezzo::staircase::z_recursion(&ct.n, &ct.lambdas, &ct.z0)?;
            if z != ct.result {
                return Err(Error::CertificateInvalid(
                    "class recursion result differs".into(),
                ));
            }
        }
        if let Some(lc) = &self.ledger {
            lc.ledger.verify_steps()?;
            let bounds = lc.ledger.verify_bounds()?;
            if bounds != lc.bounds {
                return Err(Error::CertificateInvalid("ledger bounds differ".into()));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphCertificate {
    pub graph: ResolutionGraph,
    pub graph_case: GraphCase,
    #[serde(with = "delpezzo::serde_util::bigint_vec_string")]
    pub p: Vec<BigInt>,
    pub aggregates: Aggregates,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub case_tag: Option<CaseTag>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nu_f: Option<Rat>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nf: Option<NfRecord>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NfRecord {
    pub n: Rat,
    pub lambdas: Vec<Rat>,
    pub identity: NfIdentity,
}

impl GraphCertificate {
    pub fn verify(&self) -> Result<(), Error> {
        if path_counts(&self.graph)? != self.p {
            return Err(Error::CertificateInvalid("path counts differ".into()));
        }
        let agg = aggregates(&self.graph, self.graph_case)?;
        if agg != self.aggregates {
            return Err(Error::CertificateInvalid("aggregates differ".into()));
        }
        if let (Some(tag), Some(nu_f)) = (&self.case_tag, &self.nu_f) {
            let d_f = if tag.special { 2 } else { 1 };
            let recomputed = valuation_of_fiber(tag, &agg, d_f)?;
            if &recomputed != nu_f {
                return Err(Error::CertificateInvalid(
                    "fiber multiplicity differs".into(),
                ));
            }
        }
        if let Some(nf) = &self.nf {
            let identity = delpezzo::graph::nf_identity(
                &self.graph,
                &agg,
                &nf.n,
                &nf.lambdas,
                Some(&nf.identity.e),
            )?;
            if identity != nf.identity {
                return Err(Error::CertificateInvalid(
                    "multiplicity/discrepancy identity differs".into(),
                ));
            }
        }
        Ok(())
    }
}

/// Wrapper for the sweep so a replay reruns it and compares.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchCertificate {
    pub ranges: SearchRanges,
    pub report: SearchReport,
}

impl SearchCertificate {
    pub fn verify(&self) -> Result<(), Error> {
        let rerun = feasibility_search(
            self.report.case,
            self.report.special,
            self.report.singular_center,
            &self.ranges,
            true,
        )?;
        if rerun != self.report {
            return Err(Error::CertificateInvalid(
                "re-running the sweep gives a different report".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Certificate {
    K2(K2Certificate),
    Untwist(UntwistCertificate),
    LineSelection(SelectedLine),
    LineCase(LineCertificate),
    NoLine(NoLineCertificate),
    Staircase(StaircaseCertificate),
    Graph(GraphCertificate),
    Exclusion(ContradictionCertificate),
    Feasible(FeasibleInstance),
    Search(SearchCertificate),
    Square(SquareCertificate),
}

impl Certificate {
    pub fn verify(&self) -> Result<(), Error> {
        match self {
            Certificate::K2(c) => c.verify(),
            Certificate::Untwist(c) => c.verify(),
            Certificate::LineSelection(c) => c.verify(),
            Certificate::LineCase(c) => c.verify(),
            Certificate::NoLine(c) => c.verify(),
            Certificate::Staircase(c) => c.verify(),
            Certificate::Graph(c) => c.verify(),
            Certificate::Exclusion(c) => c.verify(),
            Certificate::Feasible(c) => match exclude_case(&c.params)? {
                ExclusionOutcome::Feasible(again) if *again == *c => Ok(()),
                _ => Err(Error::CertificateInvalid(
                    "feasible instance does not reproduce".into(),
                )),
            },
            Certificate::Search(c) => c.verify(),
            Certificate::Square(c) => c.verify(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Certificate::K2(_) => "k2",
            Certificate::Untwist(_) => "untwist",
            Certificate::LineSelection(_) => "line_selection",
            Certificate::LineCase(_) => "line_case",
            Certificate::NoLine(_) => "no_line",
            Certificate::Staircase(_) => "staircase",
            Certificate::Graph(_) => "graph",
            Certificate::Exclusion(_) => "exclusion",
            Certificate::Feasible(_) => "feasible",
            Certificate::Search(_) => "search",
            Certificate::Square(_) => "square",
        }
    }
}

/// One-line-per-item text rendering of a report.
pub fn render_text(report: &Report) -> String {
    let mut out = String::new();
    let verdict = match report.verdict {
        Verdict::Verified => "verified",
        Verdict::ContradictionCertified => "contradiction-certified",
        Verdict::Counterexample => "counterexample",
        Verdict::InputError => "input-error",
    };
    out.push_str(&format!(
        "{}: {} ({} ms)\n",
        report.command, verdict, report.timing_ms
    ));
    for note in &report.notes {
        out.push_str(&format!("  note: {note}\n"));
    }
    for cert in &report.certificates {
        match cert {
            Certificate::K2(c) => out.push_str(&format!(
                "  k2: (K^2.L) = {}, (K^2.F) = {}, sufficient = {}\n",
                c.k2_dot_l, c.k2_dot_f, c.sufficient
            )),
            Certificate::Untwist(c) => {
                out.push_str(&format!(
                    "  untwist: {} step(s), n {} -> {}\n",
                    c.word.len(),
                    c.initial.n,
                    c.final_state.n
                ));
                for s in &c.word.steps {
                    out.push_str(&format!(
                        "    curve {} ({:?}): n {} -> {}, nu {} -> {}\n",
                        s.curve_index, s.kind, s.n_before, s.n_after, s.nu_before, s.nu_after
                    ));
                }
            }
            Certificate::LineSelection(c) => {
                out.push_str(&format!(
                    "  line selection: L{} with {}\n",
                    c.line_index, c.intersection_bound
                ));
            }
            Certificate::LineCase(c) => {
                let (idx, concl) = match c {
                    LineCertificate::OneLine(x) => (x.chosen_index, &x.conclusion),
                    LineCertificate::TwoLines(x) => (x.chosen_index, &x.conclusion),
                    LineCertificate::ThreeLines(x) => (x.chosen_index, &x.conclusion),
                    LineCertificate::SixLines(x) => (1, &x.conclusion),
                };
                out.push_str(&format!("  line case: L{idx} with {concl}\n"));
            }
            Certificate::NoLine(c) => {
                for chk in &c.checks {
                    out.push_str(&format!("  no-line: {chk}\n"));
                }
            }
            Certificate::Staircase(c) => {
                out.push_str(&format!(
                    "  staircase: length {}, special = {}, fiber pullback {:?}\n",
                    c.staircase.length, c.staircase.special, c.pullback.exceptional
                ));
                if let Some(l) = &c.ledger {
                    out.push_str(&format!(
                        "    ledger: {} row(s) verified, bounds {:?}\n",
                        l.ledger.rows.len(),
                        l.bounds.iter().map(|b| b.to_string()).collect::<Vec<_>>()
                    ));
                }
            }
            Certificate::Graph(c) => {
                out.push_str(&format!(
                    "  graph: p = {:?}\n",
                    c.p.iter().map(|p| p.to_string()).collect::<Vec<_>>()
                ));
                if let Some(nu_f) = &c.nu_f {
                    out.push_str(&format!("    nu(F) = {nu_f}\n"));
                }
                if let Some(nf) = &c.nf {
                    out.push_str(&format!(
                        "    identity: lhs = {}, e = {}, maximal = {}\n",
                        nf.identity.lhs, nf.identity.e, nf.identity.maximal
                    ));
                }
            }
            Certificate::Exclusion(c) => {
                out.push_str(&format!(
                    "  exclusion: lower {} vs upper {} (Phi = {} >= 0)\n",
                    c.lower, c.upper, c.phi_value
                ));
            }
            Certificate::Feasible(c) => {
                out.push_str(&format!(
                    "  FEASIBLE: lower {} < upper {} at {:?}\n",
                    c.lower, c.upper, c.params
                ));
            }
            Certificate::Search(c) => {
                out.push_str(&format!(
                    "  search: {} feasible / {} cells ({} skipped)\n",
                    c.report.feasible.len(),
                    c.report.cells_checked,
                    c.report.cells_skipped
                ));
                for w in &c.report.warnings {
                    out.push_str(&format!("    warning: {w}\n"));
                }
            }
            Certificate::Square(c) => {
                out.push_str(&format!(
                    "  square: case {:?}, {} residual term(s), all nonnegative\n",
                    c.case,
                    c.residual_terms.len()
                ));
            }
        }
    }
    out
}

// Re-exported basics used by main.rs.
pub use delpezzo::exclusion::ExclusionCase as Case;

pub fn exclusion_case(case: crate::config::GraphCaseSection) -> ExclusionCase {
    match case {
        crate::config::GraphCaseSection::A => ExclusionCase::A,
        crate::config::GraphCaseSection::B => ExclusionCase::B,
        crate::config::GraphCaseSection::C => ExclusionCase::C,
    }
}
