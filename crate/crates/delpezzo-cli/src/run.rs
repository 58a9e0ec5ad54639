//! Subcommand dispatch: config section in, report out.

use std::time::Instant;

use delpezzo::error::Error;
use delpezzo::exclusion::{
    complete_square_certificate, exclude_case, feasibility_search, ExclusionOutcome,
};
use delpezzo::graph::{aggregates, path_counts, valuation_of_fiber};
use delpezzo::lines::{no_line_contradiction, select_line, FiberThreshold, LineCaseData};
use delpezzo::untwist::untwist_all;

use crate::config::WorkbenchConfig;
use crate::report::{
    exclusion_case, Certificate, ClassTransform, GraphCertificate, K2Certificate,
    LedgerCertificate, NfRecord, Report, SearchCertificate, StaircaseCertificate,
    UntwistCertificate, Verdict,
};

fn finish(command: &str, verdict: Verdict, started: Instant, certificates: Vec<Certificate>, notes: Vec<String>) -> Report {
    Report {
        command: command.to_string(),
        verdict,
        timing_ms: started.elapsed().as_millis(),
        notes,
        certificates,
    }
}

fn section<'a, T>(s: &'a Option<T>, name: &str) -> Result<&'a T, Error> {
    s.as_ref()
        .ok_or_else(|| Error::input(format!("config has no {name:?} section")))
}

pub fn cmd_k2(config: &WorkbenchConfig) -> Result<Report, Error> {
    let started = Instant::now();
    let model = section(&config.fibration, "fibration")?.to_model()?;
    let cert = K2Certificate::compute(model);
    Ok(finish(
        "k2",
        Verdict::Verified,
        started,
        vec![Certificate::K2(cert)],
        vec![],
    ))
}

pub fn cmd_untwist(config: &WorkbenchConfig) -> Result<Report, Error> {
    let started = Instant::now();
    let pencil = section(&config.pencil, "pencil")?;
    let initial = pencil.to_state()?;
    let (word, final_state) = untwist_all(&initial, pencil.mode())?;
    let notes = if word.is_empty() {
        vec!["no maximal curves; the pencil is already untwisted".to_string()]
    } else {
        vec![]
    };
    let cert = UntwistCertificate {
        initial,
        word,
        final_state,
    };
    Ok(finish(
        "untwist",
        Verdict::Verified,
        started,
        vec![Certificate::Untwist(cert)],
        notes,
    ))
}

pub fn cmd_lines(config: &WorkbenchConfig) -> Result<Report, Error> {
    let started = Instant::now();
    let sec = section(&config.line_case, "line_case")?;
    let threshold = match (&sec.t, &sec.n, &sec.e, &sec.nu_f) {
        (Some(t), _, _, _) => Some(FiberThreshold::new(t.clone())?),
        (None, Some(n), Some(e), Some(nu_f)) => Some(FiberThreshold::from_parts(n, e, nu_f)?),
        _ => None,
    };
    match &sec.data {
        LineCaseData::NoLine { d } => {
            let t = threshold.ok_or_else(|| Error::input("line_case needs t or {n, e, nu_f}"))?;
            let cert = no_line_contradiction(d, &t)?;
            Ok(finish(
                "lines",
                Verdict::ContradictionCertified,
                started,
                vec![Certificate::NoLine(cert)],
                vec![
                    "a configuration with no line through the center contradicts the \
                     multiplicity bound, so a line must exist"
                        .to_string(),
                ],
            ))
        }
        data => {
            // The full pipeline needs the threshold parts; fall back to the
            // bare selector when only t is given.
            match (&sec.n, &sec.e, &sec.nu_f) {
                (Some(n), Some(e), Some(nu_f)) => {
                    let selected = select_line(data, n, e, nu_f)?;
                    Ok(finish(
                        "lines",
                        Verdict::Verified,
                        started,
                        vec![Certificate::LineSelection(selected)],
                        vec![],
                    ))
                }
                _ => {
                    let t = threshold
                        .ok_or_else(|| Error::input("line_case needs t or {n, e, nu_f}"))?;
                    let cert = match data {
                        LineCaseData::OneLine { k, deg_c } => {
                            delpezzo::lines::LineCertificate::OneLine(
                                delpezzo::lines::one_line_bound(k, deg_c, &t)?,
                            )
                        }
                        LineCaseData::TwoLines(d) => delpezzo::lines::LineCertificate::TwoLines(
                            delpezzo::lines::two_lines_select(d, &t)?,
                        ),
                        LineCaseData::ThreeLines(d) => {
                            delpezzo::lines::LineCertificate::ThreeLines(
                                delpezzo::lines::three_lines_select(d, &t)?,
                            )
                        }
                        LineCaseData::SixLines(_) => {
                            return Err(Error::input(
                                "the six-lines case needs n, e and nu_f, not just t",
                            ))
                        }
                        LineCaseData::NoLine { .. } => unreachable!("handled above"),
                    };
                    Ok(finish(
                        "lines",
                        Verdict::Verified,
                        started,
                        vec![Certificate::LineCase(cert)],
                        vec![],
                    ))
                }
            }
        }
    }
}

pub fn cmd_staircase(config: &WorkbenchConfig) -> Result<Report, Error> {
    let started = Instant::now();
    let sec = section(&config.staircase, "staircase")?;
    let st = sec.staircase()?;
    let pullback = delpezzo::staircase::pullback_fiber_class(&st);
    let discrepancies = (1..=st.length)
        .map(|i| delpezzo::staircase::discrepancy(&st, i))
        .collect::<Result<Vec<_>, _>>()?;
    let class_transform = match (&sec.n, &sec.lambdas, sec.z0()) {
        (Some(n), Some(lambdas), Some(z0)) => {
            let result = delpezzo::staircase::z_recursion(n, lambdas, &z0)?;
            Some(ClassTransform {
                n: n.clone(),
                lambdas: lambdas.clone(),
                z0,
                result,
            })
        }
        _ => None,
    };
    let ledger = match sec.ledger()? {
        Some(ledger) => {
            if sec.integral {
                ledger.validate_integrality()?;
            }
            ledger.verify_steps()?;
            let bounds = ledger.verify_bounds()?;
            Some(LedgerCertificate { ledger, bounds })
        }
        None => None,
    };
    let cert = StaircaseCertificate {
        staircase: st,
        levels: st.levels(),
        pullback,
        discrepancies,
        class_transform,
        ledger,
    };
    Ok(finish(
        "staircase",
        Verdict::Verified,
        started,
        vec![Certificate::Staircase(cert)],
        vec![],
    ))
}

pub fn cmd_graph(config: &WorkbenchConfig) -> Result<Report, Error> {
    let started = Instant::now();
    let sec = section(&config.graph, "graph")?;
    let graph = sec.to_graph();
    let p = path_counts(&graph)?;
    let agg = aggregates(&graph, sec.case.into())?;
    let mut notes = Vec::new();
    let (case_tag, nu_f) = match sec.case_tag() {
        Some(tag) => {
            let d_f = if tag.special { 2 } else { 1 };
            match valuation_of_fiber(&tag, &agg, d_f) {
                Ok(nu_f) => (Some(tag), Some(nu_f)),
                Err(Error::Unsupported(msg)) => {
                    notes.push(format!("fiber multiplicity not computed: {msg}"));
                    (Some(tag), None)
                }
                Err(e) => return Err(e),
            }
        }
        None => (None, None),
    };
    let nf = match &sec.nf {
        Some(nf_sec) => {
            let identity = delpezzo::graph::nf_identity(
                &graph,
                &agg,
                &nf_sec.n,
                &nf_sec.lambdas,
                nf_sec.e.as_ref(),
            )?;
            if !identity.maximal {
                notes.push(format!(
                    "e = {} is not positive: the valuation is not a maximal singularity",
                    identity.e
                ));
            }
            Some(NfRecord {
                n: nf_sec.n.clone(),
                lambdas: nf_sec.lambdas.clone(),
                identity,
            })
        }
        None => None,
    };
    let cert = GraphCertificate {
        graph,
        graph_case: sec.case.into(),
        p,
        aggregates: agg,
        case_tag,
        nu_f,
        nf,
    };
    Ok(finish(
        "graph",
        Verdict::Verified,
        started,
        vec![Certificate::Graph(cert)],
        notes,
    ))
}

pub fn cmd_exclude(config: &WorkbenchConfig) -> Result<Report, Error> {
    let started = Instant::now();
    let sec = section(&config.exclusion, "exclusion")?;
    let case = exclusion_case(sec.case);
    match (&sec.params, &sec.ranges) {
        (Some(_), None) => {
            let params = sec.to_case_params()?;
            let square = complete_square_certificate(case)?;
            match exclude_case(&params)? {
                ExclusionOutcome::Excluded(cert) => Ok(finish(
                    "exclude",
                    Verdict::ContradictionCertified,
                    started,
                    vec![Certificate::Exclusion(*cert), Certificate::Square(square)],
                    vec![],
                )),
                ExclusionOutcome::Feasible(inst) => Ok(finish(
                    "exclude",
                    Verdict::Counterexample,
                    started,
                    vec![Certificate::Feasible(*inst)],
                    vec!["the bounds do not exclude this cell; the inputs cannot come \
                          from valid data"
                        .to_string()],
                )),
            }
        }
        (None, Some(ranges)) => {
            let report = feasibility_search(case, sec.special, sec.singular_center, ranges, true)?;
            let verdict = if report.feasible.is_empty() {
                Verdict::Verified
            } else {
                Verdict::Counterexample
            };
            let notes = vec![format!(
                "{} feasible / {} cells",
                report.feasible.len(),
                report.cells_checked
            )];
            let cert = SearchCertificate {
                ranges: ranges.clone(),
                report,
            };
            Ok(finish(
                "exclude",
                verdict,
                started,
                vec![Certificate::Search(cert)],
                notes,
            ))
        }
        (Some(_), Some(_)) => Err(Error::input(
            "exclusion section has both params and ranges; pick one",
        )),
        (None, None) => Err(Error::input(
            "exclusion section needs either params or ranges",
        )),
    }
}

/// Which subcommand to run against a parsed config.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    K2,
    Untwist,
    Lines,
    Staircase,
    Graph,
    Exclude,
}

pub fn dispatch(command: Command, config: &WorkbenchConfig) -> Result<Report, Error> {
    match command {
        Command::K2 => cmd_k2(config),
        Command::Untwist => cmd_untwist(config),
        Command::Lines => cmd_lines(config),
        Command::Staircase => cmd_staircase(config),
        Command::Graph => cmd_graph(config),
        Command::Exclude => cmd_exclude(config),
    }
}

/// Parse and dispatch in one step; used by the binary and the fuzz tests.
pub fn execute_str(command: Command, config_text: &str) -> Result<Report, Error> {
    let config = WorkbenchConfig::parse(config_text)?;
    dispatch(command, &config)
}
