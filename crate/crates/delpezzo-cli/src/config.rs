//! The JSON input schema: one document with optional sections, each
//! consumed by the matching subcommand. Rationals are integers or `"p/q"`
//! strings; unknown keys in the fixed-shape sections are rejected.

use delpezzo::chow::BundleModel;
use delpezzo::error::Error;
use delpezzo::exclusion::{CaseParams, ParamsA, ParamsB, ParamsC, SearchRanges};
use delpezzo::graph::{CaseTag, GraphCase, ResolutionGraph};
use delpezzo::lines::LineCaseData;
use delpezzo::rat::Rat;
use delpezzo::staircase::{LedgerRow, LevelLedger, Staircase, StairCycleClass};
use delpezzo::untwist::{CurveKind, MaximalCurve, PencilState, UntwistMode};
use serde::Deserialize;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WorkbenchConfig {
    pub fibration: Option<FibrationSection>,
    pub pencil: Option<PencilSection>,
    pub line_case: Option<LineCaseSection>,
    pub staircase: Option<StaircaseSection>,
    pub graph: Option<GraphSection>,
    pub exclusion: Option<ExclusionSection>,
}

impl WorkbenchConfig {
    pub fn parse(text: &str) -> Result<Self, Error> {
        serde_json::from_str(text).map_err(|e| Error::input(format!("config: {e}")))
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FibrationSection {
    pub a: [i64; 3],
    pub m: i64,
}

impl FibrationSection {
    pub fn to_model(&self) -> Result<BundleModel, Error> {
        BundleModel::new(self.a[0], self.a[1], self.a[2], self.m)
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PencilSection {
    pub n: i64,
    pub l: i64,
    pub curves: Vec<CurveSection>,
    #[serde(default)]
    pub mode: Option<UntwistMode>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveSection {
    pub kind: CurveKindSection,
    pub nu: i64,
}

/// The schema admits "vertical" so that the request can be rejected with an
/// explanation rather than a parse error.
#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CurveKindSection {
    Section,
    Bisection,
    Vertical,
}

impl PencilSection {
    pub fn to_state(&self) -> Result<PencilState, Error> {
        let mut curves = Vec::with_capacity(self.curves.len());
        for c in &self.curves {
            let kind = match c.kind {
                CurveKindSection::Section => CurveKind::Section,
                CurveKindSection::Bisection => CurveKind::Bisection,
                CurveKindSection::Vertical => {
                    return Err(delpezzo::untwist::vertical_curve_rejection())
                }
            };
            curves.push(MaximalCurve { kind, nu: c.nu });
        }
        PencilState::new(self.n, self.l, curves)
    }

    pub fn mode(&self) -> UntwistMode {
        self.mode.unwrap_or_default()
    }
}

#[derive(Debug, Deserialize)]
pub struct LineCaseSection {
    #[serde(flatten)]
    pub data: LineCaseData,
    /// Either the threshold directly ...
    pub t: Option<Rat>,
    /// ... or its parts (required for the six-lines case).
    pub n: Option<Rat>,
    pub e: Option<Rat>,
    pub nu_f: Option<Rat>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StaircaseSection {
    #[serde(rename = "M")]
    pub m: u32,
    #[serde(default)]
    pub special: bool,
    pub n: Option<Rat>,
    pub lambdas: Option<Vec<Rat>>,
    pub z0: Option<Z0Section>,
    pub c0_dot_l: Option<Rat>,
    pub c01_dot_l1: Option<Rat>,
    pub ledger: Option<Vec<LedgerRow>>,
    #[serde(default)]
    pub integral: bool,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Z0Section {
    pub s: i64,
    pub f: i64,
}

impl StaircaseSection {
    pub fn staircase(&self) -> Result<Staircase, Error> {
        Staircase::new(self.m, self.special)
    }

    pub fn z0(&self) -> Option<StairCycleClass> {
        self.z0.as_ref().map(|z| {
            StairCycleClass::level_zero(delpezzo::chow::VCycleClass { s: z.s, f: z.f })
        })
    }

    pub fn ledger(&self) -> Result<Option<LevelLedger>, Error> {
        let Some(rows) = &self.ledger else {
            return Ok(None);
        };
        let n = self
            .n
            .clone()
            .ok_or_else(|| Error::input("ledger verification needs n"))?;
        let c0 = self
            .c0_dot_l
            .clone()
            .ok_or_else(|| Error::input("ledger verification needs c0_dot_l"))?;
        Ok(Some(LevelLedger {
            staircase: self.staircase()?,
            n,
            c0_dot_l: c0,
            c01_dot_l1: self.c01_dot_l1.clone(),
            rows: rows.clone(),
        }))
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphSection {
    #[serde(rename = "K")]
    pub node_count: usize,
    pub edges: Vec<(usize, usize)>,
    #[serde(alias = "pointPhase")]
    pub point_phase: usize,
    pub nu: Vec<Rat>,
    pub delta: Vec<i64>,
    pub in_e: Option<Vec<bool>>,
    pub in_e_plus: Option<Vec<bool>>,
    pub in_e_minus: Option<Vec<bool>>,
    pub case: GraphCaseSection,
    #[serde(default)]
    pub special: bool,
    #[serde(rename = "M", default)]
    pub m: Option<u32>,
    #[serde(default)]
    pub singular_center: bool,
    /// Verify or solve the multiplicity/discrepancy identity.
    pub nf: Option<NfSection>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
pub enum GraphCaseSection {
    A,
    B,
    C,
}

impl From<GraphCaseSection> for GraphCase {
    fn from(c: GraphCaseSection) -> GraphCase {
        match c {
            GraphCaseSection::A => GraphCase::A,
            GraphCaseSection::B => GraphCase::B,
            GraphCaseSection::C => GraphCase::C,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NfSection {
    pub n: Rat,
    pub lambdas: Vec<Rat>,
    pub e: Option<Rat>,
}

impl GraphSection {
    pub fn to_graph(&self) -> ResolutionGraph {
        ResolutionGraph {
            node_count: self.node_count,
            edges: self.edges.clone(),
            point_phase: self.point_phase,
            nu: self.nu.clone(),
            delta: self.delta.clone(),
            in_e: self.in_e.clone(),
            in_e_plus: self.in_e_plus.clone(),
            in_e_minus: self.in_e_minus.clone(),
        }
    }

    pub fn case_tag(&self) -> Option<CaseTag> {
        self.m.map(|m| CaseTag {
            case: self.case.into(),
            special: self.special,
            m,
            singular_center: self.singular_center,
        })
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExclusionSection {
    pub case: GraphCaseSection,
    #[serde(default)]
    pub special: bool,
    #[serde(default)]
    pub singular_center: bool,
    pub params: Option<ExclusionParamsSection>,
    pub ranges: Option<SearchRanges>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExclusionParamsSection {
    pub n: Rat,
    pub e: Rat,
    #[serde(rename = "M")]
    pub m: u32,
    pub eps: Option<Rat>,
    pub eps_plus: Option<Rat>,
    pub eps_minus: Option<Rat>,
    pub eps_fiber: Option<Rat>,
    pub sigma0: Option<Rat>,
    pub sigma1: Option<Rat>,
    pub sigma: Option<Rat>,
    pub sum_p_sq: Option<Rat>,
    pub p1: Option<Rat>,
    pub lambda: Option<Rat>,
    pub lambda_plus: Option<Rat>,
    pub lambda_minus: Option<Rat>,
    pub c0_dot_l: Option<Rat>,
    pub c01_dot_l1: Option<Rat>,
}

fn need(field: &str, v: &Option<Rat>) -> Result<Rat, Error> {
    v.clone()
        .ok_or_else(|| Error::input(format!("exclusion params: missing field {field:?}")))
}

impl ExclusionSection {
    pub fn to_case_params(&self) -> Result<CaseParams, Error> {
        let p = self
            .params
            .as_ref()
            .ok_or_else(|| Error::input("exclusion: missing params (or use ranges)"))?;
        Ok(match self.case {
            GraphCaseSection::A => CaseParams::A(ParamsA {
                n: p.n.clone(),
                e: p.e.clone(),
                m: p.m,
                eps: need("eps", &p.eps)?,
                sigma0: need("sigma0", &p.sigma0)?,
                sigma1: need("sigma1", &p.sigma1)?,
                lambda: need("lambda", &p.lambda)?,
                special: self.special,
                c0_dot_l: p.c0_dot_l.clone(),
                c01_dot_l1: p.c01_dot_l1.clone(),
            }),
            GraphCaseSection::B => CaseParams::B(ParamsB {
                n: p.n.clone(),
                e: p.e.clone(),
                m: p.m,
                eps: need("eps", &p.eps)?,
                sigma: need("sigma", &p.sigma)?,
                lambda: need("lambda", &p.lambda)?,
                special: self.special,
                sum_p_sq: p.sum_p_sq.clone(),
                p1: p.p1.clone(),
                c0_dot_l: p.c0_dot_l.clone(),
            }),
            GraphCaseSection::C => CaseParams::C(ParamsC {
                n: p.n.clone(),
                e: p.e.clone(),
                m: p.m,
                eps_plus: need("eps_plus", &p.eps_plus)?,
                eps_minus: need("eps_minus", &p.eps_minus)?,
                sigma0: need("sigma0", &p.sigma0)?,
                sigma1: need("sigma1", &p.sigma1)?,
                lambda_plus: need("lambda_plus", &p.lambda_plus)?,
                lambda_minus: need("lambda_minus", &p.lambda_minus)?,
                special: self.special,
                singular_center: self.singular_center,
                eps_fiber: p.eps_fiber.clone(),
            }),
        })
    }
}
