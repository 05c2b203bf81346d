//! Solve and verify documents, per-iteration trace lines and the exit-code contract.

use std::time::Instant;

use minball::{
    dual_solve, oracle_enumerate, primal_solve, validate, ActiveSet, CoveringBall, Error, Instance,
    SolveOptions, SolveResult, TraceRecord, Vector,
};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};
use crate::format::SCHEMA_VERSION;

/// Exit status of a certified run.
pub const EXIT_OK: i32 = 0;
/// Exit status of I/O, parse and input errors.
pub const EXIT_IO: i32 = 1;
/// Exit status when a solver hit its iteration cap.
pub const EXIT_ITERATION_LIMIT: i32 = 2;
/// Exit status of a run whose result is not certified.
pub const EXIT_NOT_CERTIFIED: i32 = 3;

/// Method that produced a result.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    Primal,
    Dual,
    /// Exhaustive support enumeration.
    Oracle,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Self::Primal => "primal",
            Self::Dual => "dual",
            Self::Oracle => "oracle",
        }
    }
}

/// How a solver run ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Optimal,
    IterationLimit,
    Failed,
}

/// Summary of the optimality certificate of a result.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateSummary {
    pub accepted: bool,
    pub feasibility_margin: f64,
    pub kkt_residual: f64,
    pub support: Vec<usize>,
}

/// Outcome of one algorithm on one instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub algorithm: Algorithm,
    pub status: Status,
    pub center: Vec<f64>,
    pub radius: f64,
    pub support: Vec<usize>,
    pub iterations: usize,
    pub wall_time_ms: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<CertificateSummary>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl ResultRecord {
    /// Whether the run ended optimal with an accepted certificate.
    pub fn certified(&self) -> bool {
        self.status == Status::Optimal && self.certificate.as_ref().is_some_and(|c| c.accepted)
    }
}

/// Differences between the primal and dual results.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Agreement {
    pub radius_delta: f64,
    pub relative_radius_delta: f64,
    pub center_delta: f64,
}

/// Output document of `solve`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveDocument {
    pub schema_version: u32,
    pub results: Vec<ResultRecord>,
    #[serde(default)]
    pub agreement: Option<Agreement>,
}

impl SolveDocument {
    /// Builds the document, adding agreement deltas when both a primal and a
    /// dual result are present.
    pub fn new(results: Vec<ResultRecord>) -> Self {
        let find = |a: Algorithm| {
            results
                .iter()
                .find(|r| r.algorithm == a && r.status != Status::Failed)
        };
        let agreement = match (find(Algorithm::Primal), find(Algorithm::Dual)) {
            (Some(p), Some(d)) => {
                let radius_delta = (p.radius - d.radius).abs();
                let center_delta = p
                    .center
                    .iter()
                    .zip(&d.center)
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
                    .sqrt();
                Some(Agreement {
                    radius_delta,
                    relative_radius_delta: radius_delta / p.radius.abs().max(f64::MIN_POSITIVE),
                    center_delta,
                })
            }
            _ => None,
        };
        Self {
            schema_version: SCHEMA_VERSION,
            results,
            agreement,
        }
    }

    /// Exit status under the contract: iteration cap beats missing certificates.
    pub fn exit_code(&self) -> i32 {
        if self
            .results
            .iter()
            .any(|r| r.status == Status::IterationLimit)
        {
            EXIT_ITERATION_LIMIT
        } else if self.results.iter().all(ResultRecord::certified) {
            EXIT_OK
        } else {
            EXIT_NOT_CERTIFIED
        }
    }
}

/// One line of a JSON Lines trace file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceLine {
    pub schema_version: u32,
    pub algorithm: Algorithm,
    pub iteration: usize,
    pub z: f64,
    pub active: usize,
    pub kind: String,
    pub step: f64,
    pub entering: Option<usize>,
    pub leaving: Option<usize>,
}

impl TraceLine {
    fn new(algorithm: Algorithm, t: &TraceRecord) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            algorithm,
            iteration: t.iteration,
            z: t.z,
            active: t.active,
            kind: t.kind.name().to_owned(),
            step: t.step,
            entering: t.entering,
            leaving: t.leaving,
        }
    }
}

fn certify(
    instance: &Instance,
    ball: &CoveringBall,
    support: &[usize],
) -> Option<CertificateSummary> {
    let s = ActiveSet::new(support.to_vec()).ok()?;
    let cert = validate(instance, ball, &s).ok()?;
    Some(CertificateSummary {
        accepted: cert.accepted,
        feasibility_margin: cert.feasibility_margin,
        kkt_residual: cert.kkt_residual,
        support: cert.support.indices().to_vec(),
    })
}

fn record(
    algorithm: Algorithm,
    status: Status,
    ball: &CoveringBall,
    support: Vec<usize>,
    iterations: usize,
    ms: f64,
) -> ResultRecord {
    ResultRecord {
        algorithm,
        status,
        center: ball.center.iter().copied().collect(),
        radius: ball.radius,
        support,
        iterations,
        wall_time_ms: ms,
        certificate: None,
        error: None,
    }
}

/// Runs one algorithm, certifies its answer and collects its trace.
pub fn run(
    instance: &Instance,
    algorithm: Algorithm,
    options: &SolveOptions,
) -> (ResultRecord, Vec<TraceLine>) {
    let start = Instant::now();
    let outcome: std::result::Result<SolveResult, Error> = match algorithm {
        Algorithm::Primal => primal_solve(instance, options),
        Algorithm::Dual => dual_solve(instance, options),
        Algorithm::Oracle => oracle_enumerate(instance).map(|ball| SolveResult {
            ball,
            support: ActiveSet::new(Vec::new()).expect("empty set"),
            iterations: 0,
            trace: Vec::new(),
            safeguard_hits: 0,
            removed: Vec::new(),
        }),
    };
    let ms = start.elapsed().as_secs_f64() * 1e3;
    match outcome {
        Ok(result) => {
            let support = result.support.indices().to_vec();
            let mut rec = record(
                algorithm,
                Status::Optimal,
                &result.ball,
                support,
                result.iterations,
                ms,
            );
            rec.certificate = certify(instance, &result.ball, &rec.support);
            if rec.support.is_empty() {
                if let Some(c) = &rec.certificate {
                    rec.support = c.support.clone();
                }
            }
            let trace = result
                .trace
                .iter()
                .map(|t| TraceLine::new(algorithm, t))
                .collect();
            (rec, trace)
        }
        Err(Error::IterationLimit { limit, best }) => {
            let mut rec = record(
                algorithm,
                Status::IterationLimit,
                &best,
                Vec::new(),
                limit,
                ms,
            );
            rec.certificate = certify(instance, &best, &[]);
            rec.error = Some(format!("iteration limit {limit} reached"));
            (rec, Vec::new())
        }
        Err(e) => {
            let rec = ResultRecord {
                algorithm,
                status: Status::Failed,
                center: Vec::new(),
                radius: 0.0,
                support: Vec::new(),
                iterations: 0,
                wall_time_ms: ms,
                certificate: None,
                error: Some(e.to_string()),
            };
            (rec, Vec::new())
        }
    }
}

/// Certificate of one result in a `verify` document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyRecord {
    pub algorithm: Algorithm,
    pub accepted: bool,
    /// Absent for a failed run, which has no ball to check.
    pub feasibility_margin: Option<f64>,
    pub kkt_residual: Option<f64>,
    pub support: Vec<usize>,
    pub barycentric: Vec<f64>,
}

/// Output document of `verify`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyDocument {
    pub schema_version: u32,
    pub certificates: Vec<VerifyRecord>,
}

impl VerifyDocument {
    /// Zero iff every result is accepted.
    pub fn exit_code(&self) -> i32 {
        if !self.certificates.is_empty() && self.certificates.iter().all(|c| c.accepted) {
            EXIT_OK
        } else {
            EXIT_NOT_CERTIFIED
        }
    }
}

/// Re-validates every result of a solve document against `instance`.
pub fn verify(instance: &Instance, document: &SolveDocument) -> Result<VerifyDocument> {
    if document.schema_version != SCHEMA_VERSION {
        return Err(CliError::Schema {
            context: "result".into(),
            found: document.schema_version,
        });
    }
    let mut certificates = Vec::with_capacity(document.results.len());
    for (i, r) in document.results.iter().enumerate() {
        if r.status == Status::Failed {
            certificates.push(VerifyRecord {
                algorithm: r.algorithm,
                accepted: false,
                feasibility_margin: None,
                kkt_residual: None,
                support: Vec::new(),
                barycentric: Vec::new(),
            });
            continue;
        }
        let context = format!("result {i} ({})", r.algorithm.name());
        let wrap = |source| CliError::Instance {
            context: context.clone(),
            source,
        };
        let ball = CoveringBall {
            center: Vector::from_column_slice(&r.center),
            radius: r.radius,
        };
        let support = ActiveSet::new(r.support.clone()).map_err(wrap)?;
        let cert = validate(instance, &ball, &support).map_err(wrap)?;
        certificates.push(VerifyRecord {
            algorithm: r.algorithm,
            accepted: cert.accepted && r.status == Status::Optimal,
            feasibility_margin: Some(cert.feasibility_margin),
            kkt_residual: Some(cert.kkt_residual),
            support: cert.support.indices().to_vec(),
            barycentric: cert.barycentric.iter().copied().collect(),
        });
    }
    Ok(VerifyDocument {
        schema_version: SCHEMA_VERSION,
        certificates,
    })
}
