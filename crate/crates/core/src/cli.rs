//! Report generation for the `hjc` binary.
//!
//! Every command runs a default verification suite, writes a JSON (schema 1)
//! or CSV report and reports whether every numerical check passed. Exit codes:
//! 0 all pass, 1 numerical failure (report still written), 2 usage error.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{AlgebraElement, AlgebraTag};
use crate::berry::{self, BasePoint, ChartTag, PointClass};
use crate::block::BlockOperator;
use crate::error::HjcError;
use crate::grassmann;
use crate::jc::{self, JCParams, NormalizerSide};
use crate::oracle;
use crate::tolerance::Tolerances;

pub const SCHEMA_VERSION: u32 = 1;
pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Berry,
    Jc,
    Strings,
    Evolve,
    Grassmann,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Clone, Parser)]
#[command(
    name = "hjc",
    version,
    about = "Hopf-bundle charts and the Jaynes-Cummings non-commutative Berry model"
)]
pub struct RunConfig {
    /// Command to run (may also be given with --command).
    #[arg(value_enum)]
    pub positional: Option<Command>,
    #[arg(long, value_enum)]
    pub command: Option<Command>,
    /// Division algebra for `berry`; all four when omitted.
    #[arg(long)]
    pub algebra: Option<AlgebraTag>,
    /// Detuning ratio; replaces the default θ values of the quantum commands.
    #[arg(long, allow_hyphen_values = true)]
    pub theta: Option<f64>,
    /// Coupling for `evolve` (default 1).
    #[arg(long)]
    pub g: Option<f64>,
    /// Field frequency; with --delta, `evolve` checks the full Hamiltonian.
    #[arg(long, allow_hyphen_values = true)]
    pub omega: Option<f64>,
    /// Atomic transition frequency.
    #[arg(long, allow_hyphen_values = true)]
    pub delta: Option<f64>,
    /// Fock truncation (defaults: jc 32, strings 16, evolve 40, grassmann 24).
    #[arg(long)]
    pub dim: Option<usize>,
    /// End of the `evolve` time grid.
    #[arg(long, default_value_t = 10.0)]
    pub t_max: f64,
    /// Number of time points, endpoints included.
    #[arg(long, default_value_t = 50)]
    pub t_steps: usize,
    /// Initial Fock level for `evolve` (state |e, n0⟩).
    #[arg(long, default_value_t = 0)]
    pub n0: usize,
    /// Grid for `berry`: `w=START:STOP:STEPS,z=START:STOP:STEPS`.
    #[arg(long, default_value = "w=-1:1:5,z=-2:2:9", allow_hyphen_values = true)]
    pub grid: String,
    /// Random points per algebra (`berry`) or classical samples (`grassmann`).
    #[arg(long, default_value_t = 100)]
    pub samples: usize,
    /// Lattice side for `strings`.
    #[arg(long, default_value_t = 4)]
    pub lattice: usize,
    /// Seed for random sample points (default 42).
    #[arg(long, env = "HJC_SEED")]
    pub seed: Option<u64>,
    /// Override for identity checks (default 1e-12).
    #[arg(long)]
    pub tol_algebraic: Option<f64>,
    /// Override for reconstruction checks (default 1e-10).
    #[arg(long)]
    pub tol_reconstruction: Option<f64>,
    /// Override for propagator checks (default 1e-8).
    #[arg(long)]
    pub tol_propagator: Option<f64>,
    /// Override for shift-identity checks (default 1e-13).
    #[arg(long)]
    pub tol_shift: Option<f64>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error(transparent)]
    Numerics(#[from] HjcError),
}

/// A rendered report.
#[derive(Debug, Clone)]
pub struct Report {
    pub pass: bool,
    pub body: String,
}

impl RunConfig {
    pub fn resolved_command(&self) -> Result<Command, CliError> {
        match (self.positional, self.command) {
            (Some(a), Some(b)) if a != b => Err(CliError::Usage(format!("conflicting commands {a:?} and {b:?}"))),
            (Some(c), _) | (None, Some(c)) => Ok(c),
            (None, None) => Err(CliError::Usage("a command is required".into())),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(DEFAULT_SEED)
    }

    pub fn tolerances(&self) -> Result<Tolerances, CliError> {
        let mut t = Tolerances::default();
        for (slot, value) in [
            (&mut t.algebraic, self.tol_algebraic),
            (&mut t.reconstruction, self.tol_reconstruction),
            (&mut t.propagator, self.tol_propagator),
            (&mut t.shift, self.tol_shift),
        ] {
            if let Some(v) = value {
                if !(v > 0.0 && v.is_finite()) {
                    return Err(CliError::Usage(format!("tolerance must be positive, got {v}")));
                }
                *slot = v;
            }
        }
        Ok(t)
    }
}

pub fn run(cfg: &RunConfig) -> Result<Report, CliError> {
    let tol = cfg.tolerances()?;
    match cfg.resolved_command()? {
        Command::Berry => cmd_berry(cfg, &tol),
        Command::Jc => cmd_jc(cfg, &tol),
        Command::Strings => cmd_strings(cfg, &tol),
        Command::Evolve => cmd_evolve(cfg, &tol),
        Command::Grassmann => cmd_grassmann(cfg, &tol),
    }
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    schema: u32,
    command: Command,
    seed: u64,
    tolerances: &'a Tolerances,
    pass: bool,
    records: &'a [T],
}

fn json_report<T: Serialize>(cfg: &RunConfig, command: Command, tol: &Tolerances, records: &[T], pass: bool) -> Report {
    let env = Envelope {
        schema: SCHEMA_VERSION,
        command,
        seed: cfg.seed(),
        tolerances: tol,
        pass,
        records,
    };
    let mut body = serde_json::to_string_pretty(&env).expect("report serializes");
    body.push('\n');
    Report { pass, body }
}

fn csv_header(cfg: &RunConfig, command: Command, pass: bool, columns: &str) -> String {
    let name = serde_json::to_string(&command).expect("command serializes");
    format!(
        "# schema={SCHEMA_VERSION} command={} seed={} pass={pass}\n{columns}\n",
        name.trim_matches('"'),
        cfg.seed()
    )
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn finite(v: f64) -> Option<f64> {
    v.is_finite().then_some(v)
}

// ---------------------------------------------------------------- berry

#[derive(Debug, Clone, Copy, PartialEq)]
struct Axis {
    start: f64,
    stop: f64,
    steps: usize,
}

impl Axis {
    fn values(&self) -> Vec<f64> {
        match self.steps {
            1 => vec![self.start],
            n => (0..n)
                .map(|k| self.start + (self.stop - self.start) * k as f64 / (n - 1) as f64)
                .collect(),
        }
    }
}

fn parse_axis(spec: &str) -> Result<Axis, CliError> {
    let bad = || CliError::Usage(format!("bad grid axis '{spec}', expected START:STOP:STEPS"));
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(bad());
    }
    let start: f64 = parts[0].trim().parse().map_err(|_| bad())?;
    let stop: f64 = parts[1].trim().parse().map_err(|_| bad())?;
    let steps: usize = parts[2].trim().parse().map_err(|_| bad())?;
    if !start.is_finite() || !stop.is_finite() {
        return Err(bad());
    }
    Ok(Axis { start, stop, steps })
}

/// `w=START:STOP:STEPS,z=START:STOP:STEPS`; `w` runs along the real axis of K.
fn parse_grid(spec: &str) -> Result<(Vec<f64>, Vec<f64>), CliError> {
    let mut w = None;
    let mut z = None;
    for part in spec.split(',') {
        let (key, value) = part
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("bad grid component '{part}'")))?;
        match key.trim() {
            "w" => w = Some(parse_axis(value)?),
            "z" => z = Some(parse_axis(value)?),
            other => return Err(CliError::Usage(format!("unknown grid axis '{other}'"))),
        }
    }
    let (w, z) = match (w, z) {
        (Some(w), Some(z)) => (w, z),
        _ => return Err(CliError::Usage("grid needs both w and z axes".into())),
    };
    let (wv, zv) = (w.values(), z.values());
    if wv.is_empty() || zv.is_empty() {
        return Err(CliError::Usage("empty grid".into()));
    }
    Ok((wv, zv))
}

#[derive(Debug, Clone, Serialize)]
pub struct ChartCheck {
    pub chart: ChartTag,
    pub admissible: bool,
    pub reconstruction: Option<f64>,
    pub unitarity: Option<f64>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ProjectorCheck {
    pub idempotency: f64,
    pub hermiticity: f64,
    /// `max_χ |P − U_χ P₀ U_χ†|` over the admissible charts.
    pub chart_agreement: Option<f64>,
    pub max_entry: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct BerryRecord {
    pub index: usize,
    pub source: &'static str,
    pub point: PointJson,
    pub class: PointClass,
    pub chart_residuals: Vec<ChartCheck>,
    pub cocycle: Option<f64>,
    pub two_step: Option<f64>,
    pub projector_residuals: Option<ProjectorCheck>,
    pub conditioning: [Option<f64>; 2],
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct PointJson {
    pub w: AlgebraElement,
    pub z: f64,
    pub r: f64,
}

pub fn check_point(
    index: usize,
    source: &'static str,
    p: &BasePoint,
    tol: &Tolerances,
) -> Result<BerryRecord, HjcError> {
    let class = berry::classify_point(p);
    let h = berry::build_hamiltonian(p);
    let mut pass = true;

    let mut chart_residuals = Vec::with_capacity(2);
    for chart in ChartTag::BOTH {
        let check = match berry::chart_decompose(p, chart) {
            Ok(dec) => {
                let rec = berry::reconstruction_residual(&h, &dec)?;
                let uni = dec.unitary.unitarity_residual()?;
                pass &= class.admits(chart) && rec <= tol.algebraic && uni <= tol.algebraic;
                ChartCheck {
                    chart,
                    admissible: true,
                    reconstruction: Some(rec),
                    unitarity: Some(uni),
                    error: None,
                }
            }
            Err(e @ HjcError::DiracString { .. }) => {
                pass &= !class.admits(chart);
                ChartCheck {
                    chart,
                    admissible: false,
                    reconstruction: None,
                    unitarity: None,
                    error: Some(e.to_string()),
                }
            }
            Err(e) => return Err(e),
        };
        chart_residuals.push(check);
    }

    let cocycle = if class == PointClass::Regular {
        let u1 = berry::chart_unitary(p, ChartTag::I)?;
        let u2 = berry::chart_unitary(p, ChartTag::II)?;
        let phi = berry::transition_function(p)?;
        let res = u2.distance(&u1.mul(&phi)?)?;
        pass &= res <= tol.algebraic;
        Some(res)
    } else {
        None
    };

    let two_step = if class == PointClass::Regular {
        let (l, m, ldag) = berry::two_step_decompose(p)?;
        let res = l.mul(&m)?.mul(&ldag)?.distance(&h)?;
        pass &= res <= tol.algebraic;
        Some(res)
    } else {
        None
    };

    let projector_residuals = match berry::projector(p) {
        Ok(proj) => {
            let idem = proj.mul(&proj)?.distance(&proj)?;
            let herm = proj.hermiticity_residual()?;
            let mut agreement: Option<f64> = None;
            for chart in ChartTag::BOTH {
                if let Ok(u) = berry::chart_unitary(p, chart) {
                    let via = u.mul(&berry::Matrix2K::basic_projector(p.tag()))?.mul(&u.adjoint())?;
                    let d = via.distance(&proj)?;
                    agreement = Some(agreement.map_or(d, |a| a.max(d)));
                }
            }
            let max_entry = proj.max_norm();
            pass &= idem <= tol.algebraic
                && herm <= tol.algebraic
                && agreement.is_none_or(|a| a <= tol.algebraic)
                && max_entry <= 1.0 + tol.algebraic;
            Some(ProjectorCheck {
                idempotency: idem,
                hermiticity: herm,
                chart_agreement: agreement,
                max_entry,
            })
        }
        Err(HjcError::Origin) => {
            pass &= class == PointClass::Origin;
            None
        }
        Err(e) => return Err(e),
    };

    Ok(BerryRecord {
        index,
        source,
        point: PointJson {
            w: p.w().clone(),
            z: p.z(),
            r: p.r(),
        },
        class,
        chart_residuals,
        cocycle,
        two_step,
        projector_residuals,
        conditioning: [
            finite(berry::conditioning(p, ChartTag::I)),
            finite(berry::conditioning(p, ChartTag::II)),
        ],
        pass,
    })
}

/// Random point with coefficients and `z` uniform in `[−2, 2]`.
pub fn random_point(rng: &mut impl Rng, tag: AlgebraTag) -> BasePoint {
    let coeffs = (0..tag.dim()).map(|_| rng.random_range(-2.0..2.0)).collect();
    let w = AlgebraElement::new(tag, coeffs).expect("finite coefficients");
    BasePoint::new(w, rng.random_range(-2.0..2.0)).expect("finite z")
}

pub fn cmd_berry(cfg: &RunConfig, tol: &Tolerances) -> Result<Report, CliError> {
    let (ws, zs) = parse_grid(&cfg.grid)?;
    let tags: Vec<AlgebraTag> = cfg.algebra.map_or_else(|| AlgebraTag::ALL.to_vec(), |t| vec![t]);

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed());
    let mut points: Vec<(&'static str, BasePoint)> = Vec::new();
    for &tag in &tags {
        for &w in &ws {
            for &z in &zs {
                points.push(("grid", BasePoint::new(AlgebraElement::real(tag, w), z)?));
            }
        }
        for _ in 0..cfg.samples {
            points.push(("random", random_point(&mut rng, tag)));
        }
    }

    let records: Vec<BerryRecord> = points
        .par_iter()
        .enumerate()
        .map(|(i, (src, p))| check_point(i, src, p, tol))
        .collect::<Result<_, _>>()?;
    let pass = records.iter().all(|r| r.pass);

    Ok(match cfg.format {
        Format::Json => json_report(cfg, Command::Berry, tol, &records, pass),
        Format::Csv => {
            let mut body = csv_header(
                cfg,
                Command::Berry,
                pass,
                "index,source,algebra,w_norm,z,class,chart_i_reconstruction,chart_ii_reconstruction,cocycle,projector_idempotency,conditioning_i,conditioning_ii,pass",
            );
            for r in &records {
                let recon = |k: usize| opt(r.chart_residuals[k].reconstruction);
                let _ = writeln!(
                    body,
                    "{},{},{},{},{},{:?},{},{},{},{},{},{},{}",
                    r.index,
                    r.source,
                    r.point.w.tag(),
                    r.point.w.norm(),
                    r.point.z,
                    r.class,
                    recon(0),
                    recon(1),
                    opt(r.cocycle),
                    opt(r.projector_residuals.as_ref().map(|p| p.idempotency)),
                    opt(r.conditioning[0]),
                    opt(r.conditioning[1]),
                    r.pass
                );
            }
            Report { pass, body }
        }
    })
}

// ---------------------------------------------------------------- jc

pub const DEFAULT_THETAS: [f64; 7] = [-1.0, -0.5, -0.1, 0.1, 0.5, 1.0, 2.0];

fn thetas(cfg: &RunConfig, default: &[f64]) -> Vec<f64> {
    cfg.theta.map_or_else(|| default.to_vec(), |t| vec![t])
}

fn dim_or(cfg: &RunConfig, default: usize) -> Result<usize, CliError> {
    let d = cfg.dim.unwrap_or(default);
    if d < 4 {
        return Err(CliError::Usage(format!("--dim must be at least 4, got {d}")));
    }
    Ok(d)
}

#[derive(Debug, Clone, Serialize)]
pub struct QuantumChartCheck {
    pub chart: ChartTag,
    pub admissible: bool,
    /// On `SafeSubspace(d, 2)`.
    pub reconstruction: Option<f64>,
    /// On `SafeSubspace(d, 1)`.
    pub unitarity: Option<f64>,
    pub singular_levels: Vec<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct JcRecord {
    pub theta: f64,
    pub dim: usize,
    pub charts: Vec<QuantumChartCheck>,
    pub eigenvalue_deviation: f64,
    pub projector_idempotency: f64,
    pub projector_hermiticity: f64,
    pub projector_chart_forms: f64,
    pub spectral_reconstruction: f64,
    pub weight_commutator: f64,
    pub pass: bool,
}

/// Expected spectrum of the truncated `H_JC`: `±R(m)` for `m = 1 … d−1`, the
/// ground state `−θ` and the truncation edge `+θ`.
pub fn expected_spectrum(p: &JCParams) -> Vec<f64> {
    let mut v: Vec<f64> = (1..p.dim)
        .flat_map(|m| {
            let r = p.radius(m as f64);
            [r, -r]
        })
        .collect();
    v.push(-p.theta);
    v.push(p.theta);
    v.sort_by(f64::total_cmp);
    v
}

pub fn check_jc(p: &JCParams, tol: &Tolerances) -> Result<JcRecord, HjcError> {
    let h = jc::build_h_jc(p)?;
    let mut pass = true;
    let sectors = jc::singular_sectors(p);

    let mut charts = Vec::with_capacity(2);
    for chart in ChartTag::BOTH {
        let singular_levels: Vec<usize> = sectors.singular_in(chart).map(|e| e.level).collect();
        let check = match jc::final_decompose(p, chart) {
            Ok(dec) => {
                let rec = jc::reconstruction_residual(&h, &dec, 2)?;
                let uni = dec.unitary.unitarity_residual(1)?;
                pass &= rec <= tol.reconstruction && uni <= tol.algebraic;
                QuantumChartCheck {
                    chart,
                    admissible: true,
                    reconstruction: Some(rec),
                    unitarity: Some(uni),
                    singular_levels,
                }
            }
            Err(HjcError::SingularSector { .. }) => {
                // only the ground level may carry a string
                pass &= singular_levels == [0];
                QuantumChartCheck {
                    chart,
                    admissible: false,
                    reconstruction: None,
                    unitarity: None,
                    singular_levels,
                }
            }
            Err(e) => return Err(e),
        };
        charts.push(check);
    }
    let inadmissible = charts.iter().filter(|c| !c.admissible).count();
    pass &= if p.theta == 0.0 {
        inadmissible == 2
    } else {
        inadmissible == 1
    };

    let eig = oracle::eig_hermitian(&h.flatten())?;
    let expected = expected_spectrum(p);
    let eigenvalue_deviation = eig
        .values
        .iter()
        .zip(&expected)
        .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
    pass &= eigenvalue_deviation <= tol.reconstruction;

    let proj = jc::projector_jc(p)?.operator;
    let idem = proj.idempotency_residual(1)?;
    let herm = proj.hermiticity_residual();
    let right = jc::projector_jc_with(p, NormalizerSide::Right)?.operator;
    let mut forms = proj.distance_on(&right, 1)?;
    for check in charts.iter().filter(|c| c.admissible) {
        forms = forms.max(jc::projector_from_chart(p, check.chart)?.distance_on(&proj, 1)?);
    }
    let (plus, minus) = jc::spectral_decompose(p)?;
    let spectral = plus.add(&minus)?.distance_on(&h, 2)?;
    let lambda = jc::spectral_weights(p)?;
    let comm = lambda.commutator(&proj)?.max_abs();
    pass &= idem <= tol.algebraic
        && herm <= tol.algebraic
        && forms <= tol.algebraic
        && spectral <= tol.reconstruction
        && comm <= tol.algebraic;

    Ok(JcRecord {
        theta: p.theta,
        dim: p.dim,
        charts,
        eigenvalue_deviation,
        projector_idempotency: idem,
        projector_hermiticity: herm,
        projector_chart_forms: forms,
        spectral_reconstruction: spectral,
        weight_commutator: comm,
        pass,
    })
}

pub fn cmd_jc(cfg: &RunConfig, tol: &Tolerances) -> Result<Report, CliError> {
    let d = dim_or(cfg, 32)?;
    let params: Vec<JCParams> = thetas(cfg, &DEFAULT_THETAS)
        .into_iter()
        .map(|t| JCParams::new(t, d))
        .collect::<Result<_, _>>()?;
    let records: Vec<JcRecord> = params.par_iter().map(|p| check_jc(p, tol)).collect::<Result<_, _>>()?;
    let pass = records.iter().all(|r| r.pass);
    Ok(match cfg.format {
        Format::Json => json_report(cfg, Command::Jc, tol, &records, pass),
        Format::Csv => {
            let mut body = csv_header(
                cfg,
                Command::Jc,
                pass,
                "theta,dim,chart_i_reconstruction,chart_ii_reconstruction,chart_i_unitarity,chart_ii_unitarity,eigenvalue_deviation,projector_idempotency,projector_chart_forms,spectral_reconstruction,weight_commutator,pass",
            );
            for r in &records {
                let _ = writeln!(
                    body,
                    "{},{},{},{},{},{},{},{},{},{},{},{}",
                    r.theta,
                    r.dim,
                    opt(r.charts[0].reconstruction),
                    opt(r.charts[1].reconstruction),
                    opt(r.charts[0].unitarity),
                    opt(r.charts[1].unitarity),
                    r.eigenvalue_deviation,
                    r.projector_idempotency,
                    r.projector_chart_forms,
                    r.spectral_reconstruction,
                    r.weight_commutator,
                    r.pass
                );
            }
            Report { pass, body }
        }
    })
}

// ---------------------------------------------------------------- strings

pub const DEFAULT_STRING_THETAS: [f64; 7] = [-1.0, -0.5, -0.1, 0.0, 0.1, 0.5, 1.0];

#[derive(Debug, Clone, Serialize)]
pub struct StringsRecord {
    pub theta: f64,
    pub dim: usize,
    pub degenerate: bool,
    pub singular: Vec<SingularJson>,
    pub lattice: Vec<jc::LatticeSite>,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SingularJson {
    pub chart: ChartTag,
    pub row: u8,
    pub level: usize,
    pub denominator: f64,
}

pub fn check_strings(p: &JCParams, lattice: usize) -> StringsRecord {
    let report = jc::singular_sectors(p);
    let pairs = report.singular_pairs();
    let expected: Vec<(ChartTag, usize)> = if p.theta > 0.0 {
        vec![(ChartTag::II, 0)]
    } else if p.theta < 0.0 {
        vec![(ChartTag::I, 0)]
    } else {
        vec![(ChartTag::I, 0), (ChartTag::II, 0)]
    };
    let sites = report.lattice(lattice);
    let lattice_ok = sites.iter().all(|s| {
        let on_axis = s.level_pair[0] == 0 || s.level_pair[1] == 0;
        (s.color == jc::SiteColor::Black) == on_axis
    });
    StringsRecord {
        theta: p.theta,
        dim: p.dim,
        degenerate: report.degenerate,
        singular: report
            .singular()
            .map(|e| SingularJson {
                chart: e.chart,
                row: e.row,
                level: e.level,
                denominator: e.denominator,
            })
            .collect(),
        lattice: sites,
        pass: pairs == expected && lattice_ok,
    }
}

pub fn cmd_strings(cfg: &RunConfig, tol: &Tolerances) -> Result<Report, CliError> {
    let d = dim_or(cfg, 16)?;
    if cfg.lattice == 0 {
        return Err(CliError::Usage("--lattice must be positive".into()));
    }
    let records: Vec<StringsRecord> = thetas(cfg, &DEFAULT_STRING_THETAS)
        .into_iter()
        .map(|t| JCParams::new(t, d).map(|p| check_strings(&p, cfg.lattice)))
        .collect::<Result<_, _>>()?;
    let pass = records.iter().all(|r| r.pass);
    Ok(match cfg.format {
        Format::Json => json_report(cfg, Command::Strings, tol, &records, pass),
        Format::Csv => {
            let mut body = csv_header(cfg, Command::Strings, pass, "theta,chart,row,level,denominator");
            for r in &records {
                for s in &r.singular {
                    let _ = writeln!(body, "{},{},{},{},{}", r.theta, s.chart, s.row, s.level, s.denominator);
                }
            }
            Report { pass, body }
        }
    })
}

// ---------------------------------------------------------------- evolve

#[derive(Debug, Clone, Serialize)]
pub struct EvolveRow {
    pub t: f64,
    pub closed_vs_oracle_residual: f64,
    pub unitarity: f64,
    pub inversion: f64,
}

pub fn time_grid(t_max: f64, steps: usize) -> Vec<f64> {
    match steps {
        0 => Vec::new(),
        1 => vec![0.0],
        n => (0..n).map(|k| t_max * k as f64 / (n - 1) as f64).collect(),
    }
}

/// Closed-form propagator against the oracle exponential at each time. With
/// `ω` and `Δ` present the full `e^{−itH}` is checked, otherwise `e^{−igtH_JC}`.
pub fn evolve_rows(p: &JCParams, times: &[f64], n0: usize) -> Result<Vec<EvolveRow>, HjcError> {
    let full = p.omega.is_some() && p.delta.is_some();
    let h = if full {
        jc::build_jc_hamiltonian(p)?
    } else {
        jc::build_h_jc(p)?.scale(p.g)
    };
    let eig = oracle::eig_hermitian(&h.flatten())?;
    let psi0 = jc::excited_state(p.dim, n0);
    times
        .par_iter()
        .map(|&t| {
            let closed = if full {
                jc::propagator_full(p, t)?
            } else {
                jc::propagator_closed_form(p, t)?
            };
            let exact = BlockOperator::from_flat(&oracle::expm_from_eigen(&eig, t))?;
            let residual = closed.distance_on(&exact, 2)?;
            let unitarity = closed.unitarity_residual(1)?;
            let psi = closed.apply(&psi0)?;
            Ok(EvolveRow {
                t,
                closed_vs_oracle_residual: residual,
                unitarity,
                inversion: jc::inversion(&psi),
            })
        })
        .collect()
}

pub fn cmd_evolve(cfg: &RunConfig, tol: &Tolerances) -> Result<Report, CliError> {
    let d = dim_or(cfg, 40)?;
    if cfg.t_steps == 0 || !cfg.t_max.is_finite() {
        return Err(CliError::Usage("need --t-steps ≥ 1 and a finite --t-max".into()));
    }
    if cfg.n0 + 2 >= d {
        return Err(CliError::Usage(format!(
            "--n0 {} must lie in the safe subspace of dim {d}",
            cfg.n0
        )));
    }
    let g = cfg.g.unwrap_or(1.0);
    let p = match (cfg.omega, cfg.delta) {
        (Some(o), Some(dl)) => {
            if cfg.theta.is_some() {
                return Err(CliError::Usage("--theta is derived from --omega/--delta/--g".into()));
            }
            JCParams::physical(o, dl, g, d)?
        }
        (None, None) => JCParams::new(cfg.theta.unwrap_or(0.25), d)?.with_g(g)?,
        _ => return Err(CliError::Usage("--omega and --delta must be given together".into())),
    };
    let rows = evolve_rows(&p, &time_grid(cfg.t_max, cfg.t_steps), cfg.n0)?;
    let pass = rows
        .iter()
        .all(|r| r.closed_vs_oracle_residual <= tol.propagator && r.unitarity <= tol.reconstruction);
    Ok(match cfg.format {
        Format::Json => json_report(cfg, Command::Evolve, tol, &rows, pass),
        Format::Csv => {
            let mut body = csv_header(cfg, Command::Evolve, pass, "t,closed_vs_oracle_residual,inversion");
            for r in &rows {
                let _ = writeln!(body, "{},{},{}", r.t, r.closed_vs_oracle_residual, r.inversion);
            }
            Report { pass, body }
        }
    })
}

// ---------------------------------------------------------------- grassmann

pub const DEFAULT_GRASSMANN_THETAS: [f64; 5] = [-0.5, 0.25, 0.5, 1.0, 2.0];

#[derive(Debug, Clone, Serialize)]
pub struct GrassmannRecord {
    pub theta: f64,
    pub dim: usize,
    pub two_form_residual: Option<f64>,
    pub roundtrip_residual: Option<f64>,
    pub singular_levels: Vec<usize>,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassicalSummary {
    pub samples: usize,
    pub max_residual: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
#[serde(untagged)]
pub enum GrassmannEntry {
    Quantum(GrassmannRecord),
    Classical(ClassicalSummary),
}

pub fn check_grassmann(p: &JCParams, tol: &Tolerances) -> Result<GrassmannRecord, HjcError> {
    let levels: Vec<usize> = (0..p.dim)
        .filter(|&n| p.radius_plus(n as f64) <= crate::tolerance::SINGULAR_EPS)
        .collect();
    match grassmann::local_coordinate(p) {
        Ok(z) => {
            let left = grassmann::coordinate_left_form(p)?;
            let two_form = left.sub(&z.z)?.max_abs();
            let oike = grassmann::oike_projector(&z)?;
            let direct = jc::projector_jc(p)?.operator;
            let rt = oike.distance_on(&direct, 1)?;
            Ok(GrassmannRecord {
                theta: p.theta,
                dim: p.dim,
                two_form_residual: Some(two_form),
                roundtrip_residual: Some(rt),
                pass: levels.is_empty() && two_form <= tol.shift && rt <= tol.reconstruction,
                singular_levels: levels,
            })
        }
        Err(HjcError::SingularSector { .. }) => Ok(GrassmannRecord {
            theta: p.theta,
            dim: p.dim,
            two_form_residual: None,
            roundtrip_residual: None,
            pass: levels == [0],
            singular_levels: levels,
        }),
        Err(e) => Err(e),
    }
}

/// Scalar coordinate against the C-projector on random off-string points (`r + z > 0.1`).
pub fn classical_roundtrip(rng: &mut impl Rng, samples: usize) -> Result<f64, HjcError> {
    let mut worst = 0.0f64;
    let mut taken = 0;
    while taken < samples {
        let p = random_point(rng, AlgebraTag::C);
        if p.r_plus_z() <= 0.1 {
            continue;
        }
        let (x, y) = (p.w().coeffs()[0], p.w().coeffs()[1]);
        let zc = grassmann::classical_coordinate(x, y, p.z())?;
        let res = grassmann::scalar_oike_projector(zc).distance(&berry::projector(&p)?)?;
        worst = worst.max(res);
        taken += 1;
    }
    Ok(worst)
}

pub fn cmd_grassmann(cfg: &RunConfig, tol: &Tolerances) -> Result<Report, CliError> {
    let d = dim_or(cfg, 24)?;
    let params: Vec<JCParams> = thetas(cfg, &DEFAULT_GRASSMANN_THETAS)
        .into_iter()
        .map(|t| JCParams::new(t, d))
        .collect::<Result<_, _>>()?;
    let records: Vec<GrassmannRecord> = params
        .par_iter()
        .map(|p| check_grassmann(p, tol))
        .collect::<Result<_, _>>()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed());
    let worst = classical_roundtrip(&mut rng, cfg.samples)?;
    let classical = ClassicalSummary {
        samples: cfg.samples,
        max_residual: worst,
        pass: worst <= tol.algebraic,
    };
    let pass = records.iter().all(|r| r.pass) && classical.pass;
    Ok(match cfg.format {
        Format::Json => {
            let mut entries: Vec<GrassmannEntry> = records.into_iter().map(GrassmannEntry::Quantum).collect();
            entries.push(GrassmannEntry::Classical(classical));
            json_report(cfg, Command::Grassmann, tol, &entries, pass)
        }
        Format::Csv => {
            let mut body = csv_header(
                cfg,
                Command::Grassmann,
                pass,
                "theta,dim,two_form_residual,roundtrip_residual,singular_levels,pass",
            );
            for r in &records {
                let levels = r
                    .singular_levels
                    .iter()
                    .map(usize::to_string)
                    .collect::<Vec<_>>()
                    .join(";");
                let _ = writeln!(
                    body,
                    "{},{},{},{},{},{}",
                    r.theta,
                    r.dim,
                    opt(r.two_form_residual),
                    opt(r.roundtrip_residual),
                    levels,
                    r.pass
                );
            }
            let _ = writeln!(
                body,
                "# classical samples={} max_residual={}",
                classical.samples, classical.max_residual
            );
            Report { pass, body }
        }
    })
}
