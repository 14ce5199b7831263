//! The Jaynes–Cummings Hamiltonian as a non-commutative Berry model.
//!
//! `H_JC = [[θ, a], [a†, −θ]]` on `C² ⊗ F` plays the role of the classical
//! `[[z, w̄], [w, −z]]` with `a ↔ x − iy`, `a† ↔ x + iy`, `θ ↔ z`. Writing
//! `R(N) = √(N + θ²)`, the two chart factorizations are
//!
//! ```text
//! H_JC = V_I  diag(R(N+1), −R(N))   V_I†
//!      = V_II diag(R(N),   −R(N+1)) V_II†
//! ```
//!
//! Every denominator is `2R(n)(R(n) ± θ)` at some level `n`. Only the ground
//! level can make one vanish, which is the quantum counterpart of the Dirac
//! string: chart II fails there for `θ > 0`, chart I for `θ < 0`.
//!
//! All quantities that the truncation at `|d−1⟩` disturbs are only claimed on
//! a safe subspace; see [`crate::fock::SafeSubspace`].

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::berry::{ChartDecomposition, ChartTag};
use crate::block::BlockOperator;
use crate::error::{HjcError, Result};
use crate::fock::{
    annihilation, creation, func_of_number, levels, normalized_annihilation, normalized_creation, FockOperator, MIN_DIM,
};
use crate::tolerance::{ILL_CONDITIONED, SINGULAR_EPS};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JCParams {
    /// Detuning ratio `(Δ − ω)/(2g)`.
    pub theta: f64,
    /// Coupling constant.
    pub g: f64,
    /// Field frequency.
    pub omega: Option<f64>,
    /// Atomic level splitting.
    pub delta: Option<f64>,
    /// Fock truncation.
    pub dim: usize,
}

impl JCParams {
    /// Reduced model with `g = 1`.
    pub fn new(theta: f64, dim: usize) -> Result<Self> {
        let p = Self {
            theta,
            g: 1.0,
            omega: None,
            delta: None,
            dim,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn with_g(mut self, g: f64) -> Result<Self> {
        self.g = g;
        self.validate()?;
        Ok(self)
    }

    /// Full model; `θ` is derived from `ω`, `Δ` and `g`.
    pub fn physical(omega: f64, delta: f64, g: f64, dim: usize) -> Result<Self> {
        if g == 0.0 {
            return Err(HjcError::Params("g = 0 leaves θ = (Δ − ω)/2g undefined".into()));
        }
        let p = Self {
            theta: (delta - omega) / (2.0 * g),
            g,
            omega: Some(omega),
            delta: Some(delta),
            dim,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim < MIN_DIM {
            return Err(HjcError::Dimension(self.dim, MIN_DIM));
        }
        let finite = [Some(self.theta), Some(self.g), self.omega, self.delta]
            .into_iter()
            .flatten()
            .all(f64::is_finite);
        if !finite {
            return Err(HjcError::Params("non-finite parameter".into()));
        }
        if let (Some(omega), Some(delta)) = (self.omega, self.delta) {
            if self.g == 0.0 {
                return Err(HjcError::Params("g = 0 leaves θ undefined".into()));
            }
            let expected = (delta - omega) / (2.0 * self.g);
            if (expected - self.theta).abs() > 1e-12 * (1.0 + expected.abs()) {
                return Err(HjcError::Params(format!(
                    "θ = {} inconsistent with (Δ − ω)/2g = {}",
                    self.theta, expected
                )));
            }
        }
        Ok(())
    }

    /// `R(n) = √(n + θ²)`.
    pub fn radius(&self, n: f64) -> f64 {
        (n + self.theta * self.theta).sqrt()
    }

    /// `R(n) + θ` without cancellation.
    pub fn radius_plus(&self, n: f64) -> f64 {
        let r = self.radius(n);
        if self.theta >= 0.0 {
            r + self.theta
        } else {
            n / (r - self.theta)
        }
    }

    /// `R(n) − θ` without cancellation.
    pub fn radius_minus(&self, n: f64) -> f64 {
        let r = self.radius(n);
        if self.theta <= 0.0 {
            r - self.theta
        } else {
            n / (r + self.theta)
        }
    }

    /// `R(n) ± θ` for the sign attached to `chart` (I: +, II: −).
    fn radius_shift(&self, chart: ChartTag, n: f64) -> f64 {
        match chart {
            ChartTag::I => self.radius_plus(n),
            ChartTag::II => self.radius_minus(n),
        }
    }

    fn radius_levels(&self, shift: f64) -> Vec<f64> {
        levels(self.dim, shift, |n| self.radius(n))
    }
}

/// `[[θ, a], [a†, −θ]]`.
pub fn build_h_jc(p: &JCParams) -> Result<BlockOperator> {
    p.validate()?;
    let d = p.dim;
    BlockOperator::from_parts(
        FockOperator::identity(d).scale(p.theta),
        annihilation(d)?,
        creation(d)?,
        FockOperator::identity(d).scale(-p.theta),
    )
}

/// `H = ω 1₂⊗a†a + (Δ/2) σ₃⊗1 + g(σ₊⊗a + σ₋⊗a†)`, assembled directly.
pub fn build_jc_hamiltonian(p: &JCParams) -> Result<BlockOperator> {
    let (omega, delta) = physical_parts(p)?;
    let d = p.dim;
    let n = func_of_number(d, |k| omega * k)?;
    BlockOperator::from_parts(
        n.add(&FockOperator::identity(d).scale(delta / 2.0))?,
        annihilation(d)?.scale(p.g),
        creation(d)?.scale(p.g),
        n.sub(&FockOperator::identity(d).scale(delta / 2.0))?,
    )
}

fn physical_parts(p: &JCParams) -> Result<(f64, f64)> {
    p.validate()?;
    match (p.omega, p.delta) {
        (Some(o), Some(d)) if p.g != 0.0 => Ok((o, d)),
        (Some(_), Some(_)) => Err(HjcError::Params("g = 0 leaves θ undefined".into())),
        _ => Err(HjcError::Params("ω and Δ are required for the full Hamiltonian".into())),
    }
}

/// `H = H₁ + H₂` with `H₁ = ω 1₂⊗N + (ω/2) σ₃⊗1` and `H₂ = g H_JC`.
pub fn build_full_hamiltonian(p: &JCParams) -> Result<(BlockOperator, BlockOperator)> {
    let (omega, _) = physical_parts(p)?;
    let d = p.dim;
    let h1 = BlockOperator::diag(
        func_of_number(d, |k| omega * k + omega / 2.0)?,
        func_of_number(d, |k| omega * k - omega / 2.0)?,
    )?;
    let h2 = build_h_jc(p)?.scale(p.g);
    Ok((h1, h2))
}

/// `H_JC = L M L†` with `L = diag(1, a†(1/√(N+1)))` and
/// `M = [[θ, √(N+1)], [√(N+1), −θ]]`.
pub fn two_step_factorize(p: &JCParams) -> Result<(BlockOperator, BlockOperator, BlockOperator)> {
    p.validate()?;
    let d = p.dim;
    let l = BlockOperator::diag(FockOperator::identity(d), normalized_creation(d)?)?;
    let sqrt_n1 = func_of_number(d, |n| (n + 1.0).sqrt())?;
    let m = BlockOperator::from_parts(
        FockOperator::identity(d).scale(p.theta),
        sqrt_n1.clone(),
        sqrt_n1,
        FockOperator::identity(d).scale(-p.theta),
    )?;
    let ldag = BlockOperator::diag(FockOperator::identity(d), normalized_annihilation(d)?)?;
    Ok((l, m, ldag))
}

/// Diagonalizing unitary of the middle matrix, with `N + 1` in place of `‖w‖²`.
pub fn middle_unitaries(p: &JCParams, chart: ChartTag) -> Result<BlockOperator> {
    p.validate()?;
    let d = p.dim;
    let r1 = p.radius_levels(1.0);
    let shifted: Vec<f64> = levels(d, 1.0, |n| p.radius_shift(chart, n));
    let sqrt_n1 = levels(d, 1.0, f64::sqrt);
    let denoms: Vec<f64> = r1.iter().zip(&shifted).map(|(r, s)| 2.0 * r * s).collect();

    let entries: Vec<SectorEntry> = denoms
        .iter()
        .enumerate()
        .map(|(n, &den)| SectorEntry::new(chart, 1, n, den))
        .collect();
    if entries.iter().any(|e| e.singular) {
        let report = SectorReport::from_entries(p.theta, p.dim, entries);
        return Err(singular_error(chart, report));
    }

    let norm: Vec<f64> = denoms.iter().map(|den| 1.0 / den.sqrt()).collect();
    let diag = |v: &[f64]| FockOperator::from_diagonal(v);
    let neg = |v: &[f64]| v.iter().map(|x| -x).collect::<Vec<_>>();
    let (tl, tr, bl, br) = match chart {
        ChartTag::I => (diag(&shifted), diag(&neg(&sqrt_n1)), diag(&sqrt_n1), diag(&shifted)),
        ChartTag::II => (diag(&sqrt_n1), diag(&neg(&shifted)), diag(&shifted), diag(&sqrt_n1)),
    };
    BlockOperator::from_parts(
        tl.left_diag_mul(&norm),
        tr.left_diag_mul(&norm),
        bl.left_diag_mul(&norm),
        br.left_diag_mul(&norm),
    )
}

/// `diag(R(N+1), −R(N+1))`.
pub fn middle_eigenvalues(p: &JCParams) -> Result<BlockOperator> {
    let r1 = p.radius_levels(1.0);
    BlockOperator::diag(FockOperator::from_diagonal(&r1), FockOperator::from_diagonal(&r1).neg())
}

/// Which side of the matrix factor the diagonal normalizer is applied on.
/// Both orderings give the same operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormalizerSide {
    Left,
    Right,
}

/// Per-level normalizers `1/√(2R(n+s)(R(n+s) ± θ))` for the upper
/// (`s = 1`) and lower (`s = 0`) rows, zero where the denominator is singular.
fn row_normalizers(p: &JCParams, chart: ChartTag) -> (Vec<f64>, Vec<f64>) {
    let f = |shift: f64| -> Vec<f64> {
        levels(p.dim, shift, |n| {
            let den = 2.0 * p.radius(n) * p.radius_shift(chart, n);
            if den > SINGULAR_EPS {
                1.0 / den.sqrt()
            } else {
                0.0
            }
        })
    };
    (f(1.0), f(0.0))
}

/// `V_χ` with the pseudo-inverse convention on singular levels (a vanishing
/// denominator contributes a zero normalizer). Never fails on singular
/// sectors; use [`build_v`] for the checked version.
pub fn build_v_regularized(p: &JCParams, chart: ChartTag, side: NormalizerSide) -> Result<BlockOperator> {
    p.validate()?;
    let d = p.dim;
    let a = annihilation(d)?;
    let ad = creation(d)?;
    let (upper, lower) = row_normalizers(p, chart);
    let shift1 = levels(d, 1.0, |n| p.radius_shift(chart, n));
    let shift0 = levels(d, 0.0, |n| p.radius_shift(chart, n));
    let diag = |v: &[f64]| FockOperator::from_diagonal(v);

    // Matrix factor X and the normalizer placement for each chart.
    let (x, left_norm, right_norm) = match chart {
        // [[R(N+1)+θ, −a], [a†, R(N)+θ]]
        ChartTag::I => (
            [[diag(&shift1), a.neg()], [ad, diag(&shift0)]],
            (upper.clone(), lower.clone()),
            (upper, lower),
        ),
        // [[a, −(R(N+1)−θ)], [R(N)−θ, a†]]
        ChartTag::II => (
            [[a, diag(&shift1).neg()], [diag(&shift0), ad]],
            (upper.clone(), lower.clone()),
            (lower, upper),
        ),
    };
    let [[x00, x01], [x10, x11]] = x;
    match side {
        NormalizerSide::Left => BlockOperator::from_parts(
            x00.left_diag_mul(&left_norm.0),
            x01.left_diag_mul(&left_norm.0),
            x10.left_diag_mul(&left_norm.1),
            x11.left_diag_mul(&left_norm.1),
        ),
        NormalizerSide::Right => BlockOperator::from_parts(
            x00.right_diag_mul(&right_norm.0),
            x01.right_diag_mul(&right_norm.1),
            x10.right_diag_mul(&right_norm.0),
            x11.right_diag_mul(&right_norm.1),
        ),
    }
}

/// `V_I` or `V_II`. Fails with the sector report when the chart has a
/// vanishing denominator at some level.
pub fn build_v(p: &JCParams, chart: ChartTag) -> Result<BlockOperator> {
    check_chart(p, chart)?;
    build_v_regularized(p, chart, NormalizerSide::Left)
}

fn check_chart(p: &JCParams, chart: ChartTag) -> Result<()> {
    p.validate()?;
    let report = singular_sectors(p);
    if report.singular_in(chart).next().is_some() {
        return Err(singular_error(chart, report));
    }
    Ok(())
}

fn singular_error(chart: ChartTag, report: SectorReport) -> HjcError {
    let summary = report
        .singular_in(chart)
        .map(|e| format!("row {} level {}", e.row, e.level))
        .collect::<Vec<_>>()
        .join(", ");
    HjcError::SingularSector {
        chart,
        report_summary: summary,
        report: Box::new(report),
    }
}

/// Eigenvalue blocks: `diag(R(N+1), −R(N))` for chart I, `diag(R(N), −R(N+1))` for chart II.
pub fn chart_eigenvalues(p: &JCParams, chart: ChartTag) -> Result<BlockOperator> {
    let r1 = FockOperator::from_diagonal(&p.radius_levels(1.0));
    let r0 = FockOperator::from_diagonal(&p.radius_levels(0.0));
    match chart {
        ChartTag::I => BlockOperator::diag(r1, r0.neg()),
        ChartTag::II => BlockOperator::diag(r0, r1.neg()),
    }
}

pub fn final_decompose(p: &JCParams, chart: ChartTag) -> Result<ChartDecomposition<BlockOperator>> {
    let unitary = build_v(p, chart)?;
    let (upper, lower) = row_normalizers(p, chart);
    let conditioning = upper.iter().chain(&lower).fold(0.0f64, |m, &x| m.max(x));
    Ok(ChartDecomposition {
        unitary,
        diagonal: chart_eigenvalues(p, chart)?,
        chart,
        conditioning,
    })
}

/// `‖H − U D U†‖_max` on `SafeSubspace(d, margin)`.
pub fn reconstruction_residual(
    h: &BlockOperator,
    dec: &ChartDecomposition<BlockOperator>,
    margin: usize,
) -> Result<f64> {
    let rebuilt = dec.unitary.mul(&dec.diagonal)?.mul(&dec.unitary.adjoint())?;
    h.distance_on(&rebuilt, margin)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SectorEntry {
    pub chart: ChartTag,
    /// 1: upper row (uses `R(N+1)`), 2: lower row (uses `R(N)`).
    pub row: u8,
    pub level: usize,
    /// `2R(m)(R(m) ± θ)` with `m = level + 1` for row 1 and `m = level` for row 2.
    pub denominator: f64,
    pub singular: bool,
    pub ill_conditioned: bool,
}

impl SectorEntry {
    fn new(chart: ChartTag, row: u8, level: usize, denominator: f64) -> Self {
        let singular = denominator <= SINGULAR_EPS;
        Self {
            chart,
            row,
            level,
            denominator,
            singular,
            ill_conditioned: !singular && denominator < ILL_CONDITIONED,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SiteColor {
    Black,
    White,
}

/// One basis state `|m⟩ × |n⟩` of `F × F`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeSite {
    pub level_pair: [usize; 2],
    pub color: SiteColor,
}

/// Chart denominators at every level, with singular flags.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SectorReport {
    pub theta: f64,
    pub dim: usize,
    /// `θ = 0`: both charts lose the ground level.
    pub degenerate: bool,
    pub entries: Vec<SectorEntry>,
}

impl SectorReport {
    fn from_entries(theta: f64, dim: usize, entries: Vec<SectorEntry>) -> Self {
        Self {
            theta,
            dim,
            degenerate: theta == 0.0,
            entries,
        }
    }

    pub fn singular(&self) -> impl Iterator<Item = &SectorEntry> {
        self.entries.iter().filter(|e| e.singular)
    }

    pub fn singular_in(&self, chart: ChartTag) -> impl Iterator<Item = &SectorEntry> {
        self.singular().filter(move |e| e.chart == chart)
    }

    /// Distinct `(chart, level)` pairs with a vanishing denominator.
    pub fn singular_pairs(&self) -> Vec<(ChartTag, usize)> {
        let mut v: Vec<(ChartTag, usize)> = self.singular().map(|e| (e.chart, e.level)).collect();
        v.sort_by_key(|&(c, l)| (c as u8, l));
        v.dedup();
        v
    }

    /// Levels that carry a string in some chart.
    pub fn singular_levels(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.singular().map(|e| e.level).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// The `F × F` lattice of basis states `|m⟩ × |n⟩`, `m, n < size`: a site
    /// is black when either factor sits on a singular level.
    pub fn lattice(&self, size: usize) -> Vec<LatticeSite> {
        let bad = self.singular_levels();
        let mut sites = Vec::with_capacity(size * size);
        for m in 0..size {
            for n in 0..size {
                let color = if bad.contains(&m) || bad.contains(&n) {
                    SiteColor::Black
                } else {
                    SiteColor::White
                };
                sites.push(LatticeSite {
                    level_pair: [m, n],
                    color,
                });
            }
        }
        sites
    }
}

pub fn singular_sectors(p: &JCParams) -> SectorReport {
    let mut entries = Vec::with_capacity(4 * p.dim);
    for chart in ChartTag::BOTH {
        for (row, shift) in [(1u8, 1.0), (2u8, 0.0)] {
            for n in 0..p.dim {
                let m = n as f64 + shift;
                let den = 2.0 * p.radius(m) * p.radius_shift(chart, m);
                entries.push(SectorEntry::new(chart, row, n, den));
            }
        }
    }
    SectorReport::from_entries(p.theta, p.dim, entries)
}

/// `Φ_JC = diag((1/√(N+1)) a, a† (1/√(N+1)))`.
pub fn transition_operator(d: usize) -> Result<BlockOperator> {
    BlockOperator::diag(normalized_annihilation(d)?, normalized_creation(d)?)
}

/// `Φ_JC = diag(a (1/√N), (1/√N) a†)` with the pseudo-inverse on the kernel of `N`.
pub fn transition_operator_pseudo(d: usize) -> Result<BlockOperator> {
    let sqrt_n = levels(d, 0.0, f64::sqrt);
    BlockOperator::diag(
        annihilation(d)?.right_diag_div(&sqrt_n),
        creation(d)?.left_diag_div(&sqrt_n),
    )
}

#[derive(Debug, Clone, PartialEq)]
pub struct JcProjector {
    pub operator: BlockOperator,
    /// Levels where `1/(2R(n))` was replaced by zero (only `n = 0` at `θ = 0`).
    pub pseudo_inverse_levels: Vec<usize>,
}

/// `P_JC = diag(1/(2R(N+1)), 1/(2R(N))) [[R(N+1)+θ, a], [a†, R(N)−θ]]`.
pub fn projector_jc(p: &JCParams) -> Result<JcProjector> {
    projector_jc_with(p, NormalizerSide::Left)
}

pub fn projector_jc_with(p: &JCParams, side: NormalizerSide) -> Result<JcProjector> {
    p.validate()?;
    let d = p.dim;
    let two_r1: Vec<f64> = p.radius_levels(1.0).iter().map(|r| 2.0 * r).collect();
    let two_r0: Vec<f64> = p.radius_levels(0.0).iter().map(|r| 2.0 * r).collect();
    let pseudo_inverse_levels = two_r0
        .iter()
        .enumerate()
        .filter(|(_, &x)| x <= SINGULAR_EPS)
        .map(|(n, _)| n)
        .collect();

    let tl = FockOperator::from_diagonal(&levels(d, 1.0, |n| p.radius_plus(n)));
    let br = FockOperator::from_diagonal(&levels(d, 0.0, |n| p.radius_minus(n)));
    let a = annihilation(d)?;
    let ad = creation(d)?;
    let operator = match side {
        NormalizerSide::Left => BlockOperator::from_parts(
            tl.left_diag_div(&two_r1),
            a.left_diag_div(&two_r1),
            ad.left_diag_div(&two_r0),
            br.left_diag_div(&two_r0),
        )?,
        NormalizerSide::Right => BlockOperator::from_parts(
            tl.right_diag_div(&two_r1),
            a.right_diag_div(&two_r0),
            ad.right_diag_div(&two_r1),
            br.right_diag_div(&two_r0),
        )?,
    };
    Ok(JcProjector {
        operator,
        pseudo_inverse_levels,
    })
}

/// `V_χ diag(1, 0) V_χ†`, using the regularized `V_χ`.
pub fn projector_from_chart(p: &JCParams, chart: ChartTag) -> Result<BlockOperator> {
    let v = build_v_regularized(p, chart, NormalizerSide::Left)?;
    v.mul(&BlockOperator::basic_projector(p.dim))?.mul(&v.adjoint())
}

/// `Λ = diag(R(N+1), R(N))`.
pub fn spectral_weights(p: &JCParams) -> Result<BlockOperator> {
    BlockOperator::diag(
        FockOperator::from_diagonal(&p.radius_levels(1.0)),
        FockOperator::from_diagonal(&p.radius_levels(0.0)),
    )
}

/// `(Λ P_JC, −Λ (1 − P_JC))`; their sum is `H_JC`.
pub fn spectral_decompose(p: &JCParams) -> Result<(BlockOperator, BlockOperator)> {
    let proj = projector_jc(p)?.operator;
    let lambda = spectral_weights(p)?;
    let plus = lambda.mul(&proj)?;
    let complement = BlockOperator::identity(p.dim).sub(&proj)?;
    let minus = lambda.mul(&complement)?.scale(-1.0);
    Ok((plus, minus))
}

/// `sin(τR)/R`, with the limit `τ` at `R = 0`.
fn sinc_scaled(tau: f64, r: f64) -> f64 {
    if r <= SINGULAR_EPS {
        tau
    } else {
        (tau * r).sin() / r
    }
}

/// `e^{−igtH_JC}` in closed form.
pub fn propagator_closed_form(p: &JCParams, t: f64) -> Result<BlockOperator> {
    p.validate()?;
    let d = p.dim;
    let tau = p.g * t;
    let i = Complex64::new(0.0, 1.0);
    let r1 = p.radius_levels(1.0);
    let r0 = p.radius_levels(0.0);
    let s1: Vec<f64> = r1.iter().map(|&r| sinc_scaled(tau, r)).collect();
    let s0: Vec<f64> = r0.iter().map(|&r| sinc_scaled(tau, r)).collect();

    let diag_c = |vals: Vec<Complex64>| {
        let mut m = crate::fock::CMatrix::zeros(d, d);
        for (k, v) in vals.into_iter().enumerate() {
            m[(k, k)] = v;
        }
        FockOperator::from_matrix(m)
    };
    let tl = diag_c(
        r1.iter()
            .zip(&s1)
            .map(|(&r, &s)| Complex64::new((tau * r).cos(), 0.0) - i * p.theta * s)
            .collect(),
    );
    let br = diag_c(
        r0.iter()
            .zip(&s0)
            .map(|(&r, &s)| Complex64::new((tau * r).cos(), 0.0) + i * p.theta * s)
            .collect(),
    );
    let tr = annihilation(d)?.left_diag_mul(&s1).scale_complex(-i);
    let bl = creation(d)?.left_diag_mul(&s0).scale_complex(-i);
    BlockOperator::from_parts(tl, tr, bl, br)
}

/// `e^{−itH} = e^{−itH₁} e^{−igtH_JC}`.
pub fn propagator_full(p: &JCParams, t: f64) -> Result<BlockOperator> {
    let (omega, _) = physical_parts(p)?;
    let d = p.dim;
    let phase = |shift: f64| -> FockOperator {
        let mut m = crate::fock::CMatrix::zeros(d, d);
        for k in 0..d {
            m[(k, k)] = Complex64::from_polar(1.0, -t * (omega * k as f64 + shift));
        }
        FockOperator::from_matrix(m)
    };
    let free = BlockOperator::diag(phase(omega / 2.0), phase(-omega / 2.0))?;
    free.mul(&propagator_closed_form(p, t)?)
}

/// Basis vector `|e, n⟩` (atom-major ordering).
pub fn excited_state(d: usize, n: usize) -> Vec<Complex64> {
    let mut v = vec![Complex64::new(0.0, 0.0); 2 * d];
    v[n] = Complex64::new(1.0, 0.0);
    v
}

/// `⟨σ₃⟩` of a state in atom-major ordering.
pub fn inversion(state: &[Complex64]) -> f64 {
    let d = state.len() / 2;
    let up: f64 = state[..d].iter().map(|z| z.norm_sqr()).sum();
    let down: f64 = state[d..].iter().map(|z| z.norm_sqr()).sum();
    up - down
}
