//! The `spectrum` campaign: Galerkin eigenvalues of the Finslerian sphere
//! Laplacian against their quartic-order perturbative values.

use std::time::Instant;

use finsler_core::spectral::{perturbative_eigenvalue, solve_block, SpectralBlock};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::SuiteConfig;
use crate::error::Result;
use crate::report::{CheckRecord, Expectation, VerificationReport};

/// Frozen CSV column order.
pub const SPECTRUM_COLUMNS: [&str; 6] = [
    "epsilon",
    "m",
    "l_label",
    "lambda_numeric",
    "lambda_perturbative",
    "abs_diff",
];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumRow {
    pub epsilon: f64,
    pub m: i32,
    /// Degree of the harmonic the eigenvector continues from.
    pub l_label: usize,
    pub lambda_numeric: f64,
    pub lambda_perturbative: f64,
    pub abs_diff: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EpsilonSummary {
    pub epsilon: f64,
    pub modes: usize,
    pub max_abs_diff: f64,
    /// `max_abs_diff / eps^4`, absent at `eps = 0`.
    pub scaled_diff: Option<f64>,
    /// `max_abs_diff(eps) / max_abs_diff(eps / 2)` when both were run.
    pub halving_ratio: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumArtifact {
    pub report: VerificationReport,
    pub summary: Vec<EpsilonSummary>,
    pub rows: Vec<SpectrumRow>,
}

impl SpectrumArtifact {
    pub fn to_csv(&self) -> String {
        let mut out = SPECTRUM_COLUMNS.join(",");
        out.push('\n');
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                r.epsilon, r.m, r.l_label, r.lambda_numeric, r.lambda_perturbative, r.abs_diff
            ));
        }
        out
    }
}

/// Off-band coefficient mass: everything outside degrees `l` and `l +- 2`.
fn off_band_mass(block: &SpectralBlock) -> f64 {
    let lo = block.m.unsigned_abs() as usize;
    block
        .eigenpairs
        .iter()
        .map(|p| {
            p.coefficients
                .iter()
                .enumerate()
                .filter(|(i, _)| {
                    let l = lo + i;
                    l != p.l && l + 2 != p.l && l != p.l + 2
                })
                .map(|(_, c)| c * c)
                .sum::<f64>()
                .sqrt()
        })
        .fold(0.0, f64::max)
}

fn same(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * a.abs().max(b.abs())
}

pub fn run_spectrum(config: &SuiteConfig) -> Result<SpectrumArtifact> {
    let start = Instant::now();
    config.validate()?;
    let s = &config.spectral;
    let jobs: Vec<(f64, i32)> = s
        .epsilons
        .iter()
        .flat_map(|&e| (s.m_range[0]..=s.m_range[1]).map(move |m| (e, m)))
        .collect();
    let blocks: Vec<(f64, i32, finsler_core::Result<SpectralBlock>)> = jobs
        .par_iter()
        .map(|&(e, m)| (e, m, solve_block(e, m, s.l_max)))
        .collect();

    let mut rows = Vec::new();
    let mut complex = Vec::new();
    let mut mass = Vec::new();
    let mut diagonal = Vec::new();
    for (eps, m, block) in &blocks {
        let block = match block {
            Ok(b) => b,
            Err(e) => {
                complex.push(Err(format!("eps {eps}, m {m}: {e}")));
                continue;
            }
        };
        complex.push(Ok(block.eigenpairs.iter().filter(|p| p.complex).count() as f64));
        for p in &block.eigenpairs {
            let pert = perturbative_eigenvalue(p.l, *m, *eps);
            rows.push(SpectrumRow {
                epsilon: *eps,
                m: *m,
                l_label: p.l,
                lambda_numeric: p.lambda,
                lambda_perturbative: pert,
                abs_diff: (p.lambda - pert).abs(),
            });
        }
        if *eps > 0.0 {
            mass.push(Ok::<f64, String>(off_band_mass(block) / eps.powi(4)));
        } else {
            let worst = rows
                .iter()
                .filter(|r| r.epsilon == 0.0 && r.m == *m)
                .map(|r| r.abs_diff)
                .fold(0.0, f64::max);
            diagonal.push(Ok::<f64, String>(worst));
        }
    }

    let mut summary: Vec<EpsilonSummary> = s
        .epsilons
        .iter()
        .map(|&e| {
            let diffs: Vec<f64> = rows.iter().filter(|r| r.epsilon == e).map(|r| r.abs_diff).collect();
            let max = diffs.iter().copied().fold(0.0, f64::max);
            EpsilonSummary {
                epsilon: e,
                modes: diffs.len(),
                max_abs_diff: max,
                scaled_diff: (e > 0.0).then(|| max / e.powi(4)),
                halving_ratio: None,
            }
        })
        .collect();
    let maxima: Vec<(f64, f64)> = summary.iter().map(|x| (x.epsilon, x.max_abs_diff)).collect();
    for entry in &mut summary {
        entry.halving_ratio = maxima
            .iter()
            .find(|(e, _)| *e > 0.0 && same(2.0 * e, entry.epsilon))
            .map(|(_, d)| entry.max_abs_diff / d);
    }

    let mut checks = vec![CheckRecord::from_residuals(
        "real_spectrum",
        Expectation::AtMost,
        0.0,
        complex,
    )];
    if !mass.is_empty() {
        checks.push(CheckRecord::from_residuals(
            "off_band_mass",
            Expectation::AtMost,
            config.tolerance("off_band_mass"),
            mass,
        ));
    }
    if !diagonal.is_empty() {
        checks.push(CheckRecord::from_residuals(
            "riemannian_diagonal",
            Expectation::AtMost,
            config.tolerance("riemannian_diagonal"),
            diagonal,
        ));
    }
    let ratios: Vec<std::result::Result<f64, String>> = summary
        .iter()
        .filter_map(|x| x.halving_ratio)
        .map(|r| Ok((r - 16.0).abs()))
        .collect();
    if !ratios.is_empty() {
        checks.push(
            CheckRecord::from_residuals("quartic_ratio", Expectation::AtMost, config.tolerance("quartic_ratio"), ratios)
                .with_note("residual is |ratio - 16|"),
        );
    }
    if config.tolerances.contains_key("spectrum_c") {
        let scaled = summary
            .iter()
            .filter_map(|x| x.scaled_diff)
            .map(Ok::<f64, String>)
            .collect();
        checks.push(CheckRecord::from_residuals(
            "spectrum_c",
            Expectation::AtMost,
            config.tolerance("spectrum_c"),
            scaled,
        ));
    }

    Ok(SpectrumArtifact {
        report: VerificationReport::new("spectrum", checks, config, start.elapsed().as_secs_f64()),
        summary,
        rows,
    })
}
