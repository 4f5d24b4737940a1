use std::fmt::Write as _;
use std::num::NonZeroUsize;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::document::{
    dmatrix_rows, matrix2_rows, table_from_records, table_records, InputDocument, OutputDocument,
    ReconstructionSummary, SweepDeviations, SweepReport, WSample,
};
use super::state::StateSpec;
use super::{CliError, ReconstructMode};
use crate::error::SpinError;
use crate::general::quadrature::{gauss_legendre_thetas, uniform_angles};
use crate::general::{
    build_quadrature, reconstruct_with, tomogram_of, DensityMatrixJ, HalfInteger, QuadratureGrid, ReconstructOptions,
    DEFAULT_OVERSAMPLE,
};
use crate::quasiprob::{check_admissibility, density_from_p_with_tol, marginals, p_from_density, p_oracle};
use crate::radon::{compare_table_with_triple, p_from_w_unchecked, verify_radon_consistency};
use crate::spin::{density_from_bloch, validate_density, BlochVector, DensityMatrix};
use crate::tomography::{
    density_from_w_axes, density_from_w_axes_with_tol, w_from_bloch, w_value, AxisTriple, Direction, EulerAngles,
};

/// Where `w` is evaluated.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum WRequest {
    Single { theta: f64, phi: f64, psi: f64 },
    Grid(usize),
}

fn fail(doc: &mut OutputDocument, err: &SpinError) {
    doc.passed = false;
    doc.errors.push(err.to_string());
    if let SpinError::InvalidDensity(report) | SpinError::NonphysicalTriple { report: Some(report), .. } = err {
        doc.validation = Some(report.clone());
    }
}

/// Resolves the state, recording a physicality failure in the document.
fn resolve_state(doc: &mut OutputDocument, spec: &StateSpec, tol: f64) -> Option<DensityMatrix> {
    doc.state = Some(spec.clone());
    match spec.density(tol) {
        Ok(rho) => {
            doc.rho = Some(matrix2_rows(rho.matrix()));
            Some(rho)
        }
        Err(e) => {
            fail(doc, &e);
            None
        }
    }
}

pub fn cmd_p_table(spec: &StateSpec, tol: f64) -> OutputDocument {
    let mut doc = OutputDocument::new("p-table", tol);
    if let Some(rho) = resolve_state(&mut doc, spec, tol) {
        let t = p_from_density(&rho);
        let report = check_admissibility(&t, tol);
        doc.errors.extend(report.violations());
        doc.passed = report.passed;
        doc.p_table = Some(table_records(&t));
        doc.marginals = Some(marginals(&t));
        doc.admissibility = Some(report);
    }
    doc
}

pub fn cmd_w(spec: &StateSpec, request: &WRequest, tol: f64) -> Result<OutputDocument, CliError> {
    let mut nodes = Vec::new();
    match *request {
        WRequest::Single { theta, phi, psi } => {
            if !(theta.is_finite() && phi.is_finite() && psi.is_finite()) {
                return Err(CliError::Usage("angles must be finite".into()));
            }
            nodes.push((theta, phi, psi));
        }
        WRequest::Grid(n) => {
            let n_theta = NonZeroUsize::new(n).ok_or_else(|| CliError::Usage("--grid must be at least 1".into()))?;
            let phis = uniform_angles(n);
            for (theta, _) in gauss_legendre_thetas(n_theta) {
                nodes.extend(phis.iter().map(|&phi| (theta, phi, 0.0)));
            }
        }
    }
    let mut doc = OutputDocument::new("w", tol);
    if let Some(rho) = resolve_state(&mut doc, spec, tol) {
        let samples = nodes
            .into_iter()
            .map(|(theta, phi, psi)| {
                let t = w_value(&rho, EulerAngles::new(phi, theta, psi));
                WSample { theta, phi, w_plus: t.w_plus(), w_minus: t.w_minus() }
            })
            .collect();
        doc.w_samples = Some(samples);
    }
    Ok(doc)
}

/// CSV rendering of tomogram samples.
pub(crate) fn w_csv(samples: &[WSample]) -> String {
    let mut out = String::from("theta,phi,w_plus,w_minus\n");
    for s in samples {
        let _ = writeln!(out, "{},{},{},{}", s.theta, s.phi, s.w_plus, s.w_minus);
    }
    out
}

pub fn cmd_reconstruct(input: &InputDocument, mode: ReconstructMode, tol: f64) -> Result<OutputDocument, CliError> {
    let mut doc = OutputDocument::new("reconstruct", tol);
    match mode {
        ReconstructMode::FromP => {
            let records = input.p_table.as_ref().ok_or_else(|| CliError::Usage("input has no `p_table`".into()))?;
            let t = table_from_records(records)?;
            let report = check_admissibility(&t, tol);
            doc.p_table = Some(records.clone());
            doc.reconstruction = Some(summary("from-p"));
            if report.passed {
                let rho = density_from_p_with_tol(&t, tol)?;
                doc.rho = Some(matrix2_rows(rho.matrix()));
                doc.validation = Some(validate_density(rho.matrix(), tol));
            } else {
                doc.passed = false;
                doc.errors.extend(report.violations());
            }
            doc.admissibility = Some(report);
        }
        ReconstructMode::FromWAxes => {
            let triple = input.w_axes.ok_or_else(|| CliError::Usage("input has no `w_axes`".into()))?;
            doc.w_axes = Some(triple);
            doc.reconstruction = Some(summary("from-w-axes"));
            match density_from_w_axes_with_tol(&triple, tol) {
                Ok(rho) => {
                    doc.rho = Some(matrix2_rows(rho.matrix()));
                    doc.validation = Some(validate_density(rho.matrix(), tol));
                }
                Err(e) => fail(&mut doc, &e),
            }
        }
        ReconstructMode::FromWIntegral => reconstruct_integral(&mut doc, input, tol)?,
    }
    Ok(doc)
}

fn summary(mode: &str) -> ReconstructionSummary {
    ReconstructionSummary {
        mode: mode.to_string(),
        j: None,
        sign_convention: None,
        literal_phase_factor: None,
        grid_sizes: None,
        normalization_max_deviation: None,
        validation: None,
    }
}

fn reconstruct_integral(doc: &mut OutputDocument, input: &InputDocument, tol: f64) -> Result<(), CliError> {
    let oversample = input.oversample.unwrap_or(DEFAULT_OVERSAMPLE);
    let opts = ReconstructOptions { tol, sign_convention: input.sign_convention.unwrap_or_default() };
    let mut s = summary("from-w-integral");

    let result = match (&input.generator, &input.samples) {
        (Some(_), Some(_)) => return Err(CliError::Usage("give either `generator` or `samples`, not both".into())),
        (None, None) => return Err(CliError::Usage("from-w-integral needs `generator` or `samples`".into())),
        (Some(text), None) => {
            let j = input.spin()?.unwrap_or(HalfInteger::HALF);
            if j != HalfInteger::HALF {
                return Err(CliError::Usage(format!("generators are spin-1/2 states, but j = {j}")));
            }
            let spec: StateSpec = text.parse()?;
            doc.state = Some(spec.clone());
            s.j = Some(j.to_string());
            let rho = match spec.density(tol) {
                Ok(rho) => rho,
                Err(e) => {
                    doc.reconstruction = Some(s);
                    fail(doc, &e);
                    return Ok(());
                }
            };
            let rho_j = DensityMatrixJ::from_spin_half(&rho);
            let grid = build_quadrature(j, oversample)?;
            reconstruct_with(tomogram_of(&rho_j), j, &grid, &opts)
        }
        (None, Some(records)) => {
            let j = input.spin()?.ok_or_else(|| CliError::Usage("tabulated samples need `j` or `twice_j`".into()))?;
            s.j = Some(j.to_string());
            let (grid, values) = sample_grid(records, j, oversample)?;
            let n_phi = grid.n_phi();
            let thetas: Vec<f64> = grid.thetas().iter().map(|t| t.0).collect();
            let phis = grid.phis().to_vec();
            let tj = j.twice();
            let w = |m: HalfInteger, theta: f64, phi: f64| {
                let it = thetas.iter().position(|&t| t == theta).expect("θ is a grid node");
                let ip = phis.iter().position(|&p| p == phi).expect("φ is a grid node");
                values[it * n_phi + ip][((tj - m.twice()) / 2) as usize]
            };
            reconstruct_with(w, j, &grid, &opts)
        }
    };

    match result {
        Ok(rec) => {
            s.sign_convention = Some(rec.sign_convention);
            s.literal_phase_factor = Some(rec.literal_phase_factor);
            s.grid_sizes = Some(rec.grid_sizes);
            s.normalization_max_deviation = Some(rec.normalization_max_deviation);
            if !rec.validation.passed {
                doc.passed = false;
                doc.errors.push(format!("reconstructed matrix is not a density matrix: {}", rec.validation));
            }
            s.validation = Some(rec.validation);
            doc.rho = Some(dmatrix_rows(&rec.matrix));
        }
        Err(e @ (SpinError::InvalidArgument(_) | SpinError::IndexOutOfRange(_))) => return Err(e.into()),
        Err(e) => fail(doc, &e),
    }
    doc.reconstruction = Some(s);
    Ok(())
}

/// Matches tabulated samples to a product grid: Gauss-Legendre θ nodes and
/// uniform φ nodes, each node listed once. ψ nodes come from the default
/// grid for `j`.
fn sample_grid(
    records: &[super::document::SampleRecord],
    j: HalfInteger,
    oversample: usize,
) -> Result<(QuadratureGrid, Vec<Vec<f64>>), CliError> {
    const MATCH_TOL: f64 = 1e-9;
    let dedup = |mut v: Vec<f64>| {
        v.sort_by(f64::total_cmp);
        v.dedup_by(|a, b| (*a - *b).abs() <= MATCH_TOL);
        v
    };
    let thetas = dedup(records.iter().map(|r| r.theta).collect());
    let phis = dedup(records.iter().map(|r| r.phi.rem_euclid(std::f64::consts::TAU)).collect());
    let tj = j.twice().max(0) as usize;
    let (min_theta, min_phi) = (tj + 2, 2 * tj + 2);
    if thetas.len() < min_theta || phis.len() < min_phi {
        return Err(CliError::Usage(format!(
            "samples span {}×{} (θ, φ) nodes; spin {j} needs at least {min_theta}×{min_phi}",
            thetas.len(),
            phis.len()
        )));
    }
    let n_psi = build_quadrature(j, oversample)?.n_psi();
    let grid = QuadratureGrid::new(thetas.len(), phis.len(), n_psi)?;
    let off_grid = |what: &str| CliError::Usage(format!("sample {what} do not form a Gauss-Legendre × uniform grid"));
    if grid.thetas().iter().zip(&thetas).any(|(g, t)| (g.0 - t).abs() > MATCH_TOL) {
        return Err(off_grid("θ values"));
    }
    if grid.phis().iter().zip(&phis).any(|(g, p)| (g - p).abs() > MATCH_TOL) {
        return Err(off_grid("φ values"));
    }
    let n_phi = phis.len();
    let mut values: Vec<Option<Vec<f64>>> = vec![None; thetas.len() * n_phi];
    for r in records {
        let v = r.values()?;
        if v.len() != j.multiplicity() {
            return Err(CliError::Usage(format!("spin {j} samples need {} values, got {}", j.multiplicity(), v.len())));
        }
        let it = thetas.iter().position(|t| (t - r.theta).abs() <= MATCH_TOL).expect("θ collected above");
        let phi = r.phi.rem_euclid(std::f64::consts::TAU);
        let ip = phis.iter().position(|p| (p - phi).abs() <= MATCH_TOL).expect("φ collected above");
        if values[it * n_phi + ip].replace(v).is_some() {
            return Err(CliError::Usage(format!("duplicate sample at θ={}, φ={}", r.theta, r.phi)));
        }
    }
    let values = values
        .into_iter()
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| CliError::Usage("samples do not cover every grid node".into()))?;
    Ok((grid, values))
}

pub fn cmd_verify(input: &InputDocument, tol: f64) -> Result<OutputDocument, CliError> {
    let mut doc = OutputDocument::new("verify", tol);
    let table = input.p_table.as_deref().map(table_from_records).transpose()?;
    let triple = input.w_axes;
    if let Some(triple) = triple {
        doc.w_axes = Some(triple);
        if let Err(e) = triple.check_physical(tol) {
            fail(&mut doc, &e);
        }
    }
    let t = match (table, triple) {
        (Some(t), Some(triple)) => {
            let report = compare_table_with_triple(&t, &triple);
            if !report.passed(tol) {
                doc.passed = false;
                doc.errors.push(format!("table and triple disagree by {:e}", report.max_abs_delta));
            }
            doc.consistency = Some(report);
            t
        }
        (Some(t), None) => t,
        (None, Some(triple)) => p_from_w_unchecked(&triple),
        (None, None) => return Err(CliError::Usage("input needs `p_table`, `w_axes` or both".into())),
    };
    let report = check_admissibility(&t, tol);
    if !report.passed {
        doc.passed = false;
        doc.errors.extend(report.violations());
    }
    doc.p_table = Some(table_records(&t));
    doc.marginals = Some(marginals(&t));
    doc.admissibility = Some(report);
    Ok(doc)
}

/// Uniform point in the ball of radius ½, by rejection from the cube.
pub(crate) fn sample_bloch(rng: &mut impl Rng) -> BlochVector {
    loop {
        let b = BlochVector::new(rng.random_range(-0.5..=0.5), rng.random_range(-0.5..=0.5), rng.random_range(-0.5..=0.5));
        if b.norm_sqr() <= 0.25 {
            return b;
        }
    }
}

pub fn cmd_sweep(trials: u64, seed: u64, tol: f64) -> Result<OutputDocument, CliError> {
    if trials == 0 {
        return Err(CliError::Usage("--trials must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut dev = SweepDeviations {
        p_round_trip: 0.0,
        w_axes_round_trip: 0.0,
        radon_consistency: 0.0,
        oracle: 0.0,
        w_bloch_agreement: 0.0,
        radon_total: 0.0,
    };
    for _ in 0..trials {
        let b = sample_bloch(&mut rng);
        let rho = density_from_bloch(&b)?;
        let t = p_from_density(&rho);
        let back = density_from_p_with_tol(&t, tol)?;
        dev.p_round_trip = dev.p_round_trip.max(back.max_abs_diff(&rho));
        let triple = AxisTriple::from_density(&rho);
        dev.w_axes_round_trip = dev.w_axes_round_trip.max(density_from_w_axes(&triple)?.max_abs_diff(&rho));
        dev.radon_consistency = dev.radon_consistency.max(verify_radon_consistency(&rho).max_abs_delta);
        dev.oracle = dev.oracle.max(p_oracle(&rho).max_abs_diff(&t));

        let d = Direction::new(rng.random_range(-1.0f64..=1.0).acos(), rng.random_range(0.0..std::f64::consts::TAU));
        let closed = w_from_bloch(&b, &d)?;
        dev.w_bloch_agreement = dev.w_bloch_agreement.max((w_value(&rho, d).w_plus() - closed.w_plus()).abs());

        let any = AxisTriple::new(rng.random_range(-1.0..2.0), rng.random_range(-1.0..2.0), rng.random_range(-1.0..2.0));
        let total = p_from_w_unchecked(&any).total();
        dev.radon_total = dev.radon_total.max((total - 1.0).norm());
    }
    let mut doc = OutputDocument::new("sweep", tol);
    if dev.max() > tol {
        doc.passed = false;
        doc.errors.push(format!("largest deviation {:e} exceeds tolerance", dev.max()));
    }
    doc.sweep = Some(SweepReport { trials, seed, max_deviations: dev });
    Ok(doc)
}
