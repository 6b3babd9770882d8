//! Classical capacity of qudit channels.
//!
//! For a channel acting diagonally on the shift-clock basis the capacity is
//! log2(d) minus the minimum output entropy over input states, and the
//! minimizer can always be taken pure. The minimum is found by multi-restart
//! projected gradient descent over unit state vectors. An independent
//! brute-force maximizer of the Holevo quantity over input ensembles serves
//! as a cross-check: it alternates an exact probability update with gradient
//! ascent on the member states.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::channel::{DiagonalUnitalChannel, ProductChannel, QuantumChannel};
use crate::density::{random_state_vector, DensityMatrix};
use crate::entropy::{binary_entropy, spectrum_entropy, Ensemble};
use crate::error::{QhswError, Result};
use crate::linalg::{
    hermitian_eigen, hermitian_eigenvalues, hermitize, identity, matrix_unit, max_abs_diff, outer,
    CMatrix, CVector,
};
use crate::tol::{GRAD_SMOOTHING, PROB_FLOOR, STALL_TOL, STALL_WINDOW};

/// Members below this probability are dropped from a finished ensemble.
const PRUNE_FLOOR: f64 = 1e-8;

/// Knobs shared by both optimizers. The defaults are deterministic: the same
/// options on the same channel always return the same result.
#[derive(Clone, Debug)]
pub struct OptimizerOptions {
    /// Base seed; restart k draws from a stream derived from (seed, k).
    pub seed: u64,
    /// Independent random restarts.
    pub restarts: usize,
    /// Iteration cap per restart.
    pub max_iterations: usize,
    /// Objective improvement below this counts as a stalled iteration.
    pub stall_tolerance: f64,
    /// Consecutive stalled iterations that declare convergence.
    pub stall_window: usize,
    /// Initial line-search step.
    pub initial_step: f64,
    /// Ensemble size for the Holevo maximizer; defaults to d^2.
    pub ensemble_size: Option<usize>,
}

impl Default for OptimizerOptions {
    fn default() -> Self {
        Self {
            seed: 0,
            restarts: 8,
            max_iterations: 5000,
            stall_tolerance: STALL_TOL,
            stall_window: STALL_WINDOW,
            initial_step: 0.25,
            ensemble_size: None,
        }
    }
}

impl OptimizerOptions {
    /// Default options with a different seed.
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }
}

/// What the restarts did; non-convergence is reported here, not as an error.
#[derive(Clone, Debug)]
pub struct OptimizerDiagnostics {
    pub restarts: usize,
    pub converged_restarts: usize,
    pub total_iterations: usize,
    /// Index of the restart that produced the reported optimum.
    pub best_restart: usize,
    /// Final objective of every restart, in restart order.
    pub objective_per_restart: Vec<f64>,
    /// Whether the reported optimum came from a converged restart.
    pub converged: bool,
}

/// Minimum output entropy search result.
#[derive(Clone, Debug)]
pub struct MinEntropyResult {
    pub entropy_bits: f64,
    pub argmin_input: DensityMatrix,
    pub output: DensityMatrix,
    pub diagnostics: OptimizerDiagnostics,
}

/// Capacity of a diagonal channel, log2(d) minus the minimum output entropy.
#[derive(Clone, Debug)]
pub struct CapacityResult {
    pub capacity_bits: f64,
    pub min_output_entropy_bits: f64,
    pub argmin_input: DensityMatrix,
    pub diagnostics: OptimizerDiagnostics,
}

/// Best ensemble found by the brute-force Holevo maximizer.
#[derive(Clone, Debug)]
pub struct EnsembleResult {
    pub chi_bits: f64,
    pub inputs: Ensemble,
    pub outputs: Ensemble,
    pub average_output: DensityMatrix,
    pub diagnostics: OptimizerDiagnostics,
}

/// Channels whose capacity is log2 of the dimension minus the minimum output
/// entropy.
pub trait WeylDiagonalChannel: QuantumChannel {
    /// Bits carried by a noiseless use; log2(d), summed over tensor factors.
    fn noiseless_bits(&self) -> f64;
}

impl WeylDiagonalChannel for DiagonalUnitalChannel {
    fn noiseless_bits(&self) -> f64 {
        (self.dim() as f64).log2()
    }
}

impl WeylDiagonalChannel for ProductChannel {
    fn noiseless_bits(&self) -> f64 {
        self.log2_dim_sum()
    }
}

/// Channel images of all matrix units, the data both gradients need.
struct ChannelImages {
    d: usize,
    images: Vec<CMatrix>,
}

impl ChannelImages {
    fn new<C: QuantumChannel + ?Sized>(ch: &C) -> Result<Self> {
        let d = ch.dim();
        let mut images = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                images.push(ch.apply_matrix(&matrix_unit(d, i, j))?);
            }
        }
        Ok(Self { d, images })
    }

    fn apply(&self, x: &CMatrix) -> CMatrix {
        let d = self.d;
        let mut out = CMatrix::zeros(d, d);
        for i in 0..d {
            for j in 0..d {
                let w = x[(i, j)];
                if w.norm_sqr() > 0.0 {
                    out += &self.images[i * d + j] * w;
                }
            }
        }
        out
    }

    /// Pulls a Hermitian output-side differential back to the input side:
    /// the returned G satisfies d f = Tr[G d rho] for f = Tr[W channel(rho)].
    fn pull_back(&self, w: &CMatrix) -> CMatrix {
        let d = self.d;
        let mut g = CMatrix::zeros(d, d);
        for i in 0..d {
            for j in 0..d {
                let img = &self.images[i * d + j];
                let mut tr = Complex64::new(0.0, 0.0);
                for r in 0..d {
                    for c in 0..d {
                        tr += w[(r, c)] * img[(c, r)];
                    }
                }
                g[(j, i)] = tr;
            }
        }
        hermitize(&g)
    }
}

/// log2 of a smoothed output state: eps of the maximally mixed state is mixed
/// in first so eigenvalue crossings and rank deficiencies stay differentiable.
fn log2_smoothed(out: &CMatrix, eps: f64) -> CMatrix {
    let d = out.nrows();
    let smoothed = out.scale(1.0 - eps) + identity(d).scale(eps / d as f64);
    let (evs, vecs) = hermitian_eigen(&smoothed);
    let floor = eps / (10.0 * d as f64);
    let mut log = CMatrix::zeros(d, d);
    for (k, ev) in evs.iter().enumerate() {
        let v = vecs.column(k).clone_owned();
        log += (&v * v.adjoint()).scale(ev.max(floor).log2());
    }
    log
}

/// Output-side entropy differential -(log2 rho + log2(e) I).
fn entropy_differential(out: &CMatrix) -> CMatrix {
    let d = out.nrows();
    let log = log2_smoothed(out, GRAD_SMOOTHING);
    -(log + identity(d).scale(std::f64::consts::LOG2_E))
}

/// Riemannian gradient of S(channel(psi psi*)) on the unit sphere at psi.
fn entropy_gradient_tangent(images: &ChannelImages, psi: &CVector) -> CVector {
    let out = hermitize(&images.apply(&outer(psi)));
    let g = images.pull_back(&entropy_differential(&out));
    let gpsi = &g * psi;
    let rayleigh = (psi.adjoint() * &gpsi)[(0, 0)].re;
    gpsi - psi.scale(rayleigh)
}

/// Entropy in bits of the channel output for a given input state.
pub fn output_entropy<C: QuantumChannel + ?Sized>(ch: &C, rho: &DensityMatrix) -> Result<f64> {
    if rho.dim() != ch.dim() {
        return Err(QhswError::DimensionMismatch {
            expected: ch.dim(),
            got: rho.dim(),
        });
    }
    let out = hermitize(&ch.apply_matrix(rho.matrix())?);
    spectrum_entropy(&hermitian_eigenvalues(&out))
}

fn restart_seed(seed: u64, restart: usize) -> u64 {
    seed.wrapping_add((restart as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

fn output_entropy_of_vector(images: &ChannelImages, psi: &CVector) -> Result<f64> {
    let out = hermitize(&images.apply(&outer(psi)));
    spectrum_entropy(&hermitian_eigenvalues(&out))
}

/// Minimum output entropy over input states, by multi-restart projected
/// gradient descent over pure states. Mixed inputs can never do better
/// because the output entropy is concave in the input.
pub fn min_output_entropy<C: QuantumChannel + ?Sized>(
    ch: &C,
    opts: &OptimizerOptions,
) -> Result<MinEntropyResult> {
    if opts.restarts == 0 {
        return Err(QhswError::Domain("at least one restart is required".into()));
    }
    let d = ch.dim();
    let images = ChannelImages::new(ch)?;

    let mut per_restart = Vec::with_capacity(opts.restarts);
    let mut best: Option<(f64, CVector, bool, usize)> = None;
    let mut total_iterations = 0;
    let mut converged_restarts = 0;

    for r in 0..opts.restarts {
        let mut rng = ChaCha8Rng::seed_from_u64(restart_seed(opts.seed, r));
        let start = random_state_vector(d, &mut rng);
        let (value, psi, converged, iters) = descend_entropy(&images, start, opts)?;
        total_iterations += iters;
        if converged {
            converged_restarts += 1;
        }
        per_restart.push(value);
        if best.as_ref().map_or(true, |(bv, _, _, _)| value < *bv) {
            best = Some((value, psi, converged, r));
        }
    }

    // Qubits additionally get a dense Bloch sphere scan whose best point is
    // polished like any other start.
    if d == 2 {
        let start = best_grid_start(&images)?;
        let (value, psi, converged, iters) = descend_entropy(&images, start, opts)?;
        total_iterations += iters;
        if converged {
            converged_restarts += 1;
        }
        per_restart.push(value);
        if best.as_ref().map_or(true, |(bv, _, _, _)| value < *bv) {
            best = Some((value, psi, converged, opts.restarts));
        }
    }

    let (value, psi, converged, best_restart) = best.expect("at least one restart ran");
    let argmin = DensityMatrix::new_unchecked(outer(&psi));
    let output = DensityMatrix::new(hermitize(&images.apply(argmin.matrix())))?;
    Ok(MinEntropyResult {
        entropy_bits: value,
        argmin_input: argmin,
        output,
        diagnostics: OptimizerDiagnostics {
            restarts: per_restart.len(),
            converged_restarts,
            total_iterations,
            best_restart,
            objective_per_restart: per_restart,
            converged,
        },
    })
}

/// Gradient descent with backtracking from one starting vector.
fn descend_entropy(
    images: &ChannelImages,
    start: CVector,
    opts: &OptimizerOptions,
) -> Result<(f64, CVector, bool, usize)> {
    let mut psi = start;
    let mut value = output_entropy_of_vector(images, &psi)?;
    let mut step = opts.initial_step;
    let mut stall = 0;
    let mut iterations = 0;
    let mut converged = false;

    while iterations < opts.max_iterations {
        iterations += 1;
        let tangent = entropy_gradient_tangent(images, &psi);
        let candidate_raw = &psi - tangent.scale(step);
        let norm = candidate_raw.norm();
        let mut improved = false;
        if norm > 1e-12 {
            let candidate = candidate_raw.scale(1.0 / norm);
            let candidate_value = output_entropy_of_vector(images, &candidate)?;
            if candidate_value < value {
                let improvement = value - candidate_value;
                psi = candidate;
                value = candidate_value;
                step = (step * 1.3).min(4.0);
                improved = true;
                if improvement < opts.stall_tolerance {
                    stall += 1;
                } else {
                    stall = 0;
                }
            }
        }
        if !improved {
            step = (step * 0.5).max(1e-13);
            stall += 1;
        }
        if stall >= opts.stall_window {
            converged = true;
            break;
        }
    }
    Ok((value, psi, converged, iterations))
}

/// Best starting vector on a dense Bloch sphere grid, qubits only.
fn best_grid_start(images: &ChannelImages) -> Result<CVector> {
    let (n_polar, n_azimuth) = (48, 96);
    let mut best: Option<(f64, CVector)> = None;
    for ip in 0..=n_polar {
        let theta = std::f64::consts::PI * ip as f64 / n_polar as f64;
        for ia in 0..n_azimuth {
            let phi = std::f64::consts::TAU * ia as f64 / n_azimuth as f64;
            let mut psi = CVector::zeros(2);
            psi[0] = Complex64::new((theta / 2.0).cos(), 0.0);
            psi[1] = Complex64::from_polar((theta / 2.0).sin(), phi);
            let value = output_entropy_of_vector(images, &psi)?;
            if best.as_ref().map_or(true, |(bv, _)| value < *bv) {
                best = Some((value, psi));
            }
        }
    }
    Ok(best.expect("grid is nonempty").1)
}

/// Minimum output entropy of a qubit channel by plain grid search, an
/// optimizer-free cross-check.
pub fn min_output_entropy_qubit_grid<C: QuantumChannel + ?Sized>(
    ch: &C,
    n_polar: usize,
    n_azimuth: usize,
) -> Result<f64> {
    if ch.dim() != 2 {
        return Err(QhswError::DimensionMismatch {
            expected: 2,
            got: ch.dim(),
        });
    }
    let images = ChannelImages::new(ch)?;
    let mut best = f64::INFINITY;
    for ip in 0..=n_polar {
        let theta = std::f64::consts::PI * ip as f64 / n_polar as f64;
        for ia in 0..n_azimuth {
            let phi = std::f64::consts::TAU * ia as f64 / n_azimuth as f64;
            let mut psi = CVector::zeros(2);
            psi[0] = Complex64::new((theta / 2.0).cos(), 0.0);
            psi[1] = Complex64::from_polar((theta / 2.0).sin(), phi);
            best = best.min(output_entropy_of_vector(&images, &psi)?);
        }
    }
    Ok(best)
}

/// HSW classical capacity of a diagonal channel:
/// noiseless bits minus the minimum output entropy.
pub fn hsw_capacity_diagonal<C: WeylDiagonalChannel + ?Sized>(
    ch: &C,
    opts: &OptimizerOptions,
) -> Result<CapacityResult> {
    let min = min_output_entropy(ch, opts)?;
    Ok(CapacityResult {
        capacity_bits: ch.noiseless_bits() - min.entropy_bits,
        min_output_entropy_bits: min.entropy_bits,
        argmin_input: min.argmin_input,
        diagnostics: min.diagnostics,
    })
}

/// Closed-form capacity of a qubit channel scaling the Bloch components:
/// 1 - H2((1 + max_k |lambda_k|) / 2).
pub fn qubit_unital_capacity_closed_form(lambda: [f64; 3]) -> Result<f64> {
    DiagonalUnitalChannel::qubit(lambda[0], lambda[1], lambda[2])?;
    let r = lambda.iter().map(|l| l.abs()).fold(0.0f64, f64::max);
    Ok(1.0 - binary_entropy((1.0 + r) / 2.0)?)
}

/// State of the ensemble maximizer inside one restart.
struct EnsembleState {
    vectors: Vec<CVector>,
    probs: Vec<f64>,
}

impl EnsembleState {
    /// Hermitized channel outputs of every member.
    fn outputs(&self, images: &ChannelImages) -> Vec<CMatrix> {
        self.vectors
            .iter()
            .map(|v| hermitize(&images.apply(&outer(v))))
            .collect()
    }

    fn average(&self, outputs: &[CMatrix], d: usize) -> CMatrix {
        let mut avg = CMatrix::zeros(d, d);
        for (p, o) in self.probs.iter().zip(outputs.iter()) {
            avg += o.scale(*p);
        }
        avg
    }
}

fn chi_of(outputs: &[CMatrix], probs: &[f64], avg: &CMatrix) -> Result<f64> {
    let mut chi = spectrum_entropy(&hermitian_eigenvalues(avg))?;
    for (p, o) in probs.iter().zip(outputs.iter()) {
        if *p > 0.0 {
            chi -= p * spectrum_entropy(&hermitian_eigenvalues(o))?;
        }
    }
    Ok(chi)
}

/// Relative entropy of each output to the average, evaluated against the
/// smoothed average so the value stays finite during optimization.
fn member_distances(outputs: &[CMatrix], avg: &CMatrix) -> Vec<f64> {
    let log_avg = log2_smoothed(avg, GRAD_SMOOTHING);
    outputs
        .iter()
        .map(|o| {
            let evs = hermitian_eigenvalues(o);
            let mut own = 0.0;
            for ev in evs {
                if ev > crate::tol::ENTROPY_EIG_CLAMP {
                    own += ev * ev.log2();
                }
            }
            let mut cross = 0.0;
            for r in 0..o.nrows() {
                for c in 0..o.ncols() {
                    cross += (o[(r, c)] * log_avg[(c, r)]).re;
                }
            }
            own - cross
        })
        .collect()
}

/// Brute-force maximizer of the Holevo quantity over input ensembles.
///
/// Alternates an exact multiplicative probability update (fixed point when
/// every used member sits at the same distance from the average) with one
/// projected gradient ascent step on all member states.
pub fn optimize_ensemble<C: QuantumChannel + ?Sized>(
    ch: &C,
    opts: &OptimizerOptions,
) -> Result<EnsembleResult> {
    if opts.restarts == 0 {
        return Err(QhswError::Domain("at least one restart is required".into()));
    }
    let d = ch.dim();
    let m = opts.ensemble_size.unwrap_or(d * d);
    if m == 0 {
        return Err(QhswError::Domain("ensemble size must be positive".into()));
    }
    if m > d * d {
        return Err(QhswError::Domain(format!(
            "ensemble size {m} exceeds the d^2 = {} cap",
            d * d
        )));
    }
    let images = ChannelImages::new(ch)?;

    let mut per_restart = Vec::with_capacity(opts.restarts);
    let mut best: Option<(f64, EnsembleState, bool, usize)> = None;
    let mut total_iterations = 0;
    let mut converged_restarts = 0;

    for r in 0..opts.restarts {
        let mut rng = ChaCha8Rng::seed_from_u64(restart_seed(opts.seed, r));
        let vectors: Vec<CVector> = (0..m).map(|_| random_state_vector(d, &mut rng)).collect();
        let state = EnsembleState {
            vectors,
            probs: vec![1.0 / m as f64; m],
        };
        let (chi, state, converged, iters) = ascend_chi(&images, state, opts)?;
        total_iterations += iters;
        if converged {
            converged_restarts += 1;
        }
        per_restart.push(chi);
        if best.as_ref().map_or(true, |(bv, _, _, _)| chi > *bv) {
            best = Some((chi, state, converged, r));
        }
    }

    let (_, state, converged, best_restart) = best.expect("at least one restart ran");

    // Drop members whose probability collapsed, then report exact quantities.
    let mut probs = Vec::new();
    let mut inputs = Vec::new();
    let mut outputs = Vec::new();
    for (p, v) in state.probs.iter().zip(state.vectors.iter()) {
        if *p >= PRUNE_FLOOR {
            probs.push(*p);
            let rho = DensityMatrix::new_unchecked(outer(v));
            outputs.push(DensityMatrix::new(hermitize(&images.apply(rho.matrix())))?);
            inputs.push(rho);
        }
    }
    let total: f64 = probs.iter().sum();
    for p in &mut probs {
        *p /= total;
    }
    let inputs = Ensemble::new(probs.clone(), inputs)?;
    let outputs = Ensemble::new(probs, outputs)?;
    let chi_bits = crate::entropy::holevo_quantity(&outputs)?;
    let average_output = DensityMatrix::new(outputs.average_state().matrix().clone())?;

    Ok(EnsembleResult {
        chi_bits,
        inputs,
        outputs,
        average_output,
        diagnostics: OptimizerDiagnostics {
            restarts: opts.restarts,
            converged_restarts,
            total_iterations,
            best_restart,
            objective_per_restart: per_restart,
            converged,
        },
    })
}

fn ascend_chi(
    images: &ChannelImages,
    mut state: EnsembleState,
    opts: &OptimizerOptions,
) -> Result<(f64, EnsembleState, bool, usize)> {
    let d = images.d;
    let mut step = opts.initial_step;
    let mut stall = 0;
    let mut iterations = 0;
    let mut converged = false;

    let mut outputs = state.outputs(images);
    let mut avg = state.average(&outputs, d);
    let mut best_chi = chi_of(&outputs, &state.probs, &avg)?;

    while iterations < opts.max_iterations {
        iterations += 1;

        // Exact probability update: reweight by 2^(distance to the average).
        let distances = member_distances(&outputs, &avg);
        let max_distance = distances.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let mut total = 0.0;
        for (p, dist) in state.probs.iter_mut().zip(distances.iter()) {
            *p *= (dist - max_distance).exp2();
            total += *p;
        }
        for p in &mut state.probs {
            *p /= total;
        }
        avg = state.average(&outputs, d);
        let chi_after_probs = chi_of(&outputs, &state.probs, &avg)?;

        // One ascent step on every member state, accepted only on improvement.
        let log_avg = log2_smoothed(&avg, GRAD_SMOOTHING);
        let mut proposed = Vec::with_capacity(state.vectors.len());
        for (k, psi) in state.vectors.iter().enumerate() {
            let p = state.probs[k];
            if p < PRUNE_FLOOR {
                proposed.push(psi.clone());
                continue;
            }
            let w = (log2_smoothed(&outputs[k], GRAD_SMOOTHING) - &log_avg).scale(p);
            let g = images.pull_back(&w);
            let gpsi = &g * psi;
            let rayleigh = (psi.adjoint() * &gpsi)[(0, 0)].re;
            let tangent = gpsi - psi.scale(rayleigh);
            let candidate = psi + tangent.scale(step);
            let norm = candidate.norm();
            proposed.push(if norm > 1e-12 {
                candidate.scale(1.0 / norm)
            } else {
                psi.clone()
            });
        }
        let proposed_state = EnsembleState {
            vectors: proposed,
            probs: state.probs.clone(),
        };
        let proposed_outputs = proposed_state.outputs(images);
        let proposed_avg = proposed_state.average(&proposed_outputs, d);
        let chi_after_move = chi_of(&proposed_outputs, &proposed_state.probs, &proposed_avg)?;

        let chi_now = if chi_after_move > chi_after_probs {
            state = proposed_state;
            outputs = proposed_outputs;
            avg = proposed_avg;
            step = (step * 1.3).min(4.0);
            chi_after_move
        } else {
            step = (step * 0.5).max(1e-13);
            chi_after_probs
        };

        let improvement = chi_now - best_chi;
        if improvement > 0.0 {
            best_chi = chi_now;
        }
        if improvement < opts.stall_tolerance {
            stall += 1;
        } else {
            stall = 0;
        }
        if stall >= opts.stall_window {
            converged = true;
            break;
        }
    }
    Ok((best_chi, state, converged, iterations))
}

/// Per-member distance to the average output, compared against chi.
#[derive(Clone, Debug)]
pub struct DistanceCheckEntry {
    pub index: usize,
    pub probability: f64,
    pub distance_bits: f64,
    pub deviation: f64,
}

/// Whether every used member sits at distance chi from the average output.
#[derive(Clone, Debug)]
pub struct EqualDistanceReport {
    pub chi_bits: f64,
    pub entries: Vec<DistanceCheckEntry>,
    pub max_deviation: f64,
    pub pass: bool,
}

/// Checks the equal-distance property of an optimal ensemble: every member
/// with non-negligible probability has D(output_i || average) = chi.
pub fn equal_distance_check(result: &EnsembleResult, tol: f64) -> Result<EqualDistanceReport> {
    let mut entries = Vec::new();
    let mut max_deviation: f64 = 0.0;
    for i in 0..result.outputs.len() {
        let p = result.outputs.prob(i);
        if p <= PROB_FLOOR {
            continue;
        }
        let dist =
            crate::entropy::relative_entropy(result.outputs.state(i), &result.average_output)?;
        let deviation = (dist - result.chi_bits).abs();
        max_deviation = max_deviation.max(deviation);
        entries.push(DistanceCheckEntry {
            index: i,
            probability: p,
            distance_bits: dist,
            deviation,
        });
    }
    Ok(EqualDistanceReport {
        chi_bits: result.chi_bits,
        entries,
        max_deviation,
        pass: max_deviation <= tol,
    })
}

/// Random-probe test of the maximal-distance property.
#[derive(Clone, Debug)]
pub struct MaximalDistanceReport {
    pub probes: usize,
    pub violations: usize,
    /// Largest D(channel(probe) || average) - chi seen over the probes.
    pub worst_excess: f64,
    pub pass: bool,
}

/// Checks that no pure input state beats chi: for an optimal ensemble,
/// D(channel(probe) || average output) <= chi for every state.
pub fn maximal_distance_check<C: QuantumChannel + ?Sized>(
    ch: &C,
    result: &EnsembleResult,
    probes: usize,
    tol: f64,
    seed: u64,
) -> Result<MaximalDistanceReport> {
    let d = ch.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut violations = 0;
    let mut worst_excess = f64::NEG_INFINITY;
    for _ in 0..probes {
        let psi = random_state_vector(d, &mut rng);
        let probe = DensityMatrix::new_unchecked(outer(&psi));
        let out = DensityMatrix::new(hermitize(&ch.apply_matrix(probe.matrix())?))?;
        let dist = crate::entropy::relative_entropy(&out, &result.average_output)?;
        let excess = dist - result.chi_bits;
        worst_excess = worst_excess.max(excess);
        if excess > tol {
            violations += 1;
        }
    }
    Ok(MaximalDistanceReport {
        probes,
        violations,
        worst_excess,
        pass: violations == 0,
    })
}

/// Agreement of the average output across independently seeded runs.
#[derive(Clone, Debug)]
pub struct UniquenessReport {
    pub runs: usize,
    pub converged_runs: usize,
    /// Max entrywise distance of any converged run's average from I/d.
    pub max_deviation_from_uniform: f64,
    /// Max entrywise distance between the averages of two converged runs.
    pub pairwise_max_deviation: f64,
    pub uniform_pass: bool,
    pub pairwise_pass: bool,
}

/// Reruns the ensemble maximizer under several seeds and compares the
/// average outputs: with each other, and against the maximally mixed state.
///
/// For unital diagonal channels both comparisons pass; channels with a
/// displaced optimum keep the pairwise agreement but fail the uniform check.
pub fn average_output_uniqueness_check<C: QuantumChannel + ?Sized>(
    ch: &C,
    runs: usize,
    tol: f64,
    base: &OptimizerOptions,
) -> Result<UniquenessReport> {
    if runs == 0 {
        return Err(QhswError::Domain("at least one run is required".into()));
    }
    let d = ch.dim();
    let uniform = identity(d).scale(1.0 / d as f64);
    let mut averages = Vec::new();
    let mut converged_runs = 0;
    for k in 0..runs {
        let mut opts = base.clone();
        opts.seed = base.seed.wrapping_add(k as u64);
        let result = optimize_ensemble(ch, &opts)?;
        if result.diagnostics.converged {
            converged_runs += 1;
            averages.push(result.average_output.matrix().clone());
        }
    }
    let mut max_uniform: f64 = 0.0;
    let mut max_pairwise: f64 = 0.0;
    for (i, a) in averages.iter().enumerate() {
        max_uniform = max_uniform.max(max_abs_diff(a, &uniform));
        for b in averages.iter().skip(i + 1) {
            max_pairwise = max_pairwise.max(max_abs_diff(a, b));
        }
    }
    Ok(UniquenessReport {
        runs,
        converged_runs,
        max_deviation_from_uniform: max_uniform,
        pairwise_max_deviation: max_pairwise,
        uniform_pass: converged_runs > 0 && max_uniform <= tol,
        pairwise_pass: converged_runs > 0 && max_pairwise <= 2.0 * tol,
    })
}
