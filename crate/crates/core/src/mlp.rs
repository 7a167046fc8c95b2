//! Fully-connected ReLU network with a softmax head, trained from scratch
//! by mini-batch SGD on the empirical cross-entropy.
//!
//! The network maps a received vector (optionally concatenated with the
//! flattened channel matrix) to a distribution over all symbol
//! combinations. Parameters live in the sup-norm ball of radius `R` and
//! are clamped back into it after every update.
//!
//! Besides training and detection this module exposes the piecewise-linear
//! structure of the network: the activation pattern of an input and the
//! affine map the network computes on that pattern's linear region.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::detect::DetectionResult;
use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::rng::seeded;
use crate::signal::{one_hot_decode, OneHotTarget, RealConstellation};
use crate::stats::log_sum_exp;

/// Snapshot format version written by [`MlpParameters::to_json`].
pub const SNAPSHOT_VERSION: u32 = 1;

/// Batch rows handled per parallel task in the batched passes.
const PAR_ROWS: usize = 64;

/// Layer widths `(d_0, ..., d_{l+1})` of a network with `l` hidden layers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NetworkShape {
    widths: Vec<usize>,
}

impl NetworkShape {
    pub fn new(widths: Vec<usize>) -> Result<Self> {
        if widths.len() < 2 {
            return Err(Error::InvalidParameter(
                "a network needs at least input and output widths".into(),
            ));
        }
        if widths.contains(&0) {
            return Err(Error::InvalidParameter("all widths must be >= 1".into()));
        }
        Ok(Self { widths })
    }

    /// Input, `l` equal hidden layers, output.
    pub fn uniform(
        input: usize,
        hidden_layers: usize,
        width: usize,
        output: usize,
    ) -> Result<Self> {
        let mut widths = Vec::with_capacity(hidden_layers + 2);
        widths.push(input);
        widths.extend(std::iter::repeat_n(width, hidden_layers));
        widths.push(output);
        Self::new(widths)
    }

    pub fn widths(&self) -> &[usize] {
        &self.widths
    }

    pub fn input_dim(&self) -> usize {
        self.widths[0]
    }

    pub fn output_dim(&self) -> usize {
        self.widths[self.widths.len() - 1]
    }

    /// Number of hidden layers `l`.
    pub fn depth(&self) -> usize {
        self.widths.len() - 2
    }

    /// Total hidden neuron count `d_u`.
    pub fn hidden_total(&self) -> usize {
        self.widths[1..self.widths.len() - 1].iter().sum()
    }

    /// Parameter count `d_s = sum_i d_{i+1} (d_i + 1)`.
    pub fn param_count(&self) -> usize {
        self.widths.windows(2).map(|w| w[1] * (w[0] + 1)).sum()
    }

    /// Largest width over all layers, `||d||_inf`.
    pub fn max_width(&self) -> usize {
        *self.widths.iter().max().unwrap()
    }
}

/// Weights, biases and the sup-norm bound of one network.
#[derive(Debug, Clone, PartialEq)]
pub struct MlpParameters {
    shape: NetworkShape,
    /// Per layer, row-major `d_{i+1} x d_i`.
    weights: Vec<Vec<f64>>,
    /// Per layer, length `d_{i+1}`.
    biases: Vec<Vec<f64>>,
    bound: f64,
}

/// Uniform initialization in `[-a, a]` with `a = min(R, sqrt(6/(d_i + d_{i+1})))`,
/// biases zero.
pub fn init_mlp(shape: NetworkShape, bound: f64, rng: &mut impl Rng) -> Result<MlpParameters> {
    if bound < 1.0 {
        return Err(Error::InvalidParameter(format!(
            "bound R must be >= 1, got {bound}"
        )));
    }
    let mut weights = Vec::new();
    let mut biases = Vec::new();
    for w in shape.widths.windows(2) {
        let (din, dout) = (w[0], w[1]);
        let a = bound.min((6.0 / (din + dout) as f64).sqrt());
        let layer: Vec<f64> = (0..dout * din)
            .map(|_| rng.random::<f64>() * 2.0 * a - a)
            .collect();
        weights.push(layer);
        biases.push(vec![0.0; dout]);
    }
    Ok(MlpParameters {
        shape,
        weights,
        biases,
        bound,
    })
}

/// On/off state of every hidden neuron for one input, layer by layer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActivationPattern {
    states: Vec<bool>,
}

impl ActivationPattern {
    pub fn from_states(states: Vec<bool>) -> Self {
        Self { states }
    }

    pub fn states(&self) -> &[bool] {
        &self.states
    }
}

impl MlpParameters {
    pub fn shape(&self) -> &NetworkShape {
        &self.shape
    }

    pub fn bound(&self) -> f64 {
        self.bound
    }

    pub fn weights(&self) -> &[Vec<f64>] {
        &self.weights
    }

    pub fn biases(&self) -> &[Vec<f64>] {
        &self.biases
    }

    /// Mutable weight matrix of one layer, for perturbation studies.
    pub fn weights_mut(&mut self, layer: usize) -> &mut [f64] {
        &mut self.weights[layer]
    }

    /// Mutable bias vector of one layer, for perturbation studies.
    pub fn biases_mut(&mut self, layer: usize) -> &mut [f64] {
        &mut self.biases[layer]
    }

    /// Largest parameter magnitude.
    pub fn sup_norm(&self) -> f64 {
        self.weights
            .iter()
            .flatten()
            .chain(self.biases.iter().flatten())
            .map(|v| v.abs())
            .fold(0.0, f64::max)
    }

    /// Truncate every parameter into `[-r, r]`.
    pub fn clamp_to(&mut self, r: f64) {
        for layer in self.weights.iter_mut().chain(self.biases.iter_mut()) {
            for v in layer.iter_mut() {
                *v = v.clamp(-r, r);
            }
        }
        self.bound = r;
    }

    /// Pre-softmax outputs `f_theta(x)`.
    pub fn logits(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.shape.input_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.shape.input_dim(),
                got: x.len(),
            });
        }
        let mut act = x.to_vec();
        let last = self.weights.len() - 1;
        for (i, (w, b)) in self.weights.iter().zip(&self.biases).enumerate() {
            let din = self.shape.widths[i];
            let dout = self.shape.widths[i + 1];
            let mut z = vec![0.0; dout];
            for o in 0..dout {
                let row = &w[o * din..(o + 1) * din];
                let mut acc = b[o];
                for (wi, ai) in row.iter().zip(&act) {
                    acc += wi * ai;
                }
                z[o] = acc;
            }
            if i < last {
                for v in z.iter_mut() {
                    *v = v.max(0.0);
                }
            }
            act = z;
        }
        Ok(act)
    }

    /// Softmax output `p_theta(x)`; entries sum to one.
    pub fn forward(&self, x: &[f64]) -> Result<Vec<f64>> {
        let logits = self.logits(x)?;
        let norm = log_sum_exp(&logits);
        Ok(logits.into_iter().map(|v| (v - norm).exp()).collect())
    }

    /// Hidden-neuron states produced by `x`.
    pub fn activation_pattern(&self, x: &[f64]) -> Result<ActivationPattern> {
        if x.len() != self.shape.input_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.shape.input_dim(),
                got: x.len(),
            });
        }
        let mut act = x.to_vec();
        let mut states = Vec::with_capacity(self.shape.hidden_total());
        for i in 0..self.weights.len() - 1 {
            let din = self.shape.widths[i];
            let dout = self.shape.widths[i + 1];
            let w = &self.weights[i];
            let b = &self.biases[i];
            let mut z = vec![0.0; dout];
            for o in 0..dout {
                let row = &w[o * din..(o + 1) * din];
                let mut acc = b[o];
                for (wi, ai) in row.iter().zip(&act) {
                    acc += wi * ai;
                }
                states.push(acc > 0.0);
                z[o] = acc.max(0.0);
            }
            act = z;
        }
        Ok(ActivationPattern { states })
    }

    /// The affine map `x -> W x + b` the logits compute on the linear
    /// region selected by `pattern`.
    pub fn region_affine_map(&self, pattern: &ActivationPattern) -> Result<(Mat, Vec<f64>)> {
        if pattern.states.len() != self.shape.hidden_total() {
            return Err(Error::DimensionMismatch {
                expected: self.shape.hidden_total(),
                got: pattern.states.len(),
            });
        }
        let d0 = self.shape.input_dim();
        let mut cum_w = Mat::from_vec(self.shape.widths[1], d0, self.weights[0].clone());
        let mut cum_b = self.biases[0].clone();
        let mut offset = 0usize;
        for i in 1..self.weights.len() {
            let din = self.shape.widths[i];
            let dout = self.shape.widths[i + 1];
            let mask = &pattern.states[offset..offset + din];
            offset += din;
            // zero the rows/entries killed by the ReLU mask, then compose
            let mut masked_w = cum_w.clone();
            let mut masked_b = cum_b.clone();
            for (r, &on) in mask.iter().enumerate() {
                if !on {
                    for c in 0..d0 {
                        masked_w.set(r, c, 0.0);
                    }
                    masked_b[r] = 0.0;
                }
            }
            let w = Mat::from_vec(dout, din, self.weights[i].clone());
            cum_w = w.matmul(&masked_w);
            let mut b = w.matvec(&masked_b);
            for (bo, bi) in b.iter_mut().zip(&self.biases[i]) {
                *bo += bi;
            }
            cum_b = b;
        }
        Ok((cum_w, cum_b))
    }

    /// Symbol decision by argmax of the network posterior. `csi` must be
    /// given exactly when the network was built with channel input.
    pub fn detect(
        &self,
        x: &[f64],
        csi: Option<&Mat>,
        c: &RealConstellation,
        d_t: usize,
    ) -> Result<DetectionResult> {
        let input = assemble_input(&self.shape, x, csi)?;
        let probs = self.forward(&input)?;
        let mut best = 0usize;
        for (i, &p) in probs.iter().enumerate() {
            if p > probs[best] {
                best = i;
            }
        }
        let target = OneHotTarget::new(best + 1, probs.len())?;
        let hard = one_hot_decode(&target, c, d_t)?;
        Ok(DetectionResult {
            hard_symbols: hard,
            posterior: Some(probs),
            detector: "dl",
            iterations: 0,
        })
    }

    /// Serialize to the snapshot text format.
    pub fn to_json(&self) -> String {
        let snapshot = MlpSnapshot {
            format_version: SNAPSHOT_VERSION,
            widths: self.shape.widths.clone(),
            bound: self.bound,
            layers: self
                .weights
                .iter()
                .zip(&self.biases)
                .map(|(w, b)| LayerSnapshot {
                    weights: w.clone(),
                    biases: b.clone(),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&snapshot).expect("snapshot serialization cannot fail")
    }

    /// Parse a snapshot produced by [`MlpParameters::to_json`].
    pub fn from_json(text: &str) -> Result<Self> {
        let snapshot: MlpSnapshot =
            serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
        if snapshot.format_version != SNAPSHOT_VERSION {
            return Err(Error::SnapshotVersion {
                expected: SNAPSHOT_VERSION,
                got: snapshot.format_version,
            });
        }
        let shape = NetworkShape::new(snapshot.widths)?;
        if snapshot.layers.len() != shape.widths().len() - 1 {
            return Err(Error::Format("layer count does not match shape".into()));
        }
        let mut weights = Vec::new();
        let mut biases = Vec::new();
        for (i, layer) in snapshot.layers.into_iter().enumerate() {
            let (din, dout) = (shape.widths()[i], shape.widths()[i + 1]);
            if layer.weights.len() != din * dout || layer.biases.len() != dout {
                return Err(Error::Format(format!("layer {i} has inconsistent sizes")));
            }
            weights.push(layer.weights);
            biases.push(layer.biases);
        }
        Ok(Self {
            shape,
            weights,
            biases,
            bound: snapshot.bound,
        })
    }

    pub fn save(&self, path: &std::path::Path) -> Result<()> {
        std::fs::write(path, self.to_json())?;
        Ok(())
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

/// Build the network input, appending the column-major flattened channel
/// when the shape calls for it.
pub fn assemble_input(shape: &NetworkShape, x: &[f64], csi: Option<&Mat>) -> Result<Vec<f64>> {
    let d0 = shape.input_dim();
    if x.len() == d0 {
        return Ok(x.to_vec());
    }
    match csi {
        Some(h) if x.len() + h.rows() * h.cols() == d0 => {
            let mut input = x.to_vec();
            input.extend(h.vec_column_major());
            Ok(input)
        }
        Some(h) => Err(Error::DimensionMismatch {
            expected: d0,
            got: x.len() + h.rows() * h.cols(),
        }),
        None => Err(Error::DimensionMismatch {
            expected: d0,
            got: x.len(),
        }),
    }
}

#[derive(Serialize, Deserialize)]
struct MlpSnapshot {
    format_version: u32,
    widths: Vec<usize>,
    bound: f64,
    layers: Vec<LayerSnapshot>,
}

#[derive(Serialize, Deserialize)]
struct LayerSnapshot {
    weights: Vec<f64>,
    biases: Vec<f64>,
}

/// Labeled classification data: flat row-major inputs and 0-based class
/// targets (one-hot index minus one).
#[derive(Debug, Clone)]
pub struct ClassificationSet {
    input_dim: usize,
    inputs: Vec<f64>,
    targets: Vec<u32>,
}

impl ClassificationSet {
    pub fn new(input_dim: usize) -> Self {
        Self {
            input_dim,
            inputs: Vec::new(),
            targets: Vec::new(),
        }
    }

    pub fn push(&mut self, input: &[f64], target_class: u32) {
        assert_eq!(input.len(), self.input_dim, "sample dimension mismatch");
        self.inputs.extend_from_slice(input);
        self.targets.push(target_class);
    }

    pub fn len(&self) -> usize {
        self.targets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.targets.is_empty()
    }

    pub fn input_dim(&self) -> usize {
        self.input_dim
    }

    pub fn input(&self, i: usize) -> &[f64] {
        &self.inputs[i * self.input_dim..(i + 1) * self.input_dim]
    }

    pub fn target(&self, i: usize) -> u32 {
        self.targets[i]
    }

    /// Copy of the first `n` samples.
    pub fn prefix(&self, n: usize) -> ClassificationSet {
        assert!(n <= self.len());
        ClassificationSet {
            input_dim: self.input_dim,
            inputs: self.inputs[..n * self.input_dim].to_vec(),
            targets: self.targets[..n].to_vec(),
        }
    }
}

/// Per-parameter gradients, same layout as [`MlpParameters`].
#[derive(Debug, Clone)]
pub struct MlpGradients {
    pub weights: Vec<Vec<f64>>,
    pub biases: Vec<Vec<f64>>,
}

impl MlpGradients {
    fn zeros_like(params: &MlpParameters) -> Self {
        Self {
            weights: params.weights.iter().map(|w| vec![0.0; w.len()]).collect(),
            biases: params.biases.iter().map(|b| vec![0.0; b.len()]).collect(),
        }
    }
}

/// Mean cross-entropy over a batch and its exact gradient by
/// backpropagation.
///
/// `inputs` is row-major `batch x d_0`; `targets` holds 0-based classes.
pub fn loss_and_grad(
    params: &MlpParameters,
    inputs: &[f64],
    targets: &[u32],
) -> Result<(f64, MlpGradients)> {
    let d0 = params.shape.input_dim();
    assert!(!targets.is_empty(), "batch must be nonempty");
    assert_eq!(inputs.len(), targets.len() * d0, "batch layout mismatch");
    let bsz = targets.len();
    let n_layers = params.weights.len();

    // forward, keeping post-activation values per layer
    let mut acts: Vec<Vec<f64>> = Vec::with_capacity(n_layers + 1);
    acts.push(inputs.to_vec());
    for i in 0..n_layers {
        let din = params.shape.widths[i];
        let dout = params.shape.widths[i + 1];
        let w = &params.weights[i];
        let b = &params.biases[i];
        let prev = &acts[i];
        let relu = i < n_layers - 1;
        let mut z = vec![0.0; bsz * dout];
        z.par_chunks_mut(PAR_ROWS * dout)
            .zip(prev.par_chunks(PAR_ROWS * din))
            .for_each(|(z_chunk, a_chunk)| {
                let rows = z_chunk.len() / dout;
                for r in 0..rows {
                    let a_row = &a_chunk[r * din..(r + 1) * din];
                    let z_row = &mut z_chunk[r * dout..(r + 1) * dout];
                    for o in 0..dout {
                        let w_row = &w[o * din..(o + 1) * din];
                        let mut acc = b[o];
                        for (wi, ai) in w_row.iter().zip(a_row) {
                            acc += wi * ai;
                        }
                        z_row[o] = if relu { acc.max(0.0) } else { acc };
                    }
                }
            });
        acts.push(z);
    }

    // loss and logit gradients
    let dout_last = params.shape.output_dim();
    let logits = &acts[n_layers];
    let mut loss = 0.0;
    let mut dz = vec![0.0; bsz * dout_last];
    for r in 0..bsz {
        let row = &logits[r * dout_last..(r + 1) * dout_last];
        let norm = log_sum_exp(row);
        if !norm.is_finite() {
            return Err(Error::Diverged("non-finite logits in loss".into()));
        }
        let y = targets[r] as usize;
        if y >= dout_last {
            return Err(Error::IndexOutOfRange {
                index: y,
                limit: dout_last - 1,
            });
        }
        loss += norm - row[y];
        let drow = &mut dz[r * dout_last..(r + 1) * dout_last];
        for (k, dk) in drow.iter_mut().enumerate() {
            *dk = (row[k] - norm).exp() / bsz as f64;
        }
        drow[y] -= 1.0 / bsz as f64;
    }
    loss /= bsz as f64;

    // backward
    let mut grads = MlpGradients::zeros_like(params);
    let mut dz_cur = dz;
    for i in (0..n_layers).rev() {
        let din = params.shape.widths[i];
        let dout = params.shape.widths[i + 1];
        let prev = &acts[i];

        // bias gradient
        let db = &mut grads.biases[i];
        for r in 0..bsz {
            let drow = &dz_cur[r * dout..(r + 1) * dout];
            for (o, d) in drow.iter().enumerate() {
                db[o] += d;
            }
        }

        // weight gradient: each output row reduced independently
        let dw = &mut grads.weights[i];
        dw.par_chunks_mut(din).enumerate().for_each(|(o, dw_row)| {
            for r in 0..bsz {
                let d = dz_cur[r * dout + o];
                if d == 0.0 {
                    continue;
                }
                let a_row = &prev[r * din..(r + 1) * din];
                for (dwi, ai) in dw_row.iter_mut().zip(a_row) {
                    *dwi += d * ai;
                }
            }
        });

        if i == 0 {
            break;
        }

        // input gradient masked by the ReLU states of the previous layer
        let w = &params.weights[i];
        let mut da = vec![0.0; bsz * din];
        da.par_chunks_mut(PAR_ROWS * din)
            .zip(dz_cur.par_chunks(PAR_ROWS * dout))
            .zip(prev.par_chunks(PAR_ROWS * din))
            .for_each(|((da_chunk, dz_chunk), a_chunk)| {
                let rows = da_chunk.len() / din;
                for r in 0..rows {
                    let da_row = &mut da_chunk[r * din..(r + 1) * din];
                    let dz_row = &dz_chunk[r * dout..(r + 1) * dout];
                    let a_row = &a_chunk[r * din..(r + 1) * din];
                    for (o, &d) in dz_row.iter().enumerate() {
                        if d == 0.0 {
                            continue;
                        }
                        let w_row = &w[o * din..(o + 1) * din];
                        for (dai, wi) in da_row.iter_mut().zip(w_row) {
                            *dai += d * wi;
                        }
                    }
                    for (dai, &ai) in da_row.iter_mut().zip(a_row) {
                        if ai <= 0.0 {
                            *dai = 0.0;
                        }
                    }
                }
            });
        dz_cur = da;
    }

    Ok((loss, grads))
}

/// Mini-batch SGD settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainingConfig {
    pub batch_size: usize,
    pub step_size: f64,
    /// Multiply the step size by `decay_factor` every `decay_every`
    /// iterations, when set.
    pub decay_every: Option<usize>,
    pub decay_factor: f64,
    pub iterations: usize,
    /// Sup-norm clamp bound applied after every step.
    pub clamp_bound: f64,
    pub seed: u64,
}

impl Default for TrainingConfig {
    fn default() -> Self {
        Self {
            batch_size: 500,
            step_size: 0.05,
            decay_every: None,
            decay_factor: 0.5,
            iterations: 1000,
            clamp_bound: 10.0,
            seed: 0,
        }
    }
}

impl TrainingConfig {
    fn validate(&self) -> Result<()> {
        if self.batch_size == 0 || self.step_size < 0.0 || self.clamp_bound < 1.0 {
            return Err(Error::InvalidParameter(
                "training config out of range".into(),
            ));
        }
        Ok(())
    }
}

/// Per-epoch mean training loss and the final state of the run.
#[derive(Debug, Clone)]
pub struct TrainReport {
    pub epoch_losses: Vec<f64>,
    pub final_loss: f64,
    pub iterations_run: usize,
}

/// Train by mini-batch SGD with post-step clamping into the sup-norm ball.
///
/// Batches walk a freshly shuffled order each epoch; a fixed seed makes
/// the whole run bit-reproducible. Training aborts on a non-finite loss.
pub fn train(
    mut params: MlpParameters,
    data: &ClassificationSet,
    cfg: &TrainingConfig,
) -> Result<(MlpParameters, TrainReport)> {
    cfg.validate()?;
    if data.is_empty() {
        return Err(Error::InvalidParameter("training set is empty".into()));
    }
    if data.input_dim() != params.shape.input_dim() {
        return Err(Error::DimensionMismatch {
            expected: params.shape.input_dim(),
            got: data.input_dim(),
        });
    }
    let n = data.len();
    let batch = cfg.batch_size.min(n);
    let d0 = data.input_dim();
    let mut rng = seeded(cfg.seed);

    let mut order: Vec<u32> = (0..n as u32).collect();
    let mut cursor = n; // force an initial shuffle
    let mut batch_inputs = vec![0.0; batch * d0];
    let mut batch_targets = vec![0u32; batch];

    let mut epoch_losses = Vec::new();
    let mut epoch_acc = 0.0;
    let mut epoch_batches = 0usize;
    let mut last_loss = f64::NAN;

    for it in 0..cfg.iterations {
        if cursor + batch > n {
            if epoch_batches > 0 {
                epoch_losses.push(epoch_acc / epoch_batches as f64);
            }
            epoch_acc = 0.0;
            epoch_batches = 0;
            for i in (1..n).rev() {
                let j = rng.random_range(0..=i);
                order.swap(i, j);
            }
            cursor = 0;
        }
        for (slot, &idx) in order[cursor..cursor + batch].iter().enumerate() {
            batch_inputs[slot * d0..(slot + 1) * d0].copy_from_slice(data.input(idx as usize));
            batch_targets[slot] = data.target(idx as usize);
        }
        cursor += batch;

        let (loss, grads) = loss_and_grad(&params, &batch_inputs, &batch_targets)?;
        if !loss.is_finite() {
            return Err(Error::Diverged(format!(
                "training loss became non-finite at iteration {it}"
            )));
        }
        last_loss = loss;
        epoch_acc += loss;
        epoch_batches += 1;

        let step = match cfg.decay_every {
            Some(every) if every > 0 => cfg.step_size * cfg.decay_factor.powi((it / every) as i32),
            _ => cfg.step_size,
        };
        if step != 0.0 {
            for (w, g) in params.weights.iter_mut().zip(&grads.weights) {
                for (wi, gi) in w.iter_mut().zip(g) {
                    *wi = (*wi - step * gi).clamp(-cfg.clamp_bound, cfg.clamp_bound);
                }
            }
            for (b, g) in params.biases.iter_mut().zip(&grads.biases) {
                for (bi, gi) in b.iter_mut().zip(g) {
                    *bi = (*bi - step * gi).clamp(-cfg.clamp_bound, cfg.clamp_bound);
                }
            }
        }
    }
    if epoch_batches > 0 {
        epoch_losses.push(epoch_acc / epoch_batches as f64);
    }
    params.bound = cfg.clamp_bound;

    Ok((
        params,
        TrainReport {
            epoch_losses,
            final_loss: last_loss,
            iterations_run: cfg.iterations,
        },
    ))
}
