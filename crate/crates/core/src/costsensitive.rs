//! Cost-sensitive training: population-complement class weights and a
//! one-hidden-layer network (dense → ELU → softmax) trained with
//! class-weighted cross-entropy.
//!
//! Weights follow `w = 1 − count/total`, kept as exact integer ratios so the
//! identity `Σ w = classes − 1` can be checked without rounding. The network
//! stores its parameters as one flat vector (first layer weights, first
//! layer biases, output weights, output biases) so gradients can be compared
//! coordinate-wise against finite differences.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::dataset::{ClassDistribution, Dataset};
use crate::nbayes::Vocabulary;
use crate::rng::{self, stream};

/// Floor applied to predicted probabilities inside the loss so a zero
/// probability yields a large finite loss instead of infinity.
pub const LOG_EPSILON: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CostError {
    #[error("distribution is empty")]
    EmptyDistribution,
    #[error("training set is empty")]
    EmptyTrainingSet,
    #[error("no weight provided for class {0}")]
    MissingWeight(String),
    #[error("expected dimension {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("parameter index {index} out of range for {count} parameters")]
    ParameterOutOfRange { index: usize, count: usize },
    #[error("class index {index} out of range for {classes} classes")]
    ClassOutOfRange { index: usize, classes: usize },
    #[error("invalid configuration: {0}")]
    InvalidConfig(&'static str),
    #[error("batch is empty")]
    EmptyBatch,
    #[error("training diverged: parameters are no longer finite")]
    NonFiniteParameters,
}

/// Per-class loss weights `w = 1 − count/total`, stored as exact ratios over
/// the distribution total. Labels are in ascending order, matching the class
/// order used by the models.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassWeights {
    labels: Vec<String>,
    numerators: Vec<u64>,
    denominator: u64,
}

impl ClassWeights {
    /// Weights from a class distribution: each class gets the population
    /// share of all *other* classes, so rarer classes weigh more.
    pub fn from_distribution(dist: &ClassDistribution) -> Result<Self, CostError> {
        if dist.total() == 0 {
            return Err(CostError::EmptyDistribution);
        }
        let total = dist.total() as u64;
        let mut labels = Vec::with_capacity(dist.class_count());
        let mut numerators = Vec::with_capacity(dist.class_count());
        for (label, &count) in dist.counts() {
            labels.push(label.clone());
            numerators.push(total - count as u64);
        }
        Ok(Self { labels, numerators, denominator: total })
    }

    /// All-one weights: the weighted loss with these is the plain
    /// cross-entropy, bit for bit.
    pub fn unit(labels: &[String]) -> Self {
        Self { labels: labels.to_vec(), numerators: vec![1; labels.len()], denominator: 1 }
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn weight(&self, index: usize) -> f64 {
        self.numerators[index] as f64 / self.denominator as f64
    }

    pub fn weights(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.weight(i)).collect()
    }

    pub fn weight_for(&self, label: &str) -> Option<f64> {
        self.labels.iter().position(|l| l == label).map(|i| self.weight(i))
    }

    /// Exact sum of the weights as `(numerator, denominator)`. For weights
    /// built from a distribution of k classes this is exactly `k − 1`.
    pub fn exact_sum(&self) -> (u128, u64) {
        (self.numerators.iter().map(|&n| n as u128).sum(), self.denominator)
    }
}

/// Exponential linear unit with unit saturation: identity for x ≥ 0,
/// `e^x − 1` below.
pub fn elu(x: f64) -> f64 {
    if x >= 0.0 {
        x
    } else {
        libm::exp(x) - 1.0
    }
}

/// Derivative of [`elu`].
pub fn elu_prime(x: f64) -> f64 {
    if x >= 0.0 {
        1.0
    } else {
        libm::exp(x)
    }
}

/// Numerically stable softmax: shifts by the maximum before exponentiating.
pub fn softmax(z: &[f64]) -> Vec<f64> {
    let mut max = f64::NEG_INFINITY;
    for &v in z {
        if v > max {
            max = v;
        }
    }
    let exps: Vec<f64> = z.iter().map(|&v| libm::exp(v - max)).collect();
    let sum: f64 = exps.iter().sum();
    exps.iter().map(|&e| e / sum).collect()
}

/// Cross-entropy of one prediction: `−ln(p[true_class])`, with the
/// probability floored at [`LOG_EPSILON`].
pub fn xent(probabilities: &[f64], true_class: usize) -> Result<f64, CostError> {
    if true_class >= probabilities.len() {
        return Err(CostError::ClassOutOfRange {
            index: true_class,
            classes: probabilities.len(),
        });
    }
    let p = probabilities[true_class];
    let clamped = if p > LOG_EPSILON { p } else { LOG_EPSILON };
    Ok(-libm::log(clamped))
}

/// Class-weighted cross-entropy: the true class's weight times [`xent`].
pub fn weighted_xent(
    probabilities: &[f64],
    true_class: usize,
    weights: &ClassWeights,
) -> Result<f64, CostError> {
    if true_class >= weights.len() {
        return Err(CostError::ClassOutOfRange { index: true_class, classes: weights.len() });
    }
    Ok(weights.weight(true_class) * xent(probabilities, true_class)?)
}

/// Update rule for [`train_mlp`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Optimizer {
    Sgd,
    Adam { beta1: f64, beta2: f64, epsilon: f64 },
}

impl Optimizer {
    /// Adam with the conventional moment decay rates and epsilon.
    pub fn adam_default() -> Self {
        Optimizer::Adam { beta1: 0.9, beta2: 0.999, epsilon: 1e-8 }
    }
}

/// Training hyperparameters. All randomness (initialization, batch order)
/// derives from `seed`.
#[derive(Debug, Clone, PartialEq)]
pub struct MlpConfig {
    pub hidden_units: usize,
    pub learning_rate: f64,
    pub epochs: usize,
    pub batch_size: usize,
    pub optimizer: Optimizer,
    pub seed: u64,
}

impl Default for MlpConfig {
    fn default() -> Self {
        Self {
            hidden_units: 64,
            learning_rate: 0.1,
            epochs: 20,
            batch_size: 32,
            optimizer: Optimizer::Sgd,
            seed: 0,
        }
    }
}

/// One-hidden-layer network over bag-of-words inputs.
#[derive(Debug, Clone, PartialEq)]
pub struct MlpModel {
    labels: Vec<String>,
    input_dim: usize,
    hidden_units: usize,
    /// Flat layout: `[w1 (hidden×input) | b1 (hidden) | w2 (classes×hidden) | b2 (classes)]`.
    params: Vec<f64>,
}

impl MlpModel {
    /// Fresh model with layer weights drawn uniformly within ±1/√fan_in and
    /// zero biases.
    pub fn init(
        labels: Vec<String>,
        input_dim: usize,
        hidden_units: usize,
        seed: u64,
    ) -> Result<Self, CostError> {
        if labels.is_empty() {
            return Err(CostError::InvalidConfig("model needs at least one class"));
        }
        if hidden_units == 0 {
            return Err(CostError::InvalidConfig("hidden layer needs at least one unit"));
        }
        let k = labels.len();
        let mut model = Self {
            labels,
            input_dim,
            hidden_units,
            params: vec![0.0; hidden_units * input_dim + hidden_units + k * hidden_units + k],
        };
        let mut rng = rng::stream_rng(seed, stream::INIT);
        let w1_bound = 1.0 / libm::sqrt(if input_dim == 0 { 1.0 } else { input_dim as f64 });
        for i in 0..hidden_units * input_dim {
            model.params[i] = (2.0 * rng.gen::<f64>() - 1.0) * w1_bound;
        }
        let w2_bound = 1.0 / libm::sqrt(hidden_units as f64);
        let w2_start = model.w2_offset();
        for i in 0..k * hidden_units {
            model.params[w2_start + i] = (2.0 * rng.gen::<f64>() - 1.0) * w2_bound;
        }
        Ok(model)
    }

    /// Rebuilds a model from its dimensions and flat parameter vector.
    pub fn from_parts(
        labels: Vec<String>,
        input_dim: usize,
        hidden_units: usize,
        params: Vec<f64>,
    ) -> Result<Self, CostError> {
        if labels.is_empty() {
            return Err(CostError::InvalidConfig("model needs at least one class"));
        }
        if hidden_units == 0 {
            return Err(CostError::InvalidConfig("hidden layer needs at least one unit"));
        }
        let k = labels.len();
        let expected = hidden_units * input_dim + hidden_units + k * hidden_units + k;
        if params.len() != expected {
            return Err(CostError::DimensionMismatch { expected, got: params.len() });
        }
        Ok(Self { labels, input_dim, hidden_units, params })
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn input_dim(&self) -> usize {
        self.input_dim
    }

    pub fn hidden_units(&self) -> usize {
        self.hidden_units
    }

    pub fn parameter_count(&self) -> usize {
        self.params.len()
    }

    pub fn parameter(&self, index: usize) -> Result<f64, CostError> {
        self.params
            .get(index)
            .copied()
            .ok_or(CostError::ParameterOutOfRange { index, count: self.params.len() })
    }

    pub fn set_parameter(&mut self, index: usize, value: f64) -> Result<(), CostError> {
        let count = self.params.len();
        match self.params.get_mut(index) {
            Some(slot) => {
                *slot = value;
                Ok(())
            }
            None => Err(CostError::ParameterOutOfRange { index, count }),
        }
    }

    /// Flat copy of all parameters, in the documented layout.
    pub fn parameters(&self) -> Vec<f64> {
        self.params.clone()
    }

    fn b1_offset(&self) -> usize {
        self.hidden_units * self.input_dim
    }

    fn w2_offset(&self) -> usize {
        self.b1_offset() + self.hidden_units
    }

    fn b2_offset(&self) -> usize {
        self.w2_offset() + self.labels.len() * self.hidden_units
    }

    fn check_input(&self, x: &[f64]) -> Result<(), CostError> {
        if x.len() != self.input_dim {
            return Err(CostError::DimensionMismatch { expected: self.input_dim, got: x.len() });
        }
        Ok(())
    }

    /// Pre-activation and post-activation values of the hidden layer.
    fn hidden(&self, x: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let d = self.input_dim;
        let b1 = self.b1_offset();
        let mut z1 = Vec::with_capacity(self.hidden_units);
        for h in 0..self.hidden_units {
            let mut z = self.params[b1 + h];
            let row = &self.params[h * d..(h + 1) * d];
            for (w, xi) in row.iter().zip(x) {
                z += w * xi;
            }
            z1.push(z);
        }
        let a1 = z1.iter().map(|&z| elu(z)).collect();
        (z1, a1)
    }

    fn logits(&self, a1: &[f64]) -> Vec<f64> {
        let k = self.labels.len();
        let h_units = self.hidden_units;
        let w2 = self.w2_offset();
        let b2 = self.b2_offset();
        let mut z2 = Vec::with_capacity(k);
        for c in 0..k {
            let mut z = self.params[b2 + c];
            let row = &self.params[w2 + c * h_units..w2 + (c + 1) * h_units];
            for (w, ah) in row.iter().zip(a1) {
                z += w * ah;
            }
            z2.push(z);
        }
        z2
    }

    /// Softmax class probabilities for one input vector.
    pub fn forward(&self, x: &[f64]) -> Result<Vec<f64>, CostError> {
        self.check_input(x)?;
        let (_, a1) = self.hidden(x);
        Ok(softmax(&self.logits(&a1)))
    }

    /// Label with the highest probability; on ties the earlier label wins.
    pub fn predict(&self, x: &[f64]) -> Result<&str, CostError> {
        let probs = self.forward(x)?;
        let mut best = 0;
        for (c, p) in probs.iter().enumerate().skip(1) {
            if *p > probs[best] {
                best = c;
            }
        }
        Ok(&self.labels[best])
    }

    /// Mean (optionally class-weighted) cross-entropy over a batch. With
    /// `class_weights = None` no multiplication happens at all, which keeps
    /// an all-one weighted run bit-identical to an unweighted one.
    pub fn batch_loss(
        &self,
        inputs: &[Vec<f64>],
        targets: &[usize],
        class_weights: Option<&[f64]>,
    ) -> Result<f64, CostError> {
        let sel: Vec<usize> = (0..inputs.len()).collect();
        self.selected_loss(inputs, targets, &sel, class_weights)
    }

    /// Gradient of [`batch_loss`](Self::batch_loss) with respect to every
    /// parameter, in the flat layout.
    pub fn batch_gradient(
        &self,
        inputs: &[Vec<f64>],
        targets: &[usize],
        class_weights: Option<&[f64]>,
    ) -> Result<Vec<f64>, CostError> {
        let sel: Vec<usize> = (0..inputs.len()).collect();
        self.selected_gradient(inputs, targets, &sel, class_weights)
    }

    fn check_batch(
        &self,
        inputs: &[Vec<f64>],
        targets: &[usize],
        selection: &[usize],
        class_weights: Option<&[f64]>,
    ) -> Result<(), CostError> {
        if selection.is_empty() {
            return Err(CostError::EmptyBatch);
        }
        if inputs.len() != targets.len() {
            return Err(CostError::DimensionMismatch {
                expected: inputs.len(),
                got: targets.len(),
            });
        }
        if let Some(w) = class_weights {
            if w.len() != self.labels.len() {
                return Err(CostError::DimensionMismatch {
                    expected: self.labels.len(),
                    got: w.len(),
                });
            }
        }
        for &i in selection {
            self.check_input(&inputs[i])?;
            if targets[i] >= self.labels.len() {
                return Err(CostError::ClassOutOfRange {
                    index: targets[i],
                    classes: self.labels.len(),
                });
            }
        }
        Ok(())
    }

    fn selected_loss(
        &self,
        inputs: &[Vec<f64>],
        targets: &[usize],
        selection: &[usize],
        class_weights: Option<&[f64]>,
    ) -> Result<f64, CostError> {
        self.check_batch(inputs, targets, selection, class_weights)?;
        let mut sum = 0.0;
        for &i in selection {
            let probs = self.forward(&inputs[i])?;
            let loss = xent(&probs, targets[i])?;
            sum += match class_weights {
                Some(w) => w[targets[i]] * loss,
                None => loss,
            };
        }
        Ok(sum / selection.len() as f64)
    }

    fn selected_gradient(
        &self,
        inputs: &[Vec<f64>],
        targets: &[usize],
        selection: &[usize],
        class_weights: Option<&[f64]>,
    ) -> Result<Vec<f64>, CostError> {
        self.check_batch(inputs, targets, selection, class_weights)?;
        let d = self.input_dim;
        let h_units = self.hidden_units;
        let k = self.labels.len();
        let b1 = self.b1_offset();
        let w2 = self.w2_offset();
        let b2 = self.b2_offset();

        let mut grad = vec![0.0; self.params.len()];
        for &i in selection {
            let x = &inputs[i];
            let y = targets[i];
            let (z1, a1) = self.hidden(x);
            let probs = softmax(&self.logits(&a1));

            // d(loss)/d(logit c) = w[y]·(p_c − [c = y]); the probability
            // floor in the loss is ignored here — it only matters for
            // degenerate predictions where the loss is saturated anyway.
            let mut dz2 = probs;
            dz2[y] -= 1.0;
            if let Some(w) = class_weights {
                for g in dz2.iter_mut() {
                    *g = w[y] * *g;
                }
            }

            for c in 0..k {
                for h in 0..h_units {
                    grad[w2 + c * h_units + h] += dz2[c] * a1[h];
                }
                grad[b2 + c] += dz2[c];
            }

            for h in 0..h_units {
                let mut da = 0.0;
                for c in 0..k {
                    da += self.params[w2 + c * h_units + h] * dz2[c];
                }
                let dz1 = da * elu_prime(z1[h]);
                for (slot, xi) in grad[h * d..(h + 1) * d].iter_mut().zip(x) {
                    *slot += dz1 * xi;
                }
                grad[b1 + h] += dz1;
            }
        }

        let scale = selection.len() as f64;
        for g in grad.iter_mut() {
            *g /= scale;
        }
        Ok(grad)
    }
}

/// A trained model plus its loss trace: `epoch_loss[0]` is the full-dataset
/// loss before any update, followed by one entry per epoch.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainReport {
    pub model: MlpModel,
    pub epoch_loss: Vec<f64>,
}

/// Trains the network with minibatch gradient steps on the mean weighted
/// cross-entropy. Rows are vectorized through `vocabulary`; classes are
/// ordered by ascending label. `class_weights = None` trains with the plain
/// unweighted loss.
pub fn train_mlp(
    train: &Dataset,
    vocabulary: &Vocabulary,
    class_weights: Option<&ClassWeights>,
    config: &MlpConfig,
) -> Result<TrainReport, CostError> {
    if train.is_empty() {
        return Err(CostError::EmptyTrainingSet);
    }
    if !(config.learning_rate > 0.0 && config.learning_rate.is_finite()) {
        return Err(CostError::InvalidConfig("learning rate must be positive and finite"));
    }
    if config.batch_size == 0 {
        return Err(CostError::InvalidConfig("batch size must be at least 1"));
    }

    let dist = train.class_distribution();
    let labels: Vec<String> = dist.labels().map(String::from).collect();
    let weight_vec: Option<Vec<f64>> = match class_weights {
        Some(w) => {
            let mut per_class = Vec::with_capacity(labels.len());
            for label in &labels {
                per_class.push(
                    w.weight_for(label).ok_or_else(|| CostError::MissingWeight(label.clone()))?,
                );
            }
            Some(per_class)
        }
        None => None,
    };
    let weight_slice = weight_vec.as_deref();

    let inputs: Vec<Vec<f64>> =
        train.iter().map(|ex| vocabulary.count_vector(&ex.occurrence)).collect();
    let targets: Vec<usize> = train
        .iter()
        .map(|ex| labels.iter().position(|l| l == &ex.label).expect("label from distribution"))
        .collect();

    let mut model = MlpModel::init(
        labels,
        vocabulary.len(),
        config.hidden_units,
        rng::derive(config.seed, stream::INIT),
    )?;

    let all: Vec<usize> = (0..inputs.len()).collect();
    let mut epoch_loss = Vec::with_capacity(config.epochs + 1);
    epoch_loss.push(model.selected_loss(&inputs, &targets, &all, weight_slice)?);

    let mut order = all.clone();
    let mut shuffle_rng = rng::stream_rng(config.seed, stream::TRAIN);
    let mut adam_m = vec![0.0; model.parameter_count()];
    let mut adam_v = vec![0.0; model.parameter_count()];
    let mut adam_t = 0u32;

    for _ in 0..config.epochs {
        order.shuffle(&mut shuffle_rng);
        for batch in order.chunks(config.batch_size) {
            let grad = model.selected_gradient(&inputs, &targets, batch, weight_slice)?;
            match config.optimizer {
                Optimizer::Sgd => {
                    for (p, g) in model.params.iter_mut().zip(&grad) {
                        *p -= config.learning_rate * g;
                    }
                }
                Optimizer::Adam { beta1, beta2, epsilon } => {
                    adam_t += 1;
                    let bc1 = 1.0 - libm::pow(beta1, adam_t as f64);
                    let bc2 = 1.0 - libm::pow(beta2, adam_t as f64);
                    for ((p, g), (m, v)) in model
                        .params
                        .iter_mut()
                        .zip(&grad)
                        .zip(adam_m.iter_mut().zip(adam_v.iter_mut()))
                    {
                        *m = beta1 * *m + (1.0 - beta1) * g;
                        *v = beta2 * *v + (1.0 - beta2) * g * g;
                        let m_hat = *m / bc1;
                        let v_hat = *v / bc2;
                        *p -= config.learning_rate * m_hat / (libm::sqrt(v_hat) + epsilon);
                    }
                }
            }
            if model.params.iter().any(|p| !p.is_finite()) {
                return Err(CostError::NonFiniteParameters);
            }
        }
        epoch_loss.push(model.selected_loss(&inputs, &targets, &all, weight_slice)?);
    }

    Ok(TrainReport { model, epoch_loss })
}
