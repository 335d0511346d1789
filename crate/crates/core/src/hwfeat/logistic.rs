use serde::{Deserialize, Serialize};

use super::FeaturePair;
use crate::classify::MetricsReport;
use crate::{Error, Label, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LogisticConfig {
    pub step: f64,
    pub iterations: usize,
}

impl Default for LogisticConfig {
    fn default() -> Self {
        Self {
            step: 0.1,
            iterations: 5000,
        }
    }
}

/// `P(fraud | F, H) = sigmoid(w_f F + w_h H + b)` in raw feature units,
/// with the Youden-optimal decision threshold on that probability.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogisticModel {
    pub weight_fidelity: f64,
    pub weight_entropy: f64,
    pub bias: f64,
    pub threshold: f64,
    pub youden_j: f64,
    pub iterations: usize,
    pub step: f64,
    pub log_likelihood: f64,
}

impl LogisticModel {
    pub fn score(&self, x: &FeaturePair) -> f64 {
        sigmoid(self.weight_fidelity * x.fidelity + self.weight_entropy * x.entropy + self.bias)
    }

    /// `Fraud` iff the score reaches the threshold.
    pub fn predict(&self, x: &FeaturePair) -> Label {
        if self.score(x) >= self.threshold {
            Label::Fraud
        } else {
            Label::NonFraud
        }
    }
}

fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// `log(1 + e^z)` without overflow.
fn softplus(z: f64) -> f64 {
    z.max(0.0) + (-z.abs()).exp().ln_1p()
}

fn check_classes(labels: &[Label]) -> Result<()> {
    for class in [Label::NonFraud, Label::Fraud] {
        if !labels.contains(&class) {
            return Err(Error::MissingClass(class));
        }
    }
    Ok(())
}

/// See [`fit_logistic_traced`].
pub fn fit_logistic(
    features: &[FeaturePair],
    labels: &[Label],
    config: &LogisticConfig,
) -> Result<LogisticModel> {
    fit_logistic_traced(features, labels, config).map(|(m, _)| m)
}

/// Full-batch gradient ascent on the mean log-likelihood over standardized
/// features, then the Youden threshold on the training scores. Also returns
/// the log-likelihood before every iteration and after the last.
pub fn fit_logistic_traced(
    features: &[FeaturePair],
    labels: &[Label],
    config: &LogisticConfig,
) -> Result<(LogisticModel, Vec<f64>)> {
    if features.len() != labels.len() {
        return Err(Error::DimensionMismatch {
            expected: features.len(),
            actual: labels.len(),
        });
    }
    if features.len() < 4 {
        return Err(Error::InvalidConfig("at least 4 jobs are needed".into()));
    }
    check_classes(labels)?;
    if features
        .iter()
        .any(|f| !f.fidelity.is_finite() || !f.entropy.is_finite())
    {
        return Err(Error::NonFinite("job features"));
    }
    if config.step.is_nan() || config.step <= 0.0 {
        return Err(Error::InvalidConfig("step must be positive".into()));
    }

    let n = features.len() as f64;
    let raw: Vec<[f64; 2]> = features.iter().map(|f| [f.fidelity, f.entropy]).collect();
    let mut mean = [0.0; 2];
    let mut sd = [0.0; 2];
    for d in 0..2 {
        mean[d] = raw.iter().map(|x| x[d]).sum::<f64>() / n;
        let var = raw.iter().map(|x| (x[d] - mean[d]).powi(2)).sum::<f64>() / n;
        sd[d] = if var > 0.0 { var.sqrt() } else { 1.0 };
    }
    let xs: Vec<[f64; 2]> = raw
        .iter()
        .map(|x| [(x[0] - mean[0]) / sd[0], (x[1] - mean[1]) / sd[1]])
        .collect();
    let ys: Vec<f64> = labels.iter().map(|l| l.class() as f64).collect();

    let log_likelihood = |w: &[f64; 3]| -> f64 {
        xs.iter()
            .zip(&ys)
            .map(|(x, y)| {
                let z = w[0] * x[0] + w[1] * x[1] + w[2];
                y * z - softplus(z)
            })
            .sum::<f64>()
            / n
    };

    let mut w = [0.0; 3];
    let mut trace = Vec::with_capacity(config.iterations + 1);
    for _ in 0..config.iterations {
        trace.push(log_likelihood(&w));
        let mut g = [0.0; 3];
        for (x, y) in xs.iter().zip(&ys) {
            let r = y - sigmoid(w[0] * x[0] + w[1] * x[1] + w[2]);
            g[0] += r * x[0];
            g[1] += r * x[1];
            g[2] += r;
        }
        for k in 0..3 {
            w[k] += config.step * g[k] / n;
        }
    }
    let ll = log_likelihood(&w);
    trace.push(ll);
    if w.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("logistic weights"));
    }

    let weight_fidelity = w[0] / sd[0];
    let weight_entropy = w[1] / sd[1];
    let bias = w[2] - weight_fidelity * mean[0] - weight_entropy * mean[1];
    let mut model = LogisticModel {
        weight_fidelity,
        weight_entropy,
        bias,
        threshold: 0.5,
        youden_j: 0.0,
        iterations: config.iterations,
        step: config.step,
        log_likelihood: ll,
    };
    let scores: Vec<f64> = features.iter().map(|f| model.score(f)).collect();
    let (threshold, j) = youden_threshold(&scores, labels)?;
    model.threshold = threshold;
    model.youden_j = j;
    Ok((model, trace))
}

/// Threshold maximizing `TPR - FPR` for the rule "fraud iff score >= t",
/// over the midpoints of consecutive distinct scores plus 0 and 1. Ties go
/// to the smallest threshold.
pub fn youden_threshold(scores: &[f64], labels: &[Label]) -> Result<(f64, f64)> {
    if scores.len() != labels.len() {
        return Err(Error::DimensionMismatch {
            expected: scores.len(),
            actual: labels.len(),
        });
    }
    check_classes(labels)?;
    let mut unique = scores.to_vec();
    unique.sort_by(f64::total_cmp);
    unique.dedup();
    let mut candidates = vec![0.0, 1.0];
    candidates.extend(unique.windows(2).map(|w| (w[0] + w[1]) / 2.0));
    candidates.sort_by(f64::total_cmp);
    candidates.dedup();

    let pos = labels.iter().filter(|l| l.is_fraud()).count() as f64;
    let neg = labels.len() as f64 - pos;
    let mut best = (candidates[0], f64::NEG_INFINITY);
    for &t in &candidates {
        let (mut tp, mut fp) = (0.0, 0.0);
        for (s, l) in scores.iter().zip(labels) {
            if *s >= t {
                if l.is_fraud() {
                    tp += 1.0;
                } else {
                    fp += 1.0;
                }
            }
        }
        let j = tp / pos - fp / neg;
        if j > best.1 {
            best = (t, j);
        }
    }
    Ok(best)
}

/// Confusion metrics of the fitted classifier; `threshold` in the report is
/// the model's probability threshold.
pub fn evaluate_jobs(
    features: &[FeaturePair],
    labels: &[Label],
    model: &LogisticModel,
) -> Result<MetricsReport> {
    if features.len() != labels.len() {
        return Err(Error::DimensionMismatch {
            expected: features.len(),
            actual: labels.len(),
        });
    }
    let (mut tp, mut tn, mut fp, mut fn_) = (0, 0, 0, 0);
    for (x, y) in features.iter().zip(labels) {
        match (y, model.predict(x)) {
            (Label::Fraud, Label::Fraud) => tp += 1,
            (Label::NonFraud, Label::NonFraud) => tn += 1,
            (Label::NonFraud, Label::Fraud) => fp += 1,
            (Label::Fraud, Label::NonFraud) => fn_ += 1,
        }
    }
    MetricsReport::from_counts(model.threshold, tp, tn, fp, fn_)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fp(f: f64, h: f64) -> FeaturePair {
        FeaturePair {
            fidelity: f,
            entropy: h,
        }
    }

    #[test]
    fn youden_hand_set() {
        let labels = [Label::NonFraud, Label::NonFraud, Label::Fraud, Label::Fraud];
        let (t, j) = youden_threshold(&[0.1, 0.2, 0.8, 0.9], &labels).unwrap();
        assert!((t - 0.5).abs() < 1e-15);
        assert_eq!(j, 1.0);
        let (t, j) = youden_threshold(&[0.3; 4], &labels).unwrap();
        assert_eq!((t, j), (0.0, 0.0));
        assert!(youden_threshold(&[0.1, 0.2], &[Label::Fraud, Label::Fraud]).is_err());
    }

    #[test]
    fn separable_clusters() {
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for i in 0..20 {
            let d = i as f64 * 0.005;
            xs.push(fp(0.8 + d, 1.0 + d));
            ys.push(Label::NonFraud);
            xs.push(fp(0.3 - d, 2.0 - d));
            ys.push(Label::Fraud);
        }
        let (m, trace) = fit_logistic_traced(&xs, &ys, &LogisticConfig::default()).unwrap();
        assert!(m.weight_fidelity < 0.0);
        for w in trace.windows(2) {
            assert!(w[1] >= w[0] - 1e-15);
        }
        let at_half = LogisticModel {
            threshold: 0.5,
            ..m.clone()
        };
        assert_eq!(evaluate_jobs(&xs, &ys, &at_half).unwrap().accuracy, 1.0);
        assert_eq!(evaluate_jobs(&xs, &ys, &m).unwrap().accuracy, 1.0);
        assert_eq!(
            fit_logistic(&xs, &ys, &LogisticConfig::default()).unwrap(),
            m
        );
    }

    #[test]
    fn uninformative_features() {
        let xs = vec![fp(0.5, 1.0); 10];
        let ys: Vec<Label> = (0..10)
            .map(|i| if i < 3 { Label::Fraud } else { Label::NonFraud })
            .collect();
        let m = fit_logistic(&xs, &ys, &LogisticConfig::default()).unwrap();
        assert_eq!((m.weight_fidelity, m.weight_entropy), (0.0, 0.0));
        // Sigmoid of the bias approaches the fraud prior.
        assert!((m.score(&xs[0]) - 0.3).abs() < 1e-3);
        assert_eq!(m.youden_j, 0.0);
    }

    #[test]
    fn zero_weights_score_one_half() {
        let m = LogisticModel {
            weight_fidelity: 0.0,
            weight_entropy: 0.0,
            bias: 0.0,
            threshold: 0.5,
            youden_j: 0.0,
            iterations: 0,
            step: 0.1,
            log_likelihood: 0.0,
        };
        let xs = [fp(0.1, 0.0), fp(0.9, 2.0)];
        let ys = [Label::Fraud, Label::NonFraud];
        assert_eq!(m.score(&xs[0]), 0.5);
        let r = evaluate_jobs(&xs, &ys, &m).unwrap();
        assert_eq!((r.tp, r.fp), (1, 1));
    }

    #[test]
    fn input_errors() {
        let xs = vec![fp(0.5, 1.0); 4];
        assert!(matches!(
            fit_logistic(&xs, &[Label::Fraud; 4], &LogisticConfig::default()),
            Err(Error::MissingClass(Label::NonFraud))
        ));
        let labels = [Label::Fraud, Label::NonFraud, Label::Fraud, Label::NonFraud];
        let mut bad = xs.clone();
        bad[0].entropy = f64::NAN;
        assert!(fit_logistic(&bad, &labels, &LogisticConfig::default()).is_err());
        assert!(fit_logistic(&xs[..3], &labels[..3], &LogisticConfig::default()).is_err());
    }
}
