//! Metrics and statistics: confusion matrices, macro F1, multi-seed
//! aggregation and the two-tailed unpaired t-test.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::dataset::DensityClass;
use crate::error::{AgeError, Result};
use crate::scalar::Scalar;

pub const NUM_CLASSES: usize = 4;

/// Outcome of one training run: confusion matrix plus derived F1 scores.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunResult {
    pub seed: u64,
    /// rows = truth, cols = prediction.
    pub confusion: [[u64; NUM_CLASSES]; NUM_CLASSES],
    pub per_class_f1: [f64; NUM_CLASSES],
    pub macro_f1: f64,
}

impl RunResult {
    pub fn from_confusion(seed: u64, confusion: [[u64; NUM_CLASSES]; NUM_CLASSES]) -> Self {
        let (per_class_f1, macro_f1) = macro_f1_counts(&confusion);
        RunResult {
            seed,
            confusion,
            per_class_f1,
            macro_f1,
        }
    }
}

/// Build a confusion matrix from (truth, prediction) pairs.
pub fn confusion_matrix(
    truths: &[DensityClass],
    predictions: &[DensityClass],
) -> [[u64; NUM_CLASSES]; NUM_CLASSES] {
    assert_eq!(truths.len(), predictions.len());
    let mut m = [[0u64; NUM_CLASSES]; NUM_CLASSES];
    for (&t, &p) in truths.iter().zip(predictions.iter()) {
        m[t.index()][p.index()] += 1;
    }
    m
}

/// Per-class and macro F1 from a confusion matrix (rows = truth).
///
/// Convention: a class with `TP = 0` contributes `F1 = 0`, including the
/// case where the class is absent from both truth and prediction; the
/// macro average always divides by the fixed class count.
pub fn macro_f1_counts(confusion: &[[u64; NUM_CLASSES]; NUM_CLASSES]) -> ([f64; NUM_CLASSES], f64) {
    let mut per_class = [0.0f64; NUM_CLASSES];
    for c in 0..NUM_CLASSES {
        let tp = confusion[c][c] as f64;
        let fp: f64 = (0..NUM_CLASSES)
            .filter(|&r| r != c)
            .map(|r| confusion[r][c] as f64)
            .sum();
        let fn_: f64 = (0..NUM_CLASSES)
            .filter(|&p| p != c)
            .map(|p| confusion[c][p] as f64)
            .sum();
        per_class[c] = if tp > 0.0 {
            let precision = tp / (tp + fp);
            let recall = tp / (tp + fn_);
            2.0 * precision * recall / (precision + recall)
        } else {
            0.0
        };
    }
    let macro_f1 = per_class.iter().sum::<f64>() / NUM_CLASSES as f64;
    (per_class, macro_f1)
}

/// Mean and sample (n-1) standard deviation of macro F1 over runs.
pub fn aggregate_runs(results: &[RunResult]) -> Result<(f64, f64)> {
    if results.len() < 2 {
        return Err(AgeError::Validation(format!(
            "need at least 2 runs for a standard deviation, got {}",
            results.len()
        )));
    }
    let scores: Vec<f64> = results.iter().map(|r| r.macro_f1).collect();
    Ok(mean_std(&scores))
}

pub fn mean_std(scores: &[f64]) -> (f64, f64) {
    let n = scores.len() as f64;
    let mean = scores.iter().sum::<f64>() / n;
    let var = scores.iter().map(|s| (s - mean) * (s - mean)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TTestVariant {
    /// Classic Student t-test with pooled variance.
    Pooled,
    /// Welch's t-test with Satterthwaite degrees of freedom.
    Welch,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TTestResult {
    pub t_statistic: f64,
    pub degrees_of_freedom: f64,
    pub p_value: f64,
    pub variant: TTestVariant,
    /// Set when both variances are zero and the means differ: the t
    /// statistic is a limit, not a finite value.
    pub degenerate: bool,
}

/// Two-tailed unpaired t-test between two samples of run scores.
pub fn unpaired_ttest(a: &[f64], b: &[f64], variant: TTestVariant) -> Result<TTestResult> {
    if a.len() < 2 || b.len() < 2 {
        return Err(AgeError::Validation(format!(
            "each sample needs >= 2 observations, got {} and {}",
            a.len(),
            b.len()
        )));
    }
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mean_a, _) = mean_std(a);
    let (mean_b, _) = mean_std(b);
    let var_a = a.iter().map(|x| (x - mean_a) * (x - mean_a)).sum::<f64>() / (na - 1.0);
    let var_b = b.iter().map(|x| (x - mean_b) * (x - mean_b)).sum::<f64>() / (nb - 1.0);

    if var_a == 0.0 && var_b == 0.0 {
        // Defined cases: identical constants carry no evidence of a
        // difference; distinct constants are the p -> 0 limit.
        let equal = mean_a == mean_b;
        return Ok(TTestResult {
            t_statistic: if equal {
                0.0
            } else {
                f64::INFINITY * (mean_a - mean_b).signum()
            },
            degrees_of_freedom: na + nb - 2.0,
            p_value: if equal { 1.0 } else { 0.0 },
            variant,
            degenerate: !equal,
        });
    }

    let (t, dof) = match variant {
        TTestVariant::Pooled => {
            let dof = na + nb - 2.0;
            let pooled_var = ((na - 1.0) * var_a + (nb - 1.0) * var_b) / dof;
            let se = (pooled_var * (1.0 / na + 1.0 / nb)).sqrt();
            ((mean_a - mean_b) / se, dof)
        }
        TTestVariant::Welch => {
            let sa = var_a / na;
            let sb = var_b / nb;
            let se = (sa + sb).sqrt();
            let dof = (sa + sb) * (sa + sb) / (sa * sa / (na - 1.0) + sb * sb / (nb - 1.0));
            ((mean_a - mean_b) / se, dof)
        }
    };
    let p_value = two_tailed_p(t, dof);
    Ok(TTestResult {
        t_statistic: t,
        degrees_of_freedom: dof,
        p_value,
        variant,
        degenerate: false,
    })
}

/// Two-tailed p-value from the t distribution survival function:
/// `p = I_{df/(df+t^2)}(df/2, 1/2)` via the regularized incomplete beta.
pub fn two_tailed_p(t: f64, dof: f64) -> f64 {
    if !t.is_finite() {
        return 0.0;
    }
    let x = dof / (dof + t * t);
    regularized_incomplete_beta(0.5 * dof, 0.5, x).clamp(0.0, 1.0)
}

/// Natural log of the gamma function (Lanczos approximation, g=7, n=9).
pub fn ln_gamma(x: f64) -> f64 {
    if x < 0.5 {
        // reflection keeps the approximation in its accurate range
        let pi = std::f64::consts::PI;
        return (pi / (pi * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    const COEFFS: [f64; 8] = [
        676.5203681218851,
        -1259.1392167224028,
        771.32342877765313,
        -176.61502916214059,
        12.507343278686905,
        -0.13857109526572012,
        9.9843695780195716e-6,
        1.5056327351493116e-7,
    ];
    let x = x - 1.0;
    let mut acc = 0.99999999999980993;
    for (i, &c) in COEFFS.iter().enumerate() {
        acc += c / (x + (i + 1) as f64);
    }
    let t = x + 7.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + acc.ln()
}

/// Regularized incomplete beta function I_x(a, b) via the Lentz continued
/// fraction, with the symmetry transform for fast convergence.
pub fn regularized_incomplete_beta(a: f64, b: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    let ln_front = ln_gamma(a + b) - ln_gamma(a) - ln_gamma(b) + a * x.ln() + b * (1.0 - x).ln();
    let front = ln_front.exp();
    if x < (a + 1.0) / (a + b + 2.0) {
        front * beta_continued_fraction(a, b, x) / a
    } else {
        1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b
    }
}

fn beta_continued_fraction(a: f64, b: f64, x: f64) -> f64 {
    const MAX_ITER: usize = 300;
    const EPS: f64 = 1e-15;
    const TINY: f64 = 1e-300;

    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < TINY {
        d = TINY;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..=MAX_ITER {
        let m = m as f64;
        let m2 = 2.0 * m;

        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        h *= d * c;

        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < EPS {
            break;
        }
    }
    h
}

/// One row of the report grid: aggregated macro F1 for a method.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MethodSummary {
    pub method: String,
    pub probability: Option<f64>,
    pub num_runs: usize,
    pub mean_macro_f1: f64,
    pub std_macro_f1: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PairwiseComparison {
    pub method_a: String,
    pub method_b: String,
    pub ttest: TTestResult,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Report {
    pub summaries: Vec<MethodSummary>,
    pub comparisons: Vec<PairwiseComparison>,
    pub best_method: String,
}

/// Method key format used throughout the results files: `none`,
/// `re@0.2`, `age@0.6`, ...
pub fn method_key(mode: &str, probability: Option<f64>) -> String {
    match probability {
        Some(p) => format!("{mode}@{p}"),
        None => mode.to_string(),
    }
}

/// Aggregate per-method run results into the summary-table report.
///
/// Every method must carry the same number of runs; comparisons are
/// computed for each requested pair with the configured t-test variant.
pub fn build_report(
    runs: &BTreeMap<String, Vec<RunResult>>,
    comparisons: &[(String, String)],
    variant: TTestVariant,
) -> Result<Report> {
    if runs.is_empty() {
        return Err(AgeError::Validation("no run results to report".into()));
    }
    let counts: Vec<usize> = runs.values().map(|v| v.len()).collect();
    if counts.iter().any(|&c| c != counts[0]) {
        return Err(AgeError::Validation(format!(
            "unequal run counts across methods: {:?}",
            runs.keys().zip(counts.iter()).collect::<Vec<_>>()
        )));
    }

    let mut summaries = Vec::new();
    for (method, results) in runs {
        let scores: Vec<f64> = results.iter().map(|r| r.macro_f1).collect();
        let (mean, std) = if scores.len() >= 2 {
            mean_std(&scores)
        } else {
            (scores[0], 0.0)
        };
        let probability = method
            .split_once('@')
            .and_then(|(_, p)| p.parse::<f64>().ok());
        summaries.push(MethodSummary {
            method: method.clone(),
            probability,
            num_runs: scores.len(),
            mean_macro_f1: mean,
            std_macro_f1: std,
        });
    }
    let best_method = summaries
        .iter()
        .max_by(|a, b| a.mean_macro_f1.total_cmp(&b.mean_macro_f1))
        .map(|s| s.method.clone())
        .unwrap_or_default();

    let mut pairwise = Vec::new();
    for (a, b) in comparisons {
        let ra = runs.get(a).ok_or_else(|| {
            AgeError::Validation(format!("comparison references unknown method {a}"))
        })?;
        let rb = runs.get(b).ok_or_else(|| {
            AgeError::Validation(format!("comparison references unknown method {b}"))
        })?;
        let sa: Vec<f64> = ra.iter().map(|r| r.macro_f1).collect();
        let sb: Vec<f64> = rb.iter().map(|r| r.macro_f1).collect();
        pairwise.push(PairwiseComparison {
            method_a: a.clone(),
            method_b: b.clone(),
            ttest: unpaired_ttest(&sa, &sb, variant)?,
        });
    }

    Ok(Report {
        summaries,
        comparisons: pairwise,
        best_method,
    })
}

impl Report {
    /// Plain-text rendering: baseline row plus a probability grid of the
    /// erasing methods, then the pairwise test table.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "Mean macro F1 over {} runs (std in parens)",
            self.summaries.first().map(|s| s.num_runs).unwrap_or(0)
        );
        let _ = writeln!(out);

        for s in self.summaries.iter().filter(|s| s.probability.is_none()) {
            let best = if s.method == self.best_method { " *" } else { "" };
            let _ = writeln!(
                out,
                "{:<10} {:.4} ({:.3}){best}",
                s.method, s.mean_macro_f1, s.std_macro_f1
            );
        }

        let mut grid: BTreeMap<String, BTreeMap<String, &MethodSummary>> = BTreeMap::new();
        let mut probs: Vec<String> = Vec::new();
        for s in &self.summaries {
            if let Some(p) = s.probability {
                let mode = s.method.split('@').next().unwrap_or("").to_string();
                let p_key = format!("{p}");
                if !probs.contains(&p_key) {
                    probs.push(p_key.clone());
                }
                grid.entry(p_key).or_default().insert(mode, s);
            }
        }
        probs.sort_by(|a, b| {
            a.parse::<f64>()
                .unwrap_or(0.0)
                .total_cmp(&b.parse::<f64>().unwrap_or(0.0))
        });
        if !grid.is_empty() {
            let mut modes: Vec<String> = grid
                .values()
                .flat_map(|row| row.keys().cloned())
                .collect();
            modes.sort();
            modes.dedup();
            let _ = writeln!(out);
            let _ = write!(out, "{:<8}", "P");
            for m in &modes {
                let _ = write!(out, " {:<18}", m);
            }
            let _ = writeln!(out);
            for p in &probs {
                let _ = write!(out, "{:<8}", p);
                for m in &modes {
                    match grid.get(p).and_then(|row| row.get(m)) {
                        Some(s) => {
                            let best = if s.method == self.best_method { "*" } else { " " };
                            let _ = write!(
                                out,
                                " {:.4} ({:.3}){best}   ",
                                s.mean_macro_f1, s.std_macro_f1
                            );
                        }
                        None => {
                            let _ = write!(out, " {:<18}", "-");
                        }
                    }
                }
                let _ = writeln!(out);
            }
        }

        if !self.comparisons.is_empty() {
            let _ = writeln!(out);
            let _ = writeln!(out, "Pairwise two-tailed unpaired t-tests:");
            for c in &self.comparisons {
                let _ = writeln!(
                    out,
                    "  {} vs {}: t = {:.4}, dof = {:.2}, p = {:.6}{}",
                    c.method_a,
                    c.method_b,
                    c.ttest.t_statistic,
                    c.ttest.degrees_of_freedom,
                    c.ttest.p_value,
                    if c.ttest.degenerate {
                        " (degenerate)"
                    } else {
                        ""
                    }
                );
            }
        }
        out
    }
}

/// Macro F1 of the constant predictor that always answers `predicted`,
/// given per-class truth counts. Used as a floor in training tests.
pub fn constant_predictor_macro_f1(class_counts: &[u64; NUM_CLASSES], predicted: usize) -> f64 {
    let mut confusion = [[0u64; NUM_CLASSES]; NUM_CLASSES];
    for (c, &n) in class_counts.iter().enumerate() {
        confusion[c][predicted] = n;
    }
    macro_f1_counts(&confusion).1
}

/// Mean of a scalar slice; zero for an empty slice.
pub fn mean_of<T: Scalar>(values: &[T]) -> T {
    if values.is_empty() {
        return T::zero();
    }
    values.iter().copied().sum::<T>() / T::from_usize(values.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn run(seed: u64, f1: f64) -> RunResult {
        RunResult {
            seed,
            confusion: [[0; 4]; 4],
            per_class_f1: [f1; 4],
            macro_f1: f1,
        }
    }

    #[test]
    fn perfect_predictor_scores_one() {
        let confusion = [[5, 0, 0, 0], [0, 9, 0, 0], [0, 0, 2, 0], [0, 0, 0, 7]];
        let (_, macro_f1) = macro_f1_counts(&confusion);
        assert_abs_diff_eq!(macro_f1, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn all_predict_c_on_reference_test_counts() {
        // Test-split class counts 20/380/3060/540; a constant C predictor
        // gets F1_C = 2*0.765/1.765, the rest 0.
        let macro_f1 = constant_predictor_macro_f1(&[20, 380, 3060, 540], 2);
        assert_abs_diff_eq!(macro_f1, 0.2167, epsilon = 1e-4);
        assert_abs_diff_eq!(macro_f1, 0.21671388101983002, epsilon = 1e-12);
    }

    #[test]
    fn two_class_reduction_hand_computation() {
        let confusion = [[3, 1, 0, 0], [2, 4, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]];
        let (per_class, _) = macro_f1_counts(&confusion);
        assert_abs_diff_eq!(per_class[0], 2.0 / 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(per_class[1], 8.0 / 11.0, epsilon = 1e-12);
        let macro_2 = (per_class[0] + per_class[1]) / 2.0;
        assert_abs_diff_eq!(macro_2, 0.696969696969697, epsilon = 1e-12);
    }

    #[test]
    fn macro_f1_invariant_under_class_relabeling() {
        let confusion = [
            [12, 3, 1, 0],
            [2, 30, 4, 1],
            [0, 5, 50, 6],
            [1, 0, 7, 20],
        ];
        let (_, base) = macro_f1_counts(&confusion);
        let perm = [0usize, 3, 2, 1];
        let mut permuted = [[0u64; 4]; 4];
        for r in 0..4 {
            for c in 0..4 {
                permuted[perm[r]][perm[c]] = confusion[r][c];
            }
        }
        let (_, swapped) = macro_f1_counts(&permuted);
        assert_abs_diff_eq!(base, swapped, epsilon = 1e-15);
    }

    #[test]
    fn aggregate_hand_computation() {
        let results: Vec<RunResult> = [0.57, 0.58, 0.59, 0.60, 0.61]
            .iter()
            .enumerate()
            .map(|(i, &f1)| run(i as u64, f1))
            .collect();
        let (mean, std) = aggregate_runs(&results).unwrap();
        assert_abs_diff_eq!(mean, 0.59, epsilon = 1e-12);
        assert_abs_diff_eq!(std, 0.01581138830084191, epsilon = 1e-12);
    }

    #[test]
    fn aggregate_constant_sample() {
        let results: Vec<RunResult> = (0..5).map(|i| run(i, 0.59)).collect();
        let (mean, std) = aggregate_runs(&results).unwrap();
        assert_abs_diff_eq!(mean, 0.59, epsilon = 1e-15);
        assert_abs_diff_eq!(std, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn aggregate_is_permutation_invariant() {
        let mk = |order: &[f64]| -> (f64, f64) {
            let results: Vec<RunResult> = order
                .iter()
                .enumerate()
                .map(|(i, &f1)| run(i as u64, f1))
                .collect();
            aggregate_runs(&results).unwrap()
        };
        assert_eq!(mk(&[0.1, 0.5, 0.9]), mk(&[0.9, 0.1, 0.5]));
    }

    #[test]
    fn aggregate_requires_two_runs() {
        assert!(aggregate_runs(&[run(0, 0.5)]).is_err());
    }

    #[test]
    fn ttest_identical_samples_is_null() {
        let a = [0.5, 0.6, 0.7];
        let r = unpaired_ttest(&a, &a, TTestVariant::Pooled).unwrap();
        assert_abs_diff_eq!(r.t_statistic, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(r.p_value, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn ttest_matches_external_reference() {
        // Reference values computed with an independent statistical
        // package before this module was written.
        let a = [0.56, 0.57, 0.55, 0.56, 0.56];
        let b = [0.59, 0.60, 0.58, 0.59, 0.59];
        let r = unpaired_ttest(&a, &b, TTestVariant::Pooled).unwrap();
        assert_abs_diff_eq!(r.t_statistic, -6.70820393249936, epsilon = 1e-9);
        assert_abs_diff_eq!(r.degrees_of_freedom, 8.0, epsilon = 1e-12);
        assert_abs_diff_eq!(r.p_value, 0.000151420478576503, epsilon = 1e-9);
    }

    #[test]
    fn welch_matches_external_reference() {
        let a = [0.1, 0.2, 0.15, 0.12];
        let b = [0.11, 0.19, 0.16, 0.13, 0.18];
        let r = unpaired_ttest(&a, &b, TTestVariant::Welch).unwrap();
        assert_abs_diff_eq!(r.t_statistic, -0.434995878248563, epsilon = 1e-9);
        assert_abs_diff_eq!(r.degrees_of_freedom, 5.59424848203957, epsilon = 1e-9);
        assert_abs_diff_eq!(r.p_value, 0.679841403840025, epsilon = 1e-9);
    }

    #[test]
    fn pooled_and_welch_references_on_shared_pair() {
        let a = [1.0, 2.0, 3.0, 4.0, 5.0];
        let b = [2.0, 4.0, 6.0, 8.0, 10.0];
        let pooled = unpaired_ttest(&a, &b, TTestVariant::Pooled).unwrap();
        assert_abs_diff_eq!(pooled.t_statistic, -1.89736659610103, epsilon = 1e-9);
        assert_abs_diff_eq!(pooled.p_value, 0.0943497728424376, epsilon = 1e-9);
        let welch = unpaired_ttest(&a, &b, TTestVariant::Welch).unwrap();
        assert_abs_diff_eq!(welch.t_statistic, -1.89736659610103, epsilon = 1e-9);
        assert_abs_diff_eq!(welch.degrees_of_freedom, 5.88235294117647, epsilon = 1e-9);
        assert_abs_diff_eq!(welch.p_value, 0.107531194930627, epsilon = 1e-9);
    }

    #[test]
    fn ttest_swap_negates_t_keeps_p() {
        let a = [1.0, 2.0, 3.0, 4.0, 5.0];
        let b = [2.0, 4.0, 6.0, 8.0, 10.0];
        for variant in [TTestVariant::Pooled, TTestVariant::Welch] {
            let ab = unpaired_ttest(&a, &b, variant).unwrap();
            let ba = unpaired_ttest(&b, &a, variant).unwrap();
            assert_abs_diff_eq!(ab.t_statistic, -ba.t_statistic, epsilon = 1e-12);
            assert_abs_diff_eq!(ab.p_value, ba.p_value, epsilon = 1e-12);
        }
    }

    #[test]
    fn ttest_scale_invariance() {
        let a = [1.0, 2.0, 3.0, 4.0];
        let b = [1.5, 2.5, 3.1, 4.9];
        let k = 37.5;
        let ka: Vec<f64> = a.iter().map(|x| x * k).collect();
        let kb: Vec<f64> = b.iter().map(|x| x * k).collect();
        for variant in [TTestVariant::Pooled, TTestVariant::Welch] {
            let base = unpaired_ttest(&a, &b, variant).unwrap();
            let scaled = unpaired_ttest(&ka, &kb, variant).unwrap();
            assert_abs_diff_eq!(base.t_statistic, scaled.t_statistic, epsilon = 1e-10);
            assert_abs_diff_eq!(base.p_value, scaled.p_value, epsilon = 1e-10);
        }
    }

    #[test]
    fn ttest_degenerate_zero_variance() {
        let a = [0.5, 0.5, 0.5];
        let b = [0.7, 0.7, 0.7];
        let r = unpaired_ttest(&a, &b, TTestVariant::Pooled).unwrap();
        assert!(r.degenerate);
        assert_eq!(r.p_value, 0.0);

        let same = unpaired_ttest(&a, &a, TTestVariant::Welch).unwrap();
        assert!(!same.degenerate);
        assert_eq!(same.t_statistic, 0.0);
        assert_eq!(same.p_value, 1.0);
    }

    #[test]
    fn p_value_decreases_with_mean_gap() {
        let base = [0.0, 0.1, -0.1, 0.05, -0.05];
        let mut last_p = 1.1;
        for shift in [0.0, 0.05, 0.1, 0.2, 0.4, 0.8] {
            let b: Vec<f64> = base.iter().map(|x| x + shift).collect();
            let r = unpaired_ttest(&base, &b, TTestVariant::Pooled).unwrap();
            assert!(r.p_value <= last_p + 1e-12, "p not monotone at shift {shift}");
            last_p = r.p_value;
        }
    }

    #[test]
    fn report_structure_matches_grid_shape() {
        let mut runs: BTreeMap<String, Vec<RunResult>> = BTreeMap::new();
        runs.insert(
            "none".into(),
            (0..5).map(|s| run(s, 0.55 + s as f64 * 1e-3)).collect(),
        );
        for p in ["0.2", "0.4", "0.6", "0.8"] {
            runs.insert(format!("re@{p}"), (0..5).map(|s| run(s, 0.56)).collect());
            runs.insert(
                format!("age@{p}"),
                (0..5).map(|s| run(s, 0.58 + s as f64 * 1e-3)).collect(),
            );
        }
        let comparisons = vec![("age@0.6".to_string(), "none".to_string())];
        let report = build_report(&runs, &comparisons, TTestVariant::Pooled).unwrap();
        assert_eq!(report.summaries.len(), 9);
        assert_eq!(report.comparisons.len(), 1);
        let text = report.to_text();
        for p in ["0.2", "0.4", "0.6", "0.8"] {
            assert!(text.contains(p));
        }
        assert!(text.contains("none"));
        assert!(text.contains("age@0.6 vs none"));
    }

    #[test]
    fn report_single_method_no_comparisons() {
        let mut runs: BTreeMap<String, Vec<RunResult>> = BTreeMap::new();
        runs.insert("none".into(), vec![run(0, 0.5)]);
        let report = build_report(&runs, &[], TTestVariant::Pooled).unwrap();
        assert_eq!(report.summaries.len(), 1);
        assert!(report.comparisons.is_empty());
        assert_eq!(report.best_method, "none");
    }

    #[test]
    fn report_rejects_unequal_run_counts() {
        let mut runs: BTreeMap<String, Vec<RunResult>> = BTreeMap::new();
        runs.insert("none".into(), (0..5).map(|s| run(s, 0.5)).collect());
        runs.insert("age@0.6".into(), (0..3).map(|s| run(s, 0.6)).collect());
        assert!(build_report(&runs, &[], TTestVariant::Pooled).is_err());
    }
}
