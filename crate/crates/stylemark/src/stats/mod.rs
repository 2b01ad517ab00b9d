//! One-way ANOVA across translator groups with Tukey HSD pairwise
//! comparison, plus a per-metric suite over feature vectors and the
//! table-shaped CSV report.

mod special;

pub use special::{f_cdf, inc_beta, inc_gamma, ln_gamma, norm_cdf, norm_pdf, studentized_range_cdf};

use std::fmt::Write as _;

use thiserror::Error;

use crate::corpus::VariantId;
use crate::features::{scalar_metrics, FeatureVector};

/// Significance threshold used for starring report entries.
pub const SIGNIFICANCE_LEVEL: f64 = 0.05;

/// One group's sample: a label and one value per book.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupSample {
    pub label: VariantId,
    pub values: Vec<f64>,
}

impl GroupSample {
    pub fn new(label: VariantId, values: Vec<f64>) -> GroupSample {
        GroupSample { label, values }
    }

    fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    /// Sample standard deviation (n − 1 denominator).
    fn std(&self) -> f64 {
        let mean = self.mean();
        let ss: f64 = self.values.iter().map(|v| (v - mean).powi(2)).sum();
        (ss / (self.values.len() as f64 - 1.0)).sqrt()
    }
}

/// Mean and spread of one group.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupStat {
    pub label: VariantId,
    pub n: usize,
    pub mean: f64,
    pub std: f64,
}

/// One pairwise comparison from Tukey HSD. `mean_diff` is always
/// mean(group_1) − mean(group_2).
#[derive(Debug, Clone, PartialEq)]
pub struct PairwiseResult {
    pub group_1: VariantId,
    pub group_2: VariantId,
    pub mean_diff: f64,
    pub p_adj: f64,
}

/// Omnibus and pairwise results for one metric.
#[derive(Debug, Clone, PartialEq)]
pub struct AnovaResult {
    pub feature_name: String,
    pub groups: Vec<GroupStat>,
    pub f: f64,
    pub p: f64,
    /// True when the omnibus p is below [`SIGNIFICANCE_LEVEL`].
    pub significant: bool,
    pub pairwise: Vec<PairwiseResult>,
}

#[derive(Debug, Error)]
pub enum StatsError {
    #[error("need at least two groups, got {0}")]
    TooFewGroups(usize),
    #[error("group {label} has {len} values; need at least 2")]
    GroupTooSmall { label: VariantId, len: usize },
    #[error("group {label} contains a non-finite value")]
    NonFinite { label: VariantId },
    #[error("documents cover {0} variant(s); need at least 2 groups of 2+ books")]
    NotEnoughData(usize),
}

fn check_groups(groups: &[GroupSample]) -> Result<(), StatsError> {
    if groups.len() < 2 {
        return Err(StatsError::TooFewGroups(groups.len()));
    }
    for g in groups {
        if g.values.len() < 2 {
            return Err(StatsError::GroupTooSmall { label: g.label, len: g.values.len() });
        }
        if g.values.iter().any(|v| !v.is_finite()) {
            return Err(StatsError::NonFinite { label: g.label });
        }
    }
    Ok(())
}

struct AnovaCore {
    ms_within: f64,
    df_within: f64,
    f: f64,
    p: f64,
}

fn anova_core(groups: &[GroupSample]) -> AnovaCore {
    let k = groups.len() as f64;
    let n_total: usize = groups.iter().map(|g| g.values.len()).sum();
    let n_total_f = n_total as f64;
    let grand_mean: f64 =
        groups.iter().flat_map(|g| &g.values).sum::<f64>() / n_total_f;

    let ss_between: f64 = groups
        .iter()
        .map(|g| g.values.len() as f64 * (g.mean() - grand_mean).powi(2))
        .sum();
    let ss_within: f64 = groups
        .iter()
        .map(|g| {
            let m = g.mean();
            g.values.iter().map(|v| (v - m).powi(2)).sum::<f64>()
        })
        .sum();

    let df_between = k - 1.0;
    let df_within = n_total_f - k;
    let ms_between = ss_between / df_between;
    let ms_within = ss_within / df_within;

    let (f, p) = if ms_within == 0.0 {
        if ms_between == 0.0 {
            (0.0, 1.0)
        } else {
            (f64::INFINITY, 0.0)
        }
    } else {
        let f = ms_between / ms_within;
        (f, 1.0 - f_cdf(f, df_between, df_within))
    };
    AnovaCore { ms_within, df_within, f, p }
}

/// One-way ANOVA. Returns (F, p, per-group means, per-group sample stds);
/// group order follows the input.
pub fn one_way_anova(
    groups: &[GroupSample],
) -> Result<(f64, f64, Vec<f64>, Vec<f64>), StatsError> {
    check_groups(groups)?;
    let core = anova_core(groups);
    let means = groups.iter().map(GroupSample::mean).collect();
    let stds = groups.iter().map(GroupSample::std).collect();
    Ok((core.f, core.p, means, stds))
}

/// Tukey HSD (Tukey–Kramer for unequal n) for every pair of groups,
/// in input order.
pub fn tukey_hsd(groups: &[GroupSample]) -> Result<Vec<PairwiseResult>, StatsError> {
    check_groups(groups)?;
    let core = anova_core(groups);
    let k = groups.len();
    let mut out = Vec::with_capacity(k * (k - 1) / 2);
    for i in 0..k {
        for j in (i + 1)..k {
            let gi = &groups[i];
            let gj = &groups[j];
            let mean_diff = gi.mean() - gj.mean();
            let p_adj = if core.ms_within == 0.0 {
                if mean_diff == 0.0 {
                    1.0
                } else {
                    0.0
                }
            } else {
                let se = (core.ms_within / 2.0
                    * (1.0 / gi.values.len() as f64 + 1.0 / gj.values.len() as f64))
                    .sqrt();
                let q = mean_diff.abs() / se;
                1.0 - studentized_range_cdf(q, k, core.df_within)
            };
            out.push(PairwiseResult { group_1: gi.label, group_2: gj.label, mean_diff, p_adj });
        }
    }
    Ok(out)
}

/// Groups documents by variant and runs ANOVA plus Tukey HSD for every
/// scalar lexical and syntactic metric. Within a group, books sort by id
/// so results do not depend on input order.
pub fn anova_suite(features: &[FeatureVector]) -> Result<Vec<AnovaResult>, StatsError> {
    let mut results = Vec::new();
    for (name, metric) in scalar_metrics() {
        let mut groups = Vec::new();
        for variant in VariantId::ALL {
            let mut rows: Vec<(&str, f64)> = features
                .iter()
                .filter(|v| v.doc_id.variant == variant)
                .map(|v| (v.doc_id.book_id.as_str(), metric(v)))
                .collect();
            rows.sort_by(|a, b| a.0.cmp(b.0));
            if rows.len() >= 2 {
                groups.push(GroupSample::new(variant, rows.into_iter().map(|r| r.1).collect()));
            }
        }
        if groups.len() < 2 {
            return Err(StatsError::NotEnoughData(groups.len()));
        }
        let (f, p, means, stds) = one_way_anova(&groups)?;
        let pairwise = tukey_hsd(&groups)?;
        let group_stats = groups
            .iter()
            .zip(means.iter().zip(&stds))
            .map(|(g, (&mean, &std))| GroupStat {
                label: g.label,
                n: g.values.len(),
                mean,
                std,
            })
            .collect();
        results.push(AnovaResult {
            feature_name: name.to_string(),
            groups: group_stats,
            f,
            p,
            significant: p < SIGNIFICANCE_LEVEL,
            pairwise,
        });
    }
    Ok(results)
}

fn star(p: f64) -> &'static str {
    if p < SIGNIFICANCE_LEVEL {
        "*"
    } else {
        ""
    }
}

/// Renders results as a CSV mirroring the published table layout: one row
/// per feature with per-group M/Std, F, and significance; pairwise rows
/// follow each feature whose omnibus test is significant. Sample standard
/// deviations use the n − 1 denominator.
pub fn render_anova_csv(results: &[AnovaResult]) -> String {
    let mut out = String::new();
    let labels: Vec<String> = results
        .first()
        .map(|r| r.groups.iter().map(|g| g.label.to_string()).collect())
        .unwrap_or_default();
    out.push_str("feature");
    for l in &labels {
        let _ = write!(out, ",{l}_mean,{l}_std");
    }
    out.push_str(",f,sig,group_1,group_2,mean_dif,pair_sig\n");
    for r in results {
        let _ = write!(out, "{}", r.feature_name);
        for g in &r.groups {
            let _ = write!(out, ",{},{}", g.mean, g.std);
        }
        let _ = writeln!(out, ",{},{}{},,,,", r.f, r.p, star(r.p));
        if r.significant {
            for pw in &r.pairwise {
                let blanks = ",".repeat(2 * r.groups.len() + 2);
                let _ = writeln!(
                    out,
                    "{blanks},{},{},{},{}{}",
                    pw.group_1,
                    pw.group_2,
                    pw.mean_diff,
                    pw.p_adj,
                    star(pw.p_adj)
                );
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(label: VariantId, values: &[f64]) -> GroupSample {
        GroupSample::new(label, values.to_vec())
    }

    fn three_groups() -> Vec<GroupSample> {
        vec![
            g(VariantId::HT, &[1.0, 2.0, 3.0]),
            g(VariantId::S2S, &[2.0, 3.0, 4.0]),
            g(VariantId::CTX, &[3.0, 4.0, 5.0]),
        ]
    }

    #[test]
    fn anova_hand_computed_example() {
        let (f, p, means, stds) = one_way_anova(&three_groups()).unwrap();
        assert!((f - 3.0).abs() < 1e-12, "F = {f}");
        assert!((p - 0.125).abs() < 1e-8, "p = {p}");
        assert_eq!(means, vec![2.0, 3.0, 4.0]);
        for s in stds {
            assert!((s - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn identical_groups_give_f_zero_p_one() {
        let groups = vec![
            g(VariantId::HT, &[1.0, 2.0, 3.0]),
            g(VariantId::S2S, &[1.0, 2.0, 3.0]),
            g(VariantId::CTX, &[1.0, 2.0, 3.0]),
        ];
        let (f, p, _, _) = one_way_anova(&groups).unwrap();
        assert_eq!(f, 0.0);
        assert_eq!(p, 1.0);
    }

    #[test]
    fn zero_within_variance_with_unequal_means_is_infinite_f() {
        let groups = vec![
            g(VariantId::HT, &[1.0, 1.0]),
            g(VariantId::S2S, &[2.0, 2.0]),
        ];
        let (f, p, _, _) = one_way_anova(&groups).unwrap();
        assert!(f.is_infinite());
        assert_eq!(p, 0.0);
    }

    #[test]
    fn group_too_small_is_rejected() {
        let groups = vec![g(VariantId::HT, &[1.0]), g(VariantId::S2S, &[1.0, 2.0])];
        assert!(matches!(
            one_way_anova(&groups),
            Err(StatsError::GroupTooSmall { .. })
        ));
    }

    #[test]
    fn non_finite_values_are_rejected() {
        let groups = vec![
            g(VariantId::HT, &[1.0, f64::NAN]),
            g(VariantId::S2S, &[1.0, 2.0]),
        ];
        assert!(matches!(one_way_anova(&groups), Err(StatsError::NonFinite { .. })));
    }

    /// Deterministic vector with sample mean 0 and sample std 1.
    fn unit_noise(n: usize) -> Vec<f64> {
        let raw: Vec<f64> = (0..n).map(|i| (i as f64 * 0.7321).sin()).collect();
        let mean = raw.iter().sum::<f64>() / n as f64;
        let ss: f64 = raw.iter().map(|v| (v - mean).powi(2)).sum();
        let std = (ss / (n as f64 - 1.0)).sqrt();
        raw.iter().map(|v| (v - mean) / std).collect()
    }

    #[test]
    fn vocabulary_richness_direction_check() {
        // group means/stds shaped like the published vocabulary-richness row
        let shape = unit_noise(25);
        let build = |label, mean: f64, std: f64| {
            GroupSample::new(label, shape.iter().map(|e| mean + std * e).collect())
        };
        let groups = vec![
            build(VariantId::HT, 0.080, 0.009),
            build(VariantId::S2S, 0.078, 0.008),
            build(VariantId::CTX, 0.072, 0.007),
        ];
        let (f, p, _, _) = one_way_anova(&groups).unwrap();
        assert!((f - 6.701_030_927_835_05).abs() < 1e-9, "F = {f}");
        assert!(p < 0.05, "p = {p}");
    }

    #[test]
    fn shift_and_scale_invariance() {
        let base = three_groups();
        let (f0, p0, _, _) = one_way_anova(&base).unwrap();
        let shifted: Vec<GroupSample> = base
            .iter()
            .map(|g| GroupSample::new(g.label, g.values.iter().map(|v| v + 17.5).collect()))
            .collect();
        let scaled: Vec<GroupSample> = base
            .iter()
            .map(|g| GroupSample::new(g.label, g.values.iter().map(|v| v * -3.25).collect()))
            .collect();
        let (f1, p1, _, _) = one_way_anova(&shifted).unwrap();
        let (f2, p2, _, _) = one_way_anova(&scaled).unwrap();
        assert!((f0 - f1).abs() < 1e-9 && (p0 - p1).abs() < 1e-9);
        assert!((f0 - f2).abs() < 1e-9 && (p0 - p2).abs() < 1e-9);
    }

    #[test]
    fn permuting_within_groups_changes_nothing() {
        let mut groups = three_groups();
        let (f0, p0, _, _) = one_way_anova(&groups).unwrap();
        groups[1].values.reverse();
        let (f1, p1, _, _) = one_way_anova(&groups).unwrap();
        assert_eq!(f0, f1);
        assert_eq!(p0, p1);
    }

    #[test]
    fn p_is_monotone_decreasing_in_f() {
        let d1 = 2.0;
        let d2 = 72.0;
        let mut prev = 1.0;
        for i in 1..50 {
            let f = i as f64 * 0.5;
            let p = 1.0 - f_cdf(f, d1, d2);
            assert!(p < prev);
            prev = p;
        }
    }

    #[test]
    fn tukey_identical_groups_all_p_one() {
        let groups = vec![
            g(VariantId::HT, &[1.0, 2.0, 3.0]),
            g(VariantId::S2S, &[1.0, 2.0, 3.0]),
            g(VariantId::CTX, &[1.0, 2.0, 3.0]),
        ];
        let pairwise = tukey_hsd(&groups).unwrap();
        assert_eq!(pairwise.len(), 3);
        for pw in pairwise {
            assert_eq!(pw.mean_diff, 0.0);
            assert!((pw.p_adj - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn tukey_textbook_q_is_borderline() {
        // k = 3, df = 12, q = 3.77 sits at the 5% critical point:
        // construct two equal-size groups inside a 3-group design whose
        // observed q equals 3.77 and check p_adj ~ 0.05.
        let p = 1.0 - studentized_range_cdf(3.77, 3, 12.0);
        assert!((p - 0.05).abs() < 0.005, "p = {p}");
    }

    #[test]
    fn tukey_distant_group_is_flagged() {
        let shape = unit_noise(10);
        let build = |label, mean: f64| {
            GroupSample::new(label, shape.iter().map(|e| mean + e).collect())
        };
        // third group shifted by 10 pooled standard deviations
        let groups = vec![
            build(VariantId::HT, 0.0),
            build(VariantId::S2S, 0.0),
            build(VariantId::CTX, 10.0),
        ];
        let pairwise = tukey_hsd(&groups).unwrap();
        for pw in &pairwise {
            if pw.group_2 == VariantId::CTX {
                assert!(pw.p_adj < 0.001, "p_adj = {}", pw.p_adj);
                assert!((pw.mean_diff + 10.0).abs() < 1e-9);
            } else {
                assert!(pw.p_adj > 0.9);
            }
        }
    }

    #[test]
    fn pairwise_sign_convention_is_group1_minus_group2() {
        let groups = vec![
            g(VariantId::CTX, &[4.0, 5.0, 6.0]),
            g(VariantId::HT, &[1.0, 2.0, 3.0]),
        ];
        let pairwise = tukey_hsd(&groups).unwrap();
        assert_eq!(pairwise[0].group_1, VariantId::CTX);
        assert_eq!(pairwise[0].group_2, VariantId::HT);
        assert!((pairwise[0].mean_diff - 3.0).abs() < 1e-12);

        let swapped = vec![groups[1].clone(), groups[0].clone()];
        let back = tukey_hsd(&swapped).unwrap();
        assert!((back[0].mean_diff + 3.0).abs() < 1e-12);
        assert!((back[0].p_adj - pairwise[0].p_adj).abs() < 1e-12);
    }

    #[test]
    fn report_prints_pairwise_only_for_significant_rows() {
        let results = vec![
            AnovaResult {
                feature_name: "alpha".into(),
                groups: vec![
                    GroupStat { label: VariantId::HT, n: 3, mean: 1.0, std: 0.1 },
                    GroupStat { label: VariantId::S2S, n: 3, mean: 2.0, std: 0.1 },
                ],
                f: 50.0,
                p: 0.001,
                significant: true,
                pairwise: vec![PairwiseResult {
                    group_1: VariantId::HT,
                    group_2: VariantId::S2S,
                    mean_diff: -1.0,
                    p_adj: 0.001,
                }],
            },
            AnovaResult {
                feature_name: "beta".into(),
                groups: vec![
                    GroupStat { label: VariantId::HT, n: 3, mean: 1.0, std: 0.1 },
                    GroupStat { label: VariantId::S2S, n: 3, mean: 1.0, std: 0.1 },
                ],
                f: 0.1,
                p: 0.9,
                significant: false,
                pairwise: vec![PairwiseResult {
                    group_1: VariantId::HT,
                    group_2: VariantId::S2S,
                    mean_diff: 0.0,
                    p_adj: 0.99,
                }],
            },
        ];
        let csv = render_anova_csv(&results);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 4); // header + alpha + alpha pairwise + beta
        assert!(lines[1].starts_with("alpha"));
        assert!(lines[1].contains("0.001*"));
        assert!(lines[2].contains("HT,S2S,-1,0.001*"));
        assert!(lines[3].starts_with("beta"));
    }
}
