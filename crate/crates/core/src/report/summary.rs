use std::cmp::Ordering;

use crate::bench::{ResultRow, ResultsTable};
use crate::error::{Error, Result};
use crate::stats::{bonferroni_adjust, clopper_pearson, mean_t_interval};

/// Row fields a summary can be grouped by. Rows are always split by metric,
/// and grouping by method also splits by parameter set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum GroupField {
    Method,
    Signal,
    Snr,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Statistic {
    Mean,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntervalKind {
    /// Exact binomial interval on the fraction of nonzero values.
    ClopperPearson,
    /// Student-t interval around the mean.
    StudentT,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportSpec {
    pub group_by: Vec<GroupField>,
    pub statistic: Statistic,
    /// `None` picks Clopper-Pearson for the `detected` metric and Student-t otherwise.
    pub interval: Option<IntervalKind>,
    pub confidence: f64,
    pub bonferroni_comparisons: usize,
}

impl Default for ReportSpec {
    fn default() -> Self {
        Self {
            group_by: vec![GroupField::Method, GroupField::Signal, GroupField::Snr],
            statistic: Statistic::Mean,
            interval: None,
            confidence: 0.95,
            bonferroni_comparisons: 1,
        }
    }
}

impl ReportSpec {
    /// Defaults with one Bonferroni comparison per method and parameter set in `table`.
    pub fn for_table(table: &ResultsTable) -> Self {
        let mut methods: Vec<(&str, usize)> = table.rows().iter().map(|r| (r.method.as_str(), r.param_set_id)).collect();
        methods.dedup();
        methods.sort_unstable();
        methods.dedup();
        Self {
            bonferroni_comparisons: methods.len().max(1),
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.group_by.is_empty() {
            return Err(Error::InvalidParameter("group_by must not be empty".into()));
        }
        bonferroni_adjust(self.confidence, self.bonferroni_comparisons)?;
        Ok(())
    }

    fn groups(&self, field: GroupField) -> bool {
        self.group_by.contains(&field)
    }

    fn interval_for(&self, metric: &str) -> IntervalKind {
        self.interval.unwrap_or(if metric == "detected" {
            IntervalKind::ClopperPearson
        } else {
            IntervalKind::StudentT
        })
    }
}

/// Statistic of one group. Ungrouped fields are `None`.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub metric: String,
    pub method: Option<String>,
    pub param_set_id: Option<usize>,
    pub signal: Option<String>,
    pub snr_db: Option<f64>,
    /// NaN when every value of the group is NaN.
    pub mean: f64,
    pub lo: f64,
    pub hi: f64,
    pub interval: IntervalKind,
    /// Non-NaN values used.
    pub count: usize,
    pub nan_count: usize,
    pub degenerate: bool,
}

impl SummaryRow {
    pub fn half_width(&self) -> f64 {
        0.5 * (self.hi - self.lo)
    }

    fn key_cmp(&self, other: &Self) -> Ordering {
        self.metric
            .cmp(&other.metric)
            .then_with(|| self.method.cmp(&other.method))
            .then(self.param_set_id.cmp(&other.param_set_id))
            .then_with(|| self.signal.cmp(&other.signal))
            .then_with(|| match (self.snr_db, other.snr_db) {
                (Some(a), Some(b)) => a.total_cmp(&b),
                (a, b) => a.is_some().cmp(&b.is_some()),
            })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Summary {
    pub spec: ReportSpec,
    /// Per-interval confidence after the Bonferroni adjustment.
    pub adjusted_confidence: f64,
    pub rows: Vec<SummaryRow>,
}

impl Summary {
    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn nan_count(&self) -> usize {
        self.rows.iter().map(|r| r.nan_count).sum()
    }
}

fn group_key(spec: &ReportSpec, r: &ResultRow) -> SummaryRow {
    let by_method = spec.groups(GroupField::Method);
    SummaryRow {
        metric: r.metric.clone(),
        method: by_method.then(|| r.method.clone()),
        param_set_id: by_method.then_some(r.param_set_id),
        signal: spec.groups(GroupField::Signal).then(|| r.signal.clone()),
        snr_db: spec.groups(GroupField::Snr).then_some(r.snr_db),
        mean: f64::NAN,
        lo: f64::NAN,
        hi: f64::NAN,
        interval: spec.interval_for(&r.metric),
        count: 0,
        nan_count: 0,
        degenerate: true,
    }
}

fn fill(row: &mut SummaryRow, values: &[f64], confidence: f64) -> Result<()> {
    let finite: Vec<f64> = values.iter().copied().filter(|v| !v.is_nan()).collect();
    row.count = finite.len();
    row.nan_count = values.len() - finite.len();
    if finite.is_empty() {
        return Ok(());
    }
    match row.interval {
        IntervalKind::StudentT => {
            let m = mean_t_interval(&finite, confidence)?;
            (row.mean, row.lo, row.hi, row.degenerate) = (m.mean, m.lo, m.hi, m.degenerate);
        }
        IntervalKind::ClopperPearson => {
            let successes = finite.iter().filter(|&&v| v != 0.0).count();
            let (lo, hi) = clopper_pearson(successes as u64, finite.len() as u64, confidence)?;
            row.mean = successes as f64 / finite.len() as f64;
            (row.lo, row.hi, row.degenerate) = (lo, hi, false);
        }
    }
    Ok(())
}

/// Groups rows by metric and the fields of `spec.group_by`, sorted by key.
/// NaN values are excluded and counted.
pub fn summarize(table: &ResultsTable, spec: &ReportSpec) -> Result<Summary> {
    spec.validate()?;
    let confidence = bonferroni_adjust(spec.confidence, spec.bonferroni_comparisons)?;
    let mut keyed: Vec<(SummaryRow, f64)> = table.rows().iter().map(|r| (group_key(spec, r), r.value)).collect();
    keyed.sort_by(|a, b| a.0.key_cmp(&b.0));
    let mut rows = Vec::new();
    let mut start = 0;
    while start < keyed.len() {
        let mut end = start + 1;
        while end < keyed.len() && keyed[end].0.key_cmp(&keyed[start].0) == Ordering::Equal {
            end += 1;
        }
        let values: Vec<f64> = keyed[start..end].iter().map(|(_, v)| *v).collect();
        let mut row = keyed[start].0.clone();
        fill(&mut row, &values, confidence)?;
        rows.push(row);
        start = end;
    }
    Ok(Summary {
        spec: spec.clone(),
        adjusted_confidence: confidence,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::HashMap;

    fn row(method: &str, signal: &str, snr: f64, rep: usize, metric: &str, value: f64) -> ResultRow {
        ResultRow {
            method: method.into(),
            param_set_id: 0,
            signal: signal.into(),
            snr_db: snr,
            repetition: rep,
            metric: metric.into(),
            value,
            runtime_s: 0.0,
            error: None,
        }
    }

    #[test]
    fn single_row_group_is_degenerate() {
        let t = ResultsTable::new(vec![row("hard", "s", 0.0, 0, "qrf", 4.5)]);
        let s = summarize(&t, &ReportSpec::default()).unwrap();
        assert_eq!(s.rows.len(), 1);
        let r = &s.rows[0];
        assert_eq!((r.mean, r.lo, r.hi, r.count), (4.5, 4.5, 4.5, 1));
        assert!(r.degenerate);
    }

    #[test]
    fn mean_of_one_two_three() {
        let t = ResultsTable::new((0..3).map(|i| row("hard", "s", 0.0, i, "qrf", i as f64 + 1.0)).collect());
        let r = &summarize(&t, &ReportSpec::default()).unwrap().rows[0];
        assert_eq!(r.mean, 2.0);
        assert!(!r.degenerate && r.lo < 2.0 && r.hi > 2.0);
    }

    #[test]
    fn detection_group_uses_clopper_pearson() {
        let t = ResultsTable::new((0..20).map(|i| row("rank", "s", 0.0, i, "detected", f64::from(u8::from(i < 17)))).collect());
        let r = &summarize(&t, &ReportSpec::default()).unwrap().rows[0];
        let (lo, hi) = clopper_pearson(17, 20, 0.95).unwrap();
        assert_eq!(r.interval, IntervalKind::ClopperPearson);
        assert_eq!((r.mean, r.lo, r.hi), (0.85, lo, hi));
    }

    #[test]
    fn nan_values_are_counted_not_averaged() {
        let t = ResultsTable::new(vec![
            row("hard", "s", 0.0, 0, "qrf", 1.0),
            row("hard", "s", 0.0, 1, "qrf", f64::NAN),
            row("hard", "s", 0.0, 2, "qrf", 3.0),
            row("es", "s", 0.0, 0, "qrf", f64::NAN),
        ]);
        let s = summarize(&t, &ReportSpec::default()).unwrap();
        assert_eq!(s.nan_count(), 2);
        let es = s.rows.iter().find(|r| r.method.as_deref() == Some("es")).unwrap();
        assert!(es.mean.is_nan() && es.count == 0);
        let hard = s.rows.iter().find(|r| r.method.as_deref() == Some("hard")).unwrap();
        assert_eq!((hard.mean, hard.count, hard.nan_count), (2.0, 2, 1));
    }

    #[test]
    fn bonferroni_widens_intervals() {
        let t = ResultsTable::new((0..10).map(|i| row("hard", "s", 0.0, i, "qrf", (i * i) as f64)).collect());
        let one = summarize(&t, &ReportSpec::default()).unwrap();
        let five = summarize(&t, &ReportSpec { bonferroni_comparisons: 5, ..ReportSpec::default() }).unwrap();
        assert_eq!(five.adjusted_confidence, 0.99);
        assert!(five.rows[0].half_width() > one.rows[0].half_width());
    }

    #[test]
    fn empty_group_by_is_rejected() {
        let spec = ReportSpec { group_by: vec![], ..ReportSpec::default() };
        assert!(summarize(&ResultsTable::default(), &spec).is_err());
    }

    #[test]
    fn comparisons_follow_method_count() {
        let mut rows = vec![row("a", "s", 0.0, 0, "qrf", 1.0), row("b", "s", 0.0, 0, "qrf", 1.0)];
        rows.push(ResultRow { param_set_id: 1, ..row("a", "s", 0.0, 0, "qrf", 1.0) });
        assert_eq!(ReportSpec::for_table(&ResultsTable::new(rows)).bonferroni_comparisons, 3);
    }

    proptest! {
        #[test]
        fn mean_matches_brute_force(values in prop::collection::vec((0usize..3, 0usize..2, 0usize..3, -100f64..100.0), 1..80),
                                    by_method in any::<bool>(), by_signal in any::<bool>()) {
            let rows: Vec<ResultRow> = values.iter().enumerate()
                .map(|(i, &(m, s, snr, v))| row(["a", "b", "c"][m], ["x", "y"][s], snr as f64 * 5.0, i, "qrf", v))
                .collect();
            let mut group_by = vec![GroupField::Snr];
            if by_method { group_by.push(GroupField::Method); }
            if by_signal { group_by.push(GroupField::Signal); }
            let spec = ReportSpec { group_by, ..ReportSpec::default() };
            let s = summarize(&ResultsTable::new(rows.clone()), &spec).unwrap();
            type Key = (Option<String>, Option<String>, u64);
            let mut brute: HashMap<Key, (f64, usize)> = HashMap::new();
            for r in &rows {
                let k = (by_method.then(|| r.method.clone()), by_signal.then(|| r.signal.clone()), r.snr_db.to_bits());
                let e = brute.entry(k).or_default();
                e.0 += r.value;
                e.1 += 1;
            }
            prop_assert_eq!(s.rows.len(), brute.len());
            for g in &s.rows {
                let (sum, n) = brute[&(g.method.clone(), g.signal.clone(), g.snr_db.unwrap().to_bits())];
                prop_assert_eq!(g.count, n);
                prop_assert!((g.mean - sum / n as f64).abs() <= 1e-12);
            }
        }
    }
}
