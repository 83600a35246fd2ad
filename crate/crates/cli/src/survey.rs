//! Batch code surveys over polygon lists: minimum box, minimal field,
//! distance or bound per code, per-dimension aggregation, checkpointing.

use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{Context, Result};
use rayon::prelude::*;
use toricode_core::code::{generator_matrix, GeneratorMatrix};
use toricode_core::dist::{
    bz_min_distance, classify_record, exact_min_distance, row_combo_bound,
    rows_needed_to_disqualify, CodeRecord, DistanceKind, DistanceResult, DistanceTable,
    RecordStatus,
};
use toricode_core::gf::Field;
use toricode_core::ldp::minimum_box;
use toricode_core::Polygon;

/// Prime powers with full arithmetic support.
pub const SUPPORTED_PRIME_POWERS: &[u16] = &[
    2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 17, 19, 23, 25, 27, 29, 31, 32, 37, 41, 43, 47, 49, 53,
    59, 61, 64,
];

/// Smallest supported prime power `q` with `q − 2 ≥ m`.
pub fn minimal_q(min_box: u32) -> Option<u16> {
    SUPPORTED_PRIME_POWERS.iter().copied().find(|&q| q as u32 >= min_box + 2)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DistanceMode {
    /// Upper bound from combinations of at most this many rows.
    Bound(u32),
    /// Exhaustive exact distance (budgeted).
    Exact,
    /// Systematic-form exact search (budgeted).
    Bz,
    /// Smallest support size (up to the given cap) witnessing a vector
    /// shorter than the best-known distance; needs a distance table.
    Disqualify(u32),
}

#[derive(Clone, Copy, Debug)]
pub struct BudgetOptions {
    /// Message-class cap for the exhaustive search.
    pub exact_messages: u64,
    /// Enumeration cap for the systematic-form search (deterministic).
    pub bz_steps: u64,
    /// Optional wall-clock cap for the systematic-form search; output is no
    /// longer machine-independent once this triggers.
    pub bz_seconds: Option<u64>,
}

impl Default for BudgetOptions {
    fn default() -> Self {
        BudgetOptions { exact_messages: 1 << 27, bz_steps: u64::MAX, bz_seconds: None }
    }
}

impl BudgetOptions {
    pub fn bz_stop(&self) -> impl FnMut(u64) -> bool + '_ {
        let started = Instant::now();
        move |effort| {
            effort > self.bz_steps
                || self.bz_seconds.is_some_and(|s| started.elapsed().as_secs() >= s)
        }
    }
}

/// One computed code record, CSV shape
/// `polygon_id,q,n,k,d_or_db,kind,rows_used,status`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurveyRow {
    pub id: String,
    pub q: u16,
    pub n: u32,
    pub k: u32,
    pub value: u32,
    pub exact: bool,
    pub rows_used: u32,
    pub status: RecordStatus,
}

impl SurveyRow {
    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            self.id,
            self.q,
            self.n,
            self.k,
            self.value,
            if self.exact { "exact" } else { "bound" },
            self.rows_used,
            self.status.as_str()
        )
    }

    fn from_csv(line: &str) -> Result<SurveyRow> {
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 8 {
            anyhow::bail!("bad row: {line}");
        }
        let status = match f[7] {
            "exact" => RecordStatus::Exact,
            "bounded" => RecordStatus::Bounded,
            "champion" => RecordStatus::Champion,
            "equal-champion" => RecordStatus::EqualChampion,
            "below" => RecordStatus::Below,
            "undetermined" => RecordStatus::Undetermined,
            _ => RecordStatus::Unknown,
        };
        Ok(SurveyRow {
            id: f[0].to_string(),
            q: f[1].parse()?,
            n: f[2].parse()?,
            k: f[3].parse()?,
            value: f[4].parse()?,
            exact: f[5] == "exact",
            rows_used: f[6].parse()?,
            status,
        })
    }
}

/// Outcome per polygon: a row, a skip, or a per-polygon error.
#[derive(Clone, Debug)]
pub enum Outcome {
    Row(SurveyRow),
    Skipped(String),
    Failed(String),
}

impl Outcome {
    fn encode(&self) -> String {
        match self {
            Outcome::Row(r) => format!("row:{}", r.to_csv()),
            Outcome::Skipped(s) => format!("skip:{s}"),
            Outcome::Failed(s) => format!("err:{s}"),
        }
    }

    fn decode(s: &str) -> Result<Outcome> {
        if let Some(rest) = s.strip_prefix("row:") {
            Ok(Outcome::Row(SurveyRow::from_csv(rest)?))
        } else if let Some(rest) = s.strip_prefix("skip:") {
            Ok(Outcome::Skipped(rest.to_string()))
        } else if let Some(rest) = s.strip_prefix("err:") {
            Ok(Outcome::Failed(rest.to_string()))
        } else {
            anyhow::bail!("bad checkpoint payload: {s}")
        }
    }
}

/// Append-only checkpoint of completed ids.
pub struct Checkpoint {
    writer: Option<std::io::BufWriter<File>>,
    done: HashMap<String, String>,
}

impl Checkpoint {
    /// `None` path disables checkpointing entirely.
    pub fn open(path: Option<&Path>, resume: bool) -> Result<Checkpoint> {
        let Some(path) = path else {
            return Ok(Checkpoint { writer: None, done: HashMap::new() });
        };
        let mut done = HashMap::new();
        if resume && path.exists() {
            for line in BufReader::new(File::open(path)?).lines() {
                let line = line?;
                if let Some((id, payload)) = line.split_once('\t') {
                    done.insert(id.to_string(), payload.to_string());
                }
            }
        } else if path.exists() {
            std::fs::remove_file(path)?;
        }
        let file = OpenOptions::new().create(true).append(true).open(path)?;
        Ok(Checkpoint { writer: Some(std::io::BufWriter::new(file)), done })
    }

    pub fn get(&self, id: &str) -> Option<&String> {
        self.done.get(id)
    }

    pub fn record(&mut self, id: &str, payload: &str) -> Result<()> {
        if let Some(w) = &mut self.writer {
            writeln!(w, "{id}\t{payload}")?;
            w.flush()?;
        }
        self.done.insert(id.to_string(), payload.to_string());
        Ok(())
    }

    pub fn completed(&self) -> usize {
        self.done.len()
    }
}

#[derive(Clone, Debug)]
pub struct SurveyJob {
    pub polygons: Vec<(String, Polygon)>,
    /// Work over this field instead of each polygon's minimal one.
    pub fixed_q: Option<u16>,
    /// With `fixed_q`, first re-embed each polygon into its minimum box;
    /// without it polygons are only translated.
    pub reembed: bool,
    /// Minimal-q mode: restrict to polygons whose minimal field is listed.
    pub qs: Option<Vec<u16>>,
    pub mode: DistanceMode,
    pub budget: BudgetOptions,
    /// Best-known distances for status classification.
    pub table: Option<DistanceTable>,
    /// Checkpoint file; pair with `resume`.
    pub checkpoint: Option<PathBuf>,
    pub resume: bool,
}

impl SurveyJob {
    pub fn new(polygons: Vec<(String, Polygon)>, mode: DistanceMode) -> SurveyJob {
        SurveyJob {
            polygons,
            fixed_q: None,
            reembed: true,
            qs: None,
            mode,
            budget: BudgetOptions::default(),
            table: None,
            checkpoint: None,
            resume: false,
        }
    }
}

#[derive(Debug)]
pub struct SurveyOutput {
    pub outcomes: Vec<(String, Outcome)>,
    /// Per-dimension `(k, best value, attainers)` over the rows.
    pub aggregation: Vec<(u32, u32, u64)>,
    /// True when any row carries a budget-limited (non-exact) result in an
    /// exact mode, or any polygon failed.
    pub partial: bool,
}

fn distance_of(
    g: &GeneratorMatrix,
    f: &Field,
    mode: DistanceMode,
    budget: &BudgetOptions,
) -> Result<DistanceResult, toricode_core::Error> {
    match mode {
        DistanceMode::Bound(r) => Ok(row_combo_bound(g, f, r)),
        DistanceMode::Exact => exact_min_distance(g, f, budget.exact_messages),
        DistanceMode::Bz => bz_min_distance(g, f, &mut budget.bz_stop()),
        DistanceMode::Disqualify(_) => unreachable!("handled by the caller"),
    }
}

fn survey_one(id: &str, polygon: &Polygon, job: &SurveyJob) -> Outcome {
    let (q, embedded) = match job.fixed_q {
        Some(q) => {
            let p = if job.reembed {
                minimum_box(polygon).embeddings[0].1.clone()
            } else {
                polygon.clone()
            };
            (q, p)
        }
        None => {
            let min = minimum_box(polygon);
            let Some(q) = minimal_q(min.m) else {
                return Outcome::Skipped(format!("minimal box {} needs q > 64", min.m));
            };
            if let Some(qs) = &job.qs {
                if !qs.contains(&q) {
                    return Outcome::Skipped(format!("minimal q is {q}"));
                }
            }
            (q, min.embeddings[0].1.clone())
        }
    };
    let field = match Field::new(q) {
        Ok(f) => f,
        Err(e) => return Outcome::Failed(e.to_string()),
    };
    let g = match generator_matrix(&embedded, &field) {
        Ok(g) => g,
        Err(e) => return Outcome::Failed(e.to_string()),
    };
    if let DistanceMode::Disqualify(r_max) = job.mode {
        // How many rows it takes to rule the code out against the best
        // known distance; rows_used = 0 means it survived the cap.
        let Some(best) = job.table.as_ref().and_then(|t| t.get(q, g.n() as u32, g.k() as u32))
        else {
            return Outcome::Failed(format!("no best-known entry for [{},{}] over F_{q}", g.n(), g.k()));
        };
        let needed = rows_needed_to_disqualify(&g, &field, best, r_max);
        return Outcome::Row(SurveyRow {
            id: id.to_string(),
            q,
            n: g.n() as u32,
            k: g.k() as u32,
            value: best,
            exact: false,
            rows_used: needed.unwrap_or(0),
            status: if needed.is_some() { RecordStatus::Below } else { RecordStatus::Undetermined },
        });
    }
    let result = match distance_of(&g, &field, job.mode, &job.budget) {
        Ok(r) => r,
        Err(e) => return Outcome::Failed(e.to_string()),
    };
    let exact = result.kind == DistanceKind::Exact;
    let mut record = CodeRecord {
        polygon_id: id.to_string(),
        q,
        n: g.n() as u32,
        k: g.k() as u32,
        d_exact: exact.then_some(result.value),
        d_bound: (!exact).then_some(result.value),
        bound_rows: match job.mode {
            DistanceMode::Bound(r) => Some(r),
            _ => None,
        },
        status: if exact { RecordStatus::Exact } else { RecordStatus::Bounded },
    };
    if let Some(table) = &job.table {
        // Missing entries keep the job going; the row just reads "unknown".
        let _ = classify_record(&mut record, table);
    }
    Outcome::Row(SurveyRow {
        id: id.to_string(),
        q,
        n: record.n,
        k: record.k,
        value: result.value,
        exact,
        rows_used: result.rows_used,
        status: record.status,
    })
}

/// Aggregate rows per dimension: the best (largest) value and how many rows
/// attain it, mirroring the survey tables' `k, d_b, count` shape.
pub fn aggregate(rows: &[&SurveyRow]) -> Vec<(u32, u32, u64)> {
    let mut per_k: HashMap<u32, (u32, u64)> = HashMap::new();
    for row in rows {
        let e = per_k.entry(row.k).or_insert((0, 0));
        match row.value.cmp(&e.0) {
            std::cmp::Ordering::Greater => *e = (row.value, 1),
            std::cmp::Ordering::Equal => e.1 += 1,
            std::cmp::Ordering::Less => {}
        }
    }
    let mut out: Vec<(u32, u32, u64)> = per_k.into_iter().map(|(k, (v, c))| (k, v, c)).collect();
    out.sort_unstable();
    out
}

/// Run a survey job with a worker pool, deterministically.
pub fn run_survey(job: &SurveyJob) -> Result<SurveyOutput> {
    let mut checkpoint = Checkpoint::open(job.checkpoint.as_deref(), job.resume)?;
    let mut outcomes: Vec<Option<(String, Outcome)>> = vec![None; job.polygons.len()];
    let mut todo: Vec<usize> = Vec::new();
    for (i, (id, _)) in job.polygons.iter().enumerate() {
        match checkpoint.get(id) {
            Some(payload) => {
                let outcome = Outcome::decode(payload)
                    .with_context(|| format!("checkpoint entry for id {id}"))?;
                outcomes[i] = Some((id.clone(), outcome));
            }
            None => todo.push(i),
        }
    }
    for chunk in todo.chunks(256) {
        let computed: Vec<(usize, Outcome)> = chunk
            .par_iter()
            .map(|&i| {
                let (id, polygon) = &job.polygons[i];
                (i, survey_one(id, polygon, job))
            })
            .collect();
        for (i, outcome) in computed {
            let id = job.polygons[i].0.clone();
            checkpoint.record(&id, &outcome.encode())?;
            outcomes[i] = Some((id, outcome));
        }
    }
    let outcomes: Vec<(String, Outcome)> = outcomes.into_iter().map(|o| o.expect("filled")).collect();
    let rows: Vec<&SurveyRow> = outcomes
        .iter()
        .filter_map(|(_, o)| match o {
            Outcome::Row(r) => Some(r),
            _ => None,
        })
        .collect();
    let exact_mode = matches!(job.mode, DistanceMode::Exact | DistanceMode::Bz);
    let partial = outcomes.iter().any(|(_, o)| matches!(o, Outcome::Failed(_)))
        || (exact_mode && rows.iter().any(|r| !r.exact));
    let aggregation = aggregate(&rows);
    Ok(SurveyOutput { outcomes, aggregation, partial })
}

/// Write the survey CSV: header, rows, then the aggregation as a footer.
pub fn write_survey_csv(w: &mut impl Write, out: &SurveyOutput) -> Result<()> {
    writeln!(w, "polygon_id,q,n,k,d_or_db,kind,rows_used,status")?;
    for (id, outcome) in &out.outcomes {
        match outcome {
            Outcome::Row(r) => writeln!(w, "{}", r.to_csv())?,
            Outcome::Skipped(reason) => writeln!(w, "# polygon {id} skipped: {reason}")?,
            Outcome::Failed(reason) => writeln!(w, "# polygon {id} failed: {reason}")?,
        }
    }
    writeln!(w, "# aggregation")?;
    writeln!(w, "k,d_b,count")?;
    for (k, v, c) in &out.aggregation {
        writeln!(w, "{k},{v},{c}")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use toricode_core::Point;

    fn poly(list: &[(i64, i64)]) -> Polygon {
        let pts: Vec<Point> = list.iter().map(|&(x, y)| Point::new(x, y)).collect();
        Polygon::hull(&pts).unwrap()
    }

    #[test]
    fn minimal_q_rule() {
        assert_eq!(minimal_q(1), Some(3));
        assert_eq!(minimal_q(2), Some(4));
        assert_eq!(minimal_q(3), Some(5));
        assert_eq!(minimal_q(5), Some(7));
        assert_eq!(minimal_q(6), Some(8));
        assert_eq!(minimal_q(7), Some(9));
        assert_eq!(minimal_q(8), Some(11));
        assert_eq!(minimal_q(10), Some(13));
        assert_eq!(minimal_q(62), Some(64));
        assert_eq!(minimal_q(63), None);
    }

    #[test]
    fn survey_smoke() {
        let job = SurveyJob::new(
            vec![
                ("1".into(), poly(&[(0, 0), (1, 0), (0, 1)])),
                ("2".into(), poly(&[(0, 0), (2, 0), (0, 2), (2, 2)])),
            ],
            DistanceMode::Exact,
        );
        let out = run_survey(&job).unwrap();
        assert_eq!(out.outcomes.len(), 2);
        assert!(!out.partial);
        let rows: Vec<&SurveyRow> = out
            .outcomes
            .iter()
            .filter_map(|(_, o)| match o {
                Outcome::Row(r) => Some(r),
                _ => None,
            })
            .collect();
        // Triangle: q = 3, n = 4, k = 3. Square: q = 4, n = 9, k = 9.
        assert_eq!((rows[0].q, rows[0].n, rows[0].k), (3, 4, 3));
        assert_eq!((rows[1].q, rows[1].n, rows[1].k), (4, 9, 9));
        assert!(rows.iter().all(|r| r.exact));
    }

    #[test]
    fn q_filter_skips() {
        let job = SurveyJob {
            qs: Some(vec![5]),
            ..SurveyJob::new(
                vec![("1".into(), poly(&[(0, 0), (1, 0), (0, 1)]))],
                DistanceMode::Bound(4),
            )
        };
        let out = run_survey(&job).unwrap();
        assert!(matches!(out.outcomes[0].1, Outcome::Skipped(_)));
        assert!(out.aggregation.is_empty());
    }

    #[test]
    fn checkpoint_resume_skips_done_work() {
        let dir = std::env::temp_dir();
        let path = dir.join(format!("toricode-ckpt-test-{}", std::process::id()));
        let polygons = vec![
            ("1".to_string(), poly(&[(0, 0), (1, 0), (0, 1)])),
            ("2".to_string(), poly(&[(0, 0), (1, 0), (1, 1), (0, 1)])),
        ];
        let job = SurveyJob {
            checkpoint: Some(path.clone()),
            ..SurveyJob::new(polygons.clone(), DistanceMode::Bound(2))
        };
        let first = run_survey(&job).unwrap();
        let resumed = run_survey(&SurveyJob { resume: true, ..job }).unwrap();
        assert_eq!(first.outcomes.len(), resumed.outcomes.len());
        for ((_, a), (_, b)) in first.outcomes.iter().zip(&resumed.outcomes) {
            match (a, b) {
                (Outcome::Row(x), Outcome::Row(y)) => assert_eq!(x, y),
                _ => panic!("expected rows"),
            }
        }
        std::fs::remove_file(&path).ok();
    }

    #[test]
    fn disqualify_mode_reports_rows_needed() {
        // Unit square: minimal field F_3, a [4,4] code. Every single row is
        // everywhere nonzero, so beating a target of 4 takes two rows.
        let square = poly(&[(0, 0), (1, 0), (1, 1), (0, 1)]);
        let mut table = DistanceTable::new();
        table.insert(3, 4, 4, 4);
        let job = SurveyJob {
            table: Some(table),
            ..SurveyJob::new(vec![("1".into(), square.clone())], DistanceMode::Disqualify(4))
        };
        let out = run_survey(&job).unwrap();
        match &out.outcomes[0].1 {
            Outcome::Row(r) => {
                assert_eq!(r.rows_used, 2);
                assert_eq!(r.status, RecordStatus::Below);
            }
            other => panic!("expected a row, got {other:?}"),
        }
        let mut low = DistanceTable::new();
        low.insert(3, 4, 4, 1); // nothing is shorter than 1
        let job = SurveyJob {
            table: Some(low),
            ..SurveyJob::new(vec![("1".into(), square)], DistanceMode::Disqualify(4))
        };
        let out = run_survey(&job).unwrap();
        match &out.outcomes[0].1 {
            Outcome::Row(r) => {
                assert_eq!(r.rows_used, 0);
                assert_eq!(r.status, RecordStatus::Undetermined);
            }
            other => panic!("expected a row, got {other:?}"),
        }
    }

    #[test]
    fn aggregation_shape() {
        let r = |k: u32, v: u32| SurveyRow {
            id: "x".into(),
            q: 11,
            n: 100,
            k,
            value: v,
            exact: false,
            rows_used: 4,
            status: RecordStatus::Bounded,
        };
        let rows = [r(10, 30), r(10, 28), r(10, 30), r(12, 9)];
        let refs: Vec<&SurveyRow> = rows.iter().collect();
        assert_eq!(aggregate(&refs), vec![(10, 30, 2), (12, 9, 1)]);
    }
}
