//! Exhaustive sweeps over canonical small sets.
//!
//! Packing density is invariant under translation and reflection, so the
//! sweep enumerates one canonical representative per equivalence class:
//! normalized sets (minimum 0) that are lexicographically no larger than
//! their reflected normalization. Each row carries the closed-form bounds,
//! the greedy density, and optionally the exact oracle value, and is
//! cross-checked for the sandwich `lower <= greedy <= exact <= upper`
//! before it is accepted.
//!
//! Long sweeps can append finished rows to a checkpoint file (one JSON
//! object per line) and resume later. A resumed run recomputes nothing it
//! can trust, refuses checkpoints that belong to a different sweep, and
//! quietly drops a torn final line left by an interrupted writer.

use std::fs::OpenOptions;
use std::io::Write as _;
use std::path::PathBuf;
use std::sync::Mutex;

use serde_json::{json, Map, Value};

use crate::bounds::bounds_report;
use crate::error::{Error, Result};
use crate::greedy::periodic_packing;
use crate::oracle::{exact_packing_density, DEFAULT_WIDTH_CAP};
use crate::rational::Rational;
use crate::set::FiniteIntSet;

/// One surveyed set with everything computed about it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurveyRow {
    pub set: FiniteIntSet,
    /// `|diff(S)|`, counting 0.
    pub diff_size: u64,
    pub lower: Rational,
    pub upper: Rational,
    /// Density of the greedy packing.
    pub greedy: Rational,
    /// Exact density, when the oracle ran.
    pub exact: Option<Rational>,
    /// Witness period of the exact oracle, or the greedy period without it.
    pub period: u64,
}

impl SurveyRow {
    /// The best density this row establishes: exact when available,
    /// otherwise greedy.
    pub fn effective_density(&self) -> Rational {
        self.exact.unwrap_or(self.greedy)
    }
}

/// A finished sweep.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurveyReport {
    pub k: u32,
    pub max_elem: i64,
    /// One row per canonical set, sorted by elements.
    pub rows: Vec<SurveyRow>,
    /// Smallest effective density over all rows.
    pub minimum: Rational,
    /// Every set attaining the minimum, in row order.
    pub minimizers: Vec<FiniteIntSet>,
}

/// Knobs for `run_survey`.
#[derive(Debug, Clone)]
pub struct SurveyOptions {
    /// Compute exact densities (otherwise only bounds and greedy).
    pub use_oracle: bool,
    /// Worker threads; 1 runs sequentially, 0 lets the thread pool decide.
    pub jobs: usize,
    /// Append finished rows here and resume from it if it exists.
    pub checkpoint: Option<PathBuf>,
}

impl Default for SurveyOptions {
    fn default() -> Self {
        SurveyOptions { use_oracle: true, jobs: 1, checkpoint: None }
    }
}

/// All canonical `k`-element sets with minimum 0 and maximum at most
/// `max_elem`, in lexicographic order.
///
/// Canonical means fixed by `canonical_form`: of each
/// translation/reflection pair, only the lexicographically smaller
/// orientation appears.
pub fn enumerate_normalized_sets(k: u32, max_elem: i64) -> Result<Vec<FiniteIntSet>> {
    if k < 2 || max_elem < i64::from(k) - 1 {
        return Err(Error::InfeasibleEnumeration { k, max_elem });
    }
    let picks = (k - 1) as usize;
    let mut out = Vec::new();
    // Lexicographic combinations of `picks` values from 1..=max_elem.
    let mut idx: Vec<i64> = (1..=picks as i64).collect();
    loop {
        let mut elems = Vec::with_capacity(k as usize);
        elems.push(0);
        elems.extend_from_slice(&idx);
        let set = FiniteIntSet::new(elems).expect("combination is valid");
        if set.canonical_form() == set {
            out.push(set);
        }
        // Advance to the next combination.
        let mut i = picks;
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            if idx[i] < max_elem - (picks - 1 - i) as i64 {
                idx[i] += 1;
                for j in i + 1..picks {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Computes one survey row, cross-checking the density sandwich.
fn compute_row(s: &FiniteIntSet, use_oracle: bool) -> Result<SurveyRow> {
    let row_error = |message: String| Error::Row { set: s.literal(), message };
    let diff_size = s.diff_set().len() as u64;
    let report = bounds_report(s);
    let periodic = periodic_packing(s)?;
    let greedy = periodic.density();
    let (exact, period) = if use_oracle {
        let r = exact_packing_density(s)?;
        (Some(r.density), r.witness_period)
    } else {
        (None, periodic.period())
    };

    if !(report.lower <= greedy && greedy <= report.upper) {
        return Err(row_error(format!(
            "greedy density {greedy} outside bounds [{}, {}]",
            report.lower, report.upper
        )));
    }
    if let Some(exact) = exact {
        if !(greedy <= exact && exact <= report.upper) {
            return Err(row_error(format!(
                "exact density {exact} violates greedy {greedy} or upper {}",
                report.upper
            )));
        }
    }

    Ok(SurveyRow {
        set: s.clone(),
        diff_size,
        lower: report.lower,
        upper: report.upper,
        greedy,
        exact,
        period,
    })
}

/// Sweeps all canonical `k`-sets up to `max_elem`.
pub fn run_survey(k: u32, max_elem: i64, options: &SurveyOptions) -> Result<SurveyReport> {
    if options.use_oracle && max_elem > i64::from(DEFAULT_WIDTH_CAP) {
        return Err(Error::WidthCapExceeded {
            diameter: max_elem as u64,
            cap: DEFAULT_WIDTH_CAP,
        });
    }
    let all = enumerate_normalized_sets(k, max_elem)?;

    let mut done: Vec<SurveyRow> = Vec::new();
    if let Some(path) = &options.checkpoint {
        if path.exists() {
            done = load_checkpoint(path, &all, options.use_oracle)?;
        }
    }
    let have: std::collections::HashSet<&FiniteIntSet> = done.iter().map(|r| &r.set).collect();
    let todo: Vec<&FiniteIntSet> = all.iter().filter(|s| !have.contains(s)).collect();
    drop(have);

    let sink = match &options.checkpoint {
        Some(path) => {
            let file = OpenOptions::new().create(true).append(true).open(path)?;
            Some(Mutex::new(file))
        }
        None => None,
    };
    let record = |row: &SurveyRow| -> Result<()> {
        if let Some(sink) = &sink {
            let mut file = sink.lock().expect("checkpoint writer poisoned");
            let line = serde_json::to_string(&row_to_value(row)).expect("row serializes");
            writeln!(file, "{line}")?;
            file.flush()?;
        }
        Ok(())
    };

    let mut computed: Vec<SurveyRow> = if options.jobs == 1 {
        let mut rows = Vec::with_capacity(todo.len());
        for s in todo {
            let row = compute_row(s, options.use_oracle)?;
            record(&row)?;
            rows.push(row);
        }
        rows
    } else {
        use rayon::prelude::*;
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(options.jobs)
            .build()
            .map_err(|e| Error::Io { message: e.to_string() })?;
        pool.install(|| {
            todo.par_iter()
                .map(|s| {
                    let row = compute_row(s, options.use_oracle)?;
                    record(&row)?;
                    Ok(row)
                })
                .collect::<Result<Vec<SurveyRow>>>()
        })?
    };

    let mut rows = done;
    rows.append(&mut computed);
    rows.sort_by(|a, b| a.set.cmp(&b.set));

    let minimum = rows
        .iter()
        .map(|r| r.effective_density())
        .min()
        .expect("enumeration is nonempty");
    let minimizers = rows
        .iter()
        .filter(|r| r.effective_density() == minimum)
        .map(|r| r.set.clone())
        .collect();

    Ok(SurveyReport { k, max_elem, rows, minimum, minimizers })
}

/// Serializes a row for checkpoints and JSON reports. Keys are emitted in
/// sorted order, so output bytes are stable.
fn row_to_value(row: &SurveyRow) -> Value {
    json!({
        "set": row.set.literal(),
        "diff_size": row.diff_size,
        "lower": row.lower.to_string(),
        "upper": row.upper.to_string(),
        "greedy": row.greedy.to_string(),
        "exact": row.exact.map(|r| r.to_string()),
        "period": row.period,
    })
}

fn row_from_value(value: &Value) -> Result<SurveyRow> {
    let bad = |message: &str| Error::Checkpoint { message: message.to_string() };
    let obj: &Map<String, Value> = value.as_object().ok_or_else(|| bad("row is not an object"))?;
    let field = |name: &str| obj.get(name).ok_or_else(|| bad(&format!("missing field {name}")));
    let str_field = |name: &str| -> Result<&str> {
        field(name)?.as_str().ok_or_else(|| bad(&format!("field {name} is not a string")))
    };
    let int_field = |name: &str| -> Result<u64> {
        field(name)?.as_u64().ok_or_else(|| bad(&format!("field {name} is not an integer")))
    };
    let rational = |text: &str| -> Result<Rational> {
        text.parse().map_err(|_| bad(&format!("bad rational {text:?}")))
    };

    let (set, duplicates) = FiniteIntSet::parse(str_field("set")?)
        .map_err(|e| bad(&format!("bad set literal: {e}")))?;
    if duplicates {
        return Err(bad("set literal has duplicates"));
    }
    let exact = match field("exact")? {
        Value::Null => None,
        Value::String(text) => Some(rational(text)?),
        _ => return Err(bad("field exact is neither null nor a string")),
    };
    Ok(SurveyRow {
        set,
        diff_size: int_field("diff_size")?,
        lower: rational(str_field("lower")?)?,
        upper: rational(str_field("upper")?)?,
        greedy: rational(str_field("greedy")?)?,
        exact,
        period: int_field("period")?,
    })
}

/// Reads checkpoint rows, validating that each belongs to this sweep.
///
/// A malformed final line is discarded: an interrupted run can die
/// mid-write, and the lost row is simply recomputed. Malformed earlier
/// lines, rows for sets outside the sweep, duplicate rows, and rows whose
/// oracle mode disagrees are errors.
fn load_checkpoint(
    path: &PathBuf,
    all: &[FiniteIntSet],
    use_oracle: bool,
) -> Result<Vec<SurveyRow>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Checkpoint {
        message: format!("cannot read {}: {e}", path.display()),
    })?;
    let universe: std::collections::HashSet<&FiniteIntSet> = all.iter().collect();
    let mut seen: std::collections::HashSet<FiniteIntSet> = Default::default();
    let lines: Vec<&str> = text.lines().filter(|l| !l.trim().is_empty()).collect();
    let mut rows = Vec::new();
    for (i, line) in lines.iter().enumerate() {
        let parsed: std::result::Result<Value, _> = serde_json::from_str(line);
        let row = parsed.ok().as_ref().map(row_from_value);
        let row = match row {
            Some(Ok(row)) => row,
            bad => {
                if i + 1 == lines.len() {
                    // Torn final line from an interrupted writer.
                    break;
                }
                return match bad {
                    Some(Err(e)) => Err(e),
                    _ => Err(Error::Checkpoint {
                        message: format!("line {} is not valid JSON", i + 1),
                    }),
                };
            }
        };
        if !universe.contains(&row.set) {
            return Err(Error::Checkpoint {
                message: format!("row for {} does not belong to this sweep", row.set),
            });
        }
        if row.exact.is_some() != use_oracle {
            return Err(Error::Checkpoint {
                message: format!("row for {} was computed with a different oracle mode", row.set),
            });
        }
        if !seen.insert(row.set.clone()) {
            return Err(Error::Checkpoint {
                message: format!("duplicate row for {}", row.set),
            });
        }
        rows.push(row);
    }
    Ok(rows)
}

impl SurveyReport {
    /// CSV with columns `set,diff_size,lower,upper,greedy,exact,period`;
    /// `float` appends decimal approximations of the rational columns.
    pub fn to_csv(&self, float: bool) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header = vec!["set", "diff_size", "lower", "upper", "greedy", "exact", "period"];
        if float {
            header.extend(["lower_float", "upper_float", "greedy_float", "exact_float"]);
        }
        w.write_record(&header).expect("csv write");
        for row in &self.rows {
            let mut record = vec![
                row.set.literal(),
                row.diff_size.to_string(),
                row.lower.to_string(),
                row.upper.to_string(),
                row.greedy.to_string(),
                row.exact.map(|r| r.to_string()).unwrap_or_default(),
                row.period.to_string(),
            ];
            if float {
                record.push(format_float(row.lower));
                record.push(format_float(row.upper));
                record.push(format_float(row.greedy));
                record.push(row.exact.map(format_float).unwrap_or_default());
            }
            w.write_record(&record).expect("csv write");
        }
        String::from_utf8(w.into_inner().expect("csv flush")).expect("csv is utf-8")
    }

    /// Single-line JSON mirroring the CSV content plus the summary. Keys
    /// are sorted, so equal reports serialize to equal bytes.
    pub fn to_json(&self, float: bool) -> String {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let mut v = row_to_value(row);
                if float {
                    let obj = v.as_object_mut().expect("row is an object");
                    obj.insert("lower_float".into(), json!(row.lower.to_f64()));
                    obj.insert("upper_float".into(), json!(row.upper.to_f64()));
                    obj.insert("greedy_float".into(), json!(row.greedy.to_f64()));
                    obj.insert("exact_float".into(), json!(row.exact.map(|r| r.to_f64())));
                }
                v
            })
            .collect();
        let minimizers: Vec<String> = self.minimizers.iter().map(|s| s.literal()).collect();
        let mut report = json!({
            "k": self.k,
            "max_elem": self.max_elem,
            "rows": rows,
            "minimum": self.minimum.to_string(),
            "minimizers": minimizers,
        });
        if float {
            report
                .as_object_mut()
                .expect("report is an object")
                .insert("minimum_float".into(), json!(self.minimum.to_f64()));
        }
        serde_json::to_string(&report).expect("report serializes")
    }
}

/// Nine digits is plenty for eyeballing and keeps columns aligned.
fn format_float(r: Rational) -> String {
    format!("{:.9}", r.to_f64())
}

/// The verdict of the minimum-density verification sweep.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    /// True when every 4-set density is at least 1/7 and {0,1,4,6} attains
    /// it exactly.
    pub pass: bool,
    /// Smallest exact density seen below the cap.
    pub minimum: Rational,
    /// All sets attaining the minimum.
    pub minimizers: Vec<FiniteIntSet>,
    /// Number of canonical sets swept.
    pub sets_checked: usize,
    pub max_elem: i64,
    /// Whether every swept set had at most 7 distinct differences.
    pub diff_bound_ok: bool,
    /// Whether {0,1,4,6} attained exactly 1/7.
    pub attained: bool,
    /// Why the finite cap suffices for sets beyond it.
    pub note: &'static str,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let at: Vec<String> = self.minimizers.iter().map(|s| s.to_string()).collect();
        if self.pass {
            write!(f, "PASS: min = {} at {}", self.minimum, at.join(", "))
        } else {
            write!(f, "FAIL: min = {} at {}", self.minimum, at.join(", "))
        }
    }
}

/// Exhaustively verifies that no 4-element set packs more sparsely than
/// 1/7, and that {0,1,4,6} reaches exactly 1/7.
///
/// The sweep covers canonical 4-sets up to `max_elem`, which must be at
/// least 6 so the known minimizer is inside the range. Sets beyond any
/// finite cap still have at most 7 distinct differences, and density is
/// never below the reciprocal of that count, so the cap only needs to
/// witness attainment. The oracle is always on here.
pub fn verify_minimum_density(max_elem: i64, options: &SurveyOptions) -> Result<Verdict> {
    if max_elem < 6 {
        return Err(Error::VerifyCapTooSmall { max_elem });
    }
    let opts = SurveyOptions { use_oracle: true, ..options.clone() };
    let report = run_survey(4, max_elem, &opts)?;

    let floor = Rational::new(1, 7);
    let target = FiniteIntSet::new(vec![0, 1, 4, 6]).expect("static set");
    let all_above = report.rows.iter().all(|r| r.effective_density() >= floor);
    let diff_bound_ok = report.rows.iter().all(|r| r.diff_size <= 7);
    let attained = report
        .rows
        .iter()
        .any(|r| r.set == target && r.effective_density() == floor);

    Ok(Verdict {
        pass: all_above && attained,
        minimum: report.minimum,
        minimizers: report.minimizers,
        sets_checked: report.rows.len(),
        max_elem,
        diff_bound_ok,
        attained,
        note: "4-element sets beyond the cap have at most 7 distinct differences, \
               and density is never below the reciprocal of that count, so only \
               attainment needs a finite witness",
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(elems: &[i64]) -> FiniteIntSet {
        FiniteIntSet::new(elems.to_vec()).unwrap()
    }

    #[test]
    fn enumeration_of_pairs() {
        let sets = enumerate_normalized_sets(2, 3).unwrap();
        assert_eq!(sets, vec![set(&[0, 1]), set(&[0, 2]), set(&[0, 3])]);
    }

    #[test]
    fn enumeration_counts_canonical_quadruples() {
        assert_eq!(enumerate_normalized_sets(4, 7).unwrap().len(), 22);
        assert_eq!(enumerate_normalized_sets(4, 12).unwrap().len(), 125);
        assert_eq!(enumerate_normalized_sets(4, 16).unwrap().len(), 308);
    }

    #[test]
    fn enumeration_is_canonical_and_sorted() {
        let sets = enumerate_normalized_sets(4, 6).unwrap();
        assert!(sets.contains(&set(&[0, 1, 4, 6])));
        assert!(!sets.contains(&set(&[0, 2, 5, 6])));
        let mut sorted = sets.clone();
        sorted.sort();
        assert_eq!(sets, sorted);
        for s in &sets {
            assert_eq!(&s.canonical_form(), s);
        }
    }

    #[test]
    fn enumeration_rejects_infeasible_parameters() {
        assert!(matches!(
            enumerate_normalized_sets(1, 5),
            Err(Error::InfeasibleEnumeration { .. })
        ));
        assert!(matches!(
            enumerate_normalized_sets(5, 3),
            Err(Error::InfeasibleEnumeration { .. })
        ));
    }

    #[test]
    fn survey_of_triples_up_to_four() {
        let report = run_survey(3, 4, &SurveyOptions::default()).unwrap();
        let sets: Vec<&FiniteIntSet> = report.rows.iter().map(|r| &r.set).collect();
        assert_eq!(
            sets,
            vec![&set(&[0, 1, 2]), &set(&[0, 1, 3]), &set(&[0, 1, 4]), &set(&[0, 2, 4])]
        );
        assert_eq!(report.minimum, Rational::new(1, 4));
        assert_eq!(report.minimizers, vec![set(&[0, 1, 3])]);
        let densities: Vec<Rational> =
            report.rows.iter().map(|r| r.exact.unwrap()).collect();
        assert_eq!(
            densities,
            vec![
                Rational::new(1, 3),
                Rational::new(1, 4),
                Rational::new(2, 7),
                Rational::new(1, 3)
            ]
        );
    }

    #[test]
    fn survey_without_oracle_reports_greedy_only(){
        let report = run_survey(
            3,
            4,
            &SurveyOptions { use_oracle: false, ..Default::default() },
        )
        .unwrap();
        assert!(report.rows.iter().all(|r| r.exact.is_none()));
        assert_eq!(report.rows[1].greedy, Rational::new(1, 4));
    }

    #[test]
    fn survey_rejects_oracle_beyond_width_cap() {
        assert!(matches!(
            run_survey(2, 30, &SurveyOptions::default()),
            Err(Error::WidthCapExceeded { .. })
        ));
        assert!(run_survey(2, 30, &SurveyOptions { use_oracle: false, ..Default::default() })
            .is_ok());
    }

    #[test]
    fn checkpoint_roundtrip_resumes_to_identical_report() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("rows.jsonl");

        let fresh = run_survey(3, 5, &SurveyOptions::default()).unwrap();
        let opts = SurveyOptions { checkpoint: Some(path.clone()), ..Default::default() };
        let first = run_survey(3, 5, &opts).unwrap();
        assert_eq!(first, fresh);

        // Truncate the checkpoint to simulate an interrupted run: keep two
        // full rows and a torn third.
        let text = std::fs::read_to_string(&path).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), fresh.rows.len());
        let torn = format!("{}\n{}\n{}", lines[0], lines[1], &lines[2][..lines[2].len() / 2]);
        std::fs::write(&path, torn).unwrap();

        let resumed = run_survey(3, 5, &opts).unwrap();
        assert_eq!(resumed, fresh);
    }

    #[test]
    fn checkpoint_from_a_different_sweep_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("rows.jsonl");
        let opts = SurveyOptions { checkpoint: Some(path.clone()), ..Default::default() };
        run_survey(3, 5, &opts).unwrap();

        // Different cap: rows for sets outside the new sweep.
        assert!(matches!(
            run_survey(3, 4, &opts),
            Err(Error::Checkpoint { .. })
        ));
        // Different oracle mode.
        assert!(matches!(
            run_survey(3, 5, &SurveyOptions { use_oracle: false, ..opts.clone() }),
            Err(Error::Checkpoint { .. })
        ));
    }

    #[test]
    fn parallel_survey_matches_sequential() {
        let sequential = run_survey(4, 9, &SurveyOptions::default()).unwrap();
        let parallel =
            run_survey(4, 9, &SurveyOptions { jobs: 4, ..Default::default() }).unwrap();
        assert_eq!(sequential, parallel);
        assert_eq!(sequential.to_csv(false), parallel.to_csv(false));
        assert_eq!(sequential.to_json(true), parallel.to_json(true));
    }

    #[test]
    fn csv_shape_and_quoting() {
        let report = run_survey(2, 2, &SurveyOptions::default()).unwrap();
        let csv = report.to_csv(false);
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), "set,diff_size,lower,upper,greedy,exact,period");
        let first = lines.next().unwrap();
        assert!(first.starts_with("\"0,1\","), "set field must be quoted: {first}");
        assert!(first.ends_with(",1/2,1/2,1/2,2"), "unexpected row: {first}");
    }

    #[test]
    fn json_reports_are_stable_under_reserialization() {
        let report = run_survey(3, 4, &SurveyOptions::default()).unwrap();
        for float in [false, true] {
            let text = report.to_json(float);
            let value: Value = serde_json::from_str(&text).unwrap();
            assert_eq!(serde_json::to_string(&value).unwrap(), text);
        }
    }

    #[test]
    fn verification_passes_at_cap_twelve() {
        let verdict = verify_minimum_density(12, &SurveyOptions::default()).unwrap();
        assert!(verdict.pass);
        assert!(verdict.attained);
        assert!(verdict.diff_bound_ok);
        assert_eq!(verdict.minimum, Rational::new(1, 7));
        assert_eq!(
            verdict.minimizers,
            vec![set(&[0, 1, 4, 6]), set(&[0, 2, 8, 12])]
        );
        assert_eq!(verdict.sets_checked, 125);
        assert_eq!(
            verdict.to_string(),
            "PASS: min = 1/7 at {0,1,4,6}, {0,2,8,12}"
        );
    }

    #[test]
    fn verification_requires_the_minimizer_in_range() {
        assert_eq!(
            verify_minimum_density(5, &SurveyOptions::default()),
            Err(Error::VerifyCapTooSmall { max_elem: 5 })
        );
    }
}
