use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::model::RoundDiagnostics;
use crate::mw::Algorithm;

pub const RESULT_HEADER: [&str; 10] = [
    "instance",
    "algorithm",
    "epsilon",
    "budget",
    "total_samples",
    "learning_samples",
    "test_samples",
    "success_rate",
    "balance_ratio",
    "seed",
];

/// Written in the `budget` column when the ladder ran out.
pub const NOT_FOUND: &str = "not-found";

/// One `(instance, algorithm, epsilon)` outcome. `budget` is the ladder's
/// `d` value; sample counts are means over the rung's runs. Measured
/// columns are empty on a not-found row.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub instance: String,
    pub algorithm: Algorithm,
    pub epsilon: f64,
    pub budget: Option<u64>,
    pub total_samples: Option<f64>,
    pub learning_samples: Option<f64>,
    pub test_samples: Option<f64>,
    pub success_rate: Option<f64>,
    pub balance_ratio: Option<f64>,
    pub seed: u64,
}

impl ResultRow {
    pub fn not_found(instance: &str, algorithm: Algorithm, epsilon: f64, seed: u64) -> Self {
        ResultRow {
            instance: instance.to_string(),
            algorithm,
            epsilon,
            budget: None,
            total_samples: None,
            learning_samples: None,
            test_samples: None,
            success_rate: None,
            balance_ratio: None,
            seed,
        }
    }

    pub fn is_found(&self) -> bool {
        self.budget.is_some()
    }

    fn record(&self) -> Vec<String> {
        let opt = |v: Option<f64>| v.map_or(String::new(), |x| x.to_string());
        vec![
            self.instance.clone(),
            self.algorithm.to_string(),
            self.epsilon.to_string(),
            self.budget.map_or(NOT_FOUND.to_string(), |b| b.to_string()),
            opt(self.total_samples),
            opt(self.learning_samples),
            opt(self.test_samples),
            opt(self.success_rate),
            opt(self.balance_ratio),
            self.seed.to_string(),
        ]
    }
}

/// Writes `rows` as CSV with the fixed [`RESULT_HEADER`].
pub fn write_results<W: Write>(rows: &[ResultRow], out: W) -> Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(RESULT_HEADER)?;
    for row in rows {
        writer.write_record(row.record())?;
    }
    writer.flush().map_err(|e| Error::io("<results>", e))
}

pub fn emit_results(rows: &[ResultRow], path: &Path) -> Result<()> {
    if rows.is_empty() {
        return Err(Error::Precondition("no result rows to emit".into()));
    }
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    write_results(rows, std::io::BufWriter::new(file))
}

pub fn parse_results(text: &str) -> Result<Vec<ResultRow>> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let header: Vec<String> = reader.headers()?.iter().map(str::to_string).collect();
    for column in RESULT_HEADER {
        if !header.iter().any(|h| h == column) {
            return Err(Error::MissingColumn(column.to_string()));
        }
    }
    if header != RESULT_HEADER {
        return Err(Error::Precondition(format!(
            "unexpected result columns {header:?}"
        )));
    }
    let mut rows = Vec::new();
    for (r, record) in reader.records().enumerate() {
        let record = record?;
        let cell = |c: usize| record.get(c).unwrap_or("");
        let fail = |c: usize, message: String| Error::Cell {
            row: r + 1,
            column: RESULT_HEADER[c].to_string(),
            message,
        };
        let num = |c: usize| -> Result<f64> {
            cell(c)
                .parse()
                .map_err(|_| fail(c, format!("bad number `{}`", cell(c))))
        };
        let opt = |c: usize| -> Result<Option<f64>> {
            match cell(c) {
                "" => Ok(None),
                _ => num(c).map(Some),
            }
        };
        rows.push(ResultRow {
            instance: cell(0).to_string(),
            algorithm: cell(1).parse().map_err(|e: Error| fail(1, e.to_string()))?,
            epsilon: num(2)?,
            budget: match cell(3) {
                NOT_FOUND => None,
                b => Some(
                    b.parse()
                        .map_err(|_| fail(3, format!("bad budget `{b}`")))?,
                ),
            },
            total_samples: opt(4)?,
            learning_samples: opt(5)?,
            test_samples: opt(6)?,
            success_rate: opt(7)?,
            balance_ratio: opt(8)?,
            seed: cell(9)
                .parse()
                .map_err(|_| fail(9, format!("bad seed `{}`", cell(9))))?,
        });
    }
    Ok(rows)
}

pub const DIAGNOSTICS_HEADER: [&str; 9] = [
    "algorithm",
    "epsilon",
    "run",
    "t",
    "W",
    "ln_W",
    "Q",
    "chi",
    "psi_count",
];

/// The rounds of one run, labeled for the diagnostics file.
#[derive(Debug, Clone, Copy)]
pub struct DiagnosticsRun<'a> {
    pub algorithm: Algorithm,
    pub epsilon: f64,
    pub run: u64,
    pub rounds: &'a [RoundDiagnostics],
}

/// Per-round diagnostics; `chi` and `psi_count` are empty when exact errors
/// were unavailable.
pub fn write_diagnostics<W: Write>(runs: &[DiagnosticsRun<'_>], out: W) -> Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(DIAGNOSTICS_HEADER)?;
    for r in runs {
        for d in r.rounds {
            writer.write_record([
                r.algorithm.to_string(),
                r.epsilon.to_string(),
                r.run.to_string(),
                d.round.to_string(),
                d.total_weight().to_string(),
                d.ln_total_weight.to_string(),
                d.q.to_string(),
                d.chi.map_or(String::new(), |c| u8::from(c).to_string()),
                d.psi_count().map_or(String::new(), |c| c.to_string()),
            ])?;
        }
    }
    writer.flush().map_err(|e| Error::io("<diagnostics>", e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(budget: Option<u64>) -> ResultRow {
        let mut r = ResultRow::not_found("psi-k8-d2-e0.1-s0", Algorithm::MWeights, 0.1, 42);
        if budget.is_some() {
            r.budget = budget;
            r.learning_samples = Some(123.45);
            r.test_samples = Some(1.0 / 3.0);
            r.total_samples = Some(123.45 + 1.0 / 3.0);
            r.success_rate = Some(0.92);
            r.balance_ratio = Some(1.0625);
        }
        r
    }

    fn render(rows: &[ResultRow]) -> String {
        let mut buf = Vec::new();
        write_results(rows, &mut buf).unwrap();
        String::from_utf8(buf).unwrap()
    }

    #[test]
    fn single_row_is_two_lines() {
        let text = render(&[row(Some(7))]);
        assert_eq!(text.lines().count(), 2);
        assert_eq!(text.lines().next().unwrap(), RESULT_HEADER.join(","));
    }

    #[test]
    fn round_trip_is_exact() {
        let rows = vec![row(Some(7)), row(None)];
        assert_eq!(parse_results(&render(&rows)).unwrap(), rows);
        assert!(render(&[row(None)]).contains(",not-found,,,,,,42"));
    }

    #[test]
    fn missing_column_is_named() {
        match parse_results("instance,algorithm\n") {
            Err(Error::MissingColumn(c)) => assert_eq!(c, "epsilon"),
            other => panic!("{other:?}"),
        }
    }
}
