//! Summary rows, the fixed CSV schema, the run manifest, and atomic writes.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

/// Version of the summary.csv column schema, recorded in the manifest.
pub const CSV_SCHEMA_VERSION: u32 = 1;

/// Fixed column set of `summary.csv`.
pub const CSV_HEADER: &str =
    "experiment,dim,t_e,sampler,n_shots,re_mean,im_mean,stderr,kappa,renormalized,born_oracle,abs_error,pass";

/// One row of the summary table. Fields that do not apply to an experiment
/// stay `None` and render as empty cells; the schema never changes shape.
#[derive(Debug, Clone, Default)]
pub struct SummaryRow {
    pub experiment: String,
    pub dim: Option<usize>,
    pub t_e: Option<f64>,
    pub sampler: Option<String>,
    pub n_shots: Option<usize>,
    pub re_mean: Option<f64>,
    pub im_mean: Option<f64>,
    pub stderr: Option<f64>,
    pub kappa: Option<f64>,
    pub renormalized: Option<f64>,
    pub born_oracle: Option<f64>,
    pub abs_error: Option<f64>,
    pub pass: Option<bool>,
}

fn cell_f64(v: Option<f64>) -> String {
    // `{}` prints the shortest representation that round-trips, so identical
    // bits always render as identical bytes.
    v.map(|x| format!("{x}")).unwrap_or_default()
}

fn cell_usize(v: Option<usize>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

impl SummaryRow {
    pub fn csv_line(&self) -> String {
        [
            self.experiment.clone(),
            cell_usize(self.dim),
            cell_f64(self.t_e),
            self.sampler.clone().unwrap_or_default(),
            cell_usize(self.n_shots),
            cell_f64(self.re_mean),
            cell_f64(self.im_mean),
            cell_f64(self.stderr),
            cell_f64(self.kappa),
            cell_f64(self.renormalized),
            cell_f64(self.born_oracle),
            cell_f64(self.abs_error),
            self.pass.map(|p| p.to_string()).unwrap_or_default(),
        ]
        .join(",")
    }
}

/// Renders the whole summary.csv.
pub fn summary_csv(rows: &[SummaryRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&row.csv_line());
        out.push('\n');
    }
    out
}

/// Writes `content` to `path` atomically: a temp file in the same directory,
/// flushed, synced, then renamed over the target. An interrupted run leaves
/// the target either absent or complete, never partial.
pub fn atomic_write(path: &Path, content: &str) -> std::io::Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent)?;
        }
    }
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    let result = (|| {
        let mut file = fs::File::create(&tmp)?;
        file.write_all(content.as_bytes())?;
        file.sync_all()?;
        drop(file);
        fs::rename(&tmp, path)
    })();
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    result
}

/// Run manifest: everything needed to reproduce the run bit for bit, plus
/// wall-clock bookkeeping (which is why the manifest itself is the one
/// output file that differs between reruns).
pub struct Manifest {
    pub experiment: String,
    pub config_echo: String,
    pub started_unix: u64,
    pub wall_clock_secs: f64,
    pub summary_lines: Vec<String>,
    pub notes: Vec<String>,
}

impl Manifest {
    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "artifact_version = {}", env!("CARGO_PKG_VERSION"));
        let _ = writeln!(out, "csv_schema_version = {CSV_SCHEMA_VERSION}");
        let _ = writeln!(out, "csv_columns = {CSV_HEADER}");
        let _ = writeln!(out, "experiment = {}", self.experiment);
        let _ = writeln!(out, "started_unix = {}", self.started_unix);
        let _ = writeln!(out, "wall_clock_secs = {:.3}", self.wall_clock_secs);
        let _ = writeln!(out, "\n[config]");
        out.push_str(&self.config_echo);
        if !self.notes.is_empty() {
            let _ = writeln!(out, "\n[notes]");
            for note in &self.notes {
                let _ = writeln!(out, "{note}");
            }
        }
        let _ = writeln!(out, "\n[summary]");
        for line in &self.summary_lines {
            let _ = writeln!(out, "{line}");
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_cells_render_empty() {
        let row = SummaryRow {
            experiment: "kappa".into(),
            kappa: Some(0.5),
            pass: Some(true),
            ..SummaryRow::default()
        };
        assert_eq!(row.csv_line(), "kappa,,,,,,,,0.5,,,,true");
        assert_eq!(CSV_HEADER.split(',').count(), row.csv_line().split(',').count());
    }

    #[test]
    fn float_cells_round_trip() {
        let x = 0.1 + 0.2; // not exactly 0.3
        let rendered = cell_f64(Some(x));
        assert_eq!(rendered.parse::<f64>().unwrap(), x);
    }

    #[test]
    fn atomic_write_replaces_and_cleans_up() {
        let dir = std::env::temp_dir().join(format!("pe-out-test-{}", std::process::id()));
        let path = dir.join("nested/summary.csv");
        atomic_write(&path, "hello\n").unwrap();
        assert_eq!(fs::read_to_string(&path).unwrap(), "hello\n");
        atomic_write(&path, "replaced\n").unwrap();
        assert_eq!(fs::read_to_string(&path).unwrap(), "replaced\n");
        // No temp litter.
        let leftovers: Vec<_> = fs::read_dir(path.parent().unwrap())
            .unwrap()
            .filter_map(|e| e.ok())
            .filter(|e| e.file_name().to_string_lossy().ends_with(".tmp"))
            .collect();
        assert!(leftovers.is_empty());
        let _ = fs::remove_dir_all(&dir);
    }
}
