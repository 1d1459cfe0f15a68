//! Command-line front end: analyze one dessin or run the built-in corpus.

pub mod corpus;
pub mod render;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use dessin_core::chartab::{character_table, DEFAULT_CHARTAB_CAP};
use dessin_core::perm::DEFAULT_GROUP_CAP;
use dessin_core::spectrum::{
    analyze, conjugation_sum, field_k_power_maps, field_k_table, min_poly_of_x,
    predicted_eigenvalues, verify_predicted_are_roots, AnalyzeConfig, CheckStatus, SpectrumReport,
    Strategy, StrategyCaps, DEFAULT_DENSE_CAP, DEFAULT_KRYLOV_CAP,
};
use dessin_core::subfield::Subfield;
use dessin_core::{parse_dessin, Dessin, Error, RatPoly};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_CAP: i32 = 3;
pub const EXIT_INTERNAL: i32 = 4;
pub const EXIT_OUTSIDE_CYCLOTOMIC: i32 = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Machine,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    Auto,
    Dense,
    Krylov,
}

impl From<StrategyArg> for Strategy {
    fn from(s: StrategyArg) -> Strategy {
        match s {
            StrategyArg::Auto => Strategy::Auto,
            StrategyArg::Dense => Strategy::Dense,
            StrategyArg::Krylov => Strategy::Krylov,
        }
    }
}

/// Settings shared by both commands.
#[derive(Clone, Debug)]
pub struct Config {
    pub dense_cap: usize,
    pub group_cap: usize,
    pub krylov_cap: usize,
    pub chartab_cap: usize,
    pub strategy: Strategy,
    pub format: Format,
    pub multiplicities: bool,
    /// Corpus filter for `--selftest`; empty selects everything.
    pub corpus: String,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            dense_cap: DEFAULT_DENSE_CAP,
            group_cap: DEFAULT_GROUP_CAP,
            krylov_cap: DEFAULT_KRYLOV_CAP,
            chartab_cap: DEFAULT_CHARTAB_CAP,
            strategy: Strategy::Auto,
            format: Format::Text,
            multiplicities: false,
            corpus: String::new(),
        }
    }
}

impl Config {
    pub fn analyze_config(&self) -> AnalyzeConfig {
        AnalyzeConfig {
            strategy: self.strategy,
            dense_cap: self.dense_cap,
            group_cap: self.group_cap,
            krylov_cap: self.krylov_cap,
            chartab_cap: self.chartab_cap,
            multiplicities: self.multiplicities,
        }
    }
}

/// Where the dessin comes from.
#[derive(Clone, Debug)]
pub enum Source {
    Path(PathBuf),
    Inline(String),
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Syntax { .. } | Error::Input(_) | Error::DegreeMismatch { .. } => EXIT_INPUT,
        Error::CapExceeded { .. } => EXIT_CAP,
        Error::EigenvaluesOutsideCyclotomic { .. } => EXIT_OUTSIDE_CYCLOTOMIC,
        Error::DivisionByZero
        | Error::NotCoprime(..)
        | Error::NotDivisible(..)
        | Error::Internal(_) => EXIT_INTERNAL,
    }
}

/// Renders the report in the configured format.
pub fn render(report: &SpectrumReport, format: Format) -> String {
    match format {
        Format::Text => render::text(report),
        Format::Machine => {
            let mut s = serde_json::to_string_pretty(&render::machine(report))
                .expect("report values serialize");
            s.push('\n');
            s
        }
    }
}

/// Analyzes one dessin, writing the report to `out` and a one-line
/// diagnostic to `err` on failure. Returns the exit code.
pub fn cmd_analyze(
    source: &Source,
    config: &Config,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    let text = match source {
        Source::Inline(s) => s.clone(),
        Source::Path(p) => match std::fs::read_to_string(p) {
            Ok(s) => s,
            Err(e) => {
                let _ = writeln!(err, "error: cannot read {}: {e}", p.display());
                return EXIT_INPUT;
            }
        },
    };
    let result = parse_dessin(&text).and_then(|d| analyze(&d, &config.analyze_config()));
    let report = match result {
        Ok(r) => r,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return exit_code(&e);
        }
    };
    let _ = out.write_all(render(&report, config.format).as_bytes());
    if report.all_checks_pass() {
        EXIT_OK
    } else {
        let names: Vec<&str> = report.failed_checks().map(|c| c.name).collect();
        let _ = writeln!(err, "error: checks failed: {}", names.join(", "));
        EXIT_INTERNAL
    }
}

/// One selftest row.
#[derive(Clone, Debug)]
pub struct SelftestRow {
    pub name: &'static str,
    pub group: &'static str,
    pub order: usize,
    pub genus: usize,
    pub min_poly_degree: usize,
    pub k_degree: u64,
    /// `None` when the eigenvalues are not all in `Q(ζ_N)`.
    pub l_degree: Option<u64>,
    pub failures: Vec<String>,
    pub note: Option<String>,
}

/// `t^m − m^m`, the minimal polynomial of `m·(g, g)` when `g` has order `m`.
pub fn cyclic_closed_form(m: usize) -> RatPoly {
    let mut coeffs = vec![0i64; m + 1];
    coeffs[0] = -(m as i64).pow(m as u32);
    coeffs[m] = 1;
    RatPoly::from_i64(&coeffs)
}

/// Checks beyond the report's own: the two strategies agree where the dense
/// one applies, and diagonal cyclic entries match the closed form.
fn extra_checks(
    d: &Dessin,
    report: &SpectrumReport,
    config: &Config,
    cyclic: bool,
) -> Result<Vec<String>, Error> {
    let mut failures = Vec::new();
    if report.group_order <= config.dense_cap {
        let group = d.monodromy_group(config.group_cap)?;
        let x = conjugation_sum(&group)?;
        let caps = StrategyCaps {
            dense: config.dense_cap,
            krylov: config.krylov_cap,
        };
        let (dense, _) = min_poly_of_x(&x, Strategy::Dense, caps)?;
        let (krylov, _) = min_poly_of_x(&x, Strategy::Krylov, caps)?;
        if dense != krylov {
            failures.push(format!("strategies_agree (dense {dense}, krylov {krylov})"));
        }
    }
    if cyclic {
        let m = report.group_order;
        if report.squarefree_min_poly != cyclic_closed_form(m) {
            failures.push(format!("closed_form (got {})", report.squarefree_min_poly));
        }
        if report.field_l != Subfield::cyclotomic(m as u64) {
            failures.push(format!("closed_form_field (got {})", report.field_l));
        }
    }
    Ok(failures)
}

fn selftest_row(entry: &'static corpus::Entry, config: &Config) -> Result<SelftestRow, Error> {
    let d = parse_dessin(entry.text)?;
    let report = match analyze(&d, &config.analyze_config()) {
        Ok(r) => r,
        Err(Error::EigenvaluesOutsideCyclotomic { conductor, detail })
            if entry.expects_outside_cyclotomic() =>
        {
            return counterexample_row(
                entry,
                &d,
                config,
                format!("L is not inside Q(zeta_{conductor}): {detail}"),
            );
        }
        Err(e) => return Err(e),
    };
    let mut failures: Vec<String> = report
        .checks
        .iter()
        .filter(|c| c.status == CheckStatus::Fail)
        .map(|c| format!("{} ({})", c.name, c.detail))
        .collect();
    failures.extend(extra_checks(
        &d,
        &report,
        config,
        entry.is_cyclic_diagonal(),
    )?);
    if entry.expects_outside_cyclotomic() {
        failures.push(format!(
            "expected eigenvalues outside Q(zeta_{}), got L = {}",
            report.exponent, report.field_l
        ));
    }
    Ok(SelftestRow {
        name: entry.name,
        group: entry.group,
        order: report.group_order,
        genus: report.genus,
        min_poly_degree: report.min_poly.degree().unwrap_or(0),
        k_degree: report.field_k.degree(),
        l_degree: Some(report.field_l.degree()),
        failures,
        note: None,
    })
}

/// The checks that do not involve `L`, for a dessin whose eigenvalues leave
/// `Q(ζ_N)`.
fn counterexample_row(
    entry: &'static corpus::Entry,
    d: &Dessin,
    config: &Config,
    note: String,
) -> Result<SelftestRow, Error> {
    let group = d.monodromy_group(config.group_cap)?;
    let x = conjugation_sum(&group)?;
    let (a, b) = (group.generators()[0], group.generators()[1]);
    let mut failures = Vec::new();
    if let Err(w) = x.verify_commutation() {
        failures.push(format!("commutation ({w})"));
    }
    let caps = StrategyCaps {
        dense: config.dense_cap,
        krylov: config.krylov_cap,
    };
    let (m, _) = min_poly_of_x(&x, config.strategy, caps)?;
    let k = field_k_power_maps(&group, a, b)?;
    if group.order() <= config.chartab_cap {
        let table = character_table(&group, config.chartab_cap)?;
        if let Err(e) = table
            .verify_row_orthogonality()
            .and_then(|_| table.verify_column_orthogonality())
        {
            failures.push(format!("character_orthogonality ({e})"));
        }
        let k_table = field_k_table(&table, a, b)?;
        if k_table != k {
            failures.push(format!(
                "k_two_methods_agree (power maps {k}, table {k_table})"
            ));
        }
        let predicted = predicted_eigenvalues(&table, group.order(), a, b);
        if let Err(w) = verify_predicted_are_roots(&m, &predicted) {
            failures.push(format!("predicted_are_roots ({w})"));
        }
    }
    Ok(SelftestRow {
        name: entry.name,
        group: entry.group,
        order: group.order(),
        genus: d.genus()?,
        min_poly_degree: m.degree().unwrap_or(0),
        k_degree: k.degree(),
        l_degree: None,
        failures,
        note: Some(note),
    })
}

/// Runs every corpus entry selected by `config.corpus` and prints a table.
pub fn cmd_selftest(config: &Config, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let entries = corpus::select(&config.corpus);
    if entries.is_empty() {
        let _ = writeln!(
            err,
            "error: corpus filter '{}' selects no dessins",
            config.corpus
        );
        return EXIT_INPUT;
    }
    let _ = writeln!(
        out,
        "{:<12} {:<6} {:>5} {:>5} {:>5} {:>5} {:>5}  checks",
        "dessin", "group", "|G|", "genus", "deg m", "[k:Q]", "[L:Q]"
    );
    let mut failed = Vec::new();
    for entry in entries {
        match selftest_row(entry, config) {
            Ok(row) => {
                let mut status = if row.failures.is_empty() {
                    "pass".to_string()
                } else {
                    format!("FAIL: {}", row.failures.join("; "))
                };
                if let Some(note) = &row.note {
                    status = format!("{status} (expected: {note})");
                }
                let l = row.l_degree.map_or("-".to_string(), |d| d.to_string());
                let _ = writeln!(
                    out,
                    "{:<12} {:<6} {:>5} {:>5} {:>5} {:>5} {:>5}  {status}",
                    row.name, row.group, row.order, row.genus, row.min_poly_degree, row.k_degree, l
                );
                if !row.failures.is_empty() {
                    failed.push(entry.name);
                }
            }
            Err(e) => {
                let _ = writeln!(out, "{:<12} {:<6} error: {e}", entry.name, entry.group);
                failed.push(entry.name);
            }
        }
    }
    if failed.is_empty() {
        EXIT_OK
    } else {
        let _ = writeln!(err, "error: selftest failed for {}", failed.join(", "));
        EXIT_INTERNAL
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "dessin",
    version,
    about = "Exact spectrum of the conjugation-averaged element of a dessin"
)]
struct Cli {
    /// File containing a dessin ("n=3 a=(1 2 3) b=(1 2)").
    #[arg(long, value_name = "PATH", conflicts_with_all = ["inline", "selftest"])]
    input: Option<PathBuf>,
    /// The dessin itself, given on the command line.
    #[arg(long, value_name = "DESSIN", conflicts_with = "selftest")]
    inline: Option<String>,
    #[arg(long, value_enum, default_value = "auto")]
    strategy: StrategyArg,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Also report eigenvalue multiplicities (needs the dense action matrix).
    #[arg(long)]
    multiplicities: bool,
    #[arg(long, value_name = "N", default_value_t = DEFAULT_DENSE_CAP)]
    dense_cap: usize,
    #[arg(long, value_name = "N", default_value_t = DEFAULT_GROUP_CAP)]
    group_cap: usize,
    #[arg(long, value_name = "N", default_value_t = DEFAULT_KRYLOV_CAP)]
    krylov_cap: usize,
    #[arg(long, value_name = "N", default_value_t = DEFAULT_CHARTAB_CAP)]
    chartab_cap: usize,
    /// Run the built-in corpus, optionally restricted to a name, group or tag.
    #[arg(long, value_name = "FILTER", num_args = 0..=1, default_missing_value = "")]
    selftest: Option<String>,
}

/// Parses `args` (program name first) and runs the chosen command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(rendered.as_bytes())
            } else {
                out.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    let config = Config {
        dense_cap: cli.dense_cap,
        group_cap: cli.group_cap,
        krylov_cap: cli.krylov_cap,
        chartab_cap: cli.chartab_cap,
        strategy: cli.strategy.into(),
        format: cli.format,
        multiplicities: cli.multiplicities,
        corpus: cli.selftest.clone().unwrap_or_default(),
    };
    if let Err(e) = config.analyze_config().validate() {
        let _ = writeln!(err, "error: {e}");
        return exit_code(&e);
    }
    if cli.selftest.is_some() {
        return cmd_selftest(&config, out, err);
    }
    let source = match (cli.input, cli.inline) {
        (Some(p), None) => Source::Path(p),
        (None, Some(s)) => Source::Inline(s),
        _ => {
            let _ = writeln!(
                err,
                "error: give one of --input PATH, --inline DESSIN or --selftest"
            );
            return EXIT_INPUT;
        }
    };
    cmd_analyze(&source, &config, out, err)
}
