//! Subcommand implementations. Every command reads declarative TOML, works
//! through the library, and writes its outputs atomically under the chosen
//! output directory.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use fraudloss::boost::fit_boost;
use fraudloss::config::{DgpConfig, EstimatorConfig, ExperimentFile};
use fraudloss::criteria::{fraud_loss, top_k_labels};
use fraudloss::dataset::Dataset;
use fraudloss::datagen::generate_dataset;
use fraudloss::error::Error;
use fraudloss::experiments::atomic_write;
use fraudloss::path::{BoostFitter, PathFitter, RidgeFitter};
use fraudloss::ridge::fit_ridge;
use fraudloss::rng::stream_rng;
use fraudloss::validation::{
    boot_fraud_loss, cv_auc, cv_fraud_loss, Criterion, CriterionTable, Scheme, ValidationPlan,
};

use crate::ingest::{ingest_csv, IngestionSpec};
use crate::model_file::{ModelFile, SavedModel, SelectionInfo};
use crate::standin::{write_standin_csv, StandinConfig};

/// Exit classification: 1 config, 2 data, 3 numerical.
#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.message)
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Config(_) => 1,
            Error::Data(_) => 2,
            Error::NoConvergence { .. }
            | Error::Numerical(_)
            | Error::StratificationRequired { .. } => 3,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

impl CliError {
    fn config(msg: impl Into<String>) -> Self {
        CliError {
            code: 1,
            message: msg.into(),
        }
    }

    fn data(msg: impl Into<String>) -> Self {
        CliError {
            code: 2,
            message: msg.into(),
        }
    }
}

pub type CliResult = Result<(), CliError>;

fn read_toml<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::data(format!("cannot read {}: {e}", path.display())))?;
    toml::from_str(&text)
        .map_err(|e| CliError::config(format!("bad config {}: {e}", path.display())))
}

fn ensure_out_dir(out_dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(out_dir)
        .map_err(|e| CliError::data(format!("cannot create {}: {e}", out_dir.display())))
}

/// `simulate <config>`: run the full study and emit rfl_by_k.csv,
/// summary.csv and records.jsonl.
pub fn simulate(config_path: &Path, seed: Option<u64>, out_dir: &Path) -> CliResult {
    let mut file: ExperimentFile = read_toml(config_path)?;
    if let Some(seed) = seed {
        file.study.master_seed = seed;
    }
    let config = file.materialize::<f64>()?;
    let output = fraudloss::experiments::run_study(&config)?;
    ensure_out_dir(out_dir)?;
    let write = |name: &str, f: &dyn Fn(&Path) -> std::io::Result<()>| {
        let path = out_dir.join(name);
        f(&path).map_err(|e| CliError::data(format!("cannot write {}: {e}", path.display())))
    };
    write("rfl_by_k.csv", &|p| output.write_rfl_csv(p))?;
    write("summary.csv", &|p| output.write_summary_csv(p))?;
    write("records.jsonl", &|p| output.write_records_jsonl(p))?;
    println!("plan,criterion,avg_rfl_full_grid,avg_rfl_focus_grid");
    for avg in &output.rfl.averages {
        println!(
            "{},{},{:.4},{:.4}",
            avg.plan, avg.criterion, avg.full_grid, avg.focus_grid
        );
    }
    if !output.failures.is_empty() {
        eprintln!(
            "warning: {} of {} replicates failed",
            output.failures.len(),
            config.replicates
        );
        for (s, msg) in &output.failures {
            eprintln!("  replicate {s}: {msg}");
        }
    }
    Ok(())
}

#[derive(Debug, Deserialize)]
pub struct SelectFile {
    pub estimator: EstimatorConfig,
    pub selection: SelectionSection,
    #[serde(default)]
    pub ingestion: Option<IngestionSpec>,
}

#[derive(Debug, Deserialize)]
pub struct SelectionSection {
    #[serde(flatten)]
    pub scheme: Scheme,
    pub criterion: Criterion,
    #[serde(default = "default_tau")]
    pub tau: f64,
}

fn default_tau() -> f64 {
    0.2
}

/// `select <config> <train.csv>`: fit the path, pick the tuning value by
/// the configured criterion/plan, refit at the selection, save the model.
pub fn select(config_path: &Path, train_path: &Path, seed: Option<u64>, out_dir: &Path) -> CliResult {
    let file: SelectFile = read_toml(config_path)?;
    let (train, ingestion_metadata) = match &file.ingestion {
        Some(spec) => {
            let ingested = ingest_csv(spec, train_path)?;
            if ingested.unseen_levels > 0 {
                eprintln!(
                    "warning: {} unseen categorical levels mapped to the missing indicator",
                    ingested.unseen_levels
                );
            }
            if ingested.eval.n() > 0 {
                eprintln!(
                    "note: split rule leaves {} rows for evaluation; training on {}",
                    ingested.eval.n(),
                    ingested.train.n()
                );
            }
            (ingested.train, Some(ingested.metadata))
        }
        None => {
            let text = fs::File::open(train_path)
                .map_err(|e| CliError::data(format!("cannot read {}: {e}", train_path.display())))?;
            (Dataset::<f64>::read_csv(text)?, None)
        }
    };

    let plan = ValidationPlan {
        scheme: file.selection.scheme,
        tau: file.selection.tau,
        seed: seed.unwrap_or(0),
    };
    let (table, saved): (CriterionTable, SavedModel) = match &file.estimator {
        EstimatorConfig::Ridge {
            n_lambdas,
            lambda_min_ratio,
        } => {
            let opts = fraudloss::ridge::RidgeOptions::default();
            let fitter = RidgeFitter::from_dataset(&train, *n_lambdas, *lambda_min_ratio, opts)?;
            let table = criterion_table(&fitter, &train, &plan, file.selection.criterion)?;
            let (lambda, _) = table.select_tuning();
            let model = fit_ridge(&train, lambda, &opts)?;
            (table, SavedModel::Ridge(model))
        }
        EstimatorConfig::Boost { .. } => {
            let fraudloss::experiments::Estimator::Boost { m_max, opts } =
                file.estimator.materialize::<f64>()
            else {
                unreachable!()
            };
            let fitter = BoostFitter::full_grid(m_max, opts)?;
            let table = criterion_table(&fitter, &train, &plan, file.selection.criterion)?;
            let (m_selected, _) = table.select_tuning();
            let model = fit_boost(&train, m_selected as usize, &opts)?;
            (table, SavedModel::Boost(model))
        }
    };

    let (tuning, index) = table.select_tuning();
    let model_file = ModelFile {
        model: saved,
        selection: SelectionInfo {
            criterion: table.criterion.name().to_string(),
            plan: plan.scheme.label(),
            tau: plan.tau,
            tuning,
            statistic: table.statistic[index],
        },
        ingestion: ingestion_metadata,
    };
    ensure_out_dir(out_dir)?;
    model_file.save(&out_dir.join("model.json"))?;
    let table_path = out_dir.join("criterion_table.csv");
    atomic_write(&table_path, |w| table.write_csv(w))
        .map_err(|e| CliError::data(format!("cannot write {}: {e}", table_path.display())))?;
    println!(
        "selected tuning {} by {} under {} (statistic {:.6})",
        tuning,
        table.criterion.name(),
        plan.scheme.label(),
        table.statistic[index]
    );
    Ok(())
}

fn criterion_table<P: PathFitter<f64>>(
    fitter: &P,
    train: &Dataset<f64>,
    plan: &ValidationPlan,
    criterion: Criterion,
) -> Result<CriterionTable, CliError> {
    let table = match (criterion, plan.scheme) {
        (Criterion::FraudLoss, Scheme::Cv { .. }) => cv_fraud_loss(fitter, train, plan)?,
        (Criterion::FraudLoss, Scheme::Bootstrap { .. }) => boot_fraud_loss(fitter, train, plan)?,
        (Criterion::Auc, _) => cv_auc(fitter, train, plan)?,
    };
    Ok(table)
}

/// `evaluate <model> <test.csv> --k-grid ...`: test fraud loss per k.
pub fn evaluate(model_path: &Path, test_path: &Path, k_grid: &[usize], out_dir: &Path) -> CliResult {
    if k_grid.is_empty() {
        return Err(CliError::config("--k-grid must list at least one k"));
    }
    let model = ModelFile::load(model_path)?;
    let test = match &model.ingestion {
        Some(metadata) => {
            let (dataset, unseen) = crate::ingest::apply_metadata(metadata, test_path)?;
            if unseen > 0 {
                eprintln!(
                    "warning: {unseen} unseen categorical levels mapped to the missing indicator"
                );
            }
            dataset
        }
        None => {
            let file = fs::File::open(test_path)
                .map_err(|e| CliError::data(format!("cannot read {}: {e}", test_path.display())))?;
            Dataset::<f64>::read_csv(file)?
        }
    };
    for &k in k_grid {
        if k == 0 || k > test.n() {
            return Err(CliError::config(format!(
                "k = {k} is out of range for a test set of {} rows",
                test.n()
            )));
        }
    }
    let scores = model.predict_proba(test.covariates())?;
    ensure_out_dir(out_dir)?;
    let path = out_dir.join("evaluation.csv");
    let mut lines = vec!["k,fraud_loss,fraud_loss_fraction".to_string()];
    println!("k,fraud_loss,fraud_loss_fraction");
    for &k in k_grid {
        let selection = top_k_labels(&scores, k)?;
        let loss = fraud_loss(test.labels(), &selection);
        let line = format!("{k},{loss},{}", loss as f64 / k as f64);
        println!("{line}");
        lines.push(line);
    }
    atomic_write(&path, |w| {
        use std::io::Write;
        for line in &lines {
            writeln!(w, "{line}")?;
        }
        Ok(())
    })
    .map_err(|e| CliError::data(format!("cannot write {}: {e}", path.display())))?;
    Ok(())
}

#[derive(Debug, Deserialize)]
struct GenerateKind {
    #[serde(default = "default_kind")]
    kind: String,
}

fn default_kind() -> String {
    "copula".to_string()
}

/// `generate <dgp-config> -n N`: emit a synthetic CSV. `kind = "copula"`
/// (default) uses the copula process; `kind = "vat_standin"` emits the
/// multi-period mixed-type stand-in.
pub fn generate(config_path: &Path, n: usize, seed: Option<u64>, out_dir: &Path) -> CliResult {
    let text = fs::read_to_string(config_path)
        .map_err(|e| CliError::data(format!("cannot read {}: {e}", config_path.display())))?;
    let kind: GenerateKind = toml::from_str(&text)
        .map_err(|e| CliError::config(format!("bad config {}: {e}", config_path.display())))?;
    ensure_out_dir(out_dir)?;
    match kind.kind.as_str() {
        "copula" => {
            let config: DgpConfig = toml::from_str(&text)
                .map_err(|e| CliError::config(format!("bad config: {e}")))?;
            let spec = config.materialize::<f64>()?;
            let mut rng = stream_rng(seed.unwrap_or(0), &[fraudloss::rng::STREAM_TRAIN]);
            let dataset = generate_dataset(&spec, n, &mut rng)?;
            let path = out_dir.join("synthetic.csv");
            dataset
                .write_csv_path(&path)
                .map_err(|e| CliError::data(format!("cannot write {}: {e}", path.display())))?;
            println!(
                "wrote {} rows x {} covariates to {}",
                dataset.n(),
                dataset.p(),
                path.display()
            );
        }
        "vat_standin" => {
            let mut config: StandinConfig = toml::from_str(&text)
                .map_err(|e| CliError::config(format!("bad config: {e}")))?;
            if let Some(seed) = seed {
                config.seed = seed;
            }
            if n > 0 {
                config.rows_per_period = n.div_ceil(config.periods.len().max(1));
            }
            let path = out_dir.join("standin.csv");
            write_standin_csv(&path, &config)?;
            println!("wrote stand-in data to {}", path.display());
        }
        other => {
            return Err(CliError::config(format!(
                "unknown generator kind `{other}` (use copula or vat_standin)"
            )))
        }
    }
    Ok(())
}

pub fn out_dir_or_default(out_dir: &Option<PathBuf>) -> PathBuf {
    out_dir.clone().unwrap_or_else(|| PathBuf::from("."))
}
