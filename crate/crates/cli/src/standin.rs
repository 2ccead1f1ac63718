//! A synthetic stand-in for a multi-period VAT-control dataset: mixed
//! numeric/categorical/binary columns, sporadic missing cells, around 20%
//! positives, and a period column for time-based splits. Used to exercise
//! the real-data ingestion workflow without any sensitive data.

use std::path::Path;

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use fraudloss::datagen::calibrate_intercept;
use fraudloss::error::{Error, Result};
use fraudloss::rng::stream_rng;
use fraudloss::scalar::sigmoid;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StandinConfig {
    #[serde(default = "default_periods")]
    pub periods: Vec<i64>,
    #[serde(default = "default_rows_per_period")]
    pub rows_per_period: usize,
    #[serde(default = "default_n_numeric")]
    pub n_numeric: usize,
    #[serde(default = "default_n_binary")]
    pub n_binary: usize,
    #[serde(default = "default_cat_levels")]
    pub categorical_levels: Vec<usize>,
    #[serde(default = "default_missing_rate")]
    pub missing_rate: f64,
    #[serde(default = "default_positive_rate")]
    pub positive_rate: f64,
    #[serde(default)]
    pub seed: u64,
}

fn default_periods() -> Vec<i64> {
    (6..=12).collect()
}
fn default_rows_per_period() -> usize {
    300
}
fn default_n_numeric() -> usize {
    8
}
fn default_n_binary() -> usize {
    3
}
fn default_cat_levels() -> Vec<usize> {
    vec![3, 4]
}
fn default_missing_rate() -> f64 {
    0.03
}
fn default_positive_rate() -> f64 {
    0.2
}

impl Default for StandinConfig {
    fn default() -> Self {
        StandinConfig {
            periods: default_periods(),
            rows_per_period: default_rows_per_period(),
            n_numeric: default_n_numeric(),
            n_binary: default_n_binary(),
            categorical_levels: default_cat_levels(),
            missing_rate: default_missing_rate(),
            positive_rate: default_positive_rate(),
            seed: 0,
        }
    }
}

/// Header plus rows for the stand-in CSV.
pub fn standin_table(config: &StandinConfig) -> Result<(Vec<String>, Vec<Vec<String>>)> {
    if config.periods.is_empty() || config.rows_per_period == 0 {
        return Err(Error::config("stand-in needs periods and rows"));
    }
    if !(0.0..1.0).contains(&config.missing_rate) {
        return Err(Error::config("missing_rate must lie in [0, 1)"));
    }
    if !(0.0..1.0).contains(&config.positive_rate) || config.positive_rate == 0.0 {
        return Err(Error::config("positive_rate must lie in (0, 1)"));
    }
    if config.n_numeric < 3 {
        return Err(Error::config("stand-in needs at least 3 numeric columns"));
    }
    let mut rng = stream_rng(config.seed, &[0x5747]);
    let n = config.periods.len() * config.rows_per_period;

    let mut header = vec!["period".to_string(), "y".to_string()];
    for j in 0..config.n_numeric {
        header.push(format!("num{}", j + 1));
    }
    for (c, _) in config.categorical_levels.iter().enumerate() {
        header.push(format!("cat{}", c + 1));
    }
    for j in 0..config.n_binary {
        header.push(format!("bin{}", j + 1));
    }

    // latent covariates first, then a calibrated intercept sets the
    // positive rate; missing cells are injected only in the emitted text
    let mut numerics = vec![vec![0.0f64; config.n_numeric]; n];
    let mut cats = vec![vec![0usize; config.categorical_levels.len()]; n];
    let mut bins = vec![vec![0u8; config.n_binary]; n];
    let mut scores = vec![0.0f64; n];
    for i in 0..n {
        for (j, cell) in numerics[i].iter_mut().enumerate() {
            let u: f64 = rng.random();
            let v: f64 = rng.random();
            // alternate symmetric and skewed columns
            *cell = if j % 2 == 0 {
                (-2.0 * u.max(1e-12).ln()).sqrt()
                    * (2.0 * std::f64::consts::PI * v).cos()
            } else {
                -(u.max(1e-12).ln()) * 2.0
            };
        }
        for (c, &levels) in config.categorical_levels.iter().enumerate() {
            cats[i][c] = rng.random_range(0..levels);
        }
        for b in bins[i].iter_mut() {
            *b = u8::from(rng.random::<f64>() < 0.4);
        }
        scores[i] = 0.9 * numerics[i][0] - 0.6 * numerics[i][1] + 0.4 * numerics[i][2]
            + 0.5 * cats[i][0] as f64 / config.categorical_levels[0] as f64
            + 0.8 * f64::from(bins[i][0]);
    }
    let intercept = calibrate_intercept(&scores, config.positive_rate);

    let mut rows = Vec::with_capacity(n);
    for i in 0..n {
        let period = config.periods[i / config.rows_per_period];
        let y = u8::from(rng.random::<f64>() < sigmoid(intercept + scores[i]));
        let mut row = vec![period.to_string(), y.to_string()];
        for &v in &numerics[i] {
            if rng.random::<f64>() < config.missing_rate {
                row.push(String::new());
            } else {
                row.push(format!("{v:.6}"));
            }
        }
        for (c, _) in config.categorical_levels.iter().enumerate() {
            if rng.random::<f64>() < config.missing_rate {
                row.push(String::new());
            } else {
                row.push(format!("L{}", cats[i][c]));
            }
        }
        for &b in &bins[i] {
            row.push(b.to_string());
        }
        rows.push(row);
    }
    Ok((header, rows))
}

pub fn write_standin_csv(path: &Path, config: &StandinConfig) -> Result<()> {
    let (header, rows) = standin_table(config)?;
    fraudloss::experiments::atomic_write(path, |w| {
        use std::io::Write;
        writeln!(w, "{}", header.join(","))?;
        for row in rows {
            writeln!(w, "{}", row.join(","))?;
        }
        Ok(())
    })
    .map_err(|e| Error::data(format!("cannot write {}: {e}", path.display())))
}
