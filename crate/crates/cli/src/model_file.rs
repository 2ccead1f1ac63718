//! The saved-model JSON document: the fitted predictor, how it was
//! selected, and any ingestion metadata needed to score new CSVs.

use std::path::Path;

use serde::{Deserialize, Serialize};

use fraudloss::boost::BoostModel;
use fraudloss::error::{Error, Result};
use fraudloss::linalg::Matrix;
use fraudloss::ridge::RidgeModel;
use fraudloss::scalar::sigmoid;

use crate::ingest::IngestionMetadata;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum SavedModel {
    Ridge(RidgeModel<f64>),
    Boost(BoostModel<f64>),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SelectionInfo {
    pub criterion: String,
    pub plan: String,
    pub tau: f64,
    pub tuning: f64,
    pub statistic: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModelFile {
    pub model: SavedModel,
    pub selection: SelectionInfo,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ingestion: Option<IngestionMetadata>,
}

impl ModelFile {
    pub fn expected_columns(&self) -> usize {
        match &self.model {
            SavedModel::Ridge(m) => m.coefficients.len(),
            SavedModel::Boost(_) => self
                .ingestion
                .as_ref()
                .map(|m| m.feature_names.len())
                .unwrap_or(0),
        }
    }

    pub fn predict_proba(&self, x: &Matrix<f64>) -> Result<Vec<f64>> {
        match &self.model {
            SavedModel::Ridge(m) => m.predict_proba(x),
            SavedModel::Boost(m) => Ok((0..x.rows())
                .map(|i| sigmoid(m.predict_raw(x.row(i))))
                .collect()),
        }
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let json = serde_json::to_string_pretty(self)
            .map_err(|e| Error::data(format!("cannot serialize model: {e}")))?;
        fraudloss::experiments::atomic_write(path, |w| {
            use std::io::Write;
            w.write_all(json.as_bytes())?;
            w.write_all(b"\n")
        })
        .map_err(|e| Error::data(format!("cannot write {}: {e}", path.display())))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::data(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| Error::config(format!("bad model file {}: {e}", path.display())))
    }
}
