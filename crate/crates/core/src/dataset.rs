//! Covariate matrix plus binary labels: the universal input to fitting,
//! validation and evaluation.

use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::Real;

#[derive(Debug, Clone)]
pub struct Dataset<F> {
    covariates: Matrix<F>,
    labels: Vec<u8>,
    feature_names: Option<Vec<String>>,
}

impl<F: Real> Dataset<F> {
    /// Build a dataset, validating the container invariants: binary labels,
    /// finite covariates, matching row counts.
    pub fn new(covariates: Matrix<F>, labels: Vec<u8>) -> Result<Self> {
        if covariates.rows() != labels.len() {
            return Err(Error::data(format!(
                "covariate rows ({}) and labels ({}) differ",
                covariates.rows(),
                labels.len()
            )));
        }
        if labels.iter().any(|&y| y > 1) {
            return Err(Error::data("labels must be 0 or 1"));
        }
        if covariates.data().iter().any(|v| !v.is_finite()) {
            return Err(Error::data("covariates contain non-finite values"));
        }
        Ok(Dataset {
            covariates,
            labels,
            feature_names: None,
        })
    }

    pub fn with_feature_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.covariates.cols() {
            return Err(Error::data("feature name count does not match columns"));
        }
        self.feature_names = Some(names);
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn p(&self) -> usize {
        self.covariates.cols()
    }

    pub fn covariates(&self) -> &Matrix<F> {
        &self.covariates
    }

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    pub fn feature_names(&self) -> Option<&[String]> {
        self.feature_names.as_deref()
    }

    pub fn positives(&self) -> usize {
        self.labels.iter().map(|&y| y as usize).sum()
    }

    pub fn label_mean(&self) -> F {
        F::of_usize(self.positives()) / F::of_usize(self.n().max(1))
    }

    /// Row subset (indices may repeat, as in bootstrap resamples).
    pub fn subset(&self, indices: &[usize]) -> Dataset<F> {
        let p = self.p();
        let mut data = Vec::with_capacity(indices.len() * p);
        let mut labels = Vec::with_capacity(indices.len());
        for &i in indices {
            data.extend_from_slice(self.covariates.row(i));
            labels.push(self.labels[i]);
        }
        Dataset {
            covariates: Matrix::from_vec(indices.len(), p, data),
            labels,
            feature_names: self.feature_names.clone(),
        }
    }

    /// Write as CSV with header `y,x1,...,xp`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        write!(w, "y")?;
        for j in 0..self.p() {
            write!(w, ",x{}", j + 1)?;
        }
        writeln!(w)?;
        for i in 0..self.n() {
            write!(w, "{}", self.labels[i])?;
            for &v in self.covariates.row(i) {
                write!(w, ",{}", v.into_f64())?;
            }
            writeln!(w)?;
        }
        Ok(())
    }

    pub fn write_csv_path(&self, path: &Path) -> std::io::Result<()> {
        crate::experiments::atomic_write(path, |w| self.write_csv(w))
    }

    /// Read a CSV in the `y,x1,...,xp` layout produced by `write_csv`.
    pub fn read_csv<R: Read>(r: R) -> Result<Self> {
        let reader = BufReader::new(r);
        let mut lines = reader.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::data("empty CSV"))?
            .map_err(|e| Error::data(format!("read error: {e}")))?;
        let columns: Vec<&str> = header.split(',').collect();
        if columns.first() != Some(&"y") {
            return Err(Error::data("expected first CSV column to be `y`"));
        }
        let p = columns.len() - 1;
        let mut labels = Vec::new();
        let mut data: Vec<F> = Vec::new();
        for (lineno, line) in lines.enumerate() {
            let line = line.map_err(|e| Error::data(format!("read error: {e}")))?;
            if line.is_empty() {
                continue;
            }
            let mut fields = line.split(',');
            let y: u8 = fields
                .next()
                .unwrap()
                .trim()
                .parse()
                .map_err(|_| Error::data(format!("line {}: bad label", lineno + 2)))?;
            labels.push(y);
            let mut count = 0;
            for field in fields {
                let v: f64 = field.trim().parse().map_err(|_| {
                    Error::data(format!("line {}: bad numeric value `{field}`", lineno + 2))
                })?;
                data.push(F::of(v));
                count += 1;
            }
            if count != p {
                return Err(Error::data(format!(
                    "line {}: expected {p} covariates, found {count}",
                    lineno + 2
                )));
            }
        }
        let n = labels.len();
        Dataset::new(Matrix::from_vec(n, p, data), labels)?
            .with_feature_names(columns[1..].iter().map(|s| s.to_string()).collect())
    }
}
