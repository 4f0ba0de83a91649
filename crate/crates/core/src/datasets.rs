//! Datasets: synthetic generators, CSV input/output, PCA and stratified
//! splitting.
//!
//! All generators are pure functions of their arguments and seed.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::io::{Read, Write};
use std::path::Path;

use log::warn;
use nalgebra::{DMatrix, SymmetricEigen};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::rng;
use crate::{Error, Result};

/// Feature rows with class labels in `0..classes`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    pub x: Vec<Vec<f64>>,
    pub labels: Vec<usize>,
    pub classes: usize,
    /// Original label strings, indexed by class, when loaded from a file.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label_names: Option<Vec<String>>,
}

impl Dataset {
    pub fn new(x: Vec<Vec<f64>>, labels: Vec<usize>, classes: usize) -> Result<Self> {
        if x.len() != labels.len() {
            return Err(Error::DimensionMismatch {
                expected: x.len(),
                found: labels.len(),
            });
        }
        if let Some(first) = x.first() {
            let k = first.len();
            if let Some(bad) = x.iter().find(|r| r.len() != k) {
                return Err(Error::DimensionMismatch {
                    expected: k,
                    found: bad.len(),
                });
            }
        }
        if let Some(&l) = labels.iter().find(|&&l| l >= classes) {
            return Err(Error::InvalidConfig(format!(
                "label {l} out of range for {classes} classes"
            )));
        }
        Ok(Self {
            x,
            labels,
            classes,
            label_names: None,
        })
    }

    /// An empty dataset with `k` features.
    pub fn empty(classes: usize) -> Self {
        Self {
            x: Vec::new(),
            labels: Vec::new(),
            classes,
            label_names: None,
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Feature dimension (0 for an empty set).
    pub fn k(&self) -> usize {
        self.x.first().map_or(0, Vec::len)
    }

    pub fn class_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.classes];
        for &l in &self.labels {
            counts[l] += 1;
        }
        counts
    }

    /// Classes with no rows.
    pub fn empty_classes(&self) -> Vec<usize> {
        self.class_counts()
            .iter()
            .enumerate()
            .filter(|(_, &c)| c == 0)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn subset(&self, indices: &[usize]) -> Self {
        Self {
            x: indices.iter().map(|&i| self.x[i].clone()).collect(),
            labels: indices.iter().map(|&i| self.labels[i]).collect(),
            classes: self.classes,
            label_names: self.label_names.clone(),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[f64], usize)> {
        self.x.iter().map(Vec::as_slice).zip(self.labels.iter().copied())
    }

    /// Writes the `x1,...,xk,label` layout with full double precision.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
        let mut header: Vec<String> = (1..=self.k()).map(|i| format!("x{i}")).collect();
        header.push("label".into());
        w.write_record(&header)?;
        for (row, label) in self.iter() {
            let mut rec: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            rec.push(label.to_string());
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn save_csv(&self, path: &Path) -> Result<()> {
        let file = std::fs::File::create(path)?;
        self.write_csv(std::io::BufWriter::new(file))
    }
}

fn shuffle_rows(x: &mut Vec<Vec<f64>>, labels: &mut Vec<usize>, rng: &mut rng::Stream) {
    let mut idx: Vec<usize> = (0..labels.len()).collect();
    idx.shuffle(rng);
    *x = idx.iter().map(|&i| x[i].clone()).collect();
    *labels = idx.iter().map(|&i| labels[i]).collect();
}

/// XOR of four square clusters around the origin.
pub fn gen_xor(n: usize, noise: f64, seed: u64) -> Result<Dataset> {
    gen_xor_at(n, noise, [0.0, 0.0], seed)
}

/// XOR clusters centred at `center + (±0.25, ±0.25)`, labelled by the
/// product of the offsets' signs (0 for equal signs).
///
/// With `center = (0.25, 0.25)` the clusters sit on the corners of the
/// Boolean square `{0, 0.5}²`. Clusters symmetric about the origin cannot
/// be told apart by models whose readout is even in one coordinate, such
/// as `qubit-A`.
pub fn gen_xor_at(n: usize, noise: f64, center: [f64; 2], seed: u64) -> Result<Dataset> {
    if n < 4 {
        return Err(Error::InvalidConfig(format!("xor needs n >= 4, got {n}")));
    }
    if !(noise >= 0.0) {
        return Err(Error::InvalidConfig(format!("noise must be >= 0, got {noise}")));
    }
    if noise >= 0.25 {
        warn!("xor noise {noise} >= 0.25: quadrant clusters overlap");
    }
    let mut rng = rng::stream(seed, &[0x786f72]);
    let mut x = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    for i in 0..n {
        let (sx, sy) = match i % 4 {
            0 => (1.0, 1.0),
            1 => (-1.0, 1.0),
            2 => (-1.0, -1.0),
            _ => (1.0, -1.0),
        };
        let jx = if noise > 0.0 { rng.random_range(-noise..=noise) } else { 0.0 };
        let jy = if noise > 0.0 { rng.random_range(-noise..=noise) } else { 0.0 };
        x.push(vec![center[0] + 0.25 * sx + jx, center[1] + 0.25 * sy + jy]);
        labels.push(usize::from(sx * sy < 0.0));
    }
    shuffle_rows(&mut x, &mut labels, &mut rng);
    Dataset::new(x, labels, 2)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CirclesParams {
    pub r_inner: f64,
    pub r_gap: f64,
    pub r_outer: f64,
}

impl Default for CirclesParams {
    fn default() -> Self {
        Self {
            r_inner: 0.25,
            r_gap: 0.1,
            r_outer: 0.5,
        }
    }
}

/// Class 0 uniform on a disk, class 1 uniform on a surrounding annulus.
pub fn gen_circles(n: usize, radii: CirclesParams, seed: u64) -> Result<Dataset> {
    let CirclesParams {
        r_inner,
        r_gap,
        r_outer,
    } = radii;
    if !(r_inner > 0.0 && r_gap >= 0.0 && r_inner + r_gap < r_outer) {
        return Err(Error::InvalidConfig(format!(
            "circle radii must satisfy 0 < r_inner < r_inner + r_gap < r_outer, got {r_inner}, {r_gap}, {r_outer}"
        )));
    }
    let mut rng = rng::stream(seed, &[0x636972]);
    let r_mid = r_inner + r_gap;
    let mut x = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    for i in 0..n {
        let class = i % 2;
        let u: f64 = rng.random();
        let r = if class == 0 {
            r_inner * u.sqrt()
        } else {
            (r_mid * r_mid + u * (r_outer * r_outer - r_mid * r_mid)).sqrt()
        };
        let t = rng.random_range(0.0..2.0 * PI);
        x.push(vec![r * t.cos(), r * t.sin()]);
        labels.push(class);
    }
    shuffle_rows(&mut x, &mut labels, &mut rng);
    Dataset::new(x, labels, 2)
}

/// Two interleaved half circles with Gaussian jitter, rescaled to `[-1, 1]²`.
pub fn gen_moons(n: usize, noise: f64, seed: u64) -> Result<Dataset> {
    gen_moons_raw(n, noise, seed).map(|mut data| {
        rescale_to_unit_box(&mut data.x);
        data
    })
}

/// Moons before rescaling: class 0 on `(cos t, sin t)`, class 1 on
/// `(1 - cos t, 0.5 - sin t)`, `t ∈ [0, π]`.
pub fn gen_moons_raw(n: usize, noise: f64, seed: u64) -> Result<Dataset> {
    if n < 2 {
        return Err(Error::InvalidConfig(format!("moons needs n >= 2, got {n}")));
    }
    if !(noise >= 0.0) {
        return Err(Error::InvalidConfig(format!("noise must be >= 0, got {noise}")));
    }
    let mut rng = rng::stream(seed, &[0x6d6f6f6e]);
    let jitter = Normal::new(0.0, noise).expect("noise checked above");
    let n_upper = n.div_ceil(2);
    let n_lower = n - n_upper;
    let arc = |i: usize, count: usize| {
        if count <= 1 {
            0.0
        } else {
            PI * i as f64 / (count - 1) as f64
        }
    };
    let mut x = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    for i in 0..n_upper {
        let t = arc(i, n_upper);
        x.push(vec![t.cos(), t.sin()]);
        labels.push(0);
    }
    for i in 0..n_lower {
        let t = arc(i, n_lower);
        x.push(vec![1.0 - t.cos(), 0.5 - t.sin()]);
        labels.push(1);
    }
    if noise > 0.0 {
        for row in &mut x {
            for v in row.iter_mut() {
                *v += jitter.sample(&mut rng);
            }
        }
    }
    shuffle_rows(&mut x, &mut labels, &mut rng);
    Dataset::new(x, labels, 2)
}

fn rescale_to_unit_box(x: &mut [Vec<f64>]) {
    let k = x.first().map_or(0, Vec::len);
    for j in 0..k {
        let lo = x.iter().map(|r| r[j]).fold(f64::INFINITY, f64::min);
        let hi = x.iter().map(|r| r[j]).fold(f64::NEG_INFINITY, f64::max);
        let span = hi - lo;
        for row in x.iter_mut() {
            row[j] = if span > 0.0 { 2.0 * (row[j] - lo) / span - 1.0 } else { 0.0 };
        }
    }
}

/// Three classes on a 3×3 grid of square clusters covering
/// `[-0.5, 0.5]²`; cell `(row, col)` has class `(row + col) mod 3`, so
/// every class occupies three diagonal cells.
pub fn gen_three_class(n: usize, margin: f64, seed: u64) -> Result<Dataset> {
    if n < 9 {
        return Err(Error::InvalidConfig(format!("three-class needs n >= 9, got {n}")));
    }
    if !(0.0..=0.1).contains(&margin) {
        return Err(Error::InvalidConfig(format!("margin must lie in [0, 0.1], got {margin}")));
    }
    let mut rng = rng::stream(seed, &[0x336373]);
    let cell = 1.0 / 3.0;
    let half = (cell - margin) / 2.0;
    let mut x = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    for i in 0..n {
        let c = i % 9;
        let (row, col) = (c / 3, c % 3);
        let cx = -0.5 + cell * (col as f64 + 0.5);
        let cy = 0.5 - cell * (row as f64 + 0.5);
        let px = if half > 0.0 { rng.random_range(-half..=half) } else { 0.0 };
        let py = if half > 0.0 { rng.random_range(-half..=half) } else { 0.0 };
        x.push(vec![cx + px, cy + py]);
        labels.push(three_class_label(row, col));
    }
    shuffle_rows(&mut x, &mut labels, &mut rng);
    Dataset::new(x, labels, 3)
}

pub fn three_class_label(row: usize, col: usize) -> usize {
    (row + col) % 3
}

fn parse_err(message: String) -> Error {
    Error::Parse {
        path: "csv".into(),
        message,
    }
}

/// Reads a CSV with a header row. `feature_columns = None` selects every
/// column except the label column.
///
/// Labels that are all non-negative integers keep their values when the
/// smallest is 0 and are otherwise mapped in ascending order; any other
/// labels are mapped in order of first appearance. `label_names` records
/// the mapping.
pub fn load_csv_from<R: Read>(
    input: R,
    feature_columns: Option<&[String]>,
    label_column: &str,
) -> Result<Dataset> {
    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(input);
    let headers: Vec<String> = reader.headers()?.iter().map(|h| h.trim().to_string()).collect();
    if headers.is_empty() || headers.iter().all(String::is_empty) {
        return Err(parse_err("empty file: no header row".into()));
    }
    let col = |name: &str| -> Result<usize> {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| parse_err(format!("missing column '{name}' (have: {})", headers.join(", "))))
    };
    let label_idx = col(label_column)?;
    let feature_idx: Vec<usize> = match feature_columns {
        Some(cols) => cols.iter().map(|c| col(c)).collect::<Result<_>>()?,
        None => (0..headers.len()).filter(|&i| i != label_idx).collect(),
    };
    let mut x = Vec::new();
    let mut raw_labels = Vec::new();
    for (row, record) in reader.records().enumerate() {
        let row_no = row + 1;
        let record = record.map_err(|e| parse_err(format!("row {row_no}: {e}")))?;
        let mut features = Vec::with_capacity(feature_idx.len());
        for &j in &feature_idx {
            let cell = record.get(j).unwrap_or("").trim();
            let v: f64 = cell.parse().map_err(|_| {
                parse_err(format!(
                    "row {row_no}, column '{}': cannot parse '{cell}' as a number",
                    headers[j]
                ))
            })?;
            features.push(v);
        }
        let label = record
            .get(label_idx)
            .ok_or_else(|| parse_err(format!("row {row_no}: missing label")))?
            .trim()
            .to_string();
        x.push(features);
        raw_labels.push(label);
    }
    if x.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let ints: Option<Vec<u64>> = raw_labels.iter().map(|l| l.parse::<u64>().ok()).collect();
    let (labels, names) = match ints {
        Some(v) if v.iter().min() == Some(&0) => {
            let m = *v.iter().max().expect("non-empty") as usize + 1;
            (
                v.iter().map(|&l| l as usize).collect::<Vec<_>>(),
                (0..m).map(|i| i.to_string()).collect::<Vec<_>>(),
            )
        }
        Some(v) => {
            let mut uniq = v.clone();
            uniq.sort_unstable();
            uniq.dedup();
            let labels = v.iter().map(|l| uniq.binary_search(l).expect("present")).collect();
            (labels, uniq.iter().map(|u| u.to_string()).collect())
        }
        None => {
            let mut map: HashMap<&str, usize> = HashMap::new();
            let mut names = Vec::new();
            let labels = raw_labels
                .iter()
                .map(|l| {
                    *map.entry(l.as_str()).or_insert_with(|| {
                        names.push(l.clone());
                        names.len() - 1
                    })
                })
                .collect();
            (labels, names)
        }
    };
    let classes = names.len();
    let mut data = Dataset::new(x, labels, classes)?;
    data.label_names = Some(names);
    Ok(data)
}

pub fn load_csv(path: &Path, feature_columns: Option<&[String]>, label_column: &str) -> Result<Dataset> {
    let file = std::fs::File::open(path).map_err(|e| Error::Parse {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    load_csv_from(file, feature_columns, label_column).map_err(|e| match e {
        Error::Parse { message, .. } => Error::Parse {
            path: path.display().to_string(),
            message,
        },
        other => other,
    })
}

/// Standardize-then-project principal components.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PcaModel {
    pub mean: Vec<f64>,
    /// Per-column standard deviation used for standardization.
    pub scale: Vec<f64>,
    /// `m × k`, orthonormal rows in descending eigenvalue order.
    pub components: Vec<Vec<f64>>,
    pub explained_variance: Vec<f64>,
}

pub fn pca_fit(data: &Dataset, m: usize) -> Result<PcaModel> {
    let n = data.len();
    let k = data.k();
    if n < 2 {
        return Err(Error::InvalidConfig(format!("pca needs at least 2 rows, got {n}")));
    }
    if m == 0 || m > k {
        return Err(Error::InvalidConfig(format!("pca components m = {m} must lie in 1..={k}")));
    }
    let mean: Vec<f64> = (0..k)
        .map(|j| data.x.iter().map(|r| r[j]).sum::<f64>() / n as f64)
        .collect();
    let scale: Vec<f64> = (0..k)
        .map(|j| {
            let var = data.x.iter().map(|r| (r[j] - mean[j]).powi(2)).sum::<f64>() / n as f64;
            if var > 0.0 {
                var.sqrt()
            } else {
                warn!("pca: column {j} has zero variance; leaving it unscaled");
                1.0
            }
        })
        .collect();
    let z = DMatrix::from_fn(n, k, |i, j| (data.x[i][j] - mean[j]) / scale[j]);
    let cov = (z.transpose() * &z) / (n as f64 - 1.0);
    let eig = SymmetricEigen::new(cov);
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let mut components = Vec::with_capacity(m);
    let mut explained_variance = Vec::with_capacity(m);
    for &c in order.iter().take(m) {
        let mut row: Vec<f64> = eig.eigenvectors.column(c).iter().copied().collect();
        let pivot = row
            .iter()
            .copied()
            .fold(0.0f64, |acc, v| if v.abs() > acc.abs() { v } else { acc });
        if pivot < 0.0 {
            row.iter_mut().for_each(|v| *v = -*v);
        }
        components.push(row);
        explained_variance.push(eig.eigenvalues[c].max(0.0));
    }
    Ok(PcaModel {
        mean,
        scale,
        components,
        explained_variance,
    })
}

impl PcaModel {
    pub fn standardize(&self, row: &[f64]) -> Vec<f64> {
        row.iter()
            .zip(self.mean.iter().zip(&self.scale))
            .map(|(v, (m, s))| (v - m) / s)
            .collect()
    }

    pub fn project(&self, row: &[f64]) -> Vec<f64> {
        let z = self.standardize(row);
        self.components
            .iter()
            .map(|c| c.iter().zip(&z).map(|(a, b)| a * b).sum())
            .collect()
    }
}

pub fn pca_transform(model: &PcaModel, data: &Dataset) -> Result<Dataset> {
    if data.k() != model.mean.len() && !data.is_empty() {
        return Err(Error::DimensionMismatch {
            expected: model.mean.len(),
            found: data.k(),
        });
    }
    Ok(Dataset {
        x: data.x.iter().map(|r| model.project(r)).collect(),
        labels: data.labels.clone(),
        classes: data.classes,
        label_names: data.label_names.clone(),
    })
}

/// Per-class shuffled split with `round(fraction · class size)` training
/// rows per class. Both halves keep the original row order.
pub fn stratified_split(data: &Dataset, train_fraction: f64, seed: u64) -> Result<(Dataset, Dataset)> {
    let (train, test) = stratified_indices(data, train_fraction, seed)?;
    Ok((data.subset(&train), data.subset(&test)))
}

pub fn stratified_indices(data: &Dataset, train_fraction: f64, seed: u64) -> Result<(Vec<usize>, Vec<usize>)> {
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(Error::InvalidConfig(format!(
            "train fraction must lie in (0, 1), got {train_fraction}"
        )));
    }
    let mut in_train = vec![false; data.len()];
    for class in 0..data.classes {
        let mut members: Vec<usize> = (0..data.len()).filter(|&i| data.labels[i] == class).collect();
        if members.is_empty() {
            continue;
        }
        let mut rng = rng::stream(seed, &[0x73706c6974, class as u64]);
        members.shuffle(&mut rng);
        let take = (train_fraction * members.len() as f64).round() as usize;
        if take == 0 {
            warn!("stratified split: class {class} gets no training rows");
        }
        for &i in &members[..take] {
            in_train[i] = true;
        }
    }
    let train = (0..data.len()).filter(|&i| in_train[i]).collect();
    let test = (0..data.len()).filter(|&i| !in_train[i]).collect();
    Ok((train, test))
}
