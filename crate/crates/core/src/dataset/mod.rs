//! Sample data model, manifest ingestion for folder-based datasets, and
//! the synthetic phantom generator used for desk-scale verification.

mod io;
mod phantom;

pub use io::{load_grayscale, save_grayscale_u16, save_mask_png};
pub use phantom::{generate_phantom_dataset, materialize_phantoms, PhantomConfig, PhantomSpec};

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{AgeError, Result};
use crate::imgproc::resize_bilinear;
use crate::Grid;

/// BI-RADS-style density category.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum DensityClass {
    A,
    B,
    C,
    D,
}

impl DensityClass {
    pub const ALL: [DensityClass; 4] = [
        DensityClass::A,
        DensityClass::B,
        DensityClass::C,
        DensityClass::D,
    ];

    pub fn index(self) -> usize {
        match self {
            DensityClass::A => 0,
            DensityClass::B => 1,
            DensityClass::C => 2,
            DensityClass::D => 3,
        }
    }

    pub fn from_index(i: usize) -> DensityClass {
        Self::ALL[i]
    }
}

impl fmt::Display for DensityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            DensityClass::A => "A",
            DensityClass::B => "B",
            DensityClass::C => "C",
            DensityClass::D => "D",
        };
        f.write_str(c)
    }
}

impl FromStr for DensityClass {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "A" => Ok(DensityClass::A),
            "B" => Ok(DensityClass::B),
            "C" => Ok(DensityClass::C),
            "D" => Ok(DensityClass::D),
            other => Err(format!("unknown label token `{other}` (expected A|B|C|D)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum View {
    CC,
    MLO,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Laterality {
    L,
    R,
}

/// Grayscale sample: pixel grid in [0,1] plus optional metadata.
#[derive(Debug, Clone)]
pub struct ImageSample {
    pub id: String,
    pub pixels: Grid,
    pub label: Option<DensityClass>,
    pub view: Option<View>,
    pub laterality: Option<Laterality>,
}

impl ImageSample {
    pub fn new(id: impl Into<String>, pixels: Grid) -> Self {
        ImageSample {
            id: id.into(),
            pixels,
            label: None,
            view: None,
            laterality: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Split {
    Train,
    Val,
    Test,
}

impl Split {
    pub const ALL: [Split; 3] = [Split::Train, Split::Val, Split::Test];
}

impl fmt::Display for Split {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Split::Train => "train",
            Split::Val => "val",
            Split::Test => "test",
        };
        f.write_str(s)
    }
}

impl FromStr for Split {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "train" => Ok(Split::Train),
            "val" => Ok(Split::Val),
            "test" => Ok(Split::Test),
            other => Err(format!(
                "unknown split token `{other}` (expected train|val|test)"
            )),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub id: String,
    pub path: PathBuf,
    pub label: Option<DensityClass>,
    pub split: Split,
}

/// Validated dataset manifest: entries plus per-split class counts.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct SplitManifest {
    pub entries: Vec<ManifestEntry>,
    pub class_counts: BTreeMap<Split, BTreeMap<DensityClass, u64>>,
}

impl SplitManifest {
    pub fn from_entries(entries: Vec<ManifestEntry>) -> Result<Self> {
        validate_entries(&entries)?;
        let class_counts = count_classes(&entries);
        Ok(SplitManifest {
            entries,
            class_counts,
        })
    }

    pub fn split_entries(&self, split: Split) -> impl Iterator<Item = &ManifestEntry> {
        self.entries.iter().filter(move |e| e.split == split)
    }

    pub fn split_len(&self, split: Split) -> usize {
        self.split_entries(split).count()
    }

    /// Per-class counts of one split as a fixed-size array (A..D order).
    pub fn class_count_array(&self, split: Split) -> [u64; 4] {
        let mut out = [0u64; 4];
        if let Some(counts) = self.class_counts.get(&split) {
            for (class, n) in counts {
                out[class.index()] = *n;
            }
        }
        out
    }

    /// Recount entries and compare against the stored counts.
    pub fn check_self_consistency(&self) -> Result<()> {
        let recount = count_classes(&self.entries);
        if recount != self.class_counts {
            return Err(AgeError::Validation(
                "manifest class_counts do not match entry recount".into(),
            ));
        }
        Ok(())
    }
}

fn count_classes(entries: &[ManifestEntry]) -> BTreeMap<Split, BTreeMap<DensityClass, u64>> {
    let mut counts: BTreeMap<Split, BTreeMap<DensityClass, u64>> = BTreeMap::new();
    for e in entries {
        if let Some(label) = e.label {
            *counts.entry(e.split).or_default().entry(label).or_insert(0) += 1;
        }
    }
    counts
}

/// Patient key: id prefix before the first `_`, or the whole id. Splits
/// must be disjoint at this level.
fn patient_key(id: &str) -> &str {
    id.split('_').next().unwrap_or(id)
}

fn validate_entries(entries: &[ManifestEntry]) -> Result<()> {
    let mut seen_ids: BTreeSet<&str> = BTreeSet::new();
    let mut patient_split: BTreeMap<&str, Split> = BTreeMap::new();
    for e in entries {
        if !seen_ids.insert(&e.id) {
            return Err(AgeError::Validation(format!(
                "duplicate sample id `{}` in manifest",
                e.id
            )));
        }
        let key = patient_key(&e.id);
        match patient_split.get(key) {
            Some(&split) if split != e.split => {
                return Err(AgeError::Validation(format!(
                    "patient `{key}` appears in splits {split} and {} (splits must be disjoint)",
                    e.split
                )));
            }
            _ => {
                patient_split.insert(key, e.split);
            }
        }
    }
    Ok(())
}

const MANIFEST_HEADER: [&str; 4] = ["id", "path", "label", "split"];

/// Load and validate a manifest CSV with header `id,path,label,split`.
///
/// The label column may be empty for pretraining-only samples. Every
/// referenced file must exist. Errors list the offending 1-based data
/// rows.
pub fn load_manifest(path: &Path) -> Result<SplitManifest> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(path)
        .map_err(|e| match e.kind() {
            csv::ErrorKind::Io(_) => AgeError::io(
                path,
                std::io::Error::new(std::io::ErrorKind::NotFound, e.to_string()),
            ),
            _ => AgeError::Validation(format!("cannot read manifest {}: {e}", path.display())),
        })?;

    let headers = reader
        .headers()
        .map_err(|e| AgeError::Validation(format!("manifest has no header row: {e}")))?
        .clone();
    let header_fields: Vec<&str> = headers.iter().collect();
    if header_fields != MANIFEST_HEADER {
        return Err(AgeError::Validation(format!(
            "manifest header must be `id,path,label,split`, got `{}`",
            header_fields.join(",")
        )));
    }

    let base = path.parent().unwrap_or(Path::new("."));
    let mut entries = Vec::new();
    let mut problems = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let row = i + 1;
        let record =
            record.map_err(|e| AgeError::Validation(format!("row {row}: malformed CSV: {e}")))?;
        if record.len() != 4 {
            problems.push(format!(
                "row {row}: expected 4 fields, got {}",
                record.len()
            ));
            continue;
        }
        let id = record[0].trim().to_string();
        if id.is_empty() {
            problems.push(format!("row {row}: empty id"));
            continue;
        }
        let raw_path = record[1].trim();
        let label_token = record[2].trim();
        let label = if label_token.is_empty() {
            None
        } else {
            match label_token.parse::<DensityClass>() {
                Ok(l) => Some(l),
                Err(msg) => {
                    problems.push(format!("row {row}: {msg}"));
                    continue;
                }
            }
        };
        let split = match record[3].trim().parse::<Split>() {
            Ok(s) => s,
            Err(msg) => {
                problems.push(format!("row {row}: {msg}"));
                continue;
            }
        };
        let file_path = {
            let p = PathBuf::from(raw_path);
            if p.is_absolute() {
                p
            } else {
                base.join(p)
            }
        };
        if !file_path.exists() {
            problems.push(format!(
                "row {row}: file does not exist: {}",
                file_path.display()
            ));
            continue;
        }
        entries.push(ManifestEntry {
            id,
            path: file_path,
            label,
            split,
        });
    }
    if !problems.is_empty() {
        return Err(AgeError::Validation(format!(
            "manifest {} has {} invalid row(s):\n  {}",
            path.display(),
            problems.len(),
            problems.join("\n  ")
        )));
    }
    SplitManifest::from_entries(entries)
}

/// Write a manifest CSV next to its image files. Paths are stored
/// relative to the manifest location when possible.
pub fn save_manifest(manifest: &SplitManifest, path: &Path) -> Result<()> {
    let base = path.parent().unwrap_or(Path::new("."));
    let mut writer = csv::Writer::from_path(path).map_err(|e| {
        AgeError::io(
            path,
            std::io::Error::new(std::io::ErrorKind::Other, e.to_string()),
        )
    })?;
    writer
        .write_record(MANIFEST_HEADER)
        .map_err(|e| AgeError::Format(format!("write manifest header: {e}")))?;
    for e in &manifest.entries {
        let rel = e.path.strip_prefix(base).unwrap_or(&e.path);
        let label = e.label.map(|l| l.to_string()).unwrap_or_default();
        writer
            .write_record([
                e.id.as_str(),
                &rel.to_string_lossy(),
                &label,
                &e.split.to_string(),
            ])
            .map_err(|e| AgeError::Format(format!("write manifest row: {e}")))?;
    }
    writer.flush().map_err(|e| AgeError::io(path, e))?;
    Ok(())
}

/// Resize to `target x target` (bilinear) and min-max normalize to [0,1].
///
/// A constant image maps to all zeros. The target side must be divisible
/// by the model patch size.
pub fn resize_and_normalize(
    sample: &ImageSample,
    target: usize,
    patch_size: usize,
) -> Result<ImageSample> {
    if patch_size == 0 || target % patch_size != 0 {
        return Err(AgeError::Config(format!(
            "target side {target} is not divisible by patch size {patch_size}"
        )));
    }
    let resized = resize_bilinear(&sample.pixels, target, target);
    let normalized = resized.min_max_normalized();
    Ok(ImageSample {
        id: sample.id.clone(),
        pixels: normalized,
        label: sample.label,
        view: sample.view,
        laterality: sample.laterality,
    })
}

/// Load every sample of a split, resized and normalized.
pub fn load_split(
    manifest: &SplitManifest,
    split: Split,
    target: usize,
    patch_size: usize,
) -> Result<Vec<ImageSample>> {
    let mut out = Vec::new();
    for entry in manifest.split_entries(split) {
        let pixels = load_grayscale(&entry.path)?;
        let mut sample = ImageSample::new(entry.id.clone(), pixels);
        sample.label = entry.label;
        out.push(resize_and_normalize(&sample, target, patch_size)?);
    }
    Ok(out)
}
