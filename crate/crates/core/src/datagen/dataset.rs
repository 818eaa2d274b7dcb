use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;

use crate::error::{Error, Result};

use super::classes::{builtin_class_specs, gen_sequence, ClassSpec};
use super::fasta::SequenceRecord;
use super::rng::{CounterRng, SPLIT_STREAM};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Split {
    Train,
    Validation,
    Test,
}

impl Split {
    pub fn as_str(self) -> &'static str {
        match self {
            Split::Train => "train",
            Split::Validation => "validation",
            Split::Test => "test",
        }
    }
}

impl fmt::Display for Split {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Split {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "train" => Ok(Split::Train),
            "validation" => Ok(Split::Validation),
            "test" => Ok(Split::Test),
            other => Err(Error::InvalidArgument(format!("unknown split {other:?}"))),
        }
    }
}

/// Relative split weights, e.g. `70,10,20`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SplitRatios {
    pub train: u32,
    pub validation: u32,
    pub test: u32,
}

impl Default for SplitRatios {
    fn default() -> Self {
        Self { train: 70, validation: 10, test: 20 }
    }
}

impl SplitRatios {
    /// `(train, validation, test)` counts for `n` records: the first two are
    /// rounded (halves up) and the test split takes the remainder.
    pub fn counts(&self, n: usize) -> (usize, usize, usize) {
        let total = (self.train + self.validation + self.test) as u64;
        let n64 = n as u64;
        let share = |w: u32| ((2 * n64 * w as u64 + total) / (2 * total)) as usize;
        let train = share(self.train).min(n);
        let validation = share(self.validation).min(n - train);
        (train, validation, n - train - validation)
    }
}

impl FromStr for SplitRatios {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("split ratios must look like 70,10,20, got {s:?}"));
        let parts: Vec<u32> =
            s.split(',').map(|p| p.trim().parse::<u32>().map_err(|_| bad())).collect::<Result<_>>()?;
        match parts[..] {
            [train, validation, test] if train + validation + test > 0 && train > 0 => {
                Ok(Self { train, validation, test })
            }
            _ => Err(bad()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ManifestEntry {
    pub id: String,
    pub class_label: String,
    pub split: Split,
    pub length: usize,
}

/// Split assignment for every record, sorted by id.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DatasetManifest {
    pub seed: u64,
    pub entries: Vec<ManifestEntry>,
}

impl DatasetManifest {
    pub fn split_of(&self, id: &str) -> Option<Split> {
        self.entries.binary_search_by(|e| e.id.as_str().cmp(id)).ok().map(|i| self.entries[i].split)
    }

    /// CSV `id,class,split,length` with a header row.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "id,class,split,length")?;
        for e in &self.entries {
            writeln!(out, "{},{},{},{}", e.id, e.class_label, e.split, e.length)?;
        }
        Ok(())
    }

    /// Reads the CSV produced by [`write_csv`](Self::write_csv). The seed is
    /// not part of the file and is set to 0.
    pub fn read_csv<R: BufRead>(input: R) -> Result<Self> {
        let mut entries = Vec::new();
        for (i, line) in input.lines().enumerate() {
            let line = line?;
            let err = |message: String| Error::InvalidArgument(format!("manifest line {}: {message}", i + 1));
            if i == 0 {
                if line != "id,class,split,length" {
                    return Err(err(format!("unexpected header {line:?}")));
                }
                continue;
            }
            if line.is_empty() {
                continue;
            }
            let f: Vec<&str> = line.split(',').collect();
            if f.len() != 4 {
                return Err(err(format!("expected 4 fields, found {}", f.len())));
            }
            entries.push(ManifestEntry {
                id: f[0].to_string(),
                class_label: f[1].to_string(),
                split: f[2].parse().map_err(|e: Error| err(e.to_string()))?,
                length: f[3].parse().map_err(|_| err(format!("bad length {:?}", f[3])))?,
            });
        }
        entries.sort_by(|a, b| a.id.cmp(&b.id));
        Ok(Self { seed: 0, entries })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dataset {
    /// Generation order: class by class, record index ascending.
    pub records: Vec<SequenceRecord>,
    pub manifest: DatasetManifest,
}

impl Dataset {
    pub fn records_in(&self, split: Split) -> Vec<&SequenceRecord> {
        self.records.iter().filter(|r| self.manifest.split_of(&r.id) == Some(split)).collect()
    }
}

pub fn record_id(class: &ClassSpec, record_index: usize) -> String {
    format!("{}_{record_index:06}", class.name())
}

/// One record, drawn from its own substream.
pub fn gen_record(seed: u64, class_index: usize, class: &ClassSpec, record_index: usize) -> SequenceRecord {
    let mut rng = CounterRng::substream(seed, class_index as u64, record_index as u64);
    SequenceRecord::new(record_id(class, record_index), class.name(), gen_sequence(class, &mut rng))
}

/// Stratified split for one class: a seeded Fisher-Yates shuffle of the
/// record indices, then train / validation / test in that order.
pub fn assign_splits(seed: u64, class_index: usize, n: usize, ratios: SplitRatios) -> Vec<Split> {
    let mut order: Vec<usize> = (0..n).collect();
    let mut rng = CounterRng::substream(seed, class_index as u64, SPLIT_STREAM);
    for i in (1..n).rev() {
        let j = rng.below(i as u64 + 1) as usize;
        order.swap(i, j);
    }
    let (train, validation, _) = ratios.counts(n);
    let mut splits = vec![Split::Test; n];
    for (rank, &idx) in order.iter().enumerate() {
        splits[idx] = if rank < train {
            Split::Train
        } else if rank < train + validation {
            Split::Validation
        } else {
            Split::Test
        };
    }
    splits
}

/// Builds the manifest for already generated records of `classes`.
pub fn build_manifest(
    seed: u64,
    classes: &[ClassSpec],
    per_class: usize,
    ratios: SplitRatios,
    records: &[SequenceRecord],
) -> DatasetManifest {
    let mut entries = Vec::with_capacity(records.len());
    for ci in 0..classes.len() {
        let splits = assign_splits(seed, ci, per_class, ratios);
        let block = &records[ci * per_class..(ci + 1) * per_class];
        for (rec, split) in block.iter().zip(splits) {
            entries.push(ManifestEntry {
                id: rec.id.clone(),
                class_label: rec.class_label.clone(),
                split,
                length: rec.sequence.len(),
            });
        }
    }
    entries.sort_by(|a, b| a.id.cmp(&b.id));
    DatasetManifest { seed, entries }
}

/// Generates `per_class` records for each of `classes`.
pub fn gen_dataset_from(seed: u64, classes: &[ClassSpec], per_class: usize, ratios: SplitRatios) -> Result<Dataset> {
    if per_class == 0 {
        return Err(Error::InvalidArgument("per_class must be at least 1".into()));
    }
    let records: Vec<SequenceRecord> = classes
        .iter()
        .enumerate()
        .flat_map(|(ci, class)| (0..per_class).map(move |ri| gen_record(seed, ci, class, ri)))
        .collect();
    let manifest = build_manifest(seed, classes, per_class, ratios, &records);
    Ok(Dataset { records, manifest })
}

/// The seven builtin classes with the default 70/10/20 split.
pub fn gen_dataset(seed: u64, per_class: usize) -> Result<Dataset> {
    gen_dataset_from(seed, &builtin_class_specs(), per_class, SplitRatios::default())
}
