//! Seeded synthetic sequence classes, dataset splits, and FASTA/manifest I/O.

mod classes;
mod dataset;
mod fasta;
pub mod rng;

pub use classes::{
    builtin_class_specs, gen_sequence, ClassSpec, SymbolModel, DNA_LENGTHS, HYDROPHILIC, HYDROPHOBIC, PROTEIN_LENGTHS,
    REPEAT_MOTIFS,
};
pub use dataset::{
    assign_splits, build_manifest, gen_dataset, gen_dataset_from, gen_record, record_id, Dataset, DatasetManifest,
    ManifestEntry, Split, SplitRatios,
};
pub use fasta::{read_fasta, write_fasta, SequenceRecord, LINE_WIDTH};
pub use rng::CounterRng;
