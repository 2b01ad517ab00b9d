//! Append-only line-record persistence for translation runs; the unit of
//! resume.

use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use super::{MtError, TranslationRecord};

/// An append-only JSON-lines file of [`TranslationRecord`]s for one
/// (book, mode) run. Opening reads any existing records; appending
/// flushes immediately so a crash never loses acknowledged work.
#[derive(Debug)]
pub struct RecordStore {
    path: PathBuf,
    file: File,
    records: Vec<TranslationRecord>,
}

impl RecordStore {
    pub fn open(path: impl AsRef<Path>) -> Result<RecordStore, MtError> {
        let path = path.as_ref().to_path_buf();
        let io_err = |source| MtError::StoreIo { path: path.display().to_string(), source };
        let mut records = Vec::new();
        if path.exists() {
            let reader = BufReader::new(File::open(&path).map_err(io_err)?);
            for (idx, line) in reader.lines().enumerate() {
                let line = line.map_err(io_err)?;
                if line.trim().is_empty() {
                    continue;
                }
                let record: TranslationRecord =
                    serde_json::from_str(&line).map_err(|e| MtError::StoreParse {
                        path: path.display().to_string(),
                        line: idx + 1,
                        message: e.to_string(),
                    })?;
                records.push(record);
            }
        }
        let file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(&path)
            .map_err(io_err)?;
        Ok(RecordStore { path, file, records })
    }

    /// Records read at open time plus those appended since, in order.
    pub fn records(&self) -> &[TranslationRecord] {
        &self.records
    }

    pub fn path_display(&self) -> String {
        self.path.display().to_string()
    }

    /// Appends one record and flushes it to disk.
    pub fn append(&mut self, record: &TranslationRecord) -> Result<(), MtError> {
        let io_err = |source| MtError::StoreIo { path: self.path.display().to_string(), source };
        let line = serde_json::to_string(record).map_err(|e| MtError::StoreParse {
            path: self.path.display().to_string(),
            line: self.records.len() + 1,
            message: e.to_string(),
        })?;
        self.file.write_all(line.as_bytes()).map_err(io_err)?;
        self.file.write_all(b"\n").map_err(io_err)?;
        self.file.flush().map_err(io_err)?;
        self.records.push(record.clone());
        Ok(())
    }
}
