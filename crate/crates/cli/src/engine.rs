//! Parallel classification driver.
//!
//! Same walk as the in-crate reference classifier — strictly descending
//! volume buckets of canonical keys — but each bucket is expanded by a
//! worker pool, and pending buckets can spill to disk so memory stays
//! bounded by the largest single bucket. Output is byte-identical for any
//! worker count: bucket contents are sets, processed in sorted order, and
//! every per-class value depends only on the class.

use std::collections::HashSet;
use std::fs::{self, File, OpenOptions};
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use rayon::prelude::*;
use toricode_core::classify::{class_entry, shave_classes, ClassEntry, Classification};
use toricode_core::normal_form::NormalForm;
use toricode_core::polygon::{box_polygon, format_polygon, parse_vertex_list};
use toricode_core::{normal_form, Polygon};

#[derive(Clone, Debug)]
pub struct EngineConfig {
    pub m: u32,
    /// 0 = rayon's default.
    pub workers: usize,
    /// Directory for pending-bucket spill files and checkpoints.
    pub spill: Option<PathBuf>,
    /// Cap on keys held in memory when not spilling.
    pub max_in_memory: usize,
    /// Continue a spilled run from its checkpoint.
    pub resume: bool,
    /// Progress lines on stderr.
    pub progress: bool,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            m: 1,
            workers: 0,
            spill: None,
            max_in_memory: 8_000_000,
            resume: false,
            progress: false,
        }
    }
}

enum Buckets {
    Memory(Vec<HashSet<NormalForm>>),
    Disk { dir: PathBuf, open: Vec<Option<BufWriter<File>>> },
}

impl Buckets {
    fn push(&mut self, volume: usize, key: NormalForm) -> Result<bool> {
        match self {
            Buckets::Memory(v) => Ok(v[volume].insert(key)),
            Buckets::Disk { dir, open } => {
                let w = match &mut open[volume] {
                    Some(w) => w,
                    None => {
                        let f = OpenOptions::new()
                            .create(true)
                            .append(true)
                            .open(bucket_path(dir, volume))?;
                        open[volume] = Some(BufWriter::new(f));
                        open[volume].as_mut().expect("just set")
                    }
                };
                let raw = key.as_slice();
                w.write_all(&(raw.len() as u32).to_le_bytes())?;
                for &x in raw {
                    w.write_all(&x.to_le_bytes())?;
                }
                Ok(true)
            }
        }
    }

    /// Remove and return the bucket at `volume`, sorted and deduplicated.
    fn take(&mut self, volume: usize) -> Result<Vec<NormalForm>> {
        let mut keys = match self {
            Buckets::Memory(v) => std::mem::take(&mut v[volume]).into_iter().collect::<Vec<_>>(),
            Buckets::Disk { dir, open } => {
                if let Some(w) = open[volume].take() {
                    w.into_inner().context("flush bucket")?.sync_all().ok();
                }
                let path = bucket_path(dir, volume);
                if !path.exists() {
                    return Ok(Vec::new());
                }
                let mut bytes = Vec::new();
                File::open(&path)?.read_to_end(&mut bytes)?;
                fs::remove_file(&path).ok();
                decode_keys(&bytes)?
            }
        };
        keys.sort_unstable();
        keys.dedup();
        Ok(keys)
    }

    fn pending(&self) -> usize {
        match self {
            Buckets::Memory(v) => v.iter().map(|s| s.len()).sum(),
            Buckets::Disk { .. } => 0,
        }
    }
}

fn bucket_path(dir: &Path, volume: usize) -> PathBuf {
    dir.join(format!("bucket_{volume:03}.bin"))
}

fn decode_keys(bytes: &[u8]) -> Result<Vec<NormalForm>> {
    let mut keys = Vec::new();
    let mut at = 0usize;
    while at < bytes.len() {
        if at + 4 > bytes.len() {
            bail!("truncated bucket file");
        }
        let len = u32::from_le_bytes(bytes[at..at + 4].try_into().unwrap()) as usize;
        at += 4;
        if at + 4 * len > bytes.len() {
            bail!("truncated bucket file");
        }
        let mut raw = Vec::with_capacity(len);
        for i in 0..len {
            raw.push(i32::from_le_bytes(bytes[at + 4 * i..at + 4 * i + 4].try_into().unwrap()));
        }
        at += 4 * len;
        keys.push(NormalForm::from_raw(raw));
    }
    Ok(keys)
}

fn entry_line(e: &ClassEntry) -> String {
    let raw: Vec<String> = e.key.as_slice().iter().map(|x| x.to_string()).collect();
    format!("{}|{}|{}", raw.join(" "), e.min_box, format_polygon(&e.representative))
}

fn parse_entry_line(line: &str) -> Result<ClassEntry> {
    let mut parts = line.splitn(3, '|');
    let (raw, min_box, rep) = (
        parts.next().context("missing key")?,
        parts.next().context("missing min_box")?,
        parts.next().context("missing representative")?,
    );
    let raw: Vec<i32> = raw
        .split_whitespace()
        .map(|t| t.parse().context("bad key integer"))
        .collect::<Result<_>>()?;
    let key = NormalForm::from_raw(raw);
    let representative = Polygon::hull(&parse_vertex_list(rep)?)?;
    Ok(ClassEntry {
        volume: representative.normalized_volume(),
        vertices: representative.vertex_count() as u32,
        lattice_points: representative.lattice_point_count() as u32,
        min_box: min_box.parse()?,
        representative,
        key,
    })
}

/// Classify everything in `[0,m]²`, in parallel.
pub fn classify(cfg: &EngineConfig) -> Result<Classification> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .context("build worker pool")?;
    pool.install(|| classify_inner(cfg))
}

fn classify_inner(cfg: &EngineConfig) -> Result<Classification> {
    assert!(cfg.m >= 1);
    let top = box_polygon(cfg.m);
    let top_volume = top.normalized_volume() as usize;

    let mut entries: Vec<ClassEntry> = Vec::new();
    let mut start_volume = top_volume;
    let mut buckets = match &cfg.spill {
        None => {
            let mut b = vec![HashSet::new(); top_volume + 1];
            b[top_volume].insert(normal_form(&top));
            Buckets::Memory(b)
        }
        Some(dir) => {
            fs::create_dir_all(dir)?;
            let manifest = dir.join("manifest.txt");
            let classes = dir.join("classes.txt");
            if cfg.resume && manifest.exists() {
                let text = fs::read_to_string(&manifest)?;
                let mut box_size = None;
                let mut next = None;
                for line in text.lines() {
                    if let Some(v) = line.strip_prefix("box=") {
                        box_size = Some(v.parse::<u32>()?);
                    }
                    if let Some(v) = line.strip_prefix("next=") {
                        next = Some(v.parse::<usize>()?);
                    }
                }
                if box_size != Some(cfg.m) {
                    bail!("checkpoint in {} is for a different box", dir.display());
                }
                start_volume = next.context("checkpoint missing next volume")?;
                if classes.exists() {
                    for line in BufReader::new(File::open(&classes)?).lines() {
                        entries.push(parse_entry_line(&line?)?);
                    }
                }
                if cfg.progress {
                    eprintln!(
                        "resuming box {} at volume {start_volume} with {} classes done",
                        cfg.m,
                        entries.len()
                    );
                }
            } else {
                // Fresh run: clear stale state and seed the top bucket.
                for v in 0..=top_volume {
                    fs::remove_file(bucket_path(dir, v)).ok();
                }
                fs::remove_file(&classes).ok();
                fs::write(&manifest, format!("box={}\nnext={top_volume}\n", cfg.m))?;
            }
            let mut b = Buckets::Disk { dir: dir.clone(), open: (0..=top_volume).map(|_| None).collect() };
            if start_volume == top_volume {
                b.push(top_volume, normal_form(&top))?;
            }
            b
        }
    };

    for volume in (1..=start_volume).rev() {
        let keys = buckets.take(volume)?;
        if keys.is_empty() {
            if let Some(dir) = &cfg.spill {
                fs::write(dir.join("manifest.txt"), format!("box={}\nnext={}\n", cfg.m, volume - 1))?;
            }
            continue;
        }
        if cfg.progress {
            eprintln!("volume {volume}: {} classes ({} total)", keys.len(), entries.len());
        }
        let produced: Vec<(ClassEntry, Vec<(NormalForm, u64)>)> = keys
            .into_par_iter()
            .with_min_len(16)
            .map(|key| {
                let polygon = key.canonical_polygon();
                let children = shave_classes(&polygon);
                (class_entry(key), children)
            })
            .collect();
        let mut new_entries = Vec::with_capacity(produced.len());
        for (entry, children) in produced {
            for (child, child_volume) in children {
                debug_assert!((child_volume as usize) < volume);
                buckets.push(child_volume as usize, child)?;
            }
            new_entries.push(entry);
        }
        if cfg.spill.is_none() {
            let held = entries.len() + new_entries.len() + buckets.pending();
            if held > cfg.max_in_memory {
                bail!(toricode_core::Error::Resource { classes: held, budget: cfg.max_in_memory });
            }
        }
        if let Some(dir) = &cfg.spill {
            let mut w = BufWriter::new(
                OpenOptions::new().create(true).append(true).open(dir.join("classes.txt"))?,
            );
            for e in &new_entries {
                writeln!(w, "{}", entry_line(e))?;
            }
            w.into_inner().context("flush classes")?.sync_all().ok();
            fs::write(dir.join("manifest.txt"), format!("box={}\nnext={}\n", cfg.m, volume - 1))?;
        }
        entries.extend(new_entries);
    }

    entries.sort_by(|a, b| a.key.cmp(&b.key));
    Ok(Classification { box_size: cfg.m, classes: entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use toricode_core::classify::{box_stats, classify_box, ClassifyLimits};

    #[test]
    fn engine_matches_reference() {
        for m in 1..=3 {
            let reference = classify_box(m, &ClassifyLimits::default()).unwrap();
            let cfg = EngineConfig { m, workers: 2, ..EngineConfig::default() };
            let run = classify(&cfg).unwrap();
            assert_eq!(run.classes.len(), reference.classes.len());
            for (a, b) in run.classes.iter().zip(&reference.classes) {
                assert_eq!(a.key, b.key);
                assert_eq!(a.representative, b.representative);
                assert_eq!(a.min_box, b.min_box);
            }
        }
    }

    #[test]
    fn worker_counts_agree() {
        let one = classify(&EngineConfig { m: 3, workers: 1, ..EngineConfig::default() }).unwrap();
        let four = classify(&EngineConfig { m: 3, workers: 4, ..EngineConfig::default() }).unwrap();
        assert_eq!(one.classes.len(), four.classes.len());
        for (a, b) in one.classes.iter().zip(&four.classes) {
            assert_eq!(a.key, b.key);
            assert_eq!(a.representative, b.representative);
        }
    }

    #[test]
    fn spill_mode_agrees() {
        let dir = std::env::temp_dir().join(format!("toricode-spill-test-{}", std::process::id()));
        let cfg = EngineConfig {
            m: 3,
            workers: 2,
            spill: Some(dir.clone()),
            ..EngineConfig::default()
        };
        let spilled = classify(&cfg).unwrap();
        let memory = classify(&EngineConfig { m: 3, workers: 2, ..EngineConfig::default() }).unwrap();
        assert_eq!(spilled.classes.len(), memory.classes.len());
        for (a, b) in spilled.classes.iter().zip(&memory.classes) {
            assert_eq!(a.key, b.key);
        }
        let stats = box_stats(&spilled, 3);
        assert_eq!(stats.count_exact, 131);
        fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn memory_budget_enforced() {
        let cfg = EngineConfig { m: 3, max_in_memory: 20, ..EngineConfig::default() };
        assert!(classify(&cfg).is_err());
    }
}
