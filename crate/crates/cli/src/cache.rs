//! Content-addressed on-disk store for `(x* x)^m`.
//!
//! Each entry carries its key, the group, `m` and a SHA-256 of the payload.
//! Entries that fail any check are counted as corrupt and recomputed.

use std::collections::HashSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use selfless_core::algebra::AlgebraElement;
use selfless_core::norms::PowerCache;
use sha2::{Digest, Sha256};

use crate::error::{CliError, CliResult};

const MAGIC: &str = "selfless-power v1";

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CacheStats {
    pub hits: u64,
    pub misses: u64,
    pub corrupt: u64,
    pub stores: u64,
    pub store_failures: u64,
}

pub struct DiskCache {
    dir: PathBuf,
    verified: HashSet<String>,
    pub stats: CacheStats,
}

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

impl DiskCache {
    pub fn open(dir: &Path) -> CliResult<Self> {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir.display().to_string(), e))?;
        Ok(DiskCache {
            dir: dir.to_path_buf(),
            verified: HashSet::new(),
            stats: CacheStats::default(),
        })
    }

    pub fn key(base: &AlgebraElement, m: u64) -> String {
        sha256_hex(format!("{}\n{}", base.content_hash(), m).as_bytes())
    }

    pub fn entry_path(&self, base: &AlgebraElement, m: u64) -> PathBuf {
        self.dir.join(format!("{}.power", Self::key(base, m)))
    }

    /// `Ok(None)` when absent, `Err(reason)` when present but unusable.
    fn read(&self, base: &AlgebraElement, m: u64) -> Result<Option<AlgebraElement>, String> {
        let path = self.entry_path(base, m);
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(e.to_string()),
        };
        let (header, payload) = text.split_once("\n\n").ok_or("missing header")?;
        let mut lines = header.lines();
        if lines.next() != Some(MAGIC) {
            return Err("bad magic".into());
        }
        let mut field = |name: &str| {
            lines
                .next()
                .and_then(|l| l.strip_prefix(name))
                .and_then(|l| l.strip_prefix(' '))
                .map(str::to_owned)
                .ok_or_else(|| format!("missing {name}"))
        };
        let key = field("key")?;
        let group = field("group")?;
        let em = field("m")?;
        let digest = field("sha256")?;
        if key != Self::key(base, m) || em != m.to_string() {
            return Err("key mismatch".into());
        }
        if group != base.context().spec() {
            return Err("group mismatch".into());
        }
        if digest != sha256_hex(payload.as_bytes()) {
            return Err("checksum mismatch".into());
        }
        let ctx: Arc<_> = base.context().clone();
        AlgebraElement::parse(ctx, payload)
            .map(Some)
            .map_err(|e| e.to_string())
    }

    fn write(&self, base: &AlgebraElement, m: u64, power: &AlgebraElement) -> std::io::Result<()> {
        let payload = power.canonical();
        let text = format!(
            "{MAGIC}\nkey {}\ngroup {}\nm {}\nsha256 {}\n\n{}",
            Self::key(base, m),
            base.context().spec(),
            m,
            sha256_hex(payload.as_bytes()),
            payload
        );
        let path = self.entry_path(base, m);
        let tmp = path.with_extension(format!("tmp{}", std::process::id()));
        fs::write(&tmp, text)?;
        fs::rename(&tmp, &path)
    }
}

impl PowerCache for DiskCache {
    fn load(&mut self, base: &AlgebraElement, m: u64) -> Option<AlgebraElement> {
        match self.read(base, m) {
            Ok(Some(y)) => {
                self.stats.hits += 1;
                self.verified.insert(Self::key(base, m));
                Some(y)
            }
            Ok(None) => {
                self.stats.misses += 1;
                None
            }
            Err(_) => {
                self.stats.corrupt += 1;
                None
            }
        }
    }

    fn store(&mut self, base: &AlgebraElement, m: u64, power: &AlgebraElement) {
        if self.verified.contains(&Self::key(base, m)) {
            return;
        }
        match self.write(base, m, power) {
            Ok(()) => self.stats.stores += 1,
            Err(_) => self.stats.store_failures += 1,
        }
    }
}
