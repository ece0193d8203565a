//! Results cache. Entries are keyed by the request and the crate version;
//! anything unreadable is recomputed and overwritten.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Serialize, Deserialize)]
struct Entry {
    version: String,
    request: String,
    exit: i32,
    output: String,
    digest: String,
}

fn sha256(s: &str) -> String {
    format!("{:x}", Sha256::digest(s.as_bytes()))
}

pub struct Cache {
    dir: PathBuf,
    version: String,
}

impl Cache {
    pub fn new(dir: &Path) -> Self {
        Cache { dir: dir.to_path_buf(), version: VERSION.to_string() }
    }

    #[cfg(test)]
    pub fn with_version(dir: &Path, version: &str) -> Self {
        Cache { dir: dir.to_path_buf(), version: version.to_string() }
    }

    fn path(&self, request: &str) -> PathBuf {
        self.dir.join(format!("{}.json", sha256(&format!("{}\n{request}", self.version))))
    }

    pub fn get(&self, request: &str) -> Option<(String, i32)> {
        let path = self.path(request);
        let bytes = fs::read(&path).ok()?;
        let entry: Option<Entry> = serde_json::from_slice(&bytes).ok();
        match entry {
            Some(e) if e.version == self.version && e.request == request && e.digest == sha256(&e.output) => {
                Some((e.output, e.exit))
            }
            Some(e) if e.version != self.version => None,
            _ => {
                eprintln!("warning: cache entry {} is corrupt, recomputing", path.display());
                None
            }
        }
    }

    /// Best effort: a cache that cannot be written is only reported.
    pub fn put(&self, request: &str, output: &str, exit: i32) {
        let entry = Entry {
            version: self.version.clone(),
            request: request.to_string(),
            exit,
            output: output.to_string(),
            digest: sha256(output),
        };
        let path = self.path(request);
        let tmp = path.with_extension("tmp");
        let res = fs::create_dir_all(&self.dir)
            .and_then(|_| fs::write(&tmp, serde_json::to_vec(&entry).expect("entries serialize")))
            .and_then(|_| fs::rename(&tmp, &path));
        if let Err(e) = res {
            eprintln!("warning: cannot write cache entry {}: {e}", path.display());
        }
    }
}
