//! On-disk cache for searched designs.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use crate::error::Result;

/// Environment variable overriding the cache directory.
pub const CACHE_ENV: &str = "SBC_CACHE_DIR";

/// `$SBC_CACHE_DIR`, or `sbcube` under the platform cache directory, or
/// under the system temporary directory when there is none.
pub fn cache_dir() -> PathBuf {
    match std::env::var_os(CACHE_ENV) {
        Some(dir) if !dir.is_empty() => PathBuf::from(dir),
        _ => dirs::cache_dir().unwrap_or_else(std::env::temp_dir).join("sbcube"),
    }
}

pub(crate) fn load(key: &str) -> Option<String> {
    fs::read_to_string(cache_dir().join(key)).ok()
}

/// Writes to a temporary file in the cache directory and renames it into
/// place, so readers see either nothing or the whole entry.
pub(crate) fn store(key: &str, contents: &str) -> Result<()> {
    let dir = cache_dir();
    fs::create_dir_all(&dir)?;
    let mut file = tempfile::NamedTempFile::new_in(&dir)?;
    file.write_all(contents.as_bytes())?;
    file.persist(dir.join(key)).map_err(|e| e.error)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn store_then_load() {
        let dir = tempfile::tempdir().unwrap();
        std::env::set_var(CACHE_ENV, dir.path());
        store("probe.txt", "AG7 1 2").unwrap();
        assert_eq!(load("probe.txt").as_deref(), Some("AG7 1 2"));
        assert_eq!(load("absent.txt"), None);
        assert_eq!(cache_dir(), dir.path());
        std::env::remove_var(CACHE_ENV);
    }
}
