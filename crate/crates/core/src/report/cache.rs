//! On-disk cache of orbit representatives, one JSON file per additive
//! group.
//!
//! A file is named after `p`, `q`, the group token, and a hash of the
//! family parameters together with the crate and cache versions, so a
//! change to any of them misses instead of reading stale data. Nothing read
//! back is trusted: every representative is checked for regularity and
//! canonicity before use, and its invariants are recomputed.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use super::ClassRecord;
use crate::braces::brace_from_regular;
use crate::enumerate::{orbit_of, OrbitClass};
use crate::families::{FamilyGroup, FamilyParams};
use crate::groups::identify_p2q;
use crate::holomorph::{Holomorph, RegularSubgroup};

pub const CACHE_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum CacheError {
    #[error("cache {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("cache {path}: {source}")]
    Json { path: PathBuf, source: serde_json::Error },
    #[error("cache {path}: version {found}, expected {CACHE_VERSION}")]
    Version { path: PathBuf, found: u32 },
    #[error("cache {path} is for {found}, not {expected}")]
    Mismatch { path: PathBuf, found: String, expected: String },
    #[error("cache {path}, orbit {index}: {reason}")]
    Invalid { path: PathBuf, index: usize, reason: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CachedOrbit {
    /// `(a, f_a)` for every `a`, `f_a` an index into the automorphism list.
    pub rep: Vec<(u32, u32)>,
    pub pi2_size: usize,
    pub mul_label: String,
    pub biskew: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheFile {
    pub version: u32,
    pub p: u64,
    pub q: u64,
    pub additive: String,
    pub params: FamilyParams,
    pub orbits: Vec<CachedOrbit>,
}

/// A validated cache entry.
#[derive(Clone, Debug)]
pub struct Entry {
    pub path: PathBuf,
    pub orbits: Vec<OrbitClass>,
}

fn params_hash(params: &FamilyParams) -> String {
    let mut h = Sha256::new();
    h.update(params.fingerprint());
    h.update(env!("CARGO_PKG_VERSION"));
    h.update(CACHE_VERSION.to_le_bytes());
    h.finalize().iter().take(8).map(|b| format!("{b:02x}")).collect()
}

/// Path of the cache file for `fam` under `dir`.
pub fn cache_path(dir: &Path, fam: &FamilyGroup) -> PathBuf {
    let q = fam.params.q;
    let token: String = fam
        .label
        .token(q)
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' { c } else { '_' })
        .collect();
    dir.join(format!("{}-{}-{}-{}.v{}.json", fam.params.p, q, token, params_hash(&fam.params), CACHE_VERSION))
}

impl CacheFile {
    pub fn new(fam: &FamilyGroup, orbits: &[OrbitClass], classes: &[ClassRecord]) -> Self {
        CacheFile {
            version: CACHE_VERSION,
            p: fam.params.p,
            q: fam.params.q,
            additive: fam.label.token(fam.params.q),
            params: fam.params,
            orbits: orbits
                .iter()
                .zip(classes)
                .map(|(o, c)| CachedOrbit {
                    rep: o.representative.lambda.iter().enumerate().map(|(a, &f)| (a as u32, f)).collect(),
                    pi2_size: o.pi2_size,
                    mul_label: c.mul.clone(),
                    biskew: c.biskew,
                })
                .collect(),
        }
    }

    /// Checks the file against `fam` and `hol` and rebuilds the orbit
    /// classes. Each representative must be a regular subgroup, the least
    /// member of its class, with the recorded `π_2` size, multiplicative
    /// group and bi-skew flag.
    pub fn validate(&self, path: &Path, fam: &FamilyGroup, hol: &Holomorph) -> Result<Vec<OrbitClass>, CacheError> {
        if self.version != CACHE_VERSION {
            return Err(CacheError::Version { path: path.into(), found: self.version });
        }
        let expected = format!("{} / {}", fam.label.token(fam.params.q), fam.params.fingerprint());
        let found = format!("{} / {}", self.additive, self.params.fingerprint());
        if (self.p, self.q) != (fam.params.p, fam.params.q) || found != expected {
            return Err(CacheError::Mismatch { path: path.into(), found, expected });
        }
        let (p, q) = (self.p, self.q);
        let n = hol.n();
        let mut out = Vec::with_capacity(self.orbits.len());
        for (index, o) in self.orbits.iter().enumerate() {
            let bad = |reason: String| CacheError::Invalid { path: path.into(), index, reason };
            let mut lambda = vec![u32::MAX; n];
            for &(a, f) in &o.rep {
                let slot = lambda.get_mut(a as usize).ok_or_else(|| bad(format!("element {a} out of range")))?;
                if *slot != u32::MAX {
                    return Err(bad(format!("element {a} listed twice")));
                }
                *slot = f;
            }
            if lambda.contains(&u32::MAX) {
                return Err(bad("not every element is listed".into()));
            }
            let rep = RegularSubgroup { lambda };
            if !hol.verify_regular(&rep) {
                return Err(bad("not a regular subgroup".into()));
            }
            if rep.pi2().len() != o.pi2_size {
                return Err(bad(format!("pi2 has size {}, recorded {}", rep.pi2().len(), o.pi2_size)));
            }
            let orbit = orbit_of(hol, &rep);
            if orbit[0] != rep {
                return Err(bad("not the canonical representative of its class".into()));
            }
            let b = brace_from_regular(hol, &rep).map_err(|e| bad(e.to_string()))?;
            let mul = identify_p2q(&b.multiplicative_group(), p, q).map_err(|e| bad(e.to_string()))?.token(q);
            if mul != o.mul_label {
                return Err(bad(format!("multiplicative group is {mul}, recorded {}", o.mul_label)));
            }
            if b.is_bi_skew() != o.biskew {
                return Err(bad("bi-skew flag differs".into()));
            }
            out.push(OrbitClass { representative: rep, size: orbit.len(), pi2_size: o.pi2_size });
        }
        out.sort_by(|x, y| x.representative.cmp(&y.representative));
        if out.windows(2).any(|w| w[0].representative == w[1].representative) {
            return Err(CacheError::Invalid { path: path.into(), index: 0, reason: "duplicate class".into() });
        }
        Ok(out)
    }
}

pub fn read_file(path: &Path) -> Result<CacheFile, CacheError> {
    let text = fs::read_to_string(path).map_err(|source| CacheError::Io { path: path.into(), source })?;
    serde_json::from_str(&text).map_err(|source| CacheError::Json { path: path.into(), source })
}

/// Writes `file` to `path` through a temporary file in the same directory,
/// so readers never see a partial file.
pub fn write_file(path: &Path, file: &CacheFile) -> Result<(), CacheError> {
    let io = |source| CacheError::Io { path: path.into(), source };
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    fs::create_dir_all(dir).map_err(io)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    let json = serde_json::to_vec_pretty(file).map_err(|source| CacheError::Json { path: path.into(), source })?;
    tmp.write_all(&json).map_err(io)?;
    tmp.as_file().sync_all().map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

/// Reads and validates the entry for `fam`, if there is one. A file that
/// exists but fails validation is an error, not a miss.
pub fn lookup(dir: &Path, fam: &FamilyGroup, hol: &Holomorph) -> Result<Option<Entry>, CacheError> {
    let path = cache_path(dir, fam);
    if !path.exists() {
        return Ok(None);
    }
    import(&path, fam, hol).map(Some)
}

/// Reads and validates a cache file at an explicit path.
pub fn import(path: &Path, fam: &FamilyGroup, hol: &Holomorph) -> Result<Entry, CacheError> {
    let file = read_file(path)?;
    let orbits = file.validate(path, fam, hol)?;
    Ok(Entry { path: path.into(), orbits })
}

pub fn store(
    dir: &Path,
    fam: &FamilyGroup,
    _hol: &Holomorph,
    orbits: &[OrbitClass],
    classes: &[ClassRecord],
) -> Result<PathBuf, CacheError> {
    let path = cache_path(dir, fam);
    write_file(&path, &CacheFile::new(fam, orbits, classes))?;
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::FamilyParams;
    use crate::groups::GroupLabel;
    use crate::report::{classify, prepare, Budget, ClassifyOptions};

    fn zq_zp2() -> super::super::Prepared {
        let params = FamilyParams::derive(2, 5).unwrap();
        prepare(GroupLabel::parse("Zq:Zp2", 5).unwrap(), &params, Budget::default()).unwrap()
    }

    #[test]
    fn second_run_reads_the_cache_and_agrees() {
        let dir = tempfile::tempdir().unwrap();
        let opts = ClassifyOptions { cache_dir: Some(dir.path().into()), ..Default::default() };
        let first = classify(2, 5, &opts).unwrap();
        assert!(first.additive.iter().all(|a| !a.from_cache));
        assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 5);
        let second = classify(2, 5, &opts).unwrap();
        assert!(second.additive.iter().all(|a| a.from_cache));
        for (a, b) in first.additive.iter().zip(&second.additive) {
            assert_eq!(a.classes, b.classes);
            assert_eq!(a.regular_subgroups, b.regular_subgroups);
        }
    }

    #[test]
    fn poisoned_entries_are_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let opts = ClassifyOptions {
            cache_dir: Some(dir.path().into()),
            additive: GroupLabel::parse("Zq:Zp2", 5).ok(),
            ..Default::default()
        };
        classify(2, 5, &opts).unwrap();
        let prep = zq_zp2();
        let path = cache_path(dir.path(), &prep.fam);
        let good = read_file(&path).unwrap();
        assert!(good.validate(&path, &prep.fam, &prep.hol).is_ok());

        // a non-trivial automorphism moved to another element breaks closure
        let mut bad = good.clone();
        let o = bad.orbits.iter_mut().find(|o| o.rep.iter().any(|&(_, f)| f != 0)).unwrap();
        let i = o.rep.iter().position(|&(_, f)| f != 0).unwrap();
        o.rep[i].1 = (o.rep[i].1 + 1) % prep.hol.aut.len() as u32;
        write_file(&path, &bad).unwrap();
        assert!(matches!(classify(2, 5, &opts), Err(crate::report::ReportError::Cache(CacheError::Invalid { .. }))));

        let mut bad = good.clone();
        bad.orbits[0].mul_label = "G-1".into();
        assert!(matches!(bad.validate(&path, &prep.fam, &prep.hol), Err(CacheError::Invalid { .. })));

        let mut bad = good.clone();
        bad.orbits[0].rep.pop();
        assert!(bad.validate(&path, &prep.fam, &prep.hol).is_err());

        let mut bad = good.clone();
        bad.version = 99;
        assert!(matches!(bad.validate(&path, &prep.fam, &prep.hol), Err(CacheError::Version { .. })));

        let mut bad = good;
        bad.params.r = bad.params.r.map(|r| r + 1);
        assert!(matches!(bad.validate(&path, &prep.fam, &prep.hol), Err(CacheError::Mismatch { .. })));
    }

    #[test]
    fn non_canonical_representative_is_rejected() {
        let prep = zq_zp2();
        let subs = crate::enumerate::enumerate_dfs(&prep.hol);
        let orbits = crate::enumerate::orbit_partition(&prep.hol, &subs).unwrap();
        let o = orbits.iter().find(|o| o.size > 1).unwrap();
        let other = orbit_of(&prep.hol, &o.representative)[1].clone();
        let swapped = OrbitClass { representative: other, ..o.clone() };
        let b = brace_from_regular(&prep.hol, &o.representative).unwrap();
        let rec = ClassRecord {
            pi2_size: o.pi2_size,
            kernel_size: 0,
            orbit_size: o.size,
            mul: identify_p2q(&b.multiplicative_group(), 2, 5).unwrap().token(5),
            biskew: b.is_bi_skew(),
        };
        let file = CacheFile::new(&prep.fam, &[swapped], &[rec]);
        let err = file.validate(Path::new("x"), &prep.fam, &prep.hol).unwrap_err();
        assert!(err.to_string().contains("canonical"), "{err}");
    }

    #[test]
    fn file_name_depends_on_params() {
        let dir = Path::new("/c");
        let a = zq_zp2();
        let mut fam = a.fam.clone();
        assert_eq!(cache_path(dir, &fam), cache_path(dir, &a.fam));
        fam.params.r = Some(3);
        assert_ne!(cache_path(dir, &fam), cache_path(dir, &a.fam));
        assert!(cache_path(dir, &a.fam).to_str().unwrap().starts_with("/c/2-5-Zq_Zp2-"));
    }
}
