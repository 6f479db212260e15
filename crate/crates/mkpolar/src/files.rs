//! On-disk formats: JSON code specifications and frozen-set text files.
//!
//! A code-spec file is a JSON document with three fields:
//!
//! ```json
//! { "kernels": [3, 2, 2, 2, 2], "k": 24, "frozen": [0, 1, 2, ...] }
//! ```
//!
//! `kernels` holds the kernel dimensions (2 or 3) with the leftmost
//! Kronecker factor first, and `frozen` the sorted frozen indices.
//!
//! A frozen-set file is plain text: a `# N=<n> K=<k> kernels=<d1,d2,...>`
//! header followed by one sorted decimal index per line.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use mkpolar_core::code::{KernelKind, PolarCodeSpec};

use crate::{Error, Result};

#[derive(Debug, Serialize, Deserialize)]
struct SpecFile {
    kernels: Vec<usize>,
    k: usize,
    frozen: Vec<usize>,
}

/// Parses a kernel-dimension list (entries 2 or 3) into kernel kinds.
pub fn kernels_from_dims(dims: &[usize]) -> Result<Vec<KernelKind>> {
    dims.iter()
        .map(|&d| KernelKind::from_dimension(d).map_err(Error::from))
        .collect()
}

/// Serializes a spec to its JSON file form.
pub fn spec_to_json(spec: &PolarCodeSpec) -> Result<String> {
    let file = SpecFile {
        kernels: spec.kernels().iter().map(|k| k.dimension()).collect(),
        k: spec.k(),
        frozen: spec.frozen().to_vec(),
    };
    let mut json = serde_json::to_string_pretty(&file)?;
    json.push('\n');
    Ok(json)
}

/// Parses and validates a spec from its JSON file form.
pub fn spec_from_json(json: &str) -> Result<PolarCodeSpec> {
    let file: SpecFile = serde_json::from_str(json)?;
    let kernels = kernels_from_dims(&file.kernels)?;
    Ok(PolarCodeSpec::new(kernels, file.k, file.frozen)?)
}

/// Reads a code-spec JSON file.
pub fn read_spec(path: &Path) -> Result<PolarCodeSpec> {
    spec_from_json(&fs::read_to_string(path)?)
}

/// Writes a code-spec JSON file.
pub fn write_spec(path: &Path, spec: &PolarCodeSpec) -> Result<()> {
    Ok(fs::write(path, spec_to_json(spec)?)?)
}

/// Renders a frozen-set file.
pub fn frozen_to_text(spec: &PolarCodeSpec) -> String {
    let dims: Vec<String> =
        spec.kernels().iter().map(|k| k.dimension().to_string()).collect();
    let mut out = format!("# N={} K={} kernels={}\n", spec.n(), spec.k(), dims.join(","));
    for &i in spec.frozen() {
        out.push_str(&i.to_string());
        out.push('\n');
    }
    out
}

/// Writes the frozen-set text file for a spec.
pub fn write_frozen(path: &Path, spec: &PolarCodeSpec) -> Result<()> {
    Ok(fs::write(path, frozen_to_text(spec))?)
}

/// Reads a frozen-set file back into a validated spec.
pub fn read_frozen(path: &Path) -> Result<PolarCodeSpec> {
    let text = fs::read_to_string(path)?;
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Format("frozen file is empty".into()))?;
    let header = header
        .strip_prefix("# ")
        .ok_or_else(|| Error::Format("frozen file header must start with '# '".into()))?;
    let mut n = None;
    let mut k = None;
    let mut dims = None;
    for field in header.split_whitespace() {
        let (key, value) = field
            .split_once('=')
            .ok_or_else(|| Error::Format(format!("bad header field '{field}'")))?;
        match key {
            "N" => n = Some(parse_usize(value)?),
            "K" => k = Some(parse_usize(value)?),
            "kernels" => {
                dims = Some(
                    value
                        .split(',')
                        .map(parse_usize)
                        .collect::<Result<Vec<usize>>>()?,
                )
            }
            _ => return Err(Error::Format(format!("unknown header field '{key}'"))),
        }
    }
    let (Some(n), Some(k), Some(dims)) = (n, k, dims) else {
        return Err(Error::Format("header must define N, K, and kernels".into()));
    };
    let frozen: Vec<usize> = lines
        .filter(|l| !l.trim().is_empty())
        .map(|l| parse_usize(l.trim()))
        .collect::<Result<_>>()?;
    let kernels = kernels_from_dims(&dims)?;
    let spec = PolarCodeSpec::new(kernels, k, frozen)?;
    if spec.n() != n {
        return Err(Error::Format(format!(
            "header N={n} does not match the kernel product {}",
            spec.n()
        )));
    }
    Ok(spec)
}

fn parse_usize(s: &str) -> Result<usize> {
    s.parse()
        .map_err(|_| Error::Format(format!("expected an integer, found '{s}'")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_spec() -> PolarCodeSpec {
        let kernels = kernels_from_dims(&[3, 2, 2]).unwrap();
        PolarCodeSpec::new(kernels, 6, [0, 1, 2, 4, 6, 8]).unwrap()
    }

    #[test]
    fn spec_json_roundtrip_is_identity() {
        let spec = sample_spec();
        let json = spec_to_json(&spec).unwrap();
        assert_eq!(spec_from_json(&json).unwrap(), spec);
    }

    #[test]
    fn spec_json_is_validated_on_read() {
        let bad = r#"{ "kernels": [2, 2], "k": 2, "frozen": [0, 9] }"#;
        assert!(spec_from_json(bad).is_err());
        let bad_dim = r#"{ "kernels": [4], "k": 4, "frozen": [] }"#;
        assert!(spec_from_json(bad_dim).is_err());
    }

    #[test]
    fn frozen_file_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("frozen.txt");
        let spec = sample_spec();
        write_frozen(&path, &spec).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.starts_with("# N=12 K=6 kernels=3,2,2\n"));
        assert_eq!(read_frozen(&path).unwrap(), spec);
    }

    #[test]
    fn frozen_file_header_mismatch_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("frozen.txt");
        std::fs::write(&path, "# N=8 K=6 kernels=3,2,2\n0\n1\n2\n4\n6\n8\n").unwrap();
        assert!(read_frozen(&path).is_err());
    }
}
