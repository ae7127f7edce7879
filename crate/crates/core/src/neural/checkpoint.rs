//! On-disk parameter format: `<stem>.bin` holds every parameter value as
//! little-endian f64 in declaration order; `<stem>.manifest` is a text file
//! with the format tag, the SHA-256 of the network spec JSON, one
//! `name shape` line per tensor, and the `NetSpec` JSON itself.

use std::fs;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use super::network::{NetSpec, Network};
use crate::error::{IsacError, Result};

const FORMAT_TAG: &str = "isac-params-v1";

fn paths(stem: &Path) -> (PathBuf, PathBuf) {
    (stem.with_extension("bin"), stem.with_extension("manifest"))
}

fn spec_json(spec: &NetSpec) -> Result<String> {
    serde_json::to_string(spec).map_err(|e| IsacError::Checkpoint(format!("serialising spec: {e}")))
}

pub fn spec_hash(spec: &NetSpec) -> Result<String> {
    let digest = Sha256::digest(spec_json(spec)?.as_bytes());
    Ok(digest.iter().map(|b| format!("{b:02x}")).collect())
}

fn shape_text(shape: &[usize]) -> String {
    shape
        .iter()
        .map(usize::to_string)
        .collect::<Vec<_>>()
        .join("x")
}

/// Writes the network's parameters and manifest next to `stem`.
pub fn save_checkpoint(net: &Network, stem: &Path) -> Result<()> {
    let (bin, manifest) = paths(stem);
    if let Some(dir) = bin.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    let blob: Vec<u8> = net
        .params()
        .flat()
        .iter()
        .flat_map(|v| v.to_le_bytes())
        .collect();
    fs::write(&bin, blob)?;
    let mut text = format!(
        "format {FORMAT_TAG}\nspec_sha256 {}\nvalues {}\ntensors {}\n",
        spec_hash(net.spec())?,
        net.num_params(),
        net.params().len()
    );
    for p in net.params().iter() {
        text.push_str(&format!(
            "tensor {} {}\n",
            p.name,
            shape_text(p.value.shape())
        ));
    }
    text.push_str(&format!("spec {}\n", spec_json(net.spec())?));
    fs::write(&manifest, text)?;
    Ok(())
}

fn field<'a>(lines: &mut impl Iterator<Item = &'a str>, key: &str) -> Result<&'a str> {
    lines
        .next()
        .and_then(|l| l.strip_prefix(key))
        .and_then(|l| l.strip_prefix(' '))
        .ok_or_else(|| IsacError::Checkpoint(format!("manifest: expected `{key}` line")))
}

/// Reads a checkpoint written by [`save_checkpoint`], verifying the network spec
/// hash, tensor names/shapes and blob length.
pub fn load_checkpoint(stem: &Path) -> Result<Network> {
    let (bin, manifest) = paths(stem);
    let text = fs::read_to_string(&manifest)?;
    let mut lines = text.lines();
    let tag = field(&mut lines, "format")?;
    if tag != FORMAT_TAG {
        return Err(IsacError::Checkpoint(format!("unknown format `{tag}`")));
    }
    let hash = field(&mut lines, "spec_sha256")?.to_string();
    let values: usize = field(&mut lines, "values")?
        .parse()
        .map_err(|e| IsacError::Checkpoint(format!("values: {e}")))?;
    let tensors: usize = field(&mut lines, "tensors")?
        .parse()
        .map_err(|e| IsacError::Checkpoint(format!("tensors: {e}")))?;
    let declared: Vec<String> = (0..tensors)
        .map(|_| field(&mut lines, "tensor").map(str::to_string))
        .collect::<Result<_>>()?;
    let spec: NetSpec = serde_json::from_str(field(&mut lines, "spec")?)
        .map_err(|e| IsacError::Checkpoint(format!("spec: {e}")))?;
    if spec_hash(&spec)? != hash {
        return Err(IsacError::Checkpoint("spec hash mismatch".into()));
    }

    let net = Network::new(spec.clone(), &mut crate::math::SimRng::new(0))?;
    let expected: Vec<String> = net
        .params()
        .iter()
        .map(|p| format!("{} {}", p.name, shape_text(p.value.shape())))
        .collect();
    if expected != declared || values != net.num_params() {
        return Err(IsacError::Checkpoint(
            "tensor layout does not match spec".into(),
        ));
    }
    let blob = fs::read(&bin)?;
    if blob.len() != values * 8 {
        return Err(IsacError::Checkpoint(format!(
            "blob holds {} bytes, expected {}",
            blob.len(),
            values * 8
        )));
    }
    let flat: Vec<f64> = blob
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("8-byte chunk")))
        .collect();
    let mut params = net.params().clone();
    params.set_flat(&flat)?;
    Network::from_params(spec, params)
}
