//! Run manifests: a deterministic record of what a CLI invocation computed
//! from. Identical manifests must imply identical outputs.

use std::collections::BTreeMap;

use sha2::{Digest, Sha256};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RunManifest {
    pub subcommand: String,
    pub parameters: BTreeMap<String, String>,
    pub input_digests: BTreeMap<String, String>,
    pub version: String,
    pub seed: Option<u64>,
}

impl RunManifest {
    pub fn new(subcommand: &str) -> Self {
        RunManifest {
            subcommand: subcommand.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            ..Default::default()
        }
    }

    pub fn param(mut self, key: &str, value: impl ToString) -> Self {
        self.parameters.insert(key.to_string(), value.to_string());
        self
    }

    pub fn input(mut self, path: &str, contents: &[u8]) -> Self {
        self.input_digests
            .insert(path.to_string(), sha256_hex(contents));
        self
    }

    pub fn seed(mut self, seed: Option<u64>) -> Self {
        self.seed = seed;
        self
    }

    /// One `manifest ...` line per field, keys sorted, suitable for diffing.
    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("manifest subcommand={}\n", self.subcommand));
        out.push_str(&format!("manifest version={}\n", self.version));
        match self.seed {
            Some(s) => out.push_str(&format!("manifest seed={s}\n")),
            None => out.push_str("manifest seed=-\n"),
        }
        for (k, v) in &self.parameters {
            out.push_str(&format!("manifest param {k}={v}\n"));
        }
        for (path, digest) in &self.input_digests {
            out.push_str(&format!("manifest input {path} sha256={digest}\n"));
        }
        out
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    let digest = hasher.finalize();
    digest.iter().map(|b| format!("{b:02x}")).collect()
}
