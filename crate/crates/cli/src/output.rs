use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::CliError;

/// Where a run's files go, and the provenance stamped into each of them.
#[derive(Debug, Clone)]
pub struct Context {
    out: Option<PathBuf>,
    config_hash: String,
    seed: u64,
}

#[derive(Serialize)]
struct Stamped<'a, T: Serialize> {
    config_sha256: &'a str,
    seed: u64,
    #[serde(flatten)]
    body: &'a T,
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    }
}

impl Context {
    /// Hashes the resolved config and, with an output directory, persists
    /// it as `config.json` next to a `run.log` holding the wall-clock time.
    pub fn new<C: Serialize>(
        command: &str,
        out: Option<&Path>,
        config: &C,
        seed: u64,
    ) -> Result<Self, CliError> {
        let canonical = serde_json::to_string(config).expect("configs serialize");
        let config_hash = format!("{:x}", Sha256::digest(canonical.as_bytes()));
        let ctx = Context {
            out: out.map(Path::to_path_buf),
            config_hash,
            seed,
        };
        if let Some(dir) = out {
            fs::create_dir_all(dir).map_err(io_err(dir))?;
            let pretty = serde_json::to_string_pretty(config).expect("configs serialize");
            ctx.write("config.json", &(pretty + "\n"))?;
            let now = SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0);
            let log = format!(
                "command={command}\nstarted_unix={now}\nconfig_sha256={}\nseed={seed}\nlibrary_version={}\n",
                ctx.config_hash,
                fiq_core::VERSION
            );
            ctx.write("run.log", &log)?;
        }
        Ok(ctx)
    }

    pub fn config_hash(&self) -> &str {
        &self.config_hash
    }

    pub fn has_out(&self) -> bool {
        self.out.is_some()
    }

    /// First line of every CSV payload.
    pub fn csv_stamp(&self) -> String {
        format!("# config_sha256={} seed={}\n", self.config_hash, self.seed)
    }

    /// Pretty JSON of `body` with the provenance fields prepended.
    pub fn json<T: Serialize>(&self, body: &T) -> String {
        let stamped = Stamped {
            config_sha256: &self.config_hash,
            seed: self.seed,
            body,
        };
        serde_json::to_string_pretty(&stamped).expect("payloads serialize") + "\n"
    }

    /// Writes a payload file into the output directory, or prints it when
    /// there is none.
    pub fn emit(&self, name: &str, contents: &str) -> Result<(), CliError> {
        if self.out.is_some() {
            self.write(name, contents)
        } else {
            print!("{contents}");
            Ok(())
        }
    }

    /// Human-readable summary: stdout when payloads go to files, stderr
    /// when stdout carries the payload.
    pub fn summary(&self, text: &str) {
        if self.out.is_some() {
            println!("{text}");
        } else {
            eprintln!("{text}");
        }
    }

    fn write(&self, name: &str, contents: &str) -> Result<(), CliError> {
        let dir = self.out.as_ref().expect("write needs an output directory");
        let path = dir.join(name);
        fs::write(&path, contents).map_err(io_err(&path))
    }
}
