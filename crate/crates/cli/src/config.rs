//! Flat `key = value` configuration files.
//!
//! Keys are the long flag names, e.g. `clock-qubits = 4`.
//! Lines starting with `#` and trailing `# ...` are comments. A value given
//! on the command line always wins over the file.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::error::{CliError, CliResult};

#[derive(Debug, Default)]
pub struct ConfigFile {
    origin: Option<PathBuf>,
    entries: BTreeMap<String, (usize, String)>,
}

impl ConfigFile {
    pub fn load(path: Option<&Path>) -> CliResult<Self> {
        match path {
            None => Ok(ConfigFile::default()),
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(|e| CliError::io(p, e))?;
                let mut cfg = Self::parse(&text)?;
                cfg.origin = Some(p.to_path_buf());
                Ok(cfg)
            }
        }
    }

    pub fn parse(text: &str) -> CliResult<Self> {
        let mut entries = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(CliError::Input(format!("config line {}: expected key = value", i + 1)));
            };
            let key = key.trim().trim_start_matches("--").to_string();
            if entries.insert(key.clone(), (i + 1, value.trim().to_string())).is_some() {
                return Err(CliError::Input(format!("config line {}: duplicate key {key:?}", i + 1)));
            }
        }
        Ok(ConfigFile { origin: None, entries })
    }

    fn describe(&self, line: usize) -> String {
        match &self.origin {
            Some(p) => format!("{}:{line}", p.display()),
            None => format!("config line {line}"),
        }
    }

    /// Removes `key` and parses its value.
    pub fn take<T>(&mut self, key: &str) -> CliResult<Option<T>>
    where
        T: FromStr,
        T::Err: Display,
    {
        match self.entries.remove(key) {
            None => Ok(None),
            Some((line, value)) => value
                .parse()
                .map(Some)
                .map_err(|e| CliError::Input(format!("{}: bad value for {key}: {e}", self.describe(line)))),
        }
    }

    /// Removes `key` and parses a comma-separated list.
    pub fn take_list<T>(&mut self, key: &str) -> CliResult<Option<Vec<T>>>
    where
        T: FromStr,
        T::Err: Display,
    {
        match self.entries.remove(key) {
            None => Ok(None),
            Some((line, value)) => value
                .split(',')
                .map(|v| v.trim().parse::<T>())
                .collect::<Result<Vec<_>, _>>()
                .map(Some)
                .map_err(|e| CliError::Input(format!("{}: bad list for {key}: {e}", self.describe(line)))),
        }
    }

    /// Flag value if given, else the config value, else `default`.
    pub fn pick<T>(&mut self, flag: Option<T>, key: &str, default: T) -> CliResult<T>
    where
        T: FromStr,
        T::Err: Display,
    {
        let from_file = self.take(key)?;
        Ok(flag.or(from_file).unwrap_or(default))
    }

    pub fn pick_opt<T>(&mut self, flag: Option<T>, key: &str) -> CliResult<Option<T>>
    where
        T: FromStr,
        T::Err: Display,
    {
        let from_file = self.take(key)?;
        Ok(flag.or(from_file))
    }

    pub fn pick_list<T>(&mut self, flag: Option<Vec<T>>, key: &str, default: Vec<T>) -> CliResult<Vec<T>>
    where
        T: FromStr,
        T::Err: Display,
    {
        let from_file = self.take_list(key)?;
        Ok(flag.or(from_file).unwrap_or(default))
    }

    pub fn pick_flag(&mut self, flag: bool, key: &str) -> CliResult<bool> {
        let from_file: Option<bool> = self.take(key)?;
        Ok(flag || from_file.unwrap_or(false))
    }

    /// Fails on keys no command consumed.
    pub fn finish(self) -> CliResult<()> {
        match self.entries.iter().next() {
            None => Ok(()),
            Some((key, (line, _))) => Err(CliError::Input(format!("{}: unknown key {key:?}", self.describe(*line)))),
        }
    }
}
