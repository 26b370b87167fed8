//! Key=value configuration files. Flags always override file values.

use std::collections::BTreeMap;
use std::path::Path;

use crate::CliError;

/// Parsed `--config` file: one `key=value` per line, `#` comments and blank
/// lines ignored.
#[derive(Debug, Default)]
pub struct ConfigFile {
    map: BTreeMap<String, String>,
}

impl ConfigFile {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let content = std::fs::read_to_string(path)
            .map_err(|e| CliError::Data(format!("config {}: {e}", path.display())))?;
        let mut map = BTreeMap::new();
        for (i, raw) in content.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::Data(format!(
                    "config {} line {}: expected key=value, found {raw:?}",
                    path.display(),
                    i + 1
                ))
            })?;
            map.insert(key.trim().to_string(), value.trim().to_string());
        }
        Ok(Self { map })
    }

    /// Flag value if given, else the parsed config value, else the default.
    pub fn resolve<T: std::str::FromStr + Clone>(
        &self,
        flag: Option<T>,
        key: &str,
        default: T,
    ) -> Result<T, CliError> {
        Ok(self.resolve_opt(flag, key)?.unwrap_or(default))
    }

    /// Flag value if given, else the parsed config value, else None.
    pub fn resolve_opt<T: std::str::FromStr>(
        &self,
        flag: Option<T>,
        key: &str,
    ) -> Result<Option<T>, CliError> {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.map.get(key) {
            Some(value) => value
                .parse()
                .map(Some)
                .map_err(|_| CliError::Usage(format!("config key {key}: invalid value {value:?}"))),
            None => Ok(None),
        }
    }
}
