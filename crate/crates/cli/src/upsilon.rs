//! Resolution of distinguished sentences from flags, a config file, or the
//! shipped defaults.
//!
//! The config file maps class tags to sentence files. Top-level keys serve
//! unordered kinds; an `[ordered]` table serves ordered kinds and falls back
//! to the top level:
//!
//! ```toml
//! NP = "three-col.sent"
//! coNP = "non-three-col.sent"
//!
//! [ordered]
//! P = "alt-reach.sent"
//! ```

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use serde::Deserialize;

use canonlogic::config::default_upsilon;
use canonlogic::forms::{Class, FormKind};
use canonlogic::Formula;

#[derive(Debug, Default, Deserialize)]
struct File {
    #[serde(default)]
    ordered: BTreeMap<String, String>,
    #[serde(flatten)]
    top: BTreeMap<String, toml::Value>,
}

#[derive(Debug, Default)]
pub struct Config {
    dir: PathBuf,
    ordered: BTreeMap<String, String>,
    unordered: BTreeMap<String, String>,
}

impl Config {
    pub fn load(path: &Path) -> Result<Config> {
        let text =
            std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let file: File =
            toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
        let mut unordered = BTreeMap::new();
        for (k, v) in file.top {
            let v = v
                .as_str()
                .ok_or_else(|| anyhow!("{}: `{k}` must be a path", path.display()))?;
            unordered.insert(k, v.to_string());
        }
        for k in unordered.keys().chain(file.ordered.keys()) {
            k.parse::<Class>()
                .map_err(|e| anyhow!("{}: {e}", path.display()))?;
        }
        Ok(Config {
            dir: path.parent().map(Path::to_path_buf).unwrap_or_default(),
            ordered: file.ordered,
            unordered,
        })
    }

    fn entry(&self, class: Class, ordered: bool) -> Option<PathBuf> {
        let find = |m: &BTreeMap<String, String>| {
            m.iter()
                .find(|(k, _)| k.eq_ignore_ascii_case(class.tag()))
                .map(|(_, v)| self.dir.join(v))
        };
        if ordered {
            find(&self.ordered).or_else(|| find(&self.unordered))
        } else {
            find(&self.unordered)
        }
    }
}

/// The distinguished sentence for a form, or `None` for kinds without one.
/// An explicit file wins over the config, which wins over the defaults.
pub fn resolve(
    kind: FormKind,
    class: Class,
    explicit: Option<&Path>,
    config: Option<&Config>,
) -> Result<Option<Formula>> {
    let Some(ordered) = kind.ordered() else {
        return Ok(None);
    };
    if let Some(p) = explicit {
        return crate::read_sentence(p).map(Some);
    }
    if let Some(p) = config.and_then(|c| c.entry(class, ordered)) {
        return crate::read_sentence(&p).map(Some);
    }
    match default_upsilon(class, ordered) {
        Some(f) => Ok(Some(f)),
        None => bail!(
            "no distinguished sentence for {class} ({}): pass --upsilon or --config",
            if ordered { "ordered" } else { "unordered" }
        ),
    }
}
