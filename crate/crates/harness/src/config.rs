//! INI-style run configuration.
//!
//! ```text
//! [run]
//! mode = radial
//! t_end = 10
//!
//! [grid]
//! r_max = 20
//! n_r = 2048
//!
//! [ic]
//! mass = 4pi
//! ```
//!
//! Numbers may carry a `pi` suffix (`7.5pi`), so masses near 8π are exact.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use pkns_core::config::{FlowKind, GridSpec, IcKind, Mode};
use pkns_core::RunConfig64;

use crate::error::ConfigError;

/// Every accepted key with its section.
const KEYS: &[(&str, &str)] = &[
    ("run", "mode"),
    ("run", "t_end"),
    ("run", "cfl"),
    ("run", "dt_max"),
    ("run", "dt_min"),
    ("run", "diag_every"),
    ("run", "delta"),
    ("run", "blowup_factor"),
    ("run", "out_dir"),
    ("grid", "n_points"),
    ("grid", "r_max"),
    ("grid", "n_r"),
    ("grid", "max_cells"),
    ("ic", "kind"),
    ("ic", "mass"),
    ("ic", "width"),
    ("ic", "amplitude"),
    ("ic", "seed"),
    ("ic", "modes"),
    ("ic", "file"),
    ("ic", "flow"),
    ("ic", "flow_amplitude"),
    ("coupling", "chemotaxis"),
    ("coupling", "forcing"),
];

/// Largest step used when `dt_max` is not given.
pub const DEFAULT_DT_MAX: f64 = 1e-2;

fn section_of(key: &str) -> Option<&'static str> {
    KEYS.iter().find(|(_, k)| *k == key).map(|(s, _)| *s)
}

fn canonical_key(key: &str) -> Option<&'static str> {
    KEYS.iter().find(|(_, k)| *k == key).map(|(_, k)| *k)
}

/// Parses a float, where a trailing `pi` multiplies by π: `8pi`, `0.5pi`, `pi`.
pub fn parse_number(text: &str) -> Option<f64> {
    let t = text.trim();
    if let Some(head) = t.strip_suffix("pi") {
        let head = head.trim_end().trim_end_matches('*').trim_end();
        let factor = match head {
            "" | "+" => 1.0,
            "-" => -1.0,
            h => h.parse::<f64>().ok()?,
        };
        return Some(factor * PI);
    }
    t.parse::<f64>().ok()
}

/// Shortest decimal that reads back to the same `f64`.
pub fn format_f64(x: f64) -> String {
    ryu::Buffer::new().format(x).to_owned()
}

fn unquote(v: &str) -> &str {
    let b = v.as_bytes();
    if b.len() >= 2 && (b[0] == b'"' || b[0] == b'\'') && b[b.len() - 1] == b[0] {
        &v[1..v.len() - 1]
    } else {
        v
    }
}

fn strip_comment(v: &str) -> &str {
    // an inline comment needs whitespace before the marker
    let bytes = v.as_bytes();
    for i in 1..bytes.len() {
        if (bytes[i] == b'#' || bytes[i] == b';') && bytes[i - 1].is_ascii_whitespace() {
            return v[..i].trim_end();
        }
    }
    v
}

#[derive(Debug, Clone, PartialEq)]
struct Entry {
    key: &'static str,
    value: String,
    /// Source line; 0 for values set programmatically.
    line: usize,
}

/// A parsed but not yet interpreted configuration. Sweeps edit single keys
/// here before building each [`RunConfig64`].
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ConfigDocument {
    entries: Vec<Entry>,
}

impl ConfigDocument {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut section: Option<&'static str> = None;
        let mut entries: Vec<Entry> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') || trimmed.starts_with(';') {
                continue;
            }
            if let Some(rest) = trimmed.strip_prefix('[') {
                let name = rest
                    .strip_suffix(']')
                    .ok_or_else(|| ConfigError::at(line, None, "unterminated section header"))?
                    .trim();
                section = KEYS.iter().map(|(s, _)| *s).find(|s| *s == name);
                if section.is_none() {
                    return Err(ConfigError::at(
                        line,
                        None,
                        format!("unknown section [{name}]"),
                    ));
                }
                continue;
            }
            let (key, value) = trimmed
                .split_once('=')
                .ok_or_else(|| ConfigError::at(line, None, "expected `key = value`"))?;
            let key = key.trim();
            let value = unquote(strip_comment(value.trim()).trim());
            let Some(current) = section else {
                return Err(ConfigError::at(
                    line,
                    Some(key),
                    "key before any section header",
                ));
            };
            let Some(canonical) = canonical_key(key) else {
                return Err(ConfigError::at(line, Some(key), "unknown key"));
            };
            let home = section_of(canonical).unwrap_or_default();
            if home != current {
                return Err(ConfigError::at(
                    line,
                    Some(key),
                    format!("belongs in [{home}], found in [{current}]"),
                ));
            }
            if let Some(first) = entries.iter().find(|e| e.key == canonical) {
                return Err(ConfigError::at(
                    line,
                    Some(key),
                    format!("duplicate key (first set on line {})", first.line),
                ));
            }
            if value.is_empty() {
                return Err(ConfigError::at(line, Some(key), "empty value"));
            }
            entries.push(Entry {
                key: canonical,
                value: value.to_owned(),
                line,
            });
        }
        Ok(Self { entries })
    }

    pub fn from_file(path: &Path) -> Result<Self, crate::HarnessError> {
        let text = std::fs::read_to_string(path).map_err(|e| crate::HarnessError::io(path, e))?;
        let mut doc = Self::parse(&text)?;
        if let Some(dir) = path.parent() {
            doc.resolve_relative_to(dir);
        }
        Ok(doc)
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries
            .iter()
            .find(|e| e.key == key)
            .map(|e| e.value.as_str())
    }

    /// Sets `key` (optionally written `section.key`), replacing any existing value.
    pub fn set(&mut self, name: &str, value: &str) -> Result<(), ConfigError> {
        let key = match name.split_once('.') {
            Some((section, key)) if section_of(key) == Some(section) => key,
            Some(_) => return Err(ConfigError::for_key(name, "unknown key")),
            None => name,
        };
        let key = canonical_key(key).ok_or_else(|| ConfigError::for_key(name, "unknown key"))?;
        match self.entries.iter_mut().find(|e| e.key == key) {
            Some(e) => e.value = value.to_owned(),
            None => self.entries.push(Entry {
                key,
                value: value.to_owned(),
                line: 0,
            }),
        }
        Ok(())
    }

    /// Makes a relative `ic.file` path relative to `dir` instead of the working directory.
    pub fn resolve_relative_to(&mut self, dir: &Path) {
        for e in &mut self.entries {
            if e.key == "file" && Path::new(&e.value).is_relative() {
                e.value = dir.join(&e.value).to_string_lossy().into_owned();
            }
        }
    }

    fn entry(&self, key: &str) -> Option<&Entry> {
        self.entries.iter().find(|e| e.key == key)
    }

    fn error(&self, key: &str, message: impl Into<String>) -> ConfigError {
        match self.entry(key) {
            Some(e) if e.line > 0 => ConfigError::at(e.line, Some(key), message),
            _ => ConfigError::for_key(key, message),
        }
    }

    fn float(&self, key: &str) -> Result<Option<f64>, ConfigError> {
        self.get(key)
            .map(|v| {
                parse_number(v)
                    .ok_or_else(|| self.error(key, format!("expected a number, got `{v}`")))
            })
            .transpose()
    }

    fn integer<N: std::str::FromStr>(&self, key: &str) -> Result<Option<N>, ConfigError> {
        self.get(key)
            .map(|v| {
                v.parse::<N>().map_err(|_| {
                    self.error(key, format!("expected a non-negative integer, got `{v}`"))
                })
            })
            .transpose()
    }

    fn required_float(&self, key: &str) -> Result<f64, ConfigError> {
        self.float(key)?
            .ok_or_else(|| ConfigError::for_key(key, "missing required key"))
    }

    fn required_integer(&self, key: &str) -> Result<usize, ConfigError> {
        self.integer(key)?
            .ok_or_else(|| ConfigError::for_key(key, "missing required key"))
    }

    fn forbid(&self, keys: &[&str], mode: Mode) -> Result<(), ConfigError> {
        for key in keys {
            if self.entry(key).is_some() {
                return Err(self.error(key, format!("not valid in {} mode", mode.as_str())));
            }
        }
        Ok(())
    }

    /// Interprets and validates the document, filling defaults.
    pub fn to_config(&self) -> Result<RunConfig64, ConfigError> {
        let mode = match self.get("mode") {
            Some("torus") => Mode::Torus,
            Some("radial") => Mode::Radial,
            Some("selfsim") => Mode::SelfSim,
            Some(other) => {
                return Err(self.error(
                    "mode",
                    format!("expected torus, radial or selfsim, got `{other}`"),
                ))
            }
            None => return Err(ConfigError::for_key("mode", "missing required key")),
        };
        let grid = match mode {
            Mode::Torus => {
                self.forbid(&["r_max", "n_r", "max_cells"], mode)?;
                GridSpec::Torus {
                    n_points: self.required_integer("n_points")?,
                }
            }
            Mode::Radial | Mode::SelfSim => {
                self.forbid(&["n_points"], mode)?;
                GridSpec::Radial {
                    r_max: self.required_float("r_max")?,
                    n_r: self.required_integer("n_r")?,
                }
            }
        };
        let t_end = self.required_float("t_end")?;
        let dt_max = self.float("dt_max")?.unwrap_or(DEFAULT_DT_MAX);
        let mut cfg = RunConfig64::new(mode, grid, t_end, dt_max);
        if let Some(v) = self.float("cfl")? {
            cfg.control.cfl = v;
        }
        if let Some(v) = self.float("dt_min")? {
            cfg.control.dt_min = v;
        }
        if let Some(v) = self.integer("diag_every")? {
            cfg.diag_every = v;
        }
        if let Some(v) = self.float("delta")? {
            cfg.delta = v;
        }
        if let Some(v) = self.float("blowup_factor")? {
            cfg.blowup_factor = v;
        }
        if let Some(v) = self.get("out_dir") {
            cfg.out_dir = PathBuf::from(v);
        }
        cfg.max_cells = self.integer("max_cells")?;

        let ic = &mut cfg.ic;
        ic.mass = self.required_float("mass")?;
        ic.kind = match (self.get("kind"), self.get("file")) {
            (None | Some("gaussian"), None) => IcKind::Gaussian,
            (Some("random"), None) => IcKind::Random,
            (Some("file"), Some(path)) => IcKind::File(PathBuf::from(path)),
            (Some("file"), None) => {
                return Err(self.error("kind", "kind = file needs a `file` key"))
            }
            (_, Some(_)) => return Err(self.error("file", "only valid with kind = file")),
            (Some(other), None) => {
                return Err(self.error(
                    "kind",
                    format!("expected gaussian, random or file, got `{other}`"),
                ))
            }
        };
        if let Some(v) = self.float("width")? {
            ic.width = v;
        }
        if let Some(v) = self.float("amplitude")? {
            ic.amplitude = v;
        }
        if let Some(v) = self.integer("seed")? {
            ic.seed = v;
        }
        if let Some(v) = self.integer("modes")? {
            ic.modes = v;
        }
        ic.flow = match self.get("flow") {
            None | Some("none") => FlowKind::None,
            Some("shear") => FlowKind::Shear,
            Some("random") => FlowKind::Random,
            Some("vortex") => FlowKind::Vortex,
            Some(other) => {
                return Err(self.error(
                    "flow",
                    format!("expected none, shear, random or vortex, got `{other}`"),
                ))
            }
        };
        if let Some(v) = self.float("flow_amplitude")? {
            ic.flow_amplitude = v;
        }
        if let Some(v) = self.float("chemotaxis")? {
            cfg.coupling.chemotaxis = v;
        }
        if let Some(v) = self.float("forcing")? {
            cfg.coupling.forcing = v;
        }
        cfg.validate().map_err(|e| match e {
            pkns_core::Error::Config(msg) => ConfigError::new(msg),
            other => ConfigError::new(other.to_string()),
        })?;
        Ok(cfg)
    }
}

/// Parses and validates configuration text.
pub fn parse_config(text: &str) -> Result<RunConfig64, ConfigError> {
    ConfigDocument::parse(text)?.to_config()
}

/// Complete configuration text with every value explicit;
/// `parse_config(&render_config(c)) == c` for any valid `c`.
pub fn render_config(cfg: &RunConfig64) -> String {
    let f = format_f64;
    let mut out = String::new();
    let mut line = |s: String| {
        out.push_str(&s);
        out.push('\n');
    };
    line("[run]".into());
    line(format!("mode = {}", cfg.mode.as_str()));
    line(format!("t_end = {}", f(cfg.t_end)));
    line(format!("cfl = {}", f(cfg.control.cfl)));
    line(format!("dt_max = {}", f(cfg.control.dt_max)));
    line(format!("dt_min = {}", f(cfg.control.dt_min)));
    line(format!("diag_every = {}", cfg.diag_every));
    line(format!("delta = {}", f(cfg.delta)));
    line(format!("blowup_factor = {}", f(cfg.blowup_factor)));
    line(format!("out_dir = {}", cfg.out_dir.display()));
    line(String::new());
    line("[grid]".into());
    match cfg.grid {
        GridSpec::Torus { n_points } => line(format!("n_points = {n_points}")),
        GridSpec::Radial { r_max, n_r } => {
            line(format!("r_max = {}", f(r_max)));
            line(format!("n_r = {n_r}"));
        }
    }
    if let Some(max) = cfg.max_cells {
        line(format!("max_cells = {max}"));
    }
    line(String::new());
    line("[ic]".into());
    let ic = &cfg.ic;
    match &ic.kind {
        IcKind::Gaussian => line("kind = gaussian".into()),
        IcKind::Random => line("kind = random".into()),
        IcKind::File(path) => {
            line("kind = file".into());
            line(format!("file = {}", path.display()));
        }
    }
    line(format!("mass = {}", f(ic.mass)));
    line(format!("width = {}", f(ic.width)));
    line(format!("amplitude = {}", f(ic.amplitude)));
    line(format!("seed = {}", ic.seed));
    line(format!("modes = {}", ic.modes));
    let flow = match ic.flow {
        FlowKind::None => "none",
        FlowKind::Shear => "shear",
        FlowKind::Random => "random",
        FlowKind::Vortex => "vortex",
    };
    line(format!("flow = {flow}"));
    line(format!("flow_amplitude = {}", f(ic.flow_amplitude)));
    line(String::new());
    line("[coupling]".into());
    line(format!("chemotaxis = {}", f(cfg.coupling.chemotaxis)));
    line(format!("forcing = {}", f(cfg.coupling.forcing)));
    out
}
