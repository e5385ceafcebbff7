//! Shared command plumbing: error-to-exit-code mapping, the optional JSON
//! config file, registry resolution, flag-value parsing, and audit files.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Deserialize;

use mteval_core::corpus::QualityTier;
use mteval_core::metrics::Smoothing;
use mteval_core::registry::LanguageRegistry;
use mteval_core::{bundled, SplitCaps};

/// Environment variable naming a default registry TSV. Weaker than both the
/// `--registry` flag and the config file.
pub const REGISTRY_ENV: &str = "MTEVAL_REGISTRY";

/// All command failures, split by exit code.
#[derive(Debug)]
pub enum CliError {
    /// A bad invocation: malformed flag or config-file value. Exit 1.
    Usage(String),
    /// Bad data: unreadable or invalid inputs, failed validation. Exit 2.
    Data(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Usage(msg) | CliError::Data(msg) => msg,
        }
    }
}

macro_rules! data_errors {
    ($($ty:ty),* $(,)?) => {$(
        impl From<$ty> for CliError {
            fn from(err: $ty) -> Self {
                CliError::Data(err.to_string())
            }
        }
    )*};
}

data_errors!(
    mteval_core::corpus::CorpusError,
    mteval_core::manifest::ManifestError,
    mteval_core::builder::BuilderError,
    mteval_core::registry::RegistryError,
    mteval_core::subword::SubwordError,
    mteval_core::metrics::MetricError,
    mteval_core::harness::HarnessError,
    mteval_core::validate::ValidateError,
);

/// Optional defaults file. Every field mirrors a flag and is overridden by
/// it; unknown keys are rejected so typos fail loudly.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub registry: Option<PathBuf>,
    pub sets_file: Option<PathBuf>,
    pub seed: Option<u64>,
    pub caps: Option<String>,
    pub ratios: Option<String>,
    pub tiers: Option<String>,
    pub scarce_threshold: Option<usize>,
    pub alpha: Option<f64>,
    pub vocab_size: Option<usize>,
    pub budget: Option<usize>,
    pub smoothing: Option<String>,
    pub lowercase: Option<bool>,
}

/// Where the effective registry came from, echoed into audit files.
enum RegistrySource {
    Bundled,
    File(PathBuf),
}

/// Global state resolved once before dispatch.
pub struct Context {
    registry: Option<LanguageRegistry>,
    registry_source: RegistrySource,
    pub config: ConfigFile,
}

impl Context {
    /// Resolve the registry (flag > config file > environment > bundled)
    /// and load the config file if given.
    pub fn resolve(
        registry_flag: Option<PathBuf>,
        sets_flag: Option<PathBuf>,
        config_path: Option<PathBuf>,
    ) -> Result<Context, CliError> {
        let config = match &config_path {
            None => ConfigFile::default(),
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| {
                    CliError::Usage(format!("cannot read config `{}`: {e}", path.display()))
                })?;
                serde_json::from_str(&text)
                    .map_err(|e| CliError::Usage(format!("bad config `{}`: {e}", path.display())))?
            }
        };

        let registry_path = registry_flag
            .or_else(|| config.registry.clone())
            .or_else(|| std::env::var_os(REGISTRY_ENV).map(PathBuf::from));
        let sets_path = sets_flag.or_else(|| config.sets_file.clone());
        if sets_path.is_some() && registry_path.is_none() {
            return Err(CliError::Usage(
                "--sets-file is only meaningful together with --registry".to_string(),
            ));
        }

        let (registry, registry_source) = match registry_path {
            None => (None, RegistrySource::Bundled),
            Some(path) => {
                let loaded = LanguageRegistry::load(&path, sets_path.as_deref())?;
                (Some(loaded), RegistrySource::File(path))
            }
        };
        Ok(Context {
            registry,
            registry_source,
            config,
        })
    }

    pub fn registry(&self) -> &LanguageRegistry {
        self.registry
            .as_ref()
            .unwrap_or_else(|| bundled::registry())
    }

    /// Registry provenance for audit files: `"bundled"` or the path.
    pub fn registry_desc(&self) -> String {
        match &self.registry_source {
            RegistrySource::Bundled => "bundled".to_string(),
            RegistrySource::File(path) => path.display().to_string(),
        }
    }
}

/// Parse `train,dev,test` caps, e.g. `5000,50,200`.
pub fn parse_caps(text: &str) -> Result<SplitCaps, CliError> {
    let [train, dev, test] = parse_triple(text, "caps")?;
    Ok(SplitCaps { train, dev, test })
}

/// Parse `train,dev,test` ratios, e.g. `0.8,0.1,0.1`.
pub fn parse_ratios(text: &str) -> Result<[f64; 3], CliError> {
    parse_triple(text, "ratios")
}

fn parse_triple<T: FromStr>(text: &str, what: &str) -> Result<[T; 3], CliError> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(CliError::Usage(format!(
            "{what} must be three comma-separated values, got `{text}`"
        )));
    }
    let mut values = parts.iter().map(|p| p.parse::<T>());
    let mut next = || {
        values.next().expect("exactly three parts").map_err(|_| {
            CliError::Usage(format!("{what} contains a non-numeric value in `{text}`"))
        })
    };
    Ok([next()?, next()?, next()?])
}

/// Parse a comma-separated tier list, e.g. `gold,human`.
pub fn parse_tiers(text: &str) -> Result<BTreeSet<QualityTier>, CliError> {
    let mut tiers = BTreeSet::new();
    for part in text.split(',') {
        let tier =
            QualityTier::from_str(part.trim()).map_err(|e| CliError::Usage(e.to_string()))?;
        tiers.insert(tier);
    }
    if tiers.is_empty() {
        return Err(CliError::Usage("tier list must not be empty".to_string()));
    }
    Ok(tiers)
}

/// Parse a smoothing name: `exponential`, `none`, or `floor:F`.
pub fn parse_smoothing(text: &str) -> Result<Smoothing, CliError> {
    match text {
        "exponential" => Ok(Smoothing::Exponential),
        "none" => Ok(Smoothing::None),
        _ => match text
            .strip_prefix("floor:")
            .and_then(|f| f.parse::<f64>().ok())
        {
            Some(floor) if floor.is_finite() && floor >= 0.0 => Ok(Smoothing::Floor(floor)),
            _ => Err(CliError::Usage(format!(
                "smoothing must be `exponential`, `none`, or `floor:F`, got `{text}`"
            ))),
        },
    }
}

/// Read a line-per-segment text file.
pub fn read_lines(path: &Path) -> Result<Vec<String>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Data(format!("cannot read `{}`: {e}", path.display())))?;
    Ok(text
        .lines()
        .map(|l| l.trim_end_matches('\r').to_string())
        .collect())
}

/// Write a pretty-printed audit JSON beside a command's outputs.
pub fn write_audit(path: &Path, value: &serde_json::Value) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Data(format!("cannot serialize audit: {e}")))?;
    text.push('\n');
    std::fs::write(path, text)
        .map_err(|e| CliError::Data(format!("cannot write `{}`: {e}", path.display())))
}

/// `"<name> <version>"` for audit files.
pub fn tool_version() -> String {
    format!("mteval {}", env!("CARGO_PKG_VERSION"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_caps_ratios_tiers() {
        let caps = parse_caps("5000, 50,200").unwrap();
        assert_eq!((caps.train, caps.dev, caps.test), (5000, 50, 200));
        assert_eq!(parse_ratios("0.8,0.1,0.1").unwrap(), [0.8, 0.1, 0.1]);
        let tiers = parse_tiers("gold,human").unwrap();
        assert!(tiers.contains(&QualityTier::Gold));
        assert!(tiers.contains(&QualityTier::HumanEvaluated));

        assert!(matches!(parse_caps("1,2"), Err(CliError::Usage(_))));
        assert!(matches!(parse_caps("a,b,c"), Err(CliError::Usage(_))));
        assert!(matches!(parse_ratios("0.8,0.1"), Err(CliError::Usage(_))));
        assert!(matches!(parse_tiers("bronze"), Err(CliError::Usage(_))));
    }

    #[test]
    fn parses_smoothing_names() {
        assert_eq!(
            parse_smoothing("exponential").unwrap(),
            Smoothing::Exponential
        );
        assert_eq!(parse_smoothing("none").unwrap(), Smoothing::None);
        assert_eq!(parse_smoothing("floor:0.1").unwrap(), Smoothing::Floor(0.1));
        assert!(matches!(
            parse_smoothing("floor:-1"),
            Err(CliError::Usage(_))
        ));
        assert!(matches!(parse_smoothing("add-k"), Err(CliError::Usage(_))));
        assert_eq!(
            parse_smoothing("floor:0.25").unwrap(),
            Smoothing::Floor(0.25)
        );
    }

    #[test]
    fn rejects_unknown_config_keys() {
        let err = serde_json::from_str::<ConfigFile>("{\"sead\": 7}").unwrap_err();
        assert!(err.to_string().contains("sead"));
        let ok: ConfigFile = serde_json::from_str("{\"seed\": 7, \"lowercase\": true}").unwrap();
        assert_eq!(ok.seed, Some(7));
        assert_eq!(ok.lowercase, Some(true));
    }
}
