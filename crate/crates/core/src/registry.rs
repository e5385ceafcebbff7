//! Language registry: code validation, metadata lookup, named language sets,
//! and the category taxonomy used by evaluation reports.
//!
//! The registry is plain data loaded from two tab-separated files (see
//! `data/registry.tsv` and `data/sets.tsv` for the bundled instances), so the
//! language inventory and the "supported" set can be extended or replaced
//! without touching code.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;

use thiserror::Error;

/// Errors from registry parsing and lookups.
#[derive(Debug, Error)]
pub enum RegistryError {
    #[error("unknown language code `{0}`")]
    UnknownCode(String),
    #[error("malformed language code `{0}`: expected three lowercase ASCII letters")]
    MalformedCode(String),
    #[error("malformed pair code `{0}`: expected `src-tgt`")]
    MalformedPair(String),
    #[error("pair `{0}` uses the same language on both sides")]
    SameLanguage(String),
    #[error("duplicate language code `{0}` in registry")]
    DuplicateCode(String),
    #[error("registry file line {line}: {message}")]
    MalformedFile { line: usize, message: String },
    #[error("unknown language set `{0}`")]
    UnknownSet(String),
    #[error("language set `{set}` references unknown code `{code}`")]
    UnknownSetMember { set: String, code: String },
    #[error("failed to read registry data: {0}")]
    Io(#[from] std::io::Error),
}

/// Metadata for one language.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LanguageInfo {
    /// Three-letter lowercase code, e.g. `hau`.
    pub code: String,
    /// Human-readable name used in instruction prompts, e.g. `Hausa`.
    pub name: String,
    /// Language family, e.g. `Afro-Asiatic`.
    pub family: String,
    /// Dominant writing system, e.g. `Latin`.
    pub script: String,
    /// Whether the language is African for category purposes. The three
    /// anchor languages (Arabic, English, French) carry `false` here even
    /// though Arabic is widely spoken on the continent: categories treat
    /// anchors and African languages as disjoint roles.
    pub is_african: bool,
}

/// An ordered translation direction `src → tgt`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DirectedPair {
    pub src: String,
    pub tgt: String,
}

impl DirectedPair {
    /// Construct without registry validation. Both codes must already be
    /// syntactically valid and distinct; use [`parse_pair_code`] for untrusted
    /// input.
    pub fn new(src: impl Into<String>, tgt: impl Into<String>) -> Self {
        let pair = DirectedPair {
            src: src.into(),
            tgt: tgt.into(),
        };
        debug_assert_ne!(pair.src, pair.tgt, "directed pair with equal sides");
        pair
    }

    /// The `src-tgt` form used in file names and `langcode` fields.
    pub fn code(&self) -> String {
        format!("{}-{}", self.src, self.tgt)
    }

    /// The same pair with the direction flipped.
    pub fn reversed(&self) -> DirectedPair {
        DirectedPair {
            src: self.tgt.clone(),
            tgt: self.src.clone(),
        }
    }
}

impl fmt::Display for DirectedPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.src, self.tgt)
    }
}

/// Serializes as the `src-tgt` code string, matching file names and
/// `langcode` fields.
impl serde::Serialize for DirectedPair {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.code())
    }
}

impl<'de> serde::Deserialize<'de> for DirectedPair {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let code = String::deserialize(deserializer)?;
        parse_pair_code(&code).map_err(serde::de::Error::custom)
    }
}

/// Check that a code is three lowercase ASCII letters.
fn check_code_syntax(code: &str) -> Result<(), RegistryError> {
    let ok = code.len() == 3 && code.bytes().all(|b| b.is_ascii_lowercase());
    if ok {
        Ok(())
    } else {
        Err(RegistryError::MalformedCode(code.to_string()))
    }
}

/// Parse a `src-tgt` pair code. Purely syntactic: both sides must be
/// well-formed codes and distinct, but membership in a registry is not
/// checked here (see [`LanguageRegistry::validate_pair`]).
pub fn parse_pair_code(text: &str) -> Result<DirectedPair, RegistryError> {
    let (src, tgt) = text
        .split_once('-')
        .ok_or_else(|| RegistryError::MalformedPair(text.to_string()))?;
    check_code_syntax(src).map_err(|_| RegistryError::MalformedPair(text.to_string()))?;
    check_code_syntax(tgt).map_err(|_| RegistryError::MalformedPair(text.to_string()))?;
    if src == tgt {
        return Err(RegistryError::SameLanguage(text.to_string()));
    }
    Ok(DirectedPair::new(src, tgt))
}

/// The three pivot languages around which categories are defined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Anchor {
    Arabic,
    English,
    French,
}

impl Anchor {
    pub const ALL: [Anchor; 3] = [Anchor::Arabic, Anchor::English, Anchor::French];

    pub fn code(self) -> &'static str {
        match self {
            Anchor::Arabic => "ara",
            Anchor::English => "eng",
            Anchor::French => "fra",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Anchor::Arabic => "Arabic",
            Anchor::English => "English",
            Anchor::French => "French",
        }
    }

    pub fn from_code(code: &str) -> Option<Anchor> {
        Anchor::ALL.into_iter().find(|a| a.code() == code)
    }
}

/// Category labels assigned to a direction. One direction can carry several
/// labels (e.g. `ara → fra` is both an Arabic and a French anchor direction);
/// report aggregation averages a direction into every row it belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CategoryLabel {
    /// Either side is the anchor: the `A ↔ XX` row.
    AnchorBoth(Anchor),
    /// Target is the anchor: `XX → A`.
    IntoAnchor(Anchor),
    /// Source is the anchor: `A → XX`.
    FromAnchor(Anchor),
    /// `A → XX` where XX is an African target inside the supported set.
    FromAnchorSupported(Anchor),
    /// `A → XX` where XX is an African target outside the supported set.
    FromAnchorUnsupported(Anchor),
    /// Both sides African (anchors never count as African).
    AfricanAfrican,
}

impl fmt::Display for CategoryLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CategoryLabel::AnchorBoth(a) => write!(f, "{}\u{2194}XX", a.name()),
            CategoryLabel::IntoAnchor(a) => write!(f, "XX\u{2192}{}", a.name()),
            CategoryLabel::FromAnchor(a) => write!(f, "{}\u{2192}XX", a.name()),
            CategoryLabel::FromAnchorSupported(a) => {
                write!(f, "{}\u{2192}XX (supported)", a.name())
            }
            CategoryLabel::FromAnchorUnsupported(a) => {
                write!(f, "{}\u{2192}XX (not supported)", a.name())
            }
            CategoryLabel::AfricanAfrican => write!(f, "African\u{2194}African"),
        }
    }
}

/// In-memory language registry plus named language sets.
#[derive(Debug, Clone, Default)]
pub struct LanguageRegistry {
    entries: BTreeMap<String, LanguageInfo>,
    sets: BTreeMap<String, BTreeSet<String>>,
}

impl LanguageRegistry {
    /// Build from already-validated entries and sets.
    pub fn from_entries(
        entries: impl IntoIterator<Item = LanguageInfo>,
        sets: impl IntoIterator<Item = (String, BTreeSet<String>)>,
    ) -> Result<Self, RegistryError> {
        let mut registry = LanguageRegistry::default();
        for info in entries {
            check_code_syntax(&info.code)?;
            if registry
                .entries
                .insert(info.code.clone(), info.clone())
                .is_some()
            {
                return Err(RegistryError::DuplicateCode(info.code));
            }
        }
        for (name, members) in sets {
            for code in &members {
                if !registry.entries.contains_key(code) {
                    return Err(RegistryError::UnknownSetMember {
                        set: name.clone(),
                        code: code.clone(),
                    });
                }
            }
            registry.sets.insert(name, members);
        }
        Ok(registry)
    }

    /// Parse registry text (`code  name  family  script  is_african`, tab
    /// separated) and optional sets text (`set-name  code,code,...`). Lines
    /// that are blank or start with `#` are skipped in both files.
    pub fn parse(registry_tsv: &str, sets_tsv: Option<&str>) -> Result<Self, RegistryError> {
        let mut entries = Vec::new();
        for (idx, raw) in registry_tsv.lines().enumerate() {
            let line = raw.trim_end_matches('\r');
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            if fields.len() != 5 {
                return Err(RegistryError::MalformedFile {
                    line: idx + 1,
                    message: format!("expected 5 tab-separated fields, found {}", fields.len()),
                });
            }
            let is_african = match fields[4] {
                "true" => true,
                "false" => false,
                other => {
                    return Err(RegistryError::MalformedFile {
                        line: idx + 1,
                        message: format!("is_african must be `true` or `false`, found `{other}`"),
                    })
                }
            };
            entries.push(LanguageInfo {
                code: fields[0].to_string(),
                name: fields[1].to_string(),
                family: fields[2].to_string(),
                script: fields[3].to_string(),
                is_african,
            });
        }

        let mut sets = Vec::new();
        if let Some(text) = sets_tsv {
            for (idx, raw) in text.lines().enumerate() {
                let line = raw.trim_end_matches('\r');
                if line.trim().is_empty() || line.starts_with('#') {
                    continue;
                }
                let (name, codes) =
                    line.split_once('\t')
                        .ok_or_else(|| RegistryError::MalformedFile {
                            line: idx + 1,
                            message: "expected `set-name<TAB>code,code,...`".to_string(),
                        })?;
                let members: BTreeSet<String> = codes
                    .split(',')
                    .map(|c| c.trim().to_string())
                    .filter(|c| !c.is_empty())
                    .collect();
                sets.push((name.to_string(), members));
            }
        }
        LanguageRegistry::from_entries(entries, sets)
    }

    /// Load from files on disk.
    pub fn load(registry_path: &Path, sets_path: Option<&Path>) -> Result<Self, RegistryError> {
        let registry_tsv = std::fs::read_to_string(registry_path)?;
        let sets_tsv = match sets_path {
            Some(p) => Some(std::fs::read_to_string(p)?),
            None => None,
        };
        LanguageRegistry::parse(&registry_tsv, sets_tsv.as_deref())
    }

    /// Number of registered languages.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Lookup without validation semantics.
    pub fn get(&self, code: &str) -> Option<&LanguageInfo> {
        self.entries.get(code)
    }

    /// All languages in code order.
    pub fn languages(&self) -> impl Iterator<Item = &LanguageInfo> {
        self.entries.values()
    }

    /// Validate a code: syntax first, then membership.
    pub fn validate_language_code(&self, code: &str) -> Result<&LanguageInfo, RegistryError> {
        check_code_syntax(code)?;
        self.entries
            .get(code)
            .ok_or_else(|| RegistryError::UnknownCode(code.to_string()))
    }

    /// Parse a pair code and check both sides against the registry.
    pub fn validate_pair(&self, text: &str) -> Result<DirectedPair, RegistryError> {
        let pair = parse_pair_code(text)?;
        self.validate_language_code(&pair.src)?;
        self.validate_language_code(&pair.tgt)?;
        Ok(pair)
    }

    /// Members of a named set.
    pub fn set(&self, name: &str) -> Result<&BTreeSet<String>, RegistryError> {
        self.sets
            .get(name)
            .ok_or_else(|| RegistryError::UnknownSet(name.to_string()))
    }

    /// Names of all known sets.
    pub fn set_names(&self) -> impl Iterator<Item = &str> {
        self.sets.keys().map(String::as_str)
    }

    /// All category labels that apply to a direction, given the set used to
    /// decide supported/unsupported sub-rows.
    ///
    /// Rules: each anchor contributes `AnchorBoth` when it appears on either
    /// side, `IntoAnchor` when it is the target of a non-anchor source, and
    /// `FromAnchor` when it is the source of a non-anchor target; a
    /// `FromAnchor` direction whose target is African additionally lands in
    /// the supported or unsupported sub-row. `AfricanAfrican` requires both
    /// sides African, which excludes anchors by construction.
    pub fn categorize_pair(
        &self,
        pair: &DirectedPair,
        set_name: &str,
    ) -> Result<BTreeSet<CategoryLabel>, RegistryError> {
        let src = self.validate_language_code(&pair.src)?;
        let tgt = self.validate_language_code(&pair.tgt)?;
        let supported = self.set(set_name)?;

        let mut labels = BTreeSet::new();
        for anchor in Anchor::ALL {
            let a = anchor.code();
            if pair.src == a || pair.tgt == a {
                labels.insert(CategoryLabel::AnchorBoth(anchor));
            }
            if pair.tgt == a && pair.src != a {
                labels.insert(CategoryLabel::IntoAnchor(anchor));
            }
            if pair.src == a && pair.tgt != a {
                labels.insert(CategoryLabel::FromAnchor(anchor));
                if tgt.is_african {
                    labels.insert(if supported.contains(&pair.tgt) {
                        CategoryLabel::FromAnchorSupported(anchor)
                    } else {
                        CategoryLabel::FromAnchorUnsupported(anchor)
                    });
                }
            }
        }
        if src.is_african && tgt.is_african {
            labels.insert(CategoryLabel::AfricanAfrican);
        }
        Ok(labels)
    }

    /// Whether every non-anchor language in the direction belongs to the
    /// named set. Directions whose sides are both anchors are vacuously
    /// supported. This is the partition used by the report's total rows.
    pub fn direction_supported(
        &self,
        pair: &DirectedPair,
        set_name: &str,
    ) -> Result<bool, RegistryError> {
        self.validate_language_code(&pair.src)?;
        self.validate_language_code(&pair.tgt)?;
        let supported = self.set(set_name)?;
        Ok([&pair.src, &pair.tgt]
            .into_iter()
            .filter(|code| Anchor::from_code(code).is_none())
            .all(|code| supported.contains(code)))
    }
}
