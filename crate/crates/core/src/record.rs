//! The benchmark record: one instruction-wrapped translation example, stored
//! as one JSON object per line.
//!
//! Serialization is canonical so that identical datasets are byte-identical
//! on disk: keys always appear in the order `langcode`, `instruction`,
//! `input`, `output`; output is compact (no extra whitespace); strings use
//! standard JSON escaping; lines end with `\n`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::registry::{parse_pair_code, DirectedPair, RegistryError};

/// Errors from parsing a record line.
#[derive(Debug, Error)]
pub enum RecordError {
    #[error("malformed JSON: {0}")]
    MalformedJson(String),
    #[error("record is not a JSON object")]
    NotAnObject,
    #[error("missing field `{0}`")]
    MissingField(&'static str),
    #[error("field `{0}` is not a string")]
    FieldNotString(&'static str),
    #[error("unexpected field `{0}`")]
    ExtraField(String),
    #[error("field `{0}` is empty")]
    EmptyField(&'static str),
    #[error("invalid langcode: {0}")]
    BadLangcode(#[source] RegistryError),
}

const FIELDS: [&str; 4] = ["langcode", "instruction", "input", "output"];

/// One training or evaluation example.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TranslationRecord {
    /// Direction code `src-tgt`.
    pub langcode: String,
    /// The task prompt shown to a model.
    pub instruction: String,
    /// Source-language sentence.
    pub input: String,
    /// Target-language sentence (the reference).
    pub output: String,
}

impl TranslationRecord {
    /// The parsed direction of `langcode`. Valid for records built by this
    /// crate or accepted by [`parse_record`], both of which enforce a
    /// well-formed code.
    pub fn pair(&self) -> DirectedPair {
        parse_pair_code(&self.langcode).expect("record langcode was validated on construction")
    }
}

/// Parse one JSONL line into a record.
///
/// Strict by design: all four fields must be present as non-empty strings, no
/// other fields are allowed, and the langcode must be a well-formed pair.
/// Validation that both codes exist in a registry is the caller's business.
pub fn parse_record(line: &str) -> Result<TranslationRecord, RecordError> {
    let value: serde_json::Value =
        serde_json::from_str(line).map_err(|e| RecordError::MalformedJson(e.to_string()))?;
    let obj = value.as_object().ok_or(RecordError::NotAnObject)?;
    for key in obj.keys() {
        if !FIELDS.contains(&key.as_str()) {
            return Err(RecordError::ExtraField(key.clone()));
        }
    }
    let fetch = |name: &'static str| -> Result<String, RecordError> {
        let value = obj.get(name).ok_or(RecordError::MissingField(name))?;
        let text = value.as_str().ok_or(RecordError::FieldNotString(name))?;
        if text.is_empty() {
            return Err(RecordError::EmptyField(name));
        }
        Ok(text.to_string())
    };
    let record = TranslationRecord {
        langcode: fetch("langcode")?,
        instruction: fetch("instruction")?,
        input: fetch("input")?,
        output: fetch("output")?,
    };
    parse_pair_code(&record.langcode).map_err(RecordError::BadLangcode)?;
    Ok(record)
}

/// Serialize one record to its canonical single-line JSON form (no trailing
/// newline; writers add `\n` per line).
pub fn serialize_record(record: &TranslationRecord) -> String {
    // Field order is fixed by the struct declaration; serde_json's compact
    // writer handles escaping.
    serde_json::to_string(record).expect("string-only struct cannot fail to serialize")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sample() -> TranslationRecord {
        TranslationRecord {
            langcode: "nyn-ach".to_string(),
            instruction:
                "Translate the following text to Acholi language. Return only the translated \
                 sentence only. Do not repeat the instruction."
                    .to_string(),
            input: "Bakakora omukoro gw'okusiiba".to_string(),
            output: "Gitimo tic me lworo".to_string(),
        }
    }

    #[test]
    fn canonical_line_is_byte_stable() {
        let line = serialize_record(&sample());
        assert_eq!(
            line,
            "{\"langcode\":\"nyn-ach\",\"instruction\":\"Translate the following text to \
             Acholi language. Return only the translated sentence only. Do not repeat the \
             instruction.\",\"input\":\"Bakakora omukoro gw'okusiiba\",\"output\":\"Gitimo \
             tic me lworo\"}"
        );
        // Round trip through the parser restores the identical value.
        assert_eq!(parse_record(&line).unwrap(), sample());
    }

    #[test]
    fn escaping_round_trips() {
        let record = TranslationRecord {
            langcode: "eng-hau".to_string(),
            instruction: "line\nbreak \"quoted\" tab\t\\backslash".to_string(),
            input: "unicode: ▁ é ɛ̃ 中".to_string(),
            output: "control \u{1} char".to_string(),
        };
        let line = serialize_record(&record);
        assert!(!line.contains('\n'), "canonical form is single-line");
        assert_eq!(parse_record(&line).unwrap(), record);
    }

    #[test]
    fn parse_rejects_structural_problems() {
        assert!(matches!(
            parse_record("{not json"),
            Err(RecordError::MalformedJson(_))
        ));
        assert!(matches!(
            parse_record("[1,2]"),
            Err(RecordError::NotAnObject)
        ));
        assert!(matches!(
            parse_record(r#"{"langcode":"eng-hau","instruction":"i","input":"x"}"#),
            Err(RecordError::MissingField("output"))
        ));
        assert!(matches!(
            parse_record(
                r#"{"langcode":"eng-hau","instruction":"i","input":"x","output":"y","extra":1}"#
            ),
            Err(RecordError::ExtraField(_))
        ));
        assert!(matches!(
            parse_record(r#"{"langcode":"eng-hau","instruction":"i","input":"","output":"y"}"#),
            Err(RecordError::EmptyField("input"))
        ));
        assert!(matches!(
            parse_record(r#"{"langcode":"eng-hau","instruction":"i","input":3,"output":"y"}"#),
            Err(RecordError::FieldNotString("input"))
        ));
        assert!(matches!(
            parse_record(r#"{"langcode":"englishhau","instruction":"i","input":"x","output":"y"}"#),
            Err(RecordError::BadLangcode(_))
        ));
        assert!(matches!(
            parse_record(r#"{"langcode":"eng-eng","instruction":"i","input":"x","output":"y"}"#),
            Err(RecordError::BadLangcode(_))
        ));
    }

    proptest! {
        #[test]
        fn round_trip_arbitrary_text(
            instruction in "\\PC{1,40}",
            input in "\\PC{1,40}",
            output in "\\PC{1,40}",
        ) {
            let record = TranslationRecord {
                langcode: "eng-hau".to_string(),
                instruction,
                input,
                output,
            };
            let line = serialize_record(&record);
            prop_assert!(!line.contains('\n'));
            prop_assert_eq!(parse_record(&line).unwrap(), record);
        }
    }
}
