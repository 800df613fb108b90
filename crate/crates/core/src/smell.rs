//! The eight smell kinds a candidate can be reported for.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// Smell kinds, in catalog order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum SmellKind {
    DataClass,
    FeatureEnvy,
    GodClass,
    LongParameterList,
    MiddleMan,
    PrimitiveObsession,
    RefusedBequest,
    SpeculativeGenerality,
}

impl SmellKind {
    pub const ALL: [SmellKind; 8] = [
        SmellKind::DataClass,
        SmellKind::FeatureEnvy,
        SmellKind::GodClass,
        SmellKind::LongParameterList,
        SmellKind::MiddleMan,
        SmellKind::PrimitiveObsession,
        SmellKind::RefusedBequest,
        SmellKind::SpeculativeGenerality,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SmellKind::DataClass => "DataClass",
            SmellKind::FeatureEnvy => "FeatureEnvy",
            SmellKind::GodClass => "GodClass",
            SmellKind::LongParameterList => "LongParameterList",
            SmellKind::MiddleMan => "MiddleMan",
            SmellKind::PrimitiveObsession => "PrimitiveObsession",
            SmellKind::RefusedBequest => "RefusedBequest",
            SmellKind::SpeculativeGenerality => "SpeculativeGenerality",
        }
    }

    /// Human label, e.g. "Long Parameter List".
    pub fn label(self) -> &'static str {
        match self {
            SmellKind::DataClass => "Data Class",
            SmellKind::FeatureEnvy => "Feature Envy",
            SmellKind::GodClass => "God Class",
            SmellKind::LongParameterList => "Long Parameter List",
            SmellKind::MiddleMan => "Middle Man",
            SmellKind::PrimitiveObsession => "Primitive Obsession",
            SmellKind::RefusedBequest => "Refused Bequest",
            SmellKind::SpeculativeGenerality => "Speculative Generality",
        }
    }

    /// Prefix used by validation item ids.
    pub fn item_prefix(self) -> &'static str {
        match self {
            SmellKind::DataClass => "DC",
            SmellKind::FeatureEnvy => "FE",
            SmellKind::GodClass => "GC",
            SmellKind::LongParameterList => "LPL",
            SmellKind::MiddleMan => "MM",
            SmellKind::PrimitiveObsession => "PO",
            SmellKind::RefusedBequest => "RB",
            SmellKind::SpeculativeGenerality => "SG",
        }
    }
}

impl fmt::Display for SmellKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown smell kind `{0}`")]
pub struct UnknownSmellKind(pub String);

impl FromStr for SmellKind {
    type Err = UnknownSmellKind;

    /// Accepts the canonical name, the item prefix, or the label with any
    /// spacing/casing (`long-parameter-list`, `LPL`, `Long Parameter List`).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let folded: String = s
            .chars()
            .filter(|c| c.is_ascii_alphanumeric())
            .map(|c| c.to_ascii_lowercase())
            .collect();
        SmellKind::ALL
            .into_iter()
            .find(|k| {
                k.name().to_ascii_lowercase() == folded
                    || k.item_prefix().to_ascii_lowercase() == folded
            })
            .ok_or_else(|| UnknownSmellKind(s.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_names_prefixes_and_labels() {
        assert_eq!("DataClass".parse::<SmellKind>().unwrap(), SmellKind::DataClass);
        assert_eq!("lpl".parse::<SmellKind>().unwrap(), SmellKind::LongParameterList);
        assert_eq!(
            "refused-bequest".parse::<SmellKind>().unwrap(),
            SmellKind::RefusedBequest
        );
        assert_eq!(
            "Middle Man".parse::<SmellKind>().unwrap(),
            SmellKind::MiddleMan
        );
        assert!("LongMethod".parse::<SmellKind>().is_err());
    }
}
