//! Validation items: the questions a reviewer works through before
//! accepting or rejecting a candidate, each tied to an evidence evaluator.

mod evidence;

use serde::{Deserialize, Serialize};

use crate::smell::SmellKind;

pub use evidence::{
    evaluate_evidence, evaluate_item, finding_from_metrics, EvidenceError, EvidenceResult, Fact,
    Finding,
};

pub const CATALOG_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// The tool computes a yes/no finding.
    Auto,
    /// The tool shows facts but leaves the answer open.
    Assistive,
    /// Only a human can answer; facts are context.
    Judgment,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Answer {
    Yes,
    No,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ValidationItem {
    pub id: &'static str,
    pub smell: SmellKind,
    pub text: &'static str,
    pub mode: Mode,
    /// The answer that supports accepting the smell.
    pub polarity: Answer,
    /// True for items not transcribed from the published table.
    pub derived: bool,
}

const fn item(
    id: &'static str,
    smell: SmellKind,
    text: &'static str,
    mode: Mode,
    polarity: Answer,
    derived: bool,
) -> ValidationItem {
    ValidationItem {
        id,
        smell,
        text,
        mode,
        polarity,
        derived,
    }
}

use Answer::{No, Yes};
use Mode::{Assistive, Auto, Judgment};
use SmellKind::*;

static ITEMS: [ValidationItem; 26] = [
    item("DC-1", DataClass, "Does the class have other methods than getters and setters?", Auto, No, false),
    item("DC-2", DataClass, "Does the class have other methods than its constructor?", Auto, No, false),
    item("DC-3", DataClass, "Is the class data being externally manipulated?", Auto, Yes, false),
    item("FE-1", FeatureEnvy, "Does the method call external methods too frequently?", Auto, Yes, false),
    item(
        "FE-2",
        FeatureEnvy,
        "Can you visualize an alternative implementation of this method focused on manipulating its own data?",
        Judgment,
        Yes,
        false,
    ),
    item("GC-1", GodClass, "Does the class have clear responsibilities from other classes?", Judgment, No, false),
    item(
        "GC-2",
        GodClass,
        "Does it make sense for you to split this class into two or more classes?",
        Judgment,
        Yes,
        false,
    ),
    item("GC-3", GodClass, "Does the class size hinder its readability/comprehensibility?", Assistive, Yes, false),
    item("LPL-1", LongParameterList, "Does the method signature have too many parameters?", Auto, Yes, false),
    item("LPL-2", LongParameterList, "Are there too many parameters composed of complex types?", Auto, Yes, false),
    item(
        "LPL-3",
        LongParameterList,
        "Do the parameters' names contribute to reaching a clear understanding of their purpose?",
        Judgment,
        No,
        false,
    ),
    item("LPL-4", LongParameterList, "Does the method actually use all its parameters?", Auto, No, false),
    item("LPL-5", LongParameterList, "Are all parameters actually needed?", Judgment, No, false),
    item("LPL-6", LongParameterList, "May the parameters be passed more simply?", Judgment, Yes, false),
    item("MM-1", MiddleMan, "Does the class perform any relevant logical task?", Judgment, No, false),
    item("MM-2", MiddleMan, "Does the class clearly delegate its responsibilities to other classes?", Auto, Yes, false),
    item(
        "PO-1",
        PrimitiveObsession,
        "Does replacing one or more primitive variables with objects sound to be the best choice?",
        Judgment,
        Yes,
        false,
    ),
    item(
        "PO-2",
        PrimitiveObsession,
        "May two or more variables be consolidated into a single complex type?",
        Judgment,
        Yes,
        false,
    ),
    item("RB-1", RefusedBequest, "Does the inheritance conceptually make sense?", Judgment, No, false),
    item("RB-2", RefusedBequest, "Does the class inherit methods never used?", Auto, Yes, false),
    item(
        "RB-3",
        RefusedBequest,
        "Does the class inherit methods that are not adherent with its definition?",
        Judgment,
        Yes,
        false,
    ),
    item("RB-4", RefusedBequest, "Are there too many methods being overridden?", Auto, Yes, false),
    item("SG-1", SpeculativeGenerality, "Does the class lack any concrete methods?", Auto, Yes, true),
    item(
        "SG-2",
        SpeculativeGenerality,
        "Is the inheritance relationship actually needed today?",
        Judgment,
        No,
        true,
    ),
    item(
        "SG-3",
        SpeculativeGenerality,
        "Is the element used anywhere outside its own declaration?",
        Auto,
        No,
        true,
    ),
    item(
        "SG-4",
        SpeculativeGenerality,
        "Does the element carry responsibilities beyond accommodating future features?",
        Judgment,
        No,
        true,
    ),
];

/// Every item, grouped by smell in catalog order.
pub fn all_items() -> &'static [ValidationItem] {
    &ITEMS
}

/// Items for one smell, in table order.
pub fn items_for(smell: SmellKind) -> Vec<&'static ValidationItem> {
    ITEMS.iter().filter(|i| i.smell == smell).collect()
}

/// Items for a smell given by name or item prefix.
pub fn items_for_name(name: &str) -> Result<Vec<&'static ValidationItem>, crate::smell::UnknownSmellKind> {
    Ok(items_for(name.parse()?))
}

pub fn find_item(id: &str) -> Option<&'static ValidationItem> {
    ITEMS.iter().find(|i| i.id == id)
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CatalogExport {
    pub schema_version: u32,
    pub items: &'static [ValidationItem],
}

pub fn catalog_export() -> CatalogExport {
    CatalogExport {
        schema_version: CATALOG_SCHEMA_VERSION,
        items: all_items(),
    }
}

/// `catalog.json` contents.
pub fn catalog_json() -> String {
    let mut s = serde_json::to_string_pretty(&catalog_export()).expect("catalog serializes");
    s.push('\n');
    s
}

/// Tab-separated `id<TAB>text` lines, one per item.
pub fn catalog_tsv() -> String {
    ITEMS
        .iter()
        .map(|i| format!("{}\t{}\n", i.id, i.text))
        .collect()
}
