use serde::{Deserialize, Serialize};

use super::{allocate, JunctionConvention, TrafficConfig, TrafficError};

/// On-disk form. Exactly one of `a` and `density` must be present.
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigDocument {
    n: Option<usize>,
    m: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    a: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    density: Option<f64>,
    #[serde(default)]
    convention: Option<JunctionConvention>,
}

/// Parses a JSON configuration document.
///
/// `{"n":4,"m":3,"a":[...]}` gives the arc values explicitly;
/// `{"n":4,"m":3,"density":0.25}` routes through [`allocate`].
pub fn parse_config(text: &str) -> Result<TrafficConfig, TrafficError> {
    let doc: ConfigDocument = serde_json::from_str(text)?;
    let n = doc
        .n
        .ok_or_else(|| TrafficError::MissingField("n".into()))?;
    let m = doc
        .m
        .ok_or_else(|| TrafficError::MissingField("m".into()))?;
    let convention = doc.convention.unwrap_or_default();
    let config = match (doc.a, doc.density) {
        (Some(_), Some(_)) => {
            return Err(TrafficError::ConflictingFields(
                "a".into(),
                "density".into(),
            ))
        }
        (None, None) => return Err(TrafficError::MissingField("a or density".into())),
        (Some(a), None) => TrafficConfig::new(n, m, a)?,
        (None, Some(d)) => allocate(n, m, d)?,
    };
    Ok(config.with_convention(convention))
}

/// Writes the explicit form, which [`parse_config`] reads back unchanged.
pub fn serialize_config(config: &TrafficConfig) -> String {
    let doc = ConfigDocument {
        n: Some(config.n),
        m: Some(config.m),
        a: Some(config.a.clone()),
        density: None,
        convention: Some(config.convention),
    };
    serde_json::to_string_pretty(&doc).expect("config document always serializes")
}
