use std::fmt::Debug;

use burnside_witt::group::GroupError;
use burnside_witt::ring::RingError;
use burnside_witt::spans::SpanError;
use burnside_witt::tower::TowerError;
use burnside_witt::witt::WittError;
use serde_json::{json, Value};

/// Everything a command can fail with. `Usage` exits with status 2, the
/// rest with status 1.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Input(String),
    Group(GroupError),
    Ring(RingError),
    Witt(WittError),
    Span(SpanError),
    Tower(TowerError),
}

impl From<GroupError> for CliError {
    fn from(e: GroupError) -> Self {
        CliError::Group(e)
    }
}

impl From<RingError> for CliError {
    fn from(e: RingError) -> Self {
        CliError::Ring(e)
    }
}

impl From<WittError> for CliError {
    fn from(e: WittError) -> Self {
        match e {
            WittError::Group(g) => CliError::Group(g),
            WittError::Ring(r) => CliError::Ring(r),
            other => CliError::Witt(other),
        }
    }
}

impl From<SpanError> for CliError {
    fn from(e: SpanError) -> Self {
        CliError::Span(e)
    }
}

impl From<TowerError> for CliError {
    fn from(e: TowerError) -> Self {
        match e {
            TowerError::Group(g) => CliError::Group(g),
            TowerError::Witt(w) => w.into(),
            other => CliError::Tower(other),
        }
    }
}

/// Variant name from the derived `Debug` output.
fn variant<E: Debug>(e: &E) -> String {
    format!("{e:?}").chars().take_while(|c| c.is_alphanumeric()).collect()
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }

    pub fn to_json(&self) -> Value {
        let (module, kind, message) = match self {
            CliError::Usage(m) => ("cli", "Usage".to_string(), m.clone()),
            CliError::Input(m) => ("cli", "Input".to_string(), m.clone()),
            CliError::Group(e) => ("group", variant(e), e.to_string()),
            CliError::Ring(e) => ("ring", variant(e), e.to_string()),
            CliError::Witt(e) => ("witt", variant(e), e.to_string()),
            CliError::Span(e) => ("spans", variant(e), e.to_string()),
            CliError::Tower(e) => ("tower", variant(e), e.to_string()),
        };
        let mut err = json!({"module": module, "kind": kind, "message": message});
        match self {
            CliError::Witt(WittError::NotIntegral { class, value, divisor }) => {
                err["class"] = json!(class);
                err["value"] = json!(value);
                err["divisor"] = json!(divisor);
            }
            CliError::Group(GroupError::NotClosed { lower, upper }) => {
                err["lower"] = json!(format!("c{lower}"));
                err["upper"] = json!(format!("c{upper}"));
            }
            _ => {}
        }
        json!({ "error": err })
    }
}
