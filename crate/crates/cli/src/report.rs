use serde::Serialize;
use serde_json::{json, Value};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Serialize)]
pub struct Certificate {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<Value>,
}

impl Certificate {
    pub fn check(name: &str, passed: bool) -> Self {
        Certificate { name: name.into(), passed, value: None }
    }

    pub fn with_value(name: &str, passed: bool, value: impl Serialize) -> Self {
        Certificate { name: name.into(), passed, value: Some(json!(value)) }
    }
}

/// What a command produced: JSON payload, or a CSV table when `--csv` was asked for.
pub enum Output {
    Json { input: Value, output: Value, certificates: Vec<Certificate> },
    Csv { header: Vec<String>, rows: Vec<Vec<String>>, ok: bool },
}

impl Output {
    pub fn json(input: Value, output: impl Serialize, certificates: Vec<Certificate>) -> Self {
        Output::Json { input, output: json!(output), certificates }
    }

    pub fn passed(&self) -> bool {
        match self {
            Output::Json { certificates, .. } => certificates.iter().all(|c| c.passed),
            Output::Csv { ok, .. } => *ok,
        }
    }
}

pub fn envelope(command: &str, input: Value, output: Value, certificates: Vec<Certificate>) -> Value {
    json!({
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "input": input,
        "output": output,
        "certificates": certificates,
    })
}

pub fn write_csv(header: &[String], rows: &[Vec<String>]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(std::io::stdout().lock());
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    w.flush()?;
    Ok(())
}
