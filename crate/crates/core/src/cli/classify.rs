use std::path::Path;

use super::{emit, exit, read_input, write_output, Cli, CliError, Report, RunManifest};
use crate::classifier::{classify, SurfaceDescriptor};

pub(super) fn run(cli: &Cli, input: &Path) -> Result<i32, CliError> {
    let bytes = read_input(input)?;
    let text = String::from_utf8(bytes.clone()).map_err(|_| CliError::new(exit::USAGE, "descriptor is not UTF-8"))?;
    let de = &mut serde_json::Deserializer::from_str(&text);
    let desc: SurfaceDescriptor = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        CliError::new(exit::USAGE, format!("schema violation at `{path}`: {}", e.inner()))
    })?;
    let verdict = classify(&desc).map_err(|e| match e.field_path() {
        Some(f) => CliError::new(exit::USAGE, format!("at `{f}`: {e}")),
        None => CliError::new(exit::USAGE, e.to_string()),
    })?;
    let manifest = RunManifest::new("classify", cli.seed.unwrap_or(0), serde_json::to_value(&desc).unwrap())
        .with_input("descriptor", &bytes);
    let json = Report::new(&manifest, &verdict).to_json();
    write_output(cli, "verdict.json", json.as_bytes())?;
    emit(cli, &json, || verdict.render_text());
    Ok(verdict.outcome.exit_code())
}
