//! CSV and JSON encodings of fields, contour sets and residual reports.
//!
//! Every document carries the [`RunConfig`] that produced it. Floats in CSV
//! bodies use 17 significant digits so that they read back bit for bit.

use std::fmt::Write as _;
use std::path::Path;

use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use psiflow_core::{ContourSet, Field, Grid, Quantity};

use crate::solution::SolutionSpec;
use crate::CliError;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

/// What was asked for. The output path is left out so that the same run
/// written to two places gives the same bytes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub solution: Option<SolutionSpec>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub input: Option<String>,
    pub grid: Option<Grid>,
    pub times: Vec<f64>,
    pub quantity: Quantity,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub levels: Option<LevelSpec>,
    pub format: Format,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub seed: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LevelSpec {
    Count(usize),
    Values(Vec<f64>),
}

fn sci(v: f64) -> String {
    format!("{v:.16e}")
}

fn csv_error(e: csv::Error) -> CliError {
    CliError::Config(format!("csv: {e}"))
}

fn header(kind: &str, config: &RunConfig) -> Result<String, CliError> {
    let mut s = String::new();
    writeln!(s, "# psiflow {kind}").unwrap();
    writeln!(s, "# config: {}", serde_json::to_string(config)?).unwrap();
    Ok(s)
}

fn csv_body(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).map_err(csv_error)?;
    for r in rows {
        w.write_record(&r).map_err(csv_error)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Config(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

#[derive(Serialize, Deserialize)]
struct FieldDoc {
    config: RunConfig,
    field: Field,
}

#[derive(Serialize, Deserialize)]
struct ContourDoc {
    config: RunConfig,
    t: f64,
    contours: Vec<ContourSet>,
}

/// Row-major `x,y,value`, masked nodes spelled `masked`.
pub fn encode_field(field: &Field, config: &RunConfig, format: Format) -> Result<String, CliError> {
    match format {
        Format::Json => {
            let doc = FieldDoc {
                config: config.clone(),
                field: field.clone(),
            };
            Ok(serde_json::to_string_pretty(&doc)? + "\n")
        }
        Format::Csv => {
            let mut s = header("field", config)?;
            writeln!(s, "# grid: {}", field.grid).unwrap();
            writeln!(s, "# t: {}", sci(field.t)).unwrap();
            writeln!(s, "# quantity: {}", field.quantity).unwrap();
            let g = field.grid;
            let rows = (0..g.len()).map(|idx| {
                let (i, j) = g.node(idx);
                vec![
                    sci(g.x(i)),
                    sci(g.y(j)),
                    field.values[idx].map_or_else(|| "masked".to_string(), sci),
                ]
            });
            s.push_str(&csv_body(&["x", "y", "value"], rows)?);
            Ok(s)
        }
    }
}

/// Columns `level,polyline,closed,index,x,y`, one row per vertex. The full
/// level list is kept in a comment so empty sets survive.
pub fn encode_contours(sets: &[ContourSet], t: f64, config: &RunConfig, format: Format) -> Result<String, CliError> {
    match format {
        Format::Json => {
            let doc = ContourDoc {
                config: config.clone(),
                t,
                contours: sets.to_vec(),
            };
            Ok(serde_json::to_string_pretty(&doc)? + "\n")
        }
        Format::Csv => {
            let mut s = header("contours", config)?;
            writeln!(s, "# t: {}", sci(t)).unwrap();
            let levels: Vec<String> = sets.iter().map(|c| sci(c.level)).collect();
            writeln!(s, "# levels: {}", levels.join(" ")).unwrap();
            let mut rows = Vec::new();
            for set in sets {
                for (k, p) in set.polylines.iter().enumerate() {
                    for (idx, &(x, y)) in p.points.iter().enumerate() {
                        rows.push(vec![
                            sci(set.level),
                            k.to_string(),
                            (p.closed as u8).to_string(),
                            idx.to_string(),
                            sci(x),
                            sci(y),
                        ]);
                    }
                }
            }
            s.push_str(&csv_body(&["level", "polyline", "closed", "index", "x", "y"], rows)?);
            Ok(s)
        }
    }
}

fn comment_value<'a>(text: &'a str, key: &str) -> Option<&'a str> {
    let prefix = format!("# {key}: ");
    text.lines()
        .take_while(|l| l.starts_with('#'))
        .find_map(|l| l.strip_prefix(prefix.as_str()))
}

fn parse_f64(s: &str, what: &str) -> Result<f64, CliError> {
    s.trim()
        .parse()
        .map_err(|_| CliError::Config(format!("bad {what} `{s}`")))
}

/// Reads back a field written by [`encode_field`] in either format.
pub fn decode_field(text: &str) -> Result<(Option<RunConfig>, Field), CliError> {
    if text.trim_start().starts_with('{') {
        let doc: FieldDoc = serde_json::from_str(text)?;
        if doc.field.values.len() != doc.field.grid.len() {
            return Err(CliError::Config("field size does not match its grid".into()));
        }
        return Ok((Some(doc.config), doc.field));
    }
    let missing = |k: &str| CliError::Config(format!("field file lacks `# {k}:` line"));
    let config = comment_value(text, "config")
        .map(serde_json::from_str::<RunConfig>)
        .transpose()?;
    let grid: Grid = comment_value(text, "grid").ok_or_else(|| missing("grid"))?.parse()?;
    let t = parse_f64(comment_value(text, "t").ok_or_else(|| missing("t"))?, "time")?;
    let quantity: Quantity = comment_value(text, "quantity")
        .ok_or_else(|| missing("quantity"))?
        .parse()?;

    let mut r = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let mut values = Vec::with_capacity(grid.len());
    for rec in r.records() {
        let rec = rec.map_err(csv_error)?;
        let v = rec.get(2).ok_or_else(|| CliError::Config("row without value".into()))?;
        values.push(match v {
            "masked" => None,
            v => Some(parse_f64(v, "value")?),
        });
    }
    if values.len() != grid.len() {
        return Err(CliError::Config(format!(
            "field has {} rows, grid {grid} needs {}",
            values.len(),
            grid.len()
        )));
    }
    Ok((
        config,
        Field {
            grid,
            t,
            quantity,
            values,
        },
    ))
}

/// Reads back contour sets written by [`encode_contours`].
pub fn decode_contours(text: &str) -> Result<Vec<ContourSet>, CliError> {
    if text.trim_start().starts_with('{') {
        let doc: ContourDoc = serde_json::from_str(text)?;
        return Ok(doc.contours);
    }
    let levels = comment_value(text, "levels").ok_or_else(|| CliError::Config("contour file lacks levels".into()))?;
    let mut sets: Vec<ContourSet> = levels
        .split_whitespace()
        .map(|l| {
            Ok(ContourSet {
                level: parse_f64(l, "level")?,
                polylines: Vec::new(),
            })
        })
        .collect::<Result<_, CliError>>()?;
    let mut r = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    for rec in r.records() {
        let rec = rec.map_err(csv_error)?;
        let get = |k: usize| rec.get(k).ok_or_else(|| CliError::Config("short contour row".into()));
        let level = parse_f64(get(0)?, "level")?;
        let poly: usize = get(1)?.parse().map_err(|_| CliError::Config("bad polyline index".into()))?;
        let closed = get(2)? == "1";
        let point = (parse_f64(get(4)?, "x")?, parse_f64(get(5)?, "y")?);
        let set = sets
            .iter_mut()
            .find(|s| s.level.to_bits() == level.to_bits())
            .ok_or_else(|| CliError::Config(format!("row level {level} not in the level list")))?;
        if set.polylines.len() == poly {
            set.polylines.push(psiflow_core::Polyline {
                points: Vec::new(),
                closed,
            });
        }
        set.polylines
            .get_mut(poly)
            .ok_or_else(|| CliError::Config("polyline rows out of order".into()))?
            .points
            .push(point);
    }
    Ok(sets)
}

pub fn write_or_print(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Io(format!("{}: {e}", p.display()))),
        None => {
            use std::io::Write;
            let mut o = std::io::stdout().lock();
            o.write_all(text.as_bytes())
                .and_then(|_| o.flush())
                .map_err(|e| CliError::Io(e.to_string()))
        }
    }
}

pub fn read_text(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}
