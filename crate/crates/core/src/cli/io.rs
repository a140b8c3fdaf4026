//! CSV input with a `value,group` header. Group labels are arbitrary strings;
//! the first label seen becomes group one.

use std::io::{Read, Write};
use std::path::Path;

use anyhow::{anyhow, bail, Context};

use crate::model::{Group, GroupedSample};

/// A parsed sample together with the original labels of groups one and two.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledSample {
    pub sample: GroupedSample,
    pub labels: [String; 2],
}

pub fn read_sample(path: &Path) -> anyhow::Result<LabeledSample> {
    let file = std::fs::File::open(path).with_context(|| format!("cannot open input file {}", path.display()))?;
    parse_sample(file).with_context(|| format!("failed to read {}", path.display()))
}

pub fn parse_sample<R: Read>(input: R) -> anyhow::Result<LabeledSample> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(input);
    let headers = reader.headers().context("missing header line")?.clone();
    let column = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| anyhow!("line 1: header must contain `value` and `group` columns, found `{}`", headers.iter().collect::<Vec<_>>().join(",")))
    };
    let (value_col, group_col) = (column("value")?, column("group")?);

    let mut labels: Vec<String> = Vec::with_capacity(2);
    let mut values = Vec::new();
    let mut allocations = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| match e.position() {
            Some(p) => anyhow!("line {}: {e}", p.line()),
            None => anyhow!(e),
        })?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        let raw = record.get(value_col).unwrap_or("");
        let value: f64 = raw
            .parse()
            .map_err(|_| anyhow!("line {line}: cannot parse `{raw}` as a number"))?;
        if !value.is_finite() {
            bail!("line {line}: value `{raw}` is not finite");
        }
        let label = record.get(group_col).unwrap_or("");
        if label.is_empty() {
            bail!("line {line}: empty group label");
        }
        let group = match labels.iter().position(|l| l == label) {
            Some(0) => Group::One,
            Some(_) => Group::Two,
            None if labels.len() < 2 => {
                labels.push(label.to_string());
                if labels.len() == 1 {
                    Group::One
                } else {
                    Group::Two
                }
            }
            None => bail!(
                "line {line}: third group label `{label}` (already have `{}` and `{}`)",
                labels[0],
                labels[1]
            ),
        };
        values.push(value);
        allocations.push(group);
    }
    if labels.len() < 2 {
        bail!("input must contain observations from two groups, found {}", labels.len());
    }
    let sample = GroupedSample::new(values, allocations)?;
    Ok(LabeledSample {
        sample,
        labels: [labels[0].clone(), labels[1].clone()],
    })
}

pub fn write_sample<W: Write>(out: W, sample: &GroupedSample, labels: &[String; 2]) -> anyhow::Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(["value", "group"])?;
    for (v, g) in sample.values().iter().zip(sample.allocations()) {
        writer.write_record([v.to_string(), labels[g.index()].clone()])?;
    }
    writer.flush()?;
    Ok(())
}
