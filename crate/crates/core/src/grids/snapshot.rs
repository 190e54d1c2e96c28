//! Field snapshot container: magic line, one JSON header line, then raw
//! little-endian f64 values (component-major, each component row-major).

use super::domain::{Axis, Domain, DomainKind};
use super::field::ScalarField;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::io::{BufRead, BufReader, Read, Write};

pub const MAGIC: &str = "FLXFIELD1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SnapshotHeader {
    pub kind: DomainKind,
    pub axes: Vec<Axis>,
    pub spacing: Vec<f64>,
    pub time_tag: f64,
    pub components: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub header: SnapshotHeader,
    pub fields: Vec<ScalarField>,
}

impl Snapshot {
    pub fn new(named: &[(&str, &ScalarField)]) -> Result<Self> {
        let first = named
            .first()
            .ok_or_else(|| Error::Format("snapshot needs at least one field".into()))?
            .1;
        if named.iter().any(|(_, f)| f.domain != first.domain) {
            return Err(Error::Format(
                "all snapshot fields must share one grid".into(),
            ));
        }
        let d = &first.domain;
        Ok(Self {
            header: SnapshotHeader {
                kind: d.kind,
                axes: d.axes.clone(),
                spacing: d.spacing(),
                time_tag: first.time,
                components: named.iter().map(|(n, _)| n.to_string()).collect(),
            },
            fields: named.iter().map(|(_, f)| (*f).clone()).collect(),
        })
    }

    pub fn write<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "{MAGIC}")?;
        let header =
            serde_json::to_string(&self.header).map_err(|e| Error::Format(e.to_string()))?;
        writeln!(w, "{header}")?;
        for f in &self.fields {
            for v in &f.values {
                w.write_all(&v.to_le_bytes())?;
            }
        }
        Ok(())
    }

    pub fn read<R: Read>(r: R) -> Result<Self> {
        let mut r = BufReader::new(r);
        let mut line = String::new();
        r.read_line(&mut line)?;
        if line.trim_end() != MAGIC {
            return Err(Error::Format(format!(
                "bad magic line {:?}",
                line.trim_end()
            )));
        }
        line.clear();
        r.read_line(&mut line)?;
        let header: SnapshotHeader =
            serde_json::from_str(line.trim_end()).map_err(|e| Error::Format(e.to_string()))?;
        let domain = Domain {
            kind: header.kind,
            axes: header.axes.clone(),
        };
        domain.validate()?;
        let n = domain.len();
        let mut fields = Vec::with_capacity(header.components.len());
        let mut buf = [0u8; 8];
        for _ in &header.components {
            let mut values = Vec::with_capacity(n);
            for _ in 0..n {
                r.read_exact(&mut buf)
                    .map_err(|_| Error::Format("truncated value block".into()))?;
                values.push(f64::from_le_bytes(buf));
            }
            fields.push(ScalarField::new(domain.clone(), values, header.time_tag)?);
        }
        let mut rest = Vec::new();
        r.read_to_end(&mut rest)?;
        if !rest.is_empty() {
            return Err(Error::Format(format!("{} trailing bytes", rest.len())));
        }
        Ok(Self { header, fields })
    }

    pub fn field(&self, name: &str) -> Option<&ScalarField> {
        self.header
            .components
            .iter()
            .position(|c| c == name)
            .map(|k| &self.fields[k])
    }

    pub fn save(&self, path: &std::path::Path) -> Result<()> {
        let f = std::fs::File::create(path)?;
        let mut w = std::io::BufWriter::new(f);
        self.write(&mut w)?;
        w.flush()?;
        Ok(())
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        Self::read(std::fs::File::open(path)?)
    }
}
