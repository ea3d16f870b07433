//! Grid files and summary tables.
//!
//! A grid file is one ASCII header line
//!
//! ```text
//! smith-grid v1 kind=<flat|stereo:R> lo=a,b,c hi=a,b,c n=N d=D
//! ```
//!
//! followed by N³·D little-endian f64 values, point-major with point index
//! (i·N + j)·N + k and the D components of each point contiguous.

use std::io::{BufRead, Write};

use crate::{ChartDomain, ChartKind, FieldError, MapField, Result, TargetStructure};

const MAGIC: &str = "smith-grid v1";

pub fn write_grid<W: Write>(u: &MapField, mut w: W) -> Result<()> {
    let dom = u.domain();
    let kind = match dom.kind() {
        ChartKind::FlatBox => "flat".to_string(),
        ChartKind::StereoChart { radius } => format!("stereo:{radius:?}"),
    };
    let (lo, hi) = (dom.lo(), dom.hi());
    writeln!(
        w,
        "{MAGIC} kind={kind} lo={:?},{:?},{:?} hi={:?},{:?},{:?} n={} d={}",
        lo[0],
        lo[1],
        lo[2],
        hi[0],
        hi[1],
        hi[2],
        dom.resolution(),
        u.dim()
    )?;
    let d = u.dim();
    let mut buf = Vec::with_capacity(dom.len() * d * 8);
    for v in u.grid_values() {
        for c in &v[..d] {
            buf.extend_from_slice(&c.to_le_bytes());
        }
    }
    w.write_all(&buf)?;
    Ok(())
}

/// Reads a grid written by [`write_grid`] as a sampled field on `target`.
pub fn read_grid<R: BufRead>(mut r: R, target: TargetStructure) -> Result<MapField> {
    let mut header = String::new();
    r.read_line(&mut header)?;
    let rest = header
        .trim_end()
        .strip_prefix(MAGIC)
        .ok_or_else(|| FieldError::Format(format!("bad magic in {header:?}")))?;
    let mut kind = None;
    let (mut lo, mut hi, mut n, mut d) = (None, None, None, None);
    for field in rest.split_whitespace() {
        let (key, value) = field.split_once('=').ok_or_else(|| FieldError::Format(format!("bad field {field:?}")))?;
        match key {
            "kind" => kind = Some(parse_kind(value)?),
            "lo" => lo = Some(parse_point(value)?),
            "hi" => hi = Some(parse_point(value)?),
            "n" => n = Some(parse_usize(value)?),
            "d" => d = Some(parse_usize(value)?),
            _ => return Err(FieldError::Format(format!("unknown field {key:?}"))),
        }
    }
    let missing = |name: &str| FieldError::Format(format!("missing {name}"));
    let domain = ChartDomain::new(
        kind.ok_or_else(|| missing("kind"))?,
        lo.ok_or_else(|| missing("lo"))?,
        hi.ok_or_else(|| missing("hi"))?,
        n.ok_or_else(|| missing("n"))?,
    )?;
    let d = d.ok_or_else(|| missing("d"))?;
    if d != target.dim() {
        return Err(FieldError::Format(format!("file has d = {d}, target has {}", target.dim())));
    }
    let mut bytes = Vec::new();
    r.read_to_end(&mut bytes)?;
    if bytes.len() != domain.len() * d * 8 {
        return Err(FieldError::Format(format!("{} data bytes, expected {}", bytes.len(), domain.len() * d * 8)));
    }
    let values = bytes.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().expect("chunk of 8"))).collect();
    MapField::sampled(domain, target, values)
}

fn parse_kind(s: &str) -> Result<ChartKind> {
    match s.split_once(':') {
        None if s == "flat" => Ok(ChartKind::FlatBox),
        Some(("stereo", r)) => {
            Ok(ChartKind::StereoChart { radius: r.parse().map_err(|_| FieldError::Format(format!("radius {r:?}")))? })
        }
        _ => Err(FieldError::Format(format!("unknown chart kind {s:?}"))),
    }
}

fn parse_point(s: &str) -> Result<[f64; 3]> {
    let parts: Vec<f64> = s
        .split(',')
        .map(|p| p.parse::<f64>().map_err(|_| FieldError::Format(format!("bad number {p:?}"))))
        .collect::<Result<_>>()?;
    parts.try_into().map_err(|_| FieldError::Format(format!("expected three coordinates in {s:?}")))
}

fn parse_usize(s: &str) -> Result<usize> {
    s.parse().map_err(|_| FieldError::Format(format!("bad integer {s:?}")))
}

/// One row of a summary table.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub scenario: String,
    pub n: usize,
    pub quantity: String,
    pub value: f64,
}

impl SummaryRow {
    pub fn new(scenario: &str, n: usize, quantity: &str, value: f64) -> Self {
        Self { scenario: scenario.to_string(), n, quantity: quantity.to_string(), value }
    }
}

/// Writes `scenario,N,quantity,value` rows under a one-line header.
pub fn write_summary<W: Write>(rows: &[SummaryRow], w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    let io = |e: csv::Error| FieldError::Io(e.to_string());
    out.write_record(["scenario", "N", "quantity", "value"]).map_err(io)?;
    for r in rows {
        out.write_record([r.scenario.clone(), r.n.to_string(), r.quantity.clone(), format!("{:e}", r.value)])
            .map_err(io)?;
    }
    out.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::MAX_D;

    #[test]
    fn grid_round_trip() {
        let domain = ChartDomain::new(ChartKind::StereoChart { radius: 1.0 }, [-1.0, -0.5, 0.0], [1.0, 0.5, 0.25], 5)
            .unwrap();
        let target = TargetStructure::euclidean(2).unwrap();
        let u = MapField::analytic(domain, target.clone(), |x| {
            let mut v = [0.0; MAX_D];
            v[0] = x[0] + 0.1 * x[1];
            v[1] = (x[2] * 3.0).sin();
            v
        });
        let mut buf = Vec::new();
        write_grid(&u, &mut buf).unwrap();
        let back = read_grid(buf.as_slice(), target.clone()).unwrap();
        assert_eq!(back.domain(), u.domain());
        for i in 0..domain.len() {
            assert_eq!(back.grid_value(i), u.grid_value(i));
        }
        assert!(read_grid(&buf[..buf.len() - 1], target.clone()).is_err());
        assert!(read_grid(buf.as_slice(), TargetStructure::euclidean(3).unwrap()).is_err());
    }

    #[test]
    fn header_layout() {
        let domain = ChartDomain::cube(0.0, 1.0, 5).unwrap();
        let u = MapField::analytic(domain, TargetStructure::euclidean(1).unwrap(), |_| [0.0; MAX_D]);
        let mut buf = Vec::new();
        write_grid(&u, &mut buf).unwrap();
        let line = buf.split(|&b| b == b'\n').next().unwrap();
        assert_eq!(line, b"smith-grid v1 kind=flat lo=0.0,0.0,0.0 hi=1.0,1.0,1.0 n=5 d=1");
        assert_eq!(buf.len(), line.len() + 1 + 125 * 8);
    }

    #[test]
    fn summary_table() {
        let mut buf = Vec::new();
        write_summary(&[SummaryRow::new("s3-identity", 48, "energy", 19.5)], &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "scenario,N,quantity,value\ns3-identity,48,energy,1.95e1\n");
    }
}
