//! File formats: the polygon text format, best-known distance tables,
//! generator matrix dumps and the CSV surfaces.

use std::fs::File;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use anyhow::{bail, Context, Result};
use toricode_core::code::GeneratorMatrix;
use toricode_core::dist::DistanceTable;
use toricode_core::polygon::{format_polygon, parse_vertex_list};
use toricode_core::Polygon;

/// One polygon per line as `[[x1,y1],[x2,y2],...]`; `#` lines are comments.
/// Ids are 1-based over the polygon lines (not raw file lines).
pub fn parse_polygon_reader(reader: impl Read) -> Result<Vec<(String, Polygon)>> {
    let mut out = Vec::new();
    let mut id = 0usize;
    for (lineno, line) in BufReader::new(reader).lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        id += 1;
        let points = parse_vertex_list(trimmed)
            .with_context(|| format!("line {}", lineno + 1))?;
        let polygon = Polygon::hull(&points)
            .with_context(|| format!("line {}: polygon is degenerate", lineno + 1))?;
        out.push((id.to_string(), polygon));
    }
    Ok(out)
}

pub fn parse_polygon_file(path: &Path) -> Result<Vec<(String, Polygon)>> {
    let file = File::open(path).with_context(|| format!("open {}", path.display()))?;
    parse_polygon_reader(file).with_context(|| format!("parse {}", path.display()))
}

pub fn write_polygons<'a>(
    w: &mut impl Write,
    polygons: impl Iterator<Item = &'a Polygon>,
) -> Result<()> {
    for p in polygons {
        writeln!(w, "{}", format_polygon(p))?;
    }
    Ok(())
}

/// Best-known distances as CSV `q,n,k,d` with an optional header row.
pub fn parse_distance_table(reader: impl Read) -> Result<DistanceTable> {
    let mut table = DistanceTable::new();
    for (lineno, line) in BufReader::new(reader).lines().enumerate() {
        let line = line?;
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') || t.starts_with("q,") {
            continue;
        }
        let fields: Vec<&str> = t.split(',').map(str::trim).collect();
        if fields.len() != 4 {
            bail!("line {}: expected q,n,k,d", lineno + 1);
        }
        let q: u16 = fields[0].parse().with_context(|| format!("line {}", lineno + 1))?;
        let n: u32 = fields[1].parse().with_context(|| format!("line {}", lineno + 1))?;
        let k: u32 = fields[2].parse().with_context(|| format!("line {}", lineno + 1))?;
        let d: u32 = fields[3].parse().with_context(|| format!("line {}", lineno + 1))?;
        if d == 0 || d > n {
            bail!("line {}: d must satisfy 1 <= d <= n", lineno + 1);
        }
        table.insert(q, n, k, d);
    }
    Ok(table)
}

pub fn load_distance_table(path: &Path) -> Result<DistanceTable> {
    let file = File::open(path).with_context(|| format!("open {}", path.display()))?;
    parse_distance_table(file).with_context(|| format!("parse {}", path.display()))
}

/// Matrix dump: header `q,n,k` then `k` rows of `n` integer codes.
pub fn write_matrix(w: &mut impl Write, g: &GeneratorMatrix) -> Result<()> {
    writeln!(w, "{},{},{}", g.q(), g.n(), g.k())?;
    for row in g.rows() {
        let text: Vec<String> = row.iter().map(|e| e.to_string()).collect();
        writeln!(w, "{}", text.join(" "))?;
    }
    Ok(())
}

/// Either stdout or a file, chosen by `--out`.
pub fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(File::create(p).with_context(|| format!("create {}", p.display()))?),
        None => Box::new(std::io::stdout().lock()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_skips_comments_and_numbers_lines() {
        let text = "# header\n[[0,0],[1,0],[0,1]]\n\n[[0,0],[2,0],[0,2]]\n";
        let polys = parse_polygon_reader(text.as_bytes()).unwrap();
        assert_eq!(polys.len(), 2);
        assert_eq!(polys[0].0, "1");
        assert_eq!(polys[1].0, "2");
        assert_eq!(polys[1].1.normalized_volume(), 4);
    }

    #[test]
    fn parse_reports_line_numbers() {
        let text = "[[0,0],[1,0],[0,1]]\n[[0,0],[1,0]]\n";
        let err = parse_polygon_reader(text.as_bytes()).unwrap_err();
        assert!(format!("{err:#}").contains("line 2"));
    }

    #[test]
    fn round_trip_is_identity_on_canonical_files() {
        let text = "[[0,0],[1,0],[0,1]]\n[[0,0],[2,0],[2,2],[0,2]]\n";
        let polys = parse_polygon_reader(text.as_bytes()).unwrap();
        let mut buf = Vec::new();
        write_polygons(&mut buf, polys.iter().map(|(_, p)| p)).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), text);
    }

    #[test]
    fn distance_table_parsing() {
        let text = "q,n,k,d\n7,36,19,11\n5,16,5,8\n";
        let table = parse_distance_table(text.as_bytes()).unwrap();
        assert_eq!(table.get(7, 36, 19), Some(11));
        assert_eq!(table.get(5, 16, 5), Some(8));
        assert_eq!(table.get(2, 1, 1), None);
        assert!(parse_distance_table("7,36,19".as_bytes()).is_err());
        assert!(parse_distance_table("7,36,19,40".as_bytes()).is_err());
    }
}
