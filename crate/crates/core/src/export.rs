//! Geometry file writers: Geomview VECT and OBJ polylines.
//!
//! Coordinates are written with 17 significant digits, enough to round-trip
//! IEEE doubles bit-exactly through the decimal encoding.

use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::geometry::Polyline3;

/// Writes a multi-component VECT file. Closed components are flagged with a
/// negative vertex count, as Geomview expects.
pub fn write_vect<W: Write>(mut w: W, components: &[Polyline3]) -> Result<()> {
    let total_vertices: usize = components.iter().map(|c| c.vertices.len()).sum();
    writeln!(w, "VECT")?;
    writeln!(w, "{} {} 0", components.len(), total_vertices)?;
    let counts: Vec<String> = components
        .iter()
        .map(|c| {
            let n = c.vertices.len() as i64;
            if c.closed { (-n).to_string() } else { n.to_string() }
        })
        .collect();
    writeln!(w, "{}", counts.join(" "))?;
    writeln!(
        w,
        "{}",
        components.iter().map(|_| "0").collect::<Vec<_>>().join(" ")
    )?;
    for c in components {
        for v in &c.vertices {
            writeln!(w, "{:.16e} {:.16e} {:.16e}", v[0], v[1], v[2])?;
        }
    }
    Ok(())
}

pub fn write_vect_file(path: &Path, components: &[Polyline3]) -> Result<()> {
    let f = std::fs::File::create(path)?;
    write_vect(std::io::BufWriter::new(f), components)
}

/// Reads a VECT file written by `write_vect` (colors are skipped).
pub fn read_vect<R: Read>(r: R) -> Result<Vec<Polyline3>> {
    let reader = BufReader::new(r);
    let mut tokens: Vec<String> = Vec::new();
    let mut lines = reader.lines();
    match lines.next() {
        Some(Ok(header)) if header.trim() == "VECT" => {}
        _ => return Err(Error::Parse("missing VECT header".into())),
    }
    for line in lines {
        let line = line?;
        tokens.extend(line.split_whitespace().map(str::to_owned));
    }
    let mut it = tokens.into_iter();
    let mut next_num = |what: &str| -> Result<f64> {
        it.next()
            .ok_or_else(|| Error::Parse(format!("unexpected end of file reading {what}")))?
            .parse::<f64>()
            .map_err(|e| Error::Parse(format!("bad {what}: {e}")))
    };
    let ncomp = next_num("component count")? as usize;
    let nvert = next_num("vertex count")? as usize;
    let ncolor = next_num("color count")? as usize;
    let mut counts = Vec::with_capacity(ncomp);
    for _ in 0..ncomp {
        counts.push(next_num("per-component count")? as i64);
    }
    let mut color_counts = 0usize;
    for _ in 0..ncomp {
        color_counts += next_num("per-component colors")? as usize;
    }
    let mut components = Vec::with_capacity(ncomp);
    let mut seen = 0usize;
    for &c in &counts {
        let n = c.unsigned_abs() as usize;
        let mut vertices = Vec::with_capacity(n);
        for _ in 0..n {
            let x = next_num("x")?;
            let y = next_num("y")?;
            let z = next_num("z")?;
            vertices.push([x, y, z]);
        }
        seen += n;
        components.push(Polyline3::new(vertices, c < 0));
    }
    if seen != nvert {
        return Err(Error::Parse(format!(
            "vertex total {seen} does not match header {nvert}"
        )));
    }
    // Skip RGBA color records when a file carries any.
    for _ in 0..4 * color_counts.max(ncolor) {
        if next_num("color").is_err() {
            break;
        }
    }
    Ok(components)
}

pub fn read_vect_file(path: &Path) -> Result<Vec<Polyline3>> {
    read_vect(std::fs::File::open(path)?)
}

/// Writes OBJ polylines: `v` records then one `l` record per component
/// (repeating the first index closes the loop).
pub fn write_obj<W: Write>(mut w: W, components: &[Polyline3]) -> Result<()> {
    for c in components {
        for v in &c.vertices {
            writeln!(w, "v {:.16e} {:.16e} {:.16e}", v[0], v[1], v[2])?;
        }
    }
    let mut base = 1usize;
    for c in components {
        let n = c.vertices.len();
        let mut line = String::from("l");
        for i in 0..n {
            line.push(' ');
            line.push_str(&(base + i).to_string());
        }
        if c.closed {
            line.push(' ');
            line.push_str(&base.to_string());
        }
        writeln!(w, "{line}")?;
        base += n;
    }
    Ok(())
}

pub fn write_obj_file(path: &Path, components: &[Polyline3]) -> Result<()> {
    let f = std::fs::File::create(path)?;
    write_obj(std::io::BufWriter::new(f), components)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::TAU;

    fn circle(n: usize, r: f64) -> Polyline3 {
        let vertices = (0..n)
            .map(|i| {
                let t = TAU * i as f64 / n as f64;
                [r * t.cos(), r * t.sin(), 0.1 * t.sin()]
            })
            .collect();
        Polyline3::new(vertices, true)
    }

    #[test]
    fn vect_single_closed_component() {
        let comps = vec![circle(32, 3.0)];
        let mut buf = Vec::new();
        write_vect(&mut buf, &comps).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("VECT\n1 32 0\n-32\n0\n"));
        let back = read_vect(buf.as_slice()).unwrap();
        assert_eq!(back.len(), 1);
        assert!(back[0].closed);
    }

    #[test]
    fn vect_round_trip_is_bit_exact() {
        let comps = vec![circle(17, 1.2345678901234567), circle(9, 7.0 / 3.0)];
        let mut buf = Vec::new();
        write_vect(&mut buf, &comps).unwrap();
        let back = read_vect(buf.as_slice()).unwrap();
        assert_eq!(back.len(), comps.len());
        for (a, b) in comps.iter().zip(&back) {
            assert_eq!(a.closed, b.closed);
            for (va, vb) in a.vertices.iter().zip(&b.vertices) {
                assert_eq!(va, vb, "coordinates must survive the decimal encoding");
            }
        }
    }

    #[test]
    fn obj_lists_all_vertices_and_loops() {
        let comps = vec![circle(5, 1.0), circle(4, 2.0)];
        let mut buf = Vec::new();
        write_obj(&mut buf, &comps).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().filter(|l| l.starts_with("v ")).count(), 9);
        let l_lines: Vec<&str> = text.lines().filter(|l| l.starts_with('l')).collect();
        assert_eq!(l_lines.len(), 2);
        assert!(l_lines[0].ends_with(" 1"));
        assert!(l_lines[1].starts_with("l 6"));
        assert!(l_lines[1].ends_with(" 6"));
    }

    #[test]
    fn truncated_vect_is_rejected() {
        let comps = vec![circle(8, 1.0)];
        let mut buf = Vec::new();
        write_vect(&mut buf, &comps).unwrap();
        buf.truncate(buf.len() - 10);
        assert!(read_vect(buf.as_slice()).is_err());
    }
}
