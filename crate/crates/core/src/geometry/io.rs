//! ASCII PLY and XYZ-CSV point cloud readers and writers.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{estimate_normals, PointCloud, DEFAULT_NORMAL_K, NORMAL_UNIT_TOLERANCE};
use crate::{Real, Vec3};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CloudFormat {
    PlyAscii,
    XyzCsv,
}

impl CloudFormat {
    /// `.ply` is PLY, anything else is XYZ-CSV.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("ply") => CloudFormat::PlyAscii,
            _ => CloudFormat::XyzCsv,
        }
    }
}

struct RawCloud {
    points: Vec<Vec3<f64>>,
    normals: Option<Vec<Vec3<f64>>>,
}

pub fn load_cloud<T: Real>(path: &Path, format: CloudFormat) -> Result<PointCloud<T>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let raw = match format {
        CloudFormat::PlyAscii => parse_ply(&text, path)?,
        CloudFormat::XyzCsv => parse_xyz(&text, path)?,
    };
    if raw.points.is_empty() {
        return Err(Error::EmptyInput(path.to_path_buf()));
    }
    let cast = |v: Vec3<f64>| Vec3::new(T::lit(v.x), T::lit(v.y), T::lit(v.z));
    let points: Vec<Vec3<T>> = raw.points.into_iter().map(cast).collect();
    let normals = match raw.normals {
        Some(ns) => ns
            .into_iter()
            .map(|n| {
                let n = cast(n);
                // stored unit normals are kept bit-exact; others are rescaled
                if (n.norm() - T::one()).abs() <= T::lit(NORMAL_UNIT_TOLERANCE) {
                    n
                } else {
                    n.normalized().unwrap_or_else(Vec3::unit_z)
                }
            })
            .collect(),
        None => estimate_normals(&points, DEFAULT_NORMAL_K.min(points.len().max(3)))?.normals,
    };
    PointCloud::new(points, normals)
}

pub fn save_cloud<T: Real>(cloud: &PointCloud<T>, path: &Path, format: CloudFormat) -> Result<()> {
    let text = match format {
        CloudFormat::PlyAscii => to_ply(cloud),
        CloudFormat::XyzCsv => to_xyz(cloud),
    };
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub fn to_ply<T: Real>(cloud: &PointCloud<T>) -> String {
    let mut out = String::new();
    out.push_str("ply\nformat ascii 1.0\n");
    let _ = writeln!(out, "element vertex {}", cloud.len());
    for name in ["x", "y", "z", "nx", "ny", "nz"] {
        let _ = writeln!(out, "property float {name}");
    }
    out.push_str("end_header\n");
    for (p, n) in cloud.points().iter().zip(cloud.normals()) {
        let _ = writeln!(out, "{} {} {} {} {} {}", p.x, p.y, p.z, n.x, n.y, n.z);
    }
    out
}

pub fn to_xyz<T: Real>(cloud: &PointCloud<T>) -> String {
    let mut out = String::from("# x,y,z,nx,ny,nz\n");
    for (p, n) in cloud.points().iter().zip(cloud.normals()) {
        let _ = writeln!(out, "{},{},{},{},{},{}", p.x, p.y, p.z, n.x, n.y, n.z);
    }
    out
}

fn parse_error(path: &Path, line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        line,
        message: message.into(),
    }
}

fn parse_number(tok: &str, path: &Path, line: usize) -> Result<f64> {
    let v: f64 = tok
        .trim()
        .parse()
        .map_err(|_| parse_error(path, line, format!("invalid number '{}'", tok.trim())))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(parse_error(
            path,
            line,
            format!("non-finite value '{}'", tok.trim()),
        ))
    }
}

fn parse_xyz(text: &str, path: &Path) -> Result<RawCloud> {
    let mut points = Vec::new();
    let mut normals = Vec::new();
    let mut columns = None;
    for (i, line) in text.lines().enumerate() {
        let lineno = i + 1;
        let content = line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let fields: Vec<&str> = content.split(',').collect();
        if fields.len() != 3 && fields.len() != 6 {
            return Err(parse_error(
                path,
                lineno,
                format!(
                    "expected 3 or 6 comma-separated values, found {}",
                    fields.len()
                ),
            ));
        }
        match columns {
            None => columns = Some(fields.len()),
            Some(c) if c != fields.len() => {
                return Err(parse_error(
                    path,
                    lineno,
                    format!(
                        "expected {c} values like the preceding lines, found {}",
                        fields.len()
                    ),
                ))
            }
            _ => {}
        }
        let v = fields
            .iter()
            .map(|f| parse_number(f, path, lineno))
            .collect::<Result<Vec<f64>>>()?;
        points.push(Vec3::new(v[0], v[1], v[2]));
        if v.len() == 6 {
            let n = Vec3::new(v[3], v[4], v[5]);
            if n.normalized().is_none() {
                return Err(parse_error(path, lineno, "zero-length normal"));
            }
            normals.push(n);
        }
    }
    let has_normals = columns == Some(6);
    Ok(RawCloud {
        points,
        normals: has_normals.then_some(normals),
    })
}

#[derive(Debug)]
struct PlyElement {
    name: String,
    count: usize,
    properties: Vec<String>,
    has_list: bool,
}

fn parse_ply(text: &str, path: &Path) -> Result<RawCloud> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
    match lines.next() {
        Some((_, "ply")) => {}
        Some((n, _)) => return Err(parse_error(path, n, "missing 'ply' magic")),
        None => return Err(parse_error(path, 1, "empty file")),
    }

    let mut elements: Vec<PlyElement> = Vec::new();
    let mut header_done = false;
    for (lineno, line) in lines.by_ref() {
        let toks: Vec<&str> = line.split_whitespace().collect();
        match toks.as_slice() {
            [] => {}
            ["comment", ..] | ["obj_info", ..] => {}
            ["format", fmt, _] => {
                if *fmt != "ascii" {
                    return Err(parse_error(
                        path,
                        lineno,
                        format!("unsupported PLY format '{fmt}'"),
                    ));
                }
            }
            ["element", name, count] => {
                let count = count.parse().map_err(|_| {
                    parse_error(path, lineno, format!("bad element count '{count}'"))
                })?;
                elements.push(PlyElement {
                    name: name.to_string(),
                    count,
                    properties: Vec::new(),
                    has_list: false,
                });
            }
            ["property", "list", ..] => match elements.last_mut() {
                Some(e) => e.has_list = true,
                None => return Err(parse_error(path, lineno, "property before element")),
            },
            ["property", _ty, name] => match elements.last_mut() {
                Some(e) => e.properties.push(name.to_string()),
                None => return Err(parse_error(path, lineno, "property before element")),
            },
            ["end_header"] => {
                header_done = true;
                break;
            }
            _ => {
                return Err(parse_error(
                    path,
                    lineno,
                    format!("unrecognized header line '{line}'"),
                ))
            }
        }
    }
    if !header_done {
        return Err(parse_error(
            path,
            text.lines().count().max(1),
            "missing end_header",
        ));
    }

    let mut body = lines.filter(|(_, l)| !l.is_empty());
    let mut points = Vec::new();
    let mut normals = Vec::new();
    let mut has_normals = false;
    for element in &elements {
        let is_vertex = element.name == "vertex";
        if is_vertex && element.has_list {
            return Err(parse_error(
                path,
                1,
                "list properties on vertex are not supported",
            ));
        }
        let col = |name: &str| element.properties.iter().position(|p| p == name);
        let (cx, cy, cz) = (col("x"), col("y"), col("z"));
        let normal_cols = (col("nx"), col("ny"), col("nz"));
        if is_vertex {
            if cx.is_none() || cy.is_none() || cz.is_none() {
                return Err(parse_error(path, 1, "vertex element lacks x, y or z"));
            }
            has_normals = matches!(normal_cols, (Some(_), Some(_), Some(_)));
        }
        for _ in 0..element.count {
            let Some((lineno, line)) = body.next() else {
                return Err(parse_error(
                    path,
                    text.lines().count(),
                    format!("unexpected end of file in element '{}'", element.name),
                ));
            };
            if !is_vertex {
                continue;
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            if toks.len() != element.properties.len() {
                return Err(parse_error(
                    path,
                    lineno,
                    format!(
                        "expected {} values, found {}",
                        element.properties.len(),
                        toks.len()
                    ),
                ));
            }
            let get = |c: Option<usize>| parse_number(toks[c.unwrap_or(0)], path, lineno);
            points.push(Vec3::new(get(cx)?, get(cy)?, get(cz)?));
            if has_normals {
                let n = Vec3::new(
                    get(normal_cols.0)?,
                    get(normal_cols.1)?,
                    get(normal_cols.2)?,
                );
                if n.normalized().is_none() {
                    return Err(parse_error(path, lineno, "zero-length normal"));
                }
                normals.push(n);
            }
        }
    }
    Ok(RawCloud {
        points,
        normals: has_normals.then_some(normals),
    })
}
