//! JSON ingestion and emission for geometries and records.

use std::path::{Path, PathBuf};

use serde::Deserialize;
use serde_json::{json, Value};

use crate::catalog::SurfaceBoundInput;
use crate::chern::ChernRecord;
use crate::error::{Error, Result};
use crate::geometry::ThreefoldData;
use crate::pushforward::SurfaceBundleRecord;
use crate::rational::{format_q, q_from_json, Q};

/// Directory searched for `<name>.json` geometries.
pub const GEOMETRY_DIR_VAR: &str = "ATTRKIT_GEOMETRY_DIR";

fn json_err(what: &str, e: serde_json::Error) -> Error {
    Error::Parse(format!("{what}: {e}"))
}

fn field_q(v: &Value, field: &str) -> Result<Q> {
    q_from_json(v).map_err(|e| Error::Parse(format!("{field}: {e}")))
}

fn field_qvec(v: &Value, field: &str) -> Result<Vec<Q>> {
    let arr = v
        .as_array()
        .ok_or_else(|| Error::Parse(format!("{field}: expected a list")))?;
    arr.iter()
        .enumerate()
        .map(|(i, x)| field_q(x, &format!("{field}[{i}]")))
        .collect()
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GeometryFile {
    name: String,
    b2: usize,
    intersect: Vec<Vec<Value>>,
    c2_pair: Vec<Value>,
    euler: i64,
    mori_rays: Vec<Vec<Value>>,
}

pub fn parse_geometry(text: &str) -> Result<ThreefoldData> {
    let f: GeometryFile = serde_json::from_str(text).map_err(|e| json_err("geometry", e))?;
    let mut entries = Vec::with_capacity(f.intersect.len());
    for (i, row) in f.intersect.iter().enumerate() {
        let field = format!("intersect[{i}]");
        if row.len() != 4 {
            return Err(Error::Parse(format!("{field}: expected [a, b, c, value]")));
        }
        let idx = |k: usize| -> Result<usize> {
            row[k]
                .as_u64()
                .map(|x| x as usize)
                .ok_or_else(|| Error::Parse(format!("{field}[{k}]: expected a nonnegative index")))
        };
        entries.push((idx(0)?, idx(1)?, idx(2)?, field_q(&row[3], &format!("{field}[3]"))?));
    }
    let c2 = field_qvec(&Value::Array(f.c2_pair), "c2_pair")?;
    let rays = f
        .mori_rays
        .into_iter()
        .enumerate()
        .map(|(i, r)| field_qvec(&Value::Array(r), &format!("mori_rays[{i}]")))
        .collect::<Result<Vec<_>>>()?;
    ThreefoldData::new(f.name, f.b2, &entries, c2, f.euler, rays)
}

/// JSON form accepted by [`parse_geometry`]; entries are listed with
/// `a <= b <= c`.
pub fn geometry_json(g: &ThreefoldData) -> Value {
    json!({
        "name": g.name(),
        "b2": g.b2(),
        "intersect": g.intersect_entries().iter().map(|(a, b, c, v)| json!([a, b, c, format_q(v)])).collect::<Vec<_>>(),
        "c2_pair": g.c2_pair().iter().map(format_q).collect::<Vec<_>>(),
        "euler": g.euler(),
        "mori_rays": g.mori_rays().iter().map(|r| r.iter().map(format_q).collect::<Vec<_>>()).collect::<Vec<_>>(),
    })
}

/// Resolves a geometry argument: a readable file, a built-in preset, or
/// `$ATTRKIT_GEOMETRY_DIR/<name>.json`, in that order.
pub fn load_geometry(source: &str) -> Result<ThreefoldData> {
    let path = Path::new(source);
    if path.is_file() {
        return read_geometry(path);
    }
    if let Some(g) = ThreefoldData::preset(source) {
        return Ok(g);
    }
    if let Ok(dir) = std::env::var(GEOMETRY_DIR_VAR) {
        let candidate = PathBuf::from(dir).join(format!("{source}.json"));
        if candidate.is_file() {
            return read_geometry(&candidate);
        }
    }
    Err(Error::Unknown(source.to_string()))
}

fn read_geometry(path: &Path) -> Result<ThreefoldData> {
    let text = read(path)?;
    parse_geometry(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

pub fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn record_from_object(v: &Value, g: &ThreefoldData, at: &str) -> Result<ChernRecord> {
    let obj = v
        .as_object()
        .ok_or_else(|| Error::Parse(format!("{at}: expected an object")))?;
    for key in obj.keys() {
        if !["rank", "c1", "c2_pair", "ch2_pair", "c3", "ch3"].contains(&key.as_str()) {
            return Err(Error::Parse(format!("{at}: unknown field {key:?}")));
        }
    }
    let get = |k: &str| obj.get(k);
    let one_of = |a: &str, b: &str| -> Result<(bool, &Value)> {
        match (get(a), get(b)) {
            (Some(x), None) => Ok((true, x)),
            (None, Some(y)) => Ok((false, y)),
            (Some(_), Some(_)) => Err(Error::Parse(format!("{at}: give exactly one of {a} and {b}"))),
            (None, None) => Err(Error::Parse(format!("{at}: missing field {a} (or {b})"))),
        }
    };
    let rank = field_q(
        get("rank").ok_or_else(|| Error::Parse(format!("{at}: missing field rank")))?,
        &format!("{at}.rank"),
    )?;
    let c1 = field_qvec(
        get("c1").ok_or_else(|| Error::Parse(format!("{at}: missing field c1")))?,
        &format!("{at}.c1"),
    )?;
    let (is_c2, deg4) = one_of("c2_pair", "ch2_pair")?;
    let (is_c3, deg6) = one_of("c3", "ch3")?;
    let deg4 = field_qvec(deg4, &format!("{at}.{}", if is_c2 { "c2_pair" } else { "ch2_pair" }))?;
    let deg6 = field_q(deg6, &format!("{at}.{}", if is_c3 { "c3" } else { "ch3" }))?;
    g.check_dim(c1.len())?;
    g.check_dim(deg4.len())?;
    let ch2 = if is_c2 {
        let c1sq = g.product_pairing(&c1, &c1);
        c1sq.iter().zip(&deg4).map(|(s, c2)| s / Q::from_integer(2.into()) - c2).collect()
    } else {
        deg4
    };
    let mut record = ChernRecord::new(rank, c1, ch2, Q::default());
    record.ch3 = if is_c3 {
        // c3 is affine in ch3 with slope 2.
        (deg6 - record.c3(g)) / Q::from_integer(2.into())
    } else {
        deg6
    };
    Ok(record)
}

/// One record object with `rank`, `c1`, one of `c2_pair`/`ch2_pair` and one
/// of `c3`/`ch3`.
pub fn parse_record(text: &str, g: &ThreefoldData) -> Result<ChernRecord> {
    let v: Value = serde_json::from_str(text).map_err(|e| json_err("record", e))?;
    record_from_object(&v, g, "record")
}

/// A list of record objects, or a single one.
pub fn parse_records(text: &str, g: &ThreefoldData) -> Result<Vec<ChernRecord>> {
    let v: Value = serde_json::from_str(text).map_err(|e| json_err("records", e))?;
    match &v {
        Value::Array(items) => items
            .iter()
            .enumerate()
            .map(|(i, x)| record_from_object(x, g, &format!("records[{i}]")))
            .collect(),
        _ => Ok(vec![record_from_object(&v, g, "record")?]),
    }
}

pub fn parse_surface_bundle(text: &str) -> Result<SurfaceBundleRecord> {
    serde_json::from_str(text).map_err(|e| json_err("surface bundle", e))
}

pub fn parse_surface_bound_input(text: &str) -> Result<SurfaceBoundInput> {
    serde_json::from_str(text).map_err(|e| json_err("surface bound input", e))
}

/// A square matrix of rationals, as a list of rows.
pub fn parse_matrix(text: &str) -> Result<Vec<Vec<Q>>> {
    let v: Value = serde_json::from_str(text).map_err(|e| json_err("matrix", e))?;
    let rows = v
        .as_array()
        .ok_or_else(|| Error::Parse("matrix: expected a list of rows".into()))?;
    rows.iter()
        .enumerate()
        .map(|(i, r)| field_qvec(r, &format!("matrix[{i}]")))
        .collect()
}

/// A list of rationals such as `"1,1/2"` or `"[1, \"1/2\"]"`.
pub fn parse_vector(text: &str) -> Result<Vec<Q>> {
    let t = text.trim();
    if t.starts_with('[') {
        let v: Value = serde_json::from_str(t).map_err(|e| json_err("vector", e))?;
        return field_qvec(&v, "vector");
    }
    t.split(',').map(crate::rational::parse_q).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qvec};

    #[test]
    fn geometry_round_trip() {
        for name in ThreefoldData::preset_names() {
            let g = ThreefoldData::preset(name).unwrap();
            let back = parse_geometry(&geometry_json(&g).to_string()).unwrap();
            assert_eq!(back, g);
        }
    }

    #[test]
    fn geometry_errors_name_the_field() {
        let text = r#"{"name":"x","b2":1,"intersect":[[0,0,0,"a"]],"c2_pair":[50],"euler":0,"mori_rays":[]}"#;
        let e = parse_geometry(text).unwrap_err();
        assert!(e.to_string().contains("intersect[0][3]"), "{e}");
        let e = parse_geometry("{\"name\": \"x\",\n \"b2\": 1\n}").unwrap_err();
        assert!(e.to_string().contains("line"), "{e}");
    }

    #[test]
    fn record_alternatives() {
        let g = ThreefoldData::quintic();
        let a = parse_record(r#"{"rank":3,"c1":[0],"c2_pair":[50],"c3":-200}"#, &g).unwrap();
        let b = parse_record(r#"{"rank":"3","c1":["0"],"ch2_pair":["-50"],"ch3":"-100"}"#, &g).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, ChernRecord::new(q(3), qvec(&[0]), qvec(&[-50]), q(-100)));
        let c = parse_record(r#"{"rank":3,"c1":[-1],"c2_pair":[5],"c3":"7/2"}"#, &g).unwrap();
        assert_eq!(c.c2(&g), qvec(&[5]));
        assert_eq!(c.c3(&g), Q::new(7.into(), 2.into()));
        assert!(parse_record(r#"{"rank":3,"c1":[0],"c2_pair":[50],"ch2_pair":[1],"c3":0}"#, &g).is_err());
        assert!(parse_record(r#"{"rank":3,"c1":[0],"c3":0}"#, &g).is_err());
    }

    #[test]
    fn record_json_reingests() {
        let g = ThreefoldData::elliptic_p2();
        let r = ChernRecord::new(q(2), qvec(&[1, -1]), vec![Q::new(1.into(), 3.into()), q(-2)], q(5));
        let text = serde_json::to_string(&r).unwrap();
        assert_eq!(parse_record(&text, &g).unwrap(), r);
        assert_eq!(parse_records(&format!("[{text},{text}]"), &g).unwrap().len(), 2);
    }

    #[test]
    fn vectors() {
        assert_eq!(parse_vector("1, 1/2").unwrap(), vec![q(1), Q::new(1.into(), 2.into())]);
        assert_eq!(parse_vector("[1, \"-2\"]").unwrap(), qvec(&[1, -2]));
    }
}
