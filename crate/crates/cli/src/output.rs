use std::io::{self, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::ser::{Formatter, PrettyFormatter};

pub const SCHEMA: &str = "swanson/1";

/// Top-level layout of every JSON output.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Envelope<C, D> {
    pub schema: String,
    pub config: C,
    pub data: D,
}

impl<C, D> Envelope<C, D> {
    pub fn new(config: C, data: D) -> Self {
        Envelope { schema: SCHEMA.to_string(), config, data }
    }
}

/// Pretty printer that writes every float with 17 significant digits, so
/// output is byte-stable and parses back to the same bits.
struct FixedFloats(PrettyFormatter<'static>);

macro_rules! delegate {
    ($($name:ident $(, $arg:ident: $ty:ty)*;)*) => {
        $(fn $name<W: ?Sized + Write>(&mut self, w: &mut W $(, $arg: $ty)*) -> io::Result<()> {
            self.0.$name(w $(, $arg)*)
        })*
    };
}

impl Formatter for FixedFloats {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        write!(w, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(w, value as f64)
    }

    delegate! {
        begin_array;
        end_array;
        begin_array_value, first: bool;
        end_array_value;
        begin_object;
        end_object;
        begin_object_key, first: bool;
        begin_object_value;
        end_object_value;
    }
}

pub fn to_json<T: Serialize>(value: &T) -> serde_json::Result<Vec<u8>> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, FixedFloats(PrettyFormatter::new()));
    value.serialize(&mut ser)?;
    buf.push(b'\n');
    Ok(buf)
}

/// Serializes `rows` under `header`.
pub fn to_csv<R: Serialize>(header: &[&str], rows: impl IntoIterator<Item = R>) -> csv::Result<Vec<u8>> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.serialize(r)?;
    }
    w.into_inner().map_err(|e| e.into_error().into())
}

/// Writes through a temporary file in the target directory and renames it
/// into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> io::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

pub fn is_csv(path: &Path) -> bool {
    path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Debug, PartialEq, Serialize, Deserialize)]
    struct Sample {
        x: f64,
        n: usize,
        v: Vec<f64>,
    }

    #[test]
    fn floats_round_trip_bitwise() {
        let s = Envelope::new("cfg".to_string(), Sample { x: 0.1 + 0.2, n: 3, v: vec![-1e-300, 5e-324, 1.0 / 3.0] });
        let text = to_json(&s).unwrap();
        let back: Envelope<String, Sample> = serde_json::from_slice(&text).unwrap();
        assert_eq!(back, s);
        let t = String::from_utf8(text).unwrap();
        assert!(t.contains("\"schema\": \"swanson/1\""));
        assert!(t.contains("3.0000000000000004e-1"));
        assert!(t.contains("\"n\": 3"));
    }

    #[test]
    fn csv_has_header() {
        let out = to_csv(&["a", "b"], [(1.5, 2.0), (3.0, -4.0)]).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "a,b\n1.5,2.0\n3.0,-4.0\n");
    }

    #[test]
    fn atomic_write_replaces_content() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("x.json");
        write_atomic(&p, b"one").unwrap();
        write_atomic(&p, b"two").unwrap();
        assert_eq!(std::fs::read(&p).unwrap(), b"two");
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    }
}
