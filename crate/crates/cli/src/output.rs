//! JSON and CSV serialization.
//!
//! Every document has the shape `{config, roots, report}`. CSV files have a
//! header row, comma separators and LF line ends; floats are written with 17
//! significant digits so they read back bit-for-bit.

use std::io::Write;
use std::path::Path;

use serde::Serialize;

use itw::dispersion::Parity;
use itw::spectrum::Root;

pub const ROOT_HEADER: [&str; 5] = ["re_k", "im_k", "multiplicity", "parity", "certified"];

/// `{:.16e}`: the shortest fixed-width form that round-trips every `f64`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// One root as it appears in JSON output.
#[derive(Debug, Clone, Serialize)]
pub struct RootRecord {
    pub re_k: f64,
    pub im_k: f64,
    pub re_z: f64,
    pub im_z: f64,
    pub multiplicity: u32,
    pub parity: Parity,
    /// Multiplicity per factor.
    pub components: Vec<(Parity, u32)>,
    pub method: &'static str,
    pub certified: bool,
    pub strip: i64,
}

impl From<&Root> for RootRecord {
    fn from(r: &Root) -> Self {
        Self {
            re_k: r.k.re,
            im_k: r.k.im,
            re_z: r.z.re,
            im_z: r.z.im,
            multiplicity: r.multiplicity,
            parity: r.parity,
            components: r.components.clone(),
            method: r.method.as_str(),
            certified: r.certified,
            strip: r.strip,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Document<'a, C: Serialize, R: Serialize, P: Serialize> {
    pub config: &'a C,
    pub roots: &'a [R],
    pub report: &'a P,
}

pub fn to_json<C: Serialize, R: Serialize, P: Serialize>(config: &C, roots: &[R], report: &P) -> String {
    let doc = Document { config, roots, report };
    let mut s = serde_json::to_string_pretty(&doc).expect("output types serialize");
    s.push('\n');
    s
}

/// A CSV table built row by row.
pub struct Table {
    writer: csv::Writer<Vec<u8>>,
}

impl Table {
    pub fn new<I, S>(header: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u8]>,
    {
        let mut writer = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        writer.write_record(header).expect("write to memory");
        Self { writer }
    }

    pub fn row<I, S>(&mut self, fields: I)
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u8]>,
    {
        self.writer.write_record(fields).expect("write to memory");
    }

    pub fn finish(self) -> String {
        let bytes = self.writer.into_inner().expect("flush to memory");
        String::from_utf8(bytes).expect("csv output is utf-8")
    }
}

/// Fields of one root under [`ROOT_HEADER`].
pub fn root_fields(r: &Root) -> [String; 5] {
    [
        fmt_f64(r.k.re),
        fmt_f64(r.k.im),
        r.multiplicity.to_string(),
        r.parity.to_string(),
        r.certified.to_string(),
    ]
}

pub fn roots_csv(roots: &[Root]) -> String {
    let mut t = Table::new(ROOT_HEADER);
    for r in roots {
        t.row(root_fields(r));
    }
    t.finish()
}

/// Writes `text` to `path`, or to standard output.
pub fn emit(text: &str, path: Option<&Path>) -> std::io::Result<()> {
    match path {
        Some(p) => std::fs::write(p, text),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()
        }
    }
}
