use std::fmt::Write as _;
use std::io;

use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter};
use serde_json::{Serializer, Value};

use crate::RunReport;

/// Pretty JSON with every float written to 17 significant digits.
struct Fixed17<'a>(PrettyFormatter<'a>);

impl Formatter for Fixed17<'_> {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, v: f64) -> io::Result<()> {
        write!(w, "{v:.16e}")
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, w: &mut W, v: f32) -> io::Result<()> {
        self.write_f64(w, v as f64)
    }

    fn begin_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }

    fn end_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }

    fn begin_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }

    fn end_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }

    fn begin_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }

    fn end_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }

    fn begin_object_key<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }

    fn end_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

pub fn to_json(report: &RunReport) -> String {
    let mut buf = Vec::new();
    let mut ser = Serializer::with_formatter(&mut buf, Fixed17(PrettyFormatter::new()));
    report.serialize(&mut ser).expect("report is serializable");
    buf.push(b'\n');
    String::from_utf8(buf).expect("serde_json writes UTF-8")
}

const MAX_ITEMS: usize = 8;

fn scalar(v: &Value) -> Option<String> {
    Some(match v {
        Value::Null => "-".into(),
        Value::Bool(b) => b.to_string(),
        Value::Number(n) => match (n.as_i64(), n.as_u64(), n.as_f64()) {
            (Some(i), _, _) => i.to_string(),
            (_, Some(u), _) => u.to_string(),
            (_, _, Some(f)) => format!("{f}"),
            _ => n.to_string(),
        },
        Value::String(s) => s.clone(),
        _ => return None,
    })
}

fn render(out: &mut String, key: &str, v: &Value, depth: usize) {
    let pad = "  ".repeat(depth);
    if let Some(s) = scalar(v) {
        let _ = writeln!(out, "{pad}{key}: {s}");
        return;
    }
    match v {
        Value::Array(items) if items.iter().all(|i| scalar(i).is_some()) => {
            let shown: Vec<String> = items.iter().take(MAX_ITEMS).filter_map(scalar).collect();
            let more = if items.len() > MAX_ITEMS {
                format!(", ... ({} total)", items.len())
            } else {
                String::new()
            };
            let _ = writeln!(out, "{pad}{key}: [{}{more}]", shown.join(", "));
        }
        Value::Array(items) => {
            let _ = writeln!(out, "{pad}{key}: {} item(s)", items.len());
            for (i, item) in items.iter().take(MAX_ITEMS).enumerate() {
                render(out, &format!("[{i}]"), item, depth + 1);
            }
            if items.len() > MAX_ITEMS {
                let _ = writeln!(out, "{pad}  ...");
            }
        }
        Value::Object(map) => {
            let _ = writeln!(out, "{pad}{key}:");
            for (k, v) in map {
                render(out, k, v, depth + 1);
            }
        }
        _ => unreachable!("scalars handled above"),
    }
}

/// Human summary, rendered from the report's JSON form.
pub fn render_human(report: &RunReport) -> String {
    let v = serde_json::to_value(report).expect("report is serializable");
    let mut out = String::new();
    let status = v["status"].as_str().unwrap_or("?").to_uppercase();
    let _ = writeln!(out, "{}: {status} (exit {})", v["command"].as_str().unwrap_or("?"), v["exit_code"]);
    if let Some(e) = v["error"].as_str() {
        let _ = writeln!(out, "error: {e}");
    }
    if !v["result"].is_null() {
        render(&mut out, "result", &v["result"], 0);
    }
    if let Some(viol) = v["violations"].as_array().filter(|a| !a.is_empty()) {
        render(&mut out, "violations", &Value::Array(viol.clone()), 0);
    }
    let _ = writeln!(out, "time: {:.1} ms", report.timing_ms);
    out
}
