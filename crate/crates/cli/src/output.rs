//! Row types and rendering shared by the subcommands.

use logkernel::{AbelianGroupStructure, Error, QuadField};
use serde::Serialize;
use serde_json::Value;

/// Fields every JSON report carries.
#[derive(Clone, Debug, Serialize)]
pub struct StructureRow {
    pub d: i64,
    pub ell: u64,
    pub precision_used: u32,
    pub exponents: Vec<u32>,
    pub stabilized: bool,
    pub certificate: bool,
    pub source_field: String,
}

impl StructureRow {
    pub fn new(d: i64, ell: u64, field: &str, s: &AbelianGroupStructure) -> Self {
        Self {
            d,
            ell,
            precision_used: s.precision_used,
            exponents: s.exponents.clone(),
            stabilized: s.stabilized,
            certificate: s.finiteness_certificate,
            source_field: field.to_string(),
        }
    }
}

/// `Z/9 ⊕ Z/3`-style rendering with the actual prime.
pub fn render_group(ell: u64, s: &AbelianGroupStructure) -> String {
    if s.is_trivial() {
        return "1".into();
    }
    let mut parts: Vec<String> = s
        .exponents
        .iter()
        .rev()
        .map(|&a| match ell.checked_pow(a) {
            Some(q) => format!("Z/{q}"),
            None => format!("Z/{ell}^{a}"),
        })
        .collect();
    parts.extend((0..s.unresolved).map(|_| format!("Z/{ell}^(>={})", s.precision_used)));
    parts.join(" + ")
}

pub fn field_name(k: &QuadField) -> String {
    match k.d() {
        None => "Q".into(),
        Some(d) => format!("Q(sqrt({d}))"),
    }
}

pub fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

/// Process exit code for an error: 2 not stabilized, 3 invalid or
/// unsupported input, 1 otherwise.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NotStabilized { .. } => 2,
        Error::InvalidInput(_) | Error::Unsupported(_) | Error::NotTorsion => 3,
        _ => 1,
    }
}

fn csv_cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        Value::Array(items) => items.iter().map(csv_cell).collect::<Vec<_>>().join(";"),
        other => other.to_string(),
    }
}

/// CSV with a header taken from the field order of the first row.
pub fn to_csv<T: Serialize>(rows: &[T]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for (idx, row) in rows.iter().enumerate() {
        let Value::Object(map) = serde_json::to_value(row).expect("rows serialize") else {
            panic!("rows must serialize as objects");
        };
        if idx == 0 {
            w.write_record(map.keys()).expect("in-memory write");
        }
        w.write_record(map.values().map(csv_cell)).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_groups() {
        assert_eq!(render_group(3, &AbelianGroupStructure::exact(vec![])), "1");
        assert_eq!(render_group(3, &AbelianGroupStructure::exact(vec![1, 2])), "Z/9 + Z/3");
    }

    #[test]
    fn csv_flattens_arrays() {
        let row = StructureRow::new(-23, 3, "Q(sqrt(-23))", &AbelianGroupStructure::exact(vec![1, 2]));
        let text = to_csv(&[row]);
        assert_eq!(
            text,
            "d,ell,precision_used,exponents,stabilized,certificate,source_field\n\
             -23,3,0,1;2,true,true,Q(sqrt(-23))\n"
        );
        assert_eq!(to_csv::<StructureRow>(&[]), "");
    }
}
