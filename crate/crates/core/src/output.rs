//! CSV and JSON emission for sweep records and figure tables.

use std::io::{Read, Write};

use crate::analysis::{MeasureRecord, Source};

pub const RECORD_HEADER: [&str; 10] = [
    "state",
    "hamiltonian",
    "measure",
    "source",
    "alpha",
    "gamma",
    "j",
    "t",
    "jt",
    "value",
];

const SIG_DIGITS: i32 = 12;

/// Shortest %g-style rendering with 12 significant digits. Negative zero is
/// written as `0`.
pub fn format_value(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.*e}", (SIG_DIGITS - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..SIG_DIGITS).contains(&exp) {
        let decimals = (SIG_DIGITS - 1 - exp).max(0) as usize;
        trim_zeros(format!("{:.*}", decimals, x))
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa.to_string()), exp.abs())
    }
}

fn trim_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    let t = s.trim_end_matches('0').trim_end_matches('.');
    if t == "-0" {
        "0".to_string()
    } else {
        t.to_string()
    }
}

fn record_fields(r: &MeasureRecord) -> [String; 10] {
    [
        r.state.to_string(),
        r.hamiltonian.to_string(),
        r.measure.to_string(),
        r.source.to_string(),
        format_value(r.alpha),
        format_value(r.gamma),
        format_value(r.j),
        format_value(r.t),
        format_value(r.jt),
        format_value(r.value),
    ]
}

pub fn write_records_csv<W: Write>(out: W, records: &[MeasureRecord]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(RECORD_HEADER)?;
    for r in records {
        w.write_record(record_fields(r))?;
    }
    w.flush()?;
    Ok(())
}

pub fn records_to_csv_string(records: &[MeasureRecord]) -> String {
    let mut buf = Vec::new();
    write_records_csv(&mut buf, records).expect("writing to memory");
    String::from_utf8(buf).expect("csv output is utf-8")
}

pub fn read_records_csv<R: Read>(input: R) -> Result<Vec<MeasureRecord>, String> {
    let mut rdr = csv::Reader::from_reader(input);
    let header = rdr.headers().map_err(|e| e.to_string())?.clone();
    if header.iter().ne(RECORD_HEADER) {
        return Err(format!("unexpected header {:?}", header));
    }
    let mut out = Vec::new();
    for (line, row) in rdr.records().enumerate() {
        let row = row.map_err(|e| e.to_string())?;
        let num = |k: usize| {
            row[k]
                .parse::<f64>()
                .map_err(|e| format!("row {}: column {}: {e}", line + 1, RECORD_HEADER[k]))
        };
        let source = match &row[3] {
            "numeric" => Source::Numeric,
            "closed_form" => Source::ClosedForm,
            other => return Err(format!("row {}: unknown source `{other}`", line + 1)),
        };
        out.push(MeasureRecord {
            state: row[0].parse()?,
            hamiltonian: row[1].parse()?,
            measure: row[2].parse()?,
            source,
            alpha: num(4)?,
            gamma: num(5)?,
            j: num(6)?,
            t: num(7)?,
            jt: num(8)?,
            value: num(9)?,
        });
    }
    Ok(out)
}

/// Numeric table with a header row, every cell through [`format_value`].
pub fn write_table_csv<W: Write>(out: W, header: &[&str], rows: &[Vec<f64>]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header)?;
    for row in rows {
        w.write_record(row.iter().map(|&v| format_value(v)))?;
    }
    w.flush()?;
    Ok(())
}
