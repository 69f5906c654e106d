//! CSV ingestion and export of flow records.

use super::record::{build_record, normalize_attack_tag};
use super::{FlowError, FlowRecord};
use std::path::Path;

/// Maps the canonical column names to the names used by a specific file.
/// Defaults match the standardized NetFlow-v9 corpora.
#[derive(Debug, Clone)]
pub struct ColumnSchema {
    pub protocol: String,
    pub l4_dst_port: String,
    pub l4_src_port: String,
    pub tcp_flags: String,
    pub in_bytes: String,
    pub in_pkts: String,
    pub out_bytes: String,
    pub out_pkts: String,
    pub flow_duration: String,
    pub label: String,
    pub attack: String,
}

impl Default for ColumnSchema {
    fn default() -> Self {
        ColumnSchema {
            protocol: "PROTOCOL".into(),
            l4_dst_port: "L4_DST_PORT".into(),
            l4_src_port: "L4_SRC_PORT".into(),
            tcp_flags: "TCP_FLAGS".into(),
            in_bytes: "IN_BYTES".into(),
            in_pkts: "IN_PKTS".into(),
            out_bytes: "OUT_BYTES".into(),
            out_pkts: "OUT_PKTS".into(),
            flow_duration: "FLOW_DURATION_MILLISECONDS".into(),
            label: "Label".into(),
            attack: "Attack".into(),
        }
    }
}

/// Per-file ingestion outcome: accepted count plus row-indexed rejections.
#[derive(Debug, Clone, Default)]
pub struct LoadReport {
    pub accepted: usize,
    pub rejected: Vec<(usize, String)>,
}

impl LoadReport {
    pub fn rejected_count(&self) -> usize {
        self.rejected.len()
    }
}

fn parse_u16(field: &str, name: &str) -> Result<u16, String> {
    let v: i64 = field.trim().parse().map_err(|_| format!("{name}: unparseable {field:?}"))?;
    u16::try_from(v).map_err(|_| format!("{name}: out of range {v}"))
}

fn parse_u64(field: &str, name: &str) -> Result<u64, String> {
    // Some exports carry integral counts formatted as floats.
    let t = field.trim();
    if let Ok(v) = t.parse::<i64>() {
        return u64::try_from(v).map_err(|_| format!("{name}: negative value {v}"));
    }
    let v: f64 = t.parse().map_err(|_| format!("{name}: unparseable {field:?}"))?;
    if !v.is_finite() || v < 0.0 {
        return Err(format!("{name}: negative or non-finite value {v}"));
    }
    Ok(v.round() as u64)
}

fn parse_f64(field: &str, name: &str) -> Result<f64, String> {
    let v: f64 =
        field.trim().parse().map_err(|_| format!("{name}: unparseable {field:?}"))?;
    if !v.is_finite() || v < 0.0 {
        return Err(format!("{name}: negative or non-finite value {v}"));
    }
    Ok(v)
}

/// Loads flow records from a UTF-8 CSV file with a header row.
///
/// Rows with negative numerics or unparseable fields are rejected and
/// reported by row index; the load fails outright only when a required
/// column is missing or no row is accepted.
pub fn load_netflow(
    path: impl AsRef<Path>,
    schema: &ColumnSchema,
) -> Result<(Vec<FlowRecord>, LoadReport), FlowError> {
    let mut reader = csv::Reader::from_path(path.as_ref())?;
    let headers = reader.headers()?.clone();
    let col = |name: &str| -> Result<usize, FlowError> {
        headers
            .iter()
            .position(|h| h.trim() == name)
            .ok_or_else(|| FlowError::MissingColumn(name.to_string()))
    };
    let c_protocol = col(&schema.protocol)?;
    let c_dst = col(&schema.l4_dst_port)?;
    let c_src = col(&schema.l4_src_port)?;
    let c_flags = col(&schema.tcp_flags)?;
    let c_in_bytes = col(&schema.in_bytes)?;
    let c_in_pkts = col(&schema.in_pkts)?;
    let c_out_bytes = col(&schema.out_bytes)?;
    let c_out_pkts = col(&schema.out_pkts)?;
    let c_duration = col(&schema.flow_duration)?;
    let c_label = col(&schema.label)?;
    let c_attack = col(&schema.attack)?;

    let mut records = Vec::new();
    let mut report = LoadReport::default();
    for (index, row) in reader.records().enumerate() {
        let parse_row = || -> Result<FlowRecord, String> {
            let row = row.as_ref().map_err(|e| e.to_string())?;
            let field = |i: usize| row.get(i).unwrap_or("");
            let label_raw = field(c_label).trim();
            let label = match label_raw {
                "0" => false,
                "1" => true,
                other => return Err(format!("Label: expected 0/1, got {other:?}")),
            };
            let attack = normalize_attack_tag(field(c_attack));
            build_record(
                index,
                parse_u16(field(c_protocol), "PROTOCOL")?,
                parse_u16(field(c_dst), "L4_DST_PORT")?,
                parse_u16(field(c_src), "L4_SRC_PORT")?,
                parse_u16(field(c_flags), "TCP_FLAGS")?,
                parse_u64(field(c_in_bytes), "IN_BYTES")?,
                parse_u64(field(c_in_pkts), "IN_PKTS")?,
                parse_u64(field(c_out_bytes), "OUT_BYTES")?,
                parse_u64(field(c_out_pkts), "OUT_PKTS")?,
                parse_f64(field(c_duration), "FLOW_DURATION")?,
                label,
                attack,
            )
            .map_err(|e| e.to_string())
        };
        match parse_row() {
            Ok(record) => {
                records.push(record);
                report.accepted += 1;
            }
            Err(reason) => report.rejected.push((index, reason)),
        }
    }
    if records.is_empty() {
        return Err(FlowError::EmptyDataset);
    }
    Ok((records, report))
}

/// Writes records in the same CSV layout `load_netflow` reads (canonical
/// column names, benign rows tagged "Benign").
pub fn write_netflow_csv(
    path: impl AsRef<Path>,
    records: &[FlowRecord],
) -> Result<(), FlowError> {
    let schema = ColumnSchema::default();
    let mut writer = csv::Writer::from_path(path.as_ref())?;
    writer.write_record([
        schema.protocol.as_str(),
        schema.l4_dst_port.as_str(),
        schema.l4_src_port.as_str(),
        schema.tcp_flags.as_str(),
        schema.in_bytes.as_str(),
        schema.in_pkts.as_str(),
        schema.out_bytes.as_str(),
        schema.out_pkts.as_str(),
        schema.flow_duration.as_str(),
        schema.label.as_str(),
        schema.attack.as_str(),
    ])?;
    for r in records {
        writer.write_record([
            r.protocol.to_string(),
            r.l4_dst_port.to_string(),
            r.l4_src_port.to_string(),
            r.tcp_flags.to_string(),
            r.in_bytes.to_string(),
            r.in_pkts.to_string(),
            r.out_bytes.to_string(),
            r.out_pkts.to_string(),
            format!("{}", r.flow_duration_ms),
            (r.label as u8).to_string(),
            if r.attack_name.is_empty() { "Benign".to_string() } else { r.attack_name.clone() },
        ])?;
    }
    writer.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flow_data::{generate_synthetic, SynthSpec};
    use std::io::Write;

    fn write_temp(content: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(content.as_bytes()).unwrap();
        f.flush().unwrap();
        f
    }

    const HEADER: &str = "PROTOCOL,L4_DST_PORT,L4_SRC_PORT,TCP_FLAGS,IN_BYTES,IN_PKTS,OUT_BYTES,OUT_PKTS,FLOW_DURATION_MILLISECONDS,Label,Attack";

    #[test]
    fn parses_a_well_formed_row() {
        let f = write_temp(&format!("{HEADER}\n6,80,5353,27,500,5,1000,8,120000,1,DDoS\n"));
        let (records, report) = load_netflow(f.path(), &ColumnSchema::default()).unwrap();
        assert_eq!(report.accepted, 1);
        assert_eq!(report.rejected_count(), 0);
        let r = &records[0];
        assert_eq!(r.protocol, 6);
        assert_eq!(r.l4_dst_port, 80);
        assert_eq!(r.l4_src_port, 5353);
        assert_eq!(r.tcp_flags, 27);
        assert_eq!(r.in_bytes, 500);
        assert_eq!(r.in_pkts, 5);
        assert_eq!(r.out_bytes, 1000);
        assert_eq!(r.out_pkts, 8);
        assert_eq!(r.flow_duration_ms, 120_000.0);
        assert!(r.label);
        assert_eq!(r.attack_name, "DDoS");
    }

    #[test]
    fn negative_numeric_rejects_the_row() {
        let f = write_temp(&format!(
            "{HEADER}\n6,80,5353,27,-3,5,1000,8,120000,1,DDoS\n6,80,5353,27,3,5,1000,8,120000,0,Benign\n"
        ));
        let (records, report) = load_netflow(f.path(), &ColumnSchema::default()).unwrap();
        assert_eq!(records.len(), 1);
        assert_eq!(report.rejected_count(), 1);
        assert_eq!(report.rejected[0].0, 0);
        assert!(report.rejected[0].1.contains("IN_BYTES"));
    }

    #[test]
    fn missing_column_fails() {
        let f = write_temp("PROTOCOL,L4_DST_PORT\n6,80\n");
        match load_netflow(f.path(), &ColumnSchema::default()) {
            Err(FlowError::MissingColumn(name)) => assert_eq!(name, "L4_SRC_PORT"),
            other => panic!("expected MissingColumn, got {other:?}"),
        }
    }

    #[test]
    fn all_rows_rejected_is_an_empty_dataset() {
        let f = write_temp(&format!("{HEADER}\nx,80,1,1,1,1,1,1,1,1,DDoS\n"));
        assert!(matches!(
            load_netflow(f.path(), &ColumnSchema::default()),
            Err(FlowError::EmptyDataset)
        ));
    }

    #[test]
    fn schema_remapping_resolves_renamed_columns() {
        let f = write_temp(
            "proto,dport,sport,flags,ib,ip,ob,op,dur,y,atk\n17,53,1024,0,64,1,64,1,10,0,Benign\n",
        );
        let schema = ColumnSchema {
            protocol: "proto".into(),
            l4_dst_port: "dport".into(),
            l4_src_port: "sport".into(),
            tcp_flags: "flags".into(),
            in_bytes: "ib".into(),
            in_pkts: "ip".into(),
            out_bytes: "ob".into(),
            out_pkts: "op".into(),
            flow_duration: "dur".into(),
            label: "y".into(),
            attack: "atk".into(),
        };
        let (records, _) = load_netflow(f.path(), &schema).unwrap();
        assert_eq!(records[0].protocol, 17);
        assert!(!records[0].label);
    }

    #[test]
    fn generator_output_round_trips_without_rejections() {
        let flows = generate_synthetic(1000, 5, &SynthSpec::default()).unwrap();
        let f = tempfile::NamedTempFile::new().unwrap();
        write_netflow_csv(f.path(), &flows).unwrap();
        let (loaded, report) = load_netflow(f.path(), &ColumnSchema::default()).unwrap();
        assert_eq!(report.accepted, 1000);
        assert_eq!(report.rejected_count(), 0);
        assert_eq!(loaded.len(), flows.len());
        for (a, b) in loaded.iter().zip(flows.iter()) {
            assert_eq!(a.in_bytes, b.in_bytes);
            assert_eq!(a.label, b.label);
            assert_eq!(a.attack_name, b.attack_name);
        }
    }
}
