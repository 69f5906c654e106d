//! Flow records and the six-way attack taxonomy.

use super::FlowError;
use serde::{Deserialize, Serialize};

/// One bidirectional NetFlow-v9 sample with its ground-truth label.
///
/// Ingress (`in_*`) is the direction the attacker controls; egress
/// (`out_*`) belongs to the victim host. `flow_duration_ms` is kept in
/// milliseconds: budget specifications quoted in seconds convert at the
/// boundary (100 s = 100 000 ms).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlowRecord {
    pub protocol: u16,
    pub l4_dst_port: u16,
    pub l4_src_port: u16,
    pub tcp_flags: u16,
    pub in_bytes: u64,
    pub in_pkts: u64,
    pub out_bytes: u64,
    pub out_pkts: u64,
    pub flow_duration_ms: f64,
    pub label: bool,
    pub attack_name: String,
}

impl FlowRecord {
    /// Validates the label/attack-name coupling and numeric nonnegativity.
    pub fn validate(&self) -> Result<(), String> {
        if !self.flow_duration_ms.is_finite() || self.flow_duration_ms < 0.0 {
            return Err(format!(
                "flow_duration_ms must be finite and nonnegative, got {}",
                self.flow_duration_ms
            ));
        }
        if self.label != !self.attack_name.is_empty() {
            return Err(format!(
                "label {} inconsistent with attack name {:?}",
                self.label as u8, self.attack_name
            ));
        }
        Ok(())
    }

    pub fn is_malicious(&self) -> bool {
        self.label
    }
}

/// Six-category grouping of the named attack types.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AttackCategory {
    DiscoveryRecon,
    DenialOfService,
    AccessAuth,
    ExploitInject,
    MalwarePersist,
    NetworkOther,
}

impl AttackCategory {
    pub const ALL: [AttackCategory; 6] = [
        AttackCategory::DiscoveryRecon,
        AttackCategory::DenialOfService,
        AttackCategory::AccessAuth,
        AttackCategory::ExploitInject,
        AttackCategory::MalwarePersist,
        AttackCategory::NetworkOther,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            AttackCategory::DiscoveryRecon => "discovery-recon",
            AttackCategory::DenialOfService => "denial-of-service",
            AttackCategory::AccessAuth => "access-auth",
            AttackCategory::ExploitInject => "exploit-inject",
            AttackCategory::MalwarePersist => "malware-persist",
            AttackCategory::NetworkOther => "network-other",
        }
    }
}

/// Maps a labeled attack name to its category. Total: unrecognized names
/// fall into [`AttackCategory::NetworkOther`].
pub fn categorize(attack_name: &str) -> AttackCategory {
    match attack_name.trim().to_ascii_lowercase().as_str() {
        "reconnaissance" | "scanning" | "analysis" => AttackCategory::DiscoveryRecon,
        "dos" | "ddos" => AttackCategory::DenialOfService,
        "brute force" | "password" | "theft" => AttackCategory::AccessAuth,
        "injection" | "xss" | "fuzzers" | "exploits" => AttackCategory::ExploitInject,
        "worms" | "ransomware" | "bot" | "backdoor" | "shellcode" => {
            AttackCategory::MalwarePersist
        }
        _ => AttackCategory::NetworkOther,
    }
}

/// Parses the label/attack columns as they appear in the public NetFlow
/// corpora, where benign rows carry an explicit "Benign" tag.
pub(crate) fn normalize_attack_tag(raw: &str) -> String {
    let trimmed = raw.trim();
    if trimmed.is_empty() || trimmed.eq_ignore_ascii_case("benign") {
        String::new()
    } else {
        trimmed.to_string()
    }
}

pub(crate) fn build_record(
    index: usize,
    protocol: u16,
    l4_dst_port: u16,
    l4_src_port: u16,
    tcp_flags: u16,
    in_bytes: u64,
    in_pkts: u64,
    out_bytes: u64,
    out_pkts: u64,
    flow_duration_ms: f64,
    label: bool,
    attack_name: String,
) -> Result<FlowRecord, FlowError> {
    let record = FlowRecord {
        protocol,
        l4_dst_port,
        l4_src_port,
        tcp_flags,
        in_bytes,
        in_pkts,
        out_bytes,
        out_pkts,
        flow_duration_ms,
        label,
        attack_name,
    };
    record
        .validate()
        .map_err(|reason| FlowError::MalformedRow { index, reason })?;
    Ok(record)
}
