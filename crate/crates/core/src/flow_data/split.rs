//! Stratified three-way partition into victim, train (adversary), and
//! test sets.

use super::{FlowError, FlowRecord};
use crate::rng::seeded_rng;
use rand::seq::SliceRandom;

/// The three disjoint splits. Their union is the input set.
#[derive(Debug, Clone)]
pub struct DataSplit {
    pub victim_set: Vec<FlowRecord>,
    pub train_set: Vec<FlowRecord>,
    pub test_set: Vec<FlowRecord>,
    pub seed: u64,
}

impl DataSplit {
    pub fn total_len(&self) -> usize {
        self.victim_set.len() + self.train_set.len() + self.test_set.len()
    }
}

/// Partitions flows into (victim, train, test) by the given fractions,
/// stratified by label so each split preserves the class ratio.
/// Deterministic for a fixed seed.
pub fn partition(
    flows: &[FlowRecord],
    fractions: (f64, f64, f64),
    seed: u64,
) -> Result<DataSplit, FlowError> {
    let (fv, ft, fe) = fractions;
    let sum = fv + ft + fe;
    if fv <= 0.0 || ft <= 0.0 || fe <= 0.0 || (sum - 1.0).abs() > 1e-9 {
        return Err(FlowError::InvalidFractions { sum });
    }
    if flows.is_empty() {
        return Err(FlowError::EmptyDataset);
    }

    let mut benign: Vec<usize> = Vec::new();
    let mut malicious: Vec<usize> = Vec::new();
    for (i, f) in flows.iter().enumerate() {
        if f.label {
            malicious.push(i);
        } else {
            benign.push(i);
        }
    }

    let mut rng = seeded_rng(seed);
    benign.shuffle(&mut rng);
    malicious.shuffle(&mut rng);

    let mut buckets: [Vec<usize>; 3] = [Vec::new(), Vec::new(), Vec::new()];
    for class in [&benign, &malicious] {
        let n = class.len();
        // Largest-remainder allocation keeps each split within one row of
        // its exact fractional share.
        let exact = [fv * n as f64, ft * n as f64, fe * n as f64];
        let mut counts = [exact[0] as usize, exact[1] as usize, exact[2] as usize];
        let mut order: Vec<usize> = (0..3).collect();
        order.sort_by(|&a, &b| {
            let ra = exact[a] - counts[a] as f64;
            let rb = exact[b] - counts[b] as f64;
            rb.partial_cmp(&ra).expect("finite remainders")
        });
        let mut assigned: usize = counts.iter().sum();
        for &slot in &order {
            if assigned == n {
                break;
            }
            counts[slot] += 1;
            assigned += 1;
        }
        let mut offset = 0;
        for (slot, &count) in counts.iter().enumerate() {
            buckets[slot].extend_from_slice(&class[offset..offset + count]);
            offset += count;
        }
    }

    for bucket in &buckets {
        let has_benign = bucket.iter().any(|&i| !flows[i].label);
        let has_malicious = bucket.iter().any(|&i| flows[i].label);
        if !has_benign || !has_malicious {
            return Err(FlowError::InsufficientClassSamples);
        }
    }

    let collect = |indices: &Vec<usize>| indices.iter().map(|&i| flows[i].clone()).collect();
    Ok(DataSplit {
        victim_set: collect(&buckets[0]),
        train_set: collect(&buckets[1]),
        test_set: collect(&buckets[2]),
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flow_data::{generate_synthetic, SynthSpec};
    use std::collections::HashSet;

    fn corpus(n: usize) -> Vec<FlowRecord> {
        generate_synthetic(n, 11, &SynthSpec::default()).unwrap()
    }

    fn key(f: &FlowRecord) -> (u64, u64, u64, u16, u16, String) {
        (
            f.in_bytes,
            f.in_pkts,
            f.flow_duration_ms.to_bits(),
            f.l4_dst_port,
            f.l4_src_port,
            f.attack_name.clone(),
        )
    }

    #[test]
    fn sizes_match_fractions_within_rounding() {
        let flows = corpus(10_000);
        let split = partition(&flows, (0.4, 0.4, 0.2), 7).unwrap();
        assert!((split.victim_set.len() as i64 - 4000).abs() <= 1);
        assert!((split.train_set.len() as i64 - 4000).abs() <= 1);
        assert!((split.test_set.len() as i64 - 2000).abs() <= 1);
        assert_eq!(split.total_len(), 10_000);
    }

    #[test]
    fn splits_are_disjoint_and_cover_input() {
        let flows = corpus(3000);
        let split = partition(&flows, (0.5, 0.3, 0.2), 3).unwrap();
        let mut seen: HashSet<_> = HashSet::new();
        for f in split
            .victim_set
            .iter()
            .chain(split.train_set.iter())
            .chain(split.test_set.iter())
        {
            seen.insert(key(f));
        }
        let input: HashSet<_> = flows.iter().map(key).collect();
        assert_eq!(seen, input);
        assert_eq!(split.total_len(), flows.len());
    }

    #[test]
    fn stratification_preserves_class_ratio() {
        let flows = corpus(10_000);
        let overall =
            flows.iter().filter(|f| f.label).count() as f64 / flows.len() as f64;
        let split = partition(&flows, (0.4, 0.4, 0.2), 7).unwrap();
        for set in [&split.victim_set, &split.train_set, &split.test_set] {
            let ratio = set.iter().filter(|f| f.label).count() as f64 / set.len() as f64;
            assert!(
                (ratio - overall).abs() <= 0.02,
                "ratio {ratio} vs overall {overall}"
            );
        }
    }

    #[test]
    fn same_seed_gives_identical_membership() {
        let flows = corpus(2000);
        let a = partition(&flows, (0.4, 0.4, 0.2), 7).unwrap();
        let b = partition(&flows, (0.4, 0.4, 0.2), 7).unwrap();
        assert_eq!(a.victim_set, b.victim_set);
        assert_eq!(a.train_set, b.train_set);
        assert_eq!(a.test_set, b.test_set);
    }

    #[test]
    fn single_class_input_is_rejected() {
        let flows: Vec<FlowRecord> = corpus(500)
            .into_iter()
            .filter(|f| !f.label)
            .collect();
        assert!(matches!(
            partition(&flows, (0.4, 0.4, 0.2), 7),
            Err(FlowError::InsufficientClassSamples)
        ));
    }

    #[test]
    fn bad_fractions_are_rejected() {
        let flows = corpus(100);
        assert!(matches!(
            partition(&flows, (0.5, 0.5, 0.5), 7),
            Err(FlowError::InvalidFractions { .. })
        ));
    }
}
