//! Deterministic generation of synthetic layered cloud scenarios, plus the
//! built-in LDAP/Web/FTP demo scenario.
//!
//! Generation is a pure function of the [`ScenarioSpec`]: the generator owns
//! a counter-based pseudo-random stream (64-bit splitmix mixing) so the same
//! spec produces byte-identical files on every platform.

use serde::{Deserialize, Serialize};

use crate::attack_graph::{AgEdge, AgNode, AttackGraph, EdgeKind, NodeKind};
use crate::error::{Error, Result};
use crate::vuln_catalog::{AccessComplexity, Catalog, VulnRecord};

/// Counter-based 64-bit generator (splitmix mixing).
///
/// Not cryptographic; used only so scenario generation is reproducible
/// without depending on an external RNG implementation.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform float in [0, 1) with 53 random bits.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    /// Uniform integer in [0, n) via 128-bit multiply-shift.
    pub fn below(&mut self, n: u64) -> u64 {
        ((self.next_u64() as u128 * n as u128) >> 64) as u64
    }

    /// Index drawn proportionally to the given nonnegative weights.
    pub fn weighted(&mut self, weights: &[f64]) -> usize {
        let total: f64 = weights.iter().sum();
        let mut target = self.next_f64() * total;
        for (i, w) in weights.iter().enumerate() {
            target -= w;
            if target < 0.0 {
                return i;
            }
        }
        weights.len() - 1
    }
}

/// Size and distribution parameters of a generated scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioSpec {
    pub seed: u64,
    pub n_vms: u32,
    pub n_vulns: u32,
    pub n_layers: u32,
    /// Inclusive CIA range, within [0, 10].
    pub cia_range: (f64, f64),
    /// Sampling weights for easy/medium/high access complexity.
    pub ac_weights: [f64; 3],
}

impl Default for ScenarioSpec {
    fn default() -> Self {
        ScenarioSpec {
            seed: 0,
            n_vms: 3,
            n_vulns: 100,
            n_layers: 3,
            cia_range: (1.0, 10.0),
            ac_weights: [0.3, 0.5, 0.2],
        }
    }
}

impl ScenarioSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n_vms == 0 || self.n_vulns == 0 || self.n_layers == 0 {
            return Err(Error::Config("n_vms, n_vulns and n_layers must be at least 1".into()));
        }
        if self.n_layers > self.n_vms {
            return Err(Error::Config(format!(
                "{} layers cannot be populated by {} VMs",
                self.n_layers, self.n_vms
            )));
        }
        let (lo, hi) = self.cia_range;
        if !(lo >= 0.0 && lo <= hi && hi <= 10.0) {
            return Err(Error::Config(format!("cia range [{lo}, {hi}] outside [0, 10]")));
        }
        if self.ac_weights.iter().any(|w| *w < 0.0 || w.is_nan()) {
            return Err(Error::Config("ac weights must be nonnegative".into()));
        }
        let weight_sum: f64 = self.ac_weights.iter().sum();
        if weight_sum <= 0.0 || weight_sum.is_nan() {
            return Err(Error::Config("ac weights must not all be zero".into()));
        }
        Ok(())
    }
}

const SERVICES: [&str; 8] = ["ssh", "http", "ftp", "smtp", "ldap", "sql", "nfs", "rdp"];

/// Generate a layered scenario. VMs are assigned round-robin to layers and
/// carry a user and a root privilege each. Every vulnerability becomes one
/// exploit: either a local privilege escalation on its VM (user to root) or
/// a remote hop from a previous-layer root onto the VM's user level; vulns
/// on layer-0 VMs are always local. The attacker starts with user access on
/// the first VM; root on the last VM of the last layer is the goal. Retries
/// with a reseeded stream (up to 100 attempts) if the sampled exploits leave
/// the goal unreachable.
pub fn generate_scenario(spec: &ScenarioSpec) -> Result<(AttackGraph, Catalog)> {
    spec.validate()?;

    for attempt in 0..100u64 {
        let mut rng = SplitMix64::new(spec.seed ^ attempt.wrapping_mul(0x9E37_79B9_7F4A_7C15));
        let (graph, catalog) = sample_scenario(spec, &mut rng);
        if graph.validate().is_ok() {
            return Ok((graph, catalog));
        }
    }
    Err(Error::Graph(format!(
        "no scenario with a reachable goal after 100 attempts for seed {}",
        spec.seed
    )))
}

fn sample_scenario(spec: &ScenarioSpec, rng: &mut SplitMix64) -> (AttackGraph, Catalog) {
    let n_vms = spec.n_vms as usize;
    let n_layers = spec.n_layers as usize;
    let vm_name = |i: usize| format!("vm{i:03}");
    let user_of = |i: usize| format!("{}:user", vm_name(i));
    let root_of = |i: usize| format!("{}:root", vm_name(i));
    let layer_of = |i: usize| i % n_layers;
    let vms_in_layer =
        |l: usize| -> Vec<usize> { (0..n_vms).filter(|&i| layer_of(i) == l).collect() };
    let goal_vm = (0..n_vms).filter(|&i| layer_of(i) == n_layers - 1).max().unwrap();

    let mut nodes = Vec::new();
    let mut edges = Vec::new();

    for i in 0..n_vms {
        nodes.push(AgNode {
            id: user_of(i),
            kind: NodeKind::Privilege,
            label: format!("user access on {}", vm_name(i)),
            vuln_ref: None,
        });
        let kind = if i == goal_vm { NodeKind::Goal } else { NodeKind::Privilege };
        nodes.push(AgNode {
            id: root_of(i),
            kind,
            label: format!("root access on {}", vm_name(i)),
            vuln_ref: None,
        });
    }

    let mut records = Vec::new();
    for k in 0..spec.n_vulns {
        let key = format!("v{k:04}");
        let target_vm = rng.below(spec.n_vms as u64) as usize;
        let layer = layer_of(target_vm);
        let remote = rng.below(2) == 1 && target_vm != 0;
        let (source, target, what) = if remote {
            // Layer-0 VMs are reached laterally from the entry foothold,
            // deeper layers from a root one layer up.
            let source = if layer == 0 {
                user_of(0)
            } else {
                let candidates = vms_in_layer(layer - 1);
                root_of(candidates[rng.below(candidates.len() as u64) as usize])
            };
            (source, user_of(target_vm), "remote exploit against")
        } else {
            (user_of(target_vm), root_of(target_vm), "local privilege escalation on")
        };
        let service = SERVICES[rng.below(SERVICES.len() as u64) as usize];
        let (lo, hi) = spec.cia_range;
        let cia = ((lo + rng.next_f64() * (hi - lo)) * 10.0).round() / 10.0;
        let ac = match rng.weighted(&spec.ac_weights) {
            0 => AccessComplexity::Easy,
            1 => AccessComplexity::Medium,
            _ => AccessComplexity::High,
        };

        let exploit_id = format!("exp-{key}");
        nodes.push(AgNode {
            id: exploit_id.clone(),
            kind: NodeKind::Exploit,
            label: format!("{service} {what} {}", vm_name(target_vm)),
            vuln_ref: Some(key.clone()),
        });
        edges.push(AgEdge { from: source, to: exploit_id.clone(), kind: EdgeKind::Post });
        edges.push(AgEdge { from: exploit_id, to: target, kind: EdgeKind::Pre });

        records.push(VulnRecord {
            key,
            cve: format!("CVE-2020-{:04}", 1000 + k),
            vm: vm_name(target_vm),
            service: service.to_string(),
            cia,
            ac,
        });
    }

    let graph = AttackGraph {
        nodes,
        edges,
        initial: user_of(0),
        goal: root_of(goal_vm),
    };
    let catalog = Catalog::from_records(records).expect("generated records are valid");
    (graph, catalog)
}

/// The three-VM demo scenario: an attacker with user access on an LDAP
/// server works toward root on an FTP server, directly or through a web
/// server, using the three catalogued vulnerabilities.
pub fn demo_scenario() -> (AttackGraph, Catalog) {
    let node = |id: &str, kind: NodeKind, label: &str, vuln: Option<&str>| AgNode {
        id: id.into(),
        kind,
        label: label.into(),
        vuln_ref: vuln.map(Into::into),
    };
    let edge = |from: &str, to: &str, kind: EdgeKind| AgEdge {
        from: from.into(),
        to: to.into(),
        kind,
    };

    let graph = AttackGraph {
        nodes: vec![
            node("LDAP:user", NodeKind::Privilege, "user access on the LDAP server", None),
            node("LDAP:root", NodeKind::Privilege, "root access on the LDAP server", None),
            node("Web:root", NodeKind::Privilege, "root access on the web server", None),
            node("FTP:root", NodeKind::Goal, "root access on the FTP server", None),
            node(
                "exploit-LDAP",
                NodeKind::Exploit,
                "local privilege escalation on the LDAP server",
                Some("ldap-dirtycow"),
            ),
            node(
                "exploit-Web",
                NodeKind::Exploit,
                "cross-site scripting on the web server",
                Some("web-xss"),
            ),
            node(
                "exploit-FTP",
                NodeKind::Exploit,
                "remote code execution on the FTP server",
                Some("ftp-rce"),
            ),
        ],
        edges: vec![
            edge("LDAP:user", "exploit-LDAP", EdgeKind::Post),
            edge("exploit-LDAP", "LDAP:root", EdgeKind::Pre),
            edge("LDAP:root", "exploit-Web", EdgeKind::Post),
            edge("exploit-Web", "Web:root", EdgeKind::Pre),
            edge("LDAP:root", "exploit-FTP", EdgeKind::Post),
            edge("Web:root", "exploit-FTP", EdgeKind::Post),
            edge("exploit-FTP", "FTP:root", EdgeKind::Pre),
        ],
        initial: "LDAP:user".into(),
        goal: "FTP:root".into(),
    };

    let record = |key: &str, cve: &str, vm: &str, service: &str, cia: f64, ac| VulnRecord {
        key: key.into(),
        cve: cve.into(),
        vm: vm.into(),
        service: service.into(),
        cia,
        ac,
    };
    let catalog = Catalog::from_records([
        record("ldap-dirtycow", "CVE-2016-5195", "LDAP", "ldap", 5.0, AccessComplexity::Medium),
        record("web-xss", "CVE-2017-5095", "Web", "http", 7.0, AccessComplexity::Easy),
        record("ftp-rce", "CVE-2015-3306", "FTP", "ftp", 10.0, AccessComplexity::Medium),
    ])
    .expect("fixture catalog is valid");

    (graph, catalog)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splitmix_known_answers() {
        // Reference outputs of the canonical splitmix64 mixing for seed 0
        // and seed 42 (first three values each).
        let mut rng = SplitMix64::new(0);
        assert_eq!(rng.next_u64(), 0xE220_A839_7B1D_CDAF);
        assert_eq!(rng.next_u64(), 0x6E78_9E6A_A1B9_65F4);
        assert_eq!(rng.next_u64(), 0x06C4_5D18_8009_454F);
        let mut rng = SplitMix64::new(42);
        assert_eq!(rng.next_u64(), 0xBDD7_3226_2FEB_6E95);
        assert_eq!(rng.next_u64(), 0x28EF_E333_B266_F103);
        assert_eq!(rng.next_u64(), 0x4752_6757_130F_9F52);
    }

    #[test]
    fn next_f64_is_in_unit_interval() {
        let mut rng = SplitMix64::new(7);
        for _ in 0..1000 {
            let x = rng.next_f64();
            assert!((0.0..1.0).contains(&x));
        }
    }

    #[test]
    fn below_stays_in_range() {
        let mut rng = SplitMix64::new(9);
        for n in [1u64, 2, 3, 17, 1000] {
            for _ in 0..200 {
                assert!(rng.below(n) < n);
            }
        }
    }

    #[test]
    fn full_scale_scenario_generates_and_validates() {
        let spec = ScenarioSpec { seed: 7, ..ScenarioSpec::default() };
        let (graph, catalog) = generate_scenario(&spec).unwrap();
        assert!(graph.validate().is_ok());
        assert_eq!(catalog.len(), 100);
        assert_eq!(graph.exploits().count(), 100);
    }

    #[test]
    fn generation_is_deterministic() {
        let spec = ScenarioSpec { seed: 7, ..ScenarioSpec::default() };
        let (g1, c1) = generate_scenario(&spec).unwrap();
        let (g2, c2) = generate_scenario(&spec).unwrap();
        assert_eq!(g1.to_json(), g2.to_json());
        assert_eq!(c1.to_json(), c2.to_json());
    }

    #[test]
    fn different_seeds_differ() {
        let a = generate_scenario(&ScenarioSpec { seed: 1, ..ScenarioSpec::default() }).unwrap();
        let b = generate_scenario(&ScenarioSpec { seed: 2, ..ScenarioSpec::default() }).unwrap();
        assert_ne!(a.0.to_json(), b.0.to_json());
    }

    #[test]
    fn zero_sizes_are_rejected() {
        for spec in [
            ScenarioSpec { n_vms: 0, ..ScenarioSpec::default() },
            ScenarioSpec { n_vulns: 0, ..ScenarioSpec::default() },
            ScenarioSpec { n_layers: 0, ..ScenarioSpec::default() },
            ScenarioSpec { n_layers: 5, n_vms: 3, ..ScenarioSpec::default() },
            ScenarioSpec { cia_range: (4.0, 11.0), ..ScenarioSpec::default() },
            ScenarioSpec { ac_weights: [0.0, 0.0, 0.0], ..ScenarioSpec::default() },
        ] {
            assert!(generate_scenario(&spec).is_err(), "{spec:?} should be rejected");
        }
    }

    #[test]
    fn generated_cias_respect_the_range() {
        let spec = ScenarioSpec { seed: 3, cia_range: (2.0, 4.0), ..ScenarioSpec::default() };
        let (_, catalog) = generate_scenario(&spec).unwrap();
        for rec in catalog.iter() {
            assert!(rec.cia >= 2.0 && rec.cia <= 4.0, "cia {} out of range", rec.cia);
        }
    }

    #[test]
    fn small_scenarios_validate_across_seeds() {
        for seed in 0..30 {
            let spec = ScenarioSpec {
                seed,
                n_vms: 4,
                n_vulns: 12,
                n_layers: 2,
                ..ScenarioSpec::default()
            };
            let (graph, catalog) = generate_scenario(&spec).unwrap();
            assert!(graph.validate().is_ok(), "seed {seed} generated an invalid graph");
            assert_eq!(catalog.len(), 12);
        }
    }

    #[test]
    fn fixture_validates_and_matches_the_catalog() {
        let (graph, catalog) = demo_scenario();
        assert!(graph.validate().is_ok());
        assert_eq!(graph.exploits().count(), 3);
        assert_eq!(graph.privileges().count(), 4);
        let cias: Vec<f64> = catalog.iter().map(|r| r.cia).collect();
        assert_eq!(cias, vec![10.0, 5.0, 7.0]); // key order: ftp-rce, ldap-dirtycow, web-xss
        assert_eq!(catalog.get("ldap-dirtycow").unwrap().cve, "CVE-2016-5195");
        assert_eq!(catalog.get("web-xss").unwrap().ac, AccessComplexity::Easy);
    }

    #[test]
    fn fixture_has_exactly_the_two_documented_paths() {
        let (graph, _) = demo_scenario();
        let paths = graph.enumerate_attack_paths("LDAP:user", "FTP:root").unwrap();
        assert_eq!(
            paths,
            vec![
                vec!["exploit-LDAP".to_string(), "exploit-FTP".to_string()],
                vec![
                    "exploit-LDAP".to_string(),
                    "exploit-Web".to_string(),
                    "exploit-FTP".to_string()
                ],
            ]
        );
    }
}
