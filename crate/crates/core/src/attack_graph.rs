//! Attack graphs: typed nodes (fact/exploit/privilege/goal), pre/post edges,
//! validation, and enumeration of monotonic attack paths.
//!
//! The graph is bipartite between condition nodes (`Fact`, `Exploit`) and
//! privilege nodes (`Privilege`, `Goal`). A `Pre` edge runs from a fact or
//! exploit to the privilege it establishes; a `Post` edge runs from a
//! privilege to a fact or exploit it enables. An attack step from privilege
//! `p` to privilege `q` therefore traverses `p --post--> e --pre--> q` for
//! some exploit `e`.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NodeKind {
    Fact,
    Exploit,
    Privilege,
    Goal,
}

impl NodeKind {
    /// Fact or exploit: the condition side of the bipartition.
    pub fn is_condition(self) -> bool {
        matches!(self, NodeKind::Fact | NodeKind::Exploit)
    }

    /// Privilege or goal: the attacker-state side of the bipartition.
    pub fn is_privilege(self) -> bool {
        matches!(self, NodeKind::Privilege | NodeKind::Goal)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AgNode {
    pub id: String,
    pub kind: NodeKind,
    pub label: String,
    /// Catalog key of the vulnerability behind an exploit node.
    /// Required iff `kind == Exploit`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vuln_ref: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeKind {
    Pre,
    Post,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AgEdge {
    pub from: String,
    pub to: String,
    pub kind: EdgeKind,
}

/// A full attack graph with a designated initial privilege and goal.
///
/// Immutable after load; all queries are read-only.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AttackGraph {
    pub nodes: Vec<AgNode>,
    pub edges: Vec<AgEdge>,
    pub initial: String,
    pub goal: String,
}

/// One validation finding. `code` is a stable machine-readable tag,
/// `message` names the offending node/edge ids.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub code: &'static str,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}", self.code, self.message)
    }
}

/// Outcome of [`AttackGraph::validate`]: empty means the graph is valid.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    fn push(&mut self, code: &'static str, message: String) {
        self.violations.push(Violation { code, message });
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            return write!(f, "ok");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{}", v)?;
        }
        Ok(())
    }
}

/// Parse an attack-graph file without validating it.
///
/// Used by the CLI `validate` command, which wants the report rather than an
/// error. Everything else should go through [`load_attack_graph`].
pub fn parse_attack_graph(path: impl AsRef<Path>) -> Result<AttackGraph> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| Error::parse(Some(path.to_path_buf()), e.to_string()))
}

/// Load and validate an attack graph from a JSON file.
pub fn load_attack_graph(path: impl AsRef<Path>) -> Result<AttackGraph> {
    let graph = parse_attack_graph(path)?;
    let report = graph.validate();
    if report.is_ok() {
        Ok(graph)
    } else {
        Err(Error::InvalidGraph(report))
    }
}

impl AttackGraph {
    pub fn node(&self, id: &str) -> Option<&AgNode> {
        self.nodes.iter().find(|n| n.id == id)
    }

    /// Exploit nodes in declaration order.
    pub fn exploits(&self) -> impl Iterator<Item = &AgNode> {
        self.nodes.iter().filter(|n| n.kind == NodeKind::Exploit)
    }

    /// Privilege/goal nodes in declaration order.
    pub fn privileges(&self) -> impl Iterator<Item = &AgNode> {
        self.nodes.iter().filter(|n| n.kind.is_privilege())
    }

    /// Privilege/goal nodes with a post edge into the given exploit: the
    /// privileges from which the exploit can be launched.
    pub fn exploit_sources(&self, exploit_id: &str) -> Vec<&str> {
        self.edges
            .iter()
            .filter(|e| e.kind == EdgeKind::Post && e.to == exploit_id)
            .map(|e| e.from.as_str())
            .collect()
    }

    /// Privilege/goal nodes the given exploit establishes (its pre edges).
    pub fn exploit_targets(&self, exploit_id: &str) -> Vec<&str> {
        self.edges
            .iter()
            .filter(|e| e.kind == EdgeKind::Pre && e.from == exploit_id)
            .map(|e| e.to.as_str())
            .collect()
    }

    /// Privilege-hop adjacency: for each privilege id, the `(exploit id,
    /// target privilege id)` steps available from it, in edge order.
    fn privilege_hops(&self) -> HashMap<&str, Vec<(&str, &str)>> {
        let kind_of: HashMap<&str, NodeKind> =
            self.nodes.iter().map(|n| (n.id.as_str(), n.kind)).collect();
        let mut hops: HashMap<&str, Vec<(&str, &str)>> = HashMap::new();
        for n in self.privileges() {
            hops.entry(n.id.as_str()).or_default();
        }
        for post in &self.edges {
            if post.kind != EdgeKind::Post {
                continue;
            }
            let (Some(fk), Some(tk)) =
                (kind_of.get(post.from.as_str()), kind_of.get(post.to.as_str()))
            else {
                continue;
            };
            if !(fk.is_privilege() && *tk == NodeKind::Exploit) {
                continue;
            }
            for pre in &self.edges {
                if pre.kind == EdgeKind::Pre
                    && pre.from == post.to
                    && kind_of.get(pre.to.as_str()).is_some_and(|k| k.is_privilege())
                {
                    hops.entry(post.from.as_str())
                        .or_default()
                        .push((post.to.as_str(), pre.to.as_str()));
                }
            }
        }
        hops
    }

    /// Check every graph invariant and report all violations found.
    ///
    /// Violations are data, not errors: a report with entries is a normal
    /// return value. Idempotent.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();

        let mut seen: HashSet<&str> = HashSet::new();
        for n in &self.nodes {
            if !seen.insert(n.id.as_str()) {
                report.push("duplicate-id", format!("node id `{}` declared twice", n.id));
            }
            match (n.kind, &n.vuln_ref) {
                (NodeKind::Exploit, None) => report.push(
                    "missing-vuln-ref",
                    format!("exploit node `{}` has no vulnerability reference", n.id),
                ),
                (k, Some(_)) if k != NodeKind::Exploit => report.push(
                    "unexpected-vuln-ref",
                    format!("non-exploit node `{}` carries a vulnerability reference", n.id),
                ),
                _ => {}
            }
        }

        let kind_of: HashMap<&str, NodeKind> =
            self.nodes.iter().map(|n| (n.id.as_str(), n.kind)).collect();

        for e in &self.edges {
            let from = kind_of.get(e.from.as_str()).copied();
            let to = kind_of.get(e.to.as_str()).copied();
            if from.is_none() || to.is_none() {
                report.push(
                    "dangling-edge",
                    format!("edge `{}` -> `{}` references a missing node", e.from, e.to),
                );
                continue;
            }
            let (from, to) = (from.unwrap(), to.unwrap());
            let ok = match e.kind {
                EdgeKind::Pre => from.is_condition() && to.is_privilege(),
                EdgeKind::Post => from.is_privilege() && to.is_condition(),
            };
            if !ok {
                report.push(
                    "edge-kind",
                    format!(
                        "edge kind violation: {:?} edge `{}` -> `{}` connects {:?} to {:?}",
                        e.kind, e.from, e.to, from, to
                    ),
                );
            }
        }

        match kind_of.get(self.initial.as_str()) {
            Some(NodeKind::Privilege) => {}
            _ => report.push(
                "no-initial",
                format!("no initial state: `{}` is not a privilege node", self.initial),
            ),
        }
        match kind_of.get(self.goal.as_str()) {
            Some(NodeKind::Goal) => {}
            _ => report.push(
                "no-goal",
                format!("no goal state: `{}` is not a goal node", self.goal),
            ),
        }

        // Monotonicity: the privilege-hop graph must be acyclic.
        let hops = self.privilege_hops();
        if let Some(cycle_node) = find_cycle(&hops) {
            report.push(
                "monotonicity",
                format!("privilege cycle through `{}` violates monotonicity", cycle_node),
            );
        }

        // Goal reachability from the initial privilege.
        if report.violations.iter().all(|v| v.code != "no-initial" && v.code != "no-goal") {
            let mut reached: HashSet<&str> = HashSet::new();
            let mut stack = vec![self.initial.as_str()];
            while let Some(p) = stack.pop() {
                if !reached.insert(p) {
                    continue;
                }
                if let Some(steps) = hops.get(p) {
                    for &(_, q) in steps {
                        stack.push(q);
                    }
                }
            }
            if !reached.contains(self.goal.as_str()) {
                report.push(
                    "goal-unreachable",
                    format!("goal `{}` is unreachable from `{}`", self.goal, self.initial),
                );
            }
        }

        report
    }

    /// Enumerate every simple attack path between two privilege/goal nodes.
    ///
    /// A path is reported as the ordered list of exploit ids traversed; the
    /// result is sorted lexicographically by that list. `from == to` yields
    /// the single empty path; an unreachable `to` yields no paths.
    pub fn enumerate_attack_paths(&self, from: &str, to: &str) -> Result<Vec<Vec<String>>> {
        for id in [from, to] {
            match self.node(id) {
                None => return Err(Error::Query(format!("unknown node id `{}`", id))),
                Some(n) if !n.kind.is_privilege() => {
                    return Err(Error::Query(format!(
                        "node `{}` is not a privilege or goal node",
                        id
                    )))
                }
                Some(_) => {}
            }
        }

        let hops = self.privilege_hops();
        let mut paths: Vec<Vec<String>> = Vec::new();
        let mut visited: HashSet<&str> = HashSet::new();
        let mut current: Vec<String> = Vec::new();

        fn dfs<'a>(
            node: &'a str,
            to: &str,
            hops: &HashMap<&'a str, Vec<(&'a str, &'a str)>>,
            visited: &mut HashSet<&'a str>,
            current: &mut Vec<String>,
            paths: &mut Vec<Vec<String>>,
        ) {
            if node == to {
                paths.push(current.clone());
                return;
            }
            visited.insert(node);
            if let Some(steps) = hops.get(node) {
                for &(exploit, next) in steps {
                    if visited.contains(next) {
                        continue;
                    }
                    current.push(exploit.to_string());
                    dfs(next, to, hops, visited, current, paths);
                    current.pop();
                }
            }
            visited.remove(node);
        }

        dfs(from, to, &hops, &mut visited, &mut current, &mut paths);
        paths.sort();
        paths.dedup();
        Ok(paths)
    }

    /// Longest-path rank of each privilege/goal node in the hop DAG.
    /// Transitions in a built game may never decrease this rank.
    pub fn topological_ranks(&self) -> Result<HashMap<String, usize>> {
        let hops = self.privilege_hops();
        if find_cycle(&hops).is_some() {
            return Err(Error::Graph("privilege-hop graph is cyclic".into()));
        }
        let mut rank: HashMap<String, usize> = HashMap::new();
        fn depth<'a>(
            node: &'a str,
            hops: &HashMap<&'a str, Vec<(&'a str, &'a str)>>,
            rank: &mut HashMap<String, usize>,
        ) -> usize {
            if let Some(&r) = rank.get(node) {
                return r;
            }
            let r = hops
                .get(node)
                .map(|steps| {
                    steps.iter().map(|&(_, q)| depth(q, hops, rank) + 1).max().unwrap_or(0)
                })
                .unwrap_or(0);
            rank.insert(node.to_string(), r);
            r
        }
        let keys: Vec<&str> = hops.keys().copied().collect();
        for p in keys {
            depth(p, &hops, &mut rank);
        }
        // Longest distance *to* a sink measures remaining depth; invert so
        // that ranks increase along attack progress.
        let max = rank.values().copied().max().unwrap_or(0);
        Ok(rank.into_iter().map(|(k, v)| (k, max - v)).collect())
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("attack graph serializes");
        s.push('\n');
        s
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_json()).map_err(|e| Error::io(path, e))
    }
}

/// Returns a node on a cycle of the privilege-hop graph, if any.
fn find_cycle<'a>(hops: &HashMap<&'a str, Vec<(&'a str, &'a str)>>) -> Option<&'a str> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        Open,
        Done,
    }
    let mut marks: HashMap<&str, Mark> = HashMap::new();

    fn visit<'a>(
        node: &'a str,
        hops: &HashMap<&'a str, Vec<(&'a str, &'a str)>>,
        marks: &mut HashMap<&'a str, Mark>,
    ) -> Option<&'a str> {
        match marks.get(node) {
            Some(Mark::Done) => return None,
            Some(Mark::Open) => return Some(node),
            None => {}
        }
        marks.insert(node, Mark::Open);
        if let Some(steps) = hops.get(node) {
            for &(_, q) in steps {
                if let Some(c) = visit(q, hops, marks) {
                    return Some(c);
                }
            }
        }
        marks.insert(node, Mark::Done);
        None
    }

    let mut nodes: Vec<&str> = hops.keys().copied().collect();
    nodes.sort();
    for n in nodes {
        if let Some(c) = visit(n, hops, &mut marks) {
            return Some(c);
        }
    }
    None
}
