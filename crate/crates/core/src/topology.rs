//! Synthesis of IVT-routed networks.
//!
//! The destination has address 0. `v` root nodes forward to it in one hop;
//! these are the repunits of `d* = f⁻¹(0)`, the only addresses that a
//! single-cycle rule sends to 0 directly. Each root anchors a parallel line
//! that grows by `n` phases. A phase takes the p-th pre-image `A = φ(c)` of
//! the line's current head `c` and adds the `p` nodes
//! `A, IVT(A), …, IVT^{p-1}(A)`, the last of which forwards to `c`.
//!
//! Every node forwards to `IVT(address)`, so the network is an in-tree
//! rooted at 0 with `(n·p + 1)·v + 1` nodes.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt::{self, Write as _};

use num_bigint::BigUint;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::decimal;
use crate::engine::{apply, apply_digits};
use crate::error::{Error, Result};
use crate::padic::{DigitString, Radix};
use crate::preimage::{phi, phi_digits};
use crate::rule::RuleTable;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DesignParams {
    pub rule: RuleTable,
    /// Parallel lines, one per root.
    pub v: usize,
    /// Phases per line.
    pub n: usize,
    /// Line roots in line order; `roots.len() == v`.
    pub roots: Vec<BigUint>,
}

impl DesignParams {
    /// Uses the `v` smallest roots.
    pub fn new(rule: RuleTable, v: usize, n: usize) -> Result<Self> {
        if v == 0 {
            return Err(Error::ValidationFailed("at least one parallel line is required".into()));
        }
        let roots = roots(&rule, v)?;
        Ok(DesignParams { rule, v, n, roots })
    }

    /// Explicit roots; each must be a nonzero address that forwards to 0.
    pub fn with_roots(rule: RuleTable, roots: Vec<BigUint>, n: usize) -> Result<Self> {
        rule.require_bijective_collatz()?;
        if roots.is_empty() {
            return Err(Error::ValidationFailed("at least one parallel line is required".into()));
        }
        let mut seen = HashSet::new();
        for r in &roots {
            if r.is_zero() || !apply(&rule, r).is_zero() {
                return Err(Error::ValidationFailed(format!(
                    "{r} does not forward to the destination in one hop"
                )));
            }
            if !seen.insert(r) {
                return Err(Error::DesignCollision(r.clone()));
            }
        }
        Ok(DesignParams {
            rule,
            v: roots.len(),
            n,
            roots,
        })
    }

    pub fn radix(&self) -> Radix {
        self.rule.radix()
    }

    pub fn capacity(&self) -> u128 {
        capacity(self.radix(), self.v, self.n)
    }
}

/// `(n·p + 1)·v + 1`.
pub fn capacity(p: Radix, v: usize, n: usize) -> u128 {
    (n as u128 * p.get() as u128 + 1) * v as u128 + 1
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct NetworkNode {
    #[serde(with = "decimal")]
    pub address: BigUint,
    /// 0 for the destination, else `1..=v`.
    pub line: usize,
    /// 0 for the destination and roots, else `1..=n`.
    pub phase: usize,
    pub hop_distance: usize,
    /// `None` only for the destination.
    #[serde(with = "decimal::opt")]
    pub next_hop: Option<BigUint>,
}

impl NetworkNode {
    pub fn is_destination(&self) -> bool {
        self.line == 0 && self.address.is_zero()
    }
}

/// `(m, φ(m))` with both ends in the network; `a` is exactly `p` hops
/// upstream of `m`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodePair {
    pub m: BigUint,
    pub a: BigUint,
}

impl fmt::Display for NodePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.m, self.a)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NetworkDesign {
    pub params: DesignParams,
    /// Sorted by `(line, hop_distance, address)`; the destination first.
    pub nodes: Vec<NetworkNode>,
    pub pairs: Vec<NodePair>,
}

impl NetworkDesign {
    pub fn rule(&self) -> &RuleTable {
        &self.params.rule
    }

    pub fn node(&self, address: &BigUint) -> Option<&NetworkNode> {
        self.nodes.iter().find(|n| &n.address == address)
    }

    pub fn addresses(&self) -> HashSet<&BigUint> {
        self.nodes.iter().map(|n| &n.address).collect()
    }

    pub fn edge_count(&self) -> usize {
        self.nodes.iter().filter(|n| n.next_hop.is_some()).count()
    }

    pub fn max_hop_distance(&self) -> usize {
        self.nodes.iter().map(|n| n.hop_distance).max().unwrap_or(0)
    }
}

/// Repunits of `d* = f⁻¹(0)`: `d*`, `(d*d*)_p`, … , `v` of them.
pub fn roots(rule: &RuleTable, v: usize) -> Result<Vec<BigUint>> {
    rule.require_bijective_collatz()?;
    let d = rule.preimage_digit(0).expect("bijective rule");
    Ok((1..=v)
        .map(|k| DigitString::from_le_unchecked(rule.radix(), vec![d; k]).value())
        .collect())
}

pub fn build_network(params: &DesignParams) -> Result<NetworkDesign> {
    let rule = &params.rule;
    rule.require_bijective_collatz()?;
    let p = rule.radix().get() as usize;

    let mut nodes = vec![NetworkNode {
        address: BigUint::zero(),
        line: 0,
        phase: 0,
        hop_distance: 0,
        next_hop: None,
    }];
    let mut seen: HashSet<BigUint> = HashSet::from([BigUint::zero()]);
    let mut add = |node: NetworkNode, nodes: &mut Vec<NetworkNode>| -> Result<()> {
        if !seen.insert(node.address.clone()) {
            return Err(Error::DesignCollision(node.address));
        }
        nodes.push(node);
        Ok(())
    };

    for (line, root) in (1..).zip(&params.roots) {
        add(
            NetworkNode {
                address: root.clone(),
                line,
                phase: 0,
                hop_distance: 1,
                next_hop: Some(apply(rule, root)),
            },
            &mut nodes,
        )?;
        let mut head = DigitString::from_value(root, rule.radix());
        for phase in 1..=params.n {
            let (top, ..) = phi_digits(rule, &head)?;
            let mut cur = top.clone();
            for i in 0..p {
                let next = apply_digits(rule, &cur);
                add(
                    NetworkNode {
                        address: cur.value(),
                        line,
                        phase,
                        hop_distance: 1 + phase * p - i,
                        next_hop: Some(next.value()),
                    },
                    &mut nodes,
                )?;
                cur = next;
            }
            debug_assert_eq!(cur, head);
            head = top;
        }
    }

    sort_nodes(&mut nodes);
    let mut design = NetworkDesign {
        params: params.clone(),
        nodes,
        pairs: Vec::new(),
    };
    design.pairs = optimal_pairs(&design);
    Ok(design)
}

fn sort_nodes(nodes: &mut [NetworkNode]) {
    nodes.sort_by(|a, b| {
        (a.line, a.hop_distance, &a.address).cmp(&(b.line, b.hop_distance, &b.address))
    });
}

/// All `(m, φ(m))` with both addresses in the network, sorted by `m`.
pub fn optimal_pairs(design: &NetworkDesign) -> Vec<NodePair> {
    let rule = design.rule();
    if !rule.is_bijective_collatz() {
        return Vec::new();
    }
    let present = design.addresses();
    let mut pairs: Vec<NodePair> = design
        .nodes
        .iter()
        .filter(|n| !n.address.is_zero())
        .filter_map(|n| {
            let a = phi(rule, &n.address).ok()?.a;
            present.contains(&a).then(|| NodePair {
                m: n.address.clone(),
                a,
            })
        })
        .collect();
    pairs.sort();
    pairs.dedup();
    pairs
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    MissingDestination,
    DestinationForwards,
    DuplicateAddress(BigUint),
    MissingNextHop(BigUint),
    WrongNextHop {
        address: BigUint,
        expected: BigUint,
        found: BigUint,
    },
    DanglingEdge {
        address: BigUint,
        next_hop: BigUint,
    },
    Unreachable(BigUint),
    HopDistance {
        address: BigUint,
        expected: usize,
        found: usize,
    },
    EdgeCount {
        nodes: usize,
        edges: usize,
    },
    NodeCount {
        capacity: u128,
        found: usize,
    },
    BadPair(NodePair),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::MissingDestination => write!(f, "no destination node 0"),
            Violation::DestinationForwards => write!(f, "destination has a next hop"),
            Violation::DuplicateAddress(a) => write!(f, "duplicate address {a}"),
            Violation::MissingNextHop(a) => write!(f, "node {a} has no next hop"),
            Violation::WrongNextHop {
                address,
                expected,
                found,
            } => write!(f, "node {address} forwards to {found}, IVT gives {expected}"),
            Violation::DanglingEdge { address, next_hop } => {
                write!(f, "node {address} forwards to {next_hop}, which is not in the network")
            }
            Violation::Unreachable(a) => write!(f, "node {a} never reaches the destination"),
            Violation::HopDistance {
                address,
                expected,
                found,
            } => write!(f, "node {address} records hop distance {found}, actual {expected}"),
            Violation::EdgeCount { nodes, edges } => {
                write!(f, "{edges} edges for {nodes} nodes, expected {}", nodes.saturating_sub(1))
            }
            Violation::NodeCount { capacity, found } => {
                write!(f, "{found} nodes, capacity formula gives {capacity}")
            }
            Violation::BadPair(pair) => write!(f, "pair {pair} is not an optimal pair of this network"),
        }
    }
}

/// Checks the in-tree structure. An empty list means the design is valid.
pub fn validate(design: &NetworkDesign) -> Vec<Violation> {
    let rule = design.rule();
    let mut out = Vec::new();

    let mut by_address: HashMap<&BigUint, &NetworkNode> = HashMap::new();
    for node in &design.nodes {
        if by_address.insert(&node.address, node).is_some() {
            out.push(Violation::DuplicateAddress(node.address.clone()));
        }
    }

    match by_address.get(&BigUint::zero()) {
        None => out.push(Violation::MissingDestination),
        Some(d) if d.next_hop.is_some() => out.push(Violation::DestinationForwards),
        Some(_) => {}
    }

    for node in design.nodes.iter().filter(|n| !n.address.is_zero()) {
        let Some(next) = &node.next_hop else {
            out.push(Violation::MissingNextHop(node.address.clone()));
            continue;
        };
        let expected = apply(rule, &node.address);
        if &expected != next {
            out.push(Violation::WrongNextHop {
                address: node.address.clone(),
                expected,
                found: next.clone(),
            });
        }
        if !by_address.contains_key(next) {
            out.push(Violation::DanglingEdge {
                address: node.address.clone(),
                next_hop: next.clone(),
            });
        }
    }

    let edges = design.edge_count();
    if edges + 1 != design.nodes.len() {
        out.push(Violation::EdgeCount {
            nodes: design.nodes.len(),
            edges,
        });
    }
    let capacity = design.params.capacity();
    if capacity != design.nodes.len() as u128 {
        out.push(Violation::NodeCount {
            capacity,
            found: design.nodes.len(),
        });
    }

    // follow recorded next hops; a walk longer than the table is a cycle
    let limit = design.nodes.len();
    for node in &design.nodes {
        let mut cur = node;
        let mut steps = 0;
        let reached = loop {
            if cur.address.is_zero() {
                break true;
            }
            if steps > limit {
                break false;
            }
            match cur.next_hop.as_ref().and_then(|h| by_address.get(h)) {
                Some(next) => cur = next,
                None => break false,
            }
            steps += 1;
        };
        if !reached {
            out.push(Violation::Unreachable(node.address.clone()));
        } else if steps != node.hop_distance {
            out.push(Violation::HopDistance {
                address: node.address.clone(),
                expected: steps,
                found: node.hop_distance,
            });
        }
    }

    for pair in &design.pairs {
        let ok = by_address.contains_key(&pair.m)
            && by_address.contains_key(&pair.a)
            && phi(rule, &pair.m).map(|r| r.a == pair.a).unwrap_or(false);
        if !ok {
            out.push(Violation::BadPair(pair.clone()));
        }
    }
    out
}

/// Canonical encoding of the in-tree with addresses erased. Two valid
/// designs have equal forms iff their topologies are isomorphic.
///
/// Subtree shapes are numbered bottom-up by height; shapes of equal height
/// are numbered in order of their sorted child-number lists, which depends
/// only on the set of shapes present. The form is the parenthesised tree
/// with children emitted in shape-number order.
pub fn canonical_form(design: &NetworkDesign) -> Result<String> {
    let violations = validate(design);
    if !violations.is_empty() {
        let msg: Vec<String> = violations.iter().map(|v| v.to_string()).collect();
        return Err(Error::ValidationFailed(msg.join("; ")));
    }

    let index: HashMap<&BigUint, usize> = design
        .nodes
        .iter()
        .enumerate()
        .map(|(i, n)| (&n.address, i))
        .collect();
    let count = design.nodes.len();
    let root = index[&BigUint::zero()];
    let mut children = vec![Vec::new(); count];
    for (i, node) in design.nodes.iter().enumerate() {
        if let Some(h) = &node.next_hop {
            children[index[h]].push(i);
        }
    }

    // BFS order from the destination; reversed it visits children first
    let mut order = Vec::with_capacity(count);
    order.push(root);
    let mut head = 0;
    while head < order.len() {
        let u = order[head];
        head += 1;
        order.extend_from_slice(&children[u]);
    }

    let mut height = vec![0usize; count];
    for &u in order.iter().rev() {
        height[u] = children[u].iter().map(|&c| height[c] + 1).max().unwrap_or(0);
    }
    let mut by_height: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (u, &h) in height.iter().enumerate() {
        by_height.entry(h).or_default().push(u);
    }

    let mut shape = vec![0usize; count];
    let mut next_id = 0;
    for level in by_height.values() {
        let keys: Vec<Vec<usize>> = level
            .iter()
            .map(|&u| {
                let mut k: Vec<usize> = children[u].iter().map(|&c| shape[c]).collect();
                k.sort_unstable();
                k
            })
            .collect();
        let mut distinct = keys.clone();
        distinct.sort();
        distinct.dedup();
        for (&u, key) in level.iter().zip(&keys) {
            shape[u] = next_id + distinct.binary_search(key).expect("key present");
        }
        next_id += distinct.len();
    }

    for c in children.iter_mut() {
        c.sort_by_key(|&x| shape[x]);
    }
    let mut out = String::with_capacity(2 * count);
    let mut stack = vec![(root, false)];
    while let Some((u, done)) = stack.pop() {
        if done {
            out.push(')');
            continue;
        }
        out.push('(');
        stack.push((u, true));
        for &c in children[u].iter().rev() {
            stack.push((c, false));
        }
    }
    Ok(out)
}

#[derive(Serialize, Deserialize)]
struct DesignDoc {
    p: u8,
    #[serde(with = "decimal")]
    rule: BigUint,
    v: usize,
    n: usize,
    #[serde(with = "decimal")]
    destination: BigUint,
    nodes: Vec<NetworkNode>,
    pairs: Vec<[String; 2]>,
}

pub fn export_json(design: &NetworkDesign) -> String {
    let mut nodes = design.nodes.clone();
    sort_nodes(&mut nodes);
    let doc = DesignDoc {
        p: design.params.radix().get(),
        rule: design.rule().index(),
        v: design.params.v,
        n: design.params.n,
        destination: BigUint::zero(),
        nodes,
        pairs: design
            .pairs
            .iter()
            .map(|p| [p.m.to_string(), p.a.to_string()])
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("design serializes") + "\n"
}

/// Reads a document written by [`export_json`]. The node table is taken
/// as-is; run [`validate`] to check it.
pub fn import_json(text: &str) -> Result<NetworkDesign> {
    let doc: DesignDoc = serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
    let radix = Radix::new(doc.p as u32)?;
    let rule = RuleTable::from_index(&doc.rule, radix)?;
    rule.require_bijective_collatz()?;
    if !doc.destination.is_zero() {
        return Err(Error::Format("destination must be \"0\"".into()));
    }
    let mut root_nodes: Vec<&NetworkNode> = doc
        .nodes
        .iter()
        .filter(|n| n.line > 0 && n.phase == 0)
        .collect();
    root_nodes.sort_by_key(|n| n.line);
    let roots = root_nodes.iter().map(|n| n.address.clone()).collect();
    let pairs = doc
        .pairs
        .iter()
        .map(|[m, a]| {
            Ok(NodePair {
                m: decimal::parse(m).map_err(Error::Format)?,
                a: decimal::parse(a).map_err(Error::Format)?,
            })
        })
        .collect::<Result<_>>()?;
    Ok(NetworkDesign {
        params: DesignParams {
            rule,
            v: doc.v,
            n: doc.n,
            roots,
        },
        nodes: doc.nodes,
        pairs,
    })
}

/// Graphviz rendering: one edge `"address" -> "next_hop";` per line.
pub fn export_dot(design: &NetworkDesign) -> String {
    let mut nodes = design.nodes.clone();
    sort_nodes(&mut nodes);
    let mut out = String::new();
    let _ = writeln!(out, "digraph ivt {{");
    let _ = writeln!(
        out,
        "  label=\"p={} rule={} v={} n={}\";",
        design.params.radix(),
        design.rule().index(),
        design.params.v,
        design.params.n
    );
    let _ = writeln!(out, "  rankdir=BT;");
    let _ = writeln!(out, "  \"0\" [label=\"0 (destination)\", shape=doublecircle];");
    for node in &nodes {
        if let Some(next) = &node.next_hop {
            let _ = writeln!(out, "  \"{}\" -> \"{}\";", node.address, next);
        }
    }
    out.push_str("}\n");
    out
}
