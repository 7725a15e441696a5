//! Hop-by-hop routing over a designed network with per-node next-hop
//! caching.
//!
//! Every message travels from its source to the destination 0 by
//! repeatedly forwarding to `IVT(address)`. The first time a node forwards
//! it computes that address and stores it (a virtual link); later messages
//! through the same node reuse the entry. A cache miss is the single cost
//! counted as a "computation"; the uncached baseline computes at every hop.

use std::collections::{BTreeMap, HashSet};
use std::fmt::Write as _;

use num_bigint::BigUint;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::decimal;
use crate::engine::apply;
use crate::error::{Error, Result};
use crate::topology::NetworkDesign;

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Scenario {
    /// Each source sends one message, in this order.
    #[serde(with = "decimal::vec")]
    pub sources: Vec<BigUint>,
}

impl Scenario {
    pub fn new(sources: Vec<BigUint>) -> Self {
        Scenario { sources }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serializes") + "\n"
    }
}

/// Next hops learned so far, keyed by node address.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CacheTable {
    entries: BTreeMap<BigUint, BigUint>,
}

impl CacheTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, address: &BigUint) -> Option<&BigUint> {
        self.entries.get(address)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&BigUint, &BigUint)> {
        self.entries.iter()
    }

    // entries are write-once
    fn insert(&mut self, address: BigUint, next: BigUint) {
        let prev = self.entries.insert(address, next);
        debug_assert!(prev.is_none());
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MessageTrace {
    #[serde(with = "decimal")]
    pub source: BigUint,
    #[serde(with = "decimal::vec")]
    pub path: Vec<BigUint>,
    pub hops: usize,
    pub computations: usize,
    pub cache_hits: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Totals {
    pub hops: usize,
    pub computations: usize,
    pub cache_hits: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct SimulationReport {
    pub messages: Vec<MessageTrace>,
    pub totals: Totals,
    /// Computations without caching, one per hop.
    pub uncached_baseline_computations: usize,
    pub savings: usize,
}

impl SimulationReport {
    fn push(&mut self, trace: MessageTrace) {
        self.totals.hops += trace.hops;
        self.totals.computations += trace.computations;
        self.totals.cache_hits += trace.cache_hits;
        self.uncached_baseline_computations = self.totals.hops;
        self.savings = self.uncached_baseline_computations - self.totals.computations;
        self.messages.push(trace);
    }
}

/// Routes messages for one design, owning the cache across messages.
pub struct Router<'a> {
    design: &'a NetworkDesign,
    members: HashSet<&'a BigUint>,
    cache: CacheTable,
}

impl<'a> Router<'a> {
    pub fn new(design: &'a NetworkDesign) -> Self {
        Self::with_cache(design, CacheTable::new())
    }

    pub fn with_cache(design: &'a NetworkDesign, cache: CacheTable) -> Self {
        Router {
            design,
            members: design.addresses(),
            cache,
        }
    }

    pub fn cache(&self) -> &CacheTable {
        &self.cache
    }

    pub fn into_cache(self) -> CacheTable {
        self.cache
    }

    pub fn route(&mut self, source: &BigUint) -> Result<MessageTrace> {
        if !self.members.contains(source) {
            return Err(Error::UnknownSource(source.clone()));
        }
        let rule = self.design.rule();
        let mut trace = MessageTrace {
            source: source.clone(),
            path: vec![source.clone()],
            hops: 0,
            computations: 0,
            cache_hits: 0,
        };
        let mut cur = source.clone();
        while !cur.is_zero() {
            let next = match self.cache.get(&cur) {
                Some(next) => {
                    trace.cache_hits += 1;
                    next.clone()
                }
                None => {
                    let next = apply(rule, &cur);
                    trace.computations += 1;
                    self.cache.insert(cur, next.clone());
                    next
                }
            };
            trace.hops += 1;
            trace.path.push(next.clone());
            cur = next;
        }
        Ok(trace)
    }
}

/// Routes one message from `source`, updating `cache`.
pub fn route_message(design: &NetworkDesign, cache: &mut CacheTable, source: &BigUint) -> Result<MessageTrace> {
    let mut router = Router::with_cache(design, std::mem::take(cache));
    let res = router.route(source);
    *cache = router.into_cache();
    res
}

/// Runs every message of `scenario` in order against a fresh cache.
pub fn simulate(design: &NetworkDesign, scenario: &Scenario) -> Result<SimulationReport> {
    let mut router = Router::new(design);
    let mut report = SimulationReport::default();
    for source in &scenario.sources {
        report.push(router.route(source)?);
    }
    Ok(report)
}

pub fn report_json(report: &SimulationReport) -> String {
    serde_json::to_string_pretty(report).expect("report serializes") + "\n"
}

pub fn parse_report(text: &str) -> Result<SimulationReport> {
    serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))
}

/// Plain-text table, one row per message plus totals.
pub fn report_table(report: &SimulationReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{:>6} {:>24} {:>6} {:>6} {:>6}", "msg", "source", "hops", "comp", "hits");
    for (i, m) in report.messages.iter().enumerate() {
        let _ = writeln!(
            out,
            "{:>6} {:>24} {:>6} {:>6} {:>6}",
            i + 1,
            m.source.to_string(),
            m.hops,
            m.computations,
            m.cache_hits
        );
    }
    let t = &report.totals;
    let _ = writeln!(out, "{:>6} {:>24} {:>6} {:>6} {:>6}", "total", "", t.hops, t.computations, t.cache_hits);
    let _ = writeln!(out, "uncached baseline computations: {}", report.uncached_baseline_computations);
    let _ = writeln!(out, "savings: {}", report.savings);
    out
}
