//! Social graph and retweet log data model.
//!
//! Node ids are dense integers internally; external string ids live only in
//! [`NodeIdMap`] at the I/O boundary. The follow graph is stored both as a
//! deduplicated directed edge set and as a symmetric undirected view with
//! sorted CSR adjacency, which is what every downstream computation (tie
//! strength, diffusion) consumes. A directed pair and its reverse collapse to
//! one undirected edge; whether both directions were present is retained per
//! edge as a reciprocal-follow flag.

use std::collections::HashMap;
use std::io::BufRead;

use rand::{Rng, SeedableRng};
use rand_pcg::Pcg64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense internal node id.
pub type NodeId = u32;

/// Bidirectional mapping between external string ids and dense internal ids.
///
/// Ids are assigned in first-appearance order and stay stable for the session.
#[derive(Debug, Clone, Default)]
pub struct NodeIdMap {
    names: Vec<String>,
    index: HashMap<String, NodeId>,
}

impl NodeIdMap {
    pub fn new() -> Self {
        Self::default()
    }

    /// Intern an external id, returning its dense id (existing or new).
    pub fn intern(&mut self, name: &str) -> NodeId {
        if let Some(&id) = self.index.get(name) {
            return id;
        }
        let id = self.names.len() as NodeId;
        self.names.push(name.to_owned());
        self.index.insert(name.to_owned(), id);
        id
    }

    pub fn get(&self, name: &str) -> Option<NodeId> {
        self.index.get(name).copied()
    }

    pub fn name(&self, id: NodeId) -> Option<&str> {
        self.names.get(id as usize).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    /// External names in dense-id order.
    pub fn names(&self) -> &[String] {
        &self.names
    }

    fn from_names(names: Vec<String>) -> Result<Self> {
        let mut index = HashMap::with_capacity(names.len());
        for (i, name) in names.iter().enumerate() {
            if index.insert(name.clone(), i as NodeId).is_some() {
                return Err(Error::Format(format!("duplicate node name {name:?}")));
            }
        }
        Ok(Self { names, index })
    }
}

/// Emotion label attached to a retweet or tweet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Emotion {
    Joy,
    Anger,
    Disgust,
    Sadness,
    /// Tweet carried no recognized emotion.
    None,
}

impl Emotion {
    pub const ALL: [Emotion; 5] = [
        Emotion::Joy,
        Emotion::Anger,
        Emotion::Disgust,
        Emotion::Sadness,
        Emotion::None,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Emotion::Joy => "joy",
            Emotion::Anger => "anger",
            Emotion::Disgust => "disgust",
            Emotion::Sadness => "sadness",
            Emotion::None => "none",
        }
    }

    pub fn is_emotional(self) -> bool {
        self != Emotion::None
    }
}

impl std::str::FromStr for Emotion {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "joy" => Ok(Emotion::Joy),
            "anger" => Ok(Emotion::Anger),
            "disgust" => Ok(Emotion::Disgust),
            "sadness" => Ok(Emotion::Sadness),
            "none" => Ok(Emotion::None),
            other => Err(Error::InvalidArgument(format!(
                "unknown emotion token {other:?} (expected joy, anger, disgust, sadness or none)"
            ))),
        }
    }
}

impl std::fmt::Display for Emotion {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Directed follow graph plus its derived undirected interaction view.
#[derive(Debug, Clone, PartialEq)]
pub struct SocialGraph {
    node_count: usize,
    directed_edges: Vec<(NodeId, NodeId)>,
    undirected_edges: Vec<(NodeId, NodeId)>,
    reciprocal: Vec<bool>,
    adj_offsets: Vec<usize>,
    adj_nodes: Vec<NodeId>,
    adj_edge_index: Vec<u32>,
}

impl SocialGraph {
    /// Build a graph from directed `(follower, followee)` pairs.
    ///
    /// Duplicate pairs are collapsed; self-loops are rejected.
    pub fn from_directed_edges(
        node_count: usize,
        edges: impl IntoIterator<Item = (NodeId, NodeId)>,
    ) -> Result<Self> {
        let mut directed: Vec<(NodeId, NodeId)> = Vec::new();
        for (a, b) in edges {
            if a == b {
                return Err(Error::InvalidArgument(format!("self-loop at node {a}")));
            }
            if (a as usize) >= node_count || (b as usize) >= node_count {
                return Err(Error::UnknownNode(format!(
                    "edge ({a}, {b}) exceeds node count {node_count}"
                )));
            }
            directed.push((a, b));
        }
        directed.sort_unstable();
        directed.dedup();

        // Collapse to undirected pairs, remembering which had both directions.
        let mut undirected: Vec<(NodeId, NodeId)> =
            directed.iter().map(|&(a, b)| order_pair(a, b)).collect();
        undirected.sort_unstable();
        undirected.dedup();
        let reciprocal: Vec<bool> = undirected
            .iter()
            .map(|&(u, v)| {
                directed.binary_search(&(u, v)).is_ok() && directed.binary_search(&(v, u)).is_ok()
            })
            .collect();

        // CSR adjacency over the undirected view, neighbors sorted per node.
        let mut degree = vec![0usize; node_count];
        for &(u, v) in &undirected {
            degree[u as usize] += 1;
            degree[v as usize] += 1;
        }
        let mut adj_offsets = Vec::with_capacity(node_count + 1);
        adj_offsets.push(0usize);
        for d in &degree {
            adj_offsets.push(adj_offsets.last().unwrap() + d);
        }
        let total = *adj_offsets.last().unwrap();
        let mut adj_nodes = vec![0 as NodeId; total];
        let mut adj_edge_index = vec![0u32; total];
        let mut cursor = adj_offsets.clone();
        for (e, &(u, v)) in undirected.iter().enumerate() {
            adj_nodes[cursor[u as usize]] = v;
            adj_edge_index[cursor[u as usize]] = e as u32;
            cursor[u as usize] += 1;
            adj_nodes[cursor[v as usize]] = u;
            adj_edge_index[cursor[v as usize]] = e as u32;
            cursor[v as usize] += 1;
        }
        // `undirected` is sorted by (u, v), so each node's slice comes out
        // sorted for u-sides; v-sides need a per-node sort.
        for i in 0..node_count {
            let range = adj_offsets[i]..adj_offsets[i + 1];
            let mut pairs: Vec<(NodeId, u32)> = adj_nodes[range.clone()]
                .iter()
                .copied()
                .zip(adj_edge_index[range.clone()].iter().copied())
                .collect();
            pairs.sort_unstable();
            for (k, (n, e)) in pairs.into_iter().enumerate() {
                adj_nodes[adj_offsets[i] + k] = n;
                adj_edge_index[adj_offsets[i] + k] = e;
            }
        }

        Ok(Self {
            node_count,
            directed_edges: directed,
            undirected_edges: undirected,
            reciprocal,
            adj_offsets,
            adj_nodes,
            adj_edge_index,
        })
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn directed_edge_count(&self) -> usize {
        self.directed_edges.len()
    }

    pub fn undirected_edge_count(&self) -> usize {
        self.undirected_edges.len()
    }

    pub fn directed_edges(&self) -> &[(NodeId, NodeId)] {
        &self.directed_edges
    }

    /// Undirected edges as `(u, v)` with `u < v`, sorted.
    pub fn undirected_edges(&self) -> &[(NodeId, NodeId)] {
        &self.undirected_edges
    }

    pub fn contains_node(&self, i: NodeId) -> bool {
        (i as usize) < self.node_count
    }

    fn check_node(&self, i: NodeId) -> Result<()> {
        if self.contains_node(i) {
            Ok(())
        } else {
            Err(Error::UnknownNode(i.to_string()))
        }
    }

    /// Sorted undirected neighbors of `i`.
    pub fn neighbors(&self, i: NodeId) -> &[NodeId] {
        let i = i as usize;
        &self.adj_nodes[self.adj_offsets[i]..self.adj_offsets[i + 1]]
    }

    /// Undirected degree.
    pub fn degree(&self, i: NodeId) -> usize {
        self.neighbors(i).len()
    }

    /// CSR slot range for node `i`; slots index [`Self::adjacency_targets`].
    pub fn slot_range(&self, i: NodeId) -> std::ops::Range<usize> {
        let i = i as usize;
        self.adj_offsets[i]..self.adj_offsets[i + 1]
    }

    /// Neighbor node per CSR slot.
    pub fn adjacency_targets(&self) -> &[NodeId] {
        &self.adj_nodes
    }

    /// Undirected edge index per CSR slot.
    pub fn adjacency_edge_indices(&self) -> &[u32] {
        &self.adj_edge_index
    }

    /// Index of the undirected edge `(i, j)` into [`Self::undirected_edges`].
    pub fn edge_index(&self, i: NodeId, j: NodeId) -> Option<u32> {
        if i == j {
            return None;
        }
        self.undirected_edges
            .binary_search(&order_pair(i, j))
            .ok()
            .map(|e| e as u32)
    }

    pub fn is_edge(&self, i: NodeId, j: NodeId) -> bool {
        self.edge_index(i, j).is_some()
    }

    /// Whether the undirected edge had follow links in both directions.
    pub fn reciprocal_follow(&self, edge_index: u32) -> bool {
        self.reciprocal[edge_index as usize]
    }

    /// Fraction of undirected edges whose follow links run both ways.
    pub fn follow_reciprocity(&self) -> f64 {
        if self.undirected_edges.is_empty() {
            return 0.0;
        }
        let both = self.reciprocal.iter().filter(|&&r| r).count();
        both as f64 / self.undirected_edges.len() as f64
    }

    /// Number of common undirected neighbors of `i` and `j`.
    pub fn common_neighbors(&self, i: NodeId, j: NodeId) -> Result<usize> {
        self.check_node(i)?;
        self.check_node(j)?;
        if i == j {
            return Err(Error::InvalidArgument(
                "common_neighbors requires two distinct nodes".into(),
            ));
        }
        let (a, b) = (self.neighbors(i), self.neighbors(j));
        let mut count = 0;
        let (mut x, mut y) = (0, 0);
        while x < a.len() && y < b.len() {
            match a[x].cmp(&b[y]) {
                std::cmp::Ordering::Less => x += 1,
                std::cmp::Ordering::Greater => y += 1,
                std::cmp::Ordering::Equal => {
                    count += 1;
                    x += 1;
                    y += 1;
                }
            }
        }
        Ok(count)
    }

    /// DOT rendering of the subgraph induced by `nodes` (undirected view).
    ///
    /// Node labels use external ids when a map is supplied.
    pub fn to_dot(&self, nodes: &[NodeId], ids: Option<&NodeIdMap>) -> String {
        let mut members: Vec<NodeId> = nodes
            .iter()
            .copied()
            .filter(|&n| self.contains_node(n))
            .collect();
        members.sort_unstable();
        members.dedup();
        let in_set: std::collections::HashSet<NodeId> = members.iter().copied().collect();

        let label = |n: NodeId| -> String {
            match ids.and_then(|m| m.name(n)) {
                Some(name) => name.to_owned(),
                None => n.to_string(),
            }
        };

        let mut out = String::from("graph {\n");
        for &n in &members {
            out.push_str(&format!("  \"{}\";\n", label(n)));
        }
        for &n in &members {
            for &m in self.neighbors(n) {
                if n < m && in_set.contains(&m) {
                    out.push_str(&format!("  \"{}\" -- \"{}\";\n", label(n), label(m)));
                }
            }
        }
        out.push_str("}\n");
        out
    }

    /// Serialize to the versioned JSON cache format.
    pub fn to_cache_json(&self, ids: &NodeIdMap) -> Result<String> {
        let cache = GraphCache {
            format: CACHE_FORMAT.to_owned(),
            version: CACHE_VERSION,
            node_count: self.node_count,
            names: ids.names().to_vec(),
            directed_edges: self.directed_edges.clone(),
        };
        Ok(serde_json::to_string(&cache)?)
    }

    /// Deserialize from the versioned JSON cache format.
    pub fn from_cache_json(text: &str) -> Result<(SocialGraph, NodeIdMap)> {
        let cache: GraphCache = serde_json::from_str(text)?;
        if cache.format != CACHE_FORMAT {
            return Err(Error::Format(format!(
                "expected format {CACHE_FORMAT:?}, found {:?}",
                cache.format
            )));
        }
        if cache.version != CACHE_VERSION {
            return Err(Error::Format(format!(
                "unsupported cache version {} (this build reads {CACHE_VERSION})",
                cache.version
            )));
        }
        if cache.names.len() < cache.node_count {
            return Err(Error::Format(
                "cache names shorter than node count".to_owned(),
            ));
        }
        let graph = SocialGraph::from_directed_edges(cache.node_count, cache.directed_edges)?;
        let ids = NodeIdMap::from_names(cache.names)?;
        Ok((graph, ids))
    }
}

const CACHE_FORMAT: &str = "social-graph-cache";
const CACHE_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct GraphCache {
    format: String,
    version: u32,
    node_count: usize,
    names: Vec<String>,
    directed_edges: Vec<(NodeId, NodeId)>,
}

fn order_pair(a: NodeId, b: NodeId) -> (NodeId, NodeId) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Result of ingesting an edge-list stream.
#[derive(Debug)]
pub struct EdgeListLoad {
    pub graph: SocialGraph,
    pub ids: NodeIdMap,
    /// Self-loop lines rejected with a warning.
    pub rejected_self_loops: usize,
}

/// Parse a line-oriented `follower<TAB>followee` stream.
///
/// `#` starts a comment; blank lines are skipped. Self-loops are rejected and
/// counted rather than failing the whole load. Node ids are assigned densely
/// in first-appearance order.
pub fn load_edge_list<R: BufRead>(reader: R) -> Result<EdgeListLoad> {
    let mut ids = NodeIdMap::new();
    let mut edges: Vec<(NodeId, NodeId)> = Vec::new();
    let mut rejected_self_loops = 0usize;

    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = lineno + 1;
        let content = match line.find('#') {
            Some(pos) => &line[..pos],
            None => &line[..],
        };
        let content = content.trim();
        if content.is_empty() {
            continue;
        }
        let mut fields = content.split('\t');
        let (follower, followee) = match (fields.next(), fields.next(), fields.next()) {
            (Some(a), Some(b), None) if !a.trim().is_empty() && !b.trim().is_empty() => {
                (a.trim(), b.trim())
            }
            _ => {
                return Err(Error::Parse {
                    line: lineno,
                    message: format!("expected `follower<TAB>followee`, got {content:?}"),
                })
            }
        };
        if follower == followee {
            rejected_self_loops += 1;
            continue;
        }
        let a = ids.intern(follower);
        let b = ids.intern(followee);
        edges.push((a, b));
    }

    let graph = SocialGraph::from_directed_edges(ids.len(), edges)?;
    Ok(EdgeListLoad {
        graph,
        ids,
        rejected_self_loops,
    })
}

/// One retweet: `retweeter` reposted content authored by `author`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RetweetRecord {
    pub timestamp: i64,
    pub retweeter: NodeId,
    pub author: NodeId,
    pub emotion: Emotion,
}

/// Time-ordered retweet records; the empirical contagion evidence.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RetweetLog {
    records: Vec<RetweetRecord>,
}

impl RetweetLog {
    /// Build a log, sorting records by timestamp (stable).
    pub fn from_records(mut records: Vec<RetweetRecord>) -> Result<Self> {
        for r in &records {
            if r.retweeter == r.author {
                return Err(Error::InvalidArgument(format!(
                    "retweeter equals author ({})",
                    r.retweeter
                )));
            }
        }
        records.sort_by_key(|r| r.timestamp);
        Ok(Self { records })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn records(&self) -> &[RetweetRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Per ordered pair `(retweeter, author)`, sorted retweet timestamps.
    pub fn pair_index(&self) -> PairIndex {
        let mut map: HashMap<(NodeId, NodeId), Vec<i64>> = HashMap::new();
        for r in &self.records {
            map.entry((r.retweeter, r.author))
                .or_default()
                .push(r.timestamp);
        }
        // Records are time-sorted, so each vec already is.
        PairIndex { map }
    }
}

/// Lookup structure for directional retweet counts with a time cutoff.
#[derive(Debug, Clone)]
pub struct PairIndex {
    map: HashMap<(NodeId, NodeId), Vec<i64>>,
}

impl PairIndex {
    /// Retweets of `author`'s content by `retweeter` strictly before `t_cut`
    /// (`None` counts the whole log).
    pub fn count_before(&self, retweeter: NodeId, author: NodeId, t_cut: Option<i64>) -> u64 {
        match self.map.get(&(retweeter, author)) {
            None => 0,
            Some(ts) => match t_cut {
                None => ts.len() as u64,
                Some(cut) => ts.partition_point(|&t| t < cut) as u64,
            },
        }
    }
}

/// Result of ingesting a retweet-log stream.
#[derive(Debug)]
pub struct RetweetLogLoad {
    pub log: RetweetLog,
    /// Records with retweeter == author, rejected with a warning.
    pub rejected_self_retweets: usize,
}

/// Parse a line-oriented `timestamp,retweeter,author,emotion` stream.
///
/// Timestamps are integer epoch seconds or ISO-8601 (`YYYY-MM-DD` with
/// optional `THH:MM:SS` and optional trailing `Z`). Unknown node ids are
/// added to `ids`; unknown emotion tokens fail the load.
pub fn load_retweet_log<R: BufRead>(reader: R, ids: &mut NodeIdMap) -> Result<RetweetLogLoad> {
    let mut records = Vec::new();
    let mut rejected_self_retweets = 0usize;

    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = lineno + 1;
        let content = match line.find('#') {
            Some(pos) => &line[..pos],
            None => &line[..],
        };
        let content = content.trim();
        if content.is_empty() {
            continue;
        }
        let fields: Vec<&str> = content.split(',').map(str::trim).collect();
        if fields.len() != 4 {
            return Err(Error::Parse {
                line: lineno,
                message: format!(
                    "expected `timestamp,retweeter,author,emotion`, got {} field(s)",
                    fields.len()
                ),
            });
        }
        let timestamp = parse_timestamp(fields[0]).map_err(|e| Error::Parse {
            line: lineno,
            message: e.to_string(),
        })?;
        let emotion: Emotion = fields[3].parse().map_err(|e: Error| Error::Parse {
            line: lineno,
            message: e.to_string(),
        })?;
        if fields[1] == fields[2] {
            rejected_self_retweets += 1;
            continue;
        }
        let retweeter = ids.intern(fields[1]);
        let author = ids.intern(fields[2]);
        records.push(RetweetRecord {
            timestamp,
            retweeter,
            author,
            emotion,
        });
    }

    let log = RetweetLog::from_records(records)?;
    Ok(RetweetLogLoad {
        log,
        rejected_self_retweets,
    })
}

/// Parse epoch seconds or the ISO-8601 subset `YYYY-MM-DD[THH:MM:SS[Z]]`.
pub fn parse_timestamp(s: &str) -> Result<i64> {
    if let Ok(v) = s.parse::<i64>() {
        return Ok(v);
    }
    let bad = || Error::InvalidArgument(format!("unparseable timestamp {s:?}"));
    let s = s.strip_suffix('Z').unwrap_or(s);
    let (date, time) = match s.split_once('T') {
        Some((d, t)) => (d, Some(t)),
        None => (s, None),
    };
    let mut dp = date.split('-');
    let (y, m, d) = match (dp.next(), dp.next(), dp.next(), dp.next()) {
        (Some(y), Some(m), Some(d), None) => (
            y.parse::<i64>().map_err(|_| bad())?,
            m.parse::<u32>().map_err(|_| bad())?,
            d.parse::<u32>().map_err(|_| bad())?,
        ),
        _ => return Err(bad()),
    };
    if !(1..=12).contains(&m) || !(1..=31).contains(&d) {
        return Err(bad());
    }
    let secs_of_day = match time {
        None => 0,
        Some(t) => {
            let mut tp = t.split(':');
            let (h, mi, se) = match (tp.next(), tp.next(), tp.next(), tp.next()) {
                (Some(h), Some(mi), Some(se), None) => (
                    h.parse::<i64>().map_err(|_| bad())?,
                    mi.parse::<i64>().map_err(|_| bad())?,
                    se.parse::<i64>().map_err(|_| bad())?,
                ),
                _ => return Err(bad()),
            };
            if !(0..24).contains(&h) || !(0..60).contains(&mi) || !(0..60).contains(&se) {
                return Err(bad());
            }
            h * 3600 + mi * 60 + se
        }
    };
    Ok(days_from_civil(y, m, d) * 86_400 + secs_of_day)
}

/// Days since 1970-01-01 for a proleptic Gregorian date.
fn days_from_civil(y: i64, m: u32, d: u32) -> i64 {
    let y = if m <= 2 { y - 1 } else { y };
    let era = if y >= 0 { y } else { y - 399 } / 400;
    let yoe = y - era * 400;
    let mp = i64::from((m + 9) % 12);
    let doy = (153 * mp + 2) / 5 + i64::from(d) - 1;
    let doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    era * 146_097 + doe - 719_468
}

/// Generate a stochastic-block-model graph.
///
/// Intra-block pairs connect with `p_in`, inter-block pairs with `p_out`.
/// Each undirected edge is materialized as two directed edges, so the whole
/// graph reads as reciprocal. Deterministic for a fixed seed. External ids
/// are the decimal node indices.
pub fn sbm_generate(
    block_sizes: &[usize],
    p_in: f64,
    p_out: f64,
    rng_seed: u64,
) -> Result<(SocialGraph, NodeIdMap)> {
    if block_sizes.is_empty() {
        return Err(Error::InvalidArgument("empty block list".into()));
    }
    if !(0.0..=1.0).contains(&p_out) || !(0.0..=1.0).contains(&p_in) || p_out > p_in {
        return Err(Error::InvalidArgument(format!(
            "probabilities must satisfy 0 <= p_out <= p_in <= 1 (got p_in={p_in}, p_out={p_out})"
        )));
    }
    let n: usize = block_sizes.iter().sum();
    let mut block_of = Vec::with_capacity(n);
    for (b, &size) in block_sizes.iter().enumerate() {
        block_of.extend(std::iter::repeat(b).take(size));
    }

    let mut rng = Pcg64::seed_from_u64(rng_seed);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let p = if block_of[i] == block_of[j] {
                p_in
            } else {
                p_out
            };
            if rng.gen::<f64>() < p {
                edges.push((i as NodeId, j as NodeId));
                edges.push((j as NodeId, i as NodeId));
            }
        }
    }
    let graph = SocialGraph::from_directed_edges(n, edges)?;
    let mut ids = NodeIdMap::new();
    for i in 0..n {
        ids.intern(&i.to_string());
    }
    Ok((graph, ids))
}

/// Block label of each node for the standard block layout, useful when
/// placing synthetic retweets on intra- vs inter-block edges.
pub fn sbm_block_of(block_sizes: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(block_sizes.iter().sum());
    for (b, &size) in block_sizes.iter().enumerate() {
        out.extend(std::iter::repeat(b).take(size));
    }
    out
}
