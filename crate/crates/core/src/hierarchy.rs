//! Finite-depth belief hierarchies.
//!
//! A depth-0 description of a player type is the single point of `H⁰_j`.
//! The depth-(k+1) description extends the depth-k one with, for every
//! conditioning event, the image of the type's belief under the depth-k
//! description map of all coordinates (nature states describe themselves).
//!
//! Descriptions are hash-consed in a [`HierarchySpace`], so two types (from
//! any structures on the same space) have equal depth-k descriptions iff
//! their handles are equal. [`DescriptionTree`] is the owned, canonical
//! export of one description and compares structurally.
//!
//! [`hierarchy_partition`] computes the same equivalence by partition
//! refinement without building descriptions.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::ser::Serializer;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::space::FiniteConditionalSpace;
use crate::structure::{check_morphism, Coordinate, MorphismSpec, TypeStructure};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DescId(u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct PointId(u32);

/// A point of `H^l`: a nature state and a depth-l description per player.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct Point {
    state: usize,
    players: Vec<DescId>,
}

/// Measure on description points, sorted by point id, zero masses omitted.
type PointMeasure = Vec<(PointId, Rational)>;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct Node {
    player: usize,
    prev: Option<DescId>,
    /// Newest level: one measure per conditioning event. Empty at depth 0.
    level: Vec<PointMeasure>,
}

/// Handle to an interned description.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Description {
    Nature { state: usize, depth: usize },
    Player { id: DescId, depth: usize },
}

impl Description {
    pub fn depth(&self) -> usize {
        match *self {
            Description::Nature { depth, .. } | Description::Player { depth, .. } => depth,
        }
    }
}

/// Depth-indexed description handles for every type of one structure:
/// `levels[l][j][t]`.
#[derive(Debug, Clone)]
pub struct DescriptionTable {
    pub levels: Vec<Vec<Vec<DescId>>>,
}

/// Interned hierarchy spaces `H^0, H^1, …` over one conditional space.
pub struct HierarchySpace {
    space: FiniteConditionalSpace,
    players: Vec<String>,
    nodes: Vec<Node>,
    depths: Vec<usize>,
    node_index: HashMap<Node, DescId>,
    points: Vec<Point>,
    point_index: HashMap<Point, PointId>,
}

impl HierarchySpace {
    pub fn new(space: FiniteConditionalSpace, players: Vec<String>) -> Self {
        HierarchySpace {
            space,
            players,
            nodes: Vec::new(),
            depths: Vec::new(),
            node_index: HashMap::new(),
            points: Vec::new(),
            point_index: HashMap::new(),
        }
    }

    pub fn for_structure(ts: &TypeStructure) -> Self {
        Self::new(ts.space().clone(), ts.players().to_vec())
    }

    pub fn num_descriptions(&self) -> usize {
        self.nodes.len()
    }

    fn intern(&mut self, node: Node) -> DescId {
        if let Some(&id) = self.node_index.get(&node) {
            return id;
        }
        let id = DescId(self.nodes.len() as u32);
        let depth = node.prev.map_or(0, |p| self.depths[p.0 as usize] + 1);
        self.nodes.push(node.clone());
        self.depths.push(depth);
        self.node_index.insert(node, id);
        id
    }

    fn intern_point(&mut self, point: Point) -> PointId {
        if let Some(&id) = self.point_index.get(&point) {
            return id;
        }
        let id = PointId(self.points.len() as u32);
        self.points.push(point.clone());
        self.point_index.insert(point, id);
        id
    }

    fn check_space(&self, ts: &TypeStructure) -> Result<()> {
        if ts.space() != &self.space || ts.players() != self.players.as_slice() {
            return Err(Error::SpaceMismatch);
        }
        Ok(())
    }

    /// Descriptions of every type of `ts` at every depth up to `k`.
    pub fn describe_all(&mut self, ts: &TypeStructure, k: usize) -> Result<DescriptionTable> {
        self.check_space(ts)?;
        let n = ts.num_players();
        let domain = ts.world().domain().clone();
        let level0: Vec<Vec<DescId>> = (0..n)
            .map(|j| {
                let id = self.intern(Node { player: j, prev: None, level: Vec::new() });
                vec![id; ts.types(j).len()]
            })
            .collect();
        let mut levels = vec![level0];
        for l in 0..k {
            let cur = &levels[l];
            let point_of: Vec<PointId> = (0..domain.size())
                .map(|w| {
                    let players = (0..n).map(|j| cur[j][ts.type_of(w, j)]).collect();
                    (ts.nature_of(w), players)
                })
                .collect::<Vec<_>>()
                .into_iter()
                .map(|(state, players)| self.intern_point(Point { state, players }))
                .collect();
            let mut next = Vec::with_capacity(n);
            for j in 0..n {
                let mut row = Vec::with_capacity(ts.types(j).len());
                for t in 0..ts.types(j).len() {
                    let level = ts
                        .belief(j, t)
                        .measures()
                        .iter()
                        .map(|mu| {
                            let mut acc: BTreeMap<PointId, Rational> = BTreeMap::new();
                            for (w, m) in mu.masses().iter().enumerate() {
                                if !m.is_zero() {
                                    *acc.entry(point_of[w]).or_insert_with(Rational::zero) += m;
                                }
                            }
                            acc.into_iter().filter(|(_, m)| !m.is_zero()).collect()
                        })
                        .collect();
                    row.push(self.intern(Node { player: j, prev: Some(levels[l][j][t]), level }));
                }
                next.push(row);
            }
            levels.push(next);
        }
        Ok(DescriptionTable { levels })
    }

    /// Depth-`k` description of one coordinate value of `ts`.
    pub fn describe(&mut self, ts: &TypeStructure, coord: Coordinate, index: usize, k: usize) -> Result<Description> {
        match coord {
            Coordinate::Nature => {
                self.check_space(ts)?;
                if index >= ts.space().len() {
                    return Err(Error::UnknownState(index.to_string()));
                }
                Ok(Description::Nature { state: index, depth: k })
            }
            Coordinate::Player(j) => {
                if j >= ts.num_players() {
                    return Err(Error::UnknownPlayer(j.to_string()));
                }
                if index >= ts.types(j).len() {
                    return Err(Error::UnknownType { player: ts.players()[j].clone(), ty: index.to_string() });
                }
                let table = self.describe_all(ts, k)?;
                Ok(Description::Player { id: table.levels[k][j][index], depth: k })
            }
        }
    }

    /// The depth-`k` prefix of a description.
    pub fn truncate(&self, d: Description, k: usize) -> Result<Description> {
        if k > d.depth() {
            return Err(Error::DepthExceeded { requested: k, depth: d.depth() });
        }
        Ok(match d {
            Description::Nature { state, .. } => Description::Nature { state, depth: k },
            Description::Player { mut id, depth } => {
                for _ in k..depth {
                    id = self.nodes[id.0 as usize].prev.expect("depth > 0 has a predecessor");
                }
                Description::Player { id, depth: k }
            }
        })
    }

    /// Newest-first chain of level measures, returned oldest first.
    fn levels_of(&self, id: DescId) -> Vec<&Vec<PointMeasure>> {
        let mut out = Vec::new();
        let mut cur = Some(id);
        while let Some(c) = cur {
            let node = &self.nodes[c.0 as usize];
            if node.prev.is_some() {
                out.push(&node.level);
            }
            cur = node.prev;
        }
        out.reverse();
        out
    }

    /// Canonical owned export of a description.
    pub fn tree(&self, d: Description) -> DescriptionTree {
        let header = |root, catalog| DescriptionTree {
            states: self.space.states().to_vec(),
            players: self.players.clone(),
            events: self.space.event_names().map(str::to_string).collect(),
            depth: d.depth(),
            root,
            catalog,
        };
        let root_id = match d {
            Description::Nature { state, .. } => return header(TreeRoot::Nature(state), Vec::new()),
            Description::Player { id, .. } => id,
        };

        // Every description reachable from the root, grouped by depth.
        let mut by_depth: BTreeMap<usize, Vec<DescId>> = BTreeMap::new();
        let mut seen = std::collections::HashSet::new();
        let mut stack = vec![root_id];
        while let Some(id) = stack.pop() {
            if !seen.insert(id) {
                continue;
            }
            by_depth.entry(self.depths[id.0 as usize]).or_default().push(id);
            for level in self.levels_of(id) {
                for measure in level {
                    for (p, _) in measure {
                        stack.extend(self.points[p.0 as usize].players.iter().copied());
                    }
                }
            }
        }

        let mut canon: HashMap<DescId, usize> = HashMap::new();
        let mut catalog: Vec<CatalogEntry> = Vec::new();
        for ids in by_depth.values() {
            let mut entries: Vec<(CatalogEntry, DescId)> = ids
                .iter()
                .map(|&id| {
                    let levels = self
                        .levels_of(id)
                        .into_iter()
                        .map(|level| {
                            level
                                .iter()
                                .map(|measure| {
                                    let mut m: Vec<(TreePoint, Rational)> = measure
                                        .iter()
                                        .map(|(p, mass)| {
                                            let pt = &self.points[p.0 as usize];
                                            let types = pt.players.iter().map(|c| canon[c]).collect();
                                            (TreePoint { state: pt.state, types }, mass.clone())
                                        })
                                        .collect();
                                    m.sort();
                                    m
                                })
                                .collect()
                        })
                        .collect();
                    (CatalogEntry { player: self.nodes[id.0 as usize].player, levels }, id)
                })
                .collect();
            entries.sort();
            for (entry, id) in entries {
                canon.insert(id, catalog.len());
                catalog.push(entry);
            }
        }
        header(TreeRoot::Player(canon[&root_id]), catalog)
    }

    /// Intern an exported tree (which must be over this space) and return
    /// its handle.
    pub fn import(&mut self, tree: &DescriptionTree) -> Result<Description> {
        if tree.states != self.space.states()
            || tree.players != self.players
            || !tree.events.iter().map(String::as_str).eq(self.space.event_names())
        {
            return Err(Error::SpaceMismatch);
        }
        let root = match tree.root {
            TreeRoot::Nature(state) => return Ok(Description::Nature { state, depth: tree.depth }),
            TreeRoot::Player(r) => r,
        };
        let mut ids: Vec<DescId> = Vec::with_capacity(tree.catalog.len());
        for entry in &tree.catalog {
            let mut id = self.intern(Node { player: entry.player, prev: None, level: Vec::new() });
            for level in &entry.levels {
                let level = level
                    .iter()
                    .map(|measure| {
                        let mut m: PointMeasure = measure
                            .iter()
                            .map(|(pt, mass)| {
                                let players = pt.types.iter().map(|&c| ids[c]).collect();
                                (self.intern_point(Point { state: pt.state, players }), mass.clone())
                            })
                            .collect();
                        m.sort();
                        m
                    })
                    .collect();
                id = self.intern(Node { player: entry.player, prev: Some(id), level });
            }
            ids.push(id);
        }
        Ok(Description::Player { id: ids[root], depth: tree.depth })
    }
}

/// Depth-`k` description of a nature state (`Coordinate::Nature`) or a
/// player type, as an owned canonical tree.
pub fn describe(ts: &TypeStructure, coord: Coordinate, index: usize, k: usize) -> Result<DescriptionTree> {
    let mut h = HierarchySpace::for_structure(ts);
    let d = h.describe(ts, coord, index, k)?;
    Ok(h.tree(d))
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TreeRoot {
    Nature(usize),
    /// Index into the catalog.
    Player(usize),
}

/// A point of a description space: nature state plus one catalog entry per
/// player.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TreePoint {
    pub state: usize,
    pub types: Vec<usize>,
}

/// A player description; its depth is `levels.len()`. `levels[l][b]` is
/// the belief under event `b` over depth-`l` points.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CatalogEntry {
    pub player: usize,
    pub levels: Vec<Vec<Vec<(TreePoint, Rational)>>>,
}

impl CatalogEntry {
    pub fn depth(&self) -> usize {
        self.levels.len()
    }
}

/// Per event name, a measure as `(point label, mass)` pairs.
pub type EventBeliefs = Vec<(String, Vec<(String, Rational)>)>;

/// Owned canonical form of one description.
///
/// The catalog holds every player description reachable from the root,
/// ordered by depth and then by content, so structurally equal
/// descriptions produce identical trees.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DescriptionTree {
    states: Vec<String>,
    players: Vec<String>,
    events: Vec<String>,
    depth: usize,
    root: TreeRoot,
    catalog: Vec<CatalogEntry>,
}

impl DescriptionTree {
    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn root(&self) -> &TreeRoot {
        &self.root
    }

    pub fn catalog(&self) -> &[CatalogEntry] {
        &self.catalog
    }

    pub fn root_entry(&self) -> Option<&CatalogEntry> {
        match self.root {
            TreeRoot::Player(r) => Some(&self.catalog[r]),
            TreeRoot::Nature(_) => None,
        }
    }

    /// The depth-`k` prefix.
    pub fn truncate(&self, k: usize) -> Result<DescriptionTree> {
        if k > self.depth {
            return Err(Error::DepthExceeded { requested: k, depth: self.depth });
        }
        let space = FiniteConditionalSpace::new(
            self.states.clone(),
            self.events.iter().map(|e| (e.clone(), self.states.clone())).collect(),
        )?;
        // Conditioning sets are irrelevant here; only the labels are compared.
        let mut h = HierarchySpace::new(space, self.players.clone());
        let d = h.import(self)?;
        Ok(h.tree(h.truncate(d, k)?))
    }

    /// Label of a point, e.g. `(s1,#0,#3)`.
    pub fn point_label(&self, p: &TreePoint) -> String {
        let mut parts = vec![self.states[p.state].clone()];
        parts.extend(p.types.iter().map(|c| format!("#{c}")));
        format!("({})", parts.join(","))
    }

    /// The last level of the root: its belief over depth-(k-1) points.
    pub fn top_belief(&self) -> Option<EventBeliefs> {
        let entry = self.root_entry()?;
        let level = entry.levels.last()?;
        Some(
            level
                .iter()
                .enumerate()
                .map(|(b, m)| {
                    let m = m.iter().map(|(p, x)| (self.point_label(p), x.clone())).collect();
                    (self.events[b].clone(), m)
                })
                .collect(),
        )
    }

    fn entry_json(&self, entry: &CatalogEntry) -> serde_json::Value {
        use serde_json::{json, Map, Value};
        let levels: Vec<Value> = entry
            .levels
            .iter()
            .map(|level| {
                let mut obj = Map::new();
                for (b, measure) in level.iter().enumerate() {
                    let mut m = Map::new();
                    for (p, x) in measure {
                        m.insert(self.point_label(p), Value::String(x.to_string()));
                    }
                    obj.insert(self.events[b].clone(), Value::Object(m));
                }
                Value::Object(obj)
            })
            .collect();
        json!({ "player": self.players[entry.player], "depth": entry.depth(), "levels": levels })
    }

    /// JSON export: `{"depth", "coordinate", "levels" | "state", "catalog"}`.
    pub fn to_json(&self) -> serde_json::Value {
        use serde_json::{json, Map, Value};
        match self.root {
            TreeRoot::Nature(s) => json!({ "depth": self.depth, "coordinate": "0", "state": self.states[s] }),
            TreeRoot::Player(r) => {
                let root = self.entry_json(&self.catalog[r]);
                let mut catalog = Map::new();
                for (i, e) in self.catalog.iter().enumerate() {
                    if i != r {
                        catalog.insert(format!("#{i}"), self.entry_json(e));
                    }
                }
                json!({
                    "depth": self.depth,
                    "coordinate": self.players[self.catalog[r].player],
                    "levels": root["levels"],
                    "catalog": Value::Object(catalog),
                })
            }
        }
    }
}

impl Serialize for DescriptionTree {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(serializer)
    }
}

/// Depth selector for [`hierarchy_partition`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Depth {
    Finite(usize),
    Fixpoint,
}

/// Per-player partition of types into numbered blocks. Nature is always
/// discrete and not stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PartitionFamily {
    /// `blocks[j][t]` is the block of type `t`, numbered by first occurrence.
    pub blocks: Vec<Vec<usize>>,
}

impl PartitionFamily {
    pub fn coarsest(ts: &TypeStructure) -> Self {
        PartitionFamily { blocks: (0..ts.num_players()).map(|j| vec![0; ts.types(j).len()]).collect() }
    }

    pub fn num_blocks(&self, j: usize) -> usize {
        self.blocks[j].iter().max().map_or(0, |m| m + 1)
    }

    pub fn total_blocks(&self) -> usize {
        (0..self.blocks.len()).map(|j| self.num_blocks(j)).sum()
    }

    pub fn members(&self, j: usize) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.num_blocks(j)];
        for (t, &b) in self.blocks[j].iter().enumerate() {
            out[b].push(t);
        }
        out
    }

    pub fn is_discrete(&self) -> bool {
        (0..self.blocks.len()).all(|j| self.num_blocks(j) == self.blocks[j].len())
    }

    /// Whether every block of `self` lies inside a block of `coarser`.
    pub fn refines(&self, coarser: &PartitionFamily) -> bool {
        self.blocks.iter().zip(&coarser.blocks).all(|(fine, coarse)| {
            let mut image: HashMap<usize, usize> = HashMap::new();
            fine.iter().zip(coarse).all(|(f, c)| *image.entry(*f).or_insert(*c) == *c)
        })
    }

    /// `{"player": [["t1","t2"],["t3"]]}`
    pub fn to_json(&self, ts: &TypeStructure) -> serde_json::Value {
        let mut obj = serde_json::Map::new();
        for j in 0..self.blocks.len() {
            let blocks: Vec<Vec<&str>> = self
                .members(j)
                .into_iter()
                .map(|b| b.into_iter().map(|t| ts.types(j)[t].as_str()).collect())
                .collect();
            obj.insert(ts.players()[j].clone(), serde_json::json!(blocks));
        }
        serde_json::Value::Object(obj)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionResult {
    pub partition: PartitionFamily,
    /// Depth the partition describes (for `Fixpoint`, the stable depth).
    pub depth: usize,
    /// For `Fixpoint`: the least `l` with `P_l = P_{l+1}`.
    pub stable_depth: Option<usize>,
}

/// Old block plus per-event measure over world classes.
type Signature = (usize, Vec<Vec<(usize, Rational)>>);

/// One refinement round: split every block by the type's beliefs over
/// the current blocks of all coordinates.
pub fn refine(ts: &TypeStructure, current: &PartitionFamily) -> PartitionFamily {
    let n = ts.num_players();
    let worlds = ts.num_worlds();
    let mut class_ids: HashMap<Vec<usize>, usize> = HashMap::new();
    let class_of: Vec<usize> = (0..worlds)
        .map(|w| {
            let mut key = Vec::with_capacity(n + 1);
            key.push(ts.nature_of(w));
            key.extend((0..n).map(|j| current.blocks[j][ts.type_of(w, j)]));
            let next = class_ids.len();
            *class_ids.entry(key).or_insert(next)
        })
        .collect();

    let blocks = (0..n)
        .map(|j| {
            let mut seen: HashMap<Signature, usize> = HashMap::new();
            (0..ts.types(j).len())
                .map(|t| {
                    let signature = ts
                        .belief(j, t)
                        .measures()
                        .iter()
                        .map(|mu| {
                            let mut acc: BTreeMap<usize, Rational> = BTreeMap::new();
                            for (w, m) in mu.masses().iter().enumerate() {
                                if !m.is_zero() {
                                    *acc.entry(class_of[w]).or_insert_with(Rational::zero) += m;
                                }
                            }
                            acc.into_iter().filter(|(_, m)| !m.is_zero()).collect()
                        })
                        .collect();
                    let next = seen.len();
                    *seen.entry((current.blocks[j][t], signature)).or_insert(next)
                })
                .collect()
        })
        .collect();
    PartitionFamily { blocks }
}

/// Partition of each player's types by equality of depth-`k` descriptions,
/// or of full descriptions with [`Depth::Fixpoint`].
///
/// Each splitting round adds at least one block, so the fixpoint is reached
/// after at most `Σ_j |T_j| - n` rounds.
pub fn hierarchy_partition(ts: &TypeStructure, depth: Depth) -> PartitionResult {
    let mut current = PartitionFamily::coarsest(ts);
    let mut l = 0;
    loop {
        if let Depth::Finite(k) = depth {
            if l == k {
                return PartitionResult { partition: current, depth: k, stable_depth: None };
            }
        }
        let next = refine(ts, &current);
        if next == current {
            return match depth {
                Depth::Fixpoint => PartitionResult { partition: current, depth: l, stable_depth: Some(l) },
                Depth::Finite(k) => PartitionResult { partition: current, depth: k, stable_depth: None },
            };
        }
        current = next;
        l += 1;
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PreservationReport {
    Ok,
    Mismatch { player: String, ty: String, depth: usize },
}

impl PreservationReport {
    pub fn is_ok(&self) -> bool {
        matches!(self, PreservationReport::Ok)
    }
}

impl fmt::Display for PreservationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PreservationReport::Ok => f.write_str("ok"),
            PreservationReport::Mismatch { player, ty, depth } => {
                write!(f, "player {player} type {ty}: image description differs at depth {depth}")
            }
        }
    }
}

/// Check that a type morphism maps every type to one with the same
/// description at every depth up to `k`. Refuses non-morphisms.
pub fn check_morphism_preserves_descriptions(
    ts: &TypeStructure,
    ts2: &TypeStructure,
    f: &MorphismSpec,
    k: usize,
) -> Result<PreservationReport> {
    if !check_morphism(ts, ts2, f)?.is_ok() {
        return Err(Error::MorphismInvalid);
    }
    let mut h = HierarchySpace::for_structure(ts);
    let a = h.describe_all(ts, k)?;
    let b = h.describe_all(ts2, k)?;
    for l in 0..=k {
        for j in 0..ts.num_players() {
            for t in 0..ts.types(j).len() {
                if a.levels[l][j][t] != b.levels[l][j][f.maps[j][t]] {
                    return Ok(PreservationReport::Mismatch {
                        player: ts.players()[j].clone(),
                        ty: ts.types(j)[t].clone(),
                        depth: l,
                    });
                }
            }
        }
    }
    Ok(PreservationReport::Ok)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::{Cps, Measure};
    use crate::rational::q;

    fn strings(xs: &[&str]) -> Vec<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    /// One player, types t1, t2, t3 on S = {s1, s2}, Harsanyi. t1 and t2
    /// are uniform on nature, t3 is sure of s1.
    pub(crate) fn duplicate_types() -> TypeStructure {
        let sp = FiniteConditionalSpace::new(vec!["s1", "s2"], vec![("All", vec!["s1", "s2"])]).unwrap();
        let players = strings(&["1"]);
        let types = vec![strings(&["t1", "t2", "t3"])];
        let world = TypeStructure::world_space(&sp, &players, &types).unwrap();
        let d = world.domain().clone();
        let uniform = |t: &str| {
            Measure::from_keys(
                d.clone(),
                [(format!("(s1,{t})").as_str(), q(1, 2)), (format!("(s2,{t})").as_str(), q(1, 2))],
            )
            .unwrap()
        };
        let beliefs = vec![vec![
            Cps::new(world.clone(), vec![uniform("t1")]).unwrap(),
            Cps::new(world.clone(), vec![uniform("t2")]).unwrap(),
            Cps::new(world.clone(), vec![Measure::from_keys(d.clone(), [("(s1,t3)", q(1, 1))]).unwrap()]).unwrap(),
        ]];
        TypeStructure::new(sp, players, types, beliefs).unwrap()
    }

    #[test]
    fn depth_zero_is_a_single_point() {
        let ts = duplicate_types();
        let trees: Vec<_> = (0..3).map(|t| describe(&ts, Coordinate::Player(0), t, 0).unwrap()).collect();
        assert!(trees.windows(2).all(|w| w[0] == w[1]));
        assert_eq!(trees[0].depth(), 0);
    }

    #[test]
    fn nature_describes_itself() {
        let ts = duplicate_types();
        let a = describe(&ts, Coordinate::Nature, 0, 3).unwrap();
        assert_eq!(a.to_json()["state"], "s1");
        assert_ne!(a, describe(&ts, Coordinate::Nature, 1, 3).unwrap());
    }

    #[test]
    fn different_first_order_beliefs_differ_at_depth_one() {
        let ts = duplicate_types();
        let t1 = describe(&ts, Coordinate::Player(0), 0, 1).unwrap();
        let t2 = describe(&ts, Coordinate::Player(0), 1, 1).unwrap();
        let t3 = describe(&ts, Coordinate::Player(0), 2, 1).unwrap();
        assert_eq!(t1, t2);
        assert_ne!(t1, t3);
        let top = t1.top_belief().unwrap();
        assert_eq!(top[0].0, "All");
        assert_eq!(top[0].1, vec![("(s1,#0)".to_string(), q(1, 2)), ("(s2,#0)".to_string(), q(1, 2))]);
    }

    #[test]
    fn truncation() {
        let ts = duplicate_types();
        let deep = describe(&ts, Coordinate::Player(0), 2, 3).unwrap();
        assert_eq!(deep.truncate(3).unwrap(), deep);
        assert_eq!(deep.truncate(0).unwrap(), describe(&ts, Coordinate::Player(0), 2, 0).unwrap());
        assert_eq!(deep.truncate(2).unwrap(), describe(&ts, Coordinate::Player(0), 2, 2).unwrap());
        assert!(matches!(deep.truncate(4), Err(Error::DepthExceeded { .. })));
    }

    #[test]
    fn duplicate_partition() {
        let ts = duplicate_types();
        let p1 = hierarchy_partition(&ts, Depth::Finite(1));
        assert_eq!(p1.partition.blocks, vec![vec![0, 0, 1]]);
        let fix = hierarchy_partition(&ts, Depth::Fixpoint);
        assert_eq!(fix.partition.blocks, vec![vec![0, 0, 1]]);
        assert_eq!(fix.stable_depth, Some(1));
        assert_eq!(refine(&ts, &fix.partition), fix.partition);
        assert_eq!(hierarchy_partition(&ts, Depth::Finite(0)).partition.blocks, vec![vec![0, 0, 0]]);
    }

    #[test]
    fn partition_json() {
        let ts = duplicate_types();
        let p = hierarchy_partition(&ts, Depth::Fixpoint).partition;
        assert_eq!(p.to_json(&ts).to_string(), r#"{"1":[["t1","t2"],["t3"]]}"#);
    }

    #[test]
    fn identity_preserves_descriptions() {
        let ts = duplicate_types();
        let id = MorphismSpec::identity(&ts);
        assert!(check_morphism_preserves_descriptions(&ts, &ts, &id, 4).unwrap().is_ok());
    }

    #[test]
    fn non_morphism_refused() {
        let ts = duplicate_types();
        let f = MorphismSpec { maps: vec![vec![2, 2, 2]] };
        assert!(matches!(check_morphism_preserves_descriptions(&ts, &ts, &f, 2), Err(Error::MorphismInvalid)));
    }

    #[test]
    fn tree_json_shape() {
        let ts = duplicate_types();
        let tree = describe(&ts, Coordinate::Player(0), 2, 2).unwrap();
        let v = tree.to_json();
        assert_eq!(v["depth"], 2);
        assert_eq!(v["coordinate"], "1");
        assert_eq!(v["levels"].as_array().unwrap().len(), 2);
        assert_eq!(v["levels"][0]["All"]["(s1,#0)"], "1");
    }
}
