//! Redundancy, quotients, and finite-depth terminal approximations.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::hierarchy::{hierarchy_partition, Depth, DescriptionTree, EventBeliefs, HierarchySpace};
use crate::measure::pushforward_cps;
use crate::structure::{MorphismSpec, TypeStructure};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RedundancyReport {
    pub non_redundant: bool,
    /// Two distinct types of one player with identical descriptions.
    pub witness: Option<(String, String, String)>,
}

/// A structure is non-redundant iff no two types of one player share a
/// full description, i.e. the fixpoint partition is discrete.
pub fn is_non_redundant(ts: &TypeStructure) -> RedundancyReport {
    let fix = hierarchy_partition(ts, Depth::Fixpoint).partition;
    for j in 0..ts.num_players() {
        if let Some(block) = fix.members(j).into_iter().find(|b| b.len() > 1) {
            return RedundancyReport {
                non_redundant: false,
                witness: Some((
                    ts.players()[j].clone(),
                    ts.types(j)[block[0]].clone(),
                    ts.types(j)[block[1]].clone(),
                )),
            };
        }
    }
    RedundancyReport { non_redundant: true, witness: None }
}

/// Merge description-equivalent types.
///
/// Quotient types are the fixpoint blocks, named `<player>.b<index>`; a
/// block's belief is the image of any member's belief under the block map.
/// Every member is checked to give the same image.
pub fn quotient(ts: &TypeStructure) -> Result<(TypeStructure, MorphismSpec)> {
    let fix = hierarchy_partition(ts, Depth::Fixpoint).partition;
    let n = ts.num_players();
    let types: Vec<Vec<String>> = (0..n)
        .map(|j| (0..fix.num_blocks(j)).map(|b| format!("{}.b{b}", ts.players()[j])).collect())
        .collect();
    let world = TypeStructure::world_space(ts.space(), ts.players(), &types)?;
    let f = MorphismSpec { maps: fix.blocks.clone() };

    let sd = ts.world().domain();
    let td = world.domain();
    let wmap: Vec<usize> = (0..sd.size())
        .map(|w| {
            let mut c = sd.coords(w);
            for j in 0..n {
                c[j + 1] = f.maps[j][c[j + 1]];
            }
            td.index(&c)
        })
        .collect();

    let mut beliefs = Vec::with_capacity(n);
    for j in 0..n {
        let mut row = Vec::with_capacity(types[j].len());
        for (b, members) in fix.members(j).into_iter().enumerate() {
            let image = pushforward_cps(&wmap, ts.belief(j, members[0]), &world)?;
            for &t in &members[1..] {
                if pushforward_cps(&wmap, ts.belief(j, t), &world)? != image {
                    return Err(Error::WellDefinednessFailure { player: ts.players()[j].clone(), block: b });
                }
            }
            row.push(image);
        }
        beliefs.push(row);
    }
    let mut out = TypeStructure::new(ts.space().clone(), ts.players().to_vec(), types, beliefs)?;
    if let Some(v) = ts.valuation() {
        out = out.with_valuation(v.clone())?;
    }
    Ok((out, f))
}

/// One point of a finite-depth terminal approximation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApproximateType {
    pub tree: DescriptionTree,
    /// Per event, the belief over depth-(k-1) description points.
    pub belief: EventBeliefs,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TerminalApproximation {
    pub players: Vec<String>,
    pub depth: usize,
    /// `types[j]`: distinct depth-k descriptions of player `j`, sorted.
    pub types: Vec<Vec<ApproximateType>>,
}

impl TerminalApproximation {
    pub fn len(&self) -> usize {
        self.types.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut obj = serde_json::Map::new();
        for (j, list) in self.types.iter().enumerate() {
            let entries: Vec<serde_json::Value> = list
                .iter()
                .map(|a| {
                    let mut belief = serde_json::Map::new();
                    for (event, m) in &a.belief {
                        let mm: serde_json::Map<String, serde_json::Value> =
                            m.iter().map(|(k, x)| (k.clone(), serde_json::Value::String(x.to_string()))).collect();
                        belief.insert(event.clone(), serde_json::Value::Object(mm));
                    }
                    serde_json::json!({ "description": a.tree.to_json(), "belief": belief })
                })
                .collect();
            obj.insert(self.players[j].clone(), serde_json::Value::Array(entries));
        }
        serde_json::json!({ "depth": self.depth, "types": obj })
    }
}

/// The set of depth-`k` descriptions realised by any type of any of the
/// given structures, with the belief each one carries at its deepest level.
pub fn terminal_approximation(structures: &[TypeStructure], k: usize) -> Result<TerminalApproximation> {
    if k == 0 {
        return Err(Error::Malformed("approximation depth must be at least 1".into()));
    }
    let first = structures.first().ok_or_else(|| Error::Malformed("no structures given".into()))?;
    if structures.iter().any(|ts| ts.space() != first.space() || ts.players() != first.players()) {
        return Err(Error::SpaceMismatch);
    }
    let n = first.num_players();
    let mut h = HierarchySpace::for_structure(first);
    let mut ids = vec![BTreeSet::new(); n];
    for ts in structures {
        let table = h.describe_all(ts, k)?;
        for (j, row) in table.levels[k].iter().enumerate() {
            ids[j].extend(row.iter().copied());
        }
    }
    let types = ids
        .into_iter()
        .map(|set| {
            let mut trees: Vec<DescriptionTree> = set
                .into_iter()
                .map(|id| h.tree(crate::hierarchy::Description::Player { id, depth: k }))
                .collect();
            trees.sort();
            trees
                .into_iter()
                .map(|tree| {
                    let belief = tree.top_belief().unwrap_or_default();
                    ApproximateType { tree, belief }
                })
                .collect()
        })
        .collect();
    Ok(TerminalApproximation { players: first.players().to_vec(), depth: k, types })
}
