//! Type structures, conditional belief operators and type morphisms.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::measure::{validate_cps, Cps, CpsViolation, Measure};
use crate::rational::Rational;
use crate::space::{Component, ConditionalDomain, EventSet, FiniteConditionalSpace, Valuation};

/// A coordinate of the world space: nature or one of the players.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Coordinate {
    Nature,
    Player(usize),
}

impl Coordinate {
    /// Component index in the world domain.
    pub fn component(self) -> usize {
        match self {
            Coordinate::Nature => 0,
            Coordinate::Player(j) => j + 1,
        }
    }
}

/// A finite type structure on a conditional space.
///
/// The world space is `T = S × T_1 × … × T_n`, enumerated with nature most
/// significant; its conditioning events are the cylinders `B × ∏ T_j`.
/// Every player type carries one measure per conditioning event.
#[derive(Clone, PartialEq, Eq)]
pub struct TypeStructure {
    space: FiniteConditionalSpace,
    players: Vec<String>,
    types: Vec<Vec<String>>,
    world: Arc<ConditionalDomain>,
    beliefs: Vec<Vec<Cps>>,
    valuation: Option<Valuation>,
}

impl TypeStructure {
    /// The world space for the given players and type sets.
    pub fn world_space(
        space: &FiniteConditionalSpace,
        players: &[String],
        types: &[Vec<String>],
    ) -> Result<Arc<ConditionalDomain>> {
        if players.len() != types.len() {
            return Err(Error::Malformed(format!("{} players but {} type sets", players.len(), types.len())));
        }
        let mut seen = std::collections::HashSet::new();
        for p in players {
            if !seen.insert(p.as_str()) {
                return Err(Error::Malformed(format!("duplicate player `{p}`")));
            }
        }
        if let Some((p, _)) = players.iter().zip(types).find(|(_, t)| t.is_empty()) {
            return Err(Error::Malformed(format!("player `{p}` has no types")));
        }
        if space.is_empty() {
            return Err(Error::Malformed("space has no states".into()));
        }
        let comps = players
            .iter()
            .zip(types)
            .map(|(p, t)| Component { name: p.clone(), labels: t.clone() })
            .collect();
        Ok(Arc::new(ConditionalDomain::lifted(space, comps)?))
    }

    /// `beliefs[j][t]` is the CPS of type `t` of player `j`; each must live
    /// on the world space built by [`TypeStructure::world_space`].
    pub fn new(
        space: FiniteConditionalSpace,
        players: Vec<String>,
        types: Vec<Vec<String>>,
        beliefs: Vec<Vec<Cps>>,
    ) -> Result<Self> {
        let world = Self::world_space(&space, &players, &types)?;
        if beliefs.len() != players.len() {
            return Err(Error::Malformed("belief table does not match players".into()));
        }
        for (j, row) in beliefs.iter().enumerate() {
            if row.len() != types[j].len() {
                return Err(Error::Malformed(format!("belief table does not match types of `{}`", players[j])));
            }
            if row.iter().any(|cps| **cps.conditional_domain() != *world) {
                return Err(Error::DomainMismatch);
            }
        }
        // Share one world Arc across all beliefs.
        let beliefs = beliefs
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|cps| Cps::new(world.clone(), cps.measures().to_vec()))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(TypeStructure { space, players, types, world, beliefs, valuation: None })
    }

    pub fn with_valuation(mut self, valuation: Valuation) -> Result<Self> {
        if valuation.num_states() != self.space.len() {
            return Err(Error::Malformed(format!(
                "valuation covers {} states, space has {}",
                valuation.num_states(),
                self.space.len()
            )));
        }
        self.valuation = Some(valuation);
        Ok(self)
    }

    pub fn space(&self) -> &FiniteConditionalSpace {
        &self.space
    }

    pub fn players(&self) -> &[String] {
        &self.players
    }

    pub fn num_players(&self) -> usize {
        self.players.len()
    }

    pub fn types(&self, j: usize) -> &[String] {
        &self.types[j]
    }

    pub fn type_sets(&self) -> &[Vec<String>] {
        &self.types
    }

    pub fn total_types(&self) -> usize {
        self.types.iter().map(Vec::len).sum()
    }

    pub fn world(&self) -> &Arc<ConditionalDomain> {
        &self.world
    }

    pub fn num_worlds(&self) -> usize {
        self.world.domain().size()
    }

    pub fn belief(&self, j: usize, t: usize) -> &Cps {
        &self.beliefs[j][t]
    }

    pub fn valuation(&self) -> Option<&Valuation> {
        self.valuation.as_ref()
    }

    pub fn player_index(&self, name: &str) -> Result<usize> {
        self.players.iter().position(|p| p == name).ok_or_else(|| Error::UnknownPlayer(name.to_string()))
    }

    pub fn type_index(&self, j: usize, label: &str) -> Result<usize> {
        self.types[j].iter().position(|t| t == label).ok_or_else(|| Error::UnknownType {
            player: self.players[j].clone(),
            ty: label.to_string(),
        })
    }

    pub fn event_index(&self, name: &str) -> Result<usize> {
        self.space.event_index(name).ok_or_else(|| Error::UnknownEvent(name.to_string()))
    }

    /// Resolve a coordinate name: `"0"` is nature unless a player is
    /// literally called `"0"`.
    pub fn coordinate(&self, name: &str) -> Result<Coordinate> {
        match self.player_index(name) {
            Ok(j) => Ok(Coordinate::Player(j)),
            Err(_) if name == "0" => Ok(Coordinate::Nature),
            Err(e) => Err(e),
        }
    }

    pub fn nature_of(&self, world: usize) -> usize {
        self.world.domain().coord(world, 0)
    }

    pub fn type_of(&self, world: usize, j: usize) -> usize {
        self.world.domain().coord(world, j + 1)
    }

    /// All worlds in which player `j` has type `t`.
    pub fn fiber(&self, j: usize, t: usize) -> EventSet {
        self.world.domain().fiber(j + 1, t)
    }

    /// Worlds where player `j` assigns probability at least `p` to `event`
    /// conditional on the conditioning event at index `b`: the union of the
    /// fibers of every qualifying type.
    pub fn p_belief(&self, j: usize, b: usize, p: &Rational, event: &EventSet) -> Result<EventSet> {
        if j >= self.num_players() {
            return Err(Error::UnknownPlayer(j.to_string()));
        }
        if b >= self.space.num_events() {
            return Err(Error::UnknownEvent(b.to_string()));
        }
        if !p.is_probability() {
            return Err(Error::ProbabilityOutOfRange(p.to_string()));
        }
        if event.universe() != self.num_worlds() {
            return Err(Error::EventOutsideSpace { expected: self.num_worlds(), actual: event.universe() });
        }
        let mut out = EventSet::empty(self.num_worlds());
        for t in 0..self.types[j].len() {
            if &self.beliefs[j][t].prob(event, b) >= p {
                out = out.union(&self.fiber(j, t));
            }
        }
        Ok(out)
    }

    /// Name-based form of [`TypeStructure::p_belief`].
    pub fn p_belief_named(&self, player: &str, event_name: &str, p: &Rational, event: &EventSet) -> Result<EventSet> {
        let j = self.player_index(player)?;
        let b = self.event_index(event_name)?;
        self.p_belief(j, b, p, event)
    }

    /// Beliefs of player `j` about nature and the other players: the
    /// marginal of every type's CPS on `S × ∏_{i≠j} T_i`.
    pub fn beta(&self, j: usize) -> Result<Vec<Cps>> {
        if j >= self.num_players() {
            return Err(Error::UnknownPlayer(j.to_string()));
        }
        let others: Vec<Component> = (0..self.num_players())
            .filter(|&i| i != j)
            .map(|i| Component { name: self.players[i].clone(), labels: self.types[i].clone() })
            .collect();
        let target = Arc::new(ConditionalDomain::lifted(&self.space, others)?);
        let keep: Vec<usize> = (0..=self.num_players()).filter(|&c| c != j + 1).collect();
        self.beliefs[j]
            .iter()
            .map(|cps| {
                let per_event = cps.measures().iter().map(|m| m.project(&keep)).collect::<Result<Vec<_>>>()?;
                // project() builds its own domain; rebind to the shared one
                let per_event = per_event
                    .into_iter()
                    .map(|m| Measure::from_raw(target.domain().clone(), m.masses().to_vec()))
                    .collect::<Result<Vec<_>>>()?;
                Cps::new(target.clone(), per_event)
            })
            .collect()
    }
}

impl fmt::Debug for TypeStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TypeStructure")
            .field("states", &self.space.states())
            .field("players", &self.players)
            .field("types", &self.types)
            .finish_non_exhaustive()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypedCpsViolation {
    pub player: String,
    pub ty: String,
    pub violation: CpsViolation,
}

/// Own-type marginal that is not the Dirac measure at the type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HarsanyiViolation {
    pub player: String,
    pub ty: String,
    pub event: String,
    /// Marginal on the player's own types, zero masses omitted.
    pub marginal: Vec<(String, Rational)>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StructureReport {
    pub cps: Vec<TypedCpsViolation>,
    pub harsanyi: Vec<HarsanyiViolation>,
}

impl StructureReport {
    pub fn is_ok(&self) -> bool {
        self.cps.is_empty() && self.harsanyi.is_empty()
    }
}

/// Check every belief is a CPS and, with `harsanyi`, that every type's
/// marginal on its own type set is the Dirac measure at itself.
pub fn validate_structure(ts: &TypeStructure, harsanyi: bool) -> StructureReport {
    let mut report = StructureReport::default();
    for j in 0..ts.num_players() {
        for t in 0..ts.types[j].len() {
            let cps = &ts.beliefs[j][t];
            for violation in validate_cps(cps).violations {
                report.cps.push(TypedCpsViolation {
                    player: ts.players[j].clone(),
                    ty: ts.types[j][t].clone(),
                    violation,
                });
            }
            if !harsanyi {
                continue;
            }
            let own = ts.fiber(j, t);
            for (b, mu) in cps.measures().iter().enumerate() {
                let on_own = mu.prob(&own);
                let total = mu.total();
                if on_own == total && total.is_one() {
                    continue;
                }
                let marginal = (0..ts.types[j].len())
                    .map(|u| (ts.types[j][u].clone(), mu.prob(&ts.fiber(j, u))))
                    .filter(|(_, m)| !m.is_zero())
                    .collect();
                report.harsanyi.push(HarsanyiViolation {
                    player: ts.players[j].clone(),
                    ty: ts.types[j][t].clone(),
                    event: ts.world.event_name(b).to_string(),
                    marginal,
                });
            }
        }
    }
    report
}

/// Per-player type maps of a candidate type morphism; nature is always
/// mapped by the identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MorphismSpec {
    pub maps: Vec<Vec<usize>>,
}

impl MorphismSpec {
    pub fn identity(ts: &TypeStructure) -> Self {
        MorphismSpec { maps: ts.types.iter().map(|t| (0..t.len()).collect()).collect() }
    }

    /// Resolve label maps. `nature`, when given, must be the identity.
    pub fn from_labels(
        source: &TypeStructure,
        target: &TypeStructure,
        players: &[(String, Vec<(String, String)>)],
        nature: Option<&[(String, String)]>,
    ) -> Result<Self> {
        if let Some(pairs) = nature {
            for (a, b) in pairs {
                if source.space.state_index(a).is_none() {
                    return Err(Error::UnknownState(a.clone()));
                }
                if a != b {
                    return Err(Error::NatureNotIdentity);
                }
            }
        }
        let mut maps: Vec<Option<Vec<Option<usize>>>> = vec![None; source.num_players()];
        for (player, pairs) in players {
            let j = source.player_index(player)?;
            let j2 = target.player_index(player)?;
            if j != j2 {
                return Err(Error::SpaceMismatch);
            }
            let mut m = vec![None; source.types[j].len()];
            for (a, b) in pairs {
                let ta = source.type_index(j, a)?;
                let tb = target.type_index(j, b)?;
                m[ta] = Some(tb);
            }
            maps[j] = Some(m);
        }
        let maps = maps
            .into_iter()
            .enumerate()
            .map(|(j, m)| {
                let m = m.ok_or_else(|| Error::PartialMap(format!("no map for player `{}`", source.players[j])))?;
                m.into_iter()
                    .enumerate()
                    .map(|(t, x)| {
                        x.ok_or_else(|| {
                            Error::PartialMap(format!(
                                "type `{}` of player `{}` is unmapped",
                                source.types[j][t], source.players[j]
                            ))
                        })
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(MorphismSpec { maps })
    }

    /// Label pairs per player, for export.
    pub fn to_labels(&self, source: &TypeStructure, target: &TypeStructure) -> Vec<(String, Vec<(String, String)>)> {
        self.maps
            .iter()
            .enumerate()
            .map(|(j, m)| {
                let pairs = m
                    .iter()
                    .enumerate()
                    .map(|(t, &u)| (source.types[j][t].clone(), target.types[j][u].clone()))
                    .collect();
                (source.players[j].clone(), pairs)
            })
            .collect()
    }

    fn check_shape(&self, source: &TypeStructure, target: &TypeStructure) -> Result<()> {
        if source.space != target.space || source.players != target.players {
            return Err(Error::SpaceMismatch);
        }
        if self.maps.len() != source.num_players() {
            return Err(Error::PartialMap("wrong number of player maps".into()));
        }
        for (j, m) in self.maps.iter().enumerate() {
            if m.len() != source.types[j].len() {
                return Err(Error::PartialMap(format!("map for `{}` is not total", source.players[j])));
            }
            if m.iter().any(|&u| u >= target.types[j].len()) {
                return Err(Error::PartialMap(format!("map for `{}` leaves the target", source.players[j])));
            }
        }
        Ok(())
    }

    /// The induced map on worlds, as target world indices.
    pub fn world_map(&self, source: &TypeStructure, target: &TypeStructure) -> Result<Vec<usize>> {
        self.check_shape(source, target)?;
        let sd = source.world.domain();
        let td = target.world.domain();
        Ok((0..sd.size())
            .map(|w| {
                let mut coords = sd.coords(w);
                for (j, m) in self.maps.iter().enumerate() {
                    coords[j + 1] = m[coords[j + 1]];
                }
                td.index(&coords)
            })
            .collect())
    }

    /// `f⁻¹(E)` for an event over the target worlds.
    pub fn preimage(&self, world_map: &[usize], event: &EventSet) -> EventSet {
        EventSet::from_indices(world_map.len(), (0..world_map.len()).filter(|&w| event.contains(world_map[w])))
    }

    pub fn is_bijective(&self, target: &TypeStructure) -> bool {
        self.maps.iter().enumerate().all(|(j, m)| {
            let mut hit = vec![false; target.types[j].len()];
            m.len() == hit.len() && m.iter().all(|&u| !std::mem::replace(&mut hit[u], true))
        })
    }

    /// Inverse of a bijective map.
    pub fn inverse(&self) -> MorphismSpec {
        let maps = self
            .maps
            .iter()
            .map(|m| {
                let mut inv = vec![0; m.len()];
                for (t, &u) in m.iter().enumerate() {
                    inv[u] = t;
                }
                inv
            })
            .collect();
        MorphismSpec { maps }
    }
}

/// Outcome of a morphism check. Counterexamples are the first failure in
/// (player, type, event, world) order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MorphismReport {
    Ok,
    Counterexample {
        player: String,
        ty: String,
        event: String,
        /// Target world `w'`; the failing event is `{w'}`.
        world: String,
        /// `m'_{j,B}(f_j(t_j))({w'})`
        target_mass: Rational,
        /// `m_{j,B}(t_j)(f⁻¹({w'}))`
        pulled_mass: Rational,
    },
    ValuationMismatch { state: String, prop: String },
}

impl MorphismReport {
    pub fn is_ok(&self) -> bool {
        matches!(self, MorphismReport::Ok)
    }
}

impl fmt::Display for MorphismReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MorphismReport::Ok => f.write_str("ok"),
            MorphismReport::Counterexample { player, ty, event, world, target_mass, pulled_mass } => write!(
                f,
                "player {player} type {ty} under {event}: target belief gives {{{world}}} mass {target_mass}, preimage has mass {pulled_mass}"
            ),
            MorphismReport::ValuationMismatch { state, prop } => {
                write!(f, "valuations disagree on {prop} at {state}")
            }
        }
    }
}

/// Check that `f` commutes with the belief functions:
/// `m'_{j,B}(f_j(t_j))(E) = m_{j,B}(t_j)(f⁻¹(E))`, tested on singleton `E`.
/// When both structures carry valuations they must agree.
pub fn check_morphism(ts: &TypeStructure, ts2: &TypeStructure, f: &MorphismSpec) -> Result<MorphismReport> {
    let wmap = f.world_map(ts, ts2)?;
    let target_domain = ts2.world.domain();
    for j in 0..ts.num_players() {
        for t in 0..ts.types[j].len() {
            let image = ts2.belief(j, f.maps[j][t]);
            for (b, mu) in ts.belief(j, t).measures().iter().enumerate() {
                let pushed = crate::measure::pushforward(&wmap, mu, target_domain)?;
                let expected = image.measure(b);
                if let Some(w) = (0..target_domain.size()).find(|&w| expected.mass(w) != pushed.mass(w)) {
                    return Ok(MorphismReport::Counterexample {
                        player: ts.players[j].clone(),
                        ty: ts.types[j][t].clone(),
                        event: ts.world.event_name(b).to_string(),
                        world: target_domain.key(w).to_string(),
                        target_mass: expected.mass(w).clone(),
                        pulled_mass: pushed.mass(w).clone(),
                    });
                }
            }
        }
    }
    if let (Some(v1), Some(v2)) = (&ts.valuation, &ts2.valuation) {
        if let Some(report) = valuation_mismatch(ts, v1, v2) {
            return Ok(report);
        }
    }
    Ok(MorphismReport::Ok)
}

fn valuation_mismatch(ts: &TypeStructure, v1: &Valuation, v2: &Valuation) -> Option<MorphismReport> {
    let mut props: Vec<&String> = v1.props().iter().collect();
    props.extend(v2.props().iter().filter(|p| !v1.props().contains(p)));
    for s in 0..ts.space.len() {
        for p in &props {
            let a = v1.value(s, p).unwrap_or(false);
            let b = v2.value(s, p).unwrap_or(false);
            if a != b {
                return Some(MorphismReport::ValuationMismatch {
                    state: ts.space.states()[s].clone(),
                    prop: (*p).clone(),
                });
            }
        }
    }
    None
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsomorphismReport {
    pub isomorphic: bool,
    /// Present whenever every component map is a bijection.
    pub inverse: Option<MorphismSpec>,
}

/// A type isomorphism: componentwise bijective, with both `f` and `f⁻¹`
/// type morphisms.
pub fn check_isomorphism(ts: &TypeStructure, ts2: &TypeStructure, f: &MorphismSpec) -> Result<IsomorphismReport> {
    f.check_shape(ts, ts2)?;
    if !f.is_bijective(ts2) {
        return Ok(IsomorphismReport { isomorphic: false, inverse: None });
    }
    let inv = f.inverse();
    let isomorphic = check_morphism(ts, ts2, f)?.is_ok() && check_morphism(ts2, ts, &inv)?.is_ok();
    Ok(IsomorphismReport { isomorphic, inverse: Some(inv) })
}
