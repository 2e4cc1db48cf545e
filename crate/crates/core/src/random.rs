//! Random generators for spaces, CPS families, type structures and
//! morphisms. Used by tests, the acceptance suite and benchmarks.
//!
//! Weights are small integers so that ties, zero masses and duplicated
//! types show up often.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::Result;
use crate::measure::{Cps, Measure};
use crate::rational::Rational;
use crate::space::{Component, ConditionalDomain, EventSet, FiniteConditionalSpace, Valuation};
use crate::structure::{MorphismSpec, TypeStructure};

#[derive(Debug, Clone, Copy)]
pub struct Params {
    pub max_states: usize,
    pub max_events: usize,
    pub max_players: usize,
    pub max_types: usize,
    /// Chance that a new type copies the belief of an earlier one.
    pub duplicate_rate: f64,
}

impl Default for Params {
    fn default() -> Self {
        Params { max_states: 3, max_events: 3, max_players: 3, max_types: 4, duplicate_rate: 0.3 }
    }
}

/// States `s1..sn` and up to `max_events` nonempty events `B1..`; the first
/// event is the whole space about half the time.
pub fn space<R: Rng>(rng: &mut R, max_states: usize, max_events: usize) -> FiniteConditionalSpace {
    let n = rng.gen_range(1..=max_states.max(1));
    let states: Vec<String> = (1..=n).map(|i| format!("s{i}")).collect();
    let k = rng.gen_range(1..=max_events.max(1));
    let mut events = Vec::with_capacity(k);
    for b in 0..k {
        let members: Vec<String> = if b == 0 && rng.gen_bool(0.5) {
            states.clone()
        } else {
            let ev = nonempty_subset(rng, n);
            ev.iter().map(|i| states[i].clone()).collect()
        };
        let name = if members.len() == n && b == 0 { "All".to_string() } else { format!("B{}", b + 1) };
        events.push((name, members));
    }
    FiniteConditionalSpace::new(states, events).expect("generated space is well formed")
}

pub fn nonempty_subset<R: Rng>(rng: &mut R, n: usize) -> EventSet {
    loop {
        let ev = EventSet::from_indices(n, (0..n).filter(|_| rng.gen_bool(0.5)));
        if !ev.is_empty() {
            return ev;
        }
    }
}

/// Random integer weights on a random nonempty part of `support`,
/// normalized.
pub fn weights_on<R: Rng>(rng: &mut R, support: &EventSet, full: bool) -> Vec<Rational> {
    let n = support.universe();
    let members: Vec<usize> = support.iter().collect();
    loop {
        let mut w = vec![0i64; n];
        for &i in &members {
            w[i] = if full { rng.gen_range(1..=3) } else { rng.gen_range(0..=3) };
        }
        let total: i64 = w.iter().sum();
        if total > 0 {
            return w.into_iter().map(|x| Rational::new(x, total).expect("positive total")).collect();
        }
    }
}

/// A valid CPS built from a random lexicographic sequence of measures
/// supported inside `within`: each event's measure is the first measure in
/// the sequence that charges it, conditioned on it. The last measure has
/// full support on `within`, so every event meeting `within` is charged.
pub fn lexicographic_cps<R: Rng>(rng: &mut R, cdom: &Arc<ConditionalDomain>, within: &EventSet) -> Result<Cps> {
    let domain = cdom.domain().clone();
    let levels = rng.gen_range(1..=3);
    let mut seq: Vec<Vec<Rational>> = Vec::with_capacity(levels);
    for l in 0..levels {
        let full = l + 1 == levels;
        let support = if full { within.clone() } else { random_sub(rng, within) };
        seq.push(weights_on(rng, &support, full));
    }
    let per_event = (0..cdom.num_events())
        .map(|b| {
            let ev = cdom.event(b);
            let mu = seq
                .iter()
                .find_map(|m| {
                    let mass: Rational = ev.iter().map(|i| &m[i]).sum();
                    (!mass.is_zero()).then(|| {
                        (0..domain.size())
                            .map(|i| if ev.contains(i) { &m[i] / &mass } else { Rational::zero() })
                            .collect::<Vec<_>>()
                    })
                })
                .expect("last measure charges every event meeting its support");
            Measure::new(domain.clone(), mu)
        })
        .collect::<Result<Vec<_>>>()?;
    Cps::new(cdom.clone(), per_event)
}

fn random_sub<R: Rng>(rng: &mut R, within: &EventSet) -> EventSet {
    let members: Vec<usize> = within.iter().collect();
    loop {
        let ev = EventSet::from_indices(within.universe(), members.iter().copied().filter(|_| rng.gen_bool(0.5)));
        if !ev.is_empty() {
            return ev;
        }
    }
}

/// An event-indexed family that is a CPS about a third of the time. The rest
/// are perturbations that may or may not break an axiom: independent
/// measures per event, mass moved within one event, or one scaled measure.
pub fn measure_family<R: Rng>(rng: &mut R, cdom: &Arc<ConditionalDomain>) -> Result<Cps> {
    let n = cdom.domain().size();
    let valid = lexicographic_cps(rng, cdom, &EventSet::full(n))?;
    let domain = cdom.domain().clone();
    let mut masses: Vec<Vec<Rational>> = valid.measures().iter().map(|m| m.masses().to_vec()).collect();
    match rng.gen_range(0..8) {
        0..=2 => return Ok(valid),
        3 | 4 => {
            for (b, row) in masses.iter_mut().enumerate() {
                let ev = if rng.gen_bool(0.8) { cdom.event(b).clone() } else { EventSet::full(n) };
                *row = weights_on(rng, &ev, false);
            }
        }
        5 | 6 => {
            let b = rng.gen_range(0..masses.len());
            let members: Vec<usize> =
                if rng.gen_bool(0.8) { cdom.event(b).iter().collect() } else { (0..n).collect() };
            let from = *members.choose(rng).expect("events are nonempty");
            let to = *members.iter().find(|&&i| i != from).unwrap_or(&from);
            let amount = Rational::new(rng.gen_range(1..=2), rng.gen_range(2..=6)).expect("nonzero");
            let amount = if masses[b][from] < amount { masses[b][from].clone() } else { amount };
            masses[b][from] = &masses[b][from] - &amount;
            masses[b][to] = &masses[b][to] + &amount;
        }
        _ => {
            let b = rng.gen_range(0..masses.len());
            let i = rng.gen_range(0..n);
            let delta = Rational::new(rng.gen_range(-2..=2), 3).expect("nonzero");
            masses[b][i] = &masses[b][i] + &delta;
        }
    }
    let per_event = masses
        .into_iter()
        .map(|m| Measure::from_raw(domain.clone(), m))
        .collect::<Result<Vec<_>>>()?;
    Cps::new(cdom.clone(), per_event)
}

/// Type labels of player `j`: `a1, a2, ..` for the first player, `b1, ..`
/// for the second, and so on.
pub fn type_labels(j: usize, count: usize) -> Vec<String> {
    let letter = (b'a' + (j % 26) as u8) as char;
    (1..=count).map(|k| format!("{letter}{k}")).collect()
}

/// A Harsanyi type structure with random lexicographic beliefs. Some types
/// repeat the beliefs of earlier types of the same player, which makes
/// the structure redundant.
pub fn structure<R: Rng>(rng: &mut R, p: &Params) -> Result<TypeStructure> {
    let sp = space(rng, p.max_states, p.max_events);
    let n = rng.gen_range(1..=p.max_players.max(1));
    let players: Vec<String> = (1..=n).map(|j| j.to_string()).collect();
    let types: Vec<Vec<String>> = (0..n).map(|j| type_labels(j, rng.gen_range(1..=p.max_types.max(1)))).collect();
    structure_on(rng, sp, players, types, p.duplicate_rate)
}

/// Random beliefs for given players and type sets.
pub fn structure_on<R: Rng>(
    rng: &mut R,
    sp: FiniteConditionalSpace,
    players: Vec<String>,
    types: Vec<Vec<String>>,
    duplicate_rate: f64,
) -> Result<TypeStructure> {
    let world = TypeStructure::world_space(&sp, &players, &types)?;
    let wd = world.domain().clone();
    let n = players.len();
    let mut beliefs = Vec::with_capacity(n);
    for j in 0..n {
        // Beliefs about nature and the other players.
        let others: Vec<Component> = (0..n)
            .filter(|&i| i != j)
            .map(|i| Component { name: players[i].clone(), labels: types[i].clone() })
            .collect();
        let odom = Arc::new(ConditionalDomain::lifted(&sp, others)?);
        let mut bases: Vec<Cps> = Vec::with_capacity(types[j].len());
        for t in 0..types[j].len() {
            let base = if t > 0 && rng.gen_bool(duplicate_rate) {
                bases[rng.gen_range(0..t)].clone()
            } else {
                lexicographic_cps(rng, &odom, &EventSet::full(odom.domain().size()))?
            };
            bases.push(base);
        }
        let od = odom.domain();
        let row = bases
            .iter()
            .enumerate()
            .map(|(t, base)| {
                let per_event = base
                    .measures()
                    .iter()
                    .map(|m| {
                        let mut mass = vec![Rational::zero(); wd.size()];
                        for (o, x) in m.masses().iter().enumerate() {
                            let mut c = od.coords(o);
                            c.insert(j + 1, t);
                            mass[wd.index(&c)] = x.clone();
                        }
                        Measure::new(wd.clone(), mass)
                    })
                    .collect::<Result<Vec<_>>>()?;
                Cps::new(world.clone(), per_event)
            })
            .collect::<Result<Vec<_>>>()?;
        beliefs.push(row);
    }
    TypeStructure::new(sp, players, types, beliefs)
}

/// Random truth values for propositions `p`, `q`, `r` (as many as asked).
pub fn valuation<R: Rng>(rng: &mut R, num_states: usize, num_props: usize) -> Valuation {
    let props: Vec<String> = ["p", "q", "r", "u", "v"].iter().take(num_props).map(|s| s.to_string()).collect();
    let rows: Vec<Vec<String>> =
        (0..num_states).map(|_| props.iter().filter(|_| rng.gen_bool(0.5)).cloned().collect()).collect();
    Valuation::new(props, &rows).expect("distinct propositions")
}

/// Split every type of `target` into one or more copies and give each copy
/// a belief that pushes forward onto the original. Returns the split
/// structure and the morphism onto `target`.
///
/// Each copy divides the mass of a target world among its preimages using
/// one fixed set of ratios for all events, so split beliefs stay CPSs.
pub fn split<R: Rng>(rng: &mut R, target: &TypeStructure, max_copies: usize) -> Result<(TypeStructure, MorphismSpec)> {
    let n = target.num_players();
    let mut maps = Vec::with_capacity(n);
    let mut types = Vec::with_capacity(n);
    for j in 0..n {
        let mut m = Vec::new();
        for u in 0..target.types(j).len() {
            for _ in 0..rng.gen_range(1..=max_copies.max(1)) {
                m.push(u);
            }
        }
        m.shuffle(rng);
        types.push(type_labels(j, m.len()).into_iter().map(|s| format!("{s}x")).collect::<Vec<_>>());
        maps.push(m);
    }
    let f = MorphismSpec { maps };
    let world = TypeStructure::world_space(target.space(), target.players(), &types)?;
    let sd = world.domain().clone();
    let td = target.world().domain();
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
        for t in 0..types[j].len() {
            // Ratios over the preimage of each target world, restricted to
            // worlds where player j is this copy.
            let mut ratio = vec![Rational::zero(); sd.size()];
            let mut groups: Vec<Vec<usize>> = vec![Vec::new(); td.size()];
            for w in 0..sd.size() {
                if sd.coord(w, j + 1) == t {
                    groups[wmap[w]].push(w);
                }
            }
            for g in groups.iter().filter(|g| !g.is_empty()) {
                let mut ev = EventSet::empty(sd.size());
                for &w in g {
                    ev.insert(w);
                }
                let full = rng.gen_bool(0.5);
                let wts = weights_on(rng, &ev, full);
                for &w in g {
                    ratio[w] = wts[w].clone();
                }
            }
            let image = target.belief(j, f.maps[j][t]);
            let per_event = image
                .measures()
                .iter()
                .map(|m| {
                    let mass = (0..sd.size())
                        .map(|w| if ratio[w].is_zero() { Rational::zero() } else { m.mass(wmap[w]) * &ratio[w] })
                        .collect();
                    Measure::from_raw(sd.clone(), mass)
                })
                .collect::<Result<Vec<_>>>()?;
            row.push(Cps::new(world.clone(), per_event)?);
        }
        beliefs.push(row);
    }
    let mut ts = TypeStructure::new(target.space().clone(), target.players().to_vec(), types, beliefs)?;
    if let Some(v) = target.valuation() {
        ts = ts.with_valuation(v.clone())?;
    }
    Ok((ts, f))
}
