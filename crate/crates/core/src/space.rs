//! Finite conditional spaces.
//!
//! A [`FiniteConditionalSpace`] is a finite set of nature states whose event
//! algebra is the full power set, together with a named family of nonempty
//! conditioning events. Products of such a space with further finite
//! components are described by a [`Domain`], and a [`ConditionalDomain`] pairs
//! a domain with the cylinder lift of the conditioning family.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use fixedbitset::FixedBitSet;
use indexmap::IndexMap;

use crate::error::{Error, Result};

/// A subset of the states of some finite domain, stored as a bitset.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EventSet(FixedBitSet);

impl EventSet {
    pub fn empty(universe: usize) -> Self {
        EventSet(FixedBitSet::with_capacity(universe))
    }

    pub fn full(universe: usize) -> Self {
        let mut bits = FixedBitSet::with_capacity(universe);
        bits.insert_range(..);
        EventSet(bits)
    }

    pub fn from_indices(universe: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut set = Self::empty(universe);
        for i in indices {
            set.insert(i);
        }
        set
    }

    pub fn singleton(universe: usize, index: usize) -> Self {
        Self::from_indices(universe, [index])
    }

    /// Size of the universe this event lives in.
    pub fn universe(&self) -> usize {
        self.0.len()
    }

    pub fn contains(&self, index: usize) -> bool {
        self.0.contains(index)
    }

    /// Panics if `index` is outside the universe.
    pub fn insert(&mut self, index: usize) {
        self.0.insert(index);
    }

    pub fn remove(&mut self, index: usize) {
        self.0.set(index, false);
    }

    pub fn count(&self) -> usize {
        self.0.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_clear()
    }

    pub fn is_full(&self) -> bool {
        self.count() == self.universe()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.ones()
    }

    pub fn is_subset(&self, other: &EventSet) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn union(&self, other: &EventSet) -> EventSet {
        let mut out = self.0.clone();
        out.union_with(&other.0);
        EventSet(out)
    }

    pub fn intersection(&self, other: &EventSet) -> EventSet {
        let mut out = self.0.clone();
        out.intersect_with(&other.0);
        EventSet(out)
    }

    pub fn complement(&self) -> EventSet {
        let mut out = self.0.clone();
        out.toggle_range(..);
        EventSet(out)
    }
}

impl fmt::Debug for EventSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// One factor of a product domain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    pub name: String,
    pub labels: Vec<String>,
}

/// A finite product of labelled components, enumerated lexicographically
/// with the first component most significant.
///
/// Single-component domains are plain state sets; their state keys are the
/// labels themselves. Product states are keyed `(a,b,c)`.
#[derive(Clone)]
pub struct Domain {
    components: Vec<Component>,
    strides: Vec<usize>,
    size: usize,
    keys: Vec<String>,
    lookup: HashMap<String, usize>,
}

impl Domain {
    pub fn new(components: Vec<Component>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::Malformed("domain without components".into()));
        }
        for c in &components {
            check_distinct(&c.labels)?;
        }
        let mut strides = vec![1; components.len()];
        for c in (0..components.len().saturating_sub(1)).rev() {
            strides[c] = strides[c + 1] * components[c + 1].labels.len();
        }
        let size = components.iter().map(|c| c.labels.len()).product();
        let mut domain = Domain {
            components,
            strides,
            size,
            keys: Vec::with_capacity(size),
            lookup: HashMap::with_capacity(size),
        };
        for idx in 0..size {
            let key = domain.format_key(idx);
            if domain.lookup.insert(key.clone(), idx).is_some() {
                return Err(Error::AmbiguousStateKey(key));
            }
            domain.keys.push(key);
        }
        Ok(domain)
    }

    pub fn single(name: impl Into<String>, labels: Vec<String>) -> Result<Self> {
        Self::new(vec![Component { name: name.into(), labels }])
    }

    fn format_key(&self, idx: usize) -> String {
        if self.components.len() == 1 {
            return self.components[0].labels[idx].clone();
        }
        let parts: Vec<&str> = (0..self.arity())
            .map(|c| self.components[c].labels[self.coord(idx, c)].as_str())
            .collect();
        format!("({})", parts.join(","))
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn arity(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn component(&self, c: usize) -> Result<&Component> {
        self.components.get(c).ok_or(Error::BadComponent(c))
    }

    /// Coordinate of state `idx` along component `c`.
    pub fn coord(&self, idx: usize, c: usize) -> usize {
        (idx / self.strides[c]) % self.components[c].labels.len()
    }

    pub fn coords(&self, idx: usize) -> Vec<usize> {
        (0..self.arity()).map(|c| self.coord(idx, c)).collect()
    }

    /// Panics if `coords` has the wrong arity.
    pub fn index(&self, coords: &[usize]) -> usize {
        assert_eq!(coords.len(), self.arity());
        coords.iter().zip(&self.strides).map(|(x, s)| x * s).sum()
    }

    /// Key of a state: its label, or `(a,b,..)` for product states.
    pub fn key(&self, idx: usize) -> &str {
        &self.keys[idx]
    }

    pub fn find(&self, key: &str) -> Option<usize> {
        self.lookup.get(key).copied()
    }

    /// All states whose coordinate `c` equals `value`.
    pub fn fiber(&self, c: usize, value: usize) -> EventSet {
        EventSet::from_indices(self.size, (0..self.size).filter(|&i| self.coord(i, c) == value))
    }

    /// The product of this domain's components restricted to `keep`, in
    /// the given order.
    pub fn project(&self, keep: &[usize]) -> Result<Domain> {
        let comps = keep
            .iter()
            .map(|&c| self.component(c).cloned())
            .collect::<Result<Vec<_>>>()?;
        Domain::new(comps)
    }
}

impl PartialEq for Domain {
    fn eq(&self, other: &Self) -> bool {
        self.components == other.components
    }
}

impl Eq for Domain {}

impl fmt::Debug for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Domain").field("components", &self.components).finish()
    }
}

fn check_distinct(labels: &[String]) -> Result<()> {
    let mut seen = std::collections::HashSet::new();
    for l in labels {
        if !seen.insert(l.as_str()) {
            return Err(Error::DuplicateLabel(l.clone()));
        }
    }
    Ok(())
}

/// Finite state set with full power-set algebra and named conditioning
/// events.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteConditionalSpace {
    states: Vec<String>,
    conditioning: IndexMap<String, EventSet>,
}

impl FiniteConditionalSpace {
    pub fn new<S, N, L>(states: Vec<S>, conditioning: Vec<(N, Vec<L>)>) -> Result<Self>
    where
        S: Into<String>,
        N: Into<String>,
        L: AsRef<str>,
    {
        let states: Vec<String> = states.into_iter().map(Into::into).collect();
        check_distinct(&states)?;
        let index: HashMap<&str, usize> =
            states.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
        let mut map = IndexMap::new();
        for (name, members) in conditioning {
            let name = name.into();
            let mut ev = EventSet::empty(states.len());
            for m in &members {
                let i = *index
                    .get(m.as_ref())
                    .ok_or_else(|| Error::UnknownState(m.as_ref().to_string()))?;
                ev.insert(i);
            }
            if ev.is_empty() {
                return Err(Error::EmptyConditioningEvent(name));
            }
            if map.contains_key(&name) {
                return Err(Error::DuplicateEventName(name));
            }
            map.insert(name, ev);
        }
        Ok(FiniteConditionalSpace { states, conditioning: map })
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn state_index(&self, label: &str) -> Option<usize> {
        self.states.iter().position(|s| s == label)
    }

    pub fn conditioning(&self) -> &IndexMap<String, EventSet> {
        &self.conditioning
    }

    pub fn event(&self, name: &str) -> Option<&EventSet> {
        self.conditioning.get(name)
    }

    pub fn event_index(&self, name: &str) -> Option<usize> {
        self.conditioning.get_index_of(name)
    }

    pub fn event_names(&self) -> impl Iterator<Item = &str> {
        self.conditioning.keys().map(String::as_str)
    }

    pub fn num_events(&self) -> usize {
        self.conditioning.len()
    }

    pub fn domain(&self) -> Domain {
        Domain::single("nature", self.states.clone()).expect("space labels are distinct")
    }

    /// The space viewed as a conditional domain on its own states.
    pub fn conditional_domain(&self) -> ConditionalDomain {
        ConditionalDomain {
            domain: Arc::new(self.domain()),
            events: self.conditioning.clone(),
        }
    }
}

/// Lift every conditioning event `B` to the cylinder `B × Y` over the
/// product of nature with `extra_components`.
pub fn lift_conditioning(
    space: &FiniteConditionalSpace,
    extra_components: &[Vec<String>],
) -> Result<IndexMap<String, EventSet>> {
    let mut comps = vec![Component { name: "nature".into(), labels: space.states.clone() }];
    for (i, labels) in extra_components.iter().enumerate() {
        comps.push(Component { name: format!("c{}", i + 1), labels: labels.clone() });
    }
    let domain = Domain::new(comps)?;
    Ok(lift_onto(space, &domain))
}

fn lift_onto(space: &FiniteConditionalSpace, domain: &Domain) -> IndexMap<String, EventSet> {
    space
        .conditioning
        .iter()
        .map(|(name, ev)| {
            let lifted = EventSet::from_indices(
                domain.size(),
                (0..domain.size()).filter(|&i| ev.contains(domain.coord(i, 0))),
            );
            (name.clone(), lifted)
        })
        .collect()
}

/// A finite domain with a named family of nonempty conditioning events.
///
/// For product domains built by [`ConditionalDomain::lifted`] the first
/// component is nature and every event is a cylinder over a nature event.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionalDomain {
    domain: Arc<Domain>,
    events: IndexMap<String, EventSet>,
}

impl ConditionalDomain {
    pub fn new(domain: Arc<Domain>, events: IndexMap<String, EventSet>) -> Result<Self> {
        for (name, ev) in &events {
            if ev.universe() != domain.size() {
                return Err(Error::EventOutsideSpace {
                    expected: domain.size(),
                    actual: ev.universe(),
                });
            }
            if ev.is_empty() {
                return Err(Error::EmptyConditioningEvent(name.clone()));
            }
        }
        Ok(ConditionalDomain { domain, events })
    }

    /// Nature times the given named components, with cylinder conditioning.
    pub fn lifted(space: &FiniteConditionalSpace, extra: Vec<Component>) -> Result<Self> {
        let mut comps = vec![Component { name: "nature".into(), labels: space.states.clone() }];
        comps.extend(extra);
        let domain = Domain::new(comps)?;
        let events = lift_onto(space, &domain);
        Ok(ConditionalDomain { domain: Arc::new(domain), events })
    }

    pub fn domain(&self) -> &Arc<Domain> {
        &self.domain
    }

    pub fn events(&self) -> &IndexMap<String, EventSet> {
        &self.events
    }

    pub fn event(&self, i: usize) -> &EventSet {
        &self.events[i]
    }

    pub fn event_name(&self, i: usize) -> &str {
        self.events.get_index(i).map(|(n, _)| n.as_str()).expect("event index in range")
    }

    pub fn num_events(&self) -> usize {
        self.events.len()
    }

    /// Projection of every event onto the nature coordinate.
    pub fn nature_projection(&self, event: &EventSet) -> Vec<usize> {
        let mut out: Vec<usize> = event.iter().map(|i| self.domain.coord(i, 0)).collect();
        out.sort_unstable();
        out.dedup();
        out
    }
}

/// A primitive proposition with a polarity.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    pub prop: String,
    pub positive: bool,
}

impl Literal {
    pub fn pos(prop: impl Into<String>) -> Self {
        Literal { prop: prop.into(), positive: true }
    }

    pub fn neg(prop: impl Into<String>) -> Self {
        Literal { prop: prop.into(), positive: false }
    }
}

impl std::str::FromStr for Literal {
    type Err = Error;

    /// `p` or `!p`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s.strip_prefix('!') {
            Some(rest) if !rest.trim().is_empty() => Ok(Literal::neg(rest.trim())),
            None if !s.is_empty() => Ok(Literal::pos(s)),
            _ => Err(Error::UnknownProposition(s.to_string())),
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.positive {
            f.write_str(&self.prop)
        } else {
            write!(f, "!{}", self.prop)
        }
    }
}

/// A nonempty, consistent set of literals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiteralSet(Vec<Literal>);

impl LiteralSet {
    pub fn new(literals: impl IntoIterator<Item = Literal>) -> Result<Self> {
        let mut out: Vec<Literal> = Vec::new();
        for lit in literals {
            if let Some(prev) = out.iter().find(|l| l.prop == lit.prop) {
                if prev.positive != lit.positive {
                    return Err(Error::InconsistentLiteralSet(lit.prop));
                }
                continue;
            }
            out.push(lit);
        }
        if out.is_empty() {
            return Err(Error::EmptyLiteralSet);
        }
        Ok(LiteralSet(out))
    }

    pub fn parse<S: AsRef<str>>(literals: &[S]) -> Result<Self> {
        let lits = literals
            .iter()
            .map(|s| s.as_ref().parse())
            .collect::<Result<Vec<Literal>>>()?;
        Self::new(lits)
    }

    pub fn literals(&self) -> &[Literal] {
        &self.0
    }

    /// Polarity fixed for `prop`, if any.
    pub fn polarity(&self, prop: &str) -> Option<bool> {
        self.0.iter().find(|l| l.prop == prop).map(|l| l.positive)
    }

    /// Identifier-safe default event name, e.g. `p_and_not_q`.
    pub fn default_name(&self) -> String {
        self.0
            .iter()
            .map(|l| if l.positive { l.prop.clone() } else { format!("not_{}", l.prop) })
            .collect::<Vec<_>>()
            .join("_and_")
    }
}

/// Truth values of primitive propositions at each nature state.
///
/// The tautology is implicit and true everywhere.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Valuation {
    props: Vec<String>,
    truth: Vec<FixedBitSet>,
}

impl Valuation {
    /// `true_props[s]` lists the propositions true at state `s`.
    pub fn new<S: AsRef<str>>(props: Vec<String>, true_props: &[Vec<S>]) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        for p in &props {
            if !seen.insert(p.as_str()) {
                return Err(Error::DuplicateProposition(p.clone()));
            }
        }
        let truth = true_props
            .iter()
            .map(|row| {
                let mut bits = FixedBitSet::with_capacity(props.len());
                for p in row {
                    let k = props
                        .iter()
                        .position(|x| x == p.as_ref())
                        .ok_or_else(|| Error::UnknownProposition(p.as_ref().to_string()))?;
                    bits.insert(k);
                }
                Ok(bits)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Valuation { props, truth })
    }

    pub fn props(&self) -> &[String] {
        &self.props
    }

    pub fn num_states(&self) -> usize {
        self.truth.len()
    }

    pub fn prop_index(&self, prop: &str) -> Option<usize> {
        self.props.iter().position(|p| p == prop)
    }

    pub fn holds(&self, state: usize, prop: usize) -> bool {
        self.truth[state].contains(prop)
    }

    /// Truth value of a named proposition, `None` if unknown.
    pub fn value(&self, state: usize, prop: &str) -> Option<bool> {
        self.prop_index(prop).map(|k| self.holds(state, k))
    }

    pub fn true_props(&self, state: usize) -> Vec<&str> {
        self.truth[state].ones().map(|k| self.props[k].as_str()).collect()
    }
}

/// A space induced by a list of primitive propositions: one state per
/// complete consistent assignment.
#[derive(Debug, Clone)]
pub struct InducedSpace {
    pub space: FiniteConditionalSpace,
    pub valuation: Valuation,
    /// The literal set each conditioning event was built from, in event order.
    pub literal_sets: Vec<LiteralSet>,
}

/// Canonical label of an assignment: its true propositions in input order.
fn assignment_label(props: &[String], truth: &FixedBitSet) -> String {
    let parts: Vec<&str> = truth.ones().map(|k| props[k].as_str()).collect();
    format!("{{{}}}", parts.join(","))
}

/// Build the space of all complete consistent assignments to `props`, with
/// the canonical cylinder `{s : Φ ⊆ s}` for every literal set, named by
/// [`LiteralSet::default_name`].
pub fn induce_from_propositions<S: AsRef<str>>(
    props: &[S],
    cond_props: &[LiteralSet],
) -> Result<InducedSpace> {
    let named: Vec<(String, LiteralSet)> =
        cond_props.iter().map(|phi| (phi.default_name(), phi.clone())).collect();
    induce_named(props, &named)
}

/// As [`induce_from_propositions`] with explicit event names.
pub fn induce_named<S: AsRef<str>>(
    props: &[S],
    cond_props: &[(String, LiteralSet)],
) -> Result<InducedSpace> {
    let props: Vec<String> = props.iter().map(|p| p.as_ref().to_string()).collect();
    let n = props.len();
    if n >= usize::BITS as usize - 1 {
        return Err(Error::Malformed(format!("{n} propositions is too many")));
    }
    let mut seen = std::collections::HashSet::new();
    for p in &props {
        if !seen.insert(p.as_str()) {
            return Err(Error::DuplicateProposition(p.clone()));
        }
    }
    for (_, phi) in cond_props {
        for lit in phi.literals() {
            if !seen.contains(lit.prop.as_str()) {
                return Err(Error::UnknownProposition(lit.prop.clone()));
            }
        }
    }

    // State i makes prop k true iff bit (n-1-k) of i is clear, so the
    // all-true assignment comes first.
    let truth: Vec<FixedBitSet> = (0..1usize << n)
        .map(|i| {
            let mut bits = FixedBitSet::with_capacity(n);
            for k in 0..n {
                if i >> (n - 1 - k) & 1 == 0 {
                    bits.insert(k);
                }
            }
            bits
        })
        .collect();
    let states: Vec<String> = truth.iter().map(|t| assignment_label(&props, t)).collect();

    let prop_idx: HashMap<&str, usize> =
        props.iter().enumerate().map(|(k, p)| (p.as_str(), k)).collect();
    let mut conditioning = Vec::with_capacity(cond_props.len());
    for (name, phi) in cond_props {
        let members: Vec<&str> = truth
            .iter()
            .zip(&states)
            .filter(|(t, _)| {
                phi.literals().iter().all(|l| t.contains(prop_idx[l.prop.as_str()]) == l.positive)
            })
            .map(|(_, s)| s.as_str())
            .collect();
        conditioning.push((name.clone(), members));
    }
    let space = FiniteConditionalSpace::new(states.clone(), conditioning)?;
    Ok(InducedSpace {
        space,
        valuation: Valuation { props, truth },
        literal_sets: cond_props.iter().map(|(_, phi)| phi.clone()).collect(),
    })
}

impl InducedSpace {
    /// Whether `event` qualifies as a conditioning event for `phi`: every
    /// state satisfies every literal of `phi`, and every proposition left
    /// free by `phi` takes both truth values inside the event.
    pub fn satisfies_conditioning_conditions(&self, event: &EventSet, phi: &LiteralSet) -> Result<bool> {
        satisfies_conditioning_conditions(event, phi, &self.valuation)
    }
}

/// Membership test for the propositional conditioning family, against any
/// valuation table.
pub fn satisfies_conditioning_conditions(
    event: &EventSet,
    phi: &LiteralSet,
    valuation: &Valuation,
) -> Result<bool> {
    if event.universe() != valuation.num_states() {
        return Err(Error::EventOutsideSpace {
            expected: valuation.num_states(),
            actual: event.universe(),
        });
    }
    let mut fixed = vec![None; valuation.props().len()];
    for lit in phi.literals() {
        let k = valuation
            .prop_index(&lit.prop)
            .ok_or_else(|| Error::UnknownProposition(lit.prop.clone()))?;
        fixed[k] = Some(lit.positive);
    }
    if event.is_empty() {
        return Ok(false);
    }
    for s in event.iter() {
        for (k, want) in fixed.iter().enumerate() {
            if let Some(want) = want {
                if valuation.holds(s, k) != *want {
                    return Ok(false);
                }
            }
        }
    }
    for (k, want) in fixed.iter().enumerate() {
        if want.is_none() {
            let any_true = event.iter().any(|s| valuation.holds(s, k));
            let any_false = event.iter().any(|s| !valuation.holds(s, k));
            if !(any_true && any_false) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
