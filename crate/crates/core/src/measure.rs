//! Exact probability measures and conditional probability systems.

use std::fmt;
use std::sync::Arc;

use indexmap::IndexMap;

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::space::{ConditionalDomain, Domain, EventSet};

/// Dense exact measure over a finite domain.
///
/// Values built with [`Measure::new`] are probability measures. Values from
/// [`Measure::from_raw`] may be unnormalized or carry negative masses; such
/// input is reported by [`validate_cps`] rather than rejected up front.
#[derive(Clone, PartialEq, Eq)]
pub struct Measure {
    domain: Arc<Domain>,
    mass: Vec<Rational>,
}

impl Measure {
    pub fn new(domain: Arc<Domain>, mass: Vec<Rational>) -> Result<Self> {
        let m = Self::from_raw(domain, mass)?;
        if let Some((i, x)) = m.mass.iter().enumerate().find(|(_, x)| x.is_negative()) {
            return Err(Error::NegativeMass { state: m.domain.key(i).to_string(), mass: x.to_string() });
        }
        let total = m.total();
        if !total.is_one() {
            return Err(Error::NotNormalized(total.to_string()));
        }
        Ok(m)
    }

    pub fn from_raw(domain: Arc<Domain>, mass: Vec<Rational>) -> Result<Self> {
        if mass.len() != domain.size() {
            return Err(Error::Malformed(format!(
                "measure has {} masses for a domain of {} states",
                mass.len(),
                domain.size()
            )));
        }
        Ok(Measure { domain, mass })
    }

    /// Build from state keys; omitted states get zero mass.
    pub fn from_keys<'a>(
        domain: Arc<Domain>,
        entries: impl IntoIterator<Item = (&'a str, Rational)>,
    ) -> Result<Self> {
        let mut mass = vec![Rational::zero(); domain.size()];
        for (key, m) in entries {
            let i = domain.find(key).ok_or_else(|| Error::UnknownState(key.to_string()))?;
            mass[i] += m;
        }
        Ok(Measure { domain, mass })
    }

    pub fn uniform(domain: Arc<Domain>) -> Self {
        let n = domain.size() as i64;
        let each = Rational::new(1, n).expect("domain is nonempty");
        Measure { mass: vec![each; domain.size()], domain }
    }

    pub fn dirac_at(domain: Arc<Domain>, index: usize) -> Self {
        let mut mass = vec![Rational::zero(); domain.size()];
        mass[index] = Rational::one();
        Measure { domain, mass }
    }

    pub fn domain(&self) -> &Arc<Domain> {
        &self.domain
    }

    pub fn mass(&self, index: usize) -> &Rational {
        &self.mass[index]
    }

    pub fn masses(&self) -> &[Rational] {
        &self.mass
    }

    pub fn prob(&self, event: &EventSet) -> Rational {
        event.iter().map(|i| &self.mass[i]).sum()
    }

    pub fn total(&self) -> Rational {
        self.mass.iter().sum()
    }

    pub fn is_probability(&self) -> bool {
        self.mass.iter().all(|x| !x.is_negative()) && self.total().is_one()
    }

    /// Indices with nonzero mass.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.mass.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, _)| i)
    }

    /// Image under projection onto the listed components, in that order.
    pub fn project(&self, keep: &[usize]) -> Result<Measure> {
        let target = Arc::new(self.domain.project(keep)?);
        let map: Vec<usize> = (0..self.domain.size())
            .map(|i| {
                let coords: Vec<usize> = keep.iter().map(|&c| self.domain.coord(i, c)).collect();
                target.index(&coords)
            })
            .collect();
        Ok(self.push(&target, &map))
    }

    fn push(&self, target: &Arc<Domain>, map: &[usize]) -> Measure {
        let mut mass = vec![Rational::zero(); target.size()];
        for (i, m) in self.mass.iter().enumerate() {
            if !m.is_zero() {
                mass[map[i]] += m;
            }
        }
        Measure { domain: target.clone(), mass }
    }

    /// Sparse `key -> mass` view with zero masses omitted, in domain order.
    pub fn to_keyed(&self) -> IndexMap<String, Rational> {
        self.support().map(|i| (self.domain.key(i).to_string(), self.mass[i].clone())).collect()
    }
}

impl fmt::Debug for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.support().map(|i| (self.domain.key(i), &self.mass[i]))).finish()
    }
}

/// Dirac measure at the state with the given key.
pub fn dirac(domain: &Arc<Domain>, state: &str) -> Result<Measure> {
    let i = domain.find(state).ok_or_else(|| Error::UnknownState(state.to_string()))?;
    Ok(Measure::dirac_at(domain.clone(), i))
}

/// Marginal of a product measure on one component.
pub fn marginal(measure: &Measure, component: usize) -> Result<Measure> {
    if measure.domain.arity() < 2 {
        return Err(Error::NotAProductDomain);
    }
    if component >= measure.domain.arity() {
        return Err(Error::BadComponent(component));
    }
    measure.project(&[component])
}

/// Image measure `f̂(μ)(E) = μ(f⁻¹(E))`, with `f` given as the image index
/// of every source state.
pub fn pushforward(f: &[usize], mu: &Measure, target: &Arc<Domain>) -> Result<Measure> {
    check_total(f, mu.domain.size(), target.size())?;
    Ok(mu.push(target, f))
}

fn check_total(f: &[usize], source: usize, target: usize) -> Result<()> {
    if f.len() != source {
        return Err(Error::PartialMap(format!("{} images for {} states", f.len(), source)));
    }
    if let Some((i, &y)) = f.iter().enumerate().find(|(_, &y)| y >= target) {
        return Err(Error::PartialMap(format!("state {i} maps to {y}, outside {target} targets")));
    }
    Ok(())
}

/// A family of measures indexed by the conditioning events of a domain.
///
/// Construction only checks shape; the CPS axioms are checked by
/// [`validate_cps`].
#[derive(Clone, PartialEq, Eq)]
pub struct Cps {
    cdom: Arc<ConditionalDomain>,
    per_event: Vec<Measure>,
}

impl Cps {
    pub fn new(cdom: Arc<ConditionalDomain>, per_event: Vec<Measure>) -> Result<Self> {
        if per_event.len() != cdom.num_events() {
            return Err(Error::Malformed(format!(
                "{} measures for {} conditioning events",
                per_event.len(),
                cdom.num_events()
            )));
        }
        if per_event.iter().any(|m| **m.domain() != **cdom.domain()) {
            return Err(Error::DomainMismatch);
        }
        Ok(Cps { cdom, per_event })
    }

    /// Build from an event-name keyed map; keys must be exactly the
    /// conditioning names.
    pub fn from_named(cdom: Arc<ConditionalDomain>, mut named: IndexMap<String, Measure>) -> Result<Self> {
        let mut per_event = Vec::with_capacity(cdom.num_events());
        for name in cdom.events().keys() {
            per_event.push(named.shift_remove(name).ok_or_else(|| Error::MissingEvent(name.clone()))?);
        }
        if let Some(extra) = named.keys().next() {
            return Err(Error::ExtraEvent(extra.clone()));
        }
        Self::new(cdom, per_event)
    }

    /// The same measure under every conditioning event. Only a CPS when
    /// the measure gives every event probability one.
    pub fn constant(cdom: Arc<ConditionalDomain>, mu: Measure) -> Result<Self> {
        let per_event = vec![mu; cdom.num_events()];
        Self::new(cdom, per_event)
    }

    pub fn conditional_domain(&self) -> &Arc<ConditionalDomain> {
        &self.cdom
    }

    pub fn domain(&self) -> &Arc<Domain> {
        self.cdom.domain()
    }

    pub fn measures(&self) -> &[Measure] {
        &self.per_event
    }

    pub fn measure(&self, event: usize) -> &Measure {
        &self.per_event[event]
    }

    pub fn measure_named(&self, name: &str) -> Option<&Measure> {
        self.cdom.events().get_index_of(name).map(|i| &self.per_event[i])
    }

    /// Conditional probability `μ(A|B)` for the event at index `b`.
    pub fn prob(&self, a: &EventSet, b: usize) -> Rational {
        self.per_event[b].prob(a)
    }
}

impl fmt::Debug for Cps {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map()
            .entries(self.per_event.iter().enumerate().map(|(i, m)| (self.cdom.event_name(i), m)))
            .finish()
    }
}

/// One failed axiom instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CpsViolation {
    /// `μ(·|B)` has a negative mass.
    NegativeMass { event: String, state: String, mass: Rational },
    /// `μ(·|B)` does not sum to one.
    NotNormalized { event: String, total: Rational },
    /// `μ(B|B) ≠ 1`.
    NotConcentrated { event: String, mass: Rational },
    /// `μ({a}|B) μ(B|C) ≠ μ({a}|C)` for nested `B ⊆ C`.
    ChainRule { state: String, inner: String, outer: String, product: Rational, direct: Rational },
}

impl fmt::Display for CpsViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CpsViolation::NegativeMass { event, state, mass } => {
                write!(f, "A2: mass {mass} at {state} under {event} is negative")
            }
            CpsViolation::NotNormalized { event, total } => {
                write!(f, "A2: masses under {event} sum to {total}")
            }
            CpsViolation::NotConcentrated { event, mass } => {
                write!(f, "A1: mu({event}|{event}) = {mass}")
            }
            CpsViolation::ChainRule { state, inner, outer, product, direct } => write!(
                f,
                "A3: mu({{{state}}}|{inner}) * mu({inner}|{outer}) = {product} but mu({{{state}}}|{outer}) = {direct}"
            ),
        }
    }
}

impl CpsViolation {
    pub fn axiom(&self) -> &'static str {
        match self {
            CpsViolation::NegativeMass { .. } | CpsViolation::NotNormalized { .. } => "A2",
            CpsViolation::NotConcentrated { .. } => "A1",
            CpsViolation::ChainRule { .. } => "A3",
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CpsReport {
    pub violations: Vec<CpsViolation>,
}

impl CpsReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Check the three CPS axioms exactly.
///
/// The chain rule is checked on singletons `{a}` with `a ∈ B`, for every
/// ordered pair of conditioning events with `B ⊆ C` (including `B = C`);
/// finite additivity extends it to every `A ⊆ B`.
pub fn validate_cps(cps: &Cps) -> CpsReport {
    let cdom = &cps.cdom;
    let domain = cdom.domain();
    let mut violations = Vec::new();

    for (b, mu) in cps.per_event.iter().enumerate() {
        let name = cdom.event_name(b);
        for (i, x) in mu.mass.iter().enumerate() {
            if x.is_negative() {
                violations.push(CpsViolation::NegativeMass {
                    event: name.to_string(),
                    state: domain.key(i).to_string(),
                    mass: x.clone(),
                });
            }
        }
        let total = mu.total();
        if !total.is_one() {
            violations.push(CpsViolation::NotNormalized { event: name.to_string(), total });
        }
        let on_b = mu.prob(cdom.event(b));
        if !on_b.is_one() {
            violations.push(CpsViolation::NotConcentrated { event: name.to_string(), mass: on_b });
        }
    }

    for b in 0..cdom.num_events() {
        let inner = cdom.event(b);
        for c in 0..cdom.num_events() {
            let outer = cdom.event(c);
            if !inner.is_subset(outer) {
                continue;
            }
            let b_given_c = cps.per_event[c].prob(inner);
            for a in inner.iter() {
                let product = &cps.per_event[b].mass[a] * &b_given_c;
                let direct = &cps.per_event[c].mass[a];
                if &product != direct {
                    violations.push(CpsViolation::ChainRule {
                        state: domain.key(a).to_string(),
                        inner: cdom.event_name(b).to_string(),
                        outer: cdom.event_name(c).to_string(),
                        product,
                        direct: direct.clone(),
                    });
                }
            }
        }
    }
    CpsReport { violations }
}

/// Image of a CPS under a map between products that share their nature
/// coordinate and conditioning family.
pub fn pushforward_cps(f: &[usize], cps: &Cps, target: &Arc<ConditionalDomain>) -> Result<Cps> {
    let source = cps.conditional_domain();
    let (sd, td) = (source.domain(), target.domain());
    check_total(f, sd.size(), td.size())?;

    if sd.components()[0].labels != td.components()[0].labels {
        return Err(Error::ConditioningMismatch("nature coordinates differ".into()));
    }
    let s_names: Vec<&String> = source.events().keys().collect();
    let t_names: Vec<&String> = target.events().keys().collect();
    if s_names != t_names {
        return Err(Error::ConditioningMismatch("event names differ".into()));
    }
    for (name, s_ev) in source.events() {
        let t_ev = &target.events()[name];
        let proj = source.nature_projection(s_ev);
        if proj != target.nature_projection(t_ev)
            || !is_cylinder(sd, s_ev, &proj)
            || !is_cylinder(td, t_ev, &proj)
        {
            return Err(Error::ConditioningMismatch(format!("event `{name}` is not a shared cylinder")));
        }
    }
    for (z, &img) in f.iter().enumerate() {
        if sd.coord(z, 0) != td.coord(img, 0) {
            return Err(Error::NatureCoordinateMoved {
                from: sd.key(z).to_string(),
                to: td.key(img).to_string(),
            });
        }
    }

    let per_event = cps.per_event.iter().map(|mu| mu.push(td, f)).collect();
    Cps::new(target.clone(), per_event)
}

fn is_cylinder(domain: &Domain, event: &EventSet, nature: &[usize]) -> bool {
    (0..domain.size()).all(|i| event.contains(i) == nature.binary_search(&domain.coord(i, 0)).is_ok())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;
    use crate::space::{Component, FiniteConditionalSpace};

    fn strings(xs: &[&str]) -> Vec<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    fn plain(labels: &[&str]) -> Arc<Domain> {
        Arc::new(Domain::single("x", strings(labels)).unwrap())
    }

    fn product(a: &[&str], b: &[&str]) -> Arc<Domain> {
        Arc::new(
            Domain::new(vec![
                Component { name: "a".into(), labels: strings(a) },
                Component { name: "b".into(), labels: strings(b) },
            ])
            .unwrap(),
        )
    }

    #[test]
    fn dirac_examples() {
        let d = plain(&["s1", "s2"]);
        let m = dirac(&d, "s1").unwrap();
        assert_eq!(m.masses(), &[q(1, 1), q(0, 1)]);
        let single = dirac(&plain(&["a"]), "a").unwrap();
        assert_eq!(single.masses(), &[q(1, 1)]);
        assert!(matches!(dirac(&d, "s3"), Err(Error::UnknownState(_))));
    }

    #[test]
    fn marginal_examples() {
        let d = product(&["s1", "s2"], &["t1"]);
        let u = Measure::uniform(d.clone());
        assert_eq!(marginal(&u, 1).unwrap().masses(), &[q(1, 1)]);

        let d = product(&["s1", "s2"], &["t1", "t2"]);
        let m = Measure::from_keys(
            d.clone(),
            [("(s1,t1)", q(1, 3)), ("(s2,t1)", q(1, 6)), ("(s1,t2)", q(1, 2))],
        )
        .unwrap();
        assert_eq!(marginal(&m, 0).unwrap().masses(), &[q(5, 6), q(1, 6)]);

        let dm = dirac(&d, "(s1,t2)").unwrap();
        assert_eq!(marginal(&dm, 1).unwrap(), Measure::dirac_at(Arc::new(d.project(&[1]).unwrap()), 1));

        assert!(matches!(marginal(&Measure::uniform(plain(&["a"])), 0), Err(Error::NotAProductDomain)));
        assert!(matches!(marginal(&m, 2), Err(Error::BadComponent(2))));
    }

    #[test]
    fn pushforward_examples() {
        let src = plain(&["a", "b", "c"]);
        let mu = Measure::new(src.clone(), vec![q(1, 2), q(1, 4), q(1, 4)]).unwrap();
        assert_eq!(pushforward(&[0, 1, 2], &mu, &src).unwrap(), mu);

        let dst = plain(&["x", "y"]);
        assert_eq!(pushforward(&[0, 0, 0], &mu, &dst).unwrap(), Measure::dirac_at(dst.clone(), 0));
        assert_eq!(pushforward(&[0, 0, 1], &mu, &dst).unwrap().masses(), &[q(3, 4), q(1, 4)]);
        assert!(matches!(pushforward(&[0, 0], &mu, &dst), Err(Error::PartialMap(_))));
        assert!(matches!(pushforward(&[0, 0, 5], &mu, &dst), Err(Error::PartialMap(_))));
    }

    fn two_event_space() -> FiniteConditionalSpace {
        FiniteConditionalSpace::new(vec!["s1", "s2"], vec![("All", vec!["s1", "s2"]), ("B1", vec!["s1"])]).unwrap()
    }

    #[test]
    fn valid_cps_accepted() {
        let cdom = Arc::new(two_event_space().conditional_domain());
        let d = cdom.domain().clone();
        let cps = Cps::new(
            cdom,
            vec![
                Measure::new(d.clone(), vec![q(1, 3), q(2, 3)]).unwrap(),
                Measure::new(d, vec![q(1, 1), q(0, 1)]).unwrap(),
            ],
        )
        .unwrap();
        assert!(validate_cps(&cps).is_ok());
    }

    #[test]
    fn chain_rule_violation_reported() {
        let sp = FiniteConditionalSpace::new(
            vec!["s1", "s2", "s3"],
            vec![("All", vec!["s1", "s2", "s3"]), ("B1", vec!["s1", "s2"])],
        )
        .unwrap();
        let cdom = Arc::new(sp.conditional_domain());
        let d = cdom.domain().clone();
        let cps = Cps::new(
            cdom,
            vec![Measure::uniform(d.clone()), Measure::new(d, vec![q(1, 4), q(3, 4), q(0, 1)]).unwrap()],
        )
        .unwrap();
        let report = validate_cps(&cps);
        assert!(report.violations.contains(&CpsViolation::ChainRule {
            state: "s1".into(),
            inner: "B1".into(),
            outer: "All".into(),
            product: q(1, 6),
            direct: q(1, 3),
        }));
        assert!(report.violations.iter().all(|v| v.axiom() == "A3"));
    }

    #[test]
    fn concentration_violation_reported() {
        let cdom = Arc::new(two_event_space().conditional_domain());
        let d = cdom.domain().clone();
        let cps = Cps::new(
            cdom,
            vec![Measure::uniform(d.clone()), Measure::new(d, vec![q(0, 1), q(1, 1)]).unwrap()],
        )
        .unwrap();
        let report = validate_cps(&cps);
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, CpsViolation::NotConcentrated { event, .. } if event == "B1")));
    }

    #[test]
    fn unnormalized_reported() {
        let cdom = Arc::new(two_event_space().conditional_domain());
        let d = cdom.domain().clone();
        let cps = Cps::new(
            cdom,
            vec![
                Measure::from_raw(d.clone(), vec![q(1, 2), q(1, 3)]).unwrap(),
                Measure::dirac_at(d, 0),
            ],
        )
        .unwrap();
        let report = validate_cps(&cps);
        assert!(report.violations.iter().any(|v| v.axiom() == "A2"));
    }

    #[test]
    fn from_named_structural_errors() {
        let cdom = Arc::new(two_event_space().conditional_domain());
        let d = cdom.domain().clone();
        let mut named = IndexMap::new();
        named.insert("All".to_string(), Measure::uniform(d.clone()));
        assert!(matches!(Cps::from_named(cdom.clone(), named.clone()), Err(Error::MissingEvent(e)) if e == "B1"));
        named.insert("B1".to_string(), Measure::dirac_at(d.clone(), 0));
        named.insert("B9".to_string(), Measure::dirac_at(d, 0));
        assert!(matches!(Cps::from_named(cdom, named), Err(Error::ExtraEvent(e)) if e == "B9"));
    }

    fn lifted(sp: &FiniteConditionalSpace, labels: &[&str]) -> Arc<ConditionalDomain> {
        Arc::new(
            ConditionalDomain::lifted(sp, vec![Component { name: "y".into(), labels: strings(labels) }]).unwrap(),
        )
    }

    #[test]
    fn pushforward_cps_collapse() {
        let sp = two_event_space();
        let src = lifted(&sp, &["t1", "t2"]);
        let dst = lifted(&sp, &["u"]);
        let d = src.domain().clone();
        let all = Measure::from_keys(
            d.clone(),
            [("(s1,t1)", q(1, 6)), ("(s1,t2)", q(1, 6)), ("(s2,t2)", q(2, 3))],
        )
        .unwrap();
        let b1 = Measure::from_keys(d.clone(), [("(s1,t1)", q(1, 2)), ("(s1,t2)", q(1, 2))]).unwrap();
        let cps = Cps::new(src.clone(), vec![all, b1]).unwrap();
        assert!(validate_cps(&cps).is_ok());

        let f: Vec<usize> = (0..d.size()).map(|z| d.coord(z, 0)).collect();
        let out = pushforward_cps(&f, &cps, &dst).unwrap();
        assert!(validate_cps(&out).is_ok());
        assert_eq!(out.measure(0).masses(), &[q(1, 3), q(2, 3)]);
        assert_eq!(out.measure(1).masses(), &[q(1, 1), q(0, 1)]);

        let id: Vec<usize> = (0..d.size()).collect();
        assert_eq!(pushforward_cps(&id, &cps, &src).unwrap(), cps);

        // (s1,t1) -> (s2,u)
        let mut moved = f.clone();
        moved[0] = 1;
        assert!(matches!(pushforward_cps(&moved, &cps, &dst), Err(Error::NatureCoordinateMoved { .. })));
    }

    #[test]
    fn pushforward_cps_conditioning_mismatch() {
        let sp = two_event_space();
        let other = FiniteConditionalSpace::new(vec!["s1", "s2"], vec![("All", vec!["s1", "s2"]), ("B1", vec!["s2"])])
            .unwrap();
        let src = lifted(&sp, &["t1"]);
        let dst = lifted(&other, &["t1"]);
        let cps = Cps::new(src.clone(), vec![Measure::dirac_at(src.domain().clone(), 0); 2]).unwrap();
        assert!(matches!(pushforward_cps(&[0, 1], &cps, &dst), Err(Error::ConditioningMismatch(_))));
    }
}
