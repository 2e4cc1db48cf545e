use super::Formula;
use crate::error::{Error, Result};
use crate::space::EventSet;
use crate::structure::TypeStructure;

/// Extension of `formula`: the set of worlds where it holds.
pub fn evaluate(model: &TypeStructure, formula: &Formula) -> Result<EventSet> {
    let n = model.num_worlds();
    Ok(match formula {
        Formula::Top => EventSet::full(n),
        Formula::Prop(p) => {
            let val = model.valuation().ok_or(Error::NoValuation)?;
            let k = val.prop_index(p).ok_or_else(|| Error::UnknownProposition(p.clone()))?;
            EventSet::from_indices(n, (0..n).filter(|&w| val.holds(model.nature_of(w), k)))
        }
        Formula::Not(inner) => evaluate(model, inner)?.complement(),
        Formula::And(parts) => {
            let mut acc = EventSet::full(n);
            for part in parts {
                acc = acc.intersection(&evaluate(model, part)?);
            }
            acc
        }
        Formula::Believes { player, event, threshold, body } => {
            let j = model.player_index(player)?;
            let b = model.event_index(event)?;
            if !threshold.is_probability() {
                return Err(Error::ThresholdOutOfRange(threshold.to_string()));
            }
            let inner = evaluate(model, body)?;
            model.p_belief(j, b, threshold, &inner)?
        }
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Valid,
    /// Holds somewhere but not everywhere; `witness` is the first world
    /// (in enumeration order) where it holds.
    Satisfiable { witness: usize, key: String },
    Unsatisfiable,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Valid => "valid",
            Verdict::Satisfiable { .. } => "satisfiable",
            Verdict::Unsatisfiable => "unsatisfiable",
        }
    }
}

pub fn check(model: &TypeStructure, formula: &Formula) -> Result<Verdict> {
    let ext = evaluate(model, formula)?;
    Ok(if ext.is_full() {
        Verdict::Valid
    } else if let Some(w) = ext.iter().next() {
        Verdict::Satisfiable { witness: w, key: model.world().domain().key(w).to_string() }
    } else {
        Verdict::Unsatisfiable
    })
}
