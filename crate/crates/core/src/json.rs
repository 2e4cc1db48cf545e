//! On-disk JSON schema.
//!
//! Spaces: `{"states": [..], "conditioning": {"All": [..], ..}}`, optionally
//! with `"propositions"` and `"valuation": {"<state>": ["p", ..]}`.
//!
//! Structures: `{"space": .., "players": [..], "types": {"1": [..]},
//! "beliefs": {"1": {"t1": {"All": {"(s1,t1,u1)": "1/2", ..}}}},
//! "valuation": {..}}`. Masses are `"p/q"` strings (plain integers are also
//! accepted); omitted states carry zero mass.
//!
//! Output always follows input order for states, events, players and types,
//! and lists masses in domain order with zeros omitted.

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::hierarchy::PartitionFamily;
use crate::measure::{Cps, Measure};
use crate::rational::Rational;
use crate::space::{FiniteConditionalSpace, InducedSpace, LiteralSet, Valuation};
use crate::structure::{MorphismSpec, TypeStructure};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpaceDoc {
    states: Vec<String>,
    conditioning: IndexMap<String, Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    propositions: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    valuation: Option<IndexMap<String, Vec<String>>>,
}

/// player -> type -> event -> state key -> mass
type BeliefTable = IndexMap<String, IndexMap<String, IndexMap<String, IndexMap<String, Value>>>>;

/// Propositions and named literal sets.
pub type PropositionList = (Vec<String>, Vec<(String, LiteralSet)>);

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct StructureDoc {
    space: SpaceDoc,
    players: Vec<String>,
    types: IndexMap<String, Vec<String>>,
    beliefs: BeliefTable,
    #[serde(default)]
    propositions: Option<Vec<String>>,
    #[serde(default)]
    valuation: Option<IndexMap<String, Vec<String>>>,
    /// Present in quotient output; ignored on input.
    #[serde(default)]
    #[allow(dead_code)]
    map: Option<Value>,
}

fn parse_mass(v: &Value) -> Result<Rational> {
    match v {
        Value::String(s) => s.parse(),
        Value::Number(n) if n.is_i64() => Ok(Rational::from_integer(n.as_i64().unwrap())),
        other => Err(Error::BadRational(other.to_string())),
    }
}

fn build_space(doc: &SpaceDoc) -> Result<FiniteConditionalSpace> {
    let cond: Vec<(String, Vec<String>)> = doc.conditioning.iter().map(|(k, v)| (k.clone(), v.clone())).collect();
    FiniteConditionalSpace::new(doc.states.clone(), cond)
}

fn build_valuation(
    space: &FiniteConditionalSpace,
    props: Option<&Vec<String>>,
    table: &IndexMap<String, Vec<String>>,
) -> Result<Valuation> {
    let props: Vec<String> = match props {
        Some(p) => p.clone(),
        None => {
            let mut seen: Vec<String> = Vec::new();
            for p in table.values().flatten() {
                if !seen.contains(p) {
                    seen.push(p.clone());
                }
            }
            seen
        }
    };
    for state in table.keys() {
        if space.state_index(state).is_none() {
            return Err(Error::UnknownState(state.clone()));
        }
    }
    let rows: Vec<Vec<String>> =
        space.states().iter().map(|s| table.get(s).cloned().unwrap_or_default()).collect();
    Valuation::new(props, &rows)
}

fn valuation_json(space: &FiniteConditionalSpace, v: &Valuation) -> Value {
    let table: Map<String, Value> = (0..space.len())
        .map(|s| (space.states()[s].clone(), json!(v.true_props(s))))
        .collect();
    Value::Object(table)
}

/// A space, with its valuation when one is given.
pub fn space_from_str(text: &str) -> Result<(FiniteConditionalSpace, Option<Valuation>)> {
    let doc: SpaceDoc = serde_json::from_str(text)?;
    let space = build_space(&doc)?;
    let val = match &doc.valuation {
        Some(t) => Some(build_valuation(&space, doc.propositions.as_ref(), t)?),
        None => None,
    };
    Ok((space, val))
}

pub fn space_to_json(space: &FiniteConditionalSpace, valuation: Option<&Valuation>) -> Value {
    let mut obj = Map::new();
    if let Some(v) = valuation {
        obj.insert("propositions".into(), json!(v.props()));
    }
    obj.insert("states".into(), json!(space.states()));
    let cond: Map<String, Value> = space
        .conditioning()
        .iter()
        .map(|(name, ev)| {
            let labels: Vec<&str> = ev.iter().map(|i| space.states()[i].as_str()).collect();
            (name.clone(), json!(labels))
        })
        .collect();
    obj.insert("conditioning".into(), Value::Object(cond));
    if let Some(v) = valuation {
        obj.insert("valuation".into(), valuation_json(space, v));
    }
    Value::Object(obj)
}

pub fn structure_from_str(text: &str) -> Result<TypeStructure> {
    let doc: StructureDoc = serde_json::from_str(text)?;
    structure_from_doc(doc)
}

pub fn structure_from_value(value: Value) -> Result<TypeStructure> {
    structure_from_doc(serde_json::from_value(value)?)
}

fn structure_from_doc(doc: StructureDoc) -> Result<TypeStructure> {
    let space = build_space(&doc.space)?;
    for p in doc.types.keys() {
        if !doc.players.contains(p) {
            return Err(Error::UnknownPlayer(p.clone()));
        }
    }
    let types: Vec<Vec<String>> = doc
        .players
        .iter()
        .map(|p| doc.types.get(p).cloned().ok_or_else(|| Error::Malformed(format!("no types for player `{p}`"))))
        .collect::<Result<_>>()?;
    let world = TypeStructure::world_space(&space, &doc.players, &types)?;
    for p in doc.beliefs.keys() {
        if !doc.players.contains(p) {
            return Err(Error::UnknownPlayer(p.clone()));
        }
    }
    let mut beliefs = Vec::with_capacity(doc.players.len());
    for (j, player) in doc.players.iter().enumerate() {
        let empty = IndexMap::new();
        let row = doc.beliefs.get(player).unwrap_or(&empty);
        for t in row.keys() {
            if !types[j].contains(t) {
                return Err(Error::UnknownType { player: player.clone(), ty: t.clone() });
            }
        }
        let mut cps_row = Vec::with_capacity(types[j].len());
        for t in &types[j] {
            let per_event = row
                .get(t)
                .ok_or_else(|| Error::Malformed(format!("no belief for type `{t}` of player `{player}`")))?;
            let mut named = IndexMap::new();
            for (event, masses) in per_event {
                let entries = masses
                    .iter()
                    .map(|(k, v)| Ok((k.as_str(), parse_mass(v)?)))
                    .collect::<Result<Vec<_>>>()?;
                named.insert(event.clone(), Measure::from_keys(world.domain().clone(), entries)?);
            }
            cps_row.push(Cps::from_named(world.clone(), named)?);
        }
        beliefs.push(cps_row);
    }
    let mut ts = TypeStructure::new(space, doc.players, types, beliefs)?;
    let props = doc.propositions.as_ref().or(doc.space.propositions.as_ref());
    let table = doc.valuation.as_ref().or(doc.space.valuation.as_ref());
    if let Some(table) = table {
        let v = build_valuation(ts.space(), props, table)?;
        ts = ts.with_valuation(v)?;
    }
    Ok(ts)
}

/// Masses in domain order, zeros omitted.
pub fn measure_to_json(m: &Measure) -> Value {
    let obj: Map<String, Value> = m
        .masses()
        .iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, x)| (m.domain().key(i).to_string(), Value::String(x.to_string())))
        .collect();
    Value::Object(obj)
}

pub fn cps_to_json(cps: &Cps) -> Value {
    let cd = cps.conditional_domain();
    let obj: Map<String, Value> = (0..cd.num_events())
        .map(|b| (cd.event_name(b).to_string(), measure_to_json(cps.measure(b))))
        .collect();
    Value::Object(obj)
}

pub fn structure_to_json(ts: &TypeStructure) -> Value {
    let mut obj = Map::new();
    obj.insert("space".into(), space_to_json(ts.space(), None));
    obj.insert("players".into(), json!(ts.players()));
    let types: Map<String, Value> =
        (0..ts.num_players()).map(|j| (ts.players()[j].clone(), json!(ts.types(j)))).collect();
    obj.insert("types".into(), Value::Object(types));
    let beliefs: Map<String, Value> = (0..ts.num_players())
        .map(|j| {
            let row: Map<String, Value> =
                (0..ts.types(j).len()).map(|t| (ts.types(j)[t].clone(), cps_to_json(ts.belief(j, t)))).collect();
            (ts.players()[j].clone(), Value::Object(row))
        })
        .collect();
    obj.insert("beliefs".into(), Value::Object(beliefs));
    if let Some(v) = ts.valuation() {
        obj.insert("propositions".into(), json!(v.props()));
        obj.insert("valuation".into(), valuation_json(ts.space(), v));
    }
    Value::Object(obj)
}

/// `{"1": {"t1": "t1'"}, ..}` with an optional identity `"0"` nature map.
pub fn morphism_from_str(source: &TypeStructure, target: &TypeStructure, text: &str) -> Result<MorphismSpec> {
    let doc: IndexMap<String, IndexMap<String, String>> = serde_json::from_str(text)?;
    let mut nature = None;
    let mut players = Vec::new();
    for (k, m) in doc {
        let pairs: Vec<(String, String)> = m.into_iter().collect();
        if k == "0" && source.player_index("0").is_err() {
            nature = Some(pairs);
        } else {
            players.push((k, pairs));
        }
    }
    MorphismSpec::from_labels(source, target, &players, nature.as_deref())
}

pub fn morphism_to_json(f: &MorphismSpec, source: &TypeStructure, target: &TypeStructure) -> Value {
    let obj: Map<String, Value> = f
        .to_labels(source, target)
        .into_iter()
        .map(|(p, pairs)| {
            let m: Map<String, Value> = pairs.into_iter().map(|(a, b)| (a, Value::String(b))).collect();
            (p, Value::Object(m))
        })
        .collect();
    Value::Object(obj)
}

pub fn partition_to_json(p: &PartitionFamily, ts: &TypeStructure) -> Value {
    p.to_json(ts)
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum CondEntry {
    Bare(Vec<String>),
    Named { name: String, literals: Vec<String> },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct PropsDoc {
    propositions: Vec<String>,
    #[serde(default)]
    conditioning: Vec<CondEntry>,
}

/// `{"propositions": ["p","q"], "conditioning": [["p","!q"], {"name": "N", "literals": ["q"]}]}`
pub fn props_from_str(text: &str) -> Result<PropositionList> {
    let doc: PropsDoc = serde_json::from_str(text)?;
    let cond = doc
        .conditioning
        .into_iter()
        .map(|e| match e {
            CondEntry::Bare(lits) => {
                let phi = LiteralSet::parse(&lits)?;
                Ok((phi.default_name(), phi))
            }
            CondEntry::Named { name, literals } => Ok((name, LiteralSet::parse(&literals)?)),
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((doc.propositions, cond))
}

pub fn induced_to_json(ind: &InducedSpace) -> Value {
    space_to_json(&ind.space, Some(&ind.valuation))
}

/// Pretty JSON with a trailing newline.
pub fn to_pretty(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("JSON values always serialize");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;
    use crate::structure::validate_structure;

    const TWO_PLAYERS: &str = r#"{
      "space": {"states": ["s1","s2"], "conditioning": {"All": ["s1","s2"], "B1": ["s1"]}},
      "players": ["1","2"],
      "types": {"1": ["t1"], "2": ["u1"]},
      "beliefs": {
        "1": {"t1": {"All": {"(s1,t1,u1)": "1/2", "(s2,t1,u1)": "1/2"}, "B1": {"(s1,t1,u1)": 1}}},
        "2": {"u1": {"All": {"(s1,t1,u1)": "1/3", "(s2,t1,u1)": "2/3"}, "B1": {"(s1,t1,u1)": "1"}}}
      },
      "valuation": {"s1": ["p"]}
    }"#;

    #[test]
    fn structure_round_trip() {
        let ts = structure_from_str(TWO_PLAYERS).unwrap();
        assert!(validate_structure(&ts, true).is_ok());
        assert_eq!(ts.belief(1, 0).measure(0).mass(ts.world().domain().find("(s2,t1,u1)").unwrap()), &q(2, 3));
        let out = structure_to_json(&ts);
        let again = structure_from_value(out.clone()).unwrap();
        assert_eq!(again, ts);
        assert_eq!(to_pretty(&structure_to_json(&again)), to_pretty(&out));
        assert_eq!(ts.valuation().unwrap().value(0, "p"), Some(true));
        assert_eq!(ts.valuation().unwrap().value(1, "p"), Some(false));
    }

    #[test]
    fn malformed_input_reports_location() {
        let err = structure_from_str(&TWO_PLAYERS[..40]).unwrap_err();
        match err {
            Error::Json(e) => assert!(e.line() >= 1 && e.column() > 0),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unknown_state_key() {
        let bad = TWO_PLAYERS.replace("(s2,t1,u1)\": \"1/2\"", "(s3,t1,u1)\": \"1/2\"");
        assert!(matches!(structure_from_str(&bad), Err(Error::UnknownState(_))));
    }

    #[test]
    fn missing_event_is_reported() {
        let bad = TWO_PLAYERS.replace(", \"B1\": {\"(s1,t1,u1)\": 1}", "");
        assert!(matches!(structure_from_str(&bad), Err(Error::MissingEvent(_))));
    }

    #[test]
    fn morphism_labels() {
        let ts = structure_from_str(TWO_PLAYERS).unwrap();
        let f = morphism_from_str(&ts, &ts, r#"{"0": {"s1": "s1"}, "1": {"t1": "t1"}, "2": {"u1": "u1"}}"#).unwrap();
        assert_eq!(f, MorphismSpec::identity(&ts));
        assert!(matches!(
            morphism_from_str(&ts, &ts, r#"{"0": {"s1": "s2"}, "1": {"t1": "t1"}, "2": {"u1": "u1"}}"#),
            Err(Error::NatureNotIdentity)
        ));
        assert!(matches!(morphism_from_str(&ts, &ts, r#"{"1": {"t1": "t1"}}"#), Err(Error::PartialMap(_))));
        let back = morphism_to_json(&f, &ts, &ts);
        assert_eq!(back, json!({"1": {"t1": "t1"}, "2": {"u1": "u1"}}));
    }

    #[test]
    fn props_document() {
        let (props, cond) =
            props_from_str(r#"{"propositions": ["p","q"], "conditioning": [["p","!q"], {"name": "Q", "literals": ["q"]}]}"#)
                .unwrap();
        assert_eq!(props, vec!["p", "q"]);
        assert_eq!(cond[0].0, "p_and_not_q");
        assert_eq!(cond[1].0, "Q");
        let ind = crate::space::induce_named(&props, &cond).unwrap();
        let v = induced_to_json(&ind);
        assert_eq!(v["states"], json!(["{p,q}", "{p}", "{q}", "{}"]));
        assert_eq!(v["conditioning"]["p_and_not_q"], json!(["{p}"]));
        assert_eq!(v["valuation"]["{q}"], json!(["q"]));
        let (sp, val) = space_from_str(&v.to_string()).unwrap();
        assert_eq!(sp, ind.space);
        assert_eq!(val.unwrap(), ind.valuation);
    }
}
