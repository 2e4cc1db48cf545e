//! Library checks against brute-force oracles on random inputs.

use std::sync::Arc;

use cpskit::hierarchy::{hierarchy_partition, Depth, HierarchySpace};
use cpskit::random::{self, Params};
use cpskit::structure::validate_structure;
use cpskit::{check_morphism, validate_cps, Cps, EventSet, MorphismSpec, Rational, TypeStructure};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A1–A3 with the chain rule quantified over every subset `A ⊆ B`.
fn cps_oracle(cps: &Cps) -> bool {
    let cd = cps.conditional_domain();
    let n = cd.domain().size();
    for b in 0..cd.num_events() {
        let mu = cps.measure(b);
        if mu.masses().iter().any(Rational::is_negative) || !mu.total().is_one() {
            return false;
        }
        if !mu.prob(cd.event(b)).is_one() {
            return false;
        }
    }
    for b in 0..cd.num_events() {
        for c in 0..cd.num_events() {
            let (inner, outer) = (cd.event(b), cd.event(c));
            if !inner.is_subset(outer) {
                continue;
            }
            let members: Vec<usize> = inner.iter().collect();
            for bits in 0u32..(1 << members.len()) {
                let a = EventSet::from_indices(n, (0..members.len()).filter(|k| bits >> k & 1 == 1).map(|k| members[k]));
                if cps.prob(&a, b) * cps.prob(inner, c) != cps.prob(&a, c) {
                    return false;
                }
            }
        }
    }
    true
}

#[test]
fn validate_cps_matches_all_subsets_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut seen = [0usize; 2];
    for _ in 0..400 {
        let sp = random::space(&mut rng, 6, 4);
        let cd = Arc::new(sp.conditional_domain());
        let fam = random::measure_family(&mut rng, &cd).unwrap();
        let expected = cps_oracle(&fam);
        assert_eq!(validate_cps(&fam).is_ok(), expected, "{fam:?}");
        seen[expected as usize] += 1;
    }
    assert!(seen[0] > 0 && seen[1] > 0);
}

/// `m'(f(t))(E) = m(t)(f⁻¹(E))` for every event `E` of the target.
fn morphism_oracle(ts: &TypeStructure, ts2: &TypeStructure, f: &MorphismSpec) -> bool {
    let wmap = f.world_map(ts, ts2).unwrap();
    let m = ts2.num_worlds();
    for j in 0..ts.num_players() {
        for t in 0..ts.types(j).len() {
            let image = ts2.belief(j, f.maps[j][t]);
            for b in 0..ts.world().num_events() {
                for bits in 0u64..(1 << m) {
                    let e = EventSet::from_indices(m, (0..m).filter(|w| bits >> w & 1 == 1));
                    let pre = f.preimage(&wmap, &e);
                    if image.prob(&e, b) != ts.belief(j, t).prob(&pre, b) {
                        return false;
                    }
                }
            }
        }
    }
    true
}

fn small_target(rng: &mut ChaCha8Rng) -> TypeStructure {
    loop {
        let ts = random::structure(rng, &Params { max_states: 2, max_events: 2, max_players: 2, max_types: 2, duplicate_rate: 0.5 })
            .unwrap();
        if ts.num_worlds() <= 8 {
            return ts;
        }
    }
}

#[test]
fn check_morphism_matches_all_events_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut seen = [0usize; 2];
    for _ in 0..150 {
        let target = small_target(&mut rng);
        let (source, mut f) = random::split(&mut rng, &target, 2).unwrap();
        if rng.gen_bool(0.5) {
            let j = rng.gen_range(0..f.maps.len());
            let t = rng.gen_range(0..f.maps[j].len());
            f.maps[j][t] = rng.gen_range(0..target.types(j).len());
        }
        let expected = morphism_oracle(&source, &target, &f);
        assert_eq!(check_morphism(&source, &target, &f).unwrap().is_ok(), expected);
        seen[expected as usize] += 1;
    }
    assert!(seen[0] > 0 && seen[1] > 0);
}

#[test]
fn partitions_group_equal_descriptions() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..60 {
        let ts = random::structure(&mut rng, &Params::default()).unwrap();
        let bound = ts.total_types() + 1;
        let mut h = HierarchySpace::for_structure(&ts);
        let table = h.describe_all(&ts, bound).unwrap();
        for l in 0..=bound {
            let part = hierarchy_partition(&ts, Depth::Finite(l)).partition;
            for j in 0..ts.num_players() {
                for t in 0..ts.types(j).len() {
                    for u in 0..ts.types(j).len() {
                        let same_block = part.blocks[j][t] == part.blocks[j][u];
                        let same_desc = table.levels[l][j][t] == table.levels[l][j][u];
                        assert_eq!(same_block, same_desc, "depth {l} player {j} types {t},{u}");
                    }
                }
            }
        }
    }
}

#[test]
fn partitions_refine_with_depth_and_stabilize() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..60 {
        let ts = random::structure(&mut rng, &Params::default()).unwrap();
        let fix = hierarchy_partition(&ts, Depth::Fixpoint);
        let stable = fix.stable_depth.unwrap();
        assert!(stable <= ts.total_types());
        let mut prev = hierarchy_partition(&ts, Depth::Finite(0)).partition;
        for l in 1..=stable + 2 {
            let next = hierarchy_partition(&ts, Depth::Finite(l)).partition;
            assert!(next.refines(&prev));
            if l >= stable {
                assert_eq!(next, fix.partition);
            }
            prev = next;
        }
    }
}

#[test]
fn p_belief_is_monotone_in_the_event_and_antitone_in_p() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let grid: Vec<Rational> = (0..=4).map(|k| Rational::new(k, 4).unwrap()).collect();
    for _ in 0..40 {
        let ts = random::structure(&mut rng, &Params::default()).unwrap();
        let n = ts.num_worlds();
        let small = random::nonempty_subset(&mut rng, n);
        let large = small.union(&random::nonempty_subset(&mut rng, n));
        for j in 0..ts.num_players() {
            for b in 0..ts.world().num_events() {
                for (i, p) in grid.iter().enumerate() {
                    let bs = ts.p_belief(j, b, p, &small).unwrap();
                    let bl = ts.p_belief(j, b, p, &large).unwrap();
                    assert!(bs.is_subset(&bl));
                    if i > 0 {
                        let looser = ts.p_belief(j, b, &grid[i - 1], &small).unwrap();
                        assert!(bs.is_subset(&looser));
                    }
                }
                assert!(ts.p_belief(j, b, &grid[0], &EventSet::empty(n)).unwrap().is_full());
            }
        }
    }
}

#[test]
fn beta_and_own_type_reconstruct_beliefs() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for _ in 0..40 {
        let ts = random::structure(&mut rng, &Params::default()).unwrap();
        assert!(validate_structure(&ts, true).is_ok());
        let wd = ts.world().domain();
        for j in 0..ts.num_players() {
            let beta = ts.beta(j).unwrap();
            for (t, cps) in beta.iter().enumerate() {
                assert!(validate_cps(cps).is_ok());
                let od = cps.domain();
                for b in 0..ts.world().num_events() {
                    for w in 0..wd.size() {
                        let mut c = wd.coords(w);
                        let own = c.remove(j + 1);
                        let expected = if own == t { cps.measure(b).mass(od.index(&c)).clone() } else { Rational::zero() };
                        assert_eq!(ts.belief(j, t).measure(b).mass(w), &expected);
                    }
                }
            }
        }
    }
}

#[test]
fn morphisms_commute_with_belief_operators() {
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    let grid: Vec<Rational> = (0..=4).map(|k| Rational::new(k, 4).unwrap()).collect();
    for _ in 0..40 {
        let target = small_target(&mut rng);
        let (source, f) = random::split(&mut rng, &target, 2).unwrap();
        let wmap = f.world_map(&source, &target).unwrap();
        let m = target.num_worlds();
        for w in 0..m {
            let e = EventSet::singleton(m, w);
            let pre = f.preimage(&wmap, &e);
            for j in 0..target.num_players() {
                for b in 0..target.world().num_events() {
                    for p in &grid {
                        let lhs = f.preimage(&wmap, &target.p_belief(j, b, p, &e).unwrap());
                        let rhs = source.p_belief(j, b, p, &pre).unwrap();
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }
}

fn random_formula(rng: &mut ChaCha8Rng, ts: &TypeStructure, depth: usize) -> cpskit::Formula {
    use cpskit::Formula;
    if depth == 0 || rng.gen_bool(0.2) {
        return match rng.gen_range(0..3) {
            0 => Formula::Top,
            1 => Formula::prop("p"),
            _ => Formula::prop("q"),
        };
    }
    match rng.gen_range(0..3) {
        0 => Formula::not(random_formula(rng, ts, depth - 1)),
        1 => Formula::and(vec![random_formula(rng, ts, depth - 1), random_formula(rng, ts, depth - 1)]),
        _ => {
            let j = rng.gen_range(0..ts.num_players());
            let b = rng.gen_range(0..ts.world().num_events());
            Formula::believes(
                ts.players()[j].clone(),
                ts.world().event_name(b),
                Rational::new(rng.gen_range(0..=4), 4).unwrap(),
                random_formula(rng, ts, depth - 1),
            )
        }
    }
}

#[test]
fn valuation_preserving_morphisms_pull_back_extensions() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..40 {
        let target = small_target(&mut rng);
        let val = random::valuation(&mut rng, target.space().len(), 2);
        let target = target.with_valuation(val).unwrap();
        let (source, f) = random::split(&mut rng, &target, 2).unwrap();
        assert!(check_morphism(&source, &target, &f).unwrap().is_ok());
        let wmap = f.world_map(&source, &target).unwrap();
        for _ in 0..20 {
            let phi = random_formula(&mut rng, &target, 3);
            let pulled = f.preimage(&wmap, &cpskit::evaluate(&target, &phi).unwrap());
            assert_eq!(pulled, cpskit::evaluate(&source, &phi).unwrap(), "{phi}");
        }
    }
}
