//! Existence of (co)limits among locally bounded spaces, and the colimit
//! admissibility criterion on finite carriers.

use std::collections::{HashMap, VecDeque};
use std::sync::Arc;

use serde::Serialize;

use super::{colimit, limit, Cone, Diagram, LimitError, Side};
use crate::finite_space::{componentwise_action, validate_morphism, GbcSpace, GroupAction};
use crate::relalg::{Carrier, PointMap, PointSet, Relation};

#[derive(Clone, Debug)]
pub struct ClassicalExistence {
    pub exists: bool,
    /// The (co)limit in the generalized category.
    pub cone: Cone,
    /// An unbounded point of that (co)limit when it is not locally bounded.
    pub unbounded_point: Option<String>,
}

/// Decides whether the (co)limit of a diagram of locally bounded spaces
/// exists among locally bounded spaces: it does iff the generalized one is
/// locally bounded.
pub fn exists_in_classical(d: &Diagram, side: Side) -> Result<ClassicalExistence, LimitError> {
    require_classical(d)?;
    let cone = match side {
        Side::Limit => limit(d)?,
        Side::Colimit => colimit(d),
    };
    let unbounded_point = cone
        .apex
        .unbounded()
        .first()
        .map(|x| cone.apex.carrier().name(x).to_string());
    Ok(ClassicalExistence {
        exists: unbounded_point.is_none(),
        cone,
        unbounded_point,
    })
}

fn require_classical(d: &Diagram) -> Result<(), LimitError> {
    match d.first_nonclassical() {
        Some(name) => Err(LimitError::NonClassicalInput(name.to_string())),
        None => Ok(()),
    }
}

#[derive(Clone, Debug)]
pub struct Preservation {
    pub isomorphism: bool,
    /// Comparison from the classical candidate to the generalized (co)limit
    /// (limits), or from the generalized colimit to the classical candidate.
    pub comparison: Option<PointMap>,
    pub reason: Option<String>,
}

/// Builds the classical (co)limit candidate directly (set-level (co)limit,
/// same entourage, every point bounded) and checks that the comparison map
/// to the generalized (co)limit is an isomorphism.
pub fn preservation_test(d: &Diagram, side: Side) -> Result<Preservation, LimitError> {
    require_classical(d)?;
    let general = match side {
        Side::Limit => limit(d)?,
        Side::Colimit => colimit(d),
    };
    let (candidate, candidate_legs) = match side {
        Side::Limit => classical_limit(d),
        Side::Colimit => classical_colimit(d),
    };
    let comparison = match side {
        Side::Limit => {
            let index: HashMap<Vec<usize>, usize> = (0..general.apex.len())
                .map(|a| (general.legs.iter().map(|l| l.apply(a)).collect(), a))
                .collect();
            let images: Option<Vec<usize>> = (0..candidate.len())
                .map(|p| {
                    index
                        .get(&candidate_legs.iter().map(|l| l.apply(p)).collect::<Vec<_>>())
                        .copied()
                })
                .collect();
            images.map(|images| PointMap::new(candidate.carrier(), general.apex.carrier(), images).expect("in range"))
        }
        Side::Colimit => {
            let mut images = vec![None; general.apex.len()];
            let mut consistent = true;
            for (leg, cand) in general.legs.iter().zip(&candidate_legs) {
                for x in 0..cand.dom().len() {
                    let slot = &mut images[leg.apply(x)];
                    match slot {
                        None => *slot = Some(cand.apply(x)),
                        Some(y) if *y != cand.apply(x) => consistent = false,
                        Some(_) => {}
                    }
                }
            }
            let images: Option<Vec<usize>> = images.into_iter().collect();
            images
                .filter(|_| consistent)
                .map(|images| PointMap::new(general.apex.carrier(), candidate.carrier(), images).expect("in range"))
        }
    };
    let Some(map) = comparison else {
        return Ok(Preservation {
            isomorphism: false,
            comparison: None,
            reason: Some("no comparison map compatible with the legs".into()),
        });
    };
    let Some(inverse) = map.inverse() else {
        return Ok(Preservation {
            isomorphism: false,
            comparison: Some(map),
            reason: Some("comparison map is not bijective".into()),
        });
    };
    let (source, target) = match side {
        Side::Limit => (candidate.clone(), general.apex.clone()),
        Side::Colimit => (general.apex.clone(), candidate.clone()),
    };
    let forward = validate_morphism(&source, &target, map.clone());
    let backward = validate_morphism(&target, &source, inverse);
    let reason = match (&forward, &backward) {
        (Ok(_), Ok(_)) => None,
        (Err(v), _) => Some(format!("comparison is not a morphism: {}", v[0])),
        (_, Err(v)) => Some(format!("inverse comparison is not a morphism: {}", v[0])),
    };
    Ok(Preservation {
        isomorphism: reason.is_none(),
        comparison: Some(map),
        reason,
    })
}

/// Set limit by filtering the full cartesian product.
fn classical_limit(d: &Diagram) -> (Arc<GbcSpace>, Vec<PointMap>) {
    let sizes: Vec<usize> = d.objects().iter().map(|o| o.len()).collect();
    let mut tuples = Vec::new();
    if sizes.iter().all(|&s| s > 0) {
        let mut t = vec![0; sizes.len()];
        loop {
            if d.arrows().iter().all(|a| a.morphism.apply(t[a.src]) == t[a.dst]) {
                tuples.push(t.clone());
            }
            let mut k = 0;
            while k < t.len() {
                t[k] += 1;
                if t[k] < sizes[k] {
                    break;
                }
                t[k] = 0;
                k += 1;
            }
            if k == t.len() {
                break;
            }
        }
    }
    let carrier = Carrier::range(tuples.len());
    let entourage = Relation::from_pairs(
        &carrier,
        (0..tuples.len())
            .flat_map(|a| (0..tuples.len()).map(move |b| (a, b)))
            .filter(|&(a, b)| (0..sizes.len()).all(|j| d.object(j).entourage().contains(tuples[a][j], tuples[b][j]))),
    );
    let factor_carriers: Vec<&Carrier> = d.objects().iter().map(|o| o.carrier()).collect();
    let factor_actions: Vec<Option<&GroupAction>> = d.objects().iter().map(|o| o.action()).collect();
    let action = componentwise_action(&carrier, &tuples, &factor_carriers, &factor_actions);
    let space = GbcSpace::from_normal_form(entourage, PointSet::full(&carrier), action).expect("classical limit");
    let legs = (0..sizes.len())
        .map(|j| {
            PointMap::new(&carrier, d.object(j).carrier(), tuples.iter().map(|t| t[j]).collect()).expect("in range")
        })
        .collect();
    (Arc::new(space), legs)
}

/// Set colimit by label propagation, with entourage generated by the images.
fn classical_colimit(d: &Diagram) -> (Arc<GbcSpace>, Vec<PointMap>) {
    let mut labels: Vec<Vec<usize>> = Vec::new();
    let mut next = 0;
    for o in d.objects() {
        labels.push((next..next + o.len()).collect());
        next += o.len();
    }
    let mut changed = true;
    while changed {
        changed = false;
        for a in d.arrows() {
            for x in 0..d.object(a.src).len() {
                let (l, r) = (labels[a.src][x], labels[a.dst][a.morphism.apply(x)]);
                if l != r {
                    let low = l.min(r);
                    for ls in labels.iter_mut() {
                        for v in ls.iter_mut() {
                            if *v == l || *v == r {
                                *v = low;
                            }
                        }
                    }
                    changed = true;
                }
            }
        }
    }
    let mut distinct: Vec<usize> = labels.iter().flatten().copied().collect();
    distinct.sort_unstable();
    distinct.dedup();
    let carrier = Carrier::range(distinct.len());
    let position = |v: usize| distinct.binary_search(&v).expect("label present");
    let legs: Vec<PointMap> = d
        .objects()
        .iter()
        .zip(&labels)
        .map(|(o, ls)| {
            PointMap::new(o.carrier(), &carrier, ls.iter().map(|&v| position(v)).collect()).expect("in range")
        })
        .collect();
    let images: Vec<Relation> = d
        .objects()
        .iter()
        .zip(&legs)
        .map(|(o, leg)| o.entourage().image(leg).expect("leg carriers"))
        .collect();
    let entourage = Relation::equivalence_closure(&carrier, &images).expect("same carrier");
    let action = if d.objects().iter().all(|o| o.action().is_none()) {
        None
    } else {
        // Induced from the generalized colimit, whose carrier is in the same order.
        colimit(d).apex.action().map(|a| {
            GroupAction::new(&carrier, a.generators().iter().map(|g| g.images().to_vec()).collect()).expect("same size")
        })
    };
    let space = GbcSpace::from_normal_form(entourage, PointSet::full(&carrier), action).expect("classical colimit");
    (Arc::new(space), legs)
}

#[derive(Clone, Debug, Serialize)]
pub struct AdmissibilityWitness {
    /// The starting point `b` of the set colimit.
    pub point: String,
    /// The object `k` whose leg preimage is unbounded.
    pub object: String,
    /// Objects whose image entourages were applied, in order.
    pub chain: Vec<String>,
    pub preimage: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct AdmissibilityReport {
    pub admissible: bool,
    pub witness: Option<AdmissibilityWitness>,
    /// Longest chain needed before no new thickened set appeared.
    pub max_chain_length: usize,
    pub sets_explored: usize,
}

/// Evaluates colimit admissibility of a diagram of locally bounded spaces.
///
/// For every point `b` of the set colimit this explores every set reachable
/// from `{b}` by the steps `S ↦ (g_i×g_i)(E_i)[S] = g_i(E_i[g_i⁻¹ S])` and
/// tests each leg preimage for boundedness. Only the maximal entourages are
/// used: thickening is monotone in the entourage and boundedness is closed
/// under subsets. The steps are not inflationary, so the exploration runs
/// over distinct sets until none is new rather than to a fixed length.
pub fn admissible(d: &Diagram) -> Result<AdmissibilityReport, LimitError> {
    require_classical(d)?;
    let cone = colimit(d);
    let legs: Vec<&PointMap> = cone.legs.iter().map(|l| l.map()).collect();
    let mut max_chain_length = 0;
    let mut sets_explored = 0;
    for b in 0..cone.apex.len() {
        let start = PointSet::singleton(cone.apex.carrier(), b);
        let mut parent: HashMap<PointSet, Option<(PointSet, usize)>> = HashMap::from([(start.clone(), None)]);
        let mut depth: HashMap<PointSet, usize> = HashMap::from([(start.clone(), 0)]);
        let mut queue = VecDeque::from([start]);
        while let Some(s) = queue.pop_front() {
            sets_explored += 1;
            max_chain_length = max_chain_length.max(depth[&s]);
            for (k, leg) in legs.iter().enumerate() {
                let pre = leg.preimage_set(&s).expect("leg carriers");
                if !pre.is_subset(d.object(k).bounded()).expect("same carrier") {
                    let mut chain = Vec::new();
                    let mut cur = s.clone();
                    while let Some(Some((prev, i))) = parent.get(&cur) {
                        chain.push(d.name(*i).to_string());
                        cur = prev.clone();
                    }
                    chain.reverse();
                    return Ok(AdmissibilityReport {
                        admissible: false,
                        witness: Some(AdmissibilityWitness {
                            point: cone.apex.carrier().name(b).to_string(),
                            object: d.name(k).to_string(),
                            chain,
                            preimage: pre.names(),
                        }),
                        max_chain_length,
                        sets_explored,
                    });
                }
            }
            for (i, leg) in legs.iter().enumerate() {
                let pulled = leg.preimage_set(&s).expect("leg carriers");
                let thick = d.object(i).entourage().thicken(&pulled).expect("same carrier");
                let next = leg.image_set(&thick).expect("leg carriers");
                if !parent.contains_key(&next) {
                    depth.insert(next.clone(), depth[&s] + 1);
                    parent.insert(next.clone(), Some((s.clone(), i)));
                    queue.push_back(next);
                }
            }
        }
    }
    Ok(AdmissibilityReport {
        admissible: true,
        witness: None,
        max_chain_length,
        sets_explored,
    })
}
