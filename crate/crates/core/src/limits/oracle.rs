use std::collections::HashMap;
use std::sync::Arc;

use super::{Diagram, LimitError, Side};
use crate::finite_space::{
    all_spaces_up_to, enumerate_morphisms, equivariance_violation, is_morphism, validate_morphism, GbcSpace,
    DEFAULT_ENUMERATION_CAP,
};
use crate::relalg::PointMap;

/// Largest admissible test-object size.
pub const MAX_TEST_CAP: usize = DEFAULT_ENUMERATION_CAP;

#[derive(Clone, Debug)]
pub enum Verdict {
    Pass,
    /// The candidate is not even a (co)cone.
    InvalidCandidate(String),
    /// A test (co)cone with zero or at least two mediating morphisms.
    Counterexample(Counterexample),
}

impl Verdict {
    pub fn is_pass(&self) -> bool {
        matches!(self, Verdict::Pass)
    }
}

#[derive(Clone, Debug)]
pub struct Counterexample {
    pub test_object: Arc<GbcSpace>,
    pub cone: Vec<PointMap>,
    /// Empty, or the first two mediators found.
    pub mediators: Vec<PointMap>,
}

/// Checks the universal property of a candidate (co)limit against every
/// test object with at most `test_cap` points and every (co)cone on it.
///
/// Test objects carry the trivial action.
pub fn universal_property_check(
    apex: &Arc<GbcSpace>,
    legs: &[PointMap],
    d: &Diagram,
    side: Side,
    test_cap: usize,
) -> Result<Verdict, LimitError> {
    if test_cap > MAX_TEST_CAP {
        return Err(LimitError::CapExceeded {
            what: "oracle test object",
            requested: test_cap,
            cap: MAX_TEST_CAP,
        });
    }
    if let Some(reason) = candidate_problem(apex, legs, d, side) {
        return Ok(Verdict::InvalidCandidate(reason));
    }
    let mut checks: Vec<Vec<usize>> = vec![Vec::new(); d.len()];
    for (i, a) in d.arrows().iter().enumerate() {
        checks[a.src.max(a.dst)].push(i);
    }
    // Apex points indexed by their leg images, for limit mediators.
    let mut by_image: HashMap<Vec<usize>, Vec<usize>> = HashMap::new();
    // Constraints on each apex point, for colimit mediators.
    let mut hit_by: Vec<Vec<(usize, usize)>> = vec![Vec::new(); apex.len()];
    match side {
        Side::Limit => {
            for a in 0..apex.len() {
                by_image
                    .entry(legs.iter().map(|l| l.apply(a)).collect())
                    .or_default()
                    .push(a);
            }
        }
        Side::Colimit => {
            for (j, leg) in legs.iter().enumerate() {
                for x in 0..leg.dom().len() {
                    hit_by[leg.apply(x)].push((j, x));
                }
            }
        }
    }

    for t in all_spaces_up_to(test_cap) {
        let homs = d
            .objects()
            .iter()
            .map(|o| {
                let found = match side {
                    Side::Limit => enumerate_morphisms(&t, o),
                    Side::Colimit => enumerate_morphisms(o, &t),
                };
                Ok(found?.map(|m| m.map().clone()).collect::<Vec<_>>())
            })
            .collect::<Result<Vec<_>, LimitError>>()?;
        let mut chosen: Vec<usize> = Vec::with_capacity(d.len());
        let mut result = None;
        search_cones(d, side, &homs, &checks, &mut chosen, &mut |cone: &[&PointMap]| {
            let mediators = match side {
                Side::Limit => limit_mediators(apex, &t, cone, &by_image),
                Side::Colimit => colimit_mediators(apex, &t, cone, &hit_by),
            };
            if mediators.len() == 1 {
                return false;
            }
            result = Some(Counterexample {
                test_object: t.clone(),
                cone: cone.iter().map(|m| (*m).clone()).collect(),
                mediators,
            });
            true
        });
        if let Some(c) = result {
            return Ok(Verdict::Counterexample(c));
        }
    }
    Ok(Verdict::Pass)
}

fn candidate_problem(apex: &Arc<GbcSpace>, legs: &[PointMap], d: &Diagram, side: Side) -> Option<String> {
    if legs.len() != d.len() {
        return Some(format!("expected {} legs, got {}", d.len(), legs.len()));
    }
    for (j, leg) in legs.iter().enumerate() {
        let checked = match side {
            Side::Limit => validate_morphism(apex, d.object(j), leg.clone()),
            Side::Colimit => validate_morphism(d.object(j), apex, leg.clone()),
        };
        match checked {
            Err(v) => {
                let first = v.first().map(|v| v.to_string()).unwrap_or_default();
                return Some(format!("leg {} is not a morphism: {first}", d.name(j)));
            }
            Ok(m) if !m.is_equivariant() => return Some(format!("leg {} is not equivariant", d.name(j))),
            Ok(_) => {}
        }
    }
    for (i, a) in d.arrows().iter().enumerate() {
        let commutes = match side {
            Side::Limit => legs[a.src].then(a.morphism.map()).ok().as_ref() == Some(&legs[a.dst]),
            Side::Colimit => a.morphism.map().then(&legs[a.dst]).ok().as_ref() == Some(&legs[a.src]),
        };
        if !commutes {
            return Some(format!("legs do not commute with arrow {i}"));
        }
    }
    None
}

/// Depth-first search over commuting (co)cones; `visit` returns `true` to stop.
fn search_cones<'a>(
    d: &Diagram,
    side: Side,
    homs: &'a [Vec<PointMap>],
    checks: &[Vec<usize>],
    chosen: &mut Vec<usize>,
    visit: &mut dyn FnMut(&[&'a PointMap]) -> bool,
) -> bool {
    let j = chosen.len();
    if j == d.len() {
        let cone: Vec<&PointMap> = chosen.iter().enumerate().map(|(k, &c)| &homs[k][c]).collect();
        return visit(&cone);
    }
    for c in 0..homs[j].len() {
        chosen.push(c);
        let ok = checks[j].iter().all(|&i| {
            let a = &d.arrows()[i];
            let (s, t) = (&homs[a.src][chosen[a.src]], &homs[a.dst][chosen[a.dst]]);
            match side {
                Side::Limit => (0..s.dom().len()).all(|x| a.morphism.apply(s.apply(x)) == t.apply(x)),
                Side::Colimit => (0..s.dom().len()).all(|x| t.apply(a.morphism.apply(x)) == s.apply(x)),
            }
        });
        if ok && search_cones(d, side, homs, checks, chosen, visit) {
            return true;
        }
        chosen.pop();
    }
    false
}

fn limit_mediators(
    apex: &Arc<GbcSpace>,
    t: &Arc<GbcSpace>,
    cone: &[&PointMap],
    by_image: &HashMap<Vec<usize>, Vec<usize>>,
) -> Vec<PointMap> {
    let empty = Vec::new();
    let candidates: Vec<&Vec<usize>> = (0..t.len())
        .map(|x| {
            by_image
                .get(&cone.iter().map(|c| c.apply(x)).collect::<Vec<_>>())
                .unwrap_or(&empty)
        })
        .collect();
    collect_mediators(t, apex, &candidates)
}

fn colimit_mediators(
    apex: &Arc<GbcSpace>,
    t: &Arc<GbcSpace>,
    cone: &[&PointMap],
    hit_by: &[Vec<(usize, usize)>],
) -> Vec<PointMap> {
    let everything: Vec<usize> = (0..t.len()).collect();
    let forced: Vec<Vec<usize>> = hit_by
        .iter()
        .map(|hits| {
            let mut images: Vec<usize> = hits.iter().map(|&(j, x)| cone[j].apply(x)).collect();
            images.sort_unstable();
            images.dedup();
            match images.len() {
                0 => everything.clone(),
                1 => images,
                _ => Vec::new(),
            }
        })
        .collect();
    let candidates: Vec<&Vec<usize>> = forced.iter().collect();
    collect_mediators(apex, t, &candidates)
}

/// Up to two equivariant morphisms `dom → cod` choosing images from `candidates`.
fn collect_mediators(dom: &Arc<GbcSpace>, cod: &Arc<GbcSpace>, candidates: &[&Vec<usize>]) -> Vec<PointMap> {
    fn go(
        dom: &Arc<GbcSpace>,
        cod: &Arc<GbcSpace>,
        candidates: &[&Vec<usize>],
        images: &mut Vec<usize>,
        out: &mut Vec<PointMap>,
    ) {
        if out.len() >= 2 {
            return;
        }
        let x = images.len();
        if x == candidates.len() {
            let map = PointMap::new(dom.carrier(), cod.carrier(), images.clone()).expect("in range");
            if is_morphism(dom, cod, &map) && equivariance_violation(&map, dom.action(), cod.action()).is_none() {
                out.push(map);
            }
            return;
        }
        for &y in candidates[x] {
            images.push(y);
            go(dom, cod, candidates, images, out);
            images.pop();
        }
    }
    let mut out = Vec::new();
    go(
        dom,
        cod,
        candidates,
        &mut Vec::with_capacity(candidates.len()),
        &mut out,
    );
    out
}
