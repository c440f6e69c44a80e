use std::collections::{HashMap, HashSet, VecDeque};

use crate::relalg::{Carrier, PointMap, PointSet, RelError, Relation};

/// A group acting on a carrier, presented by generating permutations.
///
/// Generators are matched by position across spaces: generator `i` of one
/// space and generator `i` of another act as the same abstract group
/// element. A space listing fewer generators lets the missing ones act as
/// the identity, so spaces without an action carry the trivial one.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupAction {
    carrier: Carrier,
    generators: Vec<PointMap>,
}

impl GroupAction {
    pub fn new(carrier: &Carrier, generators: Vec<Vec<usize>>) -> Result<Self, ActionError> {
        let maps = generators
            .into_iter()
            .map(|images| PointMap::new(carrier, carrier, images))
            .collect::<Result<Vec<_>, _>>()?;
        GroupAction::from_maps(carrier, maps)
    }

    pub fn from_maps(carrier: &Carrier, generators: Vec<PointMap>) -> Result<Self, ActionError> {
        for (i, g) in generators.iter().enumerate() {
            if g.dom() != carrier || g.cod() != carrier {
                return Err(ActionError::Rel(RelError::CarrierMismatch));
            }
            if !g.is_bijective() {
                return Err(ActionError::NotAPermutation(i));
            }
        }
        Ok(GroupAction {
            carrier: carrier.clone(),
            generators,
        })
    }

    pub fn carrier(&self) -> &Carrier {
        &self.carrier
    }

    pub fn generators(&self) -> &[PointMap] {
        &self.generators
    }

    pub fn is_trivial(&self) -> bool {
        self.generators.iter().all(|g| *g == PointMap::identity(&self.carrier))
    }

    /// The orbit `ΓS`.
    pub fn orbit(&self, set: &PointSet) -> PointSet {
        let mut current = set.clone();
        loop {
            let mut next = current.clone();
            for g in &self.generators {
                next = next
                    .union(&g.image_set(&current).expect("same carrier"))
                    .expect("same carrier");
            }
            if next == current {
                return current;
            }
            current = next;
        }
    }

    /// First `(generator, point)` moved out of `set`, if any.
    pub fn set_violation(&self, set: &PointSet) -> Option<(usize, usize)> {
        for (gi, g) in self.generators.iter().enumerate() {
            if let Some(x) = set.iter().find(|&x| !set.contains(g.apply(x))) {
                return Some((gi, x));
            }
        }
        None
    }

    /// First `(generator, pair)` whose image leaves `rel`, if any.
    pub fn relation_violation(&self, rel: &Relation) -> Option<(usize, (usize, usize))> {
        for (gi, g) in self.generators.iter().enumerate() {
            if let Some(p) = rel.pairs().find(|&(x, y)| !rel.contains(g.apply(x), g.apply(y))) {
                return Some((gi, p));
            }
        }
        None
    }

    pub fn preserves_set(&self, set: &PointSet) -> bool {
        self.set_violation(set).is_none()
    }

    pub fn preserves_relation(&self, rel: &Relation) -> bool {
        self.relation_violation(rel).is_none()
    }

    /// Group elements reachable from the identity, breadth first, stopping
    /// after `cap` elements.
    pub fn elements(&self, cap: usize) -> Vec<PointMap> {
        let id = PointMap::identity(&self.carrier);
        let mut seen: HashSet<PointMap> = HashSet::from([id.clone()]);
        let mut order = vec![id.clone()];
        let mut queue = VecDeque::from([id]);
        while let Some(h) = queue.pop_front() {
            for g in &self.generators {
                if order.len() >= cap {
                    return order;
                }
                let next = h.then(g).expect("same carrier");
                if seen.insert(next.clone()) {
                    order.push(next.clone());
                    queue.push_back(next);
                }
            }
        }
        order
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ActionError {
    #[error(transparent)]
    Rel(#[from] RelError),
    #[error("action generator {0} is not a permutation of the carrier")]
    NotAPermutation(usize),
}

/// Generator `i` of an optional action, defaulting to the identity.
pub(crate) fn generator_or_identity(action: Option<&GroupAction>, carrier: &Carrier, i: usize) -> PointMap {
    action
        .and_then(|a| a.generators.get(i).cloned())
        .unwrap_or_else(|| PointMap::identity(carrier))
}

pub(crate) fn generator_count(actions: &[Option<&GroupAction>]) -> usize {
    actions
        .iter()
        .map(|a| a.map_or(0, |a| a.generators.len()))
        .max()
        .unwrap_or(0)
}

/// First `(generator, point)` at which `map` fails to intertwine the actions.
pub(crate) fn equivariance_violation(
    map: &PointMap,
    dom_action: Option<&GroupAction>,
    cod_action: Option<&GroupAction>,
) -> Option<(usize, usize)> {
    for i in 0..generator_count(&[dom_action, cod_action]) {
        let gd = generator_or_identity(dom_action, map.dom(), i);
        let gc = generator_or_identity(cod_action, map.cod(), i);
        for x in 0..map.dom().len() {
            if map.apply(gd.apply(x)) != gc.apply(map.apply(x)) {
                return Some((i, x));
            }
        }
    }
    None
}

/// The componentwise action on a set of tuples, given factor actions.
///
/// `tuples[k]` holds the coordinates of point `k` of `carrier`. Returns
/// `None` when every factor action is trivial; panics if the tuple set is
/// not closed under the componentwise action, which callers rule out by
/// only passing images of equivariant constructions.
pub(crate) fn componentwise_action(
    carrier: &Carrier,
    tuples: &[Vec<usize>],
    factor_carriers: &[&Carrier],
    factors: &[Option<&GroupAction>],
) -> Option<GroupAction> {
    let count = generator_count(factors);
    if count == 0 {
        return None;
    }
    let index: HashMap<&[usize], usize> = tuples.iter().enumerate().map(|(k, t)| (t.as_slice(), k)).collect();
    let gens = (0..count)
        .map(|i| {
            let per_factor: Vec<PointMap> = factors
                .iter()
                .zip(factor_carriers)
                .map(|(a, c)| generator_or_identity(*a, c, i))
                .collect();
            tuples
                .iter()
                .map(|t| {
                    let moved: Vec<usize> = t.iter().zip(&per_factor).map(|(&x, g)| g.apply(x)).collect();
                    *index
                        .get(moved.as_slice())
                        .expect("tuple set closed under the componentwise action")
                })
                .collect()
        })
        .collect();
    let action = GroupAction::new(carrier, gens).expect("componentwise images form permutations");
    Some(action).filter(|a| !a.is_trivial())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orbit_of_a_swap() {
        let c = Carrier::range(3);
        let a = GroupAction::new(&c, vec![vec![1, 0, 2]]).unwrap();
        let o = a.orbit(&PointSet::singleton(&c, 0));
        assert_eq!(o, PointSet::from_indices(&c, [0, 1]));
        assert_eq!(a.elements(10).len(), 2);
        assert!(a.preserves_set(&o));
        assert_eq!(a.set_violation(&PointSet::singleton(&c, 0)), Some((0, 0)));
    }

    #[test]
    fn non_bijection_rejected() {
        let c = Carrier::range(2);
        assert_eq!(
            GroupAction::new(&c, vec![vec![0, 0]]),
            Err(ActionError::NotAPermutation(0))
        );
    }

    #[test]
    fn cyclic_group_elements() {
        let c = Carrier::range(4);
        let a = GroupAction::new(&c, vec![vec![1, 2, 3, 0]]).unwrap();
        assert_eq!(a.elements(100).len(), 4);
        assert_eq!(a.elements(3).len(), 3);
    }
}
