//! Perturbations of a computed (co)limit, each of which must be rejected by
//! the universal-property oracle.

use std::sync::Arc;

use super::{Cone, Side};
use crate::finite_space::GbcSpace;
use crate::relalg::{Carrier, PointMap, PointSet, Relation};

#[derive(Clone, Debug)]
pub struct Mutant {
    pub description: String,
    pub apex: Arc<GbcSpace>,
    pub legs: Vec<PointMap>,
}

/// Every structural mutant of `cone`, in a fixed order.
///
/// Mutants whose structure would not be invariant under the apex action are
/// left out, and point-adding or point-removing mutations are only produced
/// for apexes without an action.
pub fn mutants(cone: &Cone, side: Side) -> Vec<Mutant> {
    let apex = &cone.apex;
    let legs: Vec<PointMap> = cone.legs.iter().map(|l| l.map().clone()).collect();
    let classes = apex.entourage().classes();
    let mut out = Vec::new();
    let mut push = |description: String, space: Option<GbcSpace>, legs: Vec<PointMap>| {
        if let Some(space) = space {
            out.push(Mutant {
                description,
                apex: Arc::new(space),
                legs,
            });
        }
    };

    for class in &classes {
        let bounded = toggle(apex.bounded(), class);
        push(
            format!("toggle boundedness of {:?}", class.names()),
            GbcSpace::from_normal_form(apex.entourage().clone(), bounded, apex.action().cloned()).ok(),
            legs.clone(),
        );
    }

    for (i, a) in classes.iter().enumerate() {
        for b in &classes[i + 1..] {
            let both = a.union(b).expect("same carrier");
            let entourage = apex.entourage().union(&Relation::square(&both)).expect("same carrier");
            let a_bounded = a.is_subset(apex.bounded()).expect("same carrier");
            let b_bounded = b.is_subset(apex.bounded()).expect("same carrier");
            let mut variants = vec![];
            if a_bounded || b_bounded {
                variants.push(("bounded", apex.bounded().union(&both).expect("same carrier")));
            }
            if !(a_bounded && b_bounded) {
                variants.push(("unbounded", apex.bounded().difference(&both).expect("same carrier")));
            }
            for (label, bounded) in variants {
                push(
                    format!("merge {:?} and {:?} ({label})", a.names(), b.names()),
                    GbcSpace::from_normal_form(entourage.clone(), bounded, apex.action().cloned()).ok(),
                    legs.clone(),
                );
            }
        }
    }

    for class in classes.iter().filter(|c| c.len() >= 2) {
        let x = class.first().expect("nonempty");
        let rest = class
            .difference(&PointSet::singleton(apex.carrier(), x))
            .expect("same carrier");
        let entourage = apex
            .entourage()
            .difference(&Relation::square(class))
            .and_then(|e| e.union(&Relation::square(&rest)))
            .and_then(|e| e.union(&Relation::diagonal(apex.carrier())))
            .expect("same carrier");
        push(
            format!("split `{}` off its class", apex.carrier().name(x)),
            GbcSpace::from_normal_form(entourage, apex.bounded().clone(), apex.action().cloned()).ok(),
            legs.clone(),
        );
    }

    if apex.action().is_none() {
        match side {
            Side::Limit => {
                for x in 0..apex.len() {
                    let (space, legs) = duplicate_point(apex, &legs, x);
                    push(format!("duplicate `{}`", apex.carrier().name(x)), Some(space), legs);
                }
                for x in 0..apex.len() {
                    let keep = PointSet::singleton(apex.carrier(), x).complement();
                    if let Ok((space, inclusion)) = apex.subspace(&keep) {
                        let legs = legs.iter().map(|l| inclusion.then(l).expect("composable")).collect();
                        push(format!("remove `{}`", apex.carrier().name(x)), Some(space), legs);
                    }
                }
            }
            Side::Colimit => {
                let (space, legs) = add_unbounded_point(apex, &legs);
                push("add an unreached unbounded point".to_string(), Some(space), legs);
            }
        }
    }
    out
}

fn toggle(set: &PointSet, class: &PointSet) -> PointSet {
    if class.is_subset(set).expect("same carrier") {
        set.difference(class).expect("same carrier")
    } else {
        set.union(class).expect("same carrier")
    }
}

fn fresh_name(carrier: &Carrier, base: &str) -> String {
    let mut name = format!("{base}'");
    while carrier.index_of(&name).is_some() {
        name.push('\'');
    }
    name
}

fn extended(carrier: &Carrier, name: String) -> Carrier {
    let mut names = carrier.names().to_vec();
    names.push(name);
    Carrier::new(names).expect("fresh name")
}

/// Same structure on `old` transported to `new`, which extends it by one point.
fn transport(old: &Relation, new: &Carrier) -> Relation {
    Relation::from_pairs(new, old.pairs())
}

fn duplicate_point(apex: &GbcSpace, legs: &[PointMap], x: usize) -> (GbcSpace, Vec<PointMap>) {
    let carrier = extended(apex.carrier(), fresh_name(apex.carrier(), apex.carrier().name(x)));
    let copy = apex.len();
    let mut entourage = transport(apex.entourage(), &carrier);
    for y in apex.entourage().successors(x).iter() {
        entourage.insert(copy, y);
        entourage.insert(y, copy);
    }
    entourage.insert(copy, copy);
    let mut bounded = PointSet::from_indices(&carrier, apex.bounded().iter());
    if apex.bounded().contains(x) {
        bounded.insert(copy);
    }
    let legs = legs
        .iter()
        .map(|l| {
            let mut images = l.images().to_vec();
            images.push(l.apply(x));
            PointMap::new(&carrier, l.cod(), images).expect("in range")
        })
        .collect();
    (GbcSpace::trusted(entourage, bounded, None), legs)
}

fn add_unbounded_point(apex: &GbcSpace, legs: &[PointMap]) -> (GbcSpace, Vec<PointMap>) {
    let carrier = extended(apex.carrier(), fresh_name(apex.carrier(), "extra"));
    let mut entourage = transport(apex.entourage(), &carrier);
    entourage.insert(apex.len(), apex.len());
    let bounded = PointSet::from_indices(&carrier, apex.bounded().iter());
    let legs = legs
        .iter()
        .map(|l| PointMap::new(l.dom(), &carrier, l.images().to_vec()).expect("in range"))
        .collect();
    (GbcSpace::trusted(entourage, bounded, None), legs)
}
