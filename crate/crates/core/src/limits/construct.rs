use std::collections::HashMap;
use std::sync::Arc;

use super::{Cone, Diagram, LimitError};
use crate::finite_space::{
    componentwise_action, generator_count, generator_or_identity, GbcSpace, GroupAction, Morphism,
};
use crate::naming::{tagged_name, tuple_name};
use crate::relalg::{Carrier, PointMap, PointSet, Relation};

/// Default bound on the number of points a limit may have.
pub const DEFAULT_MAX_LIMIT_POINTS: usize = 4096;

pub fn limit(d: &Diagram) -> Result<Cone, LimitError> {
    limit_with_cap(d, DEFAULT_MAX_LIMIT_POINTS)
}

/// The limit: commuting tuples, componentwise entourage, and a tuple is
/// bounded as soon as one coordinate is.
pub fn limit_with_cap(d: &Diagram, cap: usize) -> Result<Cone, LimitError> {
    let k = d.len();
    // Each arrow is checked once both of its endpoints have been chosen.
    let mut checks: Vec<Vec<usize>> = vec![Vec::new(); k];
    for (i, a) in d.arrows().iter().enumerate() {
        checks[a.src.max(a.dst)].push(i);
    }
    let mut tuples: Vec<Vec<usize>> = Vec::new();
    let mut current = Vec::with_capacity(k);
    commuting_tuples(d, &checks, &mut current, &mut tuples, cap)?;

    let names: Vec<String> = tuples
        .iter()
        .map(|t| {
            let parts: Vec<&str> = t
                .iter()
                .enumerate()
                .map(|(j, &x)| d.object(j).carrier().name(x))
                .collect();
            tuple_name(&parts)
        })
        .collect();
    let carrier = Carrier::new(names).expect("tuple names are injective");

    // Points with the same class in every coordinate form one class.
    let class_ids: Vec<Vec<usize>> = d.objects().iter().map(|o| class_index(o.entourage())).collect();
    let mut groups: HashMap<Vec<usize>, Vec<usize>> = HashMap::new();
    for (p, t) in tuples.iter().enumerate() {
        let key: Vec<usize> = t.iter().enumerate().map(|(j, &x)| class_ids[j][x]).collect();
        groups.entry(key).or_default().push(p);
    }
    let entourage = Relation::from_pairs(
        &carrier,
        groups
            .values()
            .flat_map(|g| g.iter().flat_map(move |&a| g.iter().map(move |&b| (a, b)))),
    );
    let bounded = PointSet::from_indices(
        &carrier,
        (0..tuples.len()).filter(|&p| {
            tuples[p]
                .iter()
                .enumerate()
                .any(|(j, &x)| d.object(j).bounded().contains(x))
        }),
    );
    let factor_carriers: Vec<&Carrier> = d.objects().iter().map(|o| o.carrier()).collect();
    let factor_actions: Vec<Option<&GroupAction>> = d.objects().iter().map(|o| o.action()).collect();
    let action = componentwise_action(&carrier, &tuples, &factor_carriers, &factor_actions);
    let apex = Arc::new(GbcSpace::trusted(entourage, bounded, action));
    let legs = (0..k)
        .map(|j| {
            let map = PointMap::new(&carrier, d.object(j).carrier(), tuples.iter().map(|t| t[j]).collect())
                .expect("coordinates lie in the factor");
            Morphism::trusted(apex.clone(), d.object(j).clone(), map)
        })
        .collect();
    Ok(Cone { apex, legs })
}

fn commuting_tuples(
    d: &Diagram,
    checks: &[Vec<usize>],
    current: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
    cap: usize,
) -> Result<(), LimitError> {
    let j = current.len();
    if j == d.len() {
        if out.len() == cap {
            return Err(LimitError::CapExceeded {
                what: "limit carrier",
                requested: cap + 1,
                cap,
            });
        }
        out.push(current.clone());
        return Ok(());
    }
    for x in 0..d.object(j).len() {
        current.push(x);
        let ok = checks[j].iter().all(|&i| {
            let a = &d.arrows()[i];
            a.morphism.apply(current[a.src]) == current[a.dst]
        });
        if ok {
            commuting_tuples(d, checks, current, out, cap)?;
        }
        current.pop();
    }
    Ok(())
}

fn class_index(e: &Relation) -> Vec<usize> {
    let mut ids = vec![0; e.carrier().len()];
    for (c, class) in e.classes().iter().enumerate() {
        for x in class.iter() {
            ids[x] = c;
        }
    }
    ids
}

pub fn product(spaces: &[Arc<GbcSpace>]) -> Result<Cone, LimitError> {
    limit(&Diagram::discrete(spaces))
}

pub fn equalizer(f: &Morphism, g: &Morphism) -> Result<Cone, LimitError> {
    if f.dom() != g.dom() || f.cod() != g.cod() {
        return Err(LimitError::NotParallel);
    }
    let dom = f.dom();
    let agree = PointSet::from_indices(dom.carrier(), (0..dom.len()).filter(|&x| f.apply(x) == g.apply(x)));
    let (space, inclusion) = dom.subspace(&agree)?;
    let apex = Arc::new(space);
    let leg = Morphism::trusted(apex.clone(), dom.clone(), inclusion);
    let composite = leg.then(f)?;
    Ok(Cone {
        apex,
        legs: vec![leg, composite],
    })
}

pub fn pullback(f: &Morphism, g: &Morphism) -> Result<Cone, LimitError> {
    if f.cod() != g.cod() {
        return Err(LimitError::NotASpan("codomain"));
    }
    limit(&Diagram::cospan(f, g)?)
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.0[root] != root {
            root = self.0[root];
        }
        let mut cur = x;
        while self.0[cur] != root {
            let next = self.0[cur];
            self.0[cur] = root;
            cur = next;
        }
        root
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        // Keep the smaller index as root so roots are least members.
        if ra < rb {
            self.0[rb] = ra;
        } else if rb < ra {
            self.0[ra] = rb;
        }
    }
}

/// Quotients the disjoint union of `parts` by `uf`, naming each class after
/// its least member. Returns the apex and one leg map per part.
fn glue(
    parts: &[&Arc<GbcSpace>],
    uf: &mut UnionFind,
    name: impl Fn(usize, usize) -> String,
) -> (Arc<GbcSpace>, Vec<PointMap>) {
    let owner: Vec<(usize, usize)> = parts
        .iter()
        .enumerate()
        .flat_map(|(j, p)| (0..p.len()).map(move |x| (j, x)))
        .collect();
    let total = owner.len();
    let mut offsets = Vec::with_capacity(parts.len());
    let mut acc = 0;
    for p in parts {
        offsets.push(acc);
        acc += p.len();
    }
    let locate = |g: usize| owner[g];

    let mut class_of = vec![usize::MAX; total];
    let mut root_class: HashMap<usize, usize> = HashMap::new();
    let mut names = Vec::new();
    for (g, slot) in class_of.iter_mut().enumerate() {
        let r = uf.find(g);
        let next = root_class.len();
        let c = *root_class.entry(r).or_insert_with(|| {
            let (j, x) = locate(g);
            names.push(name(j, x));
            next
        });
        *slot = c;
    }
    let carrier = Carrier::new(names).expect("least-member names are injective");
    let leg_maps: Vec<PointMap> = parts
        .iter()
        .enumerate()
        .map(|(j, p)| {
            PointMap::new(
                p.carrier(),
                &carrier,
                (0..p.len()).map(|x| class_of[offsets[j] + x]).collect(),
            )
            .expect("classes lie in the quotient")
        })
        .collect();

    // Coarse structure: equivalence generated by the images of the part entourages.
    let mut coarse = UnionFind::new(carrier.len());
    for (p, leg) in parts.iter().zip(&leg_maps) {
        for class in p.entourage().classes() {
            let first = leg.apply(class.first().expect("nonempty"));
            for x in class.iter() {
                coarse.union(first, leg.apply(x));
            }
        }
    }
    let coarse_root: Vec<usize> = (0..carrier.len()).map(|q| coarse.find(q)).collect();
    let entourage = Relation::from_pairs(
        &carrier,
        (0..carrier.len())
            .flat_map(|a| (0..carrier.len()).map(move |b| (a, b)))
            .filter(|&(a, b)| coarse_root[a] == coarse_root[b]),
    );
    // A class is bounded when every point mapping into it is bounded.
    let mut unbounded_root = vec![false; carrier.len()];
    for (p, leg) in parts.iter().zip(&leg_maps) {
        for x in p.unbounded().iter() {
            unbounded_root[coarse_root[leg.apply(x)]] = true;
        }
    }
    let bounded = PointSet::from_indices(
        &carrier,
        (0..carrier.len()).filter(|&q| !unbounded_root[coarse_root[q]]),
    );

    let actions: Vec<Option<&GroupAction>> = parts.iter().map(|p| p.action()).collect();
    let gens = generator_count(&actions);
    let action = if gens == 0 {
        None
    } else {
        let mut reps = vec![usize::MAX; carrier.len()];
        for g in (0..total).rev() {
            reps[class_of[g]] = g;
        }
        let perms = (0..gens)
            .map(|i| {
                reps.iter()
                    .map(|&g| {
                        let (j, x) = locate(g);
                        let moved = generator_or_identity(parts[j].action(), parts[j].carrier(), i).apply(x);
                        leg_maps[j].apply(moved)
                    })
                    .collect()
            })
            .collect();
        let a = GroupAction::new(&carrier, perms).expect("induced action on an equivariant quotient");
        Some(a).filter(|a| !a.is_trivial())
    };
    (Arc::new(GbcSpace::trusted(entourage, bounded, action)), leg_maps)
}

/// The colimit: set colimit by union-find, entourage generated by the leg
/// images, and a class bounded iff every leg preimage of its thickening is.
pub fn colimit(d: &Diagram) -> Cone {
    let parts: Vec<&Arc<GbcSpace>> = d.objects().iter().collect();
    let mut offsets = Vec::with_capacity(parts.len());
    let mut total = 0;
    for p in &parts {
        offsets.push(total);
        total += p.len();
    }
    let mut uf = UnionFind::new(total);
    for a in d.arrows() {
        for x in 0..d.object(a.src).len() {
            uf.union(offsets[a.src] + x, offsets[a.dst] + a.morphism.apply(x));
        }
    }
    let (apex, maps) = glue(&parts, &mut uf, |j, x| {
        tagged_name(d.name(j), d.object(j).carrier().name(x))
    });
    let legs = maps
        .into_iter()
        .enumerate()
        .map(|(j, m)| Morphism::trusted(d.object(j).clone(), apex.clone(), m))
        .collect();
    Cone { apex, legs }
}

pub fn coproduct(spaces: &[Arc<GbcSpace>]) -> Cone {
    colimit(&Diagram::discrete(spaces))
}

/// Quotient of the codomain by `f(x) ~ g(x)`, classes named by their least
/// member.
pub fn coequalizer(f: &Morphism, g: &Morphism) -> Result<Cone, LimitError> {
    if f.dom() != g.dom() || f.cod() != g.cod() {
        return Err(LimitError::NotParallel);
    }
    let cod = f.cod();
    let mut uf = UnionFind::new(cod.len());
    for x in 0..f.dom().len() {
        uf.union(f.apply(x), g.apply(x));
    }
    let (apex, maps) = glue(&[cod], &mut uf, |_, y| cod.carrier().name(y).to_string());
    let projection = Morphism::trusted(cod.clone(), apex.clone(), maps.into_iter().next().expect("one part"));
    let composite = f.then(&projection)?;
    Ok(Cone {
        apex,
        legs: vec![composite, projection],
    })
}

pub fn pushout(f: &Morphism, g: &Morphism) -> Result<Cone, LimitError> {
    if f.dom() != g.dom() {
        return Err(LimitError::NotASpan("domain"));
    }
    Ok(colimit(&Diagram::span(f, g)?))
}
