use std::collections::{HashMap, VecDeque};

use serde::Serialize;

use super::{Born, Coarse, SemilinearSet, SymDiagram, SymError, SymMap};

/// Upper bound on distinct thickening states per starting point.
pub const MAX_SYM_STATES: usize = 1 << 16;

/// The set-level colimit of a symbolic diagram, again identified with ℕ.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SetColimit {
    /// Number of classes formed by the finite heads; tail points follow them.
    pub head_classes: u64,
    pub legs: Vec<SymMap>,
}

/// Computes the set colimit of a connected diagram whose arrows are
/// eventually the identity.
///
/// Heads are glued by union-find; past every exception the tails of all
/// objects are identified pointwise.
pub fn set_colimit(d: &SymDiagram) -> Result<SetColimit, SymError> {
    if !d.is_connected() {
        return Err(SymError::UnsupportedDiagram(
            "the diagram must be nonempty and connected".into(),
        ));
    }
    if let Some(i) = d.arrows().iter().position(|(_, _, f)| !f.has_identity_tail()) {
        return Err(SymError::UnsupportedDiagram(format!(
            "arrow {i} is not eventually the identity"
        )));
    }
    let t = d
        .arrows()
        .iter()
        .map(|(_, _, f)| {
            let n = f.exceptions().len() as u64;
            f.exceptions().iter().map(|y| y + 1).max().unwrap_or(0).max(n)
        })
        .max()
        .unwrap_or(0);
    let width = t as usize;
    let mut parent: Vec<usize> = (0..d.len() * width).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for (s, r, f) in d.arrows() {
        for x in 0..t {
            let a = find(&mut parent, s * width + x as usize);
            let b = find(&mut parent, r * width + f.apply(x) as usize);
            let (lo, hi) = (a.min(b), a.max(b));
            parent[hi] = lo;
        }
    }
    // Roots are least members, so numbering them in order sorts classes by least member.
    let mut index: HashMap<usize, u64> = HashMap::new();
    for p in 0..parent.len() {
        let root = find(&mut parent, p);
        let next = index.len() as u64;
        index.entry(root).or_insert(next);
    }
    let m = index.len() as u64;
    let legs = (0..d.len())
        .map(|i| {
            let head = (0..width).map(|x| index[&find(&mut parent, i * width + x)]).collect();
            SymMap::new(head, 1, m as i64 - t as i64).expect("tail stays above the head classes")
        })
        .collect();
    Ok(SetColimit { head_classes: m, legs })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainStep {
    pub object: String,
    /// The entourage used, or the family of entourages for band structures.
    pub entourage: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SymWitness {
    /// Starting point in the set colimit.
    pub point: u64,
    /// Object whose leg pulls the thickened set back to an unbounded set.
    pub object: String,
    pub chain: Vec<ChainStep>,
    /// The unbounded preimage: for band steps, the union over all radii.
    pub preimage: SemilinearSet,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SymAdmissibility {
    pub admissible: bool,
    pub witness: Option<SymWitness>,
    pub points_checked: u64,
    pub states_explored: usize,
}

/// The family of sets reachable from `{b}` by one choice of entourages along
/// a fixed chain, summarized by whether all of them are finite and by their
/// union.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct State {
    all_finite: bool,
    union: SemilinearSet,
}

/// One thickening step through object `i` with leg `g`.
///
/// Per structure: `Diag` keeps each set; `Full` sends every set meeting the
/// image of `g` to that whole image; `FinGen` has a largest entourage, which
/// adds finitely many points; a band of any radius keeps finite sets finite
/// and infinite sets infinite, while the union over all radii of thickenings
/// of a nonempty set is everything. Legs are injective on tails, so a set is
/// finite iff its preimage under a leg is.
fn step(state: &State, coarse: &Coarse, g: &SymMap) -> State {
    let pre = state.union.preimage(g);
    match coarse {
        Coarse::Diag => State {
            all_finite: state.all_finite,
            union: pre.image(g),
        },
        Coarse::Full => State {
            all_finite: pre.is_empty(),
            union: coarse.saturate(&pre).image(g),
        },
        Coarse::Band | Coarse::FinGen(_) => State {
            all_finite: state.all_finite,
            union: coarse.saturate(&pre).image(g),
        },
    }
}

/// Whether the preimages under `g` of every member are bounded in `born`.
fn bounded(state: &State, born: &Born, g: &SymMap) -> Result<(), SemilinearSet> {
    let pre = state.union.preimage(g);
    let ok = match born {
        Born::Fin => state.all_finite,
        Born::All => true,
        Born::Triv | Born::FinCap(_) => born.contains(&pre),
    };
    if ok {
        Ok(())
    } else {
        Err(pre)
    }
}

fn describe(coarse: &Coarse) -> String {
    match coarse {
        Coarse::Diag => "Δ".into(),
        Coarse::Full => "ℕ×ℕ".into(),
        Coarse::Band => "U_r for every r".into(),
        Coarse::FinGen(classes) => format!("equivalence with classes {classes:?}"),
    }
}

/// Evaluates the colimit-admissibility criterion on a symbolic diagram.
///
/// For each starting point `b` of the set colimit, runs a breadth-first
/// search over the distinct states reachable by thickening steps and tests
/// every leg's preimage at every state. Points past all exceptions, finite
/// caps and finite generators behave alike, so checking up to the first such
/// point decides all of ℕ.
pub fn sym_admissible(d: &SymDiagram) -> Result<SymAdmissibility, SymError> {
    let colimit = set_colimit(d)?;
    let t = colimit.legs[0].exceptions().len() as u64;
    let generic = d
        .objects()
        .iter()
        .zip(&colimit.legs)
        .map(|(o, g)| g.apply(o.special_bound().max(t)))
        .max()
        .unwrap_or(0);
    let mut explored = 0;
    for b in 0..=generic {
        let start = State {
            all_finite: true,
            union: SemilinearSet::singleton(b),
        };
        let mut states = vec![(start.clone(), None::<(usize, usize)>)];
        let mut seen: HashMap<State, usize> = HashMap::from([(start, 0)]);
        let mut queue = VecDeque::from([0]);
        while let Some(s) = queue.pop_front() {
            explored += 1;
            let state = states[s].0.clone();
            for (k, (object, g)) in d.objects().iter().zip(&colimit.legs).enumerate() {
                if let Err(preimage) = bounded(&state, object.born(), g) {
                    let mut chain = Vec::new();
                    let mut at = s;
                    while let Some((parent, i)) = states[at].1 {
                        chain.push(ChainStep {
                            object: d.names()[i].clone(),
                            entourage: describe(d.objects()[i].coarse()),
                        });
                        at = parent;
                    }
                    chain.reverse();
                    return Ok(SymAdmissibility {
                        admissible: false,
                        witness: Some(SymWitness {
                            point: b,
                            object: d.names()[k].clone(),
                            chain,
                            preimage,
                        }),
                        points_checked: b + 1,
                        states_explored: explored,
                    });
                }
            }
            for (i, (object, g)) in d.objects().iter().zip(&colimit.legs).enumerate() {
                let next = step(&state, object.coarse(), g);
                if seen.contains_key(&next) {
                    continue;
                }
                if states.len() >= MAX_SYM_STATES {
                    return Err(SymError::CapExceeded {
                        what: "thickening states",
                        cap: MAX_SYM_STATES,
                    });
                }
                seen.insert(next.clone(), states.len());
                queue.push_back(states.len());
                states.push((next, Some((s, i))));
            }
        }
    }
    Ok(SymAdmissibility {
        admissible: true,
        witness: None,
        points_checked: generic + 1,
        states_explored: explored,
    })
}
