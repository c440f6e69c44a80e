//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails.

use std::collections::HashSet;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use coarsecat::coarse_homotopy::{
    is_coarsely_excisive, is_flasque, is_nice, is_nice_fast, ExcisionFailure, DEFAULT_SEARCH_CAP,
};
use coarsecat::finite_space::{
    all_spaces_up_to, enumerate_morphisms, enumerate_spaces, tensor, validate_morphism, GbcSpace, Morphism, SpaceError,
};
use coarsecat::limits::{
    colimit, coproduct, exists_in_classical, limit, mutate::mutants, preservation_test, product,
    universal_property_check, Cone, Diagram, Side,
};
use coarsecat::relalg::{Carrier, PointMap, PointSet, Relation};
use coarsecat::symnat::{fixtures, sym_admissible, sym_pushout, truncate_diagram};

const SEED: u64 = 0x5eed;
const TEST_CAP: usize = 3;
const MUTANTS_PER_SHAPE: usize = 100;
const ARROW_DRAWS: usize = 3;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn main() -> ExitCode {
    type Criterion = (&'static str, Option<Duration>, fn() -> Outcome);
    let criteria: [Criterion; 10] = [
        (
            "normal-form soundness",
            Some(Duration::from_secs(120)),
            normal_form_soundness,
        ),
        (
            "universal-property oracle",
            Some(Duration::from_secs(300)),
            universal_property_oracle,
        ),
        ("final object", None, final_object),
        ("admissibility of the ℕ span", None, sym_span_admissibility),
        ("pushout of the ℕ span", None, sym_span_pushout),
        ("classical limits", None, classical_limits),
        ("bounded/unbounded split", None, split_isomorphism),
        ("flasque unbounded part and excision", None, flasque_and_excision),
        ("fast-path guards", Some(Duration::from_secs(180)), fast_path_guards),
        ("monoidal units", None, monoidal_units),
    ];
    let mut failed = 0;
    for (i, (name, budget, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let mut result = run();
        let elapsed = start.elapsed();
        if let Some(budget) = budget {
            if elapsed > *budget {
                result.pass = false;
                result
                    .detail
                    .push_str(&format!("; over the {}s budget", budget.as_secs()));
            }
        }
        let tag = if result.pass { "PASS" } else { "FAIL" };
        println!(
            "[{tag}] {:>2} {name}: {} ({:.1}s)",
            i + 1,
            result.detail,
            elapsed.as_secs_f64()
        );
        failed += usize::from(!result.pass);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

// Relations on at most four points as bitmasks, bit `i·n + j` for `(i, j)`.

fn bit(n: usize, i: usize, j: usize) -> u32 {
    1 << (i * n + j)
}

fn diagonal(n: usize) -> u32 {
    (0..n).map(|i| bit(n, i, i)).sum()
}

fn compose(n: usize, a: u32, b: u32) -> u32 {
    let mut out = 0;
    for i in 0..n {
        for j in 0..n {
            if a & bit(n, i, j) != 0 {
                for k in 0..n {
                    if b & bit(n, j, k) != 0 {
                        out |= bit(n, i, k);
                    }
                }
            }
        }
    }
    out
}

fn inverse(n: usize, a: u32) -> u32 {
    let mut out = 0;
    for i in 0..n {
        for j in 0..n {
            if a & bit(n, i, j) != 0 {
                out |= bit(n, j, i);
            }
        }
    }
    out
}

fn thicken(n: usize, u: u32, set: u32) -> u32 {
    let mut out = 0;
    for i in 0..n {
        for j in 0..n {
            if u & bit(n, i, j) != 0 && set >> j & 1 == 1 {
                out |= 1 << i;
            }
        }
    }
    out
}

fn submasks(mask: u32) -> impl Iterator<Item = u32> {
    let mut next = Some(mask);
    std::iter::from_fn(move || {
        let cur = next?;
        next = (cur != 0).then(|| (cur - 1) & mask);
        Some(cur)
    })
}

fn relation(c: &Carrier, m: u32) -> Relation {
    let n = c.len();
    Relation::from_pairs(
        c,
        (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|&(i, j)| m & bit(n, i, j) != 0),
    )
}

fn point_set(c: &Carrier, m: u32) -> PointSet {
    PointSet::from_indices(c, (0..c.len()).filter(|i| m >> i & 1 == 1))
}

/// Every relation reachable from `Δ` and the generators by union,
/// composition and inverse, as an explicit family.
fn coarse_family(n: usize, gens: &[u32]) -> Vec<u32> {
    let mut seen = vec![false; 1 << (n * n)];
    let mut family = Vec::new();
    let mut queue: Vec<u32> = gens.iter().copied().chain([diagonal(n)]).collect();
    while let Some(a) = queue.pop() {
        if std::mem::replace(&mut seen[a as usize], true) {
            continue;
        }
        family.push(a);
        queue.push(inverse(n, a));
        for &b in &family {
            queue.extend([a | b, compose(n, a, b), compose(n, b, a)]);
        }
    }
    family
}

/// The largest generated entourage by plain fixed-point iteration.
fn coarse_fixpoint(n: usize, gens: &[u32]) -> u32 {
    let mut m = gens.iter().fold(diagonal(n), |acc, g| acc | g);
    loop {
        let next = m | inverse(n, m) | compose(n, m, m);
        if next == m {
            return m;
        }
        m = next;
    }
}

/// Every bounded set generated by `gens` (and singletons when classical)
/// under finite unions and subsets.
fn born_family(n: usize, gens: &[u32], classical: bool) -> HashSet<u32> {
    let mut tops: Vec<u32> = gens.to_vec();
    if classical {
        tops.extend((0..n).map(|i| 1 << i));
    }
    let mut unions = HashSet::from([0u32]);
    for g in tops {
        let grown: Vec<u32> = unions.iter().map(|u| u | g).collect();
        unions.extend(grown);
    }
    unions.iter().flat_map(|&u| submasks(u)).collect()
}

fn generator_grid(n: usize) -> Vec<Vec<u32>> {
    let total = 1u32 << (n * n);
    let stride = match n {
        0..=2 => 1,
        3 => 7,
        _ => 211,
    };
    let pool: Vec<u32> = (0..total).step_by(stride).collect();
    let mut grid = vec![Vec::new()];
    for (i, &a) in pool.iter().enumerate() {
        grid.push(vec![a]);
        for &b in &pool[i + 1..] {
            grid.push(vec![a, b]);
        }
    }
    grid
}

fn normal_form_soundness() -> Outcome {
    let mut cases = 0usize;
    let mut rejected = 0usize;
    for n in 0..=4usize {
        let c = Carrier::range(n);
        let relations: Vec<Relation> = if n <= 3 {
            (0..1u32 << (n * n)).map(|m| relation(&c, m)).collect()
        } else {
            Vec::new()
        };
        let sets: Vec<PointSet> = (0..1u32 << n).map(|m| point_set(&c, m)).collect();
        for (k, gens) in generator_grid(n).into_iter().enumerate() {
            // Full family closure where it is small enough, fixed point otherwise.
            let (top, family) = if n <= 3 {
                let family = coarse_family(n, &gens);
                (family.iter().fold(0, |a, b| a | b), Some(family))
            } else {
                (coarse_fixpoint(n, &gens), None)
            };
            let a = (k as u32).wrapping_mul(37).wrapping_add(11) & ((1 << n) - 1);
            let b = (k as u32).wrapping_mul(101).wrapping_add(3) & ((1 << n) - 1);
            let saturate = |s: u32| thicken(n, top, s);
            let variants: [(Vec<u32>, bool); 3] = [
                (vec![a], false),
                (vec![saturate(a), saturate(b)], false),
                (vec![b], true),
            ];
            let coarse_gens: Vec<Relation> = gens.iter().map(|&g| relation(&c, g)).collect();
            for (born_gens, classical) in variants {
                cases += 1;
                let born = born_family(n, &born_gens, classical);
                let compatible = match &family {
                    Some(family) => family
                        .iter()
                        .all(|&u| born.iter().all(|&s| born.contains(&thicken(n, u, s)))),
                    None => born.iter().all(|&s| born.contains(&thicken(n, top, s))),
                };
                let born_sets: Vec<PointSet> = born_gens.iter().map(|&s| sets[s as usize].clone()).collect();
                let built = GbcSpace::from_generators(&c, &coarse_gens, &born_sets, classical, None);
                let space = match (built, compatible) {
                    (Ok(space), true) => space,
                    (Err(SpaceError::IncompatibleStructures { .. }), false) => {
                        rejected += 1;
                        continue;
                    }
                    (other, _) => {
                        return outcome(
                            false,
                            format!("n = {n}, generators {gens:?}, bornology {born_gens:?}: {other:?}"),
                        )
                    }
                };
                let probes: Vec<(u32, bool)> = match &family {
                    Some(family) => {
                        let members: HashSet<u32> = family.iter().flat_map(|&u| submasks(u)).collect();
                        (0..1u32 << (n * n)).map(|m| (m, members.contains(&m))).collect()
                    }
                    None => (0..n * n)
                        .map(|p| 1u32 << p)
                        .chain(gens.iter().copied())
                        .chain([top, diagonal(n), (1 << (n * n)) - 1])
                        .chain((0..16u32).map(|i| i.wrapping_mul(40503).wrapping_add(k as u32 * 97) & 0xffff))
                        .map(|m| (m, m & !top == 0))
                        .collect(),
                };
                for (m, expected) in probes {
                    let u = if n <= 3 {
                        relations[m as usize].clone()
                    } else {
                        relation(&c, m)
                    };
                    if space.entourage_member(&u).unwrap() != expected {
                        return outcome(
                            false,
                            format!("n = {n}, generators {gens:?}: entourage {m:#x} disagrees"),
                        );
                    }
                }
                for (m, s) in sets.iter().enumerate() {
                    if space.bounded_member(s).unwrap() != born.contains(&(m as u32)) {
                        return outcome(false, format!("n = {n}, bornology {born_gens:?}: set {m:#b} disagrees"));
                    }
                }
            }
        }
    }
    outcome(
        cases >= 10_000,
        format!("{cases} generator sets, {rejected} incompatible ones rejected, all memberships agree"),
    )
}

#[derive(Clone, Copy, Debug)]
enum Shape {
    Empty,
    Single,
    Pair,
    Parallel,
    Span,
    Cospan,
    Chain,
}

fn hom(x: &Arc<GbcSpace>, y: &Arc<GbcSpace>) -> Vec<Morphism> {
    enumerate_morphisms(x, y).expect("small spaces").collect()
}

/// Diagrams of one shape. Objects run over every ordered pair of spaces
/// (with a seeded third object where the shape needs one) and arrows are
/// drawn [`ARROW_DRAWS`] times with a seeded generator.
fn diagrams(shape: Shape, spaces: &[Arc<GbcSpace>], rng: &mut ChaCha8Rng) -> Vec<Diagram> {
    let pick = |homs: Vec<Morphism>, rng: &mut ChaCha8Rng| homs.choose(rng).cloned();
    let mut out = Vec::new();
    match shape {
        Shape::Empty => out.push(Diagram::empty()),
        Shape::Single => out.extend(spaces.iter().map(|x| Diagram::discrete(std::slice::from_ref(x)))),
        Shape::Pair => {
            for x in spaces {
                for y in spaces {
                    out.push(Diagram::discrete(&[x.clone(), y.clone()]));
                }
            }
        }
        _ => {
            for x in spaces {
                for y in spaces {
                    for _ in 0..ARROW_DRAWS {
                        let z = spaces.choose(rng).expect("nonempty").clone();
                        let d = match shape {
                            Shape::Parallel => pick(hom(x, y), rng)
                                .zip(pick(hom(x, y), rng))
                                .map(|(f, g)| Diagram::parallel(&f, &g)),
                            Shape::Span => pick(hom(x, y), rng)
                                .zip(pick(hom(x, &z), rng))
                                .map(|(f, g)| Diagram::span(&f, &g)),
                            Shape::Cospan => pick(hom(x, y), rng)
                                .zip(pick(hom(&z, y), rng))
                                .map(|(f, g)| Diagram::cospan(&f, &g)),
                            Shape::Chain => pick(hom(x, y), rng)
                                .zip(pick(hom(y, &z), rng))
                                .map(|(f, g)| Diagram::chain(&f, &g)),
                            _ => unreachable!(),
                        };
                        if let Some(d) = d {
                            out.push(d.expect("shapes match"));
                        }
                    }
                }
            }
        }
    }
    out
}

fn leg_maps(cone: &Cone) -> Vec<PointMap> {
    cone.legs.iter().map(|l| l.map().clone()).collect()
}

fn universal_property_oracle() -> Outcome {
    let spaces = all_spaces_up_to(3);
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let shapes = [
        Shape::Empty,
        Shape::Single,
        Shape::Pair,
        Shape::Parallel,
        Shape::Span,
        Shape::Cospan,
        Shape::Chain,
    ];
    let mut checked = 0usize;
    let mut notes = Vec::new();
    for shape in shapes {
        let mut pool = Vec::new();
        let ds = diagrams(shape, &spaces, &mut rng);
        for d in &ds {
            for side in [Side::Limit, Side::Colimit] {
                let cone = match side {
                    Side::Limit => limit(d).expect("small limit"),
                    Side::Colimit => colimit(d),
                };
                let verdict = universal_property_check(&cone.apex, &leg_maps(&cone), d, side, TEST_CAP).unwrap();
                if !verdict.is_pass() {
                    return outcome(false, format!("{shape:?} {side:?} of {:?}: {verdict:?}", d.names()));
                }
                checked += 1;
                if pool.len() < 4 * MUTANTS_PER_SHAPE {
                    pool.extend(mutants(&cone, side).into_iter().map(|m| (d.clone(), side, m)));
                }
            }
        }
        pool.shuffle(&mut rng);
        pool.truncate(MUTANTS_PER_SHAPE);
        for (d, side, m) in &pool {
            if universal_property_check(&m.apex, &m.legs, d, *side, TEST_CAP)
                .unwrap()
                .is_pass()
            {
                return outcome(
                    false,
                    format!("{shape:?} {side:?}: mutant `{}` survived", m.description),
                );
            }
        }
        notes.push(format!("{shape:?} {}/{}", ds.len(), pool.len()));
    }
    outcome(
        true,
        format!(
            "{checked} (co)limits pass, every sampled mutant fails [shape diagrams/mutants: {}]",
            notes.join(", ")
        ),
    )
}

fn final_object() -> Outcome {
    let apex = limit(&Diagram::empty()).unwrap().apex;
    if apex.len() != 1 || !apex.bounded().is_empty() {
        return outcome(false, "empty limit is not a single unbounded point");
    }
    let three: Vec<Arc<GbcSpace>> = enumerate_spaces(3).unwrap().map(Arc::new).collect();
    if three.len() != 22 {
        return outcome(false, format!("{} three-point spaces", three.len()));
    }
    if let Some(x) = three
        .iter()
        .find(|x| enumerate_morphisms(x, &apex).unwrap().count() != 1)
    {
        return outcome(false, format!("{:?} does not map uniquely to the empty limit", x));
    }
    let tests = all_spaces_up_to(3);
    let mut witnesses = Vec::new();
    for y in all_spaces_up_to(3).iter().filter(|y| y.is_classical()) {
        let found = tests
            .iter()
            .map(|t| (t, enumerate_morphisms(t, y).unwrap().count()))
            .find(|&(_, count)| count != 1);
        match found {
            Some((t, count)) => witnesses.push(format!("{} → {}: {count} maps", describe(t), describe(y))),
            None => return outcome(false, format!("classical {y:?} looks final")),
        }
    }
    outcome(
        true,
        format!(
            "22 three-point spaces map uniquely; {} classical candidates refuted ({})",
            witnesses.len(),
            witnesses.join(", ")
        ),
    )
}

/// Coarse classes, with bounded points marked `*`.
fn describe(x: &GbcSpace) -> String {
    let classes: Vec<String> = x
        .entourage()
        .classes()
        .iter()
        .map(|class| {
            class
                .iter()
                .map(|p| {
                    format!(
                        "{}{}",
                        x.carrier().name(p),
                        if x.bounded().contains(p) { "*" } else { "" }
                    )
                })
                .collect()
        })
        .collect();
    format!("[{}]", classes.join("|"))
}

fn sym_span_admissibility() -> Outcome {
    let d = fixtures::exa_n();
    let r = sym_admissible(&d).unwrap();
    let Some(w) = r.witness.filter(|_| !r.admissible) else {
        return outcome(false, "reported admissible");
    };
    if w.preimage.to_string() != "ℕ" {
        return outcome(false, format!("witness preimage {}", w.preimage));
    }
    const TRUNCATIONS: u64 = 12;
    for n in 0..TRUNCATIONS {
        let finite = truncate_diagram(&d, n).unwrap();
        if !coarsecat::limits::admissible(&finite).unwrap().admissible {
            return outcome(false, format!("truncation to [0, {n}] is not admissible"));
        }
    }
    outcome(
        true,
        format!(
            "not admissible, witness object {} with preimage ℕ; truncations [0, n], n < {TRUNCATIONS}, admissible",
            w.object
        ),
    )
}

fn sym_span_pushout() -> Outcome {
    let apex = sym_pushout(&fixtures::ex_po()).unwrap();
    let expected = fixtures::n_max_empty();
    outcome(apex == expected, format!("pushout {apex}, expected {expected}"))
}

fn classical_limits() -> Outcome {
    let classical: Vec<Arc<GbcSpace>> = all_spaces_up_to(3).into_iter().filter(|x| x.is_classical()).collect();
    let mut ds = vec![Diagram::empty()];
    for x in &classical {
        ds.push(Diagram::discrete(std::slice::from_ref(x)));
        for y in &classical {
            ds.push(Diagram::discrete(&[x.clone(), y.clone()]));
            let there = hom(x, y);
            let back = hom(y, x);
            for f in &there {
                ds.push(
                    Diagram::new(
                        vec![("x".into(), x.clone()), ("y".into(), y.clone())],
                        vec![(0, 1, f.clone())],
                    )
                    .unwrap(),
                );
                for g in &there {
                    ds.push(Diagram::parallel(f, g).unwrap());
                }
                for g in &back {
                    ds.push(
                        Diagram::new(
                            vec![("x".into(), x.clone()), ("y".into(), y.clone())],
                            vec![(0, 1, f.clone()), (1, 0, g.clone())],
                        )
                        .unwrap(),
                    );
                }
            }
        }
    }
    for d in &ds {
        let e = exists_in_classical(d, Side::Limit).unwrap();
        if e.exists == d.is_empty() {
            return outcome(false, format!("existence {} for {} objects", e.exists, d.len()));
        }
        if e.exists && !preservation_test(d, Side::Limit).unwrap().isomorphism {
            return outcome(false, format!("preservation fails for {:?}", d.names()));
        }
    }
    outcome(
        true,
        format!("{} diagrams; only the empty one has no classical limit", ds.len()),
    )
}

fn split_isomorphism() -> Outcome {
    let spaces = all_spaces_up_to(4);
    for x in &spaces {
        let s = x.split().unwrap();
        let there_and_back = s.to_coproduct.map().then(s.from_coproduct.map()).unwrap();
        let back_and_there = s.from_coproduct.map().then(s.to_coproduct.map()).unwrap();
        let ok = there_and_back == PointMap::identity(x.carrier())
            && back_and_there == PointMap::identity(s.coproduct.carrier())
            && validate_morphism(x, &s.coproduct, s.to_coproduct.map().clone()).is_ok()
            && validate_morphism(&s.coproduct, x, s.from_coproduct.map().clone()).is_ok()
            && s.bounded_part.bounded().is_full()
            && s.unbounded_part.bounded().is_empty();
        if !ok {
            return outcome(false, format!("split of {x:?}"));
        }
    }
    outcome(
        true,
        format!("{} spaces split into mutually inverse morphisms", spaces.len()),
    )
}

fn flasque_and_excision() -> Outcome {
    let spaces = all_spaces_up_to(4);
    for x in &spaces {
        let s = x.split().unwrap();
        let h = &s.unbounded_part;
        if !is_flasque(h, Some(&Morphism::identity(h)), DEFAULT_SEARCH_CAP)
            .unwrap()
            .flasque
        {
            return outcome(false, format!("unbounded part of {x:?} is not flasque"));
        }
        let v = is_coarsely_excisive(x, x.bounded(), &x.unbounded()).unwrap();
        if !v.excisive {
            return outcome(false, format!("{x:?}: {:?}", v.failure));
        }
    }
    let small = all_spaces_up_to(3);
    for a in &small {
        for b in &small {
            let cone = coproduct(&[a.clone(), b.clone()]);
            let v = is_coarsely_excisive(&cone.apex, &cone.legs[0].map().range(), &cone.legs[1].map().range()).unwrap();
            if !v.excisive {
                return outcome(false, format!("coproduct of {a:?} and {b:?}: {:?}", v.failure));
            }
        }
    }
    outcome(
        true,
        format!(
            "{} spaces, {} coproduct summand pairs excisive",
            spaces.len(),
            small.len() * small.len()
        ),
    )
}

fn fast_path_guards() -> Outcome {
    let spaces = all_spaces_up_to(3);
    let (mut nice_cases, mut excision_cases) = (0usize, 0usize);
    for x in &spaces {
        let n = x.len();
        let c = x.carrier();
        let e: u32 = x.entourage().pairs().map(|(i, j)| bit(n, i, j)).sum();
        let entourages: Vec<u32> = submasks(e).collect();
        for a in 0..1u32 << n {
            let set = point_set(c, a);
            let full = is_nice(x, &set).unwrap();
            let fast = is_nice_fast(x, &set).unwrap();
            if !full.exhaustive || full.nice != fast.nice {
                return outcome(false, format!("niceness of {:?} in {x:?}", set.names()));
            }
            nice_cases += 1;
        }
        let everything = (1u32 << n) - 1;
        for y in 0..1u32 << n {
            for z in submasks(everything).filter(|z| (y | z) == everything) {
                let target = entourages.iter().fold(0, |acc, &w| acc | thicken(n, w, y & z));
                let ty: Vec<u32> = entourages.iter().map(|&u| thicken(n, u, y)).collect();
                let tz: Vec<u32> = entourages.iter().map(|&v| thicken(n, v, z)).collect();
                let holds = ty.iter().all(|&u| tz.iter().all(|&v| u & v & !target == 0));
                let v = is_coarsely_excisive(x, &point_set(c, y), &point_set(c, z)).unwrap();
                let fast_fails = matches!(v.failure, Some(ExcisionFailure::ThickeningsEscape { .. }));
                if holds == fast_fails {
                    return outcome(false, format!("thickening condition for {y:#b}, {z:#b} in {x:?}"));
                }
                excision_cases += 1;
            }
        }
    }
    outcome(
        true,
        format!("{nice_cases} niceness and {excision_cases} excision cases agree with full quantification"),
    )
}

fn is_isomorphism(f: &Morphism) -> bool {
    f.map()
        .inverse()
        .is_some_and(|inv| validate_morphism(f.cod(), f.dom(), inv).is_ok())
}

fn monoidal_units() -> Outcome {
    let point = Arc::new(GbcSpace::min_min(&Carrier::range(1)));
    let unbounded = Arc::new(GbcSpace::final_object());
    let spaces = all_spaces_up_to(3);
    for x in &spaces {
        let t = Arc::new(tensor(x, &point));
        let projection = PointMap::new(t.carrier(), x.carrier(), (0..x.len()).collect()).unwrap();
        let tensor_ok = validate_morphism(&t, x, projection).is_ok_and(|f| is_isomorphism(&f));
        let p = product(&[x.clone(), unbounded.clone()]).unwrap();
        let product_ok = p.apex.len() == x.len() && is_isomorphism(&p.legs[0]);
        if !tensor_ok || !product_ok {
            return outcome(
                false,
                format!("{x:?}: tensor unit {tensor_ok}, product unit {product_ok}"),
            );
        }
    }
    outcome(true, format!("{} spaces", spaces.len()))
}
