use std::collections::HashSet;
use std::sync::Arc;

use super::LimitError;
use crate::finite_space::{GbcSpace, Morphism};

#[derive(Clone, Debug)]
pub struct Arrow {
    pub src: usize,
    pub dst: usize,
    pub morphism: Morphism,
}

/// A finite quiver labelled by spaces and equivariant morphisms.
///
/// Cones are required to commute over the listed arrows only, so this is a
/// diagram on the free category of the quiver.
#[derive(Clone, Debug)]
pub struct Diagram {
    names: Vec<String>,
    objects: Vec<Arc<GbcSpace>>,
    arrows: Vec<Arrow>,
}

impl Diagram {
    pub fn new(
        objects: Vec<(String, Arc<GbcSpace>)>,
        arrows: Vec<(usize, usize, Morphism)>,
    ) -> Result<Self, LimitError> {
        let mut seen = HashSet::new();
        for (name, _) in &objects {
            if !seen.insert(name.as_str()) {
                return Err(LimitError::DuplicateObject(name.clone()));
            }
        }
        let (names, objects): (Vec<_>, Vec<_>) = objects.into_iter().unzip();
        let mut checked = Vec::with_capacity(arrows.len());
        for (i, (src, dst, morphism)) in arrows.into_iter().enumerate() {
            for object in [src, dst] {
                if object >= objects.len() {
                    return Err(LimitError::UnknownObject { arrow: i, object });
                }
            }
            if **morphism.dom() != *objects[src] {
                return Err(LimitError::ArrowMismatch {
                    arrow: i,
                    which: "domain",
                });
            }
            if **morphism.cod() != *objects[dst] {
                return Err(LimitError::ArrowMismatch {
                    arrow: i,
                    which: "codomain",
                });
            }
            if !morphism.is_equivariant() {
                return Err(LimitError::NotEquivariant(i));
            }
            checked.push(Arrow { src, dst, morphism });
        }
        Ok(Diagram {
            names,
            objects,
            arrows: checked,
        })
    }

    pub fn empty() -> Self {
        Diagram {
            names: Vec::new(),
            objects: Vec::new(),
            arrows: Vec::new(),
        }
    }

    /// Objects named `0, 1, ...` with no arrows.
    pub fn discrete(spaces: &[Arc<GbcSpace>]) -> Self {
        Diagram {
            names: (0..spaces.len()).map(|i| i.to_string()).collect(),
            objects: spaces.to_vec(),
            arrows: Vec::new(),
        }
    }

    /// `f, g : 0 ⇉ 1`.
    pub fn parallel(f: &Morphism, g: &Morphism) -> Result<Self, LimitError> {
        Diagram::new(
            indexed(vec![f.dom().clone(), f.cod().clone()]),
            vec![(0, 1, f.clone()), (0, 1, g.clone())],
        )
    }

    /// `1 ← 0 → 2`.
    pub fn span(f: &Morphism, g: &Morphism) -> Result<Self, LimitError> {
        Diagram::new(
            indexed(vec![f.dom().clone(), f.cod().clone(), g.cod().clone()]),
            vec![(0, 1, f.clone()), (0, 2, g.clone())],
        )
    }

    /// `0 → 2 ← 1`.
    pub fn cospan(f: &Morphism, g: &Morphism) -> Result<Self, LimitError> {
        Diagram::new(
            indexed(vec![f.dom().clone(), g.dom().clone(), f.cod().clone()]),
            vec![(0, 2, f.clone()), (1, 2, g.clone())],
        )
    }

    /// `0 → 1 → 2`.
    pub fn chain(f: &Morphism, g: &Morphism) -> Result<Self, LimitError> {
        Diagram::new(
            indexed(vec![f.dom().clone(), f.cod().clone(), g.cod().clone()]),
            vec![(0, 1, f.clone()), (1, 2, g.clone())],
        )
    }

    pub fn len(&self) -> usize {
        self.objects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.objects.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn objects(&self) -> &[Arc<GbcSpace>] {
        &self.objects
    }

    pub fn object(&self, i: usize) -> &Arc<GbcSpace> {
        &self.objects[i]
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    /// Whether the underlying undirected graph is connected (and nonempty).
    pub fn is_connected(&self) -> bool {
        if self.objects.is_empty() {
            return false;
        }
        let mut reached = vec![false; self.objects.len()];
        reached[0] = true;
        let mut changed = true;
        while changed {
            changed = false;
            for a in &self.arrows {
                if reached[a.src] != reached[a.dst] {
                    reached[a.src] = true;
                    reached[a.dst] = true;
                    changed = true;
                }
            }
        }
        reached.iter().all(|&r| r)
    }

    /// Name of the first object with an unbounded point, if any.
    pub fn first_nonclassical(&self) -> Option<&str> {
        self.objects
            .iter()
            .position(|o| !o.is_classical())
            .map(|i| self.names[i].as_str())
    }
}

fn indexed(spaces: Vec<Arc<GbcSpace>>) -> Vec<(String, Arc<GbcSpace>)> {
    spaces
        .into_iter()
        .enumerate()
        .map(|(i, s)| (i.to_string(), s))
        .collect()
}
