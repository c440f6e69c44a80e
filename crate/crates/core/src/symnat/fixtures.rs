//! The span `ℕ_min,min ← ℕ_min,max → ℕ_max,max` of identity maps and the
//! space it pushes out to.

use super::{Born, Coarse, SymDiagram, SymMap, SymSpace};

/// Minimal coarse structure, every set bounded.
pub fn n_min_max() -> SymSpace {
    SymSpace::new(Born::All, Coarse::Diag).expect("catalog pair")
}

/// Maximal coarse structure, every set bounded.
pub fn n_max_max() -> SymSpace {
    SymSpace::new(Born::All, Coarse::Full).expect("catalog pair")
}

/// Minimal coarse structure, finite sets bounded.
pub fn n_min_min() -> SymSpace {
    SymSpace::new(Born::Fin, Coarse::Diag).expect("catalog pair")
}

/// Maximal coarse structure, only the empty set bounded.
pub fn n_max_empty() -> SymSpace {
    SymSpace::new(Born::Triv, Coarse::Full).expect("catalog pair")
}

fn span() -> SymDiagram {
    SymDiagram::new(
        vec![
            ("N_min,max".into(), n_min_max()),
            ("N_max,max".into(), n_max_max()),
            ("N_min,min".into(), n_min_min()),
        ],
        vec![(0, 1, SymMap::identity()), (0, 2, SymMap::identity())],
    )
    .expect("identity maps are morphisms here")
}

/// The span whose colimit does not exist among classical spaces.
pub fn exa_n() -> SymDiagram {
    span()
}

/// The same span, whose generalized pushout is [`n_max_empty`].
pub fn ex_po() -> SymDiagram {
    span()
}

/// Looks a fixture up by name.
pub fn by_name(name: &str) -> Option<SymDiagram> {
    match name {
        "exa_N" => Some(exa_n()),
        "ex_PO" => Some(ex_po()),
        _ => None,
    }
}
