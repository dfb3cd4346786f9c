//! Fixtures shared by the benchmarks.

use cocompact_core::arrangement::{build_arrangement, IsotropySpec, WallArrangement};
use cocompact_core::cartan::{Field, GroupElement, GroupSpec};
use cocompact_core::certify::GeneratorSet;
use cocompact_core::rational::{q, qf, qvec};
use cocompact_core::{Family, RootSystem};

pub fn sl(n: usize) -> GroupSpec {
    GroupSpec::sl(n, Field::R)
}

/// `⟨diag(2, 2, 1/4)⟩` in `SL(3,R)`.
pub fn sharp_cyclic() -> GeneratorSet {
    let spec = sl(3);
    let g = GroupElement::rational(&spec, vec![qvec(&[2, 0, 0]), qvec(&[0, 2, 0]), vec![q(0), q(0), qf(1, 4)]])
        .expect("diagonal element validates");
    GeneratorSet::lettered(&spec, vec![g], false).expect("generator set")
}

/// The line `span(1, −1, 0)` in the `A_2` Cartan subspace.
pub fn line_arrangement() -> (RootSystem, WallArrangement) {
    let sys = RootSystem::reduced(Family::A, 2).expect("A2");
    let arr = build_arrangement(&sys, &IsotropySpec::Subspace(vec![qvec(&[1, -1, 0])])).expect("arrangement");
    (sys, arr)
}

/// A free Schottky pair in `SL(2,R)`, exact or float.
pub fn schottky(exact: bool) -> GeneratorSet {
    let spec = sl(2);
    let mats = [vec![qvec(&[5, 2]), qvec(&[2, 1])], vec![qvec(&[5, -2]), qvec(&[-2, 1])]];
    let gens = mats
        .into_iter()
        .map(|m| {
            let g = GroupElement::rational(&spec, m).expect("Schottky generator validates");
            if exact {
                g
            } else {
                GroupElement { exact: None, ..g }
            }
        })
        .collect();
    GeneratorSet::lettered(&spec, gens, false).expect("generator set")
}
