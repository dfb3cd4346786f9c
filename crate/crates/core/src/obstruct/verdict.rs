//! The component-by-component obstruction argument.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::groups::{check_multiplicities, group_data, required_vcd, GroupDescriptor};
use super::rules::{anosov_vcd_bound, BoundRule, VcdBound};
use crate::arrangement::{avoided_simple_roots, build_arrangement, components, iota_action, IsotropyInput};
use crate::error::Result;
use crate::rootsys::{parse_simple_root_label, simple_root_label};

/// A pair `(G, H)` with the data the obstruction argument needs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObstructionCase {
    pub name: String,
    /// Groups cases belonging to one parametrized family.
    pub series: String,
    pub g: GroupDescriptor,
    pub h: GroupDescriptor,
    pub isotropy: IsotropyInput,
    /// Bound rule per simple root label (`"alpha1"`, ...).
    #[serde(default)]
    pub rules: BTreeMap<String, BoundRule>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ObstructionStatus {
    NoCompactQuotients,
    NotObstructedByThisMethod,
}

impl std::fmt::Display for ObstructionStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ObstructionStatus::NoCompactQuotients => "NO_COMPACT_QUOTIENTS",
            ObstructionStatus::NotObstructedByThisMethod => "NOT_OBSTRUCTED_BY_THIS_METHOD",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComponentTrace {
    pub index: usize,
    pub interior_point: Vec<String>,
    pub avoided_roots: Vec<String>,
    /// Component containing `ι` of this one.
    pub iota_image: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RootBound {
    pub root: String,
    #[serde(flatten)]
    pub bound: VcdBound,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrbitTrace {
    pub components: Vec<usize>,
    /// Only `ι`-invariant components can hold a non-virtually-cyclic group.
    pub admissible: bool,
    pub candidates: Vec<RootBound>,
    /// Avoided roots with no configured rule.
    pub unruled_roots: Vec<String>,
    /// The largest candidate bound.
    pub chosen: Option<RootBound>,
    pub obstructed: bool,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ObstructionVerdict {
    pub case: String,
    pub series: String,
    pub g: String,
    pub h: String,
    pub system: String,
    pub required_vcd: u64,
    pub status: ObstructionStatus,
    pub components: Vec<ComponentTrace>,
    pub orbits: Vec<OrbitTrace>,
    pub reason: String,
}

/// Runs the argument: components of `a⁺ ∖ μ(H)` and their `ι`-orbits, a
/// forced Anosov root for each `ι`-invariant component, the largest
/// configured vcd bound over its avoided roots, and the comparison with
/// the required vcd.
pub fn obstruction_verdict(case: &ObstructionCase) -> Result<ObstructionVerdict> {
    let gd = group_data(&case.g)?;
    let hd = group_data(&case.h)?;
    check_multiplicities(&gd)?;
    check_multiplicities(&hd)?;
    let required = required_vcd(&case.g, &case.h)?;
    let sys = gd.root_system()?;
    let mut rules: BTreeMap<usize, &BoundRule> = BTreeMap::new();
    for (label, rule) in &case.rules {
        rules.insert(parse_simple_root_label(label, sys.rank())?, rule);
    }
    let spec = case.isotropy.resolve(&sys)?;
    let arr = build_arrangement(&sys, &spec)?;
    let mut verdict = ObstructionVerdict {
        case: case.name.clone(),
        series: case.series.clone(),
        g: gd.label.clone(),
        h: hd.label.clone(),
        system: sys.label(),
        required_vcd: required,
        status: ObstructionStatus::NotObstructedByThisMethod,
        components: vec![],
        orbits: vec![],
        reason: String::new(),
    };
    if arr.walls.iter().any(|w| !w.is_hyperplane()) {
        verdict.reason = "mu(H) is not cut out by hyperplanes; the component argument does not apply".into();
        return Ok(verdict);
    }
    let dec = components(&sys, &arr)?;
    let iota = iota_action(&sys, &arr, &dec)?;
    let mut avoided = Vec::with_capacity(dec.components.len());
    for (i, c) in dec.components.iter().enumerate() {
        let av = avoided_simple_roots(&sys, c)?;
        verdict.components.push(ComponentTrace {
            index: i,
            interior_point: c.interior_point.iter().map(ToString::to_string).collect(),
            avoided_roots: av.iter().map(|&j| simple_root_label(j)).collect(),
            iota_image: iota.permutation[i],
        });
        avoided.push(av);
    }
    for orbit in &iota.orbits {
        let admissible = orbit.len() == 1;
        let mut trace = OrbitTrace {
            components: orbit.clone(),
            admissible,
            candidates: vec![],
            unruled_roots: vec![],
            chosen: None,
            obstructed: false,
            reason: String::new(),
        };
        if !admissible {
            trace.reason = "swapped by iota: holds only virtually cyclic groups".into();
            verdict.orbits.push(trace);
            continue;
        }
        for &j in &avoided[orbit[0]] {
            match rules.get(&j) {
                Some(rule) => trace
                    .candidates
                    .push(RootBound { root: simple_root_label(j), bound: anosov_vcd_bound(rule, &case.g, &gd)? }),
                None => trace.unruled_roots.push(simple_root_label(j)),
            }
        }
        trace.chosen = trace.candidates.iter().fold(None, |best: Option<&RootBound>, c| match best {
            Some(b) if b.bound.vcd >= c.bound.vcd => Some(b),
            _ => Some(c),
        }).cloned();
        match &trace.chosen {
            None if avoided[orbit[0]].is_empty() => trace.reason = "component avoids no simple root".into(),
            None => trace.reason = "no bound rule for the avoided roots".into(),
            Some(b) => {
                trace.obstructed = b.bound.vcd < required;
                trace.reason = format!(
                    "vcd <= {} via {} on {} {} required {required}",
                    b.bound.vcd,
                    b.bound.rule,
                    b.root,
                    if trace.obstructed { "<" } else { ">=" }
                );
            }
        }
        verdict.orbits.push(trace);
    }
    let admissible: Vec<&OrbitTrace> = verdict.orbits.iter().filter(|o| o.admissible).collect();
    if required <= 1 {
        verdict.reason = format!("required vcd {required} allows virtually cyclic groups");
    } else if admissible.iter().all(|o| o.obstructed) {
        verdict.status = ObstructionStatus::NoCompactQuotients;
        verdict.reason = if admissible.is_empty() {
            "no iota-invariant component, so only virtually cyclic groups act properly".into()
        } else {
            "every iota-invariant component forces a vcd bound below the required value".into()
        };
    } else {
        verdict.reason = "some iota-invariant component is not obstructed".into();
    }
    Ok(verdict)
}
