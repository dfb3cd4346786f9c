//! Analysis spec files: JSON in, a validated [`RunConfig`] out.
//!
//! A spec carries everything one run needs. Fields a subcommand does not
//! use are still validated and echoed. Matrices are row-major arrays whose
//! entries are integers or rational/decimal strings, or `[re, im]` pairs of
//! those for complex entries.

use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use cocompact_core::arrangement::{IsotropyInput, RationalInput, DEFAULT_CHAMBER_TOL};
use cocompact_core::cartan::{ExactBlock, Field, GroupElement, GroupSpec, DEFAULT_VALIDATION_TOL};
use cocompact_core::certify::{ScanConfig, DEFAULT_BALL_CAP, DEFAULT_DEDUP_TOL, DEFAULT_TAU_TOL};
use cocompact_core::obstruct::{load_catalog, parse_catalog, Catalog, BUILTIN_CATALOGS};
use cocompact_core::rational::{QVec, Q};
use cocompact_core::{Error as CoreError, FactorType, RootSystem};
use num::{Complex, Zero};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum GroupInput {
    Sl {
        n: usize,
        #[serde(default = "real_field")]
        field: FieldInput,
    },
    So {
        p: usize,
        q: usize,
    },
    Product {
        factors: Vec<GroupInput>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FieldInput {
    R,
    C,
    H,
}

fn real_field() -> FieldInput {
    FieldInput::R
}

impl GroupInput {
    pub fn to_spec(&self) -> GroupSpec {
        match self {
            GroupInput::Sl { n, field } => GroupSpec::sl(
                *n,
                match field {
                    FieldInput::R => Field::R,
                    FieldInput::C => Field::C,
                    FieldInput::H => Field::H,
                },
            ),
            GroupInput::So { p, q } => GroupSpec::so(*p, *q),
            GroupInput::Product { factors } => GroupSpec::Product(factors.iter().map(GroupInput::to_spec).collect()),
        }
    }
}

/// One matrix entry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EntryInput {
    Complex([RationalInput; 2]),
    Real(RationalInput),
}

pub type MatrixInput = Vec<Vec<EntryInput>>;

/// A generator: `matrix` for single-factor groups, `blocks` (one matrix per
/// factor) for products.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorInput {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<MatrixInput>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub blocks: Option<Vec<MatrixInput>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Arithmetic {
    /// Rational matrix products and exact ball deduplication.
    Exact,
    Float,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ToleranceInput {
    validation: Option<f64>,
    dedup: Option<f64>,
    chamber: Option<f64>,
    tau: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Tolerances {
    /// Group-relation residual accepted for generators.
    pub validation: f64,
    /// Relative distance under which float ball elements are merged.
    pub dedup: f64,
    /// Wall proximity for float chamber location.
    pub chamber: f64,
    /// Chamber-membership slack for the float `τ` gap.
    pub tau: f64,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScanInput {
    intercept_cap: Option<f64>,
    norm_floor: Option<f64>,
    zero_tol: Option<f64>,
    slope_floor: Option<f64>,
    stability_rel: Option<f64>,
    distance_thresholds: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecFile {
    name: Option<String>,
    group: Option<GroupInput>,
    #[serde(default)]
    generators: Vec<GeneratorInput>,
    #[serde(default)]
    symmetric: bool,
    arithmetic: Option<Arithmetic>,
    root_system: Option<Vec<FactorType>>,
    isotropy: Option<IsotropyInput>,
    theta: Option<Vec<String>>,
    radius: Option<u32>,
    cutoff: Option<f64>,
    #[serde(default)]
    jordan: bool,
    #[serde(default)]
    points: Vec<Vec<RationalInput>>,
    samples: Option<usize>,
    catalog: Option<String>,
    #[serde(default)]
    tolerances: ToleranceInput,
    #[serde(default)]
    scan: ScanInput,
    ball_cap: Option<usize>,
    seed: Option<u64>,
}

/// Command-line values that take precedence over the spec file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub radius: Option<u32>,
    /// Replaces the generator validation tolerance.
    pub tolerance: Option<f64>,
    pub seed: Option<u64>,
}

pub const DEFAULT_RADIUS: u32 = 10;
pub const DEFAULT_CUTOFF: f64 = 1.0;
pub const BUILTIN_PREFIX: &str = "builtin:";

/// The effective configuration of a run, echoed in every report.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub spec_file: String,
    pub name: Option<String>,
    pub group: Option<GroupInput>,
    pub generators: Vec<GeneratorInput>,
    pub symmetric: bool,
    pub arithmetic: Arithmetic,
    pub root_system: Option<Vec<FactorType>>,
    pub isotropy: Option<IsotropyInput>,
    pub theta: Option<Vec<String>>,
    pub radius: u32,
    pub cutoff: f64,
    pub jordan: bool,
    pub points: Vec<Vec<RationalInput>>,
    pub samples: usize,
    pub catalog: Option<String>,
    pub tolerances: Tolerances,
    pub scan: ScanConfig,
    pub ball_cap: usize,
    pub seed: u64,
    #[serde(skip)]
    pub resolved: Resolved,
}

/// Parsed objects behind the echoed fields.
#[derive(Debug, Clone, Default)]
pub struct Resolved {
    pub spec: Option<GroupSpec>,
    pub system: Option<RootSystem>,
    pub elements: Vec<(String, GroupElement)>,
    pub points: Vec<QVec>,
    pub catalog: Option<Catalog>,
}

fn positive(what: &str, x: f64) -> Result<f64> {
    if x.is_finite() && x > 0.0 {
        Ok(x)
    } else {
        bail!("{what} must be a positive finite number, got {x}")
    }
}

fn rationals(xs: &[RationalInput]) -> Result<QVec> {
    xs.iter().map(|x| x.value().map_err(anyhow::Error::from)).collect()
}

fn exact_block(m: &MatrixInput) -> Result<ExactBlock> {
    let complex = m.iter().flatten().any(|e| matches!(e, EntryInput::Complex(_)));
    if complex {
        let rows = m
            .iter()
            .map(|row| {
                row.iter()
                    .map(|e| match e {
                        EntryInput::Real(x) => Ok(Complex::new(x.value()?, Q::zero())),
                        EntryInput::Complex([re, im]) => Ok(Complex::new(re.value()?, im.value()?)),
                    })
                    .collect::<Result<Vec<_>, CoreError>>()
            })
            .collect::<Result<Vec<_>, CoreError>>()?;
        Ok(ExactBlock::Complex(rows))
    } else {
        let rows = m
            .iter()
            .map(|row| {
                row.iter()
                    .map(|e| match e {
                        EntryInput::Real(x) => x.value(),
                        EntryInput::Complex(_) => unreachable!(),
                    })
                    .collect::<Result<Vec<_>, CoreError>>()
            })
            .collect::<Result<Vec<_>, CoreError>>()?;
        Ok(ExactBlock::Real(rows))
    }
}

fn build_generator(spec: &GroupSpec, index: usize, g: &GeneratorInput, tol: f64, arith: Arithmetic) -> Result<(String, GroupElement)> {
    let name = g.name.clone().unwrap_or_else(|| format!("g{index}"));
    let label = format!("generator {index} ({name})");
    let matrices: Vec<&MatrixInput> = match (&g.matrix, &g.blocks) {
        (Some(m), None) => vec![m],
        (None, Some(bs)) => bs.iter().collect(),
        _ => bail!("{label}: give exactly one of `matrix` and `blocks`"),
    };
    let exact = matrices.into_iter().map(exact_block).collect::<Result<Vec<_>>>().with_context(|| label.clone())?;
    let el = match GroupElement::from_exact(spec, exact, tol) {
        Ok(el) => el,
        Err(CoreError::Validation { relation, residual, tolerance }) => {
            bail!("{label} fails validation: {relation} has residual {residual:?} above tolerance {tolerance:?}")
        }
        Err(e) => return Err(anyhow!(e).context(label)),
    };
    let el = match arith {
        Arithmetic::Exact => el,
        Arithmetic::Float => GroupElement { exact: None, ..el },
    };
    Ok((name, el))
}

fn resolve_catalog(reference: &str, base: &Path) -> Result<Catalog> {
    if let Some(name) = reference.strip_prefix(BUILTIN_PREFIX) {
        let (_, text) = BUILTIN_CATALOGS
            .iter()
            .find(|(n, _)| *n == name)
            .ok_or_else(|| anyhow!("unknown builtin catalog {name:?}"))?;
        return Ok(parse_catalog(text)?);
    }
    let path: PathBuf = base.join(reference);
    if !path.is_file() {
        bail!("catalog file {} does not exist", path.display());
    }
    Ok(load_catalog(&path)?)
}

fn file_name(path: &Path) -> String {
    path.file_name().map_or_else(|| path.display().to_string(), |n| n.to_string_lossy().into_owned())
}

/// Reads, validates and completes a spec. A catalog file (an object with a
/// `cases` array) is accepted directly as a spec for `obstruction`.
pub fn parse_spec(path: &Path, overrides: &Overrides) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let value: serde_json::Value =
        serde_json::from_str(&text).with_context(|| format!("{} is not valid JSON", path.display()))?;
    let base = path.parent().unwrap_or(Path::new("."));
    if value.get("cases").is_some() {
        let catalog = parse_catalog(&text).with_context(|| format!("schema violation in {}", path.display()))?;
        let raw = SpecFile {
            name: None,
            group: None,
            generators: vec![],
            symmetric: false,
            arithmetic: None,
            root_system: None,
            isotropy: None,
            theta: None,
            radius: None,
            cutoff: None,
            jordan: false,
            points: vec![],
            samples: None,
            catalog: Some(file_name(path)),
            tolerances: ToleranceInput::default(),
            scan: ScanInput::default(),
            ball_cap: None,
            seed: None,
        };
        let mut cfg = complete(raw, path, base, overrides, false)?;
        cfg.resolved.catalog = Some(catalog);
        return Ok(cfg);
    }
    let raw: SpecFile =
        serde_json::from_value(value).map_err(|e| anyhow!("schema violation in {}: {e}", path.display()))?;
    complete(raw, path, base, overrides, true)
}

fn complete(raw: SpecFile, path: &Path, base: &Path, overrides: &Overrides, load_catalogs: bool) -> Result<RunConfig> {
    let defaults = ScanConfig::default();
    let tolerances = Tolerances {
        validation: positive(
            "tolerances.validation",
            overrides.tolerance.or(raw.tolerances.validation).unwrap_or(DEFAULT_VALIDATION_TOL),
        )?,
        dedup: positive("tolerances.dedup", raw.tolerances.dedup.unwrap_or(DEFAULT_DEDUP_TOL))?,
        chamber: positive("tolerances.chamber", raw.tolerances.chamber.unwrap_or(DEFAULT_CHAMBER_TOL))?,
        tau: positive("tolerances.tau", raw.tolerances.tau.unwrap_or(DEFAULT_TAU_TOL))?,
    };
    let s = raw.scan;
    let scan = ScanConfig {
        intercept_cap: s.intercept_cap.unwrap_or(defaults.intercept_cap),
        norm_floor: s.norm_floor.unwrap_or(defaults.norm_floor),
        zero_tol: positive("scan.zero_tol", s.zero_tol.unwrap_or(defaults.zero_tol))?,
        slope_floor: s.slope_floor.unwrap_or(defaults.slope_floor),
        stability_rel: s.stability_rel.unwrap_or(defaults.stability_rel),
        distance_thresholds: s.distance_thresholds.unwrap_or(defaults.distance_thresholds),
    };
    if !(scan.intercept_cap >= 0.0 && scan.intercept_cap.is_finite()) {
        bail!("scan.intercept_cap must be finite and nonnegative");
    }
    if !(0.0..1.0).contains(&scan.stability_rel) {
        bail!("scan.stability_rel must lie in [0, 1)");
    }
    let cutoff = positive("cutoff", raw.cutoff.unwrap_or(DEFAULT_CUTOFF))?;
    let arithmetic = raw.arithmetic.unwrap_or(Arithmetic::Exact);

    let mut resolved = Resolved::default();
    match (&raw.group, &raw.root_system) {
        (Some(_), Some(_)) => bail!("give either `group` or `root_system`, not both"),
        (Some(g), None) => {
            let spec = g.to_spec();
            resolved.system = Some(spec.root_system().context("group")?);
            resolved.spec = Some(spec);
        }
        (None, Some(factors)) => resolved.system = Some(RootSystem::product(factors).context("root_system")?),
        (None, None) => {}
    }
    if !raw.generators.is_empty() {
        let spec = resolved.spec.as_ref().ok_or_else(|| anyhow!("generators need a `group`"))?;
        for (i, g) in raw.generators.iter().enumerate() {
            resolved.elements.push(build_generator(spec, i, g, tolerances.validation, arithmetic)?);
        }
    }
    for (i, p) in raw.points.iter().enumerate() {
        let v = rationals(p).with_context(|| format!("point {i}"))?;
        if let Some(sys) = &resolved.system {
            if v.len() != sys.ambient_dim() {
                bail!("point {i} has {} coordinates, the system needs {}", v.len(), sys.ambient_dim());
            }
            if !sys.in_a(&v) {
                bail!("point {i} does not lie in the Cartan subspace of {}", sys.label());
            }
        }
        resolved.points.push(v);
    }
    if let (Some(iso), Some(sys)) = (&raw.isotropy, &resolved.system) {
        iso.resolve(sys).context("isotropy")?;
    }
    if let (Some(theta), Some(sys)) = (&raw.theta, &resolved.system) {
        for l in theta {
            cocompact_core::rootsys::parse_simple_root_label(l, sys.rank()).context("theta")?;
        }
    }
    if load_catalogs {
        if let Some(reference) = &raw.catalog {
            resolved.catalog = Some(resolve_catalog(reference, base)?);
        }
    }
    Ok(RunConfig {
        spec_file: file_name(path),
        name: raw.name,
        group: raw.group,
        generators: raw.generators,
        symmetric: raw.symmetric,
        arithmetic,
        root_system: raw.root_system,
        isotropy: raw.isotropy,
        theta: raw.theta,
        radius: overrides.radius.or(raw.radius).unwrap_or(DEFAULT_RADIUS),
        cutoff,
        jordan: raw.jordan,
        points: raw.points,
        samples: raw.samples.unwrap_or(0),
        catalog: raw.catalog,
        tolerances,
        scan,
        ball_cap: raw.ball_cap.unwrap_or(DEFAULT_BALL_CAP),
        seed: overrides.seed.or(raw.seed).unwrap_or(0),
        resolved,
    })
}
