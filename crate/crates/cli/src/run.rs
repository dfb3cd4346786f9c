//! One function per subcommand, each turning a [`RunConfig`] into a
//! [`Report`].

use anyhow::{anyhow, bail, Context, Result};
use cocompact_core::arrangement::{
    avoided_simple_roots, build_arrangement, components, iota_action, ChamberDecomposition, IotaAction, Location,
    WallArrangement,
};
use cocompact_core::cartan::{self, GroupSpec, DEFAULT_JORDAN_POWER_EXP};
use cocompact_core::certify::{
    anosov_scan, component_consistency, enumerate_ball, limit_cone, sharpness_anosov_crosscheck, sharpness_scan,
    tau_gap_exact, BallConfig, GeneratorSet, TauGapData, WordBall,
};
use cocompact_core::obstruct::{obstruction_verdict, ObstructionStatus, ObstructionVerdict};
use cocompact_core::rational::{self, QVec, Q};
use cocompact_core::rootsys::{parse_simple_root_label, simple_root_label};
use cocompact_core::RootSystem;
use num::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use crate::config::RunConfig;
use crate::report::{num, Report, Table};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::Subcommand)]
pub enum Command {
    /// Cartan projection of every generator.
    Mu,
    /// Jordan projection of every generator, with the power-sequence check.
    Jordan,
    /// Word ball with the Cartan projection of each element.
    Ball,
    /// Sharpness scan against the isotropy arrangement.
    Sharpness,
    /// Anosov scan for the roots in `theta`.
    Anosov,
    /// Finite-radius limit cone estimate.
    LimitCone,
    /// Components of the chamber minus the arrangement and their iota action.
    Chambers,
    /// Exact tau gap at given points, or the cross-check on a word ball.
    TauGap,
    /// Compact-quotient obstruction verdicts for a case catalog.
    Obstruction,
    /// Divergence of the vector field X_a at given or sampled points.
    Divxa,
}

impl Command {
    pub const ALL: [Command; 10] = [
        Command::Mu,
        Command::Jordan,
        Command::Ball,
        Command::Sharpness,
        Command::Anosov,
        Command::LimitCone,
        Command::Chambers,
        Command::TauGap,
        Command::Obstruction,
        Command::Divxa,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Mu => "mu",
            Command::Jordan => "jordan",
            Command::Ball => "ball",
            Command::Sharpness => "sharpness",
            Command::Anosov => "anosov",
            Command::LimitCone => "limit-cone",
            Command::Chambers => "chambers",
            Command::TauGap => "tau-gap",
            Command::Obstruction => "obstruction",
            Command::Divxa => "divxa",
        }
    }
}

pub fn run(command: Command, cfg: &RunConfig) -> Result<Report> {
    let name = command.name();
    match command {
        Command::Mu => mu(cfg),
        Command::Jordan => jordan(cfg),
        Command::Ball => ball(cfg),
        Command::Sharpness => sharpness(cfg),
        Command::Anosov => anosov(cfg),
        Command::LimitCone => cone(cfg),
        Command::Chambers => chambers(cfg),
        Command::TauGap => tau(cfg),
        Command::Obstruction => obstruction(cfg),
        Command::Divxa => divxa(cfg),
    }
    .with_context(|| format!("{name} failed"))
}

fn group(cfg: &RunConfig) -> Result<(&GroupSpec, &RootSystem)> {
    match (&cfg.resolved.spec, &cfg.resolved.system) {
        (Some(g), Some(s)) => Ok((g, s)),
        _ => bail!("this subcommand needs a `group`"),
    }
}

fn system(cfg: &RunConfig) -> Result<&RootSystem> {
    cfg.resolved.system.as_ref().ok_or_else(|| anyhow!("this subcommand needs a `group` or a `root_system`"))
}

fn generators(cfg: &RunConfig) -> Result<&[(String, cartan::GroupElement)]> {
    if cfg.resolved.elements.is_empty() {
        bail!("this subcommand needs at least one generator");
    }
    Ok(&cfg.resolved.elements)
}

fn word_ball(cfg: &RunConfig) -> Result<WordBall> {
    let (spec, _) = group(cfg)?;
    let gens = GeneratorSet::new(spec, generators(cfg)?.to_vec(), cfg.symmetric)?;
    let ball_cfg = BallConfig { cap: cfg.ball_cap, dedup_tol: cfg.tolerances.dedup };
    Ok(enumerate_ball(&gens, cfg.radius, &ball_cfg)?)
}

fn arrangement(cfg: &RunConfig) -> Result<WallArrangement> {
    let sys = system(cfg)?;
    let iso = cfg.isotropy.as_ref().ok_or_else(|| anyhow!("this subcommand needs an `isotropy`"))?;
    Ok(build_arrangement(sys, &iso.resolve(sys)?)?)
}

fn theta(cfg: &RunConfig, sys: &RootSystem) -> Result<Vec<usize>> {
    let labels = cfg.theta.as_ref().ok_or_else(|| anyhow!("this subcommand needs `theta`"))?;
    Ok(labels.iter().map(|l| parse_simple_root_label(l, sys.rank())).collect::<Result<_, _>>()?)
}

fn strings(v: &[Q]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

fn coord_header(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{prefix}_{i}")).collect()
}

fn table(name: &str, fixed: &[&str], coords: &[(&str, usize)], tail: &[&str]) -> Table {
    let mut t = Table::new(name, fixed);
    for (prefix, n) in coords {
        t.header.extend(coord_header(prefix, *n));
    }
    t.header.extend(tail.iter().map(|s| s.to_string()));
    t
}

fn mu(cfg: &RunConfig) -> Result<Report> {
    let (spec, sys) = group(cfg)?;
    let n = sys.ambient_dim();
    let mut t = table("", &["name"], &[("mu", n)], &["norm"]);
    let mut rows = Vec::new();
    for (name, g) in generators(cfg)? {
        let m = cartan::mu(spec, g)?;
        let mut row = vec![name.clone()];
        row.extend(m.coords.iter().map(|&x| num(x)));
        row.push(num(m.norm()));
        t.push(row);
        rows.push(json!({"name": name, "mu": m.coords, "norm": m.norm()}));
    }
    Report::new("mu", cfg, json!({"system": sys.label(), "elements": rows}), vec![t])
}

fn jordan(cfg: &RunConfig) -> Result<Report> {
    let (spec, sys) = group(cfg)?;
    let n = sys.ambient_dim();
    let mut t = table("", &["name"], &[("lambda", n)], &["power_fallback", "final_residual"]);
    let mut rows = Vec::new();
    for (name, g) in generators(cfg)? {
        let j = cartan::jordan_checked(spec, g, DEFAULT_JORDAN_POWER_EXP)?;
        let last = j.residuals.last().map_or(0.0, |r| r.1);
        let mut row = vec![name.clone()];
        row.extend(j.lambda.coords.iter().map(|&x| num(x)));
        row.push(j.power_fallback.to_string());
        row.push(num(last));
        t.push(row);
        rows.push(json!({
            "name": name,
            "lambda": j.lambda.coords,
            "power_fallback": j.power_fallback,
            "residuals": j.residuals,
        }));
    }
    Report::new("jordan", cfg, json!({"system": sys.label(), "elements": rows}), vec![t])
}

fn sphere_sizes(ball: &WordBall) -> Vec<usize> {
    let mut sizes = vec![0; ball.radius as usize + 1];
    for e in &ball.entries {
        sizes[e.length as usize] += 1;
    }
    sizes
}

fn ball(cfg: &RunConfig) -> Result<Report> {
    let (_, sys) = group(cfg)?;
    let b = word_ball(cfg)?;
    let mut t = table("", &["index", "length", "word"], &[("mu", sys.ambient_dim())], &["norm"]);
    let mut entries = Vec::new();
    for (i, e) in b.entries.iter().enumerate() {
        let word = b.word_string(e);
        let mut row = vec![i.to_string(), e.length.to_string(), word.clone()];
        row.extend(e.mu.coords.iter().map(|&x| num(x)));
        row.push(num(e.mu.norm()));
        t.push(row);
        entries.push(json!({"length": e.length, "word": word, "mu": e.mu.coords, "norm": e.mu.norm()}));
    }
    let result = json!({
        "system": sys.label(),
        "radius": b.radius,
        "size": b.entries.len(),
        "sphere_sizes": sphere_sizes(&b),
        "kappa": b.kappa,
        "entries": entries,
    });
    Report::new("ball", cfg, result, vec![t])
}

fn sharpness(cfg: &RunConfig) -> Result<Report> {
    let (_, sys) = group(cfg)?;
    let arr = arrangement(cfg)?;
    let b = word_ball(cfg)?;
    let r = sharpness_scan(&b, sys, &arr, &cfg.scan)?;
    let mut t = Table::new("", &["length", "norm", "distance"]);
    for s in &r.samples {
        t.push(vec![s.length.to_string(), num(s.norm), num(s.distance)]);
    }
    let mut g = Table::new("growth", &["threshold", "radius", "count"]);
    for row in &r.growth {
        for (radius, c) in row.counts.iter().enumerate() {
            g.push(vec![num(row.threshold), radius.to_string(), c.to_string()]);
        }
    }
    let result = json!({
        "system": sys.label(),
        "walls": arr.walls.len(),
        "ball_size": b.entries.len(),
        "verdict": r.verdict,
        "c": r.norm.fit.map(|f| f.slope),
        "c_prime": r.norm.fit.map(|f| f.intercept),
        "report": r,
    });
    Report::new("sharpness", cfg, result, vec![t, g])
}

fn anosov(cfg: &RunConfig) -> Result<Report> {
    let (_, sys) = group(cfg)?;
    let th = theta(cfg, sys)?;
    let b = word_ball(cfg)?;
    let r = anosov_scan(&b, sys, &th, &cfg.scan)?;
    let mut t = Table::new("", &["root", "length", "value"]);
    for rs in &r.roots {
        for (len, v) in &rs.samples {
            t.push(vec![rs.label.clone(), len.to_string(), num(*v)]);
        }
    }
    let per_root: Vec<_> = r.roots.iter().map(|rs| json!({"root": rs.label, "verdict": rs.judgement.verdict})).collect();
    let result = json!({
        "system": sys.label(),
        "ball_size": b.entries.len(),
        "verdict": r.verdict,
        "per_root": per_root,
        "report": r,
    });
    Report::new("anosov", cfg, result, vec![t])
}

fn cone(cfg: &RunConfig) -> Result<Report> {
    let (_, sys) = group(cfg)?;
    let arr = match cfg.isotropy {
        Some(_) => Some(arrangement(cfg)?),
        None => None,
    };
    let b = word_ball(cfg)?;
    let est = limit_cone(&b, sys, cfg.cutoff, arr.as_ref(), cfg.jordan)?;
    let n = sys.ambient_dim();
    let mut t = table("", &["index"], &[("direction", n)], &["count"]);
    for (i, (d, c)) in est.directions.iter().zip(&est.counts).enumerate() {
        let mut row = vec![i.to_string()];
        row.extend(d.iter().map(|&x| num(x)));
        row.push(c.to_string());
        t.push(row);
    }
    let result = json!({"system": sys.label(), "ball_size": b.entries.len(), "estimate": est});
    Report::new("limit-cone", cfg, result, vec![t])
}

#[derive(Serialize)]
struct ComponentOut {
    index: usize,
    interior_point: Vec<String>,
    sign_vector: Vec<i8>,
    facet_forms: Vec<Vec<String>>,
    avoided_roots: Vec<String>,
    iota_image: usize,
}

fn location_json(loc: &Location) -> serde_json::Value {
    match loc {
        Location::Component(i) => json!({"component": i}),
        Location::OnWall(w) => json!({"on_wall": w}),
        Location::Outside => json!("outside"),
    }
}

fn in_closed_chamber(sys: &RootSystem, u: &[Q]) -> bool {
    sys.simple_roots().iter().all(|a| !rational::dot(a, u).is_negative())
}

/// Random strictly dominant rational points `Σ c_i ω_i`, `c_i ∈ [1, 1000]`.
fn sample_dominant(sys: &RootSystem, count: usize, seed: u64) -> Result<Vec<QVec>> {
    let omegas = sys.fundamental_weights()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..count)
        .map(|_| {
            let mut u = rational::zeros(sys.ambient_dim());
            for w in &omegas {
                let c = rational::q(rng.random_range(1..=1000));
                u = rational::add(&u, &rational::scale(&c, w));
            }
            u
        })
        .collect())
}

fn decomposition(cfg: &RunConfig) -> Result<(WallArrangement, ChamberDecomposition, IotaAction)> {
    let sys = system(cfg)?;
    let arr = arrangement(cfg)?;
    let dec = components(sys, &arr)?;
    let iota = iota_action(sys, &arr, &dec)?;
    Ok((arr, dec, iota))
}

fn chambers(cfg: &RunConfig) -> Result<Report> {
    let sys = system(cfg)?;
    let (arr, dec, iota) = decomposition(cfg)?;
    let mut comps = Vec::new();
    let mut t = Table::new("", &["index", "interior_point", "avoided_roots", "iota_image", "iota_fixed"]);
    for (i, c) in dec.components.iter().enumerate() {
        let avoided: Vec<String> = avoided_simple_roots(sys, c)?.into_iter().map(simple_root_label).collect();
        t.push(vec![
            i.to_string(),
            strings(&c.interior_point).join(" "),
            avoided.join(" "),
            iota.permutation[i].to_string(),
            (iota.permutation[i] == i).to_string(),
        ]);
        comps.push(ComponentOut {
            index: i,
            interior_point: strings(&c.interior_point),
            sign_vector: c.sign_vector.clone(),
            facet_forms: c.facet_forms.iter().map(|f| strings(f)).collect(),
            avoided_roots: avoided,
            iota_image: iota.permutation[i],
        });
    }
    let walls: Vec<_> = arr
        .walls
        .iter()
        .map(|w| {
            json!({
                "hyperplane": w.is_hyperplane(),
                "form": w.form.as_ref().map(|f| strings(f)),
                "basis": w.basis.iter().map(|b| strings(b)).collect::<Vec<_>>(),
            })
        })
        .collect();
    let mut points = Vec::new();
    for (i, p) in cfg.resolved.points.iter().enumerate() {
        let loc = if in_closed_chamber(sys, p) { dec.locate(&arr, p) } else { Location::Outside };
        points.push(json!({"index": i, "point": strings(p), "location": location_json(&loc)}));
    }
    let sampling = if cfg.samples > 0 {
        let mut counts = vec![0usize; dec.components.len()];
        let mut on_wall = 0usize;
        for u in sample_dominant(sys, cfg.samples, cfg.seed)? {
            match dec.locate(&arr, &u) {
                Location::Component(k) => counts[k] += 1,
                _ => on_wall += 1,
            }
        }
        Some(json!({"samples": cfg.samples, "seed": cfg.seed, "per_component": counts, "on_wall": on_wall}))
    } else {
        None
    };
    let consistency = if cfg.resolved.elements.is_empty() {
        None
    } else {
        let b = word_ball(cfg)?;
        Some(component_consistency(&b, sys, &arr, &dec, &iota, cfg.scan.norm_floor, cfg.tolerances.chamber)?)
    };
    let result = json!({
        "system": sys.label(),
        "walls": walls,
        "effective_walls": dec.effective_walls,
        "components": comps,
        "iota_fixed": iota.fixed,
        "iota_orbits": iota.orbits,
        "points": points,
        "sampling": sampling,
        "consistency": consistency,
    });
    Report::new("chambers", cfg, result, vec![t])
}

fn tau(cfg: &RunConfig) -> Result<Report> {
    let sys = system(cfg)?;
    let (arr, dec, _) = decomposition(cfg)?;
    if cfg.resolved.points.is_empty() && cfg.resolved.elements.is_empty() {
        bail!("tau-gap needs `points` or `generators`");
    }
    let data: Vec<TauGapData> =
        dec.components.iter().map(|c| TauGapData::from_component(sys, c)).collect::<Result<_, _>>()?;
    let mut t = Table::new("", &["index", "point", "component", "tau_exact", "tau"]);
    let mut points = Vec::new();
    for (i, p) in cfg.resolved.points.iter().enumerate() {
        let mut hit = None;
        for (k, d) in data.iter().enumerate() {
            let g = tau_gap_exact(sys, d, p)?;
            if g.in_chamber {
                hit = Some((k, g.value));
                break;
            }
        }
        let (comp, exact) = match &hit {
            Some((k, v)) => (k.to_string(), v.to_string()),
            None => ("outside".to_string(), String::new()),
        };
        let float = hit.as_ref().map(|(_, v)| rational::to_f64(v));
        t.push(vec![i.to_string(), strings(p).join(" "), comp, exact.clone(), float.map_or(String::new(), num)]);
        points.push(json!({
            "index": i,
            "point": strings(p),
            "component": hit.as_ref().map(|(k, _)| k),
            "tau_exact": hit.as_ref().map(|_| exact),
            "tau": float,
        }));
    }
    let crosscheck = if cfg.resolved.elements.is_empty() {
        None
    } else {
        let b = word_ball(cfg)?;
        Some(sharpness_anosov_crosscheck(&b, sys, &arr, &data, &cfg.scan)?)
    };
    let mut tables = vec![t];
    if let Some(c) = &crosscheck {
        let mut s = Table::new("crosscheck", &["length", "norm", "distance", "tau", "component"]);
        for x in &c.samples {
            s.push(vec![x.length.to_string(), num(x.norm), num(x.distance), num(x.tau), x.chamber.to_string()]);
        }
        tables.push(s);
    }
    let result = json!({"system": sys.label(), "points": points, "crosscheck": crosscheck});
    Report::new("tau-gap", cfg, result, tables)
}

fn chosen_bounds(v: &ObstructionVerdict) -> Vec<String> {
    v.orbits
        .iter()
        .filter(|o| o.admissible)
        .map(|o| o.chosen.as_ref().map_or("-".to_string(), |c| format!("{}:{}", c.root, c.bound.vcd)))
        .collect()
}

fn obstruction(cfg: &RunConfig) -> Result<Report> {
    let catalog = cfg.resolved.catalog.as_ref().ok_or_else(|| anyhow!("obstruction needs a `catalog`"))?;
    let verdicts: Vec<ObstructionVerdict> = catalog
        .cases
        .iter()
        .map(|c| obstruction_verdict(c).with_context(|| format!("case {}", c.name)))
        .collect::<Result<_>>()?;
    let mut t = Table::new("", &["series", "case", "g", "h", "system", "required_vcd", "bounds", "status"]);
    for v in &verdicts {
        t.push(vec![
            v.series.clone(),
            v.case.clone(),
            v.g.clone(),
            v.h.clone(),
            v.system.clone(),
            v.required_vcd.to_string(),
            chosen_bounds(v).join(" "),
            v.status.to_string(),
        ]);
    }
    // series in order of first appearance
    let mut order: Vec<&str> = Vec::new();
    for v in &verdicts {
        if !order.contains(&v.series.as_str()) {
            order.push(&v.series);
        }
    }
    let mut r = Table::new("series", &["series", "cases", "status"]);
    let mut summary = Vec::new();
    for series in order {
        let members: Vec<&ObstructionVerdict> = verdicts.iter().filter(|v| v.series == series).collect();
        let status = if members.iter().all(|v| v.status == ObstructionStatus::NoCompactQuotients) {
            ObstructionStatus::NoCompactQuotients
        } else {
            ObstructionStatus::NotObstructedByThisMethod
        };
        r.push(vec![series.to_string(), members.len().to_string(), status.to_string()]);
        summary.push(json!({"series": series, "cases": members.iter().map(|v| &v.case).collect::<Vec<_>>(), "status": status}));
    }
    let result = json!({"description": catalog.description, "series": summary, "verdicts": verdicts});
    Report::new("obstruction", cfg, result, vec![t, r])
}

fn divxa(cfg: &RunConfig) -> Result<Report> {
    let sys = system(cfg)?;
    let mut inputs: Vec<(&str, usize, QVec)> =
        cfg.resolved.points.iter().enumerate().map(|(i, p)| ("point", i, p.clone())).collect();
    if cfg.samples > 0 {
        inputs.extend(sample_dominant(sys, cfg.samples, cfg.seed)?.into_iter().enumerate().map(|(i, p)| ("sample", i, p)));
    }
    if inputs.is_empty() {
        bail!("divxa needs `points` or `samples`");
    }
    let n = sys.ambient_dim();
    let mut t = table("", &["source", "index"], &[("a", n)], &["div_exact", "div"]);
    let mut out = Vec::new();
    let mut all_negative = true;
    for (source, i, p) in &inputs {
        let d = sys.div_xa(p);
        all_negative &= d.is_negative();
        let mut row = vec![source.to_string(), i.to_string()];
        row.extend(strings(p));
        row.push(d.to_string());
        row.push(num(rational::to_f64(&d)));
        t.push(row);
        out.push(json!({"source": source, "index": i, "a": strings(p), "div_exact": d.to_string(), "div": rational::to_f64(&d)}));
    }
    let result = json!({"system": sys.label(), "all_negative": all_negative, "values": out});
    Report::new("divxa", cfg, result, vec![t])
}
