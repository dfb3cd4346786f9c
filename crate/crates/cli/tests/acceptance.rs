//! Acceptance gate: twelve criteria, one PASS/FAIL line each. Runs without
//! the libtest harness so the lines always reach the console.

use std::path::{Path, PathBuf};
use std::process::Command as Process;
use std::time::{Duration, Instant};

use cocompact_cli::{parse_spec, run, Command, Overrides, RunConfig};
use cocompact_core::arrangement::{
    avoided_simple_roots, build_arrangement, components, iota_action, FormSpec, IsotropySpec,
};
use cocompact_core::cartan::{self, sample, Block, Field, GroupElement, GroupSpec};
use cocompact_core::certify::{
    enumerate_ball, sharpness_anosov_crosscheck, tau_gap_exact, BallConfig, GeneratorSet, ScanConfig, TauGapData,
};
use cocompact_core::obstruct::{
    check_multiplicities, dim_symmetric_space, group_data, GroupDescriptor as G, Scalars,
};
use cocompact_core::rational::{self, q, qf, qvec, QVec};
use cocompact_core::{Family, RootSystem};
use num::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

type Outcome = Result<String, String>;

fn check(cond: bool, what: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what.into())
    }
}

fn workspace() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn spec_path(name: &str) -> PathBuf {
    workspace().join("data/specs").join(name)
}

fn config(name: &str) -> Result<RunConfig, String> {
    parse_spec(&spec_path(name), &Overrides::default()).map_err(|e| format!("{name}: {e:#}"))
}

fn result(command: Command, cfg: &RunConfig) -> Result<Value, String> {
    let report = run(command, cfg).map_err(|e| format!("{}: {e:#}", command.name()))?;
    Ok(report.json["result"].clone())
}

fn uniform(rng: &mut ChaCha8Rng) -> impl FnMut() -> f64 + '_ {
    move || rng.random::<f64>()
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn diff(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn random_element(spec: &GroupSpec, rng: &mut ChaCha8Rng) -> GroupElement {
    let blocks = spec
        .leaves()
        .into_iter()
        .map(|leaf| match *leaf {
            GroupSpec::SL { n, field: Field::R } => Block::Real(sample::sl_real(n, 2.0, &mut uniform(rng))),
            GroupSpec::SL { n, field: Field::C } => Block::Complex(sample::sl_complex(n, 2.0, &mut uniform(rng))),
            GroupSpec::SL { n, field: Field::H } => Block::Complex(sample::sl_quaternion(n, 1.0, &mut uniform(rng))),
            GroupSpec::SO { p, q } => Block::Real(sample::so(p, q, 12, 1.0, &mut uniform(rng))),
            GroupSpec::Product(_) => unreachable!(),
        })
        .collect();
    GroupElement::new(spec, blocks, 1e-7).expect("sampled elements validate")
}

fn criterion_1() -> Outcome {
    let spec = GroupSpec::sl(3, Field::R);
    let g = GroupElement::rational(&spec, vec![qvec(&[2, 0, 0]), qvec(&[0, 2, 0]), vec![q(0), q(0), qf(1, 4)]])
        .map_err(|e| e.to_string())?;
    cartan::mu(&spec, &g).map_err(|e| e.to_string())?;
    let start = Instant::now();
    let m = cartan::mu(&spec, &g).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let l2 = std::f64::consts::LN_2;
    let err = norm(&diff(&m.coords, &[l2, l2, -2.0 * l2]));
    check(err <= 1e-12, format!("error {err:e}"))?;
    check(elapsed < Duration::from_millis(1), format!("took {elapsed:?}"))?;
    Ok(format!("mu(diag(2,2,1/4)) error {err:.1e}, {elapsed:?}"))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst = f64::INFINITY;
    for n in [3, 4] {
        let spec = GroupSpec::sl(n, Field::R);
        for _ in 0..10_000 {
            let [g1, g, g2] = [0, 1, 2].map(|_| random_element(&spec, &mut rng));
            let mu = |x: &GroupElement| cartan::mu(&spec, x).map(|c| c.coords);
            let inner = mu(&g1.mul(&g).mul(&g2)).map_err(|e| e.to_string())?;
            let (m, m1, m2) = (mu(&g).unwrap(), mu(&g1).unwrap(), mu(&g2).unwrap());
            let slack = norm(&m1) + norm(&m2) - norm(&diff(&inner, &m));
            worst = worst.min(slack);
        }
    }
    let elapsed = start.elapsed();
    check(worst >= -1e-9, format!("slack {worst:e}"))?;
    check(elapsed < Duration::from_secs(10), format!("took {elapsed:?}"))?;
    Ok(format!("2x10^4 triples, min slack {worst:.3e}, {elapsed:.2?}"))
}

fn criterion_3() -> Outcome {
    let families = [
        GroupSpec::sl(3, Field::R),
        GroupSpec::sl(4, Field::R),
        GroupSpec::sl(3, Field::C),
        GroupSpec::sl(2, Field::H),
        GroupSpec::so(3, 2),
        GroupSpec::so(4, 1),
        GroupSpec::so(4, 4),
        GroupSpec::Product(vec![GroupSpec::sl(2, Field::R), GroupSpec::sl(3, Field::R)]),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst: f64 = 0.0;
    for spec in &families {
        let sys = spec.root_system().map_err(|e| e.to_string())?;
        let iota = sys.iota_f64();
        for _ in 0..1000 {
            let g = random_element(spec, &mut rng);
            let ginv = g.inverse(spec).map_err(|e| e.to_string())?;
            let m = cartan::mu(spec, &g).map_err(|e| e.to_string())?.coords;
            let mi = cartan::mu(spec, &ginv).map_err(|e| e.to_string())?.coords;
            let im: Vec<f64> = iota.iter().map(|row| row.iter().zip(&m).map(|(a, b)| a * b).sum()).collect();
            worst = worst.max(norm(&diff(&mi, &im)) / norm(&m).max(1.0));
        }
    }
    check(worst <= 1e-9, format!("max deviation {worst:e}"))?;
    // -w0 from the longest element of the enumerated Weyl group
    let brute = |family, rank| -> Result<Vec<usize>, String> {
        let sys = RootSystem::reduced(family, rank).map_err(|e| e.to_string())?;
        let w = sys.weyl_group().map_err(|e| e.to_string())?;
        let longest = w.iter().max_by_key(|e| e.length()).ok_or("empty Weyl group")?;
        sys.simple_roots()
            .iter()
            .map(|a| sys.simple_index(&rational::neg(&longest.apply(a))).map_err(|e| e.to_string()))
            .collect()
    };
    let a2 = brute(Family::A, 2)?;
    let b2 = brute(Family::B, 2)?;
    check(a2 == vec![1, 0], format!("iota(A2) permutes simple roots as {a2:?}"))?;
    check(b2 == vec![0, 1], format!("iota(B2) permutes simple roots as {b2:?}"))?;
    Ok(format!("8 families x 10^3 elements, max deviation {worst:.1e}; iota(A2) swaps, iota(B2) = id"))
}

fn criterion_4() -> Outcome {
    let spec = GroupSpec::sl(3, Field::R);
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst_ratio: f64 = 0.0;
    for _ in 0..100 {
        let m = sample::diagonalizable_sl_real(3, &mut uniform(&mut rng));
        let g = GroupElement::new(&spec, vec![Block::Real(m)], 1e-7).map_err(|e| e.to_string())?;
        let lambda = cartan::jordan(&spec, &g).map_err(|e| e.to_string())?.coords;
        let avg = |n: u64| -> Result<Vec<f64>, String> {
            let m = cartan::mu_power(&spec, &g, n).map_err(|e| e.to_string())?;
            Ok(m.coords.iter().map(|x| x / n as f64).collect())
        };
        let (e32, e64) = (norm(&diff(&avg(32)?, &lambda)), norm(&diff(&avg(64)?, &lambda)));
        check(e64 <= e32 + 1e-9, format!("error grew from {e32:e} to {e64:e}"))?;
        let e256 = norm(&diff(&avg(256)?, &lambda));
        check(e256 <= 0.05 * norm(&lambda) + 1e-6, format!("mu(g^256)/256 is {e256:e} from lambda"))?;
        worst_ratio = worst_ratio.max(e256 / norm(&lambda));
    }
    Ok(format!("100 elements, worst relative error at n=256 {worst_ratio:.2e}"))
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let a3 = RootSystem::reduced(Family::A, 3).map_err(|e| e.to_string())?;
    let arr = build_arrangement(&a3, &IsotropySpec::Hyperplane(FormSpec::Coords(qvec(&[0, 1, 0, 0]))))
        .map_err(|e| e.to_string())?;
    let dec = components(&a3, &arr).map_err(|e| e.to_string())?;
    let iota = iota_action(&a3, &arr, &dec).map_err(|e| e.to_string())?;
    // effective walls must be Ker e2* and Ker e3*
    let on = |u: &[i64], w: usize| rational::dot(arr.walls[dec.effective_walls[w]].form.as_ref().unwrap(), &qvec(u)).is_zero();
    let e2_wall = (0..2).filter(|&w| on(&[2, 0, -1, -1], w)).count();
    let e3_wall = (0..2).filter(|&w| on(&[1, 1, 0, -2], w)).count();
    check(dec.effective_walls.len() == 2 && e2_wall == 1 && e3_wall == 1, "A3: effective walls are not Ker e2*, Ker e3*")?;
    check(dec.components.len() == 3, format!("A3: {} components", dec.components.len()))?;
    check(iota.fixed.len() == 1, format!("A3: iota fixes {:?}", iota.fixed))?;
    let middle = iota.fixed[0];
    let outer: Vec<usize> = (0..3).filter(|&i| i != middle).collect();
    check(iota.permutation[outer[0]] == outer[1], "A3: iota does not swap the outer components")?;
    let avoided = avoided_simple_roots(&a3, &dec.components[middle]).map_err(|e| e.to_string())?;
    check(avoided == vec![1], format!("A3: middle component avoids {avoided:?}"))?;

    let b3 = RootSystem::reduced(Family::B, 3).map_err(|e| e.to_string())?;
    let arr = build_arrangement(&b3, &IsotropySpec::Hyperplane(FormSpec::RootCoeffs(qvec(&[1, 0, -1]))))
        .map_err(|e| e.to_string())?;
    let dec = components(&b3, &arr).map_err(|e| e.to_string())?;
    check(dec.components.len() == 2, format!("B3: {} components", dec.components.len()))?;
    let mut avoided: Vec<Vec<usize>> = dec
        .components
        .iter()
        .map(|c| avoided_simple_roots(&b3, c))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    avoided.sort();
    check(avoided == vec![vec![0], vec![2]], format!("B3: avoided roots {avoided:?}"))?;
    let elapsed = start.elapsed();
    check(elapsed < Duration::from_secs(1), format!("took {elapsed:?}"))?;
    Ok(format!("A3: 3 components, outer pair swapped, middle fixed; B3: 2 components avoiding alpha1 / alpha3; {elapsed:.2?}"))
}

fn sharpness_verdict(name: &str) -> Result<(String, Option<f64>), String> {
    let r = result(Command::Sharpness, &config(name)?)?;
    Ok((r["verdict"].as_str().unwrap_or_default().to_string(), r["c"].as_f64()))
}

fn criterion_6() -> Outcome {
    let (v, c) = sharpness_verdict("sl3_sharp_cyclic.json")?;
    check(v == "CERTIFIED_ON_BALL", format!("diag(2,2,1/4): {v}"))?;
    let c = c.ok_or("diag(2,2,1/4): no fitted slope")?;
    check((c - 0.5).abs() <= 1e-6, format!("diag(2,2,1/4): c = {c}"))?;
    let (w, _) = sharpness_verdict("sl3_wall_cyclic.json")?;
    check(w == "VIOLATION", format!("diag(2,1/2,1): {w}"))?;
    let (_, c2) = sharpness_verdict("sl2_squared_factor.json")?;
    let c2 = c2.ok_or("factor lattice: no fitted slope")?;
    check((c2 - 0.5f64.sqrt()).abs() <= 1e-6, format!("factor lattice: c = {c2}"))?;
    Ok(format!("c = {c} (CERTIFIED_ON_BALL), wall-sitting group {w}, factor lattice c = {c2}"))
}

fn criterion_7() -> Outcome {
    let mut verdicts = Vec::new();
    for root in ["alpha1", "alpha2"] {
        let mut cfg = config("sl3_sharp_cyclic.json")?;
        cfg.theta = Some(vec![root.to_string()]);
        check(cfg.radius == 50, "radius is not 50")?;
        let r = result(Command::Anosov, &cfg)?;
        let v = r["verdict"].as_str().unwrap_or_default().to_string();
        check(v == "VIOLATION", format!("theta = {{{root}}}: {v}"))?;
        verdicts.push(format!("{root}: {v}"));
    }
    let (s, _) = sharpness_verdict("sl3_sharp_cyclic.json")?;
    check(s == "CERTIFIED_ON_BALL", format!("sharpness {s}"))?;
    Ok(format!("{}; sharpness {s}", verdicts.join(", ")))
}

fn random_dominant(sys: &RootSystem, rng: &mut ChaCha8Rng) -> QVec {
    let omegas = sys.fundamental_weights().expect("fundamental weights");
    let mut u = rational::zeros(sys.ambient_dim());
    for w in &omegas {
        // zero coefficients land points on chamber walls too
        let c = qf(rng.random_range(0..=60), rng.random_range(1..=7));
        u = rational::add(&u, &rational::scale(&c, w));
    }
    u
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let cases = [
        (Family::A, 2, vec![0usize]),
        (Family::A, 3, vec![0, 2]),
        (Family::B, 3, vec![1]),
        (Family::C, 3, vec![0, 2]),
        (Family::D, 4, vec![1]),
    ];
    let mut total = 0;
    for (family, rank, theta) in cases {
        let sys = RootSystem::reduced(family, rank).map_err(|e| e.to_string())?;
        let arr = build_arrangement(&sys, &IsotropySpec::WallUnion(theta.clone())).map_err(|e| e.to_string())?;
        let dec = components(&sys, &arr).map_err(|e| e.to_string())?;
        check(dec.components.len() == 1, "wall union does not give one component")?;
        let data = TauGapData::from_component(&sys, &dec.components[0]).map_err(|e| e.to_string())?;
        let mut checked = 0;
        while checked < 1000 {
            let u = random_dominant(&sys, &mut rng);
            if !dec.components[0].contains(&sys, &u) {
                continue;
            }
            let want = theta.iter().map(|&j| rational::dot(&sys.simple_roots()[j], &u)).min().unwrap();
            let got = tau_gap_exact(&sys, &data, &u).map_err(|e| e.to_string())?;
            check(got.in_chamber && got.value == want, format!("{family}{rank}: tau {} vs {want}", got.value))?;
            checked += 1;
        }
        total += checked;
    }
    // sample-level equivalence on the chambers of the cyclic examples
    let spec = GroupSpec::sl(3, Field::R);
    let sys = spec.root_system().map_err(|e| e.to_string())?;
    let arr = build_arrangement(&sys, &IsotropySpec::Subspace(vec![qvec(&[1, -1, 0])])).map_err(|e| e.to_string())?;
    let dec = components(&sys, &arr).map_err(|e| e.to_string())?;
    let data: Vec<TauGapData> =
        dec.components.iter().map(|c| TauGapData::from_component(&sys, c)).collect::<Result<_, _>>().map_err(|e| e.to_string())?;
    let mut samples = 0;
    for d in [[q(2), q(2), qf(1, 4)], [q(2), qf(1, 2), q(1)]] {
        let m: Vec<QVec> = (0..3).map(|i| (0..3).map(|j| if i == j { d[i].clone() } else { q(0) }).collect()).collect();
        let g = GroupElement::rational(&spec, m).map_err(|e| e.to_string())?;
        let gens = GeneratorSet::lettered(&spec, vec![g], false).map_err(|e| e.to_string())?;
        let ball = enumerate_ball(&gens, 50, &BallConfig::default()).map_err(|e| e.to_string())?;
        let rep = sharpness_anosov_crosscheck(&ball, &sys, &arr, &data, &ScanConfig::default()).map_err(|e| e.to_string())?;
        check(rep.mismatches.is_empty(), format!("{} zero/positive mismatches", rep.mismatches.len()))?;
        samples += rep.samples.len();
    }
    Ok(format!("{total} exact wall-union points; {samples} ball samples with matching zero sets"))
}

fn criterion_9() -> Outcome {
    let start = Instant::now();
    let r = result(Command::Obstruction, &config("nonexistence_catalog.json")?)?;
    let series = r["series"].as_array().ok_or("no series")?;
    check(series.len() == 7, format!("{} series", series.len()))?;
    for s in series {
        check(s["status"] == "NO_COMPACT_QUOTIENTS", format!("series {} is {}", s["series"], s["status"]))?;
    }
    let verdicts = r["verdicts"].as_array().ok_or("no verdicts")?;
    let find = |name: &str| verdicts.iter().find(|v| v["case"] == name).ok_or(format!("missing {name}"));
    for (name, required, bound) in [
        ("SL(4,R)/SL(3,R)", 4, 3),
        ("SO(2,3)/U(1,1)", 4, 3),
        ("Spin(5,3)/G2(2)", 7, 5),
        ("Spin(5,4)/Spin(4,3)", 8, 6),
    ] {
        let v = find(name)?;
        check(v["required_vcd"] == required, format!("{name}: required {}", v["required_vcd"]))?;
        let bounds: Vec<u64> = v["orbits"]
            .as_array()
            .unwrap()
            .iter()
            .filter(|o| o["admissible"] == true)
            .filter_map(|o| o["chosen"]["vcd"].as_u64())
            .collect();
        check(bounds.contains(&bound) && bounds.iter().all(|&b| b < required), format!("{name}: bounds {bounds:?}"))?;
    }
    let spin = find("Spin(5,4)/Spin(4,3)")?;
    let alpha3 = spin["orbits"].as_array().unwrap().iter().find(|o| o["chosen"]["root"] == "alpha3");
    check(alpha3.is_some_and(|o| o["chosen"]["boundary_dim"] == 5), "Spin(5,4): B4 root count is not 5")?;
    let mut cfg = config("nonexistence_catalog.json")?;
    cfg.resolved.catalog = Some(
        cocompact_core::obstruct::parse_catalog(cocompact_core::obstruct::BUILTIN_CATALOGS[1].1).map_err(|e| e.to_string())?,
    );
    let known = result(Command::Obstruction, &cfg)?;
    for name in ["SO(2,2)/U(1,1)", "SO(4,2)/U(2,1)"] {
        let v = known["verdicts"].as_array().unwrap().iter().find(|v| v["case"] == name).ok_or(format!("missing {name}"))?;
        check(v["status"] == "NOT_OBSTRUCTED_BY_THIS_METHOD", format!("{name}: {}", v["status"]))?;
    }
    let elapsed = start.elapsed();
    check(elapsed < Duration::from_secs(1), format!("took {elapsed:?}"))?;
    Ok(format!("7 series NO_COMPACT_QUOTIENTS, bounds 3<4, 3<4, 5<7, 6<8; SO(2p,2)/U(p,1) p=1,2 not obstructed; {elapsed:.2?}"))
}

fn criterion_10() -> Outcome {
    let mut groups = vec![G::G2Split, G::F4Minus20, G::E6Minus14, G::E6Minus26];
    for n in 2..=7 {
        for field in [Scalars::R, Scalars::C, Scalars::H] {
            groups.push(G::Sl { n, field });
        }
    }
    for b in 1..=6u64 {
        for a in b..=b + 4 {
            if (a, b) != (1, 1) {
                groups.push(G::So { p: a, q: b });
            }
            groups.push(G::Su { p: a, q: b });
            groups.push(G::Sp { p: a, q: b });
        }
        groups.push(G::SpReal { ell: b });
        groups.push(G::SpComplex { ell: b });
    }
    for n in 3..=13 {
        groups.push(G::SoComplex { n });
        groups.push(G::SoStar { n });
    }
    let mut checked = 0;
    for g in &groups {
        let d = group_data(g).map_err(|e| format!("{g}: {e}"))?;
        check_multiplicities(&d).map_err(|e| format!("{g}: {e}"))?;
        let (rank, sum) = d.rank_and_root_dims().map_err(|e| format!("{g}: {e}"))?;
        let closed = dim_symmetric_space(g).map_err(|e| format!("{g}: {e}"))?;
        check(rank <= 6 && rank + sum == closed, format!("{g}: {rank} + {sum} vs {closed}"))?;
        checked += 1;
    }
    Ok(format!("{checked} groups up to rank 6 satisfy dim(G/K) = rank + sum of multiplicities"))
}

fn criterion_11() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (family, rank) in [(Family::A, 2), (Family::B, 2)] {
        let sys = RootSystem::reduced(family, rank).map_err(|e| e.to_string())?;
        let mut checked = 0;
        while checked < 1000 {
            // any regular element of a, not only dominant ones
            let mut a: QVec = (0..sys.ambient_dim()).map(|_| qf(rng.random_range(-500..=500), rng.random_range(1..=9))).collect();
            a = sys.project_to_a(&a);
            if sys.positive_roots().iter().any(|r| rational::dot(&r.vector, &a).is_zero()) {
                continue;
            }
            let d = sys.div_xa(&a);
            check(d.is_negative(), format!("{family}{rank}: div = {d} at {a:?}"))?;
            checked += 1;
        }
    }
    let r = result(Command::Divxa, &config("divxa_a2.json")?)?;
    let spot = &r["values"][0];
    check(spot["a"] == serde_json::json!(["1", "0", "-1"]) && spot["div_exact"] == "-4", format!("spot value {spot}"))?;
    check(r["all_negative"] == true, "sampled divergence not negative")?;
    Ok("2x10^3 regular points negative; div(X_(1,0,-1)) = -4 exactly".into())
}

/// Subcommands exercised on each shipped spec.
const SHIPPED: [(&str, &[&str]); 10] = [
    ("sl3_sharp_cyclic.json", &["mu", "jordan", "ball", "sharpness", "anosov", "limit-cone", "chambers", "tau-gap"]),
    ("sl3_wall_cyclic.json", &["sharpness", "anosov"]),
    ("sl2_squared_factor.json", &["mu", "ball", "sharpness", "limit-cone"]),
    ("sl2_schottky.json", &["ball", "anosov", "limit-cone"]),
    ("a3_middle_walls.json", &["chambers", "divxa"]),
    ("b3_root_difference.json", &["chambers"]),
    ("sl3_tau_gap.json", &["tau-gap", "chambers"]),
    ("divxa_a2.json", &["divxa"]),
    ("divxa_b2.json", &["divxa"]),
    ("nonexistence_catalog.json", &["obstruction"]),
];

fn run_binary(command: &str, spec: &Path, out: &Path) -> Result<(), String> {
    let status = Process::new(env!("CARGO_BIN_EXE_cocompact"))
        .args([command, "--spec"])
        .arg(spec)
        .arg("--out")
        .arg(out)
        .args(["--format", "both"])
        .output()
        .map_err(|e| e.to_string())?;
    check(status.status.success(), format!("{command} {}: {}", spec.display(), String::from_utf8_lossy(&status.stderr)))
}

fn criterion_12() -> Outcome {
    let dirs = [tempfile::tempdir().map_err(|e| e.to_string())?, tempfile::tempdir().map_err(|e| e.to_string())?];
    let mut files = 0;
    for (spec, commands) in SHIPPED {
        for command in commands {
            for d in &dirs {
                run_binary(command, &spec_path(spec), &d.path().join(spec))?;
            }
        }
        let mut names: Vec<_> = std::fs::read_dir(dirs[0].path().join(spec))
            .map_err(|e| e.to_string())?
            .map(|e| e.map(|e| e.file_name()))
            .collect::<Result<_, _>>()
            .map_err(|e| e.to_string())?;
        names.sort();
        for name in names {
            let a = std::fs::read(dirs[0].path().join(spec).join(&name)).map_err(|e| e.to_string())?;
            let b = std::fs::read(dirs[1].path().join(spec).join(&name)).map_err(|e| e.to_string())?;
            check(a == b, format!("{spec}/{}: reports differ", name.to_string_lossy()))?;
            files += 1;
        }
    }
    Ok(format!("{files} report files byte-identical across two runs"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("Cartan projection of diag(2,2,1/4)", criterion_1),
        ("strong subadditivity", criterion_2),
        ("opposition involution", criterion_3),
        ("Jordan limit", criterion_4),
        ("chamber components", criterion_5),
        ("sharpness scan", criterion_6),
        ("Anosov scan", criterion_7),
        ("tau gap", criterion_8),
        ("obstruction pipeline", criterion_9),
        ("dimension tables", criterion_10),
        ("divergence", criterion_11),
        ("determinism", criterion_12),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let outcome = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL {name}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
