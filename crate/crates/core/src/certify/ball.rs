//! Breadth-first word balls of finitely generated matrix groups.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::cartan::{self, CartanVector, ExactBlock, GroupElement, GroupSpec};
use crate::error::{Error, Result};

pub const DEFAULT_DEDUP_TOL: f64 = 1e-8;
pub const DEFAULT_BALL_CAP: usize = 200_000;
/// Products farther than the dedup tolerance but within this multiple of it
/// from a stored element abort enumeration.
pub const NEAR_COLLISION_FACTOR: f64 = 100.0;

/// One generator or generator inverse.
#[derive(Debug, Clone)]
pub struct Letter {
    pub name: String,
    pub element: GroupElement,
    /// Index of the letter equal to this letter's inverse.
    pub inverse: usize,
}

/// A finite symmetric generating set.
#[derive(Debug, Clone)]
pub struct GeneratorSet {
    pub spec: GroupSpec,
    pub letters: Vec<Letter>,
    /// Whether the input already listed every inverse.
    pub symmetric: bool,
}

fn inverse_name(name: &str) -> String {
    let mut chars = name.chars();
    match (chars.next(), chars.next()) {
        (Some(c), None) if c.is_ascii_lowercase() => c.to_ascii_uppercase().to_string(),
        _ => format!("{name}^-1"),
    }
}

/// Entrywise distance relative to the larger of the two matrices (and 1).
pub fn relative_distance(a: &GroupElement, b: &GroupElement) -> f64 {
    if let (Some(x), Some(y)) = (&a.exact, &b.exact) {
        if x == y {
            return 0.0;
        }
    }
    let (ea, eb) = (a.entries(), b.entries());
    let scale = a.max_abs().max(b.max_abs()).max(1.0);
    let d = ea.iter().zip(&eb).fold(0.0f64, |m, (x, y)| m.max((x - y).abs())) / scale;
    if d == 0.0 && a.exact.is_some() && b.exact.is_some() {
        // distinct exact matrices that round to the same floats
        f64::MIN_POSITIVE
    } else {
        d
    }
}

impl GeneratorSet {
    /// Builds the letter list. With `symmetric = false` missing inverses are
    /// appended; with `symmetric = true` every inverse must already be listed.
    pub fn new(spec: &GroupSpec, generators: Vec<(String, GroupElement)>, symmetric: bool) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::Empty("generating set".into()));
        }
        let tol = DEFAULT_DEDUP_TOL;
        let mut letters: Vec<Letter> = Vec::new();
        let mut inverses = Vec::new();
        for (name, g) in generators {
            let inv = g.inverse(spec)?;
            letters.push(Letter { name, element: g, inverse: usize::MAX });
            inverses.push(inv);
        }
        let given = letters.len();
        for i in 0..given {
            let found = letters.iter().position(|l| relative_distance(&l.element, &inverses[i]) <= tol);
            match found {
                Some(j) => letters[i].inverse = j,
                None if symmetric => return Err(Error::NotInverseClosed(letters[i].name.clone())),
                None => {
                    let name = inverse_name(&letters[i].name);
                    letters.push(Letter { name, element: inverses[i].clone(), inverse: i });
                    let j = letters.len() - 1;
                    letters[i].inverse = j;
                }
            }
        }
        for i in 0..letters.len() {
            let j = letters[i].inverse;
            if letters[j].inverse != i {
                return Err(Error::NotInverseClosed(format!("{} and {} are not mutually inverse", letters[i].name, letters[j].name)));
            }
        }
        Ok(Self { spec: spec.clone(), letters, symmetric })
    }

    /// Generators named `a`, `b`, `c`, ... in order.
    pub fn lettered(spec: &GroupSpec, generators: Vec<GroupElement>, symmetric: bool) -> Result<Self> {
        let named = generators
            .into_iter()
            .enumerate()
            .map(|(i, g)| {
                let name = if i < 26 { ((b'a' + i as u8) as char).to_string() } else { format!("g{i}") };
                (name, g)
            })
            .collect();
        Self::new(spec, named, symmetric)
    }
}

#[derive(Debug, Clone)]
pub struct BallEntry {
    pub element: GroupElement,
    pub inverse: GroupElement,
    /// Word length `|γ|_S`.
    pub length: u32,
    /// A reduced word of that length, as letter indices (left to right).
    pub word: Vec<usize>,
    pub mu: CartanVector,
    pub lambda: Option<CartanVector>,
}

#[derive(Debug, Clone)]
pub struct WordBall {
    pub spec: GroupSpec,
    pub letter_names: Vec<String>,
    pub entries: Vec<BallEntry>,
    pub radius: u32,
    /// `max_s ‖μ(s)‖` over the letters.
    pub kappa: f64,
}

impl WordBall {
    pub fn word_string(&self, entry: &BallEntry) -> String {
        if entry.word.is_empty() {
            "e".into()
        } else {
            entry.word.iter().map(|&l| self.letter_names[l].as_str()).collect::<Vec<_>>().join(" ")
        }
    }

    /// Fills in Jordan projections for every entry.
    pub fn compute_jordan(&mut self) -> Result<()> {
        let spec = &self.spec;
        self.entries.par_iter_mut().try_for_each(|e| {
            e.lambda = Some(cartan::jordan(spec, &e.element)?);
            Ok(())
        })
    }

    /// Entries with word length at most `r`.
    pub fn within(&self, r: u32) -> impl Iterator<Item = &BallEntry> {
        self.entries.iter().filter(move |e| e.length <= r)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BallConfig {
    pub cap: usize,
    pub dedup_tol: f64,
}

impl Default for BallConfig {
    fn default() -> Self {
        Self { cap: DEFAULT_BALL_CAP, dedup_tol: DEFAULT_DEDUP_TOL }
    }
}

/// Float lookup: a weighted entry sum bucketed coarsely enough that any two
/// elements within the near-collision radius land in adjacent buckets.
struct FloatIndex {
    buckets: HashMap<i64, Vec<usize>>,
    cell: f64,
}

impl FloatIndex {
    fn new(n_entries: usize, tol: f64) -> Self {
        Self { buckets: HashMap::new(), cell: 8.0 * n_entries as f64 * NEAR_COLLISION_FACTOR * tol }
    }

    fn key(&self, g: &GroupElement) -> i64 {
        let scale = g.max_abs().max(1.0);
        let s: f64 = g
            .entries()
            .iter()
            .enumerate()
            .map(|(j, x)| (1.0 + (j as f64 * 0.618_033_988_75).fract()) * x)
            .sum::<f64>()
            / scale;
        (s / self.cell).floor() as i64
    }
}

enum Index {
    Exact(HashMap<Vec<ExactBlock>, usize>),
    Float(FloatIndex),
}

impl Index {
    /// Stored index of `g`, or `None` if it is new.
    fn find(&self, g: &GroupElement, entries: &[BallEntry], tol: f64) -> Result<Option<usize>> {
        match self {
            Index::Exact(map) => Ok(map.get(g.exact.as_ref().expect("exact ball")).copied()),
            Index::Float(idx) => {
                let k = idx.key(g);
                let mut hit: Option<usize> = None;
                let mut near: Option<(usize, f64)> = None;
                for kk in [k - 1, k, k + 1] {
                    for &i in idx.buckets.get(&kk).into_iter().flatten() {
                        let d = relative_distance(g, &entries[i].element);
                        if d <= tol {
                            if let Some(first) = hit {
                                return Err(Error::DedupAmbiguity { first: first.min(i), second: first.max(i) });
                            }
                            hit = Some(i);
                        } else if d <= NEAR_COLLISION_FACTOR * tol {
                            near = Some((i, d));
                        }
                    }
                }
                match (hit, near) {
                    (Some(i), _) => Ok(Some(i)),
                    (None, Some((stored, distance))) => Err(Error::NearCollision { stored, distance }),
                    (None, None) => Ok(None),
                }
            }
        }
    }

    fn insert(&mut self, g: &GroupElement, i: usize) {
        match self {
            Index::Exact(map) => {
                map.insert(g.exact.clone().expect("exact ball"), i);
            }
            Index::Float(idx) => {
                let k = idx.key(g);
                idx.buckets.entry(k).or_default().push(i);
            }
        }
    }
}

fn lex_entries(a: &GroupElement, b: &GroupElement) -> std::cmp::Ordering {
    let (ea, eb) = (a.entries(), b.entries());
    ea.iter().zip(&eb).map(|(x, y)| x.total_cmp(y)).find(|o| o.is_ne()).unwrap_or(std::cmp::Ordering::Equal)
}

/// All elements of word length at most `radius`, each with its length, a
/// witnessing word, and `μ`. Sorted by length, then entrywise.
pub fn enumerate_ball(gens: &GeneratorSet, radius: u32, cfg: &BallConfig) -> Result<WordBall> {
    let spec = &gens.spec;
    let identity = GroupElement::identity(spec);
    let exact = gens.letters.iter().all(|l| l.element.is_exact());
    let mut index = if exact {
        Index::Exact(HashMap::new())
    } else {
        Index::Float(FloatIndex::new(identity.entries().len(), cfg.dedup_tol))
    };
    let mut entries = vec![BallEntry {
        element: identity.clone(),
        inverse: identity,
        length: 0,
        word: vec![],
        mu: CartanVector::zero(0),
        lambda: None,
    }];
    index.insert(&entries[0].element, 0);
    let mut frontier = vec![0usize];
    for k in 1..=radius {
        let candidates: Vec<(usize, usize, GroupElement, GroupElement)> = frontier
            .par_iter()
            .flat_map_iter(|&i| {
                let parent = &entries[i];
                let last_inverse = parent.word.last().map(|&l| gens.letters[l].inverse);
                gens.letters.iter().enumerate().filter(move |(l, _)| Some(*l) != last_inverse).map(move |(l, letter)| {
                    let g = parent.element.mul(&letter.element);
                    let ginv = gens.letters[letter.inverse].element.mul(&parent.inverse);
                    (i, l, g, ginv)
                })
            })
            .collect();
        let mut next = Vec::new();
        for (parent, l, g, ginv) in candidates {
            if index.find(&g, &entries, cfg.dedup_tol)?.is_some() {
                continue;
            }
            if entries.len() >= cfg.cap {
                return Err(Error::BallCapExceeded { cap: cfg.cap });
            }
            let mut word = entries[parent].word.clone();
            word.push(l);
            let i = entries.len();
            index.insert(&g, i);
            entries.push(BallEntry { element: g, inverse: ginv, length: k, word, mu: CartanVector::zero(0), lambda: None });
            next.push(i);
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    entries.par_iter_mut().try_for_each(|e| {
        e.mu = cartan::mu_with_inverse(spec, &e.element, Some(&e.inverse))?;
        Ok::<(), Error>(())
    })?;
    entries.sort_by(|a, b| a.length.cmp(&b.length).then_with(|| lex_entries(&a.element, &b.element)));
    let kappa = gens
        .letters
        .iter()
        .map(|l| Ok(cartan::mu(spec, &l.element)?.norm()))
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    Ok(WordBall {
        spec: spec.clone(),
        letter_names: gens.letters.iter().map(|l| l.name.clone()).collect(),
        entries,
        radius,
        kappa,
    })
}
