//! Versioned plain-text form of an instance whose players are all
//! point-mass distributions.
//!
//! ```text
//! colearn-instance v1
//! id psi-k8-d2-e0.1-s7
//! generator psi
//! seed 7
//! k 8
//! d 2
//! epsilon 0.1
//! learner all-binary 3 2
//! bottom 2
//! target 0 1 0
//! permutation 3 0 6 1 7 4 2 5
//! rows
//! 0 bot 0 1
//! 1 1 1 0.2
//! 1 bot 0 0.8
//! ```
//!
//! Rows are `player point label mass`. A point is an index, `bot` for the
//! pinned point, or `v:` followed by comma-separated features. Numbers use
//! the shortest form that parses back to the same `f64`, so a round trip is
//! exact. Unknown keys before `rows` are kept as generator parameters.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::learners::{ClassKind, FiniteHypothesisClass, LearnerSpec, TreeParams};
use crate::model::{Label, LabeledExample, Point, PointMassDistribution, SampleOracle};

pub const FORMAT_HEADER: &str = "colearn-instance v1";

/// Everything in an instance file besides the players and the learner.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct InstanceMeta {
    pub generator: String,
    pub seed: u64,
    /// Generator parameters in file order, e.g. `("d", "2")`.
    pub params: Vec<(String, String)>,
    /// Index written as `bot`.
    pub bottom: Option<u32>,
    pub target: Option<Vec<Label>>,
    pub permutation: Option<Vec<usize>>,
}

impl InstanceMeta {
    pub fn param(&self, key: &str) -> Option<&str> {
        self.params
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }
}

pub fn write_instance(path: &Path, instance: &Instance, meta: &InstanceMeta) -> Result<()> {
    fs::write(path, render(instance, meta)?).map_err(|e| Error::io(path, e))
}

pub fn read_instance(path: &Path) -> Result<(Instance, InstanceMeta)> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse(&text, &path.display().to_string())
}

fn join<T: ToString>(items: &[T]) -> String {
    items.iter().map(T::to_string).collect::<Vec<_>>().join(" ")
}

pub fn render(instance: &Instance, meta: &InstanceMeta) -> Result<String> {
    let masses: Vec<_> = instance
        .players
        .iter()
        .enumerate()
        .map(|(i, o)| {
            o.as_point_mass().ok_or_else(|| {
                Error::Precondition(format!("player {i} has no point-mass form to write"))
            })
        })
        .collect::<Result<_>>()?;
    let learner = match &instance.learner {
        LearnerSpec::Erm(class) => match class.kind() {
            ClassKind::AllBinary { fixed_zero } => format!(
                "all-binary {} {}",
                class.domain_size(),
                fixed_zero.map_or("none".into(), |z| z.to_string())
            ),
            ClassKind::Explicit(_) => {
                return Err(Error::Precondition(
                    "explicit classes cannot be written".into(),
                ));
            }
        },
        LearnerSpec::Tree(p) => format!("tree {} {}", p.max_depth, p.min_leaf),
        LearnerSpec::Oracle(_) => {
            return Err(Error::Precondition(
                "oracle learners cannot be written".into(),
            ))
        }
    };

    let mut out = String::new();
    let mut line =
        |key: &str, value: &str| writeln!(out, "{key} {value}").expect("writing to a String");
    line("colearn-instance", "v1");
    line("id", &instance.id);
    line("generator", &meta.generator);
    line("seed", &meta.seed.to_string());
    line("k", &instance.k().to_string());
    for (key, value) in &meta.params {
        line(key, value);
    }
    line("learner", &learner);
    if let Some(b) = meta.bottom {
        line("bottom", &b.to_string());
    }
    if let Some(t) = &meta.target {
        line("target", &join(t));
    }
    if let Some(p) = &meta.permutation {
        line("permutation", &join(p));
    }
    out.push_str("rows\n");
    for (i, player) in masses.iter().enumerate() {
        for (ex, mass) in player.support() {
            let point = match &ex.point {
                Point::Index(x) if Some(*x) == meta.bottom => "bot".to_string(),
                Point::Index(x) => x.to_string(),
                Point::Features(v) => format!(
                    "v:{}",
                    v.iter().map(f64::to_string).collect::<Vec<_>>().join(",")
                ),
            };
            writeln!(out, "{i} {point} {} {mass}", ex.label).expect("writing to a String");
        }
    }
    Ok(out)
}

struct Cursor<'a> {
    path: &'a str,
    line: usize,
}

impl Cursor<'_> {
    fn err(&self, message: impl Into<String>) -> Error {
        Error::Parse {
            path: self.path.to_string(),
            line: self.line,
            message: message.into(),
        }
    }

    fn num<T: FromStr>(&self, what: &str, s: &str) -> Result<T> {
        s.parse()
            .map_err(|_| self.err(format!("cannot parse {what} `{s}`")))
    }

    fn list<T: FromStr>(&self, what: &str, s: &str) -> Result<Vec<T>> {
        s.split_whitespace().map(|t| self.num(what, t)).collect()
    }
}

pub fn parse(text: &str, path: &str) -> Result<(Instance, InstanceMeta)> {
    let mut cur = Cursor { path, line: 1 };
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
    if lines.next().map(|(_, l)| l) != Some(FORMAT_HEADER) {
        return Err(cur.err(format!("expected header `{FORMAT_HEADER}`")));
    }

    let mut meta = InstanceMeta::default();
    let (mut id, mut k, mut learner) = (None, None, None);
    let mut saw_rows = false;
    for (n, l) in lines.by_ref() {
        cur.line = n;
        if l.is_empty() || l.starts_with('#') {
            continue;
        }
        if l == "rows" {
            saw_rows = true;
            break;
        }
        let (key, value) = l
            .split_once(' ')
            .ok_or_else(|| cur.err("expected `key value`"))?;
        let value = value.trim();
        match key {
            "id" => id = Some(value.to_string()),
            "generator" => meta.generator = value.to_string(),
            "seed" => meta.seed = cur.num("seed", value)?,
            "k" => k = Some(cur.num::<usize>("k", value)?),
            "learner" => learner = Some(parse_learner(&cur, value)?),
            "bottom" => meta.bottom = Some(cur.num("bottom", value)?),
            "target" => meta.target = Some(cur.list("label", value)?),
            "permutation" => meta.permutation = Some(cur.list("player index", value)?),
            _ => meta.params.push((key.to_string(), value.to_string())),
        }
    }
    if !saw_rows {
        return Err(cur.err("missing `rows` line"));
    }
    let k = k.ok_or_else(|| cur.err("missing key `k`"))?;
    let learner = learner.ok_or_else(|| cur.err("missing key `learner`"))?;

    let mut supports: Vec<Vec<(LabeledExample, f64)>> = vec![Vec::new(); k];
    for (n, l) in lines {
        cur.line = n;
        if l.is_empty() || l.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = l.split_whitespace().collect();
        let [player, point, label, mass] = fields.as_slice() else {
            return Err(cur.err("expected `player point label mass`"));
        };
        let player: usize = cur.num("player", player)?;
        if player >= k {
            return Err(cur.err(format!("player {player} out of range for k={k}")));
        }
        let point = match (*point, meta.bottom) {
            ("bot", Some(b)) => Point::Index(b),
            ("bot", None) => return Err(cur.err("`bot` used without a `bottom` key")),
            (p, _) => match p.strip_prefix("v:") {
                Some(v) => Point::features(
                    v.split(',')
                        .map(|x| cur.num("feature", x))
                        .collect::<Result<_>>()?,
                ),
                None => Point::Index(cur.num("point", p)?),
            },
        };
        supports[player].push((
            LabeledExample::new(point, cur.num("label", label)?),
            cur.num("mass", mass)?,
        ));
    }
    let players = supports
        .into_iter()
        .enumerate()
        .map(|(i, s)| {
            PointMassDistribution::new(s)
                .map(SampleOracle::point_mass)
                .map_err(|e| cur.err(format!("player {i}: {e}")))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut instance = Instance::new(
        id.unwrap_or_else(|| meta.generator.clone()),
        players,
        learner,
    )?;
    if let (None, Some(b)) = (instance.domain_size, meta.bottom) {
        instance.domain_size = Some(b + 1);
    }
    Ok((instance, meta))
}

fn parse_learner(cur: &Cursor, value: &str) -> Result<LearnerSpec> {
    let parts: Vec<&str> = value.split_whitespace().collect();
    match parts.as_slice() {
        ["all-binary", n, pinned] => {
            let pinned = match *pinned {
                "none" => None,
                z => Some(cur.num("pinned point", z)?),
            };
            let class = FiniteHypothesisClass::all_binary(cur.num("domain size", n)?, pinned)
                .map_err(|e| cur.err(e.to_string()))?;
            Ok(LearnerSpec::Erm(class))
        }
        ["tree", depth, leaf] => Ok(LearnerSpec::Tree(TreeParams {
            max_depth: cur.num("max depth", depth)?,
            min_leaf: cur.num("min leaf", leaf)?,
        })),
        _ => Err(cur.err(format!("unsupported learner `{value}`"))),
    }
}
