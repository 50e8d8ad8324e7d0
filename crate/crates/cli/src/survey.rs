//! The quarter-plane survey over canonical representatives: group orders for
//! each direction and a D-finite/algebraic guess, one JSON line per rule.

use crate::commands::{class_json, counting_series, guess_result_json, scan_json};
use crate::output::{input, CliError};
use rayon::prelude::*;
use serde_json::{json, Map, Value};
use std::collections::{BTreeMap, HashSet};
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::Path;
use std::sync::Mutex;
use std::time::Instant;
use twostep::classify::{qp_canonical, Classification};
use twostep::dp::{quarter_totals_mod, P31};
use twostep::genfun::build_blocks;
use twostep::group::{group_of, GroupOrder};
use twostep::guess::{
    guess_algebraic_with, guess_ode_with, scan_algebraic_mod, scan_ode_mod, Kind, Method, ModularScan,
    DEFAULT_ALG_BOUNDS, DEFAULT_HELDOUT, DEFAULT_ODE_BOUNDS,
};
use twostep::{Dir, Plane, Rule, DIRS};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scope {
    Groups,
    Guess,
    Both,
}

impl Scope {
    pub fn parse(s: &str) -> Result<Scope, String> {
        match s {
            "groups" => Ok(Scope::Groups),
            "guess" => Ok(Scope::Guess),
            "both" => Ok(Scope::Both),
            _ => Err(format!("'{s}' is not a scope (groups, guess, both)")),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Scope::Groups => "groups",
            Scope::Guess => "guess",
            Scope::Both => "both",
        }
    }

    fn groups(self) -> bool {
        self != Scope::Guess
    }

    fn guess(self) -> bool {
        self != Scope::Groups
    }
}

#[derive(Clone, Debug)]
pub struct SurveyConfig {
    pub scope: Scope,
    pub cap: usize,
    pub assume_theta_independent: bool,
    pub terms: usize,
    pub ode_bounds: (usize, usize),
    pub alg_bounds: (usize, usize),
    pub heldout: usize,
    /// Exact counts and lifted relations instead of scans mod `2^31 - 1`.
    pub exact: bool,
    pub timings: bool,
}

impl Default for SurveyConfig {
    fn default() -> SurveyConfig {
        SurveyConfig {
            scope: Scope::Both,
            cap: twostep::group::DEFAULT_CAP,
            assume_theta_independent: false,
            terms: 500,
            ode_bounds: DEFAULT_ODE_BOUNDS,
            alg_bounds: DEFAULT_ALG_BOUNDS,
            heldout: DEFAULT_HELDOUT,
            exact: false,
            timings: false,
        }
    }
}

impl SurveyConfig {
    /// Rejects term counts too small for the ansatz grids before any work starts.
    pub fn validate(&self) -> Result<(), CliError> {
        if !self.scope.guess() {
            return Ok(());
        }
        let need = |(a, b): (usize, usize), extra: usize| (a + 1) * (b + 1) + self.heldout + extra;
        let need = need(self.ode_bounds, self.ode_bounds.0).max(need(self.alg_bounds, 0));
        if self.terms < need {
            return Err(input(format!("--terms {} is below the {need} terms the ansatz bounds need", self.terms)));
        }
        Ok(())
    }
}

fn order_json(o: GroupOrder) -> Value {
    match o {
        GroupOrder::Finite(n) => json!(n),
        GroupOrder::Infinite(_) => json!(o.to_string()),
    }
}

fn group_part(rule: Rule, cfg: &SurveyConfig) -> Value {
    let bs = build_blocks(rule);
    let dirs: &[Dir] = if cfg.assume_theta_independent { &DIRS[..1] } else { &DIRS };
    let mut orders = Map::new();
    let mut seen = Vec::new();
    for &d in dirs {
        match group_of(&bs, d, cfg.cap) {
            Ok(g) => {
                orders.insert(d.to_string(), order_json(g.order));
                seen.push(g.order);
            }
            Err(e) => {
                orders.insert(d.to_string(), json!(format!("error: {e}")));
            }
        }
    }
    let agree = if cfg.assume_theta_independent {
        Value::Null
    } else {
        json!(seen.len() == 4 && seen.iter().all(|&o| o == seen[0]))
    };
    json!({"cap": cfg.cap, "orders": orders, "theta_agree": agree})
}

fn scan_kind(s: &ModularScan) -> bool {
    matches!(s, ModularScan::Candidate { .. })
}

/// D-finite guess first; an algebraic guess only when that succeeds.
fn guess_part(rule: Rule, cfg: &SurveyConfig) -> Value {
    if cfg.exact {
        let s = counting_series(rule, Plane::Quarter, None, cfg.terms);
        let ode = guess_ode_with(&s, cfg.ode_bounds, cfg.heldout, Method::Modular);
        let ode = match ode {
            Ok(g) => g,
            Err(e) => return json!({"method": "exact", "terms": cfg.terms, "kind": "none", "error": e.to_string()}),
        };
        let alg = if ode.kind == Kind::DFinite {
            guess_algebraic_with(&s, cfg.alg_bounds, cfg.heldout, Method::Modular).ok()
        } else {
            None
        };
        let kind = match &alg {
            Some(a) if a.kind == Kind::Algebraic => Kind::Algebraic,
            _ => ode.kind,
        };
        return json!({
            "method": "exact",
            "terms": cfg.terms,
            "kind": kind.name(),
            "ode": guess_result_json(&ode),
            "algebraic": alg.as_ref().map(guess_result_json),
        });
    }
    let s = quarter_totals_mod(rule, cfg.terms.saturating_sub(1));
    let ode = match scan_ode_mod(&s, P31, cfg.ode_bounds, cfg.heldout) {
        Ok(o) => o,
        Err(e) => return json!({"method": "modular", "terms": cfg.terms, "kind": "none", "error": e.to_string()}),
    };
    let alg = if scan_kind(&ode) { scan_algebraic_mod(&s, P31, cfg.alg_bounds, cfg.heldout).ok() } else { None };
    let kind = match (&alg, scan_kind(&ode)) {
        (Some(a), _) if scan_kind(a) => Kind::Algebraic,
        (_, true) => Kind::DFinite,
        _ => Kind::None,
    };
    json!({
        "method": "modular",
        "prime": P31,
        "terms": cfg.terms,
        "kind": kind.name(),
        "ode": scan_json(&ode, cfg.ode_bounds),
        "algebraic": alg.as_ref().map(|a| scan_json(a, cfg.alg_bounds)),
    })
}

/// One survey record. Deterministic unless timings are requested.
pub fn survey_record(rule: Rule, cfg: &SurveyConfig) -> Value {
    let mut rec = json!({
        "scope": cfg.scope.name(),
        "rule": rule.encode(),
        "int": rule.0,
        "canonical": qp_canonical(rule) == rule,
        "class": class_json(&Classification::of(rule)),
    });
    let o = rec.as_object_mut().unwrap();
    let mut times = Map::new();
    if cfg.scope.groups() {
        let t = Instant::now();
        o.insert("group".into(), group_part(rule, cfg));
        times.insert("group_ms".into(), json!(t.elapsed().as_millis() as u64));
    }
    if cfg.scope.guess() {
        let t = Instant::now();
        o.insert("guess".into(), guess_part(rule, cfg));
        times.insert("guess_ms".into(), json!(t.elapsed().as_millis() as u64));
    }
    if cfg.timings {
        o.insert("timings".into(), Value::Object(times));
    }
    rec
}

/// Complete records already in `path`; a partial last line (from an
/// interrupted run) is cut off so appends stay line-aligned.
pub fn load_records(path: &Path) -> Result<Vec<Value>, CliError> {
    if !path.exists() {
        return Ok(Vec::new());
    }
    let mut records = Vec::new();
    let mut good = 0u64;
    let mut reader = BufReader::new(File::open(path)?);
    let mut line = String::new();
    loop {
        line.clear();
        let n = reader.read_line(&mut line)?;
        if n == 0 || !line.ends_with('\n') {
            break;
        }
        match serde_json::from_str::<Value>(&line) {
            Ok(v) if v.get("int").is_some() => records.push(v),
            _ => break,
        }
        good += n as u64;
    }
    let f = OpenOptions::new().write(true).open(path)?;
    if f.metadata()?.len() != good {
        f.set_len(good)?;
    }
    Ok(records)
}

#[derive(Clone, Debug, Default)]
pub struct Summary {
    pub records: usize,
    pub new: usize,
    /// Group order (or `infinite(cap)`) of `G_e` to number of rules.
    pub histogram: BTreeMap<String, usize>,
    pub theta_disagreements: Vec<String>,
    pub guess_kinds: BTreeMap<String, usize>,
}

impl Summary {
    pub fn of(records: &[Value], new: usize) -> Summary {
        let mut s = Summary { records: records.len(), new, ..Summary::default() };
        for r in records {
            if let Some(g) = r.get("group") {
                let e = &g["orders"]["e"];
                let key = match e {
                    Value::String(s) => s.clone(),
                    v => v.to_string(),
                };
                *s.histogram.entry(key).or_default() += 1;
                if g["theta_agree"] == json!(false) {
                    s.theta_disagreements.push(r["rule"].as_str().unwrap_or_default().to_string());
                }
            }
            if let Some(k) = r.get("guess").and_then(|g| g["kind"].as_str()) {
                *s.guess_kinds.entry(k.to_string()).or_default() += 1;
            }
        }
        s
    }

    /// Histogram keyed as in the published table: `infinite` for any cap.
    pub fn orders(&self) -> BTreeMap<String, usize> {
        let mut out = BTreeMap::new();
        for (k, v) in &self.histogram {
            let key = if k.starts_with("infinite") { "infinite".to_string() } else { k.clone() };
            *out.entry(key).or_default() += v;
        }
        out
    }

    pub fn to_json(&self) -> Value {
        json!({
            "records": self.records,
            "new": self.new,
            "group_orders": self.orders(),
            "theta_disagreements": self.theta_disagreements,
            "guess_kinds": self.guess_kinds,
        })
    }
}

/// Records for `rules`, in the order given.
pub fn survey_in_memory(rules: &[Rule], cfg: &SurveyConfig) -> Vec<Value> {
    rules.par_iter().map(|&r| survey_record(r, cfg)).collect()
}

/// Runs the survey, appending to `out` and skipping rules it already holds.
/// Without a file each record goes to `sink` as a JSON line.
pub fn run_survey(
    rules: &[Rule],
    cfg: &SurveyConfig,
    out: Option<&Path>,
    sink: &mut (dyn Write + Send),
) -> Result<Summary, CliError> {
    cfg.validate()?;
    let existing = match out {
        Some(p) => load_records(p)?,
        None => Vec::new(),
    };
    if let Some(r) = existing.iter().find(|r| r["scope"] != json!(cfg.scope.name())) {
        return Err(input(format!(
            "resume file holds records of scope {}, not {}",
            r["scope"],
            cfg.scope.name()
        )));
    }
    let done: HashSet<u64> = existing.iter().filter_map(|r| r["int"].as_u64()).collect();
    let todo: Vec<Rule> = rules.iter().copied().filter(|r| !done.contains(&(r.0 as u64))).collect();
    let file = match out {
        Some(p) => Some(OpenOptions::new().create(true).append(true).open(p)?),
        None => None,
    };
    let writer: Mutex<Box<dyn Write + Send + '_>> = Mutex::new(match file {
        Some(f) => Box::new(f),
        None => Box::new(sink),
    });
    let fresh: Vec<Value> = todo
        .par_iter()
        .map(|&r| {
            let rec = survey_record(r, cfg);
            let mut w = writer.lock().unwrap();
            writeln!(w, "{rec}")?;
            w.flush()?;
            Ok(rec)
        })
        .collect::<Result<_, std::io::Error>>()?;
    let wanted: HashSet<u16> = rules.iter().map(|r| r.0).collect();
    let mut all: Vec<Value> =
        existing.into_iter().filter(|r| r["int"].as_u64().is_some_and(|k| wanted.contains(&(k as u16)))).collect();
    let new = fresh.len();
    all.extend(fresh);
    Ok(Summary::of(&all, new))
}
