//! Single-rule queries and the census.

use crate::output::{failed, input, CliError, Output, Table, EXIT_MISMATCH};
use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde_json::{json, Map, Value};
use twostep::asymptotics::{perron, rat_f64, spectral_radius, Analysis};
use twostep::classify::{
    census_with, in_q, in_u, in_v, is_aperiodic, is_vertically_unbounded, period, primitivity_exponent, qp_canonical,
    Classification, Sets,
};
use twostep::dp::{quarter_totals_mod, totals_exact, Enumeration, P31};
use twostep::genfun::{at_one, build_blocks, quarter_plane_equation, solve_half_plane};
use twostep::group::{generate_group, orbit_sum_solve, GroupOrder, FINGERPRINT_SEED};
use twostep::guess::{
    guess_algebraic_with, guess_ode_with, scan_algebraic_mod, scan_ode_mod, GuessResult, Method, ModularScan,
};
use twostep::{Dir, Plane, Rule};
use twostep_algebra::{parse_ratfunc, series_expand, RatFunc};

type Result<T> = std::result::Result<T, CliError>;

pub fn rule_json(r: Rule) -> Value {
    let m: Vec<String> = r.matrix().iter().map(|row| row.iter().map(|b| b.to_string()).collect()).collect();
    json!({"rule": r.encode(), "int": r.0, "matrix": m})
}

pub fn encode(value: &str) -> Result<Output> {
    let t = value.replace(['/', ','], ".");
    let r = crate::input::parse_rule(&t).map_err(input)?;
    Ok(Output::json(rule_json(r)))
}

pub fn decode(bits: &str) -> Result<Output> {
    let r = Rule::decode(bits).map_err(input)?;
    Ok(Output::json(rule_json(r)))
}

pub fn class_json(c: &Classification) -> Value {
    json!({
        "connected": c.connected,
        "aperiodic": c.aperiodic,
        "period": c.period,
        "north_bound": c.north_bound,
        "south_bound": c.south_bound,
        "east_bound": c.east_bound,
        "west_bound": c.west_bound,
        "se_bound": c.se_bound,
        "nw_bound": c.nw_bound,
        "sw_bound": c.sw_bound,
        "glued": c.glued,
    })
}

pub fn classify(r: Rule) -> Result<Output> {
    let c = Classification::of(r);
    let mut v = rule_json(r);
    let o = v.as_object_mut().unwrap();
    if let Value::Object(bits) = class_json(&c) {
        o.extend(bits);
    }
    o.insert("primitivity_exponent".into(), json!(primitivity_exponent(r)));
    o.insert("vertically_unbounded".into(), json!(c.vertically_unbounded()));
    o.insert("horizontally_unbounded".into(), json!(c.horizontally_unbounded()));
    o.insert("cardinally_unbounded".into(), json!(c.cardinally_unbounded()));
    o.insert("diagonally_unbounded".into(), json!(c.diagonally_unbounded()));
    o.insert("in_v".into(), json!(in_v(r)));
    o.insert("in_u".into(), json!(in_u(r)));
    o.insert("in_q".into(), json!(in_q(r)));
    o.insert("qp_canonical".into(), json!(qp_canonical(r).encode()));
    Ok(Output::json(v))
}

pub fn census(verify: bool, shards: usize, by_orbits: bool) -> Result<Output> {
    let c = census_with(&Sets::compute_sharded(shards), by_orbits);
    let mut counts = Map::new();
    let mut t = Table::new(&["key", "count"]);
    for (k, v) in c.ordered() {
        counts.insert(k.into(), json!(v));
        t.rows.push(vec![k.into(), v.to_string()]);
    }
    if !verify {
        return Ok(Output::json(Value::Object(counts)).with_table(t));
    }
    let bad = c.mismatches();
    let mismatches: Vec<Value> = bad.iter().map(|(k, got, want)| json!({"key": k, "got": got, "expected": want})).collect();
    let out = json!({"verified": bad.is_empty(), "counts": counts, "mismatches": mismatches});
    let status = if bad.is_empty() { 0 } else { EXIT_MISMATCH };
    Ok(Output::json(out).with_table(t).with_status(status))
}

fn ratio(a: &BigUint, b: &BigUint) -> String {
    if b == &BigUint::default() {
        return "nan".into();
    }
    let q = BigRational::new(a.clone().into(), b.clone().into());
    q.to_f64().map(|f| f.to_string()).unwrap_or_else(|| "nan".into())
}

pub struct SeriesArgs {
    pub rule: Rule,
    pub plane: Plane,
    pub length: usize,
    pub weights: Option<(BigRational, BigRational)>,
    pub theta: Option<Dir>,
    pub by_endpoint: bool,
    pub axis_stats: bool,
}

pub fn series(a: &SeriesArgs) -> Result<Output> {
    if a.length == 0 {
        return Err(input("--length must be at least 1"));
    }
    let e = Enumeration::run(a.rule, a.plane, a.length);
    let head = json!({"rule": a.rule.encode(), "plane": a.plane.name(), "length": a.length});
    if a.by_endpoint {
        let mut t = Table::new(&["m", "a", "b", "e", "n", "w", "s"]);
        for m in 1..=a.length {
            for (&(x, y), c) in e.layer(m) {
                let mut row = vec![m.to_string(), x.to_string(), y.to_string()];
                row.extend(c.iter().map(|v| v.to_string()));
                t.rows.push(row);
            }
        }
        return Ok(table_output(head, t));
    }
    let mut cols = vec!["m", "e", "n", "w", "s", "p", "px", "py", "po"];
    if a.axis_stats {
        cols.extend(["fx", "fy", "fo"]);
    }
    if a.weights.is_some() {
        cols.extend(["weighted_total", "mean_x", "mean_y"]);
    }
    let mut t = Table::new(&cols);
    for row in e.rows() {
        let mut cells = vec![row.m.to_string()];
        cells.extend(row.by_dir.iter().map(|v| v.to_string()));
        cells.extend([&row.p, &row.px, &row.py, &row.po].iter().map(|v| v.to_string()));
        if a.axis_stats {
            cells.extend([ratio(&row.px, &row.p), ratio(&row.py, &row.p), ratio(&row.po, &row.p)]);
        }
        if let Some((x, y)) = &a.weights {
            match e.weighted_stats(row.m, x, y, a.theta) {
                Ok(s) => cells.extend([s.total.to_string(), s.mean_x.to_string(), s.mean_y.to_string()]),
                Err(_) => cells.extend(["0".into(), "nan".into(), "nan".into()]),
            }
        }
        t.rows.push(cells);
    }
    Ok(table_output(head, t))
}

/// JSON form of a table: the header fields plus one object per row.
fn table_output(head: Value, t: Table) -> Output {
    let rows: Vec<Value> = t
        .rows
        .iter()
        .map(|r| Value::Object(t.header.iter().cloned().zip(r.iter().map(|c| json!(c))).collect()))
        .collect();
    let mut v = head;
    v.as_object_mut().unwrap().insert("rows".into(), Value::Array(rows));
    Output::json(v).with_table(t)
}

pub const BLOCKS: &str = "F, X, Z, A, B, C, D, L, J, G_e, G_n, G_w, G_s, H, Hstar, equation";

pub fn genfun(rule: Rule, theta: Dir, block: &str, series: Option<usize>) -> Result<Output> {
    let bs = build_blocks(rule);
    let tb = bs.of(theta);
    let name = block.to_ascii_lowercase();
    let mut out = json!({"rule": rule.encode(), "theta": theta.to_string(), "block": block});
    let o = out.as_object_mut().unwrap();
    if name == "equation" {
        let eq = quarter_plane_equation(rule, theta);
        o.insert("value".into(), json!(eq.text()));
        for (k, f) in [("B", &eq.b), ("L", &eq.l), ("D", &eq.d), ("J", &eq.j)] {
            o.insert(k.into(), json!(f.to_string()));
        }
        return Ok(Output::json(out));
    }
    if name == "h" || name == "hstar" {
        let Some(n) = series else {
            return Err(input("the half-plane blocks H and Hstar are series only: pass --series N"));
        };
        if !is_vertically_unbounded(rule) {
            return Err(input(format!("rule {rule} is not vertically unbounded")));
        }
        let sol = solve_half_plane(rule, theta, n).map_err(failed)?;
        let s = if name == "h" { &sol.h[theta.index()] } else { &sol.h_star };
        o.insert("series".into(), json!(s.to_string()));
        return Ok(Output::json(out));
    }
    let f: RatFunc = match name.as_str() {
        "f" => bs.f(theta),
        "x" => bs.x_block(theta),
        "z" => bs.z_block(theta),
        "a" => tb.a.clone(),
        "b" => tb.b.clone(),
        "c" => tb.c.clone(),
        "d" => tb.d.clone(),
        "l" => tb.l.clone(),
        "j" => tb.j.clone(),
        g if g.starts_with('g') => {
            let k = g.trim_start_matches('g').trim_start_matches('_');
            let d = Dir::parse(k).ok_or_else(|| input(format!("unknown block '{block}'")))?;
            tb.g[d.index()].clone()
        }
        _ => return Err(input(format!("unknown block '{block}'; expected one of {BLOCKS}"))),
    };
    o.insert("value".into(), json!(f.to_string()));
    if let Some(n) = series {
        let s = series_expand(&f, n).map_err(failed)?;
        o.insert("series".into(), json!(s.to_string()));
    }
    Ok(Output::json(out))
}

pub fn asymptotics(rule: Rule, x: &BigRational, y: &BigRational, half_plane: bool) -> Result<Output> {
    let (xf, yf) = (rat_f64(x), rat_f64(y));
    let mut out = json!({"rule": rule.encode(), "x": x.to_string(), "y": y.to_string()});
    let o = out.as_object_mut().unwrap();
    if !is_aperiodic(rule) {
        o.insert("periodic".into(), json!(true));
        o.insert("period".into(), json!(period(rule)));
        o.insert("mu".into(), json!(spectral_radius(rule, xf, yf)));
        return Ok(Output::json(out));
    }
    let an = Analysis::new(rule).map_err(failed)?;
    let p = perron(rule, xf, yf).map_err(input)?;
    let d = an.drift(xf, yf).map_err(failed)?;
    o.insert("periodic".into(), json!(false));
    o.insert("mu".into(), json!(p.mu));
    o.insert("rho".into(), json!(d.rho));
    o.insert("delta_x".into(), json!(d.delta_x));
    o.insert("delta_y".into(), json!(d.delta_y));
    o.insert("prefactor".into(), json!(p.prefactor()));
    let dir_pref: Vec<f64> = (0..4).map(|j| p.dir_prefactor(j)).collect();
    o.insert("dir_prefactor".into(), json!(dir_pref));
    if !half_plane {
        return Ok(Output::json(out));
    }
    if !is_vertically_unbounded(rule) {
        return Err(input(format!("rule {rule} is not vertically unbounded")));
    }
    let h = an.half_plane_regime(xf, yf).map_err(failed)?;
    let clean = |v: &[f64; 4]| -> Vec<Value> { v.iter().map(|&c| if c.is_finite() { json!(c) } else { Value::Null }).collect() };
    o.insert("tau".into(), json!(h.tau));
    o.insert("kappa".into(), json!(h.kappa));
    o.insert("lambda".into(), json!(h.lambda));
    o.insert("regime".into(), json!(h.regime.name()));
    o.insert("exponent".into(), json!(h.exponent()));
    o.insert("growth".into(), json!(h.growth));
    o.insert("prefactor".into(), if h.prefactor.is_finite() { json!(h.prefactor) } else { Value::Null });
    o.insert("constants".into(), Value::Array(clean(&h.constants)));
    o.insert("amplitude".into(), Value::Array(clean(&h.amplitude)));
    let exact = an.confirm_zero_drift(x, y).map_err(failed)?;
    o.insert("zero_drift_exact".into(), json!(exact));
    Ok(Output::json(out))
}

fn order_json(o: GroupOrder) -> Value {
    match o {
        GroupOrder::Finite(n) => json!(n),
        GroupOrder::Infinite(_) => json!(o.to_string()),
    }
}

pub fn group(rule: Rule, theta: Dir, cap: usize) -> Result<Output> {
    let g = generate_group(rule, theta, cap).map_err(failed)?;
    let elements: Vec<Value> = g
        .elements
        .iter()
        .zip(&g.substitutable)
        .map(|(e, &s)| json!({"element": e.text(), "word": e.word, "substitutable": s}))
        .collect();
    Ok(Output::json(json!({
        "rule": rule.encode(),
        "theta": theta.to_string(),
        "cap": cap,
        "seed": FINGERPRINT_SEED,
        "order": order_json(g.order),
        "phi": g.involutions.phi.to_string(),
        "psi": g.involutions.psi.to_string(),
        "elements": elements,
    })))
}

pub fn orbit_sum(rule: Rule, theta: Dir, order: usize, known_axis: Option<&str>) -> Result<Output> {
    let axis = match known_axis {
        Some(s) => {
            let f = parse_ratfunc(s).map_err(input)?;
            Some(series_expand(&f, order).map_err(input)?)
        }
        None => None,
    };
    let sol = orbit_sum_solve(rule, theta, order, axis.as_ref()).map_err(failed)?;
    let coeffs: Vec<String> = sol.coefficients.iter().map(|c| c.to_string()).collect();
    Ok(Output::json(json!({
        "rule": rule.encode(),
        "theta": theta.to_string(),
        "order": order,
        "status": sol.status.name(),
        "group_order": order_json(sol.group.order),
        "coefficients": coeffs,
        "rhs": sol.rhs.map(|r| r.to_string()),
        "series": sol.q.map(|q| q.to_string()),
    })))
}

pub struct GuessArgs {
    pub rule: Rule,
    pub plane: Plane,
    pub theta: Option<Dir>,
    pub terms: usize,
    pub algebraic: bool,
    pub bounds: (usize, usize),
    pub heldout: usize,
    pub modular: bool,
    pub exact_solver: bool,
}

pub fn guess_result_json(g: &GuessResult) -> Value {
    let coeffs: Vec<Vec<String>> = g.coeffs.iter().map(|c| c.iter().map(|k| k.to_string()).collect()).collect();
    json!({
        "kind": g.kind.name(),
        "ansatz": g.ansatz,
        "bounds": g.bounds,
        "terms_used": g.terms_used,
        "terms_heldout": g.terms_heldout,
        "tried": g.tried,
        "rejected": g.rejected,
        "relation": g.text(),
        "coeffs": coeffs,
    })
}

pub fn scan_json(s: &ModularScan, bounds: (usize, usize)) -> Value {
    match s {
        ModularScan::NoneProved { tried } => json!({"outcome": "none-proved", "bounds": bounds, "tried": tried}),
        ModularScan::Candidate { ansatz } => json!({"outcome": "candidate", "bounds": bounds, "ansatz": ansatz}),
    }
}

/// Counts at `(x, y) = (1, 1)` for `m = 0..terms`.
pub fn counting_series(rule: Rule, plane: Plane, theta: Option<Dir>, terms: usize) -> Vec<BigRational> {
    let m_max = terms.saturating_sub(1);
    match theta {
        None => totals_exact(rule, plane, m_max).into_iter().map(|n| BigRational::from_integer(n.into())).collect(),
        Some(d) => at_one(&Enumeration::run(rule, plane, m_max).series(d)),
    }
}

pub fn guess(a: &GuessArgs) -> Result<Output> {
    let mut out = json!({
        "rule": a.rule.encode(),
        "plane": a.plane.name(),
        "series": a.theta.map_or("p".to_string(), |d| d.to_string()),
        "terms": a.terms,
        "type": if a.algebraic { "algebraic" } else { "ode" },
    });
    let o = out.as_object_mut().unwrap();
    if a.modular {
        if a.plane != Plane::Quarter || a.theta.is_some() {
            return Err(input("--modular scans the quarter-plane totals only"));
        }
        let s = quarter_totals_mod(a.rule, a.terms.saturating_sub(1));
        let r = if a.algebraic { scan_algebraic_mod(&s, P31, a.bounds, a.heldout) } else { scan_ode_mod(&s, P31, a.bounds, a.heldout) };
        let r = r.map_err(input)?;
        o.insert("prime".into(), json!(P31));
        if let Value::Object(m) = scan_json(&r, a.bounds) {
            o.extend(m);
        }
        return Ok(Output::json(out));
    }
    let s = counting_series(a.rule, a.plane, a.theta, a.terms);
    let method = if a.exact_solver { Method::Exact } else { Method::Modular };
    let g = if a.algebraic {
        guess_algebraic_with(&s, a.bounds, a.heldout, method)
    } else {
        guess_ode_with(&s, a.bounds, a.heldout, method)
    }
    .map_err(input)?;
    if let Value::Object(m) = guess_result_json(&g) {
        o.extend(m);
    }
    Ok(Output::json(out))
}
