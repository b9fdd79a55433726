use std::fmt::Write;

use serde_json::{json, Value};

use attrkit::attractor::{
    c3_bound, c3_bound_ample, central_charge, charge_map, minimize_z_norm, solve_positive_rank, solve_rank_zero,
    surface_existence_check, threefold_existence_check, z_norm_gradient, AttVerdict, AttractorError,
    AttractorSolution, MinimizeOptions,
};
use attrkit::boundstates::{extension_chern, guess_bound, j_closure};
use attrkit::catalog::{
    jardim_record, monad_chern, smallest_violating_monad, surface_index_bounds, tangent_quintic, yoshioka_check,
    SurfaceKind,
};
use attrkit::chern::{bogomolov, mukai};
use attrkit::io::{parse_record, parse_records, parse_surface_bound_input, parse_surface_bundle};
use attrkit::pushforward::{divisor_chern, grr_push, grr_push_contracted, push_mukai, SurfaceBundleRecord};
use attrkit::rational::{q as qi, to_f64, vec_to_f64};
use attrkit::report::{BoundEntry, BoundsReport, EntryStatus};
use attrkit::{ChernRecord, ConeStatus, Error, EvenClass, Q, ThreefoldData};
use num_traits::Zero;

use crate::render::{basis, f, fs, q, qs};
use crate::Settings;

pub const INTERIOR: u8 = 0;
pub const BOUNDARY: u8 = 1;
pub const OUTSIDE: u8 = 2;
pub const INPUT_ERROR: u8 = 3;

pub struct Outcome {
    pub json: Value,
    pub text: String,
    pub code: u8,
}

fn verdict_code(v: AttVerdict) -> u8 {
    match v {
        AttVerdict::Interior => INTERIOR,
        AttVerdict::Boundary => BOUNDARY,
        AttVerdict::Outside => OUTSIDE,
    }
}

fn verdict_name(code: u8) -> &'static str {
    match code {
        INTERIOR => "interior",
        BOUNDARY => "boundary",
        OUTSIDE => "outside",
        _ => "undecided",
    }
}

fn unit(g: &ThreefoldData, a: usize) -> Vec<Q> {
    (0..g.b2()).map(|b| if a == b { qi(1) } else { Q::zero() }).collect()
}

/// Ample basis classes, or the all-ones class when no basis class is ample.
fn polarizations(g: &ThreefoldData) -> Vec<(String, Vec<Q>)> {
    let mut out: Vec<(String, Vec<Q>)> = (0..g.b2())
        .map(|a| (basis(a), unit(g, a)))
        .filter(|(_, v)| g.cone_check_q(v).interior())
        .collect();
    if out.is_empty() {
        let ones = vec![qi(1); g.b2()];
        if g.cone_check_q(&ones).interior() {
            out.push(("sum".into(), ones));
        }
    }
    out
}

fn worst(report: &BoundsReport) -> u8 {
    report.entries.iter().fold(INTERIOR, |code, e| match e.status {
        EntryStatus::Violated => OUTSIDE,
        EntryStatus::Boundary => code.max(BOUNDARY),
        _ => code,
    })
}

fn renamed(mut e: BoundEntry, id: String) -> BoundEntry {
    e.id = id;
    e
}

fn record_json(c: &ChernRecord) -> Value {
    serde_json::to_value(c).expect("records serialize")
}

fn classes_json(c: &ChernRecord, g: &ThreefoldData) -> Value {
    json!({ "c2_pair": c.c2(g).iter().map(q).collect::<Vec<_>>(), "c3": q(&c.c3(g)) })
}

fn record_line(c: &ChernRecord, g: &ThreefoldData) -> String {
    format!(
        "rank {}  c1 {}  ch2 {}  ch3 {}  c2 {}  c3 {}",
        q(&c.rank),
        qs(&c.c1),
        qs(&c.ch2),
        q(&c.ch3),
        qs(&c.c2(g)),
        q(&c.c3(g))
    )
}

fn class_json(x: &EvenClass<Q>) -> Value {
    json!({
        "d0": q(&x.d0),
        "d2": x.d2.iter().map(q).collect::<Vec<_>>(),
        "d4": x.d4.iter().map(q).collect::<Vec<_>>(),
        "d6": q(&x.d6),
    })
}

fn failure_json(e: &AttractorError) -> Value {
    let mut v = json!({ "status": e.label(), "detail": e.to_string() });
    match e {
        AttractorError::NoRealHTilde { target } => v["target"] = json!(target),
        AttractorError::HTildeOutsideCone { h_tilde, margin } => {
            v["H_tilde"] = json!(h_tilde);
            v["margin"] = json!(margin);
        }
        AttractorError::C3BoundViolated { c3, bound, s } | AttractorError::C3Saturated { c3, bound, s } => {
            v["c3"] = json!(c3);
            v["bound"] = json!(bound);
            v["s"] = json!(s);
        }
        AttractorError::DiscriminantNegative { discriminant } => v["discriminant"] = json!(q(discriminant)),
        AttractorError::Inaccurate { residual } => v["residual"] = json!(residual),
        _ => {}
    }
    v
}

fn solution_text(s: &AttractorSolution, out: &mut String) {
    if let Some(h) = &s.h_tilde {
        let _ = writeln!(out, "  H_tilde   {}", fs(h));
    }
    let _ = writeln!(out, "  xi        {}", f(s.xi));
    if let Some(x) = &s.xi_sq {
        let _ = writeln!(out, "  xi^2      {}", q(x));
    }
    if let Some(l) = s.lambda {
        let _ = writeln!(out, "  lambda    {}", f(l));
    }
    let _ = writeln!(out, "  B         {}", fs(&s.b));
    let _ = writeln!(out, "  J         {}", fs(&s.j));
    let _ = writeln!(out, "  C_bar     {} {} i", f(s.c_bar.re), f(s.c_bar.im));
    let _ = writeln!(out, "  residual  {:e}", s.residual);
    let _ = writeln!(out, "  cone      {:?}", s.cone_status);
    let _ = writeln!(out, "  large volume {}", s.large_volume);
}

fn attractor_section(
    att: &Result<AttractorSolution, AttractorError>,
    out: &mut String,
) -> Result<(Value, u8), Error> {
    match att {
        Ok(s) => {
            let _ = writeln!(out, "attractor point:");
            solution_text(s, out);
            Ok((json!({ "status": "solved", "solution": s }), verdict_code(s.verdict())))
        }
        Err(AttractorError::Input(e)) => Err(e.clone()),
        Err(e) => {
            let _ = writeln!(out, "attractor: {} ({e})", e.label());
            Ok((failure_json(e), e.verdict().map_or(INPUT_ERROR, verdict_code)))
        }
    }
}

pub fn check_record(g: &ThreefoldData, c: &ChernRecord, settings: &Settings) -> Result<Outcome, Error> {
    c.check(g)?;
    if c.rank.is_zero() {
        return Err(Error::Inconsistent(
            "rank-zero charges are checked from a surface-bundle record with --divisor".into(),
        ));
    }
    if c.rank < Q::zero() {
        return Err(Error::Rank("nonnegative"));
    }
    let mut text = String::new();
    let _ = writeln!(text, "geometry {} (b2 = {})", g.name(), g.b2());
    let _ = writeln!(text, "record   {}", record_line(c, g));

    let mut report = BoundsReport::default();
    for a in 0..g.b2() {
        let lhs = bogomolov(c, &unit(g, a), g)?;
        report.push(BoundEntry::exact(
            &format!("bogomolov[{}]", basis(a)),
            "Δ2·J >= 0",
            lhs,
            qi(0),
            attrkit::report::Relation::Ge,
        ));
    }

    let att = solve_positive_rank(c, g);
    let (att_json, code) = attractor_section(&att, &mut text)?;

    match c3_bound(c, g) {
        Ok(e) => report.push(e),
        Err(e) => report.notes.push(format!("c3 bound not evaluated: {}", e.label())),
    }
    for (name, w) in polarizations(g) {
        match c3_bound_ample(c, &vec_to_f64(&w), g) {
            Ok(e) => report.push(renamed(e, format!("c3-ample[{name}]"))),
            Err(e) => report.notes.push(format!("c3 bound at {name} not evaluated: {e}")),
        }
    }
    if c.rank > qi(1) {
        let ex = threefold_existence_check(c, g)?;
        for e in ex.entries {
            let id = format!("existence/{}", e.id);
            report.push(renamed(e, id));
        }
        report.notes.extend(ex.notes.into_iter().map(|n| format!("existence: {n}")));
    }
    if let Some(cc) = &settings.const_c {
        if c.c1.iter().all(Zero::is_zero) {
            for (name, w) in polarizations(g) {
                let e = guess_bound(c, &vec_to_f64(&w), g, cc)?;
                report.push(renamed(e, format!("guess[{name}]")));
            }
        } else {
            report.notes.push("speculative bound skipped: c1 ≠ 0".into());
        }
    }
    let _ = writeln!(text, "bounds:");
    text.push_str(&indent(&report.to_table()));

    let charge = charge_map(c, g, settings.a_matrix.as_deref())?;
    let _ = writeln!(
        text,
        "charge   p0 {}  p {}  q {}  q0 {}",
        q(&charge.p0),
        qs(&charge.p),
        qs(&charge.q),
        q(&charge.q0)
    );
    let mut json = json!({
        "geometry": g.name(),
        "record": record_json(c),
        "chern_classes": classes_json(c, g),
        "attractor": att_json,
        "bounds": report,
        "charge": charge,
    });
    if let Ok(s) = &att {
        if g.cone_check(&s.j).interior() {
            let z = central_charge(c, &s.b, &s.j, g, settings.corrections)?;
            let _ = writeln!(text, "central charge at attractor point  {} {} i", f(z.re), f(z.im));
            json["central_charge"] = json!([z.re, z.im]);
        }
    }
    let _ = writeln!(text, "verdict  {} (exit {code})", verdict_name(code));
    json["verdict"] = json!(verdict_name(code));
    json["exit_code"] = json!(code);
    Ok(Outcome { json, text, code })
}

fn indent(s: &str) -> String {
    s.lines().map(|l| format!("  {l}\n")).collect()
}

fn check_surface(g: &ThreefoldData, w: &SurfaceBundleRecord, divisor: &[Q]) -> Result<Outcome, Error> {
    w.validate(divisor, g)?;
    let mut text = String::new();
    let _ = writeln!(text, "geometry {} (b2 = {})", g.name(), g.b2());
    let _ = writeln!(
        text,
        "surface  rank {}  c1_sq {}  c1_dot_D {}  c2 {}  on D = {}",
        q(&w.rank),
        q(&w.c1_sq),
        q(&w.c1_dot_d),
        q(&w.c2_num),
        qs(divisor)
    );
    let att = solve_rank_zero(w, divisor, g);
    let (att_json, code) = attractor_section(&att, &mut text)?;
    let report = surface_existence_check(w, divisor, g)?;
    let _ = writeln!(text, "bounds:");
    text.push_str(&indent(&report.to_table()));
    let pushed = grr_push(w, divisor, g)?;
    let _ = writeln!(text, "pushforward  {}", record_line(&pushed, g));
    let _ = writeln!(text, "verdict  {} (exit {code})", verdict_name(code));
    let json = json!({
        "geometry": g.name(),
        "surface_bundle": w,
        "divisor": divisor.iter().map(q).collect::<Vec<_>>(),
        "pushforward": record_json(&pushed),
        "pushforward_chern_classes": classes_json(&pushed, g),
        "attractor": att_json,
        "bounds": report,
        "verdict": verdict_name(code),
        "exit_code": code,
    });
    Ok(Outcome { json, text, code })
}

pub fn check(g: &ThreefoldData, text: &str, divisor: Option<&[Q]>, settings: &Settings) -> Result<Outcome, Error> {
    let raw: Value = serde_json::from_str(text).map_err(|e| Error::Parse(format!("record: {e}")))?;
    if raw.get("c2_num").is_some() {
        let divisor = divisor.ok_or_else(|| Error::Inconsistent("a surface-bundle record needs --divisor".into()))?;
        return check_surface(g, &parse_surface_bundle(text)?, divisor);
    }
    check_record(g, &parse_record(text, g)?, settings)
}

pub fn minimize(
    g: &ThreefoldData,
    text: &str,
    start_b: Option<&[Q]>,
    start_j: Option<&[Q]>,
    settings: &Settings,
) -> Result<Outcome, Error> {
    let c = parse_record(text, g)?;
    c.check(g)?;
    let b0 = match start_b {
        Some(b) => vec_to_f64(b),
        None if !c.rank.is_zero() => c.c1.iter().map(|x| to_f64(&(x / &c.rank))).collect(),
        None => vec![0.0; g.b2()],
    };
    let j0 = start_j.map_or_else(|| vec![1.0; g.b2()], vec_to_f64);
    let opts = MinimizeOptions { final_barrier: settings.tol, ..MinimizeOptions::default() };
    let out = minimize_z_norm(&c, &b0, &j0, g, opts)?;
    let grad = if g.cone_check(&out.j).interior() {
        let gr = z_norm_gradient(&c, &out.b, &out.j, g)?;
        Some(gr.iter().fold(0.0f64, |m, x| m.max(x.abs())))
    } else {
        None
    };
    let mut t = String::new();
    let _ = writeln!(t, "geometry {} (b2 = {})", g.name(), g.b2());
    let _ = writeln!(t, "record   {}", record_line(&c, g));
    let _ = writeln!(t, "start    B {}  J {}", fs(&b0), fs(&j0));
    let _ = writeln!(t, "end      B {}  J {}", fs(&out.b), fs(&out.j));
    let _ = writeln!(t, "value    {}", f(out.value));
    if let Some(gn) = grad {
        let _ = writeln!(t, "gradient {:e}", gn);
    }
    let _ = writeln!(t, "status   {:?} after {} iterations", out.status, out.iterations);
    let mut json = json!({
        "geometry": g.name(),
        "record": record_json(&c),
        "chern_classes": classes_json(&c, g),
        "start": { "B": b0, "J": j0 },
        "result": out,
        "gradient_norm": grad,
    });
    if c.rank > Q::zero() {
        if let Ok(s) = solve_positive_rank(&c, g) {
            let dev = s
                .b
                .iter()
                .chain(&s.j)
                .zip(out.b.iter().chain(&out.j))
                .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
            let _ = writeln!(t, "analytic B {}  J {}  max deviation {:e}", fs(&s.b), fs(&s.j), dev);
            json["analytic"] = json!({ "B": s.b, "J": s.j, "max_deviation": dev });
        }
    }
    Ok(Outcome { json, text: t, code: 0 })
}

fn with_construction(mut out: Outcome, name: &str, extra: Value, lines: &str) -> Outcome {
    out.json["construction"] = json!(name);
    if let (Value::Object(m), Value::Object(e)) = (&mut out.json, extra) {
        m.extend(e);
    }
    out.text = format!("construction {name}\n{lines}{}", out.text);
    out
}

pub fn catalog_tangent(g: &ThreefoldData, settings: &Settings) -> Result<Outcome, Error> {
    let c = tangent_quintic(g)?;
    Ok(with_construction(check_record(g, &c, settings)?, "tangent-quintic", json!({}), ""))
}

pub fn catalog_monad(g: &ThreefoldData, r: i64, n: i64, settings: &Settings) -> Result<Outcome, Error> {
    let h = unit(g, 0);
    let m = monad_chern(r, n, &h, g)?;
    let threshold = smallest_violating_monad(r, &h, g, 1000)?.map(|(n, _)| n);
    let lines = format!(
        "  r {r}  n {n}  stability assumes large n\n  smallest n violating the c3 bound: {}\n",
        threshold.map_or("none up to 1000".into(), |n| n.to_string())
    );
    let extra = json!({ "r": r, "n": n, "requires_large_n": m.requires_large_n, "smallest_violating_n": threshold });
    Ok(with_construction(check_record(g, &m.record, settings)?, "monad", extra, &lines))
}

pub fn catalog_jardim(g: &ThreefoldData, settings: &Settings) -> Result<Outcome, Error> {
    let (c, rep) = jardim_record(g)?;
    let lines = format!("  threefold bounds:\n{}", indent(&indent(&rep.to_table())));
    let extra = json!({ "jardim_bounds": rep });
    Ok(with_construction(check_record(g, &c, settings)?, "jardim", extra, &lines))
}

pub fn catalog_extension(
    g: &ThreefoldData,
    p: i64,
    q_: i64,
    j: Option<Vec<Q>>,
    settings: &Settings,
) -> Result<Outcome, Error> {
    let j = j.unwrap_or_else(|| unit(g, 0));
    let c = extension_chern(p, q_, &j, g)?;
    let lines = format!("  p {p}  q {q_}  J {}\n", qs(&j));
    let extra = json!({ "p": p, "q": q_, "J": j.iter().map(q).collect::<Vec<_>>() });
    Ok(with_construction(check_record(g, &c, settings)?, "extension", extra, &lines))
}

pub fn closure(g: &ThreefoldData, text: &str, b: Option<&[Q]>, j: &[Q], settings: &Settings) -> Result<Outcome, Error> {
    let seeds = parse_records(text, g)?;
    let bq = b.map_or_else(|| vec![Q::zero(); g.b2()], <[Q]>::to_vec);
    let (bf, jf) = (vec_to_f64(&bq), vec_to_f64(j));
    let all = j_closure(&seeds, &bf, &jf, g, settings.budget)?;
    let mut t = String::new();
    let _ = writeln!(t, "closure at B {} J {} with budget {}", qs(&bq), qs(j), settings.budget);
    for (i, c) in all.iter().enumerate() {
        let tag = if i < seeds.len() { "seed" } else { "added" };
        let _ = writeln!(t, "{i:>4} {tag:<5} rank {}  c1 {}  ch2 {}  ch3 {}", q(&c.rank), qs(&c.c1), qs(&c.ch2), q(&c.ch3));
    }
    let json = json!({
        "geometry": g.name(),
        "B": bq.iter().map(q).collect::<Vec<_>>(),
        "J": j.iter().map(q).collect::<Vec<_>>(),
        "budget": settings.budget,
        "seed_count": seeds.len(),
        "records": all,
    });
    Ok(Outcome { json, text: t, code: 0 })
}

pub fn bounds(g: &ThreefoldData, text: &str, ws: &[Vec<Q>], settings: &Settings) -> Result<Outcome, Error> {
    let c = parse_record(text, g)?;
    c.check(g)?;
    if c.rank <= Q::zero() {
        return Err(Error::Rank("positive"));
    }
    let mut report = BoundsReport::default();
    for a in 0..g.b2() {
        report.push(BoundEntry::exact(
            &format!("bogomolov[{}]", basis(a)),
            "Δ2·J >= 0",
            bogomolov(&c, &unit(g, a), g)?,
            qi(0),
            attrkit::report::Relation::Ge,
        ));
    }
    match c3_bound(&c, g) {
        Ok(e) => report.push(e),
        Err(AttractorError::Input(e)) => return Err(e),
        Err(e) => report.notes.push(format!("c3 bound not evaluated: {}", e.label())),
    }
    let named: Vec<(String, Vec<Q>)> = if ws.is_empty() {
        polarizations(g)
    } else {
        ws.iter().map(|w| (qs(w), w.clone())).collect()
    };
    for (name, w) in &named {
        match c3_bound_ample(&c, &vec_to_f64(w), g) {
            Ok(e) => report.push(renamed(e, format!("c3-ample[{name}]"))),
            Err(AttractorError::Input(e)) => return Err(e),
            Err(e) => report.notes.push(format!("c3 bound at {name}: {e}")),
        }
        if c.c1.iter().all(Zero::is_zero) {
            let cc = settings.const_c.clone().unwrap_or_default();
            report.push(renamed(guess_bound(&c, &vec_to_f64(w), g, &cc)?, format!("guess[{name}]")));
        }
    }
    if c.rank > qi(1) {
        for e in threefold_existence_check(&c, g)?.entries {
            let id = format!("existence/{}", e.id);
            report.push(renamed(e, id));
        }
    }
    let code = worst(&report);
    let mut t = String::new();
    let _ = writeln!(t, "record   {}", record_line(&c, g));
    t.push_str(&report.to_table());
    let json = json!({ "geometry": g.name(), "record": record_json(&c), "chern_classes": classes_json(&c, g), "bounds": report, "exit_code": code });
    Ok(Outcome { json, text: t, code })
}

pub fn push(g: &ThreefoldData, text: &str, divisor: &[Q]) -> Result<Outcome, Error> {
    let w = parse_surface_bundle(text)?;
    w.validate(divisor, g)?;
    let s = divisor_chern(divisor, g)?;
    let contracted = grr_push_contracted(&w, divisor, g)?;
    let mut t = String::new();
    let _ = writeln!(
        t,
        "divisor  {}  D^3 {}  c2(D) {}  cone {:?}",
        qs(divisor),
        q(&s.d_cubed),
        q(&s.c2d),
        s.cone
    );
    if s.cone != ConeStatus::Interior {
        let _ = writeln!(t, "warning: divisor is not ample");
    }
    let _ = writeln!(t, "c1 {}  ch2·D {}  ch3 {}", qs(&contracted.c1), q(&contracted.ch2_dot_d), q(&contracted.ch3));
    let mut json = json!({
        "geometry": g.name(),
        "divisor": divisor.iter().map(q).collect::<Vec<_>>(),
        "divisor_data": {
            "D_cubed": q(&s.d_cubed),
            "c1D_sq": q(&s.c1d_sq),
            "c2D": q(&s.c2d),
            "cone": s.cone,
        },
        "contracted": {
            "c1": contracted.c1.iter().map(q).collect::<Vec<_>>(),
            "ch2_dot_D": q(&contracted.ch2_dot_d),
            "ch3": q(&contracted.ch3),
        },
    });
    if w.c1_lift.is_some() {
        let rec = grr_push(&w, divisor, g)?;
        let gamma = push_mukai(&w, divisor, g)?.0;
        debug_assert_eq!(gamma, mukai(&rec, g).0);
        let _ = writeln!(t, "record   {}", record_line(&rec, g));
        let _ = writeln!(t, "mukai    d0 {}  d2 {}  d4 {}  d6 {}", q(&gamma.d0), qs(&gamma.d2), qs(&gamma.d4), q(&gamma.d6));
        json["record"] = record_json(&rec);
        json["chern_classes"] = classes_json(&rec, g);
        json["mukai"] = class_json(&gamma);
    } else {
        let _ = writeln!(t, "note: no c1 lift; only contractions with D are available");
    }
    Ok(Outcome { json, text: t, code: 0 })
}

pub fn surface_bounds(text: &str) -> Result<Outcome, Error> {
    let v = parse_surface_bound_input(text)?;
    let mut report = surface_index_bounds(&v)?;
    if v.surface_kind == SurfaceKind::K3 {
        report.push(yoshioka_check(&v)?);
    }
    let code = worst(&report);
    let json = json!({ "input": v, "bounds": report, "exit_code": code });
    Ok(Outcome { json, text: report.to_table(), code })
}
