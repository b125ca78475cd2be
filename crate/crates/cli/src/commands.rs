//! One function per subcommand. Each returns the rendered output and
//! whether every structure stabilized.

use std::fmt::Write as _;
use std::path::Path;

use logkernel::codescent::{
    capitulation_kernel, iwasawa_invariants, level_decomposition, level_quotient, twisted_coinvariants, Finiteness,
    LambdaPresentation,
};
use logkernel::logarith::{log_class_group, LogOptions};
use logkernel::padic::is_prime;
use logkernel::quadfield::{is_squarefree, squarefree_part};
use logkernel::wildkernel::{
    cor14_triviality, corestriction_surjectivity, cubic_log_ramification, genus_rank_lower_bound, reflection_check,
    triviality_report, wk_structure, Corestriction, CyclicCubicField, TrivialityDecision,
};
use logkernel::{AbelianGroupStructure, Error, PadicInt, QuadField, Result};
use rand::seq::IndexedRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::args::{Format, GlobalOpts, ReportKind};
use crate::output::{field_name, render_group, to_csv, yes_no, StructureRow};

/// Rendered output of a command.
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub stabilized: bool,
}

impl Outcome {
    fn out(stdout: String, stabilized: bool) -> Self {
        Self { stdout, stderr: String::new(), stabilized }
    }
}

/// Largest accepted scan range.
const MAX_RANGE: i64 = 1_000_000;

fn options(g: &GlobalOpts) -> Result<LogOptions> {
    if g.ell == 2 || !is_prime(g.ell) {
        return Err(Error::InvalidInput(format!("ℓ = {} must be an odd prime", g.ell)));
    }
    Ok(LogOptions { start_precision: g.precision, max_precision: g.max_precision, ..LogOptions::default() })
}

/// `Q` for `d = 1`, otherwise `Q(√d)`.
fn field_of(d: i64) -> Result<QuadField> {
    if d == 1 {
        Ok(QuadField::rational())
    } else {
        QuadField::new(d)
    }
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

fn structure_of(k: &QuadField, ell: u64, opts: &LogOptions) -> Result<AbelianGroupStructure> {
    Ok(log_class_group(k, ell, opts)?.structure)
}

pub fn field(g: &GlobalOpts, d: i64) -> Result<Outcome> {
    let opts = options(g)?;
    let k = field_of(d)?;
    let s = structure_of(&k, g.ell, &opts)?;
    let row = StructureRow::new(d, g.ell, &field_name(&k), &s);
    let text = match g.format() {
        Format::Json => json(&row),
        Format::Csv => to_csv(&[row]),
        Format::Table => {
            let mut t = String::new();
            writeln!(t, "field        {}", field_name(&k)).unwrap();
            writeln!(t, "ell          {}", g.ell).unwrap();
            writeln!(t, "group        {}", render_group(g.ell, &s)).unwrap();
            writeln!(t, "precision    {}", s.precision_used).unwrap();
            writeln!(t, "stabilized   {}", yes_no(s.stabilized)).unwrap();
            writeln!(t, "certificate  {}", yes_no(s.finiteness_certificate)).unwrap();
            t
        }
    };
    Ok(Outcome::out(text, s.stabilized))
}

#[derive(Serialize)]
struct WkOut {
    d: i64,
    i: i64,
    r: u32,
    ell: u64,
    precision_used: u32,
    exponents: Vec<u32>,
    stabilized: bool,
    certificate: bool,
    source_field: String,
    character: Vec<u32>,
    full_exponents: Vec<u32>,
    candidate_status: String,
    k: StructureRow,
    k_star: StructureRow,
}

pub fn wk(g: &GlobalOpts, d: i64, i: i64, r: u32) -> Result<Outcome> {
    let opts = options(g)?;
    let report = wk_structure(d, i, r, g.ell, &opts)?;
    let k = QuadField::new(d)?;
    let k_star = field_of(squarefree_part(-3 * d))?;
    let sk = structure_of(&k, g.ell, &opts)?;
    let sks = structure_of(&k_star, g.ell, &opts)?;
    let source = report.source.field().map_or_else(|| field_name(&k), |f| field_name(&f));
    let q = &report.quotient_structure;
    let stabilized = report.full_candidate.stabilized && sk.stabilized && sks.stabilized;
    let out = WkOut {
        d,
        i,
        r,
        ell: g.ell,
        precision_used: q.precision_used,
        exponents: q.exponents.clone(),
        stabilized: report.full_candidate.stabilized,
        certificate: report.full_candidate.finiteness_certificate,
        source_field: source.clone(),
        character: report.character.exponents.clone(),
        full_exponents: report.full_candidate.exponents.clone(),
        candidate_status: format!("{:?}", report.candidate_status),
        k: StructureRow::new(d, g.ell, &field_name(&k), &sk),
        k_star: StructureRow::new(d, g.ell, &field_name(&k_star), &sks),
    };
    let text = match g.format() {
        Format::Json => json(&out),
        Format::Csv => to_csv(&[StructureRow {
            d,
            ell: g.ell,
            precision_used: out.precision_used,
            exponents: out.exponents.clone(),
            stabilized: out.stabilized,
            certificate: out.certificate,
            source_field: source,
        }]),
        Format::Table => {
            let mut t = String::new();
            writeln!(t, "d={d} i={i} r={r} ell={}", g.ell).unwrap();
            writeln!(t, "source       {} (character {:?})", out.source_field, out.character).unwrap();
            writeln!(t, "quotient     {}", render_group(g.ell, q)).unwrap();
            writeln!(t, "component    {} [{}]", render_group(g.ell, &report.full_candidate), out.candidate_status)
                .unwrap();
            for (name, f, s) in [("k", &k, &sk), ("k*", &k_star, &sks)] {
                writeln!(
                    t,
                    "{name:<12} {}: {} (precision {}, stabilized {})",
                    field_name(f),
                    render_group(g.ell, s),
                    s.precision_used,
                    yes_no(s.stabilized)
                )
                .unwrap();
            }
            writeln!(t, "trivial      {}", yes_no(report.is_trivial())).unwrap();
            t
        }
    };
    Ok(Outcome::out(text, stabilized))
}

#[derive(Serialize)]
struct ReflectionOut {
    d: i64,
    ell: u64,
    precision_used: u32,
    exponents: Vec<u32>,
    stabilized: bool,
    certificate: bool,
    source_field: String,
    mirror_field: String,
    mirror_exponents: Vec<u32>,
    rank_k: Option<usize>,
    rank_k_star: Option<usize>,
    delta: Option<i64>,
    within_bounds: Option<bool>,
    mirror_bound_holds: Option<bool>,
}

#[derive(Serialize)]
struct TrivialityOut {
    d: i64,
    ell: u64,
    precision_used: u32,
    exponents: Vec<u32>,
    stabilized: bool,
    certificate: bool,
    source_field: String,
    i: i64,
    wk_quotient_trivial: bool,
    exponent_quotient_trivial: bool,
    component_trivial: bool,
    consistent: bool,
}

#[derive(Serialize)]
struct GrossOut {
    d: i64,
    ell: u64,
    precision_used: u32,
    exponents: Vec<u32>,
    stabilized: bool,
    certificate: bool,
    source_field: String,
    rank: usize,
}

#[derive(Serialize)]
struct ScanSummary {
    report: String,
    rows: usize,
    skipped_non_squarefree: usize,
    excluded: usize,
    not_stabilized: usize,
    /// Reflection: every row has `0 ≤ δ ≤ 1`. Gross: every row is certified
    /// finite. Triviality: the three statements agree on every row.
    all_rows_hold: bool,
    /// Reflection only: every row has `0 ≤ rg_k* − rg_k ≤ 1`.
    #[serde(skip_serializing_if = "Option::is_none")]
    mirror_bound_held: Option<bool>,
}

#[derive(Serialize)]
struct ScanJson<T> {
    rows: Vec<T>,
    summary: ScanSummary,
}

fn reflection_row(d: i64, ell: u64, opts: &LogOptions) -> Result<ReflectionOut> {
    let k = QuadField::new(d)?;
    let k_star = QuadField::new(squarefree_part(-3 * d))?;
    let (row, sk, sks) = match reflection_check(d, ell, opts) {
        Ok(row) => {
            let (a, b) = (row.k_structure.clone(), row.k_star_structure.clone());
            (Some(row), a, b)
        }
        Err(Error::NotStabilized { .. }) => (None, structure_of(&k, ell, opts)?, structure_of(&k_star, ell, opts)?),
        Err(e) => return Err(e),
    };
    Ok(ReflectionOut {
        d,
        ell,
        precision_used: sk.precision_used.max(sks.precision_used),
        exponents: sk.exponents.clone(),
        stabilized: row.is_some(),
        certificate: sk.finiteness_certificate && sks.finiteness_certificate,
        source_field: field_name(&k),
        mirror_field: field_name(&k_star),
        mirror_exponents: sks.exponents.clone(),
        rank_k: row.as_ref().map(|r| r.rank_k),
        rank_k_star: row.as_ref().map(|r| r.rank_k_star),
        delta: row.as_ref().map(|r| r.delta),
        within_bounds: row.as_ref().map(|r| r.within_bounds()),
        mirror_bound_holds: row.as_ref().map(|r| r.mirror_bound_holds()),
    })
}

fn triviality_row(d: i64, i: i64, ell: u64, opts: &LogOptions) -> Result<TrivialityOut> {
    let t = triviality_report(d, i, ell, opts)?;
    let full = &t.report.full_candidate;
    let source =
        t.report.source.field().map_or_else(|| field_name(&QuadField::new(d).expect("valid d")), |f| field_name(&f));
    Ok(TrivialityOut {
        d,
        ell,
        precision_used: full.precision_used,
        exponents: full.exponents.clone(),
        stabilized: full.stabilized,
        certificate: full.finiteness_certificate,
        source_field: source,
        i,
        consistent: t.consistent(),
        wk_quotient_trivial: t.wk_quotient_trivial,
        exponent_quotient_trivial: t.exponent_quotient_trivial,
        component_trivial: t.component_trivial,
    })
}

fn gross_row(d: i64, ell: u64, opts: &LogOptions) -> Result<GrossOut> {
    let k = QuadField::new(d)?;
    let s = structure_of(&k, ell, opts)?;
    Ok(GrossOut {
        d,
        ell,
        precision_used: s.precision_used,
        exponents: s.exponents.clone(),
        stabilized: s.stabilized,
        certificate: s.finiteness_certificate,
        source_field: field_name(&k),
        rank: s.rank(),
    })
}

fn render_scan<T: Serialize + Sync>(
    g: &GlobalOpts,
    rows: Vec<T>,
    summary: ScanSummary,
    line: impl Fn(&T) -> String,
) -> Outcome {
    let mut summary_line = format!(
        "# report={} rows={} skipped_non_squarefree={} excluded={} not_stabilized={} all_rows_hold={}",
        summary.report,
        summary.rows,
        summary.skipped_non_squarefree,
        summary.excluded,
        summary.not_stabilized,
        summary.all_rows_hold
    );
    if let Some(m) = summary.mirror_bound_held {
        summary_line.push_str(&format!(" mirror_bound_held={m}"));
    }
    summary_line.push('\n');
    let stabilized = summary.not_stabilized == 0;
    match g.format() {
        Format::Json => Outcome::out(json(&ScanJson { rows, summary }), stabilized),
        Format::Csv => Outcome { stdout: to_csv(&rows), stderr: summary_line, stabilized },
        Format::Table => {
            let mut t: String = rows.iter().map(|r| line(r) + "\n").collect();
            t.push_str(&summary_line);
            Outcome::out(t, stabilized)
        }
    }
}

pub fn scan(g: &GlobalOpts, dmin: i64, dmax: i64, kind: ReportKind, i: i64, sample: Option<usize>) -> Result<Outcome> {
    let opts = options(g)?;
    if dmax < dmin {
        return Ok(Outcome::out(String::new(), true));
    }
    if dmax.saturating_sub(dmin) > MAX_RANGE {
        return Err(Error::InvalidInput(format!("scan ranges are limited to {MAX_RANGE} values")));
    }
    let mut skipped = 0;
    let mut excluded = 0;
    let mut ds = Vec::new();
    for d in dmin..=dmax {
        let admissible = match kind {
            ReportKind::Reflection => d > 1 && d != 3,
            ReportKind::Triviality | ReportKind::Gross => d != 0 && d != 1,
        };
        if !admissible {
            excluded += 1;
        } else if !is_squarefree(d) {
            skipped += 1;
        } else {
            ds.push(d);
        }
    }
    if let Some(n) = sample {
        let mut rng = ChaCha8Rng::seed_from_u64(g.seed);
        ds = ds.choose_multiple(&mut rng, n).copied().collect();
        ds.sort_unstable();
    }
    let summary = |name: &str, rows: usize, not_stabilized: usize, hold: bool| ScanSummary {
        report: name.into(),
        rows,
        skipped_non_squarefree: skipped,
        excluded,
        not_stabilized,
        all_rows_hold: hold,
        mirror_bound_held: None,
    };
    let ell = g.ell;
    Ok(match kind {
        ReportKind::Reflection => {
            let rows: Vec<ReflectionOut> =
                ds.par_iter().map(|&d| reflection_row(d, ell, &opts)).collect::<Result<_>>()?;
            let bad = rows.iter().filter(|r| !r.stabilized).count();
            let hold = rows.iter().all(|r| r.within_bounds == Some(true));
            let mut s = summary("reflection", rows.len(), bad, hold);
            s.mirror_bound_held = Some(rows.iter().all(|r| r.mirror_bound_holds == Some(true)));
            render_scan(g, rows, s, |r| {
                format!(
                    "d={:<6} k={:<10} k*={:<10} ranks={}/{} delta={} {}",
                    r.d,
                    render_group(ell, &AbelianGroupStructure::exact(r.exponents.clone())),
                    render_group(ell, &AbelianGroupStructure::exact(r.mirror_exponents.clone())),
                    r.rank_k.map_or("?".into(), |x| x.to_string()),
                    r.rank_k_star.map_or("?".into(), |x| x.to_string()),
                    r.delta.map_or("?".into(), |x| x.to_string()),
                    if r.stabilized { "" } else { "NOT-STABILIZED" }
                )
                .trim_end()
                .to_string()
            })
        }
        ReportKind::Triviality => {
            let rows: Vec<TrivialityOut> =
                ds.par_iter().map(|&d| triviality_row(d, i, ell, &opts)).collect::<Result<_>>()?;
            let bad = rows.iter().filter(|r| !r.stabilized).count();
            let hold = rows.iter().all(|r| r.consistent);
            let s = summary("triviality", rows.len(), bad, hold);
            render_scan(g, rows, s, |r| {
                format!(
                    "d={:<6} i={} source={:<16} component={:<10} trivial={}{}",
                    r.d,
                    r.i,
                    r.source_field,
                    render_group(ell, &AbelianGroupStructure::exact(r.exponents.clone())),
                    yes_no(r.component_trivial),
                    if r.stabilized { "" } else { " NOT-STABILIZED" }
                )
            })
        }
        ReportKind::Gross => {
            let rows: Vec<GrossOut> = ds.par_iter().map(|&d| gross_row(d, ell, &opts)).collect::<Result<_>>()?;
            let bad = rows.iter().filter(|r| !r.stabilized).count();
            let hold = rows.iter().all(|r| r.certificate);
            let s = summary("gross", rows.len(), bad, hold);
            render_scan(g, rows, s, |r| {
                format!(
                    "d={:<6} group={:<12} precision={} certificate={}{}",
                    r.d,
                    render_group(ell, &AbelianGroupStructure::exact(r.exponents.clone())),
                    r.precision_used,
                    yes_no(r.certificate),
                    if r.stabilized { "" } else { " NOT-STABILIZED" }
                )
            })
        }
    })
}

#[derive(Serialize)]
struct CubicOut {
    conductor: u64,
    polynomial: [i64; 3],
    ramified: Vec<u64>,
    log_ramified: Vec<u64>,
    split_in_l: Vec<u64>,
    i: i64,
    triviality: Option<TrivialityDecision>,
    corestriction: Corestriction,
    genus_rank_lower_bound: i64,
}

fn parse_poly(s: &str) -> Result<[i64; 3]> {
    let parts: Vec<i64> = s
        .split(',')
        .map(|p| p.trim().parse::<i64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| Error::InvalidInput(format!("polynomial coefficients: {e}")))?;
    parts
        .try_into()
        .map_err(|_| Error::InvalidInput("give exactly three coefficients a,b,c for X^3 + aX^2 + bX + c".into()))
}

pub fn cubic(g: &GlobalOpts, conductor: u64, poly: Option<&str>, index: usize, i: i64) -> Result<Outcome> {
    if g.ell != 3 {
        return Err(Error::Unsupported("cubic criteria are implemented for ℓ = 3".into()));
    }
    let n = match poly {
        Some(p) => CyclicCubicField::with_polynomial(conductor, parse_poly(p)?)?,
        None => CyclicCubicField::from_conductor(conductor, index)?,
    };
    let m = g.precision;
    let profile = cubic_log_ramification(&n, m)?;
    let triviality = if i.rem_euclid(2) == 1 { Some(cor14_triviality(&n, i, m)?) } else { None };
    let corestriction = corestriction_surjectivity(&n, i, m)?;
    let out = CubicOut {
        conductor,
        polynomial: n.polynomial(),
        ramified: n.ramified_primes().to_vec(),
        genus_rank_lower_bound: genus_rank_lower_bound(&profile.log_ramified, i),
        log_ramified: profile.log_ramified,
        split_in_l: profile.split_in_l,
        i,
        triviality,
        corestriction,
    };
    let text = match g.format() {
        Format::Json | Format::Csv => json(&out),
        Format::Table => {
            let mut t = String::new();
            writeln!(t, "field           {n}").unwrap();
            writeln!(t, "ramified        {:?}", out.ramified).unwrap();
            writeln!(t, "log-ramified    {:?}", out.log_ramified).unwrap();
            writeln!(t, "split in L      {:?}", out.split_in_l).unwrap();
            match &out.triviality {
                Some(c) => {
                    let detail = match (c.witness, c.norm_index) {
                        (Some(p), Some(idx)) => format!(" (p0={p}, p0 mod 9 = {}, index {idx})", p % 9),
                        _ => String::new(),
                    };
                    writeln!(t, "i={i} quotient    {}{detail}", if c.trivial { "trivial" } else { "nontrivial" })
                        .unwrap();
                }
                None => writeln!(t, "i={i} quotient    criterion applies to odd i").unwrap(),
            }
            writeln!(
                t,
                "corestriction   {} ({:?})",
                if out.corestriction.surjective { "surjective" } else { "not surjective" },
                out.corestriction.reason
            )
            .unwrap();
            writeln!(t, "genus bound     {}", out.genus_rank_lower_bound).unwrap();
            t
        }
    };
    Ok(Outcome::out(text, true))
}

#[derive(Serialize)]
struct LevelOut {
    n: u32,
    exponents: Vec<u32>,
    unresolved: usize,
    log_size: Option<u32>,
    predicted_log_size: Option<i64>,
    capitulation: Option<Vec<u32>>,
}

#[derive(Serialize)]
struct TwistOut {
    i: i64,
    exponents: Vec<u32>,
    unresolved: usize,
    finite: bool,
}

#[derive(Serialize)]
struct LambdaOut {
    ell: u64,
    precision: u32,
    generators: usize,
    relations: usize,
    char_poly: Vec<String>,
    mu: u32,
    lambda: u32,
    nu: Option<i64>,
    levels: Vec<LevelOut>,
    decomposition_alphas: Option<Vec<i64>>,
    decomposition_holds: Option<bool>,
    kappa: i64,
    twists: Vec<TwistOut>,
}

pub fn lambda(
    g: &GlobalOpts,
    file: &Path,
    levels: u32,
    shift: u32,
    kappa: Option<i64>,
    twists: (i64, i64),
) -> Result<Outcome> {
    let x = LambdaPresentation::read(file)?;
    let inv = iwasawa_invariants(&x, levels)?;
    let mut level_rows = Vec::new();
    for n in 0..=levels {
        let s = level_quotient(&x, n)?;
        let cap = match capitulation_kernel(&x, n, shift) {
            Ok(c) if c.finiteness_certificate => Some(c.exponents),
            Ok(_) | Err(Error::PrecisionExhausted(_)) | Err(Error::ResourceLimit(_)) => None,
            Err(e) => return Err(e),
        };
        level_rows.push(LevelOut {
            n,
            log_size: s.finiteness_certificate.then(|| s.log_order()),
            predicted_log_size: inv.predicted_log_size(x.ell, n),
            exponents: s.exponents,
            unresolved: s.unresolved,
            capitulation: cap,
        });
    }
    let decomposition = if inv.mu == 0 && levels >= 1 {
        match level_decomposition(&x, levels - 1, shift) {
            Ok(d) => Some(d),
            Err(Error::PrecisionExhausted(_)) | Err(Error::ResourceLimit(_)) => None,
            Err(e) => return Err(e),
        }
    } else {
        None
    };
    let kappa = kappa.unwrap_or(1 + x.ell as i64);
    let kappa_p = PadicInt::new(x.ell, kappa, x.precision)?;
    let twist_rows: Vec<TwistOut> = (twists.0..=twists.1)
        .map(|i| {
            let t = twisted_coinvariants(&x, i, &kappa_p)?;
            Ok(TwistOut {
                i,
                exponents: t.structure.exponents,
                unresolved: t.structure.unresolved,
                finite: t.finiteness == Finiteness::Finite,
            })
        })
        .collect::<Result<_>>()?;
    let out = LambdaOut {
        ell: x.ell,
        precision: x.precision,
        generators: x.generators,
        relations: x.relations(),
        char_poly: inv.char_poly.iter().map(ToString::to_string).collect(),
        mu: inv.mu,
        lambda: inv.lambda,
        nu: inv.nu,
        levels: level_rows,
        decomposition_alphas: decomposition.as_ref().map(|d| d.alphas.clone()),
        decomposition_holds: decomposition.as_ref().map(|d| d.holds),
        kappa,
        twists: twist_rows,
    };
    let text = match g.format() {
        Format::Json | Format::Csv => json(&out),
        Format::Table => {
            let mut t = String::new();
            writeln!(
                t,
                "module       {} generators, {} relations over Z_{}[[T]]",
                out.generators, out.relations, out.ell
            )
            .unwrap();
            writeln!(t, "char poly    [{}] (constant term first)", out.char_poly.join(", ")).unwrap();
            let nu = out.nu.map_or("?".into(), |v| v.to_string());
            writeln!(t, "invariants   mu={} lambda={} nu={nu}", out.mu, out.lambda).unwrap();
            for l in &out.levels {
                let group = AbelianGroupStructure {
                    unresolved: l.unresolved,
                    precision_used: out.precision,
                    ..AbelianGroupStructure::exact(l.exponents.clone())
                };
                let cap = l
                    .capitulation
                    .as_ref()
                    .map_or("?".into(), |c| render_group(out.ell, &AbelianGroupStructure::exact(c.clone())));
                writeln!(t, "X_{:<3}        {:<24} Cap={cap}", l.n, render_group(out.ell, &group)).unwrap();
            }
            if let (Some(a), Some(h)) = (&out.decomposition_alphas, out.decomposition_holds) {
                writeln!(t, "decomposition alphas={a:?} holds={}", yes_no(h)).unwrap();
            }
            for tw in &out.twists {
                writeln!(
                    t,
                    "twist i={:<3} {:<24} {}",
                    tw.i,
                    render_group(
                        out.ell,
                        &AbelianGroupStructure {
                            unresolved: tw.unresolved,
                            precision_used: out.precision,
                            ..AbelianGroupStructure::exact(tw.exponents.clone())
                        }
                    ),
                    if tw.finite { "finite" } else { "possibly infinite" }
                )
                .unwrap();
            }
            t
        }
    };
    Ok(Outcome::out(text, true))
}
