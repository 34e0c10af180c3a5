//! `causal-horizon`: runs the causal-boundary pipelines and writes their artifacts.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};
use serde::Serialize;

use causal_horizon::chron::validate_chron;
use causal_horizon::gallery::cfc::{respect_check, respect_families, respect_handles, strip_boundary_chart, strip_cfc, RespectConfig};
use causal_horizon::gallery::{describe, SPACE_NAMES};
use causal_horizon::ip::{check_bs_identity, handle_subset, i_embed, IpFamilyWindow};
use causal_horizon::ladder::{audit, audit_explicit};
use causal_horizon::limits::{first_order_probe, l_plus, set_limits};
use causal_horizon::metrics::{grapefruit_boundary, hausdorff, io_converges, MetricCloud, PunchedBall};
use causal_horizon::poset::{achronality_check, alpha_gamma_roundtrip, derive_beta, derive_gamma, derive_gamma_literal, directed_down_sets, is_causal_set};
use causal_horizon::tfae::{corpus, tfae_battery, TfaeSetup};
use causal_horizon::{
    make_space, ChainSpec, Error, ExplicitRelation, FinitePoset, GallerySpace, IpHandle, LadderConfig, LimitConfig, Point, PointSet, RelationMatrix, TfaeConfig,
    WarpSpec, WindowBounds,
};

const DEMOS: [(&str, &str); 4] = [
    ("io-counterexample", "punched balls converge in Hausdorff distance but not inner-outer"),
    ("warning-example", "first-order limits fail to capture L+ on the slit plane"),
    ("punctured-gap", "I-(x) within I-(y) without x causally preceding y in the punctured plane"),
    ("grapefruit", "the two boundary components of the grapefruit-on-a-stick"),
];

#[derive(Parser, Debug, Serialize)]
#[command(name = "causal-horizon", version, about = "Causal boundary constructions on sampled spacetimes")]
struct Cli {
    #[command(subcommand)]
    command: Option<Command>,
    /// Gallery space name.
    #[arg(long, global = true)]
    space: Option<String>,
    /// Space-, family- or poset-specific JSON file or shorthand.
    #[arg(long, global = true)]
    spec: Option<String>,
    /// Sampling resolution.
    #[arg(long, global = true)]
    h: Option<f64>,
    /// Window extents `t0,t1,x0,x1` or `t0,t1,x0,x1,y0,y1`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    window: Option<String>,
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[arg(long, global = true)]
    depth: Option<usize>,
    #[arg(long, global = true)]
    horizon: Option<usize>,
    #[arg(long, global = true, default_value_t = 7)]
    seed: u64,
    /// Output directory; `CAUSAL_HORIZON_OUT` takes precedence.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// List gallery spaces and demos.
    #[arg(long, global = true)]
    list: bool,
    /// Input JSON for `validate`, `ladder` and `poset`.
    #[arg(long, global = true)]
    input: Option<PathBuf>,
}

#[derive(Subcommand, Debug, Serialize)]
enum Command {
    /// Check the chronology axioms on a window or an explicit relation.
    Validate,
    /// Audit the causal ladder.
    Ladder,
    /// Build an IP family and check that alpha of the BS chronology is inclusion.
    Ip,
    /// Boundary artifacts: strip chart, cylinder achronality, grapefruit components.
    Boundary,
    /// Set limits and L+ for the corpus families of a space.
    Converge,
    /// Run the convergence battery over the corpus.
    Tfae,
    /// Complete a warped product from a JSON spec.
    Warp,
    /// Derive beta and gamma from a finite poset.
    Poset,
    /// Run a named demo.
    Demo { name: String },
}

/// Configuration errors exit with status 2.
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    Usage(msg.into()).into()
}

/// Collected verdicts; the exit status is 1 when any fails.
#[derive(Default)]
struct Verdicts(Vec<(String, bool)>);

impl Verdicts {
    fn push(&mut self, name: &str, ok: bool, detail: String) {
        println!("verdict {name}: {} {detail}", if ok { "PASS" } else { "FAIL" });
        self.0.push((name.into(), ok));
    }

    fn all(&self) -> bool {
        self.0.iter().all(|(_, ok)| *ok)
    }
}

struct Ctx {
    cli: Cli,
    out: PathBuf,
}

impl Ctx {
    fn write(&self, name: &str, content: &str) -> anyhow::Result<()> {
        let p = self.out.join(name);
        fs::write(&p, content).with_context(|| format!("writing {}", p.display()))?;
        println!("wrote {}", p.display());
        Ok(())
    }

    fn write_json<T: Serialize>(&self, name: &str, v: &T) -> anyhow::Result<()> {
        self.write(name, &(serde_json::to_string_pretty(v)? + "\n"))
    }

    fn h(&self, default: f64) -> f64 {
        self.cli.h.unwrap_or(default)
    }

    fn space_name(&self, default: &str) -> String {
        self.cli.space.clone().unwrap_or_else(|| default.into())
    }

    fn space(&self, default: &str, h: f64) -> anyhow::Result<GallerySpace> {
        let mut s = make_space(&self.space_name(default), h)?;
        if let Some(b) = self.bounds()? {
            s.bounds = b;
        }
        Ok(s)
    }

    fn bounds(&self) -> anyhow::Result<Option<WindowBounds>> {
        let Some(w) = &self.cli.window else { return Ok(None) };
        let v: Vec<f64> = w.split(',').map(|s| s.trim().parse::<f64>()).collect::<Result<_, _>>().map_err(|e| usage(format!("--window: {e}")))?;
        let (lo, hi): (Vec<f64>, Vec<f64>) = match v.len() {
            4 | 6 => v.chunks(2).map(|c| (c[0], c[1])).unzip(),
            n => return Err(usage(format!("--window takes 4 or 6 numbers, got {n}"))),
        };
        if lo.iter().zip(&hi).any(|(a, b)| !(a < b)) {
            return Err(usage("--window needs lower < upper on every axis"));
        }
        Ok(Some(WindowBounds::new(&lo, &hi)))
    }

    fn read_input(&self) -> anyhow::Result<Option<String>> {
        self.cli.input.as_ref().map(|p| fs::read_to_string(p).map_err(|e| usage(format!("{}: {e}", p.display())))).transpose()
    }

    fn read_spec_file(&self) -> anyhow::Result<Option<String>> {
        self.cli.spec.as_ref().map(|p| fs::read_to_string(p).map_err(|e| usage(format!("{p}: {e}")))).transpose()
    }
}

fn list() {
    println!("spaces:");
    for s in SPACE_NAMES {
        println!("  {s:<12} {}", describe(s).unwrap_or(""));
    }
    println!("  {:<12} {}", "warped", "warped product (a,b) x K from a --spec JSON file (warp subcommand)");
    println!("demos:");
    for (d, text) in DEMOS {
        println!("  {d:<18} {text}");
    }
}

fn validate(ctx: &Ctx, v: &mut Verdicts) -> anyhow::Result<()> {
    let report = if let Some(s) = ctx.read_input()? {
        let rel = ExplicitRelation::from_json(&s)?;
        validate_chron(&rel, &rel.window())?
    } else {
        let s = ctx.space("strip", ctx.h(1.0 / 16.0))?;
        validate_chron(s.oracle.as_ref(), &s.window())?
    };
    ctx.write_json("validate.json", &report)?;
    v.push("irreflexive", report.irreflexive, String::new());
    v.push("transitive", report.transitive, String::new());
    v.push("connex", report.connex, String::new());
    v.push("separable", report.separable, String::new());
    Ok(())
}

fn ladder(ctx: &Ctx, v: &mut Verdicts) -> anyhow::Result<()> {
    let a = if let Some(s) = ctx.read_input()? {
        audit_explicit(&ExplicitRelation::from_json(&s)?)
    } else {
        let s = ctx.space("strip", ctx.h(1.0 / 16.0))?;
        audit(s.oracle.as_ref(), &s.window(), &LadderConfig { seed: ctx.cli.seed, ..LadderConfig::default() })
    };
    print!("{}", a.table());
    ctx.write_json("ladder.json", &a)?;
    ctx.write("ladder.txt", &a.table())?;
    v.push("ladder implications", a.violations.is_empty(), format!("{} violations", a.violations.len()));
    Ok(())
}

fn probe_grid(s: &GallerySpace, t: (f64, f64), x: (f64, f64), pitch: f64) -> Vec<IpHandle> {
    let (nt, nx) = (((t.1 - t.0) / pitch).round() as usize, ((x.1 - x.0) / pitch).round() as usize);
    let mut v = Vec::new();
    for i in 0..=nt {
        for j in 0..=nx {
            let p = Point::new(t.0 + i as f64 * pitch, x.0 + j as f64 * pitch);
            if s.oracle.admissible(&p) {
                v.push(IpHandle::pip(format!("probe{p}"), p));
            }
        }
    }
    v
}

fn ip(ctx: &Ctx, v: &mut Verdicts) -> anyhow::Result<()> {
    let h = ctx.h(1.0 / 16.0);
    let s = ctx.space("strip", h)?;
    let (lo, hi) = (&s.bounds.lo, &s.bounds.hi);
    let (t, x) = ((lo[0], hi[0]), (lo[1], hi[1]));
    let members: Vec<IpHandle> = match ctx.read_spec_file()? {
        Some(js) => serde_json::from_str(&js).map_err(|e| usage(format!("--spec: {e}")))?,
        None => {
            // 3 x 3 lattice of PIPs across the middle of the window
            let mut m = Vec::new();
            for ft in [0.3, 0.5, 0.7] {
                for fx in [0.3, 0.5, 0.7] {
                    let p = Point::new(t.0 + (t.1 - t.0) * ft, x.0 + (x.1 - x.0) * fx);
                    if s.oracle.admissible(&p) {
                        m.push(IpHandle::pip(format!("pip{p}"), p));
                    }
                }
            }
            m
        }
    };
    if members.is_empty() {
        return Err(usage("the IP family is empty"));
    }
    let count = members.len();
    let mut fam = members;
    let pitch = if s.name == "strip" { h } else { 4.0 * h };
    fam.extend(probe_grid(&s, (t.0 + h, t.1 - h), (x.0, x.1 - h), pitch));
    let w = s.window();
    let depth = ctx.cli.depth.unwrap_or(64);
    let fw = IpFamilyWindow::build(s.oracle.as_ref(), fam, &w, depth, 2.0 * h)?;
    let r = check_bs_identity(&fw, count);
    ctx.write("ip_family.json", &(fw.to_json(&w)? + "\n"))?;
    ctx.write_json("bs_identity.json", &r)?;
    v.push("alpha of BS is inclusion", r.holds(), format!("{} members, {} pairs, {} mismatches, past reflecting {}", count, r.pairs, r.mismatches.len(), r.past_reflecting));
    Ok(())
}

fn boundary(ctx: &Ctx, v: &mut Verdicts) -> anyhow::Result<()> {
    let name = ctx.space_name("strip");
    match name.as_str() {
        "strip" => {
            let h = ctx.h(1.0 / 64.0);
            let (rows, ok) = strip_boundary_chart(h)?;
            let mut wr = csv::Writer::from_writer(Vec::new());
            for r in &rows {
                wr.serialize(r)?;
            }
            ctx.write("boundary_chart.csv", &String::from_utf8(wr.into_inner()?)?)?;
            v.push("boundary chart", ok, format!("{} boundary TIPs", rows.len()));
            let mut cfg = RespectConfig { h, ..RespectConfig::default() };
            if let Some(d) = ctx.cli.depth {
                cfg.depth = d;
            }
            if let Some(hz) = ctx.cli.horizon {
                cfg.horizon = hz;
            }
            if let Some(t) = ctx.cli.tol {
                cfg.tol = t;
            }
            let r = respect_check(&strip_cfc(), &respect_handles(), &respect_families(), &cfg)?;
            ctx.write_json("respect.json", &r)?;
            v.push("endpoint inverse", r.inverse_ok(), format!("{} handles", r.roundtrip.len()));
            v.push("convergence respected", r.families_ok(), format!("{} families", r.families.len()));
        }
        "cylinder" => {
            let h = ctx.h(1.0 / 16.0);
            let s = ctx.space("cylinder", h)?;
            let helix = IpHandle::tip("helix", ChainSpec::Linear { start: Point::new(0.0, 0.0), step: Point::new(1.0, 0.5) });
            let r = achronality_check(s.oracle.as_ref(), &[helix], &s.bounds, &[h, h / 2.0], ctx.cli.depth.unwrap_or(64))?;
            ctx.write_json("achronality.json", &r)?;
            v.push("achronal", r.holds(), format!("{} witnesses over {} points", r.witnesses.len(), r.points_checked));
        }
        "grapefruit" => {
            let h = ctx.h(1.0 / 32.0);
            let b = grapefruit_boundary(h, ctx.cli.horizon.unwrap_or(64) as f64, 17, 1.0);
            ctx.write_json("grapefruit_boundary.json", &b)?;
            v.push("two components", b.component_count == 2 && b.min_cross >= 1.9 && b.monotone, format!("{} components, min cross {:.4}", b.component_count, b.min_cross));
        }
        other => {
            make_space(other, 1.0)?;
            return Err(usage(format!("boundary supports strip, cylinder and grapefruit, not `{other}`")));
        }
    }
    Ok(())
}

fn set_size(s: &PointSet) -> usize {
    s.count_ones(..)
}

fn converge(ctx: &Ctx, v: &mut Verdicts) -> anyhow::Result<()> {
    let name = ctx.space_name("strip");
    let entries: Vec<_> = corpus().into_iter().filter(|e| e.space == name).collect();
    if entries.is_empty() {
        make_space(&name, 1.0)?;
        return Err(usage(format!("no corpus families on `{name}`")));
    }
    let h = ctx.h(1.0 / 32.0);
    let s = ctx.space(&name, h)?;
    let w = s.window();
    let cfg = LimitConfig { horizon: ctx.cli.horizon.unwrap_or(64), depth: ctx.cli.depth.unwrap_or(64), margin: 2.0 };
    let mut wr = csv::Writer::from_writer(Vec::new());
    wr.write_record(["family", "expected", "liminf", "limsup", "mode", "lplus_limits", "candidate_is_limit", "agrees"])?;
    for e in &entries {
        let lim = set_limits(s.oracle.as_ref(), &e.family, &w, &cfg)?;
        let cand = e.family.candidate.clone().into_iter().collect::<Vec<_>>();
        let plus = l_plus(s.oracle.as_ref(), &e.family, &cand, &w, &cfg)?;
        let hit = !plus.limits.is_empty();
        let agrees = hit == e.converges;
        wr.write_record([
            e.family.name.clone(),
            e.converges.to_string(),
            set_size(&lim.liminf).to_string(),
            set_size(&lim.limsup).to_string(),
            lim.mode.clone(),
            plus.limits.iter().map(|l| l.label.clone()).collect::<Vec<_>>().join(";"),
            hit.to_string(),
            agrees.to_string(),
        ])?;
        v.push(&e.family.name, agrees, format!("expected {}, L+ limit {}", e.converges, hit));
    }
    ctx.write("converge.csv", &String::from_utf8(wr.into_inner()?)?)?;
    Ok(())
}

fn tfae(ctx: &Ctx, v: &mut Verdicts) -> anyhow::Result<()> {
    let mut cfg = TfaeConfig { seed: ctx.cli.seed, ..TfaeConfig::default() };
    if let Some(h) = ctx.cli.h {
        cfg.h = h;
    }
    if let Some(hz) = ctx.cli.horizon {
        cfg.horizon = hz;
    }
    if let Some(t) = ctx.cli.tol {
        cfg.tol = t;
    }
    if let Some(d) = ctx.cli.depth {
        cfg.depth = d;
    }
    let entries: Vec<_> = corpus().into_iter().filter(|e| ctx.cli.space.as_deref().map_or(true, |s| s == e.space)).collect();
    if entries.is_empty() {
        return Err(usage(format!("no corpus families on `{}`", ctx.cli.space.as_deref().unwrap_or(""))));
    }
    let mut wr = csv::Writer::from_writer(Vec::new());
    wr.write_record(["index", "space", "family", "item", "verdict", "detail"])?;
    let mut setups: Vec<(String, TfaeSetup, GallerySpace)> = Vec::new();
    for (k, e) in entries.iter().enumerate() {
        if !setups.iter().any(|(n, _, _)| n == e.space) {
            let s = make_space(e.space, cfg.h)?;
            let setup = TfaeSetup::new(s.oracle.as_ref(), &s.bounds, &cfg)?;
            setups.push((e.space.into(), setup, s));
        }
        let (_, setup, s) = setups.iter().find(|(n, _, _)| n == e.space).expect("setup built above");
        let r = tfae_battery(s.oracle.as_ref(), &e.family, setup, &cfg)?;
        for c in &r.conditions {
            let verdict = c.verdict.map_or("indeterminate".to_string(), |b| b.to_string());
            wr.write_record([k.to_string(), e.space.to_string(), r.family.clone(), c.item.clone(), verdict, c.detail.clone()])?;
        }
        let mut trace = Vec::new();
        r.write_csv(&mut trace)?;
        ctx.write(&format!("tfae_trace_{k:02}.csv"), &String::from_utf8(trace)?)?;
        v.push(&r.family, r.agrees() == Some(e.converges), format!("expected {}, items agree on {:?}", e.converges, r.agrees()));
    }
    ctx.write("tfae.csv", &String::from_utf8(wr.into_inner()?)?)?;
    Ok(())
}

fn warp(ctx: &Ctx, v: &mut Verdicts) -> anyhow::Result<()> {
    let js = ctx.read_spec_file()?.ok_or_else(|| usage("warp needs --spec <file.json>"))?;
    let spec = WarpSpec::from_json(&js).map_err(|e| usage(format!("--spec: {e}")))?;
    let space = causal_horizon::gallery::WarpSpace::new(spec)?;
    match space.completion() {
        Ok(c) => {
            ctx.write_json("warp.json", &c)?;
            let h = ctx.h(space.spec.dt);
            v.push("completion", c.passes(h), format!("chart {} covered {}, endpoint error {:.2e}, BS {}/{}", c.chart_size, c.chart_covered, c.max_endpoint_error, c.bs_agree, c.bs_pairs));
        }
        Err(Error::Divergent { factor, reason }) => {
            ctx.write_json("warp.json", &serde_json::json!({ "refused": true, "factor": factor, "reason": reason }))?;
            v.push("completion", false, format!("refused: condition (*) fails for factor {factor}: {reason}"));
        }
        Err(e) => return Err(e.into()),
    }
    Ok(())
}

fn shorthand_poset(s: &str) -> anyhow::Result<FinitePoset> {
    let (kind, arg) = s.split_once(':').ok_or_else(|| usage(format!("poset shorthand `{s}` needs kind:arg")))?;
    let n = |a: &str| a.parse::<usize>().map_err(|e| usage(format!("`{a}`: {e}")));
    Ok(match kind {
        "total" => FinitePoset::total_order(n(arg)?),
        "antichain" => FinitePoset::antichain(n(arg)?),
        "grid" => {
            let (a, b) = arg.split_once('x').ok_or_else(|| usage("grid shorthand is grid:AxB"))?;
            FinitePoset::grid(n(a)?, n(b)?)
        }
        "minkowski" => FinitePoset::minkowski_grid(arg.parse::<f64>().map_err(|e| usage(format!("`{arg}`: {e}")))?).0,
        _ => return Err(usage(format!("unknown poset shorthand `{kind}`"))),
    })
}

#[derive(Serialize)]
struct RelationDoc<'a> {
    points: &'a [String],
    leq: Vec<(usize, usize)>,
}

fn poset(ctx: &Ctx, v: &mut Verdicts) -> anyhow::Result<()> {
    let p = match (ctx.read_input()?, &ctx.cli.spec) {
        (Some(js), _) => FinitePoset::from_json(&js)?,
        (None, Some(s)) => shorthand_poset(s)?,
        (None, None) => return Err(usage("poset needs --input <poset.json> or --spec kind:arg")),
    };
    let doc = |r: &RelationMatrix| RelationDoc { points: &p.points, leq: r.pairs().collect() };
    let verdict = is_causal_set(&p)?;
    let rt = alpha_gamma_roundtrip(&p);
    let filters = if p.len() <= 16 { Some(directed_down_sets(&p)?) } else { None };
    let out = serde_json::json!({
        "beta": doc(&derive_beta(&p)),
        "gamma": doc(&derive_gamma(&p)),
        "gamma_literal": doc(&derive_gamma_literal(&p)),
        "causal_set": verdict,
        "alpha_gamma_roundtrip": rt,
        "filters": filters,
    });
    ctx.write_json("poset_derived.json", &out)?;
    v.push("gamma is a chronology", verdict.is_causal_set, format!("{} gamma pairs, failing {:?}", verdict.gamma_pairs, verdict.failing));
    Ok(())
}

fn demo(ctx: &Ctx, name: &str, v: &mut Verdicts) -> anyhow::Result<()> {
    match name {
        "io-counterexample" => {
            let h = ctx.h(1.0 / 32.0);
            let horizon = ctx.cli.horizon.unwrap_or(1024);
            let pb = PunchedBall::new(4 * horizon);
            let cloud = MetricCloud::euclidean_grid(-1.5, 1.5, h, Point::new(0.0, 0.0));
            let mut closed = PointSet::with_capacity(cloud.len());
            for (i, p) in cloud.points.iter().enumerate() {
                if p.t.hypot(p.x) <= 1.0 {
                    closed.insert(i);
                }
            }
            let mut wr = csv::Writer::from_writer(Vec::new());
            wr.write_record(["n", "center_x", "center_y", "hausdorff", "bound"])?;
            let mut gap_ok = true;
            let mut n = 8;
            while n <= horizon {
                let d = hausdorff(&pb.on_cloud(n, &cloud), &closed, &cloud);
                let bound = 2.0 / n as f64 + 2.0 * h;
                gap_ok &= d <= bound;
                let c = pb.center(n);
                wr.write_record([n.to_string(), c.0.to_string(), c.1.to_string(), d.to_string(), bound.to_string()])?;
                n *= 2;
            }
            ctx.write("demo_io_counterexample.csv", &String::from_utf8(wr.into_inner()?)?)?;
            let probes: Vec<Point> = (0..=128)
                .flat_map(|i| (0..=128).map(move |j| Point::new(-1.0 + i as f64 / 64.0, -1.0 + j as f64 / 64.0)))
                .filter(|p| p.t.hypot(p.x) < 1.0 - 2.0 * h)
                .collect();
            let io = io_converges(&pb, &probes, &[], h / 2.0, horizon);
            ctx.write_json("demo_io_counterexample.json", &io)?;
            v.push("Hausdorff convergence", gap_ok, String::new());
            let w = io.witness.as_ref().map(|w| format!("probe {} misses a({})", w.probe, w.index)).unwrap_or_default();
            v.push("not inner-outer convergent", io.inner == Some(false) && io.witness.is_some(), w);
        }
        "warning-example" => {
            let h = ctx.h(1.0 / 32.0);
            let s = make_space("slit", h)?;
            let w = s.window_at(h, &WindowBounds::rect((-1.0, 2.25), (-1.0, 2.25)));
            let r = first_order_probe(s.oracle.as_ref(), &w, 32, ctx.cli.horizon.unwrap_or(64), &LimitConfig { horizon: 64, depth: 1, margin: 2.0 })?;
            ctx.write_json("demo_warning_example.json", &r)?;
            v.push("first-order failure", r.holds(), format!("probe {} witness {}", r.probe, r.witness));
        }
        "punctured-gap" => {
            let h = ctx.h(1.0 / 64.0);
            let s = make_space("punctured", h)?;
            let (p, q) = (Point::new(-1.0, -1.0), Point::new(1.0, 1.0));
            let causal = s.oracle.causal(&p, &q);
            let a = i_embed(s.oracle.as_ref(), p)?;
            let b = i_embed(s.oracle.as_ref(), q)?;
            let sub = handle_subset(s.oracle.as_ref(), &a, &b, &s.window(), 1, 2.0 * h)?;
            ctx.write_json("demo_punctured_gap.json", &serde_json::json!({ "x": p, "y": q, "causal": causal, "past_subset": sub, "h": h }))?;
            v.push("gap", causal == Some(false) && sub, format!("causal {causal:?}, I-(x) within I-(y) {sub}"));
        }
        "grapefruit" => {
            let b = grapefruit_boundary(ctx.h(1.0 / 32.0), ctx.cli.horizon.unwrap_or(64) as f64, 17, 1.0);
            ctx.write_json("demo_grapefruit.json", &b)?;
            v.push("two components", b.component_count == 2 && b.min_cross >= 1.9 && b.monotone, format!("{} components", b.component_count));
        }
        other => return Err(usage(format!("unknown demo `{other}`; see --list"))),
    }
    Ok(())
}

fn run(cli: Cli) -> anyhow::Result<bool> {
    if cli.list {
        list();
        return Ok(true);
    }
    if cli.command.is_none() {
        return Err(usage("no subcommand given; see --help"));
    }
    if let Some(h) = cli.h {
        if !(h > 0.0 && h <= 1.0) {
            return Err(usage(format!("--h must lie in (0, 1], got {h}")));
        }
    }
    if let Some(n) = cli.workers {
        rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global().context("configuring workers")?;
    }
    let out = std::env::var_os("CAUSAL_HORIZON_OUT").map(PathBuf::from).or_else(|| cli.out.clone()).unwrap_or_else(|| PathBuf::from("causal-horizon-out"));
    fs::create_dir_all(&out).with_context(|| format!("creating {}", out.display()))?;
    let ctx = Ctx { cli, out };
    ctx.write_json("manifest.json", &ctx.cli)?;
    let mut v = Verdicts::default();
    match ctx.cli.command.as_ref().expect("checked above") {
        Command::Validate => validate(&ctx, &mut v)?,
        Command::Ladder => ladder(&ctx, &mut v)?,
        Command::Ip => ip(&ctx, &mut v)?,
        Command::Boundary => boundary(&ctx, &mut v)?,
        Command::Converge => converge(&ctx, &mut v)?,
        Command::Tfae => tfae(&ctx, &mut v)?,
        Command::Warp => warp(&ctx, &mut v)?,
        Command::Poset => poset(&ctx, &mut v)?,
        Command::Demo { name } => demo(&ctx, name, &mut v)?,
    }
    Ok(v.all())
}

fn is_config_error(e: &anyhow::Error) -> bool {
    if e.is::<Usage>() {
        return true;
    }
    matches!(
        e.downcast_ref::<Error>(),
        Some(Error::UnknownSpace(_) | Error::Parse(_) | Error::Json(_) | Error::Precondition(_) | Error::Unsupported(_))
    )
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(if is_config_error(&e) { 2 } else { 1 })
        }
    }
}
