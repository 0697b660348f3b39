use std::sync::Arc;

use num_rational::BigRational;
use selfless_core::algebra::AlgebraElement;
use selfless_core::norms::{certify_norm_cached, NoCache, PowerCache};
use selfless_core::selfless::{
    check_injectivity, default_roles, default_transfer_schedule, fiber_statistics,
    growth_profile, product_nontriviality, transfer_experiment, RetractionFamily, Substitution,
};
use selfless_core::treegeo::{
    admissible_path_check, constant_cascade, minimal_exponent_search, projection_diameter,
    quasi_axis_constant, stable_length, translation_length, Axis, ConstantProvider,
};
use selfless_core::words::{parse_rational, GroupContext, Word};
use selfless_core::Error;
use serde_json::{json, Value};

use crate::args::{BallArgs, Command, NormArgs, SelflessAction, SelflessArgs, TreeAction, TreeArgs};
use crate::cache::{CacheStats, DiskCache};
use crate::config::RunConfig;
use crate::dto;
use crate::error::{CliError, CliResult};
use crate::report::{Report, Table};

/// A report together with run diagnostics that stay out of the hashed body.
pub struct Outcome {
    pub report: Report,
    pub cache: Option<CacheStats>,
}

/// Runs `cmd` on a pool of `cfg.threads` workers.
pub fn run_command(cmd: &Command, cfg: &RunConfig) -> CliResult<Outcome> {
    cfg.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads)
        .build()
        .map_err(|e| CliError::Usage(format!("thread pool: {e}")))?;
    pool.install(|| dispatch(cmd, cfg))
}

fn dispatch(cmd: &Command, cfg: &RunConfig) -> CliResult<Outcome> {
    let plain = |r: CliResult<Report>| r.map(|report| Outcome { report, cache: None });
    match cmd {
        Command::Norm(a) => norm(a, cfg),
        Command::Selfless(a) => plain(selfless(a, cfg)),
        Command::Tree(a) => plain(tree(a, cfg)),
        Command::Ball(a) => plain(ball(a, cfg)),
    }
}

pub fn parse_context(spec: &str) -> CliResult<Arc<GroupContext>> {
    Ok(Arc::new(GroupContext::parse(spec)?))
}

pub fn parse_element(ctx: &Arc<GroupContext>, text: &str) -> CliResult<AlgebraElement> {
    Ok(AlgebraElement::parse(ctx.clone(), text)?)
}

fn element_input(x: &AlgebraElement) -> Value {
    json!({
        "canonical": x.canonical(),
        "hash": x.content_hash(),
        "support": x.support_len(),
        "radius": x.radius(),
    })
}

fn required<'a>(v: &'a Option<String>, flag: &str) -> CliResult<&'a str> {
    v.as_deref()
        .ok_or_else(|| CliError::Usage(format!("{flag} is required")))
}

fn parse_list<T: std::str::FromStr>(text: &str, what: &str) -> CliResult<Vec<T>> {
    let mut offset = 0;
    text.split(',')
        .map(|item| {
            let pos = offset;
            offset += item.len() + 1;
            item.trim().parse::<T>().map_err(|_| {
                Error::Parse {
                    pos,
                    msg: format!("bad {what} {:?}", item.trim()),
                }
                .into()
            })
        })
        .collect()
}

fn parse_words(ctx: &GroupContext, text: &str) -> CliResult<Vec<Word>> {
    text.split(',')
        .map(|w| Ok(ctx.parse_word(w.trim())?))
        .collect()
}

fn norm(a: &NormArgs, cfg: &RunConfig) -> CliResult<Outcome> {
    let ctx = parse_context(cfg.group_or("a|b"))?;
    let x = parse_element(&ctx, &a.element)?;
    let opts = cfg.certify_options();
    let (cert, cache) = match &cfg.cache_dir {
        Some(dir) => {
            let mut cache = DiskCache::open(dir)?;
            let cert = certify_norm_cached(&x, &opts, &mut cache as &mut dyn PowerCache)?;
            (cert, Some(cache.stats))
        }
        None => (certify_norm_cached(&x, &opts, &mut NoCache)?, None),
    };
    let mut table = Table::new(&[
        "m", "support", "radius", "radicand_num", "radicand_den", "lower", "upper",
    ]);
    for s in &cert.steps {
        table.push(vec![
            s.m.to_string(),
            s.support_len.to_string(),
            s.radius.to_string(),
            s.radicand.numer().to_string(),
            s.radicand.denom().to_string(),
            s.lower.to_decimal(selfless_core::norms::decimal_digits(s.lower.scale()), selfless_core::norms::Rounding::Down),
            s.upper.to_decimal(selfless_core::norms::decimal_digits(s.upper.scale()), selfless_core::norms::Rounding::Up),
        ]);
    }
    let inputs = json!({
        "group": ctx.spec(),
        "element": element_input(&x),
        "config": cfg.describe(),
    });
    let mut report = Report::new("norm", inputs, dto::certificate(&cert)).with_table(table);
    report.truncation = cert.truncated.clone();
    Ok(Outcome { report, cache })
}

fn family(a: &SelflessArgs, ctx: &Arc<GroupContext>) -> CliResult<RetractionFamily> {
    let g = ctx.parse_word(required(&a.g, "--g")?)?;
    let h = match &a.h {
        Some(name) => Some(ctx.factor_by_name(name).ok_or_else(|| {
            CliError::Usage(format!("no factor contains a generator named {name:?}"))
        })?),
        None => None,
    };
    let a_gen = match &a.a {
        Some(name) => Some(
            ctx.generator(name)
                .ok_or_else(|| CliError::Usage(format!("unknown generator {name:?}")))?,
        ),
        None => None,
    };
    let (h_factor, a_gen) = default_roles(ctx, &g, h, a_gen)?;
    Ok(RetractionFamily::new(ctx.clone(), g, h_factor, a_gen)?)
}

fn selfless(a: &SelflessArgs, cfg: &RunConfig) -> CliResult<Report> {
    let ctx = parse_context(cfg.group_or("x|y|a"))?;
    let action = match a.action {
        Some(act) => act,
        None => SelflessAction::Injectivity,
    };
    if a.check_injectivity && action != SelflessAction::Injectivity {
        return Err(CliError::Usage(
            "--check-injectivity only applies to the injectivity action".into(),
        ));
    }
    let budget = cfg.budget;
    let mut inputs = json!({ "group": ctx.spec(), "action": format!("{action:?}").to_lowercase() });
    let set = |inputs: &mut Value, k: &str, v: Value| {
        inputs.as_object_mut().expect("object").insert(k.into(), v);
    };

    let (map, map_input) = if matches!(action, SelflessAction::Injectivity | SelflessAction::Fibers) {
        match &a.map {
            Some(text) => {
                let sub = Substitution::parse(ctx.clone(), text)?;
                (Some(sub), json!({ "map": text }))
            }
            None => {
                let ret = family(a, &ctx)?.member(a.n);
                let v = dto::retraction(&ret);
                (Some(ret.substitution().clone()), json!({ "retraction": v }))
            }
        }
    } else {
        (None, Value::Null)
    };

    let (outputs, table) = match action {
        SelflessAction::Injectivity | SelflessAction::Fibers => {
            let map = map.expect("built above");
            set(&mut inputs, "map", map_input);
            let radius = a.radius.unwrap_or(a.n as usize);
            set(&mut inputs, "radius", json!(radius));
            if action == SelflessAction::Injectivity {
                let r = check_injectivity(&map, radius, &budget)?;
                (dto::injectivity(&ctx, &r), None)
            } else {
                let f = fiber_statistics(&map, radius, &budget)?;
                let mut t = Table::new(&["fiber_size", "count"]);
                for (size, count) in &f.histogram {
                    t.push(vec![size.to_string(), count.to_string()]);
                }
                (dto::fibers(&ctx, &f), Some(t))
            }
        }
        SelflessAction::Growth => {
            let fam = family(a, &ctx)?;
            set(&mut inputs, "retraction", dto::retraction(&fam.member(1)));
            set(&mut inputs, "radius_max", json!(a.radius_max));
            let p = growth_profile(&fam, a.radius_max, &budget)?;
            let mut t = Table::new(&["n", "ball_size", "f_measured", "envelope"]);
            for q in &p.points {
                t.push(vec![
                    q.n.to_string(),
                    q.ball_size.to_string(),
                    q.f_measured.to_string(),
                    q.envelope.to_string(),
                ]);
            }
            (dto::growth(&p), Some(t))
        }
        SelflessAction::Transfer => {
            let fam = family(a, &ctx)?;
            let z = parse_element(&ctx, required(&a.element, "--element")?)?;
            let eps = parse_rational(&a.epsilon)?;
            let steps = match &a.pairs {
                Some(text) => text
                    .split(',')
                    .map(|pair| {
                        let (m, n) = pair.split_once(':').ok_or_else(|| {
                            CliError::Usage(format!("expected m:n, got {pair:?}"))
                        })?;
                        let m = parse_list::<u64>(m, "m")?[0];
                        let n = parse_list::<u64>(n, "n")?[0];
                        Ok((m, n))
                    })
                    .collect::<CliResult<Vec<_>>>()?,
                None => default_transfer_schedule(&a.ms, z.radius()),
            };
            set(&mut inputs, "retraction", dto::retraction(&fam.member(1)));
            set(&mut inputs, "element", element_input(&z));
            set(&mut inputs, "epsilon", dto::rational(&eps));
            set(&mut inputs, "steps", json!(steps));
            set(&mut inputs, "config", cfg.describe());
            let r = transfer_experiment(&z, &fam, &eps, &steps, &budget, cfg.precision_bits)?;
            let mut t = Table::new(&[
                "m", "n", "f_measured", "poly_squared", "factor", "chain_equal", "success",
            ]);
            for s in &r.steps {
                t.push(vec![
                    s.m.to_string(),
                    s.n.to_string(),
                    s.f_measured.to_string(),
                    s.poly_squared.to_string(),
                    s.factor.to_decimal(
                        selfless_core::norms::decimal_digits(s.factor.scale()),
                        selfless_core::norms::Rounding::Up,
                    ),
                    s.chain_equal.to_string(),
                    s.success.to_string(),
                ]);
            }
            (dto::transfer(&r), Some(t))
        }
        SelflessAction::Product => {
            let ret = family(a, &ctx)?.member(a.n);
            let s = parse_words(&ctx, required(&a.s, "--s")?)?;
            let p: Vec<i64> = match a.p.as_deref() {
                Some(text) if !text.trim().is_empty() => parse_list(text, "exponent")?,
                _ => Vec::new(),
            };
            set(&mut inputs, "retraction", dto::retraction(&ret));
            set(
                &mut inputs,
                "s",
                Value::Array(s.iter().map(|w| dto::word(&ctx, w)).collect()),
            );
            set(&mut inputs, "p", json!(p));
            let w = product_nontriviality(&s, &p, &ret)?;
            (dto::product(&ctx, &w), None)
        }
    };
    let mut report = Report::new("selfless", inputs, outputs);
    report.table = table;
    Ok(report)
}

fn provider(name: &str) -> CliResult<ConstantProvider> {
    if let Some(p) = ConstantProvider::by_name(name) {
        return Ok(p);
    }
    let text = std::fs::read_to_string(name).map_err(|e| CliError::io(name, e))?;
    let p = ConstantProvider::parse(&text)?;
    p.validate()?;
    Ok(p)
}

fn tree(a: &TreeArgs, cfg: &RunConfig) -> CliResult<Report> {
    let ctx = parse_context(cfg.group_or("a|b"))?;
    let g = match a.action {
        TreeAction::Cascade => None,
        _ => Some(ctx.parse_word(required(&a.g, "--g")?)?),
    };
    let mut inputs = json!({
        "group": ctx.spec(),
        "action": format!("{:?}", a.action).to_lowercase(),
        "g": g.as_ref().map(|g| dto::word(&ctx, g)),
    });
    let set = |inputs: &mut Value, k: &str, v: Value| {
        inputs.as_object_mut().expect("object").insert(k.into(), v);
    };
    let outputs = match a.action {
        TreeAction::Length => {
            let g = g.expect("parsed");
            let (core, conj) = g.cyclic_reduce();
            json!({
                "length": g.len(),
                "translation_length": translation_length(&g),
                "core": dto::word(&ctx, &core),
                "conjugator": dto::word(&ctx, &conj),
            })
        }
        TreeAction::Stable => {
            let g = g.expect("parsed");
            set(&mut inputs, "samples", json!(a.samples));
            dto::stable(&stable_length(&g, &a.samples)?)
        }
        TreeAction::Project => {
            let g = g.expect("parsed");
            let h = ctx.parse_word(required(&a.h, "--h")?)?;
            let p = provider(&a.provider)?;
            set(&mut inputs, "h", dto::word(&ctx, &h));
            set(&mut inputs, "provider", dto::provider(&p));
            let axis = Axis::new(&g)?;
            let proj = projection_diameter(&g, &h)?;
            let lambda = quasi_axis_constant(&g)?;
            let bound = p.projection_bound(
                &lambda,
                &BigRational::from_integer(axis.translation().into()),
            );
            let within = proj
                .diameter()
                .map(|d| BigRational::from_integer(d.into()) <= bound);
            json!({
                "translation_length": axis.translation(),
                "projection": dto::projection(&proj),
                "lambda": dto::rational(&lambda),
                "provider_bound": dto::rational(&bound),
                "within_provider_bound": within,
            })
        }
        TreeAction::Cascade => {
            let lambda = parse_rational(required(&a.lambda, "--lambda")?)?;
            let glen = parse_rational(required(&a.glen, "--glen")?)?;
            let disp = parse_rational(&a.displacement)?;
            let p = provider(&a.provider)?;
            set(&mut inputs, "lambda", dto::rational(&lambda));
            set(&mut inputs, "glen", dto::rational(&glen));
            set(&mut inputs, "displacement", dto::rational(&disp));
            set(&mut inputs, "provider", dto::provider(&p));
            dto::cascade(&constant_cascade(&lambda, &glen, &disp, &p)?)
        }
        TreeAction::Path => {
            let g = g.expect("parsed");
            let h = parse_words(&ctx, required(&a.h, "--h")?)?;
            let n: Vec<i64> = parse_list(required(&a.n, "--n")?, "exponent")?;
            let p = provider(&a.provider)?;
            set(
                &mut inputs,
                "h",
                Value::Array(h.iter().map(|w| dto::word(&ctx, w)).collect()),
            );
            set(&mut inputs, "n", json!(n));
            set(&mut inputs, "provider", dto::provider(&p));
            dto::path(&ctx, &admissible_path_check(&g, &h, &n, &p, &cfg.budget)?)
        }
        TreeAction::Search => {
            let g = g.expect("parsed");
            let p = provider(&a.provider)?;
            set(&mut inputs, "h_radius", json!(a.h_radius));
            set(&mut inputs, "m", json!(a.m));
            set(&mut inputs, "provider", dto::provider(&p));
            set(&mut inputs, "config", cfg.describe());
            dto::search(
                &ctx,
                &minimal_exponent_search(&ctx, &g, a.h_radius, a.m, &p, &cfg.budget)?,
            )
        }
    };
    Ok(Report::new("tree", inputs, outputs))
}

fn ball(a: &BallArgs, cfg: &RunConfig) -> CliResult<Report> {
    let ctx = parse_context(cfg.group_or("a|b"))?;
    let size = ctx.ball_size(a.radius);
    let inputs = json!({ "group": ctx.spec(), "radius": a.radius, "list": a.list });
    let mut outputs = json!({
        "rank": ctx.rank(),
        "size": size.map(|s| s.to_string()),
    });
    let mut table = None;
    if a.list {
        let words: Vec<String> = ctx
            .enumerate_ball(a.radius, &cfg.budget)?
            .map(|w| ctx.format_word(&w))
            .collect();
        let mut t = Table::new(&["index", "word"]);
        for (i, w) in words.iter().enumerate() {
            t.push(vec![i.to_string(), w.clone()]);
        }
        table = Some(t);
        outputs["words"] = json!(words);
    }
    let mut report = Report::new("ball", inputs, outputs);
    report.table = table;
    Ok(report)
}
