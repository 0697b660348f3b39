//! JSON views of library results. Exact quantities are decimal strings.

use num_rational::BigRational;
use selfless_core::norms::{decimal_digits, Dyadic, NormCertificate, PowerStep, Rounding};
use selfless_core::selfless::{
    FiberStatistics, GrowthProfile, InjectivityReport, ProductWitness, Retraction, TransferReport,
};
use selfless_core::treegeo::{
    CascadeReport, ConstantProvider, PathReport, Projection, SearchReport, StableLength,
};
use selfless_core::words::{GroupContext, Word};
use serde_json::{json, Value};

pub fn rational(r: &BigRational) -> Value {
    json!({ "num": r.numer().to_string(), "den": r.denom().to_string() })
}

/// Mantissa and scale, plus a decimal rounded in `dir`.
pub fn dyadic(d: &Dyadic, dir: Rounding) -> Value {
    json!({
        "mantissa": d.mantissa().to_string(),
        "scale": d.scale(),
        "decimal": d.to_decimal(decimal_digits(d.scale()), dir),
    })
}

fn opt_dyadic(d: &Option<Dyadic>, dir: Rounding) -> Value {
    d.as_ref().map_or(Value::Null, |d| dyadic(d, dir))
}

pub fn word(ctx: &GroupContext, w: &Word) -> Value {
    Value::String(ctx.format_word(w))
}

fn words(ctx: &GroupContext, ws: &[Word]) -> Value {
    Value::Array(ws.iter().map(|w| word(ctx, w)).collect())
}

fn power_step(s: &PowerStep) -> Value {
    json!({
        "m": s.m,
        "support": s.support_len,
        "radius": s.radius,
        "radicand": rational(&s.radicand),
        "layers": s.profile.layers.iter().map(rational).collect::<Vec<_>>(),
        "lower": dyadic(&s.lower, Rounding::Down),
        "haagerup_layered": dyadic(&s.haagerup.layered, Rounding::Up),
        "haagerup_flat": dyadic(&s.haagerup.flat, Rounding::Up),
        "upper": dyadic(&s.upper, Rounding::Up),
    })
}

pub fn certificate(c: &NormCertificate) -> Value {
    json!({
        "element_hash": c.element_hash,
        "precision_bits": c.precision_bits,
        "schedule": c.schedule,
        "steps": c.steps.iter().map(power_step).collect::<Vec<_>>(),
        "best_lower": opt_dyadic(&c.best_lower, Rounding::Down),
        "best_upper": opt_dyadic(&c.best_upper, Rounding::Up),
        "lower_monotone": c.lower_monotone,
        "consistent": c.is_consistent(),
    })
}

pub fn retraction(r: &Retraction) -> Value {
    let ctx = r.context();
    json!({
        "g": word(ctx, &r.g),
        "n": r.n,
        "g_factor": ctx.factors()[r.g_factor].join(","),
        "h_factor": ctx.factors()[r.h_factor].join(","),
        "a": ctx.name(r.a_gen),
        "conjugator": word(ctx, &r.conjugator),
        "image_of_a": word(ctx, &r.image_of_a),
    })
}

pub fn injectivity(ctx: &GroupContext, r: &InjectivityReport) -> Value {
    json!({
        "radius": r.radius,
        "ball_size": r.ball_size,
        "injective": r.injective(),
        "collision_count": r.collision_count,
        "max_fiber": r.max_fiber,
        "collisions": r.collisions.iter().map(|(u, v)| json!([word(ctx, u), word(ctx, v)])).collect::<Vec<_>>(),
        "collisions_truncated": r.collisions.len() < r.collision_count,
    })
}

pub fn fibers(ctx: &GroupContext, f: &FiberStatistics) -> Value {
    json!({
        "radius": f.radius,
        "ball_size": f.ball_size,
        "max_fiber": f.max_fiber,
        "histogram": f.histogram.iter().map(|(size, count)| json!({ "fiber_size": size, "count": count })).collect::<Vec<_>>(),
        "largest_fiber": words(ctx, &f.largest_fiber),
    })
}

pub fn growth(p: &GrowthProfile) -> Value {
    json!({
        "g_length": p.g_length,
        "points": p.points.iter().map(|q| json!({
            "n": q.n,
            "ball_size": q.ball_size,
            "f_measured": q.f_measured,
            "envelope": q.envelope,
        })).collect::<Vec<_>>(),
        "nondecreasing": p.nondecreasing(),
        "within_envelope": p.within_envelope(),
        "root_strictly_decreasing_from_2": p.root_strictly_decreasing_from(2),
    })
}

pub fn transfer(r: &TransferReport) -> Value {
    json!({
        "element_hash": r.element_hash,
        "radius": r.radius,
        "epsilon": rational(&r.epsilon),
        "factors_strictly_decreasing": r.factors_strictly_decreasing(),
        "steps": r.steps.iter().map(|s| json!({
            "m": s.m,
            "n": s.n,
            "source_radicand": rational(&s.source_radicand),
            "image_radicand": rational(&s.image_radicand),
            "l2_equal": s.l2_equal,
            "growth_radius": s.growth_radius,
            "f_measured": s.f_measured,
            "poly_squared": s.poly_squared.to_string(),
            "factor": dyadic(&s.factor, Rounding::Up),
            "chain_image": rational(&s.chain_image),
            "chain_source": rational(&s.chain_source),
            "chain_equal": s.chain_equal,
            "image_upper": dyadic(&s.image_upper, Rounding::Up),
            "source_lower": dyadic(&s.source_lower, Rounding::Down),
            "success": s.success,
        })).collect::<Vec<_>>(),
    })
}

pub fn product(ctx: &GroupContext, w: &ProductWitness) -> Value {
    json!({
        "product": word(ctx, &w.product),
        "product_length": w.product.len(),
        "pieces": words(ctx, &w.pieces),
        "interior_outside_g": w.interior_outside_g,
        "nontrivial": w.nontrivial,
    })
}

pub fn stable(s: &StableLength) -> Value {
    let ratios = s.ratios();
    json!({
        "exact": s.exact,
        "conjugator_length": s.conjugator_length,
        "samples": s.samples.iter().zip(&ratios).map(|((n, len), r)| json!({
            "n": n,
            "length": len,
            "ratio": rational(r),
        })).collect::<Vec<_>>(),
        "within_conjugator_bound": s.within_conjugator_bound(),
    })
}

pub fn projection(p: &Projection) -> Value {
    match p {
        Projection::Bounded {
            diameter,
            window,
            low,
            high,
        } => json!({
            "bounded": true,
            "diameter": diameter,
            "window": window,
            "low": low,
            "high": high,
        }),
        Projection::Unbounded => json!({ "bounded": false, "diameter": null }),
    }
}

pub fn provider(p: &ConstantProvider) -> Value {
    let quad = |q: &Option<_>| q.as_ref().map(|q: &selfless_core::treegeo::Quadratic| q.to_string());
    json!({
        "name": p.name,
        "delta": rational(&p.delta),
        "Q1": p.q1.to_string(),
        "Q2": p.q2.to_string(),
        "Q3": p.q3.to_string(),
        "mu": quad(&p.mu),
        "eps": quad(&p.eps),
        "Cprime": rational(&p.c_prime),
        "D0": rational(&p.d0),
    })
}

pub fn cascade(c: &CascadeReport) -> Value {
    json!({
        "lambda": rational(&c.lambda),
        "g_length": rational(&c.g_length),
        "displacement": rational(&c.displacement),
        "provider": provider(&c.provider),
        "mu": rational(&c.mu),
        "eps": rational(&c.eps),
        "C": rational(&c.c),
        "B": rational(&c.b),
        "R": rational(&c.r),
        "Lambda": rational(&c.big_lambda),
        "D": rational(&c.d),
        "threshold": rational(&c.threshold),
    })
}

pub fn path(ctx: &GroupContext, p: &PathReport) -> Value {
    json!({
        "product": word(ctx, &p.product),
        "product_length": p.product.len(),
        "nontrivial": p.nontrivial,
        "breakpoint_count": p.breakpoint_count,
        "breakpoints": p.breakpoints.as_ref().map(|b| words(ctx, b)),
        "breakpoints_truncated": p.breakpoints.is_none(),
        "path_length": p.path_length.to_string(),
        "lambda_emp": p.lambda_emp.as_ref().map(rational),
        "worst_pair": p.worst_pair.map(|(i, j)| json!([i, j])),
        "cascade": cascade(&p.cascade),
        "above_threshold": p.above_threshold,
        "within_theory": p.within_theory,
    })
}

pub fn search(ctx: &GroupContext, s: &SearchReport) -> Value {
    json!({
        "h_radius": s.h_radius,
        "m": s.m,
        "h_count": s.h_count,
        "tuple_count": s.tuple_count.to_string(),
        "exponent_box": s.exponent_box,
        "products_checked": s.products_checked.to_string(),
        "trivial_count": s.trivial_count.to_string(),
        "witness": s.witness.as_ref().map(|(h, n)| json!({ "h": words(ctx, h), "n": n })),
        "n_emp": s.n_emp,
        "threshold": rational(&s.threshold),
        "within_threshold": s.within_threshold,
    })
}
