use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::words::parse_rational;

fn q(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

/// `c2 x^2 + c1 x + c0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quadratic {
    pub c2: BigRational,
    pub c1: BigRational,
    pub c0: BigRational,
}

impl Quadratic {
    pub fn new(c2: BigRational, c1: BigRational, c0: BigRational) -> Self {
        Quadratic { c2, c1, c0 }
    }

    pub fn from_ints(c2: i64, c1: i64, c0: i64) -> Self {
        Quadratic::new(q(c2), q(c1), q(c0))
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        (&self.c2 * x + &self.c1) * x + &self.c0
    }

    fn parse(text: &str) -> Result<Self> {
        let parts: Vec<&str> = text.split(',').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(Error::parse(0, format!("expected c2,c1,c0 but got {text:?}")));
        }
        let c = parts
            .iter()
            .map(|p| parse_rational(p))
            .collect::<Result<Vec<_>>>()?;
        Ok(Quadratic::new(c[0].clone(), c[1].clone(), c[2].clone()))
    }

    fn is_nonnegative(&self) -> bool {
        !self.c2.is_negative() && !self.c1.is_negative() && !self.c0.is_negative()
    }
}

impl fmt::Display for Quadratic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{}", self.c2, self.c1, self.c0)
    }
}

/// The hyperbolicity, Morse, projection and contraction constants fed into the cascade.
///
/// `mu` and `eps` default to `Q3`. Only `Q2`, `Q3`, `mu`, `eps` and `C'` enter the
/// cascade; `delta`, `Q1` and `D0` are carried for reporting.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstantProvider {
    pub name: String,
    pub delta: BigRational,
    pub q1: Quadratic,
    pub q2: Quadratic,
    pub q3: Quadratic,
    pub mu: Option<Quadratic>,
    pub eps: Option<Quadratic>,
    pub c_prime: BigRational,
    pub d0: BigRational,
}

impl Default for ConstantProvider {
    /// `Q1 = Q2 = Q3 = x^2 + x`, `C' = D0 = 1`, `delta = 0`.
    fn default() -> Self {
        let quad = Quadratic::from_ints(1, 1, 0);
        ConstantProvider {
            name: "default".into(),
            delta: BigRational::zero(),
            q1: quad.clone(),
            q2: quad.clone(),
            q3: quad,
            mu: None,
            eps: None,
            c_prime: BigRational::one(),
            d0: BigRational::one(),
        }
    }
}

impl ConstantProvider {
    /// Every quadratic is the identity `x`.
    pub fn trivial() -> Self {
        let lin = Quadratic::from_ints(0, 1, 0);
        ConstantProvider {
            name: "trivial".into(),
            q1: lin.clone(),
            q2: lin.clone(),
            q3: lin,
            ..ConstantProvider::default()
        }
    }

    pub fn by_name(name: &str) -> Option<Self> {
        match name {
            "default" => Some(ConstantProvider::default()),
            "trivial" => Some(ConstantProvider::trivial()),
            _ => None,
        }
    }

    /// Parses `key=value` lines over the default provider. Keys: `delta`, `Q1`,
    /// `Q2`, `Q3`, `mu`, `eps` (quadratics as `c2,c1,c0`), `Cprime`, `D0`.
    /// `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut p = ConstantProvider {
            name: "file".into(),
            ..ConstantProvider::default()
        };
        let mut offset = 0;
        for line in text.lines() {
            let pos = offset;
            offset += line.len() + 1;
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::parse(pos, "expected key=value"))?;
            let value = value.trim();
            let at = |e: Error| match e {
                Error::Parse { msg, .. } => Error::parse(pos, msg),
                other => other,
            };
            match key.trim() {
                "delta" => p.delta = parse_rational(value).map_err(at)?,
                "Q1" => p.q1 = Quadratic::parse(value).map_err(at)?,
                "Q2" => p.q2 = Quadratic::parse(value).map_err(at)?,
                "Q3" => p.q3 = Quadratic::parse(value).map_err(at)?,
                "mu" => p.mu = Some(Quadratic::parse(value).map_err(at)?),
                "eps" => p.eps = Some(Quadratic::parse(value).map_err(at)?),
                "Cprime" => p.c_prime = parse_rational(value).map_err(at)?,
                "D0" => p.d0 = parse_rational(value).map_err(at)?,
                other => return Err(Error::parse(pos, format!("unknown key {other:?}"))),
            }
        }
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let quads = [Some(&self.q1), Some(&self.q2), Some(&self.q3), self.mu.as_ref(), self.eps.as_ref()];
        if quads.iter().flatten().any(|q| !q.is_nonnegative())
            || self.delta.is_negative()
            || self.c_prime.is_negative()
            || self.d0.is_negative()
        {
            return Err(Error::InvalidArgument("provider constants must be nonnegative".into()));
        }
        Ok(())
    }

    pub fn mu_at(&self, lambda: &BigRational) -> BigRational {
        self.mu.as_ref().unwrap_or(&self.q3).eval(lambda)
    }

    pub fn eps_at(&self, lambda: &BigRational) -> BigRational {
        self.eps.as_ref().unwrap_or(&self.q3).eval(lambda)
    }

    /// `sigma(U) = (3/2) Q3(lambda) + 2U`.
    pub fn sigma(&self, lambda: &BigRational, u: &BigRational) -> BigRational {
        BigRational::new(3.into(), 2.into()) * self.q3.eval(lambda) + q(2) * u
    }

    /// `nu(U) = 2U + Q2(lambda)(1 + [g])`.
    pub fn nu(&self, lambda: &BigRational, displacement: &BigRational, u: &BigRational) -> BigRational {
        q(2) * u + self.q2.eval(lambda) * (BigRational::one() + displacement)
    }

    /// `Q2(lambda)(1 + [g])`, the tree bound on projections of distinct axes.
    pub fn projection_bound(&self, lambda: &BigRational, displacement: &BigRational) -> BigRational {
        self.q2.eval(lambda) * (BigRational::one() + displacement)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CascadeReport {
    pub lambda: BigRational,
    pub g_length: BigRational,
    pub displacement: BigRational,
    pub provider: ConstantProvider,
    pub mu: BigRational,
    pub eps: BigRational,
    pub c: BigRational,
    pub b: BigRational,
    pub r: BigRational,
    pub big_lambda: BigRational,
    pub d: BigRational,
    pub threshold: BigRational,
}

/// `lambda (6R + 1)`.
pub fn quasi_geodesic_constant(lambda: &BigRational, r: &BigRational) -> BigRational {
    lambda * (q(6) * r + BigRational::one())
}

/// The constants `C, B, R, Lambda, D` and the exponent threshold `lambda D`.
///
/// `mu` and `eps` are bounded by the same value at `lambda` and at `1`, so
/// every `mu(1,0)` and `eps(1,0)` slot uses the provider's value at `lambda`.
pub fn constant_cascade(
    lambda: &BigRational,
    g_length: &BigRational,
    displacement: &BigRational,
    provider: &ConstantProvider,
) -> Result<CascadeReport> {
    if lambda < &BigRational::one() {
        return Err(Error::InvalidArgument(format!("lambda = {lambda} is below 1")));
    }
    if g_length.is_negative() || displacement.is_negative() {
        return Err(Error::InvalidArgument("lengths must be nonnegative".into()));
    }
    provider.validate()?;
    let mu = provider.mu_at(lambda);
    let eps = provider.eps_at(lambda);
    let cl = &provider.c_prime * g_length;
    let one = BigRational::one();

    let c = lambda * (&mu + &eps + &cl);
    let sigma0 = provider.sigma(lambda, &BigRational::zero());
    let b = q(2) * &eps + q(2) * &mu + provider.nu(lambda, displacement, &(&mu + &sigma0)) + &cl;
    let r = (&cl + q(2) * &eps + q(4) * &mu + &one).max(&mu + q(5) * &eps + &b + &one);
    let big_lambda = quasi_geodesic_constant(lambda, &r);
    let d = [
        &mu + &eps + &cl + &c,
        q(2) * &cl + q(3) * &eps + q(6) * &mu,
        &big_lambda * (&r + provider.sigma(lambda, &mu)),
        q(13) * &eps + q(6) * &mu + q(2) * &b,
    ]
    .into_iter()
    .max()
    .expect("four candidates");
    let threshold = lambda * &d;
    Ok(CascadeReport {
        lambda: lambda.clone(),
        g_length: g_length.clone(),
        displacement: displacement.clone(),
        provider: provider.clone(),
        mu,
        eps,
        c,
        b,
        r,
        big_lambda,
        d,
        threshold,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_provider_gives_three() {
        let one = q(1);
        let r = constant_cascade(&one, &one, &one, &ConstantProvider::trivial()).unwrap();
        assert_eq!(r.mu, one);
        assert_eq!(r.c, q(3));
        assert_eq!(r.big_lambda, quasi_geodesic_constant(&one, &r.r));
    }

    #[test]
    fn quasi_geodesic_constant_example() {
        assert_eq!(quasi_geodesic_constant(&q(1), &q(1)), q(7));
    }

    #[test]
    fn default_provider_chain() {
        let one = q(1);
        let r = constant_cascade(&one, &one, &one, &ConstantProvider::default()).unwrap();
        assert_eq!(r.c, q(5));
        assert_eq!(r.b, q(23));
        assert_eq!(r.r, q(36));
        assert_eq!(r.big_lambda, q(217));
        assert_eq!(r.d, q(9331));
        assert_eq!(r.threshold, q(9331));
    }

    #[test]
    fn provider_file() {
        let p = ConstantProvider::parse("# tree\ndelta=0\nQ1=0,1,0\nQ2 = 0,1,0\nQ3=0,1,0\nCprime=1\nD0=1\n").unwrap();
        assert_eq!(p.q3, ConstantProvider::trivial().q3);
        let mu = ConstantProvider::parse("mu=0,0,1/2").unwrap();
        assert_eq!(mu.mu_at(&q(7)), BigRational::new(1.into(), 2.into()));
        assert!(ConstantProvider::parse("Q1=1,1").is_err());
        assert!(ConstantProvider::parse("Q9=1,1,1").is_err());
        assert!(ConstantProvider::parse("D0=-1").is_err());
    }

    #[test]
    fn rejects_small_lambda() {
        let half = BigRational::new(1.into(), 2.into());
        assert!(constant_cascade(&half, &q(1), &q(1), &ConstantProvider::default()).is_err());
    }
}
