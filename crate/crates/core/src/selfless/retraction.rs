use std::sync::Arc;

use crate::algebra::AlgebraElement;
use crate::error::{Error, Result};
use crate::words::parse::Cursor;
use crate::words::{GroupContext, Word};

/// An endomorphism of the free group given by the images of its generators.
///
/// Arbitrary (even non-injective) maps are allowed so that collisions and
/// fiber statistics can be exercised on counterexamples.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Substitution {
    ctx: Arc<GroupContext>,
    images: Vec<Word>,
}

impl Substitution {
    pub fn identity(ctx: Arc<GroupContext>) -> Self {
        let images = (0..ctx.rank() as u32).map(Word::generator).collect();
        Substitution { ctx, images }
    }

    pub fn with_image(mut self, gen: u32, image: Word) -> Result<Self> {
        if gen as usize >= self.ctx.rank() {
            return Err(Error::ContextMismatch(format!("no generator {gen}")));
        }
        self.ctx.check_word(&image)?;
        self.images[gen as usize] = image;
        Ok(self)
    }

    /// Parses `name=word;name=word;...`; unlisted generators are fixed.
    pub fn parse(ctx: Arc<GroupContext>, text: &str) -> Result<Self> {
        let mut map = Substitution::identity(ctx.clone());
        let mut c = Cursor::new(text);
        loop {
            c.skip_ws();
            if c.at_end() {
                break;
            }
            let pos = c.pos();
            let name = c.ident()?;
            let gen = ctx
                .generator(name)
                .ok_or_else(|| Error::parse(pos, format!("unknown generator {name:?}")))?;
            c.skip_ws();
            if !c.eat('=') {
                return Err(c.error("expected `=`"));
            }
            c.skip_ws();
            let image = ctx.parse_word_at(&mut c)?;
            map.images[gen as usize] = image;
            c.skip_ws();
            if !c.eat(';') && !c.at_end() {
                return Err(c.error("expected `;`"));
            }
        }
        Ok(map)
    }

    pub fn context(&self) -> &Arc<GroupContext> {
        &self.ctx
    }

    pub fn image(&self, gen: u32) -> &Word {
        &self.images[gen as usize]
    }

    pub fn apply_word(&self, w: &Word) -> Word {
        let mut out = Word::identity();
        for s in w.syllables() {
            let img = &self.images[s.gen as usize];
            out = out.mul_ref(&img.pow(s.exp as i64));
        }
        out
    }

    /// Pushes `x` forward termwise, merging colliding images exactly.
    pub fn apply_element(&self, x: &AlgebraElement) -> Result<AlgebraElement> {
        if **x.context() != *self.ctx {
            return Err(Error::ContextMismatch(format!(
                "element over {} but map over {}",
                x.context().spec(),
                self.ctx.spec()
            )));
        }
        Ok(x.map_words(self.ctx.clone(), |w| self.apply_word(w)))
    }
}

/// The retraction fixing every factor except `<a>` and sending
/// `a -> h_n g h_n^-1`, where `h_n = y^(2n+1)` for the first generator `y` of
/// the factor `H`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Retraction {
    map: Substitution,
    pub g: Word,
    pub n: u64,
    pub g_factor: usize,
    pub h_factor: usize,
    pub a_gen: u32,
    pub conjugator: Word,
    pub image_of_a: Word,
}

impl Retraction {
    pub fn context(&self) -> &Arc<GroupContext> {
        self.map.context()
    }

    pub fn substitution(&self) -> &Substitution {
        &self.map
    }

    pub fn apply_word(&self, w: &Word) -> Word {
        self.map.apply_word(w)
    }

    pub fn apply_element(&self, x: &AlgebraElement) -> Result<AlgebraElement> {
        self.map.apply_element(x)
    }

    /// Whether `w` avoids the letter `a`, i.e. lies in the fixed subgroup.
    pub fn fixes(&self, w: &Word) -> bool {
        !w.uses_gen(self.a_gen)
    }
}

/// The data `(g, H, a)` from which each retraction `phi_n` is built.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RetractionFamily {
    ctx: Arc<GroupContext>,
    pub g: Word,
    pub g_factor: usize,
    pub h_factor: usize,
    pub a_gen: u32,
}

impl RetractionFamily {
    pub fn new(ctx: Arc<GroupContext>, g: Word, h_factor: usize, a_gen: u32) -> Result<Self> {
        ctx.check_word(&g)?;
        if g.is_identity() {
            return Err(Error::Hypothesis("g must be a nonidentity element".into()));
        }
        let g_factor = ctx.factor_of(g.syllables()[0].gen);
        if !ctx.word_in_factors(&g, &[g_factor]) {
            return Err(Error::Hypothesis(format!(
                "g = {} does not lie in a single factor",
                ctx.format_word(&g)
            )));
        }
        if a_gen as usize >= ctx.rank() {
            return Err(Error::ContextMismatch(format!("no generator {a_gen}")));
        }
        let a_factor = ctx.factor_of(a_gen);
        if ctx.factor_generators(a_factor).len() != 1 {
            return Err(Error::Hypothesis(format!(
                "the free letter {} must generate its own factor",
                ctx.name(a_gen)
            )));
        }
        if h_factor >= ctx.factors().len() {
            return Err(Error::ContextMismatch(format!("no factor {h_factor}")));
        }
        if g_factor == h_factor || a_factor == h_factor || a_factor == g_factor {
            return Err(Error::Hypothesis(
                "G, H and <a> must be three distinct factors".into(),
            ));
        }
        Ok(RetractionFamily {
            ctx,
            g,
            g_factor,
            h_factor,
            a_gen,
        })
    }

    pub fn context(&self) -> &Arc<GroupContext> {
        &self.ctx
    }

    /// `phi_n`.
    pub fn member(&self, n: u64) -> Retraction {
        let y = self.ctx.factor_generators(self.h_factor)[0];
        let exp = i32::try_from(2 * n + 1).expect("retraction index too large");
        let conjugator = Word::power_of(y, exp);
        let image_of_a = self.g.conjugate_by(&conjugator);
        let map = Substitution::identity(self.ctx.clone())
            .with_image(self.a_gen, image_of_a.clone())
            .expect("image lies in the context");
        Retraction {
            map,
            g: self.g.clone(),
            n,
            g_factor: self.g_factor,
            h_factor: self.h_factor,
            a_gen: self.a_gen,
            conjugator,
            image_of_a,
        }
    }
}

/// `phi_n` for the given `g`, factor `H` and free letter `a`.
pub fn build_retraction(
    ctx: Arc<GroupContext>,
    g: Word,
    h_factor: usize,
    a_gen: u32,
    n: u64,
) -> Result<Retraction> {
    Ok(RetractionFamily::new(ctx, g, h_factor, a_gen)?.member(n))
}

/// Parsed form of `g=<word>;H=<generator of H>;n=<int>[;a=<name>]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RetractionSpec {
    pub family: RetractionFamily,
    pub n: u64,
}

impl RetractionSpec {
    pub fn parse(ctx: Arc<GroupContext>, text: &str) -> Result<Self> {
        let mut g = None;
        let mut h = None;
        let mut n = None;
        let mut a = None;
        let mut offset = 0;
        for field in text.split(';') {
            let pos = offset;
            offset += field.len() + 1;
            let field = field.trim();
            if field.is_empty() {
                continue;
            }
            let (key, value) = field
                .split_once('=')
                .ok_or_else(|| Error::parse(pos, "expected key=value"))?;
            let value = value.trim();
            match key.trim() {
                "g" => g = Some(ctx.parse_word(value)?),
                "H" => {
                    h = Some(ctx.factor_by_name(value).ok_or_else(|| {
                        Error::parse(pos, format!("no factor contains {value:?}"))
                    })?)
                }
                "a" => {
                    a = Some(ctx.generator(value).ok_or_else(|| {
                        Error::parse(pos, format!("unknown generator {value:?}"))
                    })?)
                }
                "n" => {
                    n = Some(
                        value
                            .parse::<u64>()
                            .map_err(|_| Error::parse(pos, "n must be a natural number"))?,
                    )
                }
                other => return Err(Error::parse(pos, format!("unknown key {other:?}"))),
            }
        }
        let g = g.ok_or_else(|| Error::parse(0, "missing g"))?;
        let n = n.ok_or_else(|| Error::parse(0, "missing n"))?;
        let (h_factor, a_gen) = default_roles(&ctx, &g, h, a)?;
        Ok(RetractionSpec {
            family: RetractionFamily::new(ctx, g, h_factor, a_gen)?,
            n,
        })
    }

    pub fn retraction(&self) -> Retraction {
        self.family.member(self.n)
    }
}

/// Fills in missing roles: `a` defaults to the last single-generator factor
/// not containing `g`, `H` to the first factor that is neither `G` nor `<a>`.
pub fn default_roles(
    ctx: &GroupContext,
    g: &Word,
    h_factor: Option<usize>,
    a_gen: Option<u32>,
) -> Result<(usize, u32)> {
    let g_factor = g.syllables().first().map(|s| ctx.factor_of(s.gen));
    let a_gen = match a_gen {
        Some(a) => a,
        None => (0..ctx.factors().len())
            .rev()
            .find(|&f| {
                Some(f) != g_factor && Some(f) != h_factor && ctx.factor_generators(f).len() == 1
            })
            .map(|f| ctx.factor_generators(f)[0])
            .ok_or_else(|| Error::Hypothesis("no single-generator factor for the letter a".into()))?,
    };
    let a_factor = ctx.factor_of(a_gen);
    let h_factor = match h_factor {
        Some(h) => h,
        None => (0..ctx.factors().len())
            .find(|&f| Some(f) != g_factor && f != a_factor)
            .ok_or_else(|| Error::Hypothesis("no factor available for H".into()))?,
    };
    Ok((h_factor, a_gen))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> Arc<GroupContext> {
        Arc::new(GroupContext::parse("x|y|a").unwrap())
    }

    fn family(g: &str) -> RetractionFamily {
        let c = ctx();
        let g = c.parse_word(g).unwrap();
        RetractionFamily::new(c, g, 1, 2).unwrap()
    }

    #[test]
    fn images_of_a() {
        let c = ctx();
        let f = family("x");
        assert_eq!(f.member(1).image_of_a, c.parse_word("y^3.x.y^-3").unwrap());
        assert_eq!(f.member(0).image_of_a, c.parse_word("y.x.y^-1").unwrap());
        let sq = family("x^2").member(1);
        assert_eq!(sq.image_of_a, c.parse_word("y^3.x^2.y^-3").unwrap());
        assert_eq!(sq.image_of_a.len(), 8);
    }

    #[test]
    fn rejects_bad_inputs() {
        let c = ctx();
        assert!(RetractionFamily::new(c.clone(), Word::identity(), 1, 2).is_err());
        let xy = c.parse_word("x.y").unwrap();
        assert!(RetractionFamily::new(c.clone(), xy, 1, 2).is_err());
        let x = c.parse_word("x").unwrap();
        assert!(RetractionFamily::new(c.clone(), x.clone(), 0, 2).is_err());
        let two = Arc::new(GroupContext::parse("x|y,a").unwrap());
        assert!(RetractionFamily::new(two, x, 1, 2).is_err());
    }

    #[test]
    fn apply_words() {
        let c = ctx();
        let r = family("x").member(1);
        let w = c.parse_word("x.y^2.x^-1").unwrap();
        assert_eq!(r.apply_word(&w), w);
        let a2 = c.parse_word("a^2").unwrap();
        assert_eq!(r.apply_word(&a2), c.parse_word("y^3.x^2.y^-3").unwrap());
        let ay = c.parse_word("a.y.a^-1").unwrap();
        assert_eq!(r.apply_word(&ay), c.parse_word("y^3.x.y.x^-1.y^-3").unwrap());
    }

    #[test]
    fn apply_elements_keeps_l1_without_collisions() {
        let c = ctx();
        let r = family("x").member(1);
        let z = AlgebraElement::parse(c.clone(), "1/2*x + 1/2*a").unwrap();
        let img = r.apply_element(&z).unwrap();
        assert_eq!(img, AlgebraElement::parse(c, "1/2*x + 1/2*y^3.x.y^-3").unwrap());
        assert_eq!(img.l1(), z.l1());
    }

    #[test]
    fn collisions_merge_exactly() {
        let c = ctx();
        let collapse = Substitution::parse(c.clone(), "a=x").unwrap();
        let z = AlgebraElement::parse(c.clone(), "x - a + 1/3*e").unwrap();
        let img = collapse.apply_element(&z).unwrap();
        assert_eq!(img, AlgebraElement::parse(c, "1/3*e").unwrap());
        assert!(img.l1() < z.l1());
    }

    #[test]
    fn spec_strings() {
        let c = ctx();
        let s = RetractionSpec::parse(c.clone(), "g=x;H=y;n=3").unwrap();
        assert_eq!(s.n, 3);
        assert_eq!(s.retraction().image_of_a, c.parse_word("y^7.x.y^-7").unwrap());
        let t = RetractionSpec::parse(c.clone(), "g=x^2; n=1").unwrap();
        assert_eq!(t.family.h_factor, 1);
        assert_eq!(t.family.a_gen, 2);
        assert!(RetractionSpec::parse(c.clone(), "g=x;H=q;n=1").is_err());
        assert!(RetractionSpec::parse(c.clone(), "g=x;n=-1").is_err());
        assert!(RetractionSpec::parse(c, "H=y;n=1").is_err());
    }
}
