use std::sync::Arc;

use num_rational::BigRational;
use num_traits::One;

use super::AlgebraElement;
use crate::error::Result;
use crate::words::parse::Cursor;
use crate::words::GroupContext;

impl AlgebraElement {
    /// Parses the element grammar: terms `p/q*word` joined by `+` or `-`.
    ///
    /// The coefficient may be omitted (meaning 1) and a term may carry its
    /// own sign, as in `1/2*e + -1*b^3.x.b^-3`. Words are reduced and
    /// repeated words merged on ingest. `0` denotes the zero element.
    pub fn parse(ctx: Arc<GroupContext>, text: &str) -> Result<AlgebraElement> {
        if text.trim() == "0" {
            return Ok(AlgebraElement::zero(ctx));
        }
        let mut c = Cursor::new(text);
        let mut terms = Vec::new();
        c.skip_ws();
        if c.at_end() {
            return Err(c.error("empty element"));
        }
        let mut first = true;
        loop {
            c.skip_ws();
            let mut negative = false;
            if !first {
                match c.peek() {
                    Some('+') => {}
                    Some('-') => negative = true,
                    _ => return Err(c.error("expected `+` or `-` between terms")),
                }
                c.bump();
                c.skip_ws();
            }
            while let Some(sign @ ('+' | '-')) = c.peek() {
                negative ^= sign == '-';
                c.bump();
                c.skip_ws();
            }
            let coeff = if c.peek().is_some_and(|ch| ch.is_ascii_digit()) {
                let r = c.rational()?;
                c.skip_ws();
                if !c.eat('*') {
                    return Err(c.error("expected `*` after coefficient"));
                }
                c.skip_ws();
                r
            } else {
                BigRational::one()
            };
            let word = ctx.parse_word_at(&mut c)?;
            terms.push((word, if negative { -coeff } else { coeff }));
            first = false;
            c.skip_ws();
            if c.at_end() {
                break;
            }
        }
        Ok(AlgebraElement::from_terms(ctx, terms))
    }
}
