use super::retraction::Retraction;
use crate::error::{Error, Result};
use crate::words::Word;

/// The product `s_1 t_1 s_2 ... t_{m-1} s_m` with `t_i = h_n g^(p_i) h_n^-1`,
/// together with its regrouping
/// `(s_1 h_n) g^(p_1) (h_n^-1 s_2 h_n) g^(p_2) ... (h_n^-1 s_m)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductWitness {
    pub product: Word,
    /// Reduced regrouped pieces, alternating `H`-conjugated `s_i` and `g^(p_i)`.
    pub pieces: Vec<Word>,
    /// Every interior conjugate `h_n^-1 s_i h_n` is nontrivial and leaves `G`.
    pub interior_outside_g: bool,
    pub nontrivial: bool,
}

/// Evaluates the product and checks the hypotheses under which it is nontrivial.
///
/// Violations are errors: `p_i = 0`, `|s_i| > 2n`, an interior `s_i = e`, an
/// `s_i` using the letter `a`, or list lengths that do not interleave.
pub fn product_nontriviality(s: &[Word], p: &[i64], ret: &Retraction) -> Result<ProductWitness> {
    let ctx = ret.context();
    if s.len() != p.len() + 1 {
        return Err(Error::Hypothesis(format!(
            "expected {} words s_i for {} exponents, got {}",
            p.len() + 1,
            p.len(),
            s.len()
        )));
    }
    if let Some(i) = p.iter().position(|&e| e == 0) {
        return Err(Error::Hypothesis(format!("exponent p_{} is zero", i + 1)));
    }
    let bound = 2 * ret.n as usize;
    for (i, w) in s.iter().enumerate() {
        ctx.check_word(w)?;
        if !ret.fixes(w) {
            return Err(Error::Hypothesis(format!(
                "s_{} = {} uses the letter {}",
                i + 1,
                ctx.format_word(w),
                ctx.name(ret.a_gen)
            )));
        }
        if w.len() > bound {
            return Err(Error::Hypothesis(format!(
                "|s_{}| = {} exceeds 2n = {bound}",
                i + 1,
                w.len()
            )));
        }
        if w.is_identity() && i > 0 && i + 1 < s.len() {
            return Err(Error::Hypothesis(format!("interior s_{} is trivial", i + 1)));
        }
    }

    let h = &ret.conjugator;
    let h_inv = h.inverse();
    let mut product = s[0].clone();
    for (w, &e) in s[1..].iter().zip(p) {
        let t = ret.g.pow(e).conjugate_by(h);
        product = product.mul_ref(&t).mul_ref(w);
    }

    let mut pieces = Vec::with_capacity(2 * s.len() - 1);
    pieces.push(s[0].mul_ref(h));
    let mut interior_outside_g = true;
    for (i, (w, &e)) in s[1..].iter().zip(p).enumerate() {
        pieces.push(ret.g.pow(e));
        let last = i + 2 == s.len();
        let piece = if last {
            h_inv.mul_ref(w)
        } else {
            let c = h_inv.mul_ref(w).mul_ref(h);
            interior_outside_g &= !c.is_identity() && !ctx.word_in_factors(&c, &[ret.g_factor]);
            c
        };
        pieces.push(piece);
    }

    Ok(ProductWitness {
        nontrivial: !product.is_identity(),
        product,
        pieces,
        interior_outside_g,
    })
}
