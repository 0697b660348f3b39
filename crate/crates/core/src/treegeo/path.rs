use std::cmp::Ordering;
use std::collections::HashMap;

use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;

use super::axis::{elementary_membership, translation_length};
use super::constants::{constant_cascade, CascadeReport, ConstantProvider};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::words::Word;

/// Breakpoint lists longer than this are counted but not stored in reports.
pub const MAX_STORED_BREAKPOINTS: usize = 1000;

/// The vertices visited by a walk in the Cayley tree, with constant-time
/// distance queries between any two of them.
struct WalkTree {
    depth: Vec<u32>,
    first: Vec<usize>,
    /// `table[k][i]` = least depth on the Euler tour over `[i, i + 2^k)`.
    table: Vec<Vec<u32>>,
}

impl WalkTree {
    /// Builds the tree spanned by `steps` from `e` and returns it with the node
    /// reached after each step (the start node included).
    fn walk(steps: &[&Word]) -> (WalkTree, Vec<usize>) {
        let mut parent = vec![usize::MAX];
        let mut depth = vec![0u32];
        let mut incoming = vec![u32::MAX];
        let mut child: HashMap<(usize, u32), usize> = HashMap::new();
        let mut at = 0usize;
        let mut visits = vec![0];
        for step in steps {
            for l in step.letters() {
                if at != 0 && incoming[at] == l.inv().key() {
                    at = parent[at];
                    continue;
                }
                at = *child.entry((at, l.key())).or_insert_with(|| {
                    parent.push(at);
                    depth.push(depth[at] + 1);
                    incoming.push(l.key());
                    parent.len() - 1
                });
            }
            visits.push(at);
        }

        let n = parent.len();
        let mut kids: Vec<Vec<usize>> = vec![Vec::new(); n];
        for v in 1..n {
            kids[parent[v]].push(v);
        }
        let mut euler = Vec::with_capacity(2 * n);
        let mut first = vec![0; n];
        let mut stack = vec![(0usize, 0usize)];
        while let Some((v, next)) = stack.pop() {
            if next == 0 {
                first[v] = euler.len();
            }
            euler.push(depth[v]);
            if next < kids[v].len() {
                stack.push((v, next + 1));
                stack.push((kids[v][next], 0));
            }
        }
        let mut table = vec![euler];
        let mut k = 1;
        while (1 << k) <= table[0].len() {
            let prev = &table[k - 1];
            let half = 1 << (k - 1);
            let row: Vec<u32> = (0..prev.len() - half)
                .map(|i| prev[i].min(prev[i + half]))
                .collect();
            table.push(row);
            k += 1;
        }
        (WalkTree { depth, first, table }, visits)
    }

    fn distance(&self, u: usize, v: usize) -> u64 {
        let (a, b) = {
            let (x, y) = (self.first[u], self.first[v]);
            (x.min(y), x.max(y))
        };
        let k = (usize::BITS - 1 - (b - a + 1).leading_zeros()) as usize;
        let lca = self.table[k][a].min(self.table[k][b + 1 - (1 << k)]);
        (self.depth[u] + self.depth[v] - 2 * lca) as u64
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathReport {
    pub product: Word,
    pub nontrivial: bool,
    /// `o, h_1 o, h_1 g o, ..., h_1 g^(n_1) o, h_1 g^(n_1) h_2 o, ...`.
    pub breakpoint_count: usize,
    /// Present when there are at most [`MAX_STORED_BREAKPOINTS`].
    pub breakpoints: Option<Vec<Word>>,
    pub path_length: u64,
    /// Max over breakpoint pairs of path length over tree distance; `None` if
    /// two breakpoints coincide.
    pub lambda_emp: Option<BigRational>,
    /// Breakpoint indices attaining `lambda_emp`.
    pub worst_pair: Option<(usize, usize)>,
    pub cascade: CascadeReport,
    /// Every `|n_i|` reaches the threshold (a final `n_m = 0` excepted).
    pub above_threshold: bool,
    /// `lambda_emp <= Lambda`, decided when `above_threshold`.
    pub within_theory: Option<bool>,
}

/// `lambda = |g| / [g]`, the quasi-axis constant of the orbit of `e`.
pub fn quasi_axis_constant(g: &Word) -> Result<BigRational> {
    let t = translation_length(g);
    if t == 0 {
        return Err(Error::Hypothesis("g must be loxodromic (g != e)".into()));
    }
    Ok(BigRational::new(g.len().into(), t.into()))
}

/// The cascade for `g` with `lambda = |g|/[g]`, `|g|_S = |g|` and displacement `[g]`.
pub fn cascade_for(g: &Word, provider: &ConstantProvider) -> Result<CascadeReport> {
    let lambda = quasi_axis_constant(g)?;
    constant_cascade(
        &lambda,
        &BigRational::from_integer(g.len().into()),
        &BigRational::from_integer(translation_length(g).into()),
        provider,
    )
}

pub(crate) fn check_path_hypotheses(g: &Word, h: &[Word], n: &[i64]) -> Result<()> {
    if h.is_empty() || h.len() != n.len() {
        return Err(Error::Hypothesis(format!(
            "need equally many h_i and n_i (got {} and {})",
            h.len(),
            n.len()
        )));
    }
    for (i, hi) in h.iter().enumerate() {
        if elementary_membership(g, hi)? {
            return Err(Error::Hypothesis(format!("h_{} lies in E(g)", i + 1)));
        }
        if hi.len() > g.len() {
            return Err(Error::Hypothesis(format!(
                "|h_{}| = {} exceeds |g| = {}",
                i + 1,
                hi.len(),
                g.len()
            )));
        }
    }
    if let Some(i) = n[..n.len() - 1].iter().position(|&e| e == 0) {
        return Err(Error::Hypothesis(format!("n_{} is zero", i + 1)));
    }
    Ok(())
}

/// Builds the product `h_1 g^(n_1) ... h_m g^(n_m)` and the path through its
/// breakpoints, and measures how far the path is from a geodesic.
pub fn admissible_path_check(
    g: &Word,
    h: &[Word],
    n: &[i64],
    provider: &ConstantProvider,
    budget: &Budget,
) -> Result<PathReport> {
    let cascade = cascade_for(g, provider)?;
    check_path_hypotheses(g, h, n)?;

    let g_inv = g.inverse();
    let mut steps: Vec<&Word> = Vec::new();
    for (hi, &ni) in h.iter().zip(n) {
        steps.push(hi);
        let step = if ni > 0 { g } else { &g_inv };
        steps.extend(std::iter::repeat_n(step, ni.unsigned_abs() as usize));
    }
    let count = steps.len() + 1;
    let pairs = (count as u128) * (count as u128 - 1) / 2;
    budget.admit("breakpoint pairs", Some(pairs))?;

    let mut product = Word::identity();
    let mut stored = (count <= MAX_STORED_BREAKPOINTS).then(|| vec![Word::identity()]);
    for s in &steps {
        for &syl in s.syllables() {
            product.push(syl);
        }
        if let Some(b) = stored.as_mut() {
            b.push(product.clone());
        }
    }

    let mut prefix = vec![0u64];
    for s in &steps {
        prefix.push(prefix.last().unwrap() + s.len() as u64);
    }
    let (tree, nodes) = WalkTree::walk(&steps);

    // Best ratio (num, den) per start index; den = 0 means a repeated vertex.
    let better = |a: &(u64, u64, usize, usize), b: &(u64, u64, usize, usize)| -> Ordering {
        let lhs = a.0 as u128 * b.1 as u128;
        let rhs = b.0 as u128 * a.1 as u128;
        lhs.cmp(&rhs).then_with(|| (b.2, b.3).cmp(&(a.2, a.3)))
    };
    let worst = (0..count)
        .into_par_iter()
        .filter_map(|i| {
            (i + 1..count)
                .map(|j| (prefix[j] - prefix[i], tree.distance(nodes[i], nodes[j]), i, j))
                .max_by(better)
        })
        .max_by(better);

    let (lambda_emp, worst_pair) = match worst {
        Some((num, den, i, j)) if den > 0 => (
            Some(BigRational::new(num.into(), den.into())),
            Some((i, j)),
        ),
        Some((_, _, i, j)) => (None, Some((i, j))),
        None => (Some(BigRational::zero()), None),
    };

    let above_threshold = n.iter().enumerate().all(|(i, &e)| {
        (i + 1 == n.len() && e == 0)
            || BigRational::from_integer(e.unsigned_abs().into()) >= cascade.threshold
    });
    let within_theory = above_threshold.then(|| match &lambda_emp {
        Some(l) => l <= &cascade.big_lambda,
        None => false,
    });

    Ok(PathReport {
        nontrivial: !product.is_identity(),
        product,
        breakpoint_count: count,
        breakpoints: stored,
        path_length: *prefix.last().unwrap(),
        lambda_emp,
        worst_pair,
        cascade,
        above_threshold,
        within_theory,
    })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::words::GroupContext;

    fn w(s: &str) -> Word {
        Arc::new(GroupContext::parse("a|b").unwrap()).parse_word(s).unwrap()
    }

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn check(g: &str, h: &[&str], n: &[i64]) -> Result<PathReport> {
        let h: Vec<Word> = h.iter().map(|s| w(s)).collect();
        admissible_path_check(&w(g), &h, n, &ConstantProvider::default(), &Budget::default())
    }

    #[test]
    fn geodesic_product() {
        let r = check("a", &["b"], &[1]).unwrap();
        assert_eq!(r.product, w("b.a"));
        assert!(r.nontrivial);
        assert_eq!(r.lambda_emp, Some(q(1)));
        assert_eq!(r.breakpoints.unwrap(), vec![w("e"), w("b"), w("b.a")]);
    }

    #[test]
    fn conjugated_generator() {
        let r = check("b^2.a.b^-2", &["a", "a^-1"], &[3, 3]).unwrap();
        assert!(r.nontrivial);
        assert_eq!(r.product, w("a.b^2.a^3.b^-2.a^-1.b^2.a^3.b^-2"));
        assert_eq!(r.breakpoint_count, 9);
        assert!(r.lambda_emp.unwrap() >= q(1));
        assert!(!r.above_threshold);
        assert_eq!(r.within_theory, None);
    }

    #[test]
    fn final_exponent_may_vanish() {
        let r = check("a", &["b", "b"], &[2, 0]).unwrap();
        assert_eq!(r.product, w("b.a^2.b"));
        assert!(check("a", &["b", "b"], &[0, 2]).is_err());
    }

    #[test]
    fn backtracking_path() {
        let r = check("a.b", &["b", "b^-1.a"], &[1, 1]).unwrap();
        assert_eq!(r.product, w("b.a^3.b"));
        assert_eq!(r.lambda_emp, Some(q(2)));
    }

    #[test]
    fn hypothesis_violations() {
        assert!(matches!(check("a", &["a^2"], &[1]), Err(Error::Hypothesis(_))));
        assert!(matches!(check("a", &["b^2"], &[1]), Err(Error::Hypothesis(_))));
        assert!(matches!(check("e", &["b"], &[1]), Err(Error::Hypothesis(_))));
        assert!(matches!(check("a", &["b"], &[1, 2]), Err(Error::Hypothesis(_))));
    }

    #[test]
    fn walk_distances_match_words() {
        let steps = [w("a.b"), w("b^-1.a^-1"), w("b"), w("a^-2")];
        let refs: Vec<&Word> = steps.iter().collect();
        let (tree, nodes) = WalkTree::walk(&refs);
        let mut pts = vec![Word::identity()];
        for s in &steps {
            let next = pts.last().unwrap().mul_ref(s);
            pts.push(next);
        }
        for i in 0..pts.len() {
            for j in 0..pts.len() {
                assert_eq!(tree.distance(nodes[i], nodes[j]), pts[i].tree_distance(&pts[j]) as u64);
            }
        }
    }
}
