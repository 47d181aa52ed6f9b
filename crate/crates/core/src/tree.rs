//! Decision trees: evaluation, spectra, tree covariance, read multiplicities
//! and the boundary/inner-node bound on the spectral norm.
//!
//! A query node on `x_i` sends inputs with `x_i = +1` to the left (`plus`)
//! subtree and `x_i = -1` to the right (`minus`) subtree. The text form is an
//! s-expression `(xI <left> <right>)` with leaves `1` and `-1`.

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::{self, Write};

use rand::Rng;

use crate::certificate::BoundCertificate;
use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::function::{check_capacity, BooleanFunction};
use crate::spectrum::Spectrum;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum DecisionTree {
    Leaf(i8),
    Query {
        var: u32,
        plus: Box<DecisionTree>,
        minus: Box<DecisionTree>,
    },
}

impl DecisionTree {
    pub fn leaf(value: i8) -> Self {
        DecisionTree::Leaf(value)
    }

    pub fn query(var: u32, plus: DecisionTree, minus: DecisionTree) -> Self {
        DecisionTree::Query {
            var,
            plus: Box::new(plus),
            minus: Box::new(minus),
        }
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, DecisionTree::Leaf(_))
    }

    /// The natural depth-`n` tree computing parity of `x_1 … x_n`.
    pub fn full_parity(n: u32) -> Self {
        fn build(var: u32, n: u32, sign: i8) -> DecisionTree {
            if var == n {
                DecisionTree::Leaf(sign)
            } else {
                DecisionTree::query(var, build(var + 1, n, sign), build(var + 1, n, -sign))
            }
        }
        build(0, n, 1)
    }

    /// Checks that no variable repeats on a root-to-leaf path.
    pub fn validate(&self) -> Result<()> {
        fn walk(t: &DecisionTree, path: u64) -> Result<()> {
            match t {
                DecisionTree::Leaf(v) if *v == 1 || *v == -1 => Ok(()),
                DecisionTree::Leaf(v) => Err(Error::NotBoolean {
                    index: 0,
                    value: *v as i64,
                }),
                DecisionTree::Query { var, plus, minus } => {
                    if *var >= 64 {
                        return Err(Error::IndexOutOfRange { index: *var, n: 64 });
                    }
                    if path >> var & 1 == 1 {
                        return Err(Error::RepeatedPathVariable { var: var + 1 });
                    }
                    walk(plus, path | 1 << var)?;
                    walk(minus, path | 1 << var)
                }
            }
        }
        walk(self, 0)
    }

    pub fn evaluate(&self, input: usize) -> i8 {
        let mut node = self;
        loop {
            match node {
                DecisionTree::Leaf(v) => return *v,
                DecisionTree::Query { var, plus, minus } => {
                    node = if input >> var & 1 == 1 { minus } else { plus };
                }
            }
        }
    }

    /// One more than the largest queried variable index (0 for a leaf).
    pub fn min_variables(&self) -> u32 {
        match self {
            DecisionTree::Leaf(_) => 0,
            DecisionTree::Query { var, plus, minus } => (var + 1)
                .max(plus.min_variables())
                .max(minus.min_variables()),
        }
    }

    /// The function computed on `n` ambient variables.
    pub fn to_function(&self, n: u32) -> Result<BooleanFunction> {
        check_capacity(n)?;
        if self.min_variables() > n {
            return Err(Error::IndexOutOfRange {
                index: self.min_variables() - 1,
                n,
            });
        }
        self.validate()?;
        BooleanFunction::from_predicate(n, |m| self.evaluate(m) == -1)
    }

    pub fn size(&self) -> usize {
        match self {
            DecisionTree::Leaf(_) => 1,
            DecisionTree::Query { plus, minus, .. } => 1 + plus.size() + minus.size(),
        }
    }

    pub fn leaves(&self) -> usize {
        match self {
            DecisionTree::Leaf(_) => 1,
            DecisionTree::Query { plus, minus, .. } => plus.leaves() + minus.leaves(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            DecisionTree::Leaf(_) => 0,
            DecisionTree::Query { plus, minus, .. } => 1 + plus.depth().max(minus.depth()),
        }
    }

    /// `a_i(T)` for `i < n`: the number of query nodes labelled `x_{i+1}`.
    pub fn read_profile(&self, n: u32) -> Vec<u32> {
        let mut counts = vec![0u32; n.max(self.min_variables()) as usize];
        self.visit(&mut |t, _| {
            if let DecisionTree::Query { var, .. } = t {
                counts[*var as usize] += 1;
            }
        });
        counts
    }

    pub fn read_multiplicity(&self, i: u32) -> u32 {
        let mut count = 0;
        self.visit(&mut |t, _| {
            if matches!(t, DecisionTree::Query { var, .. } if *var == i) {
                count += 1;
            }
        });
        count
    }

    /// `max_i a_i(T)`.
    pub fn max_read(&self) -> u32 {
        self.read_profile(0).into_iter().max().unwrap_or(0)
    }

    pub fn is_read_k(&self, k: u32) -> bool {
        self.max_read() <= k
    }

    /// Preorder traversal with depths.
    pub fn visit<'a>(&'a self, f: &mut impl FnMut(&'a DecisionTree, usize)) {
        fn go<'a>(t: &'a DecisionTree, depth: usize, f: &mut impl FnMut(&'a DecisionTree, usize)) {
            f(t, depth);
            if let DecisionTree::Query { plus, minus, .. } = t {
                go(plus, depth + 1, f);
                go(minus, depth + 1, f);
            }
        }
        go(self, 0, f)
    }

    /// Query nodes with at least one leaf child.
    pub fn boundary_size(&self) -> usize {
        let mut count = 0;
        self.visit(&mut |t, _| {
            if let DecisionTree::Query { plus, minus, .. } = t {
                if plus.is_leaf() || minus.is_leaf() {
                    count += 1;
                }
            }
        });
        count
    }

    /// Query nodes whose two children are both query nodes, as preorder ids.
    pub fn inner_nodes(&self) -> Vec<usize> {
        let mut ids = Vec::new();
        let mut id = 0;
        self.visit(&mut |t, _| {
            if let DecisionTree::Query { plus, minus, .. } = t {
                if !plus.is_leaf() && !minus.is_leaf() {
                    ids.push(id);
                }
            }
            id += 1;
        });
        ids
    }
}

impl fmt::Display for DecisionTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DecisionTree::Leaf(v) => write!(f, "{v}"),
            DecisionTree::Query { var, plus, minus } => {
                write!(f, "(x{} {} {})", var + 1, plus, minus)
            }
        }
    }
}

/// Writes the s-expression form, refusing trees that repeat a variable on a path.
pub fn serialize_tree(t: &DecisionTree) -> Result<String> {
    t.validate()?;
    let mut s = String::new();
    write!(s, "{t}").expect("writing to a String cannot fail");
    Ok(s)
}

/// Parses `(xI <left> <right>)` s-expressions with leaves `1` / `-1`.
pub fn parse_tree(text: &str) -> Result<DecisionTree> {
    let mut p = Parser::new(text);
    let tree = p.node()?;
    p.skip_ws();
    if let Some((line, column)) = p.peek_pos() {
        return Err(Error::Parse {
            line,
            column,
            message: "trailing input after tree".into(),
        });
    }
    tree.validate()?;
    Ok(tree)
}

struct Parser<'a> {
    chars: core::iter::Peekable<core::str::CharIndices<'a>>,
    text: &'a str,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Parser {
            chars: text.char_indices().peekable(),
            text,
        }
    }

    fn position(&self, offset: usize) -> (usize, usize) {
        let before = &self.text[..offset];
        let line = before.matches('\n').count() + 1;
        let column = before.rfind('\n').map_or(offset, |nl| offset - nl - 1) + 1;
        (line, column)
    }

    fn peek_pos(&mut self) -> Option<(usize, usize)> {
        let off = self.chars.peek().map(|(o, _)| *o)?;
        Some(self.position(off))
    }

    fn error(&self, offset: usize, message: &str) -> Error {
        let (line, column) = self.position(offset);
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }

    fn end_error(&self, message: &str) -> Error {
        self.error(self.text.len(), message)
    }

    fn skip_ws(&mut self) {
        while matches!(self.chars.peek(), Some((_, c)) if c.is_whitespace()) {
            self.chars.next();
        }
    }

    fn token(&mut self) -> Option<(usize, &'a str)> {
        self.skip_ws();
        let &(start, c) = self.chars.peek()?;
        if c == '(' || c == ')' {
            self.chars.next();
            return Some((start, &self.text[start..start + 1]));
        }
        let mut end = start;
        while let Some(&(o, c)) = self.chars.peek() {
            if c.is_whitespace() || c == '(' || c == ')' {
                break;
            }
            end = o + c.len_utf8();
            self.chars.next();
        }
        Some((start, &self.text[start..end]))
    }

    fn node(&mut self) -> Result<DecisionTree> {
        let (off, tok) = self
            .token()
            .ok_or_else(|| self.end_error("expected a tree"))?;
        match tok {
            "1" | "+1" => Ok(DecisionTree::Leaf(1)),
            "-1" => Ok(DecisionTree::Leaf(-1)),
            "(" => {
                let (voff, vtok) = self
                    .token()
                    .ok_or_else(|| self.end_error("expected a variable"))?;
                let var = parse_variable(vtok)
                    .ok_or_else(|| self.error(voff, "expected a variable xI with I ≥ 1"))?;
                let plus = self.node()?;
                let minus = self.node()?;
                match self.token() {
                    Some((_, ")")) => Ok(DecisionTree::query(var, plus, minus)),
                    Some((o, _)) => Err(self.error(o, "expected ')'")),
                    None => Err(self.end_error("expected ')'")),
                }
            }
            _ => Err(self.error(off, "expected '(' or a leaf value 1 / -1")),
        }
    }
}

/// `xI` (1-based) to a 0-based index.
pub(crate) fn parse_variable(tok: &str) -> Option<u32> {
    let digits = tok.strip_prefix('x')?;
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let i: u32 = digits.parse().ok()?;
    (1..=64).contains(&i).then(|| i - 1)
}

/// Per-query-node data gathered in one bottom-up pass.
#[derive(Clone, Debug, PartialEq)]
pub struct NodeCovariance {
    /// Preorder id.
    pub id: usize,
    pub var: u32,
    pub depth: usize,
    /// `Cov(g, h)` of the two child functions.
    pub cov: Dyadic,
    pub left_l1: Dyadic,
    pub right_l1: Dyadic,
    pub left_is_leaf: bool,
    pub right_is_leaf: bool,
}

/// Spectra and node covariances of a tree over `n` ambient variables.
#[derive(Clone, Debug)]
pub struct TreeAnalysis {
    pub n: u32,
    pub spectrum: Spectrum,
    pub nodes: Vec<NodeCovariance>,
}

fn l1_of(coeffs: &[i64], n: u32) -> Dyadic {
    Dyadic::new(coeffs.iter().map(|&c| (c as i128).abs()).sum(), n)
}

/// Computes every subtree spectrum bottom-up with
/// `f̂(S) = (ĝ(S) + ĥ(S))/2` and `f̂(S ∪ {i}) = (ĝ(S) - ĥ(S))/2`.
pub fn analyze(t: &DecisionTree, n: u32) -> Result<TreeAnalysis> {
    check_capacity(n)?;
    t.validate()?;
    if t.min_variables() > n {
        return Err(Error::IndexOutOfRange {
            index: t.min_variables() - 1,
            n,
        });
    }
    let mut nodes = Vec::new();
    let mut next_id = 0usize;

    fn walk(
        t: &DecisionTree,
        depth: usize,
        n: u32,
        next_id: &mut usize,
        nodes: &mut Vec<NodeCovariance>,
    ) -> Vec<i64> {
        let id = *next_id;
        *next_id += 1;
        match t {
            DecisionTree::Leaf(v) => {
                let mut c = vec![0i64; 1 << n];
                c[0] = (*v as i64) << n;
                c
            }
            DecisionTree::Query { var, plus, minus } => {
                let slot = nodes.len();
                nodes.push(NodeCovariance {
                    id,
                    var: *var,
                    depth,
                    cov: Dyadic::ZERO,
                    left_l1: Dyadic::ZERO,
                    right_l1: Dyadic::ZERO,
                    left_is_leaf: plus.is_leaf(),
                    right_is_leaf: minus.is_leaf(),
                });
                let g = walk(plus, depth + 1, n, next_id, nodes);
                let h = walk(minus, depth + 1, n, next_id, nodes);
                let cross: i128 = g
                    .iter()
                    .zip(&h)
                    .skip(1)
                    .map(|(&a, &b)| a as i128 * b as i128)
                    .sum();
                let node = &mut nodes[slot];
                node.cov = Dyadic::new(cross, 2 * n);
                node.left_l1 = l1_of(&g, n);
                node.right_l1 = l1_of(&h, n);
                let bit = 1usize << var;
                let mut f = vec![0i64; 1 << n];
                for s in (0..1usize << n).filter(|s| s & bit == 0) {
                    f[s] = (g[s] + h[s]) / 2;
                    f[s | bit] = (g[s] - h[s]) / 2;
                }
                f
            }
        }
    }

    let coeffs = walk(t, 0, n, &mut next_id, &mut nodes);
    Ok(TreeAnalysis {
        n,
        spectrum: Spectrum::from_numerators(n, coeffs)?,
        nodes,
    })
}

impl TreeAnalysis {
    /// `Cov[T] = Σ_v Cov[v] 2^{-d(v)}`.
    pub fn tree_cov_weighted(&self) -> Dyadic {
        self.nodes
            .iter()
            .map(|v| v.cov.scale_pow2(-(v.depth as i32)))
            .sum()
    }

    /// `Cov[T] = Cov(g, h) + (Cov[T₀] + Cov[T₁]) / 2`, evaluated over the
    /// preorder node list.
    pub fn tree_cov_recursive(&self) -> Dyadic {
        fn rec(nodes: &[NodeCovariance], pos: &mut usize) -> Dyadic {
            let v = &nodes[*pos];
            *pos += 1;
            let left = if v.left_is_leaf {
                Dyadic::ZERO
            } else {
                rec(nodes, pos)
            };
            let right = if v.right_is_leaf {
                Dyadic::ZERO
            } else {
                rec(nodes, pos)
            };
            v.cov + (left + right).scale_pow2(-1)
        }
        if self.nodes.is_empty() {
            Dyadic::ZERO
        } else {
            rec(&self.nodes, &mut 0)
        }
    }

    pub fn root_cov(&self) -> Dyadic {
        self.nodes.first().map_or(Dyadic::ZERO, |v| v.cov)
    }
}

/// `Cov(g, h)` at the root; zero for a leaf.
pub fn node_cov(t: &DecisionTree, n: u32) -> Result<Dyadic> {
    Ok(analyze(t, n)?.root_cov())
}

/// Tree covariance by the depth-weighted sum.
pub fn tree_cov(t: &DecisionTree, n: u32) -> Result<Dyadic> {
    Ok(analyze(t, n)?.tree_cov_weighted())
}

/// `m_T(S) = max_{i ∈ S} a_i(T)`.
pub fn m_t(profile: &[u32], subset: usize) -> Result<u32> {
    let mut best = 0;
    for i in crate::bits(subset) {
        let a = profile.get(i as usize).copied().unwrap_or(0);
        if a == 0 {
            return Err(Error::Domain(alloc::format!("x{} is never queried", i + 1)));
        }
        best = best.max(a);
    }
    Ok(best)
}

/// `sq_T(S) = 2 Σ_{i ∈ S} √a_i(T)`.
pub fn sq_t(profile: &[u32], subset: usize) -> Result<f64> {
    let mut total = 0.0;
    for i in crate::bits(subset) {
        let a = profile.get(i as usize).copied().unwrap_or(0);
        if a == 0 {
            return Err(Error::Domain(alloc::format!("x{} is never queried", i + 1)));
        }
        total += libm::sqrt(a as f64);
    }
    Ok(2.0 * total)
}

/// The covariance bounds for read-k trees:
/// (a) `Cov[T] ≤ Σ_{S≠∅} (m_T(S) - 1) f̂(S)²`,
/// (b) `Cov[T] ≤ Σ_{S≠∅} sq_T(S) f̂(S)²`,
/// (c) `Cov[T] ≤ 2√k I[f]`,
/// (d) `Cov[T] ≤ (k - 1) Var(f)`,
/// plus a report-only `Cov[T] ≤ log2(k) Var(f)` observation.
pub fn cov_bounds_report(t: &DecisionTree, n: u32) -> Result<Vec<BoundCertificate>> {
    let a = analyze(t, n)?;
    let profile = t.read_profile(n);
    let k = profile.iter().copied().max().unwrap_or(0).max(1);
    let cov = a.tree_cov_weighted();
    let dist = a.spectrum.distribution();
    let mut rhs_a = Dyadic::ZERO;
    let mut rhs_b = 0.0;
    for s in a.spectrum.support().filter(|&s| s != 0) {
        let mass = dist.exact_prob(s).expect("exact");
        rhs_a = rhs_a + mass * Dyadic::from_int(m_t(&profile, s)? as i128 - 1);
        rhs_b += sq_t(&profile, s)? * mass.to_f64();
    }
    let influence = dist.exact_total_influence().expect("exact").to_f64();
    let variance = a.spectrum.variance();
    let cov_f = cov.to_f64();
    Ok(vec![
        BoundCertificate::check_exact("cov_le_m_weighted", cov, rhs_a).with_param("k", k as f64),
        BoundCertificate::check("cov_le_sq_weighted", cov_f, rhs_b).with_param("k", k as f64),
        BoundCertificate::check(
            "cov_le_2_sqrt_k_influence",
            cov_f,
            2.0 * libm::sqrt(k as f64) * influence,
        )
        .with_param("k", k as f64),
        BoundCertificate::check_exact(
            "cov_le_k_minus_1_variance",
            cov,
            variance * Dyadic::from_int(k as i128 - 1),
        )
        .with_param("k", k as f64),
        BoundCertificate::check(
            "cov_le_log_k_variance",
            cov_f,
            libm::log2(k as f64) * variance.to_f64(),
        )
        .with_param("k", k as f64)
        .report_only()
        .with_note("conjectured, not a theorem"),
    ])
}

/// `‖f̂‖₁ ≤ boundary_size(T) - Σ_{v ∈ inner(T)} |Cov(g_v, h_v)|`, with parts
/// for the leaf-count bound and the one-step recursion at the root.
pub fn l1_tree_bound(t: &DecisionTree, n: u32) -> Result<BoundCertificate> {
    let a = analyze(t, n)?;
    let l1 = a.spectrum.l1_norm_exact();
    let inner: Dyadic = a
        .nodes
        .iter()
        .filter(|v| !v.left_is_leaf && !v.right_is_leaf)
        .map(|v| v.cov.abs())
        .sum();
    let boundary = t.boundary_size();
    let leaves = t.leaves();
    // A bare leaf has no boundary nodes but ‖f̂‖₁ = 1.
    let rhs = if t.is_leaf() {
        Dyadic::ONE
    } else {
        Dyadic::from_int(boundary as i128) - inner
    };
    let mut cert = BoundCertificate::check_exact("l1_tree_bound", l1, rhs)
        .with_param("boundary_size", boundary as f64)
        .with_param("inner_cov_sum", inner.to_f64())
        .with_part(
            BoundCertificate::check_exact("l1_le_leaves", l1, Dyadic::from_int(leaves as i128))
                .with_param("leaves", leaves as f64),
        );
    if let Some(root) = a.nodes.first() {
        cert = cert.with_part(BoundCertificate::check_exact(
            "l1_root_recursion",
            l1,
            root.left_l1 + root.right_l1 - root.cov.abs(),
        ));
    }
    Ok(cert)
}

/// Checks `ĝ(S)² + ĥ(S)² = 2(f̂(S)² + f̂(S ∪ {r})²)` exactly for every `S`
/// avoiding the root variable `r`. `lhs` counts violations.
pub fn www_split_identity(t: &DecisionTree, n: u32) -> Result<BoundCertificate> {
    let DecisionTree::Query { var, plus, minus } = t else {
        return Ok(BoundCertificate::not_applicable(
            "www_split_identity",
            "tree is a single leaf",
        ));
    };
    let f = analyze(t, n)?.spectrum;
    let g = analyze(plus, n)?.spectrum;
    let h = analyze(minus, n)?.spectrum;
    let bit = 1usize << var;
    let sq = |c: i64| c as i128 * c as i128;
    let mut checked = 0usize;
    let mut violations = 0usize;
    for s in (0..1usize << n).filter(|s| s & bit == 0) {
        checked += 1;
        if sq(g.numerator(s)) + sq(h.numerator(s))
            != 2 * (sq(f.numerator(s)) + sq(f.numerator(s | bit)))
        {
            violations += 1;
        }
    }
    Ok(
        BoundCertificate::check("www_split_identity", violations as f64, 0.0)
            .with_param("root_var", (*var + 1) as f64)
            .with_param("subsets_checked", checked as f64),
    )
}

/// Shape and read statistics of a tree.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TreeStats {
    pub depth: usize,
    pub size: usize,
    pub leaves: usize,
    pub boundary_size: usize,
    pub inner_nodes: usize,
    pub max_read: u32,
    pub read_profile: Vec<u32>,
}

pub fn tree_stats(t: &DecisionTree, n: u32) -> TreeStats {
    TreeStats {
        depth: t.depth(),
        size: t.size(),
        leaves: t.leaves(),
        boundary_size: t.boundary_size(),
        inner_nodes: t.inner_nodes().len(),
        max_read: t.max_read(),
        read_profile: t.read_profile(n),
    }
}

/// Parameters of the seeded random tree generator.
///
/// Each node becomes a leaf when it reaches `max_depth`, when no variable is
/// available (all are on the current path or have used up `read_budget`
/// queries), or with probability `leaf_prob`; otherwise it queries a variable
/// chosen uniformly among the available ones. The root is never a leaf when a
/// variable is available. Leaves are uniform ±1.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RandomTreeConfig {
    pub n: u32,
    pub max_depth: usize,
    pub leaf_prob: f64,
    pub read_budget: u32,
}

pub fn random_tree<R: Rng + ?Sized>(cfg: &RandomTreeConfig, rng: &mut R) -> DecisionTree {
    fn grow<R: Rng + ?Sized>(
        cfg: &RandomTreeConfig,
        depth: usize,
        path: u64,
        counts: &mut [u32],
        rng: &mut R,
    ) -> DecisionTree {
        let available: Vec<u32> = (0..cfg.n)
            .filter(|&i| path >> i & 1 == 0 && counts[i as usize] < cfg.read_budget)
            .collect();
        let stop = depth >= cfg.max_depth
            || available.is_empty()
            || (depth > 0 && rng.gen_bool(cfg.leaf_prob.clamp(0.0, 1.0)));
        if stop {
            return DecisionTree::Leaf(if rng.gen_bool(0.5) { 1 } else { -1 });
        }
        let var = available[rng.gen_range(0..available.len())];
        counts[var as usize] += 1;
        let plus = grow(cfg, depth + 1, path | 1 << var, counts, rng);
        let minus = grow(cfg, depth + 1, path | 1 << var, counts, rng);
        DecisionTree::query(var, plus, minus)
    }
    let mut counts = vec![0u32; cfg.n as usize];
    grow(cfg, 0, 0, &mut counts, rng)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parity2() -> DecisionTree {
        parse_tree("(x1 (x2 1 -1) (x2 -1 1))").unwrap()
    }

    fn maj3() -> DecisionTree {
        parse_tree("(x1 (x2 1 (x3 1 -1)) (x2 (x3 1 -1) -1))").unwrap()
    }

    #[test]
    fn parse_examples() {
        assert_eq!(
            parse_tree("(x1 1 -1)").unwrap(),
            DecisionTree::query(0, DecisionTree::Leaf(1), DecisionTree::Leaf(-1))
        );
        assert_eq!(
            parity2().to_function(2).unwrap(),
            BooleanFunction::parity(2).unwrap()
        );
        assert_eq!(
            parse_tree("(x1 (x1 1 -1) 1)"),
            Err(Error::RepeatedPathVariable { var: 1 })
        );
    }

    #[test]
    fn parse_errors_carry_positions() {
        match parse_tree("(x1 1\n  (y2 1 -1))") {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (2, 4)),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_tree("(x1 1 -1"), Err(Error::Parse { .. })));
        assert!(matches!(parse_tree("(x0 1 -1)"), Err(Error::Parse { .. })));
        assert!(matches!(parse_tree("1 1"), Err(Error::Parse { .. })));
    }

    #[test]
    fn serialize_round_trip_and_refusal() {
        let t = maj3();
        assert_eq!(parse_tree(&serialize_tree(&t).unwrap()).unwrap(), t);
        let bad = DecisionTree::query(
            0,
            DecisionTree::query(0, DecisionTree::Leaf(1), DecisionTree::Leaf(-1)),
            DecisionTree::Leaf(1),
        );
        assert!(serialize_tree(&bad).is_err());
    }

    #[test]
    fn tree_functions() {
        assert_eq!(
            maj3().to_function(3).unwrap(),
            BooleanFunction::majority(3).unwrap()
        );
        assert_eq!(
            DecisionTree::Leaf(1).to_function(2).unwrap(),
            BooleanFunction::constant(2, 1).unwrap()
        );
        assert!(maj3().to_function(2).is_err());
    }

    #[test]
    fn analysis_spectrum_matches_wht() {
        let t = maj3();
        let a = analyze(&t, 4).unwrap();
        assert_eq!(a.spectrum, crate::wht(&t.to_function(4).unwrap()));
    }

    #[test]
    fn node_covariances() {
        assert_eq!(node_cov(&parity2(), 2).unwrap(), -Dyadic::ONE);
        assert_eq!(
            node_cov(&parse_tree("(x1 1 -1)").unwrap(), 1).unwrap(),
            Dyadic::ZERO
        );
        assert_eq!(node_cov(&maj3(), 3).unwrap(), Dyadic::new(1, 2));
    }

    #[test]
    fn tree_covariances() {
        assert_eq!(tree_cov(&DecisionTree::Leaf(1), 2).unwrap(), Dyadic::ZERO);
        assert_eq!(tree_cov(&parity2(), 2).unwrap(), -Dyadic::ONE);
        let a = analyze(&maj3(), 3).unwrap();
        // Subtrees (x2 1 (x3 1 -1)) and (x2 (x3 1 -1) -1) each have one
        // boundary-only node covariance 0.
        assert_eq!(a.tree_cov_recursive(), a.tree_cov_weighted());
        assert_eq!(a.tree_cov_weighted(), Dyadic::new(1, 2));
    }

    #[test]
    fn read_multiplicities() {
        assert_eq!(parity2().read_profile(2), [1, 2]);
        assert!(parity2().is_read_k(2) && !parity2().is_read_k(1));
        assert_eq!(maj3().read_profile(3), [1, 2, 2]);
        assert_eq!(DecisionTree::Leaf(-1).read_profile(2), [0, 0]);
        assert_eq!(maj3().read_multiplicity(2), 2);
    }

    #[test]
    fn m_and_sq() {
        let p = parity2().read_profile(2);
        assert_eq!(m_t(&p, 0b11).unwrap(), 2);
        assert!((sq_t(&p, 0b11).unwrap() - 2.0 * (1.0 + libm::sqrt(2.0))).abs() < 1e-15);
        assert_eq!((m_t(&p, 0b01).unwrap(), sq_t(&p, 0b01).unwrap()), (1, 2.0));
        let q = maj3().read_profile(3);
        assert_eq!(m_t(&q, 0b111).unwrap(), 2);
        assert!((sq_t(&q, 0b111).unwrap() - 2.0 * (1.0 + 2.0 * libm::sqrt(2.0))).abs() < 1e-15);
        assert!(m_t(&[1, 0], 0b11).is_err());
        assert!(sq_t(&[1, 0], 0b10).is_err());
    }

    #[test]
    fn covariance_bounds_for_parity() {
        let certs = cov_bounds_report(&parity2(), 2).unwrap();
        assert_eq!(certs[0].lhs, -1.0);
        assert_eq!(certs[0].rhs, 1.0);
        assert!(certs.iter().all(|c| c.holds));
    }

    #[test]
    fn boundary_and_inner() {
        assert_eq!(
            (parity2().boundary_size(), parity2().inner_nodes()),
            (2, vec![0])
        );
        assert_eq!((maj3().boundary_size(), maj3().inner_nodes()), (4, vec![0]));
        let single = parse_tree("(x1 1 -1)").unwrap();
        assert_eq!((single.boundary_size(), single.inner_nodes().len()), (1, 0));
    }

    #[test]
    fn l1_bound_examples() {
        let c = l1_tree_bound(&parity2(), 2).unwrap();
        assert_eq!((c.lhs, c.rhs), (1.0, 1.0));
        let c = l1_tree_bound(&maj3(), 3).unwrap();
        assert_eq!((c.lhs, c.rhs), (2.0, 3.75));
        let c = l1_tree_bound(&DecisionTree::full_parity(3), 3).unwrap();
        assert_eq!((c.lhs, c.rhs), (1.0, 1.0));
        assert_eq!(c.params["boundary_size"], 4.0);
        assert!(c.all_asserted_hold());
    }

    #[test]
    fn split_identity() {
        let c = www_split_identity(&parity2(), 2).unwrap();
        assert_eq!(c.lhs, 0.0);
        assert!(c.holds);
        let c = www_split_identity(&maj3(), 3).unwrap();
        assert!(c.holds);
        assert!(
            !www_split_identity(&DecisionTree::Leaf(1), 2)
                .unwrap()
                .applicable
        );
    }

    #[test]
    fn abs_sum_difference_identity() {
        use proptest::prelude::*;
        proptest!(|(a in -1e6f64..1e6, b in -1e6f64..1e6)| {
            let lhs = (a + b).abs() + (a - b).abs();
            let rhs = 2.0 * a.abs().max(b.abs());
            prop_assert!((lhs - rhs).abs() <= 1e-9 * (1.0 + rhs));
        });
    }

    #[test]
    fn random_trees_respect_budget() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let cfg = RandomTreeConfig {
            n: 6,
            max_depth: 6,
            leaf_prob: 0.2,
            read_budget: 2,
        };
        for _ in 0..50 {
            let t = random_tree(&cfg, &mut rng);
            t.validate().unwrap();
            assert!(t.is_read_k(2));
            assert!(t.depth() <= 6);
            assert!(!t.is_leaf());
        }
    }
}
