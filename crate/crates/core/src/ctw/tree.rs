use rand::Rng;
use rand_distr::{Beta, Distribution};

use crate::error::{Error, Result};

/// Freeze/split probabilities per level. `alpha(d)` is the split probability
/// of a node at depth `d < D`.
#[derive(Clone, Debug, PartialEq)]
pub enum SplitProbs {
    Constant(f64),
    PerLevel(Vec<f64>),
}

impl Default for SplitProbs {
    fn default() -> Self {
        SplitProbs::Constant(0.5)
    }
}

impl SplitProbs {
    pub fn alpha(&self, depth: usize) -> f64 {
        match self {
            SplitProbs::Constant(a) => *a,
            SplitProbs::PerLevel(v) => v.get(depth).copied().unwrap_or(0.5),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = |a: f64| a > 0.0 && a < 1.0;
        let valid = match self {
            SplitProbs::Constant(a) => ok(*a),
            SplitProbs::PerLevel(v) => v.iter().all(|&a| ok(a)),
        };
        if valid {
            Ok(())
        } else {
            Err(Error::Config("split probabilities must lie in (0, 1)".into()))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Node {
    Leaf(f64),
    Split([usize; 2]),
}

/// A complete suffix-free set of binary contexts with a Bernoulli parameter
/// per leaf. `theta` is the probability of emitting 0.
///
/// The child taken at depth `d` is `x_{t-1-d}`, so leaf contexts are written
/// most recent symbol first.
#[derive(Clone, Debug, PartialEq)]
pub struct SuffixTree {
    nodes: Vec<Node>,
    max_depth: usize,
}

impl SuffixTree {
    /// Single leaf tree.
    pub fn leaf(theta: f64) -> Self {
        SuffixTree {
            nodes: vec![Node::Leaf(theta)],
            max_depth: 0,
        }
    }

    /// Builds a tree from leaf contexts (most recent symbol first).
    pub fn from_leaves(leaves: &[(&str, f64)], max_depth: usize) -> Result<Self> {
        let mut nodes = vec![Node::Leaf(f64::NAN)];
        for &(ctx, theta) in leaves {
            if ctx.len() > max_depth {
                return Err(Error::Config(format!("leaf {ctx:?} deeper than {max_depth}")));
            }
            let mut at = 0;
            for c in ctx.chars() {
                let bit = match c {
                    '0' => 0,
                    '1' => 1,
                    _ => return Err(Error::Config(format!("bad context {ctx:?}"))),
                };
                at = match nodes[at] {
                    Node::Split(ch) => ch[bit],
                    Node::Leaf(t) if t.is_nan() => {
                        let n = nodes.len();
                        nodes.push(Node::Leaf(f64::NAN));
                        nodes.push(Node::Leaf(f64::NAN));
                        nodes[at] = Node::Split([n, n + 1]);
                        n + bit
                    }
                    Node::Leaf(_) => return Err(Error::Config(format!("{ctx:?} extends a leaf"))),
                };
            }
            match nodes[at] {
                Node::Leaf(t) if t.is_nan() => nodes[at] = Node::Leaf(theta),
                _ => return Err(Error::Config(format!("{ctx:?} is not a leaf position"))),
            }
        }
        if nodes.iter().any(|n| matches!(n, Node::Leaf(t) if t.is_nan())) {
            return Err(Error::Config("leaf set is not complete".into()));
        }
        Ok(SuffixTree { nodes, max_depth })
    }

    pub fn max_depth(&self) -> usize {
        self.max_depth
    }

    /// Depth of the deepest leaf.
    pub fn depth(&self) -> usize {
        self.leaves().iter().map(|(c, _)| c.len()).max().unwrap_or(0)
    }

    pub fn leaf_count(&self) -> usize {
        self.nodes.iter().filter(|n| matches!(n, Node::Leaf(_))).count()
    }

    /// Leaf contexts and parameters in preorder.
    pub fn leaves(&self) -> Vec<(String, f64)> {
        let mut out = Vec::new();
        let mut stack = vec![(0usize, String::new())];
        while let Some((i, ctx)) = stack.pop() {
            match self.nodes[i] {
                Node::Leaf(t) => out.push((ctx, t)),
                Node::Split([c0, c1]) => {
                    stack.push((c1, format!("{ctx}1")));
                    stack.push((c0, format!("{ctx}0")));
                }
            }
        }
        out
    }

    /// Probability of emitting 0 after `history`, padding with zeros before
    /// the start.
    pub fn theta_after(&self, history: &[u8]) -> f64 {
        let mut at = 0;
        let mut back = history.iter().rev();
        loop {
            match self.nodes[at] {
                Node::Leaf(t) => return t,
                Node::Split(ch) => at = ch[*back.next().unwrap_or(&0) as usize],
            }
        }
    }

    /// Preorder encoding: one flag per node (true = split) and the leaf
    /// parameters in the same order.
    pub fn to_preorder(&self) -> (Vec<bool>, Vec<f64>) {
        let mut shape = Vec::new();
        let mut thetas = Vec::new();
        let mut stack = vec![0usize];
        while let Some(i) = stack.pop() {
            match self.nodes[i] {
                Node::Leaf(t) => {
                    shape.push(false);
                    thetas.push(t);
                }
                Node::Split([c0, c1]) => {
                    shape.push(true);
                    stack.push(c1);
                    stack.push(c0);
                }
            }
        }
        (shape, thetas)
    }

    pub fn from_preorder(shape: &[bool], thetas: &[f64], max_depth: usize) -> Result<Self> {
        fn build(
            shape: &mut std::slice::Iter<bool>,
            thetas: &mut std::slice::Iter<f64>,
            depth: usize,
            max_depth: usize,
            nodes: &mut Vec<Node>,
        ) -> Result<usize> {
            let bad = || Error::Format("truncated tree encoding".into());
            let split = *shape.next().ok_or_else(bad)?;
            let at = nodes.len();
            if split {
                if depth >= max_depth {
                    return Err(Error::Format("tree deeper than its max depth".into()));
                }
                nodes.push(Node::Split([0, 0]));
                let c0 = build(shape, thetas, depth + 1, max_depth, nodes)?;
                let c1 = build(shape, thetas, depth + 1, max_depth, nodes)?;
                nodes[at] = Node::Split([c0, c1]);
            } else {
                nodes.push(Node::Leaf(*thetas.next().ok_or_else(bad)?));
            }
            Ok(at)
        }
        let mut nodes = Vec::new();
        let (mut s, mut t) = (shape.iter(), thetas.iter());
        build(&mut s, &mut t, 0, max_depth, &mut nodes)?;
        if s.next().is_some() || t.next().is_some() {
            return Err(Error::Format("trailing tree encoding".into()));
        }
        Ok(SuffixTree { nodes, max_depth })
    }
}

/// Samples a tree by recursive freeze/split with Beta(1/2, 1/2) leaves.
pub fn sample_tree<R: Rng + ?Sized>(max_depth: usize, split: &SplitProbs, rng: &mut R) -> SuffixTree {
    let beta = Beta::new(0.5, 0.5).expect("valid Beta parameters");
    let mut nodes = vec![Node::Leaf(f64::NAN)];
    // Depth-first, children visited 0 then 1 so the draw order is fixed.
    let mut stack = vec![(0usize, 0usize)];
    while let Some((i, d)) = stack.pop() {
        if d < max_depth && rng.random::<f64>() < split.alpha(d) {
            let n = nodes.len();
            nodes.push(Node::Leaf(f64::NAN));
            nodes.push(Node::Leaf(f64::NAN));
            nodes[i] = Node::Split([n, n + 1]);
            stack.push((n + 1, d + 1));
            stack.push((n, d + 1));
        } else {
            nodes[i] = Node::Leaf(beta.sample(rng));
        }
    }
    SuffixTree { nodes, max_depth }
}

/// A sampled binary sequence with the true probability of 0 at every step.
#[derive(Clone, Debug, PartialEq)]
pub struct VomsSample {
    pub bits: Vec<u8>,
    pub p_zero: Vec<f64>,
}

impl VomsSample {
    /// Probability the source assigned to each realized bit.
    pub fn truth(&self) -> Vec<f64> {
        self.bits
            .iter()
            .zip(&self.p_zero)
            .map(|(&b, &p)| if b == 0 { p } else { 1.0 - p })
            .collect()
    }
}

pub fn sample_sequence<R: Rng + ?Sized>(tree: &SuffixTree, n: usize, rng: &mut R) -> VomsSample {
    let mut bits = Vec::with_capacity(n);
    let mut p_zero = Vec::with_capacity(n);
    for _ in 0..n {
        let theta = tree.theta_after(&bits);
        p_zero.push(theta);
        bits.push(u8::from(rng.random::<f64>() >= theta));
    }
    VomsSample { bits, p_zero }
}

/// Exact distribution of the sampled tree depth for `α = 1/2`.
///
/// `F(d) = 1/2 + F(d-1)^2 / 2` is the probability that the depth is at most
/// `d` when splitting is unrestricted; depth `D` collects the remainder.
pub fn tree_depth_pmf(max_depth: usize) -> Vec<f64> {
    let mut pmf = Vec::with_capacity(max_depth + 1);
    let mut prev = 0.0;
    let mut f = 0.5;
    for _ in 0..max_depth {
        pmf.push(f - prev);
        prev = f;
        f = 0.5 + 0.5 * f * f;
    }
    pmf.push(1.0 - prev);
    pmf
}
