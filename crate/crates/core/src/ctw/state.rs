use std::collections::VecDeque;

use crate::scalar::{log_mix, Scalar};

use super::kt::kt_ratio;

const NONE: u32 = u32::MAX;

#[derive(Clone, Copy, Debug)]
struct Node<T> {
    a: u64,
    b: u64,
    log_kt: T,
    log_ctw: T,
    children: [u32; 2],
}

impl<T: Scalar> Node<T> {
    fn empty() -> Self {
        Node {
            a: 0,
            b: 0,
            log_kt: T::zero(),
            log_ctw: T::zero(),
            children: [NONE; 2],
        }
    }
}

/// Binary context tree weighting of depth `D`.
///
/// Nodes are created on first visit. Contexts before the start of the
/// sequence read as zeros.
#[derive(Clone, Debug)]
pub struct CtwState<T> {
    depth: usize,
    nodes: Vec<Node<T>>,
    context: VecDeque<u8>,
    path: Vec<u32>,
}

impl<T: Scalar> CtwState<T> {
    pub fn new(depth: usize) -> Self {
        let mut s = CtwState {
            depth,
            nodes: Vec::new(),
            context: VecDeque::new(),
            path: Vec::with_capacity(depth + 1),
        };
        s.reset();
        s
    }

    pub fn reset(&mut self) {
        self.nodes.clear();
        self.nodes.push(Node::empty());
        self.context = std::iter::repeat(0).take(self.depth).collect();
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    /// Number of materialized nodes.
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// Log-probability of everything observed so far.
    pub fn log_prob(&self) -> T {
        self.nodes[0].log_ctw
    }

    /// Root-to-leaf node indices for the current context, `NONE` where absent.
    fn lookup(&self) -> Vec<u32> {
        let mut path = Vec::with_capacity(self.depth + 1);
        let mut at = 0u32;
        path.push(at);
        for &bit in &self.context {
            if at != NONE {
                at = self.nodes[at as usize].children[bit as usize];
            }
            path.push(at);
        }
        path
    }

    /// Root log-probability after appending `bit`, without changing state.
    fn log_prob_with(&self, bit: u8) -> T {
        let path = self.lookup();
        let mut below = T::zero();
        for d in (0..=self.depth).rev() {
            let i = path[d];
            let node = if i == NONE {
                Node::empty()
            } else {
                self.nodes[i as usize]
            };
            let log_kt = node.log_kt + kt_ratio::<T>(node.a, node.b, bit).ln();
            below = if d == self.depth {
                log_kt
            } else {
                let sibling = self.context[d] ^ 1;
                let other = match node.children[sibling as usize] {
                    NONE => T::zero(),
                    c => self.nodes[c as usize].log_ctw,
                };
                log_mix(T::half(), log_kt, below + other)
            };
        }
        below
    }

    /// Predictive distribution `[P(0), P(1)]` for the next bit.
    pub fn predict(&self) -> [T; 2] {
        let root = self.log_prob();
        let p0 = (self.log_prob_with(0) - root).exp();
        let p1 = (self.log_prob_with(1) - root).exp();
        let z = p0 + p1;
        [p0 / z, p1 / z]
    }

    /// Incorporates `bit` and returns the probability it was assigned.
    pub fn update(&mut self, bit: u8) -> T {
        let before = self.log_prob();
        self.path.clear();
        let mut at = 0usize;
        self.path.push(0);
        for d in 0..self.depth {
            let c = self.context[d] as usize;
            let next = self.nodes[at].children[c];
            let next = if next == NONE {
                self.nodes.push(Node::empty());
                let n = (self.nodes.len() - 1) as u32;
                self.nodes[at].children[c] = n;
                n
            } else {
                next
            };
            at = next as usize;
            self.path.push(next);
        }
        for d in (0..=self.depth).rev() {
            let i = self.path[d] as usize;
            let node = self.nodes[i];
            let log_kt = node.log_kt + kt_ratio::<T>(node.a, node.b, bit).ln();
            let log_ctw = if d == self.depth {
                log_kt
            } else {
                let [c0, c1] = node.children;
                let w = |c: u32| {
                    if c == NONE {
                        T::zero()
                    } else {
                        self.nodes[c as usize].log_ctw
                    }
                };
                log_mix(T::half(), log_kt, w(c0) + w(c1))
            };
            let n = &mut self.nodes[i];
            n.log_kt = log_kt;
            n.log_ctw = log_ctw;
            if bit == 0 {
                n.a += 1;
            } else {
                n.b += 1;
            }
        }
        if self.depth > 0 {
            self.context.pop_back();
            self.context.push_front(bit);
        }
        (self.log_prob() - before).exp()
    }

    /// Log-probability of a whole sequence from a fresh state.
    pub fn sequence_log_prob(depth: usize, bits: &[u8]) -> T {
        let mut s = CtwState::<T>::new(depth);
        for &b in bits {
            s.update(b);
        }
        s.log_prob()
    }
}
