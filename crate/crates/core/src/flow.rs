//! Tree recognition as a bipartite flow problem: every eliminated candidate
//! must send one unit to a candidate in its B-set.

use std::collections::VecDeque;

use thiserror::Error;

use crate::lp::PairIndex;
use crate::profile::{Graph, Profile};
use crate::recognition::{recognize_tree, EliminationCertificate, RecognitionResult, Structure};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FlowError {
    #[error("elimination stopped with {0} candidates left; no network exists")]
    IncompleteCertificate(usize),
    #[error("certificate mentions candidate {0}, outside 1..={1}")]
    UnknownCandidate(usize, usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Node {
    Source,
    Sink,
    Left(usize),
    Right(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Arc {
    pub from: Node,
    pub to: Node,
    pub cap: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowNetwork {
    m: usize,
    /// Candidates in elimination order, root last.
    order: Vec<usize>,
    arcs: Vec<Arc>,
}

impl FlowNetwork {
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    /// Arcs `l_k -> r_j` as `(k, j)` pairs, in arc order.
    pub fn middle_arcs(&self) -> Vec<(usize, usize)> {
        self.arcs
            .iter()
            .filter_map(|a| match (a.from, a.to) {
                (Node::Left(k), Node::Right(j)) => Some((k, j)),
                _ => None,
            })
            .collect()
    }

    fn node_id(&self, n: Node) -> usize {
        match n {
            Node::Source => 0,
            Node::Sink => 1,
            Node::Left(c) => 1 + c,
            Node::Right(c) => 1 + self.m + c,
        }
    }
}

/// Network of the certificate: `s -> l_k` (capacity 1) for every eliminated
/// `k`, `l_k -> r_j` (capacity 1) for `j` in B(k), and `r_j -> t` with capacity
/// `m`, standing in for infinity.
pub fn build_network(p: &Profile, cert: &EliminationCertificate) -> Result<FlowNetwork, FlowError> {
    let m = p.m();
    if !cert.is_complete() {
        return Err(FlowError::IncompleteCertificate(cert.core.len()));
    }
    let order = cert.order();
    if let Some(&bad) = order
        .iter()
        .chain(cert.steps.iter().flat_map(|s| s.attachments.iter()))
        .find(|&&c| c == 0 || c > m)
    {
        return Err(FlowError::UnknownCandidate(bad, m));
    }
    let cap_inf = m as i64;
    let mut arcs = Vec::new();
    for s in &cert.steps {
        arcs.push(Arc { from: Node::Source, to: Node::Left(s.removed), cap: 1 });
    }
    for s in &cert.steps {
        for &j in &s.attachments {
            arcs.push(Arc { from: Node::Left(s.removed), to: Node::Right(j), cap: 1 });
        }
    }
    for &c in &order {
        arcs.push(Arc { from: Node::Right(c), to: Node::Sink, cap: cap_inf });
    }
    Ok(FlowNetwork { m, order, arcs })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Flow {
    pub value: i64,
    /// Flow on each arc of the network, in arc order.
    pub on_arc: Vec<i64>,
}

/// Breadth-first augmenting paths. Integral because every capacity is.
pub fn max_flow(net: &FlowNetwork) -> Flow {
    let nodes = 2 + 2 * net.m;
    // residual edges: (to, cap, reverse index), forward edge of arc i at adj position recorded
    let mut adj: Vec<Vec<(usize, i64, usize)>> = vec![Vec::new(); nodes];
    let mut handle = Vec::with_capacity(net.arcs.len());
    for a in &net.arcs {
        let (u, v) = (net.node_id(a.from), net.node_id(a.to));
        let (iu, iv) = (adj[u].len(), adj[v].len());
        adj[u].push((v, a.cap, iv));
        adj[v].push((u, 0, iu));
        handle.push((u, iu));
    }
    let (s, t) = (0, 1);
    let mut value = 0;
    loop {
        let mut prev: Vec<Option<(usize, usize)>> = vec![None; nodes];
        let mut seen = vec![false; nodes];
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            if u == t {
                break;
            }
            for (i, &(v, cap, _)) in adj[u].iter().enumerate() {
                if cap > 0 && !seen[v] {
                    seen[v] = true;
                    prev[v] = Some((u, i));
                    queue.push_back(v);
                }
            }
        }
        if !seen[t] {
            break;
        }
        let mut push = i64::MAX;
        let mut v = t;
        while let Some((u, i)) = prev[v] {
            push = push.min(adj[u][i].1);
            v = u;
        }
        let mut v = t;
        while let Some((u, i)) = prev[v] {
            adj[u][i].1 -= push;
            let (w, _, r) = adj[u][i];
            adj[w][r].1 += push;
            v = u;
        }
        value += push;
    }
    let on_arc = net
        .arcs
        .iter()
        .zip(&handle)
        .map(|(a, &(u, i))| a.cap - adj[u][i].1)
        .collect();
    Flow { value, on_arc }
}

/// Edges `{k, j}` of the middle arcs that carry flow.
pub fn flow_witness(net: &FlowNetwork, flow: &Flow) -> Graph {
    let mut g = Graph::empty(net.m);
    for (a, &f) in net.arcs.iter().zip(&flow.on_arc) {
        if let (Node::Left(k), Node::Right(j), true) = (a.from, a.to, f > 0) {
            g.add_edge(k, j).expect("middle arcs join distinct candidates");
        }
    }
    g
}

/// Pair-variable vector `x_{k,j} = flow(l_k -> r_j)`.
pub fn flow_to_lp(net: &FlowNetwork, flow: &Flow) -> Vec<f64> {
    let pairs = PairIndex::new(net.m);
    let mut x = vec![0.0; pairs.len()];
    for (a, &f) in net.arcs.iter().zip(&flow.on_arc) {
        if let (Node::Left(k), Node::Right(j)) = (a.from, a.to) {
            x[pairs.index(k, j)] += f as f64;
        }
    }
    x
}

/// Reads a 0/1 pair vector as a flow: each selected pair `{k, j}` is routed
/// along whichever of `l_k -> r_j` or `l_j -> r_k` exists. `None` if some
/// selected pair has no arc or the result breaks a capacity.
pub fn lp_to_flow(net: &FlowNetwork, x: &[f64]) -> Option<Flow> {
    let pairs = PairIndex::new(net.m);
    let mut on_arc = vec![0i64; net.arcs.len()];
    let mut used = vec![false; pairs.len()];
    for (i, a) in net.arcs.iter().enumerate() {
        if let (Node::Left(k), Node::Right(j)) = (a.from, a.to) {
            let idx = pairs.index(k, j);
            if (x[idx] - 1.0).abs() < 1e-9 {
                on_arc[i] = 1;
                used[idx] = true;
            }
        }
    }
    if x.iter().enumerate().any(|(idx, &v)| v.abs() > 1e-9 && !used[idx]) {
        return None;
    }
    let mut out_left = vec![0i64; net.m + 1];
    let mut into_right = vec![0i64; net.m + 1];
    for (a, &f) in net.arcs.iter().zip(&on_arc) {
        if let (Node::Left(k), Node::Right(j)) = (a.from, a.to) {
            out_left[k] += f;
            into_right[j] += f;
        }
    }
    if out_left.iter().any(|&f| f > 1) {
        return None;
    }
    for (i, a) in net.arcs.iter().enumerate() {
        match (a.from, a.to) {
            (Node::Source, Node::Left(k)) => on_arc[i] = out_left[k],
            (Node::Right(j), Node::Sink) => on_arc[i] = into_right[j],
            _ => {}
        }
    }
    let value = out_left.iter().sum();
    Some(Flow { value, on_arc })
}

/// Compatible exactly when leaf elimination completes and the network carries
/// `m - 1` units; the witness is read off the saturated middle arcs.
pub fn flow_tree_recognize(p: &Profile) -> RecognitionResult {
    let elim = recognize_tree(p);
    let cert = match elim.certificate {
        Some(c) if c.is_complete() => c,
        other => return RecognitionResult::incompatible(Structure::Tree, other),
    };
    let net = build_network(p, &cert).expect("complete certificate");
    let flow = max_flow(&net);
    if flow.value as usize + 1 == p.m() {
        RecognitionResult::compatible(Structure::Tree, flow_witness(&net, &flow), Some(cert))
    } else {
        RecognitionResult::incompatible(Structure::Tree, Some(cert))
    }
}
