//! Integer maximum flow by Dinic's blocking-flow algorithm.

use std::collections::VecDeque;

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FlowArc {
    pub from: usize,
    pub to: usize,
    pub cap: i64,
}

/// Capacitated network with a designated source and sink.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FlowNetwork {
    pub nodes: usize,
    pub arcs: Vec<FlowArc>,
    pub source: usize,
    pub sink: usize,
}

impl FlowNetwork {
    pub fn new(nodes: usize, source: usize, sink: usize) -> Self {
        assert!(source < nodes && sink < nodes, "terminal out of range");
        FlowNetwork {
            nodes,
            arcs: Vec::new(),
            source,
            sink,
        }
    }

    /// Adds an arc and returns its index.
    pub fn add_arc(&mut self, from: usize, to: usize, cap: i64) -> usize {
        assert!(from < self.nodes && to < self.nodes, "arc endpoint out of range");
        assert!(cap >= 0, "negative capacity");
        self.arcs.push(FlowArc { from, to, cap });
        self.arcs.len() - 1
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MaxFlow {
    pub value: i64,
    /// Flow on each network arc, indexed like `FlowNetwork::arcs`.
    pub flow: Vec<i64>,
    /// Nodes reachable from the source in the final residual network.
    pub source_side: Vec<bool>,
}

impl MaxFlow {
    pub fn cut_capacity(&self, net: &FlowNetwork) -> i64 {
        net.arcs
            .iter()
            .filter(|a| self.source_side[a.from] && !self.source_side[a.to])
            .map(|a| a.cap)
            .sum()
    }
}

struct Edge {
    to: usize,
    rev: usize,
    cap: i64,
}

struct Dinic {
    graph: Vec<Vec<Edge>>,
    level: Vec<i32>,
    iter: Vec<usize>,
}

impl Dinic {
    fn bfs(&mut self, s: usize) {
        self.level.iter_mut().for_each(|l| *l = -1);
        let mut queue = VecDeque::new();
        self.level[s] = 0;
        queue.push_back(s);
        while let Some(v) = queue.pop_front() {
            for e in &self.graph[v] {
                if e.cap > 0 && self.level[e.to] < 0 {
                    self.level[e.to] = self.level[v] + 1;
                    queue.push_back(e.to);
                }
            }
        }
    }

    fn dfs(&mut self, v: usize, t: usize, pushed: i64) -> i64 {
        if v == t {
            return pushed;
        }
        while self.iter[v] < self.graph[v].len() {
            let i = self.iter[v];
            let (to, cap) = (self.graph[v][i].to, self.graph[v][i].cap);
            if cap > 0 && self.level[v] < self.level[to] {
                let d = self.dfs(to, t, pushed.min(cap));
                if d > 0 {
                    self.graph[v][i].cap -= d;
                    let rev = self.graph[v][i].rev;
                    self.graph[to][rev].cap += d;
                    return d;
                }
            }
            self.iter[v] += 1;
        }
        0
    }
}

/// Computes a maximum flow. The returned cut is the set of nodes reachable from
/// the source in the residual network, so it is deterministic even when
/// several minimum cuts exist.
pub fn max_flow(net: &FlowNetwork) -> MaxFlow {
    let mut dinic = Dinic {
        graph: (0..net.nodes).map(|_| Vec::new()).collect(),
        level: vec![-1; net.nodes],
        iter: vec![0; net.nodes],
    };
    let mut handles = Vec::with_capacity(net.arcs.len());
    for a in &net.arcs {
        let fwd = dinic.graph[a.from].len();
        let bwd = dinic.graph[a.to].len() + usize::from(a.from == a.to);
        dinic.graph[a.from].push(Edge {
            to: a.to,
            rev: bwd,
            cap: a.cap,
        });
        dinic.graph[a.to].push(Edge {
            to: a.from,
            rev: fwd,
            cap: 0,
        });
        handles.push((a.from, fwd));
    }

    let (s, t) = (net.source, net.sink);
    let mut value = 0i64;
    if s != t {
        loop {
            dinic.bfs(s);
            if dinic.level[t] < 0 {
                break;
            }
            dinic.iter.iter_mut().for_each(|i| *i = 0);
            loop {
                let f = dinic.dfs(s, t, i64::MAX);
                if f == 0 {
                    break;
                }
                value += f;
            }
        }
    }
    dinic.bfs(s);
    let source_side = dinic.level.iter().map(|&l| l >= 0).collect();
    let flow = net
        .arcs
        .iter()
        .zip(&handles)
        .map(|(a, &(v, i))| a.cap - dinic.graph[v][i].cap)
        .collect();
    MaxFlow {
        value,
        flow,
        source_side,
    }
}
