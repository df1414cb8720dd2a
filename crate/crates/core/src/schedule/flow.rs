//! Max-flow assignment of payload slots to subfile indices.
//!
//! For one user `k`, each (target set, repetition) slot has `β` streams to fill,
//! may take at most `⌈β / C(Ω−1, t)⌉` from any single subfile `P ⊆ T \ {k}`, and
//! every subfile needs exactly `φ` subpackets in total. That is a bipartite
//! transportation problem, solved here with Dinic's algorithm.

use std::collections::{HashMap, VecDeque};

use crate::combinatorics::enumerate_subsets;
use crate::error::{Error, Result};

struct MaxFlow {
    adj: Vec<Vec<usize>>,
    to: Vec<usize>,
    cap: Vec<u64>,
    level: Vec<i32>,
    next: Vec<usize>,
}

impl MaxFlow {
    fn new(nodes: usize) -> Self {
        Self {
            adj: vec![Vec::new(); nodes],
            to: Vec::new(),
            cap: Vec::new(),
            level: vec![0; nodes],
            next: vec![0; nodes],
        }
    }

    fn add_node(&mut self) -> usize {
        self.adj.push(Vec::new());
        self.level.push(0);
        self.next.push(0);
        self.adj.len() - 1
    }

    /// Returns the forward edge id; its residual twin is `id ^ 1`.
    fn add_edge(&mut self, u: usize, v: usize, cap: u64) -> usize {
        let id = self.to.len();
        self.adj[u].push(id);
        self.to.push(v);
        self.cap.push(cap);
        self.adj[v].push(id + 1);
        self.to.push(u);
        self.cap.push(0);
        id
    }

    fn flow_on(&self, edge: usize) -> u64 {
        self.cap[edge ^ 1]
    }

    fn bfs(&mut self, s: usize, t: usize) -> bool {
        self.level.iter_mut().for_each(|l| *l = -1);
        self.level[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &e in &self.adj[u] {
                let v = self.to[e];
                if self.cap[e] > 0 && self.level[v] < 0 {
                    self.level[v] = self.level[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        self.level[t] >= 0
    }

    fn dfs(&mut self, u: usize, t: usize, pushed: u64) -> u64 {
        if u == t {
            return pushed;
        }
        while self.next[u] < self.adj[u].len() {
            let e = self.adj[u][self.next[u]];
            let v = self.to[e];
            if self.cap[e] > 0 && self.level[v] == self.level[u] + 1 {
                let got = self.dfs(v, t, pushed.min(self.cap[e]));
                if got > 0 {
                    self.cap[e] -= got;
                    self.cap[e ^ 1] += got;
                    return got;
                }
            }
            self.next[u] += 1;
        }
        0
    }

    fn run(&mut self, s: usize, t: usize) -> u64 {
        let mut total = 0;
        while self.bfs(s, t) {
            self.next.iter_mut().for_each(|n| *n = 0);
            loop {
                let f = self.dfs(s, t, u64::MAX);
                if f == 0 {
                    break;
                }
                total += f;
            }
        }
        total
    }
}

/// Subfile choices for every (target set, user position), listed repetition by
/// repetition: entry `r·β + j` is the `j`-th stream of repetition `r`.
type SlotEdge = (Vec<usize>, usize);

pub(super) type SubfileChoices = Vec<Vec<Vec<Vec<usize>>>>;

pub(super) struct SlotShape<'a> {
    pub users: &'a [usize],
    pub targets: &'a [Vec<usize>],
    pub cache_gain: usize,
    pub beta: usize,
    pub repetitions: usize,
    pub subpackets_per_subfile: u64,
    pub repetition_bound: usize,
}

pub(super) fn assign_by_flow(shape: &SlotShape<'_>) -> Result<SubfileChoices> {
    let mut choices: SubfileChoices = shape
        .targets
        .iter()
        .map(|t| vec![Vec::with_capacity(shape.repetitions * shape.beta); t.len()])
        .collect();

    for &user in shape.users {
        let mut net = MaxFlow::new(2);
        let (source, sink) = (0, 1);
        let mut demand: HashMap<Vec<usize>, usize> = HashMap::new();
        // (target index, user position, edges in repetition order: (P, edge id))
        let mut slots: Vec<(usize, usize, Vec<Vec<SlotEdge>>)> = Vec::new();

        for (ti, targets) in shape.targets.iter().enumerate() {
            let Some(pos) = targets.iter().position(|&u| u == user) else {
                continue;
            };
            let others: Vec<usize> = targets.iter().copied().filter(|&u| u != user).collect();
            let subfiles = enumerate_subsets(&others, shape.cache_gain)?;
            let mut reps = Vec::with_capacity(shape.repetitions);
            for _ in 0..shape.repetitions {
                let slot = net.add_node();
                net.add_edge(source, slot, shape.beta as u64);
                let mut edges = Vec::with_capacity(subfiles.len());
                for p in &subfiles {
                    let node = *demand.entry(p.clone()).or_insert_with(|| {
                        let n = net.add_node();
                        net.add_edge(n, sink, shape.subpackets_per_subfile);
                        n
                    });
                    let e = net.add_edge(slot, node, shape.repetition_bound as u64);
                    edges.push((p.clone(), e));
                }
                reps.push(edges);
            }
            slots.push((ti, pos, reps));
        }

        let required = slots.len() as u64 * shape.repetitions as u64 * shape.beta as u64;
        let supplied = demand.len() as u64 * shape.subpackets_per_subfile;
        let flow = net.run(source, sink);
        if flow != required || flow != supplied {
            return Err(Error::Scheduling(format!(
                "user {user}: max-flow assignment moved {flow} subpackets, needed {required} \
                 slots filled and {supplied} subpackets delivered"
            )));
        }

        for (ti, pos, reps) in slots {
            let list = &mut choices[ti][pos];
            for edges in reps {
                for (p, e) in edges {
                    for _ in 0..net.flow_on(e) {
                        list.push(p.clone());
                    }
                }
            }
        }
    }
    Ok(choices)
}
