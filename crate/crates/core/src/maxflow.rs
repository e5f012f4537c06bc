//! Boykov–Kolmogorov max-flow on `f64` capacities.
//!
//! Terminal capacities are folded into one signed residual per node:
//! positive means residual from the source, negative residual to the sink.

use std::collections::VecDeque;

const NONE: u32 = u32::MAX;
const TERMINAL: u32 = u32::MAX - 1;
const ORPHAN: u32 = u32::MAX - 2;

#[derive(Debug, Clone)]
pub struct Graph {
    n: usize,
    edges: Vec<(u32, u32, f64, f64)>,
    tr_cap: Vec<f64>,
    flow: f64,
    // CSR, built on solve
    start: Vec<u32>,
    head: Vec<u32>,
    sister: Vec<u32>,
    r_cap: Vec<f64>,
    parent: Vec<u32>,
    is_sink: Vec<bool>,
    ts: Vec<u32>,
    dist: Vec<u32>,
    solved: bool,
    augmentations: usize,
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            edges: Vec::new(),
            tr_cap: vec![0.0; n],
            flow: 0.0,
            start: Vec::new(),
            head: Vec::new(),
            sister: Vec::new(),
            r_cap: Vec::new(),
            parent: Vec::new(),
            is_sink: Vec::new(),
            ts: Vec::new(),
            dist: Vec::new(),
            solved: false,
            augmentations: 0,
        }
    }

    pub fn with_capacity(n: usize, edges: usize) -> Self {
        let mut g = Self::new(n);
        g.edges.reserve(edges);
        g
    }

    pub fn n_nodes(&self) -> usize {
        self.n
    }

    /// Adds source and sink capacities to node `i`.
    pub fn add_tweights(&mut self, i: usize, mut cap_source: f64, mut cap_sink: f64) {
        debug_assert!(cap_source >= 0.0 && cap_sink >= 0.0);
        let delta = self.tr_cap[i];
        if delta > 0.0 {
            cap_source += delta;
        } else {
            cap_sink -= delta;
        }
        self.flow += cap_source.min(cap_sink);
        self.tr_cap[i] = cap_source - cap_sink;
    }

    /// Edge `i -> j` with capacity `cap` and `j -> i` with `rev_cap`.
    pub fn add_edge(&mut self, i: usize, j: usize, cap: f64, rev_cap: f64) {
        debug_assert!(i != j && cap >= 0.0 && rev_cap >= 0.0);
        assert!(!self.solved, "graph already solved");
        self.edges.push((i as u32, j as u32, cap, rev_cap));
    }

    fn build(&mut self) {
        let n = self.n;
        let mut count = vec![0u32; n + 1];
        for &(i, j, _, _) in &self.edges {
            count[i as usize + 1] += 1;
            count[j as usize + 1] += 1;
        }
        for k in 0..n {
            count[k + 1] += count[k];
        }
        let m = 2 * self.edges.len();
        let mut fill = count.clone();
        self.head = vec![0; m];
        self.sister = vec![0; m];
        self.r_cap = vec![0.0; m];
        for &(i, j, c, rc) in &self.edges {
            let a = fill[i as usize] as usize;
            fill[i as usize] += 1;
            let b = fill[j as usize] as usize;
            fill[j as usize] += 1;
            self.head[a] = j;
            self.r_cap[a] = c;
            self.sister[a] = b as u32;
            self.head[b] = i;
            self.r_cap[b] = rc;
            self.sister[b] = a as u32;
        }
        self.start = count;
        self.edges = Vec::new();
    }

    /// Runs the solver and returns the max-flow value.
    pub fn maxflow(&mut self) -> f64 {
        assert!(!self.solved, "graph already solved");
        self.build();
        self.solved = true;
        let n = self.n;
        self.parent = vec![NONE; n];
        self.is_sink = vec![false; n];
        self.ts = vec![0; n];
        self.dist = vec![0; n];
        let mut queued = vec![false; n];
        let mut active: VecDeque<u32> = VecDeque::new();
        for i in 0..n {
            if self.tr_cap[i] != 0.0 {
                self.is_sink[i] = self.tr_cap[i] < 0.0;
                self.parent[i] = TERMINAL;
                self.dist[i] = 1;
                active.push_back(i as u32);
                queued[i] = true;
            }
        }
        let mut time: u32 = 0;
        let mut orphans: VecDeque<u32> = VecDeque::new();
        let mut current: Option<usize> = None;

        loop {
            let i = match current {
                Some(i) if self.parent[i] != NONE => i,
                _ => {
                    let mut next = None;
                    while let Some(k) = active.pop_front() {
                        queued[k as usize] = false;
                        if self.parent[k as usize] != NONE {
                            next = Some(k as usize);
                            break;
                        }
                    }
                    match next {
                        Some(k) => k,
                        None => break,
                    }
                }
            };

            // grow
            let mut found: Option<usize> = None;
            let (s, e) = (self.start[i] as usize, self.start[i + 1] as usize);
            if !self.is_sink[i] {
                for a in s..e {
                    if self.r_cap[a] <= 0.0 {
                        continue;
                    }
                    let j = self.head[a] as usize;
                    if self.parent[j] == NONE {
                        self.is_sink[j] = false;
                        self.parent[j] = self.sister[a];
                        self.ts[j] = self.ts[i];
                        self.dist[j] = self.dist[i] + 1;
                        if !queued[j] {
                            queued[j] = true;
                            active.push_back(j as u32);
                        }
                    } else if self.is_sink[j] {
                        found = Some(a);
                        break;
                    } else if self.ts[j] <= self.ts[i] && self.dist[j] > self.dist[i] {
                        self.parent[j] = self.sister[a];
                        self.ts[j] = self.ts[i];
                        self.dist[j] = self.dist[i] + 1;
                    }
                }
            } else {
                for a in s..e {
                    let sa = self.sister[a] as usize;
                    if self.r_cap[sa] <= 0.0 {
                        continue;
                    }
                    let j = self.head[a] as usize;
                    if self.parent[j] == NONE {
                        self.is_sink[j] = true;
                        self.parent[j] = sa as u32;
                        self.ts[j] = self.ts[i];
                        self.dist[j] = self.dist[i] + 1;
                        if !queued[j] {
                            queued[j] = true;
                            active.push_back(j as u32);
                        }
                    } else if !self.is_sink[j] {
                        found = Some(sa);
                        break;
                    } else if self.ts[j] <= self.ts[i] && self.dist[j] > self.dist[i] {
                        self.parent[j] = sa as u32;
                        self.ts[j] = self.ts[i];
                        self.dist[j] = self.dist[i] + 1;
                    }
                }
            }

            time = time.wrapping_add(1);
            match found {
                Some(a) => {
                    current = Some(i);
                    self.augment(a, &mut orphans);
                    while let Some(o) = orphans.pop_front() {
                        let o = o as usize;
                        if self.is_sink[o] {
                            self.adopt(o, true, time, &mut orphans, &mut active, &mut queued);
                        } else {
                            self.adopt(o, false, time, &mut orphans, &mut active, &mut queued);
                        }
                    }
                }
                None => current = None,
            }
        }
        self.flow
    }

    fn augment(&mut self, middle: usize, orphans: &mut VecDeque<u32>) {
        let mut bottleneck = self.r_cap[middle];
        // source side
        let mut i = self.head[self.sister[middle] as usize] as usize;
        loop {
            let a = self.parent[i];
            if a == TERMINAL {
                break;
            }
            let a = a as usize;
            bottleneck = bottleneck.min(self.r_cap[self.sister[a] as usize]);
            i = self.head[a] as usize;
        }
        bottleneck = bottleneck.min(self.tr_cap[i]);
        // sink side
        let mut i = self.head[middle] as usize;
        loop {
            let a = self.parent[i];
            if a == TERMINAL {
                break;
            }
            let a = a as usize;
            bottleneck = bottleneck.min(self.r_cap[a]);
            i = self.head[a] as usize;
        }
        bottleneck = bottleneck.min(-self.tr_cap[i]);

        let sm = self.sister[middle] as usize;
        self.r_cap[sm] += bottleneck;
        self.r_cap[middle] -= bottleneck;

        let mut i = self.head[sm] as usize;
        loop {
            let a = self.parent[i];
            if a == TERMINAL {
                break;
            }
            let a = a as usize;
            let sa = self.sister[a] as usize;
            self.r_cap[a] += bottleneck;
            self.r_cap[sa] -= bottleneck;
            if self.r_cap[sa] <= 0.0 {
                self.parent[i] = ORPHAN;
                orphans.push_back(i as u32);
            }
            i = self.head[a] as usize;
        }
        self.tr_cap[i] -= bottleneck;
        if self.tr_cap[i] <= 0.0 {
            self.parent[i] = ORPHAN;
            orphans.push_back(i as u32);
        }

        let mut i = self.head[middle] as usize;
        loop {
            let a = self.parent[i];
            if a == TERMINAL {
                break;
            }
            let a = a as usize;
            let sa = self.sister[a] as usize;
            self.r_cap[sa] += bottleneck;
            self.r_cap[a] -= bottleneck;
            if self.r_cap[a] <= 0.0 {
                self.parent[i] = ORPHAN;
                orphans.push_back(i as u32);
            }
            i = self.head[a] as usize;
        }
        self.tr_cap[i] += bottleneck;
        if self.tr_cap[i] >= 0.0 {
            self.parent[i] = ORPHAN;
            orphans.push_back(i as u32);
        }
        self.flow += bottleneck;
        self.augmentations += 1;
    }

    fn adopt(
        &mut self,
        i: usize,
        sink: bool,
        time: u32,
        orphans: &mut VecDeque<u32>,
        active: &mut VecDeque<u32>,
        queued: &mut [bool],
    ) {
        let (s, e) = (self.start[i] as usize, self.start[i + 1] as usize);
        let mut best: Option<usize> = None;
        let mut d_min = u32::MAX;
        for a0 in s..e {
            // residual towards i from the neighbour for the source tree, from i for the sink tree
            let cap = if sink { self.r_cap[a0] } else { self.r_cap[self.sister[a0] as usize] };
            if cap <= 0.0 {
                continue;
            }
            let mut j = self.head[a0] as usize;
            if self.is_sink[j] != sink || self.parent[j] == NONE {
                continue;
            }
            let mut d: u32 = 0;
            let valid;
            loop {
                if self.ts[j] == time {
                    d += self.dist[j];
                    valid = true;
                    break;
                }
                let a = self.parent[j];
                d += 1;
                if a == TERMINAL {
                    self.ts[j] = time;
                    self.dist[j] = 1;
                    valid = true;
                    break;
                }
                if a == ORPHAN {
                    valid = false;
                    break;
                }
                j = self.head[a as usize] as usize;
            }
            if valid {
                if d < d_min {
                    best = Some(a0);
                    d_min = d;
                }
                let mut j = self.head[a0] as usize;
                while self.ts[j] != time {
                    self.ts[j] = time;
                    self.dist[j] = d;
                    d -= 1;
                    j = self.head[self.parent[j] as usize] as usize;
                }
            }
        }
        if let Some(a0) = best {
            self.parent[i] = a0 as u32;
            self.ts[i] = time;
            self.dist[i] = d_min + 1;
            return;
        }
        for a0 in s..e {
            let j = self.head[a0] as usize;
            if self.is_sink[j] != sink {
                continue;
            }
            let a = self.parent[j];
            if a == NONE {
                continue;
            }
            let cap = if sink { self.r_cap[a0] } else { self.r_cap[self.sister[a0] as usize] };
            if cap > 0.0 && !queued[j] {
                queued[j] = true;
                active.push_back(j as u32);
            }
            if a != TERMINAL && a != ORPHAN && self.head[a as usize] as usize == i {
                self.parent[j] = ORPHAN;
                orphans.push_back(j as u32);
            }
        }
        self.parent[i] = NONE;
    }

    pub fn augmentations(&self) -> usize {
        self.augmentations
    }

    /// Smallest minimum cut: nodes reachable from the source in the residual graph.
    pub fn in_source(&self, i: usize) -> bool {
        assert!(self.solved);
        self.parent[i] != NONE && !self.is_sink[i]
    }

    /// Largest minimum cut: nodes that cannot reach the sink.
    pub fn in_source_max(&self, i: usize) -> bool {
        assert!(self.solved);
        !(self.parent[i] != NONE && self.is_sink[i])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    struct Problem {
        n: usize,
        src: Vec<f64>,
        snk: Vec<f64>,
        edges: Vec<(usize, usize, f64, f64)>,
    }

    fn cut_value(p: &Problem, in_s: &dyn Fn(usize) -> bool) -> f64 {
        let mut v = 0.0;
        for i in 0..p.n {
            if in_s(i) {
                v += p.snk[i];
            } else {
                v += p.src[i];
            }
        }
        for &(i, j, c, rc) in &p.edges {
            if in_s(i) && !in_s(j) {
                v += c;
            }
            if in_s(j) && !in_s(i) {
                v += rc;
            }
        }
        v
    }

    fn random_problem(rng: &mut ChaCha8Rng, n: usize) -> Problem {
        let src = (0..n).map(|_| if rng.gen_bool(0.5) { rng.gen_range(0.0..3.0) } else { 0.0 }).collect();
        let snk = (0..n).map(|_| if rng.gen_bool(0.5) { rng.gen_range(0.0..3.0) } else { 0.0 }).collect();
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if rng.gen_bool(0.4) {
                    edges.push((i, j, rng.gen_range(0.0..2.0), rng.gen_range(0.0..2.0)));
                }
            }
        }
        Problem { n, src, snk, edges }
    }

    fn solve(p: &Problem) -> Graph {
        let mut g = Graph::new(p.n);
        for i in 0..p.n {
            g.add_tweights(i, p.src[i], p.snk[i]);
        }
        for &(i, j, c, rc) in &p.edges {
            g.add_edge(i, j, c, rc);
        }
        g.maxflow();
        g
    }

    #[test]
    fn matches_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for trial in 0..300 {
            let n = 1 + trial % 12;
            let p = random_problem(&mut rng, n);
            let g = solve(&p);
            let mut best = f64::INFINITY;
            for mask in 0u32..(1 << n) {
                best = best.min(cut_value(&p, &|i| mask >> i & 1 == 1));
            }
            let got = g.flow;
            assert!((got - best).abs() < 1e-9, "trial {trial}: {got} vs {best}");
            assert!((cut_value(&p, &|i| g.in_source(i)) - best).abs() < 1e-9);
            assert!((cut_value(&p, &|i| g.in_source_max(i)) - best).abs() < 1e-9);
        }
    }

    #[test]
    fn grid_graph_brute_force() {
        // 4-connected grids up to 4x4 plus diagonals
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for trial in 0..60 {
            let w = 2 + trial % 3;
            let h = 2 + (trial / 3) % 3;
            let n = w * h;
            let mut edges = Vec::new();
            for y in 0..h {
                for x in 0..w {
                    let c = y * w + x;
                    if x + 1 < w {
                        let c2 = rng.gen_range(0.0..1.0);
                        edges.push((c, c + 1, c2, c2));
                    }
                    if y + 1 < h {
                        let c2 = rng.gen_range(0.0..1.0);
                        edges.push((c, c + w, c2, c2));
                    }
                    if x + 1 < w && y + 1 < h {
                        let c2 = rng.gen_range(0.0..0.5);
                        edges.push((c, c + w + 1, c2, c2));
                    }
                }
            }
            let src = (0..n).map(|_| rng.gen_range(0.0..1.5)).collect();
            let snk = (0..n).map(|_| rng.gen_range(0.0..1.5)).collect();
            let p = Problem { n, src, snk, edges };
            let g = solve(&p);
            let mut best = f64::INFINITY;
            for mask in 0u32..(1 << n) {
                best = best.min(cut_value(&p, &|i| mask >> i & 1 == 1));
            }
            assert!((g.flow - best).abs() < 1e-9, "trial {trial}: {} vs {best}", g.flow);
        }
    }

    #[test]
    fn chain() {
        let mut g = Graph::new(3);
        g.add_tweights(0, 5.0, 0.0);
        g.add_tweights(2, 0.0, 5.0);
        g.add_edge(0, 1, 2.0, 0.0);
        g.add_edge(1, 2, 3.0, 0.0);
        assert_eq!(g.maxflow(), 2.0);
        assert!(g.in_source(0));
        assert!(!g.in_source(1));
        assert!(!g.in_source_max(1));
        assert!(!g.in_source_max(2));
    }
}
