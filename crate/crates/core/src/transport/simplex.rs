//! Primal network simplex for balanced bipartite transportation problems.
//!
//! Sources `0..n`, sinks `n..n+m` and an artificial root `n+m`. Every non-tree arc
//! sits at flow zero (arcs are uncapacitated), so an arc enters when its reduced cost
//! is negative. Leaving-arc ties follow the strongly feasible tree rule.

const NONE: usize = usize::MAX;

pub(crate) struct Transport<'a> {
    pub supply: &'a [i64],
    pub demand: &'a [i64],
    /// Row-major `supply.len() x demand.len()`.
    pub cost: &'a [i64],
}

struct Solver {
    n: usize,
    m: usize,
    arcs: usize,
    cost: Vec<i64>,
    flow: Vec<i64>,
    in_tree: Vec<bool>,
    parent: Vec<usize>,
    pred: Vec<usize>,
    pred_up: Vec<bool>,
    depth: Vec<u32>,
    pi: Vec<i64>,
    children: Vec<Vec<usize>>,
    next_arc: usize,
    block: usize,
}

impl Solver {
    #[inline]
    fn ends(&self, a: usize) -> (usize, usize) {
        let nm = self.n * self.m;
        if a < nm {
            (a / self.m, self.n + a % self.m)
        } else {
            let v = a - nm;
            let root = self.n + self.m;
            if v < self.n {
                (v, root)
            } else {
                (root, v)
            }
        }
    }

    #[inline]
    fn reduced(&self, a: usize) -> i64 {
        let (s, t) = self.ends(a);
        self.cost[a] + self.pi[s] - self.pi[t]
    }

    fn find_entering(&mut self) -> Option<usize> {
        // tree arcs have reduced cost zero and are never picked
        let nm = self.n * self.m;
        let mut best = 0i64;
        let mut best_arc = NONE;
        let mut checked = 0;
        let mut a = self.next_arc;
        let (mut i, mut j) = if a < nm { (a / self.m, a % self.m) } else { (0, 0) };
        for _ in 0..self.arcs {
            let r = if a < nm {
                self.cost[a] + self.pi[i] - self.pi[self.n + j]
            } else {
                self.reduced(a)
            };
            if r < best {
                best = r;
                best_arc = a;
            }
            a += 1;
            if a < nm {
                j += 1;
                if j == self.m {
                    j = 0;
                    i += 1;
                }
            } else if a == self.arcs {
                a = 0;
                i = 0;
                j = 0;
            }
            checked += 1;
            if checked >= self.block {
                if best_arc != NONE {
                    self.next_arc = a;
                    return Some(best_arc);
                }
                checked = 0;
            }
        }
        self.next_arc = a;
        (best_arc != NONE).then_some(best_arc)
    }

    fn join(&self, mut u: usize, mut v: usize) -> usize {
        while u != v {
            if self.depth[u] >= self.depth[v] {
                u = self.parent[u];
            } else {
                v = self.parent[v];
            }
        }
        u
    }

    fn pivot(&mut self, entering: usize) {
        let (first, second) = self.ends(entering);
        let join = self.join(first, second);

        let mut delta = i64::MAX;
        let mut leaving_node = NONE;
        let mut leaving_on_first = false;
        let mut u = first;
        while u != join {
            if self.pred_up[u] {
                let f = self.flow[self.pred[u]];
                if f < delta {
                    delta = f;
                    leaving_node = u;
                    leaving_on_first = true;
                }
            }
            u = self.parent[u];
        }
        let mut u = second;
        while u != join {
            if !self.pred_up[u] {
                let f = self.flow[self.pred[u]];
                if f <= delta {
                    delta = f;
                    leaving_node = u;
                    leaving_on_first = false;
                }
            }
            u = self.parent[u];
        }
        debug_assert!(leaving_node != NONE, "unbounded transport problem");

        if delta > 0 {
            self.flow[entering] += delta;
            let mut u = first;
            while u != join {
                let a = self.pred[u];
                if self.pred_up[u] {
                    self.flow[a] -= delta;
                } else {
                    self.flow[a] += delta;
                }
                u = self.parent[u];
            }
            let mut u = second;
            while u != join {
                let a = self.pred[u];
                if self.pred_up[u] {
                    self.flow[a] += delta;
                } else {
                    self.flow[a] -= delta;
                }
                u = self.parent[u];
            }
        }

        let leaving_arc = self.pred[leaving_node];
        self.in_tree[leaving_arc] = false;
        self.in_tree[entering] = true;

        let (inside, outside) = if leaving_on_first {
            (first, second)
        } else {
            (second, first)
        };

        // reverse the path inside -> leaving_node and hang it from `outside`
        let mut cur = inside;
        let mut new_parent = outside;
        let mut new_pred = entering;
        let mut new_up = self.ends(entering).0 == inside;
        loop {
            let old_parent = self.parent[cur];
            let old_pred = self.pred[cur];
            let old_up = self.pred_up[cur];
            let kids = &mut self.children[old_parent];
            let pos = kids.iter().position(|&k| k == cur).expect("tree child");
            kids.swap_remove(pos);
            self.parent[cur] = new_parent;
            self.pred[cur] = new_pred;
            self.pred_up[cur] = new_up;
            self.children[new_parent].push(cur);
            if cur == leaving_node {
                break;
            }
            new_up = !old_up;
            new_pred = old_pred;
            new_parent = cur;
            cur = old_parent;
        }

        let c = self.cost[entering];
        let target_pi = if self.ends(entering).0 == inside {
            self.pi[outside] - c
        } else {
            self.pi[outside] + c
        };
        let shift = target_pi - self.pi[inside];
        let mut stack = vec![inside];
        while let Some(v) = stack.pop() {
            self.pi[v] += shift;
            self.depth[v] = self.depth[self.parent[v]] + 1;
            stack.extend_from_slice(&self.children[v]);
        }
    }
}

/// Returns the optimal flow, row-major `n x m`. Supplies and demands must be positive
/// and balanced.
pub(crate) fn solve(problem: &Transport<'_>) -> Vec<i64> {
    let n = problem.supply.len();
    let m = problem.demand.len();
    debug_assert_eq!(
        problem.supply.iter().sum::<i64>(),
        problem.demand.iter().sum::<i64>()
    );
    if n == 1 || m == 1 {
        let mut flow = vec![0; n * m];
        if n == 1 {
            flow.copy_from_slice(problem.demand);
        } else {
            flow.copy_from_slice(problem.supply);
        }
        return flow;
    }
    let nm = n * m;
    let arcs = nm + n + m;
    let nodes = n + m + 1;
    let root = n + m;
    let max_cost = problem.cost.iter().copied().max().unwrap_or(0).max(0);
    let artificial = (max_cost + 1).saturating_mul(nodes as i64);

    let mut cost = Vec::with_capacity(arcs);
    cost.extend_from_slice(problem.cost);
    cost.resize(arcs, artificial);
    let mut flow = vec![0i64; arcs];
    let mut in_tree = vec![false; arcs];
    let mut parent = vec![root; nodes];
    let mut pred = vec![NONE; nodes];
    let mut pred_up = vec![false; nodes];
    let mut depth = vec![1u32; nodes];
    let mut pi = vec![0i64; nodes];
    parent[root] = NONE;
    depth[root] = 0;
    for v in 0..n + m {
        let a = nm + v;
        in_tree[a] = true;
        pred[v] = a;
        if v < n {
            flow[a] = problem.supply[v];
            pred_up[v] = true;
            pi[v] = -artificial;
        } else {
            flow[a] = problem.demand[v - n];
            pi[v] = artificial;
        }
    }
    let mut children = vec![Vec::new(); nodes];
    children[root] = (0..n + m).collect();

    let block = ((arcs as f64).sqrt() as usize).max(10);
    let mut solver = Solver {
        n,
        m,
        arcs,
        cost,
        flow,
        in_tree,
        parent,
        pred,
        pred_up,
        depth,
        pi,
        children,
        next_arc: 0,
        block,
    };
    while let Some(a) = solver.find_entering() {
        solver.pivot(a);
    }
    solver.flow.truncate(nm);
    solver.flow
}
