//! Small dense-index digraphs and their strongly connected components.

/// Directed graph on nodes `0..n`, adjacency lists sorted and deduplicated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Digraph {
    succ: Vec<Vec<usize>>,
}

impl Digraph {
    pub fn new(n: usize) -> Self {
        Self { succ: vec![Vec::new(); n] }
    }

    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut g = Self::new(n);
        for (a, b) in edges {
            g.succ[a].push(b);
        }
        g.normalize();
        g
    }

    /// Adds `a -> b`. Call [`Digraph::normalize`] afterwards if duplicates matter.
    pub fn add_edge(&mut self, a: usize, b: usize) {
        self.succ[a].push(b);
    }

    pub fn normalize(&mut self) {
        for s in &mut self.succ {
            s.sort_unstable();
            s.dedup();
        }
    }

    pub fn len(&self) -> usize {
        self.succ.len()
    }

    pub fn is_empty(&self) -> bool {
        self.succ.is_empty()
    }

    pub fn successors(&self, v: usize) -> &[usize] {
        &self.succ[v]
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.succ[a].binary_search(&b).is_ok()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.succ
            .iter()
            .enumerate()
            .flat_map(|(a, s)| s.iter().map(move |&b| (a, b)))
    }

    /// Nodes reachable from `sources` (sources included).
    pub fn reachable_from(&self, sources: &[usize]) -> Vec<bool> {
        let mut seen = vec![false; self.len()];
        let mut stack: Vec<usize> = Vec::new();
        for &s in sources {
            if !seen[s] {
                seen[s] = true;
                stack.push(s);
            }
        }
        while let Some(v) = stack.pop() {
            for &w in &self.succ[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen
    }

    pub fn reversed(&self) -> Digraph {
        let mut r = Digraph::new(self.len());
        for (a, b) in self.edges() {
            r.succ[b].push(a);
        }
        r.normalize();
        r
    }
}

/// Strongly connected components with their condensation.
///
/// Components are ordered by their smallest node; each component lists its
/// nodes in increasing order.
#[derive(Clone, Debug)]
pub struct Condensation {
    pub components: Vec<Vec<usize>>,
    pub component_of: Vec<usize>,
    /// Arcs between distinct components, sorted and deduplicated.
    pub dag: Digraph,
    /// Components in an order where every component appears after all the
    /// components it reaches (sinks first).
    pub sinks_first: Vec<usize>,
}

impl Condensation {
    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// Reflexive-transitive reachability between components.
    pub fn has_access(&self, from: usize, to: usize) -> bool {
        from == to || self.dag.reachable_from(&[from])[to]
    }

    /// Components reachable from `from` (including itself).
    pub fn accessible_from(&self, from: usize) -> Vec<bool> {
        self.dag.reachable_from(&[from])
    }

    /// True when the component is a single node without a self-loop.
    pub fn is_trivial(&self, g: &Digraph, c: usize) -> bool {
        let comp = &self.components[c];
        comp.len() == 1 && !g.has_edge(comp[0], comp[0])
    }
}

/// Tarjan's algorithm (iterative) followed by condensation.
pub fn scc_condense(g: &Digraph) -> Condensation {
    let n = g.len();
    const UNSET: usize = usize::MAX;
    let mut index = vec![UNSET; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<usize> = Vec::new();
    let mut raw: Vec<Vec<usize>> = Vec::new();
    let mut counter = 0usize;
    // (node, next successor position)
    let mut call: Vec<(usize, usize)> = Vec::new();

    for root in 0..n {
        if index[root] != UNSET {
            continue;
        }
        call.push((root, 0));
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(&mut (v, ref mut pos)) = call.last_mut() {
            let succ = g.successors(v);
            if *pos < succ.len() {
                let w = succ[*pos];
                *pos += 1;
                if index[w] == UNSET {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&(parent, _)) = call.last() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().expect("tarjan stack underflow");
                        on_stack[w] = false;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    comp.sort_unstable();
                    raw.push(comp);
                }
            }
        }
    }

    // Tarjan emits components sinks first; remember that order before sorting.
    let mut order: Vec<usize> = (0..raw.len()).collect();
    order.sort_by_key(|&i| raw[i][0]);
    let mut rank = vec![0usize; raw.len()];
    for (new, &old) in order.iter().enumerate() {
        rank[old] = new;
    }
    let sinks_first: Vec<usize> = (0..raw.len()).map(|old| rank[old]).collect();
    let components: Vec<Vec<usize>> = order.iter().map(|&i| raw[i].clone()).collect();

    let mut component_of = vec![0usize; n];
    for (c, comp) in components.iter().enumerate() {
        for &v in comp {
            component_of[v] = c;
        }
    }
    let mut dag = Digraph::new(components.len());
    for (a, b) in g.edges() {
        let (ca, cb) = (component_of[a], component_of[b]);
        if ca != cb {
            dag.add_edge(ca, cb);
        }
    }
    dag.normalize();

    Condensation { components, component_of, dag, sinks_first }
}
