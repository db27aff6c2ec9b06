use super::Adj;

/// Kahn order, parents before children; `None` on a cycle.
pub(crate) fn topological_order(children: &[Adj], parents: &[Adj]) -> Option<Vec<usize>> {
    let m = children.len();
    let mut indeg: Vec<usize> = parents.iter().map(|p| p.len()).collect();
    let mut stack: Vec<usize> = (0..m).rev().filter(|&v| indeg[v] == 0).collect();
    let mut order = Vec::with_capacity(m);
    while let Some(v) = stack.pop() {
        order.push(v);
        for &c in children[v].iter().rev() {
            indeg[c] -= 1;
            if indeg[c] == 0 {
                stack.push(c);
            }
        }
    }
    (order.len() == m).then_some(order)
}

/// Biconnected components of the underlying undirected multigraph, as lists
/// of directed edges. Components are ordered by their smallest edge.
pub(crate) fn biconnected_components(children: &[Adj], _parents: &[Adj]) -> Vec<Vec<(usize, usize)>> {
    let m = children.len();
    let edges: Vec<(usize, usize)> = children
        .iter()
        .enumerate()
        .flat_map(|(u, cs)| cs.iter().map(move |&v| (u, v)))
        .collect();
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); m];
    for (e, &(u, v)) in edges.iter().enumerate() {
        adj[u].push((v, e));
        adj[v].push((u, e));
    }
    const UNSET: usize = usize::MAX;
    let mut disc = vec![UNSET; m];
    let mut low = vec![0usize; m];
    let mut time = 0;
    let mut edge_stack: Vec<usize> = Vec::new();
    let mut out: Vec<Vec<(usize, usize)>> = Vec::new();
    for start in 0..m {
        if disc[start] != UNSET {
            continue;
        }
        disc[start] = time;
        low[start] = time;
        time += 1;
        // (node, edge used to enter, next adjacency index)
        let mut frames: Vec<(usize, usize, usize)> = vec![(start, UNSET, 0)];
        while let Some(&mut (v, pe, ref mut idx)) = frames.last_mut() {
            if *idx < adj[v].len() {
                let (w, e) = adj[v][*idx];
                *idx += 1;
                if e == pe {
                    continue;
                }
                if disc[w] == UNSET {
                    edge_stack.push(e);
                    disc[w] = time;
                    low[w] = time;
                    time += 1;
                    frames.push((w, e, 0));
                } else if disc[w] < disc[v] {
                    edge_stack.push(e);
                    low[v] = low[v].min(disc[w]);
                }
            } else {
                frames.pop();
                if let Some(&(p, _, _)) = frames.last() {
                    low[p] = low[p].min(low[v]);
                    if low[v] >= disc[p] {
                        let mut comp = Vec::new();
                        while let Some(e) = edge_stack.pop() {
                            comp.push(edges[e]);
                            if e == pe {
                                break;
                            }
                        }
                        comp.sort_unstable();
                        out.push(comp);
                    }
                }
            }
        }
    }
    out.sort();
    out
}

fn count_components(m: usize, edges: &[(usize, usize)], removed_node: Option<usize>) -> (usize, usize) {
    let mut dsu: Vec<usize> = (0..m).collect();
    fn find(d: &mut [usize], mut x: usize) -> usize {
        while d[x] != x {
            d[x] = d[d[x]];
            x = d[x];
        }
        x
    }
    for &(u, v) in edges {
        if Some(u) == removed_node || Some(v) == removed_node {
            continue;
        }
        let (a, b) = (find(&mut dsu, u), find(&mut dsu, v));
        if a != b {
            dsu[a] = b;
        }
    }
    let mut size = vec![0usize; m];
    for v in 0..m {
        if Some(v) != removed_node {
            let r = find(&mut dsu, v);
            size[r] += 1;
        }
    }
    let comps = size.iter().filter(|&&s| s > 0).count();
    let nontrivial = size.iter().filter(|&&s| s > 1).count();
    (comps, nontrivial)
}

/// Brute-force simplicity test: delete each node, and each bridge, and
/// count the resulting components with more than one node.
pub(crate) fn is_simple(children: &[Adj], parents: &[Adj]) -> bool {
    let m = children.len();
    let edges: Vec<(usize, usize)> = children
        .iter()
        .enumerate()
        .flat_map(|(u, cs)| cs.iter().map(move |&v| (u, v)))
        .collect();
    for x in 0..m {
        let (comps, nontrivial) = count_components(m, &edges, Some(x));
        if comps >= 2 && nontrivial >= 2 {
            return false;
        }
    }
    for comp in biconnected_components(children, parents) {
        if comp.len() != 1 {
            continue;
        }
        let rest: Vec<(usize, usize)> = edges.iter().copied().filter(|e| *e != comp[0]).collect();
        let (comps, nontrivial) = count_components(m, &rest, None);
        if comps >= 2 && nontrivial >= 2 {
            return false;
        }
    }
    true
}
