//! Exact maximum clique by branch and bound with a greedy colouring bound.

/// Returns a maximum clique of the graph given by a symmetric adjacency
/// matrix, as sorted vertex ids.
pub fn max_clique(adj: &[Vec<bool>]) -> Vec<usize> {
    let n = adj.len();
    let mut best = Vec::new();
    // degeneracy-like ordering: high degree first tends to find big cliques early
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| std::cmp::Reverse(adj[v].iter().filter(|&&b| b).count()));
    let mut current = Vec::new();
    expand(adj, &mut current, order, &mut best);
    best.sort_unstable();
    best
}

fn expand(adj: &[Vec<bool>], current: &mut Vec<usize>, candidates: Vec<usize>, best: &mut Vec<usize>) {
    if candidates.is_empty() {
        if current.len() > best.len() {
            *best = current.clone();
        }
        return;
    }
    let (ordered, colours) = colour_sort(adj, &candidates);
    for i in (0..ordered.len()).rev() {
        if current.len() + colours[i] <= best.len() {
            return;
        }
        let v = ordered[i];
        current.push(v);
        let next: Vec<usize> = ordered[..i].iter().copied().filter(|&w| adj[v][w]).collect();
        expand(adj, current, next, best);
        current.pop();
    }
}

/// Greedy sequential colouring; returns candidates ordered by colour class
/// with the running colour count, an upper bound on any clique among the
/// prefix.
fn colour_sort(adj: &[Vec<bool>], candidates: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for &v in candidates {
        match classes.iter_mut().find(|class| class.iter().all(|&w| !adj[v][w])) {
            Some(class) => class.push(v),
            None => classes.push(vec![v]),
        }
    }
    let mut ordered = Vec::with_capacity(candidates.len());
    let mut colours = Vec::with_capacity(candidates.len());
    for (c, class) in classes.into_iter().enumerate() {
        for v in class {
            ordered.push(v);
            colours.push(c + 1);
        }
    }
    (ordered, colours)
}
