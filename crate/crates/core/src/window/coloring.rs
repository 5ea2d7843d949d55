//! Proper colorings of finite hypergraphs, where "proper" means no edge is monochromatic.

/// The lexicographically least coloring of vertices `0..n` with colors
/// `0..colors` under which no edge is monochromatic, or `None` if every
/// coloring has a monochromatic edge.
///
/// Backtracking in vertex order with forward checking: once all but one vertex
/// of an edge share a color, that color is struck from the last vertex. Colors
/// are restricted to growth order (a vertex may open at most one new color),
/// which loses nothing since the least valid coloring always has that shape.
pub fn least_proper_coloring(n: usize, edges: &[Vec<usize>], colors: usize) -> Option<Vec<usize>> {
    if edges.iter().any(|e| e.len() <= 1) {
        return None;
    }
    if n == 0 {
        return Some(Vec::new());
    }
    if colors == 0 {
        return None;
    }
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (k, e) in edges.iter().enumerate() {
        for &v in e {
            incident[v].push(k);
        }
    }
    let mut search = Search {
        edges,
        incident,
        colors,
        assigned: vec![None; n],
        banned: vec![vec![0u32; colors]; n],
    };
    search.run(0, 0).then(|| search.assigned.into_iter().map(|c| c.unwrap()).collect())
}

struct Search<'a> {
    edges: &'a [Vec<usize>],
    incident: Vec<Vec<usize>>,
    colors: usize,
    assigned: Vec<Option<usize>>,
    banned: Vec<Vec<u32>>,
}

impl Search<'_> {
    fn run(&mut self, v: usize, used: usize) -> bool {
        if v == self.assigned.len() {
            return true;
        }
        let top = used.min(self.colors - 1);
        for c in 0..=top {
            if self.banned[v][c] > 0 {
                continue;
            }
            self.assigned[v] = Some(c);
            let mut trail = Vec::new();
            let ok = self.propagate(v, c, &mut trail);
            if ok && self.run(v + 1, used.max(c + 1)) {
                return true;
            }
            for u in trail {
                self.banned[u][c] -= 1;
            }
            self.assigned[v] = None;
        }
        false
    }

    /// Strikes `c` from every vertex left alone in an otherwise `c`-colored edge.
    /// Returns false when some vertex runs out of colors.
    fn propagate(&mut self, v: usize, c: usize, trail: &mut Vec<usize>) -> bool {
        for &k in &self.incident[v] {
            let mut open = None;
            let mut blocked = false;
            for &u in &self.edges[k] {
                match self.assigned[u] {
                    Some(cu) if cu == c => {}
                    Some(_) => {
                        blocked = true;
                        break;
                    }
                    None if open.is_none() => open = Some(u),
                    None => {
                        blocked = true;
                        break;
                    }
                }
            }
            if blocked {
                continue;
            }
            let Some(u) = open else {
                // every vertex of the edge already carries c
                return false;
            };
            self.banned[u][c] += 1;
            trail.push(u);
            if self.banned[u][c] == 1 && self.banned[u].iter().all(|&b| b > 0) {
                return false;
            }
        }
        true
    }
}

/// The first edge (in the given order) whose vertices all share one color.
pub fn monochromatic_edge<'a>(edges: &'a [Vec<usize>], coloring: &[usize]) -> Option<&'a Vec<usize>> {
    edges.iter().find(|e| e.windows(2).all(|w| coloring[w[0]] == coloring[w[1]]))
}
