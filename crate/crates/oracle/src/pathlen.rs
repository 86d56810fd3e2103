//! Shortest-path reference for node depths.
//!
//! Works on a plain adjacency description: `edges[i]` lists the antecedent
//! indices of node `i`. Depth of a node is the length of the shortest
//! directed path from any source in `sources` following those edges.

/// Brute-force all-pairs shortest path (Floyd-Warshall), then a minimum over
/// sources. Returns `None` for unreachable nodes.
pub fn depths_from(edges: &[Vec<usize>], sources: &[usize]) -> Vec<Option<usize>> {
    let n = edges.len();
    const INF: usize = usize::MAX / 4;
    let mut dist = vec![vec![INF; n]; n];
    for (i, row) in dist.iter_mut().enumerate() {
        row[i] = 0;
    }
    for (i, ants) in edges.iter().enumerate() {
        for &a in ants {
            dist[i][a] = 1;
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = dist[i][k] + dist[k][j];
                if via < dist[i][j] {
                    dist[i][j] = via;
                }
            }
        }
    }
    (0..n)
        .map(|j| {
            sources
                .iter()
                .map(|&s| dist[s][j])
                .min()
                .filter(|&d| d < INF)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diamond_depths() {
        // 3 -> {1, 2}, 1 -> {0}, 2 -> {0}
        let edges = vec![vec![], vec![0], vec![0], vec![1, 2]];
        let depths = depths_from(&edges, &[3]);
        assert_eq!(depths, vec![Some(2), Some(1), Some(1), Some(0)]);
    }

    #[test]
    fn unreachable_is_none() {
        let edges = vec![vec![], vec![]];
        let depths = depths_from(&edges, &[0]);
        assert_eq!(depths, vec![Some(0), None]);
    }
}
