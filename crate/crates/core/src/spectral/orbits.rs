use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::matrix::Matrix;
use crate::ring::Rational;

/// Largest period accepted by the brute-force counter.
pub const MAX_PERIOD: usize = 10;

struct Graph {
    /// `(source, target)` per edge; parallel edges repeat.
    edges: Vec<(usize, usize)>,
    out: Vec<Vec<usize>>,
}

fn edge_graph(a: &Matrix<Rational>) -> Result<Graph> {
    if !a.is_square() {
        return Err(Error::Shape("orbit counting needs a square matrix".into()));
    }
    let n = a.rows();
    let mut edges = Vec::new();
    let mut out = vec![Vec::new(); n];
    for i in 0..n {
        for j in 0..n {
            let v = &a[(i, j)];
            let m = v
                .to_i64()
                .filter(|m| *m >= 0 && v.is_integer())
                .ok_or_else(|| Error::Precondition(format!("entry ({i}, {j}) = {v} is not a nonnegative integer")))?;
            for _ in 0..m {
                out[i].push(edges.len());
                edges.push((i, j));
            }
        }
    }
    Ok(Graph { edges, out })
}

fn is_primitive_word(w: &[usize]) -> bool {
    let n = w.len();
    !(1..n).filter(|&d| n.is_multiple_of(d)).any(|d| (d..n).all(|i| w[i] == w[i - d]))
}

fn count_from(g: &Graph, first: usize, n: usize) -> u64 {
    let start = g.edges[first].0;
    let mut word = vec![first];
    let mut cursor: Vec<usize> = vec![0];
    let mut count = 0u64;
    // Depth-first over edge words beginning with `first`.
    while let Some(top) = cursor.last_mut() {
        if word.len() == n {
            if g.edges[word[n - 1]].1 == start && is_primitive_word(&word) {
                count += 1;
            }
            word.pop();
            cursor.pop();
            continue;
        }
        let here = g.edges[*word.last().expect("nonempty")].1;
        if *top < g.out[here].len() {
            let e = g.out[here][*top];
            *top += 1;
            word.push(e);
            cursor.push(0);
        } else {
            word.pop();
            cursor.pop();
        }
    }
    count
}

/// Points of least period `n` of the edge shift of `a`, by enumerating
/// closed edge words of length `n` that are not powers of shorter words.
pub fn count_least_period_points(a: &Matrix<Rational>, n: usize) -> Result<u64> {
    count_least_period_points_with(a, n, Exec::default())
}

pub fn count_least_period_points_with(a: &Matrix<Rational>, n: usize, exec: Exec) -> Result<u64> {
    if n == 0 || n > MAX_PERIOD {
        return Err(Error::Domain(format!("period must lie in 1..={MAX_PERIOD}, got {n}")));
    }
    let g = edge_graph(a)?;
    let counts = exec.map_range(g.edges.len(), |e| count_from(&g, e, n));
    Ok(counts.into_iter().sum())
}
