//! Helpers shared by the integration tests.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use carpet::geometry::parse_spec;
use carpet::UscSpec;

pub const SC: &str = r#"
k = 3
n_maps = 8
offsets = [["0","0"],["1/3","0"],["2/3","0"],["2/3","1/3"],["2/3","2/3"],["1/3","2/3"],["0","2/3"],["0","1/3"]]
"#;

pub fn sc() -> UscSpec {
    parse_spec(SC).unwrap()
}

/// Edge list with small integer conductances.
pub type IntEdges = Vec<(usize, usize, u32)>;

/// Exact `R(A, B)` by rational Gaussian elimination: `A` and `B` are each
/// merged into one node, `B` is grounded and `L x = e_A` is solved.
pub fn exact_resistance(n: usize, edges: &IntEdges, a: &[usize], b: &[usize]) -> BigRational {
    // Node 0 is the merged A, node 1 the merged B, the rest keep their order.
    let mut label = vec![usize::MAX; n];
    for &v in a {
        label[v] = 0;
    }
    for &v in b {
        label[v] = 1;
    }
    let mut next = 2;
    for l in label.iter_mut() {
        if *l == usize::MAX {
            *l = next;
            next += 1;
        }
    }
    let m = next;
    let zero = BigRational::zero();
    let mut lap = vec![vec![zero.clone(); m]; m];
    for &(x, y, c) in edges {
        let (x, y) = (label[x], label[y]);
        if x == y {
            continue;
        }
        let c = BigRational::from_integer(BigInt::from(c));
        lap[x][x] += &c;
        lap[y][y] += &c;
        lap[x][y] -= &c;
        lap[y][x] -= &c;
    }
    // Drop the grounded node 1.
    let keep: Vec<usize> = (0..m).filter(|&i| i != 1).collect();
    let mut mat: Vec<Vec<BigRational>> = keep.iter().map(|&i| keep.iter().map(|&j| lap[i][j].clone()).collect()).collect();
    let size = keep.len();
    let mut rhs = vec![zero.clone(); size];
    rhs[0] = BigRational::one();
    for col in 0..size {
        let pivot = (col..size).find(|&r| !mat[r][col].is_zero()).expect("connected graph has a nonsingular grounded Laplacian");
        mat.swap(col, pivot);
        rhs.swap(col, pivot);
        for r in col + 1..size {
            if mat[r][col].is_zero() {
                continue;
            }
            let f = &mat[r][col] / &mat[col][col];
            for c in col..size {
                let d = &f * &mat[col][c];
                mat[r][c] -= d;
            }
            let d = &f * &rhs[col];
            rhs[r] -= d;
        }
    }
    let mut x = vec![zero; size];
    for r in (0..size).rev() {
        let mut s = rhs[r].clone();
        for c in r + 1..size {
            s -= &mat[r][c] * &x[c];
        }
        x[r] = s / &mat[r][r];
    }
    x[0].clone()
}

pub fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

pub fn relative_error(approx: f64, exact: &BigRational) -> f64 {
    let e = to_f64(exact);
    (approx - e).abs() / e.abs()
}

pub fn is_connected(n: usize, edges: &IntEdges) -> bool {
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        for &(a, b, _) in edges {
            for (p, q) in [(a, b), (b, a)] {
                if p == v && !seen[q] {
                    seen[q] = true;
                    stack.push(q);
                }
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// Connected graph: a random spanning tree plus extra edges with probability `p`.
pub fn random_connected(n: usize, p: f64, rng: &mut ChaCha8Rng) -> IntEdges {
    let mut edges = IntEdges::new();
    for v in 1..n {
        edges.push((rng.random_range(0..v), v, rng.random_range(1..=9)));
    }
    for a in 0..n {
        for b in a + 1..n {
            if rng.random::<f64>() < p && !edges.iter().any(|e| (e.0, e.1) == (a, b)) {
                edges.push((a, b, rng.random_range(1..=9)));
            }
        }
    }
    edges
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn is_positive(r: &BigRational) -> bool {
    r.is_positive()
}
