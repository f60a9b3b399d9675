//! Small built-in structures used by tests, benchmarks and the fixture files.

use crate::structure::{ElemId, OpTable, Structure};

fn names(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

fn order(n: usize, covers: &[(usize, usize)]) -> Vec<Vec<bool>> {
    let mut leq = vec![vec![false; n]; n];
    for (i, row) in leq.iter_mut().enumerate() {
        row[i] = true;
    }
    for &(x, y) in covers {
        leq[x][y] = true;
    }
    // transitive closure
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if leq[i][k] && leq[k][j] {
                    leq[i][j] = true;
                }
            }
        }
    }
    leq
}

/// The six-element lattice `0 < a < b < d < 1`, `0 < c < d` with the tables
/// below. It is not prelinear.
///
/// ```text
///  *  | 0 a b c d 1      -> | 0 a b c d 1
///  0  | 0 0 0 0 0 0      0  | 1 1 1 1 1 1
///  a  | 0 a a 0 a a      a  | c 1 1 c 1 1
///  b  | 0 a a 0 a b      b  | c d 1 c 1 1
///  c  | 0 0 0 c c c      c  | b b b 1 1 1
///  d  | 0 a a c d d      d  | 0 b b c 1 1
///  1  | 0 a b c d 1      1  | 0 a b c d 1
/// ```
pub fn a6() -> Structure {
    let times = OpTable::from_rows(&[
        vec![0, 0, 0, 0, 0, 0],
        vec![0, 1, 1, 0, 1, 1],
        vec![0, 1, 1, 0, 1, 2],
        vec![0, 0, 0, 3, 3, 3],
        vec![0, 1, 1, 3, 4, 4],
        vec![0, 1, 2, 3, 4, 5],
    ])
    .unwrap();
    let residuum = OpTable::from_rows(&[
        vec![5, 5, 5, 5, 5, 5],
        vec![3, 5, 5, 3, 5, 5],
        vec![3, 4, 5, 3, 5, 5],
        vec![2, 2, 2, 5, 5, 5],
        vec![0, 2, 2, 3, 5, 5],
        vec![0, 1, 2, 3, 4, 5],
    ])
    .unwrap();
    let leq = order(6, &[(0, 1), (0, 3), (1, 2), (2, 4), (3, 4), (4, 5)]);
    Structure::from_order(
        names(&["0", "a", "b", "c", "d", "1"]),
        &leq,
        times,
        residuum,
        ElemId(0),
        ElemId(5),
    )
    .unwrap()
}

/// The two-element Boolean algebra.
pub fn chain2() -> Structure {
    chain(&["0", "1"], &[vec![0, 0], vec![0, 1]])
}

/// Three-element chain with `m * m = m` (Goedel t-norm).
pub fn chain3_godel() -> Structure {
    chain(
        &["0", "m", "1"],
        &[vec![0, 0, 0], vec![0, 1, 1], vec![0, 1, 2]],
    )
}

/// Three-element chain with `m * m = 0` (Lukasiewicz t-norm).
pub fn chain3_luk() -> Structure {
    chain(
        &["0", "m", "1"],
        &[vec![0, 0, 0], vec![0, 0, 1], vec![0, 1, 2]],
    )
}

/// A chain `names[0] < names[1] < ...` with the given times table; the residuum is derived.
pub fn chain(elem_names: &[&str], times: &[Vec<usize>]) -> Structure {
    let n = elem_names.len();
    let join = OpTable::from_fn(n, |x, y| x.max(y));
    let meet = OpTable::from_fn(n, |x, y| x.min(y));
    Structure::with_derived_residuum(
        names(elem_names),
        join,
        meet,
        OpTable::from_rows(times).unwrap(),
        ElemId(0),
        ElemId(n - 1),
    )
    .unwrap()
}
