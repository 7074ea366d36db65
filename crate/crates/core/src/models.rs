//! Built-in example models.

use crate::error::{Error, Result};
use crate::model::{ModelMatrix, StateSpace};

/// Largest number of steps accepted by [`markov_chain`].
pub const MAX_MARKOV_STEPS: usize = 12;

/// The 4-cycle on `{+1,-1}^4`: rows `I, D, C, B, A, BA, CB, DC, DA`, states
/// labelled by the signs of `D, C, B, A` in that order, `+` before `-`.
pub fn four_cycle() -> ModelMatrix {
    let mut labels = Vec::with_capacity(16);
    let mut columns = Vec::with_capacity(16);
    for code in 0..16u32 {
        let sign = |bit: u32| if code >> (3 - bit) & 1 == 0 { 1i64 } else { -1 };
        let (d, c, b, a) = (sign(0), sign(1), sign(2), sign(3));
        labels.push(
            [d, c, b, a]
                .iter()
                .map(|&s| if s > 0 { '+' } else { '-' })
                .collect::<String>(),
        );
        columns.push([1, d, c, b, a, b * a, c * b, d * c, d * a]);
    }
    let rows: Vec<Vec<i64>> = (0..9).map(|j| columns.iter().map(|col| col[j]).collect()).collect();
    let names = ["I", "D", "C", "B", "A", "BA", "CB", "DC", "DA"]
        .iter()
        .map(ToString::to_string)
        .collect();
    ModelMatrix::from_i64_rows(
        StateSpace::uniform(labels).expect("distinct labels"),
        &rows,
        Some(names),
    )
    .expect("valid 4-cycle model")
}

/// Counts `(1 - X0, X0, N00, N01, N10, N11)` for a binary trajectory.
pub fn markov_counts(trajectory: &[u8]) -> [i64; 6] {
    let x0 = i64::from(trajectory[0]);
    let mut n = [0i64; 4];
    for w in trajectory.windows(2) {
        n[usize::from(w[0] * 2 + w[1])] += 1;
    }
    [1 - x0, x0, n[0], n[1], n[2], n[3]]
}

/// All binary trajectories of length `steps + 1`, in lexicographic order.
pub fn trajectories(steps: usize) -> Vec<Vec<u8>> {
    let len = steps + 1;
    (0..1u32 << len)
        .map(|code| (0..len).map(|t| (code >> (len - 1 - t) & 1) as u8).collect())
        .collect()
}

/// Binary Markov chain with `steps` transitions: rows
/// `1-X0, X0, N00, N01, N10, N11` over all trajectories.
pub fn markov_chain(steps: usize) -> Result<ModelMatrix> {
    if steps == 0 || steps > MAX_MARKOV_STEPS {
        return Err(Error::InvalidParameter(format!(
            "markov steps must be in 1..={MAX_MARKOV_STEPS}, got {steps}"
        )));
    }
    let paths = trajectories(steps);
    let labels = paths
        .iter()
        .map(|p| p.iter().map(|b| char::from(b'0' + b)).collect())
        .collect();
    let counts: Vec<[i64; 6]> = paths.iter().map(|p| markov_counts(p)).collect();
    let rows: Vec<Vec<i64>> = (0..6).map(|j| counts.iter().map(|c| c[j]).collect()).collect();
    let names = ["1-X0", "X0", "N00", "N01", "N10", "N11"]
        .iter()
        .map(ToString::to_string)
        .collect();
    ModelMatrix::from_i64_rows(StateSpace::uniform(labels)?, &rows, Some(names))
}

/// Independence model of a 2x2 table: constant, row indicator, column
/// indicator over states `00, 01, 10, 11`.
pub fn independence_2x2() -> ModelMatrix {
    let labels = ["00", "01", "10", "11"].iter().map(ToString::to_string).collect();
    ModelMatrix::from_i64_rows(
        StateSpace::uniform(labels).expect("distinct labels"),
        &[vec![1, 1, 1, 1], vec![0, 0, 1, 1], vec![0, 1, 0, 1]],
        Some(vec!["I".into(), "R".into(), "C".into()]),
    )
    .expect("valid independence model")
}

/// Identity model on `n` states (full rank, trivial kernel).
pub fn identity(n: usize) -> Result<ModelMatrix> {
    let rows: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    ModelMatrix::from_i64_rows(StateSpace::numbered(n)?, &rows, None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn four_cycle_layout() {
        let fc = four_cycle();
        assert_eq!(fc.states().labels()[0], "++++");
        assert_eq!(fc.states().labels()[1], "+++-");
        assert_eq!(fc.states().labels()[15], "----");
        let x = fc.states().index_of("+-+-").unwrap();
        let ba = fc.row_names().iter().position(|r| r == "BA").unwrap();
        assert_eq!(fc.matrix().get(ba, x), &BigInt::from(-1));
    }

    #[test]
    fn markov_example_columns() {
        let m2 = markov_chain(2).unwrap();
        assert_eq!(m2.states().labels()[0], "000");
        assert_eq!(m2.statistic(0), [1, 0, 2, 0, 0, 0].map(BigInt::from).to_vec());
        let m3 = markov_chain(3).unwrap();
        let x = m3.states().index_of("0101").unwrap();
        assert_eq!(m3.statistic(x), [1, 0, 0, 2, 1, 0].map(BigInt::from).to_vec());
        assert!(markov_chain(0).is_err());
        assert!(markov_chain(13).is_err());
    }
}
