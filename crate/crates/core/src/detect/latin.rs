//! The 3x3 latin-square subconfiguration
//!
//! ```text
//! * a b
//! a * c
//! b c *
//! ```
//!
//! on rows `i1 < i2 < i3` and pairwise distinct columns `j1, j2, j3`.

use serde::Serialize;

use crate::error::CheckError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LatinWitness {
    pub rows: [usize; 3],
    pub cols: [usize; 3],
    /// The entries `a, b, c`.
    pub symbols: [u32; 3],
}

fn check_latin(l: &[Vec<u32>]) -> Result<(), CheckError> {
    let n = l.len();
    let bad = |m: String| Err(CheckError::NotApplicable(m));
    if l.iter().any(|row| row.len() != n) {
        return bad("array is not square".into());
    }
    let Some(first) = l.first() else { return Ok(()) };
    let mut symbols = first.clone();
    symbols.sort_unstable();
    symbols.dedup();
    if symbols.len() != n {
        return bad("row 0 repeats a symbol".into());
    }
    for (i, row) in l.iter().enumerate() {
        let mut row = row.clone();
        row.sort_unstable();
        let mut col: Vec<u32> = (0..n).map(|k| l[k][i]).collect();
        col.sort_unstable();
        if row != symbols {
            return bad(format!("row {i} is not a permutation of the symbols"));
        }
        if col != symbols {
            return bad(format!("column {i} is not a permutation of the symbols"));
        }
    }
    Ok(())
}

/// First occurrence of the pattern (lexicographic in rows, then columns).
pub fn latin_subconfig(l: &[Vec<u32>]) -> Result<Option<LatinWitness>, CheckError> {
    check_latin(l)?;
    let n = l.len();
    for i1 in 0..n {
        for i2 in i1 + 1..n {
            for i3 in i2 + 1..n {
                for j1 in 0..n {
                    for j2 in (0..n).filter(|&j| j != j1) {
                        if l[i1][j2] != l[i2][j1] {
                            continue;
                        }
                        for j3 in (0..n).filter(|&j| j != j1 && j != j2) {
                            if l[i1][j3] == l[i3][j1] && l[i2][j3] == l[i3][j2] {
                                return Ok(Some(LatinWitness {
                                    rows: [i1, i2, i3],
                                    cols: [j1, j2, j3],
                                    symbols: [l[i1][j2], l[i1][j3], l[i2][j3]],
                                }));
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyclic(n: u32) -> Vec<Vec<u32>> {
        (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect()
    }

    // Every 3x3 selection, compared entry by entry against the pattern.
    fn brute(l: &[Vec<u32>]) -> bool {
        let n = l.len();
        let mut any = false;
        for i1 in 0..n {
            for i2 in i1 + 1..n {
                for i3 in i2 + 1..n {
                    for j1 in 0..n {
                        for j2 in 0..n {
                            for j3 in 0..n {
                                if j1 == j2 || j2 == j3 || j1 == j3 {
                                    continue;
                                }
                                let m = [[l[i1][j1], l[i1][j2], l[i1][j3]], [l[i2][j1], l[i2][j2], l[i2][j3]], [
                                    l[i3][j1], l[i3][j2], l[i3][j3],
                                ]];
                                any |= m[0][1] == m[1][0] && m[0][2] == m[2][0] && m[1][2] == m[2][1];
                            }
                        }
                    }
                }
            }
        }
        any
    }

    #[test]
    fn small_orders() {
        assert_eq!(latin_subconfig(&cyclic(1)).unwrap(), None);
        assert_eq!(latin_subconfig(&cyclic(2)).unwrap(), None);
        let w = latin_subconfig(&cyclic(3)).unwrap().unwrap();
        assert_eq!(w.rows, [0, 1, 2]);
        assert!(brute(&cyclic(3)));
    }

    #[test]
    fn agrees_with_brute_force() {
        for n in 3..7 {
            let l = cyclic(n);
            assert_eq!(latin_subconfig(&l).unwrap().is_some(), brute(&l), "order {n}");
        }
        // Z_2 x Z_2 table.
        let k4: Vec<Vec<u32>> = (0..4).map(|i| (0..4).map(|j| i ^ j).collect()).collect();
        assert_eq!(latin_subconfig(&k4).unwrap().is_some(), brute(&k4));
    }

    #[test]
    fn planted_and_invalid() {
        let l = vec![vec![0, 1, 2], vec![1, 2, 0], vec![2, 0, 1]];
        let w = latin_subconfig(&l).unwrap().unwrap();
        let [i1, i2, i3] = w.rows;
        let [j1, j2, j3] = w.cols;
        assert_eq!(l[i1][j2], l[i2][j1]);
        assert_eq!(l[i1][j3], l[i3][j1]);
        assert_eq!(l[i2][j3], l[i3][j2]);
        assert!(latin_subconfig(&[vec![0, 0], vec![1, 1]]).is_err());
        assert!(latin_subconfig(&[vec![0, 1], vec![1]]).is_err());
    }
}
