//! Exact Gaussian elimination over `Coeff`.

use std::collections::BTreeMap;

use super::coeff::Coeff;

/// Sparse row: column index → nonzero entry.
pub type Row = BTreeMap<usize, Coeff>;

/// Rank of the matrix with the given rows.
pub fn rank(rows: Vec<Row>) -> usize {
    let mut pivots: BTreeMap<usize, Row> = BTreeMap::new();
    for mut r in rows {
        loop {
            let Some((&col, _)) = r.iter().next() else { break };
            match pivots.get(&col) {
                None => {
                    pivots.insert(col, r);
                    break;
                }
                Some(p) => {
                    let factor = &r[&col] / &p[&col];
                    for (c, v) in p {
                        let e = r.entry(*c).or_insert_with(Coeff::zero);
                        *e = &*e - &(&factor * v);
                        if e.is_zero() {
                            r.remove(c);
                        }
                    }
                }
            }
        }
    }
    pivots.len()
}

/// Solves `Σ_k x_k columns[k] = target`; `None` if inconsistent.
pub fn solve(columns: &[Row], target: &Row) -> Option<Vec<Coeff>> {
    let n = columns.len();
    // Augmented rows indexed by matrix row; unknowns are columns.
    let mut rows: BTreeMap<usize, (Row, Coeff)> = BTreeMap::new();
    for (k, col) in columns.iter().enumerate() {
        for (r, v) in col {
            rows.entry(*r).or_insert_with(|| (Row::new(), Coeff::zero())).0.insert(k, v.clone());
        }
    }
    for (r, v) in target {
        rows.entry(*r).or_insert_with(|| (Row::new(), Coeff::zero())).1 = v.clone();
    }
    let mut pivots: Vec<(usize, Row, Coeff)> = Vec::new();
    for (_, (mut row, mut rhs)) in rows {
        for (pc, prow, prhs) in &pivots {
            if let Some(v) = row.get(pc).cloned() {
                let factor = &v / &prow[pc];
                for (c, x) in prow {
                    let e = row.entry(*c).or_insert_with(Coeff::zero);
                    *e = &*e - &(&factor * x);
                    if e.is_zero() {
                        row.remove(c);
                    }
                }
                rhs = &rhs - &(&factor * prhs);
            }
        }
        match row.iter().next() {
            None if !rhs.is_zero() => return None,
            None => {}
            Some((&c, _)) => pivots.push((c, row, rhs)),
        }
    }
    let mut x = vec![Coeff::zero(); n];
    for (pc, row, rhs) in pivots.iter().rev() {
        let mut acc = rhs.clone();
        for (c, v) in row {
            if c != pc {
                acc = &acc - &(v * &x[*c]);
            }
        }
        x[*pc] = &acc / &row[pc];
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(v: &[(usize, i64)]) -> Row {
        v.iter().map(|(c, x)| (*c, Coeff::int(*x))).collect()
    }

    #[test]
    fn rank_of_dependent_rows() {
        let rows = vec![row(&[(0, 1), (1, 2)]), row(&[(0, 2), (1, 4)]), row(&[(2, 1)])];
        assert_eq!(rank(rows), 2);
    }

    #[test]
    fn solve_small_system() {
        let cols = vec![row(&[(0, 1), (1, 1)]), row(&[(0, 1), (1, -1)])];
        let x = solve(&cols, &row(&[(0, 3), (1, 1)])).unwrap();
        assert_eq!(x, vec![Coeff::int(2), Coeff::int(1)]);
        assert!(solve(&[row(&[(0, 1)])], &row(&[(1, 1)])).is_none());
    }
}
