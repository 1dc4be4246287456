//! Exact row reduction and nullspace computation.
//!
//! Constraint systems arising from monomial matrices are very sparse (two
//! nonzeros per row is typical), so rows are stored as sorted
//! `(column, value)` lists and reduced incrementally against an echelon set.
//! The final basis is read off the unique reduced row echelon form, so it
//! does not depend on the order in which rows were fed in.

use std::collections::BTreeMap;

use crate::error::AlgebraError;
use crate::scalar::ExactScalar;

/// A linear form `Σ cⱼ·uⱼ` over the unknowns `uⱼ`, kept sorted by column
/// with no explicit zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct LinearForm {
    terms: Vec<(usize, ExactScalar)>,
}

impl LinearForm {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_dense(coeffs: &[ExactScalar]) -> Self {
        Self {
            terms: coeffs
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(j, c)| (j, c.clone()))
                .collect(),
        }
    }

    /// Builds from unsorted terms; repeated columns are summed.
    pub fn from_terms(terms: impl IntoIterator<Item = (usize, ExactScalar)>) -> Self {
        let mut acc: BTreeMap<usize, ExactScalar> = BTreeMap::new();
        for (j, c) in terms {
            *acc.entry(j).or_insert_with(ExactScalar::zero) += &c;
        }
        Self {
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn terms(&self) -> &[(usize, ExactScalar)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn width_hint(&self) -> usize {
        self.terms.last().map_or(0, |(j, _)| j + 1)
    }

    pub fn lead(&self) -> Option<(usize, &ExactScalar)> {
        self.terms.first().map(|(j, c)| (*j, c))
    }

    pub fn coeff(&self, col: usize) -> ExactScalar {
        self.terms
            .binary_search_by_key(&col, |(j, _)| *j)
            .map(|i| self.terms[i].1.clone())
            .unwrap_or_else(|_| ExactScalar::zero())
    }

    pub fn evaluate(&self, v: &[ExactScalar]) -> ExactScalar {
        let mut acc = ExactScalar::zero();
        for (j, c) in &self.terms {
            acc += &(c * &v[*j]);
        }
        acc
    }

    fn scale(&mut self, k: &ExactScalar) {
        for (_, c) in &mut self.terms {
            *c = &*c * k;
        }
    }

    /// `self - k·other`
    fn sub_scaled(&self, k: &ExactScalar, other: &LinearForm) -> LinearForm {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut a, mut b) = (self.terms.iter().peekable(), other.terms.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (Some((ja, ca)), Some((jb, cb))) => {
                    if ja < jb {
                        out.push((*ja, ca.clone()));
                        a.next();
                    } else if jb < ja {
                        out.push((*jb, -&(k * cb)));
                        b.next();
                    } else {
                        let v = ca - &(k * cb);
                        if !v.is_zero() {
                            out.push((*ja, v));
                        }
                        a.next();
                        b.next();
                    }
                }
                (Some((ja, ca)), None) => {
                    out.push((*ja, ca.clone()));
                    a.next();
                }
                (None, Some((jb, cb))) => {
                    out.push((*jb, -&(k * cb)));
                    b.next();
                }
                (None, None) => break,
            }
        }
        LinearForm { terms: out }
    }
}

/// Incremental exact elimination over a fixed number of unknowns.
///
/// Pivot rows are stored normalized (leading coefficient 1) and keyed by
/// their leading column; pivoting always takes the leftmost nonzero.
#[derive(Clone, Debug)]
pub struct RowReducer {
    unknowns: usize,
    pivots: BTreeMap<usize, LinearForm>,
}

impl RowReducer {
    pub fn new(unknowns: usize) -> Self {
        Self {
            unknowns,
            pivots: BTreeMap::new(),
        }
    }

    pub fn unknowns(&self) -> usize {
        self.unknowns
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Reduces `row` against the current pivots and keeps it if independent.
    /// Returns whether the rank grew.
    pub fn push(&mut self, row: LinearForm) -> Result<bool, AlgebraError> {
        if row.width_hint() > self.unknowns {
            return Err(AlgebraError::RowWidth {
                expected: self.unknowns,
                found: row.width_hint(),
            });
        }
        let reduced = self.reduce(row);
        match reduced.lead() {
            None => Ok(false),
            Some((col, lead)) => {
                let inv = lead.inv().expect("lead is nonzero");
                let mut r = reduced.clone();
                r.scale(&inv);
                self.pivots.insert(col, r);
                Ok(true)
            }
        }
    }

    fn reduce(&self, mut row: LinearForm) -> LinearForm {
        let mut from = 0usize;
        loop {
            let next = row
                .terms
                .iter()
                .find(|(j, _)| *j >= from && self.pivots.contains_key(j))
                .map(|(j, c)| (*j, c.clone()));
            match next {
                None => return row,
                Some((col, c)) => {
                    row = row.sub_scaled(&c, &self.pivots[&col]);
                    from = col + 1;
                }
            }
        }
    }

    /// Whether every unknown is pinned to zero.
    pub fn is_full_rank(&self) -> bool {
        self.rank() == self.unknowns
    }

    /// Reduced row echelon form, pivot rows in increasing column order.
    pub fn rref(&self) -> Vec<(usize, LinearForm)> {
        let mut done: BTreeMap<usize, LinearForm> = BTreeMap::new();
        for (&col, row) in self.pivots.iter().rev() {
            // rows in `done` are fully reduced and only touch free columns
            // besides their own pivot, so one pass clears every pivot column
            let hits: Vec<(usize, ExactScalar)> = row
                .terms
                .iter()
                .filter(|(j, _)| *j != col && done.contains_key(j))
                .map(|(j, c)| (*j, c.clone()))
                .collect();
            let mut r = row.clone();
            for (j, c) in hits {
                r = r.sub_scaled(&c, &done[&j]);
            }
            done.insert(col, r);
        }
        done.into_iter().collect()
    }

    /// Basis of the solution space `{v : row(v) = 0 for every pushed row}`,
    /// one vector per free column in increasing column order.
    pub fn nullspace(&self) -> Vec<Vec<ExactScalar>> {
        let rref = self.rref();
        let free: Vec<usize> = (0..self.unknowns)
            .filter(|c| !self.pivots.contains_key(c))
            .collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![ExactScalar::zero(); self.unknowns];
                v[f] = ExactScalar::one();
                for (pc, row) in &rref {
                    let c = row.coeff(f);
                    if !c.is_zero() {
                        v[*pc] = -c;
                    }
                }
                v
            })
            .collect()
    }
}

/// Exact nullspace basis of a system of linear forms in `unknowns` variables.
pub fn nullspace(
    rows: &[LinearForm],
    unknowns: usize,
) -> Result<Vec<Vec<ExactScalar>>, AlgebraError> {
    let mut red = RowReducer::new(unknowns);
    for r in rows {
        red.push(r.clone())?;
    }
    Ok(red.nullspace())
}

/// Nullspace of dense coefficient rows; all rows must share one width.
pub fn nullspace_dense(rows: &[Vec<ExactScalar>]) -> Result<Vec<Vec<ExactScalar>>, AlgebraError> {
    let Some(width) = rows.first().map(Vec::len) else {
        return Ok(Vec::new());
    };
    if let Some(bad) = rows.iter().find(|r| r.len() != width) {
        return Err(AlgebraError::RowWidth {
            expected: width,
            found: bad.len(),
        });
    }
    let forms: Vec<LinearForm> = rows.iter().map(|r| LinearForm::from_dense(r)).collect();
    nullspace(&forms, width)
}

pub fn rank(rows: &[LinearForm], unknowns: usize) -> usize {
    let mut red = RowReducer::new(unknowns);
    for r in rows {
        red.push(r.clone()).expect("row width checked by caller");
    }
    red.rank()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(a: i64, b: i64) -> ExactScalar {
        ExactScalar::gaussian(a, b)
    }

    #[test]
    fn identity_has_trivial_nullspace() {
        let rows = vec![vec![g(1, 0), g(0, 0)], vec![g(0, 0), g(1, 0)]];
        assert!(nullspace_dense(&rows).unwrap().is_empty());
    }

    #[test]
    fn zero_map_has_full_nullspace() {
        let rows = vec![vec![g(0, 0); 3]];
        let ns = nullspace_dense(&rows).unwrap();
        assert_eq!(ns.len(), 3);
        for (k, v) in ns.iter().enumerate() {
            for (j, x) in v.iter().enumerate() {
                assert_eq!(x.is_one(), j == k);
            }
        }
    }

    #[test]
    fn hermitian_rank_one_system() {
        // x + i·y = 0 and -i·x + y = 0; by hand y is free and x = -i·y
        let rows = vec![vec![g(1, 0), g(0, 1)], vec![g(0, -1), g(1, 0)]];
        let ns = nullspace_dense(&rows).unwrap();
        assert_eq!(ns, vec![vec![g(0, -1), g(1, 0)]]);
    }

    #[test]
    fn ragged_rows_rejected() {
        let rows = vec![vec![g(1, 0)], vec![g(1, 0), g(0, 0)]];
        assert!(matches!(nullspace_dense(&rows), Err(AlgebraError::RowWidth { .. })));
        let mut red = RowReducer::new(2);
        assert!(red.push(LinearForm::from_terms([(5, g(1, 0))])).is_err());
    }

    #[test]
    fn basis_independent_of_row_order() {
        let a = LinearForm::from_terms([(0, g(1, 0)), (2, g(0, 1)), (3, g(2, 0))]);
        let b = LinearForm::from_terms([(1, g(1, 1)), (2, g(1, 0))]);
        let c = LinearForm::from_terms([(0, g(3, 0)), (1, g(1, 1)), (2, g(1, 3)), (3, g(6, 0))]);
        let n1 = nullspace(&[a.clone(), b.clone(), c.clone()], 4).unwrap();
        let n2 = nullspace(&[c, b, a], 4).unwrap();
        assert_eq!(n1, n2);
        assert_eq!(n1.len(), 2);
    }
}
