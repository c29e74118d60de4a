//! Tropical matrices, the tropical determinant, and Casoratians.
//!
//! The tropical determinant `|A|_o = max_π Σ_j a_{j π(j)}` is computed by
//! an exact maximum-weight assignment (Hungarian potentials over rational
//! weights, `-inf` entries forbidden), so large dimensions avoid the
//! factorial blowup. The symbolic Casoratian enumerates permutations of
//! shifted functions up to a hard cap; past the cap, pointwise queries go
//! through the assignment solver.

use itertools::Itertools;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::plfun::PLFunction;
use crate::rational::Rational;
use crate::semiring::TropValue;

/// Square matrix of tropical scalars.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TropMatrix {
    entries: Vec<Vec<TropValue>>,
}

impl TropMatrix {
    pub fn new(entries: Vec<Vec<TropValue>>) -> Result<TropMatrix> {
        let dim = entries.len();
        if dim == 0 {
            return Err(Error::Precondition("matrix must be nonempty".into()));
        }
        for row in &entries {
            if row.len() != dim {
                return Err(Error::DimensionMismatch(row.len(), dim));
            }
        }
        Ok(TropMatrix { entries })
    }

    /// Tropical identity: 1_o on the diagonal, 0_o elsewhere.
    pub fn identity(dim: usize) -> TropMatrix {
        let entries = (0..dim)
            .map(|i| {
                (0..dim)
                    .map(|j| {
                        if i == j {
                            TropValue::one()
                        } else {
                            TropValue::Bottom
                        }
                    })
                    .collect()
            })
            .collect();
        TropMatrix { entries }
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Vec<TropValue>] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> &TropValue {
        &self.entries[i][j]
    }

    /// Entrywise tropical sum (max).
    pub fn mat_oplus(&self, other: &TropMatrix) -> Result<TropMatrix> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch(self.dim(), other.dim()));
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x.oplus(y)).collect())
            .collect();
        Ok(TropMatrix { entries })
    }

    /// Tropical matrix product: `(A ⊙ B)_{ij} = max_k (a_{ik} + b_{kj})`.
    pub fn mat_otimes(&self, other: &TropMatrix) -> Result<TropMatrix> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch(self.dim(), other.dim()));
        }
        let n = self.dim();
        let entries = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let mut acc = TropValue::Bottom;
                        for k in 0..n {
                            acc = acc.oplus(&self.entries[i][k].otimes(&other.entries[k][j]));
                        }
                        acc
                    })
                    .collect()
            })
            .collect();
        Ok(TropMatrix { entries })
    }

    /// The paper's row criterion: every row holds at least one entry above
    /// `-inf`. Deliberately distinct from `trop_det != -inf`; see the
    /// `regularity_row_criterion_vs_determinant` test for a matrix where
    /// the two disagree.
    pub fn is_regular(&self) -> bool {
        self.entries
            .iter()
            .all(|row| row.iter().any(|e| !e.is_bottom()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
enum Cost {
    Finite(Rational),
    Infinite,
}

/// Exact minimum-cost assignment over `Option<Rational>` costs (`None` =
/// forbidden edge). Returns `None` when no perfect matching avoids the
/// forbidden edges. Hungarian algorithm with potentials, O(n^3) exact
/// rational operations.
fn min_cost_assignment(cost: &[Vec<Option<Rational>>]) -> Option<Rational> {
    let n = cost.len();
    let mut u = vec![Rational::zero(); n + 1];
    let mut v = vec![Rational::zero(); n + 1];
    let mut matched = vec![0usize; n + 1]; // matched[j] = row occupying column j
    let mut way = vec![0usize; n + 1];

    for i in 1..=n {
        matched[0] = i;
        let mut j0 = 0usize;
        let mut minv = vec![Cost::Infinite; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = matched[j0];
            let mut delta = Cost::Infinite;
            let mut j1 = 0usize;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = match &cost[i0 - 1][j - 1] {
                    None => Cost::Infinite,
                    Some(c) => Cost::Finite(c - &u[i0] - &v[j]),
                };
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j].clone();
                    j1 = j;
                }
            }
            let delta = match delta {
                // every reachable column saturated or unreachable: no
                // perfect matching through permitted edges
                Cost::Infinite => return None,
                Cost::Finite(d) => d,
            };
            for j in 0..=n {
                if used[j] {
                    u[matched[j]] = &u[matched[j]] + &delta;
                    v[j] = &v[j] - &delta;
                } else if let Cost::Finite(m) = &minv[j] {
                    minv[j] = Cost::Finite(m - &delta);
                }
            }
            j0 = j1;
            if matched[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            matched[j0] = matched[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }

    let mut total = Rational::zero();
    for j in 1..=n {
        total += cost[matched[j] - 1][j - 1].as_ref()?;
    }
    Some(total)
}

/// Tropical determinant: the maximum over permutations of the selected
/// entry sum, `-inf` when no permutation avoids `-inf` entries.
pub fn trop_det(a: &TropMatrix) -> TropValue {
    let cost: Vec<Vec<Option<Rational>>> = a
        .entries
        .iter()
        .map(|row| {
            row.iter()
                .map(|e| e.as_finite().map(|q| -q.clone()))
                .collect()
        })
        .collect();
    match min_cost_assignment(&cost) {
        None => TropValue::Bottom,
        Some(c) => TropValue::Finite(-c),
    }
}

/// Default cap on the Casoratian shift count `k` (so at most `k+1 = 6`
/// functions, 720 permutation terms).
pub const DEFAULT_SYMBOLIC_CAP: usize = 5;

/// Symbolic tropical Casoratian
/// `C_o(f_0, ..., f_k)(x) = max_π Σ_j f_j(x + π(j) c)` as a canonical
/// piecewise-linear function, enumerating all permutations.
pub fn casoratian(funcs: &[PLFunction], c: &Rational) -> Result<PLFunction> {
    casoratian_capped(funcs, c, DEFAULT_SYMBOLIC_CAP)
}

/// [`casoratian`] with an explicit cap on the shift count.
pub fn casoratian_capped(funcs: &[PLFunction], c: &Rational, cap: usize) -> Result<PLFunction> {
    if funcs.is_empty() {
        return Err(Error::Precondition(
            "casoratian needs at least one function".into(),
        ));
    }
    if c.is_zero() {
        return Err(Error::Precondition("shift step must be nonzero".into()));
    }
    let k = funcs.len() - 1;
    if k > cap {
        return Err(Error::CapExceeded {
            what: "casoratian shift count",
            got: k,
            cap,
        });
    }
    let mut result: Option<PLFunction> = None;
    for perm in (0..funcs.len()).permutations(funcs.len()) {
        let mut term: Option<PLFunction> = None;
        for (j, &shift) in perm.iter().enumerate() {
            let shifted = funcs[j].pl_shift(&(c * Rational::from_integer(shift.into())));
            term = Some(match term {
                None => shifted,
                Some(t) => t.pl_add(&shifted)?,
            });
        }
        let term = term.unwrap();
        result = Some(match result {
            None => term,
            Some(acc) => acc.pl_max(&term)?,
        });
    }
    Ok(result.unwrap())
}

/// Casoratian value at one point via maximum-weight assignment on the
/// evaluation matrix `M[j][k] = f_j(x + k c)`; no factorial blowup.
pub fn casoratian_at(funcs: &[PLFunction], c: &Rational, x: &Rational) -> Result<Rational> {
    if funcs.is_empty() {
        return Err(Error::Precondition(
            "casoratian needs at least one function".into(),
        ));
    }
    if c.is_zero() {
        return Err(Error::Precondition("shift step must be nonzero".into()));
    }
    let n = funcs.len();
    let mut cost = Vec::with_capacity(n);
    for f in funcs {
        let mut row = Vec::with_capacity(n);
        for k in 0..n {
            let arg = x + c * Rational::from_integer(k.into());
            row.push(Some(-f.evaluate(&arg)?));
        }
        cost.push(row);
    }
    let total = min_cost_assignment(&cost).expect("finite entries always admit a matching");
    Ok(-total)
}
