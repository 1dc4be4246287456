//! Gamma-matrix systems for signature (1, d), d even.
//!
//! The d = 2 system is built from Pauli matrices and larger systems by a
//! tensor-product step that doubles the representation and adds two
//! spatial gammas. Two variants of the step are provided; they differ by
//! which Pauli matrix multiplies the old gammas and therefore by which
//! gammas come out real or imaginary. Symmetry verdicts do not depend on
//! the choice, explicit intertwiner matrices do.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::ExactMatrix;
use crate::scalar::ExactScalar;

/// Which tensor-product step [`extend`] applies.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Extension {
    /// `(γ_μ ⊗ σ₃, i·1⊗σ₂, i·1⊗σ₁)`: keeps γ₀ real, so at d = 4 the
    /// real/imaginary pattern of the α matrices is that of the usual Dirac
    /// representation (α₁, α₃ real; α₂, α₄ imaginary).
    #[default]
    Sigma3,
    /// `(γ_μ ⊗ σ₂, i·1⊗σ₃, i·1⊗σ₁)`: the textbook recursion with the factor
    /// `i` added so the new spatial gammas square to −1.
    Sigma2,
}

impl Extension {
    pub fn label(self) -> &'static str {
        match self {
            Extension::Sigma3 => "sigma3",
            Extension::Sigma2 => "sigma2",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GammaSystem {
    d: usize,
    rep_dim: usize,
    extension: Extension,
    gammas: Vec<ExactMatrix>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CliffordMonomial {
    pub index_subset: Vec<usize>,
    pub matrix: ExactMatrix,
}

/// Outcome of checking `{γ_μ, γ_ν} = 2g_μν·I` for one pair.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationCheck {
    pub mu: usize,
    pub nu: usize,
    pub expected: i64,
    pub holds: bool,
}

fn i_times(m: &ExactMatrix) -> ExactMatrix {
    m.scale(&ExactScalar::i())
}

/// The d = 2 system: γ₀ = σ₃, γ₁ = σ₃σ₁, γ₂ = σ₃σ₂, so that α_k = γ₀γ_k = σ_k
/// and β = γ₀ = σ₃.
pub fn base_system() -> GammaSystem {
    base_system_with(Extension::default())
}

fn base_system_with(extension: Extension) -> GammaSystem {
    let s3 = ExactMatrix::pauli(3);
    let g1 = &s3 * &ExactMatrix::pauli(1);
    let g2 = &s3 * &ExactMatrix::pauli(2);
    GammaSystem {
        d: 2,
        rep_dim: 2,
        extension,
        gammas: vec![s3, g1, g2],
    }
}

/// One recursion step: d → d + 2, representation dimension doubles.
///
/// Old gammas keep their indices; the two new spatial gammas become
/// γ_{d+1} and γ_{d+2}.
pub fn extend(gs: &GammaSystem) -> GammaSystem {
    let one = ExactMatrix::identity(gs.rep_dim);
    let (carrier, first_new) = match gs.extension {
        Extension::Sigma3 => (ExactMatrix::pauli(3), ExactMatrix::pauli(2)),
        Extension::Sigma2 => (ExactMatrix::pauli(2), ExactMatrix::pauli(3)),
    };
    let mut gammas: Vec<ExactMatrix> = gs.gammas.iter().map(|g| g.kron(&carrier)).collect();
    gammas.push(i_times(&one.kron(&first_new)));
    gammas.push(i_times(&one.kron(&ExactMatrix::pauli(1))));
    GammaSystem {
        d: gs.d + 2,
        rep_dim: gs.rep_dim * 2,
        extension: gs.extension,
        gammas,
    }
}

pub fn system_for(d: usize) -> Result<GammaSystem> {
    system_for_with(d, Extension::default())
}

pub fn system_for_with(d: usize, extension: Extension) -> Result<GammaSystem> {
    if d < 2 || d % 2 != 0 {
        return Err(Error::BadDimension(d));
    }
    let mut gs = base_system_with(extension);
    while gs.d < d {
        gs = extend(&gs);
    }
    Ok(gs)
}

impl GammaSystem {
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn rep_dim(&self) -> usize {
        self.rep_dim
    }

    pub fn extension(&self) -> Extension {
        self.extension
    }

    pub fn gammas(&self) -> &[ExactMatrix] {
        &self.gammas
    }

    pub fn gamma(&self, mu: usize) -> &ExactMatrix {
        &self.gammas[mu]
    }

    /// Diagonal metric entry: +1 for μ = 0, −1 otherwise.
    pub fn metric(&self, mu: usize) -> i64 {
        if mu == 0 {
            1
        } else {
            -1
        }
    }

    /// β = γ₀.
    pub fn beta(&self) -> ExactMatrix {
        self.gammas[0].clone()
    }

    /// α_k = γ₀γ_k for k = 1..=d (index 0 of the result is α₁).
    pub fn alphas(&self) -> Vec<ExactMatrix> {
        self.gammas[1..].iter().map(|g| &self.gammas[0] * g).collect()
    }

    pub fn relations_check(&self) -> Vec<RelationCheck> {
        let n = self.gammas.len();
        let mut out = Vec::with_capacity(n * (n + 1) / 2);
        for mu in 0..n {
            for nu in mu..n {
                let expected = if mu == nu { 2 * self.metric(mu) } else { 0 };
                let ac = self.gammas[mu]
                    .anticommutator(&self.gammas[nu])
                    .expect("gammas share a dimension");
                let holds = ac
                    == ExactMatrix::identity(self.rep_dim).scale(&ExactScalar::from_int(expected));
                out.push(RelationCheck {
                    mu,
                    nu,
                    expected,
                    holds,
                });
            }
        }
        out
    }

    pub fn relations_hold(&self) -> bool {
        self.relations_check().iter().all(|r| r.holds)
    }

    /// γ₀ Hermitian, spatial gammas anti-Hermitian.
    pub fn hermiticity_holds(&self) -> bool {
        self.gammas[0].is_hermitian() && self.gammas[1..].iter().all(ExactMatrix::is_anti_hermitian)
    }

    /// Ordered product of the gammas with the given (increasing) indices.
    pub fn product(&self, indices: &[usize]) -> ExactMatrix {
        indices
            .iter()
            .fold(ExactMatrix::identity(self.rep_dim), |acc, &i| &acc * &self.gammas[i])
    }
}

/// All subsets of `0..n` with at most `max_size` elements, ordered by size and
/// then lexicographically.
pub fn graded_subsets(n: usize, max_size: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    for k in 0..=max_size.min(n) {
        rec(0, n, k, &mut Vec::new(), &mut out);
    }
    out
}

/// Products of gammas over every index subset of size ≤ `max_degree`.
pub fn monomial_basis(gs: &GammaSystem, max_degree: usize) -> Result<Vec<CliffordMonomial>> {
    let generators = gs.gammas.len();
    if max_degree > generators {
        return Err(Error::DegreeTooLarge {
            degree: max_degree,
            generators,
        });
    }
    Ok(graded_subsets(generators, max_degree)
        .into_iter()
        .map(|s| CliffordMonomial {
            matrix: gs.product(&s),
            index_subset: s,
        })
        .collect())
}
