//! Discrete symmetries and their intertwiner matrices.
//!
//! A candidate symmetry acts as `S = τ ∘ K^a ∘ R` where `R` reflects `t`
//! and/or `x`, `K` is complex conjugation (present when antilinear) and `τ`
//! is a constant matrix. For a generator `G`, `S·G = T(G)·S` up to the
//! factor `τ`, where `T(G) = (K^a R) G (K^a R)⁻¹` is computed symbolically
//! by [`transform`]. Requiring `S` to commute (ε = +1) or anticommute
//! (ε = −1) with `G` therefore becomes the linear condition
//!
//! ```text
//! τ·T(G) − ε·G·τ = 0
//! ```
//!
//! identified coefficient by coefficient over the orbital monomials. The
//! solver collects these conditions for every generator and returns the
//! exact solution space for τ.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::clifford::{graded_subsets, Extension};
use crate::error::{AlgebraError, Error, Result};
use crate::linalg::{LinearForm, RowReducer};
use crate::matrix::ExactMatrix;
use crate::models::{generator, DiracModel, Generator, GeneratorClass, Monomial, OperatorSymbol, Variant};
use crate::scalar::{wire_rational, ExactScalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Bracket {
    Commute,
    Anticommute,
}

impl Bracket {
    /// ε in `τ·T(G) − ε·G·τ = 0`.
    pub fn sign(self) -> i8 {
        match self {
            Bracket::Commute => 1,
            Bracket::Anticommute => -1,
        }
    }

    pub fn from_sign(s: i8) -> Self {
        if s >= 0 {
            Bracket::Commute
        } else {
            Bracket::Anticommute
        }
    }

    fn compose(self, o: Self) -> Self {
        Self::from_sign(self.sign() * o.sign())
    }
}

/// Required bracket with each generator family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BracketSignature {
    #[serde(rename = "P0")]
    pub p0: Bracket,
    #[serde(rename = "Pk")]
    pub pk: Bracket,
    #[serde(rename = "Jkl")]
    pub jkl: Bracket,
    #[serde(rename = "J0k")]
    pub j0k: Bracket,
}

impl BracketSignature {
    pub fn uniform(b: Bracket) -> Self {
        Self {
            p0: b,
            pk: b,
            jkl: b,
            j0k: b,
        }
    }

    pub fn get(&self, class: GeneratorClass) -> Bracket {
        match class {
            GeneratorClass::P0 => self.p0,
            GeneratorClass::Pk => self.pk,
            GeneratorClass::Jkl => self.jkl,
            GeneratorClass::J0k => self.j0k,
        }
    }

    fn compose(&self, o: &Self) -> Self {
        Self {
            p0: self.p0.compose(o.p0),
            pk: self.pk.compose(o.pk),
            jkl: self.jkl.compose(o.jkl),
            j0k: self.j0k.compose(o.j0k),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SymmetryCandidate {
    pub name: String,
    pub antilinear: bool,
    pub t_sign: i8,
    pub x_sign: i8,
    pub signature: BracketSignature,
}

use Bracket::{Anticommute as A, Commute as C};

impl SymmetryCandidate {
    pub fn identity() -> Self {
        Self {
            name: "I".into(),
            antilinear: false,
            t_sign: 1,
            x_sign: 1,
            signature: BracketSignature::uniform(C),
        }
    }

    /// Space inversion `x → −x`.
    pub fn parity() -> Self {
        Self {
            name: "P".into(),
            antilinear: false,
            t_sign: 1,
            x_sign: -1,
            signature: BracketSignature {
                p0: C,
                pk: A,
                jkl: C,
                j0k: A,
            },
        }
    }

    /// Linear time reflection. `P_k` is required to commute: the
    /// anticommuting variant ([`Self::pauli_time_literal`]) can only be met
    /// by τ = 0 for purely orbital reasons.
    pub fn pauli_time() -> Self {
        Self {
            name: "Tp".into(),
            antilinear: false,
            t_sign: -1,
            x_sign: 1,
            signature: BracketSignature {
                p0: A,
                pk: C,
                jkl: C,
                j0k: A,
            },
        }
    }

    /// Linear time reflection anticommuting with every `P_k`.
    pub fn pauli_time_literal() -> Self {
        Self {
            name: "Tp-literal".into(),
            signature: BracketSignature {
                pk: A,
                ..Self::pauli_time().signature
            },
            ..Self::pauli_time()
        }
    }

    /// Antilinear time reflection.
    pub fn wigner_time() -> Self {
        Self {
            name: "Tw".into(),
            antilinear: true,
            t_sign: -1,
            x_sign: 1,
            signature: BracketSignature {
                p0: C,
                pk: A,
                jkl: A,
                j0k: C,
            },
        }
    }

    /// Antilinear charge conjugation, anticommuting with every generator.
    pub fn charge() -> Self {
        Self {
            name: "C".into(),
            antilinear: true,
            t_sign: 1,
            x_sign: 1,
            signature: BracketSignature::uniform(A),
        }
    }

    /// Product candidate `a∘b`: antilinearity XORs, signs and bracket
    /// signs multiply.
    pub fn compose(a: &Self, b: &Self) -> Self {
        if a.name == "I" {
            return b.clone();
        }
        if b.name == "I" {
            return a.clone();
        }
        Self {
            name: format!("{}{}", a.name, b.name),
            antilinear: a.antilinear ^ b.antilinear,
            t_sign: a.t_sign * b.t_sign,
            x_sign: a.x_sign * b.x_sign,
            signature: a.signature.compose(&b.signature),
        }
    }

    /// Built-in candidates by name: `I`, `P`, `Tp`, `Tp-literal`, `Tw`, `C`,
    /// `TpC`, `TwC`, `PTC` (the latter with the linear time reflection).
    pub fn builtin(name: &str) -> Result<Self> {
        let tp = Self::pauli_time();
        let c = Self::charge();
        Ok(match name {
            "I" => Self::identity(),
            "P" => Self::parity(),
            "Tp" => tp,
            "Tp-literal" => Self::pauli_time_literal(),
            "Tw" => Self::wigner_time(),
            "C" => c,
            "TpC" => Self::compose(&tp, &c),
            "TwC" => Self::compose(&Self::wigner_time(), &c),
            "PTC" => {
                let mut s = Self::compose(&Self::parity(), &Self::compose(&tp, &c));
                s.name = "PTC".into();
                s
            }
            other => return Err(Error::UnknownSymmetry(other.to_string())),
        })
    }

    /// Same constraint system, regardless of name.
    pub fn same_action(&self, o: &Self) -> bool {
        self.antilinear == o.antilinear
            && self.t_sign == o.t_sign
            && self.x_sign == o.x_sign
            && self.signature == o.signature
    }
}

impl fmt::Display for SymmetryCandidate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

/// Column order of classification tables.
pub const CLASSIFICATION_COLUMNS: [&str; 7] = ["P", "Tp", "Tw", "C", "TpC", "TwC", "PTC"];

/// Applies the coordinate reflections and, for antilinear candidates,
/// complex conjugation (`p → −p`, coefficients conjugated) to a symbol.
pub fn transform(sym: &OperatorSymbol, cand: &SymmetryCandidate) -> OperatorSymbol {
    let p_sign = if cand.antilinear { -cand.x_sign } else { cand.x_sign };
    sym.terms()
        .iter()
        .fold(OperatorSymbol::zero(sym.d(), sym.dim()), |mut acc, (m, a)| {
            let xdeg: u32 = m.x.iter().sum();
            let pdeg: u32 = m.p.iter().sum();
            let sign = i64::from(cand.t_sign).pow(m.t)
                * i64::from(cand.x_sign).pow(xdeg)
                * i64::from(p_sign).pow(pdeg);
            let coeff = if cand.antilinear { a.conj() } else { a.clone() };
            acc.add_term(m.clone(), if sign < 0 { -&coeff } else { coeff });
            acc
        })
}

/// Span τ is searched in.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Ansatz {
    /// Every `n×n` matrix.
    #[default]
    Full,
    /// `Σ a_μ α_μ + Σ a_μν α_μ α_ν` with α₀ read as β.
    Clifford2,
    /// Same with α₀ read as the identity.
    Clifford2Identity,
}

impl Ansatz {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "full" => Ok(Ansatz::Full),
            "clifford2" => Ok(Ansatz::Clifford2),
            "clifford2-identity" => Ok(Ansatz::Clifford2Identity),
            other => Err(Error::Unsupported(format!("unknown ansatz {other:?}"))),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Ansatz::Full => "full",
            Ansatz::Clifford2 => "clifford2",
            Ansatz::Clifford2Identity => "clifford2-identity",
        }
    }
}

/// Matrices spanning the degree-≤2 Clifford ansatz for a model.
pub fn ansatz_basis(model: &DiracModel, ansatz: Ansatz) -> Option<Vec<ExactMatrix>> {
    let n = model.rep_dim();
    let alpha0 = match ansatz {
        Ansatz::Full => return None,
        Ansatz::Clifford2 => model.beta().clone(),
        Ansatz::Clifford2Identity => ExactMatrix::identity(n),
    };
    let mut gens = vec![alpha0];
    gens.extend(model.alphas().iter().cloned());
    Some(
        graded_subsets(gens.len(), 2)
            .into_iter()
            .filter(|s| !s.is_empty())
            .map(|s| s.iter().fold(ExactMatrix::identity(n), |acc, &i| &acc * &gens[i]))
            .collect(),
    )
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveOptions {
    pub ansatz: Ansatz,
    /// Generator families whose conditions are imposed.
    pub classes: Vec<GeneratorClass>,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            ansatz: Ansatz::Full,
            classes: GeneratorClass::ALL.to_vec(),
        }
    }
}

impl SolveOptions {
    pub fn with_ansatz(ansatz: Ansatz) -> Self {
        Self {
            ansatz,
            ..Self::default()
        }
    }

    /// Only the translation generators `P₀`, `P_k`.
    pub fn translations_only() -> Self {
        Self {
            classes: vec![GeneratorClass::P0, GeneratorClass::Pk],
            ..Self::default()
        }
    }
}

/// One `τ·A − ε·B·τ = 0` block.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ConstraintBlock {
    pub generator: Generator,
    pub monomial: Monomial,
    pub transformed: ExactMatrix,
    pub original: ExactMatrix,
    pub sign: i8,
}

impl ConstraintBlock {
    /// `τ·A − ε·B·τ`
    pub fn apply(&self, tau: &ExactMatrix) -> ExactMatrix {
        let lhs = tau * &self.transformed;
        let rhs = (&self.original * tau).scale(&ExactScalar::from_int(self.sign.into()));
        &lhs - &rhs
    }

    /// Both coefficients scalar and the condition `(a − εb)·τ = 0` forces
    /// τ = 0 regardless of matrix structure.
    fn orbital_conflict(&self) -> bool {
        match (
            scalar_part(&self.transformed),
            scalar_part(&self.original),
        ) {
            (Some(a), Some(b)) => {
                let eb = b.scale(&BigRational::from_integer(self.sign.into()));
                !(&a - &eb).is_zero()
            }
            _ => false,
        }
    }

    /// Canonical key: the pair `(A, εB)` scaled so its first nonzero is 1.
    fn key(&self) -> (ExactMatrix, ExactMatrix) {
        let eb = self.original.scale(&ExactScalar::from_int(self.sign.into()));
        let lead = self
            .transformed
            .first_nonzero()
            .or_else(|| eb.first_nonzero())
            .map(|(_, v)| v.clone());
        match lead {
            Some(l) if !l.is_one() => {
                let inv = l.inv().expect("nonzero");
                (self.transformed.scale(&inv), eb.scale(&inv))
            }
            _ => (self.transformed.clone(), eb),
        }
    }
}

/// Zero matrices count as the scalar 0.
fn scalar_part(m: &ExactMatrix) -> Option<ExactScalar> {
    if m.is_zero() {
        Some(ExactScalar::zero())
    } else {
        m.scalar_multiple_of_identity()
    }
}

/// Conditions from every generator in `classes`, one block per monomial.
/// The generators `G` come from `target`, the transformed ones from `source`.
pub fn assemble_constraints(
    source: &DiracModel,
    target: &DiracModel,
    cand: &SymmetryCandidate,
    classes: &[GeneratorClass],
) -> Result<Vec<ConstraintBlock>> {
    check_shapes(source, target)?;
    let mut out = Vec::new();
    for g in source.generators() {
        if !classes.contains(&g.class()) {
            continue;
        }
        let from = transform(&generator(source, g)?, cand);
        let to = generator(target, g)?;
        let sign = cand.signature.get(g.class()).sign();
        let monos: std::collections::BTreeSet<&Monomial> =
            from.terms().keys().chain(to.terms().keys()).collect();
        for m in monos {
            out.push(ConstraintBlock {
                generator: g,
                monomial: m.clone(),
                transformed: from.coefficient(m),
                original: to.coefficient(m),
                sign,
            });
        }
    }
    Ok(out)
}

fn check_shapes(a: &DiracModel, b: &DiracModel) -> Result<()> {
    if a.rep_dim() != b.rep_dim() {
        return Err(AlgebraError::DimensionMismatch {
            left: a.rep_dim(),
            right: b.rep_dim(),
        }
        .into());
    }
    if a.d() != b.d() {
        return Err(AlgebraError::DimensionMismatch {
            left: a.d(),
            right: b.d(),
        }
        .into());
    }
    Ok(())
}

/// Summary of the model a solution refers to.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelSummary {
    pub d: usize,
    pub rep_dim: usize,
    #[serde(with = "wire_rational")]
    pub mass: BigRational,
    pub branch: i8,
    pub doubled: bool,
    pub extension: Extension,
}

impl ModelSummary {
    pub fn of(m: &DiracModel) -> Self {
        Self {
            d: m.d(),
            rep_dim: m.rep_dim(),
            mass: m.mass().clone(),
            branch: m.branch(),
            doubled: m.is_doubled(),
            extension: m.gamma().extension(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Outcome {
    Solved,
    /// A condition of the form `c·τ = 0` with scalar `c ≠ 0`, independent
    /// of any matrix structure.
    OrbitalInconsistent { generator: String, monomial: String },
}

/// How the invertibility verdict was reached.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InvertibilityCheck {
    /// Decided exactly (solution space of dimension ≤ 2).
    Exact,
    /// Search over pseudo-random integer combinations; a negative answer
    /// may in principle be wrong, a positive one never is.
    Sampled,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TauSolution {
    pub candidate: SymmetryCandidate,
    pub model: ModelSummary,
    pub ansatz: Ansatz,
    pub classes: Vec<GeneratorClass>,
    pub outcome: Outcome,
    pub dim: usize,
    pub basis: Vec<ExactMatrix>,
    /// First basis element scaled so its first nonzero entry is 1.
    pub representative: Option<ExactMatrix>,
    pub invertible_representative: Option<ExactMatrix>,
    pub invertibility_check: InvertibilityCheck,
    /// Proportionality constant of `S²` (τ² or τ·τ*) reduced to unit modulus.
    pub square_phase: Option<ExactScalar>,
    pub exists: bool,
}

/// Solves `τ·T(G) − ε·G·τ = 0` for all generators of one model.
pub fn solve_tau(model: &DiracModel, cand: &SymmetryCandidate) -> Result<TauSolution> {
    solve_tau_with(model, cand, &SolveOptions::default())
}

pub fn solve_tau_with(
    model: &DiracModel,
    cand: &SymmetryCandidate,
    opts: &SolveOptions,
) -> Result<TauSolution> {
    solve_intertwiner(model, model, cand, opts)
}

/// Like [`solve_tau_with`] but mapping solutions of `source` to solutions
/// of `target` (e.g. between the two energy branches).
pub fn solve_intertwiner(
    source: &DiracModel,
    target: &DiracModel,
    cand: &SymmetryCandidate,
    opts: &SolveOptions,
) -> Result<TauSolution> {
    let blocks = assemble_constraints(source, target, cand, &opts.classes)?;
    let n = source.rep_dim();
    let mut sol = TauSolution {
        candidate: cand.clone(),
        model: ModelSummary::of(source),
        ansatz: opts.ansatz,
        classes: opts.classes.clone(),
        outcome: Outcome::Solved,
        dim: 0,
        basis: Vec::new(),
        representative: None,
        invertible_representative: None,
        invertibility_check: InvertibilityCheck::Exact,
        square_phase: None,
        exists: false,
    };
    if let Some(b) = blocks.iter().find(|b| b.orbital_conflict()) {
        sol.outcome = Outcome::OrbitalInconsistent {
            generator: b.generator.to_string(),
            monomial: b.monomial.to_string(),
        };
        return Ok(sol);
    }

    let mut seen = HashSet::new();
    let unique: Vec<&ConstraintBlock> = blocks.iter().filter(|b| seen.insert(b.key())).collect();

    let basis = match ansatz_basis(source, opts.ansatz) {
        None => solve_full(&unique, n)?,
        Some(span) => solve_in_span(&unique, &span, n)?,
    };
    sol.dim = basis.len();
    sol.representative = basis.first().map(ExactMatrix::normalized);
    sol.basis = basis;

    let (inv, check) = find_invertible(&sol.basis);
    sol.invertibility_check = check;
    sol.exists = inv.is_some();
    sol.invertible_representative = inv;
    if sol.dim == 1 && sol.exists {
        let tau = sol.representative.as_ref().expect("dim 1");
        let sq = if cand.antilinear { tau * &tau.conj() } else { tau * tau };
        sol.square_phase = sq.scalar_multiple_of_identity().and_then(|c| c.unit_phase());
    }
    Ok(sol)
}

fn solve_full(blocks: &[&ConstraintBlock], n: usize) -> Result<Vec<ExactMatrix>> {
    let mut red = RowReducer::new(n * n);
    for b in blocks {
        let eps = ExactScalar::from_int(b.sign.into());
        // nonzeros of A by column, of B by row
        let mut a_cols: Vec<Vec<(usize, ExactScalar)>> = vec![Vec::new(); n];
        let mut b_rows: Vec<Vec<(usize, ExactScalar)>> = vec![Vec::new(); n];
        for i in 0..n {
            for j in 0..n {
                let a = b.transformed.get(i, j);
                if !a.is_zero() {
                    a_cols[j].push((i, a.clone()));
                }
                let bb = b.original.get(i, j);
                if !bb.is_zero() {
                    b_rows[i].push((j, -&(&eps * bb)));
                }
            }
        }
        for r in 0..n {
            for c in 0..n {
                // (τA)_{rc} = Σ_k τ_{rk} A_{kc};  (Bτ)_{rc} = Σ_k B_{rk} τ_{kc}
                let terms = a_cols[c]
                    .iter()
                    .map(|(k, v)| (r * n + k, v.clone()))
                    .chain(b_rows[r].iter().map(|(k, v)| (k * n + c, v.clone())));
                let form = LinearForm::from_terms(terms);
                if !form.is_zero() {
                    red.push(form)?;
                }
            }
        }
        if red.is_full_rank() {
            break;
        }
    }
    red.nullspace()
        .into_iter()
        .map(|v| ExactMatrix::from_flat(n, v).map_err(Error::from))
        .collect()
}

fn solve_in_span(
    blocks: &[&ConstraintBlock],
    span: &[ExactMatrix],
    n: usize,
) -> Result<Vec<ExactMatrix>> {
    let mut red = RowReducer::new(span.len());
    for b in blocks {
        let images: Vec<ExactMatrix> = span.iter().map(|m| b.apply(m)).collect();
        for idx in 0..n * n {
            let form = LinearForm::from_terms(
                images
                    .iter()
                    .enumerate()
                    .map(|(j, im)| (j, im.entries()[idx].clone())),
            );
            if !form.is_zero() {
                red.push(form)?;
            }
        }
    }
    let combos: Vec<ExactMatrix> = red
        .nullspace()
        .into_iter()
        .map(|c| {
            c.iter()
                .zip(span)
                .filter(|(w, _)| !w.is_zero())
                .fold(ExactMatrix::zeros(n), |acc, (w, m)| &acc + &m.scale(w))
        })
        .collect();
    Ok(canonical_span_basis(&combos, n))
}

/// Canonical basis of the span of `mats`: pivot rows of the reduced row
/// echelon form of their vectorizations.
pub fn canonical_span_basis(mats: &[ExactMatrix], n: usize) -> Vec<ExactMatrix> {
    let mut red = RowReducer::new(n * n);
    for m in mats {
        red.push(LinearForm::from_dense(m.entries()))
            .expect("widths agree");
    }
    red.rref()
        .into_iter()
        .map(|(_, row)| {
            let mut v = vec![ExactScalar::zero(); n * n];
            for (j, c) in row.terms() {
                v[*j] = c.clone();
            }
            ExactMatrix::from_flat(n, v).expect("n×n")
        })
        .collect()
}

fn combination(basis: &[ExactMatrix], weights: &[i64]) -> ExactMatrix {
    basis
        .iter()
        .zip(weights)
        .filter(|(_, &w)| w != 0)
        .fold(ExactMatrix::zeros(basis[0].dim()), |acc, (m, &w)| {
            &acc + &m.scale(&ExactScalar::from_int(w))
        })
}

/// Looks for an invertible element of `span(basis)`.
///
/// For one or two basis elements the answer is exact: `det(a·B₁ + b·B₂)` is
/// a homogeneous polynomial of degree n, so it vanishes identically iff it
/// vanishes at n + 1 distinct projective points.
pub fn find_invertible(basis: &[ExactMatrix]) -> (Option<ExactMatrix>, InvertibilityCheck) {
    match basis.len() {
        0 => (None, InvertibilityCheck::Exact),
        1 => {
            let m = basis[0].normalized();
            (m.is_invertible().then_some(m), InvertibilityCheck::Exact)
        }
        2 => {
            let n = basis[0].dim() as i64;
            let mut points = vec![[1, 0], [0, 1]];
            points.extend((1..=n).map(|j| [1, j]));
            let found = points
                .iter()
                .map(|w| combination(basis, w))
                .find(ExactMatrix::is_invertible);
            (found.map(|m| m.normalized()), InvertibilityCheck::Exact)
        }
        k => {
            let n = basis[0].dim() as i64;
            for b in basis {
                if b.is_invertible() {
                    return (Some(b.normalized()), InvertibilityCheck::Exact);
                }
            }
            let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
            let bound = 64 * n;
            for _ in 0..12 {
                let w: Vec<i64> = (0..k).map(|_| rng.gen_range(1..=bound)).collect();
                let m = combination(basis, &w);
                if m.is_invertible() {
                    return (Some(m.normalized()), InvertibilityCheck::Exact);
                }
            }
            (None, InvertibilityCheck::Sampled)
        }
    }
}

/// Residual `τ·T(G) − ε·G·τ` for every generator, computed on symbols
/// rather than through the assembled rows. Returns the generators whose
/// residual is nonzero.
pub fn verify_intertwiner(
    source: &DiracModel,
    target: &DiracModel,
    cand: &SymmetryCandidate,
    tau: &ExactMatrix,
    classes: &[GeneratorClass],
) -> Result<Vec<Generator>> {
    check_shapes(source, target)?;
    if tau.dim() != source.rep_dim() {
        return Err(AlgebraError::DimensionMismatch {
            left: tau.dim(),
            right: source.rep_dim(),
        }
        .into());
    }
    let mut bad = Vec::new();
    for g in source.generators() {
        if !classes.contains(&g.class()) {
            continue;
        }
        let eps = ExactScalar::from_int(cand.signature.get(g.class()).sign().into());
        let lhs = transform(&generator(source, g)?, cand).left_mul(tau);
        let rhs = generator(target, g)?.right_mul(tau).scale(&eps);
        if !lhs.minus(&rhs).is_zero() {
            bad.push(g);
        }
    }
    Ok(bad)
}

/// `verify_intertwiner` on one model with every generator family.
pub fn satisfies(model: &DiracModel, cand: &SymmetryCandidate, tau: &ExactMatrix) -> Result<bool> {
    Ok(verify_intertwiner(model, model, cand, tau, &GeneratorClass::ALL)?.is_empty())
}

/// A candidate together with a concrete τ.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymmetryOperator {
    pub candidate: SymmetryCandidate,
    pub tau: ExactMatrix,
}

impl SymmetryOperator {
    pub fn identity(n: usize) -> Self {
        Self {
            candidate: SymmetryCandidate::identity(),
            tau: ExactMatrix::identity(n),
        }
    }

    /// `S²` as a matrix: τ² (linear) or τ·τ* (antilinear).
    pub fn square(&self) -> ExactMatrix {
        if self.candidate.antilinear {
            &self.tau * &self.tau.conj()
        } else {
            &self.tau * &self.tau
        }
    }

    pub fn square_phase(&self) -> Option<ExactScalar> {
        self.square()
            .scalar_multiple_of_identity()
            .and_then(|c| c.unit_phase())
    }
}

/// `S₁∘S₂`: τ = τ₁·τ₂, with τ₂ conjugated when S₁ is antilinear.
pub fn compose(a: &SymmetryOperator, b: &SymmetryOperator) -> SymmetryOperator {
    let t2 = if a.candidate.antilinear {
        b.tau.conj()
    } else {
        b.tau.clone()
    };
    SymmetryOperator {
        candidate: SymmetryCandidate::compose(&a.candidate, &b.candidate),
        tau: &a.tau * &t2,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationCell {
    pub symmetry: String,
    pub exists: bool,
    pub dim: usize,
    pub outcome: Outcome,
    pub signature: BracketSignature,
    pub antilinear: bool,
    pub representative: Option<ExactMatrix>,
    /// For composites whose factors both exist: whether the product of the
    /// factors' τ lies in this cell's solution space.
    pub composition_verified: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationRecord {
    pub d: usize,
    pub variant: Variant,
    #[serde(with = "wire_rational")]
    pub mass: BigRational,
    pub extension: Extension,
    pub ansatz: Ansatz,
    pub cells: Vec<ClassificationCell>,
}

impl ClassificationRecord {
    pub fn cell(&self, symmetry: &str) -> Option<&ClassificationCell> {
        self.cells.iter().find(|c| c.symmetry == symmetry)
    }

    pub fn exists(&self, symmetry: &str) -> Option<bool> {
        self.cell(symmetry).map(|c| c.exists)
    }

    /// `symbol → exists` in column order.
    pub fn verdicts(&self) -> BTreeMap<String, bool> {
        self.cells
            .iter()
            .map(|c| (c.symmetry.clone(), c.exists))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassifyOptions {
    #[serde(with = "wire_rational")]
    pub mass: BigRational,
    pub extension: Extension,
    pub ansatz: Ansatz,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        Self {
            mass: BigRational::from_integer(1.into()),
            extension: Extension::default(),
            ansatz: Ansatz::Full,
        }
    }
}

fn factors(name: &str) -> Option<(&'static str, &'static str)> {
    match name {
        "TpC" => Some(("Tp", "C")),
        "TwC" => Some(("Tw", "C")),
        "PTC" => Some(("P", "TpC")),
        _ => None,
    }
}

/// Solves every column of [`CLASSIFICATION_COLUMNS`] for each `(d, variant)`.
/// Cells are evaluated in parallel; the output is ordered by the input lists.
pub fn classify(
    dims: &[usize],
    variants: &[Variant],
    opts: &ClassifyOptions,
) -> Result<Vec<ClassificationRecord>> {
    let rows: Vec<(usize, Variant)> = dims
        .iter()
        .flat_map(|&d| variants.iter().map(move |&v| (d, v)))
        .collect();
    let models: Vec<DiracModel> = rows
        .iter()
        .map(|&(d, v)| v.build(d, &opts.mass, opts.extension))
        .collect::<Result<_>>()?;

    let jobs: Vec<(usize, &str)> = (0..rows.len())
        .flat_map(|r| CLASSIFICATION_COLUMNS.iter().map(move |&c| (r, c)))
        .collect();
    let solved: Vec<((usize, &str), TauSolution)> = jobs
        .par_iter()
        .map(|&(r, c)| {
            let cand = SymmetryCandidate::builtin(c)?;
            let sol = solve_tau_with(&models[r], &cand, &SolveOptions::with_ansatz(opts.ansatz))?;
            Ok(((r, c), sol))
        })
        .collect::<Result<_>>()?;
    let by_key: BTreeMap<(usize, &str), TauSolution> = solved.into_iter().collect();

    let mut out = Vec::with_capacity(rows.len());
    for (r, &(d, variant)) in rows.iter().enumerate() {
        let mut cells = Vec::with_capacity(CLASSIFICATION_COLUMNS.len());
        for &c in &CLASSIFICATION_COLUMNS {
            let sol = &by_key[&(r, c)];
            let composition_verified = match factors(c) {
                Some((f1, f2)) => {
                    let (s1, s2) = (&by_key[&(r, f1)], &by_key[&(r, f2)]);
                    match (&s1.invertible_representative, &s2.invertible_representative) {
                        (Some(t1), Some(t2)) => {
                            let op = compose(
                                &SymmetryOperator {
                                    candidate: s1.candidate.clone(),
                                    tau: t1.clone(),
                                },
                                &SymmetryOperator {
                                    candidate: s2.candidate.clone(),
                                    tau: t2.clone(),
                                },
                            );
                            Some(satisfies(&models[r], &sol.candidate, &op.tau)?)
                        }
                        _ => None,
                    }
                }
                None => None,
            };
            cells.push(ClassificationCell {
                symmetry: c.to_string(),
                exists: sol.exists,
                dim: sol.dim,
                outcome: sol.outcome.clone(),
                signature: sol.candidate.signature,
                antilinear: sol.candidate.antilinear,
                representative: sol
                    .invertible_representative
                    .clone()
                    .or_else(|| sol.representative.clone()),
                composition_verified,
            });
        }
        out.push(ClassificationRecord {
            d,
            variant,
            mass: if variant == Variant::Massless {
                BigRational::zero()
            } else {
                opts.mass.clone()
            },
            extension: opts.extension,
            ansatz: opts.ansatz,
            cells,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::model_for;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn antilinear_transform_flips_momentum_and_conjugates() {
        let m = model_for(2, Variant::Single, &q(1)).unwrap();
        let s = OperatorSymbol::term(Monomial::p(2, 1), m.alpha(2).clone());
        let t = transform(&s, &SymmetryCandidate::charge());
        assert_eq!(t.coefficient(&Monomial::p(2, 1)), -&m.alpha(2).conj());
    }

    #[test]
    fn wigner_time_anticommutes_with_momenta_for_free() {
        let m = model_for(4, Variant::Single, &q(1)).unwrap();
        let tw = SymmetryCandidate::wigner_time();
        let pk = generator(&m, Generator::P(2)).unwrap();
        let t = transform(&pk, &tw);
        assert_eq!(t, pk.scale(&ExactScalar::from_int(-1)));
        let blocks = assemble_constraints(&m, &m, &tw, &[GeneratorClass::Pk]).unwrap();
        for b in blocks {
            // τ·(−I) + I·τ = 0 for every τ
            assert!(b.apply(&ExactMatrix::identity(4)).is_zero());
            assert!(!b.orbital_conflict());
        }
    }

    #[test]
    fn time_sign_only_touches_t_terms() {
        let m = model_for(4, Variant::Single, &q(1)).unwrap();
        let j = generator(&m, Generator::J0(1)).unwrap();
        let lin_t = SymmetryCandidate {
            name: "t".into(),
            antilinear: false,
            t_sign: -1,
            x_sign: 1,
            signature: BracketSignature::uniform(C),
        };
        let t = transform(&j, &lin_t);
        let tp1 = Monomial::t(4).times(&Monomial::p(4, 1));
        assert_eq!(t.coefficient(&tp1), -&j.coefficient(&tp1));
        for (mono, a) in j.terms() {
            if mono.t == 0 {
                assert_eq!(&t.coefficient(mono), a);
            }
        }
    }

    #[test]
    fn literal_pauli_time_is_orbitally_inconsistent() {
        let m = model_for(4, Variant::Single, &q(1)).unwrap();
        let sol = solve_tau(&m, &SymmetryCandidate::pauli_time_literal()).unwrap();
        assert!(matches!(sol.outcome, Outcome::OrbitalInconsistent { .. }));
        assert!(!sol.exists);
        assert_eq!(sol.dim, 0);
    }

    #[test]
    fn composing_with_identity() {
        let op = SymmetryOperator {
            candidate: SymmetryCandidate::wigner_time(),
            tau: ExactMatrix::pauli(2),
        };
        assert_eq!(compose(&SymmetryOperator::identity(2), &op), op);
        assert_eq!(compose(&op, &SymmetryOperator::identity(2)), op);
    }

    #[test]
    fn builtin_names() {
        for c in CLASSIFICATION_COLUMNS {
            assert_eq!(SymmetryCandidate::builtin(c).unwrap().name, c);
        }
        assert!(SymmetryCandidate::builtin("Q").is_err());
        let tpc = SymmetryCandidate::builtin("TpC").unwrap();
        assert!(tpc.same_action(&SymmetryCandidate::wigner_time()));
    }

    #[test]
    fn exact_invertibility_on_pencils() {
        // span{diag(1,0), diag(0,1)} contains I although neither element is invertible
        let e1 = ExactMatrix::diag(&[ExactScalar::one(), ExactScalar::zero()]);
        let e2 = ExactMatrix::diag(&[ExactScalar::zero(), ExactScalar::one()]);
        let (m, check) = find_invertible(&[e1.clone(), e2]);
        assert!(m.unwrap().is_invertible());
        assert_eq!(check, InvertibilityCheck::Exact);
        // nilpotent pencil: every element singular
        let n1 = ExactMatrix::from_gaussian(&[&[(0, 0), (1, 0)], &[(0, 0), (0, 0)]]);
        let (m, _) = find_invertible(&[e1, n1]);
        assert!(m.is_none());
    }
}
