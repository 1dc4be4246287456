//! Dirac-type Hamiltonians and the Poincaré generators as operator symbols.
//!
//! Symbols are polynomials in `t`, `x_k`, `p_k` with matrix coefficients,
//! always stored normal-ordered: every `x` factor sits to the left of every
//! `p` factor. Multiplication restores that order using `[x_k, p_l] = iδ_kl`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::clifford::{system_for_with, Extension, GammaSystem};
use crate::error::{Error, Result};
use crate::matrix::ExactMatrix;
use crate::scalar::{wire_rational, ExactScalar};

/// Exponent vector over `(t, x₁…x_d, p₁…p_d)`, read as `t^a · x^X · p^P`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Monomial {
    pub t: u32,
    pub x: Vec<u32>,
    pub p: Vec<u32>,
}

impl Monomial {
    pub fn one(d: usize) -> Self {
        Self {
            t: 0,
            x: vec![0; d],
            p: vec![0; d],
        }
    }

    /// `p_k` with 1-based `k`.
    pub fn p(d: usize, k: usize) -> Self {
        let mut m = Self::one(d);
        m.p[k - 1] = 1;
        m
    }

    /// `x_k` with 1-based `k`.
    pub fn x(d: usize, k: usize) -> Self {
        let mut m = Self::one(d);
        m.x[k - 1] = 1;
        m
    }

    pub fn t(d: usize) -> Self {
        let mut m = Self::one(d);
        m.t = 1;
        m
    }

    pub fn d(&self) -> usize {
        self.x.len()
    }

    pub fn is_constant(&self) -> bool {
        self.t == 0 && self.x.iter().chain(&self.p).all(|&e| e == 0)
    }

    pub fn max_exponent(&self) -> u32 {
        self.x.iter().chain(&self.p).copied().chain([self.t]).max().unwrap_or(0)
    }

    /// Total degree in `x` and `p` together (`t` excluded).
    pub fn orbital_degree(&self) -> u32 {
        self.x.iter().chain(&self.p).sum()
    }

    pub fn times(&self, o: &Self) -> Self {
        Self {
            t: self.t + o.t,
            x: self.x.iter().zip(&o.x).map(|(a, b)| a + b).collect(),
            p: self.p.iter().zip(&o.p).map(|(a, b)| a + b).collect(),
        }
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        let mut push = |name: String, e: u32| match e {
            0 => {}
            1 => parts.push(name),
            _ => parts.push(format!("{name}^{e}")),
        };
        push("t".into(), self.t);
        for (k, &e) in self.x.iter().enumerate() {
            push(format!("x{}", k + 1), e);
        }
        for (k, &e) in self.p.iter().enumerate() {
            push(format!("p{}", k + 1), e);
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("·"))
        }
    }
}

fn binomial(n: u32, k: u32) -> BigInt {
    (0..k).fold(BigInt::from(1), |acc, i| acc * (n - i) / (i + 1))
}

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::from(1), |acc, i| acc * i)
}

/// `(-i)^j`
fn minus_i_pow(j: u32) -> ExactScalar {
    match j % 4 {
        0 => ExactScalar::gaussian(1, 0),
        1 => ExactScalar::gaussian(0, -1),
        2 => ExactScalar::gaussian(-1, 0),
        _ => ExactScalar::gaussian(0, 1),
    }
}

/// Normal-ordered expansion of `p^a x^b` for a single coordinate:
/// `Σ_j C(a,j)·C(b,j)·j!·(−i)^j · x^(b−j) p^(a−j)`.
pub fn reorder_p_x(a: u32, b: u32) -> Vec<(u32, u32, ExactScalar)> {
    (0..=a.min(b))
        .map(|j| {
            let c = binomial(a, j) * binomial(b, j) * factorial(j);
            let coeff = &ExactScalar::real(BigRational::from_integer(c)) * &minus_i_pow(j);
            (b - j, a - j, coeff)
        })
        .collect()
}

/// Normal-ordered polynomial in `t, x, p` with square-matrix coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OperatorSymbol {
    d: usize,
    dim: usize,
    terms: BTreeMap<Monomial, ExactMatrix>,
}

#[derive(Serialize, Deserialize)]
struct WireTerm {
    monomial: Monomial,
    matrix: ExactMatrix,
}

#[derive(Serialize, Deserialize)]
struct WireSymbol {
    d: usize,
    dim: usize,
    terms: Vec<WireTerm>,
}

impl Serialize for OperatorSymbol {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        WireSymbol {
            d: self.d,
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .map(|(m, a)| WireTerm {
                    monomial: m.clone(),
                    matrix: a.clone(),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for OperatorSymbol {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = WireSymbol::deserialize(d)?;
        let mut s = OperatorSymbol::zero(w.d, w.dim);
        for t in w.terms {
            if t.monomial.d() != w.d || t.matrix.dim() != w.dim {
                return Err(serde::de::Error::custom("symbol term has wrong shape"));
            }
            s.add_term(t.monomial, t.matrix);
        }
        Ok(s)
    }
}

impl OperatorSymbol {
    pub fn zero(d: usize, dim: usize) -> Self {
        Self {
            d,
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn term(mono: Monomial, coeff: ExactMatrix) -> Self {
        let mut s = Self::zero(mono.d(), coeff.dim());
        s.add_term(mono, coeff);
        s
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, ExactMatrix> {
        &self.terms
    }

    pub fn coefficient(&self, m: &Monomial) -> ExactMatrix {
        self.terms
            .get(m)
            .cloned()
            .unwrap_or_else(|| ExactMatrix::zeros(self.dim))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, mono: Monomial, coeff: ExactMatrix) {
        debug_assert_eq!(mono.d(), self.d);
        let sum = match self.terms.remove(&mono) {
            Some(old) => &old + &coeff,
            None => coeff,
        };
        if !sum.is_zero() {
            self.terms.insert(mono, sum);
        }
    }

    pub fn plus(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (m, a) in &o.terms {
            out.add_term(m.clone(), a.clone());
        }
        out
    }

    pub fn minus(&self, o: &Self) -> Self {
        self.plus(&o.scale(&ExactScalar::from_int(-1)))
    }

    pub fn scale(&self, k: &ExactScalar) -> Self {
        self.map_coefficients(|a| a.scale(k))
    }

    /// `M · S`, the matrix acting from the left.
    pub fn left_mul(&self, m: &ExactMatrix) -> Self {
        self.map_coefficients(|a| m * a)
    }

    /// `S · M`, the matrix acting from the right.
    pub fn right_mul(&self, m: &ExactMatrix) -> Self {
        self.map_coefficients(|a| a * m)
    }

    pub fn map_coefficients(&self, f: impl Fn(&ExactMatrix) -> ExactMatrix) -> Self {
        let mut out = Self::zero(self.d, self.dim);
        for (mono, a) in &self.terms {
            out.add_term(mono.clone(), f(a));
        }
        out
    }

    /// Operator product, re-normal-ordered.
    pub fn mul(&self, o: &Self) -> Self {
        let mut out = Self::zero(self.d, self.dim);
        for (m1, a) in &self.terms {
            for (m2, b) in &o.terms {
                let ab = a * b;
                if ab.is_zero() {
                    continue;
                }
                // move p^(m1.p) past x^(m2.x), one coordinate at a time
                let mut partial: Vec<(Vec<u32>, Vec<u32>, ExactScalar)> =
                    vec![(Vec::new(), Vec::new(), ExactScalar::one())];
                for k in 0..self.d {
                    let expansions = reorder_p_x(m1.p[k], m2.x[k]);
                    let mut next = Vec::with_capacity(partial.len() * expansions.len());
                    for (xs, ps, c) in &partial {
                        for (xe, pe, ce) in &expansions {
                            let mut xs = xs.clone();
                            let mut ps = ps.clone();
                            xs.push(*xe);
                            ps.push(*pe);
                            next.push((xs, ps, c * ce));
                        }
                    }
                    partial = next;
                }
                for (xs, ps, c) in partial {
                    let middle = Monomial { t: 0, x: xs, p: ps };
                    let left = Monomial {
                        t: m1.t,
                        x: m1.x.clone(),
                        p: vec![0; self.d],
                    };
                    let right = Monomial {
                        t: m2.t,
                        x: vec![0; self.d],
                        p: m2.p.clone(),
                    };
                    out.add_term(left.times(&middle).times(&right), ab.scale(&c));
                }
            }
        }
        out
    }

    /// `S·O − O·S`
    pub fn commutator(&self, o: &Self) -> Self {
        self.mul(o).minus(&o.mul(self))
    }

    /// Largest exponent of any single variable across all terms.
    pub fn max_variable_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::max_exponent).max().unwrap_or(0)
    }

    /// Replaces every `p_k` with a number, leaving a pure matrix; valid only
    /// for symbols with no `t` or `x` dependence.
    pub fn at_momentum(&self, p: &[BigRational]) -> Result<ExactMatrix> {
        if p.len() != self.d {
            return Err(Error::MomentumLength {
                expected: self.d,
                found: p.len(),
            });
        }
        let mut out = ExactMatrix::zeros(self.dim);
        for (m, a) in &self.terms {
            if m.t != 0 || m.x.iter().any(|&e| e != 0) {
                return Err(Error::Unsupported(format!(
                    "symbol depends on {m}, cannot evaluate at a momentum"
                )));
            }
            let mut c = BigRational::from_integer(1.into());
            for (k, &e) in m.p.iter().enumerate() {
                for _ in 0..e {
                    c *= &p[k];
                }
            }
            out = &out + &a.scale(&ExactScalar::real(c));
        }
        Ok(out)
    }
}

impl fmt::Display for OperatorSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, a)) in self.terms.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            match a.scalar_multiple_of_identity() {
                Some(c) => write!(f, "({c})·I · {m}")?,
                None => write!(f, "{a} · {m}")?,
            }
        }
        Ok(())
    }
}

/// Which model family a classification row refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    /// `H⁺ = α·p + βκ`
    Single,
    /// `H⁻ = α·p − βκ`
    SingleMinus,
    /// Both branches joined: `α̃ = diag(α, α)`, `β̃ = diag(β, −β)`.
    Doubled,
    /// κ = 0
    Massless,
}

impl Variant {
    pub const ALL: [Variant; 4] = [
        Variant::Single,
        Variant::SingleMinus,
        Variant::Doubled,
        Variant::Massless,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Variant::Single => "single",
            Variant::SingleMinus => "single-",
            Variant::Doubled => "doubled",
            Variant::Massless => "massless",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.trim() {
            "single" | "single+" => Ok(Variant::Single),
            "single-" | "single-minus" => Ok(Variant::SingleMinus),
            "doubled" => Ok(Variant::Doubled),
            "massless" => Ok(Variant::Massless),
            other => Err(Error::UnknownVariant(other.to_string())),
        }
    }

    /// Builds the model for this variant. `mass` is ignored for massless.
    pub fn build(self, d: usize, mass: &BigRational, extension: Extension) -> Result<DiracModel> {
        let gs = system_for_with(d, extension)?;
        match self {
            Variant::Single => DiracModel::new(gs, mass.clone(), 1),
            Variant::SingleMinus => DiracModel::new(gs, mass.clone(), -1),
            Variant::Doubled => DiracModel::new(gs, mass.clone(), 1)?.doubled(),
            Variant::Massless => DiracModel::new(gs, BigRational::zero(), 1),
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// A Hamiltonian `H = Σ α_k p_k + branch·κ·β` together with its matrices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiracModel {
    gamma: GammaSystem,
    #[serde(with = "wire_rational")]
    mass: BigRational,
    branch: i8,
    doubled: bool,
    alphas: Vec<ExactMatrix>,
    beta: ExactMatrix,
}

/// Generator of the inhomogeneous group, indices 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Generator {
    P0,
    P(usize),
    J(usize, usize),
    J0(usize),
}

/// Generator families sharing one bracket sign.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum GeneratorClass {
    P0,
    Pk,
    Jkl,
    J0k,
}

impl GeneratorClass {
    pub const ALL: [GeneratorClass; 4] = [
        GeneratorClass::P0,
        GeneratorClass::Pk,
        GeneratorClass::Jkl,
        GeneratorClass::J0k,
    ];
}

impl Generator {
    pub fn class(self) -> GeneratorClass {
        match self {
            Generator::P0 => GeneratorClass::P0,
            Generator::P(_) => GeneratorClass::Pk,
            Generator::J(..) => GeneratorClass::Jkl,
            Generator::J0(_) => GeneratorClass::J0k,
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::P0 => write!(f, "P0"),
            Generator::P(k) => write!(f, "P{k}"),
            Generator::J(k, l) => write!(f, "J{k}{l}"),
            Generator::J0(k) => write!(f, "J0{k}"),
        }
    }
}

impl DiracModel {
    /// Single (undoubled) model; `branch` is +1 or −1.
    pub fn new(gamma: GammaSystem, mass: BigRational, branch: i8) -> Result<Self> {
        if mass.is_negative() {
            return Err(Error::NegativeMass);
        }
        if branch != 1 && branch != -1 {
            return Err(Error::Unsupported(format!("branch must be ±1, got {branch}")));
        }
        let alphas = gamma.alphas();
        let beta = gamma.beta();
        Ok(Self {
            gamma,
            mass,
            branch,
            doubled: false,
            alphas,
            beta,
        })
    }

    /// Eight-component style model: `α̃_k = diag(α_k, α_k)`,
    /// `β̃ = diag(branch·β, −branch·β)`; the result carries branch +1.
    pub fn doubled(&self) -> Result<Self> {
        if self.doubled {
            return Err(Error::AlreadyDoubled);
        }
        let alphas = self
            .alphas
            .iter()
            .map(|a| ExactMatrix::block_diag(a, a))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        let b = self.beta.scale(&ExactScalar::from_int(self.branch.into()));
        let beta = ExactMatrix::block_diag(&b, &-&b)?;
        Ok(Self {
            gamma: self.gamma.clone(),
            mass: self.mass.clone(),
            branch: 1,
            doubled: true,
            alphas,
            beta,
        })
    }

    pub fn gamma(&self) -> &GammaSystem {
        &self.gamma
    }

    pub fn d(&self) -> usize {
        self.gamma.d()
    }

    pub fn rep_dim(&self) -> usize {
        self.beta.dim()
    }

    pub fn mass(&self) -> &BigRational {
        &self.mass
    }

    pub fn branch(&self) -> i8 {
        self.branch
    }

    pub fn is_doubled(&self) -> bool {
        self.doubled
    }

    pub fn is_massless(&self) -> bool {
        self.mass.is_zero()
    }

    pub fn alphas(&self) -> &[ExactMatrix] {
        &self.alphas
    }

    /// α_k with 1-based `k`.
    pub fn alpha(&self, k: usize) -> &ExactMatrix {
        &self.alphas[k - 1]
    }

    pub fn beta(&self) -> &ExactMatrix {
        &self.beta
    }

    /// The momentum-independent part `branch·κ·β`.
    pub fn mass_term(&self) -> ExactMatrix {
        self.beta.scale(&ExactScalar::real(
            &self.mass * BigRational::from_integer(self.branch.into()),
        ))
    }

    /// Spin part `(i/2)·α_l·α_k` of `J_kl`.
    pub fn spin(&self, k: usize, l: usize) -> ExactMatrix {
        (self.alpha(l) * self.alpha(k)).scale(&ExactScalar::new(
            BigRational::zero(),
            BigRational::new(1.into(), 2.into()),
        ))
    }

    pub fn generators(&self) -> Vec<Generator> {
        let d = self.d();
        let mut out = vec![Generator::P0];
        out.extend((1..=d).map(Generator::P));
        for k in 1..=d {
            for l in k + 1..=d {
                out.push(Generator::J(k, l));
            }
        }
        out.extend((1..=d).map(Generator::J0));
        out
    }

    /// `H(p)` as an exact matrix.
    pub fn hamiltonian_at(&self, p: &[BigRational]) -> Result<ExactMatrix> {
        hamiltonian(self).at_momentum(p)
    }

    fn check_index(&self, k: usize) -> Result<()> {
        if k == 0 || k > self.d() {
            return Err(Error::IndexOutOfRange(format!("k = {k}, d = {}", self.d())));
        }
        Ok(())
    }
}

/// `Σ_k p_k·α_k + branch·κ·β`
pub fn hamiltonian(model: &DiracModel) -> OperatorSymbol {
    let d = model.d();
    let mut h = OperatorSymbol::zero(d, model.rep_dim());
    for k in 1..=d {
        h.add_term(Monomial::p(d, k), model.alpha(k).clone());
    }
    h.add_term(Monomial::one(d), model.mass_term());
    h
}

pub fn generator(model: &DiracModel, which: Generator) -> Result<OperatorSymbol> {
    let d = model.d();
    let n = model.rep_dim();
    let half_i = ExactScalar::new(BigRational::zero(), BigRational::new(1.into(), 2.into()));
    match which {
        Generator::P0 => Ok(hamiltonian(model)),
        Generator::P(k) => {
            model.check_index(k)?;
            Ok(OperatorSymbol::term(Monomial::p(d, k), ExactMatrix::identity(n)))
        }
        Generator::J(k, l) => {
            model.check_index(k)?;
            model.check_index(l)?;
            if k == l {
                return Err(Error::IndexOutOfRange(format!("J{k}{l} needs k ≠ l")));
            }
            let one = ExactMatrix::identity(n);
            let mut s = OperatorSymbol::zero(d, n);
            s.add_term(Monomial::x(d, k).times(&Monomial::p(d, l)), one.clone());
            s.add_term(Monomial::x(d, l).times(&Monomial::p(d, k)), -&one);
            s.add_term(Monomial::one(d), model.spin(k, l));
            Ok(s)
        }
        Generator::J0(k) => {
            model.check_index(k)?;
            // ½(x_k P₀ + P₀ x_k) = x_k P₀ − (i/2)α_k, hence the + sign below;
            // x_k·P₀ is already normal-ordered term by term
            let mut s = OperatorSymbol::term(
                Monomial::t(d).times(&Monomial::p(d, k)),
                ExactMatrix::identity(n),
            );
            let xk = Monomial::x(d, k);
            for (mono, a) in hamiltonian(model).terms() {
                s.add_term(xk.times(mono), -a);
            }
            s.add_term(Monomial::one(d), model.alpha(k).scale(&half_i));
            Ok(s)
        }
    }
}

/// `H·H`, which collapses to `(Σ p_k² + κ²)·I`.
pub fn square_of_hamiltonian(model: &DiracModel) -> OperatorSymbol {
    let h = hamiltonian(model);
    h.mul(&h)
}

/// Convenience: model for `(d, variant)` with the default gamma construction.
pub fn model_for(d: usize, variant: Variant, mass: &BigRational) -> Result<DiracModel> {
    variant.build(d, mass, Extension::default())
}
