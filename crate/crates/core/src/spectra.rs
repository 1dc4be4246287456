//! Dispersion, rest-frame representation labels, mass-spread fibers and
//! density-matrix evolution on a fixed momentum fiber.
//!
//! Everything except [`DensityState`] and [`density_evolve`] is exact. The
//! eigenvalues ±√ω² are never formed; claims about them are phrased through
//! `H² = ω²·I` and `tr H = 0`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::clifford::system_for;
use crate::error::{Error, Result};
use crate::matrix::ExactMatrix;
use crate::models::DiracModel;
use crate::scalar::{ratio_to_f64, wire_rational, ExactScalar};

/// Exact evidence that `H(p)` has eigenvalues `±√ω²` with equal multiplicity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DispersionProof {
    pub d: usize,
    pub p: Vec<ExactScalar>,
    #[serde(with = "wire_rational")]
    pub omega_sq: BigRational,
    /// `H(p)² == ω²·I`
    pub square_is_scalar: bool,
    /// `tr H(p) == 0`
    pub traceless: bool,
    /// Multiplicity of each of `±√ω²` (rep_dim / 2 when both checks hold).
    pub multiplicity: usize,
}

impl DispersionProof {
    pub fn holds(&self) -> bool {
        self.square_is_scalar && self.traceless
    }
}

fn sum_of_squares(p: &[BigRational]) -> BigRational {
    p.iter().fold(BigRational::zero(), |acc, x| acc + x * x)
}

fn proof_for(h: &ExactMatrix, p: &[BigRational], omega_sq: BigRational) -> DispersionProof {
    let n = h.dim();
    let square_is_scalar =
        (h * h) == ExactMatrix::identity(n).scale(&ExactScalar::real(omega_sq.clone()));
    DispersionProof {
        d: p.len(),
        p: p.iter().cloned().map(ExactScalar::real).collect(),
        omega_sq,
        square_is_scalar,
        traceless: h.trace().is_zero(),
        multiplicity: n / 2,
    }
}

/// Checks `H(p)² = (Σp_k² + κ²)·I` and `tr H(p) = 0` exactly.
pub fn dispersion_check(model: &DiracModel, p: &[BigRational]) -> Result<DispersionProof> {
    let h = model.hamiltonian_at(p)?;
    let omega_sq = sum_of_squares(p) + model.mass() * model.mass();
    Ok(proof_for(&h, p, omega_sq))
}

/// Rest-frame label `D^±(j₁, j₂)` with its multiplicity.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RepLabel {
    pub energy_sign: i8,
    #[serde(with = "wire_rational")]
    pub j1: BigRational,
    #[serde(with = "wire_rational")]
    pub j2: BigRational,
    pub multiplicity: usize,
}

impl RepLabel {
    /// `(2j₁+1)(2j₂+1)`
    pub fn block_dim(&self) -> usize {
        let two = BigRational::from_integer(2.into());
        let a = (&two * &self.j1 + BigRational::one()).to_integer();
        let b = (&two * &self.j2 + BigRational::one()).to_integer();
        usize::try_from(a * b).expect("small label")
    }
}

/// The two commuting su(2) triples of the rest-frame rotation algebra of a
/// d = 4 model, as `(A₁..A₃, B₁..B₃)`, with
/// `A_i = ½(½ε_ijk S_jk + o·S_i4)`, `B_i = ½(½ε_ijk S_jk − o·S_i4)` and the
/// orientation `o = ±1` read off the top gamma product.
pub fn su2_pair(model: &DiracModel) -> Result<([ExactMatrix; 3], [ExactMatrix; 3])> {
    if model.d() != 4 {
        return Err(Error::Unsupported(format!(
            "rest-frame labels need d = 4, got d = {}",
            model.d()
        )));
    }
    // orientation: γ₀γ₁γ₂γ₃γ₄ = −o·I, so A and B do not depend on which
    // gamma construction produced the model
    let top = model
        .gamma()
        .product(&[0, 1, 2, 3, 4])
        .scalar_multiple_of_identity()
        .expect("top Clifford product is central in odd total dimension");
    let o = if top == ExactScalar::from_int(-1) { 1 } else { -1 };
    let half = ExactScalar::from_ratio(1, 2);
    let cyc = [(1, 2, 3), (2, 3, 1), (3, 1, 2)];
    let mk = |sign: i64| -> [ExactMatrix; 3] {
        cyc.map(|(i, j, k)| {
            // ½ε_ijk S_jk summed over ordered pairs is S_jk for cyclic (i, j, k)
            let rot = model.spin(j, k);
            let boost = model.spin(i, 4).scale(&ExactScalar::from_int(sign * o));
            (&rot + &boost).scale(&half)
        })
    };
    Ok((mk(1), mk(-1)))
}

pub fn casimir(triple: &[ExactMatrix; 3]) -> ExactMatrix {
    triple
        .iter()
        .fold(ExactMatrix::zeros(triple[0].dim()), |acc, a| &acc + &(a * a))
}

fn candidate_spins(max_block: usize) -> Vec<BigRational> {
    (0..max_block)
        .map(|twice| BigRational::new((twice as i64).into(), 2.into()))
        .collect()
}

fn j_times_j_plus_one(j: &BigRational) -> ExactScalar {
    ExactScalar::real(j * (j + BigRational::one()))
}

/// Rest-frame decomposition of `H(0)`'s eigenspaces under the two su(2)
/// Casimirs `A²`, `B²`.
pub fn little_group_labels(model: &DiracModel) -> Result<Vec<RepLabel>> {
    if !model.mass().is_positive() {
        return Err(Error::Unsupported(
            "rest-frame labels need a positive mass".into(),
        ));
    }
    let (a, b) = su2_pair(model)?;
    let (a2, b2) = (casimir(&a), casimir(&b));
    let n = model.rep_dim();
    let one = ExactMatrix::identity(n);
    // H(0)/κ squares to I, so its spectral projectors are (I ± H(0)/κ)/2
    let h0 = model.mass_term().scale(&ExactScalar::real(model.mass().recip()));
    let spins = candidate_spins(n);
    let mut out = Vec::new();
    for sign in [1i8, -1] {
        let proj = (&one + &h0.scale(&ExactScalar::from_int(sign.into())))
            .scale(&ExactScalar::from_ratio(1, 2));
        let complement = &one - &proj;
        for j1 in &spins {
            let ka = &a2 - &one.scale(&j_times_j_plus_one(j1));
            for j2 in &spins {
                let kb = &b2 - &one.scale(&j_times_j_plus_one(j2));
                let dim = joint_kernel_dim(&[&complement, &ka, &kb]);
                if dim == 0 {
                    continue;
                }
                let mut label = RepLabel {
                    energy_sign: sign,
                    j1: j1.clone(),
                    j2: j2.clone(),
                    multiplicity: 0,
                };
                label.multiplicity = dim / label.block_dim();
                out.push(label);
            }
        }
    }
    out.sort_by(|x, y| y.energy_sign.cmp(&x.energy_sign).then_with(|| y.j1.cmp(&x.j1)));
    Ok(out)
}

/// `dim ⋂ ker M_i`
fn joint_kernel_dim(ms: &[&ExactMatrix]) -> usize {
    let n = ms[0].dim();
    let mut red = crate::linalg::RowReducer::new(n);
    for m in ms {
        for row in m.rows() {
            red.push(crate::linalg::LinearForm::from_dense(&row))
                .expect("widths agree");
        }
    }
    n - red.rank()
}

/// `Σ_l multiplicity·(2j₁+1)(2j₂+1)`
pub fn labelled_dimension(labels: &[RepLabel]) -> usize {
    labels.iter().map(|l| l.multiplicity * l.block_dim()).sum()
}

/// Fixed-mass fiber `α·p + β·m` of the mass-spread equation, with the
/// d = 4 matrices restricted to k = 1..3.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiberHamiltonian {
    #[serde(with = "wire_rational")]
    pub m: BigRational,
    pub h: ExactMatrix,
    pub proof: DispersionProof,
}

pub fn sqrt_dirac_fiber(m: &BigRational, p3: &[BigRational; 3]) -> Result<FiberHamiltonian> {
    if !m.is_positive() {
        return Err(Error::Unsupported("fiber mass must be positive".into()));
    }
    let gs = system_for(4)?;
    let alphas = gs.alphas();
    let mut h = gs.beta().scale(&ExactScalar::real(m.clone()));
    for (a, pk) in alphas.iter().zip(p3) {
        h = &h + &a.scale(&ExactScalar::real(pk.clone()));
    }
    let omega_sq = sum_of_squares(p3) + m * m;
    let proof = proof_for(&h, p3, omega_sq);
    Ok(FiberHamiltonian {
        m: m.clone(),
        h,
        proof,
    })
}

/// Discretized mass distribution: weights `g` at sample points `m²`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MassProfile {
    samples: Vec<ProfileSample>,
    #[serde(with = "wire_rational")]
    support_lo: BigRational,
    #[serde(with = "wire_rational")]
    support_hi: BigRational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProfileSample {
    #[serde(with = "wire_rational")]
    pub m2: BigRational,
    #[serde(with = "wire_rational")]
    pub g: BigRational,
}

impl MassProfile {
    pub fn new(
        samples: Vec<(BigRational, BigRational)>,
        support: (BigRational, BigRational),
    ) -> Result<Self> {
        let (lo, hi) = support;
        if lo > hi {
            return Err(Error::InvalidProfile("empty support interval".into()));
        }
        if samples.iter().any(|(m2, _)| !m2.is_positive()) {
            return Err(Error::InvalidProfile("m² must be positive".into()));
        }
        if samples.iter().any(|(_, g)| g.is_negative()) {
            return Err(Error::InvalidProfile("weights must be nonnegative".into()));
        }
        if samples
            .iter()
            .any(|(m2, g)| !g.is_zero() && (m2 < &lo || m2 > &hi))
        {
            return Err(Error::InvalidProfile(
                "nonzero weight outside the support interval".into(),
            ));
        }
        if samples.iter().all(|(_, g)| g.is_zero()) {
            return Err(Error::InvalidProfile("no positive weight".into()));
        }
        Ok(Self {
            samples: samples
                .into_iter()
                .map(|(m2, g)| ProfileSample { m2, g })
                .collect(),
            support_lo: lo,
            support_hi: hi,
        })
    }

    /// Support taken as the hull of the positively weighted samples.
    pub fn from_pairs(samples: Vec<(BigRational, BigRational)>) -> Result<Self> {
        let weighted: Vec<&BigRational> = samples
            .iter()
            .filter(|(_, g)| g.is_positive())
            .map(|(m2, _)| m2)
            .collect();
        let (Some(lo), Some(hi)) = (weighted.iter().min(), weighted.iter().max()) else {
            return Err(Error::InvalidProfile("no positive weight".into()));
        };
        let support = ((*lo).clone(), (*hi).clone());
        Self::new(samples, support)
    }

    /// Single sample of weight 1 at `m₀²`.
    pub fn delta(m0_sq: BigRational) -> Result<Self> {
        Self::new(
            vec![(m0_sq.clone(), BigRational::one())],
            (m0_sq.clone(), m0_sq),
        )
    }

    pub fn samples(&self) -> &[ProfileSample] {
        &self.samples
    }

    pub fn support(&self) -> (&BigRational, &BigRational) {
        (&self.support_lo, &self.support_hi)
    }

    /// `Σ m²·g / Σ g`
    pub fn mean_mass_sq(&self) -> BigRational {
        let num = self
            .samples
            .iter()
            .fold(BigRational::zero(), |acc, s| acc + &s.m2 * &s.g);
        let den = self
            .samples
            .iter()
            .fold(BigRational::zero(), |acc, s| acc + &s.g);
        num / den
    }
}

/// One mass fiber `Ψ(p, m)` of a mass-spread state; the spinor has unit norm.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiberState {
    pub p: Vec<ExactScalar>,
    #[serde(with = "wire_rational")]
    pub m2: BigRational,
    pub spinor: Vec<ExactScalar>,
}

impl FiberState {
    pub fn new(p: Vec<BigRational>, m2: BigRational, spinor: Vec<ExactScalar>) -> Result<Self> {
        let norm = spinor
            .iter()
            .fold(BigRational::zero(), |acc, c| acc + c.norm_sqr());
        if !norm.is_one() {
            return Err(Error::InvalidProfile(format!(
                "fiber spinor has squared norm {norm}, expected 1"
            )));
        }
        Ok(Self {
            p: p.into_iter().map(ExactScalar::real).collect(),
            m2,
            spinor,
        })
    }
}

/// Result of applying `P²` fiberwise.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct P2Action {
    /// Each input fiber times its `m²`; zero-weight fibers are passed through.
    pub fibers: Vec<Vec<ExactScalar>>,
    /// `Σ g·m²·Ψ(m)`, the discretized direct-integral action.
    pub integrated: Vec<ExactScalar>,
    #[serde(with = "wire_rational")]
    pub expectation: BigRational,
}

pub fn profile_apply_p2(profile: &MassProfile, states: &[FiberState]) -> Result<P2Action> {
    if states.len() != profile.samples.len() {
        return Err(Error::InvalidProfile(format!(
            "{} fibers for {} samples",
            states.len(),
            profile.samples.len()
        )));
    }
    let width = states.first().map_or(0, |s| s.spinor.len());
    if states.iter().any(|s| s.spinor.len() != width) {
        return Err(Error::InvalidProfile("fibers differ in spinor size".into()));
    }
    let mut fibers = Vec::with_capacity(states.len());
    let mut integrated = vec![ExactScalar::zero(); width];
    for (sample, st) in profile.samples.iter().zip(states) {
        if st.m2 != sample.m2 {
            return Err(Error::InvalidProfile(format!(
                "fiber at m² = {} does not match sample m² = {}",
                st.m2, sample.m2
            )));
        }
        if sample.g.is_zero() {
            fibers.push(st.spinor.clone());
            continue;
        }
        let scaled: Vec<ExactScalar> = st.spinor.iter().map(|c| c.scale(&sample.m2)).collect();
        for (acc, c) in integrated.iter_mut().zip(&scaled) {
            *acc += &c.scale(&sample.g);
        }
        fibers.push(scaled);
    }
    Ok(P2Action {
        fibers,
        integrated,
        expectation: profile.mean_mass_sq(),
    })
}

/// Tolerance for the density-state invariants.
pub const DENSITY_TOL: f64 = 1e-12;

/// Density matrix on one momentum fiber (floating point).
#[derive(Clone, Debug, PartialEq)]
pub struct DensityState {
    pub p: Vec<f64>,
    pub rho: DMatrix<Complex64>,
}

impl DensityState {
    /// Validates unit trace, Hermiticity and positivity within [`DENSITY_TOL`].
    pub fn new(p: Vec<f64>, rho: DMatrix<Complex64>) -> Result<Self> {
        if !rho.is_square() {
            return Err(Error::InvalidDensity("matrix is not square".into()));
        }
        let tr = rho.trace();
        if (tr - Complex64::new(1.0, 0.0)).norm() > DENSITY_TOL {
            return Err(Error::InvalidDensity(format!("trace {tr} ≠ 1")));
        }
        let herm_err = hermiticity_error(&rho);
        if herm_err > DENSITY_TOL {
            return Err(Error::InvalidDensity(format!(
                "not Hermitian (max deviation {herm_err:e})"
            )));
        }
        let min_ev = eigenvalues(&rho).into_iter().fold(f64::INFINITY, f64::min);
        if min_ev < -DENSITY_TOL {
            return Err(Error::InvalidDensity(format!(
                "negative eigenvalue {min_ev:e}"
            )));
        }
        Ok(Self { p, rho })
    }

    /// `|ψ⟩⟨ψ|` for a normalized copy of `psi`.
    pub fn pure(p: Vec<f64>, psi: &[Complex64]) -> Result<Self> {
        let v = nalgebra::DVector::from_column_slice(psi);
        let norm = v.norm();
        if norm == 0.0 {
            return Err(Error::InvalidDensity("zero state vector".into()));
        }
        let v = v / Complex64::new(norm, 0.0);
        Self::new(p, &v * v.adjoint())
    }

    pub fn trace(&self) -> Complex64 {
        self.rho.trace()
    }

    pub fn hermiticity_error(&self) -> f64 {
        hermiticity_error(&self.rho)
    }

    /// Eigenvalues in ascending order.
    pub fn spectrum(&self) -> Vec<f64> {
        eigenvalues(&self.rho)
    }
}

fn hermiticity_error(m: &DMatrix<Complex64>) -> f64 {
    (m - m.adjoint()).iter().map(|c| c.norm()).fold(0.0, f64::max)
}

fn eigenvalues(m: &DMatrix<Complex64>) -> Vec<f64> {
    let herm = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    let mut ev: Vec<f64> = herm.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

pub fn to_complex_matrix(m: &ExactMatrix) -> DMatrix<Complex64> {
    let n = m.dim();
    DMatrix::from_fn(n, n, |i, j| {
        let (re, im) = m.get(i, j).to_f64_pair();
        Complex64::new(re, im)
    })
}

/// `H(p)` and `ω = √(Σp² + κ²)` in floating point.
pub fn hamiltonian_f64(model: &DiracModel, p: &[f64]) -> Result<(DMatrix<Complex64>, f64)> {
    if p.len() != model.d() {
        return Err(Error::MomentumLength {
            expected: model.d(),
            found: p.len(),
        });
    }
    let mut h = to_complex_matrix(&model.mass_term());
    for (k, pk) in p.iter().enumerate() {
        h += to_complex_matrix(model.alpha(k + 1)) * Complex64::new(*pk, 0.0);
    }
    let kappa = ratio_to_f64(model.mass());
    let omega = (p.iter().map(|x| x * x).sum::<f64>() + kappa * kappa).sqrt();
    Ok((h, omega))
}

/// `exp(−iHt) = cos(ωt)·I − i·sin(ωt)·H/ω`, valid because `H² = ω²·I`.
pub fn propagator(h: &DMatrix<Complex64>, omega: f64, t: f64) -> DMatrix<Complex64> {
    let n = h.nrows();
    let id = DMatrix::<Complex64>::identity(n, n);
    if omega == 0.0 {
        return id;
    }
    id * Complex64::new((omega * t).cos(), 0.0)
        - h * Complex64::new(0.0, (omega * t).sin() / omega)
}

/// Solves `i∂ρ/∂t = [H(p), ρ]` from `ρ₀` up to time `t` in `steps` equal
/// steps, each applying the exact propagator.
pub fn density_evolve(
    model: &DiracModel,
    rho0: &DensityState,
    t: f64,
    steps: usize,
) -> Result<DensityState> {
    let (h, omega) = hamiltonian_f64(model, &rho0.p)?;
    if h.nrows() != rho0.rho.nrows() {
        return Err(Error::InvalidDensity(format!(
            "state has size {}, model has {}",
            rho0.rho.nrows(),
            h.nrows()
        )));
    }
    // revalidate: the fields are public
    let start = DensityState::new(rho0.p.clone(), rho0.rho.clone())?;
    let steps = steps.max(1);
    let u = propagator(&h, omega, t / steps as f64);
    let u_dag = u.adjoint();
    let mut rho = start.rho;
    for _ in 0..steps {
        rho = &u * rho * &u_dag;
    }
    Ok(DensityState { p: start.p, rho })
}

/// `count` momenta with components `a/b`, `|a| ≤ 9`, `1 ≤ b ≤ 7`.
pub fn random_rational_momenta(seed: u64, count: usize, d: usize) -> Vec<Vec<BigRational>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            (0..d)
                .map(|_| {
                    let a: i64 = rng.gen_range(-9..=9);
                    let b: i64 = rng.gen_range(1..=7);
                    BigRational::new(a.into(), b.into())
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{model_for, Variant};

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn half() -> BigRational {
        BigRational::new(1.into(), 2.into())
    }

    #[test]
    fn dispersion_spot_values() {
        let m = model_for(4, Variant::Single, &q(3)).unwrap();
        let pr = dispersion_check(&m, &[q(0), q(0), q(0), q(4)]).unwrap();
        assert!(pr.holds());
        assert_eq!(pr.omega_sq, q(25));
        let m0 = model_for(2, Variant::Massless, &q(0)).unwrap();
        assert_eq!(dispersion_check(&m0, &[q(3), q(4)]).unwrap().omega_sq, q(25));
        assert!(dispersion_check(&m0, &[q(1)]).is_err());
    }

    #[test]
    fn labels_single_branches() {
        let plus = model_for(4, Variant::Single, &q(1)).unwrap();
        let l = little_group_labels(&plus).unwrap();
        assert_eq!(
            l.iter()
                .map(|x| (x.energy_sign, x.j1.clone(), x.j2.clone(), x.multiplicity))
                .collect::<Vec<_>>(),
            vec![(1, half(), q(0), 1), (-1, q(0), half(), 1)]
        );
        let minus = model_for(4, Variant::SingleMinus, &q(1)).unwrap();
        let l = little_group_labels(&minus).unwrap();
        assert_eq!(l[0].energy_sign, 1);
        assert_eq!((l[0].j1.clone(), l[0].j2.clone()), (q(0), half()));
        assert_eq!(labelled_dimension(&l), 4);
    }

    #[test]
    fn labels_independent_of_extension() {
        for v in [Variant::Single, Variant::SingleMinus, Variant::Doubled] {
            let a = v.build(4, &q(2), crate::Extension::Sigma3).unwrap();
            let b = v.build(4, &q(2), crate::Extension::Sigma2).unwrap();
            assert_eq!(little_group_labels(&a).unwrap(), little_group_labels(&b).unwrap());
        }
        let dbl = little_group_labels(&model_for(4, Variant::Doubled, &q(1)).unwrap()).unwrap();
        assert_eq!(dbl.len(), 4);
        assert!(dbl.iter().all(|l| l.multiplicity == 1));
        assert_eq!(labelled_dimension(&dbl), 8);
    }

    #[test]
    fn labels_reject_massless_and_wrong_dimension() {
        assert!(little_group_labels(&model_for(4, Variant::Massless, &q(0)).unwrap()).is_err());
        assert!(little_group_labels(&model_for(2, Variant::Single, &q(1)).unwrap()).is_err());
    }

    #[test]
    fn fiber_spot_value() {
        let f = sqrt_dirac_fiber(&q(5), &[q(0), q(0), q(12)]).unwrap();
        assert!(f.proof.holds());
        assert_eq!(f.proof.omega_sq, q(169));
    }

    #[test]
    fn profile_expectation() {
        let p = MassProfile::from_pairs(vec![(q(1), q(1)), (q(4), q(1))]).unwrap();
        assert_eq!(p.mean_mass_sq(), BigRational::new(5.into(), 2.into()));
        assert!(MassProfile::from_pairs(vec![(q(1), q(0))]).is_err());
        assert!(MassProfile::new(vec![(q(9), q(1))], (q(1), q(4))).is_err());
    }

    #[test]
    fn density_rejects_bad_input() {
        let bad = DMatrix::from_element(2, 2, Complex64::new(0.5, 0.0));
        assert!(DensityState::new(vec![0.0, 0.0], bad.clone() * Complex64::new(2.0, 0.0)).is_err());
        let mut nh = bad;
        nh[(0, 1)] = Complex64::new(0.5, 0.1);
        assert!(DensityState::new(vec![0.0, 0.0], nh).is_err());
    }
}
