use adcd_encoding::IsingHamiltonian;
use adcd_pauli::{Complex64, Pauli, PauliSum, PauliTerm};
use num_traits::ToPrimitive;

/// Default transverse-field strength; negative so that `|+⟩^⊗n` is the
/// ground state of `H_i`.
pub const DEFAULT_HX: f64 = -1.0;

/// Weight given to a k-local term `c_S` in the local CD denominator `R_j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LocalWeighting {
    /// `k`, as in `R_j = 2(h_x² + h_z² + 2ΣJ² + 3ΣK² + 4ΣL²)`.
    #[default]
    Locality,
    /// `1` for every term, which is the exact minimizer of the action over `Σ αⱼ σⱼʸ`.
    Uniform,
}

impl std::fmt::Display for LocalWeighting {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            LocalWeighting::Locality => "locality",
            LocalWeighting::Uniform => "uniform",
        })
    }
}

impl std::str::FromStr for LocalWeighting {
    type Err = crate::CdError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "locality" => Ok(LocalWeighting::Locality),
            "uniform" | "variational" => Ok(LocalWeighting::Uniform),
            other => Err(crate::CdError::UnknownKind(other.to_string())),
        }
    }
}

/// `H_ad(λ) = (1 − λ) H_i + λ H_f` with `H_i = h̃ₓ Σ σᵢˣ`.
#[derive(Debug, Clone, PartialEq)]
pub struct AnnealingProblem {
    n: usize,
    hx: f64,
    ising: IsingHamiltonian,
    /// `h̃ᵢᶻ` per site.
    fields: Vec<f64>,
    /// Z-mask and coefficient of every term acting on two or more sites.
    couplings: Vec<(u64, f64)>,
    h_final: PauliSum,
    h_initial: PauliSum,
    weighting: LocalWeighting,
}

pub(crate) fn single(n: usize, site: usize, op: Pauli, coeff: f64) -> PauliTerm {
    PauliTerm::on_sites(n, &[(site, op)], Complex64::new(coeff, 0.0)).expect("site within register")
}

impl AnnealingProblem {
    pub fn new(ising: IsingHamiltonian, hx: f64) -> Self {
        let n = ising.n();
        let mut fields = vec![0.0; n];
        let mut couplings = Vec::new();
        for (mask, c) in ising.terms() {
            let c = c.to_f64().expect("finite coefficient");
            match mask.count_ones() {
                0 => {}
                1 => fields[mask.trailing_zeros() as usize] = c,
                _ => couplings.push((mask, c)),
            }
        }
        let h_final = ising.to_pauli_sum();
        let h_initial = PauliSum::from_terms(n, (1..=n).map(|j| single(n, j, Pauli::X, hx))).expect("uniform register");
        AnnealingProblem { n, hx, ising, fields, couplings, h_final, h_initial, weighting: LocalWeighting::default() }
    }

    pub fn with_local_weighting(mut self, weighting: LocalWeighting) -> Self {
        self.weighting = weighting;
        self
    }

    pub fn local_weighting(&self) -> LocalWeighting {
        self.weighting
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn hx(&self) -> f64 {
        self.hx
    }

    pub fn ising(&self) -> &IsingHamiltonian {
        &self.ising
    }

    /// `h̃ⱼᶻ` for 1-based site `j`.
    pub fn field(&self, j: usize) -> f64 {
        self.fields[j - 1]
    }

    pub fn couplings(&self) -> &[(u64, f64)] {
        &self.couplings
    }

    pub fn h_final(&self) -> &PauliSum {
        &self.h_final
    }

    pub fn h_initial(&self) -> &PauliSum {
        &self.h_initial
    }

    pub fn h_ad(&self, lambda: f64) -> PauliSum {
        self.h_initial
            .scale_re(1.0 - lambda)
            .add(&self.h_final.scale_re(lambda))
            .expect("uniform register")
    }

    /// `∂_λ H_ad = H_f − H_i`.
    pub fn d_lambda_h(&self) -> PauliSum {
        self.h_final.sub(&self.h_initial).expect("uniform register")
    }
}
