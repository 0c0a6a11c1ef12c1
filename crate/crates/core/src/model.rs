//! System builders: parameters, Hamiltonians, and the dissipative
//! specification consumed by the Liouvillian and solver layers.
//!
//! All rates and detunings are dimensionless, measured in units of the
//! source emitter linewidth gamma_s.

use crate::error::{Error, Result};
use crate::hilbert::{embed, fock_annihilation, tls_lowering, Operator, Space};
use num_complex::Complex64 as C64;

/// Which physical configuration to build.
///
/// The three cascaded variants share the unidirectional source -> cavity
/// coupling; `ClassicalTc` replaces the quantum source with a coherent
/// drive on the cavity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    /// Driven source emitter -> cavity with two atoms.
    CascadedTc,
    /// Driven source emitter -> cavity with one atom.
    CascadedJc,
    /// Driven source emitter -> bare cavity.
    CascadedEmptyCavity,
    /// Coherently driven cavity with two atoms, no source subsystem.
    ClassicalTc,
}

impl Variant {
    pub fn has_source(self) -> bool {
        !matches!(self, Variant::ClassicalTc)
    }

    pub fn n_atoms(self) -> usize {
        match self {
            Variant::CascadedTc | Variant::ClassicalTc => 2,
            Variant::CascadedJc => 1,
            Variant::CascadedEmptyCavity => 0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Variant::CascadedTc => "cascaded_tc",
            Variant::CascadedJc => "cascaded_jc",
            Variant::CascadedEmptyCavity => "cascaded_empty_cavity",
            Variant::ClassicalTc => "classical_tc",
        }
    }
}

impl std::str::FromStr for Variant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cascaded_tc" => Ok(Variant::CascadedTc),
            "cascaded_jc" => Ok(Variant::CascadedJc),
            "cascaded_empty_cavity" => Ok(Variant::CascadedEmptyCavity),
            "classical_tc" => Ok(Variant::ClassicalTc),
            other => Err(Error::InvalidParam {
                name: "variant",
                message: format!(
                    "unknown variant `{other}` (expected cascaded_tc, cascaded_jc, \
                     cascaded_empty_cavity, or classical_tc)"
                ),
            }),
        }
    }
}

/// Physical parameters in gamma_s units.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelParams {
    /// Classical drive amplitude (on the source emitter, or directly on the
    /// cavity for `ClassicalTc`).
    pub xi: f64,
    /// Atom-cavity coupling.
    pub g: f64,
    /// Cavity decay rate.
    pub kappa: f64,
    /// Target-atom decay rate.
    pub gamma: f64,
    /// Source decay rate; 1 by normalization.
    pub gamma_s: f64,
    /// Cascade efficiency in [0, 1].
    pub mu: f64,
    /// Cavity-laser detuning.
    pub delta_c: f64,
    /// Source-laser detuning.
    pub delta_s: f64,
    /// Atom-laser detunings.
    pub delta_1: f64,
    pub delta_2: f64,
    pub variant: Variant,
    /// Cavity Fock truncation (levels 0..=n_max).
    pub n_max: usize,
}

impl ModelParams {
    /// Resonant baseline: every detuning zero, unit drive, two atoms.
    pub fn new(variant: Variant) -> Self {
        ModelParams {
            xi: 1.0,
            g: 1.25,
            kappa: 5.0,
            gamma: 0.375,
            gamma_s: 1.0,
            mu: 1.0,
            delta_c: 0.0,
            delta_s: 0.0,
            delta_1: 0.0,
            delta_2: 0.0,
            variant,
            n_max: 10,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let nonneg: [(&'static str, f64); 5] = [
            ("xi", self.xi),
            ("g", self.g),
            ("kappa", self.kappa),
            ("gamma", self.gamma),
            ("gamma_s", self.gamma_s),
        ];
        for (name, v) in nonneg {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::InvalidParam {
                    name,
                    message: format!("must be finite and >= 0, got {v}"),
                });
            }
        }
        if !(0.0..=1.0).contains(&self.mu) || !self.mu.is_finite() {
            return Err(Error::InvalidParam {
                name: "mu",
                message: format!("must lie in [0, 1], got {}", self.mu),
            });
        }
        for (name, v) in [
            ("delta_c", self.delta_c),
            ("delta_s", self.delta_s),
            ("delta_1", self.delta_1),
            ("delta_2", self.delta_2),
        ] {
            if !v.is_finite() {
                return Err(Error::InvalidParam {
                    name,
                    message: format!("must be finite, got {v}"),
                });
            }
        }
        if self.n_max < 1 {
            return Err(Error::InvalidParam {
                name: "n_max",
                message: format!("need n_max >= 1, got {}", self.n_max),
            });
        }
        Ok(())
    }

    /// Move the scan point: set delta_C while keeping the detuning offsets
    /// delta_s - delta_C and delta_j - delta_C fixed. A delta_C scan thus
    /// holds the source-cavity and atom-cavity detunings constant, which is
    /// the only self-consistent reading of detuned-scenario scans.
    pub fn at_delta_c(&self, delta_c: f64) -> Self {
        let mut p = self.clone();
        p.delta_s = delta_c + (self.delta_s - self.delta_c);
        p.delta_1 = delta_c + (self.delta_1 - self.delta_c);
        p.delta_2 = delta_c + (self.delta_2 - self.delta_c);
        p.delta_c = delta_c;
        p
    }

    pub fn at_g(&self, g: f64) -> Self {
        let mut p = self.clone();
        p.g = g;
        p
    }

    pub fn layout(&self) -> Result<Layout> {
        Layout::new(self.variant, self.n_max)
    }
}

/// Site assignment for a variant: which tensor factor holds what.
/// Ordering is always [source, cavity, atom 1, atom 2] with absent
/// subsystems skipped.
#[derive(Debug, Clone)]
pub struct Layout {
    space: Space,
    source: Option<usize>,
    cavity: usize,
    atoms: Vec<usize>,
    n_max: usize,
}

impl Layout {
    pub fn new(variant: Variant, n_max: usize) -> Result<Self> {
        if n_max < 1 {
            return Err(Error::InvalidParam {
                name: "n_max",
                message: format!("need n_max >= 1, got {n_max}"),
            });
        }
        let cav = n_max + 1;
        let (dims, source, cavity, atoms): (Vec<usize>, Option<usize>, usize, Vec<usize>) =
            match variant {
                Variant::CascadedTc => (vec![2, cav, 2, 2], Some(0), 1, vec![2, 3]),
                Variant::CascadedJc => (vec![2, cav, 2], Some(0), 1, vec![2]),
                Variant::CascadedEmptyCavity => (vec![2, cav], Some(0), 1, vec![]),
                Variant::ClassicalTc => (vec![cav, 2, 2], None, 0, vec![1, 2]),
            };
        Ok(Layout {
            space: Space::new(dims)?,
            source,
            cavity,
            atoms,
            n_max,
        })
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.total_dim()
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn cavity_site(&self) -> usize {
        self.cavity
    }

    pub fn source_site(&self) -> Option<usize> {
        self.source
    }

    pub fn atom_sites(&self) -> &[usize] {
        &self.atoms
    }

    /// Cavity annihilation operator embedded in the full space.
    pub fn cavity_annihilation(&self) -> Operator {
        let a = fock_annihilation(self.n_max).expect("n_max >= 1 by construction");
        embed(&a, self.cavity, &self.space).expect("cavity site valid by construction")
    }

    /// Source lowering operator, if the variant has a source.
    pub fn source_lowering(&self) -> Option<Operator> {
        self.source
            .map(|site| embed(&tls_lowering(), site, &self.space).expect("site valid"))
    }

    /// Lowering operator of target atom `j` (0-based).
    pub fn atom_lowering(&self, j: usize) -> Option<Operator> {
        self.atoms
            .get(j)
            .map(|&site| embed(&tls_lowering(), site, &self.space).expect("site valid"))
    }
}

/// Everything the superoperator assembler needs: the Hermitian Hamiltonian,
/// the collapse channels, and the optional unidirectional cascade bracket
/// -coeff { [a_dag, s rho] + [rho s_dag, a] }.
#[derive(Debug, Clone)]
pub struct LiouvillianSpec {
    pub hamiltonian: Operator,
    /// (rate, operator) pairs entering as rate * D[operator].
    pub collapse_terms: Vec<(f64, Operator)>,
    /// (coefficient, source lowering, cavity annihilation).
    pub cascade_term: Option<(f64, Operator, Operator)>,
}

impl LiouvillianSpec {
    pub fn dim(&self) -> usize {
        self.hamiltonian.dim()
    }
}

/// Source part: delta_s sigma_dag sigma + xi (sigma + sigma_dag).
/// Zero operator for variants without a source subsystem.
pub fn build_source_hamiltonian(p: &ModelParams) -> Result<Operator> {
    p.validate()?;
    let lay = p.layout()?;
    match lay.source_lowering() {
        Some(s) => {
            let sd = s.adjoint();
            let num = &sd * &s;
            let drive = &s + &sd;
            Ok(&num.scale(C64::new(p.delta_s, 0.0)) + &drive.scale(C64::new(p.xi, 0.0)))
        }
        None => Ok(Operator::zeros(lay.space().clone())),
    }
}

/// Target part: delta_C a_dag a + sum_j delta_j sigma_j_dag sigma_j
/// + sum_j g (sigma_j_dag a + sigma_j a_dag).
pub fn build_target_hamiltonian(p: &ModelParams) -> Result<Operator> {
    p.validate()?;
    let lay = p.layout()?;
    let a = lay.cavity_annihilation();
    let ad = a.adjoint();
    let mut h = (&ad * &a).scale(C64::new(p.delta_c, 0.0));
    for j in 0..lay.atom_sites().len() {
        let s = lay.atom_lowering(j).expect("atom exists");
        let sd = s.adjoint();
        let dj = if j == 0 { p.delta_1 } else { p.delta_2 };
        h = &h + &(&sd * &s).scale(C64::new(dj, 0.0));
        let exch = &(&sd * &a) + &(&s * &ad);
        h = &h + &exch.scale(C64::new(p.g, 0.0));
    }
    Ok(h)
}

/// Full dissipative specification of the configured variant.
///
/// Cascaded variants: H = H_source + H_target, collapse channels
/// (gamma_s, sigma_s), (kappa, a), (gamma, sigma_j), and the cascade term
/// with coefficient sqrt(mu gamma_s kappa). `ClassicalTc`: H = H_target
/// + xi (a + a_dag), no source channel, no cascade term.
pub fn build_liouvillian_spec(p: &ModelParams) -> Result<LiouvillianSpec> {
    p.validate()?;
    let lay = p.layout()?;
    let a = lay.cavity_annihilation();

    let mut h = &build_source_hamiltonian(p)? + &build_target_hamiltonian(p)?;
    if !p.variant.has_source() {
        let drive = &a + &a.adjoint();
        h = &h + &drive.scale(C64::new(p.xi, 0.0));
    }

    let mut collapse_terms = Vec::new();
    if let Some(s) = lay.source_lowering() {
        collapse_terms.push((p.gamma_s, s));
    }
    collapse_terms.push((p.kappa, a.clone()));
    for j in 0..lay.atom_sites().len() {
        collapse_terms.push((p.gamma, lay.atom_lowering(j).expect("atom exists")));
    }

    let cascade_term = lay
        .source_lowering()
        .map(|s| ((p.mu * p.gamma_s * p.kappa).sqrt(), s, a));

    Ok(LiouvillianSpec {
        hamiltonian: h,
        collapse_terms,
        cascade_term,
    })
}

/// Non-Hermitian no-jump generator:
/// (delta_s - i gamma_s/2) sigma_s_dag sigma_s + (delta_C - i kappa/2) a_dag a
/// + sum_j (delta_j - i gamma/2) sigma_j_dag sigma_j
/// + sum_j g (sigma_j_dag a + sigma_j a_dag) + xi (sigma_s + sigma_s_dag)
/// - i sqrt(gamma_s kappa) a_dag sigma_s.
pub fn build_effective_hamiltonian(p: &ModelParams) -> Result<Operator> {
    p.validate()?;
    if !p.variant.has_source() {
        return Err(Error::NotCascaded {
            variant: p.variant.name(),
        });
    }
    let lay = p.layout()?;
    let a = lay.cavity_annihilation();
    let ad = a.adjoint();
    let s = lay.source_lowering().expect("cascaded variant has a source");
    let sd = s.adjoint();

    let mut h = (&sd * &s).scale(C64::new(p.delta_s, -p.gamma_s / 2.0));
    h = &h + &(&ad * &a).scale(C64::new(p.delta_c, -p.kappa / 2.0));
    for j in 0..lay.atom_sites().len() {
        let sj = lay.atom_lowering(j).expect("atom exists");
        let sjd = sj.adjoint();
        let dj = if j == 0 { p.delta_1 } else { p.delta_2 };
        h = &h + &(&sjd * &sj).scale(C64::new(dj, -p.gamma / 2.0));
        let exch = &(&sjd * &a) + &(&sj * &ad);
        h = &h + &exch.scale(C64::new(p.g, 0.0));
    }
    h = &h + &(&s + &sd).scale(C64::new(p.xi, 0.0));
    let coupling = (p.gamma_s * p.kappa).sqrt();
    h = &h + &(&ad * &s).scale(C64::new(0.0, -coupling));
    Ok(h)
}
