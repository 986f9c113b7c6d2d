//! Effective quadratic forms of the spatially extended Dicke model.
//!
//! One field mode couples to two collective atomic modes (the symmetric
//! excitation and its spatial-phase partner), giving 3-mode quadratic
//! forms. Below the critical coupling `λc = √(ωω₀/2)` the normal phase has
//! no displacements; above it four super-radiant displacement branches
//! exist, built from the occupation scales `X± = (N/2)(1 ± ωω₀/2λ²)`. All
//! displacements are taken at gauge phase φ = 0, where every coefficient is
//! real; spectra do not depend on that choice.

use std::fmt;
use std::str::FromStr;

use ndarray::Array2;
use num_complex::Complex64;

use crate::bogoliubov::QuadraticBosonForm;
use crate::error::CoreError;

/// Phase branch selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    /// Undisplaced low-excitation phase.
    Normal,
    /// Displacements (β, γ) = (√X₋, √X₋): the physical super-radiant phase.
    Sr1,
    /// Displacements (√X₊, √X₋).
    Sr2,
    /// Displacements (√X₊, √X₊).
    Sr3,
    /// Displacements (√X₋, √X₊).
    Sr4,
}

impl Branch {
    /// The four super-radiant branches in index order.
    pub const SUPERRADIANT: [Branch; 4] = [Branch::Sr1, Branch::Sr2, Branch::Sr3, Branch::Sr4];

    /// Lower-case stable label used by serializers and the CLI.
    pub fn label(self) -> &'static str {
        match self {
            Branch::Normal => "normal",
            Branch::Sr1 => "sr1",
            Branch::Sr2 => "sr2",
            Branch::Sr3 => "sr3",
            Branch::Sr4 => "sr4",
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Branch {
    type Err = CoreError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "normal" => Ok(Branch::Normal),
            "sr1" => Ok(Branch::Sr1),
            "sr2" => Ok(Branch::Sr2),
            "sr3" => Ok(Branch::Sr3),
            "sr4" => Ok(Branch::Sr4),
            other => Err(CoreError::InvalidInput(format!(
                "unknown branch '{other}' (expected normal|sr1|sr2|sr3|sr4)"
            ))),
        }
    }
}

/// Physical inputs: field frequency ω, level splitting ω₀, coupling λ, and
/// atom count N. N is real-valued because the effective matrices depend on
/// it only through the ratios X±/N, and the offset c0 scales linearly.
#[derive(Debug, Clone, Copy)]
pub struct ModelParams {
    omega: f64,
    omega0: f64,
    lambda: f64,
    n_atoms: f64,
}

impl ModelParams {
    /// Validates positivity and finiteness of all parameters.
    pub fn new(omega: f64, omega0: f64, lambda: f64, n_atoms: f64) -> Result<Self, CoreError> {
        let all_finite =
            omega.is_finite() && omega0.is_finite() && lambda.is_finite() && n_atoms.is_finite();
        if !all_finite {
            return Err(CoreError::NonFinite("model parameters"));
        }
        if omega <= 0.0 || omega0 <= 0.0 {
            return Err(CoreError::InvalidInput(
                "omega and omega0 must be strictly positive".into(),
            ));
        }
        if lambda < 0.0 {
            return Err(CoreError::InvalidInput(
                "lambda must be non-negative".into(),
            ));
        }
        if n_atoms <= 0.0 {
            return Err(CoreError::InvalidInput(
                "n_atoms must be strictly positive".into(),
            ));
        }
        Ok(Self {
            omega,
            omega0,
            lambda,
            n_atoms,
        })
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn omega0(&self) -> f64 {
        self.omega0
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn n_atoms(&self) -> f64 {
        self.n_atoms
    }

    /// The normal-phase critical coupling `λc = √(ωω₀/2)`.
    pub fn lambda_critical(&self) -> f64 {
        (self.omega * self.omega0 / 2.0).sqrt()
    }

    /// Same parameters at a different coupling.
    pub fn with_lambda(&self, lambda: f64) -> Result<Self, CoreError> {
        Self::new(self.omega, self.omega0, lambda, self.n_atoms)
    }
}

/// Every intermediate of a super-radiant branch at gauge phase φ = 0.
#[derive(Debug, Clone, Copy)]
pub struct BranchCoefficients {
    /// Occupation scales `X± = (N/2)(1 ± ωω₀/2λ²)`.
    pub x_plus: f64,
    pub x_minus: f64,
    /// Field displacement `α = (2λ/ω)√(X₊X₋/N)`.
    pub alpha: f64,
    /// Atomic displacements (branch-dependent square roots of X±).
    pub beta: f64,
    pub gamma: f64,
    /// Depletion factors `k_e = N − β²`, `k_f = N − γ²`.
    pub k_e: f64,
    pub k_f: f64,
    /// Renormalized mode frequencies `ω_e = ω₀ + λαβ/√(N k_e)` and the
    /// k_f-symmetric `ω_f`; recorded for inspection, the final matrices
    /// use ω± instead.
    pub omega_e: f64,
    pub omega_f: f64,
    /// Matrix coefficients `ω± = ω₀ + 4λ²X±/(Nω)`, `B± = 2λ²X±/(Nω)`,
    /// `A± = λ(X∓ − X±/2)/√(NX∓)`, `C± = −λX±/(2√(NX∓))`.
    pub omega_plus: f64,
    pub omega_minus: f64,
    pub a_plus: f64,
    pub a_minus: f64,
    pub b_plus: f64,
    pub b_minus: f64,
    pub c_plus: f64,
    pub c_minus: f64,
    /// Extensive scalar offset
    /// `c0 = ωα² + ω₀(β² + γ²) − (2λα/√N)(β√k_e + γ√k_f)`.
    pub c0: f64,
}

/// Evaluates all branch intermediates. Fails below the critical coupling
/// (X₋ < 0) and when a depletion factor is not strictly positive (Sr2 through Sr4
/// at the boundary, where the macroscopically occupied mode empties the
/// available atom number).
pub fn branch_coefficients(
    params: &ModelParams,
    branch: Branch,
) -> Result<BranchCoefficients, CoreError> {
    if branch == Branch::Normal {
        return Err(CoreError::InvalidInput(
            "branch coefficients exist only for super-radiant branches".into(),
        ));
    }
    let lambda_c = params.lambda_critical();
    let l = params.lambda;
    if l < lambda_c {
        return Err(CoreError::DisplacementUndefined {
            lambda: l,
            lambda_c,
        });
    }
    let n = params.n_atoms;
    let omega = params.omega;
    let omega0 = params.omega0;
    let u = omega * omega0 / (2.0 * l * l);
    let x_plus = 0.5 * n * (1.0 + u);
    // Rounding guard: at λ == λc the product ωω₀/2λ² can land a few ulps
    // above 1, which would make X₋ negative and its square root NaN.
    let x_minus = (0.5 * n * (1.0 - u)).max(0.0);

    let alpha = (2.0 * l / omega) * (x_plus * x_minus / n).sqrt();
    let (beta, gamma) = match branch {
        Branch::Sr1 => (x_minus.sqrt(), x_minus.sqrt()),
        Branch::Sr2 => (x_plus.sqrt(), x_minus.sqrt()),
        Branch::Sr3 => (x_plus.sqrt(), x_plus.sqrt()),
        Branch::Sr4 => (x_minus.sqrt(), x_plus.sqrt()),
        Branch::Normal => unreachable!(),
    };
    let k_e = n - beta * beta;
    let k_f = n - gamma * gamma;
    if k_e <= 0.0 {
        return Err(CoreError::Depletion {
            name: "k_e",
            value: k_e,
        });
    }
    if k_f <= 0.0 {
        return Err(CoreError::Depletion {
            name: "k_f",
            value: k_f,
        });
    }

    let omega_e = omega0 + l * alpha * beta / (n * k_e).sqrt();
    let omega_f = omega0 + l * alpha * gamma / (n * k_f).sqrt();
    let omega_plus = omega0 + 4.0 * l * l * x_plus / (n * omega);
    let omega_minus = omega0 + 4.0 * l * l * x_minus / (n * omega);
    let b_plus = 2.0 * l * l * x_plus / (n * omega);
    let b_minus = 2.0 * l * l * x_minus / (n * omega);
    // The ± families divide by √(NX∓); at λ == λc exactly, X₋ = 0 makes
    // the + family infinite. Only Sr1 is constructible there, and it
    // consumes only the − family.
    let a_plus = l * (x_minus - 0.5 * x_plus) / (n * x_minus).sqrt();
    let a_minus = l * (x_plus - 0.5 * x_minus) / (n * x_plus).sqrt();
    let c_plus = -l * x_plus / (2.0 * (n * x_minus).sqrt());
    let c_minus = -l * x_minus / (2.0 * (n * x_plus).sqrt());

    let c0 = omega * alpha * alpha + omega0 * (beta * beta + gamma * gamma)
        - (2.0 * l * alpha / n.sqrt()) * (beta * k_e.sqrt() + gamma * k_f.sqrt());

    Ok(BranchCoefficients {
        x_plus,
        x_minus,
        alpha,
        beta,
        gamma,
        k_e,
        k_f,
        omega_e,
        omega_f,
        omega_plus,
        omega_minus,
        a_plus,
        a_minus,
        b_plus,
        b_minus,
        c_plus,
        c_minus,
        c0,
    })
}

fn real3(m: [[f64; 3]; 3]) -> Array2<Complex64> {
    Array2::from_shape_fn((3, 3), |(i, j)| Complex64::new(m[i][j], 0.0))
}

/// The normal-phase form: `A = [[ω, λ, 0], [λ, ω₀, 0], [0, 0, ω₀]]`,
/// `B = [[0, 0, λ], [0, 0, 0], [λ, 0, 0]]`, `c0 = 0`.
pub fn normal_form(params: &ModelParams) -> Result<QuadraticBosonForm, CoreError> {
    let (w, w0, l) = (params.omega, params.omega0, params.lambda);
    QuadraticBosonForm::new(
        real3([[w, l, 0.0], [l, w0, 0.0], [0.0, 0.0, w0]]),
        real3([[0.0, 0.0, l], [0.0, 0.0, 0.0], [l, 0.0, 0.0]]),
        0.0,
    )
}

/// The quadratic form of a super-radiant branch, assembled from its
/// coefficient set.
pub fn superradiant_form(
    params: &ModelParams,
    branch: Branch,
) -> Result<QuadraticBosonForm, CoreError> {
    let co = branch_coefficients(params, branch)?;
    let w = params.omega;
    let (a, b) = match branch {
        Branch::Sr1 => (
            [
                [w, co.a_minus, co.c_minus],
                [co.a_minus, co.omega_minus, 0.0],
                [co.c_minus, 0.0, co.omega_minus],
            ],
            [
                [0.0, co.c_minus, co.a_minus],
                [co.c_minus, co.b_minus, 0.0],
                [co.a_minus, 0.0, co.b_minus],
            ],
        ),
        Branch::Sr3 => (
            [
                [w, co.a_plus, co.c_plus],
                [co.a_plus, co.omega_plus, 0.0],
                [co.c_plus, 0.0, co.omega_plus],
            ],
            [
                [0.0, co.c_plus, co.a_plus],
                [co.c_plus, co.b_plus, 0.0],
                [co.a_plus, 0.0, co.b_plus],
            ],
        ),
        Branch::Sr2 => (
            [
                [w, co.a_plus, co.c_minus],
                [co.a_plus, co.omega_plus, 0.0],
                [co.c_minus, 0.0, co.omega_minus],
            ],
            [
                [0.0, co.c_plus, co.a_minus],
                [co.c_plus, co.b_plus, 0.0],
                [co.a_minus, 0.0, co.b_minus],
            ],
        ),
        Branch::Sr4 => (
            [
                [w, co.a_minus, co.c_plus],
                [co.a_minus, co.omega_minus, 0.0],
                [co.c_plus, 0.0, co.omega_plus],
            ],
            [
                [0.0, co.c_minus, co.a_plus],
                [co.c_minus, co.b_minus, 0.0],
                [co.a_plus, 0.0, co.b_plus],
            ],
        ),
        Branch::Normal => {
            return Err(CoreError::InvalidInput(
                "superradiant_form requires a super-radiant branch".into(),
            ))
        }
    };
    QuadraticBosonForm::new(real3(a), real3(b), co.c0)
}

/// Dispatches to [`normal_form`] or [`superradiant_form`].
pub fn branch_form(params: &ModelParams, branch: Branch) -> Result<QuadraticBosonForm, CoreError> {
    match branch {
        Branch::Normal => normal_form(params),
        _ => superradiant_form(params, branch),
    }
}

/// The φ = 0 classical displacement energy
/// `E(a, b, c) = ωa² + ω₀(b² + c²) − (2λa/√N)(b√(N−b²) + c√(N−c²))`,
/// whose stationary points fix the super-radiant displacements.
pub fn classical_energy(params: &ModelParams, a: f64, b: f64, c: f64) -> Result<f64, CoreError> {
    let n = params.n_atoms;
    if b * b > n || c * c > n {
        return Err(CoreError::Domain(format!(
            "displacements b={b}, c={c} exceed the atom budget √N = {}",
            n.sqrt()
        )));
    }
    Ok(params.omega * a * a + params.omega0 * (b * b + c * c)
        - (2.0 * params.lambda * a / n.sqrt())
            * (b * (n - b * b).sqrt() + c * (n - c * c).sqrt()))
}

/// The order parameter `⟨a†a⟩/N = |α|²/N`: zero below the critical
/// coupling, `(λ²/ω²)(1 − (ωω₀/2λ²)²)` above.
pub fn order_parameter(params: &ModelParams) -> f64 {
    if params.lambda < params.lambda_critical() {
        return 0.0;
    }
    let u = params.omega * params.omega0 / (2.0 * params.lambda * params.lambda);
    (params.lambda * params.lambda / (params.omega * params.omega)) * (1.0 - u * u)
}
