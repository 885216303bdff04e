//! Named gate constructors.
//!
//! Every entry builds a `2^arity`-dimensional matrix. All gates except
//! `raw_had16` are unitary; `raw_had16` is the ±1 Sylvester-Hadamard
//! matrix without its `1/4` normalization, kept because its support is
//! what matters for graph analysis.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_8};
use std::fmt;

use thiserror::Error;

use crate::matrix::{ComplexMatrix, ComplexScalar, MatrixError};

/// Largest qubit count accepted by the `grover` family.
pub const MAX_GROVER_QUBITS: u32 = 12;

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("unknown gate `{name}`; known gates: {}", known.join(", "))]
    UnknownGate { name: String, known: Vec<String> },
    #[error("gate `{name}` takes {expected} parameter(s) ({signature}), got {found}")]
    Arity {
        name: String,
        expected: usize,
        found: usize,
        signature: String,
    },
    #[error("gate `{name}`: invalid parameter: {message}")]
    InvalidParameter { name: String, message: String },
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

/// Qubit count of a gate; may depend on the parameters (`grover(n)`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Arity {
    Fixed(u32),
    /// Given by the parameter at this index.
    FromParam(usize),
}

impl fmt::Display for Arity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Arity::Fixed(n) => write!(f, "{n}"),
            Arity::FromParam(_) => f.write_str("n"),
        }
    }
}

type Builder = fn(&[f64]) -> Result<ComplexMatrix, String>;

/// One catalog entry.
#[derive(Clone)]
pub struct GateSpec {
    pub name: &'static str,
    pub arity: Arity,
    pub params: &'static [&'static str],
    pub unitary: bool,
    pub summary: &'static str,
    builder: Builder,
}

impl GateSpec {
    /// `name(p1, p2)` or just `name`.
    pub fn signature(&self) -> String {
        if self.params.is_empty() {
            self.name.to_string()
        } else {
            format!("{}({})", self.name, self.params.join(", "))
        }
    }

    pub fn build(&self, params: &[f64]) -> Result<ComplexMatrix, CatalogError> {
        if params.len() != self.params.len() {
            return Err(CatalogError::Arity {
                name: self.name.into(),
                expected: self.params.len(),
                found: params.len(),
                signature: self.signature(),
            });
        }
        (self.builder)(params).map_err(|message| CatalogError::InvalidParameter {
            name: self.name.into(),
            message,
        })
    }
}

impl fmt::Debug for GateSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GateSpec")
            .field("name", &self.name)
            .field("arity", &self.arity)
            .field("params", &self.params)
            .finish()
    }
}

/// Read-only registry of gates, sorted by name.
#[derive(Clone, Debug)]
pub struct Catalog {
    gates: Vec<GateSpec>,
}

impl Default for Catalog {
    fn default() -> Self {
        Self::standard()
    }
}

impl Catalog {
    pub fn standard() -> Self {
        let mut gates = vec![
            gate("px", 1, &[], "Pauli-X", |_| Ok(pauli_x())),
            gate("py", 1, &[], "Pauli-Y", |_| Ok(pauli_y())),
            gate("pz", 1, &[], "Pauli-Z", |_| Ok(pauli_z())),
            gate("h", 1, &[], "Hadamard", |_| Ok(hadamard())),
            gate("had16", 4, &[], "order-16 Hadamard, normalized by 1/4", |_| {
                Ok(had16())
            }),
            GateSpec {
                unitary: false,
                ..gate("raw_had16", 4, &[], "order-16 Hadamard, entries ±1 (not unitary)", |_| {
                    Ok(raw_had16())
                })
            },
            gate("swap_alpha", 2, &["alpha"], "SWAP raised to the power alpha", |p| {
                Ok(swap_alpha(p[0]))
            }),
            gate("saneg12", 2, &[], "swap_alpha(-1/2), explicit entries", |_| {
                Ok(saneg12())
            }),
            gate("sapos12", 2, &[], "swap_alpha(1/2) = sqrt(SWAP), explicit entries", |_| {
                Ok(sapos12())
            }),
            gate("berkeley", 2, &[], "Berkeley B-gate, a = pi/8, b = 3pi/8", |_| {
                Ok(berkeley())
            }),
            gate("gr4", 2, &[], "two-qubit Grover diffusion, entries ±1/2", |_| Ok(gr4())),
            GateSpec {
                arity: Arity::FromParam(0),
                ..gate(
                    "grover",
                    0,
                    &["n"],
                    "n-qubit Grover diffusion 2J/2^n - I (extension)",
                    |p| grover_from_param(p[0]),
                )
            },
        ];
        gates.sort_by_key(|g| g.name);
        Self { gates }
    }

    pub fn get(&self, name: &str) -> Option<&GateSpec> {
        self.gates
            .binary_search_by_key(&name, |g| g.name)
            .ok()
            .map(|i| &self.gates[i])
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.gates.iter().map(|g| g.name)
    }

    pub fn iter(&self) -> impl Iterator<Item = &GateSpec> {
        self.gates.iter()
    }

    pub fn build_gate(&self, name: &str, params: &[f64]) -> Result<ComplexMatrix, CatalogError> {
        match self.get(name) {
            Some(spec) => spec.build(params),
            None => Err(CatalogError::UnknownGate {
                name: name.into(),
                known: self.names().map(String::from).collect(),
            }),
        }
    }
}

/// Builds a gate from the standard catalog.
pub fn build_gate(name: &str, params: &[f64]) -> Result<ComplexMatrix, CatalogError> {
    Catalog::standard().build_gate(name, params)
}

fn gate(
    name: &'static str,
    qubits: u32,
    params: &'static [&'static str],
    summary: &'static str,
    builder: Builder,
) -> GateSpec {
    GateSpec {
        name,
        arity: Arity::Fixed(qubits),
        params,
        unitary: true,
        summary,
        builder,
    }
}

fn c(re: f64, im: f64) -> ComplexScalar {
    ComplexScalar::new(re, im)
}

fn real(dim: usize, values: &[f64]) -> ComplexMatrix {
    ComplexMatrix::from_real(dim, values).expect("static gate table has dim^2 entries")
}

fn complex(dim: usize, values: Vec<ComplexScalar>) -> ComplexMatrix {
    ComplexMatrix::new(dim, values).expect("static gate table has dim^2 entries")
}

pub fn pauli_x() -> ComplexMatrix {
    real(2, &[0.0, 1.0, 1.0, 0.0])
}

/// Standard Pauli-Y, `[[0, -i], [i, 0]]`.
pub fn pauli_y() -> ComplexMatrix {
    let z = c(0.0, 0.0);
    complex(2, vec![z, c(0.0, -1.0), c(0.0, 1.0), z])
}

pub fn pauli_z() -> ComplexMatrix {
    real(2, &[1.0, 0.0, 0.0, -1.0])
}

pub fn hadamard() -> ComplexMatrix {
    let s = FRAC_1_SQRT_2;
    real(2, &[s, s, s, -s])
}

/// The ±1 order-16 Hadamard matrix; row `i`, column `j` is `(-1)^popcount(i & j)`.
pub fn raw_had16() -> ComplexMatrix {
    let values: Vec<f64> = (0..16u32)
        .flat_map(|i| {
            (0..16u32).map(move |j| if (i & j).count_ones() % 2 == 0 { 1.0 } else { -1.0 })
        })
        .collect();
    real(16, &values)
}

pub fn had16() -> ComplexMatrix {
    raw_had16().scale(c(0.25, 0.0))
}

/// `SWAP^alpha`, in the global-phase form
/// `e^{i t} [[e^{-i t}, 0, 0, 0], [0, cos t, -i sin t, 0], [0, -i sin t, cos t, 0], [0, 0, 0, e^{-i t}]]`
/// with `t = pi * alpha / 2`. Equivalent to the middle block
/// `[(1 + e^{i pi alpha}) / 2, (1 - e^{i pi alpha}) / 2]`.
pub fn swap_alpha(alpha: f64) -> ComplexMatrix {
    let t = FRAC_PI_2 * alpha;
    let phase = ComplexScalar::from_polar(1.0, t);
    let z = c(0.0, 0.0);
    let one = phase * ComplexScalar::from_polar(1.0, -t);
    let diag = phase * t.cos();
    let off = phase * c(0.0, -t.sin());
    complex(
        4,
        vec![
            one, z, z, z, //
            z, diag, off, z, //
            z, off, diag, z, //
            z, z, z, one,
        ],
    )
}

pub fn saneg12() -> ComplexMatrix {
    let (o, z) = (c(1.0, 0.0), c(0.0, 0.0));
    let (p, m) = (c(0.5, 0.5), c(0.5, -0.5));
    complex(4, vec![o, z, z, z, z, m, p, z, z, p, m, z, z, z, z, o])
}

pub fn sapos12() -> ComplexMatrix {
    let (o, z) = (c(1.0, 0.0), c(0.0, 0.0));
    let (p, m) = (c(0.5, 0.5), c(0.5, -0.5));
    complex(4, vec![o, z, z, z, z, p, m, z, z, m, p, z, z, z, z, o])
}

/// The SWAP permutation on two qubits.
pub fn swap() -> ComplexMatrix {
    real(
        4,
        &[
            1.0, 0.0, 0.0, 0.0, //
            0.0, 0.0, 1.0, 0.0, //
            0.0, 1.0, 0.0, 0.0, //
            0.0, 0.0, 0.0, 1.0,
        ],
    )
}

pub fn berkeley() -> ComplexMatrix {
    let (a, b) = (FRAC_PI_8, 3.0 * FRAC_PI_8);
    let z = c(0.0, 0.0);
    let (ca, sa) = (c(a.cos(), 0.0), c(0.0, a.sin()));
    let (cb, sb) = (c(b.cos(), 0.0), c(0.0, b.sin()));
    complex(
        4,
        vec![
            ca, z, z, sa, //
            z, cb, sb, z, //
            z, sb, cb, z, //
            sa, z, z, ca,
        ],
    )
}

pub fn gr4() -> ComplexMatrix {
    let values: Vec<f64> = (0..4)
        .flat_map(|i| (0..4).map(move |j| if i == j { -0.5 } else { 0.5 }))
        .collect();
    real(4, &values)
}

/// `2J/2^n - I`; `grover(2)` is [`gr4`].
pub fn grover(qubits: u32) -> ComplexMatrix {
    assert!(
        (1..=MAX_GROVER_QUBITS).contains(&qubits),
        "grover qubit count out of range"
    );
    let n = 1usize << qubits;
    let off = 2.0 / n as f64;
    let values: Vec<f64> = (0..n)
        .flat_map(|i| (0..n).map(move |j| if i == j { off - 1.0 } else { off }))
        .collect();
    real(n, &values)
}

fn grover_from_param(n: f64) -> Result<ComplexMatrix, String> {
    if n.fract() != 0.0 || n < 1.0 || n > MAX_GROVER_QUBITS as f64 {
        return Err(format!(
            "qubit count must be an integer in 1..={MAX_GROVER_QUBITS}, got {n}"
        ));
    }
    Ok(grover(n as u32))
}
