use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use thiserror::Error;

/// Hamiltonians with known closed-form spectra.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyKind {
    /// `p² + x² + ix`
    PtShift,
    /// `p² + x² + x + ip`
    NonPtShift,
    /// `(1+iλ)p² + (1−iλ)x²`
    Scaled,
    /// `(1+iλ+e^{iλ})p² + (1−iλ+e^{−iλ})x²`
    ScaledExp,
    /// `p² + x²`
    Harmonic,
}

impl FamilyKind {
    pub const ALL: [FamilyKind; 5] = [
        FamilyKind::PtShift,
        FamilyKind::NonPtShift,
        FamilyKind::Scaled,
        FamilyKind::ScaledExp,
        FamilyKind::Harmonic,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            FamilyKind::PtShift => "pt_shift",
            FamilyKind::NonPtShift => "nonpt_shift",
            FamilyKind::Scaled => "scaled",
            FamilyKind::ScaledExp => "scaled_exp",
            FamilyKind::Harmonic => "harmonic",
        }
    }

    /// Hamiltonian text for this family; `l` is the λ parameter.
    pub fn hamiltonian(&self) -> &'static str {
        match self {
            FamilyKind::PtShift => "p^2+x^2+i*x",
            FamilyKind::NonPtShift => "p^2+x^2+x+i*p",
            FamilyKind::Scaled => "(1+i*l)*p^2+(1-i*l)*x^2",
            FamilyKind::ScaledExp => "(1+i*l+exp(i*l))*p^2+(1-i*l+exp(-i*l))*x^2",
            FamilyKind::Harmonic => "p^2+x^2",
        }
    }

    pub fn uses_lambda(&self) -> bool {
        matches!(self, FamilyKind::Scaled | FamilyKind::ScaledExp)
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown family '{0}' (expected one of pt_shift, nonpt_shift, scaled, scaled_exp, harmonic)")]
pub struct UnknownFamily(pub String);

impl FromStr for FamilyKind {
    type Err = UnknownFamily;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        FamilyKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| UnknownFamily(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalyticFamily {
    pub kind: FamilyKind,
    pub lambda: f64,
}

impl AnalyticFamily {
    pub fn new(kind: FamilyKind, lambda: f64) -> Self {
        Self { kind, lambda }
    }
}

/// Closed-form `E_n` for the family.
pub fn analytic_spectrum(family: &AnalyticFamily, n: usize) -> Complex64 {
    let odd = 2.0 * n as f64 + 1.0;
    let l = family.lambda;
    let e = match family.kind {
        FamilyKind::PtShift => 2.0 * n as f64 + 1.25,
        FamilyKind::NonPtShift | FamilyKind::Harmonic => odd,
        FamilyKind::Scaled => (1.0 + l * l).sqrt() * odd,
        FamilyKind::ScaledExp => (2.0 + l * l + 2.0 * l.cos() + 2.0 * l * l.sin()).sqrt() * odd,
    };
    Complex64::new(e, 0.0)
}
