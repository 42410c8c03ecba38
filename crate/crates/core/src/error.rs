use thiserror::Error;

/// Every failure the library can report.
///
/// Each variant maps to a stable code string (see [`LatticeError::code`]) that
/// front ends emit verbatim.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("matrix is not square: {0}")]
    NotSquare(String),
    #[error("gram matrix is not symmetric at ({row}, {col})")]
    NonSymmetric { row: usize, col: usize },
    #[error("gram matrix is degenerate (determinant 0)")]
    Degenerate,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("zero vector is not allowed here")]
    ZeroVector,
    #[error("vectors are linearly dependent")]
    DependentVectors,
    #[error("rank mismatch: {0}")]
    RankMismatch(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
    #[error("element is not in the discriminant group: {0}")]
    ElementNotInGroup(String),
    #[error("not a subgroup: {0}")]
    NotASubgroup(String),
    #[error("enumeration budget exceeded: {needed} > {budget}")]
    BudgetExceeded { needed: String, budget: u64 },
    #[error("not isotropic: {0}")]
    NotIsotropic(String),
    #[error("vector is not primitive")]
    NotPrimitive,
    #[error("unknown catalog name: {0}")]
    UnknownName(String),
    #[error("bad parameter: {0}")]
    BadParameter(String),
    #[error("no probe vector has nonzero value")]
    NoAnchorPoint,
    #[error("values are not of the form c*q^n: {0}")]
    NotAFujikiForm(String),
    #[error("top form vanishes on the Kähler class")]
    DegenerateKahler,
    #[error("period line is zero")]
    ZeroLine,
    #[error("vector does not have positive square: {0}")]
    NotPositive(String),
    #[error("form has {s_plus} positive directions, expected 1")]
    WrongSignature { s_plus: usize },
    #[error("bad inputs: {0}")]
    BadInputs(String),
    #[error("divisor lemma violated: {0}")]
    LemmaViolation(String),
    #[error("sublattice has degenerate induced form")]
    DegenerateSublattice,
    #[error("generator {index} does not preserve the form")]
    InvalidGenerator { index: usize },
    #[error("orbit search merged distinct invariants: {0}")]
    InvariantMergeViolation(String),
    #[error("malformed input: {0}")]
    InputParse(String),
}

impl LatticeError {
    pub fn code(&self) -> &'static str {
        match self {
            LatticeError::NotSquare(_) => "NotSquare",
            LatticeError::NonSymmetric { .. } => "NonSymmetric",
            LatticeError::Degenerate => "Degenerate",
            LatticeError::DimensionMismatch { .. } => "DimensionMismatch",
            LatticeError::ZeroVector => "ZeroVector",
            LatticeError::DependentVectors => "DependentVectors",
            LatticeError::RankMismatch(_) => "RankMismatch",
            LatticeError::Internal(_) => "InternalError",
            LatticeError::ElementNotInGroup(_) => "ElementNotInGroup",
            LatticeError::NotASubgroup(_) => "NotASubgroup",
            LatticeError::BudgetExceeded { .. } => "BudgetExceeded",
            LatticeError::NotIsotropic(_) => "NotIsotropic",
            LatticeError::NotPrimitive => "NotPrimitive",
            LatticeError::UnknownName(_) => "UnknownName",
            LatticeError::BadParameter(_) => "BadParameter",
            LatticeError::NoAnchorPoint => "NoAnchorPoint",
            LatticeError::NotAFujikiForm(_) => "NotAFujikiForm",
            LatticeError::DegenerateKahler => "DegenerateKahler",
            LatticeError::ZeroLine => "ZeroLine",
            LatticeError::NotPositive(_) => "NotPositive",
            LatticeError::WrongSignature { .. } => "WrongSignature",
            LatticeError::BadInputs(_) => "BadInputs",
            LatticeError::LemmaViolation(_) => "LemmaViolation",
            LatticeError::DegenerateSublattice => "DegenerateSublattice",
            LatticeError::InvalidGenerator { .. } => "InvalidGenerator",
            LatticeError::InvariantMergeViolation(_) => "InvariantMergeViolation",
            LatticeError::InputParse(_) => "InputParseError",
        }
    }
}

pub type Result<T> = std::result::Result<T, LatticeError>;

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    #[test]
    fn codes_are_distinct() {
        let s = String::new;
        let all = [
            LatticeError::NotSquare(s()),
            LatticeError::NonSymmetric { row: 0, col: 1 },
            LatticeError::Degenerate,
            LatticeError::DimensionMismatch { expected: 1, got: 2 },
            LatticeError::ZeroVector,
            LatticeError::DependentVectors,
            LatticeError::RankMismatch(s()),
            LatticeError::Internal(s()),
            LatticeError::ElementNotInGroup(s()),
            LatticeError::NotASubgroup(s()),
            LatticeError::BudgetExceeded { needed: s(), budget: 0 },
            LatticeError::NotIsotropic(s()),
            LatticeError::NotPrimitive,
            LatticeError::UnknownName(s()),
            LatticeError::BadParameter(s()),
            LatticeError::NoAnchorPoint,
            LatticeError::NotAFujikiForm(s()),
            LatticeError::DegenerateKahler,
            LatticeError::ZeroLine,
            LatticeError::NotPositive(s()),
            LatticeError::WrongSignature { s_plus: 2 },
            LatticeError::BadInputs(s()),
            LatticeError::LemmaViolation(s()),
            LatticeError::DegenerateSublattice,
            LatticeError::InvalidGenerator { index: 0 },
            LatticeError::InvariantMergeViolation(s()),
            LatticeError::InputParse(s()),
        ];
        let codes: BTreeSet<&str> = all.iter().map(LatticeError::code).collect();
        assert_eq!(codes.len(), all.len());
    }
}
