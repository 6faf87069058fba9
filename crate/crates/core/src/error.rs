use thiserror::Error;

use crate::expr::SymbolName;
use crate::syntax::Span;

/// Failures of the symbolic and numeric core.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MathError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("exponent {0} is too large")]
    ExponentTooLarge(i64),
    #[error("unbound symbol {0}")]
    UnboundSymbol(String),
    #[error("domain error: {0}")]
    DomainError(String),
    #[error("cannot differentiate {0}")]
    UnsupportedNode(String),
    #[error("cannot integrate the term {0}")]
    UnsupportedIntegrand(String),
    #[error("equation is not linear in {0}")]
    NonlinearEquation(String),
    #[error("equation does not determine {0}")]
    DegenerateEquation(String),
    #[error("free variable {0} prevents approximation")]
    FreeVariable(String),
    #[error("sum mixes different units: {0}")]
    MixedUnitsInSum(String),
    #[error("{0} is a unit and cannot be the unknown")]
    UnitAsUnknown(String),
    #[error("{0} is a unit and cannot be assigned")]
    AssignToUnit(String),
    #[error("an equation can only appear inside \\solve")]
    StrayEquation,
}

impl MathError {
    /// Stable machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            MathError::DivisionByZero => "DivisionByZero",
            MathError::ExponentTooLarge(_) => "ExponentTooLarge",
            MathError::UnboundSymbol(_) => "UnboundSymbol",
            MathError::DomainError(_) => "DomainError",
            MathError::UnsupportedNode(_) => "UnsupportedNode",
            MathError::UnsupportedIntegrand(_) => "UnsupportedIntegrand",
            MathError::NonlinearEquation(_) => "NonlinearEquation",
            MathError::DegenerateEquation(_) => "DegenerateEquation",
            MathError::FreeVariable(_) => "FreeVariable",
            MathError::MixedUnitsInSum(_) => "MixedUnitsInSum",
            MathError::UnitAsUnknown(_) => "UnitAsUnknown",
            MathError::AssignToUnit(_) => "AssignToUnit",
            MathError::StrayEquation => "StrayEquation",
        }
    }

    pub(crate) fn unit_as_unknown(name: &SymbolName) -> Self {
        MathError::UnitAsUnknown(name.to_string())
    }
}

/// Failures of tokenizing and parsing, always tied to a source span.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SyntaxError {
    #[error("unterminated passive text starting at byte {}", .span.start)]
    UnterminatedString { span: Span },
    #[error("unknown character {ch:?}")]
    UnknownCharacter { ch: char, span: Span },
    #[error("unknown command \\{name}")]
    UnknownCommand { name: String, span: Span },
    #[error("expected {expected}, found {found}")]
    Unexpected {
        expected: String,
        found: String,
        span: Span,
    },
    #[error("\\int needs a differential such as `d x` after its body")]
    MissingDifferential { span: Span },
}

impl SyntaxError {
    pub fn span(&self) -> Span {
        match self {
            SyntaxError::UnterminatedString { span }
            | SyntaxError::UnknownCharacter { span, .. }
            | SyntaxError::UnknownCommand { span, .. }
            | SyntaxError::Unexpected { span, .. }
            | SyntaxError::MissingDifferential { span } => *span,
        }
    }

    pub fn code(&self) -> &'static str {
        match self {
            SyntaxError::UnterminatedString { .. } => "UnterminatedString",
            SyntaxError::UnknownCharacter { .. } => "UnknownCharacter",
            SyntaxError::UnknownCommand { .. } | SyntaxError::Unexpected { .. } => "SyntaxError",
            SyntaxError::MissingDifferential { .. } => "MissingDifferential",
        }
    }
}
