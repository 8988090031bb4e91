use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error in {op}: {detail}")]
    Domain { op: &'static str, detail: String },

    #[error("gamma function pole at x = {0}")]
    Pole(f64),

    #[error("eigen-solve for quadrature rule did not converge ({0} nodes)")]
    EigenSolve(usize),

    #[error("quadrature sub-range degenerates: {0}")]
    QuadratureDegenerate(String),

    #[error("Gram matrix is not positive definite (failing pivot at index {pivot})")]
    NotPositiveDefinite { pivot: usize },

    #[error("Gram matrix is not symmetric: |G[{i}][{j}] - G[{j}][{i}]| = {gap:e}")]
    Asymmetric { i: usize, j: usize, gap: f64 },

    #[error("non-finite right-hand side F at collocation index {index}")]
    NonFiniteForcing { index: usize },

    #[error("Gram entry ({i}, {j}) failed: {source}")]
    GramEntry {
        i: usize,
        j: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("problem '{0}' has no exact solution")]
    MissingExact(String),

    #[error("invalid input: {0}")]
    Validation(String),

    #[error("expression error: {0}")]
    Expression(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn domain(op: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            op,
            detail: detail.into(),
        }
    }

    /// True for errors caused by bad user input rather than numerical failure.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::Validation(_) | Error::Expression(_) | Error::MissingExact(_) | Error::Io(_)
        )
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        if self.is_validation() {
            1
        } else {
            2
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
