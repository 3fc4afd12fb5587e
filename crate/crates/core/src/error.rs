use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("foreign generator: {0}")]
    ForeignGenerator(String),
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("duplicate symbol `{0}`")]
    DuplicateSymbol(String),
    #[error("generator `{0}` has non-positive degree; degree slices are infinite")]
    InfiniteBasis(String),
    #[error("degree mismatch: {0}")]
    Degree(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("not homological: {generator} maps to {value} under D²")]
    NotHomological { generator: String, value: String },
    #[error("not a vector field: {0}")]
    NotVectorField(String),
    #[error("not closed, dH = {0}")]
    NotClosed(String),
    #[error("not a symmetry of Q: L_X H - dB = {0}")]
    NotSymmetric(String),
    #[error("not a hamiltonian element: {0}")]
    NotHamiltonian(String),
    #[error("H is not n-plectic: ι_v H = 0 for v = {0}")]
    NotNPlectic(String),
    #[error("structure constants are not antisymmetric at f^{0}_{{{1},{2}}}")]
    NotAntisymmetric(String, String, String),
    #[error("Jacobi identity fails at (a,b,c,d) = ({0}, {1}, {2}, {3})")]
    Jacobi(String, String, String, String),
    #[error("action is not a homomorphism: [X_{0}, X_{1}] - X_[{0},{1}] = {2}")]
    NotHomomorphism(String, String, String),
    #[error("element is not closed: {0}")]
    NotClosedElement(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("cannot decode derivation: {0}")]
    Decode(String),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("{0}")]
    Input(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True when the error is a mathematical verdict about well-formed input
    /// (a failed check), false for malformed input.
    pub fn is_check_failure(&self) -> bool {
        matches!(
            self,
            Error::NotHomological { .. }
                | Error::NotClosed(_)
                | Error::NotSymmetric(_)
                | Error::NotHamiltonian(_)
                | Error::NotNPlectic(_)
                | Error::NotAntisymmetric(..)
                | Error::Jacobi(..)
                | Error::NotHomomorphism(..)
                | Error::NotClosedElement(_)
        )
    }
}
