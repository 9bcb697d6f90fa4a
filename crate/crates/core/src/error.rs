use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// `|α·w|` fell below the elimination floor; the explicit right-hand side
    /// does not exist there.
    #[error("singular elimination: |alpha*w| = {product:e} is below the floor {floor:e}")]
    SingularElimination { product: f64, floor: f64 },

    #[error("q = {q} is not a root of det M(q) (|det| = {det:e})")]
    NotARoot { q: f64, det: f64 },

    /// The trajectory never reached the base surface within the allowed span.
    #[error("no boundary crossing within |t| <= {max_span} (reached t = {t_reached})")]
    NoCrossing { max_span: f64, t_reached: f64 },

    #[error("step size underflow at t = {t} (h = {h:e})")]
    StepFailure { t: f64, h: f64 },

    #[error("eigenvalue solve failed: {0}")]
    Eigen(String),
}
