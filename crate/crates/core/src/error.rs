use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid class literal `{text}`: {reason}")]
    Parse { text: String, reason: String },

    #[error("k = {0} exceeds 8: only the plane blown up at k <= 8 points is a del Pezzo surface")]
    TooManyPoints(usize),

    #[error("class {class} has {class_k} exceptional coordinates but the surface has k = {surface_k}")]
    SurfaceMismatch {
        class: String,
        class_k: usize,
        surface_k: usize,
    },

    /// A caller broke an operation's precondition.
    #[error("{0}")]
    Precondition(String),

    /// `β·x₁ = 0`, so the cusp formula divides by zero.
    #[error("class {0} has zero anticanonical degree; the cusp formula is undefined")]
    ZeroDegree(String),

    #[error("N for {class} is underdetermined: every relation in the pool is degenerate ({diagnostics})")]
    Underdetermined { class: String, diagnostics: String },

    #[error("inconsistent result for {class}: {detail}")]
    Inconsistent { class: String, detail: String },

    #[error("cache {path}: {source}")]
    Cache {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    /// Errors caused by bad input rather than by a failed computation.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::Parse { .. }
                | Error::TooManyPoints(_)
                | Error::SurfaceMismatch { .. }
                | Error::Precondition(_)
                | Error::ZeroDegree(_)
        )
    }
}
