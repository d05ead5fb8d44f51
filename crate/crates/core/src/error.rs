use crate::q::Q;

/// Errors shared across the toolkit.
///
/// Validation failures that a check is *supposed* to find (a broken
/// triangle inequality, a cover that does not cover) are not errors;
/// they come back inside a [`crate::Report`] or a [`crate::Verdict`].
/// An `Error` means the operation could not produce its result at all.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Two subspaces live in different parent spaces.
    #[error("subspaces belong to different spaces: {left:?} vs {right:?}")]
    MismatchedParent { left: String, right: String },

    /// The group window does not contain the full metric ball of the
    /// requested radius, so word norms inside it cannot be trusted.
    #[error(
        "window {window:?} is not a full ball of radius {radius}: \
         {element:?} at norm {norm} has generator step {generator:?} leaving the window"
    )]
    WindowTooSmall {
        window: String,
        radius: Q,
        element: String,
        norm: Q,
        generator: String,
    },

    /// The requested value depends on data outside the certified window.
    #[error("uncertified at this window: {detail}")]
    Uncertified { detail: String },

    /// A ball that contains no points.
    #[error("ball of radius {radius} around the identity is empty")]
    EmptyBall { radius: Q },

    /// A certificate failed verification where a valid one was required.
    #[error("invalid certificate: {detail}")]
    CertificateInvalid { detail: String },

    /// An input violated a documented precondition of the operation.
    #[error("invalid input: {detail}")]
    InputInvalid { detail: String },

    /// A stated precondition of a verification failed.
    #[error("precondition failed: {detail}")]
    PreconditionFailed { detail: String },

    /// A search exhausted its node budget.
    #[error("search hit the node budget of {budget} nodes")]
    Timeout { budget: u64 },

    /// A boost schedule was asked to run a negative number of steps.
    #[error("boost schedule underflow: requested depth {requested} is below current depth {current}")]
    ScheduleUnderflow { requested: u32, current: u32 },

    /// A partition-of-unity denominator vanished: the point lies in no
    /// set of the cover.
    #[error("zero denominator: point {point:?} is interior to no set of the cover")]
    ZeroDenominator { point: String },

    /// Malformed structural data (shape, labels, references).
    #[error("malformed data: {detail}")]
    Format { detail: String },

    /// An internally constructed result failed its own verification.
    /// Indicates a bug in this crate, not in the input.
    #[error("internal verification failed: {detail}")]
    Internal { detail: String },
}

impl Error {
    pub fn format(detail: impl Into<String>) -> Self {
        Error::Format {
            detail: detail.into(),
        }
    }

    pub fn input(detail: impl Into<String>) -> Self {
        Error::InputInvalid {
            detail: detail.into(),
        }
    }
}
