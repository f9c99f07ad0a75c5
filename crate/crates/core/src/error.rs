use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("denominator must be positive")]
    ZeroDenominator,

    #[error("cannot parse angle `{0}`")]
    AngleSyntax(String),

    #[error("cannot parse kneading sequence `{0}`")]
    KneadingSyntax(String),

    #[error("cannot parse internal address `{0}`")]
    AddressSyntax(String),

    #[error("cannot parse itinerary `{0}`")]
    ItinerarySyntax(String),

    #[error("cannot parse internal angle `{0}`")]
    FractionSyntax(String),

    #[error("malformed internal address: {0}")]
    MalformedAddress(String),

    #[error("kneading sequence has a ★ at position {0} where a 0/1 entry is required")]
    StarEncountered(usize),

    #[error("expected a ★-periodic kneading sequence, got {0}")]
    NotStarPeriodic(String),

    #[error("expected a periodic 0/1 kneading sequence, got {0}")]
    NotPeriodicKneading(String),

    #[error("kneading sequence {0} does not start with 1")]
    LeadingZero(String),

    #[error("angle {0} is not periodic")]
    NotPeriodic(String),

    #[error("angle 0 is the seed ray R(0)=R(1) and has no partner ray")]
    SeedAngle,

    #[error("numerator {p} is not coprime to denominator {q}: angle does not lie in a {q}-subwake at this entry")]
    InconsistentNumerator { p: u64, q: u64 },

    #[error("component of period {0} is not narrow")]
    NotNarrow(usize),

    #[error("no ray pair found for {0}")]
    NoRayPair(String),

    #[error("ray pair of period {0} bounds a satellite component")]
    SatelliteRoot(usize),

    #[error("ray pair of period {0} bounds a primitive component")]
    PrimitiveRoot(usize),

    #[error("itinerary {0} cannot be reduced: {1}")]
    Irreducible(String, String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// Errors caused by unparseable user input, as opposed to well-formed
    /// input that violates a mathematical precondition.
    pub fn is_syntax(&self) -> bool {
        matches!(
            self,
            Error::AngleSyntax(_)
                | Error::KneadingSyntax(_)
                | Error::AddressSyntax(_)
                | Error::ItinerarySyntax(_)
                | Error::FractionSyntax(_)
                | Error::ZeroDenominator
        )
    }
}
