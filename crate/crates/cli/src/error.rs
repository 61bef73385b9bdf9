use duelbench::duel::ModelError;
use duelbench::factor::FactorError;
use duelbench::instances::InstanceError;
use duelbench::minimax::EngineError;
use duelbench::structure::StructureError;
use duelbench::zero_one::ZeroOneError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{source_name}: {message}")]
    Schema { source_name: String, message: String },
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Instance(#[from] InstanceError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Factor(#[from] FactorError),
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error(transparent)]
    ZeroOne(#[from] ZeroOneError),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub const EXIT_OK: u8 = 0;
pub const EXIT_INTERNAL: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_CAP: u8 = 3;
pub const EXIT_VERIFY: u8 = 4;

fn instance_code(e: &InstanceError) -> u8 {
    match e {
        InstanceError::CapExceeded { .. } => EXIT_CAP,
        _ => EXIT_USAGE,
    }
}

fn engine_code(e: &EngineError) -> u8 {
    match e {
        EngineError::ExplicitCap { .. } => EXIT_CAP,
        EngineError::NotMonotone | EngineError::Model(_) => EXIT_USAGE,
        EngineError::Instance(i) => instance_code(i),
        _ => EXIT_INTERNAL,
    }
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Schema { .. } | CliError::Model(_) => EXIT_USAGE,
            CliError::Engine(e) => engine_code(e),
            CliError::Instance(e) => instance_code(e),
            CliError::Factor(FactorError::SubsetCap { .. }) => EXIT_CAP,
            CliError::Factor(FactorError::Parameter(_)) => EXIT_USAGE,
            CliError::Structure(StructureError::NotMonotone) => EXIT_USAGE,
            CliError::ZeroOne(ZeroOneError::Engine(e)) => engine_code(e),
            CliError::ZeroOne(ZeroOneError::CostMode | ZeroOneError::NegativeValue { .. } | ZeroOneError::NegativeThreshold(_)) => {
                EXIT_USAGE
            }
            CliError::Io { .. } => EXIT_USAGE,
            _ => EXIT_INTERNAL,
        }
    }
}
