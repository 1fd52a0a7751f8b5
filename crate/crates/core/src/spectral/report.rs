use crate::numerics::tol::PHYSICALITY;
use crate::numerics::RealMatrix;

/// Smallest eigenvalue of `cov + iΩ` recorded after a pipeline stage.
#[derive(Clone, Debug, PartialEq)]
pub struct StageCheck {
    pub stage: String,
    pub min_eigenvalue: f64,
}

impl StageCheck {
    pub fn is_physical(&self) -> bool {
        self.min_eigenvalue >= -PHYSICALITY
    }
}

/// Tabular metrics plus named field snapshots, ready to be written out.
#[derive(Clone, Debug)]
pub struct ExperimentReport {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub fields: Vec<(String, RealMatrix)>,
    pub physicality: Vec<StageCheck>,
}

impl ExperimentReport {
    pub fn all_physical(&self) -> bool {
        self.physicality.iter().all(StageCheck::is_physical)
    }
}
