use crate::error::Result;
use crate::lattice::SequenceData;
use crate::moment::{MomentData, SolverConfig};
use crate::polytope::{enumerate_faces, FaceLattice, Polytope};

/// A polytope with its face lattice, exact sequence and moment data.
#[derive(Debug, Clone)]
pub struct ToricSpace {
    pub polytope: Polytope,
    pub faces: FaceLattice,
    pub sequence: SequenceData,
    pub moment: MomentData,
    pub config: SolverConfig,
}

impl ToricSpace {
    pub fn new(polytope: Polytope, config: SolverConfig) -> Result<Self> {
        config.validate()?;
        let faces = enumerate_faces(&polytope)?;
        let sequence = SequenceData::new(&polytope)?;
        let moment = MomentData::new(&polytope, &faces, config.precision)?;
        Ok(ToricSpace { polytope, faces, sequence, moment, config })
    }

    pub fn with_defaults(polytope: Polytope) -> Result<Self> {
        Self::new(polytope, SolverConfig::default())
    }
}
