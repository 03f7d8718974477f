//! Many-body sector: symmetric polynomials, the Sutherland operator and Jack
//! polynomials, and Calogero-Sutherland eigenstates.

mod csm;
mod mpoly;
mod partition;
mod sutherland;

pub use csm::{csm_a_apply, csm_ground_energy, csm_state, CsmState};
pub use mpoly::{m_expansion, msym, MPoly};
pub use partition::{partitions_of, Partition};
pub use sutherland::{energy_formula, jack, sutherland_apply, sutherland_energy, JackResult};
