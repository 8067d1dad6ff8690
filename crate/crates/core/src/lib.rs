//! Exact computations with groups of mixed type over imperfect rational
//! function fields: coordinatizing towers, Timmesfeld's SL2(L), unipotent
//! groups of types G2 and C2, symplectic groups in characteristic 2, and
//! recovery of the field data from black-box groups.

pub mod funfield;
pub mod rank1;
pub mod reconstruct;
pub mod sample;
pub mod sp4;
pub mod tower;
pub mod unipotent;
