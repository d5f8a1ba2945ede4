pub mod benchgen;
pub mod card;
pub mod engines;
pub mod format;
pub mod formula;
pub mod hitting_set;
pub mod mbd;
pub mod mcs;
pub mod par;
pub mod sat;
