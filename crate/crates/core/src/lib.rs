pub mod certify;
pub mod connection;
pub mod curvature;
pub mod groebner;
pub mod lie;
pub mod numeric;
pub mod poly;
pub mod reference;
pub mod registry;
pub mod report;
pub mod soliton;
