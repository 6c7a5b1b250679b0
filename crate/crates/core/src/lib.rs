pub mod error;
pub mod exactq;
pub mod partitions;
pub mod orbits;
pub mod whitpair;
pub mod deform;
