pub mod numerics;
pub mod spectral;
pub mod floquet;
pub mod thermo;
pub mod weakcoupling;
pub mod nonmarkov;
pub mod cli;
