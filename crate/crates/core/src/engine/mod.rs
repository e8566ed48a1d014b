//! Engine parameters, thermal occupations and the 5×5 generator.

mod generator;
mod params;
mod thermal;

pub use generator::{build_generator, build_generator_variant, Generator, Matrix5, Vector5, BASIS};
pub use params::{BathSpec, CavitySpec, EngineParams, GeneratorVariant};
pub use thermal::{
    bose_einstein, coherence_param_from_angle, cold_temperature, occupations, temperature_for_occupation, Occupations,
};
