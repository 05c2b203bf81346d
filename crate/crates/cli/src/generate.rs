//! Reproducible random instances.
//!
//! The stream is SplitMix64 seeded with the user seed as its initial state. Each
//! output `u` becomes the double `(u >> 11) * 2^-53` in `[0, 1)`. For every ball
//! the generator draws the `n` center coordinates (`-1 + 2 t` each) and then the
//! radius (`radius_max * t`). A draw that contains, or is contained in, a ball
//! accepted earlier is discarded and drawn again from the continuing stream.

use minball::{Ball, Instance};
use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;

use crate::error::{CliError, Result};
use crate::format::{InstanceFile, Metadata};

/// Name recorded in the metadata of generated files.
pub const GENERATOR_NAME: &str = "splitmix64-uniform";

/// Upper limit on discarded draws per instance.
pub const MAX_REJECTS: usize = 1000;

/// Distribution of the centers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Distribution {
    /// Independent uniform coordinates in `[-1, 1]`.
    #[default]
    Uniform,
}

/// Settings of [`generate`].
#[derive(Debug, Clone, PartialEq)]
pub struct GenerateSpec {
    pub dim: usize,
    pub count: usize,
    pub radius_max: f64,
    pub seed: u64,
    pub distribution: Distribution,
}

/// Uniform doubles in `[0, 1)` from SplitMix64.
#[derive(Debug, Clone)]
pub struct UnitStream {
    rng: SplitMix64,
}

impl UnitStream {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: SplitMix64::seed_from_u64(seed),
        }
    }

    /// Next raw 64-bit output.
    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    /// Next double `(u >> 11) * 2^-53`.
    pub fn next_unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}

fn nested(a: &Ball, b: &Ball) -> bool {
    a.contains(b) || b.contains(a)
}

/// Draws an instance in which no ball contains another.
pub fn generate(spec: &GenerateSpec) -> Result<Instance> {
    if spec.dim == 0 || spec.count == 0 {
        return Err(CliError::Generator(
            "dim and count must be at least 1".into(),
        ));
    }
    if !spec.radius_max.is_finite() || spec.radius_max < 0.0 {
        return Err(CliError::Generator(
            "radius_max must be finite and nonnegative".into(),
        ));
    }
    let mut stream = UnitStream::new(spec.seed);
    let mut balls: Vec<Ball> = Vec::with_capacity(spec.count);
    let mut rejects = 0;
    while balls.len() < spec.count {
        let center: Vec<f64> = match spec.distribution {
            Distribution::Uniform => (0..spec.dim)
                .map(|_| -1.0 + 2.0 * stream.next_unit())
                .collect(),
        };
        let radius = spec.radius_max * stream.next_unit();
        let ball = Ball::new(&center, radius);
        if balls.iter().any(|b| nested(b, &ball)) {
            rejects += 1;
            if rejects > MAX_REJECTS {
                return Err(CliError::TooManyRejects { rejects });
            }
            continue;
        }
        balls.push(ball);
    }
    Instance::new(spec.dim, balls).map_err(|source| CliError::Instance {
        context: "generated instance".into(),
        source,
    })
}

/// Generates an instance file with provenance metadata.
pub fn generate_file(spec: &GenerateSpec, name: Option<String>) -> Result<InstanceFile> {
    let instance = generate(spec)?;
    Ok(InstanceFile::from_instance(
        &instance,
        Some(Metadata {
            seed: Some(spec.seed),
            generator: Some(GENERATOR_NAME.into()),
            name,
        }),
    ))
}
