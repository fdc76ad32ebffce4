use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::{Parity, ScalarField};
use crate::grid::Grid;

type Shape = dyn Fn(f64, f64) -> f64 + Send + Sync;

/// One analytic sample `f(r, z̃)`, even in `r`, with `z̃` measured from the mid-plane.
#[derive(Clone)]
pub struct Sample {
    pub id: usize,
    f: Arc<Shape>,
}

impl std::fmt::Debug for Sample {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Sample").field("id", &self.id).finish()
    }
}

impl Sample {
    pub fn new(id: usize, f: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        Sample { id, f: Arc::new(f) }
    }

    pub fn eval(&self, r: f64, z: f64) -> f64 {
        (self.f)(r, z)
    }

    pub fn on_grid(&self, grid: &Arc<Grid>) -> Result<ScalarField> {
        let zc = grid.z_mid();
        ScalarField::from_fn(grid.clone(), Parity::Even, |r, z| self.eval(r, z - zc))
    }
}

/// Seeded generator of analytic samples. Sample `k` depends only on `(seed, k)`,
/// so the same functions are seen at every resolution.
pub trait SampleFamily: Send + Sync {
    fn name(&self) -> &'static str;
    fn sample(&self, seed: u64, index: usize) -> Sample;
}

fn rng_for(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

/// Sums of one to three axis-centred Gaussians of mixed sign.
struct GaussianBumps;

impl SampleFamily for GaussianBumps {
    fn name(&self) -> &'static str {
        "gaussian_bumps"
    }

    fn sample(&self, seed: u64, index: usize) -> Sample {
        let mut rng = rng_for(seed, index);
        let n = rng.gen_range(1..=3);
        let bumps: Vec<(f64, f64, f64)> = (0..n)
            .map(|_| {
                let amp = rng.gen_range(0.5..1.5) * if rng.gen_bool(0.3) { -1.0 } else { 1.0 };
                (amp, rng.gen_range(-2.0..2.0), rng.gen_range(0.7..1.5))
            })
            .collect();
        Sample::new(index, move |r, z| {
            bumps
                .iter()
                .map(|&(a, c, w)| a * (-(r * r + (z - c).powi(2)) / (w * w)).exp())
                .sum()
        })
    }
}

/// Gaussian envelope times a few random axial modes and a radial polynomial in `r²`.
struct RandomBandlimited;

impl SampleFamily for RandomBandlimited {
    fn name(&self) -> &'static str {
        "random_bandlimited"
    }

    fn sample(&self, seed: u64, index: usize) -> Sample {
        let mut rng = rng_for(seed, index);
        let w = rng.gen_range(1.0..1.6);
        let modes: Vec<(f64, f64, f64)> = (0..4)
            .map(|m| (rng.gen_range(-1.0..1.0), 0.5 * m as f64, rng.gen_range(0.0..std::f64::consts::TAU)))
            .collect();
        let c1 = rng.gen_range(-0.5..0.5);
        Sample::new(index, move |r, z| {
            let axial: f64 = modes.iter().map(|&(a, k, ph)| a * (k * z + ph).cos()).sum();
            let env = (-(r * r + z * z) / (w * w)).exp();
            env * axial * (1.0 + c1 * r * r / (w * w))
        })
    }
}

/// Off-axis rings, symmetrized through the axis so the sample is smooth there.
struct VortexRings;

impl SampleFamily for VortexRings {
    fn name(&self) -> &'static str {
        "vortex_rings"
    }

    fn sample(&self, seed: u64, index: usize) -> Sample {
        let mut rng = rng_for(seed, index);
        let big_r = rng.gen_range(1.0..2.0);
        let sigma = rng.gen_range(0.6..1.0);
        let c = rng.gen_range(-1.5..1.5);
        Sample::new(index, move |r, z| {
            let zz = (z - c).powi(2);
            let s2 = sigma * sigma;
            (-((r - big_r).powi(2) + zz) / s2).exp() + (-((r + big_r).powi(2) + zz) / s2).exp()
        })
    }
}

pub struct FamilyRegistry {
    entries: Vec<Box<dyn SampleFamily>>,
}

impl Default for FamilyRegistry {
    fn default() -> Self {
        FamilyRegistry {
            entries: vec![Box::new(GaussianBumps), Box::new(RandomBandlimited), Box::new(VortexRings)],
        }
    }
}

impl FamilyRegistry {
    pub fn register(&mut self, family: Box<dyn SampleFamily>) -> Result<()> {
        if self.entries.iter().any(|f| f.name() == family.name()) {
            return Err(Error::InvalidArgument(format!("family '{}' registered twice", family.name())));
        }
        self.entries.push(family);
        Ok(())
    }

    pub fn get(&self, name: &str) -> Result<&dyn SampleFamily> {
        self.entries
            .iter()
            .find(|f| f.name() == name)
            .map(|f| f.as_ref())
            .ok_or_else(|| Error::UnknownName {
                kind: "sample family",
                name: name.to_string(),
                known: self.names().join(", "),
            })
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.iter().map(|f| f.name()).collect()
    }
}
