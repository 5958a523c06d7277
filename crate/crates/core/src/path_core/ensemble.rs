use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::grid::TimeGrid;
use super::path::SamplePath;

/// Random number generator behind every generator in the crate.
pub type PathRng = ChaCha20Rng;

/// A master seed plus a stream identifier. Each (seed, stream) pair selects an
/// independent ChaCha20 stream, so paths can be generated in any order or on
/// any thread and still come out bit-identical.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StreamSeed {
    pub seed: u64,
    pub stream: u64,
}

impl StreamSeed {
    pub fn new(seed: u64, stream: u64) -> Self {
        Self { seed, stream }
    }

    pub fn rng(&self) -> PathRng {
        let mut rng = ChaCha20Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream);
        rng
    }
}

/// Anything that draws sample paths on a fixed output grid.
pub trait PathGenerator: Sync {
    fn output_grid(&self) -> &Arc<TimeGrid>;

    fn sample_with(&self, rng: &mut PathRng) -> Result<SamplePath>;

    fn sample(&self, seed: StreamSeed) -> Result<SamplePath> {
        self.sample_with(&mut seed.rng())
    }
}

/// Independent sample paths on one shared grid, with the seeds that produced
/// them.
#[derive(Debug, Clone, PartialEq)]
pub struct Ensemble {
    paths: Vec<SamplePath>,
    seed: u64,
    stream_ids: Vec<u64>,
}

impl Ensemble {
    pub fn new(paths: Vec<SamplePath>, seed: u64, stream_ids: Vec<u64>) -> Result<Self> {
        let first = paths
            .first()
            .ok_or_else(|| Error::Data("an ensemble needs at least one path".into()))?;
        if stream_ids.len() != paths.len() {
            return Err(Error::Data(format!(
                "{} stream ids for {} paths",
                stream_ids.len(),
                paths.len()
            )));
        }
        let grid = first.grid();
        if paths
            .iter()
            .any(|p| !Arc::ptr_eq(p.grid(), grid) && **p.grid() != **grid)
        {
            return Err(Error::Data("ensemble paths must share one grid".into()));
        }
        Ok(Self {
            paths,
            seed,
            stream_ids,
        })
    }

    /// Draws `n_paths` paths with streams `0..n_paths` of `seed`, in parallel.
    pub fn generate<G: PathGenerator + ?Sized>(
        generator: &G,
        seed: u64,
        n_paths: usize,
    ) -> Result<Self> {
        let stream_ids: Vec<u64> = (0..n_paths as u64).collect();
        Self::generate_streams(generator, seed, stream_ids)
    }

    pub fn generate_streams<G: PathGenerator + ?Sized>(
        generator: &G,
        seed: u64,
        stream_ids: Vec<u64>,
    ) -> Result<Self> {
        let paths = stream_ids
            .par_iter()
            .map(|&s| generator.sample(StreamSeed::new(seed, s)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(paths, seed, stream_ids)
    }

    /// Applies `f` to every path, keeping the seed lineage.
    pub fn map_paths<F>(&self, f: F) -> Result<Self>
    where
        F: Fn(&SamplePath) -> Result<SamplePath> + Sync,
    {
        let paths = self.paths.par_iter().map(&f).collect::<Result<Vec<_>>>()?;
        Self::new(paths, self.seed, self.stream_ids.clone())
    }

    pub fn paths(&self) -> &[SamplePath] {
        &self.paths
    }

    pub fn into_paths(self) -> Vec<SamplePath> {
        self.paths
    }

    pub fn grid(&self) -> &Arc<TimeGrid> {
        self.paths[0].grid()
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_ids(&self) -> &[u64] {
        &self.stream_ids
    }

    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    /// Values of every path at grid time `t`.
    pub fn column(&self, t: f64) -> Result<Vec<f64>> {
        let i = self.grid().locate(t)?;
        Ok(self.column_at(i))
    }

    pub fn column_at(&self, index: usize) -> Vec<f64> {
        self.paths.iter().map(|p| p.values()[index]).collect()
    }
}
