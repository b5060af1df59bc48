//! Seeded random instances: a DAG over observed and latent vertices, its
//! latent projection, and the PAG of the projection's equivalence class.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::{Mark, MixedGraph};
use crate::oracle::{consensus_of, enumerate_equivalent, project_dag_to_mag, LatentDagSpec, OracleError};
use crate::vset::VertexSet;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GenConfig {
    pub observed: usize,
    pub latents: usize,
    pub edge_prob: f64,
    pub seed: u64,
    /// Equivalence classes with more MAGs than this are redrawn.
    pub mag_cap: usize,
    pub max_attempts: usize,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig { observed: 6, latents: 2, edge_prob: 0.4, seed: 0, mag_cap: 5_000, max_attempts: 1_000 }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GenError {
    #[error("no instance within {0} attempts")]
    Exhausted(usize),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

#[derive(Clone, Debug)]
pub struct Instance {
    pub dag: LatentDagSpec,
    pub mag: MixedGraph,
    pub pag: MixedGraph,
    /// Every MAG in the class, sorted.
    pub class: Vec<MixedGraph>,
    /// Draws rejected before this one.
    pub rejected: usize,
}

fn observed_label(i: usize, n: usize) -> String {
    if n <= 26 {
        char::from(b'A' + i as u8).to_string()
    } else {
        format!("V{}", i + 1)
    }
}

/// A DAG on `observed + latents` vertices: a shuffled order, then each
/// forward pair joined with probability `edge_prob`.
pub fn random_latent_dag(cfg: &GenConfig, rng: &mut ChaCha8Rng) -> LatentDagSpec {
    let total = cfg.observed + cfg.latents;
    let labels: Vec<String> = (0..cfg.observed)
        .map(|i| observed_label(i, cfg.observed))
        .chain((0..cfg.latents).map(|i| format!("L{}", i + 1)))
        .collect();
    let mut dag = MixedGraph::new(labels).expect("generated labels are distinct");
    let mut order: Vec<usize> = (0..total).collect();
    order.shuffle(rng);
    for i in 0..total {
        for j in i + 1..total {
            if rng.gen_bool(cfg.edge_prob) {
                dag.add_edge(order[i], order[j], Mark::Tail, Mark::Arrowhead).expect("fresh pair");
            }
        }
    }
    let latent: VertexSet = (cfg.observed..total).collect();
    LatentDagSpec { dag, latent }
}

/// Draws DAGs until the projection's class fits under the cap.
pub fn generate(cfg: &GenConfig) -> Result<Instance, GenError> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for rejected in 0..cfg.max_attempts {
        let dag = random_latent_dag(cfg, &mut rng);
        let mag = project_dag_to_mag(&dag)?;
        match enumerate_equivalent(&mag.circled(), &mag, cfg.mag_cap) {
            Ok(class) => {
                let pag = consensus_of(&class)?;
                return Ok(Instance { dag, mag, pag, class, rejected });
            }
            Err(OracleError::CapExceeded(_)) => continue,
            Err(e) => return Err(e.into()),
        }
    }
    Err(GenError::Exhausted(cfg.max_attempts))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_instance() {
        let cfg = GenConfig { seed: 7, ..GenConfig::default() };
        let a = generate(&cfg).unwrap();
        let b = generate(&cfg).unwrap();
        assert_eq!(a.pag, b.pag);
        assert_eq!(a.dag, b.dag);
    }

    #[test]
    fn projection_is_a_mag_and_in_its_pag() {
        for seed in 0..20 {
            let inst = generate(&GenConfig { seed, ..GenConfig::default() }).unwrap();
            assert!(inst.mag.is_mag().unwrap());
            assert!(inst.pag.marks_refined_by(&inst.mag));
        }
    }
}
