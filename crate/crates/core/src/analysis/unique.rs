use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::engine::{ground, well_founded_model, AtomId, EngineError, GroundProgram};
use crate::ht::{program_stable_models, AtomSet};
use crate::syntax::Program;

/// Which choice subsets to visit.
#[derive(Clone, Copy, Debug)]
pub struct Sampler {
    /// Every subset is visited when there are at most this many choice atoms.
    pub limit: usize,
    /// Number of random subsets otherwise.
    pub samples: usize,
    pub seed: u64,
}

impl Default for Sampler {
    fn default() -> Self {
        Sampler { limit: 12, samples: 64, seed: 0 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UniqueSample {
    pub choice: AtomSet,
    pub total: bool,
    pub unknown: AtomSet,
    /// Stable models of the define part, when small enough to enumerate.
    pub oracle_models: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UniqueReport {
    pub exhaustive: bool,
    pub checked: usize,
    /// Subsets whose well-founded model is not total.
    pub failures: Vec<UniqueSample>,
    pub samples: Vec<UniqueSample>,
}

impl UniqueReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

fn subsets(n: usize, sampler: &Sampler) -> (bool, Vec<Vec<usize>>) {
    if n <= sampler.limit {
        let all = (0u64..1 << n).map(|m| (0..n).filter(|i| m >> i & 1 == 1).collect()).collect();
        return (true, all);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(sampler.seed);
    let picks = (0..sampler.samples)
        .map(|_| {
            let k = rand::Rng::gen_range(&mut rng, 0..=n);
            let mut v = sample(&mut rng, n, k).into_vec();
            v.sort_unstable();
            v
        })
        .collect();
    (false, picks)
}

fn check_one(g: &GroundProgram, fc: &[AtomId], pick: &[usize], max_atoms: usize) -> Result<UniqueSample, EngineError> {
    let chosen: Vec<AtomId> = pick.iter().map(|&i| fc[i]).collect();
    let define = g.with_choices(&chosen);
    let w = well_founded_model(&define)?;
    let oracle_models = if define.table.len() <= max_atoms {
        program_stable_models(&define.to_program(), max_atoms).ok().map(|m| m.len())
    } else {
        None
    };
    Ok(UniqueSample {
        choice: chosen.iter().map(|&a| g.table.name(a).to_string()).collect(),
        total: w.is_total(),
        unknown: w.unknown_set,
        oracle_models,
    })
}

/// Well-founded model of the facts, a choice subset and the define part,
/// for every (or a random sample of) choice subset.
pub fn check_unique_extension(p: &Program, sampler: &Sampler, max_atoms: usize) -> Result<UniqueReport, EngineError> {
    let g = ground(p)?;
    if let Some(c) = g.choices.iter().find(|c| !c.pos.is_empty() || !c.neg.is_empty()) {
        return Err(EngineError::NotAustere(format!("line {}: choice keeps a body after grounding", c.line)));
    }
    let fc = g.choice_atoms();
    let (exhaustive, picks) = subsets(fc.len(), sampler);
    let mut report = UniqueReport { exhaustive, checked: 0, failures: Vec::new(), samples: Vec::new() };
    for pick in picks {
        let s = check_one(&g, &fc, &pick, max_atoms)?;
        report.checked += 1;
        if !s.total {
            report.failures.push(s.clone());
        }
        report.samples.push(s);
    }
    Ok(report)
}
