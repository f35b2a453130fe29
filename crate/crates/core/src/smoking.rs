//! The smoking, ashtray and cancer network.
//!
//! Smoking has prior `0.3`. An ashtray is present with probability `0.95`
//! for smokers and `0.25` otherwise; cancer has probability `0.4` and
//! `0.05` respectively. Given an ashtray, the cancer posterior is computed
//! twice: by conditioning the joint state, and by pulling the evidence back
//! to smoking and pushing the updated belief through the cancer channel.

use serde::Serialize;

use crate::classical::{Dist, FuzzyPred, Space, StochChannel};
use crate::error::Result;

#[derive(Clone, Debug, Serialize)]
pub struct SmokingReport {
    pub smoking: Dist,
    pub ashtray: Dist,
    pub cancer: Dist,
    /// On `ashtray × smoking × cancer`.
    pub joint: Dist,
    pub crossover: Dist,
    pub channel_path: Dist,
}

impl SmokingReport {
    /// Largest probability difference between the two posteriors.
    pub fn path_gap(&self) -> f64 {
        self.crossover.max_deviation(&self.channel_path)
    }
}

pub fn smoking_example() -> Result<SmokingReport> {
    let b = Space::boolean();
    let smoking = Dist::new(b.clone(), vec![0.3, 0.7])?;
    let ashtray_ch = StochChannel::from_truth_probs(b.clone(), &[0.95, 0.25])?;
    let cancer_ch = StochChannel::from_truth_probs(b.clone(), &[0.4, 0.05])?;
    let id = StochChannel::identity(b.clone());

    let joint = StochChannel::tuple(&[&ashtray_ch, &id, &cancer_ch])?.push(&smoking)?;
    let tt = FuzzyPred::point(b.clone(), 0)?;
    let evidence = tt
        .tensor(&FuzzyPred::truth(b.clone()))
        .tensor(&FuzzyPred::truth(b));
    let crossover = joint
        .condition(&evidence)?
        .marginal(&[false, false, true])?;
    let channel_path = cancer_ch.push(&smoking.condition(&ashtray_ch.pull(&tt)?)?)?;

    Ok(SmokingReport {
        ashtray: ashtray_ch.push(&smoking)?,
        cancer: cancer_ch.push(&smoking)?,
        smoking,
        joint,
        crossover,
        channel_path,
    })
}
